#![allow(clippy::field_reassign_with_default)]

mod common;

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use hedrop::heprops::{Isotope, IsotopeProperties};
use hedrop::modes::{surface_mode_frequency, Drop};
use hedrop::numerics::quad::adaptive_simpson;
use hedrop::rotation::rotational_bulge;
use hedrop::rovib::*;
use hedrop::Error;
use num_complex::Complex;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn max_diff(a: &CMat5<f64>, b: &CMat5<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..5 {
        for j in 0..5 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

fn identity() -> CMat5<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }))
}

fn adjoint(a: &CMat5<f64>) -> CMat5<f64> {
    cmat5_transpose(a).map(|r| r.map(|z| z.conj()))
}

fn commutator(a: &CMat5<f64>, b: &CMat5<f64>) -> CMat5<f64> {
    let ab = cmat5_mul(a, b);
    let ba = cmat5_mul(b, a);
    std::array::from_fn(|i| std::array::from_fn(|j| ab[i][j] - ba[i][j]))
}

fn drop(iso: Isotope, radius: f64) -> Drop<f64> {
    Drop::new(Arc::new(IsotopeProperties::bundled(iso).unwrap()), radius, 0.3).unwrap()
}

fn unit() -> RovibParams<f64> {
    RovibParams::dimensionless()
}

#[test]
fn basis_functions_are_normalised_on_the_unit_sphere() {
    for m in -2..=2 {
        let inner = |theta: f64| {
            let ring = |phi: f64| {
                let r = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
                basis_phi(m, r).norm_sqr()
            };
            adaptive_simpson(ring, 0.0, TAU, 1e-12).unwrap() * theta.sin()
        };
        let total = adaptive_simpson(inner, 0.0, PI, 1e-10).unwrap();
        assert!((total - 1.0).abs() < 1e-8, "m = {m}: {total}");
    }
}

#[test]
fn basis_values_and_homogeneity() {
    let (n0, _, _) = normalisation::<f64>();
    assert!((basis_phi(0, [1.0, 0.0, 0.0]).re - 0.25 * (5.0 / PI).sqrt()).abs() < 1e-15);
    assert!((n0 - 0.25 * (5.0 / PI).sqrt()).abs() < 1e-15);
    let r = [0.3, -0.7, 0.4];
    for m in -2..=2 {
        let scaled = basis_phi(m, r.map(|x| 2.0 * x));
        assert!((scaled - basis_phi(m, r) * 4.0).norm() < 1e-14);
    }
}

#[test]
fn rotation_matrix_is_identity_at_zero_and_unitary() {
    let w0 = rotation_matrix_w(&EulerAngles::new(0.0, 0.0, 0.0));
    assert!(max_diff(&w0, &identity()) < 1e-14);
    let mut runner = common::sampler();
    for _ in 0..20 {
        let st = common::random_state(&mut runner);
        let w = rotation_matrix_w(&st.euler);
        let wtw = cmat5_mul(&adjoint(&w), &w);
        assert!(max_diff(&wtw, &identity()) < 1e-12);
    }
}

#[test]
fn rotation_matrix_satisfies_defining_relation_and_is_a_homomorphism() {
    let mut runner = common::sampler();
    for _ in 0..10 {
        let a = common::random_state(&mut runner).euler;
        let b = common::random_state(&mut runner).euler;
        let (ga, gb) = (a.to_matrix(), b.to_matrix());
        let wa = wigner_from_matrix(&ga);
        let composed = wigner_from_matrix(&hedrop::numerics::linalg::mat3_mul(&ga, &gb));
        let product = cmat5_mul(&wa, &wigner_from_matrix(&gb));
        assert!(max_diff(&composed, &product) < 1e-12);

        // φ_m(g⁻¹ r) = Σ_k W_km φ_k(r)
        let r = [0.4, -0.2, 0.9];
        let ginv_r = hedrop::numerics::linalg::mat3_vec(&hedrop::numerics::linalg::mat3_transpose(&ga), &r);
        for m in -2..=2 {
            let lhs = basis_phi(m, ginv_r);
            let rhs = (-2..=2).fold(c(0.0, 0.0), |acc, k| acc + wa[(k + 2) as usize][(m + 2) as usize] * basis_phi(k, r));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}

#[test]
fn z_rotation_is_diagonal_phase() {
    let alpha = 0.83;
    let w = rotation_matrix_w(&EulerAngles::new(alpha, 0.0, 0.0));
    for m in -2..=2_i32 {
        for k in -2..=2_i32 {
            let v = w[(k + 2) as usize][(m + 2) as usize];
            let expected = if k == m { Complex::from_polar(1.0, -(m as f64) * alpha) } else { c(0.0, 0.0) };
            assert!((v - expected).norm() < 1e-13, "k={k} m={m}: {v}");
        }
    }
}

#[test]
fn generators_match_definition_and_close_under_commutation() {
    let k = generator_set::<f64>();
    for m in -2..=2_i32 {
        assert_eq!(k.k[2][(m + 2) as usize][(m + 2) as usize], c(0.0, m as f64));
    }
    // the numerical z-generator agrees with the exact one
    assert!(max_diff(&numerical_generator(2), &k.k[2]) < 1e-10);

    // W(ε about x) − (I − ε K(1)ᵀ) is second order in ε
    let err = |eps: f64| {
        let w = wigner_from_matrix(&axis_rotation(0, eps));
        let kt = cmat5_transpose(&k.k[0]);
        let approx: CMat5<f64> = std::array::from_fn(|i| {
            std::array::from_fn(|j| identity()[i][j] - kt[i][j] * eps)
        });
        max_diff(&w, &approx)
    };
    let ratio = err(1e-3) / err(5e-4);
    assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");

    // anti-Hermitian
    for ks in &k.k {
        let sum: CMat5<f64> = std::array::from_fn(|i| std::array::from_fn(|j| ks[i][j] + ks[j][i].conj()));
        assert!(max_diff(&sum, &[[c(0.0, 0.0); 5]; 5]) < 1e-10);
    }

    // [K1, K2] = K3 and cyclic
    for (a, b, r) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        assert!(max_diff(&commutator(&k.k[a], &k.k[b]), &k.k[r]) < 1e-10);
    }
}

#[test]
fn lagrangian_special_cases() {
    let p = unit();
    assert_eq!(lagrangian(&RotorVibState::default(), &p).unwrap(), 0.0);

    // pure z-spin with only X₀: spin-bulge term equals (I/4)√(5/π) X₀ Ω²
    let (omega, x0) = (0.7, 0.02);
    let mut st = RotorVibState::default();
    st.euler_rates = [omega, 0.0, 0.0];
    st.x_rot = DeformationAmplitudes::from_nonnegative(x0, c(0.0, 0.0), c(0.0, 0.0));
    let l = lagrangian(&st, &p).unwrap();
    let expected = 0.5 * p.inertia * omega * omega + 0.25 * p.inertia * (5.0 / PI).sqrt() * x0 * omega * omega
        - 2.0 * p.sigma * x0 * x0;
    assert!((l - expected).abs() < 1e-14);

    // no rotation: decoupled oscillators
    let mut st = RotorVibState::default();
    st.euler = EulerAngles::new(0.2, 0.9, 1.3);
    st.x_rot = DeformationAmplitudes::from_nonnegative(0.01, c(0.02, -0.01), c(0.0, 0.03));
    st.x_rot_rates = DeformationAmplitudes::from_nonnegative(-0.1, c(0.05, 0.02), c(0.01, 0.0));
    let l = lagrangian(&st, &p).unwrap();
    let expected = 0.25 * p.rho * st.x_rot_rates.norm_sqr() - 2.0 * p.sigma * st.x_rot.norm_sqr();
    assert!((l - expected).abs() < 1e-15);
}

#[test]
fn harmonic_limit_matches_rayleigh_frequency() {
    for iso in Isotope::ALL {
        let d = drop(iso, 1e-3);
        let p = unit();
        let scales = RovibScales::for_drop(&d);
        // kinetic ρ/4 and potential 2σ per |X|² give ω² = 8σ/ρR³
        let omega = scales.angular_frequency_to_si(p.omega_vib());
        let rayleigh = surface_mode_frequency(&d, 2);
        assert!((omega / rayleigh - 1.0).abs() < 1e-14);
    }
}

#[test]
fn lab_and_rotating_frame_lagrangians_agree() {
    let p = unit();
    let sys = Rovib::new(p).unwrap();
    let mut runner = common::sampler();
    for _ in 0..100 {
        let st = common::random_state(&mut runner);
        let lab = sys.lab_lagrangian(&st).unwrap();
        let body = body_lagrangian(&st, &p).unwrap();
        assert!((lab - body).abs() <= 1e-12 * lab.abs().max(1.0), "{lab} vs {body}");
    }
}

#[test]
fn equations_of_motion_pass_action_audit() {
    let sys = Rovib::new(unit()).unwrap();
    let mut runner = common::sampler();
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let st = common::random_state(&mut runner);
        worst = worst.max(action_residual(&sys, &st).unwrap());
    }
    assert!(worst < 1e-6, "worst residual {worst:e}");
}

#[test]
fn action_audit_detects_wrong_accelerations() {
    let sys = Rovib::new(unit()).unwrap();
    let mut runner = common::sampler();
    let st = common::random_state(&mut runner);
    let mut acc = coordinate_accelerations(&sys, &st).unwrap();
    acc[4] += 1e-3;
    assert!(euler_lagrange_residual(&sys, &st, &acc).unwrap() > 1e-5);
}

#[test]
fn equations_of_motion_reject_gimbal_lock_and_broken_reality() {
    let p = unit();
    let mut st = RotorVibState::default();
    st.euler_rates = [0.1, 0.0, 0.0];
    assert!(matches!(equations_of_motion(&st, &p), Err(Error::KinematicSingularity { .. })));

    st.euler.beta = 1.0;
    st.x_rot.x[0] = c(0.01, 0.0);
    assert!(matches!(
        equations_of_motion(&st, &p),
        Err(Error::RealityConstraint { m: 2, .. })
    ));
    assert!(lagrangian(&st, &p).is_err());
}

#[test]
fn spinning_equilibrium_is_stationary() {
    let p = unit();
    let omega = 0.3;
    let x = equilibrium_bulge(omega, &p).unwrap();
    let mut st = RotorVibState::default();
    st.euler = EulerAngles::new(0.0, 1.0, 0.0);
    // pure body-z spin at β = 1: Ω_lab = ω g ẑ, which is the γ-rate column
    st.euler_rates = [0.0, 0.0, omega];
    st.x_rot = x;
    let r = equations_of_motion(&st, &p).unwrap();
    assert!(r.x_accel.max_abs() < 1e-14);
    assert!(r.euler_accel.iter().all(|a| a.abs() < 1e-14));

    let tr = integrate(&st, &p, 50.0, 1e-10).unwrap();
    for s in &tr.samples {
        assert!((s.x_rot.get(0).re - x.get(0).re).abs() < 1e-10);
        assert!(s.x_rot.get(1).norm() < 1e-10 && s.x_rot.get(2).norm() < 1e-10);
    }
}

#[test]
fn zero_state_stays_zero() {
    let tr = integrate(&RotorVibState::default(), &unit(), 20.0, 1e-9).unwrap();
    for s in &tr.samples {
        assert_eq!(s.x_rot.max_abs(), 0.0);
        assert_eq!(s.omega_lab, [0.0; 3]);
        assert_eq!(s.energy, 0.0);
    }
}

#[test]
fn non_rotating_bulge_oscillates_at_vibration_frequency() {
    let p = unit();
    let w = p.omega_vib();
    let x0 = 1e-3;
    let mut st = RotorVibState::default();
    st.x_rot = DeformationAmplitudes::from_nonnegative(x0, c(0.0, 0.0), c(0.0, 0.0));
    let period = TAU / w;
    let times: Vec<f64> = (0..=8).map(|i| period * i as f64 / 8.0).collect();
    let tr = integrate_with(&st, &p, &times, 1e-11, hedrop::numerics::ode::Method::Dop853).unwrap();
    for s in &tr.samples {
        let expected = x0 * (w * s.t).cos();
        assert!((s.x_rot.get(0).re - expected).abs() < 1e-12, "t = {}", s.t);
    }
}

#[test]
fn trajectory_conserves_energy_and_angular_momentum() {
    let p = unit();
    let mut st = RotorVibState::default();
    st.euler = EulerAngles::new(0.3, 1.0, 0.7);
    st.euler_rates = [0.2, -0.1, 0.3];
    st.x_rot = DeformationAmplitudes::from_nonnegative(0.01, c(0.004, -0.003), c(0.002, 0.005));
    st.x_rot_rates = DeformationAmplitudes::from_nonnegative(-0.02, c(0.01, 0.003), c(-0.01, 0.02));
    let t_end = 1000.0 * TAU / p.omega_vib();
    let tr = integrate(&st, &p, t_end, 1e-10).unwrap();
    assert!(tr.max_energy_drift() < 1e-8, "{:e}", tr.max_energy_drift());
    assert!(tr.max_angular_momentum_drift() < 1e-8, "{:e}", tr.max_angular_momentum_drift());

    // reality is structural, and reported amplitudes respect it
    for s in &tr.samples {
        assert!(s.x_rot.reality_residual().1 < 1e-10);
    }
    let csv = tr.to_csv();
    assert!(csv.starts_with(ROVIB_CSV_HEADER));
    assert_eq!(csv.lines().count(), tr.samples.len() + 1);
}

#[test]
fn orientation_obeys_transport_equation() {
    let p = unit();
    let mut runner = common::sampler();
    let st = common::random_state(&mut runner);
    let k = generator_set::<f64>();
    let dt = 5e-3;
    for t in [0.5, 2.0, 7.5] {
        let times: Vec<f64> = (-2..=2).map(|i| t + dt * i as f64).collect();
        let tr = integrate_with(&st, &p, &times, 2e-12, hedrop::numerics::ode::Method::Dop853).unwrap();
        let w: Vec<CMat5<f64>> = tr.samples.iter().map(|s| rotation_matrix_w(&s.euler)).collect();
        let kw = cmat5_mul(&cmat5_transpose(&k.contract(tr.samples[2].omega_lab)), &w[2]);
        let mut worst = 0.0_f64;
        for i in 0..5 {
            for j in 0..5 {
                // five-point central difference
                let dw = (w[0][i][j] - w[1][i][j] * 8.0 + w[3][i][j] * 8.0 - w[4][i][j]) / (12.0 * dt);
                worst = worst.max((dw + kw[i][j]).norm());
            }
        }
        assert!(worst < 1e-8, "t = {t}: {worst:e}");
    }
}

#[test]
fn equilibrium_bulge_matches_rotational_bulge() {
    let d = drop(Isotope::He3, 1e-3);
    let p = unit();
    let scales = RovibScales::for_drop(&d);
    let omega_si = TAU * 1.0;
    let x = equilibrium_bulge(scales.angular_frequency_from_si(omega_si), &p).unwrap();
    let delta_r = equatorial_bulge(&x) * scales.length;
    let reference = rotational_bulge(&d, omega_si).unwrap();
    assert!((delta_r / reference - 1.0).abs() < 1e-10, "{delta_r} vs {reference}");
    assert!((delta_r - 8.8e-7).abs() < 0.1e-7);

    // closed form for X₀ and the other amplitudes vanish
    let w = 0.2;
    let x = equilibrium_bulge(w, &unit()).unwrap();
    let closed = unit().inertia / 16.0 * (5.0 / PI).sqrt() * w * w;
    assert!((x.get(0).re / closed - 1.0).abs() < 1e-14);
    assert!(x.get(1).norm() == 0.0 && x.get(2).norm() == 0.0);
    assert_eq!(equilibrium_bulge(0.0, &unit()).unwrap().max_abs(), 0.0);
    let x2 = equilibrium_bulge(2.0 * w, &unit()).unwrap();
    assert!((x2.get(0).re / x.get(0).re - 4.0).abs() < 1e-13);
    assert!(matches!(equilibrium_bulge(2.0, &unit()), Err(Error::InstabilityGuard { .. })));
}

#[test]
fn spin_splits_the_multiplet_by_minus_m_over_two() {
    let p = unit();
    let w = p.omega_vib();
    let bryan = linearized_spectrum(1e-3 * w, &p).unwrap();
    let slopes = bryan.slopes.unwrap();
    for (i, m) in (-2..=2).enumerate() {
        let target = -(m as f64) / 2.0;
        assert!((slopes[i] - target).abs() < 0.01 * target.abs().max(0.5), "m = {m}: {}", slopes[i]);
    }
    // antisymmetric in m at linear order: the symmetric part is quadratic in Ω
    let half = linearized_spectrum(0.5e-3 * w, &p).unwrap();
    for m in 1..=2 {
        let symmetric = |s: &BryanSpectrum<f64>| s.frequencies[2 + m] + s.frequencies[2 - m] - 2.0 * w;
        let antisym = bryan.frequencies[2 + m] - bryan.frequencies[2 - m];
        assert!(symmetric(&bryan).abs() < 2e-3 * antisym.abs());
        assert!((symmetric(&bryan) / symmetric(&half) - 4.0).abs() < 0.05);
    }
    assert!(bryan.block_leakage < 1e-8);
    assert!(bryan.multiplicity.iter().all(|&n| n == 1));
    let lab = bryan.lab_slopes().unwrap();
    for (i, m) in (-2..=2).enumerate() {
        assert!((lab[i] - m as f64 / 2.0).abs() < 0.01 * 0.5_f64.max((m as f64 / 2.0).abs()));
    }
}

#[test]
fn zero_spin_spectrum_is_fivefold_degenerate() {
    let d = drop(Isotope::He4, 1e-3);
    let p = unit();
    let bryan = linearized_spectrum(0.0, &p).unwrap();
    assert!(bryan.slopes.is_none());
    assert_eq!(bryan.multiplicity, [5; 5]);
    let scales = RovibScales::for_drop(&d);
    let rayleigh = surface_mode_frequency(&d, 2);
    for f in bryan.frequencies {
        assert!((scales.angular_frequency_to_si(f) / rayleigh - 1.0).abs() < 1e-6);
    }
}

#[test]
fn single_precision_instantiation_agrees() {
    let p32 = RovibParams::<f32>::dimensionless();
    let x32 = equilibrium_bulge(0.2_f32, &p32).unwrap();
    let x64 = equilibrium_bulge(0.2_f64, &unit()).unwrap();
    assert!((x32.get(0).re as f64 / x64.get(0).re - 1.0).abs() < 1e-5);
    let bryan = linearized_spectrum(0.01_f32, &p32).unwrap();
    assert!((bryan.frequencies[2] as f64 / 8f64.sqrt() - 1.0).abs() < 1e-3);
}
