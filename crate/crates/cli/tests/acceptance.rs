//! Numerical acceptance: one PASS/FAIL line per criterion, then a single
//! assertion that all passed.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::sync::Arc;

use hedrop::evap::{integrate_cooling_with, wgm_drift_rate_per_watt, CoolingOptions, CoolingState};
use hedrop::heprops::{Isotope, IsotopeProperties};
use hedrop::mechloss::q_viscous;
use hedrop::modes::{sound_mode_frequency, surface_mode_frequency, zpf_amplitude, Drop};
use hedrop::optics::{
    coupling_g0, estimate_l, q_surface_scattering, q_surface_scattering_quadrature, q_total, wgm_splitting,
    ScatteringInputs, WgmMode,
};
use hedrop::rotation::{angular_momentum, noise_budget, qnd_budget, rotational_bulge, DEFAULT_SCATTER_FRACTION};
use hedrop::rovib::{
    action_residual, equatorial_bulge, equilibrium_bulge, integrate, linearized_spectrum, DeformationAmplitudes,
    EulerAngles, RotorVibState, Rovib, RovibParams, RovibScales,
};
use num_complex::Complex;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Accumulates the verdict of the individual checks inside one criterion.
#[derive(Default)]
struct Checks {
    ok: bool,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.ok &= pass;
        let mark = if pass { "" } else { " [miss]" };
        self.notes.push(format!("{name} {detail}{mark}"));
    }

    /// `|v/target − 1| ≤ rel`
    fn within(&mut self, name: &str, v: f64, target: f64, rel: f64) {
        let dev = (v / target - 1.0).abs();
        self.check(name, dev <= rel, format!("= {v:.4e} (target {target:.3e} +/- {:.0}%)", rel * 100.0));
    }

    /// `target/f ≤ v ≤ target·f`
    fn factor(&mut self, name: &str, v: f64, target: f64, f: f64) {
        let pass = v >= target / f && v <= target * f;
        self.check(name, pass, format!("= {v:.4e} (target {target:.1e} within x{f})"));
    }

    fn range(&mut self, name: &str, v: f64, lo: f64, hi: f64) {
        self.check(name, (lo..=hi).contains(&v), format!("= {v:.4e} (in [{lo:.2e}, {hi:.2e}])"));
    }

    fn below(&mut self, name: &str, v: f64, limit: f64) {
        self.check(name, v < limit, format!("= {v:.3e} (< {limit:.0e})"));
    }

    fn done(self) -> Outcome {
        Ok((self.ok, self.notes.join("; ")))
    }
}

fn iso(i: Isotope) -> Arc<IsotopeProperties<f64>> {
    Arc::new(IsotopeProperties::bundled(i).expect("bundled tables"))
}

fn drop(i: Isotope, radius: f64, t: f64) -> Result<Drop<f64>, String> {
    Drop::new(iso(i), radius, t).map_err(|e| e.to_string())
}

fn golden() -> BTreeMap<String, f64> {
    let text = fs::read_to_string(common::fixtures_dir().join("golden.json")).expect("golden.json");
    serde_json::from_str(&text).expect("golden.json parses")
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn parameter_table() -> Outcome {
    let d = drop(Isotope::He4, 1e-3, 0.3)?;
    let loss = q_total(&d, 1e-6).map_err(e)?;
    let wgm = WgmMode::equatorial(&d, 1e-6, loss.q_total).map_err(e)?;
    let w_vib = surface_mode_frequency(&d, 2);
    let g0 = coupling_g0(&d, &wgm).map_err(e)?;
    let mut c = Checks::new();
    c.within("f_vib/Hz", w_vib / TAU, 23.0, 0.02);
    c.within("g0/2pi/Hz", g0 / TAU, 213.0, 0.03);
    c.range("Q_opt", loss.q_total, 3.5e10, 4.5e10);
    c.check("g0 > omega_vib", g0 > w_vib, format!("({:.1} > {:.1} rad/s)", g0, w_vib));
    c.done()
}

fn zero_point_amplitude() -> Outcome {
    let d = drop(Isotope::He4, 1e-3, 0.3)?;
    let mut c = Checks::new();
    c.within("X_ZPF/m", zpf_amplitude(&d).x_zpf, 2.2e-15, 0.03);
    c.done()
}

fn sound_mode() -> Outcome {
    let d = drop(Isotope::He4, 1e-3, 0.3)?;
    let mut lowest = f64::INFINITY;
    for l in 0..=10 {
        lowest = lowest.min(sound_mode_frequency(&d, 1, l).map_err(e)?.frequency);
    }
    let mut c = Checks::new();
    c.within("lowest compressional mode/Hz", lowest / TAU, 120e3, 0.02);
    c.done()
}

fn splitting() -> Outcome {
    let d = drop(Isotope::He4, 1e-3, 0.3)?;
    let s = wgm_splitting(&d, estimate_l(&d, 1e-6), 0.01 * d.radius(), 1e-6).map_err(e)?;
    let mut c = Checks::new();
    c.range("bandwidth/Hz", s.bandwidth / TAU, 1e12, 1e13);
    c.check("bandwidth/FSR > 10", s.bandwidth_over_fsr > 10.0, format!("= {:.1}", s.bandwidth_over_fsr));
    c.done()
}

fn cooling() -> Outcome {
    let mut c = Checks::new();
    for (i, t0, at1, at60) in [(Isotope::He4, 4.0, 0.35, 0.29), (Isotope::He3, 2.5, 0.20, 0.15)] {
        let props = iso(i);
        let atoms = Drop::new(props.clone(), 1e-3, t0).map_err(e)?.atom_count();
        let opts = CoolingOptions {
            extra_times: vec![1.0, 60.0],
            ..CoolingOptions::default()
        };
        let state = CoolingState {
            t: 0.0,
            temperature: t0,
            atoms,
        };
        let tr = integrate_cooling_with(state, props, 0.0, 60.0, 1e-8, &opts).map_err(e)?;
        let s1 = tr.at(1.0).ok_or("no sample at 1 s")?;
        let s60 = tr.at(60.0).ok_or("no sample at 60 s")?;
        c.within(&format!("{i} T(1 s)/K"), s1.temperature, at1, 0.15);
        c.within(&format!("{i} T(60 s)/K"), s60.temperature, at60, 0.15);
        let shrink = 100.0 * (1.0 - s60.radius / 1e-3);
        c.check(
            &format!("{i} shrinkage"),
            (shrink - 10.0).abs() <= 3.0,
            format!("= {shrink:.2}% (10 +/- 3 points)"),
        );
    }
    let he4 = wgm_drift_rate_per_watt(&drop(Isotope::He4, 1e-3, 0.3)?, 1e-6).map_err(e)?;
    let he3 = wgm_drift_rate_per_watt(&drop(Isotope::He3, 1e-3, 0.3)?, 1e-6).map_err(e)?;
    c.factor("He4 drift per W/(Hz/s/W)", he4, 1e16, 3.0);
    c.range("He3/He4 drift ratio", he3 / he4, 2.5, 6.0);
    c.done()
}

fn qnd() -> Outcome {
    let d3 = drop(Isotope::He3, 1e-3, 0.13)?;
    let d4 = drop(Isotope::He4, 1e-3, 0.13)?;
    let wgm = WgmMode::equatorial(&d3, 1e-6, 1e10).map_err(e)?;
    let wgm4 = WgmMode::equatorial(&d4, 1e-6, 1e10).map_err(e)?;
    let l_z = angular_momentum(&d3, TAU);
    let b = qnd_budget(&d3, &wgm, l_z, 10e-6, DEFAULT_SCATTER_FRACTION).map_err(e)?;
    let b4 = qnd_budget(&d4, &wgm4, l_z, 10e-6, DEFAULT_SCATTER_FRACTION).map_err(e)?;
    let mut c = Checks::new();
    c.within("g_L/omega_opt", b.g_l / wgm.frequency(), 1.3e-47, 0.05);
    c.within("L_z/hbar", b.l_over_hbar, 8e21, 0.05);
    c.within("detuning/2pi/Hz", b.detuning / TAU, 6e-11, 0.10);
    c.within("He3 sqrt(S_L)", b.sqrt_s_l, 3e7, 0.20);
    c.within("He4 sqrt(S_L)", b4.sqrt_s_l, 1.4e8, 0.20);
    c.range("t_meas/s", b.t_meas, 0.03e-6, 0.3e-6);
    c.done()
}

fn noise() -> Outcome {
    let d = drop(Isotope::He3, 1e-3, 0.13)?;
    let cold = drop(Isotope::He3, 1e-3, 0.1)?;
    let wgm = WgmMode::equatorial(&d, 1e-6, 1e10).map_err(e)?;
    let t_meas = 0.1e-6;
    let n = noise_budget(&d, &wgm, 10e-6, DEFAULT_SCATTER_FRACTION, t_meas).map_err(e)?;
    let kick = noise_budget(&cold, &wgm, 10e-6, DEFAULT_SCATTER_FRACTION, t_meas).map_err(e)?.single_atom_kick;
    let spread = qnd_budget(&d, &wgm, angular_momentum(&d, TAU), 10e-6, DEFAULT_SCATTER_FRACTION)
        .map_err(e)?
        .heisenberg_spread;
    let mut c = Checks::new();
    c.factor("number-noise shift/Hz", n.evap_number_shift_hz, 1e-3, 3.0);
    c.factor("single-atom kick/hbar", kick, 1e6, 2.0);
    c.factor("evaporative walk/hbar", n.evap_l_kick, 1e9, 3.0);
    c.factor("photon walk/hbar", n.photon_l_kick, 4e6, 2.0);
    let worst = [kick, n.single_atom_kick, n.evap_l_kick, n.per_photon_kick, n.photon_l_kick]
        .into_iter()
        .fold(0.0, f64::max);
    c.check(
        "all terms < sqrt(hbar L)",
        worst < spread,
        format!("(largest {worst:.2e} vs {spread:.2e})"),
    );
    c.done()
}

fn rovib() -> Outcome {
    let p = RovibParams::<f64>::dimensionless();
    let w = p.omega_vib();
    let mut c = Checks::new();

    // (a) stationarity of the Lagrangian against the force balance
    let d = drop(Isotope::He3, 1e-3, 0.13)?;
    let scales = RovibScales::for_drop(&d);
    let x = equilibrium_bulge(scales.angular_frequency_from_si(TAU), &p).map_err(e)?;
    let bulge = equatorial_bulge(&x) * scales.length;
    let reference = rotational_bulge(&d, TAU).map_err(e)?;
    c.below("(a) bulge rel. error", (bulge / reference - 1.0).abs(), 1e-10);

    // (b) Bryan slopes
    let bryan = linearized_spectrum(1e-3 * w, &p).map_err(e)?;
    let slopes = bryan.slopes.ok_or("no slopes")?;
    let worst = (-2..=2)
        .zip(slopes)
        .map(|(m, s)| {
            let target = -(m as f64) / 2.0;
            (s - target).abs() / target.abs().max(0.5)
        })
        .fold(0.0, f64::max);
    c.below("(b) worst slope deviation from -m/2", worst, 1e-2);

    // (c) conservation over a thousand vibration periods
    let cx = |re: f64, im: f64| Complex::new(re, im);
    let st = RotorVibState {
        euler: EulerAngles::new(0.3, 1.0, 0.7),
        euler_rates: [0.2, -0.1, 0.3],
        x_rot: DeformationAmplitudes::from_nonnegative(0.01, cx(0.004, -0.003), cx(0.002, 0.005)),
        x_rot_rates: DeformationAmplitudes::from_nonnegative(-0.02, cx(0.01, 0.003), cx(-0.01, 0.02)),
    };
    let tr = integrate(&st, &p, 1000.0 * TAU / w, 1e-10).map_err(e)?;
    c.below("(c) energy drift", tr.max_energy_drift(), 1e-8);
    c.below("(c) L_lab drift", tr.max_angular_momentum_drift(), 1e-8);

    // (d) finite-difference audit
    let sys = Rovib::new(p).map_err(e)?;
    let mut runner = common::sampler();
    let mut audit = 0.0_f64;
    for _ in 0..100 {
        audit = audit.max(action_residual(&sys, &common::random_state(&mut runner)).map_err(e)?);
    }
    c.below("(d) action audit on 100 states", audit, 1e-6);

    // (e) non-rotating limit
    let d4 = drop(Isotope::He4, 1e-3, 0.3)?;
    let s4 = RovibScales::for_drop(&d4);
    let still = linearized_spectrum(0.0, &p).map_err(e)?;
    let rayleigh = surface_mode_frequency(&d4, 2);
    let dev = still
        .frequencies
        .iter()
        .map(|&f| (s4.angular_frequency_to_si(f) / rayleigh - 1.0).abs())
        .fold(0.0, f64::max);
    c.below("(e) omega_vib rel. error", dev, 1e-6);
    c.done()
}

fn loss_models() -> Outcome {
    let mut c = Checks::new();
    let base = drop(Isotope::He4, 1e-3, 0.3)?;
    let mut worst: f64 = 1.0;
    for k in 0..=8 {
        let r = 0.1e-3 * 50f64.powf(k as f64 / 8.0);
        let d = base.with_radius(r).map_err(e)?;
        let ratio = q_surface_scattering_quadrature(&d, 1e-6).map_err(e)? / q_surface_scattering(&d, 1e-6);
        if (ratio.ln()).abs() > worst.ln().abs() {
            worst = ratio;
        }
    }
    c.factor("quadrature/closed form (worst over 0.1-5 mm)", worst, 1.0, 2.0);

    let conf = fs::read_to_string(common::data_dir().join("h2_drop.conf")).map_err(e)?;
    let h2 = ScatteringInputs::<f64>::from_conf(&conf).map_err(e)?.q_surface_scattering();
    c.factor("H2 drop Q", h2, 2e8, 2.0);

    let q = q_viscous(&drop(Isotope::He3, 1e-3, 1.0)?, 2).map_err(e)?;
    let oracle = golden()["chandrasekhar_q_he3_1mm_l2_1K"];
    c.below("Chandrasekhar Q vs oracle (rel.)", (q / oracle - 1.0).abs(), 1e-6);
    c.done()
}

fn determinism() -> Outcome {
    let dirs = [tempfile::tempdir().map_err(e)?, tempfile::tempdir().map_err(e)?];
    for d in &dirs {
        let out = common::run(&["figures", "--out", d.path().to_str().ok_or("path")?]);
        if !out.status.success() {
            return Err(format!("figures failed: {}", common::stderr(&out)));
        }
    }
    let mut c = Checks::new();
    for name in ["table1.json", "fig2.csv", "fig3.csv", "fig4.csv"] {
        let a = fs::read(dirs[0].path().join(name)).map_err(e)?;
        let b = fs::read(dirs[1].path().join(name)).map_err(e)?;
        c.check(name, a == b && !a.is_empty(), format!("{} bytes", a.len()));
    }
    c.done()
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("parameter table", parameter_table),
        ("zero-point amplitude", zero_point_amplitude),
        ("sound-mode anchor", sound_mode),
        ("splitting magnitude", splitting),
        ("cooling curves", cooling),
        ("QND numbers", qnd),
        ("noise budget", noise),
        ("rovib property suite", rovib),
        ("loss-model cross-checks", loss_models),
        ("determinism of figures", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = match f() {
            Ok(r) => r,
            Err(msg) => (false, format!("error: {msg}")),
        };
        // straight to the handle: the harness only captures the print macros,
        // and the report should appear in a plain `cargo test` log
        let _ = writeln!(
            std::io::stderr().lock(),
            "criterion {} ({name}): {} | {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
