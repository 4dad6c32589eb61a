//! Spinning equilibria and their small-oscillation spectrum.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::linalg::dot;
use crate::scalar::Real;

use super::basis::deformation_at;
use super::dynamics::{BodyState, Rovib};
use super::{DeformationAmplitudes, RovibParams};

/// Linear-regime limit on `|X|/R` and `δR/R`.
pub const INSTABILITY_GUARD: f64 = 0.1;

/// Radial displacement of the equator point `(1, 0, 0)`.
pub fn equatorial_bulge<T: Real>(x: &DeformationAmplitudes<T>) -> T {
    deformation_at(&x.x, [T::one(), T::zero(), T::zero()]).re
}

fn equilibrium_coordinates<T: Real>(sys: &Rovib<T>, omega_z: T) -> [T; 5] {
    // ∂ℓ/∂q = 0 at q̇ = 0, ω = Ω ẑ: 4σ D q = −(I/2) (ωᵀ S_j ω)_j
    let RovibParams { sigma, inertia, .. } = sys.params;
    let w = [T::zero(), T::zero(), omega_z];
    std::array::from_fn(|j| {
        let mut e = [T::zero(); 5];
        e[j] = T::one();
        let s = sys.shape_matrix(&e);
        let sw = crate::numerics::linalg::mat3_vec(&s, &w);
        let d = if j == 0 { T::one() } else { T::lit(2.0) };
        -inertia / T::lit(2.0) * dot(&w, &sw) / (T::lit(4.0) * sigma * d)
    })
}

/// Stationary deformation under steady spin `Ω_z` about the body z-axis.
pub fn equilibrium_bulge<T: Real>(omega_z: T, params: &RovibParams<T>) -> Result<DeformationAmplitudes<T>> {
    if !omega_z.is_finite() {
        return Err(Error::InvalidInput("spin rate must be finite".into()));
    }
    let sys = Rovib::new(*params)?;
    let x = DeformationAmplitudes::from_real(&equilibrium_coordinates(&sys, omega_z));
    let ratio = x.max_abs().max(equatorial_bulge(&x).abs());
    if ratio > T::lit(INSTABILITY_GUARD) {
        return Err(Error::InstabilityGuard { ratio: ratio.as_f64() });
    }
    Ok(x)
}

/// Small-oscillation frequencies about the spinning equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct BryanSpectrum<T> {
    pub omega_z: T,
    pub omega_vib: T,
    /// Vibration frequency of each `m = −2..=2` block, rotating frame.
    pub frequencies: [T; 5],
    /// `(ν_m − ω_vib)/Ω_z`; absent when `Ω_z = 0`.
    pub slopes: Option<[T; 5]>,
    /// How many of the five frequencies coincide with each one.
    pub multiplicity: [usize; 5],
    /// Largest Jacobian element coupling different `m` blocks, relative to the largest element.
    pub block_leakage: T,
}

impl<T: Real> BryanSpectrum<T> {
    /// Slopes seen from the lab. A pattern `e^{imφ}` carried around at `Ω_z`
    /// picks up `mΩ_z`, so each slope gains `m`.
    pub fn lab_slopes(&self) -> Option<[T; 5]> {
        self.slopes
            .map(|s| std::array::from_fn(|i| s[i] + T::int(i as i64 - 2)))
    }
}

const BLOCKS: [(i32, &[usize]); 5] = [
    (-2, &[0, 1]),
    (-1, &[2, 3, 4]),
    (0, &[5, 6, 7]),
    (1, &[8, 9, 10]),
    (2, &[11, 12]),
];

/// Maps the real reduced state `(ω, q, q̇)` to complex coordinates grouped by `m`.
fn m_basis() -> DMatrix<Complex<f64>> {
    let c = |re: f64, im: f64| Complex::new(re, im);
    let mut t = DMatrix::from_element(13, 13, c(0.0, 0.0));
    // rows: X₋₂ Ẋ₋₂ | u₋₁ X₋₁ Ẋ₋₁ | ω_z X₀ Ẋ₀ | u₁ X₁ Ẋ₁ | X₂ Ẋ₂
    // columns: ω_x ω_y ω_z | X₀ a₁ b₁ a₂ b₂ | velocities
    let amp = |t: &mut DMatrix<Complex<f64>>, row: usize, m: i32, offset: usize| {
        let sign = m.signum() as f64;
        match m.abs() {
            0 => t[(row, offset)] = c(1.0, 0.0),
            k => {
                let base = offset + 2 * k as usize - 1;
                t[(row, base)] = c(1.0, 0.0);
                t[(row, base + 1)] = c(0.0, sign);
            }
        }
    };
    amp(&mut t, 0, -2, 3);
    amp(&mut t, 1, -2, 8);
    t[(2, 0)] = c(1.0, 0.0);
    t[(2, 1)] = c(0.0, 1.0);
    amp(&mut t, 3, -1, 3);
    amp(&mut t, 4, -1, 8);
    t[(5, 2)] = c(1.0, 0.0);
    amp(&mut t, 6, 0, 3);
    amp(&mut t, 7, 0, 8);
    t[(8, 0)] = c(1.0, 0.0);
    t[(8, 1)] = c(0.0, -1.0);
    amp(&mut t, 9, 1, 3);
    amp(&mut t, 10, 1, 8);
    amp(&mut t, 11, 2, 3);
    amp(&mut t, 12, 2, 8);
    t
}

/// Linearizes the reduced equations about the spinning equilibrium by central
/// differences, splits the Jacobian into `m` blocks and extracts each block's
/// vibration frequency from a complex Schur decomposition.
pub fn linearized_spectrum<T: Real>(omega_z: T, params: &RovibParams<T>) -> Result<BryanSpectrum<T>> {
    let sys = Rovib::new(*params)?;
    let q_eq = equilibrium_bulge(omega_z, params)?.to_real();
    let omega_vib = params.omega_vib();

    let mut s0 = [T::zero(); 13];
    s0[2] = omega_z;
    s0[3..8].copy_from_slice(&q_eq);
    let rhs = |s: &[T; 13]| -> Result<[T; 13]> {
        let b = BodyState {
            omega: [s[0], s[1], s[2]],
            q: std::array::from_fn(|i| s[3 + i]),
            qdot: std::array::from_fn(|i| s[8 + i]),
        };
        let (wd, qdd) = sys.body_accelerations(&b)?;
        let mut out = [T::zero(); 13];
        out[..3].copy_from_slice(&wd);
        out[3..8].copy_from_slice(&b.qdot);
        out[8..].copy_from_slice(&qdd);
        Ok(out)
    };

    let h = T::epsilon().cbrt();
    let mut jac = DMatrix::<f64>::zeros(13, 13);
    for col in 0..13 {
        let mut plus = s0;
        let mut minus = s0;
        plus[col] += h;
        minus[col] -= h;
        let (fp, fm) = (rhs(&plus)?, rhs(&minus)?);
        for row in 0..13 {
            jac[(row, col)] = ((fp[row] - fm[row]) / (T::lit(2.0) * h)).as_f64();
        }
    }

    let t = m_basis();
    let t_inv = t
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NoConvergence("m-basis transform is singular".into()))?;
    let jc = &t * jac.map(|v| Complex::new(v, 0.0)) * t_inv;

    let block_of = |i: usize| BLOCKS.iter().position(|(_, ix)| ix.contains(&i)).unwrap_or(0);
    let (mut off, mut all) = (0.0_f64, 0.0_f64);
    for i in 0..13 {
        for j in 0..13 {
            let v = jc[(i, j)].norm();
            all = all.max(v);
            if block_of(i) != block_of(j) {
                off = off.max(v);
            }
        }
    }

    let target = Complex::new(0.0, -omega_vib.as_f64());
    let mut freqs = [0.0_f64; 5];
    for (slot, (m, ix)) in BLOCKS.iter().enumerate() {
        let n = ix.len();
        let block = DMatrix::from_fn(n, n, |i, j| jc[(ix[i], ix[j])]);
        let eig = Schur::try_new(block, 1e-15, 10_000)
            .and_then(|s| s.eigenvalues())
            .ok_or_else(|| Error::NoConvergence(format!("eigenvalues of the m = {m} block")))?;
        let best = eig
            .iter()
            .filter(|l| l.im < 0.0)
            .min_by(|a, b| (*a - target).norm().total_cmp(&(*b - target).norm()))
            .ok_or_else(|| Error::NoConvergence(format!("no vibration branch in the m = {m} block")))?;
        freqs[slot] = -best.im;
    }

    let tol = 1e-9 * omega_vib.as_f64();
    let multiplicity =
        std::array::from_fn(|i| freqs.iter().filter(|f| (**f - freqs[i]).abs() <= tol).count());
    let frequencies = freqs.map(T::lit);
    let slopes = (omega_z != T::zero())
        .then(|| frequencies.map(|f| (f - omega_vib) / omega_z));
    Ok(BryanSpectrum {
        omega_z,
        omega_vib,
        frequencies,
        slopes,
        multiplicity,
        block_leakage: T::lit(if all > 0.0 { off / all } else { 0.0 }),
    })
}
