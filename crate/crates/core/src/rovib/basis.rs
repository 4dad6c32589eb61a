//! The `l = 2` function space: basis functions, their rotation matrices and
//! the infinitesimal generators.
//!
//! Each basis function is a quadratic form `φ_m(r) = rᵀ Q_m r` with a complex
//! symmetric traceless `Q_m`. The five `Q_m` are orthogonal under the Frobenius
//! product with squared norm `15/(8π)`, which turns representation matrices
//! into plain matrix contractions.

use num_complex::Complex;

use crate::numerics::linalg::{mat3_mul, Mat3, Vec3};
use crate::scalar::Real;

use super::EulerAngles;

pub type C<T> = Complex<T>;
pub type CMat3<T> = [[C<T>; 3]; 3];
pub type CMat5<T> = [[C<T>; 5]; 5];

/// Position of azimuthal index `m ∈ [−2, 2]` in five-component arrays.
pub fn idx(m: i32) -> usize {
    debug_assert!((-2..=2).contains(&m));
    (m + 2) as usize
}

/// Normalisation constants `(N₀, N₁, N₂)`.
pub fn normalisation<T: Real>() -> (T, T, T) {
    let pi = T::PI();
    (
        (T::lit(16.0) * pi / T::lit(5.0)).sqrt().recip(),
        (T::lit(8.0) * pi / T::lit(15.0)).sqrt().recip(),
        (T::lit(32.0) * pi / T::lit(15.0)).sqrt().recip(),
    )
}

/// Quadratic-form matrix `Q_m` of `φ_m`.
pub fn quadrupole<T: Real>(m: i32) -> CMat3<T> {
    let (n0, n1, n2) = normalisation::<T>();
    let z = C::new(T::zero(), T::zero());
    let re = |x: T| C::new(x, T::zero());
    let im = |x: T| C::new(T::zero(), x);
    let half = T::lit(0.5);
    let q = match m.abs() {
        0 => [[re(n0), z, z], [z, re(n0), z], [z, z, re(-T::lit(2.0) * n0)]],
        1 => [
            [z, z, re(half * n1)],
            [z, z, im(half * n1)],
            [re(half * n1), im(half * n1), z],
        ],
        2 => [[re(n2), im(n2), z], [im(n2), re(-n2), z], [z, z, z]],
        _ => panic!("azimuthal index {m} outside [-2, 2]"),
    };
    if m < 0 {
        q.map(|row| row.map(|c| c.conj()))
    } else {
        q
    }
}

/// All five quadrupole matrices ordered `m = −2..=2`.
pub fn quadrupoles<T: Real>() -> [CMat3<T>; 5] {
    [-2, -1, 0, 1, 2].map(quadrupole)
}

/// Evaluates the degree-2 extension `φ_m(r)` at any point.
pub fn basis_phi<T: Real>(m: i32, r: Vec3<T>) -> C<T> {
    let q = quadrupole::<T>(m);
    let mut acc = C::new(T::zero(), T::zero());
    for i in 0..3 {
        for j in 0..3 {
            acc += q[i][j] * (r[i] * r[j]);
        }
    }
    acc
}

/// `Σ_m X_m φ_m(r)`; real whenever `X` obeys the reality constraint.
pub fn deformation_at<T: Real>(x: &[C<T>; 5], r: Vec3<T>) -> C<T> {
    (-2..=2).fold(C::new(T::zero(), T::zero()), |acc, m| acc + x[idx(m)] * basis_phi(m, r))
}

/// Frobenius product with the first argument conjugated.
pub fn frobenius<T: Real>(a: &CMat3<T>, b: &CMat3<T>) -> C<T> {
    let mut acc = C::new(T::zero(), T::zero());
    for i in 0..3 {
        for j in 0..3 {
            acc += a[i][j].conj() * b[i][j];
        }
    }
    acc
}

fn conjugate_by<T: Real>(g: &Mat3<T>, q: &CMat3<T>) -> CMat3<T> {
    // g Q gᵀ
    let mut out = [[C::new(T::zero(), T::zero()); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = C::new(T::zero(), T::zero());
            for k in 0..3 {
                for l in 0..3 {
                    acc += q[k][l] * (g[i][k] * g[j][l]);
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Representation of a rotation matrix on the `l = 2` amplitudes.
///
/// Defined so that lab amplitudes follow from body amplitudes by
/// `X^Lab = W X^Rot`; equivalently `φ_m(g⁻¹ r) = Σ_k W_km φ_k(r)`. The map is
/// a homomorphism, `W(g₁g₂) = W(g₁) W(g₂)`.
pub fn wigner_from_matrix<T: Real>(g: &Mat3<T>) -> CMat5<T> {
    let qs = quadrupoles::<T>();
    let scale = T::lit(8.0) * T::PI() / T::lit(15.0);
    let mut w = [[C::new(T::zero(), T::zero()); 5]; 5];
    for (col, q) in qs.iter().enumerate() {
        let rotated = conjugate_by(g, q);
        for (row, qk) in qs.iter().enumerate() {
            w[row][col] = frobenius(qk, &rotated) * scale;
        }
    }
    w
}

/// `W` for z-y-z Euler angles.
pub fn rotation_matrix_w<T: Real>(euler: &EulerAngles<T>) -> CMat5<T> {
    wigner_from_matrix(&euler.to_matrix())
}

/// Active rotation by `angle` about coordinate axis `axis` (0 = x, 1 = y, 2 = z).
pub fn axis_rotation<T: Real>(axis: usize, angle: T) -> Mat3<T> {
    let (s, c) = angle.sin_cos();
    let (o, l) = (T::zero(), T::one());
    match axis {
        0 => [[l, o, o], [o, c, -s], [o, s, c]],
        1 => [[c, o, s], [o, l, o], [-s, o, c]],
        2 => [[c, -s, o], [s, c, o], [o, o, l]],
        _ => panic!("axis index {axis} outside 0..3"),
    }
}

/// Rotation `exp([θ]×)` for a rotation vector `θ` (Rodrigues).
pub fn rotation_from_vector<T: Real>(theta: Vec3<T>) -> Mat3<T> {
    let angle = (theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]).sqrt();
    let mut g = [[T::zero(); 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = T::one();
    }
    if angle == T::zero() {
        return g;
    }
    let k = theta.map(|v| v / angle);
    let kx = [[T::zero(), -k[2], k[1]], [k[2], T::zero(), -k[0]], [-k[1], k[0], T::zero()]];
    let kx2 = mat3_mul(&kx, &kx);
    let (s, c) = angle.sin_cos();
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] += s * kx[i][j] + (T::one() - c) * kx2[i][j];
        }
    }
    g
}

/// The three generators `K(s)`, with `Ẇ = −Σ_s Ω_s K(s)ᵀ W` for lab angular velocity `Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSet<T> {
    pub k: [CMat5<T>; 3],
}

impl<T: Real> GeneratorSet<T> {
    /// `Σ_s v_s K(s)`.
    pub fn contract(&self, v: Vec3<T>) -> CMat5<T> {
        let mut out = [[C::new(T::zero(), T::zero()); 5]; 5];
        for (s, ks) in self.k.iter().enumerate() {
            for i in 0..5 {
                for j in 0..5 {
                    out[i][j] += ks[i][j] * v[s];
                }
            }
        }
        out
    }
}

/// `K(3)_km = i m δ_km`; `K(1)`, `K(2)` from a Richardson-extrapolated central
/// difference of `W` along x- and y-rotations at the identity, `K = −(dW/dθ)ᵀ`.
pub fn generator_set<T: Real>() -> GeneratorSet<T> {
    let mut k3 = [[C::new(T::zero(), T::zero()); 5]; 5];
    for m in -2..=2 {
        k3[idx(m)][idx(m)] = C::new(T::zero(), T::int(m as i64));
    }
    GeneratorSet {
        k: [numerical_generator(0), numerical_generator(1), k3],
    }
}

/// `−(dW/dθ)ᵀ` for rotations about `axis`, by three-level Richardson extrapolation.
pub fn numerical_generator<T: Real>(axis: usize) -> CMat5<T> {
    let h0 = T::lit(0.05);
    let central = |h: T| -> CMat5<T> {
        let plus = wigner_from_matrix(&axis_rotation(axis, h));
        let minus = wigner_from_matrix(&axis_rotation(axis, -h));
        let mut d = [[C::new(T::zero(), T::zero()); 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                d[i][j] = (plus[i][j] - minus[i][j]) / (T::lit(2.0) * h);
            }
        }
        d
    };
    let d1 = central(h0);
    let d2 = central(h0 / T::lit(2.0));
    let d3 = central(h0 / T::lit(4.0));
    let mut k = [[C::new(T::zero(), T::zero()); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            // eliminate h² then h⁴
            let a = (d2[i][j] * T::lit(4.0) - d1[i][j]) / T::lit(3.0);
            let b = (d3[i][j] * T::lit(4.0) - d2[i][j]) / T::lit(3.0);
            let dw = (b * T::lit(16.0) - a) / T::lit(15.0);
            k[j][i] = -dw;
        }
    }
    k
}

pub fn cmat5_mul<T: Real>(a: &CMat5<T>, b: &CMat5<T>) -> CMat5<T> {
    let mut c = [[C::new(T::zero(), T::zero()); 5]; 5];
    for i in 0..5 {
        for k in 0..5 {
            let aik = a[i][k];
            for j in 0..5 {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn cmat5_transpose<T: Real>(a: &CMat5<T>) -> CMat5<T> {
    let mut t = *a;
    for i in 0..5 {
        for j in 0..5 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn cmat5_vec<T: Real>(a: &CMat5<T>, v: &[C<T>; 5]) -> [C<T>; 5] {
    let mut out = [C::new(T::zero(), T::zero()); 5];
    for i in 0..5 {
        for j in 0..5 {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}
