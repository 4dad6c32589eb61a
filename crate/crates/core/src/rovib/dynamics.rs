//! Lagrangian, conserved quantities and equations of motion.
//!
//! The Lagrangian is invariant under global rotations, so the dynamics reduce
//! to the body angular velocity `ω = gᵀΩ` and the real body coordinates
//! `q = (X₀, Re X₁, Im X₁, Re X₂, Im X₂)`:
//!
//! `ℓ = (I/2)|ω|² + (ρ/4) q̇ᵀDq̇ − (I/2) ωᵀS(q)ω + Σ_s ω_s q̇ᵀB_s q − 2σ qᵀDq`
//!
//! with `D = diag(1, 2, 2, 2, 2)`, `S(q) = Re Σ X_m Q_m` and
//! `B_s = (ρ/4) Re(Pᵀ K(s) P̄)` where `X = P q`. The Euler–Poincaré equations
//! are linear in `(ω̇, q̈)` and solved as one symmetric 8×8 system.

use crate::error::{Error, Result};
use crate::numerics::linalg::{cross, dot, mat3_transpose, mat3_vec, solve_dense, Mat3, Vec3};
use crate::scalar::Real;

use super::basis::{
    basis_phi, cmat5_vec, generator_set, idx, quadrupoles, wigner_from_matrix, GeneratorSet, C,
};
use super::{DeformationAmplitudes, RotorVibState, RovibParams};

/// Reduced state: body angular velocity and real deformation coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyState<T> {
    pub omega: Vec3<T>,
    pub q: [T; 5],
    pub qdot: [T; 5],
}

/// Time derivatives of a [`RotorVibState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorVibRates<T> {
    pub euler_rates: [T; 3],
    pub euler_accel: [T; 3],
    pub x_rates: DeformationAmplitudes<T>,
    pub x_accel: DeformationAmplitudes<T>,
}

/// Precomputed coefficients of the reduced Lagrangian for one parameter set.
#[derive(Debug, Clone)]
pub struct Rovib<T> {
    pub params: RovibParams<T>,
    pub generators: GeneratorSet<T>,
    s: [Mat3<T>; 5],
    b: [[[T; 5]; 5]; 3],
    d: [T; 5],
}

impl<T: Real> Rovib<T> {
    pub fn new(params: RovibParams<T>) -> Result<Self> {
        params.validate()?;
        let generators = generator_set::<T>();
        let qs = quadrupoles::<T>();
        // columns of P: amplitudes produced by unit real coordinates
        let p: [[C<T>; 5]; 5] = std::array::from_fn(|j| {
            let mut e = [T::zero(); 5];
            e[j] = T::one();
            DeformationAmplitudes::from_real(&e).x
        });
        let s = std::array::from_fn(|j| {
            let mut acc = [[T::zero(); 3]; 3];
            for (m, q) in qs.iter().enumerate() {
                for a in 0..3 {
                    for b in 0..3 {
                        acc[a][b] += (p[j][m] * q[a][b]).re;
                    }
                }
            }
            acc
        });
        let quarter_rho = params.rho / T::lit(4.0);
        let b = std::array::from_fn(|axis| {
            let k = &generators.k[axis];
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let conj_pj = p[j].map(|c| c.conj());
                    let kp = cmat5_vec(k, &conj_pj);
                    let v = (0..5).fold(C::new(T::zero(), T::zero()), |a, m| a + p[i][m] * kp[m]);
                    quarter_rho * v.re
                })
            })
        });
        let two = T::lit(2.0);
        Ok(Self { params, generators, s, b, d: [T::one(), two, two, two, two] })
    }

    /// `S(q) = Σ_j q_j S_j`.
    pub fn shape_matrix(&self, q: &[T; 5]) -> Mat3<T> {
        let mut out = [[T::zero(); 3]; 3];
        for (qj, sj) in q.iter().zip(&self.s) {
            for a in 0..3 {
                for b in 0..3 {
                    out[a][b] += *qj * sj[a][b];
                }
            }
        }
        out
    }

    /// `B(ω) = Σ_s ω_s B_s`.
    fn gyro(&self, w: &Vec3<T>) -> [[T; 5]; 5] {
        let mut out = [[T::zero(); 5]; 5];
        for (ws, bs) in w.iter().zip(&self.b) {
            for i in 0..5 {
                for j in 0..5 {
                    out[i][j] += *ws * bs[i][j];
                }
            }
        }
        out
    }

    fn bilinear(&self, axis: usize, u: &[T; 5], v: &[T; 5]) -> T {
        let bs = &self.b[axis];
        let mut acc = T::zero();
        for i in 0..5 {
            for j in 0..5 {
                acc += u[i] * bs[i][j] * v[j];
            }
        }
        acc
    }

    fn weighted(&self, u: &[T; 5], v: &[T; 5]) -> T {
        (0..5).fold(T::zero(), |a, i| a + self.d[i] * u[i] * v[i])
    }

    pub fn body_lagrangian(&self, st: &BodyState<T>) -> T {
        let RovibParams { rho, sigma, inertia } = self.params;
        let half = T::lit(0.5);
        let w = &st.omega;
        let s = self.shape_matrix(&st.q);
        let cross_term = (0..3).fold(T::zero(), |a, k| a + w[k] * self.bilinear(k, &st.qdot, &st.q));
        half * inertia * dot(w, w) + rho / T::lit(4.0) * self.weighted(&st.qdot, &st.qdot)
            - half * inertia * dot(w, &mat3_vec(&s, w))
            + cross_term
            - T::lit(2.0) * sigma * self.weighted(&st.q, &st.q)
    }

    /// Body angular momentum `π = ∂ℓ/∂ω` and deformation momentum `∂ℓ/∂q̇`.
    pub fn momenta(&self, st: &BodyState<T>) -> (Vec3<T>, [T; 5]) {
        let RovibParams { rho, inertia, .. } = self.params;
        let s = self.shape_matrix(&st.q);
        let sw = mat3_vec(&s, &st.omega);
        let pi = std::array::from_fn(|k| {
            inertia * (st.omega[k] - sw[k]) + self.bilinear(k, &st.qdot, &st.q)
        });
        let bw = self.gyro(&st.omega);
        let pq = std::array::from_fn(|i| {
            let bq = (0..5).fold(T::zero(), |a, j| a + bw[i][j] * st.q[j]);
            rho / T::lit(2.0) * self.d[i] * st.qdot[i] + bq
        });
        (pi, pq)
    }

    /// Legendre transform `ω·π + q̇·p − ℓ`.
    pub fn body_energy(&self, st: &BodyState<T>) -> T {
        let (pi, pq) = self.momenta(st);
        dot(&st.omega, &pi) + dot(&st.qdot, &pq) - self.body_lagrangian(st)
    }

    /// `(ω̇, q̈)` from the Euler–Poincaré equations.
    pub fn body_accelerations(&self, st: &BodyState<T>) -> Result<(Vec3<T>, [T; 5])> {
        let RovibParams { rho, sigma, inertia } = self.params;
        let w = &st.omega;
        let s = self.shape_matrix(&st.q);
        let s_dot = self.shape_matrix(&st.qdot);
        let (pi, _) = self.momenta(st);

        let mut a = [[T::zero(); 8]; 8];
        let mut rhs = [T::zero(); 8];
        for r in 0..3 {
            for c in 0..3 {
                let delta = if r == c { T::one() } else { T::zero() };
                a[r][c] = inertia * (delta - s[r][c]);
            }
            // G columns are B_s q
            for i in 0..5 {
                let g = (0..5).fold(T::zero(), |acc, j| acc + self.b[r][i][j] * st.q[j]);
                a[3 + i][r] = g;
                a[r][3 + i] = g;
            }
        }
        for i in 0..5 {
            a[3 + i][3 + i] = rho / T::lit(2.0) * self.d[i];
        }

        let pxw = cross(&pi, w);
        let sdw = mat3_vec(&s_dot, w);
        for k in 0..3 {
            rhs[k] = pxw[k] + inertia * sdw[k] - self.bilinear(k, &st.qdot, &st.qdot);
        }
        let bw = self.gyro(w);
        let half_i = inertia / T::lit(2.0);
        for j in 0..5 {
            let mut v = T::zero();
            for i in 0..5 {
                v += (bw[i][j] - bw[j][i]) * st.qdot[i];
            }
            let swj = dot(w, &mat3_vec(&self.s[j], w));
            rhs[3 + j] = v - half_i * swj - T::lit(4.0) * sigma * self.d[j] * st.q[j];
        }
        let sol = solve_dense(a, rhs)?;
        Ok((
            [sol[0], sol[1], sol[2]],
            std::array::from_fn(|i| sol[3 + i]),
        ))
    }

    /// Splits a full state into its rotation matrix and reduced state.
    pub fn reduce(&self, st: &RotorVibState<T>) -> (Mat3<T>, BodyState<T>) {
        let g = st.euler.to_matrix();
        let big_omega = st.lab_angular_velocity();
        let omega = mat3_vec(&mat3_transpose(&g), &big_omega);
        (
            g,
            BodyState { omega, q: st.x_rot.to_real(), qdot: st.x_rot_rates.to_real() },
        )
    }

    /// Lagrangian evaluated literally in lab variables.
    pub fn lab_lagrangian(&self, st: &RotorVibState<T>) -> Result<T> {
        st.validate()?;
        let RovibParams { rho, sigma, inertia } = self.params;
        let half = T::lit(0.5);
        let big_omega = st.lab_angular_velocity();
        let w = wigner_from_matrix(&st.euler.to_matrix());
        let x_lab = cmat5_vec(&w, &st.x_rot.x);
        let d_lab = cmat5_vec(&w, &st.x_rot_rates.x);

        let bulge = (-2..=2).fold(C::new(T::zero(), T::zero()), |a, m| {
            a + x_lab[idx(m)] * basis_phi(m, big_omega)
        });
        let k = self.generators.contract(big_omega);
        let kx = cmat5_vec(&k, &x_lab.map(|c| c.conj()));
        let coupling = (0..5).fold(C::new(T::zero(), T::zero()), |a, m| a + d_lab[m] * kx[m]);

        Ok(half * inertia * dot(&big_omega, &big_omega)
            + rho / T::lit(4.0) * st.x_rot_rates.norm_sqr()
            - half * inertia * bulge.re
            + rho / T::lit(4.0) * coupling.re
            - T::lit(2.0) * sigma * st.x_rot.norm_sqr())
    }

    pub fn energy(&self, st: &RotorVibState<T>) -> T {
        self.body_energy(&self.reduce(st).1)
    }

    /// Lab-frame angular momentum `g π`.
    pub fn lab_angular_momentum(&self, st: &RotorVibState<T>) -> Vec3<T> {
        let (g, body) = self.reduce(st);
        mat3_vec(&g, &self.momenta(&body).0)
    }

    /// Euler–Lagrange equations in Euler-angle coordinates.
    pub fn equations_of_motion(&self, st: &RotorVibState<T>) -> Result<RotorVibRates<T>> {
        st.validate()?;
        let e = &st.euler;
        if e.beta.sin().abs() < T::lit(1e-8) {
            return Err(Error::KinematicSingularity { beta: e.beta.as_f64() });
        }
        let (g, body) = self.reduce(st);
        let (omega_dot, q_ddot) = self.body_accelerations(&body)?;
        let big_omega_dot = mat3_vec(&g, &omega_dot);

        let (sa, ca) = e.alpha.sin_cos();
        let (sb, cb) = e.beta.sin_cos();
        let [ad, bd, _] = st.euler_rates;
        let o = T::zero();
        // time derivative of the kinematic matrix
        let e_dot: Mat3<T> = [
            [o, -ca * ad, -sa * sb * ad + ca * cb * bd],
            [o, -sa * ad, ca * sb * ad + sa * cb * bd],
            [o, o, -sb * bd],
        ];
        let edt = mat3_vec(&e_dot, &st.euler_rates);
        let rhs = std::array::from_fn(|k| big_omega_dot[k] - edt[k]);
        let euler_accel = solve_dense(e.kinematic_matrix(), rhs)?;
        Ok(RotorVibRates {
            euler_rates: st.euler_rates,
            euler_accel,
            x_rates: st.x_rot_rates,
            x_accel: DeformationAmplitudes::from_real(&q_ddot),
        })
    }
}

/// Lab-form Lagrangian, `(I/2)Ω² + (ρ/4)Σ|Ẋ|² − (I/2)δR^Lab(Ω) + coupling − 2σΣ|X|²`.
pub fn lagrangian<T: Real>(state: &RotorVibState<T>, params: &RovibParams<T>) -> Result<T> {
    Rovib::new(*params)?.lab_lagrangian(state)
}

/// The same Lagrangian evaluated through the body-frame reduction.
pub fn body_lagrangian<T: Real>(state: &RotorVibState<T>, params: &RovibParams<T>) -> Result<T> {
    state.validate()?;
    let sys = Rovib::new(*params)?;
    Ok(sys.body_lagrangian(&sys.reduce(state).1))
}

pub fn equations_of_motion<T: Real>(
    state: &RotorVibState<T>,
    params: &RovibParams<T>,
) -> Result<RotorVibRates<T>> {
    Rovib::new(*params)?.equations_of_motion(state)
}

pub fn total_energy<T: Real>(state: &RotorVibState<T>, params: &RovibParams<T>) -> Result<T> {
    state.validate()?;
    Ok(Rovib::new(*params)?.energy(state))
}

pub fn lab_angular_momentum<T: Real>(
    state: &RotorVibState<T>,
    params: &RovibParams<T>,
) -> Result<Vec3<T>> {
    state.validate()?;
    Ok(Rovib::new(*params)?.lab_angular_momentum(state))
}

