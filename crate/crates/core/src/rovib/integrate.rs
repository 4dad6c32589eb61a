//! Trajectory integration.
//!
//! Orientation is carried as a unit quaternion rather than Euler angles, so
//! the flow has no gimbal singularity; Euler angles are recovered only when
//! samples are reported.

use crate::error::{Error, IntegrationFailure, Result};
use crate::numerics::linalg::{mat3_vec, Mat3, Vec3};
use crate::numerics::ode::{self, Method, OdeOptions, OdeStats};
use crate::scalar::Real;

use super::dynamics::{BodyState, Rovib};
use super::{DeformationAmplitudes, EulerAngles, RotorVibState, RovibParams};

pub const ROVIB_CSV_HEADER: &str =
    "t,alpha,beta,gamma,Omega_x,Omega_y,Omega_z,ReX0,ReX1,ImX1,ReX2,ImX2,energy,Lx,Ly,Lz";

const DIM: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RovibSample<T> {
    pub t: T,
    pub euler: EulerAngles<T>,
    pub omega_lab: Vec3<T>,
    pub x_rot: DeformationAmplitudes<T>,
    pub x_rot_rates: DeformationAmplitudes<T>,
    pub energy: T,
    pub l_lab: Vec3<T>,
}

#[derive(Debug, Clone)]
pub struct RovibTrajectory<T> {
    pub samples: Vec<RovibSample<T>>,
    pub stats: OdeStats,
}

fn relative<T: Real>(delta: T, reference: T) -> T {
    if reference > T::zero() {
        delta / reference
    } else {
        delta
    }
}

impl<T: Real> RovibTrajectory<T> {
    /// `max_t |E(t) − E(0)| / |E(0)|` (absolute when `E(0) = 0`).
    pub fn max_energy_drift(&self) -> T {
        let Some(first) = self.samples.first() else { return T::zero() };
        let worst = self
            .samples
            .iter()
            .fold(T::zero(), |a, s| a.max((s.energy - first.energy).abs()));
        relative(worst, first.energy.abs())
    }

    /// `max_t |L(t) − L(0)| / |L(0)|` (absolute when `L(0) = 0`).
    pub fn max_angular_momentum_drift(&self) -> T {
        let Some(first) = self.samples.first() else { return T::zero() };
        let norm = |v: Vec3<T>| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let worst = self.samples.iter().fold(T::zero(), |a, s| {
            a.max(norm([0, 1, 2].map(|k| s.l_lab[k] - first.l_lab[k])))
        });
        relative(worst, norm(first.l_lab))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.samples.len() + 1));
        out.push_str(ROVIB_CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            let q = s.x_rot.to_real();
            let fields = [
                s.t,
                s.euler.alpha,
                s.euler.beta,
                s.euler.gamma,
                s.omega_lab[0],
                s.omega_lab[1],
                s.omega_lab[2],
                q[0],
                q[1],
                q[2],
                q[3],
                q[4],
                s.energy,
                s.l_lab[0],
                s.l_lab[1],
                s.l_lab[2],
            ];
            let line: Vec<String> = fields.iter().map(|v| format!("{:?}", v.as_f64())).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RovibOptions {
    /// Number of equal intervals between reported samples.
    pub intervals: usize,
    pub method: Method,
}

impl Default for RovibOptions {
    fn default() -> Self {
        Self { intervals: 200, method: Method::Dop853 }
    }
}

type Quat<T> = [T; 4];

fn quat_mul<T: Real>(a: &Quat<T>, b: &Quat<T>) -> Quat<T> {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn quat_from_euler<T: Real>(e: &EulerAngles<T>) -> Quat<T> {
    let half = T::lit(0.5);
    let about = |axis: usize, angle: T| {
        let (s, c) = (angle * half).sin_cos();
        let mut q = [c, T::zero(), T::zero(), T::zero()];
        q[axis + 1] = s;
        q
    };
    quat_mul(&quat_mul(&about(2, e.alpha), &about(1, e.beta)), &about(2, e.gamma))
}

fn quat_to_matrix<T: Real>(q: &Quat<T>) -> Mat3<T> {
    let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    let (one, two) = (T::one(), T::lit(2.0));
    [
        [one - two * (y * y + z * z), two * (x * y - w * z), two * (x * z + w * y)],
        [two * (x * y + w * z), one - two * (x * x + z * z), two * (y * z - w * x)],
        [two * (x * z - w * y), two * (y * z + w * x), one - two * (x * x + y * y)],
    ]
}

fn pack<T: Real>(quat: &Quat<T>, b: &BodyState<T>) -> [T; DIM] {
    let mut y = [T::zero(); DIM];
    y[..4].copy_from_slice(quat);
    y[4..7].copy_from_slice(&b.omega);
    y[7..12].copy_from_slice(&b.q);
    y[12..17].copy_from_slice(&b.qdot);
    y
}

fn unpack<T: Real>(y: &[T; DIM]) -> (Quat<T>, BodyState<T>) {
    (
        [y[0], y[1], y[2], y[3]],
        BodyState {
            omega: [y[4], y[5], y[6]],
            q: std::array::from_fn(|i| y[7 + i]),
            qdot: std::array::from_fn(|i| y[12 + i]),
        },
    )
}

fn sample<T: Real>(sys: &Rovib<T>, t: T, y: &[T; DIM]) -> RovibSample<T> {
    let (quat, body) = unpack(y);
    let g = quat_to_matrix(&quat);
    let (pi, _) = sys.momenta(&body);
    RovibSample {
        t,
        euler: EulerAngles::from_matrix(&g),
        omega_lab: mat3_vec(&g, &body.omega),
        x_rot: DeformationAmplitudes::from_real(&body.q),
        x_rot_rates: DeformationAmplitudes::from_real(&body.qdot),
        energy: sys.body_energy(&body),
        l_lab: mat3_vec(&g, &pi),
    }
}

/// Integrates from `t = 0` to `t_end` with relative tolerance `tol ∈ (1e-12, 1e-3)`,
/// reporting [`RovibOptions::default`] samples.
pub fn integrate<T: Real>(
    state0: &RotorVibState<T>,
    params: &RovibParams<T>,
    t_end: T,
    tol: T,
) -> Result<RovibTrajectory<T>, IntegrationFailure<RovibTrajectory<T>>> {
    let opts = RovibOptions::default();
    let n = opts.intervals;
    let times: Vec<T> = (0..=n).map(|i| t_end * T::int(i as i64) / T::int(n as i64)).collect();
    integrate_with(state0, params, &times, tol, opts.method)
}

pub fn integrate_with<T: Real>(
    state0: &RotorVibState<T>,
    params: &RovibParams<T>,
    times: &[T],
    tol: T,
    method: Method,
) -> Result<RovibTrajectory<T>, IntegrationFailure<RovibTrajectory<T>>> {
    let empty = || RovibTrajectory { samples: Vec::new(), stats: OdeStats::default() };
    let reject = |error: Error| IntegrationFailure { partial: empty(), error };
    if !(tol > T::lit(1e-12) && tol < T::lit(1e-3)) {
        return Err(reject(Error::InvalidInput(format!(
            "tolerance {} outside (1e-12, 1e-3)",
            tol.as_f64()
        ))));
    }
    if times.iter().any(|t| !t.is_finite() || *t < T::zero()) {
        return Err(reject(Error::InvalidInput("sample times must be finite and non-negative".into())));
    }
    state0.validate().map_err(reject)?;
    let sys = Rovib::new(*params).map_err(reject)?;

    let (_, body) = sys.reduce(state0);
    let y0 = pack(&quat_from_euler(&state0.euler), &body);
    let rhs = |_t: T, y: &[T; DIM]| -> Result<[T; DIM]> {
        let (quat, b) = unpack(y);
        let (omega_dot, q_ddot) = sys.body_accelerations(&b)?;
        let half = T::lit(0.5);
        let w = [T::zero(), b.omega[0], b.omega[1], b.omega[2]];
        let quat_dot = quat_mul(&quat, &w).map(|v| v * half);
        Ok(pack(&quat_dot, &BodyState { omega: omega_dot, q: b.qdot, qdot: q_ddot }))
    };
    let opts = OdeOptions::with_tolerance(tol, tol * T::lit(1e-3));
    let convert = |sol: ode::Solution<T, DIM>| RovibTrajectory {
        samples: sol
            .times
            .iter()
            .zip(&sol.states)
            .map(|(&t, y)| sample(&sys, t, y))
            .collect(),
        stats: sol.stats,
    };
    match ode::integrate(method, rhs, T::zero(), y0, times, &opts) {
        Ok(sol) => Ok(convert(sol)),
        Err(f) => Err(IntegrationFailure { partial: convert(f.partial), error: f.error }),
    }
}
