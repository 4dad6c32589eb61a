//! Finite-difference check of the equations of motion against the Lagrangian.

use crate::error::Result;
use crate::scalar::Real;

use super::dynamics::Rovib;
use super::{DeformationAmplitudes, EulerAngles, RotorVibState};

/// Generalized coordinates `(α, β, γ, X₀, Re X₁, Im X₁, Re X₂, Im X₂)` and their rates.
pub fn coordinates<T: Real>(st: &RotorVibState<T>) -> ([T; 8], [T; 8]) {
    let (q, v) = (st.x_rot.to_real(), st.x_rot_rates.to_real());
    let e = &st.euler;
    let r = &st.euler_rates;
    (
        [e.alpha, e.beta, e.gamma, q[0], q[1], q[2], q[3], q[4]],
        [r[0], r[1], r[2], v[0], v[1], v[2], v[3], v[4]],
    )
}

pub fn state_from_coordinates<T: Real>(c: &[T; 8], v: &[T; 8]) -> RotorVibState<T> {
    RotorVibState {
        euler: EulerAngles::new(c[0], c[1], c[2]),
        euler_rates: [v[0], v[1], v[2]],
        x_rot: DeformationAmplitudes::from_real(&[c[3], c[4], c[5], c[6], c[7]]),
        x_rot_rates: DeformationAmplitudes::from_real(&[v[3], v[4], v[5], v[6], v[7]]),
    }
}

fn shifted<T: Real>(a: &[T; 8], i: usize, h: T) -> [T; 8] {
    let mut b = *a;
    b[i] += h;
    b
}

/// Relative Euler–Lagrange residual of candidate accelerations `accel`:
/// `‖d/dt ∂L/∂Q̇ − ∂L/∂Q‖ / max(‖d/dt ∂L/∂Q̇‖, ‖∂L/∂Q‖)`.
///
/// Every derivative is a central difference (step `1e-4`) of the lab-frame
/// Lagrangian, so the check is independent of the body-frame reduction used by
/// [`Rovib::equations_of_motion`]. The time derivative follows the curve
/// `Q + Q̇t + Q̈t²/2`.
pub fn euler_lagrange_residual<T: Real>(
    sys: &Rovib<T>,
    state: &RotorVibState<T>,
    accel: &[T; 8],
) -> Result<T> {
    let (c, v) = coordinates(state);
    let h = T::lit(1e-4);
    let delta = T::lit(1e-4);
    let two = T::lit(2.0);
    let lag = |c: &[T; 8], v: &[T; 8]| sys.lab_lagrangian(&state_from_coordinates(c, v));
    let momentum = |c: &[T; 8], v: &[T; 8], i: usize| -> Result<T> {
        Ok((lag(c, &shifted(v, i, h))? - lag(c, &shifted(v, i, -h))?) / (two * h))
    };
    let at = |t: T| -> ([T; 8], [T; 8]) {
        (
            std::array::from_fn(|i| c[i] + v[i] * t + T::lit(0.5) * accel[i] * t * t),
            std::array::from_fn(|i| v[i] + accel[i] * t),
        )
    };
    let (cp, vp) = at(delta);
    let (cm, vm) = at(-delta);
    let (mut num, mut fnorm, mut pnorm) = (T::zero(), T::zero(), T::zero());
    for i in 0..8 {
        let force = (lag(&shifted(&c, i, h), &v)? - lag(&shifted(&c, i, -h), &v)?) / (two * h);
        let pdot = (momentum(&cp, &vp, i)? - momentum(&cm, &vm, i)?) / (two * delta);
        num += (pdot - force).powi(2);
        fnorm += force * force;
        pnorm += pdot * pdot;
    }
    let scale = fnorm.sqrt().max(pnorm.sqrt());
    Ok(if scale > T::zero() { num.sqrt() / scale } else { num.sqrt() })
}

/// Accelerations from the equations of motion, in coordinate order.
pub fn coordinate_accelerations<T: Real>(sys: &Rovib<T>, state: &RotorVibState<T>) -> Result<[T; 8]> {
    let r = sys.equations_of_motion(state)?;
    let x = r.x_accel.to_real();
    let a = r.euler_accel;
    Ok([a[0], a[1], a[2], x[0], x[1], x[2], x[3], x[4]])
}

/// Audits the equations of motion at `state`.
pub fn action_residual<T: Real>(sys: &Rovib<T>, state: &RotorVibState<T>) -> Result<T> {
    euler_lagrange_residual(sys, state, &coordinate_accelerations(sys, state)?)
}
