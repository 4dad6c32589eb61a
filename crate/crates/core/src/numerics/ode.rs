//! Explicit embedded Runge–Kutta pairs with adaptive step control.
//!
//! Steps are clipped so the integrator lands exactly on every requested
//! sample time; no interpolation is involved in the reported states.

use crate::error::{Error, IntegrationFailure};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dormand–Prince 5(4).
    DormandPrince54,
    /// Dormand–Prince 8(5,3).
    Dop853,
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<T>,
    /// Smallest allowed step relative to `max(|t|, 1)`.
    pub min_step_ratio: T,
    pub max_steps: usize,
}

impl<T: Real> OdeOptions<T> {
    pub fn with_tolerance(rtol: T, atol: T) -> Self {
        Self {
            rtol,
            atol,
            initial_step: None,
            min_step_ratio: T::lit(1e-14),
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// States at the requested sample times together with step statistics.
#[derive(Debug, Clone)]
pub struct Solution<T, const N: usize> {
    pub times: Vec<T>,
    pub states: Vec<[T; N]>,
    pub stats: OdeStats,
}

pub type OdeResult<T, const N: usize> =
    Result<Solution<T, N>, IntegrationFailure<Solution<T, N>>>;

struct Tableau<T> {
    c: Vec<T>,
    a: Vec<Vec<T>>,
    b: Vec<T>,
    /// `b - b̂` for the 5(4) pair, the fifth-order estimator for DOP853.
    e: Vec<T>,
    /// Third-order estimator weights (DOP853 only).
    bhh: Option<[T; 3]>,
    order: T,
}

impl<T: Real> Tableau<T> {
    fn new(method: Method) -> Self {
        let conv = |s: &[f64]| s.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
        match method {
            Method::DormandPrince54 => Self {
                c: conv(&DP5_C),
                a: DP5_A.iter().map(|r| conv(r)).collect(),
                b: conv(&DP5_B),
                e: conv(&DP5_E),
                bhh: None,
                order: T::lit(5.0),
            },
            Method::Dop853 => Self {
                c: conv(&DOP853_C),
                a: DOP853_A.iter().map(|r| conv(r)).collect(),
                b: conv(&DOP853_B),
                e: conv(&DOP853_ER),
                bhh: Some([T::lit(DOP853_BHH[0]), T::lit(DOP853_BHH[1]), T::lit(DOP853_BHH[2])]),
                order: T::lit(8.0),
            },
        }
    }

    fn stages(&self) -> usize {
        self.c.len()
    }
}

/// Integrates `dy/dt = f(t, y)` from `t0`, reporting the state at each entry of `samples`.
///
/// `samples` must be non-decreasing and not earlier than `t0`. The right-hand
/// side may fail; the failure is returned with every sample produced so far.
pub fn integrate<T, const N: usize, F>(
    method: Method,
    f: F,
    t0: T,
    y0: [T; N],
    samples: &[T],
    opts: &OdeOptions<T>,
) -> OdeResult<T, N>
where
    T: Real,
    F: FnMut(T, &[T; N]) -> Result<[T; N], Error>,
{
    drive(method, f, t0, y0, samples, opts, None::<fn(&[T; N]) -> T>).map(|seg| seg.solution)
}

/// Where an event function reached zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventStop<T, const N: usize> {
    pub t: T,
    pub y: [T; N],
}

/// Result of [`integrate_until`].
#[derive(Debug, Clone)]
pub struct Segment<T, const N: usize> {
    /// Samples reached before the event.
    pub solution: Solution<T, N>,
    pub stop: Option<EventStop<T, N>>,
    /// Step size to resume with.
    pub next_step: T,
}

/// Like [`integrate`], but stops where `event(y)` first falls from positive to
/// zero or below. The crossing is located by re-taking the last step with a
/// root-found step size, so the right-hand side is never sampled across it by
/// more than the local error.
pub fn integrate_until<T, const N: usize, F, G>(
    method: Method,
    f: F,
    t0: T,
    y0: [T; N],
    samples: &[T],
    opts: &OdeOptions<T>,
    event: G,
) -> Result<Segment<T, N>, IntegrationFailure<Solution<T, N>>>
where
    T: Real,
    F: FnMut(T, &[T; N]) -> Result<[T; N], Error>,
    G: FnMut(&[T; N]) -> T,
{
    drive(method, f, t0, y0, samples, opts, Some(event))
}

/// One Runge–Kutta step of size `h`; fills `k` and returns the new state.
fn rk_step<T, const N: usize, F>(
    tab: &Tableau<T>,
    f: &mut F,
    t: T,
    y: &[T; N],
    k0: &[T; N],
    h: T,
    k: &mut [[T; N]],
) -> Result<[T; N], Error>
where
    T: Real,
    F: FnMut(T, &[T; N]) -> Result<[T; N], Error>,
{
    k[0] = *k0;
    for s in 1..tab.stages() {
        let mut ys = *y;
        for (j, &a) in tab.a[s].iter().enumerate() {
            if a != T::zero() {
                for i in 0..N {
                    ys[i] += h * a * k[j][i];
                }
            }
        }
        k[s] = f(t + tab.c[s] * h, &ys)?;
    }
    let mut y_new = *y;
    for i in 0..N {
        let mut acc = T::zero();
        for s in 0..tab.stages() {
            acc += tab.b[s] * k[s][i];
        }
        y_new[i] += h * acc;
    }
    Ok(y_new)
}

fn drive<T, const N: usize, F, G>(
    method: Method,
    mut f: F,
    t0: T,
    y0: [T; N],
    samples: &[T],
    opts: &OdeOptions<T>,
    mut event: Option<G>,
) -> Result<Segment<T, N>, IntegrationFailure<Solution<T, N>>>
where
    T: Real,
    F: FnMut(T, &[T; N]) -> Result<[T; N], Error>,
    G: FnMut(&[T; N]) -> T,
{
    let tab = Tableau::<T>::new(method);
    let mut sol = Solution {
        times: Vec::with_capacity(samples.len()),
        states: Vec::with_capacity(samples.len()),
        stats: OdeStats::default(),
    };
    macro_rules! fail {
        ($t:expr, $err:expr) => {
            return Err(IntegrationFailure {
                partial: sol,
                error: match $err {
                    Error::Integration { .. } => $err,
                    other => Error::Integration {
                        t: $t.as_f64(),
                        reason: other.to_string(),
                    },
                },
            })
        };
    }

    if let Some(pair) = samples.windows(2).find(|w| !(w[1] >= w[0])) {
        fail!(t0, Error::InvalidInput(format!("sample times not sorted near {}", pair[0])));
    }
    if samples.first().is_some_and(|&s| s < t0) {
        fail!(t0, Error::InvalidInput("sample before the initial time".into()));
    }

    let mut t = t0;
    let mut y = y0;
    let mut k0 = match f(t, &y) {
        Ok(v) => v,
        Err(e) => fail!(t, e),
    };
    sol.stats.evaluations += 1;

    let span = samples.last().map_or(T::zero(), |&s| s - t0);
    let mut h = opts
        .initial_step
        .unwrap_or_else(|| initial_step(&y, &k0, tab.order, opts))
        .min(span.max(T::min_positive_value()));

    let safe = T::lit(0.9);
    let fac_min = T::lit(0.2);
    let fac_max = T::lit(if method == Method::Dop853 { 6.0 } else { 5.0 });
    let inv_order = tab.order.recip();
    let mut k: Vec<[T; N]> = vec![[T::zero(); N]; tab.stages()];

    for &target in samples {
        while t < target {
            if sol.stats.accepted + sol.stats.rejected >= opts.max_steps {
                fail!(t, Error::Integration { t: t.as_f64(), reason: "step budget exhausted".into() });
            }
            let floor = opts.min_step_ratio * t.abs().max(T::one());
            if h < floor {
                fail!(t, Error::Integration {
                    t: t.as_f64(),
                    reason: format!("step size underflow (h = {:e})", h.as_f64()),
                });
            }
            let remaining = target - t;
            let clipped = h >= remaining;
            let h_try = if clipped { remaining } else { h };

            let y_new = match rk_step(&tab, &mut f, t, &y, &k0, h_try, &mut k) {
                Ok(v) => v,
                Err(e) => fail!(t, e),
            };
            sol.stats.evaluations += tab.stages() - 1;
            // a trial that crosses the event is shortened onto it before error control,
            // since the right-hand side may change character there
            if let Some(g) = event.as_mut() {
                let g0 = g(&y);
                let g1 = g(&y_new);
                if g0 > T::zero() && g1 <= T::zero() {
                    // Illinois regula falsi on the step size
                    let (mut lo, mut hi) = (T::zero(), h_try);
                    let (mut glo, mut ghi) = (g0, g1);
                    let mut side = 0i8;
                    for _ in 0..60 {
                        if hi - lo <= T::lit(4.0) * T::epsilon() * (t.abs() + hi) {
                            break;
                        }
                        let mut mid = hi - ghi * (hi - lo) / (ghi - glo);
                        if !(mid > lo && mid < hi) {
                            mid = (lo + hi) / T::lit(2.0);
                        }
                        let y_mid = match rk_step(&tab, &mut f, t, &y, &k0, mid, &mut k) {
                            Ok(v) => v,
                            Err(e) => fail!(t, e),
                        };
                        sol.stats.evaluations += tab.stages() - 1;
                        let gm = g(&y_mid);
                        if gm > T::zero() {
                            lo = mid;
                            glo = gm;
                            if side == -1 {
                                ghi /= T::lit(2.0);
                            }
                            side = -1;
                        } else {
                            hi = mid;
                            ghi = gm;
                            if side == 1 {
                                glo /= T::lit(2.0);
                            }
                            side = 1;
                            if gm == T::zero() {
                                break;
                            }
                        }
                    }
                    let y_hi = match rk_step(&tab, &mut f, t, &y, &k0, hi, &mut k) {
                        Ok(v) => v,
                        Err(e) => fail!(t, e),
                    };
                    sol.stats.evaluations += tab.stages() - 1;
                    let err = error_norm(&tab, &k, &y, &y_hi, hi, opts);
                    if !(err <= T::one()) {
                        sol.stats.rejected += 1;
                        let fac = if err.is_finite() { (safe * err.powf(-inv_order)).max(fac_min) } else { fac_min };
                        h = hi * fac;
                        continue;
                    }
                    sol.stats.accepted += 1;
                    let t_stop = if clipped && hi == h_try { target } else { t + hi };
                    if t_stop == target {
                        sol.times.push(target);
                        sol.states.push(y_hi);
                    }
                    let fac = if err == T::zero() { fac_max } else { (safe * err.powf(-inv_order)).min(fac_max).max(fac_min) };
                    return Ok(Segment {
                        solution: sol,
                        stop: Some(EventStop { t: t_stop, y: y_hi }),
                        next_step: hi * fac,
                    });
                }
            }

            let err = error_norm(&tab, &k, &y, &y_new, h_try, opts);
            if !err.is_finite() {
                sol.stats.rejected += 1;
                h = h_try * fac_min;
                continue;
            }
            if err > T::one() {
                sol.stats.rejected += 1;
                let fac = (safe * err.powf(-inv_order)).max(fac_min);
                h = h_try * fac;
                continue;
            }

            let k_new = match f(t + h_try, &y_new) {
                Ok(v) => v,
                Err(e) => fail!(t, e),
            };
            sol.stats.evaluations += 1;
            sol.stats.accepted += 1;
            t = if clipped { target } else { t + h_try };
            y = y_new;
            k0 = k_new;
            let fac = if err == T::zero() { fac_max } else { (safe * err.powf(-inv_order)).min(fac_max).max(fac_min) };
            // a clipped step says nothing about the natural step; keep the larger
            h = if clipped { h.max(h_try * fac) } else { h_try * fac };
        }
        sol.times.push(target);
        sol.states.push(y);
    }
    Ok(Segment { solution: sol, stop: None, next_step: h })
}

fn error_norm<T: Real, const N: usize>(
    tab: &Tableau<T>,
    k: &[[T; N]],
    y: &[T; N],
    y_new: &[T; N],
    h: T,
    opts: &OdeOptions<T>,
) -> T {
    let n = T::int(N as i64);
    let mut err = T::zero();
    let mut err2 = T::zero();
    for i in 0..N {
        let sk = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        let mut e = T::zero();
        for s in 0..tab.stages() {
            e += tab.e[s] * k[s][i];
        }
        match tab.bhh {
            None => {
                let r = h * e / sk;
                err += r * r;
            }
            Some(bhh) => {
                let mut bk = T::zero();
                for s in 0..tab.stages() {
                    bk += tab.b[s] * k[s][i];
                }
                let e3 = bk - bhh[0] * k[0][i] - bhh[1] * k[8][i] - bhh[2] * k[11][i];
                let r5 = e / sk;
                let r3 = e3 / sk;
                err += r5 * r5;
                err2 += r3 * r3;
            }
        }
    }
    match tab.bhh {
        None => (err / n).sqrt(),
        Some(_) => {
            let deno = err + T::lit(0.01) * err2;
            let deno = if deno > T::zero() { deno } else { T::one() };
            h.abs() * err / (n * deno).sqrt()
        }
    }
}

fn initial_step<T: Real, const N: usize>(
    y: &[T; N],
    f0: &[T; N],
    order: T,
    opts: &OdeOptions<T>,
) -> T {
    let mut d0 = T::zero();
    let mut d1 = T::zero();
    for i in 0..N {
        let sk = opts.atol + opts.rtol * y[i].abs();
        d0 += (y[i] / sk).powi(2);
        d1 += (f0[i] / sk).powi(2);
    }
    let n = T::int(N as i64);
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * d0 / d1
    };
    // shrink toward the tolerance-implied scale for high orders
    h * opts.rtol.max(T::lit(1e-16)).powf(T::one() / order).min(T::one()).max(T::lit(1e-3))
}

const DP5_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP5_A: [&[f64]; 7] = [
    &[],
    &[0.2],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP5_B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP5_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const DOP853_C: [f64; 12] = [
    0.0,
    0.05260015195876773,
    0.0789002279381516,
    0.1183503419072274,
    0.2816496580927726,
    0.3333333333333333,
    0.25,
    0.3076923076923077,
    0.6512820512820513,
    0.6,
    0.8571428571428571,
    1.0,
];
const DOP853_A: [&[f64]; 12] = [
    &[],
    &[0.05260015195876773],
    &[0.0197250569845379, 0.0591751709536137],
    &[0.02958758547680685, 0.0, 0.08876275643042054],
    &[0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792],
    &[0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242],
    &[0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125],
    &[0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023],
    &[0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996],
    &[0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627],
    &[-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196],
    &[2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636],
];
const DOP853_B: [f64; 12] = [0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259];
const DOP853_ER: [f64; 12] = [0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294];
const DOP853_BHH: [f64; 3] = [0.2440944881889764, 0.7338466882816118, 0.022058823529411766];
