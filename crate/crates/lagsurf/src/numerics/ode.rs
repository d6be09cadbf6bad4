//! Embedded Dormand-Prince 5(4) integrator with dense Hermite output and
//! sign-change event detection.

use crate::error::{Error, Result};
use crate::numerics::spline::HermiteSpline;

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Each accepted step is re-taken as this many sub-steps so the dense
    /// Hermite output stays well below the local error tolerance.
    pub dense_substeps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            h_max: 0.05,
            max_steps: 2_000_000,
            dense_substeps: 4,
        }
    }
}

/// Dense solution: a Hermite spline through sub-step knots plus the endpoint.
#[derive(Clone, Debug)]
pub struct Trajectory<const D: usize> {
    pub spline: HermiteSpline<D>,
    pub t_end: f64,
    pub y_end: [f64; D],
}

impl<const D: usize> Trajectory<D> {
    pub fn eval(&self, t: f64) -> [f64; D] {
        self.spline.eval(t)
    }
}

// Dormand-Prince coefficients.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One 5th-order step; returns (y_next, scaled error norm).
fn dopri_step<const D: usize, F>(f: &F, t: f64, y: &[f64; D], h: f64, opts: &OdeOptions) -> ([f64; D], f64)
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let mut k = [[0.0; D]; 7];
    k[0] = f(t, y);
    for stage in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = A[stage][j];
            if a != 0.0 {
                for d in 0..D {
                    ys[d] += h * a * kj[d];
                }
            }
        }
        k[stage] = f(t + C[stage] * h, &ys);
    }
    let mut y5 = *y;
    let mut y4 = *y;
    for (j, kj) in k.iter().enumerate() {
        for d in 0..D {
            y5[d] += h * B5[j] * kj[d];
            y4[d] += h * B4[j] * kj[d];
        }
    }
    let mut err2 = 0.0;
    for d in 0..D {
        let sc = opts.abs_tol + opts.rel_tol * y[d].abs().max(y5[d].abs());
        let e = (y5[d] - y4[d]) / sc;
        err2 += e * e;
    }
    (y5, (err2 / D as f64).sqrt())
}

struct Integration<const D: usize> {
    ts: Vec<f64>,
    ys: Vec<[f64; D]>,
    fs: Vec<[f64; D]>,
}

fn run<const D: usize, F, S>(
    f: &F,
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    opts: &OdeOptions,
    mut on_knot: S,
) -> Result<Integration<D>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    S: FnMut(&Integration<D>) -> bool,
{
    assert!(t_end > t0, "integration goes forward");
    let mut state = Integration {
        ts: vec![t0],
        ys: vec![y0],
        fs: vec![f(t0, &y0)],
    };
    if state.fs[0].iter().any(|v| !v.is_finite()) {
        return Err(Error::OdeTruncated {
            s: t0,
            reason: "non-finite right-hand side at the initial state".into(),
        });
    }
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_max.min(t_end - t0);
    let m = opts.dense_substeps.max(1);
    for _ in 0..opts.max_steps {
        if t >= t_end - 1e-14 * (1.0 + t_end.abs()) {
            return Ok(state);
        }
        h = h.min(t_end - t).min(opts.h_max);
        let (_, err) = dopri_step(f, t, &y, h, opts);
        if !err.is_finite() {
            return Err(Error::OdeTruncated {
                s: t,
                reason: "non-finite state during step".into(),
            });
        }
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            if h < 1e-14 * (1.0 + t.abs()) {
                return Err(Error::OdeTruncated {
                    s: t,
                    reason: "step size underflow".into(),
                });
            }
            continue;
        }
        // Accept: re-take as m sub-steps for the dense output.
        let hs = h / m as f64;
        for j in 0..m {
            let tj = t + j as f64 * hs;
            let (yn, _) = dopri_step(f, tj, &y, hs, opts);
            y = yn;
            let tn = tj + hs;
            state.ts.push(tn);
            state.ys.push(y);
            state.fs.push(f(tn, &y));
            if on_knot(&state) {
                return Ok(state);
            }
        }
        t += h;
        h *= (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
    }
    Err(Error::OdeStepLimit(opts.max_steps))
}

fn to_trajectory<const D: usize>(st: Integration<D>) -> Trajectory<D> {
    let t_end = *st.ts.last().unwrap();
    let y_end = *st.ys.last().unwrap();
    Trajectory {
        spline: HermiteSpline::new(st.ts, st.ys, st.fs),
        t_end,
        y_end,
    }
}

/// Integrate y' = f(t, y) from t0 to t_end with dense output.
pub fn integrate<const D: usize, F>(
    f: &F,
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<Trajectory<D>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let st = run(f, t0, y0, t_end, opts, |_| false)?;
    Ok(to_trajectory(st))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventDirection {
    Rising,
    Falling,
    Any,
}

/// Integrate until the event function g(t, y) crosses zero in the requested
/// direction (crossings before `min_time` past t0 are ignored). Returns the
/// trajectory truncated at the event together with the event time.
pub fn integrate_until<const D: usize, F, G>(
    f: &F,
    t0: f64,
    y0: [f64; D],
    g: &G,
    direction: EventDirection,
    min_time: f64,
    t_max: f64,
    opts: &OdeOptions,
) -> Result<(Trajectory<D>, f64)>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    G: Fn(f64, &[f64; D]) -> f64,
{
    let mut hit: Option<(usize, f64, f64)> = None;
    let st = run(f, t0, y0, t_max, opts, |state| {
        let n = state.ts.len();
        if n < 2 {
            return false;
        }
        let (tp, tn) = (state.ts[n - 2], state.ts[n - 1]);
        if tn - t0 < min_time {
            return false;
        }
        let gp = g(tp, &state.ys[n - 2]);
        let gn = g(tn, &state.ys[n - 1]);
        let crossing = match direction {
            EventDirection::Rising => gp < 0.0 && gn >= 0.0,
            EventDirection::Falling => gp > 0.0 && gn <= 0.0,
            EventDirection::Any => gp * gn <= 0.0 && gp != gn,
        };
        if crossing {
            hit = Some((n - 1, gp, gn));
            true
        } else {
            false
        }
    })?;
    let (idx, _, _) = hit.ok_or(Error::OdeTruncated {
        s: t_max,
        reason: "event not reached before t_max".into(),
    })?;
    let traj = to_trajectory(st);
    // Refine the crossing on the Hermite interpolant by bisection.
    let (knot_ts, _, _) = traj.spline.knots();
    let (mut lo, mut hi) = (knot_ts[idx - 1], knot_ts[idx]);
    let mut glo = g(lo, &traj.spline.eval(lo));
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid, &traj.spline.eval(mid));
        if (hi - lo) < 1e-14 * (1.0 + hi.abs()) {
            break;
        }
        if glo * gm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    let t_event = 0.5 * (lo + hi);
    // Truncate the dense data at the event.
    let keep = idx; // knots 0..=idx-1 stay strictly before t_event
    let (ts, ys, fs) = traj.spline.knots();
    let mut ts2: Vec<f64> = ts[..keep].to_vec();
    let mut ys2: Vec<[f64; D]> = ys[..keep].to_vec();
    let mut fs2: Vec<[f64; D]> = fs[..keep].to_vec();
    let y_event = traj.spline.eval(t_event);
    if t_event - ts2.last().unwrap() > 1e-13 {
        ts2.push(t_event);
        ys2.push(y_event);
        fs2.push(f(t_event, &y_event));
    }
    if ts2.len() == 1 {
        // Degenerate: event at the very first knot; keep a two-point spline.
        ts2.push(t_event + 1e-12);
        ys2.push(y_event);
        fs2.push(f(t_event, &y_event));
    }
    Ok((
        Trajectory {
            spline: HermiteSpline::new(ts2, ys2, fs2),
            t_end: t_event,
            y_end: y_event,
        },
        t_event,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let traj = integrate(&f, 0.0, [1.0, 0.0], 2.0 * std::f64::consts::PI, &OdeOptions::default())
            .unwrap();
        assert!((traj.y_end[0] - 1.0).abs() < 1e-9);
        assert!(traj.y_end[1].abs() < 1e-9);
        // Dense output accuracy mid-interval.
        let y = traj.eval(1.234);
        assert!((y[0] - 1.234f64.cos()).abs() < 1e-9);
    }

    #[test]
    fn event_detection_finds_zero_crossing() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        // cos(t) falls through zero at pi/2.
        let (traj, t_event) = integrate_until(
            &f,
            0.0,
            [1.0, 0.0],
            &|_t, y: &[f64; 2]| y[0],
            EventDirection::Falling,
            1e-3,
            10.0,
            &OdeOptions::default(),
        )
        .unwrap();
        assert!((t_event - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        assert!(traj.y_end[0].abs() < 1e-10);
    }

    #[test]
    fn min_time_skips_initial_event() {
        // Start exactly on the event surface moving through it.
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let (_, t_event) = integrate_until(
            &f,
            0.0,
            [0.0, 1.0],
            &|_t, y: &[f64; 2]| y[0],
            EventDirection::Rising,
            0.5,
            20.0,
            &OdeOptions::default(),
        )
        .unwrap();
        // Next rising crossing of sin(t) through 0 is at 2*pi.
        assert!((t_event - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    }
}
