//! Oscillation moduli over sliding time windows, grid increments, and the
//! nondecreasing-path jump bound.
//!
//! The modulus of a path for a triple function H is
//! `sup H(x(t1), x(t2), x(t3))` over `0 <= t1 < t2 < t3 <= T` with
//! `t3 - t1 < delta`. For step paths the supremum is a maximum over segment
//! value triples and is computed exactly; the admissibility of a segment pair
//! reduces to a gap condition between their time intervals. For paths with
//! slopes the supremum is approximated on a refinement grid and flagged.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::path::{CadlagPath, Mode, MonotonePath};
use crate::point::Point;

/// The strict window `t3 - t1 < delta` is implemented as
/// `gap <= delta - WINDOW_TOL` on breakpoint times; for step paths the
/// supremum over the open constraint is attained in this closure.
pub const WINDOW_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulusKind {
    /// `|x3 - x1|`: flat-window oscillation, zero only for paths that move
    /// little over small windows in the uniform sense.
    C,
    /// `|x2 - x1| min |x2 - x3|`: charges excursions that depart and return.
    J1,
    /// Distance from `x2` to the segment `[x1, x3]`: forgives monotone
    /// traversals at any speed, charges overshoots.
    M1,
}

impl ModulusKind {
    pub fn label(self) -> &'static str {
        match self {
            ModulusKind::C => "C",
            ModulusKind::J1 => "J1",
            ModulusKind::M1 => "M1",
        }
    }
}

/// A modulus value plus whether it is an exact supremum or a grid estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusValue {
    pub value: f64,
    pub exact: bool,
}

/// The triple function H underlying each modulus kind.
pub fn triple_distance(kind: ModulusKind, x1: Point, x2: Point, x3: Point) -> Result<f64> {
    if x1.dim() != x2.dim() || x2.dim() != x3.dim() {
        return Err(Error::DimMismatch(x1.dim(), x2.dim().max(x3.dim())));
    }
    Ok(triple_value(kind, x1, x2, x3))
}

fn triple_value(kind: ModulusKind, x1: Point, x2: Point, x3: Point) -> f64 {
    match kind {
        ModulusKind::C => (x3 - x1).norm(),
        ModulusKind::J1 => (x2 - x1).norm().min((x2 - x3).norm()),
        ModulusKind::M1 => {
            let d = x3 - x1;
            let dd = d.norm_sq();
            if dd == 0.0 {
                return (x2 - x1).norm();
            }
            let lam = ((x2 - x1).dot(d) / dd).clamp(0.0, 1.0);
            (x2 - (x1 + d * lam)).norm()
        }
    }
}

/// `sup H(x(t1), x(t2), x(t3))` over `t1 < t2 < t3 <= T`, `t3 - t1 < delta`.
///
/// Exact for step paths; a `delta/8` refinement grid otherwise. Use
/// [`oscillation_modulus_refined`] to pick a different refinement factor.
///
/// ```
/// use cadlag::{oscillation_modulus, CadlagPath, ModulusKind};
///
/// // A single clean jump: the uniform modulus sees it, the jump-tolerant
/// // ones do not.
/// let x = CadlagPath::step(&[0.0, 1.0], &[0.0, 1.0], 2.0).unwrap();
/// let c = oscillation_modulus(&x, ModulusKind::C, 0.25, 2.0).unwrap();
/// let j = oscillation_modulus(&x, ModulusKind::J1, 0.25, 2.0).unwrap();
/// assert_eq!((c.value, j.value), (1.0, 0.0));
/// ```
pub fn oscillation_modulus(
    x: &CadlagPath,
    kind: ModulusKind,
    delta: f64,
    t_end: f64,
) -> Result<ModulusValue> {
    oscillation_modulus_refined(x, kind, delta, t_end, 8)
}

/// As [`oscillation_modulus`], with grid refinement factor `q` for paths with
/// slopes (samples every `delta/q` plus all breakpoints and their left limits).
pub fn oscillation_modulus_refined(
    x: &CadlagPath,
    kind: ModulusKind,
    delta: f64,
    t_end: f64,
    q: usize,
) -> Result<ModulusValue> {
    if !(delta > 0.0) {
        return Err(Error::BadDelta(delta));
    }
    if q == 0 {
        return Err(Error::ConfigInvalid("refinement factor must be positive".into()));
    }
    if t_end.is_nan() || t_end < 0.0 || t_end > x.horizon() {
        return Err(Error::OutOfDomain { arg: t_end, hi: x.horizon() });
    }
    if x.is_step() {
        let (lo, hi, v) = step_entries(x, t_end);
        Ok(ModulusValue { value: modulus_core(kind, &lo, &hi, &v, delta), exact: true })
    } else {
        let (t, v) = grid_entries(x, t_end, delta, q)?;
        Ok(ModulusValue { value: modulus_core(kind, &t, &t, &v, delta), exact: false })
    }
}

/// Segment time intervals clipped to `[0, t_end]`, one entry per segment that
/// starts within the window.
fn step_entries(x: &CadlagPath, t_end: f64) -> (Vec<f64>, Vec<f64>, Vec<Point>) {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let mut v = Vec::new();
    for i in 0..x.times().len() {
        if x.times()[i] > t_end {
            break;
        }
        lo.push(x.times()[i]);
        hi.push(x.segment_end(i).min(t_end));
        v.push(x.values()[i]);
    }
    (lo, hi, v)
}

/// Sample times every `delta/q` plus breakpoints; a jump contributes its left
/// limit as an extra sample ordered just before the breakpoint value, standing
/// for evaluation at `t - 0`.
fn grid_entries(x: &CadlagPath, t_end: f64, delta: f64, q: usize) -> Result<(Vec<f64>, Vec<Point>)> {
    let h = delta / q as f64;
    let mut ts: Vec<f64> = Vec::new();
    let mut t = 0.0;
    while t < t_end {
        ts.push(t);
        t += h;
    }
    ts.push(t_end);
    ts.extend(x.times().iter().copied().filter(|&b| b <= t_end));
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let mut times = Vec::with_capacity(ts.len() + x.times().len());
    let mut values = Vec::with_capacity(times.capacity());
    let bps = x.times();
    for &s in &ts {
        let is_bp = bps.binary_search_by(|b| b.total_cmp(&s)).is_ok();
        if is_bp && s > 0.0 && x.mode() == Mode::Affine {
            let left = x.left_limit(s)?;
            if left != x.eval(s)? {
                times.push(s);
                values.push(left);
            }
        }
        times.push(s);
        values.push(x.eval(s)?);
    }
    Ok((times, values))
}

/// Dispatch over kinds and the scalar fast paths. `lo`/`hi` delimit each
/// entry's admissible times; a pair `(i, k)` admits a window iff
/// `lo[k] - hi[i] <= delta - WINDOW_TOL`.
fn modulus_core(kind: ModulusKind, lo: &[f64], hi: &[f64], v: &[Point], delta: f64) -> f64 {
    let win = delta - WINDOW_TOL;
    let scalar = v.first().map_or(true, |p| p.dim() == 1);
    match (kind, scalar) {
        (ModulusKind::C, true) => {
            let vs: Vec<f64> = v.iter().map(|p| p.x()).collect();
            c_scalar(lo, hi, &vs, win)
        }
        (ModulusKind::C, false) => c_general(lo, hi, v, win),
        (ModulusKind::M1, true) => {
            let vs: Vec<f64> = v.iter().map(|p| p.x()).collect();
            m1_scalar(lo, hi, &vs, win)
        }
        _ => jm_general(kind, lo, hi, v, win),
    }
}

/// Scalar C modulus in O(n): for each `i` the admissible `k` form a window
/// that only moves forward, so running extrema come from monotone deques.
fn c_scalar(lo: &[f64], hi: &[f64], v: &[f64], win: f64) -> f64 {
    let n = v.len();
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut end = 0usize;
    let mut best = 0.0f64;
    for i in 0..n {
        while end < n && lo[end] - hi[i] <= win {
            while maxq.back().is_some_and(|&b| v[b] <= v[end]) {
                maxq.pop_back();
            }
            maxq.push_back(end);
            while minq.back().is_some_and(|&b| v[b] >= v[end]) {
                minq.pop_back();
            }
            minq.push_back(end);
            end += 1;
        }
        while maxq.front().is_some_and(|&f| f <= i) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&f| f <= i) {
            minq.pop_front();
        }
        if let Some(&f) = maxq.front() {
            best = best.max(v[f] - v[i]);
        }
        if let Some(&f) = minq.front() {
            best = best.max(v[i] - v[f]);
        }
    }
    best
}

fn c_general(lo: &[f64], hi: &[f64], v: &[Point], win: f64) -> f64 {
    let n = v.len();
    let mut best = 0.0f64;
    for i in 0..n {
        for k in i + 1..n {
            if lo[k] - hi[i] > win {
                break;
            }
            best = best.max((v[k] - v[i]).norm());
        }
    }
    best
}

/// Scalar M1 in O(n * window): the best middle value for endpoints
/// `(v_i, v_k)` is the running extremum of the strictly-between values.
fn m1_scalar(lo: &[f64], hi: &[f64], v: &[f64], win: f64) -> f64 {
    let n = v.len();
    let mut best = 0.0f64;
    for i in 0..n {
        let mut rmax = f64::NEG_INFINITY;
        let mut rmin = f64::INFINITY;
        for k in i + 2..n {
            if lo[k] - hi[i] > win {
                break;
            }
            rmax = rmax.max(v[k - 1]);
            rmin = rmin.min(v[k - 1]);
            let top = v[i].max(v[k]);
            let bot = v[i].min(v[k]);
            best = best.max(rmax - top).max(bot - rmin);
        }
    }
    best
}

fn jm_general(kind: ModulusKind, lo: &[f64], hi: &[f64], v: &[Point], win: f64) -> f64 {
    let n = v.len();
    let mut best = 0.0f64;
    for i in 0..n {
        for k in i + 2..n {
            if lo[k] - hi[i] > win {
                break;
            }
            for j in i + 1..k {
                best = best.max(triple_value(kind, v[i], v[j], v[k]));
            }
        }
    }
    best
}

/// `max_{1<=r<=k} |x(rT/k) - x((r-1)T/k)|`: the increment statistic whose
/// large-k limsup recovers the largest jump, not zero, on discontinuous paths.
///
/// ```
/// use cadlag::{grid_increment_max, CadlagPath};
///
/// let x = CadlagPath::step(&[0.0, 0.7, 1.3], &[0.0, 0.25, 1.0], 2.0).unwrap();
/// // Once every window isolates a single jump the statistic sits on the
/// // largest jump, 0.75, and refining cannot shrink it.
/// assert_eq!(grid_increment_max(&x, 4, 2.0).unwrap(), 0.75);
/// assert_eq!(grid_increment_max(&x, 4096, 2.0).unwrap(), 0.75);
/// ```
pub fn grid_increment_max(x: &CadlagPath, k: usize, t_end: f64) -> Result<f64> {
    if k < 1 {
        return Err(Error::ConfigInvalid("grid increment statistic needs k >= 1".into()));
    }
    if t_end.is_nan() || t_end < 0.0 || t_end > x.horizon() {
        return Err(Error::OutOfDomain { arg: t_end, hi: x.horizon() });
    }
    let mut best = 0.0f64;
    let mut prev = x.eval(0.0)?;
    for r in 1..=k {
        let cur = x.eval(t_end * r as f64 / k as f64)?;
        best = best.max((cur - prev).norm());
        prev = cur;
    }
    Ok(best)
}

/// Both sides of the nondecreasing-path bound
/// `omega_J1(x, delta, T) <= sup_{delta<=t<=T-delta} min{x(t)-x(t-delta), x(t+delta)-x(t)}`.
///
/// The caller asserts `lhs <= rhs`. The supremum on the right is computed
/// exactly: between consecutive kink candidates both increments are affine,
/// so their minimum peaks at an interval end (taken as a left limit on the
/// right end) or at the crossing of the two lines.
pub fn jump_bound_check(x: &MonotonePath, delta: f64, t_end: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0) || delta >= t_end / 2.0 {
        return Err(Error::BadDelta(delta));
    }
    if t_end > x.horizon() {
        return Err(Error::OutOfDomain { arg: t_end, hi: x.horizon() });
    }
    let lhs = oscillation_modulus(x.as_path(), ModulusKind::J1, delta, t_end)?.value;

    let a = delta;
    let b = t_end - delta;
    let mut cand = vec![a, b];
    for &bp in x.times() {
        for t in [bp - delta, bp, bp + delta] {
            if t > a && t < b {
                cand.push(t);
            }
        }
    }
    cand.sort_by(f64::total_cmp);
    cand.dedup();

    // t - delta and t + delta computed in floats can land a hair off a
    // breakpoint and read the wrong side of a jump; snap them back.
    let snap = |s: f64| -> f64 {
        let ts = x.times();
        let i = ts.partition_point(|&b| b <= s);
        let tol = WINDOW_TOL * (1.0 + s.abs());
        if i < ts.len() && (ts[i] - s).abs() <= tol {
            return ts[i];
        }
        if i > 0 && (s - ts[i - 1]).abs() <= tol {
            return ts[i - 1];
        }
        s
    };
    let eval = |t: f64| -> Result<(f64, f64)> {
        let xt = x.eval1(snap(t))?;
        Ok((xt - x.eval1(snap(t - delta))?, x.eval1(snap(t + delta))? - xt))
    };
    let eval_left = |t: f64| -> Result<(f64, f64)> {
        let at = |s: f64| -> Result<f64> {
            let s = snap(s);
            if s <= 0.0 {
                x.eval1(0.0)
            } else {
                Ok(x.left_limit(s)?.x())
            }
        };
        let xt = at(t)?;
        Ok((xt - at(t - delta)?, at(t + delta)? - xt))
    };

    let mut rhs = 0.0f64;
    for w in cand.windows(2) {
        let (fa, ga) = eval(w[0])?;
        let (fb, gb) = eval_left(w[1])?;
        rhs = rhs.max(fa.min(ga)).max(fb.min(gb));
        // Interior peak of min(f, g) where the affine graphs cross.
        let df = fb - fa;
        let dg = gb - ga;
        let num = ga - fa;
        let den = df - dg;
        if den != 0.0 {
            let lam = num / den;
            if lam > 0.0 && lam < 1.0 {
                rhs = rhs.max((fa + lam * df).min(ga + lam * dg));
            }
        }
    }
    let (fb, gb) = eval(b)?;
    rhs = rhs.max(fb.min(gb));
    Ok((lhs, rhs))
}

/// One row of the emitted modulus table.
#[derive(Clone, Copy, Debug)]
pub struct ModulusRow {
    pub kind: ModulusKind,
    pub delta: f64,
    pub t_end: f64,
    pub value: f64,
    pub exact: bool,
}

pub fn modulus_table_csv(rows: &[ModulusRow]) -> String {
    let mut out = String::from("kind,delta,T,value,exact_flag\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.kind.label(),
            r.delta,
            r.t_end,
            r.value,
            u8::from(r.exact)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn s(v: f64) -> Point {
        Point::scalar(v)
    }

    #[test]
    fn triple_distance_examples() {
        assert_eq!(triple_distance(ModulusKind::M1, s(0.0), s(1.0), s(2.0)).unwrap(), 0.0);
        assert_eq!(triple_distance(ModulusKind::M1, s(0.0), s(3.0), s(2.0)).unwrap(), 1.0);
        assert_eq!(triple_distance(ModulusKind::J1, s(0.0), s(3.0), s(2.0)).unwrap(), 1.0);
        assert_eq!(triple_distance(ModulusKind::C, s(0.0), s(3.0), s(2.0)).unwrap(), 2.0);
        let m = triple_distance(
            ModulusKind::M1,
            Point::planar(0.0, 0.0),
            Point::planar(1.0, 1.0),
            Point::planar(2.0, 0.0),
        )
        .unwrap();
        assert_relative_eq!(m, 1.0);
        assert!(triple_distance(ModulusKind::C, s(0.0), Point::planar(0.0, 0.0), s(1.0)).is_err());
    }

    #[test]
    fn monotone_single_jump() {
        let x = CadlagPath::step(&[0.0, 1.0], &[0.0, 1.0], 2.0).unwrap();
        for delta in [0.1, 0.5, 1.5] {
            let m1 = oscillation_modulus(&x, ModulusKind::M1, delta, 2.0).unwrap();
            let j1 = oscillation_modulus(&x, ModulusKind::J1, delta, 2.0).unwrap();
            let c = oscillation_modulus(&x, ModulusKind::C, delta, 2.0).unwrap();
            assert_eq!((m1.value, j1.value, c.value), (0.0, 0.0, 1.0));
            assert!(m1.exact && j1.exact && c.exact);
        }
    }

    #[test]
    fn spike_charges_j1_and_m1() {
        let x = CadlagPath::step(&[0.0, 1.0, 1.1], &[0.0, 1.0, 0.0], 2.0).unwrap();
        let j1 = oscillation_modulus(&x, ModulusKind::J1, 0.2, 2.0).unwrap().value;
        let m1 = oscillation_modulus(&x, ModulusKind::M1, 0.2, 2.0).unwrap().value;
        assert_eq!(j1, 1.0);
        assert_eq!(m1, 1.0);
        // Window too small to span the spike: segments 0.1 apart still fit,
        // but shrink below the spike width and all three kinds go flat.
        let tight = oscillation_modulus(&x, ModulusKind::J1, 0.05, 2.0).unwrap().value;
        assert_eq!(tight, 0.0);
    }

    #[test]
    fn constant_path_all_zero() {
        let x = CadlagPath::constant(s(3.0), 5.0).unwrap();
        for kind in [ModulusKind::C, ModulusKind::J1, ModulusKind::M1] {
            assert_eq!(oscillation_modulus(&x, kind, 0.7, 5.0).unwrap().value, 0.0);
        }
    }

    #[test]
    fn window_cuts_at_t_end() {
        let x = CadlagPath::step(&[0.0, 1.0, 1.1], &[0.0, 1.0, 0.0], 2.0).unwrap();
        // Up to T=1.05 the return to 0 is invisible.
        let j1 = oscillation_modulus(&x, ModulusKind::J1, 0.2, 1.05).unwrap().value;
        assert_eq!(j1, 0.0);
        let c = oscillation_modulus(&x, ModulusKind::C, 0.2, 1.05).unwrap().value;
        assert_eq!(c, 1.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let x = CadlagPath::constant(s(0.0), 1.0).unwrap();
        assert!(matches!(
            oscillation_modulus(&x, ModulusKind::C, 0.0, 1.0),
            Err(Error::BadDelta(_))
        ));
        assert!(matches!(
            oscillation_modulus(&x, ModulusKind::C, 0.1, 1.5),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn linear_ramp_is_flagged_approximate() {
        let x = CadlagPath::linear(&[0.0, 2.0], &[0.0, 2.0], 2.0).unwrap();
        let c = oscillation_modulus(&x, ModulusKind::C, 0.5, 2.0).unwrap();
        assert!(!c.exact);
        // Grid supremum sits within one grid step of the true value delta.
        assert!(c.value <= 0.5 && c.value >= 0.5 - 2.0 * 0.5 / 8.0);
        let m1 = oscillation_modulus(&x, ModulusKind::M1, 0.5, 2.0).unwrap();
        assert_eq!(m1.value, 0.0);
    }

    #[test]
    fn affine_jump_is_seen_through_left_limits() {
        // Ramp plus a unit drop at t=1, expressed via path algebra.
        let steps = CadlagPath::step(&[0.0, 1.0], &[0.0, -1.0], 2.0).unwrap();
        let ramp = CadlagPath::linear(&[0.0, 2.0], &[0.0, 2.0], 2.0).unwrap();
        let z = crate::path::combine(1.0, &steps, 1.0, &ramp).unwrap();
        let c = oscillation_modulus(&z, ModulusKind::C, 0.05, 2.0).unwrap();
        assert!(!c.exact);
        assert!(c.value >= 1.0 - 0.05, "jump must dominate: got {}", c.value);
    }

    #[test]
    fn step_exactness_against_brute_force() {
        // Dense triple enumeration over every breakpoint's value sequence,
        // with admissibility decided on raw times.
        let times = [0.0, 0.3, 0.45, 0.9, 1.0, 1.3, 1.85, 2.1];
        let vals = [0.5, -1.0, 2.0, 1.5, -0.5, 0.0, 3.0, 1.0];
        let x = CadlagPath::step(&times, &vals, 2.5).unwrap();
        for delta in [0.2, 0.5, 0.9, 2.0] {
            for kind in [ModulusKind::C, ModulusKind::J1, ModulusKind::M1] {
                let fast = oscillation_modulus(&x, kind, delta, 2.5).unwrap().value;
                let brute = brute_force(&x, kind, delta, 2.5);
                assert_relative_eq!(fast, brute, epsilon = 1e-12);
            }
        }
    }

    fn brute_force(x: &CadlagPath, kind: ModulusKind, delta: f64, t_end: f64) -> f64 {
        // Sample every segment at entry and just before exit.
        let mut pts: Vec<(f64, Point)> = Vec::new();
        for i in 0..x.times().len() {
            let a = x.times()[i];
            if a > t_end {
                break;
            }
            let b = x.segment_end(i).min(t_end);
            pts.push((a, x.values()[i]));
            if b > a {
                pts.push((b - WINDOW_TOL / 2.0, x.values()[i]));
            }
        }
        let mut best = 0.0f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    if pts[k].0 - pts[i].0 < delta && pts[i].0 < pts[j].0 && pts[j].0 < pts[k].0 {
                        best = best.max(triple_value(kind, pts[i].1, pts[j].1, pts[k].1));
                    }
                }
            }
        }
        best
    }

    #[test]
    fn grid_increment_examples() {
        let c = CadlagPath::constant(s(2.0), 2.0).unwrap();
        assert_eq!(grid_increment_max(&c, 7, 2.0).unwrap(), 0.0);
        let jump = CadlagPath::step(&[0.0, 1.0], &[0.0, 1.0], 2.0).unwrap();
        for k in [1usize, 2, 3, 10, 97] {
            assert_eq!(grid_increment_max(&jump, k, 2.0).unwrap(), 1.0);
        }
        let two = CadlagPath::step(&[0.0, 0.7, 1.3], &[0.0, 0.5, 1.7], 2.0).unwrap();
        let d = grid_increment_max(&two, 10_000, 2.0).unwrap();
        assert_relative_eq!(d, two.max_jump(2.0).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn jump_bound_on_staircases() {
        // Unit jumps at integers: no two jumps within half a unit.
        let times: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let vals: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let x = MonotonePath::step(&times, &vals, 10.0).unwrap();
        let (lhs, rhs) = jump_bound_check(&x, 0.5, 10.0).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));

        let single = MonotonePath::step(&[0.0, 1.0], &[0.0, 2.0], 3.0).unwrap();
        let (lhs, rhs) = jump_bound_check(&single, 0.4, 3.0).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs >= lhs);
    }

    #[test]
    fn jump_bound_on_fine_identity_staircase() {
        let n = 400;
        let times: Vec<f64> = (0..n).map(|i| i as f64 / 100.0).collect();
        let vals = times.clone();
        let x = MonotonePath::step(&times, &vals, 4.0).unwrap();
        let delta = 0.25;
        let (lhs, rhs) = jump_bound_check(&x, delta, 4.0).unwrap();
        assert!(lhs <= rhs);
        // Increments over a delta window track delta; the J1 modulus of a
        // near-identity path is half the window span.
        assert_relative_eq!(rhs, delta, epsilon = 0.02);
        assert_relative_eq!(lhs, delta / 2.0, epsilon = 0.02);
    }

    #[test]
    fn jump_bound_exact_vs_dense_grid() {
        let x = MonotonePath::step(&[0.0, 0.4, 0.9, 1.0, 1.7], &[0.0, 1.0, 1.5, 3.0, 3.2], 2.5)
            .unwrap();
        let delta = 0.3;
        let (_, rhs) = jump_bound_check(&x, delta, 2.5).unwrap();
        let mut brute = 0.0f64;
        let mut t = delta;
        while t <= 2.5 - delta {
            let f = x.eval1(t).unwrap() - x.eval1(t - delta).unwrap();
            let g = x.eval1(t + delta).unwrap() - x.eval1(t).unwrap();
            brute = brute.max(f.min(g));
            t += 1e-4;
        }
        // The grid brute force can itself read a hair across a jump, so the
        // comparison is two-sided with grid slack.
        assert!((rhs - brute).abs() <= 1e-3, "rhs={rhs} brute={brute}");
    }

    #[test]
    fn csv_rows_match_schema() {
        let rows = [ModulusRow {
            kind: ModulusKind::J1,
            delta: 0.25,
            t_end: 2.0,
            value: 0.5,
            exact: true,
        }];
        let out = modulus_table_csv(&rows);
        assert_eq!(out, "kind,delta,T,value,exact_flag\nJ1,0.25,2,0.5,1\n");
    }
}
