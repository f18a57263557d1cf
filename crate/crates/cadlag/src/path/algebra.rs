//! Pointwise combination and time change of paths.

use crate::error::{Error, Result};
use crate::path::{CadlagPath, MonotonePath};
use crate::point::Point;

/// Breakpoints closer than this are merged; the value change lands on the
/// surviving (earlier) time.
const MERGE_TOL: f64 = 1e-12;

/// The pointwise combination `a*x + b*y` on the common window.
///
/// Breakpoints of both inputs are merged with an absolute tolerance of 1e-12
/// and the horizon is the smaller of the two. Mixing a step path with a
/// piecewise linear one gives a path that is affine on each segment but
/// neither pure mode.
pub fn combine(a: f64, x: &CadlagPath, b: f64, y: &CadlagPath) -> Result<CadlagPath> {
    if x.dim() != y.dim() {
        return Err(Error::DimMismatch(x.dim(), y.dim()));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFiniteValue(0));
    }
    let horizon = x.horizon().min(y.horizon());

    let mut times: Vec<f64> = Vec::with_capacity(x.times().len() + y.times().len());
    let (xs, ys) = (x.times(), y.times());
    let (mut i, mut j) = (0, 0);
    while i < xs.len() || j < ys.len() {
        let u = match (xs.get(i), ys.get(j)) {
            (Some(&tx), Some(&ty)) if tx <= ty => {
                i += 1;
                tx
            }
            (Some(_), Some(&ty)) => {
                j += 1;
                ty
            }
            (Some(&tx), None) => {
                i += 1;
                tx
            }
            (None, Some(&ty)) => {
                j += 1;
                ty
            }
            (None, None) => unreachable!(),
        };
        if u > horizon {
            break;
        }
        match times.last() {
            Some(&prev) if u - prev <= MERGE_TOL => {}
            _ => times.push(u),
        }
    }

    build_affine(&times, horizon, |u| {
        let xv = x.eval(u).expect("time within both windows");
        let yv = y.eval(u).expect("time within both windows");
        let xm = x.slopes()[x.segment_index(u)];
        let ym = y.slopes()[y.segment_index(u)];
        (xv * a + yv * b, xm * a + ym * b)
    })
}

/// The time change `x(y(t))` for a nondecreasing clock `y`.
///
/// Output breakpoints are `y`'s own plus the preimages under `y` of `x`'s
/// breakpoints across rising segments, merged with the 1e-12 tolerance. The
/// result is exact piecewise affine: where `y` rises with slope `m` through a
/// segment of `x` with slope `s`, the composite has slope `s*m`. Fails with
/// `RangeMismatch` when the clock runs past `x`'s window.
pub fn compose(x: &CadlagPath, y: &MonotonePath) -> Result<CadlagPath> {
    let ymax = y.terminal_value();
    if ymax > x.horizon() {
        return Err(Error::RangeMismatch { needed: ymax, available: x.horizon() });
    }

    // (time, Some(c)) marks a preimage of the x-breakpoint at level c; the
    // tag pins evaluation to c so float error in the preimage cannot land the
    // lookup on the wrong side of x's kink.
    let mut cand: Vec<(f64, Option<f64>)> =
        y.times().iter().map(|&u| (u, None)).collect();
    let yt = y.times();
    for j in 0..yt.len() {
        let m = y.slopes()[j].x();
        if m <= 0.0 {
            continue;
        }
        let (uj, vj) = (yt[j], y.values()[j].x());
        let ej = vj + m * (y.segment_end(j) - uj);
        // x-breakpoints strictly inside the span (vj, ej); the endpoint vj is
        // already covered by uj itself.
        let lo = x.times().partition_point(|&c| c <= vj);
        let hi = x.times().partition_point(|&c| c < ej);
        for &c in &x.times()[lo..hi] {
            cand.push((uj + (c - vj) / m, Some(c)));
        }
    }
    cand.sort_by(|p, q| p.0.total_cmp(&q.0));

    let mut times: Vec<f64> = Vec::with_capacity(cand.len());
    let mut tags: Vec<Option<f64>> = Vec::with_capacity(cand.len());
    for (u, tag) in cand {
        match times.last() {
            Some(&prev) if u - prev <= MERGE_TOL => {
                // A clock breakpoint wins over a preimage at the same spot:
                // its position and stored value are exact and already
                // right-continuous, so shift the kept time onto it.
                if tag.is_none() {
                    *times.last_mut().expect("nonempty") = u;
                    *tags.last_mut().expect("nonempty") = None;
                }
            }
            _ => {
                times.push(u);
                tags.push(tag);
            }
        }
    }

    let horizon = y.horizon();
    let mut k = 0;
    build_affine(&times, horizon, |u| {
        let tag = tags[k];
        k += 1;
        let target = match tag {
            Some(c) => c,
            None => y.eval1(u).expect("time within the clock window"),
        };
        let start = x.eval(target).expect("clock range checked against x");
        let sx = x.slopes()[x.segment_index(target)];
        let sy = y.slopes()[y.segment_index(u)].x();
        (start, sx * sy)
    })
}

/// Assembles a path from per-breakpoint starts and slopes, closing the final
/// segment with an extra breakpoint at the horizon when it still slopes.
fn build_affine(
    times: &[f64],
    horizon: f64,
    mut at: impl FnMut(f64) -> (Point, Point),
) -> Result<CadlagPath> {
    let mut t = Vec::with_capacity(times.len() + 1);
    let mut starts: Vec<Point> = Vec::with_capacity(times.len() + 1);
    let mut slopes: Vec<Point> = Vec::with_capacity(times.len() + 1);
    for &u in times {
        let (s, m) = at(u);
        // Candidate breakpoints that continue the previous segment exactly
        // are not breakpoints of the result.
        if let Some(k) = t.len().checked_sub(1) {
            let cont = starts[k] + slopes[k] * (u - t[k]);
            if cont == s && slopes[k] == m {
                continue;
            }
        }
        t.push(u);
        starts.push(s);
        slopes.push(m);
    }
    let last = slopes.last().expect("paths have a breakpoint at zero");
    if last.norm_sq() != 0.0 {
        let tm = *t.last().expect("nonempty");
        if horizon - tm > MERGE_TOL {
            let closed = starts[starts.len() - 1] + *last * (horizon - tm);
            t.push(horizon);
            starts.push(closed);
            slopes.push(Point::zero(closed.dim()));
        } else {
            *slopes.last_mut().expect("nonempty") = Point::zero(last.dim());
        }
    }
    Ok(CadlagPath::from_parts(t, starts, slopes, horizon))
}
