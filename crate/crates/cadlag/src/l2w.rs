//! The truncated weak-dual metric on locally square-integrable paths.
//!
//! The distance is `sum_{k,l} 2^{-(k+l+1)} (1 and |int_0^l (x-y) h_k|)` with
//! `k` from 0 and `l` from 1; truncating at `k < K`, `l <= L` discards at most
//! `2^{-K} + 2^{-L}`, which is reported alongside every value. Two paths far
//! apart in sup norm can be close here: rapid oscillation averages out against
//! every fixed Hermite mode.

use crate::error::{Error, Result};
use crate::hermite::{hermite, hermite_ladder};
use crate::path::{combine, CadlagPath};
use crate::quad::{gauss16, gauss8, gl8_half, Kahan};

#[derive(Clone, Copy, Debug)]
pub struct L2wTruncation {
    /// Hermite indices run over `k < k_max`.
    pub k_max: usize,
    /// Interval lengths run over `1 <= l <= l_max`.
    pub l_max: usize,
    /// Absolute tolerance for each inner-product quadrature.
    pub quad_tol: f64,
}

impl Default for L2wTruncation {
    fn default() -> Self {
        L2wTruncation { k_max: 12, l_max: 8, quad_tol: 1e-9 }
    }
}

impl L2wTruncation {
    pub fn validate(&self) -> Result<()> {
        if self.k_max < 1 || self.l_max < 1 || !(self.quad_tol > 0.0) {
            return Err(Error::ConfigInvalid(
                "truncation needs k_max >= 1, l_max >= 1, quad_tol > 0".into(),
            ));
        }
        Ok(())
    }

    /// What the discarded modes can contribute at most.
    pub fn tail_bound(&self) -> f64 {
        2f64.powi(-(self.k_max as i32)) + 2f64.powi(-(self.l_max as i32))
    }
}

/// `int_0^l x(t) h_k(t) dt` for a scalar path, by composite Gauss-Legendre.
///
/// Panels never exceed `1/(k+1)` so the rule resolves the k-th mode's
/// oscillation. Each panel carries an embedded 8-point estimate; the pass is
/// accepted once the accumulated discrepancy is within `quad_tol`, else every
/// panel count doubles.
pub fn weak_inner(x: &CadlagPath, k: usize, l: usize, quad_tol: f64) -> Result<f64> {
    if x.dim() != 1 {
        return Err(Error::DimMismatch(1, x.dim()));
    }
    if l < 1 || (l as f64) > x.horizon() {
        return Err(Error::OutOfDomain { arg: l as f64, hi: x.horizon() });
    }
    if !(quad_tol > 0.0) {
        return Err(Error::ConfigInvalid("quad_tol must be positive".into()));
    }
    let mut scale = 1usize;
    let mut err = f64::INFINITY;
    for _ in 0..=20 {
        let (val, e) = inner_pass(x, k, l as f64, scale);
        if e <= quad_tol {
            return Ok(val);
        }
        err = e;
        scale *= 2;
    }
    Err(Error::QuadratureNonconverged { tol: quad_tol, err })
}

fn inner_pass(x: &CadlagPath, k: usize, upto: f64, scale: usize) -> (f64, f64) {
    let base = 1.0 / (k as f64 + 1.0);
    let mut acc = Kahan::new();
    let mut err = 0.0;
    for i in 0..x.times().len() {
        let a = x.times()[i];
        if a >= upto {
            break;
        }
        let b = x.segment_end(i).min(upto);
        if b <= a {
            continue;
        }
        let start = x.values()[i].x();
        let slope = x.slopes()[i].x();
        let panels = (((b - a) / base).ceil().max(1.0) as usize).saturating_mul(scale);
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { a + h * (p + 1) as f64 };
            let mut f = |t: f64| (start + slope * (t - a)) * hermite(k, t);
            let fine = gauss16(&mut f, lo, hi);
            err += (fine - gauss8(&mut f, lo, hi)).abs();
            acc.add(fine);
        }
    }
    (acc.sum(), err)
}

/// Every `int_0^l x h_k` for `k < k_count` and each cut `l` in one sweep.
///
/// Same integrals as [`weak_inner`], but one Hermite ladder per node serves
/// all modes and the running sums are snapshotted at each cut, so a
/// 10^5-segment path costs one traversal instead of `k_count * cuts` of them.
/// The panel rule is fixed at the finest mode's width with an 8-point rule
/// per panel; on the short segments of simulated paths that is far inside the
/// tolerance the adaptive routine would pick, and the unit tests pin the two
/// against each other. Returned as `out[cut_index][k]`.
pub fn weak_inner_batch(x: &CadlagPath, k_count: usize, cuts: &[usize]) -> Result<Vec<Vec<f64>>> {
    if x.dim() != 1 {
        return Err(Error::DimMismatch(1, x.dim()));
    }
    if k_count == 0 {
        return Err(Error::ConfigInvalid("k_count must be at least 1".into()));
    }
    if cuts.is_empty() || cuts[0] < 1 || cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ConfigInvalid("cuts must be ascending and start at 1 or more".into()));
    }
    let last = *cuts.last().unwrap() as f64;
    if last > x.horizon() {
        return Err(Error::OutOfDomain { arg: last, hi: x.horizon() });
    }

    let base = 1.0 / k_count as f64;
    let mut acc = vec![Kahan::new(); k_count];
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(cuts.len());
    let mut next_cut = 0usize;
    let mut ladder = vec![0.0f64; k_count];

    'segments: for i in 0..x.times().len() {
        let seg_start = x.times()[i];
        if seg_start >= last {
            break;
        }
        let seg_end = x.segment_end(i).min(last);
        if seg_end <= seg_start {
            continue;
        }
        let v0 = x.values()[i].x();
        let slope = x.slopes()[i].x();
        let mut a = seg_start;
        while a < seg_end {
            let cut = cuts[next_cut] as f64;
            let b = seg_end.min(cut);
            let panels = (((b - a) / base).ceil().max(1.0)) as usize;
            let h = (b - a) / panels as f64;
            for p in 0..panels {
                let lo = a + h * p as f64;
                let hi = if p + 1 == panels { b } else { a + h * (p + 1) as f64 };
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                for &(node, weight) in gl8_half() {
                    for t in [mid - half * node, mid + half * node] {
                        hermite_ladder(t, &mut ladder);
                        let xv = (v0 + slope * (t - seg_start)) * weight * half;
                        for (k, sum) in acc.iter_mut().enumerate() {
                            sum.add(xv * ladder[k]);
                        }
                    }
                }
            }
            // b lands exactly on the cut whenever the segment reaches it.
            if b == cut {
                out.push(acc.iter().map(Kahan::sum).collect());
                next_cut += 1;
                if next_cut == cuts.len() {
                    break 'segments;
                }
            }
            a = b;
        }
    }
    Ok(out)
}

/// Truncated metric between two scalar paths, with its truncation tail bound.
///
/// Summation order is fixed (ascending `l`, then `k`, compensated) so the
/// result is bit-identical regardless of caller parallelism.
///
/// ```
/// use cadlag::{l2w_distance, CadlagPath, L2wTruncation};
///
/// let trunc = L2wTruncation { k_max: 6, l_max: 2, quad_tol: 1e-8 };
/// let zero = CadlagPath::step(&[0.0], &[0.0], 2.0).unwrap();
/// let hops = |m: usize| {
///     let times: Vec<f64> = (0..2 * m).map(|i| i as f64 / m as f64).collect();
///     let values: Vec<f64> =
///         (0..2 * m).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
///     CadlagPath::step(&times, &values, 2.0).unwrap()
/// };
/// // Same sup norm, but the fast square wave averages itself away.
/// let (d_slow, _) = l2w_distance(&hops(1), &zero, &trunc).unwrap();
/// let (d_fast, tail) = l2w_distance(&hops(8), &zero, &trunc).unwrap();
/// assert!(d_fast < d_slow / 3.0);
/// assert!(tail < 0.3);
/// ```
pub fn l2w_distance(x: &CadlagPath, y: &CadlagPath, trunc: &L2wTruncation) -> Result<(f64, f64)> {
    trunc.validate()?;
    if x.dim() != 1 || y.dim() != 1 {
        return Err(Error::DimMismatch(1, x.dim().max(y.dim())));
    }
    let reach = trunc.l_max as f64;
    if x.horizon() < reach || y.horizon() < reach {
        return Err(Error::OutOfDomain { arg: reach, hi: x.horizon().min(y.horizon()) });
    }
    let diff = combine(1.0, x, -1.0, y)?;
    let mut acc = Kahan::new();
    for l in 1..=trunc.l_max {
        for k in 0..trunc.k_max {
            let inner = weak_inner(&diff, k, l, trunc.quad_tol)?;
            let weight = 2f64.powi(-((k + l + 1) as i32));
            acc.add(weight * inner.abs().min(1.0));
        }
    }
    Ok((acc.sum(), trunc.tail_bound()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_antiderivative;
    use approx::assert_relative_eq;

    fn ramp(horizon: f64) -> CadlagPath {
        CadlagPath::linear(&[0.0, horizon], &[0.0, horizon], horizon).unwrap()
    }

    #[test]
    fn inner_of_constant_one_is_the_antiderivative() {
        let one = CadlagPath::constant(crate::point::Point::scalar(1.0), 8.0).unwrap();
        for k in 0..7 {
            for l in [1usize, 2, 5, 8] {
                let got = weak_inner(&one, k, l, 1e-10).unwrap();
                assert_relative_eq!(got, hermite_antiderivative(k, l as f64), epsilon = 2e-10);
            }
        }
    }

    #[test]
    fn inner_of_sampled_ground_state_is_half_norm() {
        // h_0 staircase-sampled; int_0^inf h_0^2 = 1/2 by symmetry.
        let n = 8000;
        let times: Vec<f64> = (0..n).map(|i| 8.0 * i as f64 / n as f64).collect();
        let values: Vec<f64> = times.iter().map(|&t| hermite(0, t)).collect();
        let x = CadlagPath::step(&times, &values, 8.0).unwrap();
        let got = weak_inner(&x, 0, 8, 1e-10).unwrap();
        assert_relative_eq!(got, 0.5, epsilon = 5e-4);
    }

    #[test]
    fn zero_path_measures_zero() {
        let z = CadlagPath::constant(crate::point::Point::scalar(0.0), 8.0).unwrap();
        for k in 0..5 {
            assert_eq!(weak_inner(&z, k, 8, 1e-10).unwrap(), 0.0);
        }
        let (d, tail) = l2w_distance(&z, &z, &L2wTruncation::default()).unwrap();
        assert_eq!(d, 0.0);
        assert_relative_eq!(tail, 2f64.powi(-12) + 2f64.powi(-8));
    }

    #[test]
    fn identical_paths_at_distance_zero() {
        let x = ramp(8.0);
        let (d, _) = l2w_distance(&x, &x, &L2wTruncation::default()).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn symmetric_and_positive() {
        let x = ramp(8.0);
        let y = CadlagPath::step(&[0.0, 3.0], &[0.5, -1.0], 8.0).unwrap();
        let t = L2wTruncation::default();
        let (dxy, _) = l2w_distance(&x, &y, &t).unwrap();
        let (dyx, _) = l2w_distance(&y, &x, &t).unwrap();
        assert!(dxy > 0.0 && dxy < 1.0);
        assert_relative_eq!(dxy, dyx, max_relative = 1e-12);
    }

    #[test]
    fn window_shorter_than_l_is_rejected() {
        let x = ramp(4.0);
        let err = l2w_distance(&x, &x, &L2wTruncation::default()).unwrap_err();
        assert!(matches!(err, Error::OutOfDomain { .. }));
    }

    #[test]
    fn batch_matches_adaptive_inner_products() {
        use rand::Rng;
        let mut rng = crate::rng::substream(11, 0, 0, 0);
        let n = 400;
        let mut times = vec![0.0];
        for _ in 1..n {
            times.push(times.last().unwrap() + rng.gen_range(1e-4..0.02));
        }
        let horizon = times.last().unwrap() + 0.1;
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let step = CadlagPath::step(&times, &values, horizon.max(3.0)).unwrap();
        let cuts = [1usize, 2, 3];
        let batch = weak_inner_batch(&step, 3, &cuts).unwrap();
        for (ci, &l) in cuts.iter().enumerate() {
            for k in 0..3 {
                let reference = weak_inner(&step, k, l, 1e-11).unwrap();
                assert!(
                    (batch[ci][k] - reference).abs() < 1e-9,
                    "k={k} l={l}: batch {} vs {}",
                    batch[ci][k],
                    reference
                );
            }
        }
    }

    #[test]
    fn batch_handles_sloped_paths_and_prefixes() {
        let x = ramp(4.0);
        let batch = weak_inner_batch(&x, 4, &[1, 2]).unwrap();
        for k in 0..4 {
            for (ci, l) in [1usize, 2].iter().enumerate() {
                let reference = weak_inner(&x, k, *l, 1e-11).unwrap();
                assert!((batch[ci][k] - reference).abs() < 1e-9);
            }
        }
        // A shorter cut list is a prefix of a longer one.
        let only_one = weak_inner_batch(&x, 4, &[1]).unwrap();
        assert_eq!(only_one[0], batch[0]);
    }

    #[test]
    fn batch_rejects_bad_requests() {
        let x = ramp(4.0);
        assert!(weak_inner_batch(&x, 0, &[1]).is_err());
        assert!(weak_inner_batch(&x, 2, &[]).is_err());
        assert!(weak_inner_batch(&x, 2, &[2, 1]).is_err());
        assert!(weak_inner_batch(&x, 2, &[5]).is_err());
    }
}
