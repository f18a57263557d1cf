//! Cadlag paths on `[0, horizon]` with finitely many breakpoints.
//!
//! A path is stored as strictly increasing breakpoint times `t_0 = 0 < ... < t_m`,
//! the right-continuous value at each breakpoint, and one slope per segment
//! `[t_i, t_{i+1})`. Beyond `t_m` the path is constant at the last value, up to an
//! explicit `horizon`. STEP paths carry zero slopes; LINEAR paths are the
//! continuous chord interpolants. Operations that mix the two (see
//! [`combine`](crate::path::combine)) keep per-segment (start, slope) pairs, a
//! superset of both constructor modes.
//!
//! Values live in R^1 or R^2 ([`Point`]); left limits, jumps, integrals and
//! squared L2 norms all have segmentwise closed forms and are computed exactly.

mod algebra;
mod doc;
mod inverse;

pub use algebra::{combine, compose};
pub use doc::PathDoc;
pub use inverse::inverse;

use crate::error::{Error, Result};
use crate::point::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Step,
    Linear,
    /// Per-segment (start, slope) pairs with jumps allowed: produced by path
    /// algebra on mixed inputs, never by the public constructors.
    Affine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CadlagPath {
    times: Vec<f64>,
    starts: Vec<Point>,
    slopes: Vec<Point>,
    mode: Mode,
    horizon: f64,
}

impl CadlagPath {
    /// Canonical constructor. `mode` must be `Step` or `Linear`; under `Step`,
    /// breakpoints whose value repeats the previous one are merged away.
    pub fn new(times: &[f64], values: &[Point], mode: Mode, horizon: f64) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch { expected: times.len(), got: values.len() });
        }
        if times.is_empty() || times[0] != 0.0 {
            return Err(Error::NonMonotoneTimes);
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotoneTimes);
            }
        }
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::NonFiniteValue(i));
            }
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(i));
            }
        }
        let dim = values[0].dim();
        if let Some(v) = values.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimMismatch(dim, v.dim()));
        }
        if !horizon.is_finite() || horizon < *times.last().unwrap() {
            return Err(Error::OutOfDomain { arg: horizon, hi: *times.last().unwrap() });
        }

        let (times, starts) = match mode {
            Mode::Step => {
                let mut ts = Vec::with_capacity(times.len());
                let mut vs = Vec::with_capacity(values.len());
                for (&t, &v) in times.iter().zip(values) {
                    if vs.last() == Some(&v) {
                        continue;
                    }
                    ts.push(t);
                    vs.push(v);
                }
                (ts, vs)
            }
            Mode::Linear => (times.to_vec(), values.to_vec()),
            Mode::Affine => {
                return Err(Error::BadFormat("affine paths are built by path algebra, not new()"))
            }
        };

        let mut slopes = Vec::with_capacity(starts.len());
        for i in 0..starts.len() {
            let s = match mode {
                Mode::Step => Point::zero(dim),
                _ if i + 1 < starts.len() => {
                    (starts[i + 1] - starts[i]) * (1.0 / (times[i + 1] - times[i]))
                }
                _ => Point::zero(dim),
            };
            slopes.push(s);
        }

        Ok(CadlagPath { times, starts, slopes, mode, horizon })
    }

    /// Piecewise-constant scalar path holding `values[i]` on `[times[i], times[i+1])`.
    ///
    /// ```
    /// use cadlag::CadlagPath;
    ///
    /// let x = CadlagPath::step(&[0.0, 1.0, 2.5], &[0.0, 2.0, -1.0], 4.0).unwrap();
    /// assert_eq!(x.eval1(1.7).unwrap(), 2.0);
    /// assert_eq!(x.left_limit(1.0).unwrap().x(), 0.0);
    /// assert_eq!(x.integrate(2.0).unwrap().x(), 2.0);
    /// ```
    pub fn step(times: &[f64], values: &[f64], horizon: f64) -> Result<Self> {
        let pts: Vec<Point> = values.iter().map(|&v| Point::scalar(v)).collect();
        Self::new(times, &pts, Mode::Step, horizon)
    }

    /// Continuous scalar path interpolating `(times[i], values[i])` by chords,
    /// constant after the last breakpoint.
    pub fn linear(times: &[f64], values: &[f64], horizon: f64) -> Result<Self> {
        let pts: Vec<Point> = values.iter().map(|&v| Point::scalar(v)).collect();
        Self::new(times, &pts, Mode::Linear, horizon)
    }

    pub fn step_planar(times: &[f64], values: &[[f64; 2]], horizon: f64) -> Result<Self> {
        let pts: Vec<Point> = values.iter().map(|v| Point::planar(v[0], v[1])).collect();
        Self::new(times, &pts, Mode::Step, horizon)
    }

    pub fn linear_planar(times: &[f64], values: &[[f64; 2]], horizon: f64) -> Result<Self> {
        let pts: Vec<Point> = values.iter().map(|v| Point::planar(v[0], v[1])).collect();
        Self::new(times, &pts, Mode::Linear, horizon)
    }

    /// Constant path at `value` on `[0, horizon]`.
    pub fn constant(value: Point, horizon: f64) -> Result<Self> {
        Self::new(&[0.0], &[value], Mode::Step, horizon)
    }

    /// Assembles a path from raw parts produced by path algebra. The parts are
    /// assumed structurally valid (checked in debug builds); the mode tag is
    /// rederived from the representation.
    pub(crate) fn from_parts(
        times: Vec<f64>,
        starts: Vec<Point>,
        slopes: Vec<Point>,
        horizon: f64,
    ) -> Self {
        debug_assert_eq!(times.len(), starts.len());
        debug_assert_eq!(times.len(), slopes.len());
        debug_assert!(times[0] == 0.0);
        debug_assert!(times.windows(2).all(|w| w[1] > w[0]));
        debug_assert!(slopes.last().map_or(true, |s| s.norm() == 0.0));
        let mode = classify(&times, &starts, &slopes);
        CadlagPath { times, starts, slopes, mode, horizon }
    }

    /// Validating counterpart of [`from_parts`] for deserialized affine
    /// documents: the structural checks of [`new`] plus explicit slopes.
    pub(crate) fn from_checked_parts(
        times: &[f64],
        starts: &[Point],
        slopes: &[Point],
        horizon: f64,
    ) -> Result<Self> {
        // Linear mode runs every structural check without merging breakpoints.
        let base = CadlagPath::new(times, starts, Mode::Linear, horizon)?;
        if slopes.len() != base.times.len() {
            return Err(Error::LengthMismatch { expected: base.times.len(), got: slopes.len() });
        }
        for (i, s) in slopes.iter().enumerate() {
            if !s.is_finite() {
                return Err(Error::NonFiniteValue(i));
            }
            if s.dim() != base.dim() {
                return Err(Error::DimMismatch(base.dim(), s.dim()));
            }
        }
        if slopes.last().unwrap().norm_sq() != 0.0 {
            return Err(Error::BadFormat("the final segment of a path document must be flat"));
        }
        Ok(CadlagPath::from_parts(base.times, base.starts, slopes.to_vec(), horizon))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dim(&self) -> usize {
        self.starts[0].dim()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Point] {
        &self.starts
    }

    pub(crate) fn slopes(&self) -> &[Point] {
        &self.slopes
    }

    pub fn is_step(&self) -> bool {
        self.mode == Mode::Step
    }

    /// Index of the segment whose half-open interval contains `t`.
    pub(crate) fn segment_index(&self, t: f64) -> usize {
        self.times.partition_point(|&ti| ti <= t) - 1
    }

    /// Right end of segment `i` (the next breakpoint, or the horizon).
    pub(crate) fn segment_end(&self, i: usize) -> f64 {
        if i + 1 < self.times.len() {
            self.times[i + 1]
        } else {
            self.horizon
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < 0.0 || t > self.horizon {
            return Err(Error::OutOfDomain { arg: t, hi: self.horizon });
        }
        Ok(())
    }

    /// Right-continuous evaluation: exact stored values on STEP paths.
    pub fn eval(&self, t: f64) -> Result<Point> {
        self.check_domain(t)?;
        let i = self.segment_index(t);
        Ok(self.starts[i] + self.slopes[i] * (t - self.times[i]))
    }

    /// Scalar evaluation shorthand for one-dimensional paths.
    pub fn eval1(&self, t: f64) -> Result<f64> {
        if self.dim() != 1 {
            return Err(Error::DimMismatch(1, self.dim()));
        }
        Ok(self.eval(t)?.x())
    }

    /// Value just before the breakpoint structure at `t`; defined on `(0, horizon]`.
    pub fn left_limit(&self, t: f64) -> Result<Point> {
        self.check_domain(t)?;
        if t == 0.0 {
            return Err(Error::OutOfDomain { arg: t, hi: self.horizon });
        }
        if self.mode == Mode::Linear {
            return self.eval(t);
        }
        let i = self.segment_index(t);
        if self.times[i] == t {
            Ok(self.end_value(i - 1))
        } else {
            Ok(self.starts[i] + self.slopes[i] * (t - self.times[i]))
        }
    }

    /// Left limit at the right end of segment `i`.
    fn end_value(&self, i: usize) -> Point {
        self.starts[i] + self.slopes[i] * (self.segment_end(i) - self.times[i])
    }

    /// Jump size at breakpoint `i >= 1`; zero by definition on LINEAR paths.
    pub(crate) fn jump_at(&self, i: usize) -> f64 {
        if self.mode == Mode::Linear {
            return 0.0;
        }
        (self.starts[i] - self.end_value(i - 1)).norm()
    }

    /// `sup_{0 < s <= t} |x(s) - x(s-)|`: the largest jump in `(0, t]`.
    pub fn max_jump(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let mut best: f64 = 0.0;
        for i in 1..self.times.len() {
            if self.times[i] > t {
                break;
            }
            best = best.max(self.jump_at(i));
        }
        Ok(best)
    }

    /// `int_0^t x(s) ds`, segmentwise closed form.
    pub fn integrate(&self, t: f64) -> Result<Point> {
        self.check_domain(t)?;
        let mut acc = Point::zero(self.dim());
        for i in 0..self.times.len() {
            if self.times[i] >= t {
                break;
            }
            let w = self.segment_end(i).min(t) - self.times[i];
            acc = acc + self.starts[i] * w + self.slopes[i] * (w * w / 2.0);
        }
        Ok(acc)
    }

    /// The running integral `s -> int_0^s x` on `[0, t]` as a LINEAR path through
    /// the breakpoint values. Exact everywhere for STEP inputs; for inputs with
    /// slopes it is the chord interpolant, exact at breakpoints and at `t`.
    pub fn integral_path(&self, t: f64) -> Result<CadlagPath> {
        self.check_domain(t)?;
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        let mut acc = Point::zero(self.dim());
        for i in 0..self.times.len() {
            if self.times[i] > t {
                break;
            }
            ts.push(self.times[i]);
            vs.push(acc);
            let w = self.segment_end(i).min(t) - self.times[i];
            acc = acc + self.starts[i] * w + self.slopes[i] * (w * w / 2.0);
        }
        if *ts.last().unwrap() < t {
            ts.push(t);
            vs.push(acc);
        }
        CadlagPath::new(&ts, &vs, Mode::Linear, t)
    }

    /// `int_0^t |x(s)|^2 ds`, segmentwise closed form.
    pub fn l2_norm_sq(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let mut acc = 0.0;
        for i in 0..self.times.len() {
            if self.times[i] >= t {
                break;
            }
            let w = self.segment_end(i).min(t) - self.times[i];
            let s = self.starts[i];
            let b = self.slopes[i];
            acc += s.norm_sq() * w + s.dot(b) * w * w + b.norm_sq() * w * w * w / 3.0;
        }
        Ok(acc)
    }

    /// `sup_{0 <= s <= t} |x(s)|`. The norm is convex along each affine segment,
    /// so the supremum is attained at a segment endpoint (or a left limit).
    pub fn sup_norm(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let mut best: f64 = 0.0;
        for i in 0..self.times.len() {
            if self.times[i] > t {
                break;
            }
            best = best.max(self.starts[i].norm());
            let end = self.segment_end(i).min(t);
            best = best.max((self.starts[i] + self.slopes[i] * (end - self.times[i])).norm());
        }
        Ok(best)
    }
}

fn classify(times: &[f64], starts: &[Point], slopes: &[Point]) -> Mode {
    if slopes.iter().all(|s| s.norm() == 0.0) {
        return Mode::Step;
    }
    let continuous = (1..starts.len()).all(|i| {
        let end = starts[i - 1] + slopes[i - 1] * (times[i] - times[i - 1]);
        end == starts[i]
    });
    if continuous {
        Mode::Linear
    } else {
        Mode::Affine
    }
}

/// A scalar cadlag path validated nondecreasing and nonnegative: the domain of
/// first-passage inversion and the inner operand of composition.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotonePath(CadlagPath);

impl MonotonePath {
    pub fn new(path: CadlagPath) -> Result<Self> {
        if path.dim() != 1 {
            return Err(Error::DimMismatch(1, path.dim()));
        }
        if path.starts[0].x() < 0.0 {
            return Err(Error::NotMonotone);
        }
        for s in &path.slopes {
            if s.x() < 0.0 {
                return Err(Error::NotMonotone);
            }
        }
        for i in 1..path.times.len() {
            // Reconstructing a sloped segment's end value rounds a few ulps,
            // so a continuous nondecreasing path can appear to dip by that
            // much at a breakpoint. Forgive exactly that scale and no more.
            let end = path.end_value(i - 1).x();
            let slack = 16.0 * f64::EPSILON * (1.0 + end.abs());
            if path.starts[i].x() < end - slack {
                return Err(Error::NotMonotone);
            }
        }
        Ok(MonotonePath(path))
    }

    pub fn step(times: &[f64], values: &[f64], horizon: f64) -> Result<Self> {
        Self::new(CadlagPath::step(times, values, horizon)?)
    }

    pub fn linear(times: &[f64], values: &[f64], horizon: f64) -> Result<Self> {
        Self::new(CadlagPath::linear(times, values, horizon)?)
    }

    pub fn as_path(&self) -> &CadlagPath {
        &self.0
    }

    pub fn into_inner(self) -> CadlagPath {
        self.0
    }

    /// Final value, which the path holds from its last breakpoint to the horizon.
    pub fn terminal_value(&self) -> f64 {
        self.0.starts.last().unwrap().x()
    }

    /// True if the path increases strictly on every segment and never jumps:
    /// the hypothesis under which `A o inverse(A) o A = A` holds pointwise.
    pub fn is_strictly_increasing(&self) -> bool {
        let p = &self.0;
        let continuous = (1..p.times.len()).all(|i| p.jump_at(i) == 0.0);
        let rising = (0..p.times.len() - 1).all(|i| p.slopes[i].x() > 0.0);
        continuous && rising
    }

    /// Membership in the class of time changes starting at zero passage:
    /// `inverse(self)` maps 0 to 0 exactly when the path exceeds 0 immediately.
    pub fn starts_above_zero(&self) -> bool {
        self.0.starts[0].x() > 0.0
    }
}

impl std::ops::Deref for MonotonePath {
    type Target = CadlagPath;
    fn deref(&self) -> &CadlagPath {
        &self.0
    }
}
