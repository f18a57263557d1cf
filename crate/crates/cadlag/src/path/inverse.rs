//! First-passage inversion of nondecreasing paths.

use crate::error::Result;
use crate::path::{CadlagPath, MonotonePath};
use crate::point::Point;

struct Builder {
    t: Vec<f64>,
    v: Vec<f64>,
    m: Vec<f64>,
}

impl Builder {
    /// Starts a new piece at level `s` with value `val` and slope `slope`,
    /// unless it continues the previous piece exactly.
    fn push(&mut self, s: f64, val: f64, slope: f64) {
        if let Some(k) = self.t.len().checked_sub(1) {
            let cont = self.v[k] + self.m[k] * (s - self.t[k]);
            if cont == val && self.m[k] == slope {
                return;
            }
        }
        self.t.push(s);
        self.v.push(val);
        self.m.push(slope);
    }
}

/// The first-passage inverse `tau(s) = inf{t : A(t) > s}`.
///
/// The output lives on `[0, A(horizon)]`: flat stretches of `A` become jumps of
/// `tau`, jumps of `A` become flat stretches, and a segment of slope `b > 0`
/// inverts to slope `1/b`. Levels at and above the terminal value of `A` are
/// first exceeded only past the end of the window, so the right edge of the
/// output carries `A`'s horizon as its value; requests beyond `A(horizon)` are
/// out of domain. With that convention inversion is an involution: applying it
/// twice returns the path restricted to its last passage time.
///
/// ```
/// use cadlag::{inverse, MonotonePath};
///
/// let a = MonotonePath::step(&[0.0, 1.0, 3.0], &[0.0, 0.5, 2.0], 4.0).unwrap();
/// let tau = inverse(&a).unwrap();
/// assert_eq!(tau.eval1(0.2).unwrap(), 1.0); // A first exceeds 0.2 at t = 1
/// assert_eq!(tau.eval1(0.5).unwrap(), 3.0); // the jump over 0.5 lands at t = 3
/// ```
pub fn inverse(a: &MonotonePath) -> Result<MonotonePath> {
    let p = a.as_path();
    let out_max = a.terminal_value();
    let mut b = Builder { t: Vec::new(), v: Vec::new(), m: Vec::new() };

    // Highest level covered so far; coverage is pushed left to right.
    let mut lev = 0.0_f64;
    let v0 = p.values()[0].x();
    if v0 > 0.0 {
        // A exceeds every level below A(0) immediately.
        b.push(0.0, 0.0, 0.0);
        lev = v0;
    }
    for i in 0..p.times().len() {
        let ti = p.times()[i];
        let vi = p.values()[i].x();
        if vi > lev {
            // A jumps over [lev, vi) at time ti.
            b.push(lev, ti, 0.0);
            lev = vi;
        }
        let mi = p.slopes()[i].x();
        if mi > 0.0 {
            let ei = vi + mi * (p.segment_end(i) - ti);
            if ei > lev {
                b.push(lev, ti + (lev - vi) / mi, 1.0 / mi);
                lev = ei;
            }
        }
    }
    // Levels from the terminal value on are never exceeded inside the window.
    b.push(lev, p.horizon(), 0.0);

    let starts: Vec<Point> = b.v.iter().map(|&v| Point::scalar(v)).collect();
    let slopes: Vec<Point> = b.m.iter().map(|&m| Point::scalar(m)).collect();
    MonotonePath::new(CadlagPath::from_parts(b.t, starts, slopes, out_max))
}
