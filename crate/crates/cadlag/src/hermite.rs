//! Orthonormal Hermite functions on the real line.
//!
//! `h_0(t) = pi^{-1/4} e^{-t^2/2}`, `h_1(t) = sqrt(2) t h_0(t)`, and upward
//! `h_{k+1}(t) = sqrt(2/(k+1)) t h_k(t) - sqrt(k/(k+1)) h_{k-1}(t)`. The
//! recurrence stays in the orthonormal scale throughout, so no factorial ever
//! appears and every intermediate is bounded by `h_0(0)`.

use statrs::function::erf::erf;
use std::f64::consts::{PI, SQRT_2};

/// `sup_{k,t} |h_k(t)| = h_0(0) = pi^{-1/4}`.
pub fn hermite_sup() -> f64 {
    PI.powf(-0.25)
}

/// Value of the k-th orthonormal Hermite function.
pub fn hermite(k: usize, t: f64) -> f64 {
    let h0 = hermite_sup() * (-0.5 * t * t).exp();
    if k == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = SQRT_2 * t * h0;
    for j in 1..k {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * t * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[k] = h_k(t)` for every `k < out.len()`: one exponential and the
/// upward recurrence serve all modes, which the batched inner products rely on.
pub fn hermite_ladder(t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = hermite_sup() * (-0.5 * t * t).exp();
    if out.len() == 1 {
        return;
    }
    out[1] = SQRT_2 * t * out[0];
    for j in 1..out.len() - 1 {
        let jf = j as f64;
        out[j + 1] = (2.0 / (jf + 1.0)).sqrt() * t * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
    }
}

/// `int_0^x h_k(t) dt` in closed form.
///
/// `h_0` integrates to an error function, `h_1` to `-sqrt(2) h_0`, and higher
/// indices follow from the ladder identity
/// `h_k' = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}`,
/// which rearranges to an antiderivative recurrence. This is the reference
/// the quadrature-based inner products are validated against.
pub fn hermite_antiderivative(k: usize, x: f64) -> f64 {
    let a0 = hermite_sup() * (PI / 2.0).sqrt() * erf(x / SQRT_2);
    if k == 0 {
        return a0;
    }
    let a1 = -SQRT_2 * (hermite(0, x) - hermite(0, 0.0));
    if k == 1 {
        return a1;
    }
    let mut prev = a0;
    let mut cur = a1;
    for j in 1..k {
        let jf = j as f64;
        let next = ((jf / 2.0).sqrt() * prev - (hermite(j, x) - hermite(j, 0.0)))
            / ((jf + 1.0) / 2.0).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}
