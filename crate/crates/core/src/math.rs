//! Scalar and small-vector numeric kernels.
//!
//! Every dot product, norm, scaled update, and softmax in this crate routes
//! through these functions. The linear and MLP code paths must produce
//! identical floating-point operation sequences when they represent the same
//! model, so they share these kernels rather than inlining their own loops.

use alloc::vec;
use alloc::vec::Vec;

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Left-to-right dot product. Panics on length mismatch.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    let mut acc = 0.0;
    for k in 0..a.len() {
        acc += a[k] * b[k];
    }
    acc
}

/// Squared Euclidean norm, accumulated left to right.
pub fn norm_sq(a: &[f64]) -> f64 {
    let mut acc = 0.0;
    for &x in a {
        acc += x * x;
    }
    acc
}

pub fn norm(a: &[f64]) -> f64 {
    sqrt(norm_sq(a))
}

/// `out[k] += w * x[k]`.
pub fn axpy(out: &mut [f64], w: f64, x: &[f64]) {
    assert_eq!(out.len(), x.len(), "axpy: length mismatch");
    for k in 0..out.len() {
        out[k] += w * x[k];
    }
}

/// Returns `x + scale * g` as a fresh vector. This is the single update
/// kernel behind local SGD steps and consensus parameter updates.
pub fn add_scaled(x: &[f64], scale: f64, g: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), g.len(), "add_scaled: length mismatch");
    let mut out = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        out.push(x[k] + scale * g[k]);
    }
    out
}

/// In-place variant of [`add_scaled`].
pub fn add_scaled_in_place(x: &mut [f64], scale: f64, g: &[f64]) {
    assert_eq!(x.len(), g.len(), "add_scaled_in_place: length mismatch");
    for k in 0..x.len() {
        x[k] += scale * g[k];
    }
}

/// Numerically stable softmax: shifts by the maximum before exponentiating.
/// Output entries are strictly positive and sum to one up to rounding.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    assert!(!scores.is_empty(), "softmax: empty score vector");
    let mut max = scores[0];
    for &s in &scores[1..] {
        if s > max {
            max = s;
        }
    }
    let mut out = vec![0.0; scores.len()];
    let mut total = 0.0;
    for (k, &s) in scores.iter().enumerate() {
        let e = exp(s - max);
        out[k] = e;
        total += e;
    }
    for v in out.iter_mut() {
        *v /= total;
    }
    out
}

/// Draws an index from a probability vector using a single uniform sample.
/// The walk accumulates left to right; any rounding shortfall at the end
/// falls to the last index.
pub fn sample_categorical<R: rand::Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    debug_assert!(!probs.is_empty());
    let u: f64 = rng.gen::<f64>();
    let mut acc = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    probs.len() - 1
}

/// Infinity norm of a vector.
pub fn inf_norm(a: &[f64]) -> f64 {
    let mut m = 0.0;
    for &x in a {
        let v = abs(x);
        if v > m {
            m = v;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_matches_manual_expansion() {
        let a = [1.0, -2.0, 3.0];
        let b = [4.0, 0.5, -1.0];
        assert_eq!(dot(&a, &b), 1.0 * 4.0 + -2.0 * 0.5 + 3.0 * -1.0);
    }

    #[test]
    fn softmax_uniform_for_equal_scores() {
        let p = softmax(&[2.5, 2.5, 2.5, 2.5, 2.5]);
        for v in p {
            assert!((v - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn softmax_handles_large_scores() {
        let p = softmax(&[1000.0, 0.0]);
        assert!(p[0] > 0.999_999);
        assert!(p[1] > 0.0);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn categorical_sampling_respects_point_mass() {
        let mut rng = rand::thread_rng();
        for _ in 0..100 {
            assert_eq!(sample_categorical(&[0.0, 1.0, 0.0], &mut rng), 1);
        }
    }
}
