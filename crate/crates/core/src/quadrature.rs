//! Tanh-sinh (double exponential) quadrature on finite intervals.
//!
//! The integrand receives the node `x` together with its distances to both
//! endpoints, computed without cancellation, so that integrands with
//! inverse-square-root endpoint singularities can be evaluated accurately.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Node passed to the integrand: `x = a + from_a = b - from_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub error_estimate: f64,
    pub levels: usize,
}

const MAX_LEVELS: usize = 12;
const T_MAX: f64 = 6.5;

/// `∫_a^b f`, halving the step until two successive levels agree to `tol`.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: Fn(Node) -> Complex64,
{
    if !(a < b) {
        return Err(Error::input(format!("empty integration interval [{a}, {b}]")));
    }
    let width = b - a;
    let term = |t: f64| -> Complex64 {
        let u = FRAC_PI_2 * t.sinh();
        let from_a = width / (1.0 + (-2.0 * u).exp());
        let from_b = width / (1.0 + (2.0 * u).exp());
        if from_a == 0.0 || from_b == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let cosh_u = u.cosh();
        let weight = 0.5 * width * FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if weight == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = if from_a < from_b { a + from_a } else { b - from_b };
        f(Node { x, from_a, from_b }) * weight
    };

    let mut h = 1.0;
    let mut sum = term(0.0);
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        let t = k as f64 * h;
        sum += term(t) + term(-t);
        k += 1;
    }
    let mut estimate = sum * h;
    for level in 1..=MAX_LEVELS {
        h /= 2.0;
        // only the odd multiples of the new step are new nodes
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            let t = k as f64 * h;
            sum += term(t) + term(-t);
            k += 2;
        }
        let next = sum * h;
        let error = (next - estimate).norm();
        estimate = next;
        if error <= tol && level >= 3 {
            return Ok(Quadrature {
                value: estimate,
                error_estimate: error,
                levels: level,
            });
        }
    }
    Err(Error::NonConvergence(format!(
        "tanh-sinh quadrature on [{a}, {b}] did not reach {tol:e} after {MAX_LEVELS} levels (last estimate {estimate})"
    )))
}
