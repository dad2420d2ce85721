use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial in `z` with exact integer coefficients; index is the power of `z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `(1 - z^2)^k` for `k >= 0`.
    pub fn one_minus_z_squared_pow(k: u32) -> Self {
        Self::from_i64(&[1, 0, -1]).pow(k)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, power: usize) -> BigInt {
        self.coefficients.get(power).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Horner evaluation at a complex point. Coefficients are rounded to `f64`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
            })
    }

    /// Largest coefficient magnitude, for diagnostics.
    pub fn max_abs_coefficient(&self) -> BigInt {
        self.coefficients.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Coefficients of `-z P'(z) / P(z)` up to `z^max_r`, for `P(0) = 1`.
    /// For `P = det(I - zT)` these are the traces `tr(T^r)` (Newton identities).
    pub fn log_derivative_traces(&self, max_r: usize) -> Vec<BigInt> {
        assert!(
            self.coefficient(0).is_one(),
            "log-derivative expansion needs constant term 1"
        );
        let mut traces: Vec<BigInt> = Vec::with_capacity(max_r);
        for r in 1..=max_r {
            let mut acc = -BigInt::from(r) * self.coefficient(r);
            for i in 1..r {
                acc -= self.coefficient(i) * &traces[r - i - 1];
            }
            traces.push(acc);
        }
        traces
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (p, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}z")?,
                (_, true) => write!(f, "z^{p}")?,
                (_, false) => write!(f, "{mag}z^{p}")?,
            }
        }
        Ok(())
    }
}
