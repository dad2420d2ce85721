//! Exact `det(I - zM)` for integer matrices by multi-modular characteristic
//! polynomials: Hessenberg reduction modulo word-size primes, then Chinese
//! remaindering into symmetric integer coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::IntPolynomial;
use crate::graph::IntMatrix;

/// Primes below 2^31, so that products of residues fit in `u64`.
struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    fn new() -> Self {
        Self { next: (1u64 << 31) - 1 }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let candidate = self.next;
            self.next -= 2;
            if is_prime(candidate) {
                return Some(candidate);
            }
        }
        None
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for `n < 3_215_031_751`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Monic characteristic polynomial `det(xI - M) mod p`, coefficients by
/// increasing power of `x`.
fn charpoly_mod(m: &IntMatrix, p: u64) -> Vec<u64> {
    let n = m.nrows();
    let pi = p as i64;
    let mut h: Vec<Vec<u64>> = (0..n)
        .map(|r| (0..n).map(|c| m[(r, c)].rem_euclid(pi) as u64).collect())
        .collect();

    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], p);
        for k in j + 2..n {
            if h[k][j] == 0 {
                continue;
            }
            let u = h[k][j] * inv % p;
            // row_k -= u * row_{j+1}
            let (upper, lower) = h.split_at_mut(k);
            let pivot_row = &upper[j + 1];
            for (x, &y) in lower[0][j..].iter_mut().zip(&pivot_row[j..]) {
                *x = (*x + p - u * y % p) % p;
            }
            // col_{j+1} += u * col_k
            for row in h.iter_mut() {
                if row[k] != 0 {
                    row[j + 1] = (row[j + 1] + u * row[k]) % p;
                }
            }
        }
    }

    // p_m = (x - h[m-1][m-1]) p_{m-1} - sum_i h[m-1-i][m-1] * t_i * p_{m-1-i}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut next = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + p - c * h[m - 1][m - 1] % p) % p;
        }
        let mut t = 1u64;
        for i in 1..m {
            t = t * h[m - i][m - i - 1] % p;
            if t == 0 {
                break;
            }
            let coeff = h[m - 1 - i][m - 1] * t % p;
            if coeff == 0 {
                continue;
            }
            for (k, &c) in polys[m - 1 - i].iter().enumerate() {
                next[k] = (next[k] + p - coeff * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// `log2` of a bound on the sum of absolute coefficients of `det(I - zM)`:
/// the permanent of `I + |M|` is at most the product of its row sums.
fn coefficient_bound_bits(m: &IntMatrix) -> f64 {
    (0..m.nrows())
        .map(|r| {
            let row: i64 = (0..m.ncols()).map(|c| m[(r, c)].abs()).sum();
            ((1 + row) as f64).log2()
        })
        .sum()
}

struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Crt {
    fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values
            .iter()
            .map(|v| if v > &half { v - &self.modulus } else { v.clone() })
            .collect()
    }

    fn absorb(&mut self, residues: &[u64], p: u64) {
        let pb = BigInt::from(p);
        let m_mod_p = (&self.modulus).mod_floor(&pb);
        let m_inv = inv_mod(
            u64::try_from(m_mod_p).expect("reduced modulus fits in u64"),
            p,
        );
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let v_mod_p = u64::try_from(v.mod_floor(&pb)).unwrap();
            let delta = (r + p - v_mod_p) % p * m_inv % p;
            if delta != 0 {
                *v += &self.modulus * BigInt::from(delta);
            }
        }
        self.modulus *= pb;
    }
}

/// Number of consecutive primes that must leave the reconstruction unchanged
/// before terminating ahead of the rigorous bound.
const STABLE_PRIMES: usize = 2;

/// Exact `det(I - zM)` for a square integer matrix.
pub fn det_one_minus_z(m: &IntMatrix) -> IntPolynomial {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    if n == 0 {
        return IntPolynomial::one();
    }
    let bound_bits = coefficient_bound_bits(m) + 2.0;
    let mut crt = Crt {
        modulus: BigInt::one(),
        values: vec![BigInt::zero(); n + 1],
    };
    let mut previous: Option<Vec<BigInt>> = None;
    let mut stable = 0;
    for p in PrimeStream::new() {
        let charpoly = charpoly_mod(m, p);
        // det(I - zM) = z^n charpoly(1/z): reverse the coefficients
        let reversed: Vec<u64> = charpoly.into_iter().rev().collect();
        crt.absorb(&reversed, p);
        let current = crt.symmetric();
        if crt.modulus.bits() as f64 > bound_bits {
            return IntPolynomial::new(current);
        }
        if previous.as_ref() == Some(&current) {
            stable += 1;
            if stable >= STABLE_PRIMES {
                return IntPolynomial::new(current);
            }
        } else {
            stable = 0;
        }
        previous = Some(current);
    }
    unreachable!("ran out of 31-bit primes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = PrimeStream::new().take(3).collect();
        assert_eq!(ps[0], 2147483647);
        assert!(ps.iter().all(|&p| is_prime(p)));
        assert!(!is_prime(2147483649));
    }

    #[test]
    fn small_determinants() {
        // M = [[1, 2], [3, 4]]: det(I - zM) = 1 - 5z - 2z^2
        let m = IntMatrix::from_row_slice(2, 2, &[1, 2, 3, 4]);
        assert_eq!(det_one_minus_z(&m), IntPolynomial::from_i64(&[1, -5, -2]));
        let z = IntMatrix::zeros(3, 3);
        assert_eq!(det_one_minus_z(&z), IntPolynomial::one());
    }

    #[test]
    fn large_coefficients_reconstruct() {
        // diag(1000, -999, 12345): product has many digits after powers
        let mut m = IntMatrix::zeros(6, 6);
        for (i, v) in [100000, -99999, 123456, 7, -77777, 31337].iter().enumerate() {
            m[(i, i)] = *v;
        }
        let expected = [100000i64, -99999, 123456, 7, -77777, 31337]
            .iter()
            .fold(IntPolynomial::one(), |acc, &v| &acc * &IntPolynomial::from_i64(&[1, -v]));
        assert_eq!(det_one_minus_z(&m), expected);
    }
}
