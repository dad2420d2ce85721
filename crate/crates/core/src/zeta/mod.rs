//! Ihara zeta functions of finite graphs.
//!
//! `ζ_X(z)^{-1}` is computed two ways as exact integer polynomials: as
//! `det(I - zT)` for the Hashimoto (non-backtracking) operator `T` on darts,
//! and in Bass form `(1 - z²)^{ε-ν} det(I - Az + Qz²)`. The two agree on
//! graphs without half-loops.

mod modular;
mod oracle;
mod poly;
pub(crate) mod walks;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};

use crate::error::{Error, Result};
use crate::graph::{HalfEdgeGraph, IntMatrix};

pub use modular::det_one_minus_z;
pub use oracle::{primitive_cycle_oracle, CycleCensus, CycleClass, DEFAULT_NODE_BUDGET};
pub use poly::IntPolynomial;
use walks::{closed_walk_traces, Successors};

/// Default cap on the number of darts for exact determinants.
pub const DEFAULT_MAX_DARTS: usize = 1024;

/// Limits for exact computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaConfig {
    pub max_darts: usize,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        Self {
            max_darts: DEFAULT_MAX_DARTS,
        }
    }
}

impl ZetaConfig {
    /// Default configuration, with `ZETA_MAX_DARTS` overriding the dart cap.
    pub fn from_env() -> Self {
        let max_darts = std::env::var("ZETA_MAX_DARTS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_DARTS);
        Self { max_darts }
    }
}

/// Radius of the disc where the zeta product converges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidRadius {
    /// `1/(max degree - 1)`.
    Finite(Ratio<u64>),
    /// Graphs of maximum degree at most 1 have no closed geodesics.
    Unbounded,
}

impl ValidRadius {
    pub fn of(g: &HalfEdgeGraph) -> Self {
        match g.max_degree() {
            0 | 1 => ValidRadius::Unbounded,
            k => ValidRadius::Finite(Ratio::new(1, k as u64 - 1)),
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            ValidRadius::Unbounded => true,
            ValidRadius::Finite(r) => z.norm() < *r.numer() as f64 / *r.denom() as f64,
        }
    }
}

/// Exact reciprocal zeta function in Hashimoto and Bass forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaRational {
    /// `det(I - zT)`.
    pub hashimoto_det: IntPolynomial,
    /// `ε - ν`.
    pub bass_exponent: i64,
    /// `det(I - Az + Qz²)`.
    pub bass_det: IntPolynomial,
    pub valid_radius: ValidRadius,
    /// Whether the graph has half-loops, in which case the Bass form does not apply.
    pub has_half_loops: bool,
}

impl ZetaRational {
    /// Exact check of `det(I - zT) = (1 - z²)^(ε-ν) det(I - Az + Qz²)`.
    pub fn bass_identity_holds(&self) -> bool {
        let e = self.bass_exponent;
        let factor = IntPolynomial::one_minus_z_squared_pow(e.unsigned_abs() as u32);
        if e >= 0 {
            self.hashimoto_det == &factor * &self.bass_det
        } else {
            &factor * &self.hashimoto_det == self.bass_det
        }
    }
}

/// Result of evaluating `ζ^{-1}` at a complex point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEvaluation {
    pub value: Complex64,
    /// `|z|` lies inside the convergence disc of the Euler product.
    pub inside_radius: bool,
}

pub(crate) fn hashimoto_successors(g: &HalfEdgeGraph) -> Successors {
    Successors::from_lists((0..g.dart_count()).map(|d| {
        let back = g.reverse(d);
        g.darts_at(g.head(d))
            .iter()
            .copied()
            .filter(|&e| e != back)
            .collect()
    }))
}

pub(crate) fn vertex_successors(g: &HalfEdgeGraph) -> Successors {
    Successors::from_lists(
        (0..g.vertex_count()).map(|v| g.darts_at(v).iter().map(|&d| g.head(d)).collect()),
    )
}

/// Non-backtracking operator on darts: `T(d, d') = 1` iff `d'` starts where
/// `d` ends and `d'` is not the reversal of `d`. A half-loop is its own
/// reversal, so it never follows itself.
pub fn hashimoto_matrix(g: &HalfEdgeGraph) -> IntMatrix {
    let n = g.dart_count();
    let succ = hashimoto_successors(g);
    let mut t = IntMatrix::zeros(n, n);
    for d in 0..n {
        for &e in succ.of(d) {
            t[(d, e)] = 1;
        }
    }
    t
}

/// `det(I - Az + Qz²)` for square integer matrices of equal size, through
/// the linearization `[[A, -Q], [I, 0]]`.
pub fn quadratic_determinant(a: &IntMatrix, q: &IntMatrix) -> Result<IntPolynomial> {
    let n = a.nrows();
    if a.ncols() != n || q.shape() != (n, n) {
        return Err(Error::input("quadratic determinant needs square matrices of equal size"));
    }
    let mut l = IntMatrix::zeros(2 * n, 2 * n);
    l.view_mut((0, 0), (n, n)).copy_from(a);
    l.view_mut((0, n), (n, n)).copy_from(&(-q));
    l.view_mut((n, 0), (n, n)).fill_with_identity();
    Ok(det_one_minus_z(&l))
}

/// `det(I - Az + Qz²)` as an exact polynomial.
pub fn bass_determinant(g: &HalfEdgeGraph) -> IntPolynomial {
    quadratic_determinant(&g.adjacency_matrix(), &g.degree_matrix_q()).expect("graph matrices are square")
}

pub fn zeta_inverse(g: &HalfEdgeGraph, config: &ZetaConfig) -> Result<ZetaRational> {
    if g.dart_count() > config.max_darts {
        return Err(Error::ResourceLimit(format!(
            "{} darts exceed the exact-determinant cap of {} (set ZETA_MAX_DARTS to raise it)",
            g.dart_count(),
            config.max_darts
        )));
    }
    let hashimoto_det = det_one_minus_z(&hashimoto_matrix(g));
    let bass_det = bass_determinant(g);
    let zr = ZetaRational {
        hashimoto_det,
        bass_exponent: g.edge_count() as i64 - g.vertex_count() as i64,
        bass_det,
        valid_radius: ValidRadius::of(g),
        has_half_loops: g.has_half_loops(),
    };
    debug_assert!(zr.has_half_loops || zr.bass_identity_holds());
    Ok(zr)
}

/// Horner evaluation of `det(I - zT)`; flags points outside the convergence disc.
pub fn evaluate_zeta_inverse(zr: &ZetaRational, z: Complex64) -> ZetaEvaluation {
    ZetaEvaluation {
        value: zr.hashimoto_det.eval(z),
        inside_radius: zr.valid_radius.contains(z),
    }
}

/// `N_r = tr(T^r)` for `r = 1..=max_r`: closed non-backtracking tailless
/// dart cycles of length `r` with a marked starting dart.
pub fn closed_geodesic_counts(g: &HalfEdgeGraph, max_r: usize) -> Result<Vec<u128>> {
    if max_r == 0 {
        return Err(Error::input("max_r must be at least 1"));
    }
    closed_walk_traces(&hashimoto_successors(g), max_r)
}

/// Truncated `ln ζ(z) = Σ N_r z^r / r`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogZetaSeries {
    pub counts: Vec<u128>,
    pub dart_count: usize,
    /// Spectral radius bound for `T`: max degree minus one.
    pub q: usize,
}

impl LogZetaSeries {
    pub fn order(&self) -> usize {
        self.counts.len()
    }

    /// Exact coefficient of `z^r`, `r >= 1`.
    pub fn coefficient(&self, r: usize) -> BigRational {
        BigRational::new(BigInt::from(self.counts[r - 1]), BigInt::from(r))
    }

    pub fn coefficients(&self) -> Vec<BigRational> {
        (1..=self.order()).map(|r| self.coefficient(r)).collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(1.0, 0.0);
        for (i, &n) in self.counts.iter().enumerate() {
            power *= z;
            acc += power * (n as f64 / (i + 1) as f64);
        }
        acc
    }

    /// Bound on the omitted tail: `darts · Σ_{r>R} (q|z|)^r / r`, summed in
    /// closed form as a geometric majorant. Infinite when `q|z| >= 1`.
    pub fn tail_bound(&self, z_abs: f64) -> f64 {
        tail_bound(self.dart_count, self.q, self.order(), z_abs)
    }
}

pub(crate) fn tail_bound(darts: usize, q: usize, order: usize, z_abs: f64) -> f64 {
    let x = q as f64 * z_abs;
    if x >= 1.0 {
        return f64::INFINITY;
    }
    let next = (order + 1) as f64;
    darts as f64 * x.powf(next) / (next * (1.0 - x))
}

pub fn log_zeta_series(g: &HalfEdgeGraph, max_r: usize) -> Result<LogZetaSeries> {
    Ok(LogZetaSeries {
        counts: closed_geodesic_counts(g, max_r)?,
        dart_count: g.dart_count(),
        q: g.max_degree().saturating_sub(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::GraphBuilder;
    use num_traits::ToPrimitive;

    fn zeta(g: &HalfEdgeGraph) -> ZetaRational {
        zeta_inverse(g, &ZetaConfig::default()).unwrap()
    }

    #[test]
    fn single_edge_hashimoto_is_zero() {
        assert_eq!(hashimoto_matrix(&path(2)), IntMatrix::zeros(2, 2));
    }

    #[test]
    fn triangle_hashimoto_trace() {
        let t = hashimoto_matrix(&cycle(3));
        assert_eq!((&t * &t * &t).trace(), 6);
    }

    #[test]
    fn isolated_half_loop_cannot_repeat() {
        let mut b = GraphBuilder::new(1);
        b.add_half_loop(0);
        let g = b.build().unwrap();
        assert_eq!(hashimoto_matrix(&g), IntMatrix::zeros(1, 1));
        assert_eq!(zeta(&g).hashimoto_det, IntPolynomial::one());
    }

    #[test]
    fn triangle_zeta() {
        let zr = zeta(&cycle(3));
        let expected = IntPolynomial::from_i64(&[1, 0, 0, -1]).pow(2);
        assert_eq!(zr.hashimoto_det, expected);
        assert_eq!(zr.bass_exponent, 0);
        assert_eq!(zr.bass_det, expected);
        assert!(zr.bass_identity_holds());
    }

    #[test]
    fn tree_has_trivial_zeta() {
        let zr = zeta(&path(3));
        assert_eq!(zr.hashimoto_det, IntPolynomial::one());
        assert_eq!(zr.bass_exponent, -1);
        assert!(zr.bass_identity_holds());
    }

    #[test]
    fn k4_bass_factorization() {
        // (1 - z)(1 - 2z)(1 + z + 2z^2)^3, by exact elimination of det(I - Az + 2z^2 I)
        let expected = [
            IntPolynomial::from_i64(&[1, -1]),
            IntPolynomial::from_i64(&[1, -2]),
            IntPolynomial::from_i64(&[1, 1, 2]).pow(3),
        ]
        .iter()
        .fold(IntPolynomial::one(), |acc, p| &acc * p);
        let zr = zeta(&complete(4));
        assert_eq!(zr.bass_det, expected);
        assert_eq!(zr.bass_exponent, 2);
        assert!(zr.bass_identity_holds());
    }

    #[test]
    fn geodesic_counts_examples() {
        let c3 = closed_geodesic_counts(&cycle(3), 6).unwrap();
        assert_eq!(c3, vec![0, 0, 6, 0, 0, 6]);
        let c4 = closed_geodesic_counts(&cycle(4), 9).unwrap();
        assert!(c4.iter().step_by(2).all(|&n| n == 0));
        assert_eq!(closed_geodesic_counts(&complete(4), 3).unwrap()[2], 24);
    }

    #[test]
    fn counts_agree_with_matrix_powers() {
        let g = petersen();
        let t = hashimoto_matrix(&g);
        let counts = closed_geodesic_counts(&g, 8).unwrap();
        let mut power = t.clone();
        for n in counts {
            assert_eq!(power.trace() as u128, n);
            power = &power * &t;
        }
    }

    #[test]
    fn series_examples() {
        assert!(log_zeta_series(&path(4), 8).unwrap().counts.iter().all(|&n| n == 0));
        let s = log_zeta_series(&cycle(3), 6).unwrap();
        let coeffs: Vec<f64> = s.coefficients().iter().map(|c| c.to_f64().unwrap()).collect();
        assert_eq!(coeffs, vec![0.0, 0.0, 2.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn formal_log_matches_counts_on_petersen() {
        let g = petersen();
        let zr = zeta(&g);
        let traces = zr.hashimoto_det.log_derivative_traces(12);
        let counts = closed_geodesic_counts(&g, 12).unwrap();
        for (t, n) in traces.iter().zip(&counts) {
            assert_eq!(*t, BigInt::from(*n));
        }
    }

    #[test]
    fn evaluation_examples() {
        let c3 = zeta(&cycle(3));
        let at0 = evaluate_zeta_inverse(&c3, Complex64::new(0.0, 0.0));
        assert_eq!(at0.value, Complex64::new(1.0, 0.0));
        let half = evaluate_zeta_inverse(&c3, Complex64::new(0.5, 0.0));
        assert!((half.value.re - 49.0 / 64.0).abs() < 1e-15);
        assert!(half.inside_radius);

        let k4 = zeta(&complete(4));
        for i in 1..50 {
            let z = Complex64::new(0.5 * i as f64 / 50.0, 0.0);
            let v = evaluate_zeta_inverse(&k4, z);
            assert!(v.value.re > 0.0 && v.value.im == 0.0 && v.inside_radius);
        }
        assert!(!evaluate_zeta_inverse(&k4, Complex64::new(0.6, 0.0)).inside_radius);
    }

    #[test]
    fn regular_graphs_have_no_roots_inside_radius() {
        for (g, k) in [(complete(4), 3), (petersen(), 3), (complete(5), 4)] {
            let zr = zeta(&g);
            let r = 1.0 / (k as f64 - 1.0);
            for ring in 1..10 {
                for step in 0..64 {
                    let theta = std::f64::consts::TAU * step as f64 / 64.0;
                    let z = Complex64::from_polar(r * ring as f64 / 10.0, theta);
                    assert!(zr.hashimoto_det.eval(z).norm() > 1e-9);
                }
            }
        }
    }

    #[test]
    fn resource_limit_enforced() {
        let err = zeta_inverse(&complete(6), &ZetaConfig { max_darts: 10 }).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
    }

    #[test]
    fn tail_bound_behaviour() {
        let s = log_zeta_series(&complete(4), 20).unwrap();
        assert!(s.tail_bound(0.1) < 1e-14);
        assert!(s.tail_bound(0.6).is_infinite());
        // the bound dominates the actual remainder
        let long = log_zeta_series(&complete(4), 60).unwrap();
        let z = Complex64::new(0.3, 0.0);
        assert!((long.eval(z) - s.eval(z)).norm() <= s.tail_bound(0.3));
        assert!(s.counts.iter().map(|&n| n as f64).all(|n| n.is_finite()));
        assert!(s.coefficient(3).to_f64().unwrap() > 0.0);
    }
}
