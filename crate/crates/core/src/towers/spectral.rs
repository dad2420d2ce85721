use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Tower;
use crate::error::{Error, Result};
use crate::graph::HalfEdgeGraph;
use crate::quadrature::{tanh_sinh, Node};
use crate::zeta::vertex_successors;
use crate::zeta::walks::closed_walk_traces;

/// Absolute tolerance of the closed-form spectral integrals.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

/// Support of the limiting Markov spectral measure of the Grigorchuk
/// Schreier graphs.
pub const GRIGORCHUK_SUPPORT: [(f64, f64); 2] = [(-0.5, 0.0), (0.5, 1.0)];

/// Spectral measure of the Markov operator `A/k`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralMeasure {
    /// Uniform weights on the sorted eigenvalues of a finite regular graph.
    Discrete { eigenvalues: Vec<f64> },
    /// Density `|1 - 4x| / (2π √(x(2x-1)(2x+1)(1-x)))` on `[-1/2, 0] ∪ [1/2, 1]`.
    Grigorchuk,
}

/// Grigorchuk density at `x`; zero off the support.
pub fn grigorchuk_density(x: f64) -> f64 {
    let inside = GRIGORCHUK_SUPPORT.iter().any(|&(a, b)| a < x && x < b);
    if !inside {
        return 0.0;
    }
    (1.0 - 4.0 * x).abs() / (2.0 * PI * (x * (2.0 * x - 1.0) * (2.0 * x + 1.0) * (1.0 - x)).sqrt())
}

/// Density at a quadrature node, with the vanishing factors of the square
/// root taken from the endpoint distances.
fn density_at(node: Node, interval: usize) -> f64 {
    let x = node.x;
    let product = if interval == 0 {
        // x in [-1/2, 0]: 2x + 1 = 2 from_a, |x| = from_b
        node.from_b * (1.0 - 2.0 * x) * (2.0 * node.from_a) * (1.0 - x)
    } else {
        // x in [1/2, 1]: 2x - 1 = 2 from_a, 1 - x = from_b
        x * (2.0 * node.from_a) * (2.0 * x + 1.0) * node.from_b
    };
    (1.0 - 4.0 * x).abs() / (2.0 * PI * product.sqrt())
}

impl SpectralMeasure {
    /// `∫ f dσ`.
    pub fn integrate<F>(&self, f: F) -> Result<Complex64>
    where
        F: Fn(f64) -> Complex64,
    {
        match self {
            SpectralMeasure::Discrete { eigenvalues } => {
                let n = eigenvalues.len() as f64;
                Ok(eigenvalues.iter().map(|&l| f(l)).sum::<Complex64>() / n)
            }
            SpectralMeasure::Grigorchuk => {
                let mut total = Complex64::new(0.0, 0.0);
                for (i, &(a, b)) in GRIGORCHUK_SUPPORT.iter().enumerate() {
                    let q = tanh_sinh(|node| f(node.x) * density_at(node, i), a, b, QUADRATURE_TOLERANCE / 2.0)?;
                    total += q.value;
                }
                Ok(total)
            }
        }
    }

    pub fn mass(&self) -> Result<f64> {
        Ok(self.integrate(|_| Complex64::new(1.0, 0.0))?.re)
    }

    pub fn moment(&self, j: u32) -> Result<f64> {
        Ok(self.integrate(|x| Complex64::new(x.powi(j as i32), 0.0))?.re)
    }
}

/// Eigenvalues of `A/k` for a `k`-regular graph, sorted, with values within
/// `1e-9` of `±1` clamped onto the interval.
pub fn discrete_spectral_measure(g: &HalfEdgeGraph) -> Result<SpectralMeasure> {
    let k = g
        .regular_degree()
        .filter(|&k| k > 0)
        .ok_or_else(|| Error::input("spectral measure needs a regular graph of positive degree"))?;
    let a = g.adjacency_matrix();
    let m = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] as f64 / k as f64);
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .map(|&l| {
            if l.abs() > 1.0 && l.abs() < 1.0 + 1e-9 {
                l.signum()
            } else {
                l
            }
        })
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(SpectralMeasure::Discrete { eigenvalues })
}

/// Exact moments `tr((A/k)^j) / |X_m|` of every level.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub vertices: Vec<usize>,
    /// `moments[level][j]` for `j = 0..=max_moment`.
    pub moments: Vec<Vec<BigRational>>,
}

impl MomentTable {
    /// `|moment_j(m) - moment_j(m - 1)|` for the 1-based levels `m = 2..`.
    pub fn diffs(&self, j: usize) -> Vec<BigRational> {
        self.moments
            .windows(2)
            .map(|w| (&w[1][j] - &w[0][j]).abs())
            .collect()
    }

    /// Whether `Δ_m = |moment_j(m) - moment_j(m - 1)|` strictly decreases
    /// over the 1-based levels `m >= from`, allowing it to stay at exactly zero.
    pub fn diffs_shrink_from(&self, j: usize, from: usize) -> bool {
        let d = self.diffs(j);
        d[from.saturating_sub(2).min(d.len())..]
            .windows(2)
            .all(|w| w[1] < w[0] || (w[0].is_zero() && w[1].is_zero()))
    }
}

pub fn moment_convergence(tower: &Tower, max_moment: usize) -> Result<MomentTable> {
    let mut vertices = Vec::new();
    let mut moments = Vec::new();
    for level in &tower.levels {
        let g = &level.graph;
        let k = g
            .regular_degree()
            .filter(|&k| k > 0)
            .ok_or_else(|| Error::input("moments need regular levels"))?;
        let nu = BigInt::from(g.vertex_count());
        let traces = if max_moment == 0 {
            Vec::new()
        } else {
            closed_walk_traces(&vertex_successors(g), max_moment)?
        };
        let mut row = vec![BigRational::from_integer(1.into())];
        for (j, &t) in traces.iter().enumerate() {
            let denom = BigInt::from(k).pow(j as u32 + 1) * &nu;
            row.push(BigRational::new(BigInt::from(t), denom));
        }
        vertices.push(g.vertex_count());
        moments.push(row);
    }
    Ok(MomentTable { vertices, moments })
}

/// `∫ ln(1 - (pλ + d)z + (p - 1 + d)z²) dσ(λ)` with the principal logarithm.
pub fn spectral_log_f(measure: &SpectralMeasure, p: u32, d: u32, z: Complex64) -> Result<Complex64> {
    let (p, d) = (p as f64, d as f64);
    measure.integrate(|l| (Complex64::new(1.0, 0.0) - (p * l + d) * z + (p - 1.0 + d) * z * z).ln())
}

/// How the closed-form integrand is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrandReading {
    /// `ln(1 - 8xz + 7z²)`.
    Logarithmic,
    /// `1 - 8xz + 7z²` without the logarithm.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrigorchukLogZeta {
    pub value: Complex64,
    pub reading: IntegrandReading,
}

/// `-3 ln(1 - z²) - ∫ g(x) dσ(x)` over the Grigorchuk measure, with `g`
/// chosen by `reading`. In the logarithmic reading this is the normalized
/// log-zeta of the 8-regular Schreier graphs in which every generator
/// contributes an edge at every vertex.
pub fn grigorchuk_log_zeta(z: Complex64, reading: IntegrandReading) -> Result<GrigorchukLogZeta> {
    let one = Complex64::new(1.0, 0.0);
    let integral = match reading {
        IntegrandReading::Logarithmic => spectral_log_f(&SpectralMeasure::Grigorchuk, 8, 0, z)?,
        IntegrandReading::Raw => SpectralMeasure::Grigorchuk.integrate(|x| one - 8.0 * x * z + 7.0 * z * z)?,
    };
    Ok(GrigorchukLogZeta {
        value: -3.0 * (one - z * z).ln() - integral,
        reading,
    })
}
