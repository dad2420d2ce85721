use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::Tower;
use crate::error::{Error, Result};
use crate::graph::MarkedGraph;
use crate::voltage::{induced_cover_of_bundles, build_bundle, VoltageAssignment};
use crate::zeta::{log_zeta_series, tail_bound, zeta_inverse, ZetaConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Truncation order `R`.
    pub order: usize,
    /// Largest admissible normalized tail bound.
    pub tolerance: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            order: 30,
            tolerance: 1e-8,
        }
    }
}

/// Truncated `(1/|X_n|) ln ζ_{X_n}` of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSeries {
    /// 1-based level number.
    pub level: usize,
    pub vertices: usize,
    pub darts: usize,
    /// Max degree minus one.
    pub q: usize,
    /// `N_1, …, N_R`.
    pub counts: Vec<u128>,
    /// Series value at each sample point.
    pub values: Vec<Complex64>,
    /// Normalized tail bound at each sample point.
    pub tail_bounds: Vec<f64>,
}

impl LevelSeries {
    /// `N_r / (r |X_n|)`.
    pub fn coefficient(&self, r: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.counts[r - 1]),
            BigInt::from(r) * BigInt::from(self.vertices),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedLogZeta {
    pub z: Vec<Complex64>,
    pub order: usize,
    pub levels: Vec<LevelSeries>,
    /// `|V(X_1)|`, the exponent base of the normalization.
    pub first_vertices: usize,
}

impl NormalizedLogZeta {
    /// `|value_n - value_{n-1}|` at sample `zi`; `None` for the first level.
    pub fn diffs(&self, zi: usize) -> Vec<Option<f64>> {
        (0..self.levels.len())
            .map(|n| {
                (n > 0).then(|| (self.levels[n].values[zi] - self.levels[n - 1].values[zi]).norm())
            })
            .collect()
    }

    /// Whether `Δ_m = |value_m - value_{m-1}|` strictly decreases over the
    /// 1-based levels `m >= from`, allowing it to stay at exactly zero.
    pub fn diffs_shrink_from(&self, zi: usize, from: usize) -> bool {
        let d: Vec<f64> = self.diffs(zi).into_iter().skip(from.saturating_sub(1)).flatten().collect();
        d.windows(2).all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0))
    }

    /// Last-level value with an error bar of the last difference plus the tail bound.
    pub fn limit_estimate(&self, zi: usize) -> (Complex64, f64) {
        let last = self.levels.last().expect("towers are nonempty");
        let diff = self.diffs(zi).last().copied().flatten().unwrap_or(0.0);
        (last.values[zi], diff + last.tail_bounds[zi])
    }

    /// `ζ_{X_n}(z)^{|V(X_1)|/|V(X_n)|} = exp(|V(X_1)| · value_n)`.
    pub fn normalized_power(&self, level: usize, zi: usize) -> Complex64 {
        (self.levels[level].values[zi] * self.first_vertices as f64).exp()
    }
}

/// Truncated normalized log-zeta series of every level at each sample point.
/// Fails when the tail bound exceeds the tolerance at some level and point.
pub fn normalized_log_zeta(tower: &Tower, config: &SeriesConfig, z: &[Complex64]) -> Result<NormalizedLogZeta> {
    if config.order == 0 {
        return Err(Error::input("series order must be at least 1"));
    }
    let mut levels = Vec::with_capacity(tower.len());
    for (n, level) in tower.levels.iter().enumerate() {
        let g = &level.graph;
        let series = log_zeta_series(g, config.order)?;
        let nu = g.vertex_count() as f64;
        let tail_bounds: Vec<f64> = z
            .iter()
            .map(|zz| tail_bound(g.dart_count(), series.q, config.order, zz.norm()) / nu)
            .collect();
        if let Some((i, t)) = tail_bounds.iter().enumerate().find(|(_, &t)| !(t <= config.tolerance)) {
            return Err(Error::NonConvergence(format!(
                "level {}: tail bound {t:e} at z = {} exceeds {:e} with order {}",
                n + 1,
                z[i],
                config.tolerance,
                config.order
            )));
        }
        levels.push(LevelSeries {
            level: n + 1,
            vertices: g.vertex_count(),
            darts: g.dart_count(),
            q: series.q,
            values: z.iter().map(|&zz| series.eval(zz) / nu).collect(),
            counts: series.counts,
            tail_bounds,
        });
    }
    Ok(NormalizedLogZeta {
        z: z.to_vec(),
        order: config.order,
        first_vertices: tower.levels[0].graph.vertex_count(),
        levels,
    })
}

/// `ζ_{X_n}(z)^{|V(X_1)|/|V(X_n)|}` from the exact polynomial of each level.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaPowerLevel {
    pub level: usize,
    pub vertices: usize,
    pub values: Vec<Complex64>,
}

pub fn normalized_zeta_power(
    tower: &Tower,
    z: &[Complex64],
    config: &ZetaConfig,
) -> Result<Vec<ZetaPowerLevel>> {
    let first = tower.levels[0].graph.vertex_count() as f64;
    tower
        .levels
        .iter()
        .enumerate()
        .map(|(n, level)| {
            let zr = zeta_inverse(&level.graph, config)?;
            let exponent = first / level.graph.vertex_count() as f64;
            let values = z
                .iter()
                .map(|&zz| (-zr.hashimoto_det.eval(zz).ln() * exponent).exp())
                .collect();
            Ok(ZetaPowerLevel {
                level: n + 1,
                vertices: level.graph.vertex_count(),
                values,
            })
        })
        .collect()
}

/// Tower of bundles over a tower, with voltages pulled back level by level.
#[derive(Debug, Clone)]
pub struct BundleTower {
    pub tower: Tower,
    pub voltages: Vec<VoltageAssignment>,
}

/// Pulls `φ_1` on the first level up the tower, `φ_{m+1} = φ_m ∘ p_m`, and
/// joins the bundles by the induced coverings. The basepoint of each bundle
/// is `(w_m, fiber_basepoint)`.
pub fn bundle_tower(tower: &Tower, phi: &VoltageAssignment, fiber_basepoint: usize) -> Result<BundleTower> {
    if phi.base() != &tower.levels[0].graph {
        return Err(Error::input("voltage assignment is not on the first level"));
    }
    let nf = phi.fiber().vertex_count();
    if fiber_basepoint >= nf {
        return Err(Error::input("fiber basepoint out of range"));
    }
    let mut voltages = vec![phi.clone()];
    let mut maps = Vec::with_capacity(tower.maps.len());
    for p in &tower.maps {
        let (psi, lifted) = induced_cover_of_bundles(p, voltages.last().expect("nonempty"))?;
        voltages.push(psi);
        maps.push(lifted);
    }
    let levels = voltages
        .iter()
        .zip(&tower.levels)
        .map(|(va, level)| MarkedGraph::new(build_bundle(va).total, level.basepoint * nf + fiber_basepoint))
        .collect::<Result<Vec<_>>>()?;
    Ok(BundleTower {
        tower: Tower::new(levels, maps)?,
        voltages,
    })
}
