//! Towers of finite coverings and their limits.
//!
//! A limit graph is never built in full. A [`LimitModel`] produces finite
//! neighbourhoods of the limit basepoint together with the covering
//! projections onto every level, which is all that certification needs.

mod schreier;
mod series;
mod spectral;

use crate::error::{Error, Result};
use crate::graph::families::cycle;
use crate::graph::{marked_isometric, CoveringMap, HalfEdgeGraph, MarkedGraph};

pub use schreier::{
    schreier_level, schreier_tower, Automaton, AutomatonState, SchreierConvention, SchreierLimit,
    DEFAULT_MAX_DEPTH,
};
pub use series::{
    bundle_tower, normalized_log_zeta, normalized_zeta_power, BundleTower, LevelSeries,
    NormalizedLogZeta, SeriesConfig, ZetaPowerLevel,
};
pub use spectral::{
    discrete_spectral_measure, grigorchuk_density, grigorchuk_log_zeta, moment_convergence,
    spectral_log_f, GrigorchukLogZeta, IntegrandReading, MomentTable, SpectralMeasure,
    GRIGORCHUK_SUPPORT, QUADRATURE_TOLERANCE,
};

/// Marked graphs `X_1, X_2, …` with coverings `p_m: X_{m+1} -> X_m`.
#[derive(Debug, Clone)]
pub struct Tower {
    pub levels: Vec<MarkedGraph>,
    /// `maps[m]` covers `levels[m]` by `levels[m + 1]`.
    pub maps: Vec<CoveringMap>,
}

impl Tower {
    /// Validates every covering and that basepoints map to basepoints.
    pub fn new(levels: Vec<MarkedGraph>, maps: Vec<CoveringMap>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::input("a tower needs at least one level"));
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::input(format!(
                "{} levels need {} maps, got {}",
                levels.len(),
                levels.len() - 1,
                maps.len()
            )));
        }
        for (m, p) in maps.iter().enumerate() {
            if p.source != levels[m + 1].graph || p.target != levels[m].graph {
                return Err(Error::input(format!("map {m} does not join levels {} and {}", m + 2, m + 1)));
            }
            p.validate()?;
            if p.vertex_map[levels[m + 1].basepoint] != levels[m].basepoint {
                return Err(Error::input(format!("map {m} does not preserve basepoints")));
            }
        }
        Ok(Self { levels, maps })
    }

    /// `count` copies of one marked graph joined by identities.
    pub fn constant(level: MarkedGraph, count: usize) -> Result<Self> {
        let maps = (1..count).map(|_| CoveringMap::identity(&level.graph)).collect();
        Self::new(vec![level; count], maps)
    }

    /// `C_{n}, C_{2n}, C_{4n}, …` with `j -> j mod N` coverings, basepoint 0.
    pub fn cycles(n: usize, count: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::input("cycle tower needs n >= 3"));
        }
        let sizes: Vec<usize> = (0..count).map(|m| n << m).collect();
        let levels = sizes
            .iter()
            .map(|&s| MarkedGraph::new(cycle(s), 0))
            .collect::<Result<Vec<_>>>()?;
        let maps = (1..count)
            .map(|m| {
                let big = sizes[m];
                let small = sizes[m - 1];
                CoveringMap::from_vertex_map(cycle(big), cycle(small), (0..big).map(|j| j % small).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels, maps)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &HalfEdgeGraph> {
        self.levels.iter().map(|l| &l.graph)
    }

    /// `p_1 ∘ … ∘ p_{n-1}`: vertex of level `n` (0-based) to level 0.
    pub fn project_to_first(&self, level: usize, mut v: usize) -> usize {
        for m in (0..level).rev() {
            v = self.maps[m].vertex_map[v];
        }
        v
    }
}

/// Finite neighbourhoods of a limit graph's basepoint.
pub trait LimitModel {
    /// A marked graph containing the radius-`radius` ball of the limit
    /// around its basepoint, and for each of the first `levels` tower levels
    /// the projection of each of its vertices to that level.
    fn neighbourhood(&self, radius: usize, levels: usize) -> Result<(MarkedGraph, Vec<Vec<usize>>)>;
}

/// The bi-infinite path, limit of a cycle tower whose first level is `C_n`.
#[derive(Debug, Clone, Copy)]
pub struct LineLimit {
    pub n: usize,
}

impl LimitModel for LineLimit {
    fn neighbourhood(&self, radius: usize, levels: usize) -> Result<(MarkedGraph, Vec<Vec<usize>>)> {
        // vertex 2j - 1 is +j and 2j is -j, basepoint 0
        let count = 2 * radius + 1;
        let position = |i: usize| -> i64 {
            if i == 0 {
                0
            } else if i % 2 == 1 {
                (i as i64 + 1) / 2
            } else {
                -(i as i64 / 2)
            }
        };
        let mut edges = Vec::new();
        for i in 0..count {
            let p = position(i);
            if let Some(j) = (0..count).find(|&j| position(j) == p + 1) {
                edges.push((i, j));
            }
        }
        let graph = HalfEdgeGraph::from_edges(count, &edges)?;
        let projections = (0..levels)
            .map(|l| {
                let size = (self.n << l) as i64;
                (0..count).map(|i| position(i).rem_euclid(size) as usize).collect()
            })
            .collect();
        Ok((MarkedGraph::new(graph, 0)?, projections))
    }
}

/// A finite graph as its own limit.
#[derive(Debug, Clone)]
pub struct ConstantLimit {
    pub level: MarkedGraph,
}

impl LimitModel for ConstantLimit {
    fn neighbourhood(&self, _radius: usize, levels: usize) -> Result<(MarkedGraph, Vec<Vec<usize>>)> {
        let id: Vec<usize> = (0..self.level.graph.vertex_count()).collect();
        Ok((self.level.clone(), vec![id; levels]))
    }
}

/// Why certification of a level stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Obstruction {
    /// Balls of this radius are not isometric through the projection.
    Isometry { radius: usize },
    /// The projection disagrees with the tower maps at this radius.
    Compatibility { radius: usize },
    /// Every radius up to the requested maximum was certified.
    MaxRadius,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCertificate {
    /// 1-based level number.
    pub level: usize,
    pub vertices: usize,
    /// Largest radius `s` such that every radius `0..=s` is certified.
    pub certified_radius: Option<usize>,
    pub stopped_by: Obstruction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificationReport {
    pub levels: Vec<LevelCertificate>,
    /// First level that fails: a compatibility violation, or a certified
    /// radius below the requested schedule.
    pub first_failure: Option<(usize, Obstruction)>,
}

impl CertificationReport {
    pub fn is_certified(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn radii(&self) -> Vec<Option<usize>> {
        self.levels.iter().map(|l| l.certified_radius).collect()
    }
}

/// Certifies each level against the limit: for radius `s = 0, 1, …` the
/// projection `ρ_n` must map the limit ball isometrically onto the level
/// ball, the balls must be isometric as marked graphs, and `ρ_1` must equal
/// `p_1 ∘ … ∘ p_{n-1} ∘ ρ_n` on the ball. `schedule[n]`, when given, is the
/// radius level `n` is required to reach.
pub fn certify_strong_convergence(
    tower: &Tower,
    limit: &dyn LimitModel,
    max_radius: usize,
    schedule: Option<&[usize]>,
) -> Result<CertificationReport> {
    let mut levels = Vec::with_capacity(tower.len());
    let mut first_failure = None;
    let (hood, projections) = limit.neighbourhood(max_radius, tower.len())?;
    for (n, level) in tower.levels.iter().enumerate() {
        let mut certified = None;
        let mut stopped_by = Obstruction::MaxRadius;
        for s in 0..=max_radius {
            let (limit_ball, origin) = hood.ball_with_origin(s);
            let rho: Vec<usize> = origin.iter().map(|&u| projections[n][u]).collect();
            let compatible = origin
                .iter()
                .zip(&rho)
                .all(|(&u, &x)| tower.project_to_first(n, x) == projections[0][u]);
            if !compatible {
                stopped_by = Obstruction::Compatibility { radius: s };
                break;
            }
            let (level_ball, level_origin) = level.ball_with_origin(s);
            if !projection_is_isometry(&limit_ball, &rho, &level_ball, &level_origin, level)
                || marked_isometric(&limit_ball, &level_ball).is_none()
            {
                stopped_by = Obstruction::Isometry { radius: s };
                break;
            }
            certified = Some(s);
        }
        let required = schedule.and_then(|sch| sch.get(n).copied());
        let short = match (required, certified) {
            (Some(r), Some(c)) => c < r,
            (Some(_), None) => true,
            (None, _) => false,
        };
        let violation = matches!(stopped_by, Obstruction::Compatibility { .. });
        if first_failure.is_none() && (violation || short) {
            first_failure = Some((n + 1, stopped_by));
        }
        levels.push(LevelCertificate {
            level: n + 1,
            vertices: level.graph.vertex_count(),
            certified_radius: certified,
            stopped_by,
        });
    }
    Ok(CertificationReport {
        levels,
        first_failure,
    })
}

/// Whether `rho` (ball vertex -> level vertex) is a bijection onto the level
/// ball that carries neighbour multisets and loop counts across.
fn projection_is_isometry(
    ball: &MarkedGraph,
    rho: &[usize],
    level_ball: &MarkedGraph,
    level_origin: &[usize],
    level: &MarkedGraph,
) -> bool {
    let n = ball.graph.vertex_count();
    if n != level_ball.graph.vertex_count() {
        return false;
    }
    let mut to_ball = vec![usize::MAX; level.graph.vertex_count()];
    for (i, &x) in level_origin.iter().enumerate() {
        to_ball[x] = i;
    }
    let mapped: Vec<usize> = rho.iter().map(|&x| to_ball[x]).collect();
    if mapped[ball.basepoint] != level_ball.basepoint {
        return false;
    }
    let mut hit = vec![false; n];
    for &m in &mapped {
        if m == usize::MAX || hit[m] {
            return false;
        }
        hit[m] = true;
    }
    let profile = |g: &HalfEdgeGraph, v: usize, relabel: &dyn Fn(usize) -> usize| {
        let mut out: Vec<(usize, bool)> = g
            .darts_at(v)
            .iter()
            .map(|&d| (relabel(g.head(d)), g.is_half_loop(d)))
            .collect();
        out.sort_unstable();
        out
    };
    (0..n).all(|v| {
        profile(&ball.graph, v, &|w| mapped[w]) == profile(&level_ball.graph, mapped[v], &|w| w)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn constant_tower_certified_everywhere() {
        let level = MarkedGraph::new(petersen(), 3).unwrap();
        let t = Tower::constant(level.clone(), 4).unwrap();
        let report = certify_strong_convergence(&t, &ConstantLimit { level }, 6, Some(&[6, 6, 6, 6])).unwrap();
        assert!(report.is_certified());
        assert!(report.radii().iter().all(|&r| r == Some(6)));
    }

    #[test]
    fn cycle_tower_radius_grows() {
        let t = Tower::cycles(3, 6).unwrap();
        let report = certify_strong_convergence(&t, &LineLimit { n: 3 }, 200, None).unwrap();
        assert!(report.is_certified());
        // C_N balls are paths up to radius ⌈N/2⌉ - 1
        let radii: Vec<usize> = report.radii().into_iter().map(Option::unwrap).collect();
        assert_eq!(radii, vec![1, 2, 5, 11, 23, 47]);
        for l in &report.levels {
            assert!(matches!(l.stopped_by, Obstruction::Isometry { .. }));
        }
    }

    #[test]
    fn corrupted_map_is_reported() {
        let good = Tower::cycles(3, 4).unwrap();
        let mut maps = good.maps.clone();
        // reflect the map from level 2 onto level 1: still a covering, fixes 0
        maps[0].vertex_map = (0..6).map(|j| (6 - j) % 3).collect();
        maps[0] = CoveringMap::from_vertex_map(cycle(6), cycle(3), maps[0].vertex_map.clone()).unwrap();
        let bad = Tower::new(good.levels.clone(), maps).unwrap();
        let report = certify_strong_convergence(&bad, &LineLimit { n: 3 }, 20, None).unwrap();
        assert_eq!(report.first_failure, Some((2, Obstruction::Compatibility { radius: 1 })));
    }

    #[test]
    fn schedule_shortfall_is_a_failure() {
        let t = Tower::cycles(3, 3).unwrap();
        let report = certify_strong_convergence(&t, &LineLimit { n: 3 }, 20, Some(&[1, 2, 9])).unwrap();
        assert_eq!(report.first_failure, Some((3, Obstruction::Isometry { radius: 6 })));
    }

    #[test]
    fn rejects_bad_maps() {
        let t = Tower::cycles(3, 2).unwrap();
        let shifted = MarkedGraph::new(cycle(6), 1).unwrap();
        assert!(Tower::new(vec![t.levels[0].clone(), shifted], t.maps.clone()).is_err());
        assert!(Tower::new(t.levels.clone(), vec![]).is_err());
    }

    #[test]
    fn grigorchuk_tower_certifies() {
        let aut = Automaton::grigorchuk();
        let conv = SchreierConvention::HalfLoops;
        let t = schreier_tower(&aut, 8, conv, DEFAULT_MAX_DEPTH).unwrap();
        let limit = SchreierLimit { automaton: aut, convention: conv, first_level: 1 };
        let report = certify_strong_convergence(&t, &limit, 300, None).unwrap();
        assert!(report.is_certified());
        let radii: Vec<usize> = report.radii().into_iter().map(Option::unwrap).collect();
        assert!(radii.windows(2).all(|w| w[0] <= w[1]));
        assert!(radii[7] > radii[3]);
    }
}
