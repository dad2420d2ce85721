//! Brute-force census of primitive cycles, independent of any determinant.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::poly::IntPolynomial;
use super::hashimoto_successors;
use crate::error::{Error, Result};
use crate::graph::HalfEdgeGraph;

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Canonical representative of a primitive cycle class: the rotation that is
/// lexicographically smallest as a dart sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CycleClass {
    pub darts: Vec<usize>,
}

impl CycleClass {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCensus {
    pub max_len: usize,
    /// Number of classes of each length present.
    pub counts: BTreeMap<usize, u64>,
    pub classes: Vec<CycleClass>,
    pub nodes_visited: u64,
}

impl CycleCensus {
    pub fn count(&self, len: usize) -> u64 {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    /// `∏ (1 - z^ℓ(P))` over classes, truncated after `z^max_len`.
    pub fn euler_product(&self) -> IntPolynomial {
        let cap = self.max_len + 1;
        let mut acc = vec![BigInt::from(0); cap];
        acc[0] = BigInt::from(1);
        for (&len, &mult) in &self.counts {
            for _ in 0..mult {
                for i in (len..cap).rev() {
                    let lower = acc[i - len].clone();
                    acc[i] -= lower;
                }
            }
        }
        IntPolynomial::new(acc)
    }

    /// `N_r = Σ_{d | r} d · #classes(d)` for `r = 1..=max_len`.
    pub fn closed_geodesic_counts(&self) -> Vec<u128> {
        (1..=self.max_len)
            .map(|r| {
                (1..=r)
                    .filter(|d| r % d == 0)
                    .map(|d| d as u128 * self.count(d) as u128)
                    .sum()
            })
            .collect()
    }

    /// Whether `poly` agrees with the Euler product through `z^max_len`.
    pub fn matches_up_to_order(&self, poly: &IntPolynomial) -> bool {
        let product = self.euler_product();
        (0..=self.max_len).all(|i| product.coefficient(i) == poly.coefficient(i))
    }
}

/// Enumerates every primitive closed non-backtracking tailless dart cycle of
/// length at most `max_len`, one representative per rotation class. Fails
/// with a resource error once more than `node_budget` search nodes are used.
pub fn primitive_cycle_oracle(
    g: &HalfEdgeGraph,
    max_len: usize,
    node_budget: u64,
) -> Result<CycleCensus> {
    let succ = hashimoto_successors(g);
    let mut census = CycleCensus {
        max_len,
        counts: BTreeMap::new(),
        classes: Vec::new(),
        nodes_visited: 0,
    };
    let mut path = Vec::with_capacity(max_len);
    // stack of (dart, depth) frames
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for start in 0..g.dart_count() {
        stack.push((start, 1));
        while let Some((d, depth)) = stack.pop() {
            census.nodes_visited += 1;
            if census.nodes_visited > node_budget {
                return Err(Error::ResourceLimit(format!(
                    "cycle enumeration exceeded {node_budget} search nodes"
                )));
            }
            path.truncate(depth - 1);
            path.push(d);
            let next = succ.of(d);
            if next.contains(&start) && is_strict_minimal_rotation(&path) {
                census.classes.push(CycleClass { darts: path.clone() });
                *census.counts.entry(depth).or_insert(0) += 1;
            }
            if depth < max_len {
                for &e in next.iter().rev() {
                    if e >= start {
                        stack.push((e, depth + 1));
                    }
                }
            }
        }
    }
    Ok(census)
}

/// Every nontrivial rotation is strictly larger, which holds exactly for the
/// canonical rotation of a primitive cycle.
fn is_strict_minimal_rotation(seq: &[usize]) -> bool {
    let n = seq.len();
    (1..n).all(|k| {
        let rotated = seq[k..].iter().chain(&seq[..k]);
        rotated.cmp(seq.iter()) == std::cmp::Ordering::Greater
    })
}
