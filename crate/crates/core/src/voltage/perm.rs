use std::fmt;

use crate::error::{Error, Result};
use crate::graph::IntMatrix;

/// Permutation of `0..n` acting on the right: `i^γ = images[i]`, and the
/// product `γδ` applies `γ` first, so `i^{γδ} = (i^γ)^δ` and `P_{γδ} = P_γ P_δ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::input(format!("{images:?} is not a permutation of 0..{n}")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The cycle `i -> i + shift mod n`.
    pub fn rotation(n: usize, shift: usize) -> Self {
        Self {
            images: (0..n).map(|i| (i + shift) % n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `i^γ`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `γδ`: first `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        (0..k).fold(Permutation::identity(self.len()), |acc, _| acc.then(self))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_involution(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| self.images[j] == i)
    }

    /// `P(i, j) = 1` iff `j = i^γ`.
    pub fn matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut p = IntMatrix::zeros(n, n);
        for (i, &j) in self.images.iter().enumerate() {
            p[(i, j)] = 1;
        }
        p
    }

    /// Whether the permutation preserves a square matrix: `M(i^γ, j^γ) = M(i, j)`.
    pub fn preserves(&self, m: &IntMatrix) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| m[(self.images[i], self.images[j])] == m[(i, j)]))
    }
}

impl fmt::Display for Permutation {
    /// Disjoint cycle notation on 0-based points, e.g. `(0 4)(1 3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.len()];
        let mut wrote = false;
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.images[i];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![2, 0]).is_err());
    }

    #[test]
    fn right_action_matrices_multiply() {
        let g = Permutation::new(vec![1, 2, 0, 3]).unwrap();
        let h = Permutation::new(vec![3, 1, 2, 0]).unwrap();
        assert_eq!(g.then(&h).matrix(), g.matrix() * h.matrix());
        assert_eq!(g.then(&h).apply(0), h.apply(g.apply(0)));
        assert!(g.then(&g.inverse()).is_identity());
    }

    #[test]
    fn display_cycles() {
        let p = Permutation::new(vec![4, 3, 2, 1, 0]).unwrap();
        assert_eq!(p.to_string(), "(0 4)(1 3)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(p.is_involution());
        assert_eq!(Permutation::rotation(5, 2).pow(5), Permutation::identity(5));
    }
}
