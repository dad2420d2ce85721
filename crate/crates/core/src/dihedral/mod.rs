//! Block factorization of bundle zeta functions for dihedral voltages on a
//! circulant fiber.
//!
//! Fiber vertices are `0..n`. The rotation is `a: i -> i + 1` and the
//! reflection is `b: i -> n - 1 - i`, so `b` swaps the ends of the standard
//! labelling and fixes the middle vertex when `n` is odd.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::families::circulant;
use crate::graph::{HalfEdgeGraph, IntMatrix};
use crate::voltage::{build_bundle, gamma_spanning_subgraph, Permutation, VoltageAssignment};

pub type CMatrix = DMatrix<Complex64>;

/// `a^k` or `a^k b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DihedralElement {
    pub k: usize,
    pub reflected: bool,
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.reflected) {
            (0, false) => write!(f, "1"),
            (0, true) => write!(f, "b"),
            (k, false) => write!(f, "a^{k}"),
            (k, true) => write!(f, "a^{k} b"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DihedralSetup {
    pub n: usize,
    pub connection_set: Vec<usize>,
    pub a: Permutation,
    pub b: Permutation,
    pub mu: Complex64,
    pub fiber: HalfEdgeGraph,
    /// Regular degree `|S|` of the fiber.
    pub degree: usize,
}

pub fn build_dihedral_setup(n: usize, connection_set: &[usize]) -> Result<DihedralSetup> {
    if n < 3 {
        return Err(Error::input("dihedral fiber needs n >= 3"));
    }
    let mut set = connection_set.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(Error::input("connection set is empty"));
    }
    if let Some(&s) = set.iter().find(|&&s| s == 0 || s >= n) {
        return Err(Error::input(format!("connection element {s} is not in 1..{}", n - 1)));
    }
    if let Some(&s) = set.iter().find(|&&s| !set.contains(&(n - s))) {
        return Err(Error::input(format!(
            "connection set is not symmetric: {s} present but {} missing",
            n - s
        )));
    }
    let a = Permutation::rotation(n, 1);
    let b = Permutation::new((0..n).map(|i| n - 1 - i).collect())?;
    let fiber = circulant(n, &set);
    Ok(DihedralSetup {
        n,
        degree: set.len(),
        connection_set: set,
        a,
        b,
        mu: Complex64::from_polar(1.0, TAU / n as f64),
        fiber,
    })
}

impl DihedralSetup {
    /// `μ^e`, with the exponent reduced mod `n` before evaluating.
    pub fn mu_pow(&self, e: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * (e % self.n) as f64 / self.n as f64)
    }

    pub fn element(&self, e: DihedralElement) -> Permutation {
        let n = self.n;
        let images = (0..n)
            .map(|i| {
                let r = (i + e.k) % n;
                if e.reflected {
                    n - 1 - r
                } else {
                    r
                }
            })
            .collect();
        Permutation::new(images).expect("dihedral elements are permutations")
    }

    /// The dihedral element equal to `p`, if any.
    pub fn identify(&self, p: &Permutation) -> Option<DihedralElement> {
        if p.len() != self.n {
            return None;
        }
        let first = p.apply(0);
        let candidates = [
            DihedralElement { k: first, reflected: false },
            DihedralElement { k: (2 * self.n - 1 - first) % self.n, reflected: true },
        ];
        candidates.into_iter().find(|&e| &self.element(e) == p)
    }

    pub fn elements(&self) -> Vec<DihedralElement> {
        [false, true]
            .iter()
            .flat_map(|&reflected| (0..self.n).map(move |k| DihedralElement { k, reflected }))
            .collect()
    }

    /// `λ_k = Σ_{s∈S} μ^{ks}`, real for symmetric `S`.
    pub fn lambda(&self, k: usize) -> f64 {
        self.connection_set.iter().map(|&s| self.mu_pow(k * s).re).sum()
    }

    /// Number of paired eigenvector blocks `t = 1..=⌊(n-1)/2⌋`.
    pub fn pair_count(&self) -> usize {
        (self.n - 1) / 2
    }

    /// `x_k = (1, μ^k, …, μ^{(n-1)k})`.
    pub fn eigenvector(&self, k: usize) -> DVector<Complex64> {
        DVector::from_iterator(self.n, (0..self.n).map(|i| self.mu_pow(i * k)))
    }

    /// Random dihedral voltages on `base`; half-loops get involutions.
    pub fn random_voltages<R: Rng>(&self, base: &HalfEdgeGraph, rng: &mut R) -> VoltageAssignment {
        let elements = self.elements();
        let mut voltages: Vec<Option<Permutation>> = vec![None; base.dart_count()];
        for d in 0..base.dart_count() {
            if voltages[d].is_some() {
                continue;
            }
            let p = loop {
                let candidate = self.element(elements[rng.gen_range(0..elements.len())]);
                if !base.is_half_loop(d) || candidate.is_involution() {
                    break candidate;
                }
            };
            voltages[base.reverse(d)] = Some(p.inverse());
            voltages[d] = Some(p);
        }
        VoltageAssignment::new(base.clone(), self.fiber.clone(), voltages.into_iter().flatten().collect())
            .expect("dihedral elements are automorphisms of a circulant")
    }
}

/// Eigenvectors and the change-of-basis matrix `M`.
#[derive(Debug, Clone)]
pub struct EigenData {
    pub vectors: Vec<DVector<Complex64>>,
    pub lambdas: Vec<f64>,
    /// Columns `x_0, x_1, P(b)x_1, …, x_T, P(b)x_T` and `x_{n/2}` for even `n`.
    pub m: CMatrix,
    pub m_inverse: CMatrix,
    /// Slot `s` of `M` holds an eigenvector for `λ_{slot_index[s]}`.
    pub slot_index: Vec<usize>,
    /// 2-norm condition number of `M`.
    pub condition_number: f64,
}

pub fn eigen_data(setup: &DihedralSetup) -> EigenData {
    let n = setup.n;
    let vectors: Vec<_> = (0..n).map(|k| setup.eigenvector(k)).collect();
    let lambdas = (0..n).map(|k| setup.lambda(k)).collect();
    let pb = setup.b.matrix().map(|x| Complex64::new(x as f64, 0.0));
    let mut columns = vec![vectors[0].clone()];
    let mut slot_index = vec![0];
    for t in 1..=setup.pair_count() {
        columns.push(vectors[t].clone());
        columns.push(&pb * &vectors[t]);
        slot_index.extend([t, t]);
    }
    if n % 2 == 0 {
        columns.push(vectors[n / 2].clone());
        slot_index.push(n / 2);
    }
    let m = CMatrix::from_columns(&columns);
    let m_inverse = m.clone().try_inverse().expect("M is invertible");
    let sv = m.clone().singular_values();
    let condition_number = sv.max() / sv.min();
    EigenData {
        vectors,
        lambdas,
        m,
        m_inverse,
        slot_index,
        condition_number,
    }
}

#[derive(Debug, Clone)]
pub struct DihedralFactorization {
    pub setup: DihedralSetup,
    pub voltage: VoltageAssignment,
    pub elements: Vec<DihedralElement>,
    pub eigen: EigenData,
    /// `A_t` for `t = 1..=⌊(n-1)/2⌋`, stored at index `t - 1`, in the layout
    /// `[[Σ μ^{tk} A(a^k), Σ μ^{tk} A(a^k b)], [Σ μ^{(n-t)k} A(a^k b), Σ μ^{(n-t)k} A(a^k)]]`.
    pub pair_blocks: Vec<CMatrix>,
    /// `Σ_k (-1)^k A(a^k) + (-1)^{k+1} A(a^k b)` for even `n`.
    pub b_block: Option<CMatrix>,
    /// `(Q_Y + dI)` on each of the two slots.
    pub l: CMatrix,
    /// `Q_Y + dI`.
    pub q_shift: CMatrix,
    /// `A_Y`.
    pub base_adjacency: CMatrix,
}

fn to_complex(m: &IntMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x as f64, 0.0))
}

fn block2(tl: &CMatrix, tr: &CMatrix, bl: &CMatrix, br: &CMatrix) -> CMatrix {
    let v = tl.nrows();
    let mut out = CMatrix::zeros(2 * v, 2 * v);
    out.view_mut((0, 0), (v, v)).copy_from(tl);
    out.view_mut((0, v), (v, v)).copy_from(tr);
    out.view_mut((v, 0), (v, v)).copy_from(bl);
    out.view_mut((v, v), (v, v)).copy_from(br);
    out
}

/// Checks that every voltage is dihedral and assembles all blocks.
pub fn build_blocks(setup: &DihedralSetup, voltage: &VoltageAssignment) -> Result<DihedralFactorization> {
    if voltage.fiber() != &setup.fiber {
        return Err(Error::input("voltage fiber is not the setup's circulant"));
    }
    let base = voltage.base();
    let elements = (0..base.dart_count())
        .map(|d| {
            setup
                .identify(voltage.voltage(d))
                .ok_or_else(|| Error::voltage(d, "voltage is outside the dihedral group"))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = setup.n;
    let nu = base.vertex_count();
    let zero = CMatrix::zeros(nu, nu);
    let mut rot = vec![zero.clone(); n];
    let mut refl = vec![zero.clone(); n];
    for e in setup.elements() {
        let a = to_complex(&gamma_spanning_subgraph(voltage, &setup.element(e)));
        if e.reflected {
            refl[e.k] = a;
        } else {
            rot[e.k] = a;
        }
    }
    let weighted = |mats: &[CMatrix], t: usize| {
        mats.iter()
            .enumerate()
            .fold(zero.clone(), |acc, (k, m)| acc + m * setup.mu_pow(t * k))
    };
    let pair_blocks = (1..=setup.pair_count())
        .map(|t| {
            block2(
                &weighted(&rot, t),
                &weighted(&refl, t),
                &weighted(&refl, n - t),
                &weighted(&rot, n - t),
            )
        })
        .collect();
    let b_block = (n % 2 == 0).then(|| {
        (0..n).fold(zero.clone(), |acc, k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc + &rot[k] * Complex64::new(sign, 0.0) - &refl[k] * Complex64::new(sign, 0.0)
        })
    });
    let d = setup.degree as i64;
    let q_shift = to_complex(&(base.degree_matrix_q() + IntMatrix::identity(nu, nu) * d));
    let l = block2(&q_shift, &zero, &zero, &q_shift);
    Ok(DihedralFactorization {
        setup: setup.clone(),
        voltage: voltage.clone(),
        elements,
        eigen: eigen_data(setup),
        pair_blocks,
        b_block,
        l,
        q_shift,
        base_adjacency: to_complex(&base.adjacency_matrix()),
    })
}

impl DihedralFactorization {
    /// The block-diagonal form in `(base vertex, slot)` order, including the
    /// fiber eigenvalues on the diagonal.
    pub fn assembled_block_form(&self) -> CMatrix {
        let nu = self.voltage.base().vertex_count();
        let n = self.setup.n;
        let slots = &self.eigen.slot_index;
        let mut out = CMatrix::zeros(nu * n, nu * n);
        let mut put = |block: &CMatrix, slot_list: &[usize]| {
            let w = slot_list.len();
            for (si, &s) in slot_list.iter().enumerate() {
                for (sj, &s2) in slot_list.iter().enumerate() {
                    for u in 0..nu {
                        for v in 0..nu {
                            out[(u * n + s, v * n + s2)] += block[(si * nu + u, sj * nu + v)];
                        }
                    }
                }
            }
            debug_assert_eq!(block.nrows(), w * nu);
        };
        put(&self.base_adjacency, &[0]);
        for t in 1..=self.setup.pair_count() {
            put(&self.pair_blocks[t - 1], &[2 * t - 1, 2 * t]);
        }
        if let Some(b) = &self.b_block {
            put(b, &[n - 1]);
        }
        for u in 0..nu {
            for (s, &k) in slots.iter().enumerate() {
                out[(u * n + s, u * n + s)] += Complex64::new(self.eigen.lambdas[k], 0.0);
            }
        }
        out
    }

    /// `max |(I⊗M)⁻¹ A (I⊗M) - blockdiag|` against the bundle adjacency.
    pub fn block_residual(&self) -> f64 {
        let nu = self.voltage.base().vertex_count();
        let id = CMatrix::identity(nu, nu);
        let conj = id.kronecker(&self.eigen.m_inverse)
            * to_complex(&build_bundle(&self.voltage).total.adjacency_matrix())
            * id.kronecker(&self.eigen.m);
        (conj - self.assembled_block_form()).camax()
    }

    /// Order of `(1 - z²)` in the zeta function of the total graph: `ε - ν`.
    pub fn bass_exponent(&self) -> i64 {
        let base = self.voltage.base();
        let fiber = &self.setup.fiber;
        let nu = base.vertex_count() * fiber.vertex_count();
        let eps = base.edge_count() * fiber.vertex_count() + base.vertex_count() * fiber.edge_count();
        eps as i64 - nu as i64
    }

    /// `1/(k + d - 1)` for maximum base degree `k`.
    pub fn disc_radius(&self) -> f64 {
        let k = self.voltage.base().max_degree() + self.setup.degree;
        if k <= 1 {
            f64::INFINITY
        } else {
            1.0 / (k as f64 - 1.0)
        }
    }
}

/// Factors of `ζ⁻¹` at a point.
#[derive(Debug, Clone)]
pub struct DihedralZetaFactors {
    pub z: Complex64,
    /// `det(I - (A_Y + dI)z + (Q_Y + dI)z²)`.
    pub f: Complex64,
    /// `det(I - (A_t + λ_t I)z + L z²)` for `t = 1..=⌊(n-1)/2⌋`.
    pub g: Vec<Complex64>,
    /// `det(I - (B + λ_{n/2} I)z + (Q_Y + dI)z²)`, even `n` only.
    pub h: Option<Complex64>,
    /// `(1 - z²)^{ε-ν} f ∏ g_t h`.
    pub assembled: Complex64,
    pub outside_disc: bool,
}

impl DihedralZetaFactors {
    pub fn factor_count(&self) -> usize {
        1 + self.g.len() + usize::from(self.h.is_some())
    }
}

fn quadratic_det(a: &CMatrix, shift: f64, q: &CMatrix, z: Complex64) -> Complex64 {
    let id = CMatrix::identity(a.nrows(), a.ncols());
    let linear = a + &id * Complex64::new(shift, 0.0);
    (&id - linear * z + q * (z * z)).determinant()
}

pub fn dihedral_zeta_factors(fact: &DihedralFactorization, z: Complex64) -> DihedralZetaFactors {
    let setup = &fact.setup;
    let lambdas = &fact.eigen.lambdas;
    let f = quadratic_det(&fact.base_adjacency, setup.degree as f64, &fact.q_shift, z);
    let g: Vec<Complex64> = fact
        .pair_blocks
        .iter()
        .enumerate()
        .map(|(i, at)| quadratic_det(at, lambdas[i + 1], &fact.l, z))
        .collect();
    let h = fact
        .b_block
        .as_ref()
        .map(|b| quadratic_det(b, lambdas[setup.n / 2], &fact.q_shift, z));
    let one_minus = Complex64::new(1.0, 0.0) - z * z;
    let e = fact.bass_exponent();
    let prefactor = one_minus.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    let product = g.iter().fold(f, |acc, x| acc * x) * h.unwrap_or(Complex64::new(1.0, 0.0));
    DihedralZetaFactors {
        z,
        f,
        g,
        h,
        assembled: prefactor * product,
        outside_disc: z.norm() >= fact.disc_radius(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::zeta::{zeta_inverse, ZetaConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reflection_matches_standard_pairing() {
        // one-based (1 5)(2 4) fixing 3
        let s5 = build_dihedral_setup(5, &[1, 4]).unwrap();
        assert_eq!(s5.b.to_string(), "(0 4)(1 3)");
        assert_eq!(s5.b.apply(2), 2);
        // one-based (1 4)(2 3)
        let s4 = build_dihedral_setup(4, &[1, 3]).unwrap();
        assert_eq!(s4.b.to_string(), "(0 3)(1 2)");
    }

    #[test]
    fn defining_relations() {
        for n in 3..9 {
            let s = build_dihedral_setup(n, &[1, n - 1]).unwrap();
            let id = Permutation::identity(n);
            assert_eq!(s.a.pow(n), id);
            assert_eq!(s.b.pow(2), id);
            assert_eq!(s.b.then(&s.a).then(&s.b), s.a.inverse());
            assert!(s.a.preserves(&s.fiber.adjacency_matrix()));
            for e in s.elements() {
                assert_eq!(s.identify(&s.element(e)), Some(e));
            }
        }
    }

    #[test]
    fn rejects_bad_connection_sets() {
        assert!(build_dihedral_setup(5, &[1]).is_err());
        assert!(build_dihedral_setup(5, &[]).is_err());
        assert!(build_dihedral_setup(2, &[1]).is_err());
        assert!(build_dihedral_setup(5, &[0, 5]).is_err());
    }

    #[test]
    fn eigenvector_properties() {
        for (n, set) in [(4usize, vec![1, 3]), (5, vec![1, 4]), (6, vec![1, 3, 5]), (7, vec![2, 5])] {
            let s = build_dihedral_setup(n, &set).unwrap();
            let data = eigen_data(&s);
            let pa = s.a.matrix().map(|x| Complex64::new(x as f64, 0.0));
            let pb = s.b.matrix().map(|x| Complex64::new(x as f64, 0.0));
            let af = s.fiber.adjacency_matrix().map(|x| Complex64::new(x as f64, 0.0));
            for k in 0..n {
                let x = &data.vectors[k];
                assert!((&pa * x - x * s.mu_pow(k)).camax() < 1e-12);
                assert!((&af * x - x * Complex64::new(data.lambdas[k], 0.0)).camax() < 1e-12);
                let y = &pb * x;
                assert!((&pa * &y - &y * s.mu_pow(n - k)).camax() < 1e-12);
            }
            assert!((data.lambdas[0] - s.degree as f64).abs() < 1e-12);
            assert!(data.vectors[0].iter().all(|c| *c == Complex64::new(1.0, 0.0)));
            let id = CMatrix::identity(n, n);
            assert!((&data.m_inverse * &data.m - id).camax() < 1e-12);
            assert!(data.condition_number.is_finite());
        }
        let c4 = eigen_data(&build_dihedral_setup(4, &[1, 3]).unwrap());
        assert!(c4.lambdas[1].abs() < 1e-12);
    }

    #[test]
    fn identity_voltages_give_diagonal_blocks() {
        let s = build_dihedral_setup(4, &[1, 3]).unwrap();
        let va = VoltageAssignment::trivial(cycle(3), s.fiber.clone());
        let fact = build_blocks(&s, &va).unwrap();
        let a = to_complex(&cycle(3).adjacency_matrix());
        let z = CMatrix::zeros(3, 3);
        assert_eq!(fact.pair_blocks[0], block2(&a, &z, &z, &a));
        assert_eq!(fact.b_block.as_ref().unwrap(), &a);
        assert!(fact.block_residual() < 1e-9);
    }

    #[test]
    fn single_edge_rotation_block() {
        let s = build_dihedral_setup(4, &[1, 3]).unwrap();
        let base = path(2);
        let va = VoltageAssignment::new(base, s.fiber.clone(), vec![s.a.clone(), s.a.inverse()]).unwrap();
        let fact = build_blocks(&s, &va).unwrap();
        let a1 = &fact.pair_blocks[0];
        let mu = s.mu;
        // dart 0 (0 -> 1) carries a, dart 1 carries a^3
        let expect_tl = CMatrix::from_row_slice(2, 2, &[0.0.into(), mu, mu.powi(3), 0.0.into()]);
        let expect_br = CMatrix::from_row_slice(2, 2, &[0.0.into(), mu.powi(3), mu.powi(9), 0.0.into()]);
        assert!((a1.view((0, 0), (2, 2)) - expect_tl).camax() < 1e-12);
        assert!((a1.view((2, 2), (2, 2)) - expect_br).camax() < 1e-12);
        assert!(a1.view((0, 2), (2, 2)).camax() < 1e-12);
        assert!(a1.view((2, 0), (2, 2)).camax() < 1e-12);
    }

    #[test]
    fn rejects_non_dihedral_voltage() {
        let s = build_dihedral_setup(5, &[1, 4]).unwrap();
        // no automorphism of C5 besides dihedral ones exists, so use a bigger fiber set
        let s6 = build_dihedral_setup(6, &[1, 2, 3, 4, 5]).unwrap();
        let odd = Permutation::new(vec![1, 0, 2, 3, 4, 5]).unwrap();
        let va = VoltageAssignment::new(path(2), s6.fiber.clone(), vec![odd.clone(), odd]).unwrap();
        assert!(matches!(build_blocks(&s6, &va), Err(Error::InvalidVoltage { dart: 0, .. })));
        let va5 = VoltageAssignment::trivial(path(2), s6.fiber.clone());
        assert!(build_blocks(&s, &va5).is_err());
    }

    #[test]
    fn factors_at_zero() {
        let s = build_dihedral_setup(5, &[1, 4]).unwrap();
        let fact = build_blocks(&s, &VoltageAssignment::trivial(cycle(4), s.fiber.clone())).unwrap();
        let r = dihedral_zeta_factors(&fact, Complex64::new(0.0, 0.0));
        assert_eq!(r.assembled, Complex64::new(1.0, 0.0));
        assert_eq!(r.factor_count(), 3);
        assert!(!r.outside_disc);
    }

    #[test]
    fn random_voltages_factor_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (base, n) in [(cycle(3), 4), (cycle(4), 5), (cycle(3), 5), (cycle(4), 4), (complete(4), 6)] {
            let s = build_dihedral_setup(n, &[1, n - 1]).unwrap();
            let va = s.random_voltages(&base, &mut rng);
            let fact = build_blocks(&s, &va).unwrap();
            assert!(fact.block_residual() < 1e-9);
            let total = build_bundle(&va).total;
            let exact = zeta_inverse(&total, &ZetaConfig::default()).unwrap();
            let r = fact.disc_radius();
            for _ in 0..20 {
                let z = Complex64::from_polar(r * rng.gen_range(0.0..0.99), rng.gen_range(0.0..TAU));
                let fz = dihedral_zeta_factors(&fact, z);
                assert!(!fz.outside_disc);
                let reference = exact.hashimoto_det.eval(z);
                assert!((fz.assembled - reference).norm() < 1e-9, "{} vs {}", fz.assembled, reference);
            }
        }
    }

    #[test]
    fn pair_factor_symmetric_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = build_dihedral_setup(7, &[1, 6]).unwrap();
        let va = s.random_voltages(&cycle(4), &mut rng);
        let fact = build_blocks(&s, &va).unwrap();
        // t and n - t give the same factor: swap the two slots of the block
        let z = Complex64::new(0.1, 0.05);
        let lambdas = &fact.eigen.lambdas;
        for t in 1..=s.pair_count() {
            let at = &fact.pair_blocks[t - 1];
            let nu = 4;
            let swapped = block2(
                &at.view((nu, nu), (nu, nu)).into(),
                &at.view((nu, 0), (nu, nu)).into(),
                &at.view((0, nu), (nu, nu)).into(),
                &at.view((0, 0), (nu, nu)).into(),
            );
            let g1 = quadratic_det(at, lambdas[t], &fact.l, z);
            let g2 = quadratic_det(&swapped, lambdas[s.n - t], &fact.l, z);
            assert!((g1 - g2).norm() < 1e-12);
            assert!((lambdas[t] - lambdas[s.n - t]).abs() < 1e-12);
        }
    }

    #[test]
    fn cartesian_product_matches_bass() {
        let s = build_dihedral_setup(3, &[1, 2]).unwrap();
        let va = VoltageAssignment::trivial(cycle(4), s.fiber.clone());
        let fact = build_blocks(&s, &va).unwrap();
        let exact = zeta_inverse(&build_bundle(&va).total, &ZetaConfig::default()).unwrap();
        let z = Complex64::new(0.07, -0.02);
        let bass = Complex64::new(1.0, 0.0) - z * z;
        let reference = bass.powi(exact.bass_exponent as i32) * exact.bass_det.eval(z);
        assert!((dihedral_zeta_factors(&fact, z).assembled - reference).norm() < 1e-10);
    }
}
