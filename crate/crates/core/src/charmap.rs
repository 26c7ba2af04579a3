//! Characteristic matrices over a simplicial complex and their pullback type.
//!
//! A characteristic matrix is pullback from the linear model when, after a
//! change of basis, its columns are exactly the standard basis vectors, and
//! pullback from the simplex when they lie among the standard basis vectors
//! and their sum. Two independent classifiers are provided: one reads the set
//! of distinct columns directly, the other inspects how columns change across
//! every ridge of a closed pseudomanifold.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{find_basis_change, BitMatrix, BitVec, EchelonBasis};
use crate::simplicial::{mask_vertices, Mask, SimplicialComplex};

/// An `n × m` matrix whose columns are independent on every facet of its complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicMatrix {
    n: usize,
    matrix: BitMatrix,
    columns: Vec<BitVec>,
}

impl CharacteristicMatrix {
    /// Certifies `lambda` over `k`: one column per vertex, independent on each facet.
    pub fn validate(k: &SimplicialComplex, lambda: &BitMatrix) -> Result<Self> {
        if lambda.ncols() != k.vertex_count() {
            return Err(Error::Dimension(format!(
                "characteristic matrix has {} columns but the complex has {} vertices",
                lambda.ncols(),
                k.vertex_count()
            )));
        }
        let unused = k.all_vertices() & !k.used_vertices();
        if unused != 0 {
            return Err(Error::Semantic(format!(
                "vertices {:?} lie in no facet",
                k.mask_to_labels(unused)
            )));
        }
        let n = lambda.nrows();
        let columns = lambda.columns();
        for &facet in k.facet_masks() {
            let mut basis = EchelonBasis::new(n);
            if !mask_vertices(facet).all(|v| basis.insert(columns[v].clone())) {
                return Err(Error::DependentFacet {
                    facet: k.mask_to_labels(facet),
                });
            }
        }
        Ok(Self {
            n,
            matrix: lambda.clone(),
            columns,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.columns.len()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> &BitVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.columns
    }

    /// `G · Λ`; validity is preserved by invertible `G`.
    pub fn transformed(&self, g: &BitMatrix) -> CharacteristicMatrix {
        let matrix = g.mul(&self.matrix);
        let columns = matrix.columns();
        Self {
            n: self.n,
            matrix,
            columns,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PullbackLabel {
    LinearModel,
    SimplexProper,
    NotSimplex,
}

impl fmt::Display for PullbackLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PullbackLabel::LinearModel => "linear-model",
            PullbackLabel::SimplexProper => "simplex",
            PullbackLabel::NotSimplex => "not-simplex",
        })
    }
}

/// Basis change `G` and coloring `c` with `G·λ(j) = e_{c(j)}` (`e_{n+1}` meaning `e_1+⋯+e_n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackWitness {
    pub basis_change: BitMatrix,
    /// Color in `1..=n+1` per vertex position.
    pub coloring: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackClass {
    pub label: PullbackLabel,
    pub witness: Option<PullbackWitness>,
}

impl PullbackClass {
    pub fn is_simplex_pullback(&self) -> bool {
        self.label != PullbackLabel::NotSimplex
    }

    pub fn coloring(&self) -> Option<&[usize]> {
        self.witness.as_ref().map(|w| w.coloring.as_slice())
    }
}

/// Reads colors off `G·λ`; fails if a column is not some `e_i` or the all-ones vector.
fn coloring_from_basis_change(m: &CharacteristicMatrix, g: &BitMatrix) -> Result<Vec<usize>> {
    let n = m.n;
    m.columns
        .iter()
        .enumerate()
        .map(|(j, col)| {
            let image = g.mul_vec(col);
            match image.count_ones() {
                1 => Ok(image.first_one().unwrap() + 1),
                c if c == n => Ok(n + 1),
                _ => Err(Error::Internal(format!(
                    "column {j} maps to {image} under the basis change"
                ))),
            }
        })
        .collect()
}

/// Classifies by the set `D` of distinct columns: `|D| = n` gives the linear
/// model, `|D| = n+1` with vanishing sum gives the simplex, anything else neither.
pub fn classify_pullback(m: &CharacteristicMatrix) -> Result<PullbackClass> {
    let n = m.n;
    let distinct: BTreeSet<&BitVec> = m.columns.iter().collect();
    let distinct: Vec<&BitVec> = distinct.into_iter().collect();
    let mut span = EchelonBasis::new(n);
    for d in &distinct {
        span.insert((*d).clone());
    }
    if span.rank() != n {
        return Err(Error::Internal(format!(
            "columns span a space of rank {} < n = {n}",
            span.rank()
        )));
    }
    let sum = distinct.iter().fold(BitVec::zeros(n), |acc, d| acc.xor(d));
    let label = match distinct.len() {
        k if k == n => PullbackLabel::LinearModel,
        k if k == n + 1 && sum.is_zero() => PullbackLabel::SimplexProper,
        _ => PullbackLabel::NotSimplex,
    };
    if label == PullbackLabel::NotSimplex {
        return Ok(PullbackClass {
            label,
            witness: None,
        });
    }
    // lexicographically first independent n-subset of D (as ordered above)
    let basis = first_basis_subset(&distinct, n)?;
    let g = find_basis_change(&basis, n)?;
    let coloring = coloring_from_basis_change(m, &g)?;
    Ok(PullbackClass {
        label,
        witness: Some(PullbackWitness {
            basis_change: g,
            coloring,
        }),
    })
}

fn first_basis_subset(vectors: &[&BitVec], n: usize) -> Result<Vec<BitVec>> {
    fn go(vectors: &[&BitVec], start: usize, n: usize, chosen: &mut Vec<BitVec>) -> bool {
        if chosen.len() == n {
            return true;
        }
        for i in start..vectors.len() {
            let mut e = EchelonBasis::new(n);
            for c in chosen.iter() {
                e.insert(c.clone());
            }
            if e.insert(vectors[i].clone()) {
                chosen.push(vectors[i].clone());
                if go(vectors, i + 1, n, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(n);
    if go(vectors, 0, n, &mut chosen) {
        Ok(chosen)
    } else {
        Err(Error::DependentVectors)
    }
}

/// `S_i^σ ⊆ [n]` (1-based) with `λ(p_i(σ)) = Σ_{j ∈ S} λ(u_j)`.
pub fn ridge_flip_support(
    k: &SimplicialComplex,
    m: &CharacteristicMatrix,
    facet: &[u32],
    i: usize,
) -> Result<Vec<usize>> {
    let mask = k.labels_to_mask(facet)?;
    if k.facet_index(mask).is_none() {
        return Err(Error::NotAFacet(facet.to_vec()));
    }
    let p = k.ridge_flip(facet, i)?;
    let inverse = facet_inverse(m, mask)?;
    let p = k.position(p).unwrap();
    Ok(support_in_facet_basis(&inverse, m.column(p)))
}

fn facet_inverse(m: &CharacteristicMatrix, facet: Mask) -> Result<BitMatrix> {
    let cols: Vec<BitVec> = mask_vertices(facet).map(|v| m.columns[v].clone()).collect();
    find_basis_change(&cols, m.n)
}

fn support_in_facet_basis(inverse: &BitMatrix, column: &BitVec) -> Vec<usize> {
    inverse.mul_vec(column).iter_ones().map(|j| j + 1).collect()
}

/// A ridge whose flip support is neither `{i}` nor `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadFlip {
    pub facet: Vec<u32>,
    pub position: usize,
    pub support: Vec<usize>,
}

/// All `(σ, i, S_i^σ)` in facet order; requires a strongly connected closed pseudomanifold.
pub fn flip_supports(
    k: &SimplicialComplex,
    m: &CharacteristicMatrix,
) -> Result<Vec<(Mask, usize, Vec<usize>)>> {
    if !k.is_strongly_connected_pseudomanifold() {
        return Err(Error::NotClosedPseudomanifold);
    }
    let mut out = Vec::new();
    for &facet in k.facet_masks() {
        let inverse = facet_inverse(m, facet)?;
        for (idx, u) in mask_vertices(facet).enumerate() {
            let p = k.flip_position(facet, u)?;
            out.push((facet, idx + 1, support_in_facet_basis(&inverse, &m.columns[p])));
        }
    }
    Ok(out)
}

/// First ridge (facet order, then position) violating the simplex condition.
pub fn first_bad_flip(k: &SimplicialComplex, m: &CharacteristicMatrix) -> Result<Option<BadFlip>> {
    let n = m.n;
    Ok(flip_supports(k, m)?
        .into_iter()
        .find(|(_, i, s)| !(s.as_slice() == [*i] || s.len() == n))
        .map(|(facet, position, support)| BadFlip {
            facet: k.mask_to_labels(facet),
            position,
            support,
        }))
}

/// Classification from ridge-flip supports alone.
pub fn classify_via_flips(k: &SimplicialComplex, m: &CharacteristicMatrix) -> Result<PullbackClass> {
    let n = m.n;
    let supports = flip_supports(k, m)?;
    let linear = supports.iter().all(|(_, i, s)| s.as_slice() == [*i]);
    let simplex = supports
        .iter()
        .all(|(_, i, s)| s.as_slice() == [*i] || s.len() == n);
    let label = if linear {
        PullbackLabel::LinearModel
    } else if simplex {
        PullbackLabel::SimplexProper
    } else {
        PullbackLabel::NotSimplex
    };
    let witness = if simplex {
        // in the basis of the first facet every column is some e_i or the all-ones vector
        let g = facet_inverse(m, k.facet_masks()[0])?;
        let coloring = coloring_from_basis_change(m, &g)?;
        Some(PullbackWitness {
            basis_change: g,
            coloring,
        })
    } else {
        None
    };
    Ok(PullbackClass { label, witness })
}

/// Checks that `c` is a nondegenerate simplicial map to `∂Δ^n` realizing `λ`
/// after the basis change.
pub fn verify_witness(
    k: &SimplicialComplex,
    m: &CharacteristicMatrix,
    witness: &PullbackWitness,
) -> Result<()> {
    let n = m.n;
    let expected = coloring_from_basis_change(m, &witness.basis_change)?;
    if expected != witness.coloring {
        return Err(Error::InvalidColoring("coloring disagrees with G·λ".into()));
    }
    if witness.coloring.iter().any(|&c| c == 0 || c > n + 1) {
        return Err(Error::InvalidColoring("color outside 1..=n+1".into()));
    }
    for &facet in k.facet_masks() {
        let mut seen = 0u64;
        for v in mask_vertices(facet) {
            let bit = 1u64 << witness.coloring[v];
            if seen & bit != 0 {
                return Err(Error::InvalidColoring(format!(
                    "facet {:?} repeats color {}",
                    k.mask_to_labels(facet),
                    witness.coloring[v]
                )));
            }
            seen |= bit;
        }
    }
    Ok(())
}

/// An element `ω` of the row space with its coordinates and, for simplex
/// pullbacks, the even color set `χ_ω` with `supp ω = c^{-1}(χ_ω)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaDescriptor {
    pub omega: BitVec,
    pub coefficients: BitVec,
    /// Vertex positions where `ω` is nonzero.
    pub support: Mask,
    /// `S_ω` (1-based), present with a coloring.
    pub s_omega: Option<Vec<usize>>,
    /// `χ_ω ⊆ [n+1]` (1-based), present with a coloring.
    pub chi: Option<Vec<usize>>,
}

/// All `2^n` row-space elements in ascending coefficient order.
///
/// With a witness the coefficients are taken over the rows of `G·Λ`, the
/// basis in which `Λ` reads as `λ_∂Δ ∘ c`.
pub fn omega_descriptors(
    m: &CharacteristicMatrix,
    witness: Option<&PullbackWitness>,
) -> Result<Vec<OmegaDescriptor>> {
    let n = m.n;
    let normalized = match witness {
        Some(w) => m.transformed(&w.basis_change),
        None => m.clone(),
    };
    let space = normalized.matrix.row_space()?;
    if space.basis_rows.len() != n {
        return Err(Error::Internal("characteristic matrix lacks full row rank".into()));
    }
    space
        .elements
        .into_iter()
        .map(|e| {
            let support = e.vector.iter_ones().fold(0u64, |acc, j| acc | 1 << j);
            let (s_omega, chi) = match witness {
                None => (None, None),
                Some(w) => {
                    let s: Vec<usize> = e.coefficients.iter_ones().map(|i| i + 1).collect();
                    let mut chi = s.clone();
                    if s.len() % 2 == 1 {
                        chi.push(n + 1);
                    }
                    let preimage = w
                        .coloring
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| chi.contains(c))
                        .fold(0u64, |acc, (j, _)| acc | 1 << j);
                    if preimage != support {
                        return Err(Error::InvalidColoring(format!(
                            "support of ω = {} differs from c^-1({chi:?})",
                            e.vector
                        )));
                    }
                    (Some(s), Some(chi))
                }
            };
            Ok(OmegaDescriptor {
                omega: e.vector,
                coefficients: e.coefficients,
                support,
                s_omega,
                chi,
            })
        })
        .collect()
}

/// `λ_∂Δ` over `∂Δ^n`: columns `e_1, …, e_n, e_1+⋯+e_n`.
pub fn lambda_boundary_simplex(n: usize) -> CharacteristicMatrix {
    let mut cols: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
    cols.push(BitVec::ones(n));
    let matrix = BitMatrix::from_columns(&cols, n).expect("square columns");
    CharacteristicMatrix::validate(&SimplicialComplex::boundary_simplex(n), &matrix)
        .expect("λ_∂Δ is characteristic")
}

/// Block-diagonal characteristic matrix over the join `K1 * K2`.
pub fn block_product(
    k1: &SimplicialComplex,
    m1: &CharacteristicMatrix,
    k2: &SimplicialComplex,
    m2: &CharacteristicMatrix,
) -> Result<(SimplicialComplex, CharacteristicMatrix)> {
    let join = k1.join(k2);
    let n = m1.n + m2.n;
    let mut cols = Vec::with_capacity(m1.m() + m2.m());
    for c in &m1.columns {
        cols.push(BitVec::from_bits((0..n).map(|i| i < m1.n && c.get(i))));
    }
    for c in &m2.columns {
        cols.push(BitVec::from_bits((0..n).map(|i| i >= m1.n && c.get(i - m1.n))));
    }
    let matrix = BitMatrix::from_columns(&cols, n)?;
    let m = CharacteristicMatrix::validate(&join, &matrix)?;
    Ok((join, m))
}

/// Renumbers vertex positions by `perm` (position `j` becomes `perm[j]`),
/// keeping the label list, and permutes the columns to match.
pub fn relabel(
    k: &SimplicialComplex,
    m: &CharacteristicMatrix,
    perm: &[usize],
) -> Result<(SimplicialComplex, CharacteristicMatrix)> {
    let count = k.vertex_count();
    let mut check = perm.to_vec();
    check.sort_unstable();
    if check != (0..count).collect::<Vec<_>>() {
        return Err(Error::Dimension("not a permutation of the vertices".into()));
    }
    let facets = k
        .facet_masks()
        .iter()
        .map(|&f| mask_vertices(f).fold(0u64, |acc, v| acc | 1 << perm[v]))
        .collect();
    let k2 = SimplicialComplex::from_masks(k.labels().to_vec(), facets);
    let mut cols = vec![BitVec::zeros(m.n); count];
    for (j, c) in m.columns.iter().enumerate() {
        cols[perm[j]] = c.clone();
    }
    let m2 = CharacteristicMatrix::validate(&k2, &BitMatrix::from_columns(&cols, m.n)?)?;
    Ok((k2, m2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(n: usize, cs: &[&[usize]]) -> BitMatrix {
        let vs: Vec<BitVec> = cs
            .iter()
            .map(|c| BitVec::from_bits((0..n).map(|i| c.contains(&(i + 1)))))
            .collect();
        BitMatrix::from_columns(&vs, n).unwrap()
    }

    fn octahedron_linear() -> (SimplicialComplex, CharacteristicMatrix) {
        let k = SimplicialComplex::cross_polytope(3);
        let m = CharacteristicMatrix::validate(&k, &cols(3, &[&[1], &[2], &[3], &[1], &[2], &[3]]))
            .unwrap();
        (k, m)
    }

    fn prism() -> (SimplicialComplex, CharacteristicMatrix) {
        let k1 = SimplicialComplex::boundary_simplex(2);
        let k2 = SimplicialComplex::boundary_simplex(1);
        block_product(&k1, &lambda_boundary_simplex(2), &k2, &lambda_boundary_simplex(1)).unwrap()
    }

    #[test]
    fn validate_examples() {
        let k = SimplicialComplex::boundary_simplex(2);
        let ok = BitMatrix::from_u8_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert!(CharacteristicMatrix::validate(&k, &ok).is_ok());
        octahedron_linear();
        let bad = BitMatrix::from_u8_rows(&[vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        match CharacteristicMatrix::validate(&k, &bad) {
            Err(Error::DependentFacet { facet }) => assert_eq!(facet, vec![1, 3]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_examples() {
        let m = lambda_boundary_simplex(3);
        assert_eq!(classify_pullback(&m).unwrap().label, PullbackLabel::SimplexProper);
        let (_, m) = octahedron_linear();
        let c = classify_pullback(&m).unwrap();
        assert_eq!(c.label, PullbackLabel::LinearModel);
        assert!(c.is_simplex_pullback());
        let (_, m) = prism();
        let c = classify_pullback(&m).unwrap();
        assert_eq!(c.label, PullbackLabel::NotSimplex);
        assert!(c.witness.is_none());
    }

    #[test]
    fn flip_support_examples() {
        let k = SimplicialComplex::boundary_simplex(3);
        let m = lambda_boundary_simplex(3);
        for i in 1..=3 {
            assert_eq!(ridge_flip_support(&k, &m, &[1, 2, 3], i).unwrap(), vec![1, 2, 3]);
        }
        let (k, m) = octahedron_linear();
        for f in k.facets() {
            for i in 1..=3 {
                assert_eq!(ridge_flip_support(&k, &m, &f, i).unwrap(), vec![i]);
            }
        }
        let (k, m) = prism();
        let bad = first_bad_flip(&k, &m).unwrap().expect("a bad flip exists");
        assert!(bad.support != vec![bad.position] && bad.support.len() != 3);
    }

    #[test]
    fn classify_via_flips_examples() {
        let k = SimplicialComplex::boundary_simplex(3);
        let m = lambda_boundary_simplex(3);
        assert_eq!(classify_via_flips(&k, &m).unwrap().label, PullbackLabel::SimplexProper);
        let (k, m) = octahedron_linear();
        assert_eq!(classify_via_flips(&k, &m).unwrap().label, PullbackLabel::LinearModel);
        let (k, m) = prism();
        assert_eq!(classify_via_flips(&k, &m).unwrap().label, PullbackLabel::NotSimplex);
    }

    #[test]
    fn witnesses_are_nondegenerate() {
        for n in 1..=5 {
            let k = SimplicialComplex::boundary_simplex(n);
            let m = lambda_boundary_simplex(n);
            let c = classify_pullback(&m).unwrap();
            verify_witness(&k, &m, c.witness.as_ref().unwrap()).unwrap();
        }
        let (k, m) = octahedron_linear();
        let c = classify_pullback(&m).unwrap();
        assert_eq!(c.coloring().unwrap(), &[1, 2, 3, 1, 2, 3]);
        verify_witness(&k, &m, c.witness.as_ref().unwrap()).unwrap();
    }

    #[test]
    fn omega_examples() {
        let m = lambda_boundary_simplex(2);
        let c = classify_pullback(&m).unwrap();
        let ds = omega_descriptors(&m, c.witness.as_ref()).unwrap();
        assert_eq!(ds.len(), 4);
        assert_eq!(ds[0].support, 0);
        assert_eq!(ds[0].chi.as_deref(), Some(&[][..]));
        // ρ_1
        assert_eq!(ds[1].support, 0b101);
        assert_eq!(ds[1].s_omega.as_deref(), Some(&[1][..]));
        assert_eq!(ds[1].chi.as_deref(), Some(&[1, 3][..]));
        // ρ_1 + ρ_2
        assert_eq!(ds[3].support, 0b011);
        assert_eq!(ds[3].chi.as_deref(), Some(&[1, 2][..]));
    }

    #[test]
    fn omega_rejects_inconsistent_coloring() {
        let m = lambda_boundary_simplex(2);
        let mut w = classify_pullback(&m).unwrap().witness.unwrap();
        w.coloring.swap(0, 2);
        assert!(matches!(omega_descriptors(&m, Some(&w)), Err(Error::InvalidColoring(_))));
    }

    #[test]
    fn constructors() {
        assert_eq!(
            *lambda_boundary_simplex(2).matrix(),
            BitMatrix::from_u8_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap()
        );
        let s0 = SimplicialComplex::boundary_simplex(1);
        let l1 = lambda_boundary_simplex(1);
        let (k, m) = block_product(&s0, &l1, &s0, &l1).unwrap();
        let square = SimplicialComplex::from_facets(
            &[1, 2, 3, 4],
            &[vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]],
        )
        .unwrap();
        assert_eq!(k, square);
        assert_eq!(*m.matrix(), cols(2, &[&[1], &[1], &[2], &[2]]));
        let (_, m) = prism();
        assert_eq!(*m.matrix(), cols(3, &[&[1], &[2], &[1, 2], &[3], &[3]]));
    }

    #[test]
    fn relabel_moves_columns() {
        let (k, m) = prism();
        let perm = [4, 3, 2, 1, 0];
        let (k2, m2) = relabel(&k, &m, &perm).unwrap();
        assert_eq!(k2.facet_masks().len(), k.facet_masks().len());
        assert_eq!(m2.column(4), m.column(0));
        assert_eq!(classify_pullback(&m2).unwrap().label, PullbackLabel::NotSimplex);
    }
}
