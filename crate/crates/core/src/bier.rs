//! Bier spheres and their canonical characteristic matrix.
//!
//! For `K` on `S = {1, …, ℓ}` the Bier sphere lives on `S ⊔ S̄`, with `s_i`
//! labelled `i` and `s̄_i` labelled `ℓ + i`. Its facets are `σ ∪ τ̄` where
//! `σ ∪ τ` misses exactly one element `s` of `S`, so they are enumerated by
//! choosing `σ ∈ K` and `s ∉ σ` with `σ ∪ {s} ∉ K`, then `τ = S ∖ σ ∖ {s}`.

use crate::charmap::CharacteristicMatrix;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::simplicial::{mask_vertices, Mask, SimplicialComplex};

/// The Bier sphere of `K`, whose labels must be exactly `1..=ℓ`.
pub fn bier_sphere(k: &SimplicialComplex) -> Result<SimplicialComplex> {
    let l = k.vertex_count();
    if k.labels() != (1..=l as u32).collect::<Vec<_>>() {
        return Err(Error::Semantic(
            "the ground set of a Bier sphere must be labelled 1..=l".into(),
        ));
    }
    if 2 * l > 64 {
        return Err(Error::TooManyVertices(2 * l));
    }
    let all: Mask = k.all_vertices();
    if k.contains_face(all) {
        return Err(Error::FullSimplex);
    }
    let mut facets = Vec::new();
    for faces in k.faces_by_size() {
        for &sigma in faces {
            for s in mask_vertices(all & !sigma) {
                if !k.contains_face(sigma | 1 << s) {
                    let tau = all & !sigma & !(1 << s);
                    facets.push(sigma | tau << l);
                }
            }
        }
    }
    let labels = (1..=2 * l as u32).collect();
    let bier = SimplicialComplex::from_masks(labels, facets);
    if bier.dim() != l as i32 - 2 || !bier.is_closed_pseudomanifold() {
        return Err(Error::Internal(format!(
            "Bier sphere has dimension {} or fails to be a closed pseudomanifold",
            bier.dim()
        )));
    }
    Ok(bier)
}

/// Columns of `λ_Bier` for labels `1..=2ℓ`: `e_i` for `i` and `ℓ+i` when
/// `i < ℓ`, the all-ones vector for `ℓ` and `2ℓ`.
pub fn lambda_bier_columns(l: usize) -> Vec<BitVec> {
    let n = l - 1;
    (0..2 * l)
        .map(|j| match j % l {
            i if i < n => BitVec::unit(n, i),
            _ => BitVec::ones(n),
        })
        .collect()
}

/// `λ_Bier` as an `(ℓ−1) × 2ℓ` matrix.
pub fn lambda_bier(l: usize) -> Result<BitMatrix> {
    if l < 2 {
        return Err(Error::Dimension("Bier characteristic map needs l >= 2".into()));
    }
    BitMatrix::from_columns(&lambda_bier_columns(l), l - 1)
}

/// The Bier sphere restricted to its used labels, with `λ_Bier` on those labels.
pub fn bier_instance(k: &SimplicialComplex) -> Result<(SimplicialComplex, CharacteristicMatrix)> {
    let l = k.vertex_count();
    if l < 2 {
        return Err(Error::Dimension("Bier sphere needs at least two ground elements".into()));
    }
    let bier = bier_sphere(k)?;
    let used = bier.used_vertices();
    let restricted = bier.induced_by_mask(used);
    let columns = lambda_bier_columns(l);
    let kept: Vec<BitVec> = mask_vertices(used).map(|j| columns[j].clone()).collect();
    let lambda = BitMatrix::from_columns(&kept, l - 1)?;
    let m = CharacteristicMatrix::validate(&restricted, &lambda)?;
    Ok((restricted, m))
}

/// The 9-vertex complex with facets `{1,3,8}, {1,6,7,8,9}, {2,4,5,6,8}, {2,7}, {3,4,5,6,7,8,9}`.
pub fn example_complex() -> SimplicialComplex {
    SimplicialComplex::from_facets(
        &(1..=9).collect::<Vec<_>>(),
        &[
            vec![1, 3, 8],
            vec![1, 6, 7, 8, 9],
            vec![2, 4, 5, 6, 8],
            vec![2, 7],
            vec![3, 4, 5, 6, 7, 8, 9],
        ],
    )
    .expect("valid facet list")
}

/// The example complex, its Bier sphere on used labels, and `λ_Bier` there.
pub fn worked_example() -> (SimplicialComplex, SimplicialComplex, CharacteristicMatrix) {
    let k = example_complex();
    let (bier, m) = bier_instance(&k).expect("the example admits a Bier sphere");
    (k, bier, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmap::classify_pullback;

    #[test]
    fn two_element_ground_sets() {
        let k = SimplicialComplex::from_facets(&[1, 2], &[vec![1]]).unwrap();
        let b = bier_sphere(&k).unwrap();
        // faces: σ = {1} with τ = ∅, and σ = ∅ with τ = {1} (barred 1 is label 3)
        assert_eq!(b.facets(), vec![vec![1], vec![3]]);
        let k = SimplicialComplex::from_facets(&[1, 2], &[vec![1], vec![2]]).unwrap();
        let b = bier_sphere(&k).unwrap();
        assert_eq!(b.facets(), vec![vec![1], vec![2]]);
        assert_eq!(b.used_vertices(), 0b0011);
        assert_eq!(b.vertex_count(), 4);
    }

    #[test]
    fn full_simplex_is_rejected() {
        let k = SimplicialComplex::from_facets(&[1, 2], &[vec![1, 2]]).unwrap();
        assert!(matches!(bier_sphere(&k), Err(Error::FullSimplex)));
    }

    #[test]
    fn lambda_columns() {
        let l2 = lambda_bier(2).unwrap();
        assert_eq!(l2.nrows(), 1);
        assert!((0..4).all(|j| l2.get(0, j)));
        let l9 = lambda_bier(9).unwrap();
        assert_eq!((l9.nrows(), l9.ncols()), (8, 18));
        assert_eq!(l9.column(8), BitVec::ones(8));
        assert_eq!(l9.column(17), BitVec::ones(8));
        assert_eq!(l9.column(9), BitVec::unit(8, 0));
    }

    #[test]
    fn example_instance() {
        let (k, bier, m) = worked_example();
        assert_eq!(k.facet_masks().len(), 5);
        assert_eq!(k.dim(), 6);
        assert_eq!(bier.dim(), 7);
        assert!(bier.is_closed_pseudomanifold());
        assert_eq!(m.n(), 8);
        assert!(classify_pullback(&m).unwrap().is_simplex_pullback());
    }
}
