//! Shellings, restriction faces and critical generators.
//!
//! In a shelling `σ_1, …, σ_N` the restriction face `r_i` collects the
//! vertices `v ∈ σ_i` whose opposite ridge `σ_i ∖ {v}` already lies in an
//! earlier facet. For a vertex set `W` the facets with `σ_i ∩ W = r_i` are the
//! critical cells of the full subcomplex `K_W`; cell `i` sits in cochain
//! degree `|r_i| − 1`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::simplicial::{mask_size, mask_vertices, Mask, SimplicialComplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shelling {
    labels: Vec<u32>,
    facets: Vec<Mask>,
    restrictions: Vec<Mask>,
}

impl Shelling {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facet_masks(&self) -> &[Mask] {
        &self.facets
    }

    pub fn restriction_masks(&self) -> &[Mask] {
        &self.restrictions
    }

    pub fn facets(&self) -> Vec<Vec<u32>> {
        self.facets.iter().map(|&f| self.to_labels(f)).collect()
    }

    pub fn restrictions(&self) -> Vec<Vec<u32>> {
        self.restrictions.iter().map(|&r| self.to_labels(r)).collect()
    }

    fn to_labels(&self, mask: Mask) -> Vec<u32> {
        mask_vertices(mask).map(|v| self.labels[v]).collect()
    }

    /// `Σ_i 2^{|σ_i| − |r_i|}`, the number of faces covered by the intervals `[r_i, σ_i]`.
    pub fn interval_face_count(&self) -> u64 {
        self.facets
            .iter()
            .zip(&self.restrictions)
            .map(|(&f, &r)| 1u64 << (mask_size(f) - mask_size(r)))
            .sum()
    }
}

/// Tracks the ridges of the facets placed so far.
struct Prefix {
    facets: Vec<Mask>,
    ridges: HashMap<Mask, usize>,
}

impl Prefix {
    fn new() -> Self {
        Self {
            facets: Vec::new(),
            ridges: HashMap::new(),
        }
    }

    fn restriction(&self, facet: Mask) -> Mask {
        mask_vertices(facet)
            .filter(|&v| self.ridges.contains_key(&(facet & !(1 << v))))
            .fold(0, |acc, v| acc | 1 << v)
    }

    /// The restriction face if `facet` can be appended, `None` otherwise.
    fn admits(&self, facet: Mask) -> Option<Mask> {
        let r = self.restriction(facet);
        if self.facets.is_empty() {
            return Some(r);
        }
        // σ ∩ (earlier union) is pure of codimension one iff r escapes every earlier facet
        if r == 0 || self.facets.iter().any(|&g| r & !g == 0) {
            None
        } else {
            Some(r)
        }
    }

    fn push(&mut self, facet: Mask) {
        self.facets.push(facet);
        for v in mask_vertices(facet) {
            *self.ridges.entry(facet & !(1 << v)).or_default() += 1;
        }
    }

    fn pop(&mut self) {
        let facet = self.facets.pop().unwrap();
        for v in mask_vertices(facet) {
            let ridge = facet & !(1 << v);
            let count = self.ridges.get_mut(&ridge).unwrap();
            *count -= 1;
            if *count == 0 {
                self.ridges.remove(&ridge);
            }
        }
    }
}

fn finish(k: &SimplicialComplex, facets: Vec<Mask>, restrictions: Vec<Mask>) -> Result<Shelling> {
    let shelling = Shelling {
        labels: k.labels().to_vec(),
        facets,
        restrictions,
    };
    let faces = k.face_count() as u64;
    if shelling.interval_face_count() != faces {
        return Err(Error::Internal(format!(
            "restriction intervals cover {} faces, the complex has {faces}",
            shelling.interval_face_count()
        )));
    }
    Ok(shelling)
}

/// Checks that `order` lists the facets of `K` as a shelling and computes its restriction faces.
pub fn verify_shelling(k: &SimplicialComplex, order: &[Vec<u32>]) -> Result<Shelling> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    let masks = order
        .iter()
        .map(|f| k.labels_to_mask(f))
        .collect::<Result<Vec<_>>>()?;
    for (f, &mask) in order.iter().zip(&masks) {
        if k.facet_index(mask).is_none() {
            return Err(Error::NotAFacet(f.clone()));
        }
    }
    let distinct: HashSet<Mask> = masks.iter().copied().collect();
    if distinct.len() != masks.len() || masks.len() != k.facet_masks().len() {
        return Err(Error::Semantic(
            "shelling order must list every facet exactly once".into(),
        ));
    }
    let mut prefix = Prefix::new();
    let mut restrictions = Vec::with_capacity(masks.len());
    for (i, &facet) in masks.iter().enumerate() {
        match prefix.admits(facet) {
            Some(r) => restrictions.push(r),
            None => {
                return Err(Error::NotAShelling {
                    index: i + 1,
                    facet: order[i].clone(),
                })
            }
        }
        prefix.push(facet);
    }
    finish(k, masks, restrictions)
}

/// Depth-first search over facet orders, trying facets in lexicographic order
/// at every step. `None` once the search tree is exhausted.
pub fn find_shelling(k: &SimplicialComplex) -> Result<Option<Shelling>> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    let facets = k.facet_masks();
    let mut used = vec![false; facets.len()];
    let mut prefix = Prefix::new();
    let mut restrictions = Vec::new();
    // next candidate index to try at each depth
    let mut cursor = vec![0usize];
    while let Some(&start) = cursor.last() {
        if prefix.facets.len() == facets.len() {
            let order = prefix.facets.clone();
            return finish(k, order, restrictions).map(Some);
        }
        let next = (start..facets.len())
            .find(|&c| !used[c] && prefix.admits(facets[c]).is_some());
        match next {
            Some(c) => {
                *cursor.last_mut().unwrap() = c + 1;
                restrictions.push(prefix.admits(facets[c]).unwrap());
                used[c] = true;
                prefix.push(facets[c]);
                cursor.push(0);
            }
            None => {
                cursor.pop();
                if cursor.is_empty() {
                    break;
                }
                let last = prefix.facets.last().copied().unwrap();
                used[k.facet_index(last).unwrap()] = false;
                restrictions.pop();
                prefix.pop();
            }
        }
    }
    Ok(None)
}

/// A critical cell: facet index `i` (1-based) with `σ_i ∩ W = r_i`, in degree `|r_i| − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriticalGenerator {
    pub index: usize,
    pub degree: i32,
}

pub fn critical_generators(s: &Shelling, w: Mask) -> Vec<CriticalGenerator> {
    s.facets
        .iter()
        .zip(&s.restrictions)
        .enumerate()
        .filter(|(_, (&f, &r))| f & w == r)
        .map(|(i, (_, &r))| CriticalGenerator {
            index: i + 1,
            degree: mask_size(r) as i32 - 1,
        })
        .collect()
}

/// Vertex positions whose color lies in `chi` (colors 1-based).
pub fn color_preimage(coloring: &[usize], chi: &[usize]) -> Mask {
    coloring
        .iter()
        .enumerate()
        .filter(|(_, c)| chi.contains(c))
        .fold(0, |acc, (j, _)| acc | 1 << j)
}

/// For `W = c^{-1}(χ)`: every `η_i = σ_i ∩ W` has `|χ| − 1` elements when the
/// color missing from `σ_i` lies in `χ` and `|χ|` otherwise, and every
/// critical generator sits in degree `|χ| − 2` or `|χ| − 1`.
pub fn two_degree_concentration_check(s: &Shelling, coloring: &[usize], chi: &[usize]) -> bool {
    let w = color_preimage(coloring, chi);
    let size = chi.len() as i32;
    let eta_ok = s.facets.iter().all(|&f| {
        let used: Vec<usize> = mask_vertices(f).map(|v| coloring[v]).collect();
        let missed: Vec<usize> = (1..=used.len() + 1).filter(|c| !used.contains(c)).collect();
        let eta = mask_size(f & w) as i32;
        match missed.as_slice() {
            [p] => eta == size - i32::from(chi.contains(p)),
            _ => false,
        }
    });
    eta_ok
        && critical_generators(s, w)
            .iter()
            .all(|g| g.degree == size - 2 || g.degree == size - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::SimplicialComplex;

    fn permutations(items: &[Vec<u32>]) -> Vec<Vec<Vec<u32>>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, head.clone());
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn triangle_boundary() {
        let k = SimplicialComplex::boundary_simplex(2);
        let s = verify_shelling(&k, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(s.restrictions(), vec![vec![], vec![3], vec![2, 3]]);
        assert_eq!(s.interval_face_count(), 7);
    }

    #[test]
    fn every_order_of_a_simplex_boundary_shells() {
        for n in 1..=3 {
            let k = SimplicialComplex::boundary_simplex(n);
            for order in permutations(&k.facets()) {
                verify_shelling(&k, &order).unwrap();
            }
        }
    }

    #[test]
    fn octahedron_bad_order() {
        let k = SimplicialComplex::cross_polytope(3);
        let mut order = vec![vec![1, 2, 3], vec![4, 5, 6]];
        order.extend(k.facets().into_iter().filter(|f| f != &[1, 2, 3] && f != &[4, 5, 6]));
        match verify_shelling(&k, &order) {
            Err(Error::NotAShelling { index, facet }) => {
                assert_eq!(index, 2);
                assert_eq!(facet, vec![4, 5, 6]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn search() {
        let k = SimplicialComplex::boundary_simplex(3);
        let s = find_shelling(&k).unwrap().unwrap();
        assert_eq!(verify_shelling(&k, &s.facets()).unwrap(), s);
        let two = SimplicialComplex::from_facets(
            &[1, 2, 3, 4, 5, 6],
            &[vec![1, 2, 3], vec![4, 5, 6]],
        )
        .unwrap();
        assert!(find_shelling(&two).unwrap().is_none());
        let oct = SimplicialComplex::cross_polytope(3);
        let s = find_shelling(&oct).unwrap().unwrap();
        assert_eq!(s.interval_face_count(), oct.face_count() as u64);
    }

    #[test]
    fn critical_generator_examples() {
        let k = SimplicialComplex::boundary_simplex(2);
        let s = verify_shelling(&k, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        // σ_1 ∩ W = {1,2} ≠ ∅ = r_1, so only the top cell survives
        let all = critical_generators(&s, 0b111);
        assert_eq!(all, vec![CriticalGenerator { index: 3, degree: 1 }]);
        let none = critical_generators(&s, 0);
        assert_eq!(none, vec![CriticalGenerator { index: 1, degree: -1 }]);
    }

    #[test]
    fn concentration_on_rp3_model() {
        let k = SimplicialComplex::boundary_simplex(3);
        let s = find_shelling(&k).unwrap().unwrap();
        let coloring = [1, 2, 3, 4];
        assert!(two_degree_concentration_check(&s, &coloring, &[1, 2]));
        assert!(two_degree_concentration_check(&s, &coloring, &[]));
        assert!(two_degree_concentration_check(&s, &coloring, &[1, 2, 3, 4]));
    }
}
