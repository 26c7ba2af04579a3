//! Reduced simplicial cohomology with integer, rational and mod-2 coefficients.
//!
//! Cohomology is read straight off the coboundary matrices: the free rank of
//! `H̃^d` is `f_d − rank δ^d − rank δ^{d−1}` and its torsion is the cokernel
//! torsion of `δ^{d−1}`, i.e. the invariant factors of `δ^{d−1}` above one.

pub mod snf;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{mask_vertices, SimplicialComplex};
pub use snf::{smith_normal_form, IntMatrix, SmithForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Rationals,
    Mod2,
}

/// A finitely generated abelian group `Z^rank ⊕ (⊕ Z_q)`, each `q` a prime power.
///
/// Over a field `rank` is the dimension and `torsion` stays empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl FinAbGroup {
    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(rank: usize, mut torsion: Vec<u64>) -> Self {
        debug_assert!(torsion.iter().all(|&q| is_prime_power(q)));
        torsion.sort_unstable();
        Self { rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of cyclic summands of even order.
    pub fn even_torsion_count(&self) -> usize {
        self.torsion.iter().filter(|&&q| q % 2 == 0).count()
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        FinAbGroup::new(self.rank + other.rank, torsion)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let q = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&t| t == q).count();
            parts.push(match run {
                1 => format!("Z_{q}"),
                r => format!("(Z_{q})^{r}"),
            });
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|p| q.is_multiple_of(*p)).unwrap();
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

/// Groups indexed by degree; absent degrees are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyProfile {
    groups: BTreeMap<i32, FinAbGroup>,
}

impl CohomologyProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, degree: i32, group: FinAbGroup) {
        if group.is_zero() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, group);
        }
    }

    pub fn group(&self, degree: i32) -> FinAbGroup {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    pub fn rank(&self, degree: i32) -> usize {
        self.groups.get(&degree).map_or(0, |g| g.rank)
    }

    /// Nonzero degrees in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &FinAbGroup)> {
        self.groups.iter().map(|(d, g)| (*d, g))
    }

    /// `Σ (-1)^d rank H^d`.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(&d, g)| if d.rem_euclid(2) == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }
}

/// Coboundary `δ^d : C^d → C^{d+1}`; rows index `(d+1)`-faces and columns
/// `d`-faces, both in lexicographic order. Dropping the `j`th vertex
/// (0-based) of a face carries sign `(-1)^j`.
pub fn coboundary_matrix(k: &SimplicialComplex, d: i32) -> Result<IntMatrix> {
    let dim = k.dim();
    if d < -1 || d > dim {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            max: dim,
        });
    }
    Ok(coboundary_unchecked(k, d))
}

fn coboundary_unchecked(k: &SimplicialComplex, d: i32) -> IntMatrix {
    let lower = k.faces_of_dim(d);
    let upper = k.faces_of_dim(d + 1);
    let index: HashMap<u64, usize> = lower.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let rows = upper
        .iter()
        .map(|&tau| {
            mask_vertices(tau)
                .enumerate()
                .map(|(j, v)| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    (index[&(tau & !(1u64 << v))], sign)
                })
                .collect()
        })
        .collect();
    IntMatrix::from_sparse_rows(lower.len(), rows)
}

/// Rank over GF(2) of a sparse integer matrix's mod-2 reduction.
fn rank_mod2(a: &IntMatrix) -> usize {
    let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
    for r in 0..a.nrows() {
        let mut row: Vec<usize> = a
            .row_entries(r)
            .iter()
            .filter(|(_, v)| v % 2 != 0)
            .map(|(c, _)| *c)
            .collect();
        while let Some(&lead) = row.first() {
            match pivots.get(&lead) {
                Some(p) => row = symmetric_difference(&row, p),
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Reduced cohomology `H̃^*(K)`; for `K = {∅}` only degree −1 is nonzero.
pub fn reduced_cohomology(k: &SimplicialComplex, coefficients: Coefficients) -> CohomologyProfile {
    let dim = k.dim();
    let f = k.f_vector();
    // rank and nonunit invariant factors of δ^d for d = -1..=dim
    let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
    let mut torsion: BTreeMap<i32, Vec<u64>> = BTreeMap::new();
    for d in -1..=dim {
        let delta = coboundary_unchecked(k, d);
        match coefficients {
            Coefficients::Mod2 => {
                ranks.insert(d, rank_mod2(&delta));
            }
            Coefficients::Integers | Coefficients::Rationals => {
                let s = smith_normal_form(&delta);
                ranks.insert(d, s.rank());
                if coefficients == Coefficients::Integers {
                    let parts = s.torsion().iter().flat_map(snf::primary_parts).collect();
                    torsion.insert(d + 1, parts);
                }
            }
        }
    }
    let mut profile = CohomologyProfile::new();
    for d in -1..=dim {
        let cochains = f[(d + 1) as usize] as usize;
        let rank = cochains - ranks[&d] - ranks.get(&(d - 1)).copied().unwrap_or(0);
        let tors = torsion.remove(&d).unwrap_or_default();
        profile.set(d, FinAbGroup::new(rank, tors));
    }
    profile
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coboundary_examples() {
        let k = SimplicialComplex::boundary_simplex(2);
        let a = coboundary_matrix(&k, -1).unwrap();
        assert_eq!(a.to_dense(), vec![vec![1], vec![1], vec![1]]);
        let b = coboundary_matrix(&k, 0).unwrap();
        // edges 12, 13, 23 against vertices 1, 2, 3
        assert_eq!(b.to_dense(), vec![vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        assert!(b.mul(&a).is_zero());

        let two = SimplicialComplex::from_facets(&[1, 2], &[vec![1], vec![2]]).unwrap();
        let c = coboundary_matrix(&two, -1).unwrap();
        assert_eq!(c.to_dense(), vec![vec![1], vec![1]]);
        assert_eq!(smith_normal_form(&c).rank(), 1);

        assert!(matches!(
            coboundary_matrix(&k, 2),
            Err(Error::DegreeOutOfRange { degree: 2, max: 1 })
        ));
    }

    #[test]
    fn circle() {
        let h = reduced_cohomology(&SimplicialComplex::boundary_simplex(2), Coefficients::Integers);
        assert_eq!(h.group(1), FinAbGroup::free(1));
        assert_eq!(h.iter().count(), 1);
    }

    #[test]
    fn projective_plane() {
        let k = SimplicialComplex::rp2_six_vertex();
        let z = reduced_cohomology(&k, Coefficients::Integers);
        assert!(z.group(0).is_zero());
        assert!(z.group(1).is_zero());
        assert_eq!(z.group(2), FinAbGroup::new(0, vec![2]));
        let z2 = reduced_cohomology(&k, Coefficients::Mod2);
        assert_eq!((z2.rank(0), z2.rank(1), z2.rank(2)), (0, 1, 1));
        let q = reduced_cohomology(&k, Coefficients::Rationals);
        assert_eq!(q.iter().count(), 0);
    }

    #[test]
    fn void_complex() {
        let h = reduced_cohomology(&SimplicialComplex::void(vec![1, 2]), Coefficients::Integers);
        assert_eq!(h.group(-1), FinAbGroup::free(1));
        assert_eq!(h.iter().count(), 1);
    }

    #[test]
    fn cohomology_of_point_and_two_points() {
        let p = SimplicialComplex::simplex(1);
        assert_eq!(reduced_cohomology(&p, Coefficients::Integers).iter().count(), 0);
        let s0 = SimplicialComplex::boundary_simplex(1);
        assert_eq!(reduced_cohomology(&s0, Coefficients::Integers).group(0), FinAbGroup::free(1));
    }

    #[test]
    fn group_display_and_counts() {
        let g = FinAbGroup::new(2, vec![4, 3, 2]);
        assert_eq!(g.to_string(), "Z^2 + Z_2 + Z_3 + Z_4");
        assert_eq!(FinAbGroup::new(0, vec![2, 2, 2]).to_string(), "(Z_2)^3");
        assert_eq!(g.even_torsion_count(), 2);
        assert!(is_prime_power(8) && is_prime_power(9) && !is_prime_power(6));
    }
}
