//! Invariants of the real toric space `M(K, Λ)` and the seven equivalent
//! conditions on it.
//!
//! Cohomology is assembled from full subcomplexes: for every `ω` in the row
//! space of `Λ`, `H̃^{i−1}(K_ω)` contributes to `H^i(M)`. Free parts and odd
//! torsion are copied, each `Z_{2^k}` becomes `Z_{2^{k+1}}`, and the number of
//! `Z_2` summands is fixed by the mod-2 Betti numbers through
//! `b^q_{Z_2} = b^q + μ^q + μ^{q+1}` with `μ^0 = μ^1 = 0`.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::charmap::{
    classify_pullback, classify_via_flips, omega_descriptors, CharacteristicMatrix,
    OmegaDescriptor, PullbackClass,
};
use crate::error::{Error, Result};
use crate::facering::{find_sq1_witness, GradedRingBasis, Sq1Witness};
use crate::homology::{reduced_cohomology, Coefficients, CohomologyProfile, FinAbGroup};
use crate::shelling::{find_shelling, Shelling};
use crate::simplicial::SimplicialComplex;

fn cached<T>(cell: &OnceLock<T>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = init()?;
    Ok(cell.get_or_init(|| v))
}

/// `H̃^*(K_ω; Z)` for one row-space element.
#[derive(Clone, Debug)]
pub struct OmegaCohomology {
    pub descriptor: OmegaDescriptor,
    pub cohomology: CohomologyProfile,
}

/// A validated pair `(K, Λ)` with `n = dim K + 1`, plus lazily computed invariants.
#[derive(Debug)]
pub struct RealToricSpace {
    k: SimplicialComplex,
    m: CharacteristicMatrix,
    closed_pseudomanifold: bool,
    shelling: OnceLock<Option<Shelling>>,
    class: OnceLock<PullbackClass>,
    omegas: OnceLock<Vec<OmegaCohomology>>,
    ring: OnceLock<GradedRingBasis>,
}

impl RealToricSpace {
    pub fn new(k: SimplicialComplex, m: CharacteristicMatrix) -> Result<Self> {
        if k.dim() + 1 != m.n() as i32 || k.dim() < 0 {
            return Err(Error::Dimension(format!(
                "complex of dimension {} needs a characteristic matrix with {} rows, got {}",
                k.dim(),
                k.dim() + 1,
                m.n()
            )));
        }
        if !k.is_pure() {
            return Err(Error::NotPure);
        }
        let closed_pseudomanifold = k.is_strongly_connected_pseudomanifold();
        Ok(Self {
            k,
            m,
            closed_pseudomanifold,
            shelling: OnceLock::new(),
            class: OnceLock::new(),
            omegas: OnceLock::new(),
            ring: OnceLock::new(),
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.k
    }

    pub fn matrix(&self) -> &CharacteristicMatrix {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    /// `K` is a strongly connected closed pseudomanifold.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        self.closed_pseudomanifold
    }

    pub fn shelling(&self) -> Result<Option<&Shelling>> {
        cached(&self.shelling, || find_shelling(&self.k)).map(Option::as_ref)
    }

    /// Closed pseudomanifold with a shelling: the setting where the seven conditions must agree.
    pub fn hypotheses_hold(&self) -> Result<bool> {
        Ok(self.closed_pseudomanifold && self.shelling()?.is_some())
    }

    pub fn classification(&self) -> Result<&PullbackClass> {
        cached(&self.class, || classify_pullback(&self.m))
    }

    /// The ridge-flip classification, when `K` is a closed pseudomanifold.
    pub fn flip_classification(&self) -> Result<Option<PullbackClass>> {
        if !self.closed_pseudomanifold {
            return Ok(None);
        }
        classify_via_flips(&self.k, &self.m).map(Some)
    }

    pub fn ring(&self) -> Result<&GradedRingBasis> {
        cached(&self.ring, || GradedRingBasis::build(&self.k, &self.m))
    }

    /// `H̃^*(K_ω; Z)` for all `2^n` elements `ω`, in canonical order.
    pub fn omega_cohomology(&self) -> Result<&[OmegaCohomology]> {
        cached(&self.omegas, || {
            let witness = self.classification()?.witness.as_ref();
            let descriptors = omega_descriptors(&self.m, witness)?;
            Ok(descriptors
                .into_par_iter()
                .map(|descriptor| {
                    let sub = self.k.induced_by_mask(descriptor.support);
                    let cohomology = reduced_cohomology(&sub, Coefficients::Integers);
                    OmegaCohomology {
                        descriptor,
                        cohomology,
                    }
                })
                .collect())
        })
        .map(Vec::as_slice)
    }

    /// `b^q_{Z_2} = h_q(K)`, checked against the ring dimensions.
    pub fn mod2_betti(&self) -> Result<Vec<usize>> {
        let h: Vec<usize> = self.k.h_vector()?.h.iter().map(|&x| x as usize).collect();
        let dims = self.ring()?.dims();
        if dims != h {
            return Err(Error::Internal(format!(
                "ring dimensions {dims:?} differ from the h-vector {h:?}"
            )));
        }
        Ok(h)
    }

    /// `b^q = Σ_ω dim H̃^{q−1}(K_ω; Q)`.
    pub fn rational_betti(&self) -> Result<Vec<usize>> {
        let n = self.n();
        let mut b = vec![0; n + 1];
        for oc in self.omega_cohomology()? {
            for (d, g) in oc.cohomology.iter() {
                let q = (d + 1) as usize;
                if q <= n {
                    b[q] += g.rank;
                } else if g.rank > 0 {
                    return Err(Error::Internal(format!("H~^{d} of a full subcomplex exceeds degree n")));
                }
            }
        }
        Ok(b)
    }

    /// `μ^0, …, μ^{n+1}` from `μ^{q+1} = b^q_{Z_2} − b^q − μ^q`.
    pub fn mu_recursion(&self) -> Result<Vec<usize>> {
        mu_recursion(&self.rational_betti()?, &self.mod2_betti()?)
    }

    pub fn betti_table(&self) -> Result<BettiTable> {
        let rational = self.rational_betti()?;
        let mod2 = self.mod2_betti()?;
        let mu = mu_recursion(&rational, &mod2)?;
        Ok(BettiTable { rational, mod2, mu })
    }

    /// `H^*(M; Z)` in degrees `0..=n`.
    pub fn integral_cohomology(&self) -> Result<CohomologyProfile> {
        let n = self.n();
        let rational = self.rational_betti()?;
        let mu = self.mu_recursion()?;
        let mut profile = CohomologyProfile::new();
        for (i, &rank) in rational.iter().enumerate() {
            let mut torsion = Vec::new();
            for oc in self.omega_cohomology()? {
                for &q in &oc.cohomology.group(i as i32 - 1).torsion {
                    torsion.push(if q % 2 == 0 { 2 * q } else { q });
                }
            }
            let doubled = torsion.iter().filter(|&&q| q % 2 == 0).count();
            let twos = mu[i].checked_sub(doubled).ok_or_else(|| {
                Error::Internal(format!(
                    "degree {i}: {doubled} even summands from full subcomplexes exceed mu = {}",
                    mu[i]
                ))
            })?;
            torsion.extend(std::iter::repeat_n(2, twos));
            profile.set(i as i32, FinAbGroup::new(rank, torsion));
        }
        debug_assert!(profile.iter().all(|(d, _)| d >= 0 && d as usize <= n));
        Ok(profile)
    }

    /// Orientability of a 3-dimensional instance, read from the pullback type.
    pub fn is_orientable_3d(&self) -> Result<bool> {
        if self.n() != 3 {
            return Err(Error::Dimension(format!(
                "orientability test needs n = 3, got {}",
                self.n()
            )));
        }
        Ok(self.classification()?.is_simplex_pullback())
    }
}

/// Solves the universal-coefficient bookkeeping for `μ`; errors on a
/// negative count or `μ^{n+1} ≠ 0`.
pub fn mu_recursion(rational: &[usize], mod2: &[usize]) -> Result<Vec<usize>> {
    let n = rational.len() - 1;
    if mod2.len() != n + 1 {
        return Err(Error::Dimension("Betti vectors differ in length".into()));
    }
    if rational[0] != mod2[0] {
        return Err(Error::Internal(format!(
            "b^0 = {} but b^0_Z2 = {}",
            rational[0], mod2[0]
        )));
    }
    let mut mu = vec![0usize; n + 2];
    for q in 1..=n {
        let next = mod2[q] as i64 - rational[q] as i64 - mu[q] as i64;
        if next < 0 {
            return Err(Error::Internal(format!(
                "mu^{} would be {next}",
                q + 1
            )));
        }
        mu[q + 1] = next as usize;
    }
    if mu[n + 1] != 0 {
        return Err(Error::Internal(format!("mu^{} = {} is nonzero", n + 1, mu[n + 1])));
    }
    Ok(mu)
}

/// `μ^q`: number of even-order cyclic summands in degree `q`, for `q = 0..=max`.
pub fn mu_profile(p: &CohomologyProfile, max: usize) -> Vec<usize> {
    (0..=max).map(|q| p.group(q as i32).even_torsion_count()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub rational: Vec<usize>,
    pub mod2: Vec<usize>,
    /// `μ^0, …, μ^{n+1}`.
    pub mu: Vec<usize>,
}

impl BettiTable {
    /// `b^q_{Z_2} = b^q + μ^q + μ^{q+1}` in every degree.
    pub fn universal_coefficients_hold(&self) -> bool {
        (0..self.rational.len())
            .all(|q| self.mod2[q] == self.rational[q] + self.mu[q] + self.mu[q + 1])
    }

    fn difference_identity(&self, k: usize) -> bool {
        let b = |v: &[usize], q: usize| v.get(q).copied().unwrap_or(0) as i64;
        b(&self.rational, 2 * k) - b(&self.rational, 2 * k - 1)
            == b(&self.mod2, 2 * k) - b(&self.mod2, 2 * k - 1)
    }
}

/// The seven conditions, in order:
/// 1. pullback from the simplex;
/// 2. odd-degree integral cohomology torsion-free;
/// 3. `H^3` torsion-free;
/// 4. `Sq¹` vanishes on every even degree;
/// 5. `Sq¹` vanishes on `H^2`;
/// 6. `b^{2k} − b^{2k−1} = b^{2k}_{Z_2} − b^{2k−1}_{Z_2}` for all `k ≥ 1`;
/// 7. the same for `k = 1`.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub conditions: [bool; 7],
    /// Odd degrees carrying torsion.
    pub torsion_degrees: Vec<usize>,
    /// Even degrees where `Sq¹` is nonzero.
    pub sq1_degrees: Vec<usize>,
    pub sq1_witness: Option<Sq1Witness>,
    /// Values of `k` where the Betti identity fails.
    pub betti_failures: Vec<usize>,
    pub betti: BettiTable,
    pub cohomology: CohomologyProfile,
    pub hypotheses_hold: bool,
}

impl ConditionReport {
    pub fn all_agree(&self) -> bool {
        self.conditions.iter().all(|&c| c == self.conditions[0])
    }

    /// `None` outside the hypotheses, otherwise whether all seven agree.
    pub fn equivalence_verdict(&self) -> Option<bool> {
        self.hypotheses_hold.then(|| self.all_agree())
    }
}

pub fn evaluate_conditions(space: &RealToricSpace) -> Result<ConditionReport> {
    let n = space.n();
    let class = space.classification()?;
    let cohomology = space.integral_cohomology()?;
    let betti = space.betti_table()?;
    if !betti.universal_coefficients_hold() {
        return Err(Error::Internal("universal coefficient identity fails".into()));
    }
    let ring = space.ring()?;

    let torsion_degrees: Vec<usize> = (1..=n)
        .step_by(2)
        .filter(|&q| !cohomology.group(q as i32).is_torsion_free())
        .collect();
    let sq1_degrees: Vec<usize> = (0..=n)
        .step_by(2)
        .filter(|&d| !ring.sq1_vanishes_on_degree(d))
        .collect();
    let betti_failures: Vec<usize> = (1..=n.div_ceil(2).max(1))
        .filter(|&k| !betti.difference_identity(k))
        .collect();
    let sq1_witness = if space.is_closed_pseudomanifold() {
        find_sq1_witness(space.complex(), space.matrix(), ring)?
    } else {
        None
    };

    let conditions = [
        class.is_simplex_pullback(),
        torsion_degrees.is_empty(),
        cohomology.group(3).is_torsion_free(),
        sq1_degrees.is_empty(),
        !sq1_degrees.contains(&2),
        betti_failures.is_empty(),
        !betti_failures.contains(&1),
    ];
    Ok(ConditionReport {
        conditions,
        torsion_degrees,
        sq1_degrees,
        sq1_witness,
        betti_failures,
        betti,
        cohomology,
        hypotheses_hold: space.hypotheses_hold()?,
    })
}
