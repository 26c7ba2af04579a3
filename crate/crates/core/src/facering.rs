//! The mod-2 cohomology ring `Z_2[v_1,…,v_m]/(I_K + J_λ)` of a small cover.
//!
//! The linear relations let every vertex variable of a fixed pivot facet be
//! rewritten as a sum of the remaining `k = m − n` variables `x_1, …, x_k`, so
//! the ring is a quotient `Q` of `Z_2[x_1, …, x_k]` by the rewritten
//! Stanley–Reisner products. `Q` is generated in degree one, so each graded
//! piece is built from the previous one as a quotient of `Q_1 ⊗ Q_{d−1}`:
//! the kernel of the multiplication map is spanned by the commutativity
//! relations `x_i ⊗ [M/x_i] − x_j ⊗ [M/x_j]` for degree-`d` monomials `M`
//! together with the Stanley–Reisner products of degree exactly `d`.
//! This keeps every linear system at size `k · h_{d−1}` instead of the number
//! of degree-`d` monomials.

use crate::charmap::{flip_supports, CharacteristicMatrix};
use crate::error::{Error, Result};
use crate::gf2::{find_basis_change, BitVec, EchelonBasis};
use crate::simplicial::{binomial, mask_size, mask_vertices, Mask, SimplicialComplex};

/// A homogeneous class: coordinates over the degree-`d` basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingClass {
    pub degree: usize,
    pub coords: BitVec,
}

impl RingClass {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add(&self, other: &RingClass) -> RingClass {
        assert_eq!(self.degree, other.degree, "adding classes of different degrees");
        RingClass {
            degree: self.degree,
            coords: self.coords.xor(&other.coords),
        }
    }

    pub fn add_assign(&mut self, other: &RingClass) {
        assert_eq!(self.degree, other.degree, "adding classes of different degrees");
        self.coords.xor_assign(&other.coords);
    }
}

/// An inhomogeneous element, one component per degree `0..=n`.
pub type TotalClass = Vec<RingClass>;

/// One graded piece `Q_d`.
#[derive(Clone, Debug)]
struct Piece {
    dim: usize,
    /// Basis monomials in the non-pivot variables, as sorted variable lists.
    monomials: Vec<Vec<u16>>,
    /// Relations inside `Q_1 ⊗ Q_{d−1}` (coordinate `i·h_{d−1} + j`); absent in degree 0.
    relations: Option<EchelonBasis>,
    /// Basis index of each non-pivot coordinate of `Q_1 ⊗ Q_{d−1}`.
    coord_to_basis: Vec<Option<usize>>,
}

/// Bases, normal forms and products for every degree `0..=n`.
#[derive(Clone, Debug)]
pub struct GradedRingBasis {
    n: usize,
    k: usize,
    pivot_facet: Mask,
    pivot_labels: Vec<u32>,
    nonpivot_positions: Vec<usize>,
    /// Each vertex variable as a linear form in the non-pivot variables.
    linear_forms: Vec<BitVec>,
    pieces: Vec<Piece>,
}

/// Minimal non-faces of `K` with at most `max_size` vertices, grouped by size.
fn minimal_non_faces(k: &SimplicialComplex, max_size: usize) -> Vec<Vec<Mask>> {
    let mut out = vec![Vec::new(); max_size + 1];
    let all = k.all_vertices();
    for (size, faces) in k.faces_by_size().iter().enumerate() {
        if size + 1 > max_size {
            break;
        }
        for &face in faces {
            // vertices above the largest one of `face`
            let above = match face {
                0 => u64::MAX,
                f => u64::MAX.checked_shl(64 - f.leading_zeros()).unwrap_or(0),
            };
            let rest = all & above;
            for v in mask_vertices(rest) {
                let tau = face | 1 << v;
                if !k.contains_face(tau)
                    && mask_vertices(tau).all(|u| k.contains_face(tau & !(1 << u)))
                {
                    out[size + 1].push(tau);
                }
            }
        }
    }
    out
}

impl GradedRingBasis {
    /// Builds every graded piece and checks `dim Q_d = h_d(K)` for `d ≤ n`
    /// and `Q_{n+1} = 0`.
    pub fn build(k: &SimplicialComplex, m: &CharacteristicMatrix) -> Result<Self> {
        let n = m.n();
        if k.dim() + 1 != n as i32 {
            return Err(Error::Dimension(format!(
                "complex of dimension {} needs {} rows, the matrix has {n}",
                k.dim(),
                k.dim() + 1
            )));
        }
        let h = k.h_vector()?.h;
        let pivot_facet = k.facet_masks()[0];
        let pivots: Vec<usize> = mask_vertices(pivot_facet).collect();
        let nonpivot_positions: Vec<usize> = (0..k.vertex_count())
            .filter(|j| pivot_facet >> j & 1 == 0)
            .collect();
        let kk = nonpivot_positions.len();
        let pivot_cols: Vec<BitVec> = pivots.iter().map(|&p| m.column(p).clone()).collect();
        let inverse = find_basis_change(&pivot_cols, n)?;
        // row r of B^{-1}Λ reads v_{u_r} = Σ_{q non-pivot} (B^{-1} λ(q))_r x_q
        let mut linear_forms = vec![BitVec::zeros(kk); k.vertex_count()];
        for (var, &q) in nonpivot_positions.iter().enumerate() {
            linear_forms[q].set(var, true);
            for r in inverse.mul_vec(m.column(q)).iter_ones() {
                linear_forms[pivots[r]].set(var, true);
            }
        }

        let mut basis = GradedRingBasis {
            n,
            k: kk,
            pivot_facet,
            pivot_labels: k.mask_to_labels(pivot_facet),
            nonpivot_positions,
            linear_forms,
            pieces: vec![Piece {
                dim: 1,
                monomials: vec![Vec::new()],
                relations: None,
                coord_to_basis: Vec::new(),
            }],
        };
        let non_faces = minimal_non_faces(k, n + 1);
        // normal forms of all monomials of the previous degree
        let mut previous: Vec<(Vec<u16>, BitVec)> = vec![(Vec::new(), BitVec::unit(1, 0))];
        for d in 1..=n + 1 {
            let prev_dim = basis.pieces[d - 1].dim;
            let ambient = kk * prev_dim;
            let mut relations = EchelonBasis::new(ambient);
            for &tau in &non_faces[d] {
                let mut vertices = mask_vertices(tau);
                let first = vertices.next().unwrap();
                let mut rest = basis.one();
                for v in vertices {
                    rest = basis.mul_linear(&basis.linear_forms[v], &rest);
                }
                relations.insert(tensor(&basis.linear_forms[first], &rest.coords, prev_dim));
            }
            let mut monomials = Vec::new();
            for (mono, _) in &previous {
                let last = mono.last().copied().unwrap_or(0);
                for var in last..kk as u16 {
                    let mut next = mono.clone();
                    next.push(var);
                    monomials.push(next);
                }
            }
            for mono in &monomials {
                let i0 = mono[0];
                let left = previous_nf(&previous, &mono[1..]);
                let mut last = i0;
                for &i in &mono[1..] {
                    if i == last {
                        continue;
                    }
                    last = i;
                    let right = previous_nf(&previous, &without(mono, i));
                    let mut v = BitVec::zeros(ambient);
                    for j in left.iter_ones() {
                        v.set(i0 as usize * prev_dim + j, true);
                    }
                    for j in right.iter_ones() {
                        v.set(i as usize * prev_dim + j, true);
                    }
                    relations.insert(v);
                }
            }
            let mut coord_to_basis = vec![None; ambient];
            let mut basis_monomials = Vec::new();
            for (c, slot) in coord_to_basis.iter_mut().enumerate() {
                if !relations.is_pivot(c) {
                    *slot = Some(basis_monomials.len());
                    let mut mono = basis.pieces[d - 1].monomials[c % prev_dim].clone();
                    mono.push((c / prev_dim) as u16);
                    mono.sort_unstable();
                    basis_monomials.push(mono);
                }
            }
            let dim = basis_monomials.len();
            let expected = h.get(d).copied().unwrap_or(0);
            if dim as i64 != expected {
                return Err(Error::Internal(format!(
                    "degree {d} of the cohomology ring has dimension {dim}, expected h_{d} = {expected}"
                )));
            }
            if d == n + 1 {
                break;
            }
            basis.pieces.push(Piece {
                dim,
                monomials: basis_monomials,
                relations: Some(relations),
                coord_to_basis,
            });
            previous = monomials
                .into_iter()
                .map(|mono| {
                    let nf = {
                        let lower = previous_nf(&previous, &mono[1..]);
                        basis.reduce_tensor(d, mono[0] as usize, lower)
                    };
                    (mono, nf)
                })
                .collect();
        }
        Ok(basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of non-pivot variables, `m − n`.
    pub fn generator_count(&self) -> usize {
        self.k
    }

    pub fn pivot_facet(&self) -> Mask {
        self.pivot_facet
    }

    pub fn pivot_labels(&self) -> &[u32] {
        &self.pivot_labels
    }

    /// Vertex position of each non-pivot variable.
    pub fn nonpivot_positions(&self) -> &[usize] {
        &self.nonpivot_positions
    }

    pub fn dim(&self, d: usize) -> usize {
        self.pieces.get(d).map_or(0, |p| p.dim)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.dim).collect()
    }

    /// Basis monomials of degree `d` as sorted lists of non-pivot variables.
    pub fn basis_monomials(&self, d: usize) -> &[Vec<u16>] {
        &self.pieces[d].monomials
    }

    pub fn zero(&self, d: usize) -> RingClass {
        RingClass {
            degree: d,
            coords: BitVec::zeros(self.dim(d)),
        }
    }

    pub fn one(&self) -> RingClass {
        RingClass {
            degree: 0,
            coords: BitVec::unit(1, 0),
        }
    }

    pub fn basis_class(&self, d: usize, index: usize) -> RingClass {
        RingClass {
            degree: d,
            coords: BitVec::unit(self.dim(d), index),
        }
    }

    /// Normal form of `x_var ⊗ c` for `c` of degree `d − 1`.
    fn reduce_tensor(&self, d: usize, var: usize, c: &BitVec) -> BitVec {
        let piece = &self.pieces[d];
        let prev_dim = self.pieces[d - 1].dim;
        let mut v = BitVec::zeros(self.k * prev_dim);
        for j in c.iter_ones() {
            v.set(var * prev_dim + j, true);
        }
        piece.relations.as_ref().unwrap().reduce(&mut v);
        let mut out = BitVec::zeros(piece.dim);
        for c in v.iter_ones() {
            out.set(piece.coord_to_basis[c].unwrap(), true);
        }
        out
    }

    /// `x_var · c`, zero above degree `n`.
    pub fn mul_var(&self, var: usize, c: &RingClass) -> RingClass {
        let d = c.degree + 1;
        if d > self.n {
            return self.zero(d);
        }
        RingClass {
            degree: d,
            coords: self.reduce_tensor(d, var, &c.coords),
        }
    }

    /// `ℓ · c` for a linear form `ℓ` in the non-pivot variables.
    pub fn mul_linear(&self, form: &BitVec, c: &RingClass) -> RingClass {
        let d = c.degree + 1;
        if d > self.n {
            return self.zero(d);
        }
        let piece = &self.pieces[d];
        let prev_dim = self.pieces[d - 1].dim;
        let mut v = BitVec::zeros(self.k * prev_dim);
        for var in form.iter_ones() {
            for j in c.coords.iter_ones() {
                v.set(var * prev_dim + j, true);
            }
        }
        piece.relations.as_ref().unwrap().reduce(&mut v);
        let mut out = BitVec::zeros(piece.dim);
        for c in v.iter_ones() {
            out.set(piece.coord_to_basis[c].unwrap(), true);
        }
        RingClass {
            degree: d,
            coords: out,
        }
    }

    /// The degree-one class of the vertex variable at position `j`.
    pub fn express_vertex(&self, j: usize) -> RingClass {
        RingClass {
            degree: 1,
            coords: self.linear_forms[j].clone(),
        }
    }

    /// A monomial in the vertex variables, given by positions with repetition.
    pub fn express(&self, vertices: &[usize]) -> RingClass {
        vertices.iter().fold(self.one(), |acc, &j| {
            self.mul_linear(&self.linear_forms[j], &acc)
        })
    }

    /// Product of a class with a monomial in the non-pivot variables.
    fn mul_monomial(&self, c: &RingClass, mono: &[u16]) -> RingClass {
        mono.iter().fold(c.clone(), |acc, &v| self.mul_var(v as usize, &acc))
    }

    pub fn multiply(&self, x: &RingClass, y: &RingClass) -> RingClass {
        let d = x.degree + y.degree;
        if d > self.n {
            return self.zero(d);
        }
        let mut out = self.zero(d);
        for b in y.coords.iter_ones() {
            out.add_assign(&self.mul_monomial(x, &self.pieces[y.degree].monomials[b]));
        }
        out
    }

    /// `Sq¹`, the derivation with `Sq¹(x_i) = x_i²`.
    pub fn sq1(&self, x: &RingClass) -> RingClass {
        let d = x.degree + 1;
        let mut out = self.zero(d);
        if d > self.n {
            return out;
        }
        for b in x.coords.iter_ones() {
            let mono = &self.pieces[x.degree].monomials[b];
            let class = self.basis_class(x.degree, b);
            for &v in mono {
                out.add_assign(&self.mul_var(v as usize, &class));
            }
        }
        out
    }

    /// Matrix of `Sq¹` on degree `d`, one column image per basis class.
    pub fn sq1_images(&self, d: usize) -> Vec<RingClass> {
        (0..self.dim(d))
            .map(|b| self.sq1(&self.basis_class(d, b)))
            .collect()
    }

    pub fn sq1_vanishes_on_degree(&self, d: usize) -> bool {
        self.sq1_images(d).iter().all(RingClass::is_zero)
    }

    /// Total square `Sq = Σ Sq^i`, using `Sq(x_i) = x_i + x_i²` and the Cartan formula.
    pub fn total_sq(&self, x: &RingClass) -> TotalClass {
        let mut out: TotalClass = (0..=self.n).map(|d| self.zero(d)).collect();
        for b in x.coords.iter_ones() {
            let mono = &self.pieces[x.degree].monomials[b];
            let mut acc: TotalClass = (0..=self.n).map(|d| self.zero(d)).collect();
            acc[x.degree] = self.basis_class(x.degree, b);
            for &v in mono {
                acc = self.add_times_var(&acc, v as usize);
            }
            for (o, a) in out.iter_mut().zip(&acc) {
                o.add_assign(a);
            }
        }
        out
    }

    /// `t + x_var · t`.
    fn add_times_var(&self, t: &TotalClass, var: usize) -> TotalClass {
        let mut next = t.clone();
        for d in 1..=self.n {
            next[d].add_assign(&self.mul_var(var, &t[d - 1]));
        }
        next
    }

    /// `t · (1 + ℓ)` for a degree-one class `ℓ`.
    pub fn times_one_plus(&self, t: &TotalClass, l: &RingClass) -> TotalClass {
        let mut next = t.clone();
        for d in 1..=self.n {
            next[d].add_assign(&self.mul_linear(&l.coords, &t[d - 1]));
        }
        next
    }

    pub fn total_one(&self) -> TotalClass {
        let mut t: TotalClass = (0..=self.n).map(|d| self.zero(d)).collect();
        t[0] = self.one();
        t
    }

    pub fn homogeneous(&self, x: &RingClass) -> TotalClass {
        let mut t: TotalClass = (0..=self.n).map(|d| self.zero(d)).collect();
        if x.degree <= self.n {
            t[x.degree] = x.clone();
        }
        t
    }

    /// `Π_j (1 + v_j)` over all vertices.
    pub fn total_sw(&self) -> TotalClass {
        (0..self.linear_forms.len()).fold(self.total_one(), |acc, j| {
            self.times_one_plus(&acc, &self.express_vertex(j))
        })
    }

    /// `(1 + τ)^e · x`.
    pub fn one_plus_power_times(&self, tau: &RingClass, e: usize, x: &TotalClass) -> TotalClass {
        (0..e).fold(x.clone(), |acc, _| self.times_one_plus(&acc, tau))
    }

    /// `(1 + τ)^e` expanded with binomial coefficients mod 2.
    pub fn binomial_power(&self, tau: &RingClass, e: usize) -> TotalClass {
        let mut out = self.total_one();
        let mut power = self.one();
        for d in 1..=self.n {
            power = self.multiply(&power, tau);
            if binomial(e, d) % 2 == 1 {
                out[d] = power.clone();
            }
        }
        out
    }

    /// `τ_i = Σ_{c(j) = i} v_j` for colors `1..=n+1`.
    pub fn tau_classes(&self, coloring: &[usize]) -> Vec<RingClass> {
        let mut taus = vec![self.zero(1); self.n + 1];
        for (j, &c) in coloring.iter().enumerate() {
            taus[c - 1].add_assign(&self.express_vertex(j));
        }
        taus
    }

    /// The common value of the `τ_i`; an unequal pair means the coloring is wrong.
    pub fn tau(&self, coloring: &[usize]) -> Result<RingClass> {
        let taus = self.tau_classes(coloring);
        if let Some(i) = taus.iter().position(|t| *t != taus[0]) {
            return Err(Error::InvalidColoring(format!(
                "tau_{} differs from tau_1",
                i + 1
            )));
        }
        Ok(taus[0].clone())
    }

    /// `v_j² = τ · v_j` for every vertex.
    pub fn square_identity_check(&self, coloring: &[usize]) -> Result<bool> {
        let tau = self.tau(coloring)?;
        Ok((0..self.linear_forms.len()).all(|j| {
            let v = self.express_vertex(j);
            self.multiply(&v, &v) == self.multiply(&tau, &v)
        }))
    }

    /// `Π (1 + v_j) = (1 + τ)^{n+1}`.
    pub fn sw_pullback_check(&self, coloring: &[usize]) -> Result<bool> {
        let tau = self.tau(coloring)?;
        Ok(self.total_sw() == self.binomial_power(&tau, self.n + 1))
    }
}

fn tensor(form: &BitVec, class: &BitVec, prev_dim: usize) -> BitVec {
    let mut v = BitVec::zeros(form.len() * prev_dim);
    for i in form.iter_ones() {
        for j in class.iter_ones() {
            v.set(i * prev_dim + j, true);
        }
    }
    v
}

/// `mono` with one copy of `var` removed.
fn without(mono: &[u16], var: u16) -> Vec<u16> {
    let mut out = mono.to_vec();
    let at = out.iter().position(|&v| v == var).unwrap();
    out.remove(at);
    out
}

fn previous_nf<'a>(previous: &'a [(Vec<u16>, BitVec)], mono: &[u16]) -> &'a BitVec {
    let at = previous
        .binary_search_by(|(m, _)| m.as_slice().cmp(mono))
        .expect("monomials of each degree are enumerated in sorted order");
    &previous[at].1
}

/// A degree-two class with nonzero `Sq¹`, found at a ridge whose flip
/// support is neither `{i}` nor `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sq1Witness {
    pub facet: Vec<u32>,
    pub i: usize,
    pub s: usize,
    pub t: usize,
    pub class: RingClass,
    pub sq1: RingClass,
}

/// Searches facets in order, then positions `i`, for a bad flip, and returns
/// `v_{u_s} v_{u_t}` with `s` the least element of `S ∖ {i}` and `t` the
/// least element outside `S`. `None` for simplex pullbacks.
pub fn find_sq1_witness(
    k: &SimplicialComplex,
    m: &CharacteristicMatrix,
    basis: &GradedRingBasis,
) -> Result<Option<Sq1Witness>> {
    let n = m.n();
    let bad = flip_supports(k, m)?
        .into_iter()
        .find(|(_, i, s)| !(s.as_slice() == [*i] || s.len() == n));
    let Some((facet, i, support)) = bad else {
        return Ok(None);
    };
    let s = *support.iter().find(|&&s| s != i).unwrap();
    let t = (1..=n).find(|t| !support.contains(t)).unwrap();
    let vertices: Vec<usize> = mask_vertices(facet).collect();
    let (us, ut) = (vertices[s - 1], vertices[t - 1]);
    let class = basis.express(&[us, ut]);
    let sq1 = basis.sq1(&class);
    let expected = basis
        .express(&[us, us, ut])
        .add(&basis.express(&[us, ut, ut]));
    if sq1.is_zero() || sq1 != expected {
        return Err(Error::Internal(format!(
            "Sq1 of v_{} v_{} at facet {:?} is not the expected nonzero class",
            k.labels()[us],
            k.labels()[ut],
            k.mask_to_labels(facet)
        )));
    }
    debug_assert_eq!(mask_size(facet), n);
    Ok(Some(Sq1Witness {
        facet: k.mask_to_labels(facet),
        i,
        s,
        t,
        class,
        sq1,
    }))
}
