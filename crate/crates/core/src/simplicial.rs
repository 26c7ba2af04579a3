//! Finite simplicial complexes stored by their facets.
//!
//! Vertices carry positive integer labels, kept in strictly increasing order.
//! Internally a face is a `u64` bitmask over label *positions*, so complexes
//! are limited to 64 vertices. Labels are never renumbered: a full subcomplex
//! keeps the labels of the vertices it retains.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A face as a bitmask over vertex positions.
pub type Mask = u64;

pub fn mask_vertices(mask: Mask) -> impl Iterator<Item = usize> {
    let mut w = mask;
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(t)
        }
    })
}

pub fn mask_size(mask: Mask) -> usize {
    mask.count_ones() as usize
}

/// Lexicographic order on sorted vertex sequences.
pub fn lex_cmp(a: Mask, b: Mask) -> Ordering {
    let (mut x, mut y) = (a, b);
    loop {
        match (x == 0, y == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (tx, ty) = (x.trailing_zeros(), y.trailing_zeros());
        if tx != ty {
            return tx.cmp(&ty);
        }
        x &= x - 1;
        y &= y - 1;
    }
}

#[derive(Debug)]
pub struct SimplicialComplex {
    labels: Vec<u32>,
    facets: Vec<Mask>,
    dropped_generators: bool,
    faces: OnceLock<Vec<Vec<Mask>>>,
    ridges: OnceLock<HashMap<Mask, Vec<usize>>>,
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            facets: self.facets.clone(),
            dropped_generators: self.dropped_generators,
            faces: OnceLock::new(),
            ridges: OnceLock::new(),
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

/// f- and h-vectors of a pure complex. `f[0]` counts the empty face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceVector {
    pub f: Vec<u64>,
    pub h: Vec<i64>,
}

impl SimplicialComplex {
    /// Builds a complex from generating faces, keeping only inclusion-maximal ones.
    pub fn from_facets(labels: &[u32], generators: &[Vec<u32>]) -> Result<Self> {
        if labels.len() > 64 {
            return Err(Error::TooManyVertices(labels.len()));
        }
        for w in labels.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLabel(w[0]));
            }
            if w[0] > w[1] {
                return Err(Error::Semantic(format!(
                    "vertex labels must be increasing ({} before {})",
                    w[0], w[1]
                )));
            }
        }
        if labels.first() == Some(&0) {
            return Err(Error::Semantic("vertex labels must be positive".into()));
        }
        let index: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut masks = Vec::with_capacity(generators.len());
        for g in generators {
            let mut mask = 0u64;
            for &v in g {
                let &p = index.get(&v).ok_or(Error::UnknownLabel(v))?;
                if mask >> p & 1 == 1 {
                    return Err(Error::DuplicateVertex {
                        vertex: v,
                        face: g.clone(),
                    });
                }
                mask |= 1 << p;
            }
            masks.push(mask);
        }
        Ok(Self::from_masks(labels.to_vec(), masks))
    }

    /// Builds a complex from generator masks over `labels`; keeps maximal ones only.
    pub fn from_masks(labels: Vec<u32>, generators: Vec<Mask>) -> Self {
        let mut gens = generators;
        gens.sort_by(|a, b| mask_size(*b).cmp(&mask_size(*a)).then(lex_cmp(*a, *b)));
        gens.dedup();
        let mut facets: Vec<Mask> = Vec::new();
        let mut dropped = false;
        for g in gens {
            if facets.iter().any(|&f| g & !f == 0) {
                dropped = true;
            } else {
                facets.push(g);
            }
        }
        if facets.is_empty() {
            facets.push(0);
        }
        facets.sort_by(|a, b| lex_cmp(*a, *b));
        Self {
            labels,
            facets,
            dropped_generators: dropped,
            faces: OnceLock::new(),
            ridges: OnceLock::new(),
        }
    }

    /// The complex `{∅}` on the given (ghost) labels.
    pub fn void(labels: Vec<u32>) -> Self {
        Self::from_masks(labels, vec![0])
    }

    /// Boundary of the simplex on labels `1..=n+1`.
    pub fn boundary_simplex(n: usize) -> Self {
        let full: Mask = (1u64 << (n + 1)) - 1;
        let facets = (0..=n).map(|i| full & !(1 << i)).collect();
        Self::from_masks((1..=n as u32 + 1).collect(), facets)
    }

    /// Full simplex on labels `1..=k`.
    pub fn simplex(k: usize) -> Self {
        Self::from_masks((1..=k as u32).collect(), vec![(1u64 << k) - 1])
    }

    /// Boundary of the `n`-dimensional cross-polytope; labels `i` and `i+n` are antipodal.
    pub fn cross_polytope(n: usize) -> Self {
        let facets = (0u64..1 << n)
            .map(|choice| {
                (0..n).fold(0u64, |acc, i| {
                    acc | if choice >> i & 1 == 0 { 1 << i } else { 1 << (i + n) }
                })
            })
            .collect();
        Self::from_masks((1..=2 * n as u32).collect(), facets)
    }

    /// Boundary of the `m`-gon, vertices `1..=m` in cyclic order.
    pub fn polygon(m: usize) -> Self {
        let facets = (0..m).map(|i| 1u64 << i | 1u64 << ((i + 1) % m)).collect();
        Self::from_masks((1..=m as u32).collect(), facets)
    }

    /// The 6-vertex triangulation of the real projective plane.
    pub fn rp2_six_vertex() -> Self {
        let tris: [[u32; 3]; 10] = [
            [1, 2, 3],
            [1, 3, 4],
            [1, 4, 5],
            [1, 5, 6],
            [1, 2, 6],
            [2, 3, 5],
            [2, 4, 5],
            [2, 4, 6],
            [3, 4, 6],
            [3, 5, 6],
        ];
        let gens: Vec<Vec<u32>> = tris.iter().map(|t| t.to_vec()).collect();
        Self::from_facets(&[1, 2, 3, 4, 5, 6], &gens).expect("static triangulation")
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Facets as bitmasks, in lexicographic order.
    pub fn facet_masks(&self) -> &[Mask] {
        &self.facets
    }

    pub fn facets(&self) -> Vec<Vec<u32>> {
        self.facets.iter().map(|&f| self.mask_to_labels(f)).collect()
    }

    /// Whether normalization discarded a non-maximal generator.
    pub fn dropped_generators(&self) -> bool {
        self.dropped_generators
    }

    /// Dimension; `-1` for `{∅}`.
    pub fn dim(&self) -> i32 {
        self.facets.iter().map(|&f| mask_size(f) as i32).max().unwrap_or(0) - 1
    }

    pub fn is_pure(&self) -> bool {
        let d = mask_size(self.facets[0]);
        self.facets.iter().all(|&f| mask_size(f) == d)
    }

    pub fn position(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn labels_to_mask(&self, vertices: &[u32]) -> Result<Mask> {
        vertices.iter().try_fold(0u64, |acc, &v| {
            self.position(v)
                .map(|p| acc | 1 << p)
                .ok_or(Error::UnknownLabel(v))
        })
    }

    pub fn mask_to_labels(&self, mask: Mask) -> Vec<u32> {
        mask_vertices(mask).map(|p| self.labels[p]).collect()
    }

    /// Mask of the vertices that appear in some facet.
    pub fn used_vertices(&self) -> Mask {
        self.facets.iter().fold(0, |a, &f| a | f)
    }

    pub fn all_vertices(&self) -> Mask {
        if self.labels.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.labels.len()) - 1
        }
    }

    pub fn contains_face(&self, face: Mask) -> bool {
        self.facets.iter().any(|&f| face & !f == 0)
    }

    /// All faces grouped by size: `faces_by_size()[k]` lists the `k`-vertex faces
    /// in lexicographic order. Index 0 holds the empty face.
    pub fn faces_by_size(&self) -> &[Vec<Mask>] {
        self.faces.get_or_init(|| {
            let top = (self.dim() + 1) as usize;
            let mut seen: Vec<HashSet<Mask>> = vec![HashSet::new(); top + 1];
            for &f in &self.facets {
                let mut sub = f;
                loop {
                    seen[mask_size(sub)].insert(sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & f;
                }
            }
            seen.into_iter()
                .map(|s| {
                    let mut v: Vec<Mask> = s.into_iter().collect();
                    v.sort_by(|a, b| lex_cmp(*a, *b));
                    v
                })
                .collect()
        })
    }

    /// Faces with `d + 1` vertices (`d = -1` is the empty face).
    pub fn faces_of_dim(&self, d: i32) -> &[Mask] {
        let by = self.faces_by_size();
        let k = d + 1;
        if k < 0 || k as usize >= by.len() {
            &[]
        } else {
            &by[k as usize]
        }
    }

    pub fn face_count(&self) -> usize {
        self.faces_by_size().iter().map(Vec::len).sum()
    }

    /// `f[k]` = number of faces with `k` vertices, `k = 0..=dim+1`.
    pub fn f_vector(&self) -> Vec<u64> {
        self.faces_by_size().iter().map(|v| v.len() as u64).collect()
    }

    /// `Σ_{d ≥ -1} (-1)^d f_d`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { -(c as i64) } else { c as i64 })
            .sum()
    }

    pub fn h_vector(&self) -> Result<FaceVector> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        let f = self.f_vector();
        let n = f.len() - 1;
        let h = (0..=n)
            .map(|i| {
                (0..=i)
                    .map(|j| {
                        let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                        sign * binomial(n - j, i - j) as i64 * f[j] as i64
                    })
                    .sum()
            })
            .collect();
        Ok(FaceVector { f, h })
    }

    /// Full subcomplex on the vertex positions in `w`, with labels restricted to `w`.
    pub fn induced_by_mask(&self, w: Mask) -> SimplicialComplex {
        let positions: Vec<usize> = mask_vertices(w).collect();
        let labels = positions.iter().map(|&p| self.labels[p]).collect();
        let compress = |m: Mask| {
            positions
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &p)| acc | ((m >> p & 1) << k))
        };
        let gens = self.facets.iter().map(|&f| compress(f & w)).collect();
        SimplicialComplex::from_masks(labels, gens)
    }

    pub fn full_subcomplex(&self, w: &[u32]) -> Result<SimplicialComplex> {
        let mask = self.labels_to_mask(w)?;
        Ok(self.induced_by_mask(mask))
    }

    fn ridge_map(&self) -> &HashMap<Mask, Vec<usize>> {
        self.ridges.get_or_init(|| {
            let mut map: HashMap<Mask, Vec<usize>> = HashMap::new();
            for (k, &f) in self.facets.iter().enumerate() {
                for v in mask_vertices(f) {
                    map.entry(f & !(1 << v)).or_default().push(k);
                }
            }
            map
        })
    }

    /// Pure, and every codimension-one face lies in exactly two facets.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        self.dim() >= 0 && self.is_pure() && self.ridge_map().values().all(|fs| fs.len() == 2)
    }

    /// Closed pseudomanifold whose facets are connected through ridges.
    pub fn is_strongly_connected_pseudomanifold(&self) -> bool {
        if !self.is_closed_pseudomanifold() {
            return false;
        }
        let n = self.facets.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let ridges = self.ridge_map();
        while let Some(k) = stack.pop() {
            let f = self.facets[k];
            for v in mask_vertices(f) {
                for &g in &ridges[&(f & !(1 << v))] {
                    if !seen[g] {
                        seen[g] = true;
                        stack.push(g);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn facet_index(&self, facet: Mask) -> Option<usize> {
        self.facets
            .binary_search_by(|f| lex_cmp(*f, facet))
            .ok()
    }

    /// Position of the vertex replacing `vertex` when flipping `facet` across
    /// the ridge `facet ∖ {vertex}`.
    pub fn flip_position(&self, facet: Mask, vertex: usize) -> Result<usize> {
        let ridge = facet & !(1 << vertex);
        let holders = self.ridge_map().get(&ridge).cloned().unwrap_or_default();
        if holders.len() != 2 {
            return Err(Error::Ridge {
                ridge: self.mask_to_labels(ridge),
                count: holders.len(),
            });
        }
        let other = holders
            .iter()
            .map(|&k| self.facets[k])
            .find(|&g| g != facet)
            .ok_or_else(|| Error::NotAFacet(self.mask_to_labels(facet)))?;
        Ok((other & !ridge).trailing_zeros() as usize)
    }

    /// The vertex `p` with `(σ ∖ {u_i}) ∪ {p}` a facet, `u_i` the `i`th smallest
    /// vertex of `σ` (1-based).
    pub fn ridge_flip(&self, facet: &[u32], i: usize) -> Result<u32> {
        let mask = self.labels_to_mask(facet)?;
        if self.facet_index(mask).is_none() {
            return Err(Error::NotAFacet(facet.to_vec()));
        }
        let size = mask_size(mask);
        if i == 0 || i > size {
            return Err(Error::BadPosition { position: i, size });
        }
        let u = mask_vertices(mask).nth(i - 1).unwrap();
        Ok(self.labels[self.flip_position(mask, u)?])
    }

    /// Join with `other`, whose labels are shifted up past this complex's largest label.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let offset = self.labels.last().copied().unwrap_or(0);
        let shift = self.labels.len();
        let labels = self
            .labels
            .iter()
            .copied()
            .chain(other.labels.iter().map(|&l| l + offset))
            .collect();
        let mut gens = Vec::with_capacity(self.facets.len() * other.facets.len());
        for &a in &self.facets {
            for &b in &other.facets {
                gens.push(a | b << shift);
            }
        }
        SimplicialComplex::from_masks(labels, gens)
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
