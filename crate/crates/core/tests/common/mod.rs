//! Shared corpus and independent oracles for the integration tests.
#![allow(dead_code)]

use smallcover_core::catalog;
use smallcover_core::charmap::{CharacteristicMatrix, PullbackLabel};
use smallcover_core::fuzz::Sampler;
use smallcover_core::simplicial::SimplicialComplex;
use smallcover_core::smallcover::RealToricSpace;

pub struct Case {
    pub name: String,
    pub space: RealToricSpace,
}

/// Complexes the fuzzer draws from, with samples per complex.
pub const FUZZ_COMPLEXES: [&str; 8] = [
    "cross3",
    "simplex3",
    "gon5",
    "gon6",
    "prism",
    "cross4",
    "duoprism",
    "gon5-suspension",
];

pub fn catalog_cases() -> Vec<Case> {
    catalog::instance_names()
        .into_iter()
        .map(|name| {
            let inst = catalog::instance(&name).unwrap();
            Case {
                name,
                space: RealToricSpace::new(inst.complex, inst.lambda).unwrap(),
            }
        })
        .collect()
}

pub fn fuzz_cases(per_complex: usize, seed: u64) -> Vec<Case> {
    let mut out = Vec::new();
    for (c, name) in FUZZ_COMPLEXES.iter().enumerate() {
        let k = catalog::complex(name).unwrap();
        let mut sampler = Sampler::new(&k, seed + c as u64);
        for i in 0..per_complex {
            let m = sampler.sample(&k, 1_000_000).unwrap();
            out.push(Case {
                name: format!("{name}#{i}"),
                space: RealToricSpace::new(k.clone(), m).unwrap(),
            });
        }
    }
    out
}

/// Columns of `Λ` as bit masks (bit `i` = row `i`).
pub fn column_masks(m: &CharacteristicMatrix) -> Vec<u32> {
    m.columns().iter().map(|c| c.to_mask() as u32).collect()
}

/// Every invertible `n × n` matrix over GF(2), each given by its column masks.
pub fn general_linear_group(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cols = Vec::with_capacity(n);
    fn go(n: usize, cols: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cols.len() == n {
            out.push(cols.clone());
            return;
        }
        // span of the columns chosen so far
        let mut span = vec![0u32];
        for &c in cols.iter() {
            let more: Vec<u32> = span.iter().map(|s| s ^ c).collect();
            span.extend(more);
        }
        for v in 1..(1u32 << n) {
            if !span.contains(&v) {
                cols.push(v);
                go(n, cols, out);
                cols.pop();
            }
        }
    }
    go(n, &mut cols, &mut out);
    out
}

fn apply(g: &[u32], v: u32) -> u32 {
    let mut out = 0;
    let mut v = v;
    while v != 0 {
        let i = v.trailing_zeros() as usize;
        out ^= g[i];
        v &= v - 1;
    }
    out
}

/// Pullback type found by trying every basis change: linear if some `G`
/// sends all columns to standard basis vectors, simplex if some `G` sends
/// them into the standard basis plus the all-ones vector.
pub fn brute_force_label(m: &CharacteristicMatrix, group: &[Vec<u32>]) -> PullbackLabel {
    let n = m.n();
    let ones = (1u32 << n) - 1;
    let cols = column_masks(m);
    let mut simplex = false;
    for g in group {
        let images: Vec<u32> = cols.iter().map(|&c| apply(g, c)).collect();
        if images.iter().all(|v| v.count_ones() == 1) {
            return PullbackLabel::LinearModel;
        }
        if images.iter().all(|&v| v.count_ones() == 1 || v == ones) {
            simplex = true;
        }
    }
    if simplex {
        PullbackLabel::SimplexProper
    } else {
        PullbackLabel::NotSimplex
    }
}

/// Subsets of `0..len` with an even number of elements, as masks.
pub fn even_subsets(len: usize) -> Vec<u64> {
    (0..1u64 << len).filter(|s| s.count_ones() % 2 == 0).collect()
}

pub fn boundary(n: usize) -> SimplicialComplex {
    SimplicialComplex::boundary_simplex(n)
}
