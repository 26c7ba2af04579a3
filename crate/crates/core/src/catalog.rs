//! Built-in complexes and instances.
//!
//! Complexes (used by the fuzzer) and instances (complex plus characteristic
//! matrix) are looked up by name:
//!
//! | complex            | instances                                      |
//! |--------------------|------------------------------------------------|
//! | `simplex{n}`, n≤8  | `rp{n}`: the boundary simplex with `λ_∂Δ`      |
//! | `cross{n}`, n≤6    | `cross{n}-linear`, `cross{n}-mixed`            |
//! | `gon{m}`, 3≤m≤12   | `gon{m}`, and `gon{m}-twisted` for even `m`    |
//! | `square`           | `torus`: block matrix on `S^0 * S^0`           |
//! | `prism`            | `prism`: `∂Δ^2 * S^0`, not a simplex pullback  |
//! | `duoprism`         | `duoprism`: `∂Δ^2 * ∂Δ^2`                      |
//! | `gon5-suspension`  | `gon5-suspension`: pentagon `* S^0`            |
//! | `bier4`            | `bier4`: Bier sphere of `{12, 3}` on 4 points   |
//! | `bier-example`     | `bier-example`: the 9-point example            |
//! | `rp2-6`            | none; the 6-vertex projective plane            |

use crate::bier::{bier_instance, example_complex};
use crate::charmap::{block_product, lambda_boundary_simplex, CharacteristicMatrix};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::instance::Instance;
use crate::simplicial::SimplicialComplex;

fn parse_suffix(name: &str, prefix: &str, range: std::ops::RangeInclusive<usize>) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.starts_with('0') {
        return None;
    }
    let v: usize = rest.parse().ok()?;
    range.contains(&v).then_some(v)
}

fn bier4_ground() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[1, 2, 3, 4], &[vec![1, 2], vec![3]]).expect("valid")
}

fn square() -> SimplicialComplex {
    let s0 = SimplicialComplex::boundary_simplex(1);
    s0.join(&s0)
}

fn prism() -> SimplicialComplex {
    SimplicialComplex::boundary_simplex(2).join(&SimplicialComplex::boundary_simplex(1))
}

fn duoprism() -> SimplicialComplex {
    let t = SimplicialComplex::boundary_simplex(2);
    t.join(&t)
}

fn gon5_suspension() -> SimplicialComplex {
    SimplicialComplex::polygon(5).join(&SimplicialComplex::boundary_simplex(1))
}

pub fn complex_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=8).map(|n| format!("simplex{n}")).collect();
    names.extend((2..=6).map(|n| format!("cross{n}")));
    names.extend((3..=12).map(|m| format!("gon{m}")));
    names.extend(
        ["square", "prism", "duoprism", "gon5-suspension", "bier4", "bier-example", "rp2-6"]
            .map(String::from),
    );
    names
}

pub fn complex(name: &str) -> Result<SimplicialComplex> {
    if let Some(n) = parse_suffix(name, "simplex", 1..=8) {
        return Ok(SimplicialComplex::boundary_simplex(n));
    }
    if let Some(n) = parse_suffix(name, "cross", 2..=6) {
        return Ok(SimplicialComplex::cross_polytope(n));
    }
    if let Some(m) = parse_suffix(name, "gon", 3..=12) {
        return Ok(SimplicialComplex::polygon(m));
    }
    Ok(match name {
        "square" => square(),
        "prism" => prism(),
        "duoprism" => duoprism(),
        "gon5-suspension" => gon5_suspension(),
        "bier4" => bier_instance(&bier4_ground())?.0,
        "bier-example" => bier_instance(&example_complex())?.0,
        "rp2-6" => SimplicialComplex::rp2_six_vertex(),
        _ => return Err(Error::UnknownCatalogEntry(name.to_string())),
    })
}

pub fn instance_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=8).map(|n| format!("rp{n}")).collect();
    for n in 2..=6 {
        names.push(format!("cross{n}-linear"));
        names.push(format!("cross{n}-mixed"));
    }
    for m in 3..=12 {
        names.push(format!("gon{m}"));
        if m % 2 == 0 {
            names.push(format!("gon{m}-twisted"));
        }
    }
    names.extend(
        ["torus", "prism", "duoprism", "gon5-suspension", "bier4", "bier-example"].map(String::from),
    );
    names
}

fn with_columns(k: SimplicialComplex, n: usize, columns: &[BitVec]) -> Result<(SimplicialComplex, CharacteristicMatrix)> {
    let m = CharacteristicMatrix::validate(&k, &BitMatrix::from_columns(columns, n)?)?;
    Ok((k, m))
}

/// `e_1` and `e_2` alternating around the polygon; for odd `m` the last
/// vertex gets `e_1 + e_2`, and the twisted variant gives vertex 1 `e_1 + e_2`.
fn polygon_columns(m: usize, twisted: bool) -> Vec<BitVec> {
    let mut cols: Vec<BitVec> = (0..m).map(|j| BitVec::unit(2, j % 2)).collect();
    if m % 2 == 1 {
        cols[m - 1] = BitVec::ones(2);
    }
    if twisted {
        cols[0] = BitVec::ones(2);
    }
    cols
}

/// Antipodal vertices `i` and `i + n` share `e_i`; the mixed variant moves
/// vertex `n + 1` to `e_1 + e_2`.
fn cross_columns(n: usize, mixed: bool) -> Vec<BitVec> {
    let mut cols: Vec<BitVec> = (0..2 * n).map(|j| BitVec::unit(n, j % n)).collect();
    if mixed {
        let mut v = BitVec::unit(n, 0);
        v.set(1, true);
        cols[n] = v;
    }
    cols
}

fn pair(name: &str) -> Result<(SimplicialComplex, CharacteristicMatrix)> {
    if let Some(n) = parse_suffix(name, "rp", 1..=8) {
        return Ok((SimplicialComplex::boundary_simplex(n), lambda_boundary_simplex(n)));
    }
    for (suffix, mixed) in [("-linear", false), ("-mixed", true)] {
        if let Some(n) = name
            .strip_suffix(suffix)
            .and_then(|base| parse_suffix(base, "cross", 2..=6))
        {
            return with_columns(SimplicialComplex::cross_polytope(n), n, &cross_columns(n, mixed));
        }
    }
    if let Some(m) = name
        .strip_suffix("-twisted")
        .and_then(|base| parse_suffix(base, "gon", 4..=12))
        .filter(|m| m % 2 == 0)
    {
        return with_columns(SimplicialComplex::polygon(m), 2, &polygon_columns(m, true));
    }
    if let Some(m) = parse_suffix(name, "gon", 3..=12) {
        return with_columns(SimplicialComplex::polygon(m), 2, &polygon_columns(m, false));
    }
    let s0 = (SimplicialComplex::boundary_simplex(1), lambda_boundary_simplex(1));
    let tri = (SimplicialComplex::boundary_simplex(2), lambda_boundary_simplex(2));
    match name {
        "torus" => block_product(&s0.0, &s0.1, &s0.0, &s0.1),
        "prism" => block_product(&tri.0, &tri.1, &s0.0, &s0.1),
        "duoprism" => block_product(&tri.0, &tri.1, &tri.0, &tri.1),
        "gon5-suspension" => {
            let (k, m) = pair("gon5")?;
            block_product(&k, &m, &s0.0, &s0.1)
        }
        "bier4" => bier_instance(&bier4_ground()),
        "bier-example" => bier_instance(&example_complex()),
        _ => Err(Error::UnknownCatalogEntry(name.to_string())),
    }
}

pub fn instance(name: &str) -> Result<Instance> {
    let (complex, lambda) = pair(name)?;
    Ok(Instance {
        name: name.to_string(),
        complex,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmap::{classify_pullback, PullbackLabel};

    #[test]
    fn every_name_resolves() {
        for name in complex_names() {
            complex(&name).unwrap();
        }
        for name in instance_names() {
            let inst = instance(&name).unwrap();
            assert_eq!(inst.complex.dim() + 1, inst.lambda.n() as i32, "{name}");
        }
        assert!(matches!(complex("simplex9"), Err(Error::UnknownCatalogEntry(_))));
        assert!(matches!(instance("gon5-twisted"), Err(Error::UnknownCatalogEntry(_))));
    }

    #[test]
    fn labels_of_representative_entries() {
        let label = |name: &str| classify_pullback(&instance(name).unwrap().lambda).unwrap().label;
        assert_eq!(label("rp4"), PullbackLabel::SimplexProper);
        assert_eq!(label("cross4-linear"), PullbackLabel::LinearModel);
        assert_eq!(label("cross4-mixed"), PullbackLabel::NotSimplex);
        assert_eq!(label("cross2-mixed"), PullbackLabel::SimplexProper);
        assert_eq!(label("gon6"), PullbackLabel::LinearModel);
        assert_eq!(label("gon7"), PullbackLabel::SimplexProper);
        assert_eq!(label("gon6-twisted"), PullbackLabel::SimplexProper);
        assert_eq!(label("prism"), PullbackLabel::NotSimplex);
        assert_eq!(label("bier4"), PullbackLabel::SimplexProper);
    }
}
