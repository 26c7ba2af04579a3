//! End-to-end acceptance checks, one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force_label, catalog_cases, fuzz_cases, general_linear_group, Case};
use smallcover_core::bier::worked_example;
use smallcover_core::catalog;
use smallcover_core::charmap::{classify_pullback, classify_via_flips, verify_witness};
use smallcover_core::facering::find_sq1_witness;
use smallcover_core::homology::{reduced_cohomology, Coefficients, FinAbGroup};
use smallcover_core::shelling::{critical_generators, two_degree_concentration_check};
use smallcover_core::smallcover::{evaluate_conditions, RealToricSpace};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table1_reproduction() -> Outcome {
    let start = Instant::now();
    let (_, bier, m) = worked_example();
    let space = RealToricSpace::new(bier, m).map_err(|e| e.to_string())?;
    let rational = space.rational_betti().map_err(|e| e.to_string())?;
    let mod2 = space.mod2_betti().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(rational == [1, 1, 31, 23, 43, 48, 7, 9, 0], || {
        format!("b^k = {rational:?}")
    })?;
    ensure(mod2 == [1, 10, 40, 81, 101, 81, 40, 10, 1], || {
        format!("b^k_Z2 = {mod2:?}")
    })?;
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!("both rows exact in {:.2?}", elapsed))
}

fn seven_way_equivalence(cases: &[Case]) -> Outcome {
    let mut asserted = 0;
    let mut fuzz_asserted = 0;
    for case in cases {
        let report = evaluate_conditions(&case.space).map_err(|e| format!("{}: {e}", case.name))?;
        if let Some(agree) = report.equivalence_verdict() {
            ensure(agree, || format!("{}: conditions {:?}", case.name, report.conditions))?;
            asserted += 1;
            if case.name.contains('#') {
                fuzz_asserted += 1;
            }
        }
    }
    ensure(fuzz_asserted >= 500, || format!("only {fuzz_asserted} fuzz instances asserted"))?;
    Ok(format!(
        "{asserted} instances agree ({fuzz_asserted} fuzzed over {} complexes)",
        common::FUZZ_COMPLEXES.len()
    ))
}

fn classifier_cross_validation(cases: &[Case]) -> Outcome {
    let groups: Vec<Vec<Vec<u32>>> = (0..=4).map(general_linear_group).collect();
    ensure(groups[4].len() == 20160, || format!("|GL(4,2)| = {}", groups[4].len()))?;
    let mut brute = 0;
    for case in cases {
        let (k, m) = (case.space.complex(), case.space.matrix());
        let direct = classify_pullback(m).map_err(|e| e.to_string())?;
        let flips = classify_via_flips(k, m).map_err(|e| format!("{}: {e}", case.name))?;
        ensure(direct.label == flips.label, || {
            format!("{}: {} vs {}", case.name, direct.label, flips.label)
        })?;
        for w in [&direct.witness, &flips.witness].into_iter().flatten() {
            verify_witness(k, m, w).map_err(|e| format!("{}: {e}", case.name))?;
        }
        if m.n() <= 4 {
            let label = brute_force_label(m, &groups[m.n()]);
            ensure(label == direct.label, || {
                format!("{}: brute force {label} vs {}", case.name, direct.label)
            })?;
            brute += 1;
        }
    }
    Ok(format!("{} instances agree, {brute} also by brute force", cases.len()))
}

fn projective_space_regression() -> Outcome {
    for n in 2..=6 {
        let inst = catalog::instance(&format!("rp{n}")).unwrap();
        let space = RealToricSpace::new(inst.complex, inst.lambda).unwrap();
        let h = space.integral_cohomology().map_err(|e| e.to_string())?;
        for q in 0..=n {
            let expected = match q {
                0 => FinAbGroup::free(1),
                q if q == n && n % 2 == 1 => FinAbGroup::free(1),
                q if q % 2 == 0 => FinAbGroup::new(0, vec![2]),
                _ => FinAbGroup::default(),
            };
            ensure(h.group(q as i32) == expected, || {
                format!("RP^{n}: H^{q} = {} expected {expected}", h.group(q as i32))
            })?;
        }
        let ring = space.ring().unwrap();
        let u = ring.express_vertex(0);
        let w = ring.total_sw();
        ensure(w == ring.binomial_power(&u, n + 1), || format!("RP^{n}: w != (1+u)^(n+1)"))?;
        let repeated = ring.one_plus_power_times(&u, n + 1, &ring.total_one());
        ensure(w == repeated, || format!("RP^{n}: expansion routes differ"))?;
    }
    Ok("RP^2..RP^6 cohomology and w = (1+u)^(n+1)".into())
}

fn negative_witness() -> Outcome {
    let inst = catalog::instance("prism").unwrap();
    let space = RealToricSpace::new(inst.complex, inst.lambda).unwrap();
    let h = space.integral_cohomology().unwrap();
    ensure(h.group(3).torsion.contains(&2), || format!("H^3 = {}", h.group(3)))?;
    let ring = space.ring().unwrap();
    ensure(!ring.sq1_vanishes_on_degree(2), || "Sq^1 vanishes on H^2".into())?;
    let w = find_sq1_witness(space.complex(), space.matrix(), ring)
        .map_err(|e| e.to_string())?
        .ok_or("no witness")?;
    // v_s v_t (v_s + v_t) recomputed through products of degree-one classes
    let facet = space.complex().labels_to_mask(&w.facet).unwrap();
    let verts: Vec<usize> = smallcover_core::simplicial::mask_vertices(facet).collect();
    let (vs, vt) = (ring.express_vertex(verts[w.s - 1]), ring.express_vertex(verts[w.t - 1]));
    let expected = ring.multiply(&ring.multiply(&vs, &vt), &vs.add(&vt));
    ensure(ring.sq1(&w.class) == expected && !expected.is_zero(), || {
        "witness class does not satisfy the identity".into()
    })?;
    let report = evaluate_conditions(&space).unwrap();
    ensure(report.conditions == [false; 7], || format!("{:?}", report.conditions))?;
    Ok(format!("Z_2 in H^3, witness at facet {:?}, all seven false", w.facet))
}

fn ring_dimension_law(cases: &[Case]) -> Outcome {
    for case in cases {
        let h: Vec<usize> = case.space.complex().h_vector().unwrap().h.iter().map(|&x| x as usize).collect();
        let dims = case.space.ring().map_err(|e| format!("{}: {e}", case.name))?.dims();
        ensure(dims == h, || format!("{}: dims {dims:?} h {h:?}", case.name))?;
    }
    Ok(format!("{} instances", cases.len()))
}

fn property_suites(cases: &[Case]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut chi_checks = 0;
    let mut w_checks = 0;
    for case in cases {
        let name = &case.name;
        let space = &case.space;
        let ring = space.ring().unwrap();
        let n = ring.n();
        for d in 0..=n {
            for x in ring.sq1_images(d) {
                ensure(ring.sq1(&x).is_zero(), || format!("{name}: Sq1 Sq1 != 0 in degree {d}"))?;
            }
        }
        for _ in 0..20 {
            let p = rng.random_range(0..=n);
            let q = rng.random_range(0..=n - p);
            let (dp, dq) = (ring.dim(p), ring.dim(q));
            if dp == 0 || dq == 0 {
                continue;
            }
            let x = ring.basis_class(p, rng.random_range(0..dp));
            let y = ring.basis_class(q, rng.random_range(0..dq));
            let lhs = ring.sq1(&ring.multiply(&x, &y));
            let rhs = ring.multiply(&ring.sq1(&x), &y).add(&ring.multiply(&x, &ring.sq1(&y)));
            ensure(lhs == rhs, || format!("{name}: Leibniz fails in degrees {p}, {q}"))?;
        }
        let betti = space.betti_table().unwrap();
        ensure(betti.universal_coefficients_hold(), || format!("{name}: {betti:?}"))?;
        let Some(shelling) = space.shelling().unwrap() else {
            continue;
        };
        let faces = space.complex().face_count() as u64;
        ensure(shelling.interval_face_count() == faces, || format!("{name}: interval count"))?;
        // critical cells compute the Euler characteristic of every full subcomplex tested
        let m = space.complex().vertex_count();
        let mut sets: Vec<u64> = space
            .omega_cohomology()
            .unwrap()
            .iter()
            .map(|o| o.descriptor.support)
            .collect();
        sets.extend((0..8).map(|_| rng.random::<u64>() & ((1u64 << m) - 1)));
        for w in sets {
            let gens = critical_generators(shelling, w);
            let alternating: i64 = gens.iter().map(|g| if g.degree % 2 == 0 { 1 } else { -1 }).sum();
            let sub = space.complex().induced_by_mask(w);
            let h = reduced_cohomology(&sub, Coefficients::Integers);
            let euler: i64 = h.iter().map(|(d, g)| if d % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum();
            ensure(alternating == euler, || format!("{name}: W = {w:#b}: {alternating} vs {euler}"))?;
            w_checks += 1;
        }
        if let Some(wit) = &space.classification().unwrap().witness {
            for chi in common::even_subsets(n + 1) {
                let chi: Vec<usize> = (0..=n).filter(|i| chi >> i & 1 == 1).map(|i| i + 1).collect();
                ensure(two_degree_concentration_check(shelling, &wit.coloring, &chi), || {
                    format!("{name}: concentration fails for {chi:?}")
                })?;
                chi_checks += 1;
            }
        }
    }
    Ok(format!(
        "{} instances, {w_checks} subcomplex Euler checks, {chi_checks} concentration checks",
        cases.len()
    ))
}

fn total_square_checks(cases: &[Case]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut instances = 0;
    let mut sampled = 0;
    for case in cases {
        let Some(w) = &case.space.classification().unwrap().witness else {
            continue;
        };
        let ring = case.space.ring().unwrap();
        let taus = ring.tau_classes(&w.coloring);
        ensure(taus.iter().all(|t| *t == taus[0]), || format!("{}: tau classes differ", case.name))?;
        let tau = &taus[0];
        ensure(ring.square_identity_check(&w.coloring).unwrap(), || {
            format!("{}: v_j^2 != tau v_j", case.name)
        })?;
        for q in 0..=ring.n() {
            let dim = ring.dim(q);
            let picks: Vec<usize> = if dim <= 10 {
                (0..dim).collect()
            } else {
                (0..10).map(|_| rng.random_range(0..dim)).collect()
            };
            for i in picks {
                let x = ring.basis_class(q, i);
                let lhs = ring.total_sq(&x);
                let rhs = ring.one_plus_power_times(tau, q, &ring.homogeneous(&x));
                ensure(lhs == rhs, || format!("{}: Sq(x) != (1+tau)^q x in degree {q}", case.name))?;
                sampled += 1;
            }
        }
        instances += 1;
    }
    Ok(format!("{instances} simplex pullbacks, {sampled} sampled classes"))
}

fn orientability(cases: &[Case]) -> Outcome {
    let mut count = 0;
    for case in cases.iter().filter(|c| c.space.n() == 3) {
        let orientable = case.space.is_orientable_3d().unwrap();
        let h3 = case.space.integral_cohomology().unwrap().group(3);
        ensure(orientable == h3.is_torsion_free(), || {
            format!("{}: orientable {orientable}, H^3 = {h3}", case.name)
        })?;
        count += 1;
    }
    Ok(format!("{count} three-dimensional instances"))
}

fn main() -> ExitCode {
    let mut cases = catalog_cases();
    cases.extend(fuzz_cases(70, 7));
    let criteria: Vec<Criterion> = vec![
        ("1 Betti table of the Bier sphere example", Box::new(table1_reproduction)),
        ("2 seven-way equivalence", Box::new(|| seven_way_equivalence(&cases))),
        ("3 classifier cross-validation", Box::new(|| classifier_cross_validation(&cases))),
        ("4 real projective space regression", Box::new(projective_space_regression)),
        ("5 negative witness on the prism", Box::new(negative_witness)),
        ("6 ring dimension law", Box::new(|| ring_dimension_law(&cases))),
        ("7 property suites", Box::new(|| property_suites(&cases))),
        ("8 tau and square identities", Box::new(|| total_square_checks(&cases))),
        ("9 orientability in dimension three", Box::new(|| orientability(&cases))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        match outcome {
            Ok(detail) => println!("PASS  [{name}] {detail} ({:.2?})", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL  [{name}] {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
