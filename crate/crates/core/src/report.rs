//! Analysis reports with JSON and plain-table renderings of the same data.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::bier::worked_example;
use crate::error::{Error, Result};
use crate::facering::Sq1Witness;
use crate::instance::Instance;
use crate::simplicial::{binomial, SimplicialComplex};
use crate::smallcover::{evaluate_conditions, BettiTable, RealToricSpace};

pub const CONDITION_STATEMENTS: [&str; 7] = [
    "pullback from the simplex",
    "odd-degree integral cohomology is torsion-free",
    "H^3(M; Z) is torsion-free",
    "Sq^1 vanishes on every even degree",
    "Sq^1 vanishes on H^2(M; Z_2)",
    "b^2k - b^2k-1 = b^2k_Z2 - b^2k-1_Z2 for every k >= 1",
    "b^2 - b^1 = b^2_Z2 - b^1_Z2",
];

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    /// Conditions to include (1-based); `None` means all seven.
    pub conditions: Option<Vec<usize>>,
    pub timings: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypotheses {
    pub closed_pseudomanifold: bool,
    pub shelling_found: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub label: String,
    pub flip_label: Option<String>,
    pub basis_change: Option<Vec<Vec<u8>>>,
    pub coloring: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeGroup {
    pub degree: usize,
    pub group: String,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionEntry {
    pub index: usize,
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witnesses {
    pub torsion_degrees: Vec<usize>,
    pub sq1_degrees: Vec<usize>,
    pub sq1: Option<String>,
    pub betti_failures: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplexChecks {
    pub tau_classes_equal: bool,
    pub square_identity: bool,
    pub stiefel_whitney_identity: bool,
    /// `Wu_i = C(n−i, i) τ^i`, stated but not checked.
    pub wu_classes_unverified: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub vertices: Vec<u32>,
    pub facet_count: usize,
    pub hypotheses: Hypotheses,
    pub classification: Classification,
    pub betti: BettiTable,
    pub cohomology: Vec<DegreeGroup>,
    pub conditions: Vec<ConditionEntry>,
    pub equivalence: String,
    /// `Some(false)` only when the hypotheses hold and the seven conditions disagree.
    #[serde(skip)]
    pub verdict: Option<bool>,
    pub witnesses: Witnesses,
    pub simplex_checks: Option<SimplexChecks>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

fn describe_witness(k: &SimplicialComplex, w: &Sq1Witness) -> String {
    let facet = k.labels_to_mask(&w.facet).expect("witness facet lies in the complex");
    let verts: Vec<u32> = k.mask_to_labels(facet);
    let (a, b) = (verts[w.s - 1], verts[w.t - 1]);
    format!(
        "facet {:?}, i = {}, s = {}, t = {}: Sq^1(v_{a} v_{b}) = v_{a} v_{b} (v_{a} + v_{b}) != 0",
        w.facet, w.i, w.s, w.t
    )
}

pub fn analyze(instance: &Instance, options: &AnalyzeOptions) -> Result<AnalysisReport> {
    let start = Instant::now();
    let mut timings = BTreeMap::new();
    let lap = |label: &str, timings: &mut BTreeMap<String, u128>| {
        timings.insert(label.to_string(), start.elapsed().as_millis());
    };
    let k = instance.complex.clone();
    let space = RealToricSpace::new(k.clone(), instance.lambda.clone())?;
    let n = space.n();
    let class = space.classification()?.clone();
    let flip = space.flip_classification()?;
    lap("classification", &mut timings);
    let shelling_found = space.shelling()?.is_some();
    lap("shelling", &mut timings);
    let report = evaluate_conditions(&space)?;
    lap("conditions", &mut timings);

    let mut warnings = Vec::new();
    if !space.is_closed_pseudomanifold() {
        warnings.push("complex is not a strongly connected closed pseudomanifold".to_string());
    }
    if !shelling_found {
        warnings.push("no shelling found; cohomology assembly assumes shellability".to_string());
    }
    if let Some(f) = &flip {
        if f.label != class.label {
            return Err(Error::Internal(format!(
                "column classification says {} but ridge flips say {}",
                class.label, f.label
            )));
        }
    }

    let simplex_checks = match &class.witness {
        Some(w) => {
            let ring = space.ring()?;
            let tau = ring.tau(&w.coloring);
            let wu = (1..=n / 2)
                .map(|i| {
                    if binomial(n - i, i) % 2 == 1 {
                        format!("Wu_{i} = tau^{i}")
                    } else {
                        format!("Wu_{i} = 0")
                    }
                })
                .collect();
            Some(SimplexChecks {
                tau_classes_equal: tau.is_ok(),
                square_identity: tau.is_ok() && ring.square_identity_check(&w.coloring)?,
                stiefel_whitney_identity: tau.is_ok() && ring.sw_pullback_check(&w.coloring)?,
                wu_classes_unverified: wu,
            })
        }
        None => None,
    };
    lap("ring checks", &mut timings);

    let selected: Vec<usize> = options.conditions.clone().unwrap_or_else(|| (1..=7).collect());
    for &c in &selected {
        if !(1..=7).contains(&c) {
            return Err(Error::Semantic(format!("condition {c} is not among 1..=7")));
        }
    }
    let conditions = selected
        .iter()
        .map(|&c| ConditionEntry {
            index: c,
            statement: CONDITION_STATEMENTS[c - 1].to_string(),
            holds: report.conditions[c - 1],
        })
        .collect();
    let verdict = report.equivalence_verdict();
    let equivalence = match verdict {
        Some(true) => "all seven conditions agree".to_string(),
        Some(false) => "DISAGREEMENT among the seven conditions".to_string(),
        None => "not asserted: hypotheses do not hold".to_string(),
    };
    let cohomology = (0..=n)
        .map(|q| {
            let g = report.cohomology.group(q as i32);
            DegreeGroup {
                degree: q,
                group: g.to_string(),
                rank: g.rank,
                torsion: g.torsion.clone(),
            }
        })
        .collect();
    Ok(AnalysisReport {
        name: instance.name.clone(),
        n,
        m: k.vertex_count(),
        vertices: k.labels().to_vec(),
        facet_count: k.facet_masks().len(),
        hypotheses: Hypotheses {
            closed_pseudomanifold: space.is_closed_pseudomanifold(),
            shelling_found,
        },
        classification: Classification {
            label: class.label.to_string(),
            flip_label: flip.map(|f| f.label.to_string()),
            basis_change: class
                .witness
                .as_ref()
                .map(|w| w.basis_change.rows().iter().map(|r| r.to_bits()).collect()),
            coloring: class.witness.as_ref().map(|w| w.coloring.clone()),
        },
        betti: report.betti.clone(),
        cohomology,
        conditions,
        equivalence,
        verdict,
        witnesses: Witnesses {
            torsion_degrees: report.torsion_degrees.clone(),
            sq1_degrees: report.sq1_degrees.clone(),
            sq1: report.sq1_witness.as_ref().map(|w| describe_witness(&k, w)),
            betti_failures: report.betti_failures.clone(),
        },
        simplex_checks,
        warnings,
        timings_ms: options.timings.then_some(timings),
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_json(report: &AnalysisReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

pub fn render_table(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "instance      {}", r.name);
    let _ = writeln!(out, "n, m          {}, {}", r.n, r.m);
    let _ = writeln!(out, "vertices      {:?}", r.vertices);
    let _ = writeln!(out, "facets        {}", r.facet_count);
    let _ = writeln!(
        out,
        "hypotheses    closed pseudomanifold: {}, shelling found: {}",
        yes_no(r.hypotheses.closed_pseudomanifold),
        yes_no(r.hypotheses.shelling_found)
    );
    let c = &r.classification;
    let _ = writeln!(
        out,
        "pullback      {} (ridge flips: {})",
        c.label,
        c.flip_label.as_deref().unwrap_or("n/a")
    );
    if let Some(g) = &c.basis_change {
        let rows: Vec<String> = g
            .iter()
            .map(|row| row.iter().map(|b| b.to_string()).collect::<String>())
            .collect();
        let _ = writeln!(out, "basis change  {}", rows.join(" "));
    }
    if let Some(col) = &c.coloring {
        let _ = writeln!(out, "coloring      {col:?}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{:>6} {:>6} {:>6} {:>6}  H^q(M; Z)", "q", "b", "b_Z2", "mu");
    for g in &r.cohomology {
        let q = g.degree;
        let _ = writeln!(
            out,
            "{:>6} {:>6} {:>6} {:>6}  {}",
            q, r.betti.rational[q], r.betti.mod2[q], r.betti.mu[q], g.group
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "conditions");
    for e in &r.conditions {
        let _ = writeln!(out, "  ({}) {:<3}  {}", e.index, yes_no(e.holds), e.statement);
    }
    let _ = writeln!(out, "equivalence   {}", r.equivalence);
    let w = &r.witnesses;
    let _ = writeln!(out, "torsion in odd degrees     {:?}", w.torsion_degrees);
    let _ = writeln!(out, "Sq^1 nonzero in degrees    {:?}", w.sq1_degrees);
    let _ = writeln!(out, "Betti identity fails at k  {:?}", w.betti_failures);
    if let Some(s) = &w.sq1 {
        let _ = writeln!(out, "Sq^1 witness  {s}");
    }
    if let Some(s) = &r.simplex_checks {
        let _ = writeln!(out, "tau classes equal          {}", yes_no(s.tau_classes_equal));
        let _ = writeln!(out, "v_j^2 = tau v_j            {}", yes_no(s.square_identity));
        let _ = writeln!(out, "w(M) = (1 + tau)^(n+1)     {}", yes_no(s.stiefel_whitney_identity));
        if !s.wu_classes_unverified.is_empty() {
            let _ = writeln!(
                out,
                "Wu classes (unverified)    {}",
                s.wu_classes_unverified.join(", ")
            );
        }
    }
    for warning in &r.warnings {
        let _ = writeln!(out, "warning: {warning}");
    }
    if let Some(t) = &r.timings_ms {
        for (label, ms) in t {
            let _ = writeln!(out, "time {label}: {ms} ms");
        }
    }
    out
}

pub const TABLE1_RATIONAL: [usize; 9] = [1, 1, 31, 23, 43, 48, 7, 9, 0];
pub const TABLE1_MOD2: [usize; 9] = [1, 10, 40, 81, 101, 81, 40, 10, 1];

#[derive(Clone, Debug)]
pub struct Table1 {
    pub rational: Vec<usize>,
    pub mod2: Vec<usize>,
}

impl Table1 {
    pub fn rational_matches(&self) -> bool {
        self.rational == TABLE1_RATIONAL
    }

    pub fn mod2_matches(&self) -> bool {
        self.mod2 == TABLE1_MOD2
    }

    pub fn render(&self) -> String {
        let row = |v: &[usize]| {
            v.iter()
                .map(|x| format!("{x:>5}"))
                .collect::<String>()
        };
        let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let mut out = String::new();
        let _ = writeln!(out, "{:<8}{}", "k", row(&(0..9).collect::<Vec<_>>()));
        let _ = writeln!(
            out,
            "{:<8}{}  {}",
            "b^k",
            row(&self.rational),
            status(self.rational_matches())
        );
        let _ = writeln!(
            out,
            "{:<8}{}  {}",
            "b^k_Z2",
            row(&self.mod2),
            status(self.mod2_matches())
        );
        out
    }
}

/// Betti numbers of the Bier sphere example.
pub fn table1() -> Result<Table1> {
    let (_, bier, m) = worked_example();
    let space = RealToricSpace::new(bier, m)?;
    Ok(Table1 {
        rational: space.rational_betti()?,
        mod2: space.mod2_betti()?,
    })
}
