//! The full reproduction suite: every numbered check with its outcome and
//! a JSON summary. Used by the `sweep` command.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::prime_divisors;
use crate::correspondence::{grid, kummer_halving, sweep_chains, Outcome};
use crate::discriminant::same_genus;
use crate::embeddings::{embed_phi_rational, embed_t_in_lambda, saturate_phi};
use crate::error::Result;
use crate::fibration::{configuration_report, CurveGraph};
use crate::lattice::{self, Signature};
use crate::matrix::int;
use crate::rational_forms::{
    hilbert_symbol, hilbert_symbol_by_lifting, q_equivalent, scaled_kummer_equivalence, Place,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: usize,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub criteria: Vec<CriterionResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

/// Grid bounds and sample counts; `Default` gives the full suite.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub invariant_range: [i64; 3],
    pub lambda_range: [i64; 3],
    pub phi_range: [i64; 3],
    pub pair_range: [i64; 3],
    pub chain_range: [i64; 3],
    pub reciprocity_pairs: usize,
    pub lifting_pairs: usize,
    pub seed: u64,
}

impl SweepConfig {
    /// The same suite with every grid replaced by `1..=K × 1..=M × 1..=N`.
    pub fn with_grid(mut self, bounds: [i64; 3]) -> Self {
        self.invariant_range = bounds;
        self.lambda_range = bounds;
        self.phi_range = bounds;
        self.pair_range = bounds;
        self.chain_range = bounds;
        self
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            invariant_range: [6; 3],
            lambda_range: [10; 3],
            phi_range: [6; 3],
            pair_range: [4; 3],
            chain_range: [4; 3],
            reciprocity_pairs: 500,
            lifting_pairs: 100,
            seed: 0x6b33,
        }
    }
}

fn criterion(id: u8, title: &str, checks: usize, failures: Vec<String>, mut detail: Value) -> CriterionResult {
    detail["failures"] = json!(failures);
    CriterionResult {
        id,
        title: title.into(),
        passed: failures.is_empty(),
        checks,
        detail,
    }
}

fn triples(r: [i64; 3]) -> Vec<(i64, i64, i64)> {
    grid(r)
}

pub fn invariant_table(r: [i64; 3]) -> Result<CriterionResult> {
    let mut failures = Vec::new();
    let mut checks = 0;
    let fixed = [
        ("U", lattice::hyperbolic().determinant(), int(-1)),
        ("E8", lattice::e8(1)?.determinant(), int(1)),
        ("Lambda", lattice::k3_lattice().determinant(), int(-1)),
    ];
    for (name, got, want) in fixed {
        checks += 1;
        if got != want {
            failures.push(format!("det {name} = {got}"));
        }
    }
    checks += 1;
    if lattice::k3_lattice().signature() != Signature::new(3, 19, 0) {
        failures.push("signature of Lambda".into());
    }
    for (k, m, n) in triples(r) {
        let t = lattice::twisted_t(k, m, n)?;
        checks += 2;
        if t.determinant() != int(-2 * k * k * m * m * n) {
            failures.push(format!("det T({k},{m},{n}) = {}", t.determinant()));
        }
        if t.signature() != Signature::new(2, 3, 0) {
            failures.push(format!("signature T({k},{m},{n}) = {}", t.signature()));
        }
    }
    Ok(criterion(1, "determinants and signatures", checks, failures, json!({"range": r})))
}

pub fn lambda_embeddings(r: [i64; 3]) -> Result<CriterionResult> {
    let results: Vec<Option<String>> = triples(r)
        .into_par_iter()
        .map(|(k, m, n)| match embed_t_in_lambda(k, m, n) {
            Ok(e) if e.is_isometric_embedding() && e.is_primitive().unwrap_or(false) => None,
            Ok(_) => Some(format!("T({k},{m},{n}) ↪ Lambda is not a primitive isometry")),
            Err(err) => Some(format!("T({k},{m},{n}): {err}")),
        })
        .collect();
    let checks = results.len();
    let failures = results.into_iter().flatten().collect();
    Ok(criterion(2, "primitive embedding of T(k,m,n) into Lambda", checks, failures, json!({"range": r})))
}

pub fn phi_saturation(r: [i64; 3]) -> Result<CriterionResult> {
    let mut failures = Vec::new();
    let mut checks = 0;
    for (k, m, n) in triples(r) {
        checks += 1;
        let phi = embed_phi_rational(k, m, n)?;
        if !phi.is_isometric_embedding() {
            failures.push(format!("phi({k},{m},{n}) does not preserve the form"));
            continue;
        }
        let s = match saturate_phi(k, m, n) {
            Ok(s) => s.saturation.lattice,
            Err(e) => {
                failures.push(format!("saturation ({k},{m},{n}): {e}"));
                continue;
            }
        };
        let ok = s.determinant() == int(-2 * n)
            && s.rank() == 5
            && s.is_even()
            && s.signature() == Signature::new(2, 3, 0)
            && same_genus(&s, &lattice::u2_plus(n)?)?;
        if !ok {
            failures.push(format!("saturation ({k},{m},{n}) has the wrong invariants"));
        }
    }
    Ok(criterion(3, "saturation of the rational embedding in U3", checks, failures, json!({"range": r})))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub left: [i64; 3],
    pub right: [i64; 3],
    pub verdict: bool,
    pub square_class: [String; 2],
    pub hasse_mismatches: Vec<Place>,
}

/// Q-equivalence of every unordered pair of distinct triples.
pub fn twist_pair_sweep(r: [i64; 3]) -> Result<Vec<PairVerdict>> {
    let ts = triples(r);
    let pairs: Vec<_> = (0..ts.len())
        .flat_map(|i| (i + 1..ts.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(i, j)| {
            let (a, b) = (ts[i], ts[j]);
            let c = q_equivalent(&lattice::twisted_t(a.0, a.1, a.2)?, &lattice::twisted_t(b.0, b.1, b.2)?)?;
            c.replay()?;
            Ok(PairVerdict {
                left: [a.0, a.1, a.2],
                right: [b.0, b.1, b.2],
                verdict: c.verdict,
                square_class: [c.square_class.0.to_string(), c.square_class.1.to_string()],
                hasse_mismatches: c.hasse_mismatches(),
            })
        })
        .collect()
}

pub fn q_non_isometry(r: [i64; 3]) -> Result<CriterionResult> {
    let mut failures = Vec::new();
    let c = q_equivalent(&lattice::twisted_t(1, 1, 1)?, &lattice::twisted_t(2, 2, 2)?)?;
    if c.verdict || c.square_class != (int(-2), int(-1)) {
        failures.push("T(1,1,1) vs T(2,2,2) is not refuted by the square classes".into());
    }
    let pairs = twist_pair_sweep(r)?;
    let equivalent: Vec<&PairVerdict> = pairs.iter().filter(|p| p.verdict).collect();
    let detail = json!({
        "witness": {"square_class": ["-2", "-1"], "verdict": c.verdict},
        "pairs": pairs.len(),
        "q_equivalent_pairs": equivalent.len(),
        "flagged": equivalent,
        "verdicts": pairs,
    });
    Ok(criterion(4, "rational non-isometry of twists", pairs.len() + 1, failures, detail))
}

pub fn kummer_scaling() -> Result<CriterionResult> {
    let mut failures = Vec::new();
    let mut checks = 0;
    for n in 1..=10 {
        for a1 in 1..=5 {
            for a2 in 1..=5 {
                checks += 1;
                if !scaled_kummer_equivalence(n, a1, a2)?.verdict {
                    failures.push(format!("(n, a1, a2) = ({n}, {a1}, {a2})"));
                }
            }
        }
    }
    Ok(criterion(5, "scaled Kummer lattices are rationally equivalent", checks, failures, json!({})))
}

pub fn halving() -> Result<CriterionResult> {
    let mut failures = Vec::new();
    let u2 = lattice::hyperbolic().twist(2)?.power(2);
    for n in 1..=10 {
        let l = u2.direct_sum(&lattice::rank1(-4 * n));
        match kummer_halving(&l)? {
            Outcome::Found(d) if d.t_prime.gram() == lattice::rank1(-2 * n).gram() => {}
            other => failures.push(format!("U(2)^2+<{}>: {}", -4 * n, other.label())),
        }
    }
    if !matches!(kummer_halving(&lattice::twisted_t(1, 1, 1)?)?, Outcome::Refuted(_)) {
        failures.push("T(1,1,1) was not refuted".into());
    }
    match kummer_halving(&lattice::twisted_t(2, 2, 2)?)? {
        Outcome::Found(d) if d.halved.gram() == lattice::twisted_t(1, 1, 1)?.gram() => {}
        other => failures.push(format!("T(2,2,2): {}", other.label())),
    }
    Ok(criterion(6, "Kummer halving", 12, failures, json!({})))
}

fn relevant_places(a: i64, b: i64) -> Vec<Place> {
    let mut ps: Vec<u64> = prime_divisors(&int(2 * a * b))
        .into_iter()
        .map(|p| u64::try_from(p).unwrap())
        .collect();
    ps.sort();
    std::iter::once(Place::Infinity).chain(ps.into_iter().map(Place::Prime)).collect()
}

pub fn reciprocity(cfg: &SweepConfig) -> Result<CriterionResult> {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let nonzero = |rng: &mut StdRng| loop {
        let x: i64 = rng.gen_range(-50..=50);
        if x != 0 {
            return x;
        }
    };
    let mut failures = Vec::new();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    for _ in 0..cfg.reciprocity_pairs {
        let (a, b) = (nonzero(&mut rng), nonzero(&mut rng));
        let mut prod = 1;
        for p in relevant_places(a, b) {
            prod *= hilbert_symbol(&q(a), &q(b), p)?;
        }
        if prod != 1 {
            failures.push(format!("reciprocity fails for ({a}, {b})"));
        }
    }
    for _ in 0..cfg.lifting_pairs {
        let (a, b) = (nonzero(&mut rng), nonzero(&mut rng));
        if hilbert_symbol(&q(a), &q(b), Place::Prime(2))? != hilbert_symbol_by_lifting(a, b, 2, 6)? {
            failures.push(format!("2-adic symbol of ({a}, {b}) disagrees with lifting"));
        }
    }
    Ok(criterion(
        7,
        "Hilbert reciprocity and the 2-adic symbol",
        cfg.reciprocity_pairs + cfg.lifting_pairs,
        failures,
        json!({"seed": cfg.seed}),
    ))
}

pub fn fibers() -> Result<CriterionResult> {
    let g = CurveGraph::shipped();
    let r = configuration_report(&g)?;
    let mut failures = Vec::new();
    let expected = [("F1", "~E8"), ("F2", "~E7"), ("F1'", "~E8"), ("F2'", "~E7")];
    for (f, (name, ty)) in r.fibers.iter().zip(expected) {
        if f.fiber != name || !f.is_fiber || f.dynkin.type_name != ty {
            failures.push(format!("{}: fiber {} type {}", f.fiber, f.is_fiber, f.dynkin.type_name));
        }
    }
    if !r.fibers[3].discrepancy {
        failures.push("F2' type discrepancy is not flagged".into());
    }
    if !r.arithmetic_holds() {
        failures.push("incidence or pencil arithmetic fails".into());
    }
    let checks = r.fibers.len() + r.incidences.len() + 1;
    Ok(criterion(8, "elliptic fibration arithmetic", checks, failures, serde_json::to_value(&r)?))
}

pub fn chains(r: [i64; 3]) -> Result<CriterionResult> {
    let results = sweep_chains(r);
    let checks = results.len();
    let failures = results
        .into_iter()
        .filter_map(|(a, b, res)| res.err().map(|e| format!("{a:?} -> {b:?}: {e}")))
        .collect();
    Ok(criterion(9, "correspondence chains over the grid", checks, failures, json!({"range": r})))
}

/// Runs one check by number.
pub fn run_criterion(id: u8, cfg: &SweepConfig) -> Result<CriterionResult> {
    match id {
        1 => invariant_table(cfg.invariant_range),
        2 => lambda_embeddings(cfg.lambda_range),
        3 => phi_saturation(cfg.phi_range),
        4 => q_non_isometry(cfg.pair_range),
        5 => kummer_scaling(),
        6 => halving(),
        7 => reciprocity(cfg),
        8 => fibers(),
        9 => chains(cfg.chain_range),
        _ => Err(crate::Error::InvalidArgument(format!("no criterion {id}"))),
    }
}

/// Runs every check; `timing` receives each check's wall time in
/// milliseconds (kept out of the report).
pub fn run_all(cfg: &SweepConfig, mut timing: impl FnMut(u8, u128)) -> Result<Report> {
    let mut criteria = Vec::new();
    for id in 1..=9 {
        let t = Instant::now();
        criteria.push(run_criterion(id, cfg)?);
        timing(id, t.elapsed().as_millis());
    }
    Ok(Report { criteria })
}
