//! Lattice criteria for Shioda-Inose structures (primitive embedding into
//! U³) and Kummer structures (U(2)² ⊕ T′(2) decomposition), and the
//! certificate chains linking the surfaces X(k,m,n).
//!
//! Surfaces appear only through their transcendental lattices. Links that
//! rest on geometry with no lattice witness are marked `asserted`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::embeddings::{
    box_vectors, embed_tn_in_u3, has_torsion_free_cokernel, is_unimodular_matrix,
    rational_isometry_t_to_tn, LatticeMap, RationalMap,
};
use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{self, Lattice};
use crate::matrix::{int, IntMatrix};
use crate::normal_form::column_hnf;

/// Result of a bounded search. `Unknown` means the bounds were exhausted,
/// which is not a proof of absence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    Refuted(String),
    Unknown(String),
}

impl<T> Outcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Found(_) => "FOUND",
            Outcome::Refuted(_) => "REFUTED",
            Outcome::Unknown(_) => "UNKNOWN",
        }
    }
}

/// Coordinate bound for the embedding search into U³.
pub const SHIODA_INOSE_BOX: i64 = 2;
/// Coordinate bound for hyperbolic-pair search during halving.
pub const KUMMER_BOX: i64 = 3;
const SEARCH_BUDGET: u64 = 2_000_000;

fn small_gram(l: &Lattice) -> Option<Vec<Vec<i64>>> {
    let g = l.gram();
    (0..g.rows())
        .map(|i| (0..g.cols()).map(|j| g[(i, j)].to_i64()).collect())
        .collect()
}

fn dot_small(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        if x[i] == 0 {
            continue;
        }
        for j in 0..y.len() {
            s += x[i] * g[i][j] * y[j];
        }
    }
    s
}

fn small_box(dim: usize, bound: i64) -> Vec<Vec<i64>> {
    box_vectors(dim, bound)
        .into_iter()
        .map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

fn u2_plus_parameter(l: &Lattice) -> Option<i64> {
    if l.rank() != 5 {
        return None;
    }
    let c = -l.gram()[(4, 4)].to_i64()?;
    if c <= 0 || c % 2 != 0 {
        return None;
    }
    let n = c / 2;
    (lattice::u2_plus(n).ok()?.gram() == l.gram()).then_some(n)
}

/// Searches for a primitive isometric embedding L ↪ U³. L must be
/// non-degenerate of rank ≤ 6 with at most three positive and three
/// negative squares.
pub fn admits_shioda_inose(l: &Lattice) -> Result<Outcome<LatticeMap>> {
    let sig = l.signature();
    if l.rank() > 6 || sig.s_zero != 0 || sig.s_plus > 3 || sig.s_minus > 3 {
        return Err(Error::InvalidArgument(format!(
            "{} has rank {} and signature {}; U³ only holds non-degenerate lattices with s₊, s₋ ≤ 3",
            l.name(),
            l.rank(),
            sig
        )));
    }
    if !l.is_even() {
        return Ok(Outcome::Refuted("odd lattices do not embed in the even lattice U³".into()));
    }
    if l.rank() == 6 && !l.is_unimodular() {
        return Ok(Outcome::Refuted(
            "a primitive rank-6 sublattice of U³ is U³ itself, which is unimodular".into(),
        ));
    }
    let candidate = if let Some(n) = u2_plus_parameter(l) {
        let e = embed_tn_in_u3(n)?;
        Some(LatticeMap::new(l.clone(), e.dst, e.matrix)?)
    } else if l.gram() == lattice::torus_lattice().gram() {
        Some(LatticeMap::new(l.clone(), lattice::torus_lattice(), IntMatrix::identity(6))?)
    } else {
        search_u3_embedding(l)?
    };
    match candidate {
        Some(map) => {
            if !map.is_isometric_embedding() || !map.is_primitive()? {
                return Err(Error::Verification(format!(
                    "embedding of {} into U³ failed its re-check",
                    l.name()
                )));
            }
            Ok(Outcome::Found(map))
        }
        None => Ok(Outcome::Unknown(format!(
            "no primitive embedding with coordinates in [-{b}, {b}]",
            b = SHIODA_INOSE_BOX
        ))),
    }
}

fn search_u3_embedding(l: &Lattice) -> Result<Option<LatticeMap>> {
    let Some(g) = small_gram(l) else {
        return Ok(None);
    };
    let u3 = lattice::torus_lattice();
    let h = small_gram(&u3).unwrap();
    let vecs = small_box(6, SHIODA_INOSE_BOX);
    let r = l.rank();
    let cands: Vec<Vec<usize>> = (0..r)
        .map(|i| {
            (0..vecs.len())
                .filter(|&v| vecs[v].iter().any(|&x| x != 0) && dot_small(&h, &vecs[v], &vecs[v]) == g[i][i])
                .collect()
        })
        .collect();
    let mut chosen = Vec::new();
    let mut budget = SEARCH_BUDGET;
    let found = embed_backtrack(&g, &h, &vecs, &cands, &mut chosen, &mut budget);
    Ok(found.map(|cols| {
        let columns: Vec<Vec<BigInt>> = cols.iter().map(|&c| vecs[c].iter().map(|&x| int(x)).collect()).collect();
        LatticeMap::new(l.clone(), u3, IntMatrix::from_columns(6, &columns)).expect("shape")
    }))
}

fn embed_backtrack(
    g: &[Vec<i64>],
    h: &[Vec<i64>],
    vecs: &[Vec<i64>],
    cands: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    budget: &mut u64,
) -> Option<Vec<usize>> {
    let i = chosen.len();
    if i == cands.len() {
        let columns: Vec<Vec<BigInt>> = chosen.iter().map(|&c| vecs[c].iter().map(|&x| int(x)).collect()).collect();
        let m = IntMatrix::from_columns(6, &columns);
        return (m.rank() == cands.len() && has_torsion_free_cokernel(&m)).then(|| chosen.clone());
    }
    for &v in &cands[i] {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if chosen
            .iter()
            .enumerate()
            .all(|(j, &w)| dot_small(h, &vecs[v], &vecs[w]) == g[i][j])
        {
            chosen.push(v);
            if let Some(done) = embed_backtrack(g, h, vecs, cands, chosen, budget) {
                return Some(done);
            }
            chosen.pop();
        }
    }
    None
}

/// `L ≅ U(2)² ⊕ T′(2)` witnessed by a unimodular change of basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerDecomposition {
    pub lattice: Lattice,
    pub t_prime: Lattice,
    /// U² ⊕ T′, so that `lattice ≅ halved(2)`.
    pub halved: Lattice,
    /// Columns are the new basis; `basisᵀ·G·basis = U(2)² ⊕ T′(2)`.
    #[serde(with = "json::int_matrix")]
    pub basis: IntMatrix,
}

impl KummerDecomposition {
    pub fn verify(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Verification(m.to_string()));
        if !is_unimodular_matrix(&self.basis) {
            return fail("change of basis is not unimodular");
        }
        if !self.t_prime.is_even() {
            return fail("T′ is odd");
        }
        let u = lattice::hyperbolic();
        let expected = u.power(2).direct_sum(&self.t_prime);
        if expected.gram() != self.halved.gram() {
            return fail("halved lattice is not U² ⊕ T′");
        }
        let doubled = self.halved.twist(2)?;
        if &self.basis.congruence(self.lattice.gram()) != doubled.gram() {
            return fail("basis does not bring the form to U(2)² ⊕ T′(2)");
        }
        Ok(())
    }
}

fn named_remainder(gram: IntMatrix) -> Result<Lattice> {
    if gram.rows() == 0 {
        return Ok(Lattice::zero());
    }
    if gram.rows() == 1 {
        return Ok(lattice::rank1_big(&gram[(0, 0)]));
    }
    Lattice::new("T'", gram)
}

fn decomposition(l: &Lattice, basis: IntMatrix, half_gram: &IntMatrix) -> Result<KummerDecomposition> {
    let r = half_gram.rows();
    let rest: Vec<usize> = (4..r).collect();
    let t_prime = named_remainder(half_gram.select(&rest, &rest))?;
    let halved = lattice::hyperbolic().power(2).direct_sum(&t_prime);
    let mut name = String::from("U^2");
    if t_prime.rank() > 0 {
        name = format!("U^2+{}", t_prime.name());
    }
    let d = KummerDecomposition {
        lattice: l.clone(),
        t_prime,
        halved: halved.with_name(name),
        basis,
    };
    d.verify()?;
    Ok(d)
}

/// Decides whether `L ≅ U(2)² ⊕ T′(2)` with T′ even. Parity and signature
/// obstructions refute; otherwise the shipped block structure is tried
/// first and then hyperbolic pairs in a coordinate box.
pub fn kummer_halving(l: &Lattice) -> Result<Outcome<KummerDecomposition>> {
    let g = l.gram();
    let r = l.rank();
    let two = int(2);
    let four = int(4);
    if r < 4 {
        return Ok(Outcome::Refuted(format!("rank {r} is below the rank of U(2)²")));
    }
    if (0..r).any(|i| (0..r).any(|j| !(&g[(i, j)] % &two).is_zero())) {
        return Ok(Outcome::Refuted("Gram matrix has odd entries".into()));
    }
    if (0..r).any(|i| !(&g[(i, i)] % &four).is_zero()) {
        return Ok(Outcome::Refuted("half the form is odd".into()));
    }
    let sig = l.signature();
    if sig.s_zero != 0 {
        return Ok(Outcome::Refuted("degenerate".into()));
    }
    if sig.s_plus < 2 || sig.s_minus < 2 {
        return Ok(Outcome::Refuted(format!("signature {sig} cannot contain U(2)²")));
    }
    let half = g.map(|x| x / &two);

    let top: Vec<usize> = (0..4).collect();
    let rest: Vec<usize> = (4..r).collect();
    let u2 = lattice::hyperbolic().power(2);
    if half.select(&top, &top) == *u2.gram() && half.select(&top, &rest).is_zero() {
        return Ok(Outcome::Found(decomposition(l, IntMatrix::identity(r), &half)?));
    }

    let Some(p1) = split_hyperbolic(&half)? else {
        return Ok(Outcome::Unknown(format!("no hyperbolic pair in [-{KUMMER_BOX}, {KUMMER_BOX}]")));
    };
    let h1 = p1.congruence(&half);
    let inner: Vec<usize> = (2..r).collect();
    let Some(p2) = split_hyperbolic(&h1.select(&inner, &inner))? else {
        return Ok(Outcome::Unknown(format!(
            "no second hyperbolic pair in [-{KUMMER_BOX}, {KUMMER_BOX}]"
        )));
    };
    let lift = IntMatrix::identity(2).block_diag(&p2);
    let basis = &p1 * &lift;
    let final_half = basis.congruence(&half);
    Ok(Outcome::Found(decomposition(l, basis, &final_half)?))
}

/// Finds e, f with e² = f² = 0 and e·f = 1 and returns a unimodular basis
/// `[e, f, complement…]` with the complement orthogonal to both.
fn split_hyperbolic(h: &IntMatrix) -> Result<Option<IntMatrix>> {
    let r = h.rows();
    let Some(g): Option<Vec<Vec<i64>>> = (0..r)
        .map(|i| (0..r).map(|j| h[(i, j)].to_i64()).collect())
        .collect()
    else {
        return Ok(None);
    };
    let isotropic: Vec<Vec<i64>> = small_box(r, KUMMER_BOX)
        .into_iter()
        .filter(|v| v.iter().any(|&x| x != 0) && dot_small(&g, v, v) == 0)
        .collect();
    for e in &isotropic {
        let ge: Vec<i64> = (0..r).map(|j| (0..r).map(|i| e[i] * g[i][j]).sum()).collect();
        let Some(f) = isotropic
            .iter()
            .find(|f| f.iter().zip(&ge).map(|(a, b)| a * b).sum::<i64>() == 1)
        else {
            continue;
        };
        let e_big: Vec<BigInt> = e.iter().map(|&x| int(x)).collect();
        let f_big: Vec<BigInt> = f.iter().map(|&x| int(x)).collect();
        // x − (x·f)e − (x·e)f is orthogonal to e and f
        let projections: Vec<Vec<BigInt>> = (0..r)
            .map(|j| {
                let xe = int(ge[j]);
                let xf: BigInt = (0..r).map(|i| int(f[i] * g[i][j])).sum();
                (0..r)
                    .map(|i| {
                        let unit = if i == j { BigInt::one() } else { BigInt::zero() };
                        unit - &xf * &e_big[i] - &xe * &f_big[i]
                    })
                    .collect()
            })
            .collect();
        let complement = column_hnf(&IntMatrix::from_columns(r, &projections));
        let mut cols = vec![e_big, f_big];
        cols.extend((0..complement.cols()).map(|j| complement.column(j)));
        let basis = IntMatrix::from_columns(r, &cols);
        if !is_unimodular_matrix(&basis) {
            return Err(Error::Verification("hyperbolic splitting is not unimodular".into()));
        }
        return Ok(Some(basis));
    }
    Ok(None)
}

/// H with L = H(2), when every Gram entry of L is even.
pub fn halve(l: &Lattice) -> Option<Lattice> {
    let two = int(2);
    let g = l.gram();
    if g.to_rows().iter().flatten().any(|x| !x.is_even()) {
        return None;
    }
    let name = match l.name().strip_suffix("(2)") {
        Some(base) if base.starts_with('(') && base.ends_with(')') => base[1..base.len() - 1].to_string(),
        Some(base) => base.to_string(),
        None => format!("({})(1/2)", l.name()),
    };
    Lattice::new(name, g.map(|x| x / &two)).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LinkKind {
    QIsometry,
    PrimitiveEmbeddingU3,
    KummerHalving,
    #[serde(rename = "SHARED_An")]
    SharedAn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    /// Rational isometry between the two ends.
    RationalIsometry { map: RationalMap },
    /// Primitive embedding of the subject into U³.
    Embedding { map: LatticeMap },
    /// Both lattices U² ⊕ ⟨−2n⟩ embed primitively in U³; the isogeny of
    /// the attached abelian surfaces is asserted, not derived.
    SharedAn { n: [i64; 2] },
    Kummer { decomposition: KummerDecomposition },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub kind: LinkKind,
    pub note: String,
    pub asserted: bool,
    pub evidence: Evidence,
}

/// What a link says about the walk along the chain.
enum Step {
    /// A fact about the current lattice.
    Fact(Lattice),
    /// Moves between two lattices (either direction).
    Edge(Lattice, Lattice),
}

impl Link {
    fn q_isometry(k: i64, m: i64, n: i64) -> Result<Link> {
        let map = rational_isometry_t_to_tn(k, m, n)?;
        Ok(Link {
            kind: LinkKind::QIsometry,
            note: format!("{} ⊗ Q ≅ {} ⊗ Q", map.src.name(), map.dst.name()),
            asserted: false,
            evidence: Evidence::RationalIsometry { map },
        })
    }

    fn embedding(n: i64) -> Result<Link> {
        let map = embed_tn_in_u3(n)?;
        Ok(Link {
            kind: LinkKind::PrimitiveEmbeddingU3,
            note: format!("{} ↪ U³ primitively", map.src.name()),
            asserted: false,
            evidence: Evidence::Embedding { map },
        })
    }

    fn shared(n: i64, n2: i64) -> Link {
        let pair = [n.min(n2), n.max(n2)];
        Link {
            kind: LinkKind::SharedAn,
            note: format!(
                "abelian surfaces A_{} and A_{} share isogenous B-factors",
                pair[0], pair[1]
            ),
            asserted: true,
            evidence: Evidence::SharedAn { n: pair },
        }
    }

    fn kummer(decomposition: KummerDecomposition) -> Link {
        Link {
            kind: LinkKind::KummerHalving,
            note: format!(
                "{} ≅ ({})(2)",
                decomposition.lattice.name(),
                decomposition.halved.name()
            ),
            asserted: false,
            evidence: Evidence::Kummer { decomposition },
        }
    }

    /// Re-checks the evidence from scratch.
    pub fn verify(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Verification(m));
        match (&self.kind, &self.evidence) {
            (LinkKind::QIsometry, Evidence::RationalIsometry { map }) => {
                if !map.is_isometric_embedding() || map.src.rank() != map.dst.rank() {
                    return fail(format!("{} is not a rational isometry", self.note));
                }
            }
            (LinkKind::PrimitiveEmbeddingU3, Evidence::Embedding { map }) => {
                if map.dst.gram() != lattice::torus_lattice().gram() {
                    return fail("embedding target is not U³".into());
                }
                if !map.is_primitive()? {
                    return fail(format!("{} is not primitive", self.note));
                }
            }
            (LinkKind::SharedAn, Evidence::SharedAn { n }) => {
                if n[0] > n[1] {
                    return fail("shared pair is not sorted".into());
                }
                for &x in n {
                    if !embed_tn_in_u3(x)?.is_primitive()? {
                        return fail(format!("U^2+<{}> does not embed in U³", -2 * x));
                    }
                }
            }
            (LinkKind::KummerHalving, Evidence::Kummer { decomposition }) => decomposition.verify()?,
            _ => return fail(format!("{:?} link carries mismatched evidence", self.kind)),
        }
        Ok(())
    }

    fn step(&self) -> Result<Step> {
        Ok(match &self.evidence {
            Evidence::RationalIsometry { map } => Step::Edge(map.src.clone(), map.dst.clone()),
            Evidence::Embedding { map } => Step::Fact(map.src.clone()),
            Evidence::SharedAn { n } => Step::Edge(lattice::u2_plus(n[0])?, lattice::u2_plus(n[1])?),
            Evidence::Kummer { decomposition } => Step::Fact(decomposition.lattice.clone()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoint {
    pub label: String,
    pub lattice: Lattice,
}

impl Endpoint {
    pub fn twisted(k: i64, m: i64, n: i64) -> Result<Self> {
        Ok(Endpoint {
            label: format!("X({k},{m},{n})"),
            lattice: lattice::twisted_t(k, m, n)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceCertificate {
    pub left: Endpoint,
    pub right: Endpoint,
    pub chain: Vec<Link>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    pub verdict: bool,
}

impl CorrespondenceCertificate {
    /// Verifies every link and that consecutive links connect the two
    /// endpoints.
    pub fn replay(&self) -> Result<()> {
        for link in &self.chain {
            link.verify()?;
        }
        let mut here = self.left.lattice.gram().clone();
        for (i, link) in self.chain.iter().enumerate() {
            match link.step()? {
                Step::Fact(subject) => {
                    if subject.gram() != &here {
                        return Err(Error::Verification(format!("link {i} is about another lattice")));
                    }
                }
                Step::Edge(a, b) => {
                    here = if a.gram() == &here {
                        b.gram().clone()
                    } else if b.gram() == &here {
                        a.gram().clone()
                    } else {
                        return Err(Error::Verification(format!("link {i} does not continue the chain")));
                    };
                }
            }
        }
        if &here != self.right.lattice.gram() {
            return Err(Error::Verification("chain does not end at the right endpoint".into()));
        }
        if !self.verdict {
            return Err(Error::Verification("certificate is not marked verified".into()));
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }

    /// Parses and replays a serialized certificate.
    pub fn from_json_verified(s: &str) -> Result<Self> {
        let c: CorrespondenceCertificate = serde_json::from_str(s)?;
        c.replay()?;
        Ok(c)
    }
}

fn check_params(xs: &[i64]) -> Result<()> {
    if let Some(bad) = xs.iter().find(|&&x| x < 1) {
        return Err(Error::InvalidArgument(format!("chain parameters must be ≥ 1, got {bad}")));
    }
    Ok(())
}

/// T(k,m,n) ≅_Q U²⊕⟨−2n⟩ ↪ U³, shared A_n factors, U³ ↩ U²⊕⟨−2n′⟩ ≅_Q
/// T(k′,m′,n′). The two halves store identical link evidence so the
/// reversed chain is the chain read backwards.
pub fn correspondence_chain(
    k: i64,
    m: i64,
    n: i64,
    k2: i64,
    m2: i64,
    n2: i64,
) -> Result<CorrespondenceCertificate> {
    check_params(&[k, m, n, k2, m2, n2])?;
    let chain = vec![
        Link::q_isometry(k, m, n)?,
        Link::embedding(n)?,
        Link::shared(n, n2),
        Link::embedding(n2)?,
        Link::q_isometry(k2, m2, n2)?,
    ];
    let mut cert = CorrespondenceCertificate {
        left: Endpoint::twisted(k, m, n)?,
        right: Endpoint::twisted(k2, m2, n2)?,
        chain,
        metadata: BTreeMap::new(),
        verdict: true,
    };
    cert.replay()?;
    cert.verdict = true;
    Ok(cert)
}

/// The n = 1 chain between X₁ = X(1,1,1) and X₂ = X(2,2,2), with the
/// Jacobian of a genus-2 curve on the abelian side and the halving of
/// T(2,2,2) appended.
pub fn jacobian_baseline() -> Result<CorrespondenceCertificate> {
    let mut cert = correspondence_chain(1, 1, 1, 2, 2, 2)?;
    cert.left.label = "X1 = X(1,1,1)".into();
    cert.right.label = "X2 = X(2,2,2)".into();
    let t222 = lattice::twisted_t(2, 2, 2)?;
    let decomposition = match kummer_halving(&t222)? {
        Outcome::Found(d) => d,
        other => {
            return Err(Error::Verification(format!(
                "T(2,2,2) did not halve: {}",
                other.label()
            )))
        }
    };
    if decomposition.halved.gram() != lattice::twisted_t(1, 1, 1)?.gram() {
        return Err(Error::Verification("T(2,2,2) does not halve to T(1,1,1)".into()));
    }
    cert.chain.push(Link::kummer(decomposition));
    let meta = [
        ("abelian_side", "JC"),
        ("T_JC", "U^2+<-2>"),
        ("polarization", "E principal polarization, E^2 = 2"),
        ("kummer", "T(2,2,2) = T(1,1,1)(2)"),
    ];
    cert.metadata = meta.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    cert.replay()?;
    Ok(cert)
}

/// Triples with `1 ≤ k ≤ K`, `1 ≤ m ≤ M`, `1 ≤ n ≤ N`.
pub fn grid(bounds: [i64; 3]) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for k in 1..=bounds[0] {
        for m in 1..=bounds[1] {
            for n in 1..=bounds[2] {
                out.push((k, m, n));
            }
        }
    }
    out
}

/// Builds, serializes, reloads and replays the chain for every ordered pair
/// of grid triples.
pub fn sweep_chains(bounds: [i64; 3]) -> Vec<((i64, i64, i64), (i64, i64, i64), Result<()>)> {
    use rayon::prelude::*;
    let g = grid(bounds);
    let pairs: Vec<_> = g.iter().flat_map(|&a| g.iter().map(move |&b| (a, b))).collect();
    pairs
        .into_par_iter()
        .map(|(a, b)| {
            let r = correspondence_chain(a.0, a.1, a.2, b.0, b.1, b.2)
                .and_then(|c| CorrespondenceCertificate::from_json_verified(&c.to_json_string()).map(|_| ()));
            (a, b, r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{hyperbolic, rank1, twisted_t, u2_plus};

    #[test]
    fn shioda_inose_family() {
        for n in 1..6 {
            let map = admits_shioda_inose(&u2_plus(n).unwrap()).unwrap().found().unwrap();
            assert_eq!(map.matrix, embed_tn_in_u3(n).unwrap().matrix);
        }
        let u3 = lattice::torus_lattice();
        let id = admits_shioda_inose(&u3).unwrap().found().unwrap();
        assert_eq!(id.matrix, IntMatrix::identity(6));
    }

    #[test]
    fn shioda_inose_search() {
        // U ⊕ <-4> is not in the recognized families
        let l = hyperbolic().direct_sum(&rank1(-4));
        let map = admits_shioda_inose(&l).unwrap().found().unwrap();
        assert!(map.is_primitive().unwrap());
        assert!(matches!(admits_shioda_inose(&rank1(3)).unwrap(), Outcome::Refuted(_)));
        assert!(matches!(
            admits_shioda_inose(&hyperbolic().power(2).direct_sum(&hyperbolic().twist(2).unwrap())).unwrap(),
            Outcome::Refuted(_)
        ));
        assert!(admits_shioda_inose(&lattice::k3_lattice()).is_err());
        assert!(admits_shioda_inose(&lattice::e8(1).unwrap()).is_err());
    }

    #[test]
    fn halving_examples() {
        let u2 = hyperbolic().twist(2).unwrap().power(2);
        for n in 1..=4 {
            let d = kummer_halving(&u2.direct_sum(&rank1(-4 * n))).unwrap().found().unwrap();
            assert_eq!(d.t_prime.gram(), rank1(-2 * n).gram());
        }
        let t111 = twisted_t(1, 1, 1).unwrap();
        assert!(matches!(kummer_halving(&t111).unwrap(), Outcome::Refuted(_)));
        let d = kummer_halving(&twisted_t(2, 2, 2).unwrap()).unwrap().found().unwrap();
        assert_eq!(d.halved.gram(), t111.gram());
        assert_eq!(d.halved.name(), "U^2+<-2>");
    }

    #[test]
    fn halving_after_base_change() {
        // U(2) ⊕ U(2) ⊕ <-4> in a scrambled basis
        let l = hyperbolic().twist(2).unwrap().power(2).direct_sum(&rank1(-4));
        let p = crate::matrix::int_matrix(&[
            &[1, 1, 0, 0, 0],
            &[0, 1, 0, 0, 1],
            &[0, 0, 1, 0, 0],
            &[1, 0, 1, 1, 0],
            &[0, 0, 0, 0, 1],
        ]);
        let scrambled = l.pullback("L'", &p).unwrap();
        let d = kummer_halving(&scrambled).unwrap().found().unwrap();
        assert_eq!(d.t_prime.gram(), rank1(-2).gram());
    }

    #[test]
    fn halve_inverts_twist() {
        let l = twisted_t(1, 2, 3).unwrap();
        assert_eq!(halve(&l.twist(2).unwrap()).unwrap(), l);
        assert!(halve(&l).is_none());
    }

    #[test]
    fn chain_one_to_two() {
        let c = correspondence_chain(1, 1, 1, 2, 2, 2).unwrap();
        assert_eq!(c.chain.len(), 5);
        assert_eq!(c.left.lattice.name(), "T(1,1,1)");
        assert_eq!(c.right.lattice.name(), "T(2,2,2)");
        assert!(c.chain.iter().filter(|l| l.asserted).all(|l| l.kind == LinkKind::SharedAn));
        CorrespondenceCertificate::from_json_verified(&c.to_json_string()).unwrap();
    }

    #[test]
    fn chain_reversal() {
        let a = correspondence_chain(1, 2, 3, 3, 1, 2).unwrap();
        let b = correspondence_chain(3, 1, 2, 1, 2, 3).unwrap();
        let mut rev = b.chain.clone();
        rev.reverse();
        assert_eq!(a.chain, rev);
    }

    #[test]
    fn broken_chain_rejected() {
        let mut c = correspondence_chain(1, 1, 1, 2, 2, 2).unwrap();
        c.chain.swap(0, 4);
        assert!(c.replay().is_err());
        let mut c = correspondence_chain(1, 1, 1, 2, 2, 2).unwrap();
        c.chain.remove(2);
        assert!(c.replay().is_err());
        assert!(correspondence_chain(0, 1, 1, 1, 1, 1).is_err());
    }

    #[test]
    fn jacobian() {
        let c = jacobian_baseline().unwrap();
        assert_eq!(c.left.lattice.gram(), twisted_t(1, 1, 1).unwrap().gram());
        assert!(c.chain.iter().any(|l| l.kind == LinkKind::KummerHalving));
        assert_eq!(c.metadata["T_JC"], "U^2+<-2>");
        CorrespondenceCertificate::from_json_verified(&c.to_json_string()).unwrap();
    }
}
