//! Equivalence of quadratic forms over Q. Two non-degenerate forms are
//! Q-isometric iff they agree in rank, signature, discriminant square class
//! and Hasse invariant at every prime.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, is_prime, legendre, rational_square_class, split_valuation};
use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{self, diagonalize_with_basis, Lattice, Signature};
use crate::matrix::{int, RatMatrix};

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::NotPrime(p.to_string()))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "∞" => Ok(Place::Infinity),
            _ => {
                let p = s.parse::<u64>().map_err(|_| Error::NotPrime(s.to_string()))?;
                Place::prime(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A form diagonalized over Q; entries are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalForm {
    #[serde(with = "json::rationals")]
    pub entries: Vec<BigRational>,
}

impl DiagonalForm {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        if entries.iter().any(Zero::is_zero) {
            return Err(Error::Degenerate);
        }
        Ok(DiagonalForm { entries })
    }

    pub fn from_integers(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| BigRational::from_integer(int(x))).collect())
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn signature(&self) -> Signature {
        let pos = self.entries.iter().filter(|x| x.is_positive()).count();
        Signature::new(pos, self.rank() - pos, 0)
    }

    /// Squarefree representative of the determinant's square class.
    pub fn square_class(&self) -> BigInt {
        let det = self.entries.iter().fold(BigRational::one(), |acc, x| acc * x);
        rational_square_class(&det)
    }

    /// Square-class representatives of the entries.
    pub fn square_classes(&self) -> Vec<BigInt> {
        self.entries.iter().map(rational_square_class).collect()
    }

    /// Primes at which the entries are not units.
    pub fn bad_primes(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for x in &self.entries {
            for part in [x.numer(), x.denom()] {
                for p in arith::prime_divisors(part) {
                    out.insert(u64::try_from(p).expect("prime factor fits in 64 bits"));
                }
            }
        }
        out
    }
}

/// Diagonalization with the basis change recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagonalization {
    pub form: DiagonalForm,
    /// Columns are the new basis in old coordinates.
    #[serde(with = "json::rat_matrix")]
    pub basis: RatMatrix,
}

pub fn diagonalize(l: &Lattice) -> Result<Diagonalization> {
    let (entries, basis) = diagonalize_with_basis(l.gram());
    Ok(Diagonalization {
        form: DiagonalForm::new(entries)?,
        basis,
    })
}

pub fn diagonalize_over_q(l: &Lattice) -> Result<DiagonalForm> {
    Ok(diagonalize(l)?.form)
}

fn integral_class(x: &BigRational) -> BigInt {
    x.numer() * x.denom()
}

/// Hilbert symbol of two nonzero integers.
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, place: Place) -> i8 {
    let p = match place {
        Place::Infinity => {
            return if a.is_negative() && b.is_negative() { -1 } else { 1 };
        }
        Place::Prime(p) => BigInt::from(p),
    };
    let (alpha, u) = split_valuation(a, &p);
    let (beta, v) = split_valuation(b, &p);
    if p == int(2) {
        let eps = |x: &BigInt| u32::from(x.mod_floor(&int(4)) == int(3));
        let omega = |x: &BigInt| {
            let r = x.mod_floor(&int(8));
            u32::from(r == int(3) || r == int(5))
        };
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let eps_p = (&p - 1u32) / 2u32;
        let mut s: i8 = if (alpha * beta) % 2 == 1 && eps_p.is_odd() { -1 } else { 1 };
        if beta % 2 == 1 {
            s *= legendre(&u, &p);
        }
        if alpha % 2 == 1 {
            s *= legendre(&v, &p);
        }
        s
    }
}

/// `(a, b)_p`: +1 iff z² = a·x² + b·y² has a nontrivial solution over Q_p
/// (over R for the infinite place).
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument("Hilbert symbol of zero".into()));
    }
    if let Place::Prime(p) = place {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
    }
    Ok(hilbert_symbol_int(&integral_class(a), &integral_class(b), place))
}

/// `(a, b)_p` by searching for a primitive zero of a·x² + b·y² − z² modulo
/// p^k after reducing a and b to squarefree representatives. Slow; meant as
/// a cross-check of the closed formulas (k = 6 for p = 2, k = 3 otherwise
/// suffice).
pub fn hilbert_symbol_by_lifting(a: i64, b: i64, p: u64, k: u32) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("Hilbert symbol of zero".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let sf = |x: i64| i64::try_from(arith::squarefree_part(&int(x))).expect("fits");
    let (a, b) = (sf(a), sf(b));
    let q = (p as i64).pow(k);
    let p = p as i64;
    let mut roots: Vec<Vec<i64>> = vec![Vec::new(); q as usize];
    for z in 0..q {
        roots[(z * z % q) as usize].push(z);
    }
    for x in 0..q {
        for y in 0..q {
            let r = (a * x * x + b * y * y).rem_euclid(q) as usize;
            let primitive_xy = x % p != 0 || y % p != 0;
            if roots[r].iter().any(|z| primitive_xy || z % p != 0) {
                return Ok(1);
            }
        }
    }
    Ok(-1)
}

/// ∏_{i<j} (dᵢ, dⱼ)_p.
pub fn hasse_invariant(d: &DiagonalForm, place: Place) -> i8 {
    let classes: Vec<BigInt> = d.entries.iter().map(integral_class).collect();
    let mut s = 1;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            s *= hilbert_symbol_int(&classes[i], &classes[j], place);
        }
    }
    s
}

/// Outcome of a Q-equivalence test with all the local data it rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QEquivalenceCertificate {
    pub left: Lattice,
    pub right: Lattice,
    pub left_diagonal: Diagonalization,
    pub right_diagonal: Diagonalization,
    pub rank_match: bool,
    pub signature_match: bool,
    #[serde(with = "square_class_pair")]
    pub square_class: (BigInt, BigInt),
    pub hasse: BTreeMap<Place, (i8, i8)>,
    pub verdict: bool,
}

mod square_class_pair {
    use super::*;

    pub fn serialize<S: Serializer>(x: &(BigInt, BigInt), s: S) -> std::result::Result<S::Ok, S::Error> {
        [json::int_to_value(&x.0), json::int_to_value(&x.1)].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<(BigInt, BigInt), D::Error> {
        let [a, b] = <[serde_json::Value; 2]>::deserialize(d)?;
        let conv = |v| json::int_from_value(&v).map_err(serde::de::Error::custom);
        Ok((conv(a)?, conv(b)?))
    }
}

impl QEquivalenceCertificate {
    /// Places where the Hasse invariants differ.
    pub fn hasse_mismatches(&self) -> Vec<Place> {
        self.hasse
            .iter()
            .filter(|(_, (l, r))| l != r)
            .map(|(p, _)| *p)
            .collect()
    }

    /// Re-derives every field from the recorded lattices and
    /// diagonalizations.
    pub fn replay(&self) -> Result<()> {
        let check_diag = |l: &Lattice, d: &Diagonalization| -> Result<()> {
            let g = d.basis.congruence(&l.gram().to_rational());
            if g != RatMatrix::diagonal(&d.form.entries) {
                return Err(Error::Verification(format!(
                    "recorded diagonalization of {} is wrong",
                    l.name()
                )));
            }
            if d.basis.inverse().is_none() {
                return Err(Error::Verification("singular diagonalizing basis".into()));
            }
            Ok(())
        };
        check_diag(&self.left, &self.left_diagonal)?;
        check_diag(&self.right, &self.right_diagonal)?;
        let again = certificate_from(
            self.left.clone(),
            self.right.clone(),
            self.left_diagonal.clone(),
            self.right_diagonal.clone(),
        );
        if &again != self {
            return Err(Error::Verification("certificate fields do not replay".into()));
        }
        Ok(())
    }
}

fn hasse_places(a: &DiagonalForm, b: &DiagonalForm) -> Vec<Place> {
    let mut places = vec![Place::Infinity, Place::Prime(2)];
    let primes: BTreeSet<u64> = a.bad_primes().union(&b.bad_primes()).copied().collect();
    places.extend(primes.into_iter().filter(|&p| p != 2).map(Place::Prime));
    places
}

/// Hasse-Minkowski test on two diagonal forms.
pub fn forms_equivalent(a: &DiagonalForm, b: &DiagonalForm) -> bool {
    a.rank() == b.rank()
        && a.signature() == b.signature()
        && a.square_class() == b.square_class()
        && hasse_places(a, b)
            .into_iter()
            .all(|p| hasse_invariant(a, p) == hasse_invariant(b, p))
}

fn certificate_from(
    left: Lattice,
    right: Lattice,
    ld: Diagonalization,
    rd: Diagonalization,
) -> QEquivalenceCertificate {
    let rank_match = ld.form.rank() == rd.form.rank();
    let signature_match = ld.form.signature() == rd.form.signature();
    let square_class = (ld.form.square_class(), rd.form.square_class());
    let hasse: BTreeMap<Place, (i8, i8)> = hasse_places(&ld.form, &rd.form)
        .into_iter()
        .map(|p| (p, (hasse_invariant(&ld.form, p), hasse_invariant(&rd.form, p))))
        .collect();
    let verdict = rank_match
        && signature_match
        && square_class.0 == square_class.1
        && hasse.values().all(|(l, r)| l == r);
    QEquivalenceCertificate {
        left,
        right,
        left_diagonal: ld,
        right_diagonal: rd,
        rank_match,
        signature_match,
        square_class,
        hasse,
        verdict,
    }
}

/// Hasse-Minkowski decision of L1 ⊗ Q ≅ L2 ⊗ Q.
pub fn q_equivalent(l1: &Lattice, l2: &Lattice) -> Result<QEquivalenceCertificate> {
    let ld = diagonalize(l1)?;
    let rd = diagonalize(l2)?;
    Ok(certificate_from(l1.clone(), l2.clone(), ld, rd))
}

/// Compares (U(2)² ⊕ ⟨−4n⟩)(a₁a₂) with U² ⊕ ⟨−4n·a₁a₂⟩. Scaling by
/// a = a₁/a₂ agrees with scaling by a₁a₂ up to the square a₂².
pub fn scaled_kummer_equivalence(n: i64, a1: i64, a2: i64) -> Result<QEquivalenceCertificate> {
    for (label, v) in [("n", n), ("a1", a1), ("a2", a2)] {
        if v < 1 {
            return Err(Error::InvalidArgument(format!("{label} must be ≥ 1, got {v}")));
        }
    }
    let u = lattice::hyperbolic();
    let kummer = u.twist(2)?.power(2).direct_sum(&lattice::rank1(-4 * n));
    let left = kummer.twist(a1 * a2)?;
    let right = u.power(2).direct_sum(&lattice::rank1(-4 * n * a1 * a2));
    q_equivalent(&left, &right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{hyperbolic, rank1, twisted_t};

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(int(x))
    }

    #[test]
    fn diagonal_of_u() {
        let d = diagonalize_over_q(&hyperbolic()).unwrap();
        assert!(forms_equivalent(&d, &DiagonalForm::from_integers(&[1, -1]).unwrap()));
        assert!(!forms_equivalent(&d, &DiagonalForm::from_integers(&[1, 1]).unwrap()));
        assert_eq!(diagonalize_over_q(&rank1(-6)).unwrap().entries, vec![q(-6)]);
        assert_eq!(diagonalize_over_q(&rank1(0)), Err(Error::Degenerate));
    }

    #[test]
    fn diagonal_of_t111() {
        let d = diagonalize_over_q(&twisted_t(1, 1, 1).unwrap()).unwrap();
        let expected = DiagonalForm::from_integers(&[1, -1, 1, -1, -2]).unwrap();
        assert!(forms_equivalent(&d, &expected));
        assert!(d.square_classes().contains(&int(-2)));
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(3), Place::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Prime(3)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&q(2), &q(5), Place::Prime(5)).unwrap(), -1);
        assert!(matches!(
            hilbert_symbol(&q(2), &q(3), Place::Prime(9)),
            Err(Error::NotPrime(_))
        ));
        assert!(hilbert_symbol(&q(0), &q(3), Place::Prime(3)).is_err());
        // rational arguments reduce through their square class
        let half = BigRational::new(int(1), int(2));
        assert_eq!(
            hilbert_symbol(&half, &q(3), Place::Prime(3)).unwrap(),
            hilbert_symbol(&q(2), &q(3), Place::Prime(3)).unwrap()
        );
    }

    #[test]
    fn lifting_agrees_on_small_range() {
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                if a == 0 || b == 0 {
                    continue;
                }
                for (p, k) in [(2, 6), (3, 3), (5, 3)] {
                    assert_eq!(
                        hilbert_symbol(&q(a), &q(b), Place::Prime(p)).unwrap(),
                        hilbert_symbol_by_lifting(a, b, p, k).unwrap(),
                        "({a},{b})_{p}"
                    );
                }
            }
        }
    }

    #[test]
    fn hasse_examples() {
        let one = DiagonalForm::from_integers(&[7]).unwrap();
        assert_eq!(hasse_invariant(&one, Place::Prime(7)), 1);
        let ones = DiagonalForm::from_integers(&[1, 1, 1, 1]).unwrap();
        for p in [Place::Infinity, Place::Prime(2), Place::Prime(3)] {
            assert_eq!(hasse_invariant(&ones, p), 1);
        }
        let mm = DiagonalForm::from_integers(&[-1, -1]).unwrap();
        assert_eq!(hasse_invariant(&mm, Place::Infinity), -1);
    }

    #[test]
    fn t111_vs_t222() {
        let c = q_equivalent(&twisted_t(1, 1, 1).unwrap(), &twisted_t(2, 2, 2).unwrap()).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.square_class, (int(-2), int(-1)));
        assert!(c.rank_match && c.signature_match);
        c.replay().unwrap();
    }

    #[test]
    fn twisted_planes_are_rationally_hyperbolic() {
        let u = hyperbolic();
        for k in 1..12 {
            let c = q_equivalent(&u.twist(k).unwrap(), &u).unwrap();
            assert!(c.verdict, "U({k})");
        }
    }

    #[test]
    fn reflexive() {
        let t = twisted_t(3, 2, 5).unwrap();
        assert!(q_equivalent(&t, &t).unwrap().verdict);
    }

    #[test]
    fn kummer_scaling() {
        for n in 1..=10 {
            assert!(scaled_kummer_equivalence(n, 1, 1).unwrap().verdict);
        }
        assert!(scaled_kummer_equivalence(1, 1, 2).unwrap().verdict);
        assert!(scaled_kummer_equivalence(0, 1, 1).is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = scaled_kummer_equivalence(3, 2, 5).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: QEquivalenceCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        back.replay().unwrap();
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let mut c = q_equivalent(&twisted_t(1, 1, 1).unwrap(), &twisted_t(2, 2, 2).unwrap()).unwrap();
        c.verdict = true;
        assert!(c.replay().is_err());
    }
}
