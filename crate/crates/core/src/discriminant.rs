//! Discriminant groups L*/L of even lattices with their finite quadratic
//! forms, and genus comparison by discriminant-form isomorphism search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::lattice::Lattice;
use crate::matrix::RatMatrix;
use crate::normal_form::smith_normal_form;

/// Largest group order `same_genus` will search.
pub const GENUS_ORDER_BOUND: u64 = 10_000;

/// `x mod m` in `[0, m)`.
pub fn rat_mod(x: &BigRational, m: &BigRational) -> BigRational {
    x - m * (x / m).floor()
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantGroup {
    /// Cyclic factor orders, each dividing the next, ones dropped.
    #[serde(with = "json::bigints")]
    pub divisors: Vec<BigInt>,
    /// Generators of L*/L in lattice-basis coordinates.
    #[serde(with = "generator_list")]
    pub generators: Vec<Vec<BigRational>>,
    /// `q(gᵢ) mod 2`.
    #[serde(with = "json::rationals")]
    pub qvalues: Vec<BigRational>,
    /// `b(gᵢ, gⱼ) mod 1`, row-major.
    #[serde(with = "json::rat_matrix")]
    pub bvalues: RatMatrix,
}

mod generator_list {
    use super::*;
    use serde::{Deserializer, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(gs: &[Vec<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Value> = gs
            .iter()
            .map(|g| Value::Array(g.iter().map(json::rat_to_value).collect()))
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigRational>>, D::Error> {
        let v = Vec::<Vec<Value>>::deserialize(d)?;
        v.iter()
            .map(|g| {
                g.iter()
                    .map(|x| json::rat_from_value(x).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    /// `q(Σ aᵢ gᵢ) mod 2`.
    pub fn q_of(&self, coeffs: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..coeffs.len() {
            if coeffs[i].is_zero() {
                continue;
            }
            let ai = BigRational::from_integer(coeffs[i].clone());
            acc += &ai * &ai * &self.qvalues[i];
            for j in i + 1..coeffs.len() {
                let aj = BigRational::from_integer(coeffs[j].clone());
                acc += two() * &ai * aj * &self.bvalues[(i, j)];
            }
        }
        rat_mod(&acc, &two())
    }

    /// `b(Σ aᵢ gᵢ, Σ cⱼ gⱼ) mod 1`.
    pub fn b_of(&self, a: &[BigInt], c: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..a.len() {
            for j in 0..c.len() {
                if a[i].is_zero() || c[j].is_zero() {
                    continue;
                }
                acc += BigRational::from_integer(&a[i] * &c[j]) * &self.bvalues[(i, j)];
            }
        }
        rat_mod(&acc, &BigRational::one())
    }

    /// All elements as coefficient vectors; `None` above the order bound.
    pub fn elements(&self, bound: u64) -> Option<Vec<Vec<BigInt>>> {
        let order = self.order().to_u64()?;
        if order > bound {
            return None;
        }
        let ds: Vec<u64> = self.divisors.iter().map(|d| d.to_u64().unwrap()).collect();
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = vec![0u64; ds.len()];
        loop {
            out.push(cur.iter().map(|&x| BigInt::from(x)).collect());
            let mut i = 0;
            loop {
                if i == ds.len() {
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < ds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

/// `q(x) = x·x mod 2` for a rational vector in lattice coordinates.
pub fn q_value(l: &Lattice, x: &[BigRational]) -> BigRational {
    rat_mod(&bilinear(l, x, x), &two())
}

fn bilinear(l: &Lattice, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let g = l.gram();
    let mut acc = BigRational::zero();
    for i in 0..g.rows() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..g.cols() {
            if !g[(i, j)].is_zero() && !y[j].is_zero() {
                acc += &x[i] * BigRational::from_integer(g[(i, j)].clone()) * &y[j];
            }
        }
    }
    acc
}

/// L*/L via the Smith form `u·G·v = D`: the dual lattice is spanned by the
/// columns of `v·D⁻¹`.
pub fn discriminant_group(l: &Lattice) -> Result<DiscriminantGroup> {
    if l.is_degenerate() {
        return Err(Error::Degenerate);
    }
    if !l.is_even() {
        return Err(Error::OddLattice(l.name().to_string()));
    }
    let snf = smith_normal_form(l.gram());
    let mut divisors = Vec::new();
    let mut generators = Vec::new();
    for (i, d) in snf.divisors.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let dq = BigRational::from_integer(d.clone());
        generators.push(
            snf.v
                .column(i)
                .into_iter()
                .map(|x| BigRational::from_integer(x) / &dq)
                .collect::<Vec<_>>(),
        );
        divisors.push(d.clone());
    }
    let qvalues = generators.iter().map(|g| q_value(l, g)).collect();
    let k = generators.len();
    let bvalues = RatMatrix::from_fn(k, k, |i, j| {
        rat_mod(&bilinear(l, &generators[i], &generators[j]), &BigRational::one())
    });
    Ok(DiscriminantGroup {
        divisors,
        generators,
        qvalues,
        bvalues,
    })
}

/// Images of the left generators in right-group coordinates.
pub type FormIsomorphism = Vec<Vec<BigInt>>;

/// Search for an isomorphism of discriminant forms. A map preserving the
/// nondegenerate `b` is injective, so matching orders make it bijective.
pub fn find_form_isomorphism(
    a: &DiscriminantGroup,
    b: &DiscriminantGroup,
    bound: u64,
) -> Result<Option<FormIsomorphism>> {
    for g in [a, b] {
        if g.order() > BigInt::from(bound) {
            return Err(Error::GroupTooLarge {
                order: g.order().to_string(),
                bound,
            });
        }
    }
    if a.divisors != b.divisors {
        return Ok(None);
    }
    let elems = b.elements(bound).expect("order checked");
    let candidates: Vec<Vec<usize>> = (0..a.divisors.len())
        .map(|i| {
            let d = &a.divisors[i];
            (0..elems.len())
                .filter(|&e| {
                    let killed: Vec<BigInt> = elems[e].iter().map(|x| x * d).collect();
                    let is_zero = killed
                        .iter()
                        .zip(&b.divisors)
                        .all(|(x, m)| x.mod_floor(m).is_zero());
                    is_zero && b.q_of(&elems[e]) == a.qvalues[i]
                })
                .collect()
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    if backtrack(a, b, &elems, &candidates, &mut chosen) {
        Ok(Some(chosen.into_iter().map(|e| elems[e].clone()).collect()))
    } else {
        Ok(None)
    }
}

fn backtrack(
    a: &DiscriminantGroup,
    b: &DiscriminantGroup,
    elems: &[Vec<BigInt>],
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
) -> bool {
    let i = chosen.len();
    if i == candidates.len() {
        return true;
    }
    for &e in &candidates[i] {
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(j, &f)| b.b_of(&elems[e], &elems[f]) == a.bvalues[(i, j)]);
        if ok {
            chosen.push(e);
            if backtrack(a, b, elems, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Checks that `iso` carries q and b of `a` onto those of `b` and is a
/// bijection.
pub fn verify_form_isomorphism(a: &DiscriminantGroup, b: &DiscriminantGroup, iso: &FormIsomorphism) -> Result<()> {
    let fail = |m: &str| Err(Error::Verification(m.to_string()));
    if iso.len() != a.divisors.len() || a.order() != b.order() {
        return fail("shape mismatch");
    }
    for (i, h) in iso.iter().enumerate() {
        let killed: Vec<BigInt> = h.iter().map(|x| x * &a.divisors[i]).collect();
        if !killed.iter().zip(&b.divisors).all(|(x, m)| x.mod_floor(m).is_zero()) {
            return fail("image order does not divide source order");
        }
        if b.q_of(h) != a.qvalues[i] {
            return fail("q not preserved");
        }
        for (j, h2) in iso.iter().enumerate() {
            if b.b_of(h, h2) != a.bvalues[(i, j)] {
                return fail("b not preserved");
            }
        }
    }
    // injectivity: no nonzero element of a maps to 0
    let elems = a.elements(GENUS_ORDER_BOUND).ok_or_else(|| Error::GroupTooLarge {
        order: a.order().to_string(),
        bound: GENUS_ORDER_BOUND,
    })?;
    let mut kernel = 0;
    for x in &elems {
        let img: Vec<BigInt> = (0..b.divisors.len())
            .map(|k| {
                let s: BigInt = x.iter().zip(iso).map(|(c, h)| c * &h[k]).sum();
                s.mod_floor(&b.divisors[k])
            })
            .collect();
        if img.iter().all(Zero::is_zero) {
            kernel += 1;
        }
    }
    if kernel != 1 {
        return fail("map is not injective");
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusCertificate {
    pub left: Lattice,
    pub right: Lattice,
    pub signature_match: bool,
    pub left_group: DiscriminantGroup,
    pub right_group: DiscriminantGroup,
    #[serde(with = "option_iso")]
    pub isomorphism: Option<FormIsomorphism>,
    pub verdict: bool,
}

mod option_iso {
    use super::*;
    use serde::{Deserializer, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(x: &Option<FormIsomorphism>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            None => s.serialize_none(),
            Some(rows) => rows
                .iter()
                .map(|r| r.iter().map(json::int_to_value).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<FormIsomorphism>, D::Error> {
        let v = Option::<Vec<Vec<Value>>>::deserialize(d)?;
        v.map(|rows| {
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|x| json::int_from_value(x).map_err(serde::de::Error::custom))
                        .collect()
                })
                .collect()
        })
        .transpose()
    }
}

impl GenusCertificate {
    pub fn replay(&self) -> Result<()> {
        let lg = discriminant_group(&self.left)?;
        let rg = discriminant_group(&self.right)?;
        if lg != self.left_group || rg != self.right_group {
            return Err(Error::Verification("recorded discriminant groups differ".into()));
        }
        if self.signature_match != (self.left.signature() == self.right.signature()) {
            return Err(Error::Verification("signature flag is wrong".into()));
        }
        match &self.isomorphism {
            Some(iso) => verify_form_isomorphism(&lg, &rg, iso)?,
            None => {
                if find_form_isomorphism(&lg, &rg, GENUS_ORDER_BOUND)?.is_some() {
                    return Err(Error::Verification("an isomorphism exists".into()));
                }
            }
        }
        if self.verdict != (self.signature_match && self.isomorphism.is_some()) {
            return Err(Error::Verification("verdict does not follow".into()));
        }
        Ok(())
    }
}

/// Genus comparison with its evidence.
pub fn genus_certificate(l1: &Lattice, l2: &Lattice) -> Result<GenusCertificate> {
    let a = discriminant_group(l1)?;
    let b = discriminant_group(l2)?;
    let signature_match = l1.signature() == l2.signature();
    let isomorphism = find_form_isomorphism(&a, &b, GENUS_ORDER_BOUND)?;
    let verdict = signature_match && isomorphism.is_some();
    Ok(GenusCertificate {
        left: l1.clone(),
        right: l2.clone(),
        signature_match,
        left_group: a,
        right_group: b,
        isomorphism,
        verdict,
    })
}

/// Same signature and isomorphic discriminant forms.
pub fn same_genus(l1: &Lattice, l2: &Lattice) -> Result<bool> {
    Ok(genus_certificate(l1, l2)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{hyperbolic, rank1, twisted_t, u2_plus};
    use crate::matrix::int;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(int(p), int(q))
    }

    #[test]
    fn unimodular_is_trivial() {
        assert!(discriminant_group(&hyperbolic()).unwrap().is_trivial());
        assert!(discriminant_group(&crate::lattice::k3_lattice()).unwrap().is_trivial());
    }

    #[test]
    fn cyclic_rank_one() {
        for n in 1..8 {
            let g = discriminant_group(&rank1(-2 * n)).unwrap();
            assert_eq!(g.divisors, vec![int(2 * n)]);
            assert_eq!(g.qvalues, vec![rat_mod(&r(-1, 2 * n), &r(2, 1))]);
        }
    }

    #[test]
    fn twisted_orders() {
        for (k, m, n) in [(1, 1, 1), (2, 3, 1), (2, 2, 2), (3, 1, 4)] {
            let g = discriminant_group(&twisted_t(k, m, n).unwrap()).unwrap();
            assert_eq!(g.order(), int(2 * k * k * m * m * n));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(discriminant_group(&rank1(3)), Err(Error::OddLattice(_))));
        assert_eq!(discriminant_group(&rank1(0)), Err(Error::Degenerate));
        let big = rank1(-20_002);
        assert!(matches!(same_genus(&big, &big), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn genus_examples() {
        let t = u2_plus(3).unwrap();
        assert!(same_genus(&t, &t).unwrap());
        let a = rank1(-2).direct_sum(&hyperbolic());
        let b = rank1(2).direct_sum(&hyperbolic());
        assert!(!same_genus(&a, &b).unwrap());
        // <-2> vs <-6>+... different orders
        assert!(!same_genus(&rank1(-2), &rank1(-6)).unwrap());
        // <-6> and <-6>: q = -1/6 vs, under x -> 5x, 25·(-1/6) ≡ -1/6
        assert!(same_genus(&rank1(-6), &rank1(-6)).unwrap());
        // <2> vs <-2>: same group, q = 1/2 vs 3/2
        let c = genus_certificate(&rank1(2).direct_sum(&hyperbolic()), &rank1(-2).direct_sum(&hyperbolic()))
            .unwrap();
        assert!(c.isomorphism.is_none());
        c.replay().unwrap();
    }

    #[test]
    fn kummer_vs_cyclic() {
        let u = hyperbolic();
        let a = u.twist(2).unwrap().power(2).direct_sum(&rank1(-4));
        let b = u.power(2).direct_sum(&rank1(-64));
        let c = genus_certificate(&a, &b).unwrap();
        assert_eq!(a.determinant(), b.determinant());
        // (Z/2)^4 + Z/4 against Z/64
        assert!(!c.verdict);
        c.replay().unwrap();
    }

    #[test]
    fn certificate_round_trip() {
        let c = genus_certificate(&twisted_t(2, 1, 3).unwrap(), &twisted_t(2, 1, 3).unwrap()).unwrap();
        assert!(c.verdict);
        let back: GenusCertificate = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        back.replay().unwrap();
    }
}
