mod oracles;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use k3lat::discriminant::{discriminant_group, genus_certificate, q_value, same_genus};
use k3lat::lattice::hyperbolic;
use k3lat::rational_forms::{q_equivalent, QEquivalenceCertificate};
use k3lat::{IntMatrix, Lattice};

use oracles::*;

/// Block diagonal even lattice: some hyperbolic planes plus ⟨2a⟩ entries.
fn even_lattice() -> impl Strategy<Value = Lattice> {
    (0usize..=2, prop::collection::vec((-6i64..=6).prop_filter("nonzero", |x| *x != 0), 1..=3)).prop_map(|(planes, diag)| {
        let mut l = hyperbolic().power(planes);
        for a in diag {
            l = l.direct_sum(&k3lat::lattice::rank1(2 * a));
        }
        l
    })
}

/// Product of elementary column operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2), 0..8).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n);
        for (i, j, c) in ops {
            if i == j {
                continue;
            }
            for r in 0..n {
                let add = &m[(r, j)] * BigInt::from(c);
                m[(r, i)] += add;
            }
        }
        m
    })
}

fn with_base_change() -> impl Strategy<Value = (Lattice, Lattice)> {
    even_lattice().prop_flat_map(|l| {
        let n = l.rank();
        (Just(l), unimodular(n)).prop_map(|(l, b)| {
            let moved = l.pullback("moved", &b).unwrap();
            (l, moved)
        })
    })
}

fn diagonal(entries: &[i64]) -> Lattice {
    entries.iter().fold(Lattice::zero(), |acc, &a| acc.direct_sum(&k3lat::lattice::rank1(a)))
}

fn small() -> impl Strategy<Value = i64> {
    (-12i64..=12).prop_filter("nonzero", |x| *x != 0)
}

/// Searches `a x² + b y² = c z²` with z ≠ 0 in a box.
fn represents(a: i64, b: i64, c: i64, bound: i64) -> bool {
    (-bound..=bound).any(|x| (-bound..=bound).any(|y| (1..=bound).any(|z| a * x * x + b * y * y == c * z * z)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_equivalence_is_reflexive_and_invariant((l, moved) in with_base_change()) {
        prop_assert!(q_equivalent(&l, &l).unwrap().verdict);
        let c = q_equivalent(&l, &moved).unwrap();
        prop_assert!(c.verdict);
        c.replay().unwrap();
    }

    #[test]
    fn q_equivalence_ignores_square_twists(l in even_lattice(), s in 1i64..5) {
        let twisted = l.twist(s * s).unwrap();
        prop_assert!(q_equivalent(&l, &twisted).unwrap().verdict);
    }

    #[test]
    fn q_equivalence_is_symmetric(a in prop::collection::vec(small(), 2..=3), b in prop::collection::vec(small(), 2..=3)) {
        let (x, y) = (diagonal(&a), diagonal(&b));
        prop_assert_eq!(q_equivalent(&x, &y).unwrap().verdict, q_equivalent(&y, &x).unwrap().verdict);
    }

    #[test]
    fn q_equivalence_is_transitive(a in prop::collection::vec(-3i64..=3, 2), b in prop::collection::vec(-3i64..=3, 2), c in prop::collection::vec(-3i64..=3, 2)) {
        prop_assume!(a.iter().chain(&b).chain(&c).all(|x| *x != 0));
        let (x, y, z) = (diagonal(&a), diagonal(&b), diagonal(&c));
        let xy = q_equivalent(&x, &y).unwrap().verdict;
        let yz = q_equivalent(&y, &z).unwrap().verdict;
        if xy && yz {
            prop_assert!(q_equivalent(&x, &z).unwrap().verdict);
        }
    }

    #[test]
    fn certificate_survives_json(a in prop::collection::vec(small(), 1..=4), b in prop::collection::vec(small(), 1..=4)) {
        let c = q_equivalent(&diagonal(&a), &diagonal(&b)).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: QEquivalenceCertificate = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &c);
        back.replay().unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Binary forms are equivalent iff they share a determinant class and
    /// one represents a coefficient of the other.
    #[test]
    fn binary_forms_against_representation_search(a in small(), b in small(), c in small(), d in small()) {
        let verdict = q_equivalent(&diagonal(&[a, b]), &diagonal(&[c, d])).unwrap().verdict;
        let same_class = squarefree((a * b) as i128) == squarefree((c * d) as i128);
        let same_sig = [a, b].iter().filter(|x| **x > 0).count() == [c, d].iter().filter(|x| **x > 0).count();
        if !same_class || !same_sig {
            prop_assert!(!verdict);
        } else if represents(a, b, c, 25) {
            prop_assert!(verdict, "<{a},{b}> represents {c} but was not matched with <{c},{d}>");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn discriminant_order_is_the_determinant(l in even_lattice()) {
        let g = discriminant_group(&l).unwrap();
        prop_assert_eq!(g.order(), l.determinant().abs());
        prop_assert_eq!(to_i128(&g.order()), det_cofactor(&gram(&l)).abs());
    }

    #[test]
    fn discriminant_form_is_well_defined(
        l in even_lattice(),
        coeffs in prop::collection::vec(-5i64..=5, 8),
        shift in prop::collection::vec(-4i64..=4, 8),
    ) {
        let grp = discriminant_group(&l).unwrap();
        let n = l.rank();
        let mut x = vec![BigRational::from_integer(0.into()); n];
        for (i, gen) in grp.generators.iter().enumerate() {
            for j in 0..n {
                x[j] += &gen[j] * BigRational::from_integer(coeffs[i].into());
            }
        }
        let y: Vec<BigRational> = (0..n).map(|j| &x[j] + BigRational::from_integer(shift[j].into())).collect();
        prop_assert_eq!(q_value(&l, &x), q_value(&l, &y));
        let ks: Vec<BigInt> = coeffs[..grp.generators.len()].iter().map(|&c| c.into()).collect();
        prop_assert_eq!(grp.q_of(&ks), q_value(&l, &x));
    }

    #[test]
    fn genus_is_invariant_under_base_change((l, moved) in with_base_change()) {
        prop_assert!(same_genus(&l, &moved).unwrap());
        let c = genus_certificate(&l, &moved).unwrap();
        c.replay().unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: k3lat::discriminant::GenusCertificate = serde_json::from_str(&text).unwrap();
        back.replay().unwrap();
    }

    #[test]
    fn twisting_by_two_scales_the_group(l in even_lattice()) {
        let t = l.twist(2).unwrap();
        let g = discriminant_group(&t).unwrap();
        let expected = det_cofactor(&gram(&l)).abs() << l.rank();
        prop_assert_eq!(to_i128(&g.order()), expected);
    }
}
