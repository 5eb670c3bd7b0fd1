mod oracles;

use proptest::prelude::*;

use k3lat::correspondence::{
    admits_shioda_inose, correspondence_chain, halve, jacobian_baseline, kummer_halving, CorrespondenceCertificate, LinkKind,
    Outcome,
};
use k3lat::discriminant::same_genus;
use k3lat::embeddings::{embed_t_in_lambda, embed_tn_in_u3, LatticeMap};
use k3lat::lattice::{hyperbolic, k3_lattice, rank1, torus_lattice, twisted_t, u2_plus};
use k3lat::Lattice;

use oracles::*;

fn triple() -> impl Strategy<Value = (i64, i64, i64)> {
    (1i64..=6, 1i64..=6, 1i64..=8)
}

fn check_primitive_isometry(map: &LatticeMap) {
    let a = rows(&map.matrix);
    assert_eq!(pullback(&gram(&map.dst), &a), gram(&map.src), "{} → {} not isometric", map.src.name(), map.dst.name());
    assert_eq!(maximal_minor_gcd(&a), 1, "{} → {} not primitive", map.src.name(), map.dst.name());
}

/// Even negative-definite T′ of rank ≤ 2, as ⟨−2a⟩ or ⟨−2a⟩ ⊕ ⟨−2b⟩.
fn t_prime() -> impl Strategy<Value = Lattice> {
    prop::collection::vec(1i64..=5, 1..=2)
        .prop_map(|v| v.iter().fold(Lattice::zero(), |acc, &a| acc.direct_sum(&rank1(-2 * a))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn chains_verify_in_both_directions(a in triple(), b in triple()) {
        let fwd = correspondence_chain(a.0, a.1, a.2, b.0, b.1, b.2).unwrap();
        let back = correspondence_chain(b.0, b.1, b.2, a.0, a.1, a.2).unwrap();
        for c in [&fwd, &back] {
            c.replay().unwrap();
            CorrespondenceCertificate::from_json_verified(&c.to_json_string()).unwrap();
        }
        prop_assert_eq!(&fwd.left, &back.right);
        prop_assert_eq!(&fwd.right, &back.left);
        let kinds = |c: &CorrespondenceCertificate| c.chain.iter().map(|l| l.kind).collect::<Vec<_>>();
        let mut rev = kinds(&back);
        rev.reverse();
        prop_assert_eq!(kinds(&fwd), rev);
        prop_assert_eq!(fwd.chain.iter().filter(|l| l.asserted).count(), 1);
        prop_assert_eq!(fwd.chain[2].kind, LinkKind::SharedAn);
    }

    #[test]
    fn tampered_chains_are_rejected(a in triple(), b in triple(), k in 2i64..5) {
        let c = correspondence_chain(a.0, a.1, a.2, b.0, b.1, b.2).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&c.to_json_string()).unwrap();
        // Scaling an embedding column breaks the isometry.
        let m = &mut v["chain"][1]["evidence"]["map"]["matrix"];
        for row in m.as_array_mut().unwrap() {
            let x = row[0].as_i64().unwrap();
            row[0] = (x * k).into();
        }
        prop_assert!(CorrespondenceCertificate::from_json_verified(&v.to_string()).is_err());
    }

    #[test]
    fn lambda_embedding_is_primitive(t in triple()) {
        check_primitive_isometry(&embed_t_in_lambda(t.0, t.1, t.2).unwrap());
    }

    #[test]
    fn halving_undoes_doubling(tp in t_prime()) {
        let halved = hyperbolic().power(2).direct_sum(&tp);
        let doubled = halved.twist(2).unwrap();
        let found = halve(&doubled).expect("U(2)^2 + T'(2) halves");
        prop_assert!(same_genus(&found, &halved).unwrap());
        prop_assert_eq!(det_cofactor(&gram(&found)), det_cofactor(&gram(&halved)));
        match kummer_halving(&doubled).unwrap() {
            Outcome::Found(d) => {
                d.verify().unwrap();
                let b = rows(&d.basis);
                prop_assert_eq!(det_cofactor(&b).abs(), 1);
                let twice: Mat = gram(&d.halved).iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
                prop_assert_eq!(pullback(&gram(&doubled), &b), twice);
            }
            o => prop_assert!(false, "halving: {}", o.label()),
        }
    }

    #[test]
    fn halving_survives_base_change(n in 1i64..=8, ops in prop::collection::vec((0usize..5, 0usize..5, -1i64..=1), 0..6)) {
        let l = u2_plus(n).unwrap().twist(2).unwrap();
        let mut b = k3lat::IntMatrix::identity(5);
        for (i, j, c) in ops {
            if i != j {
                for r in 0..5 {
                    let add = &b[(r, j)] * num_bigint::BigInt::from(c);
                    b[(r, i)] += add;
                }
            }
        }
        let moved = l.pullback("moved", &b).unwrap();
        match kummer_halving(&moved).unwrap() {
            Outcome::Found(d) => prop_assert_eq!(gram(&d.t_prime), vec![vec![-2 * n as i128]]),
            // The bounded search may give up, but must never refute.
            Outcome::Unknown(_) => {}
            Outcome::Refuted(why) => prop_assert!(false, "refuted: {why}"),
        }
    }

    #[test]
    fn odd_or_unscaled_lattices_do_not_halve(t in triple()) {
        // T(k,m,n) with k or m odd has an odd hyperbolic entry after halving.
        prop_assume!(t.0 % 2 == 1 || t.1 % 2 == 1);
        prop_assert!(!kummer_halving(&twisted_t(t.0, t.1, t.2).unwrap()).unwrap().is_found());
    }

    #[test]
    fn shioda_inose_postcondition(n in 1i64..=30) {
        let l = u2_plus(n).unwrap();
        match admits_shioda_inose(&l).unwrap() {
            Outcome::Found(map) => {
                prop_assert_eq!(gram(&map.dst), gram(&torus_lattice()));
                check_primitive_isometry(&map);
            }
            o => prop_assert!(false, "U^2+<-{}>: {}", 2 * n, o.label()),
        }
        check_primitive_isometry(&embed_tn_in_u3(n).unwrap());
    }
}

#[test]
fn shioda_inose_on_twisted_lattices() {
    // T(1,1,n) is U² ⊕ ⟨−2n⟩ itself.
    for n in 1..=4 {
        let l = twisted_t(1, 1, n).unwrap();
        let map = admits_shioda_inose(&l).unwrap().found().expect("found");
        check_primitive_isometry(&map);
    }
    // A rank-6 even lattice embeds primitively in U³ only if unimodular.
    let l = hyperbolic().power(2).direct_sum(&hyperbolic().twist(2).unwrap());
    assert!(matches!(admits_shioda_inose(&l).unwrap(), Outcome::Refuted(_)));
}

#[test]
fn k3_lattice_oracle_invariants() {
    let g = gram(&k3_lattice());
    assert_eq!(det_cofactor(&g), -1);
    assert_eq!(signature(&g), (3, 19, 0));
}

#[test]
fn jacobian_baseline_replays() {
    let c = jacobian_baseline().unwrap();
    c.replay().unwrap();
    let back = CorrespondenceCertificate::from_json_verified(&c.to_json_string()).unwrap();
    assert_eq!(back, c);
    assert!(c.chain.iter().any(|l| l.kind == LinkKind::KummerHalving));
}
