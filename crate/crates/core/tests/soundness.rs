mod common;

use irrcert::criterion::{smallest_per_variant, SearchConfig, Variant, VariantSet};
use irrcert::oracle::{kronecker_factor, KroneckerBudget, OracleStatus};
use irrcert::{search, verify, Certificate, Polynomial, SearchOutcome};
use num_bigint::BigUint;

const N_MAX: u64 = 300;

fn found(f: &Polynomial, cfg: &SearchConfig) -> Option<Certificate> {
    search(f, cfg).unwrap().certificate().cloned()
}

#[test]
fn certified_polynomials_are_irreducible() {
    let cfg = common::corpus_search_config(N_MAX);
    let mut certified = 0;
    for f in common::soundness_corpus(101, 1000) {
        let Some(c) = found(&f, &cfg) else { continue };
        certified += 1;
        let report = verify(&c);
        assert!(report.valid, "{f}: {:?}", report.failures);
        let back = Certificate::deserialize(&c.serialize().unwrap()).unwrap();
        assert_eq!(back, c);
        let status = kronecker_factor(&f, KroneckerBudget::default())
            .unwrap()
            .status;
        assert_eq!(
            status,
            OracleStatus::Irreducible,
            "certified {f} at n = {}",
            c.n
        );
    }
    assert!(certified >= 500, "only {certified} certificates");
}

#[test]
fn products_are_never_certified() {
    let cfg = common::corpus_search_config(N_MAX);
    for (f, f1, f2) in common::product_corpus(102, 1000) {
        assert!(f.degree().unwrap() <= 8);
        if let Some(c) = found(&f, &cfg) {
            panic!("{f} = ({f1})·({f2}) certified: {c:?}");
        }
        match kronecker_factor(&f, KroneckerBudget::default())
            .unwrap()
            .status
        {
            OracleStatus::Reducible(g, h) => assert_eq!(&g * &h, f),
            other => panic!("oracle on {f} = ({f1})·({f2}): {other:?}"),
        }
    }
}

#[test]
fn negation_flips_only_the_sign() {
    let cfg = common::corpus_search_config(300);
    for f in common::soundness_corpus(103, 200) {
        let g = -&f;
        match (found(&f, &cfg), found(&g, &cfg)) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                assert_eq!(
                    (&a.n, &a.p, a.k, &a.d, a.j, a.variant),
                    (&b.n, &b.p, b.k, &b.d, b.j, b.variant)
                );
                assert_eq!(a.sign, b.sign.flip());
            }
            (a, b) => panic!("{f}: {a:?} vs {b:?}"),
        }
    }
}

#[test]
fn raising_the_start_never_finds_an_earlier_point() {
    let cfg = common::corpus_search_config(300);
    for f in common::soundness_corpus(104, 150) {
        let Some(first) = found(&f, &cfg) else {
            continue;
        };
        let start: u64 = first.n.clone().try_into().unwrap();
        let later = SearchConfig {
            n_min: Some(start + 1),
            ..cfg.clone()
        };
        if let Some(next) = found(&f, &later) {
            assert!(next.n > first.n);
        }
        let same = SearchConfig {
            n_min: Some(start),
            ..cfg.clone()
        };
        assert_eq!(found(&f, &same), Some(first));
    }
}

#[test]
fn per_variant_minimum_agrees_with_restricted_search() {
    let cfg = common::corpus_search_config(200);
    for f in common::soundness_corpus(105, 60) {
        for (variant, cert) in smallest_per_variant(&f, &cfg).unwrap() {
            let alone = SearchConfig {
                variants: VariantSet::only(variant),
                ..cfg.clone()
            };
            let expect = found(&f, &alone);
            assert_eq!(cert, expect, "{f}, {variant}");
            if let Some(c) = &cert {
                // A theorem2-only check that succeeds at j = 1 carries the theorem1 label.
                let allowed: &[Variant] = match variant {
                    Variant::Theorem2 => &[Variant::Theorem1, Variant::Theorem2],
                    v => &[v],
                };
                assert!(
                    allowed.contains(&c.variant),
                    "{f}: {variant} row has {:?}",
                    c.variant
                );
                assert!(verify(c).valid);
            }
        }
    }
}

#[test]
fn reducible_fixture_with_prime_power_value_is_rejected() {
    // (x - 13)(x + 1) takes the value 3·7^2 at 20, but s_1 = 28 is divisible by 7.
    let f = Polynomial::from_i64s(&[-13, -12, 1]);
    let cfg = SearchConfig::default();
    let out = irrcert::certify_at(&f, &BigUint::from(20u32), &cfg).unwrap();
    assert!(out.certificate().is_none());
    assert!(matches!(
        search(&f, &SearchConfig { n_max: 2000, ..cfg }).unwrap(),
        SearchOutcome::Exhausted(_)
    ));
}
