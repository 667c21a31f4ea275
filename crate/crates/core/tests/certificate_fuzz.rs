mod common;

use irrcert::criterion::{SearchConfig, Variant, VariantSet};
use irrcert::{certify_at, search, verify, Certificate, Polynomial};
use num_bigint::BigUint;
use rand::Rng;
use serde_json::Value;

fn seed_certificates() -> Vec<Certificate> {
    let cfg = SearchConfig::default();
    let at = |f: Polynomial, n: u32, cfg: &SearchConfig| {
        certify_at(&f, &BigUint::from(n), cfg)
            .unwrap()
            .certificate()
            .unwrap()
            .clone()
    };
    let mut out = vec![
        at(common::u(), 10, &cfg),
        at(common::v(), 20, &cfg),
        at(Polynomial::from_i64s(&[3, -14, -15, 1]), 17, &cfg),
    ];
    let search_cfg = common::corpus_search_config(300);
    for f in common::soundness_corpus(301, 60) {
        if let Some(c) = search(&f, &search_cfg).unwrap().certificate() {
            out.push(c.clone());
        }
    }
    let k2 = SearchConfig::with_variants(
        VariantSet::new([Variant::Theorem1, Variant::Theorem2]).unwrap(),
    );
    for f in common::soundness_corpus(302, 60) {
        if let Some(c) = search(
            &f,
            &SearchConfig {
                n_max: 300,
                ..k2.clone()
            },
        )
        .unwrap()
        .certificate()
        {
            out.push(c.clone());
        }
    }
    out
}

#[test]
fn seeds_are_valid_and_round_trip() {
    let seeds = seed_certificates();
    assert!(seeds.iter().any(|c| c.variant == Variant::Theorem2));
    for c in &seeds {
        assert!(verify(c).valid, "{c:?}");
        let bytes = c.serialize().unwrap();
        let back = Certificate::deserialize(&bytes).unwrap();
        assert_eq!(&back, c);
        assert_eq!(back.serialize().unwrap(), bytes);
    }
}

#[test]
fn single_field_mutations_are_rejected() {
    let seeds = seed_certificates();
    let mut rng = common::rng(303);
    let mut per_field = std::collections::BTreeMap::new();
    for i in 0..10_000 {
        let base = &seeds[i % seeds.len()];
        let (m, field) = common::mutate(base, &mut rng);
        assert_ne!(&m, base);
        assert!(!common::accepted(&m), "mutation of {field} accepted: {m:?}");
        *per_field.entry(field).or_insert(0) += 1;
    }
    assert_eq!(per_field.len(), 10, "{per_field:?}");
}

#[test]
fn document_level_damage_is_rejected() {
    let seeds = seed_certificates();
    let mut rng = common::rng(304);
    let keys = [
        "format_version",
        "polynomial",
        "n",
        "sign",
        "p",
        "k",
        "d",
        "variant",
        "j",
        "taylor_evidence",
        "primality",
        "tool_version",
    ];
    for i in 0..2000 {
        let c = &seeds[i % seeds.len()];
        let mut doc: Value = serde_json::from_slice(&c.serialize().unwrap()).unwrap();
        let obj = doc.as_object_mut().unwrap();
        let key = keys[rng.gen_range(0..keys.len())];
        match rng.gen_range(0..4) {
            0 => {
                obj.remove(key);
            }
            1 => {
                obj.insert("extra".into(), Value::from(1));
            }
            2 if key == "tool_version" => {
                obj.insert(key.into(), Value::from(12));
            }
            2 => {
                obj.insert(key.into(), Value::from("12x"));
            }
            _ => {
                obj.insert(key.into(), Value::Null);
            }
        }
        let bytes = serde_json::to_vec(&doc).unwrap();
        assert!(Certificate::deserialize(&bytes).is_err(), "{key}: {doc}");
    }
}
