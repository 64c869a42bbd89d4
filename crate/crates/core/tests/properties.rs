use std::sync::Arc;

use omlcat::catalog;
use omlcat::dot::{export_dot, DotOptions};
use omlcat::galois::{gamma, lambda, make_galois};
use omlcat::io::{self, CatalogResolver};
use omlcat::kernel::{factorize, kernel};
use omlcat::{compose, enumerate_linmaps, LinMap, Oml};
use proptest::prelude::*;

/// Lattice expressions of at most 16 elements.
fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("chain2".to_string()),
        (0usize..=3).prop_map(|n| format!("pow({n})")),
        (1usize..=4).prop_map(|n| format!("mo({n})")),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("hs({a},{b})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("prod({a},{b})")),
        ]
    })
    .prop_filter_map("too large or degenerate", |e| {
        let o = catalog::eval(&e).ok()?;
        (o.len() <= 16).then_some(e)
    })
}

fn small_objects() -> Vec<Arc<Oml>> {
    ["chain2", "pow(2)", "mo(2)", "hs(pow(2),pow(2))", "pow(3)"]
        .iter()
        .map(|e| Arc::new(catalog::eval(e).unwrap()))
        .collect()
}

/// A map between two small catalog objects, by position in its hom-set.
fn map() -> impl Strategy<Value = LinMap> {
    (0usize..5, 0usize..5, any::<prop::sample::Index>()).prop_map(|(i, j, k)| {
        let objs = small_objects();
        let homs = enumerate_linmaps(&objs[i], &objs[j]).unwrap();
        homs[k.index(homs.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_lattices_are_orthomodular(e in expr()) {
        let o = catalog::eval(&e).unwrap();
        let rep = o.verify_orthomodular().unwrap();
        prop_assert!(rep.holds);
        for x in o.elements() {
            prop_assert_eq!(o.meet(x, o.ortho(x)), o.bottom());
            prop_assert_eq!(o.ortho(o.ortho(x)), x);
        }
    }

    #[test]
    fn text_round_trip(e in expr()) {
        let o = catalog::eval(&e).unwrap();
        let text = io::serialize_oml(&o, "l");
        let back = io::parse_oml(&text).unwrap();
        prop_assert_eq!(&back, &o);
        prop_assert_eq!(io::serialize_oml(&back, "l"), text);
    }

    #[test]
    fn dot_has_one_edge_per_cover(e in expr()) {
        let o = catalog::eval(&e).unwrap();
        let dot = export_dot(&o, &DotOptions::default());
        prop_assert_eq!(dot.matches(" -> ").count(), o.covers().len());
        prop_assert_eq!(dot.matches("[label=").count(), o.len());
    }

    #[test]
    fn adjoint_is_involutive(f in map()) {
        prop_assert_eq!(f.adjoint().adjoint(), f.clone());
        let (x, y) = (f.dom(), f.cod());
        for a in x.elements() {
            for b in y.elements() {
                prop_assert_eq!(y.orthogonal(f.apply(a), b), x.orthogonal(a, f.apply_adjoint(b)));
            }
        }
    }

    #[test]
    fn map_round_trips_through_text(f in map()) {
        let text = io::serialize_linmap(&f, "f");
        let back = io::parse_linmap(&text, &CatalogResolver).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn galois_bridge_round_trips(f in map()) {
        let l = lambda(&f);
        let again = make_galois(f.dom().clone(), f.cod().clone(), l.lower().to_vec(), l.upper().to_vec()).unwrap();
        prop_assert_eq!(gamma(&again).unwrap(), f.clone());
        prop_assert_eq!(l.dagger(), lambda(&f.adjoint()));
    }

    #[test]
    fn kernel_and_factorization(f in map()) {
        let kd = kernel(&f);
        prop_assert!(kd.embedding.is_dagger_mono());
        prop_assert!(compose(&f, &kd.embedding).unwrap().is_zero());
        let fac = factorize(&f);
        prop_assert_eq!(compose(&fac.image_emb, &fac.e_f).unwrap(), f.clone());
        prop_assert!(fac.e_f.is_zero_epi());
        prop_assert!(fac.middle.is_zero_epi() && fac.middle.is_zero_mono());
    }
}
