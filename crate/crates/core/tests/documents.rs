use std::sync::Arc;

use omlcat::catalog;
use omlcat::dot::{export_dot, DotOptions};
use omlcat::io::{self, CatalogResolver, FormatError};
use omlcat::kernel::factorize;
use omlcat::{enumerate_linmaps, LinMap};

#[test]
fn relabelled_copies_get_their_own_blocks() {
    // mo(2) and hs(pow(2),pow(2)) are the same lattice under different labels
    let m = Arc::new(catalog::mo(2).unwrap());
    let h = Arc::new(catalog::eval("hs(pow(2),pow(2))").unwrap());
    assert_eq!(*m, *h);
    assert_ne!(m.labels(), h.labels());
    for f in enumerate_linmaps(&m, &h).unwrap() {
        let text = io::serialize_linmap(&f, "f");
        assert_eq!(text.matches("lattice ").count(), 2);
        assert_eq!(io::parse_linmap(&text, &CatalogResolver).unwrap(), f);
    }
}

#[test]
fn factorization_document_parses_back() {
    let p = Arc::new(catalog::powerset(3).unwrap());
    let m = Arc::new(catalog::mo(3).unwrap());
    for f in enumerate_linmaps(&p, &m).unwrap().iter().step_by(7) {
        let fac = factorize(f);
        let text = io::serialize_factorization(&fac, "f");
        let maps = io::parse_linmaps(&text, &CatalogResolver).unwrap();
        assert_eq!(maps.len(), 3);
        assert_eq!(maps[0].map, fac.coimage);
        assert_eq!(maps[1].map, fac.middle);
        assert_eq!(maps[2].map, fac.image_emb);
    }
}

#[test]
fn galois_document_round_trip() {
    let m = Arc::new(catalog::mo(2).unwrap());
    let x = m.find("x1").unwrap();
    let gm = omlcat::galois::lambda(&LinMap::sasaki(&m, x).unwrap());
    let text = io::serialize_galois(&gm, "g");
    let back = io::parse_galois(&text, &CatalogResolver).unwrap();
    assert_eq!(back, vec![("g".to_string(), gm)]);
}

#[test]
fn syntax_errors_carry_line_numbers() {
    let text = "lattice l\n[elements]\n0 1\n[covers]\n0 < 1\n[ortho]\n0 -> 1\n1 -> 0\nbogus\nend\n";
    match io::parse_oml(text) {
        Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 9),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn dot_marks_bottom_top_and_complements() {
    let m = catalog::mo(3).unwrap();
    let plain = export_dot(&m, &DotOptions::default());
    assert!(plain.contains("rank=min; n0;"));
    assert!(plain.contains(&format!("rank=max; n{};", m.len() - 1)));
    assert!(!plain.contains("dashed"));
    let with = export_dot(
        &m,
        &DotOptions {
            name: Some("mo3".into()),
            ortho_edges: true,
        },
    );
    assert!(with.starts_with("digraph \"mo3\""));
    assert_eq!(with.matches("dashed").count(), m.len() / 2);
}
