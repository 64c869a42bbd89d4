//! Graphviz export of Hasse diagrams.

use std::fmt::Write;

use crate::oml::Oml;

#[derive(Clone, Debug, Default)]
pub struct DotOptions {
    /// Graph name; defaults to `oml`.
    pub name: Option<String>,
    /// Draw `x -- x⊥` as dashed undirected edges.
    pub ortho_edges: bool,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Cover relation as a bottom-to-top digraph.
pub fn export_dot(oml: &Oml, options: &DotOptions) -> String {
    let mut s = String::new();
    let name = options.name.as_deref().unwrap_or("oml");
    writeln!(s, "digraph {} {{", quote(name)).unwrap();
    writeln!(s, "  rankdir=BT;").unwrap();
    writeln!(s, "  node [shape=circle];").unwrap();
    for x in oml.elements() {
        writeln!(s, "  n{} [label={}];", x.index(), quote(oml.label(x))).unwrap();
    }
    writeln!(s, "  {{ rank=min; n{}; }}", oml.bottom().index()).unwrap();
    if oml.len() > 1 {
        writeln!(s, "  {{ rank=max; n{}; }}", oml.top().index()).unwrap();
    }
    for (a, b) in oml.covers() {
        writeln!(s, "  n{} -> n{};", a.index(), b.index()).unwrap();
    }
    if options.ortho_edges {
        for x in oml.elements() {
            let y = oml.ortho(x);
            if x < y {
                writeln!(
                    s,
                    "  n{} -> n{} [style=dashed, dir=none, constraint=false];",
                    x.index(),
                    y.index()
                )
                .unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn chain2_has_one_edge() {
        let d = export_dot(&catalog::chain2(), &DotOptions::default());
        assert_eq!(d.matches("[label=").count(), 2);
        assert_eq!(d.matches(" -> ").count(), 1);
        assert!(d.contains("rank=min; n0;"));
        assert!(d.contains("rank=max; n1;"));
    }

    #[test]
    fn ortho_edges_are_dashed() {
        let m = catalog::mo(2).unwrap();
        let d = export_dot(
            &m,
            &DotOptions {
                name: None,
                ortho_edges: true,
            },
        );
        assert_eq!(d.matches("style=dashed").count(), 3);
    }

    #[test]
    fn labels_are_quoted() {
        let c = std::sync::Arc::new(catalog::chain2());
        let p = catalog::product(&[c.clone(), c]).unwrap();
        let d = export_dot(&p, &DotOptions::default());
        assert!(d.contains("label=\"(0,1)\""));
    }
}
