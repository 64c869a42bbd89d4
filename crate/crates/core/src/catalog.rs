//! Standard lattices used throughout the test suites, and a small expression
//! language for naming them (`mo(3)`, `hs(pow(2),pow(3))`, `prod(mo(2),chain2)`).

use std::sync::Arc;

use thiserror::Error;

use crate::constructions::{self, ConstructionError};
use crate::oml::{BuildOptions, Oml, OmlError, Relation};

pub const MAX_POWERSET_GENERATORS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{what} with parameter {n} exceeds the size bound {max}")]
    SizeBoundExceeded { what: &'static str, n: usize, max: usize },
    #[error("{0}")]
    BadParameter(String),
    #[error("cannot parse lattice expression {expr:?} at offset {at}: {message}")]
    BadExpression {
        expr: String,
        at: usize,
        message: String,
    },
    #[error(transparent)]
    Lattice(#[from] OmlError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// The one-element lattice.
pub fn zero() -> Oml {
    Oml::build(1, Relation::Leq(vec![]), vec![0], Some(vec!["0".into()])).expect("zero object")
}

/// The two-element Boolean algebra.
pub fn chain2() -> Oml {
    Oml::build(
        2,
        Relation::Covers(vec![(0, 1)]),
        vec![1, 0],
        Some(vec!["0".into(), "1".into()]),
    )
    .expect("2-chain")
}

fn default_generator_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// The Boolean algebra `2^n`, elements numbered by bit pattern.
pub fn powerset(n: usize) -> Result<Oml, CatalogError> {
    if n > MAX_POWERSET_GENERATORS {
        return Err(CatalogError::SizeBoundExceeded {
            what: "powerset",
            n,
            max: MAX_POWERSET_GENERATORS,
        });
    }
    Ok(constructions::free_oml(&default_generator_names(n))?.oml.as_ref().clone())
}

/// `MOn`: bottom, top, and `2n` pairwise incomparable atoms `xi`, `xi'`.
pub fn mo(n: usize) -> Result<Oml, CatalogError> {
    if n == 0 {
        return Err(CatalogError::BadParameter("mo(n) needs n >= 1".into()));
    }
    let size = 2 * n + 2;
    let max = BuildOptions::default().max_elements;
    if size > max {
        return Err(CatalogError::SizeBoundExceeded { what: "mo", n, max });
    }
    let top = size - 1;
    let mut labels = vec!["0".to_string()];
    for i in 1..=n {
        labels.push(format!("x{i}"));
        labels.push(format!("x{i}'"));
    }
    labels.push("1".into());
    let ortho = (0..size)
        .map(|e| match e {
            0 => top,
            e if e == top => 0,
            e if e % 2 == 1 => e + 1,
            e => e - 1,
        })
        .collect();
    let covers = (1..top).flat_map(|a| [(0, a), (a, top)]).collect();
    Ok(Oml::build(size, Relation::Covers(covers), ortho, Some(labels))?)
}

/// The hexagon ortholattice `0 < a < b < 1`, `0 < b' < a' < 1`, which is not orthomodular.
pub fn benzene() -> Oml {
    Oml::build(
        6,
        Relation::Covers(vec![(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]),
        vec![5, 4, 3, 2, 1, 0],
        Some(
            ["0", "a", "b", "b'", "a'", "1"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        ),
    )
    .expect("benzene ring")
}

/// Glues `x` and `y` along their bottoms and tops; other elements of the two
/// summands are incomparable. Inner labels get `l.` / `r.` prefixes.
pub fn horizontal_sum(x: &Oml, y: &Oml) -> Result<Oml, CatalogError> {
    if x.len() < 2 || y.len() < 2 {
        return Err(CatalogError::BadParameter(
            "horizontal sum needs summands with distinct bottom and top".into(),
        ));
    }
    let (nx, ny) = (x.len() - 2, y.len() - 2);
    let n = nx + ny + 2;
    let top = n - 1;
    // position -> (summand, element)
    let source = |p: usize| -> (u8, usize) {
        match p {
            0 => (0, 0),
            p if p == top => (0, usize::MAX),
            p if p <= nx => (1, p),
            p => (2, p - nx),
        }
    };
    let pos_x = |e: usize| if e == x.len() - 1 { top } else { e };
    let pos_y = |e: usize| match e {
        0 => 0,
        e if e == y.len() - 1 => top,
        e => nx + e,
    };
    let mut labels = vec![x.labels()[0].clone()];
    labels.extend((1..=nx).map(|e| format!("l.{}", x.labels()[e])));
    labels.extend((1..=ny).map(|e| format!("r.{}", y.labels()[e])));
    labels.push(x.labels()[x.len() - 1].clone());
    let ortho = (0..n)
        .map(|p| match source(p) {
            (0, 0) => top,
            (0, _) => 0,
            (1, e) => pos_x(x.ortho_table()[e]),
            (_, e) => pos_y(y.ortho_table()[e]),
        })
        .collect();
    let leq = |a: usize, b: usize| -> bool {
        if a == 0 || b == top || a == b {
            return true;
        }
        match (source(a), source(b)) {
            ((1, i), (1, j)) => x.leq(x.elem(i).unwrap(), x.elem(j).unwrap()),
            ((2, i), (2, j)) => y.leq(y.elem(i).unwrap(), y.elem(j).unwrap()),
            _ => false,
        }
    };
    Ok(Oml::from_order_fn(n, leq, ortho, Some(labels), &BuildOptions::default())?)
}

/// Cartesian product carrier (componentwise order and complement).
pub fn product(factors: &[Arc<Oml>]) -> Result<Oml, CatalogError> {
    Ok(constructions::product_carrier(factors)?)
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub expr: &'static str,
    pub oml: Arc<Oml>,
}

/// Built-in catalog, in a fixed order. `benzene` is the only entry that is
/// not orthomodular.
pub fn catalog() -> Vec<CatalogEntry> {
    const ENTRIES: [(&str, &str); 13] = [
        ("zero", "zero"),
        ("chain2", "chain2"),
        ("pow2", "pow(2)"),
        ("pow3", "pow(3)"),
        ("pow4", "pow(4)"),
        ("mo2", "mo(2)"),
        ("mo3", "mo(3)"),
        ("mo4", "mo(4)"),
        ("benzene", "benzene"),
        ("mo2_x_chain2", "prod(mo(2),chain2)"),
        ("hs_pow2_pow2", "hs(pow(2),pow(2))"),
        ("hs_pow2_pow3", "hs(pow(2),pow(3))"),
        ("hs_pow3_pow3", "hs(pow(3),pow(3))"),
    ];
    ENTRIES
        .iter()
        .map(|&(name, expr)| CatalogEntry {
            name,
            expr,
            oml: Arc::new(eval(expr).expect("built-in catalog expression")),
        })
        .collect()
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// Evaluates a lattice expression:
///
/// ```text
/// expr := zero | chain2 | benzene | pow(N) | mo(N) | free(NAME, ...)
///       | hs(expr, expr) | prod(expr, ...) | <catalog entry name>
/// ```
pub fn eval(expr: &str) -> Result<Oml, CatalogError> {
    let mut p = ExprParser { src: expr, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != expr.len() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, message: &str) -> CatalogError {
        CatalogError::BadExpression {
            expr: self.src.to_owned(),
            at: self.pos,
            message: message.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<&str, CatalogError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '\''))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a name or number"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<usize, CatalogError> {
        let w = self.word()?;
        w.parse().map_err(|_| self.error("expected a number"))
    }

    fn expect(&mut self, c: char) -> Result<(), CatalogError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Oml, CatalogError> {
        let head = self.word()?.to_owned();
        match head.as_str() {
            "zero" => Ok(zero()),
            "chain2" => Ok(chain2()),
            "benzene" => Ok(benzene()),
            "pow" | "mo" => {
                self.expect('(')?;
                let n = self.number()?;
                self.expect(')')?;
                if head == "pow" {
                    powerset(n)
                } else {
                    mo(n)
                }
            }
            "free" => {
                self.expect('(')?;
                let mut names = Vec::new();
                if !self.eat(')') {
                    loop {
                        names.push(self.word()?.to_owned());
                        if self.eat(')') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(constructions::free_oml(&names)?.oml.as_ref().clone())
            }
            "hs" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                horizontal_sum(&a, &b)
            }
            "prod" => {
                self.expect('(')?;
                let mut fs = vec![Arc::new(self.expr()?)];
                while self.eat(',') {
                    fs.push(Arc::new(self.expr()?));
                }
                self.expect(')')?;
                product(&fs)
            }
            other => match lookup(other) {
                Some(e) => Ok(e.oml.as_ref().clone()),
                None => Err(self.error(&format!("unknown generator {other:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mo2_shape() {
        let m = mo(2).unwrap();
        assert_eq!(m.len(), 6);
        assert!(m.is_orthomodular());
        assert!(m.distributivity_witness().is_some());
        assert_eq!(m.covers().len(), 8);
    }

    #[test]
    fn benzene_is_the_only_non_orthomodular_entry() {
        let bad: Vec<_> = catalog()
            .into_iter()
            .filter(|e| !e.oml.is_orthomodular())
            .map(|e| e.name)
            .collect();
        assert_eq!(bad, ["benzene"]);
    }

    #[test]
    fn horizontal_sums() {
        let p2 = powerset(2).unwrap();
        let hs = horizontal_sum(&p2, &p2).unwrap();
        assert_eq!(hs.len(), 6);
        assert!(hs.is_orthomodular());
        // two 4-element blocks glued at 0 and 1 is MO2 up to labels
        assert_eq!(hs, mo(2).unwrap());
        let hs23 = horizontal_sum(&p2, &powerset(3).unwrap()).unwrap();
        assert_eq!(hs23.len(), 10);
        assert!(hs23.is_orthomodular());
        assert!(horizontal_sum(&zero(), &p2).is_err());
    }

    #[test]
    fn expressions() {
        assert_eq!(eval("pow(3)").unwrap().len(), 8);
        assert_eq!(eval(" prod( mo(2) , chain2 ) ").unwrap().len(), 12);
        assert_eq!(eval("free(p,q)").unwrap(), powerset(2).unwrap());
        assert_eq!(eval("mo3").unwrap(), mo(3).unwrap());
        assert!(matches!(eval("pow(3"), Err(CatalogError::BadExpression { .. })));
        assert!(matches!(eval("nope"), Err(CatalogError::BadExpression { .. })));
        assert!(matches!(
            eval("pow(13)"),
            Err(CatalogError::SizeBoundExceeded { .. })
        ));
    }
}
