//! Finite ortholattices and orthomodular lattices.
//!
//! An [`Oml`] is immutable once built. Construction validates every ortholattice
//! axiom and reports a concrete witness for the first violation found, so that
//! hand-written lattice files can be debugged from the error message alone.
//! Non-orthomodular ortholattices (the benzene ring, for instance) are accepted
//! and flagged; everything at the category level refuses them.
//!
//! Elements are renumbered into a canonical linear extension of the order:
//! bottom is always index 0 and top is always index `n - 1`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{self, BitMatrix};

/// Default cap on the number of elements accepted by [`Oml::build`].
pub const DEFAULT_MAX_ELEMENTS: usize = 4096;

/// Index of an element inside one particular [`Oml`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemId(u32);

impl ElemId {
    pub const BOTTOM: ElemId = ElemId(0);

    /// Wraps a raw index. Validity is relative to an `Oml`; prefer [`Oml::elem`].
    #[inline]
    pub const fn new(index: usize) -> Self {
        ElemId(index as u32)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// How the order is supplied to the builder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// Pairs `(x, y)` meaning `x <= y`. Reflexive pairs may be omitted.
    Leq(Vec<(usize, usize)>),
    /// Pairs `(x, y)` meaning `y` covers `x`; closed transitively at build time.
    Covers(Vec<(usize, usize)>),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub max_elements: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    Meet,
    Join,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Meet => "meet",
            BoundKind::Join => "join",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PosetViolation {
    #[error("antisymmetry fails: {x} <= {y} and {y} <= {x}")]
    Antisymmetry { x: String, y: String },
    #[error("transitivity fails: {x} <= {y} and {y} <= {z} but not {x} <= {z}")]
    Transitivity { x: String, y: String, z: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OmlError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{n} elements exceeds the size bound {max}")]
    SizeBoundExceeded { n: usize, max: usize },
    #[error("element index {id} out of range for a lattice of {n} elements")]
    IdOutOfRange { id: usize, n: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("invalid element label {0:?}")]
    InvalidLabel(String),
    #[error("not a partial order: {0}")]
    NotAPoset(PosetViolation),
    #[error("{x} and {y} have no {kind}")]
    MissingMeetOrJoin {
        x: String,
        y: String,
        kind: BoundKind,
    },
    #[error("orthocomplement is not an involution at {x}: {x}'' = {got}")]
    OrthoNotInvolutive { x: String, got: String },
    #[error("orthocomplement is not antitone: {x} <= {y} but not {y}' <= {x}'")]
    OrthoNotAntitone { x: String, y: String },
    #[error("complement law fails at {x}: {x} meet {x}' = {got}, not bottom")]
    ComplementLawFails { x: String, got: String },
    #[error("lattice is not orthomodular (witness pair {x}, {y})")]
    NotOrthomodular { x: String, y: String },
    #[error("equivalent conditions disagree: {0}")]
    EquivalenceMismatch(String),
}

impl OmlError {
    /// Whether the input is well-formed but violates an order or ortho axiom.
    pub fn is_axiom_violation(&self) -> bool {
        matches!(
            self,
            OmlError::NotAPoset(_)
                | OmlError::MissingMeetOrJoin { .. }
                | OmlError::OrthoNotInvolutive { .. }
                | OmlError::OrthoNotAntitone { .. }
                | OmlError::ComplementLawFails { .. }
                | OmlError::NotOrthomodular { .. }
        )
    }
}

/// Outcome of evaluating the three orthomodularity conditions over all pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthomodularReport {
    pub holds: bool,
    /// Condition results in order: `y = x v (x' ^ y)`, `x = y ^ (y' v x)`,
    /// `x' ^ y = 0 => x = y` (each under the hypothesis `x <= y`).
    pub per_condition: [bool; 3],
    /// First pair falsifying the first failing condition.
    pub witness: Option<(ElemId, ElemId)>,
    pub failing_condition: Option<usize>,
}

/// A finite ortholattice, possibly orthomodular.
#[derive(Clone, Debug)]
pub struct Oml {
    n: usize,
    /// `up[x][y]` iff `x <= y`.
    up: BitMatrix,
    /// `down[y][x]` iff `x <= y`.
    down: BitMatrix,
    ortho: Vec<ElemId>,
    meet: Vec<ElemId>,
    join: Vec<ElemId>,
    orthomodular: bool,
    labels: Vec<String>,
}

/// Structural equality: same order and orthocomplement on the same numbering.
/// Labels are presentation only and do not take part.
impl PartialEq for Oml {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ortho == other.ortho && self.up == other.up
    }
}

impl Eq for Oml {}

impl std::hash::Hash for Oml {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.ortho.hash(state);
        self.up.hash(state);
    }
}

pub(crate) fn valid_label(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('[')
        && !matches!(s, "<" | "<=" | "->" | "=")
        && s.chars().all(|c| !c.is_whitespace() && c != '#')
}

impl Oml {
    /// Builds and validates an ortholattice with default options.
    pub fn build(
        n: usize,
        relation: Relation,
        ortho: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Oml, OmlError> {
        Oml::build_with(n, relation, ortho, labels, &BuildOptions::default())
    }

    pub fn build_with(
        n: usize,
        relation: Relation,
        ortho: Vec<usize>,
        labels: Option<Vec<String>>,
        opts: &BuildOptions,
    ) -> Result<Oml, OmlError> {
        check_size(n, opts)?;
        let (pairs, full) = match relation {
            Relation::Leq(p) => (p, true),
            Relation::Covers(p) => (p, false),
        };
        let mut m = BitMatrix::new(n);
        for &(x, y) in &pairs {
            for id in [x, y] {
                if id >= n {
                    return Err(OmlError::IdOutOfRange { id, n });
                }
            }
            m.set(x, y);
        }
        Oml::from_matrix(n, m, full, ortho, labels)
    }

    /// Builds from a full order predicate `leq(x, y)`; used by the generators.
    pub fn from_order_fn(
        n: usize,
        leq: impl FnMut(usize, usize) -> bool,
        ortho: Vec<usize>,
        labels: Option<Vec<String>>,
        opts: &BuildOptions,
    ) -> Result<Oml, OmlError> {
        check_size(n, opts)?;
        Oml::from_matrix(n, BitMatrix::from_fn(n, leq), true, ortho, labels)
    }

    fn from_matrix(
        n: usize,
        mut m: BitMatrix,
        full: bool,
        ortho: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Oml, OmlError> {
        if ortho.len() != n {
            return Err(OmlError::DimensionMismatch {
                what: "orthocomplement table",
                expected: n,
                found: ortho.len(),
            });
        }
        if let Some(&id) = ortho.iter().find(|&&o| o >= n) {
            return Err(OmlError::IdOutOfRange { id, n });
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(OmlError::DimensionMismatch {
                    what: "label list",
                    expected: n,
                    found: l.len(),
                })
            }
            Some(l) => l,
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !valid_label(l) {
                return Err(OmlError::InvalidLabel(l.clone()));
            }
            if !seen.insert(l.as_str()) {
                return Err(OmlError::DuplicateLabel(l.clone()));
            }
        }

        for i in 0..n {
            m.set(i, i);
        }
        if full {
            // Transitivity: for x <= y, everything above y must be above x.
            for x in 0..n {
                for y in bits::ones(m.row(x)).collect::<Vec<_>>() {
                    if !bits::is_subset(m.row(y), m.row(x)) {
                        let z = bits::ones(m.row(y)).find(|&z| !m.get(x, z)).unwrap();
                        return Err(OmlError::NotAPoset(PosetViolation::Transitivity {
                            x: labels[x].clone(),
                            y: labels[y].clone(),
                            z: labels[z].clone(),
                        }));
                    }
                }
            }
        } else {
            m.close_transitively();
        }
        for x in 0..n {
            for y in bits::ones(m.row(x)) {
                if y != x && m.get(y, x) {
                    return Err(OmlError::NotAPoset(PosetViolation::Antisymmetry {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                    }));
                }
            }
        }

        // Canonical numbering: the linear extension that always emits the
        // smallest available input index. An input that is already a linear
        // extension keeps its numbering.
        let mut indegree: Vec<usize> = (0..n)
            .map(|y| (0..n).filter(|&x| x != y && m.get(x, y)).count())
            .collect();
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&y| indegree[y] == 0).map(Reverse).collect();
        let mut perm = Vec::with_capacity(n);
        while let Some(Reverse(x)) = heap.pop() {
            perm.push(x);
            for y in bits::ones(m.row(x)) {
                if y != x {
                    indegree[y] -= 1;
                    if indegree[y] == 0 {
                        heap.push(Reverse(y));
                    }
                }
            }
        }
        debug_assert_eq!(perm.len(), n);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let up = m.permuted(&perm);
        let down = up.transpose();
        let ortho: Vec<ElemId> = perm.iter().map(|&old| ElemId::new(inv[ortho[old]])).collect();
        let labels: Vec<String> = perm.iter().map(|&old| labels[old].clone()).collect();

        let (meet, join) = bound_tables(n, &up, &down, &labels)?;
        let mut oml = Oml {
            n,
            up,
            down,
            ortho,
            meet,
            join,
            orthomodular: false,
            labels,
        };
        oml.check_ortho()?;
        oml.orthomodular = oml.verify_orthomodular()?.holds;
        Ok(oml)
    }

    fn check_ortho(&self) -> Result<(), OmlError> {
        for x in self.elements() {
            let xx = self.ortho(self.ortho(x));
            if xx != x {
                return Err(OmlError::OrthoNotInvolutive {
                    x: self.label(x).to_owned(),
                    got: self.label(xx).to_owned(),
                });
            }
        }
        for x in self.elements() {
            for y in self.up_set(x) {
                if !self.leq(self.ortho(y), self.ortho(x)) {
                    return Err(OmlError::OrthoNotAntitone {
                        x: self.label(x).to_owned(),
                        y: self.label(y).to_owned(),
                    });
                }
            }
        }
        for x in self.elements() {
            let m = self.meet(x, self.ortho(x));
            if m != self.bottom() {
                return Err(OmlError::ComplementLawFails {
                    x: self.label(x).to_owned(),
                    got: self.label(m).to_owned(),
                });
            }
        }
        Ok(())
    }

    /// Evaluates the three orthomodularity conditions over every comparable pair.
    ///
    /// The conditions are equivalent on ortholattices; disagreement is reported
    /// as [`OmlError::EquivalenceMismatch`] and indicates a defect, not bad input.
    pub fn verify_orthomodular(&self) -> Result<OrthomodularReport, OmlError> {
        let mut per_condition = [true; 3];
        let mut first: [Option<(ElemId, ElemId)>; 3] = [None; 3];
        for x in self.elements() {
            let xo = self.ortho(x);
            for y in self.up_set(x) {
                let yo = self.ortho(y);
                let conds = [
                    y == self.join(x, self.meet(xo, y)),
                    x == self.meet(y, self.join(yo, x)),
                    self.meet(xo, y) != self.bottom() || x == y,
                ];
                for (i, ok) in conds.into_iter().enumerate() {
                    if !ok {
                        per_condition[i] = false;
                        first[i].get_or_insert((x, y));
                    }
                }
            }
        }
        if per_condition.iter().any(|&c| c != per_condition[0]) {
            return Err(OmlError::EquivalenceMismatch(format!(
                "orthomodularity conditions evaluate to {per_condition:?}"
            )));
        }
        let failing_condition = per_condition.iter().position(|c| !c);
        Ok(OrthomodularReport {
            holds: per_condition[0],
            per_condition,
            witness: failing_condition.and_then(|i| first[i]),
            failing_condition,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: a lattice has at least one element.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn bottom(&self) -> ElemId {
        ElemId::BOTTOM
    }

    #[inline]
    pub fn top(&self) -> ElemId {
        ElemId::new(self.n - 1)
    }

    #[inline]
    pub fn is_orthomodular(&self) -> bool {
        self.orthomodular
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> + Clone + 'static {
        (0..self.n).map(ElemId::new)
    }

    /// Checked conversion from a raw index.
    pub fn elem(&self, index: usize) -> Result<ElemId, OmlError> {
        if index < self.n {
            Ok(ElemId::new(index))
        } else {
            Err(OmlError::IdOutOfRange { id: index, n: self.n })
        }
    }

    pub fn check(&self, x: ElemId) -> Result<ElemId, OmlError> {
        self.elem(x.index())
    }

    pub fn label(&self, x: ElemId) -> &str {
        &self.labels[x.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<ElemId> {
        self.labels.iter().position(|l| l == label).map(ElemId::new)
    }

    /// Returns a copy carrying different element labels.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Oml, OmlError> {
        if labels.len() != self.n {
            return Err(OmlError::DimensionMismatch {
                what: "label list",
                expected: self.n,
                found: labels.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !valid_label(l) {
                return Err(OmlError::InvalidLabel(l.clone()));
            }
            if !seen.insert(l.as_str()) {
                return Err(OmlError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Oml {
            labels,
            ..self.clone()
        })
    }

    #[inline]
    pub fn leq(&self, x: ElemId, y: ElemId) -> bool {
        self.up.get(x.index(), y.index())
    }

    #[inline]
    pub fn meet(&self, x: ElemId, y: ElemId) -> ElemId {
        self.meet[x.index() * self.n + y.index()]
    }

    #[inline]
    pub fn join(&self, x: ElemId, y: ElemId) -> ElemId {
        self.join[x.index() * self.n + y.index()]
    }

    #[inline]
    pub fn ortho(&self, x: ElemId) -> ElemId {
        self.ortho[x.index()]
    }

    /// `x ⊥ y`, i.e. `x <= y'`.
    #[inline]
    pub fn orthogonal(&self, x: ElemId, y: ElemId) -> bool {
        self.leq(x, self.ortho(y))
    }

    /// Join of an arbitrary subset; the empty join is bottom.
    pub fn big_join(&self, xs: impl IntoIterator<Item = ElemId>) -> ElemId {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    /// Meet of an arbitrary subset; the empty meet is top.
    pub fn big_meet(&self, xs: impl IntoIterator<Item = ElemId>) -> ElemId {
        xs.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Elements `u <= x`, in increasing index order.
    pub fn down_set(&self, x: ElemId) -> impl Iterator<Item = ElemId> + '_ {
        bits::ones(self.down.row(x.index())).map(ElemId::new)
    }

    /// Elements `u >= x`, in increasing index order.
    pub fn up_set(&self, x: ElemId) -> impl Iterator<Item = ElemId> + '_ {
        bits::ones(self.up.row(x.index())).map(ElemId::new)
    }

    /// All covering pairs `(x, y)` with `x < y` and nothing strictly between,
    /// sorted by `(x, y)`.
    pub fn covers(&self) -> Vec<(ElemId, ElemId)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.up_set(x) {
                if y != x
                    && !self
                        .up_set(x)
                        .any(|z| z != x && z != y && self.leq(z, y))
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Elements with exactly one lower cover (the non-zero join-irreducibles).
    pub fn join_irreducibles(&self) -> Vec<ElemId> {
        let covers = self.covers();
        self.elements()
            .filter(|&x| covers.iter().filter(|&&(_, y)| y == x).count() == 1)
            .collect()
    }

    /// A triple violating `x ^ (y v z) = (x ^ y) v (x ^ z)`, if any.
    pub fn distributivity_witness(&self) -> Option<(ElemId, ElemId, ElemId)> {
        for x in self.elements() {
            for y in self.elements() {
                for z in self.elements() {
                    let l = self.meet(x, self.join(y, z));
                    let r = self.join(self.meet(x, y), self.meet(x, z));
                    if l != r {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    fn require_orthomodular(&self) -> Result<(), OmlError> {
        if self.orthomodular {
            return Ok(());
        }
        let report = self.verify_orthomodular()?;
        let (x, y) = report.witness.unwrap_or((self.bottom(), self.bottom()));
        Err(OmlError::NotOrthomodular {
            x: self.label(x).to_owned(),
            y: self.label(y).to_owned(),
        })
    }

    /// Sasaki projection onto `a`: `y ↦ a ∧ (a⊥ ∨ y)`.
    pub fn sasaki(&self, a: ElemId, y: ElemId) -> Result<ElemId, OmlError> {
        self.require_orthomodular()?;
        self.check(a)?;
        self.check(y)?;
        Ok(self.project(a, y))
    }

    #[inline]
    pub(crate) fn project(&self, a: ElemId, y: ElemId) -> ElemId {
        self.meet(a, self.join(self.ortho(a), y))
    }

    /// `x = (x ∧ y) ∨ (x ∧ y⊥)`.
    pub fn commutes(&self, x: ElemId, y: ElemId) -> bool {
        x == self.join(self.meet(x, y), self.meet(x, self.ortho(y)))
    }

    /// The principal downset `↓a` with relative complement `u ↦ a ∧ u⊥`,
    /// together with its embedding table into `self`.
    pub fn downset(&self, a: ElemId) -> Result<(Oml, Vec<ElemId>), OmlError> {
        self.require_orthomodular()?;
        self.check(a)?;
        let embed: Vec<ElemId> = self.down_set(a).collect();
        let k = embed.len();
        let mut local = vec![usize::MAX; self.n];
        for (i, e) in embed.iter().enumerate() {
            local[e.index()] = i;
        }
        let at = |x: ElemId| ElemId::new(local[x.index()]);
        let up = BitMatrix::from_fn(k, |i, j| self.leq(embed[i], embed[j]));
        let down = up.transpose();
        let mut meet = Vec::with_capacity(k * k);
        let mut join = Vec::with_capacity(k * k);
        for &x in &embed {
            for &y in &embed {
                meet.push(at(self.meet(x, y)));
                join.push(at(self.join(x, y)));
            }
        }
        let ortho = embed
            .iter()
            .map(|&u| at(self.meet(a, self.ortho(u))))
            .collect();
        let labels = embed.iter().map(|&u| self.labels[u.index()].clone()).collect();
        let mut d = Oml {
            n: k,
            up,
            down,
            ortho,
            meet,
            join,
            orthomodular: false,
            labels,
        };
        d.check_ortho()?;
        d.orthomodular = d.verify_orthomodular()?.holds;
        Ok((d, embed))
    }

    /// Order pairs `x <= y` (including reflexive ones).
    pub fn leq_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            out.extend(bits::ones(self.up.row(x)).map(|y| (x, y)));
        }
        out
    }

    pub fn ortho_table(&self) -> Vec<usize> {
        self.ortho.iter().map(|x| x.index()).collect()
    }
}

fn check_size(n: usize, opts: &BuildOptions) -> Result<(), OmlError> {
    if n == 0 {
        return Err(OmlError::Empty);
    }
    if n > opts.max_elements {
        return Err(OmlError::SizeBoundExceeded {
            n,
            max: opts.max_elements,
        });
    }
    Ok(())
}

/// Meet and join tables; elements must already be in a linear extension of
/// the order, so the greatest lower bound (if any) is the highest-indexed
/// common lower bound, and dually.
fn bound_tables(
    n: usize,
    up: &BitMatrix,
    down: &BitMatrix,
    labels: &[String],
) -> Result<(Vec<ElemId>, Vec<ElemId>), OmlError> {
    let mut meet = vec![ElemId::BOTTOM; n * n];
    let mut join = vec![ElemId::BOTTOM; n * n];
    let mut scratch = vec![0u64; down.row(0).len()];
    let missing = |x: usize, y: usize, kind| OmlError::MissingMeetOrJoin {
        x: labels[x].clone(),
        y: labels[y].clone(),
        kind,
    };
    for x in 0..n {
        for y in x..n {
            bits::and_into(&mut scratch, down.row(x), down.row(y));
            let m = bits::highest(&scratch).ok_or_else(|| missing(x, y, BoundKind::Meet))?;
            if !bits::is_subset(&scratch, down.row(m)) {
                return Err(missing(x, y, BoundKind::Meet));
            }
            bits::and_into(&mut scratch, up.row(x), up.row(y));
            let j = bits::lowest(&scratch).ok_or_else(|| missing(x, y, BoundKind::Join))?;
            if !bits::is_subset(&scratch, up.row(j)) {
                return Err(missing(x, y, BoundKind::Join));
            }
            for (a, b) in [(x, y), (y, x)] {
                meet[a * n + b] = ElemId::new(m);
                join[a * n + b] = ElemId::new(j);
            }
        }
    }
    Ok((meet, join))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Option<Vec<String>> {
        Some(v.iter().map(|s| s.to_string()).collect())
    }

    fn chain2() -> Oml {
        Oml::build(2, Relation::Covers(vec![(0, 1)]), vec![1, 0], names(&["0", "1"])).unwrap()
    }

    fn pow2() -> Oml {
        // 0, a, b, 1 with a' = b
        Oml::build(
            4,
            Relation::Covers(vec![(0, 1), (0, 2), (1, 3), (2, 3)]),
            vec![3, 2, 1, 0],
            names(&["0", "a", "b", "1"]),
        )
        .unwrap()
    }

    // 0, x, x', y, y', 1
    fn mo2() -> Oml {
        Oml::build(
            6,
            Relation::Covers((1..5).flat_map(|i| [(0, i), (i, 5)]).collect()),
            vec![5, 2, 1, 4, 3, 0],
            names(&["0", "x", "x'", "y", "y'", "1"]),
        )
        .unwrap()
    }

    // hexagon 0 < a < b < 1, 0 < b' < a' < 1
    fn benzene() -> Oml {
        Oml::build(
            6,
            Relation::Covers(vec![(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]),
            vec![5, 4, 3, 2, 1, 0],
            names(&["0", "a", "b", "b'", "a'", "1"]),
        )
        .unwrap()
    }

    #[test]
    fn chain2_is_orthomodular() {
        let c = chain2();
        assert!(c.is_orthomodular());
        assert_eq!(c.bottom(), ElemId::new(0));
        assert_eq!(c.top(), ElemId::new(1));
    }

    #[test]
    fn benzene_is_an_ortholattice_but_not_orthomodular() {
        let b = benzene();
        assert!(!b.is_orthomodular());
        let r = b.verify_orthomodular().unwrap();
        assert!(!r.holds);
        assert_eq!(r.per_condition, [false; 3]);
        let (x, y) = r.witness.unwrap();
        assert!(b.leq(x, y));
        assert_ne!(y, b.join(x, b.meet(b.ortho(x), y)));
        assert_eq!((b.label(x), b.label(y)), ("a", "b"));
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let err = Oml::build(2, Relation::Leq(vec![(0, 1), (1, 0)]), vec![1, 0], None).unwrap_err();
        assert!(matches!(
            err,
            OmlError::NotAPoset(PosetViolation::Antisymmetry { .. })
        ));
    }

    #[test]
    fn transitivity_violation_names_a_triple() {
        let err = Oml::build(
            3,
            Relation::Leq(vec![(0, 1), (1, 2)]),
            vec![2, 1, 0],
            names(&["p", "q", "r"]),
        )
        .unwrap_err();
        assert_eq!(
            err,
            OmlError::NotAPoset(PosetViolation::Transitivity {
                x: "p".into(),
                y: "q".into(),
                z: "r".into()
            })
        );
    }

    #[test]
    fn missing_join_and_bad_ortho_are_reported() {
        // two incomparable maximal elements over a bottom
        let err = Oml::build(3, Relation::Covers(vec![(0, 1), (0, 2)]), vec![0, 2, 1], None)
            .unwrap_err();
        assert!(matches!(
            err,
            OmlError::MissingMeetOrJoin {
                kind: BoundKind::Join,
                ..
            }
        ));

        let err = Oml::build(2, Relation::Covers(vec![(0, 1)]), vec![1, 1], None).unwrap_err();
        assert!(matches!(err, OmlError::OrthoNotInvolutive { .. }));

        // identity "complement" on a 2-chain is involutive but not antitone
        let err = Oml::build(2, Relation::Covers(vec![(0, 1)]), vec![0, 1], None).unwrap_err();
        assert!(matches!(err, OmlError::OrthoNotAntitone { .. }));

        // 3-chain with the middle fixed: antitone involution, complement fails
        let err = Oml::build(
            3,
            Relation::Covers(vec![(0, 1), (1, 2)]),
            vec![2, 1, 0],
            names(&["0", "m", "1"]),
        )
        .unwrap_err();
        assert_eq!(
            err,
            OmlError::ComplementLawFails {
                x: "m".into(),
                got: "m".into()
            }
        );
    }

    #[test]
    fn size_and_dimension_guards() {
        let opts = BuildOptions { max_elements: 3 };
        let err = Oml::build_with(4, Relation::Covers(vec![]), vec![0; 4], None, &opts).unwrap_err();
        assert_eq!(err, OmlError::SizeBoundExceeded { n: 4, max: 3 });
        assert_eq!(
            Oml::build(0, Relation::Covers(vec![]), vec![], None).unwrap_err(),
            OmlError::Empty
        );
        assert!(matches!(
            Oml::build(2, Relation::Covers(vec![(0, 1)]), vec![1], None).unwrap_err(),
            OmlError::DimensionMismatch { .. }
        ));
        assert!(matches!(
            Oml::build(2, Relation::Covers(vec![(0, 5)]), vec![1, 0], None).unwrap_err(),
            OmlError::IdOutOfRange { id: 5, n: 2 }
        ));
        assert!(matches!(
            Oml::build(2, Relation::Covers(vec![(0, 1)]), vec![1, 0], names(&["z", "z"]))
                .unwrap_err(),
            OmlError::DuplicateLabel(_)
        ));
    }

    #[test]
    fn renumbering_puts_bottom_first_and_top_last() {
        // input lists top first
        let l = Oml::build(
            4,
            Relation::Covers(vec![(3, 1), (3, 2), (1, 0), (2, 0)]),
            vec![3, 2, 1, 0],
            names(&["1", "a", "b", "0"]),
        )
        .unwrap();
        assert_eq!(l.label(l.bottom()), "0");
        assert_eq!(l.label(l.top()), "1");
        assert_eq!(l, pow2());
    }

    #[test]
    fn lattice_queries() {
        let p = pow2();
        let (a, b) = (p.find("a").unwrap(), p.find("b").unwrap());
        assert_eq!(p.join(a, b), p.top());
        assert_eq!(p.big_join([]), p.bottom());
        assert_eq!(p.big_meet([]), p.top());
        assert!(matches!(p.elem(4), Err(OmlError::IdOutOfRange { id: 4, n: 4 })));

        let m = mo2();
        let (x, y) = (m.find("x").unwrap(), m.find("y").unwrap());
        assert_eq!(m.join(x, y), m.top());
        assert_eq!(m.meet(x, y), m.bottom());
    }

    #[test]
    fn mo2_is_orthomodular_but_not_distributive() {
        let m = mo2();
        let r = m.verify_orthomodular().unwrap();
        assert!(r.holds);
        assert_eq!(r.per_condition, [true; 3]);
        assert!(m.distributivity_witness().is_some());
        assert!(pow2().distributivity_witness().is_none());
    }

    #[test]
    fn sasaki_examples() {
        let p = pow2();
        for a in p.elements() {
            for y in p.elements() {
                assert_eq!(p.sasaki(a, y).unwrap(), p.meet(a, y));
            }
        }
        let m = mo2();
        let (x, y, yo) = (m.find("x").unwrap(), m.find("y").unwrap(), m.find("y'").unwrap());
        assert_eq!(m.sasaki(x, y).unwrap(), x);
        assert_eq!(m.sasaki(x, yo).unwrap(), x);
        assert_eq!(m.sasaki(x, m.ortho(x)).unwrap(), m.bottom());
        assert!(matches!(
            benzene().sasaki(ElemId::new(1), ElemId::new(2)),
            Err(OmlError::NotOrthomodular { .. })
        ));
    }

    #[test]
    fn downset_examples() {
        let p = pow2();
        let a = p.find("a").unwrap();
        let (d, embed) = p.downset(a).unwrap();
        assert_eq!(d, chain2());
        assert_eq!(embed, vec![p.bottom(), a]);

        let (whole, embed) = p.downset(p.top()).unwrap();
        assert_eq!(whole, p);
        assert_eq!(embed, p.elements().collect::<Vec<_>>());

        let (z, _) = p.downset(p.bottom()).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z.is_orthomodular());
    }

    #[test]
    fn downset_rebuilds_through_the_validating_builder() {
        let m = mo2();
        for a in m.elements() {
            let (d, _) = m.downset(a).unwrap();
            let rebuilt = Oml::build(
                d.len(),
                Relation::Leq(d.leq_pairs()),
                d.ortho_table(),
                Some(d.labels().to_vec()),
            )
            .unwrap();
            assert_eq!(rebuilt, d);
            assert!(rebuilt.is_orthomodular());
        }
    }

    #[test]
    fn commutation_examples() {
        let m = mo2();
        let (x, y) = (m.find("x").unwrap(), m.find("y").unwrap());
        assert!(!m.commutes(x, y));
        assert!(m.commutes(x, m.ortho(x)));
        let p = pow2();
        for a in p.elements() {
            for b in p.elements() {
                assert!(p.commutes(a, b));
            }
        }
    }

    #[test]
    fn join_irreducibles_of_mo2_are_its_atoms() {
        let m = mo2();
        let ji: Vec<_> = m.join_irreducibles().iter().map(|&e| m.label(e).to_owned()).collect();
        assert_eq!(ji, ["x", "x'", "y", "y'"]);
        assert_eq!(m.covers().len(), 8);
    }
}
