//! Linear maps: functions between orthomodular lattices that preserve all joins.
//!
//! Every such map `f` has a unique adjoint `f*` with `f(x) ⊥ y ⇔ x ⊥ f*(y)`.
//! It is computed on construction as the orthocomplement conjugate of the
//! right order-adjoint: `f*(y) = (⋁{x : f(x) ≤ y⊥})⊥`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use thiserror::Error;

use crate::oml::{ElemId, Oml, OmlError};

/// Default cap on domain size for [`enumerate_linmaps`].
pub const DEFAULT_ENUM_BOUND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinWitness {
    /// `f(0) ≠ 0`.
    Bottom { image: String },
    /// `f(x ∨ y) ≠ f(x) ∨ f(y)`.
    Pair {
        x: String,
        y: String,
        image_of_join: String,
        join_of_images: String,
    },
}

impl fmt::Display for JoinWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JoinWitness::Bottom { image } => write!(f, "f(0) = {image}, not bottom"),
            JoinWitness::Pair {
                x,
                y,
                image_of_join,
                join_of_images,
            } => write!(
                f,
                "f({x} v {y}) = {image_of_join} but f({x}) v f({y}) = {join_of_images}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("{side} lattice is not orthomodular")]
    NotOrthomodular { side: &'static str },
    #[error("table has length {found}, domain has {expected} elements")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("table entry {id} out of range for a codomain of {n} elements")]
    IdOutOfRange { id: usize, n: usize },
    #[error("map does not preserve joins: {0}")]
    NotJoinPreserving(JoinWitness),
    #[error("codomain of the first map differs from the domain of the second")]
    DomainMismatch,
    #[error("domain has {n} elements, enumeration bound is {bound}")]
    EnumerationBoundExceeded { n: usize, bound: usize },
    #[error(transparent)]
    Lattice(#[from] OmlError),
}

/// Identity of objects: the same allocation, or structurally equal lattices.
#[inline]
pub fn same_object(a: &Arc<Oml>, b: &Arc<Oml>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A join-preserving map between orthomodular lattices, with its adjoint.
#[derive(Clone, Debug)]
pub struct LinMap {
    dom: Arc<Oml>,
    cod: Arc<Oml>,
    table: Vec<ElemId>,
    adjoint: Vec<ElemId>,
}

/// Pointwise table equality between maps with the same domain and codomain.
impl PartialEq for LinMap {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
            && same_object(&self.dom, &other.dom)
            && same_object(&self.cod, &other.cod)
    }
}

impl Eq for LinMap {}

#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MapPredicates {
    pub is_self_adjoint: bool,
    pub is_dagger_mono: bool,
    pub is_dagger_epi: bool,
    pub is_dagger_iso: bool,
    pub is_zero_epi: bool,
    pub is_zero_mono: bool,
}

fn compute_adjoint(dom: &Oml, cod: &Oml, table: &[ElemId]) -> Vec<ElemId> {
    cod.elements()
        .map(|y| {
            let yo = cod.ortho(y);
            let below = dom.big_join(dom.elements().filter(|x| cod.leq(table[x.index()], yo)));
            dom.ortho(below)
        })
        .collect()
}

fn join_witness(dom: &Oml, cod: &Oml, table: &[ElemId]) -> Option<JoinWitness> {
    let f0 = table[dom.bottom().index()];
    if f0 != cod.bottom() {
        return Some(JoinWitness::Bottom {
            image: cod.label(f0).to_owned(),
        });
    }
    for x in dom.elements() {
        for y in dom.elements().skip(x.index() + 1) {
            let lhs = table[dom.join(x, y).index()];
            let rhs = cod.join(table[x.index()], table[y.index()]);
            if lhs != rhs {
                return Some(JoinWitness::Pair {
                    x: dom.label(x).to_owned(),
                    y: dom.label(y).to_owned(),
                    image_of_join: cod.label(lhs).to_owned(),
                    join_of_images: cod.label(rhs).to_owned(),
                });
            }
        }
    }
    None
}

impl LinMap {
    /// Validates `table` as a join-preserving map `dom → cod` and computes its adjoint.
    pub fn new(dom: Arc<Oml>, cod: Arc<Oml>, table: Vec<ElemId>) -> Result<LinMap, MapError> {
        if !dom.is_orthomodular() {
            return Err(MapError::NotOrthomodular { side: "domain" });
        }
        if !cod.is_orthomodular() {
            return Err(MapError::NotOrthomodular { side: "codomain" });
        }
        if table.len() != dom.len() {
            return Err(MapError::DimensionMismatch {
                expected: dom.len(),
                found: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|e| e.index() >= cod.len()) {
            return Err(MapError::IdOutOfRange {
                id: bad.index(),
                n: cod.len(),
            });
        }
        if let Some(w) = join_witness(&dom, &cod, &table) {
            return Err(MapError::NotJoinPreserving(w));
        }
        Ok(LinMap::from_valid_table(dom, cod, table))
    }

    /// Trusted constructor: `table` is known to preserve joins.
    pub(crate) fn from_valid_table(dom: Arc<Oml>, cod: Arc<Oml>, table: Vec<ElemId>) -> LinMap {
        debug_assert!(join_witness(&dom, &cod, &table).is_none());
        let adjoint = compute_adjoint(&dom, &cod, &table);
        LinMap {
            dom,
            cod,
            table,
            adjoint,
        }
    }

    pub fn identity(x: &Arc<Oml>) -> LinMap {
        LinMap::from_valid_table(x.clone(), x.clone(), x.elements().collect())
    }

    /// The constant-bottom map, which factors through the zero object.
    pub fn zero(x: &Arc<Oml>, y: &Arc<Oml>) -> LinMap {
        LinMap::from_valid_table(x.clone(), y.clone(), vec![y.bottom(); x.len()])
    }

    /// The Sasaki projection `π_a` as an endomorphism of `x`.
    pub fn sasaki(x: &Arc<Oml>, a: ElemId) -> Result<LinMap, MapError> {
        x.check(a)?;
        if !x.is_orthomodular() {
            return Err(MapError::NotOrthomodular { side: "domain" });
        }
        let table = x.elements().map(|y| x.project(a, y)).collect();
        LinMap::new(x.clone(), x.clone(), table)
    }

    pub fn dom(&self) -> &Arc<Oml> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Oml> {
        &self.cod
    }

    pub fn table(&self) -> &[ElemId] {
        &self.table
    }

    pub fn adjoint_table(&self) -> &[ElemId] {
        &self.adjoint
    }

    #[inline]
    pub fn apply(&self, x: ElemId) -> ElemId {
        self.table[x.index()]
    }

    #[inline]
    pub fn apply_adjoint(&self, y: ElemId) -> ElemId {
        self.adjoint[y.index()]
    }

    /// `f*` as a map in its own right. Its adjoint is recomputed from scratch,
    /// so `f.adjoint().adjoint() == f` is a genuine check.
    pub fn adjoint(&self) -> LinMap {
        LinMap::from_valid_table(self.cod.clone(), self.dom.clone(), self.adjoint.clone())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &LinMap) -> Result<LinMap, MapError> {
        compose(self, first)
    }

    /// Whether `h` satisfies `f(x) ⊥ y ⇔ x ⊥ h(y)` for every pair.
    pub fn is_adjoint_table(&self, h: &[ElemId]) -> bool {
        h.len() == self.cod.len()
            && self.dom.elements().all(|x| {
                self.cod.elements().all(|y| {
                    self.cod.orthogonal(self.apply(x), y) == self.dom.orthogonal(x, h[y.index()])
                })
            })
    }

    pub fn is_monotone(&self) -> bool {
        self.dom
            .elements()
            .all(|x| self.dom.up_set(x).all(|y| self.cod.leq(self.apply(x), self.apply(y))))
    }

    pub fn is_endo(&self) -> bool {
        same_object(&self.dom, &self.cod)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && self.table.iter().enumerate().all(|(i, e)| e.index() == i)
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&e| e == self.cod.bottom())
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_endo() && self.table == self.adjoint
    }

    /// `f* ∘ f = id`.
    pub fn is_dagger_mono(&self) -> bool {
        self.dom.elements().all(|x| self.apply_adjoint(self.apply(x)) == x)
    }

    /// `f ∘ f* = id`.
    pub fn is_dagger_epi(&self) -> bool {
        self.cod.elements().all(|y| self.apply(self.apply_adjoint(y)) == y)
    }

    pub fn is_dagger_iso(&self) -> bool {
        self.is_dagger_mono() && self.is_dagger_epi()
    }

    /// `f(1) = 1`.
    pub fn is_zero_epi(&self) -> bool {
        self.apply(self.dom.top()) == self.cod.top()
    }

    /// `f*(1) = 1`.
    pub fn is_zero_mono(&self) -> bool {
        self.apply_adjoint(self.cod.top()) == self.dom.top()
    }

    pub fn predicates(&self) -> MapPredicates {
        MapPredicates {
            is_self_adjoint: self.is_self_adjoint(),
            is_dagger_mono: self.is_dagger_mono(),
            is_dagger_epi: self.is_dagger_epi(),
            is_dagger_iso: self.is_dagger_iso(),
            is_zero_epi: self.is_zero_epi(),
            is_zero_mono: self.is_zero_mono(),
        }
    }

    /// The set `{f(x)}`, sorted. Not an orthomodular lattice in general.
    pub fn range(&self) -> Vec<ElemId> {
        let mut r = self.table.clone();
        r.sort_unstable();
        r.dedup();
        r
    }

    /// Elements mapped to bottom.
    pub fn kernel_set(&self) -> Vec<ElemId> {
        self.dom.elements().filter(|&x| self.apply(x) == self.cod.bottom()).collect()
    }
}

/// `g ∘ f`.
pub fn compose(g: &LinMap, f: &LinMap) -> Result<LinMap, MapError> {
    if !same_object(&f.cod, &g.dom) {
        return Err(MapError::DomainMismatch);
    }
    let table = f.table.iter().map(|&y| g.apply(y)).collect();
    Ok(LinMap::from_valid_table(f.dom.clone(), g.cod.clone(), table))
}

/// All linear maps `dom → cod`, sorted by table, with the default bound.
pub fn enumerate_linmaps(dom: &Arc<Oml>, cod: &Arc<Oml>) -> Result<Vec<LinMap>, MapError> {
    enumerate_linmaps_bounded(dom, cod, DEFAULT_ENUM_BOUND)
}

/// All linear maps `dom → cod`, sorted lexicographically by table.
///
/// A linear map is determined by its values on the join-irreducible elements.
/// Assignments are generated by backtracking with two necessary conditions as
/// pruning (monotonicity between generators, and `j ≤ j1 ∨ j2 ⇒ g(j) ≤ g(j1) ∨ g(j2)`),
/// then extended by joins and fully validated.
pub fn enumerate_linmaps_bounded(
    dom: &Arc<Oml>,
    cod: &Arc<Oml>,
    bound: usize,
) -> Result<Vec<LinMap>, MapError> {
    if dom.len() > bound {
        return Err(MapError::EnumerationBoundExceeded {
            n: dom.len(),
            bound,
        });
    }
    if !dom.is_orthomodular() {
        return Err(MapError::NotOrthomodular { side: "domain" });
    }
    if !cod.is_orthomodular() {
        return Err(MapError::NotOrthomodular { side: "codomain" });
    }
    let gens = dom.join_irreducibles();
    let k = gens.len();
    // checks[i]: constraints that become decidable once generator i is assigned
    let mut checks: Vec<Vec<Constraint>> = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..i {
            if dom.leq(gens[j], gens[i]) {
                checks[i].push(Constraint::Below { lo: j, hi: i });
            }
        }
    }
    for t in 0..k {
        for p in 0..k {
            for q in p + 1..k {
                if t != p && t != q && dom.leq(gens[t], dom.join(gens[p], gens[q])) {
                    checks[t.max(q)].push(Constraint::Covered { t, p, q });
                }
            }
        }
    }
    let search = Search {
        dom,
        cod,
        gens: &gens,
        checks: &checks,
    };
    let mut maps: Vec<LinMap> = if k == 0 {
        search.finish(&[]).into_iter().collect()
    } else {
        cod.elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut out = Vec::new();
                let mut assign = vec![first];
                search.descend(&mut assign, &mut out);
                out
            })
            .collect()
    };
    maps.sort_by(|a, b| a.table.cmp(&b.table));
    maps.dedup_by(|a, b| a.table == b.table);
    Ok(maps)
}

#[derive(Clone, Copy, Debug)]
enum Constraint {
    Below { lo: usize, hi: usize },
    Covered { t: usize, p: usize, q: usize },
}

struct Search<'a> {
    dom: &'a Arc<Oml>,
    cod: &'a Arc<Oml>,
    gens: &'a [ElemId],
    checks: &'a [Vec<Constraint>],
}

impl Search<'_> {
    fn consistent(&self, assign: &[ElemId]) -> bool {
        let i = assign.len() - 1;
        self.checks[i].iter().all(|c| match *c {
            Constraint::Below { lo, hi } => self.cod.leq(assign[lo], assign[hi]),
            Constraint::Covered { t, p, q } => {
                self.cod.leq(assign[t], self.cod.join(assign[p], assign[q]))
            }
        })
    }

    fn descend(&self, assign: &mut Vec<ElemId>, out: &mut Vec<LinMap>) {
        if !self.consistent(assign) {
            return;
        }
        if assign.len() == self.gens.len() {
            out.extend(self.finish(assign));
            return;
        }
        for y in self.cod.elements() {
            assign.push(y);
            self.descend(assign, out);
            assign.pop();
        }
    }

    fn finish(&self, assign: &[ElemId]) -> Option<LinMap> {
        let (dom, cod) = (self.dom, self.cod);
        let table: Vec<ElemId> = dom
            .elements()
            .map(|x| {
                cod.big_join(
                    self.gens
                        .iter()
                        .zip(assign)
                        .filter(|(g, _)| dom.leq(**g, x))
                        .map(|(_, &v)| v),
                )
            })
            .collect();
        let extends = self
            .gens
            .iter()
            .zip(assign)
            .all(|(g, &v)| table[g.index()] == v);
        if extends && join_witness(dom, cod, &table).is_none() {
            Some(LinMap::from_valid_table(dom.clone(), cod.clone(), table))
        } else {
            None
        }
    }
}

type HomKey = (Arc<Oml>, Arc<Oml>);

/// Memoized hom-set enumeration keyed by object structure. Shared across
/// threads by the brute-force verifiers.
pub struct HomCache {
    bound: usize,
    map: Mutex<HashMap<HomKey, Arc<Vec<LinMap>>>>,
}

impl HomCache {
    pub fn new(bound: usize) -> Self {
        HomCache {
            bound,
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn homs(&self, dom: &Arc<Oml>, cod: &Arc<Oml>) -> Result<Arc<Vec<LinMap>>, MapError> {
        let key = (dom.clone(), cod.clone());
        if let Some(v) = self.map.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(enumerate_linmaps_bounded(dom, cod, self.bound)?);
        self.map.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn arc(o: Oml) -> Arc<Oml> {
        Arc::new(o)
    }

    #[test]
    fn identity_and_zero_are_valid() {
        let m = arc(catalog::mo(2).unwrap());
        let id = LinMap::new(m.clone(), m.clone(), m.elements().collect()).unwrap();
        assert!(id.is_self_adjoint());
        assert_eq!(id.adjoint(), id);
        let z = LinMap::new(m.clone(), m.clone(), vec![m.bottom(); m.len()]).unwrap();
        assert!(z.is_zero());
        let c = arc(catalog::chain2());
        assert_eq!(LinMap::zero(&m, &c).adjoint(), LinMap::zero(&c, &m));
    }

    #[test]
    fn bottom_must_map_to_bottom() {
        let c = arc(catalog::chain2());
        let err = LinMap::new(c.clone(), c.clone(), vec![c.top(), c.top()]).unwrap_err();
        assert!(matches!(
            err,
            MapError::NotJoinPreserving(JoinWitness::Bottom { .. })
        ));
    }

    #[test]
    fn pair_witness_for_non_join_preserving_map() {
        // on 2^2, send a ↦ a, b ↦ 0, 1 ↦ 1: f(a v b) = 1 but f(a) v f(b) = a
        let p = arc(catalog::powerset(2).unwrap());
        let t = vec![p.bottom(), ElemId::new(1), p.bottom(), p.top()];
        match LinMap::new(p.clone(), p.clone(), t).unwrap_err() {
            MapError::NotJoinPreserving(JoinWitness::Pair { .. }) => {}
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn non_orthomodular_objects_are_refused() {
        let b = arc(catalog::benzene());
        let err = LinMap::new(b.clone(), b.clone(), b.elements().collect()).unwrap_err();
        assert_eq!(err, MapError::NotOrthomodular { side: "domain" });
    }

    #[test]
    fn sasaki_map_is_self_adjoint_and_idempotent() {
        let m = arc(catalog::mo(3).unwrap());
        for a in m.elements() {
            let p = LinMap::sasaki(&m, a).unwrap();
            assert!(p.is_self_adjoint());
            assert_eq!(compose(&p, &p).unwrap(), p);
        }
    }

    #[test]
    fn composition_checks_objects() {
        let c = arc(catalog::chain2());
        let p = arc(catalog::powerset(2).unwrap());
        let f = LinMap::zero(&c, &p);
        assert_eq!(compose(&f, &f).unwrap_err(), MapError::DomainMismatch);
        let id = LinMap::identity(&p);
        assert_eq!(compose(&id, &f).unwrap(), f);
    }

    #[test]
    fn enumeration_counts() {
        let c = arc(catalog::chain2());
        assert_eq!(enumerate_linmaps(&c, &c).unwrap().len(), 2);
        let p = arc(catalog::powerset(2).unwrap());
        assert_eq!(enumerate_linmaps(&p, &p).unwrap().len(), 16);
        let z = arc(catalog::zero());
        assert_eq!(enumerate_linmaps(&z, &p).unwrap().len(), 1);
        let big = arc(catalog::powerset(4).unwrap());
        assert_eq!(
            enumerate_linmaps(&big, &c).unwrap_err(),
            MapError::EnumerationBoundExceeded { n: 16, bound: 8 }
        );
    }

    #[test]
    fn predicates_of_identity_and_zero() {
        let m = arc(catalog::mo(2).unwrap());
        let id = LinMap::identity(&m).predicates();
        assert!(
            id.is_self_adjoint
                && id.is_dagger_mono
                && id.is_dagger_epi
                && id.is_dagger_iso
                && id.is_zero_epi
                && id.is_zero_mono
        );
        let c = arc(catalog::chain2());
        assert!(!LinMap::zero(&m, &c).is_zero_epi());
    }
}
