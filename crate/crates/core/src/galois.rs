//! Morphisms as pairs of antitone maps forming a Galois connection, and the
//! bijection with linear maps.

use std::sync::Arc;

use thiserror::Error;

use crate::linmap::{same_object, LinMap, MapError};
use crate::oml::{ElemId, Oml};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("{which} table has length {found}, expected {expected}")]
    DimensionMismatch {
        which: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{which} table entry {value} out of range")]
    IdOutOfRange { which: &'static str, value: usize },
    #[error("{which} map is not antitone: {x} <= {y} but images are not reversed")]
    NotAntitone {
        which: &'static str,
        x: String,
        y: String,
    },
    #[error("Galois condition fails at x = {x}, y = {y}: x <= upper(y) is {x_below_upper}, y <= lower(x) is {y_below_lower}")]
    GaloisConditionFails {
        x: String,
        y: String,
        x_below_upper: bool,
        y_below_lower: bool,
    },
    #[error("composition domain mismatch")]
    DomainMismatch,
    #[error(transparent)]
    Map(#[from] MapError),
}

/// `lower: X → Y` and `upper: Y → X`, both antitone, with
/// `x ≤ upper(y) ⇔ y ≤ lower(x)`.
#[derive(Clone, Debug)]
pub struct GaloisMorphism {
    dom: Arc<Oml>,
    cod: Arc<Oml>,
    lower: Vec<ElemId>,
    upper: Vec<ElemId>,
}

impl PartialEq for GaloisMorphism {
    fn eq(&self, other: &Self) -> bool {
        same_object(&self.dom, &other.dom)
            && same_object(&self.cod, &other.cod)
            && self.lower == other.lower
            && self.upper == other.upper
    }
}

impl Eq for GaloisMorphism {}

fn check_table(which: &'static str, t: &[ElemId], from: &Oml, to: &Oml) -> Result<(), GaloisError> {
    if t.len() != from.len() {
        return Err(GaloisError::DimensionMismatch {
            which,
            expected: from.len(),
            found: t.len(),
        });
    }
    if let Some(v) = t.iter().find(|v| v.index() >= to.len()) {
        return Err(GaloisError::IdOutOfRange { which, value: v.index() });
    }
    for x in from.elements() {
        for y in from.up_set(x) {
            if !to.leq(t[y.index()], t[x.index()]) {
                return Err(GaloisError::NotAntitone {
                    which,
                    x: from.label(x).to_string(),
                    y: from.label(y).to_string(),
                });
            }
        }
    }
    Ok(())
}

impl GaloisMorphism {
    pub fn new(
        dom: Arc<Oml>,
        cod: Arc<Oml>,
        lower: Vec<ElemId>,
        upper: Vec<ElemId>,
    ) -> Result<GaloisMorphism, GaloisError> {
        check_table("lower", &lower, &dom, &cod)?;
        check_table("upper", &upper, &cod, &dom)?;
        for x in dom.elements() {
            for y in cod.elements() {
                let a = dom.leq(x, upper[y.index()]);
                let b = cod.leq(y, lower[x.index()]);
                if a != b {
                    return Err(GaloisError::GaloisConditionFails {
                        x: dom.label(x).to_string(),
                        y: cod.label(y).to_string(),
                        x_below_upper: a,
                        y_below_lower: b,
                    });
                }
            }
        }
        Ok(GaloisMorphism { dom, cod, lower, upper })
    }

    /// `(⊥, ⊥)`.
    pub fn identity(x: &Arc<Oml>) -> GaloisMorphism {
        let t: Vec<ElemId> = x.elements().map(|e| x.ortho(e)).collect();
        GaloisMorphism {
            dom: x.clone(),
            cod: x.clone(),
            lower: t.clone(),
            upper: t,
        }
    }

    pub fn dom(&self) -> &Arc<Oml> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Oml> {
        &self.cod
    }

    pub fn lower(&self) -> &[ElemId] {
        &self.lower
    }

    pub fn upper(&self) -> &[ElemId] {
        &self.upper
    }

    /// Swaps the two maps.
    pub fn dagger(&self) -> GaloisMorphism {
        GaloisMorphism {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            lower: self.upper.clone(),
            upper: self.lower.clone(),
        }
    }

    /// `g ∘ self`, with `(g∘f)_• = g_• ∘ ⊥ ∘ f_•` and dually for the upper map.
    pub fn then(&self, g: &GaloisMorphism) -> Result<GaloisMorphism, GaloisError> {
        compose_galois(g, self)
    }
}

pub fn make_galois(
    dom: Arc<Oml>,
    cod: Arc<Oml>,
    lower: Vec<ElemId>,
    upper: Vec<ElemId>,
) -> Result<GaloisMorphism, GaloisError> {
    GaloisMorphism::new(dom, cod, lower, upper)
}

/// `Λ(f) = (⊥ ∘ f, ⊥ ∘ f*)`.
pub fn lambda(f: &LinMap) -> GaloisMorphism {
    let (x, y) = (f.dom(), f.cod());
    GaloisMorphism {
        dom: x.clone(),
        cod: y.clone(),
        lower: f.table().iter().map(|&v| y.ortho(v)).collect(),
        upper: f.adjoint_table().iter().map(|&v| x.ortho(v)).collect(),
    }
}

/// `Γ(f_•, f^•) = ⊥ ∘ f_•`.
pub fn gamma(gm: &GaloisMorphism) -> Result<LinMap, MapError> {
    let y = &gm.cod;
    LinMap::new(
        gm.dom.clone(),
        y.clone(),
        gm.lower.iter().map(|&v| y.ortho(v)).collect(),
    )
}

pub fn compose_galois(g: &GaloisMorphism, f: &GaloisMorphism) -> Result<GaloisMorphism, GaloisError> {
    if !same_object(&f.cod, &g.dom) {
        return Err(GaloisError::DomainMismatch);
    }
    let mid = &f.cod;
    Ok(GaloisMorphism {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        lower: f.lower.iter().map(|&v| g.lower[mid.ortho(v).index()]).collect(),
        upper: g.upper.iter().map(|&v| f.upper[mid.ortho(v).index()]).collect(),
    })
}

pub fn dagger_galois(gm: &GaloisMorphism) -> GaloisMorphism {
    gm.dagger()
}

/// The upper map determined by an antitone lower map:
/// `upper(y) = ⋁{x : y ≤ lower(x)}`.
pub fn upper_from_lower(dom: &Oml, cod: &Oml, lower: &[ElemId]) -> Vec<ElemId> {
    cod.elements()
        .map(|y| dom.big_join(dom.elements().filter(|x| cod.leq(y, lower[x.index()]))))
        .collect()
}
