//! Zero object, dagger biproducts and free objects.

use std::sync::Arc;

use thiserror::Error;

use crate::catalog::{self, MAX_POWERSET_GENERATORS};
use crate::linmap::{same_object, LinMap, MapError};
use crate::oml::{BuildOptions, ElemId, Oml, OmlError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("construction would have {n} elements, bound is {max}")]
    SizeBoundExceeded { n: usize, max: usize },
    #[error("{0}")]
    DomainMismatch(String),
    #[error("factor {factor} is not orthomodular")]
    NotOrthomodular { factor: usize },
    #[error(transparent)]
    Lattice(#[from] OmlError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// The one-element lattice, both initial and terminal.
pub fn zero_object() -> Arc<Oml> {
    Arc::new(catalog::zero())
}

/// The unique map `x → 0`.
pub fn unique_from(x: &Arc<Oml>) -> LinMap {
    LinMap::zero(x, &zero_object())
}

/// The unique map `0 → x`, the inclusion of `↓0`.
pub fn unique_to(x: &Arc<Oml>) -> LinMap {
    LinMap::zero(&zero_object(), x)
}

/// Mixed-radix digits of a product element, first factor most significant.
fn digits(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (d, &s) in out.iter_mut().zip(sizes).rev() {
        *d = idx % s;
        idx /= s;
    }
    out
}

fn encode(sizes: &[usize], ds: impl IntoIterator<Item = usize>) -> usize {
    sizes.iter().zip(ds).fold(0, |acc, (&s, d)| acc * s + d)
}

fn product_size(factors: &[Arc<Oml>]) -> Result<usize, ConstructionError> {
    let max = BuildOptions::default().max_elements;
    factors.iter().try_fold(1usize, |acc, f| {
        acc.checked_mul(f.len())
            .filter(|&n| n <= max)
            .ok_or(ConstructionError::SizeBoundExceeded {
                n: acc.saturating_mul(f.len()),
                max,
            })
    })
}

/// Componentwise product lattice. Lexicographic numbering of tuples is a
/// linear extension of the product order, so it survives canonicalization.
pub fn product_carrier(factors: &[Arc<Oml>]) -> Result<Oml, ConstructionError> {
    let n = product_size(factors)?;
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let tuples: Vec<Vec<usize>> = (0..n).map(|i| digits(&sizes, i)).collect();
    let ortho = tuples
        .iter()
        .map(|t| encode(&sizes, factors.iter().zip(t).map(|(f, &d)| f.ortho_table()[d])))
        .collect();
    let labels = if factors.is_empty() {
        vec!["0".to_string()]
    } else {
        tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = factors.iter().zip(t).map(|(f, &d)| f.labels()[d].as_str()).collect();
                format!("({})", parts.join(","))
            })
            .collect()
    };
    let leq = |a: usize, b: usize| {
        factors
            .iter()
            .zip(tuples[a].iter().zip(&tuples[b]))
            .all(|(f, (&x, &y))| f.leq(ElemId::new(x), ElemId::new(y)))
    };
    Ok(Oml::from_order_fn(n, leq, ortho, Some(labels), &BuildOptions::default())?)
}

/// A dagger biproduct with its coprojections and projections.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub carrier: Arc<Oml>,
    pub factors: Vec<Arc<Oml>>,
    pub coprojections: Vec<LinMap>,
    pub projections: Vec<LinMap>,
}

impl Biproduct {
    /// Component `j` of a carrier element.
    pub fn component(&self, x: ElemId, j: usize) -> ElemId {
        let sizes: Vec<usize> = self.factors.iter().map(|f| f.len()).collect();
        ElemId::new(digits(&sizes, x.index())[j])
    }

    /// The carrier element with the given components.
    pub fn tuple(&self, parts: &[ElemId]) -> ElemId {
        let sizes: Vec<usize> = self.factors.iter().map(|f| f.len()).collect();
        ElemId::new(encode(&sizes, parts.iter().map(|p| p.index())))
    }
}

pub fn biproduct(factors: &[Arc<Oml>]) -> Result<Biproduct, ConstructionError> {
    if let Some(i) = factors.iter().position(|f| !f.is_orthomodular()) {
        return Err(ConstructionError::NotOrthomodular { factor: i });
    }
    let carrier = Arc::new(product_carrier(factors)?);
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let mut coprojections = Vec::with_capacity(factors.len());
    for (j, f) in factors.iter().enumerate() {
        let table = f
            .elements()
            .map(|x| {
                ElemId::new(encode(
                    &sizes,
                    (0..factors.len()).map(|i| if i == j { x.index() } else { 0 }),
                ))
            })
            .collect();
        coprojections.push(LinMap::new(f.clone(), carrier.clone(), table)?);
    }
    let projections = coprojections.iter().map(LinMap::adjoint).collect();
    Ok(Biproduct {
        carrier,
        factors: factors.to_vec(),
        coprojections,
        projections,
    })
}

/// The mediating map `(x_i) ↦ ⋁ f_i(x_i)` out of a biproduct.
pub fn copair(fs: &[LinMap], bp: &Biproduct) -> Result<LinMap, ConstructionError> {
    if fs.len() != bp.factors.len() {
        return Err(ConstructionError::DomainMismatch(format!(
            "{} maps for {} factors",
            fs.len(),
            bp.factors.len()
        )));
    }
    let Some(first) = fs.first() else {
        // empty cocone: the biproduct is the zero object; target unknown
        return Err(ConstructionError::DomainMismatch(
            "copair of an empty family needs an explicit target; use unique_to".into(),
        ));
    };
    let y = first.cod().clone();
    for (i, f) in fs.iter().enumerate() {
        if !same_object(f.dom(), &bp.factors[i]) {
            return Err(ConstructionError::DomainMismatch(format!(
                "map {i} does not start at factor {i}"
            )));
        }
        if !same_object(f.cod(), &y) {
            return Err(ConstructionError::DomainMismatch(format!(
                "map {i} has a different codomain"
            )));
        }
    }
    let table = bp
        .carrier
        .elements()
        .map(|x| y.big_join(fs.iter().enumerate().map(|(j, f)| f.apply(bp.component(x, j)))))
        .collect();
    Ok(LinMap::new(bp.carrier.clone(), y, table)?)
}

/// The powerset Boolean algebra on a generator set, with its singleton injection.
#[derive(Clone, Debug)]
pub struct FreeObject {
    pub oml: Arc<Oml>,
    pub generators: Vec<String>,
    pub inject: Vec<ElemId>,
}

/// `P(A)`: subsets numbered by bit pattern (generator `i` is bit `i`),
/// order is inclusion, complement is set complement.
pub fn free_oml(generators: &[String]) -> Result<FreeObject, ConstructionError> {
    let k = generators.len();
    if k > MAX_POWERSET_GENERATORS {
        return Err(ConstructionError::SizeBoundExceeded {
            n: 1 << k.min(63),
            max: 1 << MAX_POWERSET_GENERATORS,
        });
    }
    let n = 1usize << k;
    let full = n - 1;
    let labels = (0..n)
        .map(|mask| {
            let names: Vec<&str> = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| generators[i].as_str())
                .collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let oml = Oml::from_order_fn(
        n,
        |a, b| a & !b == 0,
        (0..n).map(|m| full ^ m).collect(),
        Some(labels),
        &BuildOptions::default(),
    )?;
    Ok(FreeObject {
        oml: Arc::new(oml),
        generators: generators.to_vec(),
        inject: (0..k).map(|i| ElemId::new(1 << i)).collect(),
    })
}

impl FreeObject {
    /// The unique linear extension `Z ↦ ⋁{g(a) : a ∈ Z}` of an assignment.
    pub fn extend(&self, g: &[ElemId], y: &Arc<Oml>) -> Result<LinMap, ConstructionError> {
        self.check_assignment(g, y)?;
        let table = self
            .oml
            .elements()
            .map(|z| {
                y.big_join(
                    g.iter()
                        .enumerate()
                        .filter(|(i, _)| z.index() >> i & 1 == 1)
                        .map(|(_, &v)| v),
                )
            })
            .collect();
        Ok(LinMap::new(self.oml.clone(), y.clone(), table)?)
    }

    /// The closed-form adjoint `y ↦ {a : g(a) not ⊥ y}`.
    pub fn adjoint_formula(&self, g: &[ElemId], y: &Arc<Oml>) -> Result<Vec<ElemId>, ConstructionError> {
        self.check_assignment(g, y)?;
        Ok(y.elements()
            .map(|v| {
                let mask = g
                    .iter()
                    .enumerate()
                    .filter(|(_, &ga)| !y.orthogonal(ga, v))
                    .fold(0usize, |m, (i, _)| m | 1 << i);
                ElemId::new(mask)
            })
            .collect())
    }

    fn check_assignment(&self, g: &[ElemId], y: &Arc<Oml>) -> Result<(), ConstructionError> {
        if g.len() != self.generators.len() {
            return Err(ConstructionError::DomainMismatch(format!(
                "assignment has {} values for {} generators",
                g.len(),
                self.generators.len()
            )));
        }
        for &v in g {
            y.check(v)?;
        }
        if !y.is_orthomodular() {
            return Err(MapError::NotOrthomodular { side: "codomain" }.into());
        }
        Ok(())
    }
}
