//! Dagger kernels, cokernels, images and the zero-epi / dagger-mono factorization.
//!
//! For `f: X → Y` the kernel is the downset `↓f*(1)⊥` embedded into `X`, the
//! image is `↓f(1)` embedded into `Y`, and `f` factors as
//!
//! ```text
//! X --coimage--> ↓f*(1) --middle--> ↓f(1) --image--> Y
//!   (dagger epi)       (zero-epi, zero-mono)  (dagger mono)
//! ```
//!
//! The verifiers at the bottom of this module discharge the universal
//! properties by brute force over enumerated hom-sets.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::linmap::{compose, same_object, HomCache, LinMap, MapError};
use crate::oml::{ElemId, Oml};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("map is not an endomorphism")]
    NotEndomorphism,
    #[error("equivalent conditions disagree: {0}")]
    EquivalenceMismatch(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// The inclusion `↓a ↣ x`. Its adjoint is the Sasaki projection onto `a`,
/// read inside `↓a`.
pub fn downset_embedding(x: &Arc<Oml>, a: ElemId) -> Result<LinMap, MapError> {
    let (d, embed) = x.downset(a)?;
    LinMap::new(Arc::new(d), x.clone(), embed)
}

fn embedding_of(x: &Arc<Oml>, a: ElemId) -> LinMap {
    downset_embedding(x, a).expect("linear maps live between orthomodular lattices")
}

#[derive(Clone, Debug)]
pub struct KernelData {
    /// `f*(1)⊥`, an element of the domain.
    pub k_elem: ElemId,
    pub k_obj: Arc<Oml>,
    pub embedding: LinMap,
}

pub fn kernel(f: &LinMap) -> KernelData {
    let x = f.dom();
    let k_elem = x.ortho(f.apply_adjoint(f.cod().top()));
    let embedding = embedding_of(x, k_elem);
    KernelData {
        k_elem,
        k_obj: embedding.dom().clone(),
        embedding,
    }
}

/// `ker(f*)*`: the projection of the codomain onto `↓f(1)⊥`.
pub fn cokernel(f: &LinMap) -> LinMap {
    kernel(&f.adjoint()).embedding.adjoint()
}

#[derive(Clone, Debug)]
pub struct Factorization {
    /// `X → ↓f*(1)`, a dagger epi.
    pub coimage: LinMap,
    /// `↓f*(1) → ↓f(1)`, zero-epi and zero-mono.
    pub middle: LinMap,
    /// `↓f(1) → Y`, a dagger mono.
    pub image_emb: LinMap,
    /// `X → ↓f(1)`, the corestriction of `f`; zero-epi.
    pub e_f: LinMap,
}

pub fn factorize(f: &LinMap) -> Factorization {
    let image_emb = embedding_of(f.cod(), f.apply(f.dom().top()));
    let e_f = compose(&image_emb.adjoint(), f).expect("image embedding has codomain cod(f)");
    let coimage_emb = embedding_of(f.dom(), f.apply_adjoint(f.cod().top()));
    let middle = compose(&e_f, &coimage_emb).expect("coimage embedding has codomain dom(f)");
    Factorization {
        coimage: coimage_emb.adjoint(),
        middle,
        image_emb,
        e_f,
    }
}

/// The corestriction `X → ↓y` of `f` and the restriction `↓y → X` of `f*`.
/// Requires `f(1) ≤ y`.
pub fn restrict_corestrict(f: &LinMap, y: ElemId) -> Result<(LinMap, LinMap), KernelError> {
    let cod = f.cod();
    cod.check(y).map_err(MapError::from)?;
    let f1 = f.apply(f.dom().top());
    if !cod.leq(f1, y) {
        return Err(KernelError::PreconditionFailed(format!(
            "f(1) = {} is not below {}",
            cod.label(f1),
            cod.label(y)
        )));
    }
    let (d, embed) = cod.downset(y).map_err(MapError::from)?;
    let d = Arc::new(d);
    let local = |v: ElemId| ElemId::new(embed.binary_search(&v).expect("value below y"));
    let corestriction = LinMap::new(f.dom().clone(), d.clone(), f.table().iter().map(|&v| local(v)).collect())?;
    let restricted = LinMap::new(d, f.dom().clone(), embed.iter().map(|&u| f.apply_adjoint(u)).collect())?;
    Ok((corestriction, restricted))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SasakiReport {
    pub is_sasaki: bool,
    /// (i) `f = π_{f(1)}`; (ii) self-adjoint, idempotent, range `↓f(1)`;
    /// (iii) self-adjoint, `f(f(1)) = f(1)`, deflationary below `f(1)`;
    /// (iv) self-adjoint, identity below `f(1)`.
    pub conditions: [bool; 4],
}

/// Evaluates the four equivalent characterizations of Sasaki projections.
pub fn sasaki_characterization(f: &LinMap) -> Result<SasakiReport, KernelError> {
    if !f.is_endo() {
        return Err(KernelError::NotEndomorphism);
    }
    let x = f.dom();
    let a = f.apply(x.top());
    let self_adjoint = f.is_self_adjoint();
    let c1 = x.elements().all(|y| f.apply(y) == x.project(a, y));
    let idempotent = x.elements().all(|y| f.apply(f.apply(y)) == f.apply(y));
    let range_is_downset = f.range() == x.down_set(a).collect::<Vec<_>>();
    let c2 = self_adjoint && idempotent && range_is_downset;
    let c3 = self_adjoint && f.apply(a) == a && x.down_set(a).all(|u| x.leq(f.apply(u), u));
    let c4 = self_adjoint && x.down_set(a).all(|u| f.apply(u) == u);
    let conditions = [c1, c2, c3, c4];
    if conditions.iter().any(|&c| c != c1) {
        return Err(KernelError::EquivalenceMismatch(format!(
            "Sasaki characterizations evaluate to {conditions:?}"
        )));
    }
    Ok(SasakiReport {
        is_sasaki: c1,
        conditions,
    })
}

#[derive(Clone, Debug)]
pub struct KernelReport {
    pub k_star_k_identity: bool,
    pub f_after_k_zero: bool,
    /// Probe maps `m` with `f ∘ m = 0` that were checked.
    pub probes_checked: usize,
    /// A probe `m` with `f ∘ m = 0` but `k k* m ≠ m`.
    pub counterexample: Option<LinMap>,
}

impl KernelReport {
    pub fn holds(&self) -> bool {
        self.k_star_k_identity && self.f_after_k_zero && self.counterexample.is_none()
    }
}

/// Checks `k* k = id`, `f k = 0`, and `k k* m = m` for every candidate `m`
/// into `dom(f)` with `f m = 0`.
pub fn verify_dagger_kernel_against<'a>(
    f: &LinMap,
    kd: &KernelData,
    candidates: impl IntoIterator<Item = &'a LinMap>,
) -> Result<KernelReport, MapError> {
    let k = &kd.embedding;
    if !same_object(k.cod(), f.dom()) {
        return Err(MapError::DomainMismatch);
    }
    let k_star_k_identity = k.is_dagger_mono();
    let f_after_k_zero = k.table().iter().all(|&u| f.apply(u) == f.cod().bottom());
    let mut probes_checked = 0;
    let mut counterexample = None;
    for m in candidates {
        if !same_object(m.cod(), f.dom()) {
            return Err(MapError::DomainMismatch);
        }
        if m.table().iter().any(|&v| f.apply(v) != f.cod().bottom()) {
            continue;
        }
        probes_checked += 1;
        if m.table().iter().any(|&v| k.apply(k.apply_adjoint(v)) != v) {
            counterexample = Some(m.clone());
            break;
        }
    }
    Ok(KernelReport {
        k_star_k_identity,
        f_after_k_zero,
        probes_checked,
        counterexample,
    })
}

/// [`verify_dagger_kernel_against`] with probes enumerated from each object.
pub fn verify_dagger_kernel(
    f: &LinMap,
    kd: &KernelData,
    probe_objects: &[Arc<Oml>],
    homs: &HomCache,
) -> Result<KernelReport, MapError> {
    let mut total = KernelReport {
        k_star_k_identity: true,
        f_after_k_zero: true,
        probes_checked: 0,
        counterexample: None,
    };
    for m_obj in probe_objects {
        let ms = homs.homs(m_obj, f.dom())?;
        let r = verify_dagger_kernel_against(f, kd, ms.iter())?;
        total.k_star_k_identity &= r.k_star_k_identity;
        total.f_after_k_zero &= r.f_after_k_zero;
        total.probes_checked += r.probes_checked;
        if r.counterexample.is_some() {
            total.counterexample = r.counterexample;
            break;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, Default)]
pub struct UniquenessReport {
    /// Alternative factorizations `f = i' ∘ e'` found.
    pub alternatives: usize,
    /// Description of an alternative with no mediating dagger iso.
    pub failure: Option<String>,
}

/// Whether the range of `m` is the downset of `m(1)`.
pub fn range_is_downset(m: &LinMap) -> bool {
    m.range() == m.cod().down_set(m.apply(m.dom().top())).collect::<Vec<_>>()
}

/// Searches every middle object for factorizations `f = i' ∘ e'` with `i'` a
/// dagger mono whose range is a downset and `e'` zero-epi, and checks each is
/// related to `fac` by a dagger iso `φ: ↓f(1) → M` with `e' = φ e_f` and
/// `i' φ = image_emb`.
pub fn verify_factorization_uniqueness(
    f: &LinMap,
    fac: &Factorization,
    middles: &[Arc<Oml>],
    homs: &HomCache,
) -> Result<UniquenessReport, MapError> {
    let mut report = UniquenessReport::default();
    let image = fac.image_emb.dom();
    for m_obj in middles {
        let monos: Vec<LinMap> = homs
            .homs(m_obj, f.cod())?
            .iter()
            .filter(|i| i.is_dagger_mono() && range_is_downset(i))
            .cloned()
            .collect();
        if monos.is_empty() {
            continue;
        }
        let epis: Vec<LinMap> = homs
            .homs(f.dom(), m_obj)?
            .iter()
            .filter(|e| e.is_zero_epi())
            .cloned()
            .collect();
        let isos: Vec<LinMap> = if image.len() == m_obj.len() {
            homs.homs(image, m_obj)?
                .iter()
                .filter(|p| p.is_dagger_iso())
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        for i in &monos {
            for e in &epis {
                if f.dom().elements().any(|x| i.apply(e.apply(x)) != f.apply(x)) {
                    continue;
                }
                report.alternatives += 1;
                let mediated = isos.iter().any(|phi| {
                    f.dom().elements().all(|x| e.apply(x) == phi.apply(fac.e_f.apply(x)))
                        && image.elements().all(|u| i.apply(phi.apply(u)) == fac.image_emb.apply(u))
                });
                if !mediated {
                    report.failure = Some(format!(
                        "alternative through a {}-element object with i' = {:?}, e' = {:?} has no mediating dagger iso",
                        m_obj.len(),
                        i.table(),
                        e.table()
                    ));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// `f` is zero-epi by the defining quantifier: every `g: cod(f) → C` with
/// `g f = 0` is itself zero, for `C` ranging over the probe objects and
/// `cod(f)` itself.
pub fn zero_epi_by_quantifier(
    f: &LinMap,
    probe_objects: &[Arc<Oml>],
    homs: &HomCache,
) -> Result<bool, MapError> {
    let mut targets: Vec<Arc<Oml>> = probe_objects.to_vec();
    targets.push(f.cod().clone());
    for c in &targets {
        for g in homs.homs(f.cod(), c)?.iter() {
            let kills = f.table().iter().all(|&y| g.apply(y) == c.bottom());
            if kills && !g.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linmap::enumerate_linmaps;

    fn arc(o: Oml) -> Arc<Oml> {
        Arc::new(o)
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let m = arc(catalog::mo(2).unwrap());
        let k = kernel(&LinMap::identity(&m));
        assert_eq!(k.k_elem, m.bottom());
        assert_eq!(k.k_obj.len(), 1);
        let k = kernel(&LinMap::zero(&m, &m));
        assert_eq!(k.k_elem, m.top());
        assert_eq!(*k.k_obj, *m);
        assert!(k.embedding.is_identity());
    }

    #[test]
    fn kernel_of_self_adjoint_sasaki_map() {
        let m = arc(catalog::mo(3).unwrap());
        for a in m.elements() {
            let p = LinMap::sasaki(&m, a).unwrap();
            assert_eq!(kernel(&p).k_elem, m.ortho(a));
        }
    }

    #[test]
    fn embedding_adjoint_is_sasaki() {
        let p = arc(catalog::powerset(2).unwrap());
        let a = ElemId::new(1);
        let e = downset_embedding(&p, a).unwrap();
        let pi = compose(&e, &e.adjoint()).unwrap();
        for y in p.elements() {
            assert_eq!(pi.apply(y), p.meet(a, y));
        }
        assert!(e.is_dagger_mono());
        assert!(downset_embedding(&p, p.top()).unwrap().is_identity());
        assert_eq!(downset_embedding(&p, p.bottom()).unwrap().dom().len(), 1);
    }

    #[test]
    fn cokernel_examples() {
        let m = arc(catalog::mo(2).unwrap());
        let c = cokernel(&LinMap::identity(&m));
        assert_eq!(c.cod().len(), 1);
        let c = cokernel(&LinMap::zero(&m, &m));
        assert!(c.is_identity());
        for f in enumerate_linmaps(&m, &m).unwrap() {
            assert_eq!(cokernel(&f).is_zero(), f.is_zero_epi());
            assert!(compose(&cokernel(&f), &f).unwrap().is_zero());
        }
    }

    #[test]
    fn sasaki_map_factorization() {
        let m = arc(catalog::mo(2).unwrap());
        for a in m.elements() {
            let p = LinMap::sasaki(&m, a).unwrap();
            let fac = factorize(&p);
            assert!(fac.e_f.is_dagger_epi());
            assert!(fac.image_emb.is_dagger_mono());
            assert!(compose(&fac.e_f, &fac.image_emb).unwrap().is_identity());
        }
    }

    #[test]
    fn restrict_corestrict_precondition() {
        let m = arc(catalog::mo(2).unwrap());
        let id = LinMap::identity(&m);
        let x = m.find("x1").unwrap();
        assert!(matches!(
            restrict_corestrict(&id, x),
            Err(KernelError::PreconditionFailed(_))
        ));
        let (co, re) = restrict_corestrict(&id, m.top()).unwrap();
        assert!(co.is_identity());
        assert_eq!(co.adjoint(), re);
    }

    #[test]
    fn characterization_of_identity_zero_and_non_self_adjoint() {
        let m = arc(catalog::mo(2).unwrap());
        assert!(sasaki_characterization(&LinMap::identity(&m)).unwrap().is_sasaki);
        assert!(sasaki_characterization(&LinMap::zero(&m, &m)).unwrap().is_sasaki);
        let c = arc(catalog::chain2());
        assert_eq!(
            sasaki_characterization(&LinMap::zero(&m, &c)).unwrap_err(),
            KernelError::NotEndomorphism
        );
        for f in enumerate_linmaps(&m, &m).unwrap() {
            let r = sasaki_characterization(&f).unwrap();
            if !f.is_self_adjoint() {
                assert_eq!(r.conditions, [false; 4]);
            }
        }
    }

    #[test]
    fn dagger_kernel_of_zero_and_identity() {
        let m = arc(catalog::mo(2).unwrap());
        let probes = vec![arc(catalog::chain2()), arc(catalog::powerset(2).unwrap()), m.clone()];
        let homs = HomCache::new(8);
        let z = LinMap::zero(&m, &m);
        let r = verify_dagger_kernel(&z, &kernel(&z), &probes, &homs).unwrap();
        assert!(r.holds());
        let all: usize = probes.iter().map(|p| homs.homs(p, &m).unwrap().len()).sum();
        assert_eq!(r.probes_checked, all);
        let id = LinMap::identity(&m);
        let r = verify_dagger_kernel(&id, &kernel(&id), &probes, &homs).unwrap();
        assert!(r.holds());
        assert_eq!(r.probes_checked, probes.len());
    }

    #[test]
    fn a_wrong_kernel_is_caught() {
        let m = arc(catalog::mo(2).unwrap());
        let z = LinMap::zero(&m, &m);
        // pretend the kernel of the zero map is ↓x1
        let x = m.find("x1").unwrap();
        let emb = downset_embedding(&m, x).unwrap();
        let fake = KernelData {
            k_elem: x,
            k_obj: emb.dom().clone(),
            embedding: emb,
        };
        let r = verify_dagger_kernel_against(&z, &fake, [LinMap::identity(&m)].iter()).unwrap();
        assert!(!r.holds());
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn dagger_mono_onto_a_non_downset() {
        // 1 |-> 1 from the 2-chain into 2^2: range {0, 1} is not a downset
        let c = arc(catalog::chain2());
        let p = arc(catalog::powerset(2).unwrap());
        let f = LinMap::new(c, p.clone(), vec![p.bottom(), p.top()]).unwrap();
        assert!(f.is_dagger_mono() && f.is_zero_epi());
        assert!(!range_is_downset(&f));
        let fac = factorize(&f);
        assert!(!fac.e_f.is_dagger_iso());
        assert_eq!(fac.image_emb.dom().len(), 4);
    }
}
