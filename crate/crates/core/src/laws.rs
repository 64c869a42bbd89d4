//! The full invariant suite over the built-in catalog, one [`Check`] per law.
//!
//! Element-wise laws run over every catalog lattice with at most `max_size`
//! elements. Hom-set laws run over every pair of orthomodular objects whose
//! domain has at most `enum_bound` elements. Universal properties quantify over
//! enumerated morphisms between objects of at most `universal_bound` elements.
//! Checks over composable pairs sample `samples` pairs per object triple with
//! a seeded generator when the pair space is larger than that.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog;
use crate::constructions::{self, biproduct, copair, free_oml};
use crate::galois::{self, compose_galois, gamma, lambda, upper_from_lower, GaloisMorphism};
use crate::io;
use crate::kernel::{self, cokernel, factorize, kernel, restrict_corestrict, sasaki_characterization};
use crate::linmap::{compose, enumerate_linmaps_bounded, same_object, HomCache, LinMap};
use crate::oml::{ElemId, Oml};
use crate::report::{Check, Report};

/// Naive function spaces up to this size are enumerated in full as an oracle.
pub const NAIVE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct LawConfig {
    pub max_size: usize,
    pub enum_bound: usize,
    pub universal_bound: usize,
    pub seed: u64,
    pub samples: usize,
    /// Additional lattices; `Err` holds the reason one failed to build.
    pub extra: Vec<(String, Result<Arc<Oml>, String>)>,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            max_size: 16,
            enum_bound: 8,
            universal_bound: 6,
            seed: 0x5eed,
            samples: 256,
            extra: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
struct Obj {
    name: String,
    oml: Arc<Oml>,
    from_catalog: bool,
}

struct Hom {
    dom: usize,
    cod: usize,
    maps: Arc<Vec<LinMap>>,
}

struct Ctx<'a> {
    cfg: &'a LawConfig,
    lattices: Vec<Obj>,
    /// Orthomodular lattices up to `max_size`, without structural duplicates.
    objects: Vec<Obj>,
    cache: HomCache,
    homs: Vec<Hom>,
}

type Outcome = Result<(), String>;

fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

/// First failure in input order, independent of scheduling.
fn all_of<T: Sync>(items: &[T], f: impl Fn(&T) -> Outcome + Sync + Send) -> Outcome {
    match items.par_iter().map(f).find_map_first(|r| r.err()) {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

fn show_map(f: &LinMap) -> String {
    let body: Vec<String> = f
        .dom()
        .elements()
        .map(|x| format!("{}->{}", f.dom().label(x), f.cod().label(f.apply(x))))
        .collect();
    format!("{{{}}}", body.join(", "))
}

fn plural(n: usize, what: &str) -> String {
    format!("{n} {what}{}", if n == 1 { "" } else { "s" })
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a LawConfig) -> Ctx<'a> {
        let mut lattices: Vec<Obj> = catalog::catalog()
            .into_iter()
            .filter(|e| e.oml.len() <= cfg.max_size)
            .map(|e| Obj {
                name: e.name.to_string(),
                oml: e.oml,
                from_catalog: true,
            })
            .collect();
        for (name, r) in &cfg.extra {
            if let Ok(o) = r {
                lattices.push(Obj {
                    name: name.clone(),
                    oml: o.clone(),
                    from_catalog: false,
                });
            }
        }
        let mut objects: Vec<Obj> = Vec::new();
        for l in &lattices {
            if l.oml.is_orthomodular() && !objects.iter().any(|o| same_object(&o.oml, &l.oml)) {
                objects.push(l.clone());
            }
        }
        let cache = HomCache::new(cfg.enum_bound);
        let pairs: Vec<(usize, usize)> = (0..objects.len())
            .filter(|&i| objects[i].oml.len() <= cfg.enum_bound)
            .flat_map(|i| (0..objects.len()).map(move |j| (i, j)))
            .collect();
        let homs = pairs
            .par_iter()
            .map(|&(i, j)| Hom {
                dom: i,
                cod: j,
                maps: cache
                    .homs(&objects[i].oml, &objects[j].oml)
                    .expect("domain within the enumeration bound"),
            })
            .collect();
        Ctx {
            cfg,
            lattices,
            objects,
            cache,
            homs,
        }
    }

    fn name(&self, i: usize) -> &str {
        &self.objects[i].name
    }

    fn hom(&self, dom: usize, cod: usize) -> Option<&Hom> {
        self.homs.iter().find(|h| h.dom == dom && h.cod == cod)
    }

    fn oms(&self) -> Vec<&Obj> {
        self.lattices.iter().filter(|l| l.oml.is_orthomodular()).collect()
    }

    /// Object indices with at most `bound` elements.
    fn small(&self, bound: usize) -> Vec<usize> {
        (0..self.objects.len())
            .filter(|&i| self.objects[i].oml.len() <= bound)
            .collect()
    }

    fn universal(&self) -> usize {
        self.cfg.universal_bound.min(self.cfg.enum_bound)
    }

    /// Every enumerated map between objects of at most `bound` elements.
    fn maps_within(&self, bound: usize) -> Vec<(&Hom, &LinMap)> {
        self.homs
            .iter()
            .filter(|h| self.objects[h.dom].oml.len() <= bound && self.objects[h.cod].oml.len() <= bound)
            .flat_map(|h| h.maps.iter().map(move |f| (h, f)))
            .collect()
    }

    fn all_maps(&self) -> Vec<(&Hom, &LinMap)> {
        self.homs.iter().flat_map(|h| h.maps.iter().map(move |f| (h, f))).collect()
    }

    fn map_witness(&self, h: &Hom, f: &LinMap, what: &str) -> String {
        format!("{}: {} -> {} {}: {what}", "f", self.name(h.dom), self.name(h.cod), show_map(f))
    }

    fn lattice_scope(&self, ls: &[&Obj]) -> String {
        format!("{} up to {} elements", plural(ls.len(), "lattice"), self.cfg.max_size)
    }

    fn map_scope(&self, n: usize, bound: usize) -> String {
        format!("{} between objects of at most {bound} elements", plural(n, "map"))
    }
}

fn check(law: &str, scope: String, r: Outcome) -> Check {
    Check::from_result(law, scope, r)
}

// ---- lattices ------------------------------------------------------------

fn lattice_meet_join(cx: &Ctx) -> Check {
    let ls: Vec<&Obj> = cx.lattices.iter().collect();
    let r = all_of(&ls, |l| {
        let o = &l.oml;
        for x in o.elements() {
            for y in o.elements() {
                let m = o.meet(x, y);
                let j = o.join(x, y);
                let ok = o.leq(m, x)
                    && o.leq(m, y)
                    && o.leq(x, j)
                    && o.leq(y, j)
                    && o.elements().all(|z| {
                        (!(o.leq(z, x) && o.leq(z, y)) || o.leq(z, m))
                            && (!(o.leq(x, z) && o.leq(y, z)) || o.leq(j, z))
                    });
                ensure(ok, || format!("{}: meet or join of {}, {} is wrong", l.name, o.label(x), o.label(y)))?;
            }
        }
        Ok(())
    });
    check("lattice.meet-join", cx.lattice_scope(&ls), r)
}

fn lattice_ortho(cx: &Ctx) -> Check {
    let ls: Vec<&Obj> = cx.lattices.iter().collect();
    let r = all_of(&ls, |l| {
        let o = &l.oml;
        let lab = |x| o.label(x).to_string();
        ensure(o.ortho(o.bottom()) == o.top(), || format!("{}: 0 is not orthogonal to 1", l.name))?;
        for x in o.elements() {
            let xp = o.ortho(x);
            ensure(o.ortho(xp) == x, || format!("{}: {} is not involutive", l.name, lab(x)))?;
            ensure(o.meet(x, xp) == o.bottom() && o.join(x, xp) == o.top(), || {
                format!("{}: complement law fails at {}", l.name, lab(x))
            })?;
            for y in o.elements() {
                let yp = o.ortho(y);
                ensure(!o.leq(x, y) || o.leq(yp, xp), || {
                    format!("{}: ortho not antitone at {}, {}", l.name, lab(x), lab(y))
                })?;
                ensure(
                    o.ortho(o.join(x, y)) == o.meet(xp, yp) && o.ortho(o.meet(x, y)) == o.join(xp, yp),
                    || format!("{}: De Morgan fails at {}, {}", l.name, lab(x), lab(y)),
                )?;
            }
        }
        Ok(())
    });
    check("lattice.ortholattice", cx.lattice_scope(&ls), r)
}

fn lattice_om_conditions(cx: &Ctx) -> Check {
    let ls: Vec<&Obj> = cx.lattices.iter().collect();
    let r = all_of(&ls, |l| {
        let rep = l.oml.verify_orthomodular().map_err(|e| format!("{}: {e}", l.name))?;
        ensure(
            rep.per_condition.iter().all(|&c| c == rep.holds) && rep.holds == l.oml.is_orthomodular(),
            || format!("{}: conditions evaluate to {:?}", l.name, rep.per_condition),
        )
    });
    check("lattice.orthomodular-conditions-agree", cx.lattice_scope(&ls), r)
}

fn catalog_om_flags(cx: &Ctx) -> Check {
    let ls: Vec<&Obj> = cx.lattices.iter().filter(|l| l.from_catalog).collect();
    let r = all_of(&ls, |l| {
        let rep = l.oml.verify_orthomodular().map_err(|e| e.to_string())?;
        if l.name == "benzene" {
            ensure(!rep.holds && rep.witness.is_some(), || "benzene passes orthomodularity".into())
        } else {
            ensure(rep.holds, || format!("{} is not orthomodular", l.name))
        }
    });
    check("catalog.orthomodular-flags", format!("{} catalog lattices", ls.len()), r)
}

fn included_lattices(cx: &Ctx) -> Vec<Check> {
    cx.cfg
        .extra
        .iter()
        .map(|(name, r)| {
            let scope = format!("included lattice {name}");
            match r {
                Err(e) => Check::fail("lattice.build", scope, e.clone()),
                Ok(o) => match o.verify_orthomodular() {
                    Ok(rep) if rep.holds => Check::pass("lattice.orthomodular", scope),
                    Ok(rep) => {
                        let (x, y) = rep.witness.expect("failing report carries a witness");
                        Check::fail(
                            "lattice.orthomodular",
                            scope,
                            format!(
                                "x = {}, y = {}: condition {} fails",
                                o.label(x),
                                o.label(y),
                                rep.failing_condition.map_or(0, |c| c + 1)
                            ),
                        )
                    }
                    Err(e) => Check::fail("lattice.orthomodular", scope, e.to_string()),
                },
            }
        })
        .collect()
}

fn sasaki_facts(cx: &Ctx) -> Check {
    let ls = cx.oms();
    let r = all_of(&ls, |l| {
        let o = &l.oml;
        let pi = |a, y| o.sasaki(a, y).expect("orthomodular");
        for a in o.elements() {
            let ap = o.ortho(a);
            let at = |y: ElemId| format!("{}: a = {}, y = {}", l.name, o.label(a), o.label(y));
            for y in o.elements() {
                let p = pi(a, y);
                ensure((p == y) == o.leq(y, a), || format!("{}: fixed points", at(y)))?;
                let b = pi(a, o.ortho(pi(a, o.ortho(y))));
                ensure(b == o.meet(a, y) && o.leq(b, y), || format!("{}: double projection", at(y)))?;
                ensure((p == o.bottom()) == o.leq(y, ap), || format!("{}: kernel", at(y)))?;
                for z in o.elements() {
                    ensure(o.orthogonal(p, z) == o.orthogonal(y, pi(a, z)), || {
                        format!("{}, z = {}: self-adjointness", at(y), o.label(z))
                    })?;
                }
            }
        }
        Ok(())
    });
    check("sasaki.facts", cx.lattice_scope(&ls), r)
}

fn downsets(cx: &Ctx) -> Check {
    let ls = cx.oms();
    let r = all_of(&ls, |l| {
        let o = &l.oml;
        for a in o.elements() {
            let (d, embed) = o.downset(a).map_err(|e| format!("{}: downset of {}: {e}", l.name, o.label(a)))?;
            let at = || format!("{}: downset of {}", l.name, o.label(a));
            ensure(d.is_orthomodular(), || format!("{} is not orthomodular", at()))?;
            ensure(embed[d.top().index()] == a && embed[0] == o.bottom(), at)?;
            for u in d.elements() {
                let up = d.ortho(u);
                ensure(embed[up.index()] == o.meet(a, o.ortho(embed[u.index()])), at)?;
                ensure(d.join(u, up) == d.top() && d.meet(u, up) == d.bottom(), at)?;
                for v in d.elements() {
                    ensure(d.leq(u, v) == o.leq(embed[u.index()], embed[v.index()]), at)?;
                }
            }
        }
        Ok(())
    });
    check("lattice.downsets", cx.lattice_scope(&ls), r)
}

fn commutes_symmetric(cx: &Ctx) -> Check {
    let ls = cx.oms();
    let r = all_of(&ls, |l| {
        let o = &l.oml;
        for x in o.elements() {
            for y in o.elements() {
                ensure(o.commutes(x, y) == o.commutes(y, x), || {
                    format!("{}: {} commutes with {} but not conversely", l.name, o.label(x), o.label(y))
                })?;
            }
        }
        Ok(())
    });
    check("lattice.commutes-symmetric", cx.lattice_scope(&ls), r)
}

fn io_round_trip(cx: &Ctx) -> Check {
    let ls: Vec<&Obj> = cx.lattices.iter().collect();
    let r = all_of(&ls, |l| {
        let text = io::serialize_oml(&l.oml, &l.name);
        let back = io::parse_oml(&text).map_err(|e| format!("{}: {e}", l.name))?;
        ensure(back == *l.oml && back.labels() == l.oml.labels(), || {
            format!("{}: parse(serialize) differs", l.name)
        })?;
        ensure(io::serialize_oml(&back, &l.name) == text, || format!("{}: not canonical", l.name))
    });
    check("io.round-trip", cx.lattice_scope(&ls), r)
}

// ---- hom-sets ------------------------------------------------------------

/// Join preservation on a raw table, checked without the library.
fn naive_join_preserving(x: &Oml, y: &Oml, t: &[ElemId]) -> bool {
    t[0] == y.bottom()
        && x.elements().all(|a| {
            x.elements()
                .all(|b| t[x.join(a, b).index()] == y.join(t[a.index()], t[b.index()]))
        })
}

/// A lower Galois table, checked without the library.
fn naive_galois_lower(x: &Oml, y: &Oml, t: &[ElemId]) -> bool {
    let antitone = x
        .elements()
        .all(|a| x.up_set(a).all(|b| y.leq(t[b.index()], t[a.index()])));
    if !antitone {
        return false;
    }
    let up = upper_from_lower(x, y, t);
    let up_antitone = y
        .elements()
        .all(|a| y.up_set(a).all(|b| x.leq(up[b.index()], up[a.index()])));
    up_antitone
        && x.elements()
            .all(|a| y.elements().all(|b| x.leq(a, up[b.index()]) == y.leq(b, t[a.index()])))
}

/// Iterates every table `x → y` (odometer order), stopping early on `Err`.
fn for_each_table(nx: usize, ny: usize, mut f: impl FnMut(&[ElemId]) -> Outcome) -> Outcome {
    let mut t = vec![ElemId::BOTTOM; nx];
    loop {
        f(&t)?;
        let mut i = nx;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if t[i].index() + 1 < ny {
                t[i] = ElemId::new(t[i].index() + 1);
                break;
            }
            t[i] = ElemId::BOTTOM;
        }
    }
}

fn naive_space(cx: &Ctx, h: &Hom) -> Option<u64> {
    let nx = cx.objects[h.dom].oml.len() as u32;
    (cx.objects[h.cod].oml.len() as u64)
        .checked_pow(nx)
        .filter(|&s| s <= NAIVE_LIMIT)
}

fn enumeration_naive(cx: &Ctx) -> Check {
    let hs: Vec<&Hom> = cx.homs.iter().filter(|h| naive_space(cx, h).is_some()).collect();
    let r = all_of(&hs, |h| {
        let (x, y) = (&cx.objects[h.dom].oml, &cx.objects[h.cod].oml);
        let mut count = 0usize;
        for_each_table(x.len(), y.len(), |t| {
            if naive_join_preserving(x, y, t) {
                count += 1;
            }
            Ok(())
        })?;
        ensure(count == h.maps.len(), || {
            format!(
                "{} -> {}: enumeration found {} maps, naive filter {count}",
                cx.name(h.dom),
                cx.name(h.cod),
                h.maps.len()
            )
        })
    });
    let scope = format!("{} with at most {NAIVE_LIMIT} functions", plural(hs.len(), "object pair"));
    check("linmap.enumeration-naive-count", scope, r)
}

fn enumeration_valid(cx: &Ctx) -> Check {
    let hs: Vec<&Hom> = cx.homs.iter().collect();
    let r = all_of(&hs, |h| {
        let pair = || format!("{} -> {}", cx.name(h.dom), cx.name(h.cod));
        ensure(h.maps.windows(2).all(|w| w[0].table() < w[1].table()), || {
            format!("{}: not strictly sorted", pair())
        })?;
        for f in h.maps.iter() {
            let again = LinMap::new(f.dom().clone(), f.cod().clone(), f.table().to_vec());
            ensure(again.as_ref() == Ok(f), || format!("{}: {} fails validation", pair(), show_map(f)))?;
            ensure(f.is_monotone(), || format!("{}: {} is not monotone", pair(), show_map(f)))?;
        }
        let zero = LinMap::zero(f_dom(cx, h), f_cod(cx, h));
        ensure(h.maps.first() == Some(&zero), || format!("{}: zero map is not the first map", pair()))?;
        ensure(h.dom != h.cod || h.maps.iter().any(|g| g.is_identity()), || {
            format!("{}: identity missing", pair())
        })
    });
    let n: usize = hs.iter().map(|h| h.maps.len()).sum();
    check(
        "linmap.enumeration-valid",
        format!("{} over {}", plural(n, "map"), plural(hs.len(), "object pair")),
        r,
    )
}

fn f_dom<'c>(cx: &'c Ctx, h: &Hom) -> &'c Arc<Oml> {
    &cx.objects[h.dom].oml
}

fn f_cod<'c>(cx: &'c Ctx, h: &Hom) -> &'c Arc<Oml> {
    &cx.objects[h.cod].oml
}

fn adjoint_laws(cx: &Ctx) -> Vec<Check> {
    let maps = cx.all_maps();
    let scope = cx.map_scope(maps.len(), cx.cfg.enum_bound);
    let involutive = all_of(&maps, |(h, f)| {
        let fs = f.adjoint();
        ensure(fs.adjoint() == **f, || cx.map_witness(h, f, "f** differs from f"))?;
        ensure(fs.table() == f.adjoint_table(), || cx.map_witness(h, f, "stored adjoint differs"))
    });
    let orthogonality = all_of(&maps, |(h, f)| {
        let (x, y) = (f.dom(), f.cod());
        for a in x.elements() {
            for b in y.elements() {
                ensure(y.orthogonal(f.apply(a), b) == x.orthogonal(a, f.apply_adjoint(b)), || {
                    cx.map_witness(h, f, &format!("x = {}, y = {}", x.label(a), y.label(b)))
                })?;
            }
        }
        Ok(())
    });
    // Candidate adjoint tables are products of per-element choices, so the
    // table is unique exactly when every element has one admissible value.
    let unique = all_of(&maps, |(h, f)| {
        let (x, y) = (f.dom(), f.cod());
        for b in y.elements() {
            let n = x
                .elements()
                .filter(|&c| x.elements().all(|a| y.orthogonal(f.apply(a), b) == x.orthogonal(a, c)))
                .count();
            ensure(n == 1, || {
                cx.map_witness(h, f, &format!("{n} admissible adjoint values at {}", y.label(b)))
            })?;
        }
        Ok(())
    });
    vec![
        check("linmap.adjoint-involutive", scope.clone(), involutive),
        check("linmap.adjoint-orthogonality", scope.clone(), orthogonality),
        check("linmap.adjoint-unique", scope, unique),
    ]
}

/// Composable pairs `(f, g)` for the object triple, all or a seeded sample.
fn composable<'h>(cx: &Ctx, f: &'h Hom, g: &'h Hom, salt: u64) -> (Vec<(&'h LinMap, &'h LinMap)>, bool) {
    let total = f.maps.len() * g.maps.len();
    if total <= cx.cfg.samples {
        let all = f.maps.iter().flat_map(|a| g.maps.iter().map(move |b| (a, b))).collect();
        return (all, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cx.cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let picks = sample(&mut rng, total, cx.cfg.samples)
        .into_iter()
        .map(|k| (&f.maps[k / g.maps.len()], &g.maps[k % g.maps.len()]))
        .collect();
    (picks, false)
}

fn triples<'c>(cx: &'c Ctx) -> Vec<(&'c Hom, &'c Hom)> {
    let mut out = Vec::new();
    for f in &cx.homs {
        for g in cx.homs.iter().filter(|g| g.dom == f.cod) {
            out.push((f, g));
        }
    }
    out
}

fn functor_scope(cx: &Ctx, n: usize, sampled: bool) -> String {
    let mut s = format!("{} over {} object triples", plural(n, "composable pair"), triples(cx).len());
    if sampled {
        s.push_str(&format!(", sampled (seed {})", cx.cfg.seed));
    }
    s
}

fn dagger_functor(cx: &Ctx) -> Check {
    let ts = triples(cx);
    let results: Vec<(usize, bool, Outcome)> = ts
        .par_iter()
        .enumerate()
        .map(|(i, (fh, gh))| {
            let (pairs, exhaustive) = composable(cx, fh, gh, i as u64);
            let r = pairs.iter().try_for_each(|(f, g)| {
                let gf = compose(g, f).map_err(|e| e.to_string())?;
                let rhs = compose(&f.adjoint(), &g.adjoint()).map_err(|e| e.to_string())?;
                ensure(gf.adjoint() == rhs, || {
                    format!("f = {}, g = {}: (g f)* differs from f* g*", show_map(f), show_map(g))
                })?;
                let id = LinMap::identity(f.dom());
                ensure(compose(f, &id).as_ref() == Ok(*f) && compose(&LinMap::identity(f.cod()), f).as_ref() == Ok(*f), || {
                    format!("f = {}: identity law", show_map(f))
                })
            });
            (pairs.len(), !exhaustive, r)
        })
        .collect();
    let n = results.iter().map(|r| r.0).sum();
    let sampled = results.iter().any(|r| r.1);
    let r = results.into_iter().map(|r| r.2).find(|r| r.is_err()).unwrap_or(Ok(()));
    check("linmap.dagger-functor", functor_scope(cx, n, sampled), r)
}

// ---- Galois bridge -------------------------------------------------------

fn galois_round_trip(cx: &Ctx) -> Check {
    let maps = cx.all_maps();
    let r = all_of(&maps, |(h, f)| {
        let l = lambda(f);
        let gm = galois::make_galois(
            f.dom().clone(),
            f.cod().clone(),
            l.lower().to_vec(),
            l.upper().to_vec(),
        )
        .map_err(|e| cx.map_witness(h, f, &format!("lambda(f) invalid: {e}")))?;
        ensure(gamma(&gm).as_ref() == Ok(*f), || cx.map_witness(h, f, "gamma(lambda(f)) differs"))?;
        ensure(upper_from_lower(f.dom(), f.cod(), gm.lower()) == gm.upper(), || {
            cx.map_witness(h, f, "upper map differs from the one determined by the lower map")
        })?;
        ensure(lambda(&f.adjoint()) == gm.dagger() && gm.dagger().dagger() == gm, || {
            cx.map_witness(h, f, "lambda does not preserve the dagger")
        })
    });
    let ids = all_of(&cx.objects, |o| {
        ensure(lambda(&LinMap::identity(&o.oml)) == GaloisMorphism::identity(&o.oml), || {
            format!("{}: lambda(id) is not (ortho, ortho)", o.name)
        })
    });
    check(
        "galois.round-trip",
        cx.map_scope(maps.len(), cx.cfg.enum_bound),
        r.and(ids),
    )
}

fn galois_naive(cx: &Ctx) -> Check {
    let hs: Vec<&Hom> = cx.homs.iter().filter(|h| naive_space(cx, h).is_some()).collect();
    let r = all_of(&hs, |h| {
        let (x, y) = (f_dom(cx, h), f_cod(cx, h));
        let mut count = 0usize;
        for_each_table(x.len(), y.len(), |t| {
            if !naive_galois_lower(x, y, t) {
                return Ok(());
            }
            count += 1;
            let gm = galois::make_galois(x.clone(), y.clone(), t.to_vec(), upper_from_lower(x, y, t))
                .map_err(|e| e.to_string())?;
            let f = gamma(&gm).map_err(|e| format!("gamma of a Galois morphism is not linear: {e}"))?;
            ensure(lambda(&f) == gm, || format!("{} -> {}: lambda(gamma(g)) differs", cx.name(h.dom), cx.name(h.cod)))
        })?;
        ensure(count == h.maps.len(), || {
            format!(
                "{} -> {}: {count} Galois morphisms but {} linear maps",
                cx.name(h.dom),
                cx.name(h.cod),
                h.maps.len()
            )
        })
    });
    let scope = format!("{} with at most {NAIVE_LIMIT} functions", plural(hs.len(), "object pair"));
    check("galois.hom-bijection-naive", scope, r)
}

fn galois_functor(cx: &Ctx) -> Check {
    let ts = triples(cx);
    let results: Vec<(usize, bool, Outcome)> = ts
        .par_iter()
        .enumerate()
        .map(|(i, (fh, gh))| {
            let (pairs, exhaustive) = composable(cx, fh, gh, !(i as u64));
            let r = pairs.iter().try_for_each(|(f, g)| {
                let lhs = compose_galois(&lambda(g), &lambda(f)).map_err(|e| e.to_string())?;
                let rhs = lambda(&compose(g, f).map_err(|e| e.to_string())?);
                ensure(lhs == rhs, || {
                    format!("f = {}, g = {}: lambda(g f) differs", show_map(f), show_map(g))
                })
            });
            (pairs.len(), !exhaustive, r)
        })
        .collect();
    let n = results.iter().map(|r| r.0).sum();
    let sampled = results.iter().any(|r| r.1);
    let r = results.into_iter().map(|r| r.2).find(|r| r.is_err()).unwrap_or(Ok(()));
    check("galois.functor", functor_scope(cx, n, sampled), r)
}

// ---- kernels and factorization -------------------------------------------

fn probe_objects(cx: &Ctx) -> Vec<Arc<Oml>> {
    cx.small(cx.universal()).into_iter().map(|i| cx.objects[i].oml.clone()).collect()
}

fn dagger_kernel(cx: &Ctx) -> Check {
    let b = cx.universal();
    let maps = cx.maps_within(b);
    let probes = probe_objects(cx);
    let r = all_of(&maps, |(h, f)| {
        let kd = kernel(f);
        ensure(kd.k_elem == f.dom().ortho(f.apply_adjoint(f.cod().top())), || cx.map_witness(h, f, "kernel element"))?;
        let rep = kernel::verify_dagger_kernel(f, &kd, &probes, &cx.cache).map_err(|e| e.to_string())?;
        ensure(rep.k_star_k_identity, || cx.map_witness(h, f, "k* k is not the identity"))?;
        ensure(rep.f_after_k_zero, || cx.map_witness(h, f, "f k is not zero"))?;
        match rep.counterexample {
            Some(m) => Err(cx.map_witness(h, f, &format!("m = {} has f m = 0 but k k* m != m", show_map(&m)))),
            None => Ok(()),
        }
    });
    check("kernel.dagger-kernel", cx.map_scope(maps.len(), b), r)
}

fn cokernels(cx: &Ctx) -> Check {
    let maps = cx.all_maps();
    let r = all_of(&maps, |(h, f)| {
        let c = cokernel(f);
        let dual = kernel(&f.adjoint()).embedding.adjoint();
        ensure(c == dual, || cx.map_witness(h, f, "coker(f) differs from ker(f*)*"))?;
        ensure(compose(&c, f).map_err(|e| e.to_string())?.is_zero(), || {
            cx.map_witness(h, f, "coker(f) f is not zero")
        })?;
        ensure(c.is_zero() == f.is_zero_epi(), || cx.map_witness(h, f, "coker(f) = 0 disagrees with f(1) = 1"))?;
        let y = f.cod();
        let a = y.ortho(f.apply(f.dom().top()));
        let emb = kernel::downset_embedding(y, a).map_err(|e| e.to_string())?;
        ensure(y.elements().all(|v| emb.apply(c.apply(v)) == y.sasaki(a, v).expect("orthomodular")), || {
            cx.map_witness(h, f, "coker(f) is not the projection onto f(1)'")
        })
    });
    check("kernel.cokernel", cx.map_scope(maps.len(), cx.cfg.enum_bound), r)
}

fn factorization(cx: &Ctx) -> Check {
    let maps = cx.all_maps();
    let r = all_of(&maps, |(h, f)| {
        let fac = factorize(f);
        let w = |what: &str| cx.map_witness(h, f, what);
        let c = |r: Result<LinMap, crate::linmap::MapError>| r.map_err(|e| e.to_string());
        ensure(c(compose(&fac.image_emb, &fac.e_f))? == **f, || w("i_f e_f differs from f"))?;
        let three = c(compose(&fac.image_emb, &c(compose(&fac.middle, &fac.coimage))?))?;
        ensure(three == **f, || w("image middle coimage differs from f"))?;
        ensure(c(compose(&fac.middle, &fac.coimage))? == fac.e_f, || w("middle coimage differs from e_f"))?;
        ensure(fac.e_f.is_zero_epi() && fac.image_emb.apply(fac.e_f.apply(f.dom().top())) == f.apply(f.dom().top()), || w("e_f is not zero-epi"))?;
        ensure(fac.image_emb.is_dagger_mono(), || w("image is not a dagger mono"))?;
        ensure(fac.coimage.is_dagger_epi(), || w("coimage is not a dagger epi"))?;
        ensure(fac.middle.is_zero_epi() && fac.middle.is_zero_mono(), || w("middle is not zero-epi and zero-mono"))?;
        if f.is_dagger_mono() && kernel::range_is_downset(f) {
            ensure(fac.e_f.is_dagger_iso(), || w("f is a dagger mono onto a downset but e_f is not a dagger iso"))?;
        }
        if kernel::range_is_downset(f) {
            ensure(fac.image_emb.table() == f.cod().down_set(f.apply(f.dom().top())).collect::<Vec<_>>(), || {
                w("image embedding is not the inclusion")
            })?;
        }
        Ok(())
    });
    check("kernel.factorization", cx.map_scope(maps.len(), cx.cfg.enum_bound), r)
}

fn factorization_unique(cx: &Ctx) -> Check {
    let b = cx.universal();
    let maps = cx.maps_within(b);
    let middles = probe_objects(cx);
    let count = std::sync::atomic::AtomicUsize::new(0);
    let r = all_of(&maps, |(h, f)| {
        let fac = factorize(f);
        let rep = kernel::verify_factorization_uniqueness(f, &fac, &middles, &cx.cache).map_err(|e| e.to_string())?;
        count.fetch_add(rep.alternatives, std::sync::atomic::Ordering::Relaxed);
        ensure(rep.alternatives > 0, || cx.map_witness(h, f, "the factorization itself was not found"))?;
        match rep.failure {
            Some(why) => Err(cx.map_witness(h, f, &why)),
            None => Ok(()),
        }
    });
    let scope = format!(
        "{}, {} checked",
        cx.map_scope(maps.len(), b),
        plural(count.into_inner(), "alternative factorization")
    );
    check("kernel.factorization-unique", scope, r)
}

fn zero_epi_quantifier(cx: &Ctx) -> Check {
    let b = cx.universal();
    let maps = cx.maps_within(b);
    let probes = probe_objects(cx);
    let r = all_of(&maps, |(h, f)| {
        let q = kernel::zero_epi_by_quantifier(f, &probes, &cx.cache).map_err(|e| e.to_string())?;
        ensure(q == f.is_zero_epi(), || cx.map_witness(h, f, "zero-epi quantifier disagrees with f(1) = 1"))?;
        let q = kernel::zero_epi_by_quantifier(&f.adjoint(), &probes, &cx.cache).map_err(|e| e.to_string())?;
        ensure(q == f.is_zero_mono(), || cx.map_witness(h, f, "zero-mono quantifier disagrees with f*(1) = 1"))
    });
    check("kernel.zero-epi-quantifier", cx.map_scope(maps.len(), b), r)
}

fn restrictions(cx: &Ctx) -> Check {
    let maps = cx.all_maps();
    let r = all_of(&maps, |(h, f)| {
        let y = f.cod();
        let top = f.apply(f.dom().top());
        for v in y.elements() {
            match restrict_corestrict(f, v) {
                Ok((co, re)) => {
                    ensure(y.leq(top, v), || cx.map_witness(h, f, "precondition not enforced"))?;
                    ensure(co.adjoint() == re, || {
                        cx.map_witness(h, f, &format!("adjoint of the corestriction to {} differs", y.label(v)))
                    })?;
                    if v == top {
                        ensure(co == factorize(f).e_f, || cx.map_witness(h, f, "corestriction to f(1) is not e_f"))?;
                    }
                }
                Err(kernel::KernelError::PreconditionFailed(_)) => {
                    ensure(!y.leq(top, v), || cx.map_witness(h, f, "precondition wrongly rejected"))?
                }
                Err(e) => return Err(cx.map_witness(h, f, &e.to_string())),
            }
        }
        Ok(())
    });
    check("kernel.restrict-corestrict", cx.map_scope(maps.len(), cx.cfg.enum_bound), r)
}

fn self_adjoint_bound(cx: &Ctx) -> Check {
    let maps: Vec<_> = cx.all_maps().into_iter().filter(|(_, f)| f.is_self_adjoint()).collect();
    let r = all_of(&maps, |(h, f)| {
        let x = f.dom();
        for y in x.elements() {
            ensure(x.leq(f.apply(x.ortho(f.apply(x.ortho(y)))), y), || {
                cx.map_witness(h, f, &format!("f(f(y')') not below y = {}", x.label(y)))
            })?;
        }
        ensure(kernel(f).k_elem == x.ortho(f.apply(x.top())), || cx.map_witness(h, f, "kernel is not below f(1)'"))
    });
    check(
        "kernel.self-adjoint",
        format!("{} up to {} elements", plural(maps.len(), "self-adjoint endomap"), cx.cfg.enum_bound),
        r,
    )
}

fn sasaki_maps(cx: &Ctx) -> Check {
    let ls = cx.oms();
    let r = all_of(&ls, |l| {
        let o = &l.oml;
        for a in o.elements() {
            let w = |what: &str| format!("{}: a = {}: {what}", l.name, o.label(a));
            let p = LinMap::sasaki(o, a).map_err(|e| w(&e.to_string()))?;
            ensure(p.is_self_adjoint(), || w("not self-adjoint"))?;
            ensure(compose(&p, &p).ok() == Some(p.clone()), || w("not idempotent"))?;
            let emb = kernel::downset_embedding(o, a).map_err(|e| e.to_string())?;
            ensure(compose(&emb, &emb.adjoint()).ok() == Some(p.clone()), || w("a a* is not the projection"))?;
            ensure(emb.is_dagger_mono(), || w("embedding is not a dagger mono"))?;
            ensure(kernel(&p).k_elem == o.ortho(a), || w("kernel is not the downset of a'"))?;
            let (co, _) = restrict_corestrict(&p, a).map_err(|e| w(&e.to_string()))?;
            let restricted = compose(&p, &emb).map_err(|e| e.to_string())?;
            ensure(compose(&co, &restricted).map_err(|e| e.to_string())?.is_identity(), || {
                w("corestriction after restriction is not the identity")
            })?;
            let rep = sasaki_characterization(&p).map_err(|e| w(&e.to_string()))?;
            ensure(rep.is_sasaki, || w("not recognised as a Sasaki projection"))?;
        }
        Ok(())
    });
    check("sasaki.maps", cx.lattice_scope(&ls), r)
}

fn sasaki_characterization_law(cx: &Ctx) -> Check {
    let hs: Vec<&Hom> = cx.homs.iter().filter(|h| h.dom == h.cod).collect();
    let r = all_of(&hs, |h| {
        let x = f_dom(cx, h);
        let mut found: Vec<Vec<ElemId>> = Vec::new();
        for f in h.maps.iter() {
            let rep = sasaki_characterization(f).map_err(|e| cx.map_witness(h, f, &e.to_string()))?;
            if rep.is_sasaki {
                found.push(f.table().to_vec());
            }
        }
        let mut expected: Vec<Vec<ElemId>> = x
            .elements()
            .map(|a| x.elements().map(|y| x.sasaki(a, y).expect("orthomodular")).collect())
            .collect();
        expected.sort();
        expected.dedup();
        ensure(found == expected, || {
            format!("{}: {} maps satisfy the characterization, expected {}", cx.name(h.dom), found.len(), expected.len())
        })
    });
    let n: usize = hs.iter().map(|h| h.maps.len()).sum();
    check(
        "sasaki.characterization",
        format!("{} of {}", plural(n, "endomap"), plural(hs.len(), "object")),
        r,
    )
}

// ---- constructions -------------------------------------------------------

fn zero_object(cx: &Ctx) -> Check {
    let z = constructions::zero_object();
    let objs = cx.small(cx.cfg.enum_bound);
    let r = all_of(&objs, |&i| {
        let x = &cx.objects[i].oml;
        let name = cx.name(i);
        let from = cx.cache.homs(&z, x).map_err(|e| e.to_string())?;
        let to = cx.cache.homs(x, &z).map_err(|e| e.to_string())?;
        ensure(from.len() == 1 && to.len() == 1, || format!("{name}: {} maps in, {} maps out", from.len(), to.len()))?;
        let (u_from, u_to) = (constructions::unique_from(x), constructions::unique_to(x));
        ensure(from[0] == u_to && to[0] == u_from, || format!("{name}: unique maps differ"))?;
        ensure(kernel::downset_embedding(x, x.bottom()).ok().as_ref() == Some(&u_to), || {
            format!("{name}: 0 -> x is not the inclusion of the bottom downset")
        })?;
        ensure(u_to.is_dagger_mono() && u_from.adjoint() == u_to, || format!("{name}: zero object maps"))?;
        ensure(compose(&u_to, &u_from).map_err(|e| e.to_string())? == LinMap::zero(x, x), || {
            format!("{name}: zero map does not factor through 0")
        })
    });
    check("constructions.zero-object", format!("{} up to {} elements", plural(objs.len(), "object"), cx.cfg.enum_bound), r)
}

fn factor_pairs(cx: &Ctx) -> Vec<(usize, usize)> {
    let fs: Vec<usize> = cx.small(cx.universal()).into_iter().filter(|&i| cx.objects[i].oml.len() > 1).collect();
    fs.iter().flat_map(|&i| fs.iter().map(move |&j| (i, j))).collect()
}

fn biproduct_laws(cx: &Ctx) -> Check {
    let pairs = factor_pairs(cx);
    let r = all_of(&pairs, |&(i, j)| {
        let name = format!("{} + {}", cx.name(i), cx.name(j));
        let bp = biproduct(&[cx.objects[i].oml.clone(), cx.objects[j].oml.clone()]).map_err(|e| e.to_string())?;
        let c = &bp.carrier;
        ensure(c.is_orthomodular() && c.len() == cx.objects[i].oml.len() * cx.objects[j].oml.len(), || {
            format!("{name}: carrier")
        })?;
        for a in 0..2 {
            ensure(bp.projections[a] == bp.coprojections[a].adjoint(), || format!("{name}: p is not the adjoint of k"))?;
            for b in 0..2 {
                let pk = compose(&bp.projections[a], &bp.coprojections[b]).map_err(|e| e.to_string())?;
                let ok = if a == b { pk.is_identity() } else { pk.is_zero() };
                ensure(ok, || format!("{name}: p{a} k{b}"))?;
            }
        }
        for x in c.elements() {
            let parts = (0..2).map(|a| bp.coprojections[a].apply(bp.projections[a].apply(x)));
            ensure(c.big_join(parts) == x, || format!("{name}: {} is not the join of its parts", c.label(x)))?;
        }
        Ok(())
    });
    check("constructions.biproduct", format!("{} of objects up to {} elements", plural(pairs.len(), "factor pair"), cx.universal()), r)
}

fn biproduct_universal(cx: &Ctx) -> Check {
    let pairs = factor_pairs(cx);
    let targets = cx.small(cx.cfg.enum_bound);
    let jobs: Vec<(usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(i, j)| targets.iter().map(move |&t| (i, j, t)))
        .collect();
    let cocones = std::sync::atomic::AtomicUsize::new(0);
    let r = all_of(&jobs, |&(i, j, t)| {
        let name = format!("{} + {} -> {}", cx.name(i), cx.name(j), cx.name(t));
        let y = &cx.objects[t].oml;
        let bp = biproduct(&[cx.objects[i].oml.clone(), cx.objects[j].oml.clone()]).map_err(|e| e.to_string())?;
        let carrier = bp.carrier.clone();
        let f1 = cx.hom(i, t).expect("enumerated").maps.clone();
        let f2 = cx.hom(j, t).expect("enumerated").maps.clone();
        let all = enumerate_linmaps_bounded(&carrier, y, carrier.len()).map_err(|e| e.to_string())?;
        ensure(all.len() == f1.len() * f2.len(), || {
            format!("{name}: {} maps out of the biproduct but {} cocones", all.len(), f1.len() * f2.len())
        })?;
        for a in f1.iter() {
            for b in f2.iter() {
                cocones.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let h = copair(&[a.clone(), b.clone()], &bp).map_err(|e| e.to_string())?;
                let w = || format!("{name}: cocone {}, {}", show_map(a), show_map(b));
                ensure(
                    compose(&h, &bp.coprojections[0]).ok().as_ref() == Some(a)
                        && compose(&h, &bp.coprojections[1]).ok().as_ref() == Some(b),
                    w,
                )?;
                ensure(all.binary_search_by(|g| g.table().cmp(h.table())).is_ok(), w)?;
                for yv in y.elements() {
                    let tuple = bp.tuple(&[a.apply_adjoint(yv), b.apply_adjoint(yv)]);
                    ensure(h.apply_adjoint(yv) == tuple, w)?;
                }
            }
        }
        Ok(())
    });
    let scope = format!(
        "{} into objects up to {} elements",
        plural(cocones.into_inner(), "cocone"),
        cx.cfg.enum_bound
    );
    check("constructions.biproduct-universal", scope, r)
}

fn free_objects(cx: &Ctx) -> Check {
    let targets = cx.small(cx.cfg.enum_bound);
    let jobs: Vec<(usize, usize)> = (0..=3).flat_map(|k| targets.iter().map(move |&t| (k, t))).collect();
    let r = all_of(&jobs, |&(k, t)| {
        let names: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let free = free_oml(&names).map_err(|e| e.to_string())?;
        let p = &free.oml;
        let y = &cx.objects[t].oml;
        let name = format!("P({}) -> {}", names.join(","), cx.name(t));
        ensure(p.distributivity_witness().is_none() && p.is_orthomodular(), || format!("{name}: not Boolean"))?;
        let homs = enumerate_linmaps_bounded(p, y, p.len()).map_err(|e| e.to_string())?;
        let mut buckets: std::collections::HashMap<Vec<ElemId>, usize> = std::collections::HashMap::new();
        for h in &homs {
            let g: Vec<ElemId> = free.inject.iter().map(|&s| h.apply(s)).collect();
            *buckets.entry(g).or_default() += 1;
        }
        let mut g = vec![ElemId::BOTTOM; k];
        for_each_table(k, y.len(), |gt| {
            g.copy_from_slice(gt);
            let w = |what: &str| {
                let labels: Vec<&str> = g.iter().map(|&v| y.label(v)).collect();
                format!("{name}: g = {labels:?}: {what}")
            };
            ensure(buckets.get(&g) == Some(&1), || w("not exactly one extension"))?;
            let f = free.extend(&g, y).map_err(|e| e.to_string())?;
            ensure(free.inject.iter().zip(&g).all(|(&s, &v)| f.apply(s) == v), || w("extension misses generators"))?;
            ensure(homs.binary_search_by(|h| h.table().cmp(f.table())).is_ok(), || w("extension not enumerated"))?;
            let formula = free.adjoint_formula(&g, y).map_err(|e| e.to_string())?;
            ensure(formula == f.adjoint_table(), || w("adjoint differs from the generator formula"))
        })?;
        ensure(buckets.values().sum::<usize>() == homs.len(), || format!("{name}: bucket count"))
    });
    check(
        "constructions.free",
        format!("generator sets of size 0 to 3 into {}", plural(targets.len(), "object")),
        r,
    )
}

/// Runs every law. Checks are ordered by law name, then scope.
pub fn run_laws(cfg: &LawConfig) -> Report {
    let start = Instant::now();
    let cx = Ctx::new(cfg);
    let single: Vec<fn(&Ctx) -> Check> = vec![
        lattice_meet_join,
        lattice_ortho,
        lattice_om_conditions,
        catalog_om_flags,
        sasaki_facts,
        downsets,
        commutes_symmetric,
        io_round_trip,
        enumeration_naive,
        enumeration_valid,
        dagger_functor,
        galois_round_trip,
        galois_naive,
        galois_functor,
        dagger_kernel,
        cokernels,
        factorization,
        factorization_unique,
        zero_epi_quantifier,
        restrictions,
        self_adjoint_bound,
        sasaki_maps,
        sasaki_characterization_law,
        zero_object,
        biproduct_laws,
        biproduct_universal,
        free_objects,
    ];
    let mut checks: Vec<Check> = single.par_iter().map(|law| law(&cx)).collect();
    checks.extend(adjoint_laws(&cx));
    checks.extend(included_lattices(&cx));
    checks.sort_by(|a, b| (&a.law, &a.scope).cmp(&(&b.law, &b.scope)));
    let mut report = Report::new("laws", checks);
    report.timing_ms = Some(start.elapsed().as_millis());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_visits_every_table() {
        let mut n = 0;
        for_each_table(3, 4, |_| {
            n += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(n, 64);
        let mut n = 0;
        for_each_table(0, 4, |_| {
            n += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn small_suite_passes() {
        let cfg = LawConfig {
            max_size: 6,
            enum_bound: 4,
            universal_bound: 4,
            ..LawConfig::default()
        };
        let r = run_laws(&cfg);
        let failures: Vec<_> = r.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
    }

    #[test]
    fn broken_include_fails() {
        let cfg = LawConfig {
            max_size: 2,
            enum_bound: 2,
            universal_bound: 2,
            extra: vec![
                ("bad".into(), Err("ortho not involutive".into())),
                ("benz".into(), Ok(Arc::new(catalog::benzene()))),
            ],
            ..LawConfig::default()
        };
        let r = run_laws(&cfg);
        let failing: Vec<_> = r.failures().map(|c| (c.law.as_str(), c.scope.as_str())).collect();
        assert_eq!(
            failing,
            [
                ("lattice.build", "included lattice bad"),
                ("lattice.orthomodular", "included lattice benz")
            ]
        );
    }
}
