//! Line-oriented text formats for lattices (`.oml`), linear maps (`.olm`) and
//! Galois morphisms.
//!
//! ```text
//! # comments run to the end of the line
//! lattice mo2
//! [meta]
//! source = mo(2)
//! [elements]
//! 0 x1 x1' x2 x2' 1
//! [covers]
//! 0 < x1
//! x1 < 1
//! ...
//! [ortho]
//! 0 -> 1
//! x1 -> x1'
//! ...
//! end
//!
//! morphism f
//! dom mo2                # an inline block, a file path, or catalog:EXPR
//! cod catalog:pow(2)
//! role image             # optional
//! tags dagger-mono       # optional
//! [map]
//! 0 -> 0
//! ...
//! end
//!
//! galois g
//! dom X
//! cod Y
//! [lower]
//! ...
//! [upper]
//! ...
//! end
//! ```
//!
//! A lattice block may use `[leq]` with `a <= b` lines instead of `[covers]`.
//! Element names must be declared under `[elements]` before they are used.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::catalog;
use crate::galois::GaloisMorphism;
use crate::kernel::Factorization;
use crate::linmap::{same_object, LinMap};
use crate::oml::{ElemId, Oml, OmlError, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown name {name:?} in {context}")]
    UnknownName {
        line: usize,
        name: String,
        context: String,
    },
    #[error("{context}: {message}")]
    Validation { context: String, message: String },
    /// A complete lattice document whose order or orthocomplement violates an axiom.
    #[error("{context}: {error}")]
    Axiom { context: String, error: OmlError },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("cannot resolve {reference:?}: {message}")]
    Resolve { reference: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DocRelation {
    Covers(Vec<(String, String)>),
    Leq(Vec<(String, String)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeDocument {
    pub name: String,
    pub elements: Vec<String>,
    pub relation: DocRelation,
    pub ortho: Vec<(String, String)>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismDocument {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub role: Option<String>,
    pub tags: Vec<String>,
    pub map: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisDocument {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub lower: Vec<(String, String)>,
    pub upper: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Block {
    Lattice(LatticeDocument),
    Morphism(MorphismDocument),
    Galois(GaloisDocument),
}

impl Block {
    pub fn name(&self) -> &str {
        match self {
            Block::Lattice(d) => &d.name,
            Block::Morphism(d) => &d.name,
            Block::Galois(d) => &d.name,
        }
    }
}

/// A parsed block and the line its header is on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Located {
    pub line: usize,
    pub block: Block,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Meta,
    Elements,
    Covers,
    Leq,
    Ortho,
    Map,
    Lower,
    Upper,
}

enum Open {
    Lattice {
        doc: LatticeDocument,
        covers: Option<Vec<(String, String)>>,
        leq: Option<Vec<(String, String)>>,
        known: HashMap<String, usize>,
    },
    Morphism(MorphismDocument, Option<String>, Option<String>),
    Galois(GaloisDocument, Option<String>, Option<String>),
}

fn split_pair<'a>(line_no: usize, s: &'a str, op: &str) -> Result<(&'a str, &'a str), FormatError> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    match toks.as_slice() {
        [a, o, b] if *o == op => Ok((a, b)),
        _ => Err(syntax(line_no, format!("expected `NAME {op} NAME`, found {s:?}"))),
    }
}

/// Splits a document into its blocks.
pub fn parse_blocks(text: &str) -> Result<Vec<Located>, FormatError> {
    let mut out = Vec::new();
    let mut open: Option<(usize, Open)> = None;
    let mut section = Section::None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((start, cur)) = open.as_mut() else {
            let mut toks = line.split_whitespace();
            let kind = toks.next().unwrap_or("");
            let name = match (toks.next(), toks.next()) {
                (Some(n), None) => n.to_string(),
                _ => return Err(syntax(line_no, format!("expected `{kind} NAME`"))),
            };
            let o = match kind {
                "lattice" => Open::Lattice {
                    doc: LatticeDocument {
                        name,
                        elements: Vec::new(),
                        relation: DocRelation::Covers(Vec::new()),
                        ortho: Vec::new(),
                        metadata: BTreeMap::new(),
                    },
                    covers: None,
                    leq: None,
                    known: HashMap::new(),
                },
                "morphism" => Open::Morphism(
                    MorphismDocument {
                        name,
                        dom: String::new(),
                        cod: String::new(),
                        role: None,
                        tags: Vec::new(),
                        map: Vec::new(),
                    },
                    None,
                    None,
                ),
                "galois" => Open::Galois(
                    GaloisDocument {
                        name,
                        dom: String::new(),
                        cod: String::new(),
                        lower: Vec::new(),
                        upper: Vec::new(),
                    },
                    None,
                    None,
                ),
                other => {
                    return Err(syntax(
                        line_no,
                        format!("expected `lattice`, `morphism` or `galois`, found {other:?}"),
                    ))
                }
            };
            open = Some((line_no, o));
            section = Section::None;
            continue;
        };
        if line == "end" {
            let start = *start;
            let (_, o) = open.take().expect("open block");
            out.push(Located {
                line: start,
                block: close(start, o)?,
            });
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| syntax(line_no, "unterminated section header"))?;
            section = match (cur, name) {
                (Open::Lattice { .. }, "meta") => Section::Meta,
                (Open::Lattice { .. }, "elements") => Section::Elements,
                (Open::Lattice { covers, .. }, "covers") => {
                    covers.get_or_insert_with(Vec::new);
                    Section::Covers
                }
                (Open::Lattice { leq, .. }, "leq") => {
                    leq.get_or_insert_with(Vec::new);
                    Section::Leq
                }
                (Open::Lattice { .. }, "ortho") => Section::Ortho,
                (Open::Morphism(..), "map") => Section::Map,
                (Open::Galois(..), "lower") => Section::Lower,
                (Open::Galois(..), "upper") => Section::Upper,
                _ => return Err(syntax(line_no, format!("unexpected section [{name}]"))),
            };
            continue;
        }
        match cur {
            Open::Lattice {
                doc,
                covers,
                leq,
                known,
            } => {
                let check = |n: &str| {
                    if known.contains_key(n) {
                        Ok(n.to_string())
                    } else {
                        Err(FormatError::UnknownName {
                            line: line_no,
                            name: n.to_string(),
                            context: format!("lattice {}", doc.name),
                        })
                    }
                };
                match section {
                    Section::Meta => {
                        let (k, v) = line
                            .split_once('=')
                            .ok_or_else(|| syntax(line_no, "expected `key = value`"))?;
                        doc.metadata.insert(k.trim().to_string(), v.trim().to_string());
                    }
                    Section::Elements => {
                        for tok in line.split_whitespace() {
                            if known.insert(tok.to_string(), doc.elements.len()).is_some() {
                                return Err(syntax(line_no, format!("element {tok:?} declared twice")));
                            }
                            doc.elements.push(tok.to_string());
                        }
                    }
                    Section::Covers => {
                        let (a, b) = split_pair(line_no, line, "<")?;
                        let p = (check(a)?, check(b)?);
                        covers.as_mut().expect("covers section").push(p);
                    }
                    Section::Leq => {
                        let (a, b) = split_pair(line_no, line, "<=")?;
                        let p = (check(a)?, check(b)?);
                        leq.as_mut().expect("leq section").push(p);
                    }
                    Section::Ortho => {
                        let (a, b) = split_pair(line_no, line, "->")?;
                        let p = (check(a)?, check(b)?);
                        doc.ortho.push(p);
                    }
                    _ => return Err(syntax(line_no, "content outside a section")),
                }
            }
            Open::Morphism(doc, dom, cod) => match section {
                Section::None => {
                    let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                    let rest = rest.trim();
                    match key {
                        "dom" | "cod" | "role" if rest.is_empty() || rest.contains(char::is_whitespace) => {
                            return Err(syntax(line_no, format!("expected `{key} VALUE`")))
                        }
                        "dom" => *dom = Some(rest.to_string()),
                        "cod" => *cod = Some(rest.to_string()),
                        "role" => doc.role = Some(rest.to_string()),
                        "tags" => doc.tags = rest.split_whitespace().map(str::to_string).collect(),
                        _ => return Err(syntax(line_no, format!("unknown morphism field {key:?}"))),
                    }
                }
                Section::Map => {
                    let (a, b) = split_pair(line_no, line, "->")?;
                    doc.map.push((a.to_string(), b.to_string()));
                }
                _ => unreachable!("morphism sections are checked above"),
            },
            Open::Galois(doc, dom, cod) => match section {
                Section::None => {
                    let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                    let rest = rest.trim();
                    if rest.is_empty() || rest.contains(char::is_whitespace) {
                        return Err(syntax(line_no, format!("expected `{key} VALUE`")));
                    }
                    match key {
                        "dom" => *dom = Some(rest.to_string()),
                        "cod" => *cod = Some(rest.to_string()),
                        _ => return Err(syntax(line_no, format!("unknown galois field {key:?}"))),
                    }
                }
                Section::Lower | Section::Upper => {
                    let (a, b) = split_pair(line_no, line, "->")?;
                    let t = if section == Section::Lower {
                        &mut doc.lower
                    } else {
                        &mut doc.upper
                    };
                    t.push((a.to_string(), b.to_string()));
                }
                _ => unreachable!("galois sections are checked above"),
            },
        }
    }
    if let Some((start, _)) = open {
        return Err(syntax(start, "block is missing `end`"));
    }
    Ok(out)
}

fn close(start: usize, o: Open) -> Result<Block, FormatError> {
    match o {
        Open::Lattice {
            mut doc, covers, leq, ..
        } => {
            doc.relation = match (covers, leq) {
                (Some(_), Some(_)) => return Err(syntax(start, "lattice has both [covers] and [leq]")),
                (c, None) => DocRelation::Covers(c.unwrap_or_default()),
                (None, Some(l)) => DocRelation::Leq(l),
            };
            Ok(Block::Lattice(doc))
        }
        Open::Morphism(mut doc, dom, cod) => {
            doc.dom = dom.ok_or_else(|| syntax(start, "morphism is missing `dom`"))?;
            doc.cod = cod.ok_or_else(|| syntax(start, "morphism is missing `cod`"))?;
            Ok(Block::Morphism(doc))
        }
        Open::Galois(mut doc, dom, cod) => {
            doc.dom = dom.ok_or_else(|| syntax(start, "galois morphism is missing `dom`"))?;
            doc.cod = cod.ok_or_else(|| syntax(start, "galois morphism is missing `cod`"))?;
            Ok(Block::Galois(doc))
        }
    }
}

impl LatticeDocument {
    /// The canonical document: elements in canonical order, cover pairs,
    /// one ortho line per element.
    pub fn from_oml(oml: &Oml, name: &str) -> LatticeDocument {
        let l = |x: ElemId| oml.label(x).to_string();
        LatticeDocument {
            name: name.to_string(),
            elements: oml.labels().to_vec(),
            relation: DocRelation::Covers(oml.covers().into_iter().map(|(a, b)| (l(a), l(b))).collect()),
            ortho: oml.elements().map(|x| (l(x), l(oml.ortho(x)))).collect(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn to_oml(&self) -> Result<Oml, FormatError> {
        let context = || format!("lattice {}", self.name);
        let index: HashMap<&str, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let idx = |n: &str| {
            index.get(n).copied().ok_or_else(|| FormatError::Validation {
                context: context(),
                message: format!("unknown element {n:?}"),
            })
        };
        let pairs = |ps: &[(String, String)]| -> Result<Vec<(usize, usize)>, FormatError> {
            ps.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect()
        };
        let relation = match &self.relation {
            DocRelation::Covers(ps) => Relation::Covers(pairs(ps)?),
            DocRelation::Leq(ps) => Relation::Leq(pairs(ps)?),
        };
        let n = self.elements.len();
        let mut ortho = vec![None; n];
        for (a, b) in &self.ortho {
            let (a, b) = (idx(a)?, idx(b)?);
            if ortho[a].replace(b).is_some_and(|old| old != b) {
                return Err(FormatError::Validation {
                    context: context(),
                    message: format!("orthocomplement of {} given twice", self.elements[a]),
                });
            }
        }
        let ortho = ortho
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| FormatError::Validation {
                    context: context(),
                    message: format!("no orthocomplement given for {}", self.elements[i]),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Oml::build(n, relation, ortho, Some(self.elements.clone())).map_err(|e| {
            if e.is_axiom_violation() {
                FormatError::Axiom {
                    context: context(),
                    error: e,
                }
            } else {
                FormatError::Validation {
                    context: context(),
                    message: e.to_string(),
                }
            }
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("lattice {}\n", self.name);
        if !self.metadata.is_empty() {
            s.push_str("[meta]\n");
            for (k, v) in &self.metadata {
                s.push_str(&format!("{k} = {v}\n"));
            }
        }
        s.push_str("[elements]\n");
        s.push_str(&self.elements.join(" "));
        s.push('\n');
        let (head, op, ps) = match &self.relation {
            DocRelation::Covers(ps) => ("[covers]", "<", ps),
            DocRelation::Leq(ps) => ("[leq]", "<=", ps),
        };
        s.push_str(head);
        s.push('\n');
        for (a, b) in ps {
            s.push_str(&format!("{a} {op} {b}\n"));
        }
        s.push_str("[ortho]\n");
        for (a, b) in &self.ortho {
            s.push_str(&format!("{a} -> {b}\n"));
        }
        s.push_str("end\n");
        s
    }
}

fn only_lattice(text: &str) -> Result<LatticeDocument, FormatError> {
    parse_blocks(text)?
        .into_iter()
        .find_map(|b| match b.block {
            Block::Lattice(d) => Some(d),
            _ => None,
        })
        .ok_or_else(|| syntax(1, "no lattice block"))
}

/// Parses the first lattice block of `text`.
pub fn parse_oml(text: &str) -> Result<Oml, FormatError> {
    only_lattice(text)?.to_oml()
}

/// Like [`parse_oml`], also returning the block name.
pub fn parse_named_oml(text: &str) -> Result<(String, Oml), FormatError> {
    let doc = only_lattice(text)?;
    Ok((doc.name.clone(), doc.to_oml()?))
}

pub fn serialize_oml(oml: &Oml, name: &str) -> String {
    LatticeDocument::from_oml(oml, name).to_text()
}

/// Finds lattices referenced from morphism blocks that are not defined inline.
pub trait Resolver {
    fn resolve(&self, reference: &str) -> Result<Arc<Oml>, FormatError>;
}

/// Resolves only `catalog:EXPR` references.
pub struct CatalogResolver;

fn resolve_catalog(reference: &str) -> Option<Result<Arc<Oml>, FormatError>> {
    let expr = reference.strip_prefix("catalog:")?;
    Some(catalog::eval(expr).map(Arc::new).map_err(|e| FormatError::Resolve {
        reference: reference.to_string(),
        message: e.to_string(),
    }))
}

impl Resolver for CatalogResolver {
    fn resolve(&self, reference: &str) -> Result<Arc<Oml>, FormatError> {
        resolve_catalog(reference).unwrap_or_else(|| {
            Err(FormatError::Resolve {
                reference: reference.to_string(),
                message: "not an inline block or catalog:EXPR reference".into(),
            })
        })
    }
}

/// Resolves `catalog:EXPR` and lattice file paths relative to a base directory.
pub struct FileResolver {
    pub base: PathBuf,
}

impl FileResolver {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        FileResolver { base: base.into() }
    }

    /// Resolver for references inside the file at `path`.
    pub fn beside(path: &Path) -> Self {
        FileResolver::new(path.parent().map(Path::to_path_buf).unwrap_or_default())
    }
}

impl Resolver for FileResolver {
    fn resolve(&self, reference: &str) -> Result<Arc<Oml>, FormatError> {
        if let Some(r) = resolve_catalog(reference) {
            return r;
        }
        let path = self.base.join(reference);
        let text = fs::read_to_string(&path).map_err(|e| FormatError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        parse_oml(&text).map(Arc::new).map_err(|e| FormatError::Resolve {
            reference: reference.to_string(),
            message: e.to_string(),
        })
    }
}

/// Object references of a file, resolved once each so that equal references
/// share one `Arc`.
struct Objects<'r> {
    inline: HashMap<String, LatticeDocument>,
    built: HashMap<String, Arc<Oml>>,
    resolver: &'r dyn Resolver,
}

impl<'r> Objects<'r> {
    fn new(blocks: &[Located], resolver: &'r dyn Resolver) -> Result<Self, FormatError> {
        let mut inline = HashMap::new();
        for b in blocks {
            if let Block::Lattice(d) = &b.block {
                if inline.insert(d.name.clone(), d.clone()).is_some() {
                    return Err(syntax(b.line, format!("lattice {} defined twice", d.name)));
                }
            }
        }
        Ok(Objects {
            inline,
            built: HashMap::new(),
            resolver,
        })
    }

    fn get(&mut self, reference: &str) -> Result<Arc<Oml>, FormatError> {
        if let Some(o) = self.built.get(reference) {
            return Ok(o.clone());
        }
        let o = match self.inline.get(reference) {
            Some(d) => Arc::new(d.to_oml()?),
            None => self.resolver.resolve(reference)?,
        };
        self.built.insert(reference.to_string(), o.clone());
        Ok(o)
    }
}

fn table(
    line: usize,
    context: &str,
    entries: &[(String, String)],
    from: &Oml,
    to: &Oml,
) -> Result<Vec<ElemId>, FormatError> {
    let unknown = |name: &str| FormatError::UnknownName {
        line,
        name: name.to_string(),
        context: context.to_string(),
    };
    let mut t: Vec<Option<ElemId>> = vec![None; from.len()];
    for (a, b) in entries {
        let x = from.find(a).ok_or_else(|| unknown(a))?;
        let y = to.find(b).ok_or_else(|| unknown(b))?;
        if t[x.index()].replace(y).is_some_and(|old| old != y) {
            return Err(FormatError::Validation {
                context: context.to_string(),
                message: format!("{a} is mapped twice"),
            });
        }
    }
    t.into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| FormatError::Validation {
                context: context.to_string(),
                message: format!("no image given for {}", from.label(ElemId::new(i))),
            })
        })
        .collect()
}

/// A morphism read from a file, with its role and tags.
#[derive(Clone, Debug)]
pub struct NamedMap {
    pub name: String,
    pub role: Option<String>,
    pub tags: Vec<String>,
    pub map: LinMap,
}

/// Parses every morphism block of `text`.
pub fn parse_linmaps(text: &str, resolver: &dyn Resolver) -> Result<Vec<NamedMap>, FormatError> {
    let blocks = parse_blocks(text)?;
    let mut objects = Objects::new(&blocks, resolver)?;
    let mut out = Vec::new();
    for b in &blocks {
        let Block::Morphism(d) = &b.block else { continue };
        let context = format!("morphism {} (line {})", d.name, b.line);
        let dom = objects.get(&d.dom)?;
        let cod = objects.get(&d.cod)?;
        let t = table(b.line, &context, &d.map, &dom, &cod)?;
        let map = LinMap::new(dom, cod, t).map_err(|e| FormatError::Validation {
            context,
            message: e.to_string(),
        })?;
        out.push(NamedMap {
            name: d.name.clone(),
            role: d.role.clone(),
            tags: d.tags.clone(),
            map,
        });
    }
    Ok(out)
}

/// Parses a document holding exactly one morphism block.
pub fn parse_linmap(text: &str, resolver: &dyn Resolver) -> Result<LinMap, FormatError> {
    let mut maps = parse_linmaps(text, resolver)?;
    match maps.len() {
        1 => Ok(maps.pop().expect("one map").map),
        n => Err(syntax(1, format!("expected one morphism block, found {n}"))),
    }
}

/// Parses every Galois block of `text`.
pub fn parse_galois(text: &str, resolver: &dyn Resolver) -> Result<Vec<(String, GaloisMorphism)>, FormatError> {
    let blocks = parse_blocks(text)?;
    let mut objects = Objects::new(&blocks, resolver)?;
    let mut out = Vec::new();
    for b in &blocks {
        let Block::Galois(d) = &b.block else { continue };
        let context = format!("galois {} (line {})", d.name, b.line);
        let dom = objects.get(&d.dom)?;
        let cod = objects.get(&d.cod)?;
        let lower = table(b.line, &context, &d.lower, &dom, &cod)?;
        let upper = table(b.line, &context, &d.upper, &cod, &dom)?;
        let gm = GaloisMorphism::new(dom, cod, lower, upper).map_err(|e| FormatError::Validation {
            context,
            message: e.to_string(),
        })?;
        out.push((d.name.clone(), gm));
    }
    Ok(out)
}

/// Names inline lattice blocks for a list of objects, sharing a block between
/// equal objects.
/// Same object with the same labels, so one block can serve both.
fn same_presentation(a: &Arc<Oml>, b: &Arc<Oml>) -> bool {
    same_object(a, b) && a.labels() == b.labels()
}

fn name_objects(objs: &[&Arc<Oml>], names: &[&str]) -> (String, Vec<String>) {
    let mut text = String::new();
    let mut seen: Vec<(&Arc<Oml>, String)> = Vec::new();
    let mut refs = Vec::new();
    for (o, n) in objs.iter().zip(names) {
        if let Some((_, r)) = seen.iter().find(|(s, _)| same_presentation(s, o)) {
            refs.push(r.clone());
            continue;
        }
        text.push_str(&serialize_oml(o, n));
        text.push('\n');
        seen.push((o, n.to_string()));
        refs.push(n.to_string());
    }
    (text, refs)
}

fn map_lines(s: &mut String, t: &[ElemId], from: &Oml, to: &Oml) {
    for x in from.elements() {
        s.push_str(&format!("{} -> {}\n", from.label(x), to.label(t[x.index()])));
    }
}

fn morphism_block(name: &str, dom: &str, cod: &str, role: Option<&str>, tags: &[&str], f: &LinMap) -> String {
    let mut s = format!("morphism {name}\ndom {dom}\ncod {cod}\n");
    if let Some(r) = role {
        s.push_str(&format!("role {r}\n"));
    }
    if !tags.is_empty() {
        s.push_str(&format!("tags {}\n", tags.join(" ")));
    }
    s.push_str("[map]\n");
    map_lines(&mut s, f.table(), f.dom(), f.cod());
    s.push_str("end\n");
    s
}

/// Self-contained text for `f`, with its objects as inline blocks `X` and `Y`.
pub fn serialize_linmap(f: &LinMap, name: &str) -> String {
    let (mut s, refs) = name_objects(&[f.dom(), f.cod()], &["X", "Y"]);
    s.push_str(&morphism_block(name, &refs[0], &refs[1], None, &[], f));
    s
}

pub fn serialize_galois(gm: &GaloisMorphism, name: &str) -> String {
    let (mut s, refs) = name_objects(&[gm.dom(), gm.cod()], &["X", "Y"]);
    s.push_str(&format!("galois {name}\ndom {}\ncod {}\n[lower]\n", refs[0], refs[1]));
    map_lines(&mut s, gm.lower(), gm.dom(), gm.cod());
    s.push_str("[upper]\n");
    map_lines(&mut s, gm.upper(), gm.cod(), gm.dom());
    s.push_str("end\n");
    s
}

/// An arrow of a diagram document.
pub struct Arrow<'a> {
    pub name: String,
    pub role: Option<&'a str>,
    pub tags: Vec<&'a str>,
    pub map: &'a LinMap,
}

/// Lattice blocks for `objects` followed by one morphism block per arrow.
/// Arrows refer to objects by pointer first, then by structure and labels.
pub fn serialize_diagram(objects: &[(&str, &Arc<Oml>)], arrows: &[Arrow]) -> String {
    let mut s = String::new();
    for (name, o) in objects {
        s.push_str(&serialize_oml(o, name));
        s.push('\n');
    }
    let find = |x: &Arc<Oml>| {
        objects
            .iter()
            .find(|(_, o)| Arc::ptr_eq(o, x))
            .or_else(|| objects.iter().find(|(_, o)| same_presentation(o, x)))
            .map(|(n, _)| n.to_string())
            .expect("arrow object listed in the diagram")
    };
    for (i, a) in arrows.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        s.push_str(&morphism_block(&a.name, &find(a.map.dom()), &find(a.map.cod()), a.role, &a.tags, a.map));
    }
    s
}

/// Tags for the three arrows, listing the claimed predicates that hold.
pub fn factorization_tags(fac: &Factorization) -> [Vec<&'static str>; 3] {
    let keep = |claims: &[(&'static str, bool)]| claims.iter().filter(|c| c.1).map(|c| c.0).collect();
    [
        keep(&[("dagger-epi", fac.coimage.is_dagger_epi())]),
        keep(&[
            ("zero-epi", fac.middle.is_zero_epi()),
            ("zero-mono", fac.middle.is_zero_mono()),
        ]),
        keep(&[("dagger-mono", fac.image_emb.is_dagger_mono())]),
    ]
}

/// The three arrows `coimage`, `middle`, `image` with their four objects.
pub fn serialize_factorization(fac: &Factorization, name: &str) -> String {
    let objs = [
        fac.coimage.dom(),
        fac.coimage.cod(),
        fac.middle.cod(),
        fac.image_emb.cod(),
    ];
    let (mut s, refs) = name_objects(&objs, &["X", "Coim", "Im", "Y"]);
    let tags = factorization_tags(fac);
    let arrows = [
        ("coimage", &fac.coimage, 0, 1),
        ("middle", &fac.middle, 1, 2),
        ("image", &fac.image_emb, 2, 3),
    ];
    for (i, (role, f, a, b)) in arrows.into_iter().enumerate() {
        s.push_str(&morphism_block(
            &format!("{name}.{role}"),
            &refs[a],
            &refs[b],
            Some(role),
            &tags[i],
            f,
        ));
        if i < 2 {
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::factorize;
    use crate::linmap::enumerate_linmaps;

    const CHAIN2: &str = "lattice chain2\n[elements]\n0 1\n[covers]\n0 < 1\n[ortho]\n0 -> 1\n1 -> 0\nend\n";

    #[test]
    fn chain2_round_trip() {
        let c = parse_oml(CHAIN2).unwrap();
        assert_eq!(c, catalog::chain2());
        assert_eq!(serialize_oml(&c, "chain2"), CHAIN2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a chain\n\nlattice c  # trailing\n[elements]\n0\n1\n[covers]\n0 < 1\n[ortho]\n0 -> 1\n1 -> 0\nend\n";
        assert_eq!(parse_oml(text).unwrap(), catalog::chain2());
    }

    #[test]
    fn missing_ortho_entry() {
        let text = "lattice c\n[elements]\n0 1\n[covers]\n0 < 1\n[ortho]\n0 -> 1\nend\n";
        assert!(matches!(parse_oml(text), Err(FormatError::Validation { .. })));
    }

    #[test]
    fn corrupted_ortho_is_an_axiom_error() {
        let text = CHAIN2.replace("1 -> 0", "1 -> 1");
        match parse_oml(&text) {
            Err(FormatError::Axiom { error, .. }) => {
                assert!(matches!(error, OmlError::OrthoNotInvolutive { .. }))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_name_carries_line() {
        let text = "lattice c\n[elements]\n0 1\n[covers]\n0 < top\nend\n";
        assert_eq!(
            parse_oml(text).unwrap_err(),
            FormatError::UnknownName {
                line: 5,
                name: "top".into(),
                context: "lattice c".into()
            }
        );
    }

    #[test]
    fn syntax_errors() {
        for (text, line) in [
            ("lattice\n", 1),
            ("lattice c\n[elements]\n0 1\n", 1),
            ("lattice c\n[bogus]\nend\n", 2),
            ("lattice c\n[elements]\n0 1\n[covers]\n0 1\nend\n", 5),
            ("lattice c\n[elements]\n0 0\nend\n", 3),
            ("lattice c\n0 1\nend\n", 2),
        ] {
            match parse_oml(text) {
                Err(FormatError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn mo2_leq_document_matches_covers() {
        let m = catalog::mo(2).unwrap();
        let mut doc = LatticeDocument::from_oml(&m, "mo2");
        doc.relation = DocRelation::Leq(
            m.leq_pairs()
                .into_iter()
                .map(|(a, b)| (m.labels()[a].clone(), m.labels()[b].clone()))
                .collect(),
        );
        let text = doc.to_text();
        assert!(text.contains("[leq]"));
        let back = parse_oml(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.labels(), m.labels());
    }

    #[test]
    fn metadata_round_trips() {
        let mut doc = LatticeDocument::from_oml(&catalog::benzene(), "benzene");
        doc.metadata.insert("source".into(), "benzene".into());
        let text = doc.to_text();
        let blocks = parse_blocks(&text).unwrap();
        assert_eq!(blocks[0].block, Block::Lattice(doc));
    }

    #[test]
    fn linmap_round_trip() {
        let p = Arc::new(catalog::powerset(2).unwrap());
        let m = Arc::new(catalog::mo(2).unwrap());
        for f in enumerate_linmaps(&p, &m).unwrap() {
            let text = serialize_linmap(&f, "f");
            let g = parse_linmap(&text, &CatalogResolver).unwrap();
            assert_eq!(g, f);
            assert_eq!(serialize_linmap(&g, "f"), text);
        }
        let id = LinMap::identity(&m);
        let text = serialize_linmap(&id, "id");
        assert_eq!(text.matches("lattice ").count(), 1);
        assert!(parse_linmap(&text, &CatalogResolver).unwrap().is_identity());
    }

    #[test]
    fn catalog_references() {
        let text = "morphism z\ndom catalog:chain2\ncod catalog:mo(2)\n[map]\n0 -> 0\n1 -> x1\nend\n";
        let f = parse_linmap(text, &CatalogResolver).unwrap();
        assert_eq!(f.cod().len(), 6);
        let bad = text.replace("1 -> x1", "1 -> nope");
        assert!(matches!(
            parse_linmap(&bad, &CatalogResolver),
            Err(FormatError::UnknownName { .. })
        ));
        let not_linear = "morphism z\ndom catalog:chain2\ncod catalog:chain2\n[map]\n0 -> 1\n1 -> 1\nend\n";
        assert!(matches!(
            parse_linmap(not_linear, &CatalogResolver),
            Err(FormatError::Validation { .. })
        ));
        assert!(matches!(
            parse_linmap("morphism z\ndom a.oml\ncod a.oml\n[map]\nend\n", &CatalogResolver),
            Err(FormatError::Resolve { .. })
        ));
    }

    #[test]
    fn factorization_document() {
        let m = Arc::new(catalog::mo(2).unwrap());
        let x = m.find("x1").unwrap();
        let f = LinMap::sasaki(&m, x).unwrap();
        let text = serialize_factorization(&factorize(&f), "pi");
        let maps = parse_linmaps(&text, &CatalogResolver).unwrap();
        let roles: Vec<_> = maps.iter().map(|m| m.role.clone().unwrap()).collect();
        assert_eq!(roles, ["coimage", "middle", "image"]);
        assert_eq!(maps[0].tags, ["dagger-epi"]);
        assert_eq!(maps[1].tags, ["zero-epi", "zero-mono"]);
        assert_eq!(maps[2].tags, ["dagger-mono"]);
    }

    #[test]
    fn galois_round_trip() {
        let m = Arc::new(catalog::mo(2).unwrap());
        let gm = GaloisMorphism::identity(&m);
        let text = serialize_galois(&gm, "g");
        let back = parse_galois(&text, &CatalogResolver).unwrap();
        assert_eq!(back[0].1, gm);
    }
}
