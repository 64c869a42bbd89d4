use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use omlcat::catalog;
use omlcat::constructions::{biproduct, free_oml};
use omlcat::dot::{export_dot, DotOptions};
use omlcat::galois::{gamma, lambda};
use omlcat::io::{self, Arrow, FileResolver, FormatError, Resolver};
use omlcat::kernel::{cokernel, factorize, kernel, sasaki_characterization};
use omlcat::laws::{run_laws, LawConfig};
use omlcat::report::{Check, Report};
use omlcat::{compose, LinMap, Oml};

#[derive(Parser)]
#[command(name = "omlcat", version, about = "Orthomodular lattices and linear maps")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the ortholattice axioms and orthomodularity of a lattice file.
    Verify { lattice: String },
    /// Print the adjoint of a morphism.
    Adjoint { morphism: PathBuf },
    /// Print `g ∘ f`.
    Compose { f: PathBuf, g: PathBuf },
    /// Print the dagger kernel embedding of a morphism.
    Kernel { morphism: PathBuf },
    /// Print the cokernel of a morphism.
    Cokernel { morphism: PathBuf },
    /// Print the coimage, middle and image arrows of a morphism.
    Factorize { morphism: PathBuf },
    /// Evaluate the characterizations of Sasaki projections for an endomorphism.
    SasakiCheck { morphism: PathBuf },
    /// Print the biproduct of lattices with its coprojections and projections.
    Biproduct {
        #[arg(required = true)]
        factors: Vec<String>,
    },
    /// Print the free object on the given generator names.
    Free {
        generators: Vec<String>,
        /// Also print the extension of a generator assignment into this lattice.
        #[arg(long, requires = "images")]
        into: Option<String>,
        /// Images of the generators, in order.
        #[arg(long, num_args = 1.., requires = "into")]
        images: Vec<String>,
    },
    /// Print the Galois morphism of a linear map, or the linear map of a Galois morphism.
    Galois { file: PathBuf },
    /// Run the law suite over the built-in catalog.
    Laws {
        /// Largest lattice for element-wise laws.
        #[arg(long, default_value_t = LawConfig::default().max_size)]
        max_size: usize,
        /// Largest domain for hom-set enumeration.
        #[arg(long, default_value_t = LawConfig::default().enum_bound)]
        enum_bound: usize,
        /// Largest object in universal-property checks.
        #[arg(long, default_value_t = LawConfig::default().universal_bound)]
        universal_bound: usize,
        /// Seed for sampled checks.
        #[arg(long, default_value_t = LawConfig::default().seed)]
        seed: u64,
        /// Composable pairs sampled per object triple.
        #[arg(long, default_value_t = LawConfig::default().samples)]
        samples: usize,
        /// Additional lattice files to check.
        #[arg(long)]
        include: Vec<PathBuf>,
        /// Report the elapsed time.
        #[arg(long)]
        timing: bool,
    },
    /// Write catalog lattices as `.oml` documents (all entries if none are named).
    Gen {
        /// Catalog names or lattice expressions such as `mo(3)`.
        names: Vec<String>,
        /// Write one `NAME.oml` file per lattice into this directory.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Export a Hasse diagram in Graphviz format.
    Dot {
        lattice: String,
        /// Draw orthocomplement pairs as dashed edges.
        #[arg(long)]
        ortho: bool,
    },
}

struct Output {
    text: String,
    json: Value,
    passed: bool,
}

fn document(command: &str, text: String) -> Result<Output> {
    let blocks = io::parse_blocks(&text)?;
    Ok(Output {
        json: json!({ "command": command, "status": "pass", "blocks": blocks }),
        text,
        passed: true,
    })
}

fn report(r: Report) -> Output {
    Output {
        text: r.to_text(),
        json: serde_json::to_value(&r).expect("reports serialize"),
        passed: r.passed(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// A lattice file path, or `catalog:EXPR`, or a bare catalog expression.
fn load_lattice(reference: &str) -> Result<Arc<Oml>> {
    if !reference.starts_with("catalog:") && !Path::new(reference).exists() {
        if let Ok(o) = catalog::eval(reference) {
            return Ok(Arc::new(o));
        }
    }
    Ok(FileResolver::new(".").resolve(reference)?)
}

fn load_maps(path: &Path) -> Result<Vec<io::NamedMap>> {
    let text = read(path)?;
    let maps = io::parse_linmaps(&text, &FileResolver::beside(path))
        .with_context(|| format!("in {}", path.display()))?;
    if maps.is_empty() {
        bail!("{}: no morphism block", path.display());
    }
    Ok(maps)
}

fn load_map(path: &Path) -> Result<(String, LinMap)> {
    let mut maps = load_maps(path)?;
    if maps.len() != 1 {
        bail!("{}: expected one morphism block, found {}", path.display(), maps.len());
    }
    let m = maps.pop().expect("one map");
    Ok((m.name, m.map))
}

fn verify(reference: &str) -> Result<Output> {
    let (scope, parsed) = if Path::new(reference).exists() {
        let text = read(Path::new(reference))?;
        match io::parse_named_oml(&text) {
            Ok((n, o)) => (format!("lattice {n}"), Ok(o)),
            // the context already names the lattice block
            Err(FormatError::Axiom { context, error }) => (context, Err(error.to_string())),
            Err(e) => return Err(anyhow!(e).context(format!("in {reference}"))),
        }
    } else {
        (format!("lattice {reference}"), Ok((*load_lattice(reference)?).clone()))
    };
    let checks = match parsed {
        Err(w) => vec![Check::fail("lattice.ortholattice", scope, w)],
        Ok(o) => {
            let rep = o.verify_orthomodular()?;
            let mut checks = vec![Check::pass("lattice.ortholattice", scope.clone())];
            for (i, &ok) in rep.per_condition.iter().enumerate() {
                let law = format!("lattice.orthomodular-condition-{}", i + 1);
                checks.push(match (ok, rep.witness) {
                    (true, _) => Check::pass(law, scope.clone()),
                    (false, Some((x, y))) if rep.failing_condition == Some(i) => {
                        Check::fail(law, scope.clone(), format!("x = {}, y = {}", o.label(x), o.label(y)))
                    }
                    (false, _) => Check::fail(
                        law,
                        scope.clone(),
                        format!("fails; witness reported for condition {}", rep.failing_condition.map_or(0, |k| k + 1)),
                    ),
                });
            }
            checks
        }
    };
    Ok(report(Report::new("verify", checks)))
}

fn tags_of(f: &LinMap) -> Vec<&'static str> {
    let p = f.predicates();
    [
        ("self-adjoint", p.is_self_adjoint),
        ("dagger-mono", p.is_dagger_mono),
        ("dagger-epi", p.is_dagger_epi),
        ("dagger-iso", p.is_dagger_iso),
        ("zero-epi", p.is_zero_epi),
        ("zero-mono", p.is_zero_mono),
    ]
    .into_iter()
    .filter(|t| t.1)
    .map(|t| t.0)
    .collect()
}

fn single_map(command: &str, name: &str, f: &LinMap, role: &str) -> Result<Output> {
    let shared = omlcat::linmap::same_object(f.dom(), f.cod()) && f.dom().labels() == f.cod().labels();
    let objects: Vec<(&str, &Arc<Oml>)> = if shared {
        vec![("X", f.dom())]
    } else {
        vec![("X", f.dom()), ("Y", f.cod())]
    };
    let text = io::serialize_diagram(
        &objects,
        &[Arrow {
            name: name.to_string(),
            role: Some(role),
            tags: tags_of(f),
            map: f,
        }],
    );
    document(command, text)
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Verify { lattice } => verify(lattice),
        Command::Adjoint { morphism } => {
            let (name, f) = load_map(morphism)?;
            single_map("adjoint", &format!("{name}*"), &f.adjoint(), "adjoint")
        }
        Command::Compose { f, g } => {
            let (nf, f) = load_map(f)?;
            let (ng, g) = load_map(g)?;
            let gf = compose(&g, &f).context("codomain of f differs from the domain of g")?;
            single_map("compose", &format!("{ng}.{nf}"), &gf, "composite")
        }
        Command::Kernel { morphism } => {
            let (name, f) = load_map(morphism)?;
            let kd = kernel(&f);
            let mut out = single_map("kernel", &format!("ker.{name}"), &kd.embedding, "kernel")?;
            let label = f.dom().label(kd.k_elem);
            out.text = format!("# kernel of {name} is the downset of {label}\n{}", out.text);
            out.json["element"] = json!(label);
            Ok(out)
        }
        Command::Cokernel { morphism } => {
            let (name, f) = load_map(morphism)?;
            single_map("cokernel", &format!("coker.{name}"), &cokernel(&f), "cokernel")
        }
        Command::Factorize { morphism } => {
            let (name, f) = load_map(morphism)?;
            let fac = factorize(&f);
            let tags = io::factorization_tags(&fac);
            let claims_hold = tags[0].len() == 1 && tags[1].len() == 2 && tags[2].len() == 1;
            let mut out = document("factorize", io::serialize_factorization(&fac, &name))?;
            out.passed = claims_hold;
            if !claims_hold {
                out.json["status"] = json!("fail");
            }
            Ok(out)
        }
        Command::SasakiCheck { morphism } => {
            let (name, f) = load_map(morphism)?;
            let scope = format!("morphism {name}");
            let check = match sasaki_characterization(&f) {
                Ok(r) => {
                    let mut c = Check::pass("sasaki.characterization-agrees", scope);
                    c.witness = Some(format!(
                        "{} a Sasaki projection; conditions {:?}",
                        if r.is_sasaki { "is" } else { "is not" },
                        r.conditions
                    ));
                    c
                }
                Err(omlcat::kernel::KernelError::EquivalenceMismatch(w)) => {
                    Check::fail("sasaki.characterization-agrees", scope, w)
                }
                Err(e) => return Err(e.into()),
            };
            Ok(report(Report::new("sasaki-check", vec![check])))
        }
        Command::Biproduct { factors } => {
            let objs = factors.iter().map(|r| load_lattice(r)).collect::<Result<Vec<_>>>()?;
            let bp = biproduct(&objs)?;
            let names: Vec<String> = (1..=objs.len()).map(|i| format!("X{i}")).collect();
            let mut objects: Vec<(&str, &Arc<Oml>)> = names.iter().map(String::as_str).zip(&objs).collect();
            objects.push(("S", &bp.carrier));
            let mut arrows = Vec::new();
            for (j, (k, p)) in bp.coprojections.iter().zip(&bp.projections).enumerate() {
                arrows.push(Arrow {
                    name: format!("k{}", j + 1),
                    role: Some("coprojection"),
                    tags: tags_of(k),
                    map: k,
                });
                arrows.push(Arrow {
                    name: format!("p{}", j + 1),
                    role: Some("projection"),
                    tags: tags_of(p),
                    map: p,
                });
            }
            document("biproduct", io::serialize_diagram(&objects, &arrows))
        }
        Command::Free {
            generators,
            into,
            images,
        } => {
            let free = free_oml(generators)?;
            let Some(target) = into else {
                return document("free", io::serialize_oml(&free.oml, "free"));
            };
            let y = load_lattice(target)?;
            if images.len() != generators.len() {
                bail!("{} generators but {} images", generators.len(), images.len());
            }
            let g = images
                .iter()
                .map(|n| y.find(n).ok_or_else(|| anyhow!("unknown element {n:?} of {target}")))
                .collect::<Result<Vec<_>>>()?;
            let f = free.extend(&g, &y)?;
            let text = io::serialize_diagram(
                &[("free", &free.oml), ("Y", &y)],
                &[Arrow {
                    name: "extension".into(),
                    role: Some("free-extension"),
                    tags: tags_of(&f),
                    map: &f,
                }],
            );
            document("free", text)
        }
        Command::Galois { file } => {
            let text = read(file)?;
            let resolver = FileResolver::beside(file);
            let gms = io::parse_galois(&text, &resolver)?;
            if gms.is_empty() {
                let (name, f) = load_map(file)?;
                return document("galois", io::serialize_galois(&lambda(&f), &format!("lambda.{name}")));
            }
            let mut out = String::new();
            for (name, gm) in gms {
                let f = gamma(&gm)?;
                out.push_str(&io::serialize_linmap(&f, &format!("gamma.{name}")));
            }
            document("galois", out)
        }
        Command::Laws {
            max_size,
            enum_bound,
            universal_bound,
            seed,
            samples,
            include,
            timing,
        } => {
            let mut extra = Vec::new();
            for path in include {
                let text = read(path)?;
                let name = path.display().to_string();
                match io::parse_oml(&text) {
                    Ok(o) => extra.push((name, Ok(Arc::new(o)))),
                    Err(e @ FormatError::Axiom { .. }) => extra.push((name, Err(e.to_string()))),
                    Err(e) => return Err(anyhow!(e).context(format!("in {name}"))),
                }
            }
            let cfg = LawConfig {
                max_size: *max_size,
                enum_bound: *enum_bound,
                universal_bound: *universal_bound,
                seed: *seed,
                samples: *samples,
                extra,
            };
            let mut r = run_laws(&cfg);
            if !timing {
                r.timing_ms = None;
            }
            Ok(report(r))
        }
        Command::Gen { names, dir } => {
            let entries: Vec<(String, Oml)> = if names.is_empty() {
                catalog::catalog()
                    .into_iter()
                    .map(|e| (e.name.to_string(), (*e.oml).clone()))
                    .collect()
            } else {
                names
                    .iter()
                    .map(|n| Ok((file_stem(n), catalog::eval(n)?)))
                    .collect::<Result<_>>()?
            };
            let mut text = String::new();
            for (name, o) in &entries {
                let mut doc = io::LatticeDocument::from_oml(o, name);
                doc.metadata.insert("elements".into(), o.len().to_string());
                doc.metadata.insert("orthomodular".into(), o.is_orthomodular().to_string());
                let body = doc.to_text();
                if let Some(d) = dir {
                    fs::create_dir_all(d)?;
                    let p = d.join(format!("{name}.oml"));
                    fs::write(&p, &body).with_context(|| format!("cannot write {}", p.display()))?;
                    text.push_str(&format!("# wrote {}\n", p.display()));
                } else {
                    if !text.is_empty() {
                        text.push('\n');
                    }
                    text.push_str(&body);
                }
            }
            if dir.is_some() {
                let files: Vec<String> = entries.iter().map(|(n, _)| format!("{n}.oml")).collect();
                Ok(Output {
                    json: json!({ "command": "gen", "status": "pass", "files": files }),
                    text,
                    passed: true,
                })
            } else {
                document("gen", text)
            }
        }
        Command::Dot { lattice, ortho } => {
            let o = load_lattice(lattice)?;
            let text = export_dot(
                &o,
                &DotOptions {
                    name: None,
                    ortho_edges: *ortho,
                },
            );
            Ok(Output {
                json: json!({ "command": "dot", "status": "pass", "dot": text }),
                text,
                passed: true,
            })
        }
    }
}

/// A file-name-safe name for a lattice expression.
fn file_stem(expr: &str) -> String {
    let s: String = expr
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    s.trim_matches('_').to_string()
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        let body = match cli.format {
            Format::Text => out.text.clone(),
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json)?),
        };
        emit(&cli, &body)?;
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            if cli.format == Format::Json {
                let r = Report::error(command_name(&cli.command), format!("{e:#}"));
                let _ = emit(&cli, &format!("{}\n", serde_json::to_string_pretty(&r).unwrap_or_default()));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Adjoint { .. } => "adjoint",
        Command::Compose { .. } => "compose",
        Command::Kernel { .. } => "kernel",
        Command::Cokernel { .. } => "cokernel",
        Command::Factorize { .. } => "factorize",
        Command::SasakiCheck { .. } => "sasaki-check",
        Command::Biproduct { .. } => "biproduct",
        Command::Free { .. } => "free",
        Command::Galois { .. } => "galois",
        Command::Laws { .. } => "laws",
        Command::Gen { .. } => "gen",
        Command::Dot { .. } => "dot",
    }
}
