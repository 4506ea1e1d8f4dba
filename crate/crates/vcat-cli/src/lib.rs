//! The `vcat` command line.
//!
//! Every command writes its result to standard output and maps library
//! errors to exit codes: 1 for unreadable input, 2 for values that fail
//! validation, 3 for requests the library does not support.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vcat::coalgebra::{self, MachineCoalgebra};
use vcat::extension::{self, Discrete, DiscreteKantorovich, ExtendOptions, Grid, PredicateLifting};
use vcat::io;
use vcat::{Error, Quantale, RelPresheaf, SetFunctor, VCat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "vcat", about = "Quantale-enriched categories and their functor extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Zigzag,
    Wpb,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridChoice {
    Values,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BehaveMethod {
    Words,
    Iterate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Lifting {
    Join,
    Meet,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Conversion {
    /// Preorder to V-category (`e` on comparable pairs, `⊥` elsewhere).
    D,
    /// V-category to preorder via non-bottom distances.
    C,
    /// V-category to its underlying preorder (`e ≤ d`).
    V,
    /// Connected components of a preorder.
    Components,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the quantale laws and report structural flags.
    CheckQuantale {
        /// Builtin name (boolean-2, lawvere, ultrametric, chain-N-eK) or a JSON file.
        #[arg(long)]
        quantale: String,
        /// Samples for closed-form quantales.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Check reflexivity and the triangle law of a space.
    CheckSpace {
        #[arg(long)]
        space: PathBuf,
    },
    /// Extend a set functor to V-categories and apply it to a space.
    Extend {
        /// Set functor expression, e.g. `powerset` or `product(identity, const(p,q))`.
        #[arg(long)]
        functor: String,
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_enum, default_value = "zigzag")]
        method: Method,
        #[arg(long, value_enum, default_value = "values")]
        grid: GridChoice,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Hausdorff distance between two subsets, or the full matrix on all subsets.
    Hausdorff {
        #[arg(long)]
        space: PathBuf,
        /// Comma-separated object labels; empty for the empty set.
        #[arg(long, requires = "right")]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Matching distance between two multisets, or the matrix on all multisets up to a size.
    Matching {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, requires = "right")]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Kantorovich lifting of the finite powerset along a join or meet predicate lifting.
    Kantorovich {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_enum, default_value = "join")]
        lifting: Lifting,
        /// Also compare with the extension of the discrete Kantorovich functor.
        #[arg(long)]
        compare: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Convert a space to a relational presheaf and back.
    PresheafRoundtrip {
        #[arg(long)]
        space: PathBuf,
    },
    /// Behavioural distances of a machine.
    Behave {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_enum, default_value = "words")]
        method: BehaveMethod,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Bisimilarity classes of a machine or a Kripke frame.
    Bisim {
        #[arg(long, conflicts_with = "kripke", required_unless_present = "kripke")]
        automaton: Option<PathBuf>,
        #[arg(long)]
        kripke: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Change of base between preorders and V-categories.
    Base {
        #[arg(value_enum)]
        conversion: Conversion,
        #[arg(long)]
        preorder: Option<PathBuf>,
        #[arg(long)]
        space: Option<PathBuf>,
        /// Target quantale for `d`.
        #[arg(long, default_value = "boolean-2")]
        quantale: String,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn with_code(stdout: String, code: i32) -> Outcome {
        Outcome { stdout, stderr: String::new(), code }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::Domain(_) | Error::QuantaleMismatch => EXIT_INVALID,
        Error::Unsupported(_) | Error::Resource(_) | Error::Iteration(_) => EXIT_UNSUPPORTED,
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_code(&e) },
    }
}

type Res<T> = Result<T, Error>;

fn ensure_laws(q: &Quantale) -> Res<()> {
    if q.is_finite() {
        let report = q.check_laws();
        if !report.all_pass() {
            return Err(Error::Domain(format!("{} is not a quantale:\n{report}", q.kind())));
        }
    }
    Ok(())
}

fn load_space(path: &Path) -> Res<VCat> {
    let x = io::load_space(path)?;
    ensure_laws(x.quantale())?;
    let report = x.validate();
    if !report.all_pass() {
        return Err(Error::Domain(format!("{} is not a V-category:\n{report}", path.display())));
    }
    Ok(x)
}

fn load_automaton(path: &Path) -> Res<MachineCoalgebra> {
    let m = io::load_automaton(path)?;
    ensure_laws(m.quantale())?;
    let report = m.output_space().validate();
    if !report.all_pass() {
        return Err(Error::Domain(format!("the output space is not a V-category:\n{report}")));
    }
    Ok(m)
}

fn labels_of(x: &VCat, list: &str) -> Res<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| x.position(s).ok_or_else(|| Error::Parse(format!("unknown object {s:?}"))))
        .collect()
}

fn render_space(x: &VCat, meta: Value, format: Format) -> String {
    match format {
        Format::Json => io::to_pretty(&io::space_to_value(x, Some(meta))),
        Format::Table => {
            let mut out = String::new();
            if let Value::Object(map) = &meta {
                for (k, v) in map {
                    out.push_str(&format!("# {k}: {}\n", compact(v)));
                }
            }
            out.push_str(&io::render_table(x.quantale(), x.objects(), &x.matrix()));
            out
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn dispatch(command: Command) -> Res<Outcome> {
    match command {
        Command::CheckQuantale { quantale, samples, seed } => {
            let q = io::quantale_by_name_or_path(&quantale)?;
            let report = if q.is_finite() { q.check_laws() } else { q.check_laws_sampled(samples, seed) };
            let mut out = format!("quantale: {}\n{report}\n", q.kind());
            if !report.all_pass() {
                return Ok(Outcome::with_code(out, EXIT_INVALID));
            }
            let flags = q.structure_flags();
            out.push_str(&format!(
                "integral: {}\nzero-divisor-free: {}\ncompletely distributive: {}\n",
                flags.integral, flags.zero_divisor_free, flags.completely_distributive
            ));
            Ok(Outcome::ok(out))
        }
        Command::CheckSpace { space } => {
            let x = io::load_space(&space)?;
            ensure_laws(x.quantale())?;
            let report = x.validate();
            let code = if report.all_pass() { EXIT_OK } else { EXIT_INVALID };
            Ok(Outcome::with_code(format!("{} objects over {}\n{report}\n", x.len(), x.quantale().kind()), code))
        }
        Command::Extend { functor, space, method, grid, format } => {
            let t = SetFunctor::parse(&functor)?;
            let x = load_space(&space)?;
            let options = ExtendOptions {
                grid: match grid {
                    GridChoice::Values => Grid::Values,
                    GridChoice::Full => Grid::Full,
                },
                ..Default::default()
            };
            let ext = match method {
                Method::Zigzag => extension::lan_extend_with(&Discrete::new(x.quantale().clone(), t.clone()), &x, &options)?,
                Method::Wpb => extension::vcatify_wpb_with(&t, &x, &options)?,
            };
            let q = x.quantale();
            let meta = json!({
                "functor": t.to_string(),
                "method": format!("{method:?}").to_lowercase(),
                "grid": ext.grid.iter().map(|&r| q.format_elem(r)).collect::<Vec<_>>(),
                "iterations": ext.iterations,
                "converged": ext.converged,
            });
            Ok(Outcome::ok(render_space(&ext.space, meta, format)))
        }
        Command::Hausdorff { space, left, right, format } => {
            let x = load_space(&space)?;
            let q = x.quantale().clone();
            if let (Some(l), Some(r)) = (left, right) {
                let d = extension::hausdorff(&x, &labels_of(&x, &l)?, &labels_of(&x, &r)?)?;
                return Ok(Outcome::ok(format!("{}\n", q.format_elem(d))));
            }
            q.require_completely_distributive()?;
            let carrier = SetFunctor::Powerset.apply_on_set(x.len())?;
            let sets: Vec<Vec<usize>> = carrier.terms.iter().map(atoms).collect();
            let dist = sets
                .iter()
                .map(|a| sets.iter().map(|b| extension::hausdorff(&x, a, b)).collect::<Res<Vec<_>>>())
                .collect::<Res<Vec<_>>>()?;
            let objects = carrier.terms.iter().map(|t| SetFunctor::render(t, x.objects())).collect();
            let h = VCat::new(q, objects, dist)?;
            Ok(Outcome::ok(render_space(&h, json!({"functor": "powerset", "method": "hausdorff"}), format)))
        }
        Command::Matching { space, left, right, size, format } => {
            let x = load_space(&space)?;
            let q = x.quantale().clone();
            if let (Some(l), Some(r)) = (left, right) {
                let d = extension::matching_metric(&x, &labels_of(&x, &l)?, &labels_of(&x, &r)?)?;
                return Ok(Outcome::ok(format!("{}\n", q.format_elem(d))));
            }
            let carrier = SetFunctor::Multiset(size).apply_on_set(x.len())?;
            let bags: Vec<Vec<usize>> = carrier.terms.iter().map(atoms).collect();
            let dist = bags
                .iter()
                .map(|a| bags.iter().map(|b| extension::matching_metric(&x, a, b)).collect::<Res<Vec<_>>>())
                .collect::<Res<Vec<_>>>()?;
            let objects = carrier.terms.iter().map(|t| SetFunctor::render(t, x.objects())).collect();
            let m = VCat::new(q, objects, dist)?;
            Ok(Outcome::ok(render_space(&m, json!({"functor": format!("multiset({size})"), "method": "matching"}), format)))
        }
        Command::Kantorovich { space, lifting, compare, format } => {
            let x = load_space(&space)?;
            let q = x.quantale().clone();
            let p = match lifting {
                Lifting::Join => PredicateLifting::join(q.clone())?,
                Lifting::Meet => PredicateLifting::meet(q.clone())?,
            };
            let lifted = extension::kantorovich_lift(&p, &x)?;
            let mut meta = json!({
                "functor": "powerset",
                "lifting": format!("{lifting:?}").to_lowercase(),
                "v-monotone": p.is_vmonotone(2)?,
            });
            if compare {
                let ext = extension::lan_extend(&DiscreteKantorovich::new(p), &x)?;
                let below = (0..ext.len()).all(|a| (0..ext.len()).all(|b| q.le(ext.d(a, b), lifted.d(a, b))));
                meta["extension_below_lifting"] = json!(below);
            }
            Ok(Outcome::ok(render_space(&lifted, meta, format)))
        }
        Command::PresheafRoundtrip { space } => {
            let x = load_space(&space)?;
            let q = x.quantale().clone();
            let presheaf = RelPresheaf::from_space(&x);
            let back = presheaf.to_space()?;
            let levels: Vec<Value> = presheaf
                .entries()
                .map(|(r, rel)| json!({"level": q.format_elem(r), "pairs": io::relation_pairs(x.objects(), rel)}))
                .collect();
            let same = back.same_as(&x);
            let out = json!({"levels": levels, "roundtrip": same, "space": io::space_to_value(&back, None)});
            Ok(Outcome::with_code(io::to_pretty(&out), if same { EXIT_OK } else { EXIT_INVALID }))
        }
        Command::Behave { automaton, depth, method, tol, max_steps, format } => {
            let m = load_automaton(&automaton)?;
            let q = m.quantale().clone();
            let (dist, meta) = match method {
                BehaveMethod::Words => {
                    (coalgebra::beh_metric_words(&m, depth), json!({"method": "words", "depth": depth}))
                }
                BehaveMethod::Iterate => {
                    let it = coalgebra::beh_metric_iterate(&m, max_steps, tol);
                    let words = coalgebra::beh_metric_words(&m, it.steps);
                    let cmp = coalgebra::compare(&q, &it.dist, &words);
                    let meta = json!({
                        "method": "iterate",
                        "iterations": it.steps,
                        "converged": it.converged,
                        "comparison_with_words": {
                            "depth": it.steps,
                            "equal": cmp.equal,
                            "below": cmp.below,
                            "above": cmp.above,
                            "incomparable": cmp.incomparable,
                        },
                    });
                    (it.dist, meta)
                }
            };
            let x = VCat::new(q, m.states().to_vec(), dist)?;
            Ok(Outcome::ok(render_space(&x, meta, format)))
        }
        Command::Bisim { automaton, kripke, format } => {
            let (partition, states) = match (automaton, kripke) {
                (Some(path), _) => {
                    let m = load_automaton(&path)?;
                    (coalgebra::bisimilarity(&m), m.states().to_vec())
                }
                (None, Some(path)) => {
                    let k = io::load_kripke(&path)?;
                    (coalgebra::kripke_bisimilarity(&k), k.states().to_vec())
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            let out = match format {
                Format::Json => {
                    let classes: Vec<Vec<&str>> = partition
                        .classes()
                        .iter()
                        .map(|c| c.iter().map(|&i| states[i].as_str()).collect())
                        .collect();
                    io::to_pretty(&json!({"classes": classes}))
                }
                Format::Table => format!("{}\n", partition.render(&states)),
            };
            Ok(Outcome::ok(out))
        }
        Command::Base { conversion, preorder, space, quantale } => {
            let need_preorder = || preorder.as_deref().ok_or_else(|| Error::Parse("--preorder is required".into()));
            let need_space = || space.as_deref().ok_or_else(|| Error::Parse("--space is required".into()));
            let out = match conversion {
                Conversion::D => {
                    let p = io::load_preorder(need_preorder()?)?;
                    let q = Arc::new(io::quantale_by_name_or_path(&quantale)?);
                    ensure_laws(&q)?;
                    io::space_to_value(&coalgebra::base_d(q, &p), None)
                }
                Conversion::C => io::preorder_to_value(&coalgebra::base_c(&load_space(need_space()?)?)?),
                Conversion::V => io::preorder_to_value(&load_space(need_space()?)?.underlying_preorder()),
                Conversion::Components => {
                    let p = io::load_preorder(need_preorder()?)?;
                    let classes: Vec<Vec<&str>> = coalgebra::connected_components(&p)
                        .classes()
                        .iter()
                        .map(|c| c.iter().map(|&i| p.elements()[i].as_str()).collect())
                        .collect();
                    json!({"classes": classes})
                }
            };
            Ok(Outcome::ok(io::to_pretty(&out)))
        }
    }
}

fn atoms(t: &vcat::Term) -> Vec<usize> {
    match t {
        vcat::Term::Set(items) | vcat::Term::Bag(items) => items
            .iter()
            .map(|i| match i {
                vcat::Term::Atom(a) => *a,
                other => unreachable!("not an atom: {other:?}"),
            })
            .collect(),
        other => unreachable!("not a collection: {other:?}"),
    }
}
