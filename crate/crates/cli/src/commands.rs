//! Subcommands. Every command renders a human-readable report followed by
//! a `---` line and `key: value` lines for scripts.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rtk_core::approx;
use rtk_core::convex::{self, parse_q, RationalPoint};
use rtk_core::embed::{self, FactorOrder, DEFAULT_SEED};
use rtk_core::laws;
use rtk_core::locality::{self, MonoidAlgebra};
use rtk_core::oracle;
use rtk_core::theory::default_cap;
use rtk_core::{BitSet, Error, GaloisInsertion, Report, ResourceTheory, Result, SpecMap, StateSpace};

use crate::dot::export_dot;
use crate::model::Model;
use crate::parse::parse_theory;

#[derive(Parser, Debug)]
#[command(name = "rtk", version, about = "Finite resource theories of knowledge")]
struct Cli {
    /// Cross-check results against the brute-force reference implementations.
    #[arg(long, global = true)]
    oracle: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FileArg {
    /// Theory file.
    file: PathBuf,
}

#[derive(Args, Debug)]
struct TheoryArgs {
    #[command(flatten)]
    file: FileArg,
    /// Monoid section naming the theory.
    #[arg(long)]
    monoid: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    /// e = e_ext ∘ e_int
    ExtInt,
    /// e = e_int ∘ e_ext
    IntExt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    All,
    Preorder,
    Lumping,
    Decomposition,
    FreeComposition,
    Robustness,
    Convexity,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a file and validate every section.
    Check(FileArg),
    /// Whether one specification reaches another.
    Reach {
        #[command(flatten)]
        t: TheoryArgs,
        /// Source specification, as space-separated states.
        #[arg(long)]
        from: String,
        /// Target specification, as space-separated states.
        #[arg(long)]
        to: String,
    },
    /// Whether a specification is reachable from Ω.
    Free {
        #[command(flatten)]
        t: TheoryArgs,
        /// Specification as space-separated states.
        #[arg(long)]
        spec: String,
    },
    /// Reachability classes of candidate specifications.
    Quotient {
        #[command(flatten)]
        t: TheoryArgs,
        /// Specification as space-separated states.
        #[arg(long)]
        spec: Vec<String>,
        /// Use every specification (at most 5 states).
        #[arg(long)]
        all_specs: bool,
        /// Write the class order as DOT (`-` for standard output).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Whether no allowed map enlarges a specification's complement.
    Conserved {
        #[command(flatten)]
        t: TheoryArgs,
        /// Specification as space-separated states.
        #[arg(long)]
        spec: String,
    },
    /// Combine specifications, or intersect two theories.
    Combine {
        #[command(flatten)]
        file: FileArg,
        /// Specification as space-separated states.
        #[arg(long)]
        spec: Vec<String>,
        /// Monoid section.
        #[arg(long)]
        monoid: Option<String>,
        /// Second monoid section.
        #[arg(long)]
        with: Option<String>,
    },
    /// Check a lumping and its insertion, or lump over a monoid.
    Lumping {
        #[command(flatten)]
        file: FileArg,
        /// Lumping section.
        #[arg(long, conflicts_with_all = ["map", "monoid"])]
        lumping: Option<String>,
        /// Map section.
        #[arg(long, conflicts_with = "monoid")]
        map: Option<String>,
        /// Monoid section.
        #[arg(long)]
        monoid: Option<String>,
    },
    /// Classify an embedding.
    Embed {
        #[command(flatten)]
        file: FileArg,
        /// Map section.
        #[arg(long)]
        map: String,
    },
    /// Factor an embedding into extensive and intensive parts.
    Decompose {
        #[command(flatten)]
        file: FileArg,
        /// Map section.
        #[arg(long)]
        map: String,
        /// Factor order.
        #[arg(long, value_enum, default_value = "ext-int")]
        order: Order,
    },
    /// Recover the middle stage of nested insertions.
    Nest {
        #[command(flatten)]
        file: FileArg,
        /// Finer lumping (the intermediate description).
        #[arg(long)]
        outer: String,
        /// Coarser lumping (the most reduced description).
        #[arg(long)]
        inner: String,
    },
    /// The theory of an agent seen through a lumping.
    Restrict {
        #[command(flatten)]
        t: TheoryArgs,
        /// Monoid section acting as the agent.
        #[arg(long)]
        agent: String,
        /// Lumping section.
        #[arg(long)]
        lumping: String,
    },
    /// The effective theory induced by a side resource.
    Effective {
        #[command(flatten)]
        t: TheoryArgs,
        /// Monoid section acting as the agent.
        #[arg(long)]
        agent: String,
        /// Lumping section.
        #[arg(long)]
        lumping: String,
        /// Side resource, as space-separated states.
        #[arg(long)]
        side: String,
    },
    /// Elements commuting with a submonoid.
    Commutant {
        #[command(flatten)]
        t: TheoryArgs,
        /// Monoid section generating the submonoid.
        #[arg(long)]
        subset: String,
    },
    /// The completion of a submonoid.
    Bicommutant {
        #[command(flatten)]
        t: TheoryArgs,
        /// Monoid section generating the submonoid.
        #[arg(long)]
        subset: String,
    },
    /// The lattice of complete subsystems.
    Subsystems {
        #[command(flatten)]
        t: TheoryArgs,
        /// Comma-separated monoid sections used as seeds.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<String>,
        /// Write the lattice as DOT (`-` for standard output).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Independence of two subsystems and the agents they induce.
    Independence {
        #[command(flatten)]
        t: TheoryArgs,
        /// First agent (monoid section).
        #[arg(long)]
        a: String,
        /// Second agent (monoid section).
        #[arg(long)]
        b: String,
    },
    /// Check that a map swaps two subsystems.
    Swap {
        #[command(flatten)]
        t: TheoryArgs,
        /// First agent (monoid section).
        #[arg(long)]
        a: String,
        /// Second agent (monoid section).
        #[arg(long)]
        b: String,
        /// Swap map section.
        #[arg(long)]
        u: String,
        /// Inverse of the swap map.
        #[arg(long)]
        u_inv: String,
    },
    /// Intersect the images of a local specification under swaps.
    Copies {
        #[command(flatten)]
        file: FileArg,
        /// Lumping section.
        #[arg(long)]
        lumping: String,
        /// Labels of the reduced space.
        #[arg(long)]
        spec: String,
        /// Swap map section; repeat for more.
        #[arg(long)]
        swap: Vec<String>,
    },
    /// Structure laws and the triangle inequality.
    ApproxVerify {
        #[command(flatten)]
        file: FileArg,
        /// Approx section.
        #[arg(long)]
        approx: String,
    },
    /// Stability of a theory and robustness of a specification.
    ApproxRobust {
        #[command(flatten)]
        t: TheoryArgs,
        /// Approx section.
        #[arg(long)]
        approx: String,
        /// Specification as space-separated states.
        #[arg(long)]
        spec: String,
        /// Approximation index.
        #[arg(long)]
        eps: String,
    },
    /// Carry a structure through a lumping.
    ApproxReduce {
        #[command(flatten)]
        file: FileArg,
        /// Approx section.
        #[arg(long)]
        approx: String,
        /// Lumping section.
        #[arg(long)]
        lumping: String,
    },
    /// Convex hull membership with explicit weights.
    Hull {
        #[command(flatten)]
        file: FileArg,
        /// Points section.
        #[arg(long)]
        points: String,
        /// Space-separated rational coordinates.
        #[arg(long)]
        point: String,
    },
    /// Extreme points of a point set.
    Extreme {
        #[command(flatten)]
        file: FileArg,
        /// Points section.
        #[arg(long)]
        points: String,
    },
    /// Whether two point sets have the same hull.
    ProbEquiv {
        #[command(flatten)]
        file: FileArg,
        /// Points section.
        #[arg(long)]
        points: String,
        /// Second monoid section.
        #[arg(long)]
        with: String,
    },
    /// Run the seeded property suites.
    Laws {
        /// Which suite to run.
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

/// Exit status and both output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// A report under construction.
struct Out {
    text: String,
    fields: Vec<(String, String)>,
    verdict: bool,
}

impl Out {
    fn new(command: &str) -> Self {
        Out {
            text: String::new(),
            fields: vec![("command".into(), command.into())],
            verdict: true,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn field(&mut self, k: &str, v: impl ToString) {
        self.fields.push((k.to_string(), v.to_string()));
    }

    fn report(&mut self, r: &Report) {
        let _ = write!(self.text, "{r}");
        self.verdict &= r.ok();
    }

    fn finish(mut self) -> Outcome {
        let verdict = if self.verdict { "pass" } else { "fail" };
        self.fields.push(("verdict".into(), verdict.into()));
        let mut s = self.text;
        s.push_str("---\n");
        for (k, v) in &self.fields {
            let _ = writeln!(s, "{k}: {v}");
        }
        Outcome {
            code: if self.verdict { EXIT_OK } else { EXIT_NEGATIVE },
            stdout: s,
            stderr: String::new(),
        }
    }
}

/// Failures before any model exists.
enum Failure {
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn load(f: &FileArg) -> std::result::Result<Model, Failure> {
    let text = std::fs::read_to_string(&f.file).map_err(|e| Failure::Io(format!("{}: {e}", f.file.display())))?;
    Ok(parse_theory(&text)?)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_dot(out: &mut Out, path: &PathBuf, dot: String) -> std::result::Result<(), Failure> {
    if path.as_os_str() == "-" {
        out.text.push_str(&dot);
    } else {
        std::fs::write(path, &dot).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        out.field("dot", path.display());
    }
    Ok(())
}

struct Theory {
    theory: ResourceTheory,
    names: Vec<String>,
}

impl Theory {
    fn load(m: &Model, name: &str) -> Result<Self> {
        let decl = m.monoid(name)?;
        let monoid = decl.close()?;
        let names = decl.generator_names(&monoid);
        Ok(Theory {
            theory: ResourceTheory::new(monoid),
            names,
        })
    }

    fn space(&self) -> &StateSpace {
        self.theory.space()
    }

    fn describe(&self, i: usize) -> String {
        self.theory.monoid().describe(i, &self.names)
    }
}

/// A submonoid of `parent` named by a monoid section, as a subset.
fn subset(m: &Model, alg: &MonoidAlgebra, name: &str) -> Result<BitSet> {
    let sub = m.monoid(name)?.close()?;
    alg.subset_of(sub.elements())
}

fn list_elements(out: &mut Out, alg: &MonoidAlgebra, s: &BitSet) {
    for i in s.iter() {
        out.line(format!("  [{}]", alg.monoid().element(i)));
    }
}

fn parse_point(text: &str) -> Result<RationalPoint> {
    let coords = text
        .split_whitespace()
        .map(|t| parse_q(t).ok_or_else(|| Error::UnknownReference(format!("`{t}` is not a rational"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalPoint::new(coords))
}

fn oracle_line(out: &mut Out, agrees: Result<bool>) {
    match agrees {
        Ok(true) => {
            out.line("oracle: agrees");
            out.field("oracle", "agrees");
        }
        Ok(false) => {
            out.line("oracle: DISAGREES");
            out.field("oracle", "disagrees");
            out.verdict = false;
        }
        Err(e) => {
            out.line(format!("oracle: not run ({e})"));
            out.field("oracle", "out-of-range");
        }
    }
}

fn no_oracle(out: &mut Out, oracle: bool) {
    if oracle {
        out.line("oracle: no reference implementation for this command");
        out.field("oracle", "none");
    }
}

fn execute(cli: Cli) -> std::result::Result<Outcome, Failure> {
    let seed = cli.seed;
    let oracle = cli.oracle;
    match cli.cmd {
        Cmd::Check(f) => {
            let m = load(&f)?;
            let mut out = Out::new("check");
            let mut agree = true;
            let mut oracle_run = false;
            for item in &m.items {
                use crate::model::Item;
                match item {
                    Item::Space(d) => out.line(format!(
                        "space {}: {} states",
                        d.name.as_deref().unwrap_or("[states]"),
                        d.space.size()
                    )),
                    Item::Map(d) => {
                        let kind = if d.map.is_deterministic() { "deterministic" } else { "nondeterministic" };
                        out.line(format!("map {}: {kind}", d.name));
                    }
                    Item::Monoid(d) => {
                        let mon = d.close()?;
                        out.line(format!("monoid {}: {} elements", d.name, mon.len()));
                        if oracle {
                            if let Ok(c) = oracle::oracle_closure(&d.space, mon.generators()) {
                                oracle_run = true;
                                agree &= c.len() == mon.len();
                            }
                        }
                    }
                    Item::Lumping(d) => {
                        let mut r = embed::verify_lumping(d.lumping.map())?;
                        let ins = GaloisInsertion::from_lumping(&d.lumping)?;
                        r.extend("insertion: ", ins.verify(seed));
                        out.line(format!("lumping {}: {} classes", d.name, ins.small().size()));
                        out.report(&r);
                    }
                    Item::Approx(d) => {
                        out.line(format!("approx {}: {} index elements", d.name, d.structure.index().len()));
                        out.report(&approx::verify_structure(&d.structure));
                    }
                    Item::Points(d) => out.line(format!(
                        "points {}: {} points in dimension {}",
                        d.name,
                        d.points.len(),
                        d.points.dim()
                    )),
                }
            }
            if oracle {
                if oracle_run {
                    oracle_line(&mut out, Ok(agree));
                } else {
                    oracle_line(&mut out, Err(Error::TooLarge("no monoid in range".into())));
                }
            }
            out.field("sections", m.items.len());
            Ok(out.finish())
        }
        Cmd::Reach { t, from, to } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let (v, w) = (m.spec(th.space(), &from)?, m.spec(th.space(), &to)?);
            let r = th.theory.reaches(&v, &w)?;
            let mut out = Out::new("reach");
            match r.index {
                Some(i) => {
                    out.line(format!("{v} -> {w}: reachable"));
                    out.line(format!("witness: {} = [{}]", th.describe(i), th.theory.monoid().element(i)));
                    out.field("witness", th.describe(i));
                }
                None => out.line(format!("{v} -> {w}: not reachable")),
            }
            out.verdict = r.found;
            if oracle {
                oracle_line(&mut out, oracle::oracle_reaches(&th.theory, &v, &w).map(|o| o == r));
            }
            Ok(out.finish())
        }
        Cmd::Free { t, spec } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let v = m.spec(th.space(), &spec)?;
            let r = th.theory.reaches(&th.space().full(), &v)?;
            let mut out = Out::new("free");
            out.line(format!("{v}: {}", if r.found { "free" } else { "not free" }));
            if let Some(i) = r.index {
                out.field("witness", th.describe(i));
            }
            out.verdict = r.found;
            if oracle {
                oracle_line(&mut out, oracle::oracle_reaches(&th.theory, &th.space().full(), &v).map(|o| o == r));
            }
            Ok(out.finish())
        }
        Cmd::Quotient { t, spec, all_specs, dot } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let q = if all_specs {
                th.theory.quotient_all()?
            } else {
                if spec.is_empty() {
                    return Err(Error::UnknownReference("quotient needs --spec or --all-specs".into()).into());
                }
                let cands = spec.iter().map(|s| m.spec(th.space(), s)).collect::<Result<Vec<_>>>()?;
                th.theory.quotient(&cands)?
            };
            let mut out = Out::new("quotient");
            let labels: Vec<String> = q
                .classes
                .iter()
                .map(|c| c.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            for (i, l) in labels.iter().enumerate() {
                let top = if i == q.top { " (free)" } else { "" };
                out.line(format!("class {i}{top}: {l}"));
            }
            for (a, b) in q.hasse() {
                out.line(format!("class {a} -> class {b}"));
            }
            if let Some(p) = dot {
                write_dot(&mut out, &p, export_dot("quotient", &labels, |a, b| q.reach[a][b]))?;
            }
            no_oracle(&mut out, oracle);
            out.field("classes", q.classes.len());
            Ok(out.finish())
        }
        Cmd::Conserved { t, spec } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let v = m.spec(th.space(), &spec)?;
            let c = th.theory.is_conserved(&v)?;
            let mut out = Out::new("conserved");
            out.line(format!("{v}: {}", if c { "conserved" } else { "not conserved" }));
            out.verdict = c;
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Combine { file, spec, monoid, with } => {
            let m = load(&file)?;
            let mut out = Out::new("combine");
            match (monoid, with) {
                (Some(a), Some(b)) => {
                    let (ta, tb) = (Theory::load(&m, &a)?, Theory::load(&m, &b)?);
                    let both = ta.theory.combine(&tb.theory)?;
                    out.line(format!("{a} ∩ {b}: {} elements", both.monoid().len()));
                    for f in both.monoid().elements() {
                        out.line(format!("  [{f}]"));
                    }
                    out.field("elements", both.monoid().len());
                }
                (None, None) => {
                    let space = m.default_space()?;
                    let specs = spec.iter().map(|s| m.spec(space, s)).collect::<Result<Vec<_>>>()?;
                    let first = specs
                        .first()
                        .ok_or_else(|| Error::UnknownReference("combine needs --spec or --monoid with --with".into()))?;
                    let mut acc = first.clone();
                    for s in &specs[1..] {
                        match acc.combine(s) {
                            Ok(c) => acc = c,
                            Err(e) => {
                                out.line(format!("{acc} and {s}: {e}"));
                                out.field("result", "incompatible");
                                out.verdict = false;
                                return Ok(out.finish());
                            }
                        }
                    }
                    out.line(format!("combined: {acc}"));
                    out.field("result", acc);
                }
                _ => return Err(Error::UnknownReference("--monoid and --with go together".into()).into()),
            }
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Lumping { file, lumping, map, monoid } => {
            let m = load(&file)?;
            let mut out = Out::new("lumping");
            let lump = match (lumping, map, monoid) {
                (Some(l), None, None) => m.lumping(&l)?.lumping.clone(),
                (None, Some(f), None) => {
                    let r = embed::verify_lumping(&m.map(&f)?.map)?;
                    out.report(&r);
                    if !r.ok() {
                        return Ok(out.finish());
                    }
                    rtk_core::Lumping::new(m.map(&f)?.map.clone())?
                }
                (None, None, Some(t)) => {
                    let th = Theory::load(&m, &t)?;
                    let g = embed::lumping_from_maps(th.space(), th.theory.monoid().elements())?;
                    out.line(format!("generated by {} elements, {} extra rounds", th.theory.monoid().len(), g.iterations));
                    g.lumping
                }
                _ => return Err(Error::UnknownReference("lumping needs one of --lumping, --map, --monoid".into()).into()),
            };
            let ins = GaloisInsertion::from_lumping(&lump)?;
            out.line(format!("classes: {}", ins.small().labels().join(" ")));
            out.report(&ins.verify(seed));
            out.field("classes", ins.small().size());
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Embed { file, map } => {
            let m = load(&file)?;
            let e = &m.map(&map)?.map;
            let mut out = Out::new("embed");
            match embed::classify_embedding(e) {
                Ok(c) => {
                    out.line(format!("kind: {}", c.kind()));
                    out.line(format!("extensive: {}", yes(c.extensive)));
                    out.line(format!("intensive: {}", yes(c.is_intensive())));
                    if let Some(h) = &c.adjoint {
                        out.line(format!("adjoint: [{h}]"));
                    }
                    out.field("kind", c.kind());
                }
                Err(Error::NotOrderEmbedding(w)) => {
                    out.line(format!("not an order embedding: {w}"));
                    out.field("kind", "none");
                    out.verdict = false;
                }
                Err(e) => return Err(e.into()),
            }
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Decompose { file, map, order } => {
            let m = load(&file)?;
            let e = &m.map(&map)?.map;
            let order = match order {
                Order::ExtInt => FactorOrder::ExtensiveAfterIntensive,
                Order::IntExt => FactorOrder::IntensiveAfterExtensive,
            };
            let d = embed::decompose_embedding(e, order)?;
            let mut out = Out::new("decompose");
            out.line(format!("Γ: {}", d.gamma.labels().join(" ")));
            out.line(format!("e_ext: [{}]", d.e_ext));
            out.line(format!("e_int: [{}]", d.e_int));
            out.line(format!("h_int: [{}]", d.h_int));
            let mut r = Report::new();
            r.push("factors compose to e", (d.composed() != *e).then(|| d.composed().to_string()));
            let ext = embed::classify_embedding(&d.e_ext).map(|c| c.extensive).unwrap_or(false);
            r.push("e_ext extensive", (!ext).then(|| d.e_ext.to_string()));
            let int = embed::classify_embedding(&d.e_int).map(|c| c.is_intensive()).unwrap_or(false);
            r.push("e_int intensive", (!int).then(|| d.e_int.to_string()));
            out.report(&r);
            out.field("gamma", d.gamma.size());
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Nest { file, outer, inner } => {
            let m = load(&file)?;
            let ab = GaloisInsertion::from_lumping(&m.lumping(&outer)?.lumping)?;
            let a = GaloisInsertion::from_lumping(&m.lumping(&inner)?.lumping)?;
            let mid = embed::nest_middle(&ab, &a)?;
            let mut out = Out::new("nest");
            out.line(format!("middle: {} -> {}", mid.small(), mid.big()));
            out.line(format!("e: [{}]", mid.e()));
            out.line(format!("h: [{}]", mid.h()));
            let back = embed::nest_compose(&mid, &ab)?;
            let mut r = mid.verify(seed);
            r.push(
                "composing recovers the inner insertion",
                (back.e() != a.e() || back.h() != a.h()).then(|| format!("[{}]", back.e())),
            );
            out.report(&r);
            out.field("middle", mid.small().size());
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Restrict { t, agent, lumping } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let a = m.monoid(&agent)?.close()?;
            let ins = GaloisInsertion::from_lumping(&m.lumping(&lumping)?.lumping)?;
            let r = embed::restrict_theory(&th.theory, &a, &ins, default_cap())?;
            let mut out = Out::new("restrict");
            out.line(format!("reduced space: {}", ins.small()));
            out.line(format!("elements ({}):", r.monoid().len()));
            for f in r.monoid().elements() {
                out.line(format!("  [{f}]"));
            }
            out.field("elements", r.monoid().len());
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Effective { t, agent, lumping, side } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let a = m.monoid(&agent)?.close()?;
            let ins = GaloisInsertion::from_lumping(&m.lumping(&lumping)?.lumping)?;
            let k = m.spec(th.space(), &side)?;
            let mut out = Out::new("effective");
            match embed::effective_theory(&th.theory, &a, &ins, &k, default_cap()) {
                Ok(r) => {
                    out.line(format!("reduced space: {}", ins.small()));
                    out.line(format!("side resource: {}", k));
                    out.line(format!("elements ({}):", r.monoid().len()));
                    for f in r.monoid().elements() {
                        out.line(format!("  [{f}]"));
                    }
                    out.field("elements", r.monoid().len());
                }
                Err(e @ (Error::IncompatibleSideResource(_) | Error::EmptyIntersection(_))) => {
                    out.line(e.to_string());
                    out.verdict = false;
                }
                Err(e) => return Err(e.into()),
            }
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Commutant { t, subset: name } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let alg = MonoidAlgebra::new(th.theory.monoid().clone());
            let a = subset(&m, &alg, &name)?;
            let c = alg.commutant(&a);
            let mut out = Out::new("commutant");
            out.line(format!("commutant of {name} ({} elements): {} elements", a.count(), c.count()));
            list_elements(&mut out, &alg, &c);
            out.field("elements", c.count());
            if oracle {
                oracle_line(&mut out, oracle::oracle_commutant(alg.monoid(), &a).map(|o| o == c));
            }
            Ok(out.finish())
        }
        Cmd::Bicommutant { t, subset: name } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let alg = MonoidAlgebra::new(th.theory.monoid().clone());
            let a = subset(&m, &alg, &name)?;
            let c = alg.bicommutant(&a);
            let mut out = Out::new("bicommutant");
            out.line(format!("bicommutant of {name} ({} elements): {} elements", a.count(), c.count()));
            out.line(format!("complete: {}", yes(c == a)));
            list_elements(&mut out, &alg, &c);
            out.field("elements", c.count());
            out.field("complete", c == a);
            if oracle {
                let o = oracle::oracle_commutant(alg.monoid(), &a)
                    .and_then(|x| oracle::oracle_commutant(alg.monoid(), &x))
                    .map(|o| o == c);
                oracle_line(&mut out, o);
            }
            Ok(out.finish())
        }
        Cmd::Subsystems { t, seeds, dot } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let alg = MonoidAlgebra::new(th.theory.monoid().clone());
            let seed_sets = seeds
                .iter()
                .map(|s| subset(&m, &alg, s).map(|a| alg.bicommutant(&a)))
                .collect::<Result<Vec<_>>>()?;
            let lat = alg.enumerate_complete((!seeds.is_empty()).then_some(seed_sets.as_slice()), default_cap())?;
            let mut out = Out::new("subsystems");
            let labels: Vec<String> = lat
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let tag = if i == lat.bottom {
                        " bottom"
                    } else if i == lat.top {
                        " top"
                    } else {
                        ""
                    };
                    format!("S{i}: {} elements{tag}", n.count())
                })
                .collect();
            out.line(format!("{} complete subsystems", lat.len()));
            if lat.len() <= 64 {
                for l in &labels {
                    out.line(l);
                }
            }
            out.report(&lat.check_laws(seed));
            out.report(&lat.certify_tables(&alg));
            if let Some(p) = dot {
                let nodes = &lat.nodes;
                write_dot(&mut out, &p, export_dot("subsystems", &labels, |a, b| nodes[a].is_subset(&nodes[b])))?;
            }
            no_oracle(&mut out, oracle);
            out.field("nodes", lat.len());
            out.field("hasse_edges", lat.hasse().len());
            Ok(out.finish())
        }
        Cmd::Independence { t, a, b } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let alg = MonoidAlgebra::new(th.theory.monoid().clone());
            let (sa, sb) = (subset(&m, &alg, &a)?, subset(&m, &alg, &b)?);
            let mut out = Out::new("independence");
            let indep = alg.are_independent(&sa, &sb)?;
            out.line(format!("independent: {}", yes(indep)));
            out.line(format!("{a} centreless: {}", yes(alg.is_centreless(&sa)?)));
            out.line(format!("{b} centreless: {}", yes(alg.is_centreless(&sb)?)));
            out.verdict = indep;
            if indep && alg.is_complete(&sa) && alg.is_complete(&sb) {
                let ag = alg.derive_agents(&sa, &sb, default_cap())?;
                out.line(format!("agent {a}: {} on {}", ag.theory_a.monoid().len(), ag.ins_a.small()));
                out.line(format!("agent {b}: {} on {}", ag.theory_b.monoid().len(), ag.ins_b.small()));
                out.report(&ag.certificate);
                let c = locality::check_compatibility(&ag.ins_a, &ag.ins_b)?;
                out.line(format!("freely composable: {}", yes(c.verdict())));
                if th.space().size() <= 5 {
                    let side = alg.free_composability_condition(&sa, &sb)?;
                    out.line(format!("side condition: {}", yes(side)));
                }
                out.field("agent_a", ag.theory_a.monoid().len());
                out.field("agent_b", ag.theory_b.monoid().len());
            } else if indep {
                out.line("agents need complete subsystems");
            }
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Swap { t, a, b, u, u_inv } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let alg = MonoidAlgebra::new(th.theory.monoid().clone());
            let (sa, sb) = (subset(&m, &alg, &a)?, subset(&m, &alg, &b)?);
            let (fu, fi) = (&m.map(&u)?.map, &m.map(&u_inv)?.map);
            let iso = alg.conjugation_iso(&sa, fu, fi)?;
            let mut out = Out::new("swap");
            out.report(&alg.verify_swap(&sa, &sb, &iso, fu, fi)?);
            out.field("pairs", sa.count() * sb.count());
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Copies { file, lumping, spec, swap } => {
            let m = load(&file)?;
            let ins = GaloisInsertion::from_lumping(&m.lumping(&lumping)?.lumping)?;
            let v = m.spec(ins.small(), &spec)?;
            let swaps = swap.iter().map(|s| Ok(m.map(s)?.map.clone())).collect::<Result<Vec<SpecMap>>>()?;
            let mut out = Out::new("copies");
            match locality::n_copies(&ins, &v, &swaps) {
                Ok(c) => {
                    out.line(format!("{} copies of {v}: {c}", swaps.len()));
                    out.field("result", c);
                }
                Err(e @ Error::Incompatible(_)) => {
                    out.line(e.to_string());
                    out.verdict = false;
                }
                Err(e) => return Err(e.into()),
            }
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::ApproxVerify { file, approx: name } => {
            let m = load(&file)?;
            let s = &m.approx(&name)?.structure;
            let mut out = Out::new("approx-verify");
            out.report(&approx::verify_structure(s));
            match approx::check_triangle(s, seed) {
                Ok(r) => out.report(&r),
                Err(Error::NoChainsDeclared) => out.line("triangle inequality: not checked (no chains)"),
                Err(e) => return Err(e.into()),
            }
            out.line(format!("approximation space: {} specifications", approx::approximation_space(s).len()));
            out.field("attainable", s.is_attainable());
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::ApproxRobust { t, approx: name, spec, eps } => {
            let m = load(&t.file)?;
            let th = Theory::load(&m, &t.monoid)?;
            let s = &m.approx(&name)?.structure;
            let v = m.spec(th.space(), &spec)?;
            let mut out = Out::new("approx-robust");
            match approx::stability_violation(&th.theory, s)? {
                None => out.line("stable: yes"),
                Some(w) => out.line(format!("stable: no ({w})")),
            }
            let r = approx::is_robust(&th.theory, s, &v, &eps)?;
            out.line(format!("{v}^{eps} = {}", s.approximate(&v, &eps)?));
            out.line(format!("robust: {}", yes(r)));
            out.field("robust", r);
            out.verdict = r;
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::ApproxReduce { file, approx: name, lumping } => {
            let m = load(&file)?;
            let s = &m.approx(&name)?.structure;
            let ins = GaloisInsertion::from_lumping(&m.lumping(&lumping)?.lumping)?;
            let red = approx::reduce_structure(s, &ins)?;
            let mut out = Out::new("approx-reduce");
            out.line(format!("reduced space: {}", ins.small()));
            for (k, f) in red.structure.family().iter().enumerate() {
                out.line(format!("  ·^{}: [{f}]", red.structure.index().label(k)));
            }
            out.report(&red.report);
            out.line(format!("preserves structure: {}", yes(approx::preserves_structure(s, &ins)?)));
            out.field("collapsed", red.collapsed.len());
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Hull { file, points, point } => {
            let m = load(&file)?;
            let v = &m.points(&points)?.points;
            let x = parse_point(&point)?;
            let w = convex::hull_weights(v.points(), &x)?;
            let mut out = Out::new("hull");
            match &w {
                Some(d) => {
                    out.line(format!("{x} is in the hull"));
                    for (p, q) in v.points().iter().zip(d.weights()) {
                        if *q != rtk_core::convex::q(0, 1) {
                            out.line(format!("  {q} × {p}"));
                        }
                    }
                }
                None => out.line(format!("{x} is not in the hull")),
            }
            out.verdict = w.is_some();
            if oracle {
                oracle_line(&mut out, oracle::oracle_hull_contains(v, &x).map(|o| o == w.is_some()));
            }
            Ok(out.finish())
        }
        Cmd::Extreme { file, points } => {
            let m = load(&file)?;
            let e = convex::extreme_points(&m.points(&points)?.points);
            let mut out = Out::new("extreme");
            out.line(format!("extreme points: {e}"));
            out.field("count", e.len());
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::ProbEquiv { file, points, with } => {
            let m = load(&file)?;
            let eq = convex::prob_equivalent(&m.points(&points)?.points, &m.points(&with)?.points)?;
            let mut out = Out::new("prob-equiv");
            out.line(format!("{points} ~ {with}: {}", yes(eq)));
            out.verdict = eq;
            no_oracle(&mut out, oracle);
            Ok(out.finish())
        }
        Cmd::Laws { suite } => {
            let mut out = Out::new("laws");
            let runs: Vec<(&str, Report)> = match suite {
                Suite::All => laws::full_suite(seed),
                Suite::Preorder => vec![("preorder", laws::preorder(seed, 500))],
                Suite::Lumping => vec![("lumping", laws::lumping_insertion(seed, 200))],
                Suite::Decomposition => vec![("decomposition", laws::decomposition(seed, 100))],
                Suite::FreeComposition => vec![("free composition", laws::free_composition(seed, 200))],
                Suite::Robustness => vec![("robustness", laws::robustness(seed, 200))],
                Suite::Convexity => vec![("convexity", laws::convexity(seed, 1000, 200))],
            };
            for (name, r) in &runs {
                out.line(format!("== {name}"));
                out.report(r);
                out.field(name, if r.ok() { "pass" } else { "fail" });
            }
            out.field("seed", seed);
            Ok(out.finish())
        }
    }
}

fn error_outcome(e: &Error) -> Outcome {
    let code = match e {
        Error::CapExceeded(_) => EXIT_CAP,
        _ => EXIT_INPUT,
    };
    let kind = match e {
        Error::CapExceeded(_) => "cap",
        Error::Parse { .. } => "parse",
        Error::DuplicateName(_) => "duplicate-name",
        Error::UnknownReference(_) => "unknown-reference",
        _ => "input",
    };
    Outcome {
        code,
        stdout: format!("---\nstatus: error\nkind: {kind}\n"),
        stderr: format!("error: {e}\n"),
    }
}

/// Runs one command line (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli) {
        Ok(o) => o,
        Err(Failure::Core(e)) => error_outcome(&e),
        Err(Failure::Io(m)) => Outcome {
            code: EXIT_INPUT,
            stdout: "---\nstatus: error\nkind: io\n".into(),
            stderr: format!("error: {m}\n"),
        },
    }
}
