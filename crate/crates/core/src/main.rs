use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use convg::compactness::is_compact;
use convg::constructions::{coproduct, product, quotient, subspace, SpaceMap};
use convg::filters::{Mapping, PointSet};
use convg::function_space::continuous_convergence;
use convg::io::{
    export_dot, parse_space, serialize_document, serialize_witness, FormatError, SpaceDocument,
};
use convg::search::{search_counterexample, Property, SearchSpec};
use convg::spaces::{
    adherence, check_axiom, inherence, limit_modification, topological_modification, Axiom,
    AxiomCheck, Preconvergence,
};
use convg::Error;

#[derive(Parser)]
#[command(name = "convg", version, about = "Finite preconvergence spaces")]
struct Cli {
    /// Print nothing; report through the exit code only.
    #[arg(long, global = true)]
    quiet: bool,
    /// Machine-readable reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check axioms; exit 0 iff all requested hold.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        axiom: String,
    },
    /// Write the topological or limit modification.
    Modify {
        file: PathBuf,
        #[arg(long)]
        kind: ModKind,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a new space from existing ones.
    Op {
        #[command(subcommand)]
        op: Op,
    },
    /// Check continuity of a map given as `x:y` pairs.
    Continuity {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        map: String,
    },
    /// Write C(X,Y) with continuous convergence.
    Funcspace {
        source: PathBuf,
        target: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exit 0 iff the space is compact.
    Compact { file: PathBuf },
    /// Print the adherence of a set.
    Adh {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Print the inherence of a set.
    Inh {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Look for a counterexample; exit 1 when one is found.
    Search {
        #[arg(long)]
        property: String,
        #[arg(long)]
        max_points: usize,
        #[arg(long, default_value_t = 1)]
        min_points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Export the induced topology as a DOT graph.
    Export {
        file: PathBuf,
        #[arg(long, required = true)]
        dot: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Op {
    Product {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Coproduct {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Subspace {
        file: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Quotient {
        file: PathBuf,
        /// Classes separated by `|`, labels by spaces.
        #[arg(long)]
        classes: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModKind {
    Topological,
    Limit,
}

enum Failure {
    Input(String),
    Falsified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsification(msg) => Failure::Falsified(msg),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Space(inner) => inner.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// A closed pipe on stdout is not an error worth a panic.
fn stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

struct Output {
    quiet: bool,
    json: bool,
}

impl Output {
    fn text(&self, line: impl AsRef<str>) {
        if !self.quiet && !self.json {
            stdout(&format!("{}\n", line.as_ref()));
        }
    }

    fn report(&self, value: serde_json::Value) {
        if !self.quiet && self.json {
            stdout(&format!("{}\n", serde_json::to_string_pretty(&value).expect("json")));
        }
    }

    fn warn(&self, line: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("warning: {}", line.as_ref());
        }
    }

    fn write(&self, out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
        match out {
            Some(path) => fs::write(path, text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
            None => {
                if !self.quiet {
                    stdout(text);
                }
                Ok(())
            }
        }
    }
}

fn load(path: &Path, out: &Output) -> Result<SpaceDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed = parse_space(&text).map_err(|e| match Failure::from(e) {
        Failure::Input(msg) => Failure::Input(format!("{}: {msg}", path.display())),
        f => f,
    })?;
    for w in &parsed.warnings {
        out.warn(format!("{}: {w}", path.display()));
    }
    Ok(parsed.document)
}

fn witness_json(l: &Preconvergence, check: &AxiomCheck) -> serde_json::Value {
    match &check.witness {
        None => serde_json::Value::Null,
        Some(w) => json!({
            "sets": w.sets.iter().map(|&s| l.carrier().set_key(s)).collect::<Vec<_>>(),
            "point": w.point.map(|p| l.carrier().label(p).to_string()),
        }),
    }
}

fn describe(l: &Preconvergence, check: &AxiomCheck) -> String {
    match &check.witness {
        None => format!("{}: yes", check.axiom),
        Some(w) => {
            let sets: Vec<String> = w.sets.iter().map(|&s| l.carrier().format_set(s)).collect();
            let point = w.point.map(|p| l.carrier().label(p).to_string()).unwrap_or_default();
            format!("{}: no (sets {}, point {point})", check.axiom, sets.join(" "))
        }
    }
}

/// Splits on `sep` outside parentheses.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = vec![];
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn parse_map(text: &str, x: &Preconvergence, y: &Preconvergence) -> Result<Mapping, Failure> {
    let mut graph: Vec<Option<usize>> = vec![None; x.size()];
    for pair in split_top(text, ',').into_iter().filter(|p| !p.trim().is_empty()) {
        let halves = split_top(pair, ':');
        let [from, to] = halves.as_slice() else {
            return Err(Failure::Input(format!("bad map entry `{pair}`")));
        };
        let (from, to) = (from.trim(), to.trim());
        let i = x
            .carrier()
            .index_of(from)
            .ok_or_else(|| Failure::Input(format!("unknown source label `{from}`")))?;
        let j = y
            .carrier()
            .index_of(to)
            .ok_or_else(|| Failure::Input(format!("unknown target label `{to}`")))?;
        if graph[i].replace(j).is_some() {
            return Err(Failure::Input(format!("`{from}` mapped twice")));
        }
    }
    let graph = graph
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Failure::Input(format!("`{}` is not mapped", x.carrier().label(i)))))
        .collect::<Result<Vec<usize>, Failure>>()?;
    Ok(Mapping::new(graph, y.size())?)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let out = Output {
        quiet: cli.quiet,
        json: cli.json,
    };
    match cli.command {
        Command::Check { file, axiom } => {
            let doc = load(&file, &out)?;
            let axioms: Vec<Axiom> = if axiom == "all" {
                Axiom::ALL.to_vec()
            } else {
                vec![axiom.parse()?]
            };
            let checks: Vec<AxiomCheck> = axioms.iter().map(|&a| check_axiom(&doc.space, a)).collect();
            let report = classify_note(&doc.space);
            for c in &checks {
                out.text(describe(&doc.space, c));
            }
            if let Some(note) = report {
                out.text(format!("note: {note}"));
            }
            let mut map = serde_json::Map::new();
            for c in &checks {
                map.insert(
                    c.axiom.name().into(),
                    json!({"holds": c.holds, "witness": witness_json(&doc.space, c)}),
                );
            }
            out.report(json!({"name": doc.name, "axioms": map, "note": report}));
            Ok(checks.iter().all(|c| c.holds))
        }
        Command::Modify { file, kind, out: path } => {
            let doc = load(&file, &out)?;
            let (space, suffix) = match kind {
                ModKind::Topological => (topological_modification(&doc.space)?, "top"),
                ModKind::Limit => (limit_modification(&doc.space)?, "limit"),
            };
            let name = format!("{}-{suffix}", doc.name);
            out.write(&path, &serialize_document(&SpaceDocument::new(name, space)))?;
            Ok(true)
        }
        Command::Op { op } => {
            let (doc, path) = match op {
                Op::Product { first, second, out: path } => {
                    let (a, b) = (load(&first, &out)?, load(&second, &out)?);
                    let c = product(&[a.space, b.space])?;
                    (SpaceDocument::new(format!("{}x{}", a.name, b.name), c.space), path)
                }
                Op::Coproduct { first, second, out: path } => {
                    let (a, b) = (load(&first, &out)?, load(&second, &out)?);
                    let c = coproduct(&[a.space, b.space])?;
                    (SpaceDocument::new(format!("{}+{}", a.name, b.name), c.space), path)
                }
                Op::Subspace { file, set, out: path } => {
                    let a = load(&file, &out)?;
                    let s = a.space.carrier().parse_set(&set)?;
                    let c = subspace(&a.space, s)?;
                    (SpaceDocument::new(format!("{}|{}", a.name, set.trim()), c.space), path)
                }
                Op::Quotient { file, classes, out: path } => {
                    let a = load(&file, &out)?;
                    let classes = classes
                        .split('|')
                        .map(|c| a.space.carrier().parse_set(c))
                        .collect::<Result<Vec<PointSet>, Error>>()?;
                    let c = quotient(&a.space, &classes)?;
                    (SpaceDocument::new(format!("{}/~", a.name), c.space), path)
                }
            };
            out.write(&path, &serialize_document(&doc))?;
            Ok(true)
        }
        Command::Continuity { source, target, map } => {
            let (x, y) = (load(&source, &out)?, load(&target, &out)?);
            let m = parse_map(&map, &x.space, &y.space)?;
            let f = SpaceMap::new(x.space.clone(), y.space.clone(), m)?;
            let w = f.discontinuity();
            match w {
                None => out.text("continuous"),
                Some(w) => out.text(format!(
                    "not continuous: {} converges to {} but its image does not converge to {}",
                    x.space.carrier().format_set(w.base),
                    x.space.carrier().label(w.point),
                    y.space.carrier().label(f.mapping().apply(w.point))
                )),
            }
            out.report(json!({
                "continuous": w.is_none(),
                "witness": w.map(|w| json!({
                    "set": x.space.carrier().set_key(w.base),
                    "point": x.space.carrier().label(w.point),
                })),
            }));
            Ok(w.is_none())
        }
        Command::Funcspace { source, target, out: path } => {
            let (x, y) = (load(&source, &out)?, load(&target, &out)?);
            let fs = continuous_convergence(&x.space, &y.space)?;
            let doc = SpaceDocument::for_function_space(format!("C({},{})", x.name, y.name), &fs);
            out.write(&path, &serialize_document(&doc))?;
            Ok(true)
        }
        Command::Compact { file } => {
            let doc = load(&file, &out)?;
            let compact = is_compact(&doc.space);
            out.text(if compact { "compact" } else { "not compact" });
            out.report(json!({"compact": compact}));
            Ok(compact)
        }
        Command::Adh { file, set } => set_operator(&file, &set, adherence, &out),
        Command::Inh { file, set } => set_operator(&file, &set, inherence, &out),
        Command::Search { property, max_points, min_points, seed, budget } => {
            let property: Property = property.parse()?;
            let spec = SearchSpec {
                min_points,
                ..SearchSpec::new(property, max_points, seed, budget)
            };
            let outcome = search_counterexample(&spec)?;
            match &outcome.witness {
                Some(w) => {
                    if !out.quiet {
                        stdout(&serialize_witness(w));
                    }
                }
                None => {
                    out.text(format!("none found ({} domains examined)", outcome.examined));
                    out.report(json!({"witness": null, "examined": outcome.examined}));
                }
            }
            Ok(outcome.witness.is_none())
        }
        Command::Export { file, out: path, .. } => {
            let doc = load(&file, &out)?;
            out.write(&path, &export_dot(&doc.space, &doc.name))?;
            Ok(true)
        }
    }
}

fn classify_note(l: &Preconvergence) -> Option<&'static str> {
    convg::spaces::classify(l).dependency_note()
}

fn set_operator(
    file: &Path,
    set: &str,
    operator: fn(&Preconvergence, PointSet) -> PointSet,
    out: &Output,
) -> Result<bool, Failure> {
    let doc = load(file, out)?;
    let carrier = doc.space.carrier();
    let result = operator(&doc.space, carrier.parse_set(set)?);
    out.text(carrier.format_set(result));
    out.report(json!({"set": carrier.set_key(result)}));
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            if !quiet {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Falsified(msg)) => {
            if !quiet {
                eprintln!("internal falsification: {msg}");
            }
            ExitCode::from(3)
        }
    }
}
