use std::io::Read;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use nearspace::closure::{self, Space};
use nearspace::ege::{self, GenDecomposition};
use nearspace::format::{format_matrix, load_matrix};
use nearspace::linmaps::{self, MapClass, MapKind, MapRep, Mode};
use nearspace::nearfield::{DicksonPair, MAX_ORDER};
use nearspace::seed;
use nearspace::subgroups;
use nearspace::{Elem, Nearfield, NfMatrix, NfVector, Style, DEFAULT_BUDGET};
use serde_json::{json, Value};

const BUDGET_VAR: &str = "NEARSPACE_BUDGET";

#[derive(Parser)]
#[command(name = "nearspace", version, about = "Computations in Dickson nearfields and R^m")]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Element style in text output.
    #[arg(long, global = true, value_enum, default_value_t = StyleArg::Poly)]
    style: StyleArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Poly,
    Code,
}

impl From<StyleArg> for Style {
    fn from(s: StyleArg) -> Style {
        match s {
            StyleArg::Poly => Style::Poly,
            StyleArg::Code => Style::Code,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Mul,
    Add,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    All,
    Linear,
    Normal,
}

impl From<KindArg> for MapKind {
    fn from(k: KindArg) -> MapKind {
        match k {
            KindArg::All => MapKind::All,
            KindArg::Linear => MapKind::Linear,
            KindArg::Normal => MapKind::Normal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check whether (q, n) is a Dickson pair.
    Validate { q: u64, n: u64 },
    /// Print the full multiplication or addition table; rows are left operands.
    Table {
        q: u64,
        n: u64,
        #[arg(long, value_enum, default_value_t = Op::Mul)]
        op: Op,
    },
    /// Print the first triple violating right distributivity.
    Witness { q: u64, n: u64 },
    /// Run Expanded Gaussian Elimination on a matrix file.
    Ege {
        file: String,
        /// Append the step trace after a `---` line.
        #[arg(long)]
        trace: bool,
    },
    /// Replay a trace against a matrix file and print the result.
    Replay {
        file: String,
        /// Trace file; text before a `---` line is ignored.
        trace: String,
    },
    /// Size of the R-subgroup generated by the rows, by brute force.
    Gen {
        file: String,
        /// List every element.
        #[arg(long)]
        list: bool,
    },
    /// Linearity index of the rows and the sizes of the strata LC_p.
    LcIndex { file: String },
    /// Whether some row lies in LC_γ of the other rows.
    GammaDependent { file: String, gamma: usize },
    /// |LC_1| of the rows against |R|^k.
    Lc1 { file: String },
    /// Classify the square map whose matrix is in the file (columns are basis images).
    ClassifyMap {
        file: String,
        /// Decide linearity and normality by brute force instead of the matrix shape.
        #[arg(long)]
        semantic: bool,
    },
    /// Number of maps R^dim → R^dim of a kind.
    CountMaps {
        q: u64,
        n: u64,
        dim: usize,
        #[arg(value_enum)]
        kind: KindArg,
        /// Count by visiting every map as well.
        #[arg(long)]
        enumerate: bool,
    },
    /// Number of R-subgroups of R-dimension k in R^m.
    CountSubgroups {
        q: u64,
        n: u64,
        m: usize,
        k: usize,
        /// Print the canonical matrices.
        #[arg(long)]
        list: bool,
        /// Also report classes under coordinate permutations.
        #[arg(long)]
        orbits: bool,
    },
    /// Build the seed matrix of R^m.
    Seed { q: u64, n: u64, m: usize },
    /// Check that the rows of a matrix file generate R^m; `-` reads stdin.
    VerifySeed { file: String },
    /// Scan k-subsets of R^m for generating sets with a large linearity index.
    SearchIndex { q: u64, n: u64, m: usize, k: usize, bound: usize },
}

/// Output of one command: text for humans plus the JSON fields.
struct Report {
    nearfield: (u64, u64),
    input: Value,
    result: Value,
    text: String,
    trace: Option<Value>,
}

impl Report {
    fn new(nf: &Nearfield, input: Value, result: Value, text: String) -> Self {
        Report { nearfield: (nf.q(), nf.n()), input, result, text, trace: None }
    }

    fn to_json(&self) -> Value {
        let mut doc = serde_json::Map::new();
        let (q, n) = self.nearfield;
        doc.insert("nearfield".into(), json!({ "q": q, "n": n }));
        doc.insert("input".into(), self.input.clone());
        doc.insert("result".into(), self.result.clone());
        if let Some(trace) = &self.trace {
            doc.insert("trace".into(), trace.clone());
        }
        Value::Object(doc)
    }
}

struct Ctx {
    style: Style,
    budget: u64,
}

fn budget_from_env() -> anyhow::Result<u64> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{BUDGET_VAR} must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load(path: &str) -> anyhow::Result<(Nearfield, NfMatrix)> {
    Ok(load_matrix(&read_input(path)?, MAX_ORDER)?)
}

fn build(q: u64, n: u64) -> anyhow::Result<Nearfield> {
    Ok(Nearfield::build(q, n, MAX_ORDER)?)
}

fn elem_json(nf: &Nearfield, a: Elem, style: Style) -> Value {
    Value::String(nf.format_elem(a, style))
}

fn vector_json(nf: &Nearfield, v: &NfVector, style: Style) -> Value {
    Value::Array(v.entries().iter().map(|&a| elem_json(nf, a, style)).collect())
}

fn matrix_json(nf: &Nearfield, m: &NfMatrix, style: Style) -> Value {
    Value::Array(m.rows().iter().map(|r| vector_json(nf, r, style)).collect())
}

fn file_input(nf: &Nearfield, path: &str, m: &NfMatrix, style: Style) -> Value {
    json!({ "file": path, "rows": matrix_json(nf, m, style) })
}

fn run(cli: &Cli, ctx: &Ctx) -> anyhow::Result<Report> {
    let style = ctx.style;
    match &cli.command {
        Command::Validate { q, n } => {
            let input = json!({ "q": q, "n": n });
            match DicksonPair::validate(*q, *n)? {
                Ok(pair) => {
                    let order = pair.order();
                    let text = match order {
                        Some(o) => format!("DN({q},{n}) is a Dickson pair of order {o}"),
                        None => format!("DN({q},{n}) is a Dickson pair (order overflows u64)"),
                    };
                    let is_field = *n == 1;
                    Ok(Report {
                        nearfield: (*q, *n),
                        input,
                        result: json!({ "valid": true, "order": order, "field": is_field }),
                        text,
                        trace: None,
                    })
                }
                Err(v) => bail!("invalid Dickson pair ({q},{n}): {v}"),
            }
        }
        Command::Table { q, n, op } => {
            let nf = build(*q, *n)?;
            let (table, symbol, name) = match op {
                Op::Mul => (nf.mul_table()?, "∘", "mul"),
                Op::Add => (nf.add_table()?, "+", "add"),
            };
            let labels: Vec<String> = nf.elements().map(|a| nf.format_elem(a, style)).collect();
            let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1).max(1);
            let pad = |s: &str| format!("{s:>width$}");
            let mut text = format!("{} |", pad(symbol));
            for l in &labels {
                text.push(' ');
                text.push_str(&pad(l));
            }
            text.push('\n');
            text.push_str(&"-".repeat(text.chars().count() - 1));
            for (i, row) in table.iter().enumerate() {
                text.push('\n');
                text.push_str(&pad(&labels[i]));
                text.push_str(" |");
                for &cell in row {
                    text.push(' ');
                    text.push_str(&pad(&nf.format_elem(cell, style)));
                }
            }
            let rows: Vec<Value> = table
                .iter()
                .map(|row| Value::Array(row.iter().map(|&c| elem_json(&nf, c, style)).collect()))
                .collect();
            let result = json!({ "labels": labels, "rows": rows });
            Ok(Report::new(&nf, json!({ "q": q, "n": n, "op": name }), result, text))
        }
        Command::Witness { q, n } => {
            let nf = build(*q, *n)?;
            let w = nf.find_witness().ok_or(nearspace::Error::NoWitness)?;
            let lhs = nf.mul(nf.add(w.alpha, w.beta), w.lambda);
            let rhs = nf.add(nf.mul(w.alpha, w.lambda), nf.mul(w.beta, w.lambda));
            let e = |a| nf.format_elem(a, style);
            let text = format!(
                "alpha={} beta={} lambda={}\n(alpha+beta)∘lambda = {}\nalpha∘lambda + beta∘lambda = {}",
                e(w.alpha),
                e(w.beta),
                e(w.lambda),
                e(lhs),
                e(rhs)
            );
            let result = json!({
                "alpha": e(w.alpha), "beta": e(w.beta), "lambda": e(w.lambda),
                "lhs": e(lhs), "rhs": e(rhs),
            });
            Ok(Report::new(&nf, json!({ "q": q, "n": n }), result, text))
        }
        Command::Ege { file, trace } => {
            let (nf, m) = load(file)?;
            let out = ege::ege(&nf, &m);
            let mut text = format_matrix(&nf, &out.basis, style, &ege_comments(&out));
            let trace_text = ege::format_trace(&nf, &out.trace);
            if *trace {
                text.push_str("---\n");
                text.push_str(&trace_text);
            }
            let text = text.trim_end().to_string();
            let result = json!({
                "dimension": out.dimension,
                "canonical": out.canonical,
                "tricks": out.tricks.len(),
                "basis": matrix_json(&nf, &out.basis, style),
            });
            let mut report = Report::new(&nf, file_input(&nf, file, &m, style), result, text);
            if *trace {
                report.trace = Some(Value::Array(
                    trace_text.lines().map(|l| Value::String(l.to_string())).collect(),
                ));
            }
            Ok(report)
        }
        Command::Replay { file, trace } => {
            let (nf, m) = load(file)?;
            let raw = read_input(trace)?;
            let steps_text = match raw.split_once("\n---\n") {
                Some((_, after)) => after.to_string(),
                None if raw.starts_with("---\n") => raw[4..].to_string(),
                None => raw,
            };
            let steps = ege::parse_trace(&nf, &steps_text)?;
            let result = ege::replay(&nf, &m, &steps)?;
            let text = format_matrix(&nf, &result, style, &[format!("replayed {} steps", steps.len())]);
            let out = json!({ "steps": steps.len(), "rows": matrix_json(&nf, &result, style) });
            Ok(Report::new(&nf, file_input(&nf, file, &m, style), out, text.trim_end().to_string()))
        }
        Command::Gen { file, list } => {
            let (nf, m) = load(file)?;
            let space = Space::new(&nf, m.ncols(), ctx.budget)?;
            let set = closure::gen_closure(&space, m.rows())?;
            let full = set.len() == space.size();
            let mut text = format!("|gen| = {} of {}{}", set.len(), space.size(), if full { " (all of R^m)" } else { "" });
            let mut result = json!({ "size": set.len(), "space": space.size(), "full": full });
            if *list {
                let vs = set.vectors();
                for v in &vs {
                    text.push('\n');
                    text.push_str(&nf.format_vector(v, style));
                }
                result["elements"] = Value::Array(vs.iter().map(|v| vector_json(&nf, v, style)).collect());
            }
            Ok(Report::new(&nf, file_input(&nf, file, &m, style), result, text))
        }
        Command::LcIndex { file } => {
            let (nf, m) = load(file)?;
            let space = Space::new(&nf, m.ncols(), ctx.budget)?;
            let strata = closure::lc_strata(&space, m.rows())?;
            let sizes: Vec<usize> = strata.iter().map(|s| s.len()).collect();
            let index = closure::lc_index(&space, m.rows())?;
            let text = format!(
                "index {index}\n{}",
                sizes.iter().enumerate().map(|(p, s)| format!("|LC_{p}| = {s}")).collect::<Vec<_>>().join("\n")
            );
            let result = json!({ "index": index, "strata": sizes });
            Ok(Report::new(&nf, file_input(&nf, file, &m, style), result, text))
        }
        Command::GammaDependent { file, gamma } => {
            let (nf, m) = load(file)?;
            let space = Space::new(&nf, m.ncols(), ctx.budget)?;
            let found = closure::is_gamma_dependent(&space, m.rows(), *gamma)?;
            let text = match found {
                Some(i) => format!("dependent: row {i} lies in LC_{gamma} of the others"),
                None => format!("independent for γ = {gamma}"),
            };
            let result = json!({ "dependent": found.is_some(), "index": found });
            let mut input = file_input(&nf, file, &m, style);
            input["gamma"] = json!(gamma);
            Ok(Report::new(&nf, input, result, text))
        }
        Command::Lc1 { file } => {
            let (nf, m) = load(file)?;
            let space = Space::new(&nf, m.ncols(), ctx.budget)?;
            let r = closure::check_lc1_cardinality(&space, m.rows())?;
            let text = format!(
                "|LC_1| = {}, |R|^k = {}, 2-independent: {}, cardinality holds: {}",
                r.size, r.bound, r.two_independent, r.cardinality_holds
            );
            let result = json!({
                "size": r.size, "bound": r.bound.to_string(),
                "two_independent": r.two_independent, "cardinality_holds": r.cardinality_holds,
            });
            Ok(Report::new(&nf, file_input(&nf, file, &m, style), result, text))
        }
        Command::ClassifyMap { file, semantic } => {
            let (nf, m) = load(file)?;
            let t = MapRep::from_matrix(m.clone())?;
            let mode = if *semantic { Mode::Semantic } else { Mode::Criterion };
            let linear = linmaps::is_linear(&nf, &t, mode, ctx.budget)?;
            let normal = if linear { Some(linmaps::is_normal(&nf, &t, mode, ctx.budget)?) } else { None };
            let class = linmaps::classify(&nf, &t);
            let bijective = linmaps::is_bijective(&nf, &t, ctx.budget)?;
            let mut text = format!(
                "class: {}\nlinear: {linear}\nnormal: {}\nbijective: {bijective}",
                class.name(),
                normal.map_or("n/a".to_string(), |b| b.to_string())
            );
            let mut result = json!({
                "class": class.name(), "linear": linear, "normal": normal, "bijective": bijective,
            });
            if class == MapClass::HomOnly {
                if let Some((v, r)) = linmaps::linearity_violation(&nf, &t, ctx.budget)? {
                    let lhs = linmaps::apply(&nf, &t, &nf.vec_scale(&v, r))?;
                    let rhs = nf.vec_scale(&linmaps::apply(&nf, &t, &v)?, r);
                    text.push_str(&format!(
                        "\nviolation: v = {}, r = {}: T(v∘r) = {} but T(v)∘r = {}",
                        nf.format_vector(&v, style),
                        nf.format_elem(r, style),
                        nf.format_vector(&lhs, style),
                        nf.format_vector(&rhs, style)
                    ));
                    result["violation"] = json!({
                        "v": vector_json(&nf, &v, style), "r": elem_json(&nf, r, style),
                        "t_of_v_r": vector_json(&nf, &lhs, style), "t_of_v_times_r": vector_json(&nf, &rhs, style),
                    });
                }
            }
            let mut input = file_input(&nf, file, &m, style);
            input["mode"] = json!(if *semantic { "semantic" } else { "criterion" });
            Ok(Report::new(&nf, input, result, text))
        }
        Command::CountMaps { q, n, dim, kind, enumerate } => {
            let nf = build(*q, *n)?;
            let kind = MapKind::from(*kind);
            let closed = linmaps::count_maps(&nf, *dim, kind);
            let mut text = closed.to_string();
            let mut result = json!({ "count": closed.to_string(), "method": "closed_form" });
            if *enumerate {
                let counts = linmaps::enumerate_counts(&nf, *dim, ctx.budget)?;
                let got = counts.get(kind);
                text.push_str(&format!("\nenumerated: {got}"));
                result["enumerated"] = json!(got);
                result["agrees"] = json!(closed == got.into());
            }
            let name = match kind {
                MapKind::All => "all",
                MapKind::Linear => "linear",
                MapKind::Normal => "normal",
            };
            Ok(Report::new(&nf, json!({ "dim": dim, "kind": name }), result, text))
        }
        Command::CountSubgroups { q, n, m, k, list, orbits } => {
            let nf = build(*q, *n)?;
            let count = subgroups::count_subgroups(*m, *k, nf.order() as u64)?;
            let mut text = count.to_string();
            let mut result = json!({ "count": count.to_string() });
            if *list {
                let mats = subgroups::enumerate_canonical(&nf, *m, *k, ctx.budget)?;
                for mat in &mats {
                    text.push('\n');
                    let rows: Vec<String> = mat.rows().iter().map(|r| nf.format_vector(r, style)).collect();
                    text.push_str(&rows.join(" "));
                }
                result["matrices"] = Value::Array(mats.iter().map(|m| matrix_json(&nf, m, style)).collect());
            }
            if *orbits {
                let o = subgroups::orbit_count(&nf, *m, *k, ctx.budget)?;
                text.push_str(&format!("\nclasses under coordinate permutations: {o}"));
                result["orbits"] = json!(o);
            }
            Ok(Report::new(&nf, json!({ "m": m, "k": k }), result, text))
        }
        Command::Seed { q, n, m } => {
            let nf = build(*q, *n)?;
            let s = seed::build_seed(&nf, *m)?;
            let text = format_matrix(&nf, &s.matrix, style, &s.header_comments(&nf));
            let result = json!({
                "k": s.k,
                "s_order": s.s_order.iter().map(|&e| elem_json(&nf, e, style)).collect::<Vec<_>>(),
                "rows": matrix_json(&nf, &s.matrix, style),
            });
            Ok(Report::new(&nf, json!({ "m": m }), result, text.trim_end().to_string()))
        }
        Command::VerifySeed { file } => {
            let (nf, m) = load(file)?;
            let report = seed::seed_report(&nf, &m, ctx.budget.min(DEFAULT_BUDGET))?;
            if !report.generates {
                bail!("not a seed set: EGE dimension {} < {} columns", report.dimension, report.columns);
            }
            if report.closure_agrees == Some(false) {
                bail!("closure check disagrees with EGE");
            }
            let text = format!(
                "ok: {} rows generate R^{} (EGE dimension {}){}",
                report.rows,
                report.columns,
                report.dimension,
                match report.closure_agrees {
                    Some(_) => format!(", closure confirmed, index {}", report.index.unwrap_or(0)),
                    None => String::new(),
                }
            );
            let result = json!({
                "seed": true, "rows": report.rows, "columns": report.columns,
                "dimension": report.dimension, "closure_checked": report.closure_agrees.is_some(),
                "index": report.index,
            });
            Ok(Report::new(&nf, file_input(&nf, file, &m, style), result, text))
        }
        Command::SearchIndex { q, n, m, k, bound } => {
            let nf = build(*q, *n)?;
            let space = Space::new(&nf, *m, ctx.budget)?;
            let r = closure::search_index(&space, *k, *bound)?;
            let mut text = format!("examined {}, generating {}", r.examined, r.generating);
            for (index, count) in &r.histogram {
                text.push_str(&format!("\nindex {index}: {count}"));
            }
            if let (Some(best), Some(ex)) = (r.max_index, &r.example) {
                let vs: Vec<String> = ex.iter().map(|v| nf.format_vector(v, style)).collect();
                text.push_str(&format!("\nlargest index {best}: {}", vs.join(" ")));
            }
            let histogram: serde_json::Map<String, Value> =
                r.histogram.iter().map(|(i, c)| (i.to_string(), json!(c))).collect();
            let result = json!({
                "examined": r.examined, "generating": r.generating, "histogram": histogram,
                "max_index": r.max_index,
                "example": r.example.as_ref().map(|ex| ex.iter().map(|v| vector_json(&nf, v, style)).collect::<Vec<_>>()),
            });
            Ok(Report::new(&nf, json!({ "m": m, "k": k, "bound": bound }), result, text))
        }
    }
}

fn ege_comments(out: &GenDecomposition) -> Vec<String> {
    let mut c = vec![format!("dimension {}", out.dimension)];
    if !out.canonical {
        c.push("field input: plain reduced row-echelon form".into());
    }
    c
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx { style: cli.style.into(), budget };
    match run(&cli, &ctx) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
            } else {
                println!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
