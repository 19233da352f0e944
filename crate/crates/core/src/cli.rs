//! The `a1` command-line front end: module files, family construction, the
//! operations, chart rendering and the verification suites.
//!
//! Exit codes: 0 success (or all cases verified), 1 verification failure,
//! 2 usage error, 3 invalid input.
//!
//! A module argument is either a path to a module file (see
//! [`crate::a1core::text`]) or a family reference `@Name:p1:p2…`, e.g.
//! `@A:2:1`, `@trunc_projective:-1:4`, `@Z`.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::a1core::margolis::{margolis, MargolisProfile};
use crate::a1core::module::A1Module;
use crate::a1core::reduce::reduce;
use crate::a1core::text::{build_module, write_module};
use crate::classify::{classify, predict_tensor_split, verify_tensor_split, Tag};
use crate::ext::{
    ake_relations, ext_chart, q1_support, stext_chart, toda_reindex_mismatches, vanishing_violations, ChartWindow,
    ExtChart,
};
use crate::families::{self as fam, CaseCheck, FamilyError, FamilyKind, FamilySpec};
use crate::stable::{
    dual, hom, is_stably_iso, joker, omega, picard_element, stable_hom, tensor, unit_module, PicardIndex,
    SearchBudget, Verdict, DEFAULT_SEED,
};

/// Failures of a command, with their exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad command line (exit 2).
    #[error("{0}")]
    Usage(String),
    /// Input that does not parse or validate, or an operation refused on it (exit 3).
    #[error("{0}")]
    Input(String),
    /// A verification suite had failing cases (exit 1).
    #[error("{0} case(s) failed")]
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(name = "a1", version, about = "Finite modules over A(1): Margolis cohomology, stable category, Ext charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChartFormat {
    Text,
    Tsv,
    Svg,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct SearchArgs {
    /// Seed of the random phase of stable-isomorphism searches.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest search-space dimension enumerated exhaustively.
    #[arg(long, default_value_t = 20)]
    cap: u32,
}

impl SearchArgs {
    fn budget(self) -> SearchBudget {
        SearchBudget { cap: self.cap, seed: self.seed, ..SearchBudget::default() }
    }
}

#[derive(clap::Args, Debug, Clone)]
struct ChartArgs {
    /// Module file or `@Family:params`.
    input: String,
    /// Largest |s| (for `ext`, s runs over [0, smax]).
    #[arg(long, default_value_t = 6)]
    smax: i32,
    /// Range `a:b` of the Adams coordinate t − s.
    #[arg(long, allow_hyphen_values = true)]
    trange: Option<String>,
    #[arg(long, value_enum, default_value_t = ChartFormat::Tsv)]
    format: ChartFormat,
    /// Output file (default: standard output).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a module file; write it back in normal form.
    Build {
        input: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Write the module file of a family member.
    Family {
        name: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<String>,
        /// Truncation window `lo:hi` for the infinite families.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Margolis cohomology H*(M, Q0) and H*(M, Q1).
    Margolis { input: String },
    /// Split off free summands; write the reduced part.
    Reduce {
        input: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Module operations.
    Op {
        #[command(subcommand)]
        op: OpCommand,
    },
    /// Decide whether two modules are stably isomorphic.
    StableIso {
        a: String,
        b: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Classify an E(1)-indecomposable module.
    Classify {
        input: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Chart of Ext^{s,t}(F, J^e ⊗ M), s ≥ 0, from a minimal resolution.
    Ext(ChartArgs),
    /// Chart of the Picard-graded stable Ext of M, including negative s.
    Stext {
        #[command(flatten)]
        chart: ChartArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest k (or l) of the A-family ranges.
        #[arg(long)]
        kmax: Option<u32>,
        /// Largest n of the suites indexed by n (weights, truncations, stages).
        #[arg(long)]
        nmax: Option<u32>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand, Debug)]
enum OpCommand {
    /// Ω^n M (negative n: cosyzygies).
    Omega {
        input: String,
        #[arg(default_value_t = 1, allow_negative_numbers = true)]
        n: i32,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// The dual module DM.
    Dual {
        input: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// The suspension Σ^t M.
    Suspend {
        input: String,
        #[arg(allow_negative_numbers = true)]
        t: i32,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// The tensor product M ⊗ N.
    Tensor {
        a: String,
        b: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

/// The verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    #[value(name = "picard")]
    Picard,
    #[value(name = "yu")]
    Yu,
    #[value(name = "truncate_P")]
    TruncateP,
    #[value(name = "classification")]
    Classification,
    #[value(name = "identify_A")]
    IdentifyA,
    #[value(name = "duality_A")]
    DualityA,
    #[value(name = "orbit_duality")]
    OrbitDuality,
    #[value(name = "identify_A_trunc")]
    IdentifyATrunc,
    #[value(name = "wfour_picard_gp")]
    Wfour,
    #[value(name = "margolis_calc")]
    MargolisCalc,
    #[value(name = "wtwo_reduction")]
    WtwoReduction,
    #[value(name = "mahowald_ses")]
    MahowaldSes,
    #[value(name = "mahowald_special_case")]
    MahowaldSpecial,
    #[value(name = "identify_BG")]
    IdentifyBg,
    #[value(name = "calculate_stext_Ake")]
    StextAke,
    #[value(name = "tensor_decomp")]
    TensorDecomp,
    #[value(name = "unicity_st_map_A")]
    Unicity,
    #[value(name = "toda")]
    Toda,
    #[value(name = "vanishing_lines")]
    VanishingLines,
    #[value(name = "all")]
    All,
}

impl Suite {
    pub const EACH: [Suite; 19] = [
        Suite::Picard,
        Suite::Yu,
        Suite::TruncateP,
        Suite::Classification,
        Suite::IdentifyA,
        Suite::DualityA,
        Suite::OrbitDuality,
        Suite::IdentifyATrunc,
        Suite::Wfour,
        Suite::MargolisCalc,
        Suite::WtwoReduction,
        Suite::MahowaldSes,
        Suite::MahowaldSpecial,
        Suite::IdentifyBg,
        Suite::StextAke,
        Suite::TensorDecomp,
        Suite::Unicity,
        Suite::Toda,
        Suite::VanishingLines,
    ];

    /// The name used on the command line.
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Runs the CLI on the given arguments (the first is the program name) and
/// returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    print!("{out}");
    match result {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::Verification(_)) || out.is_empty() {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn run(cmd: Command, out: &mut String) -> Result<(), CliError> {
    match cmd {
        Command::Build { input, output } => emit(output, &write_module(&load(&input)?), out),
        Command::Family { name, params, window, output } => {
            let m = family_from_parts(&name, &params, window.as_deref())?;
            emit(output, &write_module(&m), out)
        }
        Command::Margolis { input } => {
            let m = load(&input)?;
            out.push_str(&margolis_report(&m));
            Ok(())
        }
        Command::Reduce { input, output } => {
            let m = load(&input)?;
            let r = reduce(&m).map_err(input_err)?;
            let mut text = format!("# free summands: {} (generator degrees {:?})\n", r.free_rank, r.free_degrees);
            text.push_str(&write_module(&r.reduced));
            emit(output, &text, out)
        }
        Command::Op { op } => {
            let (m, output) = match op {
                OpCommand::Omega { input, n, output } => (omega(&load(&input)?, n).map_err(input_err)?, output),
                OpCommand::Dual { input, output } => (dual(&load(&input)?), output),
                OpCommand::Suspend { input, t, output } => (load(&input)?.suspend(t), output),
                OpCommand::Tensor { a, b, output } => (tensor(&load(&a)?, &load(&b)?).map_err(input_err)?, output),
            };
            emit(output, &write_module(&m), out)
        }
        Command::StableIso { a, b, search } => {
            let (ma, mb) = (load(&a)?, load(&b)?);
            let v = is_stably_iso(&ma, &mb, search.budget());
            writeln!(out, "{}", verdict_word(&v)).unwrap();
            writeln!(out, "# {v}").unwrap();
            if let Some(w) = v.witness() {
                writeln!(out, "# witness {} -> {}: rank {}", ma.name(), mb.name(), w.rank()).unwrap();
                for (n, b) in w.blocks() {
                    if b.rows() > 0 && b.cols() > 0 {
                        writeln!(out, "#   degree {n}: {}x{} rank {}", b.rows(), b.cols(), b.rank()).unwrap();
                    }
                }
            }
            Ok(())
        }
        Command::Classify { input, search } => {
            let m = load(&input)?;
            let r = classify(&m, search.budget()).map_err(input_err)?;
            writeln!(out, "{}", r.tag).unwrap();
            for c in &r.checked {
                writeln!(out, "# {c}").unwrap();
            }
            Ok(())
        }
        Command::Ext(args) => {
            let m = load(&args.input)?;
            let w = ChartWindow::new((0, args.smax.max(0)), parse_range(args.trange.as_deref(), (0, 8), "--trange")?);
            let c = ext_chart(&m, &w).map_err(input_err)?;
            emit(args.output.clone(), &render_chart(&c, &w, args.format), out)
        }
        Command::Stext { chart: args, search } => {
            let m = load(&args.input)?;
            let s = args.smax.abs();
            let w = ChartWindow::new((-s, s), parse_range(args.trange.as_deref(), (-12, 8), "--trange")?);
            let c = stext_chart(&m, &w, search.budget()).map_err(input_err)?;
            emit(args.output.clone(), &render_chart(&c, &w, args.format), out)
        }
        Command::Verify { suite, kmax, nmax, search } => {
            let params = SuiteParams { kmax, nmax, budget: search.budget() };
            let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
            let mut failed = 0;
            for s in suites {
                let (text, f) = run_suite(s, &params);
                out.push_str(&text);
                failed += f;
            }
            if failed > 0 {
                Err(CliError::Verification(failed))
            } else {
                Ok(())
            }
        }
    }
}

fn emit(output: Option<PathBuf>, text: &str, out: &mut String) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(&p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            out.push_str(text);
            Ok(())
        }
    }
}

fn verdict_word(v: &Verdict) -> &'static str {
    match v {
        Verdict::Yes(_) => "YES",
        Verdict::No(_) => "NO",
        Verdict::Inconclusive { .. } => "INCONCLUSIVE",
    }
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

/// Parses `a:b` into an inclusive range.
pub fn parse_range(s: Option<&str>, default: (i32, i32), what: &str) -> Result<(i32, i32), CliError> {
    let Some(s) = s else { return Ok(default) };
    let bad = || CliError::Usage(format!("{what} expects `a:b` with integers a ≤ b, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b): (i32, i32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn family_usage() -> String {
    let mut s = String::from("known families (name and parameters):\n");
    for k in FamilyKind::ALL {
        let (ar, usage) = k.arity();
        let _ = writeln!(s, "  {:<18} {}", k.name(), if ar == [0] { "(none)" } else { usage });
    }
    s
}

fn family_from_parts(name: &str, params: &[String], window: Option<&str>) -> Result<A1Module, CliError> {
    let kind = FamilyKind::from_name(name).map_err(|e| CliError::Usage(format!("{e}\n{}", family_usage())))?;
    let params: Vec<i32> = params
        .iter()
        .map(|p| p.parse().map_err(|_| CliError::Usage(format!("family parameter `{p}` is not an integer"))))
        .collect::<Result<_, _>>()?;
    let mut spec = FamilySpec::new(kind, &params);
    if let Some(w) = window {
        spec.window = Some(parse_range(Some(w), (0, 0), "--window")?);
    }
    fam::build(&spec).map_err(|e| match e {
        FamilyError::UnknownKind(_) | FamilyError::Arity { .. } | FamilyError::Param(_) => {
            CliError::Usage(format!("{e}\n{}", family_usage()))
        }
        other => CliError::Input(other.to_string()),
    })
}

/// Loads a module argument: a file path or `@Family:p1:p2…`.
pub fn load(arg: &str) -> Result<A1Module, CliError> {
    if let Some(spec) = arg.strip_prefix('@') {
        let mut parts = spec.split(':');
        let name = parts.next().unwrap_or("");
        let params: Vec<String> = parts.map(str::to_string).collect();
        return family_from_parts(name, &params, None);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))?;
    build_module(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

fn profile_line(p: &std::collections::BTreeMap<i32, usize>) -> String {
    if p.is_empty() {
        return "none".into();
    }
    p.iter().map(|(n, d)| format!("{n}:{d}")).collect::<Vec<_>>().join(" ")
}

fn margolis_report(m: &A1Module) -> String {
    let p = margolis(m);
    let mut s = format!("module {}\ndim {}\n", m.name(), m.total_dim());
    if let Some((lo, hi)) = m.window() {
        let _ = writeln!(s, "window {lo} {hi}");
    }
    let _ = writeln!(s, "Q0 {}", profile_line(&p.q0));
    let _ = writeln!(s, "Q1 {}", profile_line(&p.q1));
    s
}

// ---------------------------------------------------------------------------
// Chart rendering
// ---------------------------------------------------------------------------

/// Renders a chart as TSV, text grid or SVG.
pub fn render_chart(c: &ExtChart, w: &ChartWindow, format: ChartFormat) -> String {
    match format {
        ChartFormat::Tsv => chart_tsv(c, w),
        ChartFormat::Text => chart_text(c, w),
        ChartFormat::Svg => chart_svg(c, w),
    }
}

/// TSV form: `s t eps dim` lines sorted by `(s, t, eps)`, then one comment
/// line per nonzero `h₀`/`h₁` multiplication.
pub fn chart_tsv(c: &ExtChart, w: &ChartWindow) -> String {
    let mut s = format!("# chart {} s={}:{} x={}:{}\n", c.name, w.s.0, w.s.1, w.x.0, w.x.1);
    for (&(cs, ct, e), &d) in &c.dims {
        let _ = writeln!(s, "{cs}\t{ct}\t{e}\t{d}");
    }
    for (name, map, (ds, dt)) in [("h0", &c.h0, (1, 1)), ("h1", &c.h1, (1, 2))] {
        for (&(cs, ct, e), m) in map {
            let r = m.rank();
            if r > 0 {
                let _ = writeln!(s, "# {name} ({cs},{ct},{e})->({},{},{e}) rank={r}", cs + ds, ct + dt);
            }
        }
    }
    s
}

fn chart_text(c: &ExtChart, w: &ChartWindow) -> String {
    let mut s = String::new();
    for &e in &w.eps {
        let _ = writeln!(s, "{} eps={e}  (rows s, columns t-s; '.' = 0)", c.name);
        let _ = write!(s, "{:>4} |", "s");
        for x in w.x.0..=w.x.1 {
            let _ = write!(s, "{x:>3}");
        }
        s.push('\n');
        for y in (w.s.0..=w.s.1).rev() {
            let _ = write!(s, "{y:>4} |");
            for x in w.x.0..=w.x.1 {
                let d = c.dim_adams(x, y, e);
                if d == 0 {
                    s.push_str("  .");
                } else {
                    let _ = write!(s, "{d:>3}");
                }
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

/// SVG layout: cells of [`SVG_CELL`] pixels, a margin of [`SVG_PAD`] pixels,
/// one panel per `ε` stacked vertically; dots for basis elements, vertical
/// segments for `h₀` and diagonal segments for `h₁`.
pub const SVG_CELL: i32 = 32;
pub const SVG_PAD: i32 = 40;

fn chart_svg(c: &ExtChart, w: &ChartWindow) -> String {
    let nx = w.x.1 - w.x.0 + 1;
    let ny = w.s.1 - w.s.0 + 1;
    let pw = nx * SVG_CELL + 2 * SVG_PAD;
    let ph = ny * SVG_CELL + 2 * SVG_PAD;
    let total_h = ph * w.eps.len() as i32;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{pw}" height="{total_h}" viewBox="0 0 {pw} {total_h}" font-family="monospace" font-size="10">"#
    );
    let _ = writeln!(s, r#"<rect width="{pw}" height="{total_h}" fill="white"/>"#);
    for (panel, &e) in w.eps.iter().enumerate() {
        let top = panel as i32 * ph;
        let cx = |x: i32| SVG_PAD + (x - w.x.0) * SVG_CELL + SVG_CELL / 2;
        let cy = |y: i32| top + SVG_PAD + (w.s.1 - y) * SVG_CELL + SVG_CELL / 2;
        let inside = |x: i32, y: i32| x >= w.x.0 && x <= w.x.1 && y >= w.s.0 && y <= w.s.1;
        let _ = writeln!(s, r#"<text x="{SVG_PAD}" y="{}">{} eps={e}</text>"#, top + SVG_PAD / 2, xml_escape(&c.name));
        for x in w.x.0..=w.x.1 {
            let _ = writeln!(
                s,
                r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#eeeeee"/>"##,
                cx(x),
                cy(w.s.1) - SVG_CELL / 2,
                cy(w.s.0) + SVG_CELL / 2
            );
            let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x}</text>"#, cx(x), cy(w.s.0) + SVG_CELL);
        }
        for y in w.s.0..=w.s.1 {
            let _ = writeln!(
                s,
                r##"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="#eeeeee"/>"##,
                cx(w.x.0) - SVG_CELL / 2,
                cy(y),
                cx(w.x.1) + SVG_CELL / 2
            );
            let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{y}</text>"#, SVG_PAD - 6, cy(y) + 3);
        }
        for (name, map, (dx, dy)) in [("h0", &c.h0, (0, 1)), ("h1", &c.h1, (1, 1))] {
            for (&(cs, ct, ce), m) in map {
                let (x, y) = (ct - cs, cs);
                if ce != e || m.rank() == 0 || !inside(x, y) || !inside(x + dx, y + dy) {
                    continue;
                }
                let _ = writeln!(
                    s,
                    r#"<line class="{name}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/>"#,
                    cx(x),
                    cy(y),
                    cx(x + dx),
                    cy(y + dy)
                );
            }
        }
        for (&(cs, ct, ce), &d) in &c.dims {
            let (x, y) = (ct - cs, cs);
            if ce != e || !inside(x, y) {
                continue;
            }
            for i in 0..d as i32 {
                let off = (2 * i - (d as i32 - 1)) * 4;
                let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="3" fill="black"/>"#, cx(x) + off, cy(y));
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

/// Parameters shared by the suites; `None` selects the suite's default.
#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct SuiteParams {
    pub kmax: Option<u32>,
    pub nmax: Option<u32>,
    pub budget: SearchBudget,
}


/// Runs one suite; returns the report and the number of failed cases.
pub fn run_suite(suite: Suite, p: &SuiteParams) -> (String, usize) {
    let name = suite.name();
    let cases = suite_cases(suite, p).unwrap_or_else(|e| vec![CaseCheck::new("suite aborted", false, e)]);
    let mut s = String::new();
    let failed = cases.iter().filter(|c| !c.pass).count();
    for c in &cases {
        let _ = write!(s, "{} {name} {}", if c.pass { "PASS" } else { "FAIL" }, c.label);
        if !c.detail.is_empty() {
            let _ = write!(s, ": {}", c.detail);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "{name}: {}/{} pass", cases.len() - failed, cases.len());
    (s, failed)
}

fn verdict_case(label: String, v: &Verdict) -> CaseCheck {
    CaseCheck::new(label, v.is_yes(), v.to_string())
}

/// The individual cases of a suite.
pub fn suite_cases(suite: Suite, p: &SuiteParams) -> Result<Vec<CaseCheck>, String> {
    let b = p.budget;
    let e = |x: &dyn std::fmt::Display| x.to_string();
    let mut out = Vec::new();
    match suite {
        Suite::All => {
            for s in Suite::EACH {
                out.extend(suite_cases(s, p)?);
            }
        }
        Suite::Picard => {
            let z = fam::z_module();
            let jj = tensor(&joker(), &joker()).map_err(|x| e(&x))?;
            out.push(verdict_case("J ⊗ J ~ F".into(), &is_stably_iso(&jj, &unit_module(), b)));
            let o4 = omega(&z, 4).map_err(|x| e(&x))?;
            out.push(verdict_case("W^4 Z ~ S^12 Z".into(), &is_stably_iso(&o4, &z.suspend(12), b)));
            let o2 = omega(&z, 2).map_err(|x| e(&x))?;
            let jz = tensor(&joker(), &z).map_err(|x| e(&x))?.suspend(6);
            out.push(verdict_case("W^2 Z ~ S^6 J ⊗ Z".into(), &is_stably_iso(&o2, &jz, b)));
            let r = p.nmax.unwrap_or(3) as i32;
            let gens = [PicardIndex::new(-1, 0, 0), PicardIndex::new(0, 1, 0), PicardIndex::new(0, 0, 1)];
            let (mut total, mut bad, mut prof_bad) = (0, Vec::new(), Vec::new());
            for s in -r..=r {
                for t in -r..=r {
                    for eps in 0..=1 {
                        let i = PicardIndex::new(s, t, eps);
                        let x = picard_element(i);
                        let expected = MargolisProfile::from_lists(&[(i.q0_degree(), 1)], &[(i.q1_degree(), 1)]);
                        if margolis(&x) != expected {
                            prof_bad.push(format!("{i:?}"));
                        }
                        for g in gens {
                            total += 1;
                            let lhs = tensor(&x, &picard_element(g)).map_err(|x| e(&x))?;
                            if !is_stably_iso(&lhs, &picard_element(i.plus(g)), b).is_yes() {
                                bad.push(format!("{i:?}+{g:?}"));
                            }
                        }
                    }
                }
            }
            out.push(CaseCheck::new(
                format!("Margolis degrees of picard elements |s|,|t| <= {r}"),
                prof_bad.is_empty(),
                format!("{} elements, mismatches {prof_bad:?}", (2 * r + 1) * (2 * r + 1) * 2),
            ));
            out.push(CaseCheck::new(
                format!("group law P(i) ⊗ P(g) ~ P(i+g), |s|,|t| <= {r}, g in {{W, S, J}}"),
                bad.is_empty(),
                format!("{total} products, failures {bad:?}"),
            ));
            let corpus = fam::random_corpus(CORPUS_SEED, 50, 40);
            let mut bad = Vec::new();
            for m in &corpus {
                let om = omega(m, 1).map_err(|x| e(&x))?;
                if margolis(&om) != margolis(m).shifted(1, 3) {
                    bad.push(m.name().to_string());
                }
            }
            out.push(CaseCheck::new(
                "Margolis shift law H(W M, Q0) = S^1 H(M, Q0), H(W M, Q1) = S^3 H(M, Q1), 50 random modules",
                bad.is_empty(),
                format!("failures {bad:?}"),
            ));
        }
        Suite::Yu => out.extend(fam::yu_checks(40, b).map_err(|x| e(&x))?),
        Suite::TruncateP => {
            for s in 2..=p.nmax.unwrap_or(4).max(2) {
                out.extend(fam::truncate_p_checks(s, b).map_err(|x| e(&x))?);
            }
        }
        Suite::Classification => {
            let kmax = p.kmax.unwrap_or(4);
            for k in 1..=kmax {
                for eps in 0..=1u8 {
                    for t in 0..4u8 {
                        let x = fam::orbit_member(k, eps, t as i32).map_err(|x| e(&x))?;
                        for d in -2..=2 {
                            let want = Tag::AOrbit { d, k, eps, t };
                            let r = classify(&x.module.suspend(d), b).map_err(|x| e(&x))?;
                            out.push(CaseCheck::new(format!("S^{d} (S^-3 W)^{t} A_{k},{eps}"), r.tag == want, r.tag.to_string()));
                        }
                    }
                }
            }
            for t in 0..4u8 {
                let x = fam::orbit_member(0, 1, t as i32).map_err(|x| e(&x))?;
                let r = classify(&x.module.suspend(1), b).map_err(|x| e(&x))?;
                let want = Tag::AOrbit { d: 1, k: 0, eps: 1, t };
                out.push(CaseCheck::new(format!("S^1 (S^-3 W)^{t} S^3 Z"), r.tag == want, r.tag.to_string()));
            }
            for s in -4..=4 {
                for t in -4..=4 {
                    for eps in 0..=1 {
                        let i = PicardIndex::new(s, t, eps);
                        let r = classify(&picard_element(i), b).map_err(|x| e(&x))?;
                        out.push(CaseCheck::new(
                            format!("picard s={s} t={t} eps={eps}"),
                            r.tag == Tag::Picard(i),
                            r.tag.to_string(),
                        ));
                    }
                }
            }
            for i in 1..=3 {
                for d in -2..=2 {
                    let m = fam::fi_r(i).map_err(|x| e(&x))?.suspend(d + 1);
                    let r = classify(&m, b).map_err(|x| e(&x))?;
                    out.push(CaseCheck::new(format!("fiR d={d} i={i}"), r.tag == Tag::FiR { d, i }, r.tag.to_string()));
                }
            }
            let z = fam::z_module();
            let zz = tensor(&z, &z).map_err(|x| e(&x))?;
            let r = classify(&zz, b).map_err(|x| e(&x))?;
            out.push(CaseCheck::new("Z ⊗ Z rejected", r.is_rejected(), r.tag.to_string()));
        }
        Suite::IdentifyA => {
            for k in 1..=p.kmax.unwrap_or(4) {
                for eps in 0..=1 {
                    let v = fam::identify_a(k, eps, b).map_err(|x| e(&x))?;
                    out.push(verdict_case(format!("A_{k},{eps} ~ truncated shift of DP0"), &v));
                }
            }
        }
        Suite::DualityA => {
            for k in 1..=p.kmax.unwrap_or(4) {
                for eps in 0..=1 {
                    let v = fam::duality_a(k, eps, b).map_err(|x| e(&x))?;
                    out.push(verdict_case(format!("D A_{k},{eps} ~ S^-(k+1+6eps) W^-(k+2+2eps) A_{k},{eps}"), &v));
                }
            }
        }
        Suite::OrbitDuality => {
            let mut counts = Vec::new();
            for k in 1..=p.kmax.unwrap_or(4) {
                let mut per_eps = Vec::new();
                for eps in 0..=1u8 {
                    let mut fixed = BTreeSet::new();
                    let mut images = Vec::new();
                    for t in 0..4 {
                        let img = fam::dual_k_image(k, eps, t, b).map_err(|x| e(&x))?;
                        images.push(img);
                        if img as i32 == t {
                            fixed.insert(t);
                        }
                    }
                    let want = if k % 2 == 0 { 2 } else { 0 };
                    let closed = fixed.iter().all(|t| fixed.contains(&((t + 2) % 4)));
                    out.push(CaseCheck::new(
                        format!("k={k} eps={eps} fixed points of d_k"),
                        fixed.len() == want && closed,
                        format!("count {} (expected {want}), images t -> {images:?}", fixed.len()),
                    ));
                    per_eps.push(fixed.len());
                }
                counts.push(per_eps);
            }
            out.push(CaseCheck::new("fixed-point counts by k", true, format!("{counts:?}")));
        }
        Suite::IdentifyATrunc => {
            let n_max = p.nmax.unwrap_or(8);
            for n in 2..=n_max {
                for m in 1..n {
                    let (_, label) = fam::identify_a_trunc_prediction(m, n).map_err(|x| e(&x))?;
                    let v = fam::identify_a_trunc(m, n, b).map_err(|x| e(&x))?;
                    out.push(verdict_case(format!("P^{}_{} = {label}", 2 * n, 2 * m - 1), &v));
                }
            }
        }
        Suite::Wfour => {
            for n in 1..=p.nmax.unwrap_or(8) {
                let i = fam::wfour_prediction(n);
                let v = fam::wfour(n, b).map_err(|x| e(&x))?;
                out.push(verdict_case(format!("T0({}) ~ picard s={} t={} eps={}", 4 * n, i.s, i.t, i.eps), &v));
            }
        }
        Suite::MargolisCalc => out.extend(margolis_calc_cases(p.nmax.unwrap_or(32)).map_err(|x| e(&x))?),
        Suite::WtwoReduction => {
            for n in 1..=p.nmax.unwrap_or(8) {
                let v = fam::wtwo_reduction(n, b).map_err(|x| e(&x))?;
                out.push(verdict_case(format!("n={n}"), &v));
            }
        }
        Suite::MahowaldSes => {
            for n in 1..=p.nmax.unwrap_or(8) {
                let c = fam::mahowald_ses(n).map_err(|x| e(&x))?;
                out.push(CaseCheck::new(format!("n={n}"), c.sub_ok && c.quotient_ok, format!("{c:?}")));
            }
        }
        Suite::MahowaldSpecial => {
            for v in 1..=p.nmax.unwrap_or(3) {
                let r = fam::mahowald_special_case(v, b).map_err(|x| e(&x))?;
                out.push(verdict_case(format!("nu={v}"), &r));
                let inj = fam::wtwo_inject_question(v).map_err(|x| e(&x))?;
                out.push(CaseCheck::new(format!("nu={v} question mark embeds"), inj, ""));
            }
        }
        Suite::IdentifyBg => {
            for n in 1..=p.nmax.unwrap_or(16) {
                let v = fam::identify_bg(n, b).map_err(|x| e(&x))?;
                out.push(verdict_case(
                    format!("S^{} T({}) ~ (S W^-1)^(1-{}) S^-1 A_{},1", 2 * n, 2 * n, fam::alpha(n), fam::nu(n)),
                    &v,
                ));
            }
        }
        Suite::StextAke => {
            for k in 1..=p.kmax.unwrap_or(4) {
                for r in ake_relations(k, b).map_err(|x| e(&x))? {
                    out.push(CaseCheck::new(format!("k={k} {}", r.label), r.holds, ""));
                }
            }
        }
        Suite::TensorDecomp => {
            let kmax = p.kmax.unwrap_or(3);
            for k in 1..=kmax {
                for l in k..=kmax {
                    for eps in 0..=1 {
                        for delta in 0..=1 {
                            let r = verify_tensor_split(k, l, eps, delta, b).map_err(|x| e(&x))?;
                            out.push(CaseCheck::new(
                                format!("A_{k},{eps} ⊗ A_{l},{delta}"),
                                r.consistent(),
                                format!(
                                    "predicted split {}, verdict {}, obstruction nonzero {}",
                                    predict_tensor_split(k, l, eps, delta),
                                    verdict_word(&r.verdict),
                                    r.obstruction_nonzero
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Suite::Unicity => {
            let kmax = p.kmax.unwrap_or(3);
            for k in 1..=kmax {
                for l in 1..=kmax {
                    let a = fam::make_a(k, 1).map_err(|x| e(&x))?;
                    let c = fam::make_a(l, 1).map_err(|x| e(&x))?;
                    let d = stable_hom(&a, &c).stable_dim;
                    let want = usize::from(k >= l);
                    out.push(CaseCheck::new(format!("dim [A_{k},1, A_{l},1] = {want}"), d == want, format!("{d}")));
                }
            }
            let h = hom(&fam::make_a(2, 1).map_err(|x| e(&x))?, &fam::make_a(1, 1).map_err(|x| e(&x))?);
            out.push(CaseCheck::new("dim hom(A_2,1, A_1,1) = 2", h.len() == 2, format!("{}", h.len())));
        }
        Suite::Toda => {
            let nmax = p.nmax.unwrap_or(8);
            let st = fam::toda_complex(nmax).map_err(|x| e(&x))?;
            for s in &st {
                out.push(CaseCheck::new(format!("splice module at n={} is S^n K_n", s.n), s.kappa_matches, ""));
            }
            for n in 1..st.len() {
                out.push(CaseCheck::new(format!("exact at n={n}"), fam::toda_exact_at(&st, n), ""));
            }
            let w = ChartWindow::new((-2, 3), (-8, 8));
            let targets = [
                fam::z_module(),
                fam::make_a(1, 1).map_err(|x| e(&x))?,
                fam::make_a(2, 0).map_err(|x| e(&x))?,
            ];
            for m in &targets {
                for n in 0..=nmax.min(4) {
                    let (bad, nz) = toda_reindex_mismatches(m, n, &w).map_err(|x| e(&x))?;
                    out.push(CaseCheck::new(
                        format!("Ext^(s,t)(K_{n}, {}) = Ext^(s+{n},t+{n})(F, {})", m.name(), m.name()),
                        bad.is_empty(),
                        format!("{nz} nonzero cells, mismatches {bad:?}"),
                    ));
                }
            }
        }
        Suite::VanishingLines => {
            let w = ChartWindow::new((-4, 6), (-14, 14));
            let mut mods = vec![fam::z_module()];
            for (k, eps) in [(1, 0), (1, 1), (2, 0), (2, 1), (3, 0)] {
                mods.push(fam::make_a(k, eps).map_err(|x| e(&x))?);
            }
            mods.push(fam::trunc_projective(1, 6).map_err(|x| e(&x))?);
            mods.push(fam::trunc_projective(3, 8).map_err(|x| e(&x))?);
            for m in mods {
                out.push(vanishing_case(&m, &w, b)?);
            }
        }
    }
    Ok(out)
}

/// Seed of the random corpus used by the property checks.
pub const CORPUS_SEED: u64 = 0xA1C0_2B05;

/// Vanishing band and `h₀`-annihilation exponent on a stable chart.
pub fn vanishing_case(m: &A1Module, w: &ChartWindow, b: SearchBudget) -> Result<CaseCheck, String> {
    let c = stext_chart(m, w, b).map_err(|x| x.to_string())?;
    let bad = vanishing_violations(m, &c).map_err(|x| x.to_string())?;
    let (d1, d2) = q1_support(m).ok_or("no Q1 support")?;
    let e = (1 + (d2 - d1 + 3) / 2) as usize;
    let h0_bad: Vec<_> = c
        .dims
        .keys()
        .filter(|&&(s, _, _)| s + e as i32 <= w.s.1)
        .filter(|&&(s, t, eps)| c.h0_power_rank(e, s, t, eps) > 0)
        .copied()
        .collect();
    Ok(CaseCheck::new(
        format!("{} with Q1 in [{d1},{d2}]: band and h0^{e} = 0", m.name()),
        bad.is_empty() && h0_bad.is_empty(),
        format!("{} cells; outside band {bad:?}; h0^{e} nonzero at {h0_bad:?}", c.dims.len()),
    ))
}

/// Margolis profiles of the Brown–Gitler modules of weight at most `wmax`.
pub fn margolis_calc_cases(wmax: u32) -> Result<Vec<CaseCheck>, FamilyError> {
    use fam::BgKind::{T, T0};
    let mut out = Vec::new();
    let t0_q1 = |n: u32| 2 * (fam::alpha(n) as i32 - 2 * n as i32);
    for n in 0..=wmax / 4 {
        let p = margolis(&fam::brown_gitler(T0, 4 * n)?);
        let want = MargolisProfile::from_lists(&[(0, 1)], &[(t0_q1(n), 1)]);
        out.push(CaseCheck::new(format!("T0({})", 4 * n), p == want, format!("{p:?}")));
    }
    for n in 1..=wmax / 2 {
        let w = 2 * n;
        let p = margolis(&fam::brown_gitler(T, w)?);
        let degrees = if w % 4 == 0 {
            let m = w / 4 - 1;
            [t0_q1(m + 1), t0_q1(m) - 1]
        } else {
            let q = t0_q1(w / 4);
            [q - 1, q]
        };
        let mut want = MargolisProfile::default();
        for d in degrees {
            *want.q1.entry(d).or_insert(0) += 1;
        }
        out.push(CaseCheck::new(format!("T({w})"), p == want, format!("{p:?}")));
    }
    Ok(out)
}
