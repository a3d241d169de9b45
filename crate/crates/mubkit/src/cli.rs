//! The `mubkit` command line. [`run`] does all the work and returns the
//! exit code and output instead of printing, so it can be tested in-process.
//!
//! Exit codes: 0 when everything requested verifies, 1 when a verification
//! fails, 2 for usage, parse and I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mubkit_core::hadamard::{char_table, dft, float_deviation, verify_hadamard};
use mubkit_core::latin::{
    complete_mols_prime_power, cyclic_square, macneish_product, mols_lower_bound, MolsTables,
};
use mubkit_core::mub::{build_mubs, tensor_mubs, MubReport, VerifyMode};
use mubkit_core::net::{mols_from_net, net_from_mols, verify_net};
use mubkit_core::plan::{summary, KNOWLEDGE, MAX_PLAN_DIM};
use mubkit_core::{plan, GenHadamard, MolsSet, MubSet, Net};

use crate::format::{
    export_hadamard, export_mols, export_mubs, export_net, import_hadamard, import_mols, import_mubs,
    import_net, non_unit_amplitudes, read_file, FormatError, HadamardFile, LoadedMubs, MolsFile, MubFile,
    NetFile, ParsedMubs,
};
use crate::imports::load_imports;
use crate::parallel::{verify_float_jobs, verify_mubs_jobs};

#[derive(Parser, Debug)]
#[command(
    name = "mubkit",
    version,
    about = "Mutually unbiased bases from nets and generalized Hadamard matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutually orthogonal Latin squares
    #[command(subcommand)]
    Mols(MolsCmd),
    /// Nets of incidence vectors
    #[command(subcommand)]
    Net(NetCmd),
    /// Generalized Hadamard matrices
    #[command(subcommand)]
    Hadamard(HadamardCmd),
    /// Mutually unbiased bases
    #[command(subcommand)]
    Mub(MubCmd),
    /// How many MUBs can be had in dimension D
    Plan(PlanArgs),
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the result to FILE
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Print JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum MolsCmd {
    /// Complete set for a prime power, or one cyclic square of any order
    Gen {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        cyclic: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Re-verify a MOLS file
    Verify {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Direct (MacNeish) product of two MOLS files
    Product {
        a: String,
        b: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum NetCmd {
    /// The net of a MOLS file: rows, columns, then one block per square
    FromMols {
        file: String,
        #[command(flatten)]
        output: Output,
    },
    /// Read MOLS back from a net, using blocks 0 and 1 as rows and columns
    ToMols {
        file: String,
        #[command(flatten)]
        output: Output,
    },
    /// Check the net conditions and list every violation
    Verify {
        file: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum HadamardCmd {
    /// Fourier matrix or character table
    Gen {
        #[arg(long, conflicts_with = "char_table", required_unless_present = "char_table")]
        dft: Option<usize>,
        /// Cyclic orders, e.g. 2,2,3
        #[arg(long, value_delimiter = ',')]
        char_table: Option<Vec<u32>>,
        #[command(flatten)]
        output: Output,
    },
    /// Check H H^† = s I exactly
    Verify {
        file: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum MubCmd {
    /// Build MUBs in dimension s² from a net and a Hadamard matrix of size s
    Build {
        #[arg(long)]
        square: usize,
        /// MOLS of order s (default: complete set for prime powers, products otherwise)
        #[arg(long, value_name = "FILE")]
        mols: Option<String>,
        /// Hadamard matrix of size s (default: Fourier matrix)
        #[arg(long, value_name = "FILE", conflicts_with = "char_table")]
        hadamard: Option<String>,
        /// Use the character table of these cyclic orders, e.g. 2,2
        #[arg(long, value_delimiter = ',')]
        char_table: Option<Vec<u32>>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Verify a MUB file (exact by default)
    Verify {
        file: String,
        #[arg(long, conflicts_with = "both")]
        float: bool,
        /// Run both verifiers and fail if they disagree
        #[arg(long)]
        both: bool,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Tensor two MUB files; keeps min(k_A, k_B) bases
    Tensor {
        a: String,
        b: String,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct PlanArgs {
    d: u64,
    /// Directory of MOLS, MUB and cited tables
    #[arg(long, value_name = "DIR", env = "MUBKIT_IMPORTS")]
    imports: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

enum Fail {
    Usage(String),
    Format(FormatError),
}

impl From<FormatError> for Fail {
    fn from(e: FormatError) -> Self {
        Fail::Format(e)
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail::Usage(msg.into())
}

struct Done {
    code: u8,
    out: String,
}

impl Done {
    fn ok(out: String) -> Self {
        Self { code: 0, out }
    }

    fn verdict(passed: bool, out: String) -> Self {
        Self {
            code: if passed { 0 } else { 1 },
            out,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.exit_code() {
                0 => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let result = match cli.command {
        Command::Mols(c) => mols(c),
        Command::Net(c) => net(c),
        Command::Hadamard(c) => hadamard(c),
        Command::Mub(c) => mub(c),
        Command::Plan(a) => plan_cmd(a),
    };
    match result {
        Ok(Done { code, out }) => Outcome {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(Fail::Usage(m)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Fail::Format(e)) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Writes `artifact` to `--out` if given; prints it with `--json`, else `human`.
fn emit(artifact: String, mut human: String, output: &Output) -> Result<Done, Fail> {
    if let Some(path) = &output.out {
        std::fs::write(path, &artifact).map_err(|source| FormatError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let _ = writeln!(human, "wrote {}", path.display());
    }
    Ok(Done::ok(if output.json { artifact } else { human }))
}

fn json_line(v: serde_json::Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn failure_lines(out: &mut String, failures: &[String]) {
    for f in failures {
        let _ = writeln!(out, "  {f}");
    }
}

// ---- mols ----

fn describe_mols(set: &MolsSet) -> String {
    let mut out = format!("{} MOLS of order {}\n", set.len(), set.order());
    for (t, sq) in set.squares().iter().enumerate() {
        let _ = writeln!(out, "L_{}:", t + 1);
        for row in sq.rows() {
            let cells: Vec<_> = row.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
    }
    out
}

fn load_mols(path: &str) -> Result<MolsSet, Fail> {
    Ok(import_mols(&read_file(path)?)?)
}

fn mols(cmd: MolsCmd) -> Result<Done, Fail> {
    match cmd {
        MolsCmd::Gen {
            order,
            cyclic,
            output,
        } => {
            let set = if cyclic {
                if order == 0 {
                    return Err(usage("order must be positive"));
                }
                MolsSet::new(order as usize, vec![cyclic_square(order as usize)])
                    .expect("a single square is a MOLS set")
            } else {
                if order > mubkit_core::galois::MAX_FIELD_ORDER {
                    return Err(usage(format!("order {order} is too large")));
                }
                complete_mols_prime_power(order)
                    .map_err(|_| usage(format!("{order} is not a prime power; use --cyclic or product")))?
            };
            emit(export_mols(&set), describe_mols(&set), &output)
        }
        MolsCmd::Verify { file, json } => {
            let f = MolsFile::parse(&read_file(&file)?)?;
            if f.order == 0 {
                return Err(usage("order must be positive"));
            }
            let problems = f.problems();
            let passed = problems.is_empty();
            let out = if json {
                json_line(json!({
                    "passed": passed,
                    "order": f.order,
                    "squares": f.squares.len(),
                    "failures": problems,
                }))
            } else if passed {
                format!("pass: {} MOLS of order {}\n", f.squares.len(), f.order)
            } else {
                let mut s = format!("FAIL: {} problems\n", problems.len());
                failure_lines(&mut s, &problems);
                s
            };
            Ok(Done::verdict(passed, out))
        }
        MolsCmd::Product { a, b, output } => {
            let (a, b) = (load_mols(&a)?, load_mols(&b)?);
            if a.is_empty() || b.is_empty() {
                return Err(usage("both MOLS sets must hold at least one square"));
            }
            let w = a.len().min(b.len());
            let p = macneish_product(&a.truncated(w), &b.truncated(w)).map_err(FormatError::from)?;
            emit(export_mols(&p), describe_mols(&p), &output)
        }
    }
}

// ---- nets ----

fn describe_net(net: &Net) -> String {
    let mut out = format!("({}, {})-net, {} points\n", net.k(), net.s(), net.dim());
    for (b, block) in net.blocks().iter().enumerate() {
        let bits: Vec<_> = block.iter().map(|v| v.to_bit_string()).collect();
        let _ = writeln!(out, "block {b}: {}", bits.join(" "));
    }
    out
}

fn net(cmd: NetCmd) -> Result<Done, Fail> {
    match cmd {
        NetCmd::FromMols { file, output } => {
            let n = net_from_mols(&load_mols(&file)?);
            emit(export_net(&n), describe_net(&n), &output)
        }
        NetCmd::ToMols { file, output } => {
            let n = import_net(&read_file(&file)?)?;
            let set = mols_from_net(&n).map_err(|e| usage(e.to_string()))?;
            emit(export_mols(&set), describe_mols(&set), &output)
        }
        NetCmd::Verify { file, json } => {
            let n = NetFile::parse(&read_file(&file)?)?.to_net()?;
            let report = verify_net(&n);
            let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            let out = if json {
                json_line(json!({
                    "passed": report.passed(),
                    "s": n.s(),
                    "k": n.k(),
                    "failures": lines,
                }))
            } else if report.passed() {
                format!("pass: ({}, {})-net\n", n.k(), n.s())
            } else {
                let mut s = format!("FAIL: {} violations\n", lines.len());
                failure_lines(&mut s, &lines);
                s
            };
            Ok(Done::verdict(report.passed(), out))
        }
    }
}

// ---- Hadamard ----

fn describe_hadamard(h: &GenHadamard) -> String {
    let mut out = format!(
        "{0}x{0} matrix of {1}-th roots of unity (exponents)\n",
        h.size(),
        h.root_order()
    );
    for row in h.rows() {
        let cells: Vec<_> = row.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    out
}

fn table(orders: &[u32]) -> Result<GenHadamard, Fail> {
    char_table(orders).map_err(|e| usage(e.to_string()))
}

fn hadamard(cmd: HadamardCmd) -> Result<Done, Fail> {
    match cmd {
        HadamardCmd::Gen {
            dft: s,
            char_table,
            output,
        } => {
            let h = match (s, char_table) {
                (Some(0), _) => return Err(usage("size must be positive")),
                (Some(s), _) => table(&[s as u32])?,
                (None, Some(orders)) => table(&orders)?,
                (None, None) => unreachable!("clap requires one of --dft, --char-table"),
            };
            emit(export_hadamard(&h), describe_hadamard(&h), &output)
        }
        HadamardCmd::Verify { file, json } => {
            let h = HadamardFile::parse(&read_file(&file)?)?.to_matrix()?;
            let report = verify_hadamard(&h);
            let dev = float_deviation(&h);
            let lines: Vec<String> = report
                .failing_pairs
                .iter()
                .map(|(r, r2)| format!("rows {r} and {r2}"))
                .collect();
            let out = if json {
                json_line(json!({
                    "passed": report.passed(),
                    "size": h.size(),
                    "root_order": h.root_order(),
                    "float_deviation": dev,
                    "failures": lines,
                }))
            } else if report.passed() {
                format!("pass: {0}x{0}, float deviation {dev:.1e}\n", h.size())
            } else {
                let mut s = format!("FAIL: {} row pairs\n", lines.len());
                failure_lines(&mut s, &lines);
                s
            };
            Ok(Done::verdict(report.passed(), out))
        }
    }
}

// ---- MUBs ----

fn describe_mubs(set: &MubSet) -> String {
    let mut out = String::new();
    for (b, basis) in set.bases().iter().enumerate() {
        let _ = writeln!(out, "B_{}:", b + 1);
        for v in basis.vectors() {
            let _ = writeln!(out, "  {v}");
        }
    }
    out
}

fn report_lines(report: &MubReport) -> Vec<String> {
    report
        .shape
        .iter()
        .map(ToString::to_string)
        .chain(report.pairs.iter().map(ToString::to_string))
        .collect()
}

fn load_exact(path: &str, jobs: usize) -> Result<MubSet, Fail> {
    match import_mubs(&read_file(path)?, jobs)? {
        LoadedMubs::Exact(m) => Ok(m),
        LoadedMubs::FloatOnly(_) => Err(usage(format!("{path}: tensoring needs root-of-unity amplitudes"))),
    }
}

fn mols_for_square(s: usize, file: Option<&str>) -> Result<MolsSet, Fail> {
    if let Some(path) = file {
        let set = load_mols(path)?;
        if set.order() != s {
            return Err(usage(format!(
                "MOLS file has order {}, expected {s}",
                set.order()
            )));
        }
        return Ok(set);
    }
    let tables = MolsTables::new();
    mols_lower_bound(s, &tables)
        .recipe
        .build(&tables)
        .map_err(|e| usage(e.to_string()))
}

fn mub(cmd: MubCmd) -> Result<Done, Fail> {
    match cmd {
        MubCmd::Build {
            square,
            mols,
            hadamard,
            char_table,
            jobs,
            output,
        } => {
            if square < 2 {
                return Err(usage("--square must be at least 2"));
            }
            if square > 256 {
                return Err(usage("--square is limited to 256"));
            }
            let set = mols_for_square(square, mols.as_deref())?;
            let h = match (hadamard, char_table) {
                (Some(path), _) => import_hadamard(&read_file(&path)?)?,
                (None, Some(orders)) => table(&orders)?,
                (None, None) => dft(square),
            };
            if h.size() != square {
                return Err(usage(format!(
                    "Hadamard matrix has size {}, expected {square}",
                    h.size()
                )));
            }
            let mubs = build_mubs(&net_from_mols(&set), &h).map_err(|e| usage(e.to_string()))?;
            let report =
                verify_mubs_jobs(&mubs, VerifyMode::Exact, jobs).map_err(|e| usage(e.to_string()))?;
            let mut human = if output.out.is_none() {
                describe_mubs(&mubs)
            } else {
                String::new()
            };
            let _ = writeln!(
                human,
                "exact verification: {} ({} bases in d = {})",
                if report.passed() { "pass" } else { "FAIL" },
                mubs.len(),
                mubs.dim()
            );
            let mut done = emit(export_mubs(&mubs), human, &output)?;
            if !report.passed() {
                done.code = 1;
            }
            Ok(done)
        }
        MubCmd::Verify {
            file,
            float,
            both,
            jobs,
            json,
        } => verify_mub_file(&file, float, both, jobs, json),
        MubCmd::Tensor { a, b, jobs, output } => {
            let (a, b) = (load_exact(&a, jobs)?, load_exact(&b, jobs)?);
            let t = tensor_mubs(&a, &b).map_err(|e| usage(e.to_string()))?;
            let report = verify_mubs_jobs(&t, VerifyMode::Exact, jobs).map_err(|e| usage(e.to_string()))?;
            let human = format!(
                "{} x {} -> {} bases in d = {}; exact verification: {}\n",
                a.len(),
                b.len(),
                t.len(),
                t.dim(),
                if report.passed() { "pass" } else { "FAIL" }
            );
            let mut done = emit(export_mubs(&t), human, &output)?;
            if !report.passed() {
                done.code = 1;
            }
            Ok(done)
        }
    }
}

fn verify_mub_file(file: &str, float: bool, both: bool, jobs: usize, json: bool) -> Result<Done, Fail> {
    let parsed = MubFile::parse(&read_file(file)?)?.to_parsed()?;
    let err = |e: mubkit_core::mub::MubError| usage(e.to_string());
    let mut runs: Vec<(&str, MubReport)> = Vec::new();
    let mut extra = Vec::new();
    let (dim, count) = match &parsed {
        ParsedMubs::Exact(set) => {
            if !float {
                runs.push((
                    "exact",
                    verify_mubs_jobs(set, VerifyMode::Exact, jobs).map_err(err)?,
                ));
            }
            if float || both {
                runs.push((
                    "float",
                    verify_mubs_jobs(set, VerifyMode::Float, jobs).map_err(err)?,
                ));
            }
            (set.dim(), set.len())
        }
        ParsedMubs::Float(set) => {
            extra = non_unit_amplitudes(set);
            runs.push(("float", verify_float_jobs(set, jobs).map_err(err)?));
            (set.dim, set.bases.len())
        }
    };
    let agree = runs.windows(2).all(|w| w[0].1 == w[1].1);
    let passed = agree && extra.is_empty() && runs.iter().all(|(_, r)| r.passed());
    let out = if json {
        let modes: Vec<_> = runs
            .iter()
            .map(|(name, r)| {
                json!({
                    "mode": name,
                    "passed": r.passed(),
                    "failing_pairs": r.failing_pairs(),
                    "failures": report_lines(r),
                })
            })
            .collect();
        json_line(json!({
            "passed": passed,
            "dim": dim,
            "bases": count,
            "float_only": matches!(parsed, ParsedMubs::Float(_)),
            "agree": agree,
            "amplitude_failures": extra,
            "modes": modes,
        }))
    } else {
        let mut s = String::new();
        if matches!(parsed, ParsedMubs::Float(_)) {
            s.push_str("amplitudes are not roots of unity: float-verified only\n");
        }
        failure_lines(&mut s, &extra);
        for (name, r) in &runs {
            if r.passed() {
                let _ = writeln!(s, "{name}: pass ({count} bases in d = {dim})");
            } else {
                let lines = report_lines(r);
                let _ = writeln!(s, "{name}: FAIL ({} failures)", lines.len());
                failure_lines(&mut s, &lines);
            }
        }
        if !agree {
            s.push_str("exact and float verifiers disagree\n");
        }
        s
    };
    Ok(Done::verdict(passed, out))
}

// ---- planner ----

fn plan_cmd(args: PlanArgs) -> Result<Done, Fail> {
    if !(2..=MAX_PLAN_DIM).contains(&args.d) {
        return Err(usage(format!("dimension must be between 2 and {MAX_PLAN_DIM}")));
    }
    let loaded = match &args.imports {
        Some(dir) => load_imports(dir, args.jobs)?,
        None => Default::default(),
    };
    let p = plan(args.d, &loaded.imports);
    let facts = p.cited_facts();
    let statement = |id: &str| KNOWLEDGE.iter().find(|k| k.id == id).map_or("", |k| k.statement);
    let out = if args.json {
        json_line(json!({
            "d": p.d,
            "best_count": p.best_count,
            "best_provenance": p.best_provenance().as_str(),
            "best": p.best.to_string(),
            "floor_applied": p.floor_applied,
            "best_constructible_count": p.best_constructible_count,
            "constructible": p.constructible.as_ref().map(ToString::to_string),
            "prime_power_count": p.prime_power_count,
            "cited": facts,
            "imports": loaded.notes.iter().map(|n| json!({"file": n.file, "summary": n.summary})).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = summary(&p);
        s.push('\n');
        let _ = writeln!(s, "best: {}", p.best);
        if p.floor_applied {
            let _ = writeln!(s, "  raised to {} by the general floor", p.best_count);
        }
        match &p.constructible {
            Some(c) => {
                let _ = writeln!(s, "constructible: {c}");
            }
            None => s.push_str("constructible: none (some factor has no buildable or imported set)\n"),
        }
        for id in facts {
            let _ = writeln!(s, "cites {id}: {}", statement(id));
        }
        for n in &loaded.notes {
            let _ = writeln!(s, "import {}: {}", n.file, n.summary);
        }
        s
    };
    Ok(Done::ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("mubkit").chain(args.iter().copied()))
    }

    #[test]
    fn square_two_listing() {
        let o = run_args(&["mub", "build", "--square", "2"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o
            .stdout
            .starts_with("B_1:\n  1/sqrt(2) (1, 1, 0, 0)\n  1/sqrt(2) (1, -1, 0, 0)\n"));
        assert!(o
            .stdout
            .ends_with("exact verification: pass (3 bases in d = 4)\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        let o = run_args(&["mols", "gen", "--order", "6"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("not a prime power; use --cyclic or product"));
        assert_eq!(run_args(&["mols", "frobnicate"]).code, 2);
        assert_eq!(run_args(&["plan", "1"]).code, 2);
        assert_eq!(run_args(&["--help"]).code, 0);
    }

    #[test]
    fn plan_four() {
        let o = run_args(&["plan", "4"]);
        assert_eq!(o.code, 0);
        assert!(o
            .stdout
            .starts_with("d = 4: best 5 (cited-existence), constructible 3, reduce-to-prime-powers 5\n"));
    }
}
