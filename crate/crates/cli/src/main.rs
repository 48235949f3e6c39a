//! `thrackle`: command-line front end for thrackle-core.
//!
//! Exit codes: 0 success, 1 verification failure or violated lemma
//! precondition, 2 usage or I/O error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use thrackle_core::bounds::{self, split_vertex, tight_family, verify_edge_bound};
use thrackle_core::chromatic::{bound_report, exact_chromatic, BoundReport, ChromaticOutcome};
use thrackle_core::circle::{build_action, common_edge_topological_witness};
use thrackle_core::common_edge::{build_apex_digraph, common_edge_combinatorial};
use thrackle_core::io::{
    parse_document, to_json, verify_document, CertificateFile, Document, FamilyFile, GraphFile, StatsFile,
    StructureFile, ThrackleFile,
};
use thrackle_core::render::RenderSpec;
use thrackle_core::thrackle::{decompose, random_maximal};
use thrackle_core::{build_disjointness_graph, Error, Thrackle};

#[derive(Parser)]
#[command(name = "thrackle", version, about = "Convex thrackles and the segment disjointness graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Comb,
    Topo,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Export the disjointness graph D_n.
    Dn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a graph, thrackle, structure, family, or certificate file.
    Verify { file: PathBuf },
    /// Find an edge shared by two maximal thrackles with disjoint cycles.
    CommonEdge {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Tabulate the lower and upper bounds on chi(D_n).
    Bounds {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Also compute chi(D_n) exactly.
        #[arg(long)]
        solve: bool,
        #[arg(long, default_value_t = 600)]
        budget_secs: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compute chi(D_n) exactly with a certificate.
    Chi {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 600)]
        budget_secs: u64,
        /// Where to write the certificate.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build the tight family of k star thrackles on n points.
    Tight {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Split a shared cycle vertex of a family file.
    Split {
        file: PathBuf,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random maximal thrackle from a seed.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Write the cycle and pendant structure as well.
        #[arg(long)]
        structure: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw any supported file as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dump the circle involution of a maximal thrackle.
    Action { file: PathBuf },
    /// Dump the apex digraph of two maximal thrackles.
    Digraph { a: PathBuf, b: PathBuf },
}

enum Failure {
    /// Verification failed or a lemma precondition does not hold.
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CyclesIntersect(_) | Error::Falsified(_) | Error::NotMaximal(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> Result<Document, Failure> {
    parse_document(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Reads a thrackle or structure file as a thrackle.
fn read_thrackle(path: &Path) -> Result<Thrackle, Failure> {
    let t = match read_doc(path)? {
        Document::Thrackle(t) => t.to_thrackle(),
        Document::Structure(s) => s.to_structure().map(|s| s.to_thrackle()),
        other => return Err(Failure::Usage(format!("{}: expected a thrackle, got a {}", path.display(), other.kind()))),
    };
    t.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_dn(n: usize, out: Option<&Path>) -> CmdResult {
    let g = build_disjointness_graph(n)?;
    emit(out, &to_json(&GraphFile::from(&g)))
}

fn cmd_verify(file: &Path) -> CmdResult {
    let doc = read_doc(file)?;
    let v = verify_document(&doc).map_err(|e| match e {
        Error::Falsified(m) => Failure::Check(m),
        e => Failure::Usage(e.to_string()),
    })?;
    if v.ok {
        println!("ok {}: {}", doc.kind(), v.detail);
        Ok(())
    } else {
        Err(Failure::Check(format!("{}: {}", doc.kind(), v.detail)))
    }
}

fn cmd_common_edge(a: &Path, b: &Path, method: Method) -> CmdResult {
    let t1 = read_thrackle(a)?;
    let t2 = read_thrackle(b)?;
    let oracle: Vec<_> = t1.edges().intersection(t2.edges()).copied().collect();
    let comb = matches!(method, Method::Comb | Method::Both)
        .then(|| common_edge_combinatorial(&t1, &t2))
        .transpose()?;
    let topo = matches!(method, Method::Topo | Method::Both)
        .then(|| common_edge_topological_witness(&t1, &t2))
        .transpose()?;
    if let Some(c) = comb {
        println!("combinatorial {c}");
    }
    if let Some(w) = &topo {
        println!("topological {} (x = {}, f(x) = {})", w.chord, w.x, w.y);
    }
    let found: Vec<_> = comb.into_iter().chain(topo.map(|w| w.chord)).collect();
    if found.iter().any(|c| !oracle.contains(c)) {
        return Err(Failure::Check("returned chord is not in both edge sets".into()));
    }
    if let [c1, c2] = found[..] {
        println!("agree {}", c1 == c2);
    }
    println!(
        "shared edges {}",
        oracle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    );
    Ok(())
}

struct Row {
    report: BoundReport,
    chi: Option<ChromaticOutcome>,
}

impl Row {
    fn chi_text(&self) -> String {
        match &self.chi {
            None => "-".into(),
            Some(ChromaticOutcome::Exact { k, .. }) => k.to_string(),
            Some(ChromaticOutcome::Unknown { lower, upper, .. }) => format!("[{lower};{upper}]"),
        }
    }

    fn chi_json(&self) -> serde_json::Value {
        match &self.chi {
            None => serde_json::Value::Null,
            Some(ChromaticOutcome::Exact { k, .. }) => json!(k),
            Some(ChromaticOutcome::Unknown { lower, upper, .. }) => json!({"lower": lower, "upper": upper}),
        }
    }
}

fn table(rows: &[Row], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Csv => {
            writeln!(s, "n,araujo_lb,dw_lb,main_lb,chi_exact,upper_strict").unwrap();
            for r in rows {
                let b = &r.report;
                writeln!(s, "{},{},{},{},{},{:.6}", b.n, b.araujo_lb, b.dw_lb, b.main_lb, r.chi_text(), b.upper_strict)
                    .unwrap();
            }
        }
        Format::Text => {
            writeln!(s, "{:>6} {:>10} {:>6} {:>8} {:>10} {:>13}", "n", "araujo_lb", "dw_lb", "main_lb", "chi_exact", "upper_strict")
                .unwrap();
            for r in rows {
                let b = &r.report;
                writeln!(
                    s,
                    "{:>6} {:>10} {:>6} {:>8} {:>10} {:>13.6}",
                    b.n,
                    b.araujo_lb,
                    b.dw_lb,
                    b.main_lb,
                    r.chi_text(),
                    b.upper_strict
                )
                .unwrap();
            }
            if rows.iter().any(|r| r.chi.is_some()) {
                writeln!(s, "# chi_exact: computed here by exhaustive colouring search").unwrap();
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| {
                    let b = &r.report;
                    json!({
                        "n": b.n,
                        "araujo_lb": b.araujo_lb,
                        "dw_lb": b.dw_lb,
                        "main_lb": b.main_lb,
                        "chi_exact": r.chi_json(),
                        "upper_strict": b.upper_strict,
                    })
                })
                .collect();
            s = to_json(&v);
        }
    }
    s
}

fn cmd_bounds(from: usize, to: usize, solve: bool, budget: Duration, format: Format) -> CmdResult {
    if from > to {
        return Err(Failure::Usage(format!("empty range {from}..={to}")));
    }
    let rows = (from..=to)
        .map(|n| {
            let report = bound_report(n)?;
            let chi = solve.then(|| exact_chromatic(n, budget)).transpose()?;
            Ok(Row { report, chi })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    print!("{}", table(&rows, format));
    Ok(())
}

fn cmd_chi(n: usize, budget: Duration, out: Option<&Path>, format: Format) -> CmdResult {
    let report = bound_report(n)?;
    let outcome = exact_chromatic(n, budget)?;
    if let Some(p) = out {
        emit(Some(p), &to_json(&CertificateFile::from(outcome.certificate())))?;
    }
    let row = Row { report, chi: Some(outcome) };
    if let Some(k) = row.chi.as_ref().and_then(|c| c.exact()) {
        if (k as i64) < report.main_lb || (k as f64) >= report.upper_strict || (k as i64) < report.dw_lb {
            print!("{}", table(&[row], format));
            return Err(Failure::Check(format!("chi = {k} falls outside the proven bounds")));
        }
    }
    print!("{}", table(&[row], format));
    Ok(())
}

fn stats_text(s: &bounds::FamilyStats, format: Format) -> String {
    match format {
        Format::Json => to_json(&StatsFile::from(*s)),
        Format::Csv => format!("union_edges,r,bound,tight\n{},{},{},{}\n", s.union_edges, s.r, s.bound, s.tight),
        Format::Text => format!(
            "union_edges {}/{} r {} {}\n",
            s.union_edges,
            s.bound,
            s.r,
            if s.tight { "tight" } else { "not tight" }
        ),
    }
}

fn cmd_tight(n: usize, k: usize, out: Option<&Path>, format: Format) -> CmdResult {
    let fam = tight_family(n, k)?;
    let stats = verify_edge_bound(&fam)?;
    match out {
        Some(p) => emit(Some(p), &to_json(&FamilyFile::from(&fam)))?,
        None if format == Format::Text => print!("{}", to_json(&FamilyFile::from(&fam))),
        None => {}
    }
    print!("{}", stats_text(&stats, format));
    Ok(())
}

fn cmd_split(file: &Path, v: usize, j: usize, out: Option<&Path>) -> CmdResult {
    let fam = match read_doc(file)? {
        Document::Family(f) => f.to_family()?,
        other => return Err(Failure::Usage(format!("expected a family, got a {}", other.kind()))),
    };
    let split = split_vertex(&fam, v, j).map_err(|e| match e {
        Error::Precondition(m) => Failure::Check(m),
        e => e.into(),
    })?;
    let before = verify_edge_bound(&fam)?;
    let after = verify_edge_bound(&split)?;
    emit(out, &to_json(&FamilyFile::from(&split)))?;
    eprintln!("r {} -> {}, edge slots {} -> {}", before.r, after.r, fam.edge_slots(), split.edge_slots());
    Ok(())
}

fn cmd_random(n: usize, seed: u64, structure: bool, out: Option<&Path>) -> CmdResult {
    let t = random_maximal(n, seed)?;
    let text = if structure {
        to_json(&StructureFile::from(&decompose(&t)?))
    } else {
        to_json(&ThrackleFile::from(&t))
    };
    emit(out, &text)
}

fn cmd_render(file: &Path, out: &Path) -> CmdResult {
    let doc = read_doc(file)?;
    emit(Some(out), &RenderSpec::default().render_document(&doc))
}

fn cmd_action(file: &Path) -> CmdResult {
    let t = read_thrackle(file)?;
    let f = build_action(&decompose(&t)?)?;
    print!("{}", f.dump());
    Ok(())
}

fn cmd_digraph(a: &Path, b: &Path) -> CmdResult {
    let s1 = decompose(&read_thrackle(a)?)?;
    let s2 = decompose(&read_thrackle(b)?)?;
    print!("{}", build_apex_digraph(&s1, &s2)?.dump());
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Dn { n, out } => cmd_dn(n, out.as_deref()),
        Command::Verify { file } => cmd_verify(&file),
        Command::CommonEdge { a, b, method } => cmd_common_edge(&a, &b, method),
        Command::Bounds { from, to, solve, budget_secs, format } => {
            cmd_bounds(from, to, solve, Duration::from_secs(budget_secs), format)
        }
        Command::Chi { n, budget_secs, out, format } => {
            cmd_chi(n, Duration::from_secs(budget_secs), out.as_deref(), format)
        }
        Command::Tight { n, k, out, format } => cmd_tight(n, k, out.as_deref(), format),
        Command::Split { file, v, j, out } => cmd_split(&file, v, j, out.as_deref()),
        Command::Random { n, seed, structure, out } => cmd_random(n, seed, structure, out.as_deref()),
        Command::Render { file, out } => cmd_render(&file, &out),
        Command::Action { file } => cmd_action(&file),
        Command::Digraph { a, b } => cmd_digraph(&a, &b),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
