use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use cagespec::crystal::{self, CrystalFamily, CrystalSpec, DiamondAnchor, GridAnchor};
use cagespec::fullerene::{self, verify_isomorphism, FullereneReport};
use cagespec::spectra::{self, jacobi_eigenvalues, SpectrumJson, JACOBI_MAX_SWEEPS};
use cagespec::{
    cayley_sum_graph, character_spectrum, classify, fold_construction, group_and_sumset, snf, CaySumGraph, GraphJson, IntMatrix,
    TriangleSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "cagespec", version, about = "Cayley sum graphs, (0,3,6)-fullerenes and their spectra")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct RunConfig {
    /// Output format; census defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Tolerance for comparing spectra.
    #[arg(long, global = true, default_value_t = spectra::MATCH_TOLERANCE, value_parser = positive)]
    tolerance: f64,
    /// Off-diagonal stopping threshold for the Jacobi eigensolver.
    #[arg(long, global = true, default_value_t = spectra::JACOBI_TOLERANCE, value_parser = positive)]
    eig_tolerance: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CAGESPEC_JOBS")]
    jobs: Option<usize>,
    /// Seed for randomly chosen sublattices.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form U·M·V = D of a square integer matrix.
    Snf {
        /// JSON array of rows, or `-` for stdin.
        matrix: String,
    },
    /// Build the fullerene of a triangle spec as a Cayley sum graph.
    Construct {
        #[arg(long)]
        spec: TriangleSpec,
    },
    /// Fold the triangular grid directly and compare with the Cayley sum graph.
    Fold {
        #[arg(long)]
        spec: TriangleSpec,
    },
    /// Character spectrum, checked against the Jacobi eigensolver.
    Spectrum {
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        spec: Option<TriangleSpec>,
        /// Graph JSON as written by `construct`, or `-` for stdin.
        #[arg(long)]
        graph: Option<String>,
    },
    /// Classify every spec up to the given index.
    Census {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_index: u32,
        /// Keep only the first spec of each (vertices, s, moduli, spectrum) class.
        #[arg(long)]
        dedup: bool,
    },
    /// Cayley sum graphs of the path, grid and diamond crystals.
    Crystal {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Sublattice generators as a row-major d×d list of integers in the
        /// lattice basis; random when omitted.
        #[arg(long)]
        sublattice: Option<String>,
        /// Half-turn centre for the diamond family.
        #[arg(long, value_enum, default_value = "offset")]
        a_choice: AChoice,
        /// Half-turn centre for the grid family.
        #[arg(long, value_enum, default_value = "edge")]
        grid_anchor: GridAnchorArg,
        /// Index bound for a random sublattice.
        #[arg(long, default_value_t = 64)]
        max_index: i64,
    },
    /// Run every invariant on the census; exits 3 on any violation.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_index: u32,
        /// Largest graph also checked with the Jacobi eigensolver.
        #[arg(long, default_value_t = 48)]
        oracle_index: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Path,
    Grid,
    Diamond,
}

#[derive(Clone, Copy, ValueEnum)]
enum AChoice {
    Corner,
    Offset,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridAnchorArg {
    Edge,
    Cell,
}

fn positive(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive number".into()),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
    /// Computation or invariant failure: exit code 3.
    Compute(String),
}

type CliResult<T> = Result<T, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl ToString) -> Failure {
    Failure::Compute(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(jobs) = cli.run.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let run = &cli.run;
    match &cli.command {
        Command::Snf { matrix } => cmd_snf(run, matrix),
        Command::Construct { spec } => cmd_construct(run, spec),
        Command::Fold { spec } => cmd_fold(run, spec),
        Command::Spectrum { spec, graph } => cmd_spectrum(run, spec.as_ref(), graph.as_deref()),
        Command::Census { max_index, dedup } => cmd_census(run, *max_index, *dedup),
        Command::Crystal { family, d, sublattice, a_choice, grid_anchor, max_index } => {
            let family = match family {
                FamilyArg::Path => CrystalFamily::Path,
                FamilyArg::Grid => CrystalFamily::Grid(match grid_anchor {
                    GridAnchorArg::Edge => GridAnchor::EdgeMidpoint,
                    GridAnchorArg::Cell => GridAnchor::CellCenter,
                }),
                FamilyArg::Diamond => CrystalFamily::Diamond(match a_choice {
                    AChoice::Corner => DiamondAnchor::Corner,
                    AChoice::Offset => DiamondAnchor::Offset,
                }),
            };
            let d = if matches!(family, CrystalFamily::Path) { 1 } else { *d };
            cmd_crystal(run, family, d, sublattice.as_deref(), *max_index)
        }
        Command::Verify { max_index, oracle_index } => cmd_verify(run, *max_index, *oracle_index),
    }
}

fn read_input(arg: &str) -> CliResult<String> {
    if arg == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(usage)?;
        Ok(text)
    } else {
        Ok(arg.to_owned())
    }
}

fn emit(text: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(compute)
}

fn emit_json(value: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(compute)?;
    text.push('\n');
    emit(&text)
}

fn emit_csv<R: Serialize>(header: &[&str], rows: &[R]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(io::stdout().lock());
    w.write_record(header).map_err(compute)?;
    for row in rows {
        w.serialize(row).map_err(compute)?;
    }
    w.flush().map_err(compute)
}

/// `x` to 12 significant digits, trailing zeros dropped.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let decimals = (11 - x.abs().log10().floor() as i32).max(0) as usize;
    let text = format!("{x:.decimals$}");
    let text = if text.contains('.') { text.trim_end_matches('0').trim_end_matches('.') } else { &text };
    if text == "-0" { "0".into() } else { text.to_owned() }
}

fn group_name(moduli: &[i64]) -> String {
    if moduli.is_empty() {
        return "trivial".into();
    }
    moduli.iter().map(|n| format!("Z_{n}")).collect::<Vec<_>>().join(" x ")
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

// ---------------------------------------------------------------- snf

#[derive(Serialize)]
struct SnfOut {
    #[serde(rename = "U")]
    u: IntMatrix,
    #[serde(rename = "V")]
    v: IntMatrix,
    #[serde(rename = "D")]
    d: IntMatrix,
    invariant_factors: Vec<i64>,
    singular: bool,
}

fn cmd_snf(run: &RunConfig, matrix: &str) -> CliResult<()> {
    let m: IntMatrix = serde_json::from_str(&read_input(matrix)?).map_err(|e| usage(format!("matrix: {e}")))?;
    let dec = snf(&m).map_err(compute)?;
    dec.check(&m).map_err(compute)?;
    let out = SnfOut { invariant_factors: dec.invariant_factors(), singular: dec.is_singular(), u: dec.u, v: dec.v, d: dec.d };
    match run.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&out),
        Format::Csv => emit_csv(&["invariant_factors", "singular"], &[(join(&out.invariant_factors), out.singular)]),
        Format::Human => {
            let mut text = String::new();
            for (name, m) in [("U", &out.u), ("V", &out.v), ("D", &out.d)] {
                let _ = writeln!(text, "{name} = {:?}", m.rows());
            }
            let _ = writeln!(text, "invariant factors: {:?}{}", out.invariant_factors, if out.singular { " (singular)" } else { "" });
            emit(&text)
        }
    }
}

// ---------------------------------------------------------- construct

const CENSUS_HEADER: [&str; 13] =
    ["p", "q", "r", "s", "p1", "p2", "n_vertices", "semiedges", "f3", "f6", "moduli", "m_canonical", "spectral_radius"];

#[derive(Serialize)]
struct CensusRow {
    p: i64,
    q: i64,
    r: i64,
    s: i64,
    p1: i64,
    p2: i64,
    n_vertices: usize,
    semiedges: u32,
    f3: u32,
    f6: u32,
    moduli: String,
    m_canonical: String,
    spectral_radius: String,
}

impl From<&FullereneReport> for CensusRow {
    fn from(r: &FullereneReport) -> Self {
        let t = r.spec;
        CensusRow {
            p: t.p,
            q: t.q,
            r: t.r,
            s: t.s,
            p1: t.p1,
            p2: t.p2,
            n_vertices: r.vertex_count,
            semiedges: r.census.s,
            f3: r.census.f3,
            f6: r.census.f6,
            moduli: join(&r.moduli),
            m_canonical: join(&r.spectrum.m_canonical),
            spectral_radius: sig12(r.spectrum.spectral_radius()),
        }
    }
}

fn human_report(r: &FullereneReport) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "spec            {}", r.spec);
    let _ = writeln!(text, "group           {}", group_name(&r.moduli));
    let _ = writeln!(text, "sum set         {:?}", r.sum_set);
    let _ = writeln!(text, "vertices        {}", r.vertex_count);
    let _ = writeln!(text, "faces           {} triangles, {} hexagons, {} semiedges", r.census.f3, r.census.f6, r.census.s);
    let _ = writeln!(text, "case            ({})", r.case.letter());
    let _ = writeln!(text, "M               {:?}", r.spectrum.m_canonical);
    let _ = writeln!(text, "spectral radius {}", sig12(r.spectrum.spectral_radius()));
    text
}

fn cmd_construct(run: &RunConfig, spec: &TriangleSpec) -> CliResult<()> {
    let report = classify(spec).map_err(compute)?;
    match run.format.unwrap_or(Format::Json) {
        Format::Json => {
            let (q, s) = group_and_sumset(spec).map_err(compute)?;
            emit_json(&cayley_sum_graph(q.target(), &s).map_err(compute)?.to_json())
        }
        Format::Csv => emit_csv(&CENSUS_HEADER, &[CensusRow::from(&report)]),
        Format::Human => emit(&human_report(&report)),
    }
}

// --------------------------------------------------------------- fold

#[derive(Serialize)]
struct FoldOut {
    spec: String,
    vertex_count: usize,
    /// Up-triangle `U(i, j)` standing for each vertex.
    representatives: Vec<(i64, i64)>,
    /// Group element of each vertex under the quotient map.
    labels: Vec<Vec<i64>>,
    edges: Vec<[usize; 3]>,
    semiedges: Vec<u32>,
    isomorphic: bool,
}

fn cmd_fold(run: &RunConfig, spec: &TriangleSpec) -> CliResult<()> {
    let folded = fold_construction(spec).map_err(compute)?;
    let (q, s) = group_and_sumset(spec).map_err(compute)?;
    let isomorphic = verify_isomorphism(&folded, &q, &s).map_err(compute)?;
    let out = FoldOut {
        spec: spec.to_string(),
        vertex_count: folded.vertex_count(),
        representatives: folded.representatives().to_vec(),
        labels: folded.labels(&q).map_err(compute)?.iter().map(|e| e.coords().to_vec()).collect(),
        edges: folded.edges().iter().map(|(&(u, v), &m)| [u, v, m as usize]).collect(),
        semiedges: folded.semiedge_counts().to_vec(),
        isomorphic,
    };
    match run.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&out)?,
        Format::Csv => {
            let rows: Vec<_> = (0..out.vertex_count)
                .map(|v| (v, out.representatives[v].0, out.representatives[v].1, join(&out.labels[v]), out.semiedges[v]))
                .collect();
            emit_csv(&["vertex", "i", "j", "label", "semiedges"], &rows)?
        }
        Format::Human => emit(&format!(
            "{} vertices, {} edges, {} semiedges; isomorphic to the Cayley sum graph: {}\n",
            out.vertex_count,
            out.edges.iter().map(|e| e[2]).sum::<usize>(),
            folded.semiedge_total(),
            isomorphic
        ))?,
    }
    if isomorphic {
        Ok(())
    } else {
        Err(compute("folded graph is not isomorphic to the Cayley sum graph"))
    }
}

// ----------------------------------------------------------- spectrum

#[derive(Serialize)]
struct SpectrumOut {
    #[serde(flatten)]
    spectrum: SpectrumJson,
    spectral_radius: f64,
    oracle_match: bool,
}

fn spectrum_of(run: &RunConfig, graph: &CaySumGraph) -> CliResult<SpectrumOut> {
    let partition = character_spectrum(graph);
    let adj = graph.adjacency();
    let numeric = jacobi_eigenvalues(adj.order(), adj.to_f64(), run.eig_tolerance, JACOBI_MAX_SWEEPS).map_err(compute)?;
    let full = partition.full();
    let m: Vec<f64> = partition.m_canonical.iter().map(|&x| x as f64).collect();
    let oracle_match = spectra::spectra_match(&full, &numeric, run.tolerance) && spectra::spectrum_is_paired(&full, &m, run.tolerance);
    Ok(SpectrumOut { spectral_radius: partition.spectral_radius(), spectrum: partition.to_json(), oracle_match })
}

fn emit_spectrum(run: &RunConfig, out: &SpectrumOut) -> CliResult<()> {
    match run.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(out)?,
        Format::Csv => {
            let rows: Vec<_> = out.spectrum.full.iter().map(|&x| (sig12(x),)).collect();
            emit_csv(&["eigenvalue"], &rows)?
        }
        Format::Human => {
            let s = &out.spectrum;
            emit(&format!(
                "s = {}\nM = {:?} (raw {:?})\n±L = {}\nspectral radius {}\noracle match: {}\n",
                s.s,
                s.m_canonical,
                s.m_raw,
                s.paired.iter().map(|&x| sig12(x)).collect::<Vec<_>>().join(" "),
                sig12(out.spectral_radius),
                out.oracle_match
            ))?
        }
    }
    if out.oracle_match {
        Ok(())
    } else {
        Err(compute("character spectrum disagrees with the numeric eigensolver"))
    }
}

fn cmd_spectrum(run: &RunConfig, spec: Option<&TriangleSpec>, graph: Option<&str>) -> CliResult<()> {
    let graph = match (spec, graph) {
        (Some(spec), _) => {
            let (q, s) = group_and_sumset(spec).map_err(compute)?;
            cayley_sum_graph(q.target(), &s).map_err(compute)?
        }
        (None, Some(path)) => {
            let text = if path == "-" { read_input("-")? } else { std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))? };
            let json: GraphJson = serde_json::from_str(&text).map_err(|e| usage(format!("graph: {e}")))?;
            json.to_graph().map_err(usage)?
        }
        (None, None) => return Err(usage("need --spec or --graph")),
    };
    emit_spectrum(run, &spectrum_of(run, &graph)?)
}

// ------------------------------------------------------------- census

fn cmd_census(run: &RunConfig, max_index: u32, dedup: bool) -> CliResult<()> {
    let specs: Vec<TriangleSpec> = fullerene::enumerate_specs(max_index).collect();
    let results: Vec<_> = specs.par_iter().map(classify).collect();

    let mut seen = HashSet::new();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (spec, result) in specs.iter().zip(results) {
        match result {
            Ok(report) => {
                if !dedup || seen.insert(report.dedup_key()) {
                    reports.push(report);
                }
            }
            Err(e) => failures.push(format!("{spec}: {e}")),
        }
    }

    match run.format.unwrap_or(Format::Csv) {
        Format::Csv => emit_csv(&CENSUS_HEADER, &reports.iter().map(CensusRow::from).collect::<Vec<_>>())?,
        Format::Json => emit_json(&reports.iter().map(CensusRow::from).collect::<Vec<_>>())?,
        Format::Human => emit(&reports.iter().map(human_report).collect::<Vec<_>>().join("\n"))?,
    }

    let mut counts = [0usize; 4];
    for r in &reports {
        counts[(r.case.letter() as u8 - b'a') as usize] += 1;
    }
    eprintln!(
        "{} specs, {} rows; case a: {}, b: {}, c: {}, d: {}; {} violations",
        specs.len(),
        reports.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        failures.len()
    );
    for f in &failures {
        eprintln!("  {f}");
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(compute(format!("{} specs failed", failures.len())))
    }
}

// ------------------------------------------------------------ crystal

#[derive(Serialize)]
struct CrystalOut {
    spec: CrystalSpec,
    graph: GraphJson,
    spectrum: SpectrumOut,
}

fn parse_sublattice(text: &str, d: usize) -> CliResult<IntMatrix> {
    let nums = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| usage(format!("sublattice entry {t:?}: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    if nums.len() != d * d {
        return Err(usage(format!("sublattice needs {} entries for d = {d}, got {}", d * d, nums.len())));
    }
    IntMatrix::from_rows(&nums.chunks(d).collect::<Vec<_>>()).map_err(usage)
}

fn cmd_crystal(run: &RunConfig, family: CrystalFamily, d: usize, sublattice: Option<&str>, max_index: i64) -> CliResult<()> {
    if d == 0 || d > crystal::MAX_DIMENSION {
        return Err(usage(format!("d must be between 1 and {}", crystal::MAX_DIMENSION)));
    }
    let l = match sublattice {
        Some(text) => parse_sublattice(text, d)?,
        None => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(run.seed);
            crystal::random_sublattice(&mut rng, d, max_index.max(1))
        }
    };
    let spec = family.build(d, l).map_err(usage)?;
    let (_, _, graph) = crystal::crystal_cayley(&spec).map_err(compute)?;
    let spectrum = spectrum_of(run, &graph)?;
    match run.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&CrystalOut { spec, graph: graph.to_json(), spectrum }),
        Format::Csv | Format::Human => {
            emit(&format!(
                "{} vertices, {}-regular, {} semiedges, group {}\n",
                graph.vertex_count(),
                graph.regularity(),
                graph.semiedge_total(),
                group_name(graph.group().moduli())
            ))?;
            emit_spectrum(&RunConfig { format: Some(Format::Human), ..*run }, &spectrum)
        }
    }
}

// ------------------------------------------------------------- verify

fn cmd_verify(run: &RunConfig, max_index: u32, oracle_index: u32) -> CliResult<()> {
    let result = fullerene::verify_census(max_index, oracle_index);
    match run.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&result)?,
        Format::Csv => {
            let rows: Vec<_> = result.violations.iter().map(|v| (v.spec.to_string(), v.check, v.detail.clone())).collect();
            emit_csv(&["spec", "check", "detail"], &rows)?
        }
        Format::Human => {
            let mut text = format!(
                "{} specs checked ({} with the eigensolver); cases {:?}; {} violations\n",
                result.specs_checked,
                result.oracle_checked,
                result.case_counts,
                result.violations.len()
            );
            for v in &result.violations {
                let _ = writeln!(text, "  {} {}: {}", v.spec, v.check, v.detail);
            }
            emit(&text)?
        }
    }
    if result.passed() {
        Ok(())
    } else {
        Err(compute(format!("{} violations", result.violations.len())))
    }
}
