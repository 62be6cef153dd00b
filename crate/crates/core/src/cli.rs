//! The `ihc` command line: argument parsing, run reports, and their text and JSON renderings.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::{is_pseudomanifold, SimplicialComplex};
use crate::error::{Error, Result, ResultExt};
use crate::format::{export_complex_file, parse_complex_file};
use crate::gf2::MatrixRows;
use crate::ih::{forget_matrix, homology, homology_relative, ih_groups, ih_groups_relative};
use crate::models::{self, Expectation, ModelKind, Quantity};
use crate::pairing::{Presentations, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::sequences::{check_exact, les_pair, star_obstruction_report, ExactnessReport, ObstructionReport, PairingRows, SequenceRows};
use crate::strata::{self, Perversity, Stratification};

/// Version tag of the JSON report layout, bumped on any incompatible change.
pub const SCHEMA: &str = "ihc-run-report/1";

#[derive(Parser, Debug)]
#[command(name = "ihc", version, about = "Z/2 intersection homology of stratified simplicial pseudomanifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the bundled models.
    Models(OutputArgs),
    /// Ordinary homology over Z/2 and the Euler characteristic.
    Homology(InputArgs),
    /// Intersection homology and its Euler characteristic.
    Ih(InputArgs),
    /// Intersection pairing matrices in complementary degrees.
    Pairing(InputArgs),
    /// Long exact sequence of a pair, or of the cone on a closed complex against its base.
    Les(InputArgs),
    /// Duality test on the cone over a closed even-dimensional complex.
    Obstruction(InputArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// Print the JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Record wall-clock time in the report (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Bundled model name, e.g. `pinched_rp2` or `cone_of:torus`.
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    pub model: Option<String>,
    /// Complex file to read.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// `zero` or `list:p1,p2,...` with p(c) the c-th entry.
    #[arg(long, default_value = "zero")]
    pub perversity: String,
    /// Restrict to one degree.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Re-representation trials per pairing.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl InputArgs {
    pub fn for_model(name: &str) -> Self {
        InputArgs {
            model: Some(name.to_string()),
            file: None,
            perversity: "zero".into(),
            degree: None,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            output: OutputArgs::default(),
        }
    }
}

pub fn parse_perversity(text: &str) -> Result<Perversity> {
    if text == "zero" {
        return Ok(Perversity::zero());
    }
    let list = text
        .strip_prefix("list:")
        .ok_or_else(|| Error::InvalidPerversity(format!("expected `zero` or `list:p1,p2,...`, got `{text}`")))?;
    let values = list
        .split(',')
        .map(|v| v.trim().parse::<i64>().map_err(|_| Error::InvalidPerversity(format!("`{v}` is not an integer"))))
        .collect::<Result<Vec<_>>>()?;
    Perversity::from_values(values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumInfo {
    pub name: String,
    pub dim: usize,
    pub codim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputInfo {
    pub source: String,
    /// SHA-256 of the input text; for models, of their exported file form.
    pub digest: String,
    pub kind: ModelKind,
    pub dim: usize,
    pub counts: Vec<usize>,
    pub strata: Vec<StratumInfo>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub group: String,
    pub betti: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerEntry {
    pub name: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: MatrixRows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub name: String,
    pub kind: ModelKind,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: Vec<String>,
    pub input: Option<InputInfo>,
    pub perversity: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub betti: Vec<BettiTable>,
    pub euler: Vec<EulerEntry>,
    pub matrices: Vec<NamedMatrix>,
    pub pairings: Vec<PairingRows>,
    pub sequence: Option<SequenceRows>,
    pub exactness: Option<ExactnessReport>,
    pub obstruction: Option<ObstructionReport>,
    pub models: Vec<ModelSummary>,
    pub findings: Vec<String>,
    pub verdicts: Vec<NamedVerdict>,
    pub overall: Verdict,
    /// Microseconds, present only when requested.
    pub timing_us: Option<u64>,
}

impl RunReport {
    fn new(command: Vec<String>) -> Self {
        RunReport {
            schema: SCHEMA.into(),
            command,
            input: None,
            perversity: None,
            seed: None,
            trials: None,
            betti: Vec::new(),
            euler: Vec::new(),
            matrices: Vec::new(),
            pairings: Vec::new(),
            sequence: None,
            exactness: None,
            obstruction: None,
            models: Vec::new(),
            findings: Vec::new(),
            verdicts: Vec::new(),
            overall: Verdict::NotApplicable,
            timing_us: None,
        }
    }

    fn verdict(&mut self, name: &str, verdict: Verdict, detail: impl Into<String>) {
        self.verdicts.push(NamedVerdict { name: name.into(), verdict, detail: detail.into() });
    }

    fn finish(&mut self) {
        self.overall = if self.verdicts.iter().any(|v| v.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self.verdicts.iter().any(|v| v.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::NotApplicable
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// A resolved input: the complex, its stratification, and a boundary when it has one.
pub struct Input {
    pub source: String,
    pub digest: String,
    pub complex: SimplicialComplex,
    pub strat: Stratification,
    pub kind: ModelKind,
    pub boundary: Option<SimplicialComplex>,
    pub expected: Vec<Expectation>,
}

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn load_input(args: &InputArgs) -> Result<Input> {
    if let Some(name) = &args.model {
        let m = models::model(name)?;
        let digest = digest(&export_complex_file(&m.complex, &m.strat, &m.name));
        return Ok(Input {
            source: format!("model:{name}"),
            digest,
            complex: m.complex,
            strat: m.strat,
            kind: m.kind,
            boundary: m.boundary,
            expected: m.expected,
        });
    }
    let path = args.file.as_ref().ok_or_else(|| Error::Inconsistent("no input given".into()))?;
    let text = std::fs::read_to_string(path).map_err(Error::from).context(format!("reading {}", path.display()))?;
    let (complex, strat) = parse_complex_file(&text).context(path.display().to_string())?;
    let report = is_pseudomanifold(&complex);
    let (kind, boundary) = if report.is_closed() || !report.is_pseudomanifold() {
        (ModelKind::Closed, None)
    } else {
        (ModelKind::Pair, Some(models::boundary_complex(&complex)))
    };
    Ok(Input { source: format!("file:{}", path.display()), digest: digest(&text), complex, strat, kind, boundary, expected: Vec::new() })
}

fn input_info(input: &Input) -> InputInfo {
    let s = &input.strat;
    InputInfo {
        source: input.source.clone(),
        digest: input.digest.clone(),
        kind: input.kind,
        dim: input.complex.dim(),
        counts: input.complex.counts(),
        strata: s
            .strata()
            .iter()
            .enumerate()
            .map(|(i, st)| StratumInfo { name: st.name.clone(), dim: st.dim, codim: s.codim(i) })
            .collect(),
    }
}

fn degree_filter(args: &InputArgs, n: usize) -> Result<Vec<usize>> {
    match args.degree {
        Some(d) if d > n => Err(Error::DegreeOutOfRange { degree: d, dim: n }),
        Some(d) => Ok(vec![d]),
        None => Ok((0..=n).collect()),
    }
}

fn check_expectations(report: &mut RunReport, expected: &[Expectation], computed: &[(Quantity, &str)]) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for e in expected {
        for (q, label) in computed {
            if std::mem::discriminant(q) == std::mem::discriminant(&e.quantity) {
                checked += 1;
                if *q != e.quantity {
                    failures.push(format!("{label}: expected {:?}, computed {:?}", e.quantity, q));
                }
            }
        }
    }
    if checked == 0 {
        report.verdict("expectations", Verdict::NotApplicable, "no stored expectation for these quantities");
    } else if failures.is_empty() {
        report.verdict("expectations", Verdict::Pass, format!("{checked} stored values reproduced"));
    } else {
        report.verdict("expectations", Verdict::Fail, failures.join("; "));
    }
}

fn run_models(report: &mut RunReport) -> Result<()> {
    for name in models::all_names() {
        let m = models::model(&name)?;
        report.models.push(ModelSummary { name, kind: m.kind, note: m.note });
    }
    Ok(())
}

fn run_homology(report: &mut RunReport, input: &Input) -> Result<()> {
    let h = homology(&input.complex)?;
    report.betti.push(BettiTable { group: "H".into(), betti: h.betti() });
    report.euler.push(EulerEntry { name: "chi".into(), value: h.euler_characteristic() });
    let mut computed = vec![(Quantity::Homology(h.betti()), "H"), (Quantity::Euler(h.euler_characteristic()), "chi")];
    if let Some(b) = &input.boundary {
        let r = homology_relative(&input.complex, b)?;
        report.betti.push(BettiTable { group: "H(K,L)".into(), betti: r.betti() });
        computed.push((Quantity::RelativeHomology(r.betti()), "H(K,L)"));
    }
    check_expectations(report, &input.expected, &computed);
    Ok(())
}

fn run_ih(report: &mut RunReport, input: &Input, p: &Perversity, args: &InputArgs) -> Result<()> {
    let ih = ih_groups(&input.complex, &input.strat, p)?;
    let h = homology(&input.complex)?;
    report.betti.push(BettiTable { group: "IH".into(), betti: ih.betti() });
    report.euler.push(EulerEntry { name: "ih_chi".into(), value: ih.euler_characteristic() });
    for i in degree_filter(args, input.complex.dim())? {
        report.matrices.push(NamedMatrix { name: format!("forget_{i}"), matrix: MatrixRows::from(&forget_matrix(&ih, &h, i)?) });
    }
    if let Some(b) = &input.boundary {
        let r = ih_groups_relative(&input.complex, b, &input.strat, p)?;
        report.betti.push(BettiTable { group: "IH(K,L)".into(), betti: r.betti() });
    }
    if p.is_zero() {
        let computed = [
            (Quantity::IntersectionHomology(ih.betti()), "IH"),
            (Quantity::IntersectionEuler(ih.euler_characteristic()), "ih_chi"),
        ];
        check_expectations(report, &input.expected, &computed);
    } else {
        report.verdict("expectations", Verdict::NotApplicable, "stored values are for the zero perversity");
    }
    Ok(())
}

fn run_pairing(report: &mut RunReport, input: &Input, p: &Perversity, args: &InputArgs) -> Result<()> {
    let pres = match (&input.boundary, is_pseudomanifold(&input.complex).is_closed()) {
        (_, true) => Presentations::closed(&input.complex, &input.strat, p)?,
        (Some(b), false) => Presentations::pair(&input.complex, b, &input.strat, p)?,
        (None, false) => return Err(Error::NotPseudomanifold("pairings need a closed pseudomanifold or a pair".into())),
    };
    let mut stable = true;
    for i in degree_filter(args, input.complex.dim())? {
        match pres.pairing(i, args.seed, args.trials) {
            Ok(pm) => {
                if !pm.nonsingular {
                    report.findings.push(format!("pairing in degrees ({}, {}) is singular", pm.degrees.0, pm.degrees.1));
                }
                report.pairings.push(PairingRows::from(&pm));
            }
            Err(e @ Error::RepresentativeInstability { .. }) => {
                stable = false;
                report.findings.push(format!("degree {i}: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    report.verdict("representative_stability", Verdict::of(stable), format!("{} trials per degree", args.trials));
    Ok(())
}

fn pair_for_les(input: &Input) -> Result<(SimplicialComplex, SimplicialComplex, Stratification)> {
    match &input.boundary {
        Some(b) => Ok((input.complex.clone(), b.clone(), input.strat.clone())),
        None => {
            let (ck, cs, _) = strata::cone(&input.complex, &input.strat);
            Ok((ck, input.complex.clone(), cs))
        }
    }
}

fn run_les(report: &mut RunReport, input: &Input, p: &Perversity) -> Result<()> {
    let (k, l, s) = pair_for_les(input)?;
    if input.boundary.is_none() {
        report.findings.push("closed input: sequence of its cone against the base".into());
    }
    let seq = les_pair(&k, &l, &s, p)?;
    let ex = check_exact(&seq);
    let failing = ex.failing();
    report.verdict(
        "exactness",
        Verdict::of(ex.exact),
        if failing.is_empty() { format!("{} junctions", ex.junctions.len()) } else { format!("fails at positions {failing:?}") },
    );
    report.sequence = Some(seq.to_rows());
    report.exactness = Some(ex);
    Ok(())
}

fn run_obstruction(report: &mut RunReport, input: &Input, p: &Perversity, args: &InputArgs) -> Result<()> {
    let r = star_obstruction_report(&input.complex, &input.strat, p, args.seed, args.trials)?;
    report.betti.push(BettiTable { group: "IH(link)".into(), betti: r.link_ih_betti.clone() });
    report.betti.push(BettiTable { group: "IH^c(star)".into(), betti: r.star_compact_betti.clone() });
    report.betti.push(BettiTable { group: "IH^cl(star)".into(), betti: r.star_closed_betti.clone() });
    report.euler.push(EulerEntry { name: "ih_chi_link".into(), value: r.link_ih_euler });
    report.verdict("exactness", Verdict::of(r.exactness.exact), format!("{} junctions", r.exactness.junctions.len()));
    report.verdict("commutativity", Verdict::of(r.commutativity.commutes), format!("{} squares", r.commutativity.squares.len()));
    let odd = r.link_ih_euler % 2 != 0;
    let consistent = !odd || !r.parity.failing.is_empty();
    report.verdict(
        "parity_cross_check",
        Verdict::of(consistent),
        format!("Iχ(link) = {}, {} failing middle verticals", r.link_ih_euler, r.parity.failing.len()),
    );
    report.findings.push(r.parity.outcome.describe().to_string());
    if !r.parity.failing.is_empty() {
        report.findings.push(format!("non-invertible verticals at {}", r.parity.failing.join(", ")));
    }
    report.obstruction = Some(r);
    Ok(())
}

/// Runs one command. `echo` is recorded verbatim in the report.
pub fn run(command: &Command, echo: Vec<String>) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(echo);
    let timing = match command {
        Command::Models(out) => {
            run_models(&mut report)?;
            out.timing
        }
        Command::Homology(a) | Command::Ih(a) | Command::Pairing(a) | Command::Les(a) | Command::Obstruction(a) => {
            let input = load_input(a)?;
            let p = parse_perversity(&a.perversity)?;
            report.input = Some(input_info(&input));
            report.perversity = Some(p.describe());
            match command {
                Command::Homology(_) => run_homology(&mut report, &input)?,
                Command::Ih(_) => run_ih(&mut report, &input, &p, a)?,
                Command::Pairing(_) => {
                    report.seed = Some(a.seed);
                    report.trials = Some(a.trials);
                    run_pairing(&mut report, &input, &p, a)?
                }
                Command::Les(_) => run_les(&mut report, &input, &p)?,
                Command::Obstruction(_) => {
                    report.seed = Some(a.seed);
                    report.trials = Some(a.trials);
                    run_obstruction(&mut report, &input, &p, a)?
                }
                Command::Models(_) => unreachable!(),
            }
            a.output.timing
        }
    };
    report.finish();
    if timing {
        report.timing_us = Some(start.elapsed().as_micros() as u64);
    }
    Ok(report)
}

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

fn fmt_matrix(m: &MatrixRows) -> String {
    if m.rows == 0 || m.cols == 0 {
        return format!("[{}x{}]", m.rows, m.cols);
    }
    let rows: Vec<String> = m.entries.iter().map(|r| r.iter().map(u8::to_string).collect::<String>()).collect();
    format!("[{}]", rows.join(" "))
}

pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    if let Some(i) = &r.input {
        let _ = writeln!(out, "input {} (dim {}, counts {}, sha256 {})", i.source, i.dim, fmt_vec(&i.counts), &i.digest[..12]);
        let strata: Vec<String> = i.strata.iter().map(|s| format!("{} (codim {})", s.name, s.codim)).collect();
        let _ = writeln!(out, "strata {}", strata.join(", "));
    }
    if let Some(p) = &r.perversity {
        let _ = writeln!(out, "perversity {p}");
    }
    for m in &r.models {
        let _ = writeln!(out, "{:<28} {:<14} {}", m.name, format!("{:?}", m.kind).to_lowercase(), m.note);
    }
    for b in &r.betti {
        let _ = writeln!(out, "betti {:<12} {}", b.group, fmt_vec(&b.betti));
    }
    for e in &r.euler {
        let _ = writeln!(out, "{:<18} {}", e.name, e.value);
    }
    for m in &r.matrices {
        let _ = writeln!(out, "{:<18} {}", m.name, fmt_matrix(&m.matrix));
    }
    for p in &r.pairings {
        let _ = writeln!(
            out,
            "pairing ({},{}) {} {}",
            p.degrees.0,
            p.degrees.1,
            fmt_matrix(&p.matrix),
            if p.nonsingular { "nonsingular" } else { "singular" }
        );
    }
    if let (Some(seq), Some(ex)) = (&r.sequence, &r.exactness) {
        for (k, s) in seq.spaces.iter().enumerate() {
            let j = ex.junctions.iter().find(|j| j.position == k);
            let mark = match j {
                Some(j) if j.exact => "exact",
                Some(_) => "NOT EXACT",
                None => "",
            };
            let _ = writeln!(out, "  {:<14} dim {:<3} {mark}", s.label, s.dim);
        }
    }
    if let Some(o) = &r.obstruction {
        for v in &o.verticals {
            if v.rows + v.cols > 0 {
                let _ = writeln!(out, "vertical {:<14} {}x{} {}", v.label, v.rows, v.cols, if v.invertible { "invertible" } else { "NOT invertible" });
            }
        }
        let _ = writeln!(out, "middle degree {}: b = {}, dim ker α = {}", o.parity.middle_degree, o.parity.middle_betti, o.parity.dim_ker_alpha);
    }
    for f in &r.findings {
        let _ = writeln!(out, "finding: {f}");
    }
    for v in &r.verdicts {
        let _ = writeln!(out, "verdict {:<26} {:<15} {}", v.name, format!("{:?}", v.verdict).to_lowercase(), v.detail);
    }
    let _ = writeln!(out, "overall {}", format!("{:?}", r.overall).to_lowercase());
    if let Some(t) = r.timing_us {
        let _ = writeln!(out, "time {:.3} s", t as f64 / 1e6);
    }
    out
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let json = match &cli.command {
        Command::Models(o) => o.json,
        Command::Homology(a) | Command::Ih(a) | Command::Pairing(a) | Command::Les(a) | Command::Obstruction(a) => a.output.json,
    };
    match run(&cli.command, args.into_iter().skip(1).collect()) {
        Ok(report) => {
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", render_text(&report));
            }
            if report.overall == Verdict::Fail {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("ihc: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perversity_syntax() {
        assert!(parse_perversity("zero").unwrap().is_zero());
        assert_eq!(parse_perversity("list:0,1").unwrap().values(), &[0, 1]);
        assert!(parse_perversity("list:a").is_err());
        assert!(parse_perversity("middle").is_err());
        assert!(parse_perversity("list:-1").is_err());
    }

    #[test]
    fn torus_ih_report() {
        let r = run(&Command::Ih(InputArgs::for_model("torus")), vec!["ih".into()]).unwrap();
        assert_eq!(r.betti[0].betti, vec![1, 2, 1]);
        assert_eq!(r.overall, Verdict::Pass);
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn les_on_cone_of_sphere() {
        let r = run(&Command::Les(InputArgs::for_model("cone_of:sphere2")), vec![]).unwrap();
        assert!(r.exactness.unwrap().exact);
        assert_eq!(r.overall, Verdict::Pass);
    }

    #[test]
    fn unknown_model_is_an_error() {
        assert!(run(&Command::Homology(InputArgs::for_model("nope")), vec![]).is_err());
    }
}
