//! Command line front end: validate, analyze, normalize, generate, fuzz.
//!
//! All commands speak the `.nla` format from [`crate::dsl`].  `analyze
//! --json` emits the [`AnalysisReport`] schema with a fixed field order, so
//! identical inputs produce byte-identical output.  Exit codes: 0 success,
//! 1 invalid input or unmet precondition, 2 internal consistency failure
//! (a theorem-backed assertion fired, which is always a bug here).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::algebra::{self, CoframeAlgebra, ValidationError};
use crate::dsl;
use crate::families::{fuzz_transform, gen_family, Family, FamilyTag, FuzzPlan, TransformKind};
use crate::maxn::{self, AdmissibleCoframe, Flag, MaxnError};
use crate::series::classify;

/// Dimension sequences of the six chains, one entry per term starting at
/// index 0.  `V`, `lower_central` and `upper_central` are complexified
/// dimensions, `W` is a plain complex dimension, and `a`/`h` are complex
/// dimensions with respect to the complex structure (half the complexified
/// value, which is what the dimension formulas in the literature use).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DimsBlock {
    #[serde(rename = "V")]
    pub v: Vec<usize>,
    #[serde(rename = "W")]
    pub w: Vec<usize>,
    pub a: Vec<usize>,
    pub h: Vec<usize>,
    pub lower_central: Vec<usize>,
    pub upper_central: Vec<usize>,
}

/// Real dimensions for the chains where [`DimsBlock`] reports complex ones.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RealDims {
    #[serde(rename = "W")]
    pub w: Vec<usize>,
    pub a: Vec<usize>,
    pub h: Vec<usize>,
}

/// Everything `analyze` knows about one presentation.
///
/// Field order is the serialization order.  `nu_g` is null when the algebra
/// is not nilpotent, `nu_J`/`mu_J` are null when the complex structure is
/// not nilpotent, and `dpt`, `bounds_ok`, `case_tag` are null outside the
/// classes where they are defined.  Invariants: `nu_J == mu_J` whenever both
/// are present, and `b1 == dims.V[1]`.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub n: usize,
    pub valid: bool,
    pub integrable: bool,
    pub jacobi_ok: bool,
    pub nu_g: Option<usize>,
    #[serde(rename = "nu_J")]
    pub nu_j: Option<usize>,
    #[serde(rename = "mu_J")]
    pub mu_j: Option<usize>,
    #[serde(rename = "nilpotent_J")]
    pub nilpotent_j: bool,
    pub maxn: bool,
    pub dpt: Option<Vec<usize>>,
    pub dims: DimsBlock,
    pub real_dims: RealDims,
    pub b1: usize,
    pub bounds_ok: Option<bool>,
    pub algebraic_dimension: Option<usize>,
    pub case_tag: Option<String>,
    pub coframe: String,
    pub warnings: Vec<String>,
}

fn half(dims: Vec<usize>) -> Vec<usize> {
    dims.into_iter()
        .map(|d| {
            debug_assert!(d % 2 == 0, "complexified dimension must be even");
            d / 2
        })
        .collect()
}

fn doubled(dims: &[usize]) -> Vec<usize> {
    dims.iter().map(|d| 2 * d).collect()
}

/// Runs the full battery on a validated algebra and assembles the report.
pub fn analysis_report(alg: &CoframeAlgebra) -> AnalysisReport {
    let out = classify(alg);
    let report = maxn::structure_report(alg);
    let dpt = if out.classification.maxn {
        if out.classification.nu_g == Some(3) && alg.n() >= 5 {
            Some(report.dpt.iter().copied().collect::<Vec<usize>>())
        } else {
            let set = maxn::dpt(alg).expect("a MaxN algebra admits an admissible coframe");
            Some(set.into_iter().collect::<Vec<usize>>())
        }
    } else {
        None
    };
    let dims = DimsBlock {
        v: out.series.v.dims(),
        w: out.series.w.dims(),
        a: half(out.series.a.dims()),
        h: half(out.series.h.dims()),
        lower_central: out.series.descending_central.dims(),
        upper_central: out.series.ascending_central.dims(),
    };
    let real_dims = RealDims {
        w: doubled(&dims.w),
        a: doubled(&dims.a),
        h: doubled(&dims.h),
    };
    assert_eq!(report.b1, dims.v[1], "b1 must equal dim V^1");
    if let (Some(nu), Some(mu)) = (out.classification.nu_j, out.classification.mu_j) {
        assert_eq!(nu, mu, "nu_J and mu_J must agree when both are defined");
    }
    AnalysisReport {
        name: alg.name().map(str::to_owned),
        n: alg.n(),
        valid: true,
        integrable: true,
        jacobi_ok: true,
        nu_g: out.classification.nu_g,
        nu_j: out.classification.nu_j,
        mu_j: out.classification.mu_j,
        nilpotent_j: out.classification.nilpotent_j,
        maxn: out.classification.maxn,
        dpt,
        dims,
        real_dims,
        b1: report.b1,
        bounds_ok: report.bounds_ok,
        algebraic_dimension: Some(report.algebraic_dimension),
        case_tag: report.case_tag,
        coframe: alg.canonical_text(),
        warnings: out.warnings,
    }
}

/// Canonical text of a normalized coframe with the dependence flags spelled
/// out as comments.  The comments are ignored by the parser, so feeding the
/// output back through `normalize` reproduces it byte for byte.
pub fn normalized_text(adm: &AdmissibleCoframe, case_tag: Option<&str>) -> String {
    let dpt: Vec<String> = adm.dpt().iter().map(|k| k.to_string()).collect();
    let mut out = format!("# Dpt = {{{}}}\n", dpt.join(","));
    if let Some(tag) = case_tag {
        out.push_str(&format!("# case {tag}\n"));
    }
    for line in adm.base().canonical_text().lines() {
        if let Some(rest) = line.strip_prefix("d w") {
            let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
            let k: usize = digits.parse().expect("canonical equation line");
            let word = match adm.flag(k) {
                Flag::Dependent => "dependent",
                Flag::Independent => "independent",
            };
            out.push_str(&format!("{line}  # {word}\n"));
        } else {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

#[derive(Parser)]
#[command(name = "nla", version, about = "nilpotent complex structures on nilpotent Lie algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a .nla file and check integrability and the Jacobi identity
    Validate { file: PathBuf },
    /// Compute invariants, series dimensions and the structure report
    Analyze {
        file: PathBuf,
        /// Emit the machine-readable report
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a MaxN presentation in admissible form
    Normalize {
        file: PathBuf,
        /// Go all the way to a strictly admissible coframe (needs step 3, n >= 5)
        #[arg(long)]
        strict: bool,
    },
    /// Write the model algebra of one family
    Generate {
        /// Family name: I or II
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Output file (stdout when absent)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay random coframe changes and check that every invariant survives
    Fuzz {
        file: PathBuf,
        #[arg(long)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Transform pool: triangular or full-gl
        #[arg(long, default_value = "triangular")]
        kind: String,
    },
}

/// Entry point for the binary.  Returns the process exit code.
pub fn main_entry() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    std::panic::set_hook(Box::new(|info| {
        eprintln!("internal consistency failure: {info}");
    }));
    match std::panic::catch_unwind(|| run(&args)) {
        Ok(code) => code,
        Err(_) => 2,
    }
}

/// Dispatches one invocation.  `args` includes the program name.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.cmd {
        Cmd::Validate { file } => cmd_validate(&file),
        Cmd::Analyze { file, json } => cmd_analyze(&file, json),
        Cmd::Normalize { file, strict } => cmd_normalize(&file, strict),
        Cmd::Generate { family, n, output } => cmd_generate(&family, n, output.as_deref()),
        Cmd::Fuzz { file, iters, seed, kind } => cmd_fuzz(&file, iters, seed, &kind),
    }
}

fn color_enabled() -> bool {
    use std::io::IsTerminal;
    if std::env::var("NLA_COLOR").as_deref() == Ok("0") {
        return false;
    }
    std::io::stdout().is_terminal()
}

fn bold(s: &str) -> String {
    if color_enabled() {
        format!("\x1b[1m{s}\x1b[0m")
    } else {
        s.to_owned()
    }
}

fn validation_label(e: &ValidationError) -> String {
    match e {
        ValidationError::NotIntegrable { k, .. } => format!("NotIntegrable w{k}: {e}"),
        ValidationError::JacobiViolation { k, .. } => format!("JacobiViolation w{k}: {e}"),
    }
}

fn load(path: &Path) -> Result<CoframeAlgebra, i32> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return Err(1);
        }
    };
    let pres = match dsl::parse(&text) {
        Ok(pres) => pres,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return Err(1);
        }
    };
    match algebra::validate(&pres) {
        Ok(alg) => Ok(alg),
        Err(e) => {
            eprintln!("invalid: {}", validation_label(&e));
            Err(1)
        }
    }
}

fn cmd_validate(path: &Path) -> i32 {
    match load(path) {
        Ok(alg) => {
            let name = alg.name().unwrap_or("unnamed");
            println!("ok: {} (n = {})", bold(name), alg.n());
            0
        }
        Err(code) => code,
    }
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    match v {
        Some(v) => v.to_string(),
        None => "-".to_owned(),
    }
}

fn fmt_seq(label: &str, dims: &[usize]) -> String {
    let body: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    format!("  {label:<14}{}", body.join(" "))
}

fn cmd_analyze(path: &Path, json: bool) -> i32 {
    let alg = match load(path) {
        Ok(alg) => alg,
        Err(code) => return code,
    };
    let report = analysis_report(&alg);
    if json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        println!("{text}");
        return 0;
    }
    let name = report.name.as_deref().unwrap_or("unnamed");
    println!("{} (n = {})", bold(name), report.n);
    println!(
        "  nu_g = {}   nu_J = {}   mu_J = {}",
        fmt_opt(&report.nu_g),
        fmt_opt(&report.nu_j),
        fmt_opt(&report.mu_j)
    );
    println!(
        "  nilpotent_J = {}   maxn = {}",
        report.nilpotent_j, report.maxn
    );
    if let Some(dpt) = &report.dpt {
        let body: Vec<String> = dpt.iter().map(|k| k.to_string()).collect();
        println!("  Dpt = {{{}}}", body.join(","));
    }
    println!(
        "  b1 = {}   bounds_ok = {}   algebraic_dimension = {}",
        report.b1,
        fmt_opt(&report.bounds_ok),
        fmt_opt(&report.algebraic_dimension)
    );
    if let Some(tag) = &report.case_tag {
        println!("  case {tag}");
    }
    println!("{}", fmt_seq("dim V", &report.dims.v));
    println!("{}", fmt_seq("dim W", &report.dims.w));
    println!("{}", fmt_seq("dim a", &report.dims.a));
    println!("{}", fmt_seq("dim h", &report.dims.h));
    println!("{}", fmt_seq("dim g^k", &report.dims.lower_central));
    println!("{}", fmt_seq("dim g_k", &report.dims.upper_central));
    for w in &report.warnings {
        println!("  warning: {w}");
    }
    0
}

fn maxn_error(e: &MaxnError) -> i32 {
    match e {
        MaxnError::NotMaxN | MaxnError::PreconditionFailed(_) => {
            eprintln!("error: {e}");
            1
        }
        MaxnError::InternalContradiction(_) | MaxnError::StructureTheoremViolation(_) => {
            eprintln!("internal consistency failure: {e}");
            2
        }
    }
}

fn cmd_normalize(path: &Path, strict: bool) -> i32 {
    let alg = match load(path) {
        Ok(alg) => alg,
        Err(code) => return code,
    };
    let adm = match maxn::admissible_normalize(&alg) {
        Ok(adm) => adm,
        Err(e) => return maxn_error(&e),
    };
    if strict {
        let (strict_adm, report) = match maxn::strictly_admissible(&adm) {
            Ok(pair) => pair,
            Err(e) => return maxn_error(&e),
        };
        print!("{}", normalized_text(&strict_adm, report.case_tag.as_deref()));
    } else {
        print!("{}", normalized_text(&adm, None));
    }
    0
}

fn cmd_generate(family: &str, n: usize, output: Option<&Path>) -> i32 {
    let family: Family = match family.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if n == 0 {
        eprintln!("error: n must be at least 1");
        return 1;
    }
    let alg = gen_family(FamilyTag::new(family, n));
    let text = alg.canonical_text();
    match output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    0
}

/// The facts a coframe change must not move.
#[derive(Clone, Debug, PartialEq, Eq)]
struct InvariantKey {
    nu_g: Option<usize>,
    nu_j: Option<usize>,
    mu_j: Option<usize>,
    nilpotent_j: bool,
    maxn: bool,
    dims: [Vec<usize>; 6],
    dpt: Option<Vec<usize>>,
}

fn invariant_key(alg: &CoframeAlgebra) -> InvariantKey {
    let out = classify(alg);
    let dpt = if out.classification.maxn {
        let set = maxn::dpt(alg).expect("a MaxN algebra admits an admissible coframe");
        Some(set.into_iter().collect())
    } else {
        None
    };
    InvariantKey {
        nu_g: out.classification.nu_g,
        nu_j: out.classification.nu_j,
        mu_j: out.classification.mu_j,
        nilpotent_j: out.classification.nilpotent_j,
        maxn: out.classification.maxn,
        dims: [
            out.series.v.dims(),
            out.series.w.dims(),
            out.series.a.dims(),
            out.series.h.dims(),
            out.series.descending_central.dims(),
            out.series.ascending_central.dims(),
        ],
        dpt,
    }
}

fn first_divergence(base: &InvariantKey, other: &InvariantKey) -> Option<&'static str> {
    if base.nu_g != other.nu_g {
        return Some("nu_g");
    }
    if base.nu_j != other.nu_j {
        return Some("nu_J");
    }
    if base.mu_j != other.mu_j {
        return Some("mu_J");
    }
    if base.nilpotent_j != other.nilpotent_j {
        return Some("nilpotent_J");
    }
    if base.maxn != other.maxn {
        return Some("maxn");
    }
    let labels = ["dims.V", "dims.W", "dims.a", "dims.h", "dims.lower_central", "dims.upper_central"];
    for (i, label) in labels.iter().enumerate() {
        if base.dims[i] != other.dims[i] {
            return Some(label);
        }
    }
    if base.dpt != other.dpt {
        return Some("dpt");
    }
    None
}

fn cmd_fuzz(path: &Path, iters: usize, seed: u64, kind: &str) -> i32 {
    let alg = match load(path) {
        Ok(alg) => alg,
        Err(code) => return code,
    };
    if iters == 0 {
        eprintln!("error: --iters must be at least 1");
        return 1;
    }
    let kind = match kind {
        "triangular" => TransformKind::Triangular,
        "full-gl" => TransformKind::FullGl,
        other => {
            eprintln!("error: unknown transform kind {other:?} (use triangular or full-gl)");
            return 1;
        }
    };
    // Self-test hook: corrupt the comparison to prove a divergence is loud.
    let corrupt = std::env::var("NLA_FUZZ_CORRUPT").as_deref() == Ok("1");
    let base = invariant_key(&alg);
    for (i, transformed) in fuzz_transform(&alg, &FuzzPlan::new(seed, iters, kind)).enumerate() {
        let mut key = invariant_key(&transformed);
        if corrupt {
            key.maxn = !key.maxn;
        }
        if let Some(field) = first_divergence(&base, &key) {
            println!("divergence at iteration {i}: {field}");
            return 2;
        }
    }
    println!("{iters}/{iters} invariant");
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::exact::{GaussianRational, Matrix};

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(re.into(), im.into())
    }

    fn model(family: Family, n: usize) -> CoframeAlgebra {
        gen_family(FamilyTag::new(family, n))
    }

    #[test]
    fn reports_for_the_model_families() {
        let report = analysis_report(&model(Family::II, 3));
        assert_eq!(report.nu_g, Some(2));
        assert_eq!(report.nu_j, Some(3));
        assert_eq!(report.mu_j, Some(3));
        assert!(report.maxn);
        assert_eq!(report.dpt, Some(vec![1, 2]));
        assert_eq!(report.case_tag, None);

        let report = analysis_report(&model(Family::I, 8));
        assert_eq!(report.dpt, Some(vec![1, 2, 3, 5, 7]));
        assert_eq!(report.b1, 6);
        assert_eq!(report.nu_g, Some(3));
        // MaxN pins dim a_k = k, so the halved sequence counts up to n.
        assert_eq!(report.dims.a, (0..=8).collect::<Vec<usize>>());
        assert_eq!(report.real_dims.a, (0..=8).map(|d| 2 * d).collect::<Vec<usize>>());
        assert_eq!(report.dims.w, (0..=8).collect::<Vec<usize>>());
        assert_eq!(report.bounds_ok, Some(true));
    }

    #[test]
    fn report_flags_the_near_miss_example() {
        let report = analysis_report(&crate::families::fixture_cfgu_example4());
        assert_eq!(report.nu_j, Some(4));
        assert!(report.nilpotent_j);
        assert!(!report.maxn);
        assert_eq!(report.dpt, None);
        assert_eq!(report.case_tag, None);
        assert_eq!(report.bounds_ok, None);
    }

    #[test]
    fn json_keys_follow_the_documented_schema() {
        let report = analysis_report(&model(Family::I, 6));
        let text = serde_json::to_string_pretty(&report).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let obj = value.as_object().unwrap();
        let expected = [
            "name", "n", "valid", "integrable", "jacobi_ok", "nu_g", "nu_J", "mu_J",
            "nilpotent_J", "maxn", "dpt", "dims", "real_dims", "b1", "bounds_ok",
            "algebraic_dimension", "case_tag", "coframe", "warnings",
        ];
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        let mut sorted = expected.to_vec();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        let dims = obj["dims"].as_object().unwrap();
        let mut dim_keys: Vec<&str> = dims.keys().map(String::as_str).collect();
        dim_keys.sort_unstable();
        assert_eq!(dim_keys, ["V", "W", "a", "h", "lower_central", "upper_central"]);
        let real = obj["real_dims"].as_object().unwrap();
        assert_eq!(real.len(), 3);
        assert_eq!(value["nu_J"], 6);
        assert_eq!(value["b1"], 5);
        assert_eq!(value["dpt"], serde_json::json!([1, 2, 3, 5]));
        assert_eq!(value["case_tag"], "penult-pair/top-split");
    }

    #[test]
    fn json_is_identical_across_independent_runs() {
        let a = serde_json::to_string_pretty(&analysis_report(&model(Family::II, 7))).unwrap();
        let b = serde_json::to_string_pretty(&analysis_report(&model(Family::II, 7))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normalized_text_carries_the_flags_and_round_trips() {
        let alg = model(Family::I, 6);
        let rows: Vec<Vec<GaussianRational>> = (0..6)
            .map(|r| {
                (0..6)
                    .map(|c| {
                        if r == c {
                            g(1, 0)
                        } else if r == 4 && c == 1 {
                            g(2, -1)
                        } else if r == 5 && c == 2 {
                            g(0, 3)
                        } else {
                            g(0, 0)
                        }
                    })
                    .collect()
            })
            .collect();
        let scrambled = alg.change_coframe(&Matrix::from_rows(rows).unwrap()).unwrap();
        let adm = maxn::admissible_normalize(&scrambled).unwrap();
        let text = normalized_text(&adm, None);
        assert!(text.starts_with("# Dpt = {1,2,3,5}\n"));
        assert!(text.contains("# dependent"));
        assert!(text.contains("# independent"));
        let reparsed = algebra::validate(&parse(&text).unwrap()).unwrap();
        let again = maxn::admissible_normalize(&reparsed).unwrap();
        assert_eq!(normalized_text(&again, None), text);
    }

    #[test]
    fn strict_text_records_the_case_tag() {
        let adm = maxn::admissible_normalize(&model(Family::II, 5)).unwrap();
        let (strict, report) = maxn::strictly_admissible(&adm).unwrap();
        let text = normalized_text(&strict, report.case_tag.as_deref());
        assert!(text.contains("# case penult-pair/top-split\n"));
        assert!(text.contains("# Dpt = {1,2,4}\n"));
    }

    #[test]
    fn invariant_key_survives_a_triangular_fuzz() {
        let alg = model(Family::I, 5);
        let base = invariant_key(&alg);
        for out in fuzz_transform(&alg, &FuzzPlan::new(3, 4, TransformKind::Triangular)) {
            let key = invariant_key(&out);
            assert_eq!(first_divergence(&base, &key), None);
        }
    }

    #[test]
    fn divergence_reporting_names_the_moved_field() {
        let base = invariant_key(&model(Family::II, 4));
        let mut other = base.clone();
        other.maxn = !other.maxn;
        assert_eq!(first_divergence(&base, &other), Some("maxn"));
        let mut other = base.clone();
        other.dims[2].push(99);
        assert_eq!(first_divergence(&base, &other), Some("dims.a"));
    }
}
