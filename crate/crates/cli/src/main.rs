//! `schurbp`: classify, solve and verify boundary interpolation problems from JSON files.
//!
//! Exit codes: 0 solvable / verified, 2 no solution, 3 verification failed,
//! 1 usage or input error.

use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use schur_bp::io::{
    classification_report, evaluation_samples, parse_function, parse_problem_file, FunctionFile, ProblemFile,
};
use schur_bp::psd::DEFAULT_TOL;
use schur_bp::verifier::{supnorm_disk, verify_asymptotics, VerificationReport};
use schur_bp::{classify, solve, synth_determinate, BoundaryJet, CaseTag, Complex64, Verdict};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NO_SOLUTION: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

const DEFAULT_SAMPLES: usize = 3;
const DEFAULT_DEPTH: usize = 40;
const SAMPLE_POINTS: usize = 64;
const SUPNORM_GRID: usize = 1024;
const SUPNORM_SLACK: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "schurbp", version)]
#[command(about = "Boundary interpolation for Schur-class functions: classify, solve, verify")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the problem has no, one, or infinitely many solutions
    Classify {
        /// Problem file
        #[arg(long)]
        input: PathBuf,
        /// Rank/definiteness tolerance (overrides the file)
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Classify and emit explicit solutions
    Solve {
        /// Problem file
        #[arg(long)]
        input: PathBuf,
        /// Number of solutions to emit in the indeterminate case (overrides the file)
        #[arg(long)]
        samples: Option<usize>,
        /// Directory for solution_<k>.json files
        #[arg(long)]
        out: Option<PathBuf>,
        /// Rank/definiteness tolerance (overrides the file)
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check a candidate function against the problem
    Verify {
        /// Problem file
        #[arg(long)]
        input: PathBuf,
        /// Function file, or a solution file written by `solve`
        #[arg(long)]
        function: PathBuf,
        /// Deepest radial sample z = t0 (1 - 2^-depth)
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Also sample rays at +-30 and +-60 degrees
        #[arg(long)]
        angles: bool,
    },
    /// Run the built-in checks on worked examples
    Selftest,
}

struct Styler {
    color: bool,
}

impl Styler {
    fn new() -> Self {
        let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
        Styler {
            color: !no_color && std::io::stdout().is_terminal(),
        }
    }

    fn status(&self, ok: bool) -> String {
        match (ok, self.color) {
            (true, true) => "\x1b[32mPASS\x1b[0m".into(),
            (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
            (true, false) => "PASS".into(),
            (false, false) => "FAIL".into(),
        }
    }
}

type CliResult = Result<u8, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_problem(path: &Path) -> Result<(ProblemFile, BoundaryJet), String> {
    let text = read(path)?;
    let file = parse_problem_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let jet = file.to_jet().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((file, jet))
}

fn check_tol(tol: f64) -> Result<f64, String> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(format!("--tol must be positive, got {tol}"))
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON value serializes"));
}

fn verdict_code(v: Verdict) -> u8 {
    if v == Verdict::NoSolution {
        EXIT_NO_SOLUTION
    } else {
        EXIT_OK
    }
}

fn cmd_classify(input: &Path, tol: Option<f64>, as_json: bool) -> CliResult {
    let (file, data) = load_problem(input)?;
    let tol = check_tol(tol.or(file.tol).unwrap_or(DEFAULT_TOL))?;
    let cls = classify(&data, tol);
    if as_json {
        print_json(&classification_report(&cls));
    } else {
        println!("verdict:  {}", cls.verdict);
        println!("case:     {}", cls.case_tag.as_str());
        println!("n:        {}", cls.n);
        println!("rank:     {}", cls.rank.map_or("-".into(), |r| r.to_string()));
        println!("u:        {}", cls.u.map_or("-".into(), |u| format!("{u:e}")));
        let mins: Vec<String> = cls.diagnostics.iter().map(|d| format!("{:e}", d.min_eig)).collect();
        println!("min eig:  [{}]", mins.join(", "));
        println!("fragile:  {}", cls.fragile);
        println!("tol:      {:e}", cls.tol);
        println!("reason:   {}", cls.reason);
    }
    Ok(verdict_code(cls.verdict))
}

fn cmd_solve(input: &Path, samples: Option<usize>, out: Option<&Path>, tol: Option<f64>, as_json: bool) -> CliResult {
    let (file, data) = load_problem(input)?;
    let tol = check_tol(tol.or(file.tol).unwrap_or(DEFAULT_TOL))?;
    let k = samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    if k == 0 {
        return Err("--samples must be at least 1".into());
    }
    let set = solve(&data, k, tol).map_err(|e| format!("solve: {e}"))?;
    let mut files = Vec::new();
    for f in &set.functions {
        let ff = FunctionFile::from_function(f).map_err(|e| e.to_string())?;
        let samples = evaluation_samples(f, data.t0(), SAMPLE_POINTS).map_err(|e| format!("sampling: {e}"))?;
        files.push(json!({ "function": ff, "samples": samples }));
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        for (i, v) in files.iter().enumerate() {
            let path = dir.join(format!("solution_{i}.json"));
            let text = serde_json::to_string_pretty(v).expect("JSON value serializes");
            fs::write(&path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    if as_json {
        print_json(&json!({
            "classification": classification_report(&set.classification),
            "family": set.family,
            "reason": set.reason,
            "solutions": files.iter().map(|v| v["function"].clone()).collect::<Vec<_>>(),
        }));
    } else {
        println!("verdict:  {}", set.classification.verdict);
        println!("case:     {}", set.classification.case_tag.as_str());
        if let Some(reason) = &set.reason {
            println!("reason:   {reason}");
        } else {
            println!("family:   {}", set.family);
            for (i, f) in set.functions.iter().enumerate() {
                println!("  [{i}] {}", f.describe());
            }
            if let Some(dir) = out {
                println!("wrote {} solution file(s) to {}", files.len(), dir.display());
            }
        }
    }
    Ok(verdict_code(set.classification.verdict))
}

fn cmd_verify(input: &Path, function: &Path, depth: usize, angles: bool, as_json: bool) -> CliResult {
    let (_, data) = load_problem(input)?;
    let text = read(function)?;
    // Accept both bare function files and the solution files written by `solve`.
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", function.display()))?;
    let body = if value.get("function").is_some() {
        value["function"].to_string()
    } else {
        text
    };
    let f = parse_function(&body).map_err(|e| format!("{}: {e}", function.display()))?;
    let report: VerificationReport =
        verify_asymptotics(&f, &data, depth, angles).map_err(|e| format!("verification: {e}"))?;
    let sup_ok = report.supnorm <= 1.0 + SUPNORM_SLACK;
    let passed = report.passed && sup_ok;
    if as_json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        v["supnorm_ok"] = json!(sup_ok);
        v["passed"] = json!(passed);
        print_json(&v);
    } else {
        let style = Styler::new();
        println!("asymptotics: {} ({})", style.status(report.passed), report.details);
        println!(
            "supnorm:     {} ({:.12} on {SUPNORM_GRID} circle points)",
            style.status(sup_ok),
            report.supnorm
        );
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn jet(t0: f64, s: &[f64]) -> BoundaryJet {
    BoundaryJet::new(
        Complex64::from_polar(1.0, t0),
        s.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    )
    .expect("fixed self-test data are valid")
}

fn selftest_checks() -> Vec<(&'static str, Result<bool, String>)> {
    let mut checks: Vec<(&'static str, Result<bool, String>)> = Vec::new();

    checks.push(("example (1,1,0,0): unique, rank 1, recovers f(z) = z", {
        let d = jet(0.0, &[1.0, 1.0, 0.0, 0.0]);
        let cls = classify(&d, DEFAULT_TOL);
        synth_determinate(&d, &cls).map_err(|e| e.to_string()).and_then(|f| {
            let mut worst = 0.0f64;
            for k in 0..128 {
                let z = Complex64::from_polar(0.95 * (k as f64 / 128.0).sqrt(), 2.399963 * k as f64);
                worst = worst.max((f.eval(z).map_err(|e| e.to_string())? - z).norm());
            }
            Ok(cls.verdict == Verdict::Unique && cls.rank == Some(1) && worst <= 1e-9)
        })
    }));

    checks.push(("(1,3,3,3): unique, Blaschke factor at 1/2", {
        let d = jet(0.0, &[1.0, 3.0, 3.0, 3.0]);
        let cls = classify(&d, DEFAULT_TOL);
        synth_determinate(&d, &cls).map_err(|e| e.to_string()).and_then(|f| {
            let z = Complex64::new(0.3, -0.2);
            let want = (2.0 * z - 1.0) / (2.0 - z);
            Ok((f.eval(z).map_err(|e| e.to_string())? - want).norm() < 1e-9)
        })
    }));

    for (name, s, tag) in [
        (
            "(1,3,3,5): none_not_psd",
            &[1.0, 3.0, 3.0, 5.0][..],
            CaseTag::NoneNotPsd,
        ),
        ("(1,3,-3): none_u_negative", &[1.0, 3.0, -3.0], CaseTag::NoneUNegative),
        ("(1,-0.5): none_n0", &[1.0, -0.5], CaseTag::NoneN0),
    ] {
        checks.push((name, Ok(classify(&jet(0.0, s), DEFAULT_TOL).case_tag == tag)));
    }

    for (name, s) in [
        ("(1,3): solutions verify", &[1.0, 3.0][..]),
        ("(1,3,9): solutions verify", &[1.0, 3.0, 9.0]),
        ("(1,3,3): solutions verify", &[1.0, 3.0, 3.0]),
    ] {
        let d = jet(0.0, s);
        checks.push((name, {
            solve(&d, 3, DEFAULT_TOL).map_err(|e| e.to_string()).and_then(|set| {
                let mut ok = set.functions.len() == 3;
                for f in &set.functions {
                    let r = verify_asymptotics(f, &d, DEFAULT_DEPTH, false).map_err(|e| e.to_string())?;
                    let sup = supnorm_disk(f, SUPNORM_GRID).map_err(|e| e.to_string())?;
                    ok &= r.passed && sup <= 1.0 + SUPNORM_SLACK;
                }
                Ok(ok)
            })
        }));
    }
    checks
}

fn cmd_selftest(as_json: bool) -> CliResult {
    let checks = selftest_checks();
    let all = checks.iter().all(|(_, r)| matches!(r, Ok(true)));
    if as_json {
        let list: Vec<Value> = checks
            .iter()
            .map(|(name, r)| match r {
                Ok(ok) => json!({ "check": name, "passed": ok }),
                Err(e) => json!({ "check": name, "passed": false, "error": e }),
            })
            .collect();
        print_json(&json!({ "passed": all, "checks": list }));
    } else {
        let style = Styler::new();
        for (name, r) in &checks {
            match r {
                Ok(ok) => println!("{} {name}", style.status(*ok)),
                Err(e) => println!("{} {name}: {e}", style.status(false)),
            }
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Classify { input, tol } => cmd_classify(&input, tol, cli.json),
        Command::Solve {
            input,
            samples,
            out,
            tol,
        } => cmd_solve(&input, samples, out.as_deref(), tol, cli.json),
        Command::Verify {
            input,
            function,
            depth,
            angles,
        } => cmd_verify(&input, &function, depth, angles, cli.json),
        Command::Selftest => cmd_selftest(cli.json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
