use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use modgal::cli::dataset::{Dataset, TRIPLE_CASES};
use modgal::cli::pipeline::{
    form_map, run_pipeline, verify_paper, Corruption, PipelineError, VerifyOptions,
};
use modgal::cli::qexpfile::format_qexp;
use modgal::galois::Budget;
use modgal::modcurve::{curve_invariants, dim_cusp_forms, l_bound, sturm_precision};
use modgal::relation::find_relation;

const EXIT_CODES: &str = "\
Exit codes:
   0  success; for `galois`, the Galois group was identified
   2  `galois` narrowed the group to a candidate set without identifying it
   3  `verify-paper` found at least one failing or budget-limited case
  10  relation search failed (no relation, ambiguous kernel, short precision)
  11  Galois analysis failed (unsupported degree, bad pattern)
  12  polynomial or curve data rejected (non-monic specialization, bad level)
  64  command-line usage error
  65  malformed q-expansion file or dataset selection
  66  input file could not be read
  73  output could not be written";

#[derive(Parser)]
#[command(name = "modgal", version, about = "Relations between cusp forms on X0(N) and the Galois groups they define", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Bundled dataset: 30, 63, 64 or 72.
    #[arg(long, conflicts_with = "file")]
    dataset: Option<String>,
    /// q-expansion file in `# qexp v1` format.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Three comma-separated forms, each a label or an integer linear
    /// combination of labels such as `f3+f4`.
    #[arg(long)]
    forms: Option<String>,
    /// Largest total degree tried by the relation search.
    #[arg(long, default_value_t = 8)]
    maxdeg: u32,
}

#[derive(Args)]
struct Sampling {
    /// Largest prime used for specializations.
    #[arg(long, default_value_t = Budget::default().max_prime)]
    max_prime: u64,
    /// Seed for the residues drawn at large primes.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Sampling {
    fn budget(&self) -> Budget {
        Budget {
            max_prime: self.max_prime,
            seed: self.seed,
            ..Budget::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Index, elliptic points, cusps, genus and form dimensions of Γ0(N).
    Invariants {
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = 2)]
        weight: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest-degree homogeneous relation among three forms.
    Relation {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline: relation, Q, Q~, degrees, sampled cycle patterns and verdict.
    Galois {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun every bundled computation and compare with the expected values.
    VerifyPaper {
        #[command(flatten)]
        sampling: Sampling,
        /// Overwrite one coefficient first: DATASET:LABEL:EXPONENT:VALUE.
        #[arg(long)]
        corrupt: Option<String>,
        /// Write the summary as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the expansions of a dataset in `# qexp v1` format.
    Series {
        #[arg(long, conflicts_with = "file")]
        dataset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl ToString) -> Self {
        Failure {
            code,
            msg: msg.to_string(),
        }
    }
}

fn pipeline_failure(e: PipelineError) -> Failure {
    use modgal::cli::dataset::DatasetError;
    use modgal::cli::qexpfile::QExpFileError;
    let code = match &e {
        PipelineError::Dataset(DatasetError::File(QExpFileError::Io { .. })) => 66,
        PipelineError::Dataset(_) => 65,
        PipelineError::Relation(_) => 10,
        PipelineError::Galois(_) => 11,
        PipelineError::Curve(_) | PipelineError::Poly(_) => 12,
    };
    Failure::new(code, e)
}

fn load(dataset: &Option<String>, file: &Option<PathBuf>) -> Result<Dataset, Failure> {
    let r = match (dataset, file) {
        (Some(d), _) => Dataset::bundled(d),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(66, format!("cannot read {}: {e}", path.display())))?;
            Dataset::from_text(&path.display().to_string(), &text)
        }
        (None, None) => return Err(Failure::new(64, "one of --dataset or --file is required")),
    };
    r.map_err(|e| pipeline_failure(e.into()))
}

fn forms_for(source: &Source, d: &Dataset) -> Result<String, Failure> {
    if let Some(f) = &source.forms {
        return Ok(f.clone());
    }
    TRIPLE_CASES
        .iter()
        .find(|c| c.dataset == d.label.trim_start_matches("gamma0_"))
        .map(|c| c.forms.to_string())
        .ok_or_else(|| Failure::new(64, "--forms is required for this input"))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(73, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn parse_corruption(s: &str) -> Result<Corruption, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || {
        Failure::new(
            64,
            format!("--corrupt expects DATASET:LABEL:EXPONENT:VALUE, got `{s}`"),
        )
    };
    let [dataset, label, exponent, value] = parts[..] else {
        return Err(bad());
    };
    Ok(Corruption {
        dataset: dataset.trim_start_matches("gamma0_").to_string(),
        label: label.to_string(),
        exponent: exponent.parse().map_err(|_| bad())?,
        value: value.parse().map_err(|_| bad())?,
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Invariants { level, weight, out } => {
            let curve = |e: modgal::modcurve::CurveError| Failure::new(12, e);
            let inv = curve_invariants(level).map_err(curve)?;
            let doc = json!({
                "invariants": inv,
                "weight": weight,
                "dim_cusp_forms": dim_cusp_forms(level, weight).map_err(curve)?,
                "l_bound": l_bound(level, weight).map_err(curve)?,
                "sturm_precision": sturm_precision(level, weight).map_err(curve)?,
            });
            emit(&out, &pretty(&doc))?;
            Ok(0)
        }
        Command::Relation { source, out } => {
            let d = load(&source.dataset, &source.file)?;
            let forms = forms_for(&source, &d)?;
            let [f, g, h] = d.triple(&forms).map_err(|e| pipeline_failure(e.into()))?;
            let p =
                find_relation(&f, &g, &h, source.maxdeg).map_err(|e| pipeline_failure(e.into()))?;
            let doc = json!({
                "level": d.level,
                "weight": d.weight,
                "forms": forms,
                "degree": p.degree(),
                "relation": form_map(&p),
                "display": p.to_string(),
            });
            emit(&out, &pretty(&doc))?;
            Ok(0)
        }
        Command::Galois {
            source,
            sampling,
            out,
        } => {
            let d = load(&source.dataset, &source.file)?;
            let forms = forms_for(&source, &d)?;
            let budget = sampling.budget();
            let (_, report) =
                run_pipeline(&d, &forms, source.maxdeg, &budget).map_err(pipeline_failure)?;
            emit(&out, &(report.to_json() + "\n"))?;
            Ok(report.exit_code() as u8)
        }
        Command::VerifyPaper {
            sampling,
            corrupt,
            out,
        } => {
            let opts = VerifyOptions {
                budget: sampling.budget(),
                corruption: corrupt.as_deref().map(parse_corruption).transpose()?,
            };
            let summary = verify_paper(&opts);
            print!("{summary}");
            if out.is_some() {
                emit(&out, &pretty(&summary))?;
            }
            Ok(if summary.all_passed() { 0 } else { 3 })
        }
        Command::Series { dataset, file, out } => {
            let d = load(&dataset, &file)?;
            emit(&out, &format_qexp(&d.series))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("modgal: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
