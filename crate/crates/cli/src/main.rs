use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abelian_morphic::abelian::{
    abelian_period_oracle, complexity_profile, lattice_path_heights, path_csv, AbelianPeriodWitness,
};
use abelian_morphic::lift::{build_lift, lift_verify};
use abelian_morphic::periodicity::{decide_periodic, default_bounds};
use abelian_morphic::rank1::{
    block_position_residues, decide_pure_with_cap, eventual_check_with_budget, rank1_form, PureOutcome,
    DEFAULT_ITERATION_CAP, DEFAULT_OFFSET_BUDGET,
};
use abelian_morphic::{
    classify, fixed_point_prefix, parikh, parse_morphism, Answer, BinaryMorphism, ClassifyOptions, Verdict,
};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

const TOOL: &str = "abmorph";

/// Abelian periodicity of fixed points of binary morphisms.
///
/// MORPHISM is inline text such as "a->ab; b->bbaa", a JSON object
/// {"a": "ab", "b": "bbaa"}, or the path of a file holding either.
#[derive(Debug, Parser)]
#[command(name = TOOL, version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; each command supports a subset.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the artifact to this file instead of standard output.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full classification with answer, certainty and reason code.
    Classify {
        morphism: Option<String>,
        /// File with one morphism per line, classified in parallel.
        #[arg(long, conflicts_with = "morphism")]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        /// Prefix length for the imbalance evidence attached to negative answers.
        #[arg(long, default_value_t = 100_000)]
        horizon: usize,
    },
    /// Exact decision of pure abelian periodicity (rank-one matrices).
    Pure {
        morphism: String,
        /// Maximal number of configurations visited.
        #[arg(long, default_value_t = DEFAULT_ITERATION_CAP)]
        cap: u64,
    },
    /// Witness search for eventual abelian periodicity (rank-one matrices).
    Eventual {
        morphism: String,
        #[arg(long, default_value_t = 8)]
        kmax: u64,
        /// Largest chunk length scanned at one level.
        #[arg(long, default_value_t = DEFAULT_OFFSET_BUDGET)]
        budget: u64,
    },
    /// Prefix of the fixed point.
    Prefix {
        morphism: String,
        #[arg(long, default_value_t = 100_000)]
        horizon: usize,
    },
    /// Abelian complexity and imbalance per window length.
    Complexity {
        morphism: String,
        #[arg(long, default_value_t = 100_000)]
        horizon: usize,
        /// Longest window length.
        #[arg(long, default_value_t = 100)]
        nmax: usize,
    },
    /// Heights of the lattice path |pref_k|_a − |pref_k|_b.
    Path {
        morphism: String,
        #[arg(long, default_value_t = 100_000)]
        horizon: usize,
    },
    /// Uniform lift over position letters, checked against the fixed point.
    Lift {
        morphism: String,
        /// Number of letters compared with the fixed point.
        #[arg(long, default_value_t = 100_000)]
        horizon: usize,
    },
    /// Automaton reading base-k digits; exports JSON or DOT.
    Dfao {
        morphism: String,
        /// Evaluate the automaton at this (decimal) index instead of exporting it.
        #[arg(long)]
        eval: Option<String>,
    },
    /// Brute-force abelian period search on a prefix.
    Oracle {
        morphism: String,
        #[arg(long, default_value_t = 100_000)]
        horizon: usize,
        #[arg(long, default_value_t = 200)]
        max_period: usize,
        #[arg(long, default_value_t = 200)]
        max_preperiod: usize,
    },
    /// Certified search for ordinary (ultimate) periodicity.
    Periodic {
        morphism: String,
        #[arg(long)]
        max_period: Option<usize>,
        #[arg(long)]
        max_preperiod: Option<usize>,
    },
    /// Residues of block positions of proper occurrences of f(a).
    Residues {
        morphism: String,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Deepest level of the eventual scan.
    #[arg(long, default_value_t = 8)]
    kmax: u64,
    /// Period bound for the periodicity search (default 4·(|f(a)|+|f(b)|)²).
    #[arg(long)]
    max_period: Option<usize>,
    /// Preperiod bound for the periodicity search (same default).
    #[arg(long)]
    max_preperiod: Option<usize>,
}

/// A rendered artifact and the exit status it implies.
struct Emission {
    body: String,
    status: u8,
}

impl Emission {
    fn definite(body: String) -> Emission {
        Emission { body, status: 0 }
    }

    fn unknown_if(body: String, unknown: bool) -> Emission {
        Emission {
            body,
            status: if unknown { 2 } else { 0 },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage_error { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(emission) => {
            if let Err(e) = write_output(cli.output.as_deref(), &emission.body) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(emission.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn write_output(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, body).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

/// Inline text, JSON, or a path to a file containing either.
fn load_morphism(source: &str) -> Result<BinaryMorphism> {
    let path = Path::new(source);
    let text = if !source.contains("->") && !source.trim_start().starts_with('{') && path.is_file() {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?
    } else {
        source.to_string()
    };
    Ok(parse_morphism(&text)?)
}

fn envelope(command: &str, report: impl Serialize) -> Result<String> {
    let value = json!({
        "header": { "tool": TOOL, "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "report": serde_json::to_value(report)?,
    });
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

fn unsupported(format: Format, command: &str) -> anyhow::Error {
    let name = format.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    anyhow!("format '{name}' is not available for '{command}'")
}

fn run(cli: &Cli) -> Result<Emission> {
    let format = cli.format;
    match &cli.command {
        Command::Classify {
            morphism,
            corpus,
            search,
            horizon,
        } => {
            let options = ClassifyOptions {
                eventual_k_max: search.kmax,
                max_period: search.max_period,
                max_preperiod: search.max_preperiod,
                evidence_horizon: *horizon,
                ..ClassifyOptions::default()
            };
            match (morphism, corpus) {
                (Some(source), None) => classify_one(source, &options, format),
                (None, Some(path)) => classify_corpus(path, &options, format),
                _ => bail!("give either a morphism or --corpus"),
            }
        }
        Command::Pure { morphism, cap } => {
            let f = load_morphism(morphism)?;
            let verdict = decide_pure_with_cap(&f, *cap)?;
            let unknown = matches!(verdict.outcome, PureOutcome::ResourceExhausted { .. });
            let body = match format {
                Format::Json => envelope("pure", &verdict)?,
                Format::Text => format!("{}\n", describe_pure(&verdict.outcome)),
                _ => return Err(unsupported(format, "pure")),
            };
            Ok(Emission::unknown_if(body, unknown))
        }
        Command::Eventual { morphism, kmax, budget } => {
            let f = load_morphism(morphism)?;
            let form = rank1_form(&f)?;
            let mut witness = None;
            let mut scanned = 0;
            for k in 1..=*kmax {
                if let Some(w) = eventual_check_with_budget(&f, &form, k, *budget)? {
                    witness = Some(w);
                    break;
                }
                scanned = k;
            }
            let report = json!({ "morphism": f, "form": form, "witness": witness, "levels_without_witness": scanned });
            let body = match format {
                Format::Json => envelope("eventual", report)?,
                Format::Text => match &witness {
                    Some(w) => format!("witness K={} c={} period={}\n", w.k, w.cut_offset, w.period),
                    None => format!("no witness for K <= {scanned}\n"),
                },
                _ => return Err(unsupported(format, "eventual")),
            };
            Ok(Emission::definite(body))
        }
        Command::Prefix { morphism, horizon } => {
            let f = load_morphism(morphism)?;
            let prefix = fixed_point_prefix(&f, *horizon)?;
            let body = match format {
                Format::Json => envelope("prefix", json!({ "morphism": f, "length": prefix.len(), "parikh": parikh(&prefix), "prefix": prefix }))?,
                Format::Text => format!("{prefix}\n"),
                _ => return Err(unsupported(format, "prefix")),
            };
            Ok(Emission::definite(body))
        }
        Command::Complexity { morphism, horizon, nmax } => {
            let f = load_morphism(morphism)?;
            let prefix = fixed_point_prefix(&f, *horizon)?;
            let profile = complexity_profile(&prefix, *nmax)?;
            let body = match format {
                Format::Csv => profile.to_csv(),
                Format::Json => envelope("complexity", json!({ "morphism": f, "profile": profile }))?,
                _ => return Err(unsupported(format, "complexity")),
            };
            Ok(Emission::definite(body))
        }
        Command::Path { morphism, horizon } => {
            let f = load_morphism(morphism)?;
            let heights = lattice_path_heights(&fixed_point_prefix(&f, *horizon)?);
            let body = match format {
                Format::Csv => path_csv(&heights),
                Format::Json => envelope("path", json!({ "morphism": f, "heights": heights }))?,
                _ => return Err(unsupported(format, "path")),
            };
            Ok(Emission::definite(body))
        }
        Command::Lift { morphism, horizon } => {
            let f = load_morphism(morphism)?;
            let lift = build_lift(&f)?;
            let verified = lift_verify(&f, &lift, *horizon)?;
            let body = match format {
                Format::Json => envelope(
                    "lift",
                    json!({
                        "morphism": f,
                        "lift": lift,
                        "bijective": lift.is_bijective(),
                        "verified_letters": horizon,
                        "verified": verified,
                    }),
                )?,
                Format::Text => lift_text(&lift, verified, *horizon),
                _ => return Err(unsupported(format, "lift")),
            };
            if !verified {
                bail!("lift disagrees with the fixed point within {horizon} letters");
            }
            Ok(Emission::definite(body))
        }
        Command::Dfao { morphism, eval } => {
            let f = load_morphism(morphism)?;
            let dfao = build_lift(&f)?.dfao();
            if let Some(index) = eval {
                let n: BigUint = index.trim().parse().map_err(|_| anyhow!("--eval expects a nonnegative integer, got '{index}'"))?;
                let letter = dfao.eval(&n);
                let body = match format {
                    Format::Json => envelope("dfao", json!({ "morphism": f, "index": n.to_string(), "letter": letter }))?,
                    Format::Text => format!("{letter}\n"),
                    _ => return Err(unsupported(format, "dfao --eval")),
                };
                return Ok(Emission::definite(body));
            }
            let body = match format {
                Format::Dot => dfao.to_dot(),
                Format::Json => envelope("dfao", json!({ "morphism": f, "automaton": dfao.table() }))?,
                _ => return Err(unsupported(format, "dfao")),
            };
            Ok(Emission::definite(body))
        }
        Command::Oracle {
            morphism,
            horizon,
            max_period,
            max_preperiod,
        } => {
            let f = load_morphism(morphism)?;
            let prefix = fixed_point_prefix(&f, *horizon)?;
            let witness = abelian_period_oracle(&prefix, *max_period, *max_preperiod)?;
            let body = match format {
                Format::Json => envelope(
                    "oracle",
                    json!({ "morphism": f, "horizon": horizon, "max_period": max_period, "max_preperiod": max_preperiod, "witness": witness }),
                )?,
                Format::Text => oracle_text(witness.as_ref(), *horizon),
                _ => return Err(unsupported(format, "oracle")),
            };
            Ok(Emission::definite(body))
        }
        Command::Periodic {
            morphism,
            max_period,
            max_preperiod,
        } => {
            let f = load_morphism(morphism)?;
            let (default_p, default_r) = default_bounds(&f);
            let verdict = decide_periodic(&f, max_period.unwrap_or(default_p), max_preperiod.unwrap_or(default_r))?;
            let body = match format {
                Format::Json => envelope("periodic", json!({ "morphism": f, "verdict": verdict }))?,
                Format::Text => match &verdict {
                    abelian_morphic::periodicity::PeriodicityVerdict::Periodic(w) => {
                        format!("periodic: u={} w={}\n", w.preperiod, w.period)
                    }
                    abelian_morphic::periodicity::PeriodicityVerdict::NotFoundWithinBounds { max_p, max_r } => {
                        format!("no period found with |w| <= {max_p}, |u| <= {max_r}\n")
                    }
                },
                _ => return Err(unsupported(format, "periodic")),
            };
            Ok(Emission::definite(body))
        }
        Command::Residues {
            morphism,
            level,
            modulus,
            horizon,
        } => {
            let f = load_morphism(morphism)?;
            let form = rank1_form(&f)?;
            if *level == 0 {
                bail!("--level must be at least 1");
            }
            let residues = block_position_residues(&f, &form, *level, *modulus, *horizon)?;
            let complete = residues.len() as u64 == *modulus;
            let body = match format {
                Format::Json => envelope(
                    "residues",
                    json!({ "morphism": f, "level": level, "modulus": modulus, "horizon": horizon, "residues": residues, "complete": complete }),
                )?,
                Format::Text => {
                    let list: Vec<String> = residues.iter().map(u64::to_string).collect();
                    format!("{}\n", list.join(" "))
                }
                _ => return Err(unsupported(format, "residues")),
            };
            Ok(Emission::definite(body))
        }
    }
}

fn classify_one(source: &str, options: &ClassifyOptions, format: Format) -> Result<Emission> {
    let f = load_morphism(source)?;
    let verdict = classify(&f, options)?;
    let body = match format {
        Format::Json => envelope("classify", &verdict)?,
        Format::Text => verdict_text(&verdict),
        _ => return Err(unsupported(format, "classify")),
    };
    Ok(Emission::unknown_if(body, verdict.answer == Answer::Unknown))
}

fn classify_corpus(path: &Path, options: &ClassifyOptions, format: Format) -> Result<Emission> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let results: Vec<(String, Result<Verdict, String>)> = lines
        .par_iter()
        .map(|line| {
            let verdict = parse_morphism(line)
                .and_then(|f| classify(&f, options))
                .map_err(|e| e.to_string());
            (line.to_string(), verdict)
        })
        .collect();
    let failed = results.iter().any(|(_, r)| r.is_err());
    let unknown = results
        .iter()
        .any(|(_, r)| matches!(r, Ok(v) if v.answer == Answer::Unknown));
    let body = match format {
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|(line, r)| match r {
                    Ok(v) => json!({ "input": line, "verdict": v }),
                    Err(e) => json!({ "input": line, "error": e }),
                })
                .collect();
            envelope("classify", items)?
        }
        Format::Text => results
            .iter()
            .map(|(line, r)| match r {
                Ok(v) => format!("{line}\t{:?}\t{:?}\t{}\n", v.answer, v.certainty, v.reason.code()),
                Err(e) => format!("{line}\terror\t{e}\n"),
            })
            .collect(),
        _ => return Err(unsupported(format, "classify")),
    };
    if failed {
        // the report is still written so the failing lines can be inspected
        let count = results.iter().filter(|(_, r)| r.is_err()).count();
        eprintln!("error: {count} of {} corpus entries could not be classified", results.len());
        return Ok(Emission { body, status: 1 });
    }
    Ok(Emission::unknown_if(body, unknown))
}

fn describe_pure(outcome: &PureOutcome) -> String {
    match outcome {
        PureOutcome::PureAbelianPeriodic { k, period } => format!("pure abelian periodic: K={k} period={period}"),
        PureOutcome::NotPure {
            iterations_used,
            cycle_detected,
        } => format!("not pure (iterations={iterations_used}, cycle={cycle_detected})"),
        PureOutcome::ResourceExhausted { iterations_used } => {
            format!("undecided: iteration cap reached after {iterations_used} configurations")
        }
    }
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = format!(
        "morphism: {}\nanswer: {:?}\ncertainty: {:?}\nreason: {}\n",
        v.morphism,
        v.answer,
        v.certainty,
        v.reason.code()
    );
    if let Some(pure) = &v.witnesses.pure {
        out += &format!("pure: {}\n", describe_pure(&pure.outcome));
    }
    if let Some(w) = &v.witnesses.periodic {
        out += &format!("periodic: u={} w={}\n", w.preperiod, w.period);
    }
    if let Some(e) = &v.evidence {
        out += &format!("evidence: max imbalance {} over {} letters\n", e.max_imbalance, e.horizon);
    }
    out
}

fn lift_text(lift: &abelian_morphic::lift::UniformLift, verified: bool, horizon: usize) -> String {
    let mut out = format!("block length: {}\n", lift.block_length);
    for (q, image) in lift.images.iter().enumerate() {
        let targets: Vec<String> = image.iter().map(|t| (t + 1).to_string()).collect();
        out += &format!(
            "{} {} -> {}  (codes {})\n",
            q + 1,
            lift.alphabet[q],
            targets.join(""),
            lift.coding[q]
        );
    }
    out += &format!("verified on {horizon} letters: {verified}\n");
    out
}

fn oracle_text(witness: Option<&AbelianPeriodWitness>, horizon: usize) -> String {
    match witness {
        Some(w) => format!("abelian period {} with preperiod {} on {} letters\n", w.period, w.preperiod, w.horizon),
        None => format!("no abelian period within bounds on {horizon} letters\n"),
    }
}
