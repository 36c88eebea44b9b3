//! Command-line front end: builds the constructions, runs the verification
//! and analysis passes, and exports posets as JSON or DOT.
//!
//! Exit codes: 0 when every requested check passes, 1 when a property
//! fails (with a machine-readable JSON report on stdout), 2 for usage or
//! validation errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use upho::constructions::{
    b_construction, chain, grid_construction, k_ary_tree, theorem12_construction,
    BConstructionSpec, GridSpec,
};
use upho::monoid::{
    distinct_rgf_check_with_budget, left_cancellation_check_with_budget,
    monoid_poset_with_budget, s_family, CancellationReport, MonoidPresentation,
    SeparationReport, DEFAULT_BUDGET,
};
use upho::planar::{classify_merges, planar_construction, to_dot, MergeSchedule};
use upho::poset::{MeetResult, RankedPoset, UphoReport};
use upho::series::{match_rational, rgf, IntSeries, RationalFunction};
use upho::symfunc::{davydov_check, is_schur_positive, SchurPositivity};

#[derive(Parser)]
#[command(
    name = "upho",
    version,
    about = "Constructs finite upho poset truncations and checks their defining \
             properties and algebraic signatures with exact integer arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a poset truncation and write it as JSON (or DOT with --dot).
    Construct {
        /// One of: chain, tree, grid, bconstruction, theorem12, planar,
        /// monoid, stern, sfamily, product-of
        name: String,
        #[command(flatten)]
        params: BuildParams,
        /// Write the output to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit a Hasse diagram in DOT format (rank layers pinned,
        /// embedding order kept with invisible edges)
        #[arg(long)]
        dot: bool,
    },
    /// Run analysis passes against a poset file or an inline construction.
    Analyze(Box<AnalyzeArgs>),
    /// Compare class-count vectors of subsets of the t_n relation family.
    Separate {
        /// Semicolon-separated subsets, each a comma list of indices;
        /// an empty entry (or a lone 0) denotes the empty set
        #[arg(long)]
        subsets: String,
        /// Maximum word length
        #[arg(long)]
        depth: usize,
        /// Write the JSON report to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Construction parameters shared by `construct` and inline `analyze`.
#[derive(Args, Clone, Debug, Default)]
struct BuildParams {
    /// Truncation depth: number of ranks, except for monoid-presentation
    /// constructions (monoid, stern, sfamily) where it is the maximum word
    /// length and the poset stores depth+1 ranks
    #[arg(long)]
    depth: Option<usize>,
    /// Numerator parameters a_1,a_2,... (grid, bconstruction, theorem12)
    #[arg(long, value_delimiter = ',', num_args = 0.., allow_hyphen_values = false)]
    a: Option<Vec<u64>>,
    /// Pole parameters: one value for bconstruction and planar,
    /// a comma list b_1,b_2,... for theorem12
    #[arg(long, value_delimiter = ',')]
    b: Option<Vec<u64>>,
    /// Branching factor for tree
    #[arg(long)]
    k: Option<u64>,
    /// Root-bifurcation count on rank 2 (planar)
    #[arg(long)]
    a2: Option<usize>,
    /// Root-bifurcation count on rank 3 (planar)
    #[arg(long)]
    a3: Option<usize>,
    /// Root-bifurcation count on rank 4 (planar)
    #[arg(long)]
    a4: Option<usize>,
    /// Root-bifurcation count on rank 5 (planar)
    #[arg(long)]
    a5: Option<usize>,
    /// Root-bifurcation count on rank 6 (planar)
    #[arg(long)]
    a6: Option<usize>,
    /// Root-bifurcation count on rank 7 (planar)
    #[arg(long)]
    a7: Option<usize>,
    /// Root-bifurcation count on rank 8 (planar)
    #[arg(long)]
    a8: Option<usize>,
    /// Root-bifurcation count on rank 9 (planar)
    #[arg(long)]
    a9: Option<usize>,
    /// Presentation file for monoid: first line the alphabet symbols
    /// separated by spaces, then one "LHS = RHS" relation per line
    #[arg(long)]
    relations: Option<PathBuf>,
    /// Relation indices for sfamily (comma separated, each >= 2)
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    indices: Option<Vec<usize>>,
    /// Left factor poset JSON file for product-of
    #[arg(long)]
    left: Option<PathBuf>,
    /// Right factor poset JSON file for product-of
    #[arg(long)]
    right: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
struct AnalyzeArgs {
    /// Poset JSON file to analyze
    #[arg(long)]
    poset: Option<PathBuf>,
    /// Inline construction name (same names as `construct`)
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    params: BuildParams,
    /// Report the rank-generating series
    #[arg(long)]
    rgf: bool,
    /// Check the series against a rational function, e.g. "(1+x)(1+2x)/(1-x)"
    #[arg(long, value_name = "EXPR")]
    r#match: Option<String>,
    /// Verify the truncated upho property
    #[arg(long)]
    upho: bool,
    /// Minimum comparison depth for --upho
    #[arg(long, default_value_t = 3)]
    min_depth: usize,
    /// Highest root rank examined by --upho
    #[arg(long, default_value_t = 2)]
    max_root_rank: usize,
    /// Check that every vertex pair has a unique meet
    #[arg(long)]
    meets: bool,
    /// Classify bifurcations and verify the planar rank recurrence
    #[arg(long)]
    merges: bool,
    /// Check Schur positivity of the Ehrenborg functions through degree N
    #[arg(long, value_name = "N")]
    schur: Option<usize>,
    /// Run the exact total-positivity test on a rational function
    #[arg(long, value_name = "EXPR")]
    davydov: Option<String>,
    /// Check left cancellation of the underlying presentation
    /// (monoid, stern and sfamily constructions only)
    #[arg(long)]
    cancellation: bool,
    /// Report format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// Machine-readable JSON report
    Json,
    /// The rank-generating series as a JSON array of decimal strings
    Series,
    /// Schur expansion lines, one coefficient per line
    Schur,
}

struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError(msg.into())
}

fn word_budget() -> usize {
    std::env::var("UPHO_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

struct Built {
    label: String,
    poset: RankedPoset,
    presentation: Option<(MonoidPresentation, usize)>,
}

fn required_depth(params: &BuildParams) -> Result<usize, CliError> {
    params.depth.ok_or_else(|| usage("--depth is required"))
}

fn single_b(params: &BuildParams) -> Result<u64, CliError> {
    match params.b.as_deref() {
        Some([b]) => Ok(*b),
        _ => Err(usage("exactly one --b value is required")),
    }
}

fn build(name: &str, params: &BuildParams) -> Result<Built, CliError> {
    let label = name.to_string();
    let a = params.a.clone().unwrap_or_default();
    match name {
        "chain" => {
            let depth = required_depth(params)?;
            if depth == 0 {
                return Err(usage("--depth must be at least 1"));
            }
            Ok(Built {
                label,
                poset: chain(depth),
                presentation: None,
            })
        }
        "tree" => {
            let depth = required_depth(params)?;
            let k = params.k.ok_or_else(|| usage("tree requires --k"))?;
            if k == 0 || depth == 0 {
                return Err(usage("tree requires --k >= 1 and --depth >= 1"));
            }
            Ok(Built {
                label,
                poset: k_ary_tree(k, depth),
                presentation: None,
            })
        }
        "grid" => {
            let spec = GridSpec::new(a, required_depth(params)?)?;
            Ok(Built {
                label,
                poset: grid_construction(&spec),
                presentation: None,
            })
        }
        "bconstruction" => {
            let spec = BConstructionSpec::new(a, single_b(params)?, required_depth(params)?)?;
            Ok(Built {
                label,
                poset: b_construction(&spec),
                presentation: None,
            })
        }
        "theorem12" => {
            let b = params
                .b
                .clone()
                .ok_or_else(|| usage("theorem12 requires --b"))?;
            let poset = theorem12_construction(&a, &b, required_depth(params)?)?;
            Ok(Built {
                label,
                poset,
                presentation: None,
            })
        }
        "planar" => {
            let b = single_b(params)? as usize;
            let mut counts = BTreeMap::new();
            let given = [
                (2, params.a2),
                (3, params.a3),
                (4, params.a4),
                (5, params.a5),
                (6, params.a6),
                (7, params.a7),
                (8, params.a8),
                (9, params.a9),
            ];
            for (rank, count) in given {
                if let Some(c) = count {
                    counts.insert(rank, c);
                }
            }
            let schedule = MergeSchedule::new(b, counts)?;
            Ok(Built {
                label,
                poset: planar_construction(&schedule, required_depth(params)?)?,
                presentation: None,
            })
        }
        "monoid" => {
            let path = params
                .relations
                .as_ref()
                .ok_or_else(|| usage("monoid requires --relations FILE"))?;
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{path:?}: {e}")))?;
            let pres = MonoidPresentation::parse(&text)?;
            build_from_presentation(label, pres, required_depth(params)?)
        }
        "stern" => build_from_presentation(
            label,
            MonoidPresentation::stern(),
            required_depth(params)?,
        ),
        "sfamily" => {
            let indices: BTreeSet<usize> = params
                .indices
                .clone()
                .unwrap_or_default()
                .into_iter()
                .collect();
            build_from_presentation(label, s_family(&indices)?, required_depth(params)?)
        }
        "product-of" => {
            let depth = required_depth(params)?;
            let read = |path: &Option<PathBuf>, side: &str| -> Result<RankedPoset, CliError> {
                let path = path
                    .as_ref()
                    .ok_or_else(|| usage(format!("product-of requires --{side} FILE")))?;
                let text =
                    fs::read_to_string(path).map_err(|e| usage(format!("{path:?}: {e}")))?;
                RankedPoset::from_json(&text).map_err(CliError)
            };
            let left = read(&params.left, "left")?;
            let right = read(&params.right, "right")?;
            Ok(Built {
                label,
                poset: left.product(&right, depth)?,
                presentation: None,
            })
        }
        other => Err(usage(format!(
            "unknown construction {other:?}; expected one of chain, tree, grid, \
             bconstruction, theorem12, planar, monoid, stern, sfamily, product-of"
        ))),
    }
}

fn build_from_presentation(
    label: String,
    pres: MonoidPresentation,
    max_len: usize,
) -> Result<Built, CliError> {
    let poset = monoid_poset_with_budget(&pres, max_len, word_budget())?;
    Ok(Built {
        label,
        poset,
        presentation: Some((pres, max_len)),
    })
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{path:?}: {e}"))),
        None => {
            println!("{}", text.trim_end_matches('\n'));
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct MatchReport {
    expression: String,
    matched: bool,
}

#[derive(Serialize)]
struct RgfSection {
    series: IntSeries,
    #[serde(skip_serializing_if = "Option::is_none")]
    matched: Option<MatchReport>,
}

#[derive(Serialize)]
struct UphoSection {
    min_depth: usize,
    max_root_rank: usize,
    pass: bool,
    report: UphoReport,
}

#[derive(Serialize)]
struct MeetsSection {
    pairs_checked: usize,
    all_unique: bool,
    /// first few offending pairs, if any
    non_unique_pairs: Vec<(usize, usize)>,
    no_meet_pairs: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct MergesSection {
    root_bifurcated_per_rank: Vec<usize>,
    bifurcated_per_rank: Vec<usize>,
    total_root_bifurcated: usize,
    recurrence_holds: bool,
}

#[derive(Serialize)]
struct SchurSection {
    max_degree: usize,
    #[serde(flatten)]
    result: SchurPositivity,
}

#[derive(Serialize)]
struct DavydovSection {
    expression: String,
    accepted: bool,
}

#[derive(Serialize)]
struct CancellationSection {
    max_len: usize,
    #[serde(flatten)]
    report: CancellationReport,
}

#[derive(Serialize, Default)]
struct AnalyzeReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    construction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rgf: Option<RgfSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upho: Option<UphoSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meets: Option<MeetsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    merges: Option<MergesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    schur: Option<SchurSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    davydov: Option<DavydovSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cancellation: Option<CancellationSection>,
    pass: bool,
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<bool, CliError> {
    let needs_poset = args.rgf
        || args.r#match.is_some()
        || args.upho
        || args.meets
        || args.merges
        || args.schur.is_some()
        || args.cancellation;

    let built: Option<Built> = match (&args.poset, &args.name) {
        (Some(_), Some(_)) => {
            return Err(usage("--poset and --name are mutually exclusive"));
        }
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{path:?}: {e}")))?;
            Some(Built {
                label: path.display().to_string(),
                poset: RankedPoset::from_json(&text).map_err(CliError)?,
                presentation: None,
            })
        }
        (None, Some(name)) => Some(build(name, &args.params)?),
        (None, None) => {
            if needs_poset {
                return Err(usage("analyze needs --poset FILE or --name CONSTRUCTION"));
            }
            None
        }
    };

    let mut report = AnalyzeReport::default();
    let mut pass = true;

    if let Some(built) = &built {
        report.construction = Some(built.label.clone());
        report.depth = Some(built.poset.depth());
        report.rank_sizes = Some(built.poset.rank_sizes());

        if args.rgf || args.r#match.is_some() {
            let series = rgf(&built.poset);
            let matched = match &args.r#match {
                Some(expr) => {
                    let f = RationalFunction::parse(expr)?;
                    let ok = match_rational(&series, &f);
                    pass &= ok;
                    Some(MatchReport {
                        expression: expr.clone(),
                        matched: ok,
                    })
                }
                None => None,
            };
            report.rgf = Some(RgfSection { series, matched });
        }

        if args.upho {
            let upho = built.poset.verify_upho(args.min_depth, args.max_root_rank)?;
            pass &= upho.pass();
            report.upho = Some(UphoSection {
                min_depth: args.min_depth,
                max_root_rank: args.max_root_rank,
                pass: upho.pass(),
                report: upho,
            });
        }

        if args.meets {
            let n = built.poset.num_vertices();
            let mut non_unique = Vec::new();
            let mut no_meet = Vec::new();
            let mut pairs = 0usize;
            for u in 0..n {
                for v in u + 1..n {
                    pairs += 1;
                    match built.poset.meet(u, v)? {
                        MeetResult::Meet(_) => {}
                        MeetResult::NonUnique(_) if non_unique.len() < 10 => {
                            non_unique.push((u, v))
                        }
                        MeetResult::NoMeet if no_meet.len() < 10 => no_meet.push((u, v)),
                        _ => {}
                    }
                }
            }
            let all_unique = non_unique.is_empty() && no_meet.is_empty();
            pass &= all_unique;
            report.meets = Some(MeetsSection {
                pairs_checked: pairs,
                all_unique,
                non_unique_pairs: non_unique,
                no_meet_pairs: no_meet,
            });
        }

        if args.merges {
            let classification = classify_merges(&built.poset)?;
            let holds = upho::planar::planar_rgf_check(&built.poset)?;
            pass &= holds;
            report.merges = Some(MergesSection {
                total_root_bifurcated: classification.total_root_bifurcated(),
                root_bifurcated_per_rank: classification.root_bifurcated_per_rank,
                bifurcated_per_rank: classification.bifurcated_per_rank,
                recurrence_holds: holds,
            });
        }

        if let Some(max_degree) = args.schur {
            let result = is_schur_positive(&rgf(&built.poset), max_degree)?;
            pass &= result.positive;
            report.schur = Some(SchurSection { max_degree, result });
        }

        if args.cancellation {
            let (pres, max_len) = built.presentation.as_ref().ok_or_else(|| {
                usage("--cancellation needs a monoid-presentation construction (monoid, stern, sfamily)")
            })?;
            let cancellation =
                left_cancellation_check_with_budget(pres, *max_len, word_budget())?;
            pass &= cancellation.cancellative;
            report.cancellation = Some(CancellationSection {
                max_len: *max_len,
                report: cancellation,
            });
        }
    }

    if let Some(expr) = &args.davydov {
        let f = RationalFunction::parse(expr)?;
        let accepted = davydov_check(&f);
        pass &= accepted;
        report.davydov = Some(DavydovSection {
            expression: expr.clone(),
            accepted,
        });
    }

    report.pass = pass;

    let text = match args.format {
        OutputFormat::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        OutputFormat::Series => {
            let section = report
                .rgf
                .as_ref()
                .ok_or_else(|| usage("--format series needs --rgf"))?;
            serde_json::to_string(&section.series).expect("series serializes")
        }
        OutputFormat::Schur => {
            let section = report
                .schur
                .as_ref()
                .ok_or_else(|| usage("--format schur needs --schur N"))?;
            let mut lines = Vec::new();
            for expansion in &section.result.expansions {
                lines.push(format!("# degree {}", expansion.degree()));
                lines.extend(expansion.lines());
            }
            lines.join("\n")
        }
    };
    write_output(&args.out, &text)?;
    Ok(pass)
}

fn cmd_separate(subsets: &str, depth: usize, out: &Option<PathBuf>) -> Result<bool, CliError> {
    let parsed: Vec<BTreeSet<usize>> = subsets
        .split(';')
        .map(|token| {
            let token = token.trim();
            if token.is_empty() || token == "∅" || token == "empty" || token == "-" {
                return Ok(BTreeSet::new());
            }
            token
                .split(',')
                .map(|n| {
                    n.trim()
                        .parse::<usize>()
                        .map_err(|e| usage(format!("bad index {n:?}: {e}")))
                })
                .collect()
        })
        .collect::<Result<_, CliError>>()?;
    if parsed.is_empty() {
        return Err(usage("--subsets lists at least one subset"));
    }
    let report: SeparationReport = distinct_rgf_check_with_budget(&parsed, depth, word_budget())?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    write_output(out, &text)?;
    Ok(report.all_distinct)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Construct {
            name,
            params,
            out,
            dot,
        } => {
            let built = build(name, params)?;
            let text = if *dot {
                to_dot(&built.poset)
            } else {
                built.poset.to_json()
            };
            write_output(out, &text)?;
            Ok(true)
        }
        Command::Analyze(args) => cmd_analyze(args),
        Command::Separate {
            subsets,
            depth,
            out,
        } => cmd_separate(subsets, *depth, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
