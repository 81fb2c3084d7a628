//! Command-line front end emitting reproducible TSV/JSON tables:
//! Witt numbers and filtration layer dimensions, exact growth
//! inequality scans, endomorphism rigidity checks, characteristic
//! subgroup censuses, and wreath product normal subgroup counts.
//!
//! Exit codes: 0 success, 1 a checked mathematical claim was violated,
//! 2 usage/parse/precondition error, 3 resource cap exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use zassenhaus::arith::{
    cumulative_log_index, is_prime, scan_growth_inequalities, witt, zassenhaus_dim,
};
use zassenhaus::magnus::{check_rigidity, parse_free_word, Endomorphism, RigidityOutcome};
use zassenhaus::modlat::{characteristic_census, LatticeBudget};
use zassenhaus::ncpoly::{MAX_DEGREE, MAX_RANK};
use zassenhaus::permw::{
    alternating_gens, cyclic_gens, enumerate_elements, normal_subgroups, tower_normal_count,
    tower_normal_count_by_recursion, verify_wreath_dichotomy, TowerSpec,
};

#[derive(Parser)]
#[command(
    name = "zgrow",
    version,
    about = "Exact tables for the mod-p filtration of free groups: layer dimensions, growth \
             inequalities, rigidity checks, characteristic subgroup censuses, and wreath \
             product normal subgroup counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Rank of the free group.
    #[arg(long, global = true, default_value_t = 2)]
    r: usize,

    /// Coefficient characteristic (must be prime).
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,

    /// Deepest filtration layer to compute (default depends on the subcommand).
    #[arg(long, global = true)]
    nmax: Option<usize>,

    /// Resource cap: maximum lattice size for census, maximum element
    /// count for wreath enumerations.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: usize,

    /// Seed echoed into every output for provenance; no current
    /// subcommand draws random samples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    /// Write the table to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Witt numbers, layer dimensions, and cumulative index exponents
    /// for layers 1..=nmax.
    Witt,
    /// Scan the two exact growth inequalities for layer dimensions and
    /// report thresholds and exceptions.
    Scan,
    /// Check that an endomorphism trivial modulo the second filtration
    /// subgroup moves every layer realization by at least one extra
    /// level.
    Rigidity {
        /// Image of each generator in order, one flag per generator,
        /// e.g. --image "x2*x1*x2^-1" (syntax: x1..xr, ^-1, * separators).
        #[arg(long = "image", value_name = "WORD")]
        images: Vec<String>,
    },
    /// Census of characteristic subgroups pinched between consecutive
    /// filtration subgroups, with a growth-curvature summary.
    Census,
    /// Brute-force normal subgroup counts, the wreath dichotomy check,
    /// and closed-form tower counts.
    Wreath {
        /// One of: a5wrc2, a5, a4, d8-negative-control, tower:m1,m2,...
        #[arg(long)]
        instance: String,
    },
}

/// A terminating failure: message on stderr, process exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn resource(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

/// One renderable output document: the same content as TSV (meta
/// comments, header, rows, note comments) and as a JSON value.
struct TableDoc {
    meta: Vec<(&'static str, String)>,
    columns: &'static [&'static str],
    rows: Vec<Vec<String>>,
    notes: Vec<(&'static str, String)>,
    json: serde_json::Value,
}

/// A computed result ready to print, plus the exit code it earned
/// (claim violations still print their report).
struct Output {
    doc: TableDoc,
    code: u8,
}

impl Output {
    fn ok(doc: TableDoc) -> Output {
        Output { doc, code: 0 }
    }
}

fn render_tsv(doc: &TableDoc) -> String {
    let mut out = String::new();
    for (k, v) in &doc.meta {
        out.push_str(&format!("# {k}\t{v}\n"));
    }
    out.push_str(&doc.columns.join("\t"));
    out.push('\n');
    for row in &doc.rows {
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    for (k, v) in &doc.notes {
        out.push_str(&format!("# {k}\t{v}\n"));
    }
    out
}

fn render(doc: &TableDoc, format: Format) -> String {
    match format {
        Format::Tsv => render_tsv(doc),
        // serde_json maps carry sorted keys, so this is deterministic.
        Format::Json => format!("{:#}\n", doc.json),
    }
}

fn emit(cli: &Cli, output: Output) -> Result<u8, Failure> {
    let text = render(&output.doc, cli.format);
    match &cli.out {
        None => {
            print!("{text}");
            std::io::stdout().flush().map_err(|e| Failure {
                code: 2,
                message: format!("cannot write output: {e}"),
            })?;
        }
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure {
                code: 2,
                message: format!("cannot write {}: {e}", path.display()),
            })?;
        }
    }
    Ok(output.code)
}

fn require_prime(p: u64) -> Result<(), Failure> {
    if !is_prime(p) {
        return Err(usage(format!("--p {p} is not prime")));
    }
    Ok(())
}

fn require_rank(r: usize) -> Result<(), Failure> {
    if r < 1 {
        return Err(usage("--r must be at least 1"));
    }
    Ok(())
}

/// Ranks and degrees the dense layer algebra can hold.
fn require_layer_limits(r: usize, n_max: usize) -> Result<(), Failure> {
    if r > MAX_RANK {
        return Err(usage(format!("--r must be at most {MAX_RANK}")));
    }
    if n_max > MAX_DEGREE {
        return Err(usage(format!("--nmax must be at most {MAX_DEGREE}")));
    }
    if (r as u128).pow(n_max as u32) > 1 << 26 {
        return Err(usage(format!(
            "layer {n_max} over rank {r} exceeds the dense coordinate limit"
        )));
    }
    Ok(())
}

fn meta_common(cli: &Cli, command: &str, n_max: Option<usize>) -> Vec<(&'static str, String)> {
    let mut meta = vec![("command", command.to_string())];
    meta.push(("r", cli.r.to_string()));
    meta.push(("p", cli.p.to_string()));
    if let Some(n) = n_max {
        meta.push(("n_max", n.to_string()));
    }
    meta.push(("seed", cli.seed.to_string()));
    meta
}

fn cmd_witt(cli: &Cli) -> Result<Output, Failure> {
    let n_max = cli.nmax.unwrap_or(10);
    require_rank(cli.r)?;
    require_prime(cli.p)?;
    let mut rows = Vec::new();
    let mut jrows = Vec::new();
    for n in 1..=n_max as u64 {
        let w = witt(cli.r as u64, n);
        let c = zassenhaus_dim(cli.r as u64, n, cli.p);
        let cum = cumulative_log_index(cli.r as u64, n, cli.p);
        rows.push(vec![
            n.to_string(),
            w.to_string(),
            c.to_string(),
            cum.to_string(),
        ]);
        jrows.push(serde_json::json!({
            "n": n,
            "witt": w.to_string(),
            "dim": c.to_string(),
            "cumulative": cum.to_string(),
        }));
    }
    let json = serde_json::json!({
        "command": "witt",
        "r": cli.r,
        "p": cli.p,
        "n_max": n_max,
        "seed": cli.seed,
        "rows": jrows,
    });
    Ok(Output::ok(TableDoc {
        meta: meta_common(cli, "witt", Some(n_max)),
        columns: &["n", "witt", "dim", "cumulative"],
        rows,
        notes: Vec::new(),
        json,
    }))
}

fn cmd_scan(cli: &Cli) -> Result<Output, Failure> {
    let n_max = cli.nmax.unwrap_or(40);
    require_rank(cli.r)?;
    require_prime(cli.p)?;
    if n_max < 2 {
        return Err(usage("--nmax must be at least 2: nothing to scan"));
    }
    let scan = scan_growth_inequalities(cli.r as u64, cli.p, n_max as u64);
    let rows = scan
        .rows
        .iter()
        .map(|row| {
            vec![
                row.n.to_string(),
                row.dim.to_string(),
                row.cumulative.to_string(),
                row.dim_bound_holds.to_string(),
                row.share_bound_holds.to_string(),
            ]
        })
        .collect();
    let describe = |threshold: &Option<u64>| match threshold {
        Some(t) => t.to_string(),
        None => "none".to_string(),
    };
    let list = |xs: &[u64]| {
        if xs.is_empty() {
            "none".to_string()
        } else {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    };
    let notes = vec![
        ("dim_bound_threshold", describe(&scan.dim_bound.threshold)),
        ("dim_bound_exceptions", list(&scan.dim_bound.exceptions)),
        (
            "share_bound_threshold",
            describe(&scan.share_bound.threshold),
        ),
        ("share_bound_exceptions", list(&scan.share_bound.exceptions)),
    ];
    let mut json = scan.to_json();
    json["command"] = serde_json::json!("scan");
    json["seed"] = serde_json::json!(cli.seed);
    // A missing threshold means the last scanned layer still violated
    // an inequality: report it as a claim violation.
    let code =
        if scan.dim_bound.threshold.is_none() || scan.share_bound.threshold.is_none() {
            1
        } else {
            0
        };
    Ok(Output {
        doc: TableDoc {
            meta: meta_common(cli, "scan", Some(n_max)),
            columns: &[
                "n",
                "dim",
                "cumulative",
                "dim_bound_holds",
                "share_bound_holds",
            ],
            rows,
            notes,
            json,
        },
        code,
    })
}

fn cmd_rigidity(cli: &Cli, images: &[String]) -> Result<Output, Failure> {
    let n_max = cli.nmax.unwrap_or(6);
    require_rank(cli.r)?;
    require_prime(cli.p)?;
    require_layer_limits(cli.r, n_max + 1)?;
    if images.len() != cli.r {
        return Err(usage(format!(
            "rigidity needs exactly {} --image flags (one per generator), got {}",
            cli.r,
            images.len()
        )));
    }
    let mut words = Vec::new();
    for (i, text) in images.iter().enumerate() {
        let word = parse_free_word(text, cli.r).map_err(|e| {
            usage(format!("--image for x{}: {e}", i + 1))
        })?;
        words.push(word);
    }
    let phi = Endomorphism::new(words);
    let report = check_rigidity(&phi, cli.p, n_max, None);

    let mut rows = Vec::new();
    let mut notes = vec![("truncation", report.truncation.to_string())];
    let code = match &report.outcome {
        RigidityOutcome::PreconditionFailed {
            generator,
            valuation,
        } => {
            notes.push(("outcome", "precondition_failed".to_string()));
            notes.push((
                "precondition",
                format!(
                    "phi(x{g})*x{g}^-1 has valuation {valuation}, needs at least 2",
                    g = generator + 1
                ),
            ));
            2
        }
        RigidityOutcome::Checked {
            records,
            violations,
        } => {
            for rec in records {
                rows.push(vec![
                    rec.n.to_string(),
                    rec.basis_element.clone(),
                    rec.valuation.to_string(),
                    rec.verdict.to_string(),
                ]);
            }
            notes.push(("outcome", "checked".to_string()));
            notes.push(("violations", violations.to_string()));
            if *violations > 0 {
                1
            } else {
                0
            }
        }
    };

    let mut json = report.to_json();
    json["command"] = serde_json::json!("rigidity");
    json["seed"] = serde_json::json!(cli.seed);
    let mut meta = meta_common(cli, "rigidity", Some(n_max));
    meta.push(("phi", report.phi.join(" ")));
    Ok(Output {
        doc: TableDoc {
            meta,
            columns: &["n", "basis_element", "valuation", "verdict"],
            rows,
            notes,
            json,
        },
        code,
    })
}

fn cmd_census(cli: &Cli) -> Result<Output, Failure> {
    let n_max = cli.nmax.unwrap_or(3);
    require_rank(cli.r)?;
    require_prime(cli.p)?;
    if n_max < 1 {
        return Err(usage("--nmax must be at least 1"));
    }
    require_layer_limits(cli.r, n_max)?;
    let budget = LatticeBudget::with_max_size(cli.budget);
    let census = characteristic_census(cli.r, cli.p, n_max, &budget)
        .map_err(|e| resource(e.to_string()))?;

    let rows = census
        .rows
        .iter()
        .map(|row| {
            vec![
                row.n.to_string(),
                row.dim_u.to_string(),
                row.index_exponent.to_string(),
                row.count.to_string(),
                row.exact.to_string(),
            ]
        })
        .collect();
    let cumulative = census
        .cumulative_by_exponent()
        .iter()
        .map(|(e, c)| format!("{e}:{c}"))
        .collect::<Vec<_>>()
        .join(",");
    let fit = match census.growth_fit() {
        None => "insufficient data".to_string(),
        Some(f) => format!("slope={} intercept={}", f.slope, f.intercept),
    };
    let notes = vec![
        ("cumulative_by_exponent", cumulative),
        ("fit", fit),
        ("exact", census.all_exact().to_string()),
    ];
    let mut json = census.to_json();
    json["command"] = serde_json::json!("census");
    json["seed"] = serde_json::json!(cli.seed);
    Ok(Output::ok(TableDoc {
        meta: meta_common(cli, "census", Some(n_max)),
        columns: &["n", "dimU", "index_exponent", "count", "exact"],
        rows,
        notes,
        json,
    }))
}

/// Brute-force normal subgroup listing for a plain group instance.
fn plain_group_output(
    cli: &Cli,
    instance: &str,
    gens: Vec<zassenhaus::permw::Perm>,
) -> Result<Output, Failure> {
    let table = enumerate_elements(&gens, cli.budget).map_err(|e| resource(e.to_string()))?;
    let normals = normal_subgroups(&table);
    let rows: Vec<Vec<String>> = normals
        .iter()
        .map(|n| {
            vec![
                n.len().to_string(),
                (table.order() / n.len()).to_string(),
                "subgroup".to_string(),
            ]
        })
        .collect();
    let json = serde_json::json!({
        "command": "wreath",
        "instance": instance,
        "seed": cli.seed,
        "order": table.order(),
        "degree": table.degree(),
        "class_count": table.class_count(),
        "normal_count": normals.len(),
        "normal_orders": normals.iter().map(|n| n.len()).collect::<Vec<_>>(),
    });
    Ok(Output::ok(TableDoc {
        meta: wreath_meta(cli, instance),
        columns: &["order", "index", "verdict"],
        rows,
        notes: vec![
            ("order", table.order().to_string()),
            ("normal_count", normals.len().to_string()),
        ],
        json,
    }))
}

fn wreath_meta(cli: &Cli, instance: &str) -> Vec<(&'static str, String)> {
    vec![
        ("command", "wreath".to_string()),
        ("instance", instance.to_string()),
        ("seed", cli.seed.to_string()),
    ]
}

/// Dichotomy report rendering shared by the positive instance and the
/// negative control.
fn dichotomy_output(
    cli: &Cli,
    instance: &str,
    bottom: Vec<zassenhaus::permw::Perm>,
    negative_control: bool,
) -> Result<Output, Failure> {
    let h = enumerate_elements(&bottom, cli.budget).map_err(|e| resource(e.to_string()))?;
    let k = enumerate_elements(&cyclic_gens(2), cli.budget).map_err(|e| resource(e.to_string()))?;
    let report = verify_wreath_dichotomy(&h, &k, cli.budget).map_err(|e| resource(e.to_string()))?;

    let rows: Vec<Vec<String>> = report
        .records
        .iter()
        .map(|rec| {
            use zassenhaus::permw::DichotomyVerdict::*;
            let verdict = match &rec.verdict {
                ContainsBase => "contains_base".to_string(),
                BlockPower { factor_order, .. } => format!("block_power:{factor_order}"),
                Violation => "violation".to_string(),
            };
            vec![rec.order.to_string(), rec.index.to_string(), verdict]
        })
        .collect();

    let expected = if negative_control {
        // The control passes exactly when the hypotheses fail and the
        // dichotomy visibly breaks.
        !report.hypothesis_failures.is_empty() && report.violations() > 0
    } else {
        report.hypothesis_failures.is_empty() && report.dichotomy_holds()
    };
    let mut json = report.to_json();
    json["command"] = serde_json::json!("wreath");
    json["instance"] = serde_json::json!(instance);
    json["seed"] = serde_json::json!(cli.seed);
    json["negative_control"] = serde_json::json!(negative_control);
    json["as_expected"] = serde_json::json!(expected);
    let notes = vec![
        ("wreath_order", report.wreath_order.to_string()),
        ("normal_count", report.normal_count().to_string()),
        ("violations", report.violations().to_string()),
        (
            "hypothesis_failures",
            if report.hypothesis_failures.is_empty() {
                "none".to_string()
            } else {
                report.hypothesis_failures.join("; ")
            },
        ),
        ("as_expected", expected.to_string()),
    ];
    Ok(Output {
        doc: TableDoc {
            meta: wreath_meta(cli, instance),
            columns: &["order", "index", "verdict"],
            rows,
            notes,
            json,
        },
        code: if expected { 0 } else { 1 },
    })
}

fn tower_output(cli: &Cli, instance: &str, powers_text: &str) -> Result<Output, Failure> {
    let mut powers = Vec::new();
    if !powers_text.is_empty() {
        for part in powers_text.split(',') {
            let m: u32 = part
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad tower power {part:?}")))?;
            if m == 0 {
                return Err(usage("tower powers must be at least 1"));
            }
            powers.push(m);
        }
    }
    let spec = TowerSpec::alternating5(&powers);
    let formula = tower_normal_count(&spec);
    // Structural cross-check by brute force where the level groups fit
    // the budget; large levels fall back to the closed form alone.
    let (structural, verified) = match tower_normal_count_by_recursion(&spec, cli.budget) {
        Ok(v) => (Some(v), true),
        Err(_) => (None, false),
    };
    let code = match &structural {
        Some(v) if *v != formula => 1,
        _ => 0,
    };
    let rows = spec
        .levels
        .iter()
        .enumerate()
        .map(|(i, level)| {
            vec![
                (i + 1).to_string(),
                level.label.clone(),
                level.power.to_string(),
            ]
        })
        .collect();
    let json = serde_json::json!({
        "command": "wreath",
        "instance": instance,
        "seed": cli.seed,
        "levels": spec.levels.iter().map(|l| serde_json::json!({
            "label": l.label,
            "power": l.power,
        })).collect::<Vec<_>>(),
        "normal_count": formula.to_string(),
        "structural_count": structural.as_ref().map(|v| v.to_string()),
        "structurally_verified": verified,
    });
    let notes = vec![
        ("normal_count", formula.to_string()),
        (
            "structural_count",
            structural
                .map(|v| v.to_string())
                .unwrap_or_else(|| "skipped (level exceeds budget)".to_string()),
        ),
    ];
    Ok(Output {
        doc: TableDoc {
            meta: wreath_meta(cli, instance),
            columns: &["level", "label", "power"],
            rows,
            notes,
            json,
        },
        code,
    })
}

fn cmd_wreath(cli: &Cli, instance: &str) -> Result<Output, Failure> {
    match instance {
        "a5" => plain_group_output(cli, instance, alternating_gens(5)),
        "a4" => plain_group_output(cli, instance, alternating_gens(4)),
        "a5wrc2" => dichotomy_output(cli, instance, alternating_gens(5), false),
        "d8-negative-control" => dichotomy_output(cli, instance, cyclic_gens(2), true),
        other => match other.strip_prefix("tower:") {
            Some(powers) => tower_output(cli, instance, powers),
            None => Err(usage(format!(
                "unknown instance {other:?}: expected a5wrc2, a5, a4, d8-negative-control, or tower:m1,m2,..."
            ))),
        },
    }
}

fn configure_threads() {
    if let Ok(text) = std::env::var("ZGROW_THREADS") {
        if let Ok(n) = text.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let output = match &cli.command {
        Cmd::Witt => cmd_witt(cli)?,
        Cmd::Scan => cmd_scan(cli)?,
        Cmd::Rigidity { images } => cmd_rigidity(cli, images)?,
        Cmd::Census => cmd_census(cli)?,
        Cmd::Wreath { instance } => cmd_wreath(cli, instance)?,
    };
    emit(cli, output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("zgrow: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
