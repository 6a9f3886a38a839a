use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dimres::ed::{search_max_ed, EdBudget, SearchReport, NEGATIVITY_CONVENTION};
use dimres::gqd::{gqd, monogamy_check};
use dimres::measures::{
    discord_one_sided, geometric_discord, is_classical, negativity, rsp_payoff, OptBudget,
};
use dimres::partition::{labels, Partition};
use dimres::qcore::{matrix_to_json, max_abs_diff, partial_trace, read_state, state_to_json, DensityMatrix};
use dimres::report::{render_csv, render_json, write_atomic, Provenance, Table};
use dimres::states::{
    build_rho_rsp, build_rsp_extension, li_luo_extend_with_witness, DecompositionFile, FlagSplit,
    RspVariant,
};
use dimres::thermo::{extractable_work, search_min_extension, work_ledger, ExtensionBudget};
use dimres::Error;

#[derive(Parser)]
#[command(name = "dimres", version, about = "Classical extensions, correlation measures and work")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; the extension is replaced by .csv / .json. Stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
}

#[derive(Args, Clone)]
struct EdArgs {
    /// Qudit dimensions, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    d: Vec<usize>,
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    /// Perturbation trials per refined candidate.
    #[arg(long, default_value_t = 4_000)]
    refine: usize,
    #[arg(long, default_value_t = 8)]
    top_k: usize,
    #[arg(long, default_value_t = 20)]
    reject_window: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Largest entanglement distribution by classical states, per dimension.
    Table1 {
        #[command(flatten)]
        ed: EdArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Same search with the best bases included in the JSON output.
    EdSearch {
        #[command(flatten)]
        ed: EdArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Extractable work of the three extensions of ρ_RSP.
    Table2 {
        #[command(flatten)]
        common: Common,
    },
    /// Geometric discord and RSP payoff of ρ_RSP and of each extension's reduction.
    Rsp {
        #[command(flatten)]
        common: Common,
    },
    /// Classical extension of a decomposition file, or of ρ_RSP by variant.
    Extend {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "six")]
        variant: RspVariant,
        #[command(flatten)]
        common: Common,
    },
    /// Smallest classical extension of a two-party state found by search.
    MinExtension {
        /// Target state; ρ_RSP if absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// (d_A,d_B) ladder such as "2x2,4x4".
        #[arg(long, value_delimiter = ',', default_values_t = ["4x4".to_string()])]
        dims: Vec<String>,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        /// Add the known C⁴⊗C⁴ extension of ρ_RSP as a start.
        #[arg(long)]
        seeded: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Global quantum discord; with three or more groups, the monogamy check.
    Gqd {
        #[arg(long)]
        input: PathBuf,
        /// Groups separated by '|', e.g. "a|abar|B".
        #[arg(long)]
        partition: String,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[command(flatten)]
        common: Common,
    },
    /// One-sided discord with measurements on the given factors.
    Discord {
        #[arg(long)]
        input: PathBuf,
        /// Measured factors, comma separated.
        #[arg(long)]
        measured: String,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Work ledger of a four-factor extension, or extractable work otherwise.
    Work {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "six")]
        variant: RspVariant,
        #[command(flatten)]
        common: Common,
    },
    /// Check that a state file holds a density matrix.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

struct Output {
    table: Table,
    json: Value,
}

fn emit(common: &Common, prov: &Provenance, out: &Output) -> dimres::Result<()> {
    let csv = render_csv(prov, &out.table)?;
    let json = render_json(prov, &out.json)?;
    match &common.out {
        None => {
            if common.format == Format::Json {
                print!("{json}");
            } else {
                print!("{csv}");
            }
        }
        Some(path) => {
            if common.format != Format::Json {
                write_atomic(&path.with_extension("csv"), csv.as_bytes())?;
            }
            if common.format != Format::Csv {
                write_atomic(&path.with_extension("json"), json.as_bytes())?;
            }
        }
    }
    Ok(())
}

fn ed_reports(ed: &EdArgs, seed: u64) -> dimres::Result<Vec<SearchReport>> {
    let budget = EdBudget {
        samples: ed.samples,
        refine_steps: ed.refine,
        top_k: ed.top_k,
        reject_window: ed.reject_window,
        ..EdBudget::default()
    };
    ed.d.iter().map(|&d| search_max_ed(d, &budget, seed)).collect()
}

fn ed_output(ed: &EdArgs, seed: u64, with_instances: bool) -> dimres::Result<Output> {
    let reports = ed_reports(ed, seed)?;
    for w in reports.iter().flat_map(|r| &r.warnings) {
        eprintln!("warning: {w}");
    }
    let mut table = Table::new(vec!["d", "best_ed", "samples", "seed"]);
    let mut rows = Vec::new();
    for r in &reports {
        table.push(vec![r.d.into(), r.best_ed.into(), r.samples_evaluated.into(), r.master_seed.into()]);
        let mut row = json!({
            "d": r.d,
            "best_ed": r.best_ed,
            "best_sampled_ed": r.best_sampled_ed,
            "samples": r.samples_evaluated,
            "refinement_steps": r.refinement_steps,
            "seed": r.master_seed,
            "warnings": r.warnings,
        });
        if with_instances {
            row["best_instance"] = json!(matrix_to_json(r.best_instance.basis()));
        }
        rows.push(row);
    }
    Ok(Output { table, json: json!({ "negativity": NEGATIVITY_CONVENTION, "rows": rows }) })
}

fn table2() -> dimres::Result<Output> {
    let rho = build_rho_rsp();
    let mut table = Table::new(vec!["extension", "dimension", "extractable_work"]);
    let mut rows = Vec::new();
    for v in RspVariant::ALL {
        let ext = build_rsp_extension(v);
        let work = extractable_work(&ext.state)?;
        let reduction = partial_trace(&ext.state, &[labels::ABAR, labels::BBAR])?;
        let cut = Partition::cut(&[labels::A, labels::ABAR], &[labels::B, labels::BBAR])?;
        table.push(vec![v.name().into(), ext.state.dim().into(), work.into()]);
        rows.push(json!({
            "extension": v.name(),
            "dimension": ext.state.dim(),
            "extractable_work": work,
            "reduction_error": max_abs_diff(reduction.matrix(), rho.matrix()),
            "classical": is_classical(&ext.state, &cut, None)?.classical,
        }));
    }
    Ok(Output { table, json: json!(rows) })
}

fn rsp() -> dimres::Result<Output> {
    let rho = build_rho_rsp();
    let ab = Partition::cut(&[labels::A], &[labels::B])?;
    let mut table = Table::new(vec!["state", "geometric_discord", "rsp_payoff", "negativity"]);
    let mut rows = Vec::new();
    let mut push = |name: String, s: &DensityMatrix| -> dimres::Result<()> {
        let (gd, pay, neg) = (geometric_discord(s)?, rsp_payoff(s)?, negativity(s, &ab)?);
        table.push(vec![name.clone().into(), gd.into(), pay.into(), neg.into()]);
        rows.push(json!({ "state": name, "geometric_discord": gd, "rsp_payoff": pay, "negativity": neg }));
        Ok(())
    };
    push("rho_rsp".into(), &rho)?;
    for v in RspVariant::ALL {
        let red = partial_trace(&build_rsp_extension(v).state, &[labels::ABAR, labels::BBAR])?;
        push(format!("reduction_{}", v.name()), &red)?;
    }
    Ok(Output { table, json: json!(rows) })
}

fn extend(input: Option<&Path>, variant: RspVariant) -> dimres::Result<Output> {
    let ext = match input {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let file: DecompositionFile = serde_json::from_str(&text)
                .map_err(|e| Error::Parse { path: path.display().to_string(), message: e.to_string() })?;
            let decomp = file
                .to_decomposition()
                .map_err(|e| Error::Parse { path: path.display().to_string(), message: e.to_string() })?;
            li_luo_extend_with_witness(&decomp, &FlagSplit::BothSides)?
        }
        None => build_rsp_extension(variant),
    };
    let cut = Partition::cut(&[labels::A, labels::ABAR], &[labels::B, labels::BBAR])?;
    let report = is_classical(&ext.state, &cut, None)?;
    let mut table = Table::new(vec!["dimension", "extractable_work", "classical", "residual"]);
    let work = extractable_work(&ext.state)?;
    table.push(vec![ext.state.dim().into(), work.into(), report.classical.into(), report.residual.into()]);
    let file = state_to_json(&ext.state);
    Ok(Output {
        table,
        json: json!({
            "layout": file.layout,
            "matrix": file.matrix,
            "extractable_work": work,
            "classical": report.classical,
            "basis_a": matrix_to_json(&ext.witness.basis_a),
            "basis_b": matrix_to_json(&ext.witness.basis_b),
        }),
    })
}

fn parse_dims(text: &str) -> dimres::Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("bad dimension pair {text:?}, expected e.g. 4x4"));
    let (l, r) = text.split_once('x').ok_or_else(bad)?;
    Ok((l.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?))
}

fn min_extension(input: Option<&Path>, dims: &[String], restarts: usize, seeded: bool, seed: u64) -> dimres::Result<Output> {
    let target = match input {
        Some(p) => read_state(p)?,
        None => build_rho_rsp(),
    };
    let ladder = dims.iter().map(|d| parse_dims(d)).collect::<dimres::Result<Vec<_>>>()?;
    let seeds = if seeded { vec![build_rsp_extension(RspVariant::Opt).witness] } else { Vec::new() };
    let budget = ExtensionBudget { restarts, seed, ..ExtensionBudget::default() };
    let report = search_min_extension(&target, &ladder, &seeds, &budget)?;
    let mut table = Table::new(vec!["d_a", "d_b", "best_distance", "target_reached"]);
    for a in &report.attempts {
        table.push(vec![a.d_a.into(), a.d_b.into(), a.best_distance.into(), a.success.into()]);
    }
    Ok(Output {
        table,
        json: json!({
            "attempts": report.attempts,
            "least": report.least,
            "work": report.work,
            "target_reached": report.least.is_some(),
            "witness": report.witness.as_ref().map(state_to_json),
        }),
    })
}

fn opt_budget(restarts: usize, seed: u64) -> OptBudget {
    OptBudget::default().with_restarts(restarts).with_seed(seed)
}

fn gqd_cmd(input: &Path, partition: &str, restarts: usize, seed: u64) -> dimres::Result<Output> {
    let state = read_state(input)?;
    let parts = Partition::parse(partition, state.layout())?;
    let budget = opt_budget(restarts, seed);
    if parts.len() >= 3 {
        let r = monogamy_check(&state, &parts, &budget)?;
        let rhs: f64 = r.rhs_terms.iter().map(|t| t.value).sum();
        let mut table = Table::new(vec!["partition", "lhs", "rhs", "slack", "holds"]);
        table.push(vec![r.partition.clone().into(), r.lhs.into(), rhs.into(), r.slack.into(), r.holds.into()]);
        Ok(Output { table, json: json!(r) })
    } else {
        let r = gqd(&state, &parts, &budget)?;
        let mut table = Table::new(vec!["partition", "gqd"]);
        table.push(vec![parts.to_string().into(), r.value.into()]);
        Ok(Output { table, json: json!(r) })
    }
}

fn discord_cmd(input: &Path, measured: &str, restarts: usize, seed: u64) -> dimres::Result<Output> {
    let state = read_state(input)?;
    let group = Partition::parse(measured, state.layout())?;
    if group.len() != 1 {
        return Err(Error::InvalidArgument("measured party must be a single group".into()));
    }
    let r = discord_one_sided(&state, group.group(0), &opt_budget(restarts, seed))?;
    let mut table = Table::new(vec!["measured", "discord"]);
    table.push(vec![group.group(0).join(",").into(), r.value.into()]);
    Ok(Output { table, json: json!(r) })
}

fn work_cmd(input: Option<&Path>, variant: RspVariant) -> dimres::Result<Output> {
    let state = match input {
        Some(p) => read_state(p)?,
        None => build_rsp_extension(variant).state,
    };
    let four = state.layout().len() == 4
        && [labels::A, labels::ABAR, labels::B, labels::BBAR].iter().all(|l| state.layout().contains(l));
    if !four {
        let w = extractable_work(&state)?;
        let mut table = Table::new(vec!["dimension", "extractable_work"]);
        table.push(vec![state.dim().into(), w.into()]);
        return Ok(Output { table, json: json!({ "dimension": state.dim(), "extractable_work": w }) });
    }
    let l = work_ledger(&state)?;
    let mut table = Table::new(vec![
        "w_total", "w_reduced", "w_aux", "mi", "identity_residual", "w_classical", "inequality_slack",
    ]);
    table.push(vec![
        l.w_total.into(),
        l.w_reduced.into(),
        l.w_aux.into(),
        l.mi.into(),
        l.identity_residual.into(),
        l.w_classical.into(),
        l.inequality_slack.into(),
    ]);
    Ok(Output { table, json: json!(l) })
}

/// `Ok(false)` when the state parsed but failed a physical check.
fn validate_cmd(input: &Path, common: &Common, prov: &Provenance) -> dimres::Result<bool> {
    let state = read_state(input)?;
    let report = state.validate();
    let failures: Vec<String> = report.failures.iter().map(|f| f.to_string()).collect();
    let mut table = Table::new(vec!["valid", "hermiticity_residual", "trace", "min_eigenvalue", "failures"]);
    table.push(vec![
        report.passed().into(),
        report.hermiticity_residual.into(),
        report.trace_re.into(),
        report.min_eigenvalue.into(),
        failures.join(";").into(),
    ]);
    let out = Output {
        table,
        json: json!({
            "valid": report.passed(),
            "hermiticity_residual": report.hermiticity_residual,
            "trace": [report.trace_re, report.trace_im],
            "min_eigenvalue": report.min_eigenvalue,
            "failures": failures,
            "dimension": state.dim(),
        }),
    };
    emit(common, prov, &out)?;
    if !report.passed() {
        eprintln!(
            "{}: invalid state: {} (trace = {}{:+}i, hermiticity residual {:e}, min eigenvalue {:e})",
            input.display(),
            failures.join(", "),
            report.trace_re,
            report.trace_im,
            report.hermiticity_residual,
            report.min_eigenvalue
        );
    }
    Ok(report.passed())
}

fn run(cli: Cli, command_line: String) -> dimres::Result<bool> {
    let run_one = |common: &Common, out: Output| -> dimres::Result<bool> {
        emit(common, &Provenance::new(command_line.clone(), Some(common.seed)), &out)?;
        Ok(true)
    };
    match cli.command {
        Command::Table1 { ed, common } => run_one(&common, ed_output(&ed, common.seed, false)?),
        Command::EdSearch { ed, common } => run_one(&common, ed_output(&ed, common.seed, true)?),
        Command::Table2 { common } => run_one(&common, table2()?),
        Command::Rsp { common } => run_one(&common, rsp()?),
        Command::Extend { input, variant, common } => run_one(&common, extend(input.as_deref(), variant)?),
        Command::MinExtension { input, dims, restarts, seeded, common } => {
            run_one(&common, min_extension(input.as_deref(), &dims, restarts, seeded, common.seed)?)
        }
        Command::Gqd { input, partition, restarts, common } => {
            run_one(&common, gqd_cmd(&input, &partition, restarts, common.seed)?)
        }
        Command::Discord { input, measured, restarts, common } => {
            run_one(&common, discord_cmd(&input, &measured, restarts, common.seed)?)
        }
        Command::Work { input, variant, common } => run_one(&common, work_cmd(input.as_deref(), variant)?),
        Command::Validate { input, common } => {
            let prov = Provenance::new(command_line.clone(), Some(common.seed));
            validate_cmd(&input, &common, &prov)
        }
    }
}

fn main() -> ExitCode {
    let mut words = vec!["dimres".to_string()];
    words.extend(std::env::args().skip(1));
    let command_line = words.join(" ");
    let cli = Cli::parse();
    match run(cli, command_line) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
