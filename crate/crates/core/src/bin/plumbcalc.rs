//! `plumbcalc <validate|solve|cohomology|sweep|report> <config-file> [options]`
//!
//! Exit status: 0 success, 2 input error, 3 internal invariant violation.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use num_traits::Zero;

use plumbcalc::cohomology::PeelOrder;
use plumbcalc::report::{self, ReportOptions};
use plumbcalc::{
    growth_analysis, parse_config, primitive_positive_solution, validate_config, verify_orthogonality, ConfigFile,
};

const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Validate,
    Solve,
    Cohomology,
    Sweep,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "plumbcalc",
    version,
    about = "Divisor and cohomology bookkeeping for chains of rational curves"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Configuration file (`chain b=[..] a=[..]` lines, optional `sweep n=[lo,hi]`)
    config: PathBuf,

    /// Twist multiple for `cohomology` and `report`
    #[arg(long, default_value_t = 2)]
    n: u64,

    /// Sweep range LO:HI, overrides the file's sweep block
    #[arg(long = "n-range", value_parser = parse_range)]
    n_range: Option<(u64, u64)>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Output file (a directory for `report --format csv`)
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long = "peel-order", default_value = "canonical")]
    peel_order: PeelOrder,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: u64 = lo.trim().parse().map_err(|_| format!("`{lo}` is not an integer"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("`{hi}` is not an integer"))?;
    if lo < 1 || lo > hi {
        return Err(format!("range needs 1 <= LO <= HI, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<plumbcalc::Error> for Failure {
    fn from(e: plumbcalc::Error) -> Self {
        if e.is_input_error() {
            Failure::input(e.to_string())
        } else {
            Failure::internal(format!("internal invariant violated: {e}"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("plumbcalc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn sweep_range(cli: &Cli, file: &ConfigFile) -> Result<(u64, u64), Failure> {
    cli.n_range
        .or(file.sweep)
        .ok_or_else(|| Failure::input("no sweep range: pass --n-range LO:HI or add `sweep n=[lo,hi]` to the file"))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", cli.config.display())))?;
    let file = parse_config(&text).map_err(|e| Failure::input(format!("{}: {e}", cli.config.display())))?;
    let config = &file.config;

    match cli.command {
        Command::Validate => {
            let v = validate_config(config)?;
            let section = report::validation_section(&v);
            let body = match cli.format {
                Format::Json => json(&section),
                Format::Csv => report::validation_csv(&section),
                Format::Text => {
                    let mut s = String::new();
                    writeln!(s, "negative definite: {}", section.negative_definite).unwrap();
                    writeln!(s, "leading minors: {}", section.leading_minors.join(" ")).unwrap();
                    for c in &section.chains {
                        writeln!(
                            s,
                            "chain {}: HJ (n,q) = ({},{}), fundamental cycle [{}], p_a = {}, rational {}",
                            c.chain,
                            c.hj_n,
                            c.hj_q,
                            c.fundamental_cycle.join(","),
                            c.genus,
                            c.rational
                        )
                        .unwrap();
                    }
                    writeln!(s, "rational: {}", section.rational).unwrap();
                    s
                }
            };
            emit(cli, &body)?;
            if !v.is_valid() {
                return Err(Failure::input(
                    "configuration does not contract to a rational singular point",
                ));
            }
        }
        Command::Solve => {
            let sol = primitive_positive_solution(config)?;
            let section = report::solution_section(config, &sol)?;
            let body = match cli.format {
                Format::Json => json(&section),
                Format::Csv => report::solution_csv(&section),
                Format::Text => {
                    let mut s = String::new();
                    writeln!(s, "x0 = {}", section.x0).unwrap();
                    for c in &section.curves {
                        writeln!(s, "x[{}] = {}    L.{} = {}", c.curve, c.x, c.curve, c.l_dot_c).unwrap();
                    }
                    s
                }
            };
            emit(cli, &body)?;
            let dots = verify_orthogonality(config, &sol)?;
            if dots.iter().flatten().any(|d| !d.is_zero()) {
                return Err(Failure::internal("internal invariant violated: L.C != 0"));
            }
        }
        Command::Cohomology => {
            let sol = primitive_positive_solution(config)?;
            let ledger = report::ledger_section(config, &sol, cli.n, cli.peel_order)?;
            let vanishing = report::vanishing_row(config, &sol, cli.n, cli.peel_order)?;
            let body = match cli.format {
                Format::Json => json(&serde_json::json!({
                    "n": cli.n.to_string(),
                    "ledger": ledger,
                    "component_vanishing": vanishing.components,
                    "e_vanishes": vanishing.e_vanishes,
                })),
                Format::Csv => report::ledger_csv(&ledger),
                Format::Text => {
                    let mut s = String::new();
                    writeln!(s, "n = {}, target = twist = {}", cli.n, ledger.target).unwrap();
                    if ledger.steps_truncated {
                        writeln!(s, "{} steps (per-step table omitted)", ledger.step_count).unwrap();
                    } else {
                        writeln!(s, "step  component  twist  d_T  d_N  h0  h1  exact").unwrap();
                        for (i, st) in ledger.steps.iter().enumerate() {
                            writeln!(
                                s,
                                "{i:>4}  {}  {}  {}  {}  {}  {}  {}",
                                st.component, st.twist, st.d_t, st.d_n, st.h0_step, st.h1_step, st.exact
                            )
                            .unwrap();
                        }
                    }
                    writeln!(s, "h0 = [{},{}]", ledger.h0.lo, ledger.h0.hi).unwrap();
                    writeln!(s, "h1 = [{},{}]", ledger.h1.lo, ledger.h1.hi).unwrap();
                    writeln!(s, "euler = {}", ledger.euler).unwrap();
                    for f in &vanishing.components {
                        writeln!(s, "H0 vanishing on x*{}: {}", f.curve, f.vanishes).unwrap();
                    }
                    writeln!(s, "E-vanishing: {}", vanishing.e_vanishes).unwrap();
                    s
                }
            };
            emit(cli, &body)?;
        }
        Command::Sweep => {
            let (lo, hi) = sweep_range(cli, &file)?;
            let sol = primitive_positive_solution(config)?;
            let growth = report::growth_section(&growth_analysis(config, &sol, lo, hi, cli.peel_order)?);
            let body = match cli.format {
                Format::Json => json(&growth),
                Format::Csv => report::growth_csv(&growth),
                Format::Text => {
                    let mut s = String::new();
                    writeln!(s, "n  h1_lo  h1_hi  second_diff").unwrap();
                    for r in &growth.rows {
                        writeln!(
                            s,
                            "{}  {}  {}  {}",
                            r.n,
                            r.h1_lo,
                            r.h1_hi,
                            r.second_diff.as_deref().unwrap_or("-")
                        )
                        .unwrap();
                    }
                    writeln!(
                        s,
                        "leading coefficient = {} (~{})",
                        growth.quadratic_leading_coefficient, growth.quadratic_leading_coefficient_float
                    )
                    .unwrap();
                    writeln!(s, "threshold n = {}", growth.threshold_n.as_deref().unwrap_or("none")).unwrap();
                    s
                }
            };
            emit(cli, &body)?;
        }
        Command::Report => {
            let n_range = sweep_range(cli, &file)?;
            let r = report::build_report(
                &text,
                &file,
                ReportOptions {
                    n: cli.n,
                    n_range,
                    order: cli.peel_order,
                },
            )?;
            match cli.format {
                Format::Csv => {
                    let dir = cli
                        .out
                        .as_ref()
                        .ok_or_else(|| Failure::input("report --format csv needs --out DIR"))?;
                    report::write_csv_dir(&r, dir)
                        .map_err(|e| Failure::input(format!("cannot write {}: {e}", dir.display())))?;
                }
                Format::Json | Format::Text => emit(cli, &report::to_json(&r))?,
            }
        }
    }
    Ok(())
}
