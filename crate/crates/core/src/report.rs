//! Serializable run reports.
//!
//! Every exact number is rendered as a decimal string so that consumers with
//! 64-bit integers or doubles never truncate it. The only float is the
//! rendered growth coefficient, which always accompanies its exact rational.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cohomology::{
    check_component_h0_vanishing, check_h0_reduced_e_vanishing, discrepancy_report, growth_analysis, ne_ledger,
    ne_summary, CohomologyLedger, DimInterval, DiscrepancyRow, GrowthReport, LedgerSummary, PeelOrder,
};
use crate::config::ConfigFile;
use crate::divisor::{primitive_positive_solution, verify_orthogonality, DivisorSolution};
use crate::error::Result;
use crate::plumbing::{validate_config, CurveId, PlumbingConfig, ValidationReport};

pub const TOOL_NAME: &str = "plumbcalc";

/// Ledgers with more steps than this are reported by their totals only.
pub const LEDGER_STEP_LIMIT: u128 = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub metadata: Metadata,
    pub validation: ValidationSection,
    pub solution: SolutionSection,
    pub cohomology: CohomologySection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub input_sha256: String,
    pub n: String,
    pub n_range: Vec<String>,
    pub peel_order: PeelOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub negative_definite: bool,
    pub rational: bool,
    pub leading_minors: Vec<String>,
    pub chains: Vec<ChainRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRow {
    pub chain: String,
    pub hj_n: String,
    pub hj_q: String,
    pub fundamental_cycle: Vec<String>,
    pub genus: String,
    pub rational: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSection {
    pub x0: String,
    pub curves: Vec<CurveRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRow {
    pub curve: String,
    pub b: String,
    pub a: String,
    pub x: String,
    pub l_dot_c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: String,
    pub hi: String,
}

impl From<DimInterval> for Interval {
    fn from(d: DimInterval) -> Self {
        Interval {
            lo: d.lo.to_string(),
            hi: d.hi.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRow {
    pub component: String,
    pub remaining: String,
    pub twist: String,
    pub d_t: String,
    pub d_n: String,
    pub h0_step: String,
    pub h1_step: String,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSection {
    pub target: String,
    pub twist: String,
    pub step_count: String,
    pub inexact_steps: String,
    pub h0: Interval,
    pub h1: Interval,
    pub euler: String,
    /// Empty when the ledger exceeds [`LEDGER_STEP_LIMIT`].
    pub steps: Vec<StepRow>,
    pub steps_truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFlag {
    pub curve: String,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingRow {
    pub n: String,
    pub components: Vec<CurveFlag>,
    pub e_vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: String,
    pub h1_lo: String,
    pub h1_hi: String,
    pub second_diff: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSection {
    pub rows: Vec<GrowthRow>,
    pub quadratic_leading_coefficient: String,
    pub quadratic_leading_coefficient_float: f64,
    pub threshold_n: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyLine {
    pub n: String,
    pub engine_h1_lo: String,
    pub engine_h1_hi: String,
    pub paper_value: String,
    pub difference: String,
    pub mismatched_steps: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologySection {
    pub n: String,
    pub ledger: LedgerSection,
    pub component_vanishing: Vec<CurveFlag>,
    pub e_vanishes: bool,
    pub vanishing_table: Vec<VanishingRow>,
    pub growth: GrowthSection,
    pub discrepancy: Vec<DiscrepancyLine>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub n: u64,
    pub n_range: (u64, u64),
    pub order: PeelOrder,
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    let mut s = String::with_capacity(64);
    for byte in digest.iter() {
        write!(s, "{byte:02x}").expect("writing to a String");
    }
    s
}

fn curve_label(c: CurveId) -> String {
    c.to_string()
}

pub fn validation_section(report: &ValidationReport) -> ValidationSection {
    ValidationSection {
        negative_definite: report.negative_definite,
        rational: report.rational(),
        leading_minors: report.leading_minors.iter().map(BigInt::to_string).collect(),
        chains: report
            .chains
            .iter()
            .enumerate()
            .map(|(i, c)| ChainRow {
                chain: (i + 1).to_string(),
                hj_n: c.hj.n.to_string(),
                hj_q: c.hj.q.to_string(),
                fundamental_cycle: c.fundamental_cycle.iter().map(u64::to_string).collect(),
                genus: c.genus.to_string(),
                rational: c.rational,
            })
            .collect(),
    }
}

pub fn solution_section(config: &PlumbingConfig, sol: &DivisorSolution) -> Result<SolutionSection> {
    let dots = verify_orthogonality(config, sol)?;
    Ok(SolutionSection {
        x0: sol.x0.to_string(),
        curves: config
            .curves()
            .map(|c| CurveRow {
                curve: curve_label(c),
                b: config.b(c).to_string(),
                a: config.a(c).to_string(),
                x: sol.coefficient(c).to_string(),
                l_dot_c: dots[c.chain][c.index].to_string(),
            })
            .collect(),
    })
}

fn format_signed(twist: &[Vec<i128>]) -> String {
    let mut s = String::new();
    for (i, row) in twist.iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let label = CurveId::new(i, j);
            let mag = m.unsigned_abs();
            if s.is_empty() {
                if m < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if m < 0 { " - " } else { " + " });
            }
            if mag != 1 {
                write!(s, "{mag}").expect("writing to a String");
            }
            write!(s, "{label}").expect("writing to a String");
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn ledger_section(
    config: &PlumbingConfig,
    sol: &DivisorSolution,
    n: u64,
    order: PeelOrder,
) -> Result<LedgerSection> {
    let ne = sol.e_cycle(config)?.scaled(n)?;
    let summary: LedgerSummary = ne_summary(config, sol, n, order)?;
    let (steps, truncated) = if summary.steps <= LEDGER_STEP_LIMIT {
        let ledger: CohomologyLedger = ne_ledger(config, sol, n, order)?;
        debug_assert_eq!(ledger.summary(), summary);
        let rows = ledger
            .steps
            .iter()
            .map(|s| StepRow {
                component: curve_label(s.component),
                remaining: s.remaining.to_string(),
                twist: format_signed(&s.twist),
                d_t: s.degrees.d_t.to_string(),
                d_n: s.degrees.d_n.to_string(),
                h0_step: s.h0_step.to_string(),
                h1_step: s.h1_step.to_string(),
                exact: s.exact,
            })
            .collect();
        (rows, false)
    } else {
        (Vec::new(), true)
    };
    Ok(LedgerSection {
        target: ne.to_string(),
        twist: ne.to_string(),
        step_count: summary.steps.to_string(),
        inexact_steps: summary.inexact_steps.to_string(),
        h0: summary.h0.into(),
        h1: summary.h1.into(),
        euler: summary.euler.to_string(),
        steps,
        steps_truncated: truncated,
    })
}

fn flags(config: &PlumbingConfig, table: &[Vec<bool>]) -> Vec<CurveFlag> {
    config
        .curves()
        .map(|c| CurveFlag {
            curve: curve_label(c),
            vanishes: table[c.chain][c.index],
        })
        .collect()
}

pub fn vanishing_row(config: &PlumbingConfig, sol: &DivisorSolution, n: u64, order: PeelOrder) -> Result<VanishingRow> {
    Ok(VanishingRow {
        n: n.to_string(),
        components: flags(config, &check_component_h0_vanishing(config, sol, n, order)?),
        e_vanishes: check_h0_reduced_e_vanishing(config, sol, n, order)?,
    })
}

pub fn growth_section(report: &GrowthReport) -> GrowthSection {
    let len = report.n_values.len();
    GrowthSection {
        rows: (0..len)
            .map(|i| GrowthRow {
                n: report.n_values[i].to_string(),
                h1_lo: report.h1_lo[i].to_string(),
                h1_hi: report.h1_hi[i].to_string(),
                second_diff: (i >= 1 && i + 1 < len).then(|| report.second_differences[i - 1].to_string()),
            })
            .collect(),
        quadratic_leading_coefficient: report.quadratic_leading_coefficient.to_string(),
        quadratic_leading_coefficient_float: report.quadratic_leading_coefficient_f64,
        threshold_n: report.threshold_n.map(|n| n.to_string()),
    }
}

pub fn discrepancy_lines(rows: &[DiscrepancyRow]) -> Vec<DiscrepancyLine> {
    rows.iter()
        .map(|r| DiscrepancyLine {
            n: r.n.to_string(),
            engine_h1_lo: r.engine_h1.lo.to_string(),
            engine_h1_hi: r.engine_h1.hi.to_string(),
            paper_value: r.paper_value.to_string(),
            difference: r.difference.to_string(),
            mismatched_steps: r.step_mismatches.iter().map(|m| m.l.to_string()).collect(),
        })
        .collect()
}

pub fn build_report(input_text: &str, file: &ConfigFile, opts: ReportOptions) -> Result<RunReport> {
    let config = &file.config;
    let validation = validate_config(config)?;
    let sol = primitive_positive_solution(config)?;
    let (lo, hi) = opts.n_range;

    let vanishing_table = (lo..=hi)
        .map(|n| vanishing_row(config, &sol, n, opts.order))
        .collect::<Result<Vec<_>>>()?;
    let at_n = vanishing_row(config, &sol, opts.n, opts.order)?;
    let growth = growth_analysis(config, &sol, lo, hi, opts.order)?;

    Ok(RunReport {
        metadata: Metadata {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_sha256: sha256_hex(input_text),
            n: opts.n.to_string(),
            n_range: vec![lo.to_string(), hi.to_string()],
            peel_order: opts.order,
        },
        validation: validation_section(&validation),
        solution: solution_section(config, &sol)?,
        cohomology: CohomologySection {
            n: opts.n.to_string(),
            ledger: ledger_section(config, &sol, opts.n, opts.order)?,
            component_vanishing: at_n.components,
            e_vanishes: at_n.e_vanishes,
            vanishing_table,
            growth: growth_section(&growth),
            discrepancy: discrepancy_lines(&discrepancy_report(config, &sol, lo, hi)?),
        },
    })
}

pub fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<RunReport> {
    serde_json::from_str(text)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

pub fn growth_csv(g: &GrowthSection) -> String {
    csv_string(
        &["n", "h1_lo", "h1_hi", "second_diff"],
        g.rows.iter().map(|r| {
            vec![
                r.n.clone(),
                r.h1_lo.clone(),
                r.h1_hi.clone(),
                r.second_diff.clone().unwrap_or_default(),
            ]
        }),
    )
}

pub fn discrepancy_csv(rows: &[DiscrepancyLine]) -> String {
    csv_string(
        &[
            "n",
            "engine_h1_lo",
            "engine_h1_hi",
            "paper_value",
            "difference",
            "mismatched_steps",
        ],
        rows.iter().map(|r| {
            vec![
                r.n.clone(),
                r.engine_h1_lo.clone(),
                r.engine_h1_hi.clone(),
                r.paper_value.clone(),
                r.difference.clone(),
                r.mismatched_steps.join(" "),
            ]
        }),
    )
}

pub fn validation_csv(v: &ValidationSection) -> String {
    csv_string(
        &[
            "chain",
            "hj_n",
            "hj_q",
            "fundamental_cycle",
            "genus",
            "rational",
            "negative_definite",
        ],
        v.chains.iter().map(|c| {
            vec![
                c.chain.clone(),
                c.hj_n.clone(),
                c.hj_q.clone(),
                c.fundamental_cycle.join(" "),
                c.genus.clone(),
                c.rational.to_string(),
                v.negative_definite.to_string(),
            ]
        }),
    )
}

pub fn solution_csv(s: &SolutionSection) -> String {
    csv_string(
        &["curve", "b", "a", "x", "l_dot_c", "x0"],
        s.curves.iter().map(|c| {
            vec![
                c.curve.clone(),
                c.b.clone(),
                c.a.clone(),
                c.x.clone(),
                c.l_dot_c.clone(),
                s.x0.clone(),
            ]
        }),
    )
}

pub fn ledger_csv(l: &LedgerSection) -> String {
    csv_string(
        &[
            "step",
            "component",
            "remaining",
            "twist",
            "d_t",
            "d_n",
            "h0_step",
            "h1_step",
            "exact",
        ],
        l.steps.iter().enumerate().map(|(i, s)| {
            vec![
                i.to_string(),
                s.component.clone(),
                s.remaining.clone(),
                s.twist.clone(),
                s.d_t.clone(),
                s.d_n.clone(),
                s.h0_step.clone(),
                s.h1_step.clone(),
                s.exact.to_string(),
            ]
        }),
    )
}

pub fn vanishing_csv(rows: &[VanishingRow]) -> String {
    let curves: Vec<String> = rows
        .first()
        .map(|r| r.components.iter().map(|c| c.curve.clone()).collect())
        .unwrap_or_default();
    let mut header: Vec<&str> = vec!["n"];
    header.extend(curves.iter().map(String::as_str));
    header.push("e_vanishes");
    csv_string(
        &header,
        rows.iter().map(|r| {
            let mut row = vec![r.n.clone()];
            row.extend(r.components.iter().map(|c| c.vanishes.to_string()));
            row.push(r.e_vanishes.to_string());
            row
        }),
    )
}

/// One file per tabular section, written into `dir`.
pub fn write_csv_dir(report: &RunReport, dir: &Path) -> io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let files = [
        ("validation.csv", validation_csv(&report.validation)),
        ("solution.csv", solution_csv(&report.solution)),
        ("ledger.csv", ledger_csv(&report.cohomology.ledger)),
        ("vanishing.csv", vanishing_csv(&report.cohomology.vanishing_table)),
        ("growth.csv", growth_csv(&report.cohomology.growth)),
        ("discrepancy.csv", discrepancy_csv(&report.cohomology.discrepancy)),
    ];
    let mut names = Vec::new();
    for (name, body) in files {
        fs::write(dir.join(name), body)?;
        names.push(name.to_string());
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn fixture() -> (String, RunReport) {
        let text = "chain b=[2] a=[1]\n".to_string();
        let file = parse_config(&text).unwrap();
        let r = build_report(
            &text,
            &file,
            ReportOptions {
                n: 2,
                n_range: (2, 4),
                order: PeelOrder::Canonical,
            },
        )
        .unwrap();
        (text, r)
    }

    #[test]
    fn fixture_report_values() {
        let (text, r) = fixture();
        assert_eq!(r.metadata.input_sha256, sha256_hex(&text));
        assert_eq!(r.solution.x0, "2");
        assert_eq!(r.solution.curves[0].x, "1");
        assert_eq!(
            r.cohomology.ledger.h1,
            Interval {
                lo: "9".into(),
                hi: "9".into()
            }
        );
        assert_eq!(
            r.cohomology.ledger.h0,
            Interval {
                lo: "1".into(),
                hi: "1".into()
            }
        );
        assert_eq!(r.cohomology.ledger.euler, "-8");
        assert_eq!(r.cohomology.ledger.steps.len(), 2);
        assert_eq!(r.cohomology.ledger.steps[0].twist, "2C1,1");
        assert!(r.cohomology.e_vanishes);
        assert_eq!(r.cohomology.discrepancy[0].difference, "1");
    }

    #[test]
    fn json_round_trip() {
        let (_, r) = fixture();
        let text = to_json(&r);
        assert_eq!(from_json(&text).unwrap(), r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["solution"]["x0"].is_string());
    }

    #[test]
    fn growth_csv_shape() {
        let (_, r) = fixture();
        let csv = growth_csv(&r.cohomology.growth);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,h1_lo,h1_hi,second_diff");
        assert_eq!(lines.len(), 4);
        let filled = lines[1..].iter().filter(|l| !l.ends_with(',')).count();
        assert_eq!(filled, 1);
    }

    #[test]
    fn empty_discrepancy_is_header_only() {
        assert_eq!(
            discrepancy_csv(&[]),
            "n,engine_h1_lo,engine_h1_hi,paper_value,difference,mismatched_steps\n"
        );
    }

    #[test]
    fn signed_twist_rendering() {
        assert_eq!(format_signed(&[vec![2, -1], vec![0]]), "2C1,1 - C1,2");
        assert_eq!(format_signed(&[vec![-3]]), "-3C1,1");
        assert_eq!(format_signed(&[vec![0]]), "0");
    }
}
