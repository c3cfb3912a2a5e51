use anyhow::{bail, Context, Result};
use serde::Serialize;

use seqclass::export::{povm_records, schur_record, state_record, MatrixRecord};
use seqclass::measure::{mirror_povm, PovmReport};
use seqclass::tradeoff::{ComponentKind, PathComponent};
use seqclass::{
    analytic_state, estimate_curve, optimal_three_qubit_povm, optimal_two_qubit_povm, path_components,
    run_trajectories, second_povm, sweep, validate_povm, weak_two_qubit_povm, Basis, FirstOutcome, Hypothesis, Povm,
    WeakParams,
};

use crate::args::{Command, Format, PovmKind};
use crate::output::{json, Csv};
use crate::{verify, Outcome};

pub fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::States { label, basis, format } => states(label, basis.into(), format).map(Outcome::ok),
        Command::Povm { kind, alpha, beta, outcome, a, basis, format } => {
            povm(kind, alpha, beta, outcome.into(), a, basis.into(), format).map(Outcome::ok)
        }
        Command::Schur { n } => json(&schur_record(n)?).map(Outcome::ok),
        Command::Tradeoff { n_points, format } => tradeoff(n_points, format).map(Outcome::ok),
        Command::Figure1 { panels, alpha, beta, outcome, format } => {
            let points = if panels {
                FIGURE1_PANELS.iter().map(|&(name, a, b)| (name.to_string(), a, b)).collect()
            } else {
                let (Some(a), Some(b)) = (alpha, beta) else { bail!("figure1 needs --alpha and --beta, or --panels") };
                vec![("-".to_string(), a, b)]
            };
            figure1(&points, outcome.into(), format).map(Outcome::ok)
        }
        Command::Figure2 { n_points, mc_n, seed, format } => figure2(n_points, mc_n, seed, format).map(Outcome::ok),
        Command::Simulate { alpha, beta, n, seed } => {
            let summary = run_trajectories(WeakParams::new(alpha, beta)?, n, seed)?;
            let mut line = serde_json::to_string(&summary)?;
            line.push('\n');
            Ok(Outcome::ok(line))
        }
        Command::Verify { profile, with_mc, n, seed, inject_fault } => {
            let report = verify::run(verify::Options { profile, with_mc, n, seed, inject_fault })?;
            let code = if report.passed { 0 } else { 1 };
            let stderr = report
                .failures()
                .map(|c| format!("FAILED {}: observed {} expected {}\n", c.name, c.observed, c.expected_text()))
                .collect();
            Ok(Outcome { stdout: json(&report)?, stderr, code })
        }
    }
}

pub fn states(label: Hypothesis, basis: Basis, format: Format) -> Result<String> {
    let rho = analytic_state::<f64>(label).to_basis(basis)?;
    let rec = state_record(label.as_str(), &rho);
    match format {
        Format::Json => json(&rec),
        Format::Csv => {
            let mut csv = Csv::new(&["label", "basis", "row", "col", "re", "im"]);
            matrix_rows(&mut csv, &rec);
            Ok(csv.finish())
        }
    }
}

fn matrix_rows(csv: &mut Csv, rec: &MatrixRecord) {
    for i in 0..rec.dim {
        for j in 0..rec.dim {
            let [re, im] = rec.get(i, j);
            csv.row([
                rec.label.clone(),
                rec.basis.clone(),
                i.to_string(),
                j.to_string(),
                re.to_string(),
                im.to_string(),
            ]);
        }
    }
}

#[derive(Serialize)]
struct PovmDump {
    basis: String,
    elements: Vec<MatrixRecord>,
    report: PovmReport,
}

pub fn povm(
    kind: PovmKind,
    alpha: f64,
    beta: f64,
    outcome: FirstOutcome,
    a: f64,
    basis: Basis,
    format: Format,
) -> Result<String> {
    let povm: Povm<f64> = match kind {
        PovmKind::TwoQubit => optimal_two_qubit_povm(),
        PovmKind::ThreeQubit => optimal_three_qubit_povm(),
        PovmKind::Weak => weak_two_qubit_povm(WeakParams::new(alpha, beta)?)?,
        PovmKind::Second => second_povm(WeakParams::new(alpha, beta)?, outcome)?,
        PovmKind::Mirror => mirror_povm(a)?,
    };
    let report = validate_povm(&povm)?;
    let povm = povm.to_basis(basis)?;
    let elements = povm_records(&povm);
    match format {
        Format::Json => json(&PovmDump { basis: basis.to_string(), elements, report }),
        Format::Csv => {
            let mut csv = Csv::new(&["label", "basis", "row", "col", "re", "im"]);
            for rec in &elements {
                matrix_rows(&mut csv, rec);
            }
            Ok(csv.finish())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffRow {
    pub p_first: f64,
    pub p_second: f64,
    pub alpha: f64,
    pub beta: f64,
}

pub fn tradeoff_rows(n_points: usize) -> Result<Vec<TradeoffRow>> {
    if n_points < 2 {
        bail!("--n-points must be at least 2");
    }
    Ok(sweep::<f64>(n_points)?
        .into_iter()
        .map(|p| TradeoffRow { p_first: p.p_first, p_second: p.p_second, alpha: p.alpha, beta: p.beta })
        .collect())
}

#[derive(Serialize)]
struct Table<R> {
    schema: u32,
    columns: &'static [&'static str],
    rows: Vec<R>,
}

const TRADEOFF_COLUMNS: &[&str] = &["p_first", "p_second", "alpha", "beta"];

pub fn tradeoff(n_points: usize, format: Format) -> Result<String> {
    let rows = tradeoff_rows(n_points)?;
    match format {
        Format::Json => json(&Table { schema: 1, columns: TRADEOFF_COLUMNS, rows }),
        Format::Csv => {
            let mut csv = Csv::new(TRADEOFF_COLUMNS);
            for r in rows {
                csv.row([r.p_first, r.p_second, r.alpha, r.beta]);
            }
            Ok(csv.finish())
        }
    }
}

/// Reference configurations: no first measurement, an intermediate one, the
/// edge of the flat region, and the projective first measurement.
pub const FIGURE1_PANELS: [(&str, f64, f64); 4] =
    [("a", 0.0, 1.0 / 3.0), ("b", 1.0 / 3.0, 1.0 / 3.0), ("c", 2.0 / 3.0, 1.0 / 3.0), ("d", 1.0, 0.0)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure1Row {
    pub panel: String,
    pub alpha: f64,
    pub beta: f64,
    pub outcome: FirstOutcome,
    pub label: String,
    pub kind: ComponentKind,
    pub x0: f64,
    pub x1: f64,
    /// Angle from the `|0⟩` axis in degrees.
    pub angle_deg: f64,
    pub weight: f64,
    pub omitted: bool,
}

pub fn figure1_rows(points: &[(String, f64, f64)], outcome: FirstOutcome) -> Result<Vec<Figure1Row>> {
    let mut rows = Vec::new();
    for (panel, alpha, beta) in points {
        let params = WeakParams::new(*alpha, *beta)?;
        let comps = path_components(params, outcome).with_context(|| format!("panel {panel}"))?;
        for PathComponent { label, kind, vector, weight, omitted } in comps {
            rows.push(Figure1Row {
                panel: panel.clone(),
                alpha: *alpha,
                beta: *beta,
                outcome,
                label,
                kind,
                x0: vector[0],
                x1: vector[1],
                angle_deg: if omitted { f64::NAN } else { vector[1].atan2(vector[0]).to_degrees() },
                weight,
                omitted,
            });
        }
    }
    Ok(rows)
}

const FIGURE1_COLUMNS: &[&str] =
    &["panel", "alpha", "beta", "outcome", "label", "kind", "x0", "x1", "angle_deg", "weight", "omitted"];

pub fn figure1(points: &[(String, f64, f64)], outcome: FirstOutcome, format: Format) -> Result<String> {
    let rows = figure1_rows(points, outcome)?;
    match format {
        Format::Json => json(&Table { schema: 1, columns: FIGURE1_COLUMNS, rows }),
        Format::Csv => {
            let mut csv = Csv::new(FIGURE1_COLUMNS);
            for r in rows {
                let kind = match r.kind {
                    ComponentKind::State => "state",
                    ComponentKind::Measurement => "measurement",
                };
                let angle = if r.omitted { String::new() } else { r.angle_deg.to_string() };
                csv.row([
                    r.panel,
                    r.alpha.to_string(),
                    r.beta.to_string(),
                    r.outcome.to_string(),
                    r.label,
                    kind.to_string(),
                    r.x0.to_string(),
                    r.x1.to_string(),
                    angle,
                    r.weight.to_string(),
                    r.omitted.to_string(),
                ]);
            }
            Ok(csv.finish())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure2Row {
    pub p_first: f64,
    pub p_second: f64,
    pub alpha: f64,
    pub beta: f64,
    pub p1_hat: Option<f64>,
    pub p1_stderr: Option<f64>,
    pub p2_hat: Option<f64>,
    pub p2_stderr: Option<f64>,
}

const FIGURE2_COLUMNS: &[&str] =
    &["p_first", "p_second", "alpha", "beta", "p1_hat", "p1_stderr", "p2_hat", "p2_stderr"];

pub fn figure2(n_points: usize, mc_n: u64, seed: u64, format: Format) -> Result<String> {
    let analytic = tradeoff_rows(n_points)?;
    let empirical = if mc_n > 0 { Some(estimate_curve(n_points, mc_n, seed)?) } else { None };
    let rows: Vec<Figure2Row> = analytic
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let mc = empirical.as_ref().map(|e| &e[i]);
            Figure2Row {
                p_first: r.p_first,
                p_second: r.p_second,
                alpha: r.alpha,
                beta: r.beta,
                p1_hat: mc.map(|s| s.p1_hat),
                p1_stderr: mc.map(|s| s.p1_stderr),
                p2_hat: mc.map(|s| s.p2_hat),
                p2_stderr: mc.map(|s| s.p2_stderr),
            }
        })
        .collect();
    match format {
        Format::Json => json(&Table { schema: 1, columns: FIGURE2_COLUMNS, rows }),
        Format::Csv => {
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            let mut csv = Csv::new(FIGURE2_COLUMNS);
            for r in rows {
                csv.row([
                    r.p_first.to_string(),
                    r.p_second.to_string(),
                    r.alpha.to_string(),
                    r.beta.to_string(),
                    opt(r.p1_hat),
                    opt(r.p1_stderr),
                    opt(r.p2_hat),
                    opt(r.p2_stderr),
                ]);
            }
            Ok(csv.finish())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tradeoff_needs_two_points() {
        assert!(tradeoff_rows(1).is_err());
        assert_eq!(tradeoff_rows(2).unwrap().len(), 2);
    }

    #[test]
    fn panels_give_six_rows_each() {
        let points: Vec<_> = FIGURE1_PANELS.iter().map(|&(n, a, b)| (n.to_string(), a, b)).collect();
        let rows = figure1_rows(&points, FirstOutcome::Minus).unwrap();
        assert_eq!(rows.len(), 24);
        for r in rows.iter().filter(|r| !r.omitted) {
            assert!((r.x0.hypot(r.x1) - 1.0).abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn plus_branch_at_projective_corner_aligns_states_with_one() {
        let rows = figure1_rows(&[("d".into(), 1.0, 0.0)], FirstOutcome::Plus).unwrap();
        for label in ["psi_010", "psi_011"] {
            let psi = rows.iter().find(|r| r.label == label).unwrap();
            assert!(psi.x0.abs() < 1e-12 && (psi.x1 - 1.0).abs() < 1e-12, "{psi:?}");
        }
    }

    #[test]
    fn states_csv_has_one_row_per_entry() {
        let out = states(Hypothesis::H001, Basis::Schur, Format::Csv).unwrap();
        assert_eq!(out.lines().count(), 2 + 64);
    }
}
