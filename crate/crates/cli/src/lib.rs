//! Sweep front end for the entlab engines: resolves a [`RunConfig`], builds
//! one output table per command and writes it as CSV or JSON.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod table;

use std::f64::consts::PI;

use entlab_core::analytic::{
    concurrence_approx, envelope, i12, i34, lambda_approx, lambda_literal_appendix, lambda_literal_main,
    nearest_revival, SaddleParams, RECOMMENDED_MIN_AMP,
};
use entlab_core::coherent::{coherent_row, BellState, CoherentScenario};
use entlab_core::entanglement::{concurrence_x, q_factor};
use entlab_core::jc::SiteParams;
use entlab_core::state::Pair;
use entlab_core::vacuum::{all_pairwise, evolve_fourqubit, x_elements_detuned, VacuumScenario};
use rayon::prelude::*;

pub use config::{BellKind, Cli, Command, Format, Preset, RunConfig, Threads, THREADS_ENV};
pub use table::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Engine(#[from] entlab_core::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad configuration, 3 for numeric failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(e) if e.is_numeric() => 3,
            CliError::Engine(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn pool(threads: Threads) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Threads::Fixed(n) = threads {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))
}

/// Evaluates `row` on every grid point in parallel; rows keep grid order.
fn rows_on_grid<F>(cfg: &RunConfig, row: F) -> CliResult<Vec<Vec<Cell>>>
where
    F: Fn(f64) -> CliResult<Vec<Cell>> + Sync,
{
    let grid = cfg.grid();
    pool(cfg.threads)?.install(|| grid.par_iter().map(|&tau| row(tau)).collect())
}

/// Builds the output table of `cfg.command`.
pub fn run(cfg: &RunConfig) -> CliResult<Table> {
    match cfg.command {
        Command::Vacuum if cfg.preset == Some(Preset::FigEsd) => run_fig_esd(cfg),
        Command::Vacuum => run_vacuum(cfg),
        Command::Coherent => run_coherent(cfg),
        Command::Analytic => run_analytic(cfg),
        Command::Compare => run_compare(cfg),
        Command::Envelope => run_envelope(cfg),
    }
}

fn site(cfg: &RunConfig) -> CliResult<SiteParams> {
    Ok(SiteParams::new(cfg.g, cfg.detuning)?)
}

pub fn run_vacuum(cfg: &RunConfig) -> CliResult<Table> {
    let sc = VacuumScenario::new(cfg.bell_angle, site(cfg)?)?;
    let columns = ["tau", "C_AB_closed", "C_AB_brute", "C_ab", "C_Aa", "C_Bb", "C_Ab", "C_Ba", "Q_AB"];
    let rows = rows_on_grid(cfg, |tau| {
        let t = tau / cfg.g;
        let x = x_elements_detuned(&sc, t);
        let pairs = all_pairwise(&evolve_fourqubit(&sc, t))?;
        let mut row = vec![Cell::Float(tau), Cell::Float(concurrence_x(&x))];
        row.extend(
            [Pair::Atoms, Pair::Fields, Pair::SiteA, Pair::SiteB, Pair::AtomAFieldB, Pair::AtomBFieldA]
                .map(|p| Cell::Float(pairs.get(p))),
        );
        row.push(Cell::Float(q_factor(&x)));
        Ok(row)
    })?;
    Ok(Table::new(&columns, rows))
}

const ESD_ANGLES: [(&str, f64); 3] = [("pi_4", PI / 4.0), ("pi_6", PI / 6.0), ("pi_12", PI / 12.0)];

/// C_AB and C_ab for three Bell angles side by side.
fn run_fig_esd(cfg: &RunConfig) -> CliResult<Table> {
    let site = site(cfg)?;
    let scenarios = ESD_ANGLES
        .iter()
        .map(|&(_, a)| VacuumScenario::new(a, site))
        .collect::<Result<Vec<_>, _>>()?;
    let mut columns = vec!["tau".to_string()];
    for (name, _) in ESD_ANGLES {
        columns.push(format!("C_AB_{name}"));
        columns.push(format!("C_ab_{name}"));
    }
    let rows = rows_on_grid(cfg, |tau| {
        let t = tau / cfg.g;
        let mut row = vec![Cell::Float(tau)];
        for sc in &scenarios {
            let pairs = all_pairwise(&evolve_fourqubit(sc, t))?;
            row.push(Cell::Float(concurrence_x(&x_elements_detuned(sc, t))));
            row.push(Cell::Float(pairs.get(Pair::Fields)));
        }
        Ok(row)
    })?;
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    Ok(Table::new(&columns, rows))
}

fn coherent_scenario(cfg: &RunConfig) -> CliResult<CoherentScenario> {
    let bell = match cfg.bell_state {
        BellKind::PsiPlus => BellState::PsiPlus,
        BellKind::Phi => BellState::PhiAlpha(cfg.bell_angle),
    };
    Ok(CoherentScenario::new(cfg.coherent_amp, bell, cfg.cutoff_override, cfg.tail_tolerance)?)
}

/// `rho23` is the real part of ρ23, which is real for the psi-plus state.
pub fn run_coherent(cfg: &RunConfig) -> CliResult<Table> {
    let sc = coherent_scenario(cfg)?;
    let columns = ["tau", "C_full", "C_xproj", "rho23", "rho11", "rho44", "leakage"];
    let rows = rows_on_grid(cfg, |tau| {
        let r = coherent_row(&sc, tau)?;
        Ok([r.tau, r.c_full, r.c_xproj, r.rho23.re, r.rho11, r.rho44, r.leakage]
            .map(Cell::Float)
            .to_vec())
    })?;
    Ok(Table::new(&columns, rows))
}

fn saddle(cfg: &RunConfig) -> CliResult<SaddleParams> {
    if cfg.coherent_amp < RECOMMENDED_MIN_AMP {
        eprintln!(
            "warning: saddle-point formulas are unreliable for coherent_amp < {RECOMMENDED_MIN_AMP}, got {}",
            cfg.coherent_amp
        );
    }
    Ok(SaddleParams::new(cfg.coherent_amp, cfg.kmax)?)
}

pub fn run_analytic(cfg: &RunConfig) -> CliResult<Table> {
    let p = saddle(cfg)?;
    let columns = ["tau", "lambda", "C_analytic", "i12_re", "i12_im", "i34_re", "i34_im"];
    let rows = rows_on_grid(cfg, |tau| {
        let a = i12(tau, p.coherent_amp);
        let b = i34(tau, p.coherent_amp, p.kmax);
        Ok([tau, lambda_approx(tau, &p), concurrence_approx(tau, &p), a.re, a.im, b.re, b.im]
            .map(Cell::Float)
            .to_vec())
    })?;
    Ok(Table::new(&columns, rows))
}

/// `envelope_k` is the clamped envelope of the revival nearest τ (k ≥ 1).
pub fn run_compare(cfg: &RunConfig) -> CliResult<Table> {
    let sc = coherent_scenario(cfg)?;
    let p = saddle(cfg)?;
    let columns = [
        "tau",
        "C_exact",
        "C_analytic",
        "C_paper_literal_main",
        "C_paper_literal_appendix",
        "envelope_k",
    ];
    let rows = rows_on_grid(cfg, |tau| {
        let exact = coherent_row(&sc, tau)?.c_full;
        let env = envelope(nearest_revival(tau, p.coherent_amp), p.coherent_amp)?.clamped;
        let literal = |l: f64| 2.0 * l.max(0.0);
        Ok([
            tau,
            exact,
            concurrence_approx(tau, &p),
            literal(lambda_literal_main(tau, &p)),
            literal(lambda_literal_appendix(tau, &p)),
            env,
        ]
        .map(Cell::Float)
        .to_vec())
    })?;
    Ok(Table::new(&columns, rows))
}

pub fn run_envelope(cfg: &RunConfig) -> CliResult<Table> {
    let rows = (1..=cfg.kmax)
        .map(|k| {
            let e = envelope(k, cfg.coherent_amp)?;
            Ok(vec![Cell::Int(k as u64), Cell::Float(e.tau_center), Cell::Float(e.raw), Cell::Float(e.clamped)])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table::new(&["k", "tau_center", "envelope_raw", "envelope_clamped"], rows))
}

/// Resolves, runs and writes; returns the process exit status.
pub fn main_with(cli: Cli, env_threads: Option<&str>) -> i32 {
    let outcome = RunConfig::resolve(cli, env_threads).and_then(|cfg| {
        let table = run(&cfg)?;
        match &cfg.output {
            Some(path) => {
                let file = std::fs::File::create(path)
                    .map_err(|e| CliError::Config(format!("cannot create {}: {e}", path.display())))?;
                let mut w = std::io::BufWriter::new(file);
                table.write(&mut w, cfg.format)?;
                std::io::Write::flush(&mut w)?;
            }
            None => table.write(&mut std::io::stdout().lock(), cfg.format)?,
        }
        Ok(())
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("entlab: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use entlab_core::Error;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(Error::Leakage { leakage: 1.0, limit: 1e-8 }).exit_code(), 3);
        assert_eq!(CliError::from(Error::InvalidCutoff(0)).exit_code(), 2);
    }

    #[test]
    fn envelope_rows() {
        let mut cfg = RunConfig::defaults(Command::Envelope);
        cfg.kmax = 3;
        let t = run(&cfg).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[0][0], Cell::Int(1));
        let heights: Vec<f64> = t.rows.iter().map(|r| r[2].as_f64()).collect();
        assert!((heights[0] - 0.3061).abs() < 1e-4);
        assert!((heights[1] - 0.1122).abs() < 1e-4);
        assert!(heights.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn vacuum_columns_agree() {
        let mut cfg = RunConfig::defaults(Command::Vacuum);
        cfg.steps = 200;
        let t = run(&cfg).unwrap();
        assert_eq!(t.columns[1], "C_AB_closed");
        for r in &t.rows {
            assert!((r[1].as_f64() - r[2].as_f64()).abs() < 1e-10);
        }
    }

    #[test]
    fn fig_esd_has_three_angles() {
        let mut cfg = RunConfig::defaults(Command::Vacuum);
        cfg.preset = Some(Preset::FigEsd);
        cfg.steps = 10;
        let t = run(&cfg).unwrap();
        assert_eq!(t.columns.len(), 7);
        assert_eq!(t.rows.len(), 11);
    }

    #[test]
    fn tight_cutoff_is_a_numeric_failure() {
        let mut cfg = RunConfig::defaults(Command::Coherent);
        cfg.cutoff_override = Some(60);
        cfg.steps = 2;
        let err = run(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3, "{err}");
    }
}
