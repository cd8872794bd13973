//! One function per experiment, each producing a [`Report`].

use std::thread;

use morsept_core::analysis::{
    energy_shift, energy_shift_check, isospectral_check, sweep_point, sweep_spread, SpectralReport, SweepPoint,
    DEFAULT_TOLERANCE,
};
use morsept_core::eigensolver::{generalized_spectrum, partner_spectrum, shifted_spectrum, Grid, Spectrum};
use morsept_core::potentials::{riccati_residual, Family, Generalized};
use morsept_core::transforms::{
    bessel_integral, potential_term_map, sandwiched_potential_term, state_order, wavefunction_connection,
    HankelPlan,
};

use crate::config::{Experiment, FamilyChoice, RunConfig};
use crate::table::{Cell, Meta, Table};
use crate::CliError;

pub const RICCATI_TOLERANCE: f64 = 1e-6;
pub const RICCATI_SPACING: f64 = 1e-3;
pub const BESSEL_INTEGRAL_TOLERANCE: f64 = 1e-6;
pub const WAVEFUNCTION_TOLERANCE: f64 = 1e-3;
pub const SANDWICH_TOLERANCE: f64 = 1e-3;
pub const SWEEP_GAMMAS: [f64; 3] = [0.5, 1.0, 10.0];

/// Table plus experiment-specific metadata and verdict lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub meta: Meta,
    pub verdicts: Vec<String>,
}

impl Report {
    fn new(columns: &'static [&'static str]) -> Self {
        Self {
            table: Table::new(columns),
            meta: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    fn meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.meta.push((key.into(), value.to_string()));
    }

    fn grid(&mut self, label: &str, g: &Grid) {
        self.meta(format!("grid_{label}"), format!("[{}, {}] n={}", g.min(), g.max(), g.len()));
    }

    fn rho_min(&mut self, label: &str, r: Option<f64>) {
        self.meta(format!("rho_min_{label}"), r.map_or("none".to_string(), |v| v.to_string()));
    }
}

/// Column layout of each experiment's table.
pub fn schema(e: Experiment) -> &'static [&'static str] {
    match e {
        Experiment::PotentialCurve => &["family", "rho", "shifted", "partner", "generalized", "superpotential", "q"],
        Experiment::Spectrum => &["family", "potential", "n", "eigenvalue", "analytic"],
        Experiment::Isospectral => &["family", "comparison", "n", "left", "right", "delta", "pass"],
        Experiment::GammaSweep => &["family", "gamma", "rho_min", "n", "eigenvalue", "delta_vs_shifted"],
        Experiment::Riccati => &["family", "gamma", "grid_min", "grid_max", "grid_n", "max_residual", "pass"],
        Experiment::HankelVerify => &["nu", "p", "integral", "p_integral_minus_1", "pass"],
        Experiment::WavefunctionMap => &["n", "m", "rho", "t_prime", "mapped", "reference", "l2_discrepancy"],
        Experiment::EnergyShift => &["n", "e_morse", "shift", "e_morse_shifted", "e_pt", "delta"],
        Experiment::PotentialTermMap => &["section", "index", "t_prime", "lhs", "rhs", "residual"],
    }
}

pub fn run_experiment(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.experiment {
        Experiment::PotentialCurve => potential_curve(cfg),
        Experiment::Spectrum => spectrum(cfg),
        Experiment::Isospectral => isospectral(cfg),
        Experiment::GammaSweep => gamma_sweep(cfg),
        Experiment::Riccati => riccati(cfg),
        Experiment::HankelVerify => hankel_verify(cfg),
        Experiment::WavefunctionMap => wavefunction_map(cfg),
        Experiment::EnergyShift => energy_shift_experiment(cfg),
        Experiment::PotentialTermMap => potential_term(cfg),
    }
}

/// Runs independent jobs on scoped threads; results keep job order.
fn fan_out<T: Send, F: FnOnce() -> T + Send>(jobs: Vec<F>) -> Vec<T> {
    thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|job| s.spawn(job)).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn override_grid(cfg: &RunConfig, applies: bool, default: Grid) -> Result<Grid, CliError> {
    if !applies || cfg.grid.is_empty() {
        return Ok(default);
    }
    let g = &cfg.grid;
    Grid::new(
        g.min.unwrap_or(default.min()),
        g.max.unwrap_or(default.max()),
        g.n.unwrap_or(default.len()),
    )
    .map_err(|e| CliError::Usage(format!("grid: {e}")))
}

fn morse_grid(cfg: &RunConfig, rho_min: Option<f64>) -> Result<Grid, CliError> {
    override_grid(cfg, cfg.family.morse(), Grid::morse_default(rho_min))
}

fn pt_grid(cfg: &RunConfig, rho_min: Option<f64>) -> Result<Grid, CliError> {
    override_grid(cfg, cfg.family.pt(), Grid::pt_restricted(rho_min))
}

fn families(cfg: &RunConfig) -> Vec<FamilyChoice> {
    match cfg.family {
        FamilyChoice::Both => vec![FamilyChoice::Morse, FamilyChoice::Pt],
        f => vec![f],
    }
}

fn verdict_line(label: &str, r: &SpectralReport) -> String {
    format!(
        "{label}: {:?} (max delta {:.3e}, tolerance {})",
        r.verdict, r.max_delta, r.tolerance
    )
}

fn potential_curve(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::PotentialCurve));
    for f in families(cfg) {
        match f {
            FamilyChoice::Morse => {
                let gen = Generalized::new(cfg.morse()?)?;
                let grid = morse_grid(cfg, gen.rho_min())?;
                curve_rows(&mut rep, "morse", &gen, &grid)?;
                rep.grid("morse", &grid);
                rep.rho_min("morse", gen.rho_min());
            }
            _ => {
                let gen = Generalized::new(cfg.pt()?)?;
                let grid = pt_grid(cfg, gen.rho_min())?;
                curve_rows(&mut rep, "pt", &gen, &grid)?;
                rep.grid("pt", &grid);
                rep.rho_min("pt", gen.rho_min());
            }
        }
    }
    Ok(rep)
}

fn curve_rows<F: Family>(rep: &mut Report, name: &str, gen: &Generalized<F>, grid: &Grid) -> Result<(), CliError> {
    let fam = gen.family();
    for rho in grid.nodes() {
        rep.table.push(vec![
            name.into(),
            rho.into(),
            fam.shifted(rho).into(),
            fam.partner(rho).into(),
            gen.potential(rho)?.into(),
            gen.superpotential(rho)?.into(),
            gen.q(rho)?.into(),
        ]);
    }
    Ok(())
}

struct FamilySpectra {
    name: &'static str,
    grid: Grid,
    rho_min: Option<f64>,
    analytic: Vec<f64>,
    shifted: Spectrum,
    partner: Spectrum,
    generalized: Spectrum,
}

fn solve_family<F: Family + Send + Sync>(
    name: &'static str,
    family: F,
    grid: Grid,
    generalized_grid: Grid,
) -> Result<FamilySpectra, CliError> {
    let gen = Generalized::new(family)?;
    let (s, p, g) = thread::scope(|sc| {
        let s = sc.spawn(|| shifted_spectrum(&family, grid));
        let p = sc.spawn(|| partner_spectrum(&family, grid));
        let g = sc.spawn(|| generalized_spectrum(&gen, generalized_grid));
        (s.join().expect("worker panicked"), p.join().expect("worker panicked"), g.join().expect("worker panicked"))
    });
    Ok(FamilySpectra {
        name,
        rho_min: gen.rho_min(),
        analytic: family.analytic_levels(),
        grid,
        shifted: s?,
        partner: p?,
        generalized: g?,
    })
}

fn all_spectra(cfg: &RunConfig) -> Result<Vec<FamilySpectra>, CliError> {
    families(cfg)
        .into_iter()
        .map(|f| match f {
            FamilyChoice::Morse => {
                let m = cfg.morse()?;
                let rho_min = Generalized::new(m)?.rho_min();
                solve_family("morse", m, morse_grid(cfg, None)?, morse_grid(cfg, rho_min)?)
            }
            _ => {
                let p = cfg.pt()?;
                let rho_min = Generalized::new(p)?.rho_min();
                solve_family("pt", p, pt_grid(cfg, None)?, pt_grid(cfg, rho_min)?)
            }
        })
        .collect()
}

fn spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::Spectrum));
    for fs in all_spectra(cfg)? {
        let kinds: [(&str, &Spectrum, usize); 3] =
            [("shifted", &fs.shifted, 0), ("partner", &fs.partner, 1), ("generalized", &fs.generalized, 0)];
        for (kind, s, offset) in kinds {
            for (n, e) in s.eigenvalues.iter().enumerate() {
                rep.table.push(vec![
                    fs.name.into(),
                    kind.into(),
                    n.into(),
                    (*e).into(),
                    fs.analytic.get(n + offset).copied().into(),
                ]);
            }
        }
        rep.grid(fs.name, &fs.grid);
        rep.rho_min(fs.name, fs.rho_min);
        rep.verdicts.push(format!("{}: {} bound states", fs.name, fs.shifted.bound_count));
    }
    Ok(rep)
}

fn isospectral(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::Isospectral));
    for fs in all_spectra(cfg)? {
        let checks = [
            ("shifted-vs-partner", isospectral_check(&fs.shifted, &fs.partner, true, DEFAULT_TOLERANCE)),
            ("shifted-vs-generalized", isospectral_check(&fs.shifted, &fs.generalized, false, DEFAULT_TOLERANCE)),
        ];
        for (label, r) in checks {
            for (n, p) in r.pairs.iter().enumerate() {
                rep.table.push(vec![
                    fs.name.into(),
                    label.into(),
                    n.into(),
                    p.left.into(),
                    p.right.into(),
                    p.delta.into(),
                    (p.delta.abs() <= r.tolerance).into(),
                ]);
            }
            rep.verdicts.push(verdict_line(&format!("{} {label}", fs.name), &r));
        }
        rep.grid(fs.name, &fs.grid);
        rep.rho_min(fs.name, fs.rho_min);
    }
    Ok(rep)
}

fn sweep_gammas(cfg: &RunConfig) -> Vec<f64> {
    let mut g = SWEEP_GAMMAS.to_vec();
    if !g.contains(&cfg.gamma) {
        g.push(cfg.gamma);
    }
    g.sort_by(f64::total_cmp);
    g
}

fn gamma_sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::GammaSweep));
    let gammas = sweep_gammas(cfg);
    rep.meta("gammas", format!("{gammas:?}"));
    for f in families(cfg) {
        let (name, base, points) = match f {
            FamilyChoice::Morse => {
                let m = cfg.morse()?;
                let grid = |r: Option<f64>| morse_grid(cfg, r);
                let base = shifted_spectrum(&m, grid(None)?)?;
                ("morse", base, sweep(m, &gammas, grid)?)
            }
            _ => {
                let p = cfg.pt()?;
                let grid = |r: Option<f64>| pt_grid(cfg, r);
                let base = shifted_spectrum(&p, grid(None)?)?;
                ("pt", base, sweep(p, &gammas, grid)?)
            }
        };
        let (points, grids): (Vec<SweepPoint>, Vec<Grid>) = points.into_iter().unzip();
        for (pt, grid) in points.iter().zip(&grids) {
            rep.grid(&format!("{name}_gamma_{}", pt.gamma), grid);
            for (n, e) in pt.spectrum.eigenvalues.iter().enumerate() {
                let delta = base.eigenvalues.get(n).map(|b| e - b);
                rep.table.push(vec![
                    name.into(),
                    pt.gamma.into(),
                    pt.rho_min.into(),
                    n.into(),
                    (*e).into(),
                    delta.into(),
                ]);
            }
        }
        if let Some(r) = sweep_spread(&points, DEFAULT_TOLERANCE) {
            rep.verdicts.push(verdict_line(&format!("{name} sweep spread"), &r));
        }
    }
    Ok(rep)
}

fn sweep<F, G>(family: F, gammas: &[f64], grid: G) -> Result<Vec<(SweepPoint, Grid)>, CliError>
where
    F: Family + Send + Sync,
    G: Fn(Option<f64>) -> Result<Grid, CliError> + Sync,
{
    let jobs: Vec<_> = gammas
        .iter()
        .map(|&g| {
            let grid = &grid;
            move || -> Result<(SweepPoint, Grid), CliError> {
                // Resolve the grid first so overrides can fail as usage errors.
                let gen = Generalized::new(family.with_gamma(g)?)?;
                let grid = grid(gen.rho_min())?;
                Ok((sweep_point(family, g, &|_| grid)?, grid))
            }
        })
        .collect();
    fan_out(jobs).into_iter().collect()
}

fn riccati(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::Riccati));
    for f in families(cfg) {
        let (name, residual, grid) = match f {
            FamilyChoice::Morse => {
                let gen = Generalized::new(cfg.morse()?)?;
                let lo = gen.rho_min().map_or(-2.0, |r| (r + 0.5).max(-2.0));
                let default = Grid::new(lo, 10.0, ((10.0 - lo) / RICCATI_SPACING).round() as usize + 1)?;
                let grid = override_grid(cfg, true, default)?;
                ("morse", residual_of(&gen, &grid)?, grid)
            }
            _ => {
                let gen = Generalized::new(cfg.pt()?)?;
                let default = Grid::new(-8.0, 8.0, (16.0 / RICCATI_SPACING).round() as usize + 1)?;
                let grid = override_grid(cfg, true, default)?;
                ("pt", residual_of(&gen, &grid)?, grid)
            }
        };
        let pass = residual < RICCATI_TOLERANCE;
        rep.table.push(vec![
            name.into(),
            cfg.gamma.into(),
            grid.min().into(),
            grid.max().into(),
            grid.len().into(),
            residual.into(),
            pass.into(),
        ]);
        rep.grid(name, &grid);
        rep.verdicts.push(format!(
            "{name} riccati: {} (max residual {residual:.3e}, tolerance {RICCATI_TOLERANCE})",
            if pass { "Pass" } else { "Fail" }
        ));
    }
    Ok(rep)
}

fn residual_of<F: Family>(gen: &Generalized<F>, grid: &Grid) -> Result<f64, CliError> {
    let fam = *gen.family();
    Ok(riccati_residual(
        |x| gen.superpotential(x).unwrap_or(f64::NAN),
        |x| fam.w_prime(x),
        |x| fam.w_second(x),
        grid,
    )?)
}

fn hankel_verify(_cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::HankelVerify));
    let mut worst: f64 = 0.0;
    for nu in 0..=2u32 {
        for p in [0.5, 1.0, 2.0, 5.0] {
            let v = bessel_integral(nu, p, 1e-10)?;
            let dev = p * v - 1.0;
            worst = worst.max(dev.abs());
            rep.table.push(vec![nu.into(), p.into(), v.into(), dev.into(), (dev.abs() < BESSEL_INTEGRAL_TOLERANCE).into()]);
        }
    }
    rep.verdicts.push(format!(
        "bessel integral: {} (max |p I - 1| {worst:.3e}, tolerance {BESSEL_INTEGRAL_TOLERANCE})",
        if worst < BESSEL_INTEGRAL_TOLERANCE { "Pass" } else { "Fail" }
    ));
    Ok(rep)
}

/// Morse levels to map: the one selected by `--order-m`, or all of them.
fn selected_levels(cfg: &RunConfig, bound: usize) -> Result<Vec<(usize, u32)>, CliError> {
    let all: Vec<(usize, u32)> = (0..bound)
        .map(|n| state_order(cfg.lambda, n).map(|m| (n, m)))
        .collect::<Result<_, _>>()?;
    match cfg.order_m {
        None => Ok(all),
        Some(m) => all
            .into_iter()
            .find(|&(_, k)| k == m)
            .map(|x| vec![x])
            .ok_or_else(|| CliError::Usage(format!("order-m: {m} matches no bound Morse level"))),
    }
}

fn wavefunction_map(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::WavefunctionMap));
    let (m, p) = (cfg.morse()?, cfg.pt()?);
    let (mg, pg) = (morse_grid(cfg, None)?, pt_grid(cfg, None)?);
    let (sm, sp) = thread::scope(|s| {
        let a = s.spawn(|| shifted_spectrum(&m, mg));
        let b = s.spawn(|| shifted_spectrum(&p, pg));
        (a.join().expect("worker panicked"), b.join().expect("worker panicked"))
    });
    let (sm, sp) = (sm?, sp?);
    let levels = selected_levels(cfg, sm.bound_count.min(sp.bound_count))?;
    let plan = HankelPlan::with_defaults(0);
    let window: Vec<f64> = (0..=400).map(|i| -5.0 + 0.025 * i as f64).collect();
    let jobs: Vec<_> = levels
        .iter()
        .map(|&(n, order)| {
            let (sm, sp, plan, window) = (&sm, &sp, &plan, &window);
            move || {
                wavefunction_connection(
                    &sm.eigenfunctions[n],
                    &sp.eigenfunctions[n],
                    cfg.lambda,
                    order,
                    plan,
                    window,
                )
            }
        })
        .collect();
    for (&(n, order), c) in levels.iter().zip(fan_out(jobs)) {
        let c = c?;
        let cmp = &c.comparison;
        for (i, rho) in cmp.rho.iter().enumerate() {
            rep.table.push(vec![
                n.into(),
                order.into(),
                (*rho).into(),
                (-rho).exp().into(),
                cmp.mapped[i].into(),
                cmp.reference[i].into(),
                cmp.discrepancy.into(),
            ]);
        }
        let pass = cmp.discrepancy < WAVEFUNCTION_TOLERANCE;
        rep.verdicts.push(format!(
            "n={n} m={order}: {} (L2 discrepancy {:.3e}, tolerance {WAVEFUNCTION_TOLERANCE}{})",
            if pass { "Pass" } else { "Fail" },
            cmp.discrepancy,
            if c.truncation_warning { ", truncation warning" } else { "" }
        ));
    }
    rep.grid("morse", &mg);
    rep.grid("pt", &pg);
    rep.meta("hankel_plan", format!("t_max={} nodes={}", plan.t_max(), plan.len()));
    Ok(rep)
}

fn energy_shift_experiment(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::EnergyShift));
    let gm = Generalized::new(cfg.morse()?)?;
    let gp = Generalized::new(cfg.pt()?)?;
    let (mg, pg) = (morse_grid(cfg, gm.rho_min())?, pt_grid(cfg, gp.rho_min())?);
    let (em, ep) = thread::scope(|s| {
        let a = s.spawn(|| generalized_spectrum(&gm, mg));
        let b = s.spawn(|| generalized_spectrum(&gp, pg));
        (a.join().expect("worker panicked"), b.join().expect("worker panicked"))
    });
    let (em, ep) = (em?, ep?);
    let shift = energy_shift(cfg.lambda, cfg.mu);
    let r = energy_shift_check(&em, &ep, cfg.lambda, cfg.mu, DEFAULT_TOLERANCE);
    for (n, p) in r.pairs.iter().enumerate() {
        rep.table.push(vec![
            n.into(),
            (p.left - shift).into(),
            shift.into(),
            p.left.into(),
            p.right.into(),
            p.delta.into(),
        ]);
    }
    rep.grid("morse", &mg);
    rep.grid("pt", &pg);
    rep.rho_min("morse", gm.rho_min());
    rep.rho_min("pt", gp.rho_min());
    let label = if shift == 0.0 {
        "energy shift".to_string()
    } else {
        format!("energy shift {shift} (off the mu = lambda - 1/2 point; data only)")
    };
    rep.verdicts.push(verdict_line(&label, &r));
    Ok(rep)
}

fn potential_term(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new(schema(Experiment::PotentialTermMap));
    let (m, p) = (cfg.morse()?, cfg.pt()?);
    let order = match cfg.order_m {
        Some(k) => k,
        None => state_order(cfg.lambda, 0)?,
    };
    let plan = HankelPlan::with_defaults(order);
    let tp: Vec<f64> = (1..=30).map(|i| i as f64 / 10.0).collect();
    let report = potential_term_map(m, p, order, &plan, &tp)?;
    for (i, t) in report.t_prime.iter().enumerate() {
        rep.table.push(vec![
            "pointwise".into(),
            i.into(),
            (*t).into(),
            report.lhs[i].into(),
            report.rhs[i].into(),
            report.residuals[i].into(),
        ]);
    }
    for step in report.refinement {
        rep.table.push(vec![
            "refinement".into(),
            step.nodes.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            step.max_residual.into(),
        ]);
    }

    let mg = morse_grid(cfg, None)?;
    let sm = shifted_spectrum(&m, mg)?;
    let levels = selected_levels(cfg, sm.bound_count)?;
    let jobs: Vec<_> = levels
        .iter()
        .map(|&(n, k)| {
            let (sm, plan) = (&sm, &plan);
            move || sandwiched_potential_term(m, p, &sm.eigenfunctions[n], k, plan)
        })
        .collect();
    for (&(n, k), s) in levels.iter().zip(fan_out(jobs)) {
        let s = s?;
        rep.table.push(vec![
            "sandwiched".into(),
            n.into(),
            Cell::Empty,
            s.lhs.into(),
            s.rhs.into(),
            s.relative_error.into(),
        ]);
        rep.verdicts.push(format!(
            "sandwiched n={n} m={k}: {} (relative error {:.3e}, tolerance {SANDWICH_TOLERANCE})",
            if s.relative_error < SANDWICH_TOLERANCE { "Pass" } else { "Fail" },
            s.relative_error
        ));
    }
    rep.verdicts.push(format!(
        "pointwise m={order}: max residual {:.3e} ({} nodes), {:.3e} ({} nodes); reported, not judged",
        report.refinement[0].max_residual,
        report.refinement[0].nodes,
        report.refinement[1].max_residual,
        report.refinement[1].nodes
    ));
    rep.grid("morse", &mg);
    rep.meta("hankel_plan", format!("t_max={} nodes={}", plan.t_max(), plan.len()));
    Ok(rep)
}
