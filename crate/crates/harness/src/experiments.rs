//! The seven laboratory pipelines behind the registry.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use lab_charges::{
    radial_test_vector, shifted_gaussian_test_vector, Charge, ChargeFixture, ProfileSpec,
    RadialCoulomb, Slot,
};
use lab_hilbert::{ModeSet, RadialGrid, TestVector};
use lab_jld::{
    double_cone_fixture, hyperboloid_chord_fixture, jld_transform_1p1, r_fixpoint, Region,
    ReductionMode, ReductionOptions, TransformGrid, WedgeFrame,
};
use lab_kpr::{
    convergence_probe, BSpec, EllCutSpec, EpsilonSpec, KprOperator, KprSchedule, ParityFilter,
    ScheduleSpec,
};
use lab_localization::{
    build_chi, build_intertwiner, build_u_c, opposite_cone_experiment, vacuum_obstruction,
    verify_intertwining, ChiDesign, IntertwinerOutcome, RadialChargeProfile,
};

use crate::config::{ConeConfig, ExperimentConfig};
use crate::registry::Experiment;
use crate::report::ExperimentReport;

fn build_grid(config: &ExperimentConfig) -> anyhow::Result<Arc<RadialGrid>> {
    let r = &config.radial;
    let grid = match r.kind.as_str() {
        "log" => RadialGrid::log(r.count, r.min, r.max)?,
        "linear" => RadialGrid::linear(r.count, r.min, r.max)?,
        other => anyhow::bail!("unknown radial kind '{other}'"),
    };
    Ok(Arc::new(grid))
}

fn build_schedule(config: &ExperimentConfig) -> anyhow::Result<KprSchedule> {
    Ok(match &config.schedule {
        Some(spec) => KprSchedule::from_spec(spec)?,
        None => KprSchedule::default_fixture(),
    })
}

/// The schedule the localization experiments default to: sharp power-law
/// amplitudes and an ℓ-cutoff that overtakes the cone profile's band.
pub fn localize_schedule() -> ScheduleSpec {
    ScheduleSpec {
        epsilon: EpsilonSpec::Geometric { ratio: 0.5 },
        b: BSpec::Power {
            exponent: 4.0,
            scale: 0.9,
        },
        ell_cut: EllCutSpec::Explicit {
            values: (1..=40u32).map(|i| 2 * i).collect(),
        },
        shells: 40,
        parity: ParityFilter::All,
    }
}

fn default_charge() -> ChargeFixture {
    ChargeFixture::unit_gaussian(0.8)
}

fn default_probe(grid: &Arc<RadialGrid>, modes: &Arc<ModeSet>) -> anyhow::Result<TestVector> {
    Ok(radial_test_vector(
        grid.clone(),
        modes.clone(),
        &ProfileSpec::Gaussian {
            amplitude: 1.0,
            width: 1.0,
        },
        Slot::H,
    )?)
}

fn default_lambdas() -> Vec<f64> {
    (0..=6).map(|k| 10f64.powf(k as f64 / 2.0)).collect()
}

// ---------------------------------------------------------------------------

pub struct ScalingLimit;

impl Experiment for ScalingLimit {
    fn id(&self) -> &'static str {
        "scaling-limit"
    }

    fn describe(&self) -> &'static str {
        "dilation sequence l_γ(f_λ) against the q_γ·κ_f limit"
    }

    fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        let grid = build_grid(config)?;
        let modes = Arc::new(ModeSet::new(config.ell_max.min(4)));
        let fixture = config.charge.clone().unwrap_or_else(default_charge);
        let gamma = Charge::from_fixture(&fixture, grid.clone(), modes.clone())?;
        let f = default_probe(&grid, &modes)?;
        let lambdas = config.lambdas.clone().unwrap_or_else(default_lambdas);
        let tol = config.tolerance("scaling_limit_rel", 1e-3);

        let report_data = vacuum_obstruction(&gamma, &f, &lambdas, None)?;
        let mut csv = String::from("lambda,norm_f,l_value,rho_term,sigma_term\n");
        for (row, srow) in report_data.rows.iter().zip(&report_data.scaling.rows) {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                row.0, row.1, row.2, srow.rho_term, srow.sigma_term
            ));
        }
        let mut tolerances = BTreeMap::new();
        tolerances.insert("scaling_limit_rel".to_string(), tol);
        let mut rep = ExperimentReport::new(config, tolerances);
        rep.add_table("scaling", csv);
        rep.set_verdicts(json!({
            "verdict": report_data.verdict,
            "expected_limit": report_data.expected_limit,
            "limit_estimate": report_data.scaling.limit_estimate,
            "deviation_rel": report_data.deviation,
            "tolerance_rel": tol,
            "pass": report_data.deviation <= tol,
            "sigma_slope": report_data.scaling.sigma_slope,
        }));
        Ok(rep)
    }
}

// ---------------------------------------------------------------------------

pub struct KprValidate;

impl Experiment for KprValidate {
    fn id(&self) -> &'static str {
        "kpr-validate"
    }

    fn describe(&self) -> &'static str {
        "schedule admissibility: energy sums, KPR-like conditions, ranks"
    }

    fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        let schedule = build_schedule(config)?;
        let v = schedule.validate();
        let mut csv = String::from("i,ln_epsilon,b,rank,energy_increment,energy_partial,kpr_partial\n");
        for i in 1..=schedule.shells() {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                i,
                schedule.log_epsilon(i),
                schedule.b(i),
                v.ranks[i - 1],
                v.energy_increments[i - 1],
                v.energy_partial_sums[i - 1],
                v.kpr_partial_sums[i - 1]
            ));
        }
        let mut rep = ExperimentReport::new(config, BTreeMap::new());
        rep.add_table("schedule", csv);
        rep.set_verdicts(json!({
            "ok": v.ok,
            "violations": v.violations,
            "log_ratio_poly_degree": v.log_ratio_poly_degree,
            "energy_total": v.energy_partial_sums.last(),
            "kpr_total": v.kpr_partial_sums.last(),
        }));
        Ok(rep)
    }
}

// ---------------------------------------------------------------------------

pub struct ConvergenceProbe;

impl Experiment for ConvergenceProbe {
    fn id(&self) -> &'static str {
        "convergence-probe"
    }

    fn describe(&self) -> &'static str {
        "Cauchy/divergence dichotomy of T₁ω^{−3/2}P_{ε_n}(c⊗η)"
    }

    fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        let schedule = build_schedule(config)?;
        let eta_cfg = config.eta.clone().unwrap_or(crate::config::EtaConfig {
            ell: 1,
            m: 0,
        });
        let modes = ModeSet::new(config.ell_max.max(eta_cfg.ell));
        let mut eta = vec![num_complex::Complex64::new(0.0, 0.0); modes.len()];
        eta[modes.index_of(eta_cfg.ell, eta_cfg.m)?] = num_complex::Complex64::new(1.0, 0.0);
        let (lo, hi) = config.shell_range.unwrap_or((5, 35));
        let probe = convergence_probe(&schedule, &modes, &eta, lo, hi)?;
        let mut rep = ExperimentReport::new(config, BTreeMap::new());
        rep.add_table("probe", probe.to_csv());
        let first = probe.rows.first().map(|r| r.increment).unwrap_or(0.0);
        let last = probe.rows.last().map(|r| r.increment).unwrap_or(0.0);
        rep.set_verdicts(json!({
            "verdict": probe.verdict,
            "slope": probe.increment_slope,
            "y00_mass": probe.y00_mass,
            "first_increment": first,
            "last_increment": last,
            "last_to_first": if first > 0.0 { last / first } else { 0.0 },
        }));
        Ok(rep)
    }
}

// ---------------------------------------------------------------------------

fn cone_or_default(config: &ExperimentConfig) -> ConeConfig {
    config.cone.clone().unwrap_or(ConeConfig {
        axis: [0.0, 0.0, 1.0],
        opening_deg: 30.0,
        band_limit: 64,
    })
}

/// Shared setup for the localization pipelines: grid, modes, cone, profile.
struct LocalizeSetup {
    grid: Arc<RadialGrid>,
    modes: Arc<ModeSet>,
    cone: lab_localization::ConeProfile,
    profile: RadialChargeProfile,
    schedule: KprSchedule,
}

fn localize_setup(config: &ExperimentConfig) -> anyhow::Result<LocalizeSetup> {
    // The localization experiments default to a narrower band and a finer
    // grid than the global default.
    let radial = if config.radial.count == 2048 && config.radial.max == 1e2 {
        crate::config::RadialConfig {
            count: 1536,
            min: 1e-4,
            max: 30.0,
            kind: "log".into(),
        }
    } else {
        config.radial.clone()
    };
    let grid = Arc::new(RadialGrid::log(radial.count, radial.min, radial.max)?);
    let ell_max = if config.ell_max == 12 { 56 } else { config.ell_max };
    let modes = Arc::new(ModeSet::new(ell_max));
    let cone_cfg = cone_or_default(config);
    let cone = build_chi(
        cone_cfg.axis,
        cone_cfg.opening_deg.to_radians(),
        ChiDesign {
            band_limit: cone_cfg.band_limit,
            ..ChiDesign::default()
        },
    )?;
    let pr = config.profile.clone().unwrap_or(crate::config::ChargeProfileConfig {
        q: 1.0,
        r1: 0.15,
        r2: 0.45,
    });
    let profile = RadialChargeProfile::new(pr.q, pr.r1, pr.r2)?;
    let schedule = match &config.schedule {
        Some(spec) => KprSchedule::from_spec(spec)?,
        None => KprSchedule::from_spec(&localize_schedule())?,
    };
    Ok(LocalizeSetup {
        grid,
        modes,
        cone,
        profile,
        schedule,
    })
}

pub struct Localize;

impl Experiment for Localize {
    fn id(&self) -> &'static str {
        "localize"
    }

    fn describe(&self) -> &'static str {
        "intertwiner pipeline with probe residuals and the negative control"
    }

    fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        let setup = localize_setup(config)?;
        let uc = build_u_c(
            &setup.profile,
            &setup.cone,
            setup.grid.clone(),
            setup.modes.clone(),
        )?;
        let op = KprOperator::new(setup.schedule.clone(), setup.grid.clone(), setup.modes.clone())?;
        let (lo, hi) = config.shell_range.unwrap_or((5, 35));
        let outcome = build_intertwiner(&op, &uc, lo, hi)?;
        let (v_t, trace) = match outcome {
            IntertwinerOutcome::Converged { v_t, trace } => (v_t, trace),
            IntertwinerOutcome::Diverged { trace } => {
                let mut rep = ExperimentReport::new(config, BTreeMap::new());
                rep.add_table("trace", trace.to_csv());
                rep.set_verdicts(json!({
                    "verdict": "divergent",
                    "slope": trace.slope,
                }));
                return Ok(rep);
            }
        };

        // Probe family outside the cone, plus the inside negative control.
        let pf = config.probes.clone().unwrap_or(crate::config::ProbeFamilyConfig {
            count: 8,
            radius: 5.0,
            width: 0.9,
            min_polar_deg: 100.0,
        });
        let tol = config.tolerance("residual_abs", 1e-4);
        let probe_specs: Vec<(String, [f64; 3], f64)> = (0..pf.count)
            .map(|k| {
                let frac = k as f64 / pf.count.max(1) as f64;
                let polar = (pf.min_polar_deg
                    + (180.0 - pf.min_polar_deg) * frac)
                    .to_radians();
                let azimuth = 2.399_963_229_728_653 * k as f64; // golden angle
                let c = [
                    pf.radius * polar.sin() * azimuth.cos(),
                    pf.radius * polar.sin() * azimuth.sin(),
                    pf.radius * polar.cos(),
                ];
                (format!("outside-{k}"), c, pf.width)
            })
            .collect();
        // Build test vectors in parallel (pure, deterministic order).
        let probes: Vec<(String, TestVector)> = probe_specs
            .par_iter()
            .map(|(name, center, width)| {
                let leak = lab_charges::gaussian_mass_in_cone(
                    *center,
                    *width,
                    setup.cone.axis,
                    setup.cone.opening,
                );
                let tv = shifted_gaussian_test_vector(
                    setup.grid.clone(),
                    setup.modes.clone(),
                    *center,
                    *width,
                    1.0,
                    Slot::H,
                    Some(lab_hilbert::LocalityTag {
                        description: name.clone(),
                        leaked_mass: leak,
                    }),
                )
                .expect("probe construction");
                (name.clone(), tv)
            })
            .collect();
        let rows = verify_intertwining(&op, &v_t, &uc, &probes, tol)?;

        let inside = shifted_gaussian_test_vector(
            setup.grid.clone(),
            setup.modes.clone(),
            [0.0, 0.0, 2.0],
            0.6,
            1.0,
            Slot::H,
            None,
        )?;
        let control = verify_intertwining(
            &op,
            &v_t,
            &uc,
            &[("inside-control".to_string(), inside)],
            tol,
        )?;

        let mut csv = String::from("probe,l_gamma,residual,localized,leaked_mass\n");
        for (row, (name, tv)) in rows.iter().zip(&probes) {
            let leak = tv.locality.as_ref().map(|l| l.leaked_mass).unwrap_or(0.0);
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                name, row.l_gamma, row.residual, row.localized, leak
            ));
        }
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            control[0].probe, control[0].l_gamma, control[0].residual, control[0].localized, 1.0
        ));

        let max_resid = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        let worst_leak = probes
            .iter()
            .filter_map(|(_, tv)| tv.locality.as_ref().map(|l| l.leaked_mass))
            .fold(0.0, f64::max);
        let mut tols = BTreeMap::new();
        tols.insert("residual_abs".to_string(), tol);
        let mut rep = ExperimentReport::new(config, tols);
        rep.add_table("residuals", csv);
        rep.add_table("trace", trace.to_csv());
        rep.set_verdicts(json!({
            "verdict": "converged",
            "trace_verdict": trace.verdict,
            "increment_ratio": trace.rows.last().unwrap().increment
                / trace.rows.first().unwrap().increment,
            "max_residual": max_resid,
            "tolerance": tol,
            "all_localized": rows.iter().all(|r| r.localized),
            "control_residual": control[0].residual,
            "control_separated": control[0].residual > 10.0 * tol,
            "worst_probe_cone_leak": worst_leak,
            "r_at_0": [uc.r_at_0.re, uc.r_at_0.im],
        }));
        Ok(rep)
    }
}

// ---------------------------------------------------------------------------

pub struct OppositeCone;

impl Experiment for OppositeCone {
    fn id(&self) -> &'static str {
        "opposite-cone"
    }

    fn describe(&self) -> &'static str {
        "variant dichotomy: Γ̂/Γ backgrounds against full/even cone profiles"
    }

    fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        // The trace is closed-form; a light grid serves the u^C moments.
        let radial = crate::config::RadialConfig {
            count: 512,
            min: 1e-3,
            max: 20.0,
            kind: "log".into(),
        };
        let mut cfg = config.clone();
        if cfg.radial.count == 2048 {
            cfg.radial = radial;
        }
        if cfg.ell_max == 12 {
            cfg.ell_max = 40;
        }
        let mut cone_cfg = cone_or_default(&cfg);
        // A tilted axis keeps both parities populated in χ.
        if config.cone.is_none() {
            cone_cfg = ConeConfig {
                axis: [0.3, 0.1, 1.0],
                opening_deg: 40.0,
                band_limit: 56,
            };
            cfg.cone = Some(cone_cfg.clone());
        }
        let setup = localize_setup(&cfg)?;
        let uc_full = build_u_c(
            &setup.profile,
            &setup.cone,
            setup.grid.clone(),
            setup.modes.clone(),
        )?;
        let uc_even = build_u_c(
            &setup.profile,
            &setup.cone.even_part(),
            setup.grid.clone(),
            setup.modes.clone(),
        )?;
        let (lo, hi) = config.shell_range.unwrap_or((5, 35));
        let verdicts =
            opposite_cone_experiment(&setup.schedule, &uc_full, &uc_even, lo, hi)?;
        let mut csv = String::from("variant,verdict,slope,first_increment,last_increment\n");
        for v in &verdicts.verdicts {
            csv.push_str(&format!(
                "{:?},{:?},{},{},{}\n",
                v.variant, v.verdict, v.slope, v.first_increment, v.last_increment
            ));
        }
        let mut rep = ExperimentReport::new(config, BTreeMap::new());
        rep.add_table("variants", csv);
        rep.set_verdicts(serde_json::to_value(&verdicts)?);
        Ok(rep)
    }
}

// ---------------------------------------------------------------------------

/// The three-cone scene of the wedge-reduction example, on a 1+2 window.
pub fn three_cone_scene(n: usize, h: f64) -> lab_jld::Scene {
    use lab_jld::{MinkowskiGrid, Primitive, Scene};
    let inf = f64::INFINITY;
    let line = |t0: f64, x0: f64, t_min: f64, t_max: f64, sign: i32| Primitive::HalflineCone {
        base: vec![t0, x0, 0.0],
        axis: 2,
        t_min,
        t_max,
        sign,
    };
    Scene {
        grid: MinkowskiGrid::symmetric(&[n, n, n], &[h, h, h]).unwrap(),
        primitives: vec![
            line(1.0, 2.0, 0.0, inf, 1),
            line(-1.0, 2.0, 0.0, inf, -1),
            line(1.0, -2.0, -inf, 0.0, 1),
            line(-1.0, -2.0, -inf, 0.0, -1),
            line(3.0, 0.0, -inf, inf, 1),
            line(-3.0, 0.0, -inf, inf, -1),
        ],
        ops: None,
    }
}

pub struct JldReduce;

impl Experiment for JldReduce {
    fn id(&self) -> &'static str {
        "jld-reduce"
    }

    fn describe(&self) -> &'static str {
        "wedge support reduction to the fixed point on a rasterized scene"
    }

    fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        let scene = config.scene.clone().unwrap_or_else(|| three_cone_scene(49, 0.25));
        let g = Region::rasterize(&scene)?;
        let rc = config.reduce.clone().unwrap_or(crate::config::ReduceConfig {
            k_plus: vec![1.0, 1.0, 0.0],
            k_minus: vec![-1.0, 1.0, 0.0],
            offset: None,
            tilde: false,
            iteration_cap: 16,
        });
        let dim = scene.grid.dim();
        let offset = rc.offset.clone().unwrap_or_else(|| vec![0.0; dim]);
        let wedge = WedgeFrame::new(rc.k_plus.clone(), rc.k_minus.clone(), offset)?;
        let mode = if rc.tilde {
            ReductionMode::Tilde
        } else {
            ReductionMode::Plain
        };
        let opts = ReductionOptions::default();
        let (fixed, trace) = r_fixpoint(&g, &[wedge], mode, &opts, rc.iteration_cap)?;
        let productive = trace
            .cell_counts
            .windows(2)
            .filter(|p| p[1] < p[0])
            .count();
        let mut rep = ExperimentReport::new(config, BTreeMap::new());
        rep.add_table("trace", trace.to_csv());
        rep.add_table("mask_before", g.to_pbm());
        rep.add_table("mask_after", fixed.to_pbm());
        rep.set_verdicts(json!({
            "iterations": productive,
            "final_cells": fixed.cell_count(),
            "initial_cells": g.cell_count(),
            "converged": trace.converged,
        }));
        Ok(rep)
    }
}

// ---------------------------------------------------------------------------

pub struct JldCorrespondence;

impl Experiment for JldCorrespondence {
    fn id(&self) -> &'static str {
        "jld-correspondence"
    }

    fn describe(&self) -> &'static str {
        "1+1 wave-field correspondence: residual order, symmetry, restriction"
    }

    fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        let tc = config.transform.clone().unwrap_or(crate::config::TransformConfig {
            n: 48,
            h: 0.5,
            n_sigma: 5,
            mass: 1.5,
            width: 0.6,
            levels: 3,
        });
        // Residual-order study on the chord fixture.
        let mut rows = String::from("level,n,h,residual,symmetry_defect,restriction_defect\n");
        let mut residuals = Vec::new();
        let mut sym_max = 0.0_f64;
        let mut restr_max = 0.0_f64;
        for level in 0..tc.levels {
            let n = tc.n << level;
            let h = tc.h / (1 << level) as f64;
            let grid = TransformGrid { n: [n, n], h: [h, h] };
            let f = hyperboloid_chord_fixture(grid, tc.mass, tc.width);
            let n_sigma = (tc.n_sigma - 1) * (1 << level) + 1;
            // The reference is the synthesis of f̌ itself: the restriction
            // identity is exercised through an independent code path.
            let reference = {
                let zero_sigma = 3;
                let (field, _) = jld_transform_1p1(&f, grid, zero_sigma, h, None)?;
                field.data.index_axis(ndarray::Axis(0), 1).to_owned()
            };
            let (_, report) = jld_transform_1p1(&f, grid, n_sigma, h, Some(&reference))?;
            rows.push_str(&format!(
                "{},{},{},{},{},{}\n",
                level, n, h, report.wave_residual_rel, report.symmetry_defect,
                report.restriction_defect_sup
            ));
            residuals.push(report.wave_residual_rel);
            sym_max = sym_max.max(report.symmetry_defect);
            restr_max = restr_max.max(report.restriction_defect_sup);
        }
        let orders: Vec<f64> = residuals
            .windows(2)
            .map(|p| (p[0] / p[1]).log2())
            .collect();

        // Double-cone vanishing transfer.
        let dc_grid = TransformGrid {
            n: [96, 96],
            h: [0.25, 0.25],
        };
        let radius = 2.0;
        let (f_check, f_pos) = double_cone_fixture(dc_grid, radius, 30_000, 0.35);
        let n_sigma = 2 * ((radius / 0.25) as usize) + 3;
        let (field, dc_report) =
            jld_transform_1p1(&f_check, dc_grid, n_sigma, 0.25, Some(&f_pos))?;
        let half = (n_sigma - 1) / 2;
        let f0_max = field
            .data
            .index_axis(ndarray::Axis(0), half)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let mut interior_max = 0.0_f64;
        for (s, &sigma) in field.sigmas.iter().enumerate() {
            for i in 0..96 {
                for j in 0..96 {
                    let t = dc_grid.x(0, i);
                    let x = dc_grid.x(1, j);
                    if t.abs() + (x * x + sigma * sigma).sqrt() <= radius - 2.0 * 0.25 {
                        interior_max = interior_max.max(field.data[(s, i, j)].norm());
                    }
                }
            }
        }
        let dc_ratio = interior_max / f0_max / dc_report.restriction_defect_sup.max(1e-300);

        let mut rep = ExperimentReport::new(config, BTreeMap::new());
        rep.add_table("convergence", rows);
        rep.set_verdicts(json!({
            "orders": orders,
            "min_order": orders.iter().cloned().fold(f64::INFINITY, f64::min),
            "symmetry_defect_max": sym_max,
            "restriction_defect_max": restr_max,
            "dc_restriction_defect": dc_report.restriction_defect_sup,
            "dc_interior_over_defect": dc_ratio,
            "dc_pass": dc_ratio <= 10.0,
        }));
        Ok(rep)
    }
}

// ---------------------------------------------------------------------------

/// Gauss-law consistency: q from ρ̂(0) extrapolation against the far-field
/// Coulomb flux, for the transition-shell profile family and the plain
/// fixtures.  Exposed for the acceptance suite (not a registry pipeline).
pub fn gauss_law_check(profile_q: f64, r1: f64, r2: f64) -> anyhow::Result<(f64, f64)> {
    let profile = RadialChargeProfile::new(profile_q, r1, r2)?;
    // Route 1: ρ̂(0) extrapolation on the grid.
    let grid = Arc::new(RadialGrid::default_log());
    let modes = Arc::new(ModeSet::new(1));
    let n = 4000;
    let h = (r2 - r1) / n as f64;
    // Profile samples as an explicit ℓ=0 transform via dense quadrature,
    // evaluated at the three lowest grid nodes through the charge type.
    let mut rho_hat = ndarray::Array2::zeros((modes.len(), grid.len()));
    let y00 = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    for (j, &w) in grid.nodes().iter().enumerate() {
        let mut acc = 0.0;
        for k in 0..n {
            let r = r1 + (k as f64 + 0.5) * h;
            let j0 = if w * r < 1e-9 {
                1.0
            } else {
                (w * r).sin() / (w * r)
            };
            acc += 4.0 * std::f64::consts::PI * r * r * j0 * profile.rho(r) * h;
        }
        rho_hat[(0, j)] = num_complex::Complex64::new(acc / y00, 0.0);
    }
    let gamma = Charge::from_mode_arrays(
        grid,
        modes,
        ndarray::Array2::zeros(rho_hat.dim()),
        rho_hat,
        profile_q,
    )?;
    let (q_momentum, _) = gamma.charge_of()?;
    // Route 2: far-field flux of the Coulomb solver built from ρ samples.
    let spec_like = RadialCoulomb::from_samples(
        (0..n).map(|k| r1 + (k as f64 + 0.5) * h).collect(),
        (0..n)
            .map(|k| profile.rho(r1 + (k as f64 + 0.5) * h))
            .collect(),
    )?;
    let q_flux = spec_like.flux_charge(r2 * 1.5)?;
    Ok((q_momentum, q_flux))
}
