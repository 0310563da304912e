//! Sweep orchestration: ε-ladder runs comparing the collision operator's weak
//! form against its grazing-collision limit, empirical rate fitting, envelope
//! checks against frozen calibrated constants, and the lemma verification
//! suite.

pub mod lemmas;

use crate::error::{Error, Result};
use crate::operators::eight::{
    cross_ladder_8d, remainder_ladder_8d, RAW_CROSS_BINARY, RAW_CROSS_TERNARY,
};
use crate::operators::semi::{main_terms_semi, ql_weak};
use crate::operators::ScalingParams;
use crate::potentials::RadialPotential;
use crate::quadrature::{pair_nodes_for_axis, QuadratureSpec};
use crate::states::SmoothField;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub use lemmas::{calibrate, run_lemma_suite, LemmaId, LemmaRatio, LemmaRow};

/// How the quantum strength α varies along the ε ladder.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaSchedule {
    /// α(ε) ≡ α₀.
    Constant { alpha0: f64 },
    /// α(ε) = α₀ + c·ε^β.
    Affine { alpha0: f64, c: f64, beta: f64 },
    /// α(ε) = (2πε)³ with limit α₀ = 0 (classical limit scaling).
    Classical,
}

impl AlphaSchedule {
    pub fn alpha(&self, eps: f64) -> f64 {
        match *self {
            AlphaSchedule::Constant { alpha0 } => alpha0,
            AlphaSchedule::Affine { alpha0, c, beta } => alpha0 + c * eps.powf(beta),
            AlphaSchedule::Classical => (2.0 * std::f64::consts::PI * eps).powi(3),
        }
    }

    pub fn alpha0(&self) -> f64 {
        match *self {
            AlphaSchedule::Constant { alpha0 } | AlphaSchedule::Affine { alpha0, .. } => alpha0,
            AlphaSchedule::Classical => 0.0,
        }
    }
}

/// Full description of a convergence sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    /// Strictly decreasing kernel widths, all in (0, 1].
    pub eps_ladder: Vec<f64>,
    pub alpha_schedule: AlphaSchedule,
    /// Envelope exponent η ∈ (0, 1).
    pub eta: f64,
    pub theta: f64,
    /// Named selections from the built-in libraries.
    pub potential: String,
    pub f: String,
    pub psi: String,
    pub quadrature: QuadratureSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            eps_ladder: vec![0.4, 0.2, 0.1, 0.05],
            alpha_schedule: AlphaSchedule::Constant { alpha0: 1.0 },
            eta: 0.9,
            theta: 1.0,
            potential: "gaussian".into(),
            f: "maxwellian".into(),
            psi: "gauss_test".into(),
            quadrature: QuadratureSpec::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eps_ladder.is_empty() {
            return Err(Error::Config("eps ladder is empty".into()));
        }
        for w in self.eps_ladder.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::Config("eps ladder must be strictly decreasing".into()));
            }
        }
        if self.eps_ladder.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return Err(Error::Config("all eps must lie in (0, 1]".into()));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::Config(format!("eta must lie in (0,1), got {}", self.eta)));
        }
        if self.theta != 1.0 && self.theta != -1.0 {
            return Err(Error::Config("theta must be ±1".into()));
        }
        field_by_name(&self.f)?;
        field_by_name(&self.psi)?;
        potential_by_name(&self.potential)?;
        Ok(())
    }
}

/// Resolve a distribution / test-function selection by name.
pub fn field_by_name(name: &str) -> Result<SmoothField> {
    Ok(match name {
        "maxwellian" => SmoothField::maxwellian(),
        "two_bump" => SmoothField::two_bump(2.0),
        "bump" => SmoothField::bump(),
        "gauss_test" => SmoothField::gauss_test(),
        "sine_test" => SmoothField::sine_test(nalgebra::Vector3::new(1.0, 0.5, -0.25)),
        "linear_gauss_test" => SmoothField::linear_gauss_test(),
        "zero" => SmoothField::zero(),
        other => {
            return Err(Error::Config(format!(
                "unknown field '{other}' (expected maxwellian|two_bump|bump|gauss_test|sine_test|linear_gauss_test|zero)"
            )))
        }
    })
}

/// Resolve a potential selection by name.
pub fn potential_by_name(name: &str) -> Result<RadialPotential> {
    Ok(match name {
        "gaussian" => RadialPotential::gaussian(),
        "indicator" => RadialPotential::indicator(1.0),
        "power_law" => RadialPotential::power_law(2.0),
        other => {
            return Err(Error::Config(format!(
                "unknown potential '{other}' (expected gaussian|indicator|power_law)"
            )))
        }
    })
}

/// One ε point of a sweep. Field order matches the CSV column order.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub alpha: f64,
    /// |⟨Q_B − Q_L, ψ⟩| assembled as the direct sum of the per-term gaps,
    /// the Taylor-remainder terms, and the interference cross terms.
    pub gap: f64,
    /// |T₂ + T₂′ − L₂|.
    pub gap_t2: f64,
    /// |T₃ + T₃ₐ′ − L₃ₐ|.
    pub gap_t3a: f64,
    /// |T₃ᵦ′ − L₃ᵦ|.
    pub gap_t3b: f64,
    /// |T₄ + T₄′ + T₅′ + T₆′|.
    pub remainder_abs: f64,
    /// |⟨R_B, ψ⟩ + ⟨R_T, ψ⟩|.
    pub cross_abs: f64,
    /// Combined quadrature error proxy for the assembled gap.
    pub quad_err: f64,
}

pub const CSV_HEADER: &str =
    "eps,alpha,gap,gap_t2,gap_t3a,gap_t3b,remainder_abs,cross_abs,quad_err";

/// Result of a full sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
    /// OLS slope of log gap vs log ε over rows clearing the noise gate.
    pub fitted_rate: Option<f64>,
    pub r_squared: Option<f64>,
    /// max over rows of gap / (ε^η + |α − α₀|).
    pub theorem_constant: f64,
    /// gap ≤ C_impl (ε^η + |α − α₀|) on every row, with the frozen constant.
    pub envelope_pass: bool,
    /// All gaps identically zero (e.g. f ≡ 0); no rate is defined.
    pub degenerate: bool,
    pub library_version: String,
}

impl ConvergenceReport {
    /// Fixed-column CSV body (header + one row per ε), deterministic bytes.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                r.eps,
                r.alpha,
                r.gap,
                r.gap_t2,
                r.gap_t3a,
                r.gap_t3b,
                r.remainder_abs,
                r.cross_abs,
                r.quad_err
            ));
        }
        s
    }
}

/// Frozen implementation constants for the "≲" envelope checks, keyed by
/// check name. Produced once by [`calibrate`] and committed; loaded from
/// `constants.json` thereafter.
#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct Constants {
    pub c_impl: BTreeMap<String, f64>,
}

impl Constants {
    pub fn get(&self, name: &str) -> f64 {
        self.c_impl.get(name).copied().unwrap_or(f64::INFINITY)
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.c_impl.insert(name.to_string(), value);
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Evaluate one ladder point: per-term gaps semi-analytically, remainder and
/// cross terms by coarse 8D quadrature.
pub fn sweep_point(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<SweepRow> {
    sweep_point_inner(f, psi, pot, params, spec, true)
}

/// [`sweep_point`] without budget escalation: values and errors at exactly
/// the given spec. Used where gate-accuracy is not required (calibration).
pub fn sweep_point_base(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<SweepRow> {
    sweep_point_inner(f, psi, pot, params, spec, false)
}

/// The gap is a difference of collision integrals whose quadrature errors are
/// strongly correlated (the remainder and interference terms share the same
/// m-tail structure with opposite signs), so error is estimated on the gap
/// itself: a geometric m-tail from the three-rung ladder of assembled gaps,
/// plus gap-level inner-layer (radial, sphere-μ) sensitivities, plus the
/// 6D main-term errors. Per-term error sums would overstate the gap error by
/// the cancellation factor and starve the 10× noise gate.
///
/// With `escalate`, budgets grow until the row clears the noise gate with
/// margin or caps are reached: the 6D main terms by ×4 up to twice, the 8D
/// ladder by two GH orders up to three times (reusing the previous rungs).
/// Escalation stops early when the measured inner-layer floor alone exceeds
/// the gate — more m cannot fix that, and the row is reported as noisy.
fn sweep_point_inner(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
    escalate: bool,
) -> Result<SweepRow> {
    let mut semi_spec = *spec;
    let mut main = main_terms_semi(f, psi, pot, params, &semi_spec)?;
    // Remainder terms: full pair budget but a lean (spectrally sufficient)
    // sphere layer, since pair resolution is what limits their accuracy.
    let mut spec8 = QuadratureSpec { sphere_nodes: spec.sphere_nodes.min(72), ..*spec };
    let mut rem = remainder_ladder_8d(f, psi, pot, params, &spec8, None)?;
    let mut cross = cross_ladder_8d(f, psi, pot, params, &spec8, None)?;
    let mut semi_escalations = 0u32;
    let mut m_escalations = 0u32;
    loop {
        let semi_sum = main.gap_t2.value + main.gap_t3a.value + main.gap_t3b.value;
        let semi_err = main.gap_t2.error_estimate
            + main.gap_t3a.error_estimate
            + main.gap_t3b.error_estimate;
        let mut gaps = [0.0f64; 3];
        for i in 0..3 {
            let rem_tot: f64 = rem.levels[i].iter().sum();
            let cr = cross.levels[i][RAW_CROSS_BINARY] + cross.levels[i][RAW_CROSS_TERNARY];
            gaps[i] = semi_sum + rem_tot + cr;
        }
        let radial_err = (rem.radial_delta.iter().sum::<f64>()
            + cross.radial_delta[RAW_CROSS_BINARY]
            + cross.radial_delta[RAW_CROSS_TERNARY])
            .abs();
        let mu_err = (rem.mu_delta.iter().sum::<f64>()
            + cross.mu_delta[RAW_CROSS_BINARY]
            + cross.mu_delta[RAW_CROSS_TERNARY])
            .abs();
        // The gap's m-residual is a difference of anticorrelated geometric
        // tails with different contraction rates; it is not itself geometric
        // (its sign can alternate along the ladder), so the ratio-sharpened
        // tail bound of a single integral would undersell it. The plain first
        // difference is tight in the alternating regime (|d₁| ≥ |e_m|) and
        // conservative by (λ−1) in the monotone one.
        let m_tail = (gaps[0] - gaps[1]).abs();
        let quad_err = m_tail + radial_err + mu_err + semi_err;
        let gap = gaps[0];
        let needed = gap.abs() / 10.0;

        let cleared = quad_err <= 0.8 * needed;
        let inner_floor = radial_err + mu_err > needed;
        let capped = semi_escalations >= 2 && m_escalations >= 3;
        if !escalate || cleared || inner_floor || capped {
            let cr0 =
                cross.levels[0][RAW_CROSS_BINARY] + cross.levels[0][RAW_CROSS_TERNARY];
            return Ok(SweepRow {
                eps: params.eps,
                alpha: params.alpha,
                gap: gap.abs(),
                gap_t2: main.gap_t2.value.abs(),
                gap_t3a: main.gap_t3a.value.abs(),
                gap_t3b: main.gap_t3b.value.abs(),
                remainder_abs: rem.levels[0].iter().sum::<f64>().abs(),
                cross_abs: cr0.abs(),
                quad_err,
            });
        }
        if semi_err >= 0.3 * needed && semi_escalations < 2 {
            semi_spec.pair_nodes *= 4;
            main = main_terms_semi(f, psi, pot, params, &semi_spec)?;
            semi_escalations += 1;
        } else if m_escalations < 3 {
            let decay = f.decay_class();
            spec8.pair_nodes =
                pair_nodes_for_axis(rem.ms[0] + 2, spec8.radial_u_nodes, decay);
            let known_rem = Some(([rem.levels[0], rem.levels[1]], [rem.ms[0], rem.ms[1]]));
            let known_cross =
                Some(([cross.levels[0], cross.levels[1]], [cross.ms[0], cross.ms[1]]));
            rem = remainder_ladder_8d(f, psi, pot, params, &spec8, known_rem)?;
            cross = cross_ladder_8d(f, psi, pot, params, &spec8, known_cross)?;
            m_escalations += 1;
        } else {
            semi_spec.pair_nodes *= 4;
            main = main_terms_semi(f, psi, pot, params, &semi_spec)?;
            semi_escalations += 1;
        }
    }
}

/// Run the full ε-ladder sweep.
pub fn run_sweep(cfg: &SweepConfig, constants: &Constants) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let f = field_by_name(&cfg.f)?;
    let psi = field_by_name(&cfg.psi)?;
    let pot = potential_by_name(&cfg.potential)?;

    let mut rows = Vec::with_capacity(cfg.eps_ladder.len());
    for &eps in &cfg.eps_ladder {
        let params = ScalingParams::new(
            eps,
            cfg.alpha_schedule.alpha(eps),
            cfg.alpha_schedule.alpha0(),
            cfg.theta,
        )?;
        rows.push(sweep_point(&f, &psi, &pot, &params, &cfg.quadrature)?);
    }

    let degenerate = rows.iter().all(|r| r.gap == 0.0 && r.quad_err == 0.0);
    let alpha0 = cfg.alpha_schedule.alpha0();
    let envelope_arg =
        |r: &SweepRow| r.eps.powf(cfg.eta) + (r.alpha - alpha0).abs();

    if degenerate {
        return Ok(ConvergenceReport {
            config: cfg.clone(),
            rows,
            fitted_rate: None,
            r_squared: None,
            theorem_constant: 0.0,
            envelope_pass: true,
            degenerate: true,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
        });
    }

    let usable: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.gap > 10.0 * r.quad_err)
        .map(|r| (r.eps, r.gap))
        .collect();
    if usable.len() < 3 {
        return Err(Error::NoiseDominated);
    }
    let (slope, _intercept, r2) = fit_rate(&usable)?;
    let theorem_constant = rows
        .iter()
        .map(|r| r.gap / envelope_arg(r))
        .fold(0.0_f64, f64::max);
    let c = constants.get("theorem_envelope");
    let envelope_pass = rows.iter().all(|r| r.gap <= c * envelope_arg(r));

    Ok(ConvergenceReport {
        config: cfg.clone(),
        rows,
        fitted_rate: Some(slope),
        r_squared: Some(r2),
        theorem_constant,
        envelope_pass,
        degenerate: false,
        library_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// OLS fit of log gap against log ε. Rows must already have passed the noise
/// gate; requires at least 3.
pub fn fit_rate(rows: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if rows.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: rows.len() });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(e, g)| *e > 0.0 && *g > 0.0)
        .map(|(e, g)| (e.ln(), g.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok((slope, intercept, r2))
}

/// The limit value ⟨Q_L^{α₀}, ψ⟩ a sweep converges to (used by the classical
/// limit check with α₀ = 0).
pub fn limit_value(
    cfg: &SweepConfig,
    eps_for_eval: f64,
) -> Result<crate::quadrature::IntegralEstimate> {
    let f = field_by_name(&cfg.f)?;
    let psi = field_by_name(&cfg.psi)?;
    let pot = potential_by_name(&cfg.potential)?;
    let params = ScalingParams::new(
        eps_for_eval,
        cfg.alpha_schedule.alpha(eps_for_eval),
        cfg.alpha_schedule.alpha0(),
        cfg.theta,
    )?;
    ql_weak(&f, &psi, &pot, &params, &cfg.quadrature)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_rate_exact_lines() {
        let rows: Vec<(f64, f64)> = [0.4, 0.2, 0.1, 0.05].iter().map(|&e| (e, e)).collect();
        let (s, _, r2) = fit_rate(&rows).unwrap();
        assert!((s - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);

        let rows: Vec<(f64, f64)> =
            [0.4f64, 0.2, 0.1, 0.05].iter().map(|&e| (e, e.sqrt())).collect();
        let (s, _, _) = fit_rate(&rows).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fit_rate_synthetic_noise_floor_with_gate() {
        // gap = 2ε + 0.01; the gate removes rows where the floor dominates.
        let rows: Vec<(f64, f64)> = [0.4, 0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|&e| (e, 2.0 * e + 0.01))
            .filter(|&(_, g)| g > 10.0 * 0.001)
            .collect();
        let (s, _, _) = fit_rate(&rows).unwrap();
        assert!((0.9..=1.1).contains(&s), "slope {s}");
    }

    #[test]
    fn fit_rate_insufficient() {
        assert!(matches!(
            fit_rate(&[(0.4, 0.1), (0.2, 0.05)]),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SweepConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.eps_ladder = vec![0.1, 0.2];
        assert!(cfg.validate().is_err());
        cfg.eps_ladder = vec![1.5, 0.2];
        assert!(cfg.validate().is_err());
        cfg.eps_ladder = vec![0.4, 0.2];
        cfg.eta = 1.0;
        assert!(cfg.validate().is_err());
        cfg.eta = 0.9;
        cfg.f = "nonsense".into();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_profile_degenerate_sweep() {
        let cfg = SweepConfig {
            f: "zero".into(),
            quadrature: QuadratureSpec {
                pair_nodes: 50_000,
                sphere_nodes: 32,
                radial_u_nodes: 8,
                ..Default::default()
            },
            ..Default::default()
        };
        let rep = run_sweep(&cfg, &Constants::default()).unwrap();
        assert!(rep.degenerate);
        assert!(rep.fitted_rate.is_none());
        assert!(rep.rows.iter().all(|r| r.gap == 0.0));
    }

    #[test]
    fn alpha_schedules() {
        let c = AlphaSchedule::Classical;
        let e = 0.25;
        assert!((c.alpha(e) - (2.0 * std::f64::consts::PI * e).powi(3)).abs() < 1e-15);
        assert_eq!(c.alpha0(), 0.0);
        let a = AlphaSchedule::Affine { alpha0: 1.0, c: 2.0, beta: 1.0 };
        assert!((a.alpha(0.1) - 1.2).abs() < 1e-15);
    }

    #[test]
    fn csv_shape_and_determinism() {
        let cfg = SweepConfig {
            f: "zero".into(),
            quadrature: QuadratureSpec { pair_nodes: 50_000, ..Default::default() },
            ..Default::default()
        };
        let r1 = run_sweep(&cfg, &Constants::default()).unwrap();
        let r2 = run_sweep(&cfg, &Constants::default()).unwrap();
        assert_eq!(r1.to_csv(), r2.to_csv());
        let first_line = r1.to_csv().lines().next().unwrap().to_string();
        assert_eq!(first_line, CSV_HEADER);
        assert_eq!(r1.to_csv().lines().count(), 1 + cfg.eps_ladder.len());
    }
}
