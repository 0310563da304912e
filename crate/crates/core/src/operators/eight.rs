//! Raw 8D collision forms: the full weak quantum Boltzmann operator, its
//! four-way decomposition (binary/ternary main terms and the two interference
//! cross terms), and the Taylor-remainder terms of the expansion, all through
//! direct half-sphere quadrature at coarse tolerance.

use crate::error::Result;
use crate::geometry::{post_collision, CollisionFrame};
use crate::operators::semi::{kernel_mu_cut, kernel_radial_split};
use crate::operators::ScalingParams;
use crate::potentials::RadialPotential;
use crate::quadrature::{
    integrate_collision_ladder, integrate_collision_multi, CollisionIntegrand, CollisionLadder,
    IntegralEstimate, QuadratureSpec, SphereLayer,
};
use crate::states::{taylor_remainders, SmoothField};
use nalgebra::{Matrix3, Vector3};

type V3 = Vector3<f64>;
type M3 = Matrix3<f64>;

const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;

fn layer_for(pot: &RadialPotential, eps: f64) -> SphereLayer {
    SphereLayer { eps, mu_cut: kernel_mu_cut(pot) }
}

/// The square-root argument of the interference factor. The kernel derivation
/// produces √(u² − (k̂·u)²)/ε = (|u|/ε)√(1 − λ²); the alternative reading
/// √(u² − |k̂·u|)/ε that appears once in the source material is dimensionally
/// inconsistent and is deliberately not implemented.
#[inline]
pub(crate) fn cross_vhat_arg(u_norm: f64, eps: f64, mu: f64) -> f64 {
    let gamma = u_norm / eps;
    let lambda = (mu / gamma).min(1.0);
    gamma * (1.0 - lambda * lambda).max(0.0).sqrt()
}

// --- four-way decomposition ------------------------------------------------

/// Output order of [`RawPartsIntegrand`].
pub const RAW_TOTAL: usize = 0;
pub const RAW_BINARY: usize = 1;
pub const RAW_TERNARY: usize = 2;
pub const RAW_CROSS_BINARY: usize = 3;
pub const RAW_CROSS_TERNARY: usize = 4;

/// Multi-output 8D integrand: the full weak form plus its four parts. The
/// total is computed from its own single expression, the parts from
/// independently coded ones, so their sum checks the expansion algebra.
pub struct RawPartsIntegrand<'a> {
    pub f: &'a SmoothField,
    pub psi: &'a SmoothField,
    pub pot: RadialPotential,
    pub params: ScalingParams,
}

impl<'a> CollisionIntegrand<5> for RawPartsIntegrand<'a> {
    type PairData = f64;

    fn pair_data(&self, v: &V3, v1: &V3) -> Option<f64> {
        let ff1 = self.f.value(v) * self.f.value(v1);
        if ff1 == 0.0 {
            None
        } else {
            Some(ff1)
        }
    }

    fn eval(&self, ff1: &f64, frame: &CollisionFrame, mu: f64) -> [f64; 5] {
        let p = &self.params;
        let akdu = -frame.k_dot_u();
        let v1hat = self.pot.vhat(mu);
        let v2hat = self.pot.vhat(cross_vhat_arg(frame.u_norm, p.eps, mu));
        if v1hat == 0.0 {
            return [0.0; 5];
        }
        let (vp, v1p) = post_collision(frame);
        // Pair-swap symmetrized test-function increment: the quadrature grid
        // parametrizes ordered pairs as (v, v + rω), so the two orderings are
        // averaged analytically instead of relying on the grid to cancel the
        // odd part.
        let dpsi = 0.5
            * (self.psi.value(&vp) - self.psi.value(&frame.v) + self.psi.value(&v1p)
                - self.psi.value(&frame.v1));
        let fsum_p = self.f.value(&vp) + self.f.value(&v1p);
        let pref = akdu / (4.0 * PI2 * p.eps.powi(4)) * ff1;

        let raw = pref
            * v1hat
            * (v1hat + p.theta * v2hat)
            * dpsi
            * (1.0 + p.theta * p.alpha * fsum_p);
        let binary = pref * v1hat * v1hat * dpsi;
        let ternary = p.theta * p.alpha * pref * v1hat * v1hat * dpsi * fsum_p;
        let rb = p.theta * pref * v1hat * v2hat * dpsi;
        let rt = p.alpha * pref * v1hat * v2hat * dpsi * fsum_p;
        [raw, binary, ternary, rb, rt]
    }
}

/// Results of the raw evaluation and decomposition.
#[derive(Clone, Copy, Debug)]
pub struct EightDResults {
    pub raw: IntegralEstimate,
    pub binary: IntegralEstimate,
    pub ternary: IntegralEstimate,
    pub cross_binary: IntegralEstimate,
    pub cross_ternary: IntegralEstimate,
}

/// Evaluate the raw weak form and its four parts in one pass.
pub fn decompose_8d(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<EightDResults> {
    let integrand = RawPartsIntegrand { f, psi, pot: *pot, params: *params };
    let est = integrate_collision_multi(
        &integrand,
        f.decay_class(),
        spec,
        &layer_for(pot, params.eps),
        kernel_radial_split(pot, params.eps),
    )?;
    Ok(EightDResults {
        raw: est[RAW_TOTAL],
        binary: est[RAW_BINARY],
        ternary: est[RAW_TERNARY],
        cross_binary: est[RAW_CROSS_BINARY],
        cross_ternary: est[RAW_CROSS_TERNARY],
    })
}

/// The full 8D weak form alone.
pub fn qb_weak_raw(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    Ok(decompose_8d(f, psi, pot, params, spec)?.raw)
}

// --- Taylor-remainder terms ------------------------------------------------

/// Output order of [`RemainderTermsIntegrand`].
pub const REM_T4: usize = 0;
pub const REM_T4P: usize = 1;
pub const REM_T5P: usize = 2;
pub const REM_T6P: usize = 3;

/// The expansion terms carrying exact Taylor remainders r₃ (of ψ) and ρ₂
/// (of f at both displaced points), which have no closed angular form.
pub struct RemainderTermsIntegrand<'a> {
    pub f: &'a SmoothField,
    pub psi: &'a SmoothField,
    pub pot: RadialPotential,
    pub params: ScalingParams,
}

pub struct RemainderPairData {
    ff1: f64,
    sum_f: f64,
    dgf: V3,
    dgpsi: V3,
    hpsi_sum: M3,
}

impl<'a> CollisionIntegrand<4> for RemainderTermsIntegrand<'a> {
    type PairData = RemainderPairData;

    fn pair_data(&self, v: &V3, v1: &V3) -> Option<RemainderPairData> {
        let fv = self.f.value(v);
        let f1 = self.f.value(v1);
        let ff1 = fv * f1;
        if ff1 == 0.0 {
            return None;
        }
        Some(RemainderPairData {
            ff1,
            sum_f: fv + f1,
            dgf: self.f.gradient(v) - self.f.gradient(v1),
            dgpsi: self.psi.gradient(v) - self.psi.gradient(v1),
            hpsi_sum: self.psi.hessian(v) + self.psi.hessian(v1),
        })
    }

    fn eval(&self, pd: &RemainderPairData, frame: &CollisionFrame, mu: f64) -> [f64; 4] {
        let p = &self.params;
        let akdu = -frame.k_dot_u();
        if akdu == 0.0 {
            return [0.0; 4];
        }
        let b4 = self.pot.b_coefficient(4.0, mu);
        let b5 = self.pot.b_coefficient(5.0, mu);
        let b6 = self.pot.b_coefficient(6.0, mu);
        if b4 == 0.0 && b5 == 0.0 && b6 == 0.0 {
            return [0.0; 4];
        }
        let (vp, v1p) = post_collision(frame);
        // All ψ-sided factors are pair-swap symmetrized (the swapped ordering
        // of the same geometric pair has displacement v₁ → v₁′ and k̂ → −k̂),
        // so the grid never has to resolve the odd part by cancellation.
        let r3 = 0.5
            * (taylor_remainders(self.psi, &frame.v, &vp)
                .expect("nonzero displacement")
                .0
                + taylor_remainders(self.psi, &frame.v1, &v1p)
                    .expect("nonzero displacement")
                    .0);
        let rho2 = taylor_remainders(self.f, &frame.v, &vp).expect("nonzero displacement").1
            + taylor_remainders(self.f, &frame.v1, &v1p)
                .expect("nonzero displacement")
                .1;
        let khat = frame.khat;
        let k_gpsi = 0.5 * khat.dot(&pd.dgpsi);
        let k_h_k = 0.5 * khat.dot(&(pd.hpsi_sum * khat));
        let k_dgf = khat.dot(&pd.dgf);
        let ta = p.theta * p.alpha;

        let t4 = b4 * r3 / (4.0 * PI2);
        let t4p = ta * b4 * (r3 * pd.sum_f + rho2 * k_gpsi + 0.5 * k_h_k * k_dgf)
            / (4.0 * PI2);
        let t5p = ta * p.eps * b5 * (0.5 * rho2 * k_h_k + r3 * k_dgf) / (4.0 * PI2);
        let t6p = ta * p.eps * p.eps * b6 * rho2 * r3 / (4.0 * PI2);
        [t4 * pd.ff1, t4p * pd.ff1, t5p * pd.ff1, t6p * pd.ff1]
    }
}

/// Remainder-term results [T₄, T₄′, T₅′, T₆′] as pair-weighted integrals.
#[derive(Clone, Copy, Debug)]
pub struct RemainderResults {
    pub t4: IntegralEstimate,
    pub t4p: IntegralEstimate,
    pub t5p: IntegralEstimate,
    pub t6p: IntegralEstimate,
}

impl RemainderResults {
    pub fn total(&self) -> f64 {
        self.t4.value + self.t4p.value + self.t5p.value + self.t6p.value
    }
    pub fn total_err(&self) -> f64 {
        self.t4.error_estimate
            + self.t4p.error_estimate
            + self.t5p.error_estimate
            + self.t6p.error_estimate
    }
}

pub fn remainder_terms_8d(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<RemainderResults> {
    let integrand = RemainderTermsIntegrand { f, psi, pot: *pot, params: *params };
    let est = integrate_collision_multi(
        &integrand,
        f.decay_class(),
        spec,
        &layer_for(pot, params.eps),
        kernel_radial_split(pot, params.eps),
    )?;
    Ok(RemainderResults {
        t4: est[REM_T4],
        t4p: est[REM_T4P],
        t5p: est[REM_T5P],
        t6p: est[REM_T6P],
    })
}

/// m-ladder variant of [`remainder_terms_8d`] for consumers that difference
/// collision integrals and estimate errors on the differenced quantity.
/// `known` forwards previously computed rungs (see
/// [`crate::quadrature::integrate_collision_ladder`]).
pub fn remainder_ladder_8d(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
    known: Option<([[f64; 4]; 2], [usize; 2])>,
) -> Result<CollisionLadder<4>> {
    let integrand = RemainderTermsIntegrand { f, psi, pot: *pot, params: *params };
    integrate_collision_ladder(
        &integrand,
        f.decay_class(),
        spec,
        &layer_for(pot, params.eps),
        kernel_radial_split(pot, params.eps),
        known,
    )
}

/// m-ladder variant of [`cross_terms_8d`] (computes the full five-part
/// decomposition; the cross components are at indices [`RAW_CROSS_BINARY`]
/// and [`RAW_CROSS_TERNARY`]).
pub fn cross_ladder_8d(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
    known: Option<([[f64; 5]; 2], [usize; 2])>,
) -> Result<CollisionLadder<5>> {
    let integrand = RawPartsIntegrand { f, psi, pot: *pot, params: *params };
    integrate_collision_ladder(
        &integrand,
        f.decay_class(),
        spec,
        &layer_for(pot, params.eps),
        kernel_radial_split(pot, params.eps),
        known,
    )
}

/// Interference cross terms (⟨R_B, ψ⟩, ⟨R_T, ψ⟩) by 8D quadrature.
pub fn cross_terms_8d(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<(IntegralEstimate, IntegralEstimate)> {
    let d = decompose_8d(f, psi, pot, params, spec)?;
    Ok((d.cross_binary, d.cross_ternary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::semi::{main_terms_semi, MainSemi};

    fn coarse() -> QuadratureSpec {
        QuadratureSpec {
            pair_nodes: 60_000,
            sphere_nodes: 72,
            radial_u_nodes: 16,
            ..Default::default()
        }
    }

    #[test]
    fn constant_psi_vanishes_nodewise() {
        let f = SmoothField::maxwellian();
        let psi = SmoothField::const_probe();
        let pot = RadialPotential::gaussian();
        let params = ScalingParams::new(0.4, 1.0, 1.0, 1.0).unwrap();
        let r = decompose_8d(&f, &psi, &pot, &params, &coarse()).unwrap();
        assert_eq!(r.raw.value, 0.0);
        assert_eq!(r.binary.value, 0.0);
    }

    #[test]
    fn alpha_zero_kills_ternary_and_cross_ternary() {
        let f = SmoothField::maxwellian();
        let psi = SmoothField::gauss_test();
        let pot = RadialPotential::gaussian();
        let params = ScalingParams::new(0.4, 0.0, 0.0, -1.0).unwrap();
        let r = decompose_8d(&f, &psi, &pot, &params, &coarse()).unwrap();
        assert_eq!(r.ternary.value, 0.0);
        assert_eq!(r.cross_ternary.value, 0.0);
        assert!(r.binary.value.abs() > 0.0);
        let rem = remainder_terms_8d(&f, &psi, &pot, &params, &coarse()).unwrap();
        assert_eq!(rem.t4p.value, 0.0);
        assert_eq!(rem.t5p.value, 0.0);
        assert_eq!(rem.t6p.value, 0.0);
    }

    #[test]
    fn theta_flip_flips_cross_binary() {
        let f = SmoothField::maxwellian();
        let psi = SmoothField::gauss_test();
        let pot = RadialPotential::gaussian();
        let pp = ScalingParams::new(0.4, 0.0, 0.0, 1.0).unwrap();
        let pm = ScalingParams::new(0.4, 0.0, 0.0, -1.0).unwrap();
        let rp = decompose_8d(&f, &psi, &pot, &pp, &coarse()).unwrap();
        let rm = decompose_8d(&f, &psi, &pot, &pm, &coarse()).unwrap();
        assert_eq!(rp.cross_binary.value, -rm.cross_binary.value);
        assert_eq!(rp.binary.value, rm.binary.value);
    }

    #[test]
    fn four_way_sum_equals_raw() {
        let f = SmoothField::two_bump(2.0);
        let psi = SmoothField::gauss_test();
        let pot = RadialPotential::gaussian();
        let params = ScalingParams::new(0.4, 1.0, 1.0, -1.0).unwrap();
        let r = decompose_8d(&f, &psi, &pot, &params, &coarse()).unwrap();
        let sum = r.binary.value + r.ternary.value + r.cross_binary.value
            + r.cross_ternary.value;
        let scale = r.raw.value.abs().max(1e-12);
        assert!(
            (r.raw.value - sum).abs() <= 1e-12 * scale
                + 3.0 * (r.raw.error_estimate + r.binary.error_estimate),
            "raw {} vs parts {}",
            r.raw.value,
            sum
        );
    }

    #[test]
    fn expansion_identity_binary_dual_route() {
        // t2 + t3 (semi-analytic 6D, closed angular layer) + t4 (8D Taylor
        // remainder) must reproduce the direct 8D binary weak form.
        let f = SmoothField::maxwellian();
        let psi = SmoothField::gauss_test();
        let pot = RadialPotential::gaussian();
        let params = ScalingParams::new(0.4, 0.0, 0.0, 1.0).unwrap();
        let spec = coarse();
        let MainSemi { t2, t3, .. } = main_terms_semi(&f, &psi, &pot, &params, &spec).unwrap();
        let rem = remainder_terms_8d(&f, &psi, &pot, &params, &spec).unwrap();
        let d = decompose_8d(&f, &psi, &pot, &params, &spec).unwrap();
        let semi_route = t2.value + t3.value + rem.t4.value;
        let tol = 3.0
            * (t2.error_estimate
                + t3.error_estimate
                + rem.t4.error_estimate
                + d.binary.error_estimate)
            + 1e-2 * d.binary.value.abs();
        assert!(
            (semi_route - d.binary.value).abs() <= tol,
            "semi route {semi_route} vs 8D binary {} (tol {tol})",
            d.binary.value
        );
    }
}
