//! Semi-analytic 6D forms: the weak Landau operator with its three limit
//! targets, and the rate-critical main terms of the weak Boltzmann expansion
//! after the half-sphere layer is integrated in closed form. Per-term gaps to
//! the targets are evaluated through direct difference integrands (tail
//! moments and the traceless remainder matrix), so no catastrophic
//! cancellation occurs at small ε.

use crate::error::Result;
use crate::operators::ScalingParams;
use crate::potentials::RadialPotential;
use crate::quadrature::{
    integrate_pair_multi, integrate_pair_multi_tol, IntegralEstimate, PairGeom, PairIntegrand,
    QuadratureSpec,
};
use crate::states::SmoothField;
use nalgebra::{Matrix3, Vector3};
use std::collections::HashMap;
use std::sync::RwLock;

type V3 = Vector3<f64>;
type M3 = Matrix3<f64>;

/// Radial-moment cache shared across quadrature nodes: the radial grid takes
/// only a few dozen distinct |u| values, so each (b₃ε, b₅ε, tail₃) triple is
/// computed once per |u|.
pub struct RadialKernelCache {
    pot: RadialPotential,
    eps: f64,
    map: RwLock<HashMap<u64, (f64, f64, f64)>>,
}

impl RadialKernelCache {
    pub fn new(pot: RadialPotential, eps: f64) -> Self {
        Self { pot, eps, map: RwLock::new(HashMap::new()) }
    }

    /// (B_{3,ε}(r), B_{5,ε}(r), B − B_{3,ε}(r)).
    pub fn get(&self, r: f64) -> (f64, f64, f64) {
        let key = r.to_bits();
        if let Some(&v) = self.map.read().unwrap().get(&key) {
            return v;
        }
        let b3e = self
            .pot
            .truncated_moment(3.0, r, self.eps)
            .expect("radial moment quadrature (a=3)");
        let b5e = self
            .pot
            .truncated_moment(5.0, r, self.eps)
            .expect("radial moment quadrature (a=5)");
        let tail3 = self
            .pot
            .truncated_moment_tail(3.0, r, self.eps)
            .expect("radial tail moment quadrature (a=3)");
        let v = (b3e, b5e, tail3);
        self.map.write().unwrap().insert(key, v);
        v
    }
}

/// Panel boundary for the radial grid at the kernel transition scale
/// r ~ ε·μ_support, where B_{a,ε}(r) turns over and the cross kernel lives.
pub fn kernel_radial_split(pot: &RadialPotential, eps: f64) -> Option<f64> {
    let mu_cut = pot.effective_support(1e-14);
    if mu_cut.is_finite() && mu_cut > 0.0 {
        Some(1.2 * mu_cut * eps)
    } else {
        None
    }
}

/// μ beyond which the sphere-layer kernel is negligible.
pub fn kernel_mu_cut(pot: &RadialPotential) -> f64 {
    pot.effective_support(1e-14)
}

// --- shared pointwise pieces ---------------------------------------------

struct PsiData {
    grad: V3,
    hess: M3,
}

/// (2/r³)·u·(∇ψ(v) − ∇ψ(v₁)).
#[inline]
fn grad_dot(u: &V3, r: f64, gpsi: &V3, gpsi1: &V3) -> f64 {
    2.0 * u.dot(&(gpsi - gpsi1)) / (r * r * r)
}

/// Tr[K(u)·H] = (tr H − ûᵀHû)/r.
#[inline]
fn tr_k_h(u_hat: &V3, r: f64, h: &M3) -> f64 {
    (h.trace() - u_hat.dot(&(h * u_hat))) / r
}

/// Tr[(I − 3û⊗û)·H].
#[inline]
fn tr_q_h(u_hat: &V3, h: &M3) -> f64 {
    h.trace() - 3.0 * u_hat.dot(&(h * u_hat))
}

/// Tr[K(u)·(x⊗y)] = (x·y − (û·x)(û·y))/r.
#[inline]
fn tr_k_xy(u_hat: &V3, r: f64, x: &V3, y: &V3) -> f64 {
    (x.dot(y) - u_hat.dot(x) * u_hat.dot(y)) / r
}

/// Tr[(I − 3û⊗û)·(x⊗y)].
#[inline]
fn tr_q_xy(u_hat: &V3, x: &V3, y: &V3) -> f64 {
    x.dot(y) - 3.0 * u_hat.dot(x) * u_hat.dot(y)
}

// --- weak Landau form and limit targets -----------------------------------

/// Outputs of [`LandauIntegrand`] in order.
pub const TARGET_L2: usize = 0;
pub const TARGET_L3A: usize = 1;
pub const TARGET_L3B: usize = 2;
pub const TARGET_QL: usize = 3;

/// Multi-output integrand producing the limit targets L₂, L₃ₐ, L₃ᵦ and the
/// weak Landau form on shared nodes.
pub struct LandauIntegrand<'a> {
    pub f: &'a SmoothField,
    pub psi: &'a SmoothField,
    pub b: f64,
    pub alpha0: f64,
    pub theta: f64,
}

pub struct LandauVData {
    fv: f64,
    psi: PsiData,
}

impl<'a> PairIntegrand<4> for LandauIntegrand<'a> {
    type VData = LandauVData;

    fn v_data(&self, v: &V3) -> LandauVData {
        LandauVData {
            fv: self.f.value(v),
            psi: PsiData { grad: self.psi.gradient(v), hess: self.psi.hessian(v) },
        }
    }

    fn eval(&self, vd: &LandauVData, geom: &PairGeom) -> [f64; 4] {
        let f1 = self.f.value(&geom.v1);
        let ff1 = vd.fv * f1;
        if ff1 == 0.0 && vd.fv == 0.0 && f1 == 0.0 {
            return [0.0; 4];
        }
        let r = geom.r;
        let u_hat = geom.u / r;
        let gpsi1 = self.psi.gradient(&geom.v1);
        let bracket_grad = -grad_dot(&geom.u, r, &vd.psi.grad, &gpsi1);
        let bracket_tr = tr_k_h(&u_hat, r, &vd.psi.hess);
        let ta0 = self.theta * self.alpha0;
        let l2 = self.b * bracket_grad * ff1 * (1.0 + ta0 * (vd.fv + f1));
        let l3a = self.b * bracket_tr * ff1 * (1.0 + ta0 * (vd.fv + f1));
        let l3b = -ta0 * self.b * (bracket_grad + bracket_tr) * vd.fv * ff1;
        let ql = self.b * (bracket_grad + bracket_tr) * ff1 * (1.0 + ta0 * f1);
        [l2, l3a, l3b, ql]
    }
}

/// Pointwise weak-Landau integrand value at one pair (exposed for nodewise
/// conservation checks).
pub fn landau_integrand_at(
    f: &SmoothField,
    psi: &SmoothField,
    b: f64,
    alpha0: f64,
    theta: f64,
    v: &V3,
    v1: &V3,
) -> f64 {
    let integrand = LandauIntegrand { f, psi, b, alpha0, theta };
    let vd = integrand.v_data(v);
    let u = v - v1;
    let geom = PairGeom { v: *v, v1: *v1, u, r: u.norm() };
    integrand.eval(&vd, &geom)[TARGET_QL]
}

/// Limit targets [L₂, L₃ₐ, L₃ᵦ, ⟨Q_qL^{α₀}, ψ⟩], ε-independent.
pub fn limit_targets(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<[IntegralEstimate; 4]> {
    let b = pot.rate_constant_b()?;
    let integrand =
        LandauIntegrand { f, psi, b, alpha0: params.alpha0, theta: params.theta };
    integrate_pair_multi(&integrand, 2, f.decay_class(), spec, None)
}

/// ⟨Q_qL^{α₀}(f), ψ⟩ alone.
pub fn ql_weak(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    Ok(limit_targets(f, psi, pot, params, spec)?[TARGET_QL])
}

// --- semi-analytic main terms and their gaps ------------------------------

/// Outputs of [`MainTermsIntegrand`] in order.
pub const MAIN_T2: usize = 0;
pub const MAIN_T2P: usize = 1;
pub const MAIN_T3: usize = 2;
pub const MAIN_T3AP: usize = 3;
pub const MAIN_T3BP: usize = 4;
pub const MAIN_GAP_T2: usize = 5;
pub const MAIN_GAP_T3A: usize = 6;
pub const MAIN_GAP_T3B: usize = 7;

/// The rate-critical main terms with the angular layer in closed form:
/// T₂/T₂′ through the vector moment, T₃/T₃ₐ′/T₃ᵦ′ through the matrix moment
/// (main + traceless remainder), plus the three per-term gaps to the limit
/// targets as direct difference integrands.
pub struct MainTermsIntegrand<'a> {
    pub f: &'a SmoothField,
    pub psi: &'a SmoothField,
    pub cache: &'a RadialKernelCache,
    pub params: ScalingParams,
}

pub struct MainVData {
    fv: f64,
    gf: V3,
    psi: PsiData,
}

impl<'a> PairIntegrand<8> for MainTermsIntegrand<'a> {
    type VData = MainVData;

    fn v_data(&self, v: &V3) -> MainVData {
        MainVData {
            fv: self.f.value(v),
            gf: self.f.gradient(v),
            psi: PsiData { grad: self.psi.gradient(v), hess: self.psi.hessian(v) },
        }
    }

    fn eval(&self, vd: &MainVData, geom: &PairGeom) -> [f64; 8] {
        let f1 = self.f.value(&geom.v1);
        let ff1 = vd.fv * f1;
        let gf1 = self.f.gradient(&geom.v1);
        if ff1 == 0.0 && (vd.fv == 0.0 || f1 == 0.0) {
            // Every output carries the product f f₁.
            return [0.0; 8];
        }
        let r = geom.r;
        let u_hat = geom.u / r;
        let p = &self.params;
        let (b3e, b5e, tail3) = self.cache.get(r);
        let eps2 = p.eps * p.eps;
        // R_ε = rc·(I − 3û⊗û), the traceless angular remainder.
        let rc = -eps2 * b5e / (r * r * r);

        let gpsi1 = self.psi.gradient(&geom.v1);
        let sum_f = vd.fv + f1;
        let dgf = vd.gf - gf1;

        // Unsymmetrized T₂ base: −4 B₃ε (u·∇ψ(v))/r³ (integrates to the
        // symmetrized form).
        let t2_base = -4.0 * b3e * geom.u.dot(&vd.psi.grad) / (r * r * r);
        let t2 = t2_base * ff1;
        let t2p = p.theta * p.alpha * sum_f * t2;

        let trkh = tr_k_h(&u_hat, r, &vd.psi.hess);
        let trqh = tr_q_h(&u_hat, &vd.psi.hess);
        let t3_base = b3e * trkh + rc * trqh;
        let t3 = t3_base * ff1;
        let t3ap = p.theta * p.alpha * sum_f * t3;

        let trkxy = tr_k_xy(&u_hat, r, &vd.psi.grad, &dgf);
        let trqxy = tr_q_xy(&u_hat, &vd.psi.grad, &dgf);
        let t3bp = 2.0 * p.theta * p.alpha * (b3e * trkxy + rc * trqxy) * ff1;

        // Per-term gaps against L₂ / L₃ₐ / L₃ᵦ (see the limit lemmas):
        // B₃ε − B = −tail₃ enters directly, never as a difference of large
        // numbers.
        let dot2 = grad_dot(&geom.u, r, &vd.psi.grad, &gpsi1);
        let ta0 = p.theta * p.alpha0;
        let da = p.theta * (p.alpha - p.alpha0);
        let quantum0 = 1.0 + ta0 * sum_f;
        let quantum = 1.0 + p.theta * p.alpha * sum_f;
        let gap_t2 = (tail3 * quantum0 - da * b3e * sum_f) * dot2 * ff1;
        let gap_t3a = ((-tail3 * quantum0 + da * b3e * sum_f) * trkh
            + quantum * rc * trqh)
            * ff1;
        let gap_t3b = 2.0
            * ((-p.theta * p.alpha0 * tail3 + da * b3e) * trkxy
                + p.theta * p.alpha * rc * trqxy)
            * ff1;

        [t2, t2p, t3, t3ap, t3bp, gap_t2, gap_t3a, gap_t3b]
    }
}

/// Named view of the main-term integration results.
#[derive(Clone, Copy, Debug)]
pub struct MainSemi {
    pub t2: IntegralEstimate,
    pub t2p: IntegralEstimate,
    pub t3: IntegralEstimate,
    pub t3ap: IntegralEstimate,
    pub t3bp: IntegralEstimate,
    pub gap_t2: IntegralEstimate,
    pub gap_t3a: IntegralEstimate,
    pub gap_t3b: IntegralEstimate,
}

/// Evaluate the semi-analytic main terms and their target gaps at one ε.
pub fn main_terms_semi(
    f: &SmoothField,
    psi: &SmoothField,
    pot: &RadialPotential,
    params: &ScalingParams,
    spec: &QuadratureSpec,
) -> Result<MainSemi> {
    let cache = RadialKernelCache::new(*pot, params.eps);
    let integrand = MainTermsIntegrand { f, psi, cache: &cache, params: *params };
    let split = kernel_radial_split(pot, params.eps);
    let est = integrate_pair_multi_tol(
        &integrand,
        2,
        f.decay_class(),
        spec,
        split,
        1e-4,
        0.0,
    )?;
    Ok(MainSemi {
        t2: est[MAIN_T2],
        t2p: est[MAIN_T2P],
        t3: est[MAIN_T3],
        t3ap: est[MAIN_T3AP],
        t3bp: est[MAIN_T3BP],
        gap_t2: est[MAIN_GAP_T2],
        gap_t3a: est[MAIN_GAP_T3A],
        gap_t3b: est[MAIN_GAP_T3B],
    })
}
