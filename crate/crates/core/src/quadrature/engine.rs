//! 6D pair integrals ∫∫ F(v, v₁) dv₁ dv and 8D collision integrals with the
//! half-sphere layer, in relative spherical coordinates w = v₁ − v whose r²
//! Jacobian cancels the |u|^{-s} singularities (s ≤ 2) analytically.
//!
//! Reductions are thread-count independent: each outer v-node accumulates
//! sequentially into a compensated sum, per-node partials are collected in
//! index order, and the final combine is a fixed-shape pairwise tree.

use crate::error::{Error, Result};
use crate::geometry::{orthonormal_frame, CollisionFrame};
use crate::quadrature::qmc::Halton6;
use crate::quadrature::rules::{circle_nodes, gauss_hermite_unweighted, gauss_legendre_on};
use crate::quadrature::sum::{pairwise_sum, NeumaierSum};
use crate::states::DecayClass;
use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

type V3 = Vector3<f64>;

/// Node-placement scheme for the pair layer. `SphereProduct` is the tensor
/// scheme with the product sphere rule made explicit (the default for 8D
/// forms); `QmcSobolLike` is the low-discrepancy cross-check scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    TensorGaussHermite,
    QmcSobolLike,
    SphereProduct,
}

/// Quadrature resolution and determinism parameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Total node budget for the 6D (v, v₁) layer.
    pub pair_nodes: usize,
    /// Nodes on S²₋ per pair node (8D forms).
    pub sphere_nodes: usize,
    /// Nodes for the |w| coordinate in relative spherical coordinates.
    pub radial_u_nodes: usize,
    /// Low-discrepancy scrambling seed.
    pub seed: u64,
    /// Diagonal exclusion radius.
    pub u_floor: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::TensorGaussHermite,
            pair_nodes: 5_000_000,
            sphere_nodes: 128,
            radial_u_nodes: 32,
            seed: 0,
            u_floor: 1e-8,
        }
    }
}

impl QuadratureSpec {
    /// Coarse settings for 8D remainder/cross evaluations (relative 1e-2
    /// territory).
    pub fn coarse(&self) -> Self {
        Self {
            pair_nodes: (self.pair_nodes / 16).max(40_000),
            radial_u_nodes: (self.radial_u_nodes / 2).max(12),
            ..*self
        }
    }

    pub fn with_pair_nodes(&self, n: usize) -> Self {
        Self { pair_nodes: n, ..*self }
    }
}

/// A quadrature result with its error proxy.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    /// |full − half-node| difference, or QMC batch spread.
    pub error_estimate: f64,
    pub nodes_used: u64,
}

/// Pair-node geometry handed to integrands. `r` is the exact radial grid
/// value of |w| = |v₁ − v| (callers may key caches on it).
#[derive(Clone, Copy, Debug)]
pub struct PairGeom {
    pub v: V3,
    pub v1: V3,
    /// u = v − v₁ (= −r·ω).
    pub u: V3,
    pub r: f64,
}

/// A 6D integrand producing N values per node, with per-v cached data so the
/// outer-node fields are not recomputed across the inner (ω, r) sweep.
pub trait PairIntegrand<const N: usize>: Sync {
    type VData: Send + Sync;
    fn v_data(&self, v: &V3) -> Self::VData;
    fn eval(&self, vd: &Self::VData, geom: &PairGeom) -> [f64; N];
}

/// An 8D collision integrand: per-pair cached data plus a per-frame value.
/// `mu` = |k̂·u|/ε is passed along since every kernel factor needs it.
/// Returning `None` from `pair_data` skips the pair (zero local mass).
pub trait CollisionIntegrand<const N: usize>: Sync {
    type PairData: Send + Sync;
    fn pair_data(&self, v: &V3, v1: &V3) -> Option<Self::PairData>;
    fn eval(&self, pd: &Self::PairData, frame: &CollisionFrame, mu: f64) -> [f64; N];
}

/// Adapter: a plain closure as a single-output pair integrand (no v-cache).
pub struct FnPair<F>(pub F);

impl<F: Fn(&PairGeom) -> f64 + Sync> PairIntegrand<1> for FnPair<F> {
    type VData = ();
    fn v_data(&self, _v: &V3) -> () {}
    fn eval(&self, _vd: &(), geom: &PairGeom) -> [f64; 1] {
        [(self.0)(geom)]
    }
}

// --- grid construction ---------------------------------------------------

struct PairGrid {
    v_nodes: Vec<(V3, f64)>,
    dirs: Vec<(V3, f64)>,
    radial: Vec<(f64, f64)>, // (r, w·r²)
}

/// Outer-box half-width of the w-radius per decay class.
fn radial_extent(decay: DecayClass) -> f64 {
    match decay {
        DecayClass::Gaussian | DecayClass::GaussianPair { .. } => 12.0,
        DecayClass::Compact => 2.0,
        DecayClass::None => 12.0,
    }
}

fn build_pair_grid(
    decay: DecayClass,
    m: usize,
    n_r: usize,
    radial_split: Option<f64>,
    u_floor: f64,
) -> PairGrid {
    // v-layer: tensor of 1D rules per axis, replicated at each grid center
    // with mixture importance weights. The Gauss–Hermite rule targets the
    // unit-variance density ρ₀, so for centers {c} the exact reweighting of
    // ∫g = ∫(g/ρ)ρ with ρ = (1/K)Σ_c ρ₀(v−c) gives node weight
    // w̃ / Σ_c exp((|t|² − |v−c|²)/2), which is w̃ itself for one center.
    let (ax_nodes, ax_w): (Vec<f64>, Vec<f64>) = match decay {
        DecayClass::Compact => gauss_legendre_on(m, -1.0, 1.0),
        _ => gauss_hermite_unweighted(m),
    };
    let centers = decay.grid_centers();
    let mut v_nodes = Vec::with_capacity(centers.len() * m * m * m);
    for &c in &centers {
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let t = V3::new(ax_nodes[i], ax_nodes[j], ax_nodes[k]);
                    let wt = ax_w[i] * ax_w[j] * ax_w[k];
                    let v = c + t;
                    let w = if centers.len() == 1 {
                        wt
                    } else {
                        let t2 = t.norm_squared();
                        let denom: f64 = centers
                            .iter()
                            .map(|c2| (0.5 * (t2 - (v - c2).norm_squared())).exp())
                            .sum();
                        wt / denom
                    };
                    v_nodes.push((v, w));
                }
            }
        }
    }
    // Direction layer: GL in cos θ × periodic trapezoid in φ. For the
    // two-center class the polar axis is the center axis e₁: the w-space
    // mass of cross-center pairs concentrates in a narrow cone around ±e₁,
    // and GL nodes cluster near the poles where that feature lives.
    let polar_x = matches!(decay, DecayClass::GaussianPair { .. });
    let (cts, cw) = gauss_legendre_on(m, -1.0, 1.0);
    let (phis, pw) = circle_nodes(2 * m);
    let mut dirs = Vec::with_capacity(m * 2 * m);
    for (&ct, &w) in cts.iter().zip(&cw) {
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        for &ph in &phis {
            let d = if polar_x {
                V3::new(ct, st * ph.cos(), st * ph.sin())
            } else {
                V3::new(st * ph.cos(), st * ph.sin(), ct)
            };
            dirs.push((d, w * pw));
        }
    }
    // Radial layer, optionally split at the kernel's transition scale.
    let r_max = radial_extent(decay);
    let mut radial = Vec::with_capacity(n_r);
    let panels: Vec<(f64, f64, usize)> = match radial_split {
        Some(s) if s > 0.0 && s < r_max => {
            let n_a = (n_r + 1) / 2;
            vec![(0.0, s, n_a), (s, r_max, n_r - n_a)]
        }
        _ => vec![(0.0, r_max, n_r)],
    };
    for (a, b, n) in panels {
        if n == 0 {
            continue;
        }
        let (rs, ws) = gauss_legendre_on(n, a, b);
        for (&r, &w) in rs.iter().zip(&ws) {
            if r > u_floor {
                radial.push((r, w * r * r));
            }
        }
    }
    PairGrid { v_nodes, dirs, radial }
}

/// Per-axis node count m from the total pair budget: the tensor layout uses
/// K·m³ v-nodes × m polar × 2m azimuth × n_r radial = 2 K m⁵ n_r nodes,
/// where K is the number of grid centers.
fn axis_count(pair_nodes: usize, n_r: usize, decay: DecayClass) -> usize {
    let k = decay.grid_centers().len() as f64;
    let m = (pair_nodes as f64 / (2.0 * k * n_r as f64)).powf(0.2).round() as usize;
    m.clamp(3, 48)
}

/// The pair-node budget that yields exactly `m` Gauss–Hermite nodes per axis
/// at the given radial count — the inverse of the internal budget→order map.
/// Used by escalation loops that want to climb the m-ladder in steps of 2.
pub fn pair_nodes_for_axis(m: usize, n_r: usize, decay: DecayClass) -> usize {
    let k = decay.grid_centers().len();
    2 * k * n_r * m.pow(5)
}

/// The Gauss–Hermite axis order the given spec resolves to (exposed for
/// escalation planning; the grid builder uses the same map internally).
pub fn axis_order(spec: &QuadratureSpec, decay: DecayClass) -> usize {
    axis_count(spec.pair_nodes, spec.radial_u_nodes, decay)
}

fn check_singularity(s: u32) -> Result<()> {
    if s >= 3 {
        return Err(Error::SingularityTooStrong { order: s });
    }
    Ok(())
}

// --- 6D pair integration --------------------------------------------------

fn tensor_pair_pass<const N: usize, I: PairIntegrand<N>>(
    integrand: &I,
    grid: &PairGrid,
) -> ([f64; N], u64) {
    let partials: Vec<[f64; N]> = (0..grid.v_nodes.len())
        .into_par_iter()
        .map(|iv| {
            let (v, wv) = grid.v_nodes[iv];
            let vd = integrand.v_data(&v);
            let mut acc = [NeumaierSum::new(); N];
            for &(omega, wd) in &grid.dirs {
                for &(r, wr) in &grid.radial {
                    let v1 = v + omega * r;
                    let geom = PairGeom { v, v1, u: -omega * r, r };
                    let vals = integrand.eval(&vd, &geom);
                    let w = wv * wd * wr;
                    for c in 0..N {
                        acc[c].add(w * vals[c]);
                    }
                }
            }
            let mut out = [0.0; N];
            for c in 0..N {
                out[c] = acc[c].value();
            }
            out
        })
        .collect();
    let mut out = [0.0; N];
    for c in 0..N {
        let col: Vec<f64> = partials.iter().map(|p| p[c]).collect();
        out[c] = pairwise_sum(&col);
    }
    let nodes = (grid.v_nodes.len() * grid.dirs.len() * grid.radial.len()) as u64;
    (out, nodes)
}

/// Geometric-tail error estimate from two companion values one and two
/// refinement steps below `full`. With d₁ = |full − c₁|, d₂ = |c₁ − c₂| and
/// ratio ρ = d₂/d₁, a geometric error sequence with contraction λ ≈ ρ has
/// full-grid error d₁/(λ − 1). The ratio is trusted only when it attests
/// contraction (ρ > 1.3); otherwise 3·d₁ covers any λ ≥ 4/3.
pub fn richardson_err(full: f64, c1: f64, c2: f64) -> f64 {
    let d1 = (full - c1).abs();
    let d2 = (c1 - c2).abs();
    if d1 == 0.0 {
        return 0.0;
    }
    let rho = d2 / d1;
    if rho > 1.3 { d1 / (rho - 1.0) } else { 3.0 * d1 }
}

/// 6D pair integral with N simultaneous outputs over shared nodes.
///
/// `singularity` declares the |u|^{-s} strength of the integrand (s ≤ 2);
/// `radial_split` optionally places a panel boundary at a kernel transition
/// scale (e.g. ε·μ_support for truncated-moment integrands).
pub fn integrate_pair_multi<const N: usize, I: PairIntegrand<N>>(
    integrand: &I,
    singularity: u32,
    decay: DecayClass,
    spec: &QuadratureSpec,
    radial_split: Option<f64>,
) -> Result<[IntegralEstimate; N]> {
    check_singularity(singularity)?;
    if spec.scheme == Scheme::QmcSobolLike {
        return qmc_pair_multi(integrand, decay, spec);
    }
    let m = axis_count(spec.pair_nodes, spec.radial_u_nodes, decay);
    let grid = build_pair_grid(decay, m, spec.radial_u_nodes, radial_split, spec.u_floor);
    let (full, nodes) = tensor_pair_pass(integrand, &grid);
    // Same m-only two-companion error model as the 8D integrator; see
    // `integrate_collision_multi` for the rationale.
    let companion = |step: usize| {
        let mc = m.saturating_sub(2 * step).max(3);
        let grid_c = build_pair_grid(decay, mc, spec.radial_u_nodes, radial_split, spec.u_floor);
        tensor_pair_pass(integrand, &grid_c)
    };
    let (c1, nodes_1) = companion(1);
    let (c2, nodes_2) = companion(2);
    let mut out = [IntegralEstimate::default(); N];
    for c in 0..N {
        out[c] = IntegralEstimate {
            value: full[c],
            error_estimate: richardson_err(full[c], c1[c], c2[c]),
            nodes_used: nodes + nodes_1 + nodes_2,
        };
    }
    Ok(out)
}

/// Single-output wrapper over [`integrate_pair_multi`].
pub fn integrate_pair<F: Fn(&PairGeom) -> f64 + Sync>(
    integrand: F,
    singularity: u32,
    decay: DecayClass,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    Ok(integrate_pair_multi(&FnPair(integrand), singularity, decay, spec, None)?[0])
}

/// Escalating variant: doubles the pair budget up to 3 times until every
/// component's error estimate is below rel_tol × the integrand's scale,
/// where the scale is the larger of `scale_hint` and the largest component
/// magnitude. Components are measured against the shared scale, not their
/// own magnitude: small components of a multi-output integrand (e.g. the gap
/// of two near-cancelling terms) carry the same absolute quadrature noise as
/// the dominant ones, so a per-component relative test would either never
/// terminate or demand spurious precision.
pub fn integrate_pair_multi_tol<const N: usize, I: PairIntegrand<N>>(
    integrand: &I,
    singularity: u32,
    decay: DecayClass,
    spec: &QuadratureSpec,
    radial_split: Option<f64>,
    rel_tol: f64,
    scale_hint: f64,
) -> Result<[IntegralEstimate; N]> {
    let mut s = *spec;
    let mut last = integrate_pair_multi(integrand, singularity, decay, &s, radial_split)?;
    for _ in 0..3 {
        let scale = last
            .iter()
            .map(|e| e.value.abs())
            .fold(scale_hint, f64::max);
        let ok = last.iter().all(|e| e.error_estimate <= rel_tol * scale);
        if ok {
            return Ok(last);
        }
        s.pair_nodes *= 2;
        last = integrate_pair_multi(integrand, singularity, decay, &s, radial_split)?;
    }
    Ok(last)
}

// --- QMC pair integration -------------------------------------------------

fn qmc_pair_multi<const N: usize, I: PairIntegrand<N>>(
    integrand: &I,
    decay: DecayClass,
    spec: &QuadratureSpec,
) -> Result<[IntegralEstimate; N]> {
    let l: f64 = match decay {
        DecayClass::Compact => 1.0,
        _ => 6.5,
    };
    let r_max = radial_extent(decay);
    let n = spec.pair_nodes.max(1024) as u64;
    let vol = (2.0 * l).powi(3) * r_max * 2.0 * 2.0 * std::f64::consts::PI;
    const BATCHES: usize = 8;
    let chunk = 4096u64;
    let n_chunks = (n + chunk - 1) / chunk;
    let partials: Vec<([f64; N], [[f64; N]; BATCHES])> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let mut acc = [NeumaierSum::new(); N];
            let mut batch = [[0.0f64; N]; BATCHES];
            let start = ci * chunk;
            let end = (start + chunk).min(n);
            for idx in start..end {
                // Stateless access to point #idx keeps chunks independent.
                let p = Halton6::point_at(spec.seed, idx);
                let v = V3::new(
                    l * (2.0 * p[0] - 1.0),
                    l * (2.0 * p[1] - 1.0),
                    l * (2.0 * p[2] - 1.0),
                );
                let r = r_max * p[3];
                if r <= spec.u_floor {
                    continue;
                }
                let ct = 2.0 * p[4] - 1.0;
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                let ph = 2.0 * std::f64::consts::PI * p[5];
                let omega = V3::new(st * ph.cos(), st * ph.sin(), ct);
                let vd = integrand.v_data(&v);
                let geom = PairGeom { v, v1: v + omega * r, u: -omega * r, r };
                let vals = integrand.eval(&vd, &geom);
                let b = (idx % BATCHES as u64) as usize;
                for c in 0..N {
                    let contrib = vals[c] * r * r;
                    acc[c].add(contrib);
                    batch[b][c] += contrib;
                }
            }
            let mut out = [0.0; N];
            for c in 0..N {
                out[c] = acc[c].value();
            }
            (out, batch)
        })
        .collect();
    let mut out = [IntegralEstimate::default(); N];
    for c in 0..N {
        let col: Vec<f64> = partials.iter().map(|p| p.0[c]).collect();
        let total = pairwise_sum(&col) * vol / n as f64;
        // Batch spread: each batch estimates the integral from n/8 points.
        let mut bmeans = [0.0f64; BATCHES];
        for b in 0..BATCHES {
            let bcol: Vec<f64> = partials.iter().map(|p| p.1[b][c]).collect();
            bmeans[b] = pairwise_sum(&bcol) * vol / (n as f64 / BATCHES as f64);
        }
        let hi = bmeans.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = bmeans.iter().copied().fold(f64::INFINITY, f64::min);
        out[c] = IntegralEstimate {
            value: total,
            error_estimate: 0.5 * (hi - lo) / (BATCHES as f64).sqrt(),
            nodes_used: n,
        };
    }
    Ok(out)
}

// --- 8D collision integration ---------------------------------------------

/// Sphere-layer settings: collision kernels concentrate at |k̂·u| ≲ ε·μ_cut,
/// so the λ-grid is placed through the substitution λ = εμ/r with μ-nodes on
/// [0, min(r/ε, μ_cut)].
#[derive(Clone, Copy, Debug)]
pub struct SphereLayer {
    pub eps: f64,
    /// μ beyond which the potential kernel is negligible.
    pub mu_cut: f64,
}

fn sphere_counts(sphere_nodes: usize) -> (usize, usize) {
    let n_mu = ((sphere_nodes as f64 / 2.0).sqrt().round() as usize).max(3);
    (n_mu, 2 * n_mu)
}

fn tensor_collision_pass<const N: usize, I: CollisionIntegrand<N>>(
    integrand: &I,
    grid: &PairGrid,
    layer: &SphereLayer,
    n_mu: usize,
    n_phi: usize,
) -> ([f64; N], u64) {
    let (phis, pw) = circle_nodes(n_phi);
    let partials: Vec<[f64; N]> = (0..grid.v_nodes.len())
        .into_par_iter()
        .map(|iv| {
            let (v, wv) = grid.v_nodes[iv];
            let mut acc = [NeumaierSum::new(); N];
            for &(omega, wd) in &grid.dirs {
                // û = −ω; an orthonormal frame for ω serves û as well.
                let (e1, e2) = orthonormal_frame(&omega);
                let u_hat = -omega;
                for &(r, wr) in &grid.radial {
                    let v1 = v + omega * r;
                    let Some(pd) = integrand.pair_data(&v, &v1) else {
                        continue;
                    };
                    let mu_max = (r / layer.eps).min(layer.mu_cut);
                    let (mus, mws) = gauss_legendre_on(n_mu, 0.0, mu_max);
                    let jac = layer.eps / r; // dλ = (ε/r) dμ
                    for (&mu, &wmu) in mus.iter().zip(&mws) {
                        let lambda = (layer.eps * mu / r).min(1.0);
                        let s = (1.0 - lambda * lambda).max(0.0).sqrt();
                        for &ph in &phis {
                            let xi = e1 * ph.cos() + e2 * ph.sin();
                            let khat = xi * s - u_hat * lambda;
                            let frame = CollisionFrame {
                                v,
                                v1,
                                khat,
                                u: -omega * r,
                                u_norm: r,
                            };
                            let vals = integrand.eval(&pd, &frame, mu);
                            let w = wv * wd * wr * wmu * pw * jac;
                            for c in 0..N {
                                acc[c].add(w * vals[c]);
                            }
                        }
                    }
                }
            }
            let mut out = [0.0; N];
            for c in 0..N {
                out[c] = acc[c].value();
            }
            out
        })
        .collect();
    let mut out = [0.0; N];
    for c in 0..N {
        let col: Vec<f64> = partials.iter().map(|p| p[c]).collect();
        out[c] = pairwise_sum(&col);
    }
    let nodes =
        (grid.v_nodes.len() * grid.dirs.len() * grid.radial.len() * n_mu * n_phi) as u64;
    (out, nodes)
}

/// Values of an 8D collision integral on a three-rung Gauss–Hermite ladder
/// (orders m, m−2, m−4 with radial and sphere layers fixed), plus signed
/// inner-layer sensitivity probes taken at the cheapest rung.
///
/// Consumers that difference several collision integrals (e.g. the sweep's
/// gap) can apply the geometric tail estimate to the *differenced* quantity,
/// where correlated per-term errors cancel; per-term estimates would
/// overstate the combined error by the cancellation factor.
pub struct CollisionLadder<const N: usize> {
    /// Component values at GH orders m, m−2, m−4 (index 0 = finest).
    pub levels: [[f64; N]; 3],
    /// The GH orders of the three rungs.
    pub ms: [usize; 3],
    /// Signed change of each component when the radial layer gains 4 nodes
    /// (measured at the coarsest rung; radial error is m-independent).
    pub radial_delta: [f64; N],
    /// Signed change of each component when the sphere μ-layer gains one
    /// node (measured at the coarsest rung).
    pub mu_delta: [f64; N],
    pub nodes_used: u64,
}

impl<const N: usize> CollisionLadder<N> {
    /// Error estimate for component `c`: geometric m-tail from the ladder
    /// plus the measured inner-layer sensitivities.
    pub fn component_err(&self, c: usize) -> f64 {
        richardson_err(self.levels[0][c], self.levels[1][c], self.levels[2][c])
            + self.radial_delta[c].abs()
            + self.mu_delta[c].abs()
    }
}

/// 8D collision integral with N simultaneous outputs: pair layer as in
/// [`integrate_pair_multi`] × the S²₋ product rule oriented by û per pair.
/// Returns the full m-ladder; see [`integrate_collision_multi`] for the
/// single-estimate wrapper.
///
/// The error model uses companion grids that reduce only the outer
/// Gauss–Hermite axis count (m − 2, m − 4) while keeping the radial and
/// sphere layers at full resolution. Reducing every axis at once makes the
/// companion difference track the *companion's* dominant error instead of
/// the full grid's, overestimating by the per-step contraction ratio and
/// starving downstream noise gates; fixing the inner layers cancels their
/// shared error in the difference, so d₁ = |full − c₁| measures the pure
/// m-convergence tail. The stride is 2 because symmetric GH grids converge
/// with an even/odd parity oscillation on symmetric integrands; per-2-step
/// contraction is clean (measured ≈ ×3.7) while single steps are erratic.
/// Inner-layer (radial, sphere-μ) systematics are invisible to the m-ladder,
/// so they are probed separately at the coarsest rung, where they are the
/// same as at the finest (they do not depend on m). The probes refine
/// upward (nr+4, μ+1) rather than coarsen: for oscillatory band-limited
/// integrands the layer below the working resolution can sit on a
/// pre-asymptotic cliff whose jump wildly overstates the working grid's
/// own error, while the step up bounds it from the converged side.
///
/// `known`: optional previously computed values at orders (m−2, m−4) — e.g.
/// from an earlier ladder two orders down during budget escalation — to skip
/// recomputing those rungs. Caller must guarantee they came from identical
/// settings apart from m.
pub fn integrate_collision_ladder<const N: usize, I: CollisionIntegrand<N>>(
    integrand: &I,
    decay: DecayClass,
    spec: &QuadratureSpec,
    layer: &SphereLayer,
    radial_split: Option<f64>,
    known: Option<([[f64; N]; 2], [usize; 2])>,
) -> Result<CollisionLadder<N>> {
    let m = axis_count(spec.pair_nodes, spec.radial_u_nodes, decay);
    let (n_mu, n_phi) = sphere_counts(spec.sphere_nodes);
    let mut nodes_total = 0u64;
    let mut pass = |mc: usize, nr: usize, nmu: usize| {
        let grid_c = build_pair_grid(decay, mc, nr, radial_split, spec.u_floor);
        let (vals, nodes) = tensor_collision_pass(integrand, &grid_c, layer, nmu, n_phi);
        nodes_total += nodes;
        vals
    };
    let ms = [m, m.saturating_sub(2).max(3), m.saturating_sub(4).max(3)];
    let full = pass(ms[0], spec.radial_u_nodes, n_mu);
    let (c1, c2) = match known {
        Some((vals, kms)) if kms == [ms[1], ms[2]] => (vals[0], vals[1]),
        _ => (
            pass(ms[1], spec.radial_u_nodes, n_mu),
            pass(ms[2], spec.radial_u_nodes, n_mu),
        ),
    };
    let probe_nr = pass(ms[2], spec.radial_u_nodes + 4, n_mu);
    let probe_mu = pass(ms[2], spec.radial_u_nodes, n_mu + 1);
    let mut radial_delta = [0.0; N];
    let mut mu_delta = [0.0; N];
    for c in 0..N {
        radial_delta[c] = c2[c] - probe_nr[c];
        mu_delta[c] = c2[c] - probe_mu[c];
    }
    Ok(CollisionLadder {
        levels: [full, c1, c2],
        ms,
        radial_delta,
        mu_delta,
        nodes_used: nodes_total,
    })
}

/// Single-estimate wrapper over [`integrate_collision_ladder`].
pub fn integrate_collision_multi<const N: usize, I: CollisionIntegrand<N>>(
    integrand: &I,
    decay: DecayClass,
    spec: &QuadratureSpec,
    layer: &SphereLayer,
    radial_split: Option<f64>,
) -> Result<[IntegralEstimate; N]> {
    let ladder =
        integrate_collision_ladder(integrand, decay, spec, layer, radial_split, None)?;
    let mut out = [IntegralEstimate::default(); N];
    for c in 0..N {
        out[c] = IntegralEstimate {
            value: ladder.levels[0][c],
            error_estimate: ladder.component_err(c),
            nodes_used: ladder.nodes_used,
        };
    }
    Ok(out)
}

/// Single-output 8D form taking a plain frame closure (no pair cache).
pub fn integrate_collision_8d<F: Fn(&CollisionFrame, f64) -> f64 + Sync>(
    integrand: F,
    decay: DecayClass,
    spec: &QuadratureSpec,
    layer: &SphereLayer,
) -> Result<IntegralEstimate> {
    struct Wrap<F>(F);
    impl<F: Fn(&CollisionFrame, f64) -> f64 + Sync> CollisionIntegrand<1> for Wrap<F> {
        type PairData = ();
        fn pair_data(&self, _v: &V3, _v1: &V3) -> Option<()> {
            Some(())
        }
        fn eval(&self, _pd: &(), frame: &CollisionFrame, mu: f64) -> [f64; 1] {
            [(self.0)(frame, mu)]
        }
    }
    Ok(integrate_collision_multi(&Wrap(integrand), decay, spec, layer, None)?[0])
}
