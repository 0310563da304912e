//! Collision geometry and the exactly-solvable angular integrals: the
//! post-collisional map, the Landau kernel K(z), half-sphere moments of
//! b_a(|k̂·u|/ε) in closed form, the cross-coefficient angular integral, the
//! circle projection identity, and the delta-reduction identity together with
//! its independent surface-integral verification.

use crate::error::{Error, Result};
use crate::potentials::RadialPotential;
use crate::quadrature::rules::{adaptive_gk, circle_nodes, gauss_legendre_on};
use nalgebra::{Matrix3, Vector3};

type V3 = Vector3<f64>;
type M3 = Matrix3<f64>;

/// Frames with |u| below this are never constructed; the relative spherical
/// measure vanishes there anyway.
pub const U_FLOOR: f64 = 1e-8;

/// One collision configuration: a velocity pair and a unit vector on the
/// half-sphere S²₋(u) = {k̂ : k̂·u ≤ 0}.
#[derive(Clone, Copy, Debug)]
pub struct CollisionFrame {
    pub v: V3,
    pub v1: V3,
    pub khat: V3,
    /// Cached u = v - v1.
    pub u: V3,
    pub u_norm: f64,
}

impl CollisionFrame {
    pub fn new(v: V3, v1: V3, khat: V3) -> Self {
        let u = v - v1;
        let u_norm = u.norm();
        debug_assert!(u_norm > U_FLOOR, "diagonal frame");
        debug_assert!((khat.norm() - 1.0).abs() < 1e-12);
        debug_assert!(khat.dot(&u) < 1e-12 * u_norm);
        Self { v, v1, khat, u, u_norm }
    }

    /// k̂·u (≤ 0 on S²₋).
    #[inline]
    pub fn k_dot_u(&self) -> f64 {
        self.khat.dot(&self.u)
    }
}

/// Post-collisional velocities v′ = v − (k̂·u)k̂, v₁′ = v₁ + (k̂·u)k̂.
///
/// The same exchange vector (k̂·u)k̂ is subtracted from one side and added
/// to the other, so momentum and energy are conserved to rounding.
#[inline]
pub fn post_collision(frame: &CollisionFrame) -> (V3, V3) {
    let t = frame.khat * frame.k_dot_u();
    (frame.v - t, frame.v1 + t)
}

/// Landau kernel K(z) = |z|^{-1}(I − ẑ⊗ẑ).
pub fn landau_kernel(z: &V3) -> Result<M3> {
    let n = z.norm();
    if n < 1e-300 {
        return Err(Error::ZeroRelativeVelocity { norm: n });
    }
    let zh = z / n;
    Ok((M3::identity() - zh * zh.transpose()) / n)
}

/// An orthonormal pair (e₁, e₂) completing û to a right-handed frame,
/// chosen deterministically from the smallest component of û.
pub fn orthonormal_frame(u_hat: &V3) -> (V3, V3) {
    let a = u_hat.x.abs();
    let b = u_hat.y.abs();
    let c = u_hat.z.abs();
    let helper = if a <= b && a <= c {
        V3::x()
    } else if b <= c {
        V3::y()
    } else {
        V3::z()
    };
    let e1 = u_hat.cross(&helper).normalize();
    let e2 = u_hat.cross(&e1);
    (e1, e2)
}

/// Half-sphere point from the proof's parametrization
/// k̂ = √(1−λ²)ξ(φ) − λû with λ = −k̂·û ∈ (0, 1].
#[inline]
pub fn halfsphere_point(u_hat: &V3, e1: &V3, e2: &V3, lambda: f64, phi: f64) -> V3 {
    let s = (1.0 - lambda * lambda).max(0.0).sqrt();
    let xi = e1 * phi.cos() + e2 * phi.sin();
    xi * s - u_hat * lambda
}

/// ∫_{S²₋} b_a(|k̂·u|/ε) k̂ dk̂ in closed form:
/// −16π²ε² B_{a+1,ε}(u) u/|u|³.
pub fn angular_moment_vector(
    pot: &RadialPotential,
    a: f64,
    u: &V3,
    eps: f64,
) -> Result<V3> {
    let r = u.norm();
    let b = pot.truncated_moment(a + 1.0, r, eps)?;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    Ok(-u * (16.0 * pi2 * eps * eps * b / (r * r * r)))
}

/// ∫_{S²₋} b_a(|k̂·u|/ε) k̂⊗k̂ dk̂ split as main + remainder:
///
/// main = 8π²ε B_{a,ε}(u) K(u);
/// remainder = −π ∫₀¹ b_a(λ|u|/ε) λ² dλ · (I − 3û⊗û)
///           = −8π²ε³ B_{a+2,ε}(u)/|u|³ · (I − 3û⊗û),
///
/// where the second equality is the λ = εμ/|u| substitution. The remainder is
/// traceless and obeys ‖R_ε‖ ≲ M_{a+η} ε^η/|u|^{1+η} for η < 2.
pub fn angular_moment_matrix(
    pot: &RadialPotential,
    a: f64,
    u: &V3,
    eps: f64,
) -> Result<(M3, M3)> {
    let r = u.norm();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let main = landau_kernel(u)? * (8.0 * pi2 * eps * pot.truncated_moment(a, r, eps)?);
    let uh = u / r;
    let b2 = pot.truncated_moment(a + 2.0, r, eps)?;
    let remainder = (M3::identity() - uh * uh.transpose() * 3.0)
        * (-8.0 * pi2 * eps.powi(3) * b2 / (r * r * r));
    Ok((main, remainder))
}

/// ∫_{S²₋} b_a(|k̂·u|/ε) dk̂ via the exact reduction (2πε/|u|)·8π·B_{a,ε}(u).
pub fn angular_scalar_integral(
    pot: &RadialPotential,
    a: f64,
    u: &V3,
    eps: f64,
) -> Result<f64> {
    assert!(a >= 1.0);
    let r = u.norm();
    let b = pot.truncated_moment(a, r, eps)?;
    Ok((2.0 * std::f64::consts::PI * eps / r) * 8.0 * std::f64::consts::PI * b)
}

/// Cross-coefficient angular integral
/// 2π ∫₀¹ (γλ)^a V̂(γλ) V̂(γ√(1−λ²)) dλ with γ = |u|/ε.
pub fn cross_angular_integral(
    pot: &RadialPotential,
    a: f64,
    u_norm: f64,
    eps: f64,
) -> Result<f64> {
    assert!(a >= 1.0 && u_norm > 0.0 && eps > 0.0);
    let gamma = u_norm / eps;
    let (val, _) = adaptive_gk(
        |lam| pot.cross_coefficient(a, gamma, lam.clamp(0.0, 1.0)),
        0.0,
        1.0,
        1e-10,
        1e-14,
    )?;
    Ok(2.0 * std::f64::consts::PI * val)
}

/// Brute-force quadrature over S²₋(u): Gauss–Legendre in the polar angle
/// θ ∈ [π/2, π] (measured from û) times the periodic trapezoid rule in the
/// azimuth. Serves as the oracle for all closed-form angular integrals.
pub fn halfsphere_brute_force<F: Fn(&V3) -> f64>(
    u: &V3,
    n_polar: usize,
    n_azimuth: usize,
    f: F,
) -> f64 {
    let u_hat = u / u.norm();
    let (e1, e2) = orthonormal_frame(&u_hat);
    let (thetas, tw) = gauss_legendre_on(n_polar, 0.5 * std::f64::consts::PI, std::f64::consts::PI);
    let (phis, pw) = circle_nodes(n_azimuth);
    let mut acc = crate::quadrature::sum::NeumaierSum::new();
    for (&th, &wt) in thetas.iter().zip(&tw) {
        let (st, ct) = th.sin_cos();
        for &ph in &phis {
            let k = e1 * (st * ph.cos()) + e2 * (st * ph.sin()) + u_hat * ct;
            acc.add(wt * pw * st * f(&k));
        }
    }
    acc.value()
}

/// Brute-force quadrature over S²₋(u) in the (λ, φ) chart, λ = −k̂·û, with a
/// Gauss–Legendre panel boundary at `lambda_split`: resolves kernels that
/// concentrate at λ ≲ ε·μ_support/|u| without any closed-form input. The
/// surface measure in this chart is exactly dλ dφ.
pub fn halfsphere_brute_force_split<F: Fn(&V3) -> f64>(
    u: &V3,
    n_polar: usize,
    n_azimuth: usize,
    lambda_split: f64,
    f: F,
) -> f64 {
    let u_hat = u / u.norm();
    let (e1, e2) = orthonormal_frame(&u_hat);
    let (phis, pw) = circle_nodes(n_azimuth);
    let s = lambda_split.clamp(0.0, 1.0);
    let mut lambdas = Vec::with_capacity(2 * n_polar);
    let mut lw = Vec::with_capacity(2 * n_polar);
    for (a, b) in [(0.0, s), (s, 1.0)] {
        if b > a {
            let (ls, ws) = gauss_legendre_on(n_polar, a, b);
            lambdas.extend(ls);
            lw.extend(ws);
        }
    }
    let mut acc = crate::quadrature::sum::NeumaierSum::new();
    for (&lam, &wl) in lambdas.iter().zip(&lw) {
        for &ph in &phis {
            let k = halfsphere_point(&u_hat, &e1, &e2, lam, ph);
            acc.add(wl * pw * f(&k));
        }
    }
    acc.value()
}

/// Right-hand side of the delta-reduction identity:
/// ε^{1−d} ∫_{S^{d−1}₋} |k̂·u|^{d−2} g(−(k̂·u)k̂/ε) dk̂, for d ∈ {2, 3}.
pub fn delta_reduce<F: Fn(&V3) -> f64>(g: F, u: &V3, eps: f64, d: usize) -> f64 {
    match d {
        3 => {
            halfsphere_brute_force(u, 200, 200, |k| {
                let kdu = k.dot(u);
                kdu.abs() * g(&(-k * (kdu / eps)))
            }) / (eps * eps)
        }
        2 => {
            // S¹₋ in the plane spanned by (û, e⊥): angles with k̂·û ≤ 0.
            let u_hat = u / u.norm();
            let (e1, _) = orthonormal_frame(&u_hat);
            let (thetas, tw) =
                gauss_legendre_on(400, 0.5 * std::f64::consts::PI, 1.5 * std::f64::consts::PI);
            let mut acc = crate::quadrature::sum::NeumaierSum::new();
            for (&th, &w) in thetas.iter().zip(&tw) {
                let k = u_hat * th.cos() + e1 * th.sin();
                let kdu = k.dot(u);
                acc.add(w * g(&(-k * (kdu / eps))));
            }
            acc.value() / eps
        }
        _ => panic!("delta_reduce supports d = 2 or 3"),
    }
}

/// Left-hand side companion for the delta identity:
/// (1/|u|) ∫ over the sphere S^{d−1}(−u/2ε, |u|/2ε) of g, by surface
/// quadrature. Both sides must agree.
pub fn delta_reduce_lhs<F: Fn(&V3) -> f64>(g: F, u: &V3, eps: f64, d: usize) -> f64 {
    let r = u.norm();
    let center = -u / (2.0 * eps);
    let rho = r / (2.0 * eps);
    match d {
        3 => {
            // Full-sphere product rule: GL in cos θ x trapezoid in φ.
            let (cts, cw) = gauss_legendre_on(200, -1.0, 1.0);
            let (phis, pw) = circle_nodes(200);
            let mut acc = crate::quadrature::sum::NeumaierSum::new();
            for (&ct, &w) in cts.iter().zip(&cw) {
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for &ph in &phis {
                    let p = center
                        + V3::new(st * ph.cos(), st * ph.sin(), ct) * rho;
                    acc.add(w * pw * g(&p));
                }
            }
            acc.value() * rho * rho / r
        }
        2 => {
            let (phis, pw) = circle_nodes(2000);
            let mut acc = crate::quadrature::sum::NeumaierSum::new();
            for &ph in &phis {
                let p = center + V3::new(ph.cos(), ph.sin(), 0.0) * rho;
                acc.add(pw * g(&p));
            }
            acc.value() * rho / r
        }
        _ => panic!("delta_reduce_lhs supports d = 2 or 3"),
    }
}

/// Projection identity ∫_{S¹(û)} ξ⊗ξ dξ = π(I − û⊗û): returns the analytic
/// matrix and the trapezoid-rule quadrature at `nodes` circle nodes.
pub fn projection_identity_check(u_hat: &V3, nodes: usize) -> (M3, M3) {
    let analytic = (M3::identity() - u_hat * u_hat.transpose()) * std::f64::consts::PI;
    let (e1, e2) = orthonormal_frame(u_hat);
    let (phis, w) = circle_nodes(nodes);
    let mut quad = M3::zeros();
    for &ph in &phis {
        let xi = e1 * ph.cos() + e2 * ph.sin();
        quad += xi * xi.transpose() * w;
    }
    (analytic, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rand_unit(rng: &mut ChaCha8Rng) -> V3 {
        loop {
            let v = V3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = v.norm();
            if n > 1e-3 && n <= 1.0 {
                return v / n;
            }
        }
    }

    fn random_frame(rng: &mut ChaCha8Rng) -> CollisionFrame {
        loop {
            let v = V3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let v1 = V3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let u = v - v1;
            if u.norm() < 1e-3 {
                continue;
            }
            let mut k = rand_unit(rng);
            if k.dot(&u) > 0.0 {
                k = -k;
            }
            return CollisionFrame::new(v, v1, k);
        }
    }

    #[test]
    fn post_collision_momentum_exact_energy_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let fr = random_frame(&mut rng);
            let (vp, v1p) = post_collision(&fr);
            let p_scale = fr.v.norm() + fr.v1.norm() + 2.0 * fr.k_dot_u().abs();
            assert!(((vp + v1p) - (fr.v + fr.v1)).norm() <= 1e-15 * p_scale.max(1.0));
            let e0 = fr.v.norm_squared() + fr.v1.norm_squared();
            let e1 = vp.norm_squared() + v1p.norm_squared();
            assert!((e1 - e0).abs() <= 1e-12 * e0.max(1.0));
        }
    }

    #[test]
    fn post_collision_examples() {
        // k̂ ⊥ u leaves the pair unchanged.
        let fr = CollisionFrame::new(V3::x(), -V3::x(), V3::y());
        let (vp, v1p) = post_collision(&fr);
        assert_eq!(vp, V3::x());
        assert_eq!(v1p, -V3::x());
        // Head-on exchange.
        let fr = CollisionFrame::new(V3::x(), -V3::x(), -V3::x());
        let (vp, v1p) = post_collision(&fr);
        assert_relative_eq!(vp.x, -1.0, epsilon = 1e-15);
        assert_relative_eq!(v1p.x, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn landau_kernel_structure() {
        let k = landau_kernel(&V3::z()).unwrap();
        assert_relative_eq!(k[(0, 0)], 1.0, epsilon = 1e-15);
        assert_relative_eq!(k[(1, 1)], 1.0, epsilon = 1e-15);
        assert!(k[(2, 2)].abs() < 1e-15);
        let k2 = landau_kernel(&(2.0 * V3::x())).unwrap();
        assert!(k2[(0, 0)].abs() < 1e-15);
        assert_relative_eq!(k2[(1, 1)], 0.5, epsilon = 1e-15);
        // Random z: eigenvalues {0, 1/|z|, 1/|z|}; also K z = 0, tr = 2/|z|.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let z = V3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0));
            let k = landau_kernel(&z).unwrap();
            assert!((k * z).norm() < 1e-14);
            assert_relative_eq!(k.trace(), 2.0 / z.norm(), epsilon = 1e-13);
            let eig = k.symmetric_eigenvalues();
            let mut ev: Vec<f64> = eig.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            assert!(ev[0].abs() < 1e-13);
            assert_relative_eq!(ev[1], 1.0 / z.norm(), epsilon = 1e-12);
            assert_relative_eq!(ev[2], 1.0 / z.norm(), epsilon = 1e-12);
        }
        assert!(landau_kernel(&V3::zeros()).is_err());
    }

    #[test]
    fn angular_closed_forms_match_brute_force() {
        // Oracle equivalence over random (u, ε, a) for Gaussian and
        // indicator potentials, relative 1e-7 at a 200x200 product rule.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let pots = [RadialPotential::gaussian(), RadialPotential::indicator(1.0)];
        for trial in 0..25 {
            let pot = pots[trial % 2];
            let dir = rand_unit(&mut rng);
            let u = dir * rng.gen_range(0.2..5.0);
            let eps = rng.gen_range(0.02..0.5);
            let a = [2.0, 3.0, 4.0][trial % 3];
            // b_a concentrates at λ ≲ ε·μ_support/|u|; split the polar grid
            // there so 200-node panels resolve it at any ε.
            let split = (eps * pot.effective_support(1e-16) / u.norm()).min(1.0);

            // (a) vector moment.
            let closed = angular_moment_vector(&pot, a, &u, eps).unwrap();
            for axis in 0..3 {
                let brute = halfsphere_brute_force_split(&u, 200, 200, split, |k| {
                    pot.b_coefficient(a, k.dot(&u).abs() / eps) * k[axis]
                });
                assert!(
                    (closed[axis] - brute).abs() <= 1e-7 * closed.norm().max(1e-12),
                    "vector trial {trial}: {} vs {brute}",
                    closed[axis]
                );
            }

            // (b) matrix moment, main + remainder.
            let (main, rem) = angular_moment_matrix(&pot, a, &u, eps).unwrap();
            let total = main + rem;
            assert!(rem.trace().abs() < 1e-12 * main.norm().max(1e-12));
            let mut brute_m = M3::zeros();
            for i in 0..3 {
                for j in 0..3 {
                    brute_m[(i, j)] = halfsphere_brute_force_split(&u, 200, 200, split, |k| {
                        pot.b_coefficient(a, k.dot(&u).abs() / eps) * k[i] * k[j]
                    });
                }
            }
            assert!(
                (total - brute_m).norm() <= 1e-7 * total.norm().max(1e-12),
                "matrix trial {trial}"
            );

            // (c) scalar integral.
            let closed_s = angular_scalar_integral(&pot, a, &u, eps).unwrap();
            let brute_s = halfsphere_brute_force_split(&u, 200, 200, split, |k| {
                pot.b_coefficient(a, k.dot(&u).abs() / eps)
            });
            assert!(
                (closed_s - brute_s).abs() <= 1e-7 * closed_s.abs().max(1e-12),
                "scalar trial {trial}: {closed_s} vs {brute_s}"
            );
        }
    }

    #[test]
    fn angular_moment_vector_indicator_example() {
        // Indicator with |u|/ε ≥ 1: −(π/2)ε²u/|u|³.
        let pot = RadialPotential::indicator(1.0);
        let u = V3::new(0.0, 2.0, 0.0);
        let eps = 0.5;
        let got = angular_moment_vector(&pot, 2.0, &u, eps).unwrap();
        let expect = -u * (0.5 * PI * eps * eps / u.norm().powi(3));
        assert_relative_eq!(got.y, expect.y, epsilon = 1e-12);
    }

    #[test]
    fn angular_scalar_indicator_example() {
        // a=1, |u|/ε = 1: value π·(something)… direct: (2πε/|u|)∫₀¹ μ dμ = π.
        let pot = RadialPotential::indicator(1.0);
        let u = V3::new(1.0, 0.0, 0.0);
        let got = angular_scalar_integral(&pot, 1.0, &u, 1.0).unwrap();
        assert_relative_eq!(got, PI, epsilon = 1e-10);
    }

    #[test]
    fn zero_potential_angular_forms_vanish() {
        let z = RadialPotential::zero();
        let u = V3::new(0.3, 0.2, -1.0);
        assert_eq!(angular_moment_vector(&z, 2.0, &u, 0.1).unwrap(), V3::zeros());
        let (m, r) = angular_moment_matrix(&z, 3.0, &u, 0.1).unwrap();
        assert_eq!(m, M3::zeros());
        assert_eq!(r, M3::zeros());
        assert_eq!(angular_scalar_integral(&z, 2.0, &u, 0.1).unwrap(), 0.0);
        assert_eq!(cross_angular_integral(&z, 2.0, 1.0, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn rotation_equivariance() {
        let pot = RadialPotential::gaussian();
        let u = V3::new(1.0, -0.5, 0.3);
        let eps = 0.2;
        // Rotation by 90° about z.
        let rot = M3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        let (main_u, _) = angular_moment_matrix(&pot, 3.0, &u, eps).unwrap();
        let (main_ru, _) = angular_moment_matrix(&pot, 3.0, &(rot * u), eps).unwrap();
        assert!((main_ru - rot * main_u * rot.transpose()).norm() < 1e-12);
        let vec_u = angular_moment_vector(&pot, 2.0, &u, eps).unwrap();
        let vec_ru = angular_moment_vector(&pot, 2.0, &(rot * u), eps).unwrap();
        assert!((vec_ru - rot * vec_u).norm() < 1e-12);
    }

    #[test]
    fn cross_angular_integral_examples() {
        // Gaussian, γ=1, a=2: exponentials combine to e^{-1/2}; value 2πe^{-1/2}/3.
        let pot = RadialPotential::gaussian();
        let got = cross_angular_integral(&pot, 2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(got, 2.0 * PI * (-0.5_f64).exp() / 3.0, epsilon = 1e-9);
        // Indicator with γ=2: supports never overlap.
        let ind = RadialPotential::indicator(1.0);
        assert_eq!(cross_angular_integral(&ind, 2.0, 2.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn cross_angular_matches_halfsphere_oracle() {
        // The λ-reduction times 2π must equal the genuine S²₋ integral of
        // b^cr_a(|u|/ε, |k̂·û|).
        let pot = RadialPotential::gaussian();
        let u = V3::new(0.4, 1.1, -0.2);
        let eps = 0.7;
        let gamma = u.norm() / eps;
        let reduced = cross_angular_integral(&pot, 2.0, u.norm(), eps).unwrap();
        let uh = u / u.norm();
        let brute = halfsphere_brute_force(&u, 200, 200, |k| {
            pot.cross_coefficient(2.0, gamma, k.dot(&uh).abs().min(1.0))
        });
        assert_relative_eq!(reduced, brute, max_relative = 1e-7);
    }

    #[test]
    fn delta_identity_constant_case() {
        // g ≡ 1, d = 3: both sides π|u|/ε², to 1e-10.
        let u = V3::new(0.3, -0.7, 1.1);
        let eps = 0.25;
        let expect = PI * u.norm() / (eps * eps);
        assert_relative_eq!(delta_reduce(|_| 1.0, &u, eps, 3), expect, max_relative = 1e-10);
        assert_relative_eq!(delta_reduce_lhs(|_| 1.0, &u, eps, 3), expect, max_relative = 1e-10);
        assert_eq!(delta_reduce(|_| 0.0, &u, eps, 3), 0.0);
    }

    #[test]
    fn delta_identity_two_sided_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [3usize, 2] {
            for i in 0..10 {
                let dir = rand_unit(&mut rng);
                let dir = if d == 2 {
                    // Keep u in the plane z = 0 so the circle geometry is 2D.
                    let mut w = V3::new(dir.x, dir.y, 0.0);
                    if w.norm() < 1e-3 {
                        w = V3::x();
                    }
                    w.normalize()
                } else {
                    dir
                };
                let u = dir * rng.gen_range(0.3..2.0);
                let eps = rng.gen_range(0.2..0.8);
                let c = rng.gen_range(0.2..1.5);
                let g = move |k: &V3| (-c * k.norm_squared()).exp() * (1.0 + 0.3 * k.x);
                let rhs = delta_reduce(g, &u, eps, d);
                let lhs = delta_reduce_lhs(g, &u, eps, d);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-7, epsilon = 1e-12);
                let _ = i;
            }
        }
    }

    #[test]
    fn projection_identity() {
        let (a, q) = projection_identity_check(&V3::z(), 256);
        assert_relative_eq!(a[(0, 0)], PI, epsilon = 1e-15);
        assert!(a[(2, 2)].abs() < 1e-15);
        assert!((a - q).abs().max() < 1e-12);
        let (a1, q1) = projection_identity_check(&V3::x(), 256);
        assert!((a1 - q1).abs().max() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let uh = rand_unit(&mut rng);
            let (aa, qq) = projection_identity_check(&uh, 256);
            assert!((aa - qq).abs().max() < 1e-12);
        }
    }

    #[test]
    fn remainder_envelope_eta_family() {
        // ‖R_ε‖_F ≤ C·M_{a+η} ε^η/|u|^{1+η} for η ∈ {0.25, 0.5, 0.75, 1.0, 1.5};
        // structural check with a fixed generous constant (the calibrated
        // constant lives in the harness; here we verify the scaling shape).
        let pot = RadialPotential::gaussian();
        let a = 3.0;
        for eta in [0.25, 0.5, 0.75, 1.0, 1.5] {
            let m = pot.moment(a + eta).unwrap();
            for &(un, eps) in &[(0.5, 0.4), (1.0, 0.2), (2.0, 0.1), (3.0, 0.05)] {
                let u = V3::new(0.0, 0.0, un);
                let (_, rem) = angular_moment_matrix(&pot, a, &u, eps).unwrap();
                let envelope = m * eps.powf(eta) / un.powf(1.0 + eta);
                // The Frobenius norm of the remainder, sans the 8π²ε scale.
                let r_norm = rem.norm() / (8.0 * PI * PI * eps);
                assert!(
                    r_norm <= 2.0 * envelope,
                    "eta {eta} u {un} eps {eps}: {r_norm} vs {envelope}"
                );
            }
        }
    }
}
