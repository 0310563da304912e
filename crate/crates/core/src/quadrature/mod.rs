//! Quadrature: 1D rules, compensated summation, low-discrepancy points, and
//! the 6D/8D integration engines.

pub mod engine;
pub mod qmc;
pub mod rules;
pub mod sum;

pub use engine::{
    axis_order, integrate_collision_8d, integrate_collision_ladder, integrate_collision_multi,
    pair_nodes_for_axis, richardson_err,
    integrate_pair, integrate_pair_multi, integrate_pair_multi_tol, CollisionIntegrand,
    CollisionLadder, FnPair, IntegralEstimate, PairGeom, PairIntegrand, QuadratureSpec, Scheme,
    SphereLayer,
};
pub use qmc::Halton6;
pub use rules::{
    adaptive_gk, adaptive_gk_to_inf, circle_nodes, gauss_hermite, gauss_hermite_unweighted,
    gauss_legendre, gauss_legendre_on,
};
pub use sum::{pairwise_sum, NeumaierSum};
