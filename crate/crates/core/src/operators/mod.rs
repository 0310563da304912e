//! Operator-level quantities: the weak quantum Landau form and its limit
//! targets, the semi-analytic main terms of the weak quantum Boltzmann form
//! with their gaps to the targets, the raw 8D form with its four-way
//! decomposition and Taylor-expanded terms, and the scalar functionals
//! (singular pair integrals, L¹ estimate).

pub mod eight;
pub mod functionals;
pub mod semi;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The scaling parameters of the weak-coupling limit: kernel width ε, quantum
/// strength α = α(ε) with limit α₀, and statistics sign θ (+1 enhancement,
/// −1 blocking).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScalingParams {
    pub eps: f64,
    pub alpha: f64,
    pub alpha0: f64,
    pub theta: f64,
}

impl ScalingParams {
    pub fn new(eps: f64, alpha: f64, alpha0: f64, theta: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {eps}")));
        }
        if theta != 1.0 && theta != -1.0 {
            return Err(Error::Config(format!("theta must be ±1, got {theta}")));
        }
        if alpha < 0.0 || alpha0 < 0.0 {
            return Err(Error::Config("alpha and alpha0 must be nonnegative".into()));
        }
        Ok(Self { eps, alpha, alpha0, theta })
    }

    /// Classical scaling α(ε) = (2πε)³ with α₀ = 0.
    pub fn classical(eps: f64, theta: f64) -> Result<Self> {
        Self::new(eps, (2.0 * std::f64::consts::PI * eps).powi(3), 0.0, theta)
    }
}

/// Every named term value from the expansion, with its quadrature error where
/// tracked. Populated incrementally by the evaluation routines.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct TermBreakdown {
    // Binary expansion terms.
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    // Ternary expansion terms.
    pub t2p: f64,
    pub t3ap: f64,
    pub t3bp: f64,
    pub t4p: f64,
    pub t5p: f64,
    pub t6p: f64,
    // Four-way decomposition values (8D).
    pub qb_binary: f64,
    pub qb_ternary: f64,
    pub cross_binary: f64,
    pub cross_ternary: f64,
    // Limit targets and the weak Landau form.
    pub l2: f64,
    pub l3a: f64,
    pub l3b: f64,
    pub ql_weak: f64,
    // Full raw 8D form, when evaluated.
    pub qb_weak_raw: Option<f64>,
    /// Combined quadrature error proxy accumulated over the filled fields.
    pub quad_err: f64,
}
