//! One-dimensional quadrature rules: Gauss–Legendre and Gauss–Hermite node
//! generation, and an adaptive Gauss–Kronrod (G7/K15) integrator used for all
//! smooth 1D integrals (potential moments, truncated moments, λ-integrals).

use crate::error::{Error, Result};
use crate::quadrature::sum::NeumaierSum;

/// Gauss–Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; accurate to machine precision
/// for the node counts used here (n ≤ a few hundred).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi-style initial guess for the i-th positive root.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(z) and its derivative by upward recurrence.
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre nodes and weights mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|&t| mid + c * t).collect(),
        w.iter().map(|&wi| wi * c).collect(),
    )
}

/// Gauss–Hermite nodes and weights for the weight function e^{-x²} (physicists'
/// convention). Returned weights are the bare w_i with Σ w_i = √π.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let m = (n + 1) / 2;
    let nf = n as f64;
    let mut z = 0.0;
    let mut z_prev = 0.0;
    let mut z_prev2 = 0.0;
    for i in 0..m {
        // Standard initial guesses for the largest roots, then extrapolation.
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * z_prev2,
            3 => 1.91 * z - 0.91 * z_prev2,
            _ => 2.0 * z - z_prev2,
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            // Orthonormal Hermite recurrence.
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[n - 1 - i] = z;
        x[i] = -z;
        let wi = 2.0 / (pp * pp);
        w[n - 1 - i] = wi;
        w[i] = wi;
        z_prev2 = z_prev;
        z_prev = z;
        let _ = z_prev2;
    }
    (x, w)
}

/// Gauss–Hermite rule adapted to plain integrals ∫ g(t) dt of functions with
/// Gaussian-type decay e^{-t²/2}: nodes t_i = √2·x_i and weights
/// W_i = √2·w_i·e^{x_i²}, so Σ W_i g(t_i) ≈ ∫ g.
pub fn gauss_hermite_unweighted(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_hermite(n);
    let s = std::f64::consts::SQRT_2;
    let nodes: Vec<f64> = x.iter().map(|&xi| s * xi).collect();
    let weights: Vec<f64> = x
        .iter()
        .zip(&w)
        .map(|(&xi, &wi)| s * wi * (xi * xi).exp())
        .collect();
    (nodes, weights)
}

/// Midpoint (periodic trapezoid) rule on the circle [0, 2π): spectrally
/// accurate for smooth periodic integrands.
pub fn circle_nodes(n: usize) -> (Vec<f64>, f64) {
    let w = 2.0 * std::f64::consts::PI / n as f64;
    let nodes = (0..n)
        .map(|j| (j as f64 + 0.5) * w)
        .collect();
    (nodes, w)
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights; the standard G7/K15 pair.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 panel on [a, b]; returns (K15 value, |K15 - G7| error proxy).
fn gk15_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let fsum = f(c - x) + f(c + x);
        resk += WGK[j] * fsum;
        if j % 2 == 1 {
            // Odd Kronrod indices are the embedded Gauss abscissae.
            resg += WG[j / 2] * fsum;
        }
    }
    (resk * h, ((resk - resg) * h).abs())
}

/// Adaptive Gauss–Kronrod integration on a finite interval.
///
/// Bisects the panel with the largest error proxy until the summed error is
/// below `max(abs_tol, rel_tol·|I|)` or the panel budget is exhausted.
pub fn adaptive_gk<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    const MAX_PANELS: usize = 4000;
    // Max-heap keyed on panel error.
    #[derive(PartialEq)]
    struct Panel {
        err: f64,
        a: f64,
        b: f64,
        val: f64,
    }
    impl Eq for Panel {}
    impl PartialOrd for Panel {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Panel {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.err.total_cmp(&other.err)
        }
    }

    let (val, err) = gk15_panel(&f, a, b);
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(Panel { err, a, b, val });
    let mut total_val = val;
    let mut total_err = err;
    while total_err > abs_tol.max(rel_tol * total_val.abs()) {
        if heap.len() >= MAX_PANELS {
            // Refinement stalled: report what we have if the error is at
            // least small in an absolute sense, otherwise fail.
            if total_err <= 1e-6 * total_val.abs().max(1.0) {
                break;
            }
            return Err(Error::NonConvergence { err: total_err });
        }
        let worst = heap.pop().expect("heap nonempty while error positive");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; accept it as is.
            total_err -= worst.err;
            continue;
        }
        let (v1, e1) = gk15_panel(&f, worst.a, mid);
        let (v2, e2) = gk15_panel(&f, mid, worst.b);
        total_val += v1 + v2 - worst.val;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { err: e1, a: worst.a, b: mid, val: v1 });
        heap.push(Panel { err: e2, a: mid, b: worst.b, val: v2 });
    }
    // Re-sum panels compensated for a cleaner final value.
    let mut acc = NeumaierSum::new();
    let mut errs = NeumaierSum::new();
    for p in heap.iter() {
        acc.add(p.val);
        errs.add(p.err);
    }
    if heap.is_empty() {
        Ok((total_val, total_err))
    } else {
        Ok((acc.value(), errs.value()))
    }
}

/// Adaptive integration of ∫_a^∞ f. The head [a, max(a,1)+1] is integrated
/// directly; the tail uses the substitution μ = 1/s, which maps the tail to
/// (0, 1] where bisection toward 0 can chase slowly decaying integrands.
pub fn adaptive_gk_to_inf<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<(f64, f64)> {
    let split = a.max(1.0) + 1.0;
    let (head, e1) = adaptive_gk(&f, a, split, rel_tol, abs_tol)?;
    let (tail, e2) = adaptive_gk(
        |s| f(1.0 / s) / (s * s),
        0.0,
        1.0 / split,
        rel_tol,
        abs_tol,
    )?;
    Ok((head + tail, e1 + e2))
}
