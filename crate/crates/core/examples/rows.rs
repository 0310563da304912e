//! Ad-hoc: print sweep rows for one config without the noise-gate refusal.
use qlandau::harness::{field_by_name, potential_by_name, sweep_point};
use qlandau::operators::ScalingParams;
use qlandau::quadrature::QuadratureSpec;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let fname = args.get(1).map(String::as_str).unwrap_or("two_bump");
    let theta: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let pair: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(5_000_000);
    let f = field_by_name(fname).unwrap();
    let psi = field_by_name("gauss_test").unwrap();
    let pot = potential_by_name("gaussian").unwrap();
    let spec = QuadratureSpec {
        pair_nodes: pair,
        sphere_nodes: 72,
        radial_u_nodes: 24,
        ..Default::default()
    };
    let ladder: Vec<f64> = args
        .get(4)
        .map(|s| s.split(',').map(|x| x.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![0.4, 0.2, 0.1, 0.05]);
    for eps in ladder {
        let params = ScalingParams::new(eps, 1.0, 1.0, theta).unwrap();
        let r = sweep_point(&f, &psi, &pot, &params, &spec).unwrap();
        println!(
            "eps {eps}: gap {:.3e} (t2 {:.3e} t3a {:.3e} t3b {:.3e} rem {:.3e} cross {:.3e}) err {:.3e} gate {:.1}",
            r.gap, r.gap_t2, r.gap_t3a, r.gap_t3b, r.remainder_abs, r.cross_abs,
            r.quad_err, r.gap / r.quad_err
        );
    }
}
