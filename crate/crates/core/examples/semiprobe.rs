//! Ad-hoc: convergence of the semi main-term gaps and 8D remainder for
//! two_bump under grid variations.
use qlandau::harness::{field_by_name, potential_by_name};
use qlandau::operators::eight::{cross_terms_8d, remainder_terms_8d};
use qlandau::operators::semi::main_terms_semi;
use qlandau::operators::ScalingParams;
use qlandau::quadrature::QuadratureSpec;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("semi");
    let f = field_by_name("two_bump").unwrap();
    let psi = field_by_name("gauss_test").unwrap();
    let pot = potential_by_name("gaussian").unwrap();
    let params = ScalingParams::new(0.4, 1.0, 1.0, 1.0).unwrap();
    match mode {
        "semi" => {
            for pair in [5_000_000usize, 20_000_000, 60_000_000] {
                let spec = QuadratureSpec {
                    pair_nodes: pair,
                    sphere_nodes: 72,
                    radial_u_nodes: 24,
                    ..Default::default()
                };
                let m = main_terms_semi(&f, &psi, &pot, &params, &spec).unwrap();
                println!(
                    "pair {pair}: gap_t2 {:.6e} (est {:.1e}) gap_t3a {:.6e} (est {:.1e})",
                    m.gap_t2.value,
                    m.gap_t2.error_estimate,
                    m.gap_t3a.value,
                    m.gap_t3a.error_estimate
                );
            }
        }
        "rem" => {
            let pair: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5_000_000);
            let nr: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(24);
            let sn: usize = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(72);
            let spec = QuadratureSpec {
                pair_nodes: pair,
                sphere_nodes: sn,
                radial_u_nodes: nr,
                ..Default::default()
            };
            let rem = remainder_terms_8d(&f, &psi, &pot, &params, &spec).unwrap();
            let (rb, rt) = cross_terms_8d(&f, &psi, &pot, &params, &spec).unwrap();
            println!(
                "pair {pair} nr {nr} sn {sn}: rem {:.6e} (est {:.1e}) rb {:.6e} (est {:.1e}) rt {:.6e} (est {:.1e})",
                rem.total(),
                rem.total_err(),
                rb.value,
                rb.error_estimate,
                rt.value,
                rt.error_estimate
            );
        }
        "gap" => {
            // args: eps, then triples pair,nr,sn;... semi fixed at 20M.
            let eps: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.4);
            let params = ScalingParams::new(eps, 1.0, 1.0, 1.0).unwrap();
            let semi_spec = QuadratureSpec {
                pair_nodes: 20_000_000,
                sphere_nodes: 72,
                radial_u_nodes: 24,
                ..Default::default()
            };
            let m = main_terms_semi(&f, &psi, &pot, &params, &semi_spec).unwrap();
            let semi_sum = m.gap_t2.value + m.gap_t3a.value + m.gap_t3b.value;
            println!(
                "eps {eps} semi(20M): t2 {:+.6e} t3a {:+.6e} t3b {:+.6e} sum {:+.6e}",
                m.gap_t2.value, m.gap_t3a.value, m.gap_t3b.value, semi_sum
            );
            for trip in args[3..].iter() {
                let p: Vec<usize> =
                    trip.split(',').map(|s| s.parse().unwrap()).collect();
                let spec = QuadratureSpec {
                    pair_nodes: p[0],
                    sphere_nodes: p[2],
                    radial_u_nodes: p[1],
                    ..Default::default()
                };
                let rem = remainder_terms_8d(&f, &psi, &pot, &params, &spec).unwrap();
                let (rb, rt) = cross_terms_8d(&f, &psi, &pot, &params, &spec).unwrap();
                let gap = semi_sum + rem.total() + rb.value + rt.value;
                println!(
                    "  8d {},{},{}: rem {:+.6e} rb {:+.6e} rt {:+.6e} gap {:+.6e}",
                    p[0], p[1], p[2], rem.total(), rb.value, rt.value, gap
                );
            }
        }
        other => eprintln!("unknown mode {other}"),
    }
}
