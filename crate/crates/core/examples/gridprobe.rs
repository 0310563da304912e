//! Ad-hoc: compare origin-centered vs mixture pair grids on a smooth
//! direction-sensitive integrand with two_bump mass.
use qlandau::quadrature::{integrate_pair, PairGeom, QuadratureSpec};
use qlandau::states::{DecayClass, SmoothField};

fn main() {
    let f = SmoothField::two_bump(2.0);
    let g = |geom: &PairGeom| {
        let uhat = geom.u / geom.r.max(1e-12);
        let e1 = uhat[0];
        f.value(&geom.v) * f.value(&geom.v1) * (e1 * e1) / (1.0 + geom.r * geom.r)
    };
    for n in [5_000_000usize, 20_000_000, 80_000_000] {
        let spec = QuadratureSpec { pair_nodes: n, radial_u_nodes: 24, ..Default::default() };
        let mix = integrate_pair(g, 0, f.decay_class(), &spec).unwrap();
        let org = integrate_pair(g, 0, DecayClass::Gaussian, &spec).unwrap();
        println!(
            "n {n}: mix {:.9e} (est {:.1e})  origin {:.9e} (est {:.1e})",
            mix.value, mix.error_estimate, org.value, org.error_estimate
        );
    }
}
