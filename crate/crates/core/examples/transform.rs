//! Forward transform of a chirped Gaussian against its closed form, then back again.

use std::f64::consts::FRAC_PI_3;

use frhankel::frht::{forward, oracle_forward, round_trip};
use frhankel::model::{GaussChirp, RadialGrid, TransformParams};
use frhankel::quadrature::QuadratureSpec;

fn main() -> frhankel::Result<()> {
    let params = TransformParams::new(0.5, 0.25, FRAC_PI_3)?;
    let spec = QuadratureSpec::default();
    let f = GaussChirp::oracle_family(&params, 0.5)?;
    let grid = RadialGrid::linear(0.25, 3.0, 12)?;

    let numeric = forward(&params, &f, &grid, &spec)?;
    let exact = oracle_forward(&params, 0.0, 0.5)?;
    println!("{:>6} {:>24} {:>10}", "omega", "transform", "rel err");
    for (&w, v) in grid.nodes().iter().zip(&numeric.values) {
        let e = exact.eval(w);
        println!("{w:>6.3} {:>11.8}{:+.8}i {:>10.2e}", v.re, v.im, (v - e).norm() / e.norm());
    }

    let back = round_trip(&params, &f, &grid, &spec)?;
    let worst = grid
        .nodes()
        .iter()
        .zip(&back.values)
        .map(|(&t, v)| (v - f.eval(t)).norm() / f.eval(t).norm())
        .fold(0.0, f64::max);
    println!("round trip max rel err {worst:.2e}");
    Ok(())
}
