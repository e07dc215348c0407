//! Wavelet coefficients of a Gaussian by both routes, and the wavelet decay condition.

use std::f64::consts::FRAC_PI_3;

use frhankel::model::{GaussChirp, GaussChirpSum, RadialGrid, TransformParams};
use frhankel::quadrature::QuadratureSpec;
use frhankel::wavelet::{cwt_direct_grid, cwt_spectral, decay_check};

fn main() -> frhankel::Result<()> {
    let params = TransformParams::new(0.0, 0.0, FRAC_PI_3)?;
    let spec = QuadratureSpec::default();
    let g: GaussChirpSum = GaussChirp::gaussian(0.5)?.into();
    let b = RadialGrid::linear(0.25, 2.0, 4)?;

    for a in [0.5, 1.0, 2.0] {
        let s = cwt_spectral(&params, &g, &g, &b, a, &spec)?;
        let d = cwt_direct_grid(&params, &g, &g, &b, a, &spec)?;
        for ((&bb, x), y) in b.nodes().iter().zip(&s.values).zip(&d.values) {
            println!("a {a:.1} b {bb:.3}: spectral {x:.9}  direct {y:.9}");
        }
    }

    let t = RadialGrid::logarithmic(0.05, 6.0, 24)?;
    let r = decay_check(&params, &g, 2, 0.0, &t, &spec)?;
    println!("decay condition holds: {} with constants {:?}", r.passes, r.constants);
    Ok(())
}
