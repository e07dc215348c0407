//! Generalized translation of a Gaussian, by the spectral route and through the triple-Bessel kernel.

use std::f64::consts::FRAC_PI_4;

use frhankel::model::{GaussChirp, GaussChirpSum, RadialGrid, TransformParams};
use frhankel::quadrature::QuadratureSpec;
use frhankel::translation::{d_kernel, translate_with, TranslationMethod};

fn main() -> frhankel::Result<()> {
    let params = TransformParams::new(0.0, 0.0, FRAC_PI_4)?;
    let spec = QuadratureSpec::default();
    let psi: GaussChirpSum = GaussChirp::gaussian(0.5)?.into();
    let grid = RadialGrid::linear(0.25, 2.5, 3)?;

    let spectral = translate_with(&params, &psi, 1.0, &grid, TranslationMethod::Spectral, &spec)?;
    let kernel = translate_with(&params, &psi, 1.0, &grid, TranslationMethod::KernelQuadrature, &spec)?;
    for ((&w, a), b) in grid.nodes().iter().zip(&spectral.values).zip(&kernel.values) {
        println!("omega {w:.2}: spectral {a:.8}  kernel {b:.8}  diff {:.1e}", (a - b).norm());
    }

    let d = d_kernel(&params, 1.0, 1.2, 0.7, &spec)?;
    let swapped = d_kernel(&params, 1.2, 1.0, 0.7, &spec)?;
    println!("D(1, 1.2, 0.7) = {d:.10}, swapped {swapped:.10}");
    Ok(())
}
