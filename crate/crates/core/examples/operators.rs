//! The operator-chain identities and the product rule on a chirped Gaussian.

use std::f64::consts::FRAC_PI_3;

use num_complex::Complex64;

use frhankel::model::{GaussChirp, GaussChirpSum, TransformParams};
use frhankel::operators::{leibniz_defect, verify_chain_identity, ChainIdentity};
use frhankel::quadrature::QuadratureSpec;

fn main() -> frhankel::Result<()> {
    let params = TransformParams::new(0.5, 0.0, FRAC_PI_3)?;
    let spec = QuadratureSpec::default();
    let psi: GaussChirpSum = GaussChirp::new(Complex64::new(1.0, 0.0), 0.0, 0.5, params.cot())?.into();
    let probes = [0.5, 1.0, 2.0];
    for (part, q, k) in [
        (ChainIdentity::Expansion, 0, 3),
        (ChainIdentity::ThroughInverse, 2, 0),
        (ChainIdentity::UnderInverse, 1, 2),
    ] {
        let d = verify_chain_identity(part, &params, &psi, q, k, &probes, &spec)?;
        println!("{part:?} q={q} k={k}: defect {d:.2e}");
    }
    let g: GaussChirpSum = GaussChirp::new(Complex64::new(0.5, 1.0), 2.0, 0.4, -0.2)?.into();
    println!("product rule, 4 derivatives: defect {:.2e}", leibniz_defect(&params, &psi, &g, 4, &probes));
    Ok(())
}
