//! Seminorm tables of a Gaussian and of its transform, with fitted growth exponents.

use std::f64::consts::FRAC_PI_4;

use frhankel::frht::Direction;
use frhankel::model::{GaussChirp, GaussChirpSum, RadialGrid, TransformParams};
use frhankel::type_s::{closed_form_transform, growth_trend, seminorm_table, ChirpSign};

fn main() -> frhankel::Result<()> {
    let params = TransformParams::new(0.5, 0.0, FRAC_PI_4)?;
    let f: GaussChirpSum = GaussChirp::oracle_family(&params, 1.0)?.into();
    let out = closed_form_transform(&params, Direction::Forward, &f)?;
    let grid = RadialGrid::linear(0.01, 8.0, 200)?;

    let input = seminorm_table(&f, &params, ChirpSign::Plus, 12, 12, &grid)?;
    let output = seminorm_table(&out, &params, ChirpSign::Minus, 12, 12, &grid)?;
    for k in [0, 4, 8, 12] {
        println!("S({k:>2}, 0) = {:.6e}   S(0, {k:>2}) of transform = {:.6e}", input.get(k, 0), output.get(0, k));
    }
    let g = growth_trend(&input, &output)?;
    println!("input alpha {:.3}, output beta {:.3}, fit residual {:.2e}", g.alpha_in, g.beta_out, g.max_residual);
    Ok(())
}
