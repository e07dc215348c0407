//! Bessel functions of real order and the scaled form used by the kernels.

use frhankel::specialfn::{bessel_j, scaled_bessel};

fn main() -> frhankel::Result<()> {
    println!("{:>6} {:>8} {:>22} {:>22}", "order", "x", "J", "x^-order J");
    for order in [-0.5, 0.0, 0.5, 1.0, 2.25] {
        for x in [0.5, 5.0, 40.0] {
            println!("{order:>6} {x:>8} {:>22.15e} {:>22.15e}", bessel_j(order, x)?, scaled_bessel(order, x)?);
        }
    }
    Ok(())
}
