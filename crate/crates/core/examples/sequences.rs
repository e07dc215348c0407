//! Axiom checks for factorial-power sequences.

use frhankel::type_s::{check_sequence, SequenceFamily};

fn main() -> frhankel::Result<()> {
    for s in [0.5, 1.0, 2.0] {
        let seq = SequenceFamily::factorial_pow(s, 30)?;
        let r = check_sequence(&seq, 30)?;
        println!(
            "(k!)^{s}: log-convex {}, supermultiplicative {}, ratio sum {:?} (estimate {:.6}, tail exponent {:.3})",
            r.log_convex.holds, r.supermultiplicative.holds, r.ratio_sum.trend, r.ratio_sum.estimate, r.ratio_sum.exponent
        );
    }
    Ok(())
}
