//! Best first-level cut, the unbiased correlator and the noise-resistance class.

use boolcube::correlate::{best_halfspace_over_form, first_level_form, noise_resistance_class, unbiased_correlator, DEFAULT_RHO_CONSTANT};
use boolcube::rational::format_rational;
use boolcube::FunctionSpec;

fn main() -> boolcube::Result<()> {
    for text in ["paper5", "tribes:3,3", "maj:9", "talagrand:16:2024"] {
        let f = FunctionSpec::parse(text)?.build()?;
        let best = best_halfspace_over_form(&f, &first_level_form(&f))?;
        let u = unbiased_correlator(&f, false)?;
        let nc = noise_resistance_class(&f, 0.5, DEFAULT_RHO_CONSTANT)?;
        println!(
            "{text:<18} cut cov {:<8} ratio {:.3}  unbiased cov {:<8} flips {:?}  resistant {}/{}",
            format_rational(&best.covariance),
            best.ratio,
            format_rational(&u.covariance),
            u.flipped,
            nc.fourier_resistant,
            nc.stability_resistant
        );
    }
    Ok(())
}
