//! Exact tails of a rational-weight halfspace at n = 36, past the truth-table cap.

use boolcube::rational::{format_rational, int, rat, to_f64};
use boolcube::Halfspace;

fn main() -> boolcube::Result<()> {
    let weights: Vec<_> = (1..=36).map(|i| rat(37 - i, 4)).collect();
    let h = Halfspace::new(&weights, int(40))?;
    let dist = h.tail()?;
    println!("backend {:?}, total weight {} in scaled units", dist.kind(), dist.total());
    for t in [0, 20, 40, 80, 120] {
        let f = dist.tail(&int(t));
        println!("F({t:>3}) = {:.6e}", to_f64(&f));
    }
    let d = h.decay_thresholds(h.threshold(), None)?;
    println!("beta {} gamma {} delta {}", format_rational(&d.beta), format_rational(&d.gamma), format_rational(&d.delta));
    println!("I_1 at t = 40: {:.6e}", to_f64(&h.top_influence_at(h.threshold())?));
    Ok(())
}
