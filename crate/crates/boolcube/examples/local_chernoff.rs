//! The three local Chernoff statistics along a threshold sweep.

use boolcube::chernoff::{local_chernoff_statistic, Partition, Variant};
use boolcube::rational::{int, rat, to_f64};
use boolcube::Halfspace;

fn main() -> boolcube::Result<()> {
    let weights: Vec<_> = [9, 7, 7, 5, 4, 4, 3, 3, 2, 2, 1, 1, 1, 1].iter().map(|&w| int(w)).collect();
    let base = Halfspace::new(&weights, int(0))?;
    println!("{:>4} {:>10} {:>8} {:>8} {:>8}", "t", "F(t)", "strong", "part.", "weak");
    for t in (0..=36).step_by(6) {
        let h = base.with_threshold(int(t));
        let t = int(t);
        let beta = h.decay_thresholds(&t, None)?.beta;
        let stat = |v: Variant| local_chernoff_statistic(&h, &t, &v).map(|s| s.value);
        println!(
            "{:>4} {:>10.3e} {:>8.4} {:>8.4} {:>8.4}",
            t,
            to_f64(&h.tail()?.tail(&t)),
            stat(Variant::Strong)?,
            stat(Variant::Partitioned(Partition::by_cut(&h, &beta)))?,
            stat(Variant::Weak(rat(1, 8)))?
        );
    }
    Ok(())
}
