//! Irwin-Hall derivatives, Newton-Girard residuals and the level-k inequality.

use boolcube::levelk::{central_difference, check_level_k_upper, irwin_hall_kth_derivative, normalised_squares, symmetric_stats};
use boolcube::rational::format_rational;
use boolcube::FunctionSpec;

fn main() -> boolcube::Result<()> {
    for k in 1..=4 {
        let x = k as f64 / 2.0 + 0.25;
        println!("k={k}: G_k^(k)({x}) = {:+.6}, central difference {:+.6}", irwin_hall_kth_derivative(k, x), central_difference(k, x, 0.1)?);
    }
    let spec = FunctionSpec::parse("ltf:5,4,4,3,3,2,2,1,1,1,1,1;14")?;
    let h = spec.halfspace().expect("halfspace")?;
    let st = symmetric_stats(&normalised_squares(&h), 4)?;
    let e: Vec<String> = st.e.iter().map(format_rational).collect();
    println!("e_m of normalised squares: {}", e.join(", "));
    assert!(st.newton_girard_holds());
    let f = spec.build()?;
    for k in [2, 3] {
        let r = check_level_k_upper(&f, k, &spec.to_text())?;
        println!("{} {}: {} vs {} ({:?})", r.check_id, r.instance, r.lhs.text(), r.rhs.as_ref().map(|x| x.text()).unwrap_or_default(), r.outcome);
    }
    Ok(())
}
