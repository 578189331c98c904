//! Level weights of a few builtins, and the first-level coefficients of a halfspace.

use boolcube::rational::format_rational;
use boolcube::{fwht_spectrum, FunctionSpec};

fn main() -> boolcube::Result<()> {
    for text in ["maj:7", "tribes:3,3", "paper5", "ltf:3,2,2,1,1;1"] {
        let f = FunctionSpec::parse(text)?.build()?;
        let s = fwht_spectrum(&f);
        let levels: Vec<String> = s.level_weights().w.iter().map(format_rational).collect();
        println!("{text:<18} mean {:<8} W^k {}", format_rational(&f.mean()), levels.join(" "));
        assert_eq!(s.total_weight(), f.mean());
    }
    let f = FunctionSpec::parse("ltf:3,2,2,1,1;1")?.build()?;
    let s = fwht_spectrum(&f);
    for i in 0..f.n() {
        println!("  f^({{{i}}}) = {}", format_rational(&s.coeff(1 << i)));
    }
    Ok(())
}
