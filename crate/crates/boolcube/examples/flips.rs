//! Suffix flips and the scf maps, audited exhaustively on one weight vector.

use boolcube::flips::{audit_flips, audit_four_maps, iscf, scf, signs};

fn main() -> boolcube::Result<()> {
    let x = signs(0b1011_0011, 8);
    let y = scf(&x)?;
    println!("x      {x:?}\nscf(x) {y:?}");
    assert_eq!(iscf(&y)?, x);

    let a = [7, 6, 5, 5, 3, 2, 2, 1, 1, 1];
    for r in [0, 5, 11] {
        let au = audit_flips(&a, r)?;
        println!("r = {r:>2}: {} patterns, {} violations", au.inputs, au.violations());
    }
    let m = audit_four_maps(&a, 7, 7, 21)?;
    println!("four maps: domain {} target {} pieces {:?} violations {}", m.domain, m.target, m.pieces, m.violations());
    Ok(())
}
