//! Influences and vertex boundaries, from the truth table and from the tail distribution.

use boolcube::influence::{boundary_measures, influences};
use boolcube::rational::format_rational;
use boolcube::FunctionSpec;

fn main() -> boolcube::Result<()> {
    for text in ["dict:3", "subcube:3,6", "maj:9", "ltf:5,5,5,5,4,4,4,4,4;1"] {
        let spec = FunctionSpec::parse(text)?;
        let f = spec.build()?;
        let inf = influences(&f);
        let b = boundary_measures(&f);
        println!(
            "{text:<26} I_1 {:<10} vb0 {:<10} vb1 {}",
            format_rational(&inf.influence(0)),
            format_rational(&b.vb0),
            format_rational(&b.vb1)
        );
        if let Some(h) = spec.halfspace() {
            let h = h?;
            let (vb0, vb1) = h.vertex_boundary_at(h.threshold())?;
            assert_eq!((vb0, vb1), (b.vb0, b.vb1));
        }
    }
    Ok(())
}
