//! Root counts of g_(delta, gamma) over all labels and of x^(p^s+1) - c x + c.

use kasami::qform::{bluher_census, g_root_census};
use kasami::{FieldOptions, KasamiCtx, KasamiParams};

fn main() -> kasami::Result<()> {
    let ctx = KasamiCtx::new(KasamiParams::new(3, 2, 1)?)?;
    let rc = g_root_census(&ctx);
    println!("g roots at (3, 2, 1): {:?}", rc.histogram);
    println!("  unique roots that are (p^d-1)-th powers: {}", rc.single_root_ok);
    println!("  multi-root labels with all products powers: {}/{}", rc.multi_root_ok, rc.multi_root_labels);

    for (p, s, l) in [(3, 1, 2), (3, 1, 3), (3, 1, 4), (5, 1, 2)] {
        let b = bluher_census(p, s, l, &FieldOptions::default())?;
        println!("h_c over F_{p}^{l} (s = {s}): {:?}", b.histogram);
    }
    Ok(())
}
