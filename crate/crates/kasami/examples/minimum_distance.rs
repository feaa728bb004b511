//! Minimum distances from the weight census, including the non-strict
//! parameters (3, 3, 1) and, with orbit reduction, (3, 4, 2).

use kasami::budget::Budget;
use kasami::code::{min_distance, Strategy};
use kasami::{predicted, KasamiCtx, KasamiParams};

fn main() -> kasami::Result<()> {
    let budget = Budget::default();
    for (p, m, k, strategy) in [
        (3, 2, 1, Strategy::Full),
        (3, 3, 1, Strategy::Full),
        (3, 3, 2, Strategy::Full),
        (3, 4, 2, Strategy::Orbits),
    ] {
        let ctx = KasamiCtx::new(KasamiParams::new(p, m, k)?)?;
        let d = min_distance(&ctx, 1, strategy, true, &budget)?;
        println!(
            "({p}, {m}, {k}) strict={} d_min = {d} (closed form {:?}, {strategy:?})",
            ctx.params.strict,
            predicted::min_distance(&ctx.params)
        );
    }
    Ok(())
}
