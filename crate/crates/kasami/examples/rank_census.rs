//! Ranks and discriminant classes of the quadratic forms Pi_(gamma, delta)
//! over all labels, next to the closed-form frequencies.

use kasami::{census, predicted, KasamiCtx, KasamiParams};

fn main() -> kasami::Result<()> {
    for (p, m, k) in [(3, 2, 1), (5, 2, 1)] {
        let ctx = KasamiCtx::new(KasamiParams::new(p, m, k)?)?;
        let rc = census::rank_census(&ctx, 1);
        let expected = predicted::class_distribution(&ctx.params)?;
        println!("(p, m, k) = ({p}, {m}, {k}), n = {}", ctx.n());
        println!("  rank class  computed  closed form");
        for (&(r, j), c) in &expected {
            let got = rc.by_class.get(&(r, j)).cloned().unwrap_or_default();
            println!("  {r:>4} {j:>+5}  {got:>8}  {c:>11}");
        }
    }
    Ok(())
}
