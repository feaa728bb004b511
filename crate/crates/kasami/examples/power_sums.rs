//! First three power sums of S(gamma, delta, 0) and the point counts behind them.

use kasami::{census, predicted, KasamiCtx, KasamiParams};

fn main() -> kasami::Result<()> {
    for (p, m, k) in [(3, 2, 1), (5, 2, 1), (3, 3, 2)] {
        let ctx = KasamiCtx::new(KasamiParams::new(p, m, k)?)?;
        let sums = census::power_sums(&ctx, 1);
        let [e1, e2, e3] = predicted::power_sums(&ctx.params)?;
        println!("({p}, {m}, {k}):");
        println!("  sum S   = {}  (closed form {e1})", sums.s1);
        println!("  sum S^2 = {}  (closed form {e2})", sums.s2);
        println!("  sum S^3 = {}  (closed form {e3})", sums.s3);
        println!("  |T2| = {}, |T3| = {}", census::count_t2(&ctx), census::count_t3(&ctx));
    }
    Ok(())
}
