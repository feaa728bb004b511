//! Weight distribution of the code at (3, 2, 1): enumeration of all 3^10
//! codewords, the transform census, and the closed-form table.

use std::time::Instant;

use kasami::budget::Budget;
use kasami::code::{weight_table, weight_distribution_brute, weight_distribution_fast, Strategy};
use kasami::{KasamiCtx, KasamiParams};

fn main() -> kasami::Result<()> {
    let ctx = KasamiCtx::new(KasamiParams::new(3, 2, 1)?)?;
    let budget = Budget::default();

    let t = Instant::now();
    let brute = weight_distribution_brute(&ctx, 1, &budget)?;
    println!("enumeration: {:?}", t.elapsed());
    let t = Instant::now();
    let fast = weight_distribution_fast(&ctx, 1, Strategy::Full, &budget)?;
    println!("transform census: {:?}", t.elapsed());
    let table = weight_table(&ctx.params)?;

    println!("weight  multiplicity");
    for (w, c) in &fast.entries {
        println!("{w:>6}  {c}");
    }
    println!("enumeration == census: {}", brute == fast);
    println!("census == closed form: {}", fast == table);
    Ok(())
}
