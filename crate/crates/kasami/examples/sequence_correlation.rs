//! The 729 sequences of period 80 at (3, 2, 1): a few correlation values two
//! ways, then the full correlation distribution and its largest magnitude.

use num_bigint::BigInt;

use kasami::budget::Budget;
use kasami::seq::{correlation, correlation_distribution, correlation_via_s, family_size, sequence, SequenceId};
use kasami::{predicted, KasamiCtx, KasamiParams};

fn main() -> kasami::Result<()> {
    let ctx = KasamiCtx::new(KasamiParams::new(3, 2, 1)?)?;
    let s = sequence(&ctx, &SequenceId::at(&ctx, 100));
    println!("s_100 = {}", s.iter().map(|d| d.to_string()).collect::<String>());

    for (i, j, tau) in [(100, 100, 0), (100, 100, 7), (3, 500, 11), (42, 17, 79)] {
        let (a, b) = (SequenceId::at(&ctx, i), SequenceId::at(&ctx, j));
        let direct = correlation(&ctx, &a, &b, tau)?;
        let via_s = correlation_via_s(&ctx, &a, &b, tau)?;
        println!("C_({i},{j})({tau}) = {direct}   [via S: {via_s}]");
    }

    let spectrum = correlation_distribution(&ctx, 1, &Budget::default())?;
    println!("{} distinct values over {} events", spectrum.distinct_values(), spectrum.total());
    for (v, c) in &spectrum.entries {
        println!("  {v:<12} {c}");
    }
    let nontrivial = spectrum.nontrivial(family_size(&ctx), 3, 80);
    let (witness, mag) = nontrivial.max_magnitude().expect("nonempty");
    let bound = predicted::max_correlation(&ctx.params);
    println!("largest |C| = {mag} at C = {witness}; attains {bound}: {}", nontrivial.attains(&bound));
    println!("within bound: {:?}", nontrivial.within(&BigInt::from(28)));
    Ok(())
}
