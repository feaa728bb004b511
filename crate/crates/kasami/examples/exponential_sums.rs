//! Gauss sums and the sums S(gamma, delta, eps) as exact cyclotomic integers,
//! by direct counting, by the all-character transform and in closed form.

use kasami::expsum::{counts_all_eps, gauss_sum, s_brute, ClosedFormPlan};
use kasami::{CycInt, KasamiCtx, KasamiParams};

fn main() -> kasami::Result<()> {
    for p in [3, 5, 7, 11, 13] {
        let g = gauss_sum(p);
        println!("p = {p:>2}: g^2 = {}", g.pow(2));
    }

    let ctx = KasamiCtx::new(KasamiParams::new(3, 2, 1)?)?;
    let f = &ctx.field;
    let label = ctx.label(f.subfield_embed(2, Some(3))?, f.alpha_pow(7))?;
    let plan = ClosedFormPlan::new(&ctx, &label)?;
    let all = counts_all_eps(&ctx, &label);
    println!("label rank {}, discriminant class {:+}", plan.rank(), plan.form.disc_class);
    for t in [None, Some(0), Some(3), Some(21)] {
        let eps = t.map_or(f.zero(), |t| f.alpha_pow(t));
        let direct = s_brute(&ctx, &label, eps);
        let via_transform: CycInt = all[f.to_vector(eps) as usize].to_cycint();
        let closed = plan.s(&ctx, eps);
        assert!(direct == via_transform && direct == closed);
        println!("eps = {:<10} S = {direct}", t.map_or("0".to_string(), |t| format!("alpha^{t}")));
    }
    Ok(())
}
