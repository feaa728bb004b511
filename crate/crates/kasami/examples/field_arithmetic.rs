//! Arithmetic in F_81 through Zech logarithms: addition, traces, the
//! quadratic character and the embedded subfield F_9.

use kasami::FieldCtx;

fn main() -> kasami::Result<()> {
    let f = FieldCtx::new(3, 4)?;
    println!("F_{}^{}: modulus {:?}, alpha = {:?}", f.p(), f.n(), f.modulus(), f.alpha_coeffs());

    let a = f.alpha_pow(5);
    let b = f.alpha_pow(17);
    let s = f.add(a, b);
    println!("alpha^5 + alpha^17 = alpha^{}  coeffs {:?}", s.log().unwrap(), f.coeffs(s));
    println!("alpha^5 * alpha^17 = alpha^{}", f.mul(a, b).log().unwrap());
    println!("(alpha^5)^-1 = alpha^{}", f.inv(a)?.log().unwrap());

    for t in [0, 1, 10, 40] {
        let x = f.alpha_pow(t);
        println!(
            "alpha^{t:<2}: Tr to F_3 = {}, Tr to F_9 = {:?}, eta = {:+}",
            f.abs_trace(x),
            f.coeffs(f.trace(x, 2)?),
            f.quad_char(x)
        );
    }

    let g = f.subfield_embed(2, Some(1))?;
    println!("generator of F_9 inside F_81: alpha^{}", g.log().unwrap());
    let members = f.elements().filter(|&x| f.in_subfield(x, 2)).count();
    println!("elements fixed by x -> x^9: {members}");
    Ok(())
}
