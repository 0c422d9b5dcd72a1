//! erf, erfi and the 2F2(a,a;a+1,a+1;x) blocks behind the closed-form
//! populations.

use cqed_entangle::closed_form::{hypergeometric_parameters, shifted_2f2};
use cqed_entangle::special::{erf, erfi, erfi_scaled, pfq, HypergeometricSpec};
use num_rational::Rational64;

fn main() -> cqed_entangle::Result<()> {
    println!("   x        erf(x)              erfi(x)             exp(-x^2) erfi(x)");
    for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0] {
        let e = erfi(x)
            .map(|v| format!("{v:.12e}"))
            .unwrap_or_else(|err| err.to_string());
        println!(
            "{x:5.1}   {:.15}   {e:>20}   {:.12e}",
            erf(x),
            erfi_scaled(x)
        );
    }

    println!("\n2F2(a,a;a+1,a+1;x)");
    for a in hypergeometric_parameters() {
        let row: Vec<String> = [0.5, 5.0, 50.0]
            .iter()
            .map(|&x| {
                shifted_2f2(a, x)
                    .map(|v| format!("{v:.10e}"))
                    .unwrap_or_default()
            })
            .collect();
        println!("a = {a:>3}: {}", row.join("  "));
    }

    // 1F1(1;2;x) = (e^x − 1)/x
    let spec = HypergeometricSpec::new(
        vec![Rational64::from_integer(1)],
        vec![Rational64::from_integer(2)],
        3.0,
    );
    println!(
        "\n1F1(1;2;3) = {:.15}  (e^3-1)/3 = {:.15}",
        pfq(&spec)?,
        (3f64.exp() - 1.0) / 3.0
    );
    Ok(())
}
