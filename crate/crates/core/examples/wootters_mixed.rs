//! Wootters concurrence of Werner states p|Φ⁺⟩⟨Φ⁺| + (1−p)I/4, next to the
//! sign-flipped eigenvalue combination that is identically zero.

use cqed_entangle::concurrence::{
    bell_basis, concurrence_mixed_printed, concurrence_mixed_wootters, wootters_eigenvalues,
    TwoQubitDensity,
};
use cqed_entangle::tensor::ComplexMatrix;
use num_complex::Complex64;

fn main() -> cqed_entangle::Result<()> {
    let bell = bell_basis()[0].projector();
    let mixed = TwoQubitDensity::maximally_mixed();
    println!("   p   Wootters   (3p-1)/2   max{{0,-l}}   eigenvalues of R");
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let m: ComplexMatrix = &bell.matrix().scale(Complex64::new(p, 0.0))
            + &mixed.matrix().scale(Complex64::new(1.0 - p, 0.0));
        let rho = TwoQubitDensity::new(m)?;
        let l = wootters_eigenvalues(&rho)?;
        println!(
            "{p:4.1}   {:.6}   {:.6}   {:.6}   [{:.4}, {:.4}, {:.4}, {:.4}]",
            concurrence_mixed_wootters(&rho)?,
            ((3.0 * p - 1.0) / 2.0).max(0.0),
            concurrence_mixed_printed(&rho)?,
            l[0],
            l[1],
            l[2],
            l[3]
        );
    }
    Ok(())
}
