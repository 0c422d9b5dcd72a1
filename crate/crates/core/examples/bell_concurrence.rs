//! Concurrence of the four Bell states and of a family interpolating from a
//! product state to Φ⁺.

use cqed_entangle::concurrence::{
    bell_basis, concurrence_mixed_wootters, concurrence_pure, concurrence_pure_determinant,
    TwoQubitPure,
};

fn main() -> cqed_entangle::Result<()> {
    for (name, b) in ["Phi+", "Phi-", "Psi+", "Psi-"].iter().zip(bell_basis()) {
        println!(
            "{name:5} magic basis {:.12}  determinant {:.12}  Wootters {:.12}",
            concurrence_pure(&b)?,
            concurrence_pure_determinant(&b),
            concurrence_mixed_wootters(&b.projector())?
        );
    }

    println!("\ntheta   C(cos theta |00> + sin theta |11>)");
    for i in 0..=8 {
        let theta = i as f64 * std::f64::consts::FRAC_PI_4 / 8.0;
        let psi = TwoQubitPure::from_real([theta.cos(), 0.0, 0.0, theta.sin()])?;
        println!("{theta:.4}  {:.6}", concurrence_pure(&psi)?);
    }
    Ok(())
}
