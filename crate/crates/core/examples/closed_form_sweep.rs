//! Normalized closed-form populations and mixed-state concurrence over n̄,
//! with both formula variants.

use cqed_entangle::closed_form::{log_grid, normalize, Variant};

fn main() -> cqed_entangle::Result<()> {
    for variant in [Variant::Repaired, Variant::Printed] {
        println!("variant {variant}");
        println!("      nbar          C^2        w00        w01=w10        w11      C_mixed");
        for nbar in log_grid(0.5, 150.0, 12)? {
            match normalize(nbar, variant) {
                Ok(r) => println!(
                    "{nbar:10.4}  {:.4e}  {:.6}  {:.4e}  {:.4e}  {:.4e}",
                    r.c_squared, r.w.w00, r.w.w01, r.w.w11, r.c_mixed
                ),
                Err(e) => println!("{nbar:10.4}  {e}"),
            }
        }
        println!();
    }
    Ok(())
}
