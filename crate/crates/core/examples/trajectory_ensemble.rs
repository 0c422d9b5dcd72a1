//! Ensemble of random trajectories x(t): averaged spin populations, the two
//! concurrence estimates, and a comparison of two late-time slices.

use cqed_entangle::concurrence::{concurrence_mixed_wootters, TwoQubitDensity};
use cqed_entangle::dynamics::{crossover_time, simulate_ensemble, ProcessParams};
use cqed_entangle::model::{initial_state, FieldState, ModelParams};
use num_complex::Complex64;

fn main() -> cqed_entangle::Result<()> {
    let model = ModelParams {
        nbar: 2.0,
        n_max: 30,
        g0: 0.3,
        ..ModelParams::default()
    };
    let process = ProcessParams {
        t_max: 30.0,
        n_traj: 200,
        seed: 7,
        ..ProcessParams::default()
    };
    let c = Complex64::new(0.5, 0.0);
    let psi0 = initial_state(
        [c; 4],
        &FieldState::Poisson { nbar: model.nbar },
        model.n_max,
    )?;

    let avg = simulate_ensemble(&model, &process, &psi0, None)?;
    println!(
        "{} trajectories, max norm drift {:.2e}, crossover time {:.3}",
        avg.runs,
        avg.max_norm_drift,
        crossover_time(process.alpha0)
    );
    println!("     t     w00     w01     w10     w11   <C>pure  C(avg w)  Wootters");
    let averaged = avg.averaged_concurrence();
    for i in (0..avg.times.len()).step_by(25) {
        let w = &avg.populations[i];
        let rho = TwoQubitDensity::new(avg.densities[i].clone())?;
        println!(
            "{:6.2}  {:.4}  {:.4}  {:.4}  {:.4}  {:.5}  {:.5}  {:.5}",
            avg.times[i],
            w.w00,
            w.w01,
            w.w10,
            w.w11,
            avg.mean_pure_concurrence[i],
            averaged[i],
            concurrence_mixed_wootters(&rho)?
        );
    }

    let n = avg.times.len();
    let (a, b) = (&avg.populations[2 * n / 3], &avg.populations[n - 1]);
    let shift = a
        .as_array()
        .iter()
        .zip(b.as_array())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    println!(
        "\npopulation change between t = {:.1} and t = {:.1}: {shift:.3e}",
        avg.times[2 * n / 3],
        avg.times[n - 1]
    );
    Ok(())
}
