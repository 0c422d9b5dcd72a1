//! Monte Carlo average of exp(−i∫x dt) against the exact Gaussian result and
//! the analytic envelope.

use cqed_entangle::dynamics::{
    crossover_time, decoherence_envelope, gaussian_phase_average, gaussian_phase_decay,
    ProcessParams,
};

fn main() -> cqed_entangle::Result<()> {
    let p = ProcessParams {
        alpha0: 1.0,
        dt: 0.05,
        t_max: 5.0,
        n_traj: 20_000,
        seed: 3,
    };
    let mc = gaussian_phase_average(&p)?;
    println!("crossover time {:.4}", crossover_time(p.alpha0));
    println!("    t   Monte Carlo     +-SE     exact     envelope   exact/envelope");
    for i in (0..mc.times.len()).step_by(10) {
        let t = mc.times[i];
        let exact = gaussian_phase_decay(t, p.alpha0);
        let env = decoherence_envelope(t, p.alpha0);
        println!(
            "{t:5.2}   {:.6}   {:.6}   {exact:.6}   {env:.6}   {:.4}",
            mc.mean[i].norm(),
            mc.stderr[i],
            exact / env
        );
    }
    println!(
        "large-t ratio limit exp(1/(2 alpha0)) = {:.4}",
        (0.5 / p.alpha0).exp()
    );
    Ok(())
}
