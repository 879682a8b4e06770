//! Temporary diagnostic for the quartic-run normalization drift.

use moyal_core::grid::{integrate_liouville, PhaseGrid};
use moyal_core::oracle::{evolve_wigner, stability_limit, EvolutionRun};
use moyal_core::poly::PolyObservable;
use moyal_core::states::quartic_coherent;
use moyal_core::SimConfig;
use std::sync::Arc;

#[test]
#[ignore]
fn probe() {
    let cfg = SimConfig::default();
    let state = quartic_coherent(0.01, 1.0, 1.0, &cfg).unwrap();
    for (n, half, cutoff, frac, poisson, roll) in [
        (128usize, 6.0, 0.40, 0.8, false, 0.10),
        (128, 6.0, 0.40, 0.8, false, 0.15),
        (128, 6.5, 0.40, 0.8, false, 0.10),
        (96, 6.0, 0.40, 0.8, false, 0.10),
        (160, 6.0, 0.40, 0.8, false, 0.10),
    ] {
        let grid = Arc::new(
            PhaseGrid::centered(state.q0, state.p0, half, half, n, n).unwrap(),
        );
        let rho0 = state.rasterize(&grid, &cfg).unwrap();
        let norm0 = integrate_liouville(&rho0, &cfg).unwrap().re;
        let mut run = EvolutionRun::new(rho0, PolyObservable::monomial(2, 2, 1.0), 0.0, 0);
        run.spectral_cutoff = cutoff;
        run.poisson_only = poisson;
        run.coeff_window_rolloff = roll;
        let limit = stability_limit(&run, &cfg).unwrap();
        let t_end = 0.1;
        let steps = (t_end / (frac * limit)).ceil() as usize;
        run.dt = t_end / steps as f64;
        run.steps = steps;
        run.snapshot_every = steps / 4;
        match evolve_wigner(&run, &cfg) {
            Ok(snaps) => {
                let norm_end = integrate_liouville(snaps.last().unwrap(), &cfg).unwrap().re;
                println!(
                    "n={n} half={half} cutoff={cutoff} frac={frac} poisson={poisson} roll={roll}: steps={steps} norm0={norm0:.9} drift={:.3e}",
                    (norm_end - 1.0).abs()
                );
            }
            Err(e) => println!(
                "n={n} half={half} cutoff={cutoff} frac={frac} poisson={poisson} roll={roll}: steps={steps} norm0={norm0:.9} ERR {e}"
            ),
        }
    }
}
