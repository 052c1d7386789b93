//! Two-sided minimum-energy input through a boundary state, and the
//! convergence of its energy to 1 as the grid and horizon grow.

use silverreach::{boundary_state, synthesize_min_energy, CoupledSystem, SynthesisProblem};

fn main() -> silverreach::Result<()> {
    let sys = CoupledSystem::unit_gain(1.0, 2.0)?;
    let z = boundary_state(&sys, [1.0, 0.0, -0.5, 0.25])?;
    for (horizon, steps) in [(4.0, 500.0), (8.0, 2000.0), (12.0, 8000.0)] {
        let p = SynthesisProblem::new(sys, z, horizon, horizon / steps)?;
        let t = synthesize_min_energy(&p)?;
        println!(
            "T = {horizon:4}  dt = {:.5}  energy = {:.8}  |z(T)| = {:.1e}",
            t.dt(),
            t.energy,
            t.states.last().unwrap().norm()
        );
    }

    let p = SynthesisProblem::new(sys, z, 8.0, 0.02)?;
    let t = synthesize_min_energy(&p)?;
    let path = std::env::temp_dir().join("silverreach_trajectory.csv");
    t.write_csv(std::fs::File::create(&path).expect("writable temp dir"))
        .expect("csv written");
    println!("trajectory written to {}", path.display());
    Ok(())
}
