//! Volume of the unit-energy set of the coupled plant as the two time
//! constants vary.

use silverreach::reachability::determinant_volume_measure;
use silverreach::{boundary_state, reachable_set, volume_measures, CoupledSystem};

fn main() -> silverreach::Result<()> {
    let pi2 = 2.0;
    println!("{:>8} {:>14} {:>14} {:>14}", "eps", "measure", "det route", "volume");
    for eps in [0.1, 0.2, 0.3, 2f64.sqrt() - 1.0, 0.5, 0.7, 0.9] {
        let sys = CoupledSystem::unit_gain(eps * pi2, pi2)?;
        let r = volume_measures(&sys);
        println!(
            "{eps:8.4} {:14.6e} {:14.6e} {:14.6e}",
            r.paper_volume_measure,
            determinant_volume_measure(&sys),
            r.geometric_volume
        );
    }

    // Points built on the boundary sit exactly on the level set.
    let sys = CoupledSystem::unit_gain(1.0, 2.0)?;
    let set = reachable_set(&sys)?;
    let z = boundary_state(&sys, [0.3, -1.0, 0.2, 0.5])?;
    println!("boundary point {:?}", z.as_array());
    println!("membership value {:.15}", set.membership(&z.as_array()));
    Ok(())
}
