//! Balancing a rigid body on one force: linearize, then pick inertias so the
//! two tilt time constants sit at the silver ratio.

use silverreach::{linearize, recommend, PendulumParams};

fn main() -> silverreach::Result<()> {
    let designs = [
        ("square plate", 0.02, 0.02),
        ("long bar", 0.08, 0.01),
        ("near optimal", 0.058, 0.01),
    ];
    for (name, i1, i2) in designs {
        let p = PendulumParams::earth(i1, i2, 1.0, 0.1)?;
        let sys = linearize(&p)?;
        let r = recommend(&p)?;
        println!("{name}: pi = ({:.4}, {:.4}), eps = {:.4}", sys.pi1(), sys.pi2(), r.epsilon);
        match r.gain_factor {
            Some(g) => println!(
                "  move I1 to {:.5} (keep I2) for {g:.3}x the volume",
                r.optimal_i1
            ),
            None => println!("  equal inertias: the set is flat, any change helps"),
        }
    }
    Ok(())
}
