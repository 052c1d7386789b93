//! A pair with one stable and one unstable pole: the two parts are steered
//! independently and their costs add.

use silverreach::{min_energy_to_reach, mixed_set, synthesize_pair, FirstOrderPair, PairBoundary};

fn main() -> silverreach::Result<()> {
    let pair = FirstOrderPair::new(-1.0, 2.0, 1.0, 1.0)?;
    let set = mixed_set(&pair)?;
    println!("area of the unit-energy ellipse: {:.6}", set.volume());
    for x in [[0.5, 0.0], [0.0, 0.5], [0.3, -0.4], [-0.8, 0.6]] {
        let t = synthesize_pair(&pair, x, 8.0, 8.0 / 2000.0, PairBoundary::TwoSided)?;
        let predicted = min_energy_to_reach(&pair, x)?;
        println!(
            "target {x:?}: synthesized {:.6}  predicted {:.6}",
            t.energy, predicted
        );
    }
    Ok(())
}
