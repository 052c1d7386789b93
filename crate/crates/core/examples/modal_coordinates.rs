//! Splitting the coupled plant into stable and unstable modal pairs.

use silverreach::{build_transform, modal_pairs, CoupledSystem, State4};

fn main() -> silverreach::Result<()> {
    let sys = CoupledSystem::new(1.0, 3.0, 1.0, -0.5)?;
    let (unstable, stable) = modal_pairs(&sys);
    println!("unstable pair: alpha = {:?}, beta = {:?}", unstable.alphas(), unstable.betas());
    println!("stable pair:   alpha = {:?}, beta = {:?}", stable.alphas(), stable.betas());

    let tf = build_transform(&sys);
    let z = State4::new(0.1, -0.2, 0.05, 0.3);
    let eta = tf.to_modal(&z);
    println!("z   = {:?}", z.as_array());
    println!("eta = {:?}  (u1, u2, s1, s2)", eta.0);
    println!("back: {:?}", tf.from_modal(&eta).as_array());
    println!("det T = {:.6}", tf.det());
    Ok(())
}
