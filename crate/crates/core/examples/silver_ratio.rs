//! The time-constant ratio that maximizes the reachable volume.

use silverreach::{optimal_inertia_ratio, optimal_ratio, ratio_objective};

fn main() {
    let o = optimal_ratio();
    println!("eps*          = {:.17}", o.epsilon_star);
    println!("searched      = {:.17}", o.searched);
    println!("delta_s       = {:.17}", o.delta_s);
    println!("f(eps*)       = {:.17}", o.max_objective);
    println!("inertia ratio = {:.15}", optimal_inertia_ratio());

    for eps in [0.1, 0.25, 0.5, 0.75] {
        let share = ratio_objective(eps).unwrap() / o.max_objective;
        println!("eps = {eps:<4}  {:5.1}% of the best volume factor", 100.0 * share);
    }
}
