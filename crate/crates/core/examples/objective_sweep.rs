//! Samples of eps (1 - eps) / (1 + eps) on (0, 1] as CSV on stdout, ready
//! for plotting.

use silverreach::sweep_objective;

fn main() -> silverreach::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    println!("epsilon,f");
    for (e, f) in sweep_objective(n)? {
        println!("{e},{f}");
    }
    Ok(())
}
