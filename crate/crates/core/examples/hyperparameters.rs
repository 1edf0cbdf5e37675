//! Sample width and horizon that guarantee an epsilon-optimal robust policy.
//!
//! ```text
//! cargo run --example hyperparameters
//! ```

use rss_core::theorem1_hyperparameters;

fn main() -> rss_core::Result<()> {
    println!(
        "{:>6} {:>6} {:>5} {:>3} {:>4} {:>16}",
        "eps", "gamma", "rho", "|A|", "H", "C"
    );
    for (eps, gamma, rho, actions) in [
        (0.3, 0.5, 0.5, 2),
        (1.0, 0.9, 0.3, 2),
        (2.0, 0.9, 0.3, 4),
        (2.5, 0.99, 0.5, 4),
    ] {
        let h = theorem1_hyperparameters(eps, gamma, rho, actions)?;
        println!(
            "{eps:>6} {gamma:>6} {rho:>5} {actions:>3} {:>4} {:>16}",
            h.horizon, h.sample_width
        );
    }
    println!("(FrozenLake plans well with C = 50, H = 3)");
    Ok(())
}
