//! Robust backup of a handful of sampled successor values.
//!
//! ```text
//! cargo run --example dual_backup
//! ```

use rss_core::{dual_minimize, nominal_backup, robust_backup, DualInstance};

fn main() -> rss_core::Result<()> {
    let values = vec![0.2, 0.8, 1.5, 0.0, 2.4, 1.1];
    let reward = 0.3;
    let gamma = 0.9;

    println!("values {values:?}, reward {reward}, gamma {gamma}");
    println!(
        "nominal backup  {:.4}",
        nominal_backup(reward, &values, gamma)?
    );
    println!("{:>6} {:>10} {:>10} {:>10}", "rho", "eta*", "F*", "backup");
    for rho in [0.05, 0.1, 0.2, 0.4, 0.7, 1.0] {
        let inst = DualInstance::new(values.clone(), rho, gamma);
        let sol = dual_minimize(&inst)?;
        println!(
            "{rho:>6} {:>10.4} {:>10.4} {:>10.4}",
            sol.eta_star,
            sol.f_star,
            robust_backup(reward, &inst)?
        );
    }

    // Weighted form: distinct values with their empirical frequencies.
    let inst = DualInstance::weighted(vec![0.0, 1.0, 3.0], vec![0.1, 0.6, 0.3], 0.25, gamma);
    let sol = dual_minimize(&inst)?;
    println!(
        "weighted: eta* {:.4}, worst-case mean {:.4}",
        sol.eta_star, -sol.f_star
    );
    Ok(())
}
