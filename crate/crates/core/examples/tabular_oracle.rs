//! Exact robust and nominal values of a small tabular model, and the
//! worst-case next-state distribution behind one robust backup.
//!
//! ```text
//! cargo run --example tabular_oracle [path/to/model.mdp]
//! ```

use rss_core::{
    nominal_value_iteration, robust_value_iteration, tv_distance, tv_worst_case_distribution,
    BellmanOperator, TabularMDP,
};

fn main() -> rss_core::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/cliff.mdp").to_string());
    let mdp = TabularMDP::load(&path)?;
    let robust = robust_value_iteration(&mdp, 1e-10)?;
    let nominal = nominal_value_iteration(&mdp, 1e-10)?;

    println!(
        "{path}: {} states, {} actions, gamma {}",
        mdp.num_states(),
        mdp.num_actions(),
        mdp.gamma()
    );
    println!("{:>5} {:>10} {:>10}", "state", "robust", "nominal");
    for s in 0..mdp.num_states() {
        println!("{s:>5} {:>10.4} {:>10.4}", robust[s], nominal[s]);
    }

    let op = BellmanOperator::robust(&mdp);
    for s in 0..mdp.num_states() {
        if mdp.is_terminal(s) {
            continue;
        }
        let q: Vec<String> = (0..mdp.num_actions())
            .map(|a| format!("{:.4}", op.q_value(&robust, s, a)))
            .collect();
        println!("robust Q({s}, .) = [{}]", q.join(", "));
    }

    let (s, a) = (0, 1);
    let row = mdp.row(s, a);
    let worst = tv_worst_case_distribution(row, &robust, mdp.rho(s, a));
    println!("P(.|{s},{a})     = {row:?}");
    println!(
        "worst case    = {:?}",
        worst
            .iter()
            .map(|p| (p * 1e6).round() / 1e6)
            .collect::<Vec<_>>()
    );
    println!(
        "TV distance   = {:.4} (budget {})",
        tv_distance(row, &worst),
        mdp.rho(s, a)
    );
    Ok(())
}
