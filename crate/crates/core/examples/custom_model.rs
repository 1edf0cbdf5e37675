//! Planning against your own simulator.
//!
//! Any type implementing `GenerativeModel` can be planned on. This one is a
//! small inventory problem: each day, order 0, 1 or 2 units, then a random
//! demand arrives. Selling pays, holding stock costs a little, and turning a
//! customer away from an empty shop ends the episode. Demand in the rainy
//! season is poorly known, so those states report a nonzero radius.
//!
//! ```text
//! cargo run --release --example custom_model
//! ```

use rand::Rng;
use rss_core::{
    plan, plan_parallel, run_episode, GenerativeModel, PlannerConfig, SampleRng, Stream, Transition,
};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Shop {
    stock: u32,
    day: u32,
}

struct Inventory {
    rainy_demand: f64,
}

impl Inventory {
    fn rainy(day: u32) -> bool {
        day % 10 >= 6
    }
}

impl GenerativeModel for Inventory {
    type State = Shop;

    fn num_actions(&self) -> usize {
        3
    }

    fn initial_state(&self) -> Shop {
        Shop { stock: 1, day: 0 }
    }

    fn sample(&self, s: &Shop, order: usize, rng: &mut SampleRng) -> Transition<Shop> {
        let stock = (s.stock + order as u32).min(4);
        let p = if Self::rainy(s.day) {
            self.rainy_demand
        } else {
            0.6
        };
        let demand = (0..2).filter(|_| rng.random::<f64>() < p).count() as u32;
        let sold = demand.min(stock);
        let left = stock - sold;
        // rewards must not depend on the sampled demand; pay the expected sale
        let expected_sale = (0..=2u32)
            .map(|d| {
                let prob = match d {
                    0 => (1.0 - p) * (1.0 - p),
                    1 => 2.0 * p * (1.0 - p),
                    _ => p * p,
                };
                prob * d.min(stock) as f64
            })
            .sum::<f64>();
        let reward = (0.4 * expected_sale - 0.05 * stock as f64).clamp(0.0, 1.0);
        let mut t = Transition::new(
            Shop {
                stock: left,
                day: s.day + 1,
            },
            reward,
            stock == 0 && demand > 0,
        );
        t.realized_reward = (0.4 * sold as f64 - 0.05 * stock as f64).clamp(0.0, 1.0);
        t
    }

    fn rho(&self, s: &Shop, _order: usize) -> f64 {
        if Self::rainy(s.day) {
            0.2
        } else {
            0.0
        }
    }
}

fn main() -> rss_core::Result<()> {
    let model = Inventory { rainy_demand: 0.6 };
    let truth = Inventory { rainy_demand: 0.9 };
    let config = PlannerConfig::new(6, 3, 0.95).per_state_robust();

    for s in [Shop { stock: 1, day: 2 }, Shop { stock: 1, day: 7 }] {
        let nominal = plan(&model, &s, 3, &config.nominal(), Stream::from_seed(1))?;
        let robust = plan_parallel(&model, &s, 3, &config, Stream::from_seed(1))?;
        assert_eq!(robust, plan(&model, &s, 3, &config, Stream::from_seed(1))?);
        println!("{s:?} rainy={}", Inventory::rainy(s.day));
        println!("  nominal  Q = {:.4?}", nominal.per_action_values);
        println!("  variable Q = {:.4?}", robust.per_action_values);
    }

    let mut total = 0.0;
    for seed in 0..20 {
        total += run_episode(&truth, &model, &config, 40, seed)?.discounted_return;
    }
    println!(
        "mean return over 20 seeds against the real demand: {:.4}",
        total / 20.0
    );
    Ok(())
}
