// scratch probe, deleted before finishing
use slicesim_core::dqn::OptimizerKind;
use slicesim_core::harness::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seeds: Vec<u64> = args
        .get(1)
        .map(|s| s.split(',').map(|x| x.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![1, 2, 3]);
    let grid: Vec<(f64, usize, usize, &str)> = vec![
        (1e-3, 100, 32, "adam"),
        (5e-4, 100, 32, "adam"),
        (5e-4, 50, 64, "adam"),
        (2e-4, 50, 64, "adam"),
    ];
    for (lr, clone, batch, opt) in grid {
        let mut ok = 0;
        let mut rewards = Vec::new();
        for &seed in &seeds {
            let mut cfg =
                ExperimentConfig::for_profile(Profile::Desk, Scenario::Radio, Scheme::Dql)
                    .with_seed(seed);
            cfg.agent.learning_rate = lr;
            cfg.agent.clone_period = clone;
            cfg.agent.batch_size = batch;
            cfg.agent.optimizer = match opt {
                "adam" => OptimizerKind::adaptive_default(),
                _ => OptimizerKind::Sgd,
            };
            let s = run_experiment(&cfg).unwrap();
            let urllc = s.metrics["qoe_urllc"];
            let se = s.metrics["se"];
            if urllc > 0.8 {
                ok += 1;
            }
            rewards.push((seed, urllc, se, s.metrics["reward"]));
        }
        println!("lr {lr:.0e} clone {clone} batch {batch} {opt}: {ok}/{} good | {:?}",
            seeds.len(),
            rewards.iter().map(|(s, u, se, r)| format!("s{s}: u{u:.2} se{se:.1} r{r:.1}")).collect::<Vec<_>>());
    }
}
