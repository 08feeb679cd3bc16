// scratch probe, deleted before finishing
use slicesim_core::harness::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seed: u64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(2);
    let out = std::path::PathBuf::from(format!("/tmp/probe_seed{seed}"));
    let mut cfg = ExperimentConfig::for_profile(Profile::Desk, Scenario::Radio, Scheme::Dql)
        .with_seed(seed);
    cfg.out_dir = Some(out.clone());
    let s = run_experiment(&cfg).unwrap();
    println!("{:?}", s.metrics);
    println!("wrote {}", out.display());
}
