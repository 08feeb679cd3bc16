// scratch probe, deleted before finishing
use slicesim_core::harness::*;
use slicesim_core::traffic::InterArrivalModel;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mean_a: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(0.0125);
    let mean_b: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(0.020);
    let mean_c: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(0.033);
    let sigma: f64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(0.8);
    let seeds: Vec<u64> = args
        .get(5)
        .map(|s| s.split(',').map(|x| x.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![1, 2, 3]);

    let mut cfg = ExperimentConfig::for_profile(Profile::Desk, Scenario::Sfc, Scheme::Dql);
    let model = |mean: f64| InterArrivalModel::Lognormal {
        mu: mean.ln() - sigma * sigma / 2.0,
        sigma,
    };
    cfg.sfc.flow_models = [model(mean_a), model(mean_b), model(mean_c)];
    let t0 = std::time::Instant::now();
    let report = compare(&cfg, &[Scheme::Dql, Scheme::NoPriority], &seeds).unwrap();
    println!("means ({mean_a},{mean_b},{mean_c}) sigma {sigma} elapsed {:?}", t0.elapsed());
    for row in &report.rows {
        println!(
            "{:<12} queue {:.4}  weighted {:.4}  A {:.4}  B {:.4}  C {:.4}  cpu {:.3}",
            row.scheme.to_string(),
            row.stats["mean_queue_s"].0,
            row.stats["weighted_sojourn"].0,
            row.stats["sojourn_a_s"].0,
            row.stats["sojourn_b_s"].0,
            row.stats["sojourn_c_s"].0,
            row.stats["cpu_util"].0,
        );
    }
    let (da, sa) = paired_difference(
        &report.per_seed(Scheme::NoPriority, "weighted_sojourn_a"),
        &report.per_seed(Scheme::Dql, "weighted_sojourn_a"),
    );
    let (dw, sw) = paired_difference(
        &report.per_seed(Scheme::NoPriority, "weighted_sojourn"),
        &report.per_seed(Scheme::Dql, "weighted_sojourn"),
    );
    println!("A-margin {da:.5} (se {sa:.5}) => {}; overall {dw:.5} (se {sw:.5}) => {}",
        if da > sa { "PASS" } else { "FAIL" },
        if dw > sw { "PASS" } else { "FAIL" });
}
