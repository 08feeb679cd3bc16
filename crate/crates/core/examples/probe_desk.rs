// scratch probe, deleted before finishing
use slicesim_core::harness::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let what = args.get(1).map(|s| s.as_str()).unwrap_or("radio");
    let seeds: Vec<u64> = args
        .get(2)
        .map(|s| s.split(',').map(|x| x.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![1, 2]);

    match what {
        "radio" => {
            let cfg = ExperimentConfig::for_profile(Profile::Desk, Scenario::Radio, Scheme::Dql);
            let t0 = std::time::Instant::now();
            let report = compare(
                &cfg,
                &[Scheme::Dql, Scheme::Hard, Scheme::NoSlicing, Scheme::DpNo, Scheme::DpBw],
                &seeds,
            )
            .unwrap();
            println!("elapsed {:?}", t0.elapsed());
            for row in &report.rows {
                println!(
                    "{:<8} se {:.3}±{:.3}  volte {:.3}  video {:.3}  urllc {:.3}±{:.3}  agg {:.3}  reward {:.1}",
                    row.scheme.to_string(),
                    row.stats["se"].0, row.stats["se"].1,
                    row.stats["qoe_volte"].0,
                    row.stats["qoe_video"].0,
                    row.stats["qoe_urllc"].0, row.stats["qoe_urllc"].1,
                    row.stats["qoe_aggregate"].0,
                    row.stats["reward"].0,
                );
            }
            let dql_se = report.mean(Scheme::Dql, "se");
            let best = [Scheme::Hard, Scheme::NoSlicing]
                .iter()
                .map(|&s| report.mean(s, "se"))
                .fold(f64::NEG_INFINITY, f64::max);
            println!(
                "urllc: dql {:.3} hard {:.3} none {:.3} | dql_se/best {:.3}",
                report.mean(Scheme::Dql, "qoe_urllc"),
                report.mean(Scheme::Hard, "qoe_urllc"),
                report.mean(Scheme::NoSlicing, "qoe_urllc"),
                dql_se / best
            );
        }
        "sweep" => {
            let cfg = ExperimentConfig::for_profile(Profile::Desk, Scenario::Radio, Scheme::Dql);
            let t0 = std::time::Instant::now();
            let out = sweep(
                &cfg,
                SweepAxis::QoeWeight,
                &[1.0, 5000.0],
                &[Scheme::Dql, Scheme::Hard],
                &seeds,
            )
            .unwrap();
            println!("elapsed {:?}", t0.elapsed());
            for (value, report) in &out {
                println!(
                    "beta {:>6}: dql se {:.3} agg-qoe {:.3} urllc {:.3} video {:.3} volte {:.3}",
                    value,
                    report.mean(Scheme::Dql, "se"),
                    report.mean(Scheme::Dql, "qoe_aggregate"),
                    report.mean(Scheme::Dql, "qoe_urllc"),
                    report.mean(Scheme::Dql, "qoe_video"),
                    report.mean(Scheme::Dql, "qoe_volte"),
                );
            }
            let lo = &out[0].1;
            let hi = &out[1].1;
            let (dq, seq) = paired_difference(
                &hi.per_seed(Scheme::Dql, "qoe_aggregate"),
                &lo.per_seed(Scheme::Dql, "qoe_aggregate"),
            );
            let (dse, sese) = paired_difference(
                &lo.per_seed(Scheme::Dql, "se"),
                &hi.per_seed(Scheme::Dql, "se"),
            );
            println!("qoe margin {dq:.4} (se {seq:.4}); se margin {dse:.4} (se {sese:.4})");
        }
        "sfc" => {
            let cfg = ExperimentConfig::for_profile(Profile::Desk, Scenario::Sfc, Scheme::Dql);
            let t0 = std::time::Instant::now();
            let report = compare(&cfg, &[Scheme::Dql, Scheme::NoPriority], &seeds).unwrap();
            println!("elapsed {:?}", t0.elapsed());
            for row in &report.rows {
                println!(
                    "{:<12} queue {:.4}  sojourn {:.4}  weighted {:.4}  A {:.4}  B {:.4}  C {:.4}  cpu {:.3}",
                    row.scheme.to_string(),
                    row.stats["mean_queue_s"].0,
                    row.stats["mean_sojourn_s"].0,
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
            println!("A-margin {da:.5} (se {sa:.5}); overall margin {dw:.5} (se {sw:.5})");
        }
        other => panic!("unknown probe {other}"),
    }
}
