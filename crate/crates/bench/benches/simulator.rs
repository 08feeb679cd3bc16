use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use slicesim_core::baselines::no_priority_assign;
use slicesim_core::dqn::{train_step, AgentConfig, Experience, Optimizer, QNetwork};
use slicesim_core::harness::desk_radio_params;
use slicesim_core::radio::{BandwidthAllocation, RadioEnv, RadioEnvConfig, SchedulingMode};
use slicesim_core::rng::stream;
use slicesim_core::sfc::{SfcEnv, SfcRewardConfig, SfcSpec};
use slicesim_core::traffic::{default_flow_models, generate_flow_trace, TraceStream};
use slicesim_core::channel::place_users;

fn bench_trace_generation(c: &mut Criterion) {
    let params = desk_radio_params();
    c.bench_function("trace_one_second_desk", |b| {
        b.iter(|| {
            let mut stream = TraceStream::new(&params.slices, 7).unwrap();
            black_box(stream.take_until(1.0).len())
        })
    });
}

fn bench_radio_epoch(c: &mut Criterion) {
    let params = desk_radio_params();
    c.bench_function("radio_epoch_desk", |b| {
        b.iter_batched(
            || {
                let users: usize = params.slices.iter().map(|s| s.user_count).sum();
                let mut rng = stream(3, "bench-placement");
                let links = place_users(users, params.cell_radius_m, &params.link, &mut rng);
                let mut cfg = RadioEnvConfig::new(
                    params.slices.clone(),
                    params.link,
                    params.total_bandwidth_hz,
                );
                cfg.mode = SchedulingMode::Sliced;
                let env = RadioEnv::new(cfg, links).unwrap();
                let mut trace = TraceStream::new(&params.slices, 11).unwrap();
                let events = trace.take_until(1.0);
                (env, events, stream(5, "bench-fading"))
            },
            |(mut env, events, mut rng)| {
                let alloc = BandwidthAllocation(vec![1e6, 5e6, 4e6]);
                black_box(env.step(&alloc, &events, &mut rng).unwrap());
            },
            criterion::BatchSize::SmallInput,
        )
    });
}

fn bench_train_step(c: &mut Criterion) {
    let mut rng = stream(9, "bench-net");
    let cfg = AgentConfig::default();
    let mut net = QNetwork::new(3, &cfg.hidden, 66, &mut rng);
    let batch: Vec<Experience> = (0..cfg.batch_size)
        .map(|i| Experience {
            state: vec![0.3, 0.8, 0.1],
            action: i % 66,
            next_state: vec![0.4, 0.7, 0.2],
            reward: 0.5,
            terminal: false,
        })
        .collect();
    let targets: Vec<f64> = (0..cfg.batch_size).map(|i| i as f64 * 0.01).collect();
    let mut opt = Optimizer::new(cfg.optimizer, net.parameter_count());
    c.bench_function("dqn_train_step_batch32", |b| {
        b.iter(|| {
            black_box(
                train_step(&mut net, &batch, &targets, cfg.learning_rate, &mut opt).unwrap(),
            )
        })
    });
}

fn bench_sfc_assignment(c: &mut Criterion) {
    let trace = generate_flow_trace(&default_flow_models(), 10_000, 13).unwrap();
    c.bench_function("sfc_no_priority_10k_flows", |b| {
        b.iter_batched(
            || SfcEnv::new(SfcSpec::default_chains(), SfcRewardConfig::default(), None).unwrap(),
            |mut env| {
                for e in &trace.events {
                    env.advance(e.time_s);
                    let pick = no_priority_assign(&env, e.category);
                    env.assign(e.category, e.time_s, pick).unwrap();
                }
                env.drain();
                black_box(env.take_completions().len())
            },
            criterion::BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    bench_trace_generation,
    bench_radio_epoch,
    bench_train_step,
    bench_sfc_assignment
);
criterion_main!(benches);
