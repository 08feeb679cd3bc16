// scratch probe, deleted before finishing
const SCALE: f64 = 4.0;
use slicesim_core::dqn::*;
use slicesim_core::rng::stream;
use slicesim_core::error::Result;

// 3-state 3-action deterministic MDP.
// actions: 0 stay, 1 next (s+1 mod 3), 2 prev (s+2 mod 3)
fn reward(s: usize, a: usize) -> f64 {
    match (s, a) {
        (0, 0) => 0.2,   // myopic bribe in state 0
        (2, 0) => 1.0,   // staying in state 2 pays
        (1, 2) => 0.3,   // going back from 1 to 0 pays a bit
        _ => 0.0,
    }
}
fn next(s: usize, a: usize) -> usize {
    match a { 0 => s, 1 => (s + 1) % 3, _ => (s + 2) % 3 }
}

struct Mdp { state: usize }
impl Environment for Mdp {
    fn observe(&mut self) -> Vec<f64> { let mut v = vec![0.0; 3]; v[self.state] = SCALE; v }
    fn action_count(&self) -> usize { 3 }
    fn step(&mut self, action: usize) -> Result<StepReport> {
        let s = self.state;
        let r = reward(s, action);
        let n = next(s, action);
        let mut sv = vec![0.0; 3]; sv[s] = SCALE;
        let mut nv = vec![0.0; 3]; nv[n] = SCALE;
        self.state = n;
        Ok(StepReport { experiences: vec![Experience { state: sv, action, next_state: nv, reward: r, terminal: false }], reward: r, done: false })
    }
}

fn oracle() -> Vec<usize> {
    let gamma = 0.9;
    let mut v = [0.0f64; 3];
    for _ in 0..2000 {
        let mut nv = [0.0f64; 3];
        for s in 0..3 {
            nv[s] = (0..3).map(|a| reward(s, a) + gamma * v[next(s, a)]).fold(f64::NEG_INFINITY, f64::max);
        }
        v = nv;
    }
    (0..3).map(|s| {
        let q: Vec<f64> = (0..3).map(|a| reward(s, a) + gamma * v[next(s, a)]).collect();
        argmax(&q)
    }).collect()
}

fn main() {
    let opt = oracle();
    println!("oracle policy: {:?}", opt);
    let mut pass = 0;
    for seed in 0..5u64 {
        let cfg = AgentConfig::default();
        let mut env = Mdp { state: 0 };
        let mut rng = stream(seed, "probe");
        let t0 = std::time::Instant::now();
        let run = run_training(&mut env, &cfg, 5000, &mut rng).unwrap();
        let mut ok = true;
        for s in 0..3 {
            let mut obs = vec![0.0; 3]; obs[s] = SCALE;
            let q = run.network.forward(&obs).unwrap();
            if argmax(&q) != opt[s] { ok = false; }
            print!("s{}: q={:?} pick={} want={}  ", s, q.iter().map(|x| (x*100.0).round()/100.0).collect::<Vec<_>>(), argmax(&q), opt[s]);
        }
        println!("\nseed {} => {} ({:?})", seed, if ok {"MATCH"} else {"MISS"}, t0.elapsed());
        if ok { pass += 1; }
    }
    println!("{}/5 seeds match", pass);
}
