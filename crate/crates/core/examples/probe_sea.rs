use driftkit::learners::{HoeffdingConfig, HoeffdingTree};
use driftkit::streams::{gen_sea, SeaSpec, DriftSchedule};

fn main() {
    for &(length, grid) in &[(30_000usize, 10usize), (30_000, 20), (100_000, 10), (100_000, 20)] {
        let mut total = 0.0; let mut tail_total = 0.0; let mut splits = 0usize;
        let seeds = 5u64;
        for seed in 0..seeds {
            let spec = SeaSpec { length, seed, noise: 0.1, schedule: DriftSchedule::none(), ..SeaSpec::default() };
            let stream = gen_sea::<f64>(&spec).unwrap();
            let config = HoeffdingConfig { split_candidates: grid, ..HoeffdingConfig::default() };
            let mut tree: HoeffdingTree<f64> = HoeffdingTree::new(config);
            let mut correct = 0usize; let mut tail_correct = 0usize;
            let tail_start = length - 10_000;
            for (i, t) in stream.iter().enumerate() {
                let s = t.sample();
                let ok = tree.predict_one(s.features()).unwrap() == s.label().unwrap();
                if ok { correct += 1; }
                if i >= tail_start && ok { tail_correct += 1; }
                tree.learn_sample(s).unwrap();
            }
            total += correct as f64 / length as f64;
            tail_total += tail_correct as f64 / 10_000.0;
            splits += tree.split_count();
        }
        println!("length={length} grid={grid}: prequential {:.4}, tail-10k {:.4}, splits {:.1}",
            total / seeds as f64, tail_total / seeds as f64, splits as f64 / seeds as f64);
    }
}
