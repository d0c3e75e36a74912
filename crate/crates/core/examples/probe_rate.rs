use driftkit::detectors::{D3Config, OcddConfig};
use driftkit::evaluation::{run_prequential, DetectorConfig, HarnessConfig, UpdateMode};
use driftkit::learners::HoeffdingConfig;
use driftkit::streams::{gen_rbf_switch, strip_tags, DriftSchedule, RbfSwitchSpec, TaggedSample};
use driftkit::suds::SelectorKind;

// Criterion 5 probe: SUDS-D3 selection purity on a two-cluster gradual stream.
fn selector_quality() {
    let mut total_fraction = 0.0;
    let mut counted = 0;
    for seed in 0..20u64 {
        let mut spec = RbfSwitchSpec::ring(2, 1.0, 0.1, 4000, seed);
        spec.schedule = DriftSchedule::gradual(&[1000], 500);
        let tagged: Vec<TaggedSample<f64>> = gen_rbf_switch(&spec).unwrap();
        let stream = strip_tags(&tagged);
        let config = HarnessConfig {
            detector: DetectorConfig::D3(D3Config::default()),
            selector: SelectorKind::SudsD3,
            classifier: HoeffdingConfig::default(),
            update_mode: UpdateMode::PrequentialUpdate,
            seed, trace: false,
        };
        let report = run_prequential(&stream, &config).unwrap();
        let last_transition_event = report.drift_events.iter()
            .filter(|e| (1000..=1750).contains(&e.at_index))
            .last();
        match last_transition_event {
            Some(e) => {
                let new = e.selection.selected.iter()
                    .filter(|x| tagged[x.index()].concept_id == 1)
                    .count() as f64 / e.selection.selected.len() as f64;
                total_fraction += new; counted += 1;
                println!("seed {seed}: last transition fire at {}, new fraction {new:.2}", e.at_index);
            }
            None => println!("seed {seed}: no transition fire"),
        }
    }
    println!("== criterion5: counted {counted}/20, mean new fraction {:.3}", total_fraction / counted as f64);
}

fn pipeline(detector: DetectorConfig, selector: SelectorKind, seed: u64, stream: &[driftkit::Sample<f64>]) -> (usize, usize, f64) {
    let config = HarnessConfig {
        detector, selector,
        classifier: HoeffdingConfig::default(),
        update_mode: UpdateMode::PrequentialUpdate,
        seed, trace: false,
    };
    let r = run_prequential(stream, &config).unwrap();
    (r.drift_count(), r.annotated_count, r.accuracy)
}

// Criterion 6 probe: annotation-efficiency trend on a 5-concept gradual stream.
fn annotation_trend(width: usize, d3_rho: f64, d3_tau: f64, ocdd_nu: f64, ocdd_rho: f64, seeds: u64) {
    println!("-- width={width} d3_rho={d3_rho} d3_tau={d3_tau} ocdd_nu={ocdd_nu} ocdd_rho={ocdd_rho}");
    let mut sums = [[0.0f64; 3]; 4];
    for seed in 0..seeds {
        let mut spec = RbfSwitchSpec::ring(5, 2.0, 0.1, 50_000, 100 + seed);
        spec.schedule = DriftSchedule::gradual(&[10_000, 20_000, 30_000, 40_000], width);
        let stream = strip_tags(&gen_rbf_switch::<f64>(&spec).unwrap());
        let d3 = |rho, tau| DetectorConfig::D3(D3Config { rho, tau, ..D3Config::default() });
        let ocdd = |nu, rho| DetectorConfig::Ocdd(OcddConfig { nu, rho, ..OcddConfig::default() });
        let cases = [
            (d3(d3_rho, d3_tau), SelectorKind::BaselineD3),
            (d3(d3_rho, d3_tau), SelectorKind::SudsD3),
            (ocdd(ocdd_nu, ocdd_rho), SelectorKind::BaselineOcdd),
            (ocdd(ocdd_nu, ocdd_rho), SelectorKind::SudsOcdd),
        ];
        for (i, (det, sel)) in cases.into_iter().enumerate() {
            let (d, a, acc) = pipeline(det, sel, seed, &stream);
            sums[i][0] += d as f64; sums[i][1] += a as f64; sums[i][2] += acc;
        }
    }
    let names = ["D3 base", "D3 suds", "OCDD base", "OCDD suds"];
    for (i, name) in names.iter().enumerate() {
        println!("  {name}: drifts={:.1} annotated={:.1} accuracy={:.4}",
            sums[i][0] / seeds as f64, sums[i][1] / seeds as f64, sums[i][2] / seeds as f64);
    }
    println!("  D3 ratio = {:.3}, OCDD ratio = {:.3}, D3 acc delta = {:.4}, OCDD acc delta = {:.4}",
        sums[1][1] / sums[0][1], sums[3][1] / sums[2][1],
        sums[0][2] / seeds as f64 - sums[1][2] / seeds as f64,
        sums[2][2] / seeds as f64 - sums[3][2] / seeds as f64);
}

// Criterion 7 probe: abrupt two-cluster switch, baseline vs suds accuracy.
fn abrupt_regression(seeds: u64) {
    let mut base_sum = 0.0;
    let mut suds_sum = 0.0;
    for seed in 0..seeds {
        let mut spec = RbfSwitchSpec::ring(2, 1.0, 0.1, 20_000, 500 + seed);
        spec.schedule = DriftSchedule::abrupt(&[10_000]);
        let stream = strip_tags(&gen_rbf_switch::<f64>(&spec).unwrap());
        let (_, _, acc_b) = pipeline(DetectorConfig::D3(D3Config::default()), SelectorKind::BaselineD3, seed, &stream);
        let (_, _, acc_s) = pipeline(DetectorConfig::D3(D3Config::default()), SelectorKind::SudsD3, seed, &stream);
        base_sum += acc_b; suds_sum += acc_s;
        println!("seed {seed}: baseline {acc_b:.4} suds {acc_s:.4}");
    }
    println!("== criterion7: baseline mean {:.4}, suds mean {:.4}, diff {:.4}",
        base_sum / seeds as f64, suds_sum / seeds as f64, (suds_sum - base_sum) / seeds as f64);
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(String::as_str) {
        Some("c5") => selector_quality(),
        Some("c7") => abrupt_regression(args.get(2).map(|s| s.parse().unwrap()).unwrap_or(10)),
        Some("c6") => {
            let width: usize = args[2].parse().unwrap();
            let d3_rho: f64 = args[3].parse().unwrap();
            let d3_tau: f64 = args[4].parse().unwrap();
            let nu: f64 = args[5].parse().unwrap();
            let orho: f64 = args[6].parse().unwrap();
            let seeds: u64 = args.get(7).map(|s| s.parse().unwrap()).unwrap_or(3);
            annotation_trend(width, d3_rho, d3_tau, nu, orho, seeds);
        }
        _ => println!("usage: probe_rate c5 | c6 width d3_rho d3_tau nu ocdd_rho [seeds]"),
    }
}
