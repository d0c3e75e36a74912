//! The interleaved test-then-train experiment loop.
//!
//! For every sample past the bootstrap block the classifier first predicts
//! (scored against the purchased-later truth), then the detector steps. When
//! a check fires, the configured selector picks the retraining set from the
//! drift-time window, those labels are purchased, and the classifier is
//! retrained from scratch on them. The homogeneous OCDD selection
//! additionally replaces the detector's distribution model, so cleaner
//! retraining data also cleans up future detection. In `PrequentialUpdate`
//! mode the classifier additionally learns every sample after scoring it;
//! those labels are not charged to the annotation count.

use crate::detectors::{rho_block_len, D3Config, D3Detector, DriftDecision, OcddConfig, OcddDetector};
use crate::error::{Error, Result};
use crate::evaluation::metrics::hadam;
use crate::learners::{gamma_scale, HoeffdingConfig, HoeffdingTree, KernelSpec};
use crate::sample::{ClassId, Sample};
use crate::scalar::Scalar;
use crate::suds::{
    select_baseline_d3, select_baseline_ocdd, select_suds_d3, select_suds_ocdd, SelectionResult,
    SelectorKind,
};

#[derive(Debug, Clone)]
pub enum DetectorConfig {
    D3(D3Config),
    Ocdd(OcddConfig),
}

impl DetectorConfig {
    pub fn is_d3(&self) -> bool {
        matches!(self, DetectorConfig::D3(_))
    }

    /// Per-drift annotation block of the baseline selector, `round(w·ρ)`.
    pub fn selection_block(&self) -> usize {
        match self {
            DetectorConfig::D3(c) => rho_block_len(c.w, c.rho),
            DetectorConfig::Ocdd(c) => rho_block_len(c.w, c.rho),
        }
    }

    /// Samples the detector needs before its first check.
    pub fn bootstrap_len(&self) -> usize {
        match self {
            DetectorConfig::D3(c) => c.w + rho_block_len(c.w, c.rho),
            DetectorConfig::Ocdd(c) => c.w,
        }
    }
}

/// Whether the classifier keeps learning between drifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// The classifier only changes at the initial block and at retrains.
    RetrainOnly,
    /// Interleaved test-then-train: learn every sample after scoring it.
    /// These labels are not charged to the annotation count.
    #[default]
    PrequentialUpdate,
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub detector: DetectorConfig,
    pub selector: SelectorKind,
    pub classifier: HoeffdingConfig,
    pub update_mode: UpdateMode,
    pub seed: u64,
    /// Keep a per-step prediction log in the report.
    pub trace: bool,
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.selector.is_d3() != self.detector.is_d3() {
            return Err(Error::InvalidConfig(format!(
                "selector {} does not match the configured detector",
                self.selector
            )));
        }
        match &self.detector {
            DetectorConfig::D3(c) => {
                c.validate()?;
                if self.selector == SelectorKind::SudsD3 && rho_block_len(c.w, c.rho) < 2 {
                    return Err(Error::InvalidConfig(
                        "homogeneous D3 selection needs round(w*rho) >= 2".into(),
                    ));
                }
            }
            DetectorConfig::Ocdd(c) => c.validate()?,
        }
        Ok(())
    }
}

/// One fired drift check and what was done about it.
#[derive(Debug, Clone)]
pub struct DriftEvent<S: Scalar> {
    pub at_index: usize,
    pub statistic: f64,
    pub selection: SelectionResult<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub index: usize,
    pub predicted: ClassId,
    pub actual: ClassId,
}

/// Outcome of one prequential run.
///
/// `annotated_count` charges both the initial training block and every
/// per-drift purchase; `paper_annotated` reports the per-drift purchases
/// alone, which is the published tables' convention.
#[derive(Debug, Clone)]
pub struct ExperimentReport<S: Scalar> {
    pub accuracy: f64,
    pub drift_events: Vec<DriftEvent<S>>,
    pub annotated_count: usize,
    pub initial_annotated: usize,
    pub stream_length: usize,
    pub scored: usize,
    pub hadam: f64,
    pub trace: Option<Vec<StepRecord>>,
}

impl<S: Scalar> ExperimentReport<S> {
    pub fn drift_count(&self) -> usize {
        self.drift_events.len()
    }

    /// Annotation count without the initial block.
    pub fn paper_annotated(&self) -> usize {
        self.annotated_count - self.initial_annotated
    }

    pub fn annotation_fraction(&self) -> f64 {
        self.annotated_count as f64 / self.stream_length as f64
    }
}

enum DetectorInstance<S: Scalar> {
    D3(D3Detector<S>),
    Ocdd(OcddDetector<S>),
}

impl<S: Scalar> DetectorInstance<S> {
    fn step(&mut self, sample: Sample<S>) -> Result<Option<DriftDecision<S>>> {
        match self {
            DetectorInstance::D3(d) => d.step(sample),
            DetectorInstance::Ocdd(d) => d.step(sample),
        }
    }
}

/// Run the full loop over a labeled stream.
pub fn run_prequential<S: Scalar>(
    stream: &[Sample<S>],
    config: &HarnessConfig,
) -> Result<ExperimentReport<S>> {
    config.validate()?;
    if stream.is_empty() {
        return Err(Error::EmptyInput);
    }
    let block = config.detector.selection_block();
    if stream.len() <= block {
        return Err(Error::InvalidConfig(format!(
            "stream of {} samples is not longer than the initial training block {}",
            stream.len(),
            block
        )));
    }

    let mut detector = match &config.detector {
        DetectorConfig::D3(c) => DetectorInstance::D3(D3Detector::new(c.clone())?),
        DetectorConfig::Ocdd(c) => DetectorInstance::Ocdd(OcddDetector::new(c.clone())?),
    };
    let mut classifier: HoeffdingTree<S> = HoeffdingTree::new(config.classifier.clone());

    // The classifier's initial training set is the first selector-sized
    // block; its labels are purchased and charged.
    let mut annotated = 0usize;
    for sample in &stream[..block] {
        classifier.learn_sample(sample)?;
        annotated += 1;
        detector.step(sample.clone())?;
    }
    let initial_annotated = annotated;

    let mut correct = 0usize;
    let mut scored = 0usize;
    let mut drift_events: Vec<DriftEvent<S>> = Vec::new();
    let mut trace = config.trace.then(Vec::new);

    for sample in &stream[block..] {
        let predicted = classifier.predict_one(sample.features())?;
        let actual = sample.label().ok_or(Error::UnlabeledSample {
            index: sample.index(),
        })?;
        scored += 1;
        if predicted == actual {
            correct += 1;
        }
        if let Some(log) = trace.as_mut() {
            log.push(StepRecord {
                index: sample.index(),
                predicted,
                actual,
            });
        }

        if let Some(decision) = detector.step(sample.clone())? {
            if decision.fired {
                let event_seed = event_seed(config.seed, drift_events.len());
                let selection = select(config, &mut detector, &decision, event_seed)?;

                // Purchase the labels, then retrain from scratch.
                let mut retrained: HoeffdingTree<S> =
                    HoeffdingTree::new(config.classifier.clone());
                for chosen in &selection.selected {
                    retrained.learn_sample(chosen)?;
                }
                annotated += selection.requested_annotations;
                classifier = retrained;

                // The homogeneous OCDD selection also becomes the detector's
                // new distribution model, so cleaner retraining data cleans
                // up future detection. D3 keeps its own post-fire rule
                // (retain W_next) for both selectors: its window converges
                // to the recent stream within one refill either way.
                if config.selector == SelectorKind::SudsOcdd {
                    if let DetectorInstance::Ocdd(d) = &mut detector {
                        if selection.selected.len() >= 2 {
                            d.refit_from(&selection.selected)?;
                        }
                    }
                }

                drift_events.push(DriftEvent {
                    at_index: sample.index(),
                    statistic: decision.statistic,
                    selection,
                });
            }
        }

        if config.update_mode == UpdateMode::PrequentialUpdate {
            classifier.learn_sample(sample)?;
        }
    }

    let accuracy = if scored == 0 {
        0.0
    } else {
        correct as f64 / scored as f64
    };
    let hadam_value = hadam(accuracy, annotated, stream.len())?;
    Ok(ExperimentReport {
        accuracy,
        drift_events,
        annotated_count: annotated,
        initial_annotated,
        stream_length: stream.len(),
        scored,
        hadam: hadam_value,
        trace,
    })
}

fn select<S: Scalar>(
    config: &HarnessConfig,
    detector: &mut DetectorInstance<S>,
    decision: &DriftDecision<S>,
    event_seed: u64,
) -> Result<SelectionResult<S>> {
    let snapshot = decision
        .snapshot
        .as_ref()
        .expect("fired decisions carry the window snapshot");
    match (&config.detector, config.selector) {
        (DetectorConfig::D3(c), SelectorKind::BaselineD3) => {
            select_baseline_d3(snapshot, c.w, c.rho)
        }
        (DetectorConfig::D3(c), SelectorKind::SudsD3) => {
            select_suds_d3(snapshot, c.w, c.rho, event_seed, &c.logistic)
        }
        (DetectorConfig::Ocdd(c), SelectorKind::BaselineOcdd) => {
            select_baseline_ocdd(snapshot, c.w, c.rho)
        }
        (DetectorConfig::Ocdd(c), SelectorKind::SudsOcdd) => {
            let flags = decision
                .outlier_flags
                .as_ref()
                .expect("fired OCDD decisions carry the outlier flags");
            // Same ν and kernel convention as the detector; a configured
            // width is reused, otherwise scale resolves on the outlier set.
            let gamma = c.gamma.unwrap_or_else(|| {
                let rows: Vec<&[S]> = snapshot
                    .iter()
                    .zip(flags)
                    .filter(|(_, &f)| f)
                    .map(|(s, _)| s.features())
                    .collect();
                gamma_scale(&rows)
            });
            let kernel = KernelSpec::rbf(gamma)?;
            select_suds_ocdd(snapshot, flags, c.nu, kernel, &c.smo)
        }
        _ => {
            let _ = detector;
            Err(Error::InvalidConfig(
                "selector does not match the configured detector".into(),
            ))
        }
    }
}

fn event_seed(seed: u64, event_number: usize) -> u64 {
    seed ^ (event_number as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::{gen_rbf_switch, strip_tags, DriftSchedule, RbfSwitchSpec};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn threshold_stream(n: usize, seed: u64) -> Vec<Sample<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let x: f64 = rng.gen_range(-1.0..1.0);
                Sample::labeled(i, vec![x], usize::from(x >= 0.0))
            })
            .collect()
    }

    fn d3_config() -> HarnessConfig {
        HarnessConfig {
            detector: DetectorConfig::D3(D3Config::default()),
            selector: SelectorKind::BaselineD3,
            classifier: HoeffdingConfig::default(),
            update_mode: UpdateMode::PrequentialUpdate,
            seed: 7,
            trace: false,
        }
    }

    /// At τ=0.7 the rank statistic of a 10-vs-100 window (σ≈0.096) trips on
    /// pure noise a few percent of the time per check — measured at 8–17
    /// fires per 5000 stationary samples. The quiet-stream contract is
    /// therefore pinned at τ=0.8 (a 4σ event), where the harness tracks the
    /// detector-free classifier; the τ=0.7 noise floor is frozen below.
    #[test]
    fn stationary_stream_matches_detector_free_oracle() {
        let stream = threshold_stream(8000, 3);
        let mut config = d3_config();
        match &mut config.detector {
            DetectorConfig::D3(c) => c.tau = 0.8,
            _ => unreachable!(),
        }
        let report = run_prequential(&stream, &config).unwrap();

        // Oracle: the same classifier without any detector or retraining.
        let mut oracle: HoeffdingTree<f64> = HoeffdingTree::new(HoeffdingConfig::default());
        let mut correct = 0usize;
        for sample in &stream[10..] {
            if oracle.predict_one(sample.features()).unwrap() == sample.label().unwrap() {
                correct += 1;
            }
            oracle.learn_sample(sample).unwrap();
        }
        let oracle_accuracy = correct as f64 / (stream.len() - 10) as f64;

        assert!(report.drift_count() <= 2, "drifts = {}", report.drift_count());
        assert!(report.accuracy >= 0.95, "accuracy = {}", report.accuracy);
        assert!(
            report.accuracy >= oracle_accuracy - 0.02,
            "harness {} vs oracle {oracle_accuracy}",
            report.accuracy
        );
    }

    #[test]
    fn stationary_false_fire_rate_at_default_tau_stays_in_the_measured_band() {
        let stream = threshold_stream(5000, 3);
        let report = run_prequential(&stream, &d3_config()).unwrap();
        assert!(
            (1..=30).contains(&report.drift_count()),
            "measured noise band violated: {} fires",
            report.drift_count()
        );
    }

    #[test]
    fn d3_annotation_accounting_is_ten_per_drift_plus_initial() {
        let mut spec = RbfSwitchSpec::ring(2, 1.0, 0.1, 3000, 5);
        spec.schedule = DriftSchedule::abrupt(&[600, 1500, 2400]);
        let stream = strip_tags(&gen_rbf_switch::<f64>(&spec).unwrap());
        let report = run_prequential(&stream, &d3_config()).unwrap();
        assert!(report.drift_count() >= 3, "drifts = {}", report.drift_count());
        assert_eq!(report.initial_annotated, 10);
        assert_eq!(
            report.annotated_count,
            10 * report.drift_count() + 10,
            "charged annotation must be ten per drift plus the initial block"
        );
        assert_eq!(report.paper_annotated(), 10 * report.drift_count());
        for event in &report.drift_events {
            assert_eq!(event.selection.requested_annotations, 10);
            assert!((0.0..=1.0).contains(&event.statistic));
        }
        // Events are strictly ordered within the stream.
        for pair in report.drift_events.windows(2) {
            assert!(pair[0].at_index < pair[1].at_index);
        }
    }

    #[test]
    fn report_hadam_is_recomputable() {
        let stream = threshold_stream(2000, 9);
        let report = run_prequential(&stream, &d3_config()).unwrap();
        let expected = hadam(
            report.accuracy,
            report.annotated_count,
            report.stream_length,
        )
        .unwrap();
        assert_eq!(report.hadam, expected);
    }

    #[test]
    fn identical_runs_produce_identical_reports() {
        let mut spec = RbfSwitchSpec::ring(2, 1.0, 0.1, 2500, 11);
        spec.schedule = DriftSchedule::gradual(&[800], 300);
        let stream = strip_tags(&gen_rbf_switch::<f64>(&spec).unwrap());
        let mut config = d3_config();
        config.selector = SelectorKind::SudsD3;
        config.trace = true;

        let a = run_prequential(&stream, &config).unwrap();
        let b = run_prequential(&stream, &config).unwrap();
        assert_eq!(a.accuracy, b.accuracy);
        assert_eq!(a.annotated_count, b.annotated_count);
        assert_eq!(a.hadam, b.hadam);
        assert_eq!(a.trace, b.trace);
        let events_a: Vec<usize> = a.drift_events.iter().map(|e| e.at_index).collect();
        let events_b: Vec<usize> = b.drift_events.iter().map(|e| e.at_index).collect();
        assert_eq!(events_a, events_b);
        for (ea, eb) in a.drift_events.iter().zip(&b.drift_events) {
            let ia: Vec<usize> = ea.selection.selected.iter().map(|s| s.index()).collect();
            let ib: Vec<usize> = eb.selection.selected.iter().map(|s| s.index()).collect();
            assert_eq!(ia, ib);
        }
    }

    #[test]
    fn incompatible_selector_is_rejected() {
        let mut config = d3_config();
        config.selector = SelectorKind::SudsOcdd;
        let stream = threshold_stream(500, 1);
        assert!(matches!(
            run_prequential(&stream, &config),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn short_stream_is_rejected() {
        let stream = threshold_stream(10, 1);
        assert!(matches!(
            run_prequential(&stream, &d3_config()),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn unlabeled_sample_is_an_error() {
        let mut stream = threshold_stream(600, 2);
        stream[300] = Sample::new(300, vec![0.5]);
        assert!(matches!(
            run_prequential(&stream, &d3_config()),
            Err(Error::UnlabeledSample { index: 300 })
        ));
    }

    #[test]
    fn retrain_only_mode_freezes_the_classifier_between_drifts() {
        // On a stationary stream with no drifts, retrain-only accuracy is
        // whatever the initial 10-sample model achieves; prequential update
        // keeps learning and must do strictly better on a threshold concept.
        let stream = threshold_stream(4000, 13);
        let mut frozen = d3_config();
        frozen.update_mode = UpdateMode::RetrainOnly;
        let frozen_report = run_prequential(&stream, &frozen).unwrap();
        let updating_report = run_prequential(&stream, &d3_config()).unwrap();
        assert!(
            updating_report.accuracy > frozen_report.accuracy,
            "updating {} vs frozen {}",
            updating_report.accuracy,
            frozen_report.accuracy
        );
    }

    #[test]
    fn ocdd_pipeline_runs_end_to_end() {
        let mut spec = RbfSwitchSpec::ring(2, 1.0, 0.1, 1500, 21);
        spec.schedule = DriftSchedule::abrupt(&[700]);
        let stream = strip_tags(&gen_rbf_switch::<f64>(&spec).unwrap());
        let config = HarnessConfig {
            detector: DetectorConfig::Ocdd(OcddConfig {
                w: 200,
                ..OcddConfig::default()
            }),
            selector: SelectorKind::SudsOcdd,
            classifier: HoeffdingConfig::default(),
            update_mode: UpdateMode::PrequentialUpdate,
            seed: 3,
            trace: false,
        };
        let report = run_prequential(&stream, &config).unwrap();
        assert!(report.drift_count() >= 1);
        for event in &report.drift_events {
            // Homogeneous OCDD selections are subsets of the flagged set,
            // whose size is bounded by the window.
            assert!(event.selection.requested_annotations <= 200);
            assert_eq!(
                event.selection.requested_annotations,
                event.selection.selected.len()
            );
        }
        assert_eq!(
            report.annotated_count,
            report.initial_annotated
                + report
                    .drift_events
                    .iter()
                    .map(|e| e.selection.requested_annotations)
                    .sum::<usize>()
        );
    }
}
