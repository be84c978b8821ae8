use eegcr::harness::{block_len, run_scenario_on, ScenarioConfig, ScenarioKind};
use eegcr::synth::{synth_mi, SynthSpec};
use eegcr::TrialSet64;

fn small_set(seed: u64) -> TrialSet64 {
    synth_mi(&SynthSpec {
        subjects: 4,
        trials_per_class: 24,
        trial_s: 2.0,
        ..SynthSpec::mi_default(seed)
    })
    .unwrap()
}

/// Flips the labels of `subject`'s trials from index `from` on.
fn flip_labels(set: &TrialSet64, subject: u32, from: usize) -> TrialSet64 {
    let mut seen = 0;
    let trials = set
        .trials()
        .iter()
        .cloned()
        .map(|mut t| {
            if t.subject == subject {
                if seen >= from {
                    t.label = 1 - t.label;
                }
                seen += 1;
            }
            t
        })
        .collect();
    set.with_trials(trials).unwrap()
}

#[test]
fn cross_unsupervised_never_trains_on_the_target() {
    let set = small_set(60);
    let cfg = ScenarioConfig {
        target_subject: Some(2),
        repeats: 1,
        ..ScenarioConfig::new(ScenarioKind::CrossUnsupervised)
    };
    let a = run_scenario_on(&set, &cfg).unwrap().avg();
    let b = run_scenario_on(&flip_labels(&set, 2, 0), &cfg).unwrap().avg();
    // identical predictions scored against complementary labels
    assert!((a + b - 100.0).abs() < 1e-9, "{a} + {b}");
}

#[test]
fn within_subject_reads_test_labels_only_for_scoring() {
    let set = small_set(61);
    let cfg = ScenarioConfig {
        n_labeled_per_class: 5,
        chain: "cr".parse().unwrap(),
        target_subject: Some(1),
        repeats: 1,
        ..ScenarioConfig::new(ScenarioKind::Within)
    };
    let labels: Vec<usize> = set.subject_trials(1).iter().map(|t| t.label).collect();
    let block = block_len(&labels, 5, 2).unwrap();
    let a = run_scenario_on(&set, &cfg).unwrap().avg();
    let b = run_scenario_on(&flip_labels(&set, 1, block), &cfg).unwrap().avg();
    assert!((a + b - 100.0).abs() < 1e-9, "{a} + {b}");
}

#[test]
fn cross_supervised_uses_the_target_block() {
    let set = small_set(62);
    let cfg = ScenarioConfig {
        n_labeled_per_class: 8,
        target_subject: Some(0),
        repeats: 1,
        ..ScenarioConfig::new(ScenarioKind::CrossSupervised)
    };
    let labels: Vec<usize> = set.subject_trials(0).iter().map(|t| t.label).collect();
    let block = block_len(&labels, 8, 2).unwrap();
    let a = run_scenario_on(&set, &cfg).unwrap().avg();
    // flipping only the test part must not touch the fitted model
    let b = run_scenario_on(&flip_labels(&set, 0, block), &cfg).unwrap().avg();
    assert!((a + b - 100.0).abs() < 1e-9);
}

#[test]
fn symm_hurts_cross_subject_transfer() {
    let mut base = 0.0;
    let mut mirrored = 0.0;
    for seed in 0..3 {
        let set = small_set(70 + seed);
        let cfg = ScenarioConfig {
            repeats: 1,
            seed,
            ..ScenarioConfig::new(ScenarioKind::CrossUnsupervised)
        };
        base += run_scenario_on(&set, &cfg).unwrap().avg();
        let symm = ScenarioConfig {
            chain: "symm".parse().unwrap(),
            ..cfg
        };
        mirrored += run_scenario_on(&set, &symm).unwrap().avg();
    }
    println!("cross-unsup: none {:.2}, symm {:.2}", base / 3.0, mirrored / 3.0);
    assert!(mirrored <= base);
}
