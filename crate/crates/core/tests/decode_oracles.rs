use eegcr::augment::cr;
use eegcr::decode::{accuracy, bca, csp_from_covariances, lda_fit, CspLda};
use eegcr::harness::{run_scenario_on, ScenarioConfig, ScenarioKind};
use eegcr::synth::{synth_mi, SynthSpec};
use eegcr::{Paradigm, TrialSet64};
use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_spd(rng: &mut ChaCha8Rng, c: usize) -> Array2<f64> {
    let a = Array2::from_shape_fn((c, c), |_| rng.sample::<f64, _>(StandardNormal));
    a.dot(&a.t()) + Array2::<f64>::eye(c) * 0.1
}

#[test]
fn lda_predictions_survive_feature_rescaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let feats: Vec<Array1<f64>> = (0..40)
        .map(|i| {
            let shift = if i % 2 == 0 { -0.7 } else { 0.7 };
            Array1::from_shape_fn(3, |_| shift + rng.sample::<f64, _>(StandardNormal))
        })
        .collect();
    let labels: Vec<usize> = (0..40).map(|i| i % 2).collect();
    let probes: Vec<Array1<f64>> = (0..50)
        .map(|_| Array1::from_shape_fn(3, |_| rng.sample::<f64, _>(StandardNormal)))
        .collect();
    let base = lda_fit(&feats, &labels).unwrap();
    for s in [0.01, 3.0, 250.0] {
        let scaled: Vec<Array1<f64>> = feats.iter().map(|f| f * s).collect();
        let model = lda_fit(&scaled, &labels).unwrap();
        for p in &probes {
            assert_eq!(model.predict(&(p * s)), base.predict(p));
        }
    }
}

fn two_subject_set(seed: u64, trials_per_class: usize) -> TrialSet64 {
    let spec = SynthSpec {
        subjects: 2,
        trials_per_class,
        ..SynthSpec::mi_default(seed)
    };
    synth_mi(&spec).unwrap()
}

#[test]
fn end_to_end_accuracy_with_45_trials_per_class() {
    let set = two_subject_set(21, 90);
    let cfg = ScenarioConfig {
        n_labeled_per_class: 45,
        repeats: 1,
        ..ScenarioConfig::new(ScenarioKind::Within)
    };
    let table = run_scenario_on(&set, &cfg).unwrap();
    println!("within-subject accuracy, 45 labeled/class: {:.2}", table.avg());
    assert!(table.avg() >= 85.0, "{}", table.avg());
}

#[test]
fn reflected_left_trials_are_read_as_right() {
    let set = two_subject_set(22, 200);
    let trials = set.subject_trials(0);
    let (train, test) = trials.split_at(300);
    let model = CspLda::fit(train, 10).unwrap();
    let left: Vec<_> = test.iter().filter(|t| t.label == 0).collect();
    let hits = left
        .iter()
        .map(|t| cr(t, set.montage(), Paradigm::MiLr, 2).unwrap())
        .filter(|m| model.predict(m).unwrap() == 1)
        .count();
    let rate = hits as f64 / left.len() as f64;
    println!("cr(left) classified right: {rate:.3} of {}", left.len());
    assert!(rate >= 0.9, "{rate}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn csp_whitens_composite(seed in any::<u64>(), c in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s0 = random_spd(&mut rng, c);
        let s1 = random_spd(&mut rng, c);
        let f = c - c % 2;
        let m = csp_from_covariances(&s0, &s1, f, [0, 1]).unwrap();
        let w = m.filters();
        let g = w.t().dot(&(&s0 + &s1)).dot(w);
        for i in 0..f {
            for j in 0..f {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g[[i, j]] - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn bca_equals_accuracy_when_balanced(preds in prop::collection::vec(0usize..2, 20), half in 1usize..10) {
        let labels: Vec<usize> = (0..2 * half).map(|i| i % 2).collect();
        let preds = &preds[..2 * half];
        prop_assert_eq!(bca(preds, &labels).unwrap(), accuracy(preds, &labels).unwrap());
    }
}
