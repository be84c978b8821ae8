//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::time::Instant;

use eegcr::align::{align_subject, ea_reference, trial_covariance};
use eegcr::augment::{augment_trainset, cr, AugmentChain, AugmentKind};
use eegcr::data::{decode_eegt, encode_eegt, read_trialset, write_trialset};
use eegcr::decode::{bca, csp_from_covariances};
use eegcr::harness::{
    render_report, run_scenario_on, split_continuous_block, ReportFormat, ScenarioConfig, ScenarioKind,
};
use eegcr::signal::{bandpass_zero_phase, freq_shift, notch, NOTCH_QUALITY};
use eegcr::synth::{synth_imbalanced, synth_mi, SynthSpec};
use eegcr::{builtin_montage, Dataset, Paradigm, Trial64, TrialSet64};
use ndarray::{array, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use common::{dft_peak_bin, interior, rms, sine};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_time(start: Instant, limit_s: f64) -> Result<String, String> {
    let t = start.elapsed().as_secs_f64();
    ensure(t < limit_s, format!("took {t:.2} s, limit {limit_s} s"))?;
    Ok(format!("{t:.2} s"))
}

fn random_trial(rng: &mut ChaCha8Rng, c: usize, t: usize, label: usize) -> Trial64 {
    let x = Array2::from_shape_fn((c, t), |_| rng.sample::<f64, _>(StandardNormal));
    Trial64::new(x, 250.0, label, 0)
}

fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn reflection_correctness() -> Outcome {
    let start = Instant::now();
    let expected_k = [8, 1, 27, 3, 2, 5, 8, 8];
    for (d, &k) in Dataset::ALL.iter().zip(&expected_k) {
        let m = builtin_montage(*d);
        ensure(m.pair_count() == k, format!("{d}: K={} expected {k}", m.pair_count()))?;
        let p = m.reflection_permutation().map_err(|e| e.to_string())?;
        ensure((0..p.len()).all(|i| p[p[i]] == i), format!("{d}: not an involution"))?;
        let fixed = (0..p.len()).filter(|&i| p[i] == i).count();
        ensure(fixed == m.len() - 2 * k, format!("{d}: {fixed} fixed points"))?;
    }
    within_time(start, 1.0)
}

fn cr_semantics() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let paradigms = [Paradigm::MiLr, Paradigm::P300, Paradigm::Ssvep, Paradigm::Seizure, Paradigm::MiOther];
    for d in Dataset::ALL {
        let m = builtin_montage(d);
        for p in paradigms {
            for label in 0..2 {
                let t = random_trial(&mut rng, m.len(), 16, label);
                let once = cr(&t, &m, p, 2).map_err(|e| e.to_string())?;
                let twice = cr(&once, &m, p, 2).map_err(|e| e.to_string())?;
                ensure(twice.samples == t.samples, format!("{d}/{p}: samples not restored"))?;
                ensure(twice.label == t.label, format!("{d}/{p}: label not restored"))?;
                let want = if p == Paradigm::MiLr { 1 - label } else { label };
                ensure(once.label == want, format!("{d}/{p}: label rule"))?;
            }
        }
    }
    let m = builtin_montage(Dataset::MiII);
    let t = Trial64::new(array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]], 250.0, 0, 0);
    let out = cr(&t, &m, Paradigm::MiLr, 2).map_err(|e| e.to_string())?;
    ensure(
        out.samples == array![[5.0, 6.0], [3.0, 4.0], [1.0, 2.0]] && out.label == 1,
        "MI-II example",
    )?;
    within_time(start, 1.0)
}

fn multiplicities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = builtin_montage(Dataset::MiII);
    let trials: Vec<Trial64> = (0..10).map(|i| random_trial(&mut rng, 3, 500, i % 2)).collect();
    let set = TrialSet64::new(m, Paradigm::MiLr, 2, trials).map_err(|e| e.to_string())?;
    let cases: Vec<(&str, usize)> = vec![
        ("noise", 2),
        ("flip", 2),
        ("symm", 2),
        ("rs", 2),
        ("cr", 2),
        ("scale", 3),
        ("freq", 3),
        ("cr+freq", 6),
    ];
    let mut sizes = Vec::new();
    for (chain, factor) in cases {
        let chain: AugmentChain = chain.parse().map_err(|e: eegcr::Error| e.to_string())?;
        let out = augment_trainset(&set, &chain, 0).map_err(|e| e.to_string())?;
        ensure(out.len() == factor * 10, format!("{chain}: {} trials", out.len()))?;
        sizes.push(format!("{chain}={}", out.len()));
    }
    let cr_only = augment_trainset(&set, &AugmentChain(vec![AugmentKind::Cr]), 0).map_err(|e| e.to_string())?;
    let flipped = cr_only.trials()[10..]
        .iter()
        .zip(set.trials())
        .all(|(c, o)| c.label == 1 - o.label);
    ensure(flipped, "cr copies must carry flipped labels")?;
    Ok(sizes.join(" "))
}

fn ea_whitening() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = 22;
    let mix = Array2::from_shape_fn((c, c), |(i, j)| {
        let z: f64 = rng.sample(StandardNormal);
        if i == j {
            1.0 + z.abs()
        } else {
            0.3 * z
        }
    });
    let trials: Vec<Trial64> = (0..500)
        .map(|_| {
            let z = Array2::from_shape_fn((c, 250), |_| rng.sample::<f64, _>(StandardNormal));
            Trial64::new(mix.dot(&z), 250.0, 0, 0)
        })
        .collect();
    let aligned = align_subject(&trials).map_err(|e| e.to_string())?;
    let mut mean = Array2::<f64>::zeros((c, c));
    for t in &aligned {
        mean += &trial_covariance(&t.samples);
    }
    mean /= aligned.len() as f64;
    let white_err = max_abs_diff(&mean, &Array2::eye(c));
    ensure(white_err < 1e-6, format!("mean covariance off identity by {white_err:e}"))?;

    let mut r = ea_reference(&trials[..200]).map_err(|e| e.to_string())?;
    for t in &trials[200..] {
        r.update(t).map_err(|e| e.to_string())?;
    }
    let batch = ea_reference(&trials).map_err(|e| e.to_string())?;
    let inc_err = max_abs_diff(r.mean(), batch.mean());
    ensure(inc_err < 1e-10, format!("incremental vs batch {inc_err:e}"))?;
    let t = within_time(start, 5.0)?;
    Ok(format!("whitening {white_err:.1e}, incremental {inc_err:.1e}, {t}"))
}

fn dsp_oracles() -> Outcome {
    let start = Instant::now();
    let fs = 250.0;
    let n = 2000;
    let x: Vec<f64> = (0..n)
        .map(|i| sine(9.0, fs, n, 0.3)[i] + sine(13.0, fs, n, 1.1)[i] + sine(23.0, fs, n, 0.7)[i])
        .collect();
    let y = bandpass_zero_phase(&x, fs, 8.0, 30.0, 4).map_err(|e| e.to_string())?;
    let xcorr = |lag: isize| -> f64 { (250..n - 250).map(|i| x[i] * y[(i as isize + lag) as usize]).sum() };
    let lag = (-25..=25).max_by(|&a, &b| xcorr(a).partial_cmp(&xcorr(b)).unwrap()).unwrap();
    ensure(lag == 0, format!("bandpass lag {lag}"))?;

    let mains = sine(50.0, 256.0, 2560, 0.4);
    let cleaned = notch(&mains, 256.0, 50.0, NOTCH_QUALITY).map_err(|e| e.to_string())?;
    let residual = rms(interior(&cleaned, 256)) / rms(interior(&mains, 256));
    ensure(residual < 0.1, format!("notch residual {residual:.3}"))?;

    let tone = sine(10.0, 256.0, 2048, 0.0);
    let bin = 256.0 / 2048.0;
    for shift in [0.2, -0.2] {
        let shifted = freq_shift(&tone, 256.0, shift).map_err(|e| e.to_string())?;
        let want = ((10.0 + shift) / bin).round() as usize;
        let got = dft_peak_bin(&shifted);
        ensure(got == want, format!("shift {shift}: peak bin {got}, expected {want}"))?;
    }
    let up = freq_shift(&tone, 256.0, 0.2).map_err(|e| e.to_string())?;
    let back = freq_shift(&up, 256.0, -0.2).map_err(|e| e.to_string())?;
    // one second of margin: truncation leakage decays like 1 / (pi * omega * d)
    let err = (256..2048 - 256).map(|i| (back[i] - tone[i]).abs()).fold(0.0, f64::max);
    ensure(err < 0.01, format!("shift/unshift error {err:.4}"))?;
    let t = within_time(start, 10.0)?;
    Ok(format!("lag 0, notch residual {residual:.1e}, round trip {err:.1e}, {t}"))
}

fn csp_lda_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for c in [2, 5, 8, 22] {
        let spd = |rng: &mut ChaCha8Rng| {
            let a = Array2::from_shape_fn((c, c), |_| rng.sample::<f64, _>(StandardNormal));
            a.dot(&a.t()) + Array2::<f64>::eye(c) * 0.1
        };
        let s0 = spd(&mut rng);
        let s1 = spd(&mut rng);
        let f = (c - c % 2).min(10);
        let m = csp_from_covariances(&s0, &s1, f, [0, 1]).map_err(|e| e.to_string())?;
        let w = m.filters();
        let g = w.t().dot(&(&s0 + &s1)).dot(w);
        worst = worst.max(max_abs_diff(&g, &Array2::eye(f)));
    }
    ensure(worst < 1e-8, format!("whitening constraint off by {worst:e}"))?;

    let toy = csp_from_covariances(&array![[2.0f64, 0.0], [0.0, 1.0]], &array![[1.0f64, 0.0], [0.0, 2.0]], 2, [0, 1])
        .map_err(|e| e.to_string())?;
    for col in toy.filters().columns() {
        let (a, b) = (col[0].abs(), col[1].abs());
        ensure(a.max(b) > 100.0 * a.min(b), "toy filters not axis aligned")?;
    }

    let spec = SynthSpec {
        montage: builtin_montage(Dataset::P300I),
        paradigm: Paradigm::P300,
        subjects: 1,
        trials_per_class: 50,
        fs: 256.0,
        trial_s: 0.5,
        ..SynthSpec::mi_default(6)
    };
    let set: TrialSet64 = synth_imbalanced(&spec, 0.1).map_err(|e| e.to_string())?;
    let labels: Vec<usize> = set.trials().iter().map(|t| t.label).collect();
    let score = bca(&vec![0; labels.len()], &labels).map_err(|e| e.to_string())?;
    ensure(score == 50.0, format!("majority BCA {score}"))?;
    Ok(format!("whitening {worst:.1e}, majority BCA 50"))
}

const BENCH_SEEDS: u64 = 20;
const BENCH_LABELED: usize = 10;

struct Benchmark {
    means: [f64; 4],
    seconds: f64,
}

/// Within-subject means over seeds for none, cr, symm, rs.
fn benchmark() -> Result<Benchmark, String> {
    let start = Instant::now();
    let methods = ["none", "cr", "symm", "rs"];
    let mut sums = [0.0; 4];
    for seed in 0..BENCH_SEEDS {
        let set: TrialSet64 = synth_mi(&SynthSpec::mi_default(seed)).map_err(|e| e.to_string())?;
        for (i, m) in methods.iter().enumerate() {
            let cfg = ScenarioConfig {
                n_labeled_per_class: BENCH_LABELED,
                chain: m.parse().map_err(|e: eegcr::Error| e.to_string())?,
                seed,
                repeats: 1,
                ..ScenarioConfig::new(ScenarioKind::Within)
            };
            sums[i] += run_scenario_on(&set, &cfg).map_err(|e| e.to_string())?.avg();
        }
    }
    Ok(Benchmark {
        means: sums.map(|s| s / BENCH_SEEDS as f64),
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn directional(bench: &Result<Benchmark, String>) -> Outcome {
    let b = bench.as_ref().map_err(Clone::clone)?;
    let [base, cr, symm, _] = b.means;
    let summary = format!("baseline {base:.2}, CR {cr:.2}, Symm {symm:.2}, {:.1} s", b.seconds);
    ensure((65.0..=80.0).contains(&base), format!("baseline outside 65-80: {summary}"))?;
    ensure(cr >= base - 1.0, format!("CR below baseline - 1: {summary}"))?;
    ensure(cr > symm + 5.0, format!("CR not 5 points above Symm: {summary}"))?;
    ensure(symm < base, format!("Symm not below baseline: {summary}"))?;
    ensure(b.seconds < 300.0, format!("too slow: {summary}"))?;
    Ok(summary)
}

fn rs_ablation(bench: &Result<Benchmark, String>) -> Outcome {
    let b = bench.as_ref().map_err(Clone::clone)?;
    let [_, cr, _, rs] = b.means;
    ensure(cr >= rs, format!("CR {cr:.2} < RS {rs:.2}"))?;
    Ok(format!("CR {cr:.2}, RS {rs:.2}"))
}

/// Minimal prefix length with at least `n` of each class, by trying every length.
fn brute_force_block(labels: &[usize], n: usize) -> Option<usize> {
    (0..=labels.len()).find(|&k| (0..2).all(|c| labels[..k].iter().filter(|&&y| y == c).count() >= n))
}

fn split_rule() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    for len in 0..=10 {
        for bits in 0u32..(1 << len) {
            let labels: Vec<usize> = (0..len).map(|i| ((bits >> i) & 1) as usize).collect();
            let trials: Vec<Trial64> = labels
                .iter()
                .enumerate()
                .map(|(i, &y)| Trial64::new(Array2::from_elem((1, 1), i as f64), 1.0, y, 0))
                .collect();
            for n in 0..=6 {
                checked += 1;
                match (split_continuous_block(&trials, n, 2), brute_force_block(&labels, n)) {
                    (Ok((train, test)), Some(k)) => {
                        ensure(train.len() == k, format!("{labels:?} n={n}: train {} vs {k}", train.len()))?;
                        let order: Vec<f64> = train.iter().chain(&test).map(|t| t.samples[[0, 0]]).collect();
                        let want: Vec<f64> = (0..len).map(|i| i as f64).collect();
                        ensure(order == want, format!("{labels:?} n={n}: not a prefix/complement"))?;
                    }
                    (Err(_), None) => {}
                    (got, want) => {
                        return Err(format!("{labels:?} n={n}: got {:?}, brute force {want:?}", got.map(|(a, _)| a.len())))
                    }
                }
            }
        }
    }
    let t = within_time(start, 10.0)?;
    Ok(format!("{checked} cases, {t}"))
}

fn format_stability() -> Outcome {
    let spec = SynthSpec {
        subjects: 3,
        trials_per_class: 10,
        trial_s: 1.0,
        ..SynthSpec::mi_default(10)
    };
    let set: TrialSet64 = synth_mi(&spec).map_err(|e| e.to_string())?;
    let bytes = encode_eegt(&set);
    let back: TrialSet64 = decode_eegt(&bytes, set.montage().clone()).map_err(|e| e.to_string())?;
    ensure(encode_eegt(&back) == bytes, "in-memory round trip changed bytes")?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("set.eegt");
    write_trialset(&set, &path).map_err(|e| e.to_string())?;
    let from_disk: TrialSet64 = read_trialset(&path).map_err(|e| e.to_string())?;
    ensure(encode_eegt(&from_disk) == bytes, "file round trip changed bytes")?;

    let cfg = ScenarioConfig {
        n_labeled_per_class: 3,
        chain: "noise+rs".parse().map_err(|e: eegcr::Error| e.to_string())?,
        seed: 5,
        repeats: 2,
        ..ScenarioConfig::new(ScenarioKind::Within)
    };
    let render = || -> Result<String, String> {
        let table = run_scenario_on(&set, &cfg).map_err(|e| e.to_string())?;
        render_report(&[table], ReportFormat::Markdown).map_err(|e| e.to_string())
    };
    let (a, b) = (render()?, render()?);
    ensure(a == b, "report differs between identical runs")?;
    Ok(format!("{} EEGT bytes, {} report bytes", bytes.len(), a.len()))
}

fn main() {
    let bench = benchmark();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 reflection correctness", reflection_correctness()),
        ("2 CR semantics", cr_semantics()),
        ("3 multiplicities", multiplicities()),
        ("4 EA whitening", ea_whitening()),
        ("5 DSP oracles", dsp_oracles()),
        ("6 CSP/LDA oracles", csp_lda_oracles()),
        ("7 directional reproduction", directional(&bench)),
        ("8 RS ablation", rs_ablation(&bench)),
        ("9 split rule", split_rule()),
        ("10 format stability", format_stability()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
