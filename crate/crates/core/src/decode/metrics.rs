use std::collections::BTreeMap;

use crate::error::{Error, Result};

fn check(preds: &[usize], labels: &[usize]) -> Result<()> {
    if preds.is_empty() {
        return Err(Error::Empty);
    }
    if preds.len() != labels.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} predictions", labels.len()),
            got: format!("{}", preds.len()),
        });
    }
    Ok(())
}

/// Percentage of correct predictions.
pub fn accuracy(preds: &[usize], labels: &[usize]) -> Result<f64> {
    check(preds, labels)?;
    let hits = preds.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(100.0 * hits as f64 / labels.len() as f64)
}

/// Balanced accuracy: mean per-class recall over the classes present in `labels`, in percent.
pub fn bca(preds: &[usize], labels: &[usize]) -> Result<f64> {
    check(preds, labels)?;
    let mut per_class: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (&p, &l) in preds.iter().zip(labels) {
        let e = per_class.entry(l).or_default();
        e.1 += 1;
        if p == l {
            e.0 += 1;
        }
    }
    Ok(mean_recall_percent(&per_class))
}

/// `100 * mean(hit / n)` over classes. Summed over a common denominator when
/// it fits, so balanced label sets give exactly the accuracy expression.
fn mean_recall_percent(per_class: &BTreeMap<usize, (usize, usize)>) -> f64 {
    let k = per_class.len() as u128;
    let lcm = per_class
        .values()
        .try_fold(1u128, |acc, &(_, n)| acc.checked_mul(n as u128 / gcd(acc, n as u128)));
    if let Some(l) = lcm.and_then(|l| l.checked_mul(k).map(|d| (l, d))) {
        let (l, denom) = l;
        let num: Option<u128> = per_class
            .values()
            .try_fold(0u128, |s, &(hit, n)| s.checked_add(hit as u128 * (l / n as u128)));
        if let Some(num) = num {
            return 100.0 * num as f64 / denom as f64;
        }
    }
    100.0 * per_class.values().map(|&(hit, n)| hit as f64 / n as f64).sum::<f64>() / k as f64
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
