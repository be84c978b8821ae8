use crate::data::Trial;
use crate::error::{Error, Result};

/// Length of the shortest chronological prefix holding at least `n` trials of
/// every class in `0..class_count`, or the first class that never reaches `n`.
pub fn block_len(labels: &[usize], n: usize, class_count: usize) -> std::result::Result<usize, usize> {
    if n == 0 {
        return Ok(0);
    }
    let mut seen = vec![0usize; class_count];
    let mut short = class_count;
    for (i, &y) in labels.iter().enumerate() {
        if y < class_count {
            seen[y] += 1;
            if seen[y] == n {
                short -= 1;
                if short == 0 {
                    return Ok(i + 1);
                }
            }
        }
    }
    Err(seen.iter().position(|&k| k < n).unwrap_or(0))
}

/// Splits one subject's chronologically ordered trials into a labeled
/// calibration block and the remaining test trials.
pub fn split_continuous_block<T: Clone>(
    trials: &[Trial<T>],
    n_per_class: usize,
    class_count: usize,
) -> Result<(Vec<Trial<T>>, Vec<Trial<T>>)> {
    let labels: Vec<usize> = trials.iter().map(|t| t.label).collect();
    match block_len(&labels, n_per_class, class_count) {
        Ok(k) => Ok((trials[..k].to_vec(), trials[k..].to_vec())),
        Err(class) => Err(Error::InsufficientTrials {
            subject: trials.first().map_or(0, |t| t.subject),
            class,
            need: n_per_class,
        }),
    }
}
