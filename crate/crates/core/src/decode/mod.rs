//! CSP spatial filtering, LDA classification, and scoring.

mod csp;
mod lda;
mod metrics;

use std::io::Write;

use ndarray::Array1;

pub use csp::{csp_fit, csp_from_covariances, effective_filter_count, CspModel, CSP_SHRINKAGE};
pub use lda::{lda_fit, LdaModel, LDA_SHRINKAGE};
pub use metrics::{accuracy, bca};

use crate::data::Trial;
use crate::error::Result;
use crate::scalar::Scalar;

/// Default number of CSP filters.
pub const DEFAULT_FILTERS: usize = 10;

/// CSP features feeding an LDA classifier.
#[derive(Debug, Clone)]
pub struct CspLda<T> {
    pub csp: CspModel<T>,
    pub lda: LdaModel<T>,
}

impl<T: Scalar> CspLda<T> {
    pub fn fit(trials: &[Trial<T>], n_filters: usize) -> Result<Self> {
        let csp = csp_fit(trials, n_filters)?;
        let feats: Vec<Array1<T>> = trials
            .iter()
            .map(|t| csp.features(t))
            .collect::<Result<_>>()?;
        let labels: Vec<usize> = trials.iter().map(|t| t.label).collect();
        let lda = lda_fit(&feats, &labels)?;
        Ok(Self { csp, lda })
    }

    pub fn predict(&self, trial: &Trial<T>) -> Result<usize> {
        Ok(self.lda.predict(&self.csp.features(trial)?))
    }
}

/// Writes `subject,label,f1..fF` rows, one per trial.
pub fn write_features_csv<T: Scalar, W: Write>(
    out: &mut W,
    model: &CspModel<T>,
    trials: &[Trial<T>],
) -> Result<()> {
    let header: Vec<String> = (1..=model.n_filters()).map(|k| format!("f{k}")).collect();
    writeln!(out, "subject,label,{}", header.join(","))?;
    for t in trials {
        let f = model.features(t)?;
        let cols: Vec<String> = f.iter().map(|v| format!("{}", v.as_f64())).collect();
        writeln!(out, "{},{},{}", t.subject, t.label, cols.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    #[test]
    fn feature_csv_layout() {
        let s0 = array![[2.0f64, 0.0], [0.0, 1.0]];
        let s1 = array![[1.0f64, 0.0], [0.0, 2.0]];
        let m = csp_from_covariances(&s0, &s1, 2, [0, 1]).unwrap();
        let t = Trial::new(Array2::from_shape_fn((2, 8), |(i, j)| ((i + 1) * j) as f64 - 3.0), 1.0, 1, 4);
        let mut buf = Vec::new();
        write_features_csv(&mut buf, &m, &[t.clone(), t]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "subject,label,f1,f2");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("4,1,"));
        assert_eq!(lines[1].split(',').count(), 4);
    }
}
