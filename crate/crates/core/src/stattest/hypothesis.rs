use serde::Serialize;

use super::{DegreesOfFreedom, Distribution, Sidedness, StatError, TestResult};

/// Size, mean and unbiased (n − 1) variance of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
}

impl SampleSummary {
    pub fn from_sample(xs: &[f64]) -> Result<Self, StatError> {
        if xs.len() < 2 {
            return Err(StatError::TooFewObservations {
                needed: 2,
                got: xs.len(),
            });
        }
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(StatError::InvalidParameter(
                "sample contains non-finite values".into(),
            ));
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Ok(Self {
            n: xs.len(),
            mean,
            variance,
        })
    }
}

/// F-test for equality of variances, F = S_X² / S_Y² on (n − 1, m − 1) df.
/// The p-value is two-sided: twice the smaller tail.
pub fn f_test_variance(x: &[f64], y: &[f64]) -> Result<TestResult, StatError> {
    let sx = SampleSummary::from_sample(x)?;
    let sy = SampleSummary::from_sample(y)?;
    if sx.variance == 0.0 || sy.variance == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    let f = sx.variance / sy.variance;
    let dist = Distribution::F {
        df1: (sx.n - 1) as f64,
        df2: (sy.n - 1) as f64,
    };
    let lower = dist.cdf(f)?;
    let upper = dist.sf(f)?;
    let p = (2.0 * lower.min(upper)).min(1.0);
    Ok(TestResult::new(
        "f_test_variance",
        f,
        DegreesOfFreedom::Pair((sx.n - 1) as f64, (sy.n - 1) as f64),
        p,
        Sidedness::TwoSided,
    ))
}

/// Two-sample t-test with unpooled variances and Welch–Satterthwaite df.
pub fn welch_t_test(x: &[f64], y: &[f64]) -> Result<TestResult, StatError> {
    let sx = SampleSummary::from_sample(x)?;
    let sy = SampleSummary::from_sample(y)?;
    let vx = sx.variance / sx.n as f64;
    let vy = sy.variance / sy.n as f64;
    let se2 = vx + vy;
    if se2 == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    let t = (sx.mean - sy.mean) / se2.sqrt();
    let df = se2 * se2 / (vx * vx / (sx.n - 1) as f64 + vy * vy / (sy.n - 1) as f64);
    let p = 2.0 * Distribution::StudentT { df }.sf(t.abs())?;
    Ok(TestResult::new(
        "welch_t_test",
        t,
        DegreesOfFreedom::Single(df),
        p,
        Sidedness::TwoSided,
    ))
}

/// An r × c table of observed counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(counts: Vec<Vec<u64>>) -> Result<Self, StatError> {
        let cols = counts.first().map_or(0, Vec::len);
        if counts.len() < 2 || cols < 2 {
            return Err(StatError::InvalidParameter(
                "table must be at least 2x2".into(),
            ));
        }
        if counts.iter().any(|r| r.len() != cols) {
            return Err(StatError::RaggedTable);
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let cols = self.counts[0].len();
        (0..cols)
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.row_sums().iter().sum()
    }

    /// E_ij = R_i · C_j / n.
    pub fn expected(&self) -> Vec<Vec<f64>> {
        let n = self.total() as f64;
        let cs = self.col_sums();
        self.row_sums()
            .iter()
            .map(|&r| cs.iter().map(|&c| r as f64 * c as f64 / n).collect())
            .collect()
    }
}

/// Pearson chi-square test of independence, without continuity correction.
pub fn chi_square_independence(table: &ContingencyTable) -> Result<TestResult, StatError> {
    let rows = table.row_sums();
    let cols = table.col_sums();
    if rows.iter().chain(&cols).any(|&s| s == 0) {
        return Err(StatError::ZeroMarginal);
    }
    let expected = table.expected();
    let statistic: f64 = table
        .counts()
        .iter()
        .zip(&expected)
        .flat_map(|(o_row, e_row)| o_row.iter().zip(e_row))
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    let df = ((rows.len() - 1) * (cols.len() - 1)) as f64;
    let p = Distribution::ChiSquare { df }.sf(statistic)?;
    Ok(TestResult::new(
        "chi_square_independence",
        statistic,
        DegreesOfFreedom::Single(df),
        p,
        Sidedness::UpperTail,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_give_unit_f_and_zero_t() {
        let x = [3.0, 5.0, 4.0, 8.0, 1.0];
        let f = f_test_variance(&x, &x).unwrap();
        assert_eq!(f.statistic, 1.0);
        assert!((f.p_value - 1.0).abs() < 1e-12);
        let t = welch_t_test(&x, &x).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert!((t.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn welch_df_collapses_for_equal_n_and_variance() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [11.0, 12.0, 13.0, 14.0];
        let t = welch_t_test(&x, &y).unwrap();
        assert_eq!(t.df, DegreesOfFreedom::Single(6.0));
    }

    #[test]
    fn zero_variance_is_an_error() {
        assert_eq!(
            f_test_variance(&[2.0, 2.0], &[1.0, 3.0]),
            Err(StatError::ZeroVariance)
        );
        assert_eq!(
            welch_t_test(&[2.0, 2.0], &[5.0, 5.0]),
            Err(StatError::ZeroVariance)
        );
        assert!(matches!(
            welch_t_test(&[1.0], &[1.0, 2.0]),
            Err(StatError::TooFewObservations { .. })
        ));
    }

    #[test]
    fn gender_outcome_table() {
        let t = ContingencyTable::new(vec![vec![299, 132], vec![213, 71]]).unwrap();
        let r = chi_square_independence(&t).unwrap();
        assert!((r.statistic - 2.6657).abs() < 5e-4);
        assert!((r.p_value - 0.1025).abs() < 5e-4);
        assert_eq!(r.df, DegreesOfFreedom::Single(1.0));
        assert!(!r.reject);
    }

    #[test]
    fn proportional_rows_are_independent() {
        let t = ContingencyTable::new(vec![vec![10, 20], vec![20, 40]]).unwrap();
        let r = chi_square_independence(&t).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn zero_marginal_rejected() {
        let t = ContingencyTable::new(vec![vec![0, 0], vec![3, 4]]).unwrap();
        assert_eq!(chi_square_independence(&t), Err(StatError::ZeroMarginal));
        assert_eq!(
            ContingencyTable::new(vec![vec![1, 2], vec![3]]),
            Err(StatError::RaggedTable)
        );
    }
}
