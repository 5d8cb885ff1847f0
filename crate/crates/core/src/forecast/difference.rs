use super::ForecastError;

/// d-fold first difference. The output is `d` elements shorter.
pub fn difference(values: &[f64], d: usize) -> Result<Vec<f64>, ForecastError> {
    if values.len() <= d {
        return Err(ForecastError::TooShort {
            needed: d + 1,
            got: values.len(),
        });
    }
    let mut out = values.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(out)
}

/// Inverse of [`difference`]: rebuilds the values that follow
/// `initial_values`, which must be the `d` originals immediately preceding
/// the differenced segment (oldest first).
pub fn undifference(diffed: &[f64], initial_values: &[f64]) -> Result<Vec<f64>, ForecastError> {
    let d = initial_values.len();
    // last value of each intermediate difference level 0..d
    let anchors: Vec<f64> = (0..d)
        .map(|k| {
            let level = difference(initial_values, k).expect("k < d");
            *level.last().expect("non-empty level")
        })
        .collect();
    let mut out = diffed.to_vec();
    for &anchor in anchors.iter().rev() {
        let mut acc = anchor;
        for v in out.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }
    Ok(out)
}
