//! Symptom text mining: normalization, n-gram inventories, dictionary
//! matching into binary indicators, and 0–10 prevalence scores.

mod dictionary;
mod records;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

pub use dictionary::{SymptomDictionary, SymptomEntry, MAX_PHRASE_WORDS};
pub use records::{parse_line_list, LineList, Outcome, PatientRecord, RowIssue, Sex, MAX_AGE};

#[derive(Debug, Error, PartialEq)]
pub enum TextError {
    #[error("n-gram length must be at least 1")]
    InvalidN,
    #[error("dictionary is not valid TOML: {0}")]
    DictionaryFormat(String),
    #[error("symptom `{0}` has an empty phrase")]
    EmptyPhrase(String),
    #[error("phrase `{phrase}` has more than {MAX_PHRASE_WORDS} words")]
    PhraseTooLong { phrase: String },
    #[error("phrase `{phrase}` appears under both `{first}` and `{second}`")]
    DuplicatePhrase {
        phrase: String,
        first: String,
        second: String,
    },
    #[error("symptom `{0}` is listed twice")]
    DuplicateSymptom(String),
    #[error("unknown symptom `{0}`")]
    UnknownSymptom(String),
    #[error("min-max scaling needs at least 2 symptoms, got {0}")]
    TooFewSymptoms(usize),
    #[error("line list is missing the `{0}` column")]
    MissingColumn(String),
    #[error("line list row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("line list is not valid CSV: {0}")]
    Csv(String),
}

/// Lowercases, turns every non-alphanumeric character into a space and
/// collapses runs of whitespace. Idempotent.
pub fn normalize(text: &str) -> String {
    let mapped: String = text
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    mapped.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Normalized whitespace tokens.
pub fn tokens(text: &str) -> Vec<String> {
    normalize(text)
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Overlapping n-grams of the normalized text, joined with single spaces.
pub fn tokenize_ngrams(text: &str, n: usize) -> Result<Vec<String>, TextError> {
    if n == 0 {
        return Err(TextError::InvalidN);
    }
    let toks = tokens(text);
    Ok(toks.windows(n).map(|w| w.join(" ")).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NgramCount {
    pub n: usize,
    pub gram: String,
    pub count: usize,
}

/// Counts every n-gram for n = 1..=n_max over the corpus, sorted by count
/// descending and then by gram.
pub fn ngram_frequencies<S: AsRef<str>>(
    corpus: &[S],
    n_max: usize,
) -> Result<Vec<NgramCount>, TextError> {
    if n_max == 0 {
        return Err(TextError::InvalidN);
    }
    let mut counts: HashMap<(usize, String), usize> = HashMap::new();
    for doc in corpus {
        let toks = tokens(doc.as_ref());
        for n in 1..=n_max {
            for w in toks.windows(n) {
                *counts.entry((n, w.join(" "))).or_default() += 1;
            }
        }
    }
    let mut table: Vec<NgramCount> = counts
        .into_iter()
        .map(|((n, gram), count)| NgramCount { n, gram, count })
        .collect();
    table.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.gram.cmp(&b.gram)));
    Ok(table)
}

/// Indicator row for one text: entry i is 1 iff some phrase of symptom i
/// occurs at token boundaries.
pub fn match_symptoms(text: &str, dictionary: &SymptomDictionary) -> Vec<u8> {
    let toks = tokens(text);
    dictionary
        .entries()
        .iter()
        .map(|e| u8::from(e.phrase_tokens().any(|p| contains_run(&toks, p))))
        .collect()
}

fn contains_run(haystack: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// What to do with a record whose symptom text is absent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AbsentTextPolicy {
    /// Leave the record out: no notes is not the same as no symptoms.
    #[default]
    Exclude,
    IncludeAsZeros,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorMatrix {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<u8>>,
    /// Index into the input records for each row.
    pub record_index: Vec<usize>,
}

impl IndicatorMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.columns.len()];
        for row in &self.rows {
            for (s, &v) in sums.iter_mut().zip(row) {
                *s += u64::from(v);
            }
        }
        sums
    }

    /// Row for a given record, if that record was included.
    pub fn row_for_record(&self, record: usize) -> Option<&[u8]> {
        self.record_index
            .iter()
            .position(|&r| r == record)
            .map(|i| self.rows[i].as_slice())
    }
}

pub fn build_indicator_matrix(
    records: &[PatientRecord],
    dictionary: &SymptomDictionary,
    policy: AbsentTextPolicy,
) -> IndicatorMatrix {
    let mut rows = Vec::new();
    let mut record_index = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        match (&rec.symptom_text, policy) {
            (Some(text), _) => rows.push(match_symptoms(text, dictionary)),
            (None, AbsentTextPolicy::IncludeAsZeros) => rows.push(vec![0; dictionary.len()]),
            (None, AbsentTextPolicy::Exclude) => continue,
        }
        record_index.push(i);
    }
    IndicatorMatrix {
        columns: dictionary.names(),
        rows,
        record_index,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaledScores {
    pub scores: Vec<f64>,
    /// Set when every sum was equal and the scores are all zero.
    pub degenerate: bool,
}

/// Rescales sums onto [0, 10] with (s − min) / (max − min) · 10.
pub fn minmax_scale(sums: &[f64]) -> Result<ScaledScores, TextError> {
    if sums.len() < 2 {
        return Err(TextError::TooFewSymptoms(sums.len()));
    }
    let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return Ok(ScaledScores {
            scores: vec![0.0; sums.len()],
            degenerate: true,
        });
    }
    let range = max - min;
    let scores = sums
        .iter()
        .map(|s| ((s - min) / range * 10.0).clamp(0.0, 10.0))
        .collect();
    Ok(ScaledScores {
        scores,
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrevalenceRow {
    pub symptom: String,
    pub raw_count: u64,
    pub score_0_10: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prevalence {
    pub rows: Vec<PrevalenceRow>,
    pub degenerate: bool,
}

/// Column sums of the matrix with their min-max scores, in column order.
pub fn prevalence(matrix: &IndicatorMatrix) -> Result<Prevalence, TextError> {
    let sums = matrix.column_sums();
    let as_f: Vec<f64> = sums.iter().map(|&s| s as f64).collect();
    let scaled = minmax_scale(&as_f)?;
    let rows = matrix
        .columns
        .iter()
        .zip(sums)
        .zip(scaled.scores)
        .map(|((symptom, raw_count), score_0_10)| PrevalenceRow {
            symptom: symptom.clone(),
            raw_count,
            score_0_10,
        })
        .collect();
    Ok(Prevalence {
        rows,
        degenerate: scaled.degenerate,
    })
}

/// An n-gram from the corpus with whether the dictionary already has it as
/// a phrase. Meant for people curating the dictionary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub n: usize,
    pub gram: String,
    pub count: usize,
    pub in_dictionary: bool,
}

pub fn candidate_report(
    freqs: &[NgramCount],
    dictionary: &SymptomDictionary,
    min_count: usize,
) -> Vec<Candidate> {
    freqs
        .iter()
        .filter(|f| f.count >= min_count)
        .map(|f| Candidate {
            n: f.n,
            gram: f.gram.clone(),
            count: f.count,
            in_dictionary: dictionary.symptom_of(&f.gram).is_some(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_strips_temperature_marks() {
        assert_eq!(
            normalize("Moderate fever 38.5°C, cough"),
            "moderate fever 38 5 c cough"
        );
        assert_eq!(normalize("  A\tB  "), "a b");
        assert_eq!(normalize(""), "");
    }

    #[test]
    fn ngrams_of_short_text() {
        assert!(tokenize_ngrams("fever", 2).unwrap().is_empty());
        assert_eq!(tokenize_ngrams("", 1).unwrap(), Vec::<String>::new());
        assert_eq!(tokenize_ngrams("x", 0), Err(TextError::InvalidN));
    }

    #[test]
    fn frequency_example() {
        let t = ngram_frequencies(&["fever, cough", "fever"], 1).unwrap();
        assert_eq!(
            t[0],
            NgramCount {
                n: 1,
                gram: "fever".into(),
                count: 2
            }
        );
        assert_eq!(
            t[1],
            NgramCount {
                n: 1,
                gram: "cough".into(),
                count: 1
            }
        );
        assert!(ngram_frequencies::<&str>(&[], 4).unwrap().is_empty());
    }

    #[test]
    fn minmax_examples() {
        let s = minmax_scale(&[5.0, 10.0, 20.0]).unwrap();
        assert_eq!(s.scores[0], 0.0);
        assert!((s.scores[1] - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.scores[2], 10.0);
        let flat = minmax_scale(&[3.0, 3.0, 3.0]).unwrap();
        assert!(flat.degenerate && flat.scores.iter().all(|&v| v == 0.0));
        assert_eq!(minmax_scale(&[1.0]), Err(TextError::TooFewSymptoms(1)));
    }
}
