//! Patient line-list rows and their CSV reader.

use serde::Serialize;
use tracing::warn;

use super::TextError;

pub const MAX_AGE: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sex {
    Male,
    Female,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Died,
    ActiveOrRecovered,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatientRecord {
    pub id: String,
    pub age: Option<f64>,
    pub sex: Option<Sex>,
    pub symptom_text: Option<String>,
    pub chronic_disease: Option<bool>,
    pub outcome: Option<Outcome>,
}

/// A field that could not be read. The field is left absent on the record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowIssue {
    /// 1-based data row number (the header is row 0).
    pub row: usize,
    pub column: &'static str,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineList {
    pub records: Vec<PatientRecord>,
    pub issues: Vec<RowIssue>,
}

const COLUMNS: [&str; 6] = [
    "id",
    "age",
    "sex",
    "symptoms",
    "chronic_disease_binary",
    "outcome",
];

/// Reads an nCoV2019-style line list. Columns are looked up by header name.
/// Unreadable fields become absent and are listed in `issues`; in strict
/// mode the first one is an error instead.
pub fn parse_line_list(text: &str, strict: bool) -> Result<LineList, TextError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| TextError::Csv(e.to_string()))?
        .clone();
    let mut index = [0usize; 6];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| TextError::MissingColumn(name.to_owned()))?;
    }

    let mut records = Vec::new();
    let mut issues = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| TextError::Row {
            row: row_no,
            message: e.to_string(),
        })?;
        let field = |k: usize| row.get(index[k]).map(str::trim).unwrap_or("");
        let mut issue = |column: &'static str, value: &str| -> Result<(), TextError> {
            if strict {
                return Err(TextError::Row {
                    row: row_no,
                    message: format!("unreadable {column} `{value}`"),
                });
            }
            warn!(row = row_no, column, value, "line-list field ignored");
            issues.push(RowIssue {
                row: row_no,
                column,
                value: value.to_owned(),
            });
            Ok(())
        };

        let age = match field(1) {
            "" => None,
            raw => match parse_age(raw) {
                Some(a) => Some(a),
                None => {
                    issue("age", raw)?;
                    None
                }
            },
        };
        let sex = match field(2).to_ascii_lowercase().as_str() {
            "" => None,
            "male" | "m" => Some(Sex::Male),
            "female" | "f" => Some(Sex::Female),
            _ => {
                issue("sex", field(2))?;
                None
            }
        };
        let chronic = match field(4).to_ascii_lowercase().as_str() {
            "" => None,
            "1" | "true" | "yes" => Some(true),
            "0" | "false" | "no" => Some(false),
            _ => {
                issue("chronic_disease_binary", field(4))?;
                None
            }
        };
        let outcome = match field(5) {
            "" => None,
            raw => match parse_outcome(raw) {
                Some(o) => Some(o),
                None => {
                    issue("outcome", raw)?;
                    None
                }
            },
        };
        let text = field(3);
        records.push(PatientRecord {
            id: field(0).to_owned(),
            age,
            sex,
            symptom_text: (!text.is_empty()).then(|| text.to_owned()),
            chronic_disease: chronic,
            outcome,
        });
    }
    Ok(LineList { records, issues })
}

/// Plain numbers, or a range such as "40-49" read as its midpoint.
fn parse_age(raw: &str) -> Option<f64> {
    let value = match raw.split_once('-') {
        Some((lo, hi)) => {
            let (lo, hi) = (
                lo.trim().parse::<f64>().ok()?,
                hi.trim().parse::<f64>().ok()?,
            );
            (lo + hi) / 2.0
        }
        None => raw.parse::<f64>().ok()?,
    };
    (value.is_finite() && (0.0..=MAX_AGE).contains(&value)).then_some(value)
}

fn parse_outcome(raw: &str) -> Option<Outcome> {
    let lower = raw.to_ascii_lowercase();
    match lower.as_str() {
        "died" | "death" | "dead" | "deceased" => Some(Outcome::Died),
        "recovered" | "discharged" | "discharge" | "alive" | "stable" | "active" | "released"
        | "recovering" | "hospitalized" | "under treatment" => Some(Outcome::ActiveOrRecovered),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "id,age,sex,symptoms,chronic_disease_binary,outcome\n";

    #[test]
    fn reads_complete_and_partial_rows() {
        let text = format!(
            "{HEADER}1,70,female,\"fever, cough\",1,died\n2,,male,,0,discharged\n3,40-49,,fatigue,,\n"
        );
        let ll = parse_line_list(&text, true).unwrap();
        assert_eq!(ll.records.len(), 3);
        let r = &ll.records[0];
        assert_eq!(r.age, Some(70.0));
        assert_eq!(r.sex, Some(Sex::Female));
        assert_eq!(r.symptom_text.as_deref(), Some("fever, cough"));
        assert_eq!(r.chronic_disease, Some(true));
        assert_eq!(r.outcome, Some(Outcome::Died));
        assert_eq!(ll.records[1].age, None);
        assert_eq!(ll.records[1].symptom_text, None);
        assert_eq!(ll.records[1].outcome, Some(Outcome::ActiveOrRecovered));
        assert_eq!(ll.records[2].age, Some(44.5));
        assert!(ll.issues.is_empty());
    }

    #[test]
    fn lenient_records_issues_and_strict_errors() {
        let text = format!("{HEADER}1,200,x,cough,maybe,unknown\n");
        let ll = parse_line_list(&text, false).unwrap();
        assert_eq!(ll.issues.len(), 4);
        assert_eq!(ll.records[0].age, None);
        assert!(matches!(
            parse_line_list(&text, true),
            Err(TextError::Row { row: 1, .. })
        ));
    }

    #[test]
    fn missing_column_is_an_error() {
        assert_eq!(
            parse_line_list("id,age,sex\n", false),
            Err(TextError::MissingColumn("symptoms".into()))
        );
    }
}
