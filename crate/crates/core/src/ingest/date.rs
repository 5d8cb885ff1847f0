use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, FixedOffset, NaiveDate, Utc};
use serde::{Serialize, Serializer};

use super::IngestError;

/// Offset used to decide "today" for report filenames (Pacific Standard
/// Time).
pub const DEFAULT_UTC_OFFSET_HOURS: i32 = -8;

/// Calendar date of a daily report; formats as MM-DD-YYYY.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReportDate(NaiveDate);

impl ReportDate {
    pub fn new(year: i32, month: u32, day: u32) -> Result<Self, IngestError> {
        NaiveDate::from_ymd_opt(year, month, day)
            .map(Self)
            .ok_or(IngestError::InvalidDate { year, month, day })
    }

    pub fn year(&self) -> i32 {
        self.0.year()
    }

    pub fn month(&self) -> u32 {
        self.0.month()
    }

    pub fn day(&self) -> u32 {
        self.0.day()
    }

    pub fn as_naive(&self) -> NaiveDate {
        self.0
    }

    pub fn pred(&self) -> Option<Self> {
        self.0.pred_opt().map(Self)
    }

    /// `MM-DD-YYYY.csv`
    pub fn filename(&self) -> String {
        format!("{self}.csv")
    }
}

impl From<NaiveDate> for ReportDate {
    fn from(d: NaiveDate) -> Self {
        Self(d)
    }
}

impl fmt::Display for ReportDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:02}-{:02}-{:04}",
            self.month(),
            self.day(),
            self.year()
        )
    }
}

impl FromStr for ReportDate {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IngestError::DateFormat(s.to_owned());
        let mut parts = s.split('-');
        let (Some(m), Some(d), Some(y), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        if m.len() != 2 || d.len() != 2 || y.len() != 4 {
            return Err(bad());
        }
        let (m, d, y) = (
            m.parse().map_err(|_| bad())?,
            d.parse().map_err(|_| bad())?,
            y.parse().map_err(|_| bad())?,
        );
        Self::new(y, m, d)
    }
}

impl Serialize for ReportDate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Report date of an instant as seen at a fixed UTC offset.
pub fn report_date_at(instant: DateTime<Utc>, utc_offset_hours: i32) -> ReportDate {
    let offset = FixedOffset::east_opt(utc_offset_hours * 3600)
        .unwrap_or_else(|| FixedOffset::east_opt(0).expect("zero offset"));
    ReportDate(instant.with_timezone(&offset).date_naive())
}

impl ReportDate {
    /// Today's report date at the given offset.
    pub fn today(utc_offset_hours: i32) -> Self {
        report_date_at(Utc::now(), utc_offset_hours)
    }
}
