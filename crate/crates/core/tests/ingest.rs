use std::cell::RefCell;
use std::collections::HashSet;

use epitrack_core::ingest::*;
use epitrack_core::transform::per_million;
use proptest::prelude::*;

const FIXTURE: &str = include_str!("../../../fixtures/daily_report_03-14-2021.csv");
const POPULATION: &str = include_str!("../../../fixtures/population.csv");

/// Serves scripted responses in order; `None` simulates a network failure.
struct ScriptedFetcher {
    responses: RefCell<Vec<Option<String>>>,
    urls: RefCell<Vec<String>>,
}

impl ScriptedFetcher {
    fn new(responses: Vec<Option<&str>>) -> Self {
        let mut r: Vec<_> = responses
            .into_iter()
            .map(|s| s.map(str::to_owned))
            .collect();
        r.reverse();
        Self {
            responses: RefCell::new(r),
            urls: RefCell::default(),
        }
    }
}

impl Fetcher for ScriptedFetcher {
    fn fetch(&self, url: &str) -> Result<String, String> {
        self.urls.borrow_mut().push(url.to_owned());
        self.responses
            .borrow_mut()
            .pop()
            .flatten()
            .ok_or_else(|| "connection refused".to_owned())
    }
}

fn date(y: i32, m: u32, d: u32) -> ReportDate {
    ReportDate::new(y, m, d).unwrap()
}

fn figure_table() -> Vec<RegionSnapshot> {
    let mut rows = parse_daily_report(FIXTURE, ParseMode::Strict)
        .unwrap()
        .snapshots;
    RegionAliases::builtin().apply(&mut rows);
    let mut rows = aggregate_to_region(&rows, AggregationLevel::Country);
    attach_population(&mut rows, &parse_population_table(POPULATION).unwrap());
    rows
}

#[test]
fn url_examples() {
    assert!(build_daily_report_url(date(2021, 3, 14))
        .ends_with("/csse_covid_19_daily_reports/03-14-2021.csv"));
    assert!(build_daily_report_url(date(2020, 1, 2)).ends_with("/01-02-2020.csv"));
    assert!(matches!(
        ReportDate::new(2021, 13, 1),
        Err(IngestError::InvalidDate { month: 13, .. })
    ));
}

#[test]
fn figure_table_ordering_and_values() {
    let rows = figure_table();
    let names: Vec<_> = rows.iter().map(|r| r.region.as_str()).collect();
    assert_eq!(
        names,
        [
            "USA", "Brazil", "India", "Russia", "UK", "France", "Italy", "Spain", "Turkey",
            "Germany"
        ]
    );
    let usa = &rows[0];
    assert_eq!(
        (usa.confirmed, usa.deaths, usa.recovered),
        (29438775, 534888, 0)
    );
    assert_eq!(usa.population, Some(330610570));
    let per_m = per_million(usa.confirmed as f64, usa.population.unwrap()).unwrap();
    assert!((per_m - 89043.66).abs() <= 0.01, "{per_m}");
    // Confirmed/M for every printed row
    let printed = [
        89043.66, 54102.24, 8266.82, 29751.38, 62991.47, 63328.95, 53293.2, 68098.91, 34216.03,
        30799.42,
    ];
    for (row, want) in rows.iter().zip(printed) {
        let got = per_million(row.confirmed as f64, row.population.unwrap()).unwrap();
        assert!(
            (got - want).abs() <= 0.01,
            "{}: {got} vs {want}",
            row.region
        );
    }
}

#[test]
fn strict_mode_names_the_bad_row() {
    let text = "Country_Region,Confirmed,Deaths,Recovered\nA,1,0,0\nB,abc,0,0\n";
    let err = parse_daily_report(text, ParseMode::Strict).unwrap_err();
    assert!(err.to_string().contains("row 2"), "{err}");
    let lenient = parse_daily_report(text, ParseMode::Lenient).unwrap();
    assert_eq!(lenient.snapshots.len(), 1);
    assert_eq!(lenient.skipped.len(), 1);
}

#[test]
fn fallback_contract() {
    let dir = tempfile::tempdir().unwrap();
    let cache = SnapshotCache::open(dir.path()).unwrap();
    let base = "http://mirror.invalid/reports";

    // cold cache, network down
    let down = ScriptedFetcher::new(vec![None]);
    let err = fetch_with_fallback(&down, base, date(2021, 3, 14), &cache, ParseMode::Lenient)
        .unwrap_err();
    assert!(matches!(err, IngestError::NoDataAvailable { .. }));
    assert!(err.to_string().contains("no data available"));

    // success stores and marks latest-good
    let ok = ScriptedFetcher::new(vec![Some(FIXTURE)]);
    let fresh =
        fetch_with_fallback(&ok, base, date(2021, 3, 13), &cache, ParseMode::Lenient).unwrap();
    assert_eq!(
        fresh.provenance,
        Provenance::Fresh {
            date: date(2021, 3, 13)
        }
    );
    assert_eq!(
        ok.urls.borrow()[0],
        "http://mirror.invalid/reports/03-13-2021.csv"
    );
    assert_eq!(
        cache.read(date(2021, 3, 13)).unwrap().as_deref(),
        Some(FIXTURE)
    );

    // network down with a warm cache
    let cached =
        fetch_with_fallback(&down, base, date(2021, 3, 14), &cache, ParseMode::Lenient).unwrap();
    assert_eq!(
        cached.provenance,
        Provenance::Cached {
            date: date(2021, 3, 13)
        }
    );
    assert_eq!(cached.snapshots, fresh.snapshots);
    assert!(cached.fetch_error.is_some());

    // garbage response is a parse failure, also served from cache and never stored
    let garbage = ScriptedFetcher::new(vec![Some("<html>rate limited</html>")]);
    let out = fetch_with_fallback(
        &garbage,
        base,
        date(2021, 3, 15),
        &cache,
        ParseMode::Lenient,
    )
    .unwrap();
    assert_eq!(
        out.provenance,
        Provenance::Cached {
            date: date(2021, 3, 13)
        }
    );
    assert_eq!(cache.read(date(2021, 3, 15)).unwrap(), None);

    let json = serde_json::to_value(out.provenance).unwrap();
    assert_eq!(
        json,
        serde_json::json!({"source": "cached", "date": "03-13-2021"})
    );
}

#[test]
fn time_series_fixture_parses() {
    let text = include_str!("../../../fixtures/time_series_confirmed.csv");
    let series = parse_time_series_csv(
        text,
        epitrack_core::transform::Metric::Confirmed,
        &RegionAliases::builtin(),
    )
    .unwrap();
    assert!(series.iter().any(|s| s.region() == "USA"));
    for s in &series {
        assert!(
            s.values().windows(2).all(|w| w[1] >= w[0]),
            "{} not cumulative",
            s.region()
        );
    }
}

fn arb_date() -> impl Strategy<Value = ReportDate> {
    (1990i32..2100, 1u32..=12, 1u32..=31)
        .prop_filter_map("valid date", |(y, m, d)| ReportDate::new(y, m, d).ok())
}

fn arb_snapshot() -> impl Strategy<Value = RegionSnapshot> {
    (
        prop::sample::select(vec!["A", "B", "C", "D"]),
        prop::option::of(prop::sample::select(vec!["p1", "p2", "p3"])),
        0u64..1_000_000,
        0u64..10_000,
        0u64..1_000_000,
    )
        .prop_map(
            |(region, province, confirmed, deaths, recovered)| RegionSnapshot {
                region: region.to_owned(),
                province: province.map(str::to_owned),
                confirmed,
                deaths,
                recovered,
                population: None,
            },
        )
}

proptest! {
    #[test]
    fn url_round_trips(d in arb_date()) {
        let url = build_daily_report_url(d);
        let stem = url.rsplit('/').next().unwrap().strip_suffix(".csv").unwrap();
        prop_assert_eq!(stem.parse::<ReportDate>().unwrap(), d);
    }

    #[test]
    fn url_is_injective(a in arb_date(), b in arb_date()) {
        prop_assert_eq!(a == b, build_daily_report_url(a) == build_daily_report_url(b));
    }

    #[test]
    fn aggregation_permutation_invariant_and_idempotent(
        rows in prop::collection::vec(arb_snapshot(), 0..30),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        for level in [AggregationLevel::Country, AggregationLevel::State] {
            prop_assert_eq!(aggregate_to_region(&rows, level), aggregate_to_region(&shuffled, level));
        }
        let once = aggregate_to_region(&rows, AggregationLevel::Country);
        prop_assert_eq!(aggregate_to_region(&once, AggregationLevel::Country), once.clone());
        let total_in: u64 = rows.iter().map(|r| r.confirmed).sum();
        let total_out: u64 = once.iter().map(|r| r.confirmed).sum();
        prop_assert_eq!(total_in, total_out);
        prop_assert!(once.windows(2).all(|w| w[0].confirmed >= w[1].confirmed));
        let names: HashSet<_> = once.iter().map(|r| &r.region).collect();
        prop_assert_eq!(names.len(), once.len());
    }

    #[test]
    fn parsed_counts_round_trip(rows in prop::collection::vec(arb_snapshot(), 0..20)) {
        let mut text = String::from("Province_State,Country_Region,Confirmed,Deaths,Recovered\n");
        for r in &rows {
            text += &format!("{},{},{},{},{}\n", r.province.as_deref().unwrap_or(""), r.region, r.confirmed, r.deaths, r.recovered);
        }
        let parsed = parse_daily_report(&text, ParseMode::Strict).unwrap();
        prop_assert_eq!(parsed.snapshots, rows);
    }

    #[test]
    fn latest_good_always_parses(script in prop::collection::vec(prop::option::of(0usize..3), 1..12)) {
        let bodies = [
            FIXTURE,
            "Country_Region,Confirmed,Deaths,Recovered\nX,5,1,0\n",
            "not,a,report\n1,2,3\n",
        ];
        let dir = tempfile::tempdir().unwrap();
        let cache = SnapshotCache::open(dir.path()).unwrap();
        let mut any_success = false;
        for (i, step) in script.iter().enumerate() {
            let fetcher = ScriptedFetcher::new(vec![step.map(|k| bodies[k])]);
            let d = date(2021, 1, 1 + i as u32);
            let out = fetch_with_fallback(&fetcher, DEFAULT_BASE_URL, d, &cache, ParseMode::Lenient);
            let succeeded = matches!(step, Some(0 | 1));
            any_success |= succeeded;
            match &out {
                Ok(o) if succeeded => prop_assert_eq!(o.provenance, Provenance::Fresh { date: d }),
                Ok(o) => prop_assert!(matches!(o.provenance, Provenance::Cached { .. }), "expected cached"),
                Err(e) => prop_assert!(!any_success, "{}", e),
            }
            if any_success {
                let (_, raw) = cache.latest().unwrap().unwrap();
                prop_assert!(parse_daily_report(&raw, ParseMode::Strict).is_ok());
            }
        }
    }
}
