//! Calendar bucketing of timestamped documents (UTC).

use chrono::{DateTime, Datelike, Days, Months, NaiveDate};

use sbs_core::{Timestamp, TokenizedDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Day,
    /// ISO 8601 weeks, labelled `YYYY-Www` with the ISO week-numbering year.
    Week,
    Month,
    Quarter,
}

impl Granularity {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "day" | "daily" => Some(Granularity::Day),
            "week" | "weekly" => Some(Granularity::Week),
            "month" | "monthly" => Some(Granularity::Month),
            "quarter" | "quarterly" => Some(Granularity::Quarter),
            _ => None,
        }
    }

    fn start_of(self, date: NaiveDate) -> NaiveDate {
        match self {
            Granularity::Day => date,
            Granularity::Week => date - Days::new(date.weekday().num_days_from_monday() as u64),
            Granularity::Month => date.with_day(1).unwrap(),
            Granularity::Quarter => {
                let month0 = (date.month0() / 3) * 3;
                NaiveDate::from_ymd_opt(date.year(), month0 + 1, 1).unwrap()
            }
        }
    }

    fn next(self, start: NaiveDate) -> NaiveDate {
        match self {
            Granularity::Day => start + Days::new(1),
            Granularity::Week => start + Days::new(7),
            Granularity::Month => start + Months::new(1),
            Granularity::Quarter => start + Months::new(3),
        }
    }

    fn label(self, start: NaiveDate) -> String {
        match self {
            Granularity::Day => start.format("%Y-%m-%d").to_string(),
            Granularity::Week => {
                let w = start.iso_week();
                format!("{:04}-W{:02}", w.year(), w.week())
            }
            Granularity::Month => start.format("%Y-%m").to_string(),
            Granularity::Quarter => format!("{:04}-Q{}", start.year(), start.month0() / 3 + 1),
        }
    }
}

fn utc_date(ts: Timestamp) -> NaiveDate {
    DateTime::from_timestamp(ts.0, 0)
        .expect("timestamp within chrono range")
        .date_naive()
}

/// Label of the period containing `ts`.
pub fn period_label(ts: Timestamp, granularity: Granularity) -> String {
    granularity.label(granularity.start_of(utc_date(ts)))
}

/// Splits `corpus` into consecutive periods from the earliest to the latest
/// document. Periods without documents are included with an empty sub-corpus.
/// Documents keep their input order within a period.
pub fn time_slice(
    corpus: &[TokenizedDocument],
    granularity: Granularity,
) -> Vec<(String, Vec<TokenizedDocument>)> {
    let Some(first) = corpus.iter().map(|d| d.timestamp).min() else {
        return Vec::new();
    };
    let last = corpus.iter().map(|d| d.timestamp).max().unwrap();
    let first = granularity.start_of(utc_date(first));
    let last = granularity.start_of(utc_date(last));

    let mut starts = Vec::new();
    let mut cursor = first;
    while cursor <= last {
        starts.push(cursor);
        cursor = granularity.next(cursor);
    }
    let mut buckets: Vec<Vec<TokenizedDocument>> = vec![Vec::new(); starts.len()];
    for doc in corpus {
        let start = granularity.start_of(utc_date(doc.timestamp));
        let idx = starts.binary_search(&start).expect("period start enumerated");
        buckets[idx].push(doc.clone());
    }
    starts
        .into_iter()
        .map(|s| granularity.label(s))
        .zip(buckets)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_timestamp;
    use proptest::prelude::*;

    fn doc(id: &str, ts: &str, tokens: &[&str]) -> TokenizedDocument {
        TokenizedDocument::new(
            id,
            parse_timestamp(ts).unwrap(),
            tokens.iter().map(|t| t.to_string()).collect(),
        )
    }

    #[test]
    fn iso_weeks_2017() {
        let corpus = [
            doc("a", "2017-07-01T12:00:00Z", &["x"]),
            doc("b", "2017-07-02T23:59:59Z", &["y"]),
            doc("c", "2017-07-09T08:00:00Z", &["z"]),
        ];
        let slices = time_slice(&corpus, Granularity::Week);
        let shape: Vec<(&str, usize)> = slices.iter().map(|(l, d)| (l.as_str(), d.len())).collect();
        assert_eq!(shape, vec![("2017-W26", 2), ("2017-W27", 1)]);
    }

    #[test]
    fn single_day_and_empty() {
        let corpus = [
            doc("a", "2017-07-01T01:00:00Z", &["x"]),
            doc("b", "2017-07-01T22:00:00Z", &["y"]),
        ];
        assert_eq!(time_slice(&corpus, Granularity::Day).len(), 1);
        assert!(time_slice(&[], Granularity::Month).is_empty());
    }

    #[test]
    fn gaps_are_emitted() {
        let corpus = [
            doc("a", "2017-01-15T00:00:00Z", &["x"]),
            doc("b", "2017-04-02T00:00:00Z", &["y"]),
        ];
        let months: Vec<String> = time_slice(&corpus, Granularity::Month).into_iter().map(|p| p.0).collect();
        assert_eq!(months, ["2017-01", "2017-02", "2017-03", "2017-04"]);
        let quarters: Vec<String> = time_slice(&corpus, Granularity::Quarter).into_iter().map(|p| p.0).collect();
        assert_eq!(quarters, ["2017-Q1", "2017-Q2"]);
    }

    #[test]
    fn utc_offsets_are_normalized() {
        // 00:30 at +02:00 is the previous UTC day
        let d = parse_timestamp("2017-07-03T00:30:00+02:00").unwrap();
        assert_eq!(period_label(d, Granularity::Day), "2017-07-02");
        // ISO week-year differs from calendar year
        let d = parse_timestamp("2021-01-02T00:00:00Z").unwrap();
        assert_eq!(period_label(d, Granularity::Week), "2020-W53");
    }

    proptest! {
        #[test]
        fn slices_partition_the_corpus(
            days in proptest::collection::vec((0i64..800, 1usize..6), 1..40),
            g in prop_oneof![Just(Granularity::Day), Just(Granularity::Week), Just(Granularity::Month), Just(Granularity::Quarter)]
        ) {
            let corpus: Vec<TokenizedDocument> = days
                .iter()
                .enumerate()
                .map(|(i, &(d, n))| TokenizedDocument::new(
                    format!("{i}"),
                    Timestamp(1_480_000_000 + d * 86_400 + (i as i64 % 7) * 3_000),
                    vec!["w".to_string(); n],
                ))
                .collect();
            let slices = time_slice(&corpus, g);
            let mut ids: Vec<String> = slices.iter().flat_map(|(_, d)| d.iter().map(|x| x.id.clone())).collect();
            ids.sort();
            let mut expect: Vec<String> = corpus.iter().map(|d| d.id.clone()).collect();
            expect.sort();
            prop_assert_eq!(ids, expect);
            let tokens: usize = slices.iter().flat_map(|(_, d)| d.iter().map(|x| x.tokens.len())).sum();
            prop_assert_eq!(tokens, corpus.iter().map(|d| d.tokens.len()).sum::<usize>());
            prop_assert!(slices.windows(2).all(|w| w[0].0 < w[1].0));
            for (label, docs) in &slices {
                for d in docs {
                    prop_assert_eq!(&period_label(d.timestamp, g), label);
                }
            }
        }
    }
}
