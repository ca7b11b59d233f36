//! Count reports and their machine formats.
//!
//! A [`CountReport`] aggregates one counting experiment: degree, field size,
//! shifts, the brute-force count, the closed-form count, the truncated
//! singular-series prediction, and the relative error. CSV columns and JSON
//! keys follow the field order. Rationals serialize as `"num/den"` with an
//! explicit denominator so machine output supports exact regression tests;
//! decimal approximations appear only in human-readable table output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den == BigInt::from(0) {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

/// Decimal approximation with `sig` significant digits, for table output.
pub fn rational_to_decimal(r: &BigRational, sig: usize) -> String {
    match r.to_f64() {
        Some(x) => format!("{x:.*}", sig.saturating_sub(1)),
        None => rational_to_string(r),
    }
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&rational_to_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        raw.map(|s| rational_from_str(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// One counting experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub d: u32,
    pub q: u64,
    /// shifts rendered with the polynomial grammar ("0", "1", "T^2 + 1", ...)
    pub shifts: Vec<String>,
    pub brute_count: Option<u128>,
    pub formula_count: Option<u128>,
    #[serde(with = "opt_rational")]
    pub prediction: Option<BigRational>,
    #[serde(with = "opt_rational")]
    pub rel_error: Option<BigRational>,
}

impl CountReport {
    /// When both counts are present and the formula applies they must agree.
    pub fn consistent(&self) -> bool {
        match (self.brute_count, self.formula_count) {
            (Some(b), Some(f)) => b == f,
            _ => true,
        }
    }

    pub const CSV_HEADER: &'static str =
        "d,q,shifts,brute_count,formula_count,prediction,rel_error";

    /// One CSV row in field order. No field ever contains a comma: counts
    /// are decimal, rationals are `num/den`, and shifts are joined with `;`.
    pub fn to_csv_row(&self) -> String {
        let shifts = self.shifts.join(";");
        debug_assert!(!shifts.contains(','));
        format!(
            "{},{},{},{},{},{},{}",
            self.d,
            self.q,
            shifts,
            self.brute_count.map_or(String::new(), |v| v.to_string()),
            self.formula_count.map_or(String::new(), |v| v.to_string()),
            self.prediction
                .as_ref()
                .map_or(String::new(), rational_to_string),
            self.rel_error
                .as_ref()
                .map_or(String::new(), rational_to_string),
        )
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse(format!(
                "expected 7 CSV fields, got {}",
                fields.len()
            )));
        }
        let parse_count = |s: &str| -> Result<Option<u128>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| Error::Parse(format!("bad count {s:?}")))
            }
        };
        let parse_rat = |s: &str| -> Result<Option<BigRational>> {
            if s.is_empty() {
                Ok(None)
            } else {
                rational_from_str(s).map(Some)
            }
        };
        Ok(CountReport {
            d: fields[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree {:?}", fields[0])))?,
            q: fields[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad q {:?}", fields[1])))?,
            shifts: if fields[2].is_empty() {
                Vec::new()
            } else {
                fields[2].split(';').map(str::to_string).collect()
            },
            brute_count: parse_count(fields[3])?,
            formula_count: parse_count(fields[4])?,
            prediction: parse_rat(fields[5])?,
            rel_error: parse_rat(fields[6])?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn reports_to_csv(reports: &[CountReport]) -> String {
    let mut out = String::from(CountReport::CSV_HEADER);
    for r in reports {
        out.push('\n');
        out.push_str(&r.to_csv_row());
    }
    out.push('\n');
    out
}

pub fn reports_from_csv(text: &str) -> Result<Vec<CountReport>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CountReport::CSV_HEADER => {}
        other => return Err(Error::Parse(format!("bad CSV header {other:?}"))),
    }
    lines.map(CountReport::from_csv_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CountReport {
        CountReport {
            d: 3,
            q: 7,
            shifts: vec!["0".into(), "3".into()],
            brute_count: Some(28),
            formula_count: Some(28),
            prediction: Some(BigRational::new(BigInt::from(280), BigInt::from(9))),
            rel_error: Some(BigRational::new(BigInt::from(-13), BigInt::from(40))),
        }
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        let back = CountReport::from_csv_row(&r.to_csv_row()).unwrap();
        assert_eq!(back, r);
        let text = reports_to_csv(&[r.clone(), r.clone()]);
        assert_eq!(reports_from_csv(&text).unwrap(), vec![r.clone(), r]);
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(CountReport::from_json(&r.to_json()).unwrap(), r);
        let mut partial = r;
        partial.brute_count = None;
        partial.rel_error = None;
        assert_eq!(
            CountReport::from_json(&partial.to_json()).unwrap(),
            partial
        );
        assert_eq!(
            CountReport::from_csv_row(&partial.to_csv_row()).unwrap(),
            partial
        );
    }

    #[test]
    fn empty_csv_is_header_only() {
        let text = reports_to_csv(&[]);
        assert_eq!(text, format!("{}\n", CountReport::CSV_HEADER));
        assert!(reports_from_csv(&text).unwrap().is_empty());
    }

    #[test]
    fn rational_strings() {
        let r = BigRational::new(BigInt::from(4), BigInt::from(1));
        assert_eq!(rational_to_string(&r), "4/1");
        assert_eq!(rational_from_str("4").unwrap(), r);
        assert_eq!(rational_from_str("8/2").unwrap(), r);
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("x/2").is_err());
    }

    #[test]
    fn consistency_flag() {
        let mut r = sample();
        assert!(r.consistent());
        r.formula_count = Some(29);
        assert!(!r.consistent());
        r.brute_count = None;
        assert!(r.consistent());
    }
}
