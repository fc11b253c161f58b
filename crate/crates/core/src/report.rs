//! Machine-readable reports: the per-curve [`ReportDocument`] (JSON, CSV,
//! aligned table) and the shared CSV row layout.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Family, FamilyKind};
use crate::engine::{compute_invariants_with, BuildOptions};
use crate::error::Result;
use crate::formulas::{closed_form, count_fermat_pairs, count_hurwitz_pairs, FamilyQuery};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str =
    "family,p,n,degree,genus,rank_matrix,rank_counting,rank_closed,a_number,p_rank,agree";

/// One value per computation path; `null` where a path does not apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathValues {
    pub matrix: Option<usize>,
    pub counting: Option<usize>,
    pub closed_form: Option<usize>,
}

impl PathValues {
    /// All present values coincide.
    pub fn agree(&self) -> bool {
        let vals: Vec<usize> = [self.matrix, self.counting, self.closed_form]
            .into_iter()
            .flatten()
            .collect();
        vals.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Methods {
    pub cartier_rank: PathValues,
    pub a_number: PathValues,
    pub p_rank: PathValues,
}

/// Phase durations in microseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub build_us: u64,
    pub rank_us: u64,
    pub powers_us: u64,
    pub counting_us: Option<u64>,
    pub closed_form_us: Option<u64>,
}

fn micros(d: Duration) -> u64 {
    d.as_micros().min(u64::MAX as u128) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub family: FamilyKind,
    pub p: u32,
    pub n: Option<u32>,
    pub degree: u32,
    pub genus: usize,
    pub cartier_rank: usize,
    pub a_number: usize,
    pub p_rank: usize,
    pub nilpotency_index: usize,
    pub superspecial: bool,
    pub ordinary: bool,
    pub methods: Methods,
    pub timings: Timings,
}

impl ReportDocument {
    /// Runs the matrix path, plus counting and closed forms when the curve
    /// belongs to a family that has them.
    pub fn compute(curve: &CurveModel, opts: BuildOptions) -> Result<Self> {
        let (inv, phases) = compute_invariants_with(curve, opts)?;
        let g = inv.genus;
        let mut methods = Methods {
            cartier_rank: PathValues {
                matrix: Some(inv.cartier_rank),
                ..Default::default()
            },
            a_number: PathValues {
                matrix: Some(inv.a_number),
                ..Default::default()
            },
            p_rank: PathValues {
                matrix: Some(inv.p_rank),
                ..Default::default()
            },
        };
        let mut timings = Timings {
            build_us: micros(phases.build),
            rank_us: micros(phases.rank),
            powers_us: micros(phases.powers),
            counting_us: None,
            closed_form_us: None,
        };

        let p = curve.p();
        let counted = match curve.family() {
            Family::Fermat(n) => Some(timed(|| count_fermat_pairs(p, n))),
            Family::Hurwitz(n) => Some(timed(|| count_hurwitz_pairs(p, n))),
            Family::General => None,
        };
        if let Some((count, took)) = counted {
            let count = count?;
            methods.cartier_rank.counting = Some(count);
            methods.a_number.counting = Some(g - count.min(g));
            timings.counting_us = Some(micros(took));
        }

        if let Some(n) = curve.family().parameter() {
            let kind = curve.family().kind();
            let (closed, took) = timed(|| -> Result<_> {
                let query = FamilyQuery::new(kind, p, n)?;
                query
                    .variants
                    .first()
                    .map(|&(v, s)| closed_form(kind, p, s, v))
                    .transpose()
            });
            if let Some(cf) = closed? {
                methods.cartier_rank.closed_form = Some(cf.rank);
                methods.a_number.closed_form = Some(cf.a_number);
                timings.closed_form_us = Some(micros(took));
            }
        }

        Ok(ReportDocument {
            schema_version: SCHEMA_VERSION,
            family: curve.family().kind(),
            p,
            n: curve.family().parameter(),
            degree: inv.degree,
            genus: g,
            cartier_rank: inv.cartier_rank,
            a_number: inv.a_number,
            p_rank: inv.p_rank,
            nilpotency_index: inv.nilpotency_index,
            superspecial: inv.superspecial,
            ordinary: inv.ordinary,
            methods,
            timings,
        })
    }

    pub fn agree(&self) -> bool {
        self.methods.cartier_rank.agree() && self.methods.a_number.agree()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            family: self.family,
            p: self.p,
            n: self.n,
            degree: Some(self.degree),
            genus: self.genus,
            rank_matrix: self.methods.cartier_rank.matrix,
            rank_counting: self.methods.cartier_rank.counting,
            rank_closed: self.methods.cartier_rank.closed_form,
            a_number: Some(self.a_number),
            p_rank: Some(self.p_rank),
            agree: self.agree(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        write_csv(&[self.csv_row()])
    }

    pub fn to_table(&self) -> String {
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        let rows: Vec<(&str, String)> = vec![
            ("family", self.family.to_string()),
            ("p", self.p.to_string()),
            ("n", self.n.map_or_else(|| "-".into(), |n| n.to_string())),
            ("degree", self.degree.to_string()),
            ("genus", self.genus.to_string()),
            ("cartier rank", self.cartier_rank.to_string()),
            ("a-number", self.a_number.to_string()),
            ("p-rank", self.p_rank.to_string()),
            ("nilpotency index", self.nilpotency_index.to_string()),
            ("superspecial", self.superspecial.to_string()),
            ("ordinary", self.ordinary.to_string()),
            (
                "rank by path",
                format!(
                    "matrix {} / counting {} / closed form {}",
                    opt(self.methods.cartier_rank.matrix),
                    opt(self.methods.cartier_rank.counting),
                    opt(self.methods.cartier_rank.closed_form)
                ),
            ),
            ("paths agree", self.agree().to_string()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

/// Row layout shared by `invariants --format csv`, `verify` and `sweep`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub family: FamilyKind,
    pub p: u32,
    pub n: Option<u32>,
    pub degree: Option<u32>,
    pub genus: usize,
    pub rank_matrix: Option<usize>,
    pub rank_counting: Option<usize>,
    pub rank_closed: Option<usize>,
    pub a_number: Option<usize>,
    pub p_rank: Option<usize>,
    pub agree: bool,
}

pub fn write_csv(rows: &[CsvRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        return Ok(format!("{CSV_HEADER}\n"));
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
