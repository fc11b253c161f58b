//! Grids of curves: cross-checking the matrix, counting and closed-form
//! paths over many `(p, n)` at once, and subfamily sweeps in `s`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::curve::{make_fermat, make_hurwitz, CurveModel, FamilyKind};
use crate::engine::{compute_invariants_with, BuildOptions};
use crate::error::{Error, Result};
use crate::formulas::{
    closed_form, closed_form_applies, count_fermat_pairs, count_hurwitz_pairs, FamilyQuery, Variant,
};
use crate::par::{map_ordered, Execution};
use crate::report::{write_csv, CsvRow};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: FamilyKind,
    pub variant: Option<Variant>,
    pub p: u32,
    pub s: Option<u32>,
    pub n: u32,
    pub degree: u32,
    pub genus: usize,
    pub rank_matrix: Option<usize>,
    pub rank_counting: Option<usize>,
    pub rank_closed: Option<usize>,
    pub a_number: Option<usize>,
    pub p_rank: Option<usize>,
    pub agree: bool,
    /// Why `agree` is false, or why the matrix path was skipped.
    pub note: Option<String>,
}

impl SweepRow {
    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            family: self.family,
            p: self.p,
            n: Some(self.n),
            degree: Some(self.degree),
            genus: self.genus,
            rank_matrix: self.rank_matrix,
            rank_counting: self.rank_counting,
            rank_closed: self.rank_closed,
            a_number: self.a_number,
            p_rank: self.p_rank,
            agree: self.agree,
        }
    }
}

/// A cell that was not evaluated, with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    pub family: FamilyKind,
    pub p: u32,
    pub n: u32,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridOutcome {
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<Skipped>,
}

impl GridOutcome {
    pub fn disagreements(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.agree)
    }

    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridOptions {
    pub exec: Execution,
    pub with_matrix: bool,
    /// The matrix path is skipped above this genus.
    pub max_genus: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            exec: Execution::default(),
            with_matrix: true,
            max_genus: 2500,
        }
    }
}

fn make_curve(family: FamilyKind, p: u32, n: u32) -> Result<CurveModel> {
    match family {
        FamilyKind::Fermat => make_fermat(p as u64, n),
        FamilyKind::Hurwitz => make_hurwitz(p as u64, n),
        FamilyKind::General => Err(Error::InvalidArgument(
            "grids run over Fermat or Hurwitz curves only".into(),
        )),
    }
}

fn genus_of(family: FamilyKind, n: u32) -> usize {
    let n = n as usize;
    match family {
        FamilyKind::Hurwitz => n * (n - 1) / 2,
        _ => (n - 1) * (n - 2) / 2,
    }
}

// One cell. `closed` lists the closed forms to compare against; the first
// one supplies `rank_closed`.
fn evaluate(
    family: FamilyKind,
    p: u32,
    n: u32,
    closed: &[(Variant, u32)],
    opts: GridOptions,
) -> Result<SweepRow> {
    let genus = genus_of(family, n);
    let mut notes = Vec::new();

    let rank_counting = match family {
        FamilyKind::Fermat => count_fermat_pairs(p, n)?,
        _ => count_hurwitz_pairs(p, n)?,
    };

    let mut rank_closed = None;
    let mut closed_a = None;
    for &(v, s) in closed {
        match closed_form(family, p, s, v) {
            Ok(cf) => {
                if rank_closed.is_none() {
                    rank_closed = Some(cf.rank);
                    closed_a = Some(cf.a_number);
                } else if rank_closed != Some(cf.rank) {
                    notes.push(format!("closed forms disagree at n = {v} (s = {s})"));
                }
            }
            Err(Error::FormulaMismatch(msg)) => notes.push(msg),
            Err(e) => return Err(e),
        }
    }

    let (mut rank_matrix, mut a_matrix, mut p_rank) = (None, None, None);
    let mut degree = if family == FamilyKind::Hurwitz {
        n + 1
    } else {
        n
    };
    if opts.with_matrix {
        if genus > opts.max_genus {
            notes.push(format!(
                "matrix skipped: genus {genus} > {}",
                opts.max_genus
            ));
        } else {
            let curve = make_curve(family, p, n)?;
            let build = BuildOptions {
                exec: opts.exec,
                ..BuildOptions::default()
            };
            let (inv, _) = compute_invariants_with(&curve, build)?;
            degree = inv.degree;
            rank_matrix = Some(inv.cartier_rank);
            a_matrix = Some(inv.a_number);
            p_rank = Some(inv.p_rank);
        }
    }

    let ranks: Vec<usize> = [rank_matrix, Some(rank_counting), rank_closed]
        .into_iter()
        .flatten()
        .collect();
    let mut agree = notes.iter().all(|n| n.starts_with("matrix skipped"));
    if ranks.windows(2).any(|w| w[0] != w[1]) {
        agree = false;
        notes.push(format!(
            "ranks differ: matrix {rank_matrix:?}, counting {rank_counting}, closed form {rank_closed:?}"
        ));
    }
    let a_number = a_matrix.or(Some(genus - rank_counting.min(genus)));
    if let (Some(a), Some(ca)) = (a_number, closed_a) {
        if a != ca {
            agree = false;
            notes.push(format!("a-number {a} differs from closed form {ca}"));
        }
    }

    let (variant, s) = closed
        .first()
        .map_or((None, None), |&(v, s)| (Some(v), Some(s)));
    Ok(SweepRow {
        family,
        variant,
        p,
        s,
        n,
        degree,
        genus,
        rank_matrix,
        rank_counting: Some(rank_counting),
        rank_closed,
        a_number,
        p_rank,
        agree,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    })
}

/// Smallest admissible `n` per family: degree at least 3.
pub fn first_n(family: FamilyKind) -> u32 {
    match family {
        FamilyKind::Hurwitz => 2,
        _ => 3,
    }
}

// Splits a cell error into "not a valid member, skip it" and real failures.
fn skippable(e: &Error) -> bool {
    matches!(
        e,
        Error::FamilyCondition(_) | Error::Degree { .. } | Error::Hypothesis(_)
    )
}

fn collect(
    cells: Vec<(FamilyKind, u32, u32)>,
    results: Vec<Result<SweepRow>>,
) -> Result<GridOutcome> {
    let mut out = GridOutcome::default();
    for ((family, p, n), r) in cells.into_iter().zip(results) {
        match r {
            Ok(row) => out.rows.push(row),
            Err(e) if skippable(&e) => out.skipped.push(Skipped {
                family,
                p,
                n,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Every valid `(family, p, n)` with `n <= n_max`, all three paths.
/// Rows come out ordered by family, then p, then n.
pub fn verify_grid(
    p_list: &[u32],
    n_max: u32,
    families: &[FamilyKind],
    opts: GridOptions,
) -> Result<GridOutcome> {
    for &p in p_list {
        crate::field::PrimeField::new(p as u64)?;
    }
    let mut cells = Vec::new();
    for &family in families {
        for &p in p_list {
            for n in first_n(family)..=n_max {
                cells.push((family, p, n));
            }
        }
    }
    let results = map_ordered(opts.exec, &cells, |&(family, p, n)| {
        let query = FamilyQuery::new(family, p, n)?;
        evaluate(family, p, n, &query.variants, opts)
    });
    collect(cells, results)
}

/// `n = variant(s, p)` for every `p` in `p_list` and `s` in `s_range`,
/// ordered by p then s.
pub fn sweep(
    family: FamilyKind,
    variant: Variant,
    p_list: &[u32],
    s_range: std::ops::RangeInclusive<u32>,
    opts: GridOptions,
) -> Result<GridOutcome> {
    let mut cells = Vec::new();
    let mut params = Vec::new();
    for &p in p_list {
        crate::field::PrimeField::new(p as u64)?;
        for s in s_range.clone() {
            let n = variant.degree_parameter(p, s).unwrap_or(0);
            cells.push((family, p, n));
            params.push((p, s));
        }
    }
    let results = map_ordered(opts.exec, &params, |&(p, s)| {
        let n = closed_form_applies(family, p, s, variant)?;
        evaluate(family, p, n, &[(variant, s)], opts)
    });
    collect(cells, results)
}

pub fn rows_to_csv(rows: &[SweepRow]) -> Result<String> {
    let csv_rows: Vec<CsvRow> = rows.iter().map(SweepRow::csv_row).collect();
    write_csv(&csv_rows)
}

/// One JSON object per line.
pub fn rows_to_json_lines(rows: &[SweepRow]) -> Result<String> {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn rows_to_table(rows: &[SweepRow]) -> String {
    let header = [
        "family",
        "variant",
        "p",
        "s",
        "n",
        "genus",
        "rank(M)",
        "rank(count)",
        "rank(closed)",
        "a",
        "p-rank",
        "agree",
    ];
    let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.family.to_string(),
                r.variant.map_or_else(|| "-".into(), |v| v.to_string()),
                r.p.to_string(),
                r.s.map_or_else(|| "-".into(), |s| s.to_string()),
                r.n.to_string(),
                r.genus.to_string(),
                opt(r.rank_matrix),
                opt(r.rank_counting),
                opt(r.rank_closed),
                opt(r.a_number),
                opt(r.p_rank),
                if r.agree { "yes".into() } else { "NO".into() },
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&header.map(String::from), &mut out);
    for row in &body {
        line(row, &mut out);
    }
    out
}

/// Invariants of one curve as stored in the goldens file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenRecord {
    pub family: FamilyKind,
    pub p: u32,
    pub n: u32,
    pub genus: usize,
    pub cartier_rank: usize,
    pub a_number: usize,
    pub p_rank: usize,
    pub nilpotency_index: usize,
}

/// Golden records for every valid cell, from the matrix path alone.
pub fn golden_records(
    p_list: &[u32],
    n_max: u32,
    families: &[FamilyKind],
    exec: Execution,
) -> Result<Vec<GoldenRecord>> {
    let mut cells = Vec::new();
    for &family in families {
        for &p in p_list {
            for n in first_n(family)..=n_max {
                cells.push((family, p, n));
            }
        }
    }
    let results = map_ordered(exec, &cells, |&(family, p, n)| -> Result<Option<_>> {
        let curve = match make_curve(family, p, n) {
            Ok(c) => c,
            Err(e) if skippable(&e) => return Ok(None),
            Err(e) => return Err(e),
        };
        let (inv, _) = compute_invariants_with(
            &curve,
            BuildOptions {
                exec,
                ..BuildOptions::default()
            },
        )?;
        Ok(Some(GoldenRecord {
            family,
            p,
            n,
            genus: inv.genus,
            cartier_rank: inv.cartier_rank,
            a_number: inv.a_number,
            p_rank: inv.p_rank,
            nilpotency_index: inv.nilpotency_index,
        }))
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

pub fn goldens_to_json_lines(records: &[GoldenRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn goldens_from_json_lines(text: &str) -> Result<Vec<GoldenRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}
