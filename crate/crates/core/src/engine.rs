//! The Cartier operator on holomorphic differentials and the invariants it
//! controls.
//!
//! For `ω = h dx / F_y` the Cartier image is `(∇(F^{p-1} h))^{1/p} dx / F_y`,
//! so column `(i, j)` of the matrix collects the coefficients of
//! `x^{ap+p-1} y^{bp+p-1}` in `F^{p-1} x^i y^j`, placed in row `(a, b)`.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Family};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::matrix::MatrixFp;
use crate::par::{self, Execution};
use crate::poly::{Monomial, SparseBivarPoly};

/// How `F^{p-1}` is expanded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Expansion {
    /// Closed double sums for Fermat/Hurwitz models, `poly_pow` otherwise.
    #[default]
    Auto,
    /// Always binary exponentiation of the stored polynomial.
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub exec: Execution,
    pub expansion: Expansion,
    /// Select residue classes of `F^{p-1}` directly per column instead of
    /// materialising `F^{p-1} x^i y^j`, applying `∇` and taking the root.
    pub fused: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            exec: Execution::default(),
            expansion: Expansion::Auto,
            fused: true,
        }
    }
}

/// Matrix of the Cartier operator in the basis `x^i y^j dx / F_y`.
#[derive(Clone, Debug)]
pub struct CartierMatrix<'a> {
    curve: &'a CurveModel,
    matrix: MatrixFp,
}

impl<'a> CartierMatrix<'a> {
    pub fn curve(&self) -> &'a CurveModel {
        self.curve
    }

    pub fn matrix(&self) -> &MatrixFp {
        &self.matrix
    }

    pub fn into_matrix(self) -> MatrixFp {
        self.matrix
    }

    /// Entry in row `(a, b)` and column `(i, j)`.
    pub fn entry(&self, row: Monomial, col: Monomial) -> Option<Fp> {
        let r = self.curve.basis_index(row)?;
        let c = self.curve.basis_index(col)?;
        Some(self.matrix.get(r, c))
    }

    /// Basis monomials whose column vanishes.
    pub fn zero_columns(&self) -> Vec<Monomial> {
        let m = &self.matrix;
        self.curve
            .basis()
            .iter()
            .enumerate()
            .filter(|&(c, _)| (0..m.rows()).all(|r| m.get(r, c).is_zero()))
            .map(|(_, &mono)| mono)
            .collect()
    }
}

pub fn build_cartier_matrix(curve: &CurveModel) -> Result<CartierMatrix<'_>> {
    build_cartier_matrix_with(curve, BuildOptions::default())
}

pub fn build_cartier_matrix_with(
    curve: &CurveModel,
    opts: BuildOptions,
) -> Result<CartierMatrix<'_>> {
    let columns = if opts.fused {
        fused_columns(curve, opts)?
    } else {
        unfused_columns(curve, opts)?
    };
    let g = curve.genus();
    let mut matrix = MatrixFp::zero(curve.field(), g, g);
    for (c, column) in columns.into_iter().enumerate() {
        for (r, v) in column {
            matrix.set(r, c, v);
        }
    }
    Ok(CartierMatrix { curve, matrix })
}

type Column = Vec<(usize, Fp)>;

fn power_of_f(curve: &CurveModel, expansion: Expansion) -> Result<SparseBivarPoly> {
    match (expansion, curve.family()) {
        (Expansion::Auto, Family::Fermat(_) | Family::Hurwitz(_)) => curve.expansion(Monomial::ONE),
        _ => Ok(curve.poly().pow(curve.p() as u64 - 1)),
    }
}

fn place(curve: &CurveModel, col: Monomial, row: Monomial) -> Result<usize> {
    curve.basis_index(row).ok_or(Error::Consistency {
        col_i: col.i,
        col_j: col.j,
        row_a: row.i,
        row_b: row.j,
    })
}

fn fused_columns(curve: &CurveModel, opts: BuildOptions) -> Result<Vec<Column>> {
    let p = curve.p();
    let power = power_of_f(curve, opts.expansion)?;
    // Bucket the terms of F^{p-1} by exponent residues mod p.
    let mut buckets: HashMap<(u32, u32), Vec<(Monomial, Fp)>> = HashMap::new();
    for (m, c) in power.terms() {
        buckets.entry((m.i % p, m.j % p)).or_default().push((m, c));
    }
    let build = |&col: &Monomial| -> Result<Column> {
        let key = ((p - 1 - col.i % p) % p, (p - 1 - col.j % p) % p);
        let mut out = Vec::new();
        for &(m, c) in buckets.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
            let row = Monomial::new((m.i + col.i - (p - 1)) / p, (m.j + col.j - (p - 1)) / p);
            out.push((place(curve, col, row)?, c));
        }
        Ok(out)
    };
    par::map_ordered(opts.exec, curve.basis(), build)
        .into_iter()
        .collect()
}

fn unfused_columns(curve: &CurveModel, opts: BuildOptions) -> Result<Vec<Column>> {
    let general = match opts.expansion {
        Expansion::General => Some(curve.poly().pow(curve.p() as u64 - 1)),
        Expansion::Auto => None,
    };
    let build = |&col: &Monomial| -> Result<Column> {
        let shifted = match &general {
            Some(power) => power.shift(col),
            None => curve.expansion(col)?,
        };
        let image = shifted.nabla().root_p()?;
        image
            .terms()
            .map(|(row, c)| Ok((place(curve, col, row)?, c)))
            .collect()
    };
    par::map_ordered(opts.exec, curve.basis(), build)
        .into_iter()
        .collect()
}

/// Applies the Cartier operator to the adjoint `h` on the polynomial level:
/// `h ↦ (∇(F^{p-1} h))^{1/p}`.
pub fn cartier_image(curve: &CurveModel, h: &SparseBivarPoly) -> Result<SparseBivarPoly> {
    let power = curve.poly().pow(curve.p() as u64 - 1);
    power.mul(h)?.nabla().root_p()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Matrix,
    Counting,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub family: Family,
    pub p: u32,
    pub degree: u32,
    pub genus: usize,
    pub cartier_rank: usize,
    pub a_number: usize,
    pub p_rank: usize,
    pub nilpotency_index: usize,
    pub superspecial: bool,
    pub ordinary: bool,
    /// Every field of this report is read off the Cartier matrix.
    pub method: Method,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub build: Duration,
    pub rank: Duration,
    pub powers: Duration,
}

pub fn compute_invariants(curve: &CurveModel) -> Result<InvariantReport> {
    compute_invariants_with(curve, BuildOptions::default()).map(|(r, _)| r)
}

pub fn compute_invariants_with(
    curve: &CurveModel,
    opts: BuildOptions,
) -> Result<(InvariantReport, PhaseTimings)> {
    let t0 = Instant::now();
    let cm = build_cartier_matrix_with(curve, opts)?;
    let t1 = Instant::now();
    let report = invariants_of(&cm)?;
    let t2 = Instant::now();
    let (p_rank, nilpotency_index) = cm.matrix().stable_rank_and_index(curve.genus())?;
    let t3 = Instant::now();
    let report = InvariantReport {
        p_rank,
        nilpotency_index,
        ordinary: p_rank == curve.genus(),
        ..report
    };
    let timings = PhaseTimings {
        build: t1 - t0,
        rank: t2 - t1,
        powers: t3 - t2,
    };
    Ok((report, timings))
}

// Rank-level invariants; p-rank fields are filled by the caller.
fn invariants_of(cm: &CartierMatrix<'_>) -> Result<InvariantReport> {
    let curve = cm.curve();
    let g = curve.genus();
    let cartier_rank = cm.matrix().rank();
    Ok(InvariantReport {
        family: curve.family(),
        p: curve.p(),
        degree: curve.degree(),
        genus: g,
        cartier_rank,
        a_number: g - cartier_rank,
        p_rank: 0,
        nilpotency_index: 0,
        superspecial: cartier_rank == 0,
        ordinary: false,
        method: Method::Matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_fermat, make_general, make_hurwitz};
    use crate::field::PrimeField;

    fn unfused(exec: Execution, expansion: Expansion) -> BuildOptions {
        BuildOptions {
            exec,
            expansion,
            fused: false,
        }
    }

    #[test]
    fn fermat_p_plus_one_is_zero() {
        let c = make_fermat(5, 6).unwrap();
        let m = build_cartier_matrix(&c).unwrap();
        assert_eq!((m.matrix().rows(), m.matrix().cols()), (10, 10));
        assert!(m.matrix().is_zero());
    }

    #[test]
    fn fermat_char2_kernel_columns() {
        let c = make_fermat(2, 5).unwrap();
        let m = build_cartier_matrix(&c).unwrap();
        assert_eq!(
            m.zero_columns(),
            vec![
                Monomial::new(0, 0),
                Monomial::new(0, 2),
                Monomial::new(2, 0)
            ]
        );
        assert_eq!(m.matrix().rank(), 3);
    }

    #[test]
    fn hurwitz_p_is_superspecial() {
        let c = make_hurwitz(3, 3).unwrap();
        assert!(build_cartier_matrix(&c).unwrap().matrix().is_zero());
    }

    #[test]
    fn invariant_examples() {
        let r = compute_invariants(&make_fermat(3, 7).unwrap()).unwrap();
        assert_eq!((r.genus, r.cartier_rank, r.a_number), (15, 6, 9));

        let r = compute_invariants(&make_fermat(3, 13).unwrap()).unwrap();
        assert_eq!((r.genus, r.a_number, r.p_rank), (66, 30, 21));

        let r = compute_invariants(&make_fermat(7, 6).unwrap()).unwrap();
        assert_eq!((r.p_rank, r.genus, r.ordinary), (10, 10, true));
        assert_eq!(r.nilpotency_index, 0);

        let r = compute_invariants(&make_hurwitz(3, 6).unwrap()).unwrap();
        assert_eq!((r.genus, r.cartier_rank, r.a_number), (15, 6, 9));

        let r = compute_invariants(&make_hurwitz(5, 5).unwrap()).unwrap();
        assert!(r.superspecial);
        assert_eq!((r.p_rank, r.nilpotency_index), (0, 1));
    }

    #[test]
    fn quartic_with_cross_term_golden() {
        // x^4 + y^4 + x^2 y^2 + 1 over F_5: the matrix is diag(3, 4, 4),
        // read from the coefficients of x^4y^4, x^8y^4, x^4y^8 in F^4.
        let f = PrimeField::new(5).unwrap();
        let poly = SparseBivarPoly::from_terms(f, [(1, 4, 0), (1, 0, 4), (1, 2, 2), (1, 0, 0)]);
        let c = make_general(5, poly).unwrap();
        let m = build_cartier_matrix(&c).unwrap();
        let expected = MatrixFp::from_rows(f, &[[3, 0, 0], [0, 4, 0], [0, 0, 4]]).unwrap();
        assert_eq!(m.matrix(), &expected);
        let r = compute_invariants(&c).unwrap();
        assert_eq!(
            (
                r.genus,
                r.cartier_rank,
                r.a_number,
                r.p_rank,
                r.nilpotency_index
            ),
            (3, 3, 0, 3, 0)
        );
        assert!(r.ordinary && !r.superspecial);
    }

    #[test]
    fn general_entry_point_matches_family() {
        let f3 = PrimeField::new(3).unwrap();
        let fam = compute_invariants(&make_fermat(3, 4).unwrap()).unwrap();
        let gen = compute_invariants(&make_general(3, crate::curve::fermat_poly(f3, 4)).unwrap())
            .unwrap();
        assert_eq!(
            (fam.cartier_rank, fam.p_rank, fam.nilpotency_index),
            (gen.cartier_rank, gen.p_rank, gen.nilpotency_index)
        );

        let f2 = PrimeField::new(2).unwrap();
        let h = make_hurwitz(2, 5).unwrap();
        let fam = build_cartier_matrix(&h).unwrap();
        let c = make_general(2, crate::curve::hurwitz_poly(f2, 5)).unwrap();
        let gen = build_cartier_matrix(&c).unwrap();
        assert_eq!(fam.matrix(), gen.matrix());
    }

    #[test]
    fn root_of_nabla_matches_column() {
        // F_7 at p = 3, column (1, 1)
        let c = make_fermat(3, 7).unwrap();
        let m = build_cartier_matrix(&c).unwrap();
        let col_mono = Monomial::new(1, 1);
        let f = c.field();
        let h = SparseBivarPoly::monomial(f, Fp::ONE, col_mono);
        let image = cartier_image(&c, &h).unwrap();
        let col = c.basis_index(col_mono).unwrap();
        for (r, &row) in c.basis().iter().enumerate() {
            assert_eq!(m.matrix().get(r, col), image.coeff(row));
        }
    }

    #[test]
    fn fused_and_unfused_agree() {
        for p in [2u64, 3, 5, 7] {
            for n in 3..=12 {
                let curves = [make_fermat(p, n), make_hurwitz(p, n)];
                for c in curves.into_iter().flatten() {
                    let reference = build_cartier_matrix(&c).unwrap();
                    for opts in [
                        unfused(Execution::Sequential, Expansion::Auto),
                        unfused(Execution::Parallel, Expansion::General),
                        BuildOptions {
                            exec: Execution::Sequential,
                            expansion: Expansion::General,
                            fused: true,
                        },
                    ] {
                        let other = build_cartier_matrix_with(&c, opts).unwrap();
                        assert_eq!(reference.matrix(), other.matrix(), "p={p} n={n} {opts:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn fermat_matrix_is_symmetric_under_swap() {
        for (p, n) in [(3u64, 7u32), (5, 7), (7, 9), (2, 9)] {
            let c = make_fermat(p, n).unwrap();
            let m = build_cartier_matrix(&c).unwrap();
            let swap = |m: Monomial| Monomial::new(m.j, m.i);
            for &row in c.basis() {
                for &col in c.basis() {
                    assert_eq!(m.entry(row, col), m.entry(swap(row), swap(col)));
                }
            }
        }
    }

    #[test]
    fn square_of_operator_matches_matrix_square() {
        let c = make_fermat(2, 5).unwrap();
        let m = build_cartier_matrix(&c).unwrap();
        let m2 = m.matrix().mul(m.matrix()).unwrap();
        let f = c.field();
        for (col, &mono) in c.basis().iter().enumerate() {
            let h = SparseBivarPoly::monomial(f, Fp::ONE, mono);
            let twice = cartier_image(&c, &cartier_image(&c, &h).unwrap()).unwrap();
            for (r, &row) in c.basis().iter().enumerate() {
                assert_eq!(m2.get(r, col), twice.coeff(row));
            }
        }
        assert!(!m.matrix().is_zero());
        assert!(m2.is_zero());
    }

    #[test]
    fn rows_outside_adjoints_are_reported() {
        // Total degree already bounds every image row by d - 3, so the check
        // only fires on a broken construction; exercise it directly.
        let c = make_fermat(5, 6).unwrap();
        let err = place(&c, Monomial::new(1, 0), Monomial::new(2, 2)).unwrap_err();
        assert!(matches!(
            err,
            Error::Consistency {
                row_a: 2,
                row_b: 2,
                ..
            }
        ));
        assert_eq!(place(&c, Monomial::ONE, Monomial::new(1, 2)).unwrap(), 6);
    }
}
