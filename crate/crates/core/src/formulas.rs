//! Counting and closed-form routes to the Cartier rank of Fermat and
//! Hurwitz curves, independent of the matrix construction.
//!
//! The rank equals the number of adjoint monomials `x^i y^j` for which a
//! congruence system in `(h, k)`, `0 <= k <= h <= p - 1`, is solvable mod p:
//!
//! * Fermat `F_n`, `i + j <= n - 3`: `n(p-1-h) + i ≡ p-1`, `nk + j ≡ p-1`;
//! * Hurwitz `H_n`, `i + j <= n - 2`: `nk - h + i ≡ 0`, `n(h-k) + k + j ≡ p-1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::{FamilyKind, MIN_DEGREE};
use crate::error::{Error, Result};
use crate::field::{is_prime, PrimeField};
use crate::poly::Monomial;

/// Subfamily shapes `n = sp + 1`, `n = sp - 1`, `n = sp` with `s >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "sp+1")]
    SpPlus1,
    #[serde(rename = "sp-1")]
    SpMinus1,
    #[serde(rename = "sp")]
    Sp,
}

impl Variant {
    pub fn degree_parameter(self, p: u32, s: u32) -> Option<u32> {
        let sp = s.checked_mul(p)?;
        match self {
            Variant::SpPlus1 => sp.checked_add(1),
            Variant::SpMinus1 => sp.checked_sub(1),
            Variant::Sp => Some(sp),
        }
    }

    /// The multiplier `s >= 1` when `n` has this shape.
    pub fn multiplier(self, p: u32, n: u32) -> Option<u32> {
        let m = match self {
            Variant::SpPlus1 => n.checked_sub(1)?,
            Variant::SpMinus1 => n.checked_add(1)?,
            Variant::Sp => n,
        };
        (m % p == 0 && m >= p).then_some(m / p)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::SpPlus1 => "sp+1",
            Variant::SpMinus1 => "sp-1",
            Variant::Sp => "sp",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sp+1" => Ok(Variant::SpPlus1),
            "sp-1" => Ok(Variant::SpMinus1),
            "sp" => Ok(Variant::Sp),
            other => Err(Error::InvalidArgument(format!(
                "unknown variant {other:?} (expected sp+1, sp-1 or sp)"
            ))),
        }
    }
}

/// A family member together with every closed-form subfamily it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyQuery {
    pub family: FamilyKind,
    pub p: u32,
    pub n: u32,
    /// `(variant, s)` pairs whose closed form applies, in a fixed order.
    pub variants: Vec<(Variant, u32)>,
}

impl FamilyQuery {
    pub fn new(family: FamilyKind, p: u32, n: u32) -> Result<Self> {
        check_family(family, p, n)?;
        let candidates: &[Variant] = match family {
            FamilyKind::Fermat => &[Variant::SpPlus1, Variant::SpMinus1],
            FamilyKind::Hurwitz => &[Variant::Sp, Variant::SpPlus1],
            FamilyKind::General => &[],
        };
        let variants = candidates
            .iter()
            .filter_map(|&v| v.multiplier(p, n).map(|s| (v, s)))
            .filter(|&(v, s)| closed_form_applies(family, p, s, v).is_ok())
            .collect();
        Ok(FamilyQuery {
            family,
            p,
            n,
            variants,
        })
    }
}

fn check_family(family: FamilyKind, p: u32, n: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidModulus(p as u64));
    }
    match family {
        FamilyKind::Fermat => {
            if n < MIN_DEGREE {
                return Err(Error::Degree {
                    degree: n,
                    min: MIN_DEGREE,
                });
            }
            if n.is_multiple_of(p) {
                return Err(Error::FamilyCondition(format!("{p} divides n = {n}")));
            }
        }
        FamilyKind::Hurwitz => {
            if n + 1 < MIN_DEGREE {
                return Err(Error::Degree {
                    degree: n + 1,
                    min: MIN_DEGREE,
                });
            }
            let disc = n as u64 * n as u64 - n as u64 + 1;
            if disc.is_multiple_of(p as u64) {
                return Err(Error::FamilyCondition(format!(
                    "{p} divides n^2 - n + 1 = {disc}"
                )));
            }
        }
        FamilyKind::General => {
            return Err(Error::InvalidArgument(
                "counting and closed forms exist only for Fermat and Hurwitz curves".into(),
            ))
        }
    }
    Ok(())
}

/// Number of `(i, j)`, `i + j <= n - 3`, for which the Fermat system has a
/// solution. Equals the Cartier rank of `F_n`.
pub fn count_fermat_pairs(p: u32, n: u32) -> Result<usize> {
    check_family(FamilyKind::Fermat, p, n)?;
    let (p, n) = (p as u64, n as u64);
    let target = p - 1;
    let top = n - 3;
    let mut count = 0;
    for i in 0..=top {
        for j in 0..=top - i {
            let solvable = (0..p).any(|h| {
                (n * (p - 1 - h) + i) % p == target && (0..=h).any(|k| (n * k + j) % p == target)
            });
            count += solvable as usize;
        }
    }
    Ok(count)
}

/// Number of `(i, j)`, `i + j <= n - 2`, for which the Hurwitz system has a
/// solution. Equals the Cartier rank of `H_n`.
pub fn count_hurwitz_pairs(p: u32, n: u32) -> Result<usize> {
    check_family(FamilyKind::Hurwitz, p, n)?;
    let (p, n) = (p as i64, n as i64);
    let top = n - 2;
    let mut count = 0;
    for i in 0..=top {
        for j in 0..=top - i {
            let solvable = (0..p).any(|h| {
                (0..=h).any(|k| {
                    (n * k - h + i).rem_euclid(p) == 0
                        && (n * (h - k) + k + j).rem_euclid(p) == p - 1
                })
            });
            count += solvable as usize;
        }
    }
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub rank: usize,
    pub a_number: usize,
}

fn quarter(num: i128, what: &str) -> Result<i128> {
    if num % 4 != 0 {
        return Err(Error::FormulaMismatch(format!(
            "{what}: {num}/4 is not an integer"
        )));
    }
    Ok(num / 4)
}

fn half(num: i128, what: &str) -> Result<i128> {
    if num % 2 != 0 {
        return Err(Error::FormulaMismatch(format!(
            "{what}: {num}/2 is not an integer"
        )));
    }
    Ok(num / 2)
}

fn finish(rank: i128, a: i128, genus: i128, what: &str) -> Result<ClosedForm> {
    if rank < 0 || a < 0 {
        return Err(Error::FormulaMismatch(format!("{what}: negative value")));
    }
    if rank + a != genus {
        return Err(Error::FormulaMismatch(format!(
            "{what}: rank {rank} + a-number {a} != genus {genus}"
        )));
    }
    Ok(ClosedForm {
        rank: rank as usize,
        a_number: a as usize,
    })
}

/// Checks the hypotheses of the `(family, variant)` closed form at `(p, s)`
/// and returns the degree parameter `n`.
pub fn closed_form_applies(family: FamilyKind, p: u32, s: u32, variant: Variant) -> Result<u32> {
    PrimeField::new(p as u64)?;
    if s == 0 {
        return Err(Error::Hypothesis("multiplier s must be >= 1".into()));
    }
    let n = variant
        .degree_parameter(p, s)
        .ok_or_else(|| Error::Hypothesis(format!("n = {variant} overflows")))?;
    match (family, variant) {
        (FamilyKind::Fermat, Variant::SpPlus1)
        | (FamilyKind::Hurwitz, Variant::Sp | Variant::SpPlus1) => {}
        (FamilyKind::Fermat, Variant::SpMinus1) => {
            if n < 4 {
                return Err(Error::Hypothesis(format!(
                    "n = sp-1 = {n} is below 4 for p = {p}, s = {s}"
                )));
            }
        }
        _ => {
            return Err(Error::Hypothesis(format!(
                "no closed form for {family} curves with n = {variant}"
            )))
        }
    }
    check_family(family, p, n)?;
    Ok(n)
}

/// Closed forms for `F_{sp+1}` and `F_{sp-1}`.
///
/// * `n = sp+1`: rank `s(s-1)p(p+1)/4`, a-number `s(s+1)p(p-1)/4`.
/// * `n = sp-1`: a-number `s(s-1)p(p-1)/4`, rank piecewise in `s`:
///   `(p-2)(p-3)/2`, `(p-2)(p-3)/2 + p(p-2)`, `3(p-1)^2`, and for `s >= 4`
///   `3(p-1)^2 + p[(p+1)s^2 + (p-11)s - 12(p-2)]/4`.
///
/// Every result is checked against the genus `(n-1)(n-2)/2`; a mismatch is
/// returned as [`Error::FormulaMismatch`] rather than corrected.
pub fn closed_form_fermat(p: u32, s: u32, variant: Variant) -> Result<ClosedForm> {
    let n = closed_form_applies(FamilyKind::Fermat, p, s, variant)?;
    let (pi, si, ni) = (p as i128, s as i128, n as i128);
    let genus = (ni - 1) * (ni - 2) / 2;
    if variant == Variant::SpPlus1 {
        let rank = quarter(si * (si - 1) * pi * (pi + 1), "Fermat sp+1 rank")?;
        let a = quarter(si * (si + 1) * pi * (pi - 1), "Fermat sp+1 a-number")?;
        return finish(rank, a, genus, "Fermat sp+1");
    }
    let base = half((pi - 2) * (pi - 3), "Fermat sp-1 rank")?;
    let rank = match s {
        1 => base,
        2 => base + pi * (pi - 2),
        3 => 3 * (pi - 1) * (pi - 1),
        _ => {
            3 * (pi - 1) * (pi - 1)
                + quarter(
                    pi * ((pi + 1) * si * si + (pi - 11) * si - 12 * (pi - 2)),
                    "Fermat sp-1 rank",
                )?
        }
    };
    let a = quarter(si * (si - 1) * pi * (pi - 1), "Fermat sp-1 a-number")?;
    finish(rank, a, genus, "Fermat sp-1")
}

/// Closed forms for `H_{sp}` and `H_{sp+1}`.
///
/// * `n = sp`: rank `s(s-1)p(p+1)/4`, a-number `s(s+1)p(p-1)/4`.
/// * `n = sp+1`: rank `s(s+1)p(p+1)/4`, a-number `s(s-1)p(p-1)/4`.
pub fn closed_form_hurwitz(p: u32, s: u32, variant: Variant) -> Result<ClosedForm> {
    let n = closed_form_applies(FamilyKind::Hurwitz, p, s, variant)?;
    let (pi, si, ni) = (p as i128, s as i128, n as i128);
    let genus = ni * (ni - 1) / 2;
    let (rank, a) = if variant == Variant::Sp {
        (si * (si - 1) * pi * (pi + 1), si * (si + 1) * pi * (pi - 1))
    } else {
        (si * (si + 1) * pi * (pi + 1), si * (si - 1) * pi * (pi - 1))
    };
    let what = format!("Hurwitz {variant}");
    finish(quarter(rank, &what)?, quarter(a, &what)?, genus, &what)
}

pub fn closed_form(family: FamilyKind, p: u32, s: u32, variant: Variant) -> Result<ClosedForm> {
    match family {
        FamilyKind::Fermat => closed_form_fermat(p, s, variant),
        FamilyKind::Hurwitz => closed_form_hurwitz(p, s, variant),
        FamilyKind::General => Err(Error::InvalidArgument(
            "closed forms exist only for Fermat and Hurwitz curves".into(),
        )),
    }
}

/// a-number of `F_n` in characteristic 2 and the adjoint monomials spanning
/// the kernel: those with `i` and `j` both even.
pub fn a_fermat_char2(n: u32) -> Result<(usize, Vec<Monomial>)> {
    if n.is_multiple_of(2) {
        return Err(Error::FamilyCondition(format!(
            "characteristic 2 Fermat curve needs odd n, got {n}"
        )));
    }
    if n < 5 {
        return Err(Error::Degree { degree: n, min: 5 });
    }
    let a = ((n as usize).pow(2) - 1) / 8;
    let top = n - 3;
    let kernel: Vec<Monomial> = (0..=top)
        .step_by(2)
        .flat_map(|i| (0..=top - i).step_by(2).map(move |j| Monomial::new(i, j)))
        .collect();
    debug_assert_eq!(kernel.len(), a);
    Ok((a, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_examples() {
        assert_eq!(count_fermat_pairs(5, 6).unwrap(), 0);
        assert_eq!(count_fermat_pairs(3, 7).unwrap(), 6);
        assert_eq!(count_hurwitz_pairs(3, 4).unwrap(), 6);
        assert_eq!(count_hurwitz_pairs(3, 3).unwrap(), 0);
        assert!(matches!(
            count_fermat_pairs(3, 9),
            Err(Error::FamilyCondition(_))
        ));
        assert!(matches!(
            count_hurwitz_pairs(7, 3),
            Err(Error::FamilyCondition(_))
        ));
        assert!(matches!(
            count_fermat_pairs(4, 9),
            Err(Error::InvalidModulus(4))
        ));
    }

    #[test]
    fn fermat_closed_form_examples() {
        let cf = |p, s, v| closed_form_fermat(p, s, v).unwrap();
        assert_eq!(
            cf(3, 2, Variant::SpPlus1),
            ClosedForm {
                rank: 6,
                a_number: 9
            }
        );
        assert_eq!(
            cf(5, 2, Variant::SpMinus1),
            ClosedForm {
                rank: 18,
                a_number: 10
            }
        );
        assert_eq!(
            cf(5, 1, Variant::SpMinus1),
            ClosedForm {
                rank: 3,
                a_number: 0
            }
        );
        for s in 1..=8u32 {
            let n = 2 * s + 1;
            let a = cf(2, s, Variant::SpPlus1).a_number;
            assert_eq!(a, (s * (s + 1) / 2) as usize);
            assert_eq!(a, ((n * n - 1) / 8) as usize);
        }
        assert!(matches!(
            closed_form_fermat(3, 1, Variant::SpMinus1),
            Err(Error::Hypothesis(_))
        ));
        assert!(closed_form_fermat(3, 0, Variant::SpPlus1).is_err());
        assert!(closed_form_fermat(3, 2, Variant::Sp).is_err());
    }

    #[test]
    fn sp_minus_one_rank_sequence_at_p5() {
        let ranks: Vec<usize> = (1..=4)
            .map(|s| closed_form_fermat(5, s, Variant::SpMinus1).unwrap().rank)
            .collect();
        assert_eq!(ranks, vec![3, 18, 48, 93]);
    }

    #[test]
    fn hurwitz_closed_form_examples() {
        let cf = |p, s, v| closed_form_hurwitz(p, s, v).unwrap();
        assert_eq!(
            cf(3, 1, Variant::Sp),
            ClosedForm {
                rank: 0,
                a_number: 3
            }
        );
        assert_eq!(
            cf(3, 2, Variant::Sp),
            ClosedForm {
                rank: 6,
                a_number: 9
            }
        );
        assert_eq!(
            cf(3, 1, Variant::SpPlus1),
            ClosedForm {
                rank: 6,
                a_number: 0
            }
        );
        assert!(closed_form_hurwitz(3, 1, Variant::SpMinus1).is_err());
    }

    #[test]
    fn closed_forms_partition_the_genus() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            for s in 1..=12u32 {
                for v in [Variant::SpPlus1, Variant::SpMinus1] {
                    let Some(n) = v.degree_parameter(p, s) else {
                        continue;
                    };
                    if n < 4 {
                        continue;
                    }
                    let cf = closed_form_fermat(p, s, v).unwrap();
                    let g = ((n - 1) * (n - 2) / 2) as usize;
                    assert_eq!(cf.rank + cf.a_number, g, "F p={p} s={s} {v}");
                }
                for v in [Variant::Sp, Variant::SpPlus1] {
                    let n = v.degree_parameter(p, s).unwrap();
                    let cf = closed_form_hurwitz(p, s, v).unwrap();
                    assert_eq!(cf.rank + cf.a_number, (n * (n - 1) / 2) as usize);
                }
            }
        }
    }

    #[test]
    fn char2_examples() {
        let (a, ker) = a_fermat_char2(5).unwrap();
        assert_eq!(a, 3);
        assert_eq!(
            ker,
            vec![
                Monomial::new(0, 0),
                Monomial::new(0, 2),
                Monomial::new(2, 0)
            ]
        );
        let (a, ker) = a_fermat_char2(7).unwrap();
        assert_eq!((a, ker.len()), (6, 6));
        assert!(ker
            .iter()
            .all(|m| m.i % 2 == 0 && m.j % 2 == 0 && m.degree() <= 4));
        assert_eq!(a_fermat_char2(9).unwrap().0, 10);
        assert!(matches!(a_fermat_char2(8), Err(Error::FamilyCondition(_))));
        assert!(a_fermat_char2(3).is_err());
    }

    #[test]
    fn char2_rank_bound() {
        for n in (7..=41).step_by(2) {
            let g = ((n - 1) * (n - 2) / 2) as usize;
            let (a, _) = a_fermat_char2(n).unwrap();
            let rank = g - a;
            assert!(3 <= rank && rank < g - 1, "n={n}");
        }
        assert_eq!(6 - a_fermat_char2(5).unwrap().0, 3);
    }

    #[test]
    fn variant_detection() {
        let q = FamilyQuery::new(FamilyKind::Fermat, 3, 13).unwrap();
        assert_eq!(q.variants, vec![(Variant::SpPlus1, 4)]);
        let q = FamilyQuery::new(FamilyKind::Fermat, 2, 5).unwrap();
        assert_eq!(
            q.variants,
            vec![(Variant::SpPlus1, 2), (Variant::SpMinus1, 3)]
        );
        let q = FamilyQuery::new(FamilyKind::Fermat, 5, 7).unwrap();
        assert!(q.variants.is_empty());
        let q = FamilyQuery::new(FamilyKind::Hurwitz, 3, 6).unwrap();
        assert_eq!(q.variants, vec![(Variant::Sp, 2)]);
        let q = FamilyQuery::new(FamilyKind::Fermat, 3, 2);
        assert!(q.is_err());
        assert_eq!("sp-1".parse::<Variant>().unwrap(), Variant::SpMinus1);
        assert!("sp+2".parse::<Variant>().is_err());
    }
}
