//! Plane curve models: Fermat `x^n + y^n + 1`, Hurwitz `x^n y + y^n + x`, and
//! general nonsingular affine models given by a polynomial.
//!
//! For a nonsingular plane curve of degree `d` every monomial `x^i y^j` with
//! `i + j <= d - 3` is an adjoint, and `x^i y^j dx / F_y` runs over a basis of
//! the holomorphic differentials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField, MODULUS_LIMIT};
use crate::poly::{Monomial, SparseBivarPoly};

/// Smallest degree accepted for any model (plane cubics have genus 1).
pub const MIN_DEGREE: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Fermat,
    Hurwitz,
    General,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Fermat => "fermat",
            FamilyKind::Hurwitz => "hurwitz",
            FamilyKind::General => "general",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Fermat(u32),
    Hurwitz(u32),
    General,
}

impl Family {
    pub fn kind(self) -> FamilyKind {
        match self {
            Family::Fermat(_) => FamilyKind::Fermat,
            Family::Hurwitz(_) => FamilyKind::Hurwitz,
            Family::General => FamilyKind::General,
        }
    }

    pub fn parameter(self) -> Option<u32> {
        match self {
            Family::Fermat(n) | Family::Hurwitz(n) => Some(n),
            Family::General => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CurveModel {
    family: Family,
    field: PrimeField,
    poly: SparseBivarPoly,
    degree: u32,
    genus: usize,
    basis: Vec<Monomial>,
}

impl CurveModel {
    fn new(family: Family, poly: SparseBivarPoly) -> Result<Self> {
        let field = poly.field();
        let degree = poly.degree().unwrap_or(0);
        if degree < MIN_DEGREE {
            return Err(Error::Degree {
                degree,
                min: MIN_DEGREE,
            });
        }
        let p = field.modulus() as u64;
        let bound = (p - 1) * degree as u64 + degree as u64;
        if bound >= MODULUS_LIMIT {
            return Err(Error::ExponentOverflow(bound));
        }
        let d = degree as usize;
        let genus = (d - 1) * (d - 2) / 2;
        let basis = adjoint_basis(degree - 3);
        debug_assert_eq!(basis.len(), genus);
        Ok(CurveModel {
            family,
            field,
            poly,
            degree,
            genus,
            basis,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    /// The affine defining polynomial `F`.
    pub fn poly(&self) -> &SparseBivarPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Adjoint monomials `x^i y^j`, `i + j <= d - 3`, in lexicographic order.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Largest total degree of an adjoint monomial, `d - 3`.
    pub fn adjoint_degree(&self) -> u32 {
        self.degree - 3
    }

    /// Position of `m` in [`basis`](Self::basis), if it is an adjoint monomial.
    pub fn basis_index(&self, m: Monomial) -> Option<usize> {
        let top = self.adjoint_degree() as usize;
        let (i, j) = (m.i as usize, m.j as usize);
        if i + j > top {
            return None;
        }
        // rows 0..i contribute (top + 1) + top + ... + (top + 2 - i) entries
        Some(i * (top + 1) - i * i.saturating_sub(1) / 2 + j)
    }

    /// `F_y`, the denominator of the differential basis.
    pub fn partial_y(&self) -> SparseBivarPoly {
        self.poly.partial_y()
    }

    /// `F^{p-1} x^i y^j` through the family's closed double sum, or through
    /// `poly_pow` for general models.
    pub fn expansion(&self, shift: Monomial) -> Result<SparseBivarPoly> {
        let p = self.p() as u64;
        match self.family {
            Family::Fermat(n) => fermat_expansion(p, n, shift.i, shift.j),
            Family::Hurwitz(n) => hurwitz_expansion(p, n, shift.i, shift.j),
            Family::General => {
                self.check_basis(shift)?;
                Ok(self.poly.pow(p - 1).shift(shift))
            }
        }
    }

    fn check_basis(&self, m: Monomial) -> Result<()> {
        if m.degree() > self.adjoint_degree() {
            return Err(Error::Basis {
                i: m.i,
                j: m.j,
                max: self.adjoint_degree(),
            });
        }
        Ok(())
    }
}

/// Lexicographically ordered monomials of total degree at most `top`.
pub fn adjoint_basis(top: u32) -> Vec<Monomial> {
    (0..=top)
        .flat_map(|i| (0..=top - i).map(move |j| Monomial::new(i, j)))
        .collect()
}

pub fn fermat_poly(field: PrimeField, n: u32) -> SparseBivarPoly {
    SparseBivarPoly::from_terms(field, [(1, n, 0), (1, 0, n), (1, 0, 0)])
}

pub fn hurwitz_poly(field: PrimeField, n: u32) -> SparseBivarPoly {
    SparseBivarPoly::from_terms(field, [(1, n, 1), (1, 0, n), (1, 1, 0)])
}

/// The Fermat curve `x^n + y^n + 1 = 0`; needs `p ∤ n`.
pub fn make_fermat(p: u64, n: u32) -> Result<CurveModel> {
    let field = PrimeField::new(p)?;
    if n < MIN_DEGREE {
        return Err(Error::Degree {
            degree: n,
            min: MIN_DEGREE,
        });
    }
    if (n as u64).is_multiple_of(p) {
        return Err(Error::FamilyCondition(format!(
            "Fermat curve needs p ∤ n, but {p} divides {n}"
        )));
    }
    CurveModel::new(Family::Fermat(n), fermat_poly(field, n))
}

/// The Hurwitz curve `x^n y + y^n + x = 0` (degree `n + 1`); needs
/// `p ∤ n^2 - n + 1`.
pub fn make_hurwitz(p: u64, n: u32) -> Result<CurveModel> {
    let field = PrimeField::new(p)?;
    if n + 1 < MIN_DEGREE {
        return Err(Error::Degree {
            degree: n + 1,
            min: MIN_DEGREE,
        });
    }
    let disc = n as u64 * n as u64 - n as u64 + 1;
    if disc.is_multiple_of(p) {
        return Err(Error::FamilyCondition(format!(
            "Hurwitz curve needs p ∤ n^2 - n + 1 = {disc}, but {p} divides it"
        )));
    }
    CurveModel::new(Family::Hurwitz(n), hurwitz_poly(field, n))
}

/// A general affine plane model. Nonsingularity is the caller's obligation;
/// see [`crate::singular::scan_singular_points`] for a finite desk check.
pub fn make_general(p: u64, poly: SparseBivarPoly) -> Result<CurveModel> {
    let field = PrimeField::new(p)?;
    if poly.field() != field {
        return Err(Error::ModulusMismatch {
            left: field.modulus(),
            right: poly.field().modulus(),
        });
    }
    CurveModel::new(Family::General, poly)
}

/// Double-sum expansion of `(x^n + y^n + c)^{p-1} x^i y^j`:
/// `Σ_{h,k} C(p-1,h) C(h,k) c^{h-k} x^{n(p-1-h)+i} y^{nk+j}`.
///
/// `c = -1` is the printed form `(x^n + y^n - 1)^{p-1}`; the stored Fermat
/// model uses `c = 1`.
pub fn fermat_double_sum(field: PrimeField, n: u32, c: Fp, i: u32, j: u32) -> SparseBivarPoly {
    let p = field.modulus();
    let mut out = SparseBivarPoly::zero(field);
    for h in 0..p {
        let ch = field.binomial((p - 1) as u64, h as u64);
        for k in 0..=h {
            let coeff = field.mul(
                field.mul(ch, field.binomial(h as u64, k as u64)),
                field.pow(c, (h - k) as u64),
            );
            out.add_term(Monomial::new(n * (p - 1 - h) + i, n * k + j), coeff);
        }
    }
    out
}

/// `F^{p-1} x^i y^j` for `F = x^n + y^n + 1`, via the closed double sum.
pub fn fermat_expansion(p: u64, n: u32, i: u32, j: u32) -> Result<SparseBivarPoly> {
    let field = PrimeField::new(p)?;
    if (n as u64).is_multiple_of(p) {
        return Err(Error::FamilyCondition(format!("{p} divides n = {n}")));
    }
    if i + j + 3 > n {
        return Err(Error::Basis {
            i,
            j,
            max: n.saturating_sub(3),
        });
    }
    Ok(fermat_double_sum(field, n, Fp::ONE, i, j))
}

/// `F^{p-1} x^i y^j` for `F = x^n y + y^n + x`:
/// `Σ_{h,k} C(p-1,h) C(h,k) x^{nk-h+p-1+i} y^{n(h-k)+k+j}`, with `(x^n y)^k`,
/// `(y^n)^{h-k}` and `x^{p-1-h}`.
pub fn hurwitz_expansion(p: u64, n: u32, i: u32, j: u32) -> Result<SparseBivarPoly> {
    let field = PrimeField::new(p)?;
    let disc = n as u64 * n as u64 - n as u64 + 1;
    if disc.is_multiple_of(p) {
        return Err(Error::FamilyCondition(format!(
            "{p} divides n^2 - n + 1 = {disc}"
        )));
    }
    if i + j + 2 > n {
        return Err(Error::Basis {
            i,
            j,
            max: n.saturating_sub(2),
        });
    }
    let p = field.modulus();
    let mut out = SparseBivarPoly::zero(field);
    for h in 0..p {
        let ch = field.binomial((p - 1) as u64, h as u64);
        for k in 0..=h {
            let coeff = field.mul(ch, field.binomial(h as u64, k as u64));
            out.add_term(
                Monomial::new(n * k + (p - 1 - h) + i, n * (h - k) + k + j),
                coeff,
            );
        }
    }
    Ok(out)
}
