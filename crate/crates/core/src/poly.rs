//! Sparse polynomials in `F_p[x, y]` and the operator `∇ = ∂^{2p-2}/∂x^{p-1}∂y^{p-1}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};

/// The monomial `x^i y^j`. Ordered lexicographically by `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0 };

    #[inline]
    pub const fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    #[inline]
    pub fn degree(self) -> u32 {
        self.i + self.j
    }

    #[inline]
    fn pack(self) -> u64 {
        (self.i as u64) << 32 | self.j as u64
    }

    #[inline]
    fn unpack(k: u64) -> Self {
        Monomial::new((k >> 32) as u32, k as u32)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = |name: &str, e: u32| match e {
            1 => name.to_string(),
            e => format!("{name}^{e}"),
        };
        match (self.i, self.j) {
            (0, 0) => write!(f, "1"),
            (i, 0) => write!(f, "{}", var("x", i)),
            (0, j) => write!(f, "{}", var("y", j)),
            (i, j) => write!(f, "{}*{}", var("x", i), var("y", j)),
        }
    }
}

/// A polynomial in `F_p[x, y]` stored as a map from monomials to nonzero
/// coefficients. Iteration is always in lexicographic monomial order.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseBivarPoly {
    field: PrimeField,
    terms: BTreeMap<Monomial, Fp>,
}

impl SparseBivarPoly {
    pub fn zero(field: PrimeField) -> Self {
        SparseBivarPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::monomial(field, Fp::ONE, Monomial::ONE)
    }

    pub fn monomial(field: PrimeField, c: Fp, m: Monomial) -> Self {
        let mut out = Self::zero(field);
        if !c.is_zero() {
            out.terms.insert(m, c);
        }
        out
    }

    /// Collects `(coeff, i, j)` triples; repeated monomials are summed and the
    /// coefficients reduced mod p.
    pub fn from_terms<I>(field: PrimeField, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, u32, u32)>,
    {
        let mut out = Self::zero(field);
        for (c, i, j) in terms {
            out.add_term(Monomial::new(i, j), field.from_i64(c));
        }
        out
    }

    pub(crate) fn from_map(field: PrimeField, terms: BTreeMap<Monomial, Fp>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        SparseBivarPoly { field, terms }
    }

    pub fn add_term(&mut self, m: Monomial, c: Fp) {
        if c.is_zero() {
            return;
        }
        let f = self.field;
        let slot = self.terms.entry(m).or_insert(Fp::ZERO);
        *slot = f.add(*slot, c);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn coeff(&self, m: Monomial) -> Fp {
        self.terms.get(&m).copied().unwrap_or(Fp::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Fp)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.field.modulus(),
                right: other.field.modulus(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, self.field.neg(c));
        }
        Ok(out)
    }

    pub fn scale(&self, c: Fp) -> Self {
        let f = self.field;
        let terms = self
            .terms()
            .map(|(m, v)| (m, f.mul(v, c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Self::from_map(f, terms)
    }

    /// Multiplies by `x^i y^j`.
    pub fn shift(&self, by: Monomial) -> Self {
        let terms = self
            .terms()
            .map(|(m, c)| (Monomial::new(m.i + by.i, m.j + by.j), c))
            .collect();
        Self::from_map(self.field, terms)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let p = self.field.modulus() as u64;
        let mut acc: HashMap<u64, u64> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                let key = Monomial::new(ma.i + mb.i, ma.j + mb.j).pack();
                let slot = acc.entry(key).or_insert(0);
                *slot = (*slot + ca.value() as u64 * cb.value() as u64) % p;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(k, c)| (Monomial::unpack(k), self.field.elem(c)))
            .collect();
        Ok(Self::from_map(self.field, terms))
    }

    /// `self^e` by binary exponentiation; `f^0 = 1`.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// `∂f/∂x`.
    pub fn partial_x(&self) -> Self {
        let f = self.field;
        let terms = self
            .terms()
            .filter(|(m, _)| m.i > 0)
            .map(|(m, c)| (Monomial::new(m.i - 1, m.j), f.mul(c, f.elem(m.i as u64))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self::from_map(f, terms)
    }

    /// `∂f/∂y`.
    pub fn partial_y(&self) -> Self {
        let f = self.field;
        let terms = self
            .terms()
            .filter(|(m, _)| m.j > 0)
            .map(|(m, c)| (Monomial::new(m.i, m.j - 1), f.mul(c, f.elem(m.j as u64))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self::from_map(f, terms)
    }

    /// `∇f = Σ c_{ip+p-1, jp+p-1} x^{ip} y^{jp}`: keeps the terms whose two
    /// exponents are both `≡ p-1 (mod p)` and lowers each exponent by `p-1`.
    pub fn nabla(&self) -> Self {
        let p = self.field.modulus();
        let terms = self
            .terms()
            .filter(|(m, _)| m.i % p == p - 1 && m.j % p == p - 1)
            .map(|(m, c)| (Monomial::new(m.i - (p - 1), m.j - (p - 1)), c))
            .collect();
        Self::from_map(self.field, terms)
    }

    /// Divides every exponent by `p`. Over the prime field the p-th root of a
    /// coefficient is the coefficient itself.
    pub fn root_p(&self) -> Result<Self> {
        let p = self.field.modulus();
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms() {
            if m.i % p != 0 || m.j % p != 0 {
                return Err(Error::NotPthPower { i: m.i, j: m.j, p });
            }
            terms.insert(Monomial::new(m.i / p, m.j / p), c);
        }
        Ok(Self::from_map(self.field, terms))
    }

    pub fn eval(&self, x: Fp, y: Fp) -> Fp {
        let f = self.field;
        self.terms().fold(Fp::ZERO, |acc, (m, c)| {
            let t = f.mul(c, f.mul(f.pow(x, m.i as u64), f.pow(y, m.j as u64)));
            f.add(acc, t)
        })
    }
}

impl fmt::Debug for SparseBivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.field.modulus())
    }
}

impl fmt::Display for SparseBivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            match (c.value(), m == Monomial::ONE) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{m}")?,
                (_, false) => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}
