//! A finite desk check for the nonsingularity precondition: search for
//! affine points over `F_{p^k}`, `k <= 4`, where `F = F_x = F_y = 0`.
//!
//! An empty result says only that no singular point was found up to the
//! scanned degree. It is not a proof of smoothness.

use std::fmt;

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::SparseBivarPoly;

pub const MAX_SCAN_DEGREE: u32 = 4;

type Elem = [u32; MAX_SCAN_DEGREE as usize];

/// `F_{p^k} = F_p[t] / (m(t))` for a monic irreducible `m` of degree `k <= 4`.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: PrimeField,
    k: usize,
    // m(t) = t^k + Σ low[i] t^i
    low: Elem,
}

impl ExtField {
    pub fn new(base: PrimeField, k: u32) -> Result<Self> {
        if k == 0 || k > MAX_SCAN_DEGREE {
            return Err(Error::ScanLimit(k));
        }
        let k = k as usize;
        let p = base.modulus() as u64;
        let count = p.pow(k as u32);
        let low = (0..count)
            .map(|idx| digits(idx, p, k))
            .find(|low| k == 1 || is_irreducible(base, low, k))
            .expect("irreducible polynomials exist in every degree");
        Ok(ExtField { base, k, low })
    }

    pub fn degree(&self) -> u32 {
        self.k as u32
    }

    pub fn order(&self) -> u64 {
        (self.base.modulus() as u64).pow(self.k as u32)
    }

    pub fn element(&self, idx: u64) -> Elem {
        digits(idx, self.base.modulus() as u64, self.k)
    }

    fn embed(&self, v: u32) -> Elem {
        let mut e = [0; 4];
        e[0] = v;
        e
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let f = self.base;
        let mut out = [0; 4];
        for i in 0..self.k {
            out[i] = f.add(f.elem(a[i] as u64), f.elem(b[i] as u64)).value();
        }
        out
    }

    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        let f = self.base;
        let mut out = [0; 4];
        for i in 0..self.k {
            out[i] = f.sub(f.elem(a[i] as u64), f.elem(b[i] as u64)).value();
        }
        out
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.base.modulus() as u64;
        let k = self.k;
        let mut prod = [0u64; 2 * MAX_SCAN_DEGREE as usize];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + a[i] as u64 * b[j] as u64) % p;
            }
        }
        // t^k = -Σ low[i] t^i
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                let sub = c * self.low[i] as u64 % p;
                prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
            }
        }
        let mut out = [0; 4];
        for i in 0..k {
            out[i] = prod[i] as u32;
        }
        out
    }

    fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut acc = self.embed(1);
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: &Elem) -> Elem {
        self.pow(a, self.order() - 2)
    }

    fn scalar(&self, c: u32, a: &Elem) -> Elem {
        self.mul(&self.embed(c), a)
    }

    /// Whether `a` lies in the subfield `F_{p^m}`.
    fn in_subfield(&self, a: &Elem, m: u32) -> bool {
        self.pow(a, (self.base.modulus() as u64).pow(m)) == *a
    }
}

fn digits(mut idx: u64, p: u64, k: usize) -> Elem {
    let mut e = [0; 4];
    for slot in e.iter_mut().take(k) {
        *slot = (idx % p) as u32;
        idx /= p;
    }
    e
}

// Polynomials over F_p as coefficient vectors, lowest degree first.
fn poly_rem(f: PrimeField, num: &[u32], den: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = num.to_vec();
    let dl = den.len();
    let lead_inv = f.inv(f.elem(den[dl - 1] as u64)).expect("monic divisor");
    while r.len() >= dl {
        let c = f.mul(f.elem(*r.last().unwrap() as u64), lead_inv);
        let shift = r.len() - dl;
        for (i, &d) in den.iter().enumerate() {
            let v = f.sub(f.elem(r[shift + i] as u64), f.mul(c, f.elem(d as u64)));
            r[shift + i] = v.value();
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn is_irreducible(f: PrimeField, low: &Elem, k: usize) -> bool {
    let p = f.modulus() as u64;
    let mut m: Vec<u32> = low[..k].to_vec();
    m.push(1);
    // a reducible polynomial of degree <= 4 has a monic factor of degree <= 2
    for deg in 1..=k / 2 {
        for idx in 0..p.pow(deg as u32) {
            let mut d: Vec<u32> = digits(idx, p, deg)[..deg].to_vec();
            d.push(1);
            if poly_rem(f, &m, &d).is_empty() {
                return false;
            }
        }
    }
    true
}

// Univariate polynomials over an ExtField.
type UPoly = Vec<Elem>;

fn trim(ext: &ExtField, mut a: UPoly) -> UPoly {
    let zero = ext.embed(0);
    while a.last() == Some(&zero) {
        a.pop();
    }
    a
}

fn urem(ext: &ExtField, num: &UPoly, den: &UPoly) -> UPoly {
    let mut r = num.clone();
    let dl = den.len();
    let lead_inv = ext.inv(&den[dl - 1]);
    while r.len() >= dl {
        let c = ext.mul(r.last().unwrap(), &lead_inv);
        let shift = r.len() - dl;
        for (i, d) in den.iter().enumerate() {
            r[shift + i] = ext.sub(&r[shift + i], &ext.mul(&c, d));
        }
        r.pop();
        r = trim(ext, r);
    }
    r
}

fn ugcd(ext: &ExtField, a: UPoly, b: UPoly) -> UPoly {
    let (mut a, mut b) = (trim(ext, a), trim(ext, b));
    while !b.is_empty() {
        let r = urem(ext, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn ueval(ext: &ExtField, a: &UPoly, y: &Elem) -> Elem {
    a.iter()
        .rev()
        .fold(ext.embed(0), |acc, c| ext.add(&ext.mul(&acc, y), c))
}

/// Specialises `f(x, y)` at `x` to a polynomial in `y`.
fn specialise(ext: &ExtField, f: &SparseBivarPoly, x: &Elem) -> UPoly {
    let dy = f.terms().map(|(m, _)| m.j as usize).max().unwrap_or(0);
    let mut out = vec![ext.embed(0); dy + 1];
    for (m, c) in f.terms() {
        let term = ext.scalar(c.value(), &ext.pow(x, m.i as u64));
        out[m.j as usize] = ext.add(&out[m.j as usize], &term);
    }
    trim(ext, out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    /// Degree of the smallest scanned field containing both coordinates.
    pub ext_degree: u32,
    /// Coordinates in the basis `1, t, ..., t^{k-1}` of `F_{p^k}`.
    pub x: Vec<u32>,
    pub y: Vec<u32>,
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &[u32]| {
            c.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, v)| match i {
                    0 => v.to_string(),
                    1 => format!("{v}t"),
                    _ => format!("{v}t^{i}"),
                })
                .collect::<Vec<_>>()
                .join("+")
        };
        let or0 = |s: String| if s.is_empty() { "0".to_string() } else { s };
        write!(
            f,
            "({}, {}) over F_p^{}",
            or0(show(&self.x)),
            or0(show(&self.y)),
            self.ext_degree
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub max_ext_degree: u32,
    pub points: Vec<SingularPoint>,
}

impl ScanReport {
    pub fn summary(&self) -> String {
        if self.points.is_empty() {
            format!(
                "no singular point found up to degree {}",
                self.max_ext_degree
            )
        } else {
            format!(
                "{} singular point(s) found up to degree {}",
                self.points.len(),
                self.max_ext_degree
            )
        }
    }
}

/// Affine singular points of `F` over `F_{p^k}` for `k = 1..=max_ext_degree`.
/// Each point is reported once, at the smallest `k` whose field contains it.
pub fn scan_singular_points(curve: &CurveModel, max_ext_degree: u32) -> Result<Vec<SingularPoint>> {
    scan_poly(curve.poly(), max_ext_degree)
}

pub fn scan(curve: &CurveModel, max_ext_degree: u32) -> Result<ScanReport> {
    Ok(ScanReport {
        max_ext_degree,
        points: scan_singular_points(curve, max_ext_degree)?,
    })
}

pub fn scan_poly(f: &SparseBivarPoly, max_ext_degree: u32) -> Result<Vec<SingularPoint>> {
    if max_ext_degree > MAX_SCAN_DEGREE {
        return Err(Error::ScanLimit(max_ext_degree));
    }
    let fx = f.partial_x();
    let fy = f.partial_y();
    let mut points = Vec::new();
    for k in 1..=max_ext_degree {
        let ext = ExtField::new(f.field(), k)?;
        let proper: Vec<u32> = (1..k).filter(|m| k % m == 0).collect();
        let q = ext.order();
        let in_smaller = |x: &Elem, y: &Elem| {
            proper
                .iter()
                .any(|&m| ext.in_subfield(x, m) && ext.in_subfield(y, m))
        };
        for xi in 0..q {
            let x = ext.element(xi);
            let g = ugcd(
                &ext,
                ugcd(&ext, specialise(&ext, f, &x), specialise(&ext, &fx, &x)),
                specialise(&ext, &fy, &x),
            );
            // nonzero constant gcd: no common root at this x
            if g.len() == 1 {
                continue;
            }
            for yi in 0..q {
                let y = ext.element(yi);
                let vanishes = g.is_empty() || ueval(&ext, &g, &y) == ext.embed(0);
                if vanishes && !in_smaller(&x, &y) {
                    points.push(SingularPoint {
                        ext_degree: k,
                        x: x[..k as usize].to_vec(),
                        y: y[..k as usize].to_vec(),
                    });
                }
            }
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_fermat, make_general, make_hurwitz};
    use crate::field::Fp;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn extension_field_is_a_field() {
        for (p, k) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (5, 2), (3, 4)] {
            let ext = ExtField::new(field(p), k).unwrap();
            let q = ext.order();
            let one = ext.embed(1);
            for idx in 1..q {
                let a = ext.element(idx);
                assert_eq!(ext.mul(&a, &ext.inv(&a)), one, "p={p} k={k} idx={idx}");
            }
            // Frobenius fixes exactly p elements
            let fixed = (0..q)
                .filter(|&i| ext.in_subfield(&ext.element(i), 1))
                .count();
            assert_eq!(fixed as u64, p);
        }
        assert!(matches!(
            ExtField::new(field(3), 5),
            Err(Error::ScanLimit(5))
        ));
    }

    #[test]
    fn nonsingular_families_have_no_points() {
        assert!(scan_singular_points(&make_fermat(5, 6).unwrap(), 2)
            .unwrap()
            .is_empty());
        assert!(scan_singular_points(&make_hurwitz(2, 3).unwrap(), 2)
            .unwrap()
            .is_empty());
        let r = scan(&make_fermat(3, 4).unwrap(), 3).unwrap();
        assert_eq!(r.summary(), "no singular point found up to degree 3");
    }

    #[test]
    fn squared_conic_is_singular_everywhere() {
        let f = field(5);
        let conic = SparseBivarPoly::from_terms(f, [(1, 2, 0), (1, 0, 2), (1, 0, 0)]);
        let c = make_general(5, conic.pow(2)).unwrap();
        let found = scan_singular_points(&c, 2).unwrap();
        assert!(!found.is_empty());

        // oracle: direct enumeration over F_5
        let g = c.poly();
        let (gx, gy) = (g.partial_x(), g.partial_y());
        let mut direct = Vec::new();
        for x in 0..5 {
            for y in 0..5 {
                let (x, y) = (f.elem(x), f.elem(y));
                if [g, &gx, &gy].iter().all(|h| h.eval(x, y) == Fp::ZERO) {
                    direct.push((x.value(), y.value()));
                }
            }
        }
        let over_base: Vec<(u32, u32)> = found
            .iter()
            .filter(|pt| pt.ext_degree == 1)
            .map(|pt| (pt.x[0], pt.y[0]))
            .collect();
        assert!(!direct.is_empty());
        assert_eq!(over_base, direct);
        // every F_25 point of the conic shows up: the conic has q + 1 - 1
        // affine points over F_25 minus the F_5 ones, all reported at k = 2
        assert!(found.iter().any(|pt| pt.ext_degree == 2));
    }

    #[test]
    fn node_is_found_at_origin() {
        // y^2 = x^2 (x + 1) has a node at (0, 0); as a quartic add x^4 terms
        // that vanish to high order there: y^2 - x^3 - x^2 + x^4.
        let f = field(7);
        let nodal = SparseBivarPoly::from_terms(f, [(1, 0, 2), (-1, 3, 0), (-1, 2, 0), (1, 4, 0)]);
        let pts = scan_poly(&nodal, 1).unwrap();
        assert!(pts.contains(&SingularPoint {
            ext_degree: 1,
            x: vec![0],
            y: vec![0]
        }));
        assert!(matches!(scan_poly(&nodal, 5), Err(Error::ScanLimit(5))));
    }
}
