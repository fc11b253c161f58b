//! Text format for general curves:
//!
//! ```text
//! # comment
//! p 5
//! 1 6 0     # coeff i j, one term per line
//! 1 0 6
//! 1 0 0
//! ```
//!
//! Coefficients are arbitrary integers reduced mod p; repeated `(i, j)`
//! lines are summed.

use std::path::Path;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{Monomial, SparseBivarPoly};

pub fn parse_poly_file(path: &Path) -> Result<(PrimeField, SparseBivarPoly)> {
    let text = std::fs::read_to_string(path)?;
    parse(&text).map_err(|e| match e {
        Error::Parse { line, msg, .. } => Error::Parse {
            path: Some(path.to_path_buf()),
            line,
            msg,
        },
        other => other,
    })
}

pub fn parse_poly_str(text: &str) -> Result<(PrimeField, SparseBivarPoly)> {
    parse(text)
}

fn parse(text: &str) -> Result<(PrimeField, SparseBivarPoly)> {
    let err = |line: usize, msg: String| Error::Parse {
        path: None,
        line,
        msg,
    };
    let mut field: Option<PrimeField> = None;
    let mut poly: Option<SparseBivarPoly> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match (&field, fields.as_slice()) {
            (None, ["p", value]) => {
                let p: u64 = value
                    .parse()
                    .map_err(|_| err(line_no, format!("invalid modulus {value:?}")))?;
                let f = PrimeField::new(p)?;
                field = Some(f);
                poly = Some(SparseBivarPoly::zero(f));
            }
            (None, _) => {
                return Err(err(line_no, "expected `p <prime>` before any term".into()));
            }
            (Some(_), ["p", ..]) => {
                return Err(err(line_no, "modulus given twice".into()));
            }
            (Some(f), [c, i, j]) => {
                let c: i128 = c
                    .parse()
                    .map_err(|_| err(line_no, format!("invalid coefficient {c:?}")))?;
                let i: u32 = i
                    .parse()
                    .map_err(|_| err(line_no, format!("invalid x-exponent {i:?}")))?;
                let j: u32 = j
                    .parse()
                    .map_err(|_| err(line_no, format!("invalid y-exponent {j:?}")))?;
                let f = *f;
                poly.as_mut()
                    .expect("set with field")
                    .add_term(Monomial::new(i, j), f.from_i128(c));
            }
            (Some(_), _) => {
                return Err(err(
                    line_no,
                    format!("expected `<coeff> <i> <j>`, got {content:?}"),
                ));
            }
        }
    }
    match (field, poly) {
        (Some(f), Some(poly)) => Ok((f, poly)),
        _ => Err(err(0, "missing `p <prime>` line".into())),
    }
}

/// Writes a polynomial back in the same format.
pub fn format_poly(poly: &SparseBivarPoly) -> String {
    let mut out = format!("p {}\n", poly.field().modulus());
    for (m, c) in poly.terms() {
        out.push_str(&format!("{c} {} {}\n", m.i, m.j));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::fermat_poly;

    #[test]
    fn parses_fermat_file() {
        let (f, poly) = parse_poly_str("p 5\n1 6 0\n1 0 6\n1 0 0\n").unwrap();
        assert_eq!(f.modulus(), 5);
        assert_eq!(poly, fermat_poly(f, 6));
    }

    #[test]
    fn reduces_and_sums_coefficients() {
        let (f, poly) = parse_poly_str("p 5\n6 6 0\n").unwrap();
        assert_eq!(poly.coeff(Monomial::new(6, 0)), f.elem(1));
        let (_, poly) = parse_poly_str("p 5\n5 6 0\n1 0 0\n").unwrap();
        assert_eq!(poly.len(), 1);
        let (f, poly) = parse_poly_str("# header\np 7 # modulus\n3 1 1\n5 1 1\n-1 0 0\n").unwrap();
        assert_eq!(poly.coeff(Monomial::new(1, 1)), f.elem(1));
        assert_eq!(poly.coeff(Monomial::ONE), f.elem(6));
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_poly_str("p 5\n1 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_poly_str("\n\n1 2 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_poly_str("p 5\n1 x 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(matches!(
            parse_poly_str("p 6\n"),
            Err(Error::InvalidModulus(6))
        ));
        assert!(matches!(
            parse_poly_str("# empty\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn format_round_trips() {
        let f = PrimeField::new(11).unwrap();
        let poly = SparseBivarPoly::from_terms(f, [(3, 4, 1), (10, 0, 5), (1, 0, 0)]);
        let (_, back) = parse_poly_str(&format_poly(&poly)).unwrap();
        assert_eq!(back, poly);
    }
}
