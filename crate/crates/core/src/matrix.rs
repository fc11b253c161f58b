//! Dense matrices over `F_p`: products, powers, and rank by exact
//! elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixFp {
    field: PrimeField,
    rows: usize,
    cols: usize,
    // row-major
    data: Vec<Fp>,
}

impl MatrixFp {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatrixFp {
            field,
            rows,
            cols,
            data: vec![Fp::ZERO; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Fp::ONE;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (idx, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {idx} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Ok(MatrixFp {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fp {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fp) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fp] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn transpose(&self) -> MatrixFp {
        let mut t = MatrixFp::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &MatrixFp) -> Result<MatrixFp> {
        if self.field != rhs.field {
            return Err(Error::ModulusMismatch {
                left: self.field.modulus(),
                right: rhs.field.modulus(),
            });
        }
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.field.modulus() as u64;
        let mut out = MatrixFp::zero(self.field, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for (k, a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a = a.value() as u64;
                for (slot, b) in acc.iter_mut().zip(rhs.row(k)) {
                    if !b.is_zero() {
                        *slot = (*slot + a * b.value() as u64) % p;
                    }
                }
            }
            for (c, v) in acc.iter().enumerate() {
                out.data[r * rhs.cols + c] = Fp::from_raw(*v as u32);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<MatrixFp> {
        self.require_square()?;
        let mut acc = MatrixFp::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Rank by row-echelon elimination. Works on a private copy.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for k in c..cols {
                    m.swap(pivot * cols + k, rank * cols + k);
                }
            }
            let inv = f.inv(m[rank * cols + c]).expect("pivot is nonzero");
            for k in c..cols {
                m[rank * cols + k] = f.mul(m[rank * cols + k], inv);
            }
            for r in rank + 1..rows {
                let factor = m[r * cols + c];
                if factor.is_zero() {
                    continue;
                }
                for k in c..cols {
                    let pk = m[rank * cols + k];
                    if !pk.is_zero() {
                        m[r * cols + k] = f.sub(m[r * cols + k], f.mul(factor, pk));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Rank by column operations: each row picks a pivot column and clears
    /// that row in every other remaining column. Independent of [`rank`].
    ///
    /// [`rank`]: MatrixFp::rank
    pub fn rank_by_columns(&self) -> usize {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        // column-major copy
        let mut colv: Vec<Vec<Fp>> = (0..cols)
            .map(|c| (0..rows).map(|r| self.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        for r in 0..rows {
            let Some(pc) = (rank..cols).find(|&c| !colv[c][r].is_zero()) else {
                continue;
            };
            colv.swap(rank, pc);
            let inv = f.inv(colv[rank][r]).expect("pivot is nonzero");
            let pivot: Vec<Fp> = colv[rank].iter().map(|&v| f.mul(v, inv)).collect();
            for col in colv.iter_mut().skip(rank + 1) {
                let factor = col[r];
                if factor.is_zero() {
                    continue;
                }
                for (x, &pv) in col.iter_mut().zip(&pivot).skip(r) {
                    *x = f.sub(*x, f.mul(factor, pv));
                }
            }
            colv[rank] = pivot;
            rank += 1;
        }
        rank
    }

    /// Returns `(r, t)` with `r = rank(M^bound)` and `t` the least `k >= 0`
    /// such that `rank(M^k) = r`. Powers are formed one at a time and the
    /// loop stops as soon as two consecutive ranks agree.
    pub fn stable_rank_and_index(&self, bound: usize) -> Result<(usize, usize)> {
        self.require_square()?;
        let mut prev_rank = self.rows;
        if bound == 0 || prev_rank == 0 {
            return Ok((prev_rank, 0));
        }
        let mut power = self.clone();
        for k in 1..=bound {
            if k > 1 {
                power = power.mul(self)?;
            }
            let r = power.rank();
            if r == prev_rank {
                return Ok((r, k - 1));
            }
            if r == 0 || k == bound {
                return Ok((r, k));
            }
            prev_rank = r;
        }
        unreachable!("loop returns by k = bound")
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

impl fmt::Debug for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "MatrixFp {}x{} over F_{}",
            self.rows,
            self.cols,
            self.field.modulus()
        )?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn random(f: PrimeField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> MatrixFp {
        let p = f.modulus() as i64;
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        MatrixFp::from_rows(f, &data).unwrap()
    }

    // Low-rank matrices make the rank comparison meaningful.
    fn random_low_rank(f: PrimeField, n: usize, rng: &mut ChaCha8Rng) -> MatrixFp {
        let k = rng.gen_range(0..=n);
        let a = random(f, n, k, rng);
        let b = random(f, k, n, rng);
        if k == 0 {
            return MatrixFp::zero(f, n, n);
        }
        a.mul(&b).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(MatrixFp::identity(field(5), 3).rank(), 3);
        assert_eq!(MatrixFp::zero(field(5), 4, 4).rank(), 0);
        let m = MatrixFp::from_rows(field(5), &[[1, 2], [2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_does_not_mutate() {
        let m = MatrixFp::from_rows(field(7), &[[0, 3, 1], [2, 2, 2], [4, 1, 0]]).unwrap();
        let before = m.clone();
        let _ = m.rank();
        assert_eq!(m, before);
    }

    #[test]
    fn mul_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = field(3);
        let a = random(f, 5, 5, &mut rng);
        assert_eq!(a.mul(&MatrixFp::identity(f, 5)).unwrap(), a);

        let n = MatrixFp::from_rows(field(2), &[[0, 1], [0, 0]]).unwrap();
        assert!(n.mul(&n).unwrap().is_zero());

        let f7 = field(7);
        for _ in 0..50 {
            let a = random_low_rank(f7, 10, &mut rng);
            let b = random_low_rank(f7, 10, &mut rng);
            let ab = a.mul(&b).unwrap();
            assert!(ab.rank() <= a.rank().min(b.rank()));
        }
    }

    #[test]
    fn mul_shape_and_modulus_errors() {
        let a = MatrixFp::zero(field(5), 2, 3);
        assert!(matches!(a.mul(&a), Err(Error::Shape(_))));
        let b = MatrixFp::zero(field(7), 3, 2);
        assert!(matches!(a.mul(&b), Err(Error::ModulusMismatch { .. })));
        assert!(matches!(a.stable_rank_and_index(2), Err(Error::Shape(_))));
        assert!(MatrixFp::from_rows(field(5), &[vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn stable_rank_examples() {
        let z = MatrixFp::zero(field(5), 6, 6);
        assert_eq!(z.stable_rank_and_index(6).unwrap(), (0, 1));
        let i = MatrixFp::identity(field(5), 4);
        assert_eq!(i.stable_rank_and_index(4).unwrap(), (4, 0));
        // Jordan block of size 3: ranks 2, 1, 0.
        let j = MatrixFp::from_rows(field(3), &[[0, 1, 0], [0, 0, 1], [0, 0, 0]]).unwrap();
        assert_eq!(j.stable_rank_and_index(3).unwrap(), (0, 3));
        assert_eq!(j.stable_rank_and_index(2).unwrap(), (1, 2));
        // Nilpotent block plus a unit: ranks 3, 2, 1, 1.
        let m = MatrixFp::from_rows(
            field(5),
            &[[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 2]],
        )
        .unwrap();
        assert_eq!(m.stable_rank_and_index(4).unwrap(), (1, 3));
    }

    #[test]
    fn power_ranks_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2, 3, 5, 7] {
            let f = field(p);
            for _ in 0..20 {
                let m = random_low_rank(f, 8, &mut rng);
                let mut ranks = vec![8];
                let mut pw = MatrixFp::identity(f, 8);
                for _ in 0..9 {
                    pw = pw.mul(&m).unwrap();
                    ranks.push(pw.rank());
                }
                assert!(ranks.windows(2).all(|w| w[1] <= w[0]));
                assert_eq!(ranks[8], ranks[9]);
                let (r, t) = m.stable_rank_and_index(8).unwrap();
                assert_eq!(r, ranks[8]);
                assert_eq!(t, ranks.iter().position(|&x| x == r).unwrap());
            }
        }
    }

    #[test]
    fn two_rank_routines_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for p in [2, 3, 5, 7] {
            let f = field(p);
            for case in 0..1000 {
                let rows = rng.gen_range(1..9);
                let cols = rng.gen_range(1..9);
                let m = if case % 2 == 0 {
                    random(f, rows, cols, &mut rng)
                } else {
                    let k = rng.gen_range(1..=rows.min(cols));
                    random(f, rows, k, &mut rng)
                        .mul(&random(f, k, cols, &mut rng))
                        .unwrap()
                };
                let r = m.rank();
                assert_eq!(r, m.rank_by_columns(), "p={p} case={case} {m:?}");
                assert_eq!(r, m.transpose().rank());
                assert!(r <= rows.min(cols));
            }
        }
    }
}
