//! Small dense square matrices over `Scalar`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
            data.extend(r);
        }
        Ok(Matrix { n, data })
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut data = vec![field.zero(); n * n];
        for i in 0..n {
            data[i * n + i] = field.one();
        }
        Matrix { n, data }
    }

    pub fn scalar(s: Scalar) -> Matrix {
        Matrix { n: 1, data: vec![s] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<Scalar> = None;
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    acc = Some(match acc {
                        None => t,
                        Some(s) => s + t,
                    });
                }
                data.push(acc.unwrap_or_else(|| zero_like(self.get(i, j))));
            }
        }
        Matrix { n, data }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|i| {
                let mut acc = zero_like(&v[0]);
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = self.get(0, 0).clone();
        for i in 1..self.n {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    /// Exact Gaussian elimination.
    pub fn is_invertible(&self) -> bool {
        let n = self.n;
        let mut a: Vec<Vec<Scalar>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return false;
            };
            a.swap(col, p);
            let inv = a[col][col].inv().expect("pivot is nonzero");
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= &t;
                }
            }
        }
        true
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[&Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let zero = zero_like(&blocks[0].data[0]);
        let mut data = vec![zero; n * n];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    data[(off + i) * n + off + j] = b.get(i, j).clone();
                }
            }
            off += b.n;
        }
        Matrix { n, data }
    }

    /// For a monomial matrix (one nonzero per row), the (column, entry) of each row.
    pub fn monomial_rows(&self) -> Option<Vec<(usize, Scalar)>> {
        (0..self.n)
            .map(|i| {
                let mut nz = self.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero());
                let first = nz.next()?;
                nz.next().is_none().then(|| (first.0, first.1.clone()))
            })
            .collect()
    }
}

pub(crate) fn zero_like(s: &Scalar) -> Scalar {
    s.field().zero()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
