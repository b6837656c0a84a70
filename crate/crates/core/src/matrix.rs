//! Dense matrices of polynomial entries, with exact determinants and
//! inverses. Inverses are only taken when the determinant is a nonzero
//! constant (a unit), in which case the adjugate keeps every entry
//! polynomial.

use crate::scalars::{GaussRat, Scalar, Vars};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix dimensions do not match")]
    DimMismatch,
    #[error("determinant is not a nonzero constant: {0}")]
    NotUnitDeterminant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat {
    vars: Vars,
    rows: usize,
    cols: usize,
    a: Vec<Scalar>,
}

impl PolyMat {
    pub fn zeros(vars: Vars, rows: usize, cols: usize) -> Self {
        let a = vec![Scalar::zero(vars.clone()); rows * cols];
        PolyMat { vars, rows, cols, a }
    }

    pub fn identity(vars: Vars, n: usize) -> Self {
        let mut m = PolyMat::zeros(vars.clone(), n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one(vars.clone());
        }
        m
    }

    pub fn from_fn(vars: Vars, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = PolyMat::zeros(vars, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(vars: Vars, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        PolyMat { vars, rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|s| s.is_zero())
    }

    pub fn add(&self, rhs: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PolyMat {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().zip(&rhs.a).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn sub(&self, rhs: &PolyMat) -> PolyMat {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> PolyMat {
        PolyMat {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|x| x.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> PolyMat {
        PolyMat {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn scale_rat(&self, c: &GaussRat) -> PolyMat {
        self.scale(&Scalar::constant(self.vars.clone(), c.clone()))
    }

    pub fn mul(&self, rhs: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = PolyMat::zeros(self.vars.clone(), self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let p = self[(i, k)].mul(&rhs[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&p);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.vars.clone());
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc.add(&self[(i, j)].mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> PolyMat {
        PolyMat::from_fn(self.vars.clone(), self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj(&self) -> PolyMat {
        PolyMat {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|x| x.conj()).collect(),
        }
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> PolyMat {
        PolyMat::from_fn(self.vars.clone(), row_idx.len(), col_idx.len(), |i, j| {
            self[(row_idx[i], col_idx[j])].clone()
        })
    }

    /// Determinant by dynamic programming over column subsets (exact, no
    /// division).
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one(self.vars.clone());
        }
        // dp[mask] = determinant contribution using the first popcount(mask)
        // rows and the column set `mask`.
        let mut dp = vec![None::<Scalar>; 1 << n];
        dp[0] = Some(Scalar::one(self.vars.clone()));
        for mask in 0usize..(1 << n) {
            let Some(cur) = dp[mask].clone() else { continue };
            if cur.is_zero() && mask != 0 {
                continue;
            }
            let row = (mask as u32).count_ones() as usize;
            if row == n {
                continue;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    continue;
                }
                let e = &self[(row, col)];
                if e.is_zero() {
                    continue;
                }
                // new inversions: already-used columns above this one
                let sign_flips = (mask >> (col + 1)).count_ones();
                let mut term = cur.mul(e);
                if sign_flips % 2 == 1 {
                    term = term.neg();
                }
                let nm = mask | (1 << col);
                dp[nm] = Some(match dp[nm].take() {
                    Some(acc) => acc.add(&term),
                    None => term,
                });
            }
        }
        dp[(1 << n) - 1].clone().unwrap_or_else(|| Scalar::zero(self.vars.clone()))
    }

    /// The determinant as a unit (nonzero constant), if it is one.
    pub fn unit_det(&self) -> Option<GaussRat> {
        let d = self.det();
        d.as_constant().filter(|c| !c.is_zero())
    }

    /// Exact inverse; requires the determinant to be a nonzero constant so
    /// the inverse stays polynomial over the whole chart.
    pub fn inv_unit(&self) -> Result<PolyMat, MatrixError> {
        assert_eq!(self.rows, self.cols);
        let det = self.det();
        let unit = det
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| MatrixError::NotUnitDeterminant(det.to_string()))?;
        let n = self.rows;
        let inv_det = Scalar::constant(self.vars.clone(), unit.inv());
        let mut adj = PolyMat::zeros(self.vars.clone(), n, n);
        let all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = all.iter().copied().filter(|&r| r != i).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&c| c != j).collect();
                let minor = self.submatrix(&rows, &cols).det();
                let mut cof = minor.mul(&inv_det);
                if (i + j) % 2 == 1 {
                    cof = cof.neg();
                }
                adj[(j, i)] = cof;
            }
        }
        Ok(adj)
    }
}

impl std::ops::Index<(usize, usize)> for PolyMat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.a[i * self.cols + j]
    }
}
