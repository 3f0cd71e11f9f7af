use std::fmt;

use super::{Polynomial, Rational};
use crate::error::{check_dim, Error, Result};

/// Square matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn new(nvars: usize, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let size = rows.len();
        for row in &rows {
            check_dim(size, row.len())?;
            for p in row {
                check_dim(nvars, p.nvars())?;
            }
        }
        Ok(PolyMatrix { nvars, rows })
    }

    pub fn from_fn(nvars: usize, size: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let rows = (0..size).map(|i| (0..size).map(|j| f(i, j)).collect()).collect();
        PolyMatrix::new(nvars, rows).expect("from_fn produces consistent shapes")
    }

    pub fn identity(nvars: usize, size: usize) -> Self {
        Self::from_fn(nvars, size, |i, j| {
            if i == j {
                Polynomial::one(nvars)
            } else {
                Polynomial::zero(nvars)
            }
        })
    }

    pub fn diagonal(nvars: usize, diag: Vec<Polynomial>) -> Self {
        let n = diag.len();
        Self::from_fn(nvars, n, |i, j| if i == j { diag[i].clone() } else { Polynomial::zero(nvars) })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.nvars, self.size(), |i, j| self.rows[j][i].clone())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_fn(self.nvars, self.size(), |i, j| self.rows[i][j].scale(r))
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        check_dim(self.size(), other.size())?;
        check_dim(self.nvars, other.nvars)?;
        let n = self.size();
        Ok(Self::from_fn(self.nvars, n, |i, j| {
            let mut acc = Polynomial::zero(self.nvars);
            for k in 0..n {
                acc += &(&self.rows[i][k] * &other.rows[k][j]);
            }
            acc
        }))
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMatrix::identity(self.nvars, self.size())
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Checks `self * inverse == 1` and `inverse * self == 1` exactly.
    pub fn check_inverse(&self, inverse: &PolyMatrix) -> Result<()> {
        if self.mul(inverse)?.is_identity() && inverse.mul(self)?.is_identity() {
            Ok(())
        } else {
            Err(Error::invalid("supplied inverse does not satisfy G * G^-1 = 1"))
        }
    }

    /// Exact determinant by cofactor expansion; desk-scale sizes only.
    pub fn determinant(&self) -> Polynomial {
        fn det(m: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
            match m.len() {
                0 => Polynomial::one(nvars),
                1 => m[0][0].clone(),
                n => {
                    let mut acc = Polynomial::zero(nvars);
                    for j in 0..n {
                        if m[0][j].is_zero() {
                            continue;
                        }
                        let minor: Vec<Vec<Polynomial>> = m[1..]
                            .iter()
                            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, p)| p.clone()).collect())
                            .collect();
                        let term = &m[0][j] * &det(&minor, nvars);
                        if j % 2 == 0 {
                            acc += &term;
                        } else {
                            acc -= &term;
                        }
                    }
                    acc
                }
            }
        }
        det(&self.rows, self.nvars)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> PolyMatrix {
        let rows = (0..self.size())
            .filter(|&i| i != skip_row)
            .map(|i| (0..self.size()).filter(|&j| j != skip_col).map(|j| self.rows[i][j].clone()).collect())
            .collect();
        PolyMatrix { nvars: self.nvars, rows }
    }

    /// Exact inverse when the determinant is a nonzero constant, so that the
    /// inverse is again polynomial.
    pub fn inverse(&self) -> Option<PolyMatrix> {
        let det = self.determinant();
        if !det.is_constant() || det.is_zero() {
            return None;
        }
        let inv_det = det.constant_term().recip();
        let n = self.size();
        Some(Self::from_fn(self.nvars, n, |i, j| {
            let cof = self.minor(j, i).determinant().scale(&inv_det);
            if (i + j) % 2 == 1 {
                -cof
            } else {
                cof
            }
        }))
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unipotent_inverse() {
        let n = 2;
        let x = Polynomial::var(n, 0);
        let g = PolyMatrix::new(n, vec![vec![Polynomial::one(n), x.clone()], vec![Polynomial::zero(n), Polynomial::one(n)]]).unwrap();
        let gi = PolyMatrix::new(n, vec![vec![Polynomial::one(n), -x], vec![Polynomial::zero(n), Polynomial::one(n)]]).unwrap();
        g.check_inverse(&gi).unwrap();
        assert_eq!(g.determinant(), Polynomial::one(n));
        assert!(g.check_inverse(&g).is_err());
        assert_eq!(g.inverse(), Some(gi));
    }

    #[test]
    fn curved_metric_inverse() {
        let n = 2;
        let p = |s: &str| Polynomial::parse(s, n).unwrap();
        let g = PolyMatrix::new(n, vec![vec![p("1"), p("x1")], vec![p("x1"), p("1 + x1^2")]]).unwrap();
        let gi = g.inverse().unwrap();
        assert_eq!(gi.rows(), &[vec![p("1 + x1^2"), p("-x1")], vec![p("-x1"), p("1")]]);
        let singular = PolyMatrix::new(n, vec![vec![p("x1"), p("0")], vec![p("0"), p("1")]]).unwrap();
        assert!(singular.inverse().is_none());
    }
}
