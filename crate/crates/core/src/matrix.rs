//! Dense square matrices over a [`RingSpec`].

use std::fmt;

use crate::ring::{RingElem, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: RingSpec,
    dim: usize,
    data: Vec<RingElem>,
}

impl Matrix {
    pub fn zero(ring: &RingSpec, dim: usize) -> Self {
        Matrix {
            ring: ring.clone(),
            dim,
            data: vec![ring.zero(); dim * dim],
        }
    }

    pub fn identity(ring: &RingSpec, dim: usize) -> Self {
        let mut m = Self::zero(ring, dim);
        for i in 0..dim {
            m.set(i, i, ring.one());
        }
        m
    }

    /// The matrix unit `E_{ij}` (0-based).
    pub fn unit(ring: &RingSpec, dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(ring, dim);
        m.set(i, j, ring.one());
        m
    }

    /// `None` unless `rows` is square and every entry lies in `ring`.
    pub fn from_rows(ring: &RingSpec, rows: Vec<Vec<RingElem>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        let data: Vec<RingElem> = rows.into_iter().flatten().collect();
        if data.iter().any(|x| x.spec() != *ring) {
            return None;
        }
        Some(Matrix {
            ring: ring.clone(),
            dim,
            data,
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RingElem) {
        self.data[i * self.dim + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            ring: self.ring.clone(),
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            ring: self.ring.clone(),
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, r: &RingElem) -> Matrix {
        let data = self.data.iter().map(|a| a * r).collect();
        Matrix {
            ring: self.ring.clone(),
            dim: self.dim,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zero(&self.ring, n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + &(a * b);
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn rows(&self) -> impl Iterator<Item = &[RingElem]> {
        self.data.chunks(self.dim.max(1)).take(self.dim)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_multiply() {
        let q = RingSpec::Rationals;
        let e12 = Matrix::unit(&q, 2, 0, 1);
        let e21 = Matrix::unit(&q, 2, 1, 0);
        assert_eq!(e12.mul(&e21), Matrix::unit(&q, 2, 0, 0));
        assert!(e12.mul(&e12).is_zero());
        assert_eq!(e12.add(&e21).mul(&e12.add(&e21)), Matrix::identity(&q, 2));
        assert_eq!(e12.to_string(), "0 1\n0 0");
    }

    #[test]
    fn from_rows_checks_shape() {
        let z = RingSpec::Integers;
        assert!(Matrix::from_rows(&z, vec![vec![z.one()], vec![z.one()]]).is_none());
        assert!(Matrix::from_rows(&z, vec![vec![RingSpec::Rationals.one()]]).is_none());
    }
}
