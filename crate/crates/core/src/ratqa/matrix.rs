use std::fmt;

use malachite_base::num::arithmetic::traits::{DivRem, Lcm};
use malachite_base::num::basic::traits::Zero;
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use serde::{Deserialize, Serialize};

use super::{QPoly, Rational};

/// Dense rectangular matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = QMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + &(a * b);
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a.get(r, c).recip();
            for j in c..a.cols {
                let v = a.get(r, j) * &inv;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in c..a.cols {
                    let rv = a.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = a.get(i, j) - &(&f * rv);
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        integer_echelon(self).1.len()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (red, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = red.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (red, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Scale every row to integers and run fraction-free elimination to echelon form.
fn integer_echelon(m: &QMatrix) -> (Vec<Vec<Integer>>, Vec<usize>) {
    let mut a: Vec<Vec<Integer>> = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let mut l = Natural::from(1u32);
            for x in row {
                if !x.is_zero() {
                    l = (&l).lcm(x.denom_natural());
                }
            }
            let li = Rational::from_integer(Integer::from(l));
            row.iter()
                .map(|x| (x * &li).to_integer().expect("row scaling"))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = Integer::from(1);
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| a[i][c] != 0u32) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        let piv = prow[c].clone();
        for row in rest.iter_mut() {
            let f = std::mem::replace(&mut row[c], Integer::ZERO);
            for j in c + 1..m.cols {
                let v = &piv * &row[j] - &f * &prow[j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem == 0u32, "inexact fraction-free step");
                row[j] = q;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of the right kernel of `m`; empty when the kernel is trivial.
pub fn nullspace(m: &QMatrix) -> Vec<Vec<Rational>> {
    let (ech, pivots) = integer_echelon(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rational::zero(); m.cols];
        x[f] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rational::zero();
            for j in pc + 1..m.cols {
                if ech[r][j] != 0u32 && !x[j].is_zero() {
                    s += &x[j] * Rational::from_integer(ech[r][j].clone());
                }
            }
            if !s.is_zero() {
                x[pc] = -s / Rational::from_integer(ech[r][pc].clone());
            }
        }
        out.push(x);
    }
    out
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
pub fn ffdet(m: &[Vec<QPoly>]) -> QPoly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "ffdet needs a square matrix");
    if n == 0 {
        return QPoly::one();
    }
    let mut a: Vec<Vec<QPoly>> = m.to_vec();
    let mut prev = QPoly::one();
    let mut sign = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return QPoly::zero();
        };
        if p != k {
            a.swap(k, p);
            sign = !sign;
        }
        if k + 1 == n {
            break;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let prow = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let v = &(&prow[k] * &row[j]) - &(&row[k] * &prow[j]);
                row[j] = v.div_exact(&prev).expect("inexact fraction-free step");
            }
            row[k] = QPoly::zero();
        }
        prev = prow[k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("degenerate elimination")]
    Degenerate,
    #[error("matrix must have exactly one more column than rows")]
    Shape,
}

/// Signed maximal minors `f_i = (-1)^(i+1) det C_i` of a `k x (k+1)` polynomial matrix,
/// with the polynomial gcd and rational content removed.
pub fn polymatrix_kernel(c: &[Vec<QPoly>]) -> Result<Vec<QPoly>, KernelError> {
    let rows = c.len();
    let cols = rows + 1;
    if c.iter().any(|r| r.len() != cols) {
        return Err(KernelError::Shape);
    }
    let mut f = Vec::with_capacity(cols);
    for i in 0..cols {
        let minor: Vec<Vec<QPoly>> = c
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let d = ffdet(&minor);
        f.push(if i % 2 == 0 { -d } else { d });
    }
    let g = f.iter().fold(QPoly::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(KernelError::Degenerate);
    }
    let f: Vec<QPoly> = f.iter().map(|x| x.div_exact(&g).expect("gcd divides")).collect();
    let cont = super::poly::content_of(f.iter().flat_map(|p| p.coeffs().iter()));
    let inv = cont.recip();
    Ok(f.iter().map(|p| p.scale(&inv)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn rref_and_solve() {
        let m = QMatrix::from_ints(&[&[2, 1], &[1, 3]]);
        let x = m.solve(&[r(5), r(10)]).unwrap();
        assert_eq!(x, vec![r(1), r(3)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
    }

    #[test]
    fn inconsistent_system() {
        let m = QMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&[r(1), r(3)]).is_none());
    }

    #[test]
    fn rank_deficient_kernel() {
        let m = QMatrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = nullspace(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn ffdet_sign_on_swap() {
        let p = |c: &[i64]| QPoly::from_ints(c);
        let m = vec![vec![p(&[]), p(&[1])], vec![p(&[1]), p(&[])]];
        assert_eq!(ffdet(&m), p(&[-1]));
    }
}
