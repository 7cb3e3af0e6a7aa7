use serde::{Deserialize, Serialize};

use crate::pfops::OreOperator;
use crate::ratqa::{polymatrix_kernel, QMatrix, QPoly, Rational};

use super::basis::TwistedBasis;
use super::wdvv::CorrelatorTable;
use super::QconnError;

/// Matrix of quantum multiplication by `T_1`: `T_1 * T_j = sum_i M[i][j] T_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionMatrix {
    pub entries: Vec<Vec<QPoly>>,
}

impl ConnectionMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Coefficient matrix of `q^d`.
    pub fn at(&self, d: usize) -> QMatrix {
        QMatrix::from_rows(self.entries.iter().map(|row| row.iter().map(|p| p.coeff(d)).collect()).collect())
    }

    pub fn q_degree(&self) -> usize {
        self.entries.iter().flatten().filter_map(|p| p.degree()).max().unwrap_or(0)
    }
}

/// `M[i][j] = sum_d sum_k <T_1, T_j, T_k>_d q^d g^{ki}`.
pub fn connection_matrix(table: &CorrelatorTable, basis: &TwistedBasis) -> Result<ConnectionMatrix, QconnError> {
    let n = basis.len();
    let mut entries = vec![vec![QPoly::zero(); n]; n];
    for j in 0..n {
        for d in 0..=table.d_max {
            let pairs: Vec<Rational> = (0..n)
                .map(|k| table.get(1, j, k, d).cloned().ok_or(QconnError::Stuck(vec![(1, j, k, d)])))
                .collect::<Result<_, _>>()?;
            let col = basis.dual.mul_vec(&pairs);
            for (i, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    entries[i][j] = &entries[i][j] + &QPoly::monomial(v, d);
                }
            }
        }
    }
    Ok(ConnectionMatrix { entries })
}

/// Operator annihilating the last component `s_m` of every flat section `ds/dt = M s`.
pub fn qde_eliminate(m: &ConnectionMatrix) -> Result<OreOperator, QconnError> {
    let n = m.size();
    if n == 0 {
        return Err(QconnError::Spec("empty connection matrix".into()));
    }
    // rows c_j with d^j s_m / dt^j = c_j . s
    let mut c: Vec<Vec<QPoly>> = Vec::with_capacity(n + 1);
    let mut cur = vec![QPoly::zero(); n];
    cur[n - 1] = QPoly::one();
    c.push(cur.clone());
    for _ in 0..n {
        let mut next: Vec<QPoly> = cur.iter().map(|p| p.euler()).collect();
        for (k, ck) in cur.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            for (i, slot) in next.iter_mut().enumerate() {
                let e = &m.entries[k][i];
                if !e.is_zero() {
                    *slot = &*slot + &(ck * e);
                }
            }
        }
        c.push(next.clone());
        cur = next;
    }
    // (n) x (n+1) system: entry (i, j) is component i of c_j
    let sys: Vec<Vec<QPoly>> = (0..n).map(|i| (0..=n).map(|j| c[j][i].clone()).collect()).collect();
    let f = polymatrix_kernel(&sys)?;
    Ok(OreOperator::new(f).normalize())
}

/// `ad_N`-inverse of `(d + ad_N)` applied to `r`, for nilpotent `N`.
fn solve_level(nmat: &QMatrix, r: &QMatrix, d: usize) -> QMatrix {
    let dd = Rational::from_int(d as i64);
    let mut out = QMatrix::zeros(r.rows(), r.cols());
    let mut term = r.clone();
    let mut scale = dd.recip();
    let mut sign = 1i64;
    while !is_zero(&term) {
        add_scaled(&mut out, &term, &scale.mul_int(sign));
        term = sub(&nmat.mul(&term), &term.mul(nmat));
        scale = &scale / &dd;
        sign = -sign;
    }
    out
}

fn is_zero(m: &QMatrix) -> bool {
    (0..m.rows()).all(|i| m.row(i).iter().all(|x| x.is_zero()))
}

fn sub(a: &QMatrix, b: &QMatrix) -> QMatrix {
    QMatrix::from_rows((0..a.rows()).map(|i| a.row(i).iter().zip(b.row(i)).map(|(x, y)| x - y).collect()).collect())
}

fn add_scaled(acc: &mut QMatrix, m: &QMatrix, c: &Rational) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if !v.is_zero() {
                let w = acc.get(i, j) + &(v * c);
                acc.set(i, j, w);
            }
        }
    }
}

/// Coefficients `J_d` of `J = e^{tT_1} sum_d q^d J_d` (with `z = 1`), as basis coordinates.
///
/// The fundamental solution `e^{tN} X` of the flat-section system satisfies
/// `d X_d + [N, X_d] = sum_{e>=1} X_{d-e} M_e`, `X_0 = 1`; `J_d` is the first column of `X_d`.
pub fn j_series(m: &ConnectionMatrix, order: usize) -> Result<Vec<Vec<Rational>>, QconnError> {
    let n = m.size();
    let nmat = m.at(0);
    let mut pw = nmat.clone();
    for _ in 0..n {
        pw = pw.mul(&nmat);
    }
    if !is_zero(&pw) {
        return Err(QconnError::NotNilpotent);
    }
    let ms: Vec<QMatrix> = (0..=m.q_degree()).map(|d| m.at(d)).collect();
    let mut xs: Vec<QMatrix> = vec![QMatrix::identity(n)];
    for d in 1..=order {
        let mut r = QMatrix::zeros(n, n);
        for (e, me) in ms.iter().enumerate().skip(1).take_while(|(e, _)| *e <= d) {
            add_scaled(&mut r, &xs[d - e].mul(me), &Rational::one());
        }
        xs.push(solve_level(&nmat, &r, d));
    }
    Ok(xs.iter().map(|x| (0..n).map(|i| x.get(i, 0).clone()).collect()).collect())
}

/// `sum_d q^d prod_i prod_{m=1}^{d d_i} (d_i H + m) J_d` with `H` acting by `hmul`.
pub fn lefschetz_series(j: &[Vec<Rational>], hmul: &QMatrix, degrees: &[u32]) -> Vec<Vec<Rational>> {
    j.iter()
        .enumerate()
        .map(|(d, jd)| {
            let mut v = jd.clone();
            for &di in degrees {
                for m in 1..=(d as u32 * di) {
                    let hv = hmul.mul_vec(&v);
                    v = hv
                        .iter()
                        .zip(&v)
                        .map(|(a, b)| a.mul_int(di as i64) + b.mul_int(m as i64))
                        .collect();
                }
            }
            v
        })
        .collect()
}
