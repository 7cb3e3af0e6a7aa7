use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ratqa::{content_of, QPoly, Rational};

/// A differential operator `sum_i a_i(q) theta^i` with `theta = q d/dq`.
///
/// Coefficients sit to the left of the `theta` powers, so the grid entry `(i, j)`
/// is the coefficient of `q^j theta^i`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OreOperator {
    coeffs: Vec<QPoly>,
}

fn binomials(n: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![Rational::one(); i + 1];
        for k in 1..i {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

impl OreOperator {
    pub fn new(mut coeffs: Vec<QPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OreOperator { coeffs }
    }

    pub fn zero() -> Self {
        OreOperator::default()
    }

    pub fn one() -> Self {
        OreOperator::from_poly(QPoly::one())
    }

    pub fn from_poly(p: QPoly) -> Self {
        OreOperator::new(vec![p])
    }

    pub fn constant(c: Rational) -> Self {
        OreOperator::from_poly(QPoly::constant(c))
    }

    pub fn q() -> Self {
        OreOperator::from_poly(QPoly::x())
    }

    pub fn theta() -> Self {
        OreOperator::theta_pow(1)
    }

    pub fn theta_pow(k: usize) -> Self {
        let mut v = vec![QPoly::zero(); k + 1];
        v[k] = QPoly::one();
        OreOperator::new(v)
    }

    /// `grid[i][j]` is the coefficient of `q^j theta^i`.
    pub fn from_grid(grid: &[Vec<Rational>]) -> Self {
        OreOperator::new(grid.iter().map(|row| QPoly::new(row.clone())).collect())
    }

    /// Rectangular `(r+1) x (D+1)` coefficient grid; empty for the zero operator.
    pub fn grid(&self) -> Vec<Vec<Rational>> {
        let w = self.q_degree().map_or(0, |d| d + 1);
        self.coeffs.iter().map(|c| (0..w).map(|j| c.coeff(j)).collect()).collect()
    }

    /// Build `sum_j q^j Q_j(theta)` from the blocks `Q_j`, each a polynomial in `theta`.
    pub fn from_q_major(blocks: &[QPoly]) -> Self {
        let r = blocks.iter().filter_map(|b| b.degree()).max();
        let Some(r) = r else { return OreOperator::zero() };
        OreOperator::new((0..=r).map(|i| QPoly::new(blocks.iter().map(|b| b.coeff(i)).collect())).collect())
    }

    /// The blocks `Q_j(theta)` of `sum_j q^j Q_j(theta)`.
    pub fn q_major(&self) -> Vec<QPoly> {
        let w = self.q_degree().map_or(0, |d| d + 1);
        (0..w).map(|j| QPoly::new(self.coeffs.iter().map(|c| c.coeff(j)).collect())).collect()
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> QPoly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power of `theta`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    pub fn leading(&self) -> QPoly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        OreOperator::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// `p(q) * self`.
    pub fn lmul_poly(&self, p: &QPoly) -> Self {
        OreOperator::new(self.coeffs.iter().map(|c| c * p).collect())
    }

    /// Coefficients of `self` applied to a power series, `theta(q^n) = n q^n`.
    pub fn apply(&self, f: &[Rational]) -> Vec<Rational> {
        self.apply_frobenius(std::slice::from_ref(&f.to_vec())).pop().unwrap_or_default()
    }

    /// Residuals of `self` on a Frobenius family `f_0 + f_1 L + f_2 L^2/2 + ...` with `L = log q`:
    /// component `c` is `sum_b P^(b)(f_{c-b}) / b!`, where `P^(b)` differentiates in `theta`.
    pub fn apply_frobenius(&self, comps: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let len = comps.iter().map(|c| c.len()).min().unwrap_or(0);
        let binom = binomials(self.coeffs.len());
        let mut out = Vec::with_capacity(comps.len());
        for c in 0..comps.len() {
            let mut res = vec![Rational::zero(); len];
            for (n, slot) in res.iter_mut().enumerate() {
                let mut acc = Rational::zero();
                for (i, a) in self.coeffs.iter().enumerate() {
                    for (j, aij) in a.coeffs().iter().enumerate() {
                        if aij.is_zero() || j > n {
                            continue;
                        }
                        let m = Rational::from_int((n - j) as i64);
                        for b in 0..=c.min(i) {
                            let f = &comps[c - b][n - j];
                            if f.is_zero() {
                                continue;
                            }
                            acc += aij * &binom[i][b] * m.pow((i - b) as i64) * f;
                        }
                    }
                }
                *slot = acc;
            }
            out.push(res);
        }
        out
    }

    /// Integer coefficients with content 1, sign fixed by the top `theta` coefficient of the lowest `q`-block.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = content_of(self.coeffs.iter().flat_map(|p| p.coeffs().iter()));
        let mut out = self.scale(&c.recip());
        let lowest = out.q_major().into_iter().find(|b| !b.is_zero()).expect("nonzero operator");
        if lowest.leading().signum() < 0 {
            out = -&out;
        }
        out
    }

    /// Whether `self` is a nonzero rational multiple of `other`.
    pub fn proportional(&self, other: &OreOperator) -> bool {
        !self.is_zero() && !other.is_zero() && self.normalize() == other.normalize()
    }
}

/// Composition `a o b` under `theta q = q theta + q`.
pub fn ore_mul(a: &OreOperator, b: &OreOperator) -> OreOperator {
    if a.is_zero() || b.is_zero() {
        return OreOperator::zero();
    }
    let ra = a.coeffs.len() - 1;
    let binom = binomials(ra);
    let mut out = vec![QPoly::zero(); ra + b.coeffs.len()];
    for (k, bk) in b.coeffs.iter().enumerate() {
        // theta^l applied to b_k
        let mut ders = vec![bk.clone()];
        for l in 1..=ra {
            let next = ders[l - 1].euler();
            ders.push(next);
        }
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for l in 0..=i {
                if ders[l].is_zero() {
                    continue;
                }
                let t = (ai * &ders[l]).scale(&binom[i][l]);
                out[i - l + k] = &out[i - l + k] + &t;
            }
        }
    }
    OreOperator::new(out)
}

/// `sum_j q^j Q_j(theta) prod_i prod_{m=1}^{j} (d_i theta + m)` for `qop = sum_j q^j Q_j(theta)`.
pub fn bvs_transform(qop: &OreOperator, degrees: &[u32]) -> OreOperator {
    let mut blocks = qop.q_major();
    let mut factor = QPoly::one();
    for (j, b) in blocks.iter_mut().enumerate() {
        if j > 0 {
            for &d in degrees {
                factor = &factor * &QPoly::from_ints(&[j as i64, d as i64]);
            }
        }
        *b = &*b * &factor;
    }
    OreOperator::from_q_major(&blocks)
}

impl Mul for &OreOperator {
    type Output = OreOperator;
    fn mul(self, o: &OreOperator) -> OreOperator {
        ore_mul(self, o)
    }
}

impl Add for &OreOperator {
    type Output = OreOperator;
    fn add(self, o: &OreOperator) -> OreOperator {
        let n = self.coeffs.len().max(o.coeffs.len());
        OreOperator::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl Sub for &OreOperator {
    type Output = OreOperator;
    fn sub(self, o: &OreOperator) -> OreOperator {
        self + &-o
    }
}

impl Neg for &OreOperator {
    type Output = OreOperator;
    fn neg(self) -> OreOperator {
        OreOperator::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::render(self))
    }
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::render(self))
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    var: String,
    theta_order: usize,
    coeffs: Vec<Vec<Rational>>,
}

impl Serialize for OreOperator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorJson { var: "q".into(), theta_order: self.order().unwrap_or(0), coeffs: self.grid() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OreOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = OperatorJson::deserialize(d)?;
        if j.var != "q" {
            return Err(serde::de::Error::custom(format!("unsupported variable {}", j.var)));
        }
        let op = OreOperator::from_grid(&j.coeffs);
        if !op.is_zero() && op.order() != Some(j.theta_order) {
            return Err(serde::de::Error::custom("theta_order does not match coefficients"));
        }
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn commutation_law() {
        let th = OreOperator::theta();
        let q = OreOperator::q();
        assert_eq!(&th * &q, &(&q * &th) + &q);
        assert_eq!(&th * &th, OreOperator::theta_pow(2));
    }

    #[test]
    fn apply_theta_to_log_like_series() {
        // sum q^m / m
        let mut f = vec![Rational::zero()];
        f.extend((1..6).map(|m| Rational::new(1, m)));
        let g = OreOperator::theta().apply(&f);
        assert_eq!(g, ints(&[0, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn normalize_clears_content_and_sign() {
        let half = Rational::new(1, 2);
        let op = &OreOperator::theta_pow(4).scale(&half) - &OreOperator::q();
        assert_eq!(op.normalize(), &OreOperator::theta_pow(4) - &OreOperator::q().scale(&Rational::from_int(2)));
        let neg = -&OreOperator::theta_pow(4);
        assert_eq!(neg.normalize(), OreOperator::theta_pow(4));
    }

    #[test]
    fn empty_degree_list_is_identity() {
        let op = &(&OreOperator::q() * &OreOperator::theta_pow(2)) + &OreOperator::theta();
        assert_eq!(bvs_transform(&op, &[]), op);
        assert_eq!(bvs_transform(&OreOperator::theta(), &[1]), OreOperator::theta());
        // q theta -> q theta (theta + 1)
        let qt = &OreOperator::q() * &OreOperator::theta();
        let expect = &OreOperator::q() * &(&OreOperator::theta() * &(&OreOperator::theta() + &OreOperator::one()));
        assert_eq!(bvs_transform(&qt, &[1]), expect);
    }

    #[test]
    fn json_round_trip() {
        let op = &(&OreOperator::q() * &OreOperator::theta()).scale(&Rational::new(-3, 2)) + &OreOperator::theta_pow(2);
        let j = serde_json::to_string(&op).unwrap();
        assert_eq!(j, r#"{"var":"q","theta_order":2,"coeffs":[["0","0"],["0","-3/2"],["1","0"]]}"#);
        let back: OreOperator = serde_json::from_str(&j).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn grid_and_blocks_agree() {
        let op = OreOperator::from_grid(&[ints(&[1, 2]), ints(&[0, 3]), ints(&[5])]);
        assert_eq!(op.q_major(), vec![QPoly::from_ints(&[1, 0, 5]), QPoly::from_ints(&[2, 3])]);
        assert_eq!(OreOperator::from_q_major(&op.q_major()), op);
        assert_eq!(op.grid()[2], ints(&[5, 0]));
    }
}
