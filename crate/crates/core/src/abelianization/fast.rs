//! Exact evaluation of the abelianized sum along lines `H = eps * y` through integer points.
//!
//! For a fixed degree `d` the toric coefficient restricted to the line is
//! `K(d) * P(eps) * exp(sum_p S_p eps^p / (p L^p))`, where `K` is a ratio of factorials,
//! `P` collects the root factors and the divisor factors containing `m = 0`, and the
//! `S_p` are integer power sums scaled by `L = lcm(1..E)`. Everything below is integer
//! arithmetic except one final division per level.

use malachite_base::num::arithmetic::traits::{Lcm, Pow};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::natural::Natural;
use rayon::prelude::*;

use super::toric::{dot, enumerate_degrees, Factor, ToricData, ToricError};
use crate::ratqa::{factorial, Integer, Rational};

struct Term {
    factor: Factor,
    bundle: bool,
}

struct Point {
    /// `ell_c(y)^p` for every factor `c` and `p = 0..=M`.
    ell_pows: Vec<Vec<Integer>>,
    ell: Vec<i64>,
    roots: Vec<i64>,
}

pub(crate) struct Sampler<'a> {
    td: &'a ToricData,
    terms: Vec<Term>,
    points: Vec<Point>,
    m_top: usize,
}

struct LevelTables {
    psi: Vec<Vec<Integer>>,
    fact: Vec<Integer>,
    scale: Vec<Integer>,
}

impl<'a> Sampler<'a> {
    /// Track coefficients of `eps^0..=eps^m_top` at each point.
    pub fn new(td: &'a ToricData, points: &[Vec<i64>], m_top: usize) -> Self {
        let terms: Vec<Term> = td
            .bundles
            .iter()
            .map(|f| Term { factor: f.clone(), bundle: true })
            .chain(td.divisors.iter().map(|f| Term { factor: f.clone(), bundle: false }))
            .collect();
        let points = points
            .iter()
            .map(|y| {
                let ell: Vec<i64> = terms.iter().map(|t| dot(&t.factor.class, y)).collect();
                let ell_pows = ell
                    .iter()
                    .map(|&l| {
                        let b = Integer::from(l);
                        (0..=m_top as u64).map(|p| (&b).pow(p)).collect()
                    })
                    .collect();
                let roots = td.roots.iter().map(|r| dot(&r.class, y)).collect();
                Point { ell_pows, ell, roots }
            })
            .collect();
        Sampler { td, terms, points, m_top }
    }

    /// Coefficients of `eps^j`, `j = 0..=M`, of the height-`t` part of the abelianized sum at each point.
    pub fn level(&self, t: usize) -> Result<Vec<Vec<Rational>>, ToricError> {
        let degs = enumerate_degrees(self.td, t)?;
        let degrees: Vec<Vec<i64>> =
            degs.iter().map(|d| self.terms.iter().map(|x| x.factor.degree(d)).collect()).collect();
        let emax = degrees.iter().flatten().map(|e| e.unsigned_abs()).max().unwrap_or(0).max(1);
        let big_l = (1..=emax).fold(Natural::ONE, |acc, m| acc.lcm(Natural::from(m)));
        let big_l = Integer::from(big_l);
        let m_top = self.m_top;
        let mut psi = vec![vec![Integer::ZERO; emax as usize + 1]; m_top + 1];
        for m in 1..=emax {
            let q = &big_l / Integer::from(m);
            let mut qp = Integer::ONE;
            for p in 1..=m_top {
                qp *= &q;
                psi[p][m as usize] = &psi[p][m as usize - 1] + &qp;
            }
        }
        let fact: Vec<Integer> = (0..=emax).map(factorial).collect();
        let m_fact = factorial(m_top as u64);
        let scale = (0..=m_top)
            .map(|m| (&big_l).pow((m_top - m) as u64) * (&m_fact / factorial(m as u64)))
            .collect();
        let tables = LevelTables { psi, fact, scale };
        let parts: Vec<(Rational, Vec<Vec<Integer>>)> = degs
            .par_iter()
            .zip(degrees.par_iter())
            .map(|(d, e)| self.term(d, e, &tables))
            .collect::<Result<_, _>>()?;
        let mut den = Natural::ONE;
        for (k, _) in &parts {
            den = den.lcm(k.denom_natural());
        }
        let den = Integer::from(den);
        let mut acc = vec![vec![Integer::ZERO; m_top + 1]; self.points.len()];
        for (k, rs) in &parts {
            if k.is_zero() {
                continue;
            }
            let w = k.numer() * (&den / k.denom());
            for (a, r) in acc.iter_mut().zip(rs) {
                for (x, v) in a.iter_mut().zip(r) {
                    *x += &w * v;
                }
            }
        }
        let total = den * (&big_l).pow(m_top as u64) * m_fact;
        Ok(acc
            .into_iter()
            .map(|row| row.into_iter().map(|x| Rational::from_integers(x, total.clone())).collect())
            .collect())
    }

    fn term(&self, d: &[i64], e: &[i64], tb: &LevelTables) -> Result<(Rational, Vec<Vec<Integer>>), ToricError> {
        let m_top = self.m_top;
        let mut num = Integer::from(self.td.sign_of(d));
        let mut den = Integer::ONE;
        for (i, (x, &ei)) in self.terms.iter().zip(e).enumerate() {
            let mult = x.factor.mult as u64;
            if x.bundle {
                if ei < 0 {
                    return Err(ToricError::NegativeBundle(i, ei));
                }
                num *= (&tb.fact[ei as usize]).pow(mult);
            } else if ei >= 0 {
                den *= (&tb.fact[ei as usize]).pow(mult);
            } else {
                let a = (-ei - 1) as u64;
                num *= (&tb.fact[a as usize]).pow(mult);
                if (a * mult) % 2 == 1 {
                    num = -num;
                }
            }
        }
        let k = Rational::from_integers(num, den);
        let mut out = Vec::with_capacity(self.points.len());
        for pt in &self.points {
            let mut s = vec![Integer::ZERO; m_top + 1];
            let mut pre = vec![Integer::ZERO; m_top + 1];
            pre[0] = Integer::ONE;
            let mut pre_len = 1usize;
            for (c, (x, &ei)) in self.terms.iter().zip(e).enumerate() {
                let mult = Integer::from(x.factor.mult);
                let (idx, alternating, negate) = if x.bundle || ei >= 0 {
                    (ei as usize, true, !x.bundle)
                } else {
                    for _ in 0..x.factor.mult {
                        mul_linear(&mut pre, &mut pre_len, pt.ell[c], 0);
                    }
                    ((-ei - 1) as usize, false, true)
                };
                if idx == 0 || pt.ell[c] == 0 {
                    continue;
                }
                for p in 1..=m_top {
                    let mut v = &mult * &pt.ell_pows[c][p] * &tb.psi[p][idx];
                    if alternating && p % 2 == 0 {
                        v = -v;
                    }
                    if negate {
                        s[p] -= v;
                    } else {
                        s[p] += v;
                    }
                }
            }
            for (r, &a) in self.td.roots.iter().zip(&pt.roots) {
                mul_linear(&mut pre, &mut pre_len, a, r.degree(d));
            }
            // G_m = sum_j S_j G_{m-j} (m-1)!/(m-j)!
            let mut g = vec![Integer::ZERO; m_top + 1];
            g[0] = Integer::ONE;
            for m in 1..=m_top {
                let mut acc = Integer::ZERO;
                let mut ff = Integer::ONE;
                for j in 1..=m {
                    if j > 1 {
                        ff *= Integer::from((m - j + 1) as u64);
                    }
                    if !s[j].eq(&Integer::ZERO) && !g[m - j].eq(&Integer::ZERO) {
                        acc += &s[j] * &g[m - j] * &ff;
                    }
                }
                g[m] = acc;
            }
            let gh: Vec<Integer> = g.iter().zip(&tb.scale).map(|(a, b)| a * b).collect();
            let mut r = vec![Integer::ZERO; m_top + 1];
            for (a, pa) in pre.iter().enumerate().take(pre_len.min(m_top + 1)) {
                if pa.eq(&Integer::ZERO) {
                    continue;
                }
                for m in 0..=m_top - a {
                    r[a + m] += pa * &gh[m];
                }
            }
            out.push(r);
        }
        Ok((k, out))
    }
}

/// Multiply a truncated polynomial in `eps` by `(a eps + b)`.
fn mul_linear(p: &mut [Integer], len: &mut usize, a: i64, b: i64) {
    let top = p.len() - 1;
    let new_len = (*len + 1).min(p.len());
    let (a, b) = (Integer::from(a), Integer::from(b));
    for i in (0..new_len).rev() {
        let mut v = if i < *len { &p[i] * &b } else { Integer::ZERO };
        if i >= 1 && i - 1 < *len && i <= top {
            v += &p[i - 1] * &a;
        }
        p[i] = v;
    }
    *len = new_len;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_products() {
        let mut p = vec![Integer::ZERO; 4];
        p[0] = Integer::ONE;
        let mut len = 1;
        mul_linear(&mut p, &mut len, 2, 3);
        mul_linear(&mut p, &mut len, 1, -1);
        // (2e+3)(e-1) = 2e^2 + e - 3
        assert_eq!(p[..3], [Integer::from(-3), Integer::from(1), Integer::from(2)]);
        mul_linear(&mut p, &mut len, 1, 0);
        mul_linear(&mut p, &mut len, 1, 0);
        assert_eq!(p[3], Integer::from(1));
    }
}
