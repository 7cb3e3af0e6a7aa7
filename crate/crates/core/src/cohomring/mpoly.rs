use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::ratqa::Rational;

/// Exponent vector.
pub type Mono = Vec<u32>;

pub fn mono_degree(m: &[u32]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// Sparse polynomial in a fixed number of commuting variables.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Mono, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        MPoly::monomial(m, Rational::one())
    }

    pub fn monomial(m: Mono, c: Rational) -> Self {
        let mut p = MPoly::zero(m.len());
        p.add_term(m, c);
        p
    }

    /// Linear form `sum coeffs[i] * x_i` with integer coefficients.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = MPoly::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut m = vec![0; n];
                m[i] = 1;
                p.add_term(m, Rational::from_int(c));
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: Rational) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Largest total degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| mono_degree(m)).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| mono_degree(m)).min()
    }

    pub fn homogeneous_part(&self, d: usize) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    /// Product with all terms of total degree above `dmax` dropped.
    pub fn mul_trunc(&self, o: &MPoly, dmax: usize) -> MPoly {
        self.mul_filtered(o, |m| mono_degree(m) <= dmax)
    }

    /// Product keeping only monomials accepted by `keep`.
    pub fn mul_filtered<F: Fn(&[u32]) -> bool>(&self, o: &MPoly, keep: F) -> MPoly {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut out = MPoly::zero(self.nvars);
        let mut m = vec![0u32; self.nvars];
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                for i in 0..self.nvars {
                    m[i] = a[i] + b[i];
                }
                if keep(&m) {
                    out.add_term(m.clone(), ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn pow_trunc(&self, e: u32, dmax: usize) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul_trunc(self, dmax);
        }
        acc
    }

    pub fn truncate(&self, dmax: usize) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_degree(m) <= dmax)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, pt: &[Rational]) -> Rational {
        assert_eq!(pt.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in pt.iter().zip(m) {
                if e > 0 {
                    t *= x.pow(e as i64);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_int(&self, pt: &[i64]) -> Rational {
        let v: Vec<Rational> = pt.iter().map(|&x| Rational::from_int(x)).collect();
        self.eval(&v)
    }

    /// Substitute `x_i -> images[i]` (polynomials in a common variable set).
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut out = MPoly::zero(target);
        let mut cache: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(target), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Apply a linear change of variables given by integer images of each variable.
    pub fn linear_substitute(&self, images: &[Vec<i64>]) -> MPoly {
        let ims: Vec<MPoly> = images.iter().map(|v| MPoly::linear(v)).collect();
        self.substitute(&ims)
    }

    /// Permute variables: `x_i -> x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; self.nvars];
            for (i, &e) in m.iter().enumerate() {
                nm[perm[i]] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => mono.push(names[i].to_string()),
                    _ => mono.push(format!("{}^{}", names[i], e)),
                }
            }
            let ms = mono.join("*");
            parts.push(if ms.is_empty() {
                c.to_string()
            } else if c.is_one() {
                ms
            } else {
                format!("{c}*{ms}")
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.render(&refs))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        self.mul_filtered(o, |_| true)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&Rational::from_int(-1))
    }
}

macro_rules! owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                $tr::$m(&self, &o)
            }
        }
    };
}
owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);

/// All exponent vectors of total degree `d` in `n` variables, graded-lex descending.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Mono> {
    fn rec(n: usize, d: usize, prefix: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if prefix.len() + 1 == n {
            prefix.push(d as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e as u32);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let lhs = &(&x - &y) * &(&x + &y);
        let rhs = &x.pow(2) - &y.pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 14).len(), 680);
        assert_eq!(monomials_of_degree(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn substitution() {
        let p = &MPoly::var(2, 0).pow(2) + &MPoly::var(2, 1);
        let q = p.linear_substitute(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(q.eval_int(&[2, 3]), Rational::from_int(25 - 1));
    }
}
