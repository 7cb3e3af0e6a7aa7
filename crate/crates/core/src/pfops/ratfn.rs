use std::ops::{Add, Mul, Neg, Sub};

use crate::ratqa::{QPoly, Rational};

use super::ore::OreOperator;
use super::PfError;

/// A reduced rational function `num / den` in `q` with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    num: QPoly,
    den: QPoly,
}

impl RatFn {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let l = d.leading().recip();
        n = n.scale(&l);
        d = d.scale(&l);
        RatFn { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFn { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFn { num: p, den: QPoly::one() }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| RatFn::new(self.den.clone(), self.num.clone()))
    }

    /// `theta = q d/dq` applied to the function.
    pub fn euler(&self) -> Self {
        let n = &(&self.num.euler() * &self.den) - &(&self.num * &self.den.euler());
        RatFn::new(n, &self.den * &self.den)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::new(&self.num + &o.num, self.den.clone());
        }
        RatFn::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, o: &RatFn) -> RatFn {
        self + &-o
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, o: &RatFn) -> RatFn {
        RatFn::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

/// An operator `sum_i a_i(q) theta^i` with rational-function coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RatOre {
    coeffs: Vec<RatFn>,
}

impl RatOre {
    pub fn new(mut coeffs: Vec<RatFn>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatOre { coeffs }
    }

    pub fn zero() -> Self {
        RatOre::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    /// `c theta^k`.
    fn monomial(c: RatFn, k: usize) -> Self {
        let mut v = vec![RatFn::zero(); k + 1];
        v[k] = c;
        RatOre::new(v)
    }

    pub fn compose(&self, o: &RatOre) -> RatOre {
        if self.is_zero() || o.is_zero() {
            return RatOre::zero();
        }
        let ra = self.coeffs.len() - 1;
        let mut out = vec![RatFn::zero(); ra + o.coeffs.len()];
        for (k, bk) in o.coeffs.iter().enumerate() {
            let mut ders = vec![bk.clone()];
            for l in 1..=ra {
                let next = ders[l - 1].euler();
                ders.push(next);
            }
            for (i, ai) in self.coeffs.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                let mut binom = Rational::one();
                for l in 0..=i {
                    if l > 0 {
                        binom = binom.mul_int((i - l + 1) as i64) / Rational::from_int(l as i64);
                    }
                    if ders[l].is_zero() {
                        continue;
                    }
                    let t = &(ai * &ders[l]) * &RatFn::from_poly(QPoly::constant(binom.clone()));
                    out[i - l + k] = &out[i - l + k] + &t;
                }
            }
        }
        RatOre::new(out)
    }

    /// `(quotient, remainder)` with `self = quotient o s + remainder` and `order(remainder) < order(s)`.
    pub fn right_divide(&self, s: &RatOre) -> Result<(RatOre, RatOre), PfError> {
        let rs = s.order().ok_or(PfError::ZeroDivisor)?;
        let lead = s.coeffs[rs].recip().ok_or(PfError::ZeroDivisor)?;
        let mut quot = RatOre::zero();
        let mut rem = self.clone();
        while let Some(r) = rem.order().filter(|&r| r >= rs) {
            let t = RatOre::monomial(&rem.coeffs[r] * &lead, r - rs);
            rem = &rem - &t.compose(s);
            quot = &quot + &t;
        }
        Ok((quot, rem))
    }

    /// `(quotient, remainder)` with `self = s o quotient + remainder` and `order(remainder) < order(s)`.
    pub fn left_divide(&self, s: &RatOre) -> Result<(RatOre, RatOre), PfError> {
        let rs = s.order().ok_or(PfError::ZeroDivisor)?;
        let lead = s.coeffs[rs].recip().ok_or(PfError::ZeroDivisor)?;
        let mut quot = RatOre::zero();
        let mut rem = self.clone();
        while let Some(r) = rem.order().filter(|&r| r >= rs) {
            let t = RatOre::monomial(&rem.coeffs[r] * &lead, r - rs);
            rem = &rem - &s.compose(&t);
            quot = &quot + &t;
        }
        Ok((quot, rem))
    }

    /// `(den, num)` with `self = (1/den) num`, `den` a primitive integer polynomial with positive leading coefficient.
    pub fn split_denominator(&self) -> (QPoly, OreOperator) {
        let mut den = QPoly::one();
        for c in &self.coeffs {
            let g = den.gcd(c.den());
            den = &den * &c.den().div_exact(&g).unwrap();
        }
        den = den.scale(&den.content().recip());
        if den.leading().signum() < 0 {
            den = -&den;
        }
        let num = self.coeffs.iter().map(|c| &c.num * &den.div_exact(&c.den).unwrap()).collect();
        (den, OreOperator::new(num))
    }
}

impl From<&OreOperator> for RatOre {
    fn from(op: &OreOperator) -> Self {
        RatOre::new(op.coeffs().iter().map(|c| RatFn::from_poly(c.clone())).collect())
    }
}

impl Add for &RatOre {
    type Output = RatOre;
    fn add(self, o: &RatOre) -> RatOre {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = RatFn::zero();
        RatOre::new(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect(),
        )
    }
}

impl Sub for &RatOre {
    type Output = RatOre;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, o: &RatOre) -> RatOre {
        let neg = RatOre::new(o.coeffs.iter().map(|c| -c).collect());
        self + &neg
    }
}

/// Result of dividing polynomial operators over the field of rational functions in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    /// Common denominator of quotient and remainder.
    pub denominator: QPoly,
    pub quotient: OreOperator,
    pub remainder: OreOperator,
    pub exact_quotient: RatOre,
}

impl Division {
    fn from_parts(quot: RatOre, rem: RatOre) -> Self {
        let mut all = quot.coeffs.clone();
        all.extend(rem.coeffs.iter().cloned());
        let (den, _) = RatOre::new(all).split_denominator();
        let lift = |x: &RatOre| {
            OreOperator::new(x.coeffs.iter().map(|c| &c.num * &den.div_exact(&c.den).unwrap()).collect())
        };
        Division { quotient: lift(&quot), remainder: lift(&rem), denominator: den, exact_quotient: quot }
    }
}

/// `p = (1/den) quotient o s + (1/den) remainder` with `order(remainder) < order(s)`.
pub fn ore_right_divide(p: &OreOperator, s: &OreOperator) -> Result<Division, PfError> {
    if s.order().unwrap_or(0) < 1 {
        return Err(PfError::ZeroDivisor);
    }
    let (q, r) = RatOre::from(p).right_divide(&RatOre::from(s))?;
    Ok(Division::from_parts(q, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(text: &str) -> OreOperator {
        super::super::parse_operator(text).unwrap()
    }

    #[test]
    fn divide_by_itself() {
        let p = op("theta^2 + q*theta + 3q^2");
        let d = ore_right_divide(&p, &p).unwrap();
        assert!(d.remainder.is_zero());
        assert_eq!(d.denominator, QPoly::one());
        assert_eq!(d.quotient, OreOperator::one());
    }

    #[test]
    fn divide_by_theta() {
        let d = ore_right_divide(&op("theta^2 + q theta"), &OreOperator::theta()).unwrap();
        assert_eq!(d.denominator, QPoly::one());
        assert_eq!(d.quotient, op("theta + q"));
        assert!(d.remainder.is_zero());
    }

    #[test]
    fn euler_of_reciprocal() {
        // theta (1/(1-q)) = q/(1-q)^2
        let f = RatFn::new(QPoly::one(), QPoly::from_ints(&[1, -1]));
        let g = RatFn::new(QPoly::x(), QPoly::from_ints(&[1, -2, 1]));
        assert_eq!(f.euler(), g);
    }

    #[test]
    fn left_division_undoes_left_factor() {
        let s = RatOre::from(&op("theta^2 (theta - 1)"));
        let x = RatOre::from(&op("(1 - 4q) theta + q^2"));
        let p = s.compose(&x);
        let (quot, rem) = p.left_divide(&s).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, x);
    }
}
