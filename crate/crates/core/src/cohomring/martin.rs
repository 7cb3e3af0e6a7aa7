use super::mpoly::{mono_degree, MPoly};
use super::ring::{RingElement, RingHandle};
use super::symfun::schur_poly;
use crate::ratqa::{factorial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegrateError {
    #[error("integrand is not of pure degree (support {0:?})")]
    NotPure(Vec<usize>),
    #[error("ring does not reach degree {0}")]
    Truncated(usize),
    #[error("ring has {0} generators, expected {1}")]
    Generators(usize, usize),
}

/// `prod_{i<j} (x_i - x_j)`.
pub fn vandermonde(k: usize) -> MPoly {
    let mut p = MPoly::one(k);
    for i in 0..k {
        for j in i + 1..k {
            let mut v = vec![0i64; k];
            v[i] = 1;
            v[j] = -1;
            p = &p * &MPoly::linear(&v);
        }
    }
    p
}

/// Precomputed data for repeated integrals over `G(k, n)`.
#[derive(Debug, Clone)]
pub struct Grassmannian {
    pub k: usize,
    pub n: usize,
    weyl: MPoly,
    norm: Rational,
}

impl Grassmannian {
    pub fn new(k: usize, n: usize) -> Self {
        assert!(k >= 1 && k <= n, "need 1 <= k <= n");
        let v = vandermonde(k);
        let weyl = (&v * &v).scale(&Rational::from_int(if (k * (k - 1) / 2).is_multiple_of(2) { 1 } else { -1 }));
        let norm = Rational::from_integer(factorial(k as u64)).recip();
        Grassmannian { k, n, weyl, norm }
    }

    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    /// `(1/k!) [prod x_i^{n-1}] (f * prod_{i != j}(x_i - x_j))`; only the top-degree part of `f` contributes.
    pub fn integrate(&self, f: &MPoly) -> Rational {
        assert_eq!(f.nvars(), self.k);
        let cap = (self.n - 1) as u32;
        let mut acc = Rational::zero();
        let mut need = vec![0u32; self.k];
        for (m, c) in f.terms() {
            if mono_degree(m) != self.dim() || m.iter().any(|&e| e > cap) {
                continue;
            }
            for i in 0..self.k {
                need[i] = cap - m[i];
            }
            let w = self.weyl.coeff(&need);
            if !w.is_zero() {
                acc += c * &w;
            }
        }
        acc * &self.norm
    }
}

/// Intersection number of a Weyl-invariant lift on `G(k, n)`.
pub fn integrate_grassmann(f: &RingElement, k: usize, n: usize) -> Result<Rational, IntegrateError> {
    let ring = f.ring();
    if ring.nvars() != k {
        return Err(IntegrateError::Generators(ring.nvars(), k));
    }
    if ring.dmax() < k * (n - 1) {
        return Err(IntegrateError::Truncated(k * (n - 1)));
    }
    let support = f.support();
    if support.len() > 1 {
        return Err(IntegrateError::NotPure(support));
    }
    Ok(Grassmannian::new(k, n).integrate(&f.to_poly()))
}

/// Schur polynomial in a subset of the ring generators.
pub fn schur(ring: &RingHandle, shape: &[u32], vars: &[usize]) -> RingElement {
    RingElement::from_poly(ring, &schur_poly(shape, ring.nvars(), vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomring::{make_ring, symfun::partitions, RingPresentation};

    fn gring(k: usize, n: usize) -> RingHandle {
        let rels = (0..k).map(|i| MPoly::var(k, i).pow(n as u32)).collect();
        let names: Vec<String> = (1..=k).map(|i| format!("H{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        make_ring(RingPresentation::new(&refs, rels, k * (n - 1))).unwrap()
    }

    #[test]
    fn top_class_is_one() {
        let r = gring(2, 5);
        let top = schur(&r, &[3, 3], &[0, 1]);
        assert_eq!(integrate_grassmann(&top, 2, 5).unwrap(), Rational::one());
    }

    #[test]
    fn sigma1_to_the_fourth_on_g24() {
        let r = gring(2, 4);
        let s1 = schur(&r, &[1], &[0, 1]);
        assert_eq!(integrate_grassmann(&s1.pow(4), 2, 4).unwrap(), Rational::from_int(2));
        let direct = Grassmannian::new(2, 4).integrate(&MPoly::linear(&[1, 1]).pow(4));
        assert_eq!(direct, Rational::from_int(2));
    }

    #[test]
    fn mixed_degree_rejected() {
        let r = gring(2, 4);
        let f = RingElement::one(&r).add(&RingElement::gen(&r, 0));
        assert!(matches!(integrate_grassmann(&f, 2, 4), Err(IntegrateError::NotPure(_))));
    }

    #[test]
    fn dual_pairing_on_two_by_three_box() {
        let (k, n) = (2, 5);
        let g = Grassmannian::new(k, n);
        let mut boxed = Vec::new();
        for m in 0..=6 {
            boxed.extend(partitions(m, 2, 3));
        }
        for lam in &boxed {
            for mu in &boxed {
                let f = &schur_poly(lam, 2, &[0, 1]) * &schur_poly(mu, 2, &[0, 1]);
                let mut full = [0u32; 2];
                for (i, p) in lam.iter().enumerate() {
                    full[i] = *p;
                }
                let dual: Vec<u32> = (0..2).map(|i| 3 - full[1 - i]).filter(|&p| p > 0).collect();
                let expected = if *mu == dual { 1 } else { 0 };
                assert_eq!(g.integrate(&f), Rational::from_int(expected), "{lam:?} {mu:?}");
            }
        }
    }
}
