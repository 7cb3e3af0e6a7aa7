use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::mpoly::{mono_degree, monomials_of_degree, MPoly, Mono};
use crate::ratqa::{QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("inconsistent presentation: nonzero relation in degree 0")]
    Inconsistent,
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("elements belong to different rings")]
    Mismatch,
    #[error("weight mismatch in sum: {0} vs {1}")]
    Weight(i64, i64),
}

/// Generators (all of degree one), homogeneous relations, truncation degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingPresentation {
    pub gens: Vec<String>,
    pub relations: Vec<MPoly>,
    pub dmax: usize,
}

impl RingPresentation {
    pub fn new(gens: &[&str], relations: Vec<MPoly>, dmax: usize) -> Self {
        RingPresentation {
            gens: gens.iter().map(|s| s.to_string()).collect(),
            relations,
            dmax,
        }
    }

    pub fn nvars(&self) -> usize {
        self.gens.len()
    }
}

#[derive(Debug)]
struct DegreeData {
    monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
    /// Reduced relation rows as (pivot column, dense row).
    rows: Vec<(usize, Vec<Rational>)>,
    /// Columns of standard monomials.
    basis: Vec<usize>,
}

/// Truncated graded quotient ring with a fixed monomial basis in each degree.
#[derive(Debug)]
pub struct Ring {
    pres: RingPresentation,
    degrees: Vec<DegreeData>,
}

pub type RingHandle = Arc<Ring>;

/// Build per-degree bases by row-reducing the relation multiples against all monomials.
pub fn make_ring(p: RingPresentation) -> Result<RingHandle, RingError> {
    let n = p.nvars();
    for (i, r) in p.relations.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        if !r.is_homogeneous() {
            return Err(RingError::Inhomogeneous(i));
        }
        if r.degree() == Some(0) {
            return Err(RingError::Inconsistent);
        }
    }
    let mut degrees = Vec::with_capacity(p.dmax + 1);
    for d in 0..=p.dmax {
        let monos = monomials_of_degree(n, d);
        let index: HashMap<Mono, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut gens_rows: Vec<Vec<Rational>> = Vec::new();
        for r in &p.relations {
            let Some(rd) = r.degree() else { continue };
            if rd > d {
                continue;
            }
            for m in monomials_of_degree(n, d - rd) {
                let prod = &MPoly::monomial(m, Rational::one()) * r;
                let mut row = vec![Rational::zero(); monos.len()];
                for (mm, c) in prod.terms() {
                    row[index[mm]] = c.clone();
                }
                gens_rows.push(row);
            }
        }
        let (rows, basis) = if gens_rows.is_empty() {
            (Vec::new(), (0..monos.len()).collect())
        } else {
            let (red, piv) = QMatrix::from_rows(gens_rows).rref();
            let rows: Vec<(usize, Vec<Rational>)> =
                piv.iter().enumerate().map(|(i, &c)| (c, red.row(i).to_vec())).collect();
            let basis = (0..monos.len()).filter(|c| !piv.contains(c)).collect();
            (rows, basis)
        };
        degrees.push(DegreeData { monos, index, rows, basis });
    }
    Ok(Arc::new(Ring { pres: p, degrees }))
}

impl Ring {
    pub fn presentation(&self) -> &RingPresentation {
        &self.pres
    }

    pub fn nvars(&self) -> usize {
        self.pres.nvars()
    }

    pub fn dmax(&self) -> usize {
        self.pres.dmax
    }

    /// Quotient dimension in each degree `0..=dmax`.
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.basis.len()).collect()
    }

    /// Standard monomials spanning degree `d`.
    pub fn basis_monomials(&self, d: usize) -> Vec<Mono> {
        let dd = &self.degrees[d];
        dd.basis.iter().map(|&c| dd.monos[c].clone()).collect()
    }

    /// Coordinates of a homogeneous degree-`d` polynomial on the standard basis.
    fn reduce_degree(&self, p: &MPoly, d: usize) -> Vec<Rational> {
        let dd = &self.degrees[d];
        let mut v = vec![Rational::zero(); dd.monos.len()];
        for (m, c) in p.terms() {
            if mono_degree(m) == d {
                v[dd.index[m]] += c;
            }
        }
        for (pc, row) in &dd.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let f = v[*pc].clone();
            for (j, r) in row.iter().enumerate() {
                if !r.is_zero() {
                    v[j] -= &f * r;
                }
            }
        }
        dd.basis.iter().map(|&c| v[c].clone()).collect()
    }
}

/// Element of a truncated quotient ring, stored per degree on the standard basis.
#[derive(Clone)]
pub struct RingElement {
    ring: RingHandle,
    comps: Vec<Vec<Rational>>,
}

impl RingElement {
    pub fn zero(ring: &RingHandle) -> Self {
        let comps = ring.dims().iter().map(|&n| vec![Rational::zero(); n]).collect();
        RingElement { ring: ring.clone(), comps }
    }

    pub fn one(ring: &RingHandle) -> Self {
        RingElement::from_poly(ring, &MPoly::one(ring.nvars()))
    }

    pub fn gen(ring: &RingHandle, i: usize) -> Self {
        RingElement::from_poly(ring, &MPoly::var(ring.nvars(), i))
    }

    /// Reduce a polynomial into the ring, dropping degrees above `dmax`.
    pub fn from_poly(ring: &RingHandle, p: &MPoly) -> Self {
        assert_eq!(p.nvars(), ring.nvars(), "variable count mismatch");
        let comps = (0..=ring.dmax()).map(|d| ring.reduce_degree(p, d)).collect();
        RingElement { ring: ring.clone(), comps }
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn component(&self, d: usize) -> &[Rational] {
        &self.comps[d]
    }

    pub fn components(&self) -> &[Vec<Rational>] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(|x| x.is_zero()))
    }

    /// Degrees carrying a nonzero component.
    pub fn support(&self) -> Vec<usize> {
        (0..self.comps.len()).filter(|&d| self.comps[d].iter().any(|x| !x.is_zero())).collect()
    }

    /// Polynomial on the standard monomials.
    pub fn to_poly(&self) -> MPoly {
        let mut p = MPoly::zero(self.ring.nvars());
        for (d, comp) in self.comps.iter().enumerate() {
            let monos = self.ring.basis_monomials(d);
            for (m, c) in monos.into_iter().zip(comp) {
                p.add_term(m, c.clone());
            }
        }
        p
    }

    pub fn same_ring(&self, o: &RingElement) -> bool {
        Arc::ptr_eq(&self.ring, &o.ring)
    }

    pub fn add(&self, o: &RingElement) -> RingElement {
        assert!(self.same_ring(o), "{}", RingError::Mismatch);
        let comps = self
            .comps
            .iter()
            .zip(&o.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        RingElement { ring: self.ring.clone(), comps }
    }

    pub fn sub(&self, o: &RingElement) -> RingElement {
        self.add(&o.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> RingElement {
        let comps = self.comps.iter().map(|v| v.iter().map(|x| x * c).collect()).collect();
        RingElement { ring: self.ring.clone(), comps }
    }

    pub fn mul(&self, o: &RingElement) -> RingElement {
        assert!(self.same_ring(o), "{}", RingError::Mismatch);
        let prod = self.to_poly().mul_trunc(&o.to_poly(), self.ring.dmax());
        RingElement::from_poly(&self.ring, &prod)
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut acc = RingElement::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Keep only the degree-`d` component.
    pub fn homogeneous_part(&self, d: usize) -> RingElement {
        let mut z = RingElement::zero(&self.ring);
        z.comps[d] = self.comps[d].clone();
        z
    }
}

impl PartialEq for RingElement {
    fn eq(&self, o: &Self) -> bool {
        self.same_ring(o) && self.comps == o.comps
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.ring.pres.gens.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.to_poly().render(&names))
    }
}

/// A ring element standing for a z-homogeneous quantity of weight `w`:
/// its degree-`m` component carries `z^(w-m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedElement {
    pub elem: RingElement,
    pub weight: i64,
}

impl WeightedElement {
    pub fn new(elem: RingElement, weight: i64) -> Self {
        WeightedElement { elem, weight }
    }

    pub fn one(ring: &RingHandle) -> Self {
        WeightedElement::new(RingElement::one(ring), 0)
    }

    /// Product; weights add.
    pub fn mul(&self, o: &WeightedElement) -> WeightedElement {
        assert!(self.elem.same_ring(&o.elem), "{}", RingError::Mismatch);
        let w = self.weight + o.weight;
        let out = WeightedElement::new(self.elem.mul(&o.elem), w);
        assert_eq!(out.weight, self.weight + o.weight);
        out
    }

    /// Sum of two quantities of equal weight.
    pub fn try_add(&self, o: &WeightedElement) -> Result<WeightedElement, RingError> {
        if self.elem.is_zero() {
            return Ok(o.clone());
        }
        if o.elem.is_zero() {
            return Ok(self.clone());
        }
        if self.weight != o.weight {
            return Err(RingError::Weight(self.weight, o.weight));
        }
        Ok(WeightedElement::new(self.elem.add(&o.elem), self.weight))
    }

    pub fn scale(&self, c: &Rational) -> WeightedElement {
        WeightedElement::new(self.elem.scale(c), self.weight)
    }

    /// `(ell + m z)` for a linear class `ell`: weight one, degree-0 part `m`.
    pub fn linear_plus(ring: &RingHandle, ell: &MPoly, m: i64) -> WeightedElement {
        let p = ell + &MPoly::constant(ring.nvars(), Rational::from_int(m));
        WeightedElement::new(RingElement::from_poly(ring, &p), 1)
    }

    /// `(ell + m z)^{-1}` for `m != 0`, expanded as a finite geometric series.
    pub fn linear_plus_inverse(ring: &RingHandle, ell: &MPoly, m: i64) -> WeightedElement {
        assert!(m != 0, "inverse of a nilpotent class");
        let inv_m = Rational::new(1, m);
        let neg = ell.scale(&Rational::from_int(-1));
        let mut acc = MPoly::zero(ring.nvars());
        let mut term = MPoly::constant(ring.nvars(), inv_m.clone());
        for _ in 0..=ring.dmax() {
            acc = &acc + &term;
            term = term.mul_trunc(&neg, ring.dmax()).scale(&inv_m);
        }
        WeightedElement::new(RingElement::from_poly(ring, &acc), -1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> RingHandle {
        let h = MPoly::var(1, 0);
        make_ring(RingPresentation::new(&["H"], vec![h.pow(4)], 3)).unwrap()
    }

    #[test]
    fn projective_space_dims() {
        assert_eq!(p3().dims(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn truncation_kills_high_products() {
        let r = p3();
        let h2 = RingElement::gen(&r, 0).pow(2);
        assert!(h2.mul(&h2).is_zero());
    }

    #[test]
    fn degree_zero_relation_rejected() {
        let bad = RingPresentation::new(&["H"], vec![MPoly::one(1)], 2);
        assert_eq!(make_ring(bad).unwrap_err(), RingError::Inconsistent);
    }

    #[test]
    fn inverse_of_linear_plus() {
        let r = p3();
        let h = MPoly::var(1, 0);
        let a = WeightedElement::linear_plus(&r, &h, 2);
        let b = WeightedElement::linear_plus_inverse(&r, &h, 2);
        let prod = a.mul(&b);
        assert_eq!(prod.weight, 0);
        assert_eq!(prod.elem, RingElement::one(&r));
    }

    #[test]
    fn unequal_weights_refuse_to_add() {
        let r = p3();
        let a = WeightedElement::one(&r);
        let b = WeightedElement::linear_plus(&r, &MPoly::var(1, 0), 1);
        assert!(a.try_add(&b).is_err());
    }
}
