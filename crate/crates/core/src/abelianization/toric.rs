use std::sync::OnceLock;

use crate::cohomring::{make_ring, MPoly, RingElement, RingHandle, RingPresentation, WeightedElement};
use crate::ratqa::{QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    #[error("degree {0:?} lies outside the cone")]
    OutsideCone(Vec<i64>),
    #[error("enumeration at total {0} exceeded the safety bound")]
    Unbounded(usize),
    #[error("bundle {0} has negative degree {1}; its factor would need a nilpotent inverse")]
    NegativeBundle(usize, i64),
    #[error("not omega-divisible in degree {0}")]
    NotDivisible(usize),
    #[error("terms of unequal weight in the abelianized sum")]
    Weight,
}

/// A line class with multiplicity: `class` in the ring generators, `pairing` on degree vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub class: Vec<i64>,
    pub pairing: Vec<i64>,
    pub mult: u32,
}

impl Factor {
    pub fn new(class: Vec<i64>, pairing: Vec<i64>, mult: u32) -> Self {
        Factor { class, pairing, mult }
    }

    pub fn degree(&self, d: &[i64]) -> i64 {
        dot(&self.pairing, d)
    }

    pub fn poly(&self) -> MPoly {
        MPoly::linear(&self.class)
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Merge factors with equal class and pairing.
pub(crate) fn merge(fs: Vec<Factor>) -> Vec<Factor> {
    let mut out: Vec<Factor> = Vec::new();
    for f in fs {
        match out.iter_mut().find(|g| g.class == f.class && g.pairing == f.pairing) {
            Some(g) => g.mult += f.mult,
            None => out.push(f),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    /// `d_i >= 0`.
    Orthant,
    /// The effective cone of the nets-of-conics quotient, coordinates `d_11, d_12, d_21, d_22, d_31, d_32`.
    PDelta,
}

/// Data of a twisted toric I-function on an abelian quotient.
#[derive(Debug)]
pub struct ToricData {
    pub gens: Vec<String>,
    pub relations: Vec<MPoly>,
    pub ring_dmax: usize,
    pub divisors: Vec<Factor>,
    pub bundles: Vec<Factor>,
    /// Positive roots; `mult` is always one.
    pub roots: Vec<Factor>,
    pub sign: Vec<i64>,
    pub height: Vec<i64>,
    pub cone: Cone,
    ring: OnceLock<RingHandle>,
}

const MAX_LEVEL: usize = 60_000_000;

impl ToricData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gens: Vec<String>,
        relations: Vec<MPoly>,
        ring_dmax: usize,
        divisors: Vec<Factor>,
        bundles: Vec<Factor>,
        roots: Vec<Factor>,
        sign: Vec<i64>,
        height: Vec<i64>,
        cone: Cone,
    ) -> Self {
        ToricData {
            gens,
            relations,
            ring_dmax,
            divisors: merge(divisors),
            bundles: merge(bundles),
            roots,
            sign,
            height,
            cone,
            ring: OnceLock::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.gens.len()
    }

    pub fn ndeg(&self) -> usize {
        self.height.len()
    }

    /// Abelian cohomology ring truncated at `ring_dmax`, built on first use.
    pub fn ring(&self) -> RingHandle {
        self.ring
            .get_or_init(|| {
                let names: Vec<&str> = self.gens.iter().map(|s| s.as_str()).collect();
                make_ring(RingPresentation::new(&names, self.relations.clone(), self.ring_dmax))
                    .expect("homogeneous presentation")
            })
            .clone()
    }

    pub fn omega(&self) -> MPoly {
        self.roots.iter().fold(MPoly::one(self.nvars()), |acc, r| &acc * &r.poly())
    }

    pub fn in_cone(&self, d: &[i64]) -> bool {
        match self.cone {
            Cone::Orthant => d.iter().all(|&x| x >= 0),
            Cone::PDelta => pdelta_in_cone(d),
        }
    }

    pub fn sign_of(&self, d: &[i64]) -> i64 {
        if dot(&self.sign, d).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

fn pdelta_in_cone(d: &[i64]) -> bool {
    let [d11, d12, d21, d22, d31, d32] = [d[0], d[1], d[2], d[3], d[4], d[5]];
    -d11 + d12 + d21 - d22 == 0
        && -d11 + d12 + d31 - d32 == 0
        && d11 + d22 >= 0
        && d21 + d32 >= 0
        && d31 + d12 >= 0
        && d11 + d22 + d31 >= 0
        && d12 + d21 + d32 >= 0
}

/// Degree vector from the free coordinates `(d_12, d_22, d_31, d_32)`.
pub fn pdelta_from_free(x: i64, y: i64, u: i64, v: i64) -> Vec<i64> {
    vec![x + u - v, x, y + u - v, y, u, v]
}

/// All cone points of height `total`.
pub fn enumerate_degrees(td: &ToricData, total: usize) -> Result<Vec<Vec<i64>>, ToricError> {
    match td.cone {
        Cone::Orthant => {
            assert!(td.height.iter().all(|&h| h == 1), "orthant cone with non-unit height");
            let mut out = Vec::new();
            compositions(total as i64, td.ndeg(), &mut Vec::new(), &mut out);
            Ok(out)
        }
        Cone::PDelta => {
            // The inequalities confine every free coordinate to [-total, total].
            let t = total as i64;
            let side = (2 * t + 1) as usize;
            if side.pow(4) > MAX_LEVEL * 8 {
                return Err(ToricError::Unbounded(total));
            }
            let mut out = Vec::new();
            for x in -t..=t {
                for y in -t..=t {
                    for u in -t..=t {
                        for v in -t..=t {
                            let d = pdelta_from_free(x, y, u, v);
                            if dot(&td.height, &d) == t && pdelta_in_cone(&d) {
                                out.push(d);
                            }
                        }
                    }
                }
            }
            if out.len() > MAX_LEVEL {
                return Err(ToricError::Unbounded(total));
            }
            Ok(out)
        }
    }
}

fn compositions(rest: i64, parts: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if parts == 1 {
        cur.push(rest);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for a in (0..=rest).rev() {
        cur.push(a);
        compositions(rest - a, parts - 1, cur, out);
        cur.pop();
    }
}

/// `prod_bundle prod_{m=1}^{e}(L + mz)` over the divisor factors, as a weighted ring element.
pub fn toric_coeff(td: &ToricData, d: &[i64]) -> Result<WeightedElement, ToricError> {
    if !td.in_cone(d) {
        return Err(ToricError::OutsideCone(d.to_vec()));
    }
    let ring = td.ring();
    let mut acc = WeightedElement::one(&ring);
    for (i, b) in td.bundles.iter().enumerate() {
        let e = b.degree(d);
        if e < 0 {
            return Err(ToricError::NegativeBundle(i, e));
        }
        let l = b.poly();
        for _ in 0..b.mult {
            for m in 1..=e {
                acc = acc.mul(&WeightedElement::linear_plus(&ring, &l, m));
            }
        }
    }
    for dv in &td.divisors {
        let e = dv.degree(d);
        let l = dv.poly();
        for _ in 0..dv.mult {
            if e >= 0 {
                for m in 1..=e {
                    acc = acc.mul(&WeightedElement::linear_plus_inverse(&ring, &l, m));
                }
            } else {
                for m in e + 1..=0 {
                    acc = acc.mul(&WeightedElement::linear_plus(&ring, &l, m));
                }
            }
        }
    }
    Ok(acc)
}

/// `sum_d (-1)^eps(d) prod_alpha (c1(L_alpha) + z<alpha,d>) toric_coeff(d)` over the cone points of height `total`.
pub fn abelianized_numerator(td: &ToricData, total: usize) -> Result<WeightedElement, ToricError> {
    let ring = td.ring();
    let mut sum = WeightedElement::new(RingElement::zero(&ring), td.roots.len() as i64);
    for d in enumerate_degrees(td, total)? {
        let mut term = toric_coeff(td, &d)?;
        for r in &td.roots {
            term = term.mul(&WeightedElement::linear_plus(&ring, &r.poly(), r.degree(&d)));
        }
        let term = term.scale(&Rational::from_int(td.sign_of(&d)));
        sum = sum.try_add(&term).map_err(|_| ToricError::Weight)?;
    }
    Ok(sum)
}

/// Coefficients `c` with `target = sum_l c_l basis_l omega` in degree `m + |Phi+|` of the abelian ring.
pub fn solve_in_ring(
    td: &ToricData,
    omega: &MPoly,
    basis: &[MPoly],
    target: &MPoly,
    m: usize,
) -> Result<Vec<Rational>, ToricError> {
    let ring = td.ring();
    let t = RingElement::from_poly(&ring, target);
    solve_component(td, omega, basis, t.component(m + td.roots.len()), m)
}

fn solve_component(
    td: &ToricData,
    omega: &MPoly,
    basis: &[MPoly],
    target: &[Rational],
    m: usize,
) -> Result<Vec<Rational>, ToricError> {
    let ring = td.ring();
    let deg = m + td.roots.len();
    let omega = RingElement::from_poly(&ring, omega);
    let cols: Vec<Vec<Rational>> = basis
        .iter()
        .map(|l| RingElement::from_poly(&ring, l).mul(&omega).component(deg).to_vec())
        .collect();
    let mut mat = QMatrix::zeros(target.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            mat.set(i, j, v.clone());
        }
    }
    if mat.rank() != cols.len() {
        return Err(ToricError::NotDivisible(m));
    }
    mat.solve(target).ok_or(ToricError::NotDivisible(m))
}

/// Coefficients `c` with `a_m = sum_l c_l lift_l omega` in each degree `m` of `lifts`.
pub fn omega_divide(
    td: &ToricData,
    a: &WeightedElement,
    lifts: &[Vec<MPoly>],
) -> Result<Vec<Vec<Rational>>, ToricError> {
    let np = td.roots.len();
    for deg in 0..np {
        if a.elem.component(deg).iter().any(|c| !c.is_zero()) {
            return Err(ToricError::NotDivisible(deg));
        }
    }
    let omega = td.omega();
    lifts
        .iter()
        .enumerate()
        .map(|(m, basis)| solve_component(td, &omega, basis, a.elem.component(m + np), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn projective_line() -> ToricData {
        let h = MPoly::var(1, 0);
        ToricData::new(
            vec!["H".into()],
            vec![h.pow(2)],
            1,
            vec![Factor::new(vec![1], vec![1], 2)],
            vec![],
            vec![],
            vec![0],
            vec![1],
            Cone::Orthant,
        )
    }

    #[test]
    fn trivial_degree() {
        let td = projective_line();
        let c = toric_coeff(&td, &[0]).unwrap();
        assert_eq!(c.weight, 0);
        assert_eq!(c.elem, RingElement::one(&td.ring()));
    }

    #[test]
    fn inverse_square_on_p1() {
        let td = projective_line();
        let c = toric_coeff(&td, &[1]).unwrap();
        assert_eq!(c.weight, -2);
        let expected = MPoly::one(1) - MPoly::linear(&[2]);
        assert_eq!(c.elem.to_poly(), expected);
        assert!(toric_coeff(&td, &[-1]).is_err());
    }

    #[test]
    fn compositions_of_two() {
        let td = ToricData::new(
            vec!["H1".into(), "H2".into()],
            vec![],
            1,
            vec![],
            vec![],
            vec![],
            vec![1, 1],
            vec![1, 1],
            Cone::Orthant,
        );
        let mut ds = enumerate_degrees(&td, 2).unwrap();
        ds.sort();
        assert_eq!(ds, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }
}
