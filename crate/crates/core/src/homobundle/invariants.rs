use serde::{Deserialize, Serialize};

use super::spec::{SpecError, TargetSpec};
use crate::cohomring::{Grassmannian, MPoly};
use crate::ratqa::Rational;

/// `(H^3, c2.H, c3)` of the zero locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopInvariants {
    pub h3: i64,
    pub c2h: i64,
    pub c3: i64,
}

/// Truncated inverse of a series with constant term 1.
fn inverse_unipotent(c: &MPoly, dmax: usize) -> MPoly {
    let nv = c.nvars();
    let u = c - &MPoly::one(nv);
    let neg_u = -&u;
    let mut out = MPoly::one(nv);
    let mut term = MPoly::one(nv);
    for _ in 0..dmax {
        term = term.mul_trunc(&neg_u, dmax);
        out = &out + &term;
    }
    out
}

/// Lift of `c(TX)` for `X = G(k, n)`, truncated at `dmax`.
pub fn tangent_chern_lift(k: usize, n: usize, dmax: usize) -> MPoly {
    let mut num = MPoly::one(k);
    for i in 0..k {
        let mut v = vec![0i64; k];
        v[i] = 1;
        let f = &MPoly::one(k) + &MPoly::linear(&v);
        num = num.mul_trunc(&f.pow_trunc(n as u32, dmax), dmax);
    }
    let mut den = MPoly::one(k);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut v = vec![0i64; k];
                v[i] = 1;
                v[j] = -1;
                den = den.mul_trunc(&(&MPoly::one(k) + &MPoly::linear(&v)), dmax);
            }
        }
    }
    num.mul_trunc(&inverse_unipotent(&den, dmax), dmax)
}

/// Euler class lift and total Chern class (to degree 3) of the bundle, in the Chern roots of `S*`.
pub fn bundle_lifts(spec: &TargetSpec, dmax: usize) -> (MPoly, MPoly) {
    let (k, n) = (spec.k(), spec.n());
    let mut c = MPoly::one(k);
    let mut e = MPoly::one(k);
    for s in &spec.summands {
        let (cs, es) = s.chern_lift(k, n, dmax);
        c = c.mul_trunc(&cs, dmax);
        e = &e * &es;
    }
    (e, c)
}

fn to_int(r: Rational, what: &str) -> i64 {
    r.to_i64().unwrap_or_else(|| panic!("{what} is not an integer: {r}"))
}

/// Degree, second Chern number and Euler number of the zero locus of a general section.
pub fn topological_invariants(spec: &TargetSpec) -> Result<TopInvariants, SpecError> {
    spec.cy_check()?;
    let (k, n) = (spec.k(), spec.n());
    let g = Grassmannian::new(k, n);
    let (e, c_e) = bundle_lifts(spec, 3);
    let c_ty = tangent_chern_lift(k, n, 3).mul_trunc(&inverse_unipotent(&c_e, 3), 3);
    let h = MPoly::linear(&vec![1; k]);
    let h3 = g.integrate(&(&h.pow(3) * &e));
    let c2h = g.integrate(&(&(&c_ty.homogeneous_part(2) * &h) * &e));
    let c3 = g.integrate(&(&c_ty.homogeneous_part(3) * &e));
    Ok(TopInvariants { h3: to_int(h3, "H^3"), c2h: to_int(c2h, "c2.H"), c3: to_int(c3, "c3") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homobundle::catalog::lookup;

    fn inv(label: &str) -> (i64, i64, i64) {
        let t = topological_invariants(&lookup(label).unwrap().spec).unwrap();
        (t.h3, t.c2h, t.c3)
    }

    #[test]
    fn quartic_in_g24() {
        assert_eq!(inv("no1"), (8, 56, -176));
    }

    #[test]
    fn quotient_bundle_row() {
        assert_eq!(inv("no5"), (25, 70, -100));
    }

    #[test]
    fn four_copies_of_wedge_two() {
        assert_eq!(inv("no28"), (92, 104, -64));
    }

    #[test]
    fn non_cy_rejected() {
        let bad = TargetSpec::new("bad", 2, 4, vec![crate::homobundle::BundleSummand::line(3)]);
        assert!(matches!(topological_invariants(&bad), Err(SpecError::NotCalabiYau { .. })));
    }
}
