use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohomring::symfun::{complete, hook_content_dim, ssyt_contents, substitute_elementary, to_elementary};
use crate::cohomring::MPoly;
use crate::ratqa::Rational;

/// Weakly decreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("parts {0:?} are not weakly decreasing")]
    NotPartition(Vec<u32>),
    #[error("partition {0} has more than {1} parts")]
    TooLong(Partition, usize),
    #[error("not dualizable; use qconn or P_Delta pipeline")]
    Mixed,
    #[error("summand {0} is not expressible through S* weights")]
    RankMismatch(String),
    #[error("Calabi-Yau check failed: rank {rank} vs dim-3 = {expected_rank}, c1 {c1} vs {expected_c1}")]
    NotCalabiYau { rank: usize, expected_rank: usize, c1: Rational, expected_c1: i64 },
    #[error("invalid Grassmannian G({0},{1})")]
    BadGrassmannian(usize, usize),
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, SpecError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(SpecError::NotPartition(parts));
        }
        Ok(Partition(parts.into_iter().filter(|&p| p > 0).collect()))
    }

    /// `(1^m)`.
    pub fn column(m: usize) -> Self {
        Partition(vec![1; m])
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = SpecError;
    fn try_from(v: Vec<u32>) -> Result<Self, SpecError> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Weight multiset of the Schur functor applied to the standard representation of GL(k).
pub fn schur_weights(lambda: &Partition, k: usize) -> Result<Vec<Vec<i64>>, SpecError> {
    if lambda.len() > k {
        return Err(SpecError::TooLong(lambda.clone(), k));
    }
    Ok(ssyt_contents(lambda.parts(), k)
        .into_iter()
        .map(|c| c.into_iter().map(i64::from).collect())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Carrier {
    #[serde(rename = "S*")]
    SDual,
    #[serde(rename = "Q")]
    Q,
    #[serde(rename = "O")]
    O,
}

/// `Sigma^lambda(carrier) (x) O(twist)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleSummand {
    pub carrier: Carrier,
    #[serde(default)]
    pub lambda: Partition,
    #[serde(default)]
    pub twist: i64,
}

impl BundleSummand {
    pub fn line(t: i64) -> Self {
        BundleSummand { carrier: Carrier::O, lambda: Partition::empty(), twist: t }
    }

    pub fn sdual(parts: &[u32], t: i64) -> Self {
        BundleSummand { carrier: Carrier::SDual, lambda: Partition::new(parts.to_vec()).unwrap(), twist: t }
    }

    pub fn q(parts: &[u32], t: i64) -> Self {
        BundleSummand { carrier: Carrier::Q, lambda: Partition::new(parts.to_vec()).unwrap(), twist: t }
    }

    /// Rank on `G(k, n)`.
    pub fn rank(&self, k: usize, n: usize) -> usize {
        match self.carrier {
            Carrier::O => 1,
            Carrier::SDual => hook_content_dim(self.lambda.parts(), k) as usize,
            Carrier::Q => hook_content_dim(self.lambda.parts(), n - k) as usize,
        }
    }

    /// First Chern class as a multiple of the hyperplane class.
    pub fn c1(&self, k: usize, n: usize) -> Rational {
        let r = self.rank(k, n) as i64;
        let base = match self.carrier {
            Carrier::O => 0,
            Carrier::SDual => k,
            Carrier::Q => n - k,
        };
        let lam = if base == 0 {
            Rational::zero()
        } else {
            Rational::new(self.lambda.size() as i64 * r, base as i64)
        };
        lam + Rational::from_int(self.twist * r)
    }

    /// Line classes on the abelian quotient, as coefficient vectors on `H_1..H_k`.
    pub fn line_classes(&self, k: usize) -> Result<Vec<Vec<i64>>, SpecError> {
        match self.carrier {
            Carrier::Q => Err(SpecError::RankMismatch(self.to_string())),
            Carrier::O => Ok(vec![vec![self.twist; k]]),
            Carrier::SDual => Ok(schur_weights(&self.lambda, k)?
                .into_iter()
                .map(|w| w.into_iter().map(|a| a + self.twist).collect())
                .collect()),
        }
    }

    /// Total Chern class (truncated at `dmax`) and Euler class as symmetric lifts in the
    /// Chern roots `x_1..x_k` of `S*`.
    pub fn chern_lift(&self, k: usize, n: usize, dmax: usize) -> (MPoly, MPoly) {
        match self.carrier {
            Carrier::O | Carrier::SDual => {
                let classes = self.line_classes(k).expect("S*-form summand");
                chern_of_lines(&classes, k, dmax)
            }
            Carrier::Q => {
                let r = n - k;
                let weights = schur_weights(&self.lambda, r).expect("partition fits");
                let classes: Vec<Vec<i64>> =
                    weights.into_iter().map(|w| w.into_iter().map(|a| a + self.twist).collect()).collect();
                let (c, e) = chern_of_lines(&classes, r, dmax.max(classes.len()));
                let images: Vec<MPoly> = (1..=r).map(|j| complete(j, k)).collect();
                let conv = |p: &MPoly, d: usize| {
                    let exp = to_elementary(p).expect("symmetric in the roots of Q");
                    substitute_elementary(&exp, &images, d)
                };
                (conv(&c, dmax).truncate(dmax), conv(&e, classes.len()))
            }
        }
    }
}

fn chern_of_lines(classes: &[Vec<i64>], nv: usize, dmax: usize) -> (MPoly, MPoly) {
    let mut c = MPoly::one(nv);
    let mut e = MPoly::one(nv);
    for cl in classes {
        let l = MPoly::linear(cl);
        c = c.mul_trunc(&(&MPoly::one(nv) + &l), dmax);
        e = &e * &l;
    }
    (c, e)
}

impl fmt::Display for BundleSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.carrier {
            Carrier::O => return write!(f, "O({})", self.twist),
            Carrier::SDual => "S*",
            Carrier::Q => "Q",
        };
        write!(f, "Sigma^{}{}", self.lambda, base)?;
        if self.twist != 0 {
            write!(f, "({})", self.twist)?;
        }
        Ok(())
    }
}

/// A bundle on `G(k, n)` given as a direct sum of homogeneous summands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TargetSpec {
    pub grassmann: [usize; 2],
    pub summands: Vec<BundleSummand>,
    #[serde(default)]
    pub label: String,
}

impl TargetSpec {
    pub fn new(label: &str, k: usize, n: usize, summands: Vec<BundleSummand>) -> Self {
        TargetSpec { grassmann: [k, n], summands, label: label.to_string() }
    }

    pub fn k(&self) -> usize {
        self.grassmann[0]
    }

    pub fn n(&self) -> usize {
        self.grassmann[1]
    }

    pub fn dim(&self) -> usize {
        self.k() * (self.n() - self.k())
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(|s| s.rank(self.k(), self.n())).sum()
    }

    pub fn c1(&self) -> Rational {
        self.summands.iter().map(|s| s.c1(self.k(), self.n())).sum()
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let (k, n) = (self.k(), self.n());
        if k == 0 || k >= n {
            return Err(SpecError::BadGrassmannian(k, n));
        }
        for s in &self.summands {
            let cap = match s.carrier {
                Carrier::O => 0,
                Carrier::SDual => k,
                Carrier::Q => n - k,
            };
            if s.lambda.len() > cap {
                return Err(SpecError::TooLong(s.lambda.clone(), cap));
            }
        }
        Ok(())
    }

    /// Rank equals dim - 3 and c1 equals c1 of the Grassmannian.
    pub fn cy_check(&self) -> Result<(), SpecError> {
        self.validate()?;
        let rank = self.rank();
        let c1 = self.c1();
        let expected_rank = self.dim().saturating_sub(3);
        let expected_c1 = self.n() as i64;
        if rank != expected_rank || c1 != Rational::from_int(expected_c1) {
            return Err(SpecError::NotCalabiYau { rank, expected_rank, c1, expected_c1 });
        }
        Ok(())
    }

    pub fn has_q(&self) -> bool {
        self.summands.iter().any(|s| s.carrier == Carrier::Q)
    }

    pub fn has_sdual(&self) -> bool {
        self.summands.iter().any(|s| s.carrier == Carrier::SDual)
    }

    /// Whether the abelian quotient of this Grassmannian carries the bundle as a sum of lines.
    pub fn is_sdual_form(&self) -> bool {
        !self.has_q()
    }

    pub fn bundle_string(&self) -> String {
        let s: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        s.join(" + ")
    }

    /// All line classes of the bundle on the abelian quotient.
    pub fn line_classes(&self) -> Result<Vec<Vec<i64>>, SpecError> {
        let mut out = Vec::new();
        for s in &self.summands {
            out.extend(s.line_classes(self.k())?);
        }
        Ok(out)
    }
}

/// Transport a pure-Q spec on `G(k, n)` to the S*-form on `G(n-k, n)` (and back).
pub fn dualize(spec: &TargetSpec) -> Result<TargetSpec, SpecError> {
    if spec.has_q() && spec.has_sdual() {
        return Err(SpecError::Mixed);
    }
    let summands = spec
        .summands
        .iter()
        .map(|s| {
            let carrier = match s.carrier {
                Carrier::Q => Carrier::SDual,
                Carrier::SDual => Carrier::Q,
                Carrier::O => Carrier::O,
            };
            BundleSummand { carrier, lambda: s.lambda.clone(), twist: s.twist }
        })
        .collect();
    Ok(TargetSpec {
        grassmann: [spec.n() - spec.k(), spec.n()],
        summands,
        label: spec.label.clone(),
    })
}

/// Product of all line classes of an S*-form spec: the Euler class lift on the abelian quotient.
pub fn euler_lift(spec: &TargetSpec) -> Result<MPoly, SpecError> {
    let k = spec.k();
    let mut e = MPoly::one(k);
    for cl in spec.line_classes()? {
        e = &e * &MPoly::linear(&cl);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_of_small_functors() {
        let w = schur_weights(&Partition::column(1), 2).unwrap();
        assert_eq!(w, vec![vec![1, 0], vec![0, 1]]);
        let mut w2 = schur_weights(&Partition::new(vec![2]).unwrap(), 2).unwrap();
        w2.sort();
        assert_eq!(w2, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let w5 = schur_weights(&Partition::column(5), 6).unwrap();
        assert_eq!(w5.len(), 6);
        assert!(w5.iter().all(|v| v.iter().sum::<i64>() == 5 && v.iter().all(|&a| a <= 1)));
    }

    #[test]
    fn partition_rejects_increasing() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0]).unwrap().parts(), &[2, 1]);
    }

    #[test]
    fn dualize_examples() {
        let s17 = TargetSpec::new("no17", 2, 8, vec![BundleSummand::q(&[1; 5], 0), BundleSummand::line(1), BundleSummand::line(1), BundleSummand::line(1)]);
        let d = dualize(&s17).unwrap();
        assert_eq!(d.grassmann, [6, 8]);
        assert_eq!(d.summands[0], BundleSummand::sdual(&[1; 5], 0));
        assert_eq!(dualize(&d).unwrap(), s17);
        let mixed = TargetSpec::new("x", 2, 7, vec![BundleSummand::sdual(&[1], 1), BundleSummand::q(&[1; 4], 0)]);
        assert_eq!(dualize(&mixed).unwrap_err(), SpecError::Mixed);
        let lines = TargetSpec::new("x", 2, 7, vec![BundleSummand::line(1); 7]);
        assert_eq!(dualize(&lines).unwrap().grassmann, [5, 7]);
    }

    #[test]
    fn euler_lifts() {
        let o1 = TargetSpec::new("x", 2, 6, vec![BundleSummand::line(1)]);
        assert_eq!(euler_lift(&o1).unwrap(), MPoly::linear(&[1, 1]));
        let s1 = TargetSpec::new("x", 2, 6, vec![BundleSummand::sdual(&[1], 1)]);
        assert_eq!(euler_lift(&s1).unwrap(), &MPoly::linear(&[2, 1]) * &MPoly::linear(&[1, 2]));
        let sym2 = TargetSpec::new("x", 2, 8, vec![BundleSummand::sdual(&[2], 0)]);
        let expect = &(&MPoly::linear(&[2, 0]) * &MPoly::linear(&[1, 1])) * &MPoly::linear(&[0, 2]);
        assert_eq!(euler_lift(&sym2).unwrap(), expect);
        let q = TargetSpec::new("x", 2, 5, vec![BundleSummand::q(&[1, 1], 1)]);
        assert!(euler_lift(&q).is_err());
    }

    #[test]
    fn first_chern_classes() {
        let s = BundleSummand::q(&[1, 1], 1);
        assert_eq!(s.rank(2, 5), 3);
        assert_eq!(s.c1(2, 5), Rational::from_int(5));
        let t = BundleSummand::sdual(&[2], 0);
        assert_eq!(t.c1(3, 7), Rational::from_int(4));
    }
}
