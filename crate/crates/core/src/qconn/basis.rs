use crate::cohomring::symfun::complete;
use crate::cohomring::{Grassmannian, MPoly};
use crate::homobundle::{bundle_lifts, TargetSpec};
use crate::ratqa::{QMatrix, Rational};

use super::QconnError;

/// A monomial basis in the special Schubert classes `s_i = c_i(Q)` with the twisted pairing
/// `(a, b) = int a b e(E')`.
#[derive(Debug, Clone)]
pub struct TwistedBasis {
    pub names: Vec<String>,
    pub degrees: Vec<usize>,
    /// Lifts in the Chern roots of `S*`.
    pub lifts: Vec<MPoly>,
    pub gram: QMatrix,
    /// Inverse Gram matrix: `T^a = sum_b dual[a][b] T_b`.
    pub dual: QMatrix,
    /// `int e(E')`-degree: classes of total degree `dim X - rank E'` pair with `1`.
    pub top: usize,
    pub euler: MPoly,
    grass: Grassmannian,
}

/// Parse `1`, `s1`, `s1^2s2`, `s1 s2` into exponents of `s_1, s_2, ...`.
pub fn parse_class(name: &str) -> Result<Vec<u32>, QconnError> {
    let bad = || QconnError::Parse(format!("bad class name {name:?}"));
    let s: String = name.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut exps: Vec<u32> = Vec::new();
    if s == "1" {
        return Ok(exps);
    }
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        if b[i] != b's' {
            return Err(bad());
        }
        i += 1;
        let st = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let idx: usize = s[st..i].parse().map_err(|_| bad())?;
        let mut e = 1u32;
        if i < b.len() && b[i] == b'^' {
            i += 1;
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            e = s[st..i].parse().map_err(|_| bad())?;
        }
        if idx == 0 {
            return Err(bad());
        }
        if exps.len() < idx {
            exps.resize(idx, 0);
        }
        exps[idx - 1] += e;
    }
    Ok(exps)
}

fn class_lift(exps: &[u32], k: usize) -> MPoly {
    exps.iter().enumerate().fold(MPoly::one(k), |acc, (i, &e)| &acc * &complete(i + 1, k).pow(e))
}

impl TwistedBasis {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `int T_i T_j T_k e(E')`.
    pub fn triple(&self, i: usize, j: usize, k: usize) -> Rational {
        if self.degrees[i] + self.degrees[j] + self.degrees[k] != self.top {
            return Rational::zero();
        }
        let f = &(&(&self.lifts[i] * &self.lifts[j]) * &self.lifts[k]) * &self.euler;
        self.grass.integrate(&f)
    }

    /// Coordinates of `T_i T_j` in the basis, read off through the pairing.
    pub fn product(&self, i: usize, j: usize) -> Vec<Rational> {
        let pairs: Vec<Rational> = (0..self.len()).map(|k| self.triple(i, j, k)).collect();
        self.dual.mul_vec(&pairs)
    }
}

/// Gram matrix of the twisted pairing on the named classes.
pub fn twisted_pairing(names: &[String], spec: &TargetSpec) -> Result<TwistedBasis, QconnError> {
    let (k, n) = (spec.k(), spec.n());
    if spec.rank() > spec.dim() {
        return Err(QconnError::Spec(format!("rank {} exceeds dimension {}", spec.rank(), spec.dim())));
    }
    let top = spec.dim() - spec.rank();
    let (euler, _) = bundle_lifts(spec, 0);
    let grass = Grassmannian::new(k, n);
    let mut lifts = Vec::new();
    let mut degrees = Vec::new();
    for name in names {
        let e = parse_class(name)?;
        degrees.push(e.iter().enumerate().map(|(i, &x)| (i + 1) * x as usize).sum());
        lifts.push(class_lift(&e, k));
    }
    if degrees.windows(2).any(|w| w[0] > w[1]) {
        return Err(QconnError::Spec("basis degrees must be weakly increasing".into()));
    }
    let m = names.len();
    let mut gram = QMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            if degrees[i] + degrees[j] != top {
                continue;
            }
            let v = grass.integrate(&(&(&lifts[i] * &lifts[j]) * &euler));
            gram.set(i, j, v.clone());
            gram.set(j, i, v);
        }
    }
    let dual = gram.inverse().ok_or(QconnError::DegeneratePairing)?;
    Ok(TwistedBasis { names: names.to_vec(), degrees, lifts, gram, dual, top, euler, grass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_names() {
        assert_eq!(parse_class("1").unwrap(), Vec::<u32>::new());
        assert_eq!(parse_class("s1^2s2").unwrap(), vec![2, 1]);
        assert_eq!(parse_class("s1 s2").unwrap(), vec![1, 1]);
        assert_eq!(parse_class("s3").unwrap(), vec![0, 0, 1]);
        assert!(parse_class("x1").is_err());
        assert!(parse_class("s0").is_err());
    }
}
