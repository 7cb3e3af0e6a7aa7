use serde::{Deserialize, Serialize};

use crate::homobundle::{CatalogRow, SpecError, TargetSpec};
use crate::ratqa::{QMatrix, Rational};

use super::fast::Sampler;
use super::model::{Model, ModelError};
use super::pdelta::{PLUCKER, SYM2_F};
use super::toric::{abelianized_numerator, omega_divide, ToricError};

/// The scalar series `I_0 .. I_3` of a small I-function, `Q = 1`, `q = e^t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IScalarSeries {
    pub target: String,
    pub order: usize,
    #[serde(rename = "I0")]
    pub i0: Vec<Rational>,
    #[serde(rename = "I1red", default, skip_serializing_if = "Vec::is_empty")]
    pub i1red: Vec<Rational>,
    #[serde(rename = "I2red", default, skip_serializing_if = "Vec::is_empty")]
    pub i2red: Vec<Rational>,
    #[serde(rename = "I3red", default, skip_serializing_if = "Vec::is_empty")]
    pub i3red: Vec<Rational>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub conjectural: bool,
}

/// Which of the four series to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parts {
    All,
    I0,
}

impl Parts {
    fn top(self) -> usize {
        match self {
            Parts::All => 3,
            Parts::I0 => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error("int H^3 e(E) vanishes")]
    DegeneratePairing,
    #[error("no generic sample points found")]
    Points,
    #[error("sample values at total {0} are inconsistent in degree {1}")]
    Inconsistent(usize, usize),
}

impl From<SpecError> for SeriesError {
    fn from(e: SpecError) -> Self {
        SeriesError::Model(ModelError::Spec(e))
    }
}

/// Model used for a catalog row by the abelianization and P_Delta pipelines.
pub fn model_for_row(row: &CatalogRow) -> Result<Model, ModelError> {
    match row.no {
        17 => Model::nets("no17", &[PLUCKER; 3]),
        18 => Model::nets("no18", &SYM2_F),
        _ => {
            if row.spec.has_q() && row.spec.has_sdual() {
                return Err(SpecError::Mixed.into());
            }
            Model::grassmann(&row.spec)
        }
    }
}

struct Projection {
    pair2: Vec<Rational>,
    pair3: Vec<Rational>,
    degree: Rational,
}

impl Projection {
    fn new(model: &Model, parts: Parts) -> Result<Self, SeriesError> {
        let degree = model.degree();
        if degree.is_zero() {
            return Err(SeriesError::DegeneratePairing);
        }
        if parts == Parts::I0 {
            return Ok(Projection { pair2: vec![], pair3: vec![], degree });
        }
        let h = &model.hyperplane;
        let pair2 = model.lifts[2].iter().map(|l| model.integrate(&[l, h, &model.euler])).collect();
        let pair3 = model.lifts[3].iter().map(|l| model.integrate(&[l, &model.euler])).collect();
        Ok(Projection { pair2, pair3, degree })
    }

    fn push(&self, s: &mut IScalarSeries, coords: &[Vec<Rational>]) {
        s.i0.push(coords[0][0].clone());
        if coords.len() > 1 {
            s.i1red.push(coords[1][0].clone());
            let dot = |c: &[Rational], p: &[Rational]| -> Rational {
                c.iter().zip(p).map(|(a, b)| a * b).sum::<Rational>() / &self.degree
            };
            s.i2red.push(dot(&coords[2], &self.pair2));
            s.i3red.push(dot(&coords[3], &self.pair3));
        }
    }
}

fn empty(model: &Model, order: usize) -> IScalarSeries {
    IScalarSeries {
        target: model.label.clone(),
        order,
        i0: Vec::with_capacity(order + 1),
        i1red: Vec::new(),
        i2red: Vec::new(),
        i3red: Vec::new(),
        conjectural: model.conjectural,
    }
}

fn eval_matrix(model: &Model, m: usize, pts: &[Vec<i64>]) -> QMatrix {
    QMatrix::from_rows(pts.iter().map(|y| model.invariants[m].iter().map(|b| b.eval_int(y)).collect()).collect())
}

/// Integer points off the root hyperplanes on which the invariants of each degree are independent,
/// plus one extra point for a consistency check.
pub fn sample_points(model: &Model, top: usize) -> Result<Vec<Vec<i64>>, SeriesError> {
    let nv = model.td.nvars();
    let omega = model.td.omega();
    let need = (0..=top).map(|m| model.invariants[m].len()).max().unwrap_or(1) + 1;
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut pts: Vec<Vec<i64>> = Vec::new();
    for _ in 0..2000 {
        let y: Vec<i64> = (0..nv)
            .map(|_| {
                state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
                ((state >> 33) % 13) as i64 - 6
            })
            .collect();
        if omega.eval_int(&y).is_zero() {
            continue;
        }
        pts.push(y);
        if pts.len() >= need && (0..=top).all(|m| eval_matrix(model, m, &pts).rank() == model.invariants[m].len()) {
            return Ok(pts);
        }
    }
    Err(SeriesError::Points)
}

/// Incremental line-sampling computation: each call to `extend_to` adds the missing levels.
pub struct SeriesBuilder<'a> {
    model: &'a Model,
    top: usize,
    omegas: Vec<Rational>,
    mats: Vec<QMatrix>,
    sampler: Sampler<'a>,
    proj: Projection,
    series: IScalarSeries,
}

impl<'a> SeriesBuilder<'a> {
    pub fn new(model: &'a Model, parts: Parts) -> Result<Self, SeriesError> {
        let top = parts.top();
        let np = model.td.roots.len();
        let pts = sample_points(model, top)?;
        let omegas = pts.iter().map(|y| model.td.omega().eval_int(y)).collect();
        let mats = (0..=top).map(|m| eval_matrix(model, m, &pts)).collect();
        let sampler = Sampler::new(&model.td, &pts, np + top);
        let proj = Projection::new(model, parts)?;
        Ok(SeriesBuilder { model, top, omegas, mats, sampler, proj, series: empty(model, 0) })
    }

    /// Number of coefficients computed so far.
    pub fn len(&self) -> usize {
        self.series.i0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.i0.is_empty()
    }

    pub fn extend_to(&mut self, order: usize) -> Result<&IScalarSeries, SeriesError> {
        let np = self.model.td.roots.len();
        for t in self.len()..=order {
            let vals = self.sampler.level(t)?;
            for row in &vals {
                if let Some(j) = (0..np).find(|&j| !row[j].is_zero()) {
                    return Err(ToricError::NotDivisible(j).into());
                }
            }
            let mut coords = Vec::with_capacity(self.top + 1);
            for m in 0..=self.top {
                let rhs: Vec<Rational> = vals.iter().zip(&self.omegas).map(|(row, w)| &row[np + m] / w).collect();
                let c = self.mats[m].solve(&rhs).ok_or(SeriesError::Inconsistent(t, m))?;
                coords.push(self.model.inv_to_lift[m].mul_vec(&c));
            }
            self.proj.push(&mut self.series, &coords);
            self.series.order = t;
        }
        Ok(&self.series)
    }

    pub fn series(&self) -> &IScalarSeries {
        &self.series
    }

    pub fn into_series(self) -> IScalarSeries {
        self.series
    }
}

/// Scalar series by exact line sampling.
pub fn i_series_model(model: &Model, order: usize, parts: Parts) -> Result<IScalarSeries, SeriesError> {
    let mut b = SeriesBuilder::new(model, parts)?;
    b.extend_to(order)?;
    Ok(b.into_series())
}

/// Scalar series by exact arithmetic in the truncated abelian ring.
pub fn i_series_ring(model: &Model, order: usize, parts: Parts) -> Result<IScalarSeries, SeriesError> {
    let top = parts.top();
    let proj = Projection::new(model, parts)?;
    let mut out = empty(model, order);
    for t in 0..=order {
        let a = abelianized_numerator(&model.td, t)?;
        let coords = omega_divide(&model.td, &a, &model.lifts[..=top])?;
        proj.push(&mut out, &coords);
    }
    Ok(out)
}

/// All four scalar series of a Grassmannian target.
pub fn i_series(spec: &TargetSpec, order: usize) -> Result<IScalarSeries, SeriesError> {
    i_series_model(&Model::grassmann(spec)?, order, Parts::All)
}

/// `tau - t = I1red / I0` as a q-series.
pub fn mirror_map(s: &IScalarSeries) -> Vec<Rational> {
    assert!(s.i0.first().is_some_and(|c| c.is_one()), "I0 must start with 1");
    let n = s.i1red.len().min(s.i0.len());
    let mut out: Vec<Rational> = Vec::with_capacity(n);
    for d in 0..n {
        let mut c = s.i1red[d].clone();
        for j in 1..=d {
            c -= &s.i0[j] * &out[d - j];
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homobundle::lookup;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn mirror_map_of_zero_and_of_no7_prefix() {
        let s = IScalarSeries {
            target: "x".into(),
            order: 2,
            i0: ints(&[1, 7, 199]),
            i1red: vec![Rational::zero(), Rational::from_int(21), Rational::new(1431, 2)],
            i2red: vec![],
            i3red: vec![],
            conjectural: false,
        };
        let m = mirror_map(&s);
        assert_eq!(m, vec![Rational::zero(), Rational::from_int(21), Rational::new(1137, 2)]);
        let z = IScalarSeries { i1red: vec![Rational::zero(); 3], ..s };
        assert!(mirror_map(&z).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn ring_path_agrees_with_sampling_on_small_targets() {
        for (label, order) in [("no7", 2), ("no5", 1), ("no20", 1)] {
            let model = model_for_row(&lookup(label).unwrap()).unwrap();
            let a = i_series_model(&model, order, Parts::All).unwrap();
            let b = i_series_ring(&model, order, Parts::All).unwrap();
            assert_eq!(a, b, "{label}");
        }
    }

    #[test]
    fn json_uses_fraction_strings() {
        let s = IScalarSeries {
            target: "no7".into(),
            order: 0,
            i0: ints(&[1]),
            i1red: vec![Rational::new(1, 2)],
            i2red: vec![],
            i3red: vec![],
            conjectural: false,
        };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"target":"no7","order":0,"I0":["1"],"I1red":["1/2"]}"#);
        let back: IScalarSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
