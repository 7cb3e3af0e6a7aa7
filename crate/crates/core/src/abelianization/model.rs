use crate::cohomring::symfun::{partitions, schur_poly};
use crate::cohomring::{Grassmannian, MPoly};
use crate::homobundle::{dualize, euler_lift, SpecError, TargetSpec};
use crate::ratqa::{QMatrix, Rational};

use super::pdelta::{self, Localization};
use super::toric::{Cone, Factor, ToricData, ToricError};

/// How classes of the nonabelian quotient are integrated.
#[derive(Debug, Clone)]
pub enum Integrator {
    Grassmann(Grassmannian),
    Nets(Localization),
}

impl Integrator {
    pub fn integrate(&self, factors: &[&MPoly]) -> Rational {
        match self {
            Integrator::Grassmann(g) => {
                let f = factors.iter().fold(MPoly::one(g.k), |acc, f| &acc * *f);
                g.integrate(&f)
            }
            Integrator::Nets(loc) => pdelta::integrate_n(loc, factors),
        }
    }
}

/// An abelian/nonabelian pair together with everything needed to read off scalar series.
#[derive(Debug)]
pub struct Model {
    pub label: String,
    pub td: ToricData,
    /// Weyl-invariant lifts of a basis of `H^{2m}`, `m = 0..=3`.
    pub lifts: Vec<Vec<MPoly>>,
    pub lift_names: Vec<Vec<String>>,
    /// A basis of Weyl-invariant polynomials in each degree.
    pub invariants: Vec<Vec<MPoly>>,
    /// Coordinates on `lifts` of each invariant modulo the annihilator of `omega`.
    pub inv_to_lift: Vec<QMatrix>,
    pub hyperplane: MPoly,
    pub euler: MPoly,
    pub integrator: Integrator,
    /// Whether the abelian/nonabelian correspondence is assumed rather than known.
    pub conjectural: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

fn shape_name(lam: &[u32]) -> String {
    if lam.is_empty() {
        "1".into()
    } else {
        let parts: Vec<String> = lam.iter().map(|p| p.to_string()).collect();
        format!("s({})", parts.join(","))
    }
}

impl Model {
    /// Abelianization `(P^{n-1})^k` of `G(k, n)`; Q-only specs are dualized first.
    pub fn grassmann(spec: &TargetSpec) -> Result<Model, ModelError> {
        spec.validate()?;
        let spec = if spec.has_q() { dualize(spec)? } else { spec.clone() };
        let (k, n) = (spec.k(), spec.n());
        let unit = |i: usize| {
            let mut v = vec![0i64; k];
            v[i] = 1;
            v
        };
        let gens = (1..=k).map(|i| format!("H{i}")).collect();
        let relations = (0..k).map(|i| MPoly::var(k, i).pow(n as u32)).collect();
        let divisors = (0..k).map(|i| Factor::new(unit(i), unit(i), n as u32)).collect();
        let bundles = spec.line_classes()?.into_iter().map(|w| Factor::new(w.clone(), w, 1)).collect();
        let mut roots = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let mut v = vec![0i64; k];
                v[i] = 1;
                v[j] = -1;
                roots.push(Factor::new(v.clone(), v, 1));
            }
        }
        let np = roots.len();
        let td = ToricData::new(
            gens,
            relations,
            np + 3,
            divisors,
            bundles,
            roots,
            vec![k as i64 - 1; k],
            vec![1; k],
            Cone::Orthant,
        );
        let all: Vec<usize> = (0..k).collect();
        let mut lifts = Vec::new();
        let mut names = Vec::new();
        let mut invariants = Vec::new();
        let mut maps = Vec::new();
        for m in 0..=3u32 {
            let boxed = partitions(m, k, (n - k) as u32);
            let free = partitions(m, k, m.max(1));
            lifts.push(boxed.iter().map(|l| schur_poly(l, k, &all)).collect());
            names.push(boxed.iter().map(|l| shape_name(l)).collect());
            invariants.push(free.iter().map(|l| schur_poly(l, k, &all)).collect());
            let mut map = QMatrix::zeros(boxed.len(), free.len());
            for (j, l) in free.iter().enumerate() {
                if let Some(i) = boxed.iter().position(|b| b == l) {
                    map.set(i, j, Rational::one());
                }
            }
            maps.push(map);
        }
        Ok(Model {
            label: spec.label.clone(),
            td,
            lifts,
            lift_names: names,
            invariants,
            inv_to_lift: maps,
            hyperplane: MPoly::linear(&vec![1; k]),
            euler: euler_lift(&spec)?,
            integrator: Integrator::Grassmann(Grassmannian::new(k, n)),
            conjectural: false,
        })
    }

    /// Zero locus of a split bundle on the moduli of determinantal nets of conics.
    pub fn nets(label: &str, bundles: &[[i64; 6]]) -> Result<Model, ModelError> {
        let td = pdelta::toric_data(bundles);
        let (lifts, lift_names) = pdelta::lifts();
        let invariants: Vec<Vec<MPoly>> = (0..=3).map(pdelta::invariant_basis).collect();
        let omega = td.omega();
        let mut maps = Vec::new();
        for m in 0..=3 {
            let mut map = QMatrix::zeros(lifts[m].len(), invariants[m].len());
            for (j, inv) in invariants[m].iter().enumerate() {
                let c = super::toric::solve_in_ring(&td, &omega, &lifts[m], &(inv * &omega), m)?;
                for (i, v) in c.into_iter().enumerate() {
                    map.set(i, j, v);
                }
            }
            maps.push(map);
        }
        let euler = bundles.iter().fold(MPoly::one(4), |acc, c| &acc * &MPoly::linear(&pdelta::to_free(c)));
        Ok(Model {
            label: label.to_string(),
            td,
            lifts,
            lift_names,
            invariants,
            inv_to_lift: maps,
            hyperplane: pdelta::q1(),
            euler,
            integrator: Integrator::Nets(Localization::standard()),
            conjectural: true,
        })
    }

    pub fn integrate(&self, factors: &[&MPoly]) -> Rational {
        self.integrator.integrate(factors)
    }

    /// `int H^3 e(E)`.
    pub fn degree(&self) -> Rational {
        self.integrate(&[&self.hyperplane.pow(3), &self.euler])
    }
}
