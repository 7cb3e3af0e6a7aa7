//! Twisted quantum products from WDVV, the quantum differential equation and quantum Lefschetz.

mod basis;
mod connection;
mod wdvv;

use serde::{Deserialize, Serialize};

pub use basis::{parse_class, twisted_pairing, TwistedBasis};
pub use connection::{connection_matrix, j_series, lefschetz_series, qde_eliminate, ConnectionMatrix};
pub use wdvv::{classical_correlators, wdvv_residuals, wdvv_solve, CorrelatorKey, CorrelatorTable, Seed};

use crate::abelianization::IScalarSeries;
use crate::homobundle::{lookup, Carrier, TargetSpec};
use crate::pfops::{bvs_transform, ore_right_divide, OreOperator, PfError, RatOre};
use crate::ratqa::QPoly;
use crate::ratqa::{KernelError, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QconnError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Spec(String),
    #[error("twisted pairing is degenerate on the basis")]
    DegeneratePairing,
    #[error("pairing ({i},{j}) is {computed}, seed file says {expected}")]
    PairingMismatch { i: usize, j: usize, expected: Box<Rational>, computed: Box<Rational> },
    #[error("<T{0}, T{1}, T{2}>_{3} lies outside the degree window")]
    OutsideWindow(usize, usize, usize, usize),
    #[error("bad seed: {0}")]
    Seed(String),
    #[error("WDVV propagation stuck; undetermined: {0:?}")]
    Stuck(Vec<CorrelatorKey>),
    #[error("WDVV relation ({i},{j},{k},{l}) at degree {d} has residual {residual}")]
    Contradiction { i: usize, j: usize, k: usize, l: usize, d: usize, residual: Box<Rational> },
    #[error("classical multiplication by the divisor is not nilpotent")]
    NotNilpotent,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Operator(#[from] PfError),
}

/// Seed data: basis names, the twisted pairing and the known invariants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedFile {
    pub target: String,
    pub basis: Vec<String>,
    pub pairing: Vec<Vec<Rational>>,
    pub seeds: Vec<Seed>,
}

/// The shipped seed file for No. 25.
pub const NO25_SEEDS: &str = include_str!("../../data/no25.json");

impl SeedFile {
    pub fn no25() -> SeedFile {
        serde_json::from_str(NO25_SEEDS).expect("shipped seed file parses")
    }
}

/// Split off the positive line summands `O(t)` of a spec.
pub fn split_lines(spec: &TargetSpec) -> Result<(TargetSpec, Vec<u32>), QconnError> {
    let mut rest = Vec::new();
    let mut lines = Vec::new();
    for s in &spec.summands {
        match s.carrier {
            Carrier::O if s.twist > 0 => lines.push(s.twist as u32),
            Carrier::O => return Err(QconnError::Spec(format!("line summand {s} is not positive"))),
            _ => rest.push(s.clone()),
        }
    }
    let eprime = TargetSpec::new(&spec.label, spec.k(), spec.n(), rest);
    Ok((eprime, lines))
}

/// Everything the quantum-connection route produces for one target.
#[derive(Debug, Clone)]
pub struct QconnRun {
    pub target: String,
    pub eprime: TargetSpec,
    pub lines: Vec<u32>,
    pub basis: TwistedBasis,
    pub table: CorrelatorTable,
    pub connection: ConnectionMatrix,
    /// The quantum differential operator of the twisted J-function.
    pub qde: OreOperator,
}

impl QconnRun {
    pub fn new(file: &SeedFile) -> Result<QconnRun, QconnError> {
        let row = lookup(&file.target).map_err(|e| QconnError::Spec(e.to_string()))?;
        let (eprime, lines) = split_lines(&row.spec)?;
        let basis = twisted_pairing(&file.basis, &eprime)?;
        let m = basis.len();
        if file.pairing.len() != m || file.pairing.iter().any(|r| r.len() != m) {
            return Err(QconnError::Spec("pairing matrix has the wrong shape".into()));
        }
        for i in 0..m {
            for j in 0..m {
                if basis.gram.get(i, j) != &file.pairing[i][j] {
                    return Err(QconnError::PairingMismatch {
                        i,
                        j,
                        expected: Box::new(file.pairing[i][j].clone()),
                        computed: Box::new(basis.gram.get(i, j).clone()),
                    });
                }
            }
        }
        let slope = Rational::from_int(eprime.n() as i64) - eprime.c1();
        let slope = slope
            .to_i64()
            .filter(|&s| s > 0)
            .ok_or_else(|| QconnError::Spec(format!("c1(X) - c1(E') = {slope} must be a positive integer")))?;
        let table = wdvv_solve(&basis, slope as usize, &file.seeds)?;
        let connection = connection_matrix(&table, &basis)?;
        let qde = qde_eliminate(&connection)?;
        Ok(QconnRun { target: file.target.clone(), eprime, lines, basis, table, connection, qde })
    }

    /// Classical multiplication by `T_1`.
    pub fn hmul(&self) -> QMatrix {
        self.connection.at(0)
    }

    /// Basis coordinates of `sum_d q^d I_d` for `I = e^{tH} sum_d q^d I_d`.
    pub fn i_components(&self, order: usize) -> Result<Vec<Vec<Rational>>, QconnError> {
        let j = j_series(&self.connection, order)?;
        Ok(lefschetz_series(&j, &self.hmul(), &self.lines))
    }

    /// The scalar series, with `I_m` reduced by `int_Y I_m H^{3-m} / int_Y H^3`.
    pub fn i_series(&self, order: usize) -> Result<IScalarSeries, QconnError> {
        let comps = self.i_components(order)?;
        let h = self.hmul();
        let n = self.basis.len();
        let cut = self.lines.iter().map(|&t| Rational::from_int(t as i64)).product::<Rational>();
        // int_Y x = cut * (x H^r, 1)
        let int_y = |v: &[Rational], extra: usize| -> Rational {
            let mut w = v.to_vec();
            for _ in 0..extra + self.lines.len() {
                w = h.mul_vec(&w);
            }
            let s: Rational = (0..n).map(|i| &w[i] * self.basis.gram.get(i, 0)).sum();
            s * &cut
        };
        let mut unit = vec![Rational::zero(); n];
        unit[0] = Rational::one();
        let degree = int_y(&unit, 3);
        if degree.is_zero() {
            return Err(QconnError::DegeneratePairing);
        }
        let mut parts: [Vec<Rational>; 4] = Default::default();
        for v in &comps {
            for (m, part) in parts.iter_mut().enumerate() {
                let proj: Vec<Rational> = (0..n)
                    .map(|i| if self.basis.degrees[i] == m { v[i].clone() } else { Rational::zero() })
                    .collect();
                part.push(int_y(&proj, 3 - m) / &degree);
            }
        }
        let [i0, i1red, i2red, i3red] = parts;
        Ok(IScalarSeries { target: self.target.clone(), order, i0, i1red, i2red, i3red, conjectural: false })
    }

    /// The quantum Lefschetz transform of the quantum differential operator.
    pub fn lefschetz_operator(&self) -> OreOperator {
        bvs_transform(&self.qde, &self.lines)
    }
}

/// `P = left o (1/r) R o S` for the Lefschetz transform `P` of the quantum differential operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub lefschetz: OreOperator,
    /// Right remainder of `P` by `S`.
    pub remainder: OreOperator,
    /// Left remainder of the quotient by `left`.
    pub left_remainder: OreOperator,
    pub r: QPoly,
    pub r_op: OreOperator,
}

impl Factorization {
    pub fn is_exact(&self) -> bool {
        self.remainder.is_zero() && self.left_remainder.is_zero()
    }
}

/// Factor the Lefschetz transform of `run` through the operator `s` of the cut and a left factor.
pub fn lefschetz_factorization(run: &QconnRun, s: &OreOperator, left: &OreOperator) -> Result<Factorization, QconnError> {
    let lefschetz = run.lefschetz_operator();
    let div = ore_right_divide(&lefschetz, s)?;
    let (quot, rem) = div.exact_quotient.left_divide(&RatOre::from(left))?;
    let (r, r_op) = quot.split_denominator();
    let (_, left_remainder) = rem.split_denominator();
    Ok(Factorization { lefschetz, remainder: div.remainder, left_remainder, r, r_op })
}
