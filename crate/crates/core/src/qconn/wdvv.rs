use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::ratqa::{QMatrix, Rational};

use super::basis::TwistedBasis;
use super::QconnError;

/// Key `(i, j, k, d)` with `i <= j <= k`.
pub type CorrelatorKey = (usize, usize, usize, usize);

fn key(i: usize, j: usize, k: usize, d: usize) -> CorrelatorKey {
    let mut v = [i, j, k];
    v.sort_unstable();
    (v[0], v[1], v[2], d)
}

/// Genus-zero three-point twisted invariants `<T_i, T_j, T_k>_d`, symmetric in `(i, j, k)`.
#[derive(Debug, Clone)]
pub struct CorrelatorTable {
    degrees: Vec<usize>,
    /// `dim X - rank E'`.
    base: usize,
    /// `c_1(X) - c_1(E')` on a line.
    slope: usize,
    pub d_max: usize,
    values: BTreeMap<CorrelatorKey, Rational>,
}

impl CorrelatorTable {
    pub fn new(basis: &TwistedBasis, slope: usize) -> Self {
        assert!(slope > 0, "the degree window is finite only for positive slope");
        let top3 = 3 * basis.degrees.iter().max().copied().unwrap_or(0);
        let d_max = top3.saturating_sub(basis.top) / slope;
        CorrelatorTable { degrees: basis.degrees.clone(), base: basis.top, slope, d_max, values: BTreeMap::new() }
    }

    /// Whether `<T_i, T_j, T_k>_d` can be nonzero by the dimension constraint.
    pub fn in_window(&self, i: usize, j: usize, k: usize, d: usize) -> bool {
        self.degrees[i] + self.degrees[j] + self.degrees[k] == self.base + self.slope * d
    }

    /// Value if determined; zero outside the window.
    pub fn get(&self, i: usize, j: usize, k: usize, d: usize) -> Option<&Rational> {
        if !self.in_window(i, j, k, d) {
            return Some(&ZERO);
        }
        self.values.get(&key(i, j, k, d))
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, d: usize, v: Rational) -> Result<(), QconnError> {
        if !self.in_window(i, j, k, d) {
            if v.is_zero() {
                return Ok(());
            }
            return Err(QconnError::OutsideWindow(i, j, k, d));
        }
        self.values.insert(key(i, j, k, d), v);
        Ok(())
    }

    /// All keys inside the window, `d <= d_max`.
    pub fn window(&self) -> Vec<CorrelatorKey> {
        let n = self.degrees.len();
        let mut out = Vec::new();
        for d in 0..=self.d_max {
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        if self.in_window(i, j, k, d) {
                            out.push((i, j, k, d));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn unknowns(&self) -> Vec<CorrelatorKey> {
        self.window().into_iter().filter(|k| !self.values.contains_key(k)).collect()
    }

    pub fn values(&self) -> &BTreeMap<CorrelatorKey, Rational> {
        &self.values
    }
}

static ZERO: Rational = Rational::ZERO;

/// `<T_i, T_j, T_k>_0 = int T_i T_j T_k e(E')`.
pub fn classical_correlators(basis: &TwistedBasis, slope: usize) -> CorrelatorTable {
    let mut t = CorrelatorTable::new(basis, slope);
    for (i, j, k, d) in t.window() {
        if d == 0 {
            let v = basis.triple(i, j, k);
            t.values.insert((i, j, k, 0), v);
        }
    }
    t
}

/// A seeded invariant `<T_1^(3-m), classes>_d` given with `m = classes.len()` insertions.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Seed {
    pub classes: Vec<usize>,
    pub d: usize,
    pub value: Rational,
}

impl Seed {
    /// Three-point form via the divisor axiom with `T_1` the divisor class.
    pub fn three_point(&self) -> Result<(CorrelatorKey, Rational), QconnError> {
        let m = self.classes.len();
        if m == 0 || m > 3 || (m < 3 && self.d == 0) {
            return Err(QconnError::Seed(format!("cannot convert {:?} at degree {}", self.classes, self.d)));
        }
        let mut cl = self.classes.clone();
        cl.resize(3, 1);
        let v = self.value.mul_int((self.d as i64).pow(3 - m as u32));
        Ok((key(cl[0], cl[1], cl[2], self.d), v))
    }
}

/// One associativity relation `(i, j, k, l, d)`.
type Instance = (usize, usize, usize, usize, usize);

/// A relation linear in the undetermined correlators: `sum coeff * x + constant = 0`.
struct LinearForm {
    coeffs: BTreeMap<CorrelatorKey, Rational>,
    constant: Rational,
}

struct Relation<'a> {
    table: &'a CorrelatorTable,
    basis: &'a TwistedBasis,
    dual_nz: &'a [Vec<(usize, Rational)>],
}

impl Relation<'_> {
    /// Terms `(coefficient, left key, right key)` of `lhs - rhs`, with zero-window factors dropped.
    fn terms(&self, (i, j, k, l, d): Instance) -> Vec<(Rational, CorrelatorKey, CorrelatorKey)> {
        let n = self.basis.len();
        let t = self.table;
        let mut out = Vec::new();
        for (sign, (x, y), (z, w)) in [(1i64, (i, j), (k, l)), (-1, (i, l), (j, k))] {
            for m in 0..=d {
                for a in 0..n {
                    if !t.in_window(x, y, a, m) {
                        continue;
                    }
                    for (b, g) in &self.dual_nz[a] {
                        if !t.in_window(*b, z, w, d - m) {
                            continue;
                        }
                        out.push((g.mul_int(sign), key(x, y, a, m), key(*b, z, w, d - m)));
                    }
                }
            }
        }
        out
    }

    fn value(&self, k: &CorrelatorKey) -> Option<&Rational> {
        self.table.values.get(k)
    }

    /// The relation as a linear form, or `None` when two undetermined factors meet.
    fn linear(&self, inst: Instance) -> Option<LinearForm> {
        let mut coeffs: BTreeMap<CorrelatorKey, Rational> = BTreeMap::new();
        let mut constant = Rational::zero();
        for (g, a, b) in self.terms(inst) {
            match (self.value(&a), self.value(&b)) {
                (Some(x), Some(y)) => constant += &g * x * y,
                (None, Some(y)) => *coeffs.entry(a).or_default() += &g * y,
                (Some(x), None) => *coeffs.entry(b).or_default() += &g * x,
                (None, None) => return None,
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        (!coeffs.is_empty()).then_some(LinearForm { coeffs, constant })
    }

    fn residual(&self, inst: Instance) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (g, a, b) in self.terms(inst) {
            acc += &g * self.value(&a)? * self.value(&b)?;
        }
        Some(acc)
    }
}

/// Unknowns fixed by the linear relations: rows of the reduced system with a single unknown.
fn solve_forms(forms: &[LinearForm]) -> Vec<(CorrelatorKey, Rational)> {
    let vars: Vec<CorrelatorKey> = forms.iter().flat_map(|f| f.coeffs.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    if vars.is_empty() {
        return Vec::new();
    }
    let index: BTreeMap<CorrelatorKey, usize> = vars.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for f in forms {
        let mut row = vec![Rational::zero(); vars.len() + 1];
        for (k, c) in &f.coeffs {
            row[index[k]] = c.clone();
        }
        row[vars.len()] = f.constant.clone();
        // scale so the first nonzero entry is 1, to drop duplicates
        let lead = row.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Rational::one).recip();
        let row: Vec<Rational> = row.iter().map(|x| x * &lead).collect();
        if seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    let (ech, pivots) = QMatrix::from_rows(rows).rref();
    let mut out = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        if p == vars.len() {
            continue;
        }
        let row = ech.row(r);
        if row[..vars.len()].iter().enumerate().all(|(c, x)| c == p || x.is_zero()) {
            out.push((vars[p], -row[vars.len()].clone()));
        }
    }
    out
}

fn instances(n: usize, d_max: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for d in 0..=d_max {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        out.push((i, j, k, l, d));
                    }
                }
            }
        }
    }
    out
}

/// Fill the table from `seeds` by linear WDVV propagation, then check every relation.
pub fn wdvv_solve(basis: &TwistedBasis, slope: usize, seeds: &[Seed]) -> Result<CorrelatorTable, QconnError> {
    let mut table = classical_correlators(basis, slope);
    let n = basis.len();
    // string axiom
    for (i, j, k, d) in table.window() {
        if d > 0 && basis.degrees[i] == 0 {
            table.values.insert((i, j, k, d), Rational::zero());
        }
    }
    for s in seeds {
        let ((i, j, k, d), v) = s.three_point()?;
        if let Some(old) = table.get(i, j, k, d).filter(|old| **old != v) {
            return Err(QconnError::Seed(format!("<T{i}, T{j}, T{k}>_{d} = {v} contradicts the known value {old}")));
        }
        table.set(i, j, k, d, v)?;
    }
    let dual_nz: Vec<Vec<(usize, Rational)>> = (0..n)
        .map(|a| (0..n).filter(|&b| !basis.dual.get(a, b).is_zero()).map(|b| (b, basis.dual.get(a, b).clone())).collect())
        .collect();
    let all = instances(n, table.d_max);
    loop {
        let rel = Relation { table: &table, basis, dual_nz: &dual_nz };
        let forms: Vec<LinearForm> = all.par_iter().filter_map(|&inst| rel.linear(inst)).collect();
        let solved = solve_forms(&forms);
        if solved.is_empty() {
            break;
        }
        for (k, v) in solved {
            table.values.insert(k, v);
        }
    }
    let missing = table.unknowns();
    if !missing.is_empty() {
        return Err(QconnError::Stuck(missing));
    }
    let rel = Relation { table: &table, basis, dual_nz: &dual_nz };
    let bad = all.par_iter().find_first(|&&inst| !rel.residual(inst).is_some_and(|r| r.is_zero()));
    if let Some(&(i, j, k, l, d)) = bad {
        let r = rel.residual((i, j, k, l, d)).unwrap_or_default();
        return Err(QconnError::Contradiction { i, j, k, l, d, residual: Box::new(r) });
    }
    Ok(table)
}

/// Number of associativity relations in the window and how many vanish.
pub fn wdvv_residuals(basis: &TwistedBasis, table: &CorrelatorTable) -> (usize, usize) {
    let n = basis.len();
    let dual_nz: Vec<Vec<(usize, Rational)>> = (0..n)
        .map(|a| (0..n).filter(|&b| !basis.dual.get(a, b).is_zero()).map(|b| (b, basis.dual.get(a, b).clone())).collect())
        .collect();
    let rel = Relation { table, basis, dual_nz: &dual_nz };
    let all = instances(n, table.d_max);
    let zero = all.par_iter().filter(|&&inst| rel.residual(inst).is_some_and(|r| r.is_zero())).count();
    (all.len(), zero)
}
