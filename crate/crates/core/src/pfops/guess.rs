use rayon::prelude::*;

use crate::ratqa::{nullspace, QMatrix, Rational};

use super::ore::OreOperator;
use super::PfError;

/// Extra coefficients checked beyond those used in the solve.
pub const DEFAULT_GUARD: usize = 12;

/// Series length needed to search for an order-`r` operator of `q`-degree `d`.
pub fn required_len(r: usize, d: usize, guard: usize) -> usize {
    (r + 1) * (d + 1) + guard
}

/// The operator of order at most `r` and `q`-degree at most `d` annihilating `series`, if it is unique.
///
/// The first `len - guard` coefficients determine the kernel; the remaining ones must also vanish.
pub fn annihilator_at(series: &[Rational], r: usize, d: usize, guard: usize) -> Result<Option<OreOperator>, PfError> {
    let needed = required_len(r, d, guard);
    if series.len() < needed {
        return Err(PfError::TooShort { needed, got: series.len() });
    }
    let rows = series.len() - guard;
    let cols: Vec<(usize, usize)> = (0..=r).flat_map(|i| (0..=d).map(move |j| (i, j))).collect();
    let mat: Vec<Vec<Rational>> = (0..rows)
        .into_par_iter()
        .map(|n| {
            cols.iter()
                .map(|&(i, j)| {
                    if j > n {
                        Rational::zero()
                    } else {
                        Rational::from_int((n - j) as i64).pow(i as i64) * &series[n - j]
                    }
                })
                .collect()
        })
        .collect();
    let kernel = nullspace(&QMatrix::from_rows(mat));
    match kernel.len() {
        0 => Ok(None),
        1 => {
            let mut grid = vec![vec![Rational::zero(); d + 1]; r + 1];
            for (&(i, j), v) in cols.iter().zip(&kernel[0]) {
                grid[i][j] = v.clone();
            }
            let op = OreOperator::from_grid(&grid).normalize();
            Ok(op.apply(series).iter().all(|c| c.is_zero()).then_some(op))
        }
        dim => Err(PfError::Underdetermined { d, dim }),
    }
}

/// Scan `q`-degrees `0..=max_d` and return the first unique annihilator.
pub fn annihilator_search(
    series: &[Rational],
    r: usize,
    max_d: usize,
    guard: usize,
) -> Result<Option<OreOperator>, PfError> {
    for d in 0..=max_d {
        if let Some(op) = annihilator_at(series, r, d, guard)? {
            return Ok(Some(op));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfops::parse_operator;

    fn binom_central(n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::one()];
        for m in 0..n - 1 {
            let prev = out[m].clone();
            out.push(prev.mul_int(2 * (2 * m as i64 + 1)) / Rational::from_int(m as i64 + 1));
        }
        out
    }

    #[test]
    fn constant_series() {
        let mut f = vec![Rational::zero(); 20];
        f[0] = Rational::one();
        let op = annihilator_search(&f, 1, 3, DEFAULT_GUARD).unwrap().unwrap();
        assert_eq!(op, OreOperator::theta());
    }

    #[test]
    fn central_binomials() {
        let f = binom_central(30);
        assert_eq!(f[3], Rational::from_int(20));
        let op = annihilator_search(&f, 1, 4, DEFAULT_GUARD).unwrap().unwrap();
        assert_eq!(op, parse_operator("(1 - 4q) theta - 2q").unwrap());
    }

    #[test]
    fn short_series_is_reported() {
        let f = binom_central(10);
        assert_eq!(annihilator_at(&f, 1, 1, DEFAULT_GUARD), Err(PfError::TooShort { needed: 16, got: 10 }));
    }

    #[test]
    fn too_many_unknowns_is_underdetermined() {
        let mut f = vec![Rational::zero(); 20];
        f[0] = Rational::one();
        assert!(matches!(annihilator_at(&f, 3, 0, DEFAULT_GUARD), Err(PfError::Underdetermined { .. })));
    }
}
