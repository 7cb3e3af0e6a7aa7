use std::collections::BTreeMap;

use super::mpoly::{MPoly, Mono};
use crate::ratqa::Rational;

/// Partitions of `m` with at most `max_len` parts, each at most `max_part`, in reverse lex order.
pub fn partitions(m: u32, max_len: usize, max_part: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, cap: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if left == 0 {
            return;
        }
        for p in (1..=cap.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, max_part, max_len, &mut Vec::new(), &mut out);
    out
}

/// Content vectors of all semistandard tableaux of the given shape with entries `1..=k`.
pub fn ssyt_contents(shape: &[u32], k: usize) -> Vec<Vec<u32>> {
    let shape: Vec<usize> = shape.iter().map(|&p| p as usize).filter(|&p| p > 0).collect();
    if shape.len() > k {
        return Vec::new();
    }
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&l| vec![0; l]).collect();
    let mut out = Vec::new();
    fn fill(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        k: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if idx == cells.len() {
            let mut content = vec![0u32; k];
            for row in grid.iter() {
                for &v in row {
                    content[v - 1] += 1;
                }
            }
            out.push(content);
            return;
        }
        let (r, c) = cells[idx];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for v in lo_row.max(lo_col)..=k {
            grid[r][c] = v;
            fill(idx + 1, cells, grid, k, out);
        }
        grid[r][c] = 0;
    }
    fill(0, &cells, &mut grid, k, &mut out);
    out
}

/// Hook-content formula for the number of tableaux of shape `shape` with entries `1..=k`.
pub fn hook_content_dim(shape: &[u32], k: usize) -> u64 {
    let shape: Vec<i64> = shape.iter().map(|&p| p as i64).filter(|&p| p > 0).collect();
    let conj = |c: i64| shape.iter().filter(|&&p| p > c).count() as i64;
    let mut num = Rational::one();
    for (r, &len) in shape.iter().enumerate() {
        for c in 0..len {
            let hook = (len - c - 1) + (conj(c) - r as i64 - 1) + 1;
            num = num * Rational::from_int(k as i64 + c - r as i64) / Rational::from_int(hook);
        }
    }
    num.to_i64().expect("dimension is integral") as u64
}

/// Schur polynomial `s_shape` in the variables `vars` of an `nvars`-variable ring.
pub fn schur_poly(shape: &[u32], nvars: usize, vars: &[usize]) -> MPoly {
    let mut p = MPoly::zero(nvars);
    for content in ssyt_contents(shape, vars.len()) {
        let mut m = vec![0u32; nvars];
        for (i, &v) in vars.iter().enumerate() {
            m[v] += content[i];
        }
        p.add_term(m, Rational::one());
    }
    p
}

/// Elementary symmetric polynomial `e_j` in the first `nvars` variables.
pub fn elementary(j: usize, nvars: usize) -> MPoly {
    if j > nvars {
        return MPoly::zero(nvars);
    }
    schur_poly(&vec![1; j], nvars, &(0..nvars).collect::<Vec<_>>())
}

/// Complete homogeneous symmetric polynomial `h_j` in the first `nvars` variables.
pub fn complete(j: usize, nvars: usize) -> MPoly {
    if j == 0 {
        return MPoly::one(nvars);
    }
    schur_poly(&[j as u32], nvars, &(0..nvars).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polynomial is not symmetric (leading exponent {0:?})")]
pub struct NotSymmetric(pub Mono);

/// Expand a symmetric polynomial in the elementary basis.
/// Keys are exponent vectors `(a_1..a_r)` meaning `e_1^{a_1}..e_r^{a_r}`.
pub fn to_elementary(p: &MPoly) -> Result<BTreeMap<Vec<u32>, Rational>, NotSymmetric> {
    let r = p.nvars();
    let es: Vec<MPoly> = (1..=r).map(|j| elementary(j, r)).collect();
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some((lead, c)) = lex_leading(&rest) {
        if lead.windows(2).any(|w| w[0] < w[1]) {
            return Err(NotSymmetric(lead));
        }
        let expo: Vec<u32> = (0..r).map(|i| lead[i] - lead.get(i + 1).copied().unwrap_or(0)).collect();
        let mut term = MPoly::constant(r, c.clone());
        for (j, &a) in expo.iter().enumerate() {
            if a > 0 {
                term = &term * &es[j].pow(a);
            }
        }
        rest = &rest - &term;
        out.insert(expo, c);
    }
    Ok(out)
}

fn lex_leading(p: &MPoly) -> Option<(Mono, Rational)> {
    p.terms().max_by(|a, b| a.0.cmp(b.0)).map(|(m, c)| (m.clone(), c.clone()))
}

/// Evaluate an elementary-basis expansion with `e_j -> images[j-1]`.
pub fn substitute_elementary(expansion: &BTreeMap<Vec<u32>, Rational>, images: &[MPoly], dmax: usize) -> MPoly {
    let nv = images[0].nvars();
    let mut out = MPoly::zero(nv);
    for (expo, c) in expansion {
        let mut term = MPoly::constant(nv, c.clone());
        for (j, &a) in expo.iter().enumerate() {
            if a > 0 {
                term = term.mul_trunc(&images[j].pow_trunc(a, dmax), dmax);
            }
        }
        out = &out + &term;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_schur_polys() {
        let s1 = schur_poly(&[1], 2, &[0, 1]);
        assert_eq!(s1, MPoly::linear(&[1, 1]));
        let s11 = schur_poly(&[1, 1], 2, &[0, 1]);
        assert_eq!(s11, MPoly::monomial(vec![1, 1], Rational::one()));
        let s2 = schur_poly(&[2], 2, &[0, 1]);
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        assert_eq!(s2, &(&x.pow(2) + &(&x * &y)) + &y.pow(2));
    }

    #[test]
    fn tableau_count_matches_hook_content() {
        for k in 1..=6 {
            for m in 0..=8 {
                for lam in partitions(m, 3, 5) {
                    assert_eq!(ssyt_contents(&lam, k).len() as u64, hook_content_dim(&lam, k), "{lam:?} {k}");
                }
            }
        }
    }

    #[test]
    fn power_sum_in_elementary_basis() {
        let p2 = &MPoly::var(3, 0).pow(2) + &(&MPoly::var(3, 1).pow(2) + &MPoly::var(3, 2).pow(2));
        let e = to_elementary(&p2).unwrap();
        assert_eq!(e[&vec![2, 0, 0]], Rational::one());
        assert_eq!(e[&vec![0, 1, 0]], Rational::from_int(-2));
        assert!(to_elementary(&MPoly::var(2, 0)).is_err());
    }

    #[test]
    fn partition_listing() {
        assert_eq!(partitions(3, 2, 3), vec![vec![3], vec![2, 1]]);
        assert_eq!(partitions(0, 0, 0), vec![Vec::<u32>::new()]);
    }
}
