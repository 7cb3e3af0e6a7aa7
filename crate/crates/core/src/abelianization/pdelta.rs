//! The toric quotient `P_Delta` of 3x2 matrices of linear forms, and the moduli `N` of
//! determinantal nets of conics presented as its nonabelian counterpart.
//!
//! Positions are ordered `11, 12, 21, 22, 31, 32`; classes are written in the free
//! generators `(H_12, H_22, H_31, H_32)`.

use crate::cohomring::{monomials_of_degree, MPoly};
use crate::ratqa::{QMatrix, Rational};

use super::toric::{Cone, Factor, ToricData};

pub const POSITIONS: [(usize, usize); 6] = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)];

/// Class of `H_ij` in the free generators.
pub const CHI: [[i64; 4]; 6] = [
    [1, 0, 1, -1],
    [1, 0, 0, 0],
    [0, 1, 1, -1],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
];

/// Pairs of positions whose linear forms may not vanish together.
pub const SR_PAIRS: [(usize, usize); 9] = [(0, 1), (2, 3), (4, 5), (0, 2), (0, 4), (2, 4), (1, 3), (1, 5), (3, 5)];

pub const GENS: [&str; 4] = ["H12", "H22", "H31", "H32"];

/// Free-generator class of a combination `sum c_ij H_ij`.
pub fn to_free(c: &[i64; 6]) -> Vec<i64> {
    (0..4).map(|v| (0..6).map(|p| c[p] * CHI[p][v]).sum()).collect()
}

fn h(p: usize) -> MPoly {
    MPoly::linear(&CHI[p])
}

pub fn sr_relations() -> Vec<MPoly> {
    SR_PAIRS.iter().map(|&(a, b)| &h(a).pow(3) * &h(b).pow(3)).collect()
}

/// `omega = (H11-H21)(H11-H31)(H21-H31)(H12-H11)` as root factors.
pub fn roots() -> Vec<Factor> {
    let pairs = [(0, 2), (0, 4), (2, 4), (1, 0)];
    pairs
        .iter()
        .map(|&(a, b)| {
            let mut c = [0i64; 6];
            c[a] += 1;
            c[b] -= 1;
            Factor::new(to_free(&c), c.to_vec(), 1)
        })
        .collect()
}

/// Toric data with bundle classes given as combinations of the `H_ij`.
pub fn toric_data(bundles: &[[i64; 6]]) -> ToricData {
    let divisors = (0..6)
        .map(|p| {
            let mut c = [0i64; 6];
            c[p] = 1;
            Factor::new(to_free(&c), c.to_vec(), 3)
        })
        .collect();
    let bundles = bundles.iter().map(|c| Factor::new(to_free(c), c.to_vec(), 1)).collect();
    ToricData::new(
        GENS.iter().map(|s| s.to_string()).collect(),
        sr_relations(),
        7,
        divisors,
        bundles,
        roots(),
        vec![1; 6],
        vec![1; 6],
        Cone::PDelta,
    )
}

/// `Sym^2` of the dual tautological rank-two bundle.
pub const SYM2_F: [[i64; 6]; 3] = [[2, 0, 0, 2, 2, 0], [1, 1, 1, 1, 1, 1], [0, 2, 2, 0, 0, 2]];
/// The Plucker line bundle `O(1)`, whose first Chern class is `q1`.
pub const PLUCKER: [i64; 6] = [1, 1, 1, 1, 1, 1];

pub fn q1() -> MPoly {
    MPoly::linear(&to_free(&PLUCKER))
}

pub fn q2() -> MPoly {
    &MPoly::linear(&to_free(&[1, 0, 0, 1, 1, 0])) * &MPoly::linear(&to_free(&[0, 1, 1, 0, 0, 1]))
}

pub fn p2() -> MPoly {
    let a = MPoly::linear(&to_free(&[1, 0, 0, 1, 0, 0]));
    let b = MPoly::linear(&to_free(&[0, 0, 1, 0, 0, 1]));
    let c = MPoly::linear(&to_free(&[0, 1, 0, 0, 1, 0]));
    &(&(&a * &b) + &(&a * &c)) + &(&b * &c)
}

/// Lifts of the basis `1; q1; q1^2, q2, p2; q1^3, q1 q2, q1 p2` and their names.
pub fn lifts() -> (Vec<Vec<MPoly>>, Vec<Vec<String>>) {
    let (a, b, c) = (q1(), q2(), p2());
    let polys = vec![
        vec![MPoly::one(4)],
        vec![a.clone()],
        vec![a.pow(2), b.clone(), c.clone()],
        vec![a.pow(3), &a * &b, &a * &c],
    ];
    let names = [vec!["1"], vec!["q1"], vec!["q1^2", "q2", "p2"], vec!["q1^3", "q1 q2", "q1 p2"]];
    (polys, names.iter().map(|v| v.iter().map(|s| s.to_string()).collect()).collect())
}

fn permutations3() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Weyl group elements as permutations of the six positions.
pub fn weyl_group() -> Vec<[usize; 6]> {
    let mut out = Vec::new();
    for rows in permutations3() {
        for cols in [[0usize, 1], [1, 0]] {
            let mut w = [0usize; 6];
            for (p, &(i, j)) in POSITIONS.iter().enumerate() {
                let (ni, nj) = (rows[i - 1] + 1, cols[j - 1] + 1);
                w[p] = POSITIONS.iter().position(|&q| q == (ni, nj)).unwrap();
            }
            out.push(w);
        }
    }
    out
}

/// Action of a position permutation on polynomials in the free generators.
pub fn act(w: &[usize; 6], f: &MPoly) -> MPoly {
    // free generators are H12, H22, H31, H32 = positions 1, 3, 4, 5
    let images: Vec<Vec<i64>> = [1usize, 3, 4, 5].iter().map(|&p| CHI[w[p]].to_vec()).collect();
    f.linear_substitute(&images)
}

pub fn reynolds(f: &MPoly) -> MPoly {
    let g = weyl_group();
    let mut acc = MPoly::zero(4);
    for w in &g {
        acc = &acc + &act(w, f);
    }
    acc.scale(&Rational::new(1, g.len() as i64))
}

/// Basis of Weyl-invariant polynomials of degree `m`.
pub fn invariant_basis(m: usize) -> Vec<MPoly> {
    let monos = monomials_of_degree(4, m);
    let rows: Vec<Vec<Rational>> = monos
        .iter()
        .map(|mo| {
            let r = reynolds(&MPoly::monomial(mo.clone(), Rational::one()));
            monos.iter().map(|x| r.coeff(x)).collect()
        })
        .collect();
    let (red, piv) = QMatrix::from_rows(rows).rref();
    (0..piv.len())
        .map(|i| {
            let mut p = MPoly::zero(4);
            for (j, mo) in monos.iter().enumerate() {
                p.add_term(mo.clone(), red.get(i, j).clone());
            }
            p
        })
        .collect()
}

/// Integration over `P_Delta` by localization at the torus-fixed points.
#[derive(Debug, Clone)]
pub struct Localization {
    /// Values of the free generators at each fixed point, with the inverse tangent Euler class.
    points: Vec<(Vec<Rational>, Rational)>,
}

fn det4(m: &[[i64; 4]; 4]) -> i64 {
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
    let mut det = Rational::one();
    for c in 0..4 {
        let Some(p) = (c..4).find(|&r| !a[r][c].is_zero()) else { return 0 };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..4 {
            let f = &a[r][c] / &a[c][c];
            for j in c..4 {
                let v = &a[r][j] - &(&f * &a[c][j]);
                a[r][j] = v;
            }
        }
    }
    det.to_i64().unwrap()
}

impl Localization {
    /// Fixed points for the equivariant parameters `lambda[position][alpha]`; `None` if a tangent weight vanishes.
    pub fn new(lambda: &[[i64; 3]; 6]) -> Option<Self> {
        let mut points = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                let (pa, pb) = (POSITIONS[a], POSITIONS[b]);
                if pa.0 == pb.0 || pa.1 == pb.1 {
                    continue;
                }
                let present: Vec<usize> = (0..6).filter(|&p| p != a && p != b).collect();
                let chi: [[i64; 4]; 4] = std::array::from_fn(|i| CHI[present[i]]);
                assert_eq!(det4(&chi).abs(), 1, "fixed point is not smooth");
                let cmat = QMatrix::from_rows(
                    chi.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect(),
                );
                for choice in 0..81usize {
                    let alphas: Vec<usize> = (0..4).map(|i| (choice / 3usize.pow(i as u32)) % 3).collect();
                    let rhs: Vec<Rational> =
                        (0..4).map(|i| Rational::from_int(-lambda[present[i]][alphas[i]])).collect();
                    let mu = cmat.solve(&rhs).expect("unimodular");
                    let weight = |p: usize, al: usize| {
                        let mut w = Rational::from_int(lambda[p][al]);
                        for v in 0..4 {
                            w += Rational::from_int(CHI[p][v]) * &mu[v];
                        }
                        w
                    };
                    let mut euler = Rational::one();
                    for p in 0..6 {
                        for al in 0..3 {
                            let chosen = present.iter().position(|&q| q == p).map(|i| alphas[i]) == Some(al);
                            if !chosen {
                                let w = weight(p, al);
                                if w.is_zero() {
                                    return None;
                                }
                                euler *= w;
                            }
                        }
                    }
                    let values = [1usize, 3, 4, 5].iter().map(|&p| weight(p, 0)).collect();
                    points.push((values, euler.recip()));
                }
            }
        }
        Some(Localization { points })
    }

    pub fn standard() -> Self {
        Localization::seeded(0x9e37_79b9_7f4a_7c15)
    }

    /// Parameters drawn from a pseudo-random sequence.
    pub fn seeded(seed: u64) -> Self {
        let mut state = seed;
        loop {
            let lambda: [[i64; 3]; 6] = std::array::from_fn(|_| {
                std::array::from_fn(|_| {
                    state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
                    ((state >> 33) % 2001) as i64 - 1000
                })
            });
            if let Some(l) = Localization::new(&lambda) {
                return l;
            }
        }
    }

    pub fn fixed_points(&self) -> usize {
        self.points.len()
    }

    /// Integral of the product of the factors (only its degree-14 part contributes).
    pub fn integrate(&self, factors: &[&MPoly]) -> Rational {
        let top: MPoly = factors.iter().fold(MPoly::one(4), |acc, f| &acc * *f).homogeneous_part(14);
        let mut acc = Rational::zero();
        for (pt, inv) in &self.points {
            acc += top.eval(pt) * inv;
        }
        acc
    }
}

/// `int_N sigma = (1/12) int_{P_Delta} sigma omega^2`.
pub fn integrate_n(loc: &Localization, factors: &[&MPoly]) -> Rational {
    let omega = roots().iter().fold(MPoly::one(4), |acc, r| &acc * &r.poly());
    let w2 = omega.pow(2);
    let mut all: Vec<&MPoly> = factors.to_vec();
    all.push(&w2);
    loc.integrate(&all) * Rational::new(1, 12)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(p: usize) -> MPoly {
        h(p)
    }

    #[test]
    fn ring_is_fourteen_dimensional_with_palindromic_betti_numbers() {
        use crate::cohomring::{make_ring, RingPresentation};
        let ring = make_ring(RingPresentation::new(&GENS, sr_relations(), 14)).unwrap();
        let dims = ring.dims();
        assert_eq!(dims[14], 1);
        assert!(dims[6] > 1);
        let mut rev = dims.clone();
        rev.reverse();
        assert_eq!(dims, rev);
    }

    #[test]
    fn fixed_point_count() {
        assert_eq!(Localization::standard().fixed_points(), 486);
    }

    #[test]
    fn point_class_and_independence_of_parameters() {
        let mono = [hp(0).pow(2), hp(1).pow(2), hp(3).pow(2), hp(4).pow(2), hp(2).pow(3), hp(5).pow(3)];
        let refs: Vec<&MPoly> = mono.iter().collect();
        let a = Localization::standard().integrate(&refs);
        let b = Localization::seeded(7).integrate(&refs);
        assert_eq!(a, Rational::one());
        assert_eq!(b, Rational::one());
    }

    #[test]
    fn stanley_reisner_products_integrate_to_zero() {
        let loc = Localization::standard();
        for &(a, b) in &SR_PAIRS {
            let f = &(&hp(a).pow(3) * &hp(b).pow(3)) * &MPoly::linear(&[1, 2, 3, 5]).pow(8);
            assert!(loc.integrate(&[&f]).is_zero(), "{a} {b}");
        }
    }

    #[test]
    fn degree_and_twisted_degree_of_n() {
        let loc = Localization::standard();
        let q = q1();
        assert_eq!(integrate_n(&loc, &[&q.pow(6)]), Rational::from_int(57));
        let e: MPoly = SYM2_F.iter().fold(MPoly::one(4), |acc, c| &acc * &MPoly::linear(&to_free(c)));
        assert_eq!(integrate_n(&loc, &[&q.pow(3), &e]), Rational::from_int(72));
    }

    #[test]
    fn invariant_dimensions() {
        let dims: Vec<usize> = (0..=3).map(|m| invariant_basis(m).len()).collect();
        assert_eq!(dims, vec![1, 1, 3, 4]);
        let (ls, _) = lifts();
        for (m, basis) in ls.iter().enumerate() {
            for l in basis {
                assert_eq!(&reynolds(l), l, "lift in degree {m} is not invariant");
            }
        }
    }

    #[test]
    fn omega_is_anti_invariant() {
        let omega = roots().iter().fold(MPoly::one(4), |acc, r| &acc * &r.poly());
        for w in weyl_group() {
            let img = act(&w, &omega);
            assert!(img == omega || img == -&omega);
        }
    }
}
