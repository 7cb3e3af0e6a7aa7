use cycalc_core::abelianization::{
    abelianized_numerator, enumerate_degrees, i_series, i_series_model, i_series_ring, mirror_map, model_for_row,
    pdelta_from_free, Model, Parts,
};
use cycalc_core::cohomring::MPoly;
use cycalc_core::homobundle::lookup;
use cycalc_core::pfops::parse_operator;
use cycalc_core::ratqa::Rational;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn qs(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| q(s)).collect()
}

#[test]
fn no7_series_to_order_three() {
    let s = i_series(&lookup("no7").unwrap().spec, 3).unwrap();
    assert_eq!(s.i0, qs(&["1", "7", "199", "8359"]));
    assert_eq!(s.i1red, qs(&["0", "21", "1431/2", "64373/2"]));
    let m = mirror_map(&s);
    assert_eq!(m[1], q("21"));
    assert_eq!(m[2], q("1137/2"));
}

#[test]
fn no18_series_to_order_three() {
    let model = model_for_row(&lookup("no18").unwrap()).unwrap();
    let s = i_series_model(&model, 3, Parts::All).unwrap();
    assert!(s.conjectural);
    assert_eq!(s.i0, qs(&["1", "6", "66", "1092"]));
    assert_eq!(s.i1red[..3], qs(&["0", "10", "167"]));
    assert_eq!(s.i1red[3], q("9574/3"));
}

#[test]
fn no18_series_solve_the_nets_operator_with_logarithms() {
    let model = model_for_row(&lookup("no18").unwrap()).unwrap();
    let s = i_series_model(&model, 6, Parts::All).unwrap();
    let op = parse_operator(
        "θ^4 - 2q(2θ^2+2θ+1)(11θ^2+11θ+3) + 4q^2(θ+1)^2(76θ^2+152θ+111) - 144q^3(θ+1)(θ+2)(2θ+3)^2",
    )
    .unwrap();
    let comps = [s.i0.clone(), s.i1red.clone(), s.i2red.clone(), s.i3red.clone()];
    for (c, res) in op.apply_frobenius(&comps).iter().enumerate() {
        assert!(res.iter().all(|x| x.is_zero()), "component {c}: {res:?}");
    }
    let mut reference = s.i1red.clone();
    reference[3] = q("26746/3");
    let res = op.apply_frobenius(&[s.i0.clone(), reference]);
    assert_eq!(res[1][3], q("463644"));
}

#[test]
fn no18_ring_path_matches_sampling() {
    let model = model_for_row(&lookup("no18").unwrap()).unwrap();
    let a = i_series_model(&model, 2, Parts::All).unwrap();
    let b = i_series_ring(&model, 2, Parts::All).unwrap();
    assert_eq!(a, b);
}

#[test]
fn no10_dualized_equals_no12() {
    let a = i_series(&lookup("no10").unwrap().spec, 4).unwrap();
    let b = i_series(&lookup("no12").unwrap().spec, 4).unwrap();
    assert_eq!(a.i0, b.i0);
    assert_eq!(a.i1red, b.i1red);
    assert_eq!(a.i2red, b.i2red);
    assert_eq!(a.i3red, b.i3red);
}

#[test]
fn no17_on_nets_matches_grassmannian_route() {
    let nets = model_for_row(&lookup("no17").unwrap()).unwrap();
    let grass = Model::grassmann(&lookup("no17").unwrap().spec).unwrap();
    let a = i_series_model(&nets, 3, Parts::I0).unwrap();
    let b = i_series_model(&grass, 3, Parts::I0).unwrap();
    assert_eq!(a.i0, b.i0);
}

#[test]
fn pdelta_cone_points_match_parametrization() {
    let model = model_for_row(&lookup("no18").unwrap()).unwrap();
    for t in 0..=6i64 {
        let pts = enumerate_degrees(&model.td, t as usize).unwrap();
        // e1, e2, e3 >= 0 with sum t, and 0 <= b <= t
        let mut expected = Vec::new();
        for e1 in 0..=t {
            for e2 in 0..=t - e1 {
                let e3 = t - e1 - e2;
                for b in 0..=t {
                    expected.push(pdelta_from_free(b - e2, b - e3, e2 + e3 - b, b - e1));
                }
            }
        }
        let (mut a, mut e) = (pts.clone(), expected);
        a.sort();
        e.sort();
        assert_eq!(a, e, "total {t}");
        for d in &pts {
            assert!(model.td.in_cone(d));
            assert_eq!(d.iter().sum::<i64>(), t);
        }
    }
    assert_eq!(enumerate_degrees(&model.td, 0).unwrap(), vec![vec![0; 6]]);
}

fn swap_vars(f: &MPoly, i: usize, j: usize) -> MPoly {
    let mut perm: Vec<usize> = (0..f.nvars()).collect();
    perm.swap(i, j);
    f.permute(&perm)
}

#[test]
fn abelianized_numerator_is_anti_invariant() {
    for (label, top) in [("no7", 3), ("no20", 2)] {
        let model = model_for_row(&lookup(label).unwrap()).unwrap();
        let k = model.td.nvars();
        for t in 0..=top {
            let a = abelianized_numerator(&model.td, t).unwrap().elem.to_poly();
            for i in 0..k {
                for j in i + 1..k {
                    assert_eq!(swap_vars(&a, i, j), -&a, "{label} total {t} swap {i}{j}");
                }
            }
        }
    }
}
