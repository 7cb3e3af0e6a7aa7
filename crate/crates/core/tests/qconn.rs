use cycalc_core::cli::goldens;
use cycalc_core::pfops::{annihilator_search, bvs_transform, DEFAULT_GUARD};
use cycalc_core::qconn::{
    classical_correlators, j_series, lefschetz_factorization, wdvv_residuals, wdvv_solve, QconnError, QconnRun,
    Seed, SeedFile,
};
use cycalc_core::ratqa::{QMatrix, Rational};
use std::sync::OnceLock;

fn run() -> &'static QconnRun {
    static RUN: OnceLock<QconnRun> = OnceLock::new();
    RUN.get_or_init(|| QconnRun::new(&SeedFile::no25()).unwrap())
}

#[test]
fn seed_file_round_trips_through_json() {
    let f = SeedFile::no25();
    assert_eq!(f.basis.len(), 8);
    assert_eq!(f.seeds.len(), 10);
    let back: SeedFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
    assert_eq!(back.seeds, f.seeds);
}

#[test]
fn divisor_axiom_conversion() {
    let one_point = Seed { classes: vec![7], d: 1, value: Rational::from_int(264) };
    assert_eq!(one_point.three_point().unwrap(), ((1, 1, 7, 1), Rational::from_int(264)));
    let two_point = Seed { classes: vec![4, 7], d: 2, value: Rational::from_int(2376) };
    assert_eq!(two_point.three_point().unwrap(), ((1, 4, 7, 2), Rational::from_int(4752)));
    let bad = Seed { classes: vec![], d: 1, value: Rational::one() };
    assert!(bad.three_point().is_err());
}

#[test]
fn dual_basis_inverts_gram() {
    let b = &run().basis;
    assert_eq!(b.gram.mul(&b.dual), QMatrix::identity(b.len()));
}

#[test]
fn degree_zero_slice_is_classical() {
    let r = run();
    // slope c1(X) - c1(E') = 7 - 5
    let classical = classical_correlators(&r.basis, 2);
    for (&(i, j, k, d), v) in classical.values() {
        assert_eq!(d, 0);
        assert_eq!(r.table.get(i, j, k, 0), Some(v));
    }
}

#[test]
fn table_is_symmetric_and_windowed() {
    let t = &run().table;
    let n = run().basis.len();
    for d in 0..=t.d_max {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = t.get(i, j, k, d);
                    for p in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        assert_eq!(t.get(p.0, p.1, p.2, d), v);
                    }
                    if !t.in_window(i, j, k, d) {
                        assert!(v.unwrap().is_zero());
                    }
                }
            }
        }
    }
    let mut t = t.clone();
    assert!(matches!(t.set(0, 0, 0, 1, Rational::one()), Err(QconnError::OutsideWindow(..))));
    assert!(t.set(0, 0, 0, 1, Rational::zero()).is_ok());
}

#[test]
fn all_wdvv_relations_vanish() {
    let (total, zero) = wdvv_residuals(&run().basis, &run().table);
    assert_eq!(total, 8usize.pow(4) * (run().table.d_max + 1));
    assert_eq!(zero, total);
}

#[test]
fn connection_matrix_matches_reference() {
    let m = &run().connection;
    assert_eq!(m.entries, goldens::connection().unwrap());
    assert!(m.entries[0][0].is_zero());
}

#[test]
fn classical_limit_is_cup_product_by_s1() {
    let r = run();
    let m0 = r.connection.at(0);
    for j in 0..r.basis.len() {
        let col = r.basis.product(1, j);
        for (i, v) in col.iter().enumerate() {
            assert_eq!(m0.get(i, j), v, "({i},{j})");
        }
    }
}

#[test]
fn quantum_differential_operator_matches_reference_blocks() {
    assert_eq!(run().qde, goldens::qde().unwrap().normalize());
}

#[test]
fn qde_annihilates_the_unit_component_of_j() {
    let r = run();
    let j = j_series(&r.connection, 12).unwrap();
    let s: Vec<Rational> = j.iter().map(|v| v[0].clone()).collect();
    assert!(s[0].is_one());
    assert!(r.qde.apply(&s).iter().all(|c| c.is_zero()));
}

#[test]
fn lefschetz_series_gives_the_cut_operator() {
    let s = run().i_series(50).unwrap();
    assert!(s.i0[0].is_one() && s.i1red[0].is_zero());
    let op = annihilator_search(&s.i0, 4, 8, DEFAULT_GUARD).unwrap().unwrap();
    assert_eq!(op, goldens::operator("no25").unwrap().unwrap());
    assert_eq!(op.q_degree(), Some(6));
}

#[test]
fn lefschetz_transform_factors() {
    let r = run();
    let s4 = goldens::operator("no25").unwrap().unwrap();
    let (left, rr, r4) = goldens::factorization().unwrap();
    let f = lefschetz_factorization(r, &s4, &left).unwrap();
    assert_eq!(f.lefschetz, bvs_transform(&r.qde, &[1, 1]));
    assert!(f.is_exact());
    assert_eq!(f.r, rr);
    assert_eq!(f.r_op, r4);
}

#[test]
fn every_seed_is_needed() {
    for i in 0..10 {
        let mut f = SeedFile::no25();
        f.seeds.remove(i);
        assert!(matches!(QconnRun::new(&f), Err(QconnError::Stuck(_))), "seed {i}");
    }
}

fn extra_seed(value: i64) -> SeedFile {
    let mut f = SeedFile::no25();
    // <T_7, T_7>_{0,2,3}, so that <T_1, T_7, T_7>_3 = 3 * 8712 = 66 * 396
    f.seeds.push(Seed { classes: vec![7, 7], d: 3, value: Rational::from_int(value) });
    f
}

#[test]
fn redundant_seed_is_consistent() {
    assert_eq!(QconnRun::new(&extra_seed(8712)).unwrap().connection, run().connection);
}

#[test]
fn inconsistent_seed_is_a_contradiction() {
    let err = QconnRun::new(&extra_seed(8713)).unwrap_err();
    assert!(matches!(err, QconnError::Contradiction { .. }), "{err}");
}

#[test]
fn seed_against_classical_value_is_rejected() {
    let mut f = SeedFile::no25();
    f.seeds.push(Seed { classes: vec![0, 0, 5], d: 0, value: Rational::from_int(7) });
    assert!(matches!(QconnRun::new(&f), Err(QconnError::Seed(_))));
}

#[test]
fn missing_seeds_stall() {
    let f = SeedFile::no25();
    let err = wdvv_solve(&run().basis, 2, &f.seeds[..3]).unwrap_err();
    match err {
        QconnError::Stuck(keys) => assert!(!keys.is_empty()),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn wrong_pairing_is_reported() {
    let mut f = SeedFile::no25();
    f.pairing[0][7] = Rational::from_int(65);
    assert!(matches!(QconnRun::new(&f), Err(QconnError::PairingMismatch { i: 0, j: 7, .. })));
}
