use cycalc_core::homobundle::{catalog, topological_invariants};

#[test]
fn table_invariants_all_rows() {
    for row in catalog() {
        let t = topological_invariants(&row.spec).unwrap();
        assert_eq!((t.h3, t.c2h, t.c3), (row.h3, row.c2h, row.c3), "row {}", row.no);
    }
}
