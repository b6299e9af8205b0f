use tetra_core::counting::CountTable;
use tetra_core::projgeom::{
    count_a, count_a_star, count_arrangement_complement, count_b, count_open_flag_orbit, run_oracle,
    BaseFlag, Geometry, OracleKind, PrimeField,
};

fn closed_forms(q: i64) -> [(OracleKind, i64); 5] {
    [
        (OracleKind::X0, q.pow(6)),
        (OracleKind::A, q.pow(5) - 2 * q.pow(4) + q.pow(3)),
        (OracleKind::AStar, q.pow(5) - 2 * q.pow(4) + q.pow(3)),
        (OracleKind::B, q.pow(5) - 4 * q.pow(4) + 5 * q.pow(3) - 2 * q * q),
        (OracleKind::Arrangement, q * q - 5 * q + 6),
    ]
}

#[test]
fn brute_force_matches_closed_forms() {
    for q in [2u64, 3, 5] {
        let f = PrimeField::new(q).unwrap();
        let g = Geometry::new(f);
        for flag in [BaseFlag::standard(f), BaseFlag::alternate(f)] {
            let got = [
                count_open_flag_orbit(&g, &flag),
                count_a(&g, &flag),
                count_a_star(&g, &flag),
                count_b(&g, &flag),
                count_arrangement_complement(f),
            ];
            let want: Vec<i64> = closed_forms(q as i64).iter().map(|(_, v)| *v).collect();
            assert_eq!(got.iter().map(|&x| x as i64).collect::<Vec<_>>(), want, "q = {q}");
        }
    }
}

#[test]
fn run_oracle_agrees_with_table_and_closed_forms() {
    let results = run_oracle(&[2, 3], &OracleKind::ALL, &CountTable::embedded()).unwrap();
    assert_eq!(results.len(), 10);
    for r in &results {
        let want = closed_forms(r.q as i64).iter().find(|(k, _)| *k == r.kind).unwrap().1;
        assert!(r.matches);
        assert_eq!(r.oracle_count as i64, want);
        assert_eq!(r.table_count, want.to_string());
    }
}

#[test]
fn oracle_rejects_composite_modulus() {
    assert!(run_oracle(&[6], &[OracleKind::X0], &CountTable::embedded()).is_err());
}
