use tetra_core::algebra::checks::{s4_stability_check, socle_witness, RingContext, TOP_DEGREE};
use tetra_core::algebra::*;
use tetra_core::counting::{total_poincare, CountTable};
use tetra_core::diagram::Perm;

fn f2_context(p: Presentation) -> RingContext<Fp> {
    RingContext::build(&Fp::f2(), p, &GbOptions::default()).unwrap()
}

fn expected_hilbert() -> Vec<i64> {
    total_poincare(&CountTable::embedded()).even_i64()
}

fn qvar(p: &Presentation, v: VarId) -> QPoly {
    p.var(v)
}

#[test]
fn completed_presentation_has_expected_hilbert_function() {
    let ctx = f2_context(build_completed_presentation());
    let h = hilbert_function(&ctx.gb, TOP_DEGREE).unwrap();
    let dims: Vec<i64> = h.dims.iter().map(|&d| d as i64).collect();
    assert_eq!(dims, expected_hilbert());
    assert_eq!(h.next, 0);
    assert!(h.is_palindromic());
}

#[test]
fn base_relations_alone_are_not_artinian_by_degree_13() {
    let ctx = f2_context(build_presentation());
    assert_eq!(ctx.gb.standard_monomials(12).unwrap().len(), 793);
    assert_eq!(ctx.gb.standard_monomials(13).unwrap().len(), 792);
}

#[test]
fn basis_is_independent_of_strategy() {
    let e = eliminate_linear(&build_completed_presentation()).unwrap();
    let input = e.reduced.relations_in(&Fp::f2());
    let names = e.reduced.names();
    let texts: Vec<String> = [
        GbOptions::default(),
        GbOptions { order: PairOrder::LcmDescending, ..GbOptions::default() },
        GbOptions { batch_size: Some(40), ..GbOptions::default() },
        GbOptions { threads: Some(1), ..GbOptions::default() },
        GbOptions { threads: Some(4), batch_size: Some(7), ..GbOptions::default() },
    ]
    .iter()
    .map(|o| GroebnerBasis::compute(&Fp::f2(), e.reduced.nvars(), &input, o).unwrap().to_text(&names))
    .collect();
    assert!(texts.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn normal_forms_agree_between_division_and_tables() {
    let ctx = f2_context(build_completed_presentation());
    let ring = QuotientRing::new(&ctx.gb, TOP_DEGREE).unwrap();
    let full = &ctx.full;
    let samples = [
        qvar(full, VarId::Y1(1)).pow(&Rationals, 4),
        qvar(full, VarId::A).mul(&Rationals, &qvar(full, VarId::Y2(1, 2)).pow(&Rationals, 3)),
        qvar(full, VarId::C(1)).add(&Rationals, &qvar(full, VarId::y2(3, 4))).pow(&Rationals, 5),
        checks::socle_witness_monomial(full),
    ];
    for s in &samples {
        let low = ctx.lower(s);
        assert_eq!(ctx.gb.normal_form(&low).unwrap(), ring.normal_form(&low));
    }
}

#[test]
fn generators_reduce_to_zero_and_one_survives() {
    let ctx = f2_context(build_completed_presentation());
    for r in ctx.full.relations() {
        assert!(ctx.normal_form(&r.poly).unwrap().is_zero());
    }
    let one = Polynomial::constant(&Rationals, Rationals.one());
    let nf = ctx.normal_form(&one).unwrap();
    assert_eq!(nf.len(), 1);
    assert!(nf.leading_monomial().unwrap().is_one());
}

#[test]
fn witness_is_a_nonzero_socle_element() {
    let w = socle_witness(&f2_context(build_completed_presentation())).unwrap();
    assert!(w.nonzero && w.annihilated_by_generators && w.transposed_nonzero);
}

#[test]
fn s4_check_tolerates_a_redundant_drop() {
    let full = build_completed_presentation();
    let target = full.relations().iter().position(|r| r.family == Family::III).unwrap();
    let rels = full.relations().iter().enumerate().filter(|(i, _)| *i != target).map(|(_, r)| r.clone()).collect();
    let ctx = f2_context(Presentation::new(full.vars().to_vec(), rels));
    assert!(s4_stability_check(&ctx, &Perm::all()).unwrap().stable());
}

#[test]
fn s4_check_detects_a_corrupted_relation() {
    let full = build_completed_presentation();
    let bad = qvar(&full, VarId::C(1)).mul(&Rationals, &qvar(&full, VarId::Y1(1)));
    let mut rels = full.relations().to_vec();
    let i = rels.iter().position(|r| r.family == Family::II).unwrap();
    rels[i].poly = bad;
    let ctx = f2_context(Presentation::new(full.vars().to_vec(), rels));
    let report = s4_stability_check(&ctx, &Perm::all()).unwrap();
    assert!(!report.stable());
    assert!(report.violations.iter().any(|v| v.relation == "c1*y1"));
}
