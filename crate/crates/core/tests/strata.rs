use std::collections::{BTreeMap, HashSet};

use proptest::prelude::*;
use tetra_core::counting::CountTable;
use tetra_core::diagram::divisor::set_act;
use tetra_core::diagram::strata::{act_record, dual_record, record_of_diagram};
use tetra_core::diagram::{strata, Perm, StratumType};

fn perm_strategy() -> impl Strategy<Value = Perm> {
    (0usize..24).prop_map(|i| Perm::all()[i])
}

#[test]
fn burnside_orbit_count_equals_type_count() {
    let cliques: HashSet<u32> = strata().iter().map(|r| r.clique).collect();
    let fixed: usize = Perm::all().iter().map(|&p| cliques.iter().filter(|&&c| set_act(c, p) == c).count()).sum();
    assert_eq!(fixed % 24, 0);
    let types: HashSet<StratumType> = strata().iter().map(|r| r.type_name).collect();
    assert_eq!(fixed / 24, types.len());
    assert_eq!(types.len(), 160);
}

#[test]
fn dual_types_have_equal_multiplicities() {
    let mut by_type: BTreeMap<StratumType, usize> = BTreeMap::new();
    for r in strata() {
        *by_type.entry(r.type_name).or_default() += 1;
    }
    for (t, n) in &by_type {
        assert_eq!(by_type.get(&t.dual()), Some(n), "{t}");
    }
}

#[test]
fn codim_census_matches_count_degrees() {
    let mut by_codim = [0usize; 7];
    for r in strata() {
        by_codim[r.codim] += 1;
    }
    let mut from_counts = [0usize; 7];
    for row in &CountTable::embedded().rows {
        from_counts[6 - row.count.degree().unwrap()] += row.multiplicity;
    }
    assert_eq!(by_codim, from_counts);
    assert_eq!((by_codim[0], by_codim[1]), (1, 23));
}

proptest! {
    #[test]
    fn symmetry_preserves_type_and_diagram(i in 0usize..1424, p in perm_strategy()) {
        let r = &strata()[i];
        let img = act_record(r, p);
        prop_assert_eq!(img.type_name, r.type_name);
        prop_assert_eq!(img.codim, r.codim);
        prop_assert_eq!(img.clique, set_act(r.clique, p));
        prop_assert_eq!(img.diagram, r.diagram.act(p));
        prop_assert_eq!(record_of_diagram(&img.diagram).map(|x| x.clique), Some(img.clique));
    }

    #[test]
    fn duality_is_an_involution_on_strata(i in 0usize..1424) {
        let r = &strata()[i];
        let d = dual_record(r);
        prop_assert_eq!(d.type_name, r.type_name.dual());
        prop_assert_eq!(d.diagram, r.diagram.dual());
        prop_assert_eq!(dual_record(d).clique, r.clique);
    }

    #[test]
    fn closure_order_is_reverse_clique_inclusion(i in 0usize..1424, j in 0usize..1424) {
        let (a, b) = (&strata()[i], &strata()[j]);
        prop_assert_eq!(a.diagram.leq(&b.diagram), a.clique & b.clique == b.clique);
        if a.diagram.leq(&b.diagram) && b.diagram.leq(&a.diagram) {
            prop_assert_eq!(i, j);
        }
    }
}
