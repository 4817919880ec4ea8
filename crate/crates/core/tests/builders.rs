use incidence::builders::{
    finite_surjections_weighted, interval_family_space, monotone_surjection_data, nerve_of_category,
    FiniteCategorySpec, IntervalFamilySpec,
};
use incidence::simplicial::{
    check_culf_monoidal, check_decomposition, check_finiteness, nondegenerate_simplices, validate_monoidal,
    validate_structure, WeightedClassData,
};

fn assert_builder_output(x: &WeightedClassData) {
    let r = validate_structure(x.set());
    assert!(r.passed(), "{:?}", r.violations.first());
    let top = x.truncation();
    for n in 0..=top {
        nondegenerate_simplices(x, n).unwrap();
    }
    assert!(check_decomposition(x, top - 1).unwrap().passed);
    if let Some(m) = x.monoidal() {
        assert!(validate_monoidal(x).passed);
        let up_to = (m.levels() - 1).min(top);
        let c = check_culf_monoidal(x, up_to).unwrap();
        assert!(c.passed, "{:?}", c.witnesses.first());
    }
}

#[test]
fn nerves_pass_all_checks() {
    for c in [FiniteCategorySpec::chain_poset(3), FiniteCategorySpec::divisor_lattice(12)] {
        let x = WeightedClassData::from_set(nerve_of_category(&c, 4).unwrap(), None).unwrap();
        assert_builder_output(&x);
    }
}

#[test]
fn monotone_surjections_pass_all_checks() {
    assert_builder_output(&monotone_surjection_data(5, 6).unwrap());
}

#[test]
fn boolean_family_to_six_passes_all_checks() {
    let f = interval_family_space(&IntervalFamilySpec::boolean(6)).unwrap();
    assert_eq!(f.names, vec!["B_0", "B_1", "B_2", "B_3", "B_4", "B_5", "B_6"]);
    assert_builder_output(&f.data);
    let fin = check_finiteness(&f.data);
    assert!(fin.unsafe_columns().is_empty());
}

#[test]
fn faa_di_bruno_passes_all_checks() {
    assert_builder_output(&finite_surjections_weighted(4).unwrap());
}

#[test]
fn finiteness_on_three_chain() {
    let x = WeightedClassData::from_set(nerve_of_category(&FiniteCategorySpec::chain_poset(3), 4).unwrap(), None)
        .unwrap();
    let fin = check_finiteness(&x);
    let len = |id: &str| fin.length[x.set().lookup(1, id).unwrap()];
    assert_eq!(len("0<=2"), 2);
    assert_eq!(len("0<=1"), 1);
    assert_eq!(len("1<=1"), 0);
}
