use std::collections::{BTreeMap, BTreeSet};

use catdb_core::error::Error;
use catdb_core::fincat::{check_cone, Cone, TableDiagram};
use catdb_core::limits::{
    family_name, limit, mediating_morphism, pullback, select, terminal_table,
};
use catdb_core::map::FinMap;
use catdb_core::sig::{Signature, Tup};
use catdb_core::table::{tables_isomorphic, Table, TableMorphism};
use catdb_testkit::{fixtures, oracle};


#[test]
fn terminal_has_one_key_and_unique_morphisms() {
    let e = fixtures::company();
    let term = terminal_table(&e);
    assert!(term.sig().is_empty());
    assert_eq!(term.key_count(), 1);
    let emp = fixtures::emp_table();
    let morphisms = oracle::enumerate_fiber_morphisms(&emp, &term);
    assert_eq!(morphisms.len(), 1);
}

#[test]
fn limit_of_empty_diagram_is_terminal() {
    let e = fixtures::company();
    let empty = TableDiagram::new(
        catdb_core::fincat::FinCat::discrete(Vec::new()),
        e.clone(),
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap();
    let lim = limit(&empty).unwrap();
    assert!(tables_isomorphic(&lim.table, &terminal_table(&e))
        .unwrap()
        .is_some());
}

#[test]
fn company_pullback_matches_oracle() {
    let d = fixtures::company_span_diagram();
    let left = d.morphism_at("toEmp").unwrap();
    let right = d.morphism_at("toSelf").unwrap();
    let pb = pullback(left, right).unwrap();

    let expected = oracle::pullback_pairs(left, right);
    assert_eq!(
        expected,
        vec![
            ("e1".to_string(), "d1".to_string()),
            ("e2".to_string(), "d2".to_string()),
            ("e3".to_string(), "d1".to_string()),
        ]
    );
    let keys: Vec<String> = pb.table.keys().into_iter().collect();
    assert_eq!(
        keys,
        expected
            .iter()
            .map(|(a, b)| family_name([a.as_str(), b.as_str()]))
            .collect::<Vec<_>>()
    );
    assert_eq!(pb.column_classes.len(), 5);

    let row = pb.table.row("⟨e1,d1⟩").unwrap();
    assert_eq!(row.entry("left.name").unwrap(), "Plato");
    assert_eq!(row.entry("left.addr").unwrap(), "Greece");
    assert_eq!(row.entry("left.dept").unwrap(), "d1");
    assert_eq!(row.entry("right.name").unwrap(), "Sales");
    assert_eq!(row.entry("right.mngr").unwrap(), "e3");
    // the dept/d columns merged into one class
    let merged = pb
        .column_classes
        .iter()
        .find(|c| c.name == "left.dept")
        .unwrap();
    assert_eq!(merged.members.len(), 3);
}

#[test]
fn pullback_along_identity_legs_is_diagonal() {
    let emp = fixtures::emp_table();
    let id = TableMorphism::identity(&emp);
    let pb = pullback(&id, &id).unwrap();
    assert_eq!(pb.table.key_count(), emp.key_count());
    assert!(tables_isomorphic(&pb.table, &emp).unwrap().is_some());
}

#[test]
fn pullback_with_disjoint_images_is_empty() {
    // restrict DRef to a single department on each side
    let e = fixtures::company();
    let dref = fixtures::dref_table();
    let single = |dept: &str| -> Table {
        Table::new(
            Signature::new(e.types().iter().cloned(), [("x", "Dept")]).unwrap(),
            e.clone(),
            vec![(
                dept.to_string(),
                Tup::new([("x", dept)]).unwrap(),
            )],
        )
        .unwrap()
    };
    let left = TableMorphism::fiber(
        single("d1"),
        dref.clone(),
        FinMap::new([("d", "x")]).unwrap(),
        FinMap::new([("d1", "d1")]).unwrap(),
    )
    .unwrap();
    let right = TableMorphism::fiber(
        single("d2"),
        dref,
        FinMap::new([("d", "x")]).unwrap(),
        FinMap::new([("d2", "d2")]).unwrap(),
    )
    .unwrap();
    let pb = pullback(&left, &right).unwrap();
    assert_eq!(pb.table.key_count(), 0);
}

#[test]
fn limit_of_single_table_is_isomorphic() {
    let emp = fixtures::emp_table();
    let d = TableDiagram::single("Emp", emp.clone());
    let lim = limit(&d).unwrap();
    assert!(tables_isomorphic(&lim.table, &emp).unwrap().is_some());
}

#[test]
fn limit_over_company_span_matches_pullback() {
    let d = fixtures::company_span_diagram();
    let lim = limit(&d).unwrap();
    // families from the independent nested-loop oracle
    let families = oracle::compatible_key_families(&d);
    assert_eq!(families.len(), 3);
    let keys: BTreeSet<String> = lim.table.keys();
    let expected: BTreeSet<String> = families
        .iter()
        .map(|f| family_name(f.values().map(|s| s.as_str())))
        .collect();
    assert_eq!(keys, expected);
    assert_eq!(lim.column_classes.len(), 5);
    // cell check on the (e1, d1, d1) family
    let row = lim.table.row("⟨d1,d1,e1⟩").unwrap();
    assert_eq!(row.entry("Emp.name").unwrap(), "Plato");
    assert_eq!(row.entry("DRef.d").unwrap(), "d1");
    assert_eq!(row.entry("DeptSelf.name").unwrap(), "Sales");
    // and the pullback presentation agrees up to iso
    let pb = pullback(
        d.morphism_at("toEmp").unwrap(),
        d.morphism_at("toSelf").unwrap(),
    )
    .unwrap();
    assert!(tables_isomorphic(&lim.table, &pb.table).unwrap().is_some());
}

#[test]
fn limit_projections_form_a_cone() {
    let d = fixtures::company_span_diagram();
    let lim = limit(&d).unwrap();
    let cone = Cone {
        apex: lim.table.clone(),
        legs: lim.projections.clone(),
    };
    let report = check_cone(&d, &cone).unwrap();
    assert!(report.is_valid(), "{report}");
}

#[test]
fn limit_of_chain_is_isomorphic_to_source() {
    let d = fixtures::chain_diagram();
    let lim = limit(&d).unwrap();
    let a = d.table_at("A").unwrap();
    assert_eq!(lim.table.key_count(), a.key_count());
    assert!(tables_isomorphic(&lim.table, a).unwrap().is_some());
}

#[test]
fn mediating_morphism_for_limit_cone_is_identity_like() {
    let d = fixtures::company_span_diagram();
    let lim = limit(&d).unwrap();
    let cone = Cone {
        apex: lim.table.clone(),
        legs: lim.projections.clone(),
    };
    let m = mediating_morphism(&d, &lim, &cone).unwrap();
    assert_eq!(m, TableMorphism::identity(&lim.table));
}

#[test]
fn mediating_morphism_for_one_row_cone() {
    let d = fixtures::company_span_diagram();
    let lim = limit(&d).unwrap();
    let cone = fixtures::one_row_cone(&d, "e1");
    let m = mediating_morphism(&d, &lim, &cone).unwrap();
    assert_eq!(m.key_map().apply("r").unwrap(), "⟨d1,d1,e1⟩");
    // triangles: m ; projection = leg
    for (object, leg) in &cone.legs {
        let via =
            catdb_core::table::compose_table_morphisms(&m, &lim.projections[object]).unwrap();
        assert_eq!(&via, leg);
    }
    // uniqueness at desk scale by exhaustive candidate enumeration
    let count = oracle::count_mediating_candidates(&d, &lim, &cone);
    assert_eq!(count, 1);
}

#[test]
fn select_filters_by_reference() {
    let e = fixtures::company();
    let emp = fixtures::emp_table();
    let dref1 = Table::new(
        fixtures::dref_table().sig().clone(),
        e.clone(),
        vec![("d1".to_string(), Tup::new([("d", "d1")]).unwrap())],
    )
    .unwrap();
    let binding = FinMap::new([("d", "dept")]).unwrap();
    let selected = select(&emp, &dref1, &binding).unwrap();
    let expected = oracle::select_keys(&emp, &dref1, &binding);
    assert_eq!(expected, vec!["e1".to_string(), "e3".to_string()]);
    let left_keys: BTreeSet<String> = selected
        .projections
        .get("left")
        .unwrap()
        .key_map()
        .iter()
        .map(|(_, v)| v.to_string())
        .collect();
    assert_eq!(left_keys, expected.into_iter().collect::<BTreeSet<_>>());

    // full reference: no-op selection
    let full = select(&emp, &fixtures::dref_table(), &binding).unwrap();
    assert_eq!(full.table.key_count(), 3);

    // empty reference: empty result
    let empty_ref = Table::empty(fixtures::dref_table().sig().clone(), e).unwrap();
    let none = select(&emp, &empty_ref, &binding).unwrap();
    assert_eq!(none.table.key_count(), 0);
}

#[test]
fn select_rejects_sort_mismatch() {
    let emp = fixtures::emp_table();
    let dref = fixtures::dref_table();
    let binding = FinMap::new([("d", "name")]).unwrap();
    assert!(matches!(
        select(&emp, &dref, &binding),
        Err(Error::SortMismatch { .. })
    ));
}

#[test]
fn limit_is_idempotent_up_to_isomorphism() {
    // collapsing the limit cone to its apex and taking the limit again
    // reproduces the limit
    let d = fixtures::company_span_diagram();
    let lim = limit(&d).unwrap();
    let collapsed = TableDiagram::single("J", lim.table.clone());
    let again = limit(&collapsed).unwrap();
    assert!(tables_isomorphic(&again.table, &lim.table).unwrap().is_some());
}
