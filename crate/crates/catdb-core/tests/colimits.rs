use std::collections::{BTreeMap, BTreeSet};

use catdb_core::colimits::{
    colimit, comediating_morphism, component_key_name, coproduct, initial_morphism,
    initial_table,
};
use catdb_core::fincat::{check_cocone, Cocone, FinCat, TableDiagram};
use catdb_core::sig::{Signature, Tup};
use catdb_core::table::{compose_table_morphisms, tables_isomorphic, Table, TableMorphism};
use catdb_testkit::{fixtures, oracle};


#[test]
fn initial_table_shape() {
    let e = fixtures::company();
    let init = initial_table(&e);
    assert_eq!(init.key_count(), 0);
    let cols: Vec<String> = init.sig().columns().map(str::to_string).collect();
    assert_eq!(cols, vec!["Dept", "Emp", "Str"]);
    for col in init.sig().columns() {
        assert_eq!(init.sig().sort_of(col).unwrap(), col);
    }
}

#[test]
fn unique_morphism_out_of_initial() {
    let emp = fixtures::emp_table();
    let m = initial_morphism(&emp).unwrap();
    assert_eq!(m.col_map().apply("name").unwrap(), "Str");
    assert_eq!(m.col_map().apply("dept").unwrap(), "Dept");
    let candidates = oracle::enumerate_fiber_morphisms(m.src(), &emp);
    assert_eq!(candidates.len(), 1);
}

#[test]
fn colimit_of_empty_diagram_is_initial() {
    let e = fixtures::company();
    let empty = TableDiagram::new(
        FinCat::discrete(Vec::new()),
        e.clone(),
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap();
    let colim = colimit(&empty).unwrap();
    assert_eq!(colim.table, initial_table(&e));
}

#[test]
fn coproduct_emp_deptself_matches_enumeration() {
    let emp = fixtures::emp_table();
    let dself = fixtures::deptself_table();
    let sum = coproduct(&emp, &dself).unwrap();
    assert_eq!(sum.table.key_count(), 5);
    let cols: Vec<String> = sum.table.sig().columns().map(str::to_string).collect();
    assert_eq!(cols, vec!["⟨addr,name⟩", "⟨dept,d⟩", "⟨name,name⟩"]);
    let e1 = sum.table.row("0.e1").unwrap();
    assert_eq!(e1.entry("⟨name,name⟩").unwrap(), "Plato");
    assert_eq!(e1.entry("⟨addr,name⟩").unwrap(), "Greece");
    assert_eq!(e1.entry("⟨dept,d⟩").unwrap(), "d1");
    let d1 = sum.table.row("1.d1").unwrap();
    assert_eq!(d1.entry("⟨name,name⟩").unwrap(), "Sales");
    assert_eq!(d1.entry("⟨addr,name⟩").unwrap(), "Sales");
    assert_eq!(d1.entry("⟨dept,d⟩").unwrap(), "d1");
}

#[test]
fn coproduct_with_empty_table_projects_first_component() {
    let emp = fixtures::emp_table();
    let empty = Table::empty(emp.sig().clone(), emp.cls().clone()).unwrap();
    let sum = coproduct(&emp, &empty).unwrap();
    // keys biject with the first component
    let keys: Vec<String> = sum.table.keys().into_iter().collect();
    assert_eq!(keys, vec!["0.e1", "0.e2", "0.e3"]);
    // every paired column carries the first component's value
    let inj = sum.injections.get("0").unwrap();
    for (key, _) in emp.rows() {
        let row = sum.table.row(&component_key_name("0", key)).unwrap();
        for name in sum.table.sig().columns() {
            let i1 = inj.col_map().apply(name).unwrap();
            assert_eq!(
                row.entry(name).unwrap(),
                emp.row(key).unwrap().entry(i1).unwrap()
            );
        }
    }
}

#[test]
fn coproduct_of_zero_column_tables_concatenates_keys() {
    let e = fixtures::company();
    let sig = Signature::empty(e.types().iter().cloned());
    let t1 = Table::new(
        sig.clone(),
        e.clone(),
        vec![("a".to_string(), Tup::empty())],
    )
    .unwrap();
    let t2 = Table::new(sig, e, vec![("b".to_string(), Tup::empty())]).unwrap();
    let sum = coproduct(&t1, &t2).unwrap();
    assert!(sum.table.sig().is_empty());
    let keys: Vec<String> = sum.table.keys().into_iter().collect();
    assert_eq!(keys, vec!["0.a", "1.b"]);
}

#[test]
fn colimit_of_single_table_is_isomorphic() {
    let emp = fixtures::emp_table();
    let d = TableDiagram::single("Emp", emp.clone());
    let colim = colimit(&d).unwrap();
    assert!(tables_isomorphic(&colim.table, &emp).unwrap().is_some());
}

#[test]
fn discrete_colimit_agrees_with_coproduct() {
    let emp = fixtures::emp_table();
    let dself = fixtures::deptself_table();
    let mut tables = BTreeMap::new();
    tables.insert("0".to_string(), emp.clone());
    tables.insert("1".to_string(), dself.clone());
    let d = TableDiagram::new(
        FinCat::discrete(["0".to_string(), "1".to_string()]),
        emp.cls().clone(),
        tables,
        BTreeMap::new(),
    )
    .unwrap();
    let via_colimit = colimit(&d).unwrap();
    let via_coproduct = coproduct(&emp, &dself).unwrap();
    assert!(tables_isomorphic(&via_colimit.table, &via_coproduct.table)
        .unwrap()
        .is_some());
    assert_eq!(via_colimit.table.keys(), via_coproduct.table.keys());
}

#[test]
fn span_colimit_merges_by_zigzag() {
    let d = fixtures::company_span_diagram();
    let colim = colimit(&d).unwrap();
    // independent oracle: connected components of the key-transition graph
    let components = oracle::key_components(&d);
    assert_eq!(components.len(), 2);
    assert_eq!(colim.key_classes.len(), 2);
    let mine: BTreeSet<BTreeSet<(String, String)>> = colim
        .key_classes
        .iter()
        .map(|c| c.members.clone())
        .collect();
    assert_eq!(mine, components);
    // e1 and e3 land with d1 in one class
    let class = colim
        .key_classes
        .iter()
        .find(|c| c.members.contains(&("Emp".to_string(), "e1".to_string())))
        .unwrap();
    assert!(class.members.contains(&("Emp".to_string(), "e3".to_string())));
    assert!(class.members.contains(&("DRef".to_string(), "d1".to_string())));
    // columns: the compatible families from the exhaustive oracle
    let families = oracle::compatible_column_families(&d);
    assert_eq!(families.len(), 1);
    let cols: Vec<String> = colim.table.sig().columns().map(str::to_string).collect();
    assert_eq!(cols, vec!["⟨d,d,dept⟩"]);
    assert_eq!(colim.table.row("DRef.d1").unwrap().entry("⟨d,d,dept⟩").unwrap(), "d1");
    assert_eq!(colim.table.row("DRef.d2").unwrap().entry("⟨d,d,dept⟩").unwrap(), "d2");
}

#[test]
fn injections_form_a_cocone_and_comediator_is_identity() {
    let d = fixtures::company_span_diagram();
    let colim = colimit(&d).unwrap();
    let cocone = Cocone {
        apex: colim.table.clone(),
        legs: colim.injections.clone(),
    };
    let report = check_cocone(&d, &cocone).unwrap();
    assert!(report.is_valid(), "{report}");
    let m = comediating_morphism(&d, &colim, &cocone).unwrap();
    assert_eq!(m, TableMorphism::identity(&colim.table));
}

#[test]
fn comediator_into_one_key_apex_is_constant() {
    let d = fixtures::company_span_diagram();
    let colim = colimit(&d).unwrap();
    let cocone = fixtures::constant_cocone(&d, "z");
    let m = comediating_morphism(&d, &colim, &cocone).unwrap();
    for (_, v) in m.key_map().iter() {
        assert_eq!(v, "z");
    }
    // triangles: injection ; m = leg
    for (object, leg) in &cocone.legs {
        let via = compose_table_morphisms(&colim.injections[object], &m).unwrap();
        assert_eq!(&via, leg);
    }
    // uniqueness by exhaustive candidate enumeration
    let count = oracle::count_comediating_candidates(&d, &colim, &cocone);
    assert_eq!(count, 1);
}

#[test]
fn colimit_refuses_oversized_arities() {
    let e = fixtures::company();
    let strs: Vec<String> = e.extent("Str").unwrap().into_iter().collect();
    let cols: Vec<(String, String)> = (0..9).map(|i| (format!("c{i}"), "Str".to_string())).collect();
    let sig = Signature::new(e.types().iter().cloned(), cols.clone()).unwrap();
    let tup = Tup::new(cols.iter().map(|(c, _)| (c.clone(), strs[0].clone()))).unwrap();
    let wide = Table::new(sig, e.clone(), vec![("k".to_string(), tup)]).unwrap();
    let d = TableDiagram::single("W", wide);
    assert!(matches!(
        colimit(&d),
        Err(catdb_core::error::Error::SizeCap { .. })
    ));
}
