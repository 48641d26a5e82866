use catdb_core::cls::Infomorphism;
use catdb_core::error::Error;
use catdb_core::map::FinMap;
use catdb_core::sig::{Signature, Tup};
use catdb_core::table::{
    check_table_morphism, compose_table_morphisms, migrate, tables_isomorphic,
    tables_isomorphic_with, IsoCaps, Table, TableMorphism,
};
use catdb_testkit::fixtures;

#[test]
fn company_emp_table_validates() {
    let emp = fixtures::emp_table();
    assert_eq!(emp.key_count(), 3);
    assert_eq!(emp.row("e1").unwrap().entry("name").unwrap(), "Plato");
}

#[test]
fn empty_table_is_fine() {
    let e = fixtures::company();
    let t = Table::empty(fixtures::emp_signature(), e).unwrap();
    assert_eq!(t.key_count(), 0);
}

#[test]
fn domain_integrity_violation_names_the_cell() {
    let e = fixtures::company();
    let rows = vec![(
        "e1".to_string(),
        Tup::new([("name", "Plato"), ("addr", "Greece"), ("dept", "Greece")]).unwrap(),
    )];
    let err = Table::new(fixtures::emp_signature(), e, rows).unwrap_err();
    match err {
        Error::DomainIntegrity(cells) => {
            assert_eq!(cells.len(), 1);
            assert_eq!(cells[0].key, "e1");
            assert_eq!(cells[0].column, "dept");
            assert_eq!(cells[0].value, "Greece");
        }
        other => panic!("unexpected error: {other:?}"),
    }
}

#[test]
fn duplicate_key_rejected() {
    let e = fixtures::company();
    let sig = Signature::empty(e.types().iter().cloned());
    let rows = vec![
        ("k".to_string(), Tup::empty()),
        ("k".to_string(), Tup::empty()),
    ];
    assert!(matches!(
        Table::new(sig, e, rows),
        Err(Error::Duplicate { kind: "key", .. })
    ));
}

#[test]
fn identity_morphism_is_valid() {
    let emp = fixtures::emp_table();
    let id = TableMorphism::identity(&emp);
    let report = check_table_morphism(
        id.src(),
        id.dst(),
        id.col_map(),
        id.info().type_map(),
        id.info().inst_map(),
        id.key_map(),
    )
    .unwrap();
    assert!(report.is_valid());
}

#[test]
fn emp_to_dref_projection_is_valid() {
    let m = fixtures::emp_to_dref();
    assert!(m.is_fiber());
    // and a broken key map is caught at the exact cell
    let bad_keys = FinMap::new([("e1", "d1"), ("e2", "d1"), ("e3", "d1")]).unwrap();
    let report = check_table_morphism(
        m.src(),
        m.dst(),
        m.col_map(),
        m.info().type_map(),
        m.info().inst_map(),
        &bad_keys,
    )
    .unwrap();
    assert_eq!(report.cells.len(), 1);
    assert_eq!(report.cells[0].key, "e2");
    assert_eq!(report.cells[0].column, "d");
    assert_eq!(report.cells[0].expected, "d2");
    assert_eq!(report.cells[0].actual, "d1");
}

#[test]
fn composition_unit_laws() {
    let m = fixtures::emp_to_dref();
    let id_src = TableMorphism::identity(m.src());
    let id_dst = TableMorphism::identity(m.dst());
    assert_eq!(compose_table_morphisms(&id_src, &m).unwrap(), m);
    assert_eq!(compose_table_morphisms(&m, &id_dst).unwrap(), m);
    let id2 = compose_table_morphisms(&id_src, &id_src).unwrap();
    assert_eq!(id2, id_src);
}

#[test]
fn figure_condition_biconditional_holds() {
    // for a valid morphism, both incidences hold at every cell
    let m = fixtures::emp_to_dref();
    for (k1, row) in m.src().rows() {
        for (i2, s2) in m.dst().sig().sorts().iter() {
            let i1 = m.col_map().apply(i2).unwrap();
            let v = row.entry(i1).unwrap();
            let fv = m.info().type_map().apply(s2).unwrap();
            let gv = m.info().inst_map().apply(v).unwrap();
            assert!(m.dst().cls().holds(gv, s2));
            assert!(m.src().cls().holds(v, fv));
            let _ = k1;
        }
    }
}

#[test]
fn migrate_along_identity_is_isomorphic() {
    let emp = fixtures::emp_table();
    let id = Infomorphism::identity(emp.cls());
    let moved = migrate(&emp, &id).unwrap();
    assert_eq!(moved.key_count(), 3);
    let cols: Vec<String> = moved.sig().columns().map(str::to_string).collect();
    assert_eq!(cols, vec!["addr@Str", "dept@Dept", "name@Str"]);
    let iso = tables_isomorphic(&emp, &moved).unwrap().expect("isomorphic");
    assert_eq!(iso.columns.get("name"), Some("name@Str"));
}

#[test]
fn migrate_emp_drops_all_columns() {
    let emp = fixtures::emp_table();
    let m = fixtures::person_infomorphism();
    let moved = migrate(&emp, &m).unwrap();
    assert!(moved.sig().is_empty());
    assert_eq!(moved.key_count(), 3);
    for (_, tup) in moved.rows() {
        assert!(tup.is_empty());
    }
}

#[test]
fn migrate_dept_keeps_manager_column() {
    let dept = fixtures::dept_table();
    let m = fixtures::person_infomorphism();
    let moved = migrate(&dept, &m).unwrap();
    let cols: Vec<String> = moved.sig().columns().map(str::to_string).collect();
    assert_eq!(cols, vec!["mngr@Person"]);
    assert_eq!(moved.row("d1").unwrap().entry("mngr@Person").unwrap(), "p");
    assert_eq!(moved.row("d2").unwrap().entry("mngr@Person").unwrap(), "p");
}

#[test]
fn migrate_functoriality_up_to_iso() {
    let dept = fixtures::dept_table();
    let m = fixtures::person_infomorphism();
    let id = Infomorphism::identity(m.target());
    let composite = id.compose(&m).unwrap();
    // sequential: migrate along id, then along m
    let step = migrate(&migrate(&dept, &id).unwrap(), &m).unwrap();
    let direct = migrate(&dept, &composite).unwrap();
    assert!(tables_isomorphic(&step, &direct).unwrap().is_some());
}

#[test]
fn isomorphism_search_examples() {
    let emp = fixtures::emp_table();
    let dept = fixtures::dept_table();
    // different arities: no witness
    assert!(tables_isomorphic(&emp, &dept).unwrap().is_none());

    // re-keyed employees: witness maps e1 ↦ a and so on
    let rekeyed = Table::new(
        emp.sig().clone(),
        emp.cls().clone(),
        emp.rows()
            .map(|(k, t)| {
                let name = match k {
                    "e1" => "a",
                    "e2" => "b",
                    _ => "c",
                };
                (name.to_string(), t.clone())
            })
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let iso = tables_isomorphic(&emp, &rekeyed).unwrap().expect("witness");
    assert_eq!(iso.keys.get("e1"), Some("a"));
    assert_eq!(iso.keys.get("e2"), Some("b"));
    assert_eq!(iso.keys.get("e3"), Some("c"));

    // renamed columns
    let renamed = Table::new(
        Signature::new(
            emp.cls().types().iter().cloned(),
            [("nm", "Str"), ("ad", "Str"), ("dp", "Dept")],
        )
        .unwrap(),
        emp.cls().clone(),
        emp.rows()
            .map(|(k, t)| {
                (
                    k.to_string(),
                    Tup::new([
                        ("nm", t.entry("name").unwrap()),
                        ("ad", t.entry("addr").unwrap()),
                        ("dp", t.entry("dept").unwrap()),
                    ])
                    .unwrap(),
                )
            })
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let iso = tables_isomorphic(&emp, &renamed).unwrap().expect("witness");
    assert_eq!(iso.columns.get("name"), Some("nm"));
    // both directions really are morphisms
    let fwd = TableMorphism::fiber(
        emp.clone(),
        renamed.clone(),
        iso.columns.inverse().unwrap(),
        iso.keys.clone(),
    );
    assert!(fwd.is_ok());
    let bwd = TableMorphism::fiber(
        renamed.clone(),
        emp.clone(),
        iso.columns.clone(),
        iso.keys.inverse().unwrap(),
    );
    assert!(bwd.is_ok());
}

#[test]
fn iso_caps_are_enforced() {
    let emp = fixtures::emp_table();
    let caps = IsoCaps {
        max_columns: 2,
        max_keys: 64,
    };
    assert!(matches!(
        tables_isomorphic_with(&emp, &emp, caps),
        Err(Error::SizeCap { .. })
    ));
}
