use std::collections::BTreeMap;

use catdb_core::cls::{Classification, Infomorphism};
use catdb_core::database::{
    check_db_morphism, compose_db_morphisms, db_morphism_of_infomorphism, db_of_classification,
    DatabaseMorphism, FunctorData,
};
use catdb_core::error::Error;
use catdb_core::map::FinMap;
use catdb_core::sig::Tup;
use catdb_core::table::tables_isomorphic;
use catdb_testkit::fixtures;


#[test]
fn single_relation_schema() {
    let schema = fixtures::single_schema("Emp", fixtures::emp_signature());
    assert_eq!(schema.rel_cat().objects().len(), 1);
    let reference = schema.reference_schema().unwrap();
    let cols: Vec<String> = reference.sig.columns().map(str::to_string).collect();
    assert_eq!(cols, vec!["Emp.addr", "Emp.dept", "Emp.name"]);
}

#[test]
fn company_span_schema_validates_and_merges() {
    let schema = fixtures::company_span_schema();
    let reference = schema.reference_schema().unwrap();
    assert_eq!(reference.column_classes.len(), 5);
    let merged = reference
        .column_classes
        .iter()
        .find(|c| c.name == "DRef.d")
        .expect("merged department class");
    assert_eq!(merged.members.len(), 3);
    // discrete two-relation schema: plain disjoint union
    let discrete = fixtures::unified_company_schema();
    let reference = discrete.reference_schema().unwrap();
    assert_eq!(reference.column_classes.len(), 5);
    assert!(reference
        .column_classes
        .iter()
        .all(|c| c.members.len() == 1));
}

#[test]
fn sort_breaking_arrow_is_rejected() {
    let err = fixtures::company_span_schema_with_bad_sort().unwrap_err();
    match err {
        Error::InvalidDbSchema(issues) => {
            assert!(issues.iter().any(|i| i.contains("sort") || i.contains("Str")), "{issues:?}")
        }
        other => panic!("unexpected: {other:?}"),
    }
}

#[test]
fn company_span_database_validates() {
    let db = fixtures::company_span_db();
    assert_eq!(db.relations().len(), 3);
    assert_eq!(db.table_at("Emp").unwrap().key_count(), 3);
}

#[test]
fn broken_key_map_is_a_naturality_violation() {
    let err = fixtures::company_span_db_with_bad_keymap().unwrap_err();
    match err {
        Error::InvalidDatabase(issues) => {
            let text = issues.join("\n");
            assert!(text.contains("toEmp"), "{text}");
            assert!(text.contains("e2"), "{text}");
            assert!(text.contains("`d`"), "{text}");
        }
        other => panic!("unexpected: {other:?}"),
    }
}

#[test]
fn db_to_diagram_unfolds_the_span() {
    let db = fixtures::company_span_db();
    let diagram = db.to_diagram().unwrap();
    assert_eq!(diagram.shape().objects().len(), 3);
    let m = diagram.morphism_at("toEmp").unwrap();
    assert_eq!(m.src().key_count(), 3);
    assert_eq!(m.dst().key_count(), 2);
    // single-table database unfolds to the one-object diagram
    let single = fixtures::single_table_db("Emp", fixtures::emp_table());
    let d = single.to_diagram().unwrap();
    assert_eq!(d.shape().objects().len(), 1);
}

#[test]
fn join_of_company_span() {
    let db = fixtures::company_span_db();
    let join = db.join().unwrap();
    assert_eq!(join.table.key_count(), 3);
    assert_eq!(join.column_classes.len(), 5);
    // schema-of-join: the join signature equals the reference signature
    let reference = db.schema().reference_schema().unwrap();
    assert_eq!(join.table.sig(), &reference.sig);

    // single-table database: join isomorphic to the table
    let single = fixtures::single_table_db("Emp", fixtures::emp_table());
    let j = single.join().unwrap();
    assert!(tables_isomorphic(&j.table, &fixtures::emp_table())
        .unwrap()
        .is_some());

    // empty reference relation: empty join
    let empty = fixtures::company_span_db_with_empty_dref();
    assert_eq!(empty.join().unwrap().table.key_count(), 0);
}

#[test]
fn identity_db_morphism_checks_out() {
    let db = fixtures::company_span_db();
    let id = DatabaseMorphism::identity(&db);
    let report = check_db_morphism(
        id.src(),
        id.dst(),
        id.functor(),
        id.sig_trans(),
        id.info().type_map(),
        id.info().inst_map(),
        id.key_trans(),
    )
    .unwrap();
    assert!(report.is_valid(), "{report}");
    assert!(id.is_strict());
}

#[test]
fn single_table_db_morphism_agrees_with_table_morphism() {
    // a table morphism T1 → T2 is the same cells as a database morphism
    // db(T2) → db(T1) with the identity relation functor
    let m = fixtures::emp_to_dref();
    let db_src = fixtures::single_table_db("r", m.dst().clone());
    let db_dst = fixtures::single_table_db("r", m.src().clone());
    let functor = FunctorData::identity(db_src.schema().rel_cat());
    let sig_trans: BTreeMap<String, FinMap> =
        [("r".to_string(), m.col_map().clone())].into_iter().collect();
    let key_trans: BTreeMap<String, FinMap> =
        [("r".to_string(), m.key_map().clone())].into_iter().collect();
    let report = check_db_morphism(
        &db_src,
        &db_dst,
        &functor,
        &sig_trans,
        m.info().type_map(),
        m.info().inst_map(),
        &key_trans,
    )
    .unwrap();
    assert!(report.is_valid(), "{report}");

    // and a broken key transformation is caught at the exact cell
    let bad: BTreeMap<String, FinMap> = [(
        "r".to_string(),
        FinMap::new([("e1", "d1"), ("e2", "d1"), ("e3", "d1")]).unwrap(),
    )]
    .into_iter()
    .collect();
    let report = check_db_morphism(
        &db_src,
        &db_dst,
        &functor,
        &sig_trans,
        m.info().type_map(),
        m.info().inst_map(),
        &bad,
    )
    .unwrap();
    assert_eq!(report.cells.len(), 1);
    assert_eq!(report.cells[0].key, "e2");
    assert_eq!(report.cells[0].column, "d");
}

#[test]
fn db_of_classification_on_ab() {
    let e = fixtures::ab();
    let db = db_of_classification(&e).unwrap();
    let cat = db.schema().rel_cat();
    let non_id: Vec<&str> = cat.non_identity_arrows().map(|(n, _)| n).collect();
    assert_eq!(non_id, vec!["B->A"]);
    let sig_a = db.schema().sig_at("A").unwrap();
    assert_eq!(
        sig_a.columns().collect::<Vec<_>>(),
        vec!["A", "B"]
    );
    let sig_b = db.schema().sig_at("B").unwrap();
    assert_eq!(sig_b.columns().collect::<Vec<_>>(), vec!["B"]);
    assert_eq!(
        db.keys_at("A").unwrap().iter().collect::<Vec<_>>(),
        vec!["y1"]
    );
    assert_eq!(db.keys_at("B").unwrap().len(), 2);
    let tup = db.tuple_at("A", "y1").unwrap();
    assert_eq!(tup.entry("A").unwrap(), "y1");
    assert_eq!(tup.entry("B").unwrap(), "y1");
    // a one-arrow diagram
    let diagram = db.to_diagram().unwrap();
    assert_eq!(
        diagram
            .shape()
            .non_identity_arrows()
            .count(),
        1
    );
}

#[test]
fn db_of_classification_discrete_and_empty() {
    let e = Classification::new(
        ["A", "B"],
        ["y1", "y2"],
        vec![
            ("y1".to_string(), "A".to_string()),
            ("y2".to_string(), "B".to_string()),
        ],
    )
    .unwrap();
    let db = db_of_classification(&e).unwrap();
    assert_eq!(db.schema().rel_cat().non_identity_arrows().count(), 0);
    for x in ["A", "B"] {
        let sig = db.schema().sig_at(x).unwrap();
        assert_eq!(sig.columns().collect::<Vec<_>>(), vec![x]);
    }

    let empty = Classification::empty();
    let db = db_of_classification(&empty).unwrap();
    assert!(db.relations().is_empty());
}

#[test]
fn db_morphism_of_person_infomorphism() {
    let m = fixtures::person_infomorphism();
    let dm = db_morphism_of_infomorphism(&m).unwrap();
    // κ at Person is g restricted to extent(Emp)
    let kappa = &dm.key_trans()["Person"];
    assert_eq!(kappa.domain().iter().collect::<Vec<_>>(), vec!["e1", "e2", "e3"]);
    for (_, v) in kappa.iter() {
        assert_eq!(v, "p");
    }
    // identity infomorphism gives the identity database morphism
    let id = Infomorphism::identity(m.target());
    let dm_id = db_morphism_of_infomorphism(&id).unwrap();
    let db = db_of_classification(m.target()).unwrap();
    assert_eq!(dm_id, DatabaseMorphism::identity(&db));
}

#[test]
fn constant_tuple_transport_paths_agree() {
    // restrict-then-delta equals delta-then-transport, pointwise
    let m = fixtures::person_infomorphism();
    let src_db = db_of_classification(m.source()).unwrap();
    let dst_db = db_of_classification(m.target()).unwrap();
    for x2 in m.source().types() {
        let fx2 = m.type_map().apply(x2).unwrap();
        let filter2 = src_db.schema().sig_at(x2).unwrap().arity();
        for y1 in dst_db.keys_at(fx2).unwrap() {
            // path 1: g(y1), then the constant tuple on ↑x2
            let gy = m.inst_map().apply(y1).unwrap();
            let path1 = Tup::new(filter2.iter().map(|c| (c.clone(), gy.to_string()))).unwrap();
            // path 2: constant tuple on ↑f(x2) at y1, pulled back along f
            // and pushed along g
            let const1 = dst_db.tuple_at(fx2, y1).unwrap();
            let theta = m.type_map().restrict(&filter2);
            let path2 =
                catdb_core::sig::tuple_transport(const1, &theta, m.inst_map()).unwrap();
            assert_eq!(path1, path2);
        }
    }
}

#[test]
fn compose_db_morphisms_unit_laws() {
    let m = fixtures::person_infomorphism();
    let dm = db_morphism_of_infomorphism(&m).unwrap();
    let id_src = DatabaseMorphism::identity(dm.src());
    let id_dst = DatabaseMorphism::identity(dm.dst());
    assert_eq!(compose_db_morphisms(&id_src, &dm).unwrap(), dm);
    assert_eq!(compose_db_morphisms(&dm, &id_dst).unwrap(), dm);
}
