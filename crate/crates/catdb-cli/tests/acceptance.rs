//! The acceptance suite: one test per criterion, each printing a PASS line
//! (visible under `--nocapture`) and enforcing its runtime bound where one is
//! stated. Expected values marked as derived are computed by the independent
//! oracles in `catdb_testkit::oracle`, never by the engine under test.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use catdb_cli::export::{table_to_csv, workspace_to_dsl};
use catdb_cli::csv_io::load_csv_reader;
use catdb_cli::workspace::parse_workspace;
use catdb_core::colimits::{colimit, comediating_morphism};
use catdb_core::database::{
    check_db_morphism, compose_db_morphisms, db_morphism_of_infomorphism, db_of_classification,
    DatabaseMorphism,
};
use catdb_core::fincat::{check_cocone, check_cone};
use catdb_core::limits::{family_name, limit, mediating_morphism};
use catdb_core::map::FinMap;
use catdb_core::sig::classify_tuple;
use catdb_core::table::{
    compose_table_morphisms, tables_isomorphic_with, IsoCaps, TableMorphism,
};
use catdb_core::unified::{check_referential_integrity, sketch_interpretation};
use catdb_testkit::gen::Gen;
use catdb_testkit::oracle;

const COMPANY: &str = include_str!("../fixtures/company.dsl");
const SPAN: &str = include_str!("../fixtures/company_span.dsl");
const EMP_CSV: &str = include_str!("../fixtures/emp.csv");

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn pass(criterion: u32, title: &str, started: Instant) {
    println!(
        "ACCEPTANCE {criterion} ({title}): PASS in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_01_company_fixture_golden() {
    let started = Instant::now();
    // `validate` on the transcribed example, through the real binary
    let company = fixture_path("company.dsl");
    let out = Command::new(env!("CARGO_BIN_EXE_catdb"))
        .args(["validate", "--in", &company])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "validate must pass");
    // `check-referential-integrity` passes
    let out = Command::new(env!("CARGO_BIN_EXE_catdb"))
        .args(["check-referential-integrity", "CompanyDB", "--in", &company])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "referential integrity must pass");
    // sketch interpretation: the two foreign-key columns, exactly
    let ws = parse_workspace(&[COMPANY]).unwrap();
    let db = &ws.databases["CompanyDB"].db;
    let interp = sketch_interpretation(db).unwrap();
    assert_eq!(
        interp.edge("Emp", "dept").unwrap().map,
        FinMap::new([("e1", "d1"), ("e2", "d2"), ("e3", "d1")]).unwrap()
    );
    assert_eq!(
        interp.edge("Dept", "mngr").unwrap().map,
        FinMap::new([("d1", "e3"), ("d2", "e2")]).unwrap()
    );
    assert!(check_referential_integrity(db).unwrap().is_valid());
    assert!(started.elapsed() < Duration::from_secs(1), "runtime bound");
    pass(1, "company fixture golden", started);
}

#[test]
fn criterion_02_company_join_golden() {
    let started = Instant::now();
    let ws = parse_workspace(&[COMPANY, SPAN]).unwrap();
    let db = &ws.databases["CompanySpan"].db;
    let join = db.join().unwrap();

    // exactly the nested-loop oracle's key families
    let diagram = db.to_diagram().unwrap();
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    let families = oracle::compatible_key_families(&diagram);
    let expected_keys: BTreeSet<String> = families
        .iter()
        .map(|f| family_name(objects.iter().map(|j| f[j].as_str())))
        .collect();
    assert_eq!(join.table.keys(), expected_keys);

    // three rows, presented as (employee, department) pairs
    let pairs: BTreeSet<(String, String)> = families
        .iter()
        .map(|f| (f["Emp"].clone(), f["DeptSelf"].clone()))
        .collect();
    let golden: BTreeSet<(String, String)> = [
        ("e1".to_string(), "d1".to_string()),
        ("e2".to_string(), "d2".to_string()),
        ("e3".to_string(), "d1".to_string()),
    ]
    .into_iter()
    .collect();
    assert_eq!(pairs, golden);
    assert_eq!(join.table.key_count(), 3);

    // five merged columns
    assert_eq!(join.column_classes.len(), 5);
    assert_eq!(join.table.sig().len(), 5);

    // every cell matches the oracle: the component value of any member of
    // the merged class
    for family in &families {
        let key = family_name(objects.iter().map(|j| family[j].as_str()));
        for class in &join.column_classes {
            let (object, column) = class.members.iter().next().unwrap();
            let expected = diagram
                .table_at(object)
                .unwrap()
                .row(&family[object])
                .unwrap()
                .entry(column)
                .unwrap();
            assert_eq!(join.table.row(&key).unwrap().entry(&class.name).unwrap(), expected);
        }
    }
    assert!(started.elapsed() < Duration::from_secs(1), "runtime bound");
    pass(2, "company join golden", started);
}

#[test]
fn criterion_03_limit_oracle_equivalence() {
    let started = Instant::now();
    let mut g = Gen::new(0xACC3);
    for case in 0..200 {
        let d = g.diagram(3, 4);
        let lim = limit(&d).unwrap();
        let objects: Vec<String> = d.shape().objects().iter().cloned().collect();
        let expected: BTreeSet<String> = oracle::compatible_key_families(&d)
            .into_iter()
            .map(|f| family_name(objects.iter().map(|j| f[j].as_str())))
            .collect();
        assert_eq!(lim.table.keys(), expected, "case {case}");
    }
    assert!(started.elapsed() < Duration::from_secs(10), "runtime bound");
    pass(3, "limit equals brute-force families, 200 diagrams", started);
}

#[test]
fn criterion_04_limit_universal_property() {
    let started = Instant::now();
    let mut g = Gen::new(0xACC4);
    for case in 0..200 {
        let d = g.diagram(3, 4);
        let lim = limit(&d).unwrap();
        for cone_idx in 0..20 {
            let cone = g.cone(&d, &lim);
            let report = check_cone(&d, &cone).unwrap();
            assert!(report.is_valid(), "case {case}.{cone_idx}: {report}");
            let m = mediating_morphism(&d, &lim, &cone)
                .unwrap_or_else(|e| panic!("case {case}.{cone_idx}: {e}"));
            for object in d.shape().objects() {
                let via = compose_table_morphisms(&m, &lim.projections[object]).unwrap();
                assert_eq!(&via, &cone.legs[object], "triangle at {object}");
            }
            assert_eq!(
                oracle::count_mediating_candidates(&d, &lim, &cone),
                1,
                "case {case}.{cone_idx}: mediating morphism must be unique"
            );
        }
    }
    pass(4, "mediating morphisms exist, commute, unique; 200 x 20 cones", started);
}

#[test]
fn criterion_05_colimit_duals() {
    let started = Instant::now();
    let mut g = Gen::new(0xACC5);
    for case in 0..200 {
        let d = g.diagram(3, 4);
        let colim = colimit(&d).unwrap();
        // key classes equal the connected components of the key-transition
        // graph
        let components = oracle::key_components(&d);
        let mine: BTreeSet<BTreeSet<(String, String)>> = colim
            .key_classes
            .iter()
            .map(|c| c.members.clone())
            .collect();
        assert_eq!(mine, components, "case {case}");
        // columns equal the exhaustively enumerated compatible families
        let objects: Vec<String> = d.shape().objects().iter().cloned().collect();
        let expected: BTreeSet<String> = oracle::compatible_column_families(&d)
            .into_iter()
            .map(|f| family_name(objects.iter().map(|j| f[j].as_str())))
            .collect();
        let cols: BTreeSet<String> = colim.table.sig().columns().map(str::to_string).collect();
        assert_eq!(cols, expected, "case {case}");
        // universal property, dualized
        for cocone_idx in 0..20 {
            let cocone = g.cocone(&d, &colim);
            let report = check_cocone(&d, &cocone).unwrap();
            assert!(report.is_valid(), "case {case}.{cocone_idx}: {report}");
            let m = comediating_morphism(&d, &colim, &cocone)
                .unwrap_or_else(|e| panic!("case {case}.{cocone_idx}: {e}"));
            for object in d.shape().objects() {
                let via = compose_table_morphisms(&colim.injections[object], &m).unwrap();
                assert_eq!(&via, &cocone.legs[object], "triangle at {object}");
            }
            assert_eq!(
                oracle::count_comediating_candidates(&d, &colim, &cocone),
                1,
                "case {case}.{cocone_idx}: comediating morphism must be unique"
            );
        }
    }
    assert!(started.elapsed() < Duration::from_secs(10), "runtime bound");
    pass(5, "colimit oracles and dual universal property; 200 diagrams", started);
}

#[test]
fn criterion_06_base_change_continuity() {
    let started = Instant::now();
    let mut g = Gen::new(0xACC6);
    let caps = IsoCaps {
        max_columns: 16,
        max_keys: 64,
    };
    for case in 0..100 {
        let db = g.database(3, 4);
        let m = g.infomorphism_from(db.cls());
        // the canonical isomorphism, validated in both directions
        assert!(
            oracle::join_migration_commutes(&db, &m),
            "case {case}: migrate(join) must be isomorphic to join(migrate)"
        );
        // where the generic search fits in its caps, it agrees
        let join = db.join().unwrap();
        let migrated = catdb_core::table::migrate(&join.table, &m).unwrap();
        let other = limit(&db.to_diagram().unwrap().migrate(&m).unwrap()).unwrap();
        if let Ok(witness) = tables_isomorphic_with(&migrated, &other.table, caps) {
            assert!(witness.is_some(), "case {case}: generic search disagrees");
        }
    }
    pass(6, "migrate(join) isomorphic to join(migrate), 100 pairs", started);
}

#[test]
fn criterion_07_schema_of_join() {
    let started = Instant::now();
    let mut g = Gen::new(0xACC7);
    for case in 0..100 {
        let db = g.database(3, 4);
        let join = db.join().unwrap();
        let reference = db.schema().reference_schema().unwrap();
        // the merged-class correspondence makes the join signature literally
        // equal to the reference signature, which is in particular a
        // sort-preserving bijection
        assert_eq!(join.table.sig(), &reference.sig, "case {case}");
        for (col, sort) in join.table.sig().sorts().iter() {
            assert_eq!(reference.sig.sort_of(col).unwrap(), sort);
        }
    }
    pass(7, "join signature = reference schema, 100 databases", started);
}

#[test]
fn criterion_08_classifications_as_databases() {
    let started = Instant::now();
    let mut g = Gen::new(0xACC8);
    for case in 0..100 {
        let e = g.classification(6, 6);
        let db = db_of_classification(&e).unwrap_or_else(|err| panic!("case {case}: {err}"));
        // every tuple component is constant at its key
        for relation in db.relations() {
            for key in db.keys_at(relation).unwrap() {
                let tup = db.tuple_at(relation, key).unwrap();
                for (_, value) in tup.iter() {
                    assert_eq!(value, key, "case {case}");
                }
                assert!(classify_tuple(
                    db.cls(),
                    db.schema().sig_at(relation).unwrap(),
                    tup
                ));
            }
        }
    }
    let mut g = Gen::new(0xACC9);
    for case in 0..100 {
        let e1 = g.classification(4, 5);
        let m = g.infomorphism_from(&e1);
        let dm = db_morphism_of_infomorphism(&m)
            .unwrap_or_else(|err| panic!("case {case}: {err}"));
        let report = check_db_morphism(
            dm.src(),
            dm.dst(),
            dm.functor(),
            dm.sig_trans(),
            dm.info().type_map(),
            dm.info().inst_map(),
            dm.key_trans(),
        )
        .unwrap();
        assert!(report.is_valid(), "case {case}: {report}");
    }
    pass(8, "db_of_classification and infomorphism morphisms, 100 + 100", started);
}

#[test]
fn criterion_09_category_laws() {
    let started = Instant::now();
    // 200 composable chains of table morphisms
    let mut g = Gen::new(0xACCA);
    for case in 0..200 {
        let cls = g.classification(4, 6);
        let t1 = g.table(&cls, 3, 4);
        let m1 = g.table_morphism_from(&t1);
        let m2 = g.table_morphism_from(m1.dst());
        let m3 = g.table_morphism_from(m2.dst());
        let ab = compose_table_morphisms(&m1, &m2).unwrap();
        let bc = compose_table_morphisms(&m2, &m3).unwrap();
        assert_eq!(
            compose_table_morphisms(&ab, &m3).unwrap(),
            compose_table_morphisms(&m1, &bc).unwrap(),
            "case {case}: associativity"
        );
        assert_eq!(
            compose_table_morphisms(&TableMorphism::identity(&t1), &m1).unwrap(),
            m1,
            "case {case}: left unit"
        );
        assert_eq!(
            compose_table_morphisms(&m1, &TableMorphism::identity(m1.dst())).unwrap(),
            m1,
            "case {case}: right unit"
        );
    }
    // 200 composable chains of database morphisms
    let mut g = Gen::new(0xACCB);
    for case in 0..200 {
        let e1 = g.classification(3, 4);
        let m1 = g.infomorphism_from(&e1);
        let m2 = g.infomorphism_from(m1.source());
        let m3 = g.infomorphism_from(m2.source());
        let d1 = db_morphism_of_infomorphism(&m1).unwrap();
        let d2 = db_morphism_of_infomorphism(&m2).unwrap();
        let d3 = db_morphism_of_infomorphism(&m3).unwrap();
        let ab = compose_db_morphisms(&d2, &d1).unwrap();
        let bc = compose_db_morphisms(&d3, &d2).unwrap();
        assert_eq!(
            compose_db_morphisms(&d3, &ab).unwrap(),
            compose_db_morphisms(&bc, &d1).unwrap(),
            "case {case}: associativity"
        );
        assert_eq!(
            compose_db_morphisms(&DatabaseMorphism::identity(d1.src()), &d1).unwrap(),
            d1,
            "case {case}: left unit"
        );
        assert_eq!(
            compose_db_morphisms(&d1, &DatabaseMorphism::identity(d1.dst())).unwrap(),
            d1,
            "case {case}: right unit"
        );
    }
    pass(9, "category laws over 200 + 200 composable chains", started);
}

#[test]
fn criterion_10_round_trips() {
    let started = Instant::now();
    // DSL parse/export fixed point, byte-exact
    let ws = parse_workspace(&[COMPANY, SPAN]).unwrap();
    let exported = workspace_to_dsl(&ws);
    let reparsed = parse_workspace(&[&exported]).unwrap();
    assert_eq!(reparsed, ws, "parse ∘ export must be the identity");
    assert_eq!(
        workspace_to_dsl(&reparsed),
        exported,
        "export must be a byte-exact fixed point"
    );
    // CSV/DSL agreement on the company fixture
    let emp = &ws.tables["Emp"].table;
    let from_csv = load_csv_reader(EMP_CSV.as_bytes(), emp.sig(), emp.cls(), "emp").unwrap();
    assert_eq!(&from_csv, emp, "CSV and DSL ingestion must agree");
    let exported_csv = table_to_csv(emp).unwrap();
    let reloaded = load_csv_reader(exported_csv.as_bytes(), emp.sig(), emp.cls(), "key").unwrap();
    assert_eq!(&reloaded, emp, "CSV export must reload byte-identically");
    pass(10, "DSL fixed point and CSV/DSL agreement", started);
}
