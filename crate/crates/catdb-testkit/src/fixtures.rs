//! Desk-scale fixtures: the company catalog (employees, departments, strings)
//! in both distinguished and unified form, and the two-type AB classification.

use std::collections::BTreeMap;

use catdb_core::cls::{Classification, Infomorphism};
use catdb_core::database::{Database, DbSchema};
use catdb_core::error::Error;
use catdb_core::fincat::{Cocone, Cone, FinCat, TableDiagram};
use catdb_core::map::FinMap;
use catdb_core::sig::{Signature, Tup};
use catdb_core::table::{Table, TableMorphism};

const STRINGS: [&str; 8] = [
    "Aquinus",
    "Decartes",
    "France",
    "Greece",
    "Italy",
    "Plato",
    "Production",
    "Sales",
];

/// The company classification: employees, departments, and the strings they
/// mention.
pub fn company() -> Classification {
    let mut instances: Vec<String> = vec!["e1", "e2", "e3", "d1", "d2"]
        .into_iter()
        .map(String::from)
        .collect();
    instances.extend(STRINGS.iter().map(|s| s.to_string()));
    let mut incidence = vec![
        ("e1".to_string(), "Emp".to_string()),
        ("e2".to_string(), "Emp".to_string()),
        ("e3".to_string(), "Emp".to_string()),
        ("d1".to_string(), "Dept".to_string()),
        ("d2".to_string(), "Dept".to_string()),
    ];
    for s in STRINGS {
        incidence.push((s.to_string(), "Str".to_string()));
    }
    Classification::new(["Emp", "Dept", "Str"], instances, incidence)
        .expect("company classification is well-formed")
}

pub fn emp_signature() -> Signature {
    Signature::new(
        company().types().iter().cloned(),
        [("name", "Str"), ("addr", "Str"), ("dept", "Dept")],
    )
    .expect("employee signature is well-formed")
}

pub fn dept_signature() -> Signature {
    Signature::new(
        company().types().iter().cloned(),
        [("name", "Str"), ("mngr", "Emp")],
    )
    .expect("department signature is well-formed")
}

pub fn emp_table() -> Table {
    Table::new(
        emp_signature(),
        company(),
        vec![
            (
                "e1".to_string(),
                Tup::new([("name", "Plato"), ("addr", "Greece"), ("dept", "d1")]).unwrap(),
            ),
            (
                "e2".to_string(),
                Tup::new([("name", "Aquinus"), ("addr", "Italy"), ("dept", "d2")]).unwrap(),
            ),
            (
                "e3".to_string(),
                Tup::new([("name", "Decartes"), ("addr", "France"), ("dept", "d1")]).unwrap(),
            ),
        ],
    )
    .expect("employee table is valid")
}

pub fn dept_table() -> Table {
    Table::new(
        dept_signature(),
        company(),
        vec![
            (
                "d1".to_string(),
                Tup::new([("name", "Sales"), ("mngr", "e3")]).unwrap(),
            ),
            (
                "d2".to_string(),
                Tup::new([("name", "Production"), ("mngr", "e2")]).unwrap(),
            ),
        ],
    )
    .expect("department table is valid")
}

/// The datatype relation for strings: key-only, no attribute columns.
pub fn str_table() -> Table {
    Table::new(
        Signature::empty(company().types().iter().cloned()),
        company(),
        STRINGS
            .iter()
            .map(|s| (s.to_string(), Tup::empty()))
            .collect::<Vec<_>>(),
    )
    .expect("string table is valid")
}

/// The department reference relation: a single Dept-sorted column listing
/// each department under itself.
pub fn dref_table() -> Table {
    Table::new(
        Signature::new(company().types().iter().cloned(), [("d", "Dept")]).unwrap(),
        company(),
        vec![
            ("d1".to_string(), Tup::new([("d", "d1")]).unwrap()),
            ("d2".to_string(), Tup::new([("d", "d2")]).unwrap()),
        ],
    )
    .expect("reference table is valid")
}

/// The department table extended with a self-reference column.
pub fn deptself_table() -> Table {
    Table::new(
        Signature::new(
            company().types().iter().cloned(),
            [("name", "Str"), ("mngr", "Emp"), ("d", "Dept")],
        )
        .unwrap(),
        company(),
        vec![
            (
                "d1".to_string(),
                Tup::new([("name", "Sales"), ("mngr", "e3"), ("d", "d1")]).unwrap(),
            ),
            (
                "d2".to_string(),
                Tup::new([("name", "Production"), ("mngr", "e2"), ("d", "d2")]).unwrap(),
            ),
        ],
    )
    .expect("self-referencing department table is valid")
}

/// The two-type classification with a strict extent containment:
/// `ext(A) = {y1} ⊂ ext(B) = {y1, y2}`.
pub fn ab() -> Classification {
    Classification::new(
        ["A", "B"],
        ["y1", "y2"],
        vec![
            ("y1".to_string(), "A".to_string()),
            ("y1".to_string(), "B".to_string()),
            ("y2".to_string(), "B".to_string()),
        ],
    )
    .expect("AB classification is well-formed")
}

/// The infomorphism from a one-type person world onto the company
/// classification: `f(Person) = Emp`, employees pull back to `p`, everything
/// else to `q`.
pub fn person_infomorphism() -> Infomorphism {
    let person = Classification::new(
        ["Person"],
        ["p", "q"],
        vec![("p".to_string(), "Person".to_string())],
    )
    .unwrap();
    let target = company();
    let f = FinMap::new([("Person", "Emp")]).unwrap();
    let g = FinMap::tabulate(
        target.instances().iter().map(|s| s.as_str()),
        |y| {
            if matches!(y, "e1" | "e2" | "e3") {
                "p".to_string()
            } else {
                "q".to_string()
            }
        },
    );
    Infomorphism::new(person, target, f, g).expect("person infomorphism is valid")
}

/// The projection morphism `Emp → DRef` sending each employee to their
/// department.
pub fn emp_to_dref() -> TableMorphism {
    TableMorphism::fiber(
        emp_table(),
        dref_table(),
        FinMap::new([("d", "dept")]).unwrap(),
        FinMap::new([("e1", "d1"), ("e2", "d2"), ("e3", "d1")]).unwrap(),
    )
    .expect("employee projection is valid")
}

/// The span shape with objects `Emp`, `DRef`, `DeptSelf` and arrows
/// `toEmp : Emp → DRef`, `toSelf : DeptSelf → DRef`.
pub fn span_shape() -> FinCat {
    let (cat, _) = FinCat::free_on_graph(
        ["DRef", "DeptSelf", "Emp"].map(String::from),
        [
            ("toEmp".to_string(), "Emp".to_string(), "DRef".to_string()),
            (
                "toSelf".to_string(),
                "DeptSelf".to_string(),
                "DRef".to_string(),
            ),
        ],
    )
    .expect("span shape is a valid graph");
    cat
}

/// The company span diagram: `Emp → DRef ← DeptSelf`.
pub fn company_span_diagram() -> TableDiagram {
    let mut tables = BTreeMap::new();
    tables.insert("Emp".to_string(), emp_table());
    tables.insert("DRef".to_string(), dref_table());
    tables.insert("DeptSelf".to_string(), deptself_table());
    let mut edges = BTreeMap::new();
    edges.insert(
        "toEmp".to_string(),
        (
            FinMap::new([("d", "dept")]).unwrap(),
            FinMap::new([("e1", "d1"), ("e2", "d2"), ("e3", "d1")]).unwrap(),
        ),
    );
    edges.insert(
        "toSelf".to_string(),
        (
            FinMap::new([("d", "d")]).unwrap(),
            FinMap::identity(["d1".to_string(), "d2".to_string()]),
        ),
    );
    TableDiagram::new(span_shape(), company(), tables, edges)
        .expect("company span diagram is valid")
}

/// A one-arrow chain diagram `A → B` with the employee table at `A` and the
/// reference table at `B`.
pub fn chain_diagram() -> TableDiagram {
    let (shape, _) = FinCat::free_on_graph(
        ["A", "B"].map(String::from),
        [("f".to_string(), "A".to_string(), "B".to_string())],
    )
    .unwrap();
    let mut tables = BTreeMap::new();
    tables.insert("A".to_string(), emp_table());
    tables.insert("B".to_string(), dref_table());
    let mut edges = BTreeMap::new();
    edges.insert(
        "f".to_string(),
        (
            FinMap::new([("d", "dept")]).unwrap(),
            FinMap::new([("e1", "d1"), ("e2", "d2"), ("e3", "d1")]).unwrap(),
        ),
    );
    TableDiagram::new(shape, company(), tables, edges).expect("chain diagram is valid")
}

/// A cone over the company span whose apex is the single row of the join
/// determined by employee `emp_key`.
pub fn one_row_cone(diagram: &TableDiagram, emp_key: &str) -> Cone {
    let emp = diagram.table_at("Emp").expect("span has Emp");
    let row = emp.row(emp_key).expect("employee exists");
    let dept = row.entry("dept").unwrap().to_string();
    let dself = diagram.table_at("DeptSelf").unwrap();
    let drow = dself.row(&dept).unwrap();
    let apex = Table::new(
        Signature::new(
            diagram.cls().types().iter().cloned(),
            [
                ("name", "Str"),
                ("addr", "Str"),
                ("dept", "Dept"),
                ("dname", "Str"),
                ("mngr", "Emp"),
            ],
        )
        .unwrap(),
        diagram.cls().clone(),
        vec![(
            "r".to_string(),
            Tup::new([
                ("name", row.entry("name").unwrap()),
                ("addr", row.entry("addr").unwrap()),
                ("dept", dept.as_str()),
                ("dname", drow.entry("name").unwrap()),
                ("mngr", drow.entry("mngr").unwrap()),
            ])
            .unwrap(),
        )],
    )
    .expect("apex row is classified");
    let mut legs = BTreeMap::new();
    legs.insert(
        "Emp".to_string(),
        TableMorphism::fiber(
            apex.clone(),
            emp.clone(),
            FinMap::new([("name", "name"), ("addr", "addr"), ("dept", "dept")]).unwrap(),
            FinMap::new([("r", emp_key)]).unwrap(),
        )
        .unwrap(),
    );
    legs.insert(
        "DRef".to_string(),
        TableMorphism::fiber(
            apex.clone(),
            diagram.table_at("DRef").unwrap().clone(),
            FinMap::new([("d", "dept")]).unwrap(),
            FinMap::new([("r", dept.as_str())]).unwrap(),
        )
        .unwrap(),
    );
    legs.insert(
        "DeptSelf".to_string(),
        TableMorphism::fiber(
            apex.clone(),
            dself.clone(),
            FinMap::new([("name", "dname"), ("mngr", "mngr"), ("d", "dept")]).unwrap(),
            FinMap::new([("r", dept.as_str())]).unwrap(),
        )
        .unwrap(),
    );
    Cone { apex, legs }
}

/// A cocone under a diagram whose apex has a single key and no columns.
pub fn constant_cocone(diagram: &TableDiagram, apex_key: &str) -> Cocone {
    let apex = Table::new(
        Signature::empty(diagram.cls().types().iter().cloned()),
        diagram.cls().clone(),
        vec![(apex_key.to_string(), Tup::empty())],
    )
    .unwrap();
    let mut legs = BTreeMap::new();
    for (object, table) in diagram.tables() {
        legs.insert(
            object.to_string(),
            TableMorphism::fiber(
                table.clone(),
                apex.clone(),
                FinMap::default(),
                FinMap::tabulate(
                    table.keys().iter().map(|s| s.as_str()),
                    |_| apex_key.to_string(),
                ),
            )
            .unwrap(),
        );
    }
    Cocone { apex, legs }
}

/// A schema with a single relation symbol.
pub fn single_schema(name: &str, sig: Signature) -> DbSchema {
    let cat = FinCat::one(name);
    let mut sigs = BTreeMap::new();
    sigs.insert(name.to_string(), sig.clone());
    let mut sig_morphs = BTreeMap::new();
    sig_morphs.insert(
        format!("id_{name}"),
        FinMap::identity(sig.columns().map(str::to_string)),
    );
    DbSchema::new(cat, sig.universe().clone(), sigs, sig_morphs)
        .expect("single-relation schema is valid")
}

fn span_schema_pieces() -> (
    FinCat,
    BTreeMap<String, Signature>,
    BTreeMap<String, FinMap>,
) {
    let (cat, _) = FinCat::free_on_graph(
        ["DRef", "DeptSelf", "Emp"].map(String::from),
        [
            ("toEmp".to_string(), "DRef".to_string(), "Emp".to_string()),
            (
                "toSelf".to_string(),
                "DRef".to_string(),
                "DeptSelf".to_string(),
            ),
        ],
    )
    .unwrap();
    let mut sigs = BTreeMap::new();
    sigs.insert("Emp".to_string(), emp_table().sig().clone());
    sigs.insert("DRef".to_string(), dref_table().sig().clone());
    sigs.insert("DeptSelf".to_string(), deptself_table().sig().clone());
    let mut sig_morphs = BTreeMap::new();
    for relation in ["Emp", "DRef", "DeptSelf"] {
        sig_morphs.insert(
            format!("id_{relation}"),
            FinMap::identity(sigs[relation].columns().map(str::to_string)),
        );
    }
    sig_morphs.insert("toEmp".to_string(), FinMap::new([("d", "dept")]).unwrap());
    sig_morphs.insert("toSelf".to_string(), FinMap::new([("d", "d")]).unwrap());
    (cat, sigs, sig_morphs)
}

/// The company span schema: relation symbols `Emp`, `DRef`, `DeptSelf` with
/// projection arrows out of the reference relation.
pub fn company_span_schema() -> DbSchema {
    let (cat, sigs, sig_morphs) = span_schema_pieces();
    DbSchema::new(cat, company().types().clone(), sigs, sig_morphs)
        .expect("company span schema is valid")
}

/// Same schema but with the reference column mapped to a string column.
pub fn company_span_schema_with_bad_sort() -> Result<DbSchema, Error> {
    let (cat, sigs, mut sig_morphs) = span_schema_pieces();
    sig_morphs.insert("toEmp".to_string(), FinMap::new([("d", "name")]).unwrap());
    DbSchema::new(cat, company().types().clone(), sigs, sig_morphs)
}

fn span_db_pieces() -> (
    BTreeMap<String, std::collections::BTreeSet<String>>,
    BTreeMap<String, FinMap>,
    BTreeMap<String, BTreeMap<String, Tup>>,
) {
    let mut keys = BTreeMap::new();
    let mut tuples = BTreeMap::new();
    for (name, table) in [
        ("Emp", emp_table()),
        ("DRef", dref_table()),
        ("DeptSelf", deptself_table()),
    ] {
        keys.insert(name.to_string(), table.keys());
        tuples.insert(
            name.to_string(),
            table
                .rows()
                .map(|(k, t)| (k.to_string(), t.clone()))
                .collect::<BTreeMap<_, _>>(),
        );
    }
    let mut key_maps = BTreeMap::new();
    key_maps.insert(
        "id_Emp".to_string(),
        FinMap::identity(keys["Emp"].iter().cloned()),
    );
    key_maps.insert(
        "id_DRef".to_string(),
        FinMap::identity(keys["DRef"].iter().cloned()),
    );
    key_maps.insert(
        "id_DeptSelf".to_string(),
        FinMap::identity(keys["DeptSelf"].iter().cloned()),
    );
    key_maps.insert(
        "toEmp".to_string(),
        FinMap::new([("e1", "d1"), ("e2", "d2"), ("e3", "d1")]).unwrap(),
    );
    key_maps.insert(
        "toSelf".to_string(),
        FinMap::identity(["d1".to_string(), "d2".to_string()]),
    );
    (keys, key_maps, tuples)
}

/// The company span database over the span schema.
pub fn company_span_db() -> Database {
    let (keys, key_maps, tuples) = span_db_pieces();
    Database::new(company_span_schema(), company(), keys, key_maps, tuples)
        .expect("company span database is valid")
}

/// Same database with the employee key map collapsing both departments.
pub fn company_span_db_with_bad_keymap() -> Result<Database, Error> {
    let (keys, mut key_maps, tuples) = span_db_pieces();
    key_maps.insert(
        "toEmp".to_string(),
        FinMap::new([("e1", "d1"), ("e2", "d1"), ("e3", "d1")]).unwrap(),
    );
    Database::new(company_span_schema(), company(), keys, key_maps, tuples)
}

/// The span database with every relation emptied out.
pub fn company_span_db_with_empty_dref() -> Database {
    let mut keys = BTreeMap::new();
    let mut tuples = BTreeMap::new();
    let mut key_maps = BTreeMap::new();
    for relation in ["Emp", "DRef", "DeptSelf"] {
        keys.insert(relation.to_string(), Default::default());
        tuples.insert(relation.to_string(), BTreeMap::new());
        key_maps.insert(format!("id_{relation}"), FinMap::default());
    }
    key_maps.insert("toEmp".to_string(), FinMap::default());
    key_maps.insert("toSelf".to_string(), FinMap::default());
    Database::new(company_span_schema(), company(), keys, key_maps, tuples)
        .expect("empty span database is valid")
}

/// A database with one relation holding the given table.
pub fn single_table_db(name: &str, table: Table) -> Database {
    let schema = single_schema(name, table.sig().clone());
    let mut keys = BTreeMap::new();
    keys.insert(name.to_string(), table.keys());
    let mut key_maps = BTreeMap::new();
    key_maps.insert(format!("id_{name}"), FinMap::identity(table.keys()));
    let mut tuples = BTreeMap::new();
    tuples.insert(
        name.to_string(),
        table
            .rows()
            .map(|(k, t)| (k.to_string(), t.clone()))
            .collect::<BTreeMap<_, _>>(),
    );
    Database::new(schema, table.cls().clone(), keys, key_maps, tuples)
        .expect("single-table database is valid")
}

/// The unified-form company schema: relation symbols are exactly the entity
/// types, with `Str` as a key-only datatype relation.
pub fn unified_company_schema() -> DbSchema {
    let cat = FinCat::discrete(["Dept", "Emp", "Str"].map(String::from));
    let mut sigs = BTreeMap::new();
    sigs.insert("Emp".to_string(), emp_signature());
    sigs.insert("Dept".to_string(), dept_signature());
    sigs.insert(
        "Str".to_string(),
        Signature::empty(company().types().iter().cloned()),
    );
    let mut sig_morphs = BTreeMap::new();
    for relation in ["Dept", "Emp", "Str"] {
        sig_morphs.insert(
            format!("id_{relation}"),
            FinMap::identity(sigs[relation].columns().map(str::to_string)),
        );
    }
    DbSchema::new(cat, company().types().clone(), sigs, sig_morphs)
        .expect("unified company schema is valid")
}

fn unified_db_from_tables(tables: &[(&str, Table)]) -> Result<Database, Error> {
    let mut keys = BTreeMap::new();
    let mut key_maps = BTreeMap::new();
    let mut tuples = BTreeMap::new();
    for (name, table) in tables {
        keys.insert(name.to_string(), table.keys());
        key_maps.insert(format!("id_{name}"), FinMap::identity(table.keys()));
        tuples.insert(
            name.to_string(),
            table
                .rows()
                .map(|(k, t)| (k.to_string(), t.clone()))
                .collect::<BTreeMap<_, _>>(),
        );
    }
    Database::new(unified_company_schema(), company(), keys, key_maps, tuples)
}

/// The company database in unified form: employees, departments, and the
/// string datatype relation.
pub fn company_unified_db() -> Database {
    unified_db_from_tables(&[
        ("Emp", emp_table()),
        ("Dept", dept_table()),
        ("Str", str_table()),
    ])
    .expect("unified company database is valid")
}

/// The unified company database with department `d2` dropped, breaking the
/// reference from employee `e2`.
pub fn company_unified_db_without_d2() -> Database {
    let dept = Table::new(
        dept_signature(),
        company(),
        vec![(
            "d1".to_string(),
            Tup::new([("name", "Sales"), ("mngr", "e3")]).unwrap(),
        )],
    )
    .unwrap();
    unified_db_from_tables(&[("Emp", emp_table()), ("Dept", dept), ("Str", str_table())])
        .expect("still a valid database, just not referentially sound")
}
