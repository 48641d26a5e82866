use catdb_core::cls::{check_infomorphism, Classification, Infomorphism};
use catdb_core::error::Error;
use catdb_core::map::FinMap;
use catdb_testkit::fixtures;

#[test]
fn extent_on_company() {
    let e = fixtures::company();
    let emp = e.extent("Emp").unwrap();
    assert_eq!(
        emp.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        vec!["e1", "e2", "e3"]
    );
    assert!(matches!(e.extent("Nope"), Err(Error::UnknownType(_))));
}

#[test]
fn extent_of_empty_incidence_is_empty() {
    let e = Classification::new(["A"], ["y"], Vec::new()).unwrap();
    assert!(e.extent("A").unwrap().is_empty());
}

#[test]
fn extent_enumerates_declared_incidence() {
    let e = fixtures::ab();
    let ext_b = e.extent("B").unwrap();
    assert_eq!(
        ext_b.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        vec!["y1", "y2"]
    );
    let ext_a = e.extent("A").unwrap();
    assert_eq!(ext_a.iter().map(|s| s.as_str()).collect::<Vec<_>>(), vec!["y1"]);
    // extent respects incidence exactly
    for x in e.types() {
        let ext = e.extent(x).unwrap();
        for y in e.instances() {
            assert_eq!(ext.contains(y), e.holds(y, x));
        }
    }
}

#[test]
fn duplicates_and_bad_incidence_rejected() {
    assert!(matches!(
        Classification::new(["A", "A"], ["y"], Vec::new()),
        Err(Error::Duplicate { .. })
    ));
    assert!(matches!(
        Classification::new(["A"], ["y"], vec![("z".to_string(), "A".to_string())]),
        Err(Error::BadIncidence { .. })
    ));
}

#[test]
fn identity_infomorphism_is_valid() {
    let e = fixtures::company();
    let id = e.identity_infomorphism();
    let report =
        check_infomorphism(id.source(), id.target(), id.type_map(), id.inst_map()).unwrap();
    assert!(report.is_valid());
    assert!(id.is_identity());
}

#[test]
fn person_infomorphism_checks_out() {
    // E2 = ({Person}, {p, q}, p ⊨ Person), mapped onto the company
    // classification by f(Person) = Emp, g(e_i) = p, g(_) = q.
    let m = fixtures::person_infomorphism();
    let report =
        check_infomorphism(m.source(), m.target(), m.type_map(), m.inst_map()).unwrap();
    assert!(report.is_valid());
}

#[test]
fn broken_instance_map_reports_the_pair() {
    let m = fixtures::person_infomorphism();
    // redirect Greece (not an employee) onto p, which is a Person
    let mut pairs: Vec<(String, String)> = m
        .inst_map()
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    for (k, v) in &mut pairs {
        if k == "Greece" {
            *v = "p".to_string();
        }
    }
    let g = FinMap::new(pairs).unwrap();
    let report = check_infomorphism(m.source(), m.target(), m.type_map(), &g).unwrap();
    assert_eq!(report.violations.len(), 1);
    let v = &report.violations[0];
    assert_eq!(v.instance, "Greece");
    assert_eq!(v.type_name, "Person");
}

#[test]
fn composition_of_valid_infomorphisms_is_valid() {
    let m = fixtures::person_infomorphism();
    let id = Infomorphism::identity(m.target());
    let comp = id.compose(&m).unwrap();
    assert_eq!(comp.source(), m.source());
    assert_eq!(comp.target(), m.target());
    let report = check_infomorphism(
        comp.source(),
        comp.target(),
        comp.type_map(),
        comp.inst_map(),
    )
    .unwrap();
    assert!(report.is_valid());
}
