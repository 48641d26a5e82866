use std::collections::BTreeSet;

use catdb_core::map::FinMap;
use catdb_core::sig::{
    check_signature_morphism, classify_tuple, f_star, sigma_f, tuple_transport, Signature, Tup,
};
use catdb_testkit::fixtures;

#[test]
fn classify_company_rows() {
    let e = fixtures::company();
    let sig = fixtures::emp_signature();
    let good = Tup::new([("name", "Plato"), ("addr", "Greece"), ("dept", "d1")]).unwrap();
    assert!(classify_tuple(&e, &sig, &good));
    // e2 is an employee, not a department
    let bad = Tup::new([("name", "Plato"), ("addr", "Greece"), ("dept", "e2")]).unwrap();
    assert!(!classify_tuple(&e, &sig, &bad));
    // empty signature classifies exactly the empty tuple
    let empty_sig = Signature::empty(e.types().iter().cloned());
    assert!(classify_tuple(&e, &empty_sig, &Tup::empty()));
    assert!(!classify_tuple(&e, &empty_sig, &good));
}

#[test]
fn classification_agrees_with_extents() {
    let e = fixtures::company();
    let sig = fixtures::emp_signature();
    let tup = Tup::new([("name", "Plato"), ("addr", "Greece"), ("dept", "d1")]).unwrap();
    let pointwise = sig.sorts().iter().all(|(col, sort)| {
        e.extent(sort)
            .unwrap()
            .contains(tup.get(col).unwrap())
    });
    assert_eq!(classify_tuple(&e, &sig, &tup), pointwise);
}

#[test]
fn sigma_f_composes_sorts() {
    let e = fixtures::company();
    let sig = fixtures::emp_signature();
    let id = FinMap::identity(e.types().iter().cloned());
    assert_eq!(sigma_f(&sig, &id, e.types()).unwrap(), sig);

    let person: BTreeSet<String> = ["Person".to_string()].into_iter().collect();
    let f = FinMap::new([("Person", "Emp")]).unwrap();
    let src = Signature::new(["Person"], [("a", "Person")]).unwrap();
    let pushed = sigma_f(&src, &f, e.types()).unwrap();
    assert_eq!(pushed.sort_of("a").unwrap(), "Emp");

    let empty = Signature::empty(["Person"]);
    let pushed_empty = sigma_f(&empty, &f, e.types()).unwrap();
    assert!(pushed_empty.is_empty());
    assert_eq!(pushed_empty.universe(), e.types());
    let _ = person;
}

#[test]
fn f_star_enumerates_matching_pairs() {
    let e = fixtures::company();
    let emp = fixtures::emp_signature();
    let id = FinMap::identity(e.types().iter().cloned());
    let back = f_star(&emp, &id, e.types()).unwrap();
    let cols: Vec<String> = back.columns().map(str::to_string).collect();
    assert_eq!(cols, vec!["addr@Str", "dept@Dept", "name@Str"]);
    assert_eq!(back.sort_of("dept@Dept").unwrap(), "Dept");

    // over X₂ = {Person} with f(Person) = Emp: the employee signature has
    // no Emp-sorted column, the department signature exactly one
    let person: BTreeSet<String> = ["Person".to_string()].into_iter().collect();
    let f = FinMap::new([("Person", "Emp")]).unwrap();
    let none = f_star(&emp, &f, &person).unwrap();
    assert!(none.is_empty());
    let dept = fixtures::dept_signature();
    let one = f_star(&dept, &f, &person).unwrap();
    let cols: Vec<String> = one.columns().map(str::to_string).collect();
    assert_eq!(cols, vec!["mngr@Person"]);
    assert_eq!(one.sort_of("mngr@Person").unwrap(), "Person");
}

#[test]
fn signature_morphism_sort_condition() {
    let e = fixtures::company();
    let emp = fixtures::emp_signature();
    let id_f = FinMap::identity(e.types().iter().cloned());
    let id_h = FinMap::identity(emp.columns().map(str::to_string));
    assert!(check_signature_morphism(&id_h, &emp, &emp, &id_f)
        .unwrap()
        .is_valid());

    let src = Signature::new(e.types().iter().cloned(), [("d", "Dept")]).unwrap();
    let good = FinMap::new([("d", "dept")]).unwrap();
    assert!(check_signature_morphism(&good, &src, &emp, &id_f)
        .unwrap()
        .is_valid());

    let bad = FinMap::new([("d", "name")]).unwrap();
    let report = check_signature_morphism(&bad, &src, &emp, &id_f).unwrap();
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].expected, "Dept");
    assert_eq!(report.violations[0].actual, "Str");
}

#[test]
fn transport_by_the_formula() {
    let e = fixtures::company();
    let row_e1 = Tup::new([("name", "Plato"), ("addr", "Greece"), ("dept", "d1")]).unwrap();
    let id_g = FinMap::identity(e.instances().iter().cloned());

    let id_h = FinMap::identity(["name", "addr", "dept"].map(str::to_string));
    assert_eq!(tuple_transport(&row_e1, &id_h, &id_g).unwrap(), row_e1);

    let h = FinMap::new([("d", "dept")]).unwrap();
    let moved = tuple_transport(&row_e1, &h, &id_g).unwrap();
    assert_eq!(moved, Tup::new([("d", "d1")]).unwrap());

    let empty = FinMap::default();
    assert_eq!(tuple_transport(&row_e1, &empty, &id_g).unwrap(), Tup::empty());
}
