//! The bundled randomized self-test: seeded generators drive the engine
//! against the independent oracles, mirroring the heavier law suite at a
//! size suitable for a quick batch run.

use std::collections::BTreeSet;

use catdb_core::colimits::{colimit, comediating_morphism};
use catdb_core::fincat::{check_cocone, check_cone, Cocone, Cone};
use catdb_core::limits::{family_name, limit, mediating_morphism};
use catdb_core::table::compose_table_morphisms;
use catdb_testkit::gen::Gen;
use catdb_testkit::oracle;

pub struct SelftestReport {
    pub lines: Vec<String>,
    pub ok: bool,
}

fn record(lines: &mut Vec<String>, ok: &mut bool, name: &str, passed: usize, total: usize) {
    lines.push(format!(
        "{name}: {passed}/{total} {}",
        if passed == total { "ok" } else { "FAILED" }
    ));
    if passed != total {
        *ok = false;
    }
}

/// Runs every check with data derived from `seed`, `cases` cases each.
pub fn run(seed: u64, cases: usize) -> SelftestReport {
    let mut lines = Vec::new();
    let mut ok = true;

    let mut g = Gen::new(seed);
    let mut passed = 0;
    for _ in 0..cases {
        let d = g.diagram(3, 4);
        let lim = limit(&d).unwrap();
        let objects: Vec<String> = d.shape().objects().iter().cloned().collect();
        let expected: BTreeSet<String> = oracle::compatible_key_families(&d)
            .into_iter()
            .map(|family| family_name(objects.iter().map(|j| family[j].as_str())))
            .collect();
        if lim.table.keys() == expected {
            passed += 1;
        }
    }
    record(&mut lines, &mut ok, "limit-vs-nested-loop", passed, cases);

    let mut g = Gen::new(seed.wrapping_add(1));
    let mut passed = 0;
    for _ in 0..cases {
        let d = g.diagram(3, 4);
        let colim = colimit(&d).unwrap();
        let mine: BTreeSet<BTreeSet<(String, String)>> = colim
            .key_classes
            .iter()
            .map(|c| c.members.clone())
            .collect();
        if mine == oracle::key_components(&d) {
            passed += 1;
        }
    }
    record(&mut lines, &mut ok, "colimit-vs-components", passed, cases);

    let mut g = Gen::new(seed.wrapping_add(2));
    let mut passed = 0;
    for _ in 0..cases {
        let d = g.diagram(3, 4);
        let lim = limit(&d).unwrap();
        let cone = g.cone(&d, &lim);
        let valid = check_cone(&d, &cone).map(|r| r.is_valid()).unwrap_or(false);
        let mediator_ok = mediating_morphism(&d, &lim, &cone).is_ok();
        let unique = oracle::count_mediating_candidates(&d, &lim, &cone) == 1;
        if valid && mediator_ok && unique {
            passed += 1;
        }
        let _: Cone = cone;
    }
    record(&mut lines, &mut ok, "mediating-uniqueness", passed, cases);

    let mut g = Gen::new(seed.wrapping_add(3));
    let mut passed = 0;
    for _ in 0..cases {
        let d = g.diagram(3, 4);
        let colim = colimit(&d).unwrap();
        let cocone = g.cocone(&d, &colim);
        let valid = check_cocone(&d, &cocone)
            .map(|r| r.is_valid())
            .unwrap_or(false);
        let comediator_ok = comediating_morphism(&d, &colim, &cocone).is_ok();
        let unique = oracle::count_comediating_candidates(&d, &colim, &cocone) == 1;
        if valid && comediator_ok && unique {
            passed += 1;
        }
        let _: Cocone = cocone;
    }
    record(&mut lines, &mut ok, "comediating-uniqueness", passed, cases);

    let mut g = Gen::new(seed.wrapping_add(4));
    let mut passed = 0;
    for _ in 0..cases {
        let db = g.database(3, 4);
        let m = g.infomorphism_from(db.cls());
        if oracle::join_migration_commutes(&db, &m) {
            passed += 1;
        }
    }
    record(&mut lines, &mut ok, "base-change-continuity", passed, cases);

    let mut g = Gen::new(seed.wrapping_add(5));
    let mut passed = 0;
    for _ in 0..cases {
        let cls = g.classification(4, 6);
        let t1 = g.table(&cls, 3, 4);
        let m1 = g.table_morphism_from(&t1);
        let m2 = g.table_morphism_from(m1.dst());
        let m3 = g.table_morphism_from(m2.dst());
        let ab = compose_table_morphisms(&m1, &m2);
        let bc = compose_table_morphisms(&m2, &m3);
        let assoc = match (ab, bc) {
            (Ok(ab), Ok(bc)) => {
                compose_table_morphisms(&ab, &m3).ok() == compose_table_morphisms(&m1, &bc).ok()
            }
            _ => false,
        };
        if assoc {
            passed += 1;
        }
    }
    record(&mut lines, &mut ok, "composition-associativity", passed, cases);

    SelftestReport { lines, ok }
}
