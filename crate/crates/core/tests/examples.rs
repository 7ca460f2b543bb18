//! Every example under `examples/` runs and reports what it claims.

#[path = "../examples/strata.rs"]
mod strata;
#[path = "../examples/named_classes.rs"]
mod named_classes;
#[path = "../examples/genus_three_cone.rs"]
mod genus_three_cone;
#[path = "../examples/genus_ten_vertex.rs"]
mod genus_ten_vertex;
#[path = "../examples/fulton.rs"]
mod fulton;
#[path = "../examples/lemma44.rs"]
mod lemma44;
#[path = "../examples/flag_divisor.rs"]
mod flag_divisor;
#[path = "../examples/relations_and_kappa.rs"]
mod relations_and_kappa;
#[path = "../examples/cone_kernel.rs"]
mod cone_kernel;
#[path = "../examples/genus_one_normal_form.rs"]
mod genus_one_normal_form;

#[test]
fn strata_example() {
    let lines = strata::run(0, 5).unwrap();
    assert_eq!(lines.iter().filter(|l| l.starts_with("T6")).count(), 10);
}

#[test]
fn named_classes_example() {
    let lines = named_classes::run().unwrap();
    assert!(lines.iter().any(|l| l.starts_with("g = 3  Cornalba-Harris") && l.contains("[T1 = -2]")));
    assert!(lines.iter().filter(|l| l.contains("lambda")).all(|l| l.contains("F-nef: true")));
}

#[test]
fn genus_three_example() {
    let lines = genus_three_cone::run().unwrap();
    assert!(lines.contains(&"ray (10,1,2)".to_string()));
    assert_eq!(lines.last().unwrap(), "3 of 4 inequalities are facets");
}

#[test]
fn genus_ten_example() {
    let lines = genus_ten_vertex::run().unwrap();
    assert!(lines.iter().any(|l| l.ends_with("(30,3,6,6,2,4,6)")));
    assert_eq!(lines.last().unwrap(), "nef by the coefficient criterion: false");
}

#[test]
fn fulton_example() {
    let dir = tempfile::tempdir().unwrap();
    let lines = fulton::run(5, Some(dir.path())).unwrap();
    assert_eq!(lines.last().unwrap(), "YES");
}

#[test]
fn lemma44_example() {
    assert!(lemma44::run().unwrap().iter().all(|l| l.ends_with(": effective")));
}

#[test]
fn flag_divisor_example() {
    let lines = flag_divisor::run().unwrap();
    assert_eq!(lines.iter().filter(|l| l.contains("zero on type 6: true")).count(), 4);
}

#[test]
fn relations_example() {
    let lines = relations_and_kappa::run().unwrap();
    assert!(lines.contains(&"n = 6: dim V = 16 (closed form 16)".to_string()));
    assert_eq!(lines.last().unwrap(), "symmetric invariants in V(6): 2");
}

#[test]
fn cone_kernel_example() {
    let lines = cone_kernel::run().unwrap();
    assert!(lines.iter().any(|l| l.starts_with("(1/2,1/2,1): separated")));
}

#[test]
fn genus_one_example() {
    assert_eq!(genus_one_normal_form::run().unwrap().last().unwrap(), "equal on every stratum: true");
}
