use orbitree::examples::{a1, a2, i3};
use orbitree::{
    classify_group, find_infinite_order_element, parse_automaton, verify_certificate, Budgets, Certificate,
    CertificateKind, Classification, InfiniteSearch,
};
use serde_json::json;

const FLIP: &str = "mealy Flip
alphabet 0 1
states a e
a: 0|1->e 1|0->e
e: 0|0->e 1|1->e
";

const NOT_BIREVERSIBLE: &str = "mealy L
alphabet 0 1
states p q
p: 0|0->p 1|1->q
q: 0|1->q 1|0->p
";

fn small() -> Budgets {
    Budgets {
        closure_elements: 300,
        ..Budgets::default()
    }
}

#[test]
fn closure_certificate_roundtrip() {
    let a = parse_automaton(FLIP).unwrap();
    let c = classify_group(&a, &small()).unwrap();
    assert!(c.is_finite());
    let cert = c.certificate().clone();
    assert_eq!(cert.kind, CertificateKind::SemigroupClosure);
    assert_eq!(cert.data["size"], 2);
    assert!(verify_certificate(&a, &cert, &small()));

    let text = serde_json::to_string(&c).unwrap();
    let back: Classification = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);

    let mut wrong = cert.clone();
    wrong.data["size"] = json!(3);
    assert!(!verify_certificate(&a, &wrong, &small()));
    let mut wrong = cert.clone();
    wrong.data["elements"] = json!(["a"]);
    wrong.data["size"] = json!(1);
    assert!(!verify_certificate(&a, &wrong, &small()));
}

#[test]
fn closure_of_a_subset_does_not_certify_the_group() {
    let a = a2();
    let cert = Certificate {
        kind: CertificateKind::SemigroupClosure,
        statement: String::new(),
        data: json!({"generators": ["y", "z"], "elements": ["y", "z", "yz", "yy"], "size": 4}),
    };
    assert!(!verify_certificate(&a, &cert, &small()));
}

#[test]
fn not_bireversible_is_infinite() {
    let a = parse_automaton(NOT_BIREVERSIBLE).unwrap();
    let c = classify_group(&a, &small()).unwrap();
    assert!(c.is_infinite());
    assert!(verify_certificate(&a, c.certificate(), &small()));
    assert!(!verify_certificate(&a2(), c.certificate(), &small()));
}

#[test]
fn all_split_certificate() {
    let c = classify_group(&i3(), &small()).unwrap();
    assert_eq!(c.certificate().kind, CertificateKind::AllSplitAtDegree);
    assert!(verify_certificate(&i3(), c.certificate(), &small()));
    assert!(!verify_certificate(&a1(), c.certificate(), &small()));
}

#[test]
fn infinite_order_certificate_rejects_tampering() {
    let a = a1();
    let b = Budgets {
        growth_levels: 5,
        ..Budgets::default()
    };
    let InfiniteSearch::Candidate(cert) = find_infinite_order_element(&a, &b).unwrap() else {
        panic!("A1 has a candidate");
    };
    assert!(verify_certificate(&a, &cert, &b));
    for (field, value) in [
        ("word", json!("xxy")),
        ("word", json!("")),
        ("grade", json!("proven")),
        ("connection_degree", json!(3)),
    ] {
        let mut wrong = cert.clone();
        wrong.data[field] = value;
        assert!(!verify_certificate(&a, &wrong, &b), "{field}");
    }
    let mut wrong = cert.clone();
    wrong.data["witnesses"][0] = json!("");
    assert!(!verify_certificate(&a, &wrong, &b));
}
