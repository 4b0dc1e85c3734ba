use super::*;
use crate::algebra::rat;
use crate::diagram::{canonicalize, parse_diagram};
use crate::linking::{build_surgery_matrix, TangleLinkingData};
use crate::spaces::{in_e, SpaceId, SpaceKind};

fn marks(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn combo(d: &Diagram) -> LinearCombo {
    LinearCombo::from_diagram(d).unwrap()
}

fn diag(text: &str) -> Diagram {
    parse_diagram(text).unwrap()
}

/// Wheel with four spokes, two of them on `x` and two on `h`.
fn wheel_xxhh() -> Diagram {
    diag("diagram { tri: r0(a0,s0,b3) r1(b0,s1,b1x) r2(c0,s2,c1) r3(d0,s3,d1); \
          uni: l0=x l1=x l2=h l3=h; \
          edges: a0-l0 s0-b0 s1-l1 b1x-c0 s2-l2 c1-d0 s3-l3 d1-b3; }")
}

fn zero_data(g: usize) -> TangleLinkingData {
    TangleLinkingData::new(vec![vec![0; g]; g], vec![vec![0; g]; g], vec![vec![0; g]; g]).unwrap()
}

fn gaussian(g: usize, mode: StrutLabels) -> GaussianPart {
    let m = build_surgery_matrix(&zero_data(g)).unwrap();
    GaussianPart::from_inverse(&invert_over_delta(&m).unwrap(), mode).unwrap()
}

/// Two-loop clasper: a theta graph with legs on `a` and `b` on different edges.
fn clasper(a: &str, b: &str) -> Diagram {
    diag(&format!(
        "diagram {{ tri: p(e1,e2,e3) q(f1,f2,f3) u(g1,g2,g3) w(k1,k2,k3); uni: la={a} lb={b}; \
         edges: e1-g1 g2-f1 e2-k1 k2-f2 e3-f3 g3-la k3-lb; }}"
    ))
}

#[test]
fn pairing_with_nothing_to_glue() {
    let d = wheel_xxhh();
    let one = combo(&Diagram::empty(Skeleton::marks()));
    let h_only = d.with_legs(Skeleton::marks(), &|_: &Leg| Leg::mark("h")).unwrap();
    assert_eq!(pair(&one, &combo(&h_only), &marks(&["x"])).unwrap(), combo(&h_only));
}

#[test]
fn strut_joins_two_legs_both_ways() {
    let d = wheel_xxhh();
    let s = combo(&shapes::strut(Leg::mark("x"), Leg::mark("x"), None));
    let got = pair(&s, &combo(&d), &marks(&["x"])).unwrap();
    let joined = diag("diagram { tri: r0(a0,s0,b3) r1(b0,s1,b1x) r2(c0,s2,c1) r3(d0,s3,d1); \
          uni: l2=h l3=h; edges: a0-s1 s0-b0 b1x-c0 s2-l2 c1-d0 s3-l3 d1-b3; }");
    assert!(!combo(&joined).is_empty());
    assert_eq!(got, combo(&joined).scale(&rat(2, 1)));
    assert_eq!(pair_brute(&s, &combo(&d), &marks(&["x"])).unwrap(), got);
}

#[test]
fn strut_on_one_vertex_gives_tadpoles() {
    let y = diag("diagram { tri: v(a,b,c); uni: p=x q=x r=h; edges: a-p b-q c-r; }");
    let s = combo(&shapes::strut(Leg::mark("x"), Leg::mark("x"), None));
    assert!(pair(&s, &combo(&y), &marks(&["x"])).unwrap().is_empty());
}

#[test]
fn optimized_pairing_matches_bijections() {
    let xs = marks(&["x", "y"]);
    let mut lib = crate::spaces::ConnectedLibrary::new(&xs);
    let mut c2 = LinearCombo::new();
    for d in lib.get(1, 3).unwrap().into_iter().chain(lib.get(0, 3).unwrap()).chain(lib.get(2, 2).unwrap()) {
        c2.add(&d, &rat(1, 1)).unwrap();
    }
    let mut c1 = LinearCombo::new();
    for d in lib.get(0, 3).unwrap().into_iter().chain(lib.get(1, 2).unwrap()).chain(lib.get(1, 3).unwrap()) {
        c1.add(&d, &rat(2, 3)).unwrap();
    }
    let a = pair(&c1, &c2, &xs).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, pair_brute(&c1, &c2, &xs).unwrap());
}

#[test]
fn gaussian_pairing_matches_the_expanded_exponential() {
    let gp = gaussian(1, StrutLabels::Symbolic);
    let mut p = LinearCombo::new();
    p.add(&clasper("x3", "x4"), &rat(1, 1)).unwrap();
    p.add(&clasper("x1", "x3"), &rat(-2, 1)).unwrap();
    p.add(&wheel_xxhh().with_legs(Skeleton::marks(), &|l: &Leg| if l.label == "x" { Leg::mark("x3") } else { l.clone() }).unwrap(), &rat(1, 5)).unwrap();
    let fast = pair_gaussian(&gp, &p).unwrap();
    let slow = pair_brute(&gaussian_combo(&gp, 1).unwrap(), &p, &gp.marks).unwrap();
    assert!(!fast.is_empty());
    assert_eq!(fast, slow);
}

#[test]
fn integral_of_one_and_linearity() {
    let gp = gaussian(1, StrutLabels::Series { order: 4 });
    let one = combo(&Diagram::empty(Skeleton::marks()));
    assert_eq!(aarhus_integral(&one, &gp, 4).unwrap(), one);
    let p = combo(&clasper("x3", "x4"));
    let a = aarhus_integral(&p, &gp, 4).unwrap();
    assert_eq!(aarhus_integral(&p.scale(&rat(-7, 3)), &gp, 4).unwrap(), a.scale(&rat(-7, 3)));
}

#[test]
fn vertexless_circle_is_rejected() {
    let gp = gaussian(1, StrutLabels::Symbolic);
    let s = combo(&shapes::strut(Leg::mark("x1"), Leg::mark("x2"), None));
    assert!(matches!(aarhus_pairing(&s, &gp), Err(Error::PPartViolation)));
    let c = combo(&shapes::strut(Leg::mark("x"), Leg::mark("x"), None));
    assert!(matches!(pair(&c, &c, &marks(&["x"])), Err(Error::PPartViolation)));
}

#[test]
fn wheel_coefficients() {
    let nu = NuData::standard(6).unwrap();
    assert_eq!(nu.b, vec![rat(1, 48), rat(-1, 5760), rat(1, 362880)]);
}

#[test]
fn log_inverts_exp() {
    let mut beta = LinearCombo::new();
    beta.add(&shapes::theta(), &rat(1, 3)).unwrap();
    beta.add(&shapes::wheel(2, "h"), &rat(-2, 1)).unwrap();
    beta.add(&clasper("h", "h"), &rat(5, 7)).unwrap();
    let e = exp_combo(&beta, 4).unwrap();
    assert_eq!(log_combo(&e, 4).unwrap(), beta.truncate(4));
    assert!(matches!(log_combo(&beta, 4), Err(Error::NonUnitConstant)));
}

#[test]
fn unknot_normalization() {
    let nu = NuData::standard(6).unwrap();
    let c = exp_combo(&combo(&shapes::wheel(2, "h")), 4).unwrap();
    assert_eq!(normalize_unknots(&c, 0, 0, &nu, 4).unwrap(), c);
    let (up, um) = (unknot_value(true, &nu, 4).unwrap(), unknot_value(false, &nu, 4).unwrap());
    // the theta factors cancel in U_+ U_-
    let both = up.product(&um).unwrap().truncate(4);
    let sp = nu.self_pairing(4).unwrap();
    let expected = inverse_combo(&sp.product(&sp).unwrap().truncate(4), 4).unwrap();
    assert_eq!(both, expected);
    // dividing a product of unknot values by itself
    let x = c.product(&up).unwrap().product(&up).unwrap().product(&um).unwrap().truncate(4);
    assert_eq!(normalize_unknots(&x, 2, 1, &nu, 4).unwrap(), c);
    assert!(matches!(normalize_unknots(&c, 1, 0, &NuData::standard(2).unwrap(), 5), Err(Error::InsufficientNu(5))));
}

#[test]
fn self_pairing_starts_with_one() {
    let sp = NuData::standard(4).unwrap().self_pairing(4).unwrap();
    assert_eq!(constant_term(&sp), rat(1, 1));
    assert!(sp.iter().all(|(_, d, _)| d.num_legs() == 0));
}

#[test]
fn loop_projection_is_idempotent() {
    let mut c = LinearCombo::new();
    c.add(&shapes::theta(), &rat(1, 1)).unwrap();
    c.add(&shapes::wheel(2, "h"), &rat(1, 1)).unwrap();
    c.add(&shapes::wheel(2, "h").disjoint_union(&shapes::wheel(2, "h")).unwrap(), &rat(1, 1)).unwrap();
    let one = loop_project(&c, 1);
    assert_eq!(one.len(), 1);
    assert_eq!(loop_project(&one, 1), one);
    assert_eq!(loop_project(&c, 2).len(), 1);
}

#[test]
fn clasper_difference_on_zero_data() {
    let m = build_surgery_matrix(&zero_data(1)).unwrap();
    let r = clasper_difference(&m, &clasper("x3", "x4"), 4).unwrap();
    assert!(r.certificate.r_half_integer);
    assert_eq!(r.leading_coefficient.clone() * r.leading_coefficient.clone(), &r.r * &r.r);
    assert!(r.delta.iter().all(|(_, d, _)| d.legs_with_label("h") > 0));
    assert!(r.delta.iter().all(|(_, d, _)| d.loop_number() == 3));
}

#[test]
fn symbolic_pipeline_lands_in_e0() {
    let m = build_surgery_matrix(&zero_data(1)).unwrap();
    let gp = symbolic_gaussian(&m).unwrap();
    let mut p = LinearCombo::new();
    p.add(&clasper("x3", "x4"), &rat(1, 1)).unwrap();
    p.add(&clasper("x1", "x2"), &rat(1, 1)).unwrap();
    let out = loop_project(&split_labels(&aarhus_pairing(&p, &gp).unwrap()).unwrap(), 3);
    assert!(!out.is_empty());
    let delta: Vec<i64> = gp.delta.u_coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect();
    let spec = SpaceId { kind: SpaceKind::E0 { n: 3, m: 3, delta }, marks: vec!["h".into()], degree: 0 };
    assert!(in_e(&out, &spec));
    let _ = canonicalize(&clasper("x3", "x4")).unwrap();
}
