use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::diagram::{apply_as, apply_ihx, parse_diagram, Leg};
use crate::spaces::ConnectedLibrary;

fn h_library() -> ConnectedLibrary {
    ConnectedLibrary::new(&["h".to_string()])
}

#[test]
fn anchors() {
    let one = sl2_weight(&Diagram::empty(Default::default())).unwrap();
    assert_eq!(one, CasimirPoly::monomial(rat(1, 1), 0, 0));
    let s = sl2_weight(&shapes::strut(Leg::mark("h"), Leg::mark("h"), None)).unwrap();
    assert_eq!(s, CasimirPoly::monomial(rat(1, 1), 1, 1));
    assert_eq!(sl2_brute(&shapes::strut(Leg::mark("h"), Leg::mark("h"), None)).unwrap(), s);
}

#[test]
fn theta_against_tensor_oracle() {
    let t = shapes::theta();
    assert_eq!(sl2_weight(&t).unwrap(), sl2_brute(&t).unwrap());
    assert!(!sl2_weight(&t).unwrap().is_zero());
}

#[test]
fn recursion_matches_oracle_up_to_degree_3() {
    let mut lib = h_library();
    let mut count = 0;
    for degree in 1..=3 {
        for d in lib.of_degree(degree, 0).unwrap() {
            let (w, b) = (sl2_weight(&d).unwrap(), sl2_brute(&d).unwrap());
            assert_eq!(w, b, "{d:?}");
            count += 1;
        }
    }
    assert!(count >= 10);
}

#[test]
fn recursion_matches_oracle_on_random_degree_4() {
    let mut lib = h_library();
    let pool = lib.of_degree(4, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let mut d = pool[rng.gen_range(0..pool.len())].clone();
        for v in 0..d.vertices().len() {
            if matches!(d.vertices()[v], Vertex::Tri(_)) && rng.gen_bool(0.5) {
                d = d.flip_vertex(v).unwrap();
            }
        }
        assert_eq!(sl2_weight(&d).unwrap(), sl2_brute(&d).unwrap());
    }
}

#[test]
fn relations_are_killed() {
    let mut lib = h_library();
    for degree in 2..=4 {
        for d in lib.of_degree(degree, 0).unwrap() {
            let w = sl2_weight(&d).unwrap();
            for v in 0..d.vertices().len() {
                if matches!(d.vertices()[v], Vertex::Tri(_)) {
                    for (q, t) in apply_as(&d, v).unwrap() {
                        let mut sum = w.clone();
                        sum.add_scaled(&sl2_weight(&t).unwrap(), &-q);
                        assert!(sum.is_zero());
                    }
                }
            }
            for e in 0..d.num_edges() {
                let (a, b) = (d.vertex_of(2 * e), d.vertex_of(2 * e + 1));
                if a == b || !matches!(d.vertices()[a], Vertex::Tri(_)) || !matches!(d.vertices()[b], Vertex::Tri(_)) {
                    continue;
                }
                let mut sum = w.clone();
                for (q, t) in apply_ihx(&d, e).unwrap() {
                    sum.add_scaled(&sl2_weight(&t).unwrap(), &-q);
                }
                assert!(sum.is_zero());
            }
        }
    }
}

#[test]
fn bubble_and_wheel_values() {
    // a bubble with this orientation multiplies by 4
    let w2 = sl2_weight(&shapes::wheel(2, "h")).unwrap();
    let b = sl2_weight(&shapes::wheel_with_bubbles(2, 1, "h")).unwrap();
    assert_eq!(b.ratio(&w2), Some(rat(4, 1)));
    assert_eq!(sl2_brute(&shapes::wheel_with_bubbles(2, 1, "h")).unwrap(), b);
    // odd wheels vanish
    assert!(sl2_weight(&shapes::wheel(3, "h")).unwrap().is_zero());
}

#[test]
fn inputs_are_checked() {
    let labeled = parse_diagram("diagram { uni: a=h b=h; edges: a-b [t]; }").unwrap();
    assert!(matches!(sl2_weight(&labeled), Err(Error::UnexpandedLabel)));
    assert!(matches!(sl2_weight(&shapes::strut(Leg::mark("x"), Leg::mark("h"), None)), Err(Error::InvalidArgument(_))));
    let big = shapes::wheel_with_bubbles(4, 2, "h");
    assert!(matches!(sl2_brute(&big), Err(Error::TooLarge(_))));
}

#[test]
fn certificates() {
    assert!(nonvanishing_certificate(&LinearCombo::from_diagram(&family_diagram(2, 1)).unwrap()));
    assert!(!nonvanishing_certificate(&LinearCombo::new()));
    let tad = LinearCombo::from_diagram(&shapes::tadpole(Leg::mark("h"))).unwrap();
    assert!(!nonvanishing_certificate(&tad));
    assert!(sl2_weight(&shapes::tadpole(Leg::mark("h"))).unwrap().is_zero());
}

#[test]
fn family_ratio() {
    let f = family_check(&[(2, 1), (2, 2), (3, 1)]).unwrap();
    for (n, d, w, r) in &f.rows {
        eprintln!("D_({n},{d}) = {w}, ratio {r:?}");
    }
    assert!(f.constant && f.nonzero);
}
