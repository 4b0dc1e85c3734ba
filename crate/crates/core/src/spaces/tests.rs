use super::*;
use crate::algebra::{rat, LaurentPoly};
use crate::diagram::{shapes, Label, Leg};

fn spec(s: &str, degree: usize) -> SpaceId {
    let mut id: SpaceId = s.parse().unwrap();
    id.degree = degree;
    id
}

#[test]
fn single_color_open_diagrams() {
    let b = quotient_basis(&spec("B@x", 5)).unwrap();
    assert_eq!(b.dims(), vec![1, 1, 2, 3, 6, 10]);
}

#[test]
fn primitives() {
    // connected diagrams with legs, plus legless ones (1, 1, 1, 2)
    let b = quotient_basis(&spec("Bconn@x", 4)).unwrap();
    assert_eq!(b.dims(), vec![0, 2, 2, 2, 4]);
}

#[test]
fn two_loop_h_space_is_odd() {
    let b = quotient_basis(&spec("Bn:2@h", 5)).unwrap();
    assert_eq!(b.dims(), vec![0, 1, 0, 1, 0, 1]);
}

#[test]
fn legless_two_loop_graphs() {
    let mut lib = ConnectedLibrary::new(&["h".to_string()]);
    let g = lib.get(2, 0).unwrap();
    assert_eq!(g.len(), 2);
    for d in &g {
        assert_eq!(d.num_edges(), 3);
    }
    assert!(lib.get(3, 0).unwrap().iter().all(|d| d.num_edges() == 6));
}

#[test]
fn line_diagrams_match_open_ones() {
    let b = quotient_basis(&spec("A_line@x", 4)).unwrap();
    assert_eq!(b.dims(), vec![1, 1, 2, 3, 6]);
}

#[test]
fn pivot_orders_and_parallelism_agree_on_dims() {
    let s = spec("B@x", 4);
    let a = quotient_basis_with(&s, QuotientOptions { order: PivotOrder::Forward, parallel: true }).unwrap();
    let b = quotient_basis_with(&s, QuotientOptions { order: PivotOrder::Reverse, parallel: false }).unwrap();
    assert_eq!(a.dims(), b.dims());
    // a basis element of one order has nonzero image in the other
    for blk in &a.blocks {
        for d in blk.basis_diagrams() {
            let v = b.coords(&LinearCombo::from_diagram(d).unwrap()).unwrap();
            assert!(v.iter().any(|q| !q.is_zero()));
        }
    }
}

#[test]
fn relations_vanish() {
    let s = spec("B@x", 4);
    let b = quotient_basis(&s).unwrap();
    for ds in enumerate_by_degree(&s).unwrap() {
        for d in ds {
            for r in relations_of(&d).unwrap() {
                assert!(b.coords(&r).unwrap().iter().all(|q| q.is_zero()));
            }
        }
    }
}

#[test]
fn line_relations_vanish_and_tadpole_is_zero() {
    let s = spec("A_line@x", 3);
    let b = quotient_basis(&s).unwrap();
    for ds in enumerate_by_degree(&s).unwrap() {
        for d in ds {
            for r in relations_of(&d).unwrap() {
                assert!(b.coords(&r).unwrap().iter().all(|q| q.is_zero()));
            }
        }
    }
    let t = Diagram::empty(Skeleton::lines(&["x"])).union_with(&shapes::tadpole(Leg::mark("q"))).unwrap();
    let v = t.legs().next().unwrap().0;
    let t = t.place_leg(v, "x", 0).unwrap();
    assert!(LinearCombo::from_diagram(&t).unwrap().is_empty());
}

#[test]
fn coords_are_linear() {
    let s = spec("B@x", 4);
    let b = quotient_basis(&s).unwrap();
    let ds = enumerate_diagrams(&s).unwrap();
    let (x, y) = (&ds[5], &ds[9]);
    let mut c = LinearCombo::new();
    c.add(x, &rat(2, 1)).unwrap();
    c.add(y, &rat(-3, 7)).unwrap();
    let vx = b.coords(&LinearCombo::from_diagram(x).unwrap()).unwrap();
    let vy = b.coords(&LinearCombo::from_diagram(y).unwrap()).unwrap();
    let vc = b.coords(&c).unwrap();
    for i in 0..vc.len() {
        assert_eq!(vc[i], &vx[i] * rat(2, 1) + &vy[i] * rat(-3, 7));
    }
}

#[test]
fn chi_round_trip() {
    let open = spec("B@x", 3);
    let line = spec("A_line@x", 3);
    let bl = quotient_basis(&line).unwrap();
    let bo = quotient_basis(&open).unwrap();
    let lines = vec!["x".to_string()];
    let mut inv = ChiInverse::new();
    for d in enumerate_diagrams(&open).unwrap() {
        let c = LinearCombo::from_diagram(&d).unwrap();
        let back = inv.apply(&chi(&c, &lines).unwrap()).unwrap();
        let diff = {
            let mut x = back.clone();
            x.add_combo(&c, &rat(-1, 1));
            x
        };
        assert!(bo.coords(&diff).unwrap().iter().all(|q| q.is_zero()), "chi^-1 chi != id");
    }
    for d in enumerate_diagrams(&line).unwrap() {
        let c = LinearCombo::from_diagram(&d).unwrap();
        let there = chi(&inv.apply(&c).unwrap(), &lines).unwrap();
        let mut diff = there.clone();
        diff.add_combo(&c, &rat(-1, 1));
        assert!(bl.coords(&diff).unwrap().iter().all(|q| q.is_zero()), "chi chi^-1 != id");
    }
}

#[test]
fn chi_needs_lines() {
    let c = LinearCombo::from_diagram(&shapes::strut(Leg::mark("y"), Leg::mark("y"), None)).unwrap();
    assert!(matches!(chi(&c, &["x".to_string()]), Err(Error::MissingLine(_))));
}

#[test]
fn labeled_membership() {
    let t = Label::t_pow(1);
    let d = shapes::theta_labeled([Some(t.clone()), None, Some(Label::t_pow(-1))]);
    let c = LinearCombo::from_diagram(&d).unwrap();
    assert!(in_at(&c));
    let e0 = spec("E0:2,1,[1]", 0);
    let lab = Label::over_delta(LaurentPoly::t_pow(1), 1);
    let e = LinearCombo::from_diagram(&shapes::theta_labeled([Some(lab.clone()), None, None])).unwrap();
    assert!(in_e(&e, &e0));
    assert!(!in_at(&e));
    let e1 = spec("E1:2,1,[1]", 0);
    assert!(!in_e(&e, &e1));
}

#[test]
fn space_ids_round_trip() {
    for s in ["B@x", "Bn:2@h", "A_line@x,y", "E0:2,1,[1,-1]@h", "At@h"] {
        let id: SpaceId = s.parse().unwrap();
        assert_eq!(id.to_string().parse::<SpaceId>().unwrap(), id);
    }
    assert!("Q@x".parse::<SpaceId>().is_err());
}

#[test]
fn moving_a_label_is_an_identity_in_the_quotient() {
    // a power of t slid across a vertex gives the same element after expansion
    let s = spec("Bn:2@h", 4);
    let b = quotient_basis(&s).unwrap();
    let d = shapes::theta_labeled([Some(Label::t_pow(1)), None, None]);
    let moved = crate::diagram::move_label(&d, 0, d.vertex_of(0)).unwrap();
    let x = expand_labels(&d, 4, None).unwrap();
    let mut y = LinearCombo::new();
    for (_, m, q) in moved.iter() {
        y.add_combo(&expand_labels(m, 4, None).unwrap(), q);
    }
    y.add_combo(&x, &rat(-1, 1));
    assert!(b.coords(&y).unwrap().iter().all(|q| q.is_zero()));
}
