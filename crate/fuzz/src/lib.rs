//! Target bodies, shared by the libFuzzer binaries and the corpus replay test.
//! Each one accepts arbitrary bytes, must never panic on rejected input, and
//! checks a print/parse round trip on accepted input.

use jacobi::algebra::{format_rational, parse_laurent, parse_ratio_expr, parse_rational, LaurentPoly};
use jacobi::diagram::{canonicalize, parse_diagrams, write_diagram, Diagram};
use jacobi::spaces::SpaceId;

/// Canonical forms cost factorial time in the worst case.
const CANON_VERTICES: usize = 12;

fn same_class(a: &Diagram, b: &Diagram) {
    if a.vertices().len() <= CANON_VERTICES {
        let (x, y) = (canonicalize(a).unwrap(), canonicalize(b).unwrap());
        assert_eq!((x.code, x.sign), (y.code, y.sign));
    }
}

pub fn diagram_text(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(ds) = parse_diagrams(s) else { return };
    for d in ds {
        let again = parse_diagrams(&write_diagram(&d)).expect("written diagrams parse");
        assert_eq!(again.len(), 1);
        same_class(&d, &again[0]);
    }
}

pub fn diagram_json(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(d) = Diagram::from_json_str(s) else { return };
    let text = serde_json::to_string(&d.to_json()).unwrap();
    let again = Diagram::from_json_str(&text).expect("serialized diagrams parse");
    same_class(&d, &again);
}

pub fn laurent_expr(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_laurent(s) {
        assert_eq!(parse_laurent(&p.to_string()).expect("displayed polynomials parse"), p);
    }
    if let Ok(e) = parse_ratio_expr(s) {
        if e.delta_pow > 0 {
            let shown = format!("({})/D^{}", e.num, e.delta_pow);
            assert_eq!(parse_ratio_expr(&shown).expect("displayed ratios parse"), e);
        }
    }
}

pub fn laurent_json(data: &[u8]) {
    let Ok(pairs) = serde_json::from_slice::<Vec<(i64, String)>>(data) else { return };
    let Ok(p) = LaurentPoly::from_json_pairs(&pairs) else { return };
    assert_eq!(LaurentPoly::from_json_pairs(&p.to_json_pairs()).unwrap(), p);
}

pub fn space_id(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(id) = s.parse::<SpaceId>() else { return };
    assert_eq!(id.to_string().parse::<SpaceId>().expect("displayed ids parse"), id);
}

pub fn rational(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(q) = parse_rational(s) else { return };
    assert_eq!(parse_rational(&format_rational(&q)).expect("formatted rationals parse"), q);
}
