//! Text format:
//!
//! ```text
//! diagram {
//!   skeleton: lines(x) circles(c);
//!   tri: v1(a,b,c) v2(d,e,f);
//!   uni: l1=h l2=x:0;
//!   edges: a-d b-e[t] c-f[(t-1)/D] l1-l2;
//! }
//! ```
//!
//! Names inside `tri` and on the left of `uni` entries are half-edges. A leg
//! spec is a free mark (`h`), an attachment `comp:pos`, or `mark@comp:pos`
//! where the mark is informational. Labels in brackets sit on the first-named
//! side; `[h:1,0,1/2]` is an explicit series. The skeleton section is optional;
//! without it every attachment component is taken to be a line.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Dart, Diagram, Label, Leg, Skeleton, Vertex};
use crate::algebra::{parse_ratio_expr_at, parse_rational, HSeries};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
pub(crate) struct RawDiagram {
    pub skeleton: Option<Skeleton>,
    pub tri: Vec<[String; 3]>,
    pub uni: Vec<(String, Leg)>,
    pub edges: Vec<(String, String, Option<Label>)>,
}

impl RawDiagram {
    pub fn build(self) -> Result<Diagram> {
        let mut darts: HashMap<String, (usize, usize)> = HashMap::new();
        let mut claim = |name: &str, v: usize, slot: usize| -> Result<()> {
            if darts.insert(name.to_string(), (v, slot)).is_some() {
                return Err(Error::Malformed(format!("half-edge {name} declared twice")));
            }
            Ok(())
        };
        let tri_names: Vec<[String; 3]> = self.tri.clone();
        for (i, t) in tri_names.iter().enumerate() {
            for (s, n) in t.iter().enumerate() {
                claim(n, i, s)?;
            }
        }
        let nt = tri_names.len();
        for (i, (n, _)) in self.uni.iter().enumerate() {
            claim(n, nt + i, 0)?;
        }
        let mut slots: Vec<Vec<Option<Dart>>> = (0..nt).map(|_| vec![None; 3]).collect();
        slots.extend(self.uni.iter().map(|_| vec![None]));
        let mut labels = Vec::new();
        for (e, (a, b, l)) in self.edges.iter().enumerate() {
            for (side, n) in [a, b].into_iter().enumerate() {
                let (v, s) = *darts
                    .get(n)
                    .ok_or_else(|| Error::Malformed(format!("unknown half-edge {n}")))?;
                if slots[v][s].is_some() {
                    return Err(Error::Malformed(format!("half-edge {n} in two edges")));
                }
                slots[v][s] = Some(2 * e + side);
            }
            labels.push(l.clone());
        }
        let get = |v: usize, s: usize| slots[v][s].ok_or_else(|| Error::Malformed("half-edge without an edge".into()));
        let mut vertices = Vec::new();
        for v in 0..nt {
            vertices.push(Vertex::Tri([get(v, 0)?, get(v, 1)?, get(v, 2)?]));
        }
        for (i, (_, leg)) in self.uni.iter().enumerate() {
            vertices.push(Vertex::Uni { dart: get(nt + i, 0)?, leg: leg.clone() });
        }
        let skeleton = match self.skeleton {
            Some(s) => s,
            None => {
                let mut lines: Vec<String> =
                    self.uni.iter().filter(|(_, l)| l.pos.is_some()).map(|(_, l)| l.label.clone()).collect();
                lines.sort();
                lines.dedup();
                Skeleton { lines, circles: vec![] }
            }
        };
        Diagram::new(skeleton, vertices, labels)
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        let name = |x: Dart| format!("h{x}");
        let mut raw = RawDiagram { skeleton: Some(d.skeleton().clone()), ..Default::default() };
        for v in d.vertices() {
            match v {
                Vertex::Tri(ds) => raw.tri.push([name(ds[0]), name(ds[1]), name(ds[2])]),
                Vertex::Uni { dart, leg } => raw.uni.push((name(*dart), leg.clone())),
            }
        }
        for e in 0..d.num_edges() {
            raw.edges.push((name(2 * e), name(2 * e + 1), d.label(e).cloned()));
        }
        raw
    }
}

pub(crate) fn parse_label_at(s: &str, line: usize, col: usize) -> Result<Label> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("h:") {
        let coeffs = rest
            .split(',')
            .map(|c| parse_rational(c.trim()).map_err(|_| Error::Parse { line, col, msg: format!("bad coefficient {c}") }))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse { line, col, msg: "empty series".into() });
        }
        let order = coeffs.len() - 1;
        return Ok(Label::Series(HSeries::from_coeffs(coeffs, order)));
    }
    let e = parse_ratio_expr_at(s, line, col)?;
    Ok(Label::over_delta(e.num, e.delta_pow))
}

pub(crate) fn parse_leg_spec(s: &str) -> Option<Leg> {
    let spec = s.rsplit_once('@').map_or(s, |(_, r)| r);
    match spec.split_once(':') {
        Some((comp, pos)) => {
            let pos: u32 = pos.parse().ok()?;
            is_ident(comp).then(|| Leg::on(comp, pos))
        }
        None => is_ident(spec).then(|| Leg::mark(spec)),
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn loc(&self, at: usize) -> (usize, usize) {
        let before = &self.src[..at];
        let line = before.matches('\n').count() + 1;
        let col = at - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.loc(self.pos);
        Error::Parse { line, col, msg: msg.into() }
    }

    fn skip(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip();
        let rest = &self.src[self.pos..];
        let n = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphanumeric() || c == '_' || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        if n == 0 || rest.as_bytes()[0].is_ascii_digit() {
            return Err(self.err("expected a name"));
        }
        self.pos += n;
        Ok(&rest[..n])
    }

    /// A token made of name characters plus `@` and `:`.
    fn leg_token(&mut self) -> Result<&'a str> {
        self.skip();
        let rest = &self.src[self.pos..];
        let n = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_' || c == '@' || c == ':'))
            .map_or(rest.len(), |(i, _)| i);
        if n == 0 {
            return Err(self.err("expected a leg mark"));
        }
        self.pos += n;
        Ok(&rest[..n])
    }

    fn diagram(&mut self) -> Result<Diagram> {
        let kw = self.ident()?;
        if kw != "diagram" {
            return Err(self.err("expected 'diagram'"));
        }
        self.expect('{')?;
        let mut raw = RawDiagram::default();
        while !self.eat('}') {
            let section = self.ident()?;
            self.expect(':')?;
            match section {
                "tri" => {
                    while !self.eat(';') {
                        self.ident()?;
                        self.expect('(')?;
                        let a = self.ident()?.to_string();
                        self.expect(',')?;
                        let b = self.ident()?.to_string();
                        self.expect(',')?;
                        let c = self.ident()?.to_string();
                        self.expect(')')?;
                        raw.tri.push([a, b, c]);
                    }
                }
                "uni" => {
                    while !self.eat(';') {
                        let n = self.ident()?.to_string();
                        self.expect('=')?;
                        let tok = self.leg_token()?;
                        let leg = parse_leg_spec(tok).ok_or_else(|| self.err(format!("bad leg spec {tok}")))?;
                        raw.uni.push((n, leg));
                    }
                }
                "edges" => {
                    while !self.eat(';') {
                        let a = self.ident()?.to_string();
                        self.expect('-')?;
                        let b = self.ident()?.to_string();
                        let mut label = None;
                        if self.eat('[') {
                            let start = self.pos;
                            let end = self.src[start..].find(']').ok_or_else(|| self.err("unclosed '['"))? + start;
                            let (line, col) = self.loc(start);
                            label = Some(parse_label_at(&self.src[start..end], line, col)?);
                            self.pos = end + 1;
                        }
                        raw.edges.push((a, b, label));
                    }
                }
                "skeleton" => {
                    let mut skel = Skeleton::default();
                    while !self.eat(';') {
                        let kind = self.ident()?;
                        self.expect('(')?;
                        let mut names = vec![];
                        if !self.eat(')') {
                            loop {
                                names.push(self.ident()?.to_string());
                                if self.eat(')') {
                                    break;
                                }
                                self.expect(',')?;
                            }
                        }
                        match kind {
                            "lines" => skel.lines.extend(names),
                            "circles" => skel.circles.extend(names),
                            _ => return Err(self.err("expected 'lines' or 'circles'")),
                        }
                    }
                    raw.skeleton = Some(skel);
                }
                other => return Err(self.err(format!("unknown section '{other}'"))),
            }
        }
        let (line, col) = self.loc(self.pos);
        raw.build().map_err(|e| match e {
            Error::Malformed(m) => Error::Parse { line, col, msg: m },
            e => e,
        })
    }
}

pub fn parse_diagram(s: &str) -> Result<Diagram> {
    let mut ds = parse_diagrams(s)?;
    if ds.len() != 1 {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("expected one diagram, found {}", ds.len()) });
    }
    Ok(ds.pop().unwrap())
}

/// Parses a sequence of `diagram { ... }` blocks.
pub fn parse_diagrams(s: &str) -> Result<Vec<Diagram>> {
    let mut sc = Scanner { src: s, pos: 0 };
    let mut out = vec![];
    while sc.peek().is_some() {
        out.push(sc.diagram()?);
    }
    Ok(out)
}

pub fn write_diagram(d: &Diagram) -> String {
    let raw = RawDiagram::from_diagram(d);
    let mut s = String::from("diagram {\n");
    let skel = d.skeleton();
    if !skel.is_marks() {
        let _ = writeln!(s, "  skeleton: lines({}) circles({});", skel.lines.join(","), skel.circles.join(","));
    }
    s.push_str("  tri:");
    for (i, [a, b, c]) in raw.tri.iter().enumerate() {
        let _ = write!(s, " v{i}({a},{b},{c})");
    }
    s.push_str(";\n  uni:");
    for (n, leg) in &raw.uni {
        match leg.pos {
            Some(p) => {
                let _ = write!(s, " {n}={}:{p}", leg.label);
            }
            None => {
                let _ = write!(s, " {n}={}", leg.label);
            }
        }
    }
    s.push_str(";\n  edges:");
    for (a, b, l) in &raw.edges {
        match l {
            Some(l) => {
                let _ = write!(s, " {a}-{b}[{l}]");
            }
            None => {
                let _ = write!(s, " {a}-{b}");
            }
        }
    }
    s.push_str(";\n}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentPoly;
    use crate::diagram::{canonicalize, shapes};

    #[test]
    fn parses_labeled_theta() {
        let d = parse_diagram("diagram { tri: v1(a,b,c) v2(d,e,f); uni: ; edges: a-d b-f[t] c-e[(t-1)/D]; }").unwrap();
        assert_eq!(d.num_tri(), 2);
        assert_eq!(d.label(1), Some(&Label::t_pow(1)));
        assert_eq!(d.label(2), Some(&Label::over_delta(LaurentPoly::from_ints(&[(0, -1), (1, 1)]), 1)));
        let plain = parse_diagram("diagram { tri: v1(a,b,c) v2(d,e,f); edges: a-d b-f c-e; }").unwrap();
        assert_eq!(canonicalize(&plain).unwrap().code, canonicalize(&shapes::theta()).unwrap().code);
    }

    #[test]
    fn attachments_infer_lines() {
        let d = parse_diagram("diagram { uni: p=x1@line1:0 q=line1:1; edges: p-q; }").unwrap();
        assert_eq!(d.skeleton().lines, vec!["line1".to_string()]);
        assert_eq!(d.degree(), 1);
    }

    #[test]
    fn roundtrip() {
        for d in [
            shapes::theta_labeled([Some(Label::t_pow(-1)), None, Some(Label::poly(LaurentPoly::u()))]),
            shapes::wheel(3, "h"),
            shapes::strut(Leg::mark("x"), Leg::mark("y"), Some(Label::Series(HSeries::one(2)).inverted())),
        ] {
            let s = write_diagram(&d);
            let back = parse_diagram(&s).unwrap();
            assert_eq!(canonicalize(&back).unwrap().code, canonicalize(&d).unwrap().code, "{s}");
        }
    }

    #[test]
    fn errors_have_positions() {
        match parse_diagram("diagram {\n  tri: v1(a,b c);\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_diagram("diagram { edges: a-b; }").is_err());
        assert!(parse_diagram("diagram { uni: a=h b=h; edges: a-b a-b; }").is_err());
        assert!(parse_diagram("diagram { uni: a=h b=h; edges: a-b[t+$]; }").is_err());
    }
}
