use std::ops::RangeInclusive;
use std::path::Path;

use serde_json::{json, Value};

use jacobi::aarhus::{aarhus_integral, clasper_difference, loop_project, GaussianPart, StrutLabels};
use jacobi::algebra::{format_rational, parse_rational, rat, Rational};
use jacobi::diagram::{canonicalize, parse_diagrams, write_diagram, Diagram, DiagramJson, LinearCombo};
use jacobi::linking::{appendix_b_certificate, build_surgery_matrix, invert_over_delta, q_support, EqLinkingMatrix, TangleLinkingData};
use jacobi::sl2::{nonvanishing_certificate, sl2_brute, sl2_weight, sl2_weight_combo, CasimirPoly};
use jacobi::spaces::{quotient_basis, SpaceId};
use jacobi::tables::{
    build_thetas, closed_form_p, closed_form_q, closed_form_r, crude_bound, legless_count, solve_two_loop, theta_mn_count,
    xset_3loop, TwoLoopContext,
};
use jacobi::Error;

use crate::report::{RunReport, Table};

/// How a run ended, mapped onto exit codes 1 to 3.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge(_) | Error::InsufficientNu(_) => Failure::Resource(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

pub type Outcome<T> = Result<T, Failure>;

/// Settings shared by every subcommand.
pub struct Ctx {
    pub command: Vec<String>,
    pub seed: u64,
    pub truncate: usize,
    pub max_vertices: usize,
}

impl Ctx {
    pub fn report(&self) -> RunReport {
        RunReport::new(&self.command, self.seed)
    }

    fn check_size(&self, ds: &[Diagram], what: &str) -> Outcome<()> {
        match ds.iter().map(|d| d.vertices().len()).max() {
            Some(v) if v > self.max_vertices => {
                Err(Failure::Resource(format!("{what} has a diagram with {v} vertices; --max-vertices is {}", self.max_vertices)))
            }
            _ => Ok(()),
        }
    }

    fn check_degree(&self, degree: usize) -> Outcome<()> {
        if 2 * degree > self.max_vertices {
            return Err(Failure::Resource(format!(
                "degree {degree} needs {} vertices; --max-vertices is {}",
                2 * degree,
                self.max_vertices
            )));
        }
        Ok(())
    }
}

fn read(path: &Path, report: &mut RunReport) -> Outcome<String> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    report.digest(&path.display().to_string(), text.as_bytes());
    Ok(text)
}

fn located(path: &Path, e: Error) -> Failure {
    match e {
        Error::Parse { line, col, msg } => Failure::Input(format!("{}:{line}:{col}: {msg}", path.display())),
        e => Failure::Input(format!("{}: {e}", path.display())),
    }
}

/// Diagrams from a text file, or from a JSON file holding one diagram or a list.
pub fn read_diagrams(path: &Path, report: &mut RunReport) -> Outcome<Vec<Diagram>> {
    let text = read(path, report)?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    if !is_json {
        return parse_diagrams(&text).map_err(|e| located(path, e));
    }
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| located(path, Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() }))?;
    let items = match v {
        Value::Array(xs) => xs,
        v => vec![v],
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let j: DiagramJson = serde_json::from_value(x).map_err(|e| Failure::Input(format!("{}: entry {i}: {e}", path.display())))?;
            j.to_diagram().map_err(|e| Failure::Input(format!("{}: entry {i}: {e}", path.display())))
        })
        .collect()
}

fn sum(ds: &[Diagram]) -> Outcome<LinearCombo> {
    let mut c = LinearCombo::new();
    for d in ds {
        c.add(d, &rat(1, 1))?;
    }
    Ok(c)
}

fn one_line(d: &Diagram) -> String {
    write_diagram(d).split_whitespace().collect::<Vec<_>>().join(" ")
}

fn q(x: &Rational) -> String {
    format_rational(x)
}

fn space(s: &str, degree: usize) -> Outcome<SpaceId> {
    let mut id: SpaceId = s.parse()?;
    id.degree = degree;
    Ok(id)
}

pub fn reduce(ctx: &Ctx, file: &Path, space_name: &str, degree: usize) -> Outcome<RunReport> {
    let mut r = ctx.report();
    let ds = read_diagrams(file, &mut r)?;
    ctx.check_size(&ds, &file.display().to_string())?;
    ctx.check_degree(degree)?;
    let id = space(space_name, degree)?;
    let basis = quotient_basis(&id)?;
    let coords = basis.coords(&sum(&ds)?)?;
    let mut degrees = vec![];
    for b in &basis.blocks {
        degrees.extend(std::iter::repeat_n(b.degree, b.dim()));
    }
    r.table = Table::new(&["n", "degree", "value"]);
    for (i, (c, d)) in coords.iter().zip(&degrees).enumerate() {
        r.table.push([i.to_string(), d.to_string(), q(c)]);
    }
    r.outputs = json!({
        "space": id.to_string(),
        "degree": degree,
        "dims": basis.dims(),
        "coords": coords.iter().map(q).collect::<Vec<_>>(),
    });
    Ok(r)
}

pub fn spaces_dump(ctx: &Ctx, space_name: &str, degree: usize) -> Outcome<RunReport> {
    ctx.check_degree(degree)?;
    let mut r = ctx.report();
    let id = space(space_name, degree)?;
    let basis = quotient_basis(&id)?;
    r.table = Table::new(&["n", "degree", "diagram"]);
    let mut elems = vec![];
    let mut n = 0;
    for b in &basis.blocks {
        for d in b.basis_diagrams() {
            r.table.push([n.to_string(), b.degree.to_string(), one_line(d)]);
            elems.push(json!({ "n": n, "degree": b.degree, "diagram": d.to_json() }));
            n += 1;
        }
    }
    r.outputs = json!({ "space": id.to_string(), "degree": degree, "dims": basis.dims(), "basis": elems });
    Ok(r)
}

fn matrix(name: &str, text: &str, r: &mut RunReport) -> Outcome<Vec<Vec<i64>>> {
    r.digest(name, text.as_bytes());
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("--{name}: expected an integer matrix like [[0,1],[1,0]]: {e}")))
}

fn surgery_matrix(u: Vec<Vec<i64>>, v: Vec<Vec<i64>>, w: Vec<Vec<i64>>, g: Option<usize>) -> Outcome<EqLinkingMatrix> {
    let data = TangleLinkingData::new(u, v, w)?;
    if let Some(g) = g {
        if data.genus() != g {
            return Err(Failure::Input(format!("--g {g} does not match {}x{} blocks", data.genus(), data.genus())));
        }
    }
    Ok(build_surgery_matrix(&data)?)
}

pub fn linking_invert(ctx: &Ctx, g: Option<usize>, u: &str, v: &str, w: &str) -> Outcome<RunReport> {
    let mut r = ctx.report();
    let (u, v, w) = (matrix("U", u, &mut r)?, matrix("V", v, &mut r)?, matrix("W", w, &mut r)?);
    let m = surgery_matrix(u, v, w, g)?;
    let inv = invert_over_delta(&m)?;
    let cert = appendix_b_certificate(&m)?;
    let support = q_support(&inv);
    let genus = m.genus() as i64;
    let qm: Vec<Vec<String>> = inv.q.iter().map(|row| row.iter().map(|p| p.to_string()).collect()).collect();
    r.table = Table::new(&["name", "value"]);
    r.table.push(["delta".to_string(), inv.delta.poly().to_string()]);
    for (i, row) in qm.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            r.table.push([format!("q[{i}][{j}]"), p.clone()]);
        }
    }
    r.table.push(["r".to_string(), q(&cert.r)]);
    r.check("inverse-column identity", cert.lgg_identity, "l^{3g+1,2g+1} = -(t-1) l^{1,2g+1}");
    r.check("value at t = 1", cert.value_at_1 == rat(1, 1), q(&cert.value_at_1));
    let leading_ok = cert.leading == [rat(-1, 1), rat(1, 1)];
    r.check("leading coefficients", leading_ok, format!("{}, {}", q(&cert.leading[0]), q(&cert.leading[1])));
    r.check("r in 1/2 + Z", cert.r_half_integer && cert.r == cert.r_transposed, format!("r = {}, transposed {}", q(&cert.r), q(&cert.r_transposed)));
    r.check("Q support within [-g, g]", support <= genus, format!("max |k| = {support}"));
    r.outputs = json!({
        "genus": m.genus(),
        "delta": inv.delta.poly().to_string(),
        "delta_u": inv.delta.u_coeffs().iter().map(q).collect::<Vec<_>>(),
        "q": qm,
        "q_support": support,
        "certificate": {
            "lgg_identity": cert.lgg_identity,
            "value_at_1": q(&cert.value_at_1),
            "leading": cert.leading.iter().map(q).collect::<Vec<_>>(),
            "r": q(&cert.r),
            "r_transposed": q(&cert.r_transposed),
            "r_half_integer": cert.r_half_integer,
        },
    });
    Ok(r)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkingFile {
    #[serde(rename = "U")]
    u: Vec<Vec<i64>>,
    #[serde(rename = "V")]
    v: Vec<Vec<i64>>,
    #[serde(rename = "W")]
    w: Vec<Vec<i64>>,
}

fn read_linking(path: &Path, r: &mut RunReport) -> Outcome<EqLinkingMatrix> {
    let text = read(path, r)?;
    let f: LinkingFile = serde_json::from_str(&text)
        .map_err(|e| located(path, Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() }))?;
    surgery_matrix(f.u, f.v, f.w, None)
}

fn terms_json(c: &LinearCombo) -> Vec<Value> {
    c.iter()
        .map(|(_, d, x)| json!({ "coeff": q(x), "degree": d.degree(), "loops": d.loop_number(), "diagram": one_line(d) }))
        .collect()
}

fn terms_table(c: &LinearCombo) -> Table {
    let mut t = Table::new(&["n", "degree", "loops", "value", "diagram"]);
    for (i, (_, d, x)) in c.iter().enumerate() {
        t.push([i.to_string(), d.degree().to_string(), d.loop_number().to_string(), q(x), one_line(d)]);
    }
    t
}

pub fn aarhus_integrate(ctx: &Ctx, linking: &Path, p: &Path, loops: Option<usize>) -> Outcome<RunReport> {
    let mut r = ctx.report();
    let m = read_linking(linking, &mut r)?;
    let ds = read_diagrams(p, &mut r)?;
    ctx.check_size(&ds, &p.display().to_string())?;
    let inv = invert_over_delta(&m)?;
    let gp = GaussianPart::from_inverse(&inv, StrutLabels::Series { order: ctx.truncate })?;
    let mut out = aarhus_integral(&sum(&ds)?, &gp, ctx.truncate)?;
    if let Some(n) = loops {
        out = loop_project(&out, n);
    }
    r.table = terms_table(&out);
    r.outputs = json!({
        "delta": inv.delta.poly().to_string(),
        "truncate": ctx.truncate,
        "loop": loops,
        "terms": terms_json(&out),
    });
    Ok(r)
}

pub fn aarhus_clasper(ctx: &Ctx, linking: &Path, clasper: &Path) -> Outcome<RunReport> {
    let mut r = ctx.report();
    let m = read_linking(linking, &mut r)?;
    let ds = read_diagrams(clasper, &mut r)?;
    ctx.check_size(&ds, &clasper.display().to_string())?;
    let [d] = ds.as_slice() else {
        return Err(Failure::Input(format!("{}: expected exactly one clasper diagram", clasper.display())));
    };
    let cd = clasper_difference(&m, d, ctx.truncate)?;
    let lc = &cd.leading_coefficient;
    let certified = nonvanishing_certificate(&cd.leading.scale(lc));
    r.check("r in 1/2 + Z", cd.certificate.r_half_integer, format!("r = {}", q(&cd.r)));
    r.check("leading coefficient is +-r", lc * lc == &cd.r * &cd.r, q(lc).to_string());
    r.check("sl2 certifies the leading term", certified, "");
    r.table = Table::new(&["name", "value"]);
    r.table.push(["r".to_string(), q(&cd.r)]);
    r.table.push(["leading_coefficient".to_string(), q(lc)]);
    r.table.push(["terms".to_string(), cd.delta.len().to_string()]);
    r.outputs = json!({
        "r": q(&cd.r),
        "leading_coefficient": q(lc),
        "leading": terms_json(&cd.leading),
        "delta": terms_json(&cd.delta),
        "certificate_holds": cd.certificate.holds(),
    });
    Ok(r)
}

pub fn weights_sl2(ctx: &Ctx, file: &Path, oracle: bool) -> Outcome<RunReport> {
    let mut r = ctx.report();
    let ds = read_diagrams(file, &mut r)?;
    ctx.check_size(&ds, &file.display().to_string())?;
    let by_degree = sl2_weight_combo(&sum(&ds)?)?;
    r.table = Table::new(&["n", "degree", "value"]);
    let mut rows = vec![];
    for (i, d) in ds.iter().enumerate() {
        let w = sl2_weight(d)?;
        if oracle {
            let b = sl2_brute(d)?;
            r.check(format!("diagram {i} oracle"), w == b, b.to_string());
        }
        r.table.push([i.to_string(), d.degree().to_string(), w.to_string()]);
        rows.push(json!({ "n": i, "degree": d.degree(), "weight": poly_json(&w) }));
    }
    let total: Vec<Value> = by_degree.iter().map(|(deg, w)| json!({ "degree": deg, "weight": poly_json(w) })).collect();
    r.outputs = json!({ "diagrams": rows, "sum": total });
    Ok(r)
}

fn poly_json(w: &CasimirPoly) -> Value {
    json!({ "coeffs": w.coeffs.iter().map(q).collect::<Vec<_>>(), "text": w.to_string() })
}

pub fn two_loop(ctx: &Ctx, a: i64, b1: &str, b2: &str) -> Outcome<RunReport> {
    let mut r = ctx.report();
    let (x1, x2) = (parse_rational(b1)?, parse_rational(b2)?);
    let ctx2 = TwoLoopContext::new()?;
    let tl = build_thetas(&ctx2, a)?;
    let s = solve_two_loop(&tl, &x1, &x2)?;
    let (p, qq, rr) = (closed_form_p(a, &x1, &x2), closed_form_q(a, &x1, &x2), closed_form_r(a, &x1, &x2));
    let det = tl.independence_det();
    r.check("p matches the closed form", s.p == p, q(&p));
    r.check("q matches the closed form", s.q == qq, q(&qq));
    r.check("determinant is 16a/3 - 4/3", det == rat(16 * a - 4, 3), q(&det));
    r.table = Table::new(&["a", "b1", "b2", "name", "value"]);
    for (name, v) in [("p", &s.p), ("q", &s.q), ("correction", &rr), ("det", &det)] {
        r.table.push([a.to_string(), q(&x1), q(&x2), name.to_string(), q(v)]);
    }
    r.outputs = json!({
        "a": a, "b1": q(&x1), "b2": q(&x2),
        "p": q(&s.p), "q": q(&s.q), "correction": q(&rr), "det": q(&det),
        "coords": tl.coeffs.iter().map(|c| c.iter().map(q).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(r)
}

pub fn theta_count(ctx: &Ctx, gs: RangeInclusive<usize>) -> Outcome<RunReport> {
    let mut r = ctx.report();
    r.table = Table::new(&["g", "value"]);
    let mut rows = vec![];
    for g in gs {
        let c = theta_mn_count(g);
        r.check(format!("g = {g}"), c == g * g + 2 * g, format!("{c}"));
        r.table.push([g, c]);
        rows.push(json!({ "g": g, "value": c }));
    }
    r.outputs = Value::Array(rows);
    Ok(r)
}

pub fn xset(ctx: &Ctx) -> Outcome<RunReport> {
    let mut r = ctx.report();
    let ds = xset_3loop()?;
    let mut codes = std::collections::BTreeSet::new();
    r.table = Table::new(&["n", "loops", "degree", "diagram"]);
    let mut rows = vec![];
    for (i, d) in ds.iter().enumerate() {
        codes.insert(canonicalize(d)?.code);
        r.table.push([i.to_string(), d.loop_number().to_string(), d.degree().to_string(), one_line(d)]);
        rows.push(json!({ "n": i, "loops": d.loop_number(), "diagram": d.to_json() }));
    }
    r.check("11 elements", ds.len() == 11, ds.len().to_string());
    r.check("all three-loop", ds.iter().all(|d| d.loop_number() == 3), "");
    r.check("distinct", codes.len() == ds.len(), format!("{} canonical codes", codes.len()));
    r.outputs = Value::Array(rows);
    Ok(r)
}

pub fn crude_bounds(ctx: &Ctx, n: usize, gs: RangeInclusive<usize>) -> Outcome<RunReport> {
    let mut r = ctx.report();
    let m = legless_count(n)?;
    r.table = Table::new(&["n", "g", "m", "value"]);
    let mut rows = vec![];
    for g in gs {
        let v = crude_bound(n, g)?;
        r.table.push([n.to_string(), g.to_string(), m.to_string(), v.to_string()]);
        rows.push(json!({ "n": n, "g": g, "m": m, "value": v.to_string() }));
    }
    r.outputs = Value::Array(rows);
    Ok(r)
}
