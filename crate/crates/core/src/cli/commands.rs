//! Command dispatch and reports.

use serde::Serialize;
use serde_json::{json, Value};

use super::document::{Format, Loaded, SCHEMA_VERSION};
use super::expr;
use crate::analysis::{
    box_too_small, center_upto, predicted_center_count, simplicity_verdict, structure_report, support_report,
    verify_center, CenterBasis, StructureKind, SupportReport,
};
use crate::cocycle::{axiom_check, TripleBounds};
use crate::hopf::{validate_hopf, CoproductCtx, Element, GroupData, Tensor2};
use crate::lie::{cybe_check, realization_violation, Derivation};
use crate::models::Model;
use crate::par::Exec;
use crate::scalars::ParamTable;
use crate::twisted::{Letter, Presentation, Rewriter, TwistedElement};

pub const DEFAULT_DEGREE: u32 = 4;
pub const DEFAULT_BOX: i32 = 4;
/// `check cocycle` is cubic in the number of monomials, so it defaults lower.
pub const DEFAULT_COCYCLE_DEGREE: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Failed,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::InputError => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Hopf,
    Cybe,
    Cocycle,
    Invariance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Present,
    Multiply(String, String),
    NormalForm(String),
    Center,
    Support,
    Simple,
    Structure,
    Check(CheckKind),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Validate => "validate".into(),
            Command::Present => "present".into(),
            Command::Multiply(..) => "multiply".into(),
            Command::NormalForm(_) => "normal-form".into(),
            Command::Center => "center".into(),
            Command::Support => "support".into(),
            Command::Simple => "simple".into(),
            Command::Structure => "structure".into(),
            Command::Check(k) => format!(
                "check {}",
                match k {
                    CheckKind::Hopf => "hopf",
                    CheckKind::Cybe => "cybe",
                    CheckKind::Cocycle => "cocycle",
                    CheckKind::Invariance => "invariance",
                }
            ),
        }
    }
}

/// Bounds for a run; `None` falls back to the document options, then to defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub degree: Option<u32>,
    pub torus_box: Option<i32>,
    pub exec: Exec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub status: Status,
    /// Full machine document including `schema_version`.
    pub machine: Value,
    pub text: String,
}

impl Report {
    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(&self.machine).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn report(cmd: &Command, model: &str, status: Status, result: Value, source: &[&str], text: String) -> Report {
    let machine = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cmd.name(),
        "model": model,
        "status": status,
        "result": result,
        "source": source,
    });
    Report { status, machine, text }
}

/// Report for input errors found before or during a command.
pub fn input_error(cmd: &str, message: &str) -> Report {
    let machine = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cmd,
        "status": Status::InputError,
        "error": message,
    });
    Report { status: Status::InputError, machine, text: format!("error: {message}") }
}

pub fn run_command(cmd: &Command, loaded: &Loaded, opts: &RunOptions) -> Report {
    let m = &loaded.model;
    let o = &loaded.document.options;
    let degree_or = |d| opts.degree.or(o.degree).unwrap_or(d);
    let degree = degree_or(DEFAULT_DEGREE);
    let torus_box = opts.torus_box.or(o.torus_box);
    let r = match cmd {
        Command::Validate => validate(cmd, m),
        Command::Present => present(cmd, m),
        Command::Multiply(a, b) => multiply(cmd, m, a, b),
        Command::NormalForm(w) => normal_form(cmd, m, w),
        Command::Center => center(cmd, m, degree, torus_box.unwrap_or(DEFAULT_BOX), opts.exec),
        Command::Support => support(cmd, m),
        Command::Simple | Command::Structure => {
            structure(cmd, m, degree, torus_box.unwrap_or(DEFAULT_BOX), opts.exec)
        }
        Command::Check(CheckKind::Hopf) => check_hopf(cmd, m),
        Command::Check(CheckKind::Cybe) => check_cybe(cmd, m),
        Command::Check(CheckKind::Cocycle) => {
            check_cocycle(cmd, m, degree_or(DEFAULT_COCYCLE_DEGREE), torus_box, opts.exec)
        }
        Command::Check(CheckKind::Invariance) => check_invariance(cmd, m),
    };
    r.unwrap_or_else(|e| input_error(&cmd.name(), &e))
}

type CmdResult = Result<Report, String>;

fn presentation(m: &Model) -> Result<Presentation, String> {
    Presentation::derive(&m.group, &m.cocycle).map_err(|e| e.to_string())
}

fn fmt_scalar(s: &crate::scalars::Scalar, params: &ParamTable) -> String {
    s.fmt_with(params)
}

fn validate(cmd: &Command, m: &Model) -> CmdResult {
    let g = &m.group;
    let mut problems: Vec<Value> = Vec::new();
    for f in validate_hopf(g, &m.params).failures {
        problems.push(json!({"kind": "hopf", "axiom": f.axiom, "at": f.generator, "witness": f.witness}));
    }
    if let Err(e) = m.cocycle.validate(g) {
        problems.push(json!({"kind": "cocycle", "witness": e.to_string()}));
    }
    for d in &m.derivations {
        if let Err(e) = d.verify_tag(g) {
            problems.push(json!({"kind": "derivation-tag", "at": d.name, "witness": e.to_string()}));
        }
    }
    if let Some(l) = &m.lie {
        if !l.is_antisymmetric() || !l.check_jacobi() {
            problems.push(json!({"kind": "lie", "witness": "bracket is not a Lie bracket"}));
        }
        if !m.derivations.is_empty() {
            match realization_violation(l, &m.derivations, g) {
                Ok(None) => {}
                Ok(Some((a, b))) => problems.push(json!({
                    "kind": "realization",
                    "at": format!("[{}, {}]", m.derivations[a].name, m.derivations[b].name),
                    "witness": "commutator of derivations differs from the bracket",
                })),
                Err(e) => problems.push(json!({"kind": "realization", "witness": e.to_string()})),
            }
        }
    }
    let status = if problems.is_empty() { Status::Ok } else { Status::Failed };
    let mut text = format!("{}: ", m.name);
    if problems.is_empty() {
        text.push_str("document is valid");
    } else {
        text.push_str(&format!("{} problem(s)", problems.len()));
        for p in &problems {
            let kind = p.get("axiom").or(p.get("kind")).and_then(Value::as_str).unwrap_or("");
            text.push_str(&format!("\n  {kind}: {}", p["witness"].as_str().unwrap_or("")));
            if let Some(at) = p.get("at").and_then(Value::as_str) {
                text.push_str(&format!(" (at {at})"));
            }
        }
    }
    Ok(report(
        cmd,
        &m.name,
        status,
        json!({"valid": problems.is_empty(), "problems": problems}),
        &["Hopf axioms on generators", "derivation tags", "bracket realization"],
        text,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub kind: &'static str,
    pub text: String,
}

/// Defining relations of the twisted algebra in normal-form words.
pub fn relations(p: &Presentation, params: &ParamTable) -> Vec<Relation> {
    let g = &p.group;
    let mut out = Vec::new();
    let tn = |i: usize| g.torus[i].clone();
    let zn = |j: usize| g.filtered[j].name.clone();
    for i in 0..p.k() {
        for j in i + 1..p.k() {
            let l = &p.lambda[i][j];
            let text = if l.is_one() {
                format!("{0}·{1} = {1}·{0}", tn(i), tn(j))
            } else {
                format!("{0}·{1} = {2}·{1}·{0}", tn(i), tn(j), paren(&fmt_scalar(l, params)))
            };
            out.push(Relation { kind: "torus", text });
        }
    }
    for i in 0..p.k() {
        for j in 0..p.m() {
            let c = &p.conj_minus[i][j];
            let text = if *c == TwistedElement::basis(g.z(j)) {
                format!("{0}·{1} = {1}·{0}", tn(i), zn(j))
            } else {
                format!("{0}·{1} = {2}·{0}", tn(i), zn(j), paren(&p.fmt(c, params)))
            };
            out.push(Relation { kind: "conjugation", text });
        }
    }
    for j in 0..p.m() {
        for l in j + 1..p.m() {
            let c = &p.comm[l][j];
            let text = if c.is_zero() {
                format!("{0}·{1} = {1}·{0}", zn(j), zn(l))
            } else {
                let lead_negative = c.leading().is_some_and(|(_, s)| fmt_scalar(s, params).starts_with('-'));
                if lead_negative {
                    format!("{0}·{1} − {1}·{0} = {2}", zn(j), zn(l), p.fmt(&c.neg(), params))
                } else {
                    format!("{0}·{1} − {1}·{0} = {2}", zn(l), zn(j), p.fmt(c, params))
                }
            };
            out.push(Relation { kind: "commutator", text });
        }
    }
    out
}

/// Brackets around a sum.
fn paren(s: &str) -> String {
    let mut depth = 0i32;
    let mut sum = false;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => sum = true,
            _ => {}
        }
    }
    if sum {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn present(cmd: &Command, m: &Model) -> CmdResult {
    let p = presentation(m)?;
    let rels = relations(&p, &m.params);
    let mut text = format!("{}: relations of the twisted algebra", m.name);
    for r in &rels {
        text.push_str(&format!("\n  {}", r.text));
    }
    if !(p.commutator_formula_holds && p.conjugation_formula_holds) {
        text.push_str("\n  warning: closed formulas disagree with twisted products");
    }
    Ok(report(
        cmd,
        &m.name,
        Status::Ok,
        json!({
            "relations": rels,
            "commutator_formula_holds": p.commutator_formula_holds,
            "conjugation_formula_holds": p.conjugation_formula_holds,
        }),
        &["λ_ij = R^J(x_i, x_j)", "conjugation by twisted products", "commutators via Q = J − J_21"],
        text,
    ))
}

/// A normal-form element written as a commutative expression: each monomial
/// is read as its ordered word.
fn parse_nf(text: &str, m: &Model) -> Result<TwistedElement, String> {
    let e: Element = expr::parse_element(text, &m.group, &m.params).map_err(|e| format!("`{text}`: {e}"))?;
    Ok(TwistedElement::from_terms(e.iter().map(|(w, c)| (w.clone(), c.clone()))))
}

/// Letters of a word such as `z·y·x^-1` or `y*x^2`.
pub fn parse_word(text: &str, g: &GroupData) -> Result<Vec<Letter>, String> {
    let t = text.trim();
    if t == "1" || t.is_empty() {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for factor in t.split(['·', '*']) {
        let f = factor.trim();
        let (name, power) = match f.split_once('^') {
            None => (f, 1i64),
            Some((n, e)) => {
                let e = e.trim().trim_start_matches('(').trim_end_matches(')');
                (n.trim(), e.parse::<i64>().map_err(|_| format!("bad exponent in `{f}`"))?)
            }
        };
        let letter = if let Some(i) = g.torus.iter().position(|v| v == name) {
            Letter::Torus { index: i, inverse: power < 0 }
        } else if let Some(j) = g.filtered.iter().position(|v| v.name == name) {
            if power < 0 {
                return Err(format!("`{name}` has no inverse"));
            }
            Letter::Filt(j)
        } else {
            return Err(format!("unknown name `{name}`"));
        };
        out.extend(std::iter::repeat_n(letter, power.unsigned_abs() as usize));
    }
    Ok(out)
}

fn multiply(cmd: &Command, m: &Model, a: &str, b: &str) -> CmdResult {
    let p = presentation(m)?;
    let (ea, eb) = (parse_nf(a, m)?, parse_nf(b, m)?);
    let rw = Rewriter::new(&p);
    let prod = rw.mul(&ea, &eb).map_err(|e| e.to_string())?;
    let s = p.fmt(&prod, &m.params);
    let text = format!("({}) · ({}) = {s}", p.fmt(&ea, &m.params), p.fmt(&eb, &m.params));
    Ok(report(
        cmd,
        &m.name,
        Status::Ok,
        json!({"left": p.fmt(&ea, &m.params), "right": p.fmt(&eb, &m.params), "product": s}),
        &["rewriting with the derived relations"],
        text,
    ))
}

fn normal_form(cmd: &Command, m: &Model, w: &str) -> CmdResult {
    let p = presentation(m)?;
    let ls = parse_word(w, &m.group)?;
    let nf = Rewriter::new(&p).normal_form(&ls).map_err(|e| e.to_string())?;
    let s = p.fmt(&nf, &m.params);
    Ok(report(
        cmd,
        &m.name,
        Status::Ok,
        json!({"word": w, "normal_form": s}),
        &["rewriting with the derived relations"],
        format!("{w} = {s}"),
    ))
}

fn center_lines(p: &Presentation, c: &CenterBasis, params: &ParamTable) -> Vec<String> {
    c.elements.iter().map(|e| p.fmt(e, params)).collect()
}

fn center(cmd: &Command, m: &Model, degree: u32, torus_box: i32, exec: Exec) -> CmdResult {
    let p = presentation(m)?;
    let c = center_upto(&p, degree, torus_box, exec).map_err(|e| e.to_string())?;
    let failures = verify_center(&m.group, &m.cocycle, &c.elements).map_err(|e| e.to_string())?;
    let s = support_report(m, &p).map_err(|e| e.to_string())?;
    let predicted = predicted_center_count(m, &s, degree, torus_box).map_err(|e| e.to_string())?;
    let basis = center_lines(&p, &c, &m.params);
    let only_constants = basis.len() == 1 && basis[0] == "1";
    let mut text = if only_constants {
        format!("center (degree ≤ {degree}): constants only")
    } else {
        format!("center (degree ≤ {degree}): {}", basis.join(", "))
    };
    text.push_str(&format!("\n  torus box [-{torus_box}, {torus_box}], {} words searched", c.searched));
    let mut warnings = Vec::new();
    if m.group.k() > 0 && box_too_small(&s, torus_box) {
        warnings.push(format!("Γ has generators outside the torus box [-{torus_box}, {torus_box}]"));
    }
    if let Some(n) = predicted {
        if n != c.elements.len() {
            warnings.push(format!("expected {n} elements from the support, found {}", c.elements.len()));
        }
    }
    for (i, gname) in &failures {
        warnings.push(format!("element {} does not commute with {gname}", basis[*i]));
    }
    for w in &warnings {
        text.push_str(&format!("\n  warning: {w}"));
    }
    let status = if failures.is_empty() { Status::Ok } else { Status::Failed };
    Ok(report(
        cmd,
        &m.name,
        status,
        json!({
            "degree": degree,
            "torus_box": torus_box,
            "searched": c.searched,
            "basis": basis,
            "verified": failures.is_empty(),
            "predicted_count": predicted,
            "warnings": warnings,
        }),
        &["nullspace of commutators with generators", "re-verified by twisted products"],
        text,
    ))
}

fn support_json(s: &SupportReport) -> Value {
    let ints = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    json!({
        "mode": s.mode,
        "invariant_factors": ints(&s.torus.factors),
        "gamma": s.torus.gamma.iter().map(|r| ints(r)).collect::<Vec<_>>(),
        "gamma_rank": s.torus.gamma_rank(),
        "dim_s": s.torus.dim_s(),
        "component_order": s.torus.component_order().to_string(),
        "dimV": s.unipotent.dim,
        "restricted_rank": s.unipotent.restricted_rank,
        "nondegenerate": s.unipotent.nondegenerate,
        "dim_h": s.dim_h,
        "dim_g": s.dim_g,
    })
}

fn support(cmd: &Command, m: &Model) -> CmdResult {
    let p = presentation(m)?;
    let s = support_report(m, &p).map_err(|e| e.to_string())?;
    let v = support_json(&s);
    let mut text = format!("{}: support", m.name);
    let factors: Vec<String> = s.torus.factors.iter().map(|x| x.to_string()).collect();
    text.push_str(&format!("\n  invariant factors of ℤ^{}/Γ: [{}]", s.torus.k(), factors.join(",")));
    let gamma: Vec<String> = s
        .torus
        .gamma
        .iter()
        .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    text.push_str(&format!("\n  Γ basis: {}", if gamma.is_empty() { "none".into() } else { gamma.join(" ") }));
    text.push_str(&format!("\n  dim S = {}, |S/S⁰| = {}", s.torus.dim_s(), s.torus.component_order()));
    text.push_str(&format!(
        "\n  dim V = {} (restricted form rank {}), dim H = {} of dim G = {}",
        s.unipotent.dim, s.unipotent.restricted_rank, s.dim_h, s.dim_g
    ));
    Ok(report(
        cmd,
        &m.name,
        Status::Ok,
        v,
        &["Smith normal form of the commutation lattice", "span of r and the torus annihilator"],
        text,
    ))
}

fn structure(cmd: &Command, m: &Model, degree: u32, torus_box: i32, exec: Exec) -> CmdResult {
    let p = presentation(m)?;
    let s = support_report(m, &p).map_err(|e| e.to_string())?;
    let c = center_upto(&p, degree, torus_box, exec).map_err(|e| e.to_string())?;
    let basis = center_lines(&p, &c, &m.params);
    if *cmd == Command::Simple {
        let v = simplicity_verdict(&s, &c);
        let mut text = format!("{}: {}", m.name, v.verdict.as_str());
        for j in &v.justification {
            text.push_str(&format!("\n  {j}"));
        }
        return Ok(report(
            cmd,
            &m.name,
            Status::Ok,
            json!({
                "verdict": v.verdict,
                "gamma_rank": v.gamma_rank,
                "dimV": v.dim_v,
                "center_box": basis,
            }),
            &["support criterion", "center search in the box"],
            text,
        ));
    }
    let r = structure_report(&p, &m.params, &s, &c);
    let mut details = json!({});
    match &r.kind {
        StructureKind::QuantumTorus { lambda } => {
            details = json!({"lambda": lambda.iter().map(|row| row.iter().map(|x| fmt_scalar(x, &m.params)).collect::<Vec<_>>()).collect::<Vec<_>>()});
        }
        StructureKind::WeylTensorPoly { pairs, center_vars } => {
            details = json!({"pairs": pairs, "center_vars": center_vars});
        }
        StructureKind::CrossedProduct { pairs, quotient_dim } => {
            details = json!({"pairs": pairs, "quotient_dim": quotient_dim});
        }
        StructureKind::Undetermined { reason } => {
            details["reason"] = json!(reason);
        }
    }
    let text = format!(
        "{}: {}\n  verdict: {}\n  center (degree ≤ {degree}): {}",
        m.name,
        r.kind.describe(),
        r.simplicity.verdict.as_str(),
        basis.join(", ")
    );
    Ok(report(
        cmd,
        &m.name,
        Status::Ok,
        json!({
            "kind": r.kind.tag(),
            "description": r.kind.describe(),
            "details": details,
            "verdict": r.simplicity.verdict,
        }),
        &["constant commutators give a Weyl algebra", "torus part gives a crossed product"],
        text,
    ))
}

fn check_hopf(cmd: &Command, m: &Model) -> CmdResult {
    let rep = validate_hopf(&m.group, &m.params);
    let status = if rep.is_valid() { Status::Ok } else { Status::Failed };
    let mut text = format!("{}: Hopf axioms {}", m.name, if rep.is_valid() { "hold" } else { "fail" });
    for f in &rep.failures {
        text.push_str(&format!("\n  {:?} at {}: {}", f.axiom, f.generator, f.witness));
    }
    Ok(report(
        cmd,
        &m.name,
        status,
        json!({"holds": rep.is_valid(), "failures": rep.failures}),
        &["counit, coassociativity and filtration on generators"],
        text,
    ))
}

fn check_cybe(cmd: &Command, m: &Model) -> CmdResult {
    let l = m.lie.as_ref().ok_or("document has no lie section")?;
    let r = m.r.as_ref().ok_or("document has no bivector r")?;
    let rep = cybe_check(l, r);
    let names = &l.basis;
    let witness: Vec<Value> = rep
        .violation
        .iter()
        .map(|((a, b, c), s)| json!({"at": [names[*a], names[*b], names[*c]], "coefficient": fmt_scalar(s, &m.params)}))
        .collect();
    let status = if rep.holds { Status::Ok } else { Status::Failed };
    let mut text = format!("{}: CYBE {}", m.name, if rep.holds { "holds" } else { "fails" });
    for w in &witness {
        text.push_str(&format!("\n  coefficient at {} = {}", w["at"], w["coefficient"].as_str().unwrap_or("")));
    }
    Ok(report(
        cmd,
        &m.name,
        status,
        json!({"holds": rep.holds, "violations": witness}),
        &["[r12,r13] + [r12,r23] + [r13,r23] on basis triples"],
        text,
    ))
}

/// Without a box, arguments are the monomials of total degree at most `degree`.
fn check_cocycle(cmd: &Command, m: &Model, degree: u32, torus_box: Option<i32>, exec: Exec) -> CmdResult {
    let bounds = match torus_box {
        Some(b) => TripleBounds { total_degree: Some(degree), ..TripleBounds::new(b.min(degree as i32), degree) },
        None => TripleBounds::total(degree),
    };
    let torus_box = bounds.torus_box;
    let rep = axiom_check(&m.group, &m.cocycle, &bounds, exec).map_err(|e| e.to_string())?;
    let g = &m.group;
    let violations: Vec<Value> = rep
        .violations
        .iter()
        .take(10)
        .map(|v| {
            json!({
                "kind": format!("{:?}", v.kind),
                "arguments": v.arguments.iter().map(|a| g.fmt_monomial(a)).collect::<Vec<_>>(),
                "lhs": fmt_scalar(&v.lhs, &m.params),
                "rhs": fmt_scalar(&v.rhs, &m.params),
            })
        })
        .collect();
    let status = if rep.holds() { Status::Ok } else { Status::Failed };
    let mut text = format!(
        "{}: cocycle identity {} on {} triples (degree ≤ {degree}, torus box [-{torus_box}, {torus_box}])",
        m.name,
        if rep.holds() { "holds" } else { "fails" },
        rep.checked
    );
    for v in &violations {
        text.push_str(&format!("\n  {} at {}: {} ≠ {}", v["kind"].as_str().unwrap_or(""), v["arguments"], v["lhs"], v["rhs"]));
    }
    Ok(report(
        cmd,
        &m.name,
        status,
        json!({
            "holds": rep.holds(),
            "checked": rep.checked,
            "degree": degree,
            "torus_box": torus_box,
            "violations": violations,
        }),
        &["normalization and the 2-cocycle identity on monomial triples"],
        text,
    ))
}

/// First generator where `Δ∘D ≠ (D⊗id)∘Δ`, if any.
pub fn right_invariance_violation(d: &Derivation, g: &GroupData) -> Option<String> {
    let ctx = CoproductCtx::new(g);
    let names = g.generator_names();
    for (i, gen) in g.generators().iter().enumerate() {
        let lhs = ctx.element(&d.apply_monomial(g, gen));
        let mut rhs = Tensor2::zero();
        for ((a, b), c) in ctx.monomial(gen).iter() {
            for (mm, x) in d.apply_monomial(g, a).iter() {
                rhs.add_term((mm.clone(), b.clone()), c.mul(x));
            }
        }
        if lhs != rhs {
            return Some(names[i].clone());
        }
    }
    None
}

fn check_invariance(cmd: &Command, m: &Model) -> CmdResult {
    if m.derivations.is_empty() {
        return Err("document has no derivations".into());
    }
    let g = &m.group;
    let rows: Vec<(String, Option<String>, Option<String>)> = m
        .derivations
        .iter()
        .map(|d| (d.name.clone(), d.left_invariance_violation(g), right_invariance_violation(d, g)))
        .collect();
    let all_left = rows.iter().all(|r| r.1.is_none());
    let all_right = rows.iter().all(|r| r.2.is_none());
    let side = if all_left {
        "left"
    } else if all_right {
        "right"
    } else {
        "none"
    };
    let holds = all_left || all_right;
    let mut text = format!("{}: derivations are {}", m.name, if holds { format!("{side}-invariant") } else { "not invariant on one side".into() });
    let items: Vec<Value> = rows
        .iter()
        .map(|(n, l, r)| {
            if !holds {
                text.push_str(&format!(
                    "\n  {n}: left {}, right {}",
                    l.as_deref().map_or("ok".into(), |x| format!("fails at {x}")),
                    r.as_deref().map_or("ok".into(), |x| format!("fails at {x}"))
                ));
            }
            json!({"derivation": n, "left_violation": l, "right_violation": r})
        })
        .collect();
    Ok(report(
        cmd,
        &m.name,
        if holds { Status::Ok } else { Status::Failed },
        json!({"holds": holds, "side": side, "derivations": items}),
        &["Δ∘D against (id⊗D)∘Δ and (D⊗id)∘Δ on generators"],
        text,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::document::{builtin_document, load};

    fn run(name: &str, cmd: Command) -> Report {
        let l = load(builtin_document(name).unwrap()).unwrap();
        run_command(&cmd, &l, &RunOptions::default())
    }

    fn rel_texts(r: &Report) -> Vec<String> {
        r.machine["result"]["relations"].as_array().unwrap().iter().map(|x| x["text"].as_str().unwrap().to_string()).collect()
    }

    #[test]
    fn moyal_presentation() {
        let r = run("moyal", Command::Present);
        assert_eq!(rel_texts(&r), vec!["x·y − y·x = 1"]);
    }

    #[test]
    fn heisenberg_presentation_and_center() {
        let r = run("heisenberg", Command::Present);
        let t = rel_texts(&r);
        assert!(t.contains(&"z·y − y·z = 1".to_string()), "{t:?}");
        assert!(t.contains(&"x·z = z·x".to_string()));
        assert!(t.contains(&"x·y = y·x".to_string()));
        let r = run("heisenberg", Command::Center);
        assert_eq!(r.text.lines().next().unwrap(), "center (degree ≤ 4): 1, x, x^2, x^3, x^4");
    }

    #[test]
    fn constants_only_text() {
        let l = load(builtin_document("moyal").unwrap()).unwrap();
        let r = run_command(&Command::Center, &l, &RunOptions { degree: Some(6), ..Default::default() });
        assert!(r.text.starts_with("center (degree ≤ 6): constants only"));
    }

    #[test]
    fn simple_machine_fields() {
        let r = run("quantum-torus", Command::Simple);
        let res = r.machine["result"].as_object().unwrap();
        let keys: Vec<&String> = res.keys().collect();
        assert_eq!(keys, vec!["center_box", "dimV", "gamma_rank", "verdict"]);
        assert_eq!(res["verdict"], "simple");
    }

    #[test]
    fn words_and_products() {
        let r = run("heisenberg", Command::NormalForm("z·y".into()));
        assert_eq!(r.machine["result"]["normal_form"], "y·z + 1");
        let r = run("moyal", Command::Multiply("y".into(), "x".into()));
        assert_eq!(r.machine["result"]["product"], "x·y - 1");
        let r = run("moyal", Command::NormalForm("x·w".into()));
        assert_eq!(r.status, Status::InputError);
    }

    #[test]
    fn checks() {
        assert_eq!(run("heisenberg", Command::Check(CheckKind::Cybe)).status, Status::Ok);
        assert_eq!(run("borel", Command::Check(CheckKind::Invariance)).status, Status::Ok);
        assert_eq!(run("heisenberg-corrupted", Command::Check(CheckKind::Hopf)).status, Status::Failed);
        assert_eq!(run("quantum-torus-root3", Command::Check(CheckKind::Cybe)).status, Status::InputError);
    }

    #[test]
    fn root3_support_factors() {
        let r = run("quantum-torus-root3", Command::Support);
        assert_eq!(r.machine["result"]["invariant_factors"], json!(["3", "3"]));
    }
}
