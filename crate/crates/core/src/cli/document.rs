//! JSON input documents and their translation to a [`Model`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{self, ExprError};
use crate::cocycle::{Cocycle, ExpBivector, ExplicitSeries, FamilyKind, OperatorFamily, Side};
use crate::hopf::{Element, FilteredVar, GroupData, Mode};
use crate::lie::{Bivector, Derivation, DerivationTag, LieAlgebra};
use crate::models::Model;
use crate::scalars::{ExpUnit, ParamTable};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unknown name `{name}`")]
    UnknownName { line: usize, column: usize, name: String },
    #[error("{line}:{column}: schema error: {message}")]
    Schema { line: usize, column: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub params: ParamTable,
    pub group: GroupDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie: Option<LieDoc>,
    pub cocycle: CocycleDoc,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub mode: Mode,
    #[serde(default)]
    pub torus: Vec<String>,
    #[serde(default)]
    pub filtered: Vec<FilteredDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilteredDoc {
    pub name: String,
    pub degree: u32,
    /// Terms `P'⊗P''` of `Δ(z) − z⊗1 − 1⊗z`.
    #[serde(default)]
    pub coproduct: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieDoc {
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    /// One per basis element, in basis order.
    #[serde(default)]
    pub derivations: Vec<DerivationDoc>,
    /// Terms `c · a∧b` written `[a, b, c]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<[String; 3]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationDoc {
    pub name: String,
    pub tag: DerivationTag,
    /// Images of generators; missing generators map to 0.
    #[serde(default)]
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CocycleDoc {
    Trivial,
    Bicharacter { matrix: Vec<Vec<String>> },
    /// Uses `lie.r` and `lie.derivations`.
    ExpBivector { scale: String },
    Series { coefficient: String, left: FamilyDoc, right: FamilyDoc, terminates: SideDoc },
    Convolution { factors: Vec<CocycleDoc> },
    Inverse { inner: Box<CocycleDoc> },
    Transposed { inner: Box<CocycleDoc> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub derivation: String,
    pub family: FamilyKindDoc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKindDoc {
    Power,
    Falling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideDoc {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_box: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl Options {
    pub fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

/// A parsed document together with the model it describes.
#[derive(Clone, Debug, PartialEq)]
pub struct Loaded {
    pub document: Document,
    pub model: Model,
}

/// 1-based line and column of character `offset` inside the first JSON
/// string literal equal to `s`; `(0, 0)` if it cannot be found.
fn locate(text: &str, s: &str, offset: usize) -> (usize, usize) {
    let quoted = serde_json::to_string(s).unwrap_or_default();
    let Some(pos) = text.find(&quoted) else { return (0, 0) };
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 2 + offset;
    (line, col)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn expr_err(&self, s: &str, e: ExprError) -> DocError {
        let (line, column) = locate(self.text, s, e.offset());
        match e {
            ExprError::Syntax { message, .. } => DocError::Syntax { line, column, message },
            ExprError::UnknownName { name, .. } => DocError::UnknownName { line, column, name },
            ExprError::Invalid { message, .. } => DocError::Schema { line, column, message },
        }
    }

    fn schema(&self, near: &str, message: impl Into<String>) -> DocError {
        let (line, column) = locate(self.text, near, 0);
        DocError::Schema { line, column, message: message.into() }
    }

    fn unknown(&self, name: &str) -> DocError {
        let (line, column) = locate(self.text, name, 0);
        DocError::UnknownName { line, column, name: name.into() }
    }
}

pub fn parse_document(text: &str) -> Result<Document, DocError> {
    load(text).map(|l| l.document)
}

pub fn load(text: &str) -> Result<Loaded, DocError> {
    let document: Document = serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let (line, column) = (e.line(), e.column());
        if e.is_syntax() || e.is_eof() {
            DocError::Syntax { line, column, message }
        } else {
            DocError::Schema { line, column, message }
        }
    })?;
    let model = build(&document, &Ctx { text })?;
    Ok(Loaded { document, model })
}

pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn build(doc: &Document, cx: &Ctx<'_>) -> Result<Model, DocError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(cx.schema("schema_version", format!("unsupported schema_version {}", doc.schema_version)));
    }
    let params = doc.params.clone();
    let mut seen: Vec<&String> = Vec::new();
    let lie_names = doc.lie.iter().flat_map(|l| &l.basis);
    for name in params.generic.iter().chain(&doc.group.torus).chain(doc.group.filtered.iter().map(|f| &f.name)).chain(lie_names) {
        if seen.contains(&name) || name == "exp" || name == "zeta" {
            return Err(cx.schema(name, format!("name `{name}` is declared twice or reserved")));
        }
        seen.push(name);
    }
    let mut group = GroupData {
        mode: doc.group.mode,
        torus: doc.group.torus.clone(),
        filtered: doc
            .group
            .filtered
            .iter()
            .map(|f| FilteredVar { name: f.name.clone(), degree: f.degree, correction: vec![] })
            .collect(),
    };
    let elem = |s: &str, g: &GroupData| expr::parse_element(s, g, &params).map_err(|e| cx.expr_err(s, e));
    for (j, f) in doc.group.filtered.iter().enumerate() {
        let mut corr = Vec::new();
        for [a, b] in &f.coproduct {
            corr.push((elem(a, &group)?, elem(b, &group)?));
        }
        group.filtered[j].correction = corr;
    }
    let (lie, derivations, r) = match &doc.lie {
        None => (None, Vec::new(), None),
        Some(l) => {
            let n = l.basis.len();
            let index = |name: &str| l.basis.iter().position(|b| b == name).ok_or_else(|| cx.unknown(name));
            let basis: Vec<&str> = l.basis.iter().map(String::as_str).collect();
            let mut alg = LieAlgebra::abelian(&basis);
            for b in &l.brackets {
                let (i, j) = (index(&b.left)?, index(&b.right)?);
                let v = expr::parse_linear(&b.value, &l.basis, &params).map_err(|e| cx.expr_err(&b.value, e))?;
                alg.set_bracket(i, j, v);
            }
            let mut ders = Vec::new();
            if !l.derivations.is_empty() {
                if l.derivations.len() != n {
                    return Err(cx.schema("derivations", "one derivation per basis element is required"));
                }
                let gens = group.generator_names();
                for (d, b) in l.derivations.iter().zip(&l.basis) {
                    if &d.name != b {
                        return Err(cx.schema(&d.name, format!("derivation `{}` must follow basis order (`{b}`)", d.name)));
                    }
                    let mut images = vec![Element::zero(); gens.len()];
                    for (v, img) in &d.images {
                        let i = gens.iter().position(|g| g == v).ok_or_else(|| cx.unknown(v))?;
                        images[i] = elem(img, &group)?;
                    }
                    ders.push(Derivation { name: d.name.clone(), tag: d.tag, images });
                }
            }
            let r = match &l.r {
                None => None,
                Some(terms) => {
                    let mut wedges = Vec::new();
                    for [a, b, c] in terms {
                        let c = expr::parse_scalar(c, &params).map_err(|e| cx.expr_err(c, e))?;
                        wedges.push((index(a)?, index(b)?, c));
                    }
                    Some(Bivector::from_wedges(n, &wedges))
                }
            };
            (Some(alg), ders, r)
        }
    };
    let cocycle = cocycle(&doc.cocycle, cx, &params, &group, &derivations, r.as_ref())?;
    Ok(Model { name: doc.name.clone(), params, group, lie, derivations, r, cocycle })
}

fn cocycle(
    c: &CocycleDoc,
    cx: &Ctx<'_>,
    params: &ParamTable,
    group: &GroupData,
    ders: &[Derivation],
    r: Option<&Bivector>,
) -> Result<Cocycle, DocError> {
    let scalar = |s: &str| expr::parse_scalar(s, params).map_err(|e| cx.expr_err(s, e));
    let family = |f: &FamilyDoc| -> Result<OperatorFamily, DocError> {
        let d = ders.iter().find(|d| d.name == f.derivation).ok_or_else(|| cx.unknown(&f.derivation))?;
        let kind = match f.family {
            FamilyKindDoc::Power => FamilyKind::Power,
            FamilyKindDoc::Falling => FamilyKind::Falling,
        };
        Ok(OperatorFamily { derivation: d.clone(), kind })
    };
    Ok(match c {
        CocycleDoc::Trivial => Cocycle::Trivial,
        CocycleDoc::Bicharacter { matrix } => {
            let k = group.k();
            if matrix.len() != k || matrix.iter().any(|row| row.len() != k) {
                return Err(cx.schema("matrix", format!("bicharacter matrix must be {k}×{k}")));
            }
            let mut m = vec![vec![ExpUnit::one(); k]; k];
            for (i, row) in matrix.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    m[i][j] = scalar(s)?.as_unit().ok_or_else(|| cx.schema(s, format!("`{s}` is not exp(form)·zeta^k")))?;
                }
            }
            Cocycle::Bicharacter(m)
        }
        CocycleDoc::ExpBivector { scale } => {
            let r = r.ok_or_else(|| cx.schema("exp-bivector", "exp-bivector needs lie.r"))?;
            if ders.is_empty() {
                return Err(cx.schema("exp-bivector", "exp-bivector needs lie.derivations"));
            }
            let scale = scalar(scale)?.as_rational().ok_or_else(|| cx.schema(scale, "scale must be rational"))?;
            Cocycle::ExpBivector(ExpBivector { scale, r: r.clone(), derivations: ders.to_vec() })
        }
        CocycleDoc::Series { coefficient, left, right, terminates } => Cocycle::Series(ExplicitSeries {
            coefficient: scalar(coefficient)?,
            left: family(left)?,
            right: family(right)?,
            terminates: match terminates {
                SideDoc::Left => Side::Left,
                SideDoc::Right => Side::Right,
            },
        }),
        CocycleDoc::Convolution { factors } => Cocycle::Convolution(
            factors.iter().map(|f| cocycle(f, cx, params, group, ders, r)).collect::<Result<_, _>>()?,
        ),
        CocycleDoc::Inverse { inner } => cocycle(inner, cx, params, group, ders, r)?.inverse(),
        CocycleDoc::Transposed { inner } => cocycle(inner, cx, params, group, ders, r)?.transposed(),
    })
}

/// Text of a shipped document.
pub fn builtin_document(name: &str) -> Option<&'static str> {
    Some(match name {
        "quantum-torus" => include_str!("../../documents/quantum-torus.json"),
        "quantum-torus-root3" => include_str!("../../documents/quantum-torus-root3.json"),
        "moyal" => include_str!("../../documents/moyal.json"),
        "heisenberg" => include_str!("../../documents/heisenberg.json"),
        "heisenberg-corrupted" => include_str!("../../documents/heisenberg-corrupted.json"),
        "mixed-nilpotent" => include_str!("../../documents/mixed-nilpotent.json"),
        "borel" => include_str!("../../documents/borel.json"),
        _ => return None,
    })
}

pub const DOCUMENT_NAMES: [&str; 7] =
    ["quantum-torus", "quantum-torus-root3", "moyal", "heisenberg", "heisenberg-corrupted", "mixed-nilpotent", "borel"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{builtin, corrupted_heisenberg_group, BUILTIN_NAMES};

    #[test]
    fn documents_describe_builtins() {
        for name in BUILTIN_NAMES {
            let l = load(builtin_document(name).unwrap()).unwrap();
            assert_eq!(l.model, builtin(name).unwrap(), "{name}");
        }
        let l = load(builtin_document("heisenberg-corrupted").unwrap()).unwrap();
        assert_eq!(l.model.group, corrupted_heisenberg_group());
    }

    #[test]
    fn round_trip() {
        for name in DOCUMENT_NAMES {
            let d = parse_document(builtin_document(name).unwrap()).unwrap();
            let again = parse_document(&serialize(&d)).unwrap();
            assert_eq!(d, again, "{name}");
        }
    }

    #[test]
    fn heisenberg_coproduct_terms() {
        let d = parse_document(builtin_document("heisenberg").unwrap()).unwrap();
        assert_eq!(d.group.filtered[2].coproduct, vec![["x".to_string(), "y".to_string()]]);
    }

    #[test]
    fn unknown_variable_in_coproduct() {
        let text = builtin_document("heisenberg").unwrap().replace(r#"[["x", "y"]]"#, r#"[["x", "w"]]"#);
        match load(&text) {
            Err(DocError::UnknownName { name, line, .. }) => {
                assert_eq!(name, "w");
                assert_eq!(line, 11);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ambiguous_exponent_is_a_syntax_error() {
        let text = builtin_document("mixed-nilpotent").unwrap().replace(r#"["X", "Y", "h"]"#, r#"["X", "Y", "h^1/2"]"#);
        assert!(matches!(load(&text), Err(DocError::Syntax { .. })));
    }

    #[test]
    fn schema_errors_have_positions() {
        match load(r#"{"schema_version": 1, "name": "a"}"#) {
            Err(DocError::Schema { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(load("{"), Err(DocError::Syntax { .. })));
        let text = builtin_document("moyal").unwrap().replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(load(&text), Err(DocError::Schema { .. })));
    }
}
