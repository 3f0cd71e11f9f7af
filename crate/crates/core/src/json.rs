//! JSON encodings of the algebraic objects and fixture files.
//!
//! Rationals and polynomials travel as strings in the polynomial text
//! grammar. Index tuples and chart axes are 1-based. Decoding errors carry the
//! JSON pointer of the offending value.

use serde_json::{json, Map, Value};

use crate::cover::{ChartData, CoverData, Overlap};
use crate::error::{Error, Result};
use crate::exterior::{OrdinaryForm, Tensor11, VectorField};
use crate::gform::GenForm;
use crate::gvector::GenVectorField;
use crate::ring::{parse_rational, ExpPoly, PolyMatrix, Polynomial, Rational};

/// A value together with its JSON pointer.
#[derive(Clone, Copy)]
pub struct Node<'a> {
    pub value: &'a Value,
    pointer: &'a str,
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

impl<'a> Node<'a> {
    pub fn root(value: &'a Value) -> Self {
        Node { value, pointer: "" }
    }

    pub fn pointer(&self) -> &str {
        self.pointer
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::schema(self.pointer, msg)
    }

    /// Applies `f` to the child at `key`, prefixing errors with its pointer.
    pub fn field<T>(&self, key: &str, f: impl FnOnce(Node<'_>) -> Result<T>) -> Result<T> {
        let obj = self.value.as_object().ok_or_else(|| self.error("expected an object"))?;
        let ptr = format!("{}/{}", self.pointer, escape(key));
        let value = obj.get(key).ok_or_else(|| Error::schema(&ptr, format!("missing field '{key}'")))?;
        f(Node { value, pointer: &ptr })
    }

    pub fn optional<T>(&self, key: &str, f: impl FnOnce(Node<'_>) -> Result<T>) -> Result<Option<T>> {
        let obj = self.value.as_object().ok_or_else(|| self.error("expected an object"))?;
        match obj.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(value) => {
                let ptr = format!("{}/{}", self.pointer, escape(key));
                f(Node { value, pointer: &ptr }).map(Some)
            }
        }
    }

    pub fn items<T>(&self, mut f: impl FnMut(Node<'_>) -> Result<T>) -> Result<Vec<T>> {
        let arr = self.value.as_array().ok_or_else(|| self.error("expected an array"))?;
        arr.iter()
            .enumerate()
            .map(|(i, value)| {
                let ptr = format!("{}/{}", self.pointer, i);
                f(Node { value, pointer: &ptr })
            })
            .collect()
    }

    pub fn str(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| self.error("expected a string"))
    }

    pub fn usize(&self) -> Result<usize> {
        self.value.as_u64().map(|u| u as usize).ok_or_else(|| self.error("expected a non-negative integer"))
    }

    pub fn i32(&self) -> Result<i32> {
        self.value
            .as_i64()
            .and_then(|i| i32::try_from(i).ok())
            .ok_or_else(|| self.error("expected an integer"))
    }

    /// A rational given as a string (`"-3/2"`) or an integer.
    pub fn rational(&self) -> Result<Rational> {
        match self.value {
            Value::String(s) => parse_rational(s).map_err(|e| self.error(e.to_string())),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("i64"))),
            _ => Err(self.error("expected a rational string such as \"3/2\"")),
        }
    }

    pub fn polynomial(&self, nvars: usize) -> Result<Polynomial> {
        Polynomial::parse(self.str()?, nvars).map_err(|e| self.error(e.to_string()))
    }

    fn dim(&self, expected: Option<usize>) -> Result<usize> {
        let n = self.field("dim", |d| d.usize())?;
        if n == 0 || n > 16 {
            return self.field("dim", |d| Err(d.error("dimension must lie in 1..=16")));
        }
        match expected {
            Some(e) if e != n => self.field("dim", |d| Err(d.error(format!("expected dimension {e}, found {n}")))),
            _ => Ok(n),
        }
    }

    fn epsilon_matching(&self, expected: Option<&Rational>) -> Result<Rational> {
        let eps = self.field("epsilon", |e| e.rational())?;
        match expected {
            Some(e) if *e != eps => self.field("epsilon", |d| Err(d.error(format!("expected ε = {e}, found {eps}")))),
            _ => Ok(eps),
        }
    }
}

pub fn encode_rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn encode_polynomial(p: &Polynomial) -> Value {
    Value::String(p.to_string())
}

fn index_key(indices: &[usize]) -> String {
    let inner: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    format!("[{}]", inner.join(","))
}

pub fn encode_form(f: &OrdinaryForm) -> Value {
    let mut comps = Map::new();
    for (idx, c) in f.components() {
        comps.insert(index_key(&idx), encode_polynomial(c));
    }
    json!({"dim": f.nvars(), "degree": f.degree(), "components": comps})
}

fn parse_index_key(node: &Node<'_>, key: &str, nvars: usize) -> Result<Vec<usize>> {
    let inner = key
        .trim()
        .strip_prefix('[')
        .and_then(|k| k.strip_suffix(']'))
        .ok_or_else(|| node.error(format!("component key '{key}' must look like \"[1,2]\"")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if (1..=nvars).contains(&i) => Ok(i - 1),
            _ => Err(node.error(format!("component key '{key}': index '{}' outside 1..={nvars}", t.trim()))),
        })
        .collect()
}

/// `{"dim", "degree", "components": {"[i1,...,ip]": "<poly>"}}`.
pub fn decode_form(node: Node<'_>, nvars: Option<usize>) -> Result<OrdinaryForm> {
    let n = node.dim(nvars)?;
    let degree = node.field("degree", |d| d.i32())?;
    let comps = node.field("components", |c| {
        let obj = c.value.as_object().ok_or_else(|| c.error("expected an object"))?;
        let mut out = Vec::with_capacity(obj.len());
        for (key, value) in obj {
            let ptr = format!("{}/{}", c.pointer, escape(key));
            let child = Node { value, pointer: &ptr };
            let idx = parse_index_key(&child, key, n)?;
            if idx.len() as i32 != degree {
                return Err(child.error(format!("key has {} indices but the form has degree {degree}", idx.len())));
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(child.error("indices must be strictly increasing"));
            }
            out.push((idx, child.polynomial(n)?));
        }
        Ok(out)
    })?;
    OrdinaryForm::from_components(n, degree, comps).map_err(|e| node.error(e.to_string()))
}

pub fn encode_gen_form(a: &GenForm) -> Value {
    json!({
        "dim": a.nvars(),
        "epsilon": encode_rational(a.epsilon()),
        "degree": a.degree(),
        "body": encode_form(a.body()),
        "soul": encode_form(a.soul()),
    })
}

/// `{"dim", "epsilon", "degree", "body": <form>, "soul": <form>}`.
pub fn decode_gen_form(node: Node<'_>, nvars: Option<usize>, epsilon: Option<&Rational>) -> Result<GenForm> {
    let n = node.dim(nvars)?;
    let eps = node.epsilon_matching(epsilon)?;
    let degree = node.field("degree", |d| d.i32())?;
    let body = node.field("body", |b| decode_form(b, Some(n)))?;
    let soul = node.field("soul", |s| decode_form(s, Some(n)))?;
    if body.degree() != degree {
        return node.field("body", |b| Err(b.error(format!("body degree {} ≠ {degree}", body.degree()))));
    }
    if soul.degree() != degree + 1 {
        return node.field("soul", |s| Err(s.error(format!("soul degree {} ≠ {}", soul.degree(), degree + 1))));
    }
    GenForm::new(body, soul, eps).map_err(|e| node.error(e.to_string()))
}

pub fn encode_vector_field(v: &GenVectorField) -> Value {
    let rows: Vec<Value> =
        v.vt().rows().iter().map(|r| Value::Array(r.iter().map(encode_polynomial).collect())).collect();
    json!({
        "dim": v.nvars(),
        "epsilon": encode_rational(v.epsilon()),
        "v": v.v().components().iter().map(encode_polynomial).collect::<Vec<_>>(),
        "vt": rows,
    })
}

fn decode_poly_rows(node: Node<'_>, n: usize) -> Result<Vec<Vec<Polynomial>>> {
    let rows = node.items(|r| r.items(|c| c.polynomial(n)))?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(node.error(format!("expected a {n}×{n} matrix")));
    }
    Ok(rows)
}

/// `{"dim", "epsilon", "v": [<poly>; n], "vt": [[<poly>; n]; n]}`; `vt[ρ][σ] = v^ρ_σ`.
pub fn decode_vector_field(node: Node<'_>, nvars: Option<usize>, epsilon: Option<&Rational>) -> Result<GenVectorField> {
    let n = node.dim(nvars)?;
    let eps = node.epsilon_matching(epsilon)?;
    let v = node.field("v", |v| {
        let comps = v.items(|c| c.polynomial(n))?;
        if comps.len() != n {
            return Err(v.error(format!("expected {n} components")));
        }
        Ok(comps)
    })?;
    let vt = node.optional("vt", |t| decode_poly_rows(t, n))?.unwrap_or_else(|| vec![vec![Polynomial::zero(n); n]; n]);
    let v = VectorField::new(v).map_err(|e| node.error(e.to_string()))?;
    let vt = Tensor11::new(vt).map_err(|e| node.error(e.to_string()))?;
    GenVectorField::new(v, vt, eps).map_err(|e| node.error(e.to_string()))
}

pub fn encode_poly_matrix(m: &PolyMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(encode_polynomial).collect())).collect())
}

pub fn decode_poly_matrix(node: Node<'_>, n: usize) -> Result<PolyMatrix> {
    PolyMatrix::new(n, decode_poly_rows(node, n)?).map_err(|e| node.error(e.to_string()))
}

/// `n×n` array of ordinary form encodings, each of the given degree.
pub fn decode_form_rows(node: Node<'_>, n: usize, degree: i32) -> Result<Vec<Vec<OrdinaryForm>>> {
    let rows = node.items(|r| {
        r.items(|c| {
            let f = decode_form(c, Some(n))?;
            if f.degree() != degree {
                return Err(c.error(format!("expected a {degree}-form")));
            }
            Ok(f)
        })
    })?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(node.error(format!("expected a {n}×{n} matrix")));
    }
    Ok(rows)
}

pub fn encode_form_rows(rows: &[Vec<OrdinaryForm>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(encode_form).collect())).collect())
}

pub fn encode_form_matrix(m: &crate::connection::FormMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(encode_gen_form).collect())).collect())
}

/// `r e^s` as `{"r": "<rational>", "s": "<rational>"}`.
pub fn encode_exp_constant(c: &ExpPoly) -> Value {
    let (r, s) = c.as_exp_constant().expect("constant r·e^s");
    json!({"r": encode_rational(&r), "s": encode_rational(&s)})
}

pub fn encode_cover(cover: &CoverData) -> Value {
    json!({
        "dim": cover.nvars(),
        "charts": cover.charts().iter().map(|c| json!({
            "id": c.id, "xi": encode_polynomial(&c.xi), "tau": encode_exp_constant(&c.tau),
        })).collect::<Vec<_>>(),
        "overlaps": cover.overlaps().iter().map(|o| json!([o.i, o.j, encode_rational(&o.tau)])).collect::<Vec<_>>(),
        "triples": cover.triples().iter().map(|t| json!(t)).collect::<Vec<_>>(),
    })
}

/// Cover fixture: charts with `ξ` and `τ = r e^s`, overlap constants and triples.
pub fn decode_cover(node: Node<'_>) -> Result<CoverData> {
    let n = node.dim(None)?;
    let charts = node.field("charts", |cs| {
        cs.items(|c| {
            let id = c.field("id", |i| i.str().map(str::to_string))?;
            let xi = c.field("xi", |x| x.polynomial(n))?;
            let (r, s) = c.field("tau", |t| Ok((t.field("r", |r| r.rational())?, t.field("s", |s| s.rational())?)))?;
            ChartData::new(id, xi, ExpPoly::exp_constant(n, r, s)).map_err(|e| c.error(e.to_string()))
        })
    })?;
    let overlaps = node
        .optional("overlaps", |os| {
            os.items(|o| {
                let parts = o.items(|x| Ok(x.value.clone()))?;
                if parts.len() != 3 {
                    return Err(o.error("overlap must be [\"I\", \"J\", \"<rational>\"]"));
                }
                let i = o.field_index(0, |x| x.str().map(str::to_string))?;
                let j = o.field_index(1, |x| x.str().map(str::to_string))?;
                let tau = o.field_index(2, |x| x.rational())?;
                Ok(Overlap { i, j, tau })
            })
        })?
        .unwrap_or_default();
    let triples = node
        .optional("triples", |ts| {
            ts.items(|t| {
                let ids = t.items(|x| x.str().map(str::to_string))?;
                <[String; 3]>::try_from(ids).map_err(|_| t.error("triple must list three chart ids"))
            })
        })?
        .unwrap_or_default();
    CoverData::new(n, charts, overlaps, triples).map_err(|e| node.error(e.to_string()))
}

impl<'a> Node<'a> {
    pub fn field_index<T>(&self, i: usize, f: impl FnOnce(Node<'_>) -> Result<T>) -> Result<T> {
        let arr = self.value.as_array().ok_or_else(|| self.error("expected an array"))?;
        let ptr = format!("{}/{}", self.pointer, i);
        let value = arr.get(i).ok_or_else(|| Error::schema(&ptr, "missing array element"))?;
        f(Node { value, pointer: &ptr })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{epsilon_for, RandomSource};
    use crate::ring::{frac, int};

    fn pointer_of(e: Error) -> String {
        match e {
            Error::Schema { pointer, .. } => pointer,
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn gen_forms_round_trip() {
        for i in 0..40 {
            let eps = epsilon_for(i);
            let mut src = RandomSource::new(3, i);
            let a = src.any_gen_form(3, &eps);
            let v = encode_gen_form(&a);
            assert_eq!(decode_gen_form(Node::root(&v), None, None).unwrap(), a);
            let text = serde_json::to_string(&v).unwrap();
            let back: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(decode_gen_form(Node::root(&back), Some(3), Some(&eps)).unwrap(), a);
        }
    }

    #[test]
    fn vector_fields_round_trip() {
        for i in 0..20 {
            let eps = epsilon_for(i);
            let f = RandomSource::new(4, i).gen_vector_field(2, &eps);
            let v = encode_vector_field(&f);
            assert_eq!(decode_vector_field(Node::root(&v), None, None).unwrap(), f);
        }
    }

    #[test]
    fn form_encoding_is_one_based() {
        let f = OrdinaryForm::dx(3, 0).wedge(&OrdinaryForm::dx(3, 2)).scale(&frac(3, 2));
        assert_eq!(encode_form(&f), json!({"dim": 3, "degree": 2, "components": {"[1,3]": "3/2"}}));
    }

    #[test]
    fn errors_point_at_the_bad_value() {
        let v = json!({"dim": 2, "epsilon": "1", "degree": 0,
            "body": {"dim": 2, "degree": 0, "components": {"[]": "x1"}},
            "soul": {"dim": 2, "degree": 1, "components": {"[1]": "x9"}}});
        let e = decode_gen_form(Node::root(&v), None, None).unwrap_err();
        assert_eq!(pointer_of(e), "/soul/components/[1]");
        let v = json!({"dim": 2, "epsilon": "1/0", "degree": 0, "body": {}, "soul": {}});
        assert_eq!(pointer_of(decode_gen_form(Node::root(&v), None, None).unwrap_err()), "/epsilon");
        let v = json!({"dim": 2, "epsilon": "1", "degree": 0,
            "body": {"dim": 2, "degree": 0, "components": {}},
            "soul": {"dim": 2, "degree": 1, "components": {"[2,1]": "1"}}});
        assert_eq!(pointer_of(decode_gen_form(Node::root(&v), None, None).unwrap_err()), "/soul/components/[2,1]");
        let v = json!({"dim": 2, "charts": [{"id": "a", "xi": "x1", "tau": {"r": "1"}}]});
        assert_eq!(pointer_of(decode_cover(Node::root(&v)).unwrap_err()), "/charts/0/tau/s");
        let v = json!({"dim": 1, "epsilon": "1", "v": ["x1", "x1"]});
        assert_eq!(pointer_of(decode_vector_field(Node::root(&v), None, None).unwrap_err()), "/v");
        let v = json!({"dim": 1, "epsilon": "2", "v": ["x1"]});
        assert_eq!(pointer_of(decode_vector_field(Node::root(&v), None, Some(&int(1))).unwrap_err()), "/epsilon");
    }

    #[test]
    fn cover_round_trip() {
        let v = json!({"dim": 1,
            "charts": [{"id": "1", "xi": "x1 + 3", "tau": {"r": "1", "s": "3"}},
                       {"id": "2", "xi": "x1", "tau": {"r": "1", "s": "0"}}],
            "overlaps": [["1", "2", "3"]], "triples": []});
        let cover = decode_cover(Node::root(&v)).unwrap();
        assert_eq!(cover.overlap_tau("2", "1"), Some(int(-3)));
        assert_eq!(decode_cover(Node::root(&encode_cover(&cover))).unwrap(), cover);
    }
}
