//! The `reeb-spectra/1` document format.
//!
//! Documents are JSON objects. Rationals are `"p/q"` strings, values are
//! either a rational string, a declared symbol name, or a `{symbol: "p/q"}`
//! map in which the key `"1"` carries the rational part.

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::models::{BesseModel, EllipsoidModel};
use crate::qlinear::{format_rational, parse_rational, BasisRegistry, QLinearValue, SymbolEntry};
use crate::seifert::SeifertInvariants;
use crate::spectra::PrimeSpectrum;

pub const VERSION: &str = "reeb-spectra/1";

/// Failure while reading a document, located by a JSON-pointer path.
#[derive(Debug, Clone, PartialEq)]
pub enum DocError {
    /// Malformed or schema-invalid input.
    Schema { path: String, message: String },
    /// A library error raised while building a domain object.
    Domain { path: String, error: Error },
}

impl DocError {
    pub fn schema(path: &str, message: impl Into<String>) -> Self {
        DocError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub fn domain(path: &str, error: Error) -> Self {
        DocError::Domain {
            path: path.to_string(),
            error,
        }
    }
}

pub type DocResult<T> = std::result::Result<T, DocError>;

const TOP_LEVEL_FIELDS: &[&str] = &[
    "version",
    "registry",
    "spectrum",
    "cutoff",
    "seifert",
    "seifert_pair",
    "model",
    "model_pair",
    "ellipsoid",
    "ech",
];

/// A parsed input document. Payload fields are kept as raw JSON and decoded
/// on demand, so that errors carry the path of the offending field.
#[derive(Debug, Clone)]
pub struct Document {
    pub registry: BasisRegistry,
    fields: Map<String, Value>,
}

impl Document {
    pub fn parse(text: &str, max_precision_digits: Option<u32>) -> DocResult<Self> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| DocError::schema("", format!("invalid JSON: {e}")))?;
        let Value::Object(fields) = root else {
            return Err(DocError::schema("", "document must be a JSON object"));
        };
        match fields.get("version") {
            Some(Value::String(v)) if v == VERSION => {}
            Some(other) => {
                return Err(DocError::schema(
                    "/version",
                    format!("unsupported version {other}, expected \"{VERSION}\""),
                ))
            }
            None => return Err(DocError::schema("/version", "missing field")),
        }
        if let Some(k) = fields
            .keys()
            .find(|k| !TOP_LEVEL_FIELDS.contains(&k.as_str()))
        {
            return Err(DocError::schema(&format!("/{k}"), "unknown field"));
        }
        let entries = match fields.get("registry") {
            None => Vec::new(),
            Some(v) => parse_registry(v)?,
        };
        let registry = BasisRegistry::with_max_precision(entries, max_precision_digits)
            .map_err(|e| DocError::domain("/registry", e))?;
        Ok(Self { registry, fields })
    }

    pub fn field(&self, name: &str) -> DocResult<&Value> {
        self.fields
            .get(name)
            .ok_or_else(|| DocError::schema(&format!("/{name}"), "missing field"))
    }

    pub fn optional(&self, name: &str) -> Option<&Value> {
        self.fields.get(name)
    }

    pub fn value(&self, v: &Value, path: &str) -> DocResult<QLinearValue> {
        let x = parse_value(v, path, &self.registry)?;
        self.registry
            .check(&x)
            .map_err(|e| DocError::domain(path, e))?;
        Ok(x)
    }

    pub fn spectrum(&self) -> DocResult<PrimeSpectrum> {
        let raw = self.field("spectrum")?;
        let items = raw
            .as_array()
            .ok_or_else(|| DocError::schema("/spectrum", "expected an array of values"))?;
        let values = items
            .iter()
            .enumerate()
            .map(|(i, v)| self.value(v, &format!("/spectrum/{i}")))
            .collect::<DocResult<Vec<_>>>()?;
        PrimeSpectrum::new(values, self.registry.clone())
            .map_err(|e| DocError::domain("/spectrum", e))
    }

    pub fn seifert(&self) -> DocResult<SeifertInvariants> {
        parse_seifert(self.field("seifert")?, "/seifert")
    }

    pub fn seifert_pair(&self) -> DocResult<(SeifertInvariants, SeifertInvariants)> {
        let items = pair(self.field("seifert_pair")?, "/seifert_pair")?;
        Ok((
            parse_seifert(&items[0], "/seifert_pair/0")?,
            parse_seifert(&items[1], "/seifert_pair/1")?,
        ))
    }

    pub fn model(&self) -> DocResult<BesseModel> {
        self.parse_model(self.field("model")?, "/model")
    }

    pub fn model_pair(&self) -> DocResult<(BesseModel, BesseModel)> {
        let items = pair(self.field("model_pair")?, "/model_pair")?;
        Ok((
            self.parse_model(&items[0], "/model_pair/0")?,
            self.parse_model(&items[1], "/model_pair/1")?,
        ))
    }

    fn parse_model(&self, v: &Value, path: &str) -> DocResult<BesseModel> {
        let obj = object(v, path, &["manifold", "tau", "seifert"])?;
        let manifold = obj
            .get("manifold")
            .and_then(Value::as_str)
            .ok_or_else(|| DocError::schema(&format!("{path}/manifold"), "expected a string"))?;
        let tau = self.value(required(obj, "tau", path)?, &format!("{path}/tau"))?;
        let seifert = parse_seifert(required(obj, "seifert", path)?, &format!("{path}/seifert"))?;
        BesseModel::new(manifold, tau, seifert, self.registry.clone())
            .map_err(|e| DocError::domain(path, e))
    }

    pub fn ellipsoid(&self) -> DocResult<EllipsoidModel> {
        let obj = object(self.field("ellipsoid")?, "/ellipsoid", &["a", "b"])?;
        let a = self.value(required(obj, "a", "/ellipsoid")?, "/ellipsoid/a")?;
        let b = self.value(required(obj, "b", "/ellipsoid")?, "/ellipsoid/b")?;
        EllipsoidModel::new(a, b, self.registry.clone())
            .map_err(|e| DocError::domain("/ellipsoid", e))
    }

    pub fn ech(&self) -> DocResult<EchQuery> {
        let obj = object(
            self.field("ech")?,
            "/ech",
            &["a", "b", "kmax", "L", "checkpoints", "k"],
        )?;
        let a = self.value(required(obj, "a", "/ech")?, "/ech/a")?;
        let b = self.value(required(obj, "b", "/ech")?, "/ech/b")?;
        let level = obj.get("L").map(|v| self.value(v, "/ech/L")).transpose()?;
        let checkpoints = obj
            .get("checkpoints")
            .map(|v| {
                v.as_array()
                    .ok_or_else(|| DocError::schema("/ech/checkpoints", "expected an array"))?
                    .iter()
                    .enumerate()
                    .map(|(i, c)| natural(c, &format!("/ech/checkpoints/{i}")))
                    .collect::<DocResult<Vec<_>>>()
            })
            .transpose()?;
        Ok(EchQuery {
            a,
            b,
            kmax: obj
                .get("kmax")
                .map(|v| natural(v, "/ech/kmax"))
                .transpose()?,
            level,
            checkpoints,
            k: obj.get("k").map(|v| natural(v, "/ech/k")).transpose()?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct EchQuery {
    pub a: QLinearValue,
    pub b: QLinearValue,
    pub kmax: Option<usize>,
    pub level: Option<QLinearValue>,
    pub checkpoints: Option<Vec<usize>>,
    pub k: Option<usize>,
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> DocResult<&'a Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| DocError::schema(path, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(DocError::schema(&format!("{path}/{k}"), "unknown field"));
    }
    Ok(obj)
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> DocResult<&'a Value> {
    obj.get(key)
        .ok_or_else(|| DocError::schema(&format!("{path}/{key}"), "missing field"))
}

fn pair<'a>(v: &'a Value, path: &str) -> DocResult<&'a [Value]> {
    match v.as_array() {
        Some(items) if items.len() == 2 => Ok(items),
        _ => Err(DocError::schema(
            path,
            "expected an array of exactly two items",
        )),
    }
}

fn natural(v: &Value, path: &str) -> DocResult<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| DocError::schema(path, "expected a non-negative integer"))
}

fn parse_registry(v: &Value) -> DocResult<Vec<SymbolEntry>> {
    let items = v
        .as_array()
        .ok_or_else(|| DocError::schema("/registry", "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let path = format!("/registry/{i}");
            let obj = object(item, &path, &["symbol", "approx", "precision_digits"])?;
            let text = |key: &str| {
                required(obj, key, &path)?
                    .as_str()
                    .map(str::to_string)
                    .ok_or_else(|| DocError::schema(&format!("{path}/{key}"), "expected a string"))
            };
            let digits = required(obj, "precision_digits", &path)?
                .as_u64()
                .and_then(|d| u32::try_from(d).ok())
                .ok_or_else(|| {
                    DocError::schema(
                        &format!("{path}/precision_digits"),
                        "expected a positive integer",
                    )
                })?;
            Ok(SymbolEntry::new(text("symbol")?, text("approx")?, digits))
        })
        .collect()
}

pub fn parse_seifert(v: &Value, path: &str) -> DocResult<SeifertInvariants> {
    let obj = object(v, path, &["genus", "pairs"])?;
    let genus = required(obj, "genus", path)?
        .as_u64()
        .and_then(|g| u32::try_from(g).ok())
        .ok_or_else(|| {
            DocError::schema(&format!("{path}/genus"), "expected a non-negative integer")
        })?;
    let raw = required(obj, "pairs", path)?
        .as_array()
        .ok_or_else(|| DocError::schema(&format!("{path}/pairs"), "expected an array"))?;
    let pairs = raw
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let pp = format!("{path}/pairs/{i}");
            match p.as_array().map(Vec::as_slice) {
                Some([a, b]) => match (a.as_i64(), b.as_i64()) {
                    (Some(a), Some(b)) => Ok((a, b)),
                    _ => Err(DocError::schema(&pp, "expected two integers")),
                },
                _ => Err(DocError::schema(&pp, "expected [alpha, beta]")),
            }
        })
        .collect::<DocResult<Vec<_>>>()?;
    SeifertInvariants::new(genus, pairs).map_err(|e| DocError::domain(path, e))
}

/// Reads a value: a rational string, a declared symbol name, or a map.
pub fn parse_value(v: &Value, path: &str, registry: &BasisRegistry) -> DocResult<QLinearValue> {
    match v {
        Value::String(s) => parse_value_text(s, registry).ok_or_else(|| {
            DocError::schema(
                path,
                format!("`{s}` is neither a rational nor a declared symbol"),
            )
        }),
        Value::Object(map) => {
            let mut terms = Vec::with_capacity(map.len());
            for (sym, c) in map {
                let q = c.as_str().and_then(parse_rational).ok_or_else(|| {
                    DocError::schema(&format!("{path}/{sym}"), "expected a \"p/q\" string")
                })?;
                terms.push((sym.as_str(), q));
            }
            Ok(QLinearValue::from_terms(terms))
        }
        _ => Err(DocError::schema(
            path,
            "expected a value (\"p/q\", symbol, or {symbol: \"p/q\"})",
        )),
    }
}

/// Text form of a value reference, as accepted by `--cutoff` and `--L`.
pub fn parse_value_text(s: &str, registry: &BasisRegistry) -> Option<QLinearValue> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).ok()?;
        return parse_value(&v, "", registry).ok();
    }
    if let Some(q) = parse_rational(t) {
        return Some(QLinearValue::from_rational(q));
    }
    registry.contains(t).then(|| QLinearValue::symbol(t))
}

/// Canonical JSON form of a value.
pub fn value_json(x: &QLinearValue) -> Value {
    match x.as_rational() {
        Some(q) => Value::String(format_rational(&q)),
        None => Value::Object(
            x.terms()
                .map(|(s, c)| (s.to_string(), Value::String(format_rational(c))))
                .collect(),
        ),
    }
}

pub fn values_json(xs: &[QLinearValue]) -> Value {
    Value::Array(xs.iter().map(value_json).collect())
}

pub fn seifert_json(s: &SeifertInvariants) -> Value {
    json!({ "genus": s.genus(), "pairs": s.pairs().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>() })
}

pub fn registry_json(reg: &BasisRegistry) -> Value {
    Value::Array(
        reg.entries()
            .map(|e| json!({ "symbol": e.symbol, "approx": e.approx, "precision_digits": e.precision_digits }))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn reg() -> BasisRegistry {
        BasisRegistry::new(vec![
            SymbolEntry::new("s", "1.4142135623730951", 15),
            SymbolEntry::new("t", "3.14159265358979323846", 15),
        ])
        .unwrap()
    }

    #[test]
    fn value_forms() {
        let r = reg();
        assert_eq!(
            parse_value(&json!("3/2"), "", &r).unwrap(),
            QLinearValue::ratio(3, 2)
        );
        assert_eq!(
            parse_value(&json!("s"), "", &r).unwrap(),
            QLinearValue::symbol("s")
        );
        let m = parse_value(&json!({"1": "1", "s": "-1/2"}), "", &r).unwrap();
        assert_eq!(value_json(&m), json!({"1": "1", "s": "-1/2"}));
        assert_eq!(value_json(&QLinearValue::zero()), json!("0"));
        assert!(parse_value(&json!("u"), "/x", &r).is_err());
        assert!(parse_value(&json!(3), "/x", &r).is_err());
        assert_eq!(
            parse_value_text("{\"s\": \"2\"}", &r),
            Some(QLinearValue::symbol("s").scale_int(2))
        );
    }

    #[test]
    fn document_errors_carry_paths() {
        let err = Document::parse(r#"{"version": "reeb-spectra/0"}"#, None).unwrap_err();
        assert!(matches!(err, DocError::Schema { ref path, .. } if path == "/version"));
        let err =
            Document::parse(r#"{"version": "reeb-spectra/1", "extra": 1}"#, None).unwrap_err();
        assert!(matches!(err, DocError::Schema { ref path, .. } if path == "/extra"));
        let doc = Document::parse(
            r#"{"version": "reeb-spectra/1", "ellipsoid": {"a": "1", "b": "-2"}}"#,
            None,
        )
        .unwrap();
        match doc.ellipsoid().unwrap_err() {
            DocError::Domain { path, error } => {
                assert_eq!(path, "/ellipsoid");
                assert_eq!(error.name(), "NonPositiveInput");
            }
            other => panic!("{other:?}"),
        }
        let doc = Document::parse(
            r#"{"version": "reeb-spectra/1", "seifert": {"genus": 0, "pairs": [[2, 1], [3]]}}"#,
            None,
        )
        .unwrap();
        assert!(
            matches!(doc.seifert().unwrap_err(), DocError::Schema { ref path, .. } if path == "/seifert/pairs/1")
        );
        let err = Document::parse(
            r#"{"version": "reeb-spectra/1", "registry": [{"symbol": "s", "approx": "0", "precision_digits": 3}]}"#,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, DocError::Domain { ref path, .. } if path == "/registry"));
    }

    proptest! {
        #[test]
        fn value_json_round_trip(terms in prop::collection::vec((0usize..3, -40i64..=40, 1i64..=12), 0..5)) {
            let syms = ["1", "s", "t"];
            let x = QLinearValue::from_terms(
                terms.into_iter().map(|(i, n, d)| (syms[i], BigRational::new(n.into(), d.into()))),
            );
            let text = serde_json::to_string(&value_json(&x)).unwrap();
            let back: Value = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(parse_value(&back, "", &reg()).unwrap(), x);
        }
    }
}
