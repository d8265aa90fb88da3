//! JSON documents for every value type.
//!
//! Exact scalars are strings: `"3"`, `"-1/2"` (decimals such as `"0.25"` and
//! plain JSON numbers are accepted on input). Complex scalars are
//! `{"re": .., "im": ..}`. Outputs are canonical, so re-encoding a decoded
//! document reproduces it byte for byte.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::domains::{
    ClosedInterval, CompactTuple, ComplexRegion, Disk, DomainTuple, Ext, Interval, OmegaOpen,
    RealCompactSet, RealOpenSet, Rect, Region, Tail,
};
use crate::error::{Error, Result};
use crate::growth::{fmt12, GrowthReport};
use crate::matrep::{DerivedSeries, NumericTriMatrix, TriMatrixElement, UpperTriangular};
use crate::sheaf::Section;
use crate::uea::{
    parse_rational, rational_to_string, Field, GaussianRational, PbwElement, Polynomial, Rational,
    Scalar,
};

pub const FORMAT: &str = "ncsheaf/1";

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))
}

fn count(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

/// Number rounded to twelve significant digits.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let v: f64 = fmt12(x).parse().expect("fmt12 output parses");
    json!(v)
}

pub fn float_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad("number out of range")),
        Value::String(s) => match s.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => parse_rational(s)
                .map(|r| crate::uea::rational_to_f64(&r))
                .map_err(bad),
        },
        _ => Err(bad("expected a number")),
    }
}

/// Exact scalars with a JSON form.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(bad),
        Value::Number(n) => parse_rational(&n.to_string()).map_err(bad),
        _ => Err(bad("expected a rational string")),
    }
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        rational_from_json(v)
    }
}

impl JsonScalar for GaussianRational {
    fn to_json(&self) -> Value {
        json!({"re": rational_to_string(&self.re), "im": rational_to_string(&self.im)})
    }

    /// Also accepts a bare rational as a real number.
    fn from_json(v: &Value) -> Result<Self> {
        if v.is_object() {
            let im = match v.get("im") {
                Some(x) => rational_from_json(x)?,
                None => Rational::from_integer(0.into()),
            };
            Ok(GaussianRational::new(
                rational_from_json(field(v, "re")?)?,
                im,
            ))
        } else {
            Ok(GaussianRational::real(rational_from_json(v)?))
        }
    }
}

pub fn poly_to_json<S: JsonScalar>(p: &Polynomial<S>) -> Value {
    Value::Array(p.coeffs().iter().map(JsonScalar::to_json).collect())
}

pub fn poly_from_json<S: JsonScalar>(v: &Value) -> Result<Polynomial<S>> {
    Ok(Polynomial::new(
        array(v, "polynomial")?
            .iter()
            .map(S::from_json)
            .collect::<Result<_>>()?,
    ))
}

pub fn pbw_to_json<S: JsonScalar>(a: &PbwElement<S>) -> Value {
    json!({
        "field": S::FIELD.as_str(),
        "levels": a.levels().iter().map(poly_to_json).collect::<Vec<_>>(),
    })
}

pub fn pbw_from_json<S: JsonScalar>(v: &Value) -> Result<PbwElement<S>> {
    let declared = field_tag(v)?.unwrap_or(S::FIELD);
    if declared != S::FIELD {
        return Err(Error::FieldMismatch {
            left: S::FIELD,
            right: declared,
        });
    }
    Ok(PbwElement::new(
        array(field(v, "levels")?, "levels")?
            .iter()
            .map(poly_from_json)
            .collect::<Result<_>>()?,
    ))
}

/// The `"field"` tag, if present.
pub fn field_tag(v: &Value) -> Result<Option<Field>> {
    match v.get("field") {
        None => Ok(None),
        Some(Value::String(s)) => s.parse().map(Some).map_err(bad),
        Some(_) => Err(bad("`field` must be a string")),
    }
}

/// The `"space"` tag, if present.
pub fn space_tag(v: &Value) -> Result<Option<Field>> {
    match v.get("space") {
        None => Ok(None),
        Some(Value::String(s)) => s.parse().map(Some).map_err(bad),
        Some(_) => Err(bad("`space` must be a string")),
    }
}

fn ext_to_json(e: &Ext) -> Value {
    match e {
        Ext::NegInf => json!("-inf"),
        Ext::PosInf => json!("+inf"),
        Ext::Finite(r) => r.to_json(),
    }
}

fn ext_from_json(v: &Value) -> Result<Ext> {
    match v.as_str() {
        Some("-inf") => Ok(Ext::NegInf),
        Some("+inf" | "inf") => Ok(Ext::PosInf),
        _ => Ok(Ext::Finite(rational_from_json(v)?)),
    }
}

fn pair<'a>(v: &'a Value, what: &str) -> Result<(&'a Value, &'a Value)> {
    match array(v, what)?.as_slice() {
        [a, b] => Ok((a, b)),
        _ => Err(bad(format!("{what} must have two entries"))),
    }
}

fn interval_from_json(v: &Value) -> Result<Interval> {
    let (a, b) = pair(v, "interval")?;
    Interval::new(ext_from_json(a)?, ext_from_json(b)?)
        .ok_or_else(|| bad("interval endpoints must satisfy lo < hi"))
}

/// Regions with a JSON form.
pub trait JsonRegion: Region<Scalar: JsonScalar> {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonRegion for RealOpenSet {
    fn to_json(&self) -> Value {
        let ivs: Vec<Value> = self
            .intervals()
            .iter()
            .map(|iv| json!([ext_to_json(&iv.lo), ext_to_json(&iv.hi)]))
            .collect();
        json!({ "intervals": ivs })
    }

    fn from_json(v: &Value) -> Result<Self> {
        Ok(RealOpenSet::new(
            array(field(v, "intervals")?, "intervals")?
                .iter()
                .map(interval_from_json)
                .collect::<Result<_>>()?,
        ))
    }
}

impl JsonRegion for ComplexRegion {
    fn to_json(&self) -> Value {
        match self {
            ComplexRegion::Rects(rs) => {
                let rs: Vec<Value> = rs
                    .iter()
                    .map(|r| {
                        json!([
                            ext_to_json(&r.x.lo),
                            ext_to_json(&r.x.hi),
                            ext_to_json(&r.y.lo),
                            ext_to_json(&r.y.hi)
                        ])
                    })
                    .collect();
                json!({ "rects": rs })
            }
            ComplexRegion::Disks(ds) => {
                let ds: Vec<Value> = ds
                    .iter()
                    .map(|d| json!({"center": d.center.to_json(), "radius": d.radius.to_json()}))
                    .collect();
                json!({ "disks": ds })
            }
        }
    }

    /// `{"rects": [[x0, x1, y0, y1], ...]}` or
    /// `{"disks": [{"center": .., "radius": ..}, ...]}`.
    fn from_json(v: &Value) -> Result<Self> {
        if let Some(rs) = v.get("rects") {
            let rects = array(rs, "rects")?
                .iter()
                .map(|r| match array(r, "rect")?.as_slice() {
                    [x0, x1, y0, y1] => {
                        let x = Interval::new(ext_from_json(x0)?, ext_from_json(x1)?);
                        let y = Interval::new(ext_from_json(y0)?, ext_from_json(y1)?);
                        match (x, y) {
                            (Some(x), Some(y)) => Ok(Rect::new(x, y)),
                            _ => Err(bad("rectangle sides must satisfy lo < hi")),
                        }
                    }
                    _ => Err(bad("rect must be [x0, x1, y0, y1]")),
                })
                .collect::<Result<_>>()?;
            Ok(ComplexRegion::rects(rects))
        } else if let Some(ds) = v.get("disks") {
            let disks = array(ds, "disks")?
                .iter()
                .map(|d| {
                    let c = GaussianRational::from_json(field(d, "center")?)?;
                    let r = rational_from_json(field(d, "radius")?)?;
                    Disk::new(c, r).ok_or_else(|| bad("disk radius must be positive"))
                })
                .collect::<Result<_>>()?;
            Ok(ComplexRegion::disks(disks))
        } else {
            Err(bad("complex region needs `rects` or `disks`"))
        }
    }
}

pub fn compact_to_json(k: &RealCompactSet) -> Value {
    let ivs: Vec<Value> = k
        .intervals()
        .iter()
        .map(|iv| json!([iv.lo.to_json(), iv.hi.to_json()]))
        .collect();
    json!({ "intervals": ivs })
}

pub fn compact_from_json(v: &Value) -> Result<RealCompactSet> {
    let ivs = array(field(v, "intervals")?, "intervals")?
        .iter()
        .map(|iv| {
            let (a, b) = pair(iv, "interval")?;
            ClosedInterval::new(rational_from_json(a)?, rational_from_json(b)?)
                .ok_or_else(|| bad("closed interval needs lo ≤ hi"))
        })
        .collect::<Result<_>>()?;
    Ok(RealCompactSet::new(ivs))
}

fn check_space<R: Region>(v: &Value) -> Result<()> {
    match space_tag(v)? {
        Some(s) if s != R::SPACE => Err(Error::FieldMismatch {
            left: R::SPACE,
            right: s,
        }),
        _ => Ok(()),
    }
}

pub fn omega_to_json<R: JsonRegion>(v: &OmegaOpen<R>) -> Value {
    json!({
        "space": R::SPACE.as_str(),
        "levels": v.levels().iter().map(JsonRegion::to_json).collect::<Vec<_>>(),
        "tail": v.tail().as_str(),
    })
}

pub fn omega_from_json<R: JsonRegion>(v: &Value) -> Result<OmegaOpen<R>> {
    check_space::<R>(v)?;
    let levels = array(field(v, "levels")?, "levels")?
        .iter()
        .map(R::from_json)
        .collect::<Result<_>>()?;
    let tail: Tail = match v.get("tail") {
        None => Tail::Empty,
        Some(t) => t
            .as_str()
            .ok_or_else(|| bad("`tail` must be a string"))?
            .parse()
            .map_err(bad)?,
    };
    OmegaOpen::new(levels, tail).map_err(|e| bad(e.to_string()))
}

fn index_key(i: usize, j: usize) -> String {
    format!("{i},{j}")
}

fn parse_key(k: &str) -> Result<(usize, usize)> {
    let (i, j) = k
        .split_once(',')
        .ok_or_else(|| bad(format!("entry key `{k}` must read `i,j`")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| bad(format!("bad index in `{k}`")))
    };
    Ok((parse(i)?, parse(j)?))
}

fn entries_map(v: &Value) -> Result<&Map<String, Value>> {
    field(v, "entries")?
        .as_object()
        .ok_or_else(|| bad("`entries` must be an object"))
}

pub fn tuple_to_json<R: JsonRegion>(t: &DomainTuple<R>) -> Value {
    let entries: Map<String, Value> = t
        .entries()
        .iter()
        .map(|(&(i, j), w)| (index_key(i, j), w.to_json()))
        .collect();
    json!({"space": R::SPACE.as_str(), "p": t.order(), "entries": entries})
}

pub fn tuple_from_json<R: JsonRegion>(v: &Value) -> Result<DomainTuple<R>> {
    check_space::<R>(v)?;
    let p = count(field(v, "p")?, "p")?;
    let entries = entries_map(v)?
        .iter()
        .map(|(k, w)| Ok((parse_key(k)?, R::from_json(w)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    DomainTuple::new(p, entries).map_err(|e| bad(e.to_string()))
}

pub fn compact_tuple_to_json(t: &CompactTuple) -> Value {
    let entries: Map<String, Value> = t
        .entries()
        .iter()
        .map(|(&(i, j), k)| (index_key(i, j), compact_to_json(k)))
        .collect();
    json!({"p": t.order(), "entries": entries})
}

pub fn compact_tuple_from_json(v: &Value) -> Result<CompactTuple> {
    let p = count(field(v, "p")?, "p")?;
    let entries = entries_map(v)?
        .iter()
        .map(|(k, w)| Ok((parse_key(k)?, compact_from_json(w)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    CompactTuple::new(p, entries).map_err(|e| bad(e.to_string()))
}

pub fn section_to_json<R: JsonRegion>(s: &Section<R>) -> Value {
    let levels: Vec<Value> = s
        .levels()
        .iter()
        .map(|l| json!({"components": l.iter().map(poly_to_json).collect::<Vec<_>>()}))
        .collect();
    json!({"parent": omega_to_json(s.parent()), "levels": levels})
}

pub fn section_from_json<R: JsonRegion>(v: &Value) -> Result<Section<R>> {
    let parent = omega_from_json::<R>(field(v, "parent")?)?;
    let levels = array(field(v, "levels")?, "levels")?
        .iter()
        .map(|l| {
            array(field(l, "components")?, "components")?
                .iter()
                .map(poly_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Section::new(parent, levels).map_err(|e| bad(e.to_string()))
}

pub fn tri_to_json<R: JsonRegion>(m: &TriMatrixElement<R>) -> Value {
    let entries: Map<String, Value> = m
        .entries()
        .iter()
        .map(|(&(i, j), ps)| {
            (
                index_key(i, j),
                Value::Array(ps.iter().map(poly_to_json).collect()),
            )
        })
        .collect();
    json!({"p": m.order(), "domains": tuple_to_json(m.domains()), "entries": entries})
}

/// Entries may also be a single polynomial, meaning the same polynomial on
/// every component of the domain.
pub fn tri_from_json<R: JsonRegion>(v: &Value) -> Result<TriMatrixElement<R>> {
    let domains = tuple_from_json::<R>(field(v, "domains")?)?;
    if let Some(p) = v.get("p") {
        if count(p, "p")? != domains.order() {
            return Err(bad("`p` disagrees with the order of `domains`"));
        }
    }
    let mut entries = BTreeMap::new();
    for (k, e) in entries_map(v)? {
        let (i, j) = parse_key(k)?;
        let items = array(e, "entry")?;
        let nested = items.first().is_some_and(Value::is_array);
        let polys = if nested || items.is_empty() {
            items
                .iter()
                .map(poly_from_json)
                .collect::<Result<Vec<_>>>()?
        } else {
            let n = domains
                .entries()
                .get(&(i, j))
                .map_or(0, Region::component_count);
            vec![poly_from_json(e)?; n]
        };
        entries.insert((i, j), polys);
    }
    TriMatrixElement::new(domains, entries).map_err(|e| bad(e.to_string()))
}

fn complex_pair(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn numeric_to_json(m: &NumericTriMatrix) -> Value {
    Value::Array(m.upper().into_iter().map(complex_pair).collect())
}

/// Row-major upper triangle of `[re, im]` pairs or plain reals. A
/// `{"rows": [[..], ..]}` object with full rows is accepted as well.
pub fn numeric_from_json(v: &Value) -> Result<NumericTriMatrix> {
    let entry = |x: &Value| -> Result<Complex64> {
        match x {
            Value::Array(p) => match p.as_slice() {
                [re, im] => Ok(Complex64::new(float_from_json(re)?, float_from_json(im)?)),
                _ => Err(bad("complex entry must be [re, im]")),
            },
            _ => Ok(Complex64::new(float_from_json(x)?, 0.0)),
        }
    };
    if let Some(rows) = v.get("rows") {
        let rows = array(rows, "rows")?
            .iter()
            .map(|r| {
                array(r, "row")?
                    .iter()
                    .map(entry)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return NumericTriMatrix::from_rows(rows).map_err(|e| bad(e.to_string()));
    }
    let upper = array(v, "matrix")?
        .iter()
        .map(entry)
        .collect::<Result<Vec<_>>>()?;
    let n = upper.len();
    let p = (0..=n).find(|p| p * (p + 1) / 2 >= n).unwrap_or(0);
    if p * (p + 1) / 2 != n {
        return Err(bad(format!("{n} entries do not fill an upper triangle")));
    }
    NumericTriMatrix::from_upper(p, &upper).map_err(|e| bad(e.to_string()))
}

pub fn exact_matrix_to_json<S: JsonScalar>(m: &UpperTriangular<S>) -> Value {
    Value::Array(m.upper_entries().map(JsonScalar::to_json).collect())
}

/// Row-major upper triangle of exact scalars, or `{"rows": ..}`.
pub fn exact_matrix_from_json<S: JsonScalar>(v: &Value) -> Result<UpperTriangular<S>> {
    if let Some(rows) = v.get("rows") {
        let rows = array(rows, "rows")?
            .iter()
            .map(|r| {
                array(r, "row")?
                    .iter()
                    .map(S::from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return UpperTriangular::from_rows(rows).map_err(|e| bad(e.to_string()));
    }
    let upper = array(v, "matrix")?
        .iter()
        .map(S::from_json)
        .collect::<Result<Vec<_>>>()?;
    let n = upper.len();
    let p = (0..=n).find(|p| p * (p + 1) / 2 >= n).unwrap_or(0);
    if p * (p + 1) / 2 != n {
        return Err(bad(format!("{n} entries do not fill an upper triangle")));
    }
    let mut it = upper.into_iter();
    Ok(UpperTriangular::from_fn(p, |_, _| {
        it.next().expect("length checked")
    }))
}

pub fn series_to_json<S: JsonScalar>(s: &DerivedSeries<S>) -> Value {
    json!({
        "dims": s.dims(),
        "solvable": s.solvable,
        "rationalized": s.rationalized,
        "bases": s.bases.iter().map(|b| b.iter().map(exact_matrix_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Norms beyond the double range are written as `null`; `log_norms` keeps
/// them.
pub fn report_to_json(r: &GrowthReport) -> Value {
    json!({
        "samples": r.samples.iter().map(|x| json!([num(x.s), num(x.norm())])).collect::<Vec<_>>(),
        "log_norms": r.samples.iter().map(|x| num(x.log_norm)).collect::<Vec<_>>(),
        "alpha": num(r.alpha),
        "prefactor": num(r.prefactor),
        "residual": num(r.residual),
        "exp_slope": num(r.exp_slope),
        "verdict": r.verdict.as_str(),
    })
}

/// Adds the format tag to a top-level object.
pub fn tagged(mut v: Value) -> Value {
    match &mut v {
        Value::Object(m) => {
            m.insert("format".into(), json!(FORMAT));
            v
        }
        _ => json!({"format": FORMAT, "value": v}),
    }
}

/// Checks the format tag when present, and unwraps `{"value": ..}`
/// envelopes around non-object documents.
pub fn untagged(v: Value) -> Result<Value> {
    let Value::Object(mut m) = v else {
        return Ok(v);
    };
    match m.remove("format") {
        None => {}
        Some(Value::String(s)) if s == FORMAT => {}
        Some(other) => return Err(bad(format!("unsupported format {other}"))),
    }
    if m.len() == 1 {
        if let Some(inner) = m.remove("value") {
            return Ok(inner);
        }
    }
    Ok(Value::Object(m))
}
