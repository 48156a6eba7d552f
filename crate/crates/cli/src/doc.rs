//! Input documents.
//!
//! Every document is JSON. Syntax errors carry a line and column; schema
//! errors carry the path of the offending value, e.g. `$.n1.generators[2]`.

use std::fmt;
use std::sync::Arc;

use multinorm::cyclotomic::{compositum, CycloField};
use multinorm::grouptable::CayleyGroup;
use multinorm::obstruction::{AbelianTower, LocalFamily};
use multinorm::{Elem, FinAbGroup, Subgroup};
use serde_json::Value;

/// Permutation groups in input files are enumerated up to this order.
pub const CAYLEY_LIMIT: usize = 4096;
/// Subgroup enumeration bound when a family is left implicit.
pub const FAMILY_LIMIT: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = Result<T, ParseError>;

fn err<T>(path: &str, message: impl Into<String>) -> ParseResult<T> {
    Err(ParseError {
        location: path.to_string(),
        message: message.into(),
    })
}

/// Parses JSON text, reporting `line:column` for syntax errors.
pub fn parse_json(source: &str, text: &str) -> ParseResult<Value> {
    serde_json::from_str(text).map_err(|e| ParseError {
        location: format!("{source}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> ParseResult<&'a Value> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => err(path, format!("missing key \"{key}\"")),
    }
}

fn object<'a>(v: &'a Value, path: &str) -> ParseResult<&'a serde_json::Map<String, Value>> {
    v.as_object()
        .map_or_else(|| err(path, "expected an object"), Ok)
}

fn array<'a>(v: &'a Value, path: &str) -> ParseResult<&'a Vec<Value>> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

fn uint(v: &Value, path: &str) -> ParseResult<u64> {
    v.as_u64()
        .map_or_else(|| err(path, "expected a non-negative integer"), Ok)
}

fn int(v: &Value, path: &str) -> ParseResult<i64> {
    v.as_i64().map_or_else(|| err(path, "expected an integer"), Ok)
}

fn uints(v: &Value, path: &str) -> ParseResult<Vec<u64>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| uint(x, &format!("{path}[{i}]")))
        .collect()
}

fn lib<T>(path: &str, r: multinorm::Result<T>) -> ParseResult<T> {
    r.map_err(|e| ParseError {
        location: path.to_string(),
        message: e.to_string(),
    })
}

/// Comma-separated cyclic orders, e.g. `2,2`.
pub fn group_shorthand(s: &str) -> Option<FinAbGroup> {
    let orders: Option<Vec<u64>> = s
        .split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().ok())
        .collect();
    FinAbGroup::from_cyclic_orders(&orders?).ok()
}

/// `{"invariant_factors": [...]}`, given as any list of cyclic orders.
pub fn group(v: &Value, path: &str) -> ParseResult<FinAbGroup> {
    object(v, path)?;
    let p = format!("{path}.invariant_factors");
    let orders = uints(field(v, path, "invariant_factors")?, &p)?;
    if orders.contains(&0) {
        return err(&p, "cyclic orders must be positive");
    }
    lib(&p, FinAbGroup::from_cyclic_orders(&orders))
}

fn element(g: &FinAbGroup, v: &Value, path: &str) -> ParseResult<Elem> {
    let x = uints(v, path)?;
    if x.len() != g.rank() {
        return err(path, format!("expected {} coordinates for {g}", g.rank()));
    }
    Ok(g.invariant_factors().iter().zip(&x).map(|(d, c)| c % d).collect())
}

/// `{"generators": [[...], ...]}`
pub fn subgroup(g: &FinAbGroup, v: &Value, path: &str) -> ParseResult<Subgroup> {
    object(v, path)?;
    let p = format!("{path}.generators");
    let gens = array(field(v, path, "generators")?, &p)?
        .iter()
        .enumerate()
        .map(|(i, x)| element(g, x, &format!("{p}[{i}]")))
        .collect::<ParseResult<Vec<_>>>()?;
    lib(path, Subgroup::generated(g, gens))
}

/// A list of subgroups, or all cyclic subgroups when absent.
pub fn family(g: &FinAbGroup, v: Option<&Value>, path: &str) -> ParseResult<LocalFamily> {
    let Some(v) = v else {
        return lib(path, LocalFamily::all_cyclic(g, FAMILY_LIMIT));
    };
    let places = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| subgroup(g, x, &format!("{path}[{i}]")))
        .collect::<ParseResult<Vec<_>>>()?;
    lib(path, LocalFamily::new(g, places))
}

/// `{"conductor": n, "fixing_subgroup": [...]}`, `{"quadratic": d}` or
/// `{"compositum": [field, ...]}`.
pub fn cyclo_field(v: &Value, path: &str) -> ParseResult<CycloField> {
    let obj = object(v, path)?;
    if let Some(d) = obj.get("quadratic") {
        let p = format!("{path}.quadratic");
        return lib(&p, CycloField::quadratic(int(d, &p)?));
    }
    if let Some(parts) = obj.get("compositum") {
        let p = format!("{path}.compositum");
        let mut acc = CycloField::rational();
        for (i, x) in array(parts, &p)?.iter().enumerate() {
            let q = format!("{p}[{i}]");
            let f = cyclo_field(x, &q)?;
            acc = lib(&q, compositum(&acc, &f))?;
        }
        return Ok(acc);
    }
    if let Some(n) = obj.get("conductor") {
        let p = format!("{path}.conductor");
        let n = uint(n, &p)?;
        let fixing = match obj.get("fixing_subgroup") {
            Some(h) => uints(h, &format!("{path}.fixing_subgroup"))?,
            None => Vec::new(),
        };
        return lib(path, CycloField::new(n, &fixing));
    }
    err(path, "expected \"conductor\", \"quadratic\" or \"compositum\"")
}

/// What `sha` runs on: a field with its realizable family, or an explicit
/// group with a family.
#[derive(Clone, Debug)]
pub enum ShaInput {
    Field(CycloField),
    Group(FinAbGroup, LocalFamily),
}

pub fn sha_input(v: &Value) -> ParseResult<ShaInput> {
    let obj = object(v, "$")?;
    if obj.contains_key("group") {
        let g = group(&v["group"], "$.group")?;
        let fam = family(&g, obj.get("family"), "$.family")?;
        Ok(ShaInput::Group(g, fam))
    } else {
        Ok(ShaInput::Field(cyclo_field(v, "$")?))
    }
}

/// A tower with its family, from either schema.
#[derive(Clone, Debug)]
pub struct TowerInput {
    pub tower: AbelianTower,
    pub family: LocalFamily,
    /// Present when the tower came from a pair of fields.
    pub fields: Option<(CycloField, CycloField)>,
}

/// `{"group", "n1", "n2", "family"}` or `{"l1": field, "l2": field}`.
/// Tower-invariant violations are returned as library errors, not parse
/// errors, so the caller can report them as such.
pub fn tower_input(v: &Value) -> ParseResult<multinorm::Result<TowerInput>> {
    let obj = object(v, "$")?;
    if obj.contains_key("l1") || obj.contains_key("l2") {
        let l1 = cyclo_field(field(v, "$", "l1")?, "$.l1")?;
        let l2 = cyclo_field(field(v, "$", "l2")?, "$.l2")?;
        return Ok(
            multinorm::cyclotomic::tower_from_fields(&l1, &l2).map(|(tower, family)| TowerInput {
                tower,
                family,
                fields: Some((l1, l2)),
            }),
        );
    }
    let g = group(field(v, "$", "group")?, "$.group")?;
    let n1 = subgroup(&g, field(v, "$", "n1")?, "$.n1")?;
    let n2 = subgroup(&g, field(v, "$", "n2")?, "$.n2")?;
    let fam = family(&g, obj.get("family"), "$.family")?;
    Ok(AbelianTower::new(&g, n1, n2).map(|tower| TowerInput {
        tower,
        family: fam,
        fields: None,
    }))
}

/// A permutation group with two normal subgroups given by element indices.
#[derive(Clone, Debug)]
pub struct CayleyInput {
    pub group: Arc<CayleyGroup>,
    pub n1: Vec<usize>,
    pub n2: Vec<usize>,
}

fn perm(v: &Value, path: &str) -> ParseResult<Vec<usize>> {
    Ok(uints(v, path)?.into_iter().map(|x| x as usize).collect())
}

fn table_subgroup(g: &CayleyGroup, v: &Value, path: &str) -> ParseResult<Vec<usize>> {
    let obj = object(v, path)?;
    let picked: Vec<usize> = if let Some(els) = obj.get("elements") {
        let p = format!("{path}.elements");
        let xs = uints(els, &p)?;
        for (i, &x) in xs.iter().enumerate() {
            if x as usize >= g.order() {
                return err(&format!("{p}[{i}]"), format!("no element {x} in a group of order {}", g.order()));
            }
        }
        xs.into_iter().map(|x| x as usize).collect()
    } else if let Some(gens) = obj.get("permutation_generators") {
        let p = format!("{path}.permutation_generators");
        array(gens, &p)?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let q = format!("{p}[{i}]");
                let pm = perm(x, &q)?;
                g.element_of_permutation(&pm)
                    .map_or_else(|| err(&q, "permutation is not in the group"), Ok)
            })
            .collect::<ParseResult<_>>()?
    } else {
        return err(path, "expected \"elements\" or \"permutation_generators\"");
    };
    Ok(g.closure(&picked))
}

/// `{"permutation_generators": [...], "n1": {...}, "n2": {...}}` where each
/// subgroup is `{"elements": [...]}` (indices in enumeration order) or
/// `{"permutation_generators": [...]}`.
pub fn cayley_input(v: &Value) -> ParseResult<CayleyInput> {
    object(v, "$")?;
    let p = "$.permutation_generators";
    let gens = array(field(v, "$", "permutation_generators")?, p)?
        .iter()
        .enumerate()
        .map(|(i, x)| perm(x, &format!("{p}[{i}]")))
        .collect::<ParseResult<Vec<_>>>()?;
    let group = Arc::new(lib(p, CayleyGroup::from_generators(CAYLEY_LIMIT, &gens))?);
    let n1 = table_subgroup(&group, field(v, "$", "n1")?, "$.n1")?;
    let n2 = table_subgroup(&group, field(v, "$", "n2")?, "$.n2")?;
    Ok(CayleyInput { group, n1, n2 })
}
