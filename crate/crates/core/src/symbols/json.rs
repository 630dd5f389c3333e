//! JSON schema for symbols, shared with the CLI.
//!
//! ```json
//! {"kind":"polynomial","coeffs":[[re,im],...]}
//! {"kind":"blaschke","zeros":[[re,im],...]}
//! {"kind":"rational","num":[[re,im],...],"den":[[re,im],...]}
//! {"kind":"sum","children":[...]}      {"kind":"product","children":[...]}
//! {"kind":"scale","factor":[re,im],"child":{...}}
//! {"kind":"const","value":[re,im]}
//! ```
//!
//! Parsing is done by hand on `serde_json::Value` so that every error
//! names the offending node path (e.g. `$.children[1].zeros[0]`).

use num_complex::Complex64;
use serde_json::Value;

use super::SymbolExpr;
use crate::error::{Error, Result};

/// Parse and validate a symbol from JSON text.
pub fn parse_symbol(text: &str) -> Result<SymbolExpr> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::config("$", format!("not valid JSON: {e}")))?;
    let expr = parse_node(&value, "$")?;
    expr.validate()?;
    Ok(expr)
}

/// Render a symbol back into schema JSON (used to echo configs in reports).
pub fn symbol_to_json(expr: &SymbolExpr) -> Value {
    fn c(v: &Complex64) -> Value {
        Value::Array(vec![v.re.into(), v.im.into()])
    }
    fn list(vs: &[Complex64]) -> Value {
        Value::Array(vs.iter().map(c).collect())
    }
    match expr {
        SymbolExpr::Polynomial(coeffs) => serde_json::json!({
            "kind": "polynomial", "coeffs": list(coeffs)
        }),
        SymbolExpr::BlaschkeProduct(zeros) => serde_json::json!({
            "kind": "blaschke", "zeros": list(zeros)
        }),
        SymbolExpr::Rational { num, den } => serde_json::json!({
            "kind": "rational", "num": list(num), "den": list(den)
        }),
        SymbolExpr::Sum(children) => serde_json::json!({
            "kind": "sum",
            "children": children.iter().map(symbol_to_json).collect::<Vec<_>>()
        }),
        SymbolExpr::Product(children) => serde_json::json!({
            "kind": "product",
            "children": children.iter().map(symbol_to_json).collect::<Vec<_>>()
        }),
        SymbolExpr::Scale { factor, child } => serde_json::json!({
            "kind": "scale", "factor": c(factor), "child": symbol_to_json(child)
        }),
        SymbolExpr::Const(v) => serde_json::json!({
            "kind": "const", "value": c(v)
        }),
    }
}

fn parse_node(value: &Value, path: &str) -> Result<SymbolExpr> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::config(path, "expected an object with a \"kind\" field"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::config(format!("{path}.kind"), "missing or non-string"))?;
    match kind {
        "polynomial" => Ok(SymbolExpr::Polynomial(parse_complex_list(
            obj.get("coeffs"),
            &format!("{path}.coeffs"),
        )?)),
        "blaschke" => Ok(SymbolExpr::BlaschkeProduct(parse_complex_list(
            obj.get("zeros"),
            &format!("{path}.zeros"),
        )?)),
        "rational" => Ok(SymbolExpr::Rational {
            num: parse_complex_list(obj.get("num"), &format!("{path}.num"))?,
            den: parse_complex_list(obj.get("den"), &format!("{path}.den"))?,
        }),
        "sum" | "product" => {
            let children_path = format!("{path}.children");
            let arr = obj
                .get("children")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::config(&children_path, "missing or not an array"))?;
            let mut children = Vec::with_capacity(arr.len());
            for (i, child) in arr.iter().enumerate() {
                children.push(parse_node(child, &format!("{children_path}[{i}]"))?);
            }
            if kind == "sum" {
                Ok(SymbolExpr::Sum(children))
            } else {
                Ok(SymbolExpr::Product(children))
            }
        }
        "scale" => {
            let factor = parse_complex(obj.get("factor"), &format!("{path}.factor"))?;
            let child = obj
                .get("child")
                .ok_or_else(|| Error::config(format!("{path}.child"), "missing"))?;
            Ok(SymbolExpr::Scale {
                factor,
                child: Box::new(parse_node(child, &format!("{path}.child"))?),
            })
        }
        "const" => Ok(SymbolExpr::Const(parse_complex(
            obj.get("value"),
            &format!("{path}.value"),
        )?)),
        other => Err(Error::config(
            format!("{path}.kind"),
            format!(
                "unknown kind \"{other}\" (expected polynomial, blaschke, rational, sum, product, scale or const)"
            ),
        )),
    }
}

fn parse_complex(value: Option<&Value>, path: &str) -> Result<Complex64> {
    let arr = value
        .and_then(Value::as_array)
        .ok_or_else(|| Error::config(path, "expected [re, im]"))?;
    if arr.len() != 2 {
        return Err(Error::config(path, "expected exactly two numbers [re, im]"));
    }
    let re = arr[0]
        .as_f64()
        .ok_or_else(|| Error::config(format!("{path}[0]"), "expected a number"))?;
    let im = arr[1]
        .as_f64()
        .ok_or_else(|| Error::config(format!("{path}[1]"), "expected a number"))?;
    Ok(Complex64::new(re, im))
}

fn parse_complex_list(value: Option<&Value>, path: &str) -> Result<Vec<Complex64>> {
    let arr = value
        .and_then(Value::as_array)
        .ok_or_else(|| Error::config(path, "missing or not an array"))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, v) in arr.iter().enumerate() {
        out.push(parse_complex(Some(v), &format!("{path}[{i}]"))?);
    }
    Ok(out)
}
