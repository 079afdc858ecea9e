//! JSON forms for instances and reports.
//!
//! Numbers use the canonical text forms: integers as decimal strings,
//! rationals as `num/den`, dyadic reals as hex-significand literals. Field
//! order is fixed by construction so identical instances serialize to
//! identical bytes.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::{Failure, RecoveryReport, SupportSet, SupportValue};
use crate::arith::{rational_from_string, rational_to_string, PrecReal};
use crate::relation::PrecisionPolicy;

/// Measurement matrix: integer-valued or real-valued, row-major.
#[derive(Clone, Debug)]
pub enum MatrixData {
    Int(Vec<Vec<BigInt>>),
    Real(Vec<Vec<PrecReal>>),
}

/// Measurement vector: integer-valued or real-valued.
#[derive(Clone, Debug)]
pub enum VectorData {
    Int(Vec<BigInt>),
    Real(Vec<PrecReal>),
}

/// Parameter bundle carried by an instance; which fields are set depends on
/// the instance kind.
#[derive(Clone, Debug, Default)]
pub struct InstanceParams {
    pub q: Option<BigInt>,
    pub q_hat: Option<BigInt>,
    pub r: Option<BigInt>,
    pub r_hat: Option<BigInt>,
    pub r_tilde: Option<BigInt>,
    pub w_hat: Option<PrecReal>,
    pub n_bits: Option<u32>,
    pub sigma: Option<PrecReal>,
    pub precision: Option<u32>,
}

/// One recovery trial: measurements, parameters, and (for planted instances)
/// the ground truth.
#[derive(Clone, Debug)]
pub struct RegressionInstance {
    pub kind: String,
    pub n: usize,
    pub p: usize,
    pub x: MatrixData,
    pub y: VectorData,
    pub support: Option<SupportSet>,
    pub params: InstanceParams,
    pub beta_true: Option<Vec<SupportValue>>,
    pub seed: u64,
}

pub fn support_value_to_json(v: &SupportValue) -> Value {
    match v {
        SupportValue::Rational(r) => json!({ "rat": rational_to_string(r) }),
        SupportValue::Irrational(j) => json!({ "irr": j }),
    }
}

pub fn support_value_from_json(v: &Value) -> Result<SupportValue, String> {
    let obj = v.as_object().ok_or("support value must be an object")?;
    if let Some(r) = obj.get("rat") {
        let s = r.as_str().ok_or("rat must be a string")?;
        return Ok(SupportValue::Rational(rational_from_string(s).map_err(|e| e.to_string())?));
    }
    if let Some(j) = obj.get("irr") {
        let k = j.as_u64().ok_or("irr must be an index")? as usize;
        return Ok(SupportValue::Irrational(k));
    }
    Err("support value needs a 'rat' or 'irr' field".into())
}

pub fn support_set_to_json(s: &SupportSet) -> Value {
    json!({
        "values": s.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "includes_one": s.includes_one(),
    })
}

/// Rebuild a support set, re-running the independence screen.
pub fn support_set_from_json(v: &Value) -> Result<SupportSet, String> {
    let obj = v.as_object().ok_or("support must be an object")?;
    let values: Vec<PrecReal> = obj
        .get("values")
        .and_then(Value::as_array)
        .ok_or("support.values must be an array")?
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| "support value must be a string".to_string())
                .and_then(|t| t.parse::<PrecReal>().map_err(|e| e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let includes_one = obj.get("includes_one").and_then(Value::as_bool).unwrap_or(false);
    // fixed light screen (no-relation certificate ~2^64), independent of the
    // stored value precision
    let policy = PrecisionPolicy::for_relation(values.len() + 2, 64);
    SupportSet::screened(values, includes_one, &policy).map_err(|e| e.to_string())
}

fn bigint_vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn bigint_vec_from(v: &Value) -> Result<Vec<BigInt>, String> {
    v.as_array()
        .ok_or("expected array")?
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| "expected decimal string".to_string())
                .and_then(|t| t.parse::<BigInt>().map_err(|e| e.to_string()))
        })
        .collect()
}

fn prec_vec_json(v: &[PrecReal]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn prec_vec_from(v: &Value) -> Result<Vec<PrecReal>, String> {
    v.as_array()
        .ok_or("expected array")?
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| "expected numeric literal string".to_string())
                .and_then(|t| t.parse::<PrecReal>().map_err(|e| e.to_string()))
        })
        .collect()
}

pub fn matrix_to_json(m: &MatrixData) -> Value {
    match m {
        MatrixData::Int(rows) => json!({
            "type": "int",
            "rows": rows.iter().map(|r| bigint_vec_json(r)).collect::<Vec<_>>(),
        }),
        MatrixData::Real(rows) => json!({
            "type": "real",
            "rows": rows.iter().map(|r| prec_vec_json(r)).collect::<Vec<_>>(),
        }),
    }
}

pub fn matrix_from_json(v: &Value) -> Result<MatrixData, String> {
    let obj = v.as_object().ok_or("matrix must be an object")?;
    let ty = obj.get("type").and_then(Value::as_str).ok_or("matrix.type missing")?;
    let rows = obj.get("rows").and_then(Value::as_array).ok_or("matrix.rows missing")?;
    match ty {
        "int" => Ok(MatrixData::Int(rows.iter().map(bigint_vec_from).collect::<Result<_, _>>()?)),
        "real" => Ok(MatrixData::Real(rows.iter().map(prec_vec_from).collect::<Result<_, _>>()?)),
        other => Err(format!("unknown matrix type {:?}", other)),
    }
}

pub fn vector_to_json(v: &VectorData) -> Value {
    match v {
        VectorData::Int(vals) => json!({ "type": "int", "values": bigint_vec_json(vals) }),
        VectorData::Real(vals) => json!({ "type": "real", "values": prec_vec_json(vals) }),
    }
}

pub fn vector_from_json(v: &Value) -> Result<VectorData, String> {
    let obj = v.as_object().ok_or("vector must be an object")?;
    let ty = obj.get("type").and_then(Value::as_str).ok_or("vector.type missing")?;
    let vals = obj.get("values").ok_or("vector.values missing")?;
    match ty {
        "int" => Ok(VectorData::Int(bigint_vec_from(vals)?)),
        "real" => Ok(VectorData::Real(prec_vec_from(vals)?)),
        other => Err(format!("unknown vector type {:?}", other)),
    }
}

fn params_to_json(p: &InstanceParams) -> Value {
    let mut m = Map::new();
    if let Some(v) = &p.q {
        m.insert("q".into(), Value::String(v.to_string()));
    }
    if let Some(v) = &p.q_hat {
        m.insert("q_hat".into(), Value::String(v.to_string()));
    }
    if let Some(v) = &p.r {
        m.insert("r".into(), Value::String(v.to_string()));
    }
    if let Some(v) = &p.r_hat {
        m.insert("r_hat".into(), Value::String(v.to_string()));
    }
    if let Some(v) = &p.r_tilde {
        m.insert("r_tilde".into(), Value::String(v.to_string()));
    }
    if let Some(v) = &p.w_hat {
        m.insert("w_hat".into(), Value::String(v.to_string()));
    }
    if let Some(v) = p.n_bits {
        m.insert("n_bits".into(), json!(v));
    }
    if let Some(v) = &p.sigma {
        m.insert("sigma".into(), Value::String(v.to_string()));
    }
    if let Some(v) = p.precision {
        m.insert("precision".into(), json!(v));
    }
    Value::Object(m)
}

fn params_from_json(v: &Value) -> Result<InstanceParams, String> {
    let obj = v.as_object().ok_or("params must be an object")?;
    let get_int = |key: &str| -> Result<Option<BigInt>, String> {
        match obj.get(key) {
            None => Ok(None),
            Some(s) => s
                .as_str()
                .ok_or_else(|| format!("params.{} must be a string", key))?
                .parse::<BigInt>()
                .map(Some)
                .map_err(|e| e.to_string()),
        }
    };
    let get_real = |key: &str| -> Result<Option<PrecReal>, String> {
        match obj.get(key) {
            None => Ok(None),
            Some(s) => s
                .as_str()
                .ok_or_else(|| format!("params.{} must be a string", key))?
                .parse::<PrecReal>()
                .map(Some)
                .map_err(|e| e.to_string()),
        }
    };
    Ok(InstanceParams {
        q: get_int("q")?,
        q_hat: get_int("q_hat")?,
        r: get_int("r")?,
        r_hat: get_int("r_hat")?,
        r_tilde: get_int("r_tilde")?,
        w_hat: get_real("w_hat")?,
        n_bits: obj.get("n_bits").and_then(Value::as_u64).map(|v| v as u32),
        sigma: get_real("sigma")?,
        precision: obj.get("precision").and_then(Value::as_u64).map(|v| v as u32),
    })
}

pub fn instance_to_json(inst: &RegressionInstance) -> Value {
    json!({
        "kind": inst.kind,
        "n": inst.n,
        "p": inst.p,
        "x": matrix_to_json(&inst.x),
        "y": vector_to_json(&inst.y),
        "support": inst.support.as_ref().map(support_set_to_json).unwrap_or(Value::Null),
        "params": params_to_json(&inst.params),
        "beta_true": inst
            .beta_true
            .as_ref()
            .map(|b| Value::Array(b.iter().map(support_value_to_json).collect()))
            .unwrap_or(Value::Null),
        "seed": inst.seed,
    })
}

pub fn instance_from_json(v: &Value) -> Result<RegressionInstance, String> {
    let obj = v.as_object().ok_or("instance must be an object")?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or("kind missing")?.to_string();
    let n = obj.get("n").and_then(Value::as_u64).ok_or("n missing")? as usize;
    let p = obj.get("p").and_then(Value::as_u64).ok_or("p missing")? as usize;
    let x = matrix_from_json(obj.get("x").ok_or("x missing")?)?;
    let y = vector_from_json(obj.get("y").ok_or("y missing")?)?;
    let support = match obj.get("support") {
        None | Some(Value::Null) => None,
        Some(s) => Some(support_set_from_json(s)?),
    };
    let params = params_from_json(obj.get("params").unwrap_or(&Value::Object(Map::new())))?;
    let beta_true = match obj.get("beta_true") {
        None | Some(Value::Null) => None,
        Some(Value::Array(arr)) => {
            Some(arr.iter().map(support_value_from_json).collect::<Result<_, _>>()?)
        }
        Some(_) => return Err("beta_true must be an array".into()),
    };
    let seed = obj.get("seed").and_then(Value::as_u64).unwrap_or(0);
    validate_shapes(n, p, &x, &y)?;
    Ok(RegressionInstance { kind, n, p, x, y, support, params, beta_true, seed })
}

fn validate_shapes(n: usize, p: usize, x: &MatrixData, y: &VectorData) -> Result<(), String> {
    let (rows, cols_ok) = match x {
        MatrixData::Int(rows) => (rows.len(), rows.iter().all(|r| r.len() == p)),
        MatrixData::Real(rows) => (rows.len(), rows.iter().all(|r| r.len() == p)),
    };
    if rows != n || !cols_ok {
        return Err(format!("x must be {} rows of {} entries", n, p));
    }
    let ylen = match y {
        VectorData::Int(v) => v.len(),
        VectorData::Real(v) => v.len(),
    };
    if ylen != n {
        return Err(format!("y must have {} entries", n));
    }
    Ok(())
}

pub fn failure_to_json(f: &Failure) -> Value {
    json!({ "stage": f.stage, "reason": f.reason })
}

pub fn report_to_json(report: &RecoveryReport) -> Value {
    let estimate = match &report.estimate {
        Ok(beta) => json!({
            "status": "ok",
            "beta": beta.iter().map(support_value_to_json).collect::<Vec<_>>(),
        }),
        Err(f) => json!({
            "status": "failure",
            "failure": failure_to_json(f),
        }),
    };
    json!({
        "estimate": estimate,
        "exact_match": report.exact_match,
        "counters": {
            "lll_invocations": report.counters.lll_invocations,
            "pslq_iterations": report.counters.pslq_iterations,
        },
        "wall_time_ms": report.wall_time_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use num_traits::One;

    #[test]
    fn instance_roundtrip() {
        let inst = RegressionInstance {
            kind: "elo".into(),
            n: 1,
            p: 2,
            x: MatrixData::Int(vec![vec![BigInt::from(3), BigInt::from(5)]]),
            y: VectorData::Int(vec![BigInt::from(8)]),
            support: None,
            params: InstanceParams {
                r_hat: Some(BigInt::one()),
                w_hat: Some(PrecReal::zero(64)),
                n_bits: Some(60),
                ..Default::default()
            },
            beta_true: Some(vec![
                SupportValue::Rational(Rational::one()),
                SupportValue::Rational(Rational::one()),
            ]),
            seed: 7,
        };
        let j = instance_to_json(&inst);
        let back = instance_from_json(&j).unwrap();
        assert_eq!(instance_to_json(&back), j);
    }

    #[test]
    fn malformed_instance_is_rejected() {
        let j = serde_json::json!({ "kind": "elo", "n": 2, "p": 2,
            "x": {"type": "int", "rows": [["1", "2"]]},
            "y": {"type": "int", "values": ["1", "2"]} });
        assert!(instance_from_json(&j).is_err());
    }
}
