//! JSON file formats: instances, reconstruction problems, solve reports,
//! and search traces.
//!
//! An instance file looks like
//!
//! ```json
//! {
//!   "intervals": [[0, 1], ["3/2", "7/2"]],
//!   "cost": { "kind": "pow2" },
//!   "mode": "exact"
//! }
//! ```
//!
//! Endpoints and cost parameters are JSON integers or strings holding an
//! integer (`"7"`, `"-3"`), a fraction (`"3/4"`), or a terminating
//! decimal (`"0.25"`). Non-integer JSON *numbers* are rejected: `0.1` has
//! no exact binary value, so fractional inputs must travel as strings.
//! Rational endpoints are brought to integer ticks by the least common
//! denominator, recorded as the instance's `scale`; emission reduces each
//! `tick/scale` again, so parse → emit → parse reproduces the identical
//! instance.
//!
//! Exact cost values serialize as canonical strings — plain decimal
//! digits for integers, `"p/q"` otherwise — since arbitrary-precision
//! values do not fit JSON numbers. Float values serialize as JSON
//! numbers, falling back to strings for non-finite values.

use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::bsrp::{BsrpInstance, SearchOutcome, SearchTrace, Triplet};
use crate::costfn::{CostFunction, CostKind, CostValue, EvalMode};
use crate::error::{Error, Result};
use crate::interval::Instance;
use crate::solvers::SolveReport;

/// Parses a strict rational literal: optional `-`, then digits, then
/// optionally `/digits` (fraction) or `.digits` (terminating decimal).
/// No exponents, whitespace, or `+` signs.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let (negative, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let magnitude = if let Some((numer, denom)) = rest.split_once('/') {
        let n = parse_digits(numer, s)?;
        let d = parse_digits(denom, s)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        BigRational::new(n, d)
    } else if let Some((int_part, frac_part)) = rest.split_once('.') {
        let i = parse_digits(int_part, s)?;
        let f = parse_digits(frac_part, s)?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        BigRational::new(i * &den + f, den)
    } else {
        BigRational::from_integer(parse_digits(rest, s)?)
    };
    Ok(if negative { -magnitude } else { magnitude })
}

fn parse_digits(part: &str, whole: &str) -> Result<BigInt> {
    if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!(
            "{whole:?} is not a rational literal (expected digits, \"p/q\", or \"d.d\")"
        )));
    }
    Ok(part.parse().expect("digit strings parse as BigInt"))
}

/// Renders a rational canonically: decimal digits when integral,
/// `"p/q"` in lowest terms otherwise.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational as a JSON value: an integer number when it is integral and
/// fits, a canonical string otherwise.
fn rational_value(r: &BigRational) -> Value {
    if r.is_integer() {
        if let Some(v) = r.numer().to_i64() {
            return json!(v);
        }
    }
    Value::String(rational_to_string(r))
}

fn rational_from_value(v: &Value, what: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(BigRational::from_integer(BigInt::from(u)))
            } else {
                Err(Error::Parse(format!(
                    "{what}: non-integer JSON numbers are not accepted; \
                     write fractions as strings like \"3/4\" or \"0.75\""
                )))
            }
        }
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!(
            "{what}: expected an integer or a rational string, got {other}"
        ))),
    }
}

fn expect_object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what}: expected a JSON object")))
}

fn expect_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected a JSON array")))
}

fn expect_str<'v>(v: &'v Value, what: &str) -> Result<&'v str> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("{what}: expected a JSON string")))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Parse(format!(
                "{what}: unknown key {key:?} (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn get<'v>(obj: &'v Map<String, Value>, key: &str, what: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("{what}: missing key {key:?}")))
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn parse_mode(v: &Value) -> Result<EvalMode> {
    match expect_str(v, "mode")? {
        "exact" => Ok(EvalMode::Exact),
        "float" => Ok(EvalMode::Float),
        other => Err(Error::Parse(format!(
            "mode: expected \"exact\" or \"float\", got {other:?}"
        ))),
    }
}

fn parse_cost(v: &Value) -> Result<CostFunction> {
    let obj = expect_object(v, "cost")?;
    check_keys(obj, &["kind", "params"], "cost")?;
    let kind = expect_str(get(obj, "kind", "cost")?, "cost.kind")?;
    let params = match obj.get("params") {
        None | Some(Value::Null) => None,
        Some(p) => Some(expect_object(p, "cost.params")?),
    };
    let param = |name: &str| -> Result<BigRational> {
        let p = params.ok_or_else(|| {
            Error::Parse(format!("cost kind {kind:?} needs params.{name}"))
        })?;
        rational_from_value(get(p, name, "cost.params")?, &format!("cost.params.{name}"))
    };
    match kind {
        "pow2" | "p2free" => {
            if params.is_some_and(|p| !p.is_empty()) {
                return Err(Error::Parse(format!("cost kind {kind:?} takes no params")));
            }
            Ok(if kind == "pow2" {
                CostFunction::pow2()
            } else {
                CostFunction::p2free()
            })
        }
        "linear" => {
            check_keys(params.unwrap_or(&Map::new()), &["slope", "intercept"], "cost.params")?;
            Ok(CostFunction::linear(param("slope")?, param("intercept")?))
        }
        "power" => {
            check_keys(params.unwrap_or(&Map::new()), &["exponent"], "cost.params")?;
            CostFunction::power(param("exponent")?)
        }
        "table" => {
            let p = params
                .ok_or_else(|| Error::Parse("cost kind \"table\" needs params".into()))?;
            check_keys(p, &["breakpoints", "values"], "cost.params")?;
            let list = |name: &str| -> Result<Vec<BigRational>> {
                expect_array(get(p, name, "cost.params")?, &format!("cost.params.{name}"))?
                    .iter()
                    .map(|v| rational_from_value(v, &format!("cost.params.{name}")))
                    .collect()
            };
            CostFunction::table(list("breakpoints")?, list("values")?)
        }
        other => Err(Error::Parse(format!(
            "cost.kind: unknown kind {other:?} \
             (expected pow2, linear, power, p2free, or table)"
        ))),
    }
}

fn cost_to_value(cf: &CostFunction) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(cf.kind_name()));
    let params = match &cf.kind {
        CostKind::Pow2 | CostKind::P2Free => None,
        CostKind::Linear { slope, intercept } => Some(json!({
            "slope": rational_value(slope),
            "intercept": rational_value(intercept),
        })),
        CostKind::Power { exponent } => Some(json!({ "exponent": rational_value(exponent) })),
        CostKind::Table {
            breakpoints,
            values,
        } => Some(json!({
            "breakpoints": breakpoints.iter().map(rational_value).collect::<Vec<_>>(),
            "values": values.iter().map(rational_value).collect::<Vec<_>>(),
        })),
    };
    if let Some(p) = params {
        obj.insert("params".into(), p);
    }
    Value::Object(obj)
}

/// Parses an instance file, scaling rational endpoints to integer ticks
/// by their least common denominator.
pub fn parse_instance_json(text: &str) -> Result<Instance> {
    let root = parse_json(text)?;
    let obj = expect_object(&root, "instance")?;
    check_keys(obj, &["intervals", "cost", "mode"], "instance")?;
    let cost = parse_cost(get(obj, "cost", "instance")?)?;
    let mode = parse_mode(get(obj, "mode", "instance")?)?;
    let raw = expect_array(get(obj, "intervals", "instance")?, "intervals")?;
    let mut endpoints = Vec::with_capacity(raw.len());
    for (i, pair) in raw.iter().enumerate() {
        let what = format!("intervals[{i}]");
        let pair = expect_array(pair, &what)?;
        if pair.len() != 2 {
            return Err(Error::Parse(format!("{what}: expected [a, b]")));
        }
        endpoints.push((
            rational_from_value(&pair[0], &format!("{what}.a"))?,
            rational_from_value(&pair[1], &format!("{what}.b"))?,
        ));
    }

    let mut lcd = BigInt::one();
    for (a, b) in &endpoints {
        lcd = lcd.lcm(a.denom());
        lcd = lcd.lcm(b.denom());
    }
    let scale = lcd
        .to_i64()
        .ok_or_else(|| Error::Parse("common denominator of endpoints exceeds i64".into()))?;
    let to_tick = |r: &BigRational, i: usize| -> Result<i64> {
        (r * &lcd).to_integer().to_i64().ok_or_else(|| {
            Error::Parse(format!(
                "intervals[{i}]: endpoint does not fit integer ticks at scale {scale}"
            ))
        })
    };
    let ticks = endpoints
        .iter()
        .enumerate()
        .map(|(i, (a, b))| Ok((to_tick(a, i)?, to_tick(b, i)?)))
        .collect::<Result<Vec<_>>>()?;
    Instance::with_scale(&ticks, cost, mode, scale)
}

/// Serializes an instance back to the file format (pretty-printed, keys
/// sorted, trailing newline).
pub fn instance_to_json(inst: &Instance) -> String {
    let scale = BigInt::from(inst.scale);
    let endpoint = |t: i64| rational_value(&BigRational::new(BigInt::from(t), scale.clone()));
    let intervals: Vec<Value> = inst
        .intervals()
        .iter()
        .map(|iv| json!([endpoint(iv.a), endpoint(iv.b)]))
        .collect();
    let doc = json!({
        "intervals": intervals,
        "cost": cost_to_value(&inst.cost),
        "mode": match inst.mode {
            EvalMode::Exact => "exact",
            EvalMode::Float => "float",
        },
    });
    to_pretty(&doc)
}

/// Parses a reconstruction-problem file:
/// `{"m": 6, "triplets": [{"a": 1, "b": 5, "z": "10101"}, ...]}`.
pub fn parse_bsrp_json(text: &str) -> Result<BsrpInstance> {
    let root = parse_json(text)?;
    let obj = expect_object(&root, "problem")?;
    check_keys(obj, &["m", "triplets"], "problem")?;
    let m = get(obj, "m", "problem")?
        .as_u64()
        .ok_or_else(|| Error::Parse("m: expected a non-negative integer".into()))?;
    let m = usize::try_from(m).map_err(|_| Error::Parse("m does not fit usize".into()))?;
    let raw = expect_array(get(obj, "triplets", "problem")?, "triplets")?;
    let mut triplets = Vec::with_capacity(raw.len());
    for (i, t) in raw.iter().enumerate() {
        let what = format!("triplets[{i}]");
        let t = expect_object(t, &what)?;
        check_keys(t, &["a", "b", "z"], &what)?;
        let pos = |key: &str| -> Result<usize> {
            get(t, key, &what)?
                .as_u64()
                .and_then(|v| usize::try_from(v).ok())
                .ok_or_else(|| Error::Parse(format!("{what}.{key}: expected a positive integer")))
        };
        triplets.push(Triplet {
            a: pos("a")?,
            b: pos("b")?,
            z: expect_str(get(t, "z", &what)?, &format!("{what}.z"))?.to_string(),
        });
    }
    BsrpInstance::new(m, triplets)
}

/// Serializes a reconstruction problem back to its file format.
pub fn bsrp_to_json(inst: &BsrpInstance) -> String {
    let triplets: Vec<Value> = inst
        .triplets()
        .iter()
        .map(|t| json!({ "a": t.a, "b": t.b, "z": t.z }))
        .collect();
    to_pretty(&json!({ "m": inst.m(), "triplets": triplets }))
}

fn cost_value_json(cv: &CostValue) -> Value {
    match cv {
        CostValue::Exact(_) => Value::String(cv.to_canonical_string()),
        CostValue::Float(f) => serde_json::Number::from_f64(*f)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(format!("{f}"))),
    }
}

/// Renders a solve report. Exposed lengths appear both in ticks and
/// unscaled (`ticks / scale`); exact costs are canonical strings.
pub fn report_to_json(rep: &SolveReport, inst: &Instance) -> String {
    let scale = BigInt::from(inst.scale);
    let unscaled: Vec<Value> = rep
        .result
        .exposed
        .iter()
        .map(|&t| rational_value(&BigRational::new(BigInt::from(t), scale.clone())))
        .collect();
    let doc = json!({
        "algorithm": rep.algorithm.name(),
        "objective": rep.objective.to_string(),
        "status": rep.status.name(),
        "order": rep.result.order,
        "exposed_ticks": rep.result.exposed,
        "exposed": unscaled,
        "scale": inst.scale,
        "sum_cost": cost_value_json(&rep.result.sum_cost),
        "bottleneck_cost": cost_value_json(&rep.result.bottleneck_cost),
        "structure": {
            "agreeable": rep.evidence.agreeable,
            "laminar": rep.evidence.laminar,
            "components": rep.evidence.components,
        },
        "wall_ms": rep.wall.as_secs_f64() * 1e3,
    });
    to_pretty(&doc)
}

/// Renders a search trace. Space and call counts are decimal strings —
/// they grow as `2^ℓ` and overflow JSON numbers quickly.
pub fn trace_to_json(trace: &SearchTrace) -> String {
    let outcome = match &trace.outcome {
        SearchOutcome::Reconstructed(y) => json!({ "status": "reconstructed", "y": y }),
        SearchOutcome::Infeasible { triplet } => {
            json!({ "status": "infeasible", "triplet": triplet })
        }
    };
    let decimal = |v: &num::BigUint| Value::String(v.to_string());
    let doc = json!({
        "order": trace.order,
        "ell": trace.ell,
        "spaces": trace.spaces().iter().map(decimal).collect::<Vec<_>>(),
        "calls": trace.calls.iter().map(decimal).collect::<Vec<_>>(),
        "total_space": decimal(&trace.total_space()),
        "total_calls": decimal(&trace.total_calls()),
        "outcome": outcome,
    });
    to_pretty(&doc)
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
