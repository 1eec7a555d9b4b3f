//! Cost functions applied to exposed lengths.
//!
//! A cost function maps a non-negative length `x` to a cost `f(x)`. Values are
//! computed either exactly (arbitrary-precision rationals) or in `f64`,
//! depending on [`EvalMode`]; the two modes are never mixed in one
//! computation. Solvers dispatch on [`CostFlags`], which are derived
//! automatically for the built-in kinds and can be spot-checked numerically
//! with [`check_flags`].

use std::cmp::Ordering;
use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic mode for cost values. `Exact` uses big rationals, `Float` uses
/// `f64` throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    Float,
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalMode::Exact => "exact",
            EvalMode::Float => "float",
        })
    }
}

/// The supported cost-function families.
#[derive(Clone, Debug, PartialEq)]
pub enum CostKind {
    /// f(x) = 2^x
    Pow2,
    /// f(x) = slope * x + intercept
    Linear {
        slope: BigRational,
        intercept: BigRational,
    },
    /// f(x) = x^p for a fixed exponent p >= 0. Exact evaluation requires an
    /// integer exponent.
    Power { exponent: BigRational },
    /// f(x) = 0 when x is a power of two (1, 2, 4, ...), otherwise f(x) = x.
    P2Free,
    /// Piecewise-linear interpolation through `(breakpoints[i], values[i])`,
    /// extrapolated past the last breakpoint with the final slope.
    Table {
        breakpoints: Vec<BigRational>,
        values: Vec<BigRational>,
    },
}

/// Structural properties solvers are allowed to rely on.
///
/// `g_superadditive` / `g_subadditive` refer to g(x) = f(x) - f(0) on x >= 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CostFlags {
    pub non_decreasing: bool,
    pub non_increasing: bool,
    pub convex_continuous: bool,
    pub g_superadditive: bool,
    pub g_subadditive: bool,
}

/// A cost kind plus the flags describing it.
///
/// Constructors derive the flags; they are public so callers with outside
/// knowledge can override them, at their own risk.
#[derive(Clone, Debug, PartialEq)]
pub struct CostFunction {
    pub kind: CostKind,
    pub flags: CostFlags,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl CostFunction {
    /// Builds a cost function, deriving flags from the kind.
    pub fn new(kind: CostKind) -> Result<Self> {
        let flags = derive_flags(&kind)?;
        Ok(CostFunction { kind, flags })
    }

    /// f(x) = 2^x.
    pub fn pow2() -> Self {
        CostFunction::new(CostKind::Pow2).expect("pow2 is always valid")
    }

    /// f(x) = slope * x + intercept.
    pub fn linear(slope: BigRational, intercept: BigRational) -> Self {
        CostFunction::new(CostKind::Linear { slope, intercept }).expect("linear is always valid")
    }

    /// Convenience for integer linear coefficients.
    pub fn linear_int(slope: i64, intercept: i64) -> Self {
        Self::linear(int(slope), int(intercept))
    }

    /// f(x) = x^p, p >= 0.
    pub fn power(exponent: BigRational) -> Result<Self> {
        CostFunction::new(CostKind::Power { exponent })
    }

    /// f(x) = x^p for an integer exponent.
    pub fn power_int(exponent: i64) -> Result<Self> {
        Self::power(int(exponent))
    }

    /// f(x) = 0 on powers of two, x elsewhere.
    pub fn p2free() -> Self {
        CostFunction::new(CostKind::P2Free).expect("p2free is always valid")
    }

    /// Piecewise-linear table; breakpoints must start at 0 and increase
    /// strictly, with one value per breakpoint.
    pub fn table(breakpoints: Vec<BigRational>, values: Vec<BigRational>) -> Result<Self> {
        CostFunction::new(CostKind::Table {
            breakpoints,
            values,
        })
    }

    /// True when every length with an exact tick representation evaluates
    /// exactly (the requirement for building an `Exact`-mode instance).
    pub fn exact_evaluable(&self) -> bool {
        match &self.kind {
            CostKind::Pow2 | CostKind::Linear { .. } | CostKind::P2Free | CostKind::Table { .. } => {
                true
            }
            CostKind::Power { exponent } => exponent.is_integer(),
        }
    }

    /// Stable identifier used in files and reports.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            CostKind::Pow2 => "pow2",
            CostKind::Linear { .. } => "linear",
            CostKind::Power { .. } => "power",
            CostKind::P2Free => "p2free",
            CostKind::Table { .. } => "table",
        }
    }
}

fn derive_flags(kind: &CostKind) -> Result<CostFlags> {
    let mut flags = CostFlags::default();
    match kind {
        CostKind::Pow2 => {
            flags.non_decreasing = true;
            flags.convex_continuous = true;
            flags.g_superadditive = true;
        }
        CostKind::Linear { slope, .. } => {
            flags.non_decreasing = !slope.is_negative();
            flags.non_increasing = !slope.is_positive();
            flags.convex_continuous = true;
            // g(x) = slope * x is additive, so both bounds hold.
            flags.g_superadditive = true;
            flags.g_subadditive = true;
        }
        CostKind::Power { exponent } => {
            if exponent.is_negative() {
                return Err(Error::Params("power exponent must be >= 0".into()));
            }
            let one = BigRational::one();
            flags.non_decreasing = true;
            flags.non_increasing = exponent.is_zero();
            flags.convex_continuous = exponent >= &one || exponent.is_zero();
            flags.g_superadditive = exponent >= &one || exponent.is_zero();
            flags.g_subadditive = exponent <= &one;
        }
        CostKind::P2Free => {}
        CostKind::Table {
            breakpoints,
            values,
        } => {
            if breakpoints.is_empty() {
                return Err(Error::Params("table needs at least one breakpoint".into()));
            }
            if breakpoints.len() != values.len() {
                return Err(Error::Params(
                    "table breakpoints and values must have equal length".into(),
                ));
            }
            if !breakpoints[0].is_zero() {
                return Err(Error::Params("table breakpoints must start at 0".into()));
            }
            if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Params(
                    "table breakpoints must be strictly increasing".into(),
                ));
            }
            let slopes: Vec<BigRational> = breakpoints
                .windows(2)
                .zip(values.windows(2))
                .map(|(bp, v)| (&v[1] - &v[0]) / (&bp[1] - &bp[0]))
                .collect();
            flags.non_decreasing = slopes.iter().all(|s| !s.is_negative());
            flags.non_increasing = slopes.iter().all(|s| !s.is_positive());
            let convex = slopes.windows(2).all(|w| w[0] <= w[1]);
            let concave = slopes.windows(2).all(|w| w[0] >= w[1]);
            flags.convex_continuous = convex;
            // Piecewise-linear with g(0) = 0: convexity gives superadditivity
            // of g on x >= 0, concavity gives subadditivity.
            flags.g_superadditive = convex;
            flags.g_subadditive = concave;
            if slopes.is_empty() {
                // Single breakpoint: constant function.
                flags.non_decreasing = true;
                flags.non_increasing = true;
                flags.convex_continuous = true;
                flags.g_superadditive = true;
                flags.g_subadditive = true;
            }
        }
    }
    Ok(flags)
}

/// A cost in one arithmetic mode. Values of different modes must never meet;
/// arithmetic on mixed modes panics.
#[derive(Clone, Debug, PartialEq)]
pub enum CostValue {
    Exact(BigRational),
    Float(f64),
}

impl CostValue {
    pub fn zero(mode: EvalMode) -> Self {
        match mode {
            EvalMode::Exact => CostValue::Exact(BigRational::zero()),
            EvalMode::Float => CostValue::Float(0.0),
        }
    }

    pub fn mode(&self) -> EvalMode {
        match self {
            CostValue::Exact(_) => EvalMode::Exact,
            CostValue::Float(_) => EvalMode::Float,
        }
    }

    pub fn add(&self, other: &CostValue) -> CostValue {
        match (self, other) {
            (CostValue::Exact(a), CostValue::Exact(b)) => CostValue::Exact(a + b),
            (CostValue::Float(a), CostValue::Float(b)) => CostValue::Float(a + b),
            _ => panic!("cost values of different modes cannot be combined"),
        }
    }

    pub fn sub(&self, other: &CostValue) -> CostValue {
        match (self, other) {
            (CostValue::Exact(a), CostValue::Exact(b)) => CostValue::Exact(a - b),
            (CostValue::Float(a), CostValue::Float(b)) => CostValue::Float(a - b),
            _ => panic!("cost values of different modes cannot be combined"),
        }
    }

    /// Multiplies by a non-negative integer count.
    pub fn scaled(&self, count: usize) -> CostValue {
        match self {
            CostValue::Exact(a) => CostValue::Exact(a * BigRational::from_integer(count.into())),
            CostValue::Float(a) => CostValue::Float(a * count as f64),
        }
    }

    pub fn max(self, other: CostValue) -> CostValue {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            CostValue::Exact(a) => a.to_f64().unwrap_or(f64::NAN),
            CostValue::Float(a) => *a,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            CostValue::Exact(a) => Some(a),
            CostValue::Float(_) => None,
        }
    }

    /// Canonical string form: exact integers as decimal digits, other exact
    /// values as `p/q` in lowest terms, floats via shortest round-trip.
    pub fn to_canonical_string(&self) -> String {
        match self {
            CostValue::Exact(a) => {
                if a.is_integer() {
                    a.numer().to_string()
                } else {
                    format!("{}/{}", a.numer(), a.denom())
                }
            }
            CostValue::Float(a) => format!("{a}"),
        }
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (CostValue::Exact(a), CostValue::Exact(b)) => a.partial_cmp(b),
            (CostValue::Float(a), CostValue::Float(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

/// Largest integer length accepted for exact 2^x (keeps memory bounded).
const MAX_EXACT_POW2_EXPONENT: i64 = 100_000_000;
/// Largest integer exponent accepted for exact x^p.
const MAX_EXACT_POWER_EXPONENT: i64 = 1_000_000;

/// Evaluates `cf` on the integer length `x >= 0`.
pub fn evaluate(cf: &CostFunction, x: i64, mode: EvalMode) -> Result<CostValue> {
    evaluate_scaled(cf, x, 1, mode)
}

/// Evaluates `cf` on the length `ticks / scale`.
///
/// Geometry is kept in integer ticks; `scale` is the number of ticks per unit
/// length, so the argument passed to f is the rational `ticks / scale`.
pub fn evaluate_scaled(cf: &CostFunction, ticks: i64, scale: i64, mode: EvalMode) -> Result<CostValue> {
    if ticks < 0 {
        return Err(Error::Params(format!(
            "cost functions are defined on lengths >= 0, got {ticks} ticks"
        )));
    }
    if scale < 1 {
        return Err(Error::Params(format!("scale must be >= 1, got {scale}")));
    }
    match mode {
        EvalMode::Exact => evaluate_exact(cf, ticks, scale).map(CostValue::Exact),
        EvalMode::Float => Ok(CostValue::Float(evaluate_float(
            cf,
            ticks as f64 / scale as f64,
        ))),
    }
}

fn big_is_power_of_two(v: &BigInt) -> bool {
    v.sign() == Sign::Plus && (v & (v - 1u8)).is_zero()
}

fn evaluate_exact(cf: &CostFunction, ticks: i64, scale: i64) -> Result<BigRational> {
    let x = BigRational::new(BigInt::from(ticks), BigInt::from(scale));
    match &cf.kind {
        CostKind::Pow2 => {
            if !x.is_integer() {
                return Err(Error::Mode(format!(
                    "2^x has no exact value at the fractional length {ticks}/{scale}"
                )));
            }
            let e = x
                .to_integer()
                .to_i64()
                .filter(|e| *e <= MAX_EXACT_POW2_EXPONENT)
                .ok_or_else(|| {
                    Error::Mode(format!("length {ticks}/{scale} is too large for exact 2^x"))
                })?;
            Ok(BigRational::from_integer(BigInt::one() << e as usize))
        }
        CostKind::Linear { slope, intercept } => Ok(slope * &x + intercept),
        CostKind::Power { exponent } => {
            if !exponent.is_integer() {
                return Err(Error::Mode(
                    "x^p has no exact value for a fractional exponent; use float mode".into(),
                ));
            }
            let p = exponent
                .to_integer()
                .to_i64()
                .filter(|p| (0..=MAX_EXACT_POWER_EXPONENT).contains(p))
                .ok_or_else(|| Error::Mode("power exponent too large for exact evaluation".into()))?;
            if p == 0 {
                return Ok(BigRational::one());
            }
            Ok(num::pow::pow(x, p as usize))
        }
        CostKind::P2Free => {
            if x.is_integer() && big_is_power_of_two(&x.to_integer()) {
                Ok(BigRational::zero())
            } else {
                Ok(x)
            }
        }
        CostKind::Table {
            breakpoints,
            values,
        } => {
            // Index of the segment containing x; past the end we extrapolate
            // with the final slope.
            let i = breakpoints.partition_point(|bp| bp <= &x);
            debug_assert!(i >= 1, "breakpoints start at 0 and x >= 0");
            let s = (i - 1).min(breakpoints.len().saturating_sub(2));
            if breakpoints.len() == 1 {
                return Ok(values[0].clone());
            }
            let slope = (&values[s + 1] - &values[s]) / (&breakpoints[s + 1] - &breakpoints[s]);
            Ok(&values[s] + slope * (x - &breakpoints[s]))
        }
    }
}

fn evaluate_float(cf: &CostFunction, x: f64) -> f64 {
    match &cf.kind {
        CostKind::Pow2 => x.exp2(),
        CostKind::Linear { slope, intercept } => {
            slope.to_f64().unwrap_or(f64::NAN) * x + intercept.to_f64().unwrap_or(f64::NAN)
        }
        CostKind::Power { exponent } => x.powf(exponent.to_f64().unwrap_or(f64::NAN)),
        CostKind::P2Free => {
            if float_is_power_of_two(x) {
                0.0
            } else {
                x
            }
        }
        CostKind::Table {
            breakpoints,
            values,
        } => {
            if breakpoints.len() == 1 {
                return values[0].to_f64().unwrap_or(f64::NAN);
            }
            let xr = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
            let i = breakpoints.partition_point(|bp| bp <= &xr);
            let s = i.saturating_sub(1).min(breakpoints.len() - 2);
            let (b0, b1) = (
                breakpoints[s].to_f64().unwrap_or(f64::NAN),
                breakpoints[s + 1].to_f64().unwrap_or(f64::NAN),
            );
            let (v0, v1) = (
                values[s].to_f64().unwrap_or(f64::NAN),
                values[s + 1].to_f64().unwrap_or(f64::NAN),
            );
            v0 + (v1 - v0) / (b1 - b0) * (x - b0)
        }
    }
}

fn float_is_power_of_two(x: f64) -> bool {
    // Powers of two have an all-zero mantissa; restrict to finite x >= 1.
    x.is_finite() && x >= 1.0 && (x.to_bits() & ((1u64 << 52) - 1)) == 0
}

/// One failed numeric spot-check of a flag.
#[derive(Clone, Debug)]
pub struct FlagViolation {
    pub flag: &'static str,
    /// The pair of sample points the check combined.
    pub x: i64,
    pub y: i64,
    pub detail: String,
}

/// Outcome of [`check_flags`]: which flags were checked and every violated
/// sample found.
#[derive(Clone, Debug, Default)]
pub struct FlagReport {
    pub checked: Vec<&'static str>,
    pub violations: Vec<FlagViolation>,
}

impl FlagReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

const CHECK_REL_TOL: f64 = 1e-9;

fn violates(lhs: f64, rhs: f64) -> bool {
    // lhs must be <= rhs; allow float noise proportional to magnitude.
    lhs > rhs + CHECK_REL_TOL * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Numerically spot-checks every *set* flag of `cf` on the grid
/// {0, step, 2*step, ...} up to `sample_max` (float mode). Violations are
/// collected, not short-circuited.
pub fn check_flags(cf: &CostFunction, sample_max: i64, step: i64) -> Result<FlagReport> {
    if sample_max < 0 || step < 1 {
        return Err(Error::Params("need sample_max >= 0 and step >= 1".into()));
    }
    let f = |x: i64| -> f64 {
        evaluate(cf, x, EvalMode::Float)
            .expect("float evaluation is total on x >= 0")
            .to_f64()
    };
    let grid: Vec<i64> = (0..=sample_max / step).map(|k| k * step).collect();
    let mut report = FlagReport::default();
    let flags = cf.flags;

    if flags.non_decreasing {
        report.checked.push("non_decreasing");
        for w in grid.windows(2) {
            if violates(f(w[0]), f(w[1])) {
                report.violations.push(FlagViolation {
                    flag: "non_decreasing",
                    x: w[0],
                    y: w[1],
                    detail: format!("f({}) = {} > f({}) = {}", w[0], f(w[0]), w[1], f(w[1])),
                });
            }
        }
    }
    if flags.non_increasing {
        report.checked.push("non_increasing");
        for w in grid.windows(2) {
            if violates(f(w[1]), f(w[0])) {
                report.violations.push(FlagViolation {
                    flag: "non_increasing",
                    x: w[0],
                    y: w[1],
                    detail: format!("f({}) = {} < f({}) = {}", w[0], f(w[0]), w[1], f(w[1])),
                });
            }
        }
    }
    if flags.convex_continuous {
        report.checked.push("convex_continuous");
        for &x in &grid {
            for h in 1..=((sample_max - x) / (2 * step)) {
                let (mid, far) = (x + h * step, x + 2 * h * step);
                if violates(2.0 * f(mid), f(x) + f(far)) {
                    report.violations.push(FlagViolation {
                        flag: "convex_continuous",
                        x,
                        y: far,
                        detail: format!("f({mid}) > (f({x}) + f({far})) / 2"),
                    });
                }
            }
        }
    }
    let g = |x: i64| f(x) - f(0);
    if flags.g_superadditive {
        report.checked.push("g_superadditive");
        for &x in &grid {
            for &y in grid.iter().filter(|&&y| y >= x && x + y <= sample_max) {
                if violates(g(x) + g(y), g(x + y)) {
                    report.violations.push(FlagViolation {
                        flag: "g_superadditive",
                        x,
                        y,
                        detail: format!("g({x}) + g({y}) > g({})", x + y),
                    });
                }
            }
        }
    }
    if flags.g_subadditive {
        report.checked.push("g_subadditive");
        for &x in &grid {
            for &y in grid.iter().filter(|&&y| y >= x && x + y <= sample_max) {
                if violates(g(x + y), g(x) + g(y)) {
                    report.violations.push(FlagViolation {
                        flag: "g_subadditive",
                        x,
                        y,
                        detail: format!("g({}) > g({x}) + g({y})", x + y),
                    });
                }
            }
        }
    }
    Ok(report)
}
