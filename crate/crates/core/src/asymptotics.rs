//! Exact closed-form checks and coefficient extraction for sequences of the
//! shape `e_n = α q^d + β q^{d-1} + O(q^{d-2})`, `q = p^n`.
//!
//! Every estimate is solved in exact rationals first and only rendered to
//! `f64` for reporting. Trend sequences are always returned in full; the
//! error terms carry no effective constants, so no single number is
//! presented as a limit.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hk::{DeltaSeries, HkSeries};

pub(crate) fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn serialize_rational<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn rat(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `q^k` for a possibly negative exponent.
fn qpow(q: u64, k: i64) -> BigRational {
    let base = BigInt::from(q);
    let mag = num_traits::pow(base, k.unsigned_abs() as usize);
    if k >= 0 {
        rat(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// `Σ c_i b_i^n` with exact rational coefficients and distinct positive
/// integer bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    terms: Vec<(BigRational, BigUint)>,
}

impl ClosedForm {
    pub fn new(terms: Vec<(BigRational, BigUint)>) -> Result<Self> {
        let mut out: Vec<(BigRational, BigUint)> = Vec::new();
        for (c, b) in terms {
            if b.is_zero() {
                return Err(Error::Invalid("closed-form base must be positive".into()));
            }
            if let Some(slot) = out.iter_mut().find(|(_, ob)| *ob == b) {
                slot.0 += c;
            } else {
                out.push((c, b));
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        Ok(ClosedForm { terms: out })
    }

    pub fn terms(&self) -> &[(BigRational, BigUint)] {
        &self.terms
    }

    pub fn eval(&self, n: u32) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (c, b)| {
            acc + c * rat(num_traits::pow(BigInt::from(b.clone()), n as usize))
        })
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, b)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{mag} * {b}^n")?;
        }
        Ok(())
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    /// Parses signed terms `c1/c2 * b^n`; the coefficient or the `b^n`
    /// factor may be omitted (`b^n`, `5`, `-3/4`).
    fn from_str(text: &str) -> Result<Self> {
        let err = |column: usize, message: &str| Error::Syntax {
            column,
            message: message.to_string(),
        };
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0usize;
        let skip = |i: &mut usize| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        let number = |i: &mut usize| -> Option<BigInt> {
            let start = *i;
            while *i < chars.len() && chars[*i].is_ascii_digit() {
                *i += 1;
            }
            if start == *i {
                None
            } else {
                chars[start..*i].iter().collect::<String>().parse().ok()
            }
        };
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            skip(&mut i);
            let mut sign = BigInt::one();
            if i < chars.len() && (chars[i] == '+' || chars[i] == '-' || chars[i] == '−') {
                if chars[i] != '+' {
                    sign = -sign;
                }
                i += 1;
            } else if !first {
                return Err(err(i + 1, "expected `+` or `-`"));
            }
            first = false;
            skip(&mut i);
            let col = i + 1;
            let a = number(&mut i).ok_or_else(|| err(col, "expected integer"))?;
            skip(&mut i);
            let (coeff, base) = if i < chars.len() && chars[i] == '^' {
                // bare `b^n`
                (BigRational::one(), a)
            } else {
                let mut c = rat(a);
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    skip(&mut i);
                    let col = i + 1;
                    let d = number(&mut i).ok_or_else(|| err(col, "expected denominator"))?;
                    if d.is_zero() {
                        return Err(err(col, "zero denominator"));
                    }
                    c /= rat(d);
                    skip(&mut i);
                }
                if i < chars.len() && chars[i] == '*' {
                    i += 1;
                    skip(&mut i);
                    let col = i + 1;
                    let b = number(&mut i).ok_or_else(|| err(col, "expected base"))?;
                    skip(&mut i);
                    if i >= chars.len() || chars[i] != '^' {
                        return Err(err(i + 1, "expected `^n`"));
                    }
                    (c, b)
                } else {
                    (c, BigInt::one())
                }
            };
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                skip(&mut i);
                if i >= chars.len() || chars[i] != 'n' {
                    return Err(err(i + 1, "expected `n` after `^`"));
                }
                i += 1;
            }
            let base = base
                .to_biguint()
                .filter(|b| !b.is_zero())
                .ok_or_else(|| err(col, "base must be positive"))?;
            terms.push((coeff * rat(sign), base));
            skip(&mut i);
            if i >= chars.len() {
                break;
            }
        }
        ClosedForm::new(terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyEntry {
    pub n: u32,
    #[serde(serialize_with = "crate::hk::serialize_biguint")]
    pub computed: BigUint,
    #[serde(serialize_with = "serialize_rational")]
    pub predicted: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub closed_form: String,
    pub entries: Vec<VerifyEntry>,
    pub all_pass: bool,
}

/// Exact comparison: an entry passes iff the closed form evaluates to an
/// integer equal to the computed value.
pub fn verify_closed_form(series: &HkSeries, cf: &ClosedForm) -> VerifyReport {
    let entries: Vec<VerifyEntry> = series
        .entries
        .iter()
        .map(|e| {
            let predicted = cf.eval(e.n);
            let pass = predicted.is_integer() && predicted.to_integer() == BigInt::from(e.value.clone());
            VerifyEntry {
                n: e.n,
                computed: e.value.clone(),
                predicted,
                pass,
            }
        })
        .collect();
    VerifyReport {
        closed_form: cf.to_string(),
        all_pass: entries.iter().all(|e| e.pass),
        entries,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub n: u32,
    pub q: u64,
    /// `e_n - α q^d - β q^{d-1}`.
    #[serde(serialize_with = "serialize_rational")]
    pub exact: BigRational,
    pub value: f64,
    /// `|residual| / q^{d-2}`.
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowEstimate {
    pub n_lo: u32,
    pub n_hi: u32,
    pub alpha_hat: f64,
    pub beta_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub method: &'static str,
    pub d: u32,
    pub p: u32,
    pub n_lo: u32,
    pub n_hi: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub alpha: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub beta: BigRational,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// `β̂ (p^{d-1} - p^d)`.
    pub tau_hat: f64,
    pub residuals: Vec<Residual>,
    #[serde(serialize_with = "serialize_rational")]
    pub c_min: BigRational,
    pub c_min_hat: f64,
    /// Two-point fits on every pair of consecutive `n`.
    pub window_estimates: Vec<WindowEstimate>,
}

fn entry(series: &HkSeries, n: u32) -> Result<(u64, BigRational)> {
    series
        .entries
        .iter()
        .find(|e| e.n == n)
        .map(|e| (e.q, rat(BigInt::from(e.value.clone()))))
        .ok_or_else(|| Error::Invalid(format!("series has no entry for n = {n}")))
}

/// Solves `e = α q^d + β q^{d-1}` at two points.
fn solve_two(d: u32, (q1, e1): (u64, BigRational), (q2, e2): (u64, BigRational)) -> (BigRational, BigRational) {
    let d = d as i64;
    let (a11, a12) = (qpow(q1, d), qpow(q1, d - 1));
    let (a21, a22) = (qpow(q2, d), qpow(q2, d - 1));
    let det = &a11 * &a22 - &a12 * &a21;
    assert!(!det.is_zero(), "distinct q give a regular system");
    let alpha = (&e1 * &a22 - &a12 * &e2) / &det;
    let beta = (&a11 * &e2 - &a21 * &e1) / &det;
    (alpha, beta)
}

fn residuals(series: &HkSeries, alpha: &BigRational, beta: &BigRational, d: u32) -> Vec<Residual> {
    let d = d as i64;
    series
        .entries
        .iter()
        .map(|e| {
            let exact = rat(BigInt::from(e.value.clone())) - alpha * qpow(e.q, d) - beta * qpow(e.q, d - 1);
            let scaled = exact.abs() / qpow(e.q, d - 2);
            Residual {
                n: e.n,
                q: e.q,
                value: to_f64(&exact),
                scaled: to_f64(&scaled),
                exact,
            }
        })
        .collect()
}

/// Exact two-point fit of `α, β` at `n_lo < n_hi`, with residuals over the
/// whole series.
pub fn fit_two_point(series: &HkSeries, d: u32, n_lo: u32, n_hi: u32) -> Result<FitReport> {
    if n_lo >= n_hi {
        return Err(Error::Invalid(format!("fit window needs n_lo < n_hi, got {n_lo}, {n_hi}")));
    }
    if d == 0 {
        return Err(Error::Invalid("fit needs d >= 1".into()));
    }
    let (alpha, beta) = solve_two(d, entry(series, n_lo)?, entry(series, n_hi)?);
    let bound = residual_bound(series, &alpha, &beta, d);
    let p = series.p;
    let pd1 = num_traits::pow(BigInt::from(p), d as usize - 1);
    let tau = &beta * rat(&pd1 - &pd1 * BigInt::from(p));
    let mut window_estimates = Vec::new();
    for w in series.entries.windows(2) {
        if w[1].n == w[0].n + 1 {
            let (a, b) = solve_two(
                d,
                (w[0].q, rat(BigInt::from(w[0].value.clone()))),
                (w[1].q, rat(BigInt::from(w[1].value.clone()))),
            );
            window_estimates.push(WindowEstimate {
                n_lo: w[0].n,
                n_hi: w[1].n,
                alpha_hat: to_f64(&a),
                beta_hat: to_f64(&b),
            });
        }
    }
    Ok(FitReport {
        method: "two-point exact",
        d,
        p,
        n_lo,
        n_hi,
        alpha_hat: to_f64(&alpha),
        beta_hat: to_f64(&beta),
        tau_hat: to_f64(&tau),
        residuals: residuals(series, &alpha, &beta, d),
        c_min_hat: to_f64(&bound.c_min),
        c_min: bound.c_min,
        alpha,
        beta,
        window_estimates,
    })
}

/// Fit on the two largest available `n`.
pub fn fit_default(series: &HkSeries, d: u32) -> Result<FitReport> {
    let k = series.entries.len();
    if k < 2 {
        return Err(Error::Invalid("fit needs at least two entries".into()));
    }
    fit_two_point(series, d, series.entries[k - 2].n, series.entries[k - 1].n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualBound {
    #[serde(serialize_with = "serialize_rational")]
    pub c_min: BigRational,
    pub c_min_hat: f64,
    pub attained_at: Option<u32>,
}

/// `max_{n >= 1} |e_n - α q^d - β q^{d-1}| / q^{d-2}`.
pub fn residual_bound(series: &HkSeries, alpha: &BigRational, beta: &BigRational, d: u32) -> ResidualBound {
    let mut c_min = BigRational::zero();
    let mut attained_at = None;
    let di = d as i64;
    for e in series.entries.iter().filter(|e| e.n >= 1) {
        let r = rat(BigInt::from(e.value.clone())) - alpha * qpow(e.q, di) - beta * qpow(e.q, di - 1);
        let scaled = r.abs() / qpow(e.q, di - 2);
        if attained_at.is_none() || scaled > c_min {
            c_min = scaled;
            attained_at = Some(e.n);
        }
    }
    ResidualBound {
        c_min_hat: to_f64(&c_min),
        c_min,
        attained_at,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauPoint {
    pub n: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub tau: BigRational,
    pub tau_hat: f64,
    pub beta_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauEstimate {
    pub n: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub tau: BigRational,
    pub tau_hat: f64,
    /// `τ̂ / (p^{d-1} - p^d)`.
    pub beta_hat: f64,
    /// The same estimate at every `n` with `n + 1` available.
    pub sequence: Vec<TauPoint>,
}

fn tau_point(series: &HkSeries, d: u32, n: u32) -> Result<TauPoint> {
    if d == 0 {
        return Err(Error::Invalid("recurrence estimate needs d >= 1".into()));
    }
    let (q, e0) = entry(series, n)?;
    let (_, e1) = entry(series, n + 1)?;
    let p = BigInt::from(series.p);
    let pd = num_traits::pow(p.clone(), d as usize);
    let tau = (e1 - rat(pd.clone()) * e0) / qpow(q, d as i64 - 1);
    let pd1 = num_traits::pow(p, d as usize - 1);
    let beta = &tau / rat(pd1 - pd);
    Ok(TauPoint {
        n,
        tau_hat: to_f64(&tau),
        beta_hat: to_f64(&beta),
        tau,
    })
}

/// `τ̂ = (e_{n+1} - p^d e_n) / q^{d-1}` and the implied `β̂`.
pub fn tau_from_recurrence(series: &HkSeries, d: u32, n: u32) -> Result<TauEstimate> {
    let at = tau_point(series, d, n)?;
    let sequence = series
        .entries
        .iter()
        .filter_map(|e| tau_point(series, d, e.n).ok())
        .collect();
    Ok(TauEstimate {
        n,
        tau: at.tau,
        tau_hat: at.tau_hat,
        beta_hat: at.beta_hat,
        sequence,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendPoint {
    pub n: u32,
    pub q: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub ratio: BigRational,
    pub ratio_hat: f64,
    /// `q * (v_n - v_{n-1})`; absent for the first point.
    pub scaled_step: Option<f64>,
}

/// A sequence `v_n = value_n / q^{d-1}` with its successive steps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trend {
    pub d: u32,
    pub points: Vec<TrendPoint>,
    /// `v_n` at the largest `n`.
    pub last: f64,
    #[serde(serialize_with = "serialize_rational")]
    pub last_exact: BigRational,
}

fn trend(values: &[(u32, u64, BigInt)], d: u32) -> Trend {
    let mut points: Vec<TrendPoint> = Vec::with_capacity(values.len());
    for (n, q, v) in values {
        let ratio = rat(v.clone()) / qpow(*q, d as i64 - 1);
        let scaled_step = points
            .last()
            .filter(|prev| prev.n + 1 == *n)
            .map(|prev| to_f64(&((&ratio - &prev.ratio) * rat(BigInt::from(*q)))));
        points.push(TrendPoint {
            n: *n,
            q: *q,
            ratio_hat: to_f64(&ratio),
            ratio,
            scaled_step,
        });
    }
    let last_exact = points.last().map(|p| p.ratio.clone()).unwrap_or_else(BigRational::zero);
    Trend {
        d,
        last: to_f64(&last_exact),
        last_exact,
        points,
    }
}

/// `v_n = δ_n / q^{d-1}` and the steps `q (v_{n} - v_{n-1})`.
pub fn tau_from_delta(delta: &DeltaSeries, d: u32) -> Trend {
    let values: Vec<_> = delta.entries.iter().map(|e| (e.n, e.q, e.value.clone())).collect();
    trend(&values, d)
}

/// `λ(Tor_1(T, R/I^{[q]})) / q^{d-1}` for each `n`.
pub fn gamma_estimate(tor: &HkSeries, d: u32) -> Trend {
    let values: Vec<_> = tor
        .entries
        .iter()
        .map(|e| (e.n, e.q, BigInt::from(e.value.clone())))
        .collect();
    trend(&values, d)
}
