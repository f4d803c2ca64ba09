use std::path::PathBuf;

use clap::Args;
use hkcalc_core::asymptotics::{
    fit_default, fit_two_point, gamma_estimate, residual_bound, tau_from_delta, tau_from_recurrence,
    verify_closed_form, ClosedForm,
};
use hkcalc_core::groebner::krull_dimension;
use hkcalc_core::hk::{
    check_m_primary, delta_series, module_dimension, module_rank, series, tor_series, ModuleKind, PreparedModule,
    SeriesOutcome,
};
use hkcalc_core::problem::{ProblemFile, RING_MODULE};
use hkcalc_core::{buchberger, Budget, HkSeries, IdealHandle, ModulePresentation, Polynomial, RingPresentation};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{BudgetInfo, CliError, Diagnostics, EntryFailure, RingInfo};

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Problem file.
    pub file: PathBuf,
    /// Largest n to compute.
    #[arg(long, default_value_t = 2)]
    pub nmax: u32,
    /// Module name; `R` is the ring itself.
    #[arg(long)]
    pub module: Option<String>,
    /// Ideal name; defaults to the only declared ideal, or the maximal ideal
    /// when none is declared.
    #[arg(long)]
    pub ideal: Option<String>,
    /// Override the dimension used for fits and trends.
    #[arg(long)]
    pub d: Option<u32>,
    /// Assert the module rank.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Maximum number of S-pairs per Gröbner basis.
    #[arg(long)]
    pub budget_pairs: Option<usize>,
    /// Also write the report to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Closed form such as "168/61 * 125^n - 107/61 * 3^n".
    #[arg(long)]
    pub closed_form: Option<String>,
    /// Closed form declared in the problem file.
    #[arg(long)]
    pub form: Option<String>,
    /// Use a data series declared in the problem file instead of computing.
    #[arg(long)]
    pub data: Option<String>,
    /// Lower fit point.
    #[arg(long)]
    pub lo: Option<u32>,
    /// Upper fit point.
    #[arg(long)]
    pub hi: Option<u32>,
    /// Exact α for the residual bound, e.g. 13/8.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Exact β for the residual bound, e.g. -1/4.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Omit the timing field.
    #[arg(long)]
    pub no_timing: bool,
}

pub struct Context {
    pub args: Common,
    pub raw: Vec<u8>,
    pub file: ProblemFile,
    pub ring: RingPresentation,
    pub budget: Budget,
    pub warnings: Vec<String>,
}

pub struct Output {
    pub results: Value,
    pub analysis: Option<Value>,
    pub failures: Vec<EntryFailure>,
    pub error: Option<CliError>,
}

impl Output {
    fn new(results: Value) -> Self {
        Output {
            results,
            analysis: None,
            failures: Vec::new(),
            error: None,
        }
    }

    fn with_analysis(mut self, analysis: Value) -> Self {
        self.analysis = Some(analysis);
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

const AFFINE_WARNING: &str = "non-homogeneous input: lengths are total colengths of the affine quotient";

impl Context {
    pub fn load(args: Common) -> Result<Self, CliError> {
        let raw = std::fs::read(&args.file)
            .map_err(|e| CliError::input("io", format!("cannot read {}: {e}", args.file.display())))?;
        let text = String::from_utf8(raw.clone()).map_err(|_| CliError::input("io", "problem file is not UTF-8"))?;
        let file = ProblemFile::parse(&text)?;
        let mut budget = Budget::default();
        if let Some(k) = args.budget_pairs {
            budget.max_pairs = k;
        }
        let ring = file.ring_presentation(&budget)?;
        let mut warnings = Vec::new();
        if !ring.is_homogeneous() {
            warnings.push(AFFINE_WARNING.to_string());
        }
        Ok(Context {
            args,
            raw,
            file,
            ring,
            budget,
            warnings,
        })
    }

    pub fn ring_info(&self) -> RingInfo {
        let pr = self.ring.poly_ring();
        RingInfo {
            p: self.ring.characteristic(),
            vars: pr.vars().to_vec(),
            quotient: self.ring.quotient().iter().map(|f| f.to_string()).collect(),
            order: pr.order().name(),
            dim: self.ring.dim(),
        }
    }

    pub fn diagnostics(&self, failures: Vec<EntryFailure>) -> Diagnostics {
        let mut warnings = self.warnings.clone();
        warnings.dedup();
        Diagnostics {
            budget: BudgetInfo {
                max_pairs: self.budget.max_pairs,
                max_basis: self.budget.max_basis,
                max_minors: self.budget.max_minors,
            },
            warnings,
            failures,
        }
    }

    pub fn parameters(&self) -> Value {
        let a = &self.args;
        let mut map = serde_json::Map::new();
        map.insert("nmax".into(), json!(a.nmax));
        let opt = |map: &mut serde_json::Map<String, Value>, k: &str, v: Value| {
            if !v.is_null() {
                map.insert(k.to_string(), v);
            }
        };
        opt(&mut map, "module", json!(a.module));
        opt(&mut map, "ideal", json!(a.ideal));
        opt(&mut map, "d", json!(a.d));
        opt(&mut map, "rank", json!(a.rank));
        opt(&mut map, "budget_pairs", json!(a.budget_pairs));
        opt(&mut map, "closed_form", json!(a.closed_form));
        opt(&mut map, "form", json!(a.form));
        opt(&mut map, "data", json!(a.data));
        opt(&mut map, "lo", json!(a.lo));
        opt(&mut map, "hi", json!(a.hi));
        opt(&mut map, "alpha", json!(a.alpha));
        opt(&mut map, "beta", json!(a.beta));
        Value::Object(map)
    }

    fn ideal(&mut self) -> Result<(String, IdealHandle), CliError> {
        let (name, ideal) = match &self.args.ideal {
            Some(name) => (name.clone(), self.file.ideal(name)?),
            None if self.file.ideals.is_empty() => ("(maximal)".to_string(), self.ring.maximal_ideal()),
            None => self.file.default_ideal()?,
        };
        if !ideal.generators().iter().all(Polynomial::is_homogeneous) {
            self.warnings.push(AFFINE_WARNING.to_string());
        }
        Ok((name, ideal))
    }

    fn m_primary_ideal(&mut self) -> Result<(String, IdealHandle), CliError> {
        let (name, ideal) = self.ideal()?;
        if !check_m_primary(&ideal, &self.ring, &self.budget)? {
            return Err(CliError::input(
                "not_m_primary",
                format!("ideal `{name}` is not primary to the maximal ideal (R/I has infinite length)"),
            ));
        }
        Ok((name, ideal))
    }

    fn module_name(&self) -> String {
        self.args.module.clone().unwrap_or_else(|| RING_MODULE.to_string())
    }

    fn module(&mut self) -> Result<(String, ModulePresentation), CliError> {
        let name = self.module_name();
        let mut m = self.file.module(&name)?;
        if let Some(r) = self.args.rank {
            m = m.with_rank(r);
        }
        if !module_polys(&m).iter().all(|f| f.is_homogeneous()) {
            self.warnings.push(AFFINE_WARNING.to_string());
        }
        Ok((name, m))
    }

    fn dimension(&self) -> u32 {
        self.args.d.unwrap_or(self.ring.dim() as u32)
    }

    fn closed_form(&self) -> Result<Option<ClosedForm>, CliError> {
        if let Some(text) = &self.args.closed_form {
            return Ok(Some(text.parse()?));
        }
        if let Some(name) = &self.args.form {
            return Ok(Some(self.file.closed_form(name)?));
        }
        Ok(None)
    }

    /// The series named by `--data`, or `e_n(M, I)` computed for
    /// `n <= nmax`.
    fn series(&mut self) -> Result<(HkSeries, Vec<EntryFailure>), CliError> {
        if let Some(name) = self.args.data.clone() {
            let mut s = self.file.data_series(&name)?;
            s.entries.retain(|e| e.n <= self.args.nmax);
            return Ok((s, Vec::new()));
        }
        let (mname, module) = self.module()?;
        let (iname, ideal) = self.m_primary_ideal()?;
        let out = series(&self.ring, &module, &ideal, self.args.nmax, &self.budget);
        Ok(split(out, mname, iname))
    }
}

fn module_polys(m: &ModulePresentation) -> Vec<Polynomial> {
    match &m.kind {
        ModuleKind::Cyclic { ideal } => ideal.clone(),
        ModuleKind::IdealAsModule { generators } => generators.clone(),
        ModuleKind::Coker { relations, .. } => relations.iter().flatten().cloned().collect(),
    }
}

fn split(out: SeriesOutcome, module: String, ideal: String) -> (HkSeries, Vec<EntryFailure>) {
    let mut s = out.series;
    s.module = module;
    s.ideal = ideal;
    let failures = out
        .failures
        .into_iter()
        .map(|(n, e)| EntryFailure { n, error: e.into() })
        .collect();
    (s, failures)
}

/// Partial results stay in the report; the first failure decides the exit
/// code.
fn first_error(failures: &[EntryFailure]) -> Option<CliError> {
    failures.iter().map(|f| f.error.clone()).next()
}

fn rows(s: &HkSeries, key: &str) -> Value {
    Value::Array(
        s.entries
            .iter()
            .map(|e| json!({"n": e.n, "q": e.q, key: e.value.to_string()}))
            .collect(),
    )
}

fn parse_rational(flag: &str, text: &str) -> Result<BigRational, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::input("invalid_input", format!("--{flag}: expected a rational such as 13/8, got `{text}`")))
}

pub fn cmd_series(ctx: &mut Context) -> Result<Output, CliError> {
    let cf = ctx.closed_form()?;
    let (s, failures) = ctx.series()?;
    let mut out = Output::new(rows(&s, "e"));
    if let Some(cf) = cf {
        let rep = verify_closed_form(&s, &cf);
        if !rep.all_pass {
            out.error = Some(CliError::input("verification_failed", "closed form disagrees with computed values"));
        }
        out = out.with_analysis(json!({ "verification": to_value(&rep) }));
    }
    out.error = first_error(&failures).or(out.error);
    out.failures = failures;
    Ok(out)
}

pub fn cmd_verify(ctx: &mut Context) -> Result<Output, CliError> {
    let cf = match ctx.closed_form()? {
        Some(cf) => cf,
        None => match ctx.file.closed_forms.as_slice() {
            [(_, cf)] => cf.clone(),
            _ => {
                return Err(CliError::input(
                    "invalid_input",
                    "verify needs --closed-form, --form, or exactly one closedform in the file",
                ))
            }
        },
    };
    let (s, failures) = ctx.series()?;
    let rep = verify_closed_form(&s, &cf);
    let mut out = Output::new(rows(&s, "e")).with_analysis(to_value(&rep));
    out.error = first_error(&failures);
    if out.error.is_none() && !rep.all_pass {
        out.error = Some(CliError::input("verification_failed", "closed form disagrees with the series"));
    }
    out.failures = failures;
    Ok(out)
}

pub fn cmd_fit(ctx: &mut Context) -> Result<Output, CliError> {
    let (s, failures) = ctx.series()?;
    if let Some(e) = first_error(&failures) {
        let mut out = Output::new(rows(&s, "e"));
        out.error = Some(e);
        out.failures = failures;
        return Ok(out);
    }
    let d = ctx.dimension();
    let fit = match (ctx.args.lo, ctx.args.hi) {
        (Some(lo), Some(hi)) => fit_two_point(&s, d, lo, hi)?,
        (None, None) => fit_default(&s, d)?,
        _ => return Err(CliError::input("invalid_input", "--lo and --hi must be given together")),
    };
    let mut analysis = serde_json::Map::new();
    analysis.insert("fit".into(), to_value(&fit));
    if fit.n_hi >= 1 {
        if let Ok(tau) = tau_from_recurrence(&s, d, fit.n_hi - 1) {
            analysis.insert("tau".into(), to_value(&tau));
        }
    }
    match (&ctx.args.alpha, &ctx.args.beta) {
        (Some(a), Some(b)) => {
            let alpha = parse_rational("alpha", a)?;
            let beta = parse_rational("beta", b)?;
            analysis.insert("residual_bound".into(), to_value(&residual_bound(&s, &alpha, &beta, d)));
        }
        (None, None) => {}
        _ => return Err(CliError::input("invalid_input", "--alpha and --beta must be given together")),
    }
    Ok(Output::new(rows(&s, "e")).with_analysis(Value::Object(analysis)))
}

pub fn cmd_tor(ctx: &mut Context) -> Result<Output, CliError> {
    let (mname, module) = ctx.module()?;
    let (iname, ideal) = ctx.m_primary_ideal()?;
    let dim = module_dimension(&ctx.ring, &module, &ctx.budget)?;
    let (s, failures) = split(
        tor_series(&ctx.ring, &module, &ideal, ctx.args.nmax, &ctx.budget),
        mname,
        iname,
    );
    let d = ctx.dimension();
    let p = ctx.ring.characteristic() as f64;
    let growth: Vec<Value> = s
        .entries
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (w[0].value.to_string().parse::<f64>().ok()?, w[1].value.to_string().parse::<f64>().ok()?);
            (a > 0.0 && b > 0.0 && w[1].n == w[0].n + 1).then(|| json!({"n": w[1].n, "exponent": (b / a).ln() / p.ln()}))
        })
        .collect();
    let analysis = json!({
        "module_dimension": to_value(&dim),
        "gamma": to_value(&gamma_estimate(&s, d)),
        "growth_exponents": growth,
    });
    let mut out = Output::new(rows(&s, "tor")).with_analysis(analysis);
    out.error = first_error(&failures);
    out.failures = failures;
    Ok(out)
}

pub fn cmd_delta(ctx: &mut Context) -> Result<Output, CliError> {
    let (mname, module) = ctx.module()?;
    let (iname, ideal) = ctx.m_primary_ideal()?;
    let (rank, source) = match module.asserted_rank {
        Some(r) => (r, "asserted"),
        None => (module_rank(&ctx.ring, &module, &ctx.budget)?, "computed"),
    };
    let nmax = ctx.args.nmax;
    let (ms, mut failures) = split(series(&ctx.ring, &module, &ideal, nmax, &ctx.budget), mname, iname.clone());
    let (rs, rf) = split(
        series(&ctx.ring, &ModulePresentation::ring(), &ideal, nmax, &ctx.budget),
        RING_MODULE.into(),
        iname,
    );
    failures.extend(rf);
    failures.sort_by_key(|f| f.n);
    if let Some(e) = first_error(&failures) {
        let mut out = Output::new(rows(&ms, "e"));
        out.error = Some(e);
        out.failures = failures;
        return Ok(out);
    }
    let delta = delta_series(&ms, &rs, rank)?;
    let results = Value::Array(
        delta
            .entries
            .iter()
            .zip(&ms.entries)
            .zip(&rs.entries)
            .map(|((d, m), r)| {
                json!({"n": d.n, "q": d.q, "delta": d.value.to_string(), "e_module": m.value.to_string(), "e_ring": r.value.to_string()})
            })
            .collect(),
    );
    let analysis = json!({
        "rank": rank,
        "rank_source": source,
        "tau": to_value(&tau_from_delta(&delta, ctx.dimension())),
    });
    Ok(Output::new(results).with_analysis(analysis))
}

pub fn cmd_gb(ctx: &mut Context) -> Result<Output, CliError> {
    let name = ctx.module_name();
    let gb = if name == RING_MODULE {
        let (_, ideal) = ctx.ideal()?;
        ideal.basis(&ctx.ring, &ctx.budget)?.clone()
    } else {
        let (_, module) = ctx.module()?;
        let prepared = PreparedModule::new(&ctx.ring, &module, &ctx.budget)?;
        buchberger(ctx.ring.poly_ring(), prepared.rows(), prepared.relations(), &ctx.budget)?
    };
    let basis: Vec<String> = gb.elements().iter().map(|e| e.to_string()).collect();
    let colength = gb.colength().to_string();
    let mut results = json!({
        "rank": gb.rank(),
        "basis": basis,
        "colength": colength,
        "stats": to_value(&gb.stats()),
    });
    if gb.rank() == 1 {
        results["krull_dimension"] = json!(krull_dimension(&gb));
    }
    Ok(Output::new(results))
}

pub fn cmd_check(ctx: &mut Context) -> Result<Output, CliError> {
    let (iname, ideal) = ctx.m_primary_ideal()?;
    let colength = ideal.basis(&ctx.ring, &ctx.budget)?.colength().to_string();
    let mut modules = Vec::new();
    let names: Vec<String> = ctx.file.modules.iter().map(|(n, _)| n.clone()).collect();
    for name in names {
        let m = ctx.file.module(&name)?;
        let rank = match m.asserted_rank {
            Some(r) => json!({"value": r, "source": "asserted"}),
            None => match module_rank(&ctx.ring, &m, &ctx.budget) {
                Ok(r) => json!({"value": r, "source": "computed"}),
                Err(e) => json!({"error": CliError::from(e)}),
            },
        };
        let dim = match module_dimension(&ctx.ring, &m, &ctx.budget) {
            Ok(d) => to_value(&d),
            Err(e) => json!({"error": CliError::from(e)}),
        };
        modules.push(json!({"name": name, "kind": m.kind_name(), "rank": rank, "dimension": dim}));
    }
    let results = json!({
        "ideal": iname,
        "m_primary": true,
        "d": ctx.dimension(),
        "homogeneous": ctx.ring.is_homogeneous() && ideal.generators().iter().all(Polynomial::is_homogeneous),
        "colength": colength,
        "modules": modules,
    });
    Ok(Output::new(results))
}
