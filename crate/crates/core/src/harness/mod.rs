//! End-to-end verification of the exceptional-zero identity for a fixture curve,
//! with JSON reports, measure tables and graph export.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{parse_ratfunc, Place, Poly, P1};
use crate::cochains::{
    atkin_lehner, cuspidal_basis, hecke_operator, newform_for_curve, trace, trace_conjugate,
    CuspidalSpace, EigenvalueEntry, Newform, NewformOptions,
};
use crate::elliptic::{EllipticCurve, Reduction, TatePeriod};
use crate::error::{Error, Result};
use crate::integrals::{period, teitelbaum_unit, PeriodMode};
use crate::local::{detect_root_of_unity, LocalElement};
use crate::quotient::{build_quotient, QuotientGraph};
use crate::symbols::{ball_table, AxisMeasure, BallValue, SymbolContext, Teitelbaum};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the fixture directory.
pub const FIXTURE_DIR_ENV: &str = "EXZERO_FIXTURES";

/// `$EXZERO_FIXTURES`, or `fixtures/curves` under the current directory.
pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures/curves"))
}

/// An existing path as given, otherwise `<fixture_dir>/<name>.curve`.
pub fn resolve_fixture(name: &str) -> PathBuf {
    let p = Path::new(name);
    if p.exists() {
        return p.to_path_buf();
    }
    fixture_dir().join(format!("{name}.curve"))
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Ball level `L`; defaults to 12 for residue degree 1 and 8 otherwise.
    pub level: Option<u32>,
    /// Target relative precision `N`.
    pub prec: u32,
    /// Ball level for the raw double integral; defaults to `L/2` (at least 3).
    pub raw_level: Option<u32>,
    pub newform: NewformOptions,
    /// Run with `-c` in place of `c`.
    pub negate: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            level: None,
            prec: 32,
            raw_level: None,
            newform: NewformOptions::default(),
            negate: false,
        }
    }
}

pub fn default_level(pi: &Poly) -> u32 {
    if pi.deg() == Some(1) {
        12
    } else {
        8
    }
}

/// The quotient graph, cuspidal space, newform and symbol context of a curve.
pub struct Pipeline {
    pub curve: EllipticCurve,
    pub graph: Arc<QuotientGraph>,
    pub space: CuspidalSpace,
    pub newform: Newform,
    pub ctx: SymbolContext,
}

impl Pipeline {
    pub fn build(curve: EllipticCurve, opts: NewformOptions, negate: bool) -> Result<Self> {
        let m = curve.level();
        let graph = Arc::new(build_quotient(&m, m.deg().unwrap() + 2)?);
        let space = cuspidal_basis(graph.clone())?;
        let newform = newform_for_curve(&curve, &space, opts)?;
        let c = if negate {
            newform.cochain.scale(-1)
        } else {
            newform.cochain.clone()
        };
        let ctx = SymbolContext::new(c, curve.pi())?;
        Ok(Self {
            curve,
            graph,
            space,
            newform,
            ctx,
        })
    }

    pub fn load(path: &Path, opts: NewformOptions) -> Result<Self> {
        Self::build(EllipticCurve::load(path)?, opts, false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// A local value and, if it is one, the root of unity it equals.
#[derive(Clone, Debug, Serialize)]
pub struct RootReport {
    pub value: LocalElement,
    /// Residue of the root of unity; `None` when the value is not a root of unity.
    pub root_of_unity: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub curve: String,
    pub q: u32,
    pub p: String,
    pub n: String,
    pub m_p: i64,
    pub winding: i64,
    pub cuspidal_dimension: usize,
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub eigenvalue_degree_bound: usize,
    pub ball_level: u32,
    pub raw_ball_level: u32,
    pub precision: u32,
    pub q_tilde: LocalElement,
    pub q_c: LocalElement,
    pub period: LocalElement,
    pub period_raw: LocalElement,
    pub xi: RootReport,
    /// `I^{m_p}·q_E^{-W}`.
    pub period_ratio: RootReport,
    /// `I·q_E^{-W/m_p}`, present when `m_p` divides `W`.
    pub zeta: Option<RootReport>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn root_report(value: LocalElement, need: u32) -> (RootReport, Check) {
    let (root, detail) = match detect_root_of_unity(&value) {
        Ok(Some(r)) => (
            Some(r.to_string()),
            format!("root of unity with residue {r}"),
        ),
        Ok(None) => (None, "not a root of unity".to_string()),
        Err(e) => (None, e.to_string()),
    };
    let enough = value.precision() >= need;
    let detail = if enough {
        format!("{detail} to {} digits", value.precision())
    } else {
        format!(
            "{detail}; only {} of {need} digits certified",
            value.precision()
        )
    };
    let passed = root.is_some() && enough;
    (
        RootReport {
            value,
            root_of_unity: root,
        },
        Check::new("", passed, detail),
    )
}

fn named(mut c: Check, name: &'static str) -> Check {
    c.name = name;
    c
}

/// Build everything for `curve` and check the exceptional-zero identity and its companions.
pub fn verify(curve: EllipticCurve, opts: &VerifyOptions) -> Result<VerificationReport> {
    let level = opts.level.unwrap_or_else(|| default_level(curve.pi()));
    let raw_level = opts.raw_level.unwrap_or((level / 2).max(3));
    let n = opts.prec;
    let target = level.min(n);
    let mut checks = Vec::new();

    let inf = Place::infinity(curve.q)?;
    let at_inf = curve.reduction_check(&inf)?;
    let at_p = curve.reduction_check(&curve.p)?;
    checks.push(Check::new(
        "reduction",
        matches!(at_inf, Reduction::SplitMultiplicative { .. })
            && matches!(at_p, Reduction::SplitMultiplicative { .. }),
        format!("at infinity {at_inf:?}, at p {at_p:?}"),
    ));

    let pipe = Pipeline::build(curve, opts.newform, opts.negate)?;
    let c = pipe.ctx.cochain();
    let graph = &pipe.graph;
    let pi = pipe.curve.pi().clone();

    let mut bad = Vec::new();
    for e in &pipe.newform.eigenvalues {
        let t = hecke_operator(graph, e.place.pi().unwrap())?;
        if t.apply(c)? != c.scale(e.a) {
            bad.push(e.place.to_string());
        }
    }
    checks.push(Check::new(
        "hecke_eigenvalues",
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "T_Q c = a_Q c at {} good places",
                pipe.newform.eigenvalues.len()
            )
        } else {
            format!("mismatch at {}", bad.join(", "))
        },
    ));

    let w = atkin_lehner(graph, &pi)?.apply(c)?;
    checks.push(Check::new("atkin_lehner", w == c.scale(-1), "W_p c = -c"));

    let n_poly = pipe.curve.n.clone();
    let low = Arc::new(build_quotient(&n_poly, n_poly.deg().unwrap() + 2)?);
    let tr = trace(graph, &low)?.apply(c)?;
    let trc = trace_conjugate(graph, &low)?.apply(c)?;
    checks.push(Check::new(
        "p_new",
        tr.is_zero() && trc.is_zero(),
        "both traces to level n vanish",
    ));

    let axis = AxisMeasure {
        ctx: &pipe.ctx,
        from: P1::Infinity,
        to: P1::zero(pipe.curve.q),
    };
    let lhs = ball_table(&axis, &pi, 2)?;
    let rhs = ball_table(&Teitelbaum(&pipe.ctx), &pi, 2)?;
    let diff = lhs
        .iter()
        .zip(&rhs)
        .filter(|(a, b)| a.mass != b.mass)
        .count();
    checks.push(Check::new(
        "measure_oracle",
        diff == 0,
        format!("{} balls of level <= 2, {diff} differ", lhs.len()),
    ));

    let winding = pipe.ctx.winding_element()?;
    let tate: TatePeriod = pipe.curve.tate_period(n)?;
    let m_p = tate.m_p;
    let qc = teitelbaum_unit(&pipe.ctx, level, n)?;
    let xi = qc
        .value
        .pow(m_p)?
        .mul(&tate.q_tilde.truncate(qc.precision).pow(-winding)?);
    let (xi, chk) = root_report(xi, target);
    checks.push(named(chk, "xi_root_of_unity"));

    let red = period(&pipe.ctx, level, n, PeriodMode::Reduced, None)?;
    let raw = period(&pipe.ctx, raw_level, n, PeriodMode::Raw, None)?;
    checks.push(Check::new(
        "period_valuation",
        red.value.valuation() == winding && raw.value.valuation() == winding,
        format!(
            "reduced {}, raw {}, W = {winding}",
            red.value.valuation(),
            raw.value.valuation()
        ),
    ));
    let agree = raw
        .value
        .congruent(&red.value, winding + raw.precision as i64);
    checks.push(Check::new(
        "raw_vs_reduced",
        agree && raw.precision >= 2,
        format!("agree to {} digits", raw.precision),
    ));

    let ratio = red
        .value
        .pow(m_p)?
        .mul(&tate.q.truncate(red.precision).pow(-winding)?);
    let (period_ratio, chk) = root_report(ratio, target);
    checks.push(named(chk, "period_identity"));
    let zeta = if m_p != 0 && winding % m_p == 0 {
        let z = red
            .value
            .mul(&tate.q.truncate(red.precision).pow(-winding / m_p)?);
        let (rep, chk) = root_report(z, target);
        checks.push(named(chk, "period_zeta"));
        Some(rep)
    } else {
        None
    };

    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        curve: pipe.curve.name.clone(),
        q: pipe.curve.q,
        p: pi.to_string(),
        n: n_poly.to_string(),
        m_p,
        winding,
        cuspidal_dimension: pipe.space.dim(),
        eigenvalues: pipe.newform.eigenvalues.clone(),
        eigenvalue_degree_bound: pipe.newform.degree_bound,
        ball_level: level,
        raw_ball_level: raw_level,
        precision: n,
        q_tilde: tate.q_tilde.truncate(target),
        q_c: qc.value,
        period: red.value,
        period_raw: raw.value,
        xi,
        period_ratio,
        zeta,
        checks,
    })
}

/// The quotient graph for level `m` as Graphviz text.
pub fn export_graph(m: &Poly) -> Result<String> {
    let d = m
        .deg()
        .ok_or_else(|| Error::InvalidInput("level must be nonzero".into()))?;
    Ok(build_quotient(m, d + 2)?.to_dot())
}

/// One ball with both the axis measure and the Teitelbaum measure.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureRow {
    pub center: String,
    pub radius: i64,
    pub axis: i64,
    pub teitelbaum: i64,
}

pub fn measure_table(pipe: &Pipeline, depth: u32) -> Result<Vec<MeasureRow>> {
    let pi = pipe.curve.pi();
    let axis = AxisMeasure {
        ctx: &pipe.ctx,
        from: P1::Infinity,
        to: P1::zero(pipe.curve.q),
    };
    let a: Vec<BallValue> = ball_table(&axis, pi, depth)?;
    let t = ball_table(&Teitelbaum(&pipe.ctx), pi, depth)?;
    Ok(a.into_iter()
        .zip(t)
        .map(|(a, t)| MeasureRow {
            center: a.center,
            radius: a.radius,
            axis: a.mass,
            teitelbaum: t.mass,
        })
        .collect())
}

/// `[r, ∞]` by the continued-fraction route and by direct path summation.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolReport {
    pub r: String,
    pub manin: i64,
    pub path: i64,
}

/// Parse `inf`/`oo` or a rational function.
pub fn parse_point(s: &str, q: u32) -> Result<P1> {
    match s.trim() {
        "inf" | "oo" | "infinity" => Ok(P1::Infinity),
        t => Ok(P1::Finite(parse_ratfunc(t, q)?)),
    }
}

pub fn symbol_report(pipe: &Pipeline, r: &str) -> Result<SymbolReport> {
    let x = parse_point(r, pipe.curve.q)?;
    Ok(SymbolReport {
        r: r.to_string(),
        manin: pipe.ctx.symbol(&x)?,
        path: pipe.ctx.path_symbol(&x)?,
    })
}
