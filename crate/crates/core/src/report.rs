//! Diagnostic series (moment ratios, successive-difference convergence
//! curves) and the CSV formats shared by the command-line tools.
//!
//! Every file is comma-separated with one header row, preceded by
//! `# key = value` metadata lines.

use num_rational::BigRational;
use num_traits::Zero;

use crate::cmx::{cmx_sweep, CmxEstimate, CmxFormula};
use crate::error::{Error, Result};
use crate::hp::HighPrecisionReal;
use crate::moments::{krylov_moments, MomentTable};
use crate::params::ModelParams;
use crate::rational::{parse_rational, to_fraction_string, to_scientific};
use crate::reference::ReferenceEnergy;
use crate::rrk::{rrk_sweep, RrkEstimate};
use crate::scalar::{Precision, Real};

/// Significant digits of every decimal column.
pub const DECIMAL_DIGITS: u32 = 50;
/// Working precision for values derived from exact rationals.
const SERIES_PRECISION: Precision = Precision(60);
/// Recorded in the metadata of files carrying `l_W` values.
pub const LOG_BASE: &str = "10";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    MuRatio,
    IRatio,
    LwCmx,
    LwRrk,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 4] = [Self::MuRatio, Self::IRatio, Self::LwCmx, Self::LwRrk];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::MuRatio => "mu_ratio",
            Self::IRatio => "I_ratio",
            Self::LwCmx => "lW_cmx",
            Self::LwRrk => "lW_rrk",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown series kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointValue {
    Value(HighPrecisionReal),
    /// Zero denominator or an exactly vanishing difference.
    Undefined,
    /// The underlying estimate failed; carries the error tag.
    Failed(String),
}

impl PointValue {
    pub fn value(&self) -> Option<&HighPrecisionReal> {
        match self {
            PointValue::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            PointValue::Value(v) => to_scientific(&v.to_rational(), DECIMAL_DIGITS),
            PointValue::Undefined => "undefined".to_string(),
            PointValue::Failed(tag) => tag.clone(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "undefined" {
            return Ok(PointValue::Undefined);
        }
        match parse_rational(s) {
            Ok(q) => Ok(PointValue::Value(HighPrecisionReal::from_rational_at(&q, SERIES_PRECISION))),
            Err(_) if !s.is_empty() && s.chars().all(|c| c.is_ascii_lowercase() || c == '-') => {
                Ok(PointValue::Failed(s.to_string()))
            }
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSeries {
    pub kind: SeriesKind,
    pub points: Vec<(usize, PointValue)>,
}

impl DiagnosticSeries {
    /// Defined points as `(n, f64)`.
    pub fn defined(&self) -> Vec<(usize, f64)> {
        self.points
            .iter()
            .filter_map(|(n, v)| v.value().map(|x| (*n, x.to_f64())))
            .collect()
    }
}

fn ratio_point(num: &BigRational, den: &BigRational) -> PointValue {
    if den.is_zero() {
        PointValue::Undefined
    } else {
        PointValue::Value(HighPrecisionReal::from_rational_at(&(num / den), SERIES_PRECISION))
    }
}

/// `μ_n/μ_{n-1}` and `I_n/I_{n-1}` for `n = 2 ..= J`.
pub fn ratio_series(table: &MomentTable) -> (DiagnosticSeries, DiagnosticSeries) {
    let j = table.max_order();
    let mu = table.mu();
    let mu_points = (2..=j).map(|n| (n, ratio_point(&mu[n], &mu[n - 1]))).collect();
    let i_points = (2..=j)
        .map(|n| (n, ratio_point(table.connected_at(n), table.connected_at(n - 1))))
        .collect();
    (
        DiagnosticSeries {
            kind: SeriesKind::MuRatio,
            points: mu_points,
        },
        DiagnosticSeries {
            kind: SeriesKind::IRatio,
            points: i_points,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cmx,
    Rrk,
}

/// Highest moment order needed for a sweep up to `order_max`.
pub fn moments_needed(method: Method, order_max: usize) -> usize {
    match method {
        Method::Cmx => 2 * order_max + 1,
        Method::Rrk => 2 * order_max - 1,
    }
}

/// `l_W(n) = log₁₀|W^(n+1) - W^(n)|` for `n = 1 ..= estimates.len() - 1`.
fn successive_log_differences(
    kind: SeriesKind,
    estimates: &[(usize, std::result::Result<HighPrecisionReal, String>)],
) -> DiagnosticSeries {
    let points = estimates
        .windows(2)
        .map(|w| {
            let value = match (&w[0].1, &w[1].1) {
                (Ok(a), Ok(b)) => {
                    let d = (b.clone() - a.clone()).abs();
                    if d.is_zero() {
                        PointValue::Undefined
                    } else {
                        PointValue::Value(d.log10())
                    }
                }
                (Err(tag), _) | (_, Err(tag)) => PointValue::Failed(tag.clone()),
            };
            (w[0].0, value)
        })
        .collect();
    DiagnosticSeries { kind, points }
}

/// Convergence curve of the CMX estimates from an existing moment table.
pub fn cmx_convergence(table: &MomentTable, order_max: usize, formula: CmxFormula) -> Result<DiagnosticSeries> {
    if order_max < 2 {
        return Err(Error::InvalidOrder(order_max));
    }
    let estimates: Vec<_> = cmx_sweep(table.connected(), order_max, formula)
        .into_iter()
        .map(|(m, r)| {
            (
                m,
                r.map(|e| HighPrecisionReal::from_rational_at(&e.e0, SERIES_PRECISION))
                    .map_err(|e| e.kind().to_string()),
            )
        })
        .collect();
    Ok(successive_log_differences(SeriesKind::LwCmx, &estimates))
}

/// Convergence curve of RRK `W₀` from already computed estimates.
pub fn rrk_convergence_from(sweep: &[(usize, Result<RrkEstimate>)]) -> DiagnosticSeries {
    let estimates: Vec<_> = sweep
        .iter()
        .map(|(n, r)| {
            (
                *n,
                r.as_ref().map(|e| e.w0.clone()).map_err(|e| e.kind().to_string()),
            )
        })
        .collect();
    successive_log_differences(SeriesKind::LwRrk, &estimates)
}

pub fn rrk_convergence(table: &MomentTable, order_max: usize, target_digits: u32) -> Result<DiagnosticSeries> {
    if order_max < 2 {
        return Err(Error::InvalidOrder(order_max));
    }
    Ok(rrk_convergence_from(&rrk_sweep(table.mu(), order_max, target_digits)))
}

/// Runs the chosen sweep for `params` and returns its `l_W` curve.
pub fn convergence_series(
    method: Method,
    params: &ModelParams,
    order_max: usize,
    target_digits: u32,
) -> Result<DiagnosticSeries> {
    if order_max < 2 {
        return Err(Error::InvalidOrder(order_max));
    }
    let table = krylov_moments(params, moments_needed(method, order_max))?;
    match method {
        Method::Cmx => cmx_convergence(&table, order_max, CmxFormula::Knowles),
        Method::Rrk => rrk_convergence(&table, order_max, target_digits),
    }
}

/// Number of sign changes in the successive differences of the defined values.
pub fn direction_reversals(series: &DiagnosticSeries) -> usize {
    let values: Vec<f64> = series.defined().into_iter().map(|(_, v)| v).collect();
    let steps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).filter(|d| *d != 0.0).collect();
    steps.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count()
}

/// Least-squares slope of the defined values against `n`.
pub fn trend_slope(series: &DiagnosticSeries) -> Option<f64> {
    let pts = series.defined();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0 as f64).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

// --- CSV --------------------------------------------------------------------

/// A parsed or to-be-written CSV file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(meta: Vec<(String, String)>, header: &[&str]) -> Self {
        CsvTable {
            meta,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("missing column {name:?}")))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory write");
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let meta = text
            .lines()
            .filter_map(|l| l.strip_prefix('#'))
            .map(|l| match l.split_once('=') {
                Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
                None => (l.trim().to_string(), String::new()),
            })
            .collect();
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let parse_err = |e: csv::Error| Error::Parse(e.to_string());
        let header = r.headers().map_err(parse_err)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(String::from).collect()).map_err(parse_err))
            .collect::<Result<Vec<Vec<String>>>>()?;
        Ok(CsvTable { meta, header, rows })
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("not a count: {s:?}")))
}

fn optional_rational(s: &str) -> Result<Option<BigRational>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_rational(s).map(Some)
    }
}

/// `j, mu_exact, I_exact, mu_decimal_50digits, I_decimal_50digits`; `I` is
/// blank at `j = 0`.
pub fn moments_csv(table: &MomentTable, meta: Vec<(String, String)>) -> CsvTable {
    let mut t = CsvTable::new(
        meta,
        &["j", "mu_exact", "I_exact", "mu_decimal_50digits", "I_decimal_50digits"],
    );
    for (j, mu) in table.mu().iter().enumerate() {
        let (i_exact, i_dec) = if j == 0 {
            (String::new(), String::new())
        } else {
            let i = table.connected_at(j);
            (to_fraction_string(i), to_scientific(i, DECIMAL_DIGITS))
        };
        t.rows.push(vec![
            j.to_string(),
            to_fraction_string(mu),
            i_exact,
            to_scientific(mu, DECIMAL_DIGITS),
            i_dec,
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub j: usize,
    pub mu: BigRational,
    pub connected: Option<BigRational>,
}

pub fn parse_moments_csv(t: &CsvTable) -> Result<Vec<MomentRow>> {
    let (cj, cm, ci) = (t.column("j")?, t.column("mu_exact")?, t.column("I_exact")?);
    t.rows
        .iter()
        .map(|r| {
            Ok(MomentRow {
                j: parse_usize(&r[cj])?,
                mu: parse_rational(&r[cm])?,
                connected: optional_rational(&r[ci])?,
            })
        })
        .collect()
}

/// `m, e0_decimal_50digits, e_corr_decimal_50digits, status`.
pub fn cmx_csv(sweep: &[(usize, Result<CmxEstimate>)], meta: Vec<(String, String)>) -> CsvTable {
    let mut t = CsvTable::new(meta, &["m", "e0_decimal_50digits", "e_corr_decimal_50digits", "status"]);
    for (m, r) in sweep {
        t.rows.push(match r {
            Ok(e) => vec![
                m.to_string(),
                to_scientific(&e.e0, DECIMAL_DIGITS),
                to_scientific(&e.e_corr, DECIMAL_DIGITS),
                "ok".to_string(),
            ],
            Err(e) => vec![m.to_string(), String::new(), String::new(), e.kind().to_string()],
        });
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmxRow {
    pub m: usize,
    pub e0: Option<BigRational>,
    pub e_corr: Option<BigRational>,
    pub status: String,
}

pub fn parse_cmx_csv(t: &CsvTable) -> Result<Vec<CmxRow>> {
    let (cm, ce, cc, cs) = (
        t.column("m")?,
        t.column("e0_decimal_50digits")?,
        t.column("e_corr_decimal_50digits")?,
        t.column("status")?,
    );
    t.rows
        .iter()
        .map(|r| {
            Ok(CmxRow {
                m: parse_usize(&r[cm])?,
                e0: optional_rational(&r[ce])?,
                e_corr: optional_rational(&r[cc])?,
                status: r[cs].clone(),
            })
        })
        .collect()
}

/// `N, W0, precision_used, status`, with `W0` to `target_digits` significant digits.
pub fn rrk_csv(sweep: &[(usize, Result<RrkEstimate>)], target_digits: u32, meta: Vec<(String, String)>) -> CsvTable {
    let mut t = CsvTable::new(meta, &["N", "W0", "precision_used", "status"]);
    for (n, r) in sweep {
        t.rows.push(match r {
            Ok(e) => vec![
                n.to_string(),
                to_scientific(&e.w0.to_rational(), target_digits),
                e.precision_used.to_string(),
                "ok".to_string(),
            ],
            Err(e) => vec![n.to_string(), String::new(), String::new(), e.kind().to_string()],
        });
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct RrkRow {
    pub n: usize,
    pub w0: Option<BigRational>,
    pub precision_used: Option<u32>,
    pub status: String,
}

pub fn parse_rrk_csv(t: &CsvTable) -> Result<Vec<RrkRow>> {
    let (cn, cw, cp, cs) = (
        t.column("N")?,
        t.column("W0")?,
        t.column("precision_used")?,
        t.column("status")?,
    );
    t.rows
        .iter()
        .map(|r| {
            let precision_used = if r[cp].is_empty() {
                None
            } else {
                Some(r[cp].parse().map_err(|_| Error::Parse(format!("bad precision {:?}", r[cp])))?)
            };
            Ok(RrkRow {
                n: parse_usize(&r[cn])?,
                w0: optional_rational(&r[cw])?,
                precision_used,
                status: r[cs].clone(),
            })
        })
        .collect()
}

/// `omega0, omega, g, N, digits_verified, energy_string`.
pub fn diag_csv(e: &ReferenceEnergy, energy: &str, meta: Vec<(String, String)>) -> CsvTable {
    let mut t = CsvTable::new(meta, &["omega0", "omega", "g", "N", "digits_verified", "energy_string"]);
    t.rows.push(vec![
        to_fraction_string(e.params.omega0()),
        to_fraction_string(e.params.omega()),
        to_fraction_string(e.params.g()),
        e.basis_size.to_string(),
        e.digits.to_string(),
        energy.to_string(),
    ]);
    t
}

/// Long format `kind, n, value`.
pub fn series_csv(series: &[DiagnosticSeries], meta: Vec<(String, String)>) -> CsvTable {
    let mut t = CsvTable::new(meta, &["kind", "n", "value"]);
    for s in series {
        for (n, v) in &s.points {
            t.rows.push(vec![s.kind.as_str().to_string(), n.to_string(), v.render()]);
        }
    }
    t
}

pub fn parse_series_csv(t: &CsvTable) -> Result<Vec<DiagnosticSeries>> {
    let (ck, cn, cv) = (t.column("kind")?, t.column("n")?, t.column("value")?);
    let mut out: Vec<DiagnosticSeries> = Vec::new();
    for r in &t.rows {
        let kind = SeriesKind::parse(&r[ck])?;
        let point = (parse_usize(&r[cn])?, PointValue::parse(&r[cv])?);
        match out.last_mut() {
            Some(s) if s.kind == kind => s.points.push(point),
            _ => out.push(DiagnosticSeries {
                kind,
                points: vec![point],
            }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn table(o0: i64, o: i64, g: i64, order: usize) -> MomentTable {
        krylov_moments(&ModelParams::from_ints(o0, o, g).unwrap(), order).unwrap()
    }

    #[test]
    fn connected_ratio_examples() {
        let (mu, i) = ratio_series(&table(1, 1, 1, 6));
        assert_eq!(i.points[1].0, 3);
        assert_eq!(i.points[1].1.value().unwrap().to_rational(), q(2, 1));
        assert_eq!(mu.points.len(), 5);

        let (_, i) = ratio_series(&table(1, 1, 0, 6));
        assert!(i.points.iter().filter(|(n, _)| *n >= 3).all(|(_, v)| *v == PointValue::Undefined));
    }

    #[test]
    fn decoupled_cmx_points_carry_status() {
        let s = convergence_series(Method::Cmx, &ModelParams::from_ints(1, 1, 0).unwrap(), 4, 10).unwrap();
        assert_eq!(s.points.len(), 3);
        assert!(s
            .points
            .iter()
            .all(|(_, v)| *v == PointValue::Failed("degenerate-correlation-space".into())));
    }

    #[test]
    fn rrk_differences_are_non_positive() {
        let t = table(1, 1, 1, 15);
        let sweep = rrk_sweep(t.mu(), 8, 15);
        let w: Vec<HighPrecisionReal> = sweep.iter().map(|(_, r)| r.as_ref().unwrap().w0.clone()).collect();
        let tol = HighPrecisionReal::from_rational_at(&crate::scalar::ten_pow_neg(15), Precision(30));
        for p in w.windows(2) {
            assert!(p[1] <= p[0].clone() + tol.clone());
        }
        let s = rrk_convergence_from(&sweep);
        assert!(trend_slope(&s).unwrap() < 0.0);
    }

    #[test]
    fn series_helpers() {
        let mk = |vals: &[f64]| DiagnosticSeries {
            kind: SeriesKind::LwCmx,
            points: vals
                .iter()
                .enumerate()
                .map(|(n, v)| (n + 1, PointValue::Value(HighPrecisionReal::from_f64_at(*v, Precision(20)))))
                .collect(),
        };
        assert_eq!(direction_reversals(&mk(&[1.0, 2.0, 1.0, 3.0, 3.0, 0.0])), 3);
        assert!((trend_slope(&mk(&[1.0, 3.0, 5.0])).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn moments_csv_round_trip() {
        let t = table(1, 2, 5, 8);
        let csv = moments_csv(&t, vec![("command".into(), "moments".into())]);
        let text = csv.render();
        assert!(text.starts_with("# command = moments\nj,mu_exact,"));
        let back = CsvTable::parse(&text).unwrap();
        assert_eq!(back, csv);
        let rows = parse_moments_csv(&back).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows[0].connected.is_none());
        for r in &rows {
            assert_eq!(&r.mu, &t.mu()[r.j]);
        }
    }

    #[test]
    fn series_csv_round_trip() {
        let t = table(1, 1, 2, 9);
        let (a, b) = ratio_series(&t);
        let c = cmx_convergence(&t, 4, CmxFormula::Knowles).unwrap();
        let csv = series_csv(&[a, b, c], vec![("log_base".into(), LOG_BASE.into())]);
        let back = parse_series_csv(&CsvTable::parse(&csv.render()).unwrap()).unwrap();
        assert_eq!(series_csv(&back, csv.meta.clone()).render(), csv.render());
    }

    #[test]
    fn sweep_rows_keep_going_after_failures() {
        let t = table(1, 1, 0, 7);
        let sweep = cmx_sweep(t.connected(), 3, CmxFormula::Knowles);
        let rows = parse_cmx_csv(&CsvTable::parse(&cmx_csv(&sweep, vec![]).render()).unwrap()).unwrap();
        assert_eq!(rows.iter().map(|r| r.m).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(rows.iter().all(|r| r.status == "degenerate-correlation-space" && r.e0.is_none()));
    }
}
