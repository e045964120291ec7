//! Parameter blocks and drivers for the subcommands. Every block has
//! complete defaults, so the report's `config` field is the fully
//! resolved run description.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use twistmo_core::dirichlet::{build, CoeffModel, DirichletPolynomial};
use twistmo_core::kloosterman::{char_fourth_moment_count, lower_bound_construction, ratio_harness, HarnessConfig, LowerBoundReport};
use twistmo_core::moments::{
    afe_check, default_zeta_for, diagonal_term, main_term, third_moment, twisted_moment_experiment, AfeConfig, Calibration, QuadratureSpec,
    TwistedMomentConfig,
};
use twistmo_core::special::ZetaEvalConfig;
use twistmo_core::weights::{
    cos_mellin_extrapolated, mellin_smoothing_identity_check, residue_main_term, w_closed_form, w_on_line, DyadicPartition, SmoothingIdentityConfig,
    WContour, WeightDescriptor,
};
use twistmo_core::Complex64;

use crate::output::to_csv;
use crate::pool::Rayon;
use crate::CliError;

/// Result fields of a run plus an optional CSV grid.
#[derive(Debug)]
pub struct Outcome {
    pub fields: Map<String, Value>,
    pub csv: Option<String>,
}

impl Outcome {
    fn new<R: Serialize>(result: &R, csv: Option<String>) -> Result<Self, CliError> {
        match serde_json::to_value(result)? {
            Value::Object(fields) => Ok(Self { fields, csv }),
            other => {
                let mut fields = Map::new();
                fields.insert("result".into(), other);
                Ok(Self { fields, csv })
            }
        }
    }
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    if count < 2 {
        return vec![lo];
    }
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

// ---------------------------------------------------------------- twisted-moment

pub type TwistedMomentParams = TwistedMomentConfig;

pub fn twisted_moment_defaults() -> TwistedMomentParams {
    TwistedMomentConfig::new(CoeffModel::random_disk(0), 1000.0, 0.25, 1, 0)
}

#[derive(Debug, Serialize)]
struct TwistedRow {
    #[serde(rename = "T")]
    t: f64,
    theta: f64,
    seed: u64,
    #[serde(rename = "I_direct")]
    i_direct: f64,
    main_term: f64,
    rel_dev: f64,
}

pub fn twisted_moment(exec: &Rayon, p: &TwistedMomentParams) -> Result<Outcome, CliError> {
    let report = twisted_moment_experiment(exec, p)?;
    let rows: Vec<TwistedRow> = report
        .rows
        .iter()
        .map(|r| TwistedRow { t: report.t, theta: report.theta, seed: r.seed, i_direct: r.i_direct, main_term: r.main_term, rel_dev: r.rel_dev })
        .collect();
    let csv = to_csv(&rows)?;
    let mut out = Outcome::new(&report, Some(csv))?;
    out.fields.remove("config");
    out.fields.insert("rel_dev".into(), Value::from(report.mean_rel_dev));
    Ok(out)
}

// ---------------------------------------------------------------- afe-check

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AfeCheckParams {
    #[serde(rename = "T")]
    pub t: f64,
    pub samples: usize,
    pub seed: u64,
    /// error allowed as `constant · T^{-2/3}`
    pub constant: f64,
    pub afe: AfeConfig,
    pub zeta: ZetaEvalConfig,
}

impl Default for AfeCheckParams {
    fn default() -> Self {
        Self {
            t: 1000.0,
            samples: 200,
            seed: 0,
            constant: Calibration::default().afe_constant,
            afe: AfeConfig::default(),
            zeta: ZetaEvalConfig::riemann_siegel(),
        }
    }
}

pub fn afe(exec: &Rayon, p: &AfeCheckParams) -> Result<Outcome, CliError> {
    let report = afe_check(exec, p.t, p.samples, p.seed, p.constant, &p.afe, &p.zeta)?;
    let csv = to_csv(&report.samples)?;
    Outcome::new(&report, Some(csv))
}

// ---------------------------------------------------------------- main-term, diagonal

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolynomialParams {
    #[serde(rename = "T")]
    pub t: f64,
    /// `N = ⌈T^θ⌉` unless `N` is given
    pub theta: f64,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub model: CoeffModel,
    /// replaces `model.seed`
    pub seed: u64,
}

impl Default for PolynomialParams {
    fn default() -> Self {
        Self { t: 1000.0, theta: 0.25, n: None, model: CoeffModel::unit(), seed: 0 }
    }
}

impl PolynomialParams {
    pub fn length(&self) -> usize {
        self.n.unwrap_or_else(|| (self.t.powf(self.theta) - 1e-9).ceil() as usize)
    }

    fn polynomial(&self) -> Result<DirichletPolynomial, CliError> {
        let n = self.length();
        if n > 100_000 {
            return Err(CliError::TooLarge(format!("polynomial length {n} exceeds 100000")));
        }
        let model = CoeffModel { seed: self.seed, ..self.model.clone() };
        Ok(build(&model, n)?)
    }
}

pub fn main_term_cmd(_exec: &Rayon, p: &PolynomialParams) -> Result<Outcome, CliError> {
    let poly = p.polynomial()?;
    let report = main_term(&poly, p.t)?;
    let mut out = Outcome::new(&report, None)?;
    out.fields.insert("N".into(), Value::from(poly.len()));
    Ok(out)
}

pub fn diagonal_cmd(_exec: &Rayon, p: &PolynomialParams) -> Result<Outcome, CliError> {
    let poly = p.polynomial()?;
    let report = diagonal_term(&poly, p.t)?;
    let mut out = Outcome::new(&report, None)?;
    out.fields.insert("N".into(), Value::from(poly.len()));
    Ok(out)
}

// ---------------------------------------------------------------- third-moment

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThirdMomentParams {
    #[serde(rename = "T_grid")]
    pub t_grid: Vec<f64>,
    /// `σ = 1/2 + sigma_offset / log T`
    pub sigma_offset: f64,
    pub quadrature: QuadratureSpec,
    pub zeta_line: ZetaEvalConfig,
    pub zeta_off_line: ZetaEvalConfig,
    pub calibration: Calibration,
}

impl Default for ThirdMomentParams {
    fn default() -> Self {
        Self {
            t_grid: vec![1e3, 2e3, 5e3, 1e4, 2e4],
            sigma_offset: 3.0,
            quadrature: QuadratureSpec::default(),
            zeta_line: default_zeta_for(0.5),
            zeta_off_line: default_zeta_for(0.75),
            calibration: Calibration::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThirdMomentRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub sigma: f64,
    pub m3_half: f64,
    pub m3_half_err: f64,
    pub m3_sigma: f64,
    pub m3_sigma_err: f64,
    /// `M₃(1/2,T) / (T (log T)^{9/4})`
    pub normalized: f64,
    pub transfer_ratio: f64,
    pub transfer_bound: f64,
}

#[derive(Debug, Serialize)]
struct ThirdMomentResult {
    rows: Vec<ThirdMomentRow>,
    normalized_spread: f64,
    spread_passed: bool,
    transfer_passed: bool,
    passed: bool,
}

pub fn third_moment_cmd(exec: &Rayon, p: &ThirdMomentParams) -> Result<Outcome, CliError> {
    if p.t_grid.is_empty() {
        return Err(CliError::ConfigInvalid("T_grid is empty".into()));
    }
    if !(p.sigma_offset > 0.0) {
        return Err(CliError::ConfigInvalid("sigma_offset must be positive".into()));
    }
    let mut rows = Vec::with_capacity(p.t_grid.len());
    for &t in &p.t_grid {
        let sigma = 0.5 + p.sigma_offset / t.ln();
        let half = third_moment(exec, 0.5, t, &p.quadrature, &p.zeta_line)?;
        let off = third_moment(exec, sigma, t, &p.quadrature, &p.zeta_off_line)?;
        rows.push(ThirdMomentRow {
            t,
            sigma,
            m3_half: half.value,
            m3_half_err: half.abs_error_estimate,
            m3_sigma: off.value,
            m3_sigma_err: off.abs_error_estimate,
            normalized: half.value / (t * t.ln().powf(2.25)),
            transfer_ratio: half.value / off.value,
            transfer_bound: p.calibration.transfer_constant * t.powf(1.5 * (sigma - 0.5)),
        });
    }
    let hi = rows.iter().map(|r| r.normalized).fold(f64::NEG_INFINITY, f64::max);
    let lo = rows.iter().map(|r| r.normalized).fold(f64::INFINITY, f64::min);
    let spread = hi / lo;
    let spread_passed = spread <= p.calibration.third_moment_factor;
    let transfer_passed = rows.iter().all(|r| r.transfer_ratio <= r.transfer_bound);
    let csv = to_csv(&rows)?;
    let result = ThirdMomentResult { rows, normalized_spread: spread, spread_passed, transfer_passed, passed: spread_passed && transfer_passed };
    Outcome::new(&result, Some(csv))
}

// ---------------------------------------------------------------- trilinear

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TrilinearPreset {
    /// random-coefficient ensemble against the bound shapes
    Harness,
    /// prime-indicator construction with large `|S|`
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrilinearParams {
    pub preset: TrilinearPreset,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub trials: usize,
    pub model: CoeffModel,
    pub seed: u64,
    pub epsilon: f64,
    /// mass of the smooth `α` in the lower-bound construction
    #[serde(rename = "K")]
    pub k: f64,
}

impl Default for TrilinearParams {
    fn default() -> Self {
        Self { preset: TrilinearPreset::Harness, a: 8, m: 8, n: 8, trials: 100, model: CoeffModel::random_sign(0), seed: 0, epsilon: 0.0, k: 0.25 }
    }
}

pub fn trilinear(exec: &Rayon, p: &TrilinearParams) -> Result<Outcome, CliError> {
    match p.preset {
        TrilinearPreset::Harness => {
            let cfg = HarnessConfig { a: p.a, m: p.m, n: p.n, trials: p.trials, model: p.model.clone(), seed: p.seed, epsilon: p.epsilon };
            let report = ratio_harness(exec, &cfg)?;
            let csv = to_csv(&report.rows)?;
            let mut out = Outcome::new(&report, Some(csv))?;
            out.fields.remove("config");
            Ok(out)
        }
        TrilinearPreset::LowerBound => {
            let report = lower_bound_construction(exec, p.m, p.n, p.a, p.k)?;
            let mut out = Outcome::new(&report, None)?;
            out.fields.insert("poisson_ratio".into(), Value::from(report.s_abs / report.poisson_prediction.abs()));
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------- lower-bound

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LowerBoundParams {
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "M_grid")]
    pub m_grid: Vec<u64>,
    #[serde(rename = "N_grid")]
    pub n_grid: Vec<u64>,
    #[serde(rename = "A_grid")]
    pub a_grid: Vec<u64>,
    /// accepted range of `|S|` over the crude prediction
    pub ratio_range: (f64, f64),
    /// required lower bound for `|S|/(MA)` across the grid
    pub s_over_ma_floor: f64,
}

impl Default for LowerBoundParams {
    fn default() -> Self {
        Self {
            a: 8,
            m: 64,
            n: 8,
            k: 0.25,
            m_grid: vec![64, 128, 256],
            n_grid: vec![8, 16],
            a_grid: vec![8, 16],
            ratio_range: (0.5, 2.0),
            s_over_ma_floor: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridRow {
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "A")]
    pub a: u64,
    pub s_abs: f64,
    pub crude_prediction: f64,
    pub poisson_prediction: f64,
    pub ratio: f64,
    pub s_over_ma: f64,
}

impl From<&LowerBoundReport> for GridRow {
    fn from(r: &LowerBoundReport) -> Self {
        Self {
            m: r.spec.m,
            n: r.spec.n,
            a: r.spec.a,
            s_abs: r.s_abs,
            crude_prediction: r.crude_prediction,
            poisson_prediction: r.poisson_prediction,
            ratio: r.ratio,
            s_over_ma: r.s_over_ma,
        }
    }
}

#[derive(Debug, Serialize)]
struct LowerBoundResult {
    construction: LowerBoundReport,
    char_moment: twistmo_core::kloosterman::CharMomentCount,
    ratio: f64,
    ratio_passed: bool,
    grid: Vec<GridRow>,
    min_s_over_ma: f64,
    grid_passed: bool,
    passed: bool,
}

pub fn lower_bound(exec: &Rayon, p: &LowerBoundParams) -> Result<Outcome, CliError> {
    let construction = lower_bound_construction(exec, p.m, p.n, p.a, p.k)?;
    let char_moment = char_fourth_moment_count(p.a, p.n)?;
    let mut grid = Vec::new();
    for &m in &p.m_grid {
        for &n in &p.n_grid {
            for &a in &p.a_grid {
                grid.push(GridRow::from(&lower_bound_construction(exec, m, n, a, p.k)?));
            }
        }
    }
    let min_s_over_ma = grid.iter().map(|r| r.s_over_ma).fold(f64::INFINITY, f64::min);
    let ratio = construction.ratio;
    let ratio_passed = ratio >= p.ratio_range.0 && ratio <= p.ratio_range.1;
    let grid_passed = !grid.is_empty() && min_s_over_ma >= p.s_over_ma_floor;
    let csv = to_csv(&grid)?;
    let result =
        LowerBoundResult { construction, char_moment, ratio, ratio_passed, grid, min_s_over_ma, grid_passed, passed: ratio_passed && grid_passed };
    Outcome::new(&result, Some(csv))
}

// ---------------------------------------------------------------- weights-selftest

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitySample {
    pub s_re: f64,
    pub s_im: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightsSelftestParams {
    pub weights: WeightDescriptor,
    pub partition_points: usize,
    pub partition_tol: f64,
    /// abscissas compared against each other, on a log grid of `x`
    pub w_lines: Vec<f64>,
    pub w_range: (f64, f64),
    pub w_points: usize,
    pub w_tol: f64,
    pub residue_x: Vec<f64>,
    pub residue_radius: f64,
    pub residue_tol: f64,
    pub identity_samples: Vec<IdentitySample>,
    pub identity_tol: f64,
    pub cos_mellin_s: Vec<(f64, f64)>,
    pub cos_mellin_tol: f64,
}

impl Default for WeightsSelftestParams {
    fn default() -> Self {
        Self {
            weights: WeightDescriptor::default(),
            partition_points: 10_000,
            partition_tol: 1e-10,
            w_lines: vec![1.0, 2.0, 3.0],
            w_range: (1e-4, 1e2),
            w_points: 61,
            w_tol: 1e-9,
            residue_x: vec![2.0, 10.0, 100.0],
            residue_radius: 0.05,
            residue_tol: 1e-6,
            identity_samples: vec![IdentitySample { s_re: 2.0, s_im: 0.0, x: 20.0 }, IdentitySample { s_re: 1.5, s_im: 5.0, x: 50.0 }],
            identity_tol: 1e-6,
            cos_mellin_s: vec![(0.25, 0.0), (0.25, 1.0)],
            cos_mellin_tol: 1e-5,
        }
    }
}

#[derive(Debug, Serialize)]
struct ResidueRow {
    x: f64,
    value: Complex64,
    closed_form: f64,
    deviation: f64,
}

#[derive(Debug, Serialize)]
struct IdentityRow {
    s: Complex64,
    x: f64,
    lhs: Complex64,
    rhs: Complex64,
    deviation: f64,
    terms: usize,
    height: f64,
}

#[derive(Debug, Serialize)]
struct CosMellinRow {
    s: Complex64,
    value: Complex64,
    closed_form: Complex64,
    deviation: f64,
}

#[derive(Debug, Serialize)]
struct SelftestResult {
    partition_max_dev: f64,
    w_contour_max_dev: f64,
    w_closed_form_max_dev: f64,
    residues: Vec<ResidueRow>,
    residue_max_dev: f64,
    identity: Vec<IdentityRow>,
    identity_max_dev: f64,
    cos_mellin: Vec<CosMellinRow>,
    cos_mellin_max_dev: f64,
    passed: bool,
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, f64::max)
}

pub fn weights_selftest(exec: &Rayon, p: &WeightsSelftestParams) -> Result<Outcome, CliError> {
    use twistmo_core::exec::Executor;

    p.weights.validate()?;
    if p.w_lines.len() < 2 {
        return Err(CliError::ConfigInvalid("w_lines needs at least two abscissas".into()));
    }
    if p.w_lines.iter().any(|&c| c <= 0.0) {
        return Err(CliError::ConfigInvalid("w_lines abscissas must be positive".into()));
    }
    let part = DyadicPartition::new(p.weights.partition.x_min, p.weights.partition.x_max)?;
    let xs = log_grid(p.weights.partition.x_min, p.weights.partition.x_max, p.partition_points);
    let partition_max_dev = max_of(exec.map_indexed(xs.len(), |i| (part.sum(xs[i]) - 1.0).abs()).into_iter());

    // deviation between lines scaled by the integrand mass, as cancellation sets the floor
    let layout = WContour::default();
    let wx = log_grid(p.w_range.0, p.w_range.1, p.w_points);
    let per_x: Vec<Result<(f64, f64), CliError>> = exec.map_indexed(wx.len(), |i| {
        let x = wx[i];
        let vals = p.w_lines.iter().map(|&c| w_on_line(x, c, &layout)).collect::<Result<Vec<_>, _>>()?;
        let scale = vals.iter().map(|v| v.magnitude).fold(1.0, f64::max);
        let spread = max_of(vals.iter().map(|v| (v.value - vals[0].value).norm().max(v.value.im.abs()) / scale));
        let exact = w_closed_form(x);
        let closed = max_of(vals.iter().map(|v| (v.value.re - exact).abs() / scale));
        Ok((spread, closed))
    });
    let per_x = per_x.into_iter().collect::<Result<Vec<_>, _>>()?;
    let w_contour_max_dev = max_of(per_x.iter().map(|r| r.0));
    let w_closed_form_max_dev = max_of(per_x.iter().map(|r| r.1));

    let residues = p
        .residue_x
        .iter()
        .map(|&x| {
            let r = residue_main_term(x, p.residue_radius)?;
            Ok(ResidueRow { x, value: r.value, closed_form: r.closed_form, deviation: (r.value - r.closed_form).norm() })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let residue_max_dev = max_of(residues.iter().map(|r| r.deviation));

    let icfg = SmoothingIdentityConfig::default();
    let identity = exec
        .map_indexed(p.identity_samples.len(), |i| {
            let smp = p.identity_samples[i];
            let s = Complex64::new(smp.s_re, smp.s_im);
            mellin_smoothing_identity_check(s, smp.x, &p.weights.six, &icfg).map(|c| IdentityRow {
                s,
                x: smp.x,
                lhs: c.lhs,
                rhs: c.rhs,
                deviation: c.deviation,
                terms: c.terms,
                height: c.height,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let identity_max_dev = max_of(identity.iter().map(|r| r.deviation));

    let cos_mellin = p
        .cos_mellin_s
        .iter()
        .map(|&(re, im)| {
            let s = Complex64::new(re, im);
            let c = cos_mellin_extrapolated(s, 0.2, 6)?;
            Ok(CosMellinRow { s, value: c.value, closed_form: c.closed_form, deviation: c.deviation })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let cos_mellin_max_dev = max_of(cos_mellin.iter().map(|r| r.deviation));

    let passed = partition_max_dev < p.partition_tol
        && w_contour_max_dev < p.w_tol
        && w_closed_form_max_dev < p.w_tol
        && residue_max_dev < p.residue_tol
        && identity_max_dev < p.identity_tol
        && cos_mellin_max_dev < p.cos_mellin_tol;
    let result = SelftestResult {
        partition_max_dev,
        w_contour_max_dev,
        w_closed_form_max_dev,
        residues,
        residue_max_dev,
        identity,
        identity_max_dev,
        cos_mellin,
        cos_mellin_max_dev,
        passed,
    };
    Outcome::new(&result, None)
}
