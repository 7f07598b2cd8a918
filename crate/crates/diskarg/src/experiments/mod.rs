//! Sweep drivers tying the pieces together: radius ladders of grid suprema
//! for |D^{-gamma} arg f| and for the components of the compensated log L,
//! verdicts from declared growth heuristics, divisor-stability reruns, and
//! CSV/JSON report plumbing.

pub mod generators;
pub mod oracles;

use crate::blaschke::Tail;
use crate::frac_calc::{self, FracError, SupOptions};
use crate::geometry::{BoundaryPoint, DiskPoint, GeometryError, StolzRegion};
use crate::local_zeros;
use crate::measures::{divisor_split, frostman_integral, BoundedFunctionSpec, FrostmanIntegral};
use crate::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentsError {
    #[error("conjugate closure needs non-real zeros; zero {index} is real")]
    RealZeroInBase { index: usize },
    #[error("generator needs stored zeros, not a tail descriptor")]
    TailedBase,
    #[error("h must lie in (0, 1), got {h}")]
    InvalidH { h: f64 },
    #[error("compensated-log sweeps need origin order 0 (log z^p diverges at the ray base); divide the power factor out first")]
    OriginOrder { p: u32 },
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Outcome of a finite radius ladder against an asymptotic dichotomy. The
/// ladder is split into three blocks; `Bounded` means the last block's peak
/// stayed within `plateau_factor` of the middle one's, `Growing` means each
/// block stepped up by at least `growth_factor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "bounded",
            Verdict::Growing => "growing",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictThresholds {
    pub plateau_factor: f64,
    pub growth_factor: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        Self {
            plateau_factor: 2.0,
            growth_factor: 2.0,
        }
    }
}

/// Verdict over a supremum series, most recent level last. Fewer than three
/// levels cannot separate the blocks and stay inconclusive.
pub fn verdict_of(sups: &[f64], thresholds: &VerdictThresholds) -> Verdict {
    let n = sups.len();
    if n < 3 {
        return Verdict::Inconclusive;
    }
    let third = n / 3;
    let peak = |s: &[f64]| s.iter().fold(0.0f64, |acc, &v| acc.max(v));
    let first = peak(&sups[..third]);
    let mid = peak(&sups[third..2 * third]);
    let last = peak(&sups[2 * third..]);
    if last <= thresholds.plateau_factor * mid {
        return Verdict::Bounded;
    }
    if mid >= thresholds.growth_factor * first && last >= thresholds.growth_factor * mid {
        return Verdict::Growing;
    }
    Verdict::Inconclusive
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepMode {
    #[serde(rename = "arg")]
    Arg,
    #[serde(rename = "lnb")]
    CompensatedLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRow {
    pub level_index: i32,
    pub radius: f64,
    pub sup_abs_dgamma_arg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_abs_dgamma_re_l: Option<f64>,
    pub grid_failures: usize,
    pub grid_points: usize,
}

fn row_peak(row: &LevelRow) -> f64 {
    row.sup_abs_dgamma_arg
        .max(row.sup_abs_dgamma_re_l.unwrap_or(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub mode: SweepMode,
    pub gamma: f64,
    pub sigma: f64,
    pub vertex_theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    pub frostman: FrostmanIntegral,
    pub levels: Vec<LevelRow>,
    pub verdict: Verdict,
    pub thresholds: VerdictThresholds,
    pub grid_angles: usize,
    pub include_quarter_ray: bool,
}

/// Parameters shared by every sweep: where to look (vertex, sigma), at what
/// depth (dyadic radius exponents j, radius 1 - 2^{-j}), with what grid, and
/// which verdict thresholds to apply.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub vertex: BoundaryPoint,
    pub gamma: f64,
    pub sigma: f64,
    pub truncated: bool,
    pub level_exponents: Vec<i32>,
    pub grid: SupOptions,
    pub thresholds: VerdictThresholds,
}

impl SweepConfig {
    pub fn new(vertex_theta: f64, gamma: f64, sigma: f64) -> Self {
        Self {
            vertex: BoundaryPoint::new(vertex_theta),
            gamma,
            sigma,
            truncated: false,
            level_exponents: (4..=16).collect(),
            grid: SupOptions::default(),
            thresholds: VerdictThresholds::default(),
        }
    }

    pub fn with_levels(mut self, exponents: impl IntoIterator<Item = i32>) -> Self {
        self.level_exponents = exponents.into_iter().collect();
        self
    }

    pub fn with_grid_angles(mut self, angles: usize) -> Self {
        self.grid.grid_angles = angles;
        self
    }

    pub fn radii(&self) -> Vec<f64> {
        self.level_exponents
            .iter()
            .map(|&j| 1.0 - 0.5f64.powi(j))
            .collect()
    }
}

/// Ladder of grid suprema of |D^{-gamma} arg f| plus the Frostman integral
/// of the spec's complete measure at the vertex, judged by the block rule.
pub fn verify_theorem_arg(
    spec: &BoundedFunctionSpec,
    cfg: &SweepConfig,
) -> Result<SweepReport, ExperimentsError> {
    let region = StolzRegion::new(cfg.vertex, cfg.sigma, cfg.truncated)?;
    let levels = frac_calc::sup_frac_arg(spec, &region, cfg.gamma, &cfg.radii(), &cfg.grid)?;
    let frostman = frostman_integral(&spec.complete_measure(), cfg.vertex, cfg.gamma);
    let rows: Vec<LevelRow> = cfg
        .level_exponents
        .iter()
        .zip(&levels)
        .map(|(&j, level)| LevelRow {
            level_index: j,
            radius: level.radius,
            sup_abs_dgamma_arg: level.supremum,
            sup_abs_dgamma_re_l: None,
            grid_failures: level.grid_failures,
            grid_points: level.grid_points,
        })
        .collect();
    let peaks: Vec<f64> = rows.iter().map(row_peak).collect();
    Ok(SweepReport {
        mode: SweepMode::Arg,
        gamma: cfg.gamma,
        sigma: cfg.sigma,
        vertex_theta: cfg.vertex.theta(),
        h: None,
        frostman,
        verdict: verdict_of(&peaks, &cfg.thresholds),
        levels: rows,
        thresholds: cfg.thresholds,
        grid_angles: cfg.grid.grid_angles,
        include_quarter_ray: cfg.grid.include_quarter_ray,
    })
}

/// Same ladder applied to the compensated log: per grid point the fractional
/// integrals of Re L and Im L along the ray, reported component-wise (the
/// `arg` column holds the Im component, which is the continuous arg f). The
/// verdict judges the larger component per level.
pub fn verify_theorem_lnb(
    spec: &BoundedFunctionSpec,
    h: f64,
    cfg: &SweepConfig,
) -> Result<SweepReport, ExperimentsError> {
    if !(h > 0.0 && h < 1.0) {
        return Err(ExperimentsError::InvalidH { h });
    }
    if spec.origin_order > 0 {
        return Err(ExperimentsError::OriginOrder {
            p: spec.origin_order,
        });
    }
    if !(0.0..1.0).contains(&cfg.gamma) {
        return Err(FracError::InvalidGamma { gamma: cfg.gamma }.into());
    }
    if spec.zeros.tail() != Tail::None {
        return Err(FracError::UnmaterializedTail.into());
    }
    let region = StolzRegion::new(cfg.vertex, cfg.sigma, cfg.truncated)?;
    let mut rows = Vec::with_capacity(cfg.level_exponents.len());
    for (&j, &r) in cfg.level_exponents.iter().zip(&cfg.radii()) {
        let rays = frac_calc::stolz_grid(&region, r, &cfg.grid);
        let grid_points = rays.len();
        let mut grid_failures = 0usize;
        let mut arg_sup = 0.0f64;
        let mut re_sup = 0.0f64;
        for &phi in &rays {
            let outer = DiskPoint::new(Complex::from_polar(r, phi)).expect("r < 1");
            if spec.zeros.cuts().contains(outer) {
                grid_failures += 1;
                continue;
            }
            if cfg.gamma == 0.0 {
                match local_zeros::l_value(spec, outer, h) {
                    Ok(l) => {
                        re_sup = re_sup.max(l.re.abs());
                        arg_sup = arg_sup.max(l.im.abs());
                    }
                    Err(_) => grid_failures += 1,
                }
                continue;
            }
            // Both component integrals sample L at the same radii, so one
            // memoized evaluation serves the pair.
            let cache: RefCell<HashMap<u64, Complex>> = RefCell::new(HashMap::new());
            let failed = Cell::new(false);
            let l_at = |x: f64| -> Complex {
                if failed.get() {
                    return Complex::new(0.0, 0.0);
                }
                if let Some(&v) = cache.borrow().get(&x.to_bits()) {
                    return v;
                }
                let z = DiskPoint::new(Complex::from_polar(x, phi)).expect("x <= r < 1");
                match local_zeros::l_value(spec, z, h) {
                    Ok(v) => {
                        cache.borrow_mut().insert(x.to_bits(), v);
                        v
                    }
                    Err(_) => {
                        failed.set(true);
                        Complex::new(0.0, 0.0)
                    }
                }
            };
            let re = frac_calc::rl_integral(|x| l_at(x).re, cfg.gamma, r, cfg.grid.tol);
            let im = frac_calc::rl_integral(|x| l_at(x).im, cfg.gamma, r, cfg.grid.tol);
            match (re, im) {
                (Ok(re), Ok(im)) if !failed.get() => {
                    re_sup = re_sup.max(re.value.abs());
                    arg_sup = arg_sup.max(im.value.abs());
                }
                _ => grid_failures += 1,
            }
        }
        rows.push(LevelRow {
            level_index: j,
            radius: r,
            sup_abs_dgamma_arg: arg_sup,
            sup_abs_dgamma_re_l: Some(re_sup),
            grid_failures,
            grid_points,
        });
    }
    let frostman = frostman_integral(&spec.complete_measure(), cfg.vertex, cfg.gamma);
    let peaks: Vec<f64> = rows.iter().map(row_peak).collect();
    Ok(SweepReport {
        mode: SweepMode::CompensatedLog,
        gamma: cfg.gamma,
        sigma: cfg.sigma,
        vertex_theta: cfg.vertex.theta(),
        h: Some(h),
        frostman,
        verdict: verdict_of(&peaks, &cfg.thresholds),
        levels: rows,
        thresholds: cfg.thresholds,
        grid_angles: cfg.grid.grid_angles,
        include_quarter_ray: cfg.grid.include_quarter_ray,
    })
}

/// Rerun the arg sweep on both parts of `splits` random divisor splits
/// (uniform zero subsets, uniform boundary fraction), two reports per split
/// in part order. Divisors of a Frostman-finite spec should all come back
/// bounded.
pub fn divisor_stability_run(
    spec: &BoundedFunctionSpec,
    cfg: &SweepConfig,
    splits: usize,
    seed: u64,
) -> Result<Vec<SweepReport>, ExperimentsError> {
    assert!(splits >= 1, "at least one split");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(2 * splits);
    for _ in 0..splits {
        let keep: Vec<bool> = (0..spec.zeros.len()).map(|_| rng.gen_bool(0.5)).collect();
        let fraction: f64 = rng.gen();
        let (first, second) = divisor_split(spec, |i, _| keep[i], fraction);
        reports.push(verify_theorem_arg(&first, cfg)?);
        reports.push(verify_theorem_arg(&second, cfg)?);
    }
    Ok(reports)
}

/// CSV rendering of a report; `verdict_partial` is the verdict over the
/// rows emitted so far, so the final row agrees with the report's verdict.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out =
        String::from("level_index,radius,sup_abs_dgamma_arg,grid_failures,verdict_partial\n");
    let peaks: Vec<f64> = report.levels.iter().map(row_peak).collect();
    for (i, row) in report.levels.iter().enumerate() {
        let partial = verdict_of(&peaks[..=i], &report.thresholds);
        writeln!(
            out,
            "{},{},{},{},{}",
            row.level_index, row.radius, row.sup_abs_dgamma_arg, row.grid_failures, partial
        )
        .expect("writing to a String cannot fail");
    }
    out
}
