//! Deterministic derivative-free maximization over products of real
//! intervals and closed unit disks.
//!
//! The search runs in three stages:
//!
//! 1. an anchor lattice of extreme points (interval endpoints, disk center,
//!    half-radius and boundary phases) — the sharp maxima of the coefficient
//!    problems sit on these boundary configurations;
//! 2. a coarse scan: the full product grid (linear on intervals, polar on
//!    disks, boundary included exactly) when it fits the evaluation cap,
//!    halving the resolution until it does, plus a seeded quasi-random scan
//!    whose size grows with `grid_n` and whose points are a prefix-stable
//!    function of `(seed, index)`;
//! 3. shrinking-neighborhood pattern search from the best `multistart_k`
//!    scan points.
//!
//! Every stage reduces with a total order on `(value, stage, index)`, so
//! results are identical across thread counts and repeated runs.  No
//! optimality certificate is claimed; the verification pairs searched maxima
//! with proven upper bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// One factor of the search domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dim {
    Interval { lo: f64, hi: f64 },
    Disk,
}

impl Dim {
    /// Number of ambient real coordinates of the factor.
    pub fn len(&self) -> usize {
        match self {
            Dim::Interval { .. } => 1,
            Dim::Disk => 2,
        }
    }
}

/// Search effort knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub grid_n: usize,
    pub refine_iters: usize,
    pub multistart_k: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { grid_n: 24, refine_iters: 300, multistart_k: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub dims: Vec<Dim>,
    pub budget: Budget,
    pub seed: u64,
}

impl SearchSpace {
    pub fn new(dims: Vec<Dim>, budget: Budget, seed: u64) -> Self {
        Self { dims, budget, seed }
    }

    pub fn ambient_len(&self) -> usize {
        self.dims.iter().map(Dim::len).sum()
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.dims.is_empty() {
            return Err(SearchError::InvalidSpace("no dimensions".into()));
        }
        if self.budget.grid_n < 8 {
            return Err(SearchError::InvalidSpace(format!(
                "grid_n must be >= 8, got {}",
                self.budget.grid_n
            )));
        }
        if self.budget.multistart_k < 1 {
            return Err(SearchError::InvalidSpace("multistart_k must be >= 1".into()));
        }
        for dim in &self.dims {
            if let Dim::Interval { lo, hi } = dim {
                if !(lo < hi) {
                    return Err(SearchError::InvalidSpace(format!(
                        "interval needs lo < hi, got [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Clamp a point into the domain (intervals clamp, disks rescale).
    pub fn project(&self, point: &mut [f64]) {
        let mut offset = 0;
        for dim in &self.dims {
            match dim {
                Dim::Interval { lo, hi } => {
                    point[offset] = point[offset].clamp(*lo, *hi);
                }
                Dim::Disk => {
                    let norm = point[offset].hypot(point[offset + 1]);
                    if norm > 1.0 {
                        point[offset] /= norm;
                        point[offset + 1] /= norm;
                    }
                }
            }
            offset += dim.len();
        }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error("objective returned a non-finite value {value} at {point:?}")]
    NonFinite { point: Vec<f64>, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub max_value: f64,
    pub argmax: Vec<f64>,
    pub evaluations: u64,
    /// `(evaluations so far, best so far)` after the scan stage and after
    /// each refinement start.
    pub trace: Option<Vec<(u64, f64)>>,
}

/// Grid products beyond this size fall back to a halved resolution.
const GRID_CAP: usize = 8_000_000;
/// Anchor lattices beyond this size fall back to the coarse anchor set.
const ANCHOR_CAP: usize = 250_000;
/// Seeded scan points per unit of `grid_n^2`.
const SAMPLES_PER_SQUARED_GRID: usize = 350;
/// Sample streams live above grid streams in the per-seed stream space.
const SAMPLE_STREAM_BASE: u64 = 1 << 32;

/// Candidate ranked by value with a stable tie-break key.
#[derive(Debug, Clone)]
struct Ranked {
    value: f64,
    key: (u8, u64),
    point: Vec<f64>,
}

fn better(a: &Ranked, b: &Ranked) -> bool {
    match a.value.total_cmp(&b.value) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => a.key < b.key,
    }
}

/// Deterministic global maximization; see the module docs for the stages.
pub fn maximize<F>(objective: F, space: &SearchSpace) -> Result<SearchResult, SearchError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    space.validate()?;
    let k = space.budget.multistart_k;

    let mut pool: Vec<Ranked> = Vec::new();
    let mut evaluations: u64 = 0;
    let mut trace: Vec<(u64, f64)> = Vec::new();

    let anchors = anchor_points(space);
    let (top, n) = scan_points(&objective, 0, anchors.len(), |i| anchors[i].clone(), k)?;
    evaluations += n;
    merge_pool(&mut pool, top, k);

    let grid = GridSpec::fit(space);
    if let Some(grid) = &grid {
        let (top, n) = scan_points(&objective, 1, grid.total, |i| grid.point(i), k)?;
        evaluations += n;
        merge_pool(&mut pool, top, k);
    }

    let samples = SAMPLES_PER_SQUARED_GRID * space.budget.grid_n * space.budget.grid_n;
    let (top, n) = scan_points(&objective, 2, samples, |i| sample_point(space, i as u64), k)?;
    evaluations += n;
    merge_pool(&mut pool, top, k);

    let mut best = pool[0].clone();
    trace.push((evaluations, best.value));

    for start in pool.iter().take(k) {
        let (value, point, n) =
            refine(&objective, space, &start.point, space.budget.refine_iters)?;
        evaluations += n;
        let candidate = Ranked { value, key: start.key, point };
        if better(&candidate, &best) {
            best = candidate;
        }
        trace.push((evaluations, best.value));
    }

    Ok(SearchResult {
        max_value: best.value,
        argmax: best.point,
        evaluations,
        trace: Some(trace),
    })
}

fn merge_pool(pool: &mut Vec<Ranked>, top: Vec<Ranked>, k: usize) {
    pool.extend(top);
    pool.sort_by(|a, b| {
        b.value.total_cmp(&a.value).then_with(|| a.key.cmp(&b.key))
    });
    pool.truncate(k.max(1));
}

/// Evaluate `count` generated points in parallel, returning the top `k`
/// candidates under the `(value, index)` order and the evaluation count.
fn scan_points<F, G>(
    objective: &F,
    stage: u8,
    count: usize,
    point_at: G,
    k: usize,
) -> Result<(Vec<Ranked>, u64), SearchError>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(usize) -> Vec<f64> + Sync,
{
    if count == 0 {
        return Ok((Vec::new(), 0));
    }
    let tops: Result<Vec<Vec<Ranked>>, SearchError> = (0..count)
        .into_par_iter()
        .fold(Vec::new, |mut acc: Vec<Ranked>, i| {
            let point = point_at(i);
            let value = objective(&point);
            let candidate = Ranked { value, key: (stage, i as u64), point };
            insert_top(&mut acc, candidate, k);
            acc
        })
        .map(|acc| {
            if let Some(bad) = acc.iter().find(|r| !r.value.is_finite()) {
                Err(SearchError::NonFinite { point: bad.point.clone(), value: bad.value })
            } else {
                Ok(acc)
            }
        })
        .collect();
    let mut merged: Vec<Ranked> = Vec::new();
    for chunk in tops? {
        for candidate in chunk {
            insert_top(&mut merged, candidate, k);
        }
    }
    Ok((merged, count as u64))
}

fn insert_top(acc: &mut Vec<Ranked>, candidate: Ranked, k: usize) {
    // NaN candidates are kept so the caller can report them as errors.
    if !candidate.value.is_finite() {
        acc.insert(0, candidate);
        acc.truncate(k.max(1));
        return;
    }
    let pos = acc.partition_point(|r| better(r, &candidate));
    if pos < k.max(1) {
        acc.insert(pos, candidate);
        acc.truncate(k.max(1));
    }
}

/// Pattern search with per-coordinate steps and domain projection.
fn refine<F>(
    objective: &F,
    space: &SearchSpace,
    start: &[f64],
    iters: usize,
) -> Result<(f64, Vec<f64>, u64), SearchError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let scales = coordinate_scales(space);
    let mut x = start.to_vec();
    space.project(&mut x);
    let mut fx = objective(&x);
    let mut evals: u64 = 1;
    if !fx.is_finite() {
        return Err(SearchError::NonFinite { point: x, value: fx });
    }
    let mut h = 0.5_f64;
    for _ in 0..iters {
        if h < 1e-14 {
            break;
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for (i, scale) in scales.iter().enumerate() {
            for sign in [1.0, -1.0] {
                let mut candidate = x.clone();
                candidate[i] += sign * h * scale;
                space.project(&mut candidate);
                let value = objective(&candidate);
                evals += 1;
                if !value.is_finite() {
                    return Err(SearchError::NonFinite { point: candidate, value });
                }
                let incumbent = best.as_ref().map_or(fx, |(v, _)| *v);
                if value > incumbent {
                    best = Some((value, candidate));
                }
            }
        }
        match best {
            Some((value, point)) => {
                fx = value;
                x = point;
            }
            None => h *= 0.5,
        }
    }
    Ok((fx, x, evals))
}

fn coordinate_scales(space: &SearchSpace) -> Vec<f64> {
    let mut scales = Vec::with_capacity(space.ambient_len());
    for dim in &space.dims {
        match dim {
            Dim::Interval { lo, hi } => scales.push((hi - lo) / 2.0),
            Dim::Disk => {
                scales.push(1.0);
                scales.push(1.0);
            }
        }
    }
    scales
}

/// Extreme-point lattice: interval quartiles, disk center, half-radius ring
/// and 16 boundary phases.
fn anchor_points(space: &SearchSpace) -> Vec<Vec<f64>> {
    let fine: Vec<Vec<Vec<f64>>> = space.dims.iter().map(|d| dim_anchors(d, false)).collect();
    let size: usize = fine.iter().map(Vec::len).product();
    let per_dim = if size <= ANCHOR_CAP {
        fine
    } else {
        space.dims.iter().map(|d| dim_anchors(d, true)).collect()
    };
    cartesian_product(&per_dim)
}

fn dim_anchors(dim: &Dim, coarse: bool) -> Vec<Vec<f64>> {
    match dim {
        Dim::Interval { lo, hi } => {
            let w = hi - lo;
            let ts: &[f64] =
                if coarse { &[0.0, 0.5, 1.0] } else { &[0.0, 0.25, 0.5, 0.75, 1.0] };
            ts.iter().map(|t| vec![lo + t * w]).collect()
        }
        Dim::Disk => {
            let mut pts = vec![vec![0.0, 0.0]];
            let boundary_phases = if coarse { 8 } else { 16 };
            if !coarse {
                for k in 0..8 {
                    let theta = std::f64::consts::PI * k as f64 / 4.0;
                    pts.push(vec![0.5 * theta.cos(), 0.5 * theta.sin()]);
                }
            }
            for k in 0..boundary_phases {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / boundary_phases as f64;
                pts.push(vec![theta.cos(), theta.sin()]);
            }
            pts
        }
    }
}

fn cartesian_product(per_dim: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for choices in per_dim {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for choice in choices {
                let mut point = prefix.clone();
                point.extend_from_slice(choice);
                next.push(point);
            }
        }
        out = next;
    }
    out
}

/// Product grid with nested resolutions: doubling `grid_n` refines every
/// per-dimension grid in place, so the point set only grows with budget.
struct GridSpec {
    dims: Vec<GridDim>,
    total: usize,
}

enum GridDim {
    Interval { lo: f64, hi: f64, n: usize },
    Disk { n: usize },
}

impl GridDim {
    fn count(&self) -> usize {
        match self {
            // lo + j (hi-lo)/n, j = 0..=n
            GridDim::Interval { n, .. } => n + 1,
            // center once, then n radii times 4n angles
            GridDim::Disk { n } => 1 + 4 * n * n,
        }
    }

    fn point(&self, index: usize, out: &mut Vec<f64>) {
        match *self {
            GridDim::Interval { lo, hi, n } => {
                out.push(lo + (hi - lo) * index as f64 / n as f64);
            }
            GridDim::Disk { n } => {
                if index == 0 {
                    out.push(0.0);
                    out.push(0.0);
                } else {
                    let angles = 4 * n;
                    let j = 1 + (index - 1) / angles;
                    let k = (index - 1) % angles;
                    let r = j as f64 / n as f64;
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / angles as f64;
                    out.push(r * theta.cos());
                    out.push(r * theta.sin());
                }
            }
        }
    }
}

impl GridSpec {
    /// Largest halving `grid_n / 2^k >= 4` whose product fits the cap.
    fn fit(space: &SearchSpace) -> Option<GridSpec> {
        let mut n = space.budget.grid_n;
        while n >= 4 {
            let dims: Vec<GridDim> = space
                .dims
                .iter()
                .map(|d| match *d {
                    Dim::Interval { lo, hi } => GridDim::Interval { lo, hi, n },
                    Dim::Disk => GridDim::Disk { n },
                })
                .collect();
            let total = dims.iter().try_fold(1usize, |acc, d| {
                acc.checked_mul(d.count()).filter(|t| *t <= GRID_CAP)
            });
            if let Some(total) = total {
                return Some(GridSpec { dims, total });
            }
            n /= 2;
        }
        None
    }

    fn point(&self, mut index: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dims.len() * 2);
        for dim in &self.dims {
            let count = dim.count();
            dim.point(index % count, &mut out);
            index /= count;
        }
        out
    }
}

/// Seeded scan point: stream `SAMPLE_STREAM_BASE + index` of the space seed,
/// uniform on each factor.
fn sample_point(space: &SearchSpace, index: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(space.seed);
    rng.set_stream(SAMPLE_STREAM_BASE + index);
    let mut point = Vec::with_capacity(space.ambient_len());
    for dim in &space.dims {
        match dim {
            Dim::Interval { lo, hi } => {
                point.push(lo + (hi - lo) * rng.random::<f64>());
            }
            Dim::Disk => {
                let r = rng.random::<f64>().sqrt();
                let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                point.push(r * theta.cos());
                point.push(r * theta.sin());
            }
        }
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval_space(grid_n: usize) -> SearchSpace {
        SearchSpace::new(
            vec![Dim::Interval { lo: -1.0, hi: 1.0 }],
            Budget { grid_n, ..Budget::default() },
            42,
        )
    }

    #[test]
    fn maximizes_concave_parabola() {
        let result = maximize(|p| 1.0 - p[0] * p[0], &interval_space(24)).unwrap();
        assert!((result.max_value - 1.0).abs() < 1e-8);
        assert!(result.argmax[0].abs() < 1e-4);
    }

    #[test]
    fn grid_includes_interval_endpoints_and_disk_boundary() {
        let result = maximize(|p| p[0], &interval_space(24)).unwrap();
        assert_eq!(result.max_value, 1.0);

        let disk = SearchSpace::new(vec![Dim::Disk], Budget::default(), 1);
        let result = maximize(|p| p[0] * p[0] + p[1] * p[1], &disk).unwrap();
        // boundary points carry one ulp of projection rounding
        assert!((result.max_value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn runs_are_bit_identical() {
        let space = SearchSpace::new(
            vec![Dim::Interval { lo: 0.0, hi: 2.0 }, Dim::Disk],
            Budget::default(),
            7,
        );
        let objective =
            |p: &[f64]| (2.0 - p[0]).sin() + p[1] * 0.3 - p[2] * p[2] + 0.1 * (p[0] * 3.0).cos();
        let a = maximize(objective, &space).unwrap();
        let b = maximize(objective, &space).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn doubling_grid_never_decreases_max() {
        let spaces = [
            vec![Dim::Interval { lo: -1.0, hi: 1.0 }],
            vec![Dim::Disk, Dim::Disk],
            vec![Dim::Interval { lo: -1.0, hi: 1.0 }, Dim::Disk, Dim::Disk],
        ];
        let objective = |p: &[f64]| {
            let mut acc = 0.0;
            for (i, v) in p.iter().enumerate() {
                acc += (1.3 * v + 0.2 * i as f64).sin() + 0.05 * v;
            }
            acc
        };
        for dims in spaces {
            let coarse = maximize(
                objective,
                &SearchSpace::new(dims.clone(), Budget { grid_n: 12, ..Budget::default() }, 5),
            )
            .unwrap();
            let fine = maximize(
                objective,
                &SearchSpace::new(dims, Budget { grid_n: 24, ..Budget::default() }, 5),
            )
            .unwrap();
            assert!(
                fine.max_value >= coarse.max_value,
                "doubling decreased max: {} -> {}",
                coarse.max_value,
                fine.max_value
            );
        }
    }

    #[test]
    fn argmax_evaluates_to_max_value() {
        let space = SearchSpace::new(vec![Dim::Disk], Budget::default(), 3);
        let objective = |p: &[f64]| 2.0 * p[0] - p[1] * p[1] + 0.25 * p[1];
        let result = maximize(objective, &space).unwrap();
        assert!((objective(&result.argmax) - result.max_value).abs() <= 1e-12);
        assert!(result.evaluations > 0);
        assert!(result.trace.is_some());
    }

    #[test]
    fn non_finite_objective_is_an_error() {
        let space = interval_space(8);
        let err = maximize(|p| if p[0] > 0.5 { f64::NAN } else { p[0] }, &space);
        assert!(matches!(err, Err(SearchError::NonFinite { .. })));
    }

    #[test]
    fn invalid_spaces_are_rejected() {
        let bad = SearchSpace::new(
            vec![Dim::Interval { lo: 1.0, hi: 0.0 }],
            Budget::default(),
            0,
        );
        assert!(matches!(maximize(|_| 0.0, &bad), Err(SearchError::InvalidSpace(_))));
        let small = SearchSpace::new(
            vec![Dim::Disk],
            Budget { grid_n: 4, ..Budget::default() },
            0,
        );
        assert!(matches!(maximize(|_| 0.0, &small), Err(SearchError::InvalidSpace(_))));
    }
}
