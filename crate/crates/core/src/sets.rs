//! Cantor-like subsets of an interval and their mass functions.
//!
//! A cover at depth `n` is the `n`-th stage of a two-map similarity
//! construction. Coarse-grained masses use subdivisions aligned with the
//! cover's intervals; gap cells carry no mass. Sums are evaluated by walking
//! the construction tree, summing whole subtrees in closed form, so arbitrary
//! depths cost `O(depth)` per query.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaOrder;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gamma::mass_weight;
use crate::interval::Interval;
use crate::refinement::{self, MassEstimate, MassRegime};
use crate::staircase::StaircaseTable;

/// Deepest cover whose intervals may be materialized into a list.
pub const MAX_MATERIALIZED_DEPTH: u32 = 24;

/// Construction rule. `Interval` is the whole interval, refined dyadically.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetGenerator {
    Interval,
    MiddleCantor { removal_fraction: f64 },
}

impl SetGenerator {
    pub fn middle_cantor(removal_fraction: f64) -> Result<Self> {
        if removal_fraction > 0.0 && removal_fraction < 1.0 {
            Ok(SetGenerator::MiddleCantor { removal_fraction })
        } else {
            Err(Error::OutOfRange {
                what: "removal fraction",
                value: removal_fraction,
                lo: 0.0,
                hi: 1.0,
            })
        }
    }

    /// Similarity ratio `r` of each of the two pieces.
    pub fn ratio(&self) -> f64 {
        match *self {
            SetGenerator::Interval => 0.5,
            SetGenerator::MiddleCantor { removal_fraction } => 0.5 * (1.0 - removal_fraction),
        }
    }

    /// Similarity dimension `ln 2 / ln(1/r)`.
    pub fn similarity_dimension(&self) -> f64 {
        std::f64::consts::LN_2 / (1.0 / self.ratio()).ln()
    }

    fn validate(&self) -> Result<()> {
        if let SetGenerator::MiddleCantor { removal_fraction } = *self {
            SetGenerator::middle_cantor(removal_fraction)?;
        }
        Ok(())
    }
}

/// A generator placed on a bounding interval: the family of covers at all depths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverFamily {
    pub generator: SetGenerator,
    pub bounds: Interval,
}

impl CoverFamily {
    pub fn new(generator: SetGenerator, bounds: Interval) -> Result<Self> {
        generator.validate()?;
        if !(bounds.width() > 0.0) {
            return Err(Error::param("cover bounds must have positive width"));
        }
        Ok(CoverFamily { generator, bounds })
    }

    pub fn at_depth(&self, depth: u32) -> IntervalCover {
        IntervalCover { family: *self, depth }
    }
}

/// Depth-`n` approximation of a Cantor-like set: `2^n` disjoint closed
/// intervals of width `r^n (b - a)` (the interval generator reports its union).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalCover {
    pub family: CoverFamily,
    pub depth: u32,
}

/// Serializable `(generator, depth, alpha, origin)` descriptor of a cover or staircase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetDescriptor {
    pub generator: SetGenerator,
    pub depth: u32,
    pub alpha: Option<f64>,
    pub origin: Option<f64>,
}

pub fn build_cantor_cover(removal_fraction: f64, depth: u32, bounds: Interval) -> Result<IntervalCover> {
    let family = CoverFamily::new(SetGenerator::middle_cantor(removal_fraction)?, bounds)?;
    Ok(family.at_depth(depth))
}

pub fn full_interval_cover(depth: u32, bounds: Interval) -> Result<IntervalCover> {
    Ok(CoverFamily::new(SetGenerator::Interval, bounds)?.at_depth(depth))
}

impl IntervalCover {
    pub fn generator(&self) -> SetGenerator {
        self.family.generator
    }

    pub fn bounds(&self) -> Interval {
        self.family.bounds
    }

    /// Width of each depth-`n` interval; the native resolution of the cover.
    pub fn leaf_width(&self) -> f64 {
        self.bounds().width() * self.family.generator.ratio().powi(self.depth as i32)
    }

    pub fn refine(&self) -> IntervalCover {
        self.family.at_depth(self.depth + 1)
    }

    pub fn interval_count(&self) -> u64 {
        match self.family.generator {
            SetGenerator::Interval => 1,
            SetGenerator::MiddleCantor { .. } => 1u64 << self.depth.min(63),
        }
    }

    /// The cover's intervals, sorted by `lo`.
    pub fn intervals(&self) -> Result<Vec<Interval>> {
        if let SetGenerator::Interval = self.family.generator {
            return Ok(vec![self.bounds()]);
        }
        if self.depth > MAX_MATERIALIZED_DEPTH {
            return Err(Error::param(format!(
                "depth {} exceeds the materialization limit {MAX_MATERIALIZED_DEPTH}",
                self.depth
            )));
        }
        Ok(self.leaves())
    }

    /// Depth-`n` construction intervals (dyadic pieces for the interval generator).
    fn leaves(&self) -> Vec<Interval> {
        let r = self.family.generator.ratio();
        let mut out = Vec::with_capacity(1 << self.depth);
        fn walk(lo: f64, w: f64, k: u32, r: f64, out: &mut Vec<Interval>) {
            if k == 0 {
                out.push(Interval { lo, hi: lo + w });
                return;
            }
            let cw = w * r;
            walk(lo, cw, k - 1, r, out);
            walk(lo + w - cw, cw, k - 1, r, out);
        }
        let b = self.bounds();
        walk(b.lo, b.width(), self.depth, r, &mut out);
        out
    }

    fn root(&self) -> Node {
        let b = self.bounds();
        Node {
            lo: b.lo,
            width: b.width(),
            remaining: self.depth,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["lo", "hi"])?;
        for iv in self.intervals()? {
            w.write_record([iv.lo.to_string(), iv.hi.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn descriptor(&self, alpha: Option<f64>, origin: Option<f64>) -> SetDescriptor {
        SetDescriptor {
            generator: self.family.generator,
            depth: self.depth,
            alpha,
            origin,
        }
    }
}

#[derive(Clone, Copy)]
struct Node {
    lo: f64,
    width: f64,
    remaining: u32,
}

impl Node {
    fn interval(&self) -> Interval {
        Interval {
            lo: self.lo,
            hi: self.lo + self.width,
        }
    }

    fn children(&self, r: f64) -> [Node; 2] {
        let w = self.width * r;
        let remaining = self.remaining - 1;
        [
            Node {
                lo: self.lo,
                width: w,
                remaining,
            },
            Node {
                lo: self.lo + self.width - w,
                width: w,
                remaining,
            },
        ]
    }
}

/// Flag function: whether `probe` meets the union of the cover's intervals.
pub fn flag(cover: &IntervalCover, probe: Interval) -> bool {
    fn hit(node: Node, probe: &Interval, r: f64) -> bool {
        let iv = node.interval();
        if !iv.intersects(probe) {
            return false;
        }
        // the left endpoint of every node belongs to the set
        if node.remaining == 0 || probe.contains_interval(&iv) {
            return true;
        }
        node.children(r).iter().any(|c| hit(*c, probe, r))
    }
    hit(cover.root(), &probe, cover.family.generator.ratio())
}

/// Coarse-grained mass of the cover on `range` with mesh at most `delta`.
pub fn coarse_mass(cover: &IntervalCover, alpha: AlphaOrder, range: Interval, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::param(format!("delta must be positive, got {delta}")));
    }
    let weight = mass_weight(alpha.value());
    Ok(weight * aligned_sum(cover, alpha.value(), range, delta))
}

/// `Σ cell^α` over the aligned subdivision (without the `Γ(α+1)` weight).
fn aligned_sum(cover: &IntervalCover, alpha: f64, range: Interval, delta: f64) -> f64 {
    let r = cover.family.generator.ratio();
    let cells = |w: f64| -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        // a cell of width <= delta per piece; tiny slack absorbs rounding
        let m = (w / delta * (1.0 - 1e-12)).ceil().max(1.0);
        m * (w / m).powf(alpha)
    };
    fn walk(node: Node, range: &Interval, r: f64, cells: &dyn Fn(f64) -> f64) -> f64 {
        let iv = node.interval();
        if iv.overlap(range) <= 0.0 {
            return 0.0;
        }
        if node.remaining == 0 {
            return cells(iv.overlap(range));
        }
        if range.contains_interval(&iv) {
            let k = node.remaining as i32;
            return 2f64.powi(k) * cells(node.width * r.powi(k));
        }
        node.children(r).iter().map(|c| walk(*c, range, r, cells)).sum()
    }
    walk(cover.root(), &range, r, &cells)
}

#[derive(Clone, Copy, Debug)]
pub struct MassConfig {
    pub depth_cap: u32,
    pub exec: Exec,
}

impl Default for MassConfig {
    fn default() -> Self {
        MassConfig {
            depth_cap: 64,
            exec: Exec::default(),
        }
    }
}

/// Mass-function estimate: coarse masses at the native resolution of depths
/// `0..=cap`, scanned with the Cauchy and divergence rules.
pub fn mass_function(family: &CoverFamily, alpha: AlphaOrder, range: Interval, tol: f64) -> Result<MassEstimate> {
    mass_function_with(family, alpha, range, tol, &MassConfig::default())
}

pub fn mass_function_with(
    family: &CoverFamily,
    alpha: AlphaOrder,
    range: Interval,
    tol: f64,
    config: &MassConfig,
) -> Result<MassEstimate> {
    if !(tol > 0.0) {
        return Err(Error::param("tolerance must be positive"));
    }
    let depths = config.depth_cap as usize + 1;
    let swept: Vec<(f64, f64)> = config.exec.map_range(depths, |n| {
        let cover = family.at_depth(n as u32);
        let delta = cover.leaf_width();
        (coarse_mass(&cover, alpha, range, delta).unwrap_or(f64::NAN), delta)
    });
    let (values, deltas): (Vec<f64>, Vec<f64>) = swept.into_iter().unzip();
    Ok(refinement::analyze(alpha.value(), &values, &deltas, tol))
}

#[derive(Clone, Copy, Debug)]
pub struct DimensionConfig {
    pub depth_cap: u32,
    pub exec: Exec,
}

impl Default for DimensionConfig {
    fn default() -> Self {
        DimensionConfig {
            depth_cap: 20,
            exec: Exec::default(),
        }
    }
}

/// γ-dimension by bisection on `α ∈ (0, 1]`.
pub fn gamma_dimension(family: &CoverFamily, range: Interval, tol: f64) -> Result<f64> {
    gamma_dimension_with(family, range, tol, &DimensionConfig::default())
}

pub fn gamma_dimension_with(family: &CoverFamily, range: Interval, tol: f64, config: &DimensionConfig) -> Result<f64> {
    let mass_cfg = MassConfig {
        depth_cap: config.depth_cap,
        exec: config.exec,
    };
    let classify = |a: f64| -> Result<MassRegime> {
        let est = mass_function_with(family, AlphaOrder::for_set(a)?, range, tol * 1e-3, &mass_cfg)?;
        Ok(est.regime())
    };
    refinement::bisect_dimension(0.0, 1.0, tol, classify)
}

/// Integral staircase of the cover, sampled at every interval endpoint, every
/// gap midpoint, the origin, and `samples` uniform points across the bounds.
pub fn build_staircase(
    cover: &IntervalCover,
    alpha: AlphaOrder,
    origin: f64,
    samples: usize,
) -> Result<StaircaseTable> {
    build_staircase_with(cover, alpha, origin, samples, Exec::default())
}

pub fn build_staircase_with(
    cover: &IntervalCover,
    alpha: AlphaOrder,
    origin: f64,
    samples: usize,
    exec: Exec,
) -> Result<StaircaseTable> {
    if samples < 2 {
        return Err(Error::param("a staircase needs at least 2 samples"));
    }
    let bounds = cover.bounds();
    if !bounds.contains(origin) {
        return Err(Error::OutOfRange {
            what: "staircase origin",
            value: origin,
            lo: bounds.lo,
            hi: bounds.hi,
        });
    }
    if cover.depth > MAX_MATERIALIZED_DEPTH {
        return Err(Error::param(format!(
            "depth {} exceeds the materialization limit {MAX_MATERIALIZED_DEPTH}",
            cover.depth
        )));
    }
    let leaves = cover.leaves();
    let mut xs = Vec::with_capacity(3 * leaves.len() + samples + 1);
    for (i, iv) in leaves.iter().enumerate() {
        xs.push(iv.lo);
        xs.push(iv.hi);
        if let Some(next) = leaves.get(i + 1) {
            if next.lo > iv.hi {
                xs.push(0.5 * (iv.hi + next.lo));
            }
        }
    }
    let n = samples - 1;
    xs.extend((0..=n).map(|i| bounds.lo + bounds.width() * i as f64 / n as f64));
    xs.push(origin);
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let delta = cover.leaf_width();
    let a = alpha.value();
    let weight = mass_weight(a);
    let mut values = exec.map(&xs, |&x| {
        if x >= origin {
            weight * aligned_sum(cover, a, Interval { lo: origin, hi: x }, delta)
        } else {
            -weight * aligned_sum(cover, a, Interval { lo: x, hi: origin }, delta)
        }
    });
    // absorb last-ulp reordering between independently summed neighbours
    for i in 1..values.len() {
        if values[i] < values[i - 1] {
            values[i] = values[i - 1];
        }
    }
    StaircaseTable::new(xs, values, origin, a)
}

/// Default order of a family: its estimated γ-dimension.
pub fn default_alpha(family: &CoverFamily) -> Result<AlphaOrder> {
    AlphaOrder::for_set(gamma_dimension(family, family.bounds, 1e-6)?)
}
