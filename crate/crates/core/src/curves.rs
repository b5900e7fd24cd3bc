//! Self-similar polyline curves and their mass (rise) functions.
//!
//! Mass on a parameter segment is the sum of `|Δw|^α / Γ(α+1)` over the
//! polyline's chords. A chord cut by the segment contributes in proportion to
//! the parameter length it keeps, so the rise `J(u)` is piecewise linear and
//! exactly additive over adjacent segments.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaOrder;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gamma::mass_weight;
use crate::interval::Interval;
use crate::refinement::{self, MassRegime};
use crate::staircase::StaircaseTable;

/// Generator motif: a planar polyline from `(0,0)` to `(1,0)` whose segments
/// each get replaced by a scaled copy of the motif at every depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveVariant {
    /// Straight segment, split in two per depth.
    Line,
    /// Standard Koch motif, four segments of ratio 1/3.
    Koch,
    /// Five segments of ratio 1/3 (square bump).
    QuadraticKoch,
    Motif {
        points: Vec<[f64; 2]>,
    },
}

impl CurveVariant {
    pub fn motif(&self) -> Vec<[f64; 2]> {
        let h = 3f64.sqrt() / 6.0;
        let t = 1.0 / 3.0;
        match self {
            CurveVariant::Line => vec![[0.0, 0.0], [0.5, 0.0], [1.0, 0.0]],
            CurveVariant::Koch => vec![[0.0, 0.0], [t, 0.0], [0.5, h], [2.0 * t, 0.0], [1.0, 0.0]],
            CurveVariant::QuadraticKoch => {
                vec![[0.0, 0.0], [t, 0.0], [t, t], [2.0 * t, t], [2.0 * t, 0.0], [1.0, 0.0]]
            }
            CurveVariant::Motif { points } => points.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        let m = self.motif();
        let ends_ok = m.len() >= 3
            && m.first() == Some(&[0.0, 0.0])
            && m.last().map(|p| (p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12) == Some(true);
        if !ends_ok {
            return Err(Error::param(
                "a curve motif needs at least two segments and must run from (0,0) to (1,0)",
            ));
        }
        let contracting = m.windows(2).all(|w| {
            let d = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
            d > 0.0 && d < 1.0
        });
        if !contracting {
            return Err(Error::param("every motif segment must have length in (0, 1)"));
        }
        Ok(())
    }

    /// Similarity dimension: the root of `Σ r_i^α = 1` over the motif's segment ratios.
    pub fn similarity_dimension(&self) -> f64 {
        let ratios = segment_lengths(&self.motif());
        let f = |a: f64| ratios.iter().map(|r| r.powf(a)).sum::<f64>() - 1.0;
        let (mut lo, mut hi) = (0.0, 64.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn segment_lengths(points: &[[f64; 2]]) -> Vec<f64> {
    points
        .windows(2)
        .map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt())
        .collect()
}

/// Parameter segment selecting `C(t_lo, t_hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSegment {
    pub t_lo: f64,
    pub t_hi: f64,
}

impl CurveSegment {
    pub fn new(t_lo: f64, t_hi: f64) -> Result<Self> {
        if !(t_lo < t_hi) {
            return Err(Error::param(format!("curve segment [{t_lo}, {t_hi}] is empty")));
        }
        Ok(CurveSegment { t_lo, t_hi })
    }
}

impl From<CurveSegment> for Interval {
    fn from(seg: CurveSegment) -> Self {
        Interval {
            lo: seg.t_lo,
            hi: seg.t_hi,
        }
    }
}

/// Polyline approximation with per-vertex parameter, position, and rise.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveApprox {
    params: Vec<f64>,
    coords: Vec<f64>,
    dim: usize,
    depth: u32,
    variant: Option<CurveVariant>,
    alpha: Option<AlphaOrder>,
    rise: Option<Vec<f64>>,
    origin_param: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDescriptor {
    pub variant: Option<CurveVariant>,
    pub depth: u32,
    pub alpha: Option<f64>,
    pub origin_param: f64,
}

/// Depth-`n` polyline of a self-similar curve, parametrized uniformly on `[0, 1]`.
pub fn build_koch(depth: u32, variant: &CurveVariant) -> Result<CurveApprox> {
    variant.validate()?;
    let motif = variant.motif();
    let mut pts: Vec<[f64; 2]> = vec![[0.0, 0.0], [1.0, 0.0]];
    for _ in 0..depth {
        let mut next = Vec::with_capacity((pts.len() - 1) * (motif.len() - 1) + 1);
        next.push(pts[0]);
        for w in pts.windows(2) {
            let (p, q) = (w[0], w[1]);
            let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
            for m in &motif[1..] {
                next.push([p[0] + dx * m[0] - dy * m[1], p[1] + dy * m[0] + dx * m[1]]);
            }
        }
        pts = next;
    }
    let n = pts.len() - 1;
    let params = (0..=n).map(|i| i as f64 / n as f64).collect();
    Ok(CurveApprox {
        params,
        coords: pts.iter().flat_map(|p| p.iter().copied()).collect(),
        dim: 2,
        depth,
        variant: Some(variant.clone()),
        alpha: None,
        rise: None,
        origin_param: 0.0,
    })
}

impl CurveApprox {
    /// User polyline in `R^n`: strictly increasing parameters, distinct vertices.
    pub fn from_polyline(params: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if params.len() < 2 || params.len() != points.len() {
            return Err(Error::param(
                "a polyline needs at least two vertices, one parameter each",
            ));
        }
        if params.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::param("curve parameters must be strictly increasing"));
        }
        let dim = points[0].len();
        if dim == 0
            || points
                .iter()
                .any(|p| p.len() != dim || p.iter().any(|c| !c.is_finite()))
        {
            return Err(Error::param("vertices must share one finite dimension"));
        }
        let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
        sorted.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("parametrization must be injective on vertices"));
        }
        let origin_param = params[0];
        Ok(CurveApprox {
            params,
            coords: points.into_iter().flatten().collect(),
            dim,
            depth: 0,
            variant: None,
            alpha: None,
            rise: None,
            origin_param,
        })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn param_range(&self) -> Interval {
        Interval {
            lo: self.params[0],
            hi: *self.params.last().unwrap(),
        }
    }

    pub fn alpha(&self) -> Option<AlphaOrder> {
        self.alpha
    }

    pub fn rise(&self) -> Option<&[f64]> {
        self.rise.as_deref()
    }

    pub fn origin_param(&self) -> f64 {
        self.origin_param
    }

    /// Euclidean distance of vertex `i` from the origin of `R^n`.
    pub fn distance_from_origin(&self, i: usize) -> f64 {
        self.point(i).iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Chord lengths `|w(u_{i+1}) - w(u_i)|`.
    pub fn chord_lengths(&self) -> Vec<f64> {
        (0..self.len() - 1)
            .map(|i| {
                self.point(i)
                    .iter()
                    .zip(self.point(i + 1))
                    .map(|(a, b)| (b - a) * (b - a))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    pub fn total_length(&self) -> f64 {
        self.chord_lengths().iter().sum()
    }

    fn check_alpha(&self, alpha: AlphaOrder) -> Result<()> {
        AlphaOrder::for_curve(alpha.value(), self.dim).map(|_| ())
    }

    /// Cumulative chord mass at every vertex, starting from zero.
    fn cumulative_mass(&self, alpha: f64, exec: Exec) -> Vec<f64> {
        let weight = mass_weight(alpha);
        let chords = self.chord_lengths();
        let per_chord = exec.map(&chords, |l| l.powf(alpha) / weight);
        let mut acc = Vec::with_capacity(per_chord.len() + 1);
        let mut total = 0.0;
        acc.push(0.0);
        for m in per_chord {
            total += m;
            acc.push(total);
        }
        acc
    }

    /// Cumulative mass at parameter `u`, linear inside a chord.
    fn cumulative_at(&self, cumulative: &[f64], u: f64) -> f64 {
        let i = self.params.partition_point(|&p| p <= u);
        if i == 0 {
            return cumulative[0];
        }
        if i == self.params.len() {
            return *cumulative.last().unwrap();
        }
        let (u0, u1) = (self.params[i - 1], self.params[i]);
        let (c0, c1) = (cumulative[i - 1], cumulative[i]);
        c0 + (c1 - c0) * (u - u0) / (u1 - u0)
    }

    /// Rise table `u ↦ J(u)` for use as a staircase; requires [`build_rise`].
    pub fn rise_table(&self) -> Result<StaircaseTable> {
        let rise = self
            .rise
            .as_ref()
            .ok_or_else(|| Error::param("curve has no rise function; call build_rise first"))?;
        let alpha = self.alpha.map(f64::from).unwrap_or(1.0);
        StaircaseTable::new(self.params.clone(), rise.clone(), self.origin_param, alpha)
    }

    /// `u,x1..xn,J` rows; the rise must be computed.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let rise = self
            .rise
            .as_ref()
            .ok_or_else(|| Error::param("curve has no rise function; call build_rise first"))?;
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["u".to_string()];
        header.extend((1..=self.dim).map(|k| format!("x{k}")));
        header.push("J".into());
        w.write_record(&header)?;
        for (i, j) in rise.iter().enumerate() {
            let mut row = vec![self.params[i].to_string()];
            row.extend(self.point(i).iter().map(|c| c.to_string()));
            row.push(j.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn descriptor(&self) -> CurveDescriptor {
        CurveDescriptor {
            variant: self.variant.clone(),
            depth: self.depth,
            alpha: self.alpha.map(f64::from),
            origin_param: self.origin_param,
        }
    }
}

/// Mass of the curve between two parameters at the polyline's resolution.
pub fn curve_mass(curve: &CurveApprox, alpha: AlphaOrder, segment: CurveSegment) -> Result<f64> {
    curve.check_alpha(alpha)?;
    if segment.t_hi <= segment.t_lo {
        return Ok(0.0);
    }
    let range = curve.param_range();
    if !(range.contains(segment.t_lo) && range.contains(segment.t_hi)) {
        return Err(Error::OutOfRange {
            what: "curve segment",
            value: if range.contains(segment.t_lo) {
                segment.t_hi
            } else {
                segment.t_lo
            },
            lo: range.lo,
            hi: range.hi,
        });
    }
    let cum = curve.cumulative_mass(alpha.value(), Exec::Sequential);
    Ok(curve.cumulative_at(&cum, segment.t_hi) - curve.cumulative_at(&cum, segment.t_lo))
}

/// Fills the rise `J(u_i)`, signed relative to `origin_param`.
pub fn build_rise(curve: &CurveApprox, alpha: AlphaOrder, origin_param: f64) -> Result<CurveApprox> {
    build_rise_with(curve, alpha, origin_param, Exec::default())
}

pub fn build_rise_with(curve: &CurveApprox, alpha: AlphaOrder, origin_param: f64, exec: Exec) -> Result<CurveApprox> {
    curve.check_alpha(alpha)?;
    let range = curve.param_range();
    if !range.contains(origin_param) {
        return Err(Error::OutOfRange {
            what: "origin parameter",
            value: origin_param,
            lo: range.lo,
            hi: range.hi,
        });
    }
    let cum = curve.cumulative_mass(alpha.value(), exec);
    let base = curve.cumulative_at(&cum, origin_param);
    let mut out = curve.clone();
    out.rise = Some(cum.iter().map(|c| c - base).collect());
    out.alpha = Some(alpha);
    out.origin_param = origin_param;
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct CurveDimensionConfig {
    /// Deepest polyline built; vertex count grows as segments^depth.
    pub depth_cap: u32,
    pub exec: Exec,
}

impl Default for CurveDimensionConfig {
    fn default() -> Self {
        CurveDimensionConfig {
            depth_cap: 7,
            exec: Exec::default(),
        }
    }
}

/// γ-dimension of a self-similar curve by bisection on `α ∈ [1, 2]`.
pub fn curve_gamma_dimension(variant: &CurveVariant, tol: f64) -> Result<f64> {
    curve_gamma_dimension_with(variant, tol, &CurveDimensionConfig::default())
}

pub fn curve_gamma_dimension_with(variant: &CurveVariant, tol: f64, config: &CurveDimensionConfig) -> Result<f64> {
    if config.depth_cap < refinement::WINDOW as u32 {
        return Err(Error::param("curve dimension needs at least three refinement depths"));
    }
    let chords: Vec<Vec<f64>> = (0..=config.depth_cap)
        .map(|d| build_koch(d, variant).map(|c| c.chord_lengths()))
        .collect::<Result<_>>()?;
    let classify = |a: f64| -> Result<MassRegime> {
        let weight = mass_weight(a);
        let values: Vec<f64> = chords
            .iter()
            .map(|ls| config.exec.sum_by(ls, |l| l.powf(a)) / weight)
            .collect();
        let deltas: Vec<f64> = chords.iter().map(|ls| ls.iter().copied().fold(0.0, f64::max)).collect();
        Ok(refinement::analyze(a, &values, &deltas, tol * 1e-3).regime())
    };
    refinement::bisect_dimension(1.0, 2.0, tol, classify)
}
