//! Set-valued self-maps on a finite space: composition, iteration,
//! contraction certificates, and fixed-point search.
//!
//! A map sends every point to a nonempty subset of the same space. All
//! contraction notions compare Hausdorff image distances against point
//! distances under a caller-chosen metric view, so the same machinery runs
//! on the base metric or on chain/path metrics. Certificates require the
//! worst ratio to clear 1 by more than 1e-12; ratios within 1e-12 of 1 are
//! flagged as boundary rather than silently passed or failed.

use serde::{Deserialize, Serialize};

use crate::derived::DiscretePath;
use crate::error::{Error, Result};
use crate::hausdorff::{hausdorff_distance, set_distance, MetricView};
use crate::space::PointSet;

/// Strictness band around ratio 1 for certificate verdicts.
pub const STRICTNESS_TOL: f64 = 1e-12;

/// A set-valued self-map: point index -> nonempty image set.
#[derive(Debug, Clone, PartialEq)]
pub struct SetValuedMap {
    n: usize,
    images: Vec<PointSet>,
}

impl SetValuedMap {
    pub fn new(n: usize, images: Vec<PointSet>) -> Result<Self> {
        if images.len() != n {
            return Err(Error::input(format!(
                "{} image sets for {} points",
                images.len(),
                n
            )));
        }
        for (x, img) in images.iter().enumerate() {
            if let Some(&bad) = img.members().iter().find(|&&y| y >= n) {
                return Err(Error::input(format!(
                    "image of point {} contains out-of-range index {}",
                    x, bad
                )));
            }
        }
        Ok(SetValuedMap { n, images })
    }

    /// Singleton-valued map from a plain function table.
    pub fn from_function(targets: &[usize]) -> Result<Self> {
        let n = targets.len();
        let images = targets
            .iter()
            .map(|&t| PointSet::new([t], n))
            .collect::<Result<Vec<_>>>()?;
        SetValuedMap::new(n, images)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn image(&self, x: usize) -> &PointSet {
        &self.images[x]
    }

    pub fn is_singleton_valued(&self) -> bool {
        self.images.iter().all(|s| s.len() == 1)
    }
}

/// Applies `first`, then `then`: the image of x is the union of `then` over
/// first(x).
pub fn compose(first: &SetValuedMap, then: &SetValuedMap) -> Result<SetValuedMap> {
    if first.len() != then.len() {
        return Err(Error::input(
            "composed maps must share their space".to_string(),
        ));
    }
    let n = first.len();
    let images = (0..n)
        .map(|x| {
            let mut union: Vec<usize> = first
                .image(x)
                .members()
                .iter()
                .flat_map(|&y| then.image(y).members().iter().cloned())
                .collect();
            union.sort_unstable();
            union.dedup();
            PointSet::new(union, n)
        })
        .collect::<Result<Vec<_>>>()?;
    SetValuedMap::new(n, images)
}

/// n-fold self-composition, n >= 1.
pub fn iterate(f: &SetValuedMap, n: usize) -> Result<SetValuedMap> {
    if n == 0 {
        return Err(Error::input("iterate count must be at least 1"));
    }
    let mut acc = f.clone();
    for _ in 1..n {
        acc = compose(&acc, f)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Global,
    UniformLocal,
    Pointwise,
    Shrinking,
}

/// How a point's competitors are chosen for the pointwise certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborhoodSpec {
    Knn(usize),
    Radius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstPair {
    pub x: usize,
    pub y: usize,
    pub ratio: f64,
}

/// Outcome of a contraction scan. `modulus` is the largest image-to-point
/// distance ratio seen; `holds` means it clears 1 by more than the
/// strictness band, `boundary` that it landed inside the band. Pairs whose
/// ratio cannot be evaluated under the chosen view are listed, not folded
/// into the modulus; points with no competitors at all land in `isolated`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub kind: CertificateKind,
    pub modulus: f64,
    pub per_point: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub neighborhood: Option<NeighborhoodSpec>,
    pub worst_pair: Option<WorstPair>,
    pub holds: bool,
    pub boundary: bool,
    pub unevaluable: Vec<(usize, usize)>,
    pub isolated: Vec<usize>,
}

fn verdict(modulus: f64) -> (bool, bool) {
    let holds = modulus < 1.0 - STRICTNESS_TOL;
    let boundary = (modulus - 1.0).abs() <= STRICTNESS_TOL;
    (holds, boundary)
}

/// Ratio of image Hausdorff distance to point distance, if both exist and
/// the denominator is positive.
fn pair_ratio(f: &SetValuedMap, m: &MetricView, x: usize, y: usize) -> Option<f64> {
    let d = m.lookup(x, y)?;
    if !(d > 0.0) {
        return None;
    }
    let h = hausdorff_distance(f.image(x), f.image(y), m)?;
    Some(h / d)
}

/// Exhaustive pair scan: the uniform Lipschitz modulus of the map under `m`.
pub fn global_modulus(f: &SetValuedMap, m: &MetricView) -> ContractionCertificate {
    let n = f.len();
    let mut modulus = 0.0f64;
    let mut worst: Option<WorstPair> = None;
    let mut unevaluable = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            match pair_ratio(f, m, x, y) {
                Some(ratio) => {
                    if worst.is_none() || ratio > modulus {
                        modulus = ratio;
                        worst = Some(WorstPair { x, y, ratio });
                    }
                }
                None => unevaluable.push((x, y)),
            }
        }
    }
    let (holds, boundary) = verdict(modulus);
    ContractionCertificate {
        kind: CertificateKind::Global,
        modulus,
        per_point: None,
        radius: None,
        neighborhood: None,
        worst_pair: worst,
        holds,
        boundary,
        unevaluable,
        isolated: Vec::new(),
    }
}

/// Per-point moduli over a chosen neighborhood of each point. Points whose
/// neighborhood turns out empty get modulus 0 and are flagged isolated; the
/// certificate holds when the largest per-point modulus clears 1, which is
/// also the uniform modulus across points.
pub fn pointwise_certificate(
    f: &SetValuedMap,
    m: &MetricView,
    nbhd: NeighborhoodSpec,
) -> Result<ContractionCertificate> {
    match nbhd {
        NeighborhoodSpec::Knn(k) if k == 0 => {
            return Err(Error::input("knn neighborhood needs k >= 1"))
        }
        NeighborhoodSpec::Radius(r) if !(r >= 0.0) => {
            return Err(Error::input("radius neighborhood must be nonnegative"))
        }
        _ => {}
    }
    let n = f.len();
    let mut per_point = vec![0.0f64; n];
    let mut worst: Option<WorstPair> = None;
    let mut modulus = 0.0f64;
    let mut unevaluable = Vec::new();
    let mut isolated = Vec::new();
    for x in 0..n {
        let neighbors: Vec<usize> = match nbhd {
            NeighborhoodSpec::Knn(k) => {
                let mut cands: Vec<(f64, usize)> = (0..n)
                    .filter(|&y| y != x)
                    .filter_map(|y| m.lookup(x, y).map(|d| (d, y)))
                    .collect();
                cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
                cands.into_iter().take(k).map(|(_, y)| y).collect()
            }
            NeighborhoodSpec::Radius(r) => (0..n)
                .filter(|&y| y != x)
                .filter(|&y| m.lookup(x, y).is_some_and(|d| d > 0.0 && d <= r))
                .collect(),
        };
        if neighbors.is_empty() {
            isolated.push(x);
            continue;
        }
        let mut beta = 0.0f64;
        let mut saw = false;
        for y in neighbors {
            match pair_ratio(f, m, x, y) {
                Some(ratio) => {
                    if !saw || ratio > beta {
                        beta = ratio;
                        saw = true;
                    }
                    if worst.is_none() || ratio > modulus {
                        modulus = ratio;
                        worst = Some(WorstPair { x, y, ratio });
                    }
                }
                None => unevaluable.push((x.min(y), x.max(y))),
            }
        }
        per_point[x] = beta;
    }
    unevaluable.sort_unstable();
    unevaluable.dedup();
    let (holds, boundary) = verdict(modulus);
    Ok(ContractionCertificate {
        kind: CertificateKind::Pointwise,
        modulus,
        per_point: Some(per_point),
        radius: match nbhd {
            NeighborhoodSpec::Radius(r) => Some(r),
            NeighborhoodSpec::Knn(_) => None,
        },
        neighborhood: Some(nbhd),
        worst_pair: worst,
        holds,
        boundary,
        unevaluable,
        isolated,
    })
}

/// Contraction over every pair inside each closed r-ball, uniformized by
/// taking the worst per-center modulus.
pub fn local_certificate(
    f: &SetValuedMap,
    m: &MetricView,
    r: f64,
) -> Result<ContractionCertificate> {
    if !(r > 0.0) {
        return Err(Error::input("local radius must be positive"));
    }
    let n = f.len();
    let mut per_point = vec![0.0f64; n];
    let mut worst: Option<WorstPair> = None;
    let mut modulus = 0.0f64;
    let mut unevaluable = Vec::new();
    for c in 0..n {
        let ball: Vec<usize> = (0..n)
            .filter(|&z| m.lookup(c, z).is_some_and(|d| d <= r))
            .collect();
        let mut beta = 0.0f64;
        for (ai, &u) in ball.iter().enumerate() {
            for &v in &ball[ai + 1..] {
                match pair_ratio(f, m, u, v) {
                    Some(ratio) => {
                        if ratio > beta {
                            beta = ratio;
                        }
                        if worst.is_none() || ratio > modulus {
                            modulus = ratio;
                            worst = Some(WorstPair { x: u, y: v, ratio });
                        }
                    }
                    None => unevaluable.push((u.min(v), u.max(v))),
                }
            }
        }
        per_point[c] = beta;
    }
    unevaluable.sort_unstable();
    unevaluable.dedup();
    let (holds, boundary) = verdict(modulus);
    Ok(ContractionCertificate {
        kind: CertificateKind::UniformLocal,
        modulus,
        per_point: Some(per_point),
        radius: Some(r),
        neighborhood: None,
        worst_pair: worst,
        holds,
        boundary,
        unevaluable,
        isolated: Vec::new(),
    })
}

/// Strict shrinking: every evaluable pair must have its image distance
/// strictly below the point distance.
pub fn is_shrinking(f: &SetValuedMap, m: &MetricView) -> ContractionCertificate {
    let mut cert = global_modulus(f, m);
    cert.kind = CertificateKind::Shrinking;
    cert
}

/// Finite analogue of the image slope at x: the worst ratio against
/// competitors within distance h, and 0 where no competitor exists.
pub fn discrete_slope(f: &SetValuedMap, m: &MetricView, h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::input("slope window must be positive"));
    }
    let n = f.len();
    let mut slopes = vec![0.0f64; n];
    for x in 0..n {
        for y in 0..n {
            if y == x {
                continue;
            }
            if let Some(d) = m.lookup(x, y) {
                if d > 0.0 && d <= h {
                    if let Some(ratio) = pair_ratio(f, m, x, y) {
                        if ratio > slopes[x] {
                            slopes[x] = ratio;
                        }
                    }
                }
            }
        }
    }
    Ok(slopes)
}

/// Length of the image path: Hausdorff distances between the images of
/// consecutive waypoints, summed left to right. None if any segment is
/// unreachable under the view.
pub fn image_path_length(f: &SetValuedMap, p: &DiscretePath, m: &MetricView) -> Option<f64> {
    let mut total = 0.0f64;
    for w in p.waypoints().windows(2) {
        total += hausdorff_distance(f.image(w[0]), f.image(w[1]), m)?;
    }
    Some(total)
}

/// Every x with x in F(x), by direct membership scan. Possibly empty.
pub fn fixed_points_exhaustive(f: &SetValuedMap) -> Vec<usize> {
    (0..f.len()).filter(|&x| f.image(x).contains(x)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolveOutcome {
    FixedPoint { at: usize },
    CycleDetected { revisited: usize },
    MaxIterReached,
}

/// Trace of a fixed-point run: the iterates, the gap d(x_n, F(x_n)) at each
/// iterate, and why the run stopped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub iterates: Vec<usize>,
    pub gaps: Vec<Option<f64>>,
    pub outcome: SolveOutcome,
}

impl SolveTrace {
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

/// Greedy minimizing run: from each iterate step to the nearest member of
/// its image under `m` (lowest index on ties), stopping at exact membership,
/// a state revisit, or the step budget.
pub fn solve_fixed_point(
    f: &SetValuedMap,
    m: &MetricView,
    x0: usize,
    max_iter: usize,
) -> Result<SolveTrace> {
    if max_iter == 0 {
        return Err(Error::input("max_iter must be at least 1"));
    }
    if x0 >= f.len() {
        return Err(Error::input("start point out of range"));
    }
    let mut iterates = vec![x0];
    let mut gaps = vec![set_distance(x0, f.image(x0), m)];
    let mut seen = vec![false; f.len()];
    seen[x0] = true;
    loop {
        let x = *iterates.last().unwrap();
        if f.image(x).contains(x) {
            return Ok(SolveTrace {
                iterates,
                gaps,
                outcome: SolveOutcome::FixedPoint { at: x },
            });
        }
        if iterates.len() > max_iter {
            return Ok(SolveTrace {
                iterates,
                gaps,
                outcome: SolveOutcome::MaxIterReached,
            });
        }
        // nearest reachable image member; fall back to the lowest index when
        // the whole image sits in another component
        let next = f
            .image(x)
            .members()
            .iter()
            .filter_map(|&y| m.lookup(x, y).map(|d| (d, y)))
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .map(|(_, y)| y)
            .unwrap_or_else(|| f.image(x).members()[0]);
        iterates.push(next);
        gaps.push(set_distance(next, f.image(next), m));
        if seen[next] {
            return Ok(SolveTrace {
                iterates,
                gaps,
                outcome: SolveOutcome::CycleDetected { revisited: next },
            });
        }
        seen[next] = true;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub point: usize,
    pub period: usize,
}

/// Smallest period l <= max_period with a fixed point of the l-th iterate;
/// the lowest-index such point is reported.
pub fn periodic_point_search(f: &SetValuedMap, max_period: usize) -> Result<Option<PeriodicPoint>> {
    if max_period == 0 {
        return Err(Error::input("max_period must be at least 1"));
    }
    let mut acc = f.clone();
    for period in 1..=max_period {
        if period > 1 {
            acc = compose(&acc, f)?;
        }
        let fps = fixed_points_exhaustive(&acc);
        if let Some(&point) = fps.first() {
            return Ok(Some(PeriodicPoint { point, period }));
        }
    }
    Ok(None)
}
