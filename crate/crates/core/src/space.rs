//! Finite metric spaces with explicit distance tables.
//!
//! A space is a nonempty list of labeled points plus a full pairwise
//! distance table. Construction checks shape only; whether the table
//! actually satisfies the metric axioms is the job of [`validate_metric`],
//! which reports every violation with a witness instead of failing fast.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for axiom and convexity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default size limits: points per space, points per product/profile space.
pub const DEFAULT_SPACE_CAP: usize = 5_000;
pub const DEFAULT_PRODUCT_CAP: usize = 100_000;

/// Size limits applied where spaces are built or multiplied.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub space_points: usize,
    pub product_points: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            space_points: DEFAULT_SPACE_CAP,
            product_points: DEFAULT_PRODUCT_CAP,
        }
    }
}

impl Caps {
    /// Reads the `METRICFIX_CAP` override. A single number replaces both caps.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var("METRICFIX_CAP") {
            if let Ok(n) = v.trim().parse::<usize>() {
                caps.space_points = n;
                caps.product_points = n;
            }
        }
        caps
    }
}

/// A nonempty finite metric space: labels plus an n×n distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>, // row-major n*n
}

impl FiniteMetricSpace {
    /// Builds a space from a full table. Rejects structural problems
    /// (empty, non-square, duplicate labels, non-finite entries); axiom
    /// violations are left for `validate_metric` to report.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::input("a space needs at least one point"));
        }
        if table.len() != n {
            return Err(Error::input(format!(
                "distance table has {} rows for {} points",
                table.len(),
                n
            )));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "distance row {} has {} entries for {} points",
                    i,
                    row.len(),
                    n
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::input(format!(
                        "non-finite distance entry in row {}",
                        i
                    )));
                }
                dist.push(v);
            }
        }
        check_unique_labels(&labels)?;
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// Builds a space from an embedding: pairwise euclidean distances.
    pub fn from_coords(labels: Vec<String>, coords: &[Vec<f64>]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::input("a space needs at least one point"));
        }
        if coords.len() != n {
            return Err(Error::input(format!(
                "{} coordinate rows for {} points",
                coords.len(),
                n
            )));
        }
        let dim = coords[0].len();
        for (i, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::input(format!(
                    "coordinate row {} has dimension {} (expected {})",
                    i,
                    c.len(),
                    dim
                )));
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::input(format!("non-finite coordinate in row {}", i)));
            }
        }
        check_unique_labels(&labels)?;
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = euclidean(&coords[i], &coords[j]);
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty spaces
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n).map(|i| self.dist[i * n..(i + 1) * n].to_vec()).collect()
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().cloned().fold(0.0, f64::max)
    }
}

fn check_unique_labels(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::input(format!("duplicate point label {:?}", l)));
        }
    }
    Ok(())
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A nonempty sorted set of point indices into some space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    members: Vec<usize>,
}

impl PointSet {
    /// Sorts, dedups, and checks membership bounds. Empty input is an error.
    pub fn new(members: impl IntoIterator<Item = usize>, space_len: usize) -> Result<Self> {
        let mut m: Vec<usize> = members.into_iter().collect();
        m.sort_unstable();
        m.dedup();
        if m.is_empty() {
            return Err(Error::input("a point set must be nonempty"));
        }
        if let Some(&bad) = m.iter().find(|&&i| i >= space_len) {
            return Err(Error::input(format!(
                "point index {} out of range for a {}-point space",
                bad, space_len
            )));
        }
        Ok(PointSet { members: m })
    }

    pub fn singleton(i: usize, space_len: usize) -> Result<Self> {
        PointSet::new([i], space_len)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

/// Which metric axiom a violation is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    ZeroDiagonal,
    Positivity,
    Symmetry,
    Triangle,
}

/// One failed axiom instance: which axiom, the witness indices, and by how much.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
    pub magnitude: f64,
}

/// Outcome of a full axiom scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub tol: f64,
    pub violations: Vec<Violation>,
}

/// Checks all four metric axioms over the full table.
///
/// Diagonal, positivity, and symmetry are exact; the triangle inequality
/// allows absolute slack `tol`. Witnesses are scanned in index order so the
/// report is deterministic.
pub fn validate_metric(space: &FiniteMetricSpace, tol: f64) -> ValidationReport {
    let n = space.len();
    let mut violations = Vec::new();
    for i in 0..n {
        let d = space.dist(i, i);
        if d != 0.0 {
            violations.push(Violation {
                axiom: Axiom::ZeroDiagonal,
                witness: vec![i],
                magnitude: d.abs(),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && space.dist(i, j) <= 0.0 {
                violations.push(Violation {
                    axiom: Axiom::Positivity,
                    witness: vec![i, j],
                    magnitude: -space.dist(i, j),
                });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = space.dist(i, j) - space.dist(j, i);
            if diff != 0.0 {
                violations.push(Violation {
                    axiom: Axiom::Symmetry,
                    witness: vec![i, j],
                    magnitude: diff.abs(),
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let excess = space.dist(i, k) - (space.dist(i, j) + space.dist(j, k));
                if excess > tol {
                    violations.push(Violation {
                        axiom: Axiom::Triangle,
                        witness: vec![i, j, k],
                        magnitude: excess,
                    });
                }
            }
        }
    }
    ValidationReport {
        passed: violations.is_empty(),
        tol,
        violations,
    }
}

/// Closed-ball neighborhood of a set: every point within `radius` of some member.
pub fn ball(space: &FiniteMetricSpace, around: &PointSet, radius: f64) -> Result<PointSet> {
    if !(radius >= 0.0) {
        return Err(Error::input("ball radius must be nonnegative"));
    }
    let n = space.len();
    let mut out = Vec::new();
    for z in 0..n {
        if around
            .members()
            .iter()
            .any(|&x| space.dist(x, z) <= radius)
        {
            out.push(z);
        }
    }
    // members are within radius 0 of themselves, so out is nonempty
    PointSet::new(out, n)
}

/// Connected components of the graph with an edge wherever distance < r.
/// Classes are sorted internally and ordered by their smallest member.
pub fn components_at_scale(space: &FiniteMetricSpace, r: f64) -> Result<Vec<Vec<usize>>> {
    if !(r > 0.0) {
        return Err(Error::input("scale must be positive"));
    }
    let n = space.len();
    let mut comp = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut queue = std::collections::VecDeque::from([start]);
        comp[start] = id;
        let mut class = vec![start];
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if comp[v] == usize::MAX && u != v && space.dist(u, v) < r {
                    comp[v] = id;
                    class.push(v);
                    queue.push_back(v);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    Ok(classes)
}

/// Whether every pair is joined by a chain with strict gaps < r.
/// The returned partition into scale-r components witnesses the answer
/// either way: one class proves chainability, several exhibit the failure.
pub fn is_r_chainable(space: &FiniteMetricSpace, r: f64) -> Result<(bool, Vec<Vec<usize>>)> {
    let classes = components_at_scale(space, r)?;
    Ok((classes.len() == 1, classes))
}

/// Per-pair result of the midpoint scan behind [`check_metric_convexity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairConvexity {
    pub i: usize,
    pub j: usize,
    pub passed: bool,
    /// Strict-between point with the smallest triangle defect, if any exists.
    pub witness: Option<usize>,
    /// Smallest |d(i,z) + d(z,j) - d(i,j)| over candidate midpoints.
    pub best_gap: f64,
}

/// Diagnostic report: which pairs admit an approximate metric midpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub all_pass: bool,
    pub tol: f64,
    pub pairs: Vec<PairConvexity>,
}

/// For each pair x ≠ y, looks for a third point z with
/// d(x,z) + d(z,y) within `tol` of d(x,y). Finite spaces rarely pass this
/// everywhere; the report is informational, not an error.
pub fn check_metric_convexity(space: &FiniteMetricSpace, tol: f64) -> ConvexityReport {
    let n = space.len();
    let mut pairs = Vec::new();
    let mut all_pass = true;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = space.dist(i, j);
            let mut best: Option<(usize, f64)> = None;
            for z in 0..n {
                if z == i || z == j {
                    continue;
                }
                let gap = (space.dist(i, z) + space.dist(z, j) - d).abs();
                match best {
                    Some((_, g)) if g <= gap => {}
                    _ => best = Some((z, gap)),
                }
            }
            let (witness, best_gap) = match best {
                Some((z, g)) => (Some(z), g),
                None => (None, f64::INFINITY),
            };
            let passed = best_gap <= tol;
            all_pass &= passed;
            pairs.push(PairConvexity {
                i,
                j,
                passed,
                witness,
                best_gap,
            });
        }
    }
    ConvexityReport {
        all_pass,
        tol,
        pairs,
    }
}

/// How per-factor distances combine in a product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combiner {
    Max,
    Sum,
    Euclidean,
}

impl std::str::FromStr for Combiner {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Combiner::Max),
            "sum" => Ok(Combiner::Sum),
            "euclidean" => Ok(Combiner::Euclidean),
            other => Err(Error::input(format!(
                "unknown combiner {:?} (expected max, sum, or euclidean)",
                other
            ))),
        }
    }
}

impl std::fmt::Display for Combiner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Combiner::Max => "max",
            Combiner::Sum => "sum",
            Combiner::Euclidean => "euclidean",
        })
    }
}

impl Combiner {
    pub fn combine(&self, parts: &[f64]) -> f64 {
        match self {
            Combiner::Max => parts.iter().cloned().fold(0.0, f64::max),
            Combiner::Sum => parts.iter().sum(),
            Combiner::Euclidean => parts.iter().map(|d| d * d).sum::<f64>().sqrt(),
        }
    }
}

/// Cartesian product of factor spaces. Point labels are the factor labels
/// joined with commas, enumerated with the last factor varying fastest.
pub fn product_space(
    factors: &[&FiniteMetricSpace],
    combiner: Combiner,
    cap: usize,
) -> Result<FiniteMetricSpace> {
    if factors.is_empty() {
        return Err(Error::input("product of zero spaces"));
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let mut total: usize = 1;
    for &s in &sizes {
        total = total
            .checked_mul(s)
            .ok_or_else(|| Error::resource("product size overflows".to_string()))?;
    }
    if total > cap {
        return Err(Error::resource(format!(
            "product has {} points, cap is {}",
            total, cap
        )));
    }
    let profiles: Vec<Vec<usize>> = (0..total).map(|f| index_to_profile(&sizes, f)).collect();
    let labels: Vec<String> = profiles
        .iter()
        .map(|profile| {
            let parts: Vec<&str> = profile
                .iter()
                .enumerate()
                .map(|(f, &i)| factors[f].label(i))
                .collect();
            parts.join(",")
        })
        .collect();
    let mut dist = vec![0.0; total * total];
    let mut parts = vec![0.0; factors.len()];
    for a in 0..total {
        let pa = &profiles[a];
        for b in 0..total {
            let pb = &profiles[b];
            for f in 0..factors.len() {
                parts[f] = factors[f].dist(pa[f], pb[f]);
            }
            dist[a * total + b] = combiner.combine(&parts);
        }
    }
    check_unique_labels(&labels)?;
    Ok(FiniteMetricSpace { labels, dist })
}

/// Row-major flattening: the last coordinate varies fastest.
pub fn profile_to_index(sizes: &[usize], profile: &[usize]) -> usize {
    let mut flat = 0;
    for (s, p) in sizes.iter().zip(profile) {
        flat = flat * s + p;
    }
    flat
}

pub fn index_to_profile(sizes: &[usize], mut flat: usize) -> Vec<usize> {
    let mut profile = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        profile[k] = flat % sizes[k];
        flat /= sizes[k];
    }
    profile
}
