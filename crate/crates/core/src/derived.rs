//! Metrics derived from a base space by restricting moves to a scale.
//!
//! Both derived kinds live on the same threshold graph: connect two points
//! whenever their base distance is strictly below the scale, weight the edge
//! by that distance, and take shortest-path distances. Segment sums are
//! accumulated with error-free partials and rounded once, so a path and its
//! reverse get the same float length; each table entry is the smaller of the
//! two orientations, never below the base distance, and equal to the base
//! distance whenever that is below the scale. The tables are therefore
//! exactly symmetric, and chain and path construction share one core so
//! their tables agree bitwise. Pairs in different components are explicitly
//! unreachable, never a sentinel value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivedKind {
    Chain,
    Path,
}

/// A distance table derived from some base space at a fixed scale.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedMetric {
    kind: DerivedKind,
    scale: f64,
    n: usize,
    dist: Vec<Option<f64>>, // row-major; None = unreachable
}

impl DerivedMetric {
    pub fn kind(&self) -> DerivedKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn lookup(&self, i: usize, j: usize) -> Option<f64> {
        self.dist[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Option<f64>>> {
        (0..self.n)
            .map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

fn threshold_edges(space: &FiniteMetricSpace, scale: f64) -> Vec<Vec<(usize, f64)>> {
    let n = space.len();
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for v in 0..n {
            if u != v {
                let d = space.dist(u, v);
                if d < scale {
                    adj[u].push((v, d));
                }
            }
        }
    }
    adj
}

/// Running error-free sum kept as Shewchuk partials. `value()` is the
/// correctly rounded sum of everything added so far, so it does not depend
/// on the order the terms arrived in.
#[derive(Clone, Debug, Default)]
pub(crate) struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub(crate) fn add(&mut self, mut x: f64) {
        let mut keep = 0;
        for idx in 0..self.partials.len() {
            let mut y = self.partials[idx];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[keep] = lo;
                keep += 1;
            }
            x = hi;
        }
        self.partials.truncate(keep);
        self.partials.push(x);
    }

    pub(crate) fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // carry a half-ulp residue into the rounding when the remaining
        // partials push it past the halfway point
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

pub(crate) fn exact_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = ExactSum::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Distances are nonnegative finite floats, so their bit patterns order the
/// same way the numbers do; the heap key is (bits, node) for deterministic
/// tie handling. Returns the settled labels and the predecessor of each
/// reached node on its recovered shortest path.
fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> (Vec<f64>, Vec<usize>) {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let n = adj.len();
    let mut ds = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    ds[src] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, src)));
    while let Some(Reverse((key, u))) = heap.pop() {
        let du = f64::from_bits(key);
        if du > ds[u] {
            continue; // stale entry
        }
        for &(v, w) in &adj[u] {
            let cand = du + w;
            if cand < ds[v] {
                ds[v] = cand;
                pred[v] = u;
                heap.push(Reverse((cand.to_bits(), v)));
            }
        }
    }
    (ds, pred)
}

/// Waypoints of the recovered shortest path from the Dijkstra source to `t`,
/// in travel order.
fn recovered_path(pred: &[usize], src: usize, t: usize) -> Vec<usize> {
    let mut path = vec![t];
    let mut cur = t;
    while cur != src {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

fn segments_value(space: &FiniteMetricSpace, path: &[usize]) -> f64 {
    exact_sum(path.windows(2).map(|w| space.dist(w[0], w[1])))
}

fn derived_table(space: &FiniteMetricSpace, scale: f64, kind: DerivedKind) -> DerivedMetric {
    let n = space.len();
    let adj = threshold_edges(space, scale);
    let mut oriented = vec![None; n * n];
    for src in 0..n {
        let (ds, pred) = dijkstra(&adj, src);
        for t in 0..n {
            if ds[t].is_finite() {
                let path = recovered_path(&pred, src, t);
                oriented[src * n + t] = Some(segments_value(space, &path));
            }
        }
    }
    let mut dist = vec![None; n * n];
    for i in 0..n {
        dist[i * n + i] = Some(0.0);
        for j in (i + 1)..n {
            let entry = match (oriented[i * n + j], oriented[j * n + i]) {
                (Some(a), Some(b)) => {
                    let base = space.dist(i, j);
                    if base < scale {
                        Some(base)
                    } else {
                        Some(a.min(b).max(base))
                    }
                }
                (None, None) => None,
                // reachability is symmetric on an undirected graph; stay
                // total anyway
                (sa, sb) => sa.or(sb),
            };
            dist[i * n + j] = entry;
            dist[j * n + i] = entry;
        }
    }
    DerivedMetric {
        kind,
        scale,
        n,
        dist,
    }
}

/// Chain distance: cheapest total length of a chain whose gaps are all
/// strictly below `r`.
pub fn chain_metric(space: &FiniteMetricSpace, r: f64) -> Result<DerivedMetric> {
    if !(r > 0.0) {
        return Err(Error::input("chain scale must be positive"));
    }
    Ok(derived_table(space, r, DerivedKind::Chain))
}

/// Intrinsic path distance at scale `eps`: length of the shortest polygonal
/// path whose segments all stay strictly below `eps`.
pub fn path_metric(space: &FiniteMetricSpace, eps: f64) -> Result<DerivedMetric> {
    if !(eps > 0.0) {
        return Err(Error::input("path scale must be positive"));
    }
    Ok(derived_table(space, eps, DerivedKind::Path))
}

/// A finite path: waypoints with strictly increasing parameter values.
/// Multi-waypoint paths run from parameter 0 to 1; a single waypoint is the
/// degenerate path with parameter list [0].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePath {
    waypoints: Vec<usize>,
    params: Vec<f64>,
}

impl DiscretePath {
    /// Uniform parameters t_i = i/k for k segments.
    pub fn new(waypoints: Vec<usize>) -> Result<Self> {
        let k = waypoints.len();
        if k == 0 {
            return Err(Error::input("a path needs at least one waypoint"));
        }
        let params = if k == 1 {
            vec![0.0]
        } else {
            (0..k).map(|i| i as f64 / (k - 1) as f64).collect()
        };
        DiscretePath::with_params(waypoints, params)
    }

    pub fn with_params(waypoints: Vec<usize>, params: Vec<f64>) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(Error::input("a path needs at least one waypoint"));
        }
        if waypoints.len() != params.len() {
            return Err(Error::input(format!(
                "{} waypoints with {} parameters",
                waypoints.len(),
                params.len()
            )));
        }
        for w in waypoints.windows(2) {
            if w[0] == w[1] {
                return Err(Error::input("consecutive waypoints must be distinct"));
            }
        }
        if params.iter().any(|t| !t.is_finite()) {
            return Err(Error::input("non-finite path parameter"));
        }
        if waypoints.len() == 1 {
            if params[0] != 0.0 {
                return Err(Error::input("a single-waypoint path has parameter 0"));
            }
        } else {
            if params[0] != 0.0 || *params.last().unwrap() != 1.0 {
                return Err(Error::input("path parameters must run from 0 to 1"));
            }
            for w in params.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(Error::input("path parameters must strictly increase"));
                }
            }
        }
        Ok(DiscretePath { waypoints, params })
    }

    pub fn waypoints(&self) -> &[usize] {
        &self.waypoints
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn start(&self) -> usize {
        self.waypoints[0]
    }

    pub fn end(&self) -> usize {
        *self.waypoints.last().unwrap()
    }
}

/// Total length: sum of consecutive waypoint distances, rounded once, so a
/// path and its reverse measure identically.
pub fn path_length(space: &FiniteMetricSpace, p: &DiscretePath) -> f64 {
    segments_value(space, p.waypoints())
}

/// Length of the sub-path between parameters `a` and `b`, which must equal
/// existing waypoint parameters exactly; no interpolation happens.
pub fn path_length_sub(
    space: &FiniteMetricSpace,
    p: &DiscretePath,
    a: f64,
    b: f64,
) -> Result<f64> {
    if !(a < b) {
        return Err(Error::input("sub-range needs a < b"));
    }
    let ia = p
        .params()
        .iter()
        .position(|&t| t == a)
        .ok_or_else(|| Error::input(format!("parameter {} is not a waypoint parameter", a)))?;
    let ib = p
        .params()
        .iter()
        .position(|&t| t == b)
        .ok_or_else(|| Error::input(format!("parameter {} is not a waypoint parameter", b)))?;
    Ok(segments_value(space, &p.waypoints()[ia..=ib]))
}

/// Re-parametrizes proportionally to arc length: the new parameter of each
/// waypoint is its cumulative length share. Waypoints are unchanged, so the
/// total length is preserved exactly. Cumulative lengths use the same
/// rounded-once accumulation as `path_length`, so each prefix measured over
/// the result reproduces its parameter share.
pub fn reparametrize(space: &FiniteMetricSpace, p: &DiscretePath) -> Result<DiscretePath> {
    let total = path_length(space, p);
    if !(total > 0.0) {
        return Err(Error::input("cannot reparametrize a zero-length path"));
    }
    let mut params = Vec::with_capacity(p.waypoints().len());
    let mut acc = ExactSum::default();
    params.push(0.0);
    for w in p.waypoints().windows(2) {
        acc.add(space.dist(w[0], w[1]));
        params.push(acc.value() / total);
    }
    DiscretePath::with_params(p.waypoints().to_vec(), params)
}

/// Shortest path between two points at scale `eps`. The recovered paths
/// from both endpoints plus the direct edge (when it is below the scale)
/// are measured with the same rounded-once summation as the metric tables,
/// so the winner's `path_length` reproduces the path-metric entry bitwise;
/// ties go to the lexicographically smallest waypoint sequence.
pub fn geodesic(
    space: &FiniteMetricSpace,
    eps: f64,
    from: usize,
    to: usize,
) -> Result<DiscretePath> {
    if !(eps > 0.0) {
        return Err(Error::input("path scale must be positive"));
    }
    let n = space.len();
    if from >= n || to >= n {
        return Err(Error::input("geodesic endpoint out of range"));
    }
    if from == to {
        return DiscretePath::with_params(vec![from], vec![0.0]);
    }
    let adj = threshold_edges(space, eps);
    let (ds_a, pred_a) = dijkstra(&adj, from);
    if !ds_a[to].is_finite() {
        return Err(Error::no_path(format!(
            "{:?} and {:?} are not connected at scale {}",
            space.label(from),
            space.label(to),
            eps
        )));
    }
    let (_, pred_b) = dijkstra(&adj, to);
    let path_a = recovered_path(&pred_a, from, to);
    let mut path_b = recovered_path(&pred_b, to, from);
    path_b.reverse();
    let mut candidates = vec![
        (segments_value(space, &path_a), path_a),
        (segments_value(space, &path_b), path_b),
    ];
    let base = space.dist(from, to);
    if base < eps {
        candidates.push((base, vec![from, to]));
    }
    let (_, best) = candidates
        .into_iter()
        .min_by(|(va, pa), (vb, pb)| va.partial_cmp(vb).unwrap().then_with(|| pa.cmp(pb)))
        .unwrap();
    DiscretePath::new(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[f64]) -> FiniteMetricSpace {
        let labels = values.iter().map(|v| format!("{}", v)).collect();
        let coords: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        FiniteMetricSpace::from_coords(labels, &coords).unwrap()
    }

    fn octagon() -> FiniteMetricSpace {
        let labels = (0..8).map(|k| format!("p{}", k)).collect();
        let coords: Vec<Vec<f64>> = (0..8)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        FiniteMetricSpace::from_coords(labels, &coords).unwrap()
    }

    #[test]
    fn chain_metric_line_sums_gaps() {
        let s = line(&[0.0, 0.4, 0.8, 1.2]);
        let dc = chain_metric(&s, 0.5).unwrap();
        // adjacent entries equal the base distance
        assert_eq!(dc.lookup(0, 1), Some(s.dist(0, 1)));
        // far entries are the left-to-right gap sums
        let expect03 = (s.dist(0, 1) + s.dist(1, 2)) + s.dist(2, 3);
        assert_eq!(dc.lookup(0, 3), Some(expect03));
        assert_eq!(dc.lookup(0, 0), Some(0.0));
        assert!(s.dist(0, 3) <= expect03);
    }

    #[test]
    fn chain_metric_unreachable_is_none() {
        let s = line(&[0.0, 1.0]);
        let dc = chain_metric(&s, 0.5).unwrap();
        assert_eq!(dc.lookup(0, 1), None);
        assert_eq!(dc.lookup(0, 0), Some(0.0));
        assert!(chain_metric(&s, 0.0).is_err());
    }

    #[test]
    fn chain_metric_agrees_with_base_below_scale() {
        let s = line(&[0.0, 0.3, 0.7, 1.0]);
        let dc = chain_metric(&s, 2.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(dc.lookup(i, j), Some(s.dist(i, j)));
            }
        }
    }

    #[test]
    fn chain_and_path_tables_coincide() {
        let s = octagon();
        for scale in [0.8, 1.1, 1.5, 2.5] {
            let dc = chain_metric(&s, scale).unwrap();
            let dp = path_metric(&s, scale).unwrap();
            for i in 0..8 {
                for j in 0..8 {
                    assert_eq!(dc.lookup(i, j), dp.lookup(i, j), "scale {}", scale);
                }
            }
        }
    }

    #[test]
    fn path_metric_octagon_antipodal() {
        let s = octagon();
        let dp = path_metric(&s, 0.8).unwrap();
        // base chord between antipodes is 2; four sub-scale hops are needed
        let got = dp.lookup(0, 4).unwrap();
        let chord = 2.0 * (std::f64::consts::PI / 8.0).sin();
        assert!((got - 4.0 * chord).abs() <= 1e-12);
        assert!((s.dist(0, 4) - 2.0).abs() <= 1e-12);
        assert!(got > s.dist(0, 4));
        // the two 4-hop arcs are the only shortest candidates
        let cw = exact_sum([s.dist(0, 1), s.dist(1, 2), s.dist(2, 3), s.dist(3, 4)]);
        let ccw = exact_sum([s.dist(0, 7), s.dist(7, 6), s.dist(6, 5), s.dist(5, 4)]);
        assert_eq!(got, cw.min(ccw));
    }

    #[test]
    fn exact_sum_is_order_invariant() {
        let vals = [0.1, 1.0e-9, 3.5, 0.7000000001, 2.0f64.powi(-40), 1.25];
        let fwd = exact_sum(vals.iter().copied());
        let rev = exact_sum(vals.iter().rev().copied());
        assert_eq!(fwd.to_bits(), rev.to_bits());
        // ten tenths round to exactly one, unlike the running float sum
        let tenths = exact_sum(std::iter::repeat(0.1).take(10));
        assert_eq!(tenths, 1.0);
        let naive = std::iter::repeat(0.1).take(10).fold(0.0, |a, b| a + b);
        assert_ne!(naive, 1.0);
        assert_eq!(exact_sum(std::iter::empty()), 0.0);
    }

    #[test]
    fn derived_tables_are_exactly_symmetric() {
        // irrational-ish 2-D scatter where reversed multi-hop float sums
        // would disagree in the last bit without rounded-once accumulation
        let coords: Vec<Vec<f64>> = (0..12)
            .map(|k| {
                let a = (k as f64 * 1.37).sin() * 0.9;
                let b = (k as f64 * 2.11).cos() * 1.1;
                vec![a, b]
            })
            .collect();
        let labels = (0..12).map(|k| format!("s{}", k)).collect();
        let s = FiniteMetricSpace::from_coords(labels, &coords).unwrap();
        for scale in [0.4, 0.7, 1.2] {
            let dc = chain_metric(&s, scale).unwrap();
            for i in 0..12 {
                for j in 0..12 {
                    assert_eq!(dc.lookup(i, j), dc.lookup(j, i), "scale {}", scale);
                    if let Some(v) = dc.lookup(i, j) {
                        assert!(v >= s.dist(i, j));
                    }
                    if s.dist(i, j) < scale {
                        assert_eq!(dc.lookup(i, j), Some(s.dist(i, j)));
                    }
                }
            }
        }
    }

    #[test]
    fn path_metric_matches_floyd_warshall_oracle() {
        let s = octagon();
        let eps = 1.1;
        let dp = path_metric(&s, eps).unwrap();
        // independent closure with a different association order; compare with slack
        let n = s.len();
        let mut fw = vec![vec![f64::INFINITY; n]; n];
        for i in 0..n {
            fw[i][i] = 0.0;
            for j in 0..n {
                if i != j && s.dist(i, j) < eps {
                    fw[i][j] = s.dist(i, j);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = fw[i][k] + fw[k][j];
                    if via < fw[i][j] {
                        fw[i][j] = via;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                match dp.lookup(i, j) {
                    Some(d) => assert!((d - fw[i][j]).abs() <= 1e-12),
                    None => assert!(fw[i][j].is_infinite()),
                }
            }
        }
    }

    #[test]
    fn path_params_validation() {
        assert!(DiscretePath::new(vec![]).is_err());
        assert!(DiscretePath::new(vec![0, 0]).is_err());
        assert!(DiscretePath::with_params(vec![0, 1], vec![0.0, 0.5]).is_err());
        assert!(DiscretePath::with_params(vec![0, 1, 2], vec![0.0, 0.0, 1.0]).is_err());
        let p = DiscretePath::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(p.params(), &[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        let single = DiscretePath::new(vec![2]).unwrap();
        assert_eq!(single.params(), &[0.0]);
    }

    #[test]
    fn path_length_and_subrange() {
        let s = line(&[0.0, 1.0, 3.0, 6.0]);
        let p = DiscretePath::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(path_length(&s, &p), 6.0);
        let t1 = p.params()[1];
        let t2 = p.params()[2];
        assert_eq!(path_length_sub(&s, &p, 0.0, t1).unwrap(), 1.0);
        assert_eq!(path_length_sub(&s, &p, t1, t2).unwrap(), 2.0);
        assert_eq!(path_length_sub(&s, &p, t1, 1.0).unwrap(), 5.0);
        // additivity at a waypoint
        let left = path_length_sub(&s, &p, 0.0, t2).unwrap();
        let right = path_length_sub(&s, &p, t2, 1.0).unwrap();
        assert_eq!(left + right, path_length(&s, &p));
        // boundaries must align with waypoints
        assert!(path_length_sub(&s, &p, 0.0, 0.5).is_err());
        assert!(path_length_sub(&s, &p, t1, t1).is_err());
        // single waypoint has zero length
        let single = DiscretePath::new(vec![1]).unwrap();
        assert_eq!(path_length(&s, &single), 0.0);
    }

    #[test]
    fn reparametrize_cumulative_fractions() {
        let s = line(&[0.0, 1.0, 3.0, 6.0]);
        let p = DiscretePath::new(vec![0, 1, 2, 3]).unwrap();
        let q = reparametrize(&s, &p).unwrap();
        assert_eq!(q.waypoints(), p.waypoints());
        assert_eq!(q.params(), &[0.0, 1.0 / 6.0, 3.0 / 6.0, 1.0]);
        assert_eq!(path_length(&s, &q), path_length(&s, &p));
        // proportionality: prefix length == t * total within 1e-12 relative
        let total = path_length(&s, &q);
        for (i, &t) in q.params().iter().enumerate().skip(1) {
            let prefix = path_length_sub(&s, &q, 0.0, t).unwrap();
            assert!((prefix - t * total).abs() <= 1e-12 * total, "i={}", i);
        }
        let single = DiscretePath::new(vec![0]).unwrap();
        assert!(reparametrize(&s, &single).is_err());
    }

    #[test]
    fn geodesic_line_visits_every_hop() {
        let s = line(&[0.0, 0.4, 0.8, 1.2]);
        let g = geodesic(&s, 0.5, 0, 3).unwrap();
        assert_eq!(g.waypoints(), &[0, 1, 2, 3]);
        let dp = path_metric(&s, 0.5).unwrap();
        assert_eq!(path_length(&s, &g), dp.lookup(0, 3).unwrap());
    }

    #[test]
    fn geodesic_lexicographic_tie_break() {
        // unit square: 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1); both corners give
        // length exactly 2, so the smaller middle index wins
        let coords = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let labels = (0..4).map(|i| format!("c{}", i)).collect();
        let s = FiniteMetricSpace::from_coords(labels, &coords).unwrap();
        let g = geodesic(&s, 1.1, 0, 3).unwrap();
        assert_eq!(g.waypoints(), &[0, 1, 3]);
        assert_eq!(path_length(&s, &g), 2.0);
    }

    #[test]
    fn geodesic_unreachable_and_trivial() {
        let s = line(&[0.0, 1.0]);
        let err = geodesic(&s, 0.5, 0, 1).unwrap_err();
        assert!(matches!(err, Error::NoPath(_)));
        let g = geodesic(&s, 0.5, 1, 1).unwrap();
        assert_eq!(g.waypoints(), &[1]);
        assert_eq!(g.params(), &[0.0]);
    }

    #[test]
    fn geodesic_length_equals_metric_entry_bitwise() {
        let s = octagon();
        let dp = path_metric(&s, 0.8).unwrap();
        for from in 0..8 {
            for to in 0..8 {
                if from == to {
                    continue;
                }
                let g = geodesic(&s, 0.8, from, to).unwrap();
                assert_eq!(
                    path_length(&s, &g),
                    dp.lookup(from, to).unwrap(),
                    "{} -> {}",
                    from,
                    to
                );
            }
        }
    }
}
