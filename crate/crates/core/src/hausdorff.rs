//! Hausdorff distance between point sets, over the base metric or a derived
//! one. Two independent formulations are provided: the max of the two
//! directed sup-inf distances, and the smallest expansion radius that makes
//! each set swallow the other inside closed balls. On finite spaces both
//! take values among the pairwise distances, so they agree exactly.

use crate::derived::DerivedMetric;
use crate::space::{FiniteMetricSpace, PointSet};

/// Uniform lookup over a base space or a derived metric table.
/// `lookup` returns None exactly for unreachable derived pairs.
#[derive(Debug, Clone, Copy)]
pub enum MetricView<'a> {
    Base(&'a FiniteMetricSpace),
    Derived(&'a DerivedMetric),
}

impl<'a> MetricView<'a> {
    pub fn len(&self) -> usize {
        match self {
            MetricView::Base(s) => s.len(),
            MetricView::Derived(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, i: usize, j: usize) -> Option<f64> {
        match self {
            MetricView::Base(s) => Some(s.dist(i, j)),
            MetricView::Derived(d) => d.lookup(i, j),
        }
    }
}

/// Distance from a point to a set: the smallest distance to any reachable
/// member. None when every member is unreachable.
pub fn set_distance(y: usize, a: &PointSet, m: &MetricView) -> Option<f64> {
    a.members()
        .iter()
        .filter_map(|&x| m.lookup(y, x))
        .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.min(d))))
}

/// Max of the two directed sup-inf distances. None as soon as one point of
/// either set has no reachable partner across the divide.
pub fn hausdorff_distance(a: &PointSet, b: &PointSet, m: &MetricView) -> Option<f64> {
    let forward = directed_sup(a, b, m)?;
    let backward = directed_sup(b, a, m)?;
    Some(forward.max(backward))
}

fn directed_sup(from: &PointSet, to: &PointSet, m: &MetricView) -> Option<f64> {
    let mut sup = 0.0f64;
    for &x in from.members() {
        let d = set_distance(x, to, m)?;
        sup = sup.max(d);
    }
    Some(sup)
}

/// Dual formulation: the smallest radius r such that each set lies inside
/// the closed r-expansion of the other. Candidate radii are exactly the
/// cross distances (plus zero), scanned in increasing order, so the result
/// matches [`hausdorff_distance`] bitwise.
pub fn hausdorff_via_expansion(a: &PointSet, b: &PointSet, m: &MetricView) -> Option<f64> {
    let mut candidates: Vec<f64> = vec![0.0];
    for &x in a.members() {
        for &y in b.members() {
            if let Some(d) = m.lookup(x, y) {
                candidates.push(d);
            }
        }
    }
    candidates.sort_by(|p, q| p.partial_cmp(q).unwrap());
    candidates.dedup();
    candidates
        .into_iter()
        .find(|&r| covers(b, a, r, m) && covers(a, b, r, m))
}

/// Is every point of `inner` within distance r of some point of `cover`?
fn covers(cover: &PointSet, inner: &PointSet, r: f64, m: &MetricView) -> bool {
    inner.members().iter().all(|&y| {
        cover
            .members()
            .iter()
            .any(|&x| m.lookup(y, x).is_some_and(|d| d <= r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::chain_metric;

    fn line(values: &[f64]) -> FiniteMetricSpace {
        let labels = values.iter().map(|v| format!("{}", v)).collect();
        let coords: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        FiniteMetricSpace::from_coords(labels, &coords).unwrap()
    }

    fn set(members: &[usize], n: usize) -> PointSet {
        PointSet::new(members.iter().cloned(), n).unwrap()
    }

    #[test]
    fn point_to_set_takes_nearest() {
        let s = line(&[0.0, 1.0, 2.0]);
        let m = MetricView::Base(&s);
        let a = set(&[0, 1], 3);
        assert_eq!(set_distance(2, &a, &m), Some(1.0));
        assert_eq!(set_distance(0, &a, &m), Some(0.0));
    }

    #[test]
    fn hausdorff_line_example() {
        let s = line(&[0.0, 1.0, 2.0]);
        let m = MetricView::Base(&s);
        let a = set(&[0, 1], 3);
        let b = set(&[2], 3);
        // sup from a: the 0 point sits 2 away; from b: 1 away
        assert_eq!(hausdorff_distance(&a, &b, &m), Some(2.0));
        assert_eq!(hausdorff_distance(&b, &a, &m), Some(2.0));
    }

    #[test]
    fn hausdorff_zero_iff_equal_sets() {
        let s = line(&[0.0, 1.0, 2.0]);
        let m = MetricView::Base(&s);
        let a = set(&[0, 2], 3);
        assert_eq!(hausdorff_distance(&a, &a, &m), Some(0.0));
        let b = set(&[0], 3);
        assert!(hausdorff_distance(&a, &b, &m).unwrap() > 0.0);
    }

    #[test]
    fn expansion_agrees_exactly() {
        let s = line(&[0.0, 0.7, 1.9, 3.1, 4.0]);
        let m = MetricView::Base(&s);
        let n = s.len();
        // every nonempty subset pair
        for abits in 1u32..(1 << n) {
            for bbits in 1u32..(1 << n) {
                let a = set(
                    &(0..n).filter(|i| abits & (1 << i) != 0).collect::<Vec<_>>(),
                    n,
                );
                let b = set(
                    &(0..n).filter(|i| bbits & (1 << i) != 0).collect::<Vec<_>>(),
                    n,
                );
                assert_eq!(
                    hausdorff_distance(&a, &b, &m),
                    hausdorff_via_expansion(&a, &b, &m)
                );
            }
        }
    }

    #[test]
    fn unreachable_pairs_give_none() {
        let s = line(&[0.0, 0.1, 5.0, 5.1]);
        let dc = chain_metric(&s, 0.5).unwrap();
        let m = MetricView::Derived(&dc);
        let a = set(&[0, 1], 4);
        let b = set(&[2, 3], 4);
        assert_eq!(hausdorff_distance(&a, &b, &m), None);
        assert_eq!(hausdorff_via_expansion(&a, &b, &m), None);
        assert_eq!(set_distance(0, &b, &m), None);
        // mixed set: the reachable member decides
        let mixed = set(&[1, 2], 4);
        assert_eq!(set_distance(0, &mixed, &m), Some(s.dist(0, 1)));
        // but Hausdorff needs every point covered, and 3 cannot reach {0,1}
        assert_eq!(hausdorff_distance(&a, &mixed, &m), None);
    }

    #[test]
    fn triangle_inequality_small_space() {
        let s = line(&[0.0, 1.0, 2.5, 4.0]);
        let m = MetricView::Base(&s);
        let n = s.len();
        let sets: Vec<PointSet> = (1u32..(1 << n))
            .map(|bits| {
                set(
                    &(0..n).filter(|i| bits & (1 << i) != 0).collect::<Vec<_>>(),
                    n,
                )
            })
            .collect();
        for a in &sets {
            for b in &sets {
                for c in &sets {
                    let ab = hausdorff_distance(a, b, &m).unwrap();
                    let bc = hausdorff_distance(b, c, &m).unwrap();
                    let ac = hausdorff_distance(a, c, &m).unwrap();
                    assert!(ac <= ab + bc + 1e-12);
                }
            }
        }
    }
}
