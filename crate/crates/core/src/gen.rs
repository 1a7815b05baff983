//! Seeded instance generators for tests and the CLI.
//!
//! Everything here is a pure function of the seed (ChaCha8), so generated
//! fixtures are reproducible across runs and platforms.
//!
//! The contractive instances are stars: a few branches radiating from a
//! shared anchor with geometrically growing gaps, mapped one or two steps
//! toward the anchor. Branch directions stay at least 84 degrees apart and
//! gap ratios are at least 2, which keeps every image pair's distance ratio
//! below 0.9 by a margin: within a branch the ratio is at most
//! (1+rho)/rho^2 <= 0.75, and across branches images sit within half their
//! source radii, so the ratio is at most 1/(2 sin 42 deg) which is under
//! 0.75 as well.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::derived::DiscretePath;
use crate::error::{Error, Result};
use crate::expr::Formula;
use crate::games::{Game, PayoffSource};
use crate::setvalued::SetValuedMap;
use crate::space::{Combiner, FiniteMetricSpace, PointSet};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random points in the unit cube under the euclidean metric.
pub fn cloud_space(seed: u64, n: usize, dim: usize) -> Result<FiniteMetricSpace> {
    if n == 0 {
        return Err(Error::input("cloud needs at least one point"));
    }
    if dim == 0 {
        return Err(Error::input("cloud needs at least one dimension"));
    }
    let mut rng = seeded_rng(seed);
    let coords: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let labels = (0..n).map(|i| format!("p{}", i)).collect();
    FiniteMetricSpace::from_coords(labels, &coords)
}

/// A star space with a provably contractive map toward the anchor.
#[derive(Debug, Clone)]
pub struct ContractiveInstance {
    pub space: FiniteMetricSpace,
    pub map: SetValuedMap,
    /// Every consecutive gap sits strictly below this scale, so the space is
    /// chainable at it and the anchor connects all branches.
    pub chain_scale: f64,
    /// Construction-time ceiling on every image distance ratio.
    pub modulus_bound: f64,
    pub anchor: usize,
}

pub fn contractive_instance(seed: u64, set_valued: bool) -> ContractiveInstance {
    let mut rng = seeded_rng(seed);
    let branches = rng.gen_range(1..=4usize);
    let rot: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let sep = std::f64::consts::TAU / branches as f64;
    let max_jitter = (sep - 84f64.to_radians()) / 2.0;
    let ax: f64 = rng.gen_range(0.0..1.0);
    let ay: f64 = rng.gen_range(0.0..1.0);
    let mut coords = vec![vec![ax, ay]];
    let mut targets: Vec<Vec<usize>> = vec![vec![0]];
    let mut max_gap = 0.0f64;
    for b in 0..branches {
        let jitter = if max_jitter > 0.0 {
            rng.gen_range(-max_jitter..max_jitter)
        } else {
            0.0
        };
        let theta = rot + sep * b as f64 + jitter;
        let (dy, dx) = theta.sin_cos();
        let len = rng.gen_range(3..=8usize);
        let g0: f64 = rng.gen_range(0.02..0.08);
        let rho: f64 = rng.gen_range(2.0..2.6);
        let mut gap = g0;
        let mut radial = 0.0f64;
        let mut prev = 0usize;
        let mut prev2: Option<usize> = None;
        for _ in 0..len {
            radial += gap;
            if gap > max_gap {
                max_gap = gap;
            }
            gap *= rho;
            let idx = coords.len();
            coords.push(vec![ax + dx * radial, ay + dy * radial]);
            let image = match prev2 {
                Some(p2) if set_valued && rng.gen_bool(0.3) => vec![p2, prev],
                _ => vec![prev],
            };
            targets.push(image);
            prev2 = Some(prev);
            prev = idx;
        }
    }
    let n = coords.len();
    let labels = (0..n).map(|i| format!("p{}", i)).collect();
    let space = FiniteMetricSpace::from_coords(labels, &coords).unwrap();
    let images = targets
        .into_iter()
        .map(|t| PointSet::new(t, n).unwrap())
        .collect();
    let map = SetValuedMap::new(n, images).unwrap();
    ContractiveInstance {
        space,
        map,
        chain_scale: 1.05 * max_gap,
        modulus_bound: 0.9,
        anchor: 0,
    }
}

/// Two contractive singleton maps on one space: the one-step shift toward
/// the anchor and a per-point mix of one- and two-step shifts.
pub fn contraction_pair(seed: u64) -> (FiniteMetricSpace, SetValuedMap, SetValuedMap) {
    let inst = contractive_instance(seed, false);
    let n = inst.space.len();
    let step1: Vec<usize> = (0..n).map(|x| inst.map.image(x).members()[0]).collect();
    let mut rng = seeded_rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mixed: Vec<usize> = (0..n)
        .map(|x| {
            if rng.gen_bool(0.5) {
                step1[x]
            } else {
                step1[step1[x]]
            }
        })
        .collect();
    let g = SetValuedMap::from_function(&mixed).unwrap();
    (inst.space, inst.map, g)
}

/// Random waypoint walk with consecutive waypoints distinct, uniform
/// parameters.
pub fn random_path(seed: u64, space_len: usize, max_len: usize) -> Result<DiscretePath> {
    if space_len < 2 {
        return Err(Error::input("path generation needs at least two points"));
    }
    if max_len < 2 {
        return Err(Error::input("max_len must be at least 2"));
    }
    let mut rng = seeded_rng(seed);
    let len = rng.gen_range(2..=max_len);
    let mut waypoints = Vec::with_capacity(len);
    waypoints.push(rng.gen_range(0..space_len));
    for _ in 1..len {
        let prev = *waypoints.last().unwrap();
        let mut next = rng.gen_range(0..space_len);
        while next == prev {
            next = rng.gen_range(0..space_len);
        }
        waypoints.push(next);
    }
    DiscretePath::new(waypoints)
}

/// Nonempty uniform random subset: each point kept with probability 0.3,
/// with one forced member when the coin flips all miss.
pub fn random_subset(rng: &mut ChaCha8Rng, space_len: usize) -> PointSet {
    let mut members: Vec<usize> = (0..space_len).filter(|_| rng.gen_bool(0.3)).collect();
    if members.is_empty() {
        members.push(rng.gen_range(0..space_len));
    }
    PointSet::new(members, space_len).unwrap()
}

/// Two-player game with unit-grid strategy spaces and uniform random payoff
/// tables.
pub fn table_game(seed: u64, max_strategies: usize) -> Result<Game> {
    if max_strategies < 2 {
        return Err(Error::input("table game needs at least two strategies"));
    }
    let mut rng = seeded_rng(seed);
    let sizes = [
        rng.gen_range(2..=max_strategies),
        rng.gen_range(2..=max_strategies),
    ];
    let spaces: Vec<FiniteMetricSpace> = sizes
        .iter()
        .map(|&m| {
            let labels = (0..m).map(|k| format!("{}", k)).collect();
            let coords: Vec<Vec<f64>> = (0..m).map(|k| vec![k as f64]).collect();
            FiniteMetricSpace::from_coords(labels, &coords).unwrap()
        })
        .collect();
    let total: usize = sizes.iter().product();
    let tables: Vec<Vec<f64>> = (0..2)
        .map(|_| (0..total).map(|_| rng.gen::<f64>()).collect())
        .collect();
    Game::new(spaces, PayoffSource::Table(tables), Combiner::Max)
}

/// The symmetric two-player chase game on a uniform grid over [0, 1]:
/// each player pays for the squared distance to a + b * opponent.
pub fn quadratic_game(a: f64, b: f64, step: f64) -> Result<Game> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::input("grid step must be in (0, 1]"));
    }
    let n = (1.0 / step).round() as usize + 1;
    let labels: Vec<String> = (0..n).map(|k| format!("{}", k as f64 * step)).collect();
    let coords: Vec<Vec<f64>> = (0..n).map(|k| vec![k as f64 * step]).collect();
    let s = FiniteMetricSpace::from_coords(labels, &coords)?;
    let f1 = Formula::parse(&format!("-(x1 - {} - {}*x2)^2", a, b), 2)?;
    let f2 = Formula::parse(&format!("-(x2 - {} - {}*x1)^2", a, b), 2)?;
    Game::new(
        vec![s.clone(), s],
        PayoffSource::Expression(vec![f1, f2]),
        Combiner::Max,
    )
}
