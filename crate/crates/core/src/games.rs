//! Strategic-form games whose strategy sets are finite metric spaces.
//!
//! Payoffs come either as full per-player tables over the profile grid or as
//! arithmetic formulas over the numeric strategy labels. Best responses are
//! tolerance-argmax sets, so the best-response map is a set-valued self-map
//! on the product space and the whole contraction toolkit applies to it.

use serde::{Deserialize, Serialize};

use crate::derived::path_metric;
use crate::error::{Error, Result};
use crate::expr::Formula;
use crate::hausdorff::MetricView;
use crate::setvalued::{
    fixed_points_exhaustive, local_certificate, pointwise_certificate, solve_fixed_point,
    ContractionCertificate, NeighborhoodSpec, SetValuedMap, SolveOutcome, SolveTrace,
};
use crate::space::{
    components_at_scale, index_to_profile, is_r_chainable, product_space, profile_to_index,
    Combiner, FiniteMetricSpace, PointSet,
};

/// Payoff ties within this absolute tolerance count as joint maxima.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub enum PayoffSource {
    /// One flat array per player, indexed by profile (last player fastest).
    Table(Vec<Vec<f64>>),
    /// One formula per player over x1..xn; requires numeric strategy labels.
    Expression(Vec<Formula>),
}

#[derive(Debug, Clone)]
pub struct Game {
    strategies: Vec<FiniteMetricSpace>,
    payoffs: PayoffSource,
    combiner: Combiner,
    sizes: Vec<usize>,
    total: usize,
    /// Strategy labels as reals, present exactly in expression mode.
    numeric_labels: Option<Vec<Vec<f64>>>,
}

impl Game {
    pub fn new(
        strategies: Vec<FiniteMetricSpace>,
        payoffs: PayoffSource,
        combiner: Combiner,
    ) -> Result<Game> {
        if strategies.is_empty() {
            return Err(Error::input("a game needs at least one player"));
        }
        let sizes: Vec<usize> = strategies.iter().map(|s| s.len()).collect();
        let mut total: usize = 1;
        for &s in &sizes {
            total = total
                .checked_mul(s)
                .ok_or_else(|| Error::resource("profile space overflows".to_string()))?;
        }
        let numeric_labels = match &payoffs {
            PayoffSource::Table(data) => {
                if data.len() != strategies.len() {
                    return Err(Error::input(format!(
                        "{} payoff tables for {} players",
                        data.len(),
                        strategies.len()
                    )));
                }
                for (i, t) in data.iter().enumerate() {
                    if t.len() != total {
                        return Err(Error::input(format!(
                            "player {} table has {} entries, profile grid has {}",
                            i,
                            t.len(),
                            total
                        )));
                    }
                    if let Some(bad) = t.iter().find(|v| !v.is_finite()) {
                        return Err(Error::input(format!(
                            "player {} table contains non-finite payoff {}",
                            i, bad
                        )));
                    }
                }
                None
            }
            PayoffSource::Expression(formulas) => {
                if formulas.len() != strategies.len() {
                    return Err(Error::input(format!(
                        "{} formulas for {} players",
                        formulas.len(),
                        strategies.len()
                    )));
                }
                for (i, f) in formulas.iter().enumerate() {
                    if f.n_vars() != strategies.len() {
                        return Err(Error::input(format!(
                            "player {} formula is over {} variables, game has {} players",
                            i,
                            f.n_vars(),
                            strategies.len()
                        )));
                    }
                }
                let mut per_player = Vec::with_capacity(strategies.len());
                for s in &strategies {
                    let mut vals = Vec::with_capacity(s.len());
                    for label in s.labels() {
                        let v: f64 = label.trim().parse().map_err(|_| {
                            Error::input(format!(
                                "expression payoffs need numeric strategy labels, got '{}'",
                                label
                            ))
                        })?;
                        if !v.is_finite() {
                            return Err(Error::input(format!(
                                "strategy label '{}' is not a finite real",
                                label
                            )));
                        }
                        vals.push(v);
                    }
                    per_player.push(vals);
                }
                Some(per_player)
            }
        };
        Ok(Game {
            strategies,
            payoffs,
            combiner,
            sizes,
            total,
            numeric_labels,
        })
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy_space(&self, i: usize) -> &FiniteMetricSpace {
        &self.strategies[i]
    }

    pub fn strategy_spaces(&self) -> &[FiniteMetricSpace] {
        &self.strategies
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_profiles(&self) -> usize {
        self.total
    }

    pub fn combiner(&self) -> Combiner {
        self.combiner
    }

    pub fn payoffs(&self) -> &PayoffSource {
        &self.payoffs
    }

    fn check_profile(&self, profile: &[usize]) -> Result<()> {
        if profile.len() != self.players() {
            return Err(Error::input(format!(
                "profile has {} coordinates, game has {} players",
                profile.len(),
                self.players()
            )));
        }
        for (i, (&p, &s)) in profile.iter().zip(&self.sizes).enumerate() {
            if p >= s {
                return Err(Error::input(format!(
                    "strategy index {} out of range for player {} ({} strategies)",
                    p, i, s
                )));
            }
        }
        Ok(())
    }

    pub fn evaluate_payoff(&self, player: usize, profile: &[usize]) -> Result<f64> {
        if player >= self.players() {
            return Err(Error::input(format!("no player {}", player)));
        }
        self.check_profile(profile)?;
        match &self.payoffs {
            PayoffSource::Table(data) => {
                Ok(data[player][profile_to_index(&self.sizes, profile)])
            }
            PayoffSource::Expression(formulas) => {
                let labels = self.numeric_labels.as_ref().unwrap();
                let vars: Vec<f64> = profile
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| labels[i][p])
                    .collect();
                formulas[player].eval(&vars)
            }
        }
    }

    /// Strategies of `player` within tie_tol of the best payoff against the
    /// opponents in `profile`. The player's own coordinate is ignored.
    pub fn best_response(&self, player: usize, profile: &[usize], tie_tol: f64) -> Result<PointSet> {
        if !(tie_tol >= 0.0) {
            return Err(Error::input("tie_tol must be nonnegative"));
        }
        if player >= self.players() {
            return Err(Error::input(format!("no player {}", player)));
        }
        self.check_profile(profile)?;
        let mut probe = profile.to_vec();
        let mut values = Vec::with_capacity(self.sizes[player]);
        for u in 0..self.sizes[player] {
            probe[player] = u;
            values.push(self.evaluate_payoff(player, &probe)?);
        }
        let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let members = (0..values.len()).filter(|&u| values[u] >= best - tie_tol);
        PointSet::new(members, self.sizes[player])
    }

    /// Flat per-player payoff arrays over the whole profile grid, with
    /// expression payoffs materialized once.
    fn flat_payoffs(&self) -> Result<Vec<Vec<f64>>> {
        match &self.payoffs {
            PayoffSource::Table(data) => Ok(data.clone()),
            PayoffSource::Expression(formulas) => {
                let labels = self.numeric_labels.as_ref().unwrap();
                let mut out = vec![Vec::with_capacity(self.total); self.players()];
                let mut vars = vec![0.0; self.players()];
                for flat in 0..self.total {
                    let profile = index_to_profile(&self.sizes, flat);
                    for (i, &p) in profile.iter().enumerate() {
                        vars[i] = labels[i][p];
                    }
                    for (i, f) in formulas.iter().enumerate() {
                        out[i].push(f.eval(&vars)?);
                    }
                }
                Ok(out)
            }
        }
    }

    /// The product strategy space and the best-response map on it: each
    /// profile maps to the Cartesian product of the per-player response sets.
    pub fn best_response_map(
        &self,
        tie_tol: f64,
        cap: usize,
    ) -> Result<(FiniteMetricSpace, SetValuedMap)> {
        if !(tie_tol >= 0.0) {
            return Err(Error::input("tie_tol must be nonnegative"));
        }
        let refs: Vec<&FiniteMetricSpace> = self.strategies.iter().collect();
        let prod = product_space(&refs, self.combiner, cap)?;
        let n = self.players();
        let tables = self.flat_payoffs()?;
        // stride of player i in the flattened profile index
        let mut strides = vec![1usize; n];
        for i in (0..n - 1).rev() {
            strides[i] = strides[i + 1] * self.sizes[i + 1];
        }
        let mut images = Vec::with_capacity(self.total);
        let mut brs: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut combo = vec![0usize; n];
        for flat in 0..self.total {
            for i in 0..n {
                let stride = strides[i];
                let own = (flat / stride) % self.sizes[i];
                let base = flat - own * stride;
                let t = &tables[i];
                let mut best = f64::NEG_INFINITY;
                for u in 0..self.sizes[i] {
                    let v = t[base + u * stride];
                    if v > best {
                        best = v;
                    }
                }
                brs[i].clear();
                for u in 0..self.sizes[i] {
                    if t[base + u * stride] >= best - tie_tol {
                        brs[i].push(u);
                    }
                }
            }
            let mut out = Vec::new();
            // odometer over the response sets, last player fastest; combo
            // ends all-zero, ready for the next profile
            'profiles: loop {
                let mut target = 0usize;
                for i in 0..n {
                    target += brs[i][combo[i]] * strides[i];
                }
                out.push(target);
                let mut k = n;
                loop {
                    if k == 0 {
                        break 'profiles;
                    }
                    k -= 1;
                    combo[k] += 1;
                    if combo[k] < brs[k].len() {
                        break;
                    }
                    combo[k] = 0;
                }
            }
            images.push(PointSet::new(out, self.total)?);
        }
        Ok((prod, SetValuedMap::new(self.total, images)?))
    }

    /// Nash profiles as the fixed points of the best-response map.
    pub fn nash_enumerate(&self, tie_tol: f64, cap: usize) -> Result<Vec<Vec<usize>>> {
        let (_prod, br) = self.best_response_map(tie_tol, cap)?;
        Ok(fixed_points_exhaustive(&br)
            .into_iter()
            .map(|flat| index_to_profile(&self.sizes, flat))
            .collect())
    }

    /// Independent route to the same set: a profile is an equilibrium iff no
    /// unilateral deviation improves any player by more than tie_tol.
    pub fn nash_by_deviation(&self, tie_tol: f64) -> Result<Vec<Vec<usize>>> {
        if !(tie_tol >= 0.0) {
            return Err(Error::input("tie_tol must be nonnegative"));
        }
        let mut out = Vec::new();
        for flat in 0..self.total {
            let profile = index_to_profile(&self.sizes, flat);
            if self.no_improving_deviation(&profile, tie_tol)? {
                out.push(profile);
            }
        }
        Ok(out)
    }

    fn no_improving_deviation(&self, profile: &[usize], tie_tol: f64) -> Result<bool> {
        for i in 0..self.players() {
            let here = self.evaluate_payoff(i, profile)?;
            let mut probe = profile.to_vec();
            for u in 0..self.sizes[i] {
                if u == profile[i] {
                    continue;
                }
                probe[i] = u;
                if self.evaluate_payoff(i, &probe)? - here > tie_tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Greedy best-response dynamics on the product space, with any reported
    /// fixed point re-checked by the deviation scan.
    pub fn nash_via_dynamics(
        &self,
        x0: &[usize],
        tie_tol: f64,
        max_iter: usize,
        metric: DynamicsMetric,
        cap: usize,
    ) -> Result<NashDynamics> {
        self.check_profile(x0)?;
        let (prod, br) = self.best_response_map(tie_tol, cap)?;
        let start = profile_to_index(&self.sizes, x0);
        let trace = match metric {
            DynamicsMetric::Base => {
                solve_fixed_point(&br, &MetricView::Base(&prod), start, max_iter)?
            }
            DynamicsMetric::Path { eps } => {
                let pm = path_metric(&prod, eps)?;
                solve_fixed_point(&br, &MetricView::Derived(&pm), start, max_iter)?
            }
        };
        let (equilibrium, verified) = match trace.outcome {
            SolveOutcome::FixedPoint { at } => {
                let profile = index_to_profile(&self.sizes, at);
                let ok = self.no_improving_deviation(&profile, tie_tol)?;
                (Some(profile), ok)
            }
            _ => (None, false),
        };
        Ok(NashDynamics {
            trace,
            equilibrium,
            verified,
        })
    }

    /// Checks one of the three sufficient conditions for a contractive game
    /// on the product space and reports every sub-check.
    pub fn certify_contractive(
        &self,
        condition: CertifyCondition,
        params: &CertifyParams,
        cap: usize,
    ) -> Result<CertifyReport> {
        let tie_tol = params.tie_tol;
        let (prod, br) = self.best_response_map(tie_tol, cap)?;
        let mut checks = Vec::new();
        let certificate: ContractionCertificate;
        match condition {
            CertifyCondition::A => {
                let r = params
                    .r
                    .ok_or_else(|| Error::input("condition a needs a chain scale r"))?;
                checks.push(SpaceCheck {
                    name: "compactness of the product space".to_string(),
                    passed: true,
                    detail: "satisfied (finite)".to_string(),
                });
                let (chainable, classes) = is_r_chainable(&prod, r)?;
                checks.push(SpaceCheck {
                    name: format!("chainable at r={}", r),
                    passed: chainable,
                    detail: format!("{} chain class(es)", classes.len()),
                });
                certificate = local_certificate(&br, &MetricView::Base(&prod), r)?;
            }
            CertifyCondition::B => {
                let eps = params
                    .eps
                    .ok_or_else(|| Error::input("condition b needs a connectivity scale eps"))?;
                let nbhd = params
                    .neighborhood
                    .ok_or_else(|| Error::input("condition b needs a neighborhood argument"))?;
                checks.push(SpaceCheck {
                    name: "completeness of the product space".to_string(),
                    passed: true,
                    detail: "satisfied (finite)".to_string(),
                });
                let classes = components_at_scale(&prod, eps)?;
                checks.push(SpaceCheck {
                    name: format!("connected at eps={}", eps),
                    passed: classes.len() == 1,
                    detail: format!("{} component(s)", classes.len()),
                });
                certificate = pointwise_certificate(&br, &MetricView::Base(&prod), nbhd)?;
            }
            CertifyCondition::C => {
                let r = params
                    .r
                    .ok_or_else(|| Error::input("condition c needs an intrinsic scale r"))?;
                let nbhd = params
                    .neighborhood
                    .ok_or_else(|| Error::input("condition c needs a neighborhood argument"))?;
                checks.push(SpaceCheck {
                    name: "compactness of the intrinsic product space".to_string(),
                    passed: true,
                    detail: "satisfied (finite)".to_string(),
                });
                let classes = components_at_scale(&prod, r)?;
                checks.push(SpaceCheck {
                    name: format!("connected at r={}", r),
                    passed: classes.len() == 1,
                    detail: format!("{} component(s)", classes.len()),
                });
                let pm = path_metric(&prod, r)?;
                certificate = pointwise_certificate(&br, &MetricView::Derived(&pm), nbhd)?;
            }
        }
        let verdict = checks.iter().all(|c| c.passed) && certificate.holds;
        Ok(CertifyReport {
            condition,
            space_checks: checks,
            br_certificate: certificate,
            verdict,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DynamicsMetric {
    Base,
    Path { eps: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NashDynamics {
    pub trace: SolveTrace,
    pub equilibrium: Option<Vec<usize>>,
    pub verified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifyCondition {
    A,
    B,
    C,
}

impl std::str::FromStr for CertifyCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(CertifyCondition::A),
            "b" | "B" => Ok(CertifyCondition::B),
            "c" | "C" => Ok(CertifyCondition::C),
            other => Err(Error::input(format!(
                "unknown condition '{}', expected a, b, or c",
                other
            ))),
        }
    }
}

/// Scales for the certification conditions: r for a and c, eps and a
/// neighborhood for b, neighborhood for c as well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyParams {
    pub r: Option<f64>,
    pub eps: Option<f64>,
    pub neighborhood: Option<NeighborhoodSpec>,
    pub tie_tol: f64,
}

impl Default for CertifyParams {
    fn default() -> Self {
        CertifyParams {
            r: None,
            eps: None,
            neighborhood: None,
            tie_tol: DEFAULT_TIE_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub condition: CertifyCondition,
    pub space_checks: Vec<SpaceCheck>,
    pub br_certificate: ContractionCertificate,
    pub verdict: bool,
}
