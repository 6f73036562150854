//! The population clustering procedure on a known density.
//!
//! For an interval `(L, R)` the procedure maximises
//! `G_{L,R}(a) = mu_{a,R} - mu_{L,a}` over `a`, where `mu_{l,r}` is the
//! conditional mean on `(l, r)`. While the maximiser sits at an endpoint the
//! interval is truncated rather than split; on unbounded support this happens
//! along the balance curve `F(L, R_L) = mu_{L,R_L} - (L + R_L)/2 = 0`. The
//! first `L` on that curve at which `G_{L,R_L}` has an interior maximiser
//! `s` with `mu_{L,s} < (L+s)/2` and `mu_{s,R_L} > (s+R_L)/2` gives the split
//! `(L*, s*, R*)`.
//!
//! Everything here is deterministic numerics on a [`MixtureModel`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::MixtureModel;
use crate::numeric::{bisect, golden_section_max};

/// `G_{L,R}(a)`. At the endpoints `G(L) = mu_{L,R} - L` and
/// `G(R) = R - mu_{L,R}`.
pub fn criterion_g(m: &MixtureModel, l: f64, r: f64, a: f64) -> Result<f64> {
    if !(l <= a && a <= r && l < r) {
        return Err(Error::Domain(format!("need L <= a <= R with L < R, got ({l}, {a}, {r})")));
    }
    if a == l {
        return Ok(m.truncated_mean(l, r)? - l);
    }
    if a == r {
        return Ok(r - m.truncated_mean(l, r)?);
    }
    Ok(m.truncated_mean(a, r)? - m.truncated_mean(l, a)?)
}

/// `H_{L,R}(a)`, the derivative of `G_{L,R}` with the strictly positive
/// factor `f(a) P_{L,R} / (P_{L,a} P_{a,R})^2` removed:
///
/// `H = mu_{L,R} P_{L,a}^2 + (P_{a,R} - P_{L,a}) ∫_L^a x f - a P_{L,a} P_{a,R}`.
///
/// Only defined for all-normal mixtures, where every term is closed form.
pub fn normalized_derivative_h(m: &MixtureModel, l: f64, r: f64, a: f64) -> Result<f64> {
    if !m.is_gaussian() {
        return Err(Error::Unsupported(
            "normalized derivative requires an all-normal mixture".into(),
        ));
    }
    if !(l < a && a < r) {
        return Err(Error::Domain(format!("need L < a < R, got ({l}, {a}, {r})")));
    }
    let mu = m.truncated_mean(l, r)?;
    Ok(h_unchecked(m, mu, l, r, a))
}

fn h_unchecked(m: &MixtureModel, mu: f64, l: f64, r: f64, a: f64) -> f64 {
    let p_left = m.prob(l, a);
    let p_right = m.prob(a, r);
    let first_moment = m
        .partial_expectation(l, a)
        .expect("closed form for normal components");
    mu * p_left * p_left + (p_right - p_left) * first_moment - a * p_left * p_right
}

/// `F(L, R) = mu_{L,R} - (L + R)/2`, equal to `(G(L) - G(R)) / 2`.
pub fn balance_f(m: &MixtureModel, l: f64, r: f64) -> Result<f64> {
    if !(l < r) {
        return Err(Error::Domain(format!("need L < R, got ({l}, {r})")));
    }
    Ok(m.truncated_mean(l, r)? - 0.5 * (l + r))
}

/// Largest root `R_L <= r_hint` of `F(L, ·)`.
///
/// Scans downward from the hint, where `F` must be negative, until `F`
/// turns positive, then bisects to 1e-10.
pub fn solve_r_given_l(m: &MixtureModel, l: f64, r_hint: f64) -> Result<f64> {
    solve_r_with_step(m, l, r_hint, (r_hint - l) / 2000.0)
}

fn solve_r_with_step(m: &MixtureModel, l: f64, r_hint: f64, step: f64) -> Result<f64> {
    let no_balance = || Error::NoBalance { left: l, hint: r_hint };
    if !(r_hint > l) || !(step > 0.0) {
        return Err(no_balance());
    }
    let f = |r: f64| balance_f(m, l, r);
    let at_hint = f(r_hint).map_err(|_| no_balance())?;
    if at_hint >= 0.0 {
        return Err(no_balance());
    }
    let floor = l + 1e-9 * (1.0 + l.abs());
    let mut upper = r_hint;
    loop {
        let lower = (upper - step).max(floor);
        if lower >= upper {
            return Err(no_balance());
        }
        match f(lower) {
            Ok(v) if v > 0.0 => {
                let g = |r: f64| f(r).unwrap_or(f64::NAN);
                return bisect(g, lower, upper, 1e-10);
            }
            Ok(_) => {}
            // Zero mass below this point: no root further down.
            Err(_) => return Err(no_balance()),
        }
        if lower <= floor {
            return Err(no_balance());
        }
        upper = lower;
    }
}

/// The two balance residuals at a candidate split `s` of `(L, R)`:
/// `(mu_{L,s} - (L+s)/2, mu_{s,R} - (s+R)/2)`.
pub fn split_deltas(m: &MixtureModel, l: f64, s: f64, r: f64) -> Result<(f64, f64)> {
    Ok((balance_f(m, l, s)?, balance_f(m, s, r)?))
}

/// `min(P(L, s), P(s, R))`.
pub fn split_size(m: &MixtureModel, l: f64, s: f64, r: f64) -> Result<f64> {
    if !(l < s && s < r) {
        return Err(Error::Domain(format!("need L < s < R, got ({l}, {s}, {r})")));
    }
    Ok(m.prob(l, s).min(m.prob(s, r)))
}

/// Numerical settings for [`find_population_split_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationConfig {
    /// Step of the left-endpoint grid; `None` uses 1e-3 of the
    /// interquartile range.
    pub grid_step: Option<f64>,
    /// Unbounded left tails start the scan at this quantile.
    pub tail_clip: f64,
    /// Grid nodes used to bracket interior stationary points of `G`.
    pub interior_grid: usize,
    /// Run the procedure again on the split's sub-clusters.
    pub check_second_split: bool,
}

impl Default for PopulationConfig {
    fn default() -> Self {
        PopulationConfig {
            grid_step: None,
            tail_clip: 1e-6,
            interior_grid: 256,
            check_second_split: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SplitOutcome {
    NoSplit {
        d_min: Option<f64>,
    },
    Split {
        l_star: f64,
        s_star: f64,
        r_star: f64,
        d_min: Option<f64>,
    },
}

/// Result of running the population procedure on a mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationSplit {
    #[serde(flatten)]
    pub outcome: SplitOutcome,
    pub second_split_found: bool,
}

impl PopulationSplit {
    pub fn is_split(&self) -> bool {
        matches!(self.outcome, SplitOutcome::Split { .. })
    }

    /// `(L*, s*, R*)` when a split was found.
    pub fn triple(&self) -> Option<(f64, f64, f64)> {
        match self.outcome {
            SplitOutcome::Split { l_star, s_star, r_star, .. } => Some((l_star, s_star, r_star)),
            SplitOutcome::NoSplit { .. } => None,
        }
    }

    pub fn d_min(&self) -> Option<f64> {
        match self.outcome {
            SplitOutcome::Split { d_min, .. } | SplitOutcome::NoSplit { d_min } => d_min,
        }
    }
}

/// Runs the population procedure with default settings and the given left
/// endpoint grid step.
pub fn find_population_split(m: &MixtureModel, grid_step: f64) -> Result<PopulationSplit> {
    let cfg = PopulationConfig {
        grid_step: Some(grid_step),
        ..PopulationConfig::default()
    };
    find_population_split_with(m, &cfg)
}

pub fn find_population_split_with(m: &MixtureModel, cfg: &PopulationConfig) -> Result<PopulationSplit> {
    if let Some(step) = cfg.grid_step {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidConfig(format!("grid step must be positive, got {step}")));
        }
    }
    if !(cfg.tail_clip > 0.0 && cfg.tail_clip < 0.5) {
        return Err(Error::InvalidConfig(format!("tail clip {} outside (0, 0.5)", cfg.tail_clip)));
    }
    let step = match cfg.grid_step {
        Some(s) => s,
        None => 1e-3 * (m.quantile(0.75)? - m.quantile(0.25)?),
    };
    let minima = m.interior_minima();
    let (lo, hi) = m.support();
    let start = if lo.is_finite() { lo } else { m.quantile(cfg.tail_clip)? };
    let right = if hi.is_finite() { Some(hi) } else { None };

    let scanner = Scanner { m, step, cfg, minima: &minima };
    match scanner.scan(start, right)? {
        ScanEnd::Exhausted => Ok(PopulationSplit {
            outcome: SplitOutcome::NoSplit { d_min: minima.first().copied() },
            second_split_found: false,
        }),
        ScanEnd::Split { l, s, r } => {
            let d_min = minima
                .iter()
                .copied()
                .filter(|d| l < *d && *d < r)
                .min_by(|a, b| (a - s).abs().total_cmp(&(b - s).abs()));
            let second_split_found = cfg.check_second_split
                && [(l, s), (s, r)].into_iter().try_fold(false, |found, (a, b)| {
                    Ok::<_, Error>(found || matches!(scanner.scan(a, Some(b))?, ScanEnd::Split { .. }))
                })?;
            Ok(PopulationSplit {
                outcome: SplitOutcome::Split { l_star: l, s_star: s, r_star: r, d_min },
                second_split_found,
            })
        }
    }
}

enum ScanEnd {
    Split { l: f64, s: f64, r: f64 },
    Exhausted,
}

/// How the interval shrinks from one grid step to the next.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Move {
    /// `L` advances with `R` pinned.
    Left,
    /// `R` retreats with `L` pinned.
    Right,
    /// `L` advances and `R` follows `F(L, R_L) = 0`.
    Balanced,
}

struct Scanner<'a> {
    m: &'a MixtureModel,
    step: f64,
    cfg: &'a PopulationConfig,
    minima: &'a [f64],
}

impl Scanner<'_> {
    /// Follows the truncation path starting from `(start, right)`, with
    /// `right = None` meaning an unbounded right tail, until a split appears
    /// or the remaining interval is unimodal.
    fn scan(&self, start: f64, right: Option<f64>) -> Result<ScanEnd> {
        let (mut l, mut r) = match right {
            Some(hi) => (start, hi),
            None => {
                let hint = self.initial_hint(start)?;
                (start, solve_r_given_l(self.m, start, hint)?)
            }
        };
        let mut prev: Option<(f64, f64, Move)> = None;
        loop {
            if r - l <= self.step || !self.minima.iter().any(|&d| l < d && d < r) {
                // Unimodal restriction: truncation runs to collapse.
                return Ok(ScanEnd::Exhausted);
            }
            let maxima = GMaxima::locate(self.m, l, r, self.cfg.interior_grid)?;
            let balanced = prev.is_some_and(|p| p.2 == Move::Balanced);
            if let Some(s) = self.split_in(&maxima, l, r, balanced)? {
                return match prev {
                    Some((l0, r0, mv)) => self.refine(l0, r0, mv),
                    None => Ok(ScanEnd::Split { l, s, r }),
                };
            }
            let mv = self.next_move(&maxima, l, r)?;
            let (l1, r1) = self.advance_by(l, r, mv, self.step)?;
            prev = Some((l, r, mv));
            (l, r) = (l1, r1);
        }
    }

    fn next_move(&self, maxima: &GMaxima, l: f64, r: f64) -> Result<Move> {
        if maxima.slope_left > 0.0 {
            return Ok(Move::Left);
        }
        if maxima.slope_right < 0.0 {
            return Ok(Move::Right);
        }
        let f = balance_f(self.m, l, r)?;
        Ok(if f > 1e-12 * (1.0 + r - l) { Move::Left } else { Move::Balanced })
    }

    /// State reached after moving by `t` (at most one grid step) from
    /// `(l, r)`.
    fn advance_by(&self, l: f64, r: f64, mv: Move, t: f64) -> Result<(f64, f64)> {
        Ok(match mv {
            Move::Left => (l + t, r),
            Move::Right => (l, r - t),
            Move::Balanced => match self.next_r(l + t, r) {
                Ok(r1) => (l + t, r1),
                // The balance curve ended: the right side keeps shrinking.
                Err(Error::NoBalance { .. }) => (l, r - t),
                Err(e) => return Err(e),
            },
        })
    }

    fn initial_hint(&self, l: f64) -> Result<f64> {
        let mut hint = self.m.quantile(1.0 - self.cfg.tail_clip)?.max(l + 1.0);
        for _ in 0..64 {
            if balance_f(self.m, l, hint)? < 0.0 {
                return Ok(hint);
            }
            hint += hint - l;
        }
        Err(Error::NoBalance { left: l, hint })
    }

    fn next_r(&self, l: f64, r_prev: f64) -> Result<f64> {
        let margin = 1e-7 * (1.0 + r_prev.abs());
        solve_r_with_step(self.m, l, r_prev + margin, self.step)
    }

    /// A maximiser of `G_{L,R}` separated from both endpoints that beats
    /// them. On the balance curve this is the `delta_1 < 0 < delta_2` test.
    fn split_in(&self, maxima: &GMaxima, l: f64, r: f64, balanced: bool) -> Result<Option<f64>> {
        let Some((s, g_s)) = maxima.separated else {
            return Ok(None);
        };
        let wins = if balanced {
            let (d1, d2) = split_deltas(self.m, l, s, r)?;
            d1 < 0.0 && d2 > 0.0
        } else {
            g_s > maxima.left_value.max(maxima.right_value)
        };
        Ok(wins.then_some(s))
    }

    /// Bisects on the distance moved from `(l0, r0)` for the first state
    /// with a split.
    fn refine(&self, l0: f64, r0: f64, mv: Move) -> Result<ScanEnd> {
        let balanced = mv == Move::Balanced;
        let probe = |t: f64| -> Result<Option<(f64, f64, f64)>> {
            let (l, r) = self.advance_by(l0, r0, mv, t)?;
            let maxima = GMaxima::locate(self.m, l, r, self.cfg.interior_grid)?;
            Ok(self.split_in(&maxima, l, r, balanced)?.map(|s| (l, s, r)))
        };
        let (mut lo, mut hi) = (0.0, self.step);
        let mut found = probe(hi)?;
        let tol = 1e-11 * (1.0 + l0.abs().max(r0.abs()));
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            match probe(mid)? {
                Some(t) => {
                    hi = mid;
                    found = Some(t);
                }
                None => lo = mid,
            }
        }
        let (l, s, r) = found.ok_or_else(|| {
            Error::NonConvergence(format!("split vanished during refinement near L = {l0}, R = {r0}"))
        })?;
        Ok(ScanEnd::Split { l, s, r })
    }
}

/// Local maxima of `G_{L,R}` sorted by how they relate to the endpoints.
///
/// A maximum reached by climbing from an endpoint (because `G` increases
/// away from it) belongs to that endpoint; any other interior maximum is
/// separated.
struct GMaxima {
    slope_left: f64,
    slope_right: f64,
    /// Largest value of `G` attributable to each endpoint.
    left_value: f64,
    right_value: f64,
    /// Best separated maximum `(s, G(s))`.
    separated: Option<(f64, f64)>,
}

impl GMaxima {
    fn locate(m: &MixtureModel, l: f64, r: f64, grid: usize) -> Result<Self> {
        let frame = Frame::new(m, l, r)?;
        let maxima = frame.local_maxima(grid)?;
        let g = |a: f64| criterion_g(m, l, r, a);

        let mut inner = &maxima[..];
        let left_value = match (frame.slope_left > 0.0, inner.split_first()) {
            (true, Some((&s, rest))) => {
                inner = rest;
                g(s)?
            }
            _ => g(l)?,
        };
        let right_value = match (frame.slope_right < 0.0, inner.split_last()) {
            (true, Some((&s, rest))) => {
                inner = rest;
                g(s)?
            }
            (true, None) => left_value.max(g(r)?),
            _ => g(r)?,
        };
        let mut separated: Option<(f64, f64)> = None;
        for &s in inner {
            let v = g(s)?;
            if separated.is_none_or(|(_, best)| v > best) {
                separated = Some((s, v));
            }
        }
        Ok(GMaxima {
            slope_left: frame.slope_left,
            slope_right: frame.slope_right,
            left_value,
            right_value,
            separated,
        })
    }
}

/// An interval `(L, R)` with the quantities shared by every evaluation of
/// `G_{L,R}` on it.
struct Frame<'a> {
    m: &'a MixtureModel,
    l: f64,
    r: f64,
    mu: f64,
    p_total: f64,
    slope_left: f64,
    slope_right: f64,
}

impl<'a> Frame<'a> {
    fn new(m: &'a MixtureModel, l: f64, r: f64) -> Result<Self> {
        let p_total = m.prob(l, r);
        if !(p_total > 0.0) {
            return Err(Error::Domain(format!("interval ({l}, {r}) has zero probability")));
        }
        let mu = m.truncated_mean(l, r)?;
        Ok(Frame {
            m,
            l,
            r,
            mu,
            p_total,
            slope_left: m.density(l) * (mu - l) / p_total - 0.5,
            slope_right: 0.5 - m.density(r) * (r - mu) / p_total,
        })
    }

    /// Interior local maxima of `G_{L,R}`, ascending.
    ///
    /// The sign of `G'` is tracked from `L` to `R`: exactly at the
    /// endpoints, through `H` on a grid for all-normal mixtures, and through
    /// differences of `G` otherwise. Grid nodes cutting off less than 1e-9
    /// of the interval's mass are skipped, since both routes are pure
    /// rounding noise there.
    fn local_maxima(&self, grid: usize) -> Result<Vec<f64>> {
        let Frame { m, l, r, mu, .. } = *self;
        let grid = grid.max(8);
        let width = r - l;
        let cut = 1e-9 * self.p_total;
        let nodes: Vec<f64> = (1..grid)
            .map(|i| l + width * i as f64 / grid as f64)
            .filter(|&a| m.prob(l, a) > cut && m.prob(a, r) > cut)
            .collect();
        let g = |a: f64| criterion_g(m, l, r, a).unwrap_or(f64::NEG_INFINITY);
        let h = |a: f64| h_unchecked(m, mu, l, r, a);

        let interior: Vec<f64> = if m.is_gaussian() {
            nodes.iter().map(|&a| h(a)).collect()
        } else {
            let values: Vec<f64> = nodes.iter().map(|&a| g(a)).collect();
            (0..nodes.len())
                .map(|i| values[(i + 1).min(nodes.len() - 1)] - values[i.saturating_sub(1)])
                .collect()
        };
        let xs: Vec<f64> = std::iter::once(l).chain(nodes).chain(std::iter::once(r)).collect();
        let signs: Vec<f64> = std::iter::once(self.slope_left)
            .chain(interior)
            .chain(std::iter::once(self.slope_right))
            .collect();

        let last = xs.len() - 1;
        let mut out = Vec::new();
        for i in 0..last {
            if !(signs[i] > 0.0 && signs[i + 1] <= 0.0) {
                continue;
            }
            let s = if m.is_gaussian() && i > 0 && i + 1 < last {
                bisect(h, xs[i], xs[i + 1], 1e-12 * (1.0 + width))?
            } else {
                let inset = 1e-9 * width;
                let lo = xs[i.saturating_sub(1)].max(l + inset);
                let hi = xs[(i + 2).min(last)].min(r - inset);
                golden_section_max(g, lo, hi, 1e-10 * (1.0 + width))
            };
            out.push(s);
        }
        Ok(out)
    }
}

/// Interior local maximiser of `G_{L,R}` with the largest criterion value,
/// whether or not it is separated from the endpoints.
pub fn interior_maximizer(m: &MixtureModel, l: f64, r: f64, grid: usize) -> Result<Option<f64>> {
    let mut best: Option<(f64, f64)> = None;
    for s in Frame::new(m, l, r)?.local_maxima(grid)? {
        let value = criterion_g(m, l, r, s)?;
        if best.is_none_or(|(_, v)| value > v) {
            best = Some((s, value));
        }
    }
    Ok(best.map(|(s, _)| s))
}

/// Slope of `G_{L,R}` at the endpoints:
/// `G'(L) = f(L)(mu_{L,R} - L)/P_{L,R} - 1/2` and
/// `G'(R) = 1/2 - f(R)(R - mu_{L,R})/P_{L,R}`.
pub fn endpoint_slopes(m: &MixtureModel, l: f64, r: f64) -> Result<(f64, f64)> {
    let frame = Frame::new(m, l, r)?;
    Ok((frame.slope_left, frame.slope_right))
}

/// Misclassification of the population split against the Bayes boundary of
/// a two-component mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    /// Boundary `s` with `w1 f1(s) = w2 f2(s)`, between the two centres.
    pub s_mc: f64,
    /// `MCE(s_mc)` where `MCE(s) = w1 P(X1 > s) + w2 P(X2 <= s)`.
    pub mce_oracle: f64,
    /// `MCE(s*)`, or the minority weight when there is no split.
    pub mce_procedure: f64,
    /// Probability mass on which the procedure's labelling disagrees with
    /// the oracle rule: the mass between `s*` and `s_mc`, or the mass on
    /// the oracle's minority side when everything stays in one cluster.
    pub excess: f64,
}

pub fn misclassification_analysis(m: &MixtureModel, split: &PopulationSplit) -> Result<McReport> {
    if m.components().len() != 2 {
        return Err(Error::Unsupported(format!(
            "misclassification analysis needs exactly two components, got {}",
            m.components().len()
        )));
    }
    let mut terms: Vec<_> = m.terms().map(|(w, c)| (w, *c)).collect();
    terms.sort_by(|a, b| a.1.centre().total_cmp(&b.1.centre()));
    let [(w1, c1), (w2, c2)] = [terms[0], terms[1]];
    let (lo, hi) = (c1.centre(), c2.centre());

    let log_ratio = |s: f64| (w1 * c1.pdf(s)).ln() - (w2 * c2.pdf(s)).ln();
    let s_mc = if lo == hi {
        lo
    } else {
        bisect(log_ratio, lo, hi, 1e-10)?
    };
    let mce = |s: f64| w1 * c1.sf(s) + w2 * c2.cdf(s);
    let mce_oracle = mce(s_mc);
    let (mce_procedure, excess) = match split.outcome {
        SplitOutcome::Split { s_star, .. } => {
            let (a, b) = if s_star < s_mc { (s_star, s_mc) } else { (s_mc, s_star) };
            (mce(s_star), m.prob(a, b))
        }
        SplitOutcome::NoSplit { .. } => {
            // One cluster, labelled as the majority component.
            let minority_side = if w1 <= w2 { m.cdf(s_mc) } else { m.sf(s_mc) };
            (w1.min(w2), minority_side)
        }
    };
    Ok(McReport { s_mc, mce_oracle, mce_procedure, excess })
}

/// One row of the two-normal summary table for
/// `p1 N(mu1, 1) + p2 N(mu2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub p1: f64,
    pub p2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub d_min: Option<f64>,
    pub s_star: Option<f64>,
    #[serde(rename = "L_star")]
    pub l_star: Option<f64>,
    #[serde(rename = "R_star")]
    pub r_star: Option<f64>,
    pub second_split: Option<bool>,
    pub s_mc: f64,
    pub excess_mce: f64,
}

pub fn table1_row(p1: f64, mu1: f64, mu2: f64, cfg: &PopulationConfig) -> Result<Table1Row> {
    table1_row_for(&MixtureModel::two_normals(p1, mu1, 1.0 - p1, mu2)?, cfg)
}

/// Table row for any two-component mixture; `p1`/`mu1` describe the
/// component with the lower centre.
pub fn table1_row_for(m: &MixtureModel, cfg: &PopulationConfig) -> Result<Table1Row> {
    let mut terms: Vec<(f64, f64)> = m.terms().map(|(w, c)| (w, c.centre())).collect();
    if terms.len() != 2 {
        return Err(Error::Unsupported("table rows need exactly two components".into()));
    }
    terms.sort_by(|a, b| a.1.total_cmp(&b.1));
    let split = find_population_split_with(m, cfg)?;
    let mc = misclassification_analysis(m, &split)?;
    let triple = split.triple();
    Ok(Table1Row {
        p1: terms[0].0,
        p2: terms[1].0,
        mu1: terms[0].1,
        mu2: terms[1].1,
        d_min: split.d_min(),
        s_star: triple.map(|t| t.1),
        l_star: triple.map(|t| t.0),
        r_star: triple.map(|t| t.2),
        second_split: split.is_split().then_some(split.second_split_found),
        s_mc: mc.s_mc,
        excess_mce: mc.excess,
    })
}

/// The full grid: separations 9 down to 3 crossed with `p1` from 0.50 down
/// to 0.10, means placed symmetrically about zero.
pub fn table1(cfg: &PopulationConfig) -> Result<Vec<Table1Row>> {
    use rayon::prelude::*;
    let cases: Vec<(f64, f64)> = (3..=9)
        .rev()
        .flat_map(|gap| (0..9).map(move |i| (0.5 - 0.05 * i as f64, gap as f64)))
        .collect();
    cases
        .par_iter()
        .map(|&(p1, gap)| table1_row(p1, -gap / 2.0, gap / 2.0, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym() -> MixtureModel {
        MixtureModel::two_normals(0.5, -2.0, 0.5, 2.0).unwrap()
    }

    #[test]
    fn g_symmetry_and_endpoints() {
        let m = sym();
        let g0 = criterion_g(&m, -6.0, 6.0, 0.0).unwrap();
        assert!((g0 - 2.0 * m.truncated_mean(0.0, 6.0).unwrap()).abs() < 1e-12);
        let (l, r) = (-3.0, 5.0);
        let sum = criterion_g(&m, l, r, l).unwrap() + criterion_g(&m, l, r, r).unwrap();
        assert!((sum - (r - l)).abs() < 1e-12);
        assert!(criterion_g(&m, 1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn h_vanishes_at_symmetric_centre() {
        let h = normalized_derivative_h(&sym(), -5.0, 5.0, 0.0).unwrap();
        assert!(h.abs() < 1e-14, "{h}");
        let beta: MixtureModel = "beta(2,4)".parse().unwrap();
        assert!(matches!(
            normalized_derivative_h(&beta, 0.0, 1.0, 0.5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn balance_identities() {
        let m = sym();
        assert!(balance_f(&m, -3.0, 3.0).unwrap().abs() < 1e-14);
        let n01: MixtureModel = "normal(0,1)".parse().unwrap();
        assert!(balance_f(&n01, -1.0, 3.0).unwrap() < 0.0);
        let (l, r) = (-2.5, 4.0);
        let f = balance_f(&m, l, r).unwrap();
        let g = (criterion_g(&m, l, r, l).unwrap() - criterion_g(&m, l, r, r).unwrap()) / 2.0;
        assert!((f - g).abs() < 1e-12);
    }

    #[test]
    fn balance_curve_is_mirror_for_symmetric_densities() {
        let n01: MixtureModel = "normal(0,1)".parse().unwrap();
        let r = solve_r_given_l(&n01, -3.0, 10.0).unwrap();
        assert!((r - 3.0).abs() < 1e-8, "{r}");
        for l in [-5.0, -3.5] {
            let r = solve_r_given_l(&sym(), l, 12.0).unwrap();
            assert!((r + l).abs() < 1e-8, "{l} -> {r}");
        }
    }

    #[test]
    fn no_balance_below_hint() {
        let n01: MixtureModel = "normal(0,1)".parse().unwrap();
        // Hint below the true root: F(L, hint) > 0.
        assert!(matches!(
            solve_r_given_l(&n01, -3.0, 1.0),
            Err(Error::NoBalance { .. })
        ));
    }

    #[test]
    fn split_size_bounds() {
        let m = sym();
        let size = split_size(&m, -4.0, 0.0, 4.0).unwrap();
        assert!((size - m.prob(-4.0, 0.0)).abs() < 1e-15);
        assert!((m.prob(-4.0, 0.0) - m.prob(0.0, 4.0)).abs() < 1e-15);
        assert!(split_size(&m, 0.0, -1.0, 4.0).is_err());
    }

    #[test]
    fn unimodal_densities_do_not_split() {
        for spec in ["normal(0,1)", "beta(2,4)", "chisq(3)"] {
            let m: MixtureModel = spec.parse().unwrap();
            let split = find_population_split_with(&m, &PopulationConfig::default()).unwrap();
            assert!(!split.is_split(), "{spec}");
            assert_eq!(split.d_min(), None);
        }
    }

    #[test]
    fn symmetric_split_at_zero() {
        let split = find_population_split_with(&sym(), &PopulationConfig::default()).unwrap();
        let (l, s, r) = split.triple().expect("split");
        assert!(s.abs() < 1e-6, "{s}");
        assert!((l + r).abs() < 1e-6);
        assert!(!split.second_split_found);
    }

    #[test]
    fn mc_report_symmetric() {
        let m = sym();
        let split = find_population_split_with(&m, &PopulationConfig::default()).unwrap();
        let rep = misclassification_analysis(&m, &split).unwrap();
        assert!(rep.s_mc.abs() < 1e-9);
        assert!(rep.excess < 1e-6);
        assert!(rep.excess >= rep.mce_procedure - rep.mce_oracle - 1e-9);
        let three: MixtureModel = "normal(-3,1)+normal(0,1)+normal(3,1)".parse().unwrap();
        assert!(matches!(
            misclassification_analysis(&three, &split),
            Err(Error::Unsupported(_))
        ));
    }
}
