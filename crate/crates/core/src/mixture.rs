//! One-dimensional mixture distributions.
//!
//! A [`MixtureModel`] is a weighted sum of [`Component`]s. All-normal
//! mixtures get closed-form partial expectations; every other kind falls
//! back to adaptive quadrature.
//!
//! Mixtures have a compact text form, accepted by [`str::parse`] and
//! produced by `Display`:
//!
//! ```text
//! mixture   := term ( "+" term )*
//! term      := [ weight "*" ] kind "(" number ( "," number )* ")"
//! weight    := number [ "/" number ]
//! kind      := normal(mean, sd)     | n(mean, sd)
//!            | t(df, location)      | student_t(df, location)
//!            | laplace(location, rate) | dexp(location[, rate])
//!            | beta(a, b)
//!            | chisq(df)            | chi_square(df)
//! ```
//!
//! Whitespace is ignored. Weights are either all omitted (equal weights) or
//! all present and summing to one.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta as BetaDist, ChiSquared as ChiSqDist, Distribution, Normal as NormalDist, StudentT};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{Error, Result};
use crate::numeric::{bisect, integrate};

const QUAD_TOL: f64 = 1e-10;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;

/// A single mixture component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    Normal { mean: f64, sd: f64 },
    /// Standard Student-t with `df` degrees of freedom shifted to
    /// `location`; `df = 1` is the Cauchy distribution.
    StudentT { df: f64, location: f64 },
    Laplace { location: f64, rate: f64 },
    Beta { a: f64, b: f64 },
    ChiSquare { df: f64 },
}

pub(crate) fn std_normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / SQRT_2)
}

pub(crate) fn std_normal_sf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(z / SQRT_2)
}

pub(crate) fn std_normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

impl Component {
    pub fn normal(mean: f64, sd: f64) -> Self {
        Component::Normal { mean, sd }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |cond: bool, what: &str| {
            if cond {
                Ok(())
            } else {
                Err(Error::Domain(format!("invalid component {self}: {what}")))
            }
        };
        match *self {
            Component::Normal { mean, sd } => {
                ok(mean.is_finite(), "mean must be finite")?;
                ok(sd.is_finite() && sd > 0.0, "sd must be positive")
            }
            Component::StudentT { df, location } => {
                ok(location.is_finite(), "location must be finite")?;
                ok(df.is_finite() && df > 0.0, "df must be positive")
            }
            Component::Laplace { location, rate } => {
                ok(location.is_finite(), "location must be finite")?;
                ok(rate.is_finite() && rate > 0.0, "rate must be positive")
            }
            Component::Beta { a, b } => ok(
                a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0,
                "shape parameters must be positive",
            ),
            Component::ChiSquare { df } => ok(df.is_finite() && df > 0.0, "df must be positive"),
        }
    }

    /// Closed support `[lo, hi]`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Component::Beta { .. } => (0.0, 1.0),
            Component::ChiSquare { .. } => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, Component::Normal { .. })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Component::Normal { mean, sd } => std_normal_pdf((x - mean) / sd) / sd,
            Component::StudentT { df, location } => {
                let t = x - location;
                let ln_c = ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * PI).ln();
                (ln_c - (df + 1.0) / 2.0 * (t * t / df).ln_1p()).exp()
            }
            Component::Laplace { location, rate } => 0.5 * rate * (-rate * (x - location).abs()).exp(),
            Component::Beta { a, b } => {
                if !(0.0..=1.0).contains(&x) {
                    return 0.0;
                }
                let ln_b = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
                if x == 0.0 || x == 1.0 {
                    let edge_exp = if x == 0.0 { a } else { b };
                    return match edge_exp.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Greater) => 0.0,
                        Some(std::cmp::Ordering::Equal) => (-ln_b).exp(),
                        _ => f64::INFINITY,
                    };
                }
                ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_b).exp()
            }
            Component::ChiSquare { df } => {
                if x < 0.0 {
                    return 0.0;
                }
                let k = df / 2.0;
                if x == 0.0 {
                    return match k.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Greater) => 0.0,
                        Some(std::cmp::Ordering::Equal) => 0.5,
                        _ => f64::INFINITY,
                    };
                }
                ((k - 1.0) * x.ln() - x / 2.0 - k * 2f64.ln() - ln_gamma(k)).exp()
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        match *self {
            Component::Normal { mean, sd } => std_normal_cdf((x - mean) / sd),
            Component::StudentT { df, location } => {
                let t = x - location;
                if df == 1.0 {
                    return 0.5 + t.atan() / PI;
                }
                let tail = 0.5 * beta_reg(df / 2.0, 0.5, df / (df + t * t));
                if t > 0.0 { 1.0 - tail } else { tail }
            }
            Component::Laplace { location, rate } => {
                let z = rate * (x - location);
                if z < 0.0 { 0.5 * z.exp() } else { 1.0 - 0.5 * (-z).exp() }
            }
            Component::Beta { a, b } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    beta_reg(a, b, x)
                }
            }
            Component::ChiSquare { df } => {
                if x <= 0.0 { 0.0 } else { gamma_lr(df / 2.0, x / 2.0) }
            }
        }
    }

    /// Survival function `P(X > x)`, accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return 1.0;
        }
        if x == f64::INFINITY {
            return 0.0;
        }
        match *self {
            Component::Normal { mean, sd } => std_normal_sf((x - mean) / sd),
            Component::StudentT { df, location } => {
                Component::StudentT { df, location: 0.0 }.cdf(location - x)
            }
            Component::Laplace { location, rate } => {
                let z = rate * (x - location);
                if z > 0.0 { 0.5 * (-z).exp() } else { 1.0 - 0.5 * z.exp() }
            }
            Component::Beta { a, b } => {
                if x <= 0.0 {
                    1.0
                } else if x >= 1.0 {
                    0.0
                } else {
                    beta_reg(b, a, 1.0 - x)
                }
            }
            Component::ChiSquare { df } => {
                if x <= 0.0 { 1.0 } else { gamma_ur(df / 2.0, x / 2.0) }
            }
        }
    }

    /// `P(l < X < r)`, choosing the tail representation that avoids
    /// cancellation.
    pub fn prob(&self, l: f64, r: f64) -> f64 {
        if r <= l {
            return 0.0;
        }
        let median = self.centre();
        let p = if l >= median {
            self.sf(l) - self.sf(r)
        } else {
            self.cdf(r) - self.cdf(l)
        };
        p.max(0.0)
    }

    /// A central location: the median for symmetric kinds, the mean otherwise.
    pub fn centre(&self) -> f64 {
        match *self {
            Component::Normal { mean, .. } => mean,
            Component::StudentT { location, .. } => location,
            Component::Laplace { location, .. } => location,
            Component::Beta { a, b } => a / (a + b),
            Component::ChiSquare { df } => df,
        }
    }

    /// `∫_l^r x f(x) dx`; closed form for normals, quadrature otherwise.
    pub fn partial_expectation(&self, l: f64, r: f64) -> Result<f64> {
        if r <= l {
            return Ok(0.0);
        }
        match *self {
            Component::Normal { mean, sd } => Ok(normal_partial_expectation(mean, sd, l, r, self.prob(l, r))),
            Component::StudentT { df, .. } if df <= 1.0 && (l.is_infinite() || r.is_infinite()) => {
                Err(Error::Domain(format!(
                    "first moment of {self} diverges on ({l}, {r})"
                )))
            }
            _ => self.partial_expectation_quadrature(l, r),
        }
    }

    /// Quadrature route for `∫_l^r x f(x) dx`, for any kind.
    pub fn partial_expectation_quadrature(&self, l: f64, r: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        let (a, b) = (l.max(lo), r.min(hi));
        if b <= a {
            return Ok(0.0);
        }
        // Split at the component's centre so peaks are not straddled by a
        // single transformed panel.
        let c = self.centre().clamp(a, b);
        let f = |x: f64| x * self.pdf(x);
        Ok(integrate(f, a, c, QUAD_TOL / 2.0)? + integrate(f, c, b, QUAD_TOL / 2.0)?)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Component::Normal { mean, sd } => NormalDist::new(mean, sd).expect("validated").sample(rng),
            Component::StudentT { df, location } => {
                location + StudentT::new(df).expect("validated").sample(rng)
            }
            Component::Laplace { location, rate } => {
                let u: f64 = rng.random::<f64>() - 0.5;
                location - u.signum() * (1.0 - 2.0 * u.abs()).ln() / rate
            }
            Component::Beta { a, b } => BetaDist::new(a, b).expect("validated").sample(rng),
            Component::ChiSquare { df } => ChiSqDist::new(df).expect("validated").sample(rng),
        }
    }
}

fn normal_partial_expectation(mean: f64, sd: f64, l: f64, r: f64, prob: f64) -> f64 {
    // ∫ x φ((x-μ)/σ)/σ dx = μ Φ((x-μ)/σ) - σ φ((x-μ)/σ)
    let phi = |x: f64| {
        if x.is_infinite() { 0.0 } else { std_normal_pdf((x - mean) / sd) }
    };
    mean * prob - sd * (phi(r) - phi(l))
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Normal { mean, sd } => write!(f, "normal({mean},{sd})"),
            Component::StudentT { df, location } => write!(f, "t({df},{location})"),
            Component::Laplace { location, rate } => write!(f, "laplace({location},{rate})"),
            Component::Beta { a, b } => write!(f, "beta({a},{b})"),
            Component::ChiSquare { df } => write!(f, "chisq({df})"),
        }
    }
}

/// Whether a stationary point of the density is a peak or a trough.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Mode,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub location: f64,
    pub kind: ExtremumKind,
}

/// Weighted mixture of one-dimensional components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MixtureModel {
    weights: Vec<f64>,
    components: Vec<Component>,
}

impl MixtureModel {
    /// `terms` are `(weight, component)` pairs; weights must be positive and
    /// sum to one within 1e-9 (they are renormalised exactly).
    pub fn new(terms: Vec<(f64, Component)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("mixture needs at least one component".into()));
        }
        for (w, c) in &terms {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::Domain(format!("weight {w} is not positive")));
            }
            c.validate()?;
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("weights sum to {total}, not 1")));
        }
        let (weights, components) = terms.into_iter().map(|(w, c)| (w / total, c)).unzip();
        Ok(MixtureModel { weights, components })
    }

    /// Equal-weight mixture.
    pub fn uniform(components: Vec<Component>) -> Result<Self> {
        let w = 1.0 / components.len().max(1) as f64;
        Self::new(components.into_iter().map(|c| (w, c)).collect())
    }

    pub fn single(component: Component) -> Result<Self> {
        Self::new(vec![(1.0, component)])
    }

    /// `w1 N(mu1, 1) + w2 N(mu2, 1)`.
    pub fn two_normals(w1: f64, mu1: f64, w2: f64, mu2: f64) -> Result<Self> {
        Self::new(vec![(w1, Component::normal(mu1, 1.0)), (w2, Component::normal(mu2, 1.0))])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn terms(&self) -> impl Iterator<Item = (f64, &Component)> {
        self.weights.iter().copied().zip(self.components.iter())
    }

    pub fn is_gaussian(&self) -> bool {
        self.components.iter().all(Component::is_normal)
    }

    /// Union of component supports.
    pub fn support(&self) -> (f64, f64) {
        self.components.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            let (a, b) = c.support();
            (lo.min(a), hi.max(b))
        })
    }

    pub fn density(&self, x: f64) -> f64 {
        self.terms().map(|(w, c)| w * c.pdf(x)).sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.terms().map(|(w, c)| w * c.cdf(x)).sum::<f64>().clamp(0.0, 1.0)
    }

    pub fn sf(&self, x: f64) -> f64 {
        self.terms().map(|(w, c)| w * c.sf(x)).sum::<f64>().clamp(0.0, 1.0)
    }

    /// Probability of the interval `(l, r)`.
    pub fn prob(&self, l: f64, r: f64) -> f64 {
        self.terms().map(|(w, c)| w * c.prob(l, r)).sum()
    }

    /// `∫_l^r x f(x) dx`.
    pub fn partial_expectation(&self, l: f64, r: f64) -> Result<f64> {
        let mut total = 0.0;
        for (w, c) in self.terms() {
            total += w * c.partial_expectation(l, r)?;
        }
        Ok(total)
    }

    /// `∫_l^r x f(x) dx` by quadrature for every component, closed forms
    /// ignored.
    pub fn partial_expectation_quadrature(&self, l: f64, r: f64) -> Result<f64> {
        let mut total = 0.0;
        for (w, c) in self.terms() {
            total += w * c.partial_expectation_quadrature(l, r)?;
        }
        Ok(total)
    }

    /// Conditional mean on `(l, r)`.
    pub fn truncated_mean(&self, l: f64, r: f64) -> Result<f64> {
        if !(l < r) {
            return Err(Error::Domain(format!("interval ({l}, {r}) is empty")));
        }
        let p = self.prob(l, r);
        if !(p > 0.0) {
            return Err(Error::Domain(format!("interval ({l}, {r}) has zero probability")));
        }
        let mean = self.partial_expectation(l, r)? / p;
        // Rounding in far tails can push the ratio marginally outside.
        let (lo, hi) = self.support();
        Ok(mean.clamp(l.max(lo), r.min(hi)))
    }

    /// Quantile by bisection on the CDF.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0 < p && p < 1.0) {
            return Err(Error::Domain(format!("quantile level {p} outside (0, 1)")));
        }
        let (lo_s, hi_s) = self.support();
        let centre = self.terms().map(|(w, c)| w * c.centre()).sum::<f64>();
        let mut lo = if lo_s.is_finite() { lo_s } else { centre - 1.0 };
        let mut hi = if hi_s.is_finite() { hi_s } else { centre + 1.0 };
        let mut step = 1.0;
        while lo_s.is_infinite() && self.cdf(lo) > p {
            lo -= step;
            step *= 2.0;
        }
        step = 1.0;
        while hi_s.is_infinite() && self.sf(hi) > 1.0 - p {
            hi += step;
            step *= 2.0;
        }
        let g = |x: f64| {
            if p < 0.5 { self.cdf(x) - p } else { (1.0 - p) - self.sf(x) }
        };
        bisect(g, lo, hi, 1e-12 * (1.0 + hi.abs().max(lo.abs())))
    }

    /// `n` draws, deterministic in `(self, n, seed)`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, n)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let mut cumulative = Vec::with_capacity(self.weights.len());
        let mut acc = 0.0;
        for w in &self.weights {
            acc += w;
            cumulative.push(acc);
        }
        (0..n)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * acc;
                let idx = cumulative.partition_point(|&c| c <= u).min(self.components.len() - 1);
                self.components[idx].sample(rng)
            })
            .collect()
    }

    /// Interior modes and minima of the density, ascending.
    pub fn find_local_extrema(&self) -> Vec<Extremum> {
        self.find_local_extrema_with(4096)
    }

    /// As [`Self::find_local_extrema`] with `grid_points` grid nodes across
    /// the central 99.9% of the mass.
    pub fn find_local_extrema_with(&self, grid_points: usize) -> Vec<Extremum> {
        let (Ok(lo), Ok(hi)) = (self.quantile(0.0005), self.quantile(0.9995)) else {
            return Vec::new();
        };
        let grid_points = grid_points.max(8);
        let step = (hi - lo) / (grid_points - 1) as f64;
        let h = (step * 1e-3).max(1e-7 * (1.0 + lo.abs().max(hi.abs())));
        let (s_lo, s_hi) = self.support();
        let slope = |x: f64| {
            let h = h.min(0.5 * (x - s_lo)).min(0.5 * (s_hi - x));
            (self.density(x + h) - self.density(x - h)) / (2.0 * h)
        };

        let mut out = Vec::new();
        let mut x_prev = lo;
        let mut s_prev = slope(lo);
        for i in 1..grid_points {
            let x = lo + step * i as f64;
            let s = slope(x);
            let rising_to_falling = s_prev > 0.0 && s <= 0.0;
            let falling_to_rising = s_prev < 0.0 && s >= 0.0;
            if rising_to_falling || falling_to_rising {
                let loc = bisect(slope, x_prev, x, 1e-9).unwrap_or(0.5 * (x_prev + x));
                let kind = if rising_to_falling { ExtremumKind::Mode } else { ExtremumKind::Min };
                // Plateaus can report the same turning point twice.
                if out.last().is_none_or(|e: &Extremum| e.kind != kind) {
                    out.push(Extremum { location: loc, kind });
                }
            }
            x_prev = x;
            s_prev = s;
        }
        out
    }

    /// Interior local minima of the density, ascending.
    pub fn interior_minima(&self) -> Vec<f64> {
        self.find_local_extrema()
            .into_iter()
            .filter(|e| e.kind == ExtremumKind::Min)
            .map(|e| e.location)
            .collect()
    }

    /// Interior local maxima of the density, ascending.
    pub fn interior_modes(&self) -> Vec<f64> {
        self.find_local_extrema()
            .into_iter()
            .filter(|e| e.kind == ExtremumKind::Mode)
            .map(|e| e.location)
            .collect()
    }
}

impl fmt::Display for MixtureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (w, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{w}*{c}")?;
        }
        Ok(())
    }
}

impl From<MixtureModel> for String {
    fn from(m: MixtureModel) -> Self {
        m.to_string()
    }
}

impl TryFrom<String> for MixtureModel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn parse_number(s: &str) -> Result<f64> {
    let v = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.parse().map_err(|_| Error::MixtureParse(format!("bad number '{s}'")))?;
            let den: f64 = den.parse().map_err(|_| Error::MixtureParse(format!("bad number '{s}'")))?;
            num / den
        }
        None => s.parse().map_err(|_| Error::MixtureParse(format!("bad number '{s}'")))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::MixtureParse(format!("number '{s}' is not finite")))
    }
}

fn parse_component(kind: &str, args: &[f64]) -> Result<Component> {
    let want = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::MixtureParse(format!("{kind} takes {n} argument(s), got {}", args.len())))
        }
    };
    let c = match kind.to_ascii_lowercase().as_str() {
        "normal" | "n" | "gaussian" => {
            want(2)?;
            Component::Normal { mean: args[0], sd: args[1] }
        }
        "t" | "student_t" | "studentt" => {
            want(2)?;
            Component::StudentT { df: args[0], location: args[1] }
        }
        "laplace" | "dexp" => {
            if args.len() == 1 {
                Component::Laplace { location: args[0], rate: 1.0 }
            } else {
                want(2)?;
                Component::Laplace { location: args[0], rate: args[1] }
            }
        }
        "beta" => {
            want(2)?;
            Component::Beta { a: args[0], b: args[1] }
        }
        "chisq" | "chi_square" | "chisquare" => {
            want(1)?;
            Component::ChiSquare { df: args[0] }
        }
        other => return Err(Error::MixtureParse(format!("unknown component kind '{other}'"))),
    };
    c.validate().map_err(|e| Error::MixtureParse(e.to_string()))?;
    Ok(c)
}

fn split_terms(s: &str) -> Result<Vec<&str>> {
    // Split on '+' at parenthesis depth zero, ignoring signs that belong to
    // a number (after '(' ',' 'e' or at the start).
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::MixtureParse("unbalanced ')'".into()));
                }
            }
            b'+' if depth == 0 && i > start => {
                let prev = bytes[i - 1];
                if prev == b'e' || prev == b'E' || prev == b'*' {
                    continue;
                }
                terms.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::MixtureParse("unbalanced '('".into()));
    }
    terms.push(&s[start..]);
    if terms.iter().any(|t| t.is_empty()) {
        return Err(Error::MixtureParse("empty term".into()));
    }
    Ok(terms)
}

impl FromStr for MixtureModel {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::MixtureParse("empty mixture".into()));
        }
        let mut weights = Vec::new();
        let mut components = Vec::new();
        for term in split_terms(&s)? {
            let (weight, body) = match term.split_once('*') {
                Some((w, body)) => (Some(parse_number(w)?), body),
                None => (None, term),
            };
            let open = body
                .find('(')
                .ok_or_else(|| Error::MixtureParse(format!("expected '(' in '{term}'")))?;
            if !body.ends_with(')') {
                return Err(Error::MixtureParse(format!("expected ')' at end of '{term}'")));
            }
            let kind = &body[..open];
            let args = body[open + 1..body.len() - 1]
                .split(',')
                .map(parse_number)
                .collect::<Result<Vec<_>>>()?;
            weights.push(weight);
            components.push(parse_component(kind, &args)?);
        }
        let given = weights.iter().filter(|w| w.is_some()).count();
        if given == 0 {
            return MixtureModel::uniform(components);
        }
        if given != weights.len() {
            return Err(Error::MixtureParse(
                "either all terms or no terms must carry a weight".into(),
            ));
        }
        MixtureModel::new(weights.into_iter().flatten().zip(components).collect())
            .map_err(|e| Error::MixtureParse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mix(s: &str) -> MixtureModel {
        s.parse().unwrap()
    }

    #[test]
    fn standard_normal_constants() {
        let m = mix("normal(0,1)");
        assert!((m.density(0.0) - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert_eq!(m.cdf(0.0), 0.5);
        assert_eq!(m.cdf(f64::INFINITY) - m.cdf(f64::NEG_INFINITY), 1.0);
        assert!(m.truncated_mean(f64::NEG_INFINITY, f64::INFINITY).unwrap().abs() < 1e-15);
        let half = m.truncated_mean(0.0, f64::INFINITY).unwrap();
        assert!((half - (2.0 / PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_mixture_identities() {
        let m = mix("0.5*normal(-2,1)+0.5*normal(2,1)");
        assert_eq!(m.density(0.0), m.density(-0.0));
        for a in [0.1, 1.0, 3.0, 10.0] {
            assert!(m.truncated_mean(-a, a).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn well_separated_cdf() {
        let m = mix("0.3*normal(-4,1)+0.7*normal(4,1)");
        assert!((m.cdf(0.0) - 0.3).abs() < 1e-4);
    }

    #[test]
    fn beta_support() {
        let m = mix("beta(2,4)");
        assert_eq!(m.density(1.5), 0.0);
        assert_eq!(m.density(-0.5), 0.0);
        assert!(m.sample(1000, 3).iter().all(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn zero_probability_interval_is_rejected() {
        let m = mix("beta(2,4)");
        assert!(matches!(m.truncated_mean(2.0, 3.0), Err(Error::Domain(_))));
        assert!(m.truncated_mean(0.5, 0.5).is_err());
    }

    #[test]
    fn cauchy_mean_diverges_on_unbounded_interval() {
        let m = mix("t(1,0)");
        assert!(m.truncated_mean(0.0, f64::INFINITY).is_err());
        let bounded = m.truncated_mean(-5.0, 5.0).unwrap();
        assert!(bounded.abs() < 1e-9);
    }

    #[test]
    fn non_gaussian_truncated_means_match_closed_forms() {
        // Laplace(0, 1) on (0, inf) is Exp(1): mean 1.
        let m = mix("laplace(0,1)");
        assert!((m.truncated_mean(0.0, f64::INFINITY).unwrap() - 1.0).abs() < 1e-9);
        // Beta(a, b) mean a / (a + b).
        let m = mix("beta(2,4)");
        assert!((m.truncated_mean(0.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-9);
        // Chi-square(k) mean k.
        let m = mix("chisq(3)");
        assert!((m.truncated_mean(0.0, f64::INFINITY).unwrap() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = mix("0.3*t(1,-3)+0.35*t(1,0)+0.35*t(1,3)");
        assert_eq!(m.sample(500, 42), m.sample(500, 42));
        assert_ne!(m.sample(500, 42), m.sample(500, 43));
    }

    #[test]
    fn sample_mean_concentrates() {
        let xs = mix("normal(0,1)").sample(100_000, 7);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.02, "{mean}");
    }

    #[test]
    fn extrema_of_symmetric_bimodal() {
        let ex = mix("0.5*normal(-2,1)+0.5*normal(2,1)").find_local_extrema();
        let kinds: Vec<_> = ex.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, [ExtremumKind::Mode, ExtremumKind::Min, ExtremumKind::Mode]);
        assert!(ex[1].location.abs() < 1e-7);
    }

    #[test]
    fn extrema_of_asymmetric_bimodal() {
        let m = MixtureModel::two_normals(0.45, -4.0, 0.55, 4.0).unwrap();
        let mins = m.interior_minima();
        assert_eq!(mins.len(), 1);
        assert!((mins[0] + 0.03).abs() < 0.01, "{mins:?}");
        let m = MixtureModel::two_normals(0.3, -4.0, 0.7, 4.0).unwrap();
        assert!((m.interior_minima()[0] + 0.11).abs() < 0.01);
    }

    #[test]
    fn unimodal_extrema() {
        let ex = mix("normal(0,1)").find_local_extrema();
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].kind, ExtremumKind::Mode);
        assert!(ex[0].location.abs() < 1e-7);
        assert!(mix("chisq(1)").find_local_extrema().is_empty());
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let m = mix(" 0.3 * normal(-4, 1) + 0.7*n(4,1) ");
        assert_eq!(m.to_string().parse::<MixtureModel>().unwrap(), m);
        let eq = mix("beta(8,2)+beta(5,5)+beta(2,8)");
        assert!(eq.weights().iter().all(|&w| (w - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(mix("1/3*dexp(-3)+2/3*dexp(3)").weights()[0], 1.0 / 3.0);
        assert_eq!(mix("normal(1e+0,1)").components()[0], Component::normal(1.0, 1.0));
        for bad in ["", "normal(0)", "0.5*normal(0,1)", "0.5*normal(0,1)+normal(1,1)", "foo(1)", "normal(0,-1)", "normal(0,1"] {
            assert!(bad.parse::<MixtureModel>().is_err(), "{bad}");
        }
    }

    #[test]
    fn quantiles_invert_cdf() {
        let m = mix("0.3*normal(-4,1)+0.7*normal(4,1)");
        for p in [1e-6, 0.01, 0.3, 0.5, 0.99, 1.0 - 1e-6] {
            let q = m.quantile(p).unwrap();
            assert!((m.cdf(q) - p).abs() < 1e-9, "{p} {q}");
        }
        assert!(m.quantile(0.0).is_err());
    }
}
