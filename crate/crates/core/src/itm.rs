//! Interval translation mappings over exact rationals.
//!
//! An [`Itm`] is a piecewise translation of `[0, 1)` whose branch images may
//! overlap. The attractor `Ω_n = I ∩ TI ∩ ⋯ ∩ TⁿI` is tracked as an
//! [`IntervalSet`]; since `TI ⊆ I` the iterates `TⁿI` are nested, so
//! `Ω_n = TⁿI` and stabilisation `Ω_N = Ω_{N+1}` persists forever.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, parse_rat, Rat};

/// One continuity interval `[start, end)` and its translation.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    #[serde_as(as = "DisplayFromStr")]
    pub start: Rat,
    #[serde_as(as = "DisplayFromStr")]
    pub end: Rat,
    #[serde_as(as = "DisplayFromStr")]
    pub translation: Rat,
}

impl Branch {
    pub fn contains(&self, x: &Rat) -> bool {
        &self.start <= x && x < &self.end
    }

    pub fn len(&self) -> Rat {
        &self.end - &self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Itm {
    branches: Vec<Branch>,
    /// Set when zero-length branches were dropped at construction.
    degenerate: bool,
}

/// Bruin–Troubetzkoy parameters `1 ≥ α ≥ β ≥ 0`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BtParams {
    #[serde_as(as = "DisplayFromStr")]
    pub alpha: Rat,
    #[serde_as(as = "DisplayFromStr")]
    pub beta: Rat,
}

impl BtParams {
    pub fn new(alpha: Rat, beta: Rat) -> Result<Self> {
        let p = BtParams { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha > Rat::one() || self.alpha < self.beta || self.beta.is_negative() {
            return Err(Error::InvalidParameters(format!(
                "need 1 >= alpha >= beta >= 0, got alpha={}, beta={}",
                fmt_rat(&self.alpha),
                fmt_rat(&self.beta)
            )));
        }
        Ok(())
    }

    /// Interval lengths `(1-α, α-β, β)`.
    pub fn lengths(&self) -> Vec<Rat> {
        vec![Rat::one() - &self.alpha, &self.alpha - &self.beta, self.beta.clone()]
    }
}

/// Bruin parameters on `d ≥ 3` intervals, given by the interval lengths.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruinParams {
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub lambda: Vec<Rat>,
}

impl BruinParams {
    pub fn new(lambda: Vec<Rat>) -> Result<Self> {
        let p = BruinParams { lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.lambda.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda.len() < 3 {
            return Err(Error::InvalidDimension { min: 3, got: self.lambda.len() });
        }
        if self.lambda.iter().any(|l| l.is_negative()) {
            return Err(Error::InvalidParameters("negative interval length".into()));
        }
        let s: Rat = self.lambda.iter().sum();
        if !s.is_one() {
            return Err(Error::InvalidParameters(format!("lengths sum to {}, not 1", fmt_rat(&s))));
        }
        Ok(())
    }

    /// The translation parameters `α_1 ≥ ⋯ ≥ α_{d-1}`.
    pub fn alphas(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.d() - 1);
        let mut a = Rat::one() - &self.lambda[0];
        out.push(a.clone());
        for l in &self.lambda[1..self.d() - 1] {
            a -= l;
            out.push(a.clone());
        }
        out
    }
}

impl Itm {
    /// Build from left endpoints and per-interval translations. Breakpoints
    /// must start at 0, increase strictly and stay below 1.
    pub fn new(breakpoints: Vec<Rat>, translations: Vec<Rat>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != translations.len() {
            return Err(Error::InvalidParameters("breakpoints and translations must pair up".into()));
        }
        if !breakpoints[0].is_zero() {
            return Err(Error::InvalidParameters("first breakpoint must be 0".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) || breakpoints.last().unwrap() >= &Rat::one() {
            return Err(Error::InvalidParameters("breakpoints must increase strictly within [0,1)".into()));
        }
        let mut branches = Vec::with_capacity(breakpoints.len());
        for (i, (s, t)) in breakpoints.iter().zip(translations).enumerate() {
            let e = breakpoints.get(i + 1).cloned().unwrap_or_else(Rat::one);
            branches.push(Branch { start: s.clone(), end: e, translation: t });
        }
        let m = Itm { branches, degenerate: false };
        m.check_images()?;
        Ok(m)
    }

    fn from_lengths(lengths: &[Rat], translations: Vec<Rat>) -> Result<Self> {
        let mut branches = Vec::new();
        let mut start = Rat::zero();
        let mut degenerate = false;
        for (l, t) in lengths.iter().zip(translations) {
            let end = &start + l;
            if l.is_zero() {
                degenerate = true;
            } else {
                branches.push(Branch { start: start.clone(), end: end.clone(), translation: t });
            }
            start = end;
        }
        let m = Itm { branches, degenerate };
        m.check_images()?;
        Ok(m)
    }

    fn check_images(&self) -> Result<()> {
        for b in &self.branches {
            let lo = &b.start + &b.translation;
            let hi = &b.end + &b.translation;
            if lo.is_negative() || hi > Rat::one() {
                return Err(Error::InvalidParameters(format!(
                    "branch [{}, {}) translated out of [0,1)",
                    fmt_rat(&b.start),
                    fmt_rat(&b.end)
                )));
            }
        }
        Ok(())
    }

    /// The three-branch Bruin–Troubetzkoy map `T_{α,β}`.
    pub fn from_bt(p: &BtParams) -> Result<Self> {
        p.validate()?;
        let translations =
            vec![p.alpha.clone(), p.beta.clone(), &p.beta - Rat::one()];
        Self::from_lengths(&p.lengths(), translations)
    }

    /// The `d`-branch Bruin map with interval lengths `λ`.
    pub fn from_bruin(p: &BruinParams) -> Result<Self> {
        p.validate()?;
        let alphas = p.alphas();
        let d = p.d();
        let mut translations: Vec<Rat> = alphas.clone();
        translations.push(&alphas[d - 2] - Rat::one());
        Self::from_lengths(&p.lambda, translations)
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn breakpoints(&self) -> Vec<Rat> {
        self.branches.iter().map(|b| b.start.clone()).collect()
    }

    pub fn evaluate(&self, x: &Rat) -> Result<Rat> {
        if x.is_negative() || x >= &Rat::one() {
            return Err(Error::PointOutOfRange(fmt_rat(x)));
        }
        let b = self
            .branches
            .iter()
            .find(|b| b.contains(x))
            .expect("branches partition [0,1)");
        Ok(x + &b.translation)
    }

    /// Exact forward image of a set.
    pub fn image(&self, s: &IntervalSet) -> IntervalSet {
        let mut pieces = Vec::new();
        for b in &self.branches {
            for (lo, hi) in s.intervals() {
                let lo2 = if lo > &b.start { lo } else { &b.start };
                let hi2 = if hi < &b.end { hi } else { &b.end };
                if lo2 < hi2 {
                    pieces.push((lo2 + &b.translation, hi2 + &b.translation));
                }
            }
        }
        IntervalSet::from_intervals(pieces)
    }

    /// `Ω_n`, by iterating the image map and intersecting.
    pub fn attractor(&self, n: usize) -> IntervalSet {
        let mut omega = IntervalSet::full();
        let mut iterate = IntervalSet::full();
        for _ in 0..n {
            iterate = self.image(&iterate);
            omega = omega.intersect(&iterate);
        }
        omega
    }

    /// Smallest `N ≤ max_depth` with `Ω_N = Ω_{N+1}`, else `Unresolved`.
    pub fn classify(&self, max_depth: usize) -> Classification {
        let mut omega = IntervalSet::full();
        for n in 0..max_depth {
            let next = omega.intersect(&self.image(&omega));
            if next == omega {
                return Classification::FiniteType { n };
            }
            omega = next;
        }
        Classification::Unresolved { depth: max_depth, attractor: omega }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Classification {
    FiniteType { n: usize },
    /// Not stabilised within the budget; carries `Ω_depth`.
    Unresolved { depth: usize, attractor: IntervalSet },
}

/// Disjoint, sorted, non-empty half-open intervals with adjacent pieces merged.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "Vec<[String; 2]>", try_from = "Vec<[String; 2]>")]
pub struct IntervalSet {
    intervals: Vec<(Rat, Rat)>,
}

impl From<IntervalSet> for Vec<[String; 2]> {
    fn from(s: IntervalSet) -> Self {
        s.to_strings()
    }
}

impl TryFrom<Vec<[String; 2]>> for IntervalSet {
    type Error = Error;
    fn try_from(v: Vec<[String; 2]>) -> Result<Self> {
        let pieces = v
            .iter()
            .map(|[a, b]| Ok((parse_rat(a)?, parse_rat(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalSet::from_intervals(pieces))
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet { intervals: vec![(Rat::zero(), Rat::one())] }
    }

    /// Canonicalise arbitrary (possibly overlapping) pieces.
    pub fn from_intervals(mut pieces: Vec<(Rat, Rat)>) -> Self {
        pieces.retain(|(a, b)| a < b);
        pieces.sort();
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.intervals.iter().map(|(a, b)| (a, b))
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.intervals.iter().any(|(a, b)| a <= x && x < b)
    }

    pub fn total_length(&self) -> Rat {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, a1) = &self.intervals[i];
            let (b0, b1) = &other.intervals[j];
            let lo = if a0 > b0 { a0 } else { b0 };
            let hi = if a1 < b1 { a1 } else { b1 };
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet::from_intervals(out)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        IntervalSet::from_intervals(all)
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        &self.intersect(other) == self
    }

    /// `[[lo, hi], …]` as `p/q` strings.
    pub fn to_strings(&self) -> Vec<[String; 2]> {
        self.intervals.iter().map(|(a, b)| [fmt_rat(a), fmt_rat(b)]).collect()
    }
}
