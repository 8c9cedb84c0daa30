//! Monte Carlo and periodic estimates of Lyapunov exponents of the cocycle
//! families.
//!
//! Each sample draws its own itinerary from a ChaCha stream indexed by the
//! sample number, so results do not depend on how samples are scheduled
//! across threads. Per-sample estimates are collected in index order before
//! averaging.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycles::Family;
use crate::error::{Error, Result};
use crate::report::{Check, Report, Value};

/// Steps between renormalisations of the running vector.
pub const RESCALE_EVERY: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Distribution {
    /// `k = 1 + G` with `G` geometric of success probability `p`, rejected
    /// above the truncation.
    Geometric { p: f64 },
    UniformRange { kmin: u64, kmax: u64 },
    /// The pattern repeated; every sample sees the same sequence.
    Periodic { pattern: Vec<u64> },
    /// i.i.d. draws from the listed values.
    Empirical { ks: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    pub distribution: Distribution,
    /// Largest admissible `k`.
    #[serde(default = "default_kmax")]
    pub kmax: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_kmax() -> u64 {
    20
}

impl SamplingSpec {
    pub fn geometric(p: f64, kmax: u64, seed: u64) -> Self {
        SamplingSpec { distribution: Distribution::Geometric { p }, kmax, seed }
    }

    pub fn periodic(pattern: Vec<u64>) -> Self {
        let kmax = pattern.iter().copied().max().unwrap_or(1);
        SamplingSpec { distribution: Distribution::Periodic { pattern }, kmax, seed: 0 }
    }

    pub fn uniform(kmin: u64, kmax: u64, seed: u64) -> Self {
        SamplingSpec { distribution: Distribution::UniformRange { kmin, kmax }, kmax, seed }
    }

    pub fn empirical(ks: Vec<u64>, seed: u64) -> Self {
        let kmax = ks.iter().copied().max().unwrap_or(1);
        SamplingSpec { distribution: Distribution::Empirical { ks }, kmax, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::DegenerateSpec(m.to_string()));
        if self.kmax == 0 {
            return bad("kmax must be at least 1");
        }
        match &self.distribution {
            Distribution::Geometric { p } => {
                if !(*p > 0.0 && *p <= 1.0) {
                    return bad("geometric p must lie in (0, 1]");
                }
            }
            Distribution::UniformRange { kmin, kmax } => {
                if *kmin == 0 || kmin > kmax || *kmax > self.kmax {
                    return bad("uniform range must satisfy 1 <= kmin <= kmax <= truncation");
                }
            }
            Distribution::Periodic { pattern: v } | Distribution::Empirical { ks: v } => {
                if v.is_empty() {
                    return bad("empty k list");
                }
                if v.iter().any(|&k| k == 0 || k > self.kmax) {
                    return bad("k values must lie in 1..=kmax");
                }
            }
        }
        Ok(())
    }

    /// True when every generated `k` equals 1, the case excluded by the
    /// positivity statements.
    pub fn is_all_ones(&self) -> bool {
        match &self.distribution {
            Distribution::Periodic { pattern: v } | Distribution::Empirical { ks: v } => v.iter().all(|&k| k == 1),
            Distribution::UniformRange { kmax, .. } => *kmax == 1,
            Distribution::Geometric { p } => *p >= 1.0 || self.kmax == 1,
        }
    }

    /// The itinerary of sample `index`, of length `n`.
    pub fn sample(&self, index: u64, n: usize) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        match &self.distribution {
            Distribution::Periodic { pattern } => pattern.iter().copied().cycle().take(n).collect(),
            Distribution::Empirical { ks } => (0..n).map(|_| ks[rng.random_range(0..ks.len())]).collect(),
            Distribution::UniformRange { kmin, kmax } => (0..n).map(|_| rng.random_range(*kmin..=*kmax)).collect(),
            Distribution::Geometric { p } => {
                let g = Geometric::new(*p).expect("validated");
                (0..n)
                    .map(|_| loop {
                        let k = 1 + g.sample(&mut rng);
                        if k <= self.kmax {
                            break k;
                        }
                    })
                    .collect()
            }
        }
    }

    fn max_k(&self) -> u64 {
        match &self.distribution {
            Distribution::Periodic { pattern: v } | Distribution::Empirical { ks: v } => *v.iter().max().unwrap(),
            Distribution::UniformRange { kmax, .. } => *kmax,
            Distribution::Geometric { .. } => self.kmax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub family: Family,
    pub d: usize,
    /// Descending, in nats per step.
    pub exponents: Vec<f64>,
    /// 95% half-widths across samples; zero for a single sample.
    pub ci95: Vec<f64>,
    pub n_steps: usize,
    pub burn_in: usize,
    pub n_samples: usize,
    pub seed: u64,
}

impl LyapunovEstimate {
    pub fn sum(&self) -> f64 {
        self.exponents.iter().sum()
    }
}

/// Burn-in used for `n` steps: a tenth, capped at 1000.
pub fn burn_in_for(n_steps: usize) -> usize {
    (n_steps / 10).min(1000)
}

/// Float matrices indexed by `k`, built once from the exact ones.
struct MatrixTable {
    by_k: Vec<DMatrix<f64>>,
}

impl MatrixTable {
    fn new(family: Family, d: usize, kmax: u64) -> Result<Self> {
        let mut by_k = vec![DMatrix::zeros(d, d)];
        for k in 1..=kmax {
            let m = family.matrix(d, k)?;
            let rows = m
                .to_f64_rows()
                .ok_or_else(|| Error::InsufficientPrecision(format!("entries of {} overflow f64", family.name())))?;
            by_k.push(DMatrix::from_fn(d, d, |i, j| rows[i][j]));
        }
        Ok(MatrixTable { by_k })
    }

    fn get(&self, k: u64) -> &DMatrix<f64> {
        &self.by_k[k as usize]
    }
}

fn check_common(spec: &SamplingSpec, d: usize, n_steps: usize, n_samples: usize) -> Result<()> {
    spec.validate()?;
    if d < 3 {
        return Err(Error::InvalidDimension { min: 3, got: d });
    }
    if n_steps == 0 || n_samples == 0 {
        return Err(Error::DegenerateSpec("n_steps and n_samples must be positive".into()));
    }
    Ok(())
}

fn mean_ci(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * (var / n).sqrt())
}

/// Growth rate of `cnorm(M(k_1)⋯M(k_n))` for a nonnegative family.
///
/// Column sums of the product form the row vector `1ᵀ M(k_1)⋯M(k_n)`, whose
/// largest entry is the cnorm. After the burn-in the vector has aligned with
/// the dominant direction and only its further growth is averaged.
fn top_one(table: &MatrixTable, ks: &[u64], burn_in: usize) -> f64 {
    let d = table.by_k[0].nrows();
    let mut u = nalgebra::DVector::from_element(d, 1.0);
    let mut log_scale = 0.0;
    let mut at_burn = 0.0;
    for (step, &k) in ks.iter().enumerate() {
        u = table.get(k).tr_mul(&u);
        if (step + 1) % RESCALE_EVERY == 0 {
            let s = u.max();
            u /= s;
            log_scale += s.ln();
        }
        if step + 1 == burn_in {
            at_burn = log_scale + u.max().ln();
        }
    }
    (log_scale + u.max().ln() - at_burn) / (ks.len() - burn_in) as f64
}

/// Per-step logs of `|R_ii|` from repeated QR of the transposed factors.
fn spectrum_one(table: &MatrixTable, ks: &[u64], burn_in: usize) -> Result<Vec<f64>> {
    let d = table.by_k[0].nrows();
    let mut q = DMatrix::<f64>::identity(d, d);
    let mut acc = vec![0.0; d];
    for (step, &k) in ks.iter().enumerate() {
        let m = table.get(k).tr_mul(&q);
        let qr = m.qr();
        let r = qr.r();
        q = qr.q();
        if step >= burn_in {
            for i in 0..d {
                let v = r[(i, i)].abs();
                if v == 0.0 || !v.is_finite() {
                    return Err(Error::RankLoss(step + 1));
                }
                acc[i] += v.ln();
            }
        }
    }
    let n = (ks.len() - burn_in) as f64;
    let mut out: Vec<f64> = acc.into_iter().map(|x| x / n).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

fn samples<T: Send>(n_samples: usize, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n_samples as u64).into_par_iter().map(f).collect()
}

/// Mean top exponent `(1/n) log cnorm` over samples.
pub fn top_exponent(
    family: Family,
    spec: &SamplingSpec,
    d: usize,
    n_steps: usize,
    n_samples: usize,
) -> Result<LyapunovEstimate> {
    check_common(spec, d, n_steps, n_samples)?;
    let burn_in = burn_in_for(n_steps);
    let per = if family == Family::AInverse {
        let table = MatrixTable::new(family, d, spec.max_k())?;
        samples(n_samples, |i| Ok(spectrum_one(&table, &spec.sample(i, n_steps), burn_in)?[0]))?
    } else {
        let table = MatrixTable::new(family, d, spec.max_k())?;
        samples(n_samples, |i| Ok(top_one(&table, &spec.sample(i, n_steps), burn_in)))?
    };
    let (m, ci) = mean_ci(&per);
    Ok(LyapunovEstimate {
        family,
        d,
        exponents: vec![m],
        ci95: vec![ci],
        n_steps,
        burn_in,
        n_samples,
        seed: spec.seed,
    })
}

/// The full spectrum via QR.
pub fn spectrum(
    family: Family,
    spec: &SamplingSpec,
    d: usize,
    n_steps: usize,
    n_samples: usize,
) -> Result<LyapunovEstimate> {
    check_common(spec, d, n_steps, n_samples)?;
    let burn_in = burn_in_for(n_steps);
    let table = MatrixTable::new(family, d, spec.max_k())?;
    let per = samples(n_samples, |i| spectrum_one(&table, &spec.sample(i, n_steps), burn_in))?;
    let mut exponents = Vec::with_capacity(d);
    let mut ci95 = Vec::with_capacity(d);
    for j in 0..d {
        let col: Vec<f64> = per.iter().map(|v| v[j]).collect();
        let (m, ci) = mean_ci(&col);
        exponents.push(m);
        ci95.push(ci);
    }
    Ok(LyapunovEstimate { family, d, exponents, ci95, n_steps, burn_in, n_samples, seed: spec.seed })
}

/// The family whose top exponent dominates that of `A_d`.
pub fn dominant_family(d: usize) -> Family {
    if d == 3 {
        Family::B3
    } else {
        Family::Z
    }
}

/// Paired estimate of `λ_1(B or Z) − λ_1(A)` on identical itineraries.
pub fn exponent_gap(spec: &SamplingSpec, d: usize, n_steps: usize, n_samples: usize) -> Result<Report> {
    check_common(spec, d, n_steps, n_samples)?;
    let burn_in = burn_in_for(n_steps);
    let fam = dominant_family(d);
    let ta = MatrixTable::new(Family::A, d, spec.max_k())?;
    let tz = MatrixTable::new(fam, d, spec.max_k())?;
    let per = samples(n_samples, |i| {
        let ks = spec.sample(i, n_steps);
        let a = top_one(&ta, &ks, burn_in);
        let z = top_one(&tz, &ks, burn_in);
        Ok((a, z))
    })?;
    let gaps: Vec<f64> = per.iter().map(|(a, z)| z - a).collect();
    let (ga, ca) = mean_ci(&per.iter().map(|p| p.0).collect::<Vec<_>>());
    let (gz, cz) = mean_ci(&per.iter().map(|p| p.1).collect::<Vec<_>>());
    let (gap, ci) = mean_ci(&gaps);
    let mut rep = Report::new(format!("exponent gap, d = {d}"));
    let mut c = Check::new(
        "gap-positive",
        gap - ci > 0.0,
        format!("lambda1({}) - lambda1(A) = {gap:.6} +/- {ci:.2e}", fam.name()),
    )
    .with("gap", Value::float_ci(gap, ci))
    .with("lambda1_a", Value::float_ci(ga, ca))
    .with(format!("lambda1_{}", fam.name().to_lowercase()), Value::float_ci(gz, cz))
    .mirrors("top exponent of the inverse-side cocycle exceeds that of A");
    if spec.is_all_ones() {
        c.informational = true;
        c.detail.push_str("; all-ones itinerary is excluded by hypothesis, not counted");
        rep.push(Check::info("all-ones-flag", "every k equals 1; the positivity hypothesis fails"));
    }
    rep.push(c);
    Ok(rep)
}

/// `λ_2(A_d) > 0` through the two claims (top exponent of the inverse side
/// positive, and `λ_1 + λ_d < 0`), plus the direct QR estimate and the
/// inverse-family symmetry.
pub fn second_exponent_sign(spec: &SamplingSpec, d: usize, n_steps: usize, n_samples: usize) -> Result<Report> {
    check_common(spec, d, n_steps, n_samples)?;
    let sa = spectrum(Family::A, spec, d, n_steps, n_samples)?;
    let si = spectrum(Family::AInverse, spec, d, n_steps, n_samples)?;
    let gap = exponent_gap(spec, d, n_steps, n_samples)?;
    let mut rep = Report::new(format!("second exponent, d = {d}"));
    let all_ones = spec.is_all_ones();

    let (l1i, c1i) = (si.exponents[0], si.ci95[0]);
    let mut claim1 = Check::new("claim-1", l1i - c1i > 0.0, format!("lambda1(A^-1) = {l1i:.6} +/- {c1i:.2e}"))
        .with("lambda1_a_inverse", Value::float_ci(l1i, c1i))
        .mirrors("claim 1: top exponent of the inverse cocycle is positive");
    let mut claim2 = gap.checks.iter().find(|c| c.name == "gap-positive").cloned().expect("gap check");
    claim2.name = "claim-2".into();
    claim2.mirrors = Some("claim 2: lambda1 + lambda_d < 0".into());

    let (l2, c2) = (sa.exponents[1], sa.ci95[1]);
    let mut direct = Check::new("lambda2-positive", l2 - c2 > 0.0, format!("lambda2(A) = {l2:.6} +/- {c2:.2e}"))
        .with("spectrum", Value::List { values: sa.exponents.iter().zip(&sa.ci95).map(|(v, c)| Value::float_ci(*v, *c)).collect() })
        .mirrors("second Lyapunov exponent of A is positive");
    if all_ones {
        for c in [&mut claim1, &mut claim2, &mut direct] {
            c.informational = true;
        }
    }
    rep.push(claim1);
    rep.push(claim2);
    rep.push(direct);

    let worst = (0..d)
        .map(|i| {
            let diff = (sa.exponents[i] + si.exponents[d - 1 - i]).abs();
            let tol = (sa.ci95[i] + si.ci95[d - 1 - i]).max(1e-6);
            diff / tol
        })
        .fold(0.0, f64::max);
    rep.push(
        Check::new("inverse-symmetry", worst <= 1.0, format!("max |lambda_i(A) + lambda_(d+1-i)(A^-1)| / tolerance = {worst:.3}"))
            .mirrors("lambda_i(A) = -lambda_(d+1-i)(A^-1)"),
    );
    rep.push(
        Check::new("exponent-sum", sa.sum().abs() < 1e-8, format!("sum of exponents = {:.3e}", sa.sum()))
            .with("sum", Value::float(sa.sum())),
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_respects_truncation() {
        let spec = SamplingSpec::geometric(0.5, 4, 7);
        let ks = spec.sample(3, 2000);
        assert!(ks.iter().all(|&k| (1..=4).contains(&k)));
        assert_eq!(ks, spec.sample(3, 2000));
        assert_ne!(ks, spec.sample(4, 2000));
        assert_eq!(SamplingSpec::periodic(vec![1, 2]).sample(9, 5), vec![1, 2, 1, 2, 1]);
    }

    #[test]
    fn validation() {
        assert!(SamplingSpec::geometric(0.0, 20, 0).validate().is_err());
        assert!(SamplingSpec::periodic(vec![]).validate().is_err());
        assert!(SamplingSpec::uniform(3, 2, 0).validate().is_err());
        assert!(top_exponent(Family::A, &SamplingSpec::periodic(vec![2]), 3, 0, 1).is_err());
    }

    #[test]
    fn single_step_is_log_cnorm() {
        let e = top_exponent(Family::A, &SamplingSpec::periodic(vec![2]), 3, 1, 1).unwrap();
        assert!((e.exponents[0] - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn all_ones_is_flagged() {
        let rep = exponent_gap(&SamplingSpec::periodic(vec![1]), 3, 300, 1).unwrap();
        assert!(rep.find("all-ones-flag").is_some());
        assert!(rep.find("gap-positive").unwrap().informational);
    }
}
