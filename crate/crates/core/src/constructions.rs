//! Itineraries with prescribed eigenvalues: one with eigenvalue `-1`, one
//! isomorphic to an irrational rotation.
//!
//! Both constructions run entirely on exact tower lengths. Eigenfunction
//! residuals are checked in the cutting-and-stacking model: a point is a
//! position inside a deep tower, `T` moves it one position up, and the
//! coarser tower containing it is found by unfolding the names.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kseq::KSequence;
use crate::rational::{frac, rat_to_f64, Rat};
use crate::report::{Check, Report, Value};

fn ser_dec<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_dec_vec<S: Serializer>(x: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|v| v.to_string()))
}

fn ser_dec_triples<S: Serializer>(x: &[[BigUint; 3]], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|t| [t[0].to_string(), t[1].to_string(), t[2].to_string()]))
}

fn ser_rat<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::rational::fmt_rat(x))
}

fn big(x: &BigUint) -> num_bigint::BigInt {
    num_bigint::BigInt::from(x.clone())
}

fn ratio(a: &BigUint, b: &BigUint) -> Rat {
    Rat::new(big(a), big(b))
}

fn pow2(n: usize) -> BigUint {
    BigUint::one() << n
}

/// Lengths `(|u|, |v|, |w|)` one level up: `|u'| = |v|`,
/// `|v'| = |w| + k|u|`, `|w'| = |w| + (k-1)|u|`.
fn lengths_step(h: &[BigUint; 3], k: &BigUint) -> [BigUint; 3] {
    let km1 = k - 1u32;
    [h[1].clone(), &h[2] + k * &h[0], &h[2] + km1 * &h[0]]
}

/// Lengths at every level `0..=ks.len()`.
pub fn length_ledger(ks: &[BigUint]) -> Vec<[BigUint; 3]> {
    let mut out = vec![[BigUint::one(), BigUint::one(), BigUint::one()]];
    for k in ks {
        let next = lengths_step(out.last().unwrap(), k);
        out.push(next);
    }
    out
}

/// Relative invariant masses of the three towers at `level`, from the
/// frequency vector `A(k_{level+1}) ⋯ A(k_N) 1` of the given tail.
pub fn masses(ks: &[BigUint], level: usize) -> Result<[Rat; 3]> {
    if level > ks.len() {
        return Err(Error::SequenceTooShort { needed: level, have: ks.len() });
    }
    let h = &length_ledger(&ks[..level])[level];
    let mut f = [BigUint::one(), BigUint::one(), BigUint::one()];
    for k in ks[level..].iter().rev() {
        let km1 = k - 1u32;
        f = [k * &f[1] + km1 * &f[2], f[0].clone(), &f[1] + &f[2]];
    }
    let w: Vec<BigUint> = (0..3).map(|i| &h[i] * &f[i]).collect();
    let total: BigUint = w.iter().sum();
    Ok([ratio(&w[0], &total), ratio(&w[1], &total), ratio(&w[2], &total)])
}

/// Occurrences of each level-`lo` name inside each level-`hi` name:
/// entry `[i][j]` counts tower `i` in tower `j`.
pub fn copy_counts(ks: &[BigUint], lo: usize, hi: usize) -> [[BigUint; 3]; 3] {
    let mut c: [[BigUint; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| BigUint::from((i == j) as u32)));
    for k in &ks[lo..hi] {
        let km1 = k - 1u32;
        // right-multiply by A(k): columns (e2, k e1 + e3, (k-1) e1 + e3)
        c = std::array::from_fn(|i| [c[i][1].clone(), k * &c[i][0] + &c[i][2], &km1 * &c[i][0] + &c[i][2]]);
    }
    c
}

/// Tower and position at level `lo` of position `p` in tower `j` at level
/// `hi` (towers indexed 0, 1, 2 for u, v, w).
pub fn locate(ledger: &[[BigUint; 3]], hi: usize, j: usize, p: &BigUint, lo: usize) -> (usize, BigUint) {
    let (mut j, mut p) = (j, p.clone());
    for level in (lo + 1..=hi).rev() {
        let h = &ledger[level - 1];
        match j {
            0 => j = 1,
            _ => {
                // name = w, then a run of u's
                if p < h[2] {
                    j = 2;
                } else {
                    p = (&p - &h[2]) % &h[0];
                    j = 0;
                }
            }
        }
    }
    (j, p)
}

fn uniform_below(rng: &mut ChaCha8Rng, n: &BigUint) -> BigUint {
    let bits = n.bits();
    let words = bits.div_ceil(32) as usize;
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.random()).collect();
        let extra = words as u64 * 32 - bits;
        if let Some(top) = digits.last_mut() {
            *top >>= extra;
        }
        let x = BigUint::new(digits);
        if &x < n {
            return x;
        }
    }
}

/// Positions sampled by mass among the level-`hi` towers, never on a top
/// level.
fn sample_positions(ks: &[BigUint], ledger: &[[BigUint; 3]], hi: usize, n_points: usize, seed: u64) -> Result<Vec<(usize, BigUint)>> {
    let m = masses(ks, hi)?;
    let w: Vec<f64> = m.iter().map(rat_to_f64).collect();
    let total: f64 = w.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n_points);
    for _ in 0..n_points {
        let mut x = rng.random::<f64>() * total;
        let mut j = 0;
        while j < 2 && x >= w[j] {
            x -= w[j];
            j += 1;
        }
        let h = &ledger[hi][j];
        if h <= &BigUint::one() {
            continue;
        }
        out.push((j, uniform_below(&mut rng, &(h - 1u32))));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct MinusOneBlock {
    pub n: usize,
    pub k_odd_index: u64,
    pub k_even_index: u64,
    /// `(k_{2n+1}-1)|u_{2n}| - 2^n(|w_{2n}| + k_{2n+2}|v_{2n}|)`, positive.
    #[serde(serialize_with = "ser_dec")]
    pub slack: BigUint,
    /// Largest share of `v_{2n}`, `w_{2n}` inside a level-`2n+2` tower.
    #[serde(serialize_with = "ser_rat")]
    pub max_share: Rat,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinusOnePlan {
    pub ks: KSequence,
    pub blocks: Vec<MinusOneBlock>,
    /// `(|u_{2n}|, |v_{2n}|, |w_{2n}|)` for `n = 0..=n_blocks+1`.
    #[serde(serialize_with = "ser_dec_triples")]
    pub lengths: Vec<[BigUint; 3]>,
}

impl MinusOnePlan {
    pub fn big_ks(&self) -> Vec<BigUint> {
        self.ks.iter().map(|&k| BigUint::from(k)).collect()
    }
}

fn fail(step: impl Into<String>, detail: impl Into<String>) -> Error {
    Error::IdentityFailed { step: step.into(), detail: detail.into() }
}

/// Itinerary with a measurable eigenfunction for the eigenvalue `-1`.
/// `k_1` is the least odd number `≥ odd_choice`, `k_2 = 2`, every
/// `k_{2n+2} = odd_choice` and `k_{2n+1}` is the least value meeting the
/// growth inequality.
pub fn build_minus_one(n_blocks: usize, odd_choice: u64) -> Result<MinusOnePlan> {
    if n_blocks == 0 {
        return Err(Error::InvalidParameters("need at least one block".into()));
    }
    if odd_choice.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("odd_choice must be odd, got {odd_choice}")));
    }
    let k1 = odd_choice;
    // |v_2| = k_1 + k_2 odd and |w_2| = k_1 + k_2 - 1 even force k_2 even
    let mut ks = vec![k1, 2];
    let mut h = length_ledger(&[BigUint::from(k1), BigUint::from(2u32)])[2].clone();
    let mut lengths = vec![[BigUint::one(), BigUint::one(), BigUint::one()], h.clone()];
    let mut blocks = Vec::new();
    for n in 1..=n_blocks {
        let [u, v, w] = h.clone();
        let k_even = odd_choice;
        let rhs = pow2(n) * (&w + BigUint::from(k_even) * &v);
        let k_odd_big = &rhs / &u + 2u32;
        let k_odd = k_odd_big.to_u64().ok_or_else(|| fail(format!("block {n}"), "k exceeds 64 bits"))?;
        let slack = (&k_odd_big - 1u32) * &u - &rhs;
        let next = lengths_step(&lengths_step(&h, &k_odd_big), &BigUint::from(k_even));
        let km1 = &k_odd_big - 1u32;
        let shares = [
            ratio(&w, &next[0]),
            ratio(&(&w + BigUint::from(k_even) * &v), &next[1]),
            ratio(&(&w + BigUint::from(k_even - 1) * &v), &next[2]),
        ];
        let max_share = shares.into_iter().max().unwrap();
        if max_share >= ratio(&BigUint::one(), &pow2(n)) {
            return Err(fail(format!("block {n}"), format!("share {max_share} not below 2^-{n}")));
        }
        debug_assert_eq!(next[0], &w + &k_odd_big * &u);
        debug_assert_eq!(next[2], &w + &km1 * &u + BigUint::from(k_even - 1) * &v);
        if next[0].is_odd() || next[2].is_odd() || next[1].is_even() {
            return Err(fail(format!("block {n}"), "parity of tower lengths"));
        }
        ks.push(k_odd);
        ks.push(k_even);
        blocks.push(MinusOneBlock { n, k_odd_index: k_odd, k_even_index: k_even, slack, max_share });
        h = next;
        lengths.push(h.clone());
    }
    Ok(MinusOnePlan { ks: KSequence::new(ks)?, blocks, lengths })
}

/// Outcome of an eigenfunction residual check.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub level: usize,
    pub sampled: usize,
    pub good_points: usize,
    /// Largest residual over the good points.
    pub residual: f64,
    /// Largest residual over every sampled point, for contrast.
    pub residual_all: f64,
    pub tolerance: f64,
    /// Invariant measure of the excluded set.
    #[serde(serialize_with = "ser_rat")]
    pub excluded: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub excluded_bound: Rat,
    /// Tower masses at the working level, directly and through the finer
    /// level, agree.
    pub masses_agree: bool,
}

impl ResidualReport {
    pub fn to_report(&self, title: &str) -> Report {
        let mut r = Report::new(title);
        r.push(
            Check::new(
                "residual",
                self.residual <= self.tolerance,
                format!("max residual {:.3e} over {} good of {} points", self.residual, self.good_points, self.sampled),
            )
            .with("residual", Value::float(self.residual))
            .with("tolerance", Value::float(self.tolerance))
            .with("residual-all-points", Value::float(self.residual_all)),
        );
        r.push(
            Check::new(
                "excluded-measure",
                self.excluded <= self.excluded_bound,
                format!("excluded {} <= {}", crate::rational::fmt_rat(&self.excluded), crate::rational::fmt_rat(&self.excluded_bound)),
            )
            .with("excluded", Value::exact(crate::rational::fmt_rat(&self.excluded))),
        );
        r.push(Check::new("masses-two-ways", self.masses_agree, "tower masses agree through the finer level"));
        r
    }
}

/// Masses at `lo` recomputed from the level-`hi` masses and copy counts.
fn masses_via(ks: &[BigUint], ledger: &[[BigUint; 3]], lo: usize, hi: usize) -> Result<[Rat; 3]> {
    let fine = masses(ks, hi)?;
    let c = copy_counts(ks, lo, hi);
    Ok(std::array::from_fn(|i| {
        (0..3).fold(Rat::zero(), |acc, j| {
            acc + &fine[j] * ratio(&(&c[i][j] * &ledger[lo][i]), &ledger[hi][j])
        })
    }))
}

fn tops_mass(ks: &[BigUint], ledger: &[[BigUint; 3]], hi: usize) -> Result<Rat> {
    let m = masses(ks, hi)?;
    Ok((0..3).fold(Rat::zero(), |acc, j| acc + &m[j] / Rat::from_integer(big(&ledger[hi][j]))))
}

/// Check `f_n(Tx) = -f_n(x)` on the tower `u_{2n}`, where `f_n` is `-1` on
/// its odd levels and `+1` everywhere else.
pub fn minus_one_residual(plan: &MinusOnePlan, n: usize, n_points: usize, seed: u64) -> Result<ResidualReport> {
    let ks = plan.big_ks();
    if n == 0 || n > plan.blocks.len() {
        return Err(Error::InvalidParameters(format!("level index must be in 1..={}", plan.blocks.len())));
    }
    let (lo, hi) = (2 * n, 2 * n + 2);
    let ledger = length_ledger(&ks);
    let f = |t: usize, l: &BigUint| -> f64 { if t == 0 && l.is_odd() { -1.0 } else { 1.0 } };
    let pts = sample_positions(&ks, &ledger, hi, n_points, seed)?;
    let evals: Vec<(bool, f64)> = pts
        .par_iter()
        .map(|(j, p)| {
            let (t0, l0) = locate(&ledger, hi, *j, p, lo);
            let (t1, l1) = locate(&ledger, hi, *j, &(p + 1u32), lo);
            (t0 == 0, (f(t1, &l1) + f(t0, &l0)).abs())
        })
        .collect();
    let direct = masses(&ks, lo)?;
    let via = masses_via(&ks, &ledger, lo, hi)?;
    let excluded = &direct[1] + &direct[2] + tops_mass(&ks, &ledger, hi)?;
    Ok(ResidualReport {
        level: lo,
        sampled: evals.len(),
        good_points: evals.iter().filter(|e| e.0).count(),
        residual: evals.iter().filter(|e| e.0).map(|e| e.1).fold(0.0, f64::max),
        residual_all: evals.iter().map(|e| e.1).fold(0.0, f64::max),
        tolerance: 0.0,
        excluded_bound: ratio(&BigUint::one(), &pow2(n)) + tops_mass(&ks, &ledger, hi)?,
        excluded,
        masses_agree: direct == via,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IrrationalBlock {
    pub n: usize,
    #[serde(serialize_with = "ser_dec")]
    pub k_first: BigUint,
    #[serde(serialize_with = "ser_dec")]
    pub k_second: BigUint,
    #[serde(serialize_with = "ser_dec")]
    pub k_third: BigUint,
    /// `|u_{3n-3}| mod |u_{3n}|`.
    #[serde(serialize_with = "ser_dec")]
    pub residue: BigUint,
    #[serde(serialize_with = "ser_dec")]
    pub y: BigUint,
    #[serde(serialize_with = "ser_dec")]
    pub gcd_w_next_v: BigUint,
    #[serde(serialize_with = "ser_dec")]
    pub gcd_u_v_after: BigUint,
    #[serde(serialize_with = "ser_dec")]
    pub slack: BigUint,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrrationalPlan {
    #[serde(serialize_with = "ser_dec_vec")]
    pub ks: Vec<BigUint>,
    pub blocks: Vec<IrrationalBlock>,
    /// `q_n = |u_{3n}|`, `n = 0..=n_blocks`.
    #[serde(serialize_with = "ser_dec_vec")]
    pub q: Vec<BigUint>,
    /// `y_1, y_2, …`
    #[serde(serialize_with = "ser_dec_vec")]
    pub y: Vec<BigUint>,
    /// `m_n = |w_{3n-3}| + ⋯ + |w_0|`, with `m_0 = 0`.
    #[serde(serialize_with = "ser_dec_vec")]
    pub m: Vec<BigUint>,
    /// `(|u_{3n}|, |v_{3n}|, |w_{3n}|)`.
    #[serde(serialize_with = "ser_dec_triples")]
    pub lengths: Vec<[BigUint; 3]>,
}

impl IrrationalPlan {
    /// The itinerary as machine integers, if every entry fits.
    pub fn ks_u64(&self) -> Result<KSequence> {
        let v = self
            .ks
            .iter()
            .map(|k| k.to_u64().ok_or_else(|| Error::InvalidParameters(format!("k = {k} exceeds 64 bits"))))
            .collect::<Result<Vec<_>>>()?;
        KSequence::new(v)
    }
}

fn mod_inv(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    crate::rational::mod_inverse(&big(a), &big(m)).map(|x| x.to_biguint().expect("reduced residue"))
}

/// Itinerary whose BT map is isomorphic to the rotation by
/// `γ = [0; y_1, y_2, …]`. The residue before the first block is taken as
/// `|u_{-3}| = 0`, so that `q_{-1} = 0`, `q_0 = 1` as for continued
/// fractions.
pub fn build_irrational(n_blocks: usize) -> Result<IrrationalPlan> {
    if n_blocks == 0 {
        return Err(Error::InvalidParameters("need at least one block".into()));
    }
    let mut ks: Vec<BigUint> = Vec::new();
    let mut h = [BigUint::one(), BigUint::one(), BigUint::one()];
    let mut prev_u = BigUint::zero();
    let mut lengths = vec![h.clone()];
    let (mut q, mut y, mut m) = (vec![BigUint::one()], Vec::new(), vec![BigUint::zero()]);
    let mut blocks = Vec::new();
    for n in 0..n_blocks {
        let [u, v, w] = h.clone();
        let step = format!("block {n}");
        if !u.gcd(&v).is_one() {
            return Err(fail(&step, "|u| and |v| not coprime"));
        }
        let residue = &prev_u % &u;
        // k_2 |v| + |w| ≡ residue (mod |u|), least positive solution
        let inv = mod_inv(&(&v % &u), &u).ok_or_else(|| fail(&step, "|v| not invertible mod |u|"))?;
        let target = (&residue + &u - (&w % &u)) % &u;
        let mut k2 = (target * inv) % &u;
        if k2.is_zero() {
            k2 = u.clone();
        }
        // least k_1 with the growth inequality and gcd(|w_{3n+1}|, |v|) = 1
        let rhs = pow2(n) * (&w + &k2 * &v);
        let mut k1 = &rhs / &u + 2u32;
        let mut tries = BigUint::zero();
        let w1 = loop {
            let w1 = &w + (&k1 - 1u32) * &u;
            if w1.gcd(&v).is_one() {
                break w1;
            }
            k1 += 1u32;
            tries += 1u32;
            if tries > v {
                return Err(fail(&step, "no k_{3n+1} makes |w_{3n+1}| coprime to |v|"));
            }
        };
        let k3 = &w1 + &k2 * &v;
        let slack = (&k1 - 1u32) * &u - &rhs;
        let next = lengths_step(&lengths_step(&lengths_step(&h, &k1), &k2), &k3);
        if next[0] != k3 {
            return Err(fail(&step, "k_{3n+3} differs from |u_{3n+3}|"));
        }
        if (&next[0] % &u) != residue {
            return Err(fail(&step, "congruence"));
        }
        let yn = (&next[0] - &prev_u) / &u;
        if &yn * &u + &prev_u != next[0] || yn < &k1 - 1u32 {
            return Err(fail(&step, "y recursion"));
        }
        let g_after = next[0].gcd(&next[1]);
        if !g_after.is_one() {
            return Err(fail(&step, "gcd(|u_{3n+3}|, |v_{3n+3}|) != 1"));
        }
        let gcd_w = w1.gcd(&v);
        ks.extend([k1.clone(), k2.clone(), k3.clone()]);
        m.push(m.last().unwrap() + &w);
        y.push(yn.clone());
        q.push(next[0].clone());
        blocks.push(IrrationalBlock {
            n,
            k_first: k1,
            k_second: k2,
            k_third: k3,
            residue,
            y: yn,
            gcd_w_next_v: gcd_w,
            gcd_u_v_after: g_after,
            slack,
        });
        prev_u = u;
        h = next;
        lengths.push(h.clone());
    }
    Ok(IrrationalPlan { ks, blocks, q, y, m, lengths })
}

/// Convergents `p_n / q_n` of `[0; y_1, y_2, …]`, `n = 0..=len(y)`.
pub fn convergents(y: &[BigUint]) -> Vec<Rat> {
    let (mut p0, mut p1) = (BigUint::one(), BigUint::zero());
    let (mut q0, mut q1) = (BigUint::zero(), BigUint::one());
    let mut out = vec![Rat::zero()];
    for a in y {
        let p2 = a * &p1 + &p0;
        let q2 = a * &q1 + &q0;
        (p0, p1, q0, q1) = (p1, p2, q1, q2);
        out.push(ratio(&p1, &q1));
    }
    out
}

/// A convergent within `precision` of `γ`, with the bound
/// `|γ - p_n/q_n| ≤ 1/(q_n q_{n+1})`.
pub fn gamma_approximant(plan: &IrrationalPlan, precision: &Rat) -> Result<(Rat, Rat)> {
    if plan.y.len() < 2 {
        return Err(Error::InsufficientPrecision("need at least two blocks".into()));
    }
    let conv = convergents(&plan.y);
    for n in 1..plan.q.len() - 1 {
        let err = Rat::new(1.into(), big(&(&plan.q[n] * &plan.q[n + 1])));
        if &err <= precision {
            return Ok((conv[n].clone(), err));
        }
    }
    Err(Error::InsufficientPrecision(format!("{} blocks cannot reach {}", plan.blocks.len(), crate::rational::fmt_rat(precision))))
}

/// The most precise convergent the plan supports, with its error bound.
pub fn best_gamma(plan: &IrrationalPlan) -> Result<(Rat, Rat)> {
    if plan.y.len() < 2 {
        return Err(Error::InsufficientPrecision("need at least two blocks".into()));
    }
    let n = plan.q.len() - 2;
    let conv = convergents(&plan.y);
    Ok((conv[n].clone(), Rat::new(1.into(), big(&(&plan.q[n] * &plan.q[n + 1])))))
}

/// Length ledgers of the spacer towers `z_n`, `b_n` and the rotation towers
/// `c_n`, `d_n`, checked against the plan.
pub fn spacer_towers(plan: &IrrationalPlan, n: usize) -> Result<Report> {
    let nb = plan.blocks.len();
    if n > nb {
        return Err(Error::SequenceTooShort { needed: n, have: nb });
    }
    let mut r = Report::new(format!("spacer and rotation towers up to level {n}"));
    let (mut z, mut b, mut c, mut d) = (BigUint::one(), BigUint::one(), BigUint::one(), BigUint::zero());
    let (mut z_ok, mut b_ok, mut c_ok, mut m_ok) = (true, true, true, true);
    let mut m_sum = BigUint::zero();
    let mut terms = Vec::new();
    let mut series_ok = true;
    for i in 0..n {
        let blk = &plan.blocks[i];
        let [u, v, w] = &plan.lengths[i];
        let s = w + &blk.k_second * v;
        let s_prime = if i == 0 { BigUint::zero() } else { plan.lengths[i - 1][0].clone() };
        z = (&blk.k_first - 1u32) * &z + &s;
        b = &blk.y * &b + &s_prime;
        (c, d) = (&blk.y * &c + &d, c);
        let next_u = &plan.lengths[i + 1][0];
        z_ok &= &z == next_u;
        b_ok &= b == plan.q[i + 1];
        c_ok &= c == plan.q[i + 1] && d == plan.q[i];
        m_sum += w;
        m_ok &= m_sum == plan.m[i + 1];
        let t = ratio(&s, next_u);
        series_ok &= t < ratio(&BigUint::one(), &pow2(i));
        terms.push((t, ratio(&plan.m[i + 1], next_u), ratio(u, next_u)));
    }
    r.push(Check::new("z-height", z_ok, "|z_n| = |u_{3n}|"));
    r.push(Check::new("b-height", b_ok, "|b_n| = q_n"));
    r.push(Check::new("c-height", c_ok, "|c_n| = q_n and |d_n| = q_{n-1}"));
    r.push(Check::new("m-partial-sums", m_ok, "m_{n+1} = |w_{3n}| + ... + |w_0|"));
    r.push(
        Check::new("spacer-series", series_ok, "(|w_{3n}| + k_{3n+2}|v_{3n}|) / |u_{3n+3}| < 2^-n")
            .with("terms", Value::List { values: terms.iter().map(|t| Value::float(rat_to_f64(&t.0))).collect() }),
    );
    let dec = |sel: fn(&(Rat, Rat, Rat)) -> &Rat| terms.windows(2).all(|p| sel(&p[1]) < sel(&p[0]));
    r.push(Check::new("m-series-decreasing", dec(|t| &t.1), "m_{n+1} / |u_{3n+3}| decreasing"));
    r.push(Check::new("q-series-decreasing", dec(|t| &t.2), "|u_{3n}| / |u_{3n+3}| decreasing"));
    Ok(r)
}

/// Check `f_n(Tx) = e^{2πiγ} f_n(x)` where `f_n = e^{2πijγ}` on level
/// `m_n + j` of `u_{3n}` and `1` elsewhere, with `γ` replaced by its best
/// available convergent.
pub fn gamma_eigen_residual(plan: &IrrationalPlan, n: usize, n_points: usize, seed: u64) -> Result<ResidualReport> {
    let nb = plan.blocks.len();
    if n + 1 > nb {
        return Err(Error::InvalidParameters(format!("level index must be below {nb}")));
    }
    let (gamma, err) = best_gamma(plan)?;
    let ks = &plan.ks;
    let (lo, hi) = (3 * n, 3 * n + 3);
    let ledger = length_ledger(ks);
    let mn = &plan.m[n];
    let hu = &ledger[lo][0];
    let phase = |t: usize, l: &BigUint| -> Option<f64> {
        (t == 0 && l >= mn).then(|| rat_to_f64(&frac(&(&gamma * Rat::from_integer(big(&(l - mn)))))))
    };
    let step = rat_to_f64(&gamma);
    let tau = std::f64::consts::TAU;
    let pts = sample_positions(ks, &ledger, hi, n_points, seed)?;
    let evals: Vec<(bool, f64)> = pts
        .par_iter()
        .map(|(j, p)| {
            let (t0, l0) = locate(&ledger, hi, *j, p, lo);
            let (t1, l1) = locate(&ledger, hi, *j, &(p + 1u32), lo);
            let a = phase(t0, &l0).unwrap_or(0.0) + step;
            let b = phase(t1, &l1).unwrap_or(0.0);
            let res = ((tau * a).cos() - (tau * b).cos()).hypot((tau * a).sin() - (tau * b).sin());
            let good = t0 == 0 && &l0 >= mn && &(&l0 + 1u32) < hu;
            (good, res)
        })
        .collect();
    let direct = masses(ks, lo)?;
    let via = masses_via(ks, &ledger, lo, hi)?;
    let low_levels = &direct[0] * ratio(&(mn + 1u32), hu);
    let excluded = &direct[1] + &direct[2] + low_levels + tops_mass(ks, &ledger, hi)?;
    let bound = if n >= 2 { ratio(&BigUint::one(), &pow2(n - 2)) } else { Rat::from_integer((1i64 << (2 - n)).into()) };
    Ok(ResidualReport {
        level: lo,
        sampled: evals.len(),
        good_points: evals.iter().filter(|e| e.0).count(),
        residual: evals.iter().filter(|e| e.0).map(|e| e.1).fold(0.0, f64::max),
        residual_all: evals.iter().map(|e| e.1).fold(0.0, f64::max),
        tolerance: tau * rat_to_f64(&err) + 1e-9,
        excluded,
        excluded_bound: bound,
        masses_agree: direct == via,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn small_minus_one() {
        let p = build_minus_one(3, 1).unwrap();
        assert_eq!(&p.ks[..], &[1, 2, 7, 1, 9, 1, 17, 1]);
        assert_eq!(p.lengths[1], [b(2), b(3), b(2)]);
        assert_eq!(p.lengths[2], [b(16), b(17), b(14)]);
    }

    #[test]
    fn small_irrational() {
        let p = build_irrational(2).unwrap();
        assert_eq!(p.ks[..6], [b(4), b(1), b(5), b(46), b(3), b(336)]);
        assert_eq!(p.q, vec![b(1), b(5), b(336)]);
        assert_eq!(p.y, vec![b(5), b(67)]);
    }

    #[test]
    fn locate_matches_words() {
        let ks: Vec<u64> = vec![2, 3, 1, 2];
        let bk: Vec<BigUint> = ks.iter().map(|&k| b(k)).collect();
        let ledger = length_ledger(&bk);
        let fine = crate::sadic::tower_names(&ks, 4, 1000).unwrap();
        let coarse = crate::sadic::tower_names(&ks, 2, 1000).unwrap();
        for j in 0..3 {
            let word = fine.name(j).unwrap();
            let mut pos = 0usize;
            for &letter in &word {
                let (t, l) = locate(&ledger, 4, j, &b(pos as u64), 2);
                let coarse_word = coarse.name(t).unwrap();
                let l = l.to_usize().unwrap();
                assert_eq!(coarse_word[l], letter);
                pos += 1;
            }
        }
    }

    #[test]
    fn convergent_bounds() {
        let p = build_irrational(3).unwrap();
        let conv = convergents(&p.y);
        for n in 0..conv.len() {
            assert_eq!(*conv[n].denom(), big(&p.q[n]));
        }
    }
}
