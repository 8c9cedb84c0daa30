//! Rauzy-type induction on the lengths of a `d`-interval Bruin map, its
//! acceleration, and the dual induction on band heights.
//!
//! Lengths transform as `λ = D λ'` (Case 1) or `λ = C λ'` (Case 3), so one
//! accelerated step is `λ = Z_d(k) λ'` with `Z_d(k) = D^{k-1} C`. Heights
//! transform by `h' = transpose(A_d(k)) h`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::cocycles::{a_matrix, c_matrix, d_matrix, vc_matrix, vd_matrix, z_matrix};
use crate::error::{Error, Result};
use crate::kseq::{check_ks, KSequence};
use crate::matrix::IntMatrix;
use crate::rational::{fmt_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// Case 1: `λ_1 > λ_2 + ⋯ + λ_d`.
    Expand,
    /// Case 2: the map reduces to fewer intervals (finite type).
    Reduce,
    /// Case 3: `λ_1 < λ_d`.
    Swap,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionStep {
    pub case_tag: CaseTag,
    /// `λ = length_matrix · λ'`. Identity for `Reduce`.
    pub length_matrix: IntMatrix,
    /// `h' = height_matrix · h`. Identity for `Reduce`.
    pub height_matrix: IntMatrix,
    /// Unnormalised lengths after the step; unchanged for `Reduce`.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub new_lambda: Vec<Rat>,
}

fn check_lambda(lambda: &[Rat], d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::InvalidDimension { min: 3, got: d });
    }
    if lambda.len() != d {
        return Err(Error::DimensionMismatch(d, lambda.len()));
    }
    if lambda.iter().any(|l| l.is_negative()) {
        return Err(Error::InvalidParameters("negative length".into()));
    }
    Ok(())
}

fn zero_length_boundary(lambda: &[Rat], step: usize) -> Result<()> {
    if let Some(i) = lambda.iter().position(|l| l.is_zero()) {
        return Err(Error::Boundary { step, reason: format!("interval {} has zero length", i + 1) });
    }
    Ok(())
}

pub fn normalize(lambda: &[Rat]) -> Vec<Rat> {
    let s: Rat = lambda.iter().sum();
    lambda.iter().map(|l| l / &s).collect()
}

/// One step of the induction.
pub fn r_step(lambda: &[Rat], d: usize) -> Result<InductionStep> {
    check_lambda(lambda, d)?;
    zero_length_boundary(lambda, 1)?;
    let rest: Rat = lambda[1..].iter().sum();
    let l1 = &lambda[0];
    let ld = &lambda[d - 1];
    if l1 > &rest {
        let mut new_lambda = lambda.to_vec();
        new_lambda[0] = l1 - &rest;
        return Ok(InductionStep {
            case_tag: CaseTag::Expand,
            length_matrix: d_matrix(d)?,
            height_matrix: vd_matrix(d)?,
            new_lambda,
        });
    }
    if l1 < ld {
        let mut new_lambda: Vec<Rat> = lambda[1..d - 1].to_vec();
        new_lambda.push(l1.clone());
        new_lambda.push(ld - l1);
        return Ok(InductionStep {
            case_tag: CaseTag::Swap,
            length_matrix: c_matrix(d)?,
            height_matrix: vc_matrix(d)?,
            new_lambda,
        });
    }
    if l1 == &rest {
        return Err(Error::Boundary { step: 1, reason: "λ_1 equals the sum of the other lengths".into() });
    }
    if l1 == ld {
        return Err(Error::Boundary { step: 1, reason: "λ_1 equals λ_d".into() });
    }
    Ok(InductionStep {
        case_tag: CaseTag::Reduce,
        length_matrix: IntMatrix::identity(d),
        height_matrix: IntMatrix::identity(d),
        new_lambda: lambda.to_vec(),
    })
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ZOutcome {
    /// `λ = Z_d(k) λ'` up to scale; `lambda` is normalised to the simplex.
    Step {
        k: u64,
        #[serde_as(as = "Vec<DisplayFromStr>")]
        lambda: Vec<Rat>,
    },
    /// Case 2 occurred after `expand_steps` Case-1 steps.
    Reduce { expand_steps: u64 },
}

/// One accelerated step. The number of Case-1 steps is found by a single
/// division rather than by iterating.
pub fn z_step(lambda: &[Rat], d: usize) -> Result<ZOutcome> {
    check_lambda(lambda, d)?;
    zero_length_boundary(lambda, 1)?;
    let rest: Rat = lambda[1..].iter().sum();
    let q = &lambda[0] / &rest;
    if q.is_integer() && !q.is_zero() {
        return Err(Error::Boundary { step: 1, reason: "λ_1 becomes equal to the sum of the other lengths".into() });
    }
    let m = q.floor().to_integer();
    let l1 = &lambda[0] - &rest * Rat::from_integer(m.clone());
    let ld = &lambda[d - 1];
    if &l1 == ld {
        return Err(Error::Boundary { step: 1, reason: "λ_1 equals λ_d after the Case-1 steps".into() });
    }
    let m_u64 = m.to_u64().ok_or_else(|| Error::InvalidParameters("k overflows u64".into()))?;
    if &l1 > ld {
        return Ok(ZOutcome::Reduce { expand_steps: m_u64 });
    }
    let mut out: Vec<Rat> = lambda[1..d - 1].to_vec();
    out.push(l1.clone());
    out.push(ld - &l1);
    Ok(ZOutcome::Step { k: m_u64 + 1, lambda: normalize(&out) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "exit", content = "step", rename_all = "snake_case")]
pub enum Exit {
    Completed,
    /// Case 2 reached during accelerated step number `step` (1-based).
    Reduced(usize),
}

/// Apply `z_step` up to `n` times, collecting the `k`'s.
pub fn itinerary(lambda: &[Rat], d: usize, n: usize) -> Result<(KSequence, Exit)> {
    let mut cur = normalize(lambda);
    let mut ks = Vec::with_capacity(n);
    for step in 1..=n {
        let res = z_step(&cur, d).map_err(|e| match e {
            Error::Boundary { reason, .. } => Error::Boundary { step, reason },
            e => e,
        })?;
        match res {
            ZOutcome::Step { k, lambda } => {
                ks.push(k);
                cur = lambda;
            }
            ZOutcome::Reduce { .. } => return Ok((KSequence::new(ks)?, Exit::Reduced(step))),
        }
    }
    Ok((KSequence::new(ks)?, Exit::Completed))
}

/// A point of the cone `Z_d(k_1)⋯Z_d(k_depth)·Δ`, normalised, together with
/// the L∞ diameter of the cone's trace on the simplex.
///
/// The returned point is the image of the barycentre; it lies strictly
/// inside the cone, so its itinerary starts with `ks[..depth]`.
pub fn params_from_itinerary(ks: &[u64], d: usize, depth: usize) -> Result<(Vec<Rat>, Rat)> {
    if d < 3 {
        return Err(Error::InvalidDimension { min: 3, got: d });
    }
    if ks.len() < depth {
        return Err(Error::SequenceTooShort { needed: depth, have: ks.len() });
    }
    check_ks(&ks[..depth])?;
    let mut p = IntMatrix::identity(d);
    for &k in &ks[..depth] {
        p = &p * &z_matrix(d, k)?;
    }
    let ones = vec![BigInt::one(); d];
    let v = p.mul_vec(&ones);
    let lambda = normalize(&v.into_iter().map(Rat::from_integer).collect::<Vec<_>>());
    let cols: Vec<Vec<Rat>> = (0..d)
        .map(|j| normalize(&p.column(j).into_iter().map(Rat::from_integer).collect::<Vec<_>>()))
        .collect();
    let mut diam = Rat::zero();
    for a in 0..d {
        for b in a + 1..d {
            for i in 0..d {
                let dist = (&cols[a][i] - &cols[b][i]).abs();
                if dist > diam {
                    diam = dist;
                }
            }
        }
    }
    if depth == 0 {
        diam = Rat::one();
    }
    Ok((lambda, diam))
}

/// Lengths paired with band heights.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspensionState {
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub lambda: Vec<Rat>,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub h: Vec<BigInt>,
}

impl SuspensionState {
    pub fn new(lambda: Vec<Rat>, h: Vec<BigInt>) -> Result<Self> {
        if lambda.len() != h.len() {
            return Err(Error::DimensionMismatch(lambda.len(), h.len()));
        }
        if h.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidParameters("heights must be positive".into()));
        }
        if lambda.iter().any(|l| !l.is_positive()) {
            return Err(Error::InvalidParameters("lengths must be positive".into()));
        }
        Ok(SuspensionState { lambda, h })
    }

    /// Unit heights over the given lengths.
    pub fn unit(lambda: Vec<Rat>) -> Result<Self> {
        let d = lambda.len();
        Self::new(lambda, vec![BigInt::one(); d])
    }

    pub fn d(&self) -> usize {
        self.h.len()
    }
}

/// `h' = transpose(A_d(k)) h`.
pub fn heights_step(h: &[BigInt], k: u64, d: usize) -> Result<Vec<BigInt>> {
    if h.len() != d {
        return Err(Error::DimensionMismatch(d, h.len()));
    }
    Ok(a_matrix(d, k)?.transpose().mul_vec(h))
}

/// One accelerated step on a suspension: heights by `transpose(A_d(k))`,
/// lengths by `Z_d(k)^{-1}` without renormalising. `k` must agree with the
/// itinerary read off the lengths.
pub fn height_step(state: &SuspensionState, k: u64, d: usize) -> Result<SuspensionState> {
    if state.d() != d {
        return Err(Error::DimensionMismatch(d, state.d()));
    }
    match z_step(&state.lambda, d)? {
        ZOutcome::Step { k: found, .. } if found == k => {}
        ZOutcome::Step { k: found, .. } => {
            return Err(Error::ItineraryMismatch { expected: k, found: found.to_string() })
        }
        ZOutcome::Reduce { .. } => {
            return Err(Error::ItineraryMismatch { expected: k, found: "reduce".into() })
        }
    }
    let zinv = z_matrix(d, k)?.inverse()?;
    Ok(SuspensionState { lambda: zinv.mul_rat_vec(&state.lambda), h: heights_step(&state.h, k, d)? })
}

/// Area `⟨h, λ⟩` of the band complex.
pub fn area(state: &SuspensionState) -> Rat {
    state.h.iter().zip(&state.lambda).map(|(h, l)| Rat::from_integer(h.clone()) * l).sum()
}

/// `k = ⌊1/α⌋`, the substitution index attached to a BT parameter `α` by
/// the original Gauss-like coding.
pub fn bt_first_k(alpha: &Rat) -> Result<u64> {
    if !alpha.is_positive() {
        return Err(Error::InvalidParameters(format!("alpha = {}", fmt_rat(alpha))));
    }
    (Rat::one() / alpha)
        .floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameters("k overflow".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn tenths(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 10)).collect()
    }

    #[test]
    fn three_cases() {
        let s = r_step(&tenths(&[6, 2, 1, 1]), 4).unwrap();
        assert_eq!(s.case_tag, CaseTag::Expand);
        assert_eq!(s.new_lambda, tenths(&[2, 2, 1, 1]));
        let s = r_step(&tenths(&[1, 3, 2, 4]), 4).unwrap();
        assert_eq!(s.case_tag, CaseTag::Swap);
        assert_eq!(s.new_lambda, tenths(&[3, 2, 1, 3]));
        let s = r_step(&tenths(&[3, 3, 2, 2]), 4).unwrap();
        assert_eq!(s.case_tag, CaseTag::Reduce);
        assert!(matches!(r_step(&tenths(&[5, 2, 2, 1]), 4), Err(Error::Boundary { .. })));
        assert!(matches!(r_step(&tenths(&[2, 3, 3, 2]), 4), Err(Error::Boundary { .. })));
    }

    #[test]
    fn length_matrices_invert_the_step() {
        for v in [[6, 2, 1, 1], [1, 3, 2, 4]] {
            let lam = tenths(&v);
            let s = r_step(&lam, 4).unwrap();
            assert_eq!(s.length_matrix.mul_rat_vec(&s.new_lambda), lam);
        }
    }

    #[test]
    fn z_step_examples() {
        let ninths: Vec<Rat> = [3, 2, 1, 3].iter().map(|&x| rat(x, 9)).collect();
        assert_eq!(z_step(&tenths(&[1, 3, 2, 4]), 4).unwrap(), ZOutcome::Step { k: 1, lambda: ninths });
        // one Case-1 step to (2,2,1,1), then λ_4 < λ_1 < rest
        assert_eq!(z_step(&tenths(&[6, 2, 1, 1]), 4).unwrap(), ZOutcome::Reduce { expand_steps: 1 });
    }

    #[test]
    fn boundary_on_degenerate_input() {
        let lam = vec![rat(2, 3), rat(0, 1), rat(1, 3)];
        assert_eq!(itinerary(&lam, 3, 4).unwrap_err(), Error::Boundary { step: 1, reason: "interval 2 has zero length".into() });
    }

    #[test]
    fn depth_zero_cone() {
        let (lam, err) = params_from_itinerary(&[], 3, 0).unwrap();
        assert_eq!(lam, vec![rat(1, 3); 3]);
        assert_eq!(err, rat(1, 1));
        assert!(params_from_itinerary(&[2, 2], 3, 3).is_err());
    }

    #[test]
    fn height_examples() {
        let one = |d| vec![BigInt::one(); d];
        let h = heights_step(&one(3), 2, 3).unwrap();
        assert_eq!(h, vec![BigInt::from(1), BigInt::from(3), BigInt::from(2)]);
        let h = heights_step(&one(4), 1, 4).unwrap();
        assert_eq!(h, vec![BigInt::from(1), BigInt::from(1), BigInt::from(2), BigInt::from(1)]);
    }
}
