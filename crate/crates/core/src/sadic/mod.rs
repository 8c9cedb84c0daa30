//! Substitutions `χ_k`, their tower names and the Veech residual.

mod word;

pub use word::{lcp, Word};

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cocycles::a_matrix;
use crate::error::{Error, Result};
use crate::kseq::check_ks;
use crate::matrix::IntMatrix;
use crate::rational::{dist_to_int, Rat};

/// Steps allowed to the common-prefix search on tower names.
const LCP_BUDGET: usize = 1_000_000;

/// Letters materialised at most by the coincidence search.
const SEARCH_CAP: usize = 1 << 18;

/// A substitution on `{1, …, d}`. Images are lazy words so that powers
/// like `1^k` with huge `k` stay cheap.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    d: usize,
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(d: usize, images: Vec<Vec<u32>>) -> Result<Self> {
        Self::from_words(d, images.iter().map(|w| Word::from_letters(w)).collect())
    }

    pub fn from_words(d: usize, images: Vec<Word>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension { min: 1, got: 0 });
        }
        if images.len() != d {
            return Err(Error::DimensionMismatch(d, images.len()));
        }
        for (a, w) in images.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::InvalidParameters(format!("image of {} is empty", a + 1)));
            }
            w.check_letters(d)?;
        }
        Ok(Substitution { d, images })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(d, (1..=d as u32).map(|a| vec![a]).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Image of letter `a` (1-based).
    pub fn image(&self, a: u32) -> &Word {
        &self.images[a as usize - 1]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Apply to a word, keeping shared subtrees shared.
    pub fn apply(&self, w: &Word) -> Word {
        let mut memo = HashMap::new();
        self.apply_memo(w, &mut memo)
    }

    fn apply_memo(&self, w: &Word, memo: &mut HashMap<usize, Word>) -> Word {
        let key = w.addr();
        if let Some(r) = memo.get(&key) {
            return r.clone();
        }
        let out = match w.view() {
            word::View::Letter(a) => self.image(a).clone(),
            word::View::Concat(parts) => Word::concat(parts.iter().map(|p| self.apply_memo(p, memo)).collect()),
            word::View::Power(base, c) => Word::power(&self.apply_memo(base, memo), c.clone()),
        };
        memo.insert(key, out.clone());
        out
    }

    /// Images rendered as strings of letters, if short enough.
    pub fn to_strings(&self, cutoff: usize) -> Vec<Option<String>> {
        self.images
            .iter()
            .map(|w| w.materialize(cutoff).map(|v| letters_to_string(&v)))
            .collect()
    }
}

fn letters_to_string(v: &[u32]) -> String {
    let sep = if v.iter().any(|&a| a > 9) { "," } else { "" };
    v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(sep)
}

/// `χ_k` on `d` letters: `i ↦ i+1` for `i ≤ d-2`, `d-1 ↦ d 1^k`,
/// `d ↦ d 1^{k-1}`.
pub fn chi(d: usize, k: u64) -> Result<Substitution> {
    if d < 3 {
        return Err(Error::InvalidDimension { min: 3, got: d });
    }
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    let one = Word::letter(1);
    let last = Word::letter(d as u32);
    let mut images: Vec<Word> = (2..d as u32).map(Word::letter).collect();
    images.push(Word::concat(vec![last.clone(), Word::power(&one, BigUint::from(k))]));
    images.push(Word::concat(vec![last, Word::power(&one, BigUint::from(k - 1))]));
    Substitution::from_words(d, images)
}

/// `s ∘ t`: apply `t`, then `s`.
pub fn compose(s: &Substitution, t: &Substitution) -> Result<Substitution> {
    if s.d != t.d {
        return Err(Error::DimensionMismatch(s.d, t.d));
    }
    let images = t.images.iter().map(|w| s.apply(w)).collect();
    Ok(Substitution { d: s.d, images })
}

/// Incidence matrix: entry `(i, j)` counts letter `i` in the image of `j`.
pub fn abelianization(s: &Substitution) -> IntMatrix {
    let d = s.d;
    let mut entries = vec![BigInt::zero(); d * d];
    for (j, w) in s.images.iter().enumerate() {
        for (i, c) in w.abelianization(d).into_iter().enumerate() {
            entries[i * d + j] = BigInt::from(c);
        }
    }
    IntMatrix::from_entries(d, entries).expect("square by construction")
}

pub fn is_left_proper(s: &Substitution) -> bool {
    let first: Vec<u32> = s.images.iter().map(|w| w.letter_at(&BigUint::zero()).expect("nonempty")).collect();
    first.windows(2).all(|p| p[0] == p[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Prefix,
    Suffix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Coincidence {
    /// `ζ^power(a) = p_a b s_a` for every letter `a`, with all `p_a` (or all
    /// `s_a`) sharing one abelianisation.
    Yes { power: u32, letter: u32, side: Side },
    Unknown { searched: u32 },
}

/// Search powers up to `max_power` for the strong coincidence condition.
pub fn strong_coincidence(s: &Substitution, max_power: u32) -> Result<Coincidence> {
    if max_power == 0 {
        return Err(Error::InvalidParameters("max_power must be at least 1".into()));
    }
    if is_left_proper(s) {
        let b = s.image(1).letter_at(&BigUint::zero())?;
        return Ok(Coincidence::Yes { power: 1, letter: b, side: Side::Prefix });
    }
    let d = s.d;
    let mut p = s.clone();
    for power in 1..=max_power {
        if power > 1 {
            p = compose(s, &p)?;
        }
        let Some(images) = p.images.iter().map(|w| w.materialize(SEARCH_CAP)).collect::<Option<Vec<_>>>() else {
            return Ok(Coincidence::Unknown { searched: power - 1 });
        };
        for b in 1..=d as u32 {
            for side in [Side::Prefix, Side::Suffix] {
                if coincides(&images, d, b, side) {
                    return Ok(Coincidence::Yes { power, letter: b, side });
                }
            }
        }
    }
    Ok(Coincidence::Unknown { searched: max_power })
}

/// Abelianisations of the prefixes (or suffixes) around each occurrence of
/// `b`, intersected across all images.
fn coincides(images: &[Vec<u32>], d: usize, b: u32, side: Side) -> bool {
    let mut common: Option<HashSet<Vec<u64>>> = None;
    for w in images {
        let mut seen = HashSet::new();
        let mut counts = vec![0u64; d];
        let scan: Box<dyn Iterator<Item = &u32>> = match side {
            Side::Prefix => Box::new(w.iter()),
            Side::Suffix => Box::new(w.iter().rev()),
        };
        for &a in scan {
            if a == b && common.as_ref().is_none_or(|c| c.contains(&counts)) {
                seen.insert(counts.clone());
            }
            counts[a as usize - 1] += 1;
        }
        if seen.is_empty() {
            return false;
        }
        common = Some(seen);
    }
    true
}

/// Tower names at level `n`: the words `χ_{k_1} ∘ ⋯ ∘ χ_{k_n}(j)`.
#[derive(Clone, Debug)]
pub struct TowerFamily {
    pub n: usize,
    pub d: usize,
    pub names: Vec<Word>,
    pub heights: Vec<BigUint>,
    pub cutoff: usize,
}

impl TowerFamily {
    /// Materialised name of tower `j` (0-based), if within the cutoff.
    pub fn name(&self, j: usize) -> Option<Vec<u32>> {
        self.names[j].materialize(self.cutoff)
    }

    pub fn name_string(&self, j: usize) -> Option<String> {
        self.name(j).map(|v| letters_to_string(&v))
    }

    pub fn min_height(&self) -> &BigUint {
        self.heights.iter().min().expect("d ≥ 3")
    }

    /// Length of the prefix common to every name.
    pub fn common_prefix(&self) -> Result<BigUint> {
        let mut best = self.names[0].len().clone();
        for w in &self.names[1..] {
            let l = lcp(&self.names[0], w, LCP_BUDGET)?;
            best = best.min(l);
        }
        Ok(best)
    }
}

/// Names `u_n, v_n, w_n` from the seeds `1, 2, 3`.
pub fn tower_names(ks: &[u64], n: usize, cutoff: usize) -> Result<TowerFamily> {
    tower_names_d(ks, n, 3, cutoff)
}

/// Names on `d` letters. For `d = 3` this is the recursion
/// `u' = v`, `v' = w u^k`, `w' = w u^{k-1}`.
pub fn tower_names_d(ks: &[u64], n: usize, d: usize, cutoff: usize) -> Result<TowerFamily> {
    if d < 3 {
        return Err(Error::InvalidDimension { min: 3, got: d });
    }
    check_ks(ks)?;
    if ks.len() < n {
        return Err(Error::SequenceTooShort { needed: n, have: ks.len() });
    }
    let mut names: Vec<Word> = (1..=d as u32).map(Word::letter).collect();
    for &k in &ks[..n] {
        let first = names[0].clone();
        let last = names[d - 1].clone();
        let mut next: Vec<Word> = names[1..d - 1].to_vec();
        next.push(Word::concat(vec![last.clone(), Word::power(&first, BigUint::from(k))]));
        next.push(Word::concat(vec![last, Word::power(&first, BigUint::from(k - 1))]));
        names = next;
    }
    let heights = names.iter().map(|w| w.len().clone()).collect();
    Ok(TowerFamily { n, d, names, heights, cutoff })
}

/// Exact heights `h^{(n)} = (A(k_1) ⋯ A(k_n))^T 1` without building names.
pub fn tower_heights(ks: &[u64], n: usize, d: usize) -> Result<Vec<BigUint>> {
    if ks.len() < n {
        return Err(Error::SequenceTooShort { needed: n, have: ks.len() });
    }
    let mut h = vec![BigInt::from(1); d];
    for &k in &ks[..n] {
        h = a_matrix(d, k)?.transpose().mul_vec(&h);
    }
    Ok(h.into_iter().map(|x| x.to_biguint().expect("heights are positive")).collect())
}

/// `‖t h_i‖` for each tower, the distance to the nearest integer.
pub fn veech_components(ks: &[u64], t: &Rat, n: usize) -> Result<Vec<Rat>> {
    check_ks(ks)?;
    let h = tower_heights(ks, n, 3)?;
    Ok(h.into_iter().map(|x| dist_to_int(&(t * Rat::from_integer(BigInt::from(x))))).collect())
}

pub fn veech_residual(ks: &[u64], t: &Rat, n: usize) -> Result<Rat> {
    Ok(veech_components(ks, t, n)?.into_iter().max().expect("three towers"))
}

/// Relative invariant mass of each tower at level `n`. The base of tower
/// `i` carries measure proportional to `(A(k_{n+1}) ⋯ A(k_N) 1)_i`, where
/// `N` is the full length of `ks`.
pub fn tower_masses(ks: &[u64], n: usize, d: usize) -> Result<Vec<Rat>> {
    check_ks(ks)?;
    if ks.len() < n {
        return Err(Error::SequenceTooShort { needed: n, have: ks.len() });
    }
    let h = tower_heights(ks, n, d)?;
    let mut f = vec![BigInt::from(1); d];
    for &k in ks[n..].iter().rev() {
        f = a_matrix(d, k)?.mul_vec(&f);
    }
    let w: Vec<BigInt> = h.into_iter().zip(f).map(|(h, f)| BigInt::from(h) * f).collect();
    let total: BigInt = w.iter().sum();
    Ok(w.into_iter().map(|x| Rat::new(x, total.clone())).collect())
}

/// Levels `n ≤ n_max` at which every tower has mass at least `mass_eps` and
/// the names share a prefix of at least `share_eps` times the least height.
///
/// Masses use the tail `k_{n+1}, …` of `ks`, so `ks` should run well past
/// `n_max`; a sequence no longer than `n_max` is rejected.
pub fn balanced_times(ks: &[u64], n_max: usize, mass_eps: &Rat, share_eps: &Rat) -> Result<Vec<usize>> {
    check_ks(ks)?;
    if ks.len() <= n_max {
        return Err(Error::SequenceTooShort { needed: n_max + 1, have: ks.len() });
    }
    let mut out = Vec::new();
    for n in 0..=n_max {
        let masses = tower_masses(ks, n, 3)?;
        if masses.iter().any(|m| m < mass_eps) {
            continue;
        }
        let fam = tower_names(ks, n, 0)?;
        let share = Rat::new(
            BigInt::from(fam.common_prefix()?),
            BigInt::from(fam.min_height().clone()),
        );
        if &share >= share_eps {
            out.push(n);
        }
    }
    Ok(out)
}

/// Share of the common prefix in the shortest name, as a float.
pub fn shared_proportion(ks: &[u64], n: usize) -> Result<f64> {
    let fam = tower_names(ks, n, 0)?;
    let l = fam.common_prefix()?;
    Ok(l.to_f64().unwrap_or(f64::INFINITY) / fam.min_height().to_f64().unwrap_or(f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn letters(s: &str) -> Vec<u32> {
        s.chars().map(|c| c.to_digit(10).unwrap()).collect()
    }

    #[test]
    fn chi_images() {
        let s = chi(3, 2).unwrap();
        assert_eq!(s.to_strings(10), vec![Some("2".into()), Some("311".into()), Some("31".into())]);
        let s = chi(4, 1).unwrap();
        assert_eq!(s.to_strings(10)[2..], [Some("41".into()), Some("4".into())]);
        assert_eq!(chi(3, 1).unwrap().to_strings(5)[2], Some("3".into()));
        assert!(chi(3, 0).is_err());
    }

    #[test]
    fn compose_display() {
        let (k, l) = (3, 2);
        let c = compose(&chi(3, k).unwrap(), &chi(3, l).unwrap()).unwrap();
        assert_eq!(c.image(1).materialize(100).unwrap(), letters("3111"));
        assert_eq!(c.image(2).materialize(100).unwrap(), letters("31122"));
        assert_eq!(c.image(3).materialize(100).unwrap(), letters("3112"));
        assert!(is_left_proper(&c));
        assert!(!is_left_proper(&chi(3, k).unwrap()));
    }

    #[test]
    fn abelianization_is_a() {
        for d in 3..6 {
            for k in 1..5 {
                assert_eq!(abelianization(&chi(d, k).unwrap()), a_matrix(d, k).unwrap());
            }
        }
        assert_eq!(abelianization(&Substitution::identity(4).unwrap()), IntMatrix::identity(4));
    }

    #[test]
    fn coincidence() {
        let c = compose(&chi(3, 2).unwrap(), &chi(3, 5).unwrap()).unwrap();
        assert!(matches!(strong_coincidence(&c, 1).unwrap(), Coincidence::Yes { power: 1, letter: 3, .. }));
        assert!(matches!(strong_coincidence(&Substitution::identity(1).unwrap(), 1).unwrap(), Coincidence::Yes { .. }));
        assert_eq!(strong_coincidence(&Substitution::identity(3).unwrap(), 4).unwrap(), Coincidence::Unknown { searched: 4 });
        // 1 → 12, 2 → 212: the final 1 has suffix weight (0, 1) in both
        let s = Substitution::new(2, vec![vec![1, 2], vec![2, 1, 2]]).unwrap();
        assert_eq!(
            strong_coincidence(&s, 1).unwrap(),
            Coincidence::Yes { power: 1, letter: 1, side: Side::Suffix }
        );
    }

    #[test]
    fn seeds_and_small_heights() {
        let f = tower_names(&[4, 7], 0, 10).unwrap();
        assert_eq!(f.heights, vec![BigUint::from(1u32); 3]);
        assert_eq!((f.name(0).unwrap(), f.name(1).unwrap(), f.name(2).unwrap()), (vec![1], vec![2], vec![3]));
        let (k1, k2) = (4u32, 7u32);
        let f = tower_names(&[4, 7], 2, 100).unwrap();
        assert_eq!(f.heights, vec![BigUint::from(k1 + 1), BigUint::from(k1 + k2), BigUint::from(k1 + k2 - 1)]);
    }

    #[test]
    fn veech_integer_t() {
        assert_eq!(veech_residual(&[3, 1, 4, 1, 5], &rat(7, 1), 5).unwrap(), rat(0, 1));
    }

    #[test]
    fn balanced_level_zero() {
        let ks = vec![2; 12];
        let z = rat(0, 1);
        assert!(balanced_times(&ks, 0, &z, &z).unwrap().contains(&0));
        assert!(balanced_times(&ks, 12, &z, &z).is_err());
    }
}
