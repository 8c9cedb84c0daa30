use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An itinerary `(k_1, k_2, …)` with every `k_i ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct KSequence(Vec<u64>);

impl KSequence {
    pub fn new(ks: Vec<u64>) -> Result<Self> {
        if let Some(&k) = ks.iter().find(|&&k| k == 0) {
            return Err(Error::InvalidK(k));
        }
        Ok(KSequence(ks))
    }

    pub fn constant(k: u64, n: usize) -> Result<Self> {
        Self::new(vec![k; n])
    }

    /// `pattern` repeated cyclically up to length `n`.
    pub fn periodic(pattern: &[u64], n: usize) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidParameters("empty period".into()));
        }
        Self::new(pattern.iter().copied().cycle().take(n).collect())
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

impl Deref for KSequence {
    type Target = [u64];
    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl TryFrom<Vec<u64>> for KSequence {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        KSequence::new(v)
    }
}

impl From<KSequence> for Vec<u64> {
    fn from(k: KSequence) -> Vec<u64> {
        k.0
    }
}

impl FromStr for KSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let ks = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::InvalidParameters(format!("bad k {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        KSequence::new(ks)
    }
}

impl fmt::Display for KSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Check a raw slice without allocating.
pub(crate) fn check_ks(ks: &[u64]) -> Result<()> {
    match ks.iter().find(|&&k| k == 0) {
        Some(&k) => Err(Error::InvalidK(k)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reject_zero() {
        let k: KSequence = "3, 1,4".parse().unwrap();
        assert_eq!(&*k, &[3, 1, 4]);
        assert_eq!(k.to_string(), "3,1,4");
        assert!("1,0".parse::<KSequence>().is_err());
        assert!(serde_json::from_str::<KSequence>("[2,0]").is_err());
        assert_eq!(KSequence::periodic(&[1, 2], 5).unwrap().into_vec(), vec![1, 2, 1, 2, 1]);
    }
}
