//! Exact rational helpers shared by every module.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::MalformedRational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Parse a comma separated list of rationals.
pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(parse_rat).collect()
}

/// Lossless `"p/q"` rendering (integers print without a denominator).
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floating approximation that stays accurate for huge numerators and
/// denominators (plain `to_f64` on each part overflows).
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    // scale so the quotient keeps 64 significant bits
    let scaled = if shift > 64 {
        r.numer().abs() / (r.denom() << ((shift - 64) as usize))
    } else {
        (r.numer().abs() << ((64 - shift) as usize)) / r.denom()
    };
    let mant = scaled.to_f64().unwrap_or(f64::NAN);
    let v = mant * 2f64.powi((shift - 64) as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Distance from `r` to the nearest integer, exact.
pub fn dist_to_int(r: &Rat) -> Rat {
    let f = frac(r);
    let g = Rat::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    r - Rat::from_integer(r.floor().to_integer())
}

/// Signed representative of `r` modulo 1 in `(-1/2, 1/2]`.
pub fn centered_mod1(r: &Rat) -> Rat {
    let f = frac(r);
    if f > rat(1, 2) {
        f - Rat::one()
    } else {
        f
    }
}

pub fn big_to_biguint(x: &BigInt) -> Option<BigUint> {
    match x.sign() {
        Sign::Minus => None,
        _ => Some(x.magnitude().clone()),
    }
}

/// Modular inverse of `a` modulo `m` (`m >= 1`), if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Integer square root test.
pub fn is_perfect_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = x.sqrt();
    &(&r * &r) == x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" -3 ").unwrap(), int(-3));
        assert_eq!(fmt_rat(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rat(&int(7)), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/2").is_err());
        assert_eq!(parse_rat_list("1/4,1/2").unwrap(), vec![rat(1, 4), rat(1, 2)]);
    }

    #[test]
    fn huge_ratio_to_float() {
        let big = BigInt::from(10).pow(400u32);
        let r = Rat::new(big.clone() * 3, big * 4);
        assert!((rat_to_f64(&r) - 0.75).abs() < 1e-15);
        let tiny = Rat::new(BigInt::one(), BigInt::from(10).pow(320u32));
        assert!((rat_to_f64(&tiny) / 1e-320 - 1.0).abs() < 1e-6 || rat_to_f64(&tiny) == 0.0);
        let r = Rat::new(BigInt::from(-7), BigInt::from(10).pow(30u32));
        assert!((rat_to_f64(&r) + 7e-30).abs() < 1e-44);
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mod_inverse(&BigInt::from(3), &BigInt::from(7)), Some(BigInt::from(5)));
        assert_eq!(mod_inverse(&BigInt::from(2), &BigInt::from(4)), None);
        assert_eq!(dist_to_int(&rat(7, 4)), rat(1, 4));
        assert_eq!(centered_mod1(&rat(3, 4)), rat(-1, 4));
        assert!(is_perfect_square(&BigInt::from(144)));
        assert!(!is_perfect_square(&BigInt::from(148)));
        assert!(!is_perfect_square(&BigInt::from(-4)));
    }
}
