//! Integer polynomials, with the few exact algorithms the certificates need.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rational::Rat;

/// Polynomial over `Z`, coefficients stored from the constant term up. The
/// zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyZ {
    coeffs: Vec<BigInt>,
}

impl PolyZ {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyZ { coeffs }
    }

    /// From coefficients listed highest degree first, as written by hand.
    pub fn from_desc(c: &[i64]) -> Self {
        PolyZ::new(c.iter().rev().map(|&x| BigInt::from(x)).collect())
    }

    pub fn x_minus(r: i64) -> Self {
        PolyZ::from_desc(&[1, -r])
    }

    pub fn one() -> Self {
        PolyZ::from_desc(&[1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + Rat::from_integer(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        PolyZ::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn mul(&self, o: &PolyZ) -> PolyZ {
        if self.is_zero() || o.is_zero() {
            return PolyZ::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyZ::new(out)
    }

    pub fn sub(&self, o: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyZ::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    /// Exact quotient by a monic divisor, if the remainder vanishes.
    pub fn div_exact_monic(&self, m: &PolyZ) -> Option<PolyZ> {
        debug_assert!(m.is_monic());
        if self.degree() < m.degree() && !self.is_zero() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let dm = m.degree();
        let mut q = vec![BigInt::zero(); r.len().saturating_sub(dm)];
        for i in (dm..r.len()).rev() {
            let c = r[i].clone();
            if c.is_zero() {
                continue;
            }
            q[i - dm] = c.clone();
            for (j, mc) in m.coeffs.iter().enumerate() {
                r[i - dm + j] -= &c * mc;
            }
        }
        r.iter().all(|c| c.is_zero()).then(|| PolyZ::new(q))
    }

    fn to_rat(&self) -> Vec<Rat> {
        self.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }

    /// Human-readable form in the variable `var`.
    pub fn pretty(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if !a.is_one() || i == 0 {
                s.push_str(&a.to_string());
            }
            s.push_str(&mon);
        }
        s
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty("x"))
    }
}

impl fmt::Debug for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyZ({self})")
    }
}

impl Serialize for PolyZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Monic characteristic polynomial `det(x I - M)` by Faddeev–LeVerrier.
pub fn charpoly(m: &IntMatrix) -> PolyZ {
    let n = m.dim();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n);
    let id = IntMatrix::identity(n);
    for k in 1..=n {
        mk = (m * &mk).add(&id.scale(&c[n - k + 1])).expect("same size");
        let t = (m * &mk).trace();
        c[n - k] = -t / BigInt::from(k);
    }
    PolyZ::new(c)
}

/// Resultant of `p` and `q` as the Sylvester determinant.
pub fn resultant(p: &PolyZ, q: &PolyZ) -> BigInt {
    let (m, n) = (p.degree(), q.degree());
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut e = vec![BigInt::zero(); size * size];
    for r in 0..n {
        for i in 0..=m {
            e[r * size + r + i] = p.coeff(m - i);
        }
    }
    for r in 0..m {
        for i in 0..=n {
            e[(n + r) * size + r + i] = q.coeff(n - i);
        }
    }
    IntMatrix::from_entries(size, e).expect("square").det()
}

/// `(-1)^{n(n-1)/2} Res(p, p') / lc(p)`.
pub fn discriminant(p: &PolyZ) -> Result<BigInt> {
    let n = p.degree();
    if n < 2 {
        return Err(Error::UnsupportedDegree(n));
    }
    let r = resultant(p, &p.derivative());
    let s = if (n * (n - 1) / 2).is_multiple_of(2) { r } else { -r };
    Ok(s / p.leading())
}

/// Resolvent cubic of a monic quartic `x^4 + a x^3 + b x^2 + c x + d`.
pub fn resolvent_cubic(p: &PolyZ) -> Result<PolyZ> {
    if p.degree() != 4 || !p.is_monic() {
        return Err(Error::UnsupportedDegree(p.degree()));
    }
    let (a, b, c, d) = (p.coeff(3), p.coeff(2), p.coeff(1), p.coeff(0));
    let four = BigInt::from(4);
    Ok(PolyZ::new(vec![
        -(&a * &a * &d - &four * &b * &d + &c * &c),
        &a * &c - &four * &d,
        -b,
        BigInt::one(),
    ]))
}

/// Above this size the constant term is not enumerated for divisors.
const DIVISOR_LIMIT: u64 = 1 << 50;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let Some(v) = n.to_u64().filter(|&v| v <= DIVISOR_LIMIT) else {
        return Err(Error::CoefficientTooLarge(n.to_string()));
    };
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i * i != v {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Integer roots of a monic polynomial.
pub fn integer_roots(p: &PolyZ) -> Result<Vec<BigInt>> {
    if !p.is_monic() {
        return Err(Error::InvalidParameters("integer root test needs a monic polynomial".into()));
    }
    if p.coeff(0).is_zero() {
        let mut rest = integer_roots(&PolyZ::new(p.coeffs[1..].to_vec()))?;
        rest.push(BigInt::zero());
        return Ok(rest);
    }
    let mut out = Vec::new();
    for q in divisors(&p.coeff(0))? {
        for r in [q.clone(), -q] {
            if p.eval(&r).is_zero() {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// A monic factorisation into two integer quadratics, if one exists.
pub fn quadratic_factor(p: &PolyZ) -> Result<Option<(PolyZ, PolyZ)>> {
    if p.degree() != 4 || !p.is_monic() {
        return Err(Error::UnsupportedDegree(p.degree()));
    }
    let (a, b, c, d) = (p.coeff(3), p.coeff(2), p.coeff(1), p.coeff(0));
    let quad = |s: &BigInt, t: &BigInt| PolyZ::new(vec![t.clone(), s.clone(), BigInt::one()]);
    if d.is_zero() {
        // x divides p; a quadratic split exists iff the cubic cofactor has an
        // integer root, which the rational root test already sees
        return Ok(None);
    }
    let mut qs = Vec::new();
    for q in divisors(&d)? {
        qs.push(-q.clone());
        qs.push(q);
    }
    // (x^2 + s x + q)(x^2 + r x + t) with q t = d, s + r = a
    for q in qs {
        let t = &d / &q;
        let mut pairs = Vec::new();
        if t != q {
            let num = &c - &q * &a;
            let den = &t - &q;
            if num.is_multiple_of(&den) {
                let s = num / den;
                pairs.push((s.clone(), &a - s));
            }
        } else if c == &q * &a {
            let disc = &a * &a - BigInt::from(4) * (&b - BigInt::from(2) * &q);
            if !disc.is_negative() {
                let root = disc.sqrt();
                if &root * &root == disc && (&a + &root).is_even() {
                    let s: BigInt = (&a + &root) / 2;
                    pairs.push((s.clone(), &a - s));
                }
            }
        }
        for (s, r) in pairs {
            if &q + &t + &s * &r == b && &s * &t + &q * &r == c {
                return Ok(Some((quad(&s, &q), quad(&r, &t))));
            }
        }
    }
    Ok(None)
}

/// Irreducibility over `Q` for monic polynomials of degree at most 4.
pub fn irreducible_over_q(p: &PolyZ) -> Result<bool> {
    let n = p.degree();
    if n > 4 {
        return Err(Error::UnsupportedDegree(n));
    }
    if !p.is_monic() {
        return Err(Error::InvalidParameters("irreducibility test needs a monic polynomial".into()));
    }
    if n <= 1 {
        return Ok(n == 1);
    }
    if !integer_roots(p)?.is_empty() {
        return Ok(false);
    }
    if n == 4 {
        return Ok(quadratic_factor(p)?.is_none());
    }
    Ok(true)
}

fn rat_trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rat_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let c = r.last().unwrap() / lb;
        let shift = r.len() - 1 - db;
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &c * bc;
        }
        r.pop();
        r = rat_trim(r);
    }
    r
}

/// Sturm chain of `p` over `Q`.
pub fn sturm_chain(p: &PolyZ) -> Vec<Vec<Rat>> {
    let mut chain = vec![p.to_rat(), p.derivative().to_rat()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = rat_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn sign(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots; requires a squarefree input.
pub fn count_real_roots(p: &PolyZ) -> Result<usize> {
    if p.degree() == 0 {
        return Ok(0);
    }
    let chain = sturm_chain(p);
    if chain.last().map(|c| c.len()) != Some(1) {
        return Err(Error::NotSquarefree);
    }
    let at_pos = sign_changes(chain.iter().map(|c| sign(c.last().unwrap())));
    let at_neg = sign_changes(chain.iter().map(|c| {
        let s = sign(c.last().unwrap());
        if (c.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(at_neg - at_pos)
}

pub fn all_roots_real(p: &PolyZ) -> Result<bool> {
    Ok(count_real_roots(p)? == p.degree())
}

/// `Φ_n`, built from `x^n - 1` by dividing out the smaller cyclotomics.
pub fn cyclotomic(n: usize) -> PolyZ {
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = -BigInt::one();
    c[n] = BigInt::one();
    let mut p = PolyZ::new(c);
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = p.div_exact_monic(&cyclotomic(d)).expect("cyclotomic divides x^n - 1");
    }
    p
}

/// If `p` is a product of cyclotomic polynomials, the indices of its
/// factors (with multiplicity).
pub fn cyclotomic_factors(p: &PolyZ) -> Option<Vec<usize>> {
    if !p.is_monic() {
        return None;
    }
    let deg = p.degree();
    // φ(n) ≥ sqrt(n / 2), so every factor has n ≤ 2 deg²
    let bound = 2 * deg * deg + 2;
    let mut rest = p.clone();
    let mut out = Vec::new();
    for n in 1..=bound {
        let phi = cyclotomic(n);
        if phi.degree() > deg {
            continue;
        }
        while rest.degree() >= phi.degree() {
            match rest.div_exact_monic(&phi) {
                Some(q) => {
                    out.push(n);
                    rest = q;
                }
                None => break,
            }
        }
    }
    (rest == PolyZ::one()).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_small() {
        let m = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        assert_eq!(charpoly(&m), PolyZ::from_desc(&[1, -3, 1]));
        let id = IntMatrix::identity(3);
        assert_eq!(charpoly(&id), PolyZ::from_desc(&[1, -3, 3, -1]));
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&PolyZ::from_desc(&[1, 0, 1])).unwrap(), BigInt::from(-4));
        assert_eq!(discriminant(&PolyZ::from_desc(&[1, -1, -3, 1])).unwrap(), BigInt::from(148));
        assert!(discriminant(&PolyZ::from_desc(&[1, 2])).is_err());
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(count_real_roots(&PolyZ::from_desc(&[1, 0, 1])).unwrap(), 0);
        assert_eq!(count_real_roots(&PolyZ::from_desc(&[1, 0, -5, 0, 4])).unwrap(), 4);
        assert_eq!(count_real_roots(&PolyZ::from_desc(&[1, 0, 0, -2])).unwrap(), 1);
        assert_eq!(count_real_roots(&PolyZ::from_desc(&[1, -2, 1])), Err(Error::NotSquarefree));
    }

    #[test]
    fn factor_search() {
        // (x^2 + x + 2)(x^2 - 3x + 5)
        let p = PolyZ::from_desc(&[1, 1, 2]).mul(&PolyZ::from_desc(&[1, -3, 5]));
        let (f, g) = quadratic_factor(&p).unwrap().unwrap();
        assert_eq!(f.mul(&g), p);
        assert!(!irreducible_over_q(&p).unwrap());
        // (x^2 + 2)^2 exercises the equal-constant branch
        let p = PolyZ::from_desc(&[1, 0, 2]).mul(&PolyZ::from_desc(&[1, 0, 2]));
        assert!(quadratic_factor(&p).unwrap().is_some());
        assert!(irreducible_over_q(&PolyZ::from_desc(&[1, 0, 0, 0, 1])).unwrap());
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(12), PolyZ::from_desc(&[1, 0, -1, 0, 1]));
        let p = PolyZ::x_minus(1).mul(&PolyZ::x_minus(1)).mul(&PolyZ::from_desc(&[1, 1, 1]));
        assert_eq!(cyclotomic_factors(&p), Some(vec![1, 1, 3]));
        assert_eq!(cyclotomic_factors(&PolyZ::from_desc(&[1, -3, 1])), None);
    }

    #[test]
    fn display() {
        assert_eq!(PolyZ::from_desc(&[1, -1, 0, -2, 1]).to_string(), "x^4 - x^3 - 2x + 1");
        assert_eq!(PolyZ::from_desc(&[-1, 0, 3]).pretty("y"), "-y^2 + 3");
    }
}
