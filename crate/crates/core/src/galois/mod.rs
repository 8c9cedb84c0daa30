//! Galois certificates for characteristic polynomials of degree 3 and 4.

mod poly;

pub use poly::{
    all_roots_real, charpoly, count_real_roots, cyclotomic, cyclotomic_factors, discriminant, integer_roots,
    irreducible_over_q, quadratic_factor, resolvent_cubic, resultant, sturm_chain, PolyZ,
};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::cocycles::a_matrix;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rational::is_perfect_square;
use crate::report::{Check, Report, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GaloisGroup {
    S3,
    S4,
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaloisReport {
    pub poly: PolyZ,
    pub irreducible: bool,
    #[serde(serialize_with = "ser_big")]
    pub discriminant: BigInt,
    pub disc_is_square: bool,
    pub all_roots_real: bool,
    pub resolvent: Option<PolyZ>,
    pub group: GaloisGroup,
    pub pinching: bool,
}

fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `p_k(x) = x^3 - x^2 - k x + 1`, the characteristic polynomial of `A_3(k)`.
pub fn p_k(k: u64) -> PolyZ {
    PolyZ::new(vec![BigInt::from(1), -BigInt::from(k), BigInt::from(-1), BigInt::from(1)])
}

/// `4k^3 + k^2 + 18k - 23`.
pub fn delta_k(k: u64) -> BigInt {
    let k = BigInt::from(k);
    BigInt::from(4) * &k * &k * &k + &k * &k + BigInt::from(18) * &k - BigInt::from(23)
}

fn report_for(p: &PolyZ, irreducible: bool) -> Result<GaloisReport> {
    let n = p.degree();
    if !(3..=4).contains(&n) {
        return Err(Error::UnsupportedDegree(n));
    }
    let disc = discriminant(p)?;
    let disc_is_square = is_perfect_square(&disc);
    let real = !disc.is_zero() && all_roots_real(p)?;
    let resolvent = if n == 4 { Some(resolvent_cubic(p)?) } else { None };
    let group = if !irreducible || disc_is_square {
        GaloisGroup::Undetermined
    } else if n == 3 {
        GaloisGroup::S3
    } else if irreducible_over_q(resolvent.as_ref().expect("quartic"))? {
        GaloisGroup::S4
    } else {
        GaloisGroup::Undetermined
    };
    let full = matches!((n, group), (3, GaloisGroup::S3) | (4, GaloisGroup::S4));
    Ok(GaloisReport {
        poly: p.clone(),
        irreducible,
        discriminant: disc,
        disc_is_square,
        all_roots_real: real,
        resolvent,
        group,
        pinching: irreducible && real && full,
    })
}

/// Certificate for an irreducible monic cubic or quartic.
pub fn galois_certificate(p: &PolyZ) -> Result<GaloisReport> {
    if !irreducible_over_q(p)? {
        return Err(Error::Reducible);
    }
    report_for(p, true)
}

/// Irreducible characteristic polynomial, all roots real, full symmetric
/// Galois group. Reducible inputs give a report with `pinching = false`.
pub fn is_pinching(m: &IntMatrix) -> Result<GaloisReport> {
    let p = charpoly(m);
    let irr = irreducible_over_q(&p)?;
    report_for(&p, irr)
}

/// Whether `m` has infinite order. Exact: a matrix of finite order has a
/// product of cyclotomics `Φ_{n_i}` as characteristic polynomial and then
/// satisfies `m^L = I` for `L = lcm(n_i)`.
pub fn has_infinite_order(m: &IntMatrix) -> bool {
    match cyclotomic_factors(&charpoly(m)) {
        None => true,
        Some(ns) => {
            let l = ns.into_iter().fold(1usize, num_integer::lcm);
            m.pow(l as u32) != IntMatrix::identity(m.dim())
        }
    }
}

/// Non-commutation of `m` and `n`, and infinite order of each.
pub fn aux_checks(m: &IntMatrix, n: &IntMatrix) -> Result<Report> {
    let mn = m.try_mul(n)?;
    let nm = n.try_mul(m)?;
    let mut r = Report::new("auxiliary group checks");
    r.push(Check::new("do-not-commute", mn != nm, format!("MN {} NM", if mn != nm { "!=" } else { "=" })));
    for (name, x) in [("first-infinite-order", m), ("second-infinite-order", n)] {
        let cyc = cyclotomic_factors(&charpoly(x));
        let detail = match &cyc {
            None => "characteristic polynomial is not a product of cyclotomics".to_string(),
            Some(ns) => format!("cyclotomic factors {ns:?}; decided by a power of the matrix"),
        };
        r.push(Check::new(name, has_infinite_order(x), detail));
    }
    Ok(r)
}

/// Everything the Galois argument uses, as one report.
pub fn galois_suite(k_max: u64) -> Result<Report> {
    let mut r = Report::new("Galois certificates");

    let mut cp_ok = true;
    let mut disc_ok = true;
    let mut real_ok = true;
    for k in 1..=k_max {
        let p = charpoly(&a_matrix(3, k)?);
        cp_ok &= p == p_k(k);
        disc_ok &= discriminant(&p)? == delta_k(k);
        if k >= 2 {
            real_ok &= all_roots_real(&p)?;
        }
    }
    r.push(Check::new("charpoly-a3", cp_ok, format!("charpoly A_3(k) = x^3 - x^2 - kx + 1 for k = 1..{k_max}")));
    r.push(
        Check::new("delta-formula", disc_ok, format!("disc p_k = 4k^3 + k^2 + 18k - 23 for k = 1..{k_max}"))
            .mirrors("discriminant of p_k"),
    );
    r.push(Check::new("p_k-real-roots", real_ok, format!("all roots of p_k real for k = 2..{k_max}")));

    let g3 = galois_certificate(&p_k(3))?;
    r.push(
        Check::new("p3-s3", g3.group == GaloisGroup::S3, format!("disc {} non-square", g3.discriminant))
            .with("discriminant", Value::exact(&g3.discriminant)),
    );
    let pin3 = is_pinching(&a_matrix(3, 3)?)?;
    r.push(Check::new("a3-3-pinching", pin3.pinching, "A_3(3) is Galois pinching"));

    let q = is_pinching(&a_matrix(4, 2)?)?;
    let res_ok = q.resolvent.as_ref() == Some(&PolyZ::from_desc(&[1, 0, -2, -5]));
    r.push(
        Check::new(
            "a4-2-s4-not-pinching",
            q.group == GaloisGroup::S4 && !q.pinching && q.discriminant == BigInt::from(-643) && res_ok,
            format!("charpoly {}, disc {}, resolvent {}", q.poly, q.discriminant, q.resolvent.as_ref().unwrap().pretty("y")),
        )
        .with("discriminant", Value::exact(&q.discriminant)),
    );

    let a = |k| a_matrix(4, k);
    let forward = &(&a(1)? * &a(2)?) * &a(3)?;
    let backward = &(&a(3)? * &a(2)?) * &a(1)?;
    let pf = is_pinching(&forward)?;
    let pb = is_pinching(&backward)?;
    r.push(
        Check::new(
            "product-disc-916",
            pf.discriminant == BigInt::from(916) || pb.discriminant == BigInt::from(916),
            format!("A(1)A(2)A(3): disc {}; A(3)A(2)A(1): disc {}", pf.discriminant, pb.discriminant),
        )
        .with("forward", Value::exact(&pf.discriminant))
        .with("backward", Value::exact(&pb.discriminant)),
    );
    r.push(
        Check::info(
            "product-pinching",
            format!(
                "A(1)A(2)A(3): charpoly {}, irreducible {}, all real {}, pinching {}",
                pf.poly, pf.irreducible, pf.all_roots_real, pf.pinching
            ),
        )
        .with("pinching", Value::Bool { value: pf.pinching || pb.pinching }),
    );

    r.extend(aux_checks(&a_matrix(3, 3)?, &a_matrix(3, 4)?)?);
    r.push(Check::new("a4-1-infinite-order", has_infinite_order(&a_matrix(4, 1)?), "A_4(1) has infinite order"));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_a4_2() {
        let p = charpoly(&a_matrix(4, 2).unwrap());
        assert_eq!(p, PolyZ::from_desc(&[1, -1, 0, -2, 1]));
        assert_eq!(discriminant(&p).unwrap(), BigInt::from(-643));
        assert_eq!(resolvent_cubic(&p).unwrap(), PolyZ::from_desc(&[1, 0, -2, -5]));
        let g = galois_certificate(&p).unwrap();
        assert_eq!(g.group, GaloisGroup::S4);
        assert!(!g.all_roots_real && !g.pinching);
    }

    #[test]
    fn not_s4() {
        let g = galois_certificate(&PolyZ::from_desc(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(g.group, GaloisGroup::Undetermined);
        assert!(galois_certificate(&PolyZ::from_desc(&[1, -1, 1, -1])).is_err());
    }

    #[test]
    fn suite_passes() {
        assert!(galois_suite(30).unwrap().passed());
    }

    #[test]
    fn orders() {
        assert!(!has_infinite_order(&IntMatrix::from_rows(&[[0, -1], [1, 0]])));
        assert!(has_infinite_order(&a_matrix(4, 1).unwrap()));
        let r = aux_checks(&IntMatrix::identity(3), &a_matrix(3, 2).unwrap()).unwrap();
        assert!(!r.find("do-not-commute").unwrap().passed);
    }
}
