//! Integer matrix families driving the induction, and exact checks of their
//! structural properties.
//!
//! Products follow the cocycle convention `M(k_1) M(k_2) ⋯ M(k_n)`; the
//! recursion sequences walk the same product from the rightmost factor.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::kseq::check_ks;
use crate::matrix::IntMatrix;
use crate::rational::{fmt_rat, rat_to_f64, Rat};
use crate::report::{Check, Report, Value};

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidK(k))
    } else {
        Ok(())
    }
}

fn check_d(d: usize) -> Result<()> {
    if d < 3 {
        Err(Error::InvalidDimension { min: 3, got: d })
    } else {
        Ok(())
    }
}

fn big(k: u64) -> BigInt {
    BigInt::from(k)
}

/// Incidence matrix `A_d(k)` of the substitution `χ_k` on `d` letters.
pub fn a_matrix(d: usize, k: u64) -> Result<IntMatrix> {
    check_d(d)?;
    check_k(k)?;
    let mut m = IntMatrix::zeros(d);
    m.set(0, d - 2, big(k));
    m.set(0, d - 1, big(k - 1));
    for i in 1..d - 1 {
        m.set(i, i - 1, BigInt::one());
    }
    m.set(d - 1, d - 2, BigInt::one());
    m.set(d - 1, d - 1, BigInt::one());
    Ok(m)
}

/// `B_3(k)`, the transpose of `O A_3(k)^{-1} O^{-1}`.
pub fn b3_matrix(k: u64) -> Result<IntMatrix> {
    check_k(k)?;
    let k = k as i64;
    Ok(IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 1], [k - 1, 0, k]]))
}

/// Case-1 length matrix: first row all ones, identity below.
pub fn d_matrix(d: usize) -> Result<IntMatrix> {
    check_d(d)?;
    let mut m = IntMatrix::identity(d);
    for j in 1..d {
        m.set(0, j, BigInt::one());
    }
    Ok(m)
}

/// Case-3 length matrix, relabelling included.
pub fn c_matrix(d: usize) -> Result<IntMatrix> {
    check_d(d)?;
    let mut m = IntMatrix::zeros(d);
    m.set(0, d - 2, BigInt::one());
    for i in 1..d - 1 {
        m.set(i, i - 1, BigInt::one());
    }
    m.set(d - 1, d - 2, BigInt::one());
    m.set(d - 1, d - 1, BigInt::one());
    Ok(m)
}

/// Case-1 height matrix `V_D = I + E_{d1}`.
pub fn vd_matrix(d: usize) -> Result<IntMatrix> {
    check_d(d)?;
    let mut m = IntMatrix::identity(d);
    m.set(d - 1, 0, BigInt::one());
    Ok(m)
}

/// Case-3 height matrix with the relabelling folded in:
/// `h'_i = h_{i+1}` for `i ≤ d-2`, `h'_{d-1} = h_1 + h_d`, `h'_d = h_d`.
pub fn vc_matrix(d: usize) -> Result<IntMatrix> {
    check_d(d)?;
    let mut m = IntMatrix::zeros(d);
    for i in 0..d - 2 {
        m.set(i, i + 1, BigInt::one());
    }
    m.set(d - 2, 0, BigInt::one());
    m.set(d - 2, d - 1, BigInt::one());
    m.set(d - 1, d - 1, BigInt::one());
    Ok(m)
}

/// Accelerated length matrix `Z_d(k) = D^{k-1} C`.
pub fn z_matrix(d: usize, k: u64) -> Result<IntMatrix> {
    check_k(k)?;
    let dk = d_matrix(d)?.pow((k - 1) as u32);
    Ok(&dk * &c_matrix(d)?)
}

/// Accelerated height matrix, `transpose(A_d(k))`.
pub fn zt_matrix(d: usize, k: u64) -> Result<IntMatrix> {
    Ok(a_matrix(d, k)?.transpose())
}

/// Accelerated height matrix as the product of single height steps,
/// `V_C V_D^{k-1}`.
pub fn zt_from_steps(d: usize, k: u64) -> Result<IntMatrix> {
    check_k(k)?;
    Ok(&vc_matrix(d)? * &vd_matrix(d)?.pow((k - 1) as u32))
}

/// `J_d`: antidiagonal ones in the top-left `(d-1)×(d-1)` block, zero last
/// column above the corner, last row all `-1`.
pub fn j_matrix(d: usize) -> Result<IntMatrix> {
    check_d(d)?;
    let mut m = IntMatrix::zeros(d);
    for i in 0..d - 1 {
        m.set(i, d - 2 - i, BigInt::one());
    }
    for j in 0..d {
        m.set(d - 1, j, -BigInt::one());
    }
    Ok(m)
}

pub fn o_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, -1]])
}

/// Base change with columns `e_3, e_2 + e_3, e_1 + e_2`.
pub fn q_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[0, 0, 1], [0, 1, 1], [1, 1, 0]])
}

/// Permutation swapping labels 1 and 2.
pub fn p3_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]])
}

/// Single-step height matrices for three bands without relabelling.
pub fn va3_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 0, 0], [0, 1, 0], [1, 0, 1]])
}

pub fn vca3_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 0, 1], [0, 1, 0], [0, 0, 1]])
}

/// Maximum column L1 norm of a nonnegative matrix.
pub fn cnorm(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_nonnegative() {
        return Err(Error::NegativeEntries);
    }
    Ok((0..m.dim()).map(|j| m.column_l1(j)).max().unwrap_or_default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `A_d(k)`.
    A,
    /// `B_3(k)`, only for `d = 3`.
    B3,
    /// `Z_d(k)`.
    Z,
    /// `transpose(A_d(k))`.
    Zt,
    /// `A_d(k)^{-1}`.
    AInverse,
}

impl Family {
    pub fn matrix(self, d: usize, k: u64) -> Result<IntMatrix> {
        match self {
            Family::A => a_matrix(d, k),
            Family::B3 => {
                if d != 3 {
                    return Err(Error::DimensionMismatch(3, d));
                }
                b3_matrix(k)
            }
            Family::Z => z_matrix(d, k),
            Family::Zt => zt_matrix(d, k),
            Family::AInverse => a_matrix(d, k)?.inverse(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B3 => "B3",
            Family::Z => "Z",
            Family::Zt => "Zt",
            Family::AInverse => "A-inverse",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Family::A),
            "b" | "b3" => Ok(Family::B3),
            "z" => Ok(Family::Z),
            "zt" => Ok(Family::Zt),
            "a-inverse" | "ainv" => Ok(Family::AInverse),
            _ => Err(Error::InvalidParameters(format!("unknown family {s:?}"))),
        }
    }
}

/// `M(k_1) M(k_2) ⋯ M(k_n)`.
pub fn product(family: Family, ks: &[u64], d: usize) -> Result<IntMatrix> {
    if ks.is_empty() {
        return Err(Error::SequenceTooShort { needed: 1, have: 0 });
    }
    check_ks(ks)?;
    let mut p = family.matrix(d, ks[0])?;
    for &k in &ks[1..] {
        p = &p * &family.matrix(d, k)?;
    }
    Ok(p)
}

fn argmax_columns(m: &IntMatrix) -> Vec<usize> {
    let norms: Vec<BigInt> = (0..m.dim()).map(|j| m.column_l1(j)).collect();
    let best = norms.iter().max().cloned().unwrap_or_default();
    (0..m.dim()).filter(|&j| norms[j] == best).collect()
}

fn l1(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).sum()
}

/// For every prefix, column 2 of the `A_3` product and column 3 of the
/// `B_3` product carry the largest L1 norm, and `‖v_1 + v_3‖ ≥ ‖v_2‖` holds
/// for the columns of the `A_3` product.
pub fn verify_column_growth(ks: &[u64]) -> Result<Report> {
    check_ks(ks)?;
    let mut rep = Report::new("column growth");
    let mut a = IntMatrix::identity(3);
    let mut b = IntMatrix::identity(3);
    let mut bad_a = None;
    let mut bad_b = None;
    let mut bad_aux = None;
    for (n, &k) in ks.iter().enumerate() {
        a = &a * &a_matrix(3, k)?;
        b = &b * &b3_matrix(k)?;
        if bad_a.is_none() && !argmax_columns(&a).contains(&1) {
            bad_a = Some(n + 1);
        }
        if bad_b.is_none() && !argmax_columns(&b).contains(&2) {
            bad_b = Some(n + 1);
        }
        let v13: Vec<BigInt> = (0..3).map(|i| a.get(i, 0) + a.get(i, 2)).collect();
        if bad_aux.is_none() && l1(&v13) < a.column_l1(1) {
            bad_aux = Some(n + 1);
        }
    }
    let mk = |name: &str, bad: Option<usize>, what: &str| {
        Check::new(
            name,
            bad.is_none(),
            match bad {
                None => format!("{what} at all {} prefixes", ks.len()),
                Some(n) => format!("{what} fails at prefix length {n}"),
            },
        )
    };
    rep.push(mk("a-column-2-largest", bad_a, "column 2 of the A product is largest").mirrors("column growth lemma, A part"));
    rep.push(mk("b-column-3-largest", bad_b, "column 3 of the B product is largest").mirrors("column growth lemma, B part"));
    rep.push(mk("a-auxiliary", bad_aux, "|v1 + v3| >= |v2|").mirrors("column growth lemma, induction hypothesis"));
    Ok(rep)
}

/// The sequences `(x_j, y_j, z_j)` and `(a_j, b_j, c_j)` for `j = 1..n`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionTriple {
    #[serde_as(as = "Vec<[DisplayFromStr; 3]>")]
    pub xyz: Vec<[BigInt; 3]>,
    #[serde_as(as = "Vec<[DisplayFromStr; 3]>")]
    pub abc: Vec<[BigInt; 3]>,
}

/// Run both recursions and confirm the last terms equal column 2 of the
/// `A_3` product and column 3 of the `B_3` product.
pub fn recursion_sequences(ks: &[u64]) -> Result<RecursionTriple> {
    let t = recursion_unchecked(ks)?;
    let pa = product(Family::A, ks, 3)?;
    let pb = product(Family::B3, ks, 3)?;
    let colx = pa.column(1);
    let cola = pb.column(2);
    if t.xyz.last().unwrap()[..] != colx[..] {
        return Err(Error::IdentityFailed {
            step: "xyz recursion".into(),
            detail: format!("{:?} vs column {:?}", t.xyz.last().unwrap(), colx),
        });
    }
    if t.abc.last().unwrap()[..] != cola[..] {
        return Err(Error::IdentityFailed {
            step: "abc recursion".into(),
            detail: format!("{:?} vs column {:?}", t.abc.last().unwrap(), cola),
        });
    }
    Ok(t)
}

fn recursion_unchecked(ks: &[u64]) -> Result<RecursionTriple> {
    if ks.is_empty() {
        return Err(Error::SequenceTooShort { needed: 1, have: 0 });
    }
    check_ks(ks)?;
    let n = ks.len();
    let kn = big(ks[n - 1]);
    let mut xyz = vec![[kn.clone(), BigInt::zero(), BigInt::one()]];
    let mut abc = vec![[BigInt::zero(), BigInt::one(), kn]];
    for j in 1..n {
        let k = big(ks[n - 1 - j]);
        let km1 = &k - 1;
        let [x, y, z] = xyz.last().unwrap().clone();
        xyz.push([&km1 * &z + &k * &y, x, y + z]);
        let [a, b, c] = abc.last().unwrap().clone();
        abc.push([b, &a + &c, &km1 * &a + &k * &c]);
    }
    Ok(RecursionTriple { xyz, abc })
}

fn dominated(m: &Rat, xyz: &[BigInt; 3], abc: &[BigInt; 3]) -> bool {
    let ge = |lhs: &BigInt, rhs: BigInt| Rat::from_integer(lhs.clone()) >= m * Rat::from_integer(rhs);
    let [x, y, z] = xyz;
    let [a, b, c] = abc;
    ge(a, z.clone()) && ge(b, y + z) && ge(c, x + y)
}

/// Domination `a_j ≥ M z_j`, `b_j ≥ M(y_j + z_j)`, `c_j ≥ M(x_j + y_j)` at
/// `j0` (1-based), its persistence for `j ≥ j0`, and the norm comparison
/// `M·cnorm(A-product) ≤ cnorm(B-product)`.
pub fn check_domination(ks: &[u64], m: &Rat, j0: usize) -> Result<Report> {
    let t = recursion_unchecked(ks)?;
    let n = ks.len();
    if j0 == 0 || j0 > n {
        return Err(Error::SequenceTooShort { needed: j0.max(1), have: n });
    }
    let mut rep = Report::new("domination");
    let base = dominated(m, &t.xyz[j0 - 1], &t.abc[j0 - 1]);
    rep.push(
        Check::new("hypothesis", base, format!("domination at j0 = {j0} with M = {}", fmt_rat(m)))
            .with("M", Value::exact(fmt_rat(m)))
            .mirrors("domination lemma, hypothesis"),
    );
    if !base {
        return Ok(rep);
    }
    let broken = (j0..=n).find(|&j| !dominated(m, &t.xyz[j - 1], &t.abc[j - 1]));
    rep.push(
        Check::new(
            "persistence",
            broken.is_none(),
            match broken {
                None => format!("holds for j = {j0}..{n}"),
                Some(j) => format!("fails at j = {j}"),
            },
        )
        .mirrors("domination lemma, induction"),
    );
    let na = cnorm(&product(Family::A, ks, 3)?)?;
    let nb = cnorm(&product(Family::B3, ks, 3)?)?;
    let ok = m * Rat::from_integer(na.clone()) <= Rat::from_integer(nb.clone());
    rep.push(
        Check::new("norm-comparison", ok, "M * cnorm(A product) <= cnorm(B product)")
            .with("cnorm_a", Value::exact(&na))
            .with("cnorm_b", Value::exact(&nb))
            .mirrors("domination lemma, conclusion"),
    );
    Ok(rep)
}

/// Per-power data for `A_3(2)^m` and `B_3(2)^m`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfRow {
    pub m: u32,
    #[serde_as(as = "DisplayFromStr")]
    pub max_a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub min_b: BigInt,
}

pub fn pf_table(search_limit: u32) -> Vec<PfRow> {
    let a2 = a_matrix(3, 2).unwrap();
    let b2 = b3_matrix(2).unwrap();
    let mut pa = IntMatrix::identity(3);
    let mut pb = IntMatrix::identity(3);
    (1..=search_limit)
        .map(|m| {
            pa = &pa * &a2;
            pb = &pb * &b2;
            PfRow { m, max_a: pa.max_entry(), min_b: pb.min_entry() }
        })
        .collect()
}

/// Search `m ≤ search_limit` with `min(B_3(2)^m) > 2·max(A_3(2)^m)` and
/// evaluate the quoted pair `(15, 8997/4334)`.
pub fn pf_constants(search_limit: u32) -> Report {
    let mut rep = Report::new("Perron-Frobenius constants");
    let table = pf_table(search_limit.max(15));
    let first = table
        .iter()
        .take(search_limit as usize)
        .find(|r| r.min_b > BigInt::from(2) * &r.max_a);
    let mut c = Check::new(
        "exists-m-with-ratio-above-2",
        first.is_some(),
        match first {
            Some(r) => format!("first m = {} with min B / max A = {}/{}", r.m, r.min_b, r.max_a),
            None => format!("no m <= {search_limit}"),
        },
    )
    .mirrors("PF-constant lemma, existence of m0 and M' > 2");
    if let Some(r) = first {
        c = c
            .with("m0", Value::exact(r.m))
            .with("max_a", Value::exact(&r.max_a))
            .with("min_b", Value::exact(&r.min_b))
            .with("ratio", Value::float(rat_to_f64(&Rat::new(r.min_b.clone(), r.max_a.clone()))));
    }
    rep.push(c);

    let r15 = &table[14];
    let (num, den) = (BigInt::from(8997), BigInt::from(4334));
    let holds = &r15.max_a * &num <= &r15.min_b * &den;
    let mut quoted = Check::new(
        "quoted-pair",
        holds,
        format!(
            "m = 15: max A = {}, min B = {}; max A <= (4334/8997) min B is {}",
            r15.max_a, r15.min_b, holds
        ),
    )
    .with("max_a", Value::exact(&r15.max_a))
    .with("min_b", Value::exact(&r15.min_b))
    .with("m_prime_above_2", Value::Bool { value: num > BigInt::from(2) * &den })
    .mirrors("PF-constant lemma, quoted m0 = 15 and M' = 8997/4334");
    quoted.informational = true;
    rep.push(quoted);
    rep
}

/// `Q^{-1} B_3(k) Q = Z_3(k)` with `Q` the base `(e_3, e_2+e_3, e_1+e_2)`.
pub fn conjugation_check_d3(k: u64) -> Result<Report> {
    let q = q_matrix();
    let lhs = &(&q.inverse()? * &b3_matrix(k)?) * &q;
    let z = z_matrix(3, k)?;
    let mut rep = Report::new(format!("base change, k = {k}"));
    rep.push(
        Check::new("q-inverse-b-q-equals-z", lhs == z, format!("Q^-1 B_3({k}) Q = {lhs:?}, Z_3({k}) = {z:?}"))
            .mirrors("conjugation lemma for B_3 and Z_3"),
    );
    Ok(rep)
}

/// Entrywise `a ≤ z` with at least one strict inequality.
pub fn matrix_order_lt(a: &IntMatrix, z: &IntMatrix) -> Result<bool> {
    if a.dim() != z.dim() {
        return Err(Error::DimensionMismatch(a.dim(), z.dim()));
    }
    let le = a.entries().iter().zip(z.entries()).all(|(x, y)| x <= y);
    let strict = a.entries().iter().zip(z.entries()).any(|(x, y)| x < y);
    Ok(le && strict)
}

/// `Z_d(k) = J_d A_d(k)^{-1} J_d^{-1}` for `d = 3..=d_max`, the `d = 3` base
/// change for `k = 1..=k_max`, and `Z̃_d(k) = transpose(A_d(k))`.
pub fn conjugation_suite(d_max: usize, k_max: u64) -> Result<Report> {
    check_d(d_max)?;
    let mut rep = Report::new("conjugation identities");
    let mut bad_j = None;
    let mut bad_t = None;
    for d in 3..=d_max {
        let j = j_matrix(d)?;
        let jinv = j.inverse()?;
        for k in 1..=k_max {
            let a = a_matrix(d, k)?;
            if bad_j.is_none() && &(&j * &a.inverse()?) * &jinv != z_matrix(d, k)? {
                bad_j = Some((d, k));
            }
            if bad_t.is_none() && (zt_matrix(d, k)? != a.transpose() || zt_from_steps(d, k)? != a.transpose()) {
                bad_t = Some((d, k));
            }
        }
    }
    let describe = |bad: Option<(usize, u64)>| match bad {
        None => format!("d = 3..{d_max}, k = 1..{k_max}"),
        Some((d, k)) => format!("fails at d = {d}, k = {k}"),
    };
    rep.push(Check::new("j-conjugation", bad_j.is_none(), describe(bad_j)).mirrors("Z_d(k) = J_d A_d(k)^-1 J_d^-1"));
    rep.push(
        Check::new("height-transpose", bad_t.is_none(), describe(bad_t))
            .mirrors("height matrix of one accelerated step is transpose(A_d(k))"),
    );
    let bad_q = (1..=k_max).find(|&k| !conjugation_check_d3(k).map(|r| r.passed()).unwrap_or(false));
    rep.push(
        Check::new(
            "q-base-change",
            bad_q.is_none(),
            match bad_q {
                None => format!("Q^-1 B_3(k) Q = Z_3(k) for k = 1..{k_max}"),
                Some(k) => format!("fails at k = {k}"),
            },
        )
        .mirrors("conjugation lemma for B_3 and Z_3"),
    );
    Ok(rep)
}

/// `A_d(k) < Z_d(k)` entrywise for `k = 1..=k_max`. At `k = 1` the two
/// matrices coincide for every `d`, so that value is reported separately.
pub fn order_suite(d: usize, k_max: u64) -> Result<Report> {
    let mut rep = Report::new(format!("matrix order, d = {d}"));
    let bad = (2..=k_max.max(1)).try_fold(None, |acc, k| -> Result<Option<u64>> {
        Ok(acc.or(if matrix_order_lt(&a_matrix(d, k)?, &z_matrix(d, k)?)? { None } else { Some(k) }))
    })?;
    rep.push(
        Check::new(
            "a-below-z",
            bad.is_none(),
            match bad {
                None => format!("A_{d}(k) < Z_{d}(k) for k = 2..{k_max}"),
                Some(k) => format!("fails at k = {k}"),
            },
        )
        .mirrors("A < Z in the matrix order"),
    );
    let equal = a_matrix(d, 1)? == z_matrix(d, 1)?;
    rep.push(Check::info("k1-equality", format!("A_{d}(1) = Z_{d}(1) is {equal}; the strict order needs k >= 2")).with(
        "equal",
        Value::Bool { value: equal },
    ));
    Ok(rep)
}

/// `1 ≤ cnorm(A_3(k)) / cnorm(Z_3(k)) < 2` for `k = 1..=k_max`.
pub fn cnorm_ratio_check(k_max: u64) -> Result<Report> {
    let mut worst_lo: Option<Rat> = None;
    let mut worst_hi: Option<Rat> = None;
    let mut bad = None;
    for k in 1..=k_max {
        let r = Rat::new(cnorm(&a_matrix(3, k)?)?, cnorm(&z_matrix(3, k)?)?);
        if bad.is_none() && (r < Rat::one() || r >= Rat::from_integer(BigInt::from(2))) {
            bad = Some(k);
        }
        if worst_lo.as_ref().is_none_or(|w| &r < w) {
            worst_lo = Some(r.clone());
        }
        if worst_hi.as_ref().is_none_or(|w| &r > w) {
            worst_hi = Some(r);
        }
    }
    let mut rep = Report::new("cnorm ratio");
    let lo = worst_lo.map(|r| fmt_rat(&r)).unwrap_or_default();
    let hi = worst_hi.map(|r| fmt_rat(&r)).unwrap_or_default();
    rep.push(
        Check::new(
            "ratio-in-range",
            bad.is_none(),
            match bad {
                None => format!("ratio in [{lo}, {hi}] for k = 1..{k_max}"),
                Some(k) => format!("out of [1, 2) at k = {k}"),
            },
        )
        .with("min", Value::exact(lo))
        .with("max", Value::exact(hi))
        .mirrors("log-integrability ratio bound"),
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_matrices() {
        assert_eq!(a_matrix(3, 2).unwrap(), IntMatrix::from_rows(&[[0, 2, 1], [1, 0, 0], [0, 1, 1]]));
        assert_eq!(
            a_matrix(4, 1).unwrap(),
            IntMatrix::from_rows(&[[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]])
        );
        assert_eq!(z_matrix(3, 3).unwrap(), IntMatrix::from_rows(&[[2, 3, 2], [1, 0, 0], [0, 1, 1]]));
        assert_eq!(
            z_matrix(4, 2).unwrap(),
            IntMatrix::from_rows(&[[1, 1, 2, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]])
        );
        assert_eq!(b3_matrix(1).unwrap(), IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 1], [0, 0, 1]]));
        assert_eq!(b3_matrix(2).unwrap(), IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 1], [1, 0, 2]]));
        assert_eq!(
            c_matrix(4).unwrap(),
            IntMatrix::from_rows(&[[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]])
        );
        assert_eq!(
            vc_matrix(4).unwrap(),
            IntMatrix::from_rows(&[[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1], [0, 0, 0, 1]])
        );
        assert_eq!(
            vd_matrix(4).unwrap(),
            IntMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]])
        );
        assert_eq!(
            j_matrix(4).unwrap(),
            IntMatrix::from_rows(&[[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [-1, -1, -1, -1]])
        );
        assert!(a_matrix(3, 0).is_err());
        assert!(a_matrix(2, 1).is_err());
    }

    #[test]
    fn determinant_sign() {
        // the constant term of x^3 - x^2 - kx + 1 is -det
        assert_eq!(a_matrix(3, 7).unwrap().det(), -BigInt::one());
        for d in 3..8 {
            let want = if d % 2 == 0 { 1 } else { -1 };
            assert_eq!(a_matrix(d, 4).unwrap().det(), BigInt::from(want));
        }
    }

    #[test]
    fn height_factorisations() {
        for k in 1..8 {
            let p = &(&p3_matrix() * &vca3_matrix()) * &va3_matrix().pow(k as u32 - 1);
            assert_eq!(p, zt_matrix(3, k).unwrap());
            assert_eq!(zt_from_steps(3, k).unwrap(), zt_matrix(3, k).unwrap());
            assert_eq!(zt_from_steps(4, k).unwrap(), zt_matrix(4, k).unwrap());
        }
    }

    #[test]
    fn cnorm_examples() {
        assert_eq!(cnorm(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(cnorm(&a_matrix(3, 2).unwrap()).unwrap(), BigInt::from(3));
        assert_eq!(cnorm(&o_matrix()), Err(Error::NegativeEntries));
    }

    #[test]
    fn products() {
        assert_eq!(
            product(Family::A, &[2, 2], 3).unwrap(),
            IntMatrix::from_rows(&[[2, 1, 1], [0, 2, 1], [1, 1, 1]])
        );
        assert_eq!(product(Family::Z, &[5], 4).unwrap(), z_matrix(4, 5).unwrap());
        assert!(product(Family::A, &[], 3).is_err());
        assert!(product(Family::B3, &[1], 4).is_err());
    }

    #[test]
    fn recursion_examples() {
        let t = recursion_sequences(&[4]).unwrap();
        assert_eq!(t.xyz[0], [BigInt::from(4), BigInt::zero(), BigInt::one()]);
        assert_eq!(t.abc[0], [BigInt::zero(), BigInt::one(), BigInt::from(4)]);
        let t = recursion_sequences(&[3, 2]).unwrap();
        assert_eq!(t.xyz[1], [BigInt::from(2), BigInt::from(2), BigInt::one()]);
    }

    #[test]
    fn pf_small_m() {
        let t = pf_table(15);
        assert_eq!((t[0].max_a.clone(), t[0].min_b.clone()), (BigInt::from(2), BigInt::zero()));
        assert_eq!((t[14].max_a.clone(), t[14].min_b.clone()), (BigInt::from(4334), BigInt::from(8997)));
        let rep = pf_constants(40);
        assert!(rep.passed());
        assert_eq!(rep.find("exists-m-with-ratio-above-2").unwrap().values["m0"], Value::exact(15));
        assert!(rep.find("quoted-pair").unwrap().passed);
    }

    #[test]
    fn suites() {
        assert!(conjugation_suite(5, 10).unwrap().passed());
        let r = order_suite(3, 20).unwrap();
        assert!(r.passed());
        assert_eq!(r.find("k1-equality").unwrap().values["equal"], Value::Bool { value: true });
        let r = cnorm_ratio_check(50).unwrap();
        assert!(r.passed());
        assert_eq!(r.find("ratio-in-range").unwrap().values["max"], Value::exact("1"));
    }

    #[test]
    fn order_examples() {
        let m = a_matrix(3, 2).unwrap();
        assert!(!matrix_order_lt(&m, &m).unwrap());
        assert!(matrix_order_lt(&m, &z_matrix(3, 2).unwrap()).unwrap());
        assert!(matrix_order_lt(&m, &IntMatrix::identity(4)).is_err());
    }
}
