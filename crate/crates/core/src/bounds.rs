//! Closed-form fewnomial bounds with exact integer caps.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{FnxError, Result};
use crate::rational::{binomial, fmt_rational, rat, to_f64, Rational};
use crate::real::Real;

/// Constants built from e² that appear in the bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstName {
    ESquared,
    EsqMinus1Over2,
    EsqPlus3Over4,
    EsqPlus1Over8,
    EsqOver8,
    EsqMinus3Over4,
}

impl ConstName {
    pub const ALL: [ConstName; 6] = [
        ConstName::ESquared,
        ConstName::EsqMinus1Over2,
        ConstName::EsqPlus3Over4,
        ConstName::EsqPlus1Over8,
        ConstName::EsqOver8,
        ConstName::EsqMinus3Over4,
    ];

    /// (a, b, d) with value (a·e² + b)/d.
    fn affine(self) -> (i64, i64, i64) {
        match self {
            ConstName::ESquared => (1, 0, 1),
            ConstName::EsqMinus1Over2 => (1, -1, 2),
            ConstName::EsqPlus3Over4 => (1, 3, 4),
            ConstName::EsqPlus1Over8 => (1, 1, 8),
            ConstName::EsqOver8 => (1, 0, 8),
            ConstName::EsqMinus3Over4 => (1, -3, 4),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ConstName::ESquared => "e^2",
            ConstName::EsqMinus1Over2 => "(e^2-1)/2",
            ConstName::EsqPlus3Over4 => "(e^2+3)/4",
            ConstName::EsqPlus1Over8 => "(e^2+1)/8",
            ConstName::EsqOver8 => "e^2/8",
            ConstName::EsqMinus3Over4 => "(e^2-3)/4",
        }
    }
}

/// A rational bracket lower < c < upper around an irrational constant.
#[derive(Clone, Debug, PartialEq)]
pub struct EnclosedConstant {
    pub name: ConstName,
    pub lower: Rational,
    pub upper: Rational,
}

fn e_squared() -> &'static (Rational, Rational) {
    static E2: OnceLock<(Rational, Rational)> = OnceLock::new();
    E2.get_or_init(|| {
        // Σ 2^j/j!; past j = 4 the terms at least halve, so the tail is below twice the next term
        let mut sum = Rational::zero();
        let mut term = Rational::one();
        let mut j = 0i64;
        let eps = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 70));
        loop {
            sum += &term;
            j += 1;
            term = term * rat(2, j);
            if j > 4 && &term * rat(2, 1) < eps {
                break;
            }
        }
        let upper = &sum + &term * rat(2, 1);
        (sum, upper)
    })
}

impl EnclosedConstant {
    pub fn get(name: ConstName) -> EnclosedConstant {
        let (lo, hi) = e_squared();
        let (a, b, d) = name.affine();
        let f = |x: &Rational| (x * Rational::from_integer(a.into()) + Rational::from_integer(b.into())) / Rational::from_integer(d.into());
        EnclosedConstant { name, lower: f(lo), upper: f(hi) }
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn mid(&self) -> Rational {
        (&self.lower + &self.upper) / Rational::from_integer(2.into())
    }
}

/// The formulas in the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaId {
    Khovanskii,
    NewFewnomial,
    BoundK2,
    BoundK3,
    LowerBound,
    Kouchnirenko,
    KrChain,
    KappaGeneral,
    KappaSparse,
    KappaK2,
    KappaK3,
    Descartes,
    KOneTight,
    ComponentsK1,
}

impl FormulaId {
    pub fn tag(self) -> &'static str {
        match self {
            FormulaId::Khovanskii => "khovanskii",
            FormulaId::NewFewnomial => "new_fewnomial",
            FormulaId::BoundK2 => "bound_k2",
            FormulaId::BoundK3 => "bound_k3",
            FormulaId::LowerBound => "lower_bound",
            FormulaId::Kouchnirenko => "kouchnirenko",
            FormulaId::KrChain => "kr_chain",
            FormulaId::KappaGeneral => "kappa_general",
            FormulaId::KappaSparse => "kappa_sparse",
            FormulaId::KappaK2 => "kappa_k2",
            FormulaId::KappaK3 => "kappa_k3",
            FormulaId::Descartes => "descartes",
            FormulaId::KOneTight => "k1_tight",
            FormulaId::ComponentsK1 => "components_k1",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A bound value. `strict` bounds ("fewer than") cap at value−1 when the value is an integer.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundValue {
    pub formula_id: FormulaId,
    pub lower: Rational,
    pub upper: Rational,
    pub strict: bool,
    pub integer_cap: BigInt,
    pub assumptions: String,
}

impl BoundValue {
    fn exact(id: FormulaId, v: Rational, strict: bool, assumptions: &str) -> BoundValue {
        let fl = v.floor().to_integer();
        let cap = if strict && v.is_integer() { fl - 1 } else { fl };
        BoundValue { formula_id: id, lower: v.clone(), upper: v, strict, integer_cap: cap.max(BigInt::zero()), assumptions: assumptions.into() }
    }

    /// Value (lo, hi) bracketing an irrational number.
    fn enclosed(id: FormulaId, lo: Rational, hi: Rational, strict: bool, assumptions: &str) -> BoundValue {
        let fl = lo.floor().to_integer();
        debug_assert_eq!(fl, hi.floor().to_integer());
        BoundValue { formula_id: id, lower: lo, upper: hi, strict, integer_cap: fl.max(BigInt::zero()), assumptions: assumptions.into() }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn real_value(&self, prec: usize) -> Real {
        Real::from_rational(&((&self.lower + &self.upper) / Rational::from_integer(2.into())), prec)
    }

    pub fn value_f64(&self) -> f64 {
        to_f64(&((&self.lower + &self.upper) / Rational::from_integer(2.into())))
    }

    pub fn cap_u64(&self) -> u64 {
        self.integer_cap.to_u64().unwrap_or(u64::MAX)
    }

    /// Does a count of `c` respect the bound?
    pub fn admits(&self, c: u64) -> bool {
        BigInt::from(c) <= self.integer_cap
    }

    pub fn value_string(&self) -> String {
        if self.is_exact() {
            fmt_rational(&self.lower)
        } else {
            format!("{:.6}", self.value_f64())
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "formula": self.formula_id.tag(),
            "value": self.value_string(),
            "exact": self.is_exact(),
            "strict": self.strict,
            "cap": self.integer_cap.to_string(),
            "assumptions": self.assumptions,
        })
    }
}

fn pow2_binom2(k: u64) -> BigInt {
    BigInt::one() << (k * k.saturating_sub(1) / 2) as usize
}

fn bpow(b: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

fn q(b: BigInt) -> Rational {
    Rational::from_integer(b)
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond { Ok(()) } else { Err(FnxError::Range(msg.into())) }
}

/// 2^C(n+k,2)·(n+1)^(n+k).
pub fn khovanskii_bound(n: u64, k: u64) -> Result<BoundValue> {
    need(n >= 1 && k >= 1, "needs n,k >= 1")?;
    let v = pow2_binom2(n + k) * bpow(n + 1, n + k);
    Ok(BoundValue::exact(FormulaId::Khovanskii, q(v), false, "n,k>=1"))
}

/// (e²+3)/4·2^C(k,2)·n^k, with n replaced by nW when given; strict.
pub fn new_fewnomial_bound(n: u64, k: u64, nw: Option<u64>) -> Result<BoundValue> {
    need(n >= 2 && k >= 2, "proved for n,k >= 2")?;
    let m = nw.unwrap_or(n);
    need(m >= 1, "nW must be positive")?;
    let c = EnclosedConstant::get(ConstName::EsqPlus3Over4);
    let f = q(pow2_binom2(k) * bpow(m, k));
    let asm = if nw.is_some() { "n,k>=2; n replaced by nW" } else { "n,k>=2" };
    Ok(BoundValue::enclosed(FormulaId::NewFewnomial, &c.lower * &f, &c.upper * &f, true, asm))
}

/// 2n² + ⌊(n+1)(n+3)/2⌋.
pub fn bound_k2(n: u64) -> Result<u64> {
    need(n >= 2, "proved for n >= 2")?;
    Ok(2 * n * n + (n + 1) * (n + 3) / 2)
}

/// 9n³ + 5n² + 3n + 2.
pub fn bound_k3(n: u64) -> Result<u64> {
    need(n >= 2, "proved for n >= 2")?;
    Ok(9 * n * n * n + 5 * n * n + 3 * n + 2)
}

/// (1 + n/k)^k.
pub fn lower_bound(n: u64, k: u64) -> Result<Rational> {
    need(n >= 1 && k >= 1, "needs n,k >= 1")?;
    let b = Rational::new(BigInt::from(n + k), BigInt::from(k));
    Ok(num_traits::pow(b, k as usize))
}

/// Summands and verdicts of Σ_{j=1}^k 2^C(k−j,2) n^(k−j) C(n+k+1,j) ≤ (e²−1)/2·2^C(k,2) n^k.
#[derive(Clone, Debug, PartialEq)]
pub struct TechnicalReport {
    pub n: u64,
    pub k: u64,
    /// a_0, a_1, …, a_k.
    pub terms: Vec<BigInt>,
    pub sum: BigInt,
    /// lower((e²−1)/2)·a_0.
    pub rhs_lower: Rational,
    pub holds: bool,
    /// a_j ≤ 2^(j−1)/j!·a_0 for j = 1..k; empty at (2,2).
    pub per_term: Vec<bool>,
}

impl TechnicalReport {
    pub fn passed(&self) -> bool {
        self.holds && self.per_term.iter().all(|&b| b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k,
            "terms": self.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "sum": self.sum.to_string(),
            "rhs_lower": fmt_rational(&self.rhs_lower),
            "holds": self.holds,
            "per_term": self.per_term,
        })
    }
}

pub fn technical_terms(n: u64, k: u64) -> Vec<BigInt> {
    (0..=k).map(|j| pow2_binom2(k - j) * bpow(n, k - j) * binomial(n + k + 1, j)).collect()
}

/// Exact check of the sum inequality and of the per-term comparison.
pub fn technical_inequality_check(n: u64, k: u64) -> Result<TechnicalReport> {
    need(n >= 2 && k >= 2, "proved for n,k >= 2")?;
    let terms = technical_terms(n, k);
    let sum: BigInt = terms[1..].iter().sum();
    let c = EnclosedConstant::get(ConstName::EsqMinus1Over2);
    let rhs_lower = &c.lower * q(terms[0].clone());
    let holds = q(sum.clone()) <= rhs_lower;
    let mut per_term = Vec::new();
    if (n, k) != (2, 2) {
        let mut fact = BigInt::one();
        for j in 1..=k {
            fact *= j;
            // a_j·j! ≤ 2^(j−1)·a_0
            per_term.push(&terms[j as usize] * &fact <= (BigInt::one() << (j - 1) as usize) * &terms[0]);
        }
    }
    let r = TechnicalReport { n, k, terms, sum, rhs_lower, holds, per_term };
    if !r.passed() {
        return Err(FnxError::Violation(format!("technical inequality fails at n={n}, k={k}")));
    }
    Ok(r)
}

/// Bounds on the number κ of compact components of a hypersurface with n+k+1 monomials.
pub fn kappa_bounds(n: u64, k: u64) -> Result<Vec<BoundValue>> {
    need(n >= 2 && k >= 2, "proved for n,k >= 2")?;
    let mut out = Vec::new();
    let c = EnclosedConstant::get(ConstName::EsqPlus3Over4);
    let f = q(pow2_binom2(k) * bpow(n, k)) / Rational::from_integer(2.into());
    out.push(BoundValue::enclosed(FormulaId::KappaGeneral, &c.lower * &f, &c.upper * &f, true, "n,k>=2"));
    if k <= n {
        let c1 = EnclosedConstant::get(ConstName::EsqPlus1Over8);
        let c2 = EnclosedConstant::get(ConstName::EsqOver8);
        let a = q(pow2_binom2(k) * k) / Rational::from_integer(2.into()) * q(bpow(n, k - 1));
        let b = q(pow2_binom2(k - 1) * k * bpow(n, k - 1));
        let d = q(pow2_binom2(k - 2) * bpow(n, k - 2));
        let lo = &a + &c1.lower * &b + &c2.lower * &d;
        let hi = &a + &c1.upper * &b + &c2.upper * &d;
        out.push(BoundValue::enclosed(FormulaId::KappaSparse, lo, hi, false, "2<=k<=n"));
    }
    if k == 2 {
        out.push(BoundValue::exact(FormulaId::KappaK2, q(BigInt::from((5 * n + 1) / 2)), false, "k=2"));
    }
    if k == 3 {
        let v = rat(29, 2) * q(BigInt::from(n * n)) - q(BigInt::from(8 * n)) + rat(9, 2);
        out.push(BoundValue::exact(FormulaId::KappaK3, v, false, "k=3"));
    }
    Ok(out)
}

/// Descartes: a univariate polynomial with m monomials has at most m−1 positive roots.
pub fn descartes_k_any_n1(monomials: u64) -> u64 {
    monomials.saturating_sub(1)
}

/// Sharp bound n+1 on positive solutions when k = 1.
pub fn tight_k1(n: u64) -> u64 {
    n + 1
}

/// Compact components of a hypersurface with n+2 monomials.
pub fn components_k1() -> u64 {
    1
}

/// Every solution-count bound that applies at (n, k).
pub fn solution_bounds(n: u64, k: u64) -> Result<Vec<BoundValue>> {
    need(n >= 1 && k >= 1, "needs n,k >= 1")?;
    let mut out = vec![khovanskii_bound(n, k)?];
    if n >= 2 && k >= 2 {
        out.push(new_fewnomial_bound(n, k, None)?);
    }
    if k == 2 && n >= 2 {
        out.push(BoundValue::exact(FormulaId::BoundK2, q(bound_k2(n)?.into()), false, "k=2,n>=2"));
    }
    if k == 3 && n >= 2 {
        out.push(BoundValue::exact(FormulaId::BoundK3, q(bound_k3(n)?.into()), false, "k=3,n>=2"));
    }
    if n == 1 {
        out.push(BoundValue::exact(FormulaId::Descartes, q(descartes_k_any_n1(n + k + 1).into()), false, "n=1"));
    }
    if k == 1 {
        out.push(BoundValue::exact(FormulaId::KOneTight, q(tight_k1(n).into()), false, "k=1"));
    }
    Ok(out)
}

/// One row of the bounds table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub n: u64,
    pub k: u64,
    pub bound: BoundValue,
}

/// Solution bounds, the lower bound and κ bounds for every (n, k) in the ranges.
pub fn bounds_table(ns: &[u64], ks: &[u64]) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        for &k in ks {
            for b in solution_bounds(n, k)? {
                rows.push(TableRow { n, k, bound: b });
            }
            let lb = lower_bound(n, k)?;
            let mut lbv = BoundValue::exact(FormulaId::LowerBound, lb.clone(), false, "construction exists");
            lbv.integer_cap = lb.floor().to_integer();
            rows.push(TableRow { n, k, bound: lbv });
            if n >= 2 && k >= 2 {
                for b in kappa_bounds(n, k)? {
                    rows.push(TableRow { n, k, bound: b });
                }
            } else if k == 1 {
                let b = BoundValue::exact(FormulaId::ComponentsK1, Rational::one(), false, "k=1");
                rows.push(TableRow { n, k, bound: b });
            }
        }
    }
    Ok(rows)
}

/// Does the count respect every cap in the list?
pub fn within_caps(count: u64, caps: &[BoundValue]) -> bool {
    caps.iter().all(|b| b.admits(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f64_bracket(c: &EnclosedConstant, v: f64) {
        assert!(to_f64(&c.lower) <= v + 1e-12 && v - 1e-12 <= to_f64(&c.upper), "{:?}", c.name);
    }

    #[test]
    fn enclosures() {
        let e2 = std::f64::consts::E * std::f64::consts::E;
        let eps = Rational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
        for name in ConstName::ALL {
            let c = EnclosedConstant::get(name);
            assert!(c.lower < c.upper);
            assert!(c.width() < eps);
            let (a, b, d) = name.affine();
            f64_bracket(&c, (a as f64 * e2 + b as f64) / d as f64);
        }
        let h = EnclosedConstant::get(ConstName::EsqMinus1Over2);
        assert!(h.lower > rat(31, 10) && h.upper < rat(32, 10));
        // independent: e² from the 128-bit exponential
        let r = Real::from_i64(2, 256).exp();
        let lo = Real::from_rational(&EnclosedConstant::get(ConstName::ESquared).lower, 256);
        let hi = Real::from_rational(&EnclosedConstant::get(ConstName::ESquared).upper, 256);
        assert!(lo <= r && r <= hi);
    }

    #[test]
    fn headline_values() {
        assert_eq!(khovanskii_bound(2, 2).unwrap().integer_cap, 5184.into());
        assert_eq!(khovanskii_bound(1, 1).unwrap().integer_cap, 8.into());
        assert_eq!(khovanskii_bound(3, 2).unwrap().integer_cap, 1_048_576.into());
        let b = new_fewnomial_bound(2, 2, None).unwrap();
        assert_eq!(b.integer_cap, 20.into());
        assert!((b.value_f64() - 20.78).abs() < 0.01);
        assert_eq!(new_fewnomial_bound(2, 2, Some(1)).unwrap().integer_cap, 5.into());
        assert_eq!(new_fewnomial_bound(3, 2, None).unwrap().integer_cap, 46.into());
        assert!(matches!(new_fewnomial_bound(1, 2, None), Err(FnxError::Range(_))));
        assert_eq!(bound_k2(2).unwrap(), 15);
        assert_eq!(bound_k2(3).unwrap(), 30);
        assert_eq!(bound_k2(4).unwrap(), 49);
        assert_eq!(bound_k3(2).unwrap(), 100);
        assert_eq!(bound_k3(3).unwrap(), 299);
        assert!(bound_k3(1).is_err());
        assert_eq!(lower_bound(2, 2).unwrap(), rat(4, 1));
        assert_eq!(lower_bound(4, 2).unwrap(), rat(9, 1));
        assert_eq!(lower_bound(2, 1).unwrap(), rat(3, 1));
    }

    #[test]
    fn strict_cap_at_integer_value() {
        let b = BoundValue::exact(FormulaId::Khovanskii, rat(7, 1), true, "");
        assert_eq!(b.integer_cap, 6.into());
        let b = BoundValue::exact(FormulaId::Khovanskii, rat(15, 2), true, "");
        assert_eq!(b.integer_cap, 7.into());
    }

    #[test]
    fn technical() {
        let r = technical_inequality_check(2, 2).unwrap();
        assert_eq!(r.terms[1..].to_vec(), vec![BigInt::from(10), BigInt::from(10)]);
        assert_eq!(r.sum, 20.into());
        let r = technical_inequality_check(2, 3).unwrap();
        // independent sum: 2·2²·C(6,1) + 1·2·C(6,2) + 1·1·C(6,3)
        assert_eq!(r.sum, (48 + 30 + 20).into());
        assert!(q(r.sum.clone()) <= rat(31945, 10000) * rat(64, 1));
        for n in 2..=40 {
            for k in 2..=40 {
                assert!(technical_inequality_check(n, k).unwrap().passed(), "{n},{k}");
            }
        }
    }

    #[test]
    fn kappa() {
        let b = kappa_bounds(2, 2).unwrap();
        assert_eq!(b[0].integer_cap, 10.into());
        assert!((b[0].value_f64() - 10.39).abs() < 0.01);
        let k2 = b.iter().find(|x| x.formula_id == FormulaId::KappaK2).unwrap();
        assert_eq!(k2.integer_cap, 5.into());
        let b3 = kappa_bounds(2, 3).unwrap();
        assert!(b3.iter().all(|x| x.formula_id != FormulaId::KappaSparse));
        let k3 = b3.iter().find(|x| x.formula_id == FormulaId::KappaK3).unwrap();
        assert_eq!(k3.lower, rat(93, 2));
        assert_eq!(k3.integer_cap, 46.into());
        let b5 = kappa_bounds(5, 2).unwrap();
        assert_eq!(b5.iter().find(|x| x.formula_id == FormulaId::KappaK2).unwrap().integer_cap, 13.into());
        // sparse form at (2,2): 4 + (e²+1)/2 + e²/8
        let s = kappa_bounds(2, 2).unwrap().into_iter().find(|x| x.formula_id == FormulaId::KappaSparse).unwrap();
        let e2 = std::f64::consts::E.powi(2);
        assert!((s.value_f64() - (4.0 + (e2 + 1.0) / 2.0 + e2 / 8.0)).abs() < 1e-9);
    }

    #[test]
    fn small_cases() {
        assert_eq!(descartes_k_any_n1(5), 4);
        assert_eq!(tight_k1(5), 6);
        assert_eq!(components_k1(), 1);
    }

    #[test]
    fn table_contains_headline_numbers() {
        let rows = bounds_table(&[2], &[2, 3]).unwrap();
        let caps: Vec<(u64, String)> = rows.iter().map(|r| (r.k, r.bound.integer_cap.to_string())).collect();
        for v in ["5184", "20", "15", "4"] {
            assert!(caps.contains(&(2, v.to_string())), "{v}");
        }
        assert!(caps.contains(&(3, "100".to_string())));
    }

    #[test]
    fn orderings() {
        for n in 2..=8u64 {
            for k in 2..=8u64 {
                let lo = lower_bound(n, k).unwrap();
                let nb = new_fewnomial_bound(n, k, None).unwrap();
                assert!(lo <= q(nb.integer_cap.clone()));
                assert!(nb.integer_cap <= khovanskii_bound(n, k).unwrap().integer_cap);
            }
        }
        for n in 2..=100u64 {
            assert!(BigInt::from(bound_k2(n).unwrap()) <= new_fewnomial_bound(n, 2, None).unwrap().integer_cap);
            assert!(BigInt::from(bound_k3(n).unwrap()) <= new_fewnomial_bound(n, 3, None).unwrap().integer_cap);
        }
    }

    proptest! {
        #[test]
        fn cap_below_value(n in 2u64..30, k in 2u64..6) {
            for b in solution_bounds(n, k).unwrap().into_iter().chain(kappa_bounds(n, k).unwrap()) {
                let c = q(b.integer_cap.clone());
                if b.strict {
                    prop_assert!(c < b.lower);
                } else {
                    prop_assert!(c <= b.lower);
                }
                prop_assert!(b.integer_cap >= BigInt::zero());
                prop_assert!(b.upper - c < Rational::one() + Rational::one());
            }
        }
    }
}
