//! Sparse multivariate Laurent polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{FnxError, Result};
use crate::rational::{fmt_rational, lcm_denominators, Rational};
use crate::real::Real;

pub type Exp = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    vars: usize,
    terms: BTreeMap<Exp, Rational>,
    /// Exponents are stored multiplied by this common denominator.
    denom_clear: u64,
}

impl SparsePoly {
    pub fn zero(vars: usize) -> Self {
        SparsePoly { vars, terms: BTreeMap::new(), denom_clear: 1 }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        SparsePoly::monomial(vars, vec![0; vars], c)
    }

    pub fn one(vars: usize) -> Self {
        SparsePoly::constant(vars, Rational::one())
    }

    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        SparsePoly::monomial(vars, e, Rational::one())
    }

    pub fn monomial(vars: usize, e: Exp, c: Rational) -> Self {
        assert_eq!(e.len(), vars);
        let mut p = SparsePoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Affine form c0 + Σ c_l y_l.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let vars = coeffs.len() - 1;
        let mut p = SparsePoly::constant(vars, coeffs[0].clone());
        for (l, c) in coeffs[1..].iter().enumerate() {
            p = &p + &SparsePoly::var(vars, l).scale(c);
        }
        p
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Exp, Rational)>) -> Self {
        let mut p = SparsePoly::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Rational exponents are cleared by their common denominator N, recorded in `denom_clear`.
    pub fn from_rational_terms(vars: usize, terms: &[(Vec<Rational>, Rational)]) -> Self {
        let n = lcm_denominators(terms.iter().flat_map(|(e, _)| e.iter()));
        let nn = Rational::from_integer(n.clone());
        let mut p = SparsePoly::zero(vars);
        for (e, c) in terms {
            let ie = e.iter().map(|x| (x * &nn).to_integer().to_i64().expect("exponent fits i64")).collect();
            p.add_term(ie, c.clone());
        }
        p.denom_clear = n.to_u64().expect("denominator fits u64");
        p
    }

    fn add_term(&mut self, e: Exp, c: Rational) {
        assert_eq!(e.len(), self.vars);
        if c.is_zero() {
            return;
        }
        let key = e.clone();
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn denom_clear(&self) -> u64 {
        self.denom_clear
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i64]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return SparsePoly { denom_clear: self.denom_clear, ..SparsePoly::zero(self.vars) };
        }
        SparsePoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
            denom_clear: self.denom_clear,
        }
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    /// Multiplies by the monomial that makes every exponent nonnegative and
    /// each variable's minimum exponent zero. Returns the shift used.
    pub fn clear_laurent(&self) -> (SparsePoly, Exp) {
        let shift: Exp = (0..self.vars).map(|v| -self.min_degree_in(v)).collect();
        (self.shift(&shift), shift)
    }

    pub fn shift(&self, s: &[i64]) -> SparsePoly {
        SparsePoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(s).map(|(a, b)| a + b).collect(), c.clone())).collect(),
            denom_clear: self.denom_clear,
        }
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> SparsePoly {
        let mut p = SparsePoly::zero(self.vars);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                let mut ne = e.clone();
                ne[var] -= 1;
                p.add_term(ne, c * Rational::from_integer(BigInt::from(e[var])));
            }
        }
        p.denom_clear = self.denom_clear;
        p
    }

    /// Exact evaluation; Laurent terms need nonzero coordinates.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        let mut s = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                if ei == 0 {
                    continue;
                }
                if xi.is_zero() && ei < 0 {
                    return Err(FnxError::Domain("negative power of zero".into()));
                }
                t *= num_traits::pow::pow(xi.clone(), ei.unsigned_abs() as usize).pipe(|p| if ei < 0 { p.recip() } else { p });
            }
            s += t;
        }
        Ok(s)
    }

    pub fn eval_real(&self, x: &[Real]) -> Real {
        let prec = x.first().map_or(crate::real::DEFAULT_PRECISION, |r| r.prec());
        let mut s = Real::zero(prec);
        for (e, c) in &self.terms {
            let mut t = Real::from_rational(c, prec);
            for (xi, &ei) in x.iter().zip(e) {
                if ei != 0 {
                    t = t * xi.powi(ei);
                }
            }
            s = s + t;
        }
        s
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                crate::rational::to_f64(c) * x.iter().zip(e).map(|(xi, &ei)| xi.powi(ei as i32)).product::<f64>()
            })
            .sum()
    }

    /// Replaces variable `var` by a fixed rational value (nonnegative exponents or nonzero value).
    pub fn eval_var(&self, var: usize, value: &Rational) -> SparsePoly {
        let mut p = SparsePoly::zero(self.vars);
        for (e, c) in &self.terms {
            let k = e[var];
            let f = if k >= 0 {
                num_traits::pow::pow(value.clone(), k as usize)
            } else {
                num_traits::pow::pow(value.clone(), (-k) as usize).recip()
            };
            let mut ne = e.clone();
            ne[var] = 0;
            p.add_term(ne, c * f);
        }
        p
    }

    /// Replaces variable `var` by the polynomial `q` (nonnegative exponents in `var`).
    pub fn substitute(&self, var: usize, q: &SparsePoly) -> SparsePoly {
        let coeffs = self.coeffs_in(var);
        // Horner in q
        let mut acc = SparsePoly::zero(self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    /// Coefficients as a polynomial in `var`: entry d multiplies var^d (requires nonnegative exponents).
    pub fn coeffs_in(&self, var: usize) -> Vec<SparsePoly> {
        let d = self.degree_in(var).max(0) as usize;
        let mut out = vec![SparsePoly::zero(self.vars); d + 1];
        for (e, c) in &self.terms {
            assert!(e[var] >= 0, "coeffs_in needs nonnegative exponents");
            let mut ne = e.clone();
            ne[var] = 0;
            out[e[var] as usize].add_term(ne, c.clone());
        }
        out
    }

    /// Univariate coefficient list, low to high, for a polynomial in a single variable `var`.
    pub fn univariate(&self, var: usize) -> Vec<Rational> {
        let d = self.degree_in(var).max(0) as usize;
        let mut out = vec![Rational::zero(); d + 1];
        for (e, c) in &self.terms {
            debug_assert!(e.iter().enumerate().all(|(i, &x)| i == var || x == 0));
            out[e[var] as usize] += c;
        }
        out
    }

    /// Exact division by `d`; `None` if `d` does not divide `self` (lex order, nonnegative exponents).
    pub fn div_exact(&self, d: &SparsePoly) -> Option<SparsePoly> {
        if d.is_zero() {
            return None;
        }
        let (lead_e, lead_c) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.terms.clone();
        let mut q = BTreeMap::new();
        while let Some((e, c)) = rem.pop_last() {
            let qe: Exp = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let qc = c / &lead_c;
            for (de, dc) in d.terms.iter().rev().skip(1) {
                let key: Exp = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                let v = rem.entry(key).or_insert_with(Rational::zero);
                *v -= &qc * dc;
                if v.is_zero() {
                    let key: Exp = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                    rem.remove(&key);
                }
            }
            q.insert(qe, qc);
        }
        Some(SparsePoly { vars: self.vars, terms: q, denom_clear: self.denom_clear })
    }

    /// Integer multiple with coprime integer coefficients and positive leading term.
    pub fn primitive(&self) -> SparsePoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = lcm_denominators(self.terms.values());
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * Rational::from_integer(l.clone())).to_integer());
        }
        let lead_neg = self.terms.values().next_back().unwrap().is_negative();
        let mut f = Rational::new(l, g);
        if lead_neg {
            f = -f;
        }
        self.scale(&f)
    }
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}
impl<T> Pipe for T {}

impl Add<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, o: &SparsePoly) -> SparsePoly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            let entry = p.terms.entry(e.clone()).or_insert_with(Rational::zero);
            *entry += c;
        }
        p.terms.retain(|_, v| !v.is_zero());
        p
    }
}

impl Sub<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, o: &SparsePoly) -> SparsePoly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            let entry = p.terms.entry(e.clone()).or_insert_with(Rational::zero);
            *entry -= c;
        }
        p.terms.retain(|_, v| !v.is_zero());
        p
    }
}

impl Mul<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, o: &SparsePoly) -> SparsePoly {
        let mut terms: BTreeMap<Exp, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exp = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(Rational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        SparsePoly { vars: self.vars, terms, denom_clear: self.denom_clear.max(o.denom_clear) }
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_rational(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*y{}", i + 1)?,
                    _ => write!(f, "*y{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
