//! Univariate integer polynomials: Sturm sequences, root isolation, and exact
//! sign determination at real algebraic numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{FnxError, Result};
use crate::poly::SparsePoly;
use crate::rational::{lcm_denominators, Rational};
use crate::real::Real;

/// Integer polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<BigInt>,
}

/// Interval end point: a rational or ±∞.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

fn sgn(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl UPoly {
    pub fn new(mut c: Vec<BigInt>) -> UPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Primitive integer multiple of a rational coefficient list (positive leading coefficient).
    /// Positive multiple with coprime integer coefficients; signs are kept.
    pub fn from_rationals(c: &[Rational]) -> UPoly {
        let l = lcm_denominators(c.iter());
        let lr = Rational::from_integer(l);
        let p = UPoly::new(c.iter().map(|x| (x * &lr).to_integer()).collect());
        let g = p.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() || g.is_one() {
            return p;
        }
        UPoly { c: p.c.iter().map(|x| x / &g).collect() }
    }

    pub fn from_sparse(p: &SparsePoly, var: usize) -> UPoly {
        UPoly::from_rationals(&p.univariate(var))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
        }
        if self.lc().is_negative() {
            g = -g;
        }
        UPoly { c: self.c.iter().map(|x| x / &g).collect() }
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.c.iter().enumerate().skip(1).map(|(i, x)| x * BigInt::from(i)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Sign at a rational by homogenised integer Horner (denominator is positive).
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let (p, q) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        // Σ c_i p^i q^{d-i}, evaluated from the top
        for c in self.c.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        sgn(&acc)
    }

    pub fn sign_at_bound(&self, b: &Bound) -> i32 {
        match b {
            Bound::Finite(x) => self.sign_at(x),
            Bound::PosInf => sgn(&self.lc()),
            Bound::NegInf => {
                let d = self.degree().unwrap_or(0);
                if d % 2 == 0 { sgn(&self.lc()) } else { -sgn(&self.lc()) }
            }
        }
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let mut acc = Real::zero(x.prec());
        for c in self.c.iter().rev() {
            acc = acc * x + Real::from_bigint(c, x.prec());
        }
        acc
    }

    /// Remainder of self by b, scaled by a positive factor, made primitive.
    pub fn sprem(&self, b: &UPoly) -> UPoly {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.lc();
        let alb = lb.abs();
        let slb = sgn(&lb);
        let mut r = self.c.clone();
        while r.len() > db && !r.is_empty() {
            let d = r.len() - 1;
            let lr = r[d].clone();
            for x in r.iter_mut() {
                *x *= &alb;
            }
            let shift = d - db;
            for (i, bc) in b.c.iter().enumerate() {
                let t = &lr * bc;
                if slb > 0 {
                    r[shift + i] -= t;
                } else {
                    r[shift + i] += t;
                }
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        let r = UPoly::new(r);
        // positive content only: keep sign
        if r.is_zero() {
            return r;
        }
        let mut g = BigInt::zero();
        for x in &r.c {
            g = g.gcd(x);
        }
        UPoly { c: r.c.iter().map(|x| x / &g).collect() }
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        while !b.is_zero() {
            let r = a.sprem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Quotient over Q made primitive; `None` if the division is not exact.
    pub fn div_exact(&self, b: &UPoly) -> Option<UPoly> {
        let db = b.degree()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        let da = self.degree().unwrap();
        if da < db {
            return None;
        }
        let mut r: Vec<Rational> = self.c.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let lb = Rational::from_integer(b.lc());
        let mut q = vec![Rational::zero(); da - db + 1];
        for i in (0..=da - db).rev() {
            let f = &r[i + db] / &lb;
            for (j, bc) in b.c.iter().enumerate() {
                r[i + j] -= &f * Rational::from_integer(bc.clone());
            }
            q[i] = f;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(UPoly::from_rationals(&q))
    }

    pub fn squarefree(&self) -> UPoly {
        let d = self.derivative();
        if d.is_zero() {
            return self.primitive();
        }
        let g = self.gcd(&d);
        if g.degree() == Some(0) {
            return self.primitive();
        }
        self.div_exact(&g).expect("gcd divides")
    }

    /// Strict bound: every root has absolute value < the returned value.
    pub fn root_bound(&self) -> Rational {
        let lc = Rational::from_integer(self.lc().abs());
        let mut m = Rational::zero();
        for x in &self.c[..self.c.len().saturating_sub(1)] {
            let v = Rational::from_integer(x.abs()) / &lc;
            if v > m {
                m = v;
            }
        }
        m + Rational::one()
    }
}

/// Sturm chain of a polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<UPoly>,
}

impl Sturm {
    pub fn new(p: &UPoly) -> Sturm {
        let mut seq = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let n = seq.len();
            let r = seq[n - 2].sprem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(UPoly { c: r.c.iter().map(|x| -x).collect() });
        }
        Sturm { seq }
    }

    pub fn poly(&self) -> &UPoly {
        &self.seq[0]
    }

    fn variations(&self, b: &Bound) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.seq {
            let s = p.sign_at_bound(b);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Distinct roots in the open interval (a, b).
    pub fn count(&self, a: &Bound, b: &Bound) -> usize {
        if self.seq[0].degree().unwrap_or(0) == 0 {
            return 0;
        }
        let va = self.variations(a);
        let vb = self.variations(b);
        // V(a) - V(b) counts (a, b]; drop b if it is a root
        let n = va.saturating_sub(vb);
        if self.seq[0].sign_at_bound(b) == 0 { n - 1 } else { n }
    }

    /// Distinct roots in the closed interval [a, b] with finite ends.
    pub fn count_closed(&self, a: &Rational, b: &Rational) -> usize {
        let mut n = self.count(&Bound::Finite(a.clone()), &Bound::Finite(b.clone()));
        if self.seq[0].sign_at(a) == 0 {
            n += 1;
        }
        if a != b && self.seq[0].sign_at(b) == 0 {
            n += 1;
        }
        n
    }
}

/// Counts distinct real roots of a univariate polynomial in an open interval,
/// and how many of them are multiple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCount {
    pub distinct: usize,
    pub multiple: usize,
}

pub fn sturm_roots(p: &UPoly, a: &Bound, b: &Bound) -> Result<RootCount> {
    if p.is_zero() {
        return Err(FnxError::ZeroPoly);
    }
    let sf = p.squarefree();
    let distinct = Sturm::new(&sf).count(a, b);
    let g = p.gcd(&p.derivative());
    let multiple = if g.degree().unwrap_or(0) > 0 { Sturm::new(&g.squarefree()).count(a, b) } else { 0 };
    Ok(RootCount { distinct, multiple })
}

/// Counts roots of a univariate `SparsePoly` (in variable 0) in (a, b).
pub fn sturm_positive_roots(p: &SparsePoly, a: &Bound, b: &Bound) -> Result<RootCount> {
    if p.is_zero() {
        return Err(FnxError::ZeroPoly);
    }
    let (q, _) = p.clear_laurent();
    sturm_roots(&UPoly::from_sparse(&q, 0), a, b)
}

fn pick_split(p: &UPoly, a: &Rational, b: &Rational) -> Rational {
    let two = Rational::from_integer(BigInt::from(2));
    let mut m = (a + b) / &two;
    let mut k = 3i64;
    while p.sign_at(&m) == 0 {
        m = a + (b - a) * Rational::new(BigInt::one(), BigInt::from(k));
        k += 1;
    }
    m
}

/// Isolating intervals (a_i, b_i) for the distinct roots of squarefree `p` in (lo, hi).
/// Ends of returned intervals are never roots; lo, hi must not be roots.
pub fn isolate(p: &UPoly, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
    let st = Sturm::new(p);
    let mut out = Vec::new();
    let (lo, hi) = (nudge_in(p, &st, lo, hi, true), nudge_in(p, &st, lo, hi, false));
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let n = st.count(&Bound::Finite(a.clone()), &Bound::Finite(b.clone()));
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((a, b));
            continue;
        }
        let m = pick_split(p, &a, &b);
        stack.push((m.clone(), b));
        stack.push((a, m));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Moves an end point that is a root slightly inward, past no other root.
fn nudge_in(p: &UPoly, st: &Sturm, lo: &Rational, hi: &Rational, low_end: bool) -> Rational {
    let end = if low_end { lo } else { hi };
    if p.sign_at(end) != 0 {
        return end.clone();
    }
    let mut step = (hi - lo) / Rational::from_integer(BigInt::from(2));
    loop {
        let cand = if low_end { end + &step } else { end - &step };
        let (a, b) = if low_end { (end.clone(), cand.clone()) } else { (cand.clone(), end.clone()) };
        if p.sign_at(&cand) != 0 && st.count(&Bound::Finite(a), &Bound::Finite(b)) == 0 {
            return cand;
        }
        step = step / Rational::from_integer(BigInt::from(2));
    }
}

/// All real roots of squarefree `p`, isolated.
pub fn isolate_all(p: &UPoly) -> Vec<(Rational, Rational)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let b = p.root_bound();
    isolate(p, &-b.clone(), &b)
}

/// Halves the isolating interval until its width is below `width`.
pub fn refine(p: &UPoly, iv: &mut (Rational, Rational), width: &Rational) {
    let sa = p.sign_at(&iv.0);
    while &(&iv.1 - &iv.0) >= width {
        let m = pick_split(p, &iv.0, &iv.1);
        if p.sign_at(&m) == sa {
            iv.0 = m;
        } else {
            iv.1 = m;
        }
    }
}

/// One bisection step that keeps the unique root of `p` inside.
fn bisect(p: &UPoly, iv: &mut (Rational, Rational)) {
    let sa = p.sign_at(&iv.0);
    let m = pick_split(p, &iv.0, &iv.1);
    if p.sign_at(&m) == sa {
        iv.0 = m;
    } else {
        iv.1 = m;
    }
}

/// Sign of `h` on the whole interval when the Taylor expansion at its midpoint proves it.
/// With m = p/q and x = (p + s)/q, G(s) = q^d h(x) is expanded in integers and
/// |G_0| > Σ |G_j| R^j is tested for R = q·radius.
fn enclosure_sign(h: &UPoly, iv: &(Rational, Rational)) -> Option<i32> {
    let two = Rational::from_integer(BigInt::from(2));
    let m = (&iv.0 + &iv.1) / &two;
    let (p, q) = (m.numer().clone(), m.denom().clone());
    let r = (&iv.1 - &iv.0) / &two * Rational::from_integer(q.clone());
    let (rn, rd) = (r.numer().clone(), r.denom().clone());
    let d = h.c.len() - 1;
    let mut g: Vec<BigInt> = Vec::with_capacity(d + 1);
    let mut qpow = BigInt::one();
    for a in h.c.iter().rev() {
        // g ← g·(p + s) + a·q^{d−i}
        let mut next = vec![BigInt::zero(); g.len() + 1];
        for (j, gj) in g.iter().enumerate() {
            next[j] += gj * &p;
            next[j + 1] += gj;
        }
        next[0] += a * &qpow;
        qpow *= &q;
        g = next;
    }
    // |G_0| rd^d > Σ_{j≥1} |G_j| rn^j rd^{d−j}
    let mut rdp = vec![BigInt::one(); d + 1];
    for j in 1..=d {
        rdp[j] = &rdp[j - 1] * &rd;
    }
    let lhs = g[0].abs() * &rdp[d];
    let mut rhs = BigInt::zero();
    let mut rnp = BigInt::one();
    for j in 1..=d {
        rnp *= &rn;
        rhs += g[j].abs() * &rnp * &rdp[d - j];
    }
    if lhs > rhs {
        Some(sgn(&g[0]))
    } else {
        None
    }
}

/// Sign of `h` at the unique root of squarefree `r` in the isolating interval `iv`.
/// Refines `iv` in place as needed.
pub fn sign_at_root(r: &UPoly, iv: &mut (Rational, Rational), h: &UPoly) -> i32 {
    // |lc r|^m h − q r has the sign of h at every root of r
    let h = if h.degree() >= r.degree() && r.degree().unwrap_or(0) > 0 { h.sprem(r) } else { h.clone() };
    if h.is_zero() {
        return 0;
    }
    if h.degree() == Some(0) {
        return sgn(&h.lc());
    }
    for _ in 0..48 {
        if let Some(s) = enclosure_sign(&h, iv) {
            return s;
        }
        bisect(r, iv);
    }
    let h = &h;
    let g = r.gcd(h);
    if g.degree().unwrap_or(0) > 0 && Sturm::new(&g).count(&Bound::Finite(iv.0.clone()), &Bound::Finite(iv.1.clone())) > 0 {
        return 0;
    }
    let hs = Sturm::new(&h.squarefree());
    loop {
        if hs.count_closed(&iv.0, &iv.1) == 0 {
            return h.sign_at(&iv.0);
        }
        bisect(r, iv);
    }
}

/// Midpoint of an interval refined to relative width 2^-bits, as a real.
pub fn root_value(p: &UPoly, iv: &(Rational, Rational), bits: usize) -> (Real, (Rational, Rational)) {
    let mut iv = iv.clone();
    let scale = iv.0.abs().max(iv.1.abs()).max(Rational::one());
    let w = scale * Rational::new(BigInt::one(), BigInt::one() << (bits + 4));
    refine(p, &mut iv, &w);
    let mid = (&iv.0 + &iv.1) / Rational::from_integer(BigInt::from(2));
    (Real::from_rational(&mid, bits), iv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn pos(p: &[i64]) -> usize {
        sturm_roots(&UPoly::from_i64(p), &Bound::Finite(int(0)), &Bound::PosInf).unwrap().distinct
    }

    #[test]
    fn from_rationals_keeps_sign() {
        let p = UPoly::from_rationals(&[rat(1, 2), rat(-3, 4)]);
        assert_eq!(p.coeffs(), &[BigInt::from(2), BigInt::from(-3)]);
        assert_eq!(p.sign_at(&int(1)), -1);
    }

    #[test]
    fn spec_examples() {
        assert_eq!(pos(&[2, -3, 1]), 2);
        assert_eq!(pos(&[1, 0, 1]), 0);
        assert_eq!(pos(&[1, -3, 0, 1]), 2);
    }

    #[test]
    fn bisection_oracle_cubic() {
        // x^3 - 3x + 1: sign changes on (0,1) and (1,2), and one root in (-2,-1)
        let p = UPoly::from_i64(&[1, -3, 0, 1]);
        let s: Vec<i32> = [-2, -1, 0, 1, 2].iter().map(|&x| p.sign_at(&int(x))).collect();
        assert_eq!(s, vec![-1, 1, 1, -1, 1]);
        let ivs = isolate_all(&p);
        assert_eq!(ivs.len(), 3);
        let all = sturm_roots(&p, &Bound::NegInf, &Bound::PosInf).unwrap();
        assert_eq!(all.distinct, 3);
    }

    #[test]
    fn multiplicities() {
        // (x-1)^2 (x-2)
        let p = UPoly::from_i64(&[-2, 5, -4, 1]);
        let rc = sturm_roots(&p, &Bound::Finite(int(0)), &Bound::PosInf).unwrap();
        assert_eq!(rc, RootCount { distinct: 2, multiple: 1 });
        assert_eq!(p.squarefree(), UPoly::from_i64(&[2, -3, 1]));
        assert!(sturm_roots(&UPoly::new(vec![]), &Bound::NegInf, &Bound::PosInf).is_err());
    }

    #[test]
    fn root_end_excluded() {
        let p = UPoly::from_i64(&[-1, 1]);
        let st = Sturm::new(&p);
        assert_eq!(st.count(&Bound::Finite(int(0)), &Bound::Finite(int(1))), 0);
        assert_eq!(st.count(&Bound::Finite(int(1)), &Bound::Finite(int(2))), 0);
        assert_eq!(st.count_closed(&int(0), &int(1)), 1);
    }

    #[test]
    fn signs_at_algebraic_points() {
        // r = x^2 - 2, root sqrt2 in (1,2); h = x - 3/2 is negative there, h2 = x^2-2 vanishes
        let r = UPoly::from_i64(&[-2, 0, 1]);
        let mut iv = (int(1), int(2));
        let h = UPoly::from_i64(&[-3, 2]);
        assert_eq!(sign_at_root(&r, &mut iv, &h), -1);
        let mut iv2 = (int(1), int(2));
        assert_eq!(sign_at_root(&r, &mut iv2, &UPoly::from_i64(&[-4, 0, 2])), 0);
        let mut iv3 = (int(1), int(2));
        assert_eq!(sign_at_root(&r, &mut iv3, &UPoly::from_i64(&[-141421, 100000])), 1);
        let (v, _) = root_value(&r, &(int(1), int(2)), 128);
        assert!((v.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let _ = rat(1, 2);
    }

    #[test]
    fn isolation_with_root_ends() {
        // roots 0, 1, 2 isolated on [0, 2]: only 1 lies strictly inside
        let p = UPoly::from_i64(&[0, 2, -3, 1]);
        let ivs = isolate(&p, &int(0), &int(2));
        assert_eq!(ivs.len(), 1);
        let mut iv = ivs[0].clone();
        assert_ne!(p.sign_at(&iv.0), 0);
        refine(&p, &mut iv, &rat(1, 1000));
        assert!(iv.0 < int(1) && int(1) < iv.1);
    }

    #[test]
    fn gcd_and_division() {
        let a = UPoly::from_i64(&[-1, 0, 1]); // x^2-1
        let b = UPoly::from_i64(&[1, 2, 1]); // (x+1)^2
        assert_eq!(a.gcd(&b), UPoly::from_i64(&[1, 1]));
        assert_eq!(a.div_exact(&UPoly::from_i64(&[1, 1])), Some(UPoly::from_i64(&[-1, 1])));
        assert_eq!(a.div_exact(&UPoly::from_i64(&[2, 1])), None);
    }

    proptest::proptest! {
        #[test]
        fn sign_at_root_matches_float(c in proptest::collection::vec(-20i64..=20, 1..7)) {
            // root of x^3 - 3x - 1 in (1, 2), about 1.8794
            let r = UPoly::from_i64(&[-1, -3, 0, 1]);
            let x = 1.879_385_241_571_816_8f64;
            let h = UPoly::from_i64(&c);
            let v: f64 = c.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64);
            let mut iv = (int(1), int(2));
            let s = sign_at_root(&r, &mut iv, &h);
            if v.abs() > 1e-6 {
                proptest::prop_assert_eq!(s, if v > 0.0 { 1 } else { -1 });
            }
        }
    }
}
