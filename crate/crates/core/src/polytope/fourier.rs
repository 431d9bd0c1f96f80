//! Fourier–Motzkin elimination with strict and non-strict inequalities.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// a · y + c > 0 (strict) or ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Ineq {
    pub a: Vec<Rational>,
    pub c: Rational,
    pub strict: bool,
}

impl Ineq {
    pub fn new(a: Vec<Rational>, c: Rational, strict: bool) -> Ineq {
        Ineq { a, c, strict }
    }

    fn holds(&self, y: &[Rational]) -> bool {
        let v = self.a.iter().zip(y).fold(self.c.clone(), |s, (a, x)| s + a * x);
        if self.strict { v.is_positive() } else { !v.is_negative() }
    }

    /// Scales so the largest |coefficient| is 1 (for deduplication).
    fn normalized(&self) -> Ineq {
        let m = self.a.iter().chain(std::iter::once(&self.c)).map(|x| x.abs()).max().unwrap_or_else(Rational::zero);
        if m.is_zero() {
            return self.clone();
        }
        Ineq { a: self.a.iter().map(|x| x / &m).collect(), c: &self.c / &m, strict: self.strict }
    }
}

fn dedupe(v: Vec<Ineq>) -> Vec<Ineq> {
    let mut out: Vec<Ineq> = Vec::new();
    for q in v.into_iter().map(|q| q.normalized()) {
        if let Some(p) = out.iter_mut().find(|p| p.a == q.a && p.c == q.c) {
            p.strict |= q.strict;
        } else {
            out.push(q);
        }
    }
    out
}

/// A point satisfying every inequality, or `None` if the system is infeasible.
pub fn feasible_point(ineqs: &[Ineq], dim: usize) -> Option<Vec<Rational>> {
    // levels[l] holds constraints in variables 0..l
    let mut levels: Vec<Vec<Ineq>> = vec![Vec::new(); dim + 1];
    levels[dim] = dedupe(ineqs.to_vec());
    for l in (1..=dim).rev() {
        let v = l - 1;
        let cur = &levels[l];
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for q in cur {
            if q.a[v].is_positive() {
                pos.push(q);
            } else if q.a[v].is_negative() {
                neg.push(q);
            } else {
                next.push(Ineq { a: q.a[..v].to_vec(), c: q.c.clone(), strict: q.strict });
            }
        }
        for p in &pos {
            for q in &neg {
                let sp = p.a[v].recip();
                let sq = -q.a[v].recip();
                let a: Vec<Rational> = (0..v).map(|i| &p.a[i] * &sp + &q.a[i] * &sq).collect();
                let c = &p.c * &sp + &q.c * &sq;
                next.push(Ineq { a, c, strict: p.strict || q.strict });
            }
        }
        levels[v] = dedupe(next);
    }
    for q in &levels[0] {
        if q.strict && !q.c.is_positive() || !q.strict && q.c.is_negative() {
            return None;
        }
    }
    // back-substitute one variable at a time
    let mut y: Vec<Rational> = Vec::new();
    for l in 1..=dim {
        let v = l - 1;
        let mut lo: Option<(Rational, bool)> = None;
        let mut hi: Option<(Rational, bool)> = None;
        for q in &levels[l] {
            if q.a[v].is_zero() {
                continue;
            }
            let rest = q.a[..v].iter().zip(&y).fold(q.c.clone(), |s, (a, x)| s + a * x);
            let t = -rest / &q.a[v];
            if q.a[v].is_positive() {
                if lo.as_ref().map_or(true, |(b, s)| t > *b || (t == *b && q.strict && !s)) {
                    lo = Some((t, q.strict));
                }
            } else if hi.as_ref().map_or(true, |(b, s)| t < *b || (t == *b && q.strict && !s)) {
                hi = Some((t, q.strict));
            }
        }
        let two = Rational::from_integer(2.into());
        let val = match (lo, hi) {
            (None, None) => Rational::zero(),
            (Some((a, _)), None) => a + Rational::one(),
            (None, Some((b, _))) => b - Rational::one(),
            (Some((a, sa)), Some((b, sb))) => {
                if a < b {
                    (a + b) / two
                } else if a == b && !sa && !sb {
                    a
                } else {
                    return None;
                }
            }
        };
        y.push(val);
    }
    debug_assert!(ineqs.iter().all(|q| q.holds(&y)));
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn q(a: &[i64], c: i64, strict: bool) -> Ineq {
        Ineq::new(a.iter().map(|&x| int(x)).collect(), int(c), strict)
    }

    #[test]
    fn open_square() {
        let s = vec![q(&[1, 0], 0, true), q(&[0, 1], 0, true), q(&[-1, 0], 1, true), q(&[0, -1], 1, true)];
        let p = feasible_point(&s, 2).unwrap();
        assert!(s.iter().all(|c| c.holds(&p)));
    }

    #[test]
    fn strictness_matters() {
        // y >= 0 and -y >= 0 is the point 0; with one strict it is empty
        assert_eq!(feasible_point(&[q(&[1], 0, false), q(&[-1], 0, false)], 1), Some(vec![int(0)]));
        assert_eq!(feasible_point(&[q(&[1], 0, true), q(&[-1], 0, false)], 1), None);
        // triangle y1 + y2 < 0 with y1, y2 > 0 is empty
        assert_eq!(feasible_point(&[q(&[1, 0], 0, true), q(&[0, 1], 0, true), q(&[-1, -1], 0, true)], 2), None);
    }
}
