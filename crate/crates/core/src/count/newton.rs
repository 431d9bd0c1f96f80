//! Multi-start damped Newton in log coordinates. Never certified.

use nalgebra::{DMatrix, DVector};

use crate::count::{CountReport, Method, Solution};
use crate::rational::{to_f64, Rational};
use crate::real::{Real, DEFAULT_PRECISION};
use crate::system::{eval_system, FewnomialSystem};

/// Radical-inverse Halton point `i` in dimension `d`, with a seed-dependent shift.
pub fn halton(i: u64, d: usize, shift: &[f64]) -> Vec<f64> {
    const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    (0..d)
        .map(|j| {
            let b = PRIMES[j % PRIMES.len()];
            let (mut f, mut r, mut k) = (1.0, 0.0, i + 1);
            while k > 0 {
                f /= b as f64;
                r += f * (k % b) as f64;
                k /= b;
            }
            (r + shift[j]).fract()
        })
        .collect()
}

/// Damped Newton on a square map; returns the root if it converged.
pub fn damped_newton<F>(x0: &[f64], f: F, max_iter: usize) -> Option<Vec<f64>>
where
    F: Fn(&[f64]) -> Option<(DVector<f64>, DMatrix<f64>)>,
{
    let mut x = DVector::from_column_slice(x0);
    let (mut fx, mut jx) = f(x.as_slice())?;
    for _ in 0..max_iter {
        let norm = fx.norm();
        if !norm.is_finite() {
            return None;
        }
        if norm < 1e-13 {
            return Some(x.as_slice().to_vec());
        }
        let step = jx.clone().lu().solve(&(-&fx))?;
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-6 {
            let cand = &x + &step * t;
            if let Some((fc, jc)) = f(cand.as_slice()) {
                if fc.norm() < norm * (1.0 - 1e-4 * t) {
                    x = cand;
                    fx = fc;
                    jx = jc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return if norm < 1e-10 { Some(x.as_slice().to_vec()) } else { None };
        }
    }
    if fx.norm() < 1e-10 { Some(x.as_slice().to_vec()) } else { None }
}

/// Keeps points that differ from every earlier kept point by more than `tol` (relative).
pub fn dedupe(points: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for p in points {
        let dup = kept.iter().any(|q| {
            let d: f64 = p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let s: f64 = q.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-300);
            d <= tol * s.max(1.0)
        });
        if !dup {
            kept.push(p);
        }
    }
    kept.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    kept
}

/// Log-coordinate residual map of a fewnomial system. Each equation is divided by the sum of
/// its term magnitudes, so a monomial factor tending to zero does not fake convergence.
fn log_map(sys: &FewnomialSystem) -> impl Fn(&[f64]) -> Option<(DVector<f64>, DMatrix<f64>)> + '_ {
    let n = sys.n;
    let w: Vec<Vec<f64>> = sys.support.points.iter().map(|p| p.iter().map(to_f64).collect()).collect();
    let c: Vec<Vec<f64>> = sys.coeffs.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    move |x: &[f64]| {
        let mono: Vec<f64> = w.iter().map(|wi| wi.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().exp()).collect();
        if mono.iter().any(|m| !m.is_finite()) {
            return None;
        }
        let mut fv = DVector::zeros(n);
        let mut jm = DMatrix::zeros(n, n);
        for r in 0..n {
            let (mut f, mut s) = (0.0, 0.0);
            let (mut df, mut ds) = (vec![0.0; n], vec![0.0; n]);
            for (m, mv) in mono.iter().enumerate() {
                let t = c[r][m] * mv;
                f += t;
                s += t.abs();
                for l in 0..n {
                    df[l] += t * w[m][l];
                    ds[l] += t.abs() * w[m][l];
                }
            }
            if s <= 0.0 || !s.is_normal() {
                return None;
            }
            fv[r] = f / s;
            for l in 0..n {
                jm[(r, l)] = (df[l] - fv[r] * ds[l]) / s;
            }
        }
        Some((fv, jm))
    }
}

/// Numeric census of positive solutions from `starts` Halton points in log space [-6, 6]^n.
pub fn newton_census(sys: &FewnomialSystem, starts: usize, seed: u64) -> CountReport {
    use rand::{Rng, SeedableRng};
    let n = sys.n;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let map = log_map(sys);
    let mut found = Vec::new();
    for i in 0..starts as u64 {
        let h = halton(i, n, &shift);
        let x0: Vec<f64> = h.iter().map(|u| -6.0 + 12.0 * u).collect();
        if let Some(x) = damped_newton(&x0, &map, 80) {
            found.push(x.iter().map(|v| v.exp()).collect::<Vec<f64>>());
        }
    }
    let pts = dedupe(found, 1e-8);
    let sols: Vec<Solution> = pts
        .iter()
        .map(|p| {
            let z: Vec<Real> = p.iter().map(|&v| Real::from_f64(v, DEFAULT_PRECISION)).collect();
            let res = eval_system(sys, &z).map(|r| r.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max)).unwrap_or(f64::NAN);
            Solution { point: z, residual: res, multiple: false }
        })
        .collect();
    CountReport {
        count: sols.len(),
        method: Method::NewtonNumeric,
        certified: false,
        solutions: sols,
        degeneracy_margin: Rational::from_integer(0.into()),
        boundary: 0,
        note: format!("{starts} starts, seed {seed}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::system::Support;

    fn sys(n: usize, pts: &[&[i64]], rows: &[&[i64]]) -> FewnomialSystem {
        FewnomialSystem::new(Support::from_ints(n, pts), rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn finds_unit_point() {
        let s = sys(2, &[&[0, 0], &[1, 0], &[0, 1]], &[&[-2, 1, 1], &[0, 1, -1]]);
        let r = newton_census(&s, 200, 0);
        assert_eq!(r.count, 1);
        assert!((r.solutions[0].point[0].to_f64() - 1.0).abs() < 1e-10);
        assert!(!r.certified);
    }

    #[test]
    fn no_positive_solutions() {
        let s = sys(2, &[&[0, 0], &[1, 0], &[0, 1]], &[&[2, 1, 1], &[1, 1, 3]]);
        assert_eq!(newton_census(&s, 200, 7).count, 0);
    }

    #[test]
    fn halton_in_unit_cube() {
        let s = [0.0, 0.0];
        assert_eq!(halton(0, 2, &s), vec![0.5, 1.0 / 3.0]);
    }
}
