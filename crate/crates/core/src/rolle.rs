//! The Khovanskii–Rolle tower ψ_j, Γ_j, F_j and the resulting per-instance bound.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::error::{FnxError, Result};
use crate::gale::GaleSystem;
use crate::linalg::{self, Mat};
use crate::polytope::{split_face_counts, FaceLattice, SplitCounts};
use crate::poly::SparsePoly;
use crate::rational::Rational;
use crate::real::Real;

/// ψ_j(y) = Σ_i a_{i,j} log p_i(y) with p_i(y) = b_{i,0} + Σ_l b_{i,l} y_l.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSystem {
    pub n: usize,
    pub k: usize,
    pub a: Mat,
    pub b: Mat,
}

impl LogSystem {
    pub fn new(a: Mat, b: Mat) -> Result<LogSystem> {
        let k = linalg::ncols(&a);
        if a.len() != b.len() || linalg::ncols(&b) != k + 1 || a.len() < k {
            return Err(FnxError::Form(format!("A is {}x{}, B is {}x{}", a.len(), k, b.len(), linalg::ncols(&b))));
        }
        Ok(LogSystem { n: a.len() - k, k, a, b })
    }

    pub fn from_gale(g: &GaleSystem) -> LogSystem {
        LogSystem::new(g.a.clone(), g.b.clone()).expect("Gale system shapes agree")
    }

    fn normals(&self) -> Mat {
        self.b.iter().map(|r| r[1..].to_vec()).collect()
    }

    fn form_values(&self, y: &[Real]) -> Result<Vec<Real>> {
        let prec = y.first().map_or(crate::real::DEFAULT_PRECISION, |v| v.prec());
        let vals: Vec<Real> = self
            .b
            .iter()
            .map(|r| {
                let mut s = Real::from_rational(&r[0], prec);
                for (c, yl) in r[1..].iter().zip(y) {
                    if !c.is_zero() {
                        s = s + Real::from_rational(c, prec) * yl;
                    }
                }
                s
            })
            .collect();
        if vals.iter().any(|v| v.signum() <= 0) {
            return Err(FnxError::Domain("point outside Δ".into()));
        }
        Ok(vals)
    }

    fn form_polys(&self) -> Vec<SparsePoly> {
        self.b.iter().map(|r| SparsePoly::linear(r)).collect()
    }
}

/// ψ values and the gradient ∂ψ_j/∂y_l = Σ_i a_{i,j} b_{i,l}/p_i.
pub fn psi_eval(l: &LogSystem, y: &[Real]) -> Result<(Vec<Real>, Vec<Vec<Real>>)> {
    let p = l.form_values(y)?;
    let prec = p[0].prec();
    let logs: Vec<Real> = p.iter().map(|v| v.ln()).collect();
    let inv: Vec<Real> = p.iter().map(|v| Real::one(prec) / v).collect();
    let mut vals = Vec::with_capacity(l.k);
    let mut grad = Vec::with_capacity(l.k);
    for j in 0..l.k {
        let mut s = Real::zero(prec);
        let mut g = vec![Real::zero(prec); l.k];
        for i in 0..l.a.len() {
            let a = &l.a[i][j];
            if a.is_zero() {
                continue;
            }
            let ar = Real::from_rational(a, prec);
            s = s + &ar * &logs[i];
            for (c, gl) in g.iter_mut().enumerate() {
                let bil = &l.b[i][c + 1];
                if !bil.is_zero() {
                    *gl = &*gl + &(&ar * &Real::from_rational(bil, prec) * &inv[i]);
                }
            }
        }
        vals.push(s);
        grad.push(g);
    }
    Ok((vals, grad))
}

/// Determinant by cofactor expansion; meant for k ≤ 4.
pub fn det_real(m: &[Vec<Real>]) -> Real {
    let n = m.len();
    if n == 0 {
        return Real::one(crate::real::DEFAULT_PRECISION);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut s = Real::zero(m[0][0].prec());
    for c in 0..n {
        let minor: Vec<Vec<Real>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect()).collect();
        let t = &m[0][c] * &det_real(&minor);
        s = if c % 2 == 0 { s + t } else { s - t };
    }
    s
}

/// Γ_k = Σ_I A_I B_I / p_I over k-subsets I of the forms.
pub fn gamma_k_closed_form(l: &LogSystem, y: &[Real]) -> Result<Real> {
    let p = l.form_values(y)?;
    let prec = p[0].prec();
    let nb = l.normals();
    let cols: Vec<usize> = (0..l.k).collect();
    let mut s = Real::zero(prec);
    for i in linalg::subsets(l.a.len(), l.k) {
        let c = linalg::det(&linalg::submatrix(&l.a, &i, &cols)) * linalg::det(&linalg::submatrix(&nb, &i, &cols));
        if c.is_zero() {
            continue;
        }
        let mut den = Real::one(prec);
        for &ii in &i {
            den = den * &p[ii];
        }
        s = s + Real::from_rational(&c, prec) / den;
    }
    Ok(s)
}

/// Both sides of det(Σ_i c_i d_{i,j} e_{i,l}) = Σ_I c_I D_I E_I.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyBinetReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

pub fn cauchy_binet_check(c: &[Rational], d: &Mat, e: &Mat) -> CauchyBinetReport {
    let m = c.len();
    let k = linalg::ncols(d);
    let lhs_m: Mat = (0..k)
        .map(|j| (0..k).map(|l| (0..m).fold(Rational::zero(), |s, i| s + &c[i] * &d[i][j] * &e[i][l])).collect())
        .collect();
    let lhs = linalg::det(&lhs_m);
    let cols: Vec<usize> = (0..k).collect();
    let mut rhs = Rational::zero();
    for i in linalg::subsets(m, k) {
        let ci = i.iter().fold(Rational::one(), |s, &x| s * &c[x]);
        rhs += ci * linalg::det(&linalg::submatrix(d, &i, &cols)) * linalg::det(&linalg::submatrix(e, &i, &cols));
    }
    let equal = lhs == rhs;
    CauchyBinetReport { lhs, rhs, equal }
}

/// F_j = Γ_j·(∏ p_i)^{2^{k−j}}, stored as f[j−1].
#[derive(Clone, Debug, PartialEq)]
pub struct GammaTower {
    pub n: usize,
    pub k: usize,
    pub f: Vec<SparsePoly>,
    pub denom_power: Vec<u64>,
    pub degrees: Vec<i64>,
    pub min_degrees: Vec<i64>,
    pub perturbed: bool,
}

impl GammaTower {
    /// deg F_j ≤ 2^{k−j} n.
    pub fn degrees_ok(&self) -> bool {
        (1..=self.k).all(|j| self.degrees[j - 1] <= (self.n as i64) << (self.k - j))
    }

    /// deg F_j = 2^{k−j} n exactly.
    pub fn degrees_generic(&self) -> bool {
        (1..=self.k).all(|j| self.degrees[j - 1] == (self.n as i64) << (self.k - j))
    }

    /// Every monomial of F_j has degree in [(n−1)2^{k−j}, n 2^{k−j}].
    pub fn sparsity_ok(&self) -> bool {
        (1..=self.k).all(|j| {
            let s = self.k - j;
            self.min_degrees[j - 1] >= ((self.n as i64 - 1) << s) && self.degrees[j - 1] <= (self.n as i64) << s
        })
    }

    /// Γ_j(y) recovered from F_j.
    pub fn gamma(&self, j: usize, y: &[Real], forms: &[SparsePoly]) -> Real {
        let mut p = Real::one(y[0].prec());
        for f in forms {
            p = p * f.eval_real(y);
        }
        self.f[j - 1].eval_real(y) / p.powi(self.denom_power[j - 1] as i64)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k, "perturbed": self.perturbed,
            "F": (1..=self.k).map(|j| json!({
                "j": j,
                "degree": self.degrees[j - 1],
                "min_degree": self.min_degrees[j - 1],
                "denominator_power": self.denom_power[j - 1],
                "terms": self.f[j - 1].len(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn product(ps: &[SparsePoly], skip: &[usize], vars: usize) -> SparsePoly {
    let mut out = SparsePoly::one(vars);
    for (i, p) in ps.iter().enumerate() {
        if !skip.contains(&i) {
            out = &out * p;
        }
    }
    out
}

fn det_poly(m: &[Vec<SparsePoly>], vars: usize) -> SparsePoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut s = SparsePoly::zero(vars);
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SparsePoly>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect()).collect();
        let t = &m[0][c] * &det_poly(&minor, vars);
        s = if c % 2 == 0 { &s + &t } else { &s - &t };
    }
    s
}

/// Exact F_k, …, F_1 by the Jacobian recursion on (numerator, power of ∏ p_i) pairs.
pub fn gamma_tower(l: &LogSystem) -> Result<GammaTower> {
    let (n, k) = (l.n, l.k);
    if k > 3 || n > 4 {
        return Err(FnxError::Size(format!("symbolic tower limited to k <= 3, n <= 4 (got n={n}, k={k})")));
    }
    let forms = l.form_polys();
    let m = forms.len();
    let big_p = product(&forms, &[], k);
    let dp: Vec<SparsePoly> = (0..k).map(|v| big_p.derivative(v)).collect();
    let nb = l.normals();
    let cols: Vec<usize> = (0..k).collect();
    // F_k = Σ_I A_I B_I ∏_{i∉I} p_i
    let mut fk = SparsePoly::zero(k);
    for i in linalg::subsets(m, k) {
        let c = linalg::det(&linalg::submatrix(&l.a, &i, &cols)) * linalg::det(&linalg::submatrix(&nb, &i, &cols));
        if !c.is_zero() {
            fk = &fk + &product(&forms, &i, k).scale(&c);
        }
    }
    if fk.is_zero() {
        return Err(FnxError::Singular(format!("F_{k} vanishes identically")));
    }
    // ψ rows with denominator ∏ p_i
    let psi_rows: Vec<Vec<SparsePoly>> = (0..k)
        .map(|j| {
            (0..k)
                .map(|c| {
                    let mut s = SparsePoly::zero(k);
                    for i in 0..m {
                        let w = &l.a[i][j] * &nb[i][c];
                        if !w.is_zero() {
                            s = &s + &product(&forms, &[i], k).scale(&w);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut f: Vec<Option<SparsePoly>> = vec![None; k];
    f[k - 1] = Some(fk);
    for j in (1..k).rev() {
        let mut rows: Vec<Vec<SparsePoly>> = psi_rows[..j].to_vec();
        for i in j + 1..=k {
            let fi = f[i - 1].as_ref().unwrap();
            let mi = Rational::from_integer((1u64 << (k - i)).into());
            rows.push((0..k).map(|c| &(&big_p * &fi.derivative(c)) - &(fi * &dp[c]).scale(&mi)).collect());
        }
        let mut num = det_poly(&rows, k);
        // the determinant carries (∏ p_i)^{k+2^{k−j}−1}; F_j keeps 2^{k−j} of it
        for _ in 0..k - 1 {
            for p in &forms {
                num = num.div_exact(p).ok_or_else(|| FnxError::Violation(format!("F_{j} numerator not divisible by p_i")))?;
            }
        }
        if num.is_zero() {
            return Err(FnxError::Singular(format!("F_{j} vanishes identically")));
        }
        f[j - 1] = Some(num);
    }
    let f: Vec<SparsePoly> = f.into_iter().map(|x| x.unwrap()).collect();
    Ok(GammaTower {
        n,
        k,
        denom_power: (1..=k).map(|j| 1u64 << (k - j)).collect(),
        degrees: f.iter().map(|p| p.total_degree().unwrap_or(0)).collect(),
        min_degrees: f.iter().map(|p| p.min_total_degree().unwrap_or(0)).collect(),
        f,
        perturbed: false,
    })
}

/// `gamma_tower`, retrying with A perturbed by seeded rationals of size 1e−7 when some F_j vanishes.
pub fn gamma_tower_generic(l: &LogSystem, seed: u64) -> Result<GammaTower> {
    match gamma_tower(l) {
        Err(FnxError::Singular(_)) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..3 {
                let mut p = l.clone();
                for r in p.a.iter_mut() {
                    for x in r.iter_mut() {
                        let d: i64 = rng.gen_range(-100..=100);
                        *x = &*x + Rational::new(d.into(), 1_000_000_000i64.into());
                    }
                }
                if let Ok(mut t) = gamma_tower(&p) {
                    t.perturbed = true;
                    return Ok(t);
                }
            }
            gamma_tower(l)
        }
        other => other,
    }
}

/// Per-instance Khovanskii–Rolle bound assembled from actual face counts.
#[derive(Clone, Debug, PartialEq)]
pub struct KrCertificate {
    pub n: usize,
    pub k: usize,
    pub cone: bool,
    pub phi: Vec<usize>,
    pub split: Option<SplitCounts>,
    /// (j, bound on flat(C_j)) for j = k, …, 1.
    pub flats: Vec<(usize, u64)>,
    /// Bound on |V(Γ_1, …, Γ_k)|.
    pub bezout: u64,
    pub total: u64,
    /// ⌊total/2⌋ when bounding compact components.
    pub kappa: Option<u64>,
}

impl KrCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k, "cone": self.cone,
            "phi": self.phi,
            "linear": self.split.as_ref().map(|s| s.linear.clone()),
            "nonlinear": self.split.as_ref().map(|s| s.nonlinear.clone()),
            "flat": self.flats.iter().map(|(j, b)| json!({"j": j, "bound": b})).collect::<Vec<_>>(),
            "bezout": self.bezout,
            "total": self.total,
            "kappa": self.kappa,
        })
    }
}

fn c2(x: usize) -> u32 {
    (x * x.saturating_sub(1) / 2) as u32
}

/// Sums the flat(C_j) bounds and the bound on |V(Γ)|, using the face counts of `faces`.
pub fn kr_chain_bound(_l: &LogSystem, faces: &FaceLattice, n: usize, k: usize, cone: bool) -> Result<KrCertificate> {
    if faces.k != k {
        return Err(FnxError::Dimension(faces.k));
    }
    let nn = n as u64;
    let phi = faces.phi.clone();
    let mut flats = Vec::new();
    let (split, bezout) = if cone {
        let s = split_face_counts(faces, 0);
        flats.push((k, (1 + s.nonlinear[0] as u64) / 2));
        for j in (1..k).rev() {
            let d = (k - j) as u32;
            let w = 1u64 << c2(k - j);
            let twice = w * nn.pow(d) * s.nonlinear[k - j] as u64 + w * (nn.pow(d) - (nn - 1).pow(d)) * s.linear[k - j] as u64;
            flats.push((j, twice / 2));
        }
        (Some(s), (1u64 << c2(k)) * (nn.pow(k as u32) - (nn - 1).pow(k as u32)))
    } else {
        flats.push((k, phi[0] as u64 / 2));
        for j in (1..k).rev() {
            let d = k - j;
            // a 1-dimensional PL manifold is a union of polygons, so M_1 ≤ Φ_0
            let m = if d == 1 { phi[1].min(phi[0]) } else { phi[d] } as u64;
            flats.push((j, (1u64 << c2(d)) * nn.pow(d as u32) * m / 2));
        }
        (None, (1u64 << c2(k)) * nn.pow(k as u32))
    };
    let total = flats.iter().map(|x| x.1).sum::<u64>() + bezout;
    Ok(KrCertificate { n, k, cone, phi, split, flats, bezout, total, kappa: cone.then_some(total / 2) })
}

/// Rational point where every p_i equals one, if the forms allow it.
pub fn unit_point(l: &LogSystem) -> Option<Vec<Rational>> {
    let nb = l.normals();
    let rhs: Vec<Rational> = l.b.iter().map(|r| Rational::one() - &r[0]).collect();
    let rows: Vec<usize> = linalg::independent_rows(&nb, 0..nb.len(), l.k);
    if rows.len() < l.k {
        return None;
    }
    let a: Mat = rows.iter().map(|&i| nb[i].clone()).collect();
    let b: Vec<Rational> = rows.iter().map(|&i| rhs[i].clone()).collect();
    let y = linalg::solve(&a, &b)?;
    let ok = nb.iter().zip(&rhs).all(|(r, v)| &linalg::dot(r, &y) == v);
    ok.then_some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{enumerate_faces, HPolyhedron};
    use crate::rational::{int, rat};
    use proptest::prelude::*;
    use rand::Rng;

    fn mat(rows: &[&[(i64, i64)]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect()).collect()
    }

    fn imat(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn reals(v: &[f64], prec: usize) -> Vec<Real> {
        v.iter().map(|&x| Real::from_f64(x, prec)).collect()
    }

    fn generic_22() -> LogSystem {
        let b = mat(&[
            &[(0, 1), (1, 1), (0, 1)],
            &[(0, 1), (0, 1), (1, 1)],
            &[(1, 1), (-1, 1), (0, 1)],
            &[(1, 1), (0, 1), (-1, 1)],
        ]);
        let a = mat(&[&[(3, 1), (-1, 2)], &[(-2, 3), (5, 1)], &[(1, 1), (7, 3)], &[(-4, 1), (2, 5)]]);
        LogSystem::new(a, b).unwrap()
    }

    #[test]
    fn psi_zero_where_forms_are_one() {
        // n = k = 1: p_1 = 3 − 2y, p_2 = y; ψ = 2 log p_1 − log p_2
        let l = LogSystem::new(mat(&[&[(2, 1)], &[(-1, 1)]]), imat(&[&[3, -2], &[0, 1]])).unwrap();
        let (v, g) = psi_eval(&l, &reals(&[1.0], 128)).unwrap();
        assert!(v[0].is_zero());
        // ψ'(1) = 2·(−2)/1 − 1/1
        assert!((g[0][0].to_f64() + 5.0).abs() < 1e-30);
        assert!(matches!(psi_eval(&l, &reals(&[2.0], 128)), Err(FnxError::Domain(_))));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let l = generic_22();
        let prec = 256;
        let y = vec![Real::from_rational(&rat(1, 3), prec), Real::from_rational(&rat(2, 5), prec)];
        let (_, g) = psi_eval(&l, &y).unwrap();
        let h = Real::from_rational(&Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 20)), prec);
        for c in 0..2 {
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[c] = &yp[c] + &h;
            ym[c] = &ym[c] - &h;
            let (vp, _) = psi_eval(&l, &yp).unwrap();
            let (vm, _) = psi_eval(&l, &ym).unwrap();
            for j in 0..2 {
                let fd = (&vp[j] - &vm[j]) / (&h + &h);
                let rel = ((&fd - &g[j][c]) / &g[j][c]).abs().to_f64();
                assert!(rel < 1e-12, "{rel}");
            }
        }
    }

    #[test]
    fn closed_form_is_jacobian() {
        let l = generic_22();
        for (y1, y2) in [(0.3, 0.6), (0.5, 0.5), (0.9, 0.1), (0.11, 0.77)] {
            let y = reals(&[y1, y2], 128);
            let (_, g) = psi_eval(&l, &y).unwrap();
            let d = det_real(&g);
            let c = gamma_k_closed_form(&l, &y).unwrap();
            assert!(((&c - &d) / &d).abs().to_f64() < 1e-9);
        }
        // k = 1: Σ a_i b_i / p_i
        let l1 = LogSystem::new(mat(&[&[(2, 1)], &[(-1, 1)]]), imat(&[&[3, -2], &[0, 1]])).unwrap();
        let c = gamma_k_closed_form(&l1, &reals(&[1.0], 128)).unwrap();
        assert!((c.to_f64() + 5.0).abs() < 1e-20);
    }

    #[test]
    fn zero_minor_contributes_nothing() {
        // rows 0 and 1 of A are parallel, so that pair has A_I = 0
        let mut l = generic_22();
        l.a[1] = vec![int(6), int(-1)];
        let y = reals(&[0.4, 0.3], 128);
        let (_, g) = psi_eval(&l, &y).unwrap();
        let c = gamma_k_closed_form(&l, &y).unwrap();
        assert!(((&c - &det_real(&g)) / &c).abs().to_f64() < 1e-9);
    }

    #[test]
    fn cauchy_binet_small() {
        let r = cauchy_binet_check(&[int(2), int(3)], &imat(&[&[1, 0], &[0, 1]]), &imat(&[&[1, 0], &[0, 1]]));
        assert_eq!(r.lhs, int(6));
        assert!(r.equal);
        let r = cauchy_binet_check(&[int(2), int(3), int(5)], &imat(&[&[1], &[2], &[3]]), &imat(&[&[4], &[5], &[6]]));
        assert_eq!(r.lhs, int(2 * 4 + 3 * 10 + 5 * 18));
        assert!(r.equal);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn cauchy_binet_random(m in 1usize..=6, k in 1usize..=4, seed in any::<u64>()) {
            prop_assume!(m >= k);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut r = || rat(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            let c: Vec<Rational> = (0..m).map(|_| r()).collect();
            let d: Mat = (0..m).map(|_| (0..k).map(|_| r()).collect()).collect();
            let e: Mat = (0..m).map(|_| (0..k).map(|_| r()).collect()).collect();
            // oracle: Leibniz expansion of the k×k matrix
            let mm: Mat = (0..k).map(|j| (0..k).map(|l| (0..m).fold(Rational::zero(), |s, i| s + &c[i] * &d[i][j] * &e[i][l])).collect()).collect();
            let rep = cauchy_binet_check(&c, &d, &e);
            prop_assert!(rep.equal);
            prop_assert_eq!(rep.lhs, leibniz(&mm));
        }
    }

    fn leibniz(m: &Mat) -> Rational {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let t = (0..n).fold(Rational::one(), |s, i| s * &m[i][p[i]]);
                if inv % 2 == 0 { t } else { -t }
            })
            .sum()
    }

    #[test]
    fn tower_k1() {
        let l = LogSystem::new(mat(&[&[(2, 1)], &[(-1, 1)]]), imat(&[&[3, -2], &[0, 1]])).unwrap();
        let t = gamma_tower(&l).unwrap();
        // (3−2y)·y·(−4/(3−2y) − 1/y) = −4y − 3 + 2y
        assert_eq!(t.f[0], SparsePoly::linear(&[int(-3), int(-2)]));
        assert!(t.degrees_ok());
    }

    #[test]
    fn tower_22_degrees_and_values() {
        let l = generic_22();
        let t = gamma_tower(&l).unwrap();
        assert_eq!(t.degrees, vec![4, 2]);
        assert!(t.degrees_generic());
        // Γ_1 = J(ψ_1, Γ_2) numerically, via central differences of Γ_2
        let forms = l.form_polys();
        let prec = 256;
        let y = vec![Real::from_rational(&rat(1, 3), prec), Real::from_rational(&rat(3, 7), prec)];
        let (_, g) = psi_eval(&l, &y).unwrap();
        let h = Real::from_rational(&Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 25)), prec);
        let dg: Vec<Real> = (0..2)
            .map(|c| {
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[c] = &yp[c] + &h;
                ym[c] = &ym[c] - &h;
                (t.gamma(2, &yp, &forms) - t.gamma(2, &ym, &forms)) / (&h + &h)
            })
            .collect();
        let j = &g[0][0] * &dg[1] - &g[0][1] * &dg[0];
        let g1 = t.gamma(1, &y, &forms);
        assert!(((&g1 - &j) / &j).abs().to_f64() < 1e-12);
        let g2 = t.gamma(2, &y, &forms);
        assert!(((&g2 - &det_real(&g)) / &g2).abs().to_f64() < 1e-20);
    }

    #[test]
    fn tower_k3_degrees() {
        let b = imat(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, -1, 0, 0], &[2, -1, -1, -1]]);
        let a = mat(&[
            &[(3, 1), (-1, 2), (1, 3)],
            &[(-2, 3), (5, 1), (-1, 1)],
            &[(1, 1), (7, 3), (2, 1)],
            &[(-4, 1), (2, 5), (-3, 2)],
            &[(1, 2), (-1, 1), (5, 4)],
        ]);
        let l = LogSystem::new(a, b).unwrap();
        let t = gamma_tower(&l).unwrap();
        assert_eq!(t.degrees, vec![8, 4, 2]);
    }

    #[test]
    fn cone_sparsity() {
        // p_1 = 1 − y1 − y2, p_2 = 2y1 − y2, p_3 = y1, p_4 = y2
        let b = imat(&[&[1, -1, -1], &[0, 2, -1], &[0, 1, 0], &[0, 0, 1]]);
        let a = mat(&[&[(3, 1), (-1, 2)], &[(-2, 3), (5, 1)], &[(1, 1), (7, 3)], &[(-4, 1), (2, 5)]]);
        let l = LogSystem::new(a, b).unwrap();
        let t = gamma_tower(&l).unwrap();
        assert_eq!((t.min_degrees[1], t.degrees[1]), (1, 2));
        assert!(t.sparsity_ok());
    }

    #[test]
    fn guard_and_singular() {
        let l = LogSystem::new(vec![vec![int(1)]; 6], vec![vec![int(0), int(1)]; 6]).unwrap();
        assert!(matches!(gamma_tower(&l), Err(FnxError::Size(_))));
        // A with rank < k kills every A_I
        let mut l = generic_22();
        for r in l.a.iter_mut() {
            r[1] = r[0].clone();
        }
        assert!(matches!(gamma_tower(&l), Err(FnxError::Singular(_))));
        let t = gamma_tower_generic(&l, 7).unwrap();
        assert!(t.perturbed);
    }

    #[test]
    fn chain_bound_pentagon() {
        let b = imat(&[&[0, 1, 0], &[0, 0, 1], &[4, -1, 0], &[4, 0, -1], &[6, -1, -1]]);
        let l = LogSystem::new(vec![vec![int(1), int(0)]; 5], b.clone()).unwrap();
        let faces = enumerate_faces(&HPolyhedron::new(b, vec![false; 5])).unwrap();
        let c = kr_chain_bound(&l, &faces, 2, 2, false).unwrap();
        assert_eq!(c.flats, vec![(2, 2), (1, 5)]);
        assert_eq!(c.bezout, 8);
        assert_eq!(c.total, 15);
        // a square has fewer facets, so a smaller bound
        let sq = enumerate_faces(&HPolyhedron::new(imat(&[&[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1]]), vec![false; 4])).unwrap();
        assert!(kr_chain_bound(&l, &sq, 2, 2, false).unwrap().total < 15);
    }

    #[test]
    fn chain_bound_k3() {
        // a simple polytope with Φ = (8, 12, 6): the cube, so flat(C_1) uses Φ_2 = 6 = n+4
        let b = imat(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, -1, 0, 0], &[1, 0, -1, 0], &[1, 0, 0, -1]]);
        let faces = enumerate_faces(&HPolyhedron::new(b.clone(), vec![false; 6])).unwrap();
        let l = LogSystem::new(vec![vec![int(1), int(0), int(0)]; 6], b).unwrap();
        let c = kr_chain_bound(&l, &faces, 2, 3, false).unwrap();
        assert_eq!(c.total, 4 + 8 + 24 + 64);
        assert!(c.total <= crate::bounds::bound_k3(2).unwrap());
    }

    #[test]
    fn unit_point_found() {
        let l = LogSystem::new(mat(&[&[(2, 1)], &[(-1, 1)]]), imat(&[&[3, -2], &[0, 1]])).unwrap();
        assert_eq!(unit_point(&l), Some(vec![int(1)]));
    }
}
