//! Hypersurfaces with n+k+1 monomials: critical points, component Gale systems and κ.

use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{components_k1, kappa_bounds, BoundValue};
use crate::count::{count_gale_in_delta, count_system_exact, newton_census, CountReport};
use crate::error::{FnxError, Result};
use crate::gale::GaleSystem;
use crate::linalg::{self, Mat};
use crate::polytope::{enumerate_faces_generic, HPolyhedron};
use crate::rational::{fmt_rational, from_q_matrix, to_f64, to_q_matrix, Q, Rational};
use crate::rolle::{kr_chain_bound, KrCertificate, LogSystem};
use crate::system::{FewnomialSystem, Support};

/// f = Σ e_i z_i + Σ c_j z^{a_j} + e_0 with e_i = ±1, after z_i ↦ scale_i·z_i.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceInput {
    pub n: usize,
    pub e: Vec<i64>,
    pub e0: Rational,
    pub a: Vec<Vec<Rational>>,
    pub c: Vec<Rational>,
    /// Original coordinate = scale · normalized coordinate.
    pub scale: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct HyperJson {
    n: usize,
    support: Vec<Vec<Q>>,
    coeffs: Vec<Q>,
}

impl HypersurfaceInput {
    /// Brings f to normal form by positive rescaling of the variables.
    pub fn from_terms(n: usize, terms: &[(Vec<Rational>, Rational)]) -> Result<HypersurfaceInput> {
        let mut e0 = None;
        let mut lin: Vec<Option<Rational>> = vec![None; n];
        let mut rest = Vec::new();
        for (i, (p, c)) in terms.iter().enumerate() {
            if p.len() != n {
                return Err(FnxError::Form(format!("term {i} has {} exponents, expected {n}", p.len())));
            }
            if c.is_zero() {
                continue;
            }
            if terms[..i].iter().any(|(q, _)| q == p) {
                return Err(FnxError::Form(format!("repeated monomial {i}")));
            }
            if p.iter().all(|x| x.is_zero()) {
                e0 = Some(c.clone());
            } else if let Some(v) = unit_index(p) {
                lin[v] = Some(c.clone());
            } else {
                rest.push((p.clone(), c.clone()));
            }
        }
        let e0 = e0.ok_or_else(|| FnxError::Form("no constant term".into()))?;
        let mut scale = Vec::with_capacity(n);
        let mut e = Vec::with_capacity(n);
        for (v, l) in lin.iter().enumerate() {
            let l = l.as_ref().ok_or_else(|| FnxError::Form(format!("no z_{} term", v + 1)))?;
            scale.push(Rational::one() / l.abs());
            e.push(if l.is_positive() { 1 } else { -1 });
        }
        let mut a = Vec::new();
        let mut c = Vec::new();
        for (p, coef) in rest {
            let mut m = coef;
            for (x, s) in p.iter().zip(&scale) {
                if s.is_one() {
                    continue;
                }
                if !x.is_integer() {
                    return Err(FnxError::Form("rescaling a variable with a fractional exponent leaves the rationals".into()));
                }
                let ex = x.to_integer().to_i32().ok_or_else(|| FnxError::Form("exponent too large".into()))?;
                m *= num_traits::pow::Pow::pow(s, ex);
            }
            a.push(p);
            c.push(m);
        }
        Ok(HypersurfaceInput { n, e, e0, a, c, scale })
    }

    pub fn from_json(s: &str) -> Result<HypersurfaceInput> {
        let j: HyperJson = serde_json::from_str(s).map_err(|e| FnxError::Parse(e.to_string()))?;
        if j.support.len() != j.coeffs.len() {
            return Err(FnxError::Parse("support and coeffs differ in length".into()));
        }
        let pts = from_q_matrix(j.support);
        let terms: Vec<_> = pts.into_iter().zip(j.coeffs.into_iter().map(|q| q.0)).collect();
        HypersurfaceInput::from_terms(j.n, &terms)
    }

    pub fn to_json(&self) -> String {
        let s = self.support();
        let j = HyperJson { n: self.n, support: to_q_matrix(&s.points), coeffs: self.coeff_row().into_iter().map(Q).collect() };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// {0, a_1, …, a_k, e_1, …, e_n}.
    pub fn support(&self) -> Support {
        let n = self.n;
        let mut pts = vec![vec![Rational::zero(); n]];
        pts.extend(self.a.iter().cloned());
        for i in 0..n {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            pts.push(v);
        }
        Support { n, points: pts }
    }

    fn coeff_row(&self) -> Vec<Rational> {
        let mut r = vec![self.e0.clone()];
        r.extend(self.c.iter().cloned());
        r.extend(self.e.iter().map(|&x| Rational::from_integer(x.into())));
        r
    }

    /// f at a point given in log10 coordinates.
    pub fn eval_log10(&self, u: &[f64]) -> f64 {
        let mut s = to_f64(&self.e0);
        for (i, &ui) in u.iter().enumerate() {
            s += self.e[i] as f64 * 10f64.powf(ui);
        }
        for (p, c) in self.a.iter().zip(&self.c) {
            let ex: f64 = p.iter().zip(u).map(|(x, ui)| to_f64(x) * ui).sum();
            s += to_f64(c) * 10f64.powf(ex);
        }
        s
    }

    /// Σ |term| at a log10 point, a scale for judging |f|.
    fn magnitude_log10(&self, u: &[f64]) -> f64 {
        let mut s = to_f64(&self.e0).abs();
        s += u.iter().map(|&ui| 10f64.powf(ui)).sum::<f64>();
        for (p, c) in self.a.iter().zip(&self.c) {
            let ex: f64 = p.iter().zip(u).map(|(x, ui)| to_f64(x) * ui).sum();
            s += to_f64(c).abs() * 10f64.powf(ex);
        }
        s
    }
}

fn unit_index(p: &[Rational]) -> Option<usize> {
    let nz: Vec<usize> = (0..p.len()).filter(|&i| !p[i].is_zero()).collect();
    (nz.len() == 1 && p[nz[0]].is_one()).then(|| nz[0])
}

/// f = z_2 ∂f/∂z_2 = … = z_n ∂f/∂z_n = 0 on the support of f.
pub fn critical_system(h: &HypersurfaceInput) -> Result<FewnomialSystem> {
    if h.k() == 0 {
        return Err(FnxError::Form("f needs at least one monomial besides 1, z_1, …, z_n".into()));
    }
    let (n, k) = (h.n, h.k());
    let mut rows = vec![h.coeff_row()];
    for m in 1..n {
        let mut r = vec![Rational::zero(); 1 + k + n];
        for j in 0..k {
            r[1 + j] = &h.c[j] * &h.a[j][m];
        }
        r[1 + k + m] = Rational::from_integer(h.e[m].into());
        rows.push(r);
    }
    FewnomialSystem::new(h.support(), rows)
}

/// Gale system ∏_i p_i(y)^{(a_j)_i} · y_j^{−1} = 1 with z_i = p_i(y), y_j = z^{a_j}.
pub fn component_gale_system(h: &HypersurfaceInput) -> Result<GaleSystem> {
    let sys = critical_system(h)?;
    let (n, k) = (h.n, h.k());
    // rows of the critical system: M z + C y + d = 0
    let m: Mat = sys.coeffs.iter().map(|r| r[1 + k..].to_vec()).collect();
    let minv = linalg::inverse(&m).ok_or_else(|| FnxError::Singular("coordinate block".into()))?;
    let rhs: Mat = sys.coeffs.iter().map(|r| r[..1 + k].to_vec()).collect();
    let sol = linalg::mul(&minv, &rhs);
    let mut b: Mat = sol.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect();
    let mut a: Mat = (0..n).map(|i| (0..k).map(|j| h.a[j][i].clone()).collect()).collect();
    for j in 0..k {
        let mut row = vec![Rational::zero(); k + 1];
        row[j + 1] = Rational::one();
        b.push(row);
        let mut ar = vec![Rational::zero(); k];
        ar[j] = -Rational::one();
        a.push(ar);
    }
    Ok(GaleSystem::new(a, b))
}

/// Result of the grid component count.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentReport {
    pub kappa_estimate: usize,
    pub critical_count: usize,
    pub critical_exact: bool,
    pub bounds: Vec<BoundValue>,
    pub resolution: usize,
    pub box_exponent: f64,
    /// Grid counts are never certified.
    pub certified: bool,
}

impl ComponentReport {
    pub fn to_json(&self) -> Value {
        json!({
            "kappa_estimate": self.kappa_estimate,
            "critical_count": self.critical_count,
            "critical_exact": self.critical_exact,
            "resolution": self.resolution,
            "box_exponent": self.box_exponent,
            "certified": self.certified,
            "bounds": self.bounds.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Number of zero-set components whose cells avoid the box boundary.
pub fn grid_compact_components(h: &HypersurfaceInput, res: usize, box_exponent: f64) -> usize {
    let step = 2.0 * box_exponent / res as f64;
    let coord = |i: usize| -box_exponent + i as f64 * step;
    // positive[i][j] at (u_i, v_j)
    let positive: Vec<Vec<bool>> =
        (0..=res).into_par_iter().map(|i| (0..=res).map(|j| h.eval_log10(&[coord(i), coord(j)]) >= 0.0).collect()).collect();
    let cell = |i: usize, j: usize| i * res + j;
    let crosses = |i: usize, j: usize| {
        let s = positive[i][j];
        positive[i + 1][j] != s || positive[i][j + 1] != s || positive[i + 1][j + 1] != s
    };
    let mut uf = UnionFind::<usize>::new(res * res);
    for i in 0..res {
        for j in 0..res {
            if !crosses(i, j) {
                continue;
            }
            // the curve passes from cell (i,j) to (i+1,j) through the edge u = u_{i+1}
            if i + 1 < res && positive[i + 1][j] != positive[i + 1][j + 1] {
                uf.union(cell(i, j), cell(i + 1, j));
            }
            if j + 1 < res && positive[i][j + 1] != positive[i + 1][j + 1] {
                uf.union(cell(i, j), cell(i, j + 1));
            }
        }
    }
    let mut touches: std::collections::BTreeMap<usize, bool> = std::collections::BTreeMap::new();
    for i in 0..res {
        for j in 0..res {
            if crosses(i, j) {
                let edge = i == 0 || j == 0 || i + 1 == res || j + 1 == res;
                let e = touches.entry(uf.find(cell(i, j))).or_insert(false);
                *e |= edge;
            }
        }
    }
    touches.values().filter(|&&t| !t).count()
}

/// Critical points of z_1 on V(f): exact for n = 2 when possible, else Newton.
pub fn critical_count(h: &HypersurfaceInput, prec: usize) -> (usize, bool) {
    if h.k() == 0 {
        // z_n ∂f/∂z_n = e_n z_n never vanishes
        return (0, true);
    }
    let Ok(sys) = critical_system(h) else { return (0, false) };
    if h.n <= 2 {
        if let Ok(r) = count_system_exact(&sys, prec) {
            if r.certified {
                return (r.count, true);
            }
        }
    }
    let r: CountReport = newton_census(&sys, 4000, 0);
    (r.count, false)
}

/// Singular points of V(f): common zeros of f and z_i ∂f/∂z_i.
fn check_smooth(h: &HypersurfaceInput) -> Result<()> {
    if h.k() == 0 {
        return Ok(());
    }
    let n = h.n;
    let s = h.support();
    let rows: Mat = (0..n)
        .map(|m| s.points.iter().zip(h.coeff_row()).map(|(p, c)| c * &p[m]).collect())
        .collect();
    let grad = FewnomialSystem::new(s, rows)?;
    let r = newton_census(&grad, 2000, 1);
    for sol in r.points_f64() {
        let u: Vec<f64> = sol.iter().map(|z| z.log10()).collect();
        if h.eval_log10(&u).abs() <= 1e-9 * h.magnitude_log10(&u) {
            return Err(FnxError::Smoothness(format!("V(f) is singular near {sol:?}")));
        }
    }
    Ok(())
}

/// Applicable κ caps for (n, k).
pub fn kappa_caps(n: usize, k: usize) -> Vec<BoundValue> {
    if k == 1 {
        let one = Rational::from_integer(components_k1().into());
        return vec![BoundValue {
            formula_id: crate::bounds::FormulaId::ComponentsK1,
            lower: one.clone(),
            upper: one,
            strict: false,
            integer_cap: 1.into(),
            assumptions: "k=1".into(),
        }];
    }
    kappa_bounds(n as u64, k as u64).unwrap_or_default()
}

/// Grid estimate of κ for n = 2, with three agreeing refinements.
pub fn count_compact_components_2d(h: &HypersurfaceInput, resolution: usize, box_exponent: f64) -> Result<ComponentReport> {
    if h.n != 2 {
        return Err(FnxError::Range(format!("component counting needs n = 2 (got {})", h.n)));
    }
    check_smooth(h)?;
    let mut res = resolution.max(8);
    let mut kappa = None;
    for _ in 0..3 {
        let c: Vec<usize> = [res, 2 * res, 4 * res].iter().map(|&r| grid_compact_components(h, r, box_exponent)).collect();
        if c[0] == c[1] && c[1] == c[2] {
            kappa = Some(c[0]);
            break;
        }
        res *= 2;
    }
    let kappa = kappa.ok_or_else(|| FnxError::Resolution(format!("grid counts disagree up to resolution {}", 4 * res)))?;
    let (crit, exact) = critical_count(h, crate::real::DEFAULT_PRECISION);
    let bounds = kappa_caps(h.n, h.k());
    if exact && kappa > crit / 2 {
        return Err(FnxError::Violation(format!("grid finds {kappa} compact components but only {crit} critical points")));
    }
    if let Some(b) = bounds.iter().find(|b| !b.admits(kappa as u64)) {
        return Err(FnxError::Violation(format!("grid count {kappa} exceeds {}", b.formula_id)));
    }
    Ok(ComponentReport { kappa_estimate: kappa, critical_count: crit, critical_exact: exact, bounds, resolution: res, box_exponent, certified: false })
}

/// Certified κ bound of one instance from the face counts of its cone polyhedron.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaCertificate {
    pub n: usize,
    pub k: usize,
    pub chain: Option<KrCertificate>,
    pub faces_perturbed: bool,
    pub kappa_bound: u64,
    pub generic: Vec<BoundValue>,
}

impl KappaCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k,
            "kappa_bound": self.kappa_bound,
            "faces_perturbed": self.faces_perturbed,
            "chain": self.chain.as_ref().map(|c| c.to_json()),
            "generic": self.generic.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
        })
    }
}

pub fn kappa_certificate(h: &HypersurfaceInput, seed: u64) -> Result<KappaCertificate> {
    let (n, k) = (h.n, h.k());
    if k == 1 {
        return Ok(KappaCertificate { n, k, chain: None, faces_perturbed: false, kappa_bound: 1, generic: kappa_caps(n, k) });
    }
    if k == 0 || k > 3 {
        return Err(FnxError::Dimension(k));
    }
    let g = component_gale_system(h)?;
    let poly = HPolyhedron::new(g.b.clone(), g.linear_mask.clone());
    if poly.is_empty() {
        return Ok(KappaCertificate { n, k, chain: None, faces_perturbed: false, kappa_bound: 0, generic: kappa_caps(n, k) });
    }
    let (faces, perturbed) = enumerate_faces_generic(&poly, seed)?;
    let chain = kr_chain_bound(&LogSystem::from_gale(&g), &faces, n, k, true)?;
    let kappa_bound = chain.kappa.unwrap_or(chain.total / 2);
    Ok(KappaCertificate { n, k, chain: Some(chain), faces_perturbed: perturbed, kappa_bound, generic: kappa_caps(n, k) })
}

/// Gale count in Δ against the exact critical count.
pub fn gale_critical_agreement(h: &HypersurfaceInput, prec: usize) -> Result<(usize, usize)> {
    let g = component_gale_system(h)?;
    let gc = count_gale_in_delta(&g, prec)?;
    let cc = count_system_exact(&critical_system(h)?, prec)?;
    Ok((gc.count, cc.count))
}

pub fn describe(h: &HypersurfaceInput) -> String {
    let mut parts = vec![fmt_rational(&h.e0)];
    for (p, c) in h.a.iter().zip(&h.c) {
        parts.push(format!("{}*z^({})", fmt_rational(c), p.iter().map(fmt_rational).collect::<Vec<_>>().join(",")));
    }
    for (i, e) in h.e.iter().enumerate() {
        parts.push(format!("{}z{}", if *e > 0 { "+" } else { "-" }, i + 1));
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    pub(crate) fn circle() -> HypersurfaceInput {
        let t = vec![
            (vec![int(1), int(0)], int(1)),
            (vec![int(0), int(1)], int(1)),
            (vec![int(2), int(0)], int(-1)),
            (vec![int(0), int(2)], int(-1)),
            (vec![int(0), int(0)], rat(-3, 8)),
        ];
        HypersurfaceInput::from_terms(2, &t).unwrap()
    }

    #[test]
    fn normal_form_scaling() {
        // 2z1 − 3z2 + z1² + 1 becomes z1 − z2 + (1/4) z1² + 1
        let t = vec![
            (vec![int(1), int(0)], int(2)),
            (vec![int(0), int(1)], int(-3)),
            (vec![int(2), int(0)], int(1)),
            (vec![int(0), int(0)], int(1)),
        ];
        let h = HypersurfaceInput::from_terms(2, &t).unwrap();
        assert_eq!(h.e, vec![1, -1]);
        assert_eq!(h.c, vec![rat(1, 4)]);
        assert_eq!(h.scale, vec![rat(1, 2), rat(1, 3)]);
        let bad = vec![(vec![int(1), int(0)], int(2)), (vec![int(0), int(1)], int(1)), (vec![rat(1, 2), int(1)], int(1)), (vec![int(0), int(0)], int(1))];
        assert!(matches!(HypersurfaceInput::from_terms(2, &bad), Err(FnxError::Form(_))));
        let no_const = vec![(vec![int(1), int(0)], int(1)), (vec![int(0), int(1)], int(1))];
        assert!(matches!(HypersurfaceInput::from_terms(2, &no_const), Err(FnxError::Form(_))));
        let h2 = HypersurfaceInput::from_json(&h.to_json()).unwrap();
        assert_eq!(h2.c, h.c);
    }

    #[test]
    fn critical_points_of_circle() {
        let h = circle();
        let s = critical_system(&h).unwrap();
        assert_eq!(s.support, h.support());
        let r = count_system_exact(&s, 128).unwrap();
        assert_eq!(r.count, 2);
        // (1 ± √½)/2, ½
        let mut xs: Vec<f64> = r.solutions.iter().map(|p| p.point[0].to_f64()).collect();
        xs.sort_by(f64::total_cmp);
        let h2 = 0.5f64.sqrt();
        assert!((xs[0] - (1.0 - h2) / 2.0).abs() < 1e-12 && (xs[1] - (1.0 + h2) / 2.0).abs() < 1e-12);
        for p in &r.solutions {
            assert!((p.point[1].to_f64() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_rejected() {
        let t = vec![(vec![int(1), int(0)], int(1)), (vec![int(0), int(1)], int(1)), (vec![int(0), int(0)], int(-1))];
        let h = HypersurfaceInput::from_terms(2, &t).unwrap();
        assert!(matches!(critical_system(&h), Err(FnxError::Form(_))));
        let r = count_compact_components_2d(&h, 64, 3.0).unwrap();
        assert_eq!(r.kappa_estimate, 0);
    }

    #[test]
    fn gale_of_circle() {
        let h = circle();
        let g = component_gale_system(&h).unwrap();
        assert_eq!(g.k(), 2);
        // only p_1 carries a constant
        assert_eq!(g.linear_mask, vec![false, true, true, true]);
        let (gc, cc) = gale_critical_agreement(&h, 128).unwrap();
        assert_eq!((gc, cc), (2, 2));
    }

    #[test]
    fn circle_has_one_component() {
        let r = count_compact_components_2d(&circle(), 64, 3.0).unwrap();
        assert_eq!(r.kappa_estimate, 1);
        assert_eq!(r.critical_count, 2);
        assert!(r.critical_exact);
        assert!(!r.certified);
    }

    #[test]
    fn positive_f_has_nothing() {
        let t = vec![
            (vec![int(1), int(0)], int(1)),
            (vec![int(0), int(1)], int(1)),
            (vec![int(2), int(1)], int(3)),
            (vec![int(1), int(3)], int(2)),
            (vec![int(0), int(0)], int(1)),
        ];
        let h = HypersurfaceInput::from_terms(2, &t).unwrap();
        let (gc, cc) = gale_critical_agreement(&h, 128).unwrap();
        assert_eq!((gc, cc), (0, 0));
        assert_eq!(count_compact_components_2d(&h, 32, 3.0).unwrap().kappa_estimate, 0);
    }

    #[test]
    fn certificate_circle() {
        let c = kappa_certificate(&circle(), 0).unwrap();
        let chain = c.chain.as_ref().unwrap();
        assert_eq!(chain.bezout, 6);
        assert!(c.kappa_bound <= 5);
        assert!(c.kappa_bound >= 1);
        let caps: Vec<u64> = c.generic.iter().map(|b| b.cap_u64()).collect();
        assert!(caps.contains(&10) && caps.contains(&5));
    }

    #[test]
    fn certificate_k1_and_k3_caps() {
        let t = vec![(vec![int(1), int(0)], int(1)), (vec![int(0), int(1)], int(1)), (vec![int(1), int(1)], int(-4)), (vec![int(0), int(0)], int(1))];
        let h = HypersurfaceInput::from_terms(2, &t).unwrap();
        assert_eq!(kappa_certificate(&h, 0).unwrap().kappa_bound, 1);
        let caps = kappa_caps(2, 3);
        assert!(caps.iter().any(|b| b.cap_u64() == 46));
    }

    #[test]
    fn slab_constants() {
        let slab = |n: u64, k: u32| (1u64 << (k * (k - 1) / 2)) * (n.pow(k) - (n - 1).pow(k));
        assert_eq!(slab(2, 2), 6);
        assert_eq!(slab(2, 3), 56);
        assert_eq!(slab(2, 2), 4 * 2 - 2);
    }
}
