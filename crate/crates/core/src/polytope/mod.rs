//! The polyhedron Δ = {p_i > 0}, its projective closure and face counts.

pub mod fourier;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::error::{FnxError, Result};
use crate::linalg::{self, Mat};
use crate::rational::{binomial, fmt_rational, Rational};
use fourier::{feasible_point, Ineq};

#[derive(Clone, Debug, PartialEq)]
pub struct HPolyhedron {
    pub k: usize,
    /// Rows [b_0, b_1, …, b_k]: p_i(y) = b_0 + Σ b_l y_l.
    pub forms: Mat,
    pub linear_mask: Vec<bool>,
}

/// One face of the closure, by its tight forms and a relative-interior witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub dim: usize,
    pub tight: Vec<usize>,
    pub witness: Vec<Rational>,
    pub at_infinity: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceLattice {
    pub k: usize,
    /// Forms used, including the clipping form when Δ is unbounded.
    pub forms: Mat,
    pub clip_index: Option<usize>,
    pub faces: Vec<Face>,
    /// phi[j] = number of j-dimensional faces, j = 0..k-1.
    pub phi: Vec<usize>,
    pub bounded: bool,
}

/// Per-dimension counts of linear and non-linear faces of a cone polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCounts {
    pub linear: Vec<usize>,
    pub nonlinear: Vec<usize>,
}

impl HPolyhedron {
    pub fn new(forms: Mat, linear_mask: Vec<bool>) -> HPolyhedron {
        let k = linalg::ncols(&forms).saturating_sub(1);
        HPolyhedron { k, forms, linear_mask }
    }

    fn ineqs(&self, strict: bool) -> Vec<Ineq> {
        self.forms.iter().map(|r| Ineq::new(r[1..].to_vec(), r[0].clone(), strict)).collect()
    }

    /// A rational point with every p_i > 0, if Δ is nonempty.
    pub fn interior_point(&self) -> Option<Vec<Rational>> {
        feasible_point(&self.ineqs(true), self.k)
    }

    pub fn is_empty(&self) -> bool {
        self.interior_point().is_none()
    }

    fn normals(&self) -> Mat {
        self.forms.iter().map(|r| r[1..].to_vec()).collect()
    }

    /// True when Δ̄ contains no ray.
    pub fn is_bounded(&self) -> bool {
        let base: Vec<Ineq> = self.normals().into_iter().map(|a| Ineq::new(a, Rational::zero(), false)).collect();
        for l in 0..self.k {
            for s in [1i64, -1] {
                let mut e = vec![Rational::zero(); self.k];
                e[l] = Rational::from_integer(s.into());
                let mut sys = base.clone();
                sys.push(Ineq::new(e, -Rational::one(), false));
                if feasible_point(&sys, self.k).is_some() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_pointed(&self) -> bool {
        linalg::rank(&self.normals()) == self.k
    }

    /// Vertices of the closure {p_i ≥ 0} (no clipping).
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let m = self.forms.len();
        let mut out: Vec<Vec<Rational>> = Vec::new();
        for s in linalg::subsets(m, self.k) {
            let a: Mat = s.iter().map(|&i| self.forms[i][1..].to_vec()).collect();
            let b: Vec<Rational> = s.iter().map(|&i| -self.forms[i][0].clone()).collect();
            let Some(x) = linalg::solve(&a, &b) else { continue };
            let ok = self.forms.iter().all(|r| !(linalg::dot(&r[1..], &x) + &r[0]).is_negative());
            if ok && !out.contains(&x) {
                out.push(x);
            }
        }
        out
    }

    /// max |coordinate| over vertices plus one; a box that contains every vertex.
    pub fn vertices_box(&self) -> Option<Rational> {
        let v = self.vertices();
        if v.is_empty() {
            return None;
        }
        Some(v.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(Rational::zero) + Rational::one())
    }

    /// The clipping form r − v·y with v = Σ normals and r = 1 + max over vertices of v·x.
    pub fn clip_form(&self) -> Result<Vec<Rational>> {
        if !self.is_pointed() {
            return Err(FnxError::Degeneracy("Δ contains a line; its closure has no vertices".into()));
        }
        let v: Vec<Rational> =
            (0..self.k).map(|l| self.forms.iter().fold(Rational::zero(), |s, r| s + &r[l + 1])).collect();
        let verts = self.vertices();
        let r = verts.iter().map(|x| linalg::dot(&v, x)).max().unwrap_or_else(Rational::zero) + Rational::one();
        let mut f = vec![r];
        f.extend(v.into_iter().map(|x| -x));
        Ok(f)
    }

    /// Deterministic perturbation: constants of the non-linear forms and every normal entry move
    /// by at most `rel` relative to the row size; constant-free forms stay constant-free.
    pub fn perturbed(&self, seed: u64, rel: f64) -> HPolyhedron {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let scale = (1.0 / rel).round() as i64;
        let mut forms = self.forms.clone();
        for (i, r) in forms.iter_mut().enumerate() {
            let size = r.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::one).max(Rational::one());
            let linear = self.linear_mask.get(i).copied().unwrap_or(false);
            for (c, x) in r.iter_mut().enumerate() {
                if c == 0 && linear {
                    continue;
                }
                let d: i64 = rng.gen_range(-1000..=1000);
                *x = &*x + &size * Rational::new(d.into(), (scale * 1000).into());
            }
        }
        HPolyhedron { forms, ..self.clone() }
    }
}

/// Nonemptiness-checked Δ from a (n+k) × (k+1) matrix B.
pub fn build_delta(b: &Mat) -> Result<HPolyhedron> {
    let mask = b.iter().map(|r| r[0].is_zero()).collect();
    let p = HPolyhedron::new(b.clone(), mask);
    if p.is_empty() {
        return Err(FnxError::Empty);
    }
    Ok(p)
}

fn positive_multiple(f: &[Rational], g: &[Rational]) -> bool {
    let Some(i) = f.iter().position(|x| !x.is_zero()) else { return false };
    if g[i].is_zero() {
        return false;
    }
    let t = &g[i] / &f[i];
    t.is_positive() && f.iter().zip(g).all(|(a, b)| a * &t == *b)
}

fn eval_form(f: &[Rational], y: &[Rational]) -> Rational {
    linalg::dot(&f[1..], y) + &f[0]
}

/// Faces of the closure of Δ (clipped by one hyperplane when unbounded), k ≤ 3.
pub fn enumerate_faces(p: &HPolyhedron) -> Result<FaceLattice> {
    let k = p.k;
    if k == 0 || k > 3 {
        return Err(FnxError::Dimension(k));
    }
    let interior = p.interior_point().ok_or(FnxError::Empty)?;
    let mut forms: Mat = Vec::new();
    let mut src: Vec<usize> = Vec::new();
    for (i, r) in p.forms.iter().enumerate() {
        // constant forms bound nothing, and a positive multiple of a kept form adds no facet
        if r[1..].iter().all(|x| x.is_zero()) || forms.iter().any(|f| positive_multiple(f, r)) {
            continue;
        }
        forms.push(r.clone());
        src.push(i);
    }
    let bounded = p.is_bounded();
    let clip_index = if bounded {
        None
    } else {
        forms.push(p.clip_form()?);
        src.push(p.forms.len());
        Some(p.forms.len())
    };
    let m = forms.len();
    let mut faces: Vec<Face> = Vec::new();
    for j in 1..=k {
        for s in linalg::subsets(m, j) {
            let a: Mat = s.iter().map(|&i| forms[i][1..].to_vec()).collect();
            if linalg::rank(&a) < j {
                continue;
            }
            // affine parametrization y = y0 + N t of {p_s = 0}
            let (rr, piv) = linalg::rref(&a.iter().zip(&s).map(|(row, &i)| {
                let mut r = row.clone();
                r.push(-forms[i][0].clone());
                r
            }).collect());
            let mut y0 = vec![Rational::zero(); k];
            for (row, &pc) in piv.iter().enumerate() {
                y0[pc] = rr[row][k].clone();
            }
            let free: Vec<usize> = (0..k).filter(|c| !piv.contains(c)).collect();
            let nbasis: Vec<Vec<Rational>> = free
                .iter()
                .map(|&f| {
                    let mut v = vec![Rational::zero(); k];
                    v[f] = Rational::one();
                    for (row, &pc) in piv.iter().enumerate() {
                        v[pc] = -rr[row][f].clone();
                    }
                    v
                })
                .collect();
            let mut tight: Vec<usize> = s.clone();
            let mut cons = Vec::new();
            for i in 0..m {
                if s.contains(&i) {
                    continue;
                }
                let c0 = eval_form(&forms[i], &y0);
                let ct: Vec<Rational> = nbasis.iter().map(|nv| linalg::dot(&forms[i][1..], nv)).collect();
                if ct.iter().all(|x| x.is_zero()) {
                    if c0.is_zero() {
                        tight.push(i);
                        continue;
                    }
                    if c0.is_negative() {
                        cons.push(Ineq::new(ct, c0, true));
                        break;
                    }
                    continue;
                }
                cons.push(Ineq::new(ct, c0, true));
            }
            let Some(t) = feasible_point(&cons, k - j) else { continue };
            let mut w = y0.clone();
            for (tv, nv) in t.iter().zip(&nbasis) {
                for l in 0..k {
                    w[l] += tv * &nv[l];
                }
            }
            tight.sort_unstable();
            let tight_src: Vec<usize> = tight.iter().map(|&i| src[i]).collect();
            if faces.iter().any(|f| f.tight == tight_src) {
                continue;
            }
            faces.push(Face { dim: k - j, at_infinity: clip_index.is_some_and(|c| tight_src.contains(&c)), tight: tight_src, witness: w });
        }
    }
    let _ = interior;
    let mut phi = vec![0usize; k];
    for f in &faces {
        phi[f.dim] += 1;
    }
    let mut all_forms = p.forms.clone();
    if clip_index.is_some() {
        all_forms.push(forms[m - 1].clone());
    }
    let lat = FaceLattice { k, forms: all_forms, clip_index, faces, phi, bounded };
    // simplicity: codimension-j faces lie on exactly j facets, except a vertex at the origin
    for f in &lat.faces {
        let codim = k - f.dim;
        let origin = f.dim == 0 && f.witness.iter().all(|x| x.is_zero());
        if f.tight.len() != codim && !origin {
            return Err(FnxError::Degeneracy(format!("face with tight set {:?} lies on {} facets", f.tight, f.tight.len())));
        }
    }
    if !lat.euler_ok() {
        return Err(FnxError::Degeneracy(format!("Euler relation fails for counts {:?}", lat.phi)));
    }
    Ok(lat)
}

/// Enumerates faces, perturbing the constants of non-linear forms when the input is not simple.
pub fn enumerate_faces_generic(p: &HPolyhedron, seed: u64) -> Result<(FaceLattice, bool)> {
    match enumerate_faces(p) {
        Err(FnxError::Degeneracy(_)) => {
            for attempt in 0..5 {
                if let Ok(l) = enumerate_faces(&p.perturbed(seed.wrapping_add(attempt), 1e-9)) {
                    return Ok((l, true));
                }
            }
            enumerate_faces(p).map(|l| (l, false))
        }
        other => other.map(|l| (l, false)),
    }
}

impl FaceLattice {
    pub fn euler_ok(&self) -> bool {
        let s: i64 = self.phi.iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum();
        let expect = 1 - if self.k % 2 == 0 { 1 } else { -1 };
        s == expect
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "bounded": self.bounded,
            "clip_index": self.clip_index,
            "phi": self.phi,
            "forms": self.forms.iter().map(|r| r.iter().map(fmt_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|f| json!({
                "dim": f.dim, "tight": f.tight, "at_infinity": f.at_infinity,
                "witness": f.witness.iter().map(fmt_rational).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Linear faces (tight set avoids the clip and p_1) against faces on φ^∞ or φ^1.
pub fn split_face_counts(l: &FaceLattice, phi1_index: usize) -> SplitCounts {
    let mut linear = vec![0; l.k];
    let mut nonlinear = vec![0; l.k];
    for f in &l.faces {
        let nl = f.tight.contains(&phi1_index) || l.clip_index.is_some_and(|c| f.tight.contains(&c));
        if nl {
            nonlinear[f.dim] += 1;
        } else {
            linear[f.dim] += 1;
        }
    }
    SplitCounts { linear, nonlinear }
}

/// One inequality with both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, lhs: usize, rhs: i64) -> Check {
        Check { name: name.into(), lhs: lhs as i64, rhs, ok: (lhs as i64) <= rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceBoundReport {
    pub checks: Vec<Check>,
}

impl FaceBoundReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn violations(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    pub fn to_json(&self) -> Value {
        json!(self.checks.iter().map(|c| json!({"check": c.name, "lhs": c.lhs, "rhs": c.rhs, "ok": c.ok})).collect::<Vec<_>>())
    }
}

fn binom_i(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 {
        return 0;
    }
    binomial(n as u64, k as u64).try_into().unwrap_or(i64::MAX)
}

/// Every face-count inequality the proofs use, evaluated on a lattice.
pub fn face_bound_checks(l: &FaceLattice, n: usize, k: usize, split: Option<&SplitCounts>) -> FaceBoundReport {
    let (ni, ki) = (n as i64, k as i64);
    let mut checks = Vec::new();
    for j in 1..=k {
        checks.push(Check::le(format!("Phi_{} <= C(n+k+1,{j})", k - j), l.phi[k - j], binom_i(ni + ki + 1, j as i64)));
    }
    if k == 3 && split.is_none() {
        checks.push(Check::le("Phi_0 <= 2(n+2)", l.phi[0], 2 * (ni + 2)));
        checks.push(Check::le("Phi_1 <= 3(n+2)", l.phi[1], 3 * (ni + 2)));
        checks.push(Check::le("Phi_2 <= n+4", l.phi[2], ni + 4));
    }
    if let Some(s) = split {
        for j in 1..=k {
            let d = k - j;
            let ji = j as i64;
            checks.push(Check::le(
                format!("Phi^nl_{d} <= 2C(n+k-1,{})+C(n+k-1,{})", j - 1, ji - 2),
                s.nonlinear[d],
                2 * binom_i(ni + ki - 1, ji - 1) + binom_i(ni + ki - 1, ji - 2),
            ));
            if j < k {
                checks.push(Check::le(format!("Phi^l_{d} <= C(n+k-1,{j})"), s.linear[d], binom_i(ni + ki - 1, ji)));
            }
        }
        checks.push(Check::le("Phi^l_0 <= 1", s.linear[0], 1));
        if k == 2 {
            checks.push(Check::le("Phi^l_1 <= 2", s.linear[1], 2));
            checks.push(Check::le("Phi^nl_1 <= 2", s.nonlinear[1], 2));
            checks.push(Check::le("Phi_0 <= 4", l.phi[0], 4));
        }
        if k == 3 {
            checks.push(Check::le("Phi_0 <= 4n+4", l.phi[0], 4 * ni + 4));
            checks.push(Check::le("Phi^l_1 <= n+2", s.linear[1], ni + 2));
            checks.push(Check::le("Phi^nl_1 <= 2n+5", s.nonlinear[1], 2 * ni + 5));
            checks.push(Check::le("Phi^l_2 <= n+2", s.linear[2], ni + 2));
            checks.push(Check::le("Phi^nl_2 <= 2", s.nonlinear[2], 2));
        }
    }
    FaceBoundReport { checks }
}

/// Like `face_bound_checks`, failing with the first violation.
pub fn check_face_bounds(l: &FaceLattice, n: usize, k: usize, split: Option<&SplitCounts>) -> Result<FaceBoundReport> {
    let r = face_bound_checks(l, n, k, split);
    if let Some(v) = r.violations().first() {
        return Err(FnxError::Violation(format!("{}: {} > {}", v.name, v.lhs, v.rhs)));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn forms(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn poly(rows: &[&[i64]]) -> HPolyhedron {
        let b = forms(rows);
        let mask = b.iter().map(|r| r[0].is_zero()).collect();
        HPolyhedron::new(b, mask)
    }

    #[test]
    fn square() {
        let p = poly(&[&[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1]]);
        let ip = p.interior_point().unwrap();
        assert!(p.forms.iter().all(|f| eval_form(f, &ip).is_positive()));
        let l = enumerate_faces(&p).unwrap();
        assert_eq!(l.phi, vec![4, 4]);
        assert!(l.bounded);
    }

    #[test]
    fn repeated_hyperplane_is_one_facet() {
        let p = poly(&[&[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1], &[0, 0, 3]]);
        assert_eq!(enumerate_faces(&p).unwrap().phi, vec![4, 4]);
    }

    #[test]
    fn cube() {
        let p = poly(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, -1, 0, 0], &[1, 0, -1, 0], &[1, 0, 0, -1]]);
        let l = enumerate_faces(&p).unwrap();
        assert_eq!(l.phi, vec![8, 12, 6]);
        for f in &l.faces {
            for (i, form) in p.forms.iter().enumerate() {
                let v = eval_form(form, &f.witness);
                if f.tight.contains(&i) {
                    assert!(v.is_zero());
                } else {
                    assert!(v.is_positive());
                }
            }
        }
    }

    #[test]
    fn unbounded_is_clipped() {
        let p = poly(&[&[0, 1, 0], &[0, 0, 1], &[-1, 1, 1]]);
        assert!(!p.is_bounded());
        assert!(build_delta(&p.forms).is_ok());
        let l = enumerate_faces(&p).unwrap();
        // quadrilateral: two axis edges, the diagonal, and the clip edge
        assert_eq!(l.phi, vec![4, 4]);
        assert_eq!(l.faces.iter().filter(|f| f.at_infinity).count(), 3);
    }

    #[test]
    fn empty_detected() {
        assert_eq!(build_delta(&forms(&[&[0, 1], &[-1, -1]])).unwrap_err(), FnxError::Empty);
        assert_eq!(enumerate_faces(&poly(&[&[0, 1, 0, 0, 0]])).unwrap_err(), FnxError::Dimension(4));
    }

    #[test]
    fn split_counts_triangle_and_octant() {
        let t = poly(&[&[1, -1, -1], &[0, 1, 0], &[0, 0, 1]]);
        let l = enumerate_faces(&t).unwrap();
        let s = split_face_counts(&l, 0);
        assert_eq!(l.phi, vec![3, 3]);
        assert_eq!(s.linear, vec![1, 2]);
        assert_eq!(s.nonlinear, vec![2, 1]);
        let o = poly(&[&[1, -1, -1, -1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let lo = enumerate_faces(&o).unwrap();
        let so = split_face_counts(&lo, 0);
        assert_eq!(so.linear[2], 3);
        assert_eq!(so.nonlinear[2], 1);
        let sq = enumerate_faces(&poly(&[&[1, -1, 0], &[1, 0, -1], &[1, 1, 0], &[1, 0, 1]])).unwrap();
        // no linear forms: every face touches neither... count them as non-linear only if on p_1
        let ssq = split_face_counts(&sq, usize::MAX);
        assert_eq!(ssq.nonlinear, vec![0, 0]);
    }

    #[test]
    fn pairwise_intersection_oracle() {
        // bounded pentagon from 5 forms: vertices are feasible pairwise intersections
        let p = poly(&[&[0, 1, 0], &[0, 0, 1], &[4, -1, 0], &[4, 0, -1], &[6, -1, -1]]);
        let l = enumerate_faces(&p).unwrap();
        let oracle = p.vertices().len();
        assert_eq!(l.phi[0], oracle);
        assert_eq!(l.phi, vec![5, 5]);
        let r = check_face_bounds(&l, 3, 2, None).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn non_simple_needs_perturbation() {
        // square pyramid apex lies on 4 facets
        let p = poly(&[&[0, 0, 0, 1], &[1, -1, 0, -1], &[1, 1, 0, -1], &[1, 0, -1, -1], &[1, 0, 1, -1]]);
        assert!(matches!(enumerate_faces(&p), Err(FnxError::Degeneracy(_))));
        let (l, perturbed) = enumerate_faces_generic(&p, 1).unwrap();
        assert!(perturbed);
        assert!(l.euler_ok());
    }
}
