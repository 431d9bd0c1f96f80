//! Gale duality: diagonal form, kernel exponents, Gale systems and the bijection check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::count::{self, CountReport};
use crate::error::{FnxError, Result};
use crate::linalg::{self, Mat};
use crate::poly::SparsePoly;
use crate::rational::{from_q_matrix, lcm_denominators, to_q_matrix, Rational, Q};
use crate::real::Real;
use crate::system::{normalize_support, FewnomialSystem, Support};

/// z^{w_i} = p_i(y) for i = 1..n, with y_j = z^{w_{n+j}}.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalForm {
    pub n: usize,
    pub k: usize,
    /// n × (k+1): p_i(y) = b[i][0] + Σ_j b[i][j] y_j.
    pub p: Mat,
    /// Column order used, `perm[new] = old`.
    pub ordering: Vec<usize>,
    /// Normalized support the form refers to.
    pub support: Support,
    /// Whether the coefficients were perturbed to make the block invertible.
    pub perturbed: bool,
}

impl DiagonalForm {
    /// Coefficients of the reduced system [−b_0 | I | −b_1..b_k] on the normalized support.
    pub fn as_system(&self) -> FewnomialSystem {
        let (n, k) = (self.n, self.k);
        let coeffs = (0..n)
            .map(|i| {
                let mut row = vec![Rational::zero(); n + k + 1];
                row[0] = -self.p[i][0].clone();
                row[1 + i] = Rational::one();
                for j in 0..k {
                    row[1 + n + j] = -self.p[i][1 + j].clone();
                }
                row
            })
            .collect();
        FewnomialSystem { n, support: self.support.clone(), coeffs }
    }

    /// All n+k linear forms: the p_i followed by p_{n+j} = y_j.
    pub fn forms(&self) -> Mat {
        let mut b = self.p.clone();
        for j in 0..self.k {
            let mut row = vec![Rational::zero(); self.k + 1];
            row[1 + j] = Rational::one();
            b.push(row);
        }
        b
    }
}

/// Kernel basis and linear forms of a Gale dual.
#[derive(Clone, Debug, PartialEq)]
pub struct GaleDual {
    pub a: Mat,
    pub b: Mat,
    pub perm: Vec<usize>,
    pub nw: usize,
    pub zero_rows: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GaleJson {
    #[serde(rename = "A")]
    a: Vec<Vec<Q>>,
    #[serde(rename = "B")]
    b: Vec<Vec<Q>>,
    perm: Vec<usize>,
    #[serde(rename = "nW")]
    nw: usize,
}

impl GaleDual {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GaleJson { a: to_q_matrix(&self.a), b: to_q_matrix(&self.b), perm: self.perm.clone(), nw: self.nw })
            .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<GaleDual> {
        let j: GaleJson = serde_json::from_str(s).map_err(|e| FnxError::Parse(e.to_string()))?;
        let a = from_q_matrix(j.a);
        let zero_rows = zero_rows(&a);
        Ok(GaleDual { a, b: from_q_matrix(j.b), perm: j.perm, nw: j.nw, zero_rows })
    }
}

/// Exponent matrix [w_1 … w_{n+k}] (n rows) of a normalized support.
pub fn exponent_matrix(w: &Support) -> Mat {
    (0..w.n).map(|r| w.points[1..].iter().map(|p| p[r].clone()).collect()).collect()
}

/// Canonical kernel basis of the exponent matrix, (n+k) × k.
pub fn gale_exponents(w: &Support) -> Result<Mat> {
    let e = exponent_matrix(w);
    if linalg::rank(&e) < w.n {
        return Err(FnxError::Span(w.n));
    }
    Ok(linalg::kernel(&e, w.len() - 1))
}

fn zero_rows(a: &Mat) -> Vec<usize> {
    (0..a.len()).filter(|&i| a[i].iter().all(|x| x.is_zero())).collect()
}

/// Solves for z^{w_1..w_n} (normalized ordering); fails if that block is singular.
pub fn diagonalize(sys: &FewnomialSystem) -> Result<DiagonalForm> {
    let (norm, perm) = normalize_support(sys)?;
    diagonalize_normalized(&norm, perm, false)
}

fn diagonalize_normalized(norm: &FewnomialSystem, perm: Vec<usize>, perturbed: bool) -> Result<DiagonalForm> {
    let n = norm.n;
    let k = norm.k();
    let c1: Mat = norm.coeffs.iter().map(|r| r[1..=n].to_vec()).collect();
    let inv = linalg::inverse(&c1).ok_or_else(|| FnxError::Singular("coefficient block of z^{w_1..w_n}".into()))?;
    let c0: Vec<Rational> = norm.coeffs.iter().map(|r| r[0].clone()).collect();
    let c2: Mat = norm.coeffs.iter().map(|r| r[n + 1..].to_vec()).collect();
    let b0 = linalg::mat_vec(&inv, &c0);
    let b2 = linalg::mul(&inv, &c2);
    let p = (0..n)
        .map(|i| {
            let mut row = vec![-b0[i].clone()];
            row.extend((0..k).map(|j| -b2[i][j].clone()));
            row
        })
        .collect();
    Ok(DiagonalForm { n, k, p, ordering: perm, support: norm.support.clone(), perturbed })
}

/// Like `diagonalize`, but perturbs the coefficients (relative size `rel`) when the block is singular.
pub fn diagonalize_or_perturb(sys: &FewnomialSystem, seed: u64, rel: f64) -> Result<DiagonalForm> {
    let (norm, perm) = normalize_support(sys)?;
    match diagonalize_normalized(&norm, perm.clone(), false) {
        Err(FnxError::Singular(_)) => {
            let p = count::perturb_coefficients(&norm, seed, rel);
            diagonalize_normalized(&p, perm, true)
        }
        other => other,
    }
}

/// Full Gale dual of a system: canonical A, forms B, ordering and n(W).
pub fn gale_dual(sys: &FewnomialSystem) -> Result<GaleDual> {
    let d = diagonalize(sys)?;
    let a = gale_exponents(&d.support)?;
    let zr = zero_rows(&a);
    let nw = (a.len() - zr.len()).saturating_sub(d.k);
    Ok(GaleDual { a, b: d.forms(), perm: d.ordering.clone(), nw, zero_rows: zr })
}

/// Gale system ∏ p_i(y)^{a_{i,j}} = 1 on Δ = {p_i > 0}.
#[derive(Clone, Debug, PartialEq)]
pub struct GaleSystem {
    pub a: Mat,
    pub b: Mat,
    pub linear_mask: Vec<bool>,
}

impl GaleSystem {
    pub fn new(a: Mat, b: Mat) -> GaleSystem {
        let linear_mask = b.iter().map(|r| r[0].is_zero()).collect();
        GaleSystem { a, b, linear_mask }
    }

    pub fn k(&self) -> usize {
        linalg::ncols(&self.a)
    }

    pub fn with_basis(&self, a: Mat) -> GaleSystem {
        GaleSystem { a, ..self.clone() }
    }

    pub fn forms(&self) -> Vec<SparsePoly> {
        self.b.iter().map(|r| SparsePoly::linear(r)).collect()
    }

    /// Each equation cleared to ∏_{e>0} p^e − ∏_{e<0} p^{−e}, with e = N_j a_{i,j} integral.
    pub fn polys(&self) -> Vec<SparsePoly> {
        let k = self.k();
        let forms = self.forms();
        (0..k)
            .map(|j| {
                let col: Vec<Rational> = self.a.iter().map(|r| r[j].clone()).collect();
                let nj = Rational::from_integer(lcm_denominators(col.iter()));
                let mut plus = SparsePoly::one(k);
                let mut minus = SparsePoly::one(k);
                for (i, a) in col.iter().enumerate() {
                    let e = (a * &nj).to_integer().to_i64().expect("exponent fits");
                    if e > 0 {
                        plus = &plus * &forms[i].pow(e as u32);
                    } else if e < 0 {
                        minus = &minus * &forms[i].pow((-e) as u32);
                    }
                }
                &plus - &minus
            })
            .collect()
    }

    /// Linear form values p_i(y).
    pub fn form_values(&self, y: &[Real]) -> Vec<Real> {
        let prec = y[0].prec();
        self.b
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
            .collect()
    }

    /// ψ_j(y) = Σ_i a_{i,j} log p_i(y).
    pub fn psi(&self, y: &[Real]) -> Result<Vec<Real>> {
        let vals = self.form_values(y);
        if vals.iter().any(|v| v.signum() <= 0) {
            return Err(FnxError::Domain("point outside Δ".into()));
        }
        let logs: Vec<Real> = vals.iter().map(|v| v.ln()).collect();
        let prec = y[0].prec();
        Ok((0..self.k())
            .map(|j| {
                let mut s = Real::zero(prec);
                for (i, l) in logs.iter().enumerate() {
                    if !self.a[i][j].is_zero() {
                        s = s + Real::from_rational(&self.a[i][j], prec) * l;
                    }
                }
                s
            })
            .collect())
    }
}

/// The Gale system of a diagonal form and a kernel basis.
pub fn build_gale_system(d: &DiagonalForm, a: &Mat) -> Result<GaleSystem> {
    let e = exponent_matrix(&d.support);
    if linalg::mul(&e, a).iter().flatten().any(|x| !x.is_zero()) {
        return Err(FnxError::Violation("A is not a kernel basis of the exponent matrix".into()));
    }
    Ok(GaleSystem::new(a.clone(), d.forms()))
}

/// Rescales each column to coprime integers and size-reduces pairs of columns.
/// The column span is unchanged, so the Gale solution set in Δ is unchanged.
pub fn reduced_integer_basis(a: &Mat) -> Mat {
    let k = linalg::ncols(a);
    let mut cols: Vec<Vec<BigInt>> = (0..k)
        .map(|j| {
            let col: Vec<Rational> = a.iter().map(|r| r[j].clone()).collect();
            let l = Rational::from_integer(lcm_denominators(col.iter()));
            let ints: Vec<BigInt> = col.iter().map(|x| (x * &l).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            ints.into_iter().map(|x| if g.is_zero() { x } else { x / &g }).collect()
        })
        .collect();
    let norm = |v: &[BigInt]| v.iter().map(|x| x * x).fold(BigInt::zero(), |s, x| s + x);
    let dotb = |u: &[BigInt], v: &[BigInt]| u.iter().zip(v).map(|(x, y)| x * y).fold(BigInt::zero(), |s, x| s + x);
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let nj = norm(&cols[j]);
                if nj.is_zero() {
                    continue;
                }
                let q = Rational::new(dotb(&cols[i], &cols[j]), nj).round().to_integer();
                if q.is_zero() {
                    continue;
                }
                let cand: Vec<BigInt> = cols[i].iter().zip(&cols[j]).map(|(x, y)| x - &q * y).collect();
                if norm(&cand) < norm(&cols[i]) {
                    cols[i] = cand;
                    changed = true;
                }
            }
        }
    }
    (0..a.len()).map(|r| (0..k).map(|j| Rational::from_integer(cols[j][r].clone())).collect()).collect()
}

/// y_j = z^{w_{n+j}} for a normalized support.
pub fn phi_v(z: &[Real], w: &Support) -> Result<Vec<Real>> {
    if z.iter().any(|x| x.signum() <= 0) {
        return Err(FnxError::Domain("z must be strictly positive".into()));
    }
    let n = w.n;
    let logs: Vec<Real> = z.iter().map(|x| x.ln()).collect();
    let prec = z[0].prec();
    Ok(w.points[n + 1..]
        .iter()
        .map(|p| {
            let mut s = Real::zero(prec);
            for (e, l) in p.iter().zip(&logs) {
                if !e.is_zero() {
                    s = s + Real::from_rational(e, prec) * l;
                }
            }
            s.exp()
        })
        .collect())
}

/// Recovers z from a Gale solution y by solving the log-linear system w_i · log z = log m_i.
pub fn invert_phi(y: &[Real], d: &DiagonalForm, prec: usize) -> Result<Vec<Real>> {
    let (n, k) = (d.n, d.k);
    let y: Vec<Real> = y.iter().map(|v| v.clone() + Real::zero(prec)).collect();
    let g = GaleSystem::new(linalg::zeros(n + k, k), d.forms());
    let m = g.form_values(&y);
    if m.iter().any(|v| v.signum() <= 0) {
        return Err(FnxError::Domain("y is not in Δ".into()));
    }
    let logm: Vec<Real> = m.iter().map(|v| v.ln()).collect();
    let w: Mat = d.support.points[1..].to_vec();
    let rows = linalg::independent_rows(&w, (0..n + k).rev(), n);
    let sub = linalg::submatrix(&w, &rows, &(0..n).collect::<Vec<_>>());
    let inv = linalg::inverse(&sub).ok_or_else(|| FnxError::Singular("exponent rows".into()))?;
    let logz: Vec<Real> = (0..n)
        .map(|r| {
            let mut s = Real::zero(prec);
            for (c, &i) in rows.iter().enumerate() {
                if !inv[r][c].is_zero() {
                    s = s + Real::from_rational(&inv[r][c], prec) * &logm[i];
                }
            }
            s
        })
        .collect();
    let mut worst = 0.0f64;
    for (i, wi) in w.iter().enumerate() {
        let mut s = Real::zero(prec);
        for (e, l) in wi.iter().zip(&logz) {
            if !e.is_zero() {
                s = s + Real::from_rational(e, prec) * l;
            }
        }
        let r = (s - &logm[i]).abs().to_f64() / (1.0 + logm[i].abs().to_f64());
        worst = worst.max(r);
    }
    if worst > 1e-9 {
        return Err(FnxError::Consistency(worst));
    }
    Ok(logz.iter().map(|l| l.exp()).collect())
}

/// Outcome of comparing the two sides of the bijection.
#[derive(Clone, Debug)]
pub struct BijectionReport {
    pub n: usize,
    pub k: usize,
    pub exact: bool,
    pub original: CountReport,
    pub gale: CountReport,
    pub counts_equal: bool,
    /// Largest |ψ_j(φ_V(z))| over the original solutions.
    pub max_gale_residual: f64,
    /// Largest relative round-trip error |invert_phi(φ_V(z)) − z|.
    pub max_roundtrip: f64,
    pub images_distinct: bool,
    pub images_matched: bool,
    pub perturbed: bool,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.counts_equal && self.max_gale_residual < 1e-10 && self.images_distinct && self.images_matched
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k, "exact": self.exact,
            "original": self.original.to_json(), "gale": self.gale.to_json(),
            "counts_equal": self.counts_equal,
            "max_gale_residual": format!("{:.3e}", self.max_gale_residual),
            "max_roundtrip": format!("{:.3e}", self.max_roundtrip),
            "images_distinct": self.images_distinct, "images_matched": self.images_matched,
            "perturbed": self.perturbed, "passed": self.passed(),
        })
    }
}

/// Counts both sides of the Gale bijection and checks φ_V maps one solution set onto the other.
pub fn verify_bijection(sys: &FewnomialSystem, seed: u64, prec: usize) -> Result<BijectionReport> {
    let d = diagonalize_or_perturb(sys, seed, 1e-6)?;
    let a = gale_exponents(&d.support)?;
    let g = build_gale_system(&d, &reduced_integer_basis(&a))?;
    let diag = d.as_system();
    let (n, k) = (d.n, d.k);
    let exact = n <= 2 && k <= 2;
    let (original, gale) = if exact {
        (count::count_system_exact(&diag, prec)?, count::count_gale_in_delta(&g, prec)?)
    } else {
        (count::newton_census(&diag, 4000, seed), gale_newton_census(&g, 4000, seed))
    };
    let mut max_res = 0.0f64;
    let mut max_rt = 0.0f64;
    let mut images: Vec<Vec<f64>> = Vec::new();
    for s in &original.solutions {
        let y = phi_v(&s.point, &d.support)?;
        match g.psi(&y) {
            Ok(v) => max_res = max_res.max(v.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max)),
            Err(_) => max_res = f64::INFINITY,
        }
        if let Ok(z) = invert_phi(&y, &d, prec) {
            for (a, b) in z.iter().zip(&s.point) {
                max_rt = max_rt.max(((a - b).abs() / b.abs()).to_f64());
            }
        } else {
            max_rt = f64::INFINITY;
        }
        images.push(y.iter().map(|v| v.to_f64()).collect());
    }
    let close = |p: &[f64], q: &[f64]| p.iter().zip(q).all(|(a, b)| (a - b).abs() <= 1e-8 * (1.0 + a.abs().max(b.abs())));
    let images_distinct = (0..images.len()).all(|i| (0..i).all(|j| !close(&images[i], &images[j])));
    let gpts = gale.points_f64();
    let images_matched = images.iter().all(|im| gpts.iter().any(|q| close(im, q)));
    let counts_equal = original.count == gale.count;
    if !exact && !counts_equal {
        return Err(FnxError::Inconclusive(format!("numeric counts {} vs {}", original.count, gale.count)));
    }
    Ok(BijectionReport {
        n,
        k,
        exact,
        original,
        gale,
        counts_equal,
        max_gale_residual: max_res,
        max_roundtrip: max_rt,
        images_distinct,
        images_matched,
        perturbed: d.perturbed,
    })
}

/// Newton census of ψ = 0 inside Δ, started from Halton points of a box around Δ.
pub fn gale_newton_census(g: &GaleSystem, starts: usize, seed: u64) -> CountReport {
    use crate::count::newton::{damped_newton, dedupe, halton};
    use crate::rational::to_f64;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    let k = g.k();
    let a: Vec<Vec<f64>> = g.a.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let b: Vec<Vec<f64>> = g.b.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let map = |y: &[f64]| -> Option<(DVector<f64>, DMatrix<f64>)> {
        let p: Vec<f64> = b.iter().map(|r| r[0] + r[1..].iter().zip(y).map(|(c, v)| c * v).sum::<f64>()).collect();
        if p.iter().any(|v| *v <= 0.0) {
            return None;
        }
        let mut f = DVector::zeros(k);
        let mut jm = DMatrix::zeros(k, k);
        for (i, pi) in p.iter().enumerate() {
            for j in 0..k {
                f[j] += a[i][j] * pi.ln();
                for l in 0..k {
                    jm[(j, l)] += a[i][j] * b[i][l + 1] / pi;
                }
            }
        }
        Some((f, jm))
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
    let shift: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
    let box_r = crate::polytope::HPolyhedron::new(g.b.clone(), g.linear_mask.clone())
        .vertices_box()
        .map(|r| to_f64(&r))
        .unwrap_or(10.0);
    let mut found = Vec::new();
    for i in 0..starts as u64 {
        let h = halton(i, k, &shift);
        let y0: Vec<f64> = h.iter().map(|u| -box_r + 2.0 * box_r * u).collect();
        if map(&y0).is_none() {
            continue;
        }
        if let Some(y) = damped_newton(&y0, map, 80) {
            found.push(y);
        }
    }
    let pts = dedupe(found, 1e-8);
    let prec = crate::real::DEFAULT_PRECISION;
    let sols = pts
        .into_iter()
        .map(|p| {
            let y: Vec<Real> = p.iter().map(|&v| Real::from_f64(v, prec)).collect();
            let r = g.psi(&y).map(|v| v.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max)).unwrap_or(f64::INFINITY);
            count::Solution { point: y, residual: r, multiple: false }
        })
        .collect::<Vec<_>>();
    CountReport {
        count: sols.len(),
        method: count::Method::NewtonNumeric,
        certified: false,
        solutions: sols,
        degeneracy_margin: Rational::zero(),
        boundary: 0,
        note: format!("{starts} starts in Δ, seed {seed}"),
    }
}
