//! Exact positive-solution counting for small systems, plus a numeric census.

pub mod bivariate;
pub mod newton;

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{FnxError, Result};
use crate::gale::GaleSystem;
use crate::rational::{fmt_rational, Rational};
use crate::real::Real;
use crate::system::{eval_system, FewnomialSystem};

pub use bivariate::{solve_region_1d, solve_region_2d};
pub use newton::newton_census;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    SturmExact,
    ResultantExact,
    NewtonNumeric,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::SturmExact => "sturm-exact",
            Method::ResultantExact => "resultant-exact",
            Method::NewtonNumeric => "newton-numeric",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub point: Vec<Real>,
    pub residual: f64,
    pub multiple: bool,
}

#[derive(Clone, Debug)]
pub struct CountReport {
    pub count: usize,
    pub method: Method,
    pub certified: bool,
    pub solutions: Vec<Solution>,
    pub degeneracy_margin: Rational,
    /// Real solutions lying exactly on the boundary of the domain (excluded from `count`).
    pub boundary: usize,
    pub note: String,
}

impl CountReport {
    pub fn to_json(&self) -> Value {
        json!({
            "count": self.count,
            "method": self.method.tag(),
            "certified": self.certified,
            "degeneracy_margin": fmt_rational(&self.degeneracy_margin),
            "boundary_excluded": self.boundary,
            "note": self.note,
            "solutions": self.solutions.iter().map(|s| json!({
                "point": s.point.iter().map(|x| format!("{:.15e}", x.to_f64())).collect::<Vec<_>>(),
                "residual": format!("{:.3e}", s.residual),
                "multiple": s.multiple,
            })).collect::<Vec<_>>(),
        })
    }

    /// Solution coordinates as doubles, sorted lexicographically.
    pub fn points_f64(&self) -> Vec<Vec<f64>> {
        let mut v: Vec<Vec<f64>> = self.solutions.iter().map(|s| s.point.iter().map(|x| x.to_f64()).collect()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        v
    }
}

fn positivity_forms(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            let mut f = vec![Rational::zero(); n + 1];
            f[i + 1] = Rational::one();
            f
        })
        .collect()
}

fn max_abs(v: &[Real]) -> f64 {
    v.iter().map(|r| r.abs().to_f64()).fold(0.0, f64::max)
}

/// Exact count of positive solutions for n ≤ 2 (rational exponents are cleared first).
pub fn count_system_exact(sys: &FewnomialSystem, prec: usize) -> Result<CountReport> {
    let polys = sys.polys();
    let nclear = polys.iter().map(|p| p.denom_clear()).max().unwrap_or(1) as i64;
    let lift = |u: &Real| if nclear == 1 { u.clone() } else { u.powi(nclear) };
    match sys.n {
        1 => {
            let (roots, certified) = solve_region_1d(&polys[0], &positivity_forms(1), prec)?;
            let mut sols = Vec::new();
            let mut margin: Option<Rational> = None;
            for (u, multiple, w) in roots {
                let z = vec![lift(&u)];
                let res = max_abs(&eval_system(sys, &z)?);
                margin = Some(margin.map_or(w.clone(), |m: Rational| m.min(w)));
                sols.push(Solution { point: z, residual: res, multiple });
            }
            Ok(CountReport {
                count: sols.len(),
                method: Method::SturmExact,
                certified,
                solutions: sols,
                degeneracy_margin: margin.unwrap_or_else(Rational::one),
                boundary: 0,
                note: String::new(),
            })
        }
        2 => {
            let s = solve_region_2d(&polys[0], &polys[1], &positivity_forms(2), &[], prec)?;
            let mut sols = Vec::new();
            for p in &s.points {
                let z = vec![lift(&p.x), lift(&p.y)];
                let res = max_abs(&eval_system(sys, &z)?);
                sols.push(Solution { point: z, residual: res, multiple: p.multiple });
            }
            Ok(CountReport {
                count: sols.len(),
                method: Method::ResultantExact,
                certified: sols.iter().all(|s| !s.multiple) && s.boundary == 0,
                solutions: sols,
                degeneracy_margin: s.margin,
                boundary: s.boundary,
                note: s.transform,
            })
        }
        n => Err(FnxError::Range(format!("exact counting needs n <= 2 (got n = {n}); use the newton method"))),
    }
}

/// Intersection points of pairs of boundary lines (the structural degenerate fibers of
/// a Gale system written as P+ - P- = 0).
fn line_intersections(b: &[Vec<Rational>]) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let (a1, b1, c1) = (&b[i][1], &b[i][2], &b[i][0]);
            let (a2, b2, c2) = (&b[j][1], &b[j][2], &b[j][0]);
            let d = a1 * b2 - a2 * b1;
            if d.is_zero() {
                continue;
            }
            let x = (b1 * c2 - b2 * c1) / &d;
            let y = (a2 * c1 - a1 * c2) / &d;
            if !out.contains(&(x.clone(), y.clone())) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Exact count of Gale solutions inside Δ for k ≤ 2.
pub fn count_gale_in_delta(g: &GaleSystem, prec: usize) -> Result<CountReport> {
    let k = g.k();
    if crate::polytope::HPolyhedron::new(g.b.clone(), g.linear_mask.clone()).interior_point().is_none() {
        return Ok(CountReport {
            count: 0,
            method: if k == 1 { Method::SturmExact } else { Method::ResultantExact },
            certified: true,
            solutions: vec![],
            degeneracy_margin: Rational::one(),
            boundary: 0,
            note: "empty polyhedron".into(),
        });
    }
    let polys = g.polys();
    let residual = |y: &[Real]| -> f64 {
        match g.psi(y) {
            Ok(v) => max_abs(&v),
            Err(_) => f64::INFINITY,
        }
    };
    match k {
        1 => {
            let (roots, certified) = solve_region_1d(&polys[0], &g.b, prec)?;
            let mut sols = Vec::new();
            let mut margin: Option<Rational> = None;
            for (y, multiple, w) in roots {
                let pt = vec![y];
                let r = residual(&pt);
                margin = Some(margin.map_or(w.clone(), |m: Rational| m.min(w)));
                sols.push(Solution { point: pt, residual: r, multiple });
            }
            Ok(CountReport {
                count: sols.len(),
                method: Method::SturmExact,
                certified,
                solutions: sols,
                degeneracy_margin: margin.unwrap_or_else(Rational::one),
                boundary: 0,
                note: String::new(),
            })
        }
        2 => {
            let cands = line_intersections(&g.b);
            let s = solve_region_2d(&polys[0], &polys[1], &g.b, &cands, prec)?;
            let mut sols = Vec::new();
            for p in &s.points {
                let pt = vec![p.x.clone(), p.y.clone()];
                let r = residual(&pt);
                sols.push(Solution { point: pt, residual: r, multiple: p.multiple });
            }
            Ok(CountReport {
                count: sols.len(),
                method: Method::ResultantExact,
                certified: sols.iter().all(|s| !s.multiple),
                solutions: sols,
                degeneracy_margin: s.margin,
                boundary: s.boundary,
                note: s.transform,
            })
        }
        _ => Err(FnxError::Range(format!("exact Gale counting needs k <= 2 (got k = {k})"))),
    }
}

/// Deterministic relative perturbation of every nonzero coefficient by at most `rel`.
pub fn perturb_coefficients(sys: &FewnomialSystem, seed: u64, rel: f64) -> FewnomialSystem {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let scale = (1.0 / rel).round() as i64;
    let mut out = sys.clone();
    for row in out.coeffs.iter_mut() {
        for c in row.iter_mut() {
            if c.is_zero() {
                continue;
            }
            let d: i64 = rng.gen_range(-1000..=1000);
            *c = &*c * (Rational::one() + Rational::new(d.into(), (scale.to_i64().unwrap() * 1000).into()));
        }
    }
    out
}
