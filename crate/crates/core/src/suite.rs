//! Seeded instance generators and the acceptance runners shared by tests and `sweep`.

use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bounds::{self, bounds_table, solution_bounds, technical_inequality_check, EnclosedConstant, ConstName};
use crate::count::count_gale_in_delta;
use crate::error::{FnxError, Result};
use crate::gale::{self, build_gale_system, diagonalize_or_perturb, gale_exponents, reduced_integer_basis, GaleSystem};
use crate::hull::kouchnirenko_bound;
use crate::hypersurface::{count_compact_components_2d, critical_count, HypersurfaceInput};
use crate::linalg::{self, Mat};
use crate::polytope::{enumerate_faces_generic, face_bound_checks, split_face_counts, HPolyhedron};
use crate::rational::{int, rat, Rational};
use crate::real::Real;
use crate::rolle::{cauchy_binet_check, det_real, gamma_k_closed_form, gamma_tower_generic, kr_chain_bound, psi_eval, LogSystem};
use crate::system::{FewnomialSystem, Support};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn small_rat(r: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

fn nonzero_rat(r: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    loop {
        let v = small_rat(r, num, den);
        if !v.is_zero() {
            return v;
        }
    }
}

fn nonzero_int(r: &mut ChaCha8Rng, m: i64) -> Rational {
    loop {
        let v = r.gen_range(-m..=m);
        if v != 0 {
            return int(v);
        }
    }
}

/// n polynomials in n variables on n+k+1 random integer exponents in [0, max_exp]^n.
pub fn random_system(r: &mut ChaCha8Rng, n: usize, k: usize, max_exp: i64) -> FewnomialSystem {
    loop {
        let mut pts: Vec<Vec<Rational>> = Vec::new();
        while pts.len() < n + k + 1 {
            let p: Vec<Rational> = (0..n).map(|_| int(r.gen_range(0..=max_exp))).collect();
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let Ok(support) = Support::new(n, pts) else { continue };
        if support.check_span().is_err() {
            continue;
        }
        let coeffs: Mat = (0..n).map(|_| (0..n + k + 1).map(|_| nonzero_int(r, 6)).collect()).collect();
        if let Ok(s) = FewnomialSystem::new(support, coeffs) {
            return s;
        }
    }
}

/// Random forms with a nonempty Δ, built around an interior point.
pub fn random_forms(r: &mut ChaCha8Rng, m: usize, k: usize) -> (Mat, Vec<Rational>) {
    let y0: Vec<Rational> = (0..k).map(|_| rat(r.gen_range(1..=6), r.gen_range(1..=3))).collect();
    let b = (0..m)
        .map(|_| {
            let normal: Vec<Rational> = (0..k).map(|_| nonzero_rat(r, 5, 2)).collect();
            let value = rat(r.gen_range(1..=8), r.gen_range(1..=4));
            let mut row = vec![value - linalg::dot(&normal, &y0)];
            row.extend(normal);
            row
        })
        .collect();
    (b, y0)
}

/// Cone forms of a component Gale system: p_1 with a constant, the rest through the origin, then y_j.
pub fn random_cone_forms(r: &mut ChaCha8Rng, n: usize, k: usize) -> Mat {
    let y0: Vec<Rational> = (0..k).map(|_| rat(r.gen_range(1..=6), r.gen_range(1..=3))).collect();
    let mut b = Vec::new();
    for i in 0..n {
        loop {
            let normal: Vec<Rational> = (0..k).map(|_| nonzero_rat(r, 5, 2)).collect();
            let v = linalg::dot(&normal, &y0);
            if i == 0 {
                let mut row = vec![v.abs() + rat(r.gen_range(1..=8), r.gen_range(1..=4))];
                row.extend(normal.into_iter().map(|x| -x.abs()));
                let value = linalg::dot(&row[1..], &y0) + &row[0];
                if value.is_positive() {
                    b.push(row);
                    break;
                }
            } else if v.is_positive() {
                let mut row = vec![Rational::zero()];
                row.extend(normal);
                b.push(row);
                break;
            }
        }
    }
    for j in 0..k {
        let mut row = vec![Rational::zero(); k + 1];
        row[j + 1] = Rational::one();
        b.push(row);
    }
    b
}

pub fn random_exponents(r: &mut ChaCha8Rng, m: usize, k: usize) -> Mat {
    (0..m).map(|_| (0..k).map(|_| small_rat(r, 7, 3)).collect()).collect()
}

/// Points strictly inside Δ near `y0`.
fn interior_points(r: &mut ChaCha8Rng, b: &Mat, y0: &[Rational], count: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let mut spread = Rational::one();
    while out.len() < count {
        let y: Vec<Rational> = y0.iter().map(|v| v + &spread * rat(r.gen_range(-1000..=1000), 1000)).collect();
        if b.iter().all(|f| (linalg::dot(&f[1..], &y) + &f[0]).is_positive()) {
            out.push(y);
        } else {
            spread = spread / int(2);
        }
    }
    out
}

/// Random normal-form hypersurface f = ±z1 ± z2 + c1 z^{a1} + c2 z^{a2} + e0.
pub fn random_hypersurface(r: &mut ChaCha8Rng) -> HypersurfaceInput {
    loop {
        let mut terms = vec![
            (vec![int(1), int(0)], int(if r.gen_bool(0.7) { 1 } else { -1 })),
            (vec![int(0), int(1)], int(if r.gen_bool(0.7) { 1 } else { -1 })),
            (vec![int(0), int(0)], rat(-r.gen_range(1..=8), r.gen_range(1..=8))),
        ];
        for _ in 0..2 {
            let e = vec![int(r.gen_range(0..=3)), int(r.gen_range(0..=3))];
            if terms.iter().any(|(p, _)| *p == e) {
                continue;
            }
            terms.push((e, small_rat(r, 4, 2)));
        }
        if terms.len() == 5 && terms.iter().all(|(_, c)| !c.is_zero()) {
            if let Ok(h) = HypersurfaceInput::from_terms(2, &terms) {
                return h;
            }
        }
    }
}

/// f = z1 + z2 − a z1^p − b z2^q − c with p, q ∈ {2, 3}. With m_i the maximum of
/// t − a t^p on t > 0, a constant max(m1, m2) < c < m1 + m2 leaves one oval in the open quadrant.
pub fn random_oval(r: &mut ChaCha8Rng) -> HypersurfaceInput {
    let (p, q) = (r.gen_range(2..=3i64), r.gen_range(2..=3i64));
    let (a, b) = (rat(r.gen_range(1..=4), r.gen_range(1..=2)), rat(r.gen_range(1..=4), r.gen_range(1..=2)));
    let peak = |a: &Rational, p: i64| {
        let a = crate::rational::to_f64(a);
        let t = (1.0 / (p as f64 * a)).powf(1.0 / (p as f64 - 1.0));
        t * (1.0 - 1.0 / p as f64)
    };
    let (m1, m2) = (peak(&a, p), peak(&b, q));
    let lo = m1.max(m2);
    let c = lo + (m1 + m2 - lo) * r.gen_range(0.2..0.8);
    let terms = vec![
        (vec![int(1), int(0)], int(1)),
        (vec![int(0), int(1)], int(1)),
        (vec![int(p), int(0)], -a),
        (vec![int(0), int(q)], -b),
        (vec![int(0), int(0)], -crate::rational::from_f64_dyadic(c, 20)),
    ];
    HypersurfaceInput::from_terms(2, &terms).expect("normal form")
}

/// The circle f = z1 + z2 − z1² − z2² − 3/8.
pub fn circle() -> HypersurfaceInput {
    let t = vec![
        (vec![int(1), int(0)], int(1)),
        (vec![int(0), int(1)], int(1)),
        (vec![int(2), int(0)], int(-1)),
        (vec![int(0), int(2)], int(-1)),
        (vec![int(0), int(0)], rat(-3, 8)),
    ];
    HypersurfaceInput::from_terms(2, &t).expect("normal form")
}

/// One acceptance line.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {} ({:.2}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }

    pub fn to_json(&self) -> Value {
        json!({"id": self.id, "name": self.name, "passed": self.passed, "detail": self.detail, "seconds": (self.elapsed.as_secs_f64() * 100.0).round() / 100.0})
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "constant reproduction"),
    (2, "technical inequality sweep"),
    (3, "Cauchy-Binet"),
    (4, "closed form of Gamma_k"),
    (5, "degrees and sparsity of F_j"),
    (6, "Gale bijection"),
    (7, "bound safety"),
    (8, "basis invariance"),
    (9, "face bounds"),
    (10, "kappa pipeline"),
];

pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    let t = Instant::now();
    let out = match id {
        1 => c1_constants(),
        2 => c2_technical(),
        3 => c3_cauchy_binet(seed),
        4 => c4_closed_form(seed),
        5 => c5_degrees(seed),
        6 => c6_bijection(seed).map(|(d, _)| d),
        7 => c7_bound_safety(seed),
        8 => c8_basis_invariance(seed),
        9 => c9_face_bounds(seed),
        10 => c10_kappa(seed),
        _ => Err(FnxError::Range(format!("no criterion {id}"))),
    };
    let (passed, detail) = match out {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    CriterionResult { id, name, passed, detail, elapsed: t.elapsed() }
}

/// Every criterion, run in parallel; results come back in criterion order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    use rayon::prelude::*;
    CRITERIA.par_iter().map(|c| run_criterion(c.0, seed)).collect()
}

fn fail(msg: String) -> FnxError {
    FnxError::Violation(msg)
}

fn c1_constants() -> Result<String> {
    let t = Instant::now();
    let rows = bounds_table(&[2], &[2, 3])?;
    let has = |k: u64, id: bounds::FormulaId, v: u64| rows.iter().any(|r| r.k == k && r.bound.formula_id == id && r.bound.integer_cap == v.into());
    use bounds::FormulaId::*;
    let checks = [
        ("Khovanskii 5184", has(2, Khovanskii, 5184)),
        ("new bound cap 20", has(2, NewFewnomial, 20)),
        ("k=2 bound 15", has(2, BoundK2, 15)),
        ("lower bound 4", has(2, LowerBound, 4) && bounds::lower_bound(2, 2)? == int(4)),
        ("k=3 bound 100", has(3, BoundK3, 100)),
    ];
    if let Some(c) = checks.iter().find(|c| !c.1) {
        return Err(fail(format!("missing {}", c.0)));
    }
    if t.elapsed() > Duration::from_secs(1) {
        return Err(fail("table took over 1 s".into()));
    }
    Ok("5184, 20, 15, 4 at (2,2) and 100 at (2,3)".into())
}

fn c2_technical() -> Result<String> {
    let stated = rat(31945, 10000);
    let enc = EnclosedConstant::get(ConstName::EsqMinus1Over2);
    if !(stated < enc.lower) {
        return Err(fail("3.1945 is not below the enclosure of (e^2-1)/2".into()));
    }
    let mut n_checked = 0;
    for n in 2..=40u64 {
        for k in 2..=40u64 {
            let r = technical_inequality_check(n, k)?;
            if Rational::from_integer(r.sum.clone()) > &stated * Rational::from_integer(r.terms[0].clone()) {
                return Err(fail(format!("sum exceeds 3.1945 a_0 at n={n}, k={k}")));
            }
            n_checked += 1;
        }
    }
    Ok(format!("{n_checked} pairs, zero violations"))
}

fn c3_cauchy_binet(seed: u64) -> Result<String> {
    let mut r = rng(seed, 3);
    for i in 0..200 {
        let k = r.gen_range(1..=4);
        let m = r.gen_range(k..=6);
        let c: Vec<Rational> = (0..m).map(|_| small_rat(&mut r, 9, 5)).collect();
        let d: Mat = (0..m).map(|_| (0..k).map(|_| small_rat(&mut r, 9, 5)).collect()).collect();
        let e: Mat = (0..m).map(|_| (0..k).map(|_| small_rat(&mut r, 9, 5)).collect()).collect();
        let rep = cauchy_binet_check(&c, &d, &e);
        if !rep.equal {
            return Err(fail(format!("instance {i}: {} != {}", rep.lhs, rep.rhs)));
        }
    }
    Ok("200 instances exact".into())
}

const SHAPES: [(usize, usize); 3] = [(2, 2), (3, 2), (2, 3)];

fn c4_closed_form(seed: u64) -> Result<String> {
    let mut r = rng(seed, 4);
    let prec = 128;
    let mut worst = 0.0f64;
    for inst in 0..20 {
        let (n, k) = SHAPES[inst % 3];
        let (b, y0) = random_forms(&mut r, n + k, k);
        let l = LogSystem::new(random_exponents(&mut r, n + k, k), b.clone())?;
        for y in interior_points(&mut r, &b, &y0, 100) {
            let yr: Vec<Real> = y.iter().map(|v| Real::from_rational(v, prec)).collect();
            let (_, g) = psi_eval(&l, &yr)?;
            let d = det_real(&g);
            let c = gamma_k_closed_form(&l, &yr)?;
            let rel = if d.is_zero() { c.abs().to_f64() } else { ((&c - &d) / &d).abs().to_f64() };
            worst = worst.max(rel);
        }
    }
    if worst >= 1e-9 {
        return Err(fail(format!("relative error {worst:.3e}")));
    }
    Ok(format!("20 instances x 100 points, max relative error {worst:.2e}"))
}

fn c5_degrees(seed: u64) -> Result<String> {
    let mut r = rng(seed, 5);
    let mut lines = Vec::new();
    for &(n, k) in &SHAPES {
        let (b, _) = random_forms(&mut r, n + k, k);
        let t = gamma_tower_generic(&LogSystem::new(random_exponents(&mut r, n + k, k), b)?, seed)?;
        if !t.degrees_generic() {
            return Err(fail(format!("degrees {:?} at (n,k)=({n},{k})", t.degrees)));
        }
        let cone = random_cone_forms(&mut r, n, k);
        let t4 = gamma_tower_generic(&LogSystem::new(random_exponents(&mut r, n + k, k), cone)?, seed)?;
        if !t4.sparsity_ok() {
            return Err(fail(format!("cone instance ({n},{k}) degrees {:?}..{:?}", t4.min_degrees, t4.degrees)));
        }
        lines.push(format!("({n},{k}): {:?}", t.degrees));
    }
    Ok(format!("deg F = {}; cone instances sparse", lines.join(", ")))
}

/// A counted bijection instance, kept for the bound-safety criterion.
pub struct Counted {
    pub sys: FewnomialSystem,
    pub gale: GaleSystem,
    pub n: usize,
    pub k: usize,
    pub count: usize,
}

fn bijection_instances(seed: u64) -> Vec<(usize, usize)> {
    let _ = seed;
    let mut shapes = vec![(2, 2); 50];
    shapes.extend([(1, 1), (1, 2), (2, 1), (1, 3)].iter().cycle().take(20).cloned());
    shapes
}

fn counted_instance(r: &mut ChaCha8Rng, n: usize, k: usize, seed: u64) -> Result<(Counted, gale::BijectionReport)> {
    let sys = random_system(r, n, k, if n == 1 { 6 } else { 3 });
    let rep = gale::verify_bijection(&sys, seed, 128)?;
    let d = diagonalize_or_perturb(&sys, seed, 1e-6)?;
    let g = build_gale_system(&d, &reduced_integer_basis(&gale_exponents(&d.support)?))?;
    let count = rep.original.count;
    Ok((Counted { sys: d.as_system(), gale: g, n, k, count }, rep))
}

fn c6_bijection(seed: u64) -> Result<(String, Vec<Counted>)> {
    let mut r = rng(seed, 6);
    let mut out = Vec::new();
    let mut total = 0;
    let mut worst = 0.0f64;
    for (i, (n, k)) in bijection_instances(seed).into_iter().enumerate() {
        let (c, rep) = counted_instance(&mut r, n, k, seed.wrapping_add(i as u64))
            .map_err(|e| fail(format!("instance {i} (n={n},k={k}): {e}")))?;
        if !rep.passed() {
            return Err(fail(format!(
                "instance {i} (n={n},k={k}): counts {} vs {}, residual {:.2e}",
                rep.original.count, rep.gale.count, rep.max_gale_residual
            )));
        }
        worst = worst.max(rep.max_gale_residual);
        total += c.count;
        out.push(c);
    }
    Ok((format!("{} instances, {total} solutions matched, max residual {worst:.2e}", out.len()), out))
}

fn instance_caps(c: &Counted, seed: u64) -> Result<Vec<(String, u64)>> {
    let mut caps: Vec<(String, u64)> = Vec::new();
    for b in solution_bounds(c.n as u64, c.k as u64)? {
        caps.push((b.formula_id.tag().to_string(), b.cap_u64()));
    }
    if c.sys.support.is_integral() {
        let kb = kouchnirenko_bound(&c.sys.support)?;
        caps.push(("kouchnirenko".into(), kb.floor().to_integer().try_into().unwrap_or(u64::MAX)));
    }
    if c.k <= 3 {
        let poly = HPolyhedron::new(c.gale.b.clone(), c.gale.linear_mask.clone());
        if !poly.is_empty() {
            let (faces, _) = enumerate_faces_generic(&poly, seed)?;
            let cert = kr_chain_bound(&LogSystem::from_gale(&c.gale), &faces, c.n, c.k, false)?;
            caps.push(("kr_chain".into(), cert.total));
        }
    }
    Ok(caps)
}

fn c7_bound_safety(seed: u64) -> Result<String> {
    let (_, mut counted) = c6_bijection(seed)?;
    let mut r = rng(seed, 7);
    for i in 0..100 {
        let sys = random_system(&mut r, 2, 2, 3);
        let d = diagonalize_or_perturb(&sys, seed, 1e-6)?;
        let g = build_gale_system(&d, &reduced_integer_basis(&gale_exponents(&d.support)?))?;
        let count = crate::count::count_system_exact(&d.as_system(), 128)
            .map_err(|e| fail(format!("extra instance {i}: {e}")))?
            .count;
        counted.push(Counted { sys: d.as_system(), gale: g, n: 2, k: 2, count });
    }
    let mut max_count = 0;
    for (i, c) in counted.iter().enumerate() {
        for (name, cap) in instance_caps(c, seed)? {
            if c.count as u64 > cap {
                return Err(fail(format!("instance {i}: {} solutions exceed {name} = {cap}", c.count)));
            }
        }
        max_count = max_count.max(c.count);
    }
    Ok(format!("{} instances, largest count {max_count}, zero violations", counted.len()))
}

/// Product of three random elementary column operations: swap, negate, add ±1 times
/// another column, or scale by 1/2 or 2. Invertible and rational by construction.
fn random_invertible(r: &mut ChaCha8Rng, k: usize) -> Mat {
    let mut m = linalg::identity(k);
    for _ in 0..3 {
        let i = r.gen_range(0..k);
        let j = (i + r.gen_range(1..k.max(2))) % k;
        match r.gen_range(0..4) {
            0 if k > 1 => m.iter_mut().for_each(|row| row.swap(i, j)),
            1 => m.iter_mut().for_each(|row| row[i] = -row[i].clone()),
            2 if k > 1 => {
                let s = if r.gen_bool(0.5) { int(1) } else { int(-1) };
                m.iter_mut().for_each(|row| row[i] = &row[i] + &s * &row[j]);
            }
            _ => {
                let s = if r.gen_bool(0.5) { rat(1, 2) } else { int(2) };
                m.iter_mut().for_each(|row| row[i] = &row[i] * &s);
            }
        }
    }
    m
}

fn c8_basis_invariance(seed: u64) -> Result<String> {
    let mut r = rng(seed, 8);
    let mut counts = Vec::new();
    for i in 0..20 {
        let (n, k) = if i % 4 == 3 { (2, 1) } else { (2, 2) };
        let sys = random_system(&mut r, n, k, 2);
        let d = diagonalize_or_perturb(&sys, seed, 1e-6)?;
        let a = reduced_integer_basis(&gale_exponents(&d.support)?);
        let g = build_gale_system(&d, &a)?;
        let base = count_gale_in_delta(&g, 128)?.count;
        for t in 0..5 {
            let m = random_invertible(&mut r, k);
            let c = count_gale_in_delta(&g.with_basis(linalg::mul(&a, &m)), 128)
                .map_err(|e| fail(format!("instance {i}, basis {t}: {e}")))?
                .count;
            if c != base {
                return Err(fail(format!("instance {i}, basis {t}: {c} != {base}")));
            }
        }
        counts.push(base);
    }
    Ok(format!("20 instances x 5 bases, counts {counts:?}"))
}

fn c9_face_bounds(seed: u64) -> Result<String> {
    let mut r = rng(seed, 9);
    let mut checked = 0;
    for i in 0..50 {
        let k = if i % 2 == 0 { 2 } else { 3 };
        let n = r.gen_range(2..=4);
        let cone = i % 4 >= 2;
        let b = if cone { random_cone_forms(&mut r, n, k) } else { random_forms(&mut r, n + k, k).0 };
        let mask = b.iter().map(|row| row[0].is_zero()).collect();
        let (faces, _) = enumerate_faces_generic(&HPolyhedron::new(b, mask), seed)?;
        let split = cone.then(|| split_face_counts(&faces, 0));
        let rep = face_bound_checks(&faces, n, k, split.as_ref());
        if let Some(v) = rep.violations().first() {
            return Err(fail(format!("instance {i} (n={n},k={k}): {} has {} > {}", v.name, v.lhs, v.rhs)));
        }
        checked += rep.checks.len();
    }
    Ok(format!("50 polyhedra, {checked} inequalities hold"))
}

fn c10_kappa(seed: u64) -> Result<String> {
    let c = count_compact_components_2d(&circle(), 64, 3.0)?;
    if c.kappa_estimate != 1 || c.critical_count != 2 || !c.critical_exact {
        return Err(fail(format!("circle: kappa {} with {} critical points", c.kappa_estimate, c.critical_count)));
    }
    let cap = bounds::kappa_bounds(2, 2)?.into_iter().find(|b| b.formula_id == bounds::FormulaId::KappaK2).unwrap().cap_u64();
    let mut r = rng(seed, 10);
    let mut seen = Vec::new();
    let mut tries = 0;
    while seen.len() < 20 {
        tries += 1;
        if tries > 400 {
            return Err(fail("could not draw 20 smooth instances".into()));
        }
        let h = if tries % 2 == 0 { random_oval(&mut r) } else { random_hypersurface(&mut r) };
        let (crit, exact) = critical_count(&h, 128);
        if !exact {
            continue;
        }
        let rep = match count_compact_components_2d(&h, 64, 3.0) {
            Ok(rep) => rep,
            Err(FnxError::Smoothness(_)) | Err(FnxError::Resolution(_)) => continue,
            Err(e) => return Err(e),
        };
        if rep.kappa_estimate > crit / 2 || (crit / 2) as u64 > cap {
            return Err(fail(format!("instance {}: kappa {} critical {crit} cap {cap}", seen.len(), rep.kappa_estimate)));
        }
        seen.push((rep.kappa_estimate, crit));
    }
    let kmax = seen.iter().map(|x| x.0).max().unwrap_or(0);
    let cmax = seen.iter().map(|x| x.1).max().unwrap_or(0);
    Ok(format!("circle kappa 1 with 2 critical points; 20 instances, max kappa {kmax}, max critical {cmax}, cap {cap}"))
}
