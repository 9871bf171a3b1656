//! Strongly resolved form and the series of the dependent unit.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::map::BirationalMap;
use crate::poly::{Frac, Monomial, Poly, Ring};
use crate::scalar::Scalar;

/// `b = f0 + u·f1 + t·D·Σ_j u^j g_j` with `f0, f1` free of `u` and `t`.
#[derive(Debug, Clone)]
pub struct ResolvedDecomposition {
    pub unit: usize,
    /// `None` only for a single variable, where `b = f0 + u·f1`.
    pub dist: Option<usize>,
    pub f0: Poly,
    pub f1: Poly,
    pub d: Poly,
    pub g: Vec<Poly>,
}

impl ResolvedDecomposition {
    pub fn ring(&self) -> &Arc<Ring> {
        self.f0.ring()
    }

    fn td(&self) -> Poly {
        match self.dist {
            Some(t) => &Poly::var(self.ring(), t) * &self.d,
            None => self.d.clone(),
        }
    }

    pub fn reassemble(&self) -> Poly {
        let r = self.ring();
        let u = Poly::var(r, self.unit);
        let mut tail = Poly::zero(r);
        for (j, gj) in self.g.iter().enumerate() {
            tail = &tail + &(&u.pow(j as u32) * gj);
        }
        &(&self.f0 + &(&u * &self.f1)) + &(&self.td() * &tail)
    }
}

/// The generic point of a part: `own[j]` is the parameter index standing for
/// main variable `j`.
#[derive(Debug, Clone, Copy)]
pub struct Point<'a> {
    pub constraints: &'a ConstraintSet,
    pub own: &'a [usize],
}

fn main_constant(f: &Poly) -> Poly {
    let one = Monomial::one(f.ring().n_main());
    f.split_main()
        .remove(&one)
        .unwrap_or_else(|| Poly::zero(&f.ring().param_ring()))
}

/// Nonzero at the point (or, without one, at the origin of the main
/// variables).
fn nonzero_at(f: &Poly, at: Option<Point>) -> bool {
    match at {
        Some(p) => f
            .at_point(p.own)
            .map(|v| !p.constraints.vanishes(&v))
            .unwrap_or(false),
        None => !main_constant(f).is_zero(),
    }
}

/// Decomposition for the given roles, when `b` is linear in `unit` modulo
/// `dist` and both `f0` and `f1` are nonzero at the point, so the unit's
/// value there is a unit.
pub fn is_strongly_resolved(
    b: &Poly,
    unit: usize,
    dist: Option<usize>,
    at: Option<Point>,
) -> Option<ResolvedDecomposition> {
    let ring = b.ring();
    if Some(unit) == dist || unit >= ring.n_main() || !b.is_laurent_free() || b.is_zero() {
        return None;
    }
    if dist.is_none() && ring.n_main() != 1 {
        return None;
    }
    if let (Some(t), Some(p)) = (dist, at) {
        let a_t = Poly::var(p.constraints.ring(), p.own[t]);
        if !p.constraints.vanishes(&a_t) {
            return None;
        }
    }
    let on_divisor = |m: &Monomial| dist.is_some_and(|t| m.exps()[t] > 0);
    let r = Poly::from_terms(
        ring,
        b.terms()
            .filter(|(m, _)| !on_divisor(m))
            .map(|(m, c)| (m.clone(), c.clone())),
    );
    if r.degree_in(unit) > 1 {
        return None;
    }
    let rc = r.coefficients_wrt(unit);
    let f0 = rc[0].clone();
    let f1 = rc.get(1).cloned().unwrap_or_else(|| Poly::zero(ring));
    if f1.is_zero() || !nonzero_at(&f1, at) || !nonzero_at(&f0, at) {
        return None;
    }
    let q = b - &r;
    let (d, g) = match dist {
        Some(t) if !q.is_zero() => {
            let q = q.mul_monomial(&Monomial::var(ring.nvars(), t).inverse());
            let (content, _) = q.monomial_content().ok()?;
            let content = Monomial::new(
                content
                    .exps()
                    .iter()
                    .enumerate()
                    .map(|(i, e)| if i == unit { 0 } else { *e })
                    .collect(),
            );
            let d = Poly::monomial(ring, content.clone(), ring.field().one());
            let g = q
                .coefficients_wrt(unit)
                .into_iter()
                .map(|qj| qj.mul_monomial(&content.inverse()))
                .collect();
            (d, g)
        }
        _ => (Poly::one(ring), Vec::new()),
    };
    let dec = ResolvedDecomposition {
        unit,
        dist,
        f0,
        f1,
        d,
        g,
    };
    debug_assert!(dec.reassemble() == *b);
    Some(dec)
}

/// First `(unit, dist)` pair in index order admitting a decomposition.
pub fn find_resolved(b: &Poly, at: Option<Point>) -> Option<ResolvedDecomposition> {
    let n = b.ring().n_main();
    if n == 1 {
        return is_strongly_resolved(b, 0, None, at);
    }
    for unit in 0..n {
        for dist in (0..n).filter(|&t| t != unit) {
            if let Some(d) = is_strongly_resolved(b, unit, Some(dist), at) {
                return Some(d);
            }
        }
    }
    None
}

/// The unit as a power series in the other main variables, up to total
/// degree `order`.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    pub order: u32,
    pub unit: usize,
    /// Exponents of the other main variables, in index order.
    pub coeffs: BTreeMap<Vec<i64>, Scalar>,
    /// The same series as a polynomial in the source ring.
    pub poly: Poly,
}

impl TruncatedSeries {
    pub fn constant(&self) -> Scalar {
        self.poly.constant_term()
    }
}

fn main_degree(m: &Monomial, n: usize) -> i64 {
    m.exps()[..n].iter().sum()
}

fn truncate(f: &Poly, order: i64) -> Poly {
    let n = f.ring().n_main();
    Poly::from_terms(
        f.ring(),
        f.terms()
            .filter(|(m, _)| main_degree(m, n) <= order)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

fn homogeneous(f: &Poly, deg: i64) -> Poly {
    let n = f.ring().n_main();
    Poly::from_terms(
        f.ring(),
        f.terms()
            .filter(|(m, _)| main_degree(m, n) == deg)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// `b(s)` truncated at `order`, with `s` substituted for the unit.
fn eval_unit(cs: &[Poly], s: &Poly, order: i64) -> Poly {
    let mut out = Poly::zero(s.ring());
    let mut pw = Poly::one(s.ring());
    for (j, c) in cs.iter().enumerate() {
        if j > 0 {
            pw = truncate(&(&pw * s), order);
        }
        out = &out + &truncate(&(c * &pw), order);
    }
    out
}

/// Solves `b(s, x) = 0` degree by degree: `s_0 = -f0(0)/f1(0)` and
/// `s_n = -[b(s_{<n})]_n / f1(0)`. Coefficients must be scalars.
pub fn unit_series(b: &Poly, dec: &ResolvedDecomposition, order: u32) -> Result<TruncatedSeries> {
    let ring = b.ring();
    if b.terms()
        .any(|(m, _)| m.exps()[ring.n_main()..].iter().any(|e| *e != 0))
    {
        return Err(Error::Invalid("series needs scalar coefficients".into()));
    }
    let one = Monomial::one(ring.nvars());
    let j = dec.f1.coeff(&one);
    if j.is_zero() {
        return Err(Error::NotAUnit(format!(
            "f1 = {} vanishes at the origin",
            dec.f1
        )));
    }
    let j_inv = j.inv()?;
    let s0 = -&(&dec.f0.coeff(&one) * &j_inv);
    if s0.is_zero() {
        return Err(Error::NotAUnit("the unit vanishes at the origin".into()));
    }
    let cs = b.coefficients_wrt(dec.unit);
    let mut s = Poly::constant(ring, s0);
    for n in 1..=order as i64 {
        let rest = homogeneous(&eval_unit(&cs, &s, n), n);
        s = &s - &rest.scale(&j_inv);
    }
    let check = eval_unit(&cs, &s, order as i64);
    if !check.is_zero() {
        return Err(Error::Verification(format!(
            "b(s) = {check} modulo degree {}",
            order + 1
        )));
    }
    let coeffs = s
        .terms()
        .map(|(m, c)| {
            let e = m.exps()[..ring.n_main()]
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != dec.unit)
                .map(|(_, e)| *e)
                .collect();
            (e, c.clone())
        })
        .collect();
    Ok(TruncatedSeries {
        order,
        unit: dec.unit,
        coeffs,
        poly: s,
    })
}

#[derive(Debug, Clone)]
pub struct Rewrite {
    pub map: BirationalMap,
    /// `f1^m · u0 + Σ_j (-f0 + t D u0)^j f1^{m-j} g_j`, linear in `u0` modulo `t`.
    pub transformed: Poly,
    /// `φ(b) = factor · transformed`.
    pub factor: Frac,
}

/// `u = (-f0 + t D u0) / f1`, `u0 = (f0 + u f1) / (t D)`.
pub fn resolved_rewrite(dec: &ResolvedDecomposition, u0_name: &str) -> Result<Rewrite> {
    let src = dec.ring();
    let mut main = src.main_vars().to_vec();
    main[dec.unit] = u0_name.to_string();
    let target = Ring::with_params(src.field(), main, src.params().to_vec());
    let u0 = Poly::var(&target, dec.unit);
    let tr = |p: &Poly| p.embed(&target);
    let (f0, f1, td) = (tr(&dec.f0)?, tr(&dec.f1)?, tr(&dec.td())?);
    let lin = &(-&f0) + &(&td * &u0);
    let mut phi = Vec::with_capacity(src.n_main());
    for i in 0..src.n_main() {
        phi.push(if i == dec.unit {
            Frac::new(lin.clone(), f1.clone())?
        } else {
            Frac::from_poly(Poly::var(&target, i))
        });
    }
    let back = Frac::new(&dec.f0 + &(&Poly::var(src, dec.unit) * &dec.f1), dec.td())?;
    let mut psi: Vec<(usize, Frac)> = (0..target.n_main())
        .filter(|&i| i != dec.unit)
        .map(|i| (i, Frac::from_poly(Poly::var(src, i))))
        .collect();
    psi.push((dec.unit, back));
    psi.sort_by_key(|(i, _)| *i);
    let map = BirationalMap::general(src, &target, phi, psi);

    let m = dec.g.len().saturating_sub(1) as u32;
    let mut t = &f1.pow(m) * &u0;
    for (j, gj) in dec.g.iter().enumerate() {
        let term = &(&lin.pow(j as u32) * &f1.pow(m - j as u32)) * &tr(gj)?;
        t = &t + &term;
    }
    if let Some(dv) = dec.dist {
        let modt = Poly::from_terms(
            &target,
            t.terms()
                .filter(|(mm, _)| mm.exps()[dv] == 0)
                .map(|(mm, c)| (mm.clone(), c.clone())),
        );
        if modt.degree_in(dec.unit) > 1 {
            return Err(Error::Verification(format!(
                "{modt} is not linear in {u0_name}"
            )));
        }
    }
    let factor = Frac::new(td, f1.pow(m))?;
    let b = dec.reassemble();
    let image = map.apply_poly(&b)?;
    if !image.equals(&factor.mul(&Frac::from_poly(t.clone()))) {
        return Err(Error::Verification("rewrite identity".into()));
    }
    Ok(Rewrite {
        map,
        transformed: t,
        factor,
    })
}
