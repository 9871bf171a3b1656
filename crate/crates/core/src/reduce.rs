//! Global-parameter reductions: solving a linear variable, the divisor
//! pattern, weighted homogeneity and the k-th power pattern.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::map::BirationalMap;
use crate::poly::{Frac, Monomial, Poly, Ring};
use crate::weights::{int_inverse, unimodular_extend, UnimodularMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    LinearSolve,
    DivisorPattern,
    WeightedHomogeneous,
    PowerPattern,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::LinearSolve => "linear-solve",
            ReductionKind::DivisorPattern => "divisor-pattern",
            ReductionKind::WeightedHomogeneous => "weighted-homogeneous",
            ReductionKind::PowerPattern => "power-pattern",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub kind: ReductionKind,
    pub map: BirationalMap,
    /// In `map.target`; zero after a linear solve.
    pub reduced: Poly,
    /// `φ(b) = factor · reduced^power`.
    pub factor: Frac,
    pub power: u64,
    pub global_parameters: Vec<String>,
    pub weights: Option<Vec<i64>>,
    pub matrix: Option<UnimodularMap>,
    /// For a linear solve, the solved variable and its value.
    pub solved: Option<(String, Frac)>,
}

/// Name for the `j`-th new variable of a reduction.
pub type Namer<'a> = &'a dyn Fn(usize) -> String;

impl Reduction {
    /// `φ(b) = factor · reduced^power` and the round trip on the function
    /// fields.
    pub fn verify(&self, b: &Poly) -> Result<()> {
        let image = self.map.apply_poly(b)?;
        let rhs = self
            .factor
            .mul(&Frac::from_poly(self.reduced.pow(self.power as u32)));
        if !image.equals(&rhs) {
            return Err(Error::Verification(format!(
                "{} image {image} ≠ {rhs}",
                self.kind
            )));
        }
        self.map.verify_round_trip_mod(Some(b), Some(&self.reduced))
    }
}

fn renamed(ring: &Arc<Ring>, idx: &[usize], namer: Namer) -> Arc<Ring> {
    let mut main = ring.main_vars().to_vec();
    for (j, &i) in idx.iter().enumerate() {
        main[i] = namer(j);
    }
    Ring::with_params(ring.field(), main, ring.params().to_vec())
}

/// Source variables mapped to the same-named target variable.
fn identity_psi(source: &Arc<Ring>, target: &Arc<Ring>, skip: &[usize]) -> Vec<(usize, Frac)> {
    (0..target.n_main())
        .filter(|j| !skip.contains(j))
        .filter_map(|j| {
            let name = &target.vars()[j];
            source
                .index_of(name)
                .map(|i| (j, Frac::from_poly(Poly::var(source, i))))
        })
        .collect()
}

/// First main variable (index order) of degree exactly one: `b = f1 - x f2`
/// gives `x = f1 / f2` and `L = F(remaining variables)`.
pub fn detect_linear_variable(b: &Poly) -> Option<Reduction> {
    let ring = b.ring();
    if !b.is_laurent_free() {
        return None;
    }
    for x in 0..ring.n_main() {
        if b.degree_in(x) != 1 {
            continue;
        }
        let c = b.coefficients_wrt(x);
        let value = Frac::new(-&c[0], c[1].clone()).ok()?;
        let main: Vec<String> = ring
            .main_vars()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != x)
            .map(|(_, v)| v.clone())
            .collect();
        let target = Ring::with_params(ring.field(), main.clone(), ring.params().to_vec());
        let value_t = value.embed(&target).ok()?;
        let mut phi = Vec::with_capacity(ring.n_main());
        for i in 0..ring.n_main() {
            if i == x {
                phi.push(value_t.clone());
            } else {
                let j = target.index_of(&ring.vars()[i]).expect("kept");
                phi.push(Frac::from_poly(Poly::var(&target, j)));
            }
        }
        let psi = identity_psi(ring, &target, &[]);
        let map = BirationalMap::general(ring, &target, phi, psi);
        return Some(Reduction {
            kind: ReductionKind::LinearSolve,
            map,
            reduced: Poly::zero(&target),
            factor: Frac::from_poly(Poly::one(&target)),
            power: 1,
            global_parameters: main,
            weights: None,
            matrix: None,
            solved: Some((ring.vars()[x].clone(), value)),
        });
    }
    None
}

/// Rational nullspace basis of `rows` (each of length `n`).
fn nullspace(rows: &[Vec<i64>], n: usize) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for k in 0..n {
            a[r][k] = a[r][k].clone() / piv.clone();
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..n {
                    let t = a[r][k].clone() * f.clone();
                    a[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::from_integer(1.into());
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

fn primitive(v: &[BigRational]) -> Vec<i64> {
    let l = v
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| (x / &g).to_i64().expect("weight fits"))
        .collect()
}

/// A nonzero non-negative primitive `w` with `⟨w, α⟩` constant on the main
/// support, from a basis of the rational kernel of exponent differences.
pub fn weighted_homogeneous_weights(b: &Poly) -> Option<Vec<i64>> {
    let support = b.main_support();
    if support.len() < 2 {
        return None;
    }
    let n = b.ring().n_main();
    let base = support[0].exps();
    let rows: Vec<Vec<i64>> = support[1..]
        .iter()
        .map(|m| m.exps().iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    let mut best: Option<Vec<i64>> = None;
    for v in nullspace(&rows, n) {
        let mut w = primitive(&v);
        if w.iter().all(|x| *x <= 0) {
            w.iter_mut().for_each(|x| *x = -*x);
        }
        if w.iter().any(|x| x.is_negative()) || w.iter().all(|x| *x == 0) {
            continue;
        }
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    best
}

/// Monomial map from the weights; the distinguished new variable becomes a
/// parameter (the global parameter) and is divided out.
pub fn apply_weight_reduction(b: &Poly, w: &[i64], namer: Namer) -> Result<Reduction> {
    let ring = b.ring();
    let n = ring.n_main();
    if w.len() != n || w.iter().any(|x| *x < 0) || w.iter().all(|x| *x == 0) {
        return Err(Error::Invalid(
            "weights must be non-negative and nonzero".into(),
        ));
    }
    let pos: Vec<usize> = (0..n).filter(|&i| w[i] > 0).collect();
    let rest: Vec<usize> = (0..n).filter(|&i| w[i] == 0).collect();
    let wp: Vec<i64> = pos.iter().map(|&i| w[i]).collect();
    let u = unimodular_extend(&wp)?;
    let k = pos.len();
    let mut m = vec![vec![0i64; n]; n];
    for (p, &i) in pos.iter().enumerate() {
        for c in 0..k - 1 {
            m[i][c] = u.matrix[p][c];
        }
        m[i][n - 1] = u.matrix[p][k - 1];
    }
    for (q, &i) in rest.iter().enumerate() {
        m[i][k - 1 + q] = 1;
    }
    let inv = int_inverse(&m).ok_or_else(|| Error::Verification("not unimodular".into()))?;

    let main: Vec<String> = (0..n - 1).map(namer).collect();
    let mut params = ring.params().to_vec();
    let global = namer(n - 1);
    params.push(global.clone());
    let target = Ring::with_params(ring.field(), main, params);
    let zd = target.nvars() - 1;
    let mut cols: Vec<usize> = (0..n - 1).collect();
    cols.push(zd);
    let map = BirationalMap::monomial_on(ring, &target, vec![Poly::zero(ring); n], m, inv, &cols)?;
    let image = map
        .apply_poly(b)?
        .into_poly()
        .ok_or_else(|| Error::Verification("monomial image not polynomial".into()))?;
    let mut min = vec![0i64; target.nvars()];
    for idx in (0..n - 1).chain([zd]) {
        min[idx] = image.terms().map(|(t, _)| t.exps()[idx]).min().unwrap_or(0);
    }
    let content = Monomial::new(min);
    let reduced = image.mul_monomial(&content.inverse());
    if reduced.mentions(zd) {
        return Err(Error::Verification(format!(
            "cofactor {reduced} still mentions {global}"
        )));
    }
    let factor = Frac::from_poly(Poly::monomial(&target, content, target.field().one()));
    Ok(Reduction {
        kind: ReductionKind::WeightedHomogeneous,
        map,
        reduced,
        factor,
        power: 1,
        global_parameters: vec![global],
        weights: Some(w.to_vec()),
        matrix: Some(u),
        solved: None,
    })
}

fn strip(f: &Frac) -> Result<(Frac, Poly)> {
    let (m, g) = f.num.monomial_content()?;
    let c = Frac::new(
        Poly::monomial(f.ring(), m, f.ring().field().one()),
        f.den.clone(),
    )?;
    Ok((c, g))
}

/// Divisor pattern on the variable set `vars`: the part of `b` of total
/// degree `i` in `vars` must be divisible by `g^{m-i}`, `m` the top degree.
/// Substitutes `v ↦ y_v g` and divides by `g^m`.
pub fn detect_divisor_pattern(
    b: &Poly,
    vars: &[usize],
    g: &Poly,
    namer: Namer,
) -> Option<Reduction> {
    let ring = b.ring();
    if g.is_zero() || vars.is_empty() || vars.iter().any(|&v| g.mentions(v) || v >= ring.n_main()) {
        return None;
    }
    if !b.is_laurent_free() {
        return None;
    }
    let vdeg = |m: &Monomial| vars.iter().map(|&v| m.exps()[v]).sum::<i64>();
    let top = b.terms().map(|(m, _)| vdeg(m)).max()?;
    for i in 0..=top {
        let part = Poly::from_terms(
            ring,
            b.terms()
                .filter(|(m, _)| vdeg(m) == i)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        if !part.is_zero() && part.exact_div(&g.pow((top - i) as u32)).is_none() {
            return None;
        }
    }
    let target = renamed(ring, vars, namer);
    let gt = g.embed(&target).ok()?.with_ring(&target);
    let mut phi = Vec::with_capacity(ring.n_main());
    for i in 0..ring.n_main() {
        let z = Poly::var(&target, i);
        phi.push(Frac::from_poly(if vars.contains(&i) {
            &z * &gt
        } else {
            z
        }));
    }
    let mut psi = identity_psi(ring, &target, vars);
    for &v in vars {
        let back = Frac::new(Poly::var(ring, v), g.clone()).ok()?;
        psi.push((v, back));
    }
    psi.sort_by_key(|(i, _)| *i);
    let map = BirationalMap::general(ring, &target, phi, psi);
    let image = map.apply_poly(b).ok()?.into_poly()?;
    let gm = gt.pow(top as u32);
    let red = image.exact_div(&gm)?;
    let (content, reduced) = red.monomial_content().ok()?;
    let factor = Frac::from_poly(gm.mul_monomial(&content));
    Some(Reduction {
        kind: ReductionKind::DivisorPattern,
        map,
        reduced,
        factor,
        power: 1,
        global_parameters: Vec::new(),
        weights: None,
        matrix: None,
        solved: None,
    })
}

fn is_power_of(mut k: u64, p: u64) -> bool {
    if p < 2 {
        return false;
    }
    while k % p == 0 {
        k /= p;
    }
    k == 1
}

/// Power pattern `b = f1^k - v g f2^k`. Without `hint` the split is found
/// by Frobenius roots, which needs `k` to be a power of the characteristic.
/// Substitutes `v ↦ z^k / g`; the reduced polynomial is `f1 - z f2` after
/// substitution, with `ψ(z) = f1 / f2`.
pub fn detect_power_pattern(
    b: &Poly,
    v: usize,
    k: u64,
    g: &Poly,
    hint: Option<(&Poly, &Poly)>,
    namer: Namer,
) -> Option<Reduction> {
    let ring = b.ring();
    if k < 2 || g.is_zero() || g.mentions(v) || v >= ring.n_main() {
        return None;
    }
    let p = ring.field().characteristic();
    let frob = is_power_of(k, p);
    let vg = &Poly::var(ring, v) * g;
    let (f1, f2) = match hint {
        Some((f1, f2)) => (f1.clone(), f2.clone()),
        None => {
            if !frob {
                return None;
            }
            let ki = k as i64;
            let pth = Poly::from_terms(
                ring,
                b.terms()
                    .filter(|(m, _)| m.exps().iter().all(|e| e.rem_euclid(ki) == 0))
                    .map(|(m, c)| (m.clone(), c.clone())),
            );
            let f1 = pth.frobenius_root(k)?;
            let q = (-&(b - &pth)).exact_div(&vg)?;
            (f1, q.frobenius_root(k)?)
        }
    };
    if f1.is_zero() || f2.is_zero() {
        return None;
    }
    if &f1.pow(k as u32) - &(&vg * &f2.pow(k as u32)) != *b {
        return None;
    }
    let target = renamed(ring, &[v], namer);
    let z = Poly::var(&target, v);
    let gt = g.embed(&target).ok()?.with_ring(&target);
    let mut phi = Vec::with_capacity(ring.n_main());
    for i in 0..ring.n_main() {
        phi.push(if i == v {
            Frac::new(z.pow(k as u32), gt.clone()).ok()?
        } else {
            Frac::from_poly(Poly::var(&target, i))
        });
    }
    let mut psi = identity_psi(ring, &target, &[v]);
    psi.push((v, Frac::new(f1.clone(), f2.clone()).ok()?));
    psi.sort_by_key(|(i, _)| *i);
    let map = BirationalMap::general(ring, &target, phi, psi);
    let f1t = map.apply_poly(&f1).ok()?;
    let f2t = map.apply_poly(&f2).ok()?;
    let r = f1t.sub(&Frac::from_poly(z).mul(&f2t));
    let (content, reduced) = strip(&r).ok()?;
    if reduced.is_constant() {
        return None;
    }
    let power = if frob && hint.is_none() { k } else { 1 };
    let factor = if power == k {
        // Frobenius is additive: φ(b) = (f1 - z f2)^k after substitution
        content.powi(k as i64).ok()?
    } else {
        let image = map.apply_poly(b).ok()?;
        Frac::new(image.num.exact_div(&reduced)?, image.den).ok()?
    };
    Some(Reduction {
        kind: ReductionKind::PowerPattern,
        map,
        reduced,
        factor,
        power,
        global_parameters: Vec::new(),
        weights: None,
        matrix: None,
        solved: None,
    })
}

/// Every power pattern found by searching `k = p^e`, the variable `v` and a
/// monomial `g` in characteristic `p`, smallest result first (total degree,
/// then term count); ties go to the larger `k`, then the lower index.
pub fn power_pattern_candidates(b: &Poly, namer: Namer) -> Vec<Reduction> {
    let ring = b.ring();
    let p = ring.field().characteristic();
    if p == 0 || !b.is_laurent_free() {
        return Vec::new();
    }
    let top = b
        .terms()
        .flat_map(|(m, _)| m.exps().iter().copied())
        .max()
        .unwrap_or(0) as u64;
    let mut ks = Vec::new();
    let mut k = p;
    while k <= top.max(p) {
        ks.push(k);
        k = match k.checked_mul(p) {
            Some(x) => x,
            None => break,
        };
    }
    let mut found: Vec<((i64, usize), Reduction)> = Vec::new();
    for &k in ks.iter().rev() {
        let ki = k as i64;
        let rest: Vec<&Monomial> = b
            .terms()
            .map(|(m, _)| m)
            .filter(|m| m.exps().iter().any(|e| e.rem_euclid(ki) != 0))
            .collect();
        if rest.is_empty() || rest.len() == b.nterms() {
            continue;
        }
        for v in 0..ring.n_main() {
            if !rest.iter().all(|m| m.exps()[v].rem_euclid(ki) == 1) {
                continue;
            }
            let residue = |m: &Monomial| -> Vec<i64> {
                m.exps()
                    .iter()
                    .enumerate()
                    .map(|(i, e)| if i == v { 0 } else { e.rem_euclid(ki) })
                    .collect()
            };
            let r0 = residue(rest[0]);
            if rest.iter().any(|m| residue(m) != r0) {
                continue;
            }
            let g = Poly::monomial(ring, Monomial::new(r0), ring.field().one());
            if let Some(red) = detect_power_pattern(b, v, k, &g, None, namer) {
                found.push(((red.reduced.total_degree(), red.reduced.nterms()), red));
            }
        }
    }
    // stable: equal keys keep the (larger k, lower index) search order
    found.sort_by_key(|(key, _)| *key);
    found.into_iter().map(|(_, r)| r).collect()
}

pub fn auto_power_pattern(b: &Poly, namer: Namer) -> Option<Reduction> {
    power_pattern_candidates(b, namer).into_iter().next()
}

/// Reduction patterns supplied by the caller.
#[derive(Debug, Clone, Default)]
pub struct Hints {
    pub vars: Vec<usize>,
    pub g: Option<Poly>,
    pub k: Option<u64>,
    pub f1: Option<Poly>,
    pub f2: Option<Poly>,
}

impl Hints {
    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.g.is_none() && self.k.is_none()
    }
}

fn hinted(b: &Poly, h: &Hints, namer: Namer) -> Option<Reduction> {
    let one = Poly::one(b.ring());
    let g = h.g.clone().unwrap_or(one);
    match h.k {
        Some(k) => {
            let v = *h.vars.first()?;
            let hint = match (&h.f1, &h.f2) {
                (Some(a), Some(c)) => Some((a, c)),
                _ => None,
            };
            detect_power_pattern(b, v, k, &g, hint, namer)
        }
        None => detect_divisor_pattern(b, &h.vars, &g, namer),
    }
}

pub const STEP_CAP: usize = 32;

/// Reductions tried along a pass before settling for the first chain.
pub const SEARCH_BUDGET: usize = 64;

#[derive(Debug, Clone)]
pub struct ReductionPass {
    pub reduced: Poly,
    pub trail: Vec<Reduction>,
    pub capped: bool,
}

/// Applicable reductions in the fixed order: hints (if any), linear solve,
/// weighted homogeneity, then the power patterns in characteristic `p`.
/// Only the power patterns can yield more than one candidate.
pub fn reduction_candidates(
    b: &Poly,
    hints: Option<&Hints>,
    namer: Namer,
) -> Result<Vec<Reduction>> {
    if let Some(h) = hints.filter(|h| !h.is_empty()) {
        if let Some(r) = hinted(b, h, namer) {
            return Ok(vec![r]);
        }
    }
    if let Some(r) = detect_linear_variable(b) {
        return Ok(vec![r]);
    }
    let mut out = Vec::new();
    if let Some(w) = weighted_homogeneous_weights(b) {
        out.push(apply_weight_reduction(b, &w, namer)?);
    }
    out.extend(power_pattern_candidates(b, namer));
    Ok(out)
}

pub fn reduction_step(b: &Poly, hints: Option<&Hints>, namer: Namer) -> Result<Option<Reduction>> {
    Ok(reduction_candidates(b, hints, namer)?.into_iter().next())
}

struct Chain {
    trail: Vec<Reduction>,
    reduced: Poly,
    solved: bool,
    capped: bool,
}

fn search(
    cur: &Poly,
    step: usize,
    hints: Option<&Hints>,
    namer: &dyn Fn(usize, usize) -> String,
    budget: &mut usize,
) -> Result<Chain> {
    if step == STEP_CAP {
        return Ok(Chain {
            trail: Vec::new(),
            reduced: cur.clone(),
            solved: false,
            capped: true,
        });
    }
    let h = if step == 0 { hints } else { None };
    let name = |j: usize| namer(step, j);
    let mut fallback: Option<Chain> = None;
    for r in reduction_candidates(cur, h, &name)? {
        if fallback.is_some() {
            if *budget == 0 {
                break;
            }
            *budget -= 1;
        }
        r.verify(cur)?;
        if r.kind == ReductionKind::LinearSolve {
            return Ok(Chain {
                reduced: r.reduced.clone(),
                trail: vec![r],
                solved: true,
                capped: false,
            });
        }
        let rest = search(&r.reduced, step + 1, hints, namer, budget)?;
        let mut trail = vec![r];
        trail.extend(rest.trail);
        let chain = Chain {
            trail,
            reduced: rest.reduced,
            solved: rest.solved,
            capped: rest.capped,
        };
        if chain.solved {
            return Ok(chain);
        }
        fallback.get_or_insert(chain);
    }
    Ok(fallback.unwrap_or(Chain {
        trail: Vec::new(),
        reduced: cur.clone(),
        solved: false,
        capped: false,
    }))
}

/// Applies reductions until nothing applies, a linear solve ends the chain,
/// or [`STEP_CAP`] steps were taken. Where several power patterns apply,
/// the alternatives are searched depth first (within [`SEARCH_BUDGET`]) for
/// a chain ending in a linear solve; otherwise the chain of first choices
/// is returned. Hints apply to the first step only. `namer(step, j)` names
/// the new variables.
pub fn reduction_pass(
    b: &Poly,
    hints: Option<&Hints>,
    namer: &dyn Fn(usize, usize) -> String,
) -> Result<ReductionPass> {
    let mut budget = SEARCH_BUDGET;
    let chain = search(b, 0, hints, namer, &mut budget)?;
    Ok(ReductionPass {
        reduced: chain.reduced,
        trail: chain.trail,
        capped: chain.capped,
    })
}
