//! Weight sequences on a support, unimodular completions and the arc maps
//! they induce.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::localize::reduce_coefficients;
use crate::map::{is_identity, mat_mul, BirationalMap};
use crate::poly::{Monomial, Poly, Ring};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightSequence {
    pub w: Vec<i64>,
    pub min_value: i64,
}

fn dot(a: &[i64], w: &[i64]) -> i64 {
    a.iter().zip(w).map(|(x, y)| x * y).sum()
}

/// Minimum of `w` over the support, if at least two distinct monomials
/// attain it.
fn tie_minimum(support: &[Monomial], w: &[i64]) -> Option<i64> {
    let values: Vec<i64> = support.iter().map(|m| dot(m.exps(), w)).collect();
    let min = *values.iter().min()?;
    let hits = values.iter().filter(|&&v| v == min).count();
    (hits >= 2).then_some(min)
}

fn gcd_all(w: &[i64]) -> i64 {
    w.iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn distinct(support: &[Monomial]) -> Vec<Monomial> {
    let set: BTreeSet<Monomial> = support.iter().cloned().collect();
    set.into_iter().collect()
}

/// Enumeration bound used when none is given.
pub fn default_bound(support: &[Monomial]) -> i64 {
    let max = support
        .iter()
        .flat_map(|m| m.exps().iter().copied())
        .max()
        .unwrap_or(0);
    16.max(2 * max)
}

/// Every primitive positive `w` with entries `≤ bound` satisfying the tie
/// condition, in lexicographic order.
pub fn bounded_weight_search(support: &[Monomial], bound: i64) -> Vec<WeightSequence> {
    let support = distinct(support);
    let n = support.first().map_or(0, Monomial::len);
    let mut out = Vec::new();
    if n == 0 || bound < 1 {
        return out;
    }
    let mut w = vec![1i64; n];
    loop {
        if gcd_all(&w) == 1 {
            if let Some(min) = tie_minimum(&support, &w) {
                out.push(WeightSequence {
                    w: w.clone(),
                    min_value: min,
                });
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if w[i] < bound {
                w[i] += 1;
                break;
            }
            w[i] = 1;
        }
    }
}

/// Inner normals of the compact edges of the Newton polygon of a
/// two-variable support.
pub fn newton_polygon_normals(support: &[Monomial]) -> Vec<WeightSequence> {
    let support = distinct(support);
    let mut found = BTreeSet::new();
    for p in &support {
        for q in &support {
            let (dx, dy) = (q.exps()[0] - p.exps()[0], q.exps()[1] - p.exps()[1]);
            if dx * dy >= 0 {
                continue;
            }
            let g = dx.abs().gcd(&dy.abs());
            let w = vec![dy.abs() / g, dx.abs() / g];
            let v = dot(p.exps(), &w);
            if support.iter().all(|m| dot(m.exps(), &w) >= v) {
                found.insert(WeightSequence { w, min_value: v });
            }
        }
    }
    found.into_iter().collect()
}

/// Valid weight sequences with entries `≤ bound`. Two-variable supports use
/// the exact polygon computation; larger ones the bounded search.
pub fn valid_weight_sequences(support: &[Monomial], bound: i64) -> Result<Vec<WeightSequence>> {
    let support = distinct(support);
    if support.len() < 2 {
        return Err(Error::Invalid(
            "a weight sequence needs two monomials".into(),
        ));
    }
    if support[0].len() == 2 {
        let mut normals = newton_polygon_normals(&support);
        normals.retain(|w| w.w.iter().all(|&x| x <= bound));
        return Ok(normals);
    }
    Ok(bounded_weight_search(&support, bound))
}

/// True if `w` is the sum of two nonzero non-negative vectors that each
/// satisfy the tie condition on `support`.
fn decomposes(support: &[Monomial], w: &[i64]) -> bool {
    let n = w.len();
    let mut u = vec![0i64; n];
    loop {
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            if u[i] < w[i] {
                u[i] += 1;
                break;
            }
            u[i] = 0;
            i += 1;
        }
        if u == w {
            continue;
        }
        let v: Vec<i64> = w.iter().zip(&u).map(|(a, b)| a - b).collect();
        if tie_minimum(support, &u).is_some() && tie_minimum(support, &v).is_some() {
            return true;
        }
    }
}

/// Candidates that do not split as a sum of two valid sequences, with no
/// fallback.
pub fn relaxed_minimal(cands: &[WeightSequence], support: &[Monomial]) -> Vec<WeightSequence> {
    let support = distinct(support);
    cands
        .iter()
        .filter(|c| !decomposes(&support, &c.w))
        .cloned()
        .collect()
}

/// Drops every candidate that splits as a sum of two smaller tie vectors.
/// Summands may have zero entries, so `(7,3,2) = (6,3,2) + (1,0,0)` is not
/// minimal when `(1,0,0)` ties two monomials. If that drops everything, the
/// entrywise-minimal candidates are returned.
pub fn minimal_weight_sequences(
    cands: &[WeightSequence],
    support: &[Monomial],
) -> Vec<WeightSequence> {
    let kept = relaxed_minimal(cands, support);
    if !kept.is_empty() || cands.is_empty() {
        return kept;
    }
    // A variable outside every tie lets everything split off a unit vector;
    // keep the entrywise-minimal candidates instead.
    let below = |a: &[i64], b: &[i64]| a != b && a.iter().zip(b).all(|(x, y)| x <= y);
    cands
        .iter()
        .filter(|c| !cands.iter().any(|o| below(&o.w, &c.w)))
        .cloned()
        .collect()
}

/// `M` with last column `w / gcd(w)` and its integral inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMap {
    pub matrix: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
    pub gcd: i64,
}

impl UnimodularMap {
    pub fn column(&self) -> usize {
        self.matrix.len() - 1
    }

    pub fn det(&self) -> i64 {
        det(&self.matrix)
    }
}

fn to_rat(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect()
}

pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a = to_rat(m);
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        for r in c + 1..n {
            let f = a[r][c].clone() / a[c][c].clone();
            for k in c..n {
                let t = a[c][k].clone() * f.clone();
                a[r][k] -= t;
            }
        }
    }
    d.to_integer().to_i64().expect("determinant fits")
}

/// Exact inverse of an integer matrix, if it is integral.
pub fn int_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a = to_rat(m);
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let piv = a[c][c].clone();
        for k in 0..n {
            a[c][k] = a[c][k].clone() / piv.clone();
            inv[c][k] = inv[c][k].clone() / piv.clone();
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..n {
                    let t = a[c][k].clone() * f.clone();
                    a[r][k] -= t;
                    let t = inv[c][k].clone() * f.clone();
                    inv[r][k] -= t;
                }
            }
        }
    }
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| x.is_integer().then(|| x.to_integer().to_i64()).flatten())
                .collect()
        })
        .collect()
}

/// `(x, y)` with `a x + b y = 1` and `|x| + |y|` minimal (first in a fixed
/// scan on ties).
fn bezout_min(a: i64, b: i64) -> (i64, i64) {
    let (g, x0, y0) = ext_gcd(a, b);
    debug_assert_eq!(g, 1);
    let mut best = (x0, y0);
    // solutions are (x0 + k b, y0 - k a)
    let span = (x0.abs() + y0.abs()) / a.min(b).max(1) + 2;
    for k in -span..=span {
        let cand = (x0 + k * b, y0 - k * a);
        if cand.0.abs() + cand.1.abs() < best.0.abs() + best.1.abs() {
            best = cand;
        }
    }
    best
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Rows of `M⁻¹` built around the coprime pair `(p, q)`.
fn pair_inverse(w: &[i64], p: usize, q: usize) -> Vec<Vec<i64>> {
    let n = w.len();
    let (x, y) = bezout_min(w[p], w[q]);
    let mut unit = vec![0; n];
    unit[p] = x;
    unit[q] = y;
    let mut kernel = vec![0; n];
    kernel[p] = w[q];
    kernel[q] = -w[p];
    let mut rows: Vec<Vec<i64>> = (0..n)
        .rev()
        .filter(|&i| i != p && i != q)
        .map(|i| {
            let mut r: Vec<i64> = unit.iter().map(|u| -w[i] * u).collect();
            r[i] += 1;
            r
        })
        .collect();
    let mut with = rows.clone();
    with.push(kernel.clone());
    with.push(unit.clone());
    if det(&with) < 0 {
        kernel.iter_mut().for_each(|k| *k = -*k);
    }
    let pos = if kernel[p] > 0 { p } else { q };
    let period = kernel[pos];
    for r in rows.iter_mut() {
        let k = r[pos].div_euclid(period);
        for (x, kv) in r.iter_mut().zip(&kernel) {
            *x -= k * kv;
        }
    }
    rows.push(kernel);
    rows.push(unit);
    rows
}

/// Extended-Euclid reduction of `w` to `e_last`, for weights with no
/// coprime pair.
fn euclid_inverse(w: &[i64]) -> Vec<Vec<i64>> {
    let n = w.len();
    let mut v = w.to_vec();
    let mut ops: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| v[i] != 0).collect();
        if nz.len() == 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| (v[i].abs(), i)).unwrap();
        for &i in &nz {
            if i != piv {
                let q = v[i].div_euclid(v[piv]);
                v[i] -= q * v[piv];
                let pr = ops[piv].clone();
                for (x, y) in ops[i].iter_mut().zip(&pr) {
                    *x -= q * y;
                }
            }
        }
    }
    let k = (0..n).find(|&i| v[i] != 0).unwrap();
    let last = ops.remove(k);
    ops.push(last);
    ops
}

/// Adds the least non-negative multiple of the weight column to each other
/// column that has a negative entry. Weights are positive, so this always
/// ends non-negative and keeps the determinant.
fn shift_nonnegative(m: &mut [Vec<i64>]) {
    let n = m.len();
    for c in 0..n - 1 {
        let k = (0..n)
            .filter(|&r| m[r][c] < 0)
            .map(|r| (-m[r][c] + m[r][n - 1] - 1) / m[r][n - 1])
            .max()
            .unwrap_or(0);
        for r in m.iter_mut() {
            r[c] += k * r[n - 1];
        }
    }
}

/// Column clean-up for the Euclid fallback: each non-weight column is moved
/// by multiples of the weight column to minimal `(L1, lex)` with a positive
/// leading entry.
fn normalize_columns(m: &mut [Vec<i64>]) {
    let n = m.len();
    let w: Vec<i64> = m.iter().map(|r| r[n - 1]).collect();
    for c in 0..n - 1 {
        let col: Vec<i64> = m.iter().map(|r| r[c]).collect();
        let mut best: Option<Vec<i64>> = None;
        let span = col.iter().map(|x| x.abs()).max().unwrap_or(0) + 2;
        for k in -span..=span {
            let mut cand: Vec<i64> = col.iter().zip(&w).map(|(x, y)| x - k * y).collect();
            if cand.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                cand.iter_mut().for_each(|x| *x = -*x);
            }
            let key = |v: &Vec<i64>| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone());
            if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                best = Some(cand);
            }
        }
        for (r, x) in m.iter_mut().zip(best.unwrap()) {
            r[c] = x;
        }
    }
}

/// Completes `w / gcd(w)` to a unimodular matrix whose last column is the
/// reduced weight vector (the column of the new distinguished variable).
///
/// With a unit weight at `k`, `x_k ↦ t` and the other variables, taken in
/// descending index order, become `z_0, z_1, ...` times `t^{w_i}`. Otherwise
/// every coprime pair of weights gives a candidate completion; entrywise
/// non-negative matrices are preferred, then small entry sums.
pub fn unimodular_extend(w: &[i64]) -> Result<UnimodularMap> {
    if w.is_empty() || w.iter().any(|&x| x <= 0) {
        return Err(Error::Invalid("weights must be positive".into()));
    }
    let g = gcd_all(w);
    let w: Vec<i64> = w.iter().map(|x| x / g).collect();
    let n = w.len();

    let matrix = if let Some(k) = w.iter().position(|&x| x == 1) {
        let mut m = vec![vec![0i64; n]; n];
        m[k][n - 1] = 1;
        for (slot, i) in (0..n).rev().filter(|&i| i != k).enumerate() {
            m[i][slot] = 1;
            m[i][n - 1] = w[i];
        }
        m
    } else {
        let mut best: Option<(bool, i64, Vec<Vec<i64>>)> = None;
        for p in 0..n {
            for q in p + 1..n {
                if w[p].gcd(&w[q]) != 1 {
                    continue;
                }
                let inv = pair_inverse(&w, p, q);
                let mut m = int_inverse(&inv).expect("unimodular by construction");
                shift_nonnegative(&mut m);
                let neg = m.iter().flatten().any(|&x| x < 0);
                let sum: i64 = m.iter().flatten().map(|x| x.abs()).sum();
                if best
                    .as_ref()
                    .is_none_or(|(bn, bs, _)| (neg, sum) < (*bn, *bs))
                {
                    best = Some((neg, sum, m));
                }
            }
        }
        match best {
            Some((_, _, m)) => m,
            None => {
                let mut m = int_inverse(&euclid_inverse(&w)).expect("unimodular");
                normalize_columns(&mut m);
                m
            }
        }
    };
    let inverse =
        int_inverse(&matrix).ok_or_else(|| Error::Verification("M not unimodular".into()))?;
    debug_assert!(is_identity(&mat_mul(&matrix, &inverse)));
    Ok(UnimodularMap {
        matrix,
        inverse,
        gcd: g,
    })
}

/// `x_i ↦ translation_i + Π_j z_j^{M_ij}`.
pub fn build_arc_map(
    source: &Arc<Ring>,
    target: &Arc<Ring>,
    translation: Vec<Poly>,
    m: &UnimodularMap,
) -> Result<BirationalMap> {
    let map = BirationalMap::monomial(
        source,
        target,
        translation,
        m.matrix.clone(),
        m.inverse.clone(),
    )?;
    map.verify_round_trip()?;
    Ok(map)
}

#[derive(Debug, Clone)]
pub struct ArcImage {
    pub factor: Monomial,
    pub b: Poly,
}

/// `φ(b)` with coefficients reduced on `part`, split as `factor · b_l`.
pub fn apply_arc(b: &Poly, map: &BirationalMap, part: &ConstraintSet) -> Result<ArcImage> {
    let image = map
        .apply_poly(b)?
        .into_poly()
        .ok_or_else(|| Error::Invalid("arc image is not a polynomial".into()))?;
    let part = part.embed(&map.target.param_ring())?;
    let reduced = reduce_coefficients(&image, &part);
    let (factor, bl) = reduced.monomial_content()?;
    if bl.is_constant() {
        return Err(Error::Degenerate(format!("cofactor {bl} is constant")));
    }
    Ok(ArcImage { factor, b: bl })
}
