//! Constraint sets on the generic coordinates: an ideal of equations and a
//! list of polynomials required to be nonzero.
//!
//! Membership is ideal membership through a reduced Gröbner basis under
//! graded lex; radical membership is not attempted.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::Result;
use crate::poly::{grlex_cmp, Monomial, Poly, Ring};

/// Remainder of `f` on division by `basis` (graded lex, full reduction).
pub fn reduce(f: &Poly, basis: &[Poly]) -> Poly {
    let mut p = f.clone();
    let mut r = Poly::zero(f.ring());
    let leads: Vec<(Monomial, _)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term().expect("nonzero basis element");
            (m.clone(), c.inv().expect("nonzero leading coefficient"))
        })
        .collect();
    while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let (lm, inv) = &leads[i];
                let t = Poly::monomial(f.ring(), m.div(lm), &c * inv);
                p = &p - &(&t * &basis[i]);
            }
            None => {
                let t = Poly::monomial(f.ring(), m, c);
                p = &p - &t;
                r = &r + &t;
            }
        }
    }
    r
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let (mf, cf) = f.leading_term().unwrap();
    let (mg, cg) = g.leading_term().unwrap();
    let l = mf.lcm(mg);
    let a = Poly::monomial(f.ring(), l.div(mf), cf.inv().unwrap());
    let b = Poly::monomial(f.ring(), l.div(mg), cg.inv().unwrap());
    &(&a * f) - &(&b * g)
}

fn lead(f: &Poly) -> Monomial {
    f.leading_term().unwrap().0.clone()
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// leading monomial. Pairs are processed by increasing lcm degree and pairs
/// with coprime leading monomials are skipped.
pub fn groebner(gens: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis);
        if !r.is_zero() {
            basis.push(r.make_monic());
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    loop {
        if basis.iter().any(Poly::is_constant) {
            let one = Poly::one(basis[0].ring());
            return vec![one];
        }
        pairs.sort_by(|a, b| {
            let la = lead(&basis[a.0]).lcm(&lead(&basis[a.1]));
            let lb = lead(&basis[b.0]).lcm(&lead(&basis[b.1]));
            // pop from the back: smallest lcm last
            grlex_cmp(&lb, &la).then(b.cmp(a))
        });
        let Some((i, j)) = pairs.pop() else { break };
        let (li, lj) = (lead(&basis[i]), lead(&basis[j]));
        if li.mul(&lj) == li.lcm(&lj) {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.make_monic());
            for i in 0..k {
                pairs.push((i, k));
            }
        }
    }
    interreduce(basis)
}

fn interreduce(mut basis: Vec<Poly>) -> Vec<Poly> {
    // drop elements whose leading monomial is divisible by another's
    basis.sort_by(|a, b| grlex_cmp(&lead(a), &lead(b)));
    let mut minimal: Vec<Poly> = Vec::new();
    for g in basis {
        let lg = lead(&g);
        if !minimal.iter().any(|h| lead(h).divides(&lg)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (m, c) = minimal[i].leading_term().unwrap();
        let head = Poly::monomial(minimal[i].ring(), m.clone(), c.clone());
        let tail = &minimal[i] - &head;
        out.push((&head + &reduce(&tail, &others)).make_monic());
    }
    out
}

/// `m·g ↦ rad(m)·g` for the monomial factor `m`; the zero set is unchanged.
fn squarefree_monomial_factor(f: &Poly) -> Poly {
    let Ok((m, g)) = f.monomial_content() else {
        return f.clone();
    };
    let flat = Monomial::new(m.exps().iter().map(|&e| e.min(1)).collect());
    g.mul_monomial(&flat)
}

/// `(EQ, INEQ)` over a ring of generic coordinates.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    ring: Arc<Ring>,
    eq: Vec<Poly>,
    ineq: Vec<Poly>,
    basis: Vec<Poly>,
    empty: bool,
}

impl PartialEq for ConstraintSet {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.eq == other.eq && self.ineq == other.ineq
    }
}

impl ConstraintSet {
    pub fn unconstrained(ring: &Arc<Ring>) -> ConstraintSet {
        ConstraintSet::new(ring, Vec::new(), Vec::new())
    }

    pub fn new(ring: &Arc<Ring>, eq: Vec<Poly>, ineq: Vec<Poly>) -> ConstraintSet {
        let mut eqs: Vec<Poly> = Vec::new();
        for g in eq {
            assert!(
                g.same_ring(&Poly::zero(ring)),
                "constraint in a foreign ring"
            );
            if g.is_zero() {
                continue;
            }
            let g = squarefree_monomial_factor(&g).make_monic();
            if !eqs.contains(&g) {
                eqs.push(g);
            }
        }
        let basis = groebner(&eqs);
        let mut ineqs: Vec<Poly> = Vec::new();
        for g in ineq {
            let g = g.make_monic();
            if !ineqs.contains(&g) {
                ineqs.push(g);
            }
        }
        let mut c = ConstraintSet {
            ring: ring.clone(),
            eq: eqs,
            ineq: ineqs,
            basis,
            empty: false,
        };
        c.empty = c.basis.iter().any(Poly::is_constant)
            || c.ineq.iter().any(|g| c.normal_form(g).is_zero());
        c
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn eq(&self) -> &[Poly] {
        &self.eq
    }

    pub fn ineq(&self) -> &[Poly] {
        &self.ineq
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    /// True when the part has no points: `1 ∈ EQ` or some INEQ member lies
    /// in `EQ`.
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        reduce(f, &self.basis)
    }

    pub fn vanishes(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Nonzero at every point of the part: adding `f` to EQ empties it.
    pub fn forced_nonzero(&self, f: &Poly) -> bool {
        if self.vanishes(f) {
            return false;
        }
        if self.normal_form(f).is_constant() {
            return true;
        }
        self.with_eq(f).is_empty()
    }

    pub fn with_eq(&self, f: &Poly) -> ConstraintSet {
        let mut eq = self.eq.clone();
        eq.push(f.clone());
        ConstraintSet::new(&self.ring, eq, self.ineq.clone())
    }

    pub fn with_ineq(&self, f: &Poly) -> ConstraintSet {
        let mut ineq = self.ineq.clone();
        if !f.is_constant() {
            ineq.push(f.clone());
        }
        ConstraintSet::new(&self.ring, self.eq.clone(), ineq)
    }

    /// The `f = 0` and `f ≠ 0` parts, `None` where a part is empty.
    pub fn split(&self, f: &Poly) -> (Option<ConstraintSet>, Option<ConstraintSet>) {
        let zero = if self.vanishes(f) {
            Some(self.clone())
        } else {
            Some(self.with_eq(f)).filter(|c| !c.is_empty())
        };
        let nonzero = if self.vanishes(f) {
            None
        } else if self.ineq.iter().any(|g| *g == f.make_monic()) {
            Some(self.clone())
        } else {
            Some(self.with_ineq(f)).filter(|c| !c.is_empty())
        };
        let alive = |c: Option<ConstraintSet>| c.filter(|_| !self.empty);
        (alive(zero), alive(nonzero))
    }

    /// Re-expresses the constraints in a ring containing these variables.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<ConstraintSet> {
        let eq = self
            .eq
            .iter()
            .map(|g| g.embed(target))
            .collect::<Result<_>>()?;
        let ineq = self
            .ineq
            .iter()
            .map(|g| g.embed(target))
            .collect::<Result<_>>()?;
        Ok(ConstraintSet::new(target, eq, ineq))
    }

    /// Canonical ordering for stable output.
    pub fn sorted_eq(&self) -> Vec<Poly> {
        let mut v = self.eq.clone();
        v.sort_by(|a, b| cmp_poly(a, b));
        v
    }
}

fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    a.to_string().cmp(&b.to_string())
}
