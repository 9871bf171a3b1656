//! Translation to a generic point and the partition of a part by initial
//! monomial sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Ring};

/// `B(a, y) = b(a + y)` together with the part it is considered on.
#[derive(Debug, Clone)]
pub struct LocalizedPoly {
    pub b: Poly,
    pub constraints: ConstraintSet,
}

impl LocalizedPoly {
    pub fn ring(&self) -> &Arc<Ring> {
        self.b.ring()
    }
}

/// Translates `b` (main variables `x_j`, parameters including the generic
/// coordinates `own[j]`) to `y_j = x_j - a_j`.
pub fn translate(
    b: &Poly,
    own: &[usize],
    c: &ConstraintSet,
    y_names: Vec<String>,
) -> Result<LocalizedPoly> {
    if c.is_empty() {
        return Err(Error::Degenerate("translation on an empty part".into()));
    }
    let ring = b.ring();
    let n = ring.n_main();
    if own.len() != n || y_names.len() != n {
        return Err(Error::Invalid("one generic coordinate per variable".into()));
    }
    let target = Ring::with_params(ring.field(), y_names, ring.params().to_vec());
    let mut images = Vec::with_capacity(ring.nvars());
    for (j, &a) in own.iter().enumerate() {
        images.push(&Poly::var(&target, n + a) + &Poly::var(&target, j));
    }
    for i in 0..ring.params().len() {
        images.push(Poly::var(&target, n + i));
    }
    let big = b.compose(&target, &images)?;
    let c = c.with_eq(&b.at_point(own)?);
    if c.is_empty() {
        return Err(Error::Degenerate("generic point is not on b = 0".into()));
    }
    Ok(LocalizedPoly {
        b: big,
        constraints: c,
    })
}

/// `B` with every coefficient replaced by its normal form on `c`.
pub fn reduce_coefficients(b: &Poly, c: &ConstraintSet) -> Poly {
    let parts: BTreeMap<Monomial, Poly> = b
        .split_main()
        .into_iter()
        .map(|(m, coef)| (m, c.normal_form(&coef)))
        .filter(|(_, coef)| !coef.is_zero())
        .collect();
    Poly::from_split(b.ring(), &parts)
}

fn minimal(live: &[Monomial]) -> Vec<Monomial> {
    live.iter()
        .filter(|m| !live.iter().any(|o| o != *m && o.divides(m)))
        .cloned()
        .collect()
}

/// Divisibility-minimal support monomials whose coefficient does not vanish
/// on `c`, in display order.
pub fn initial_monomials(b: &Poly, c: &ConstraintSet) -> Result<Vec<Monomial>> {
    let live: Vec<Monomial> = b
        .split_main()
        .into_iter()
        .filter(|(_, coef)| !c.vanishes(coef))
        .map(|(m, _)| m)
        .collect();
    if live.is_empty() {
        return Err(Error::Degenerate(
            "every coefficient vanishes on the part".into(),
        ));
    }
    Ok(minimal(&live))
}

#[derive(Debug, Clone)]
pub struct InitPart {
    pub constraints: ConstraintSet,
    pub init: Vec<Monomial>,
}

/// Splits `c` until every part has a constant init set. Candidates are the
/// currently minimal live monomials in display order; the nonzero branch of
/// each split is listed first.
pub fn partition_by_init(b: &Poly, c: &ConstraintSet) -> Vec<InitPart> {
    let coeffs = b.split_main();
    let mut out = Vec::new();
    if !c.is_empty() {
        refine(&coeffs, c.clone(), &mut out);
    }
    out
}

fn refine(coeffs: &BTreeMap<Monomial, Poly>, c: ConstraintSet, out: &mut Vec<InitPart>) {
    let live: Vec<Monomial> = coeffs
        .iter()
        .filter(|(_, coef)| !c.vanishes(coef))
        .map(|(m, _)| m.clone())
        .collect();
    if live.is_empty() {
        // b vanishes identically on this part; nothing to resolve there
        return;
    }
    let init = minimal(&live);
    let open = init.iter().find(|m| !c.forced_nonzero(&coeffs[*m]));
    match open {
        None => out.push(InitPart {
            constraints: c,
            init,
        }),
        Some(m) => {
            let (zero, nonzero) = c.split(&coeffs[m]);
            if let Some(nz) = nonzero {
                refine(coeffs, nz, out);
            }
            if let Some(z) = zero {
                refine(coeffs, z, out);
            }
        }
    }
}
