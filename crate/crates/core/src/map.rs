//! Birational maps between node coordinate rings.
//!
//! `phi` gives the image of each source main variable in the target ring and
//! `psi` the image of each target main variable in the source ring.
//! Parameters pass through by name.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Frac, Monomial, Poly, Ring};

/// Data of a translated monomial map `x_i = a_i + Π_j z_j^{M_ij}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialData {
    /// Per source main variable, a polynomial in the source parameters.
    pub translation: Vec<Poly>,
    pub matrix: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct BirationalMap {
    pub source: Arc<Ring>,
    pub target: Arc<Ring>,
    /// Image of each source main variable, in the target ring.
    pub phi: Vec<Frac>,
    /// `(target variable index, image in the source ring)`; target
    /// variables not listed pass through by name.
    pub psi: Vec<(usize, Frac)>,
    pub monomial: Option<MonomialData>,
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn is_identity(m: &[Vec<i64>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
}

fn by_name(name: &str, to: &Arc<Ring>) -> Option<Frac> {
    to.index_of(name).map(|i| Frac::from_poly(Poly::var(to, i)))
}

fn eval_poly(f: &Poly, to: &Arc<Ring>, images: &[Option<Frac>]) -> Result<Frac> {
    let mut concrete = Vec::with_capacity(images.len());
    for (i, img) in images.iter().enumerate() {
        match img {
            Some(x) => concrete.push(x.clone()),
            None if f.mentions(i) => {
                return Err(Error::UnknownVariable(f.ring().vars()[i].clone()))
            }
            None => concrete.push(Frac::zero(to)),
        }
    }
    f.eval_frac(to, &concrete)
}

fn eval(f: &Frac, to: &Arc<Ring>, images: &[Option<Frac>]) -> Result<Frac> {
    let n = eval_poly(&f.num, to, images)?;
    if f.is_poly() {
        return Ok(n);
    }
    n.div(&eval_poly(&f.den, to, images)?)
}

/// True when the numerator of `f` is zero or divisible by `b`.
fn vanishes_mod(f: &Frac, b: Option<&Poly>) -> bool {
    if f.is_zero() {
        return true;
    }
    let Some(b) = b.filter(|b| !b.is_zero()) else {
        return false;
    };
    let Ok((_, num)) = f.num.monomial_content() else {
        return true;
    };
    let Ok(b) = b.embed(num.ring()) else {
        return false;
    };
    let (_, b) = b.monomial_content().expect("nonzero");
    num.exact_div(&b).is_some()
}

impl BirationalMap {
    /// `x_i ↦ translation_i + Π_j z_{cols[j]}^{matrix[i][j]}` with the
    /// inverse `z_{cols[j]} ↦ Π_i (x_i - translation_i)^{inverse[j][i]}`.
    pub fn monomial_on(
        source: &Arc<Ring>,
        target: &Arc<Ring>,
        translation: Vec<Poly>,
        matrix: Vec<Vec<i64>>,
        inverse: Vec<Vec<i64>>,
        cols: &[usize],
    ) -> Result<BirationalMap> {
        let n = source.n_main();
        if translation.len() != n || matrix.len() != n || inverse.len() != cols.len() {
            return Err(Error::Invalid("monomial map dimensions".into()));
        }
        let mut phi = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0; target.nvars()];
            for (j, &c) in cols.iter().enumerate() {
                e[c] = matrix[i][j];
            }
            let mono = Poly::monomial(target, Monomial::new(e), target.field().one());
            phi.push(Frac::from_poly(&translation[i].embed(target)? + &mono));
        }
        let mut psi = Vec::with_capacity(cols.len());
        for (row, &c) in inverse.iter().zip(cols) {
            let mut acc = Frac::from_poly(Poly::one(source));
            for (i, &e) in row.iter().enumerate() {
                if e != 0 {
                    let base = &Poly::var(source, i) - &translation[i];
                    acc = acc.mul(&Frac::from_poly(base).powi(e)?);
                }
            }
            psi.push((c, acc));
        }
        Ok(BirationalMap {
            source: source.clone(),
            target: target.clone(),
            phi,
            psi,
            monomial: Some(MonomialData {
                translation,
                matrix,
                inverse,
            }),
        })
    }

    /// [`BirationalMap::monomial_on`] with the target main variables as
    /// columns.
    pub fn monomial(
        source: &Arc<Ring>,
        target: &Arc<Ring>,
        translation: Vec<Poly>,
        matrix: Vec<Vec<i64>>,
        inverse: Vec<Vec<i64>>,
    ) -> Result<BirationalMap> {
        let cols: Vec<usize> = (0..target.n_main()).collect();
        Self::monomial_on(source, target, translation, matrix, inverse, &cols)
    }

    /// A map given by explicit rational images in both directions.
    pub fn general(
        source: &Arc<Ring>,
        target: &Arc<Ring>,
        phi: Vec<Frac>,
        psi: Vec<(usize, Frac)>,
    ) -> BirationalMap {
        BirationalMap {
            source: source.clone(),
            target: target.clone(),
            phi,
            psi,
            monomial: None,
        }
    }

    fn forward_images(&self) -> Vec<Option<Frac>> {
        let mut out: Vec<Option<Frac>> = self.phi.iter().cloned().map(Some).collect();
        for name in self.source.params() {
            out.push(by_name(name, &self.target));
        }
        out
    }

    fn backward_images(&self) -> Vec<Option<Frac>> {
        let mut out: Vec<Option<Frac>> = self
            .target
            .vars()
            .iter()
            .map(|name| by_name(name, &self.source))
            .collect();
        for (i, f) in &self.psi {
            out[*i] = Some(f.clone());
        }
        out
    }

    /// `φ(f)` for `f` in the source ring.
    pub fn apply(&self, f: &Frac) -> Result<Frac> {
        eval(f, &self.target, &self.forward_images())
    }

    pub fn apply_poly(&self, f: &Poly) -> Result<Frac> {
        self.apply(&Frac::from_poly(f.clone()))
    }

    /// `ψ(g)` for `g` in the target ring.
    pub fn pull_back(&self, g: &Frac) -> Result<Frac> {
        eval(g, &self.source, &self.backward_images())
    }

    /// Formal round trip: `ψ∘φ = id` on source main variables and `φ∘ψ = id`
    /// on the variables `ψ` lists. Monomial maps are checked in the monomial
    /// group (with `x_i - a_i` as the coordinate).
    pub fn verify_round_trip(&self) -> Result<()> {
        self.verify_round_trip_mod(None, None)
    }

    /// Round trip up to the defining polynomials: each defect must have a
    /// numerator divisible by `b_source` (resp. `b_target`).
    pub fn verify_round_trip_mod(
        &self,
        b_source: Option<&Poly>,
        b_target: Option<&Poly>,
    ) -> Result<()> {
        if let Some(d) = &self.monomial {
            if !is_identity(&mat_mul(&d.matrix, &d.inverse))
                || !is_identity(&mat_mul(&d.inverse, &d.matrix))
            {
                return Err(Error::Verification("M·M⁻¹ ≠ I".into()));
            }
            return Ok(());
        }
        for (i, img) in self.phi.iter().enumerate() {
            let back = self.pull_back(img)?;
            let x = Frac::from_poly(Poly::var(&self.source, i));
            if !vanishes_mod(&back.sub(&x), b_source) {
                return Err(Error::Verification(format!(
                    "ψ(φ({})) = {back}",
                    self.source.vars()[i]
                )));
            }
        }
        for (j, img) in &self.psi {
            let fwd = self.apply(img)?;
            let z = Frac::from_poly(Poly::var(&self.target, *j));
            if !vanishes_mod(&fwd.sub(&z), b_target) {
                return Err(Error::Verification(format!(
                    "φ(ψ({})) = {fwd}",
                    self.target.vars()[*j]
                )));
            }
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &BirationalMap) -> Result<BirationalMap> {
        let phi = self
            .phi
            .iter()
            .map(|f| next.apply(&f.embed_params(&next.source)?))
            .collect::<Result<Vec<_>>>()?;
        let mut psi = Vec::new();
        for (j, g) in &next.psi {
            psi.push((*j, self.pull_back(&g.embed_params(&self.target)?)?));
        }
        // target variables that `next` passes through by name
        for (i, name) in next.target.vars().iter().enumerate() {
            if psi.iter().any(|(j, _)| *j == i) {
                continue;
            }
            if let Some((_, f)) = self
                .psi
                .iter()
                .find(|(k, _)| self.target.vars()[*k] == *name)
            {
                psi.push((i, f.clone()));
            }
        }
        psi.sort_by_key(|(i, _)| *i);
        Ok(BirationalMap::general(&self.source, &next.target, phi, psi))
    }

    pub fn phi_strings(&self) -> Vec<(String, String)> {
        self.source
            .main_vars()
            .iter()
            .zip(&self.phi)
            .map(|(v, f)| (v.clone(), f.to_string()))
            .collect()
    }

    pub fn psi_strings(&self) -> Vec<(String, String)> {
        self.psi
            .iter()
            .map(|(i, f)| (self.target.vars()[*i].clone(), f.to_string()))
            .collect()
    }
}

impl Frac {
    /// Moves into a ring with the same variable names.
    fn embed_params(&self, ring: &Arc<Ring>) -> Result<Frac> {
        if Arc::ptr_eq(self.ring(), ring) || **self.ring() == **ring {
            Ok(self.clone())
        } else {
            self.embed(ring)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_frac, parse_poly};
    use crate::scalar::FieldSpec;

    fn ring(main: &[&str], params: &[&str]) -> Arc<Ring> {
        Ring::with_params(
            FieldSpec::RATIONALS,
            main.iter().map(|s| s.to_string()).collect(),
            params.iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn translated_monomial_map() {
        let src = ring(&["x0", "x1"], &["a0", "a1"]);
        let dst = ring(&["u", "t"], &["a0", "a1"]);
        let tr = vec![
            parse_poly(&src, "a0").unwrap(),
            parse_poly(&src, "a1").unwrap(),
        ];
        let m = BirationalMap::monomial(
            &src,
            &dst,
            tr,
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![-1, 1], vec![1, 0]],
        )
        .unwrap();
        m.verify_round_trip().unwrap();
        assert_eq!(m.phi[1].to_string(), "a1 + u*t");
        let g = parse_frac(&dst, "u").unwrap();
        let back = m.pull_back(&g).unwrap();
        assert!(back.equals(&parse_frac(&src, "(x1 - a1)/(x0 - a0)").unwrap()));
        let image = m.apply_poly(&parse_poly(&src, "x1 - a1").unwrap()).unwrap();
        assert_eq!(image.into_poly().unwrap(), parse_poly(&dst, "u*t").unwrap());
    }

    #[test]
    fn general_round_trip_and_composition() {
        let a = ring(&["x", "y"], &[]);
        let b = ring(&["p", "q"], &[]);
        let c = ring(&["s", "t"], &[]);
        let f = BirationalMap::general(
            &a,
            &b,
            vec![
                parse_frac(&b, "p").unwrap(),
                parse_frac(&b, "q - p^2").unwrap(),
            ],
            vec![
                (0, parse_frac(&a, "x").unwrap()),
                (1, parse_frac(&a, "y + x^2").unwrap()),
            ],
        );
        f.verify_round_trip().unwrap();
        let g = BirationalMap::monomial(
            &b,
            &c,
            vec![Poly::zero(&b), Poly::zero(&b)],
            vec![vec![1, 0], vec![1, 1]],
            vec![vec![1, 0], vec![-1, 1]],
        )
        .unwrap();
        let h = f.then(&g).unwrap();
        h.verify_round_trip().unwrap();
        assert_eq!(h.phi[1].to_string(), "-s^2 + s*t");

        let bad = BirationalMap::general(
            &a,
            &b,
            vec![parse_frac(&b, "p").unwrap(), parse_frac(&b, "q").unwrap()],
            vec![
                (0, parse_frac(&a, "x").unwrap()),
                (1, parse_frac(&a, "2*y").unwrap()),
            ],
        );
        assert!(matches!(
            bad.verify_round_trip(),
            Err(Error::Verification(_))
        ));
    }
}
