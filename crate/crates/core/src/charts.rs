//! Multi-homogenization and the `2^{d+1}` affine charts of `(P^1)^{d+1}`.
//!
//! In chart `K` the pair `(g_j, h_j)` becomes `(x_{K,j}, 1)` when bit `j` of
//! `K` is clear and `(1, x_{K,j})` when it is set, so `x_j = x_{K,j}^{±1}`.

use std::sync::Arc;

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::map::BirationalMap;
use crate::poly::{Monomial, Poly, Ring};
use crate::scalar::Scalar;

/// `b*` in `g_0, h_0, ..., g_d, h_d`.
pub fn multi_homogenize(b: &Poly) -> Result<Poly> {
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ring = b.ring();
    let n = ring.n_main();
    if ring.nvars() != n || !b.is_laurent_free() {
        return Err(Error::Invalid(
            "b must be a polynomial in main variables only".into(),
        ));
    }
    let mut names = Vec::with_capacity(2 * n);
    for v in ring.vars() {
        names.push(format!("g_{v}"));
        names.push(format!("h_{v}"));
    }
    let star_ring = Ring::new(ring.field(), names);
    let degs: Vec<i64> = (0..n).map(|i| b.degree_in(i)).collect();
    let terms = b.terms().map(|(m, c)| {
        let mut e = Vec::with_capacity(2 * n);
        for (i, &a) in m.exps().iter().enumerate() {
            e.push(a);
            e.push(degs[i] - a);
        }
        (Monomial::new(e), c.clone())
    });
    Ok(Poly::from_terms(&star_ring, terms))
}

pub fn bits(k: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| (k >> j) & 1 == 1).collect()
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub index: usize,
    pub bits: Vec<bool>,
    /// Polynomial in the chart ring (main `x_{K,j}`, parameters `a_{K,j}`).
    pub b: Poly,
    /// `φ_K(b) = factor · b_K`.
    pub factor: Monomial,
    pub constraints: ConstraintSet,
    pub map: BirationalMap,
    /// Nonzero constant that the constant term of `b_K` is forced to equal
    /// on an empty chart.
    pub empty_witness: Option<Scalar>,
}

impl Chart {
    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

pub fn default_names(k: usize, n: usize) -> (Vec<String>, Vec<String>) {
    (
        (0..n).map(|j| format!("x{k}_{j}")).collect(),
        (0..n).map(|j| format!("a{k}_{j}")).collect(),
    )
}

pub fn chart(b: &Poly, k: usize) -> Result<Chart> {
    let n = b.ring().n_main();
    let (main, params) = default_names(k, n);
    chart_named(b, k, main, params)
}

/// Chart `k` with caller-chosen variable names.
pub fn chart_named(b: &Poly, k: usize, main: Vec<String>, params: Vec<String>) -> Result<Chart> {
    let ring = b.ring();
    let n = ring.n_main();
    if k >= 1 << n {
        return Err(Error::Invalid(format!("chart index {k} out of range")));
    }
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let bits = bits(k, n);
    // parameters of the source (global parameters) follow the new a's
    let mut params = params;
    params.extend(ring.params().iter().cloned());
    let target = Ring::with_params(ring.field(), main, params);
    let matrix: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i != j {
                        0
                    } else if bits[i] {
                        -1
                    } else {
                        1
                    }
                })
                .collect()
        })
        .collect();
    let map = BirationalMap::monomial(
        ring,
        &target,
        vec![Poly::zero(ring); n],
        matrix.clone(),
        matrix,
    )?;
    let image = map
        .apply_poly(b)?
        .into_poly()
        .expect("monomial image of a polynomial");
    let (factor, bk) = image.monomial_content()?;

    let pr = target.param_ring();
    let own: Vec<usize> = (0..n).collect();
    let mut eq: Vec<Poly> = (0..n)
        .filter(|&j| bits[j])
        .map(|j| Poly::var(&pr, j))
        .collect();
    let at_infinity = ConstraintSet::new(&pr, eq.clone(), vec![]);
    let value = bk.at_point(&own)?;
    let reduced = at_infinity.normal_form(&value);
    let empty_witness = reduced.as_constant().filter(|c| !c.is_zero());
    eq.push(value);
    let constraints = ConstraintSet::new(&pr, eq, vec![]);
    Ok(Chart {
        index: k,
        bits,
        b: bk,
        factor,
        constraints,
        map,
        empty_witness,
    })
}

pub fn all_charts(b: &Poly) -> Result<Vec<Chart>> {
    (0..1usize << b.ring().n_main())
        .map(|k| chart(b, k))
        .collect()
}

/// The chart ring's own main variables, for callers that rename.
pub fn chart_ring(chart: &Chart) -> &Arc<Ring> {
    chart.b.ring()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::scalar::FieldSpec;

    fn curve() -> Poly {
        let r = Ring::new(FieldSpec::RATIONALS, vec!["x0".into(), "x1".into()]);
        parse_poly(&r, "x0^3 + x0*x1 + x1^5").unwrap()
    }

    #[test]
    fn homogenization_examples() {
        let b = curve();
        let star = multi_homogenize(&b).unwrap();
        let expect = parse_poly(
            star.ring(),
            "g_x0^3*h_x1^5 + g_x0*h_x0^2*g_x1*h_x1^4 + h_x0^3*g_x1^5",
        )
        .unwrap();
        assert_eq!(star, expect);

        let r = Ring::new(FieldSpec::RATIONALS, vec!["x0".into()]);
        let s = multi_homogenize(&parse_poly(&r, "x0").unwrap()).unwrap();
        assert_eq!(s, parse_poly(s.ring(), "g_x0").unwrap());

        let r = Ring::new(
            FieldSpec::RATIONALS,
            vec!["u".into(), "v".into(), "w".into()],
        );
        let s = multi_homogenize(&parse_poly(&r, "u*v - w^2").unwrap()).unwrap();
        assert_eq!(
            s,
            parse_poly(s.ring(), "g_u*g_v*h_w^2 - h_u*h_v*g_w^2").unwrap()
        );
    }

    #[test]
    fn curve_charts() {
        let b = curve();
        let charts = all_charts(&b).unwrap();
        assert_eq!(charts.len(), 4);

        let c3 = &charts[3];
        assert_eq!(c3.b.to_string(), "x3_0^3 + x3_1^5 + x3_0^2*x3_1^4");
        assert_eq!(c3.factor.exps(), &[-3, -5, 0, 0]);
        let pr = c3.constraints.ring().clone();
        assert!(c3.constraints.vanishes(&Poly::var(&pr, 0)));
        assert!(c3.constraints.vanishes(&Poly::var(&pr, 1)));
        assert!(!c3.is_empty());

        assert!(charts[1].is_empty());
        assert!(charts[2].is_empty());
        assert!(charts[1].empty_witness.as_ref().unwrap().is_one());

        let c0 = &charts[0];
        assert_eq!(c0.b.to_string(), "x0_0*x0_1 + x0_0^3 + x0_1^5");
        assert_eq!(c0.constraints.eq().len(), 1);
        assert!(!c0.is_empty());
    }

    #[test]
    fn chart_identity_and_homogenization_agree() {
        let b = curve();
        let star = multi_homogenize(&b).unwrap();
        for c in all_charts(&b).unwrap() {
            // φ(b) = factor * b_K exactly
            let image = c.map.apply_poly(&b).unwrap().into_poly().unwrap();
            assert_eq!(image, c.b.mul_monomial(&c.factor));
            c.map.verify_round_trip().unwrap();
            // substituting (g,h) directly into b* gives b_K up to a monomial
            let t = c.b.ring();
            let mut images = Vec::new();
            for j in 0..2 {
                let x = Poly::var(t, j);
                let one = Poly::one(t);
                if c.bits[j] {
                    images.push(one);
                    images.push(x);
                } else {
                    images.push(x);
                    images.push(one);
                }
            }
            let direct = star.compose(t, &images).unwrap();
            let (_, g) = direct.monomial_content().unwrap();
            assert_eq!(g, c.b);
        }
    }
}
