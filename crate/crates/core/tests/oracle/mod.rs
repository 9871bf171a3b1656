//! Test-side arithmetic, deliberately independent of the library: a Laurent
//! polynomial is a map from exponent vectors to integers (reduced mod `p`
//! when `p > 0`), parsed from the display form and expanded naively.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P {
    pub vars: Vec<String>,
    pub t: BTreeMap<Vec<i64>, i128>,
    pub p: i128,
}

fn norm(c: i128, p: i128) -> i128 {
    if p > 0 {
        c.rem_euclid(p)
    } else {
        c
    }
}

impl P {
    pub fn zero(vars: &[String], p: i128) -> P {
        P {
            vars: vars.to_vec(),
            t: BTreeMap::new(),
            p,
        }
    }

    pub fn constant(vars: &[String], p: i128, c: i128) -> P {
        let mut z = P::zero(vars, p);
        z.add_term(vec![0; vars.len()], c);
        z
    }

    pub fn var(vars: &[String], p: i128, name: &str) -> P {
        let i = vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("no variable {name}"));
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut z = P::zero(vars, p);
        z.add_term(e, 1);
        z
    }

    fn add_term(&mut self, e: Vec<i64>, c: i128) {
        let v = norm(self.t.get(&e).copied().unwrap_or(0) + c, self.p);
        if v == 0 {
            self.t.remove(&e);
        } else {
            self.t.insert(e, v);
        }
    }

    /// Parses sums of terms `c*v^e*w^-f` without parentheses.
    pub fn parse(vars: &[String], p: i128, s: &str) -> P {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = P::zero(vars, p);
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut terms = Vec::new();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        for term in terms {
            let (sign, body) = match term.as_bytes()[0] {
                b'-' => (-1, &term[1..]),
                b'+' => (1, &term[1..]),
                _ => (1, term),
            };
            let mut c: i128 = sign;
            let mut e = vec![0i64; vars.len()];
            for f in body.split('*') {
                if let Ok(n) = f.parse::<i128>() {
                    c *= n;
                    continue;
                }
                let (name, exp) = match f.split_once('^') {
                    Some((n, x)) => (n, x.parse::<i64>().expect("exponent")),
                    None => (f, 1),
                };
                let i = vars
                    .iter()
                    .position(|v| v == name)
                    .unwrap_or_else(|| panic!("unknown variable {name} in {s}"));
                e[i] += exp;
            }
            out.add_term(e, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_empty()
    }

    pub fn add(&self, o: &P) -> P {
        let mut r = self.clone();
        for (e, c) in &o.t {
            r.add_term(e.clone(), *c);
        }
        r
    }

    pub fn neg(&self) -> P {
        let mut r = P::zero(&self.vars, self.p);
        for (e, c) in &self.t {
            r.add_term(e.clone(), -c);
        }
        r
    }

    pub fn sub(&self, o: &P) -> P {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &P) -> P {
        let mut r = P::zero(&self.vars, self.p);
        for (a, x) in &self.t {
            for (b, y) in &o.t {
                let e: Vec<i64> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                r.add_term(e, norm(x * y, self.p));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> P {
        let mut r = P::constant(&self.vars, self.p, 1);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Inverse of a monomial with coefficient ±1.
    pub fn inv_monomial(&self) -> P {
        assert_eq!(self.t.len(), 1, "not a monomial: {self:?}");
        let (e, c) = self.t.iter().next().unwrap();
        assert!(
            *c == 1 || norm(-c, self.p) == 1 || *c == -1,
            "non-unit coefficient"
        );
        let mut r = P::zero(&self.vars, self.p);
        r.add_term(e.iter().map(|x| -x).collect(), *c);
        r
    }

    pub fn powi(&self, k: i64) -> P {
        if k >= 0 {
            self.pow(k as u32)
        } else {
            self.inv_monomial().pow((-k) as u32)
        }
    }

    /// Moves to a ring with other variables, matching by name.
    pub fn rename_into(&self, vars: &[String]) -> P {
        let mut r = P::zero(vars, self.p);
        for (e, c) in &self.t {
            let mut f = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    let j = vars
                        .iter()
                        .position(|v| *v == self.vars[i])
                        .unwrap_or_else(|| panic!("{} missing in target", self.vars[i]));
                    f[j] += x;
                }
            }
            r.add_term(f, *c);
        }
        r
    }

    /// Sets the named variables to zero; they must not occur with negative
    /// exponents.
    pub fn at_zero(&self, names: &[&str]) -> P {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| names.contains(&v.as_str()))
            .map(|(i, _)| i)
            .collect();
        let mut r = P::zero(&self.vars, self.p);
        for (e, c) in &self.t {
            if idx.iter().all(|&i| e[i] == 0) {
                r.add_term(e.clone(), *c);
            } else {
                assert!(idx.iter().all(|&i| e[i] >= 0));
            }
        }
        r
    }

    /// `(m, q)` with `self = x^m * q` and `q` having no monomial factor.
    pub fn content(&self) -> (Vec<i64>, P) {
        let n = self.vars.len();
        let mut m = vec![i64::MAX; n];
        for e in self.t.keys() {
            for i in 0..n {
                m[i] = m[i].min(e[i]);
            }
        }
        let mut q = P::zero(&self.vars, self.p);
        for (e, c) in &self.t {
            q.add_term(e.iter().zip(&m).map(|(a, b)| a - b).collect(), *c);
        }
        (m, q)
    }

    pub fn monomial(vars: &[String], p: i128, e: Vec<i64>) -> P {
        let mut r = P::zero(vars, p);
        r.add_term(e, 1);
        r
    }

    /// `self(images)` for images given as fractions `num/den`, returned as
    /// `(n, down)` with `self(images) = n / down`.
    pub fn subst(&self, target: &[String], images: &HashMap<String, (P, P)>) -> (P, P) {
        let one = P::constant(target, self.p, 1);
        let mut down = one.clone();
        let mut lo = vec![0i64; self.vars.len()];
        let mut hi = vec![0i64; self.vars.len()];
        for e in self.t.keys() {
            for i in 0..e.len() {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        let img: Vec<(P, P)> = self
            .vars
            .iter()
            .map(|v| match images.get(v) {
                Some((n, d)) => (n.rename_into(target), d.rename_into(target)),
                None => (P::var(target, self.p, v), one.clone()),
            })
            .collect();
        for i in 0..img.len() {
            if lo[i] < 0 {
                down = down.mul(&img[i].0.pow((-lo[i]) as u32));
            }
            if hi[i] > 0 {
                down = down.mul(&img[i].1.pow(hi[i] as u32));
            }
        }
        let mut n = P::zero(target, self.p);
        for (e, c) in &self.t {
            let mut term = P::constant(target, self.p, *c);
            for i in 0..e.len() {
                term = term.mul(&img[i].0.pow((e[i] - lo[i]) as u32));
                term = term.mul(&img[i].1.pow((hi[i] - e[i]) as u32));
            }
            n = n.add(&term);
        }
        (n, down)
    }

    pub fn vars_of(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }
}

/// Splits a displayed fraction `(num)/(den)` or a plain polynomial.
pub fn parse_frac(vars: &[String], p: i128, s: &str) -> (P, P) {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('(') {
        if let Some((num, den)) = rest.split_once(")/(") {
            let den = den.strip_suffix(')').expect("closing parenthesis");
            return (P::parse(vars, p, num), P::parse(vars, p, den));
        }
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = num.trim_start_matches('(').trim_end_matches(')');
        let den = den.trim_start_matches('(').trim_end_matches(')');
        return (P::parse(vars, p, num), P::parse(vars, p, den));
    }
    (P::parse(vars, p, s), P::constant(vars, p, 1))
}

/// Checks `b(phi) == factor * reduced^power` by cross-multiplication.
pub fn identity_holds(
    b: &P,
    target: &[String],
    phi: &HashMap<String, (P, P)>,
    factor: &(P, P),
    reduced: &P,
    power: u32,
) -> bool {
    let (n, down) = b.subst(target, phi);
    let lhs = n.mul(&factor.1.rename_into(target));
    let rhs = factor
        .0
        .rename_into(target)
        .mul(&reduced.rename_into(target).pow(power))
        .mul(&down);
    lhs == rhs
}
