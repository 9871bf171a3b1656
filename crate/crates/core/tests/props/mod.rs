//! Randomized suites with fixed seeds. Each returns a description of the
//! first failure.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use desing::constraints::ConstraintSet;
use desing::localize::{partition_by_init, reduce_coefficients, translate};
use desing::map::BirationalMap;
use desing::tree::{build_tree, Status, TreeOptions};
use desing::weights::{
    build_arc_map, minimal_weight_sequences, unimodular_extend, valid_weight_sequences,
};
use desing::{FieldSpec, Monomial, Poly, Ring};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{parse_frac, P};

pub type Check = Result<(), String>;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn oracle_of(p: &Poly) -> P {
    let c = p.ring().field().characteristic() as i128;
    P::parse(p.ring().vars(), c, &p.to_string())
}

fn int_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0] as i128;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, x)| *x)
                        .collect()
                })
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] as i128 * int_det(&minor)
        })
        .sum()
}

fn random_weights(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let n = rng.gen_range(1..=4);
    (0..n).map(|_| rng.gen_range(1..=12)).collect()
}

/// `psi(phi(x_i)) = x_i`, evaluated by the oracle.
fn oracle_round_trip(map: &BirationalMap) -> Check {
    let src = map.source.vars().to_vec();
    let tgt = map.target.vars().to_vec();
    let psi: HashMap<String, (P, P)> = map
        .psi_strings()
        .into_iter()
        .map(|(v, s)| (v, parse_frac(&src, 0, &s)))
        .collect();
    for (v, s) in map.phi_strings() {
        let (num, den) = parse_frac(&tgt, 0, &s);
        let (n1, d1) = num.subst(&src, &psi);
        let (n2, d2) = den.subst(&src, &psi);
        // (n1/d1) / (n2/d2) == v
        let lhs = n1.mul(&d2);
        let rhs = P::var(&src, 0, &v).mul(&n2).mul(&d1);
        if lhs != rhs {
            return Err(format!("psi(phi({v})) != {v} for {s}"));
        }
    }
    Ok(())
}

/// (a) ψ∘φ = identity for 200 generated unimodular maps.
pub fn round_trips() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa1);
    for case in 0..200 {
        let w = random_weights(&mut rng);
        let n = w.len();
        let u = unimodular_extend(&w).map_err(|e| format!("{w:?}: {e}"))?;
        let translated = case % 2 == 1;
        let src = Ring::with_params(FieldSpec::RATIONALS, names("x", n), names("a", n));
        let tgt = Ring::with_params(FieldSpec::RATIONALS, names("z", n), names("a", n));
        let tr: Vec<Poly> = (0..n)
            .map(|i| {
                if translated {
                    Poly::var(&src, n + i)
                } else {
                    Poly::zero(&src)
                }
            })
            .collect();
        let map = build_arc_map(&src, &tgt, tr, &u).map_err(|e| format!("{w:?}: {e}"))?;
        map.verify_round_trip().map_err(|e| format!("{w:?}: {e}"))?;
        if !translated {
            oracle_round_trip(&map).map_err(|e| format!("{w:?}: {e}"))?;
        }
    }
    Ok(())
}

/// (b) det M = ±1, M·M⁻¹ = I, and the distinguished column is w / gcd(w).
pub fn unimodular() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb2);
    for _ in 0..200 {
        let w = random_weights(&mut rng);
        let n = w.len();
        let u = unimodular_extend(&w).map_err(|e| format!("{w:?}: {e}"))?;
        let d = int_det(&u.matrix);
        if d.abs() != 1 {
            return Err(format!("{w:?}: det {d}"));
        }
        for i in 0..n {
            for j in 0..n {
                let s: i64 = (0..n).map(|k| u.matrix[i][k] * u.inverse[k][j]).sum();
                if s != i64::from(i == j) {
                    return Err(format!("{w:?}: M*Minv not identity"));
                }
            }
        }
        let g = w.iter().fold(0i64, |g, x| g.gcd(x));
        let col: Vec<i64> = u.matrix.iter().map(|r| r[u.column()]).collect();
        let want: Vec<i64> = w.iter().map(|x| x / g).collect();
        if col != want {
            return Err(format!("{w:?}: column {col:?}"));
        }
    }
    Ok(())
}

fn random_support(rng: &mut ChaCha8Rng) -> Vec<Monomial> {
    let n = rng.gen_range(2..=3);
    loop {
        let k = rng.gen_range(2..=6);
        let set: BTreeSet<Vec<i64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(0..=5)).collect())
            .collect();
        if set.len() >= 2 {
            return set.into_iter().map(Monomial::new).collect();
        }
    }
}

fn ties(support: &[Monomial], w: &[i64]) -> bool {
    let vals: Vec<i64> = support
        .iter()
        .map(|m| m.exps().iter().zip(w).map(|(a, b)| a * b).sum())
        .collect();
    let min = *vals.iter().min().unwrap();
    vals.iter().filter(|&&v| v == min).count() >= 2
}

fn brute_force(support: &[Monomial], bound: i64) -> BTreeSet<Vec<i64>> {
    let n = support[0].len();
    let mut out = BTreeSet::new();
    let mut w = vec![1i64; n];
    loop {
        let g = w.iter().fold(0i64, |g, x| g.gcd(x));
        if g == 1 && ties(support, &w) {
            out.insert(w.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if w[i] < bound {
                w[i] += 1;
                break;
            }
            w[i] = 1;
            i += 1;
        }
    }
}

/// (c) valid_weight_sequences agrees with brute-force enumeration.
pub fn weights_match_brute_force() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc3);
    for _ in 0..100 {
        let s = random_support(&mut rng);
        let got: BTreeSet<Vec<i64>> = valid_weight_sequences(&s, 8)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|w| w.w)
            .collect();
        let want = brute_force(&s, 8);
        if got != want {
            return Err(format!("support {s:?}: got {got:?}, want {want:?}"));
        }
    }
    Ok(())
}

/// (d) no minimal sequence is a sum of two valid ones within the bound.
pub fn minimality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd4);
    for _ in 0..100 {
        let s = random_support(&mut rng);
        let cands = valid_weight_sequences(&s, 8).map_err(|e| e.to_string())?;
        let valid = brute_force(&s, 8);
        for m in minimal_weight_sequences(&cands, &s) {
            for a in &valid {
                let b: Vec<i64> = m.w.iter().zip(a).map(|(x, y)| x - y).collect();
                if b.iter().all(|&x| x > 0) && ties(&s, &b) {
                    return Err(format!("{:?} = {a:?} + {b:?} on {s:?}", m.w));
                }
            }
        }
    }
    Ok(())
}

fn random_poly(rng: &mut ChaCha8Rng, ring: &Arc<Ring>) -> Poly {
    let n = ring.n_main();
    let k = rng.gen_range(2..=4);
    let terms = (0..k).map(|_| {
        let mut e = vec![0i64; ring.nvars()];
        for x in e.iter_mut().take(n) {
            *x = rng.gen_range(0..=3);
        }
        (
            Monomial::new(e),
            ring.field().from_i64(rng.gen_range(1..=5)),
        )
    });
    Poly::from_terms(ring, terms)
}

/// (e) init sets are divisibility antichains covering the live support, on
/// every part of a translated random polynomial.
pub fn init_antichains() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe5);
    let mut parts_seen = 0;
    for _ in 0..16 {
        let n = 2;
        let ring = Ring::with_params(FieldSpec::RATIONALS, names("x", n), names("a", n));
        let b = random_poly(&mut rng, &ring);
        if b.is_constant() {
            continue;
        }
        let pr = ring.param_ring();
        let own: Vec<usize> = (0..n).collect();
        let Ok(loc) = translate(&b, &own, &ConstraintSet::unconstrained(&pr), names("y", n)) else {
            continue;
        };
        for part in partition_by_init(&loc.b, &loc.constraints) {
            parts_seen += 1;
            let live = reduce_coefficients(&loc.b, &part.constraints).main_support();
            for (i, m) in part.init.iter().enumerate() {
                for (j, o) in part.init.iter().enumerate() {
                    if i != j && m.divides(o) {
                        return Err(format!("{b}: init {m:?} divides {o:?}"));
                    }
                }
            }
            for m in &live {
                if !part.init.iter().any(|i| i.divides(m)) {
                    return Err(format!("{b}: {m:?} not covered by {:?}", part.init));
                }
            }
        }
    }
    if parts_seen == 0 {
        return Err("no parts generated".into());
    }
    Ok(())
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}.txt", env!("CARGO_MANIFEST_DIR"))
}

fn load(name: &str) -> Poly {
    let text = std::fs::read_to_string(fixture(name)).expect("fixture");
    desing::parse::parse_problem(&text)
        .expect("fixture parses")
        .polynomial()
}

/// Truncation of `p` to total degree `≤ deg` in the named variables.
fn truncate(p: &P, vars: &[usize], deg: i64) -> P {
    let mut r = P::zero(&p.vars, p.p);
    for (e, c) in &p.t {
        if vars.iter().map(|&i| e[i]).sum::<i64>() <= deg {
            r = r.add(&P::monomial(&p.vars, p.p, e.clone()).mul(&P::constant(&p.vars, p.p, *c)));
        }
    }
    r
}

/// (f) b(s) ≡ 0 modulo degree 13 for every unit series in the resolved
/// fixtures.
pub fn series_substitution() -> Check {
    let mut checked = 0;
    let runs: [(&str, bool); 5] = [
        ("curve", false),
        ("b7", false),
        ("three_branch", true),
        ("eisenbud", false),
        ("hauser", false),
    ];
    for (name, at_origin) in runs {
        let b = load(name);
        let opts = TreeOptions {
            max_depth: 6,
            at_origin,
            ..Default::default()
        };
        let tree = build_tree(&b, &opts).map_err(|e| format!("{name}: {e}"))?;
        for node in tree.nodes.iter().filter(|n| n.status == Status::Resolved) {
            let info = node.resolved.as_ref().expect("resolved info");
            let Some(series) = &info.series else { continue };
            let ring = node.ring();
            let vars = ring.vars().to_vec();
            let unit = vars[info.decomposition.unit].clone();
            let others: Vec<usize> = (0..ring.n_main())
                .filter(|&i| i != info.decomposition.unit)
                .collect();
            let bo = oracle_of(&node.b);
            let s = oracle_of(&series.poly).rename_into(&vars);
            let one = P::constant(&vars, bo.p, 1);
            let images: HashMap<String, (P, P)> = [(unit, (s, one))].into_iter().collect();
            let (n, _) = bo.subst(&vars, &images);
            let low = truncate(&n, &others, series.order as i64);
            if !low.is_zero() {
                return Err(format!(
                    "{name} {}: b(s) has low-degree terms {low:?}",
                    node.id
                ));
            }
            checked += 1;
        }
    }
    if checked < 10 {
        return Err(format!("only {checked} series checked"));
    }
    Ok(())
}

/// (g) monomial_content round-trips and agrees with the oracle.
pub fn content_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x97);
    let ring = Ring::new(FieldSpec::RATIONALS, names("x", 3));
    for _ in 0..200 {
        let k = rng.gen_range(1..=5);
        let terms: Vec<(Monomial, desing::Scalar)> = (0..k)
            .map(|_| {
                let e: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=4)).collect();
                (
                    Monomial::new(e),
                    ring.field().from_i64(rng.gen_range(-4..=4)),
                )
            })
            .collect();
        let p = Poly::from_terms(&ring, terms);
        if p.is_zero() {
            continue;
        }
        let (m, q) = p.monomial_content().map_err(|e| e.to_string())?;
        if q.mul_monomial(&m) != p {
            return Err(format!("{p}: {q} * {m:?} differs"));
        }
        let (om, oq) = oracle_of(&p).content();
        if om != m.exps() || oq != oracle_of(&q) {
            return Err(format!("{p}: oracle content {om:?}"));
        }
    }
    Ok(())
}

fn tree_json(input: &str, extra: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_desing"))
        .args(["tree", "--input", input, "--format", "json"])
        .args(extra)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

/// (h) byte-identical JSON across runs and `--jobs` settings.
pub fn deterministic_json() -> Check {
    for (name, extra) in [
        ("curve", vec![]),
        ("hauser", vec![]),
        ("three_branch", vec!["--at-origin"]),
    ] {
        let path = fixture(name);
        assert!(Path::new(&path).exists());
        let base = tree_json(&path, &extra)?;
        for jobs in ["1", "3"] {
            let mut args = extra.clone();
            args.extend(["--jobs", jobs]);
            if tree_json(&path, &args)? != base {
                return Err(format!("{name}: output differs with --jobs {jobs}"));
            }
        }
    }
    Ok(())
}
