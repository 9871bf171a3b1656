//! JSON, DOT and text renderings of a tree, and re-verification of a saved
//! JSON tree.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::map::BirationalMap;
use crate::parse::{parse_frac, parse_poly};
use crate::poly::{Frac, Monomial, Poly, Ring};
use crate::reduce::Reduction;
use crate::scalar::FieldSpec;
use crate::tree::{DesingTree, TreeArc, TreeNode, TreeOptions};

fn strings(v: &[Poly]) -> Value {
    Value::Array(v.iter().map(|p| Value::String(p.to_string())).collect())
}

fn pairs(v: Vec<(String, String)>) -> Value {
    Value::Object(v.into_iter().map(|(k, s)| (k, Value::String(s))).collect())
}

fn sorted_ineq(c: &ConstraintSet) -> Vec<Poly> {
    let mut v = c.ineq().to_vec();
    v.sort_by_key(|p| p.to_string());
    v
}

fn reduction_json(r: &Reduction) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(r.kind.to_string()));
    m.insert("phi".into(), pairs(r.map.phi_strings()));
    m.insert("psi".into(), pairs(r.map.psi_strings()));
    m.insert("reduced".into(), json!(r.reduced.to_string()));
    m.insert("factor".into(), json!(r.factor.to_string()));
    m.insert("power".into(), json!(r.power.to_string()));
    m.insert("global_parameters".into(), json!(r.global_parameters));
    if let Some((v, f)) = &r.solved {
        m.insert("solved".into(), json!({ "var": v, "value": f.to_string() }));
    }
    if let Some(w) = &r.weights {
        m.insert(
            "weights".into(),
            json!(w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        );
    }
    Value::Object(m)
}

fn matrix_json(m: &[Vec<i64>]) -> Value {
    json!(m
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn node_json(n: &TreeNode) -> Value {
    let ring = n.ring();
    let mut m = Map::new();
    m.insert("id".into(), json!(n.id));
    m.insert("parent".into(), json!(n.parent));
    m.insert("depth".into(), json!(n.depth.to_string()));
    m.insert("b".into(), json!(n.b.to_string()));
    m.insert("vars".into(), json!(ring.main_vars()));
    m.insert("params".into(), json!(ring.params()));
    m.insert(
        "own".into(),
        json!(n
            .own
            .iter()
            .map(|&i| ring.params()[i].clone())
            .collect::<Vec<_>>()),
    );
    m.insert("eq".into(), strings(&n.constraints.sorted_eq()));
    m.insert("ineq".into(), strings(&sorted_ineq(&n.constraints)));
    m.insert("status".into(), json!(n.status.to_string()));
    m.insert("global_parameters".into(), json!(n.global_parameters));
    m.insert("notes".into(), json!(n.notes));
    if let Some(r) = &n.resolved {
        let d = &r.decomposition;
        let mut rm = Map::new();
        rm.insert("unit".into(), json!(ring.vars()[d.unit]));
        rm.insert("dist".into(), json!(d.dist.map(|t| ring.vars()[t].clone())));
        rm.insert("f0".into(), json!(d.f0.to_string()));
        rm.insert("f1".into(), json!(d.f1.to_string()));
        rm.insert("D".into(), json!(d.d.to_string()));
        rm.insert("g".into(), strings(&d.g));
        if let Some(s) = &r.series {
            let coeffs: Map<String, Value> = s
                .coeffs
                .iter()
                .map(|(e, c)| {
                    let key = e
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    (key, Value::String(c.to_string()))
                })
                .collect();
            rm.insert("series".into(), Value::Object(coeffs));
            rm.insert("series_order".into(), json!(s.order.to_string()));
        }
        rm.insert(
            "rewrite".into(),
            json!({
                "phi": pairs(r.rewrite.map.phi_strings()),
                "psi": pairs(r.rewrite.map.psi_strings()),
                "transformed": r.rewrite.transformed.to_string(),
                "factor": r.rewrite.factor.to_string(),
            }),
        );
        m.insert("resolved".into(), Value::Object(rm));
    }
    if let Some(r) = &n.reduction {
        m.insert("reduction".into(), reduction_json(r));
    }
    if let Some(w) = &n.empty_witness {
        m.insert("empty_witness".into(), json!(w.to_string()));
    }
    Value::Object(m)
}

fn arc_json(a: &TreeArc) -> Value {
    let mut m = Map::new();
    m.insert("from".into(), json!(a.from));
    m.insert("to".into(), json!(a.to));
    m.insert("kind".into(), json!(a.kind.to_string()));
    m.insert("phi".into(), pairs(a.map.phi_strings()));
    m.insert("psi".into(), pairs(a.map.psi_strings()));
    m.insert("factor".into(), json!(a.factor.to_string()));
    m.insert("power".into(), json!(a.power.to_string()));
    if let Some(w) = &a.weights {
        m.insert(
            "weights".into(),
            json!(w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        );
    }
    if let Some(mx) = &a.matrix {
        m.insert("matrix".into(), matrix_json(mx));
    }
    if let Some(p) = a.part {
        m.insert("part".into(), json!(p.to_string()));
    }
    if let Some(c) = &a.part_constraints {
        m.insert("part_eq".into(), strings(&c.sorted_eq()));
        m.insert("part_ineq".into(), strings(&sorted_ineq(c)));
    }
    Value::Object(m)
}

pub fn tree_json(b: &Poly, tree: &DesingTree, opts: &TreeOptions) -> Value {
    let ring = b.ring();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for n in &tree.nodes {
        *counts.entry(n.status.to_string()).or_default() += 1;
    }
    json!({
        "problem": {
            "char": ring.field().characteristic().to_string(),
            "vars": ring.main_vars(),
            "b": b.to_string(),
        },
        "nodes": tree.nodes.iter().map(node_json).collect::<Vec<_>>(),
        "arcs": tree.arcs.iter().map(arc_json).collect::<Vec<_>>(),
        "metadata": {
            "max_depth": opts.max_depth.to_string(),
            "series_order": opts.series_order.to_string(),
            "weight_bound": opts.weight_bound.map(|w| w.to_string()).unwrap_or_else(|| "auto".into()),
            "at_origin": opts.at_origin,
            "node_count": tree.nodes.len().to_string(),
            "status_counts": counts.into_iter().map(|(k, v)| (k, v.to_string())).collect::<BTreeMap<_, _>>(),
            "eq_membership": "ideal membership; eq generators carry squarefree monomial factors, no radical is computed",
        },
    })
}

pub fn tree_json_string(b: &Poly, tree: &DesingTree, opts: &TreeOptions) -> String {
    let mut s = serde_json::to_string_pretty(&tree_json(b, tree, opts)).expect("json");
    s.push('\n');
    s
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn tree_dot(tree: &DesingTree) -> String {
    let mut out = String::from("digraph desing {\n  node [shape=box];\n");
    for n in &tree.nodes {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\\n{}\\n{}\"];",
            n.id,
            n.id,
            dot_escape(&n.b.to_string()),
            n.status
        );
    }
    for a in &tree.arcs {
        let label = match &a.weights {
            Some(w) => format!("{} {:?}", a.kind, w),
            None => a.kind.to_string(),
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            a.from,
            a.to,
            dot_escape(&label)
        );
    }
    out.push_str("}\n");
    out
}

pub fn tree_text(tree: &DesingTree) -> String {
    let mut out = String::new();
    for n in &tree.nodes {
        let pad = "  ".repeat(n.depth);
        let _ = writeln!(out, "{pad}{} [{}] {}", n.id, n.status, n.b);
        if let Some(a) = tree.arcs.iter().find(|a| a.to == n.id) {
            if let Some(w) = &a.weights {
                let _ = writeln!(out, "{pad}  via {} {:?}", a.kind, w);
            }
        }
    }
    out
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Invalid(format!("missing field `{key}`")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    get(v, key)?
        .as_str()
        .ok_or_else(|| Error::Invalid(format!("field `{key}` is not a string")))
}

fn str_list(v: &Value, key: &str) -> Result<Vec<String>> {
    get(v, key)?
        .as_array()
        .ok_or_else(|| Error::Invalid(format!("field `{key}` is not a list")))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Invalid(format!("`{key}` entry is not a string")))
        })
        .collect()
}

struct SavedNode {
    ring: Arc<Ring>,
    b: Poly,
}

fn saved_node(field: FieldSpec, v: &Value) -> Result<SavedNode> {
    let ring = Ring::with_params(field, str_list(v, "vars")?, str_list(v, "params")?);
    let b = parse_poly(&ring, get_str(v, "b")?)?;
    Ok(SavedNode { ring, b })
}

fn saved_constraints(ring: &Arc<Ring>, v: &Value, eq: &str, ineq: &str) -> Result<ConstraintSet> {
    let pr = ring.param_ring();
    let eq = str_list(v, eq)?
        .iter()
        .map(|s| parse_poly(&pr, s))
        .collect::<Result<Vec<_>>>()?;
    let ineq = match v.get(ineq) {
        Some(_) => str_list(v, ineq)?
            .iter()
            .map(|s| parse_poly(&pr, s))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(ConstraintSet::new(&pr, eq, ineq))
}

/// Re-runs every arc identity and every resolved reassembly recorded in a
/// saved JSON tree. Returns the number of checks performed.
pub fn verify_json(text: &str) -> Result<usize> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("json: {e}")))?;
    let problem = get(&v, "problem")?;
    let c: u64 = get_str(problem, "char")?
        .parse()
        .map_err(|_| Error::Invalid("bad characteristic".into()))?;
    let field = FieldSpec::new(c)?;
    let mut nodes: BTreeMap<String, (SavedNode, &Value)> = BTreeMap::new();
    for n in get(&v, "nodes")?.as_array().into_iter().flatten() {
        nodes.insert(get_str(n, "id")?.to_string(), (saved_node(field, n)?, n));
    }
    let mut checks = 0;
    for a in get(&v, "arcs")?.as_array().into_iter().flatten() {
        let (from, _) = nodes
            .get(get_str(a, "from")?)
            .ok_or_else(|| Error::UnknownNode(get_str(a, "from").unwrap_or("").into()))?;
        let (to, _) = nodes
            .get(get_str(a, "to")?)
            .ok_or_else(|| Error::UnknownNode(get_str(a, "to").unwrap_or("").into()))?;
        let phi_obj = get(a, "phi")?;
        let phi = from
            .ring
            .main_vars()
            .iter()
            .map(|x| {
                let s = phi_obj
                    .get(x)
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Invalid(format!("arc has no image for {x}")))?;
                parse_frac(&to.ring, s)
            })
            .collect::<Result<Vec<_>>>()?;
        let map = BirationalMap::general(&from.ring, &to.ring, phi, Vec::new());
        let factor = parse_frac(&to.ring, get_str(a, "factor")?)?;
        let power: u32 = get_str(a, "power")?
            .parse()
            .map_err(|_| Error::Invalid("bad power".into()))?;
        let image = map.apply_poly(&from.b)?;
        let diff = image.sub(&factor.mul(&Frac::from_poly(to.b.pow(power))));
        let ok = if a.get("part_eq").is_some() {
            let part = saved_constraints(&from.ring, a, "part_eq", "part_ineq")?;
            let part = part.embed(&to.ring.param_ring())?;
            crate::localize::reduce_coefficients(&diff.num, &part).is_zero()
        } else {
            diff.is_zero()
        };
        if !ok {
            return Err(Error::Verification(format!(
                "arc {} -> {}",
                get_str(a, "from")?,
                get_str(a, "to")?
            )));
        }
        checks += 1;
    }
    for (id, (node, raw)) in &nodes {
        let Some(r) = raw.get("resolved") else {
            continue;
        };
        let ring = &node.ring;
        let unit = ring
            .index_of(get_str(r, "unit")?)
            .ok_or_else(|| Error::UnknownVariable(get_str(r, "unit").unwrap_or("").into()))?;
        let u = Poly::var(ring, unit);
        let td = match r.get("dist").and_then(Value::as_str) {
            Some(t) => Poly::var_named(ring, t)?,
            None => Poly::one(ring),
        };
        let f0 = parse_poly(ring, get_str(r, "f0")?)?;
        let f1 = parse_poly(ring, get_str(r, "f1")?)?;
        let d = parse_poly(ring, get_str(r, "D")?)?;
        let mut tail = Poly::zero(ring);
        for (j, g) in str_list(r, "g")?.iter().enumerate() {
            tail = &tail + &(&u.pow(j as u32) * &parse_poly(ring, g)?);
        }
        let re = &(&f0 + &(&u * &f1)) + &(&(&td * &d) * &tail);
        if re != node.b {
            return Err(Error::Verification(format!("{id}: reassembly")));
        }
        checks += 1;
        if let Some(series) = r.get("series").and_then(Value::as_object) {
            let order: i64 = get_str(r, "series_order")?
                .parse()
                .map_err(|_| Error::Invalid("bad series order".into()))?;
            let mut s = Poly::zero(ring);
            for (k, c) in series {
                let exps: Vec<i64> = k
                    .split(',')
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse().map_err(|_| Error::Invalid("bad exponent".into())))
                    .collect::<Result<_>>()?;
                let mut e = vec![0i64; ring.nvars()];
                let mut it = exps.into_iter();
                for (i, slot) in e.iter_mut().enumerate().take(ring.n_main()) {
                    if i != unit {
                        *slot = it.next().unwrap_or(0);
                    }
                }
                let coef = parse_frac(ring, c.as_str().unwrap_or("0"))?
                    .into_poly()
                    .and_then(|p| p.as_constant())
                    .ok_or_else(|| Error::Invalid("series coefficient".into()))?;
                s = &s + &Poly::monomial(ring, Monomial::new(e), coef);
            }
            let mut images: Vec<Poly> = (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect();
            images[unit] = s;
            let sub = node.b.compose(ring, &images)?;
            let low = sub
                .terms()
                .any(|(m, _)| m.exps()[..ring.n_main()].iter().sum::<i64>() <= order);
            if low {
                return Err(Error::Verification(format!("{id}: series")));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
