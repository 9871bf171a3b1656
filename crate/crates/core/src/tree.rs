//! The desingularization tree: charts at the root, then generic points,
//! init partitions and weight arcs until every leaf is strongly resolved.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::charts::chart_named;
use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::localize::{partition_by_init, reduce_coefficients, translate};
use crate::map::BirationalMap;
use crate::poly::{Frac, Monomial, Poly, Ring};
use crate::reduce::{detect_linear_variable, reduction_step, Hints, Reduction, ReductionKind};
use crate::resolved::{
    find_resolved, resolved_rewrite, unit_series, Point, ResolvedDecomposition, Rewrite,
    TruncatedSeries,
};
use crate::scalar::Scalar;
use crate::weights::{
    apply_arc, build_arc_map, default_bound, minimal_weight_sequences, relaxed_minimal,
    unimodular_extend, valid_weight_sequences,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Open,
    Resolved,
    ReducedGlobal,
    Empty,
    DepthLimited,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Open => "open",
            Status::Resolved => "resolved",
            Status::ReducedGlobal => "reduced-global",
            Status::Empty => "empty",
            Status::DepthLimited => "depth-limited",
        })
    }
}

/// Projective nodes are charted; affine nodes carry a generic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Projective,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Chart,
    Weight,
    Reduction,
    ResolvedRewrite,
}

impl fmt::Display for ArcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArcKind::Chart => "chart",
            ArcKind::Weight => "weight",
            ArcKind::Reduction => "reduction",
            ArcKind::ResolvedRewrite => "resolved-rewrite",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedInfo {
    pub decomposition: ResolvedDecomposition,
    pub series: Option<TruncatedSeries>,
    pub rewrite: Rewrite,
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub id: String,
    pub parent: Option<String>,
    pub depth: usize,
    pub stage: Stage,
    pub b: Poly,
    /// Over the parameter ring of `b`.
    pub constraints: ConstraintSet,
    /// Parameter indices of the generic point, one per main variable.
    pub own: Vec<usize>,
    pub status: Status,
    pub global_parameters: Vec<String>,
    pub resolved: Option<ResolvedInfo>,
    pub reduction: Option<Reduction>,
    pub empty_witness: Option<Scalar>,
    pub notes: Vec<String>,
}

impl TreeNode {
    pub fn ring(&self) -> &Arc<Ring> {
        self.b.ring()
    }
}

#[derive(Debug, Clone)]
pub struct TreeArc {
    pub from: String,
    pub to: String,
    pub kind: ArcKind,
    pub map: BirationalMap,
    /// `φ(b_from) = factor · b_to^power` on `part`.
    pub factor: Frac,
    pub power: u64,
    pub weights: Option<Vec<i64>>,
    pub matrix: Option<Vec<Vec<i64>>>,
    pub part: Option<usize>,
    pub part_constraints: Option<ConstraintSet>,
}

#[derive(Debug, Clone)]
pub struct TreeOptions {
    pub max_depth: usize,
    pub series_order: u32,
    /// `None` uses [`default_bound`] per support.
    pub weight_bound: Option<i64>,
    pub hints: Option<Hints>,
    /// Start at the origin as an affine node instead of charting.
    pub at_origin: bool,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            max_depth: 16,
            series_order: 12,
            weight_bound: None,
            hints: None,
            at_origin: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DesingTree {
    pub nodes: Vec<TreeNode>,
    pub arcs: Vec<TreeArc>,
}

fn path_of(id: &str) -> String {
    id.strip_prefix("r.").unwrap_or("").replace('.', "_")
}

fn main_names(id: &str, n: usize) -> Vec<String> {
    let p = path_of(id);
    (0..n).map(|j| format!("x{p}_{j}")).collect()
}

fn param_names(id: &str, n: usize) -> Vec<String> {
    let p = path_of(id);
    (0..n).map(|j| format!("a{p}_{j}")).collect()
}

fn child_id(parent: &str, ordinal: usize) -> String {
    format!("{parent}.{ordinal}")
}

#[derive(Debug, Default)]
struct Expansion {
    status: Option<Status>,
    resolved: Option<ResolvedInfo>,
    reduction: Option<Reduction>,
    notes: Vec<String>,
    children: Vec<(TreeNode, TreeArc)>,
}

fn new_node(
    id: String,
    parent: &TreeNode,
    stage: Stage,
    b: Poly,
    constraints: ConstraintSet,
    own: Vec<usize>,
    global_parameters: Vec<String>,
) -> TreeNode {
    let status = if constraints.is_empty() {
        Status::Empty
    } else {
        Status::Open
    };
    TreeNode {
        id,
        parent: Some(parent.id.clone()),
        depth: parent.depth + 1,
        stage,
        b,
        constraints,
        own,
        status,
        global_parameters,
        resolved: None,
        reduction: None,
        empty_witness: None,
        notes: Vec::new(),
    }
}

fn resolved_info(
    b: &Poly,
    dec: ResolvedDecomposition,
    opts: &TreeOptions,
    unit_name: &str,
) -> Result<ResolvedInfo> {
    let rewrite = resolved_rewrite(&dec, unit_name)?;
    let series = unit_series(b, &dec, opts.series_order).ok();
    Ok(ResolvedInfo {
        decomposition: dec,
        series,
        rewrite,
    })
}

fn expand_projective(node: &TreeNode, opts: &TreeOptions) -> Result<Expansion> {
    let mut ex = Expansion::default();
    let b = &node.b;
    let hints = if node.parent.is_none() {
        opts.hints.as_ref()
    } else {
        None
    };
    let cid = child_id(&node.id, 0);
    let names = main_names(&cid, b.ring().n_main());
    let namer = |j: usize| {
        names
            .get(j)
            .cloned()
            .unwrap_or_else(|| format!("x{}_{j}", path_of(&cid)))
    };
    if let Some(red) = reduction_step(b, hints, &namer)? {
        red.verify(b)?;
        if red.kind == ReductionKind::LinearSolve {
            ex.status = Some(Status::ReducedGlobal);
            ex.notes.push(format!(
                "{} = {}",
                red.solved.as_ref().unwrap().0,
                red.solved.as_ref().unwrap().1
            ));
            ex.reduction = Some(red);
            return Ok(ex);
        }
        if node.depth >= opts.max_depth {
            ex.status = Some(Status::DepthLimited);
            return Ok(ex);
        }
        let mut globals = node.global_parameters.clone();
        globals.extend(red.global_parameters.iter().cloned());
        let target = red.map.target.clone();
        let child = new_node(
            cid.clone(),
            node,
            Stage::Projective,
            red.reduced.clone(),
            ConstraintSet::unconstrained(&target.param_ring()),
            Vec::new(),
            globals,
        );
        let arc = TreeArc {
            from: node.id.clone(),
            to: cid,
            kind: ArcKind::Reduction,
            map: red.map.clone(),
            factor: red.factor.clone(),
            power: red.power,
            weights: red.weights.clone(),
            matrix: red.matrix.as_ref().map(|m| m.matrix.clone()),
            part: None,
            part_constraints: None,
        };
        ex.notes.push(format!("{} reduction", red.kind));
        ex.reduction = Some(red);
        ex.children.push((child, arc));
        return Ok(ex);
    }
    if node.depth >= opts.max_depth {
        ex.status = Some(Status::DepthLimited);
        return Ok(ex);
    }
    let n = b.ring().n_main();
    for k in 0..1usize << n {
        let cid = child_id(&node.id, k);
        let ch = chart_named(b, k, main_names(&cid, n), param_names(&cid, n))?;
        let target = ch.map.target.clone();
        let mut child = new_node(
            cid.clone(),
            node,
            Stage::Affine,
            ch.b.clone(),
            ch.constraints.clone(),
            (0..n).collect(),
            node.global_parameters.clone(),
        );
        if ch.is_empty() {
            child.empty_witness = ch.empty_witness.clone();
        }
        let factor = Frac::from_poly(Poly::monomial(
            &target,
            ch.factor.clone(),
            target.field().one(),
        ));
        let arc = TreeArc {
            from: node.id.clone(),
            to: cid,
            kind: ArcKind::Chart,
            map: ch.map.clone(),
            factor,
            power: 1,
            weights: None,
            matrix: ch.map.monomial.as_ref().map(|m| m.matrix.clone()),
            part: None,
            part_constraints: None,
        };
        ex.children.push((child, arc));
    }
    Ok(ex)
}

fn expand_affine(node: &TreeNode, opts: &TreeOptions) -> Result<Expansion> {
    let mut ex = Expansion::default();
    let b = &node.b;
    let ring = b.ring().clone();
    let n = ring.n_main();
    let point = Point {
        constraints: &node.constraints,
        own: &node.own,
    };
    if let Some(dec) = find_resolved(b, Some(point)) {
        let name = format!("u{}", path_of(&node.id));
        ex.resolved = Some(resolved_info(b, dec, opts, &name)?);
        ex.status = Some(Status::Resolved);
        return Ok(ex);
    }
    if let Some(red) = detect_linear_variable(b) {
        red.verify(b)?;
        ex.status = Some(Status::ReducedGlobal);
        ex.reduction = Some(red);
        return Ok(ex);
    }
    if node.depth >= opts.max_depth {
        ex.status = Some(Status::DepthLimited);
        return Ok(ex);
    }
    let ys: Vec<String> = (0..n)
        .map(|j| format!("y{}_{j}", path_of(&node.id)))
        .collect();
    let loc = translate(b, &node.own, &node.constraints, ys)?;
    let parts = partition_by_init(&loc.b, &loc.constraints);
    if parts.is_empty() {
        ex.notes.push("b vanishes on the part".into());
    }
    let mut ordinal = 0;
    // Smooth parts only fall back to entrywise-minimal weights when nothing
    // else on the node has children.
    let mut deferred = Vec::new();
    for last_resort in [false, true] {
        if last_resort && !(ex.children.is_empty() && !deferred.is_empty()) {
            break;
        }
        for (pi, part) in parts.iter().enumerate() {
            if last_resort && !deferred.contains(&pi) {
                continue;
            }
            let pc = &part.constraints;
            let at = Point {
                constraints: pc,
                own: &node.own,
            };
            if let Some(dec) = find_resolved(b, Some(at)) {
                let cid = child_id(&node.id, ordinal);
                ordinal += 1;
                let (child, arc) = rewrite_child(node, &cid, pi, pc, dec, opts)?;
                ex.children.push((child, arc));
                continue;
            }
            let support = reduce_coefficients(&loc.b, pc).main_support();
            let bound = opts.weight_bound.unwrap_or_else(|| default_bound(&support));
            let cands = match valid_weight_sequences(&support, bound) {
                Ok(c) => c,
                Err(e) => {
                    ex.notes.push(format!("part {pi}: {e}"));
                    continue;
                }
            };
            let smooth = support.iter().any(|m| m.exps().iter().sum::<i64>() <= 1);
            let mut minimal = if smooth && !last_resort {
                relaxed_minimal(&cands, &support)
            } else {
                minimal_weight_sequences(&cands, &support)
            };
            if minimal.is_empty() && smooth && !last_resort {
                deferred.push(pi);
            }
            minimal.sort_by(|a, b| a.w.cmp(&b.w));
            minimal.dedup_by(|a, b| a.w == b.w);
            for w in minimal {
                let cid = child_id(&node.id, ordinal);
                let u = unimodular_extend(&w.w)?;
                let mut params = ring.params().to_vec();
                let k = params.len();
                params.extend(param_names(&cid, n));
                let target = Ring::with_params(ring.field(), main_names(&cid, n), params);
                let translation: Vec<Poly> =
                    node.own.iter().map(|&a| Poly::var(&ring, n + a)).collect();
                let map = build_arc_map(&ring, &target, translation, &u)?;
                let img = match apply_arc(b, &map, pc) {
                    Ok(img) => img,
                    Err(Error::Degenerate(msg)) => {
                        ex.notes
                            .push(format!("part {pi}, weights {:?}: {msg}", w.w));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                ordinal += 1;
                let cpr = target.param_ring();
                let own: Vec<usize> = (k..k + n).collect();
                let mut eq: Vec<Poly> = pc.embed(&cpr)?.eq().to_vec();
                eq.push(Poly::var(&cpr, own[u.column()]));
                eq.push(img.b.at_point(&own)?);
                let cons = ConstraintSet::new(&cpr, eq, vec![]);
                let child = new_node(
                    cid.clone(),
                    node,
                    Stage::Affine,
                    img.b.clone(),
                    cons,
                    own,
                    node.global_parameters.clone(),
                );
                let factor =
                    Frac::from_poly(Poly::monomial(&target, img.factor, target.field().one()));
                let arc = TreeArc {
                    from: node.id.clone(),
                    to: cid,
                    kind: ArcKind::Weight,
                    map,
                    factor,
                    power: 1,
                    weights: Some(w.w.clone()),
                    matrix: Some(u.matrix.clone()),
                    part: Some(pi),
                    part_constraints: Some(pc.clone()),
                };
                ex.children.push((child, arc));
            }
        }
    }
    if ex.children.is_empty() && ex.status.is_none() {
        ex.notes.push("no weight arc applies".into());
    }
    Ok(ex)
}

/// A part on which `b` is already resolved: a renamed copy carrying the
/// decomposition.
fn rewrite_child(
    node: &TreeNode,
    cid: &str,
    pi: usize,
    pc: &ConstraintSet,
    dec: ResolvedDecomposition,
    opts: &TreeOptions,
) -> Result<(TreeNode, TreeArc)> {
    let ring = node.ring();
    let n = ring.n_main();
    let target = Ring::with_params(ring.field(), main_names(cid, n), ring.params().to_vec());
    let phi = (0..n)
        .map(|i| Frac::from_poly(Poly::var(&target, i)))
        .collect();
    let psi = (0..n)
        .map(|i| (i, Frac::from_poly(Poly::var(ring, i))))
        .collect();
    let map = BirationalMap::general(ring, &target, phi, psi);
    let b = node.b.with_ring(&target);
    let cons = pc.embed(&target.param_ring())?;
    let dec_t = find_resolved(
        &b,
        Some(Point {
            constraints: &cons,
            own: &node.own,
        }),
    )
    .ok_or_else(|| Error::Verification("renamed part lost its decomposition".into()))?;
    let _ = dec;
    let mut child = new_node(
        cid.to_string(),
        node,
        Stage::Affine,
        b.clone(),
        cons,
        node.own.clone(),
        node.global_parameters.clone(),
    );
    child.status = Status::Resolved;
    child.resolved = Some(resolved_info(
        &b,
        dec_t,
        opts,
        &format!("u{}", path_of(cid)),
    )?);
    let arc = TreeArc {
        from: node.id.clone(),
        to: cid.to_string(),
        kind: ArcKind::ResolvedRewrite,
        map,
        factor: Frac::from_poly(Poly::one(&target)),
        power: 1,
        weights: None,
        matrix: None,
        part: Some(pi),
        part_constraints: Some(pc.clone()),
    };
    Ok((child, arc))
}

fn expand(node: &TreeNode, opts: &TreeOptions) -> Result<Expansion> {
    match node.stage {
        Stage::Projective => expand_projective(node, opts),
        Stage::Affine => expand_affine(node, opts),
    }
}

fn root(b: &Poly, opts: &TreeOptions) -> Result<TreeNode> {
    let ring = b.ring();
    if ring.nvars() != ring.n_main() {
        return Err(Error::Invalid("the input polynomial has parameters".into()));
    }
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = ring.n_main();
    let (stage, b, constraints, own) = if opts.at_origin {
        let params: Vec<String> = ring.vars().iter().map(|v| format!("a_{v}")).collect();
        let r = Ring::with_params(ring.field(), ring.vars().to_vec(), params);
        let pr = r.param_ring();
        let eq = (0..n).map(|j| Poly::var(&pr, j)).collect();
        (
            Stage::Affine,
            b.embed(&r)?,
            ConstraintSet::new(&pr, eq, vec![]),
            (0..n).collect(),
        )
    } else {
        let pr = ring.param_ring();
        (
            Stage::Projective,
            b.clone(),
            ConstraintSet::unconstrained(&pr),
            Vec::new(),
        )
    };
    Ok(TreeNode {
        id: "r".into(),
        parent: None,
        depth: 0,
        stage,
        b,
        constraints,
        own,
        status: Status::Open,
        global_parameters: Vec::new(),
        resolved: None,
        reduction: None,
        empty_witness: None,
        notes: Vec::new(),
    })
}

/// Breadth-first expansion; each level is expanded in parallel and
/// assembled in node order, so the result does not depend on the pool size.
pub fn build_tree(b: &Poly, opts: &TreeOptions) -> Result<DesingTree> {
    let mut nodes = vec![root(b, opts)?];
    let mut arcs = Vec::new();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let results: Vec<Result<Expansion>> = frontier
            .par_iter()
            .map(|&i| expand(&nodes[i], opts))
            .collect();
        let mut next = Vec::new();
        for (&i, res) in frontier.iter().zip(results) {
            let ex = res?;
            let node = &mut nodes[i];
            node.notes.extend(ex.notes);
            node.resolved = ex.resolved;
            node.reduction = ex.reduction;
            if let Some(s) = ex.status {
                node.status = s;
            }
            for (child, arc) in ex.children {
                if child.status == Status::Open {
                    next.push(nodes.len());
                }
                nodes.push(child);
                arcs.push(arc);
            }
        }
        frontier = next;
    }
    Ok(DesingTree { nodes, arcs })
}

/// Normal forms of the coefficients of numerator and denominator.
fn reduce_frac(f: &Frac, c: &ConstraintSet) -> Result<Frac> {
    let c = c.embed(&f.ring().param_ring())?;
    Frac::new(
        reduce_coefficients(&f.num, &c),
        reduce_coefficients(&f.den, &c),
    )
}

impl DesingTree {
    pub fn node(&self, id: &str) -> Result<&TreeNode> {
        self.nodes
            .iter()
            .find(|n| n.id == id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn children(&self, id: &str) -> Vec<&TreeNode> {
        self.nodes
            .iter()
            .filter(|n| n.parent.as_deref() == Some(id))
            .collect()
    }

    pub fn leaves(&self) -> Vec<&TreeNode> {
        self.nodes
            .iter()
            .filter(|n| {
                !self
                    .nodes
                    .iter()
                    .any(|c| c.parent.as_deref() == Some(&n.id))
            })
            .collect()
    }

    fn arc_to(&self, id: &str) -> Option<&TreeArc> {
        self.arcs.iter().find(|a| a.to == id)
    }

    /// Root-to-node substitution, with coefficients reduced on the node's
    /// part.
    pub fn compose_path(&self, id: &str) -> Result<BirationalMap> {
        let node = self.node(id)?;
        let mut path = Vec::new();
        let mut cur = id.to_string();
        while let Some(arc) = self.arc_to(&cur) {
            path.push(arc);
            cur = arc.from.clone();
        }
        path.reverse();
        let Some(first) = path.first() else {
            let r = self.root().ring();
            let vars: Vec<Frac> = (0..r.n_main())
                .map(|i| Frac::from_poly(Poly::var(r, i)))
                .collect();
            let psi = vars.iter().cloned().enumerate().collect();
            return Ok(BirationalMap::general(r, r, vars, psi));
        };
        // the source carries every parameter met on the path, so inverse
        // images involving generic coordinates can be pulled back
        let root = &first.map.source;
        let lifted = Ring::with_params(
            root.field(),
            root.main_vars().to_vec(),
            node.ring().params().to_vec(),
        );
        let psi = first
            .map
            .psi
            .iter()
            .map(|(i, f)| Ok((*i, f.embed(&lifted)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut map =
            BirationalMap::general(&lifted, &first.map.target, first.map.phi.clone(), psi);
        for arc in &path[1..] {
            map = map.then(&arc.map)?;
        }
        let phi = map
            .phi
            .iter()
            .map(|f| reduce_frac(f, &node.constraints))
            .collect::<Result<Vec<_>>>()?;
        Ok(BirationalMap::general(
            &map.source,
            &map.target,
            phi,
            map.psi.clone(),
        ))
    }

    /// Re-checks every arc identity.
    pub fn verify(&self) -> Result<()> {
        for arc in &self.arcs {
            let from = self.node(&arc.from)?;
            let to = self.node(&arc.to)?;
            verify_arc(&from.b, &to.b, arc)?;
        }
        for node in &self.nodes {
            if let Some(r) = &node.resolved {
                if r.decomposition.reassemble() != node.b {
                    return Err(Error::Verification(format!("{}: reassembly", node.id)));
                }
            }
        }
        Ok(())
    }
}

/// `φ(b_from) - factor · b_to^power` vanishes, coefficientwise on the part
/// when one is recorded.
pub fn verify_arc(b_from: &Poly, b_to: &Poly, arc: &TreeArc) -> Result<()> {
    let image = arc.map.apply_poly(b_from)?;
    let to = b_to.embed(&arc.map.target)?;
    let rhs = arc.factor.mul(&Frac::from_poly(to.pow(arc.power as u32)));
    let diff = image.sub(&rhs);
    let ok = match &arc.part_constraints {
        None => diff.is_zero(),
        Some(c) => {
            let c = c.embed(&arc.map.target.param_ring())?;
            reduce_coefficients(&diff.num, &c).is_zero()
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "arc {} -> {}: φ(b) - factor·b' = {diff}",
            arc.from, arc.to
        )))
    }
}

pub fn monomial_of(f: &Frac) -> Option<Monomial> {
    let (m, c) = f.num.as_term()?;
    let (d, e) = f.den.as_term()?;
    (c.is_one() && e.is_one()).then(|| m.div(d))
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
    fn curve_tree() {
        let t = build_tree(
            &curve(),
            &TreeOptions {
                max_depth: 4,
                ..Default::default()
            },
        )
        .unwrap();
        t.verify().unwrap();
        let kids = t.children("r");
        assert_eq!(kids.len(), 4);
        assert_eq!(kids.iter().filter(|n| n.status == Status::Empty).count(), 2);
        for leaf in t.leaves() {
            assert!(
                matches!(leaf.status, Status::Resolved | Status::Empty),
                "{} {} {}",
                leaf.id,
                leaf.status,
                leaf.b
            );
        }
        let c3 = t.children("r.3");
        assert_eq!(c3.len(), 1);
        assert_eq!(c3[0].b.to_string(), "1 + x3_0_0 + x3_0_0^3*x3_0_1^7");
        assert_eq!(c3[0].status, Status::Resolved);
    }

    #[test]
    fn curve_paths() {
        let t = build_tree(
            &curve(),
            &TreeOptions {
                max_depth: 4,
                ..Default::default()
            },
        )
        .unwrap();
        let m = t.compose_path("r.3.0").unwrap();
        let phi: Vec<String> = m.phi.iter().map(|f| f.to_string()).collect();
        assert_eq!(phi, vec!["x3_0_0^-2*x3_0_1^-5", "x3_0_0^-1*x3_0_1^-3"]);
        let root = t.compose_path("r").unwrap();
        assert_eq!(root.phi[0].to_string(), "x0");
    }

    #[test]
    fn depth_zero() {
        let t = build_tree(
            &curve(),
            &TreeOptions {
                max_depth: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.root().status, Status::DepthLimited);
    }
}
