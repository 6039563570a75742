//! The Yang-Mills measure on a planar graph, realized through loop variables:
//! independent heat-kernel elements attached to the bounded faces. A spanning
//! tree fixes a free generating set of the fundamental group, one lasso per
//! bounded face; Wilson observables are rewritten over those generators and
//! evaluated on sampled lasso values.

mod sampler;
pub use sampler::{
    product_of_traces, sample_coupled_lassos, shard_rng, wilson_estimate,
    wilson_estimate_with_tree, CoupledFaceSamples, McParams, StepRule, WilsonEstimate,
};

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::group_core::{dagger, CMat, GroupError, GroupSpec};
use crate::planar_map::{LoopWord, MapError, PlanarMap, SignedEdge};

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("face-to-unbounded path is not unique: {0}")]
    AmbiguousPath(String),
    #[error("loop is based at vertex {0}, expected a vertex of the map")]
    BaseMismatch(usize),
    #[error("triangular solve failed: face {0} uses an unknown edge")]
    TriangularSolveFailed(usize),
    #[error("word uses symbol {0} absent from the configuration")]
    MissingSymbol(String),
    #[error("finite-difference step {h} is not below the smallest perturbed area {min}")]
    StepTooLarge { h: f64, min: f64 },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A spanning tree with parent pointers toward its root.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub root: usize,
    in_tree: Vec<bool>,
    /// For each vertex other than the root, the step from its parent to it.
    parent_step: Vec<Option<SignedEdge>>,
}

impl SpanningTree {
    /// Breadth-first tree from the lowest-label vertex, scanning incident
    /// edges in increasing edge order.
    pub fn breadth_first(map: &PlanarMap) -> Result<SpanningTree, MeasureError> {
        let root = (0..map.num_vertices()).min_by_key(|&v| map.vertex_label(v)).unwrap();
        Self::bfs_with(map, root, false)
    }

    /// Breadth-first tree scanning incident edges in decreasing edge order;
    /// used to check that estimates do not depend on the tree choice.
    pub fn breadth_first_reversed(map: &PlanarMap) -> Result<SpanningTree, MeasureError> {
        let root = (0..map.num_vertices()).min_by_key(|&v| map.vertex_label(v)).unwrap();
        Self::bfs_with(map, root, true)
    }

    fn bfs_with(map: &PlanarMap, root: usize, reversed: bool) -> Result<SpanningTree, MeasureError> {
        let nv = map.num_vertices();
        let mut incident: Vec<Vec<SignedEdge>> = vec![Vec::new(); nv];
        for e in 0..map.num_edges() {
            let (t, h) = map.step_endpoints(SignedEdge::fwd(e));
            incident[t].push(SignedEdge::fwd(e));
            if h != t {
                incident[h].push(SignedEdge::rev(e));
            }
        }
        if reversed {
            for inc in incident.iter_mut() {
                inc.reverse();
            }
        }
        let mut parent_step = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut in_tree = vec![false; map.num_edges()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &s in &incident[v] {
                let (_, head) = map.step_endpoints(s);
                if !seen[head] {
                    seen[head] = true;
                    reached += 1;
                    in_tree[s.edge] = true;
                    parent_step[head] = Some(s);
                    queue.push_back(head);
                }
            }
        }
        if reached != nv {
            return Err(MeasureError::Disconnected);
        }
        Ok(SpanningTree { root, in_tree, parent_step })
    }

    /// Build a tree from an explicit edge set.
    pub fn from_edges(map: &PlanarMap, edges: &[usize]) -> Result<SpanningTree, MeasureError> {
        let mut in_tree = vec![false; map.num_edges()];
        for &e in edges {
            in_tree[e] = true;
        }
        let root = (0..map.num_vertices()).min_by_key(|&v| map.vertex_label(v)).unwrap();
        // BFS restricted to the given edges.
        let nv = map.num_vertices();
        let mut parent_step = vec![None; nv];
        let mut seen = vec![false; nv];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &e in edges {
                for s in [SignedEdge::fwd(e), SignedEdge::rev(e)] {
                    let (t, h) = map.step_endpoints(s);
                    if t == v && !seen[h] {
                        seen[h] = true;
                        reached += 1;
                        parent_step[h] = Some(s);
                        queue.push_back(h);
                    }
                }
            }
        }
        if reached != nv || edges.len() != nv - 1 {
            return Err(MeasureError::Disconnected);
        }
        Ok(SpanningTree { root, in_tree, parent_step })
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.in_tree[edge]
    }

    pub fn len(&self) -> usize {
        self.in_tree.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Path from the root to v along tree edges.
    pub fn path_from_root(&self, map: &PlanarMap, mut v: usize) -> Vec<SignedEdge> {
        let mut rev = Vec::new();
        while let Some(s) = self.parent_step[v] {
            rev.push(s);
            let (t, _) = map.step_endpoints(s);
            v = t;
        }
        rev.reverse();
        rev
    }
}

/// A word over the lasso generators: (bounded face id, forward flag).
pub type LassoWord = Vec<(usize, bool)>;

fn reduce_lasso_word(word: &mut LassoWord) {
    let mut out: LassoWord = Vec::with_capacity(word.len());
    for &(f, d) in word.iter() {
        if out.last().is_some_and(|&(g, e)| g == f && e != d) {
            out.pop();
        } else {
            out.push((f, d));
        }
    }
    *word = out;
}

/// One free generator of the fundamental group, attached to a bounded face.
#[derive(Debug, Clone)]
pub struct LassoGenerator {
    pub face: usize,
    /// The distinguished non-tree edge, oriented to bound the face positively.
    pub distinguished: SignedEdge,
    /// The reduced lasso word: tree tail, once around the face, tail back.
    pub word: Vec<SignedEdge>,
    /// Dual-tree distance from the unbounded face.
    pub depth: usize,
}

/// Levy's face-indexed generating set, ordered for triangular elimination
/// (deepest faces first, so each lasso introduces exactly one new edge).
#[derive(Debug, Clone)]
pub struct LassoBasis {
    pub base: usize,
    pub tree: SpanningTree,
    pub generators: Vec<LassoGenerator>,
    face_position: HashMap<usize, usize>,
}

impl LassoBasis {
    pub fn position_of_face(&self, face: usize) -> Option<usize> {
        self.face_position.get(&face).copied()
    }
}

/// Construct the lasso basis for the given tree, based at `base`.
pub fn lasso_basis(
    map: &PlanarMap,
    tree: &SpanningTree,
    base: usize,
) -> Result<LassoBasis, MeasureError> {
    if base >= map.num_vertices() {
        return Err(MeasureError::BaseMismatch(base));
    }
    let unb = map.unbounded_face();
    // Dual graph through non-tree edges; it must be a tree on the faces.
    let mut dual_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); map.num_faces()];
    let mut non_tree = 0;
    for e in 0..map.num_edges() {
        if tree.contains(e) {
            continue;
        }
        non_tree += 1;
        let [t, h] = map.edge_ends(e);
        let (ft, fh) = (map.face_of_half(t), map.face_of_half(h));
        if ft == fh {
            return Err(MeasureError::AmbiguousPath(format!(
                "non-tree edge {} has the same face on both sides",
                map.edge_label(e)
            )));
        }
        dual_adj[ft].push((fh, e));
        dual_adj[fh].push((ft, e));
    }
    if non_tree != map.num_faces() - 1 {
        return Err(MeasureError::AmbiguousPath(format!(
            "{} non-tree edges for {} bounded faces",
            non_tree,
            map.num_faces() - 1
        )));
    }
    // BFS from the unbounded face; cycles would make the face sequence
    // non-unique.
    let mut depth = vec![usize::MAX; map.num_faces()];
    let mut parent_edge = vec![usize::MAX; map.num_faces()];
    depth[unb] = 0;
    let mut queue = VecDeque::from([unb]);
    let mut reached = 1;
    while let Some(f) = queue.pop_front() {
        for &(g, e) in &dual_adj[f] {
            if depth[g] == usize::MAX {
                depth[g] = depth[f] + 1;
                parent_edge[g] = e;
                reached += 1;
                queue.push_back(g);
            }
        }
    }
    if reached != map.num_faces() {
        return Err(MeasureError::AmbiguousPath("dual graph is disconnected".into()));
    }

    // Deepest faces first; ties by face id.
    let mut order: Vec<usize> = map.bounded_faces().collect();
    order.sort_by_key(|&f| (usize::MAX - depth[f], f));

    let mut generators = Vec::with_capacity(order.len());
    let mut face_position = HashMap::new();
    for &f in &order {
        let pos_word = map.positive_face_word(f);
        let k = pos_word
            .iter()
            .position(|s| s.edge == parent_edge[f])
            .expect("distinguished edge lies on its face boundary");
        let distinguished = pos_word[k];
        let mut boundary: Vec<SignedEdge> = Vec::with_capacity(pos_word.len());
        boundary.extend_from_slice(&pos_word[k..]);
        boundary.extend_from_slice(&pos_word[..k]);
        let (start, _) = map.step_endpoints(distinguished);
        let tail = tree.path_from_root(map, start);
        let base_tail = tree.path_from_root(map, base);
        // Path base -> start inside the tree: reverse(base->root) ++ (root->start),
        // then freely reduced.
        let mut word: Vec<SignedEdge> = Vec::new();
        word.extend(base_tail.iter().rev().map(|s| s.inverse()));
        word.extend_from_slice(&tail);
        word.extend_from_slice(&boundary);
        word.extend(tail.iter().rev().map(|s| s.inverse()));
        word.extend_from_slice(&base_tail);
        let lw = LoopWord { base, steps: word }.reduced();
        debug_assert!(map.check_loop(&lw).is_ok());
        face_position.insert(f, generators.len());
        generators.push(LassoGenerator {
            face: f,
            distinguished,
            word: lw.steps,
            depth: depth[f],
        });
    }

    // Triangular property: each lasso contains its own distinguished edge
    // exactly once and otherwise only distinguished edges of earlier faces.
    let dist_pos: HashMap<usize, usize> =
        generators.iter().enumerate().map(|(i, g)| (g.distinguished.edge, i)).collect();
    for (i, g) in generators.iter().enumerate() {
        let mut own = 0;
        for s in &g.word {
            if tree.contains(s.edge) {
                continue;
            }
            match dist_pos.get(&s.edge) {
                Some(&j) if j == i => own += 1,
                Some(&j) if j < i => {}
                _ => {
                    return Err(MeasureError::AmbiguousPath(format!(
                        "lasso of face {} is not triangular",
                        g.face
                    )))
                }
            }
        }
        if own != 1 {
            return Err(MeasureError::AmbiguousPath(format!(
                "distinguished edge of face {} appears {} times",
                g.face, own
            )));
        }
    }

    Ok(LassoBasis { base, tree: tree.clone(), generators, face_position })
}

/// Rewrite a closed walk as a word over the lasso generators. Loops based
/// away from the basis base are conjugated along the tree, which leaves every
/// trace observable unchanged.
pub fn loop_in_lassos(
    map: &PlanarMap,
    basis: &LassoBasis,
    word: &LoopWord,
) -> Result<LassoWord, MeasureError> {
    map.check_loop(word)?;
    // Expansion of the free generator of each non-tree edge over the lassos.
    let mut expansion: HashMap<usize, LassoWord> = HashMap::new();
    for gen in &basis.generators {
        // lasso = prefix . dist^eps . rest, with prefix over tree edges and
        // rest over tree edges and already-expanded generators.
        let mut rest: LassoWord = Vec::new();
        let mut dist_sign = true;
        let mut seen_dist = false;
        for s in &gen.word {
            if basis.tree.contains(s.edge) {
                continue;
            }
            if s.edge == gen.distinguished.edge && !seen_dist {
                seen_dist = true;
                dist_sign = s.forward;
                continue;
            }
            let exp = expansion
                .get(&s.edge)
                .ok_or(MeasureError::TriangularSolveFailed(gen.face))?;
            if s.forward {
                rest.extend_from_slice(exp);
            } else {
                rest.extend(exp.iter().rev().map(|&(f, d)| (f, !d)));
            }
        }
        // lambda_F = g^eps . rest  =>  g^eps = lambda_F . rest^-1.
        let mut ge: LassoWord = vec![(gen.face, true)];
        ge.extend(rest.iter().rev().map(|&(f, d)| (f, !d)));
        if !dist_sign {
            ge = ge.iter().rev().map(|&(f, d)| (f, !d)).collect();
        }
        reduce_lasso_word(&mut ge);
        expansion.insert(gen.distinguished.edge, ge);
    }

    let mut out: LassoWord = Vec::new();
    for s in &word.steps {
        if basis.tree.contains(s.edge) {
            continue;
        }
        let exp = expansion
            .get(&s.edge)
            .ok_or_else(|| MeasureError::MissingSymbol(format!("edge {}", map.edge_label(s.edge))))?;
        if s.forward {
            out.extend_from_slice(exp);
        } else {
            out.extend(exp.iter().rev().map(|&(f, d)| (f, !d)));
        }
    }
    reduce_lasso_word(&mut out);
    Ok(out)
}

/// Group values attached to the bounded faces (the sampled loop variables).
#[derive(Debug, Clone)]
pub struct LassoConfig {
    /// Indexed by face id; the unbounded entry is the identity.
    pub values: Vec<CMat>,
}

/// Group values attached to the edges (forward orientation).
#[derive(Debug, Clone)]
pub struct EdgeConfig {
    pub values: Vec<CMat>,
}

/// A map from vertices to group elements.
#[derive(Debug, Clone)]
pub struct GaugeTransform {
    pub values: Vec<CMat>,
}

/// Holonomy of an edge word: the ordered product of edge values in reverse
/// traversal order, with inverses for reversed steps.
pub fn holonomy_edges(spec: &GroupSpec, word: &[SignedEdge], config: &EdgeConfig) -> CMat {
    let mut acc = spec.identity();
    for s in word {
        let v = &config.values[s.edge];
        let m = if s.forward { v.clone() } else { dagger(v) };
        acc = m.dot(&acc);
    }
    acc
}

/// Holonomy of a lasso word on sampled lasso values.
pub fn holonomy_lassos(spec: &GroupSpec, word: &LassoWord, config: &LassoConfig) -> CMat {
    let mut acc = spec.identity();
    for &(f, fwd) in word {
        let v = &config.values[f];
        let m = if fwd { v.clone() } else { dagger(v) };
        acc = m.dot(&acc);
    }
    acc
}

/// Discrete gauge transformation of the edge variables:
/// a_e -> g(head)^-1 a_e g(tail).
pub fn apply_gauge(map: &PlanarMap, config: &EdgeConfig, g: &GaugeTransform) -> EdgeConfig {
    let values = (0..map.num_edges())
        .map(|e| {
            let (t, h) = map.step_endpoints(SignedEdge::fwd(e));
            dagger(&g.values[h]).dot(&config.values[e]).dot(&g.values[t])
        })
        .collect();
    EdgeConfig { values }
}

/// Tree-gauge edge configuration reproducing the given lasso values: every
/// tree edge carries the identity and the non-tree edges are solved for in
/// triangular order, so each lasso word evaluates to its sampled value.
pub fn edges_from_lassos(
    map: &PlanarMap,
    spec: &GroupSpec,
    basis: &LassoBasis,
    lassos: &LassoConfig,
) -> Result<EdgeConfig, MeasureError> {
    let mut values: Vec<Option<CMat>> = vec![None; map.num_edges()];
    for e in 0..map.num_edges() {
        if basis.tree.contains(e) {
            values[e] = Some(spec.identity());
        }
    }
    for gen in &basis.generators {
        // Split the lasso word around its distinguished step.
        let pos = gen
            .word
            .iter()
            .position(|s| s.edge == gen.distinguished.edge)
            .expect("distinguished edge present");
        let hol_part = |part: &[SignedEdge]| -> Result<CMat, MeasureError> {
            let mut acc = spec.identity();
            for s in part {
                let v = values[s.edge]
                    .as_ref()
                    .ok_or(MeasureError::TriangularSolveFailed(gen.face))?;
                let m = if s.forward { v.clone() } else { dagger(v) };
                acc = m.dot(&acc);
            }
            Ok(acc)
        };
        let hu = hol_part(&gen.word[..pos])?;
        let hw = hol_part(&gen.word[pos + 1..])?;
        // hol(word) = hw . V^eps . hu = lasso value.
        let target = &lassos.values[gen.face];
        let v_eps = dagger(&hw).dot(target).dot(&dagger(&hu));
        let v = if gen.word[pos].forward { v_eps } else { dagger(&v_eps) };
        values[gen.word[pos].edge] = Some(v);
    }
    let values: Option<Vec<CMat>> = values.into_iter().collect();
    values
        .map(|values| EdgeConfig { values })
        .ok_or(MeasureError::TriangularSolveFailed(usize::MAX))
}
