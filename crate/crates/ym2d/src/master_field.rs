//! Wilson-loop values in the large-N limit, computed recursively.
//!
//! For a loop with only simple crossings, the per-crossing alternating
//! area-derivative identity factorizes in the limit: the alternating sum of
//! derivatives equals the product of the two split-loop values. Together
//! with the unit row dPhi/dt = -Phi/2 for each bounded face sharing a
//! once-traversed edge with the unbounded face, these relations determine
//! every face-area derivative. The solver assembles that linear system at
//! each point of the ray areas(s) = s * a and integrates all loops of the
//! split closure in lockstep from Phi(0) = 1.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::group_core::GroupSpec;
use crate::planar_map::{
    crossing_frames, reduce_subloop, split_loop, AreaVector, LoopWord, MapError, PlanarMap,
};
use crate::ym_measure::{wilson_estimate, McParams, MeasureError, StepRule, WilsonEstimate};

#[derive(Debug, Error)]
pub enum MasterError {
    #[error("derivative system is underdetermined: rank {rank} for {cols} bounded faces")]
    UnderdeterminedSystem { rank: usize, cols: usize },
    #[error("derivative system is inconsistent: least-squares residual {0}")]
    InconsistentSystem(f64),
    #[error("step halving changed the value by {0}, above 1e-8")]
    NonConvergent(f64),
    #[error("loop has a non-simple self-intersection at vertex {0}")]
    NonSimple(usize),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Canonical form of a (map, loop) pair, invariant under relabeling of
/// vertices, edges and faces, cyclic rotation of the word, and mirroring
/// (Wilson values do not depend on the orientation of the plane). Equal keys
/// imply pairs isomorphic up to reflection. Areas, when supplied, are folded
/// in using the canonical face order.
pub fn canonical_key(map: &PlanarMap, word: &LoopWord, areas: Option<&AreaVector>) -> String {
    let n = word.steps.len();
    let mirrored = map.mirrored();
    let mut best: Option<String> = None;
    for m in [map, &mirrored] {
        for r in 0..n.max(1) {
            let enc = encode_rotation(m, word, r, areas);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    best.unwrap_or_default()
}

fn encode_rotation(
    map: &PlanarMap,
    word: &LoopWord,
    start: usize,
    areas: Option<&AreaVector>,
) -> String {
    let n = word.steps.len();
    let mut edge_no: HashMap<usize, usize> = HashMap::new();
    let mut edge_first_fwd: HashMap<usize, bool> = HashMap::new();
    let mut vertex_no: HashMap<usize, usize> = HashMap::new();
    let mut word_code = Vec::with_capacity(n);
    let mut at = {
        let s = word.steps[start];
        let (t, _) = map.step_endpoints(s);
        t
    };
    let mut touch_vertex = |v: usize, table: &mut HashMap<usize, usize>| {
        let next = table.len();
        *table.entry(v).or_insert(next)
    };
    touch_vertex(at, &mut vertex_no);
    for i in 0..n {
        let s = word.steps[(start + i) % n];
        let next_no = edge_no.len();
        let e = *edge_no.entry(s.edge).or_insert_with(|| {
            edge_first_fwd.insert(s.edge, s.forward);
            next_no
        });
        let rel = s.forward == edge_first_fwd[&s.edge];
        word_code.push((e, rel));
        let (_, head) = map.step_endpoints(s);
        at = head;
        touch_vertex(at, &mut vertex_no);
    }
    // Deterministically number anything the word did not reach.
    let mut frontier: Vec<usize> = (0..vertex_no.len()).map(|_| 0).collect();
    for (v, &i) in &vertex_no {
        frontier[i] = *v;
    }
    let mut qi = 0;
    while qi < frontier.len() {
        let v = frontier[qi];
        qi += 1;
        for &h in map.rotation(v) {
            let e = map.edge_of_half(h);
            let next_no = edge_no.len();
            edge_no.entry(e).or_insert_with(|| {
                edge_first_fwd.insert(e, map.edge_ends(e)[0] == h);
                next_no
            });
            let w = map.half_at_vertex(map.opposite(h));
            if !vertex_no.contains_key(&w) {
                vertex_no.insert(w, vertex_no.len());
                frontier.push(w);
            }
        }
    }
    // Encode each half as (edge number, departing-end flag).
    let half_code = |h: usize| -> (usize, u8) {
        let e = map.edge_of_half(h);
        let tail_half = if edge_first_fwd[&e] { map.edge_ends(e)[0] } else { map.edge_ends(e)[1] };
        (edge_no[&e], u8::from(h != tail_half))
    };
    let mut rot_codes: Vec<(usize, String)> = (0..map.num_vertices())
        .map(|v| {
            let codes: Vec<(usize, u8)> = map.rotation(v).iter().map(|&h| half_code(h)).collect();
            // Lexicographically minimal cyclic rotation, direction preserved.
            let k = codes.len();
            let mut bests: Option<Vec<(usize, u8)>> = None;
            for r in 0..k {
                let cand: Vec<(usize, u8)> = (0..k).map(|i| codes[(r + i) % k]).collect();
                if bests.as_ref().is_none_or(|b| cand < *b) {
                    bests = Some(cand);
                }
            }
            (vertex_no[&v], format!("{:?}", bests.unwrap()))
        })
        .collect();
    rot_codes.sort();
    // Faces in canonical order: by minimal boundary half code.
    let mut face_codes: Vec<(Vec<(usize, u8)>, usize)> = (0..map.num_faces())
        .map(|f| {
            let mut b: Vec<(usize, u8)> = map.face_boundary(f).iter().map(|&h| half_code(h)).collect();
            b.sort();
            (b, f)
        })
        .collect();
    face_codes.sort();
    let unb_pos = face_codes.iter().position(|&(_, f)| f == map.unbounded_face()).unwrap();
    let area_code = areas.map(|a| {
        let bits: Vec<u64> = face_codes.iter().map(|&(_, f)| a.get(f).to_bits()).collect();
        format!("{bits:?}")
    });
    format!(
        "w{:?}|r{:?}|u{}|a{}",
        word_code,
        rot_codes,
        unb_pos,
        area_code.unwrap_or_default()
    )
}

/// Diagnostics of the assembled derivative systems.
#[derive(Debug, Clone, Copy)]
pub struct SystemDiagnostics {
    pub min_singular_value: f64,
    pub max_residual: f64,
    pub rows: usize,
    pub cols: usize,
}

/// Result of a master-field evaluation.
#[derive(Debug, Clone)]
pub struct MasterFieldResult {
    /// tau(hol(L)) at the given areas.
    pub value: f64,
    /// d tau / d area, per face of the input map (zero for the unbounded face).
    pub derivatives: Vec<f64>,
    pub diagnostics: SystemDiagnostics,
    pub recursion_depth: usize,
    pub memo_nodes: usize,
    pub memo_hits: usize,
    pub ode_steps: usize,
}

/// The linear system determining all bounded-face derivatives of one loop:
/// one row per simple crossing (the alternating +-1 pattern over its sector
/// faces, coincident faces accumulated, unbounded skipped) and one unit row
/// per (bounded face, once-traversed edge shared with the unbounded face).
#[derive(Debug, Clone)]
pub struct DerivativeSystem {
    /// Column order: bounded face ids.
    pub faces: Vec<usize>,
    pub matrix: DMatrix<f64>,
    /// Row descriptors: crossing rows reference the split pair by node id.
    pub crossing_children: Vec<(usize, usize)>,
    pub unbounded_rows: usize,
}

enum NodeKind {
    Leaf { enclosed: f64 },
    Internal { system: DerivativeSystem, svd: nalgebra::linalg::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>, rank_eps: f64 },
}

struct Node {
    target_areas: Vec<f64>, // per column of the system (empty for leaves)
    kind: NodeKind,
    depth: usize,
}

struct Builder {
    nodes: Vec<Node>,
    memo: HashMap<String, usize>,
    hits: usize,
    max_depth: usize,
}

impl Builder {
    fn build(&mut self, map: &PlanarMap, word: &LoopWord, areas: &AreaVector, depth: usize) -> Result<usize, MasterError> {
        let (map, word, merge) = reduce_subloop(map, word)?;
        let areas = merge.merge_areas(areas, &map)?;
        let key = canonical_key(&map, &word, Some(&areas));
        if let Some(&id) = self.memo.get(&key) {
            self.hits += 1;
            return Ok(id);
        }
        self.max_depth = self.max_depth.max(depth);
        let scan = crossing_frames(&map, &word)?;
        if let Some(&v) = scan.nonsimple.first() {
            return Err(MasterError::NonSimple(v));
        }
        if scan.frames.is_empty() {
            // A crossing-free reduced loop must be a Jordan curve on its
            // carrier: every vertex of degree 2 and each edge traversed once.
            let jordan = (0..map.num_vertices()).all(|v| map.degree(v) == 2)
                && word.steps.len() == map.num_edges()
                && (0..map.num_edges()).all(|e| map.edge_multiplicity(&word, e) == 1);
            if !jordan {
                return Err(MasterError::NonSimple(word.base));
            }
            let enclosed = areas.total_bounded(&map);
            let id = self.nodes.len();
            self.nodes.push(Node {
                target_areas: Vec::new(),
                kind: NodeKind::Leaf { enclosed },
                depth,
            });
            self.memo.insert(key, id);
            return Ok(id);
        }

        let faces: Vec<usize> = map.bounded_faces().collect();
        let col: HashMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut children = Vec::new();
        for frame in &scan.frames {
            let mut row = vec![0.0; faces.len()];
            for (f, c) in frame.alternating_coefficients(&map) {
                row[col[&f]] = c;
            }
            let (l1, l2) = split_loop(&word, frame);
            let c1 = self.build(&map, &l1, &areas, depth + 1)?;
            let c2 = self.build(&map, &l2, &areas, depth + 1)?;
            rows.push(row);
            children.push((c1, c2));
        }
        let mut unbounded_rows = 0;
        for &f in &faces {
            for e in map.edges_shared_with_unbounded(f) {
                if map.edge_multiplicity(&word, e) == 1 {
                    let mut row = vec![0.0; faces.len()];
                    row[col[&f]] = 1.0;
                    rows.push(row);
                    unbounded_rows += 1;
                }
            }
        }
        let matrix = DMatrix::from_fn(rows.len(), faces.len(), |i, j| rows[i][j]);
        let svd = nalgebra::linalg::SVD::new(matrix.clone(), true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let rank_eps = smax * 1e-10;
        let rank = svd.singular_values.iter().filter(|&&s| s > rank_eps).count();
        if rank < faces.len() {
            return Err(MasterError::UnderdeterminedSystem { rank, cols: faces.len() });
        }
        let target_areas: Vec<f64> = faces.iter().map(|&f| areas.get(f)).collect();
        let system = DerivativeSystem {
            faces,
            matrix,
            crossing_children: children,
            unbounded_rows,
        };
        let id = self.nodes.len();
        self.nodes.push(Node {
            target_areas,
            kind: NodeKind::Internal { system, svd, rank_eps },
            depth,
        });
        self.memo.insert(key, id);
        Ok(id)
    }
}

struct Integrator<'a> {
    nodes: &'a [Node],
    internal_ids: Vec<usize>,
    index_of: HashMap<usize, usize>,
    ray_power: f64,
    max_residual: f64,
    min_singular: f64,
}

impl<'a> Integrator<'a> {
    fn new(nodes: &'a [Node], ray_power: f64) -> Integrator<'a> {
        let internal_ids: Vec<usize> = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n.kind, NodeKind::Internal { .. }))
            .map(|(i, _)| i)
            .collect();
        let index_of = internal_ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        Integrator { nodes, internal_ids, index_of, ray_power, max_residual: 0.0, min_singular: f64::INFINITY }
    }

    fn value_of(&self, id: usize, s: f64, state: &[f64]) -> f64 {
        match &self.nodes[id].kind {
            NodeKind::Leaf { enclosed } => (-s.powf(self.ray_power) * enclosed / 2.0).exp(),
            NodeKind::Internal { .. } => state[self.index_of[&id]],
        }
    }

    /// Solve the derivative system of one node; returns the per-column
    /// derivative vector d tau / d area at scaled areas s^p a. The
    /// least-squares residual certifies consistency of the redundant rows,
    /// but only for states on the solution curve: the interior stages of a
    /// Runge-Kutta step deviate from it by the local truncation error, so
    /// the 1e-8 assertion applies to on-curve solves only.
    fn solve_node(
        &mut self,
        id: usize,
        s: f64,
        state: &[f64],
        on_curve: bool,
    ) -> Result<DVector<f64>, MasterError> {
        let NodeKind::Internal { system, svd, rank_eps } = &self.nodes[id].kind else {
            unreachable!()
        };
        let phi = self.value_of(id, s, state);
        let mut rhs = DVector::zeros(system.matrix.nrows());
        for (i, &(c1, c2)) in system.crossing_children.iter().enumerate() {
            rhs[i] = self.value_of(c1, s, state) * self.value_of(c2, s, state);
        }
        let base = system.crossing_children.len();
        for i in 0..system.unbounded_rows {
            rhs[base + i] = -0.5 * phi;
        }
        let sol = svd.solve(&rhs, *rank_eps).map_err(|e| MasterError::InconsistentSystem(f64::NAN.max({
            let _ = e;
            f64::NAN
        })))?;
        let resid = (&system.matrix * &sol - &rhs).amax();
        let scale = rhs.amax().max(1.0);
        if on_curve {
            if resid > 1e-8 * scale {
                return Err(MasterError::InconsistentSystem(resid));
            }
            self.max_residual = self.max_residual.max(resid);
        }
        let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
        self.min_singular = self.min_singular.min(smin);
        Ok(sol)
    }

    /// dPhi/ds for every internal node at (s, state).
    fn derivative(
        &mut self,
        s: f64,
        state: &[f64],
        on_curve: bool,
    ) -> Result<Vec<f64>, MasterError> {
        let p = self.ray_power;
        let chain = if p == 1.0 { 1.0 } else { p * s.powf(p - 1.0) };
        let mut out = vec![0.0; state.len()];
        for k in 0..self.internal_ids.len() {
            let id = self.internal_ids[k];
            let sol = self.solve_node(id, s, state, on_curve)?;
            let node = &self.nodes[id];
            out[k] = chain
                * node
                    .target_areas
                    .iter()
                    .zip(sol.iter())
                    .map(|(a, d)| a * d)
                    .sum::<f64>();
        }
        Ok(out)
    }

    fn integrate(&mut self, steps: usize) -> Result<Vec<f64>, MasterError> {
        let mut state = vec![1.0; self.internal_ids.len()];
        let ds = 1.0 / steps as f64;
        for i in 0..steps {
            let s = i as f64 * ds;
            let k1 = self.derivative(s, &state, true)?;
            let y2: Vec<f64> = state.iter().zip(&k1).map(|(y, k)| y + 0.5 * ds * k).collect();
            let k2 = self.derivative(s + 0.5 * ds, &y2, false)?;
            let y3: Vec<f64> = state.iter().zip(&k2).map(|(y, k)| y + 0.5 * ds * k).collect();
            let k3 = self.derivative(s + 0.5 * ds, &y3, false)?;
            let y4: Vec<f64> = state.iter().zip(&k3).map(|(y, k)| y + ds * k).collect();
            let k4 = self.derivative(s + ds, &y4, false)?;
            for j in 0..state.len() {
                state[j] += ds / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        Ok(state)
    }
}

const DEFAULT_STEPS: usize = 256;

/// Evaluate tau(hol(L)) at the given areas by integrating the coupled
/// derivative systems along the straight ray from zero area.
pub fn master_value(
    map: &PlanarMap,
    word: &LoopWord,
    areas: &AreaVector,
) -> Result<MasterFieldResult, MasterError> {
    master_value_with(map, word, areas, DEFAULT_STEPS, 1.0)
}

/// As [`master_value`], with explicit step count and ray parametrization
/// areas(s) = s^p a (any p > 0 gives the same endpoint value).
pub fn master_value_with(
    map: &PlanarMap,
    word: &LoopWord,
    areas: &AreaVector,
    steps: usize,
    ray_power: f64,
) -> Result<MasterFieldResult, MasterError> {
    // Root reduction happens inside the builder; we reduce here once more to
    // know the face correspondence for reporting derivatives.
    let (_rmap, _rword, merge) = reduce_subloop(map, word)?;
    let mut builder = Builder { nodes: Vec::new(), memo: HashMap::new(), hits: 0, max_depth: 0 };
    let root = builder.build(map, word, areas, 0)?;
    let nodes = builder.nodes;

    let run = |steps: usize| -> Result<(f64, Vec<f64>, SystemDiagnostics), MasterError> {
        let mut integ = Integrator::new(&nodes, ray_power);
        let state = integ.integrate(steps)?;
        let value = integ.value_of(root, 1.0, &state);
        // Final derivative vector at s = 1 on the root system.
        let derivs_root: Vec<(usize, f64)> = match &nodes[root].kind {
            NodeKind::Leaf { .. } => Vec::new(),
            NodeKind::Internal { system, .. } => {
                let sol = integ.solve_node(root, 1.0, &state, true)?;
                system.faces.iter().copied().zip(sol.iter().copied()).collect()
            }
        };
        let mut derivatives = vec![0.0; map.num_faces()];
        for f in 0..map.num_faces() {
            let child = merge.parent_to_child[f];
            if let Some(&(_, d)) = derivs_root.iter().find(|&&(cf, _)| cf == child) {
                derivatives[f] = d;
            } else if matches!(nodes[root].kind, NodeKind::Leaf { .. })
                && child != merge.parent_to_child[map.unbounded_face()]
            {
                // Jordan case: dPhi/dt = -Phi/2 for the single enclosed area.
                derivatives[f] = -0.5 * value;
            }
        }
        let diag = SystemDiagnostics {
            min_singular_value: if integ.min_singular.is_finite() { integ.min_singular } else { 0.0 },
            max_residual: integ.max_residual,
            rows: nodes
                .iter()
                .filter_map(|n| match &n.kind {
                    NodeKind::Internal { system, .. } => Some(system.matrix.nrows()),
                    _ => None,
                })
                .max()
                .unwrap_or(0),
            cols: nodes
                .iter()
                .filter_map(|n| match &n.kind {
                    NodeKind::Internal { system, .. } => Some(system.faces.len()),
                    _ => None,
                })
                .max()
                .unwrap_or(0),
        };
        Ok((value, derivatives, diag))
    };

    let (value, derivatives, diag) = run(steps)?;
    let (check, _, _) = run(steps * 2)?;
    if (value - check).abs() > 1e-8 {
        return Err(MasterError::NonConvergent((value - check).abs()));
    }
    Ok(MasterFieldResult {
        value: check,
        derivatives,
        diagnostics: diag,
        recursion_depth: builder.max_depth,
        memo_nodes: nodes.len(),
        memo_hits: builder.hits,
        ode_steps: steps,
    })
}

/// Large-N Monte Carlo cross-check: the finite-N estimator at N = 512, whose
/// 1/N bias is budgeted at 0.02 together with the coarse walk.
pub fn mc_oracle(
    map: &PlanarMap,
    word: &LoopWord,
    areas: &AreaVector,
    samples: usize,
    seed: u64,
) -> Result<WilsonEstimate, MeasureError> {
    let spec = GroupSpec::new(512);
    let params = McParams { samples, seed, shards: samples.min(8), steps: StepRule::Coarse };
    wilson_estimate(map, areas, &[word.clone()], &spec, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::examples::*;

    #[test]
    fn simple_loop_value() {
        let ex = standard_example(ExampleName::Simple, &[2.0]).unwrap();
        let r = master_value(&ex.map, &ex.loops["L"], &ex.areas).unwrap();
        assert!((r.value - (-1.0f64).exp()).abs() < 1e-10);
        // dPhi/dt = -Phi/2.
        let f = ex.map.bounded_faces().next().unwrap();
        assert!((r.derivatives[f] + 0.5 * r.value).abs() < 1e-10);
    }

    #[test]
    fn zero_areas_give_one() {
        let ex = standard_example(ExampleName::FigureEight, &[0.0, 0.0]).unwrap();
        let r = master_value(&ex.map, &ex.loops["L"], &ex.areas).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn figure_eight_factorizes() {
        let ex = standard_example(ExampleName::FigureEight, &[0.7, 1.3]).unwrap();
        let r = master_value(&ex.map, &ex.loops["L"], &ex.areas).unwrap();
        let want = (-(0.7f64 + 1.3) / 2.0).exp();
        assert!((r.value - want).abs() < 1e-8, "{} vs {want}", r.value);
    }

    #[test]
    fn double_wound_closed_form() {
        // tau = e^{-(s + a/2)} (1 - s) for inner area s and annulus a.
        for (s, a) in [(0.5, 0.0), (1.0, 0.0), (2.0, 0.0), (0.8, 0.6), (1.5, 1.0)] {
            let ex = standard_example(ExampleName::DoubleWound, &[s, a]).unwrap();
            let r = master_value(&ex.map, &ex.loops["L"], &ex.areas).unwrap();
            let want = (-(s + a / 2.0)).exp() * (1.0 - s);
            assert!(
                (r.value - want).abs() < 1e-8,
                "s={s} a={a}: {} vs {want}",
                r.value
            );
        }
    }

    #[test]
    fn fig2_example_closed_form() {
        let (u, d, w) = (0.7, 1.1, 0.9);
        let ex = standard_example(ExampleName::Fig2Example, &[u, d, w]).unwrap();
        let r = master_value(&ex.map, &ex.loops["L"], &ex.areas).unwrap();
        let want = (-(u + d + w) / 2.0).exp();
        assert!((r.value - want).abs() < 1e-8, "{} vs {want}", r.value);
        assert!(r.recursion_depth >= 1);
    }

    #[test]
    fn fig8_example_runs_and_is_bounded() {
        let ex = standard_example(ExampleName::Fig8Example, &[1.0; 4]).unwrap();
        let r = master_value(&ex.map, &ex.loops["L"], &ex.areas).unwrap();
        assert!(r.value.abs() <= 1.0 + 1e-9);
        assert!(r.diagnostics.max_residual < 1e-8);
        // Derivative consistency: finite differences in each bounded area.
        let h = 1e-4;
        for f in ex.map.bounded_faces() {
            let mut up = ex.areas.clone();
            up.set(f, up.get(f) + h);
            let mut dn = ex.areas.clone();
            dn.set(f, dn.get(f) - h);
            let vu = master_value(&ex.map, &ex.loops["L"], &up).unwrap().value;
            let vd = master_value(&ex.map, &ex.loops["L"], &dn).unwrap().value;
            let fd = (vu - vd) / (2.0 * h);
            assert!(
                (fd - r.derivatives[f]).abs() < 1e-5,
                "face {f}: fd {fd} vs solved {}",
                r.derivatives[f]
            );
        }
    }

    #[test]
    fn ray_parametrization_is_immaterial() {
        let ex = standard_example(ExampleName::DoubleWound, &[0.9, 0.7]).unwrap();
        let a = master_value_with(&ex.map, &ex.loops["L"], &ex.areas, 256, 1.0).unwrap();
        let b = master_value_with(&ex.map, &ex.loops["L"], &ex.areas, 256, 2.0).unwrap();
        assert!((a.value - b.value).abs() < 1e-8);
    }

    #[test]
    fn symmetric_figure_eight_hits_cache() {
        let ex = standard_example(ExampleName::FigureEight, &[1.0, 1.0]).unwrap();
        let r = master_value(&ex.map, &ex.loops["L"], &ex.areas).unwrap();
        assert!(r.memo_hits >= 1, "equal lobes should share a node");
    }

    #[test]
    fn canonical_key_distinguishes_and_identifies() {
        let fe1 = standard_example(ExampleName::FigureEight, &[1.0, 1.0]).unwrap();
        // Relabeled figure eight: same structure, different labels.
        let relabeled = crate::planar_map::PlanarMap::build(
            &[(5, vec![10, 30, 40, 20])],
            &[(3, [10, 20]), (7, [30, 40])],
            20,
        )
        .unwrap();
        let k1 = canonical_key(&fe1.map, &fe1.loops["L"], None);
        let k2 = canonical_key(
            &relabeled,
            &crate::planar_map::LoopWord {
                base: 0,
                steps: vec![
                    crate::planar_map::SignedEdge::fwd(0),
                    crate::planar_map::SignedEdge::fwd(1),
                ],
            },
            None,
        );
        assert_eq!(k1, k2);
        let simple = standard_example(ExampleName::Simple, &[1.0]).unwrap();
        let k3 = canonical_key(&simple.map, &simple.loops["L"], None);
        assert_ne!(k1, k3);
        // Cyclic rotation of the word leaves the key unchanged.
        let rotated = crate::planar_map::LoopWord {
            base: 0,
            steps: vec![fe1.loops["L"].steps[1], fe1.loops["L"].steps[0]],
        };
        assert_eq!(canonical_key(&fe1.map, &rotated, None), k1);
    }
}
