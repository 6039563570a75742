//! Combinatorial planar maps as rotation systems.
//!
//! A map is stored as a set of half-edges: every half-edge knows its vertex,
//! its opposite half (the other end of the same edge), and its successor in
//! the counterclockwise rotation at its vertex. Faces are traced with the
//! rule `next(h) = rotation_successor(opposite(h))`, so each face boundary is
//! an orbit of that permutation and the Euler relation `V - E + F = 2` checks
//! that the rotation system is a sphere map. The unbounded face is designated
//! by an explicit marker half-edge; the rotation system alone only determines
//! a sphere map.

mod surgery;
pub use surgery::{genericize, reduce_subloop, subdivide_edge, GenericizeInfo, SubdivideInfo};

pub mod examples;

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
    #[error("rotation system is not planar: V - E + F = {0}, expected 2")]
    NonPlanar(i64),
    #[error("graph is not connected")]
    Disconnected,
    #[error("loop is not a walk on the graph: {0}")]
    NotOnGraph(String),
    #[error("loop word is empty")]
    EmptyLoop,
    #[error("vertex has degree {0}, expected 4")]
    WrongDegree(usize),
    #[error("unknown standard example: {0}")]
    UnknownName(String),
    #[error("{0}")]
    Invalid(String),
}

/// An edge traversal: `forward` runs the edge from its tail half to its head half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl SignedEdge {
    pub fn fwd(edge: usize) -> Self {
        SignedEdge { edge, forward: true }
    }
    pub fn rev(edge: usize) -> Self {
        SignedEdge { edge, forward: false }
    }
    pub fn inverse(self) -> Self {
        SignedEdge { edge: self.edge, forward: !self.forward }
    }
}

/// A closed walk on a map, given as a base vertex and a sequence of signed edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopWord {
    pub base: usize,
    pub steps: Vec<SignedEdge>,
}

impl LoopWord {
    /// The word with reversed traversal direction.
    pub fn inverse(&self) -> LoopWord {
        LoopWord {
            base: self.base,
            steps: self.steps.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    /// Remove immediate backtracks `e e^-1` (repeatedly).
    pub fn reduced(&self) -> LoopWord {
        let mut out: Vec<SignedEdge> = Vec::with_capacity(self.steps.len());
        for &s in &self.steps {
            if out.last().is_some_and(|&t| t == s.inverse()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        LoopWord { base: self.base, steps: out }
    }
}

/// Face areas, indexed by face id. The unbounded face entry is kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaVector {
    values: Vec<f64>,
}

impl AreaVector {
    pub fn new(map: &PlanarMap, mut per_face: Vec<f64>) -> Result<AreaVector, MapError> {
        if per_face.len() != map.num_faces() {
            return Err(MapError::Invalid(format!(
                "area vector has {} entries for {} faces",
                per_face.len(),
                map.num_faces()
            )));
        }
        if per_face.iter().any(|&a| !(a >= 0.0)) {
            return Err(MapError::Invalid("face areas must be nonnegative".into()));
        }
        per_face[map.unbounded_face()] = 0.0;
        Ok(AreaVector { values: per_face })
    }

    pub fn zeros(map: &PlanarMap) -> AreaVector {
        AreaVector { values: vec![0.0; map.num_faces()] }
    }

    pub fn get(&self, face: usize) -> f64 {
        self.values[face]
    }

    pub fn set(&mut self, face: usize, area: f64) {
        self.values[face] = area;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, s: f64) -> AreaVector {
        AreaVector { values: self.values.iter().map(|a| a * s).collect() }
    }

    pub fn total_bounded(&self, map: &PlanarMap) -> f64 {
        (0..self.values.len()).filter(|&f| f != map.unbounded_face()).map(|f| self.values[f]).sum()
    }
}

#[derive(Debug, Clone)]
struct FaceData {
    boundary: Vec<usize>,
    min_half_label: u32,
}

/// Rotation-system planar map with traced faces and a designated unbounded face.
#[derive(Debug, Clone)]
pub struct PlanarMap {
    half_vertex: Vec<usize>,
    half_edge: Vec<usize>,
    half_opposite: Vec<usize>,
    half_rot_next: Vec<usize>,
    half_face: Vec<usize>,
    half_label: Vec<u32>,
    vertex_label: Vec<u32>,
    vertex_halves: Vec<Vec<usize>>,
    edge_halves: Vec<[usize; 2]>,
    edge_label: Vec<u32>,
    faces: Vec<FaceData>,
    unbounded: usize,
}

impl PlanarMap {
    /// Build a map from labeled rotations and edge pairings.
    ///
    /// `vertices`: (vertex label, counterclockwise rotation of half-edge labels).
    /// `edges`: (edge label, [tail half label, head half label]); the forward
    /// direction of the edge runs from the tail half's vertex to the head
    /// half's vertex. `unbounded_marker` is a half-edge label lying on the
    /// boundary of the unbounded face.
    pub fn build(
        vertices: &[(u32, Vec<u32>)],
        edges: &[(u32, [u32; 2])],
        unbounded_marker: u32,
    ) -> Result<PlanarMap, MapError> {
        if vertices.is_empty() {
            return Err(MapError::MalformedRotation("no vertices".into()));
        }
        let mut half_index: HashMap<u32, usize> = HashMap::new();
        let mut half_label = Vec::new();
        let mut half_vertex = Vec::new();
        let mut vertex_halves = Vec::new();
        let mut vertex_label = Vec::new();
        for (vi, (vl, rot)) in vertices.iter().enumerate() {
            if rot.is_empty() {
                return Err(MapError::MalformedRotation(format!("vertex {vl} has no half-edges")));
            }
            let mut halves = Vec::with_capacity(rot.len());
            for &hl in rot {
                if half_index.insert(hl, half_label.len()).is_some() {
                    return Err(MapError::MalformedRotation(format!("half-edge {hl} appears twice")));
                }
                halves.push(half_label.len());
                half_label.push(hl);
                half_vertex.push(vi);
            }
            vertex_halves.push(halves);
            vertex_label.push(*vl);
        }
        let n_half = half_label.len();
        let mut half_rot_next = vec![usize::MAX; n_half];
        for halves in &vertex_halves {
            for (i, &h) in halves.iter().enumerate() {
                half_rot_next[h] = halves[(i + 1) % halves.len()];
            }
        }
        let mut half_opposite = vec![usize::MAX; n_half];
        let mut half_edge = vec![usize::MAX; n_half];
        let mut edge_halves = Vec::with_capacity(edges.len());
        let mut edge_label = Vec::with_capacity(edges.len());
        let mut seen_edge_labels = HashMap::new();
        for (ei, (el, [t, h])) in edges.iter().enumerate() {
            if seen_edge_labels.insert(*el, ()).is_some() {
                return Err(MapError::MalformedRotation(format!("edge {el} appears twice")));
            }
            let (ti, hi) = match (half_index.get(t), half_index.get(h)) {
                (Some(&a), Some(&b)) if a != b => (a, b),
                _ => {
                    return Err(MapError::MalformedRotation(format!(
                        "edge {el} pairs invalid half-edges {t}, {h}"
                    )))
                }
            };
            if half_edge[ti] != usize::MAX || half_edge[hi] != usize::MAX {
                return Err(MapError::MalformedRotation(format!(
                    "edge {el} reuses an already paired half-edge"
                )));
            }
            half_opposite[ti] = hi;
            half_opposite[hi] = ti;
            half_edge[ti] = ei;
            half_edge[hi] = ei;
            edge_halves.push([ti, hi]);
            edge_label.push(*el);
        }
        if half_edge.iter().any(|&e| e == usize::MAX) {
            return Err(MapError::MalformedRotation("a half-edge belongs to no edge".into()));
        }

        // Connectivity over the vertex set.
        let nv = vertex_halves.len();
        let mut seen = vec![false; nv];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &h in &vertex_halves[v] {
                let w = half_vertex[half_opposite[h]];
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != nv {
            return Err(MapError::Disconnected);
        }

        // Face tracing: successor of h around its face is the rotation
        // successor, at the head vertex of h, of h's opposite half-edge.
        let mut half_face = vec![usize::MAX; n_half];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for h0 in 0..n_half {
            if half_face[h0] != usize::MAX {
                continue;
            }
            let mut orbit = Vec::new();
            let mut h = h0;
            loop {
                half_face[h] = orbits.len();
                orbit.push(h);
                h = half_rot_next[half_opposite[h]];
                if h == h0 {
                    break;
                }
            }
            orbits.push(orbit);
        }
        let euler = nv as i64 - edges.len() as i64 + orbits.len() as i64;
        if euler != 2 {
            return Err(MapError::NonPlanar(euler));
        }

        // Deterministic face ids: sort orbits by smallest half-edge label.
        let mut order: Vec<usize> = (0..orbits.len()).collect();
        let min_label = |orbit: &Vec<usize>| orbit.iter().map(|&h| half_label[h]).min().unwrap();
        order.sort_by_key(|&i| min_label(&orbits[i]));
        let mut remap = vec![0usize; orbits.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        for f in half_face.iter_mut() {
            *f = remap[*f];
        }
        let mut faces: Vec<FaceData> = order
            .iter()
            .map(|&old| FaceData {
                boundary: orbits[old].clone(),
                min_half_label: min_label(&orbits[old]),
            })
            .collect();
        // Rotate each boundary to start at its smallest-label half-edge.
        for fd in faces.iter_mut() {
            let pos = fd
                .boundary
                .iter()
                .position(|&h| half_label[h] == fd.min_half_label)
                .unwrap();
            fd.boundary.rotate_left(pos);
        }

        let marker = *half_index
            .get(&unbounded_marker)
            .ok_or_else(|| MapError::MalformedRotation(format!("unknown marker half-edge {unbounded_marker}")))?;
        let unbounded = half_face[marker];

        Ok(PlanarMap {
            half_vertex,
            half_edge,
            half_opposite,
            half_rot_next,
            half_face,
            half_label,
            vertex_label,
            vertex_halves,
            edge_halves,
            edge_label,
            faces,
            unbounded,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_halves.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edge_halves.len()
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn num_half_edges(&self) -> usize {
        self.half_label.len()
    }
    pub fn unbounded_face(&self) -> usize {
        self.unbounded
    }
    pub fn bounded_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&f| f != self.unbounded)
    }
    pub fn num_bounded_faces(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn vertex_label(&self, v: usize) -> u32 {
        self.vertex_label[v]
    }
    pub fn edge_label(&self, e: usize) -> u32 {
        self.edge_label[e]
    }
    pub fn half_label(&self, h: usize) -> u32 {
        self.half_label[h]
    }
    pub fn vertex_by_label(&self, label: u32) -> Option<usize> {
        self.vertex_label.iter().position(|&l| l == label)
    }
    pub fn edge_by_label(&self, label: u32) -> Option<usize> {
        self.edge_label.iter().position(|&l| l == label)
    }
    pub fn half_by_label(&self, label: u32) -> Option<usize> {
        self.half_label.iter().position(|&l| l == label)
    }
    /// Face containing the half-edge with the given label.
    pub fn face_of_label(&self, label: u32) -> usize {
        self.half_face[self.half_by_label(label).expect("known half-edge label")]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_halves[v].len()
    }
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.vertex_halves[v]
    }
    pub fn half_at_vertex(&self, h: usize) -> usize {
        self.half_vertex[h]
    }
    pub fn opposite(&self, h: usize) -> usize {
        self.half_opposite[h]
    }
    pub fn rot_next(&self, h: usize) -> usize {
        self.half_rot_next[h]
    }
    pub fn face_of_half(&self, h: usize) -> usize {
        self.half_face[h]
    }
    pub fn edge_of_half(&self, h: usize) -> usize {
        self.half_edge[h]
    }
    pub fn edge_ends(&self, e: usize) -> [usize; 2] {
        self.edge_halves[e]
    }

    /// Tail and head vertices of a signed edge traversal.
    pub fn step_endpoints(&self, s: SignedEdge) -> (usize, usize) {
        let [t, h] = self.edge_halves[s.edge];
        if s.forward {
            (self.half_vertex[t], self.half_vertex[h])
        } else {
            (self.half_vertex[h], self.half_vertex[t])
        }
    }

    /// The half-edge a traversal departs along, at its tail vertex.
    pub fn step_tail_half(&self, s: SignedEdge) -> usize {
        let [t, h] = self.edge_halves[s.edge];
        if s.forward {
            t
        } else {
            h
        }
    }

    /// The half-edge end a traversal arrives at (a half-edge at the head vertex).
    pub fn step_head_half(&self, s: SignedEdge) -> usize {
        let [t, h] = self.edge_halves[s.edge];
        if s.forward {
            h
        } else {
            t
        }
    }

    /// The signed edge obtained by departing along half-edge `h`.
    pub fn half_to_step(&self, h: usize) -> SignedEdge {
        let e = self.half_edge[h];
        SignedEdge { edge: e, forward: self.edge_halves[e][0] == h }
    }

    /// Face boundary as half-edges, in traced order.
    pub fn face_boundary(&self, f: usize) -> &[usize] {
        &self.faces[f].boundary
    }

    /// Face boundary as a signed-edge word in traced order.
    pub fn face_word(&self, f: usize) -> Vec<SignedEdge> {
        self.faces[f].boundary.iter().map(|&h| self.half_to_step(h)).collect()
    }

    /// Face boundary in the positive direction (the reverse of the traced
    /// orbit), as a closed walk. With counterclockwise input rotations this
    /// runs around a bounded face with its interior on the left.
    pub fn positive_face_word(&self, f: usize) -> Vec<SignedEdge> {
        self.faces[f].boundary.iter().rev().map(|&h| self.half_to_step(h).inverse()).collect()
    }

    /// Mirror image: every rotation reversed.
    pub fn mirrored(&self) -> PlanarMap {
        let vertices: Vec<(u32, Vec<u32>)> = (0..self.num_vertices())
            .map(|v| {
                let mut rot: Vec<u32> =
                    self.vertex_halves[v].iter().map(|&h| self.half_label[h]).collect();
                rot.reverse();
                (self.vertex_label[v], rot)
            })
            .collect();
        let edges: Vec<(u32, [u32; 2])> = (0..self.num_edges())
            .map(|e| {
                let [t, h] = self.edge_halves[e];
                (self.edge_label[e], [self.half_label[t], self.half_label[h]])
            })
            .collect();
        let marker = self.half_label[self.faces[self.unbounded].boundary[0]];
        PlanarMap::build(&vertices, &edges, marker).expect("mirror of a planar map is planar")
    }

    pub(crate) fn set_unbounded(&mut self, face: usize) {
        debug_assert!(face < self.faces.len());
        self.unbounded = face;
    }

    /// Validate that a word is a closed walk on this map.
    pub fn check_loop(&self, word: &LoopWord) -> Result<(), MapError> {
        if word.steps.is_empty() {
            return Err(MapError::EmptyLoop);
        }
        if word.base >= self.num_vertices() {
            return Err(MapError::NotOnGraph(format!("base vertex {} out of range", word.base)));
        }
        let mut at = word.base;
        for (i, &s) in word.steps.iter().enumerate() {
            if s.edge >= self.num_edges() {
                return Err(MapError::NotOnGraph(format!("step {i} uses a missing edge")));
            }
            let (tail, head) = self.step_endpoints(s);
            if tail != at {
                return Err(MapError::NotOnGraph(format!(
                    "step {i} departs from vertex {} but walk is at {}",
                    self.vertex_label[tail], self.vertex_label[at]
                )));
            }
            at = head;
        }
        if at != word.base {
            return Err(MapError::NotOnGraph("walk does not return to its base".into()));
        }
        Ok(())
    }

    /// Count how many times the loop traverses the given edge (either direction).
    pub fn edge_multiplicity(&self, word: &LoopWord, edge: usize) -> usize {
        word.steps.iter().filter(|s| s.edge == edge).count()
    }

    /// Edges with one side on `face` and the other on the unbounded face.
    pub fn edges_shared_with_unbounded(&self, face: usize) -> Vec<usize> {
        (0..self.num_edges())
            .filter(|&e| {
                let [t, h] = self.edge_halves[e];
                let (ft, fh) = (self.half_face[t], self.half_face[h]);
                (ft == face && fh == self.unbounded) || (fh == face && ft == self.unbounded)
            })
            .collect()
    }
}

/// A simple crossing of a loop, with the four outgoing half-edges and the
/// four adjacent faces labeled by the convention: the loop leaves along
/// `e1`, first returns along `e4^-1`, leaves along `e2 = opposite(e4)`, and
/// finally returns along `e3^-1` with `e3 = opposite(e1)`; face `F_i` is the
/// sector between `e_i` and `e_{i+1}`.
#[derive(Debug, Clone)]
pub struct CrossingFrame {
    pub vertex: usize,
    /// e1..e4 as half-edge indices at the crossing vertex.
    pub out_halves: [usize; 4],
    /// F1..F4 as face indices.
    pub faces: [usize; 4],
    /// Word index of the visit that departs along e1.
    pub first_index: usize,
    /// Word index of the mid visit (departure along e2); the split point s0.
    pub mid_index: usize,
    /// Whether e1,e2,e3,e4 run counterclockwise in the stored rotation.
    pub ccw: bool,
}

impl CrossingFrame {
    /// True when the four crossing edges are pairwise distinct edges
    /// (no `e_i = e_j` or `e_i = e_j^-1` coincidences).
    pub fn is_generic(&self, map: &PlanarMap) -> bool {
        let mut e: Vec<usize> = self.out_halves.iter().map(|&h| map.edge_of_half(h)).collect();
        e.sort_unstable();
        e.dedup();
        e.len() == 4
    }

    /// The alternating-sum coefficient of each bounded face: +1 for F1 and
    /// F3, -1 for F2 and F4, accumulated over coincident faces, with
    /// unbounded sectors skipped.
    pub fn alternating_coefficients(&self, map: &PlanarMap) -> Vec<(usize, f64)> {
        let mut coeff: HashMap<usize, f64> = HashMap::new();
        for (i, &f) in self.faces.iter().enumerate() {
            if f == map.unbounded_face() {
                continue;
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            *coeff.entry(f).or_insert(0.0) += sign;
        }
        let mut out: Vec<(usize, f64)> = coeff.into_iter().filter(|&(_, c)| c != 0.0).collect();
        out.sort_by_key(|&(f, _)| f);
        out
    }
}

/// Result of scanning a loop for simple crossings.
#[derive(Debug, Clone)]
pub struct CrossingScan {
    pub frames: Vec<CrossingFrame>,
    /// Vertices visited exactly twice but without the straight-across property.
    pub nonsimple: Vec<usize>,
}

/// Find every simple crossing of the loop, labeled by the paper convention.
pub fn crossing_frames(map: &PlanarMap, word: &LoopWord) -> Result<CrossingScan, MapError> {
    map.check_loop(word)?;
    let n = word.steps.len();
    // Visits: for word index i, the walk sits at the tail vertex of step i,
    // having arrived along step i-1 (cyclically).
    let mut visits: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let (tail, _) = map.step_endpoints(word.steps[i]);
        visits.entry(tail).or_default().push(i);
    }
    let mut frames = Vec::new();
    let mut nonsimple = Vec::new();
    let mut vs: Vec<usize> = visits.keys().copied().collect();
    vs.sort_unstable();
    for v in vs {
        let idx = &visits[&v];
        if idx.len() != 2 || map.degree(v) != 4 {
            continue;
        }
        let (i1, i2) = (idx[0], idx[1]);
        let arrive = |i: usize| map.step_head_half(word.steps[(i + n - 1) % n]);
        let depart = |i: usize| map.step_tail_half(word.steps[i]);
        let opp = |h: usize| map.rot_next(map.rot_next(h));
        // Straight across at both passes: incoming end and outgoing half are
        // cyclically opposite in the rotation.
        if opp(arrive(i1)) != depart(i1) || opp(arrive(i2)) != depart(i2) {
            nonsimple.push(v);
            continue;
        }
        let e1 = depart(i1);
        let e3 = opp(e1); // the final return of the first pass arrives along e3
        let e4 = arrive(i2);
        let e2 = depart(i2);
        debug_assert_eq!(opp(e4), e2);
        debug_assert_eq!(arrive(i1), e3);
        let ccw = map.rot_next(e1) == e2;
        let out_halves = [e1, e2, e3, e4];
        // Sector between e_i and e_{i+1}: with counterclockwise label order it
        // is the face traced through e_{i+1}; mirrored, the one through e_i.
        let faces = if ccw {
            [
                map.face_of_half(e2),
                map.face_of_half(e3),
                map.face_of_half(e4),
                map.face_of_half(e1),
            ]
        } else {
            [
                map.face_of_half(e1),
                map.face_of_half(e2),
                map.face_of_half(e3),
                map.face_of_half(e4),
            ]
        };
        frames.push(CrossingFrame {
            vertex: v,
            out_halves,
            faces,
            first_index: i1,
            mid_index: i2,
            ccw,
        });
    }
    Ok(CrossingScan { frames, nonsimple })
}

/// Split a loop at a simple crossing into the two sub-loops based at the
/// crossing vertex. Their concatenation reproduces the original word up to
/// cyclic rotation.
pub fn split_loop(word: &LoopWord, frame: &CrossingFrame) -> (LoopWord, LoopWord) {
    let n = word.steps.len();
    let rot = |i: usize| (frame.first_index + i) % n;
    let len1 = (frame.mid_index + n - frame.first_index) % n;
    let first: Vec<SignedEdge> = (0..len1).map(|i| word.steps[rot(i)]).collect();
    let second: Vec<SignedEdge> = (len1..n).map(|i| word.steps[rot(i)]).collect();
    (
        LoopWord { base: frame.vertex, steps: first },
        LoopWord { base: frame.vertex, steps: second },
    )
}

/// Mapping from parent faces onto the faces of a reduced map, with areas
/// aggregated by summation.
#[derive(Debug, Clone)]
pub struct FaceMerge {
    /// parent face id -> child face id.
    pub parent_to_child: Vec<usize>,
    pub child_faces: usize,
}

impl FaceMerge {
    /// Sum parent areas into child faces (the child unbounded entry is zeroed
    /// by `AreaVector`).
    pub fn merge_areas(
        &self,
        parent: &AreaVector,
        child_map: &PlanarMap,
    ) -> Result<AreaVector, MapError> {
        let mut vals = vec![0.0; self.child_faces];
        for (pf, &cf) in self.parent_to_child.iter().enumerate() {
            vals[cf] += parent.get(pf);
        }
        AreaVector::new(child_map, vals)
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn simple_loop_two_faces() {
        let ex = standard_example(ExampleName::Simple, &[1.0]).unwrap();
        assert_eq!(ex.map.num_vertices(), 1);
        assert_eq!(ex.map.num_edges(), 1);
        assert_eq!(ex.map.num_faces(), 2);
        let word = &ex.loops["L"];
        ex.map.check_loop(word).unwrap();
        let scan = crossing_frames(&ex.map, word).unwrap();
        assert!(scan.frames.is_empty());
        assert!(scan.nonsimple.is_empty());
    }

    #[test]
    fn figure_eight_three_faces_one_frame() {
        let ex = standard_example(ExampleName::FigureEight, &[0.7, 1.3]).unwrap();
        assert_eq!(ex.map.num_faces(), 3);
        let scan = crossing_frames(&ex.map, &ex.loops["L"]).unwrap();
        assert_eq!(scan.frames.len(), 1);
        let fr = &scan.frames[0];
        let unb = ex.map.unbounded_face();
        // F1 and F3 are unbounded; F2 and F4 are the second and first lobes.
        assert_eq!(fr.faces[0], unb);
        assert_eq!(fr.faces[2], unb);
        assert_eq!(ex.areas.get(fr.faces[1]), 1.3);
        assert_eq!(ex.areas.get(fr.faces[3]), 0.7);
        // The loop leaves along e1 and departs the mid visit along e2 = opposite(e4).
        assert_eq!(fr.first_index, 0);
        assert_eq!(fr.mid_index, 1);
    }

    #[test]
    fn figure_eight_split_gives_lobes() {
        let ex = standard_example(ExampleName::FigureEight, &[1.0, 1.0]).unwrap();
        let scan = crossing_frames(&ex.map, &ex.loops["L"]).unwrap();
        let (l1, l2) = split_loop(&ex.loops["L"], &scan.frames[0]);
        assert_eq!(l1.steps.len(), 1);
        assert_eq!(l2.steps.len(), 1);
        let mut cat = l1.steps.clone();
        cat.extend_from_slice(&l2.steps);
        assert_eq!(cat, ex.loops["L"].steps);
    }

    #[test]
    fn double_wound_frame_faces() {
        let ex = standard_example(ExampleName::DoubleWound, &[0.4, 0.9]).unwrap();
        assert_eq!(ex.map.num_faces(), 3);
        let scan = crossing_frames(&ex.map, &ex.loops["L"]).unwrap();
        assert_eq!(scan.frames.len(), 1);
        let fr = &scan.frames[0];
        let unb = ex.map.unbounded_face();
        // F1 = F3 = annulus, F2 = unbounded, F4 = inner disk.
        assert_eq!(ex.areas.get(fr.faces[0]), 0.9);
        assert_eq!(fr.faces[1], unb);
        assert_eq!(fr.faces[0], fr.faces[2]);
        assert_eq!(ex.areas.get(fr.faces[3]), 0.4);
        let coeff = fr.alternating_coefficients(&ex.map);
        assert_eq!(coeff.len(), 2);
        // inner disk coefficient -1, annulus +2
        let ann = fr.faces[0];
        let inner = fr.faces[3];
        assert_eq!(coeff.iter().find(|&&(f, _)| f == ann).unwrap().1, 2.0);
        assert_eq!(coeff.iter().find(|&&(f, _)| f == inner).unwrap().1, -1.0);
    }

    #[test]
    fn generic_four_valent_frame_has_s0_at_e2() {
        // L = e1 A e4^-1 e2 B e3^-1 on the generic crossing of the worked
        // three-crossing example: the mid visit departs along e2.
        let ex = standard_example(ExampleName::Fig8Example, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let word = &ex.loops["L"];
        let scan = crossing_frames(&ex.map, word).unwrap();
        assert_eq!(scan.frames.len(), 3);
        let fr = scan.frames.iter().find(|f| f.vertex == 0).unwrap();
        assert!(fr.is_generic(&ex.map));
        assert_eq!(fr.first_index, 0);
        assert_eq!(fr.mid_index, 3);
        // All four sector faces are bounded and distinct.
        let mut fs = fr.faces.to_vec();
        assert!(fs.iter().all(|&f| f != ex.map.unbounded_face()));
        fs.sort_unstable();
        fs.dedup();
        assert_eq!(fs.len(), 4);
    }

    #[test]
    fn face_tracing_is_a_permutation() {
        for ex in all_standard_examples() {
            let map = &ex.map;
            let mut count = 0;
            for f in 0..map.num_faces() {
                for &h in map.face_boundary(f) {
                    assert_eq!(map.face_of_half(h), f);
                    count += 1;
                }
            }
            assert_eq!(count, map.num_half_edges());
        }
    }

    #[test]
    fn crossing_rotation_interleaves() {
        for ex in all_standard_examples() {
            for word in ex.loops.values() {
                let scan = crossing_frames(&ex.map, word).unwrap();
                for fr in &scan.frames {
                    let [e1, e2, e3, e4] = fr.out_halves;
                    let opp = |h: usize| ex.map.rot_next(ex.map.rot_next(h));
                    assert_eq!(opp(e1), e3);
                    assert_eq!(opp(e2), e4);
                }
            }
        }
    }

    #[test]
    fn mirrored_map_keeps_faces_and_flips_chirality() {
        let ex = standard_example(ExampleName::FigureEight, &[1.0, 2.0]).unwrap();
        let mir = ex.map.mirrored();
        assert_eq!(mir.num_faces(), ex.map.num_faces());
        let scan = crossing_frames(&mir, &ex.loops["L"]).unwrap();
        assert_eq!(scan.frames.len(), 1);
        let orig = crossing_frames(&ex.map, &ex.loops["L"]).unwrap();
        assert_ne!(scan.frames[0].ccw, orig.frames[0].ccw);
        // Sector faces are the same regions (identified by their boundary words).
        assert_eq!(scan.frames[0].faces.map(|f| mir.face_word(f).len()),
                   orig.frames[0].faces.map(|f| ex.map.face_word(f).len()));
    }

    #[test]
    fn non_planar_rotation_rejected() {
        // Fully interleaved figure-eight rotation is a torus map.
        let err = PlanarMap::build(
            &[(0, vec![1, 3, 2, 4])],
            &[(1, [1, 2]), (2, [3, 4])],
            1,
        )
        .unwrap_err();
        assert!(matches!(err, MapError::NonPlanar(0)));
    }

    #[test]
    fn disconnected_rejected() {
        let err = PlanarMap::build(
            &[(0, vec![1, 2]), (1, vec![3, 4])],
            &[(1, [1, 2]), (2, [3, 4])],
            1,
        )
        .unwrap_err();
        assert!(matches!(err, MapError::Disconnected));
    }

    #[test]
    fn malformed_rotation_rejected() {
        let err = PlanarMap::build(&[(0, vec![1, 1])], &[(1, [1, 1])], 1).unwrap_err();
        assert!(matches!(err, MapError::MalformedRotation(_)));
    }
}
