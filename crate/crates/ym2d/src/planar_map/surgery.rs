//! Graph surgeries: carrier extraction for sub-loops, crossing
//! genericization, and edge subdivision.

use std::collections::HashMap;

use super::{AreaVector, FaceMerge, LoopWord, MapError, PlanarMap, SignedEdge};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn vertex_rotation_labels(map: &PlanarMap, v: usize) -> (u32, Vec<u32>) {
    (map.vertex_label(v), map.rotation(v).iter().map(|&h| map.half_label(h)).collect())
}

fn edge_spec(map: &PlanarMap, e: usize) -> (u32, [u32; 2]) {
    let [t, h] = map.edge_ends(e);
    (map.edge_label(e), [map.half_label(t), map.half_label(h)])
}

/// Restrict the map to the edges traversed by `sub`, smooth the resulting
/// degree-2 vertices (keeping the base vertex), and retrace faces. The word
/// is freely reduced first; holonomies are unchanged because a smoothed
/// chain's variable is the ordered product of its arc variables.
pub fn reduce_subloop(
    map: &PlanarMap,
    sub: &LoopWord,
) -> Result<(PlanarMap, LoopWord, FaceMerge), MapError> {
    map.check_loop(sub)?;
    let word = sub.reduced();
    if word.steps.is_empty() {
        return Err(MapError::EmptyLoop);
    }

    let mut kept_edge = vec![false; map.num_edges()];
    for s in &word.steps {
        kept_edge[s.edge] = true;
    }

    // Faces across a deleted edge merge.
    let mut uf = UnionFind::new(map.num_faces());
    for e in 0..map.num_edges() {
        if !kept_edge[e] {
            let [t, h] = map.edge_ends(e);
            uf.union(map.face_of_half(t), map.face_of_half(h));
        }
    }

    // Intermediate map: carrier edges only, rotations filtered.
    let mut kept_vertex = vec![false; map.num_vertices()];
    for e in 0..map.num_edges() {
        if kept_edge[e] {
            let [t, h] = map.edge_ends(e);
            kept_vertex[map.half_at_vertex(t)] = true;
            kept_vertex[map.half_at_vertex(h)] = true;
        }
    }
    let vertices: Vec<(u32, Vec<u32>)> = (0..map.num_vertices())
        .filter(|&v| kept_vertex[v])
        .map(|v| {
            let rot: Vec<u32> = map
                .rotation(v)
                .iter()
                .filter(|&&h| kept_edge[map.edge_of_half(h)])
                .map(|&h| map.half_label(h))
                .collect();
            (map.vertex_label(v), rot)
        })
        .collect();
    let edges: Vec<(u32, [u32; 2])> =
        (0..map.num_edges()).filter(|&e| kept_edge[e]).map(|e| edge_spec(map, e)).collect();
    let any_half = map.step_tail_half(word.steps[0]);
    let m1 = PlanarMap::build(&vertices, &edges, map.half_label(any_half))?;

    // Map union classes onto faces of the carrier map.
    let mut class_to_m1: HashMap<usize, usize> = HashMap::new();
    for h in 0..map.num_half_edges() {
        if !kept_edge[map.edge_of_half(h)] {
            continue;
        }
        let class = uf.find(map.face_of_half(h));
        let m1h = m1
            .edge_by_label(map.edge_label(map.edge_of_half(h)))
            .map(|e| {
                let [t, hd] = m1.edge_ends(e);
                if m1.half_label(t) == map.half_label(h) {
                    t
                } else {
                    hd
                }
            })
            .expect("kept edge exists in carrier");
        let f1 = m1.face_of_half(m1h);
        if let Some(&prev) = class_to_m1.get(&class) {
            if prev != f1 {
                return Err(MapError::Invalid(
                    "carrier face structure inconsistent with deletion merge".into(),
                ));
            }
        } else {
            class_to_m1.insert(class, f1);
        }
    }
    let m1_unbounded = class_to_m1[&uf.find(map.unbounded_face())];

    // Smooth degree-2 vertices, keeping the base.
    let base_label = map.vertex_label(word.base);
    let m1_base = m1.vertex_by_label(base_label).expect("base survives");
    let smoothable =
        |m: &PlanarMap, v: usize| v != m.vertex_by_label(base_label).unwrap() && m.degree(v) == 2;

    let needs_smoothing = (0..m1.num_vertices()).any(|v| smoothable(&m1, v));
    let (m2, word2, m1_to_m2): (PlanarMap, LoopWord, Vec<usize>) = if !needs_smoothing {
        let steps = word
            .steps
            .iter()
            .map(|s| SignedEdge {
                edge: m1.edge_by_label(map.edge_label(s.edge)).unwrap(),
                forward: s.forward,
            })
            .collect();
        let ident: Vec<usize> = (0..m1.num_faces()).collect();
        (m1.clone(), LoopWord { base: m1_base, steps }, ident)
    } else {
        smooth_chains(map, &m1, base_label, &word)?
    };
    let mut m2 = m2;
    m2.set_unbounded(m1_to_m2[m1_unbounded]);

    let parent_to_child: Vec<usize> =
        (0..map.num_faces()).map(|f| m1_to_m2[class_to_m1[&uf.find(f)]]).collect();
    debug_assert_eq!(parent_to_child[map.unbounded_face()], m2.unbounded_face());

    let merge = FaceMerge { parent_to_child, child_faces: m2.num_faces() };
    m2.check_loop(&word2)?;
    Ok((m2, word2, merge))
}

/// Replace maximal chains through degree-2 vertices by single edges.
fn smooth_chains(
    orig: &PlanarMap,
    m1: &PlanarMap,
    base_label: u32,
    word: &LoopWord,
) -> Result<(PlanarMap, LoopWord, Vec<usize>), MapError> {
    let base = m1.vertex_by_label(base_label).unwrap();
    let keep = |v: usize| v == base || m1.degree(v) != 2;

    // Walk chains from each half at a kept vertex.
    struct Chain {
        start_half: usize,
        end_half: usize,
        len: usize,
    }
    let mut chain_of_start: HashMap<usize, usize> = HashMap::new();
    let mut chains: Vec<Chain> = Vec::new();
    for v in 0..m1.num_vertices() {
        if !keep(v) {
            continue;
        }
        for &h0 in m1.rotation(v) {
            if chain_of_start.contains_key(&h0) {
                continue;
            }
            let mut len = 1;
            let mut h = h0;
            loop {
                let end = m1.opposite(h);
                let u = m1.half_at_vertex(end);
                if keep(u) {
                    let id = chains.len();
                    chains.push(Chain { start_half: h0, end_half: end, len });
                    chain_of_start.insert(h0, id);
                    chain_of_start.insert(end, id);
                    break;
                }
                let rot = m1.rotation(u);
                h = if rot[0] == end { rot[1] } else { rot[0] };
                len += 1;
            }
        }
    }

    let vertices: Vec<(u32, Vec<u32>)> =
        (0..m1.num_vertices()).filter(|&v| keep(v)).map(|v| vertex_rotation_labels(m1, v)).collect();
    let mut edges: Vec<(u32, [u32; 2])> = Vec::new();
    let mut next_edge_label = (0..m1.num_edges()).map(|e| m1.edge_label(e)).max().unwrap_or(0) + 1;
    // Deterministic edge order: by chain discovery; each chain once.
    let mut emitted = vec![false; chains.len()];
    let mut chain_edge_index: Vec<usize> = vec![usize::MAX; chains.len()];
    let mut chain_forward_start: Vec<usize> = vec![usize::MAX; chains.len()];
    for v in 0..m1.num_vertices() {
        if !keep(v) {
            continue;
        }
        for &h in m1.rotation(v) {
            let id = chain_of_start[&h];
            if emitted[id] {
                continue;
            }
            emitted[id] = true;
            let c = &chains[id];
            let label = if c.len == 1 {
                m1.edge_label(m1.edge_of_half(c.start_half))
            } else {
                let l = next_edge_label;
                next_edge_label += 1;
                l
            };
            chain_edge_index[id] = edges.len();
            chain_forward_start[id] = c.start_half;
            edges.push((label, [m1.half_label(c.start_half), m1.half_label(c.end_half)]));
        }
    }
    // Marker: a kept half on the same face as the current unbounded marker is
    // fixed afterwards by the caller via set_unbounded; any half works here.
    let m2 = PlanarMap::build(&vertices, &edges, edges[0].1[0])?;

    // m1 face -> m2 face via chain-end halves.
    let mut m1_to_m2 = vec![usize::MAX; m1.num_faces()];
    for c in &chains {
        for &h in &[c.start_half, c.end_half] {
            let f1 = m1.face_of_half(h);
            let lab = m1.half_label(h);
            let h2 = (0..m2.num_half_edges()).find(|&x| m2.half_label(x) == lab).unwrap();
            let f2 = m2.face_of_half(h2);
            if m1_to_m2[f1] == usize::MAX {
                m1_to_m2[f1] = f2;
            } else if m1_to_m2[f1] != f2 {
                return Err(MapError::Invalid("smoothing changed the face structure".into()));
            }
        }
    }
    if m1_to_m2.iter().any(|&f| f == usize::MAX) {
        return Err(MapError::Invalid("a face lost all kept boundary halves".into()));
    }

    // Rewrite the word chain by chain.
    let mut steps2 = Vec::new();
    let mut i = 0;
    let word_m1: Vec<SignedEdge> = word
        .steps
        .iter()
        .map(|s| SignedEdge {
            edge: m1.edge_by_label(orig.edge_label(s.edge)).unwrap(),
            forward: s.forward,
        })
        .collect();
    while i < word_m1.len() {
        let h = m1.step_tail_half(word_m1[i]);
        let id = *chain_of_start
            .get(&h)
            .ok_or_else(|| MapError::Invalid("walk enters a chain mid-way".into()))?;
        let forward = chain_forward_start[id] == h;
        steps2.push(SignedEdge { edge: chain_edge_index[id], forward });
        i += chains[id].len;
    }
    let base2 = m2.vertex_by_label(base_label).unwrap();
    Ok((m2, LoopWord { base: base2, steps: steps2 }, m1_to_m2))
}

/// Correspondence data for [`subdivide_edge`].
#[derive(Debug, Clone)]
pub struct SubdivideInfo {
    pub old_edge: usize,
    /// New edge traversed first when running the old edge forward.
    pub first: usize,
    /// New edge traversed second.
    pub second: usize,
    pub new_vertex: usize,
    /// old face id -> new face id.
    pub face_map: Vec<usize>,
}

impl SubdivideInfo {
    /// Rewrite a loop word of the old map on the subdivided map.
    pub fn rewrite_loop(&self, word: &LoopWord, old_edge_count: usize, reindex: &[usize]) -> LoopWord {
        let mut steps = Vec::with_capacity(word.steps.len() + 2);
        for &s in &word.steps {
            if s.edge == self.old_edge {
                if s.forward {
                    steps.push(SignedEdge::fwd(self.first));
                    steps.push(SignedEdge::fwd(self.second));
                } else {
                    steps.push(SignedEdge::rev(self.second));
                    steps.push(SignedEdge::rev(self.first));
                }
            } else {
                debug_assert!(s.edge < old_edge_count);
                steps.push(SignedEdge { edge: reindex[s.edge], forward: s.forward });
            }
        }
        LoopWord { base: word.base, steps }
    }

    pub fn rewrite_areas(&self, map_new: &PlanarMap, old: &AreaVector) -> AreaVector {
        let mut v = vec![0.0; map_new.num_faces()];
        for (of, &nf) in self.face_map.iter().enumerate() {
            v[nf] += old.get(of);
        }
        AreaVector::new(map_new, v).expect("areas stay nonnegative")
    }
}

/// Split edge `e` at a new degree-2 vertex. Faces and areas are unchanged;
/// the old edge variable corresponds to the ordered product of the second
/// and first part variables.
pub fn subdivide_edge(
    map: &PlanarMap,
    e: usize,
) -> Result<(PlanarMap, SubdivideInfo, Vec<usize>), MapError> {
    if e >= map.num_edges() {
        return Err(MapError::Invalid(format!("edge {e} out of range")));
    }
    let max_half = (0..map.num_half_edges()).map(|h| map.half_label(h)).max().unwrap();
    let max_vertex = (0..map.num_vertices()).map(|v| map.vertex_label(v)).max().unwrap();
    let max_edge = (0..map.num_edges()).map(|x| map.edge_label(x)).max().unwrap();
    let [t, h] = map.edge_ends(e);
    let (n1, n2) = (max_half + 1, max_half + 2);
    let new_vertex_label = max_vertex + 1;

    let mut vertices: Vec<(u32, Vec<u32>)> =
        (0..map.num_vertices()).map(|v| vertex_rotation_labels(map, v)).collect();
    vertices.push((new_vertex_label, vec![n1, n2]));
    let mut edges: Vec<(u32, [u32; 2])> = Vec::new();
    let mut reindex = vec![usize::MAX; map.num_edges()];
    for x in 0..map.num_edges() {
        if x == e {
            continue;
        }
        reindex[x] = edges.len();
        edges.push(edge_spec(map, x));
    }
    let first_idx = edges.len();
    edges.push((max_edge + 1, [map.half_label(t), n1]));
    let second_idx = edges.len();
    edges.push((max_edge + 2, [n2, map.half_label(h)]));

    // Any persisting half of the unbounded face keeps its label.
    let marker = map.half_label(map.face_boundary(map.unbounded_face())[0]);
    let new_map = PlanarMap::build(&vertices, &edges, marker)?;

    let mut face_map = vec![usize::MAX; map.num_faces()];
    for oh in 0..map.num_half_edges() {
        let lab = map.half_label(oh);
        let nh = (0..new_map.num_half_edges()).find(|&x| new_map.half_label(x) == lab).unwrap();
        let of = map.face_of_half(oh);
        let nf = new_map.face_of_half(nh);
        if face_map[of] == usize::MAX {
            face_map[of] = nf;
        } else if face_map[of] != nf {
            return Err(MapError::Invalid("subdivision changed the face structure".into()));
        }
    }
    let new_vertex = new_map.vertex_by_label(new_vertex_label).unwrap();
    Ok((
        new_map,
        SubdivideInfo { old_edge: e, first: first_idx, second: second_idx, new_vertex, face_map },
        reindex,
    ))
}

/// Correspondence data for [`genericize`].
#[derive(Debug, Clone)]
pub struct GenericizeInfo {
    pub vertex: usize,
    /// New vertices w_0..w_3, one per half-edge of the old rotation at v.
    pub new_vertices: [usize; 4],
    /// Spoke edges v -> w_i, indexed like the old rotation.
    pub spokes: [usize; 4],
    /// Circle edge i joins w_i to w_{i+1}.
    pub circle_edges: [usize; 4],
    /// New zero-area face in the sector between old halves h_i and h_{i+1}.
    pub circle_faces: [usize; 4],
    /// Old face in that sector.
    pub sector_old_faces: [usize; 4],
    /// old face id -> new face id (sector faces map to their outer remnants).
    pub face_map: Vec<usize>,
    /// old edge id -> replacement word on the new map (forward direction).
    edge_words: Vec<Vec<SignedEdge>>,
}

impl GenericizeInfo {
    pub fn rewrite_loop(&self, word: &LoopWord, base: usize) -> LoopWord {
        let mut steps = Vec::new();
        for &s in &word.steps {
            let repl = &self.edge_words[s.edge];
            if s.forward {
                steps.extend_from_slice(repl);
            } else {
                steps.extend(repl.iter().rev().map(|x| x.inverse()));
            }
        }
        LoopWord { base, steps }
    }

    /// Areas on the new map: remnants inherit the old areas, circle faces zero.
    pub fn rewrite_areas(&self, map_new: &PlanarMap, old: &AreaVector) -> AreaVector {
        let mut v = vec![0.0; map_new.num_faces()];
        for (of, &nf) in self.face_map.iter().enumerate() {
            v[nf] += old.get(of);
        }
        AreaVector::new(map_new, v).expect("areas stay nonnegative")
    }
}

/// The crossing surgery: subdivide the four half-edges at `v` with new
/// vertices w_0..w_3 and join consecutive new vertices by four circular
/// edges, so the four edges and four sector faces at `v` become distinct.
/// The four new faces carry zero area by default.
pub fn genericize(map: &PlanarMap, v: usize) -> Result<(PlanarMap, GenericizeInfo), MapError> {
    if map.degree(v) != 4 {
        return Err(MapError::WrongDegree(map.degree(v)));
    }
    let rot: Vec<usize> = map.rotation(v).to_vec();
    let max_half = (0..map.num_half_edges()).map(|h| map.half_label(h)).max().unwrap();
    let max_vertex = (0..map.num_vertices()).map(|x| map.vertex_label(x)).max().unwrap();
    let max_edge = (0..map.num_edges()).map(|x| map.edge_label(x)).max().unwrap();

    // Fresh labels: per sector i we reserve halves for the spoke inner end
    // (in_i), the split-off outer end (out_i), and the circle edge pair.
    let in_lab = |i: usize| max_half + 1 + (i as u32) * 4;
    let out_lab = |i: usize| max_half + 2 + (i as u32) * 4;
    let circ_a = |i: usize| max_half + 3 + (i as u32) * 4;
    let circ_b = |i: usize| max_half + 4 + (i as u32) * 4;
    let wlab = |i: usize| max_vertex + 1 + i as u32;

    let mut vertices: Vec<(u32, Vec<u32>)> = Vec::new();
    for u in 0..map.num_vertices() {
        if u == v {
            vertices.push((map.vertex_label(v), rot.iter().map(|&h| map.half_label(h)).collect()));
        } else {
            vertices.push(vertex_rotation_labels(map, u));
        }
    }
    for i in 0..4 {
        // Stored-rotation order at w_i: outward part, circle to w_{i+1},
        // spoke toward v, circle to w_{i-1}.
        vertices.push((wlab(i), vec![out_lab(i), circ_a(i), in_lab(i), circ_b((i + 3) % 4)]));
    }

    let mut edges: Vec<(u32, [u32; 2])> = Vec::new();
    let mut edge_words: Vec<Vec<SignedEdge>> = vec![Vec::new(); map.num_edges()];
    let mut next_edge_label = max_edge;
    let mut fresh_edge = || {
        next_edge_label += 1;
        next_edge_label
    };

    // Untouched edges keep their identities.
    let touched: Vec<usize> = rot.iter().map(|&h| map.edge_of_half(h)).collect();
    for e in 0..map.num_edges() {
        if touched.contains(&e) {
            continue;
        }
        edge_words[e] = vec![SignedEdge::fwd(edges.len())];
        edges.push(edge_spec(map, e));
    }

    // Spokes: the old half at v keeps its label as the spoke's v-side half.
    let mut spoke_idx = [0usize; 4];
    for (i, &h) in rot.iter().enumerate() {
        spoke_idx[i] = edges.len();
        edges.push((fresh_edge(), [map.half_label(h), in_lab(i)]));
    }
    // Outer parts of the four old edges.
    let mut sector_of_half: HashMap<usize, usize> = HashMap::new();
    for (i, &h) in rot.iter().enumerate() {
        sector_of_half.insert(h, i);
    }
    let mut done = [false; 4];
    for i in 0..4 {
        if done[i] {
            continue;
        }
        let h = rot[i];
        let opp = map.opposite(h);
        let e = map.edge_of_half(h);
        if let Some(&j) = sector_of_half.get(&opp) {
            // Self-loop at v: middle part joins w_i and w_j.
            done[i] = true;
            done[j] = true;
            let mid = edges.len();
            edges.push((fresh_edge(), [out_lab(i), out_lab(j)]));
            // Forward direction of the old edge starts at its tail half.
            let (a, b) = if map.edge_ends(e)[0] == h { (i, j) } else { (j, i) };
            let word = vec![
                SignedEdge::fwd(spoke_idx[a]),
                SignedEdge { edge: mid, forward: a == i },
                SignedEdge::rev(spoke_idx[b]),
            ];
            edge_words[e] = word;
        } else {
            done[i] = true;
            let far = edges.len();
            edges.push((fresh_edge(), [out_lab(i), map.half_label(opp)]));
            let word = if map.edge_ends(e)[0] == h {
                vec![SignedEdge::fwd(spoke_idx[i]), SignedEdge::fwd(far)]
            } else {
                vec![SignedEdge::rev(far), SignedEdge::rev(spoke_idx[i])]
            };
            edge_words[e] = word;
        }
    }
    // Circle edges.
    let mut circle_idx = [0usize; 4];
    for i in 0..4 {
        circle_idx[i] = edges.len();
        edges.push((fresh_edge(), [circ_a(i), circ_b(i)]));
    }

    // Marker: prefer a persisting half of the old unbounded face; if its
    // whole boundary sat at v, use the outer circle half of a sector that
    // mapped to it.
    let sector_old: [usize; 4] =
        std::array::from_fn(|i| map.face_of_half(rot[(i + 1) % 4]));
    let unb = map.unbounded_face();
    let marker = map
        .face_boundary(unb)
        .iter()
        .find(|&&h| map.half_at_vertex(h) != v)
        .map(|&h| map.half_label(h))
        .or_else(|| (0..4).find(|&i| sector_old[i] == unb).map(circ_a))
        .expect("unbounded face has a representative");

    let new_map = PlanarMap::build(&vertices, &edges, marker)?;

    // Face correspondences.
    let find_half = |lab: u32| (0..new_map.num_half_edges()).find(|&x| new_map.half_label(x) == lab).unwrap();
    let circle_faces: [usize; 4] = std::array::from_fn(|i| new_map.face_of_half(find_half(in_lab(i))));
    let mut face_map = vec![usize::MAX; map.num_faces()];
    for i in 0..4 {
        let remnant = new_map.face_of_half(find_half(circ_a(i)));
        if face_map[sector_old[i]] == usize::MAX {
            face_map[sector_old[i]] = remnant;
        } else if face_map[sector_old[i]] != remnant {
            return Err(MapError::Invalid("sector remnants disagree".into()));
        }
    }
    for oh in 0..map.num_half_edges() {
        if map.half_at_vertex(oh) == v {
            continue;
        }
        let of = map.face_of_half(oh);
        let nf = new_map.face_of_half(find_half(map.half_label(oh)));
        if face_map[of] == usize::MAX {
            face_map[of] = nf;
        } else if face_map[of] != nf {
            return Err(MapError::Invalid("genericize changed a far face".into()));
        }
    }
    if face_map.iter().any(|&f| f == usize::MAX) {
        return Err(MapError::Invalid("a face lost its representative".into()));
    }

    let new_vertices: [usize; 4] =
        std::array::from_fn(|i| new_map.vertex_by_label(wlab(i)).unwrap());
    let info = GenericizeInfo {
        vertex: v,
        new_vertices,
        spokes: spoke_idx,
        circle_edges: circle_idx,
        circle_faces,
        sector_old_faces: sector_old,
        face_map,
        edge_words,
    };
    Ok((new_map, info))
}
