//! Catalog of concrete maps and loops used across the crate and the CLI.
//!
//! Each constructor returns the map with counterclockwise rotations, the
//! designated unbounded face, named loops, and a parameterized area vector.

use std::collections::BTreeMap;

use super::{AreaVector, LoopWord, MapError, PlanarMap, SignedEdge};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleName {
    /// One vertex, one self-loop enclosing area t. Parameters: [t].
    Simple,
    /// Two lobes side by side meeting in one simple crossing. Parameters: [t1, t2].
    FigureEight,
    /// A curve winding twice: inner disk and annulus. Parameters: [inner, annulus].
    DoubleWound,
    /// Two circles crossing transversally at two points. Parameters:
    /// [crescent1, lens, crescent2]. Loops L1, L2.
    TwoLoopsAtVertex,
    /// A two-crossing loop: a disk with a petal at each crossing, petals
    /// outside. Parameters: [petal_p, disk, petal_q].
    Fig2Example,
    /// The three-crossing loop whose lasso decomposition is
    /// (L1 L2 L3)(L1^-1 L4^-1 L3^-1); all four faces around the base crossing
    /// are bounded and distinct. Parameters: [t1, t2, t3, t4].
    Fig8Example,
    /// A small graph with a quadrilateral face behind a bigon, realizing the
    /// two captioned lasso words e1 e5^-1 e6 e2^-1 and e1 e7 e5 e1^-1.
    /// Parameters: [quad, bigon].
    Fig5Fragment,
}

impl ExampleName {
    pub fn parse(s: &str) -> Result<ExampleName, MapError> {
        match s {
            "simple" => Ok(ExampleName::Simple),
            "figure_eight" => Ok(ExampleName::FigureEight),
            "double_wound" => Ok(ExampleName::DoubleWound),
            "two_loops_at_vertex" => Ok(ExampleName::TwoLoopsAtVertex),
            "fig2_example" => Ok(ExampleName::Fig2Example),
            "fig8_example" => Ok(ExampleName::Fig8Example),
            "fig5_fragment" => Ok(ExampleName::Fig5Fragment),
            other => Err(MapError::UnknownName(other.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleName::Simple => "simple",
            ExampleName::FigureEight => "figure_eight",
            ExampleName::DoubleWound => "double_wound",
            ExampleName::TwoLoopsAtVertex => "two_loops_at_vertex",
            ExampleName::Fig2Example => "fig2_example",
            ExampleName::Fig8Example => "fig8_example",
            ExampleName::Fig5Fragment => "fig5_fragment",
        }
    }

    pub fn param_count(&self) -> usize {
        match self {
            ExampleName::Simple => 1,
            ExampleName::FigureEight | ExampleName::DoubleWound | ExampleName::Fig5Fragment => 2,
            ExampleName::TwoLoopsAtVertex | ExampleName::Fig2Example => 3,
            ExampleName::Fig8Example => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StandardExample {
    pub name: ExampleName,
    pub map: PlanarMap,
    pub areas: AreaVector,
    pub loops: BTreeMap<String, LoopWord>,
}

/// Build a named example with the given area parameters.
pub fn standard_example(name: ExampleName, params: &[f64]) -> Result<StandardExample, MapError> {
    if params.len() != name.param_count() {
        return Err(MapError::Invalid(format!(
            "{} takes {} area parameters, got {}",
            name.as_str(),
            name.param_count(),
            params.len()
        )));
    }
    match name {
        ExampleName::Simple => simple(params[0]),
        ExampleName::FigureEight => figure_eight(params[0], params[1]),
        ExampleName::DoubleWound => double_wound(params[0], params[1]),
        ExampleName::TwoLoopsAtVertex => two_loops_at_vertex(params[0], params[1], params[2]),
        ExampleName::Fig2Example => fig2_example(params[0], params[1], params[2]),
        ExampleName::Fig8Example => fig8_example(params[0], params[1], params[2], params[3]),
        ExampleName::Fig5Fragment => fig5_fragment(params[0], params[1]),
    }
}

/// All examples at generic default areas, for sweeping tests.
pub fn all_standard_examples() -> Vec<StandardExample> {
    vec![
        standard_example(ExampleName::Simple, &[1.0]).unwrap(),
        standard_example(ExampleName::FigureEight, &[0.7, 1.3]).unwrap(),
        standard_example(ExampleName::DoubleWound, &[0.6, 0.9]).unwrap(),
        standard_example(ExampleName::TwoLoopsAtVertex, &[0.8, 0.5, 1.1]).unwrap(),
        standard_example(ExampleName::Fig2Example, &[0.7, 1.0, 0.9]).unwrap(),
        standard_example(ExampleName::Fig8Example, &[0.8, 1.0, 1.2, 0.9]).unwrap(),
        standard_example(ExampleName::Fig5Fragment, &[1.0, 0.8]).unwrap(),
    ]
}

fn named_loops(pairs: Vec<(&str, LoopWord)>) -> BTreeMap<String, LoopWord> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn simple(t: f64) -> Result<StandardExample, MapError> {
    let map = PlanarMap::build(&[(0, vec![1, 2])], &[(1, [1, 2])], 2)?;
    let mut areas = AreaVector::zeros(&map);
    areas.set(map.face_of_label(1), t);
    let lp = LoopWord { base: 0, steps: vec![SignedEdge::fwd(0)] };
    Ok(StandardExample {
        name: ExampleName::Simple,
        map,
        areas,
        loops: named_loops(vec![("L", lp)]),
    })
}

/// Figure eight and double-wound share the same sphere map (one 4-valent
/// vertex, two interleaved self-loops); they differ only in which face is
/// marked unbounded.
fn one_vertex_two_loops(marker: u32) -> Result<PlanarMap, MapError> {
    PlanarMap::build(&[(0, vec![1, 3, 4, 2])], &[(1, [1, 2]), (2, [3, 4])], marker)
}

fn figure_eight(t1: f64, t2: f64) -> Result<StandardExample, MapError> {
    let map = one_vertex_two_loops(2)?;
    let mut areas = AreaVector::zeros(&map);
    areas.set(map.face_of_label(1), t1); // lobe traversed first
    areas.set(map.face_of_label(4), t2); // lobe traversed second
    let lp = LoopWord { base: 0, steps: vec![SignedEdge::fwd(0), SignedEdge::fwd(1)] };
    Ok(StandardExample {
        name: ExampleName::FigureEight,
        map,
        areas,
        loops: named_loops(vec![("L", lp)]),
    })
}

fn double_wound(inner: f64, annulus: f64) -> Result<StandardExample, MapError> {
    let map = one_vertex_two_loops(4)?;
    let mut areas = AreaVector::zeros(&map);
    areas.set(map.face_of_label(1), inner);
    areas.set(map.face_of_label(2), annulus);
    let lp = LoopWord { base: 0, steps: vec![SignedEdge::fwd(0), SignedEdge::fwd(1)] };
    Ok(StandardExample {
        name: ExampleName::DoubleWound,
        map,
        areas,
        loops: named_loops(vec![("L", lp)]),
    })
}

fn two_loops_at_vertex(c1: f64, lens: f64, c2: f64) -> Result<StandardExample, MapError> {
    let map = PlanarMap::build(
        &[(0, vec![1, 8, 4, 5]), (1, vec![3, 7, 2, 6])],
        &[(1, [1, 2]), (2, [3, 4]), (3, [5, 6]), (4, [7, 8])],
        1,
    )?;
    let mut areas = AreaVector::zeros(&map);
    areas.set(map.face_of_label(8), c1); // crescent of the first circle
    areas.set(map.face_of_label(4), lens);
    areas.set(map.face_of_label(5), c2);
    let l1 = LoopWord { base: 0, steps: vec![SignedEdge::fwd(0), SignedEdge::fwd(1)] };
    let l2 = LoopWord { base: 0, steps: vec![SignedEdge::fwd(2), SignedEdge::fwd(3)] };
    Ok(StandardExample {
        name: ExampleName::TwoLoopsAtVertex,
        map,
        areas,
        loops: named_loops(vec![("L1", l1), ("L2", l2)]),
    })
}

fn fig2_example(petal_p: f64, disk: f64, petal_q: f64) -> Result<StandardExample, MapError> {
    let map = PlanarMap::build(
        &[(0, vec![1, 3, 8, 2]), (1, vec![4, 6, 5, 7])],
        &[(1, [1, 2]), (2, [3, 4]), (3, [5, 6]), (4, [7, 8])],
        2,
    )?;
    let mut areas = AreaVector::zeros(&map);
    areas.set(map.face_of_label(1), petal_p);
    areas.set(map.face_of_label(8), disk);
    areas.set(map.face_of_label(5), petal_q);
    let lp = LoopWord {
        base: 0,
        steps: vec![
            SignedEdge::fwd(0),
            SignedEdge::fwd(1),
            SignedEdge::fwd(2),
            SignedEdge::fwd(3),
        ],
    };
    Ok(StandardExample {
        name: ExampleName::Fig2Example,
        map,
        areas,
        loops: named_loops(vec![("L", lp)]),
    })
}

fn fig8_example(t1: f64, t2: f64, t3: f64, t4: f64) -> Result<StandardExample, MapError> {
    let map = PlanarMap::build(
        &[(0, vec![1, 3, 5, 7]), (1, vec![2, 11, 9, 4]), (2, vec![10, 12, 8, 6])],
        &[
            (1, [1, 2]),
            (2, [3, 4]),
            (3, [5, 6]),
            (4, [7, 8]),
            (5, [9, 10]),
            (6, [11, 12]),
        ],
        9,
    )?;
    let mut areas = AreaVector::zeros(&map);
    areas.set(map.face_of_label(3), t1); // sector between the first and second departures
    areas.set(map.face_of_label(5), t2);
    areas.set(map.face_of_label(7), t3);
    areas.set(map.face_of_label(1), t4);
    let lp = LoopWord {
        base: 0,
        steps: vec![
            SignedEdge::fwd(0),
            SignedEdge::fwd(4),
            SignedEdge::rev(3),
            SignedEdge::fwd(1),
            SignedEdge::fwd(5),
            SignedEdge::rev(2),
        ],
    };
    Ok(StandardExample {
        name: ExampleName::Fig8Example,
        map,
        areas,
        loops: named_loops(vec![("L", lp)]),
    })
}

fn fig5_fragment(quad: f64, bigon: f64) -> Result<StandardExample, MapError> {
    let map = PlanarMap::build(
        &[(0, vec![1, 3]), (1, vec![9, 6, 2]), (2, vec![7, 5, 10]), (3, vec![4, 8])],
        &[(1, [1, 2]), (2, [3, 4]), (5, [5, 6]), (6, [7, 8]), (7, [9, 10])],
        1,
    )?;
    let mut areas = AreaVector::zeros(&map);
    areas.set(map.face_of_label(2), quad); // face bounded by e1, e2, e5, e6
    areas.set(map.face_of_label(6), bigon); // face bounded by e5, e7
    // The quadrilateral face boundary from the base: e1 e5^-1 e6 e2^-1.
    let l1 = LoopWord {
        base: 0,
        steps: vec![
            SignedEdge::fwd(0),
            SignedEdge::rev(2),
            SignedEdge::fwd(3),
            SignedEdge::rev(1),
        ],
    };
    Ok(StandardExample {
        name: ExampleName::Fig5Fragment,
        map,
        areas,
        loops: named_loops(vec![("L1", l1)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds_and_loops_are_closed() {
        for ex in all_standard_examples() {
            for (name, lp) in &ex.loops {
                ex.map
                    .check_loop(lp)
                    .unwrap_or_else(|e| panic!("{}::{name}: {e}", ex.name.as_str()));
            }
        }
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(matches!(ExampleName::parse("nope"), Err(MapError::UnknownName(_))));
    }

    #[test]
    fn figure_eight_and_double_wound_share_sphere_map() {
        let fe = standard_example(ExampleName::FigureEight, &[1.0, 1.0]).unwrap();
        let dw = standard_example(ExampleName::DoubleWound, &[1.0, 1.0]).unwrap();
        assert_ne!(fe.map.unbounded_face(), dw.map.unbounded_face());
        assert_eq!(fe.map.num_faces(), dw.map.num_faces());
    }

    #[test]
    fn fig5_fragment_face_structure() {
        let ex = standard_example(ExampleName::Fig5Fragment, &[1.0, 1.0]).unwrap();
        let map = &ex.map;
        assert_eq!(map.num_faces(), 3);
        // The bigon face shares its non-tree edge with the unbounded face.
        let bigon = map.face_of_label(6);
        let shared = map.edges_shared_with_unbounded(bigon);
        assert_eq!(shared.len(), 1);
        assert_eq!(map.edge_label(shared[0]), 7);
    }
}
