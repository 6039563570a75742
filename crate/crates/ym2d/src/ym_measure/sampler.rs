//! Monte Carlo estimation of Wilson observables, with sharded deterministic
//! sampling and common-random-number coupling across perturbed area vectors.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{lasso_basis, loop_in_lassos, LassoWord, MeasureError, SpanningTree};
use crate::group_core::{dagger, heat, ntrace, C64, CMat, GroupSpec};
use crate::planar_map::{AreaVector, LoopWord, PlanarMap};

/// Step-count rule for the heat-kernel walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    /// max(8, ceil(64 t)) steps: the default calibration.
    Default,
    /// max(4, ceil(8 t)) steps: for very large N, where the documented bias
    /// budget absorbs the coarser walk.
    Coarse,
    Fixed(usize),
}

impl StepRule {
    pub fn steps(&self, t: f64) -> usize {
        match self {
            StepRule::Default => heat::default_steps(t),
            StepRule::Coarse => heat::coarse_steps(t),
            StepRule::Fixed(m) => (*m).max(1),
        }
    }
}

/// Monte Carlo parameters. Identical parameters reproduce identical output.
#[derive(Debug, Clone, Copy)]
pub struct McParams {
    pub samples: usize,
    pub seed: u64,
    pub shards: usize,
    pub steps: StepRule,
}

impl Default for McParams {
    fn default() -> Self {
        McParams { samples: 10_000, seed: 0, shards: 4, steps: StepRule::Default }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Independent RNG stream for a shard, derived from the master seed.
pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut state = seed ^ shard.wrapping_mul(0xa076_1d64_78bd_642f);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

#[derive(Debug, Clone, Copy)]
pub struct WilsonEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub mean_im: f64,
    pub stderr_im: f64,
    pub samples: usize,
}

struct Accum {
    n: usize,
    sum_re: f64,
    sum_im: f64,
    sumsq_re: f64,
    sumsq_im: f64,
}

impl Accum {
    fn new() -> Accum {
        Accum { n: 0, sum_re: 0.0, sum_im: 0.0, sumsq_re: 0.0, sumsq_im: 0.0 }
    }
    fn push(&mut self, z: C64) {
        self.n += 1;
        self.sum_re += z.re;
        self.sum_im += z.im;
        self.sumsq_re += z.re * z.re;
        self.sumsq_im += z.im * z.im;
    }
    fn merge(mut self, other: Accum) -> Accum {
        self.n += other.n;
        self.sum_re += other.sum_re;
        self.sum_im += other.sum_im;
        self.sumsq_re += other.sumsq_re;
        self.sumsq_im += other.sumsq_im;
        self
    }
    fn estimate(&self) -> WilsonEstimate {
        let n = self.n as f64;
        let mean = self.sum_re / n;
        let mean_im = self.sum_im / n;
        let var_re = ((self.sumsq_re / n) - mean * mean).max(0.0);
        let var_im = ((self.sumsq_im / n) - mean_im * mean_im).max(0.0);
        let denom = (n - 1.0).max(1.0);
        WilsonEstimate {
            mean,
            stderr: (var_re * n / denom / n).sqrt(),
            mean_im,
            stderr_im: (var_im * n / denom / n).sqrt(),
            samples: self.n,
        }
    }
}

/// Product of normalized traces of the holonomies of the given lasso words,
/// looking face values up in `center` except for one overridden face.
pub fn product_of_traces(
    spec: &GroupSpec,
    words: &[LassoWord],
    center: &[CMat],
    over: Option<(usize, &CMat)>,
) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for word in words {
        let mut h = spec.identity();
        for &(f, fwd) in word {
            let v = match over {
                Some((g, m)) if g == f => m,
                _ => &center[f],
            };
            let m = if fwd { v.clone() } else { dagger(v) };
            h = m.dot(&h);
        }
        acc *= ntrace(&h);
    }
    acc
}

/// Monte Carlo mean and standard error of the product of Wilson traces of
/// the given loops under the Yang-Mills measure for (map, areas).
pub fn wilson_estimate(
    map: &PlanarMap,
    areas: &AreaVector,
    loops: &[LoopWord],
    spec: &GroupSpec,
    params: &McParams,
) -> Result<WilsonEstimate, MeasureError> {
    assert!(params.samples >= 2, "need at least two samples");
    assert!(params.shards >= 1);
    let tree = SpanningTree::breadth_first(map)?;
    wilson_estimate_with_tree(map, areas, loops, spec, params, &tree)
}

/// Same estimator with an explicit spanning tree (estimates do not depend on
/// the choice; exposed for the tree-independence check).
pub fn wilson_estimate_with_tree(
    map: &PlanarMap,
    areas: &AreaVector,
    loops: &[LoopWord],
    spec: &GroupSpec,
    params: &McParams,
    tree: &SpanningTree,
) -> Result<WilsonEstimate, MeasureError> {
    let basis = lasso_basis(map, tree, tree.root)?;
    let words: Vec<LassoWord> =
        loops.iter().map(|lp| loop_in_lassos(map, &basis, lp)).collect::<Result<_, _>>()?;
    let faces: Vec<usize> = map.bounded_faces().collect();
    let n_faces = map.num_faces();
    let per_shard = split_counts(params.samples, params.shards);

    let accums: Vec<Accum> = (0..params.shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = shard_rng(params.seed, shard as u64);
            let mut acc = Accum::new();
            let mut center: Vec<CMat> = vec![spec.identity(); n_faces];
            for _ in 0..per_shard[shard] {
                for &f in &faces {
                    let t = areas.get(f);
                    center[f] =
                        heat::heat_sample(spec, t, params.steps.steps(t), &mut rng).into_matrix();
                }
                acc.push(product_of_traces(spec, &words, &center, None));
            }
            acc
        })
        .collect();
    let total = accums.into_iter().fold(Accum::new(), Accum::merge);
    Ok(total.estimate())
}

fn split_counts(samples: usize, shards: usize) -> Vec<usize> {
    let base = samples / shards;
    let rem = samples % shards;
    (0..shards).map(|i| base + usize::from(i < rem)).collect()
}

/// One coupled draw of all lasso variables: each perturbed face carries a
/// base sample at t-h and two independent increments of time h, so the same
/// randomness realizes the face at t-h, t, and t+h, coupled through the
/// convolution identity.
pub struct CoupledFaceSamples {
    pub center: Vec<CMat>,
    pub plus: HashMap<usize, CMat>,
    pub minus: HashMap<usize, CMat>,
}

pub fn sample_coupled_lassos(
    map: &PlanarMap,
    areas: &AreaVector,
    spec: &GroupSpec,
    perturb: &[usize],
    h: f64,
    steps: StepRule,
    rng: &mut ChaCha8Rng,
) -> Result<CoupledFaceSamples, MeasureError> {
    let min = perturb.iter().map(|&f| areas.get(f)).fold(f64::INFINITY, f64::min);
    if !perturb.is_empty() && h >= min {
        return Err(MeasureError::StepTooLarge { h, min });
    }
    let mut center: Vec<CMat> = vec![spec.identity(); map.num_faces()];
    let mut plus = HashMap::new();
    let mut minus = HashMap::new();
    for f in map.bounded_faces() {
        let t = areas.get(f);
        if perturb.contains(&f) {
            let base =
                heat::heat_sample(spec, t - h, steps.steps(t - h), rng).into_matrix();
            let j1 = heat::heat_sample(spec, h, steps.steps(h), rng).into_matrix();
            let j2 = heat::heat_sample(spec, h, steps.steps(h), rng).into_matrix();
            let c = base.dot(&j1);
            plus.insert(f, c.dot(&j2));
            minus.insert(f, base);
            center[f] = c;
        } else {
            center[f] = heat::heat_sample(spec, t, steps.steps(t), rng).into_matrix();
        }
    }
    Ok(CoupledFaceSamples { center, plus, minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::examples::*;

    #[test]
    fn simple_loop_law() {
        let ex = standard_example(ExampleName::Simple, &[1.0]).unwrap();
        let spec = GroupSpec::new(2);
        let params = McParams { samples: 4000, seed: 7, shards: 4, steps: StepRule::Default };
        let est =
            wilson_estimate(&ex.map, &ex.areas, &[ex.loops["L"].clone()], &spec, &params).unwrap();
        let want = (-0.5f64).exp();
        assert!(
            (est.mean - want).abs() < 4.0 * est.stderr + 0.005,
            "mean {} vs {want} (stderr {})",
            est.mean,
            est.stderr
        );
        assert!(est.mean_im.abs() < 4.0 * est.stderr_im + 1e-9);
    }

    #[test]
    fn zero_areas_give_exactly_one() {
        let ex = standard_example(ExampleName::FigureEight, &[0.0, 0.0]).unwrap();
        let spec = GroupSpec::new(3);
        let params = McParams { samples: 16, seed: 1, shards: 2, steps: StepRule::Default };
        let est =
            wilson_estimate(&ex.map, &ex.areas, &[ex.loops["L"].clone()], &spec, &params).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn determinism_for_fixed_seed_and_shards() {
        let ex = standard_example(ExampleName::DoubleWound, &[0.5, 0.8]).unwrap();
        let spec = GroupSpec::new(2);
        let params = McParams { samples: 500, seed: 3, shards: 3, steps: StepRule::Default };
        let a = wilson_estimate(&ex.map, &ex.areas, &[ex.loops["L"].clone()], &spec, &params)
            .unwrap();
        let b = wilson_estimate(&ex.map, &ex.areas, &[ex.loops["L"].clone()], &spec, &params)
            .unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn figure_eight_factorizes() {
        // E[tr hol] = e^{-(t1+t2)/2}: the two lobes are independent.
        let ex = standard_example(ExampleName::FigureEight, &[0.5, 0.5]).unwrap();
        let spec = GroupSpec::new(2);
        let params = McParams { samples: 4000, seed: 11, shards: 4, steps: StepRule::Default };
        let est =
            wilson_estimate(&ex.map, &ex.areas, &[ex.loops["L"].clone()], &spec, &params).unwrap();
        let want = (-0.5f64).exp();
        assert!((est.mean - want).abs() < 4.0 * est.stderr + 0.01);
    }

    #[test]
    fn tree_choice_does_not_shift_estimates() {
        let ex = standard_example(ExampleName::Fig8Example, &[0.8, 1.0, 1.2, 0.9]).unwrap();
        let spec = GroupSpec::new(2);
        let params = McParams { samples: 4000, seed: 5, shards: 4, steps: StepRule::Default };
        let t1 = SpanningTree::breadth_first(&ex.map).unwrap();
        let t2 = SpanningTree::breadth_first_reversed(&ex.map).unwrap();
        assert!((0..ex.map.num_edges()).any(|e| t1.contains(e) != t2.contains(e)));
        let a = wilson_estimate_with_tree(
            &ex.map, &ex.areas, &[ex.loops["L"].clone()], &spec, &params, &t1,
        )
        .unwrap();
        let b = wilson_estimate_with_tree(
            &ex.map, &ex.areas, &[ex.loops["L"].clone()], &spec, &params, &t2,
        )
        .unwrap();
        let sigma = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.mean - b.mean).abs() < 3.0 * sigma + 0.01);
    }

    #[test]
    fn coupled_sampling_rejects_large_steps() {
        let ex = standard_example(ExampleName::Simple, &[0.04]).unwrap();
        let spec = GroupSpec::new(1);
        let mut rng = shard_rng(0, 0);
        let f = ex.map.bounded_faces().next().unwrap();
        let err = sample_coupled_lassos(
            &ex.map, &ex.areas, &spec, &[f], 0.05, StepRule::Default, &mut rng,
        );
        assert!(matches!(err, Err(MeasureError::StepTooLarge { .. })));
    }
}
