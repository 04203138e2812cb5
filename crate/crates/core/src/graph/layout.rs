use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ConstellationGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutMethod {
    Spring,
    Spiral,
}

/// Per-vertex coordinates, all of length `dims`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub dims: usize,
    pub coords: Vec<Vec<f64>>,
    pub method: LayoutMethod,
    pub seed: u64,
    /// Largest force magnitude at the last iterate; zero for spirals.
    pub residual: f64,
}

impl Layout {
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        dist(&self.coords[u], &self.coords[v])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpringConfig {
    pub dims: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub rest_length: f64,
    pub stiffness: f64,
    pub repulsion: f64,
    /// Displacement per unit force per iteration.
    pub step: f64,
    /// Independent starts; the lowest-energy result wins.
    pub restarts: usize,
}

impl Default for SpringConfig {
    fn default() -> Self {
        SpringConfig {
            dims: 2,
            max_iters: 20_000,
            tol: 1e-9,
            seed: 0,
            rest_length: 1.0,
            stiffness: 1.0,
            repulsion: 1.0,
            step: 0.1,
            restarts: 4,
        }
    }
}

fn check_dims(dims: usize) -> Result<()> {
    if dims == 2 || dims == 3 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "dims must be 2 or 3, got {dims}"
        )))
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Seeded points on the unit circle (2D) or unit sphere (3D). A lone vertex
/// sits at the origin.
pub fn initial_positions(n: usize, dims: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    initial_positions_on_stream(n, dims, seed, 0)
}

fn initial_positions_on_stream(
    n: usize,
    dims: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<Vec<f64>>> {
    check_dims(dims)?;
    if n == 1 {
        return Ok(vec![vec![0.0; dims]]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    Ok((0..n)
        .map(|_| {
            let phi = rng.gen::<f64>() * TAU;
            if dims == 2 {
                vec![phi.cos(), phi.sin()]
            } else {
                let h: f64 = rng.gen_range(-1.0..=1.0);
                let r = (1.0 - h * h).sqrt();
                vec![r * phi.cos(), r * phi.sin(), h]
            }
        })
        .collect())
}

/// Force-directed layout with default constants.
pub fn spring_layout(
    g: &ConstellationGraph,
    dims: usize,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> Result<Layout> {
    spring_layout_with(
        g,
        &SpringConfig {
            dims,
            max_iters,
            tol,
            seed,
            ..SpringConfig::default()
        },
    )
}

/// Runs `cfg.restarts` seeded starts (ChaCha streams `0..restarts` of
/// `cfg.seed`) and keeps the one with the lowest energy. Stream 0 is
/// [`initial_positions`].
pub fn spring_layout_with(g: &ConstellationGraph, cfg: &SpringConfig) -> Result<Layout> {
    let mut best: Option<(f64, Layout)> = None;
    for stream in 0..cfg.restarts.max(1) as u64 {
        let init = initial_positions_on_stream(g.len(), cfg.dims, cfg.seed, stream)?;
        let l = spring_layout_from(g, cfg, init)?;
        let e = energy(g, cfg, &l.coords);
        if best.as_ref().map_or(true, |(b, _)| e < *b) {
            best = Some((e, l));
        }
    }
    Ok(best.expect("at least one start").1)
}

/// Spring energy `k/2 (d - L)^2` on edges plus `C / d` on non-edges.
pub fn energy(g: &ConstellationGraph, cfg: &SpringConfig, pos: &[Vec<f64>]) -> f64 {
    let n = pos.len();
    let mut adjacent = vec![false; n * n];
    for &(u, v) in g.edges() {
        adjacent[u * n + v] = true;
    }
    let mut e = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            let d = dist(&pos[u], &pos[v]).max(1e-9);
            e += if adjacent[u * n + v] {
                0.5 * cfg.stiffness * (d - cfg.rest_length).powi(2)
            } else {
                cfg.repulsion / d
            };
        }
    }
    e
}

/// Edges pull with `stiffness * (d - rest_length)`; non-adjacent pairs push
/// apart with `repulsion / d^2`. Every vertex moves by `step * force` until
/// the largest force is at most `tol` or `max_iters` is reached.
pub fn spring_layout_from(
    g: &ConstellationGraph,
    cfg: &SpringConfig,
    mut pos: Vec<Vec<f64>>,
) -> Result<Layout> {
    check_dims(cfg.dims)?;
    let n = g.len();
    if pos.len() != n {
        return Err(Error::LayoutMismatch {
            layout: pos.len(),
            graph: n,
        });
    }
    if pos.iter().any(|p| p.len() != cfg.dims) {
        return Err(Error::InvalidArgument(
            "initial positions have the wrong dimension".into(),
        ));
    }
    let mut adjacent = vec![false; n * n];
    for &(u, v) in g.edges() {
        adjacent[u * n + v] = true;
        adjacent[v * n + u] = true;
    }

    let mut force = vec![vec![0.0; cfg.dims]; n];
    let mut residual = forces(&pos, &adjacent, cfg, &mut force);
    for _ in 0..cfg.max_iters {
        if residual <= cfg.tol {
            break;
        }
        for (p, f) in pos.iter_mut().zip(&force) {
            for (x, fx) in p.iter_mut().zip(f) {
                *x += cfg.step * fx;
            }
        }
        residual = forces(&pos, &adjacent, cfg, &mut force);
    }
    Ok(Layout {
        dims: cfg.dims,
        coords: pos,
        method: LayoutMethod::Spring,
        seed: cfg.seed,
        residual,
    })
}

/// Fills `out` and returns the largest force magnitude. Pairs are visited in
/// a fixed order so results are reproducible bit for bit.
fn forces(pos: &[Vec<f64>], adjacent: &[bool], cfg: &SpringConfig, out: &mut [Vec<f64>]) -> f64 {
    let n = pos.len();
    for f in out.iter_mut() {
        f.fill(0.0);
    }
    for u in 0..n {
        for v in u + 1..n {
            let d = dist(&pos[u], &pos[v]).max(1e-9);
            // positive pulls u toward v
            let mag = if adjacent[u * n + v] {
                cfg.stiffness * (d - cfg.rest_length)
            } else {
                -cfg.repulsion / (d * d)
            };
            for k in 0..pos[u].len() {
                let c = mag * (pos[v][k] - pos[u][k]) / d;
                out[u][k] += c;
                out[v][k] -= c;
            }
        }
    }
    out.iter()
        .map(|f| f.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// Vertex `m` of `M` at `t = m / (M - 1)` on the helix
/// `(cos 2πτt, sin 2πτt, t)` with `τ = turns`. In 2D the axis coordinate is
/// dropped.
pub fn spiral_layout(g: &ConstellationGraph, turns: f64, dims: usize) -> Result<Layout> {
    check_dims(dims)?;
    if !turns.is_finite() {
        return Err(Error::InvalidArgument("turns must be finite".into()));
    }
    let m = g.len();
    let coords = (0..m)
        .map(|i| {
            let t = if m == 1 {
                0.0
            } else {
                i as f64 / (m - 1) as f64
            };
            let a = TAU * turns * t;
            let mut p = vec![a.cos(), a.sin()];
            if dims == 3 {
                p.push(t);
            }
            p
        })
        .collect();
    Ok(Layout {
        dims,
        coords,
        method: LayoutMethod::Spiral,
        seed: 0,
        residual: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeRule};
    use crate::modulo::{residue_table, PrimeModulus};

    fn graph(s: &str, rule: EdgeRule) -> ConstellationGraph {
        let m = PrimeModulus::new(s.parse().unwrap()).unwrap();
        build_graph(&residue_table(&m).unwrap(), rule).unwrap()
    }

    fn sub_graph(n: usize, edges: &[(usize, usize)]) -> ConstellationGraph {
        let g = graph("3+2i", EdgeRule::Cycle);
        ConstellationGraph::new(
            g.alpha(),
            g.vertices()[..n].to_vec(),
            edges.iter().copied(),
            EdgeRule::Cycle,
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_sits_at_origin() {
        let l = spring_layout(&sub_graph(1, &[]), 3, 100, 1e-9, 7).unwrap();
        assert_eq!(l.coords, vec![vec![0.0; 3]]);
        assert_eq!(l.residual, 0.0);
    }

    #[test]
    fn two_vertices_rest_at_spring_length() {
        for seed in 0..5 {
            for dims in [2, 3] {
                let l = spring_layout(&sub_graph(2, &[(0, 1)]), dims, 10_000, 1e-9, seed).unwrap();
                assert!((l.distance(0, 1) - 1.0).abs() < 1e-6);
                assert!(l.residual <= 1e-9);
            }
        }
    }

    #[test]
    fn cycle_settles_on_a_circle() {
        let g = graph("3+2i", EdgeRule::Cycle);
        for seed in 0..20 {
            let l = spring_layout(&g, 2, 20_000, 1e-9, seed).unwrap();
            let n = l.coords.len() as f64;
            let c: Vec<f64> = (0..2)
                .map(|k| l.coords.iter().map(|p| p[k]).sum::<f64>() / n)
                .collect();
            let radii: Vec<f64> = l.coords.iter().map(|p| dist(p, &c)).collect();
            let mean = radii.iter().sum::<f64>() / n;
            for r in radii {
                assert!(
                    (r - mean).abs() <= 0.05 * mean,
                    "seed {seed}: {r} vs {mean}"
                );
            }
        }
    }

    #[test]
    fn spring_is_deterministic() {
        let g = graph("3+i+j", EdgeRule::UnitDifference);
        let a = spring_layout(&g, 3, 500, 1e-9, 42).unwrap();
        let b = spring_layout(&g, 3, 500, 1e-9, 42).unwrap();
        assert_eq!(a, b);
        let c = spring_layout(&g, 3, 500, 1e-9, 43).unwrap();
        assert_ne!(a.coords, c.coords);
    }

    #[test]
    fn translation_moves_the_result_by_the_same_offset() {
        let g = graph("3+2i", EdgeRule::Cycle);
        let cfg = SpringConfig {
            max_iters: 2000,
            ..SpringConfig::default()
        };
        let init = initial_positions(g.len(), 2, 5).unwrap();
        let shift = [3.25, -1.5];
        let moved: Vec<Vec<f64>> = init
            .iter()
            .map(|p| vec![p[0] + shift[0], p[1] + shift[1]])
            .collect();
        let a = spring_layout_from(&g, &cfg, init).unwrap();
        let b = spring_layout_from(&g, &cfg, moved).unwrap();
        for (p, q) in a.coords.iter().zip(&b.coords) {
            assert!((q[0] - p[0] - shift[0]).abs() < 1e-9);
            assert!((q[1] - p[1] - shift[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn initial_points_are_on_the_unit_sphere() {
        for dims in [2, 3] {
            for p in initial_positions(20, dims, 1).unwrap() {
                assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
        assert!(initial_positions(3, 4, 0).is_err());
    }

    #[test]
    fn spiral_spacing_is_uniform() {
        let g = graph("3+2i", EdgeRule::Cycle);
        for dims in [2, 3] {
            let l = spiral_layout(&g, 2.0, dims).unwrap();
            let gaps: Vec<f64> = (1..g.len()).map(|i| l.distance(i - 1, i)).collect();
            for w in gaps.windows(2) {
                assert!((w[0] - w[1]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spiral_endpoints() {
        let l = spiral_layout(&sub_graph(1, &[]), 2.0, 3).unwrap();
        assert_eq!(l.coords, vec![vec![1.0, 0.0, 0.0]]);
        let l = spiral_layout(&sub_graph(2, &[(0, 1)]), 1.0, 3).unwrap();
        assert_eq!(l.coords[0], vec![1.0, 0.0, 0.0]);
        assert!((l.coords[1][0] - 1.0).abs() < 1e-12 && l.coords[1][1].abs() < 1e-12);
        assert_eq!(l.coords[1][2], 1.0);
    }
}
