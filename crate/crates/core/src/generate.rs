//! Seeded random instances.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::graph::{Edge, Graph};
use crate::setcover::SetCoverInstance;
use crate::weight::{floor_pow, Weight};

fn check_range(weight_range: (i64, i64), min: i64) -> Result<()> {
    let (lo, hi) = weight_range;
    if lo > hi || lo < min {
        return Err(CoreError::InvalidParameter(format!("weight range ({lo}, {hi}) must satisfy {min} <= lo <= hi")));
    }
    Ok(())
}

/// Edge quota `min(floor(n^{1+c}), n(n-1)/2)`.
pub fn edge_quota(n: usize, target_c: f64) -> u64 {
    let complete = (n as u64) * (n as u64).saturating_sub(1) / 2;
    floor_pow(n as u64, 1.0 + target_c).min(complete)
}

/// Random graph with `min(floor(n^{1+c}), n(n-1)/2)` distinct edges drawn
/// uniformly without replacement and integer weights uniform in
/// `weight_range`. Edges come out sorted by `(u, v)`.
pub fn generate_graph<W: Weight>(n: usize, target_c: f64, weight_range: (i64, i64), seed: u64) -> Result<Graph<W>> {
    if n < 2 {
        return Err(CoreError::InvalidParameter(format!("need at least 2 vertices, got {n}")));
    }
    if !target_c.is_finite() || !(0.0..1.0).contains(&target_c) {
        return Err(CoreError::InvalidParameter(format!(
            "density exponent {target_c} must lie in [0, 1): n^(1+c) would exceed the complete graph"
        )));
    }
    generate_graph_with_edges(n, edge_quota(n, target_c) as usize, weight_range, seed)
}

/// Random graph with exactly `m` distinct edges.
pub fn generate_graph_with_edges<W: Weight>(
    n: usize,
    m: usize,
    weight_range: (i64, i64),
    seed: u64,
) -> Result<Graph<W>> {
    check_range(weight_range, 0)?;
    let complete = n * n.saturating_sub(1) / 2;
    if m > complete {
        return Err(CoreError::InvalidParameter(format!("{m} edges do not fit in a simple graph on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, complete, m).into_vec();
    picks.sort_unstable();

    let mut edges = Vec::with_capacity(m);
    // walk rows of the upper triangle alongside the sorted pair indices
    let (mut u, mut row_start) = (0usize, 0usize);
    for k in picks {
        while k >= row_start + (n - 1 - u) {
            row_start += n - 1 - u;
            u += 1;
        }
        let v = u + 1 + (k - row_start);
        let w = rng.random_range(weight_range.0..=weight_range.1);
        edges.push(Edge { u, v, w: W::from_ratio(w, 1) });
    }
    Graph::new(n, edges)
}

/// Random set system: membership `(i, j)` with probability `density`, then
/// every element left uncovered is patched into one uniformly chosen set.
pub fn generate_set_cover<W: Weight>(
    n: usize,
    m: usize,
    density: f64,
    weight_range: (i64, i64),
    seed: u64,
) -> Result<SetCoverInstance<W>> {
    if !(0.0..=1.0).contains(&density) {
        return Err(CoreError::InvalidParameter(format!("density {density} outside [0, 1]")));
    }
    check_range(weight_range, 1)?;
    if n == 0 && m > 0 {
        return Err(CoreError::InvalidParameter("no sets to cover a non-empty ground set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut covered = vec![false; m];
    for set in sets.iter_mut() {
        for (j, hit) in covered.iter_mut().enumerate() {
            if rng.random_bool(density) {
                set.push(j);
                *hit = true;
            }
        }
    }
    for (j, hit) in covered.iter().enumerate() {
        if !hit {
            sets[rng.random_range(0..n)].push(j);
        }
    }
    let weights = (0..n).map(|_| W::from_ratio(rng.random_range(weight_range.0..=weight_range.1), 1)).collect();
    SetCoverInstance::new(m, sets, weights)
}
