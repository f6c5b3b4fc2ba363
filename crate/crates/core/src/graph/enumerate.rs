//! Complete enumeration of internally connected and of all admissible graphs.
//!
//! An internally connected graph with `m >= 1` internal vertices is a connected
//! simple "core" on the internal vertices plus legs to externals. With weight
//! `w` it has `w + m` edges, so a core with `k` edges carries `w + m - k >= 1`
//! legs; trivalence forces `k >= 2m - w` and `m <= 2w`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::canon::canonical_labeling;
use super::{glue, CanonicalGraph, GraphError, RawGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumLimits {
    /// Refuse to produce more than this many graphs for one `(n, weight)` request.
    pub max_graphs: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        Self { max_graphs: 5_000_000 }
    }
}

type Cache = Mutex<HashMap<(usize, usize, usize), Arc<Vec<CanonicalGraph>>>>;

fn ic_cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn all_cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Internally connected graphs with `n` externals, weight `w` and exactly `m`
/// internal vertices, sorted.
pub fn enumerate_with_internal(
    n: usize,
    w: usize,
    m: usize,
    limits: EnumLimits,
) -> Result<Arc<Vec<CanonicalGraph>>, GraphError> {
    let key = (n, w, m);
    if let Some(v) = ic_cache().lock().unwrap().get(&key).cloned() {
        return check_limit(v, n, w, limits);
    }
    let v = Arc::new(generate(n, w, m, limits)?);
    ic_cache().lock().unwrap().insert(key, v.clone());
    Ok(v)
}

fn check_limit(
    v: Arc<Vec<CanonicalGraph>>,
    n: usize,
    w: usize,
    limits: EnumLimits,
) -> Result<Arc<Vec<CanonicalGraph>>, GraphError> {
    if v.len() > limits.max_graphs {
        Err(GraphError::ResourceLimit {
            n,
            weight: w,
            limit: limits.max_graphs,
        })
    } else {
        Ok(v)
    }
}

/// All nonzero internally connected graphs with `n` externals and weight `w`,
/// ordered by internal count, then canonical edge list.
pub fn enumerate_internally_connected(
    n: usize,
    w: usize,
    limits: EnumLimits,
) -> Result<Vec<CanonicalGraph>, GraphError> {
    if n == 0 || w == 0 {
        return Ok(Vec::new());
    }
    let parts: Vec<Arc<Vec<CanonicalGraph>>> = (0..=2 * w)
        .into_par_iter()
        .map(|m| enumerate_with_internal(n, w, m, limits))
        .collect::<Result<_, _>>()?;
    let out: Vec<CanonicalGraph> = parts.iter().flat_map(|p| p.iter().cloned()).collect();
    if out.len() > limits.max_graphs {
        return Err(GraphError::ResourceLimit {
            n,
            weight: w,
            limit: limits.max_graphs,
        });
    }
    Ok(out)
}

fn generate(n: usize, w: usize, m: usize, limits: EnumLimits) -> Result<Vec<CanonicalGraph>, GraphError> {
    if m == 0 {
        if w != 1 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                out.push(CanonicalGraph::edge(n, a, b));
            }
        }
        return Ok(out);
    }
    if n + m > 32 {
        return Err(GraphError::ResourceLimit {
            n,
            weight: w,
            limit: limits.max_graphs,
        });
    }
    let min_core = (2 * m).saturating_sub(w);
    let max_core = w + m - 1;
    let cores = connected_cores(m, max_core);
    let candidates: Vec<&Vec<(usize, usize)>> = cores
        .iter()
        .filter(|c| c.len() >= min_core && c.len() <= max_core)
        .collect();
    let found: Vec<Vec<CanonicalGraph>> = candidates
        .par_iter()
        .map(|core| attach_legs(n, m, w + m - core.len(), core))
        .collect();
    let mut set: HashSet<CanonicalGraph> = HashSet::new();
    for batch in found {
        set.extend(batch);
        if set.len() > limits.max_graphs {
            return Err(GraphError::ResourceLimit {
                n,
                weight: w,
                limit: limits.max_graphs,
            });
        }
    }
    let mut out: Vec<CanonicalGraph> = set.into_iter().collect();
    out.sort();
    Ok(out)
}

/// All distributions of `legs` legs on the core's vertices (each vertex gets a
/// set of externals) making every internal vertex at least trivalent.
fn attach_legs(n: usize, m: usize, legs: usize, core: &[(usize, usize)]) -> Vec<CanonicalGraph> {
    let mut deg = vec![0usize; m];
    for &(a, b) in core {
        deg[a] += 1;
        deg[b] += 1;
    }
    let need: Vec<usize> = deg.iter().map(|&d| 3usize.saturating_sub(d)).collect();
    let mut suffix_need = vec![0usize; m + 1];
    for v in (0..m).rev() {
        suffix_need[v] = suffix_need[v + 1] + need[v];
    }
    if suffix_need[0] > legs {
        return Vec::new();
    }
    let subsets: Vec<Vec<u32>> = (0..=n)
        .map(|k| (0u32..1 << n).filter(|s| s.count_ones() as usize == k).collect())
        .collect();
    let mut out = HashSet::new();
    let mut choice = vec![0u32; m];
    fn rec(
        v: usize,
        left: usize,
        ctx: (&[usize], &[usize], &[Vec<u32>]),
        choice: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u32]),
    ) {
        let (need, suffix_need, subsets) = ctx;
        if v == choice.len() {
            if left == 0 {
                emit(choice);
            }
            return;
        }
        let hi = (left - suffix_need[v + 1]).min(subsets.len() - 1);
        for k in need[v]..=hi {
            for &s in &subsets[k] {
                choice[v] = s;
                rec(v + 1, left - k, ctx, choice, emit);
            }
        }
    }
    let mut emit = |choice: &[u32]| {
        let mut edges: Vec<(usize, usize)> = core.iter().map(|&(a, b)| (a + n, b + n)).collect();
        for (v, &s) in choice.iter().enumerate() {
            for e in 0..n {
                if s >> e & 1 == 1 {
                    edges.push((e, v + n));
                }
            }
        }
        let (g, _) = RawGraph::new(n, m, edges).canonicalize_unchecked();
        if !g.is_zero() {
            out.insert(g);
        }
    };
    rec(0, legs, (&need, &suffix_need, &subsets), &mut choice, &mut emit);
    out.into_iter().collect()
}

type CoreCache = Mutex<HashMap<(usize, usize), Arc<Vec<Vec<(usize, usize)>>>>>;

/// Connected simple graphs on `m` vertices with at most `max_edges` edges, up to isomorphism.
fn connected_cores(m: usize, max_edges: usize) -> Arc<Vec<Vec<(usize, usize)>>> {
    static C: OnceLock<CoreCache> = OnceLock::new();
    let cache = C.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(m, max_edges)).cloned() {
        return v;
    }
    let max_edges = max_edges.min(m * (m - 1) / 2);
    let mut level: Vec<Vec<(u8, u8)>> = vec![Vec::new()];
    let mut all: Vec<Vec<(usize, usize)>> = Vec::new();
    for k in 0..=max_edges {
        for g in &level {
            let edges: Vec<(usize, usize)> = g.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
            if is_connected(m, &edges) {
                all.push(edges);
            }
        }
        if k == max_edges {
            break;
        }
        let next: HashSet<Vec<(u8, u8)>> = level
            .par_iter()
            .flat_map_iter(|g| {
                let present: HashSet<(u8, u8)> = g.iter().copied().collect();
                let mut out = Vec::new();
                for a in 0..m as u8 {
                    for b in a + 1..m as u8 {
                        if present.contains(&(a, b)) {
                            continue;
                        }
                        let mut e: Vec<(usize, usize)> = g.iter().map(|&(x, y)| (x as usize, y as usize)).collect();
                        e.push((a as usize, b as usize));
                        out.push(canonical_labeling(0, m, &e, false).edges);
                    }
                }
                out
            })
            .collect();
        let mut next: Vec<Vec<(u8, u8)>> = next.into_iter().collect();
        next.sort();
        level = next;
    }
    let v = Arc::new(all);
    cache.lock().unwrap().insert((m, max_edges), v.clone());
    v
}

fn is_connected(m: usize, edges: &[(usize, usize)]) -> bool {
    if m == 0 {
        return false;
    }
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// All nonzero admissible graphs (products of internally connected graphs) with
/// `n` externals and total weight `w`, sorted.
pub fn enumerate_admissible(n: usize, w: usize, limits: EnumLimits) -> Result<Arc<Vec<CanonicalGraph>>, GraphError> {
    let key = (n, w, usize::MAX);
    if let Some(v) = all_cache().lock().unwrap().get(&key).cloned() {
        return check_limit(v, n, w, limits);
    }
    let by_weight: Vec<Vec<CanonicalGraph>> = (1..=w)
        .map(|k| enumerate_internally_connected(n, k, limits))
        .collect::<Result<_, _>>()?;
    let flat: Vec<(usize, &CanonicalGraph)> = by_weight
        .iter()
        .enumerate()
        .flat_map(|(k, gs)| gs.iter().map(move |g| (k + 1, g)))
        .collect();
    let mut set: HashSet<CanonicalGraph> = HashSet::new();
    let mut stack: Vec<&CanonicalGraph> = Vec::new();
    fn rec<'a>(
        start: usize,
        left: usize,
        flat: &[(usize, &'a CanonicalGraph)],
        stack: &mut Vec<&'a CanonicalGraph>,
        set: &mut HashSet<CanonicalGraph>,
        limit: usize,
    ) -> bool {
        if left == 0 {
            if let Ok(raw) = glue(stack) {
                let (g, _) = raw.canonicalize_unchecked();
                if !g.is_zero() {
                    set.insert(g);
                }
            }
            return set.len() <= limit;
        }
        for i in start..flat.len() {
            let (k, g) = flat[i];
            if k > left {
                continue;
            }
            stack.push(g);
            let ok = rec(i, left - k, flat, stack, set, limit);
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if !rec(0, w, &flat, &mut stack, &mut set, limits.max_graphs) {
        return Err(GraphError::ResourceLimit {
            n,
            weight: w,
            limit: limits.max_graphs,
        });
    }
    let mut out: Vec<CanonicalGraph> = set.into_iter().collect();
    out.sort();
    let v = Arc::new(out);
    all_cache().lock().unwrap().insert(key, v.clone());
    Ok(v)
}
