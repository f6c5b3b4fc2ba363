//! Canonical labeling: the lexicographically least sorted edge list over all
//! relabelings of the internal vertices.
//!
//! Internal labels are handed out in increasing order by branch and bound.
//! The sorted edge list is a concatenation of rows (edges `(a, b)` with
//! `a < b`, grouped by `a`), so once the first row with an unlabeled neighbour
//! is known, the next label must go to one of those neighbours; every other
//! choice produces a larger entry at that position. Branches whose determined
//! prefix already exceeds the best leaf are cut. Ties are never cut, so the
//! leaves reaching the minimum form a full automorphism orbit and their
//! edge-permutation parities reveal odd automorphisms.

use std::cmp::Ordering;

/// Result of canonically labeling an edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    /// Normalized (`a < b`) edges under the canonical labeling, sorted.
    pub edges: Vec<(u8, u8)>,
    /// Parity of the permutation taking the input edge order to `edges`.
    pub sign: i8,
    /// Some automorphism permutes the edges oddly.
    pub odd_automorphism: bool,
}

struct Search<'a> {
    adj: Vec<u32>,
    edges: &'a [(usize, usize)],
    label: Vec<Option<u8>>,
    order: Vec<usize>,
    best: Option<Labeling>,
    track_sign: bool,
    prefix: Vec<(u8, u8)>,
}

pub fn canonical_labeling(n_ext: usize, n_int: usize, edges: &[(usize, usize)], track_sign: bool) -> Labeling {
    let nv = n_ext + n_int;
    assert!(nv <= 32, "graphs are limited to 32 vertices");
    let mut adj = vec![0u32; nv];
    for &(a, b) in edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut s = Search {
        adj,
        edges,
        label: (0..nv).map(|v| (v < n_ext).then_some(v as u8)).collect(),
        order: (0..n_ext).collect(),
        best: None,
        track_sign,
        prefix: Vec::with_capacity(edges.len()),
    };
    s.descend();
    s.best.expect("search tree has at least one leaf")
}

impl Search<'_> {
    fn descend(&mut self) {
        let nv = self.label.len();
        let k = self.order.len();
        if k == nv {
            self.leaf();
            return;
        }
        // determined prefix and the first row that still has unlabeled neighbours
        self.prefix.clear();
        let mut open_row = None;
        for a in 0..k {
            let v = self.order[a];
            let mut row: Vec<u8> = Vec::new();
            let mut open = false;
            let mut nb = self.adj[v];
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                match self.label[u] {
                    Some(l) if (l as usize) > a => row.push(l),
                    Some(_) => {}
                    None => open = true,
                }
            }
            row.sort_unstable();
            self.prefix.extend(row.into_iter().map(|b| (a as u8, b)));
            if open {
                open_row = Some(v);
                break;
            }
        }
        if let Some(best) = &self.best {
            if self.prefix.as_slice() > &best.edges[..self.prefix.len()] {
                return;
            }
        }
        let candidates: Vec<usize> = match open_row {
            Some(v) => (0..nv)
                .filter(|&u| self.adj[v] >> u & 1 == 1 && self.label[u].is_none())
                .collect(),
            None => (0..nv).filter(|&u| self.label[u].is_none()).collect(),
        };
        for u in candidates {
            self.label[u] = Some(k as u8);
            self.order.push(u);
            self.descend();
            self.order.pop();
            self.label[u] = None;
        }
    }

    fn leaf(&mut self) {
        let mut mapped: Vec<((u8, u8), usize)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let (x, y) = (self.label[a].unwrap(), self.label[b].unwrap());
                ((x.min(y), x.max(y)), i)
            })
            .collect();
        mapped.sort_unstable();
        let edges: Vec<(u8, u8)> = mapped.iter().map(|(e, _)| *e).collect();
        let sign = if self.track_sign {
            permutation_sign(mapped.iter().map(|(_, i)| *i))
        } else {
            1
        };
        match self.best.as_mut() {
            None => {
                self.best = Some(Labeling {
                    edges,
                    sign,
                    odd_automorphism: false,
                })
            }
            Some(b) => match edges.cmp(&b.edges) {
                Ordering::Less => {
                    *b = Labeling {
                        edges,
                        sign,
                        odd_automorphism: false,
                    }
                }
                Ordering::Equal => {
                    if sign != b.sign {
                        b.odd_automorphism = true;
                    }
                }
                Ordering::Greater => {}
            },
        }
    }
}

/// Sign of the permutation listed as images `p(0), p(1), ...`.
pub fn permutation_sign(p: impl Iterator<Item = usize>) -> i8 {
    let p: Vec<usize> = p.collect();
    let mut seen = vec![false; p.len()];
    let mut sign = 1i8;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
