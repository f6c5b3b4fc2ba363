//! Shuffles of two ordered sets and their signs.

use serde::Serialize;

/// An `(m, n)`-shuffle: a partition of `{0, .., m+n-1}` into an increasing
/// `first` of length `m` and an increasing `second` of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Shuffle {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Shuffle {
    /// Sign of the permutation listing `first` then `second`.
    pub fn sign(&self) -> i64 {
        let inversions: usize = self
            .first
            .iter()
            .map(|a| self.second.iter().filter(|b| *b < a).count())
            .sum();
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn len(&self) -> usize {
        self.first.len() + self.second.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Splits at `cut`: positions below `cut` give a `(p_a, p_b)`-shuffle,
    /// the rest, shifted down by `cut`, a `(q_a, q_b)`-shuffle.
    pub fn split(&self, cut: usize) -> (Shuffle, Shuffle) {
        let low = |v: &[usize]| v.iter().copied().filter(|&x| x < cut).collect::<Vec<_>>();
        let high = |v: &[usize]| v.iter().filter(|&&x| x >= cut).map(|x| x - cut).collect::<Vec<_>>();
        (
            Shuffle {
                first: low(&self.first),
                second: low(&self.second),
            },
            Shuffle {
                first: high(&self.first),
                second: high(&self.second),
            },
        )
    }

    /// Inverse of [`Shuffle::split`].
    pub fn join(low: &Shuffle, high: &Shuffle) -> Shuffle {
        let cut = low.len();
        let cat = |a: &[usize], b: &[usize]| a.iter().copied().chain(b.iter().map(|x| x + cut)).collect();
        Shuffle {
            first: cat(&low.first, &high.first),
            second: cat(&low.second, &high.second),
        }
    }
}

/// All `(m, n)`-shuffles in lexicographic order of `first`.
#[derive(Clone, Debug, Serialize)]
pub struct ShuffleTable {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<(Shuffle, i64)>,
}

pub fn shuffles_with_signs(m: usize, n: usize) -> ShuffleTable {
    let mut entries = Vec::new();
    let mut first = Vec::with_capacity(m);
    choose(m + n, m, 0, &mut first, &mut |first| {
        let second = (0..m + n).filter(|x| !first.contains(x)).collect();
        let s = Shuffle {
            first: first.to_vec(),
            second,
        };
        let sign = s.sign();
        entries.push((s, sign));
    });
    ShuffleTable { m, n, entries }
}

fn choose(total: usize, k: usize, start: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for x in start..total {
        if total - x < k - acc.len() {
            break;
        }
        acc.push(x);
        choose(total, k, x + 1, acc, f);
        acc.pop();
    }
}

/// Outcome of checking the decomposition of shuffles at a cut.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionCheck {
    pub m: usize,
    pub n: usize,
    pub cuts: usize,
    pub shuffles: usize,
    /// Shuffles whose sign differs from the product formula.
    pub sign_failures: usize,
    /// Cuts at which splitting is not a bijection onto the product tables.
    pub bijection_failures: usize,
}

impl DecompositionCheck {
    pub fn passed(&self) -> bool {
        self.sign_failures == 0 && self.bijection_failures == 0
    }
}

/// For every cut `0 <= P <= m+n`, splitting identifies the `(m, n)`-shuffles
/// with the disjoint union over `p_a + p_b = P` of products of
/// `(p_a, p_b)`- and `(m-p_a, n-p_b)`-shuffles, and the sign of a shuffle is
/// the product of the signs of its halves times `(-1)^(q_a p_b)`.
pub fn check_decomposition(m: usize, n: usize) -> DecompositionCheck {
    let table = shuffles_with_signs(m, n);
    let mut out = DecompositionCheck {
        m,
        n,
        cuts: m + n + 1,
        shuffles: table.entries.len(),
        sign_failures: 0,
        bijection_failures: 0,
    };
    for cut in 0..=m + n {
        let mut images = std::collections::BTreeSet::new();
        for (s, sign) in &table.entries {
            let (low, high) = s.split(cut);
            let (pb, qa) = (low.second.len(), high.first.len());
            let koszul = if (qa * pb) % 2 == 0 { 1 } else { -1 };
            if low.sign() * high.sign() * koszul != *sign {
                out.sign_failures += 1;
            }
            if Shuffle::join(&low, &high) != *s {
                out.bijection_failures += 1;
            }
            images.insert((low, high));
        }
        let expected: usize = (0..=cut.min(m))
            .filter(|pa| cut - pa <= n)
            .map(|pa| {
                let pb = cut - pa;
                shuffles_with_signs(pa, pb).entries.len() * shuffles_with_signs(m - pa, n - pb).entries.len()
            })
            .sum();
        if images.len() != table.entries.len() || expected != table.entries.len() {
            out.bijection_failures += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn small_tables() {
        let t = shuffles_with_signs(1, 1);
        assert_eq!(t.entries.iter().map(|e| e.1).collect::<Vec<_>>(), vec![1, -1]);
        assert_eq!(shuffles_with_signs(2, 1).entries.len(), 3);
        assert_eq!(shuffles_with_signs(0, 0).entries.len(), 1);
    }

    #[test]
    fn tables_are_complete_and_order_preserving() {
        for m in 0..=4 {
            for n in 0..=4 {
                let t = shuffles_with_signs(m, n);
                assert_eq!(t.entries.len(), binomial(m + n, m));
                for (s, _) in &t.entries {
                    assert!(s.first.windows(2).all(|w| w[0] < w[1]));
                    assert!(s.second.windows(2).all(|w| w[0] < w[1]));
                    assert_eq!(s.len(), m + n);
                }
            }
        }
    }

    #[test]
    fn decomposition_is_exact_up_to_three() {
        for m in 0..=3 {
            for n in 0..=3 {
                let c = check_decomposition(m, n);
                assert!(c.passed(), "{c:?}");
            }
        }
    }
}
