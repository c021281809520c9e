//! Reduced words for the symmetric group generated by adjacent transpositions.

use rand::Rng;
use std::collections::HashMap;

/// Breadth-first tree of `S_n`: each node is a permutation reached from its
/// parent by left multiplication with one generator `τ_k` (0-based `k`), so the
/// path from the root spells a reduced word.
#[derive(Debug, Clone)]
pub struct PermTree {
    pub n: usize,
    /// One-line notation of each element.
    pub perms: Vec<Vec<usize>>,
    pub parent: Vec<usize>,
    /// Generator applied on the edge into each node (unused for the root).
    pub generator: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

/// `τ_k ∘ π` in one-line notation: exchange the values `k` and `k+1`.
fn left_mul(k: usize, p: &[usize]) -> Vec<usize> {
    p.iter()
        .map(|&v| {
            if v == k {
                k + 1
            } else if v == k + 1 {
                k
            } else {
                v
            }
        })
        .collect()
}

impl PermTree {
    pub fn new(n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        let mut tree = PermTree {
            n,
            perms: vec![id.clone()],
            parent: vec![0],
            generator: vec![usize::MAX],
            children: vec![Vec::new()],
            index: HashMap::from([(id, 0)]),
        };
        let mut head = 0;
        while head < tree.perms.len() {
            for k in 0..n.saturating_sub(1) {
                let q = left_mul(k, &tree.perms[head]);
                if tree.index.contains_key(&q) {
                    continue;
                }
                let id = tree.perms.len();
                tree.index.insert(q.clone(), id);
                tree.perms.push(q);
                tree.parent.push(head);
                tree.generator.push(k);
                tree.children.push(Vec::new());
                tree.children[head].push(id);
            }
            head += 1;
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn find(&self, perm: &[usize]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    /// Reduced word of a node, first-applied generator first.
    pub fn word(&self, mut node: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while node != 0 {
            w.push(self.generator[node]);
            node = self.parent[node];
        }
        w.reverse();
        w
    }
}

/// Permutation represented by a word (first letter applied first).
pub fn word_permutation(n: usize, word: &[usize]) -> Vec<usize> {
    word.iter().fold((0..n).collect(), |p, &k| left_mul(k, &p))
}

/// A different word for the same permutation, produced by `moves` random
/// Coxeter moves: far commutation, braid moves and insertion/removal of `τ_kτ_k`.
pub fn coxeter_equivalent_word<R: Rng>(
    n: usize,
    word: &[usize],
    moves: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut w = word.to_vec();
    if n < 2 {
        return w;
    }
    for _ in 0..moves {
        match rng.gen_range(0..4) {
            0 if w.len() >= 2 => {
                let i = rng.gen_range(0..w.len() - 1);
                if w[i].abs_diff(w[i + 1]) >= 2 {
                    w.swap(i, i + 1);
                }
            }
            1 if w.len() >= 3 => {
                let i = rng.gen_range(0..w.len() - 2);
                let (a, b) = (w[i], w[i + 1]);
                if w[i + 2] == a && a.abs_diff(b) == 1 {
                    w[i] = b;
                    w[i + 1] = a;
                    w[i + 2] = b;
                }
            }
            2 => {
                let i = rng.gen_range(0..=w.len());
                let k = rng.gen_range(0..n - 1);
                w.insert(i, k);
                w.insert(i, k);
            }
            _ if w.len() >= 2 => {
                let i = rng.gen_range(0..w.len() - 1);
                if w[i] == w[i + 1] {
                    w.drain(i..i + 2);
                }
            }
            _ => {}
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn tree_sizes_and_reduced_words() {
        for n in 0..=5 {
            let t = PermTree::new(n);
            assert_eq!(t.len(), crate::linalg::factorial(n));
            for node in 0..t.len() {
                let w = t.word(node);
                assert_eq!(word_permutation(n, &w), t.perms[node]);
                // reduced length equals the inversion count
                let p = &t.perms[node];
                let inv = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                assert_eq!(w.len(), inv);
            }
        }
    }

    #[test]
    fn coxeter_moves_preserve_permutation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let w = vec![0, 1, 2, 0, 1, 0];
        for _ in 0..50 {
            let v = coxeter_equivalent_word(4, &w, 30, &mut rng);
            assert_eq!(word_permutation(4, &v), word_permutation(4, &w));
        }
    }
}
