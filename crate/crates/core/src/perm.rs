//! Permutations, Koszul signs, unshuffles and set partitions.
//!
//! Permutations are 0-based: `sigma[k]` is the original position placed at
//! position `k`. The Koszul sign `koszul_sign(sigma, deg)` is the sign with
//! `v_0 ⊙ … ⊙ v_{n-1} = ε · v_{σ(0)} ⊙ … ⊙ v_{σ(n-1)}`.

use crate::error::{bail, Result};
use crate::space::GradedSpace;

fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

/// Sign as `±1`.
pub fn koszul_sign(sigma: &[usize], degrees: &[i64]) -> Result<i8> {
    if sigma.len() != degrees.len() {
        bail!(Argument, "permutation of length {} with {} degrees", sigma.len(), degrees.len());
    }
    let mut seen = vec![false; sigma.len()];
    for &s in sigma {
        if s >= sigma.len() || seen[s] {
            bail!(Argument, "{sigma:?} is not a permutation");
        }
        seen[s] = true;
    }
    Ok(koszul_sign_unchecked(sigma, degrees))
}

pub(crate) fn koszul_sign_unchecked(sigma: &[usize], degrees: &[i64]) -> i8 {
    let mut s = 1i8;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] && odd(degrees[sigma[a]]) && odd(degrees[sigma[b]]) {
                s = -s;
            }
        }
    }
    s
}

/// Ordinary sign of a permutation.
pub fn parity_sign(sigma: &[usize]) -> i8 {
    let mut s = 1i8;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] {
                s = -s;
            }
        }
    }
    s
}

/// `(p, q)`-unshuffles in lexicographic order: the first `p` entries and the
/// last `q` entries are both increasing.
pub fn unshuffles(p: usize, q: usize) -> Vec<Vec<usize>> {
    let n = p + q;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(p);
    combos(n, p, 0, &mut chosen, &mut |c| {
        let mut sigma = c.to_vec();
        sigma.extend((0..n).filter(|i| !c.contains(i)));
        out.push(sigma);
    });
    out
}

fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        combos(n, k, i + 1, cur, f);
        cur.pop();
    }
}

/// A split of positions `0..n` into a front block and a back block, both in
/// increasing order, together with the Koszul sign of bringing the front
/// block to the front.
#[derive(Debug, Clone)]
pub struct Split {
    pub front: Vec<usize>,
    pub back: Vec<usize>,
    pub sign: i8,
}

/// All `(i, n-i)`-unshuffle splits of a tuple with the given degrees.
pub fn splits(degrees: &[i64], i: usize) -> Vec<Split> {
    let n = degrees.len();
    unshuffles(i, n - i)
        .into_iter()
        .map(|sigma| Split {
            sign: koszul_sign_unchecked(&sigma, degrees),
            front: sigma[..i].to_vec(),
            back: sigma[i..].to_vec(),
        })
        .collect()
}

/// Sorts a tuple of generators into canonical (non-decreasing) order and
/// returns the Koszul sign relating the two, or `None` when an odd
/// generator repeats (the symmetric monomial is then zero).
pub fn canonical_sym(space: &GradedSpace, gens: &[usize]) -> Option<(i8, Vec<usize>)> {
    let mut v = gens.to_vec();
    let mut s = 1i8;
    // insertion sort, tracking odd-odd transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if space.is_odd(v[j - 1]) && space.is_odd(v[j]) {
                s = -s;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && space.is_odd(w[0]) {
            return None;
        }
    }
    Some((s, v))
}

/// Like [`canonical_sym`] for the exterior convention: each transposition
/// contributes an extra `-1`, and repeated even generators vanish.
pub fn canonical_alt(space: &GradedSpace, gens: &[usize]) -> Option<(i8, Vec<usize>)> {
    let mut v = gens.to_vec();
    let mut s = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if !(space.is_odd(v[j - 1]) && space.is_odd(v[j])) {
                s = -s;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && !space.is_odd(w[0]) {
            return None;
        }
    }
    Some((s, v))
}

/// Unordered set partitions of `0..n` into exactly `k` nonempty blocks.
/// Blocks are increasing and ordered by their smallest element.
pub fn set_partitions(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    part_rec(0, n, k, &mut blocks, &mut out);
    out
}

fn part_rec(i: usize, n: usize, k: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if i == n {
        if blocks.len() == k {
            out.push(blocks.clone());
        }
        return;
    }
    if blocks.len() + (n - i) < k {
        return;
    }
    for b in 0..blocks.len() {
        blocks[b].push(i);
        part_rec(i + 1, n, k, blocks, out);
        blocks[b].pop();
    }
    if blocks.len() < k {
        blocks.push(vec![i]);
        part_rec(i + 1, n, k, blocks, out);
        blocks.pop();
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
