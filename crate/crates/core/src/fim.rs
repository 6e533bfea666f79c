//! Combinatorics of the category FI^m.
//!
//! Objects are multi-indices `n = (n_1, .., n_m)`, morphisms are tuples of
//! injections `[a_i] -> [b_i]`. Internally every set `[n]` is `0..n`; the
//! JSON formats use the 1-based labels.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input_err, Result};

/// A point of `N^m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(coords: Vec<usize>) -> Self {
        MultiIndex(coords)
    }

    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    /// `e_i`.
    pub fn unit(m: usize, i: usize) -> Self {
        let mut c = vec![0; m];
        c[i] = 1;
        MultiIndex(c)
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn plus_unit(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c[i] += 1;
        MultiIndex(c)
    }

    pub fn minus_unit(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[i] -= 1;
        Some(MultiIndex(c))
    }

    /// Componentwise `self <= other`, i.e. `FI^m(self, other)` is nonempty.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.m() == other.m() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strictly below in the preorder: `self <= other` and `self != other`.
    pub fn lt(&self, other: &MultiIndex) -> bool {
        self != other && self.le(other)
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Keeps only the listed coordinates, in the given order.
    pub fn select(&self, coords: &[usize]) -> Self {
        MultiIndex(coords.iter().map(|&c| self.0[c]).collect())
    }

    /// Order-independent of `|n|` ties: total degree first, then lexicographic.
    pub fn graded_cmp(&self, other: &MultiIndex) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }

    /// `|S_{n_1}| * .. * |S_{n_m}|`.
    pub fn automorphism_count(&self) -> usize {
        self.0.iter().map(|&n| falling(n, n)).product()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of length `m` with `|n| <= max_total`, sorted by total
/// degree and then lexicographically.
pub fn degrees_up_to(m: usize, max_total: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for total in 0..=max_total {
        out.extend(degrees_of_total(m, total));
    }
    out
}

/// All multi-indices of length `m` with `|n| == total`, lexicographic.
pub fn degrees_of_total(m: usize, total: usize) -> Vec<MultiIndex> {
    fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if cur.len() + 1 == m {
            cur.push(left);
            out.push(MultiIndex(cur.clone()));
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(m, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if total == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    rec(m, total, &mut Vec::with_capacity(m), &mut out);
    out
}

/// `n (n-1) .. (n-k+1)`, the number of injections `[k] -> [n]`.
pub fn falling(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    ((n - k + 1)..=n).product()
}

/// An injective map `[a] -> [b]`, stored by its (0-based) images.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Injection {
    target: usize,
    images: Vec<usize>,
}

impl Injection {
    pub fn new(target: usize, images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; target];
        for &x in &images {
            if x >= target || seen[x] {
                return Err(input_err!(
                    "images {images:?} do not define an injection into [{target}]"
                ));
            }
            seen[x] = true;
        }
        Ok(Injection { target, images })
    }

    pub(crate) fn new_unchecked(target: usize, images: Vec<usize>) -> Self {
        Injection { target, images }
    }

    pub fn identity(n: usize) -> Self {
        Injection { target: n, images: (0..n).collect() }
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, t: usize) -> usize {
        self.images[t]
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Injection) -> Injection {
        debug_assert_eq!(other.target, self.source());
        Injection {
            target: self.target,
            images: other.images.iter().map(|&t| self.images[t]).collect(),
        }
    }

    /// Position of this injection in the lexicographic order of
    /// `inj([a],[b])` by image list.
    pub fn lex_rank(&self) -> usize {
        let a = self.source();
        let b = self.target;
        let mut used = 0u64;
        let mut rank = 0;
        for (t, &x) in self.images.iter().enumerate() {
            let below = (x as u32 - (used & ((1u64 << x) - 1)).count_ones()) as usize;
            rank += below * falling(b - t - 1, a - t - 1);
            used |= 1 << x;
        }
        rank
    }

    /// Inverse of [`Injection::lex_rank`].
    pub fn lex_unrank(a: usize, b: usize, mut rank: usize) -> Injection {
        let mut free: Vec<usize> = (0..b).collect();
        let mut images = Vec::with_capacity(a);
        for t in 0..a {
            let block = falling(b - t - 1, a - t - 1);
            let pick = rank / block;
            rank %= block;
            images.push(free.remove(pick));
        }
        Injection { target: b, images }
    }
}

/// All injections `[a] -> [b]` in lexicographic order of image lists.
pub fn injections(a: usize, b: usize) -> Vec<Injection> {
    fn rec(a: usize, b: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Injection>) {
        if cur.len() == a {
            out.push(Injection { target: b, images: cur.clone() });
            return;
        }
        for x in 0..b {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(a, b, used, cur, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::with_capacity(falling(b, a));
    if a <= b {
        rec(a, b, &mut vec![false; b], &mut Vec::with_capacity(a), &mut out);
    }
    out
}

/// A morphism `[source] -> [target]` of FI^m.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Morphism {
    source: MultiIndex,
    target: MultiIndex,
    comps: Vec<Injection>,
}

impl Morphism {
    pub fn new(comps: Vec<Injection>) -> Self {
        let source = MultiIndex(comps.iter().map(Injection::source).collect());
        let target = MultiIndex(comps.iter().map(Injection::target).collect());
        Morphism { source, target, comps }
    }

    pub fn identity(n: &MultiIndex) -> Self {
        Morphism::new(n.coords().iter().map(|&c| Injection::identity(c)).collect())
    }

    /// The standard inclusion `n -> n + e_i`, `t -> t` in coordinate `i`.
    pub fn standard_inclusion(n: &MultiIndex, i: usize) -> Self {
        let comps = n
            .coords()
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let target = if j == i { c + 1 } else { c };
                Injection::new_unchecked(target, (0..c).collect())
            })
            .collect();
        Morphism::new(comps)
    }

    /// The shift morphism `n -> n + e_i` whose `i`-th component is `t -> t+1`.
    pub fn shift_inclusion(n: &MultiIndex, i: usize) -> Self {
        let comps = n
            .coords()
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if j == i {
                    Injection::new_unchecked(c + 1, (1..=c).collect())
                } else {
                    Injection::identity(c)
                }
            })
            .collect();
        Morphism::new(comps)
    }

    /// The adjacent transposition swapping `j` and `j+1` in coordinate `i`
    /// of `[n]`.
    pub fn transposition(n: &MultiIndex, i: usize, j: usize) -> Self {
        let mut comps: Vec<Injection> = n.coords().iter().map(|&c| Injection::identity(c)).collect();
        comps[i].images.swap(j, j + 1);
        Morphism::new(comps)
    }

    pub fn source(&self) -> &MultiIndex {
        &self.source
    }

    pub fn target(&self) -> &MultiIndex {
        &self.target
    }

    pub fn components(&self) -> &[Injection] {
        &self.comps
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.comps.iter().all(|c| c.images.iter().enumerate().all(|(t, &x)| t == x))
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Morphism) -> Morphism {
        Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(g, f)| g.after(f)).collect(),
        }
    }

    /// Lexicographic rank on the concatenated image lists inside
    /// `FI^m(source, target)`.
    pub fn lex_rank(&self) -> usize {
        let mut rank = 0;
        for c in &self.comps {
            rank = rank * falling(c.target, c.source()) + c.lex_rank();
        }
        rank
    }

    /// Inverse of [`Morphism::lex_rank`].
    pub fn lex_unrank(a: &MultiIndex, b: &MultiIndex, mut rank: usize) -> Morphism {
        let mut comps = Vec::with_capacity(a.m());
        for (&x, &y) in a.coords().iter().zip(b.coords()).rev() {
            let size = falling(y, x);
            comps.push(Injection::lex_unrank(x, y, rank % size));
            rank /= size;
        }
        comps.reverse();
        Morphism::new(comps)
    }
}

/// `|FI^m(a, b)|`.
pub fn hom_size(a: &MultiIndex, b: &MultiIndex) -> Result<u128> {
    if a.m() != b.m() {
        return Err(input_err!("hom_size: {a} and {b} have different m"));
    }
    let mut size: u128 = 1;
    for (&x, &y) in a.coords().iter().zip(b.coords()) {
        if x > y {
            return Ok(0);
        }
        for v in (y - x + 1)..=y {
            size = size
                .checked_mul(v as u128)
                .ok_or_else(|| input_err!("hom_size({a}, {b}) overflows"))?;
        }
    }
    Ok(size)
}

/// Same as [`hom_size`] for indices already known to share `m` and to fit.
pub(crate) fn hom_count(a: &MultiIndex, b: &MultiIndex) -> usize {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(&x, &y)| falling(y, x))
        .product()
}

/// `FI^m(a, b)` sorted lexicographically on concatenated image lists.
pub fn enumerate_injections(a: &MultiIndex, b: &MultiIndex) -> Result<Vec<Morphism>> {
    if a.m() != b.m() {
        return Err(input_err!("enumerate_injections: {a} and {b} have different m"));
    }
    if !a.le(b) {
        return Ok(Vec::new());
    }
    let per_coord: Vec<Vec<Injection>> = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(&x, &y)| injections(x, y))
        .collect();
    let mut out = vec![Vec::<Injection>::new()];
    for options in &per_coord {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for inj in options {
                let mut p = prefix.clone();
                p.push(inj.clone());
                next.push(p);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(Morphism::new).collect())
}

/// `g ∘ f`.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    if f.target != g.source {
        return Err(input_err!(
            "compose: target {} of f differs from source {} of g",
            f.target,
            g.source
        ));
    }
    Ok(g.after(f))
}

/// Factorization of one coordinate: `inclusions` standard inclusion steps
/// followed by the permutation `s_{word[0]} ∘ s_{word[1]} ∘ ..`, where `s_j`
/// swaps the (0-based) points `j` and `j+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateWord {
    pub inclusions: usize,
    pub word: Vec<usize>,
}

/// Canonical decomposition of a morphism into standard inclusions and
/// adjacent transpositions of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationWord {
    pub source: MultiIndex,
    pub coords: Vec<CoordinateWord>,
}

impl FactorizationWord {
    /// Rebuilds the morphism: inclusions first, then the permutation word.
    pub fn replay(&self) -> Morphism {
        let comps = self
            .source
            .coords()
            .iter()
            .zip(&self.coords)
            .map(|(&a, cw)| {
                let b = a + cw.inclusions;
                let mut images: Vec<usize> = (0..a).collect();
                for &j in cw.word.iter().rev() {
                    for x in images.iter_mut() {
                        if *x == j {
                            *x = j + 1;
                        } else if *x == j + 1 {
                            *x = j;
                        }
                    }
                }
                Injection::new_unchecked(b, images)
            })
            .collect();
        Morphism::new(comps)
    }
}

/// The permutation of `[b]` that agrees with `f` on `[a]` and sends
/// `a..b` order-preservingly onto the complement of the image.
pub fn completing_permutation(f: &Injection) -> Vec<usize> {
    let mut hit = vec![false; f.target];
    for &x in &f.images {
        hit[x] = true;
    }
    let mut sigma = f.images.clone();
    sigma.extend((0..f.target).filter(|&x| !hit[x]));
    sigma
}

/// A reduced word for a permutation in one-line notation, as a sequence
/// `w` with `sigma = s_{w[0]} ∘ s_{w[1]} ∘ ..`.
pub fn reduced_word(sigma: &[usize]) -> Vec<usize> {
    // Bubble sort `sigma ∘ s_j` down to the identity; each swap removes
    // one inversion, so the word is reduced.
    let mut cur = sigma.to_vec();
    let mut applied = Vec::new();
    let n = cur.len();
    for pass in 0..n {
        let mut swapped = false;
        for j in 0..n.saturating_sub(pass + 1) {
            if cur[j] > cur[j + 1] {
                cur.swap(j, j + 1);
                applied.push(j);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    applied.reverse();
    applied
}

pub fn canonical_factorization(f: &Morphism) -> FactorizationWord {
    let coords = f
        .comps
        .iter()
        .map(|c| CoordinateWord {
            inclusions: c.target - c.source(),
            word: reduced_word(&completing_permutation(c)),
        })
        .collect();
    FactorizationWord { source: f.source.clone(), coords }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(c: &[usize]) -> MultiIndex {
        MultiIndex::new(c.to_vec())
    }

    #[test]
    fn hom_sizes() {
        assert_eq!(hom_size(&mi(&[2]), &mi(&[4])).unwrap(), 12);
        assert_eq!(hom_size(&mi(&[1, 1]), &mi(&[2, 2])).unwrap(), 4);
        assert_eq!(hom_size(&mi(&[0, 0]), &mi(&[3, 5])).unwrap(), 1);
        assert_eq!(hom_size(&mi(&[3]), &mi(&[2])).unwrap(), 0);
        assert!(hom_size(&mi(&[1]), &mi(&[1, 1])).is_err());
    }

    #[test]
    fn enumeration_order() {
        let homs = enumerate_injections(&mi(&[1]), &mi(&[2])).unwrap();
        let images: Vec<_> = homs.iter().map(|h| h.components()[0].images().to_vec()).collect();
        assert_eq!(images, vec![vec![0], vec![1]]);

        let homs = enumerate_injections(&mi(&[1, 0]), &mi(&[1, 1])).unwrap();
        assert_eq!(homs.len(), 1);

        let homs = enumerate_injections(&mi(&[2]), &mi(&[2])).unwrap();
        assert!(homs[0].is_identity());
        assert_eq!(homs[1].components()[0].images(), &[1, 0]);

        assert!(enumerate_injections(&mi(&[3, 0]), &mi(&[2, 4])).unwrap().is_empty());
    }

    #[test]
    fn lex_rank_matches_enumeration() {
        for (a, b) in [(mi(&[2, 1]), mi(&[4, 3])), (mi(&[0, 3]), mi(&[2, 4])), (mi(&[3]), mi(&[5]))] {
            for (k, h) in enumerate_injections(&a, &b).unwrap().iter().enumerate() {
                assert_eq!(h.lex_rank(), k);
            }
        }
        for (k, inj) in injections(3, 6).iter().enumerate() {
            assert_eq!(Injection::lex_unrank(3, 6, k), *inj);
        }
    }

    #[test]
    fn composition() {
        let id = Morphism::identity(&mi(&[1]));
        let f = Morphism::new(vec![Injection::new(1, vec![0]).unwrap()]);
        assert_eq!(compose(&id, &f).unwrap(), f);
        let g = Morphism::new(vec![Injection::new(2, vec![1]).unwrap()]);
        assert_eq!(compose(&g, &f).unwrap().components()[0].images(), &[1]);
        let swap = Morphism::transposition(&mi(&[2]), 0, 0);
        assert!(compose(&swap, &swap).unwrap().is_identity());
        assert!(compose(&f, &g).is_err());
    }

    #[test]
    fn factorization_examples() {
        let f = Morphism::new(vec![Injection::new(2, vec![1]).unwrap()]);
        let w = canonical_factorization(&f);
        assert_eq!(w.coords[0], CoordinateWord { inclusions: 1, word: vec![0] });
        assert_eq!(w.replay(), f);

        let swap = Morphism::transposition(&mi(&[2]), 0, 0);
        let w = canonical_factorization(&swap);
        assert_eq!(w.coords[0], CoordinateWord { inclusions: 0, word: vec![0] });

        let id = Morphism::identity(&mi(&[3, 2]));
        let w = canonical_factorization(&id);
        assert!(w.coords.iter().all(|c| c.word.is_empty() && c.inclusions == 0));
    }

    #[test]
    fn factorization_replays_every_hom_set() {
        for a in degrees_up_to(2, 3) {
            for b in degrees_up_to(2, 5) {
                for f in enumerate_injections(&a, &b).unwrap() {
                    assert_eq!(canonical_factorization(&f).replay(), f);
                }
            }
        }
    }

    #[test]
    fn shift_inclusion_is_a_cycle_word() {
        let n = mi(&[3]);
        let w = canonical_factorization(&Morphism::shift_inclusion(&n, 0));
        assert_eq!(w.coords[0].inclusions, 1);
        assert_eq!(w.coords[0].word, vec![0, 1, 2]);
    }

    #[test]
    fn degree_listing() {
        let all = degrees_up_to(2, 2);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], mi(&[0, 0]));
        assert!(all.windows(2).all(|w| w[0].graded_cmp(&w[1]) == Ordering::Less));
        assert_eq!(degrees_of_total(3, 2).len(), 6);
    }
}
