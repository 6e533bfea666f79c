use std::collections::HashMap;

use rayon::prelude::*;

use super::table::HomologyTable;
use crate::error::Result;
use crate::fim::{Injection, Morphism, MultiIndex};
use crate::linalg::{Field, Matrix};
use crate::module::TruncatedModule;

/// Subsets `T_j` of each `[n_j]` with prescribed total size, as sorted lists.
fn subset_tuples(n: &MultiIndex, q: usize) -> Vec<Vec<Vec<usize>>> {
    fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            for x in start..k {
                cur.push(x);
                rec(x + 1, k, size, cur, out);
                cur.pop();
            }
        }
        rec(0, k, size, &mut cur, &mut out);
        out
    }
    let mut out = vec![Vec::new()];
    let m = n.m();
    for j in 0..m {
        let mut next = Vec::new();
        for prefix in &out {
            let used: usize = prefix.iter().map(|t: &Vec<usize>| t.len()).sum();
            let sizes: Vec<usize> = if j + 1 == m {
                vec![q - used].into_iter().filter(|&s| s <= n.get(j)).collect()
            } else {
                (0..=n.get(j).min(q - used)).collect()
            };
            for s in sizes {
                for t in subsets(n.get(j), s) {
                    let mut p = prefix.clone();
                    p.push(t);
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

/// Homology through the Koszul complex
/// `C_q(n) = ⊕_{T ⊆ [n], |T| = q} V_{[n] \ T}`, whose differential deletes
/// one point of `T` with alternating signs. This is an independent route to
/// the same groups `H_q(V)_n`, far cheaper than a resolution on large
/// windows.
pub fn koszul_table<F: Field>(v: &TruncatedModule<F>, max_i: usize) -> Result<HomologyTable> {
    let f = v.field();
    let window = v.window();
    let degrees = window.degrees().to_vec();
    let per_degree: Vec<Vec<usize>> = degrees
        .par_iter()
        .map(|n| {
            let mut cache: HashMap<Morphism, Matrix<F>> = HashMap::new();
            let mut chain_dims = Vec::new();
            let mut ranks = vec![0usize];
            let mut blocks_prev: Option<Vec<Vec<Vec<usize>>>> = None;
            for q in 0..=max_i + 1 {
                let blocks = subset_tuples(n, q);
                let block_dim = |t: &Vec<Vec<usize>>| {
                    let sizes: Vec<usize> = t.iter().map(Vec::len).collect();
                    v.dim(&n.checked_sub(&MultiIndex::new(sizes)).unwrap())
                };
                let offsets: Vec<usize> = blocks
                    .iter()
                    .scan(0, |acc, t| {
                        let o = *acc;
                        *acc += block_dim(t);
                        Some(o)
                    })
                    .collect();
                let dim: usize = blocks.iter().map(block_dim).sum();
                chain_dims.push(dim);
                if let Some(prev) = &blocks_prev {
                    let prev_index: HashMap<&Vec<Vec<usize>>, usize> =
                        prev.iter().enumerate().map(|(k, t)| (t, k)).collect();
                    let prev_offsets: Vec<usize> = prev
                        .iter()
                        .scan(0, |acc, t| {
                            let o = *acc;
                            *acc += block_dim(t);
                            Some(o)
                        })
                        .collect();
                    let rows = chain_dims[q - 1];
                    let mut d = Matrix::zeros(f, rows, dim);
                    for (b, t) in blocks.iter().enumerate() {
                        let src = n.checked_sub(&MultiIndex::new(t.iter().map(Vec::len).collect())).unwrap();
                        let mut position = 0usize;
                        for j in 0..n.m() {
                            for (k, &x) in t[j].iter().enumerate() {
                                let mut smaller = t.clone();
                                smaller[j].remove(k);
                                let tgt_block = prev_index[&smaller];
                                let hole = x - k;
                                let comps = (0..n.m())
                                    .map(|c| {
                                        let a = src.get(c);
                                        if c == j {
                                            Injection::new(a + 1, (0..=a).filter(|&y| y != hole).collect())
                                                .unwrap()
                                        } else {
                                            Injection::identity(a)
                                        }
                                    })
                                    .collect();
                                let phi = Morphism::new(comps);
                                if !cache.contains_key(&phi) {
                                    let mat = v.act(&phi)?;
                                    cache.insert(phi.clone(), mat);
                                }
                                let mat = &cache[&phi];
                                let sign_neg = position % 2 == 1;
                                for r in 0..mat.rows() {
                                    for c in 0..mat.cols() {
                                        let e = mat.get(r, c);
                                        if !f.is_zero(e) {
                                            let val = if sign_neg { f.neg(e) } else { e.clone() };
                                            d.set(prev_offsets[tgt_block] + r, offsets[b] + c, val);
                                        }
                                    }
                                }
                                position += 1;
                            }
                        }
                    }
                    ranks.push(d.rank());
                }
                blocks_prev = Some(blocks);
            }
            Ok((0..=max_i).map(|q| chain_dims[q] - ranks[q] - ranks[q + 1]).collect())
        })
        .collect::<Result<_>>()?;
    let dims = (0..=max_i).map(|i| per_degree.iter().map(|row| row[i]).collect()).collect();
    HomologyTable::new(window.m(), window.top(), dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology_table;
    use crate::linalg::PrimeField;
    use crate::module::{free_module, from_presentation, random_presentation, Window};

    #[test]
    fn tuple_counts() {
        let n = MultiIndex::new(vec![2, 3]);
        assert_eq!(subset_tuples(&n, 0).len(), 1);
        assert_eq!(subset_tuples(&n, 2).len(), 10);
        assert_eq!(subset_tuples(&n, 5).len(), 1);
        assert!(subset_tuples(&n, 6).is_empty());
    }

    #[test]
    fn free_module_is_acyclic() {
        let f = PrimeField::new(101).unwrap();
        let w = MultiIndex::new(vec![1, 1]);
        let v = free_module(&f, &w, Window::new(2, 5)).unwrap();
        let table = koszul_table(&v, 3).unwrap();
        for i in 1..=3 {
            assert!(table.row(i).iter().all(|&d| d == 0));
        }
        assert_eq!(table.get(0, &w), 1);
    }

    #[test]
    fn agrees_with_resolution() {
        for p in [2, 101] {
            let f = PrimeField::new(p).unwrap();
            for seed in 0..6 {
                let m = 1 + (seed as usize % 2);
                let pres = random_presentation(&f, m, 1, 2, 2, 2, seed).unwrap();
                let (v, _) = from_presentation(&pres, Window::new(m, 4), &f).unwrap();
                assert_eq!(koszul_table(&v, 2).unwrap(), homology_table(&v, 2).unwrap(), "p {p} seed {seed}");
            }
        }
    }
}
