use std::collections::HashMap;

use super::table::HomologyTable;
use crate::error::{Error, Result};
use crate::fim::{compose, enumerate_injections, Morphism};
use crate::linalg::{Field, Matrix, Subspace};
use crate::module::TruncatedModule;

/// Size limits for [`tor_oracle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest number of morphisms in the truncated category.
    pub max_morphisms: usize,
    /// Largest dense matrix, in entries.
    pub max_entries: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_morphisms: 200_000, max_entries: 20_000_000 }
    }
}

/// The truncated category: every morphism between window degrees, indexed.
struct Category {
    /// `homs[x][y]`: morphisms from degree slot `x` to slot `y` in
    /// enumeration order, with a reverse index.
    homs: Vec<Vec<(Vec<Morphism>, HashMap<Morphism, usize>)>>,
}

impl Category {
    fn hom(&self, x: usize, y: usize) -> &[Morphism] {
        &self.homs[x][y].0
    }

    fn index(&self, x: usize, y: usize, f: &Morphism) -> usize {
        self.homs[x][y].1[f]
    }
}

/// A tautological free module: one generator per chosen vector, at its degree.
struct Level<E> {
    /// `(degree slot, image)` with the image sparse in the previous space.
    gens: Vec<(usize, Vec<(usize, E)>)>,
    /// `offsets[n][g]` for generators below `n`, `None` otherwise.
    offsets: Vec<Vec<Option<usize>>>,
    dims: Vec<usize>,
}

impl<E> Level<E> {
    fn new(gens: Vec<(usize, Vec<(usize, E)>)>, cat: &Category, slots: usize) -> Self {
        let mut offsets = Vec::with_capacity(slots);
        let mut dims = Vec::with_capacity(slots);
        for n in 0..slots {
            let mut acc = 0;
            let row = gens
                .iter()
                .map(|(x, _)| {
                    let size = cat.hom(*x, n).len();
                    (size > 0).then(|| {
                        let o = acc;
                        acc += size;
                        o
                    })
                })
                .collect();
            offsets.push(row);
            dims.push(acc);
        }
        Level { gens, offsets, dims }
    }

    /// Basis elements `(g, hom index)` at degree slot `n`.
    fn basis(&self, cat: &Category, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.dims[n]);
        for (g, (x, _)) in self.gens.iter().enumerate() {
            out.extend((0..cat.hom(*x, n).len()).map(|h| (g, h)));
        }
        out
    }
}

/// For each slot `n`, the candidate vectors at `n` that are independent of
/// `push(x, n, h, u)` over every lower slot `x`, morphism index `h` and
/// candidate `u` at `x`, returned sparse as `(slot, image)` generators.
fn new_generators<F: Field>(
    f: &F,
    cat: &Category,
    candidates: &[Vec<Vec<F::Elem>>],
    mut push: impl FnMut(usize, usize, usize, &[F::Elem]) -> Result<Vec<F::Elem>>,
) -> Result<Vec<(usize, Vec<(usize, F::Elem)>)>> {
    let mut out = Vec::new();
    for n in 0..candidates.len() {
        let Some(first) = candidates[n].first() else { continue };
        let mut span = Subspace::zero(f, first.len());
        'lower: for x in (0..candidates.len()).filter(|&x| x != n) {
            for h in 0..cat.hom(x, n).len() {
                for u in &candidates[x] {
                    span.insert(push(x, n, h, u)?);
                    if span.dim() == candidates[n].len() {
                        break 'lower;
                    }
                }
            }
        }
        for u in &candidates[n] {
            if span.insert(u.clone()) {
                let terms = u.iter().enumerate().filter(|(_, e)| !f.is_zero(e)).map(|(k, e)| (k, e.clone())).collect();
                out.push((n, terms));
            }
        }
    }
    Ok(out)
}

/// Homology over the truncated category algebra from a non-economical
/// resolution. `P_0` has a generator for every vector of a basis of `V_n`
/// modulo the images of all lower `V_x` under every morphism `x -> n`, and
/// `P_{i+1}` likewise for `ker(P_i -> P_{i-1})`. Automorphisms are not used
/// to thin the generators out. `H_i(V)_n` is then read off the complex
/// `H_0(P_*)_n`, built as explicit matrices on the generators in degree
/// exactly `n`.
pub fn tor_oracle<F: Field>(v: &TruncatedModule<F>, max_i: usize, budget: OracleBudget) -> Result<HomologyTable> {
    let f = v.field();
    let window = v.window();
    let degrees = window.degrees();
    let slots = degrees.len();

    let mut morphisms = 0usize;
    let mut homs = Vec::with_capacity(slots);
    for x in degrees {
        let mut row = Vec::with_capacity(slots);
        for y in degrees {
            let list = enumerate_injections(x, y)?;
            morphisms += list.len();
            if morphisms > budget.max_morphisms {
                return Err(Error::Budget(format!(
                    "truncated category has more than {} morphisms",
                    budget.max_morphisms
                )));
            }
            let index = list.iter().cloned().enumerate().map(|(k, g)| (g, k)).collect();
            row.push((list, index));
        }
        homs.push(row);
    }
    let cat = Category { homs };
    let check = |rows: usize, cols: usize| -> Result<()> {
        if rows.saturating_mul(cols) > budget.max_entries {
            return Err(Error::Budget(format!(
                "oracle matrix {rows}x{cols} exceeds {} entries",
                budget.max_entries
            )));
        }
        Ok(())
    };

    // d_i at slot n as a dense matrix, columns h_*(d g).
    let mut act_cache: HashMap<Morphism, Matrix<F>> = HashMap::new();
    let mut levels: Vec<Level<F::Elem>> = Vec::new();
    let mut kernels: Vec<Vec<Vec<Vec<F::Elem>>>> = Vec::new();
    for i in 0..=max_i + 1 {
        let gens = if i == 0 {
            let candidates: Vec<Vec<Vec<F::Elem>>> = degrees
                .iter()
                .map(|x| {
                    let d = v.dim(x);
                    (0..d).map(|b| (0..d).map(|c| if b == c { f.one() } else { f.zero() }).collect()).collect()
                })
                .collect();
            new_generators(f, &cat, &candidates, |x, n, h, u| {
                let hm = &cat.hom(x, n)[h];
                if !act_cache.contains_key(hm) {
                    act_cache.insert(hm.clone(), v.act(hm)?);
                }
                Ok(act_cache[hm].mul_vec(u))
            })?
        } else {
            let prev = &levels[i - 1];
            let bases: Vec<Vec<(usize, usize)>> = (0..slots).map(|x| prev.basis(&cat, x)).collect();
            new_generators(f, &cat, &kernels[i - 1], |x, n, h, u| {
                let hm = &cat.hom(x, n)[h];
                let mut out = vec![f.zero(); prev.dims[n]];
                for (k, coeff) in u.iter().enumerate().filter(|(_, e)| !f.is_zero(e)) {
                    let (g2, h2) = bases[x][k];
                    let x2 = prev.gens[g2].0;
                    let composite = compose(hm, &cat.hom(x2, x)[h2])?;
                    let r = prev.offsets[n][g2].unwrap() + cat.index(x2, n, &composite);
                    out[r] = f.add(&out[r], coeff);
                }
                Ok(out)
            })?
        };
        let level = Level::new(gens, &cat, slots);
        if i == max_i + 1 {
            levels.push(level);
            break;
        }
        let prev_bases: Vec<Vec<(usize, usize)>> =
            if i == 0 { Vec::new() } else { (0..slots).map(|x| levels[i - 1].basis(&cat, x)).collect() };
        let mut ks = Vec::with_capacity(slots);
        for n in 0..slots {
            let rows = if i == 0 { v.dim(&degrees[n]) } else { levels[i - 1].dims[n] };
            let cols = level.dims[n];
            check(rows, cols)?;
            let mut d = Matrix::zeros(f, rows, cols);
            for (c, (g, h)) in level.basis(&cat, n).into_iter().enumerate() {
                let (x, image) = &level.gens[g];
                let hm = &cat.hom(*x, n)[h];
                if i == 0 {
                    if !act_cache.contains_key(hm) {
                        act_cache.insert(hm.clone(), v.act(hm)?);
                    }
                    let a = &act_cache[hm];
                    for (b, coeff) in image {
                        for r in 0..rows {
                            let val = f.mul(a.get(r, *b), coeff);
                            let cur = d.get(r, c).clone();
                            d.set(r, c, f.add(&cur, &val));
                        }
                    }
                } else {
                    let prev = &levels[i - 1];
                    for (k, coeff) in image {
                        let (g2, h2) = prev_bases[*x][*k];
                        let x2 = prev.gens[g2].0;
                        let composite = compose(hm, &cat.hom(x2, *x)[h2])?;
                        let r = prev.offsets[n][g2].unwrap() + cat.index(x2, n, &composite);
                        let cur = d.get(r, c).clone();
                        d.set(r, c, f.add(&cur, coeff));
                    }
                }
            }
            ks.push(d.rref().kernel_basis());
        }
        levels.push(level);
        kernels.push(ks);
    }

    // Induced differentials on H_0: d̄_i at n maps generators in degree n of
    // P_i, times automorphisms, to those of P_{i-1}.
    let mut dims = vec![vec![0usize; slots]; max_i + 1];
    for n in 0..slots {
        let auts = cat.hom(n, n);
        let top_gens = |lvl: &Level<F::Elem>| -> Vec<usize> {
            (0..lvl.gens.len()).filter(|&g| lvl.gens[g].0 == n).collect()
        };
        let mut ranks = vec![0usize; max_i + 2];
        for i in 1..=max_i + 1 {
            let lower = &levels[i - 1];
            let lower_top = top_gens(lower);
            let upper_images: Vec<&Vec<(usize, F::Elem)>> =
                top_gens(&levels[i]).into_iter().map(|g| &levels[i].gens[g].1).collect();
            let rows = lower_top.len() * auts.len();
            let cols = upper_images.len() * auts.len();
            check(rows, cols)?;
            let row_of: HashMap<(usize, usize), usize> = lower_top
                .iter()
                .enumerate()
                .flat_map(|(a, &g)| (0..auts.len()).map(move |s| ((g, s), a * auts.len() + s)))
                .collect();
            let basis_n = lower.basis(&cat, n);
            let mut d = Matrix::zeros(f, rows, cols);
            for (b, image) in upper_images.iter().enumerate() {
                for (s, sigma) in auts.iter().enumerate() {
                    let c = b * auts.len() + s;
                    for (k, coeff) in image.iter() {
                        let (g2, h2) = basis_n[*k];
                        if lower.gens[g2].0 != n {
                            continue;
                        }
                        let composite = compose(sigma, &auts[h2])?;
                        let r = row_of[&(g2, cat.index(n, n, &composite))];
                        let cur = d.get(r, c).clone();
                        d.set(r, c, f.add(&cur, coeff));
                    }
                }
            }
            ranks[i] = d.rank();
        }
        for i in 0..=max_i {
            let top = top_gens(&levels[i]).len() * auts.len();
            dims[i][n] = top - ranks[i] - ranks[i + 1];
        }
    }
    HomologyTable::new(window.m(), window.top(), dims)
}
