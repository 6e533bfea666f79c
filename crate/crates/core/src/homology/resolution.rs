use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{internal_err, Result};
use crate::fim::{degrees_of_total, Morphism, MultiIndex};
use crate::linalg::{extend_closure, Field, Matrix, Subspace};
use crate::module::{FreeElement, FreeModule, TruncatedModule, Window};

/// How new generators are chosen from a kernel not yet covered by the
/// image of lower generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftStrategy {
    /// Kernel basis vectors in order, skipping those already covered.
    PivotGreedy,
    /// Seeded random combinations of kernel basis vectors.
    Random { seed: u64 },
}

/// One free module `P_i` of a resolution with its differential.
#[derive(Clone, Debug)]
pub struct ResolutionLevel<F: Field> {
    pub layout: FreeModule,
    /// `d(g)` for each generator: an element of `V` (level 0) or of
    /// `P_{i-1}` at the generator's degree, sparse in the standard basis.
    pub images: Vec<FreeElement<F>>,
    /// `ker d_i` at every degree of the window, in `(P_i)_n` coordinates.
    pub kernels: Vec<Subspace<F>>,
}

/// A free resolution `.. -> P_1 -> P_0 -> V -> 0`, exact on the window.
#[derive(Clone, Debug)]
pub struct ResolutionData<F: Field> {
    pub field: F,
    pub window: Arc<Window>,
    pub levels: Vec<ResolutionLevel<F>>,
}

impl<F: Field> ResolutionData<F> {
    /// Generator degrees of `P_i`.
    pub fn generator_degrees(&self, i: usize) -> &[MultiIndex] {
        self.levels[i].layout.generators()
    }

    /// Number of generators of `P_i` in degree exactly `n`.
    pub fn generators_at(&self, i: usize, n: &MultiIndex) -> usize {
        self.generator_degrees(i).iter().filter(|w| *w == n).count()
    }

    /// Matrix of `d_i` at `n`: `(P_i)_n -> (P_{i-1})_n`, or `-> V_n` for `i = 0`.
    pub fn differential(&self, v: &TruncatedModule<F>, i: usize, n: &MultiIndex) -> Result<Matrix<F>> {
        let lvl = &self.levels[i];
        let rows = if i == 0 { v.dim(n) } else { self.levels[i - 1].layout.dim(n) };
        differential_matrix(&self.field, v, self.levels.get(i.wrapping_sub(1)), lvl, n, rows)
    }

    /// `rank` of the top-coordinate projection of `ker d_i` at `n`: the rank of
    /// the induced map `H_0(P_{i+1})_n -> H_0(P_i)_n`.
    pub fn top_rank(&self, i: usize, n: &MultiIndex) -> usize {
        let lvl = &self.levels[i];
        let top = lvl.layout.top_coordinates(n);
        if top.is_empty() {
            return 0;
        }
        let k = self.window.index_of(n).unwrap();
        let basis = lvl.kernels[k].basis();
        let rows: Vec<Vec<F::Elem>> = basis.iter().map(|b| top.iter().map(|&c| b[c].clone()).collect()).collect();
        Matrix::from_rows(&self.field, top.len(), rows).unwrap().rank()
    }

    /// Dimension of `H_0(P_i)_n`.
    pub fn top_dim(&self, i: usize, n: &MultiIndex) -> usize {
        self.generators_at(i, n) * n.automorphism_count()
    }

    /// Checks `d_{i-1} d_i = 0` and `rank d_i = dim ker d_{i-1}` with
    /// freshly assembled matrices, returning the failing `(i, n)`.
    pub fn certify(&self, v: &TruncatedModule<F>) -> Result<Vec<(usize, MultiIndex)>> {
        let mut bad = Vec::new();
        for n in self.window.degrees() {
            let k = self.window.index_of(n).unwrap();
            let mut prev: Option<Matrix<F>> = None;
            for i in 0..self.levels.len() {
                let d = self.differential(v, i, n)?;
                let expected = match &prev {
                    None => v.dim(n),
                    Some(_) => self.levels[i - 1].kernels[k].dim(),
                };
                let composite_zero = prev.as_ref().is_none_or(|p| p.mul(&d).unwrap().is_zero());
                if !composite_zero || d.rank() != expected {
                    bad.push((i, n.clone()));
                }
                prev = Some(d);
            }
        }
        Ok(bad)
    }
}

fn push_level0<F: Field>(v: &TruncatedModule<F>, f: &Morphism, x: &FreeElement<F>) -> Result<Vec<F::Elem>> {
    let dense = x.to_dense(v.field(), v.dim(f.source()));
    v.act_vec(f, &dense)
}

fn differential_matrix<F: Field>(
    field: &F,
    v: &TruncatedModule<F>,
    prev: Option<&ResolutionLevel<F>>,
    lvl: &ResolutionLevel<F>,
    n: &MultiIndex,
    rows: usize,
) -> Result<Matrix<F>> {
    columns(field, v, prev.map(|p| &p.layout), &lvl.layout, &lvl.images, n, rows)
        .map(|cols| Matrix::from_columns(field, rows, &cols))
}

/// Columns `h_*(d g)` for every basis element `(g, h)` of `layout` at `n`.
fn columns<F: Field>(
    field: &F,
    v: &TruncatedModule<F>,
    prev: Option<&FreeModule>,
    layout: &FreeModule,
    images: &[FreeElement<F>],
    n: &MultiIndex,
    rows: usize,
) -> Result<Vec<Vec<F::Elem>>> {
    (0..layout.dim(n))
        .into_par_iter()
        .map(|c| {
            let (g, h) = layout.element(n, c);
            match prev {
                None => push_level0(v, &h, &images[g]),
                Some(p) => Ok(p.push(&h, &images[g]).to_dense(field, rows)),
            }
        })
        .collect()
}

/// Work done for one degree of one level.
struct Step<F: Field> {
    slot: usize,
    new_images: Vec<FreeElement<F>>,
    kernel: Subspace<F>,
}

/// Builds `P_0, .., P_{levels-1}` degree by degree in increasing total
/// degree. At each degree the image of the existing generators is compared
/// with the kernel of the previous differential and new generators are added
/// until it is covered; each new generator contributes its whole
/// automorphism orbit.
pub fn free_resolution<F: Field>(
    v: &TruncatedModule<F>,
    levels: usize,
    strategy: LiftStrategy,
) -> Result<ResolutionData<F>> {
    let field = v.field().clone();
    let window = v.window().clone();
    let slots = window.degrees().len();
    let mut gens: Vec<Vec<MultiIndex>> = vec![Vec::new(); levels];
    let mut images: Vec<Vec<FreeElement<F>>> = vec![Vec::new(); levels];
    let mut layouts: Vec<FreeModule> =
        (0..levels).map(|_| FreeModule::new(Vec::new(), window.clone())).collect::<Result<_>>()?;
    let mut kernels: Vec<Vec<Option<Subspace<F>>>> = vec![vec![None; slots]; levels];

    for total in 0..=window.top() {
        let level_degrees = degrees_of_total(window.m(), total);
        for i in 0..levels {
            let prev_layout = if i == 0 { None } else { Some(&layouts[i - 1]) };
            let prev_kernels = if i == 0 { None } else { Some(&kernels[i - 1]) };
            let steps: Vec<Step<F>> = level_degrees
                .par_iter()
                .map(|n| {
                    resolve_degree(
                        &field,
                        v,
                        &window,
                        n,
                        prev_layout,
                        prev_kernels,
                        &gens[i],
                        &images[i],
                        strategy,
                        i,
                    )
                })
                .collect::<Result<_>>()?;
            for step in steps {
                for img in step.new_images {
                    gens[i].push(img.degree.clone());
                    images[i].push(img);
                }
                kernels[i][step.slot] = Some(step.kernel);
            }
            layouts[i] = FreeModule::new(gens[i].clone(), window.clone())?;
        }
    }
    let levels = layouts
        .into_iter()
        .zip(images)
        .zip(kernels)
        .map(|((layout, images), ks)| ResolutionLevel {
            layout,
            images,
            kernels: ks.into_iter().map(Option::unwrap).collect(),
        })
        .collect();
    Ok(ResolutionData { field, window, levels })
}

#[allow(clippy::too_many_arguments)]
fn resolve_degree<F: Field>(
    field: &F,
    v: &TruncatedModule<F>,
    window: &Arc<Window>,
    n: &MultiIndex,
    prev_layout: Option<&FreeModule>,
    prev_kernels: Option<&Vec<Option<Subspace<F>>>>,
    gens: &[MultiIndex],
    images: &[FreeElement<F>],
    strategy: LiftStrategy,
    level: usize,
) -> Result<Step<F>> {
    let slot = window.index_of(n).unwrap();
    let ambient = match prev_layout {
        None => v.dim(n),
        Some(p) => p.dim(n),
    };
    // The kernel of the previous differential at n, to be covered.
    let target = match prev_kernels {
        None => Subspace::full(field, ambient),
        Some(ks) => ks[slot].clone().unwrap(),
    };

    // Transposition actions on the ambient space.
    let perms: Vec<Vec<usize>> = match prev_layout {
        None => Vec::new(),
        Some(p) => (0..window.m())
            .flat_map(|i| (0..n.get(i).saturating_sub(1)).map(move |j| (i, j)))
            .map(|(i, j)| {
                let s = Morphism::transposition(n, i, j);
                (0..ambient)
                    .map(|c| {
                        let (g, h) = p.element(n, c);
                        p.index(g, &s.after(&h))
                    })
                    .collect()
            })
            .collect(),
    };
    let mats = if prev_layout.is_none() { v.automorphism_generators(n) } else { Vec::new() };
    let op_count = if prev_layout.is_none() { mats.len() } else { perms.len() };
    let apply = |k: usize, x: &[F::Elem]| -> Vec<F::Elem> {
        if prev_layout.is_none() {
            mats[k].mul_vec(x)
        } else {
            let mut out = vec![field.zero(); x.len()];
            for (c, val) in x.iter().enumerate() {
                out[perms[k][c]] = val.clone();
            }
            out
        }
    };

    // Image of the lower generators: one-step inclusions of the kernels
    // below, closed under automorphisms.
    let mut covered = Subspace::zero(field, ambient);
    let mut seed = Vec::new();
    if let Some(ks) = prev_kernels {
        let p = prev_layout.unwrap();
        for i in 0..window.m() {
            if let Some(below) = n.minus_unit(i) {
                let inc = Morphism::standard_inclusion(&below, i);
                let kb = ks[window.index_of(&below).unwrap()].as_ref().unwrap();
                for b in kb.basis() {
                    let x = FreeElement::<F>::from_dense(below.clone(), field, b);
                    seed.push(p.push(&inc, &x).to_dense(field, ambient));
                }
            }
        }
    } else {
        for i in 0..window.m() {
            if let Some(below) = n.minus_unit(i) {
                let inc = v.inclusion(&below, i)?;
                seed.extend((0..inc.cols()).map(|c| inc.column(c)));
            }
        }
    }
    extend_closure(&mut covered, seed, op_count, apply);
    if !covered.is_subspace_of(&target) {
        return Err(internal_err!("level {level}, degree {n}: image of lower generators leaves the kernel"));
    }

    let mut new_images = Vec::new();
    match strategy {
        LiftStrategy::PivotGreedy => {
            for u in target.basis() {
                if covered.dim() == target.dim() {
                    break;
                }
                if !covered.contains(u) {
                    extend_closure(&mut covered, vec![u.clone()], op_count, apply);
                    new_images.push(FreeElement::from_dense(n.clone(), field, u));
                }
            }
        }
        LiftStrategy::Random { seed } => {
            let mix = seed ^ (level as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (slot as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            let mut rng = ChaCha8Rng::seed_from_u64(mix);
            let mut attempts = 0usize;
            while covered.dim() < target.dim() {
                attempts += 1;
                if attempts > 64 * (target.dim() + 1) {
                    return Err(internal_err!("level {level}, degree {n}: random lifts failed to cover the kernel"));
                }
                let mut u = vec![field.zero(); ambient];
                for b in target.basis() {
                    let c = if rng.gen_bool(0.5) { field.random_nonzero(&mut rng) } else { field.zero() };
                    field.axpy(&mut u, &c, b);
                }
                if !covered.contains(&u) {
                    extend_closure(&mut covered, vec![u.clone()], op_count, apply);
                    new_images.push(FreeElement::from_dense(n.clone(), field, &u));
                }
            }
        }
    }
    if covered.dim() != target.dim() {
        return Err(internal_err!("level {level}, degree {n}: kernel not covered"));
    }

    // Kernel of d at n, with the new generators in place.
    let mut local_gens = gens.to_vec();
    let mut local_images = images.to_vec();
    for img in &new_images {
        local_gens.push(img.degree.clone());
        local_images.push(img.clone());
    }
    let layout = FreeModule::new(local_gens, window.clone())?;
    let cols = columns(field, v, prev_layout, &layout, &local_images, n, ambient)?;
    if let Some(c) = cols.iter().position(|c| !target.contains(c)) {
        return Err(internal_err!("level {level}, degree {n}: d of basis element {c} is not a cycle"));
    }
    let rref = Matrix::from_columns(field, ambient, &cols).rref();
    if rref.rank() != target.dim() {
        return Err(internal_err!(
            "level {level}, degree {n}: image has rank {} but the kernel has dimension {}",
            rref.rank(),
            target.dim()
        ));
    }
    let kernel = Subspace::spanned_by(field, layout.dim(n), rref.kernel_basis());
    Ok(Step { slot, new_images, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::module::{free_module, from_presentation, random_presentation};

    fn fp() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn mi(c: &[usize]) -> MultiIndex {
        MultiIndex::new(c.to_vec())
    }

    #[test]
    fn free_module_resolves_in_one_step() {
        let f = fp();
        let w = mi(&[1, 1]);
        let v = free_module(&f, &w, Window::new(2, 4)).unwrap();
        let res = free_resolution(&v, 3, LiftStrategy::PivotGreedy).unwrap();
        assert_eq!(res.generator_degrees(0), &[w]);
        assert!(res.generator_degrees(1).is_empty());
        assert!(res.generator_degrees(2).is_empty());
        assert!(res.certify(&v).unwrap().is_empty());
    }

    #[test]
    fn presented_modules_certify() {
        let f = PrimeField::new(2).unwrap();
        for seed in 0..4 {
            let pres = random_presentation(&f, 2, 1, 2, 2, 2, seed).unwrap();
            let (v, _) = from_presentation(&pres, Window::new(2, 4), &f).unwrap();
            for strategy in [LiftStrategy::PivotGreedy, LiftStrategy::Random { seed }] {
                let res = free_resolution(&v, 3, strategy).unwrap();
                assert!(res.certify(&v).unwrap().is_empty(), "seed {seed}");
            }
        }
    }
}
