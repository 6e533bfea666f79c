use std::sync::Arc;

use super::{DegreeData, TruncatedModule, Window};
use crate::error::{input_err, Result};
use crate::fim::{hom_count, Morphism, MultiIndex};
use crate::linalg::{Field, Matrix};

/// Basis layout of a free module `P = ⊕_g M(w_g)` on a window.
///
/// At degree `n` the basis is the concatenation over generators `g` of
/// `FI^m(w_g, n)` in lexicographic order.
#[derive(Clone, Debug)]
pub struct FreeModule {
    window: Arc<Window>,
    gens: Vec<MultiIndex>,
    /// `offsets[k][g]`: first basis index of generator `g` at degree `k`.
    offsets: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

/// A sparse element of a free module at one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeElement<F: Field> {
    pub degree: MultiIndex,
    /// `(basis index, coefficient)`, sorted by index, no zero coefficients.
    pub terms: Vec<(usize, F::Elem)>,
}

impl<F: Field> FreeElement<F> {
    pub fn from_dense(degree: MultiIndex, field: &F, v: &[F::Elem]) -> Self {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !field.is_zero(x))
            .map(|(k, x)| (k, x.clone()))
            .collect();
        FreeElement { degree, terms }
    }

    pub fn to_dense(&self, field: &F, dim: usize) -> Vec<F::Elem> {
        let mut v = vec![field.zero(); dim];
        for (k, x) in &self.terms {
            v[*k] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl FreeModule {
    pub fn new(gens: Vec<MultiIndex>, window: Arc<Window>) -> Result<Self> {
        for w in &gens {
            if !window.contains(w) {
                return Err(input_err!(
                    "generator degree {w} outside window m = {}, N = {}",
                    window.m(),
                    window.top()
                ));
            }
        }
        let mut offsets = Vec::with_capacity(window.degrees().len());
        let mut dims = Vec::with_capacity(window.degrees().len());
        for n in window.degrees() {
            let mut off = Vec::with_capacity(gens.len());
            let mut acc = 0usize;
            for w in &gens {
                off.push(acc);
                if w.le(n) {
                    acc += hom_count(w, n);
                }
            }
            offsets.push(off);
            dims.push(acc);
        }
        Ok(FreeModule { window, gens, offsets, dims })
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn generators(&self) -> &[MultiIndex] {
        &self.gens
    }

    pub fn dim(&self, n: &MultiIndex) -> usize {
        self.window.index_of(n).map_or(0, |k| self.dims[k])
    }

    fn slot(&self, n: &MultiIndex) -> usize {
        self.window.index_of(n).expect("degree inside the window")
    }

    /// Basis index of `(g, h)` with `h: w_g -> n`.
    pub fn index(&self, g: usize, h: &Morphism) -> usize {
        self.offsets[self.slot(h.target())][g] + h.lex_rank()
    }

    /// Inverse of [`FreeModule::index`].
    pub fn element(&self, n: &MultiIndex, idx: usize) -> (usize, Morphism) {
        let off = &self.offsets[self.slot(n)];
        // Generators not below n own empty ranges, which never end up last.
        let g = off.partition_point(|&o| o <= idx) - 1;
        (g, Morphism::lex_unrank(&self.gens[g], n, idx - off[g]))
    }

    /// Basis indices at `n` spanned by generators living exactly in degree
    /// `n`: the coordinates that survive `H_0`.
    pub fn top_coordinates(&self, n: &MultiIndex) -> Vec<usize> {
        let k = self.slot(n);
        self.gens
            .iter()
            .enumerate()
            .filter(|(_, w)| *w == n)
            .flat_map(|(g, w)| {
                let o = self.offsets[k][g];
                o..o + w.automorphism_count()
            })
            .collect()
    }

    /// `f_*(x)` for `x` in degree `f.source`.
    pub fn push<F: Field>(&self, f: &Morphism, x: &FreeElement<F>) -> FreeElement<F> {
        debug_assert_eq!(f.source(), &x.degree);
        let mut terms: Vec<(usize, F::Elem)> = x
            .terms
            .iter()
            .map(|(k, c)| {
                let (g, h) = self.element(&x.degree, *k);
                (self.index(g, &f.after(&h)), c.clone())
            })
            .collect();
        terms.sort_by_key(|t| t.0);
        FreeElement { degree: f.target().clone(), terms }
    }

    /// The dense truncated module with this layout.
    pub fn to_module<F: Field>(&self, field: &F) -> Result<TruncatedModule<F>> {
        let w = &self.window;
        let m = w.m();
        let perm_matrix = |n: &MultiIndex, f: &Morphism| -> Matrix<F> {
            let tgt = f.target();
            let mut mat = Matrix::zeros(field, self.dim(tgt), self.dim(n));
            for c in 0..self.dim(n) {
                let (g, h) = self.element(n, c);
                mat.set(self.index(g, &f.after(&h)), c, field.one());
            }
            mat
        };
        let data = w
            .degrees()
            .iter()
            .map(|n| DegreeData {
                dim: self.dim(n),
                incl: (0..m)
                    .map(|i| {
                        (n.total() < w.top()).then(|| perm_matrix(n, &Morphism::standard_inclusion(n, i)))
                    })
                    .collect(),
                transp: (0..m)
                    .map(|i| {
                        (0..n.get(i).saturating_sub(1))
                            .map(|j| perm_matrix(n, &Morphism::transposition(n, i, j)))
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        TruncatedModule::from_parts(field, w.clone(), data)
    }
}

/// The principal projective `M(w)` truncated to a window.
pub fn free_module<F: Field>(field: &F, w: &MultiIndex, window: Arc<Window>) -> Result<TruncatedModule<F>> {
    if w.m() != window.m() {
        return Err(input_err!("free_module: {w} does not have m = {}", window.m()));
    }
    if w.total() > window.top() {
        return Err(input_err!("free_module: |{w}| = {} exceeds N = {}", w.total(), window.top()));
    }
    FreeModule::new(vec![w.clone()], window)?.to_module(field)
}
