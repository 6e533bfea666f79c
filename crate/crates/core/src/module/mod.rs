//! Truncated FI^m-modules: degreewise vector spaces with matrices for the
//! generating morphisms (standard inclusions and adjacent transpositions).

mod free;
mod io;
mod presentation;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{input_err, Result};
use crate::fim::{canonical_factorization, degrees_up_to, Morphism, MultiIndex};
use crate::linalg::{Field, Matrix};

pub use free::{free_module, FreeElement, FreeModule};
pub use io::{InputFile, ModuleFile, PresentationFile};
pub use presentation::{from_presentation, random_presentation, Presentation, Relation, Term};
pub(crate) use presentation::{check_closed, quotient_module, sub_module};

/// The finite set of degrees `{ n in N^m : |n| <= top }`.
#[derive(Debug)]
pub struct Window {
    m: usize,
    top: usize,
    degrees: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

impl Window {
    pub fn new(m: usize, top: usize) -> Arc<Window> {
        let degrees = degrees_up_to(m, top);
        let index = degrees.iter().cloned().enumerate().map(|(k, n)| (n, k)).collect();
        Arc::new(Window { m, top, degrees, index })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The truncation bound `N`.
    pub fn top(&self) -> usize {
        self.top
    }

    /// Degrees sorted by total degree, then lexicographically.
    pub fn degrees(&self) -> &[MultiIndex] {
        &self.degrees
    }

    pub fn index_of(&self, n: &MultiIndex) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn contains(&self, n: &MultiIndex) -> bool {
        n.m() == self.m && n.total() <= self.top
    }

    pub fn same_shape(&self, other: &Window) -> bool {
        self.m == other.m && self.top == other.top
    }
}

/// Matrices attached to one degree `n`.
#[derive(Clone, Debug)]
pub struct DegreeData<F: Field> {
    pub dim: usize,
    /// `incl[i]`: `V_n -> V_{n+e_i}`, absent when `|n| = N`.
    pub incl: Vec<Option<Matrix<F>>>,
    /// `transp[i][j]`: action of the transposition of `j, j+1` in coordinate
    /// `i` (0-based), for `j + 1 < n_i`.
    pub transp: Vec<Vec<Matrix<F>>>,
}

/// An FI^m-module known on every degree of a window.
#[derive(Clone, Debug)]
pub struct TruncatedModule<F: Field> {
    field: F,
    window: Arc<Window>,
    data: Vec<DegreeData<F>>,
}

impl<F: Field> TruncatedModule<F> {
    /// Assembles a module from per-degree data, checking shapes.
    pub fn from_parts(field: &F, window: Arc<Window>, data: Vec<DegreeData<F>>) -> Result<Self> {
        if data.len() != window.degrees().len() {
            return Err(input_err!(
                "module data covers {} degrees, window has {}",
                data.len(),
                window.degrees().len()
            ));
        }
        let module = TruncatedModule { field: field.clone(), window, data };
        module.check_shapes()?;
        Ok(module)
    }

    fn check_shapes(&self) -> Result<()> {
        let m = self.window.m();
        for (k, n) in self.window.degrees().iter().enumerate() {
            let d = &self.data[k];
            if d.incl.len() != m || d.transp.len() != m {
                return Err(input_err!("degree {n}: expected {m} coordinates of generator data"));
            }
            for i in 0..m {
                let up = n.plus_unit(i);
                match (&d.incl[i], self.window.index_of(&up)) {
                    (Some(mat), Some(u)) => {
                        if mat.shape() != (self.data[u].dim, d.dim) {
                            return Err(input_err!(
                                "degree {n}: inclusion {i} has shape {:?}, expected {:?}",
                                mat.shape(),
                                (self.data[u].dim, d.dim)
                            ));
                        }
                    }
                    (None, None) => {}
                    (Some(_), None) => {
                        return Err(input_err!("degree {n}: inclusion {i} leaves the window"))
                    }
                    (None, Some(_)) => return Err(input_err!("degree {n}: inclusion {i} missing")),
                }
                let want = n.get(i).saturating_sub(1);
                if d.transp[i].len() != want {
                    return Err(input_err!(
                        "degree {n}: coordinate {i} has {} transpositions, expected {want}",
                        d.transp[i].len()
                    ));
                }
                for t in &d.transp[i] {
                    if t.shape() != (d.dim, d.dim) {
                        return Err(input_err!("degree {n}: transposition is not {0}x{0}", d.dim));
                    }
                }
            }
        }
        Ok(())
    }

    /// The zero module on a window.
    pub fn zero(field: &F, window: Arc<Window>) -> Self {
        let m = window.m();
        let data = window
            .degrees()
            .iter()
            .map(|n| DegreeData {
                dim: 0,
                incl: (0..m)
                    .map(|_| (n.total() < window.top()).then(|| Matrix::zeros(field, 0, 0)))
                    .collect(),
                transp: (0..m)
                    .map(|i| (0..n.get(i).saturating_sub(1)).map(|_| Matrix::zeros(field, 0, 0)).collect())
                    .collect(),
            })
            .collect();
        TruncatedModule { field: field.clone(), window, data }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn m(&self) -> usize {
        self.window.m()
    }

    pub fn top(&self) -> usize {
        self.window.top()
    }

    pub fn degree_data(&self) -> &[DegreeData<F>] {
        &self.data
    }

    fn slot(&self, n: &MultiIndex) -> Result<usize> {
        self.window
            .index_of(n)
            .ok_or_else(|| input_err!("degree {n} outside window |n| <= {}", self.top()))
    }

    /// `dim V_n`, zero outside the window.
    pub fn dim(&self, n: &MultiIndex) -> usize {
        self.window.index_of(n).map_or(0, |k| self.data[k].dim)
    }

    pub fn dims(&self) -> Vec<(MultiIndex, usize)> {
        self.window.degrees().iter().cloned().zip(self.data.iter().map(|d| d.dim)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.data.iter().map(|d| d.dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|d| d.dim == 0)
    }

    pub fn inclusion(&self, n: &MultiIndex, i: usize) -> Result<&Matrix<F>> {
        let k = self.slot(n)?;
        self.data[k].incl[i]
            .as_ref()
            .ok_or_else(|| input_err!("inclusion {i} at {n} leaves the window"))
    }

    pub fn transposition(&self, n: &MultiIndex, i: usize, j: usize) -> Result<&Matrix<F>> {
        let k = self.slot(n)?;
        self.data[k].transp[i]
            .get(j)
            .ok_or_else(|| input_err!("no transposition ({j} {}) in coordinate {i} at {n}", j + 1))
    }

    /// All transposition matrices at `n`.
    pub fn automorphism_generators(&self, n: &MultiIndex) -> Vec<&Matrix<F>> {
        match self.window.index_of(n) {
            Some(k) => self.data[k].transp.iter().flatten().collect(),
            None => Vec::new(),
        }
    }

    /// `f_*` applied to a vector of `V_{f.source}`, by replaying the
    /// canonical factorization through the stored generators.
    pub fn act_vec(&self, f: &Morphism, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let src = f.source();
        self.slot(src)?;
        self.slot(f.target())?;
        if v.len() != self.dim(src) {
            return Err(input_err!("vector of length {} at degree {src}", v.len()));
        }
        let word = canonical_factorization(f);
        let mut cur = src.clone();
        let mut x = v.to_vec();
        for (i, cw) in word.coords.iter().enumerate() {
            for _ in 0..cw.inclusions {
                x = self.inclusion(&cur, i)?.mul_vec(&x);
                cur = cur.plus_unit(i);
            }
        }
        for (i, cw) in word.coords.iter().enumerate() {
            for &j in cw.word.iter().rev() {
                x = self.transposition(&cur, i, j)?.mul_vec(&x);
            }
        }
        Ok(x)
    }

    /// The matrix of `f_*`.
    pub fn act(&self, f: &Morphism) -> Result<Matrix<F>> {
        let src_dim = self.dim(f.source());
        self.slot(f.source())?;
        let tgt_dim = self.dim(f.target());
        self.slot(f.target())?;
        let mut columns = Vec::with_capacity(src_dim);
        for c in 0..src_dim {
            let mut e = vec![self.field.zero(); src_dim];
            e[c] = self.field.one();
            columns.push(self.act_vec(f, &e)?);
        }
        Ok(Matrix::from_columns(&self.field, tgt_dim, &columns))
    }

    /// Restriction to the smaller window `|n| <= top`.
    pub fn truncate(&self, top: usize) -> Result<Self> {
        if top > self.top() {
            return Err(input_err!("cannot truncate window {} up to {top}", self.top()));
        }
        let window = Window::new(self.m(), top);
        let data = window
            .degrees()
            .iter()
            .map(|n| {
                let mut d = self.data[self.window.index_of(n).expect("subwindow")].clone();
                if n.total() == top {
                    d.incl.iter_mut().for_each(|x| *x = None);
                }
                d
            })
            .collect();
        Ok(TruncatedModule { field: self.field.clone(), window, data })
    }
}

/// One failed relation reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: MultiIndex,
    pub coord: usize,
    pub j: usize,
    pub relation: &'static str,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at {} (coordinate {}, j = {})", self.relation, self.degree, self.coord, self.j)
    }
}

/// Checks every defining relation of FI^m as an exact matrix identity.
///
/// Relations, per degree `n`: involutions, braid and far commutation inside
/// each `S_{n_i}`; commutation across coordinates; commuting inclusions in
/// different coordinates; transpositions (and other-coordinate
/// transpositions) commuting with an inclusion; and the swap of the two
/// newest points fixing a double inclusion.
pub fn validate<F: Field>(v: &TruncatedModule<F>) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = v.m();
    let w = v.window();
    for (k, n) in w.degrees().iter().enumerate() {
        let d = &v.data[k];
        let id = Matrix::identity(v.field(), d.dim);
        let mut fail = |coord: usize, j: usize, relation: &'static str| {
            out.push(Violation { degree: n.clone(), coord, j, relation });
        };
        for i in 0..m {
            let ts = &d.transp[i];
            for (j, s) in ts.iter().enumerate() {
                if s.mul(s).unwrap() != id {
                    fail(i, j, "involution");
                }
                if let Some(t) = ts.get(j + 1) {
                    let lhs = s.mul(t).unwrap().mul(s).unwrap();
                    let rhs = t.mul(s).unwrap().mul(t).unwrap();
                    if lhs != rhs {
                        fail(i, j, "braid");
                    }
                }
                for t in ts.iter().skip(j + 2) {
                    if s.mul(t).unwrap() != t.mul(s).unwrap() {
                        fail(i, j, "far-commutation");
                    }
                }
                for i2 in (i + 1)..m {
                    for t in &d.transp[i2] {
                        if s.mul(t).unwrap() != t.mul(s).unwrap() {
                            fail(i, j, "cross-coordinate-commutation");
                        }
                    }
                }
            }
            let Some(inc) = &d.incl[i] else { continue };
            let up = n.plus_unit(i);
            let du = &v.data[w.index_of(&up).unwrap()];
            // Transpositions at n, in any coordinate, commute with incl_i.
            for i2 in 0..m {
                for (j, s) in d.transp[i2].iter().enumerate() {
                    let s_up = &du.transp[i2][j];
                    if s_up.mul(inc).unwrap() != inc.mul(s).unwrap() {
                        fail(i2, j, if i2 == i { "inclusion-equivariance" } else { "cross-inclusion-equivariance" });
                    }
                }
            }
            let Some(inc_up_i) = &du.incl[i] else { continue };
            let twice = inc_up_i.mul(inc).unwrap();
            let uu = &v.data[w.index_of(&up.plus_unit(i)).unwrap()];
            let top_swap = &uu.transp[i][n.get(i)];
            if top_swap.mul(&twice).unwrap() != twice {
                fail(i, n.get(i), "new-points-swap");
            }
            for i2 in (i + 1)..m {
                let a = du.incl[i2].as_ref().unwrap();
                let other = n.plus_unit(i2);
                let dother = &v.data[w.index_of(&other).unwrap()];
                let b = dother.incl[i].as_ref().unwrap();
                let inc2 = d.incl[i2].as_ref().unwrap();
                if a.mul(inc).unwrap() != b.mul(inc2).unwrap() {
                    fail(i, i2, "inclusion-commutation");
                }
            }
        }
    }
    out
}

/// Blockwise direct sum.
pub fn direct_sum<F: Field>(modules: &[&TruncatedModule<F>]) -> Result<TruncatedModule<F>> {
    let first = modules.first().ok_or_else(|| input_err!("direct_sum of no modules"))?;
    for x in modules {
        if !x.window.same_shape(&first.window) || x.field != first.field {
            return Err(input_err!("direct_sum: window or field mismatch"));
        }
    }
    let f = first.field.clone();
    let w = first.window.clone();
    let m = w.m();
    let block = |mats: Vec<&Matrix<F>>| -> Matrix<F> {
        let rows: usize = mats.iter().map(|x| x.rows()).sum();
        let cols: usize = mats.iter().map(|x| x.cols()).sum();
        let mut out = Matrix::zeros(&f, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for x in mats {
            for r in 0..x.rows() {
                for c in 0..x.cols() {
                    out.set(r0 + r, c0 + c, x.get(r, c).clone());
                }
            }
            r0 += x.rows();
            c0 += x.cols();
        }
        out
    };
    let data = (0..w.degrees().len())
        .map(|k| {
            let n = &w.degrees()[k];
            DegreeData {
                dim: modules.iter().map(|x| x.data[k].dim).sum(),
                incl: (0..m)
                    .map(|i| {
                        first.data[k].incl[i].as_ref().map(|_| {
                            block(modules.iter().map(|x| x.data[k].incl[i].as_ref().unwrap()).collect())
                        })
                    })
                    .collect(),
                transp: (0..m)
                    .map(|i| {
                        (0..n.get(i).saturating_sub(1))
                            .map(|j| block(modules.iter().map(|x| &x.data[k].transp[i][j]).collect()))
                            .collect()
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(TruncatedModule { field: f, window: w, data })
}

/// A homomorphism given by one matrix per degree of a common window.
#[derive(Clone, Debug)]
pub struct ModuleMap<F: Field> {
    pub window: Arc<Window>,
    pub maps: Vec<Matrix<F>>,
}

impl<F: Field> ModuleMap<F> {
    pub fn at(&self, n: &MultiIndex) -> Option<&Matrix<F>> {
        self.window.index_of(n).map(|k| &self.maps[k])
    }

    /// Degrees and generators where the map fails to commute with the
    /// module structure.
    pub fn naturality_violations(
        &self,
        source: &TruncatedModule<F>,
        target: &TruncatedModule<F>,
    ) -> Vec<Violation> {
        let mut out = Vec::new();
        let w = &self.window;
        for (k, n) in w.degrees().iter().enumerate() {
            let phi = &self.maps[k];
            let (Some(sk), Some(tk)) = (source.window.index_of(n), target.window.index_of(n)) else {
                continue;
            };
            for i in 0..w.m() {
                for (j, s) in source.data[sk].transp[i].iter().enumerate() {
                    let t = &target.data[tk].transp[i][j];
                    if phi.mul(s).unwrap() != t.mul(phi).unwrap() {
                        out.push(Violation { degree: n.clone(), coord: i, j, relation: "natural-transposition" });
                    }
                }
                let up = n.plus_unit(i);
                let Some(ku) = w.index_of(&up) else { continue };
                let (Some(a), Some(b)) = (&source.data[sk].incl[i], &target.data[tk].incl[i]) else {
                    continue;
                };
                if self.maps[ku].mul(a).unwrap() != b.mul(phi).unwrap() {
                    out.push(Violation { degree: n.clone(), coord: i, j: 0, relation: "natural-inclusion" });
                }
            }
        }
        out
    }
}
