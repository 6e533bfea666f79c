use rayon::prelude::*;

use crate::error::{input_err, Result};
use crate::fim::{degrees_up_to, MultiIndex};
use crate::homology::{homology_with, tilde_along, Engine, HomologyTable};
use crate::linalg::Field;
use crate::module::{quotient_module, DegreeData, TruncatedModule, Window};

/// A partition of the coordinates into a horizontal block `A` and a
/// vertical block `B`, both nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub horizontal: Vec<usize>,
    pub vertical: Vec<usize>,
}

impl Split {
    /// The split with the given horizontal coordinates; the rest are vertical.
    pub fn new(m: usize, horizontal: &[usize]) -> Result<Split> {
        let mut h = horizontal.to_vec();
        h.sort_unstable();
        h.dedup();
        if h.is_empty() || h.len() >= m || h.iter().any(|&c| c >= m) {
            return Err(input_err!("split {horizontal:?} must be a nonempty proper subset of 0..{m}"));
        }
        let vertical = (0..m).filter(|c| !h.contains(c)).collect();
        Ok(Split { horizontal: h, vertical })
    }

    pub fn coords(&self, side: Side) -> &[usize] {
        match side {
            Side::Horizontal => &self.horizontal,
            Side::Vertical => &self.vertical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Horizontal,
    Vertical,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Horizontal => Side::Vertical,
            Side::Vertical => Side::Horizontal,
        }
    }
}

fn merge(m: usize, frozen: &[usize], x: &MultiIndex, free: &[usize], y: &MultiIndex) -> MultiIndex {
    let mut c = vec![0; m];
    for (k, &i) in frozen.iter().enumerate() {
        c[i] = x.get(k);
    }
    for (k, &i) in free.iter().enumerate() {
        c[i] = y.get(k);
    }
    MultiIndex::new(c)
}

/// `V_{(x, -)}`: the FI^{m-|coords|}-module obtained by freezing the sorted
/// coordinates `coords` at `x`, on the window `N - |x|`.
pub fn restrict_coords<F: Field>(v: &TruncatedModule<F>, coords: &[usize], x: &MultiIndex) -> Result<TruncatedModule<F>> {
    let m = v.m();
    if coords.is_empty() || coords.len() >= m || coords.windows(2).any(|p| p[0] >= p[1]) || coords.iter().any(|&c| c >= m) {
        return Err(input_err!("frozen coordinates {coords:?} must be a sorted nonempty proper subset of 0..{m}"));
    }
    if x.m() != coords.len() || x.total() > v.top() {
        return Err(input_err!("frozen degree {x} does not fit coordinates {coords:?} and N = {}", v.top()));
    }
    let free: Vec<usize> = (0..m).filter(|c| !coords.contains(c)).collect();
    let w = Window::new(free.len(), v.top() - x.total());
    let data = w
        .degrees()
        .iter()
        .map(|y| {
            let n = merge(m, coords, x, &free, y);
            let d = &v.degree_data()[v.window().index_of(&n).unwrap()];
            DegreeData {
                dim: d.dim,
                incl: free.iter().map(|&c| d.incl[c].clone()).collect(),
                transp: free.iter().map(|&c| d.transp[c].clone()).collect(),
            }
        })
        .collect();
    TruncatedModule::from_parts(v.field(), w, data)
}

/// Freezes the single coordinate `i` at `x`.
pub fn restrict_coord<F: Field>(v: &TruncatedModule<F>, i: usize, x: usize) -> Result<TruncatedModule<F>> {
    restrict_coords(v, &[i], &MultiIndex::new(vec![x]))
}

/// `V / V^side`, where `V^side_n` is spanned by images of inclusions in the
/// side's coordinates and closed under the side's transpositions.
pub fn split_h0<F: Field>(v: &TruncatedModule<F>, split: &Split, side: Side) -> Result<TruncatedModule<F>> {
    let coords = split.coords(side);
    let subs = v
        .window()
        .degrees()
        .par_iter()
        .map(|n| tilde_along(v, n, coords, coords))
        .collect::<Result<Vec<_>>>()?;
    Ok(quotient_module(v, &subs)?.0)
}

/// Homology along one side of the split: for every degree `x` of the other
/// side, the homology of the restriction `V_{(x, -)}`, reassembled over the
/// full window.
pub fn hor_ver_homology<F: Field>(
    v: &TruncatedModule<F>,
    split: &Split,
    side: Side,
    max_q: usize,
    engine: Engine,
) -> Result<HomologyTable> {
    let along = split.coords(side);
    let frozen = split.coords(side.other());
    let m = v.m();
    let slices = degrees_up_to(frozen.len(), v.top())
        .into_par_iter()
        .map(|x| {
            let r = restrict_coords(v, frozen, &x)?;
            Ok((x, homology_with(&r, max_q, engine)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let degrees = v.window().degrees();
    let mut dims = vec![vec![0; degrees.len()]; max_q + 1];
    for (x, table) in &slices {
        for y in table.degrees() {
            let n = merge(m, frozen, x, along, y);
            let k = v.window().index_of(&n).unwrap();
            for (q, row) in dims.iter_mut().enumerate() {
                row[k] = table.get(q, y);
            }
        }
    }
    HomologyTable::new(m, v.top(), dims)
}
