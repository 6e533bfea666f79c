//! `H_0`, free resolutions, higher homology and regularity.

mod koszul;
mod oracle;
mod resolution;
mod table;

use crate::error::Result;
use crate::fim::MultiIndex;
use crate::linalg::{quotient_with_section, span_closure, Field, Quotient, Subspace};
use crate::module::TruncatedModule;

pub use koszul::koszul_table;
pub use oracle::{tor_oracle, OracleBudget};
pub use resolution::{free_resolution, LiftStrategy, ResolutionData, ResolutionLevel};
pub use table::{homology_table, homology_with, regularity_report, Engine, HomologyTable, RegularityReport};

/// `Ṽ_n`: the span of images of all morphisms into `n` from strictly
/// smaller degrees.
pub fn tilde_subspace<F: Field>(v: &TruncatedModule<F>, n: &MultiIndex) -> Result<Subspace<F>> {
    tilde_along(v, n, &(0..v.m()).collect::<Vec<_>>(), &(0..v.m()).collect::<Vec<_>>())
}

/// Images of one-step inclusions in the coordinates `incl_coords`, closed
/// under the transpositions of the coordinates `perm_coords`.
pub(crate) fn tilde_along<F: Field>(
    v: &TruncatedModule<F>,
    n: &MultiIndex,
    incl_coords: &[usize],
    perm_coords: &[usize],
) -> Result<Subspace<F>> {
    let mut seed = Vec::new();
    for &i in incl_coords {
        if let Some(prev) = n.minus_unit(i) {
            let inc = v.inclusion(&prev, i)?;
            seed.extend((0..inc.cols()).map(|c| inc.column(c)));
        }
    }
    let mut ops = Vec::new();
    for &i in perm_coords {
        for j in 0..n.get(i).saturating_sub(1) {
            ops.push(v.transposition(n, i, j)?);
        }
    }
    span_closure(v.field(), v.dim(n), seed, &ops)
}

/// `H_0(V) = V / Ṽ`, degree by degree.
#[derive(Clone, Debug)]
pub struct H0Data<F: Field> {
    pub degrees: Vec<MultiIndex>,
    pub quotients: Vec<Quotient<F>>,
}

impl<F: Field> H0Data<F> {
    pub fn dim(&self, n: &MultiIndex) -> usize {
        self.degrees.iter().position(|x| x == n).map_or(0, |k| self.quotients[k].dim)
    }

    pub fn dims(&self) -> Vec<(MultiIndex, usize)> {
        self.degrees.iter().cloned().zip(self.quotients.iter().map(|q| q.dim)).collect()
    }

    /// Lifts of an `H_0` basis at `n`: the columns of the section.
    pub fn lifts(&self, n: &MultiIndex) -> Vec<Vec<F::Elem>> {
        match self.degrees.iter().position(|x| x == n) {
            Some(k) => {
                let s = &self.quotients[k].section;
                (0..s.cols()).map(|c| s.column(c)).collect()
            }
            None => Vec::new(),
        }
    }
}

pub fn h0<F: Field>(v: &TruncatedModule<F>) -> Result<H0Data<F>> {
    let degrees = v.window().degrees().to_vec();
    let quotients = degrees
        .iter()
        .map(|n| Ok(quotient_with_section(&tilde_subspace(v, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(H0Data { degrees, quotients })
}

/// The largest `|n|` with `V_n != 0` (`-1` for the zero module), and whether
/// the value touches the top of the window and so may be larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeInfo {
    pub value: i64,
    pub censored: bool,
}

pub fn degree<F: Field>(v: &TruncatedModule<F>) -> DegreeInfo {
    let value = v
        .dims()
        .iter()
        .filter(|(_, d)| *d > 0)
        .map(|(n, _)| n.total() as i64)
        .max()
        .unwrap_or(-1);
    DegreeInfo { value, censored: value == v.top() as i64 }
}
