//! The shift functor, its canonical map, the kernel and cokernel functors and
//! their derived functors, coordinate restriction and the horizontal /
//! vertical splitting of `H_0`.

mod church;
mod split;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{input_err, Result};
use crate::fim::{Morphism, MultiIndex};
use crate::homology::{free_resolution, HomologyTable, LiftStrategy};
use crate::linalg::{Field, Matrix, Subspace};
use crate::module::{
    check_closed, direct_sum, quotient_module, sub_module, DegreeData, ModuleMap, TruncatedModule, Violation,
    Window,
};

pub use church::church_lemma_check;
pub use split::{hor_ver_homology, restrict_coord, restrict_coords, split_h0, Side, Split};

fn check_coord<F: Field>(v: &TruncatedModule<F>, i: usize) -> Result<()> {
    if i >= v.m() {
        return Err(input_err!("coordinate {i} out of range for m = {}", v.m()));
    }
    if v.top() == 0 {
        return Err(input_err!("shifting needs a window with N >= 1"));
    }
    Ok(())
}

/// `Σ_i V` on the window `N - 1`: `(Σ_i V)_n = V_{n+e_i}`, with the new point
/// in front of coordinate `i`, so generators are read off `V` by reindexing.
pub fn shift<F: Field>(v: &TruncatedModule<F>, i: usize) -> Result<TruncatedModule<F>> {
    check_coord(v, i)?;
    let w = Window::new(v.m(), v.top() - 1);
    let src = v.window();
    let data = w
        .degrees()
        .iter()
        .map(|n| {
            let up = n.plus_unit(i);
            let d = &v.degree_data()[src.index_of(&up).unwrap()];
            DegreeData {
                dim: d.dim,
                incl: (0..w.m())
                    .map(|c| if n.total() < w.top() { d.incl[c].clone() } else { None })
                    .collect(),
                transp: (0..w.m())
                    .map(|c| d.transp[c].iter().skip(usize::from(c == i)).cloned().collect())
                    .collect(),
            }
        })
        .collect();
    TruncatedModule::from_parts(v.field(), w, data)
}

/// `ε_i: V -> Σ_i V` on the window `N - 1`, induced by `t -> t+1`.
pub fn epsilon<F: Field>(v: &TruncatedModule<F>, i: usize) -> Result<ModuleMap<F>> {
    check_coord(v, i)?;
    let window = Window::new(v.m(), v.top() - 1);
    let maps = window
        .degrees()
        .par_iter()
        .map(|n| v.act(&Morphism::shift_inclusion(n, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleMap { window, maps })
}

/// `0 -> K_i V -> V -> Σ_i V -> D_i V -> 0` on the window `N - 1`.
#[derive(Clone, Debug)]
pub struct FourTermData<F: Field> {
    pub coord: usize,
    /// `V` truncated to the window `N - 1`.
    pub v: TruncatedModule<F>,
    pub k: TruncatedModule<F>,
    pub sigma: TruncatedModule<F>,
    pub d: TruncatedModule<F>,
    /// `K_i V -> V`.
    pub incl: ModuleMap<F>,
    pub eps: ModuleMap<F>,
    /// `Σ_i V -> D_i V`.
    pub proj: ModuleMap<F>,
}

impl<F: Field> FourTermData<F> {
    /// Exactness at every node, by composites and ranks, plus naturality of
    /// all three maps.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let w = self.v.window().clone();
        for (k, n) in w.degrees().iter().enumerate() {
            let mut fail = |relation: &'static str| {
                out.push(Violation { degree: n.clone(), coord: self.coord, j: 0, relation });
            };
            let (a, e, p) = (&self.incl.maps[k], &self.eps.maps[k], &self.proj.maps[k]);
            let rank_a = a.rank();
            let rank_e = e.rank();
            let rank_p = p.rank();
            let dk = self.k.degree_data()[k].dim;
            let dv = self.v.degree_data()[k].dim;
            let ds = self.sigma.degree_data()[k].dim;
            let dd = self.d.degree_data()[k].dim;
            if rank_a != dk {
                fail("kernel-injective");
            }
            if !e.mul(a).unwrap().is_zero() || rank_a + rank_e != dv {
                fail("exact-at-v");
            }
            if !p.mul(e).unwrap().is_zero() || rank_e + rank_p != ds {
                fail("exact-at-sigma");
            }
            if rank_p != dd {
                fail("cokernel-surjective");
            }
        }
        out.extend(self.incl.naturality_violations(&self.k, &self.v));
        out.extend(self.eps.naturality_violations(&self.v, &self.sigma));
        out.extend(self.proj.naturality_violations(&self.sigma, &self.d));
        out
    }
}

/// `K_i V = ker ε_i` and `D_i V = coker ε_i` with induced structure.
pub fn kd_functors<F: Field>(v: &TruncatedModule<F>, i: usize) -> Result<FourTermData<F>> {
    let sigma = shift(v, i)?;
    let eps = epsilon(v, i)?;
    let vt = v.truncate(v.top() - 1)?;
    let f = v.field();
    let w = eps.window.clone();
    let kernels: Vec<Subspace<F>> = w
        .degrees()
        .iter()
        .zip(&eps.maps)
        .map(|(n, e)| Subspace::spanned_by(f, vt.dim(n), e.rref().kernel_basis()))
        .collect();
    let images: Vec<Subspace<F>> = w
        .degrees()
        .iter()
        .zip(&eps.maps)
        .map(|(n, e)| Subspace::spanned_by(f, sigma.dim(n), (0..e.cols()).map(|c| e.column(c))))
        .collect();
    check_closed(&vt, &kernels, "ker ε")?;
    check_closed(&sigma, &images, "im ε")?;
    let k = sub_module(&vt, &kernels)?;
    let (d, quots) = quotient_module(&sigma, &images)?;
    let incl = ModuleMap {
        window: w.clone(),
        maps: kernels
            .iter()
            .map(|s| if s.dim() == 0 { Matrix::zeros(f, s.ambient(), 0) } else { s.basis_matrix() })
            .collect(),
    };
    let proj = ModuleMap { window: w, maps: quots.into_iter().map(|q| q.projection).collect() };
    Ok(FourTermData { coord: i, v: vt, k, sigma, d, incl, eps, proj })
}

/// The bold functors: direct sums over all coordinates.
#[derive(Clone, Debug)]
pub struct BoldData<F: Field> {
    pub parts: Vec<FourTermData<F>>,
    pub k: TruncatedModule<F>,
    pub sigma: TruncatedModule<F>,
    pub d: TruncatedModule<F>,
}

impl<F: Field> BoldData<F> {
    /// Degrees where `dim K + dim ΣV != m dim V + dim D`.
    pub fn dimension_violations(&self) -> Vec<MultiIndex> {
        let m = self.parts.len();
        let v = &self.parts[0].v;
        v.window()
            .degrees()
            .iter()
            .filter(|n| self.k.dim(n) + self.sigma.dim(n) != m * v.dim(n) + self.d.dim(n))
            .cloned()
            .collect()
    }
}

pub fn bold_functors<F: Field>(v: &TruncatedModule<F>) -> Result<BoldData<F>> {
    let parts = (0..v.m()).map(|i| kd_functors(v, i)).collect::<Result<Vec<_>>>()?;
    let k = direct_sum(&parts.iter().map(|p| &p.k).collect::<Vec<_>>())?;
    let sigma = direct_sum(&parts.iter().map(|p| &p.sigma).collect::<Vec<_>>())?;
    let d = direct_sum(&parts.iter().map(|p| &p.d).collect::<Vec<_>>())?;
    Ok(BoldData { parts, k, sigma, d })
}

/// `dim L_p D_i(V)_n` for `p <= p_max` on the window `N - 1`, as the
/// homology of `D_i` applied to a free resolution of `V`.
///
/// On a free module `ε_i` sends the basis element `(g, h)` to `(g, ϖ h)`, so
/// `D_i P` has the basis of `(P)_{n+e_i}` missing from that image and
/// `D_i(d)` is the corresponding block of `d`.
pub fn derived_d<F: Field>(v: &TruncatedModule<F>, i: usize, p_max: usize) -> Result<HomologyTable> {
    check_coord(v, i)?;
    let res = free_resolution(v, p_max + 2, LiftStrategy::PivotGreedy)?;
    let w: Arc<Window> = Window::new(v.m(), v.top() - 1);
    let dims = w
        .degrees()
        .par_iter()
        .map(|n| {
            let up = n.plus_unit(i);
            let shift = Morphism::shift_inclusion(n, i);
            let complement = |p: usize| -> Vec<usize> {
                let layout = &res.levels[p].layout;
                let mut hit = vec![false; layout.dim(&up)];
                for idx in 0..layout.dim(n) {
                    let (g, h) = layout.element(n, idx);
                    hit[layout.index(g, &shift.after(&h))] = true;
                }
                (0..hit.len()).filter(|&c| !hit[c]).collect()
            };
            let comps: Vec<Vec<usize>> = (0..=p_max + 1).map(complement).collect();
            // ranks[p] = rank D(d_p) for 1 <= p <= p_max + 1.
            let mut ranks = vec![0usize; p_max + 2];
            for p in 1..=p_max + 1 {
                let d = res.differential(v, p, &up)?;
                ranks[p] = d.select(&comps[p - 1], &comps[p]).rank();
            }
            Ok((0..=p_max).map(|p| comps[p].len() - ranks[p] - ranks[p + 1]).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let rows = (0..=p_max).map(|p| dims.iter().map(|col| col[p]).collect()).collect();
    HomologyTable::new(w.m(), w.top(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{h0, homology_table};
    use crate::linalg::PrimeField;
    use crate::module::{free_module, from_presentation, random_presentation, validate};

    fn fp() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn mi(c: &[usize]) -> MultiIndex {
        MultiIndex::new(c.to_vec())
    }

    #[test]
    fn shift_of_free_module_splits() {
        // Σ M(w) = M(w) ⊕ M(w - e_i)^{w_i}.
        let f = fp();
        let w = mi(&[1, 1]);
        let v = free_module(&f, &w, Window::new(2, 4)).unwrap();
        let s = shift(&v, 0).unwrap();
        assert!(validate(&s).is_empty());
        let a = free_module(&f, &w, Window::new(2, 3)).unwrap();
        let b = free_module(&f, &mi(&[0, 1]), Window::new(2, 3)).unwrap();
        for n in s.window().degrees() {
            assert_eq!(s.dim(n), a.dim(n) + b.dim(n), "at {n}");
        }
    }

    #[test]
    fn four_term_sequence_is_exact() {
        let f = fp();
        for seed in 0..4 {
            let pres = random_presentation(&f, 2, 1, 2, 2, 1, seed).unwrap();
            let (v, _) = from_presentation(&pres, Window::new(2, 4), &f).unwrap();
            for i in 0..2 {
                let data = kd_functors(&v, i).unwrap();
                assert!(data.violations().is_empty(), "seed {seed}: {:?}", data.violations());
                assert!(validate(&data.k).is_empty());
                assert!(validate(&data.d).is_empty());
            }
            assert!(bold_functors(&v).unwrap().dimension_violations().is_empty());
        }
    }

    #[test]
    fn free_modules_have_free_cokernel_and_no_kernel() {
        let f = fp();
        let v = free_module(&f, &mi(&[2]), Window::new(1, 5)).unwrap();
        let data = kd_functors(&v, 0).unwrap();
        assert!(data.k.is_zero());
        // D M(w) = M(w - e_i)^{w_i}.
        let expect = free_module(&f, &mi(&[1]), Window::new(1, 4)).unwrap();
        for n in expect.window().degrees() {
            assert_eq!(data.d.dim(n), 2 * expect.dim(n));
        }
    }

    #[test]
    fn derived_zero_is_d() {
        let f = fp();
        for seed in 0..3 {
            let pres = random_presentation(&f, 1, 1, 2, 2, 1, seed).unwrap();
            let (v, _) = from_presentation(&pres, Window::new(1, 5), &f).unwrap();
            let ld = derived_d(&v, 0, 2).unwrap();
            let d = kd_functors(&v, 0).unwrap().d;
            for (k, n) in ld.degrees().iter().enumerate() {
                assert_eq!(ld.row(0)[k], d.dim(n), "seed {seed} at {n}");
            }
        }
    }

    #[test]
    fn derived_functors_vanish_on_free_modules() {
        let f = fp();
        let v = free_module(&f, &mi(&[1, 0]), Window::new(2, 4)).unwrap();
        let ld = derived_d(&v, 1, 2).unwrap();
        assert!(ld.row(1).iter().chain(ld.row(2)).all(|&x| x == 0));
    }

    #[test]
    fn d_of_h0_matches_shifted_h0_on_free() {
        let f = fp();
        let v = free_module(&f, &mi(&[1]), Window::new(1, 4)).unwrap();
        let h = h0(&v).unwrap();
        let d = kd_functors(&v, 0).unwrap().d;
        let hd = homology_table(&d, 0).unwrap();
        for n in d.window().degrees() {
            assert_eq!(hd.get(0, n), h.dim(&n.plus_unit(0)));
        }
    }
}
