use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::free::FreeModule;
use super::{DegreeData, ModuleMap, TruncatedModule, Window};
use crate::error::{input_err, internal_err, Result};
use crate::fim::{degrees_of_total, hom_count, Morphism, MultiIndex};
use crate::linalg::{quotient_with_section, span_closure, Field, Matrix, Quotient, Subspace};

/// One summand `coeff * (gen, map)` of a relation, with `map: w_gen -> degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<F: Field> {
    pub gen: usize,
    pub map: Morphism,
    pub coeff: F::Elem,
}

/// An element of the free module `⊕ M(w_j)` at a single degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation<F: Field> {
    pub degree: MultiIndex,
    pub terms: Vec<Term<F>>,
}

/// Generators and relations defining `V = P / <relations>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation<F: Field> {
    pub m: usize,
    pub generators: Vec<MultiIndex>,
    pub relations: Vec<Relation<F>>,
}

impl<F: Field> Presentation<F> {
    /// Largest generator degree, `-1` without generators.
    pub fn d(&self) -> i64 {
        self.generators.iter().map(|w| w.total() as i64).max().unwrap_or(-1)
    }

    /// Largest relation degree, `-1` without relations.
    pub fn r(&self) -> i64 {
        self.relations.iter().map(|x| x.degree.total() as i64).max().unwrap_or(-1)
    }

    /// Structural checks: arities, generator indices, term degrees.
    pub fn check(&self) -> Result<()> {
        if self.m == 0 {
            return Err(input_err!("m must be at least 1"));
        }
        for (g, w) in self.generators.iter().enumerate() {
            if w.m() != self.m {
                return Err(input_err!("generators[{g}]: {w} does not have m = {}", self.m));
            }
        }
        for (k, rel) in self.relations.iter().enumerate() {
            if rel.degree.m() != self.m {
                return Err(input_err!("relations[{k}].degree: {} does not have m = {}", rel.degree, self.m));
            }
            for (t, term) in rel.terms.iter().enumerate() {
                let at = format!("relations[{k}].terms[{t}]");
                let w = self
                    .generators
                    .get(term.gen)
                    .ok_or_else(|| input_err!("{at}: generator {} does not exist", term.gen))?;
                if term.map.source() != w {
                    return Err(input_err!("{at}: injections start at {} but generator has degree {w}", term.map.source()));
                }
                if term.map.target() != &rel.degree {
                    return Err(input_err!("{at}: injections end at {}, relation degree is {}", term.map.target(), rel.degree));
                }
            }
        }
        Ok(())
    }

    fn relation_vector(&self, field: &F, p: &FreeModule, rel: &Relation<F>) -> Vec<F::Elem> {
        let mut v = vec![field.zero(); p.dim(&rel.degree)];
        for t in &rel.terms {
            let k = p.index(t.gen, &t.map);
            v[k] = field.add(&v[k], &t.coeff);
        }
        v
    }
}

/// The quotient of a truncated module by a degreewise subspace family that
/// is closed under the generators, with induced actions.
pub(crate) fn quotient_module<F: Field>(
    v: &TruncatedModule<F>,
    subs: &[Subspace<F>],
) -> Result<(TruncatedModule<F>, Vec<Quotient<F>>)> {
    let f = v.field();
    let w = v.window().clone();
    let quots: Vec<Quotient<F>> = subs.par_iter().map(quotient_with_section).collect();
    let induced = |q_to: &Quotient<F>, a: &Matrix<F>, q_from: &Quotient<F>| -> Matrix<F> {
        q_to.projection.mul(&a.mul(&q_from.section).unwrap()).unwrap()
    };
    let data = w
        .degrees()
        .par_iter()
        .enumerate()
        .map(|(k, n)| {
            let d = &v.degree_data()[k];
            DegreeData {
                dim: quots[k].dim,
                incl: (0..w.m())
                    .map(|i| {
                        d.incl[i].as_ref().map(|a| {
                            let u = w.index_of(&n.plus_unit(i)).unwrap();
                            induced(&quots[u], a, &quots[k])
                        })
                    })
                    .collect(),
                transp: d
                    .transp
                    .iter()
                    .map(|ts| ts.iter().map(|a| induced(&quots[k], a, &quots[k])).collect())
                    .collect(),
            }
        })
        .collect();
    Ok((TruncatedModule::from_parts(f, w, data)?, quots))
}

/// A degreewise subspace family closed under the generators, as a module in
/// its own right (coordinates in the stored bases).
pub(crate) fn sub_module<F: Field>(v: &TruncatedModule<F>, subs: &[Subspace<F>]) -> Result<TruncatedModule<F>> {
    let f = v.field();
    let w = v.window().clone();
    let restrict = |a: &Matrix<F>, from: &Subspace<F>, to: &Subspace<F>, what: &str| -> Result<Matrix<F>> {
        let cols = from
            .basis()
            .iter()
            .map(|b| {
                to.coordinates(&a.mul_vec(b))
                    .ok_or_else(|| internal_err!("submodule is not closed under {what}"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(f, to.dim(), &cols))
    };
    let data = w
        .degrees()
        .par_iter()
        .enumerate()
        .map(|(k, n)| {
            let d = &v.degree_data()[k];
            let incl = (0..w.m())
                .map(|i| {
                    d.incl[i]
                        .as_ref()
                        .map(|a| {
                            let u = w.index_of(&n.plus_unit(i)).unwrap();
                            restrict(a, &subs[k], &subs[u], &format!("inclusion {i} at {n}"))
                        })
                        .transpose()
                })
                .collect::<Result<Vec<_>>>()?;
            let transp = d
                .transp
                .iter()
                .enumerate()
                .map(|(i, ts)| {
                    ts.iter()
                        .enumerate()
                        .map(|(j, a)| restrict(a, &subs[k], &subs[k], &format!("transposition ({i}, {j}) at {n}")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(DegreeData { dim: subs[k].dim(), incl, transp })
        })
        .collect::<Result<Vec<_>>>()?;
    TruncatedModule::from_parts(f, w, data)
}

/// Errors unless every generator maps each subspace into its target subspace.
pub(crate) fn check_closed<F: Field>(v: &TruncatedModule<F>, subs: &[Subspace<F>], what: &str) -> Result<()> {
    let w = v.window();
    for (k, n) in w.degrees().iter().enumerate() {
        let d = &v.degree_data()[k];
        for i in 0..w.m() {
            if let Some(a) = &d.incl[i] {
                let u = w.index_of(&n.plus_unit(i)).unwrap();
                if subs[k].basis().iter().any(|b| !subs[u].contains(&a.mul_vec(b))) {
                    return Err(internal_err!("{what} is not closed under inclusion {i} at {n}"));
                }
            }
            for (j, a) in d.transp[i].iter().enumerate() {
                if subs[k].basis().iter().any(|b| !subs[k].contains(&a.mul_vec(b))) {
                    return Err(internal_err!("{what} is not closed under transposition ({i}, {j}) at {n}"));
                }
            }
        }
    }
    Ok(())
}

/// The FI^m-submodule generated by degreewise seeds, evaluated in order of
/// increasing total degree: images of the previous degrees under one-step
/// inclusions plus the seeds, closed under the automorphisms.
pub(crate) fn generated_submodule<F: Field>(
    v: &TruncatedModule<F>,
    seeds: &[Vec<Vec<F::Elem>>],
) -> Result<Vec<Subspace<F>>> {
    let f = v.field();
    let w = v.window();
    let mut subs: Vec<Option<Subspace<F>>> = vec![None; w.degrees().len()];
    for total in 0..=w.top() {
        let level = degrees_of_total(w.m(), total);
        let computed: Vec<(usize, Subspace<F>)> = level
            .par_iter()
            .map(|n| {
                let k = w.index_of(n).unwrap();
                let mut seed = seeds[k].clone();
                for i in 0..w.m() {
                    if let Some(prev) = n.minus_unit(i) {
                        let inc = v.inclusion(&prev, i)?;
                        let below = subs[w.index_of(&prev).unwrap()].as_ref().unwrap();
                        seed.extend(below.basis().iter().map(|b| inc.mul_vec(b)));
                    }
                }
                let ops = v.automorphism_generators(n);
                Ok((k, span_closure(f, v.dim(n), seed, &ops)?))
            })
            .collect::<Result<_>>()?;
        for (k, s) in computed {
            subs[k] = Some(s);
        }
    }
    Ok(subs.into_iter().map(Option::unwrap).collect())
}

/// Builds `V = P / R` on a window together with the projection `P -> V`.
pub fn from_presentation<F: Field>(
    pres: &Presentation<F>,
    window: Arc<Window>,
    field: &F,
) -> Result<(TruncatedModule<F>, ModuleMap<F>)> {
    pres.check()?;
    if pres.m != window.m() {
        return Err(input_err!("presentation has m = {}, window has m = {}", pres.m, window.m()));
    }
    for (k, rel) in pres.relations.iter().enumerate() {
        if !window.contains(&rel.degree) {
            return Err(input_err!("relations[{k}]: degree {} outside window N = {}", rel.degree, window.top()));
        }
    }
    let layout = FreeModule::new(pres.generators.clone(), window.clone())?;
    let p = layout.to_module(field)?;
    let mut seeds = vec![Vec::new(); window.degrees().len()];
    for rel in &pres.relations {
        seeds[window.index_of(&rel.degree).unwrap()].push(pres.relation_vector(field, &layout, rel));
    }
    let subs = generated_submodule(&p, &seeds)?;
    let (v, quots) = quotient_module(&p, &subs)?;
    let cover = ModuleMap { window, maps: quots.into_iter().map(|q| q.projection).collect() };
    Ok((v, cover))
}

/// Spreads `total` units over `m` coordinates uniformly at random.
fn random_composition<R: Rng>(rng: &mut R, m: usize, total: usize) -> Vec<usize> {
    let mut c = vec![0; m];
    for _ in 0..total {
        c[rng.gen_range(0..m)] += 1;
    }
    c
}

fn random_coeff<F: Field, R: Rng>(field: &F, rng: &mut R) -> F::Elem {
    if rng.gen_bool(0.5) {
        if rng.gen_bool(0.5) {
            field.one()
        } else {
            field.neg(&field.one())
        }
    } else {
        field.random_nonzero(rng)
    }
}

/// A seeded random presentation generated in degree `<= d` and related in
/// degree `<= r`, with the first generator at total degree `d` and the first
/// relation at total degree `r`.
pub fn random_presentation<F: Field>(
    field: &F,
    m: usize,
    d: i64,
    r: i64,
    gen_count: usize,
    rel_count: usize,
    seed: u64,
) -> Result<Presentation<F>> {
    if m == 0 {
        return Err(input_err!("m must be at least 1"));
    }
    if d < -1 || r < -1 {
        return Err(input_err!("d and r must be at least -1 (got d = {d}, r = {r})"));
    }
    if d == -1 && gen_count > 0 {
        return Err(input_err!("d = -1 admits no generators, got gen_count = {gen_count}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generators = Vec::with_capacity(gen_count);
    for g in 0..gen_count {
        let t = if g == 0 { d as usize } else { rng.gen_range(0..=d as usize) };
        generators.push(MultiIndex::new(random_composition(&mut rng, m, t)));
    }
    let anchors: Vec<usize> = (0..gen_count).filter(|&g| generators[g].total() as i64 <= r).collect();
    if rel_count > 0 && anchors.is_empty() {
        return Err(input_err!(
            "no generator has degree <= r = {r}, so {rel_count} relations cannot be placed"
        ));
    }
    let mut relations = Vec::with_capacity(rel_count);
    for k in 0..rel_count {
        let anchor = anchors[rng.gen_range(0..anchors.len())];
        let base = &generators[anchor];
        let t = if k == 0 { r as usize } else { rng.gen_range(base.total()..=r as usize) };
        let degree = base.add(&MultiIndex::new(random_composition(&mut rng, m, t - base.total())));
        let eligible: Vec<usize> = (0..gen_count).filter(|&g| generators[g].le(&degree)).collect();
        let want = rng.gen_range(1..=3);
        let mut terms: Vec<Term<F>> = Vec::new();
        for attempt in 0..want {
            let gen = if attempt == 0 { anchor } else { eligible[rng.gen_range(0..eligible.len())] };
            let w = &generators[gen];
            let map = Morphism::lex_unrank(w, &degree, rng.gen_range(0..hom_count(w, &degree)));
            let coeff = random_coeff(field, &mut rng);
            if !terms.iter().any(|t| t.gen == gen && t.map == map) {
                terms.push(Term { gen, map, coeff });
            }
        }
        relations.push(Relation { degree, terms });
    }
    Ok(Presentation { m, generators, relations })
}
