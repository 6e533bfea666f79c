#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use fimreg::fim::{Injection, Morphism, MultiIndex};
use fimreg::linalg::Field;
use fimreg::module::{from_presentation, random_presentation, Presentation, TruncatedModule, Window};

pub fn idx(c: &[usize]) -> MultiIndex {
    MultiIndex::new(c.to_vec())
}

pub fn window(m: usize, top: usize) -> Arc<Window> {
    Window::new(m, top)
}

/// Seeded random presentation with three generators and two relations,
/// materialized on the window `top`.
pub fn instance<F: Field>(
    f: &F,
    m: usize,
    d: i64,
    r: i64,
    top: usize,
    seed: u64,
) -> (TruncatedModule<F>, Presentation<F>) {
    let pres = random_presentation(f, m, d, r, 3, 2, seed).expect("presentation");
    let (v, _) = from_presentation(&pres, window(m, top), f).expect("materialize");
    (v, pres)
}

/// Factorial-free count of injections `[a] -> [b]`: choose the image of each
/// point in turn.
pub fn naive_hom_count(a: &[usize], b: &[usize]) -> u128 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| if x > y { 0 } else { (0..x).map(|k| (y - k) as u128).product::<u128>() })
        .product()
}

/// Builds a morphism from per-coordinate images, as a proptest helper: the
/// `picks[i][t]` choose among the points not yet used.
pub fn morphism_from_picks(a: &[usize], b: &[usize], picks: &[Vec<usize>]) -> Morphism {
    let comps = a
        .iter()
        .zip(b)
        .zip(picks)
        .map(|((&x, &y), p)| {
            let mut free: Vec<usize> = (0..y).collect();
            let images = (0..x).map(|t| free.remove(p[t] % free.len())).collect();
            Injection::new(y, images).expect("injection")
        })
        .collect();
    Morphism::new(comps)
}

/// The quotient `V / V_{>cut}`: same data up to total degree `cut`, zero above.
pub fn cut_above<F: Field>(v: &TruncatedModule<F>, cut: usize) -> TruncatedModule<F> {
    use fimreg::linalg::Matrix;
    use fimreg::module::DegreeData;
    let f = v.field();
    let degrees = v.window().degrees();
    let dim = |n: &MultiIndex| if n.total() > cut { 0 } else { v.dim(n) };
    let data = degrees
        .iter()
        .zip(v.degree_data())
        .map(|(n, d)| {
            if n.total() > cut {
                DegreeData {
                    dim: 0,
                    incl: d.incl.iter().map(|a| a.as_ref().map(|_| Matrix::zeros(f, 0, 0))).collect(),
                    transp: d.transp.iter().map(|ts| ts.iter().map(|_| Matrix::zeros(f, 0, 0)).collect()).collect(),
                }
            } else if n.total() == cut {
                let incl = (0..n.m())
                    .map(|i| d.incl[i].as_ref().map(|_| Matrix::zeros(f, dim(&n.plus_unit(i)), d.dim)))
                    .collect();
                DegreeData { dim: d.dim, incl, transp: d.transp.clone() }
            } else {
                d.clone()
            }
        })
        .collect();
    TruncatedModule::from_parts(f, v.window().clone(), data).expect("cut module")
}

/// Largest first argument the reference evaluator will iterate up to.
pub const STEPS: i64 = 1_000_000;

pub fn rho1(d: &BigInt, r: &BigInt) -> BigInt {
    if *d == BigInt::from(-1) {
        return BigInt::from(-1);
    }
    std::cmp::max(d.clone(), d + r - 1i64)
}

/// `(ρ_m(d, r), ρ′, ρ″)` by a bottom-up loop over `d` with no caching, or
/// `None` when an intermediate first argument exceeds [`STEPS`].
pub fn reference(m: usize, d: &BigInt, r: &BigInt) -> Option<(BigInt, Option<BigInt>, Option<BigInt>)> {
    if m == 1 {
        return Some((rho1(d, r), None, None));
    }
    let top = d.to_i64().filter(|&x| x <= STEPS)?;
    let mut prev = BigInt::from(-1);
    let mut primes = (None, None);
    for k in 0..=top {
        let kb = BigInt::from(k);
        let p1 = std::cmp::max(&prev + 2i64, r.clone());
        let p2 = std::cmp::max(&prev + 3i64, 4i64 + rho1(&kb, r) + reference(m - 1, &kb, r)?.0);
        let inner = reference(m - 1, &p1, &p2)?.0;
        let cur = std::cmp::max(&p1 + inner, &prev + 1i64);
        primes = (Some(p1), Some(p2));
        prev = cur;
    }
    Some((prev, primes.0, primes.1))
}
