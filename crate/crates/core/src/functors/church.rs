use super::{epsilon, kd_functors, shift};
use crate::checks::{CheckOutcome, CheckViolation};
use crate::error::Result;
use crate::homology::{h0, tilde_subspace};
use crate::linalg::{Field, Subspace};
use crate::module::TruncatedModule;

/// Two consequences of the shift/cokernel interplay, checked on the window
/// `N - 1`:
///
/// 1. `Ṽ_{n+e_i} = (Σ_i V)~_n + ε_i(V_n)` as subspaces of `V_{n+e_i}`;
/// 2. `dim H_0(D_i V)_n = dim H_0(V)_{n+e_i}`.
pub fn church_lemma_check<F: Field>(v: &TruncatedModule<F>, i: usize) -> Result<CheckOutcome> {
    let sigma = shift(v, i)?;
    let eps = epsilon(v, i)?;
    let d = kd_functors(v, i)?.d;
    let hv = h0(v)?;
    let hd = h0(&d)?;
    let mut out = CheckOutcome::default();
    for (k, n) in sigma.window().degrees().iter().enumerate() {
        out.degrees_tested += 1;
        let up = n.plus_unit(i);
        let lhs = tilde_subspace(v, &up)?;
        let e = &eps.maps[k];
        let rhs = tilde_subspace(&sigma, n)?.sum(&Subspace::spanned_by(
            v.field(),
            sigma.dim(n),
            (0..e.cols()).map(|c| e.column(c)),
        ));
        if !lhs.same_as(&rhs) {
            out.violations.push(CheckViolation::new(
                n,
                None,
                "tilde-of-shift",
                format!("dim {}", lhs.dim()),
                format!("dim {} (different subspace)", rhs.dim()),
            ));
        }
        let (a, b) = (hd.dim(n), hv.dim(&up));
        if a != b {
            out.violations.push(CheckViolation::new(n, Some(0), "h0-of-cokernel", a, b));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::module::{from_presentation, random_presentation, Window};

    #[test]
    fn holds_on_random_instances() {
        let f = PrimeField::new(101).unwrap();
        for seed in 0..4 {
            let pres = random_presentation(&f, 2, 2, 2, 2, 1, seed).unwrap();
            let (v, _) = from_presentation(&pres, Window::new(2, 4), &f).unwrap();
            for i in 0..2 {
                let out = church_lemma_check(&v, i).unwrap();
                assert!(out.violations.is_empty(), "seed {seed}: {:?}", out.violations);
                assert_eq!(out.degrees_tested, 10);
            }
        }
    }
}
