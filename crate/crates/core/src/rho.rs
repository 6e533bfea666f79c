//! The regularity bound `ρ_m(d, r)` and its auxiliaries `ρ′`, `ρ″`.
//!
//! Values grow like iterated exponentials in `m`, so they are kept as
//! [`RhoValue`]s: an exact integer, or a nonnegative integer combination of
//! opaque atoms plus an offset. An atom stands for `ρ_k(D, R)` whose
//! recursion in `D` is too deep to run (`D` symbolic or above
//! [`DEPTH_LIMIT`]); it carries the lower bound `ρ_k(D, R) >= D`. Every
//! `max` the recursion needs is decided from these lower bounds; an
//! undecidable comparison is an internal error rather than a guess.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{input_err, internal_err, Result};

/// Largest concrete `d` for which `ρ_k(d, r)`, `k >= 2`, is evaluated by
/// running its recursion.
pub const DEPTH_LIMIT: u64 = 4096;

/// An integer, possibly given symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RhoValue {
    /// Atom id to its coefficient; coefficients are nonzero.
    lin: BTreeMap<usize, BigInt>,
    offset: BigInt,
}

impl RhoValue {
    pub fn int(x: impl Into<BigInt>) -> Self {
        RhoValue { lin: BTreeMap::new(), offset: x.into() }
    }

    fn atom(id: usize) -> Self {
        RhoValue { lin: BTreeMap::from([(id, BigInt::from(1))]), offset: BigInt::zero() }
    }

    pub fn exact(&self) -> Option<&BigInt> {
        self.lin.is_empty().then_some(&self.offset)
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.exact().and_then(|x| x.to_i64())
    }

    pub fn is_symbolic(&self) -> bool {
        !self.lin.is_empty()
    }

    pub fn add(&self, other: &RhoValue) -> RhoValue {
        let mut lin = self.lin.clone();
        for (k, c) in &other.lin {
            let e = lin.entry(*k).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                lin.remove(k);
            }
        }
        RhoValue { lin, offset: &self.offset + &other.offset }
    }

    pub fn plus(&self, x: i64) -> RhoValue {
        RhoValue { lin: self.lin.clone(), offset: &self.offset + x }
    }

    fn neg(&self) -> RhoValue {
        RhoValue { lin: self.lin.iter().map(|(k, c)| (*k, -c)).collect(), offset: -&self.offset }
    }

    pub fn sub(&self, other: &RhoValue) -> RhoValue {
        self.add(&other.neg())
    }

    /// Short form: exact values with more than 40 digits are abbreviated.
    pub fn short(&self) -> String {
        let s = self.to_string();
        if s.len() > 40 && self.exact().is_some() {
            let digits = s.trim_start_matches('-').len();
            format!("{}...({digits} digits)", &s[..12])
        } else {
            s
        }
    }
}

impl fmt::Display for RhoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lin.is_empty() {
            return write!(f, "{}", self.offset);
        }
        for (n, (k, c)) in self.lin.iter().enumerate() {
            let mag = c.abs();
            let coeff = if mag == BigInt::from(1) { String::new() } else { format!("{mag}*") };
            match (n, c.is_negative()) {
                (0, false) => write!(f, "{coeff}A{k}")?,
                (0, true) => write!(f, "-{coeff}A{k}")?,
                (_, neg) => write!(f, " {} {coeff}A{k}", if neg { "-" } else { "+" })?,
            }
        }
        if !self.offset.is_zero() {
            let sign = if self.offset.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.offset.abs())?;
        }
        Ok(())
    }
}

/// `A{id} = ρ_m(d, r)` with `A{id} >= lower`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Atom {
    pub id: usize,
    pub m: usize,
    pub d: String,
    pub r: String,
    #[serde(serialize_with = "big_as_string")]
    pub lower: BigInt,
}

fn big_as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Memoized evaluator. Not shared between threads while evaluating.
#[derive(Default)]
pub struct RhoEngine {
    memo: HashMap<(usize, BigInt, RhoValue), RhoValue>,
    atoms: Vec<Atom>,
    atom_index: HashMap<(usize, RhoValue, RhoValue), usize>,
}

impl RhoEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Lower bound of a value whose atom coefficients are all nonnegative.
    fn lower(&self, v: &RhoValue) -> Option<BigInt> {
        let mut acc = v.offset.clone();
        for (k, c) in &v.lin {
            if c.is_negative() {
                return None;
            }
            acc += c * &self.atoms[*k].lower;
        }
        Some(acc)
    }

    /// `Some(a >= b)` when decidable from the atom bounds.
    pub fn ge(&self, a: &RhoValue, b: &RhoValue) -> Option<bool> {
        let diff = a.sub(b);
        if let Some(x) = diff.exact() {
            return Some(!x.is_negative());
        }
        if self.lower(&diff).is_some_and(|l| !l.is_negative()) {
            return Some(true);
        }
        // b - a >= 1 proves a < b.
        if self.lower(&diff.neg().plus(-1)).is_some_and(|l| !l.is_negative()) {
            return Some(false);
        }
        None
    }

    pub fn gt(&self, a: &RhoValue, b: &RhoValue) -> Option<bool> {
        self.ge(a, &b.plus(1))
    }

    fn max(&self, a: RhoValue, b: RhoValue) -> Result<RhoValue> {
        match self.ge(&a, &b) {
            Some(true) => Ok(a),
            Some(false) => Ok(b),
            None => Err(internal_err!("cannot order {a} and {b}")),
        }
    }

    fn check_key(m: usize, d: i64, r: i64) -> Result<()> {
        if m == 0 {
            return Err(input_err!("m must be at least 1"));
        }
        if d < -1 || r < -1 {
            return Err(input_err!("d = {d}, r = {r}: both must be at least -1"));
        }
        Ok(())
    }

    pub fn rho(&mut self, m: usize, d: i64, r: i64) -> Result<RhoValue> {
        Self::check_key(m, d, r)?;
        self.rho_v(m, &RhoValue::int(d), &RhoValue::int(r))
    }

    pub fn rho_prime(&mut self, m: usize, d: i64, r: i64) -> Result<RhoValue> {
        self.check_aux(m, d, r)?;
        self.prime(m, &BigInt::from(d), &RhoValue::int(r))
    }

    pub fn rho_dprime(&mut self, m: usize, d: i64, r: i64) -> Result<RhoValue> {
        self.check_aux(m, d, r)?;
        self.dprime(m, &BigInt::from(d), &RhoValue::int(r))
    }

    fn check_aux(&self, m: usize, d: i64, r: i64) -> Result<()> {
        Self::check_key(m, d, r)?;
        if d < 0 {
            return Err(input_err!("rho' and rho'' are defined for d >= 0, got d = {d}"));
        }
        if m < 2 {
            return Err(input_err!("rho' and rho'' are defined for m >= 2, got m = {m}"));
        }
        Ok(())
    }

    fn rho1(&self, d: &RhoValue, r: &RhoValue) -> Result<RhoValue> {
        if d.exact().is_some_and(|x| *x == BigInt::from(-1)) {
            return Ok(RhoValue::int(-1));
        }
        self.max(d.clone(), d.add(r).plus(-1))
    }

    fn rho_v(&mut self, m: usize, d: &RhoValue, r: &RhoValue) -> Result<RhoValue> {
        if m == 1 {
            return self.rho1(d, r);
        }
        match (d.exact(), r.is_symbolic()) {
            (Some(x), _) if *x == BigInt::from(-1) => Ok(RhoValue::int(-1)),
            (Some(x), false) if *x <= BigInt::from(DEPTH_LIMIT) => {
                if let Some(v) = self.memo.get(&(m, x.clone(), r.clone())) {
                    return Ok(v.clone());
                }
                let x = x.clone();
                let mut j = BigInt::zero();
                let mut value = RhoValue::int(-1);
                while j <= x {
                    value = self.rho_step(m, &j, r)?;
                    j += 1;
                }
                Ok(value)
            }
            _ => Ok(self.make_atom(m, d, r)),
        }
    }

    fn make_atom(&mut self, m: usize, d: &RhoValue, r: &RhoValue) -> RhoValue {
        let key = (m, d.clone(), r.clone());
        if let Some(&id) = self.atom_index.get(&key) {
            return RhoValue::atom(id);
        }
        let id = self.atoms.len();
        let lower = self.atom_lower(m, d, r);
        self.atoms.push(Atom { id, m, d: d.short(), r: r.short(), lower });
        self.atom_index.insert(key, id);
        RhoValue::atom(id)
    }

    /// Lower bound for `ρ_m(d, r)` from the outer max alone: with `l` the
    /// smaller of `lower(d)` and the depth limit, `ρ_m(d, r) >= ρ_m(l, r) + (d - l)`.
    /// `ρ_m(l, r)` is exact for `m = 2` and concrete `r`; otherwise it is
    /// bounded below by iterating `ρ_m(j, r) >= 2 ρ′_m(j, r)`, which uses
    /// only `ρ_{m-1}(x, y) >= x`.
    fn atom_lower(&mut self, m: usize, d: &RhoValue, r: &RhoValue) -> BigInt {
        let minus_one = BigInt::from(-1);
        let Some(dl) = self.lower(d) else { return minus_one };
        if dl < BigInt::zero() {
            return minus_one;
        }
        let l = dl.clone().min(BigInt::from(DEPTH_LIMIT));
        let base = match (m, r.exact()) {
            (2, Some(_)) => self.rho_v(2, &RhoValue::int(l.clone()), r).ok().and_then(|v| v.exact().cloned()),
            _ => None,
        };
        let base = base.unwrap_or_else(|| {
            let rl = self.lower(r).unwrap_or_else(|| minus_one.clone()).max(minus_one.clone());
            let mut prev = minus_one.clone();
            let mut j = BigInt::zero();
            while j <= l {
                let p1 = std::cmp::max(&prev + BigInt::from(2), rl.clone());
                prev = std::cmp::max(&p1 * BigInt::from(2), &prev + BigInt::from(1));
                j += 1;
            }
            prev
        });
        (base + (&dl - &l)).max(dl)
    }

    /// `ρ_m(d, r)` for concrete `d >= 0`, `m >= 2`, assuming `ρ_m(d-1, r)` is
    /// memoized or `d = 0`.
    fn rho_step(&mut self, m: usize, d: &BigInt, r: &RhoValue) -> Result<RhoValue> {
        let key = (m, d.clone(), r.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let prev = self.prev(m, d, r)?;
        let p1 = self.prime(m, d, r)?;
        let p2 = self.dprime(m, d, r)?;
        let inner = self.rho_v(m - 1, &p1, &p2)?;
        let value = self.max(p1.add(&inner), prev.plus(1))?;
        self.memo.insert(key, value.clone());
        Ok(value)
    }

    fn prev(&mut self, m: usize, d: &BigInt, r: &RhoValue) -> Result<RhoValue> {
        if d.is_zero() {
            return Ok(RhoValue::int(-1));
        }
        let key = (m, d - 1, r.clone());
        match self.memo.get(&key) {
            Some(v) => Ok(v.clone()),
            None => self.rho_v(m, &RhoValue::int(d - 1), r),
        }
    }

    fn prime(&mut self, m: usize, d: &BigInt, r: &RhoValue) -> Result<RhoValue> {
        let prev = self.prev(m, d, r)?;
        self.max(prev.plus(2), r.clone())
    }

    fn dprime(&mut self, m: usize, d: &BigInt, r: &RhoValue) -> Result<RhoValue> {
        let prev = self.prev(m, d, r)?;
        let dv = RhoValue::int(d.clone());
        let a = self.rho1(&dv, r)?;
        let b = self.rho_v(m - 1, &dv, r)?;
        self.max(prev.plus(3), a.add(&b).plus(4))
    }
}

/// `ρ_m(d, r)` with a fresh evaluator.
pub fn rho(m: usize, d: i64, r: i64) -> Result<RhoValue> {
    RhoEngine::new().rho(m, d, r)
}

pub fn rho_prime(m: usize, d: i64, r: i64) -> Result<RhoValue> {
    RhoEngine::new().rho_prime(m, d, r)
}

pub fn rho_dprime(m: usize, d: i64, r: i64) -> Result<RhoValue> {
    RhoEngine::new().rho_dprime(m, d, r)
}

/// The `m = 1` bound `t_i(V) <= i + d + r - 1`, stated for `i >= 1`.
pub fn ce_bound(d: i64, r: i64, i: i64) -> Result<i64> {
    if i < 1 {
        return Err(input_err!("the bound is stated for i >= 1, got i = {i}"));
    }
    Ok(i + d + r - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoRow {
    pub m: usize,
    pub d: i64,
    pub r: i64,
    pub rho: String,
    pub rho_prime: Option<String>,
    pub rho_dprime: Option<String>,
}

/// The grid `1 <= m <= m_max`, `-1 <= d <= d_max`, `-1 <= r <= r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoTable {
    pub rows: Vec<RhoRow>,
    pub atoms: Vec<Atom>,
    /// `(m, d, r)` with `ρ″ <= ρ′`.
    pub dprime_not_above_prime: Vec<(usize, i64, i64)>,
    /// `(m, d, r)` where `ρ_m(d, r) < ρ_m(d-1, r)` or `< ρ_m(d, r-1)`.
    pub monotonicity_failures: Vec<(usize, i64, i64)>,
    /// Comparisons the atom bounds cannot decide.
    pub undecided: Vec<(usize, i64, i64)>,
}

impl RhoTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,d,r,rho,rho_prime,rho_dprime\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.m,
                row.d,
                row.r,
                row.rho,
                row.rho_prime.as_deref().unwrap_or(""),
                row.rho_dprime.as_deref().unwrap_or("")
            ));
        }
        for a in &self.atoms {
            out.push_str(&format!("# A{} = rho_{}({}, {}) >= {}\n", a.id, a.m, a.d, a.r, a.lower));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

pub fn rho_table(m_max: usize, d_max: i64, r_max: i64) -> Result<RhoTable> {
    if m_max == 0 || d_max < -1 || r_max < -1 {
        return Err(input_err!("table bounds: m >= 1, d, r >= -1"));
    }
    let mut e = RhoEngine::new();
    let mut rows = Vec::new();
    let mut values: HashMap<(usize, i64, i64), RhoValue> = HashMap::new();
    let mut dprime_not_above_prime = Vec::new();
    let mut monotonicity_failures = Vec::new();
    let mut undecided = Vec::new();
    for m in 1..=m_max {
        for d in -1..=d_max {
            for r in -1..=r_max {
                let v = e.rho(m, d, r)?;
                let (p1, p2) = if m >= 2 && d >= 0 {
                    let p1 = e.rho_prime(m, d, r)?;
                    let p2 = e.rho_dprime(m, d, r)?;
                    match e.gt(&p2, &p1) {
                        Some(true) => {}
                        Some(false) => dprime_not_above_prime.push((m, d, r)),
                        None => undecided.push((m, d, r)),
                    }
                    (Some(p1.to_string()), Some(p2.to_string()))
                } else {
                    (None, None)
                };
                for below in [(m, d - 1, r), (m, d, r - 1)] {
                    if let Some(u) = values.get(&below) {
                        match e.ge(&v, u) {
                            Some(true) => {}
                            Some(false) => monotonicity_failures.push((m, d, r)),
                            None => undecided.push((m, d, r)),
                        }
                    }
                }
                rows.push(RhoRow { m, d, r, rho: v.to_string(), rho_prime: p1, rho_dprime: p2 });
                values.insert((m, d, r), v);
            }
        }
    }
    undecided.dedup();
    Ok(RhoTable { rows, atoms: e.atoms().to_vec(), dprime_not_above_prime, monotonicity_failures, undecided })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(rho(1, 2, 2).unwrap().to_i64(), Some(3));
        assert_eq!(rho(2, 0, 0).unwrap().to_i64(), Some(5));
        assert_eq!(rho_prime(2, 0, 0).unwrap().to_i64(), Some(1));
        assert_eq!(rho_dprime(2, 0, 0).unwrap().to_i64(), Some(4));
        assert_eq!(rho(2, 1, 1).unwrap().to_i64(), Some(21));
        assert_eq!(rho(4, -1, 7).unwrap().to_i64(), Some(-1));
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(rho(0, 0, 0).is_err());
        assert!(rho(2, -2, 0).is_err());
        assert!(rho_prime(2, -1, 0).is_err());
        assert!(rho_dprime(1, 0, 0).is_err());
        assert!(ce_bound(1, 1, 0).is_err());
        assert_eq!(ce_bound(0, -1, 1).unwrap(), -1);
    }

    #[test]
    fn symbolic_values_stay_ordered() {
        let mut e = RhoEngine::new();
        let a = e.rho(3, 3, 2).unwrap();
        assert!(a.is_symbolic());
        let b = e.rho(3, 2, 2).unwrap();
        assert_eq!(e.gt(&a, &b), Some(true));
        let p1 = e.rho_prime(3, 4, 2).unwrap();
        let p2 = e.rho_dprime(3, 4, 2).unwrap();
        assert_eq!(e.gt(&p2, &p1), Some(true));
    }

    #[test]
    fn display_forms() {
        assert_eq!(RhoValue::int(7).to_string(), "7");
        let v = RhoValue::atom(0).add(&RhoValue::atom(0)).add(&RhoValue::atom(2)).plus(-3);
        assert_eq!(v.to_string(), "2*A0 + A2 - 3");
    }
}
