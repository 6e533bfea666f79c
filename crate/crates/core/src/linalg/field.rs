use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input_err, Result};

/// Which coefficient field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FieldConfig {
    #[serde(rename = "prime-field")]
    Prime { p: u32 },
    #[serde(rename = "rationals")]
    Rationals,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::Prime { p: 101 }
    }
}

impl FieldConfig {
    /// Parses `p=101`, `101` or `rationals` (the `FIMREG_FIELD` syntax).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rationals") || s == "Q" {
            return Ok(FieldConfig::Rationals);
        }
        let digits = s.strip_prefix("p=").unwrap_or(s);
        let p: u32 = digits
            .parse()
            .map_err(|_| input_err!("cannot parse field '{s}' (expected p=<prime> or rationals)"))?;
        let cfg = FieldConfig::Prime { p };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        if let FieldConfig::Prime { p } = *self {
            if !is_prime(p) || p >= 1 << 31 {
                return Err(input_err!("{p} is not a prime below 2^31"));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            FieldConfig::Prime { p } => format!("p={p}"),
            FieldConfig::Rationals => "rationals".to_string(),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact field arithmetic. Implementations are small context values (the
/// prime, or nothing for the rationals) that operate on plain elements.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Debug + Send + Sync + 'static;

    fn config(&self) -> FieldConfig;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    fn random_nonzero<R: Rng>(&self, rng: &mut R) -> Self::Elem;

    /// `dst += c * src`.
    fn axpy(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = self.add(d, &self.mul(c, s));
        }
    }

    fn scale(&self, dst: &mut [Self::Elem], c: &Self::Elem) {
        for d in dst.iter_mut() {
            *d = self.mul(c, d);
        }
    }
}

/// `F_p` for a prime `p < 2^31`, elements stored reduced in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        FieldConfig::Prime { p }.check()?;
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn config(&self) -> FieldConfig {
        FieldConfig::Prime { p: self.p }
    }
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(*a as u64 * *b as u64)
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        // a^(p-2)
        let mut base = *a as u64;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn parse(&self, s: &str) -> Result<u32> {
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let n = self.parse(num)?;
            let d = self.parse(den)?;
            if d == 0 {
                return Err(input_err!("zero denominator in scalar '{s}'"));
            }
            return Ok(self.mul(&n, &self.inv(&d)));
        }
        let v: BigInt = t.parse().map_err(|_| input_err!("cannot parse scalar '{s}'"))?;
        let r = ((v % BigInt::from(self.p)) + BigInt::from(self.p)) % BigInt::from(self.p);
        Ok(r.try_into().expect("reduced below p"))
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn random_nonzero<R: Rng>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.p)
    }

    fn axpy(&self, dst: &mut [u32], c: &u32, src: &[u32]) {
        let c = *c as u64;
        if c == 0 {
            return;
        }
        let p = self.p as u64;
        for (d, s) in dst.iter_mut().zip(src) {
            if *s != 0 {
                *d = ((*d as u64 + c * *s as u64) % p) as u32;
            }
        }
    }

    fn scale(&self, dst: &mut [u32], c: &u32) {
        let c = *c as u64;
        let p = self.p as u64;
        for d in dst.iter_mut() {
            *d = ((*d as u64 * c) % p) as u32;
        }
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn config(&self) -> FieldConfig {
        FieldConfig::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = num.parse().map_err(|_| input_err!("cannot parse scalar '{s}'"))?;
        let d: BigInt = den.parse().map_err(|_| input_err!("cannot parse scalar '{s}'"))?;
        if d.is_zero() {
            return Err(input_err!("zero denominator in scalar '{s}'"));
        }
        Ok(BigRational::new(n, d))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn random_nonzero<R: Rng>(&self, rng: &mut R) -> BigRational {
        loop {
            let n: i64 = rng.gen_range(-5..=5);
            let d: i64 = rng.gen_range(1..=3);
            let v = BigRational::new(n.into(), d.into());
            if !v.is_zero() {
                return v;
            }
        }
    }

    fn axpy(&self, dst: &mut [BigRational], c: &BigRational, src: &[BigRational]) {
        if c.is_zero() {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d += c * s;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.add(&100, &5), 4);
        assert_eq!(f.sub(&3, &5), 99);
        assert_eq!(f.mul(&f.inv(&7), &7), 1);
        assert_eq!(f.from_i64(-1), 100);
        assert_eq!(f.parse("-2").unwrap(), 99);
        assert_eq!(f.parse("1/2").unwrap(), 51);
        assert!(PrimeField::new(100).is_err());
    }

    #[test]
    fn rationals_roundtrip_format() {
        let q = Rationals;
        let v = q.parse("-6/4").unwrap();
        assert_eq!(q.format(&v), "-3/2");
        assert_eq!(q.format(&q.from_i64(7)), "7");
    }

    #[test]
    fn config_parse() {
        assert_eq!(FieldConfig::parse("p=2").unwrap(), FieldConfig::Prime { p: 2 });
        assert_eq!(FieldConfig::parse("rationals").unwrap(), FieldConfig::Rationals);
        assert!(FieldConfig::parse("p=9").is_err());
        let json = serde_json::to_string(&FieldConfig::Prime { p: 3 }).unwrap();
        assert_eq!(json, r#"{"kind":"prime-field","p":3}"#);
    }
}
