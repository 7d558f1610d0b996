//! Integer and rational primitives: K-adic residues, Legendre symbols,
//! Dedekind sums, generalized binomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_odd_prime(k: u64) -> Result<()> {
    if k > 2 && is_prime(k) {
        Ok(())
    } else {
        Err(Error::NotPrime(k))
    }
}

/// A truncated K-adic integer: a value modulo K^precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    prime: u64,
    precision: u32,
    value: BigInt,
}

impl Residue {
    pub fn new(value: &BigInt, prime: u64, precision: u32) -> Result<Self> {
        check_odd_prime(prime)?;
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let modulus = BigInt::from(prime).pow(precision);
        Ok(Residue { prime, precision, value: value.mod_floor(&modulus) })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.prime).pow(self.precision)
    }

    /// Value modulo K, the only part that matters for exponents of q̌.
    pub fn mod_k(&self) -> u64 {
        (&self.value % self.prime).to_u64().unwrap()
    }

    pub fn truncate(&self, precision: u32) -> Result<Self> {
        if precision > self.precision {
            return Err(Error::OrderExceeded { requested: precision as usize, available: self.precision as usize });
        }
        Residue::new(&self.value, self.prime, precision)
    }

    /// Base-K digits, least significant first, exactly `precision` of them.
    pub fn digits(&self) -> Vec<u64> {
        let k = BigInt::from(self.prime);
        let mut v = self.value.clone();
        (0..self.precision)
            .map(|_| {
                let (q, r) = v.div_mod_floor(&k);
                v = q;
                r.to_u64().unwrap()
            })
            .collect()
    }
}

/// v with q·v ≡ 1 mod K^m.
pub fn kadic_inverse(q: &BigInt, k: u64, m: u32) -> Result<Residue> {
    check_odd_prime(k)?;
    if m == 0 {
        return Err(Error::ZeroPrecision);
    }
    let kb = BigInt::from(k);
    if (q % &kb).is_zero() {
        return Err(Error::NotInvertible(q.to_string(), k));
    }
    let modulus = kb.pow(m);
    let e = q.mod_floor(&modulus).extended_gcd(&modulus);
    debug_assert!(e.gcd.is_one());
    Residue::new(&e.x, k, m)
}

/// The ∨-lift: numerator times the K-adic inverse of the denominator.
pub fn vee_lift(r: &Rat, k: u64, m: u32) -> Result<Residue> {
    check_odd_prime(k)?;
    if (r.denom() % BigInt::from(k)).is_zero() {
        return Err(Error::DenominatorDivisible(r.denom().to_string(), k));
    }
    let inv = kadic_inverse(r.denom(), k, m)?;
    Residue::new(&(r.numer() * inv.value()), k, m)
}

/// Legendre symbol (p/K) by Euler's criterion.
pub fn legendre_symbol(p: &BigInt, k: u64) -> i32 {
    let kb = BigInt::from(k);
    let r = p.mod_floor(&kb);
    if r.is_zero() {
        return 0;
    }
    let e = r.modpow(&BigInt::from((k - 1) / 2), &kb);
    if e.is_one() {
        1
    } else {
        -1
    }
}

pub fn legendre_i64(p: i64, k: u64) -> i32 {
    legendre_symbol(&BigInt::from(p), k)
}

/// +1 when K ≡ 1 mod 4, −1 when K ≡ 3 mod 4.
pub fn kappa(k: u64) -> i32 {
    if k % 4 == 1 {
        1
    } else {
        -1
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Dedekind sum s(p,q), odd in q as in the cotangent definition.
pub fn dedekind_sum(p: i64, q: i64) -> Result<Rat> {
    validate_dedekind(p, q)?;
    if q.unsigned_abs() <= 64 {
        Ok(sawtooth(p, q))
    } else {
        Ok(reciprocity(p, q))
    }
}

pub fn dedekind_sum_sawtooth(p: i64, q: i64) -> Result<Rat> {
    validate_dedekind(p, q)?;
    Ok(sawtooth(p, q))
}

pub fn dedekind_sum_reciprocity(p: i64, q: i64) -> Result<Rat> {
    validate_dedekind(p, q)?;
    Ok(reciprocity(p, q))
}

fn validate_dedekind(p: i64, q: i64) -> Result<()> {
    if q == 0 || gcd_i64(p, q) != 1 {
        return Err(Error::NotCoprime(p.to_string(), q.to_string()));
    }
    Ok(())
}

fn sawtooth(p: i64, q: i64) -> Rat {
    let qa = q.unsigned_abs() as i128;
    let p = p as i128;
    let mut acc: i128 = 0;
    for j in 1..qa {
        let r = (p * j).rem_euclid(qa);
        if r != 0 {
            acc += (2 * j - qa) * (2 * r - qa);
        }
    }
    let s = Rat::new(BigInt::from(acc), BigInt::from(4 * qa * qa));
    if q < 0 {
        -s
    } else {
        s
    }
}

fn reciprocity(p: i64, q: i64) -> Rat {
    let mut sign = if q < 0 { -1 } else { 1 };
    let (mut a, mut b) = (p.rem_euclid(q.abs()), q.abs());
    let mut acc = Rat::zero();
    // s(a,b) = (a²+b²+1)/(12ab) − 1/4 − s(b mod a, a), for 0 < a < b
    while a != 0 {
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        let term = Rat::new(&ab * &ab + &bb * &bb + 1, 12 * &ab * &bb) - rat(1, 4);
        acc += if sign > 0 { term } else { -term };
        sign = -sign;
        let r = b.rem_euclid(a);
        b = a;
        a = r;
    }
    acc
}

/// Generalized binomial coefficient x(x−1)…(x−m+1)/m!.
pub fn binom_rat(x: &Rat, m: usize) -> Rat {
    let mut acc = Rat::one();
    for l in 0..m {
        acc *= x - rat_int(l as i64);
        acc /= rat_int(l as i64 + 1);
    }
    acc
}

/// Binomial coefficient with an arbitrary integer top entry.
pub fn binom_int(n: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for l in 0..k {
        acc *= n - BigInt::from(l);
        acc /= BigInt::from(l + 1);
    }
    acc
}

/// binom(n, k) reduced modulo `modulus` for an arbitrary integer n, valid
/// when k! is invertible or the exact value is not needed beyond the modulus.
/// Computed exactly and then reduced when n is small enough.
pub fn binom_mod(n: &BigInt, k: usize, modulus: &BigInt) -> BigInt {
    binom_int(n, k).mod_floor(modulus)
}

/// Integer coefficients C_{l,k;m} with binom(x·n², m) = Σ C_{l,k;m} binom(x,l) binom(n,k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomDecomposition {
    pub m: usize,
    pub entries: BTreeMap<(usize, usize), BigInt>,
}

impl BinomDecomposition {
    pub fn get(&self, l: usize, k: usize) -> BigInt {
        self.entries.get(&(l, k)).cloned().unwrap_or_default()
    }

    pub fn evaluate(&self, x: i64, n: i64) -> BigInt {
        self.entries.iter().map(|(&(l, k), c)| c * binom_int(&BigInt::from(x), l) * binom_int(&BigInt::from(n), k)).sum()
    }
}

pub fn decompose_xn2(m: usize) -> BinomDecomposition {
    let f = |x: usize, n: usize| binom_int(&BigInt::from((x * n * n) as u64), m);
    let table: Vec<Vec<BigInt>> = (0..=m).map(|x| (0..=2 * m).map(|n| f(x, n)).collect()).collect();
    let mut entries = BTreeMap::new();
    for l in 0..=m {
        for k in 0..=2 * m {
            let mut c = BigInt::zero();
            for a in 0..=l {
                for b in 0..=k {
                    let w = binom_int(&BigInt::from(l), a) * binom_int(&BigInt::from(k), b);
                    let term = w * &table[a][b];
                    if (l - a + k - b) % 2 == 0 {
                        c += term;
                    } else {
                        c -= term;
                    }
                }
            }
            if !c.is_zero() {
                entries.insert((l, k), c);
            }
        }
    }
    BinomDecomposition { m, entries }
}

pub fn sign_i64(x: i64) -> i64 {
    x.signum()
}

pub fn rat_sign(x: &Rat) -> i64 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Format a rational as "n" or "n/d".
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
