//! The cyclotomic ring Z[q̌], q̌ a primitive K-th root of unity, in the
//! basis h^0..h^{K−2} with h = q̌ − 1.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{binom_int, check_odd_prime, kappa, Rat, Residue};

/// binom(K, n+1) for n = 0..K−2, the coefficients of the reduction rule
/// h^{K−1} = −Σ binom(K, n+1) h^n.
fn reduction_row(k: u64) -> Vec<BigInt> {
    let kb = BigInt::from(k);
    (0..k as usize - 1).map(|n| binom_int(&kb, n + 1)).collect()
}

/// An unreduced polynomial in h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly {
    pub prime: u64,
    pub coeffs: Vec<BigInt>,
}

impl HPoly {
    pub fn new(prime: u64, coeffs: Vec<BigInt>) -> Self {
        HPoly { prime, coeffs }
    }

    pub fn monomial(prime: u64, n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        HPoly { prime, coeffs }
    }
}

/// Rewrite every power h^j, j ≥ K−1, into the fundamental basis.
pub fn spadesuit(p: &HPoly) -> Result<CycInt> {
    check_odd_prime(p.prime)?;
    Ok(reduce(p.prime, p.coeffs.clone()))
}

fn reduce(k: u64, mut c: Vec<BigInt>) -> CycInt {
    let d = k as usize - 1;
    if c.len() > d {
        let row = reduction_row(k);
        for j in (d..c.len()).rev() {
            if c[j].is_zero() {
                continue;
            }
            let top = std::mem::take(&mut c[j]);
            let base = j - d;
            for (n, b) in row.iter().enumerate() {
                c[base + n] -= &top * b;
            }
        }
        c.truncate(d);
    }
    c.resize(d, BigInt::zero());
    CycInt { prime: k, coeffs: c }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    prime: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(prime: u64) -> Self {
        CycInt { prime, coeffs: vec![BigInt::zero(); prime as usize - 1] }
    }

    pub fn one(prime: u64) -> Self {
        Self::from_int(prime, BigInt::one())
    }

    pub fn from_int(prime: u64, n: BigInt) -> Self {
        let mut x = Self::zero(prime);
        x.coeffs[0] = n;
        x
    }

    /// h itself.
    pub fn h(prime: u64) -> Self {
        reduce(prime, vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(prime: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        check_odd_prime(prime)?;
        if coeffs.len() != prime as usize - 1 {
            return Err(Error::InvalidInput(format!("expected {} coefficients, got {}", prime - 1, coeffs.len())));
        }
        Ok(CycInt { prime, coeffs })
    }

    pub fn from_i64s(prime: u64, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(prime, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Element Σ c_e q̌^e given by coefficients on q̌^0..q̌^{len−1}.
    pub fn from_qexp(prime: u64, c: &[BigInt]) -> Self {
        let mut g = CycGroup::zero(prime);
        for (e, x) in c.iter().enumerate() {
            g.c[e % prime as usize] += x;
        }
        g.to_cyc()
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.prime, o.prime);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        CycInt { prime: self.prime, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.prime, o.prime);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        CycInt { prime: self.prime, coeffs }
    }

    pub fn neg(&self) -> Self {
        CycInt { prime: self.prime, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        CycInt { prime: self.prime, coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.prime, o.prime);
        let d = self.coeffs.len();
        let mut c = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        reduce(self.prime, c)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.prime);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_int(&self, d: &BigInt) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(d);
            if !r.is_zero() {
                return Err(Error::NotDivisible(format!("coefficient {a} by {d}")));
            }
            coeffs.push(q);
        }
        Ok(CycInt { prime: self.prime, coeffs })
    }

    /// Every h-basis coefficient reduced into [0, m).
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        CycInt { prime: self.prime, coeffs: self.coeffs.iter().map(|a| a.mod_floor(m)).collect() }
    }

    /// Image under the Galois automorphism q̌ → q̌^{-1}.
    pub fn conjugate(&self) -> Self {
        let g = CycGroup::from_cyc(self);
        let k = self.prime as usize;
        let mut r = CycGroup::zero(self.prime);
        for e in 0..k {
            r.c[(k - e) % k] = g.c[e].clone();
        }
        r.to_cyc()
    }

    /// Coefficients in the power basis q̌^0..q̌^{K−2}.
    pub fn to_qbasis(&self) -> Vec<BigInt> {
        let d = self.coeffs.len();
        let mut out = vec![BigInt::zero(); d];
        for (n, a) in self.coeffs.iter().enumerate() {
            // h^n = Σ_e binom(n,e)(−1)^{n−e} q̌^e
            for e in 0..=n {
                let b = binom_int(&BigInt::from(n), e) * a;
                if (n - e) % 2 == 0 {
                    out[e] += b;
                } else {
                    out[e] -= b;
                }
            }
        }
        out
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The group ring Z[x]/(x^K − 1); its image in Z[q̌] is taken by setting
/// x = q̌. Used to accumulate sums of powers of q̌ cheaply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycGroup {
    pub prime: u64,
    pub c: Vec<BigInt>,
}

impl CycGroup {
    pub fn zero(prime: u64) -> Self {
        CycGroup { prime, c: vec![BigInt::zero(); prime as usize] }
    }

    pub fn monomial(prime: u64, e: i64, coeff: BigInt) -> Self {
        let mut g = Self::zero(prime);
        g.c[e.rem_euclid(prime as i64) as usize] = coeff;
        g
    }

    pub fn add_monomial(&mut self, e: i64, coeff: &BigInt) {
        let i = e.rem_euclid(self.prime as i64) as usize;
        self.c[i] += coeff;
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        CycGroup { prime: self.prime, c: self.c.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.prime as usize;
        let mut r = Self::zero(self.prime);
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    r.c[(i + j) % k] += a * b;
                }
            }
        }
        r
    }

    /// Multiply by q̌^e.
    pub fn shift(&self, e: i64) -> Self {
        let k = self.prime as usize;
        let s = e.rem_euclid(k as i64) as usize;
        let mut r = Self::zero(self.prime);
        for (i, a) in self.c.iter().enumerate() {
            r.c[(i + s) % k] = a.clone();
        }
        r
    }

    pub fn from_cyc(x: &CycInt) -> Self {
        let mut g = Self::zero(x.prime);
        for (e, b) in x.to_qbasis().into_iter().enumerate() {
            g.c[e] = b;
        }
        g
    }

    /// Reduce with q̌^{K−1} = −Σ_{e<K−1} q̌^e, then pass to the h-basis via
    /// q̌^e = Σ_n binom(e,n) h^n.
    pub fn to_cyc(&self) -> CycInt {
        let k = self.prime as usize;
        let top = &self.c[k - 1];
        let mut out = vec![BigInt::zero(); k - 1];
        for e in 0..k - 1 {
            let ce = &self.c[e] - top;
            if ce.is_zero() {
                continue;
            }
            for (n, o) in out.iter_mut().enumerate().take(e + 1) {
                *o += binom_int(&BigInt::from(e), n) * &ce;
            }
        }
        CycInt { prime: self.prime, coeffs: out }
    }
}

/// q̌^e for a residue e; only e mod K matters.
pub fn q_power(e: &Residue) -> CycInt {
    q_pow(e.prime(), e.mod_k() as i64)
}

pub fn q_pow(prime: u64, e: i64) -> CycInt {
    CycGroup::monomial(prime, e, BigInt::one()).to_cyc()
}

/// G = Σ_{0≤α<K} q̌^{−α²}.
pub fn gauss_sum(k: u64) -> Result<CycInt> {
    check_odd_prime(k)?;
    let mut g = CycGroup::zero(k);
    for a in 0..k as i64 {
        g.add_monomial(-(a * a), &BigInt::one());
    }
    Ok(g.to_cyc())
}

/// Divide by h once: if a = h·b then b_{K−2} = −a_0/K and
/// b_{n−1} = a_n + binom(K,n+1)·b_{K−2}.
fn div_h_once(x: &CycInt) -> Option<CycInt> {
    let k = x.prime;
    let kb = BigInt::from(k);
    let (top, r) = x.coeffs[0].div_rem(&kb);
    if !r.is_zero() {
        return None;
    }
    let top = -top;
    let d = k as usize - 1;
    let row = reduction_row(k);
    let mut b = vec![BigInt::zero(); d];
    for n in 1..d {
        b[n - 1] = &x.coeffs[n] + &row[n] * &top;
    }
    b[d - 1] = top;
    Some(CycInt { prime: k, coeffs: b })
}

/// y with h^n·y = x.
pub fn div_exact_h(x: &CycInt, n: usize) -> Result<CycInt> {
    let mut y = x.clone();
    for i in 0..n {
        y = div_h_once(&y).ok_or_else(|| Error::NotDivisible(format!("by h^{n}: fails at step {}", i + 1)))?;
    }
    Ok(y)
}

/// An h-adic valuation; the zero element has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn at_least(&self, n: i64) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => (*v as i64) >= n,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Valuation {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Largest n with h^n dividing x. Not capped: K itself has valuation K−1.
pub fn h_valuation(x: &CycInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let mut y = x.clone();
    let mut n = 0;
    while let Some(z) = div_h_once(&y) {
        y = z;
        n += 1;
    }
    Valuation::Finite(n)
}

/// Largest m with K^m dividing every coefficient; infinite for zero.
pub fn k_valuation(x: &CycInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let kb = BigInt::from(x.prime);
    let v = x
        .coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| {
            let mut c = c.abs();
            let mut v = 0;
            while (&c % &kb).is_zero() {
                c /= &kb;
                v += 1;
            }
            v
        })
        .min()
        .unwrap();
    Valuation::Finite(v)
}

pub fn coeffs_basis(x: &CycInt) -> Vec<BigInt> {
    x.coeffs.clone()
}

/// Every fundamental coefficient of x − y divisible by K^m.
pub fn congruent_mod(x: &CycInt, y: &CycInt, m: u32) -> bool {
    assert_eq!(x.prime, y.prime);
    let modulus = BigInt::from(x.prime).pow(m);
    x.coeffs.iter().zip(&y.coeffs).all(|(a, b)| ((a - b) % &modulus).is_zero())
}

/// e^{iπ·phase8/4} · K^{sqrtk_pow/2} · scalar · body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasedCyc {
    pub phase8: i64,
    pub sqrtk_pow: i64,
    pub scalar: Rat,
    pub body: CycInt,
}

impl PhasedCyc {
    pub fn new(body: CycInt) -> Self {
        PhasedCyc { phase8: 0, sqrtk_pow: 0, scalar: Rat::one(), body }
    }

    pub fn mul_phase(mut self, p: i64) -> Self {
        self.phase8 = (self.phase8 + p).rem_euclid(8);
        self
    }

    pub fn mul_sqrtk(mut self, e: i64) -> Self {
        self.sqrtk_pow += e;
        self
    }

    pub fn mul_scalar(mut self, s: &Rat) -> Self {
        self.scalar *= s;
        self
    }
}

/// Substitute √K = e^{−iπ(κ−1)/4}·G, cancel the phase and divide exactly.
pub fn resolve_phase(x: &PhasedCyc) -> Result<CycInt> {
    let k = x.body.prime;
    let kb = BigInt::from(k);
    let mut phase = x.phase8;
    let mut body = x.body.clone();
    let half = x.sqrtk_pow.div_euclid(2);
    if x.sqrtk_pow.rem_euclid(2) == 1 {
        body = body.mul(&gauss_sum(k)?);
        phase -= (kappa(k) - 1) as i64;
    }
    let mut scalar = x.scalar.clone();
    match half.cmp(&0) {
        Ordering::Greater => scalar *= Rat::from_integer(kb.pow(half as u32)),
        Ordering::Less => scalar /= Rat::from_integer(kb.pow((-half) as u32)),
        Ordering::Equal => {}
    }
    let body = match phase.rem_euclid(8) {
        0 => body,
        4 => body.neg(),
        r => return Err(Error::ResidualPhase(r)),
    };
    body.scale(scalar.numer()).div_int(scalar.denom())
}

/// Fixed-point evaluation at q̌ = e^{2πi/K}, a diagnostic only: the real and
/// imaginary parts scaled by 10^digits.
pub fn eval_at_root(x: &CycInt, digits: u32) -> (BigInt, BigInt) {
    let guard = 10;
    let scale = BigInt::from(10).pow(digits + guard);
    let k = x.prime as i64;
    let pi = fixed_pi(&scale);
    let g = CycGroup::from_cyc(x);
    let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
    for (e, c) in g.c.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let theta = (&pi * BigInt::from(2 * e as i64)) / BigInt::from(k);
        let (s, co) = fixed_sin_cos(&theta, &scale);
        re += c * co;
        im += c * s;
    }
    let drop = BigInt::from(10).pow(guard);
    (round_div(&re, &drop), round_div(&im, &drop))
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let twice = a * 2 + if a.is_negative() { -b } else { b.clone() };
    twice / (b * 2)
}

fn fixed_atan_inv(n: i64, scale: &BigInt) -> BigInt {
    // atan(1/n) = Σ (−1)^j / ((2j+1) n^{2j+1})
    let nb = BigInt::from(n);
    let n2 = &nb * &nb;
    let mut term = scale / &nb;
    let mut acc = BigInt::zero();
    let mut j: i64 = 0;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * j + 1);
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
        term /= &n2;
        j += 1;
    }
    acc
}

fn fixed_pi(scale: &BigInt) -> BigInt {
    (fixed_atan_inv(5, scale) * 16) - (fixed_atan_inv(239, scale) * 4)
}

fn fixed_sin_cos(theta: &BigInt, scale: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::zero();
    let mut c = BigInt::zero();
    let mut term = scale.clone();
    let mut n: i64 = 0;
    while !term.is_zero() {
        match n % 4 {
            0 => c += &term,
            1 => s += &term,
            2 => c -= &term,
            _ => s -= &term,
        }
        n += 1;
        term = term * theta / scale / BigInt::from(n);
    }
    (s, c)
}

pub fn to_i64_vec(x: &CycInt) -> Option<Vec<i64>> {
    x.coeffs.iter().map(|c| c.to_i64()).collect()
}
