//! Truncated power series with exact rational coefficients, in one variable
//! (usually h, sometimes T or ℏ) and in two variables (h, ε).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numkit::{binom_rat, rat_int, Rat};

/// Σ_{n≤order} c_n x^n + O(x^{order+1}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSeries {
    order: usize,
    coeffs: Vec<Rat>,
}

impl HSeries {
    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn new(mut coeffs: Vec<Rat>, order: usize) -> Self {
        coeffs.resize(order + 1, Rat::zero());
        HSeries { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rat::one(), order)
    }

    pub fn monomial(n: usize, c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self::new(self.coeffs[..=order].to_vec(), order)
    }

    /// Index of the first nonzero coefficient, None if all vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let c = (0..=order).map(|n| &self.coeffs[n] + &o.coeffs[n]).collect();
        Self::new(c, order)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let c = (0..=order).map(|n| &self.coeffs[n] - &o.coeffs[n]).collect();
        Self::new(c, order)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), self.order)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect(), self.order)
    }

    pub fn add_assign_scaled(&mut self, o: &Self, s: &Rat) {
        self.order = self.order.min(o.order);
        self.coeffs.truncate(self.order + 1);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut c = vec![Rat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::new(c, order)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// a·b⁻¹ for b with nonzero constant term.
    pub fn div_unit(&self, b: &Self) -> Result<Self> {
        if b.coeffs[0].is_zero() {
            return Err(Error::NotAUnit);
        }
        let order = self.order.min(b.order);
        let inv0 = b.coeffs[0].recip();
        let mut q = vec![Rat::zero(); order + 1];
        for n in 0..=order {
            let mut r = self.coeffs[n].clone();
            for j in 1..=n {
                if !b.coeffs[j].is_zero() {
                    r -= &b.coeffs[j] * &q[n - j];
                }
            }
            q[n] = r * &inv0;
        }
        Ok(Self::new(q, order))
    }

    /// Exact division by x^k; the order drops by k.
    pub fn div_xk(&self, k: usize) -> Result<Self> {
        match self.valuation() {
            Some(v) if v < k => Err(Error::PoleRemaining { valuation: v, power: k }),
            _ if k > self.order => Err(Error::OrderExceeded { requested: k, available: self.order }),
            _ => Ok(Self::new(self.coeffs[k..].to_vec(), self.order - k)),
        }
    }

    /// Multiply by x^k; the order rises by k.
    pub fn mul_xk(&self, k: usize) -> Self {
        let mut c = vec![Rat::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c, self.order + k)
    }

    /// self(inner(x)) for inner with zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidInput("inner series must vanish at 0".into()));
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncate(order);
        let mut acc = Self::zero(order);
        for c in self.coeffs.iter().take(order + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

pub fn hs_add(a: &HSeries, b: &HSeries) -> HSeries {
    a.add(b)
}

pub fn hs_mul(a: &HSeries, b: &HSeries) -> HSeries {
    a.mul(b)
}

pub fn hs_neg(a: &HSeries) -> HSeries {
    a.neg()
}

pub fn hs_div_unit(a: &HSeries, b: &HSeries) -> Result<HSeries> {
    a.div_unit(b)
}

/// q̌^x = Σ binom(x,m) h^m.
pub fn qpow_rational(x: &Rat, order: usize) -> HSeries {
    let mut c = Vec::with_capacity(order + 1);
    let mut b = Rat::one();
    for m in 0..=order {
        c.push(b.clone());
        b *= x - rat_int(m as i64);
        b /= rat_int(m as i64 + 1);
    }
    HSeries::new(c, order)
}

/// log(1+h), the series of ℏ with q̌ = e^ℏ.
pub fn log1p(order: usize) -> HSeries {
    let c = (0..=order)
        .map(|n| {
            if n == 0 {
                Rat::zero()
            } else {
                let r = Rat::new(1.into(), (n as i64).into());
                if n % 2 == 1 {
                    r
                } else {
                    -r
                }
            }
        })
        .collect();
    HSeries::new(c, order)
}

/// sinh(x)/x = Σ x^{2j}/(2j+1)!.
pub fn sinhc(order: usize) -> HSeries {
    let mut c = vec![Rat::zero(); order + 1];
    let mut f = Rat::one();
    let mut n = 0usize;
    while n <= order {
        c[n] = f.recip();
        f *= rat_int((n + 2) as i64) * rat_int((n + 3) as i64);
        n += 2;
    }
    HSeries::new(c, order)
}

/// Series in x scaled as x → s·x.
pub fn dilate(a: &HSeries, s: &Rat) -> HSeries {
    let mut p = Rat::one();
    let c = a
        .coeffs()
        .iter()
        .map(|c| {
            let v = c * &p;
            p *= s;
            v
        })
        .collect();
    HSeries::new(c, a.order())
}

/// Σ c_{n,k} h^n ε^k with n ≤ nh, k ≤ ne.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    nh: usize,
    ne: usize,
    c: Vec<Vec<Rat>>,
}

impl BiSeries {
    pub fn zero(nh: usize, ne: usize) -> Self {
        BiSeries { nh, ne, c: vec![vec![Rat::zero(); ne + 1]; nh + 1] }
    }

    /// From ε-rows: `rows[k]` is the coefficient series of ε^k.
    pub fn from_rows(rows: &[HSeries], nh: usize) -> Self {
        let ne = rows.len().saturating_sub(1);
        let mut b = Self::zero(nh, ne);
        for (k, r) in rows.iter().enumerate() {
            for n in 0..=nh.min(r.order()) {
                b.c[n][k] = r.coeff(n);
            }
        }
        b
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.nh, self.ne)
    }

    pub fn get(&self, n: usize, k: usize) -> Rat {
        if n <= self.nh && k <= self.ne {
            self.c[n][k].clone()
        } else {
            Rat::zero()
        }
    }

    pub fn set(&mut self, n: usize, k: usize, v: Rat) {
        self.c[n][k] = v;
    }

    pub fn add(&self, o: &Self) -> Self {
        let (nh, ne) = (self.nh.min(o.nh), self.ne.min(o.ne));
        let mut r = Self::zero(nh, ne);
        for n in 0..=nh {
            for k in 0..=ne {
                r.c[n][k] = &self.c[n][k] + &o.c[n][k];
            }
        }
        r
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut r = self.clone();
        for row in r.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (nh, ne) = (self.nh.min(o.nh), self.ne.min(o.ne));
        let mut r = Self::zero(nh, ne);
        for n1 in 0..=nh {
            for k1 in 0..=ne {
                let a = &self.c[n1][k1];
                if a.is_zero() {
                    continue;
                }
                for n2 in 0..=nh - n1 {
                    for k2 in 0..=ne - k1 {
                        let b = &o.c[n2][k2];
                        if !b.is_zero() {
                            r.c[n1 + n2][k1 + k2] += a * b;
                        }
                    }
                }
            }
        }
        r
    }
}

/// (1/k!)∂_ε^k f at ε = 0: the ε^k row as a series in h.
pub fn eps_derivative(f: &BiSeries, k: usize) -> Result<HSeries> {
    if k > f.ne {
        return Err(Error::OrderExceeded { requested: k, available: f.ne });
    }
    Ok(HSeries::new((0..=f.nh).map(|n| f.c[n][k].clone()).collect(), f.nh))
}

/// Exact division of a series in T by T^power.
pub fn laurent_cancel_div(numerator: &HSeries, power: usize) -> Result<HSeries> {
    numerator.div_xk(power)
}

/// 1 − (1−T)^a as a series in T.
pub fn one_minus_binomial(a: &Rat, order: usize) -> HSeries {
    let c = (0..=order)
        .map(|i| {
            if i == 0 {
                Rat::zero()
            } else {
                let b = binom_rat(a, i);
                if i % 2 == 1 {
                    b
                } else {
                    -b
                }
            }
        })
        .collect();
    HSeries::new(c, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    fn s(v: &[i64], order: usize) -> HSeries {
        HSeries::new(v.iter().map(|&x| rat_int(x)).collect(), order)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(s(&[1, 1], 4).mul(&s(&[1, -1], 4)), s(&[1, 0, -1], 4));
        let geo = s(&[1; 7], 6);
        assert_eq!(geo.mul(&s(&[1, -1], 6)), HSeries::one(6));
        let a = s(&[2, 3, 5], 5);
        let b = s(&[7, -1, 0, 4], 5);
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(hs_neg(&hs_add(&a, &b)).add(&a), b.neg());
    }

    #[test]
    fn div_unit_examples() {
        let alt = HSeries::one(5).div_unit(&s(&[1, 1], 5)).unwrap();
        assert_eq!(alt, s(&[1, -1, 1, -1, 1, -1], 5));
        assert_eq!(s(&[0, 1], 3).div_unit(&s(&[0, 1], 3)), Err(Error::NotAUnit));
        let b = s(&[3, -2, 7, 1], 6);
        let a = s(&[1, 4, 0, 0, 9], 6);
        assert_eq!(b.mul(&hs_div_unit(&a, &b).unwrap()), a);
    }

    #[test]
    fn qpow_examples() {
        assert_eq!(qpow_rational(&Rat::zero(), 5), HSeries::one(5));
        assert_eq!(qpow_rational(&Rat::one(), 5), s(&[1, 1], 5));
        let half = qpow_rational(&rat(1, 2), 2);
        assert_eq!(half.coeffs(), &[rat(1, 1), rat(1, 2), rat(-1, 8)]);
    }

    #[test]
    fn eps_derivative_examples() {
        // (1+ε)^5 as a bivariate series with no h dependence
        let rows: Vec<HSeries> = (0..=5).map(|k| HSeries::constant(binom_rat(&rat(5, 1), k), 3)).collect();
        let f = BiSeries::from_rows(&rows, 3);
        for k in 0..=5 {
            assert_eq!(eps_derivative(&f, k).unwrap().coeff(0), binom_rat(&rat(5, 1), k));
        }
        let mut e2 = BiSeries::zero(2, 2);
        e2.set(0, 2, Rat::one());
        assert_eq!(eps_derivative(&e2, 1).unwrap(), HSeries::zero(2));
        assert_eq!(eps_derivative(&e2, 0).unwrap(), HSeries::zero(2));
        assert!(matches!(eps_derivative(&e2, 3), Err(Error::OrderExceeded { .. })));
    }

    #[test]
    fn laurent_cancel_examples() {
        let t2 = HSeries::monomial(2, Rat::one(), 6);
        assert_eq!(laurent_cancel_div(&t2, 2).unwrap(), HSeries::one(4));
        let t = HSeries::monomial(1, Rat::one(), 6);
        assert!(matches!(laurent_cancel_div(&t, 2), Err(Error::PoleRemaining { .. })));
        let f = laurent_cancel_div(&one_minus_binomial(&rat(1, 3), 8), 1).unwrap();
        for i in 0..=7 {
            let b = binom_rat(&rat(1, 3), i + 1);
            let expect = if i % 2 == 0 { b } else { -b };
            assert_eq!(f.coeff(i), expect);
        }
        assert_eq!(f.coeff(0), rat(1, 3));
        assert_eq!(f.coeff(1), rat(1, 9));
    }

    #[test]
    fn compose_log_exp() {
        // (1+h)^x = exp(x log(1+h)); check e^{log(1+h)} = 1 + h
        let n = 10;
        let mut exp = vec![Rat::one()];
        for k in 1..=n {
            let prev: Rat = exp[k - 1].clone();
            exp.push(prev / rat_int(k as i64));
        }
        let e = HSeries::new(exp, n);
        assert_eq!(e.compose(&log1p(n)).unwrap(), s(&[1, 1], n));
    }
}
