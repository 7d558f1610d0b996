//! Colored Jones polynomials of supported knots, their d_{m,n} expansion
//! tables, truncations and root-of-unity evaluations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cycring::{CycGroup, CycInt};
use crate::error::{Error, Result};
use crate::numkit::{check_odd_prime, Rat};

/// A Laurent polynomial in t with integer coefficients, stored densely from
/// its lowest exponent; the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    lo: i64,
    c: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(e: i64, c: BigInt) -> Self {
        Self::from_dense(e, vec![c])
    }

    fn from_dense(lo: i64, c: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { lo, c };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| x.is_zero()).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.lo += lead as i64;
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in pairs {
            p.add_term(e, &BigInt::from(c));
        }
        p
    }

    /// Nonzero terms (exponent, coefficient) in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(i, x)| (self.lo + i as i64, x))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        let i = e - self.lo;
        if i < 0 || i as usize >= self.c.len() {
            BigInt::zero()
        } else {
            self.c[i as usize].clone()
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        (!self.c.is_empty()).then_some(self.lo)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.c.is_empty()).then(|| self.lo + self.c.len() as i64 - 1)
    }

    fn span_to(&mut self, lo: i64, hi: i64) {
        if self.c.is_empty() {
            self.lo = lo;
            self.c = vec![BigInt::zero(); (hi - lo + 1) as usize];
            return;
        }
        if lo < self.lo {
            let pad = (self.lo - lo) as usize;
            let mut v = vec![BigInt::zero(); pad];
            v.append(&mut self.c);
            self.c = v;
            self.lo = lo;
        }
        let top = self.lo + self.c.len() as i64 - 1;
        if hi > top {
            self.c.resize(self.c.len() + (hi - top) as usize, BigInt::zero());
        }
    }

    pub fn add_term(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        self.span_to(e, e);
        self.c[(e - self.lo) as usize] += c;
        self.normalize();
    }

    fn add_scaled(&self, o: &Self, s: &BigInt) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        let mut r = self.clone();
        r.span_to(o.lo, o.max_exp().unwrap());
        let off = (o.lo - r.lo) as usize;
        for (i, x) in o.c.iter().enumerate() {
            r.c[off + i] += x * s;
        }
        r.normalize();
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        self.add_scaled(o, &BigInt::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add_scaled(o, &BigInt::from(-1))
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::from_dense(self.lo, self.c.iter().map(|x| x * s).collect())
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> Self {
        let mut r = self.clone();
        if !r.c.is_empty() {
            r.lo += k;
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::from_dense(self.lo + o.lo, c)
    }

    /// Multiply by (1 − t^i), i > 0.
    fn mul_one_minus(&self, i: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.c.clone();
        c.resize(self.c.len() + i, BigInt::zero());
        for j in (i..c.len()).rev() {
            let v = c[j - i].clone();
            c[j] -= v;
        }
        Self::from_dense(self.lo, c)
    }

    /// t → t^{−1}.
    pub fn mirror(&self) -> Self {
        match self.max_exp() {
            None => Self::zero(),
            Some(hi) => Self::from_dense(-hi, self.c.iter().rev().cloned().collect()),
        }
    }

    /// Exact quotient self / d, failing unless the division is exact over Z.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (dlo, dhi) = match (d.min_exp(), d.max_exp()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NotDivisible("division by zero polynomial".into())),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dl = (dhi - dlo) as usize;
        let n = self.c.len();
        if n <= dl {
            return Err(Error::NotDivisible("nonzero remainder in Laurent division".into()));
        }
        let lead = &d.c[0];
        let mut rem = self.c.clone();
        let mut q = vec![BigInt::zero(); n - dl];
        for i in 0..n - dl {
            if rem[i].is_zero() {
                continue;
            }
            let (c, r) = rem[i].div_rem(lead);
            if !r.is_zero() {
                return Err(Error::NotDivisible("non-integral Laurent quotient".into()));
            }
            for (j, x) in d.c.iter().enumerate() {
                if !x.is_zero() {
                    rem[i + j] -= &c * x;
                }
            }
            q[i] = c;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotDivisible("nonzero remainder in Laurent division".into()));
        }
        Ok(Self::from_dense(self.lo - dlo, q))
    }

    /// Coefficients of the expansion in u = t − 1 through u^order.
    pub fn taylor_u(&self, order: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); order + 1];
        for (e, c) in self.iter() {
            let eb = BigInt::from(e);
            let mut b = BigInt::one();
            for (n, o) in out.iter_mut().enumerate() {
                *o += &b * c;
                b = b * (&eb - n) / (n + 1);
            }
        }
        out
    }

    /// Evaluation at t = q̌.
    pub fn eval_root(&self, k: u64) -> CycInt {
        let mut g = CycGroup::zero(k);
        for (e, c) in self.iter() {
            g.add_monomial(e, c);
        }
        g.to_cyc()
    }

    pub fn eval_one(&self) -> BigInt {
        self.c.iter().sum()
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(e, c)| format!("{c}*t^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// {a}² = t^a + t^{−a} − 2 = (t^{a/2} − t^{−a/2})².
pub fn bracket_sq(a: i64) -> LaurentPoly {
    let mut p = LaurentPoly::monomial(a, BigInt::one());
    p.add_term(-a, &BigInt::one());
    p.add_term(0, &BigInt::from(-2));
    p
}

/// (q;q)_n = Π_{i=1}^n (1 − q^i).
fn qpoch(n: usize) -> LaurentPoly {
    qpoch_range(1, n)
}

/// Π_{i=a}^b (1 − q^i).
fn qpoch_range(a: usize, b: usize) -> LaurentPoly {
    (a..=b).fold(LaurentPoly::one(), |p, i| p.mul_one_minus(i))
}

/// The cyclotomic coefficient f_n of the twist knot with p full twists:
/// q^n Σ_k (−1)^k q^{k(k+1)p + k(k−1)/2} (1 − q^{2k+1}) (q;q)_n / ((q;q)_{n+k+1} (q;q)_{n−k}).
pub fn twist_coeff(p: i64, n: usize) -> LaurentPoly {
    let den = qpoch(2 * n + 1);
    let mut num = LaurentPoly::zero();
    for k in 0..=n {
        let ki = k as i64;
        let mut term = (n + k + 2..=2 * n + 1)
            .fold(qpoch_range(n - k + 1, n), |t, i| t.mul_one_minus(i))
            .mul_one_minus(2 * k + 1)
            .shift(ki * (ki + 1) * p + ki * (ki - 1) / 2);
        if k % 2 == 1 {
            term = term.scale(&BigInt::from(-1));
        }
        num = num.add(&term);
    }
    num.div_exact(&den).expect("twist coefficients are Laurent polynomials").shift(n as i64)
}

/// Expansion coefficients d_{m,n}, complete for m + n ≤ n_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmnTable {
    entries: BTreeMap<(usize, usize), BigInt>,
    n_max: usize,
}

impl DmnTable {
    /// Validates d_{0,0} = 1 and that no entry lies outside m + n ≤ n_max.
    pub fn new(entries: BTreeMap<(usize, usize), BigInt>, n_max: usize) -> Result<Self> {
        if entries.get(&(0, 0)) != Some(&BigInt::one()) {
            return Err(Error::InvalidInput("d_{0,0} must equal 1".into()));
        }
        if let Some(&(m, n)) = entries.keys().find(|(m, n)| m + n > n_max) {
            return Err(Error::InvalidInput(format!("entry ({m},{n}) beyond N_max = {n_max}")));
        }
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(DmnTable { entries, n_max })
    }

    pub fn unknot(n_max: usize) -> Self {
        let mut e = BTreeMap::new();
        e.insert((0, 0), BigInt::one());
        DmnTable { entries: e, n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, m: usize, n: usize) -> BigInt {
        self.entries.get(&(m, n)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.entries
    }

    pub fn truncate(&self, n_max: usize) -> Result<Self> {
        if n_max > self.n_max {
            return Err(Error::InsufficientTable { needed: n_max, available: self.n_max });
        }
        let entries = self.entries.iter().filter(|((m, n), _)| m + n <= n_max).map(|(k, v)| (*k, v.clone())).collect();
        Ok(DmnTable { entries, n_max })
    }

    /// Parse rows "m n d" (blank lines and '#' comments ignored).
    pub fn parse(text: &str, n_max: usize) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::InvalidInput(format!("line {}: expected \"m n d_mn\"", i + 1));
            if f.len() != 3 {
                return Err(bad());
            }
            let m: usize = f[0].parse().map_err(|_| bad())?;
            let n: usize = f[1].parse().map_err(|_| bad())?;
            let d: BigInt = f[2].parse().map_err(|_| bad())?;
            if entries.insert((m, n), d).is_some() {
                return Err(Error::InvalidInput(format!("line {}: duplicate entry ({m},{n})", i + 1)));
            }
        }
        Self::new(entries, n_max)
    }

    /// Rows "m n d" for every stored nonzero entry.
    pub fn to_text(&self) -> String {
        self.entries.iter().map(|((m, n), d)| format!("{m} {n} {d}\n")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotFamily {
    Unknot,
    /// Torus knot T(p,q); p·q > 0 is the positive (right-handed) one.
    Torus(i64, i64),
    /// Twist knot with n full twists: n = 1 is the right-handed trefoil,
    /// n = −1 the figure-eight knot.
    Twist(i64),
    Custom(DmnTable),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Knot {
    pub family: KnotFamily,
    pub mirror: bool,
}

impl Knot {
    pub fn new(family: KnotFamily, mirror: bool) -> Result<Self> {
        match &family {
            KnotFamily::Torus(p, q) => {
                if p.abs() < 2 || q.abs() < 2 || p.gcd(q) != 1 {
                    return Err(Error::InvalidInput(format!("torus parameters ({p},{q})")));
                }
            }
            KnotFamily::Twist(0) => return Err(Error::InvalidInput("twist index must be nonzero".into())),
            _ => {}
        }
        Ok(Knot { family, mirror })
    }

    pub fn unknot() -> Self {
        Knot { family: KnotFamily::Unknot, mirror: false }
    }

    pub fn figure_eight() -> Self {
        Knot { family: KnotFamily::Twist(-1), mirror: false }
    }

    /// The stevedore knot in the chirality used by the reference tables.
    pub fn stevedore() -> Self {
        Knot { family: KnotFamily::Twist(-2), mirror: true }
    }

    pub fn right_trefoil() -> Self {
        Knot { family: KnotFamily::Torus(2, 3), mirror: false }
    }

    pub fn left_trefoil() -> Self {
        Knot { family: KnotFamily::Torus(2, 3), mirror: true }
    }

    pub fn custom(d: DmnTable) -> Self {
        Knot { family: KnotFamily::Custom(d), mirror: false }
    }
}

/// Torus-knot colored Jones: with exponents in units of t^{1/4},
/// V_N = t^{st(1−N²)/4} Σ_{k,ε} ε t^{stk² + (s+εt)k + ε/2} / (t^{N/2} − t^{−N/2}),
/// k running over −(N−1)/2..(N−1)/2; this gives the negative knot for s,t > 0,
/// so the result is mirrored.
fn torus_jones(s: i64, t: i64, n: i64) -> LaurentPoly {
    let st = s * t;
    let mut num = LaurentPoly::zero();
    let mut j = -(n - 1);
    while j < n {
        for eps in [1i64, -1] {
            let e = st * j * j + 2 * (s + eps * t) * j + 2 * eps + st * (1 - n * n);
            num.add_term(e, &BigInt::from(eps));
        }
        j += 2;
    }
    let mut den = LaurentPoly::monomial(2 * n, BigInt::one());
    den.add_term(-2 * n, &BigInt::from(-1));
    let q = num.div_exact(&den).expect("torus formula is a Laurent polynomial");
    let mut out = LaurentPoly::zero();
    for (e, c) in q.iter() {
        assert!(e % 4 == 0, "fractional exponent in torus Jones");
        out.add_term(-e / 4, c);
    }
    out
}

/// Σ_{n<α} f_n (−1)^n t^{n(n+1)/2} Π_{j=1}^n ({α}² − {j}²).
fn twist_jones(p: i64, alpha: i64) -> LaurentPoly {
    let a2 = bracket_sq(alpha);
    let mut v = LaurentPoly::zero();
    let mut prod = LaurentPoly::one();
    for n in 0..alpha {
        if n > 0 {
            prod = prod.mul(&a2.sub(&bracket_sq(n)));
        }
        let mut term = twist_coeff(p, n as usize).mul(&prod).shift(n * (n + 1) / 2);
        if n % 2 == 1 {
            term = term.scale(&BigInt::from(-1));
        }
        v = v.add(&term);
    }
    v
}

/// The unknot-normalized colored Jones polynomial V_α.
pub fn colored_jones(knot: &Knot, alpha: i64) -> Result<LaurentPoly> {
    if alpha < 1 {
        return Err(Error::InvalidInput(format!("color {alpha} must be positive")));
    }
    let v = match &knot.family {
        KnotFamily::Unknot => LaurentPoly::one(),
        KnotFamily::Twist(p) => twist_jones(*p, alpha),
        KnotFamily::Torus(s, t) => {
            let v = torus_jones(s.abs(), t.abs(), alpha);
            if s * t < 0 {
                v.mirror()
            } else {
                v
            }
        }
        KnotFamily::Custom(_) => return Err(Error::Unsupported("custom knots carry only an expansion table".into())),
    };
    Ok(if knot.mirror { v.mirror() } else { v })
}

/// Truncated u-series (u = t − 1) helpers with integer coefficients.
fn useries_mul(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            if !y.is_zero() {
                c[i + j] += x * y;
            }
        }
    }
    c
}

fn twist_dmn(p: i64, mirror: bool, n_max: usize) -> DmnTable {
    let ord = n_max;
    // E[m] = coefficient of A^m in Π_{j=1}^k (A − {j}²), as u-series
    let mut e: Vec<Vec<BigInt>> = vec![{
        let mut one = vec![BigInt::zero(); ord + 1];
        one[0] = BigInt::one();
        one
    }];
    let mut entries: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    for k in 0..=n_max {
        if k > 0 {
            let b = bracket_sq(k as i64).taylor_u(ord);
            let mut next = vec![vec![BigInt::zero(); ord + 1]; k + 1];
            for (m, em) in e.iter().enumerate() {
                for (x, y) in next[m + 1].iter_mut().zip(em) {
                    *x += y;
                }
                let prod = useries_mul(em, &b, ord);
                for (x, y) in next[m].iter_mut().zip(prod) {
                    *x -= y;
                }
            }
            e = next;
        }
        let ki = k as i64;
        let mut c = twist_coeff(p, k).shift(ki * (ki + 1) / 2);
        if k % 2 == 1 {
            c = c.scale(&BigInt::from(-1));
        }
        if mirror {
            c = c.mirror();
        }
        let cu = c.taylor_u(ord);
        for (m, em) in e.iter().enumerate() {
            // E_{k,m} has u-valuation 2(k−m); only n ≥ 2(k−m) contribute
            if m + 2 * (k - m) > n_max {
                continue;
            }
            let prod = useries_mul(&cu, em, n_max - m);
            for (n, v) in prod.into_iter().enumerate() {
                if !v.is_zero() {
                    *entries.entry((m, n)).or_default() += v;
                }
            }
        }
    }
    DmnTable::new(entries, n_max).expect("twist table has d_00 = 1")
}

fn vandermonde_solve(xs: &[BigInt], rhs: &[BigInt]) -> Vec<Rat> {
    // Newton divided differences, then expand to monomial coefficients.
    let n = xs.len();
    let mut dd: Vec<Rat> = rhs.iter().map(|r| Rat::from_integer(r.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / Rat::from_integer(&xs[i] - &xs[i - j]);
        }
    }
    let mut coef = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        // coef ← coef·(x − xs[i]) + dd[i]
        let mut next = vec![Rat::zero(); n];
        for d in 0..n {
            if coef[d].is_zero() {
                continue;
            }
            if d + 1 < n {
                next[d + 1] += &coef[d];
            }
            next[d] -= &coef[d] * Rat::from_integer(xs[i].clone());
        }
        next[0] += &dd[i];
        coef = next;
    }
    coef
}

/// Recover d_{m,n} from colored Jones polynomials by the triangular change
/// of basis. Level L of the u-expansion determines d_{m,L−2m}; colors
/// 1..n_max+1 are used to solve, n_max+2 and n_max+3 only to validate.
pub fn dmn_from_colors<F>(jones: F, n_max: usize) -> Result<DmnTable>
where
    F: Fn(i64) -> Result<LaurentPoly>,
{
    let levels = 2 * n_max;
    let colors = n_max as i64 + 3;
    let a: Vec<Vec<BigInt>> = (1..=colors).map(|al| jones(al).map(|v| v.taylor_u(levels))).collect::<Result<_>>()?;
    // powers[α−1][m] = ({α}²)^m as u-series
    let powers: Vec<Vec<Vec<BigInt>>> = (1..=colors)
        .map(|al| {
            let b = bracket_sq(al).taylor_u(levels);
            let mut p = vec![{
                let mut one = vec![BigInt::zero(); levels + 1];
                one[0] = BigInt::one();
                one
            }];
            for m in 1..=n_max {
                let next = useries_mul(&p[m - 1], &b, levels);
                p.push(next);
            }
            p
        })
        .collect();
    let mut d: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    let predict = |d: &BTreeMap<(usize, usize), BigInt>, ci: usize, level: usize| -> BigInt {
        d.iter().filter(|((m, n), _)| *n <= level && 2 * m + n <= level).map(|((m, n), v)| v * &powers[ci][*m][level - n]).sum()
    };
    for level in 0..=levels {
        let unknowns = level / 2 + 1;
        let xs: Vec<BigInt> = (1..=unknowns as i64).map(|al| BigInt::from(al * al)).collect();
        let rhs: Vec<BigInt> = (0..unknowns).map(|ci| &a[ci][level] - predict(&d, ci, level)).collect();
        let sol = vandermonde_solve(&xs, &rhs);
        for (m, v) in sol.into_iter().enumerate() {
            if !v.is_integer() {
                return Err(Error::NonIntegral(format!("d_{{{m},{}}} = {v}", level - 2 * m)));
            }
            if !v.is_zero() {
                d.insert((m, level - 2 * m), v.to_integer());
            }
        }
    }
    for ci in 0..colors as usize {
        for level in 0..=levels {
            if predict(&d, ci, level) != a[ci][level] {
                return Err(Error::InconsistentExpansion(format!("color {} disagrees at u^{level}", ci + 1)));
            }
        }
    }
    let entries = d.into_iter().filter(|((m, n), _)| m + n <= n_max).collect();
    DmnTable::new(entries, n_max)
}

/// All d_{m,n} with m + n ≤ n_max.
pub fn cyclotomic_dmn(knot: &Knot, n_max: usize) -> Result<DmnTable> {
    match &knot.family {
        KnotFamily::Unknot => Ok(DmnTable::unknot(n_max)),
        KnotFamily::Twist(p) => Ok(twist_dmn(*p, knot.mirror, n_max)),
        KnotFamily::Torus(..) => dmn_from_colors(|al| colored_jones(knot, al), n_max),
        KnotFamily::Custom(d) => d.truncate(n_max),
    }
}

/// V^{(N)}_α = Σ_{m+n≤N} d_{m,n} ({α}²)^m (t−1)^n.
pub fn truncated_jones(d: &DmnTable, n: usize, alpha: i64) -> Result<LaurentPoly> {
    if n > d.n_max() {
        return Err(Error::InsufficientTable { needed: n, available: d.n_max() });
    }
    let a2 = bracket_sq(alpha);
    let u = LaurentPoly::from_pairs(&[(1, 1), (0, -1)]);
    let mut a2p = vec![LaurentPoly::one()];
    let mut up = vec![LaurentPoly::one()];
    for i in 1..=n {
        a2p.push(a2p[i - 1].mul(&a2));
        up.push(up[i - 1].mul(&u));
    }
    let mut v = LaurentPoly::zero();
    for ((m, k), c) in d.entries() {
        if m + k <= n {
            v = v.add(&a2p[*m].mul(&up[*k]).scale(c));
        }
    }
    Ok(v)
}

/// The same truncation evaluated at t = q̌, where t − 1 = h.
pub fn truncated_jones_at_root(d: &DmnTable, n: usize, alpha: i64, k: u64) -> Result<CycInt> {
    if n > d.n_max() {
        return Err(Error::InsufficientTable { needed: n, available: d.n_max() });
    }
    let a2 = bracket_sq(alpha).eval_root(k);
    let h = CycInt::h(k);
    let mut a2p = vec![CycInt::one(k)];
    let mut hp = vec![CycInt::one(k)];
    for i in 1..=n {
        a2p.push(a2p[i - 1].mul(&a2));
        hp.push(hp[i - 1].mul(&h));
    }
    let mut v = CycInt::zero(k);
    for ((m, j), c) in d.entries() {
        if m + j <= n {
            v = v.add(&a2p[*m].mul(&hp[*j]).scale(c));
        }
    }
    Ok(v)
}

/// Exact V_α(q̌). Twist knots use the cyclotomic sum, which terminates at a
/// root of unity; other families evaluate the polynomial.
pub fn jones_at_root(knot: &Knot, alpha: i64, k: u64) -> Result<CycInt> {
    check_odd_prime(k)?;
    let r = alpha.rem_euclid(k as i64);
    if r == 0 {
        return Err(Error::ColorDivisible(alpha, k));
    }
    match &knot.family {
        KnotFamily::Unknot => Ok(CycInt::one(k)),
        KnotFamily::Twist(p) => {
            let ki = k as i64;
            let stop = r.min(ki - r);
            let a2 = bracket_sq(r).eval_root(k);
            let mut prod = CycInt::one(k);
            let mut v = CycInt::zero(k);
            for n in 0..stop {
                if n > 0 {
                    prod = prod.mul(&a2.sub(&bracket_sq(n).eval_root(k)));
                }
                let mut c = twist_coeff(*p, n as usize).shift(n * (n + 1) / 2);
                if n % 2 == 1 {
                    c = c.scale(&BigInt::from(-1));
                }
                if knot.mirror {
                    c = c.mirror();
                }
                v = v.add(&c.eval_root(k).mul(&prod));
            }
            Ok(v)
        }
        KnotFamily::Torus(..) => Ok(colored_jones(knot, r)?.eval_root(k)),
        KnotFamily::Custom(_) => Err(Error::Unsupported("custom knots have no exact root evaluation".into())),
    }
}

/// Δ″ of the Alexander polynomial at z = 0 with Δ(0) = 1.
pub fn alexander_second_derivative(knot: &Knot) -> Result<BigInt> {
    match &knot.family {
        KnotFamily::Unknot => Ok(BigInt::zero()),
        KnotFamily::Twist(n) => Ok(BigInt::from(2 * n)),
        KnotFamily::Torus(p, q) => Ok(BigInt::from((p * p - 1) * (q * q - 1) / 12)),
        // the leading Melvin-Morton coefficient of 1/Δ fixes d_{1,0} = −Δ″/2
        KnotFamily::Custom(d) => {
            if d.n_max() < 1 {
                return Err(Error::InsufficientTable { needed: 1, available: d.n_max() });
            }
            Ok(-2 * d.get(1, 0))
        }
    }
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}
