//! Invariants of rational homology spheres: Casson-Walker λ, exact SO(3)
//! WRT invariants in Z[q̌], their K-adic approximations and the Ohtsuki
//! series, for Seifert manifolds and surgeries on knots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cycring::{div_exact_h, q_pow, resolve_phase, CycGroup, CycInt, PhasedCyc};
use crate::error::{Error, Result};
use crate::formal::{dilate, laurent_cancel_div, log1p, one_minus_binomial, qpow_rational, sinhc, HSeries};
use crate::knots::{alexander_second_derivative, cyclotomic_dmn, jones_at_root, DmnTable, Knot};
use crate::numkit::{binom_int, binom_rat, check_odd_prime, decompose_xn2, dedekind_sum, kappa, legendre_symbol, rat, rat_int, rat_sign, vee_lift, Rat};

/// Seifert fibered space X((p_1,q_1),…,(p_N,q_N)), normalized to p_j > 0 and
/// with unit fibers absorbed while more than three fibers remain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    fibers: Vec<(i64, i64)>,
}

impl SeifertData {
    pub fn new(fibers: &[(i64, i64)]) -> Result<Self> {
        let mut fs = Vec::with_capacity(fibers.len());
        for &(p, q) in fibers {
            if p == 0 || p.gcd(&q) != 1 {
                return Err(Error::NotCoprime(p.to_string(), q.to_string()));
            }
            fs.push(if p < 0 { (-p, -q) } else { (p, q) });
        }
        while fs.len() > 3 {
            let Some(i) = fs.iter().position(|f| f.0 == 1) else { break };
            let (_, q) = fs.remove(i);
            let j = if i == 0 { 0 } else { i - 1 };
            let (p0, q0) = fs[j];
            fs[j] = (p0, q.checked_mul(p0).and_then(|t| t.checked_add(q0)).ok_or_else(overflow)?);
        }
        if fs.len() < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 fibers, got {}", fs.len())));
        }
        let x = SeifertData { fibers: fs };
        if x.homology().is_zero() {
            return Err(Error::NotRHS("H = 0".into()));
        }
        Ok(x)
    }

    pub fn fibers(&self) -> &[(i64, i64)] {
        &self.fibers
    }

    /// P = Π p_j.
    pub fn p_product(&self) -> BigInt {
        self.fibers.iter().map(|f| BigInt::from(f.0)).product()
    }

    /// H = P Σ q_j/p_j; |H| = |H_1(X, Z)|.
    pub fn homology(&self) -> BigInt {
        let p = self.p_product();
        self.fibers.iter().map(|&(pj, qj)| &p / pj * qj).sum()
    }
}

fn overflow() -> Error {
    Error::InvalidInput("fiber data overflows i64".into())
}

/// (p/q) surgery on a knot, normalized to p > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotSurgery {
    pub knot: Knot,
    p: i64,
    q: i64,
}

impl KnotSurgery {
    pub fn new(knot: Knot, p: i64, q: i64) -> Result<Self> {
        if p == 0 {
            return Err(Error::NotRHS("surgery coefficient p = 0".into()));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NotCoprime(p.to_string(), q.to_string()));
        }
        let (p, q) = if p < 0 { (-p, -q) } else { (p, q) };
        Ok(KnotSurgery { knot, p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Manifold {
    Knot(KnotSurgery),
    Seifert(SeifertData),
}

/// λ_0..λ_N of the Ohtsuki series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OhtsukiSeries {
    pub lambda: Vec<Rat>,
    pub lambda_cw: Rat,
    pub h1: BigInt,
}

impl OhtsukiSeries {
    pub fn order(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn as_series(&self) -> HSeries {
        HSeries::new(self.lambda.clone(), self.order())
    }

    /// λ̃_n defined by Σ λ_n h^n = q̌^{3λ_CW} Σ λ̃_n h^n.
    pub fn tilde(&self) -> Vec<Rat> {
        let n = self.order();
        qpow_rational(&(-rat_int(3) * &self.lambda_cw), n).mul(&self.as_series()).coeffs().to_vec()
    }
}

pub fn h1_order(m: &Manifold) -> BigInt {
    match m {
        Manifold::Knot(s) => BigInt::from(s.p),
        Manifold::Seifert(x) => x.homology().abs(),
    }
}

pub fn casson_walker(m: &Manifold) -> Result<Rat> {
    match m {
        Manifold::Knot(s) => casson_walker_knot(s),
        Manifold::Seifert(x) => casson_walker_seifert(x),
    }
}

fn casson_walker_knot(s: &KnotSurgery) -> Result<Rat> {
    let dpp = Rat::from_integer(alexander_second_derivative(&s.knot)?);
    Ok(-dedekind_sum(s.q, s.p)? + rat(s.q, s.p) * dpp)
}

fn casson_walker_seifert(x: &SeifertData) -> Result<Rat> {
    let p = Rat::from_integer(x.p_product());
    let h = Rat::from_integer(x.homology());
    let n = x.fibers.len() as i64;
    let inv_sq: Rat = x.fibers.iter().map(|f| rat(1, f.0 * f.0)).sum();
    let mut lam = &p / (rat_int(12) * &h) * (rat_int(2 - n) + inv_sq) - rat(rat_sign(&h), 4) + &h / (rat_int(12) * &p);
    for &(pj, qj) in &x.fibers {
        lam -= dedekind_sum(qj, pj)?;
    }
    Ok(lam)
}

/// Residue of a rational in [0, K), the first ∨-digit.
fn vee1(r: &Rat, k: u64) -> Result<i64> {
    Ok(vee_lift(r, k, 1)?.mod_k() as i64)
}

fn inv1(x: &BigInt, k: u64) -> Result<i64> {
    vee1(&Rat::from_integer(x.clone()).recip(), k)
}

fn modk(x: &BigInt, k: u64) -> i64 {
    x.mod_floor(&BigInt::from(k)).to_i64().unwrap()
}

/// The integers 4* = (1−κK)/4 and 2* = (1−κK)/2.
fn stars(k: u64) -> (i64, i64) {
    let t = 1 - kappa(k) as i64 * k as i64;
    (t / 4, t / 2)
}

pub fn wrt_exact(m: &Manifold, k: u64) -> Result<CycInt> {
    match m {
        Manifold::Knot(s) => wrt_knot_exact(s, k),
        Manifold::Seifert(x) => wrt_seifert_exact(x, k),
    }
}

/// Z′(M; q̌) for knot surgery by a finite sum over colors; needs p, q ≢ 0 mod K
/// and an exact root evaluation of the colored Jones polynomial.
pub fn wrt_knot_exact(s: &KnotSurgery, k: u64) -> Result<CycInt> {
    check_odd_prime(k)?;
    let ki = k as i64;
    if s.p % ki == 0 {
        return Err(Error::OrderDivisible(s.p.to_string(), k));
    }
    if s.q % ki == 0 {
        return Err(Error::NotInvertible(s.q.to_string(), k));
    }
    let (p, q) = (BigInt::from(s.p), BigInt::from(s.q));
    let (s4, s2) = stars(k);
    let ps = inv1(&p, k)?;
    let qs = inv1(&q, k)?;
    let l3 = vee1(&(rat_int(3) * casson_walker_knot(s)?), k)?;
    let dpp = modk(&alexander_second_derivative(&s.knot)?, k);
    let qm = modk(&q, k);
    let pm = modk(&p, k);
    let mut v = Vec::with_capacity(k as usize);
    for a in 0..ki {
        v.push(if a == 0 { None } else { Some(CycGroup::from_cyc(&jones_at_root(&s.knot, a, k)?)) });
    }
    let mut tot = CycGroup::zero(k);
    for mu in [1i64, -1] {
        let off = ps * (1 + mu * qm) % ki;
        let mut sm = CycGroup::zero(k);
        for a1 in 0..ki {
            if let Some(va) = &v[(a1 + off).rem_euclid(ki) as usize] {
                sm.add_assign(&va.shift(s4 % ki * qs % ki * pm % ki * (a1 * a1 % ki)));
            }
        }
        let e = l3 - 3 * ps % ki * qm % ki * dpp - s2 % ki * mu * ps % ki + s2;
        tot.add_assign(&sm.shift(e).scale(&BigInt::from(mu)));
    }
    let sq = s.q.signum();
    let scalar = Rat::from_integer(BigInt::from(legendre_symbol(&q.abs(), k) as i64 * sq));
    let phased = PhasedCyc::new(tot.to_cyc()).mul_phase(-2 + (kappa(k) as i64 + 1) * sq).mul_sqrtk(-1).mul_scalar(&scalar);
    Ok(div_exact_h(&resolve_phase(&phased)?, 1)?.neg())
}

/// The truncated Z′_(N) for p/q surgery on a knot with expansion table d:
/// the α-sum is done against the truncated Melvin-Morton expansion of
/// order N, so no exact Jones evaluation is needed. Δ″ is read off d_{1,0}.
pub fn wrt_knot_truncated(d: &DmnTable, p: i64, q: i64, k: u64, n: usize) -> Result<CycInt> {
    check_odd_prime(k)?;
    if n > d.n_max() {
        return Err(Error::InsufficientTable { needed: n, available: d.n_max() });
    }
    let s = KnotSurgery::new(Knot::custom(d.clone()), p, q)?;
    let ki = k as i64;
    if s.p % ki == 0 {
        return Err(Error::OrderDivisible(s.p.to_string(), k));
    }
    let (_, s2) = stars(k);
    let pb = BigInt::from(s.p);
    let ps = inv1(&pb, k)?;
    let qm = s.q.rem_euclid(ki);
    let dpp_int = -2 * d.get(1, 0);
    let dpp = modk(&dpp_int, k);
    let lam = -dedekind_sum(s.q, s.p)? + rat(s.q, s.p) * Rat::from_integer(dpp_int);
    let l3 = vee1(&(rat_int(3) * lam), k)?;
    let h = CycInt::h(k);
    let mut hp = vec![CycInt::one(k)];
    for i in 1..=n {
        hp.push(hp[i - 1].mul(&h));
    }
    let mut tot = CycInt::zero(k);
    for mu in [1i64, -1] {
        let x = ps * (1 + mu * qm) % ki;
        let r = ps * qm % ki;
        let mut inner = CycInt::zero(k);
        for m in 0..=n {
            let mut a = CycGroup::zero(k);
            for kk in 0..=2 * m {
                let j = m as i64 - kk as i64;
                let c = binom_int(&BigInt::from(2 * m), kk);
                let c = if kk % 2 == 1 { -c } else { c };
                a.add_monomial(x * j - r * (j * j % ki), &c);
            }
            let mut dm = CycInt::zero(k);
            for nn in 0..=n - m {
                let c = d.get(m, nn);
                if !c.is_zero() {
                    dm = dm.add(&hp[nn].scale(&c));
                }
            }
            inner = inner.add(&a.to_cyc().mul(&dm));
        }
        let e = l3 - 3 * ps * qm % ki * dpp - s2 % ki * mu * ps % ki + s2;
        let t = q_pow(k, e).mul(&inner);
        tot = if mu == 1 { tot.add(&t) } else { tot.sub(&t) };
    }
    let lp = legendre_symbol(&pb, k) as i64;
    Ok(div_exact_h(&tot, 1)?.scale(&BigInt::from(-lp)))
}

fn check_seifert_prime(x: &SeifertData, k: u64) -> Result<()> {
    check_odd_prime(k)?;
    let kb = BigInt::from(k);
    let h = x.homology();
    if (&h % &kb).is_zero() {
        return Err(Error::HomologyDivisible(h.to_string(), k));
    }
    for &(p, q) in &x.fibers {
        if p % k as i64 == 0 || q % k as i64 == 0 {
            return Err(Error::FiberDivisible(format!("({p},{q})"), k));
        }
    }
    Ok(())
}

/// The μ-dependent pieces of the Seifert sum, all mod K: the exponent of the
/// overall q̌ power and the shift β − β′.
struct SeifertSign {
    exponent: i64,
    shift: i64,
}

fn seifert_signs(x: &SeifertData, k: u64, mu1: i64) -> Result<SeifertSign> {
    let ki = k as i64;
    let (_, s2) = stars(k);
    let nf = x.fibers.len() as i64;
    let pst: Vec<i64> = x.fibers.iter().map(|f| inv1(&BigInt::from(f.0), k)).collect::<Result<_>>()?;
    let mus: Vec<i64> = (0..pst.len()).map(|i| if i == 0 { mu1 } else { 1 }).collect();
    let hs = inv1(&x.homology(), k)?;
    let pm = modk(&x.p_product(), k);
    let sum_mp: i64 = mus.iter().zip(&pst).map(|(m, p)| m * p).sum::<i64>().rem_euclid(ki);
    let mut pair = 0i64;
    for i in 0..pst.len() {
        for j in i + 1..pst.len() {
            pair = (pair + mus[i] * mus[j] * pst[i] % ki * pst[j]).rem_euclid(ki);
        }
    }
    let ls = (sum_mp - nf + 2).rem_euclid(ki);
    let s2m = s2.rem_euclid(ki);
    let inner = (s2m * ((nf - 1) * (nf - 2) % ki) - (nf - 2) * sum_mp + pair).rem_euclid(ki);
    let e2 = (s2m * hs % ki * pm % ki * inner + s2m).rem_euclid(ki);
    let l3 = vee1(&(rat_int(3) * casson_walker_seifert(x)?), k)?;
    Ok(SeifertSign { exponent: (l3 + e2).rem_euclid(ki), shift: (-hs * pm % ki * ls).rem_euclid(ki) })
}

/// Z′(X; q̌) for a Seifert manifold by a finite Gauss-type sum; needs every
/// p_j, q_j and H prime to K.
pub fn wrt_seifert_exact(x: &SeifertData, k: u64) -> Result<CycInt> {
    check_seifert_prime(x, k)?;
    let ki = k as i64;
    let (s4, _) = stars(k);
    let h = x.homology();
    let p = x.p_product();
    let pst: Vec<i64> = x.fibers.iter().map(|f| inv1(&BigInt::from(f.0), k)).collect::<Result<_>>()?;
    let quad = s4.rem_euclid(ki) * inv1(&p, k)? % ki * modk(&h, k) % ki;
    let one = BigInt::one();
    let mut tot = CycGroup::zero(k);
    for mu1 in [1i64, -1] {
        let sg = seifert_signs(x, k, mu1)?;
        let mut sm = CycGroup::zero(k);
        for b1 in 0..ki {
            let b = (b1 + sg.shift) % ki;
            if b == 0 {
                continue;
            }
            let mut g = CycGroup::monomial(k, -quad * (b1 * b1 % ki), one.clone());
            for &pj in &pst[2..] {
                let mut f = CycGroup::zero(k);
                for i in 0..pj {
                    f.add_monomial(i * b, &one);
                }
                g = g.mul(&f);
            }
            sm.add_assign(&g);
        }
        tot.add_assign(&sm.shift(sg.exponent).scale(&BigInt::from(mu1)));
    }
    let scalar = legendre_symbol(&h.abs(), k) as i64 * h.signum().to_i64().unwrap() * legendre_symbol(&(&p * &h), k) as i64;
    let phased = PhasedCyc::new(tot.to_cyc()).mul_phase(1 - kappa(k) as i64).mul_sqrtk(-1).mul_scalar(&rat_int(scalar));
    div_exact_h(&resolve_phase(&phased)?, 1)
}

/// Working K-adic precision of the truncated Seifert sum with `m_terms` terms.
pub fn kadic_precision(m_terms: usize) -> u32 {
    m_terms as u32 + 3
}

/// The Seifert sum with the Gauss integral done K-adically and only the
/// first `m_terms` terms of the binomial expansion kept. Coefficients are
/// reduced into [0, K^{P−1}) where P = kadic_precision(m_terms); the division
/// by h costs one digit.
pub fn wrt_seifert_kadic(x: &SeifertData, k: u64, m_terms: usize) -> Result<CycInt> {
    check_seifert_prime(x, k)?;
    if m_terms == 0 {
        return Err(Error::InvalidInput("need at least one term".into()));
    }
    let prec = kadic_precision(m_terms);
    let md = BigInt::from(k).pow(prec);
    let h = x.homology();
    let xr = Rat::new(x.p_product(), h.clone());
    let kmax = 2 * (m_terms - 1);
    let imax = kmax + (k as usize - 1) * (prec as usize + 1);
    let g = g_series(x, imax)?;
    let gk: Vec<BigInt> = g.coeffs().iter().map(|c| vee_lift(c, k, prec).map(|r| r.value().clone())).collect::<Result<_>>()?;
    let xb: Vec<BigInt> = (0..m_terms).map(|l| vee_lift(&binom_rat(&xr, l), k, prec).map(|r| r.value().clone())).collect::<Result<_>>()?;
    let h1 = CycInt::h(k);
    let mut tot = CycInt::zero(k);
    for mu1 in [1i64, -1] {
        let sg = seifert_signs(x, k, mu1)?;
        let q = q_pow(k, sg.shift);
        let t0 = CycInt::one(k).sub(&q);
        let mut t0p = vec![CycInt::one(k)];
        for i in 1..=imax {
            t0p.push(t0p[i - 1].mul(&t0).reduce_mod(&md));
        }
        let nq = q.neg();
        let mut rows = Vec::with_capacity(kmax + 1);
        let mut nqp = CycInt::one(k);
        for kk in 0..=kmax {
            let mut r = CycInt::zero(k);
            for i in kk..=imax {
                let c = &gk[i] * binom_int(&BigInt::from(i), kk);
                if !c.is_zero() {
                    r = r.add(&t0p[i - kk].scale(&c));
                }
            }
            rows.push(r.mul(&nqp).reduce_mod(&md));
            nqp = nqp.mul(&nq);
        }
        let mut s = CycInt::zero(k);
        let mut hm = CycInt::one(k);
        for m in 0..m_terms {
            let dec = decompose_xn2(m);
            let mut acc = CycInt::zero(k);
            for (&(l, kk), c) in &dec.entries {
                acc = acc.add(&rows[kk].scale(&(c * &xb[l])));
            }
            s = s.add(&acc.mul(&hm)).reduce_mod(&md);
            hm = hm.mul(&h1);
        }
        let t = q_pow(k, sg.exponent).mul(&s);
        tot = if mu1 == 1 { tot.add(&t) } else { tot.sub(&t) };
    }
    let tot = tot.reduce_mod(&md);
    let sc = legendre_symbol(&h.abs(), k) as i64 * h.signum().to_i64().unwrap();
    let out = div_exact_h(&tot, 1)?.scale(&BigInt::from(sc));
    Ok(out.reduce_mod(&BigInt::from(k).pow(prec - 1)))
}

/// g(T) = Π_{j≥3} (1 − (1−T)^{1/p_j}) / T^{N−2}.
fn g_series(x: &SeifertData, order: usize) -> Result<HSeries> {
    let nf = x.fibers.len();
    let full = order + nf - 2;
    let mut prod = HSeries::one(full);
    for &(pj, _) in &x.fibers[2..] {
        prod = prod.mul(&one_minus_binomial(&rat(1, pj), full));
    }
    laurent_cancel_div(&prod, nf - 2)
}

pub fn ohtsuki(m: &Manifold, n: usize) -> Result<OhtsukiSeries> {
    match m {
        Manifold::Knot(s) => ohtsuki_knot(s, n),
        Manifold::Seifert(x) => ohtsuki_seifert(x, n),
    }
}

/// Working order in h used for an Ohtsuki series of order N.
pub fn working_order(n: usize) -> usize {
    n + 2
}

pub fn ohtsuki_knot(s: &KnotSurgery, n: usize) -> Result<OhtsukiSeries> {
    ohtsuki_knot_at_order(s, n, working_order(n))
}

/// λ_0..λ_N computed with every series truncated at h^w and d_{m,n} used for
/// m + n ≤ w.
pub fn ohtsuki_knot_at_order(s: &KnotSurgery, n: usize, w: usize) -> Result<OhtsukiSeries> {
    if w < n + 1 {
        return Err(Error::OrderExceeded { requested: n + 1, available: w });
    }
    let d = cyclotomic_dmn(&s.knot, w)?;
    let dpp = Rat::from_integer(alexander_second_derivative(&s.knot)?);
    let lam = casson_walker_knot(s)?;
    let (p, q) = (s.p, s.q);
    let r = rat(q, p);
    let mut tot = HSeries::zero(w);
    for mu in [1i64, -1] {
        let x = rat(1 + mu * q, p);
        let e: Vec<HSeries> = (-(w as i64)..=w as i64).map(|j| qpow_rational(&(&x * rat_int(j) - &r * rat_int(j * j)), w)).collect();
        let mut inner = HSeries::zero(w);
        for m in 0..=w {
            let mut dm = HSeries::zero(w);
            for nn in 0..=w - m {
                let c = d.get(m, nn);
                if !c.is_zero() {
                    dm = dm.add(&HSeries::monomial(nn, Rat::from_integer(c), w));
                }
            }
            if dm.valuation().is_none() {
                continue;
            }
            let mut a = HSeries::zero(w);
            for kk in 0..=2 * m {
                let j = m as i64 - kk as i64;
                let c = Rat::from_integer(binom_int(&BigInt::from(2 * m), kk));
                let c = if kk % 2 == 1 { -c } else { c };
                a.add_assign_scaled(&e[(j + w as i64) as usize], &c);
            }
            inner = inner.add(&a.mul(&dm));
        }
        let pre = qpow_rational(&(-rat_int(3) * &r * &dpp - rat(mu, 2 * p) + rat(1, 2)), w);
        let t = pre.mul(&inner);
        tot = if mu == 1 { tot.add(&t) } else { tot.sub(&t) };
    }
    if !tot.coeff(0).is_zero() {
        return Err(Error::NonvanishingConstant(tot.coeff(0).to_string()));
    }
    let res = tot.div_xk(1)?.scale(&rat_int(-p)).mul(&qpow_rational(&(rat_int(3) * &lam), w - 1));
    Ok(OhtsukiSeries { lambda: res.truncate(n).coeffs().to_vec(), lambda_cw: lam, h1: BigInt::from(p) })
}

pub fn ohtsuki_seifert(x: &SeifertData, n: usize) -> Result<OhtsukiSeries> {
    ohtsuki_seifert_at_order(x, n, working_order(n))
}

pub fn ohtsuki_seifert_at_order(x: &SeifertData, n: usize, w: usize) -> Result<OhtsukiSeries> {
    if w < n + 1 {
        return Err(Error::OrderExceeded { requested: n + 1, available: w });
    }
    let nf = x.fibers.len();
    let h = x.homology();
    let xr = Rat::new(x.p_product(), h.clone());
    let lam = casson_walker_seifert(x)?;
    let inv: Vec<Rat> = x.fibers.iter().map(|f| rat(1, f.0)).collect();
    let kmax = 2 * w;
    let g = g_series(x, kmax + w)?;
    let xb: Vec<Rat> = (0..=w).map(|l| binom_rat(&xr, l)).collect();
    let decs: Vec<_> = (0..=w).map(decompose_xn2).collect();
    let mut tot = HSeries::zero(w);
    for mu1 in [1i64, -1] {
        let mus: Vec<Rat> = (0..nf).map(|i| rat_int(if i == 0 { mu1 } else { 1 })).collect();
        let sum1: Rat = mus.iter().zip(&inv).map(|(m, i)| m * i).sum();
        let mut pair = Rat::zero();
        for i in 0..nf {
            for j in i + 1..nf {
                pair += &mus[i] * &mus[j] * &inv[i] * &inv[j];
            }
        }
        let nfr = nf as i64;
        let l = &sum1 - rat_int(nfr - 2);
        let fx = rat(1, 2) * &xr * (rat((nfr - 1) * (nfr - 2), 2) - rat_int(nfr - 2) * &sum1 + pair);
        let q = qpow_rational(&(-&xr * &l), w);
        let t0 = HSeries::one(w).sub(&q);
        let mut t0p = vec![HSeries::one(w)];
        for i in 1..=w {
            t0p.push(t0p[i - 1].mul(&t0));
        }
        let nq = q.neg();
        let mut rows = Vec::with_capacity(kmax + 1);
        let mut nqp = HSeries::one(w);
        for kk in 0..=kmax {
            let mut r = HSeries::zero(w);
            for e in 0..=w {
                let c = g.coeff(kk + e) * Rat::from_integer(binom_int(&BigInt::from(kk + e), kk));
                if !c.is_zero() {
                    r.add_assign_scaled(&t0p[e], &c);
                }
            }
            rows.push(r.mul(&nqp));
            nqp = nqp.mul(&nq);
        }
        let mut s = HSeries::zero(w);
        for (m, dec) in decs.iter().enumerate() {
            let mut acc = HSeries::zero(w);
            for (&(l, kk), c) in &dec.entries {
                acc.add_assign_scaled(&rows[kk], &(Rat::from_integer(c.clone()) * &xb[l]));
            }
            s = s.add(&acc.mul_xk(m).truncate(w));
        }
        let pre = qpow_rational(&(rat_int(3) * &lam + fx + rat(1, 2)), w);
        let t = pre.mul(&s);
        tot = if mu1 == 1 { tot.add(&t) } else { tot.sub(&t) };
    }
    if !tot.coeff(0).is_zero() {
        return Err(Error::NonvanishingConstant(tot.coeff(0).to_string()));
    }
    let res = tot.div_xk(1)?.scale(&Rat::from_integer(h.clone()));
    Ok(OhtsukiSeries { lambda: res.truncate(n).coeffs().to_vec(), lambda_cw: lam, h1: h.abs() })
}

/// G(x) = Π_j 2 sinh(x/p_j) / (2 sinh x)^{N−2}, the one-loop integrand.
pub fn loop_integrand(x: &SeifertData, order: usize) -> Result<HSeries> {
    let nf = x.fibers.len();
    let base = sinhc(order);
    let mut num = HSeries::one(order);
    for &(pj, _) in &x.fibers {
        num = num.mul(&dilate(&base, &rat(1, pj)));
    }
    let den = base.pow(nf - 2);
    let c = Rat::new(BigInt::from(4), x.p_product());
    Ok(num.div_unit(&den)?.scale(&c).mul_xk(2).truncate(order))
}

/// The same series from the stationary-phase expansion, as coefficients of
/// ℏ^n with q̌ = e^ℏ.
pub fn ohtsuki_seifert_loop(x: &SeifertData, n: usize) -> Result<HSeries> {
    let h = Rat::from_integer(x.homology());
    let p = Rat::from_integer(x.p_product());
    let xr = &p / &h;
    let g = loop_integrand(x, 2 * (n + 1))?;
    let mut s = HSeries::zero(n);
    let mut fac_m = Rat::one();
    let mut fac_2m = Rat::one();
    let mut xm = Rat::one();
    for m in 1..=n + 1 {
        fac_m *= rat_int(m as i64);
        fac_2m *= rat_int((2 * m - 1) as i64) * rat_int((2 * m) as i64);
        xm *= &xr / rat_int(4);
        let c = &xm / &fac_m * &fac_2m * g.coeff(2 * m);
        s = s.add(&HSeries::monomial(m - 1, c, n));
    }
    let mut ded = Rat::zero();
    for &(pj, qj) in &x.fibers {
        ded += dedekind_sum(qj, pj)?;
    }
    let e = (&h / &p - rat_int(3 * rat_sign(&h)) - rat_int(12) * ded) / rat_int(4);
    let mut ex = vec![Rat::one()];
    for i in 1..=n {
        let prev = ex[i - 1].clone();
        ex.push(prev * &e / rat_int(i as i64));
    }
    let ex = HSeries::new(ex, n);
    let half = dilate(&sinhc(n), &rat(1, 2));
    Ok(s.mul(&ex).div_unit(&half)?.scale(&(h / rat_int(2))))
}

/// Re-expand a series in ℏ as a series in h = e^ℏ − 1.
pub fn hbar_to_h(s: &HSeries) -> Result<HSeries> {
    s.compose(&log1p(s.order()))
}
