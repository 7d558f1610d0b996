//! Property checks shared by the property test target and the acceptance run.
//! Each returns Err with the failing case.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qwrt::cycring::{div_exact_h, gauss_sum, h_valuation, spadesuit, CycInt, HPoly, Valuation};
use qwrt::formal::{eps_derivative, qpow_rational, BiSeries, HSeries};
use qwrt::invariants::{casson_walker, h1_order, ohtsuki, wrt_exact, KnotSurgery, Manifold, SeifertData};
use qwrt::knots::{colored_jones, cyclotomic_dmn, dmn_from_colors, jones_at_root, truncated_jones, Knot, KnotFamily};
use qwrt::numkit::{binom_int, decompose_xn2, dedekind_sum, dedekind_sum_sawtooth, is_prime, kadic_inverse, legendre_i64, rat, vee_lift, Rat};
use qwrt::verify::ohtsuki_congruence_check;

pub type Check = std::result::Result<(), String>;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>) -> Check
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&s, f).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![5u64, 7, 11])
}

fn cyc(k: u64) -> impl Strategy<Value = CycInt> {
    prop::collection::vec(-50i64..50, k as usize - 1).prop_map(move |c| CycInt::from_i64s(k, &c).unwrap())
}

fn cyc_triple() -> impl Strategy<Value = (CycInt, CycInt, CycInt)> {
    primes().prop_flat_map(|k| (cyc(k), cyc(k), cyc(k)))
}

pub fn ring_laws() -> Check {
    run(96, cyc_triple(), |(a, b, c)| {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&CycInt::one(a.prime())), a);
        Ok(())
    })
}

pub fn root_of_unity_identity() -> Check {
    for k in (5..=31).filter(|&k| is_prime(k)) {
        let q = CycInt::h(k).add(&CycInt::one(k));
        ensure(q.pow(k) == CycInt::one(k), || format!("(1+h)^{k} != 1"))?;
    }
    Ok(())
}

pub fn div_h_inverts_mul() -> Check {
    run(64, primes().prop_flat_map(cyc), |x| {
        let k = x.prime();
        prop_assert_eq!(div_exact_h(&CycInt::h(k).mul(&x), 1).unwrap(), x);
        Ok(())
    })
}

pub fn spadesuit_divisibility() -> Check {
    for k in [5u64, 7] {
        for n in 0..=3usize {
            for m in 0..=k as usize - 2 {
                let x = spadesuit(&HPoly::monomial(k, n * (k as usize - 1) + m)).unwrap();
                let kn = BigInt::from(k).pow(n as u32);
                ensure(x.coeffs().iter().all(|c| (c % &kn).is_zero()), || format!("K={k} n={n} m={m}: {x}"))?;
            }
        }
    }
    Ok(())
}

/// Solve A·x = b over Q by Gaussian elimination; A square and invertible.
fn solve_rational(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// G = h^{(K−1)/2}·w with w a unit: x solving G·x = h^{(K−1)/2} is integral
/// and inverts w.
pub fn gauss_valuation_and_unit() -> Check {
    for k in [5u64, 7, 11, 13] {
        let g = gauss_sum(k).unwrap();
        let half = (k as usize - 1) / 2;
        ensure(h_valuation(&g) == Valuation::Finite(half as u64), || format!("K={k}: valuation {}", h_valuation(&g)))?;
        let w = div_exact_h(&g, half).unwrap();
        let d = k as usize - 1;
        let cols: Vec<CycInt> = (0..d)
            .map(|j| {
                let mut e = vec![BigInt::zero(); d];
                e[j] = BigInt::one();
                g.mul(&CycInt::from_coeffs(k, e).unwrap())
            })
            .collect();
        let a: Vec<Vec<Rat>> = (0..d).map(|r| (0..d).map(|c| Rat::from_integer(cols[c].coeffs()[r].clone())).collect()).collect();
        let target = spadesuit(&HPoly::monomial(k, half)).unwrap();
        let b: Vec<Rat> = target.coeffs().iter().map(|c| Rat::from_integer(c.clone())).collect();
        let x = solve_rational(a, b).ok_or_else(|| format!("K={k}: G not invertible over Q"))?;
        ensure(x.iter().all(|v| v.denom().is_one()), || format!("K={k}: inverse not integral"))?;
        let x = CycInt::from_coeffs(k, x.into_iter().map(|v| v.numer().clone()).collect()).unwrap();
        ensure(x.mul(&w) == CycInt::one(k), || format!("K={k}: x·w != 1"))?;
    }
    Ok(())
}

fn coprime_pair(lim: i64) -> impl Strategy<Value = (i64, i64)> {
    (-lim..=lim, -lim..=lim).prop_filter("nonzero coprime", |&(p, q)| p != 0 && q != 0 && p.gcd(&q) == 1)
}

/// s(p,q) + s(q,p) = (p² + q² + 1)/(12pq) − sign(pq)/4, both sides from the sawtooth sum.
pub fn dedekind_reciprocity() -> Check {
    run(200, coprime_pair(10_000), |(p, q)| {
        let lhs = dedekind_sum_sawtooth(p, q).unwrap() + dedekind_sum_sawtooth(q, p).unwrap();
        let (pb, qb) = (BigInt::from(p), BigInt::from(q));
        let rhs = Rat::new(&pb * &pb + &qb * &qb + 1, 12 * &pb * &qb) - rat((p * q).signum(), 4);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(dedekind_sum(p, q).unwrap(), dedekind_sum_sawtooth(p, q).unwrap());
        Ok(())
    })
}

pub fn dedekind_symmetries() -> Check {
    run(128, coprime_pair(500), |(p, q)| {
        let s = dedekind_sum(p, q).unwrap();
        prop_assert_eq!(dedekind_sum(-p, q).unwrap(), -s.clone());
        prop_assert_eq!(dedekind_sum(p + q, q).unwrap(), s);
        Ok(())
    })
}

pub fn kadic_inverse_laws() -> Check {
    run(128, (primes(), 1i64..1_000_000, 1u32..8), |(k, q, m)| {
        prop_assume!(q % k as i64 != 0);
        let qb = BigInt::from(q);
        let r = kadic_inverse(&qb, k, m).unwrap();
        prop_assert!((&qb * r.value() - BigInt::one()).mod_floor(&r.modulus()).is_zero());
        for m2 in 1..m {
            prop_assert_eq!(kadic_inverse(&qb, k, m2).unwrap(), r.truncate(m2).unwrap());
        }
        Ok(())
    })
}

pub fn legendre_multiplicative() -> Check {
    for k in (3..=50).filter(|&k| is_prime(k)) {
        for a in 1..k as i64 {
            for b in 1..k as i64 {
                ensure(legendre_i64(a * b, k) == legendre_i64(a, k) * legendre_i64(b, k), || format!("K={k} a={a} b={b}"))?;
            }
        }
    }
    Ok(())
}

/// binom(x·n², m) = Σ C_{l,k;m} binom(x,l) binom(n,k) on [−5,5]².
pub fn decompose_lattice() -> Check {
    for m in 0..=8 {
        let d = decompose_xn2(m);
        for x in -5i64..=5 {
            for n in -5i64..=5 {
                let lhs = binom_int(&BigInt::from(x * n * n), m);
                ensure(d.evaluate(x, n) == lhs, || format!("m={m} x={x} n={n}"))?;
            }
        }
    }
    Ok(())
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..40, 1i64..=12).prop_map(|(a, b)| rat(a, b))
}

pub fn qpow_exponent_law() -> Check {
    run(64, (small_rat(), small_rat()), |(x, y)| {
        prop_assert_eq!(qpow_rational(&x, 16).mul(&qpow_rational(&y, 16)), qpow_rational(&(&x + &y), 16));
        Ok(())
    })
}

/// Every denominator of q̌^{p/q} has only prime factors of q.
pub fn qpow_denominators() -> Check {
    run(96, (-60i64..60, 1i64..=30), |(a, b)| {
        prop_assume!(a.gcd(&b) == 1);
        let s = qpow_rational(&rat(a, b), 20);
        for c in s.coeffs() {
            let mut d = c.denom().clone();
            let bb = BigInt::from(b);
            loop {
                let g = d.gcd(&bb);
                if g.is_one() {
                    break;
                }
                d /= g;
            }
            prop_assert!(d.is_one(), "denominator {} for {}/{}", c.denom(), a, b);
        }
        Ok(())
    })
}

pub fn truncation_consistency() -> Check {
    run(48, (small_rat(), small_rat(), 1usize..10), |(x, y, n2)| {
        let a = qpow_rational(&x, 12).mul(&qpow_rational(&y, 12)).truncate(n2);
        prop_assert_eq!(a, qpow_rational(&x, n2).mul(&qpow_rational(&y, n2)));
        Ok(())
    })
}

fn bi_series() -> impl Strategy<Value = BiSeries> {
    prop::collection::vec(prop::collection::vec(-9i64..9, 5), 5).prop_map(|rows| {
        let rows: Vec<HSeries> = rows.into_iter().map(|r| HSeries::new(r.into_iter().map(|v| rat(v, 1)).collect(), 4)).collect();
        BiSeries::from_rows(&rows, 4)
    })
}

pub fn eps_derivative_rules() -> Check {
    run(48, (bi_series(), bi_series(), -5i64..5), |(f, g, c)| {
        let c = rat(c, 1);
        for k in 0..=4 {
            let lin = eps_derivative(&f.scale(&c).add(&g), k).unwrap();
            prop_assert_eq!(lin, eps_derivative(&f, k).unwrap().scale(&c).add(&eps_derivative(&g, k).unwrap()));
            let mut leib = HSeries::zero(4);
            for i in 0..=k {
                leib = leib.add(&eps_derivative(&f, i).unwrap().mul(&eps_derivative(&g, k - i).unwrap()));
            }
            prop_assert_eq!(eps_derivative(&f.mul(&g), k).unwrap(), leib);
        }
        Ok(())
    })
}

pub fn test_knots() -> Vec<Knot> {
    vec![
        Knot::figure_eight(),
        Knot::stevedore(),
        Knot::right_trefoil(),
        Knot::left_trefoil(),
        Knot::new(KnotFamily::Twist(2), false).unwrap(),
        Knot::new(KnotFamily::Torus(2, 5), false).unwrap(),
        Knot::new(KnotFamily::Torus(3, -4), false).unwrap(),
    ]
}

pub fn jones_trivial_color() -> Check {
    for knot in test_knots() {
        ensure(colored_jones(&knot, 1).unwrap().coeff(0) == BigInt::one(), || format!("{knot:?}: V_1"))?;
        let d = cyclotomic_dmn(&knot, 6).unwrap();
        let mut one = vec![BigInt::zero(); 7];
        one[0] = BigInt::one();
        ensure(truncated_jones(&d, 6, 1).unwrap().taylor_u(6) == one, || format!("{knot:?}: table V_1"))?;
        for k in [5u64, 7] {
            ensure(jones_at_root(&knot, 1, k).unwrap() == CycInt::one(k), || format!("{knot:?}: root V_1"))?;
        }
    }
    Ok(())
}

pub fn jones_color_symmetry() -> Check {
    for knot in test_knots() {
        let d = cyclotomic_dmn(&knot, 6).unwrap();
        for a in 1..=6 {
            ensure(truncated_jones(&d, 6, a).unwrap() == truncated_jones(&d, 6, -a).unwrap(), || format!("{knot:?} α={a}"))?;
        }
    }
    Ok(())
}

pub fn table_matches_polynomial() -> Check {
    for knot in test_knots().into_iter().take(4) {
        let nmax = 8;
        let d = cyclotomic_dmn(&knot, nmax).unwrap();
        for a in 1..=6 {
            let t = truncated_jones(&d, nmax, a).unwrap().taylor_u(nmax);
            let p = colored_jones(&knot, a).unwrap().taylor_u(nmax);
            ensure(t == p, || format!("{knot:?} α={a}"))?;
        }
    }
    Ok(())
}

/// V_{α+K}(q̌) = V_α(q̌) from the polynomials themselves.
pub fn jones_root_periodicity() -> Check {
    for knot in test_knots().into_iter().take(4) {
        let k = 5u64;
        for a in 1..5 {
            let v1 = colored_jones(&knot, a).unwrap().eval_root(k);
            let v2 = colored_jones(&knot, a + k as i64).unwrap().eval_root(k);
            ensure(v1 == v2, || format!("{knot:?} α={a}"))?;
            ensure(jones_at_root(&knot, a, k).unwrap() == v1, || format!("{knot:?} α={a} root route"))?;
        }
    }
    Ok(())
}

/// Every d_{m,n} with m + n ≤ 24 is integral; the solve from colored Jones
/// polynomials raises on a non-integral entry.
pub fn dmn_integrality_audit() -> Check {
    for knot in [Knot::figure_eight(), Knot::stevedore(), Knot::right_trefoil()] {
        let d = dmn_from_colors(|a| colored_jones(&knot, a), 24).map_err(|e| format!("{knot:?}: {e}"))?;
        if !matches!(knot.family, KnotFamily::Torus(..)) {
            ensure(d == cyclotomic_dmn(&knot, 24).unwrap(), || format!("{knot:?}: routes differ"))?;
        }
    }
    Ok(())
}

fn fiber() -> impl Strategy<Value = (i64, i64)> {
    (2i64..10, -12i64..12).prop_filter("coprime", |&(p, q)| q != 0 && p.gcd(&q) == 1)
}

fn seifert() -> impl Strategy<Value = SeifertData> {
    prop::collection::vec(fiber(), 3..=4).prop_filter_map("rational homology sphere", |f| SeifertData::new(&f).ok())
}

fn admissible(x: &SeifertData, k: u64) -> bool {
    let ki = k as i64;
    let h = x.homology();
    !(h.clone() % BigInt::from(k)).is_zero() && x.fibers().iter().all(|&(p, q)| p % ki != 0 && q % ki != 0)
}

/// Z′ resolves without a phase error, and the Ohtsuki congruence holds.
pub fn seifert_congruences() -> Check {
    run(20, (seifert(), prop::sample::select(vec![5u64, 7])), |(x, k)| {
        prop_assume!(admissible(&x, k));
        let m = Manifold::Seifert(x);
        prop_assert!(wrt_exact(&m, k).is_ok());
        let r = ohtsuki_congruence_check("x", &m, k).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        Ok(())
    })
}

/// Exchanging fibers leaves Z′ and the series unchanged.
pub fn fiber_order_independence() -> Check {
    run(12, (seifert(), prop::sample::select(vec![5u64, 7])), |(x, k)| {
        prop_assume!(admissible(&x, k));
        let mut f = x.fibers().to_vec();
        f.rotate_left(1);
        let y = SeifertData::new(&f).unwrap();
        let (mx, my) = (Manifold::Seifert(x), Manifold::Seifert(y));
        prop_assert_eq!(wrt_exact(&mx, k).unwrap(), wrt_exact(&my, k).unwrap());
        prop_assert_eq!(ohtsuki(&mx, 3).unwrap().lambda, ohtsuki(&my, 3).unwrap().lambda);
        Ok(())
    })
}

fn surgery() -> impl Strategy<Value = KnotSurgery> {
    (0usize..4, 1i64..6, -6i64..7).prop_filter_map("coprime", |(i, p, q)| KnotSurgery::new(test_knots()[i].clone(), p, q).ok().filter(|_| q != 0))
}

fn in_z_inv(r: &Rat, h: &BigInt) -> bool {
    let mut d = r.denom().clone();
    loop {
        let g = d.gcd(h);
        if g.is_one() {
            return d.is_one();
        }
        d /= g;
    }
}

/// λ_0 = 1, λ_1 = 3λ_CW, λ_n ∈ Z[1/2, 1/|H₁|], λ̃_n ∈ Z[1/|H₁|] and the
/// Casson-Walker parity rules.
fn series_facts(m: &Manifold) -> std::result::Result<(), TestCaseError> {
    let s = ohtsuki(m, 4).unwrap();
    let h = h1_order(m);
    let lam = casson_walker(m).unwrap();
    prop_assert_eq!(&s.lambda[0], &Rat::one());
    prop_assert_eq!(&s.lambda[1], &(Rat::from_integer(3.into()) * &lam));
    let h2 = &h * 2;
    for l in &s.lambda {
        prop_assert!(in_z_inv(l, &h2), "λ = {}", l);
    }
    for l in s.tilde() {
        prop_assert!(in_z_inv(&l, &h), "λ̃ = {}", l);
    }
    if h.is_one() {
        prop_assert!(lam.denom().is_one() && lam.numer().is_even(), "λ_CW = {}", lam);
        prop_assert!((s.lambda[2].numer() % BigInt::from(3)).is_zero() && s.lambda[2].denom().is_one());
    } else {
        prop_assert!((lam * Rat::from_integer(6 * h)).denom().is_one());
    }
    Ok(())
}

pub fn series_identities() -> Check {
    run(24, seifert(), |x| series_facts(&Manifold::Seifert(x)))?;
    run(24, surgery(), |s| series_facts(&Manifold::Knot(s)))
}

pub fn surgery_congruences() -> Check {
    run(24, (surgery(), prop::sample::select(vec![5u64, 7])), |(s, k)| {
        let ki = k as i64;
        prop_assume!(s.p() % ki != 0 && s.q() % ki != 0);
        let m = Manifold::Knot(s);
        let r = ohtsuki_congruence_check("x", &m, k).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        Ok(())
    })
}

/// The ∨-lift of an integer is its residue.
pub fn vee_lift_integers() -> Check {
    run(64, (primes(), -100_000i64..100_000, 1u32..6), |(k, n, m)| {
        let r = vee_lift(&rat(n, 1), k, m).unwrap();
        prop_assert_eq!(r.value().clone(), BigInt::from(n).mod_floor(&r.modulus()));
        prop_assert!(r.value().to_i64().unwrap() >= 0);
        prop_assert!(!r.value().is_negative());
        Ok(())
    })
}
