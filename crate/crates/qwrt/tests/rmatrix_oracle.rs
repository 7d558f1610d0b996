//! Independent colored Jones oracle: the quantum trace of a braid in the
//! α-dimensional representation of U_q(sl2), written over s = q^{1/2} and
//! compared with `colored_jones` in t = s^{−4}.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use qwrt::knots::{colored_jones, Knot, KnotFamily, LaurentPoly};

fn mono(e: i64) -> LaurentPoly {
    LaurentPoly::monomial(e, BigInt::one())
}

/// [n] in s.
fn qint(n: i64) -> LaurentPoly {
    if n < 0 {
        return qint(-n).scale(&BigInt::from(-1));
    }
    let mut p = LaurentPoly::zero();
    for j in 0..n {
        p.add_term(2 * (n - 1 - 2 * j), &BigInt::one());
    }
    p
}

fn qbinom(a: i64, n: i64) -> LaurentPoly {
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for m in 1..=n {
        num = num.mul(&qint(a - n + m));
        den = den.mul(&qint(m));
    }
    num.div_exact(&den).unwrap()
}

/// The entry of R^{±1}: v_i ⊗ v_j → coefficient · v_{i−n} ⊗ v_{j+n}.
struct Rmat {
    lam: i64,
    /// (i, j) → list of (n, coefficient), already including the Cartan factor.
    fwd: BTreeMap<(i64, i64), Vec<(i64, LaurentPoly)>>,
    inv: BTreeMap<(i64, i64), Vec<(i64, LaurentPoly)>>,
}

impl Rmat {
    fn new(alpha: i64) -> Self {
        let lam = alpha - 1;
        let qq = mono(2).sub(&mono(-2));
        let mut fwd = BTreeMap::new();
        let mut inv = BTreeMap::new();
        for i in 0..=lam {
            for j in 0..=lam {
                let mut f = Vec::new();
                let mut g = Vec::new();
                for n in 0..=i.min(lam - j) {
                    let mut ef = qbinom(j + n, n);
                    for m in 1..=n {
                        ef = ef.mul(&qint(lam - i + m));
                    }
                    let mut qqn = LaurentPoly::one();
                    for _ in 0..n {
                        qqn = qqn.mul(&qq);
                    }
                    let core = ef.mul(&qqn);
                    let (a, b) = (i - n, j + n);
                    // q^{H⊗H/2} after the sum
                    let c = core.mul(&mono(n * (n - 1))).mul(&mono((lam - 2 * a) * (lam - 2 * b)));
                    f.push((n, c));
                    // q^{−H⊗H/2} before the sum, alternating signs
                    let mut d = core.mul(&mono(-n * (n - 1))).mul(&mono(-(lam - 2 * i) * (lam - 2 * j)));
                    if n % 2 == 1 {
                        d = d.scale(&BigInt::from(-1));
                    }
                    g.push((n, d));
                }
                fwd.insert((i, j), f);
                inv.insert((i, j), g);
            }
        }
        Rmat { lam, fwd, inv }
    }
}

type Vector = BTreeMap<Vec<i64>, LaurentPoly>;

fn add_into(v: &mut Vector, key: Vec<i64>, c: &LaurentPoly) {
    let e = v.entry(key.clone()).or_insert_with(LaurentPoly::zero);
    *e = e.add(c);
    if e.is_zero() {
        v.remove(&key);
    }
}

/// σ_g^{±1} on strands g, g+1 (0-based g): Ř = P∘R and Ř^{−1} = R^{−1}∘P.
fn crossing(r: &Rmat, v: &Vector, g: usize, positive: bool) -> Vector {
    let mut out = Vector::new();
    for (key, c) in v {
        let (x, y) = (key[g], key[g + 1]);
        let (i, j) = if positive { (x, y) } else { (y, x) };
        let table = if positive { &r.fwd } else { &r.inv };
        for (n, coef) in &table[&(i, j)] {
            let (a, b) = (i - n, j + n);
            let mut k2 = key.clone();
            if positive {
                k2[g] = b;
                k2[g + 1] = a;
            } else {
                k2[g] = a;
                k2[g + 1] = b;
            }
            add_into(&mut out, k2, &c.mul(coef));
        }
    }
    out
}

fn basis(strands: usize, lam: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..strands {
        out = out
            .into_iter()
            .flat_map(|b| {
                (0..=lam).map(move |x| {
                    let mut c = b.clone();
                    c.push(x);
                    c
                })
            })
            .collect();
    }
    out
}

/// Normalized colored Jones of the closure, in t = s^{−4}.
fn braid_jones(word: &[i64], strands: usize, alpha: i64) -> LaurentPoly {
    let r = Rmat::new(alpha);
    let lam = r.lam;
    let mut tr = LaurentPoly::zero();
    for e in basis(strands, lam) {
        let mut v = Vector::new();
        v.insert(e.clone(), LaurentPoly::one());
        for &g in word {
            v = crossing(&r, &v, g.unsigned_abs() as usize - 1, g > 0);
        }
        if let Some(c) = v.get(&e) {
            let w: i64 = e.iter().map(|x| lam - 2 * x).sum();
            tr = tr.add(&c.mul(&mono(2 * w)));
        }
    }
    let writhe: i64 = word.iter().map(|g| g.signum()).sum();
    let inv = tr.mul(&mono(-writhe * lam * (lam + 2))).div_exact(&qint(alpha)).unwrap();
    let mut out = LaurentPoly::zero();
    for (e, c) in inv.iter() {
        assert_eq!(e % 4, 0, "exponent {e} not a power of t");
        out.add_term(-e / 4, c);
    }
    out
}

#[test]
fn rmatrix_is_invertible() {
    for alpha in 2..=4 {
        let r = Rmat::new(alpha);
        for e in basis(2, r.lam) {
            let mut v = Vector::new();
            v.insert(e.clone(), LaurentPoly::one());
            let w = crossing(&r, &crossing(&r, &v, 0, true), 0, false);
            assert_eq!(w, v, "α={alpha} e={e:?}");
        }
    }
}

#[test]
fn braid_relation_holds() {
    let r = Rmat::new(3);
    for e in basis(3, r.lam) {
        let mut v = Vector::new();
        v.insert(e, LaurentPoly::one());
        let a = crossing(&r, &crossing(&r, &crossing(&r, &v, 0, true), 1, true), 0, true);
        let b = crossing(&r, &crossing(&r, &crossing(&r, &v, 1, true), 0, true), 1, true);
        assert_eq!(a, b);
    }
}

#[test]
fn trefoil_matches() {
    for alpha in 2..=4 {
        let v = braid_jones(&[1, 1, 1], 2, alpha);
        assert_eq!(v, colored_jones(&Knot::right_trefoil(), alpha).unwrap(), "α={alpha}");
        assert_eq!(v, colored_jones(&Knot::new(KnotFamily::Twist(1), false).unwrap(), alpha).unwrap());
    }
    assert_eq!(braid_jones(&[1, 1, 1], 2, 2), LaurentPoly::from_pairs(&[(1, 1), (3, 1), (4, -1)]));
}

#[test]
fn figure_eight_matches() {
    for alpha in 2..=4 {
        let v = braid_jones(&[1, -2, 1, -2], 3, alpha);
        assert_eq!(v, colored_jones(&Knot::figure_eight(), alpha).unwrap(), "α={alpha}");
    }
}

#[test]
fn stevedore_matches() {
    for alpha in 2..=4 {
        let v = braid_jones(&[1, 1, 2, -1, -3, 2, -3], 4, alpha);
        assert_eq!(v, colored_jones(&Knot::stevedore(), alpha).unwrap(), "α={alpha}");
        let unmirrored = colored_jones(&Knot::new(KnotFamily::Twist(-2), false).unwrap(), alpha).unwrap();
        assert_eq!(v.mirror(), unmirrored);
    }
}
