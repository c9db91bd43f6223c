//! Exact Perron-root oracle: the characteristic polynomial by
//! Faddeev–LeVerrier over the rationals, then Sturm-sequence bisection for
//! its largest real root.

use num_traits::{Signed, Zero};
use respcheck_core::Rational;

type Poly = Vec<Rational>;

fn int(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// Coefficients of `det(λI − A)`, lowest degree first.
pub fn characteristic_polynomial(a: &[Vec<u64>]) -> Poly {
    let n = a.len();
    let a: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&x| int(x as i64)).collect()).collect();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = int(1);
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for l in 0..n {
                    acc += &a[i][l] * &m[l][j];
                }
                next[i][j] = acc;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut trace = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -trace / int(k as i64);
    }
    coeffs
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn derivative(p: &Poly) -> Poly {
    trim((1..p.len()).map(|i| &p[i] * int(i as i64)).collect())
}

fn remainder(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &factor * c;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Rational::zero());
        }
    }
    r
}

fn eval(p: &Poly, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn sturm(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![trim(p.clone()), derivative(p)];
    loop {
        let r = remainder(&seq[seq.len() - 2], &seq[seq.len() - 1]);
        if r.iter().all(Zero::is_zero) {
            return seq;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
}

fn variations(seq: &[Poly], x: &Rational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// The largest real root of a polynomial with at least one real root, to
/// within `2^-60` relative to the root bound.
pub fn largest_real_root(p: &Poly) -> f64 {
    let p = trim(p.clone());
    if p.len() == 1 {
        return 0.0;
    }
    let lead = p.last().unwrap().abs();
    let bound = p[..p.len() - 1].iter().fold(Rational::zero(), |m, c| {
        let r = c.abs() / &lead;
        if r > m {
            r
        } else {
            m
        }
    }) + int(1);
    let seq = sturm(&p);
    let top = variations(&seq, &bound);
    let above = |x: &Rational| variations(&seq, x) - top;
    let (mut lo, mut hi) = (-bound.clone() - int(1), bound);
    assert!(above(&lo) > 0, "polynomial has no real root");
    for _ in 0..80 {
        let mid = (&lo + &hi) / int(2);
        if above(&mid) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    respcheck_core::num::ratio_to_f64(&((lo + hi) / int(2)))
}

/// Spectral radius of a non-negative integer matrix.
pub fn perron_root(a: &[Vec<u64>]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    largest_real_root(&characteristic_polynomial(a))
}
