//! Dense univariate polynomials over the rationals, lowest degree first.

use num_traits::{One, Zero};

use crate::field::Rational;

pub type Dense = Vec<Rational>;

pub fn trim(mut a: Dense) -> Dense {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn derivative(a: &Dense) -> Dense {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer((i as i64).into())).collect())
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_else(Rational::zero) - b.get(i).cloned().unwrap_or_else(Rational::zero))
            .collect(),
    )
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &Dense, b: &Dense) -> (Dense, Dense) {
    let b = trim(b.clone());
    let lead = b.last().expect("nonzero divisor").clone();
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") / &lead;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(a: &Dense) -> Dense {
    let a = trim(a.clone());
    match a.last() {
        None => a,
        Some(l) => {
            let l = l.clone();
            a.iter().map(|c| c / &l).collect()
        }
    }
}

pub fn gcd(a: &Dense, b: &Dense) -> Dense {
    let mut x = trim(a.clone());
    let mut y = trim(b.clone());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn pow(a: &Dense, n: u32) -> Dense {
    let mut acc = vec![Rational::one()];
    for _ in 0..n {
        acc = mul(&acc, a);
    }
    acc
}

/// Yun's square-free decomposition of a nonzero polynomial:
/// `a = lc * prod factors[i]^(i+1)` with each factor monic and square-free.
pub fn square_free(a: &Dense) -> (Rational, Vec<Dense>) {
    let a = trim(a.clone());
    let lc = a.last().expect("nonzero").clone();
    let f = monic(&a);
    let mut factors = Vec::new();
    if f.len() <= 1 {
        return (lc, factors);
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    while b.len() > 1 {
        let ai = gcd(&b, &d);
        let nb = divrem(&b, &ai).0;
        let nc = divrem(&d, &ai).0;
        d = sub(&nc, &derivative(&nb));
        b = nb;
        factors.push(ai);
    }
    (lc, factors)
}
