//! Helpers on exact rationals: square roots, sums of four squares, printing.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = isqrt_exact(q.numer())?;
    let d = isqrt_exact(q.denom())?;
    Some(Rational::new(n, d))
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Writes a non-negative rational as a sum of at most four rational squares,
/// returning the roots. Zero yields an empty list.
pub fn four_squares(q: &Rational) -> Vec<Rational> {
    assert!(!q.is_negative(), "four_squares of a negative rational");
    if q.is_zero() {
        return Vec::new();
    }
    if let Some(r) = exact_sqrt(q) {
        return vec![r];
    }
    // q = (a*b) / b^2
    let b = q.denom().clone();
    let n = (q.numer() * &b).to_biguint().expect("positive");
    integer_four_squares(&n)
        .into_iter()
        .filter(|s| !s.is_zero())
        .map(|s| Rational::new(BigInt::from(s), b.clone()))
        .collect()
}

/// Lagrange decomposition of a non-negative integer into four squares.
pub fn integer_four_squares(n: &BigUint) -> [BigUint; 4] {
    let zero = BigUint::zero();
    if n.is_zero() {
        return [zero.clone(), zero.clone(), zero.clone(), zero];
    }
    if n.bits() <= 20 {
        return small_four_squares(n.to_u64().expect("small"));
    }
    // n = 4^k m: the search below needs m not divisible by 4
    let fours = n.trailing_zeros().unwrap_or(0) / 2;
    if fours > 0 {
        return integer_four_squares(&(n >> (2 * fours))).map(|x| x << fours);
    }
    // Rabin-Shallit: pick a, b at random until n - a^2 - b^2 is a sum of two squares
    // we can find quickly (a square, 2, or a prime = 1 mod 4).
    let mut rng = ChaCha8Rng::seed_from_u64(n.bits());
    let root = n.sqrt();
    loop {
        let a = rng_below(&mut rng, &root);
        let rest = n - &a * &a;
        let b = rng_below(&mut rng, &rest.sqrt());
        let p = &rest - &b * &b;
        if let Some((c, d)) = two_squares_fast(&p) {
            debug_assert_eq!(&a * &a + &b * &b + &c * &c + &d * &d, *n);
            return [a, b, c, d];
        }
    }
}

fn rng_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    if bound.is_zero() {
        return BigUint::zero();
    }
    let bytes = bound.to_bytes_le();
    let mut buf: Vec<u8> = (0..bytes.len() + 8).map(|_| rng.gen()).collect();
    buf.truncate(bytes.len() + 8);
    BigUint::from_bytes_le(&buf) % (bound + BigUint::one())
}

fn two_squares_fast(p: &BigUint) -> Option<(BigUint, BigUint)> {
    let zero = BigUint::zero();
    if p.is_zero() {
        return Some((zero.clone(), zero));
    }
    let r = p.sqrt();
    if &r * &r == *p {
        return Some((r, zero));
    }
    let two = BigUint::from(2u32);
    if *p == two {
        return Some((BigUint::one(), BigUint::one()));
    }
    if (p % 4u32) != BigUint::one() || !is_probable_prime(p) {
        return None;
    }
    let x = sqrt_minus_one(p)?;
    // Hermite-Serret: Euclid on (p, x) until the remainder drops below sqrt(p).
    let (mut a, mut b) = (p.clone(), x);
    while &b * &b > *p {
        let t = &a % &b;
        a = b;
        b = t;
    }
    let c = p - &b * &b;
    let d = c.sqrt();
    (&d * &d == c).then_some((b, d))
}

fn sqrt_minus_one(p: &BigUint) -> Option<BigUint> {
    let e = (p - BigUint::one()) >> 2;
    let minus_one = p - BigUint::one();
    for c in 2u32..200 {
        let x = BigUint::from(c).modpow(&e, p);
        if (&x * &x) % p == minus_one {
            return Some(x);
        }
    }
    None
}

pub fn is_probable_prime(n: &BigUint) -> bool {
    let small = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &s in &small {
        if *n == BigUint::from(s) {
            return true;
        }
        if (n % s).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let tz = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> tz;
    'witness: for &a in &small {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..tz {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn small_four_squares(n: u64) -> [BigUint; 4] {
    let isq = |v: u64| v.sqrt();
    let mut a = isq(n);
    loop {
        let r1 = n - a * a;
        let mut b = isq(r1).min(a);
        loop {
            let r2 = r1 - b * b;
            let mut c = isq(r2).min(b);
            loop {
                let r3 = r2 - c * c;
                let d = isq(r3);
                if d * d == r3 {
                    return [a, b, c, d].map(BigUint::from);
                }
                if c == 0 {
                    break;
                }
                c -= 1;
            }
            if b == 0 {
                break;
            }
            b -= 1;
        }
        a -= 1;
    }
}

/// `a` or `a/b`, the form the expression grammar reads back.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest rational with denominator `den` (ties away from zero).
pub fn round_to_denominator(x: f64, den: u64) -> Rational {
    let scaled = (x * den as f64).round();
    let n = BigInt::from(scaled as i128);
    Rational::new(n, BigInt::from(den))
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale down huge numerators/denominators
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}
