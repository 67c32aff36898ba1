use num_traits::{Signed, Zero};
use rand::Rng;

use super::ldl::{ldl, quadratic_form, LdlOutcome};
use super::ResiduePolynomial;
use crate::field::{int, rat, round_to_denominator, Rational};
use crate::sample::{rng_for, SampleConfig};

const GRID: [(i64, i64); 15] = [
    (0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1), (1, 3), (-1, 3),
    (3, 1), (-3, 1), (3, 2), (-3, 2), (10, 1), (-10, 1),
];
const GRID_POINTS: usize = 4096;

fn screen(terms: &[(Vec<u32>, f64)], point: &[f64]) -> bool {
    // only points whose floating value is not clearly positive get an exact check
    let mut value = 0.0;
    let mut mass = 0.0;
    for (m, c) in terms {
        let t = c * point.iter().zip(m).map(|(x, &e)| x.powi(e as i32)).product::<f64>();
        value += t;
        mass += t.abs();
    }
    !(value > 1e-9 * mass) || !value.is_finite()
}

fn exact_negative(q: &ResiduePolynomial, point: &[Rational]) -> bool {
    q.eval(point).is_negative()
}

/// Searches for a rational point with `q(point) < 0`: a rational grid, an
/// exact Gram test for quadratics, rays to infinity, then coordinate descent
/// from random starts with the minimizer rounded and checked exactly.
pub fn psd_falsify(q: &ResiduePolynomial, config: &SampleConfig) -> Option<Vec<Rational>> {
    let n = q.arity();
    if n == 0 {
        return q.eval(&[]).is_negative().then(Vec::new);
    }
    let terms = q.to_f64_terms();
    let grid: Vec<Rational> = GRID.iter().map(|&(a, b)| rat(a, b)).collect();
    let grid_f: Vec<f64> = GRID.iter().map(|&(a, b)| a as f64 / b as f64).collect();

    // grid: the first k values in every coordinate, k^n bounded
    let mut k = GRID.len();
    while k > 2 && k.pow(n.min(12) as u32) > GRID_POINTS {
        k -= 1;
    }
    let dims = n.min(12);
    let mut idx = vec![0usize; dims];
    loop {
        let pf: Vec<f64> = (0..n).map(|i| if i < dims { grid_f[idx[i]] } else { 1.0 }).collect();
        if screen(&terms, &pf) {
            let p: Vec<Rational> = (0..n).map(|i| if i < dims { grid[idx[i]].clone() } else { int(1) }).collect();
            if exact_negative(q, &p) {
                return Some(p);
            }
        }
        let mut i = 0;
        while i < dims {
            idx[i] += 1;
            if idx[i] < k {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == dims {
            break;
        }
    }

    if q.total_degree() <= 2 {
        if let Some(p) = quadratic_falsify(q) {
            return Some(p);
        }
    }

    // rays t*d
    let probes = config.samples.clamp(16, 256);
    for j in 0..probes {
        let mut rng = rng_for(config.seed, j as u64);
        let d: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=8))).collect();
        for t in [10i64, 100, 1000, 10_000] {
            let p: Vec<Rational> = d.iter().map(|x| x * int(t)).collect();
            let pf: Vec<f64> = p.iter().map(crate::field::to_f64).collect();
            if screen(&terms, &pf) && exact_negative(q, &p) {
                return Some(p);
            }
        }
    }

    // coordinate descent
    let starts = (probes / 8).max(4);
    for j in 0..starts {
        let mut rng = rng_for(config.seed ^ 0x5eed, j as u64);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let mut fx = q.eval_f64(&x);
        let mut step = 1.0;
        let mut iters = 0;
        while step > 1e-7 && iters < 2000 {
            iters += 1;
            let mut improved = false;
            for i in 0..n {
                for s in [step, -step] {
                    let old = x[i];
                    x[i] = (old + s).clamp(-1e4, 1e4);
                    let f = q.eval_f64(&x);
                    if f < fx {
                        fx = f;
                        improved = true;
                    } else {
                        x[i] = old;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if fx < 0.0 {
            for bits in [2u32, 4, 8, 12, 16, 24, 32] {
                let p: Vec<Rational> = x.iter().map(|&v| round_to_denominator(v, 1u64 << bits)).collect();
                if exact_negative(q, &p) {
                    return Some(p);
                }
            }
        }
    }
    None
}

/// Complete test for polynomials of degree at most two: the Gram matrix over
/// `[1, x_1, .., x_n]` is indefinite exactly when a negative point exists.
fn quadratic_falsify(q: &ResiduePolynomial) -> Option<Vec<Rational>> {
    let n = q.arity();
    let mut g = vec![vec![Rational::zero(); n + 1]; n + 1];
    for (m, c) in q.terms() {
        let nz: Vec<usize> = m.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i + 1).collect();
        match (nz.len(), m.iter().sum::<u32>()) {
            (0, _) => g[0][0] = c.clone(),
            (1, 1) => {
                g[0][nz[0]] = c / int(2);
                g[nz[0]][0] = c / int(2);
            }
            (1, 2) => g[nz[0]][nz[0]] = c.clone(),
            (2, 2) => {
                g[nz[0]][nz[1]] = c / int(2);
                g[nz[1]][nz[0]] = c / int(2);
            }
            _ => return None,
        }
    }
    let LdlOutcome::Indefinite(v) = ldl(&g) else {
        return None;
    };
    debug_assert!(quadratic_form(&g, &v).is_negative());
    if !v[0].is_zero() {
        let p: Vec<Rational> = v[1..].iter().map(|x| x / &v[0]).collect();
        return exact_negative(q, &p).then_some(p);
    }
    // negative direction of the quadratic part: go far enough along it
    let mut t = int(1);
    for _ in 0..200 {
        let p: Vec<Rational> = v[1..].iter().map(|x| x * &t).collect();
        if exact_negative(q, &p) {
            return Some(p);
        }
        t *= int(2);
    }
    None
}
