use num_traits::{Signed, Zero};

use crate::field::Rational;

/// `z^T G z = sum_k d[k] * (rows[k] . z)^2`.
#[derive(Clone, Debug)]
pub struct Ldl {
    pub d: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub enum LdlOutcome {
    Psd(Ldl),
    /// A vector `v` with `v^T G v < 0`.
    Indefinite(Vec<Rational>),
}

/// Exact LDL^T of a symmetric rational matrix. Pivots are taken in index
/// order, skipping zero diagonals; a negative diagonal or a zero diagonal with
/// a nonzero off-diagonal entry in the Schur complement proves indefiniteness.
pub fn ldl(g: &[Vec<Rational>]) -> LdlOutcome {
    let n = g.len();
    let mut s: Vec<Vec<Rational>> = g.to_vec();
    let mut alive = vec![true; n];
    let mut pivots: Vec<usize> = Vec::new();
    let mut d = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();

    while let Some(p) = (0..n).find(|&i| alive[i] && s[i][i].is_positive()) {
        let piv = s[p][p].clone();
        let mut row = vec![Rational::zero(); n];
        for j in 0..n {
            if alive[j] && !s[p][j].is_zero() {
                row[j] = &s[p][j] / &piv;
            }
        }
        alive[p] = false;
        for i in 0..n {
            if !alive[i] || s[i][p].is_zero() {
                continue;
            }
            let f = &s[i][p] / &piv;
            for j in i..n {
                if alive[j] && !s[p][j].is_zero() {
                    let v = &s[i][j] - &f * &s[p][j];
                    s[i][j] = v.clone();
                    s[j][i] = v;
                }
            }
        }
        pivots.push(p);
        d.push(piv);
        rows.push(row);
    }

    let rest: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let mut w = vec![Rational::zero(); n];
    let mut bad = false;
    if let Some(&i) = rest.iter().find(|&&i| s[i][i].is_negative()) {
        w[i] = Rational::from_integer(1.into());
        bad = true;
    } else {
        'outer: for (a, &i) in rest.iter().enumerate() {
            for &j in &rest[a + 1..] {
                if !s[i][j].is_zero() {
                    w[i] = Rational::from_integer(1.into());
                    w[j] = if s[i][j].is_positive() {
                        Rational::from_integer((-1).into())
                    } else {
                        Rational::from_integer(1.into())
                    };
                    bad = true;
                    break 'outer;
                }
            }
        }
    }
    if !bad {
        return LdlOutcome::Psd(Ldl { d, rows });
    }
    // back-substitute so that every eliminated linear form vanishes on v
    for k in (0..pivots.len()).rev() {
        let p = pivots[k];
        let mut acc = Rational::zero();
        for j in 0..n {
            if j != p && !rows[k][j].is_zero() {
                acc += &rows[k][j] * &w[j];
            }
        }
        w[p] = -acc;
    }
    LdlOutcome::Indefinite(w)
}

pub fn quadratic_form(g: &[Vec<Rational>], v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, row) in g.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                acc += x * &v[i] * &v[j];
            }
        }
    }
    acc
}
