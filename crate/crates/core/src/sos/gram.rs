//! Gram-matrix formulation `q = z^T G z` over a monomial basis `z`, with a
//! numeric interior-point seed and exact rounding.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use super::ldl::{ldl, LdlOutcome};
use super::ResiduePolynomial;
use crate::field::{four_squares, round_to_denominator, to_f64, Rational};
use crate::poly::Monomial;

/// Affine family `G(lambda) = G0 + sum lambda_k D_k` of symmetric matrices
/// with `z^T G(lambda) z = q` for every `lambda`.
pub struct GramSystem {
    pub basis: Vec<Monomial>,
    pub g0: Vec<Vec<Rational>>,
    /// Sparse directions; each entry `(i, j, v)` with `i <= j` sets both
    /// `(i, j)` and `(j, i)`.
    pub dirs: Vec<Vec<(usize, usize, Rational)>>,
}

const MAX_CANDIDATES: usize = 20_000;

fn add(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Half-degree monomial basis for `q`, pruned of monomials whose diagonal
/// entry is forced to zero.
pub fn newton_basis(q: &ResiduePolynomial) -> Option<Vec<Monomial>> {
    let n = q.arity();
    let support: BTreeSet<&Monomial> = q.terms().keys().collect();
    let lo_deg = q.min_total_degree().div_ceil(2);
    let hi_deg = q.total_degree() / 2;
    let lo: Vec<u32> = (0..n)
        .map(|i| q.terms().keys().map(|m| m[i]).min().unwrap_or(0).div_ceil(2))
        .collect();
    let hi: Vec<u32> = (0..n).map(|i| q.degree_in(i) / 2).collect();
    let count: usize = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as usize).product();
    if count > MAX_CANDIDATES {
        return None;
    }
    let mut basis = Vec::new();
    let mut cur = lo.clone();
    loop {
        let d: u32 = cur.iter().sum();
        if d >= lo_deg && d <= hi_deg {
            basis.push(cur.clone());
        }
        let mut i = 0;
        while i < n {
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
        if i == n {
            break;
        }
    }
    loop {
        let set: BTreeSet<Monomial> = basis.iter().cloned().collect();
        let keep: Vec<Monomial> = basis
            .iter()
            .filter(|b| {
                let twice = add(b, b);
                if support.contains(&twice) {
                    return true;
                }
                basis.iter().any(|c| {
                    c != *b
                        && twice.iter().zip(c.iter()).all(|(t, x)| t >= x)
                        && set.contains(&twice.iter().zip(c.iter()).map(|(t, x)| t - x).collect::<Vec<_>>())
                })
            })
            .cloned()
            .collect();
        if keep.len() == basis.len() {
            break;
        }
        basis = keep;
    }
    basis.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    Some(basis)
}

impl GramSystem {
    /// `None` when some monomial of `q` is not a product of two basis
    /// elements.
    pub fn new(q: &ResiduePolynomial, basis: Vec<Monomial>) -> Option<Self> {
        let n = basis.len();
        let mut pairs: BTreeMap<Monomial, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                pairs.entry(add(&basis[i], &basis[j])).or_default().push((i, j));
            }
        }
        if q.terms().keys().any(|m| !pairs.contains_key(m)) {
            return None;
        }
        let weight = |(i, j): (usize, usize)| if i == j { Rational::one() } else { Rational::from_integer(2.into()) };
        let mut g0 = vec![vec![Rational::zero(); n]; n];
        let mut dirs = Vec::new();
        for (alpha, ps) in &pairs {
            let c = q.coefficient(alpha);
            // prefer a diagonal slot for the particular solution
            let first = ps.iter().position(|(i, j)| i == j).unwrap_or(0);
            let p0 = ps[first];
            let w0 = weight(p0);
            if !c.is_zero() {
                let v = &c / &w0;
                g0[p0.0][p0.1] = v.clone();
                g0[p0.1][p0.0] = v;
            }
            for (k, &p) in ps.iter().enumerate() {
                if k == first {
                    continue;
                }
                dirs.push(vec![(p.0, p.1, Rational::one()), (p0.0, p0.1, -(weight(p) / &w0))]);
            }
        }
        Some(GramSystem { basis, g0, dirs })
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self, lambda: &[Rational]) -> Vec<Vec<Rational>> {
        let mut g = self.g0.clone();
        for (dir, l) in self.dirs.iter().zip(lambda) {
            if l.is_zero() {
                continue;
            }
            for (i, j, v) in dir {
                let x = &g[*i][*j] + l * v;
                g[*i][*j] = x.clone();
                g[*j][*i] = x;
            }
        }
        g
    }

    fn matrix_f64(&self, lambda: &[f64]) -> DMatrix<f64> {
        let n = self.size();
        let mut g = DMatrix::from_fn(n, n, |i, j| to_f64(&self.g0[i][j]));
        for (dir, l) in self.dirs.iter().zip(lambda) {
            for (i, j, v) in dir {
                let x = l * to_f64(v);
                g[(*i, *j)] += x;
                if i != j {
                    g[(*j, *i)] += x;
                }
            }
        }
        g
    }

    /// Numeric interior point: maximizes `t` subject to `G(lambda) - t I` PSD
    /// with a log-det barrier. Returns `(lambda, t)`.
    pub fn interior_seed(&self) -> Option<(Vec<f64>, f64)> {
        let n = self.size();
        let p = self.dirs.len();
        let mut lambda = vec![0.0; p];
        let g = self.matrix_f64(&lambda);
        let min_eig = g.clone().symmetric_eigenvalues().min();
        let scale = g.amax().max(1.0);
        let mut t = min_eig - 1.0 - 1e-3 * scale;
        let mut mu = scale;
        let dirs_f: Vec<Vec<(usize, usize, f64)>> =
            self.dirs.iter().map(|d| d.iter().map(|(i, j, v)| (*i, *j, to_f64(v))).collect()).collect();

        let objective = |lambda: &[f64], t: f64, mu: f64| -> Option<f64> {
            let mut m = self.matrix_f64(lambda);
            for i in 0..n {
                m[(i, i)] -= t;
            }
            let chol = m.cholesky()?;
            let logdet: f64 = 2.0 * chol.l_dirty().diagonal().iter().map(|x| x.ln()).sum::<f64>();
            Some(-t - mu * logdet)
        };

        for _outer in 0..40 {
            for _newton in 0..60 {
                let mut m = self.matrix_f64(&lambda);
                for i in 0..n {
                    m[(i, i)] -= t;
                }
                let w = m.clone().cholesky()?.inverse();
                // gradient and Hessian over (lambda, t)
                let dim = p + 1;
                let mut grad = DVector::zeros(dim);
                let mut hess = DMatrix::zeros(dim, dim);
                let wdw: Vec<DMatrix<f64>> = dirs_f
                    .iter()
                    .map(|d| {
                        let mut acc = DMatrix::zeros(n, n);
                        for &(i, j, v) in d {
                            acc += v * w.column(i) * w.row(j);
                            if i != j {
                                acc += v * w.column(j) * w.row(i);
                            }
                        }
                        acc
                    })
                    .collect();
                let trace_dir = |d: &[(usize, usize, f64)], a: &DMatrix<f64>| -> f64 {
                    d.iter()
                        .map(|&(i, j, v)| if i == j { v * a[(i, i)] } else { v * (a[(i, j)] + a[(j, i)]) })
                        .sum()
                };
                let w2 = &w * &w;
                for k in 0..p {
                    grad[k] = -mu * trace_dir(&dirs_f[k], &w);
                    for l in k..p {
                        let h = mu * trace_dir(&dirs_f[l], &wdw[k]);
                        hess[(k, l)] = h;
                        hess[(l, k)] = h;
                    }
                    // D_t = -I
                    let h = -mu * wdw[k].trace();
                    hess[(k, p)] = h;
                    hess[(p, k)] = h;
                }
                grad[p] = -1.0 + mu * w.trace();
                hess[(p, p)] = mu * w2.trace();
                for k in 0..dim {
                    hess[(k, k)] += 1e-12 * (1.0 + hess[(k, k)].abs());
                }
                let step = match hess.clone().cholesky() {
                    Some(c) => c.solve(&(-&grad)),
                    None => hess.clone().lu().solve(&(-&grad))?,
                };
                let decrement = -grad.dot(&step);
                if !decrement.is_finite() {
                    return None;
                }
                if decrement < 1e-10 {
                    break;
                }
                let f0 = objective(&lambda, t, mu)?;
                let mut s = 1.0;
                let mut moved = false;
                while s > 1e-12 {
                    let nl: Vec<f64> = lambda.iter().zip(step.iter()).map(|(a, b)| a + s * b).collect();
                    let nt = t + s * step[p];
                    if let Some(f1) = objective(&nl, nt, mu) {
                        if f1 <= f0 - 0.25 * s * decrement {
                            lambda = nl;
                            t = nt;
                            moved = true;
                            break;
                        }
                    }
                    s *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            if t > 1e6 * scale {
                break;
            }
            if mu < 1e-9 * scale {
                break;
            }
            mu *= 0.2;
        }
        Some((lambda, t))
    }

    /// Exact PSD Gram matrix, either directly (no free parameters) or by
    /// rounding an interior seed.
    pub fn exact_psd(&self) -> Option<(Vec<Vec<Rational>>, super::ldl::Ldl)> {
        if self.dirs.is_empty() {
            return match ldl(&self.g0) {
                LdlOutcome::Psd(l) => Some((self.g0.clone(), l)),
                LdlOutcome::Indefinite(_) => None,
            };
        }
        let (lambda, t) = self.interior_seed()?;
        if t < -1e-9 {
            return None;
        }
        for bits in (10..=40).step_by(5) {
            let den = 1u64 << bits;
            let lr: Vec<Rational> = lambda.iter().map(|&x| round_to_denominator(x, den)).collect();
            let g = self.matrix(&lr);
            if let LdlOutcome::Psd(l) = ldl(&g) {
                return Some((g, l));
            }
        }
        None
    }

    /// Summands `s_i` with `q = sum s_i^2`, from an exact LDL of a Gram matrix.
    pub fn summands(&self, vars: &[String], l: &super::ldl::Ldl) -> Vec<ResiduePolynomial> {
        let mut out = Vec::new();
        for (dk, row) in l.d.iter().zip(&l.rows) {
            let form = ResiduePolynomial::from_terms(
                vars,
                row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (self.basis[j].clone(), c.clone())),
            );
            for a in four_squares(dk) {
                out.push(form.scale(&a));
            }
        }
        out
    }
}

/// Polynomial SOS via the Gram method over the pruned half-degree basis.
pub fn gram_sos(q: &ResiduePolynomial, max_basis: usize) -> Option<Vec<ResiduePolynomial>> {
    let basis = newton_basis(q)?;
    if basis.is_empty() || basis.len() > max_basis {
        return None;
    }
    let sys = GramSystem::new(q, basis)?;
    let (_, l) = sys.exact_psd()?;
    Some(sys.summands(q.vars(), &l))
}
