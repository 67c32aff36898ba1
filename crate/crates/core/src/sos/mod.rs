//! Sum-of-squares search and PSD falsification for rational polynomials.
//!
//! Every accepted decomposition is checked exactly; numeric work only seeds
//! the search.

mod falsify;
mod gram;
mod ldl;
mod residue;
mod univariate;

use num_traits::{One, Signed, Zero};

pub use falsify::psd_falsify;
pub use gram::{gram_sos, newton_basis, GramSystem};
pub use ldl::{ldl, quadratic_form, Ldl, LdlOutcome};
pub use residue::ResiduePolynomial;

use crate::field::{four_squares, Rational};
use crate::sample::SampleConfig;

/// `num / den`, a summand of a quotient SOS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueFraction {
    pub num: ResiduePolynomial,
    pub den: ResiduePolynomial,
}

impl ResidueFraction {
    pub fn polynomial(p: ResiduePolynomial) -> Self {
        let den = ResiduePolynomial::one(p.vars());
        ResidueFraction { num: p, den }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some_and(|c| c.is_one())
    }
}

#[derive(Clone, Debug)]
pub struct SosBudget {
    /// Largest monomial basis handed to the Gram search.
    pub max_basis: usize,
    /// Largest power `k` of the multiplier tried as a denominator.
    pub denominator_cap: u32,
    pub falsifier: SampleConfig,
}

impl Default for SosBudget {
    fn default() -> Self {
        SosBudget { max_basis: 40, denominator_cap: 2, falsifier: SampleConfig::with_seed(0).samples(64) }
    }
}

impl SosBudget {
    pub fn with_denominator_cap(mut self, cap: u32) -> Self {
        self.denominator_cap = cap;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SosOutcome {
    Sos(Vec<ResidueFraction>),
    NotSosInBudget,
    NegativityWitness(Vec<Rational>),
}

/// `q = sum t_i^2` exactly.
pub fn verify_residue_sos(q: &ResiduePolynomial, decomposition: &[ResidueFraction]) -> bool {
    let vars = q.vars();
    let mut num = ResiduePolynomial::zero(vars);
    let mut den = ResiduePolynomial::one(vars);
    for t in decomposition {
        if t.num.vars() != vars || t.den.vars() != vars || t.den.is_zero() {
            return false;
        }
        let d2 = &t.den * &t.den;
        let n2 = &t.num * &t.num;
        if d2 == den {
            num = &num + &n2;
        } else {
            num = &(&num * &d2) + &(&n2 * &den);
            den = &den * &d2;
        }
    }
    num == q * &den
}

fn multiplier(q: &ResiduePolynomial) -> ResiduePolynomial {
    let vars = q.vars();
    let mut d = if q.is_homogeneous() { ResiduePolynomial::zero(vars) } else { ResiduePolynomial::one(vars) };
    for i in 0..vars.len() {
        let x = ResiduePolynomial::var(vars, i);
        d = &d + &(&x * &x);
    }
    d
}

/// Searches for `q = sum t_i^2` with `t_i` polynomials, or quotients by a
/// power of `1 + sum x_i^2` (`sum x_i^2` for forms) up to the budget's cap.
pub fn residue_sos_search(q: &ResiduePolynomial, budget: &SosBudget) -> SosOutcome {
    if q.is_zero() {
        return SosOutcome::Sos(Vec::new());
    }
    if let Some(p) = psd_falsify(q, &budget.falsifier) {
        return SosOutcome::NegativityWitness(p);
    }
    let vars = q.vars();
    if let Some(c) = q.as_constant() {
        if c.is_negative() {
            return SosOutcome::NegativityWitness(vec![Rational::zero(); vars.len()]);
        }
        return SosOutcome::Sos(
            four_squares(&c)
                .into_iter()
                .map(|a| ResidueFraction::polynomial(ResiduePolynomial::constant(vars, a)))
                .collect(),
        );
    }
    let used: Vec<usize> = (0..vars.len()).filter(|&i| q.degree_in(i) > 0).collect();
    if used.len() == 1 {
        if let Some(s) = univariate_sos(q, used[0], budget) {
            return SosOutcome::Sos(s.into_iter().map(ResidueFraction::polynomial).collect());
        }
    }
    if let Some(s) = gram_sos(q, budget.max_basis) {
        return SosOutcome::Sos(s.into_iter().map(ResidueFraction::polynomial).collect());
    }
    let d = multiplier(q);
    let mut scaled = q.clone();
    for k in 1..=budget.denominator_cap {
        scaled = &scaled * &d;
        if let Some(s) = gram_sos(&scaled, budget.max_basis) {
            return SosOutcome::Sos(quotients(q, &d, k, s));
        }
    }
    SosOutcome::NotSosInBudget
}

/// From `q * d^k = sum s_i^2` to summands of `q` over a polynomial
/// denominator.
fn quotients(q: &ResiduePolynomial, d: &ResiduePolynomial, k: u32, s: Vec<ResiduePolynomial>) -> Vec<ResidueFraction> {
    let vars = q.vars();
    if k.is_multiple_of(2) {
        let den = d.pow(k / 2);
        return s.into_iter().map(|num| ResidueFraction { num, den: den.clone() }).collect();
    }
    // q = sum (s_i w_j)^2 / d^(k+1) with d = sum w_j^2
    let den = d.pow(k.div_ceil(2));
    let mut ws: Vec<ResiduePolynomial> = (0..vars.len()).map(|i| ResiduePolynomial::var(vars, i)).collect();
    if !q.is_homogeneous() {
        ws.insert(0, ResiduePolynomial::one(vars));
    }
    let mut out = Vec::new();
    for si in &s {
        for w in &ws {
            out.push(ResidueFraction { num: si * w, den: den.clone() });
        }
    }
    out
}

/// `q = s^2 t` with `t` square-free, then a Gram decomposition of `t`.
fn univariate_sos(q: &ResiduePolynomial, var: usize, budget: &SosBudget) -> Option<Vec<ResiduePolynomial>> {
    let vars = q.vars();
    let one_var = [vars[var].clone()];
    let dense: Vec<Rational> = {
        let mut v = vec![Rational::zero(); q.degree_in(var) as usize + 1];
        for (m, c) in q.terms() {
            v[m[var] as usize] = c.clone();
        }
        v
    };
    let (lc, factors) = univariate::square_free(&dense);
    let mut s = vec![Rational::one()];
    let mut t = vec![lc];
    for (i, f) in factors.iter().enumerate() {
        let mult = i as u32 + 1;
        s = univariate::mul(&s, &univariate::pow(f, mult / 2));
        if mult % 2 == 1 {
            t = univariate::mul(&t, f);
        }
    }
    let t = ResiduePolynomial::from_univariate(&one_var, &t);
    let s = ResiduePolynomial::from_univariate(&one_var, &s);
    let parts: Vec<ResiduePolynomial> = match t.as_constant() {
        Some(c) if !c.is_negative() => {
            four_squares(&c).into_iter().map(|a| ResiduePolynomial::constant(&one_var, a)).collect()
        }
        Some(_) => return None,
        None => gram_sos(&t, budget.max_basis)?,
    };
    Some(parts.iter().map(|u| (u * &s).embed(vars)).collect())
}
