use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::field::{to_f64, FieldElement, Rational};
use crate::poly::{Monomial, Polynomial};

/// Polynomial with rational coefficients over a fixed variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl ResiduePolynomial {
    pub fn zero(vars: &[String]) -> Self {
        ResiduePolynomial { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &[String], i: usize) -> Self {
        let mut m = vec![0; vars.len()];
        m[i] = 1;
        Self::monomial(vars, m, Rational::one())
    }

    pub fn monomial(vars: &[String], m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Terms with zero coefficients are dropped; exponent vectors must match
    /// the arity of `vars`.
    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    /// Residues of the coefficients of an integral polynomial, over the
    /// polynomial's own variables.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        Ok(ResiduePolynomial { vars: p.vars().to_vec(), terms: p.residue_coefficients()? })
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(
            &self.vars,
            self.terms.iter().map(|(m, c)| (m.clone(), FieldElement::from_rational(c.clone()))),
        )
        .expect("well-formed residue polynomial")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn min_total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).min().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    /// Whether every term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        self.total_degree() == self.min_total_degree()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        ResiduePolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                to_f64(c) * point.iter().zip(m).map(|(x, &e)| x.powi(e as i32)).product::<f64>()
            })
            .sum()
    }

    /// Coefficients as `f64` paired with their monomials, for numeric screens.
    pub fn to_f64_terms(&self) -> Vec<(Monomial, f64)> {
        self.terms.iter().map(|(m, c)| (m.clone(), to_f64(c))).collect()
    }

    /// Largest absolute coefficient as `f64`.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::MAX)).fold(0.0, f64::max)
    }

    /// Dense coefficient list of a univariate polynomial, lowest degree first.
    pub fn univariate_coefficients(&self) -> Vec<Rational> {
        assert!(self.arity() <= 1, "univariate_coefficients on a multivariate polynomial");
        let d = self.total_degree() as usize;
        let mut out = vec![Rational::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.first().copied().unwrap_or(0) as usize;
            out[e] = c.clone();
        }
        out
    }

    pub fn from_univariate(vars: &[String], coeffs: &[Rational]) -> Self {
        assert!(vars.len() == 1 || coeffs.len() <= 1);
        Self::from_terms(
            vars,
            coeffs.iter().enumerate().map(|(i, c)| {
                (if vars.is_empty() { vec![] } else { vec![i as u32] }, c.clone())
            }),
        )
    }

    /// Same polynomial, expressed over a superset of its variables.
    pub fn embed(&self, vars: &[String]) -> Self {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("embedding into a superset"))
            .collect();
        ResiduePolynomial {
            vars: vars.to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut out = vec![0; vars.len()];
                    for (j, &e) in m.iter().enumerate() {
                        out[idx[j]] = e;
                    }
                    (out, c.clone())
                })
                .collect(),
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "residue polynomials over different variables");
    }

}

impl Add for &ResiduePolynomial {
    type Output = ResiduePolynomial;
    fn add(self, rhs: &ResiduePolynomial) -> ResiduePolynomial {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ResiduePolynomial {
    type Output = ResiduePolynomial;
    fn sub(self, rhs: &ResiduePolynomial) -> ResiduePolynomial {
        self + &(-rhs)
    }
}

impl Neg for &ResiduePolynomial {
    type Output = ResiduePolynomial;
    fn neg(self) -> ResiduePolynomial {
        ResiduePolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &ResiduePolynomial {
    type Output = ResiduePolynomial;
    fn mul(self, rhs: &ResiduePolynomial) -> ResiduePolynomial {
        self.check_vars(rhs);
        let mut out = ResiduePolynomial::zero(&self.vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for ResiduePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}
