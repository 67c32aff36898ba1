use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::{Polynomial, RationalFunction};

/// `(1 + m1 q1^2) / (1 + m2 q2^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DickmannTerm {
    pub m1: FieldElement,
    pub q1: Polynomial,
    pub m2: FieldElement,
    pub q2: Polynomial,
}

impl DickmannTerm {
    pub fn value(&self) -> Result<RationalFunction> {
        let side = |m: &FieldElement, q: &Polynomial| Polynomial::one() + q.pow(2).scale(m);
        RationalFunction::new(side(&self.m1, &self.q1), side(&self.m2, &self.q2))
    }

    fn violation(&self) -> Result<Option<String>> {
        for (m, q, which) in [(&self.m1, &self.q1, 1), (&self.m2, &self.q2, 2)] {
            if !m.is_infinitesimal()? {
                return Ok(Some(format!("m{which} = {m} is not infinitesimal")));
            }
            if !q.has_integral_coefficients()? {
                return Ok(Some(format!("q{which} = {q} has a non-integral coefficient")));
            }
        }
        Ok(None)
    }
}

/// `p = sum (1 + m1 q1^2)/(1 + m2 q2^2)` on the unit polydisc.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DickmannCertificate {
    pub terms: Vec<DickmannTerm>,
}

impl DickmannCertificate {
    pub fn value(&self) -> Result<RationalFunction> {
        let mut acc = RationalFunction::zero();
        for t in &self.terms {
            acc = &acc + &t.value()?;
        }
        Ok(acc)
    }

    /// First failed clause, if any. `p` must have integral coefficients.
    pub fn violation(&self, p: &Polynomial) -> Result<Option<String>> {
        if !p.has_integral_coefficients()? {
            return Err(Error::CoefficientsNotIntegral);
        }
        if self.terms.is_empty() {
            return Ok(Some("empty certificate".into()));
        }
        for t in &self.terms {
            if let Some(v) = t.violation()? {
                return Ok(Some(v));
            }
        }
        if !self.value()?.identical(&RationalFunction::from(p.clone())) {
            return Ok(Some("sum of terms differs from p".into()));
        }
        Ok(None)
    }
}

pub fn verify_dickmann_certificate(p: &Polynomial, cert: &DickmannCertificate) -> Result<bool> {
    Ok(cert.violation(p)?.is_none())
}
