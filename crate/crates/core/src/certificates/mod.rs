//! Non-negativity certificates `p = r/(1+mh)`: data model, exact
//! verification, best-effort generation on polydiscs and affine modules, and
//! the sampled `1/(1+c^2 p)` characterization probe.

mod dickmann;
mod generate;
mod probe;

use std::fmt;

pub use dickmann::{verify_dickmann_certificate, DickmannCertificate, DickmannTerm};
pub use generate::{find_negative_point, generate_ball_certificate, generate_ball_certificate_report, GenerationBudget, GenerationOutcome, GenerationReport};
pub use probe::{check_general_characterization, CharacterizationReport, CharacterizationVerdict, default_c_values};

use crate::error::Result;
use crate::field::FieldElement;
use crate::integrality::SetDescriptor;
use crate::poly::{Polynomial, RationalFunction, RingExpr, SosExpr, TElement};

/// `num/den` with `num` in the generated ring and `den` a T-element.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicCoefficient {
    pub num: RingExpr,
    pub den: TElement,
}

impl MonicCoefficient {
    pub fn value(&self, set: &SetDescriptor) -> Result<RationalFunction> {
        self.num.to_rational(set)?.div(&self.den.value(set)?)
    }
}

/// Evidence that `h` lies in the integral closure of the localized ring.
///
/// Without `monic`, `h = num/den` must hold identically. With `monic`
/// (`c_0, .., c_(d-1)`), `h^d + sum c_i h^i = 0` must hold instead.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralityWitness {
    pub num: RingExpr,
    pub den: TElement,
    pub monic: Option<Vec<MonicCoefficient>>,
}

impl IntegralityWitness {
    /// The witness for `h = 0`.
    pub fn trivial() -> Self {
        IntegralityWitness { num: RingExpr::zero(), den: TElement::unit(), monic: None }
    }

    pub fn quotient(num: RingExpr, den: TElement) -> Self {
        IntegralityWitness { num, den, monic: None }
    }

    pub fn check(&self, h: &RationalFunction, set: &SetDescriptor) -> std::result::Result<(), Rejection> {
        if let Some(v) = self.num.membership_violation(set) {
            return Err(Rejection::WitnessMembership(v));
        }
        if let Some(v) = self.den.violation(set) {
            return Err(Rejection::WitnessDenominator(v));
        }
        let eval = |e: Result<RationalFunction>| e.map_err(|e| Rejection::Evaluation(e.to_string()));
        match &self.monic {
            None => {
                let w = eval(self.num.to_rational(set).and_then(|n| n.div(&self.den.value(set)?)))?;
                if !w.identical(h) {
                    return Err(Rejection::WitnessIdentityFails);
                }
            }
            Some(coeffs) => {
                for c in coeffs {
                    if let Some(v) = c.num.membership_violation(set) {
                        return Err(Rejection::WitnessMembership(v));
                    }
                    if let Some(v) = c.den.violation(set) {
                        return Err(Rejection::WitnessDenominator(v));
                    }
                }
                let d = coeffs.len() as u32;
                if d == 0 {
                    return Err(Rejection::MonicIdentityFails);
                }
                let mut acc = h.pow(d);
                for (i, c) in coeffs.iter().enumerate() {
                    acc = &acc + &(&eval(c.value(set))? * &h.pow(i as u32));
                }
                if !acc.is_zero() {
                    return Err(Rejection::MonicIdentityFails);
                }
            }
        }
        Ok(())
    }
}

/// `p = (sum r_i^2) / (1 + m h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegCertificate {
    pub r: SosExpr,
    pub m: FieldElement,
    pub h: RationalFunction,
    pub witness: IntegralityWitness,
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// `p (1 + m h) != sum r_i^2`.
    IdentityFails,
    MultiplierNotInfinitesimal(String),
    WitnessMembership(String),
    WitnessDenominator(String),
    WitnessIdentityFails,
    MonicIdentityFails,
    Evaluation(String),
}

impl Rejection {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Rejection::IdentityFails => "identity",
            Rejection::MultiplierNotInfinitesimal(_) => "multiplier",
            Rejection::WitnessMembership(_) => "membership",
            Rejection::WitnessDenominator(_) => "t-element",
            Rejection::WitnessIdentityFails => "witness-identity",
            Rejection::MonicIdentityFails => "monic-identity",
            Rejection::Evaluation(_) => "evaluation",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::IdentityFails => write!(f, "p*(1+m*h) differs from the sum of squares"),
            Rejection::MultiplierNotInfinitesimal(s) => write!(f, "multiplier {s} is neither 0 nor infinitesimal"),
            Rejection::WitnessMembership(s) => write!(f, "witness numerator: {s}"),
            Rejection::WitnessDenominator(s) => write!(f, "witness denominator: {s}"),
            Rejection::WitnessIdentityFails => write!(f, "h differs from the witness quotient"),
            Rejection::MonicIdentityFails => write!(f, "h is not a root of the monic witness"),
            Rejection::Evaluation(s) => write!(f, "{s}"),
        }
    }
}

/// Every clause of the certificate, first failure reported.
pub fn check_nonneg_certificate(
    p: &Polynomial,
    cert: &NonnegCertificate,
    set: &SetDescriptor,
) -> std::result::Result<(), Rejection> {
    if !cert.m.is_infinitesimal().unwrap_or(false) {
        return Err(Rejection::MultiplierNotInfinitesimal(cert.m.to_string()));
    }
    let p_rf = RationalFunction::from(p.clone());
    let lhs = &p_rf * &(&RationalFunction::one() + &cert.h.scale(&cert.m));
    if !lhs.identical(&cert.r.value()) {
        return Err(Rejection::IdentityFails);
    }
    cert.witness.check(&cert.h, set)
}

pub fn verify_nonneg_certificate(p: &Polynomial, cert: &NonnegCertificate, set: &SetDescriptor) -> bool {
    check_nonneg_certificate(p, cert, set).is_ok()
}

#[cfg(test)]
mod tests;
