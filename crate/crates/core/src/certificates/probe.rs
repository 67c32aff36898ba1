use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::Result;
use crate::field::{exact_sqrt, rat, Exponent, FieldElement, Value};
use crate::integrality::{ProbePoints, SetDescriptor};
use crate::poly::Polynomial;
use crate::sample::SampleConfig;

/// The `c` values tried at every sampled point where `p >= 0`.
pub fn default_c_values() -> Vec<FieldElement> {
    let e = |n: i64, d: i64| FieldElement::eps_pow(Exponent::new(n, d));
    vec![
        FieldElement::one(),
        FieldElement::from_int(2),
        FieldElement::from_rational(rat(1, 3)),
        FieldElement::from_int(10),
        e(1, 1),
        e(-1, 1),
        e(-2, 1),
        e(1, 2),
        e(-3, 1),
        FieldElement::monomial(rat(7, 2), Exponent::from_integer(-1)),
    ]
}

const PERTURBATION_ORDERS: [i64; 4] = [8, 4, 2, 1];

#[derive(Clone, Debug, PartialEq)]
pub enum CharacterizationVerdict {
    /// No negative sample, and every sampled `1/(1+c^2 p(b))` was integral.
    ConsistentNonneg,
    /// `p(point) < 0`, `c^2 = -1/p(point)`, and `1/(1+c^2 p)` is not integral
    /// at `probe` (a pole when `valuation` is `None`).
    NegativityWitness {
        point: Vec<FieldElement>,
        value: FieldElement,
        c: FieldElement,
        probe: Vec<FieldElement>,
        valuation: Option<Value>,
    },
    /// A negative point exists but no `c` in the field was found.
    Obstruction { point: Vec<FieldElement>, value: FieldElement, reason: String },
    /// `p(b) >= 0` yet `1/(1+c^2 p(b))` is not integral. Never expected.
    Incoherent { point: Vec<FieldElement>, c: FieldElement, valuation: Value },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterizationReport {
    pub verdict: CharacterizationVerdict,
    pub samples: usize,
    pub c_values: usize,
    /// `(b, c)` pairs whose integrality was checked.
    pub pairs_checked: usize,
}

impl CharacterizationReport {
    /// Negativity and non-integrality were found together or not at all.
    pub fn coherent(&self) -> bool {
        matches!(
            self.verdict,
            CharacterizationVerdict::ConsistentNonneg | CharacterizationVerdict::NegativityWitness { .. }
        )
    }
}

fn perturb(set: &SetDescriptor, point: &[FieldElement], i: usize, delta: &FieldElement) -> Result<Vec<FieldElement>> {
    let mut y = match set.affine_map() {
        None => point.to_vec(),
        Some(map) => map.to_unit(point)?,
    };
    y[i] = &y[i] + delta;
    Ok(set.from_unit(&y))
}

/// Builds `c` from a negative value and looks for a nearby point where
/// `1 + c^2 p` is infinitesimal or zero.
fn confirm(
    p: &Polynomial,
    set: &SetDescriptor,
    point: &[FieldElement],
    value: &FieldElement,
) -> Result<Option<CharacterizationVerdict>> {
    let c2 = match (-value).invert() {
        Ok(t) => t,
        Err(_) => return Ok(None),
    };
    let Ok(c) = c2.sqrt() else { return Ok(None) };
    let witness = |probe: Vec<FieldElement>, valuation| CharacterizationVerdict::NegativityWitness {
        point: point.to_vec(),
        value: value.clone(),
        c: c.clone(),
        probe,
        valuation,
    };
    if (&FieldElement::one() + &(&c2 * value)).is_exact_zero() {
        return Ok(Some(witness(point.to_vec(), None)));
    }
    for k in PERTURBATION_ORDERS {
        let delta = FieldElement::eps_pow(Exponent::from_integer(k));
        for i in 0..set.arity() {
            let probe = perturb(set, point, i, &delta)?;
            if !set.contains(&probe).unwrap_or(false) {
                continue;
            }
            let Ok(pv) = p.eval_named(set.vars(), &probe) else { continue };
            let w = &FieldElement::one() + &(&c2 * &pv);
            if w.is_exact_zero() {
                return Ok(Some(witness(probe, None)));
            }
            if let Ok(Value::Finite(v)) = w.valuation() {
                if v > Exponent::zero() {
                    return Ok(Some(witness(probe, Some(Value::Finite(-v)))));
                }
            }
        }
    }
    Ok(None)
}

/// Rational shifts of one coordinate, used when `-p(b)` has a leading
/// coefficient that is not a rational square.
fn shifts() -> Vec<FieldElement> {
    let mut out = Vec::new();
    for d in 1..=12i64 {
        for n in 1..=12i64 {
            if num_integer::gcd(n, d) == 1 {
                out.push(FieldElement::from_rational(rat(n, d)));
                out.push(FieldElement::from_rational(rat(-n, d)));
            }
        }
    }
    out
}

fn square_leading(v: &FieldElement) -> bool {
    v.leading().is_ok_and(|(_, c)| exact_sqrt(&-c.clone()).is_some())
}

/// Samples the set and checks that `p` is non-negative exactly when every
/// `1/(1 + c^2 p(b))` is integral.
pub fn check_general_characterization(
    p: &Polynomial,
    set: &SetDescriptor,
    config: &SampleConfig,
) -> Result<CharacterizationReport> {
    let p = p.embed(set.vars())?;
    let cs = default_c_values();
    let squares: Vec<FieldElement> = cs.iter().map(|c| c * c).collect();
    let mut samples = 0;
    let mut pairs = 0;
    let mut first_negative: Option<(Vec<FieldElement>, FieldElement)> = None;
    let report = |verdict, samples, pairs| CharacterizationReport { verdict, samples, c_values: cs.len(), pairs_checked: pairs };
    for point in ProbePoints::new(set, config) {
        samples += 1;
        let Ok(value) = p.eval_named(set.vars(), &point) else { continue };
        match value.sign() {
            Ok(Ordering::Less) => {
                if square_leading(&value) {
                    if let Some(v) = confirm(&p, set, &point, &value)? {
                        return Ok(report(v, samples, pairs + 1));
                    }
                }
                first_negative.get_or_insert((point, value));
            }
            Ok(_) => {
                for (c, c2) in cs.iter().zip(&squares) {
                    pairs += 1;
                    let w = &FieldElement::one() + &(c2 * &value);
                    if let Ok(Value::Finite(v)) = w.valuation() {
                        if v > Exponent::zero() {
                            let verdict = CharacterizationVerdict::Incoherent {
                                point,
                                c: c.clone(),
                                valuation: Value::Finite(-v),
                            };
                            return Ok(report(verdict, samples, pairs));
                        }
                    }
                }
            }
            Err(_) => {}
        }
    }
    let Some((point, value)) = first_negative else {
        return Ok(report(CharacterizationVerdict::ConsistentNonneg, samples, pairs));
    };
    for i in 0..set.arity() {
        for delta in shifts() {
            let Ok(b) = perturb(set, &point, i, &delta) else { continue };
            if !set.contains(&b).unwrap_or(false) {
                continue;
            }
            let Ok(v) = p.eval_named(set.vars(), &b) else { continue };
            if v.sign().ok() == Some(Ordering::Less) && square_leading(&v) {
                if let Some(verdict) = confirm(&p, set, &b, &v)? {
                    return Ok(report(verdict, samples, pairs + 1));
                }
            }
        }
    }
    let reason = "no sampled negative value has a rational-square leading coefficient".to_string();
    Ok(report(CharacterizationVerdict::Obstruction { point, value, reason }, samples, pairs))
}
