//! JSON encodings of sets, ring expressions and certificates.
//!
//! Every expression is stored as canonical text, so encoding a decoded
//! document reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::certificates::{DickmannCertificate, DickmannTerm, IntegralityWitness, MonicCoefficient, NonnegCertificate};
use crate::error::{Error, Result};
use crate::integrality::{AffineModuleMap, SetDescriptor};
use crate::poly::{ConeExpr, ConeTerm, Polynomial, RationalFunction, RingExpr, SosExpr, TElement};
use crate::syntax::{parse_field_element, parse_polynomial, parse_rational_function};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<Vec<String>>,
}

/// `x`, `x y`, `x y z`, then `x1 .. xn`.
pub fn default_vars(n: usize) -> Vec<String> {
    match n {
        1..=3 => ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect(),
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

/// Variable names for an `n`-dimensional set: explicit names win, then the
/// variables the expressions use when they number exactly `n`, then
/// [`default_vars`] or `x1 .. xn`, whichever covers them.
pub fn choose_vars(n: usize, explicit: Option<&[String]>, used: &[String]) -> Result<Vec<String>> {
    if let Some(v) = explicit {
        if v.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: v.len() });
        }
        return Ok(sorted(v.to_vec()));
    }
    if used.len() == n {
        return Ok(sorted(used.to_vec()));
    }
    let indexed: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    for names in [default_vars(n), indexed] {
        if used.iter().all(|v| names.contains(v)) {
            return Ok(names);
        }
    }
    match used.iter().find(|v| !default_vars(n).contains(v)) {
        Some(v) => Err(Error::UnknownVariable(v.clone())),
        None => Err(Error::ArityMismatch { expected: n, got: used.len() }),
    }
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort_by(|a, b| crate::poly::var_cmp(a, b));
    v
}

impl SetJson {
    pub fn ball(n: usize) -> Self {
        SetJson { kind: "ball".into(), n: Some(n), centers: None, scales: None, vars: None, strict: None }
    }

    pub fn arity(&self) -> Result<usize> {
        match self.kind.as_str() {
            "ball" => self.n.ok_or_else(|| Error::Invalid("ball set needs \"n\"".into())),
            "affine" => Ok(self.centers.as_ref().map_or(0, Vec::len)),
            k => Err(Error::Invalid(format!("unknown set kind `{k}`"))),
        }
    }

    /// Builds the set; `used` lists the variables occurring in the
    /// expressions it will be paired with.
    pub fn to_set(&self, used: &[String]) -> Result<SetDescriptor> {
        let n = self.arity()?;
        let vars = choose_vars(n, self.vars.as_deref(), used)?;
        let set = match self.kind.as_str() {
            "ball" => SetDescriptor::unit_polydisc(&vars),
            _ => {
                let parse = |xs: &Option<Vec<String>>, what: &str| -> Result<Vec<_>> {
                    xs.as_ref()
                        .ok_or_else(|| Error::Invalid(format!("affine set needs \"{what}\"")))?
                        .iter()
                        .map(|s| parse_field_element(s))
                        .collect()
                };
                let map = AffineModuleMap::new(parse(&self.centers, "centers")?, parse(&self.scales, "scales")?)?;
                SetDescriptor::affine(&vars, map)?
            }
        };
        match &self.strict {
            None => Ok(set),
            Some(ps) => set.with_strict(ps.iter().map(|s| parse_polynomial(s)).collect::<Result<_>>()?),
        }
    }

    pub fn from_set(set: &SetDescriptor) -> Self {
        let strict = (!set.strict().is_empty()).then(|| set.strict().iter().map(|p| p.to_string()).collect());
        let vars = Some(set.vars().to_vec());
        match set.affine_map() {
            None => SetJson { kind: "ball".into(), n: Some(set.arity()), centers: None, scales: None, vars, strict },
            Some(m) => SetJson {
                kind: "affine".into(),
                n: None,
                centers: Some(m.centers().iter().map(|c| c.to_string()).collect()),
                scales: Some(m.scales().iter().map(|c| c.to_string()).collect()),
                vars,
                strict,
            },
        }
    }

    /// Variables named by the strict constraints.
    pub fn strict_vars(&self) -> Result<Vec<String>> {
        let mut out: Vec<String> = Vec::new();
        for s in self.strict.iter().flatten() {
            out = Polynomial::var_union(&out, &parse_polynomial(s)?.used_vars());
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeTermJson {
    pub sos: Vec<String>,
    pub factors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum RingJson {
    Const { value: String },
    Gen { index: usize },
    Iord { sos: Vec<String> },
    Icone { terms: Vec<ConeTermJson> },
    Sum { args: Vec<RingJson> },
    Prod { args: Vec<RingJson> },
}

fn sos_to_json(s: &SosExpr) -> Vec<String> {
    s.summands().iter().map(|x| x.to_string()).collect()
}

fn sos_from_json(xs: &[String]) -> Result<SosExpr> {
    Ok(SosExpr::new(xs.iter().map(|s| parse_rational_function(s)).collect::<Result<_>>()?))
}

impl RingJson {
    pub fn from_expr(e: &RingExpr) -> Self {
        match e {
            RingExpr::Const(c) => RingJson::Const { value: c.to_string() },
            RingExpr::Gen(i) => RingJson::Gen { index: *i },
            RingExpr::IOrd(s) => RingJson::Iord { sos: sos_to_json(s) },
            RingExpr::ICone(c) => RingJson::Icone {
                terms: c
                    .terms
                    .iter()
                    .map(|t| ConeTermJson { sos: sos_to_json(&t.sos), factors: t.factors.clone() })
                    .collect(),
            },
            RingExpr::Sum(xs) => RingJson::Sum { args: xs.iter().map(Self::from_expr).collect() },
            RingExpr::Prod(xs) => RingJson::Prod { args: xs.iter().map(Self::from_expr).collect() },
        }
    }

    pub fn to_expr(&self) -> Result<RingExpr> {
        Ok(match self {
            RingJson::Const { value } => RingExpr::Const(parse_field_element(value)?),
            RingJson::Gen { index } => RingExpr::Gen(*index),
            RingJson::Iord { sos } => RingExpr::IOrd(sos_from_json(sos)?),
            RingJson::Icone { terms } => RingExpr::ICone(ConeExpr::new(
                terms
                    .iter()
                    .map(|t| Ok(ConeTerm { sos: sos_from_json(&t.sos)?, factors: t.factors.clone() }))
                    .collect::<Result<_>>()?,
            )),
            RingJson::Sum { args } => RingExpr::Sum(args.iter().map(Self::to_expr).collect::<Result<_>>()?),
            RingJson::Prod { args } => RingExpr::Prod(args.iter().map(Self::to_expr).collect::<Result<_>>()?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TElementJson {
    pub m: String,
    pub a: RingJson,
}

impl TElementJson {
    fn from_t(t: &TElement) -> Self {
        TElementJson { m: t.m.to_string(), a: RingJson::from_expr(&t.a) }
    }

    fn to_t(&self) -> Result<TElement> {
        Ok(TElement::new(parse_field_element(&self.m)?, self.a.to_expr()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonicJson {
    pub num: RingJson,
    pub den: TElementJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub num: RingJson,
    pub den: TElementJson,
    pub monic: Option<Vec<MonicJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientJson {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub p: String,
    pub set: SetJson,
    pub r: Vec<String>,
    pub m: String,
    pub h: QuotientJson,
    pub witness: WitnessJson,
}

impl CertificateJson {
    pub fn new(p: &Polynomial, set: &SetDescriptor, cert: &NonnegCertificate) -> Self {
        let w = &cert.witness;
        CertificateJson {
            p: p.to_string(),
            set: SetJson::from_set(set),
            r: sos_to_json(&cert.r),
            m: cert.m.to_string(),
            h: QuotientJson { num: cert.h.num().to_string(), den: cert.h.den().to_string() },
            witness: WitnessJson {
                num: RingJson::from_expr(&w.num),
                den: TElementJson::from_t(&w.den),
                monic: w.monic.as_ref().map(|cs| {
                    cs.iter()
                        .map(|c| MonicJson { num: RingJson::from_expr(&c.num), den: TElementJson::from_t(&c.den) })
                        .collect()
                }),
            },
        }
    }

    pub fn decode(&self) -> Result<(Polynomial, SetDescriptor, NonnegCertificate)> {
        let p = parse_polynomial(&self.p)?;
        let set = self.set.to_set(&Polynomial::var_union(&p.used_vars(), &self.set.strict_vars()?))?;
        let h = RationalFunction::new(parse_polynomial(&self.h.num)?, parse_polynomial(&self.h.den)?)?;
        let w = &self.witness;
        let monic = match &w.monic {
            None => None,
            Some(cs) => Some(
                cs.iter()
                    .map(|c| Ok(MonicCoefficient { num: c.num.to_expr()?, den: c.den.to_t()? }))
                    .collect::<Result<_>>()?,
            ),
        };
        let cert = NonnegCertificate {
            r: sos_from_json(&self.r)?,
            m: parse_field_element(&self.m)?,
            h,
            witness: IntegralityWitness { num: w.num.to_expr()?, den: w.den.to_t()?, monic },
        };
        Ok((p, set, cert))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DickmannTermJson {
    pub m1: String,
    pub q1: String,
    pub m2: String,
    pub q2: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DickmannJson {
    pub p: String,
    pub terms: Vec<DickmannTermJson>,
}

impl DickmannJson {
    pub fn new(p: &Polynomial, cert: &DickmannCertificate) -> Self {
        DickmannJson {
            p: p.to_string(),
            terms: cert
                .terms
                .iter()
                .map(|t| DickmannTermJson {
                    m1: t.m1.to_string(),
                    q1: t.q1.to_string(),
                    m2: t.m2.to_string(),
                    q2: t.q2.to_string(),
                })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<(Polynomial, DickmannCertificate)> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(DickmannTerm {
                    m1: parse_field_element(&t.m1)?,
                    q1: parse_polynomial(&t.q1)?,
                    m2: parse_field_element(&t.m2)?,
                    q2: parse_polynomial(&t.q2)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok((parse_polynomial(&self.p)?, DickmannCertificate { terms }))
    }
}

/// Either certificate kind, told apart by the presence of `"terms"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyCertificateJson {
    Dickmann(DickmannJson),
    Nonneg(CertificateJson),
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("JSON: {e}")))
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

pub fn to_string_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;
    use crate::syntax::parse_rational_function;

    fn example() -> (Polynomial, SetDescriptor, NonnegCertificate) {
        let set = SetDescriptor::unit_polydisc(&["x".to_string()]);
        let x2 = RingExpr::Prod(vec![RingExpr::Gen(0), RingExpr::Gen(0)]);
        let cert = NonnegCertificate {
            r: SosExpr::from_polys([Polynomial::one()]),
            m: FieldElement::eps(),
            h: parse_rational_function("x^2/(1 - eps*x^2)").unwrap(),
            witness: IntegralityWitness::quotient(x2.clone(), TElement::new(-FieldElement::eps(), x2)),
        };
        (parse_polynomial("1 - eps*x^2").unwrap(), set, cert)
    }

    #[test]
    fn certificate_round_trip() {
        let (p, set, cert) = example();
        let text = to_string(&CertificateJson::new(&p, &set, &cert));
        assert_eq!(
            text,
            r#"{"p":"1 - eps*x^2","set":{"kind":"ball","n":1,"vars":["x"]},"r":["1"],"m":"eps","h":{"num":"x^2","den":"1 - eps*x^2"},"witness":{"num":{"op":"prod","args":[{"op":"gen","index":0},{"op":"gen","index":0}]},"den":{"m":"-eps","a":{"op":"prod","args":[{"op":"gen","index":0},{"op":"gen","index":0}]}},"monic":null}}"#
        );
        let parsed: CertificateJson = from_str(&text).unwrap();
        let (p2, set2, cert2) = parsed.decode().unwrap();
        assert_eq!((p2, set2, cert2.clone()), (p.clone(), set.clone(), cert));
        assert_eq!(to_string(&CertificateJson::new(&p, &set, &cert2)), text);
    }

    #[test]
    fn set_documents() {
        let s: SetJson = from_str(r#"{"kind":"affine","centers":["1"],"scales":["eps"]}"#).unwrap();
        let set = s.to_set(&["t".to_string()]).unwrap();
        assert_eq!(set.vars(), ["t"]);
        let s: SetJson = from_str(r#"{"kind":"ball","n":2,"strict":["x1","1-x2^2"]}"#).unwrap();
        let set = s.to_set(&s.strict_vars().unwrap()).unwrap();
        assert_eq!(set.vars(), ["x1", "x2"]);
        assert_eq!(set.strict().len(), 2);
        assert!(SetJson::ball(1).to_set(&["x".into(), "y".into()]).is_err());
        assert_eq!(SetJson::ball(3).to_set(&["y".into()]).unwrap().vars(), ["x", "y", "z"]);
    }

    #[test]
    fn ring_tree_round_trip() {
        let e = RingExpr::Sum(vec![
            RingExpr::Const(FieldElement::eps()),
            RingExpr::IOrd(SosExpr::from_polys([parse_polynomial("x - 1").unwrap()])),
            RingExpr::ICone(ConeExpr::new(vec![ConeTerm { sos: SosExpr::from_polys([Polynomial::one()]), factors: vec![0, 0] }])),
        ]);
        let j = RingJson::from_expr(&e);
        let text = to_string(&j);
        let back: RingJson = from_str(&text).unwrap();
        assert_eq!(back.to_expr().unwrap(), e);
    }

    #[test]
    fn untagged_kinds() {
        let d: AnyCertificateJson = from_str(r#"{"p":"1 + eps*x^2","terms":[{"m1":"eps","q1":"x","m2":"0","q2":"0"}]}"#).unwrap();
        assert!(matches!(d, AnyCertificateJson::Dickmann(_)));
        let (p, set, cert) = example();
        let text = to_string(&CertificateJson::new(&p, &set, &cert));
        assert!(matches!(from_str::<AnyCertificateJson>(&text).unwrap(), AnyCertificateJson::Nonneg(_)));
    }
}
