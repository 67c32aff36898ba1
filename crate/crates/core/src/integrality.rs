//! Integrality of rational functions on valuation-defined sets.
//!
//! Two independent verdicts are offered and never substituted for each other:
//!
//! * the Gauss criterion `gauss(num) >= gauss(den)`, which is the valuation at
//!   a generic point of the unit polydisc (residues algebraically independent);
//! * a pointwise oracle that searches the set for a point `b` where `h(b)` is
//!   defined and has negative valuation.
//!
//! For polynomials the two agree. For quotients they can differ: `(x+eps)/x`
//! passes the Gauss test but takes the value `1 + eps^-1` at `x = eps^2`.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{rat, Exponent, FieldElement, Value};
use crate::poly::{Polynomial, RationalFunction};
use crate::sample::{SampleConfig, Sampler};

/// Per-coordinate affine map `x_i = center_i + scale_i * y_i` from the unit
/// polydisc onto an `O_K`-module.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineModuleMap {
    centers: Vec<FieldElement>,
    scales: Vec<FieldElement>,
}

impl AffineModuleMap {
    pub fn new(centers: Vec<FieldElement>, scales: Vec<FieldElement>) -> Result<Self> {
        if centers.len() != scales.len() {
            return Err(Error::ArityMismatch { expected: centers.len(), got: scales.len() });
        }
        if scales.iter().any(|s| s.is_exact_zero()) {
            return Err(Error::Invalid("affine scale must be nonzero".into()));
        }
        for s in &scales {
            s.leading()?;
        }
        Ok(AffineModuleMap { centers, scales })
    }

    pub fn identity(n: usize) -> Self {
        AffineModuleMap {
            centers: vec![FieldElement::zero(); n],
            scales: vec![FieldElement::one(); n],
        }
    }

    pub fn centers(&self) -> &[FieldElement] {
        &self.centers
    }

    pub fn scales(&self) -> &[FieldElement] {
        &self.scales
    }

    pub fn arity(&self) -> usize {
        self.centers.len()
    }

    /// `y -> center + scale * y`.
    pub fn from_unit(&self, y: &[FieldElement]) -> Vec<FieldElement> {
        y.iter()
            .zip(self.centers.iter().zip(&self.scales))
            .map(|(y, (a, l))| a + &(l * y))
            .collect()
    }

    /// `x -> (x - center) / scale`.
    pub fn to_unit(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        x.iter()
            .zip(self.centers.iter().zip(&self.scales))
            .map(|(x, (a, l))| Ok(&(x - a) * &l.invert()?))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SetKind {
    UnitPolydisc,
    AffineModule(AffineModuleMap),
}

/// A definable set: the unit polydisc or an affine image of it, optionally cut
/// down by strict polynomial inequalities `p_j(x) > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SetDescriptor {
    vars: Vec<String>,
    kind: SetKind,
    strict: Vec<Polynomial>,
}

impl SetDescriptor {
    pub fn unit_polydisc(vars: &[String]) -> Self {
        let mut v = vars.to_vec();
        v.sort_by(|a, b| crate::poly::var_cmp(a, b));
        SetDescriptor { vars: v, kind: SetKind::UnitPolydisc, strict: Vec::new() }
    }

    /// `vars[i]` ranges over `centers[i] + scales[i] * O_K`.
    pub fn affine(vars: &[String], map: AffineModuleMap) -> Result<Self> {
        if vars.len() != map.arity() {
            return Err(Error::ArityMismatch { expected: vars.len(), got: map.arity() });
        }
        let mut idx: Vec<usize> = (0..vars.len()).collect();
        idx.sort_by(|&a, &b| crate::poly::var_cmp(&vars[a], &vars[b]));
        let map = AffineModuleMap {
            centers: idx.iter().map(|&i| map.centers[i].clone()).collect(),
            scales: idx.iter().map(|&i| map.scales[i].clone()).collect(),
        };
        Ok(SetDescriptor {
            vars: idx.iter().map(|&i| vars[i].clone()).collect(),
            kind: SetKind::AffineModule(map),
            strict: Vec::new(),
        })
    }

    pub fn with_strict(mut self, strict: Vec<Polynomial>) -> Result<Self> {
        for p in &strict {
            p.embed(&self.vars)?;
        }
        self.strict = strict;
        Ok(self)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn strict(&self) -> &[Polynomial] {
        &self.strict
    }

    pub fn affine_map(&self) -> Option<&AffineModuleMap> {
        match &self.kind {
            SetKind::AffineModule(m) => Some(m),
            SetKind::UnitPolydisc => None,
        }
    }

    /// The functions whose integrality defines the set: `x_i` on the polydisc,
    /// `(x_i - a_i)/l_i` on an affine module.
    pub fn generators(&self) -> Vec<RationalFunction> {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| match &self.kind {
                SetKind::UnitPolydisc => Polynomial::var(v).into(),
                SetKind::AffineModule(m) => RationalFunction::new(
                    Polynomial::var(v) - Polynomial::constant(m.centers[i].clone()),
                    Polynomial::constant(m.scales[i].clone()),
                )
                .expect("nonzero scale"),
            })
            .collect()
    }

    pub fn generator_value(&self, i: usize, point: &[FieldElement]) -> Result<FieldElement> {
        let x = point
            .get(i)
            .ok_or(Error::ArityMismatch { expected: self.arity(), got: point.len() })?;
        match &self.kind {
            SetKind::UnitPolydisc => Ok(x.clone()),
            SetKind::AffineModule(m) => Ok(&(x - &m.centers[i]) * &m.scales[i].invert()?),
        }
    }

    /// Maps unit-polydisc coordinates into the set's ambient coordinates.
    pub fn from_unit(&self, y: &[FieldElement]) -> Vec<FieldElement> {
        match &self.kind {
            SetKind::UnitPolydisc => y.to_vec(),
            SetKind::AffineModule(m) => m.from_unit(y),
        }
    }

    pub fn satisfies_strict(&self, point: &[FieldElement]) -> Result<bool> {
        for p in &self.strict {
            if p.eval_named(&self.vars, point)?.sign()? != Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains(&self, point: &[FieldElement]) -> Result<bool> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: point.len() });
        }
        for i in 0..self.arity() {
            if !self.generator_value(i, point)?.is_integral()? {
                return Ok(false);
            }
        }
        self.satisfies_strict(point)
    }

    /// The same set without its strict constraints.
    pub fn without_strict(&self) -> Self {
        SetDescriptor { vars: self.vars.clone(), kind: self.kind.clone(), strict: Vec::new() }
    }
}

/// `h(center + scale * y)`, expressed again in the set's variable names.
pub fn module_pullback(h: &RationalFunction, vars: &[String], map: &AffineModuleMap) -> Result<RationalFunction> {
    if vars.len() != map.arity() {
        return Err(Error::ArityMismatch { expected: vars.len(), got: map.arity() });
    }
    let images: Vec<RationalFunction> = vars
        .iter()
        .zip(map.centers.iter().zip(&map.scales))
        .map(|(v, (a, l))| (Polynomial::constant(a.clone()) + Polynomial::var(v).scale(l)).into())
        .collect();
    h.substitute(vars, &images)
}

/// Polynomial form of [`module_pullback`]; exact, no division involved.
pub fn polynomial_pullback(p: &Polynomial, vars: &[String], map: &AffineModuleMap) -> Result<Polynomial> {
    let p = p.embed(&Polynomial::var_union(p.vars(), vars))?;
    let images: Vec<Polynomial> = p
        .vars()
        .iter()
        .map(|v| match vars.iter().position(|w| w == v) {
            Some(i) => Polynomial::constant(map.centers[i].clone()) + Polynomial::var(v).scale(&map.scales[i]),
            None => Polynomial::var(v),
        })
        .collect();
    p.compose(&images)
}

/// `f((x - center)/scale)`: the inverse of [`module_pullback`].
pub fn module_pushforward(f: &RationalFunction, vars: &[String], map: &AffineModuleMap) -> Result<RationalFunction> {
    let images: Vec<RationalFunction> = vars
        .iter()
        .zip(map.centers.iter().zip(&map.scales))
        .map(|(v, (a, l))| {
            RationalFunction::new(
                Polynomial::var(v) - Polynomial::constant(a.clone()),
                Polynomial::constant(l.clone()),
            )
        })
        .collect::<Result<_>>()?;
    f.substitute(vars, &images)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussVerdict {
    pub integral: bool,
    /// `gauss(num) - gauss(den)` after pulling back to the unit polydisc.
    pub gap: Value,
}

fn reject_strict(set: &SetDescriptor) -> Result<()> {
    if set.strict().is_empty() {
        Ok(())
    } else {
        Err(Error::UnsupportedSet("the Gauss criterion applies to sets without strict constraints".into()))
    }
}

/// Brings `h` to unit-polydisc coordinates for `set`.
pub fn to_polydisc(h: &RationalFunction, set: &SetDescriptor) -> Result<RationalFunction> {
    match set.affine_map() {
        None => Ok(h.clone()),
        Some(map) => module_pullback(h, set.vars(), map),
    }
}

pub fn gauss_verdict(h: &RationalFunction, set: &SetDescriptor) -> Result<GaussVerdict> {
    reject_strict(set)?;
    let g = to_polydisc(h, set)?;
    let num = g.num().gauss_valuation()?;
    let den = g.den().gauss_valuation()?;
    let gap = num.sub(den).ok_or(Error::UndefinedGauss)?;
    Ok(GaussVerdict { integral: num >= den, gap })
}

/// Integrality at the generic point of the set (the Gauss criterion).
pub fn generic_type_integral(h: &RationalFunction, set: &SetDescriptor) -> Result<bool> {
    Ok(gauss_verdict(h, set)?.integral)
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntegralityVerdict {
    IntegralByGauss,
    NotIntegralByGauss { gap: Value },
    CounterexampleFound { point: Vec<FieldElement>, value: FieldElement },
    NoCounterexampleFound { samples: usize, skipped: usize },
}

/// Deterministic stream of candidate points of a set: structured probes first
/// (origin, sign corners, `+-eps^k` coordinates, a rational grid), then random
/// ball points. Points violating strict constraints are dropped.
pub struct ProbePoints<'a> {
    set: &'a SetDescriptor,
    sampler: Sampler,
    structured: Vec<Vec<FieldElement>>,
    structured_budget: usize,
    total: usize,
    next: usize,
    /// Candidates discarded because they failed a strict constraint or could
    /// not be decided.
    pub rejected: usize,
}

const GRID: [(i64, i64); 10] = [(1, 2), (-1, 2), (2, 1), (-2, 1), (1, 3), (-1, 3), (3, 1), (-3, 1), (3, 2), (-3, 2)];

pub fn structured_unit_points(n: usize) -> Vec<Vec<FieldElement>> {
    let one = FieldElement::one();
    let zero = FieldElement::zero();
    let mut out = vec![vec![zero.clone(); n]];
    let corners = 1usize << n.min(6);
    for mask in 0..corners {
        out.push((0..n).map(|i| if i < 6 && mask >> i & 1 == 1 { -&one } else { one.clone() }).collect());
    }
    for k in 1..=4 {
        let e = FieldElement::eps_pow(Exponent::from_integer(k));
        for s in [e.clone(), -&e] {
            out.push(vec![s.clone(); n]);
            if n > 1 {
                for i in 0..n {
                    let mut p = vec![one.clone(); n];
                    p[i] = s.clone();
                    out.push(p);
                    let mut p = vec![zero.clone(); n];
                    p[i] = s.clone();
                    out.push(p);
                }
            }
        }
    }
    let grid: Vec<FieldElement> = GRID.iter().map(|&(a, b)| FieldElement::from_rational(rat(a, b))).collect();
    if n == 1 {
        out.extend(grid.iter().map(|g| vec![g.clone()]));
    } else {
        for g in &grid {
            for h in &grid {
                let mut p = vec![one.clone(); n];
                p[0] = g.clone();
                p[1] = h.clone();
                out.push(p);
            }
        }
    }
    out
}

impl<'a> ProbePoints<'a> {
    pub fn new(set: &'a SetDescriptor, config: &SampleConfig) -> Self {
        let structured = structured_unit_points(set.arity());
        ProbePoints {
            set,
            sampler: Sampler::new(config.clone()),
            structured_budget: config.structured_budget().min(structured.len()),
            structured,
            total: config.samples,
            next: 0,
            rejected: 0,
        }
    }

    fn unit_candidate(&self, i: usize) -> Vec<FieldElement> {
        if i < self.structured_budget {
            return self.structured[i].clone();
        }
        let index = i as u64;
        if index % 4 == 3 {
            self.sampler.generic_point(index, self.set.arity(), 1)
        } else {
            self.sampler.ball_point(index, self.set.arity())
        }
    }
}

impl Iterator for ProbePoints<'_> {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Self::Item> {
        while self.next < self.total {
            let i = self.next;
            self.next += 1;
            let point = self.set.from_unit(&self.unit_candidate(i));
            match self.set.satisfies_strict(&point) {
                Ok(true) => return Some(point),
                _ => self.rejected += 1,
            }
        }
        None
    }
}

/// Searches the set for a point where `h` is defined and not integral.
pub fn pointwise_integral_oracle(h: &RationalFunction, set: &SetDescriptor, config: &SampleConfig) -> IntegralityVerdict {
    let mut probes = ProbePoints::new(set, config);
    let mut tested = 0;
    let mut skipped = 0;
    for point in probes.by_ref() {
        tested += 1;
        match h.valuation_at(set.vars(), &point) {
            Ok(v) if v >= Value::Finite(Exponent::zero()) => {}
            Ok(_) => match h.eval_named(set.vars(), &point) {
                Ok(value) => return IntegralityVerdict::CounterexampleFound { point, value },
                Err(_) => skipped += 1,
            },
            Err(_) => skipped += 1,
        }
    }
    IntegralityVerdict::NoCounterexampleFound { samples: tested, skipped: skipped + probes.rejected }
}

/// Splits an infinitesimal-definite `h` on the unit polydisc as `m * g` with
/// `m = eps^gauss(h)` and `g` of Gauss valuation zero.
pub fn infinitesimal_decompose(h: &RationalFunction, set: &SetDescriptor) -> Result<(FieldElement, RationalFunction)> {
    if set.affine_map().is_some() || !set.strict().is_empty() {
        return Err(Error::UnsupportedSet("decomposition is implemented for the unit polydisc".into()));
    }
    match h.gauss_valuation()? {
        Value::Top => Ok((FieldElement::eps(), RationalFunction::zero())),
        Value::Finite(g) if g > Exponent::zero() => {
            let m = FieldElement::eps_pow(g);
            let rest = h.scale(&FieldElement::eps_pow(-g));
            Ok((m, rest))
        }
        Value::Finite(g) => Err(Error::NotInfinitesimalDefinite(g.to_string())),
    }
}
