use std::fmt;
use std::ops::Add;

use super::Exponent;

/// An element of the value group `Q`, or `Top` for the valuation of zero.
///
/// `Top` sorts above every finite value and absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(Exponent),
    Top,
}

impl Value {
    pub fn finite(self) -> Option<Exponent> {
        match self {
            Value::Finite(e) => Some(e),
            Value::Top => None,
        }
    }

    pub fn is_top(self) -> bool {
        matches!(self, Value::Top)
    }

    /// Whether the value is twice some element of the group. Always true for
    /// finite values since the group is divisible.
    pub fn in_double_group(self) -> bool {
        match self {
            Value::Finite(e) => {
                let half = e / 2;
                half + half == e
            }
            Value::Top => true,
        }
    }

    pub fn neg(self) -> Option<Value> {
        self.finite().map(|e| Value::Finite(-e))
    }

    pub fn sub(self, other: Value) -> Option<Value> {
        match (self, other) {
            (_, Value::Top) => None,
            (Value::Top, _) => Some(Value::Top),
            (Value::Finite(a), Value::Finite(b)) => Some(Value::Finite(a - b)),
        }
    }
}

impl Add for Value {
    type Output = Value;

    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Top,
        }
    }
}

impl From<Exponent> for Value {
    fn from(e: Exponent) -> Self {
        Value::Finite(e)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(e) => write!(f, "{e}"),
            Value::Top => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::exp;

    #[test]
    fn top_dominates() {
        let a = Value::Finite(exp(1000, 1));
        assert!(Value::Top > a);
        assert_eq!(a + Value::Top, Value::Top);
        assert_eq!(Value::Top + Value::Top, Value::Top);
        assert_eq!(Value::Top.sub(a), Some(Value::Top));
        assert_eq!(a.sub(Value::Top), None);
    }

    #[test]
    fn double_group() {
        assert!(Value::Finite(exp(3, 7)).in_double_group());
    }
}
