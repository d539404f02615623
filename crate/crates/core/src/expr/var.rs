use std::cmp::Ordering;
use std::fmt;

/// A canonical phase-space symbol.
///
/// `X(i)`, `V(i)` and `A(i)` are the coordinate jets of orders alpha-1, alpha
/// and 2*alpha of coordinate `i`; `J(i, k)` is the jet of order (2+k)*alpha.
/// `P(i)` and `Pi(i)` are the momenta conjugate to `X(i)` and `V(i)`. `P0` is
/// the momentum conjugate to time.
///
/// The derived ordering is the canonical order
/// `T < X.. < V.. < A.. < J.. < P.. < Pi.. < P0`, by index within a kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonicalVar {
    T,
    X(u32),
    V(u32),
    A(u32),
    J(u32, u32),
    P(u32),
    Pi(u32),
    P0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    T,
    X,
    V,
    A,
    J,
    P,
    Pi,
    P0,
}

impl CanonicalVar {
    pub fn kind(&self) -> VarKind {
        match self {
            CanonicalVar::T => VarKind::T,
            CanonicalVar::X(_) => VarKind::X,
            CanonicalVar::V(_) => VarKind::V,
            CanonicalVar::A(_) => VarKind::A,
            CanonicalVar::J(_, _) => VarKind::J,
            CanonicalVar::P(_) => VarKind::P,
            CanonicalVar::Pi(_) => VarKind::Pi,
            CanonicalVar::P0 => VarKind::P0,
        }
    }

    /// Coordinate number, absent for `T` and `P0`.
    pub fn index(&self) -> Option<u32> {
        match *self {
            CanonicalVar::X(i)
            | CanonicalVar::V(i)
            | CanonicalVar::A(i)
            | CanonicalVar::J(i, _)
            | CanonicalVar::P(i)
            | CanonicalVar::Pi(i) => Some(i),
            CanonicalVar::T | CanonicalVar::P0 => None,
        }
    }

    pub fn is_momentum(&self) -> bool {
        matches!(
            self,
            CanonicalVar::P(_) | CanonicalVar::Pi(_) | CanonicalVar::P0
        )
    }

    /// Acceleration or higher jet.
    pub fn is_jet(&self) -> bool {
        matches!(self, CanonicalVar::A(_) | CanonicalVar::J(_, _))
    }

    /// Ordering used when printing terms: later kinds lead, lower indices
    /// lead within a kind. Puts `pi3 - v3` and `1/2*pi1^2 + 1/2*pi2^2` in
    /// their natural reading order.
    pub(crate) fn display_cmp(&self, other: &Self) -> Ordering {
        other
            .kind()
            .cmp(&self.kind())
            .then_with(|| self.index().cmp(&other.index()))
            .then_with(|| match (self, other) {
                (CanonicalVar::J(_, a), CanonicalVar::J(_, b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl fmt::Display for CanonicalVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalVar::T => write!(f, "t"),
            CanonicalVar::X(i) => write!(f, "x{i}"),
            CanonicalVar::V(i) => write!(f, "v{i}"),
            CanonicalVar::A(i) => write!(f, "a{i}"),
            CanonicalVar::J(i, k) => write!(f, "j{i}_{k}"),
            CanonicalVar::P(i) => write!(f, "p{i}"),
            CanonicalVar::Pi(i) => write!(f, "pi{i}"),
            CanonicalVar::P0 => write!(f, "p0"),
        }
    }
}
