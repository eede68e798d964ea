//! Polarized formulas of linear logic.
//!
//! Positive and negative formulas live in separate types, so a term such as
//! a tensor of negatives cannot be built at all. Shifts are ordinary
//! constructors: `Up` embeds a negative into the positives and `Down` embeds
//! a positive into the negatives.

mod parse;

pub use parse::{
    formula_from_sexp, neg_from_sexp, parse_formula, parse_neg, parse_pos, pos_from_sexp, print_formula, ParseError,
    Sexp,
};

use serde::{Deserialize, Serialize};
use std::fmt;

/// An atom name: `[a-zA-Z][a-zA-Z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, String> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Atom(name))
        } else {
            Err(format!("invalid atom name `{name}`"))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Atom {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        Atom::new(s)
    }
}

impl From<Atom> for String {
    fn from(a: Atom) -> String {
        a.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Positive formulas: `a | 1 | P⊗Q | 0 | P⊕Q | !N | ⇑N`.
///
/// The derived ordering compares the constructor first, then the operands
/// left to right, then atom names. Contexts are kept sorted by it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Atom(Atom),
    One,
    Tensor(Box<Pos>, Box<Pos>),
    Zero,
    Plus(Box<Pos>, Box<Pos>),
    Bang(Box<Neg>),
    Up(Box<Neg>),
}

/// Negative formulas: `a^⊥ | ⊥ | N⅋M | ⊤ | N&M | ?P | ⇓P`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Neg {
    NAtom(Atom),
    Bot,
    Par(Box<Neg>, Box<Neg>),
    Top,
    With(Box<Neg>, Box<Neg>),
    Quest(Box<Pos>),
    Down(Box<Pos>),
}

/// A formula of either polarity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Pos(Pos),
    Neg(Neg),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Pos {
    pub fn atom(name: &str) -> Pos {
        Pos::Atom(Atom::new(name).expect("valid atom name"))
    }

    pub fn tensor(p: Pos, q: Pos) -> Pos {
        Pos::Tensor(Box::new(p), Box::new(q))
    }

    pub fn plus(p: Pos, q: Pos) -> Pos {
        Pos::Plus(Box::new(p), Box::new(q))
    }

    pub fn bang(n: Neg) -> Pos {
        Pos::Bang(Box::new(n))
    }

    pub fn up(n: Neg) -> Pos {
        Pos::Up(Box::new(n))
    }

    pub fn dual(&self) -> Neg {
        match self {
            Pos::Atom(a) => Neg::NAtom(a.clone()),
            Pos::One => Neg::Bot,
            Pos::Tensor(p, q) => Neg::par(p.dual(), q.dual()),
            Pos::Zero => Neg::Top,
            Pos::Plus(p, q) => Neg::with(p.dual(), q.dual()),
            Pos::Bang(n) => Neg::quest(n.dual()),
            Pos::Up(n) => Neg::down(n.dual()),
        }
    }

    /// Number of connective and leaf nodes; shifts count as one node.
    pub fn size(&self) -> usize {
        match self {
            Pos::Atom(_) | Pos::One | Pos::Zero => 1,
            Pos::Tensor(p, q) | Pos::Plus(p, q) => 1 + p.size() + q.size(),
            Pos::Bang(n) | Pos::Up(n) => 1 + n.size(),
        }
    }

    pub fn shift_count(&self) -> usize {
        match self {
            Pos::Atom(_) | Pos::One | Pos::Zero => 0,
            Pos::Tensor(p, q) | Pos::Plus(p, q) => p.shift_count() + q.shift_count(),
            Pos::Bang(n) => n.shift_count(),
            Pos::Up(n) => 1 + n.shift_count(),
        }
    }
}

impl Neg {
    pub fn natom(name: &str) -> Neg {
        Neg::NAtom(Atom::new(name).expect("valid atom name"))
    }

    pub fn par(n: Neg, m: Neg) -> Neg {
        Neg::Par(Box::new(n), Box::new(m))
    }

    pub fn with(n: Neg, m: Neg) -> Neg {
        Neg::With(Box::new(n), Box::new(m))
    }

    pub fn quest(p: Pos) -> Neg {
        Neg::Quest(Box::new(p))
    }

    pub fn down(p: Pos) -> Neg {
        Neg::Down(Box::new(p))
    }

    pub fn dual(&self) -> Pos {
        match self {
            Neg::NAtom(a) => Pos::Atom(a.clone()),
            Neg::Bot => Pos::One,
            Neg::Par(n, m) => Pos::tensor(n.dual(), m.dual()),
            Neg::Top => Pos::Zero,
            Neg::With(n, m) => Pos::plus(n.dual(), m.dual()),
            Neg::Quest(p) => Pos::bang(p.dual()),
            Neg::Down(p) => Pos::up(p.dual()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Neg::NAtom(_) | Neg::Bot | Neg::Top => 1,
            Neg::Par(n, m) | Neg::With(n, m) => 1 + n.size() + m.size(),
            Neg::Quest(p) | Neg::Down(p) => 1 + p.size(),
        }
    }

    pub fn shift_count(&self) -> usize {
        match self {
            Neg::NAtom(_) | Neg::Bot | Neg::Top => 0,
            Neg::Par(n, m) | Neg::With(n, m) => n.shift_count() + m.shift_count(),
            Neg::Quest(p) => p.shift_count(),
            Neg::Down(p) => 1 + p.shift_count(),
        }
    }
}

impl Formula {
    pub fn polarity(&self) -> Polarity {
        match self {
            Formula::Pos(_) => Polarity::Positive,
            Formula::Neg(_) => Polarity::Negative,
        }
    }

    pub fn dual(&self) -> Formula {
        match self {
            Formula::Pos(p) => Formula::Neg(p.dual()),
            Formula::Neg(n) => Formula::Pos(n.dual()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Pos(p) => p.size(),
            Formula::Neg(n) => n.size(),
        }
    }

    pub fn shift_count(&self) -> usize {
        match self {
            Formula::Pos(p) => p.shift_count(),
            Formula::Neg(n) => n.shift_count(),
        }
    }
}

/// Duality on formulas of either polarity.
pub fn dual(f: &Formula) -> Formula {
    f.dual()
}

/// Structural size used as the first component of the cut measure.
pub fn fsize(f: &Formula) -> usize {
    f.size()
}

impl From<Pos> for Formula {
    fn from(p: Pos) -> Self {
        Formula::Pos(p)
    }
}

impl From<Neg> for Formula {
    fn from(n: Neg) -> Self {
        Formula::Neg(n)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pos::Atom(a) => write!(f, "(atom {a})"),
            Pos::One => f.write_str("one"),
            Pos::Tensor(p, q) => write!(f, "(tensor {p} {q})"),
            Pos::Zero => f.write_str("zero"),
            Pos::Plus(p, q) => write!(f, "(plus {p} {q})"),
            Pos::Bang(n) => write!(f, "(bang {n})"),
            Pos::Up(n) => write!(f, "(up {n})"),
        }
    }
}

impl fmt::Display for Neg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Neg::NAtom(a) => write!(f, "(natom {a})"),
            Neg::Bot => f.write_str("bot"),
            Neg::Par(n, m) => write!(f, "(par {n} {m})"),
            Neg::Top => f.write_str("top"),
            Neg::With(n, m) => write!(f, "(with {n} {m})"),
            Neg::Quest(p) => write!(f, "(quest {p})"),
            Neg::Down(p) => write!(f, "(down {p})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pos(p) => p.fmt(f),
            Formula::Neg(n) => n.fmt(f),
        }
    }
}

// Formulas travel through JSON as their s-expression text.
macro_rules! serde_via_text {
    ($ty:ty, $parse:path) => {
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let text = String::deserialize(d)?;
                $parse(&text).map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_text!(Pos, parse_pos);
serde_via_text!(Neg, parse_neg);
serde_via_text!(Formula, parse_formula);
