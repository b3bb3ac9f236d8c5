use std::fmt;

use super::{Signature, Valuation};

/// Propositional formula over the atoms of a [`Signature`]. Atoms are stored
/// by signature position, so a formula is only meaningful together with the
/// signature it was parsed against.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(position: usize) -> Self {
        Formula::Atom(position)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `true` for an empty iterator.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` for an empty iterator.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn eval(&self, v: Valuation) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(i) => v.value(*i),
            Formula::Not(f) => !f.eval(v),
            Formula::And(a, b) => a.eval(v) && b.eval(v),
            Formula::Or(a, b) => a.eval(v) || b.eval(v),
            Formula::Implies(a, b) => !a.eval(v) || b.eval(v),
            Formula::Iff(a, b) => a.eval(v) == b.eval(v),
        }
    }

    /// Largest atom position used, if any.
    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Atom(i) => Some(*i),
            Formula::Not(f) => f.max_atom(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.max_atom().max(b.max_atom())
            }
        }
    }

    /// Renders the formula in the concrete syntax accepted by
    /// [`parse_formula`](super::parse_formula), with minimal parentheses.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        Printer { formula: self, sig }
    }

    pub fn to_text(&self, sig: &Signature) -> String {
        self.display(sig).to_string()
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            _ => 6,
        }
    }
}

struct Printer<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
}

impl Printer<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
        let paren = node.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match node {
            Formula::True => f.write_str("true")?,
            Formula::False => f.write_str("false")?,
            Formula::Atom(i) => f.write_str(self.sig.name(*i))?,
            Formula::Not(inner) => {
                f.write_str("~")?;
                self.write(f, inner, 5)?;
            }
            Formula::And(a, b) => self.binary(f, a, " & ", b, 4, 5)?,
            Formula::Or(a, b) => self.binary(f, a, " | ", b, 3, 4)?,
            Formula::Implies(a, b) => self.binary(f, a, " -> ", b, 3, 2)?,
            Formula::Iff(a, b) => self.binary(f, a, " <-> ", b, 1, 2)?,
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        a: &Formula,
        op: &str,
        b: &Formula,
        left: u8,
        right: u8,
    ) -> fmt::Result {
        self.write(f, a, left)?;
        f.write_str(op)?;
        self.write(f, b, right)
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(["p", "q", "r"]).unwrap()
    }

    #[test]
    fn prints_with_minimal_parentheses() {
        let s = sig();
        let (p, q, r) = (Formula::atom(0), Formula::atom(1), Formula::atom(2));
        let f = Formula::implies(Formula::and(p.clone(), Formula::not(q.clone())), r.clone());
        assert_eq!(f.to_text(&s), "p & ~q -> r");
        let g = Formula::implies(Formula::implies(p.clone(), q.clone()), r.clone());
        assert_eq!(g.to_text(&s), "(p -> q) -> r");
        let h = Formula::not(Formula::or(p, q));
        assert_eq!(h.to_text(&s), "~(p | q)");
    }

    #[test]
    fn empty_junctions_are_constants() {
        assert_eq!(Formula::conjunction([]), Formula::True);
        assert_eq!(Formula::disjunction([]), Formula::False);
    }
}
