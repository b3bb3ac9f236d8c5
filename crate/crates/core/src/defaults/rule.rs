use serde::{Deserialize, Serialize};

use crate::logic::Formula;

/// `Normal` is `α ∼ φ`; `Negated` is `α ≁ φ`, which denies the default
/// without asserting `α ∼ ¬φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    #[default]
    Normal,
    Negated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    #[default]
    Plain,
    Expert,
    Agreed,
    Confirmed,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Plain => "plain",
            Provenance::Expert => "expert",
            Provenance::Agreed => "agreed",
            Provenance::Confirmed => "confirmed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "plain" => Provenance::Plain,
            "expert" => Provenance::Expert,
            "agreed" => Provenance::Agreed,
            "confirmed" => Provenance::Confirmed,
            _ => return None,
        })
    }
}

/// A default `(X : Y)`: most of `scope` satisfies `conclusion`, apart from
/// the declared exception sets and a very small set of surprises.
#[derive(Debug, Clone, PartialEq)]
pub struct DefaultRule {
    pub id: String,
    pub scope: Formula,
    pub conclusion: Formula,
    pub polarity: Polarity,
    pub exceptions: Vec<Formula>,
    /// Bound on the surprise set, as a fraction of the scope.
    pub surprise_budget: f64,
    pub homogeneous: bool,
    pub provenance: Provenance,
}

impl DefaultRule {
    pub fn new(id: impl Into<String>, scope: Formula, conclusion: Formula) -> Self {
        DefaultRule {
            id: id.into(),
            scope,
            conclusion,
            polarity: Polarity::Normal,
            exceptions: Vec::new(),
            surprise_budget: 0.0,
            homogeneous: false,
            provenance: Provenance::Plain,
        }
    }

    pub fn negated(mut self) -> Self {
        self.polarity = Polarity::Negated;
        self
    }

    pub fn with_exception(mut self, exception: Formula) -> Self {
        self.exceptions.push(exception);
        self
    }

    pub fn with_surprise(mut self, budget: f64) -> Self {
        self.surprise_budget = budget;
        self
    }

    pub fn homogeneous(mut self) -> Self {
        self.homogeneous = true;
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn is_negated(&self) -> bool {
        self.polarity == Polarity::Negated
    }
}
