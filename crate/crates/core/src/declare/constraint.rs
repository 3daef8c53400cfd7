use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{END_LABEL, INIT_LABEL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Template {
    Init,
    ExactlyOne,
    CoExistence,
    NotCoExistence,
    Succession,
    AlternateSuccession,
    ChainSuccession,
    NotChainSuccession,
    AlternatePrecedence,
    AlternateResponse,
}

impl Template {
    pub const ALL: [Template; 10] = [
        Template::Init,
        Template::ExactlyOne,
        Template::CoExistence,
        Template::NotCoExistence,
        Template::Succession,
        Template::AlternateSuccession,
        Template::ChainSuccession,
        Template::NotChainSuccession,
        Template::AlternatePrecedence,
        Template::AlternateResponse,
    ];

    pub fn arity(self) -> usize {
        match self {
            Template::Init | Template::ExactlyOne => 1,
            _ => 2,
        }
    }

    /// Human-readable name, e.g. `Alternate Precedence`.
    pub fn title(self) -> &'static str {
        match self {
            Template::Init => "Init",
            Template::ExactlyOne => "Exactly One",
            Template::CoExistence => "CoExistence",
            Template::NotCoExistence => "Not CoExistence",
            Template::Succession => "Succession",
            Template::AlternateSuccession => "Alternate Succession",
            Template::ChainSuccession => "Chain Succession",
            Template::NotChainSuccession => "Not Chain Succession",
            Template::AlternatePrecedence => "Alternate Precedence",
            Template::AlternateResponse => "Alternate Response",
        }
    }

    /// Spelling used in `.decl` files.
    pub fn decl_name(self) -> &'static str {
        match self {
            Template::Init => "Init",
            Template::ExactlyOne => "Exactly1",
            Template::CoExistence => "Co-Existence",
            Template::NotCoExistence => "Not Co-Existence",
            Template::Succession => "Succession",
            Template::AlternateSuccession => "Alternate Succession",
            Template::ChainSuccession => "Chain Succession",
            Template::NotChainSuccession => "Not Chain Succession",
            Template::AlternatePrecedence => "Alternate Precedence",
            Template::AlternateResponse => "Alternate Response",
        }
    }

    pub fn from_decl_name(s: &str) -> Option<Template> {
        Template::ALL.into_iter().find(|t| t.decl_name() == s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeclareError {
    #[error("{template} takes {expected} parameter(s), got {got}")]
    Arity {
        template: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{0} needs two distinct parameters")]
    RepeatedParameter(&'static str),
    #[error("label \"{0}\" is not in the alphabet")]
    UnknownLabel(String),
}

/// One template instantiated over activity labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ConstraintInstance {
    pub template: Template,
    pub params: Vec<String>,
}

impl ConstraintInstance {
    pub fn new(template: Template, params: Vec<String>) -> Result<Self, DeclareError> {
        if params.len() != template.arity() {
            return Err(DeclareError::Arity {
                template: template.title(),
                expected: template.arity(),
                got: params.len(),
            });
        }
        if params.len() == 2 && params[0] == params[1] {
            return Err(DeclareError::RepeatedParameter(template.title()));
        }
        Ok(Self { template, params })
    }

    pub fn unary(template: Template, a: impl Into<String>) -> Self {
        Self::new(template, vec![a.into()]).expect("unary template")
    }

    pub fn binary(template: Template, a: impl Into<String>, b: impl Into<String>) -> Self {
        Self::new(template, vec![a.into(), b.into()]).expect("binary template over distinct labels")
    }
}

/// Display form of a label: the reserved markers print as `init` and `end`.
pub fn display_label(label: &str) -> &str {
    match label {
        INIT_LABEL => "init",
        END_LABEL => "end",
        other => other,
    }
}

/// Inverse of [`display_label`].
pub fn internal_label(label: &str) -> &str {
    match label {
        "init" => INIT_LABEL,
        "end" => END_LABEL,
        other => other,
    }
}

impl fmt::Display for ConstraintInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.template.title())?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", display_label(p))?;
        }
        write!(f, ")")
    }
}

/// A set of constraints over a fixed, ordered alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DeclareSpec {
    pub alphabet: Vec<String>,
    pub constraints: BTreeSet<ConstraintInstance>,
    /// Readings chosen where the source notation is ambiguous.
    pub interpretations: Vec<String>,
}

impl DeclareSpec {
    pub fn new(alphabet: Vec<String>) -> Self {
        Self {
            alphabet,
            ..Self::default()
        }
    }

    /// Adds a constraint, extending the alphabet with any new parameter.
    pub fn insert(&mut self, c: ConstraintInstance) {
        for p in &c.params {
            if !self.alphabet.contains(p) {
                self.alphabet.push(p.clone());
            }
        }
        self.constraints.insert(c);
    }

    pub fn references(&self, label: &str) -> bool {
        self.constraints
            .iter()
            .any(|c| c.params.iter().any(|p| p == label))
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_is_checked() {
        assert!(matches!(
            ConstraintInstance::new(Template::Init, vec!["A".into(), "B".into()]),
            Err(DeclareError::Arity {
                expected: 1,
                got: 2,
                ..
            })
        ));
        assert!(
            ConstraintInstance::new(Template::Succession, vec!["A".into(), "A".into()]).is_err()
        );
    }

    #[test]
    fn reserved_labels_render_plainly() {
        let c = ConstraintInstance::binary(Template::AlternateResponse, "B", "__END__");
        assert_eq!(c.to_string(), "Alternate Response(B, end)");
        assert_eq!(internal_label("init"), "__INIT__");
        assert_eq!(display_label("__INIT__"), "init");
    }

    #[test]
    fn decl_names_round_trip() {
        for t in Template::ALL {
            assert_eq!(Template::from_decl_name(t.decl_name()), Some(t));
        }
    }

    #[test]
    fn insert_extends_alphabet() {
        let mut s = DeclareSpec::new(vec!["A".into()]);
        s.insert(ConstraintInstance::binary(Template::Succession, "A", "B"));
        assert_eq!(s.alphabet, ["A", "B"]);
        assert!(s.references("B"));
        assert!(!s.references("C"));
        assert_eq!(s.len(), 1);
    }
}
