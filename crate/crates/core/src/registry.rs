//! Named variety tables available to expressions.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::variety::{builtin_curve, VarietyError, VarietyTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("`{0}` is reserved by the expression language")]
    Reserved(String),
    #[error("a table named `{0}` is already registered")]
    Duplicate(String),
    #[error("table `{name}` has invalid cells: {details}")]
    Invalid { name: String, details: String },
}

const KEYWORDS: [&str; 5] = ["point", "curve", "blowup", "prod", "L"];

/// Genus encoded by a built-in curve symbol `C_<g>`.
pub fn curve_symbol_genus(name: &str) -> Option<u32> {
    let digits = name.strip_prefix("C_")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn curve_symbol(genus: u32) -> String {
    format!("C_{genus}")
}

fn is_projspace_name(name: &str) -> bool {
    name.strip_prefix('P').is_some_and(|d| d.bytes().all(|b| b.is_ascii_digit()))
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Names that the parser resolves to built-in constructs.
pub fn is_reserved(name: &str) -> bool {
    KEYWORDS.contains(&name) || is_projspace_name(name) || curve_symbol_genus(name).is_some()
}

/// Append-only map from generator names to their tables. Built-in curve
/// symbols `C_<g>` resolve without registration.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    tables: BTreeMap<String, Arc<VarietyTable>>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Registers a table under its own name. Tables with hard invariant
    /// violations are refused.
    pub fn register(&mut self, table: VarietyTable) -> Result<(), RegistryError> {
        let name = table.name().to_owned();
        if !is_identifier(&name) {
            return Err(RegistryError::InvalidName(name));
        }
        if is_reserved(&name) {
            return Err(RegistryError::Reserved(name));
        }
        if self.tables.contains_key(&name) {
            return Err(RegistryError::Duplicate(name));
        }
        let errors = table.errors();
        if !errors.is_empty() {
            let details = errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
            return Err(RegistryError::Invalid { name, details });
        }
        self.tables.insert(name, Arc::new(table));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<Arc<VarietyTable>> {
        if let Some(t) = self.tables.get(name) {
            return Some(Arc::clone(t));
        }
        curve_symbol_genus(name).map(|g| Arc::new(builtin_curve(g)))
    }

    pub fn require(&self, name: &str) -> Result<Arc<VarietyTable>, VarietyError> {
        self.get(name).ok_or_else(|| VarietyError::Unresolved(name.to_owned()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Registered (non built-in) names in sorted order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }
}
