use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered alphabet of symbolic parameters. Generators flagged invertible may
/// carry negative exponents.
#[derive(Debug, Clone)]
pub struct ParamSet {
    names: Vec<String>,
    invertible: Vec<bool>,
    index: HashMap<String, usize>,
}

impl PartialEq for ParamSet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.invertible == other.invertible
    }
}

impl Eq for ParamSet {}

pub type Params = Arc<ParamSet>;

impl ParamSet {
    /// Builds a parameter set from `(name, invertible)` pairs.
    pub fn new<S: AsRef<str>>(gens: &[(S, bool)]) -> Result<Params> {
        let mut ps = ParamSet { names: Vec::new(), invertible: Vec::new(), index: HashMap::new() };
        for (name, inv) in gens {
            ps.push(name.as_ref(), *inv)?;
        }
        Ok(Arc::new(ps))
    }

    /// Non-invertible generators with the given names.
    pub fn plain<S: AsRef<str>>(names: &[S]) -> Result<Params> {
        let gens: Vec<(&str, bool)> = names.iter().map(|n| (n.as_ref(), false)).collect();
        ParamSet::new(&gens)
    }

    fn push(&mut self, name: &str, inv: bool) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::Usage(format!("invalid parameter name `{name}`")));
        }
        if self.index.contains_key(name) {
            return Err(Error::Usage(format!("duplicate parameter `{name}`")));
        }
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        self.invertible.push(inv);
        Ok(())
    }

    /// A new set with `extra` generators appended; existing names are kept in place
    /// and repeated names are skipped.
    pub fn extended<S: AsRef<str>>(&self, extra: &[(S, bool)]) -> Result<Params> {
        let mut ps = self.clone();
        for (name, inv) in extra {
            if ps.index.contains_key(name.as_ref()) {
                continue;
            }
            ps.push(name.as_ref(), *inv)?;
        }
        Ok(Arc::new(ps))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.invertible[i]
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(ParamSet::plain(&["a", "a"]).is_err());
        assert!(ParamSet::plain(&["1a"]).is_err());
        let ps = ParamSet::new(&[("lambda1", true), ("beta", false)]).unwrap();
        assert!(ps.is_invertible(0));
        assert_eq!(ps.index_of("beta"), Some(1));
    }

    #[test]
    fn extension_keeps_order() {
        let ps = ParamSet::plain(&["x", "y"]).unwrap();
        let ext = ps.extended(&[("z", true), ("x", false)]).unwrap();
        assert_eq!(ext.names(), &["x", "y", "z"]);
        assert!(ext.is_invertible(2));
    }
}
