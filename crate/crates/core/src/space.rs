//! Finite outcome spaces and events over them.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named variable of a factorized outcome space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub values: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(name: S, values: &[&str]) -> Self {
        Variable {
            name: name.into(),
            values: values.iter().map(|v| v.to_string()).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.values.len()
    }
}

/// An ordered, nonempty set of atoms, optionally the Cartesian product of
/// a list of variables.
///
/// Factorized spaces enumerate atoms lexicographically in the declared value
/// order, first variable most significant. Every probability vector in the
/// crate is indexed in this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpace {
    atoms: Vec<String>,
    variables: Option<Vec<Variable>>,
}

impl OutcomeSpace {
    pub fn from_atoms<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = labels.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidSpace("no atoms".into()));
        }
        let mut seen = HashSet::new();
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate atom `{a}`")));
            }
        }
        Ok(Arc::new(OutcomeSpace {
            atoms,
            variables: None,
        }))
    }

    /// Cartesian product of `variables` in lexicographic order.
    pub fn product(variables: Vec<Variable>) -> Result<Arc<Self>> {
        if variables.is_empty() {
            return Err(Error::InvalidSpace("no variables".into()));
        }
        let mut names = HashSet::new();
        for v in &variables {
            if v.values.is_empty() {
                return Err(Error::InvalidSpace(format!(
                    "variable `{}` has no values",
                    v.name
                )));
            }
            if !names.insert(v.name.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate variable `{}`", v.name)));
            }
            let distinct: HashSet<_> = v.values.iter().collect();
            if distinct.len() != v.values.len() {
                return Err(Error::InvalidSpace(format!(
                    "variable `{}` repeats a value",
                    v.name
                )));
            }
        }
        let terse = variables
            .iter()
            .all(|v| v.values.iter().all(|s| s.chars().count() == 1));
        let size: usize = variables.iter().map(Variable::arity).product();
        let mut atoms = Vec::with_capacity(size);
        for idx in 0..size {
            let tuple = decode(idx, &variables);
            let parts: Vec<&str> = tuple
                .iter()
                .zip(&variables)
                .map(|(&k, v)| v.values[k].as_str())
                .collect();
            atoms.push(if terse { parts.concat() } else { parts.join(",") });
        }
        let distinct: HashSet<_> = atoms.iter().collect();
        if distinct.len() != atoms.len() {
            return Err(Error::InvalidSpace("atom labels collide".into()));
        }
        Ok(Arc::new(OutcomeSpace {
            atoms,
            variables: Some(variables),
        }))
    }

    /// `{H,T}^n` with variables `toss1..tossn`.
    pub fn coin_tosses(n: usize) -> Result<Arc<Self>> {
        Self::product(
            (1..=n)
                .map(|i| Variable::new(format!("toss{i}"), &["H", "T"]))
                .collect(),
        )
    }

    /// Faces `1` through `6`.
    pub fn die() -> Arc<Self> {
        Self::from_atoms((1..=6).map(|i| i.to_string())).expect("six distinct faces")
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &str {
        &self.atoms[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.atoms
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::UnknownAtom(label.to_string()))
    }

    pub fn variables(&self) -> Option<&[Variable]> {
        self.variables.as_deref()
    }

    pub fn is_factorized(&self) -> bool {
        self.variables.is_some()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        let vars = self.variables.as_ref().ok_or(Error::NotFactorized)?;
        vars.iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Value indices of atom `i`, one per variable.
    pub fn tuple(&self, i: usize) -> Result<Vec<usize>> {
        let vars = self.variables.as_ref().ok_or(Error::NotFactorized)?;
        Ok(decode(i, vars))
    }

    /// Atom index of a value tuple.
    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        let vars = self.variables.as_ref().ok_or(Error::NotFactorized)?;
        if tuple.len() != vars.len() {
            return Err(Error::LengthMismatch {
                expected: vars.len(),
                got: tuple.len(),
            });
        }
        let mut idx = 0;
        for (&k, v) in tuple.iter().zip(vars) {
            if k >= v.arity() {
                return Err(Error::InvalidEvent(format!(
                    "value index {k} out of range for `{}`",
                    v.name
                )));
            }
            idx = idx * v.arity() + k;
        }
        Ok(idx)
    }

    /// Product space of the named variables, in this space's variable order.
    /// Also returns the kept variable positions.
    pub fn sub_product(&self, names: &[&str]) -> Result<(Arc<Self>, Vec<usize>)> {
        let vars = self.variables.as_ref().ok_or(Error::NotFactorized)?;
        let mut keep = Vec::new();
        for name in names {
            let k = self.variable_index(name)?;
            if !keep.contains(&k) {
                keep.push(k);
            }
        }
        if keep.is_empty() {
            return Err(Error::InvalidSpace("no variables kept".into()));
        }
        keep.sort_unstable();
        let kept = keep.iter().map(|&k| vars[k].clone()).collect();
        Ok((Self::product(kept)?, keep))
    }

    /// Unfactorized space of the atoms in `event`, in their original order.
    pub fn restrict(&self, event: &Event) -> Result<Arc<Self>> {
        Self::from_atoms(event.indices().iter().map(|&i| self.atoms[i].clone()))
    }
}

impl fmt::Display for OutcomeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.atoms.join(", "))
    }
}

fn decode(mut idx: usize, vars: &[Variable]) -> Vec<usize> {
    let mut tuple = vec![0; vars.len()];
    for (slot, v) in tuple.iter_mut().zip(vars).rev() {
        *slot = idx % v.arity();
        idx /= v.arity();
    }
    tuple
}

/// A subset of the atoms of an outcome space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    space: Arc<OutcomeSpace>,
    indices: Vec<usize>,
}

impl Event {
    pub fn new(space: &Arc<OutcomeSpace>, indices: &[usize]) -> Result<Self> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidEvent("repeated atom index".into()));
        }
        if let Some(&last) = sorted.last() {
            if last >= space.len() {
                return Err(Error::InvalidEvent(format!(
                    "atom index {last} out of range for {} atoms",
                    space.len()
                )));
            }
        }
        Ok(Event {
            space: Arc::clone(space),
            indices: sorted,
        })
    }

    pub fn from_labels<S: AsRef<str>>(space: &Arc<OutcomeSpace>, labels: &[S]) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|l| space.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, &idx)
    }

    pub fn full(space: &Arc<OutcomeSpace>) -> Self {
        Event {
            space: Arc::clone(space),
            indices: (0..space.len()).collect(),
        }
    }

    pub fn empty(space: &Arc<OutcomeSpace>) -> Self {
        Event {
            space: Arc::clone(space),
            indices: Vec::new(),
        }
    }

    /// Event whose atoms are the set bits of `mask`.
    pub fn from_mask(space: &Arc<OutcomeSpace>, mask: u64) -> Result<Self> {
        let idx: Vec<usize> = (0..64).filter(|b| mask >> b & 1 == 1).collect();
        Self::new(space, &idx)
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.indices.binary_search(&atom).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.indices.len() == self.space.len()
    }

    /// 0/1 coefficient vector over the atoms.
    pub fn indicator(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.space.len()];
        for &i in &self.indices {
            v[i] = 1.0;
        }
        v
    }

    pub fn intersect(&self, other: &Event) -> Result<Event> {
        same_space(&self.space, &other.space)?;
        Ok(Event {
            space: Arc::clone(&self.space),
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|&i| other.contains(i))
                .collect(),
        })
    }

    pub fn complement(&self) -> Event {
        Event {
            space: Arc::clone(&self.space),
            indices: (0..self.space.len()).filter(|&i| !self.contains(i)).collect(),
        }
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices.iter().map(|&i| self.space.atom(i)).collect()
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

pub(crate) fn same_space(a: &Arc<OutcomeSpace>, b: &Arc<OutcomeSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}
