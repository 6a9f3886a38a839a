//! Groupings of layout factors into parties.

use std::fmt;

use crate::error::{invalid, Result};
use crate::qcore::SubsystemLayout;

/// Factor labels used by every four-factor extension layout `[a, ā, b, b̄]`.
pub mod labels {
    pub const A: &str = "a";
    pub const ABAR: &str = "abar";
    pub const B: &str = "b";
    pub const BBAR: &str = "bbar";
}

/// Ordered, disjoint, nonempty groups of labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<String>>,
}

impl Partition {
    pub fn new<S: AsRef<str>>(groups: &[&[S]]) -> Result<Self> {
        let groups: Vec<Vec<String>> = groups
            .iter()
            .map(|g| g.iter().map(|s| s.as_ref().to_string()).collect())
            .collect();
        Self::from_groups(groups)
    }

    pub fn from_groups(groups: Vec<Vec<String>>) -> Result<Self> {
        if groups.is_empty() {
            return Err(invalid("partition needs at least one group"));
        }
        let mut seen: Vec<&str> = Vec::new();
        for g in &groups {
            if g.is_empty() {
                return Err(invalid("partition groups must be nonempty"));
            }
            for l in g {
                if seen.contains(&l.as_str()) {
                    return Err(invalid(format!("label '{l}' appears in more than one group")));
                }
                seen.push(l);
            }
        }
        Ok(Self { groups })
    }

    /// Two-group cut `left | right`.
    pub fn cut<S: AsRef<str>>(left: &[S], right: &[S]) -> Result<Self> {
        Self::new(&[left, right])
    }

    /// Parse `"a|abar|b,bbar"`: groups split on `|`, labels on commas or
    /// whitespace. `A`, `B` and `aux` expand to `a,abar`, `b,bbar` and
    /// `abar,bbar` when the layout has no factor of that name.
    pub fn parse(text: &str, layout: &SubsystemLayout) -> Result<Self> {
        use labels::*;
        let mut groups = Vec::new();
        for part in text.split('|') {
            let mut g = Vec::new();
            for tok in part.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                if layout.contains(tok) {
                    g.push(tok.to_string());
                    continue;
                }
                let expansion: &[&str] = match tok {
                    "A" => &[A, ABAR],
                    "B" => &[B, BBAR],
                    "aux" => &[ABAR, BBAR],
                    _ => return Err(invalid(format!("unknown label '{tok}' in partition '{text}'"))),
                };
                g.extend(expansion.iter().map(|s| s.to_string()));
            }
            groups.push(g);
        }
        let p = Self::from_groups(groups)?;
        p.check_within(layout)?;
        Ok(p)
    }

    pub fn groups(&self) -> &[Vec<String>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, i: usize) -> &[String] {
        &self.groups[i]
    }

    pub fn all_labels(&self) -> Vec<String> {
        self.groups.iter().flatten().cloned().collect()
    }

    pub fn check_within(&self, layout: &SubsystemLayout) -> Result<()> {
        for l in self.groups.iter().flatten() {
            layout.index_of(l)?;
        }
        Ok(())
    }

    /// Every layout factor must belong to exactly one group.
    pub fn check_covers(&self, layout: &SubsystemLayout) -> Result<()> {
        self.check_within(layout)?;
        let n: usize = self.groups.iter().map(Vec::len).sum();
        if n != layout.len() {
            return Err(invalid(format!("partition {self} does not cover every factor of the layout")));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().map(|g| g.join(",")).collect();
        f.write_str(&parts.join("|"))
    }
}
