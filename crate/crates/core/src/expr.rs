//! Symbolic permutation-class expressions.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// A permutation class built from atoms and class operators.
///
/// Every expression denotes a class closed under taking patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassExpr {
    /// Increasing permutations, `Av(21)`.
    Inc,
    /// Decreasing permutations, `Av(12)`.
    Dec,
    /// Merges of at most `k` increasing sequences, `Av((k+1)…21)`.
    Ik(usize),
    /// Merges of at most `k` decreasing sequences, `Av(12…(k+1))`.
    Dk(usize),
    /// Direct sums of decreasing permutations.
    Layered,
    /// Layered with at most `k` layers.
    Lk(usize),
    /// Layered with every layer of length 1 or 2.
    F2,
    /// Concatenations of at most `k` increasing sequences.
    Vk(usize),
    /// Interleavings of at most `k` increasing runs of consecutive values.
    Hk(usize),
    Av(Vec<Perm>),
    All,
    Compose(Vec<ClassExpr>),
    Merge(Vec<ClassExpr>),
    VerticalMerge(Vec<ClassExpr>),
    HorizontalMerge(Vec<ClassExpr>),
    Intersect(Vec<ClassExpr>),
    Union(Vec<ClassExpr>),
    Rev(Box<ClassExpr>),
    Cpl(Box<ClassExpr>),
    Inv(Box<ClassExpr>),
}

impl ClassExpr {
    pub fn av(patterns: impl IntoIterator<Item = Perm>) -> Self {
        ClassExpr::Av(patterns.into_iter().collect())
    }

    pub fn comp(children: impl IntoIterator<Item = ClassExpr>) -> Self {
        ClassExpr::Compose(children.into_iter().collect())
    }

    pub fn merge(children: impl IntoIterator<Item = ClassExpr>) -> Self {
        ClassExpr::Merge(children.into_iter().collect())
    }

    pub fn vertical(children: impl IntoIterator<Item = ClassExpr>) -> Self {
        ClassExpr::VerticalMerge(children.into_iter().collect())
    }

    pub fn horizontal(children: impl IntoIterator<Item = ClassExpr>) -> Self {
        ClassExpr::HorizontalMerge(children.into_iter().collect())
    }

    pub fn and(children: impl IntoIterator<Item = ClassExpr>) -> Self {
        ClassExpr::Intersect(children.into_iter().collect())
    }

    pub fn or(children: impl IntoIterator<Item = ClassExpr>) -> Self {
        ClassExpr::Union(children.into_iter().collect())
    }

    pub fn rev(self) -> Self {
        ClassExpr::Rev(Box::new(self))
    }

    pub fn cpl(self) -> Self {
        ClassExpr::Cpl(Box::new(self))
    }

    pub fn inv(self) -> Self {
        ClassExpr::Inv(Box::new(self))
    }

    /// True for leaves of the expression tree.
    pub fn is_atom(&self) -> bool {
        !matches!(
            self,
            ClassExpr::Compose(_)
                | ClassExpr::Merge(_)
                | ClassExpr::VerticalMerge(_)
                | ClassExpr::HorizontalMerge(_)
                | ClassExpr::Intersect(_)
                | ClassExpr::Union(_)
                | ClassExpr::Rev(_)
                | ClassExpr::Cpl(_)
                | ClassExpr::Inv(_)
        )
    }

    /// Checks arity bounds and atom parameters throughout the tree.
    pub fn validate(&self) -> Result<()> {
        use ClassExpr::*;
        match self {
            Lk(0) | Vk(0) | Hk(0) => Err(Error::Arity(format!("{} requires k >= 1", self.name()))),
            Av(patterns) => {
                if patterns.is_empty() {
                    return Err(Error::Arity("Av needs at least one pattern".into()));
                }
                if patterns.iter().any(Perm::is_empty) {
                    return Err(Error::Arity("Av patterns must be nonempty".into()));
                }
                for (i, p) in patterns.iter().enumerate() {
                    if patterns[..i].contains(p) {
                        return Err(Error::Arity(format!("duplicate pattern {p} in Av")));
                    }
                }
                Ok(())
            }
            Compose(cs) | Merge(cs) | Intersect(cs) | Union(cs) => {
                if cs.len() < 2 {
                    return Err(Error::Arity(format!("{} needs at least two operands", self.name())));
                }
                cs.iter().try_for_each(ClassExpr::validate)
            }
            VerticalMerge(cs) | HorizontalMerge(cs) => {
                if cs.is_empty() {
                    return Err(Error::Arity(format!("{} needs at least one operand", self.name())));
                }
                cs.iter().try_for_each(ClassExpr::validate)
            }
            Rev(c) | Cpl(c) | Inv(c) => c.validate(),
            _ => Ok(()),
        }
    }

    /// Grammar keyword of the node.
    pub fn name(&self) -> &'static str {
        use ClassExpr::*;
        match self {
            Inc => "I",
            Dec => "D",
            Ik(_) => "Ik",
            Dk(_) => "Dk",
            Layered => "L",
            Lk(_) => "Lk",
            F2 => "F2",
            Vk(_) => "Vk",
            Hk(_) => "Hk",
            Av(_) => "Av",
            All => "All",
            Compose(_) => "comp",
            Merge(_) => "merge",
            VerticalMerge(_) => "V",
            HorizontalMerge(_) => "H",
            Intersect(_) => "and",
            Union(_) => "or",
            Rev(_) => "rev",
            Cpl(_) => "cpl",
            Inv(_) => "inv",
        }
    }

    /// Text in the class grammar; parses back to an equal tree.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, false);
        out
    }

    /// Rendering with the operands of commutative operators (and `Av`
    /// patterns) sorted, so that equal classes written in different orders
    /// share one key.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, true);
        out
    }

    fn write(&self, out: &mut String, canonical: bool) {
        use ClassExpr::*;
        match self {
            Inc | Dec | Layered | F2 | All => out.push_str(self.name()),
            Ik(k) | Dk(k) | Lk(k) | Vk(k) | Hk(k) => {
                out.push_str(self.name());
                out.push('(');
                out.push_str(&k.to_string());
                out.push(')');
            }
            Av(patterns) => {
                let mut lits: Vec<String> = patterns.iter().map(render_literal).collect();
                if canonical {
                    lits.sort();
                }
                out.push_str("Av(");
                out.push_str(&lits.join(","));
                out.push(')');
            }
            Compose(cs) | VerticalMerge(cs) | HorizontalMerge(cs) => {
                write_children(out, self.name(), cs.iter().map(|c| child_text(c, canonical)).collect())
            }
            Merge(cs) | Intersect(cs) | Union(cs) => {
                let mut parts: Vec<String> = cs.iter().map(|c| child_text(c, canonical)).collect();
                if canonical {
                    parts.sort();
                }
                write_children(out, self.name(), parts)
            }
            Rev(c) | Cpl(c) | Inv(c) => write_children(out, self.name(), vec![child_text(c, canonical)]),
        }
    }
}

fn child_text(c: &ClassExpr, canonical: bool) -> String {
    if canonical {
        c.canonical()
    } else {
        c.render()
    }
}

fn write_children(out: &mut String, name: &str, parts: Vec<String>) {
    out.push_str(name);
    out.push('(');
    out.push_str(&parts.join(","));
    out.push(')');
}

/// Compact digits for orders up to 9, otherwise a bracketed spaced list.
fn render_literal(p: &Perm) -> String {
    if p.len() <= 9 {
        p.to_string()
    } else {
        format!("[{}]", p.to_spaced())
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for ClassExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for ClassExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
