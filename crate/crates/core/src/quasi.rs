//! Positions, marked expressions, splicing and quasiquotation.
//!
//! A marked expression `e⟨(p₁,e₁),…,(pₙ,eₙ)⟩` pairs an object-language
//! expression with pairwise disjoint positions and splice expressions.
//! Splicing replaces every marked slot at once with the direct evaluation
//! of its splice expression; quasiquotation quotes the result.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::framework::{FrameworkError, SyntaxFramework};

/// Tree navigation over an expression type.
///
/// Children are returned owned so that instances whose expressions are
/// text (parsed on demand) can implement this too.
pub trait Subexpressions: Sized + Clone {
    fn children(&self) -> Vec<Self>;
    /// Replaces child `index`; absent when the index is out of range or the
    /// replacement cannot stand in that slot.
    fn with_child(&self, index: usize, child: Self) -> Option<Self>;
}

/// Number of subexpressions, counting the root.
pub fn size<E: Subexpressions>(e: &E) -> usize {
    1 + e.children().iter().map(size).sum::<usize>()
}

/// A child-index path from the root. The empty path is the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, index: usize) -> Self {
        let mut path = self.0.clone();
        path.push(index);
        Position(path)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

impl FromStr for Position {
    type Err = QuasiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "root" {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|part| part.parse::<usize>().map_err(|_| QuasiError::BadPosition(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

/// Every valid position of `e`, in preorder.
pub fn positions<E: Subexpressions>(e: &E) -> Vec<Position> {
    fn walk<E: Subexpressions>(e: &E, at: Position, out: &mut Vec<Position>) {
        let children = e.children();
        out.push(at.clone());
        for (i, c) in children.iter().enumerate() {
            walk(c, at.child(i), out);
        }
    }
    let mut out = Vec::new();
    walk(e, Position::root(), &mut out);
    out
}

/// True iff neither path is a prefix of the other.
pub fn disjoint(p1: &Position, p2: &Position) -> bool {
    !p1.is_prefix_of(p2) && !p2.is_prefix_of(p1)
}

pub fn subexpr_at<E: Subexpressions>(e: &E, pos: &Position) -> Option<E> {
    let mut cur = e.clone();
    for &i in &pos.0 {
        cur = cur.children().into_iter().nth(i)?;
    }
    Some(cur)
}

/// Replaces the subexpression at `pos`.
pub fn replace_at<E: Subexpressions>(e: &E, pos: &Position, new: E) -> Option<E> {
    replace_many(e, &[(pos.0.as_slice(), new)])
}

/// Simultaneous replacement at pairwise disjoint paths.
fn replace_many<E: Subexpressions>(e: &E, marks: &[(&[usize], E)]) -> Option<E> {
    if let Some((_, new)) = marks.iter().find(|(p, _)| p.is_empty()) {
        return Some(new.clone());
    }
    let mut by_child: BTreeMap<usize, Vec<(&[usize], E)>> = BTreeMap::new();
    for (p, new) in marks {
        by_child.entry(p[0]).or_default().push((&p[1..], new.clone()));
    }
    let children = e.children();
    let mut out = e.clone();
    for (i, sub) in by_child {
        let child = children.get(i)?;
        out = out.with_child(i, replace_many(child, &sub)?)?;
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasiError {
    #[error("malformed position `{0}`")]
    BadPosition(String),
    #[error("position {0} does not address a subexpression")]
    InvalidPosition(Position),
    #[error("marked positions {0} and {1} overlap")]
    Overlapping(Position, Position),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
}

/// `e⟨(p₁,e₁),…,(pₙ,eₙ)⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedExpr<E> {
    pub base: E,
    pub marks: Vec<(Position, E)>,
}

impl<E: Subexpressions> MarkedExpr<E> {
    pub fn unmarked(base: E) -> Self {
        MarkedExpr { base, marks: Vec::new() }
    }

    /// Checks position validity and pairwise disjointness.
    pub fn validate(&self) -> Result<(), QuasiError> {
        for (p, _) in &self.marks {
            if subexpr_at(&self.base, p).is_none() {
                return Err(QuasiError::InvalidPosition(p.clone()));
            }
        }
        for (i, (p, _)) in self.marks.iter().enumerate() {
            for (q, _) in &self.marks[i + 1..] {
                if !disjoint(p, q) {
                    return Err(QuasiError::Overlapping(p.clone(), q.clone()));
                }
            }
        }
        Ok(())
    }
}

impl<E: fmt::Display> fmt::Display for MarkedExpr<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⟨", self.base)?;
        for (i, (p, e)) in self.marks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({p}, {e})")?;
        }
        f.write_str("⟩")
    }
}

/// `S(m)`: absent when some splice has no direct evaluation or the spliced
/// result falls outside `L_obj`.
pub fn splice<F>(inst: &F, m: &MarkedExpr<F::Expr>) -> Result<Option<F::Expr>, QuasiError>
where
    F: SyntaxFramework,
    F::Expr: Subexpressions,
{
    m.validate()?;
    if !inst.in_object(&m.base) {
        return Err(FrameworkError::NotInObject { instance: inst.id().to_string(), expr: m.base.to_string() }.into());
    }
    let mut replacements = Vec::with_capacity(m.marks.len());
    for (p, e) in &m.marks {
        let Some(value) = crate::framework::direct_eval(inst, e)? else {
            return Ok(None);
        };
        replacements.push((p.0.as_slice(), value));
    }
    Ok(replace_many(&m.base, &replacements).filter(|r| inst.in_object(r)))
}

/// `Q̄(m) = Q(S(m))`, defined iff `S(m)` is.
pub fn quasiquote<F>(inst: &F, m: &MarkedExpr<F::Expr>) -> Result<Option<F::Expr>, QuasiError>
where
    F: SyntaxFramework,
    F::Expr: Subexpressions,
{
    Ok(splice(inst, m)?.map(|s| inst.quotation(&s)))
}
