//! Propositional formulas over `⊥`, variables, `∧`, `∨` and `→`.
//!
//! Negation is sugar: `~a` is `a -> _|_`. Concrete syntax:
//!
//! ```text
//! imp    := binary ( "->" imp )?            right associative
//! binary := unary ( ("&" | "|") unary )*    left associative, no mixing
//! unary  := "~" unary | atom
//! atom   := ident | "_|_" | "(" imp ")"
//! ```
//!
//! `&` and `|` share a precedence level, so `p & q | r` is rejected and
//! must be written `(p & q) | r` or `p & (q | r)`.

mod parser;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use parser::parse;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Var(Arc<str>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
}

/// Shorthand for `Formula::var`.
pub fn var(name: &str) -> Formula {
    Formula::var(name)
}

impl Formula {
    /// Panics on names outside `[a-zA-Z][a-zA-Z0-9_]*`; use [`parse`] for
    /// untrusted input.
    pub fn var(name: &str) -> Formula {
        assert!(is_identifier(name), "invalid variable name `{name}`");
        Formula::Var(Arc::from(name))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Arc::new(self), Arc::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Arc::new(self), Arc::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Arc::new(self), Arc::new(rhs))
    }

    /// `self -> _|_`.
    pub fn neg(self) -> Formula {
        self.implies(Formula::Bottom)
    }

    /// Conjunction of `parts`; `None` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn disjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// The operand of a negation, if this formula is one.
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Bottom => Some(a),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Bottom | Formula::Var(_))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Var(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Var(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bottom => {}
            Formula::Var(name) => {
                out.insert(name.to_string());
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    /// Distinct subformulas, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_subformulas(&mut seen, &mut out);
        out
    }

    fn collect_subformulas(&self, seen: &mut HashSet<Formula>, out: &mut Vec<Formula>) {
        if seen.contains(self) {
            return;
        }
        if let Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) = self {
            a.collect_subformulas(seen, out);
            b.collect_subformulas(seen, out);
        }
        seen.insert(self.clone());
        out.push(self.clone());
    }

    /// Simultaneous substitution. Every variable of `self` must be bound.
    pub fn instantiate(&self, subst: &SchemaSubstitution) -> Result<Formula> {
        Ok(match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Var(name) => subst
                .get(name)
                .cloned()
                .ok_or_else(|| Error::MissingBinding(name.to_string()))?,
            Formula::And(a, b) => a.instantiate(subst)?.and(b.instantiate(subst)?),
            Formula::Or(a, b) => a.instantiate(subst)?.or(b.instantiate(subst)?),
            Formula::Implies(a, b) => a.instantiate(subst)?.implies(b.instantiate(subst)?),
        })
    }

    /// Renames variables; names missing from `map` are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Formula {
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Var(name) => match map.get(&**name) {
                Some(to) => Formula::var(to),
                None => self.clone(),
            },
            Formula::And(a, b) => a.rename(map).and(b.rename(map)),
            Formula::Or(a, b) => a.rename(map).or(b.rename(map)),
            Formula::Implies(a, b) => a.rename(map).implies(b.rename(map)),
        }
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Variable-to-formula bindings for instantiating an axiom schema.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchemaSubstitution {
    bindings: BTreeMap<String, Formula>,
}

impl SchemaSubstitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, name: &str, to: Formula) -> Self {
        self.bindings.insert(name.to_string(), to);
        self
    }

    pub fn insert(&mut self, name: &str, to: Formula) {
        self.bindings.insert(name.to_string(), to);
    }

    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.bindings.get(name)
    }

    /// The identity substitution on `names`.
    pub fn identity<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Self {
        let mut s = Self::new();
        for n in names {
            s.insert(n, Formula::var(n));
        }
        s
    }

    /// `other ∘ self`: apply `self`, then `other`. Bindings of `other` for
    /// names not bound by `self` are carried over.
    pub fn then(&self, other: &SchemaSubstitution) -> Result<SchemaSubstitution> {
        let mut out = other.clone();
        for (name, f) in &self.bindings {
            out.bindings.insert(name.clone(), f.instantiate(other)?);
        }
        Ok(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// The axioms shipped with the workbench.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `((~p -> q) & (~q -> p) -> r | s) -> (p -> r) | (q -> s)`
    Su,
    /// Andrew's axiom.
    Aa,
    AaPlus,
    /// Kreisel-Putnam.
    Kp,
    /// Scott.
    Sa,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::Su, Axiom::Aa, Axiom::AaPlus, Axiom::Kp, Axiom::Sa];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Su => "su",
            Axiom::Aa => "aa",
            Axiom::AaPlus => "aa_plus",
            Axiom::Kp => "kp",
            Axiom::Sa => "sa",
        }
    }

    pub fn formula(self) -> Formula {
        let (p, q, r, s) = (var("p"), var("q"), var("r"), var("s"));
        match self {
            Axiom::Su => {
                let premise = p.clone().neg().implies(q.clone())
                    .and(q.clone().neg().implies(p.clone()));
                premise
                    .implies(r.clone().or(s.clone()))
                    .implies(p.implies(r).or(q.implies(s)))
            }
            Axiom::Aa => {
                let npq = p.clone().neg().implies(q);
                npq.clone()
                    .implies(r.clone().or(s.clone()))
                    .implies(npq.implies(r).or(p.neg().neg().implies(s)))
            }
            Axiom::AaPlus => {
                let pq = p.clone().implies(q);
                pq.clone()
                    .implies(r.clone().or(s.clone()))
                    .implies(pq.implies(r).or(p.neg().implies(s)))
            }
            Axiom::Kp => {
                let np = p.neg();
                np.clone()
                    .implies(q.clone().or(r.clone()))
                    .implies(np.clone().implies(q).or(np.implies(r)))
            }
            Axiom::Sa => {
                let np = p.clone().neg();
                let nnp = np.clone().neg();
                nnp.clone()
                    .implies(p.clone())
                    .implies(p.or(np.clone()))
                    .implies(np.or(nnp))
            }
        }
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAxiom(s.to_string()))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Looks up a shipped axiom by name.
pub fn axiom(name: &str) -> Result<Formula> {
    Ok(name.parse::<Axiom>()?.formula())
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// A random formula over `vars` of depth at most `max_depth`. Leaves are
/// variables, with `⊥` at a 1-in-8 chance; a quarter of the implications
/// built are negations.
pub fn random_formula<R: rand::Rng + ?Sized>(rng: &mut R, vars: &[&str], max_depth: usize) -> Formula {
    assert!(!vars.is_empty());
    if max_depth == 0 || rng.gen_ratio(1, 4) {
        return if rng.gen_ratio(1, 8) {
            Formula::Bottom
        } else {
            var(vars[rng.gen_range(0..vars.len())])
        };
    }
    let a = random_formula(rng, vars, max_depth - 1);
    match rng.gen_range(0..4) {
        0 => a.and(random_formula(rng, vars, max_depth - 1)),
        1 => a.or(random_formula(rng, vars, max_depth - 1)),
        _ if rng.gen_ratio(1, 4) => a.neg(),
        _ => a.implies(random_formula(rng, vars, max_depth - 1)),
    }
}

/// Minimal-parenthesis rendering; `parse(&print(f)) == f`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    match f {
        Formula::Bottom => out.write_str("_|_"),
        Formula::Var(name) => out.write_str(name),
        Formula::Implies(a, b) if **b == Formula::Bottom => {
            out.write_str("~")?;
            write_unary(out, a)
        }
        Formula::Implies(a, b) => {
            if is_plain_implication(a) {
                write_parens(out, a)?;
            } else {
                write_formula(out, a)?;
            }
            out.write_str(" -> ")?;
            write_formula(out, b)
        }
        Formula::And(a, b) => write_binary(out, a, b, " & ", |x| matches!(x, Formula::And(..))),
        Formula::Or(a, b) => write_binary(out, a, b, " | ", |x| matches!(x, Formula::Or(..))),
    }
}

fn write_binary(
    out: &mut fmt::Formatter<'_>,
    a: &Formula,
    b: &Formula,
    op: &str,
    same: fn(&Formula) -> bool,
) -> fmt::Result {
    // Left operand may continue the chain; right operand must be unary.
    if same(a) || is_unary(a) {
        write_formula(out, a)?;
    } else {
        write_parens(out, a)?;
    }
    out.write_str(op)?;
    write_unary(out, b)
}

fn write_unary(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    if is_unary(f) {
        write_formula(out, f)
    } else {
        write_parens(out, f)
    }
}

fn write_parens(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    out.write_str("(")?;
    write_formula(out, f)?;
    out.write_str(")")
}

fn is_unary(f: &Formula) -> bool {
    f.is_atomic() || f.negated().is_some()
}

fn is_plain_implication(f: &Formula) -> bool {
    matches!(f, Formula::Implies(..)) && f.negated().is_none()
}
