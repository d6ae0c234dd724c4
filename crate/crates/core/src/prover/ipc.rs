//! Contraction-free single-succedent sequent search (G4ip style).
//!
//! Contexts are sets. Invertible rules are applied eagerly in a fixed order;
//! only `∨R` and the `(C→D)→B` left rule branch over choices. Every rule
//! shrinks the multiset weight of the sequent, so search terminates without
//! loop checks. Failed sequents are memoised.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{ProofOutcome, Sequent, Verdict};
use crate::formula::Formula;

type Context = BTreeSet<Formula>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Conclusion occurs in the context.
    Axiom,
    BottomLeft,
    AndLeft,
    OrLeft,
    ImpliesRight,
    AndRight,
    OrRight1,
    OrRight2,
    /// `A, A→B` becomes `A, B`.
    ModusPonensLeft,
    /// `⊥→B` is dropped.
    BottomImpliesLeft,
    /// `(C∧D)→B` becomes `C→(D→B)`.
    AndImpliesLeft,
    /// `(C∨D)→B` becomes `C→B, D→B`.
    OrImpliesLeft,
    /// `(C→D)→B`: prove `C→D` with `D→B` in context, then use `B`.
    ImpliesImpliesLeft,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "ax",
            Rule::BottomLeft => "bot-l",
            Rule::AndLeft => "and-l",
            Rule::OrLeft => "or-l",
            Rule::ImpliesRight => "imp-r",
            Rule::AndRight => "and-r",
            Rule::OrRight1 => "or-r1",
            Rule::OrRight2 => "or-r2",
            Rule::ModusPonensLeft => "mp-l",
            Rule::BottomImpliesLeft => "bot-imp-l",
            Rule::AndImpliesLeft => "and-imp-l",
            Rule::OrImpliesLeft => "or-imp-l",
            Rule::ImpliesImpliesLeft => "imp-imp-l",
        }
    }

    fn is_left(self) -> bool {
        !matches!(
            self,
            Rule::Axiom | Rule::ImpliesRight | Rule::AndRight | Rule::OrRight1 | Rule::OrRight2
        )
    }
}

/// A proof tree. Each node records the rule, its principal context formula
/// (for left rules) and the sequent it concludes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub principal: Option<Formula>,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub children: Vec<Derivation>,
}

fn with(ctx: &Context, add: &[Formula], remove: &Formula) -> Context {
    let mut out = ctx.clone();
    out.remove(remove);
    out.extend(add.iter().cloned());
    out
}

fn plus(ctx: &Context, add: Formula) -> Context {
    let mut out = ctx.clone();
    out.insert(add);
    out
}

/// Premise sequents of `rule` applied to `ctx ⇒ goal`, or `None` when the
/// rule does not apply. Search and replay both go through this function.
fn premises_of(
    rule: Rule,
    principal: Option<&Formula>,
    ctx: &Context,
    goal: &Formula,
) -> Option<Vec<(Context, Formula)>> {
    use Formula::*;
    if rule.is_left() {
        let p = principal.filter(|p| ctx.contains(*p))?;
        return match (rule, p) {
            (Rule::BottomLeft, Bottom) => Some(vec![]),
            (Rule::AndLeft, And(a, b)) => Some(vec![(with(ctx, &[(**a).clone(), (**b).clone()], p), goal.clone())]),
            (Rule::OrLeft, Or(a, b)) => Some(vec![
                (with(ctx, &[(**a).clone()], p), goal.clone()),
                (with(ctx, &[(**b).clone()], p), goal.clone()),
            ]),
            (Rule::ModusPonensLeft, Implies(a, b)) if ctx.contains(&**a) => {
                Some(vec![(with(ctx, &[(**b).clone()], p), goal.clone())])
            }
            (Rule::BottomImpliesLeft, Implies(a, _)) if **a == Bottom => Some(vec![(with(ctx, &[], p), goal.clone())]),
            (Rule::AndImpliesLeft, Implies(a, b)) => match &**a {
                And(c, d) => {
                    let curried = (**c).clone().implies((**d).clone().implies((**b).clone()));
                    Some(vec![(with(ctx, &[curried], p), goal.clone())])
                }
                _ => None,
            },
            (Rule::OrImpliesLeft, Implies(a, b)) => match &**a {
                Or(c, d) => {
                    let split = [(**c).clone().implies((**b).clone()), (**d).clone().implies((**b).clone())];
                    Some(vec![(with(ctx, &split, p), goal.clone())])
                }
                _ => None,
            },
            (Rule::ImpliesImpliesLeft, Implies(a, b)) => match &**a {
                Implies(_, d) => {
                    let db = (**d).clone().implies((**b).clone());
                    Some(vec![
                        (with(ctx, &[db], p), (**a).clone()),
                        (with(ctx, &[(**b).clone()], p), goal.clone()),
                    ])
                }
                _ => None,
            },
            _ => None,
        };
    }
    if principal.is_some() {
        return None;
    }
    match (rule, goal) {
        (Rule::Axiom, g) if ctx.contains(g) => Some(vec![]),
        (Rule::ImpliesRight, Implies(a, b)) => Some(vec![(plus(ctx, (**a).clone()), (**b).clone())]),
        (Rule::AndRight, And(a, b)) => Some(vec![(ctx.clone(), (**a).clone()), (ctx.clone(), (**b).clone())]),
        (Rule::OrRight1, Or(a, _)) => Some(vec![(ctx.clone(), (**a).clone())]),
        (Rule::OrRight2, Or(_, b)) => Some(vec![(ctx.clone(), (**b).clone())]),
        _ => None,
    }
}

/// The first applicable invertible step, in priority order.
fn invertible_step(ctx: &Context, goal: &Formula) -> Option<(Rule, Option<Formula>)> {
    use Formula::*;
    if ctx.contains(&Bottom) {
        return Some((Rule::BottomLeft, Some(Bottom)));
    }
    if ctx.contains(goal) {
        return Some((Rule::Axiom, None));
    }
    if matches!(goal, Implies(..)) {
        return Some((Rule::ImpliesRight, None));
    }
    let mut or_left = None;
    for f in ctx {
        let rule = match f {
            And(..) => Rule::AndLeft,
            Or(..) => {
                or_left.get_or_insert_with(|| f.clone());
                continue;
            }
            Implies(a, _) if ctx.contains(&**a) => Rule::ModusPonensLeft,
            Implies(a, _) => match &**a {
                Bottom => Rule::BottomImpliesLeft,
                And(..) => Rule::AndImpliesLeft,
                Or(..) => Rule::OrImpliesLeft,
                _ => continue,
            },
            _ => continue,
        };
        return Some((rule, Some(f.clone())));
    }
    if matches!(goal, And(..)) {
        return Some((Rule::AndRight, None));
    }
    or_left.map(|f| (Rule::OrLeft, Some(f)))
}

struct Search {
    failed: HashSet<(Context, Formula)>,
}

impl Search {
    fn node(rule: Rule, principal: Option<Formula>, ctx: &Context, goal: &Formula, children: Vec<Derivation>) -> Derivation {
        Derivation {
            rule,
            principal,
            premises: ctx.iter().cloned().collect(),
            conclusion: goal.clone(),
            children,
        }
    }

    fn apply(&mut self, rule: Rule, principal: Option<Formula>, ctx: &Context, goal: &Formula) -> Option<Derivation> {
        let subgoals = premises_of(rule, principal.as_ref(), ctx, goal)?;
        let mut children = Vec::with_capacity(subgoals.len());
        for (c, g) in &subgoals {
            children.push(self.prove(c, g)?);
        }
        Some(Self::node(rule, principal, ctx, goal, children))
    }

    fn prove(&mut self, ctx: &Context, goal: &Formula) -> Option<Derivation> {
        if let Some((rule, principal)) = invertible_step(ctx, goal) {
            return self.apply(rule, principal, ctx, goal);
        }
        let key = (ctx.clone(), goal.clone());
        if self.failed.contains(&key) {
            return None;
        }
        let mut choices = Vec::new();
        if matches!(goal, Formula::Or(..)) {
            choices.push((Rule::OrRight1, None));
            choices.push((Rule::OrRight2, None));
        }
        for f in ctx {
            if let Formula::Implies(a, _) = f {
                if matches!(**a, Formula::Implies(..)) {
                    choices.push((Rule::ImpliesImpliesLeft, Some(f.clone())));
                }
            }
        }
        for (rule, principal) in choices {
            if let Some(d) = self.apply(rule, principal, ctx, goal) {
                return Some(d);
            }
        }
        self.failed.insert(key);
        None
    }
}

/// Decides `premises ⊢ conclusion` in intuitionistic propositional logic.
/// The verdict is `Provable` or `Unprovable`, never `Inconclusive`.
pub fn prove_ipc(sequent: &Sequent) -> ProofOutcome {
    let ctx: Context = sequent.premises.iter().cloned().collect();
    let mut search = Search { failed: HashSet::new() };
    match search.prove(&ctx, &sequent.conclusion) {
        Some(d) => ProofOutcome {
            verdict: Verdict::Provable,
            certificate: Some(d),
            instances: Vec::new(),
        },
        None => ProofOutcome {
            verdict: Verdict::Unprovable,
            certificate: None,
            instances: Vec::new(),
        },
    }
}

impl Derivation {
    pub fn sequent(&self) -> Sequent {
        Sequent::new(self.premises.clone(), self.conclusion.clone())
    }

    /// Replays every rule application; returns the first bad node.
    pub fn check(&self) -> Result<(), String> {
        let ctx: Context = self.premises.iter().cloned().collect();
        let expected = premises_of(self.rule, self.principal.as_ref(), &ctx, &self.conclusion).ok_or_else(|| {
            format!("{} does not apply to {}", self.rule.name(), self.sequent())
        })?;
        if expected.len() != self.children.len() {
            return Err(format!("{} at {} has the wrong number of premises", self.rule.name(), self.sequent()));
        }
        for ((c, g), child) in expected.iter().zip(&self.children) {
            let child_ctx: Context = child.premises.iter().cloned().collect();
            if &child_ctx != c || &child.conclusion != g {
                return Err(format!("premise {} does not follow from {} by {}", child.sequent(), self.sequent(), self.rule.name()));
            }
            child.check()?;
        }
        Ok(())
    }

    /// Does this tree prove `sequent` (premises read as a set)?
    pub fn proves(&self, sequent: &Sequent) -> bool {
        let want: Context = sequent.premises.iter().cloned().collect();
        let have: Context = self.premises.iter().cloned().collect();
        want == have && self.conclusion == sequent.conclusion && self.check().is_ok()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Derivation::height).max().unwrap_or(0)
    }

    fn render(&self, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:width$}{}", "", self.rule.name(), width = depth * 2)?;
        if let Some(p) = &self.principal {
            write!(f, " [{p}]")?;
        }
        writeln!(f, "  {}", self.sequent())?;
        self.children.iter().try_for_each(|c| c.render(depth + 1, f))
    }
}

/// Indented rule-application text, conclusion first.
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Axiom};

    fn provable(text: &str) -> bool {
        let s: Sequent = text.parse().unwrap();
        let out = prove_ipc(&s);
        if let Some(d) = &out.certificate {
            assert!(d.proves(&s), "bad certificate for {text}:\n{d}");
        }
        out.is_provable()
    }

    #[test]
    fn basic_examples() {
        assert!(provable("|- p -> p"));
        assert!(!provable("|- p | ~p"));
        assert!(provable("p, p -> q |- q"));
        assert!(provable("|- ~~(p | ~p)"));
        assert!(!provable("|- ~~p -> p"));
        assert!(provable("|- ~~~p -> ~p"));
        assert!(!provable("|- ((p -> q) -> p) -> p"));
        assert!(provable("|- (p -> q) -> ~q -> ~p"));
        assert!(!provable("|- (~q -> ~p) -> p -> q"));
        assert!(provable("_|_ |- q"));
        assert!(provable("p & q |- q & p"));
        assert!(provable("p | q |- q | p"));
        assert!(!provable("|- (p -> q) | (q -> p)"));
        assert!(!provable("|- ~p | ~~p"));
    }

    #[test]
    fn axioms_are_not_intuitionistic() {
        for ax in Axiom::ALL {
            assert!(!prove_ipc(&Sequent::theorem(ax.formula())).is_provable(), "{ax}");
        }
    }

    #[test]
    fn kp_instances_prove_kp_instances() {
        let kp = Axiom::Kp.formula();
        assert!(prove_ipc(&Sequent::new(vec![kp.clone()], kp)).is_provable());
    }

    #[test]
    fn certificate_replay_rejects_tampering() {
        let s: Sequent = "p & q |- q".parse().unwrap();
        let mut d = prove_ipc(&s).certificate.unwrap();
        assert!(d.check().is_ok());
        d.children[0].conclusion = parse("p").unwrap();
        assert!(d.check().is_err());
        let mut d = prove_ipc(&s).certificate.unwrap();
        d.rule = Rule::OrLeft;
        assert!(d.check().is_err());
    }

    #[test]
    fn rendering() {
        let d = prove_ipc(&"|- p -> p".parse().unwrap()).certificate.unwrap();
        assert_eq!(d.to_string(), "imp-r  |- p -> p\n  ax  p |- p\n");
        assert_eq!(d.size(), 2);
        assert_eq!(d.height(), 2);
    }
}
