//! Machine checks of the `su ≡ aa` derivation, of the conjunctive `su*`
//! step, and of the structural rules of the consequence relation.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{prove_ipc, Sequent};
use crate::error::{Error, Result};
use crate::formula::{random_formula, var, Axiom, Formula, SchemaSubstitution};

pub const DEFAULT_STAR_CAP: usize = 3;

/// One checked consequence. `group` is `a`..`d`:
/// `a` su yields aa_plus, `b` aa_plus yields aa, `c` the derivation of su
/// from two aa instances step by step, `d` the two instances jointly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaStep {
    pub group: char,
    pub label: String,
    pub sequent: Sequent,
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub steps: Vec<(LemmaStep, bool)>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|(_, ok)| *ok)
    }

    /// `group label` of each failing step.
    pub fn failures(&self) -> Vec<String> {
        self.steps
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(s, _)| format!("{} {}", s.group, s.label))
            .collect()
    }

    pub fn group_passed(&self, group: char) -> bool {
        self.steps.iter().filter(|(s, _)| s.group == group).all(|(_, ok)| *ok)
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (step, ok) in &self.steps {
            let status = if *ok { "ok" } else { "FAILED" };
            writeln!(f, "({}) {:<10} {status}  {}", step.group, step.label, step.sequent)?;
        }
        Ok(())
    }
}

fn subst(pairs: [(&str, Formula); 4]) -> SchemaSubstitution {
    pairs.into_iter().fold(SchemaSubstitution::new(), |s, (k, v)| s.bind(k, v))
}

fn inst(ax: Axiom, pairs: [(&str, Formula); 4]) -> Formula {
    ax.formula()
        .instantiate(&subst(pairs))
        .expect("all schema variables are bound")
}

/// The derivation steps, with the first aa instance of the chain taking
/// `a2_p` for its `p` (the sound chain uses the variable `p`).
pub fn lemma_su_aa_steps(a2_p: Formula) -> Vec<LemmaStep> {
    let (p, q, r, s) = (var("p"), var("q"), var("r"), var("s"));
    let np_q = p.clone().neg().implies(q.clone());
    let nq_p = q.clone().neg().implies(p.clone());
    let nnq_s = q.clone().neg().neg().implies(s.clone());
    let nqp_r = nq_p.clone().implies(r.clone());
    let r_or_s = r.clone().or(s.clone());

    let su_a = inst(Axiom::Su, [("p", p.clone().implies(q.clone())), ("q", p.clone().neg()), ("r", r.clone()), ("s", s.clone())]);
    let aa_plus_b = inst(Axiom::AaPlus, [("p", p.clone().neg()), ("q", q.clone()), ("r", r.clone()), ("s", s.clone())]);
    let a1 = inst(Axiom::Aa, [("p", q.clone()), ("q", p.clone()), ("r", r.clone()), ("s", s.clone())]);
    let a2 = inst(Axiom::Aa, [("p", a2_p), ("q", q.clone()), ("r", nnq_s.clone()), ("s", nqp_r.clone())]);

    let s0 = np_q.clone().and(nq_p.clone()).implies(r_or_s.clone());
    let s1 = np_q.clone().implies(nq_p.clone().implies(r_or_s));
    let s2 = np_q.clone().implies(nqp_r.clone().or(nnq_s.clone()));
    let s3 = p.clone().neg().neg().implies(nqp_r).or(np_q.implies(nnq_s));
    let target = p.implies(r).or(q.implies(s));

    let step = |group, label: &str, premises: Vec<Formula>, conclusion: Formula| LemmaStep {
        group,
        label: label.to_string(),
        sequent: Sequent::new(premises, conclusion),
    };
    vec![
        step('a', "su>aa_plus", vec![su_a], Axiom::AaPlus.formula()),
        step('b', "aa_plus>aa", vec![aa_plus_b], Axiom::Aa.formula()),
        step('c', "curry", vec![s0.clone()], s1.clone()),
        step('c', "aa#1", vec![s1, a1.clone()], s2.clone()),
        step('c', "aa#2", vec![s2, a2.clone()], s3.clone()),
        step('c', "weaken", vec![s3], target.clone()),
        step('c', "discharge", vec![], s0.implies(target).implies(Axiom::Su.formula())),
        step('d', "aa>su", vec![a1, a2], Axiom::Su.formula()),
    ]
}

pub fn verify_lemma_su_aa() -> LemmaReport {
    verify_lemma_su_aa_with(var("p"))
}

/// Runs the derivation with the second aa instance's `p` replaced by `a2_p`.
pub fn verify_lemma_su_aa_with(a2_p: Formula) -> LemmaReport {
    let steps = lemma_su_aa_steps(a2_p)
        .into_iter()
        .map(|s| {
            let ok = prove_ipc(&s.sequent).is_provable();
            (s, ok)
        })
        .collect();
    LemmaReport { steps }
}

pub fn verify_su_star(n: usize) -> Result<bool> {
    verify_su_star_capped(n, DEFAULT_STAR_CAP)
}

/// `(¬Φ→Ψ) ∧ (¬Ψ→Φ) ⊢ ⋀ᵢ (¬φᵢ→ψᵢ) ∧ (¬ψᵢ→φᵢ)` where `Φ`, `Ψ` are the
/// conjunctions of fresh atoms `φ₁..φₙ`, `ψ₁..ψₙ`.
pub fn verify_su_star_capped(n: usize, cap: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgument("arity must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what: "su* arity",
            count: n as u128,
            cap: cap as u128,
        });
    }
    let phis: Vec<Formula> = (1..=n).map(|i| var(&format!("phi{i}"))).collect();
    let psis: Vec<Formula> = (1..=n).map(|i| var(&format!("psi{i}"))).collect();
    let big_phi = Formula::conjunction(phis.clone()).unwrap();
    let big_psi = Formula::conjunction(psis.clone()).unwrap();
    let premise = big_phi
        .clone()
        .neg()
        .implies(big_psi.clone())
        .and(big_psi.neg().implies(big_phi));
    let conclusion = Formula::conjunction(
        phis.iter()
            .zip(&psis)
            .map(|(a, b)| a.clone().neg().implies(b.clone()).and(b.clone().neg().implies(a.clone()))),
    )
    .unwrap();
    Ok(prove_ipc(&Sequent::new(vec![premise], conclusion)).is_provable())
}

#[derive(Clone, Debug, Default)]
pub struct StructuralReport {
    /// `(property, trials)` in the order checked.
    pub trials: Vec<(&'static str, usize)>,
    /// `property: sequent data` for each violated instance.
    pub violations: Vec<String>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for StructuralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, n) in &self.trials {
            let bad = self.violations.iter().filter(|v| v.starts_with(&format!("{name}:"))).count();
            writeln!(f, "{name:<4} {n:>4} trials, {bad} violations")?;
        }
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

fn provable(gamma: &[Formula], goal: &Formula) -> bool {
    prove_ipc(&Sequent::new(gamma.to_vec(), goal.clone())).is_provable()
}

struct Checker {
    rng: ChaCha8Rng,
    report: StructuralReport,
}

const VARS: [&str; 3] = ["p", "q", "r"];

impl Checker {
    fn formula(&mut self) -> Formula {
        random_formula(&mut self.rng, &VARS, 3)
    }

    fn context(&mut self) -> Vec<Formula> {
        let n = rand::Rng::gen_range(&mut self.rng, 0..3);
        (0..n).map(|_| self.formula()).collect()
    }

    fn run(&mut self, name: &'static str, trials: usize, mut holds: impl FnMut(&mut Self) -> Option<String>) {
        for _ in 0..trials {
            if let Some(v) = holds(self) {
                self.report.violations.push(format!("{name}: {v}"));
            }
        }
        self.report.trials.push((name, trials));
    }
}

fn show(gamma: &[Formula]) -> String {
    gamma.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}

/// Property tests of `prove_ipc` as a consequence relation on random
/// formulas over three variables. The report lists every violation.
pub fn check_structural_properties(seed: u64) -> StructuralReport {
    let mut c = Checker {
        rng: ChaCha8Rng::seed_from_u64(seed),
        report: StructuralReport::default(),
    };
    c.run("A", 100, |c| {
        let mut g = c.context();
        let phi = c.formula();
        g.push(phi.clone());
        (!provable(&g, &phi)).then(|| show(&g))
    });
    c.run("andI", 100, |c| {
        let (g, a, b) = (c.context(), c.formula(), c.formula());
        let both = provable(&g, &a) && provable(&g, &b);
        (both != provable(&g, &a.clone().and(b.clone()))).then(|| format!("{} / {a} / {b}", show(&g)))
    });
    c.run("andE", 100, |c| {
        let (a, b) = (c.formula(), c.formula());
        let ab = [a.clone().and(b.clone())];
        (!(provable(&ab, &a) && provable(&ab, &b))).then(|| format!("{a} / {b}"))
    });
    c.run("orI", 100, |c| {
        let (a, b) = (c.formula(), c.formula());
        let ab = a.clone().or(b.clone());
        (!(provable(&[a.clone()], &ab) && provable(&[b.clone()], &ab))).then(|| format!("{a} / {b}"))
    });
    c.run("MP", 100, |c| {
        let (a, b) = (c.formula(), c.formula());
        (!provable(&[a.clone(), a.clone().implies(b.clone())], &b)).then(|| format!("{a} / {b}"))
    });
    c.run("DT", 200, |c| {
        let (mut g, a, b) = (c.context(), c.formula(), c.formula());
        let right = provable(&g, &a.clone().implies(b.clone()));
        g.push(a.clone());
        (provable(&g, &b) != right).then(|| format!("{} / {a} / {b}", show(&g)))
    });
    c.run("PC", 100, |c| {
        let (g, a, b, goal) = (c.context(), c.formula(), c.formula(), c.formula());
        let with = |f: Formula| {
            let mut h = g.clone();
            h.push(f);
            provable(&h, &goal)
        };
        let split = with(a.clone()) && with(b.clone());
        (split != with(a.clone().or(b.clone()))).then(|| format!("{} / {a} / {b} / {goal}", show(&g)))
    });
    c.run("bot", 100, |c| {
        let a = c.formula();
        (!provable(&[Formula::Bottom], &a)).then(|| a.to_string())
    });
    c.run("Cut", 100, |c| {
        let (mut g, a, b) = (c.context(), c.formula(), c.formula());
        let lemma = provable(&g, &a);
        g.push(a.clone());
        let used = provable(&g, &b);
        g.pop();
        (lemma && used && !provable(&g, &b)).then(|| format!("{} / {a} / {b}", show(&g)))
    });
    c.run("Mon", 100, |c| {
        let (mut g, a) = (c.context(), c.formula());
        if provable(&g, &a) {
            g.extend(c.context());
            if !provable(&g, &a) {
                return Some(format!("{} / {a}", show(&g)));
            }
        }
        None
    });
    c.report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_chain_passes() {
        let r = verify_lemma_su_aa();
        assert!(r.passed(), "{r}");
        for g in ['a', 'b', 'c', 'd'] {
            assert!(r.group_passed(g));
        }
    }

    #[test]
    fn corrupted_instance_fails() {
        let r = verify_lemma_su_aa_with(Formula::Bottom);
        assert!(!r.passed());
        assert!(r.group_passed('a') && r.group_passed('b'));
        assert!(!r.group_passed('c'));
    }

    #[test]
    fn aa_plus_instance_is_aa() {
        let steps = lemma_su_aa_steps(var("p"));
        assert_eq!(steps[1].sequent.premises[0], Axiom::Aa.formula());
    }

    #[test]
    fn su_star() {
        for n in 1..=3 {
            assert!(verify_su_star(n).unwrap());
        }
        assert!(verify_su_star(4).is_err());
        assert!(verify_su_star(0).is_err());
    }

    #[test]
    fn structural_rules() {
        let r = check_structural_properties(7);
        assert!(r.passed(), "{r}");
        assert_eq!(r.trials.iter().find(|t| t.0 == "DT").unwrap().1, 200);
    }
}
