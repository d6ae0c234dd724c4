//! Proof search: a decision procedure for intuitionistic consequence, a
//! bounded instance search for SU, and machine checks of derived facts.

mod ipc;
pub mod lemmas;
mod su;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{parse, Formula};

pub use ipc::{prove_ipc, Derivation, Rule};
pub use lemmas::{
    check_structural_properties, lemma_su_aa_steps, verify_lemma_su_aa, verify_lemma_su_aa_with, verify_su_star,
    verify_su_star_capped, LemmaReport, LemmaStep, StructuralReport, DEFAULT_STAR_CAP,
};
pub use su::{prove_su, prove_su_capped, su_universe, DEFAULT_INSTANCE_CAP};

/// `premises ⇒ conclusion`. Text form: `phi1, phi2 |- psi` (`⊢` also works);
/// text without a turnstile is a bare conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        Sequent { premises, conclusion }
    }

    pub fn theorem(conclusion: Formula) -> Self {
        Sequent::new(Vec::new(), conclusion)
    }
}

fn parse_at(text: &str, base: usize) -> Result<Formula> {
    parse(text).map_err(|e| match e {
        Error::Syntax { offset, message } => Error::Syntax {
            offset: offset + base,
            message,
        },
        other => other,
    })
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

impl FromStr for Sequent {
    type Err = Error;

    fn from_str(text: &str) -> Result<Sequent> {
        let turnstile = ["|-", "⊢"]
            .iter()
            .filter_map(|t| text.find(t).map(|i| (i, t.len())))
            .min();
        let Some((at, width)) = turnstile else {
            return Ok(Sequent::theorem(parse(text)?));
        };
        let (left, right) = (&text[..at], &text[at + width..]);
        let conclusion = parse_at(right, at + width)?;
        let mut premises = Vec::new();
        if !left.trim().is_empty() {
            let mut base = 0;
            for part in left.split(',') {
                if part.trim().is_empty() {
                    return Err(Error::Syntax {
                        offset: base + leading_ws(part),
                        message: "empty premise".into(),
                    });
                }
                premises.push(parse_at(part, base)?);
                base += part.len() + 1;
            }
        }
        Ok(Sequent { premises, conclusion })
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Provable,
    /// Decided: no proof exists.
    Unprovable,
    /// The bounded search found nothing; this is not a refutation.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Provable => "provable",
            Verdict::Unprovable => "unprovable",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ProofOutcome {
    pub verdict: Verdict,
    /// Present exactly when the verdict is `Provable`.
    pub certificate: Option<Derivation>,
    /// Axiom instances used as extra premises (empty for plain IPC).
    pub instances: Vec<Formula>,
}

impl ProofOutcome {
    pub fn is_provable(&self) -> bool {
        self.verdict == Verdict::Provable
    }
}
