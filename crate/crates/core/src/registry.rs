//! Named frame properties and logics, looked up at runtime.

use crate::error::{Error, Result};
use crate::formula::{Axiom, Formula};
use crate::frame::{Frame, DEFAULT_UPSET_CAP};
use crate::prover::{prove_ipc, prove_su, ProofOutcome, Sequent};
use crate::semantics::frame_validates_capped;
use crate::strong_union::{satisfies_su, satisfies_su_n, satisfies_uni};

pub trait FrameProperty: Send + Sync {
    fn name(&self) -> &str;
    fn describe(&self) -> String;
    fn holds(&self, frame: &Frame) -> Result<bool>;
}

/// The first-order condition (su_n) for a fixed `n`.
pub struct SuN(pub usize);

impl FrameProperty for SuN {
    fn name(&self) -> &str {
        ["su1", "su2", "su3", "su4"].get(self.0 - 1).copied().unwrap_or("su_n")
    }

    fn describe(&self) -> String {
        format!("every {}-tuple of successors has a strong union", self.0)
    }

    fn holds(&self, frame: &Frame) -> Result<bool> {
        satisfies_su_n(frame, self.0)
    }
}

/// (su) as a frame condition, decided through (su₂).
pub struct SuCondition;

impl FrameProperty for SuCondition {
    fn name(&self) -> &str {
        "su-cond"
    }

    fn describe(&self) -> String {
        "(su) for every arity".into()
    }

    fn holds(&self, frame: &Frame) -> Result<bool> {
        satisfies_su(frame)
    }
}

pub struct Uni;

impl FrameProperty for Uni {
    fn name(&self) -> &str {
        "uni"
    }

    fn describe(&self) -> String {
        "(Uni): pairs of successors have a weak union".into()
    }

    fn holds(&self, frame: &Frame) -> Result<bool> {
        satisfies_uni(frame)
    }
}

/// Frame validity of a shipped axiom.
pub struct Validates {
    pub axiom: Axiom,
    pub upset_cap: usize,
}

impl FrameProperty for Validates {
    fn name(&self) -> &str {
        self.axiom.name()
    }

    fn describe(&self) -> String {
        format!("validates {}", self.axiom.formula())
    }

    fn holds(&self, frame: &Frame) -> Result<bool> {
        frame_validates_capped(frame, &self.axiom.formula(), self.upset_cap)
    }
}

pub struct PropertyRegistry {
    entries: Vec<Box<dyn FrameProperty>>,
}

/// Columns of a report line, in order.
pub const REPORT_COLUMNS: [&str; 5] = ["su2", "su", "uni", "kp", "sa"];

impl PropertyRegistry {
    pub fn empty() -> Self {
        PropertyRegistry { entries: Vec::new() }
    }

    /// `su1`..`su4`, `su-cond`, `uni`, and validity of each shipped axiom
    /// under its own name (`su`, `aa`, `aa_plus`, `kp`, `sa`).
    pub fn with_defaults(upset_cap: usize) -> Self {
        let mut r = Self::empty();
        for n in 1..=4 {
            r.register(Box::new(SuN(n)));
        }
        r.register(Box::new(SuCondition));
        r.register(Box::new(Uni));
        for axiom in Axiom::ALL {
            r.register(Box::new(Validates { axiom, upset_cap }));
        }
        r
    }

    /// Replaces any entry with the same name.
    pub fn register(&mut self, p: Box<dyn FrameProperty>) {
        self.entries.retain(|e| e.name() != p.name());
        self.entries.push(p);
    }

    pub fn get(&self, name: &str) -> Result<&dyn FrameProperty> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "frame property",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    /// `<id> su2=<0|1> su=<0|1> uni=<0|1> kp=<0|1> sa=<0|1>`, where `su`,
    /// `kp` and `sa` report frame validity of the axioms.
    pub fn report_line(&self, id: &str, frame: &Frame) -> Result<String> {
        let mut line = id.to_string();
        for col in REPORT_COLUMNS {
            let v = self.get(col)?.holds(frame)?;
            line.push_str(&format!(" {col}={}", u8::from(v)));
        }
        Ok(line)
    }
}

impl Default for PropertyRegistry {
    fn default() -> Self {
        Self::with_defaults(DEFAULT_UPSET_CAP)
    }
}

/// A consequence relation with a proof procedure.
pub trait Logic: Send + Sync {
    fn name(&self) -> &str;
    /// `depth` bounds any instance search; decision procedures ignore it.
    fn prove(&self, sequent: &Sequent, depth: usize) -> Result<ProofOutcome>;
}

pub struct Ipc;

impl Logic for Ipc {
    fn name(&self) -> &str {
        "ipc"
    }

    fn prove(&self, sequent: &Sequent, _depth: usize) -> Result<ProofOutcome> {
        Ok(prove_ipc(sequent))
    }
}

/// Premises are folded into the goal: `Γ ⊢ φ` is searched as `⋀Γ → φ`.
pub struct Su;

impl Logic for Su {
    fn name(&self) -> &str {
        "su"
    }

    fn prove(&self, sequent: &Sequent, depth: usize) -> Result<ProofOutcome> {
        let goal = match Formula::conjunction(sequent.premises.iter().cloned()) {
            Some(g) => g.implies(sequent.conclusion.clone()),
            None => sequent.conclusion.clone(),
        };
        prove_su(&goal, depth)
    }
}

pub struct LogicRegistry {
    entries: Vec<Box<dyn Logic>>,
}

impl LogicRegistry {
    pub fn register(&mut self, l: Box<dyn Logic>) {
        self.entries.retain(|e| e.name() != l.name());
        self.entries.push(l);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Logic> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "logic",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}

impl Default for LogicRegistry {
    fn default() -> Self {
        let mut r = LogicRegistry { entries: Vec::new() };
        r.register(Box::new(Ipc));
        r.register(Box::new(Su));
        r
    }
}
