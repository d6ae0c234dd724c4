//! Bounded search for SU proofs: IPC plus finitely many instances of `su`.

use std::collections::HashSet;

use super::{prove_ipc, ProofOutcome, Sequent, Verdict};
use crate::error::{Error, Result};
use crate::formula::{Axiom, Formula, SchemaSubstitution};
use crate::frame::{enumerate_s4_frames, Frame, DEFAULT_UPSET_CAP};
use crate::pointset::PointSet;
use crate::semantics::{find_countervaluation, implication, Model};
use crate::strong_union::satisfies_su2;

pub const DEFAULT_INSTANCE_CAP: usize = 100_000;

/// Non-(su₂) frames up to this size supply the refuting models used to
/// discard instances that cannot entail the goal on their own.
const FILTER_POINTS: usize = 4;

/// (su₂) frames up to this size are searched for a refutation of the goal
/// itself; one means no set of `su` instances can derive it.
const SU_FRAME_POINTS: usize = 3;

/// Survivors of the semantic filter are also tried jointly when there are
/// at most this many.
const JOINT_LIMIT: usize = 12;

/// Candidate terms for the schema variables of `su` at nesting `depth`:
/// `⊥` and the subformulas of `goal`, then closed `depth` times under one
/// more negation. Order is deterministic and duplicates are removed.
pub fn su_universe(goal: &Formula, depth: usize) -> Vec<Formula> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in std::iter::once(Formula::Bottom).chain(goal.subformulas()) {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    for _ in 0..depth {
        let negs: Vec<Formula> = out.iter().map(|f| f.clone().neg()).collect();
        for f in negs {
            if seen.insert(f.clone()) {
                out.push(f);
            }
        }
    }
    out
}

struct Refuter {
    frame: Frame,
    points: PointSet,
    /// Truth sets of the universe, in universe order.
    values: Vec<PointSet>,
}

impl Refuter {
    /// Truth set of `su[p:=a, q:=b, r:=c, s:=d]`, computed from the parts.
    fn su_truth(&self, a: usize, b: usize, c: usize, d: usize) -> PointSet {
        let f = &self.frame;
        let (pa, pb, pc, pd) = (self.values[a], self.values[b], self.values[c], self.values[d]);
        let empty = PointSet::EMPTY;
        let na = implication(f, &pa, &empty);
        let nb = implication(f, &pb, &empty);
        let premise = implication(f, &na, &pb).intersection(&implication(f, &nb, &pa));
        let lhs = implication(f, &premise, &pc.union(&pd));
        let rhs = implication(f, &pa, &pc).union(&implication(f, &pb, &pd));
        implication(f, &lhs, &rhs)
    }

    fn admits(&self, t: [usize; 4]) -> bool {
        !self.su_truth(t[0], t[1], t[2], t[3]).intersects(&self.points)
    }
}

/// Refuting models of `goal` on small frames outside the (su₂) class, or
/// `None` when `goal` fails on a small (su₂) frame, where every instance of
/// `su` is valid.
fn refuters(goal: &Formula) -> Result<Option<Vec<(Model, PointSet)>>> {
    let mut out = Vec::new();
    for n in 1..=FILTER_POINTS {
        for frame in enumerate_s4_frames(n)? {
            let su2 = satisfies_su2(&frame)?;
            if su2 && n > SU_FRAME_POINTS {
                continue;
            }
            if let Some(cv) = find_countervaluation(&frame, goal, DEFAULT_UPSET_CAP)? {
                if su2 {
                    return Ok(None);
                }
                let model = Model::new(frame, cv.valuation)?;
                let refuting = model.frame().points().difference(&model.truth_set(goal));
                out.push((model, refuting));
            }
        }
    }
    Ok(Some(out))
}

fn inconclusive() -> ProofOutcome {
    ProofOutcome {
        verdict: Verdict::Inconclusive,
        certificate: None,
        instances: Vec::new(),
    }
}

fn instance(universe: &[Formula], t: [usize; 4]) -> Result<Formula> {
    let s = SchemaSubstitution::new()
        .bind("p", universe[t[0]].clone())
        .bind("q", universe[t[1]].clone())
        .bind("r", universe[t[2]].clone())
        .bind("s", universe[t[3]].clone());
    Axiom::Su.formula().instantiate(&s)
}

fn attempt(instances: Vec<Formula>, goal: &Formula) -> Option<ProofOutcome> {
    let out = prove_ipc(&Sequent::new(instances.clone(), goal.clone()));
    out.is_provable().then(|| ProofOutcome { instances, ..out })
}

pub fn prove_su(goal: &Formula, depth: usize) -> Result<ProofOutcome> {
    prove_su_capped(goal, depth, DEFAULT_INSTANCE_CAP)
}

/// Sound but incomplete: `Provable` means `goal` follows in IPC from the
/// listed `su` instances; `Inconclusive` means nothing was found within
/// `depth`. Levels whose instance count exceeds `cap` are an error.
///
/// A goal refuted on a small (su₂) frame is reported inconclusive at once.
/// Otherwise, per level the substitutions range over
/// `su_universe(goal, level)^4`. An instance is tried alone only if it
/// holds at no point refuting the goal in some small model; if none works
/// alone, the survivors of the level are tried together when there are few
/// of them.
pub fn prove_su_capped(goal: &Formula, depth: usize, cap: usize) -> Result<ProofOutcome> {
    let plain = prove_ipc(&Sequent::theorem(goal.clone()));
    if plain.is_provable() {
        return Ok(plain);
    }
    let Some(models) = refuters(goal)? else {
        return Ok(inconclusive());
    };
    let mut previous = 0;
    for level in 0..=depth {
        let universe = su_universe(goal, level);
        let n = universe.len();
        let count = (n as u128).pow(4);
        if count > cap as u128 {
            return Err(Error::CapExceeded {
                what: "su instances",
                count,
                cap: cap as u128,
            });
        }
        if level > 0 && n == previous {
            break;
        }
        let filters: Vec<Refuter> = models
            .iter()
            .map(|(m, points)| Refuter {
                frame: m.frame().clone(),
                points: *points,
                values: universe.iter().map(|f| m.truth_set(f)).collect(),
            })
            .collect();
        let mut survivors = Vec::new();
        let mut tuple = [0usize; 4];
        loop {
            let fresh = level == 0 || tuple.iter().any(|&i| i >= previous);
            if fresh && filters.iter().all(|r| r.admits(tuple)) {
                let inst = instance(&universe, tuple)?;
                if let Some(out) = attempt(vec![inst.clone()], goal) {
                    return Ok(out);
                }
                survivors.push(inst);
            }
            if !crate::strong_union::advance(&mut tuple, n) {
                break;
            }
        }
        if (2..=JOINT_LIMIT).contains(&survivors.len()) {
            if let Some(out) = attempt(survivors, goal) {
                return Ok(out);
            }
        }
        previous = n;
    }
    Ok(inconclusive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn universe_shape() {
        let u = su_universe(&parse("p | ~p").unwrap(), 0);
        assert_eq!(u.len(), 4);
        assert_eq!(u[0], Formula::Bottom);
        let u1 = su_universe(&parse("p | ~p").unwrap(), 1);
        // ~p is already present, so only ~_|_, ~~p and ~(p | ~p) are new
        assert_eq!(u1.len(), 7);
        assert_eq!(&u1[..4], &u[..]);
    }

    #[test]
    fn su_by_identity_instance() {
        let out = prove_su(&Axiom::Su.formula(), 0).unwrap();
        assert!(out.is_provable());
        assert_eq!(out.instances.len(), 1);
        let cert = out.certificate.unwrap();
        assert!(cert.proves(&Sequent::new(out.instances, Axiom::Su.formula())));
    }

    #[test]
    fn intuitionistic_goal_needs_no_instance() {
        let out = prove_su(&parse("p -> p").unwrap(), 0).unwrap();
        assert!(out.is_provable());
        assert!(out.instances.is_empty());
    }

    #[test]
    fn excluded_middle_is_inconclusive() {
        let f = parse("p | ~p").unwrap();
        assert_eq!(prove_su(&f, 1).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn cap_is_enforced() {
        let f = Axiom::Su.formula();
        assert!(matches!(prove_su_capped(&f, 0, 10), Err(Error::CapExceeded { .. })));
    }
}
