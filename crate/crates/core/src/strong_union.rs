//! The strong-union predicate and the frame properties built on it.
//!
//! `z` strongly unites `x_0, .., x_{n-1}` when `z` sees every `x_i` and,
//! for every `i`, each successor of `z` is either a successor of `x_i` or
//! shares a successor with some other `x_{i'}`.

use crate::error::{Error, Result};
use crate::formula::Axiom;
use crate::frame::{Frame, DEFAULT_UPSET_CAP};
use crate::pointset::PointSet;
use crate::semantics::{frame_validates_capped, Model, Valuation};

pub fn strongly_unites(frame: &Frame, z: usize, xs: &[usize]) -> Result<bool> {
    frame.require_s4()?;
    frame.check_point(z)?;
    if xs.is_empty() {
        return Err(Error::InvalidArgument("strong union of an empty tuple".into()));
    }
    for &x in xs {
        frame.check_point(x)?;
    }
    Ok(unites(frame, z, xs))
}

/// Intersection over `i` of `r_image({x_i}) ∪ ⋃_{i'≠i} diamond(r_image({x_i'}))`.
fn union_target(frame: &Frame, xs: &[usize]) -> PointSet {
    let mut target = frame.points();
    for (i, &x) in xs.iter().enumerate() {
        let mut allowed = frame.successors(x);
        for (j, &other) in xs.iter().enumerate() {
            if j != i {
                allowed = allowed.union(&frame.meets(other));
            }
        }
        target = target.intersection(&allowed);
    }
    target
}

/// Points that see every `x_i`.
fn common_predecessors(frame: &Frame, xs: &[usize]) -> PointSet {
    xs.iter()
        .fold(frame.points(), |acc, &x| acc.intersection(&frame.predecessors(x)))
}

pub(crate) fn unites(frame: &Frame, z: usize, xs: &[usize]) -> bool {
    common_predecessors(frame, xs).contains(z)
        && frame.successors(z).is_subset(&union_target(frame, xs))
}

fn has_strong_union_below(frame: &Frame, w: usize, xs: &[usize]) -> bool {
    let target = union_target(frame, xs);
    frame
        .successors(w)
        .intersection(&common_predecessors(frame, xs))
        .iter()
        .any(|z| frame.successors(z).is_subset(&target))
}

/// A point `w` and an `n`-tuple of its successors with no strong union
/// among the successors of `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuFailure {
    pub w: usize,
    pub xs: Vec<usize>,
}

/// First failure of (su_n) in the order: `w` ascending, then tuples in
/// lexicographic order.
pub fn su_n_failure(frame: &Frame, n: usize) -> Result<Option<SuFailure>> {
    frame.require_s4()?;
    if n == 0 {
        return Err(Error::InvalidArgument("(su_n) needs n >= 1".into()));
    }
    for w in 0..frame.size() {
        let succ = frame.successors(w).to_vec();
        let mut picks = vec![0usize; n];
        loop {
            let xs: Vec<usize> = picks.iter().map(|&i| succ[i]).collect();
            if !has_strong_union_below(frame, w, &xs) {
                return Ok(Some(SuFailure { w, xs }));
            }
            if !advance(&mut picks, succ.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// Odometer step over `picks ∈ 0..base`, last index fastest. Returns false
/// after the last tuple.
pub(crate) fn advance(picks: &mut [usize], base: usize) -> bool {
    for i in (0..picks.len()).rev() {
        picks[i] += 1;
        if picks[i] < base {
            return true;
        }
        picks[i] = 0;
    }
    false
}

/// (su_n), checked literally over all `n`-tuples of successors.
pub fn satisfies_su_n(frame: &Frame, n: usize) -> Result<bool> {
    Ok(su_n_failure(frame, n)?.is_none())
}

pub fn satisfies_su2(frame: &Frame) -> Result<bool> {
    satisfies_su_n(frame, 2)
}

/// (su) for every `n`. Delegates to (su₂), which is equivalent on S4 frames;
/// [`satisfies_su_n`] stays independent so that equivalence can be tested.
pub fn satisfies_su(frame: &Frame) -> Result<bool> {
    satisfies_su2(frame)
}

/// (Uni): any two successors `w, v` of `s` have a common predecessor `u`
/// above `s` every successor of which meets `w` or meets `v`.
pub fn satisfies_uni(frame: &Frame) -> Result<bool> {
    frame.require_s4()?;
    for s in 0..frame.size() {
        let succ = frame.successors(s);
        for w in &succ {
            for v in &succ {
                let candidates = succ
                    .intersection(&frame.predecessors(w))
                    .intersection(&frame.predecessors(v));
                let target = frame.meets(w).union(&frame.meets(v));
                if !candidates.iter().any(|u| frame.successors(u).is_subset(&target)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The refuting valuation for `su` at `w`, given a failure of (su₂) at `w`
/// on the pair `x, y`:
///
/// `p ↦ r_image({x})`, `q ↦ r_image({y})`, `r ↦ heyting_neg({x})`,
/// `s ↦ heyting_neg({y})`.
///
/// `heyting_neg({x})` is the set of points that do not see `x`; a point
/// falsifies `r` exactly when it sees `x`. The returned model is checked to
/// refute `su` at `w` before it is returned.
pub fn build_su_countermodel(frame: &Frame, w: usize, x: usize, y: usize) -> Result<Model> {
    frame.require_s4()?;
    for p in [w, x, y] {
        frame.check_point(p)?;
    }
    if !frame.relates(w, x) || !frame.relates(w, y) {
        return Err(Error::Precondition(format!("{w} must see both {x} and {y}")));
    }
    if has_strong_union_below(frame, w, &[x, y]) {
        return Err(Error::Precondition(format!(
            "some successor of {w} strongly unites {x}, {y}"
        )));
    }
    let valuation: Valuation = [
        ("p", frame.successors(x)),
        ("q", frame.successors(y)),
        ("r", frame.heyting_neg(&PointSet::singleton(x))?),
        ("s", frame.heyting_neg(&PointSet::singleton(y))?),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let model = Model::new(frame.clone(), valuation)?;
    let truth = |name: &str| model.value(name);
    let expected = truth("p").contains(x)
        && !truth("r").contains(x)
        && truth("q").contains(y)
        && !truth("s").contains(y);
    if !expected {
        return Err(Error::PostCheck("valuation does not separate x and y".into()));
    }
    if model.truth_set(&Axiom::Su.formula()).contains(w) {
        return Err(Error::PostCheck(format!("su holds at {w} under the constructed valuation")));
    }
    Ok(model)
}

/// Outcome of comparing validity of `su` with (su₂) on one frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub validates_su: bool,
    pub satisfies_su2: bool,
    pub agree: bool,
    /// When (su₂) fails: the witness `(w, x, y)`.
    pub witness: Option<(usize, usize, usize)>,
}

pub fn correspondence_check(frame: &Frame) -> Result<CorrespondenceReport> {
    correspondence_check_capped(frame, DEFAULT_UPSET_CAP)
}

pub fn correspondence_check_capped(frame: &Frame, upset_cap: usize) -> Result<CorrespondenceReport> {
    let failure = su_n_failure(frame, 2)?;
    let validates_su = frame_validates_capped(frame, &Axiom::Su.formula(), upset_cap)?;
    let satisfies_su2 = failure.is_none();
    Ok(CorrespondenceReport {
        validates_su,
        satisfies_su2,
        agree: validates_su == satisfies_su2,
        witness: failure.map(|f| (f.w, f.xs[0], f.xs[1])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{enumerate_s4_frames, enumerate_s4_frames_up_to};

    /// r < a, b < t
    fn diamond_frame() -> Frame {
        Frame::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
            .unwrap()
            .reflexive_transitive_closure()
    }

    /// Direct transcription of the definition, for cross-checking `unites`.
    fn unites_by_definition(f: &Frame, z: usize, xs: &[usize]) -> bool {
        xs.iter().enumerate().all(|(i, &x)| {
            let mut allowed = f.r_image(&PointSet::singleton(x)).unwrap();
            for (j, &o) in xs.iter().enumerate() {
                if j != i {
                    let up = f.r_image(&PointSet::singleton(o)).unwrap();
                    allowed = allowed.union(&f.diamond(&up).unwrap());
                }
            }
            f.relates(z, x) && f.box_(&allowed).unwrap().contains(z)
        })
    }

    #[test]
    fn single_point_union_is_mutual_access() {
        for f in enumerate_s4_frames_up_to(3).unwrap() {
            for z in 0..f.size() {
                for x in 0..f.size() {
                    let mutual = f.relates(z, x) && f.relates(x, z);
                    assert_eq!(strongly_unites(&f, z, &[x]).unwrap(), mutual);
                }
            }
        }
    }

    #[test]
    fn unites_matches_definition() {
        for f in enumerate_s4_frames(3).unwrap() {
            for z in 0..3 {
                for a in 0..3 {
                    for b in 0..3 {
                        assert_eq!(unites(&f, z, &[a, b]), unites_by_definition(&f, z, &[a, b]));
                    }
                }
            }
        }
    }

    #[test]
    fn strong_union_examples() {
        assert!(strongly_unites(&diamond_frame(), 0, &[1, 2]).unwrap());
        let fork = Frame::fork(3);
        assert!(!strongly_unites(&fork, 0, &[1, 2]).unwrap());
        assert!(strongly_unites(&Frame::new(1, []).unwrap(), 0, &[0]).is_err());
        assert!(strongly_unites(&fork, 0, &[]).is_err());
        assert!(strongly_unites(&fork, 0, &[9]).is_err());
    }

    #[test]
    fn frame_property_examples() {
        let fork = Frame::fork(3);
        assert!(!satisfies_su2(&fork).unwrap());
        assert!(satisfies_su_n(&fork, 1).unwrap());
        assert!(satisfies_su2(&diamond_frame()).unwrap());
        assert!(satisfies_uni(&Frame::point()).unwrap());
        assert_eq!(
            su_n_failure(&fork, 2).unwrap(),
            Some(SuFailure { w: 0, xs: vec![1, 2] })
        );
    }

    #[test]
    fn fork_countermodel() {
        let fork = Frame::fork(3);
        let m = build_su_countermodel(&fork, 0, 1, 2).unwrap();
        assert!(!m.satisfies(0, &Axiom::Su.formula()).unwrap());
        assert!(m.value("p").contains(1) && !m.value("r").contains(1));
        assert!(m.value("q").contains(2) && !m.value("s").contains(2));
        assert!(matches!(
            build_su_countermodel(&diamond_frame(), 0, 1, 2),
            Err(Error::Precondition(_))
        ));
    }

    /// Reading the `r`/`s` entries as `heyting_neg(r_image({x}))` instead
    /// does not refute `su` on this frame, although (su₂) fails at 0 for 1, 2.
    #[test]
    fn upward_closed_reading_of_the_negated_singleton_fails() {
        // 0 < 1, 2 < 4 and 0 < 3
        let f = Frame::new(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4)])
            .unwrap()
            .reflexive_transitive_closure();
        assert_eq!(su_n_failure(&f, 2).unwrap().map(|e| e.w), Some(0));
        assert!(!has_strong_union_below(&f, 0, &[1, 2]));
        let up = |p| f.successors(p);
        let val: Valuation = [
            ("p", up(1)),
            ("q", up(2)),
            ("r", f.heyting_neg(&up(1)).unwrap()),
            ("s", f.heyting_neg(&up(2)).unwrap()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        let m = Model::new(f.clone(), val).unwrap();
        assert!(m.satisfies(0, &Axiom::Su.formula()).unwrap());
        assert!(!build_su_countermodel(&f, 0, 1, 2)
            .unwrap()
            .satisfies(0, &Axiom::Su.formula())
            .unwrap());
    }

    #[test]
    fn correspondence_examples() {
        let fork = correspondence_check(&Frame::fork(3)).unwrap();
        assert_eq!((fork.validates_su, fork.satisfies_su2, fork.agree), (false, false, true));
        assert_eq!(fork.witness, Some((0, 1, 2)));
        let point = correspondence_check(&Frame::point()).unwrap();
        assert_eq!((point.validates_su, point.satisfies_su2, point.agree), (true, true, true));
    }

    #[test]
    fn countermodel_for_every_su2_failure_on_four_points() {
        for f in enumerate_s4_frames(4).unwrap() {
            if let Some(fail) = su_n_failure(&f, 2).unwrap() {
                let m = build_su_countermodel(&f, fail.w, fail.xs[0], fail.xs[1]).unwrap();
                assert!(!m.satisfies(fail.w, &Axiom::Su.formula()).unwrap());
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        for f in enumerate_s4_frames(3).unwrap() {
            for z in 0..3 {
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            let base = unites(&f, z, &[a, b, c]);
                            for perm in [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                                assert_eq!(unites(&f, z, &perm), base);
                            }
                        }
                    }
                }
            }
        }
    }
}
