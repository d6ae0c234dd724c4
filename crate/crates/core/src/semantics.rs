//! Intuitionistic Kripke semantics on finite S4 frames.
//!
//! Formulas are compiled into a flat [`Program`] so that sweeping over all
//! monotone valuations only recomputes the subformulas affected by the
//! variables that changed.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::frame::{enumerate_s4_frames_capped, random_s4_frame, Frame, DEFAULT_UPSET_CAP};
use crate::pointset::PointSet;
use crate::strong_union::satisfies_su2;

pub type Valuation = BTreeMap<String, PointSet>;

/// An S4 frame with a monotone valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: Valuation,
}

impl Model {
    pub fn new(frame: Frame, valuation: Valuation) -> Result<Model> {
        frame.require_s4()?;
        for (name, set) in &valuation {
            frame.check_set(set)?;
            if !frame.is_upset_unchecked(set) {
                return Err(Error::NotUpset(name.clone()));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    /// `V(name)`; unmentioned variables are false everywhere.
    pub fn value(&self, name: &str) -> PointSet {
        self.valuation.get(name).copied().unwrap_or_default()
    }

    pub fn truth_set(&self, f: &Formula) -> PointSet {
        match f {
            Formula::Bottom => PointSet::EMPTY,
            Formula::Var(name) => self.value(name),
            Formula::And(a, b) => self.truth_set(a).intersection(&self.truth_set(b)),
            Formula::Or(a, b) => self.truth_set(a).union(&self.truth_set(b)),
            Formula::Implies(a, b) => implication(&self.frame, &self.truth_set(a), &self.truth_set(b)),
        }
    }

    pub fn satisfies(&self, w: usize, f: &Formula) -> Result<bool> {
        self.frame.check_point(w)?;
        Ok(self.truth_set(f).contains(w))
    }

    pub fn satisfies_all(&self, w: usize, gamma: &[Formula]) -> Result<bool> {
        self.frame.check_point(w)?;
        Ok(gamma.iter().all(|f| self.truth_set(f).contains(w)))
    }
}

/// `box(complement(A) ∪ B)`.
#[inline]
pub(crate) fn implication(frame: &Frame, a: &PointSet, b: &PointSet) -> PointSet {
    let allowed = frame.points().difference(a).union(b);
    frame.box_unchecked(&allowed)
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Bottom,
    Var(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
}

/// A set of formulas flattened into shared subformula nodes.
#[derive(Clone, Debug)]
pub struct Program {
    nodes: Vec<Node>,
    // highest variable index a node depends on, `None` for closed nodes
    level: Vec<Option<usize>>,
    vars: Vec<String>,
    roots: Vec<usize>,
}

impl Program {
    pub fn compile(formulas: &[Formula]) -> Program {
        let vars: Vec<String> = formulas
            .iter()
            .flat_map(|f| f.variables())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut prog = Program {
            nodes: Vec::new(),
            level: Vec::new(),
            vars,
            roots: Vec::new(),
        };
        let mut index = std::collections::HashMap::new();
        for f in formulas {
            let root = prog.add(f, &mut index);
            prog.roots.push(root);
        }
        prog
    }

    fn add(&mut self, f: &Formula, index: &mut std::collections::HashMap<Formula, usize>) -> usize {
        if let Some(&i) = index.get(f) {
            return i;
        }
        let (node, level) = match f {
            Formula::Bottom => (Node::Bottom, None),
            Formula::Var(name) => {
                let v = self.vars.binary_search_by(|x| x.as_str().cmp(name)).unwrap();
                (Node::Var(v), Some(v))
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let (a, b) = (self.add(a, index), self.add(b, index));
                let level = self.level[a].max(self.level[b]);
                let node = match f {
                    Formula::And(..) => Node::And(a, b),
                    Formula::Or(..) => Node::Or(a, b),
                    _ => Node::Implies(a, b),
                };
                (node, level)
            }
        };
        self.nodes.push(node);
        self.level.push(level);
        index.insert(f.clone(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Recomputes every node whose level is `None` (when `from` is 0) or at
    /// least `from`.
    fn eval(&self, frame: &Frame, assignment: &[PointSet], values: &mut [PointSet], from: usize) {
        for (i, node) in self.nodes.iter().enumerate() {
            let stale = match self.level[i] {
                Some(l) => l >= from,
                None => from == 0,
            };
            if !stale {
                continue;
            }
            values[i] = match *node {
                Node::Bottom => PointSet::EMPTY,
                Node::Var(v) => assignment[v],
                Node::And(a, b) => values[a].intersection(&values[b]),
                Node::Or(a, b) => values[a].union(&values[b]),
                Node::Implies(a, b) => implication(frame, &values[a], &values[b]),
            };
        }
    }

    /// Visits every assignment of `choices` to the program's variables in
    /// lexicographic order (first variable most significant). `visit`
    /// receives the chosen indices and the node values.
    pub fn sweep<T>(
        &self,
        frame: &Frame,
        choices: &[PointSet],
        mut visit: impl FnMut(&[usize], &[PointSet]) -> ControlFlow<T>,
    ) -> Option<T> {
        let k = self.vars.len();
        let mut values = vec![PointSet::EMPTY; self.nodes.len()];
        if choices.is_empty() && k > 0 {
            return None;
        }
        let mut picks = vec![0usize; k];
        let mut assignment = vec![choices.first().copied().unwrap_or_default(); k];
        let mut from = 0;
        loop {
            self.eval(frame, &assignment, &mut values, from);
            if let ControlFlow::Break(t) = visit(&picks, &values) {
                return Some(t);
            }
            // odometer: last variable fastest
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                picks[i] += 1;
                if picks[i] < choices.len() {
                    assignment[i] = choices[picks[i]];
                    break;
                }
                picks[i] = 0;
                assignment[i] = choices[0];
            }
            from = i;
        }
    }

    pub fn valuation(&self, choices: &[PointSet], picks: &[usize]) -> Valuation {
        self.vars
            .iter()
            .zip(picks)
            .map(|(v, &i)| (v.clone(), choices[i]))
            .collect()
    }
}

/// A valuation together with the least point where it refutes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countervaluation {
    pub valuation: Valuation,
    pub point: usize,
}

/// Whether `f` is true everywhere under every monotone valuation of its
/// variables.
pub fn frame_validates(frame: &Frame, f: &Formula) -> Result<bool> {
    frame_validates_capped(frame, f, DEFAULT_UPSET_CAP)
}

pub fn frame_validates_capped(frame: &Frame, f: &Formula, upset_cap: usize) -> Result<bool> {
    Ok(find_countervaluation(frame, f, upset_cap)?.is_none())
}

/// The lexicographically first valuation refuting `f` somewhere on `frame`.
pub fn find_countervaluation(
    frame: &Frame,
    f: &Formula,
    upset_cap: usize,
) -> Result<Option<Countervaluation>> {
    let upsets = frame.upsets_capped(upset_cap)?;
    let prog = Program::compile(std::slice::from_ref(f));
    Ok(countervaluation_with(frame, &prog, &upsets))
}

fn countervaluation_with(frame: &Frame, prog: &Program, upsets: &[PointSet]) -> Option<Countervaluation> {
    let all = frame.points();
    let root = prog.roots[0];
    prog.sweep(frame, upsets, |picks, values| match all.difference(&values[root]).first() {
        Some(point) => ControlFlow::Break(Countervaluation {
            valuation: prog.valuation(upsets, picks),
            point,
        }),
        None => ControlFlow::Continue(()),
    })
}

/// `Γ ⊨_F α`: at every point, under every monotone valuation, `Γ` forces `α`.
pub fn consequence_on_frame(frame: &Frame, gamma: &[Formula], alpha: &Formula) -> Result<bool> {
    consequence_on_frame_capped(frame, gamma, alpha, DEFAULT_UPSET_CAP)
}

pub fn consequence_on_frame_capped(
    frame: &Frame,
    gamma: &[Formula],
    alpha: &Formula,
    upset_cap: usize,
) -> Result<bool> {
    Ok(find_consequence_counterexample(frame, gamma, alpha, upset_cap)?.is_none())
}

/// A valuation and point where all of `gamma` holds but `alpha` fails.
pub fn find_consequence_counterexample(
    frame: &Frame,
    gamma: &[Formula],
    alpha: &Formula,
    upset_cap: usize,
) -> Result<Option<Countervaluation>> {
    let upsets = frame.upsets_capped(upset_cap)?;
    let mut all: Vec<Formula> = gamma.to_vec();
    all.push(alpha.clone());
    let prog = Program::compile(&all);
    let (conclusion, premises) = prog.roots.split_last().unwrap();
    let full = frame.points();
    Ok(prog.sweep(frame, &upsets, |picks, values| {
        let forced = premises
            .iter()
            .fold(full, |acc, &r| acc.intersection(&values[r]));
        match forced.difference(&values[*conclusion]).first() {
            Some(point) => ControlFlow::Break(Countervaluation {
                valuation: prog.valuation(&upsets, picks),
                point,
            }),
            None => ControlFlow::Continue(()),
        }
    }))
}

/// Limits for the countermodel search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_points: usize,
    pub upset_cap: usize,
    pub seed: u64,
    /// Random frames (of `max_points + 1 ..= max_points + 3` points) tried
    /// after the exhaustive phase comes up empty.
    pub random_samples: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_points: 4,
            upset_cap: DEFAULT_UPSET_CAP,
            seed: 0,
            random_samples: 0,
        }
    }
}

impl SearchBounds {
    pub fn with_max_points(max_points: usize) -> Self {
        SearchBounds {
            max_points,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: Model,
    pub point: usize,
}

/// Searches the (su₂) frames for a model refuting `f`.
///
/// The exhaustive phase visits frames by ascending size, then enumeration
/// order, then valuation order, so the witness is deterministic. `None`
/// means "no countermodel up to the bounds", not validity.
pub fn find_su_countermodel(f: &Formula, bounds: &SearchBounds) -> Result<Option<Countermodel>> {
    if bounds.max_points == 0 {
        return Err(Error::InvalidArgument("max_points must be at least 1".into()));
    }
    let prog = Program::compile(std::slice::from_ref(f));
    let try_frame = |frame: Frame| -> Result<Option<Countermodel>> {
        if !satisfies_su2(&frame)? {
            return Ok(None);
        }
        let upsets = frame.upsets_capped(bounds.upset_cap)?;
        Ok(countervaluation_with(&frame, &prog, &upsets).map(|cv| {
            let model = Model::new(frame, cv.valuation).expect("valuation drawn from upsets");
            Countermodel { model, point: cv.point }
        }))
    };
    for n in 1..=bounds.max_points {
        for frame in enumerate_s4_frames_capped(n, bounds.max_points.max(5))? {
            if let Some(cm) = try_frame(frame)? {
                return Ok(Some(cm));
            }
        }
    }
    for i in 0..bounds.random_samples {
        let n = bounds.max_points + 1 + i % 3;
        let frame = random_s4_frame(n, bounds.seed.wrapping_add(i as u64))?;
        if let Some(cm) = try_frame(frame)? {
            return Ok(Some(cm));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var, Axiom};
    use crate::frame::enumerate_s4_frames_up_to;
    use proptest::prelude::*;

    fn set(points: &[usize]) -> PointSet {
        points.iter().copied().collect()
    }

    fn chain_model() -> Model {
        Model::new(Frame::chain(2), [("p".to_string(), set(&[1]))].into()).unwrap()
    }

    #[test]
    fn truth_set_examples() {
        let m = chain_model();
        let p = var("p");
        assert_eq!(m.truth_set(&p.clone().neg()), PointSet::EMPTY);
        assert_eq!(m.truth_set(&p.clone().neg().neg()), set(&[0, 1]));
        assert_eq!(m.truth_set(&p.clone().implies(p.clone())), set(&[0, 1]));
        assert_eq!(m.truth_set(&p.clone().or(p.clone().neg())), set(&[1]));
        assert!(!m.satisfies(0, &parse("p | ~p").unwrap()).unwrap());
        assert!(m.satisfies_all(0, &[]).unwrap());
        assert!(m.satisfies(2, &p).is_err());
    }

    #[test]
    fn model_rejects_non_upsets() {
        let err = Model::new(Frame::chain(2), [("p".to_string(), set(&[0]))].into()).unwrap_err();
        assert_eq!(err, Error::NotUpset("p".into()));
        let bare = Frame::new(1, []).unwrap();
        assert_eq!(Model::new(bare, Valuation::new()).unwrap_err(), Error::NotS4);
    }

    #[test]
    fn validity_examples() {
        let pp = parse("p -> p").unwrap();
        for f in enumerate_s4_frames_up_to(3).unwrap() {
            assert!(frame_validates(&f, &pp).unwrap());
        }
        assert!(!frame_validates(&Frame::chain(2), &parse("p | ~p").unwrap()).unwrap());
        assert!(frame_validates(&Frame::point(), &Axiom::Su.formula()).unwrap());
        let cv = find_countervaluation(&Frame::chain(2), &parse("p | ~p").unwrap(), 16)
            .unwrap()
            .unwrap();
        assert_eq!(cv.point, 0);
        assert_eq!(cv.valuation["p"], set(&[1]));
    }

    #[test]
    fn consequence_examples() {
        let chain = Frame::chain(2);
        let a = parse("p -> q | r").unwrap();
        assert!(consequence_on_frame(&chain, std::slice::from_ref(&a), &a).unwrap());
        let nnp = parse("~~p").unwrap();
        assert!(!consequence_on_frame(&chain, &[nnp], &var("p")).unwrap());
        let mp = [var("p"), parse("p -> q").unwrap()];
        for f in enumerate_s4_frames_up_to(3).unwrap() {
            assert!(consequence_on_frame(&f, &mp, &var("q")).unwrap());
        }
    }

    #[test]
    fn su_countermodel_examples() {
        let lem = parse("p | ~p").unwrap();
        let cm = find_su_countermodel(&lem, &SearchBounds::default()).unwrap().unwrap();
        assert_eq!(cm.model.frame().size(), 2);
        assert!(!cm.model.satisfies(cm.point, &lem).unwrap());
        assert!(satisfies_su2(cm.model.frame()).unwrap());
        for ax in [Axiom::Su, Axiom::Kp] {
            assert_eq!(find_su_countermodel(&ax.formula(), &SearchBounds::default()).unwrap(), None);
        }
    }

    #[test]
    fn sweep_order_is_lexicographic() {
        let prog = Program::compile(&[parse("a & b").unwrap()]);
        let choices = [set(&[]), set(&[0])];
        let mut seen = Vec::new();
        prog.sweep::<()>(&Frame::point(), &choices, |picks, _| {
            seen.push(picks.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    fn arb_model() -> impl Strategy<Value = Model> {
        (2usize..6, any::<u64>(), any::<u64>()).prop_map(|(n, seed, pick)| {
            let frame = random_s4_frame(n, seed).unwrap();
            let ups = frame.upsets().unwrap();
            let val: Valuation = ["p", "q", "r"]
                .iter()
                .enumerate()
                .map(|(i, v)| (v.to_string(), ups[(pick >> (i * 8)) as usize % ups.len()]))
                .collect();
            Model::new(frame, val).unwrap()
        })
    }

    proptest! {
        #[test]
        fn truth_sets_are_upsets(m in arb_model(), f in crate::formula::tests::arb_formula()) {
            let t = m.truth_set(&f);
            prop_assert!(m.frame().is_upset(&t).unwrap());
        }

        #[test]
        fn irrelevant_variables_do_not_matter(m in arb_model(), f in crate::formula::tests::arb_formula()) {
            let mut val = m.valuation().clone();
            val.insert("unused".into(), m.frame().points());
            let wider = Model::new(m.frame().clone(), val).unwrap();
            prop_assert_eq!(m.truth_set(&f), wider.truth_set(&f));
        }

        #[test]
        fn compiled_sweep_matches_direct_evaluation(m in arb_model(), f in crate::formula::tests::arb_formula()) {
            let prog = Program::compile(std::slice::from_ref(&f));
            let ups = m.frame().upsets().unwrap();
            let mut checked = 0;
            prog.sweep::<()>(m.frame(), &ups, |picks, values| {
                let model = Model::new(m.frame().clone(), prog.valuation(&ups, picks)).unwrap();
                assert_eq!(values[prog.roots()[0]], model.truth_set(&f));
                checked += 1;
                if checked > 50 { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
            });
        }
    }
}
