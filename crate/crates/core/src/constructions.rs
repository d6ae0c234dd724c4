//! Medvedev frames, connected products, hereditary union functions and the
//! disjunction-property witness built from them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::frame::Frame;
use crate::pointset::{PointSet, MAX_POINTS};
use crate::semantics::{Model, Valuation};
use crate::strong_union::{satisfies_su2, su_n_failure};

pub const DEFAULT_MEDVEDEV_CAP: usize = 6;

/// `⟨℘*(X), ⊇⟩` for `X = {1, .., k}`. Point `i` encodes the subset with
/// bitmask `i + 1` (bit `j` stands for element `j + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MedvedevFrame {
    ground_size: usize,
    frame: Frame,
}

impl MedvedevFrame {
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn into_frame(self) -> Frame {
        self.frame
    }

    /// Bitmask of the subset encoded by `point`.
    pub fn subset(&self, point: usize) -> u32 {
        point as u32 + 1
    }

    pub fn point(&self, subset: u32) -> Option<usize> {
        let limit = (1u32 << self.ground_size) - 1;
        (subset != 0 && subset <= limit).then(|| subset as usize - 1)
    }

    /// `{1,3}`-style rendering of the subset at `point`.
    pub fn describe(&self, point: usize) -> String {
        let mask = self.subset(point);
        let elems: Vec<String> = (0..self.ground_size)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| (j + 1).to_string())
            .collect();
        format!("{{{}}}", elems.join(","))
    }
}

pub fn medvedev(k: usize) -> Result<MedvedevFrame> {
    medvedev_capped(k, DEFAULT_MEDVEDEV_CAP)
}

pub fn medvedev_capped(k: usize, cap: usize) -> Result<MedvedevFrame> {
    if k == 0 {
        return Err(Error::InvalidArgument("Medvedev frames need a nonempty ground set".into()));
    }
    if k > cap || (1usize << k) - 1 > MAX_POINTS {
        return Err(Error::CapExceeded {
            what: "Medvedev ground size",
            count: k as u128,
            cap: cap as u128,
        });
    }
    let n = (1usize << k) - 1;
    let succ = (0..n)
        .map(|w| {
            let wm = w + 1;
            (0..n).filter(|&v| (v + 1) & !wm == 0).collect()
        })
        .collect();
    Ok(MedvedevFrame {
        ground_size: k,
        frame: Frame::from_successors(succ)?,
    })
}

fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    (1..=mask).filter(move |s| s & !mask == 0)
}

/// Checks, for all nonempty `w, v ⊆ X` and nonempty `t ⊆ w ∪ v`: `t ⊆ w`, or
/// `t ⊆ v`, or `t = w' ∪ v'` for some nonempty `w' ⊆ w`, `v' ⊆ v`.
pub fn check_star_property(k: usize) -> Result<bool> {
    star_property_with(k, |_, _, t, wp, vp| t == wp | vp)
}

/// The same statement with the last clause read as `t = w ∪ v`, which does
/// not hold once `|X| ≥ 3`.
pub fn check_star_property_literal(k: usize) -> Result<bool> {
    star_property_with(k, |w, v, t, _, _| t == w | v)
}

fn star_property_with(k: usize, union_clause: impl Fn(u32, u32, u32, u32, u32) -> bool) -> Result<bool> {
    if k == 0 || k > DEFAULT_MEDVEDEV_CAP {
        return Err(Error::CapExceeded {
            what: "ground size",
            count: k as u128,
            cap: DEFAULT_MEDVEDEV_CAP as u128,
        });
    }
    let full = (1u32 << k) - 1;
    for w in 1..=full {
        for v in 1..=full {
            for t in submasks(w | v) {
                if t & !w == 0 || t & !v == 0 {
                    continue;
                }
                let found = submasks(w).any(|wp| submasks(v).any(|vp| union_clause(w, v, t, wp, vp)));
                if !found {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `F1 ⊗ F2` with its embeddings. Points are laid out as the `W1` block,
/// then the `W2` block, then pairs in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedProduct {
    frame: Frame,
    left: usize,
    right: usize,
}

impl ConnectedProduct {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn inj1(&self, w: usize) -> usize {
        assert!(w < self.left);
        w
    }

    pub fn inj2(&self, w: usize) -> usize {
        assert!(w < self.right);
        self.left + w
    }

    pub fn pair(&self, w1: usize, w2: usize) -> usize {
        assert!(w1 < self.left && w2 < self.right);
        self.left + self.right + w1 * self.right + w2
    }

    pub fn inj1_set(&self, x: &PointSet) -> PointSet {
        x.iter().map(|w| self.inj1(w)).collect()
    }

    pub fn inj2_set(&self, x: &PointSet) -> PointSet {
        x.iter().map(|w| self.inj2(w)).collect()
    }

    /// Components of a pair point.
    pub fn unpair(&self, p: usize) -> Option<(usize, usize)> {
        let base = self.left + self.right;
        (p >= base && p < self.frame.size()).then(|| ((p - base) / self.right, (p - base) % self.right))
    }

    /// Human-readable name of a product point: `1:w`, `2:w` or `(w1,w2)`.
    pub fn describe(&self, p: usize) -> String {
        if p < self.left {
            format!("1:{p}")
        } else if p < self.left + self.right {
            format!("2:{}", p - self.left)
        } else {
            let (a, b) = self.unpair(p).unwrap();
            format!("({a},{b})")
        }
    }

    /// The identity function on `W1 × W2`, as a partial map on product points.
    pub fn identity_union_map(&self) -> HereditaryUnionMap {
        let mut map = BTreeMap::new();
        for a in 0..self.left {
            for b in 0..self.right {
                map.insert((self.inj1(a), self.inj2(b)), self.pair(a, b));
            }
        }
        HereditaryUnionMap {
            base: self.frame.clone(),
            map,
        }
    }
}

pub fn connected_product(f1: &Frame, f2: &Frame) -> Result<ConnectedProduct> {
    f1.require_s4()?;
    f2.require_s4()?;
    let (n1, n2) = (f1.size(), f2.size());
    let total = n1 + n2 + n1 * n2;
    if total > MAX_POINTS {
        return Err(Error::FrameTooLarge(total));
    }
    let mut product = ConnectedProduct {
        frame: Frame::point(),
        left: n1,
        right: n2,
    };
    let mut succ = vec![PointSet::EMPTY; total];
    for a in 0..n1 {
        succ[product.inj1(a)] = product.inj1_set(&f1.successors(a));
    }
    for b in 0..n2 {
        succ[product.inj2(b)] = product.inj2_set(&f2.successors(b));
    }
    for a in 0..n1 {
        for b in 0..n2 {
            let mut row = product
                .inj1_set(&f1.successors(a))
                .union(&product.inj2_set(&f2.successors(b)));
            for v1 in &f1.successors(a) {
                for v2 in &f2.successors(b) {
                    row.insert(product.pair(v1, v2));
                }
            }
            succ[product.pair(a, b)] = row;
        }
    }
    product.frame = Frame::from_successors(succ)?;
    Ok(product)
}

/// A partial map `f : W × W ⇀ W` on a base frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HereditaryUnionMap {
    pub base: Frame,
    pub map: BTreeMap<(usize, usize), usize>,
}

impl HereditaryUnionMap {
    pub fn get(&self, w: usize, v: usize) -> Option<usize> {
        self.map.get(&(w, v)).copied()
    }

    fn check_points(&self) -> Result<()> {
        self.base.require_s4()?;
        for (&(w, v), &u) in &self.map {
            for p in [w, v, u] {
                self.base.check_point(p)?;
            }
        }
        Ok(())
    }
}

/// The domain is closed under pairwise successors, every `f(w, v)` sees `w`
/// and `v`, and each successor of `f(w, v)` is a successor of `w` or of
/// `v`, or `f(w', v')` for successors `w'` of `w` and `v'` of `v`.
pub fn is_hereditary_union_function(h: &HereditaryUnionMap) -> Result<bool> {
    h.check_points()?;
    let f = &h.base;
    for (&(w, v), &u) in &h.map {
        let (sw, sv) = (f.successors(w), f.successors(v));
        let mut images = PointSet::EMPTY;
        for w2 in &sw {
            for v2 in &sv {
                match h.get(w2, v2) {
                    Some(t) => images.insert(t),
                    None => return Ok(false),
                }
            }
        }
        if !f.relates(u, w) || !f.relates(u, v) {
            return Ok(false);
        }
        if !f.successors(u).is_subset(&sw.union(&sv).union(&images)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `w R w'` and `v R v'` imply `f(w, v) R f(w', v')` on the domain.
pub fn is_normal(h: &HereditaryUnionMap) -> Result<bool> {
    h.check_points()?;
    let f = &h.base;
    for (&(w, v), &u) in &h.map {
        for (&(w2, v2), &u2) in &h.map {
            if f.relates(w, w2) && f.relates(v, v2) && !f.relates(u, u2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A model on a connected product refuting `alpha ∨ beta` at its root.
#[derive(Clone, Debug)]
pub struct DpWitness {
    pub product: ConnectedProduct,
    pub product_model: Model,
    pub root: usize,
    pub alpha: Formula,
    pub beta: Formula,
}

impl DpWitness {
    pub fn disjunction(&self) -> Formula {
        self.alpha.clone().or(self.beta.clone())
    }
}

fn check_side(which: &str, m: &Model, r: usize, f: &Formula) -> Result<()> {
    if !satisfies_su2(m.frame())? {
        return Err(Error::Precondition(format!("{which} frame does not satisfy (su2)")));
    }
    if !m.frame().roots()?.contains(r) {
        return Err(Error::Precondition(format!("point {r} is not a root of the {which} frame")));
    }
    if m.satisfies(r, f)? {
        return Err(Error::Precondition(format!("{which} model forces `{f}` at its root")));
    }
    Ok(())
}

/// Glues two rooted countermodels into one countermodel for `alpha ∨ beta`.
///
/// The valuation on the product is `V(p) = inj1(V1(p)) ∪ inj2(V2(p))`; pair
/// points satisfy no variable. Each component is a generated subframe, so
/// it keeps its own valuation even when variable names are shared. Every
/// claimed property of the result is re-verified before returning.
pub fn dp_witness(
    m1: &Model,
    r1: usize,
    alpha: &Formula,
    m2: &Model,
    r2: usize,
    beta: &Formula,
) -> Result<DpWitness> {
    check_side("first", m1, r1, alpha)?;
    check_side("second", m2, r2, beta)?;
    let product = connected_product(m1.frame(), m2.frame())?;
    let mut valuation = Valuation::new();
    for name in m1.valuation().keys().chain(m2.valuation().keys()) {
        let set = product
            .inj1_set(&m1.value(name))
            .union(&product.inj2_set(&m2.value(name)));
        valuation.insert(name.clone(), set);
    }
    let model = Model::new(product.frame().clone(), valuation)
        .map_err(|e| Error::PostCheck(format!("product valuation: {e}")))?;
    let root = product.pair(r1, r2);

    if let Some(fail) = su_n_failure(product.frame(), 2)? {
        return Err(Error::PostCheck(format!(
            "product fails (su2) at {} for {:?}",
            product.describe(fail.w),
            fail.xs
        )));
    }
    if !product.frame().roots()?.contains(root) {
        return Err(Error::PostCheck("pair of roots is not a root of the product".into()));
    }
    if model.satisfies(product.inj1(r1), alpha)? || model.satisfies(product.inj2(r2), beta)? {
        return Err(Error::PostCheck("embedded roots do not refute their disjuncts".into()));
    }
    let disjunction = alpha.clone().or(beta.clone());
    if model.satisfies(root, &disjunction)? {
        return Err(Error::PostCheck(format!("root forces `{disjunction}`")));
    }
    Ok(DpWitness {
        product,
        product_model: model,
        root,
        alpha: alpha.clone(),
        beta: beta.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::strong_union::{satisfies_uni, strongly_unites};

    #[test]
    fn medvedev_examples() {
        let m1 = medvedev(1).unwrap();
        assert_eq!(m1.frame(), &Frame::point());
        let m2 = medvedev(2).unwrap();
        assert_eq!(m2.frame().size(), 3);
        let roots = m2.frame().roots().unwrap().to_vec();
        assert_eq!(roots.iter().map(|&p| m2.describe(p)).collect::<Vec<_>>(), ["{1,2}"]);
        let ends: Vec<String> = m2.frame().ends().unwrap().iter().map(|p| m2.describe(p)).collect();
        assert_eq!(ends, ["{1}", "{2}"]);
        let m3 = medvedev(3).unwrap();
        assert_eq!(m3.frame().size(), 7);
        assert!(m3.frame().is_s4());
        assert!(satisfies_su2(m3.frame()).unwrap());
        assert!(satisfies_uni(m3.frame()).unwrap());
        assert_eq!(m3.point(0b101), Some(4));
        assert_eq!(m3.point(0b1000), None);
        assert!(medvedev(7).is_err());
        assert!(medvedev(0).is_err());
    }

    #[test]
    fn star_property() {
        for k in 1..=5 {
            assert!(check_star_property(k).unwrap(), "k = {k}");
        }
        assert!(check_star_property_literal(2).unwrap());
        assert!(!check_star_property_literal(3).unwrap());
    }

    #[test]
    fn product_of_points() {
        let p = connected_product(&Frame::point(), &Frame::point()).unwrap();
        assert_eq!(p.frame().size(), 3);
        assert_eq!(p.frame().roots().unwrap().to_vec(), vec![p.pair(0, 0)]);
        assert!(p.frame().is_s4());
    }

    #[test]
    fn product_sizes_and_ends() {
        let c = Frame::chain(2);
        let p = connected_product(&c, &c).unwrap();
        assert_eq!(p.frame().size(), 8);
        let ends = p.frame().ends().unwrap();
        let expected = p
            .inj1_set(&c.ends().unwrap())
            .union(&p.inj2_set(&c.ends().unwrap()));
        assert_eq!(ends, expected);
        assert!(connected_product(&Frame::new(1, []).unwrap(), &c).is_err());
    }

    #[test]
    fn hereditary_maps() {
        let c = Frame::chain(2);
        let f = Frame::fork(2);
        let p = connected_product(&c, &f).unwrap();
        let id = p.identity_union_map();
        assert!(is_hereditary_union_function(&id).unwrap());
        assert!(is_normal(&id).unwrap());
        for (&(w, v), &u) in &id.map {
            assert!(strongly_unites(p.frame(), u, &[w, v]).unwrap());
        }

        let empty = HereditaryUnionMap {
            base: c.clone(),
            map: BTreeMap::new(),
        };
        assert!(is_hereditary_union_function(&empty).unwrap());

        let bad = HereditaryUnionMap {
            base: Frame::antichain(2),
            map: [((0, 0), 1)].into(),
        };
        assert!(!is_hereditary_union_function(&bad).unwrap());

        let open = HereditaryUnionMap {
            base: c.clone(),
            map: [((0, 0), 0)].into(),
        };
        assert!(!is_hereditary_union_function(&open).unwrap());
    }

    #[test]
    fn non_normal_map() {
        // both (0,0) and (1,1) mapped within a 2-chain, but f(0,0) = 1 does
        // not see f(1,1) = 0
        let c = Frame::chain(2);
        let h = HereditaryUnionMap {
            base: c,
            map: [((0, 0), 1), ((0, 1), 0), ((1, 0), 0), ((1, 1), 0)].into(),
        };
        assert!(!is_normal(&h).unwrap());
    }

    fn lem_model(var: &str) -> Model {
        Model::new(Frame::chain(2), [(var.to_string(), PointSet::singleton(1))].into()).unwrap()
    }

    #[test]
    fn dp_witness_on_two_chains() {
        let (a, b) = (parse("p | ~p").unwrap(), parse("q | ~q").unwrap());
        let w = dp_witness(&lem_model("p"), 0, &a, &lem_model("q"), 0, &b).unwrap();
        assert_eq!(w.product_model.frame().size(), 8);
        assert!(satisfies_su2(w.product_model.frame()).unwrap());
        assert!(!w.product_model.satisfies(w.root, &parse("(p | ~p) | (q | ~q)").unwrap()).unwrap());
    }

    #[test]
    fn dp_witness_with_bottom_and_shared_names() {
        let lem = parse("p | ~p").unwrap();
        let w = dp_witness(&lem_model("p"), 0, &Formula::Bottom, &lem_model("p"), 0, &lem).unwrap();
        assert!(!w.product_model.satisfies(w.root, &w.disjunction()).unwrap());
        let w = dp_witness(&lem_model("p"), 0, &lem, &lem_model("p"), 0, &lem).unwrap();
        assert!(!w.product_model.satisfies(w.root, &w.disjunction()).unwrap());
    }

    #[test]
    fn dp_witness_preconditions() {
        let lem = parse("p | ~p").unwrap();
        let m = lem_model("p");
        assert!(matches!(dp_witness(&m, 1, &lem, &m, 0, &lem), Err(Error::Precondition(_))));
        let taut = parse("p -> p").unwrap();
        assert!(matches!(dp_witness(&m, 0, &taut, &m, 0, &lem), Err(Error::Precondition(_))));
        let fork = Model::new(Frame::fork(3), Valuation::new()).unwrap();
        assert!(matches!(
            dp_witness(&fork, 0, &Formula::Bottom, &m, 0, &lem),
            Err(Error::Precondition(_))
        ));
    }
}
