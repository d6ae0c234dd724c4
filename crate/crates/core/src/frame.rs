//! Finite Kripke frames and the set operators used throughout the crate.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pointset::{PointSet, MAX_POINTS};

pub const DEFAULT_UPSET_CAP: usize = 1 << 20;
pub const DEFAULT_ENUMERATION_CAP: usize = 5;

/// A finite frame on points `0..size`. The relation is stored both as
/// successor and predecessor rows.
#[derive(Clone)]
pub struct Frame {
    size: usize,
    succ: Vec<PointSet>,
    pred: Vec<PointSet>,
    // diamond(r_image({x})): points sharing a successor with x
    meets: Vec<PointSet>,
    s4: bool,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.succ == other.succ
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("size", &self.size)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Frame {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(size: usize, edges: I) -> Result<Frame> {
        if size > MAX_POINTS {
            return Err(Error::FrameTooLarge(size));
        }
        let mut succ = vec![PointSet::EMPTY; size];
        for (a, b) in edges {
            for p in [a, b] {
                if p >= size {
                    return Err(Error::PointOutOfRange { point: p, size });
                }
            }
            succ[a].insert(b);
        }
        Ok(Frame::from_rows(succ))
    }

    /// Builds a frame from successor rows; row `i` lists the points `i` sees.
    pub fn from_successors(succ: Vec<PointSet>) -> Result<Frame> {
        let size = succ.len();
        if size > MAX_POINTS {
            return Err(Error::FrameTooLarge(size));
        }
        let all = PointSet::full(size);
        for row in &succ {
            if let Some(p) = row.difference(&all).first() {
                return Err(Error::PointOutOfRange { point: p, size });
            }
        }
        Ok(Frame::from_rows(succ))
    }

    fn from_rows(succ: Vec<PointSet>) -> Frame {
        let size = succ.len();
        let mut pred = vec![PointSet::EMPTY; size];
        for (a, row) in succ.iter().enumerate() {
            for b in row {
                pred[b].insert(a);
            }
        }
        let reflexive = (0..size).all(|w| succ[w].contains(w));
        let transitive = (0..size).all(|w| succ[w].iter().all(|v| succ[v].is_subset(&succ[w])));
        let meets = (0..size)
            .map(|x| {
                (0..size)
                    .filter(|&w| succ[w].intersects(&succ[x]))
                    .collect()
            })
            .collect();
        Frame {
            size,
            succ,
            pred,
            meets,
            s4: reflexive && transitive,
        }
    }

    /// The one-point reflexive frame.
    pub fn point() -> Frame {
        Frame::chain(1)
    }

    /// `0 R 1 R .. R n-1`, reflexive and transitive.
    pub fn chain(n: usize) -> Frame {
        Frame::new(n, (0..n).flat_map(|i| (i..n).map(move |j| (i, j)))).unwrap()
    }

    /// `n` reflexive points, no other edges.
    pub fn antichain(n: usize) -> Frame {
        Frame::new(n, (0..n).map(|i| (i, i))).unwrap()
    }

    /// A root `0` below `n` pairwise unrelated reflexive points.
    pub fn fork(n: usize) -> Frame {
        let edges = (0..=n).map(|i| (i, i)).chain((1..=n).map(|i| (0, i)));
        Frame::new(n + 1, edges).unwrap()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn points(&self) -> PointSet {
        PointSet::full(self.size)
    }

    pub fn relates(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    /// `r_image({p})`.
    pub fn successors(&self, p: usize) -> PointSet {
        self.succ[p]
    }

    pub fn predecessors(&self, p: usize) -> PointSet {
        self.pred[p]
    }

    /// Points sharing an R-successor with `p`.
    pub fn meets(&self, p: usize) -> PointSet {
        self.meets[p]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
    }

    pub fn check_point(&self, p: usize) -> Result<()> {
        if p < self.size {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                point: p,
                size: self.size,
            })
        }
    }

    pub fn check_set(&self, x: &PointSet) -> Result<()> {
        match x.difference(&self.points()).first() {
            None => Ok(()),
            Some(p) => Err(Error::PointOutOfRange {
                point: p,
                size: self.size,
            }),
        }
    }

    pub fn require_s4(&self) -> Result<()> {
        if self.s4 {
            Ok(())
        } else {
            Err(Error::NotS4)
        }
    }

    pub fn is_s4(&self) -> bool {
        self.s4
    }

    /// Least reflexive and transitive relation containing this one.
    pub fn reflexive_transitive_closure(&self) -> Frame {
        let mut succ = self.succ.clone();
        for (w, row) in succ.iter_mut().enumerate() {
            row.insert(w);
        }
        // Warshall on bit rows.
        for k in 0..self.size {
            let via = succ[k];
            for row in succ.iter_mut() {
                if row.contains(k) {
                    *row = row.union(&via);
                }
            }
        }
        Frame::from_rows(succ)
    }

    /// `{w | ∃x ∈ X, x R w}`.
    pub fn r_image(&self, x: &PointSet) -> Result<PointSet> {
        self.check_set(x)?;
        Ok(self.r_image_unchecked(x))
    }

    pub(crate) fn r_image_unchecked(&self, x: &PointSet) -> PointSet {
        x.iter().fold(PointSet::EMPTY, |acc, p| acc.union(&self.succ[p]))
    }

    /// `{w | ∃x ∈ X, w R x}`.
    pub fn diamond(&self, x: &PointSet) -> Result<PointSet> {
        self.check_set(x)?;
        Ok(self.diamond_unchecked(x))
    }

    pub(crate) fn diamond_unchecked(&self, x: &PointSet) -> PointSet {
        x.iter().fold(PointSet::EMPTY, |acc, p| acc.union(&self.pred[p]))
    }

    /// `{w | ∀v, w R v ⇒ v ∈ X}`.
    pub fn box_(&self, x: &PointSet) -> Result<PointSet> {
        self.check_set(x)?;
        Ok(self.box_unchecked(x))
    }

    pub(crate) fn box_unchecked(&self, x: &PointSet) -> PointSet {
        (0..self.size).filter(|&w| self.succ[w].is_subset(x)).collect()
    }

    /// `W ∖ X`.
    pub fn complement(&self, x: &PointSet) -> Result<PointSet> {
        self.check_set(x)?;
        Ok(self.points().difference(x))
    }

    /// `box(complement(X))`: the points none of whose successors lie in `X`.
    /// Always an upset on an S4 frame, whatever `X` is.
    pub fn heyting_neg(&self, x: &PointSet) -> Result<PointSet> {
        self.require_s4()?;
        self.check_set(x)?;
        Ok((0..self.size).filter(|&w| !self.succ[w].intersects(x)).collect())
    }

    pub fn is_upset(&self, x: &PointSet) -> Result<bool> {
        self.require_s4()?;
        self.check_set(x)?;
        Ok(self.is_upset_unchecked(x))
    }

    pub(crate) fn is_upset_unchecked(&self, x: &PointSet) -> bool {
        x.iter().all(|w| self.succ[w].is_subset(x))
    }

    /// All upsets with the default cap.
    pub fn upsets(&self) -> Result<Vec<PointSet>> {
        self.upsets_capped(DEFAULT_UPSET_CAP)
    }

    /// All upsets, `∅` first. Points are decided in ascending order, with
    /// "exclude" explored before "include".
    pub fn upsets_capped(&self, cap: usize) -> Result<Vec<PointSet>> {
        self.require_s4()?;
        let mut out = Vec::new();
        self.collect_upsets(0, PointSet::EMPTY, PointSet::EMPTY, cap, &mut out)?;
        Ok(out)
    }

    fn collect_upsets(
        &self,
        next: usize,
        included: PointSet,
        excluded: PointSet,
        cap: usize,
        out: &mut Vec<PointSet>,
    ) -> Result<()> {
        let mut p = next;
        while p < self.size && (included.contains(p) || excluded.contains(p)) {
            p += 1;
        }
        if p == self.size {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "upset count",
                    count: out.len() as u128 + 1,
                    cap: cap as u128,
                });
            }
            out.push(included);
            return Ok(());
        }
        self.collect_upsets(p + 1, included, excluded.union(&self.pred[p]), cap, out)?;
        self.collect_upsets(p + 1, included.union(&self.succ[p]), excluded, cap, out)
    }

    /// Points that see every point.
    pub fn roots(&self) -> Result<PointSet> {
        self.require_s4()?;
        let all = self.points();
        Ok((0..self.size).filter(|&w| self.succ[w] == all).collect())
    }

    /// Maximal points of the induced preorder: every successor sees them back.
    pub fn ends(&self) -> Result<PointSet> {
        self.require_s4()?;
        Ok((0..self.size)
            .filter(|&w| self.succ[w].is_subset(&self.pred[w]))
            .collect())
    }

    /// Ends reachable from `w`.
    pub fn end_of(&self, w: usize) -> Result<PointSet> {
        self.check_point(w)?;
        Ok(self.ends()?.intersection(&self.succ[w]))
    }

    /// Restriction to `r_image({w})`. The returned vector maps each new point
    /// to the original point it came from, in ascending order.
    pub fn generated_subframe(&self, w: usize) -> Result<(Frame, Vec<usize>)> {
        self.require_s4()?;
        self.check_point(w)?;
        Ok(self.restrict(&self.succ[w]))
    }

    /// Restriction of the relation to `keep`, renumbered in ascending order.
    pub fn restrict(&self, keep: &PointSet) -> (Frame, Vec<usize>) {
        let embedding: Vec<usize> = keep.iter().collect();
        let mut index = vec![usize::MAX; self.size];
        for (new, &old) in embedding.iter().enumerate() {
            index[old] = new;
        }
        let succ = embedding
            .iter()
            .map(|&old| {
                self.succ[old]
                    .intersection(keep)
                    .iter()
                    .map(|v| index[v])
                    .collect()
            })
            .collect();
        (Frame::from_rows(succ), embedding)
    }
}

/// Every reflexive-transitive relation on `n` labeled points, exactly once.
pub fn enumerate_s4_frames(n: usize) -> Result<S4Frames> {
    enumerate_s4_frames_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_s4_frames_capped(n: usize, cap: usize) -> Result<S4Frames> {
    if n == 0 {
        return Err(Error::InvalidArgument("frames need at least one point".into()));
    }
    if n > cap || n > 8 {
        return Err(Error::CapExceeded {
            what: "enumeration point count",
            count: n as u128,
            cap: cap.min(8) as u128,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    Ok(S4Frames {
        n,
        limit: 1u64 << pairs.len(),
        pairs,
        mask: 0,
    })
}

/// All S4 frames with `1..=max_points` points, smaller frames first.
pub fn enumerate_s4_frames_up_to(max_points: usize) -> Result<impl Iterator<Item = Frame>> {
    let mut all = Vec::new();
    for n in 1..=max_points {
        all.push(enumerate_s4_frames(n)?);
    }
    Ok(all.into_iter().flatten())
}

/// Stream of labeled S4 frames; off-diagonal edge sets are visited in
/// ascending bitmask order.
pub struct S4Frames {
    n: usize,
    pairs: Vec<(usize, usize)>,
    mask: u64,
    limit: u64,
}

impl Iterator for S4Frames {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        while self.mask < self.limit {
            let mask = self.mask;
            self.mask += 1;
            let mut rows = [0u8; 8];
            for (i, r) in rows.iter_mut().enumerate().take(self.n) {
                *r = 1 << i;
            }
            for (bit, &(a, b)) in self.pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    rows[a] |= 1 << b;
                }
            }
            let transitive = (0..self.n).all(|a| {
                (0..self.n)
                    .filter(|&b| rows[a] >> b & 1 == 1)
                    .all(|b| rows[b] & !rows[a] == 0)
            });
            if transitive {
                let succ = rows[..self.n]
                    .iter()
                    .map(|&r| PointSet::from_mask(r as u64))
                    .collect();
                return Some(Frame::from_rows(succ));
            }
        }
        None
    }
}

/// A random S4 frame, deterministic in `(n, seed)`.
///
/// Points get a random rank; forward edges are drawn with a per-frame density,
/// backward edges rarely, and the result is closed reflexively and
/// transitively. This yields a mix of posets and frames with clusters.
pub fn random_s4_frame(n: usize, seed: u64) -> Result<Frame> {
    if n == 0 {
        return Err(Error::InvalidArgument("frames need at least one point".into()));
    }
    if n > MAX_POINTS {
        return Err(Error::FrameTooLarge(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rank: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        rank.swap(i, rng.gen_range(0..=i));
    }
    let density: f64 = rng.gen_range(0.1..0.6);
    let back: f64 = if rng.gen_bool(0.3) { 0.08 } else { 0.0 };
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let p = if rank[a] < rank[b] { density } else { back };
            if p > 0.0 && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Ok(Frame::new(n, edges)?.reflexive_transitive_closure())
}
