//! Exhaustive and seeded property suites over small frames.
//!
//! Each suite returns a [`SuiteReport`]: how many cases were checked and a
//! description of every violation found (the first few are kept verbatim).

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    check_star_property, connected_product, dp_witness, is_hereditary_union_function, is_normal, medvedev,
    ConnectedProduct,
};
use crate::error::Result;
use crate::formula::{parse, random_formula, Axiom};
use crate::frame::{enumerate_s4_frames_up_to, random_s4_frame, Frame, DEFAULT_UPSET_CAP};
use crate::pointset::PointSet;
use crate::prover::{prove_ipc, Sequent};
use crate::semantics::{find_consequence_counterexample, frame_validates, Model, Valuation};
use crate::strong_union::{
    correspondence_check, satisfies_su2, satisfies_su_n, satisfies_uni, strongly_unites, unites, advance,
};

const KEPT: usize = 10;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checked: u64,
    pub violation_count: u64,
    /// The first few violations.
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Self::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < KEPT {
                self.violations.push(describe());
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} checks, {} violations", self.name, self.checked, self.violation_count)?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Every S4 frame satisfies (su₁).
pub fn lemma_su1(max_points: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("su1 universal");
    for f in enumerate_s4_frames_up_to(max_points)? {
        let ok = satisfies_su_n(&f, 1)?;
        r.check(ok, || format!("{f:?}"));
    }
    Ok(r)
}

/// Tuples over `0..n` of every length in `1..=max_len`, shortest first.
fn tuples(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut t = vec![0; len];
        loop {
            out.push(t.clone());
            if !advance(&mut t, n) {
                break;
            }
        }
    }
    out
}

/// If `u` strongly unites `z, a` and `z` strongly unites `xs`, then `u`
/// strongly unites `xs ++ [a]`; `xs` ranges over tuples of length ≤ 2.
pub fn lemma_union_of_unions(max_points: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("strong union of strong unions");
    for f in enumerate_s4_frames_up_to(max_points)? {
        let n = f.size();
        let lists = tuples(n, 2);
        for u in 0..n {
            for z in 0..n {
                for a in 0..n {
                    if !unites(&f, u, &[z, a]) {
                        continue;
                    }
                    for xs in &lists {
                        if !unites(&f, z, xs) {
                            continue;
                        }
                        let mut all = xs.clone();
                        all.push(a);
                        r.check(unites(&f, u, &all), || format!("{f:?} u={u} z={z} a={a} xs={xs:?}"));
                    }
                }
            }
        }
    }
    Ok(r)
}

/// (su₂) implies (su_n) for `n ≤ max_n`.
pub fn lemma_su2_to_su_n(max_points: usize, max_n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("su2 implies su_n");
    for f in enumerate_s4_frames_up_to(max_points)? {
        if !satisfies_su2(&f)? {
            continue;
        }
        for n in 1..=max_n {
            let ok = satisfies_su_n(&f, n)?;
            r.check(ok, || format!("{f:?} fails su{n}"));
        }
    }
    Ok(r)
}

/// (su₂) holds exactly when (su_n) holds for every `n ≤ max_n`.
pub fn corollary_su2_iff_su(max_points: usize, max_n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("su2 iff su");
    for f in enumerate_s4_frames_up_to(max_points)? {
        let two = satisfies_su2(&f)?;
        let mut all = true;
        for n in 1..=max_n {
            all &= satisfies_su_n(&f, n)?;
        }
        r.check(two == all, || format!("{f:?} su2={two} all={all}"));
    }
    Ok(r)
}

/// Validity of `su` against (su₂) on every frame with at most `max_points`
/// points.
pub fn correspondence_exhaustive(max_points: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("correspondence (exhaustive)");
    for f in enumerate_s4_frames_up_to(max_points)? {
        let rep = correspondence_check(&f)?;
        r.check(rep.agree, || format!("{f:?} validates={} su2={}", rep.validates_su, rep.satisfies_su2));
    }
    Ok(r)
}

/// Frame `i` has `sizes[i % sizes.len()]` points and seed `seed + i`.
pub fn random_frames(count: usize, sizes: &[usize], seed: u64) -> Result<Vec<Frame>> {
    (0..count)
        .map(|i| random_s4_frame(sizes[i % sizes.len()], seed.wrapping_add(i as u64)))
        .collect()
}

pub fn correspondence_random(count: usize, sizes: &[usize], seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("correspondence (random)");
    for (i, f) in random_frames(count, sizes, seed)?.iter().enumerate() {
        let rep = correspondence_check(f)?;
        r.check(rep.agree, || format!("sample {i}: {f:?}"));
    }
    Ok(r)
}

/// (su₂) frames validate kp and sa, and (Uni) coincides with validity of kp.
pub fn containments(max_points: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("kp/sa containment, uni iff kp");
    let (kp, sa) = (Axiom::Kp.formula(), Axiom::Sa.formula());
    for f in enumerate_s4_frames_up_to(max_points)? {
        let validates_kp = frame_validates(&f, &kp)?;
        if satisfies_su2(&f)? {
            let validates_sa = frame_validates(&f, &sa)?;
            r.check(validates_kp && validates_sa, || format!("{f:?} kp={validates_kp} sa={validates_sa}"));
        }
        let uni = satisfies_uni(&f)?;
        r.check(uni == validates_kp, || format!("{f:?} uni={uni} kp={validates_kp}"));
    }
    Ok(r)
}

/// Medvedev frames on `1..=max_k` elements satisfy (su₂) and (Uni), and
/// the ground sets have the union-splitting property.
pub fn medvedev_suite(max_k: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("Medvedev frames");
    for k in 1..=max_k {
        let m = medvedev(k)?;
        let su2 = satisfies_su2(m.frame())?;
        r.check(su2, || format!("k={k}: su2 fails"));
        let uni = satisfies_uni(m.frame())?;
        r.check(uni, || format!("k={k}: uni fails"));
        let star = check_star_property(k)?;
        r.check(star, || format!("k={k}: star property fails"));
    }
    Ok(r)
}

fn check_basic_product_facts(r: &mut SuiteReport, f1: &Frame, f2: &Frame, p: &ConnectedProduct) -> Result<()> {
    let f = p.frame();
    let tag = || format!("{f1:?} x {f2:?}");
    r.check(f.size() == f1.size() + f2.size() + f1.size() * f2.size(), || format!("{}: size", tag()));
    r.check(f.is_s4(), || format!("{}: not S4", tag()));

    // successors of embedded points stay inside their copy
    for w in 0..f1.size() {
        r.check(f.successors(p.inj1(w)) == p.inj1_set(&f1.successors(w)), || format!("{}: r_image 1:{w}", tag()));
    }
    for w in 0..f2.size() {
        r.check(f.successors(p.inj2(w)) == p.inj2_set(&f2.successors(w)), || format!("{}: r_image 2:{w}", tag()));
    }
    let copy1 = p.inj1_set(&f1.points());
    let copy2 = p.inj2_set(&f2.points());
    r.check(f.r_image(&copy1)? == copy1 && f.r_image(&copy2)? == copy2, || format!("{}: copies not generated", tag()));

    for a in 0..f1.size() {
        for b in 0..f2.size() {
            let w = p.pair(a, b);
            for v in 0..f1.size() {
                r.check(f.relates(w, p.inj1(v)) == f1.relates(a, v), || format!("{}: ({a},{b}) R 1:{v}", tag()));
            }
            for v in 0..f2.size() {
                r.check(f.relates(w, p.inj2(v)) == f2.relates(b, v), || format!("{}: ({a},{b}) R 2:{v}", tag()));
            }
            for c in 0..f1.size() {
                for d in 0..f2.size() {
                    let expect = f1.relates(a, c) && f2.relates(b, d);
                    r.check(f.relates(w, p.pair(c, d)) == expect, || format!("{}: pair order", tag()));
                }
            }
            let ends = p.inj1_set(&f1.end_of(a)?).union(&p.inj2_set(&f2.end_of(b)?));
            r.check(f.end_of(w)? == ends, || format!("{}: end of ({a},{b})", tag()));
        }
    }
    // a point seeing into both copies is a pair of points below them
    for w in 0..f.size() {
        for v1 in 0..f1.size() {
            for v2 in 0..f2.size() {
                if f.relates(w, p.inj1(v1)) && f.relates(w, p.inj2(v2)) {
                    let ok = p.unpair(w).is_some_and(|(a, b)| f1.relates(a, v1) && f2.relates(b, v2));
                    r.check(ok, || format!("{}: {} sees 1:{v1} and 2:{v2}", tag(), p.describe(w)));
                }
            }
        }
    }
    for r1 in &f1.roots()? {
        for r2 in &f2.roots()? {
            r.check(f.roots()?.contains(p.pair(r1, r2)), || format!("{}: ({r1},{r2}) not a root", tag()));
        }
    }
    let ends = p.inj1_set(&f1.ends()?).union(&p.inj2_set(&f2.ends()?));
    r.check(f.ends()? == ends, || format!("{}: ends", tag()));
    for w in 0..f1.size() {
        r.check(f.end_of(p.inj1(w))? == p.inj1_set(&f1.end_of(w)?), || format!("{}: end of 1:{w}", tag()));
    }
    for w in 0..f2.size() {
        r.check(f.end_of(p.inj2(w))? == p.inj2_set(&f2.end_of(w)?), || format!("{}: end of 2:{w}", tag()));
    }
    Ok(())
}

/// Strong union of 2- and 3-tuples inside one component is the same in the
/// component and in the product.
fn check_union_embedding(r: &mut SuiteReport, fi: &Frame, p: &ConnectedProduct, embed: impl Fn(usize) -> usize) {
    let n = fi.size();
    for u in 0..n {
        for xs in tuples(n, 3).into_iter().filter(|t| t.len() >= 2) {
            let inside = unites(fi, u, &xs);
            let mapped: Vec<usize> = xs.iter().map(|&x| embed(x)).collect();
            let outside = unites(p.frame(), embed(u), &mapped);
            r.check(inside == outside, || format!("{fi:?}: u={u} xs={xs:?} component={inside} product={outside}"));
        }
    }
}

/// Transfer of strong unions to pair points: whenever `u1` unites `as ++ xs`
/// and `u2` unites `ys ++ bs`, the pair `(u1, u2)` unites
/// `as ++ (xs, ys) ++ bs`. Lists are kept to at most two entries per side.
fn check_pair_transfer(r: &mut SuiteReport, f1: &Frame, f2: &Frame, p: &ConnectedProduct) {
    let (n1, n2) = (f1.size(), f2.size());
    let mut sides1: Vec<Vec<usize>> = vec![vec![]];
    sides1.extend(tuples(n1, 2));
    let mut sides2: Vec<Vec<usize>> = vec![vec![]];
    sides2.extend(tuples(n2, 2));
    for l in 0..=1usize {
        let pairs: Vec<(usize, usize)> = if l == 0 {
            vec![]
        } else {
            (0..n1).flat_map(|x| (0..n2).map(move |y| (x, y))).collect()
        };
        let pair_lists: Vec<Vec<(usize, usize)>> = if l == 0 { vec![vec![]] } else { pairs.iter().map(|&q| vec![q]).collect() };
        for pl in &pair_lists {
            for a in sides1.iter().filter(|a| a.len() + l >= 1 && a.len() + l <= 2) {
                for b in sides2.iter().filter(|b| b.len() + l >= 1 && b.len() + l <= 2) {
                    let left: Vec<usize> = a.iter().copied().chain(pl.iter().map(|q| q.0)).collect();
                    let right: Vec<usize> = b.iter().copied().chain(pl.iter().map(|q| q.1)).collect();
                    let merged: Vec<usize> = a
                        .iter()
                        .map(|&x| p.inj1(x))
                        .chain(pl.iter().map(|&(x, y)| p.pair(x, y)))
                        .chain(b.iter().map(|&y| p.inj2(y)))
                        .collect();
                    for u1 in 0..n1 {
                        if !unites(f1, u1, &left) {
                            continue;
                        }
                        for u2 in 0..n2 {
                            if !unites(f2, u2, &right) {
                                continue;
                            }
                            let ok = unites(p.frame(), p.pair(u1, u2), &merged);
                            r.check(ok, || format!("{f1:?} x {f2:?}: ({u1},{u2}) a={a:?} pairs={pl:?} b={b:?}"));
                        }
                    }
                }
            }
        }
    }
}

/// Connected products of all pairs of frames with at most `max_points`
/// points: structural facts for every pair; the identity union map is
/// hereditary and normal and yields strong unions; products of (su_m)
/// frames for all `m ≤ n` satisfy (su_n), `n ≤ max_n`.
pub fn product_suite(max_points: usize, max_n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("connected products");
    let frames: Vec<Frame> = enumerate_s4_frames_up_to(max_points)?.collect();
    let mut su_levels = Vec::new();
    for f in &frames {
        let mut level = 0;
        while level < max_n && satisfies_su_n(f, level + 1)? {
            level += 1;
        }
        su_levels.push(level);
    }
    for (i, f1) in frames.iter().enumerate() {
        for (j, f2) in frames.iter().enumerate() {
            let p = connected_product(f1, f2)?;
            check_basic_product_facts(&mut r, f1, f2, &p)?;
            check_union_embedding(&mut r, f1, &p, |x| p.inj1(x));
            check_union_embedding(&mut r, f2, &p, |x| p.inj2(x));

            let h = p.identity_union_map();
            r.check(is_hereditary_union_function(&h)?, || format!("{f1:?} x {f2:?}: identity not hereditary"));
            r.check(is_normal(&h)?, || format!("{f1:?} x {f2:?}: identity not normal"));
            for (&(w, v), &u) in &h.map {
                r.check(strongly_unites(p.frame(), u, &[w, v])?, || format!("{f1:?} x {f2:?}: f({w},{v})"));
            }
            check_pair_transfer(&mut r, f1, f2, &p);

            let both = su_levels[i].min(su_levels[j]);
            for n in 1..=both {
                let ok = satisfies_su_n(p.frame(), n)?;
                r.check(ok, || format!("{f1:?} x {f2:?}: product fails su{n}"));
            }
        }
    }
    Ok(r)
}

/// The product of two 2-chains refuting `p | ~p` and `q | ~q`.
pub fn dp_example() -> Result<crate::constructions::DpWitness> {
    let chain = |v: &str| {
        let val: Valuation = [(v.to_string(), PointSet::singleton(1))].into();
        Model::new(Frame::chain(2), val)
    };
    dp_witness(&chain("p")?, 0, &parse("p | ~p")?, &chain("q")?, 0, &parse("q | ~q")?)
}

/// Canonical relation encoding: the least adjacency bitmask over all
/// relabellings.
fn canonical_code(f: &Frame) -> u64 {
    let n = f.size();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    permute(&mut perm, 0, &mut |p| {
        let mut code = 0u64;
        for a in 0..n {
            for b in 0..n {
                if f.relates(p[a], p[b]) {
                    code |= 1 << (a * n + b);
                }
            }
        }
        best = best.min(code);
    });
    best
}

fn permute(p: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// One representative per isomorphism class of rooted S4 frames with at
/// most `max_points` points (at most 6). A refutation at a point lives in
/// the subframe it generates, which is rooted, so these frames find every
/// refutation that the full enumeration finds.
pub fn rooted_frame_classes(max_points: usize) -> Result<Vec<Frame>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in enumerate_s4_frames_up_to(max_points.min(6))? {
        if f.roots()?.is_empty() {
            continue;
        }
        if seen.insert((f.size(), canonical_code(&f))) {
            out.push(f);
        }
    }
    Ok(out)
}

/// A model on one of `frames` where the premises hold and the conclusion
/// fails at some point.
pub fn semantic_refutation(frames: &[Frame], s: &Sequent) -> Result<Option<(Model, usize)>> {
    for f in frames {
        if let Some(cv) = find_consequence_counterexample(f, &s.premises, &s.conclusion, DEFAULT_UPSET_CAP)? {
            return Ok(Some((Model::new(f.clone(), cv.valuation)?, cv.point)));
        }
    }
    Ok(None)
}

/// Random sequents: 0 to 2 premises and a conclusion over `p, q, r`.
pub fn random_sequents(count: usize, seed: u64) -> Vec<Sequent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rand::Rng::gen_range(&mut rng, 0..3);
            let premises = (0..k).map(|_| random_formula(&mut rng, &["p", "q", "r"], 3)).collect();
            Sequent::new(premises, random_formula(&mut rng, &["p", "q", "r"], 3))
        })
        .collect()
}

/// Outcome of comparing the prover with finite-frame refutation.
#[derive(Clone, Debug, Default)]
pub struct OracleReport {
    pub suite: SuiteReport,
    pub provable: u64,
    pub refuted: u64,
    /// Unprovable, yet no refutation on the frames searched.
    pub unresolved: u64,
}

/// Sound direction: a provable sequent has no refutation. Also checks each
/// certificate and counts unprovable sequents left without a refutation.
pub fn ipc_oracle(sequents: &[Sequent], frames: &[Frame]) -> Result<OracleReport> {
    let mut out = OracleReport {
        suite: SuiteReport::new("ipc vs finite frames"),
        ..OracleReport::default()
    };
    for s in sequents {
        let proof = prove_ipc(s);
        let refutation = semantic_refutation(frames, s)?;
        if proof.is_provable() {
            out.provable += 1;
            let cert_ok = proof.certificate.as_ref().is_some_and(|d| d.proves(s));
            out.suite.check(cert_ok, || format!("bad certificate for {s}"));
        }
        if refutation.is_some() {
            out.refuted += 1;
        } else if !proof.is_provable() {
            out.unresolved += 1;
        }
        out.suite.check(!(proof.is_provable() && refutation.is_some()), || format!("provable yet refuted: {s}"));
    }
    Ok(out)
}

/// Parses `expected<TAB>sequent` lines (`expected` is `thm` or `non`);
/// blank lines and `#` comments are skipped.
pub fn parse_golden(text: &str) -> Result<Vec<(bool, Sequent)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let expected = match tag {
            "thm" => true,
            "non" => false,
            _ => {
                return Err(crate::error::Error::Format {
                    path: "<golden>".into(),
                    line: i + 1,
                    message: format!("expected `thm` or `non`, found `{tag}`"),
                })
            }
        };
        out.push((expected, rest.trim().parse()?));
    }
    Ok(out)
}

/// Every golden entry must get the expected verdict, and `frames` must
/// refute exactly the non-theorems.
pub fn ipc_golden(entries: &[(bool, Sequent)], frames: &[Frame]) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("ipc golden corpus");
    for (expected, s) in entries {
        let got = prove_ipc(s).is_provable();
        r.check(got == *expected, || format!("{s}: expected {expected}, got {got}"));
        let refuted = semantic_refutation(frames, s)?.is_some();
        r.check(refuted != *expected, || format!("{s}: refuted={refuted} on the frames given"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(lemma_su1(3).unwrap().passed());
        assert!(lemma_union_of_unions(3).unwrap().passed());
        assert!(lemma_su2_to_su_n(3, 3).unwrap().passed());
        assert!(corollary_su2_iff_su(3, 3).unwrap().passed());
        assert!(correspondence_exhaustive(3).unwrap().passed());
        assert!(containments(3).unwrap().passed());
        assert!(medvedev_suite(3).unwrap().passed());
        let p = product_suite(2, 2).unwrap();
        assert!(p.passed(), "{p}");
    }

    #[test]
    fn rooted_classes() {
        let counts: Vec<usize> = (1..=4).map(|n| rooted_frame_classes(n).unwrap().len()).collect();
        // rooted preorders up to isomorphism: 1, 2, 5, 14 at each size
        assert_eq!(counts, [1, 3, 8, 22]);
    }

    #[test]
    fn report_keeps_first_violations() {
        let mut r = SuiteReport::new("t");
        for i in 0..20 {
            r.check(i % 2 == 0, || i.to_string());
        }
        assert_eq!(r.checked, 20);
        assert_eq!(r.violation_count, 10);
        assert_eq!(r.violations.len(), KEPT);
        assert!(!r.passed());
    }

    #[test]
    fn golden_parsing() {
        let g = parse_golden("# c\nthm |- p -> p\nnon p | ~p\n").unwrap();
        assert_eq!(g.len(), 2);
        assert!(g[0].0 && !g[1].0);
        assert!(parse_golden("maybe p").is_err());
    }

    #[test]
    fn dp_example_is_certified() {
        let w = dp_example().unwrap();
        assert_eq!(w.product_model.frame().size(), 8);
    }
}
