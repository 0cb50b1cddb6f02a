//! Constructs realizing trees.
//!
//! A satisfying triple system is reduced one ground element at a time: an
//! element covered once is dropped together with its triple; an element `x`
//! covered twice has its two triples merged into one triple on the remaining
//! elements (two shapes, depending on whether the triples share a second
//! element). The reduced family stays satisfying, so a tree for it exists by
//! induction; re-attaching `x` by subdividing a pendant edge places the two
//! freed medians on a brand-new midpoint and on the merge triple's median,
//! keeping the median map injective.

use serde::Serialize;
use std::collections::HashSet;

use crate::checker::{
    check_partition_condition, check_poly, fan_expansion, CheckMode, CheckOutcome,
    DEFAULT_BRUTE_LIMIT,
};
use crate::error::{Error, Result};
use crate::matching::MatchState;
use crate::median::{fan_medians, median_set, verify_partition};
use crate::set_system::{Element, SetSystem};
use crate::tree::{BinaryXTree, Tree};

/// Which merge triple a two-covered reduction keeps when the two triples at
/// `x` share no second element: the first triple's pair plus `a_alt`, or the
/// second triple's pair plus `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeBranch {
    KeepFirstPair,
    KeepSecondPair,
}

/// One reduction applied to a triple system. The two triples containing `x`
/// are named in lexicographic order: `{x, a, b}` before `{x, a_alt, b_alt}`
/// (in the shared-element case `a` is the shared element).
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ReductionKind {
    /// `x` lies in exactly one triple `{x, a, b}`; drop the triple.
    Degree1 { x: Element, a: Element, b: Element },
    /// `x` lies in `{x, a, b}` and `{x, a, b_alt}`; replace both by
    /// `{a, b, b_alt}`.
    CaseI {
        x: Element,
        a: Element,
        b: Element,
        b_alt: Element,
    },
    /// `x` lies in `{x, a, b}` and `{x, a_alt, b_alt}` with disjoint pairs;
    /// replace both by `{a, a_alt, b}` or `{a, a_alt, b_alt}`.
    CaseII {
        x: Element,
        a: Element,
        b: Element,
        a_alt: Element,
        b_alt: Element,
        branch: MergeBranch,
    },
}

impl ReductionKind {
    /// The element removed from the ground set.
    pub fn removed(&self) -> &Element {
        match self {
            ReductionKind::Degree1 { x, .. }
            | ReductionKind::CaseI { x, .. }
            | ReductionKind::CaseII { x, .. } => x,
        }
    }
}

/// A reduction step together with the system it produces (ground set shrunk
/// by the pivot element).
#[derive(Clone, Debug, Serialize)]
pub struct ReductionStep {
    #[serde(flatten)]
    pub kind: ReductionKind,
    pub reduced: SetSystem,
}

#[derive(Clone, Copy, Debug)]
enum StepIds {
    Degree1 { x: u32, a: u32, b: u32 },
    CaseI { x: u32, a: u32, b: u32, b_alt: u32 },
    CaseII {
        x: u32,
        a: u32,
        b: u32,
        a_alt: u32,
        b_alt: u32,
        branch: MergeBranch,
    },
}

/// Id-level reduction engine over a base element table. Ground elements that
/// lose all coverage stay in the ground set and surface again in the base
/// caterpillar, so nothing ever needs re-attaching.
struct Reducer<'a> {
    base: &'a SetSystem,
    alive_elem: Vec<bool>,
    ground_size: usize,
    triples: Vec<[u32; 3]>,
    alive_set: Vec<bool>,
    live_sets: usize,
    coverage: Vec<u32>,
    present: HashSet<[u32; 3]>,
}

impl<'a> Reducer<'a> {
    fn new(base: &'a SetSystem) -> Reducer<'a> {
        let triples: Vec<[u32; 3]> = base
            .sets()
            .iter()
            .map(|s| [s[0], s[1], s[2]])
            .collect();
        let mut coverage = vec![0u32; base.element_count()];
        let mut present = HashSet::with_capacity(triples.len());
        for t in &triples {
            for &e in t {
                coverage[e as usize] += 1;
            }
            present.insert(*t);
        }
        Reducer {
            base,
            alive_elem: vec![true; base.element_count()],
            ground_size: base.element_count(),
            alive_set: vec![true; triples.len()],
            live_sets: triples.len(),
            triples,
            coverage,
            present,
        }
    }

    fn remove_set(&mut self, idx: usize) {
        debug_assert!(self.alive_set[idx]);
        self.alive_set[idx] = false;
        self.live_sets -= 1;
        let t = self.triples[idx];
        self.present.remove(&t);
        for &e in &t {
            self.coverage[e as usize] -= 1;
        }
    }

    fn add_set(&mut self, t: [u32; 3]) -> Result<()> {
        if !self.present.insert(t) {
            return Err(Error::ReductionInvariant(
                "merge triple already present in the family".into(),
            ));
        }
        self.triples.push(t);
        self.alive_set.push(true);
        self.live_sets += 1;
        for &e in &t {
            self.coverage[e as usize] += 1;
        }
        Ok(())
    }

    fn remove_element(&mut self, x: u32) {
        debug_assert!(self.alive_elem[x as usize]);
        debug_assert_eq!(self.coverage[x as usize], 0);
        self.alive_elem[x as usize] = false;
        self.ground_size -= 1;
    }

    fn sets_containing(&self, x: u32) -> Vec<usize> {
        (0..self.triples.len())
            .filter(|&i| self.alive_set[i] && self.triples[i].contains(&x))
            .collect()
    }

    /// Smallest element covered once, else smallest covered twice.
    fn find_pivot(&self) -> Result<u32> {
        for target in [1u32, 2] {
            for e in 0..self.coverage.len() {
                if self.alive_elem[e] && self.coverage[e] == target {
                    return Ok(e as u32);
                }
            }
        }
        Err(Error::NoReduction)
    }

    fn reduce_once(&mut self) -> Result<StepIds> {
        let x = self.find_pivot()?;
        self.step_at(x)
    }

    fn step_at(&mut self, x: u32) -> Result<StepIds> {
        match self.coverage[x as usize] {
            1 => {
                let idx = self.sets_containing(x)[0];
                let [a, b] = two_others(self.triples[idx], x);
                self.remove_set(idx);
                self.remove_element(x);
                Ok(StepIds::Degree1 { x, a, b })
            }
            2 => {
                let found = self.sets_containing(x);
                let (mut i1, mut i2) = (found[0], found[1]);
                if self.triples[i2] < self.triples[i1] {
                    std::mem::swap(&mut i1, &mut i2);
                }
                let p1 = two_others(self.triples[i1], x);
                let p2 = two_others(self.triples[i2], x);
                let shared: Vec<u32> = p1.iter().filter(|e| p2.contains(e)).copied().collect();
                match shared.len() {
                    1 => {
                        let a = shared[0];
                        let b = p1.iter().copied().find(|&e| e != a).expect("other");
                        let b_alt = p2.iter().copied().find(|&e| e != a).expect("other");
                        let merge = sorted3([a, b, b_alt]);
                        self.remove_set(i1);
                        self.remove_set(i2);
                        self.add_set(merge)?;
                        self.remove_element(x);
                        Ok(StepIds::CaseI { x, a, b, b_alt })
                    }
                    0 => {
                        let [a, b] = p1;
                        let [a_alt, b_alt] = p2;
                        let m1 = sorted3([a, a_alt, b]);
                        let m2 = sorted3([a, a_alt, b_alt]);
                        let use_first =
                            !self.present.contains(&m1) && self.extension_ok(&[i1, i2], m1);
                        let (branch, merge) = if use_first {
                            (MergeBranch::KeepFirstPair, m1)
                        } else {
                            if !self.extension_ok(&[i1, i2], m2) {
                                return Err(Error::ReductionInvariant(
                                    "neither merge branch keeps the condition".into(),
                                ));
                            }
                            (MergeBranch::KeepSecondPair, m2)
                        };
                        self.remove_set(i1);
                        self.remove_set(i2);
                        self.add_set(merge)?;
                        self.remove_element(x);
                        Ok(StepIds::CaseII {
                            x,
                            a,
                            b,
                            a_alt,
                            b_alt,
                            branch,
                        })
                    }
                    _ => Err(Error::ReductionInvariant(
                        "two distinct triples share both remaining elements".into(),
                    )),
                }
            }
            k => Err(Error::ReductionInvariant(format!(
                "pivot {:?} has coverage {k}, need 1 or 2",
                self.base.element(x).as_str()
            ))),
        }
    }

    /// Does the family staying after dropping `exclude`, plus the triple
    /// `merge`, still satisfy the condition? Given that the remaining family
    /// satisfies it, any violating subfamily must contain `merge` and cover
    /// all three of its elements, so Hall's test after deleting the first
    /// two merge elements is decisive.
    fn extension_ok(&self, exclude: &[usize], merge: [u32; 3]) -> bool {
        let mut sets: Vec<Vec<u32>> = Vec::with_capacity(self.live_sets - exclude.len() + 1);
        for i in 0..self.triples.len() {
            if self.alive_set[i] && !exclude.contains(&i) {
                sets.push(self.triples[i].to_vec());
            }
        }
        sets.push(merge.to_vec());

        let m = sets.len();
        let mut st = MatchState::new(m, self.base.element_count());
        for u in 0..m {
            if !st.augment(&sets, u as u32, None) {
                return false;
            }
        }
        let banned = [merge[0], merge[1]];
        let mut pending = Vec::new();
        if let Some(u) = st.unmatch_right(banned[0]) {
            pending.push(u);
        }
        if let Some(u) = st.unmatch_right(banned[1]) {
            pending.push(u);
        }
        pending
            .into_iter()
            .all(|u| st.augment(&sets, u, Some(banned)))
    }

    fn alive_elements(&self) -> Vec<Element> {
        (0..self.alive_elem.len())
            .filter(|&e| self.alive_elem[e])
            .map(|e| self.base.element(e as u32).clone())
            .collect()
    }

    fn materialize(&self) -> SetSystem {
        let ground = self.alive_elements();
        let sets: Vec<Vec<Element>> = (0..self.triples.len())
            .filter(|&i| self.alive_set[i])
            .map(|i| {
                self.triples[i]
                    .iter()
                    .map(|&e| self.base.element(e).clone())
                    .collect()
            })
            .collect();
        SetSystem::new(ground, sets).expect("reduced system is valid")
    }

    fn kind_of(&self, step: StepIds) -> ReductionKind {
        let el = |id: u32| self.base.element(id).clone();
        match step {
            StepIds::Degree1 { x, a, b } => ReductionKind::Degree1 {
                x: el(x),
                a: el(a),
                b: el(b),
            },
            StepIds::CaseI { x, a, b, b_alt } => ReductionKind::CaseI {
                x: el(x),
                a: el(a),
                b: el(b),
                b_alt: el(b_alt),
            },
            StepIds::CaseII {
                x,
                a,
                b,
                a_alt,
                b_alt,
                branch,
            } => ReductionKind::CaseII {
                x: el(x),
                a: el(a),
                b: el(b),
                a_alt: el(a_alt),
                b_alt: el(b_alt),
                branch,
            },
        }
    }
}

fn two_others(t: [u32; 3], x: u32) -> [u32; 2] {
    let mut out = [0u32; 2];
    let mut k = 0;
    for e in t {
        if e != x {
            out[k] = e;
            k += 1;
        }
    }
    debug_assert_eq!(k, 2);
    out
}

fn sorted3(mut t: [u32; 3]) -> [u32; 3] {
    t.sort_unstable();
    t
}

/// Finds the next reduction of a satisfying triple system: the smallest
/// element covered once, else the smallest covered twice. The caller is
/// expected to have checked the condition; a family where every covered
/// element lies in three or more triples yields [`Error::NoReduction`],
/// which certifies a condition violation.
pub fn find_reduction(c: &SetSystem) -> Result<ReductionStep> {
    if let Some((set, size)) = c.first_non_triple() {
        return Err(Error::NotTripleSystem(set, size));
    }
    let mut r = Reducer::new(c);
    let step = r.reduce_once()?;
    Ok(ReductionStep {
        kind: r.kind_of(step),
        reduced: r.materialize(),
    })
}

/// Performs the reduction pivoted at a chosen element, which must be covered
/// by exactly one or two triples.
pub fn reduction_at(c: &SetSystem, x: &Element) -> Result<ReductionStep> {
    if let Some((set, size)) = c.first_non_triple() {
        return Err(Error::NotTripleSystem(set, size));
    }
    let id = c
        .id_of(x)
        .ok_or_else(|| Error::UnknownElement(x.as_str().to_owned()))?;
    let mut r = Reducer::new(c);
    let step = r.step_at(id)?;
    Ok(ReductionStep {
        kind: r.kind_of(step),
        reduced: r.materialize(),
    })
}

fn build_with(c: &SetSystem, mut trace: Option<&mut Vec<ReductionStep>>) -> Result<BinaryXTree> {
    if let Some((set, size)) = c.first_non_triple() {
        return Err(Error::NotTripleSystem(set, size));
    }
    if c.element_count() < 3 {
        return Err(Error::TooFewElements(c.element_count()));
    }
    if let CheckOutcome::Violated { witness } = check_poly(c)? {
        return Err(Error::ConditionViolated(witness));
    }

    let mut reducer = Reducer::new(c);
    let mut steps: Vec<StepIds> = Vec::new();
    while reducer.ground_size > 3 && reducer.live_sets > 0 {
        let step = reducer.reduce_once()?;
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(ReductionStep {
                kind: reducer.kind_of(step),
                reduced: reducer.materialize(),
            });
        }
        steps.push(step);
    }

    let ground = reducer.alive_elements();
    let mut tree = if ground.len() == 3 {
        Tree::star(&ground)?
    } else {
        Tree::caterpillar(&ground)?
    };

    for step in steps.into_iter().rev() {
        let (attach_at, x) = match step {
            StepIds::Degree1 { x, a, .. } => (a, x),
            StepIds::CaseI { x, b_alt, .. } => (b_alt, x),
            StepIds::CaseII {
                x, a, a_alt, branch, ..
            } => match branch {
                MergeBranch::KeepFirstPair => (a_alt, x),
                MergeBranch::KeepSecondPair => (a, x),
            },
        };
        let (leaf, nbr) = tree.pendant_edge(c.element(attach_at))?;
        tree.subdivide_and_attach_in_place(leaf, nbr, c.element(x).clone())?;
    }

    BinaryXTree::try_new(tree)
}

/// Builds a binary tree with leaf set `X` on which the median map of the
/// triple system is injective. The condition is pre-checked; ground elements
/// outside the union of the family are carried along as extra leaves.
pub fn build_tree(c: &SetSystem) -> Result<BinaryXTree> {
    build_with(c, None)
}

/// Like [`build_tree`], also returning the reduction steps in the order they
/// were applied.
pub fn build_tree_traced(c: &SetSystem) -> Result<(BinaryXTree, Vec<ReductionStep>)> {
    let mut trace = Vec::new();
    let tree = build_with(c, Some(&mut trace))?;
    Ok((tree, trace))
}

fn expand_to_triples(c: &SetSystem) -> Result<SetSystem> {
    let mut triples: Vec<Vec<Element>> = Vec::new();
    for i in 0..c.set_count() {
        let sorted = c.set_elements(i);
        for t in fan_expansion(&sorted)? {
            triples.push(t.to_vec());
        }
    }
    SetSystem::new(c.elements().to_vec(), triples)
}

fn build_partition_with(
    c: &SetSystem,
    trace: Option<&mut Vec<ReductionStep>>,
) -> Result<BinaryXTree> {
    let outcome = check_partition_condition(c, CheckMode::Poly, DEFAULT_BRUTE_LIMIT)?;
    if !outcome.is_satisfied() {
        return Err(Error::PartitionConditionViolated(Box::new(outcome)));
    }
    let expanded = expand_to_triples(c)?;
    let tree = build_with(&expanded, trace)?;

    // The per-set median blocks must be exactly the fan-triple medians and
    // must partition the interior vertices.
    for i in 0..c.set_count() {
        let sorted = c.set_elements(i);
        let fans = fan_medians(tree.tree(), &sorted)?;
        let block = median_set(tree.tree(), &sorted)?;
        if fans != block || block.len() != sorted.len() - 2 {
            return Err(Error::ReductionInvariant(format!(
                "median block of {{{}}} deviates from its fan medians",
                sorted
                    .iter()
                    .map(|e| e.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            )));
        }
    }
    let report = verify_partition(&tree, c)?;
    if !report.passed() {
        return Err(Error::ReductionInvariant(
            "constructed tree fails partition verification".into(),
        ));
    }
    Ok(tree)
}

/// Builds a binary tree with leaf set `X` on which the median blocks of the
/// family partition the interior vertices. The partition condition
/// (subfamily inequality plus whole-family equality) is pre-checked.
pub fn build_partition_tree(c: &SetSystem) -> Result<BinaryXTree> {
    build_partition_with(c, None)
}

/// Like [`build_partition_tree`], also returning the reduction trace of the
/// expanded triple family.
pub fn build_partition_tree_traced(c: &SetSystem) -> Result<(BinaryXTree, Vec<ReductionStep>)> {
    let mut trace = Vec::new();
    let tree = build_partition_with(c, Some(&mut trace))?;
    Ok((tree, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{check_bruteforce, ConditionWitness, DEFAULT_BRUTE_LIMIT};
    use crate::median::{median, verify_injective};
    use crate::newick::serialize_newick;

    fn el(n: &str) -> Element {
        Element::new(n).unwrap()
    }

    fn els(names: &[&str]) -> Vec<Element> {
        names.iter().map(|n| el(n)).collect()
    }

    fn e1() -> SetSystem {
        SetSystem::parse("1 2 3\n1 3 4\n3 4 5\n").unwrap()
    }

    #[test]
    fn find_reduction_prefers_singly_covered() {
        let step = find_reduction(&e1()).unwrap();
        match &step.kind {
            ReductionKind::Degree1 { x, a, b } => {
                assert_eq!((x.as_str(), a.as_str(), b.as_str()), ("2", "1", "3"));
            }
            k => panic!("expected a degree-1 step, got {k:?}"),
        }
        let ground: Vec<&str> = step.reduced.elements().iter().map(Element::as_str).collect();
        assert_eq!(ground, ["1", "3", "4", "5"]);
        assert_eq!(step.reduced.set_count(), 2);
    }

    #[test]
    fn find_reduction_disjoint_pairs() {
        let c = SetSystem::parse("1 2 3\n2 3 5\n1 4 6\n4 5 6\n").unwrap();
        let step = find_reduction(&c).unwrap();
        match &step.kind {
            ReductionKind::CaseII { x, a, b, a_alt, b_alt, branch } => {
                assert_eq!(x.as_str(), "1");
                assert_eq!((a.as_str(), b.as_str()), ("2", "3"));
                assert_eq!((a_alt.as_str(), b_alt.as_str()), ("4", "6"));
                assert_eq!(*branch, MergeBranch::KeepFirstPair);
            }
            k => panic!("expected a disjoint-pair step, got {k:?}"),
        }
        assert!(step.reduced.has_set(&els(&["2", "3", "4"])));
        assert!(check_bruteforce(&step.reduced, DEFAULT_BRUTE_LIMIT)
            .unwrap()
            .is_satisfied());
    }

    #[test]
    fn reduction_at_shared_element() {
        let c = SetSystem::parse("5 1 2\n5 1 3\n2 3 4\n3 4 6\n").unwrap();
        let step = reduction_at(&c, &el("5")).unwrap();
        match &step.kind {
            ReductionKind::CaseI { x, a, b, b_alt } => {
                assert_eq!(
                    (x.as_str(), a.as_str(), b.as_str(), b_alt.as_str()),
                    ("5", "1", "2", "3")
                );
            }
            k => panic!("expected a shared-element step, got {k:?}"),
        }
        assert!(step.reduced.has_set(&els(&["1", "2", "3"])));
        assert!(check_bruteforce(&step.reduced, DEFAULT_BRUTE_LIMIT)
            .unwrap()
            .is_satisfied());
    }

    #[test]
    fn reduction_at_rejects_thick_pivot() {
        let c = e1();
        assert!(reduction_at(&c, &el("3")).is_err());
    }

    #[test]
    fn no_reduction_flags_violation() {
        // Every element of this family is covered three times.
        let c = SetSystem::parse("1 2 3\n1 2 4\n1 3 4\n2 3 4\n").unwrap();
        assert!(matches!(find_reduction(&c), Err(Error::NoReduction)));
    }

    #[test]
    fn build_base_cases() {
        let c = SetSystem::parse("a b c\n").unwrap();
        let t = build_tree(&c).unwrap();
        assert_eq!(t.leaf_count(), 3);
        assert!(verify_injective(&t, &c).unwrap().passed());

        let empty = SetSystem::new(els(&["1", "2", "3", "4"]), vec![]).unwrap();
        let t = build_tree(&empty).unwrap();
        assert_eq!(serialize_newick(t.tree()).unwrap(), "(1,2,(3,4));");
        assert!(verify_injective(&t, &empty).unwrap().passed());
    }

    #[test]
    fn build_e1_and_verify() {
        let c = e1();
        let t = build_tree(&c).unwrap();
        assert_eq!(t.leaf_count(), 5);
        assert!(verify_injective(&t, &c).unwrap().passed());
    }

    #[test]
    fn build_rejects_violating_family() {
        let c = SetSystem::parse("1 2 3\n1 2 4\n1 3 4\n4 5 6\n").unwrap();
        match build_tree(&c) {
            Err(Error::ConditionViolated(ConditionWitness::PairDeletion { sets, .. })) => {
                assert_eq!(
                    sets,
                    vec![els(&["1", "2", "3"]), els(&["1", "2", "4"]), els(&["1", "3", "4"])]
                );
            }
            other => panic!("expected a condition violation, got {other:?}"),
        }
    }

    #[test]
    fn build_carries_uncovered_elements() {
        let c = SetSystem::parse("#X: 1 2 3 4 5 6 7\n1 2 3\n").unwrap();
        let t = build_tree(&c).unwrap();
        assert_eq!(t.leaf_count(), 7);
        assert!(verify_injective(&t, &c).unwrap().passed());
    }

    #[test]
    fn shared_element_lift_frees_the_merge_median() {
        // Reduce at 5, build the reduced tree, then replay the lift by hand
        // and watch the median of {x, a, b} land on the merge median.
        let c = SetSystem::parse("5 1 2\n5 1 3\n2 3 4\n3 4 6\n").unwrap();
        let step = reduction_at(&c, &el("5")).unwrap();
        let t_reduced = build_tree(&step.reduced).unwrap();
        let freed = median(t_reduced.tree(), &el("1"), &el("2"), &el("3")).unwrap();

        let (leaf, nbr) = t_reduced.tree().pendant_edge(&el("3")).unwrap();
        let lifted = t_reduced.subdivide_and_attach(leaf, nbr, el("5")).unwrap();
        // Vertex ids are stable under subdivision.
        assert_eq!(median(lifted.tree(), &el("5"), &el("1"), &el("2")).unwrap(), freed);
        let new_mid = lifted
            .tree()
            .vertex_of(&el("5"))
            .map(|v| lifted.tree().neighbors(v)[0])
            .unwrap();
        assert_eq!(
            median(lifted.tree(), &el("5"), &el("1"), &el("3")).unwrap(),
            new_mid
        );
        assert!(verify_injective(&lifted, &c).unwrap().passed());
    }

    #[test]
    fn traced_build_records_monotone_steps() {
        let c = SetSystem::parse("1 2 3\n2 3 5\n1 4 6\n4 5 6\n").unwrap();
        let (t, trace) = build_tree_traced(&c).unwrap();
        assert!(verify_injective(&t, &c).unwrap().passed());
        assert_eq!(trace.len(), 3, "|X| - 3 steps");
        let mut ground = c.element_count();
        let mut sets = c.set_count();
        for step in &trace {
            assert_eq!(step.reduced.element_count(), ground - 1);
            assert!(step.reduced.set_count() <= sets);
            ground = step.reduced.element_count();
            sets = step.reduced.set_count();
            assert!(check_poly(&step.reduced).unwrap().is_satisfied());
        }
    }

    #[test]
    fn extension_check_agrees_with_full_checker() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let names: Vec<String> = (1..=9).map(|i| i.to_string()).collect();
        let mut tested = 0;
        for _ in 0..2000 {
            let n = rng.gen_range(5..=9);
            let m = rng.gen_range(1..=5);
            let mut sets = Vec::new();
            for _ in 0..m {
                let mut ids: Vec<usize> = (0..n).collect();
                ids.shuffle(&mut rng);
                let mut t: Vec<Element> =
                    ids[..3].iter().map(|&i| el(&names[i])).collect();
                t.sort();
                sets.push(t);
            }
            sets.sort();
            sets.dedup();
            let ground: Vec<Element> = names[..n].iter().map(|s| el(s)).collect();
            let base = match SetSystem::new(ground, sets.clone()) {
                Ok(c) => c,
                Err(_) => continue,
            };
            if !check_poly(&base).unwrap().is_satisfied() {
                continue;
            }
            // A random extra triple plays the merge.
            let mut ids: Vec<usize> = (0..n).collect();
            ids.shuffle(&mut rng);
            let mut extra: Vec<Element> = ids[..3].iter().map(|&i| el(&names[i])).collect();
            extra.sort();
            if sets.contains(&extra) {
                continue;
            }
            let extra_ids: Vec<u32> = extra.iter().map(|e| base.id_of(e).unwrap()).collect();

            let r = Reducer::new(&base);
            let fast = r.extension_ok(&[], [extra_ids[0], extra_ids[1], extra_ids[2]]);

            let mut bigger = sets.clone();
            bigger.push(extra);
            let full = SetSystem::new(names[..n].iter().map(|s| el(s)).collect(), bigger).unwrap();
            let slow = check_poly(&full).unwrap().is_satisfied();
            assert_eq!(fast, slow, "extension check must match the full checker");
            tested += 1;
        }
        assert!(tested > 200, "enough satisfying bases exercised: {tested}");
    }

    #[test]
    fn build_partition_two_blocks() {
        let c = SetSystem::parse("1 2 3 4\n3 4 5 6\n").unwrap();
        let t = build_partition_tree(&c).unwrap();
        assert_eq!(t.leaf_count(), 6);
        let report = verify_partition(&t, &c).unwrap();
        assert!(report.passed());
        let sizes: Vec<usize> = report.assignment.iter().map(|a| a.vertices.len()).collect();
        assert_eq!(sizes, vec![2, 2]);
    }

    #[test]
    fn build_partition_whole_set() {
        let c = SetSystem::parse("1 2 3 4 5\n").unwrap();
        let t = build_partition_tree(&c).unwrap();
        let report = verify_partition(&t, &c).unwrap();
        assert!(report.passed());
        assert_eq!(report.assignment[0].vertices.len(), 3);
    }

    #[test]
    fn build_partition_rejects_heavy_overlap() {
        let c = SetSystem::parse("1 2 3 4\n1 2 3 5\n").unwrap();
        match build_partition_tree(&c) {
            Err(Error::PartitionConditionViolated(outcome)) => {
                assert!(!outcome.is_satisfied());
            }
            other => panic!("expected a partition violation, got {other:?}"),
        }
    }
}
