//! Decision procedures for the covering condition on set families.
//!
//! A family satisfies the condition when every non-empty subfamily covers at
//! least two more elements than a weight lower bound: for triple systems the
//! weight of a subfamily is its cardinality, in the general (partition) case
//! it is the sum of `|Y| - 2` over its members.
//!
//! Two independent routes are provided and cross-validated: exhaustive
//! subfamily enumeration, and a polynomial reduction to bipartite matching
//! (delete every 2-element subset of the ground set and demand a system of
//! distinct representatives among the survivors).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::MatchState;
use crate::set_system::{Element, SetSystem};

/// Default cap on family size for exhaustive subfamily enumeration.
pub const DEFAULT_BRUTE_LIMIT: usize = 24;
/// Default cap on family size for tight-subfamily enumeration.
pub const DEFAULT_TIGHT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Poly,
    Brute,
}

impl std::fmt::Display for CheckMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckMode::Poly => write!(f, "poly"),
            CheckMode::Brute => write!(f, "brute"),
        }
    }
}

/// Evidence that a family fails the condition; every variant re-validates by
/// direct arithmetic.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionWitness {
    /// A subfamily covering fewer than `|C'| + 2` elements.
    Subfamily {
        sets: Vec<Vec<Element>>,
        union_size: usize,
        required: usize,
    },
    /// A deleted pair together with a subfamily whose surviving elements
    /// cannot host a system of distinct representatives.
    PairDeletion {
        pair: [Element; 2],
        sets: Vec<Vec<Element>>,
        surviving_union: usize,
    },
}

/// Outcome of a condition check.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckOutcome {
    Satisfied,
    Violated { witness: ConditionWitness },
}

impl CheckOutcome {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, CheckOutcome::Satisfied)
    }

    pub fn status_str(&self) -> &'static str {
        match self {
            CheckOutcome::Satisfied => "satisfied",
            CheckOutcome::Violated { .. } => "violated",
        }
    }

    pub fn witness(&self) -> Option<&ConditionWitness> {
        match self {
            CheckOutcome::Satisfied => None,
            CheckOutcome::Violated { witness } => Some(witness),
        }
    }
}

fn require_triples(c: &SetSystem) -> Result<()> {
    match c.first_non_triple() {
        Some((set, size)) => Err(Error::NotTripleSystem(set, size)),
        None => Ok(()),
    }
}

/// Minimum-cardinality subfamily (mask) violating `|union| >= weight + 2`,
/// ties broken lexicographically by member-set content. `None` when every
/// subfamily satisfies the bound.
fn min_violating_mask(c: &SetSystem, limit: usize) -> Result<Option<u64>> {
    let k = c.set_count();
    if k > limit || k >= 63 {
        return Err(Error::SizeGuardExceeded {
            size: k,
            limit: limit.min(62),
        });
    }
    if k == 0 {
        return Ok(None);
    }
    let sets = c.sets();
    let weights: Vec<u64> = sets.iter().map(|s| s.len() as u64 - 2).collect();

    // Rank sets by content so subfamilies compare lexicographically via bits.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sets[i].cmp(&sets[j]));
    let mut rank = vec![0u32; k];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r as u32;
    }
    let remap = |mask: u64| -> u64 {
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            out |= 1 << rank[i];
        }
        out
    };
    // Among equal-cardinality masks, smaller means: the lowest differing
    // ranked set belongs to it.
    let lex_before = |a: u64, b: u64| -> bool {
        let d = a ^ b;
        d != 0 && (a & (d & d.wrapping_neg())) != 0
    };

    let mut stamp = vec![0u64; c.element_count()];
    let mut gen = 0u64;
    let mut best: Option<(u32, u64, u64)> = None; // (card, remapped, mask)

    for mask in 1u64..(1u64 << k) {
        let card = mask.count_ones();
        if let Some((bc, _, _)) = best {
            if card > bc {
                continue;
            }
        }
        gen += 1;
        let mut union = 0u64;
        let mut weight = 0u64;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            weight += weights[i];
            for &e in &sets[i] {
                if stamp[e as usize] != gen {
                    stamp[e as usize] = gen;
                    union += 1;
                }
            }
        }
        if union < weight + 2 {
            let rm = remap(mask);
            let better = match best {
                None => true,
                Some((bc, brm, _)) => card < bc || (card == bc && lex_before(rm, brm)),
            };
            if better {
                best = Some((card, rm, mask));
            }
        }
    }
    Ok(best.map(|(_, _, mask)| mask))
}

fn mask_indices(mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Sorts set indices by member-set content.
fn canonical_index_order(c: &SetSystem, mut indices: Vec<usize>) -> Vec<usize> {
    indices.sort_by(|&i, &j| c.sets()[i].cmp(&c.sets()[j]));
    indices
}

/// Exhaustive check of the condition on a triple system: every non-empty
/// subfamily must cover at least `|C'| + 2` elements. On violation the
/// witness is the minimum-cardinality violating subfamily, ties broken
/// lexicographically.
pub fn check_bruteforce(c: &SetSystem, limit: usize) -> Result<CheckOutcome> {
    require_triples(c)?;
    match min_violating_mask(c, limit)? {
        None => Ok(CheckOutcome::Satisfied),
        Some(mask) => {
            let indices = canonical_index_order(c, mask_indices(mask));
            let union_size = c.union_ids(indices.iter().copied()).len();
            let required = indices.len() + 2;
            debug_assert!(union_size < required);
            Ok(CheckOutcome::Violated {
                witness: ConditionWitness::Subfamily {
                    sets: indices.iter().map(|&i| c.set_elements(i)).collect(),
                    union_size,
                    required,
                },
            })
        }
    }
}

/// A violation found by the matching route, in raw id space.
struct PolyViolation {
    pair: [u32; 2],
    left_indices: Vec<usize>,
    surviving_union: usize,
}

/// Matching route over raw id sets: for every pair `{p, q}` of ground
/// elements the family restricted to the remaining elements must admit a
/// system of distinct representatives. Returns the lexicographically
/// smallest failing pair with its deficiency witness.
fn poly_core(element_count: usize, sets: &[Vec<u32>]) -> Option<PolyViolation> {
    if sets.is_empty() {
        return None;
    }
    let m = sets.len();
    let mut base = MatchState::new(m, element_count);
    for u in 0..m {
        base.augment(sets, u as u32, None);
    }
    let base_unmatched: Vec<u32> = (0..m as u32)
        .filter(|&u| base.left_match[u as usize].is_none())
        .collect();

    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(element_count * (element_count - 1) / 2);
    for p in 0..element_count as u32 {
        for q in p + 1..element_count as u32 {
            pairs.push((p, q));
        }
    }

    let check_pair = |&(p, q): &(u32, u32)| -> Option<PolyViolation> {
        let mut st = base.clone();
        let mut pending = base_unmatched.clone();
        if let Some(u) = st.unmatch_right(p) {
            pending.push(u);
        }
        if let Some(u) = st.unmatch_right(q) {
            pending.push(u);
        }
        let banned = Some([p, q]);
        let failed: Vec<u32> = pending
            .into_iter()
            .filter(|&u| !st.augment(sets, u, banned))
            .collect();
        if failed.is_empty() {
            return None;
        }
        let reach = st.alternating_reach(sets, &failed, banned);
        let mut surviving = std::collections::BTreeSet::new();
        for &u in &reach {
            for &e in &sets[u as usize] {
                if e != p && e != q {
                    surviving.insert(e);
                }
            }
        }
        debug_assert!(surviving.len() < reach.len());
        Some(PolyViolation {
            pair: [p, q],
            left_indices: reach.into_iter().map(|u| u as usize).collect(),
            surviving_union: surviving.len(),
        })
    };

    pairs.par_iter().find_map_first(check_pair)
}

/// Polynomial check of the condition on a triple system. Agrees with
/// [`check_bruteforce`] on every input where both run; on violation it
/// reports the lexicographically smallest failing pair and the deficient
/// subfamily extracted from the matching failure.
pub fn check_poly(c: &SetSystem) -> Result<CheckOutcome> {
    require_triples(c)?;
    match poly_core(c.element_count(), c.sets()) {
        None => Ok(CheckOutcome::Satisfied),
        Some(v) => {
            let indices = canonical_index_order(c, v.left_indices);
            Ok(CheckOutcome::Violated {
                witness: ConditionWitness::PairDeletion {
                    pair: [c.element(v.pair[0]).clone(), c.element(v.pair[1]).clone()],
                    sets: indices.iter().map(|&i| c.set_elements(i)).collect(),
                    surviving_union: v.surviving_union,
                },
            })
        }
    }
}

/// A subfamily achieving equality `|union| = |C'| + 2`, stored with its
/// union.
#[derive(Clone, Debug, Serialize)]
pub struct TightSubfamily {
    /// Indices into the family, ascending.
    pub set_indices: Vec<usize>,
    pub union: Vec<Element>,
}

/// All tight subfamilies of a satisfying triple system, ordered by
/// cardinality and then lexicographically by content.
#[derive(Clone, Debug, Serialize)]
pub struct TightFamily {
    pub members: Vec<TightSubfamily>,
}

/// Enumerates every non-empty subfamily with `|union| = |C'| + 2`. The
/// family must satisfy the condition (checked first).
pub fn tight_sets(c: &SetSystem, limit: usize) -> Result<TightFamily> {
    require_triples(c)?;
    if let CheckOutcome::Violated { witness } = check_poly(c)? {
        return Err(Error::ConditionViolated(witness));
    }
    let k = c.set_count();
    if k > limit || k >= 63 {
        return Err(Error::SizeGuardExceeded {
            size: k,
            limit: limit.min(62),
        });
    }
    let sets = c.sets();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sets[i].cmp(&sets[j]));
    let mut rank = vec![0u32; k];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r as u32;
    }

    let mut stamp = vec![0u64; c.element_count()];
    let mut gen = 0u64;
    let mut tight: Vec<(u32, u64, u64)> = Vec::new(); // (card, remapped, mask)
    for mask in 1u64..(1u64 << k) {
        gen += 1;
        let mut union = 0u64;
        let mut m = mask;
        let mut remapped = 0u64;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            remapped |= 1 << rank[i];
            for &e in &sets[i] {
                if stamp[e as usize] != gen {
                    stamp[e as usize] = gen;
                    union += 1;
                }
            }
        }
        if union == mask.count_ones() as u64 + 2 {
            tight.push((mask.count_ones(), remapped, mask));
        }
    }
    tight.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            let d = a.1 ^ b.1;
            if d == 0 {
                std::cmp::Ordering::Equal
            } else if a.1 & (d & d.wrapping_neg()) != 0 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        })
    });
    let members = tight
        .into_iter()
        .map(|(_, _, mask)| {
            let set_indices = mask_indices(mask);
            let union = c.union_of(&set_indices);
            TightSubfamily { set_indices, union }
        })
        .collect();
    Ok(TightFamily { members })
}

/// The fan triples `{y[0], y[1], y[j]}` for `j = 2 .. |y|`, in the order of
/// the given slice. Every subfamily of the result covers exactly its
/// cardinality plus two elements.
pub fn fan_expansion(y: &[Element]) -> Result<Vec<[Element; 3]>> {
    if y.len() < 3 {
        return Err(Error::TooFewElements(y.len()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for e in y {
        if !seen.insert(e) {
            return Err(Error::DuplicateElement(e.as_str().to_owned()));
        }
    }
    Ok(y[2..]
        .iter()
        .map(|tail| {
            let mut triple = [y[0].clone(), y[1].clone(), tail.clone()];
            triple.sort();
            triple
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Satisfied,
    Violated,
}

/// Evidence against the partition condition.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionWitness {
    /// A subfamily with `|union| - 2 < sum of (|Y| - 2)`.
    Subfamily {
        sets: Vec<Vec<Element>>,
        union_size: usize,
        weight: usize,
    },
    /// Two member sets sharing three or more elements (already a violating
    /// 2-element subfamily).
    PairOverlap {
        first: Vec<Element>,
        second: Vec<Element>,
        intersection: Vec<Element>,
    },
    /// The inequality holds everywhere but the whole-family equality fails
    /// by this amount (`|X| - 2` minus the total weight).
    EqualityDeficit { deficit: i64 },
}

/// Outcome of the partition-condition check: the subfamily inequality and
/// the whole-family equality are reported separately.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionCheckOutcome {
    pub inequality: ConditionStatus,
    pub equality: ConditionStatus,
    /// `(|X| - 2) - sum over the family of (|Y| - 2)`; zero iff the equality
    /// clause holds.
    pub deficit: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PartitionWitness>,
}

impl PartitionCheckOutcome {
    pub fn is_satisfied(&self) -> bool {
        self.inequality == ConditionStatus::Satisfied && self.equality == ConditionStatus::Satisfied
    }

    pub fn status_str(&self) -> &'static str {
        if self.is_satisfied() {
            "satisfied"
        } else {
            "violated"
        }
    }
}

/// Checks the partition condition: every non-empty subfamily `C'` must
/// satisfy `|union(C')| - 2 >= sum_{Y in C'} (|Y| - 2)`, with equality for
/// the whole family. The family's union must equal the ground set.
///
/// Brute mode enumerates subfamilies. Poly mode rejects any pair of sets
/// sharing 3+ elements, expands each set into its fan triples (distinct
/// across sets once pairwise intersections are small) and runs the matching
/// route on the expanded triple family; both modes agree.
pub fn check_partition_condition(
    c: &SetSystem,
    mode: CheckMode,
    brute_limit: usize,
) -> Result<PartitionCheckOutcome> {
    if c.covered_ids().len() != c.element_count() {
        return Err(Error::GroundMismatch);
    }
    let total_weight: usize = c.sets().iter().map(|s| s.len() - 2).sum();
    let deficit = c.element_count() as i64 - 2 - total_weight as i64;
    let equality = if deficit == 0 {
        ConditionStatus::Satisfied
    } else {
        ConditionStatus::Violated
    };

    let inequality_witness = match mode {
        CheckMode::Brute => min_violating_mask(c, brute_limit)?.map(|mask| {
            let indices = canonical_index_order(c, mask_indices(mask));
            let union_size = c.union_ids(indices.iter().copied()).len();
            let weight = indices.iter().map(|&i| c.sets()[i].len() - 2).sum();
            PartitionWitness::Subfamily {
                sets: indices.iter().map(|&i| c.set_elements(i)).collect(),
                union_size,
                weight,
            }
        }),
        CheckMode::Poly => poly_partition_witness(c),
    };

    let (inequality, witness) = match inequality_witness {
        Some(w) => (ConditionStatus::Violated, Some(w)),
        None => (
            ConditionStatus::Satisfied,
            (deficit != 0).then_some(PartitionWitness::EqualityDeficit { deficit }),
        ),
    };

    Ok(PartitionCheckOutcome {
        inequality,
        equality,
        deficit,
        witness,
    })
}

fn poly_partition_witness(c: &SetSystem) -> Option<PartitionWitness> {
    let sets = c.sets();
    // (a) any pair sharing 3+ elements is itself a violating subfamily.
    let order = canonical_index_order(c, (0..sets.len()).collect());
    for (a, &i) in order.iter().enumerate() {
        for &j in order.iter().skip(a + 1) {
            let inter = sorted_intersection(&sets[i], &sets[j]);
            if inter.len() >= 3 {
                return Some(PartitionWitness::PairOverlap {
                    first: c.set_elements(i),
                    second: c.set_elements(j),
                    intersection: inter.iter().map(|&e| c.element(e).clone()).collect(),
                });
            }
        }
    }

    // (b) expand every set into its fan triples; sources stay attached.
    let mut triples: Vec<Vec<u32>> = Vec::new();
    let mut source: Vec<usize> = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        for j in 2..set.len() {
            let mut t = vec![set[0], set[1], set[j]];
            t.sort_unstable();
            triples.push(t);
            source.push(i);
        }
    }

    // (c) the expanded family satisfies the triple condition iff the
    // original satisfies the subfamily inequality.
    let violation = poly_core(c.element_count(), &triples)?;
    let mut involved: Vec<usize> = violation
        .left_indices
        .iter()
        .map(|&t| source[t])
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    involved = canonical_index_order(c, involved);
    let union_size = c.union_ids(involved.iter().copied()).len();
    let weight: usize = involved.iter().map(|&i| sets[i].len() - 2).sum();
    debug_assert!(union_size < weight + 2);
    Some(PartitionWitness::Subfamily {
        sets: involved.iter().map(|&i| c.set_elements(i)).collect(),
        union_size,
        weight,
    })
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
