//! Seeded instance generation: plant a random binary tree, then read off a
//! realizable family (distinct interior vertices with one leaf per branch),
//! or perturb a satisfying family into a labeled negative instance.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::checker::check_poly;
use crate::error::{Error, Result};
use crate::set_system::{Element, SetSystem};
use crate::tree::{BinaryXTree, Tree};

/// Parameters of one generated instance.
#[derive(Clone, Copy, Debug)]
pub struct GenSpec {
    pub leaf_count: usize,
    /// Number of triples (or, in partition mode, number of blocks).
    pub set_count: usize,
    pub seed: u64,
    /// Perturb the sampled instance until it fails the condition.
    pub violating: bool,
    /// Emit a family of size >= 3 sets tiling the interior vertices instead
    /// of a triple system.
    pub partition_mode: bool,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.leaf_count < 3 {
            return Err(Error::InvalidGenSpec(format!(
                "need at least 3 leaves, got {}",
                self.leaf_count
            )));
        }
        if self.set_count > self.leaf_count - 2 {
            return Err(Error::InvalidGenSpec(format!(
                "at most {} sets fit on {} leaves",
                self.leaf_count - 2,
                self.leaf_count
            )));
        }
        if self.violating && self.set_count == 0 {
            return Err(Error::InvalidGenSpec(
                "a violating instance needs at least one set".into(),
            ));
        }
        if self.partition_mode && self.set_count == 0 {
            return Err(Error::InvalidGenSpec(
                "partition mode needs at least one block".into(),
            ));
        }
        Ok(())
    }
}

/// Zero-padded numeric element names `1..=n`, so lexicographic and numeric
/// order coincide.
pub fn default_elements(n: usize) -> Vec<Element> {
    let width = n.to_string().len();
    (1..=n)
        .map(|i| Element::new(format!("{i:0width$}")).expect("digits are valid"))
        .collect()
}

fn sub_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 step, so per-stage generators are decorrelated.
    let mut z = seed.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A random binary tree on the given labels: a star on the three smallest,
/// then each further label attached to a uniformly chosen edge.
/// Deterministic per seed.
pub fn random_binary_tree(labels: &[Element], seed: u64) -> Result<BinaryXTree> {
    if labels.len() < 3 {
        return Err(Error::TooFewElements(labels.len()));
    }
    let mut sorted = labels.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateElement(pair[0].as_str().to_owned()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tree = Tree::star(&sorted[..3])?;
    for label in &sorted[3..] {
        let edges = tree.edges();
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        tree.subdivide_and_attach_in_place(u, v, label.clone())?;
    }
    BinaryXTree::try_new(tree)
}

/// Samples a triple system realized by `t`: `m` distinct interior vertices,
/// each contributing the triple made of one uniformly chosen leaf per branch
/// at that vertex. Medians are the chosen vertices, hence pairwise distinct.
pub fn sample_realizable_system(t: &BinaryXTree, m: usize, seed: u64) -> Result<SetSystem> {
    let interior = t.interior_vertices();
    if m > interior.len() {
        return Err(Error::InvalidGenSpec(format!(
            "asked for {m} triples but the tree has {} interior vertices",
            interior.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = rand::seq::index::sample(&mut rng, interior.len(), m).into_vec();
    chosen.sort_unstable();

    let tree = t.tree();
    let mut blocked = vec![false; tree.vertex_count()];
    let mut sets: Vec<Vec<Element>> = Vec::with_capacity(m);
    let mut seen = std::collections::BTreeSet::new();
    for idx in chosen {
        let v = interior[idx];
        blocked[v] = true;
        let mut triple: Vec<Element> = tree
            .neighbors(v)
            .iter()
            .map(|&nb| {
                let leaves = tree.component_leaves(nb, &blocked);
                leaves[rng.gen_range(0..leaves.len())].clone()
            })
            .collect();
        blocked[v] = false;
        triple.sort();
        let fresh = seen.insert(triple.clone());
        debug_assert!(fresh, "distinct medians force distinct triples");
        sets.push(triple);
    }
    SetSystem::new(t.leaf_elements(), sets)
}

/// Samples a family for the partition setting: the interior vertices are cut
/// into `blocks` connected blocks, and each block contributes the set made
/// of one leaf behind each of its boundary edges (the leaf itself for a
/// pendant edge, a uniformly chosen leaf of the component otherwise).
pub fn sample_partition_system(t: &BinaryXTree, blocks: usize, seed: u64) -> Result<SetSystem> {
    let tree = t.tree();
    let interior = t.interior_vertices();
    if blocks == 0 || blocks > interior.len() {
        return Err(Error::InvalidGenSpec(format!(
            "block count must be in 1..={}, got {blocks}",
            interior.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let is_interior: Vec<bool> = {
        let mut v = vec![false; tree.vertex_count()];
        for &i in &interior {
            v[i] = true;
        }
        v
    };
    let interior_edges: Vec<(usize, usize)> = tree
        .edges()
        .into_iter()
        .filter(|&(u, v)| is_interior[u] && is_interior[v])
        .collect();
    let cut: std::collections::BTreeSet<usize> =
        rand::seq::index::sample(&mut rng, interior_edges.len(), blocks - 1)
            .into_iter()
            .collect();

    // Union the interior tree minus the cut edges into blocks.
    let mut block_of: Vec<usize> = (0..tree.vertex_count()).collect();
    fn root_of(block_of: &mut Vec<usize>, v: usize) -> usize {
        let mut r = v;
        while block_of[r] != r {
            r = block_of[r];
        }
        let mut cur = v;
        while block_of[cur] != r {
            let next = block_of[cur];
            block_of[cur] = r;
            cur = next;
        }
        r
    }
    for (i, &(u, v)) in interior_edges.iter().enumerate() {
        if !cut.contains(&i) {
            let (ru, rv) = (root_of(&mut block_of, u), root_of(&mut block_of, v));
            if ru != rv {
                block_of[ru] = rv;
            }
        }
    }

    let mut members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &v in &interior {
        members.entry(root_of(&mut block_of, v)).or_default().push(v);
    }
    debug_assert_eq!(members.len(), blocks);

    let mut sets: Vec<Vec<Element>> = Vec::with_capacity(blocks);
    for block in members.values() {
        let mut in_block = vec![false; tree.vertex_count()];
        for &v in block {
            in_block[v] = true;
        }
        let mut set: Vec<Element> = Vec::new();
        for &v in block {
            for &nb in tree.neighbors(v) {
                if in_block[nb] {
                    continue;
                }
                if tree.is_leaf(nb) {
                    set.push(tree.label_of(nb).expect("leaves are labeled").clone());
                } else {
                    let leaves = tree.component_leaves(nb, &in_block);
                    set.push(leaves[rng.gen_range(0..leaves.len())].clone());
                }
            }
        }
        set.sort();
        debug_assert_eq!(set.len(), block.len() + 2);
        sets.push(set);
    }
    sets.sort();
    SetSystem::new(t.leaf_elements(), sets)
}

/// Inserts triples inside small tight windows until the family fails the
/// condition. A pair of triples sharing two elements gives a 4-element
/// window; with no such pair a triple is widened by one extra ground
/// element. Ground stays fixed.
pub fn perturb_to_violation(c: &SetSystem, seed: u64) -> Result<SetSystem> {
    if c.is_empty() {
        return Err(Error::CannotViolate);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = c.sets_as_elements();
    let elements: Vec<Element> = c.elements().to_vec();

    for _ in 0..16 {
        let current = SetSystem::new(elements.clone(), sets.clone())?;
        if !check_poly(&current).unwrap_or(crate::checker::CheckOutcome::Satisfied).is_satisfied() {
            return Ok(current);
        }

        // Candidate windows: unions of tight pairs first, then widened
        // singletons.
        let mut windows: Vec<Vec<Element>> = Vec::new();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let inter = sets[i].iter().filter(|e| sets[j].contains(e)).count();
                if sets[i].len() == 3 && sets[j].len() == 3 && inter == 2 {
                    let mut w = sets[i].clone();
                    w.extend(sets[j].iter().cloned());
                    w.sort();
                    w.dedup();
                    windows.push(w);
                }
            }
        }
        for s in &sets {
            for e in &elements {
                if !s.contains(e) {
                    let mut w = s.clone();
                    w.push(e.clone());
                    w.sort();
                    windows.push(w);
                }
            }
        }
        // Free triples inside a window.
        let mut candidates: Vec<Vec<Element>> = Vec::new();
        for w in &windows {
            for a in 0..w.len() {
                for b in a + 1..w.len() {
                    for c3 in b + 1..w.len() {
                        let t = vec![w[a].clone(), w[b].clone(), w[c3].clone()];
                        if !sets.contains(&t) && !candidates.contains(&t) {
                            candidates.push(t);
                        }
                    }
                }
            }
        }
        if candidates.is_empty() {
            return Err(Error::CannotViolate);
        }
        candidates.sort();
        let pick = rng.gen_range(0..candidates.len());
        sets.push(candidates[pick].clone());
    }
    Err(Error::CannotViolate)
}

/// Makes a partition-mode family fail its condition by widening one set
/// (the whole-family equality breaks, and possibly the inequality too).
pub fn perturb_partition_to_violation(c: &SetSystem, seed: u64) -> Result<SetSystem> {
    if c.is_empty() {
        return Err(Error::CannotViolate);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = c.sets_as_elements();
    let elements: Vec<Element> = c.elements().to_vec();
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.shuffle(&mut rng);
    for i in order {
        let missing: Vec<&Element> = elements.iter().filter(|e| !sets[i].contains(e)).collect();
        if missing.is_empty() {
            continue;
        }
        let extra = missing[rng.gen_range(0..missing.len())].clone();
        let mut widened = sets[i].clone();
        widened.push(extra);
        widened.sort();
        let mut out = sets.clone();
        out[i] = widened;
        out.sort();
        out.dedup();
        if out.len() == sets.len() {
            return SetSystem::new(elements, out);
        }
    }
    Err(Error::CannotViolate)
}

/// A generated instance: the family, and (when it is realizable by
/// construction) the planted tree.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub system: SetSystem,
    pub tree: Option<BinaryXTree>,
}

/// Runs the full generation pipeline for a spec. Deterministic: identical
/// specs give identical instances.
pub fn generate_instance(spec: &GenSpec) -> Result<GeneratedInstance> {
    spec.validate()?;
    let labels = default_elements(spec.leaf_count);
    let tree = random_binary_tree(&labels, sub_seed(spec.seed, 0))?;
    let system = if spec.partition_mode {
        sample_partition_system(&tree, spec.set_count, sub_seed(spec.seed, 1))?
    } else {
        sample_realizable_system(&tree, spec.set_count, sub_seed(spec.seed, 1))?
    };
    if spec.violating {
        let system = if spec.partition_mode {
            perturb_partition_to_violation(&system, sub_seed(spec.seed, 2))?
        } else {
            perturb_to_violation(&system, sub_seed(spec.seed, 2))?
        };
        Ok(GeneratedInstance { system, tree: None })
    } else {
        Ok(GeneratedInstance {
            system,
            tree: Some(tree),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{check_bruteforce, check_partition_condition, CheckMode, DEFAULT_BRUTE_LIMIT};
    use crate::median::{median, verify_injective};
    use crate::newick::serialize_newick;

    fn el(n: &str) -> Element {
        Element::new(n).unwrap()
    }

    #[test]
    fn three_leaves_unique_topology() {
        let labels = default_elements(3);
        let a = random_binary_tree(&labels, 1).unwrap();
        let b = random_binary_tree(&labels, 999).unwrap();
        assert_eq!(
            serialize_newick(a.tree()).unwrap(),
            serialize_newick(b.tree()).unwrap()
        );
    }

    #[test]
    fn four_leaves_hit_all_three_topologies_roughly_uniformly() {
        let labels = default_elements(4);
        let mut counts = std::collections::BTreeMap::new();
        let trials = 10_000;
        for seed in 0..trials {
            let t = random_binary_tree(&labels, seed).unwrap();
            *counts
                .entry(serialize_newick(t.tree()).unwrap())
                .or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 3, "exactly three quartet topologies");
        for (topo, count) in counts {
            let freq = count as f64 / trials as f64;
            assert!(
                (freq - 1.0 / 3.0).abs() < 0.05,
                "{topo} frequency {freq} strays from 1/3"
            );
        }
    }

    #[test]
    fn fixed_seed_reproduces_tree() {
        let labels = default_elements(20);
        let a = random_binary_tree(&labels, 42).unwrap();
        let b = random_binary_tree(&labels, 42).unwrap();
        assert_eq!(
            serialize_newick(a.tree()).unwrap(),
            serialize_newick(b.tree()).unwrap()
        );
    }

    #[test]
    fn sampled_triples_have_planted_medians() {
        let labels = default_elements(12);
        let tree = random_binary_tree(&labels, 5).unwrap();
        let c = sample_realizable_system(&tree, 10, 7).unwrap();
        assert_eq!(c.set_count(), 10);
        let mut medians = std::collections::BTreeSet::new();
        for i in 0..c.set_count() {
            let s = c.set_elements(i);
            medians.insert(median(tree.tree(), &s[0], &s[1], &s[2]).unwrap());
        }
        assert_eq!(medians.len(), 10, "pairwise distinct medians");
        assert!(verify_injective(&tree, &c).unwrap().passed());
        assert!(check_poly(&c).unwrap().is_satisfied());
    }

    #[test]
    fn sample_rejects_oversized_request() {
        let labels = default_elements(5);
        let tree = random_binary_tree(&labels, 1).unwrap();
        assert!(sample_realizable_system(&tree, 4, 0).is_err());
        let empty = sample_realizable_system(&tree, 0, 0).unwrap();
        assert_eq!(empty.set_count(), 0);
    }

    #[test]
    fn planted_caterpillar_instance_is_fully_double_covered() {
        // Caterpillar with interior path u1(1,2) - u2(3) - u3(4) - u4(5,6);
        // picking leaves per branch reproduces a family with every coverage
        // exactly 2.
        let c = SetSystem::parse("1 2 3\n2 3 5\n1 4 6\n4 5 6\n").unwrap();
        assert!(check_poly(&c).unwrap().is_satisfied());
        let counts = c.coverage_counts();
        assert!(counts.iter().all(|&k| k == 2));
        assert!(counts.len() >= 6);
    }

    #[test]
    fn perturbed_instances_fail_both_checkers() {
        for seed in 0..30u64 {
            let labels = default_elements(8);
            let tree = random_binary_tree(&labels, seed).unwrap();
            let c = sample_realizable_system(&tree, 5, seed ^ 0xabc).unwrap();
            let bad = perturb_to_violation(&c, seed ^ 0xdef).unwrap();
            assert!(!check_poly(&bad).unwrap().is_satisfied());
            assert!(!check_bruteforce(&bad, DEFAULT_BRUTE_LIMIT).unwrap().is_satisfied());
        }
    }

    #[test]
    fn perturb_single_triple_adds_window_triples() {
        let c = SetSystem::parse("#X: a b c d\na b c\n").unwrap();
        let bad = perturb_to_violation(&c, 3).unwrap();
        assert!(!check_bruteforce(&bad, DEFAULT_BRUTE_LIMIT).unwrap().is_satisfied());
        assert_eq!(bad.element_count(), 4, "ground is unchanged");
    }

    #[test]
    fn perturb_degenerate_ground_errors() {
        let c = SetSystem::parse("a b c\n").unwrap();
        assert!(matches!(perturb_to_violation(&c, 0), Err(Error::CannotViolate)));
    }

    #[test]
    fn partition_samples_pass_their_condition() {
        for seed in 0..20u64 {
            let labels = default_elements(14);
            let tree = random_binary_tree(&labels, seed).unwrap();
            let blocks = 1 + (seed as usize % 6);
            let c = sample_partition_system(&tree, blocks, seed ^ 0x55).unwrap();
            assert_eq!(c.set_count(), blocks);
            let out = check_partition_condition(&c, CheckMode::Poly, DEFAULT_BRUTE_LIMIT).unwrap();
            assert!(out.is_satisfied(), "seed {seed}: {out:?}");
        }
    }

    #[test]
    fn generate_instance_is_deterministic() {
        let spec = GenSpec {
            leaf_count: 9,
            set_count: 5,
            seed: 77,
            violating: false,
            partition_mode: false,
        };
        let a = generate_instance(&spec).unwrap();
        let b = generate_instance(&spec).unwrap();
        assert_eq!(a.system.to_plain(), b.system.to_plain());
        assert_eq!(
            serialize_newick(a.tree.unwrap().tree()).unwrap(),
            serialize_newick(b.tree.unwrap().tree()).unwrap()
        );
    }

    #[test]
    fn generate_validates_spec() {
        let spec = GenSpec {
            leaf_count: 6,
            set_count: 5,
            seed: 0,
            violating: false,
            partition_mode: false,
        };
        assert!(matches!(generate_instance(&spec), Err(Error::InvalidGenSpec(_))));
        let _ = el("x");
    }
}
