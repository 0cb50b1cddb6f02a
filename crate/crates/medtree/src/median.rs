//! Median vertices of triples and of larger sets, plus the two verifiers:
//! injectivity of the per-triple median map and partition of the interior
//! vertices by per-set median blocks.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::newick::canonical_vertex_names;
use crate::set_system::{Element, SetSystem};
use crate::tree::{BinaryXTree, Tree};

/// Above this set size `median_set` tries the fan shortcut before falling
/// back to full triple enumeration.
pub const MEDIAN_ENUM_THRESHOLD: usize = 12;

/// The unique vertex shared by the three pairwise paths among the vertices
/// labeled `x`, `y`, `z`.
pub fn median(t: &Tree, x: &Element, y: &Element, z: &Element) -> Result<usize> {
    if x == y || x == z || y == z {
        return Err(Error::NonDistinctArguments);
    }
    let resolve = |e: &Element| {
        t.vertex_of(e)
            .ok_or_else(|| Error::LabelNotFound(e.as_str().to_owned()))
    };
    let (vx, vy, vz) = (resolve(x)?, resolve(y)?, resolve(z)?);
    Ok(median_vertices(t, vx, vy, vz))
}

/// Median of three vertices: walk from `z` toward the `x`-`y` path; the
/// first path vertex reached is the median.
pub(crate) fn median_vertices(t: &Tree, x: usize, y: usize, z: usize) -> usize {
    let mut on_path = vec![false; t.vertex_count()];
    for v in t.path(x, y) {
        on_path[v] = true;
    }
    if on_path[z] {
        return z;
    }
    let mut seen = vec![false; t.vertex_count()];
    seen[z] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(z);
    while let Some(v) = queue.pop_front() {
        for &w in t.neighbors(v) {
            if on_path[w] {
                return w;
            }
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    unreachable!("tree is connected")
}

/// `{median(S) : S a 3-element subset of Y}` as a set of vertices.
///
/// For large `Y` this first computes the medians of the fan triples
/// `{y1, y2, yj}` over the sorted order; when those are pairwise distinct
/// they are exactly the answer, otherwise the full enumeration runs.
pub fn median_set(t: &Tree, y: &[Element]) -> Result<BTreeSet<usize>> {
    if y.len() < 3 {
        return Err(Error::TooFewElements(y.len()));
    }
    let mut sorted = y.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateElement(pair[0].as_str().to_owned()));
        }
    }
    for e in &sorted {
        let v = t
            .vertex_of(e)
            .ok_or_else(|| Error::LabelNotFound(e.as_str().to_owned()))?;
        if !t.is_leaf(v) {
            return Err(Error::NotALeaf(e.as_str().to_owned()));
        }
    }

    if sorted.len() > MEDIAN_ENUM_THRESHOLD {
        let fans = fan_medians(t, &sorted)?;
        if fans.len() == sorted.len() - 2 {
            return Ok(fans);
        }
    }

    let mut result = BTreeSet::new();
    let n = sorted.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                result.insert(median(t, &sorted[i], &sorted[j], &sorted[k])?);
            }
        }
    }
    Ok(result)
}

/// Medians of the fan triples `{y[0], y[1], y[j]}`, `j >= 2`.
pub(crate) fn fan_medians(t: &Tree, sorted: &[Element]) -> Result<BTreeSet<usize>> {
    let mut fans = BTreeSet::new();
    for j in 2..sorted.len() {
        fans.insert(median(t, &sorted[0], &sorted[1], &sorted[j])?);
    }
    Ok(fans)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One row of a median assignment: a member set and the canonical names of
/// the vertices its medians occupy.
#[derive(Clone, Debug, Serialize)]
pub struct AssignmentEntry {
    pub set: Vec<Element>,
    pub vertices: Vec<String>,
}

/// Two member sets meeting at the same vertex.
#[derive(Clone, Debug, Serialize)]
pub struct CollisionWitness {
    pub vertex: String,
    pub first: Vec<Element>,
    pub second: Vec<Element>,
}

/// Outcome of a verification run. `verdict` is `Fail` exactly when
/// `collisions` or `uncovered` is non-empty.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub assignment: Vec<AssignmentEntry>,
    pub collisions: Vec<CollisionWitness>,
    pub uncovered: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn require_ground_on_leaves(t: &Tree, c: &SetSystem) -> Result<()> {
    for e in c.elements() {
        match t.vertex_of(e) {
            Some(v) if t.is_leaf(v) => {}
            Some(_) => return Err(Error::GroundLeafMismatch(format!(
                "element {:?} labels an interior vertex",
                e.as_str()
            ))),
            None => {
                return Err(Error::GroundLeafMismatch(format!(
                    "element {:?} is not a leaf of the tree",
                    e.as_str()
                )))
            }
        }
    }
    Ok(())
}

/// Checks that the median map of a triple system is injective on the tree.
/// On failure every colliding pair is listed, in canonical order.
pub fn verify_injective(t: &BinaryXTree, c: &SetSystem) -> Result<VerificationReport> {
    if let Some((set, size)) = c.first_non_triple() {
        return Err(Error::NotTripleSystem(set, size));
    }
    require_ground_on_leaves(t.tree(), c)?;
    let names = canonical_vertex_names(t.tree())?;

    // Canonical order: sets sorted by content.
    let mut order: Vec<usize> = (0..c.set_count()).collect();
    order.sort_by(|&i, &j| c.sets()[i].cmp(&c.sets()[j]));

    let mut assignment = Vec::with_capacity(c.set_count());
    let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &order {
        let set = c.set_elements(i);
        let m = median(t.tree(), &set[0], &set[1], &set[2])?;
        debug_assert!(!t.tree().is_leaf(m), "median of three leaves is interior");
        owners.entry(m).or_default().push(i);
        assignment.push(AssignmentEntry {
            set,
            vertices: vec![names[m].clone()],
        });
    }

    let mut collisions = Vec::new();
    for (&vertex, sets) in &owners {
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                collisions.push(CollisionWitness {
                    vertex: names[vertex].clone(),
                    first: c.set_elements(sets[a]),
                    second: c.set_elements(sets[b]),
                });
            }
        }
    }
    collisions.sort_by(|x, y| (&x.first, &x.second).cmp(&(&y.first, &y.second)));

    Ok(VerificationReport {
        verdict: if collisions.is_empty() { Verdict::Pass } else { Verdict::Fail },
        assignment,
        collisions,
        uncovered: Vec::new(),
    })
}

/// Checks that the per-set median blocks partition the interior vertices:
/// pairwise disjoint and jointly covering. Witnesses name every vertex owned
/// by two sets and every uncovered interior vertex.
pub fn verify_partition(t: &BinaryXTree, c: &SetSystem) -> Result<VerificationReport> {
    require_ground_on_leaves(t.tree(), c)?;
    let names = canonical_vertex_names(t.tree())?;

    let mut order: Vec<usize> = (0..c.set_count()).collect();
    order.sort_by(|&i, &j| c.sets()[i].cmp(&c.sets()[j]));

    let mut assignment = Vec::with_capacity(c.set_count());
    let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &order {
        let set = c.set_elements(i);
        let block = median_set(t.tree(), &set)?;
        for &v in &block {
            owners.entry(v).or_default().push(i);
        }
        assignment.push(AssignmentEntry {
            set,
            vertices: block.iter().map(|&v| names[v].clone()).collect(),
        });
    }

    let mut collisions = Vec::new();
    for (&vertex, sets) in &owners {
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                collisions.push(CollisionWitness {
                    vertex: names[vertex].clone(),
                    first: c.set_elements(sets[a]),
                    second: c.set_elements(sets[b]),
                });
            }
        }
    }
    collisions.sort_by(|x, y| (&x.first, &x.second, &x.vertex).cmp(&(&y.first, &y.second, &y.vertex)));

    let uncovered: Vec<String> = t
        .interior_vertices()
        .into_iter()
        .filter(|v| !owners.contains_key(v))
        .map(|v| names[v].clone())
        .collect();

    Ok(VerificationReport {
        verdict: if collisions.is_empty() && uncovered.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        assignment,
        collisions,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;
    use crate::tree::Tree;

    fn el(n: &str) -> Element {
        Element::new(n).unwrap()
    }

    fn els(names: &[&str]) -> Vec<Element> {
        names.iter().map(|n| el(n)).collect()
    }

    /// Independent oracle: intersect the vertex sets of all three paths.
    fn median_by_path_intersection(t: &Tree, x: &Element, y: &Element, z: &Element) -> usize {
        let vx = t.vertex_of(x).unwrap();
        let vy = t.vertex_of(y).unwrap();
        let vz = t.vertex_of(z).unwrap();
        let pxy: BTreeSet<usize> = t.path(vx, vy).into_iter().collect();
        let pxz: BTreeSet<usize> = t.path(vx, vz).into_iter().collect();
        let pyz: BTreeSet<usize> = t.path(vy, vz).into_iter().collect();
        let common: Vec<usize> = pxy
            .intersection(&pxz)
            .copied()
            .collect::<BTreeSet<_>>()
            .intersection(&pyz)
            .copied()
            .collect();
        assert_eq!(common.len(), 1, "median is unique");
        common[0]
    }

    fn e1_tree() -> BinaryXTree {
        BinaryXTree::try_new(parse_newick("((1,2),(4,5),3);").unwrap()).unwrap()
    }

    #[test]
    fn median_of_star_is_center() {
        let t = Tree::star(&els(&["1", "2", "3"])).unwrap();
        let m = median(&t, &el("1"), &el("2"), &el("3")).unwrap();
        assert_eq!(m, 0);
        assert_eq!(m, median_by_path_intersection(&t, &el("1"), &el("2"), &el("3")));
    }

    #[test]
    fn median_on_caterpillar_matches_oracle() {
        let t = e1_tree();
        let m = median(t.tree(), &el("1"), &el("3"), &el("4")).unwrap();
        let oracle = median_by_path_intersection(t.tree(), &el("1"), &el("3"), &el("4"));
        assert_eq!(m, oracle);
        // u2 is the interior vertex adjacent to leaf 3.
        let u2 = t.tree().vertex_of(&el("3")).map(|v| t.tree().neighbors(v)[0]).unwrap();
        assert_eq!(m, u2);
    }

    #[test]
    fn median_on_quartet_matches_oracle() {
        let t = parse_newick("((1,2),(3,4));").unwrap();
        let m = median(&t, &el("1"), &el("2"), &el("3")).unwrap();
        assert_eq!(m, median_by_path_intersection(&t, &el("1"), &el("2"), &el("3")));
        // The interior vertex adjacent to leaves 1 and 2.
        let v1 = t.vertex_of(&el("1")).unwrap();
        assert_eq!(m, t.neighbors(v1)[0]);
    }

    #[test]
    fn median_is_symmetric() {
        let t = e1_tree();
        let names = ["1", "3", "5"];
        let base = median(t.tree(), &el("1"), &el("3"), &el("5")).unwrap();
        let perms = [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for p in perms {
            let m = median(t.tree(), &el(names[p[0]]), &el(names[p[1]]), &el(names[p[2]])).unwrap();
            assert_eq!(m, base);
        }
    }

    #[test]
    fn median_errors() {
        let t = e1_tree();
        assert!(matches!(
            median(t.tree(), &el("1"), &el("1"), &el("2")),
            Err(Error::NonDistinctArguments)
        ));
        assert!(matches!(
            median(t.tree(), &el("1"), &el("2"), &el("9")),
            Err(Error::LabelNotFound(_))
        ));
    }

    #[test]
    fn median_set_collapses_for_triples() {
        let t = e1_tree();
        let y = els(&["1", "2", "3"]);
        let ms = median_set(t.tree(), &y).unwrap();
        assert_eq!(ms.len(), 1);
        assert!(ms.contains(&median(t.tree(), &y[0], &y[1], &y[2]).unwrap()));
    }

    #[test]
    fn median_set_of_all_leaves_covers_interior() {
        let t = e1_tree();
        let ms = median_set(t.tree(), &els(&["1", "2", "3", "4", "5"])).unwrap();
        let interior: BTreeSet<usize> = t.interior_vertices().into_iter().collect();
        assert_eq!(ms, interior);

        let q = parse_newick("((1,2),(3,4));").unwrap();
        let ms = median_set(&q, &els(&["1", "2", "3", "4"])).unwrap();
        assert_eq!(ms.len(), 2);
    }

    #[test]
    fn median_set_rejects_non_leaves() {
        let t = parse_newick("((a,b)m,c,d);").unwrap();
        assert!(matches!(
            median_set(&t, &els(&["a", "b", "m"])),
            Err(Error::NotALeaf(_))
        ));
    }

    #[test]
    fn verify_injective_on_realizing_tree() {
        let t = e1_tree();
        let c = SetSystem::parse("1 2 3\n1 3 4\n3 4 5\n").unwrap();
        let report = verify_injective(&t, &c).unwrap();
        assert!(report.passed());
        assert_eq!(report.assignment.len(), 3);
        let vs: BTreeSet<&str> = report
            .assignment
            .iter()
            .map(|a| a.vertices[0].as_str())
            .collect();
        assert_eq!(vs.len(), 3, "three distinct interior vertices");
    }

    #[test]
    fn verify_injective_collision() {
        let t = e1_tree();
        let c = SetSystem::parse("1 2 3\n1 3 4\n3 4 5\n2 3 4\n").unwrap();
        let report = verify_injective(&t, &c).unwrap();
        assert!(!report.passed());
        assert_eq!(report.collisions.len(), 1);
        let w = &report.collisions[0];
        assert_eq!(w.first, els(&["1", "3", "4"]));
        assert_eq!(w.second, els(&["2", "3", "4"]));
    }

    #[test]
    fn verify_injective_empty_family_passes() {
        let t = e1_tree();
        let c = SetSystem::new(els(&["1", "2", "3", "4", "5"]), vec![]).unwrap();
        let report = verify_injective(&t, &c).unwrap();
        assert!(report.passed());
        assert!(report.assignment.is_empty());
    }

    #[test]
    fn verify_injective_ground_mismatch() {
        let t = e1_tree();
        let c = SetSystem::parse("1 2 9\n").unwrap();
        assert!(matches!(
            verify_injective(&t, &c),
            Err(Error::GroundLeafMismatch(_))
        ));
    }

    #[test]
    fn verify_partition_uncovered_vertex() {
        let t = e1_tree();
        let c = SetSystem::parse("1 2 3\n3 4 5\n").unwrap();
        let report = verify_partition(&t, &c).unwrap();
        assert!(!report.passed());
        assert_eq!(report.collisions.len(), 0);
        assert_eq!(report.uncovered.len(), 1);
    }

    #[test]
    fn verify_partition_whole_set_passes() {
        let t = e1_tree();
        let c = SetSystem::parse("1 2 3 4 5\n").unwrap();
        let report = verify_partition(&t, &c).unwrap();
        assert!(report.passed());
        assert_eq!(report.assignment[0].vertices.len(), 3);
    }
}
