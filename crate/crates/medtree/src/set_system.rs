//! Ground-set elements and duplicate-free families of subsets.
//!
//! A [`SetSystem`] owns an ordered ground set and a family of member sets,
//! each of size at least 3. Element ids are indices into the lexicographically
//! sorted ground set, so `id < id` agrees with name order and member sets are
//! stored as strictly ascending id vectors.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A named element of a ground set. Comparison is lexicographic byte order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(String);

impl Element {
    /// Validates the token: non-empty, no whitespace, no `( ) , : ;`.
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let bad = |c: char| c.is_whitespace() || matches!(c, '(' | ')' | ',' | ':' | ';');
        if name.is_empty() || name.chars().any(bad) {
            return Err(Error::MalformedToken(name));
        }
        Ok(Element(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Element::new(raw).map_err(D::Error::custom)
    }
}

/// A ground set `X` together with a duplicate-free family of subsets of `X`,
/// each of size at least 3.
#[derive(Clone, PartialEq, Eq)]
pub struct SetSystem {
    /// Ground elements sorted lexicographically; the id of an element is its
    /// index here.
    elements: Vec<Element>,
    /// Ground set in declared order (ids into `elements`); identical to
    /// `0..n` when no order was declared.
    declared: Vec<u32>,
    /// Member sets in input order, each a strictly ascending id vector.
    sets: Vec<Vec<u32>>,
}

fn render_set(set: &[Element]) -> String {
    let names: Vec<&str> = set.iter().map(Element::as_str).collect();
    names.join(" ")
}

impl SetSystem {
    /// Builds a system from a declared ground set and a family of sets.
    /// An empty `ground` means "derive the ground set from the union".
    pub fn new(ground: Vec<Element>, sets: Vec<Vec<Element>>) -> Result<Self> {
        let declared_ground = if ground.is_empty() {
            let mut union: BTreeSet<Element> = BTreeSet::new();
            for set in &sets {
                union.extend(set.iter().cloned());
            }
            union.into_iter().collect()
        } else {
            ground
        };

        let mut elements: Vec<Element> = declared_ground.clone();
        elements.sort();
        for pair in elements.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateElement(pair[0].as_str().to_owned()));
            }
        }

        let id_of = |e: &Element| -> Result<u32> {
            elements
                .binary_search(e)
                .map(|i| i as u32)
                .map_err(|_| Error::UnknownElement(e.as_str().to_owned()))
        };

        let declared: Vec<u32> = declared_ground
            .iter()
            .map(|e| id_of(e))
            .collect::<Result<_>>()?;

        let mut id_sets: Vec<Vec<u32>> = Vec::with_capacity(sets.len());
        let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(sets.len());
        for set in &sets {
            let mut ids: Vec<u32> = set.iter().map(|e| id_of(e)).collect::<Result<_>>()?;
            ids.sort_unstable();
            ids.dedup();
            if ids.len() < 3 {
                return Err(Error::SetTooSmall(render_set(set)));
            }
            if !seen.insert(ids.clone()) {
                return Err(Error::DuplicateSet(render_set(set)));
            }
            id_sets.push(ids);
        }

        Ok(SetSystem {
            elements,
            declared,
            sets: id_sets,
        })
    }

    /// Builds a system whose ground set is exactly the union of `sets`.
    pub fn from_sets(sets: Vec<Vec<Element>>) -> Result<Self> {
        SetSystem::new(Vec::new(), sets)
    }

    /// Parses either input format: a JSON document (first non-blank byte `{`)
    /// or the plain-text form.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            SetSystem::parse_json(text)
        } else {
            SetSystem::parse_plain(text)
        }
    }

    /// Plain-text form: an optional first line `#X: e1 e2 ...` declaring the
    /// ground set, then one set per non-empty line; lines starting with `#`
    /// are comments.
    pub fn parse_plain(text: &str) -> Result<Self> {
        let mut ground: Vec<Element> = Vec::new();
        let mut sets: Vec<Vec<Element>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#X:") {
                if lineno == 0 {
                    ground = rest
                        .split_whitespace()
                        .map(Element::new)
                        .collect::<Result<_>>()?;
                }
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let set: Vec<Element> = line
                .split_whitespace()
                .map(Element::new)
                .collect::<Result<_>>()?;
            sets.push(set);
        }
        SetSystem::new(ground, sets)
    }

    /// Structured form: `{"elements": [...], "sets": [[...], ...]}` with
    /// `elements` optional.
    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc =
            serde_json::from_str(text).map_err(|e| Error::InstanceFormat(e.to_string()))?;
        doc.try_into()
    }

    /// Renders the plain-text instance form (ground declaration plus one set
    /// per line). Stable for fixed input.
    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        out.push_str("#X:");
        for id in &self.declared {
            out.push(' ');
            out.push_str(self.elements[*id as usize].as_str());
        }
        out.push('\n');
        for set in &self.sets {
            let names: Vec<&str> = set
                .iter()
                .map(|id| self.elements[*id as usize].as_str())
                .collect();
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Ground elements sorted lexicographically; index = element id.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Ground elements in declared order.
    pub fn declared_elements(&self) -> impl Iterator<Item = &Element> {
        self.declared.iter().map(|id| &self.elements[*id as usize])
    }

    pub fn element(&self, id: u32) -> &Element {
        &self.elements[id as usize]
    }

    pub fn id_of(&self, e: &Element) -> Option<u32> {
        self.elements.binary_search(e).ok().map(|i| i as u32)
    }

    /// Member sets in input order as strictly ascending id vectors.
    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn set_elements(&self, index: usize) -> Vec<Element> {
        self.sets[index]
            .iter()
            .map(|id| self.elements[*id as usize].clone())
            .collect()
    }

    /// All member sets as element vectors, in input order.
    pub fn sets_as_elements(&self) -> Vec<Vec<Element>> {
        (0..self.sets.len()).map(|i| self.set_elements(i)).collect()
    }

    pub fn has_set(&self, set: &[Element]) -> bool {
        let mut ids: Vec<u32> = match set.iter().map(|e| self.id_of(e)).collect() {
            Some(ids) => ids,
            None => return false,
        };
        ids.sort_unstable();
        self.sets.iter().any(|s| *s == ids)
    }

    /// True iff every member set has size exactly 3.
    pub fn is_triple_system(&self) -> bool {
        self.sets.iter().all(|s| s.len() == 3)
    }

    /// Returns the first non-triple set as (rendered, size), if any.
    pub(crate) fn first_non_triple(&self) -> Option<(String, usize)> {
        self.sets
            .iter()
            .find(|s| s.len() != 3)
            .map(|s| (render_set(&self.ids_to_elements(s)), s.len()))
    }

    pub(crate) fn ids_to_elements(&self, ids: &[u32]) -> Vec<Element> {
        ids.iter().map(|id| self.elements[*id as usize].clone()).collect()
    }

    /// Number of member sets containing each element, indexed by id.
    pub fn coverage_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.elements.len()];
        for set in &self.sets {
            for id in set {
                counts[*id as usize] += 1;
            }
        }
        counts
    }

    /// Number of member sets containing `e`, or 0 when `e` is unknown.
    pub fn coverage_of(&self, e: &Element) -> usize {
        match self.id_of(e) {
            Some(id) => self
                .sets
                .iter()
                .filter(|s| s.binary_search(&id).is_ok())
                .count(),
            None => 0,
        }
    }

    /// Union of the member sets selected by `indices`, as ids.
    pub fn union_ids(&self, indices: impl IntoIterator<Item = usize>) -> BTreeSet<u32> {
        let mut union = BTreeSet::new();
        for i in indices {
            union.extend(self.sets[i].iter().copied());
        }
        union
    }

    /// Union of the member sets selected by `indices`, as sorted elements.
    pub fn union_of(&self, indices: &[usize]) -> Vec<Element> {
        self.union_ids(indices.iter().copied())
            .into_iter()
            .map(|id| self.elements[id as usize].clone())
            .collect()
    }

    /// Ids of the elements covered by at least one member set.
    pub fn covered_ids(&self) -> BTreeSet<u32> {
        self.union_ids(0..self.sets.len())
    }

    /// The same family over the ground set reduced to its union.
    pub fn restrict_to_union(&self) -> SetSystem {
        let covered = self.covered_ids();
        let ground: Vec<Element> = covered
            .iter()
            .map(|id| self.elements[*id as usize].clone())
            .collect();
        let sets = self.sets_as_elements();
        SetSystem::new(ground, sets).expect("restriction preserves validity")
    }
}

impl fmt::Debug for SetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetSystem(|X|={}, |C|={})", self.elements.len(), self.sets.len())
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<Element>>,
    sets: Vec<Vec<Element>>,
}

impl TryFrom<InstanceDoc> for SetSystem {
    type Error = Error;

    fn try_from(doc: InstanceDoc) -> Result<Self> {
        SetSystem::new(doc.elements.unwrap_or_default(), doc.sets)
    }
}

impl Serialize for SetSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = InstanceDoc {
            elements: Some(self.declared_elements().cloned().collect()),
            sets: self.sets_as_elements(),
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = InstanceDoc::deserialize(d)?;
        doc.try_into().map_err(D::Error::custom)
    }
}
