//! Finite groups given by permutations or by a multiplication table.
//!
//! Elements are indexed `0..order` with the identity at index 0. Every group
//! carries a faithful permutation action (its *natural* action) so that
//! factorization types of defining polynomials can be matched against cycle
//! types; the regular action is always available as well.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

pub type ElementId = usize;

/// Largest group order for which subgroup lattices are enumerated.
pub const MAX_SUBGROUP_ORDER: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    #[serde(serialize_with = "class_label::one")]
    pub index: usize,
    pub representative: ElementId,
    pub members: Vec<ElementId>,
    /// Common order of the members.
    pub order: usize,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Which permutation action to use when reading off cycle types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Natural,
    Regular,
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    perms: Vec<Vec<u8>>,
    mul: Vec<ElementId>,
    inverse: Vec<ElementId>,
    orders: Vec<usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

/// A subgroup stored as a bitmask over element ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup(pub u128);

impl Subgroup {
    pub fn contains(&self, g: ElementId) -> bool {
        self.0 >> g & 1 == 1
    }

    pub fn order(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn elements(&self) -> Vec<ElementId> {
        (0..128).filter(|&g| self.contains(g)).collect()
    }
}

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    // (a∘b)(i) = a(b(i))
    b.iter().map(|&i| a[i as usize]).collect()
}

impl FiniteGroup {
    /// Builds the group generated by the given permutations of `0..degree`.
    pub fn from_generators(name: &str, degree: usize, generators: &[Vec<u8>]) -> Result<Self> {
        if degree == 0 || degree > 255 {
            return Err(Error::InvalidGroup(format!("degree {degree} unsupported")));
        }
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree {
                return Err(Error::InvalidGroup("generator has wrong degree".into()));
            }
            for &i in g {
                if i as usize >= degree || seen[i as usize] {
                    return Err(Error::InvalidGroup("generator is not a permutation".into()));
                }
                seen[i as usize] = true;
            }
        }
        let identity: Vec<u8> = (0..degree as u8).collect();
        let mut elements: BTreeSet<Vec<u8>> = BTreeSet::new();
        elements.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = compose(g, &x);
                if elements.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Self::from_permutations(name, degree, elements.into_iter().collect())
    }

    fn from_permutations(name: &str, degree: usize, perms: Vec<Vec<u8>>) -> Result<Self> {
        let n = perms.len();
        let index: HashMap<&[u8], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = compose(&perms[a], &perms[b]);
                mul[a * n + b] = *index
                    .get(c.as_slice())
                    .ok_or_else(|| Error::InvalidGroup("not closed under composition".into()))?;
            }
        }
        Self::assemble(name.to_string(), degree, perms, mul)
    }

    /// Builds a group from a Cayley table `table[a][b] = a·b`, checking the
    /// group axioms. The natural action is the regular one.
    pub fn from_table(name: &str, table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > 255 {
            return Err(Error::InvalidGroup(format!("order {n} unsupported")));
        }
        if table
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&c| c >= n))
        {
            return Err(Error::InvalidGroup(
                "table is not a closed n×n operation".into(),
            ));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == e && table[b][a] == e) {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup("operation is not associative".into()));
                    }
                }
            }
        }
        // Regular representation: g ↦ (x ↦ g·x).
        let perms: Vec<Vec<u8>> = (0..n)
            .map(|g| (0..n).map(|x| table[g][x] as u8).collect())
            .collect();
        let mut sorted = perms.clone();
        sorted.sort();
        Self::from_permutations(name, n, sorted)
    }

    fn assemble(name: String, degree: usize, perms: Vec<Vec<u8>>, mul: Vec<usize>) -> Result<Self> {
        let n = perms.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e * n + a] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        debug_assert_eq!(identity, 0);
        let inverse: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| mul[a * n + b] == identity).unwrap())
            .collect();
        let orders: Vec<usize> = (0..n)
            .map(|a| {
                let mut x = a;
                let mut k = 1;
                while x != identity {
                    x = mul[a * n + x];
                    k += 1;
                }
                k
            })
            .collect();
        let mut class_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n)
                .map(|h| mul[mul[h * n + g] * n + inverse[h]])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            members.sort_unstable();
            for &m in &members {
                class_of[m] = raw.len();
            }
            raw.push(members);
        }
        let mut order_keys: Vec<usize> = (0..raw.len()).collect();
        order_keys.sort_by_key(|&c| (orders[raw[c][0]], raw[c][0]));
        let mut classes = Vec::with_capacity(raw.len());
        for (new_index, &old) in order_keys.iter().enumerate() {
            let members = raw[old].clone();
            for &m in &members {
                class_of[m] = new_index;
            }
            classes.push(ConjugacyClass {
                index: new_index,
                representative: members[0],
                order: orders[members[0]],
                members,
            });
        }
        Ok(FiniteGroup {
            name,
            degree,
            perms,
            mul,
            inverse,
            orders,
            classes,
            class_of,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn identity(&self) -> ElementId {
        0
    }

    /// Degree of the natural permutation action.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul[a * self.order() + b]
    }

    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inverse[a]
    }

    pub fn pow(&self, a: ElementId, k: u64) -> ElementId {
        let k = (k % self.orders[a] as u64) as usize;
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: ElementId) -> usize {
        self.orders[a]
    }

    pub fn permutation(&self, a: ElementId) -> &[u8] {
        &self.perms[a]
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, a: ElementId) -> usize {
        self.class_of[a]
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    /// Picks the action whose degree equals `degree`: the natural one, or the
    /// regular one when `degree == |G|`.
    pub fn action_of_degree(&self, degree: usize) -> Option<Action> {
        if degree == self.degree {
            Some(Action::Natural)
        } else if degree == self.order() {
            Some(Action::Regular)
        } else {
            None
        }
    }

    /// Cycle type (nonincreasing) of `a` in the given action.
    pub fn cycle_type(&self, a: ElementId, action: Action) -> Vec<usize> {
        let mut ty = match action {
            Action::Natural => {
                let p = &self.perms[a];
                let mut seen = vec![false; p.len()];
                let mut ty = Vec::new();
                for start in 0..p.len() {
                    if seen[start] {
                        continue;
                    }
                    let mut len = 0;
                    let mut i = start;
                    while !seen[i] {
                        seen[i] = true;
                        i = p[i] as usize;
                        len += 1;
                    }
                    ty.push(len);
                }
                ty
            }
            Action::Regular => {
                let d = self.orders[a];
                vec![d; self.order() / d]
            }
        };
        ty.sort_unstable_by(|x, y| y.cmp(x));
        ty
    }

    /// Classes whose members have the given cycle type in `action`.
    pub fn classes_with_cycle_type(&self, ty: &[usize], action: Action) -> Vec<usize> {
        self.classes
            .iter()
            .filter(|c| self.cycle_type(c.representative, action) == ty)
            .map(|c| c.index)
            .collect()
    }

    pub fn subgroup_generated(&self, gens: &[ElementId]) -> Subgroup {
        assert!(self.order() <= MAX_SUBGROUP_ORDER);
        let mut mask: u128 = 1;
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if mask >> y & 1 == 0 {
                    mask |= 1 << y;
                    frontier.push(y);
                }
            }
        }
        Subgroup(mask)
    }

    /// All subgroups, ordered by order and then by bitmask.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        if self.order() > MAX_SUBGROUP_ORDER {
            return Err(Error::InvalidGroup(format!(
                "subgroup enumeration limited to order {MAX_SUBGROUP_ORDER}"
            )));
        }
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        let mut queue: VecDeque<Subgroup> = VecDeque::new();
        for g in 0..self.order() {
            let h = self.subgroup_generated(&[g]);
            if found.insert(h) {
                queue.push_back(h);
            }
        }
        while let Some(h) = queue.pop_front() {
            let gens = h.elements();
            for g in 0..self.order() {
                if h.contains(g) {
                    continue;
                }
                let mut with_g = gens.clone();
                with_g.push(g);
                let k = self.subgroup_generated(&with_g);
                if found.insert(k) {
                    queue.push_back(k);
                }
            }
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by_key(|h| (h.order(), h.0));
        Ok(all)
    }

    pub fn is_normal(&self, h: Subgroup) -> bool {
        h.elements()
            .iter()
            .all(|&x| (0..self.order()).all(|g| h.contains(self.mul(self.mul(g, x), self.inv(g)))))
    }

    pub fn is_abelian_subgroup(&self, h: Subgroup) -> bool {
        let els = h.elements();
        els.iter()
            .all(|&a| els.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The conjugacy class of the subgroup `h` containing `g ∈ h`.
    pub fn class_in_subgroup(&self, h: Subgroup, g: ElementId) -> Vec<ElementId> {
        h.elements()
            .into_iter()
            .map(|x| self.mul(self.mul(x, g), self.inv(x)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

fn cycle(degree: usize) -> Vec<u8> {
    (0..degree).map(|i| ((i + 1) % degree) as u8).collect()
}

fn transposition(degree: usize, a: usize, b: usize) -> Vec<u8> {
    let mut p: Vec<u8> = (0..degree as u8).collect();
    p.swap(a, b);
    p
}

fn parse_index(label: &str, prefix: &str) -> Option<usize> {
    label.strip_prefix(prefix).and_then(|s| s.parse().ok())
}

/// Builds a group from the built-in catalog: `C1`–`C12`, `S1`–`S5`, `A1`–`A5`,
/// and dihedral groups `D4`–`D12` (order 2n, acting on the n-gon; `D4` is the
/// Klein four-group acting regularly, also available as `V4`).
pub fn build_group(label: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownGroup(label.to_string());
    if label == "V4" {
        return build_group("D4").map(|mut g| {
            g.name = "V4".into();
            g
        });
    }
    if let Some(d) = parse_index(label, "C") {
        if !(1..=12).contains(&d) {
            return Err(unknown());
        }
        return FiniteGroup::from_generators(label, d, &[cycle(d)]);
    }
    if let Some(n) = parse_index(label, "S") {
        if !(1..=5).contains(&n) {
            return Err(unknown());
        }
        let gens = if n == 1 {
            vec![]
        } else {
            vec![cycle(n), transposition(n, 0, 1)]
        };
        return FiniteGroup::from_generators(label, n, &gens);
    }
    if let Some(n) = parse_index(label, "A") {
        if !(1..=5).contains(&n) {
            return Err(unknown());
        }
        // 3-cycles (0 1 i) generate A_n.
        let gens: Vec<Vec<u8>> = (2..n)
            .map(|i| {
                let mut p: Vec<u8> = (0..n as u8).collect();
                p[0] = 1;
                p[1] = i as u8;
                p[i] = 0;
                p
            })
            .collect();
        return FiniteGroup::from_generators(label, n, &gens);
    }
    if let Some(two_n) = parse_index(label, "D") {
        if two_n % 2 != 0 || !(4..=12).contains(&two_n) {
            return Err(unknown());
        }
        let n = two_n / 2;
        if n == 2 {
            let a = vec![1, 0, 3, 2];
            let b = vec![2, 3, 0, 1];
            return FiniteGroup::from_generators(label, 4, &[a, b]);
        }
        let reflection: Vec<u8> = (0..n).map(|i| ((n - i) % n) as u8).collect();
        return FiniteGroup::from_generators(label, n, &[cycle(n), reflection]);
    }
    Err(unknown())
}

/// Serializers writing class indices as 1-based labels (class 1 is the
/// identity), matching the text form accepted on input.
pub mod class_label {
    use serde::Serializer;

    pub fn one<S: Serializer>(c: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*c as u64 + 1)
    }

    pub fn opt<S: Serializer>(c: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
        match c {
            Some(c) => s.serialize_some(&(*c as u64 + 1)),
            None => s.serialize_none(),
        }
    }

    pub fn many<S: Serializer>(cs: &[usize], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(cs.iter().map(|c| *c as u64 + 1))
    }
}
