//! Finite groups given by Cayley tables.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Default bound on the group order for exhaustive subgroup enumeration.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    id: usize,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates the table (closure, identity, inverses, associativity).
    pub fn from_table(mul: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not an n x n table over 0..n".into()));
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul[a][b] == id && mul[b][a] == id)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::InvalidGroup(format!("{} labels for order {n}", l.len())))
            }
            Some(l) => {
                if l.iter().collect::<BTreeSet<_>>().len() != n {
                    return Err(Error::InvalidGroup("duplicate labels".into()));
                }
                l
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Self { mul, inv, id, labels })
    }

    /// Closure of permutation generators (images of `0..degree`). The
    /// identity gets index 0; the rest appear in breadth-first order.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.first().map_or(0, Vec::len);
        for g in generators {
            let mut seen = g.clone();
            seen.sort_unstable();
            if g.len() != degree || seen != (0..degree).collect::<Vec<_>>() {
                return Err(Error::InvalidGroup(format!("{g:?} is not a permutation of 0..{degree}")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p: Vec<usize> = (0..degree).map(|x| elements[i][g[x]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        // (a * b)(x) = a(b(x))
                        let p: Vec<usize> = (0..degree).map(|x| elements[a][elements[b][x]]).collect();
                        index[&p]
                    })
                    .collect()
            })
            .collect();
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::from_table(mul, Some(labels))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n` with element `k` at index `k`.
    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(mul, Some((0..n).map(|k| k.to_string()).collect())).expect("cyclic table")
    }

    /// Symmetric group on `0..n`, from a transposition and an n-cycle.
    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            return Self::trivial();
        }
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(&[t, c]).expect("permutations")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let mul = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        let labels = (0..n)
            .map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb)))
            .collect();
        Self::from_table(mul, Some(labels)).expect("product table")
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.id {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn power(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.id, |acc, _| self.mul(acc, g))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `h g h⁻¹`
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    /// Classes ordered by their least element; each class sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|h| self.conjugate(g, h)).collect();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&h| self.mul(g, h) == self.mul(h, g))
            .collect()
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| self.centralizer(g).len() == self.order())
            .collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        !s.is_empty()
            && s.iter().all(|&x| x < self.order())
            && s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.mul(a, b))))
    }

    pub fn normalizer(&self, subgroup: &[usize]) -> Result<Vec<usize>> {
        if !self.is_subgroup(subgroup) {
            return Err(Error::NotSubgroup(format!("{subgroup:?}")));
        }
        let s: BTreeSet<usize> = subgroup.iter().copied().collect();
        Ok((0..self.order())
            .filter(|&g| s.iter().all(|&h| s.contains(&self.conjugate(h, g))))
            .collect())
    }

    pub fn generated_subgroup(&self, generators: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.id]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.id]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Every subgroup, as sorted element lists; joins of cyclic subgroups
    /// are closed under pairwise joins until nothing new appears.
    pub fn subgroups(&self, max_order: usize) -> Result<Vec<Vec<usize>>> {
        if self.order() > max_order {
            return Err(Error::GroupTooLarge {
                order: self.order(),
                bound: max_order,
            });
        }
        let mut all: BTreeSet<Vec<usize>> = (0..self.order())
            .map(|g| self.generated_subgroup(&[g]))
            .collect();
        loop {
            let current: Vec<Vec<usize>> = all.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    let gens: Vec<usize> = a.iter().chain(b).copied().collect();
                    grew |= all.insert(self.generated_subgroup(&gens));
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = all.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Ok(out)
    }

    /// Subgroups grouped into conjugacy classes, ordered by subgroup order.
    pub fn subgroup_classes(&self, max_order: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        let subgroups = self.subgroups(max_order)?;
        let mut assigned = vec![false; subgroups.len()];
        let mut classes = Vec::new();
        for (i, s) in subgroups.iter().enumerate() {
            if assigned[i] {
                continue;
            }
            let conjugates: BTreeSet<Vec<usize>> = (0..self.order())
                .map(|g| {
                    let mut c: Vec<usize> = s.iter().map(|&h| self.conjugate(h, g)).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            for (j, t) in subgroups.iter().enumerate() {
                if conjugates.contains(t) {
                    assigned[j] = true;
                }
            }
            classes.push(conjugates.into_iter().collect());
        }
        Ok(classes)
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        let parts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        out.push_str(&format!("({})", parts.join(" ")));
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// A map between finite groups, verified to be a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidInput(format!(
                "map of length {} between groups of order {} and {}",
                map.len(),
                source.order(),
                target.order()
            )));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::NotHomomorphism { a, b });
                }
            }
        }
        Ok(Self { map })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self {
            map: (0..g.order()).collect(),
        }
    }

    pub fn trivial(source: &FiniteGroup, target: &FiniteGroup) -> Self {
        Self {
            map: vec![target.identity(); source.order()],
        }
    }

    /// Inner automorphism `x ↦ g x g⁻¹`.
    pub fn conjugation(group: &FiniteGroup, g: usize) -> Self {
        Self {
            map: (0..group.order()).map(|x| group.conjugate(x, g)).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    pub fn is_bijective_onto(&self, target: &FiniteGroup) -> bool {
        self.is_injective() && self.map.len() == target.order()
    }

    pub fn kernel(&self, source: &FiniteGroup, target: &FiniteGroup) -> Vec<usize> {
        (0..source.order())
            .filter(|&x| self.map[x] == target.identity())
            .collect()
    }

    pub fn image(&self) -> Vec<usize> {
        self.map
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}
