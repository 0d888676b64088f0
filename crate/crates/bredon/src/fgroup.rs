//! Finite groups, subgroup lattices, conjugacy machinery and the length
//! filtration.
//!
//! Elements are integers 0..|G|-1 with 0 the identity. Subgroups are sorted
//! member lists, ordered canonically by (order, member tuple); the conjugacy
//! class representative is the minimal subgroup in that order, so every
//! derived structure is deterministic.

use crate::error::Error;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_ORDER_CAP: usize = 100;

/// Group input document: permutation generators on n points (images, not
/// cycles) or an explicit Cayley table over element ids.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupInput {
    Permutations { degree: usize, permutations: Vec<Vec<usize>> },
    Cayley { cayley: Vec<Vec<usize>> },
}

/// A finite group as a validated multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup { order: 1, mul: vec![0], inv: vec![0] }
    }

    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn from_mul_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup, Error> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty Cayley table".into()));
        }
        let mut mul = vec![0usize; n * n];
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("Cayley row {i} has wrong length")));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::InvalidGroup(format!("entry {v} out of range at ({i},{j})")));
                }
                mul[i * n + j] = v;
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            if mul[a * n] != a || mul[a] != a {
                return Err(Error::InvalidGroup("element 0 is not a two-sided identity".into()));
            }
            for b in 0..n {
                if mul[a * n + b] == 0 && mul[b * n + a] == 0 {
                    inv[a] = b;
                }
            }
            if inv[a] == usize::MAX {
                return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse")));
            }
        }
        let g = FiniteGroup { order: n, mul, inv };
        g.check_associativity()?;
        Ok(g)
    }

    fn check_associativity(&self) -> Result<(), Error> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Closure of a subset under multiplication (a subgroup, since G is finite).
    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut members: BTreeSet<usize> = seed.iter().copied().collect();
        members.insert(0);
        loop {
            let snapshot: Vec<usize> = members.iter().copied().collect();
            let before = members.len();
            for &a in &snapshot {
                for &b in &snapshot {
                    members.insert(self.mul(a, b));
                }
            }
            if members.len() == before {
                break;
            }
        }
        members.into_iter().collect()
    }
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    // apply b first, then a
    b.iter().map(|&i| a[i]).collect()
}

/// Build and validate a group from either input form. Permutation elements
/// are ordered lexicographically by image tuple, which puts the identity at
/// id 0; Cayley input keeps its given ids.
pub fn build_group(input: &GroupInput, order_cap: usize) -> Result<FiniteGroup, Error> {
    match input {
        GroupInput::Cayley { cayley } => FiniteGroup::from_mul_table(cayley.clone()),
        GroupInput::Permutations { degree, permutations } => {
            let n = *degree;
            if n == 0 {
                return Err(Error::InvalidGroup("permutation degree must be positive".into()));
            }
            for (i, p) in permutations.iter().enumerate() {
                let mut seen = vec![false; n];
                if p.len() != n {
                    return Err(Error::InvalidGroup(format!("generator {i} has wrong degree")));
                }
                for &x in p {
                    if x >= n || seen[x] {
                        return Err(Error::InvalidGroup(format!("generator {i} is not a permutation")));
                    }
                    seen[x] = true;
                }
            }
            let id: Vec<usize> = (0..n).collect();
            let mut elements: BTreeSet<Vec<usize>> = BTreeSet::new();
            elements.insert(id.clone());
            let mut frontier = vec![id];
            while let Some(p) = frontier.pop() {
                for g in permutations {
                    let q = compose_perm(&p, g);
                    if elements.insert(q.clone()) {
                        if elements.len() > order_cap {
                            return Err(Error::InvalidGroup(format!(
                                "generator closure exceeds the order cap {order_cap}"
                            )));
                        }
                        frontier.push(q);
                    }
                }
            }
            let elems: Vec<Vec<usize>> = elements.into_iter().collect();
            let index: BTreeMap<&Vec<usize>, usize> =
                elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
            let order = elems.len();
            let mut mul = vec![0usize; order * order];
            for (i, a) in elems.iter().enumerate() {
                for (j, b) in elems.iter().enumerate() {
                    mul[i * order + j] = index[&compose_perm(a, b)];
                }
            }
            let mut inv = vec![0usize; order];
            for i in 0..order {
                inv[i] = (0..order).find(|&j| mul[i * order + j] == 0).unwrap();
            }
            let g = FiniteGroup { order, mul, inv };
            g.check_associativity()?;
            Ok(g)
        }
    }
}

/// A subgroup as its sorted member list plus its position in the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub members: Vec<usize>,
    pub index: usize,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// The quotient A/B of subgroups of a fixed ambient group, realized as a
/// FiniteGroup on coset ids. Coset ids are ordered by minimal member, so the
/// identity coset (the one containing 0 when A contains it) comes first.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: FiniteGroup,
    /// ambient element -> coset id (None outside A)
    pub proj: Vec<Option<usize>>,
    /// coset id -> minimal representative
    pub reps: Vec<usize>,
}

impl QuotientGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn project(&self, g: usize) -> Option<usize> {
        self.proj[g]
    }
}

/// Quotient of `a_members` by the normal subgroup `b_members`.
pub fn quotient_group(
    g: &FiniteGroup,
    a_members: &[usize],
    b_members: &[usize],
) -> Result<QuotientGroup, Error> {
    let a_set: BTreeSet<usize> = a_members.iter().copied().collect();
    let b_set: BTreeSet<usize> = b_members.iter().copied().collect();
    if !b_set.is_subset(&a_set) {
        return Err(Error::Internal("quotient: B is not contained in A".into()));
    }
    for &a in &a_set {
        for &b in &b_set {
            if !b_set.contains(&g.conj(a, b)) {
                return Err(Error::Internal("quotient: B is not normal in A".into()));
            }
        }
    }
    // left cosets aB, keyed by sorted member list
    let mut cosets: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    for &a in &a_set {
        let coset: Vec<usize> = {
            let mut c: Vec<usize> = b_set.iter().map(|&b| g.mul(a, b)).collect();
            c.sort_unstable();
            c
        };
        cosets.insert(coset, ());
    }
    let mut coset_lists: Vec<Vec<usize>> = cosets.into_keys().collect();
    // order by minimal member; sorted lists compare by first entry anyway
    coset_lists.sort();
    let mut proj = vec![None; g.order()];
    for (i, c) in coset_lists.iter().enumerate() {
        for &x in c {
            proj[x] = Some(i);
        }
    }
    let reps: Vec<usize> = coset_lists.iter().map(|c| c[0]).collect();
    let m = coset_lists.len();
    let mut mul = vec![0usize; m * m];
    for i in 0..m {
        for j in 0..m {
            mul[i * m + j] = proj[g.mul(reps[i], reps[j])]
                .ok_or_else(|| Error::Internal("quotient multiplication left A".into()))?;
        }
    }
    let mut inv = vec![0usize; m];
    for i in 0..m {
        inv[i] = proj[g.inv(reps[i])].unwrap();
    }
    let qg = FiniteGroup { order: m, mul, inv };
    qg.check_associativity()?;
    Ok(QuotientGroup { group: qg, proj, reps })
}

/// The full subgroup lattice with conjugacy, normalizers, Weyl quotients and
/// the length filtration of the orbit category.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    pub group: FiniteGroup,
    pub subgroups: Vec<Subgroup>,
    index_of_members: BTreeMap<Vec<usize>, usize>,
    /// contains[i][j]: subgroup i ⊆ subgroup j
    pub contains: Vec<Vec<bool>>,
    /// conjugacy class id per subgroup
    pub class_of: Vec<usize>,
    /// class id -> representative subgroup index (minimal in canonical order)
    pub class_reps: Vec<usize>,
    /// minimal g with g·H·g⁻¹ = representative of H's class
    pub conjugator_to_rep: Vec<usize>,
    /// subgroup index of N_G H per subgroup
    pub normalizer: Vec<usize>,
    /// W H = N_G H / H per subgroup
    pub weyl: Vec<QuotientGroup>,
    /// len_G H per subgroup
    pub length: Vec<usize>,
    /// strata[k] = subgroups of length exactly k
    pub strata: Vec<Vec<usize>>,
    pub trivial_index: usize,
    pub full_index: usize,
}

/// Subquotient Weyl groups for a nested pair H ≤ K: W^K_H ≤ W H covering
/// W̄_H^K ≤ W K through the surjection π.
#[derive(Clone, Debug)]
pub struct SubquotientWeyl {
    /// W^K_H = (N_G K ∩ N_G H)/H as element ids of W H
    pub upper: Vec<usize>,
    /// W̄_H^K = (N_G K ∩ N_G H)/(K ∩ N_G H) as element ids of W K
    pub lower: Vec<usize>,
    /// π : W^K_H → W̄_H^K on those ids
    pub pi: BTreeMap<usize, usize>,
    /// W^K_H as an abstract group
    pub upper_group: QuotientGroup,
    /// W̄_H^K as an abstract group
    pub lower_group: QuotientGroup,
}

pub fn intersect_members(a: &[usize], b: &[usize]) -> Vec<usize> {
    let bs: BTreeSet<usize> = b.iter().copied().collect();
    a.iter().copied().filter(|x| bs.contains(x)).collect()
}

/// Enumerate every subgroup of `g` and populate the whole lattice.
pub fn enumerate_subgroups(g: &FiniteGroup, order_cap: usize) -> Result<SubgroupLattice, Error> {
    if g.order() > order_cap {
        return Err(Error::InvalidGroup(format!(
            "group order {} exceeds the cap {order_cap}",
            g.order()
        )));
    }
    // cyclic subgroups, then close under pairwise joins
    let mut subs: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut cyclic: Vec<Vec<usize>> = Vec::new();
    for x in 0..g.order() {
        let c = g.subgroup_closure(&[x]);
        if subs.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    loop {
        let snapshot: Vec<Vec<usize>> = subs.iter().cloned().collect();
        let before = subs.len();
        for s in &snapshot {
            for c in &cyclic {
                let mut seed = s.clone();
                seed.extend_from_slice(c);
                subs.insert(g.subgroup_closure(&seed));
            }
        }
        if subs.len() == before {
            break;
        }
    }
    let mut member_lists: Vec<Vec<usize>> = subs.into_iter().collect();
    member_lists.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let subgroups: Vec<Subgroup> = member_lists
        .iter()
        .enumerate()
        .map(|(index, members)| Subgroup { members: members.clone(), index })
        .collect();
    let index_of_members: BTreeMap<Vec<usize>, usize> =
        member_lists.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let count = subgroups.len();

    let contains: Vec<Vec<bool>> = (0..count)
        .map(|i| {
            (0..count)
                .map(|j| {
                    let sj: BTreeSet<usize> = subgroups[j].members.iter().copied().collect();
                    subgroups[i].members.iter().all(|x| sj.contains(x))
                })
                .collect()
        })
        .collect();

    let conj_members = |g_elt: usize, idx: usize| -> Vec<usize> {
        let mut m: Vec<usize> =
            subgroups[idx].members.iter().map(|&x| g.conj(g_elt, x)).collect();
        m.sort_unstable();
        m
    };

    // conjugacy classes with minimal representative
    let mut class_of = vec![usize::MAX; count];
    let mut class_reps = Vec::new();
    for i in 0..count {
        if class_of[i] != usize::MAX {
            continue;
        }
        let class_id = class_reps.len();
        class_reps.push(i);
        for e in 0..g.order() {
            let image = index_of_members[&conj_members(e, i)];
            class_of[image] = class_id;
        }
    }
    // i is minimal in its class because enumeration goes in canonical order
    let conjugator_to_rep: Vec<usize> = (0..count)
        .map(|i| {
            let rep = class_reps[class_of[i]];
            (0..g.order())
                .find(|&e| index_of_members[&conj_members(e, i)] == rep)
                .expect("some conjugator reaches the class representative")
        })
        .collect();

    let normalizer: Vec<usize> = (0..count)
        .map(|i| {
            let n: Vec<usize> = (0..g.order())
                .filter(|&e| conj_members(e, i) == subgroups[i].members)
                .collect();
            index_of_members[&n]
        })
        .collect();

    let weyl: Vec<QuotientGroup> = (0..count)
        .map(|i| quotient_group(g, &subgroups[normalizer[i]].members, &subgroups[i].members))
        .collect::<Result<_, _>>()?;

    // length by longest-path dynamic programming over proper inclusions
    let full_index = count - 1;
    let mut length = vec![0usize; count];
    // subgroups sorted by order: process from largest to smallest
    for i in (0..count).rev() {
        if i == full_index {
            length[i] = 0;
            continue;
        }
        length[i] = (0..count)
            .filter(|&j| j != i && contains[i][j])
            .map(|j| 1 + length[j])
            .max()
            .ok_or_else(|| Error::Internal("proper subgroup with no over-group".into()))?;
    }
    let max_len = length[0];
    let mut strata = vec![Vec::new(); max_len + 1];
    for i in 0..count {
        strata[length[i]].push(i);
    }

    Ok(SubgroupLattice {
        group: g.clone(),
        subgroups,
        index_of_members,
        contains,
        class_of,
        class_reps,
        conjugator_to_rep,
        normalizer,
        weyl,
        length,
        strata,
        trivial_index: 0,
        full_index,
    })
}

impl SubgroupLattice {
    pub fn count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn index_of(&self, members: &[usize]) -> Option<usize> {
        let mut m = members.to_vec();
        m.sort_unstable();
        self.index_of_members.get(&m).copied()
    }

    /// Index of g·H·g⁻¹.
    pub fn conjugate(&self, g_elt: usize, h: usize) -> usize {
        let mut m: Vec<usize> =
            self.subgroups[h].members.iter().map(|&x| self.group.conj(g_elt, x)).collect();
        m.sort_unstable();
        self.index_of_members[&m]
    }

    pub fn rep_of(&self, h: usize) -> usize {
        self.class_reps[self.class_of[h]]
    }

    /// Maximal possible length, attained by the trivial subgroup.
    pub fn max_length(&self) -> usize {
        self.length[self.trivial_index]
    }

    pub fn intersection(&self, a: usize, b: usize) -> usize {
        let m = intersect_members(&self.subgroups[a].members, &self.subgroups[b].members);
        self.index_of_members[&m]
    }

    /// Class representatives in stratum k, in canonical order.
    pub fn stratum_class_reps(&self, k: usize) -> Vec<usize> {
        if k >= self.strata.len() {
            return Vec::new();
        }
        let mut reps: Vec<usize> = self.strata[k]
            .iter()
            .map(|&h| self.rep_of(h))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        reps.sort_unstable();
        reps
    }

    /// W H together with the quotient map N_G H → W H.
    pub fn weyl_group(&self, h: usize) -> &QuotientGroup {
        &self.weyl[h]
    }

    /// Subgroups K with H ≤ K and len_G K ≤ m: objects of the slice skeleton.
    pub fn slice_skeleton(&self, h: usize, m: usize) -> Vec<usize> {
        (0..self.count())
            .filter(|&k| self.contains[h][k] && self.length[k] <= m)
            .collect()
    }

    /// W^K_H and W̄_H^K with the surjection between them (H ≤ K required).
    pub fn subquotient_weyl(&self, h: usize, k: usize) -> Result<SubquotientWeyl, Error> {
        if !self.contains[h][k] {
            return Err(Error::InvalidGroup(format!(
                "subquotient Weyl group needs H ≤ K, got subgroups {h} and {k}"
            )));
        }
        let nh = &self.subgroups[self.normalizer[h]].members;
        let nk = &self.subgroups[self.normalizer[k]].members;
        let nn = intersect_members(nh, nk);
        let h_members = &self.subgroups[h].members;
        let k_members = &self.subgroups[k].members;
        let k_cap_nh = intersect_members(k_members, nh);

        let upper_group = quotient_group(&self.group, &nn, h_members)?;
        let lower_group = quotient_group(&self.group, &nn, &k_cap_nh)?;

        let wh = &self.weyl[h];
        let wk = &self.weyl[k];
        let upper: Vec<usize> = {
            let mut v: Vec<usize> = nn.iter().filter_map(|&x| wh.project(x)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let lower: Vec<usize> = {
            let mut v: Vec<usize> = nn.iter().filter_map(|&x| wk.project(x)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut pi = BTreeMap::new();
        for &x in &nn {
            let up = wh.project(x).ok_or_else(|| Error::Internal("element outside N_G H".into()))?;
            let down = wk.project(x).ok_or_else(|| Error::Internal("element outside N_G K".into()))?;
            if let Some(prev) = pi.insert(up, down) {
                if prev != down {
                    return Err(Error::Internal("π is not well defined".into()));
                }
            }
        }
        Ok(SubquotientWeyl { upper, lower, pi, upper_group, lower_group })
    }

    /// Brute-force longest chain of proper inclusions from H up to G.
    pub fn length_by_chain_enumeration(&self, h: usize) -> usize {
        fn dfs(lat: &SubgroupLattice, at: usize) -> usize {
            if at == lat.full_index {
                return 0;
            }
            (0..lat.count())
                .filter(|&k| k != at && lat.contains[at][k])
                .map(|k| 1 + dfs(lat, k))
                .max()
                .unwrap_or(0)
        }
        dfs(self, h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn z2() -> FiniteGroup {
        build_group(
            &GroupInput::Permutations { degree: 2, permutations: vec![vec![1, 0]] },
            DEFAULT_ORDER_CAP,
        )
        .unwrap()
    }

    pub(crate) fn s3() -> FiniteGroup {
        build_group(
            &GroupInput::Permutations {
                degree: 3,
                permutations: vec![vec![1, 0, 2], vec![1, 2, 0]],
            },
            DEFAULT_ORDER_CAP,
        )
        .unwrap()
    }

    fn z4() -> FiniteGroup {
        build_group(
            &GroupInput::Permutations { degree: 4, permutations: vec![vec![1, 2, 3, 0]] },
            DEFAULT_ORDER_CAP,
        )
        .unwrap()
    }

    #[test]
    fn trivial_group_from_empty_generators() {
        let g = build_group(
            &GroupInput::Permutations { degree: 1, permutations: vec![] },
            DEFAULT_ORDER_CAP,
        )
        .unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn transposition_generates_z2() {
        assert_eq!(z2().order(), 2);
    }

    #[test]
    fn s3_has_six_subgroups() {
        let lat = enumerate_subgroups(&s3(), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(lat.group.order(), 6);
        assert_eq!(lat.count(), 6);
        assert_eq!(lat.length[lat.trivial_index], 2, "chain e < A3 < S3");
    }

    #[test]
    fn z2_lattice_lengths_and_strata() {
        let lat = enumerate_subgroups(&z2(), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(lat.count(), 2);
        assert_eq!(lat.length[lat.full_index], 0);
        assert_eq!(lat.length[lat.trivial_index], 1);
        assert_eq!(lat.strata[0], vec![lat.full_index]);
        assert_eq!(lat.strata[1], vec![lat.trivial_index]);
    }

    #[test]
    fn z4_trivial_subgroup_has_length_two() {
        let lat = enumerate_subgroups(&z4(), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(lat.count(), 3);
        assert_eq!(lat.length[lat.trivial_index], 2);
    }

    #[test]
    fn weyl_groups() {
        let lat = enumerate_subgroups(&s3(), DEFAULT_ORDER_CAP).unwrap();
        // H = G: trivial Weyl group
        assert_eq!(lat.weyl_group(lat.full_index).order(), 1);
        // H = {e}: W H = G
        assert_eq!(lat.weyl_group(lat.trivial_index).order(), 6);
        // a 2-element subgroup is self-normalizing in S3
        let c2 = (0..lat.count()).find(|&i| lat.subgroups[i].order() == 2).unwrap();
        assert_eq!(lat.normalizer[c2], c2);
        assert_eq!(lat.weyl_group(c2).order(), 1);

        let z2lat = enumerate_subgroups(&z2(), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(z2lat.weyl_group(z2lat.trivial_index).order(), 2);
    }

    #[test]
    fn subquotient_weyl_cases() {
        let lat = enumerate_subgroups(&s3(), DEFAULT_ORDER_CAP).unwrap();
        let g = lat.full_index;
        let e = lat.trivial_index;
        let a3 = (0..lat.count()).find(|&i| lat.subgroups[i].order() == 3).unwrap();

        let w = lat.subquotient_weyl(g, g).unwrap();
        assert_eq!(w.upper_group.order(), 1);
        assert_eq!(w.lower_group.order(), 1);

        // H = {e}: W^K_e = N_G K (mod e), W̄ = W K
        let c2 = (0..lat.count()).find(|&i| lat.subgroups[i].order() == 2).unwrap();
        let w = lat.subquotient_weyl(e, c2).unwrap();
        assert_eq!(w.upper_group.order(), lat.subgroups[lat.normalizer[c2]].order());
        assert_eq!(w.lower_group.order(), lat.weyl_group(c2).order());

        // H = A3, K = G: W^K_H = G/A3 = Z/2, W̄ trivial
        let w = lat.subquotient_weyl(a3, g).unwrap();
        assert_eq!(w.upper_group.order(), 2);
        assert_eq!(w.lower_group.order(), 1);
        // π surjective
        let targets: BTreeSet<usize> = w.pi.values().copied().collect();
        assert_eq!(targets.len(), w.lower_group.order());

        let err = lat.subquotient_weyl(c2, a3);
        assert!(err.is_err(), "C2 is not contained in A3");
    }

    #[test]
    fn lengths_match_chain_enumeration() {
        for g in [z2(), z4(), s3()] {
            let lat = enumerate_subgroups(&g, DEFAULT_ORDER_CAP).unwrap();
            for h in 0..lat.count() {
                assert_eq!(lat.length[h], lat.length_by_chain_enumeration(h));
            }
        }
    }

    #[test]
    fn length_strictly_decreases_up_proper_inclusions() {
        let lat = enumerate_subgroups(&s3(), DEFAULT_ORDER_CAP).unwrap();
        for h in 0..lat.count() {
            for k in 0..lat.count() {
                if h != k && lat.contains[h][k] {
                    assert!(lat.length[k] < lat.length[h]);
                }
            }
        }
    }

    #[test]
    fn conjugation_permutes_strata() {
        let lat = enumerate_subgroups(&s3(), DEFAULT_ORDER_CAP).unwrap();
        for k in 0..lat.strata.len() {
            let stratum: BTreeSet<usize> = lat.strata[k].iter().copied().collect();
            for e in 0..lat.group.order() {
                let image: BTreeSet<usize> =
                    stratum.iter().map(|&h| lat.conjugate(e, h)).collect();
                assert_eq!(stratum, image);
            }
        }
    }

    #[test]
    fn strata_partition_lattice() {
        let lat = enumerate_subgroups(&s3(), DEFAULT_ORDER_CAP).unwrap();
        let total: usize = lat.strata.iter().map(Vec::len).sum();
        assert_eq!(total, lat.count());
        let all: BTreeSet<usize> = lat.strata.iter().flatten().copied().collect();
        assert_eq!(all.len(), lat.count());
    }

    #[test]
    fn bad_cayley_tables_are_rejected() {
        // non-associative magma with 0 as identity
        let t = vec![
            vec![0, 1, 2],
            vec![1, 0, 1],
            vec![2, 1, 0],
        ];
        assert!(FiniteGroup::from_mul_table(t).is_err());
    }
}
