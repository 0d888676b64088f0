//! The orbit category O_G on coset objects G/H.
//!
//! A morphism G/H → G/K is the coset aK with H ⊆ aKa⁻¹, acting by
//! gH ↦ gaK; two cosets give the same morphism iff they agree, so morphisms
//! are stored as the minimal element of their coset. Spectral-sequence code
//! reads these contravariantly (as O_G^op) at the use site.

use crate::error::Error;
use crate::fgroup::SubgroupLattice;
use std::collections::BTreeSet;

/// A morphism G/src → G/dst in O_G, with `coset` the canonical (minimal)
/// representative of the defining coset a·dst.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitMorphism {
    pub src: usize,
    pub dst: usize,
    pub coset: usize,
}

/// Minimal element of the coset a·K.
pub fn canonical_coset(lat: &SubgroupLattice, k: usize, a: usize) -> usize {
    lat.subgroups[k]
        .members
        .iter()
        .map(|&x| lat.group.mul(a, x))
        .min()
        .expect("subgroups are nonempty")
}

/// H ⊆ a·K·a⁻¹, the condition for gH ↦ gaK to be well defined and
/// equivariant.
pub fn is_admissible(lat: &SubgroupLattice, h: usize, k: usize, a: usize) -> bool {
    let g = &lat.group;
    let a_inv = g.inv(a);
    lat.subgroups[h]
        .members
        .iter()
        .all(|&x| lat.subgroups[k].contains(g.mul(g.mul(a_inv, x), a)))
}

pub fn morphism(lat: &SubgroupLattice, src: usize, dst: usize, a: usize) -> Option<OrbitMorphism> {
    if is_admissible(lat, src, dst, a) {
        Some(OrbitMorphism { src, dst, coset: canonical_coset(lat, dst, a) })
    } else {
        None
    }
}

pub fn identity(lat: &SubgroupLattice, h: usize) -> OrbitMorphism {
    morphism(lat, h, h, 0).expect("identity coset is always admissible")
}

/// All morphisms G/src → G/dst, in canonical coset order.
pub fn hom_set(lat: &SubgroupLattice, src: usize, dst: usize) -> Vec<OrbitMorphism> {
    let order = lat.group.order();
    let mut seen = vec![false; order];
    let mut out = Vec::new();
    for a in 0..order {
        if seen[a] {
            continue;
        }
        for &x in &lat.subgroups[dst].members {
            seen[lat.group.mul(a, x)] = true;
        }
        if is_admissible(lat, src, dst, a) {
            out.push(OrbitMorphism { src, dst, coset: a });
        }
    }
    out
}

/// Composite of f : G/H → G/K and g : G/K → G/M is the coset of the product
/// of representatives.
pub fn compose(lat: &SubgroupLattice, f: &OrbitMorphism, g: &OrbitMorphism) -> Result<OrbitMorphism, Error> {
    if f.dst != g.src {
        return Err(Error::Internal(format!(
            "cannot compose morphisms with mismatched endpoints ({} vs {})",
            f.dst, g.src
        )));
    }
    let a = lat.group.mul(f.coset, g.coset);
    Ok(OrbitMorphism { src: f.src, dst: g.dst, coset: canonical_coset(lat, g.dst, a) })
}

/// Morphisms are isomorphisms exactly when they do not move the isotropy
/// class: H ⊆ aKa⁻¹ with equality.
pub fn is_isomorphism(lat: &SubgroupLattice, f: &OrbitMorphism) -> bool {
    lat.conjugate(f.coset, f.dst) == f.src
}

/// Aut(G/H) as a map from automorphism cosets to Weyl-group element ids;
/// the bijection underlying Aut(G/H) ≅ W H.
pub fn aut_to_weyl(lat: &SubgroupLattice, h: usize, f: &OrbitMorphism) -> Option<usize> {
    if f.src != h || f.dst != h || !is_isomorphism(lat, f) {
        return None;
    }
    lat.weyl_group(h).project(f.coset)
}

/// The skeleton Λ^H_m of the slice E^H_m: one object per subgroup K with
/// H ≤ K and len_G K ≤ m, as the inclusion-induced map.
#[derive(Clone, Debug)]
pub struct SliceSkeleton {
    pub h: usize,
    pub m: usize,
    /// (subgroup K, the morphism G/H → G/K in O_G given by the inclusion)
    pub objects: Vec<(usize, OrbitMorphism)>,
}

pub fn slice_skeleton(lat: &SubgroupLattice, h: usize, m: usize) -> SliceSkeleton {
    let objects = lat
        .slice_skeleton(h, m)
        .into_iter()
        .map(|k| (k, morphism(lat, h, k, 0).expect("inclusions are admissible")))
        .collect();
    SliceSkeleton { h, m, objects }
}

/// Factor a slice object ψ : G/H → G/K as (unique skeleton object
/// G/H → G/J) followed by the unique isomorphism G/J → G/K.
pub fn slice_factorization(
    lat: &SubgroupLattice,
    psi: &OrbitMorphism,
) -> (usize, OrbitMorphism) {
    let j = lat.conjugate(psi.coset, psi.dst);
    let iso = OrbitMorphism { src: j, dst: psi.dst, coset: canonical_coset(lat, psi.dst, psi.coset) };
    (j, iso)
}

/// The skeleton data of the twisted category Ẽ^H_m: objects are N_G H-orbit
/// representatives of subgroups K ⊇ H with len_G K ≤ m; morphisms are the
/// underlying orbit-category maps that commute over G/H up to the W H-twist.
#[derive(Clone, Debug)]
pub struct TwistedCategory {
    pub h: usize,
    pub m: usize,
    pub skeleton: Vec<usize>,
}

/// Distinct N_G H-conjugates of L: the class ⟨ℓ*⟩ of Def-style skeleton
/// bookkeeping. Size is [N_G H : N_G H ∩ N_G L].
pub fn conjugacy_orbit_class(lat: &SubgroupLattice, h: usize, l: usize) -> Vec<usize> {
    let nh = &lat.subgroups[lat.normalizer[h]].members;
    let set: BTreeSet<usize> = nh.iter().map(|&a| lat.conjugate(a, l)).collect();
    set.into_iter().collect()
}

pub fn twisted_category(lat: &SubgroupLattice, h: usize, m: usize) -> TwistedCategory {
    let mut skeleton = Vec::new();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for k in lat.slice_skeleton(h, m) {
        if seen.contains(&k) {
            continue;
        }
        let class = conjugacy_orbit_class(lat, h, k);
        // representative: minimal subgroup index in the N_G H-class
        let rep = *class.iter().filter(|&&x| lat.contains[h][x]).min().unwrap_or(&k);
        skeleton.push(rep);
        seen.extend(class.into_iter().filter(|&x| lat.contains[h][x]));
    }
    skeleton.sort_unstable();
    skeleton.dedup();
    TwistedCategory { h, m, skeleton }
}

/// Morphisms i*_K → ℓ*_L in Ẽ^H_m between skeleton objects (K, L ⊇ H):
/// orbit-category maps G/L → G/K whose coset representative lies in N_G H·K.
pub fn twisted_hom(lat: &SubgroupLattice, h: usize, k: usize, l: usize) -> Vec<OrbitMorphism> {
    let nh: BTreeSet<usize> = lat.subgroups[lat.normalizer[h]].members.iter().copied().collect();
    hom_set(lat, l, k)
        .into_iter()
        .filter(|f| {
            lat.subgroups[k]
                .members
                .iter()
                .any(|&x| nh.contains(&lat.group.mul(f.coset, x)))
        })
        .collect()
}
