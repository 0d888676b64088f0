//! Built-in example bundles: small G-CW complexes with coefficient systems.
//!
//! These are the complexes the integration suite runs end to end:
//!
//! - `point_z2`: a fixed point for G = ℤ/2.
//! - `reflection_s2`: ℤ/2 acting on S² by reflection; the fixed set is the
//!   equator, the two hemispheres form a free 2-cell orbit.
//! - `antipodal_s1`: ℤ/2 acting freely on S¹.
//! - `rotation_s2`: ℤ/4 rotating S² about the polar axis (suspension of a
//!   free circle); strata 0 and 2 only, so the main spectral sequence has a
//!   genuinely nonzero d₂.
//! - `s3_sphere`: S₃ acting on S² as the suspension of the hexagonal circle
//!   in the standard 2-dimensional representation; three strata with
//!   non-normal isotropy C₂.
//!
//! Each fixture carries several coefficient systems: constant ℤ, constant
//! ℤ/2 torsion, a sign-twisted system supported on the free orbit, and for
//! S₃ a richer twisted system with nonzero values in two strata.

use crate::coeff::{constant_system_doc, MapDoc, SystemDoc, ValueDoc};
use crate::error::Error;
use crate::fgroup::{build_group, enumerate_subgroups, GroupInput, SubgroupLattice, DEFAULT_ORDER_CAP};
use crate::gcw::{load_complex, CellDoc, ComplexDoc, GCWComplex};
use serde::{Deserialize, Serialize};

/// The self-contained CLI input: group, cells and coefficient system in one
/// document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleDoc {
    pub group: GroupInput,
    pub cells: Vec<CellDoc>,
    pub system: SystemDoc,
}

impl BundleDoc {
    pub fn complex_doc(&self) -> ComplexDoc {
        ComplexDoc { group: self.group.clone(), cells: self.cells.clone() }
    }
}

/// A named complex plus its named coefficient systems (first one constant ℤ).
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    complex: ComplexDoc,
    systems: Vec<(String, SystemDoc)>,
}

/// A complex document paired with one system document.
#[derive(Clone, Debug)]
pub struct FixtureDoc {
    pub complex: ComplexDoc,
    pub system: SystemDoc,
}

impl Fixture {
    pub fn complex_doc(&self) -> &ComplexDoc {
        &self.complex
    }

    pub fn complex(&self) -> Result<GCWComplex, Error> {
        load_complex(&self.complex)
    }

    pub fn doc(&self) -> FixtureDoc {
        FixtureDoc { complex: self.complex.clone(), system: self.systems[0].1.clone() }
    }

    pub fn systems(&self) -> &[(String, SystemDoc)] {
        &self.systems
    }

    pub fn system(&self, name: &str) -> Option<&SystemDoc> {
        self.systems.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn bundle(&self, system_name: &str) -> Option<BundleDoc> {
        self.system(system_name).map(|s| BundleDoc {
            group: self.complex.group.clone(),
            cells: self.complex.cells.clone(),
            system: s.clone(),
        })
    }
}

fn lattice_of(group: &GroupInput) -> SubgroupLattice {
    let g = build_group(group, DEFAULT_ORDER_CAP).expect("fixture groups are valid");
    enumerate_subgroups(&g, DEFAULT_ORDER_CAP).expect("fixture groups are small")
}

fn constant_z(lat: &SubgroupLattice) -> (String, SystemDoc) {
    ("constant_z".into(), constant_system_doc(lat, ValueDoc { rank: 1, relations: vec![] }))
}

fn constant_z2(lat: &SubgroupLattice) -> (String, SystemDoc) {
    ("constant_z2".into(), constant_system_doc(lat, ValueDoc { rank: 1, relations: vec![vec![2]] }))
}

/// Sign-twisted system: M(G/e) = ℤ with W{e} = G acting through a character
/// χ : G → {±1}, zero at every other subgroup.
fn sign_system(lat: &SubgroupLattice, character: &dyn Fn(usize) -> i64) -> SystemDoc {
    let mut values = std::collections::BTreeMap::new();
    for &rep in &lat.class_reps {
        let rank = usize::from(rep == lat.trivial_index);
        values.insert(rep.to_string(), ValueDoc { rank, relations: vec![] });
    }
    let mut maps = Vec::new();
    for h in 0..lat.count() {
        for k in 0..lat.count() {
            if h != k && lat.contains[h][k] {
                let rows = usize::from(h == lat.trivial_index);
                maps.push(MapDoc::Inclusion { from: h, to: k, matrix: vec![vec![]; rows] });
            }
        }
    }
    for &rep in &lat.class_reps {
        let n = &lat.subgroups[lat.normalizer[rep]];
        for &e in &n.members {
            let matrix = if rep == lat.trivial_index {
                vec![vec![character(e)]]
            } else {
                Vec::new()
            };
            maps.push(MapDoc::Weyl { from: rep, to: rep, element: e, matrix });
        }
    }
    SystemDoc { values, maps }
}

pub fn point_z2() -> Fixture {
    let group = GroupInput::Permutations { degree: 2, permutations: vec![vec![1, 0]] };
    let lat = lattice_of(&group);
    let cells = vec![CellDoc { dim: 0, isotropy: vec![0, 1], boundary: vec![] }];
    let systems = vec![
        constant_z(&lat),
        constant_z2(&lat),
        ("sign".into(), sign_system(&lat, &|e| if e == 0 { 1 } else { -1 })),
    ];
    Fixture { name: "point_z2", complex: ComplexDoc { group, cells }, systems }
}

pub fn reflection_s2() -> Fixture {
    let group = GroupInput::Permutations { degree: 2, permutations: vec![vec![1, 0]] };
    let lat = lattice_of(&group);
    let g = vec![0, 1];
    let e = vec![0];
    let b = |cell, coset, coeff| crate::gcw::BoundaryTermDoc { cell, coset, coeff };
    let cells = vec![
        CellDoc { dim: 0, isotropy: g.clone(), boundary: vec![] }, // a
        CellDoc { dim: 0, isotropy: g.clone(), boundary: vec![] }, // b
        CellDoc { dim: 1, isotropy: g.clone(), boundary: vec![b(1, 0, 1), b(0, 0, -1)] }, // e1
        CellDoc { dim: 1, isotropy: g.clone(), boundary: vec![b(1, 0, 1), b(0, 0, -1)] }, // e2
        CellDoc { dim: 2, isotropy: e, boundary: vec![b(2, 0, 1), b(3, 0, -1)] },         // c
    ];
    let systems = vec![
        constant_z(&lat),
        constant_z2(&lat),
        ("sign".into(), sign_system(&lat, &|e| if e == 0 { 1 } else { -1 })),
    ];
    Fixture { name: "reflection_s2", complex: ComplexDoc { group, cells }, systems }
}

pub fn antipodal_s1() -> Fixture {
    let group = GroupInput::Permutations { degree: 2, permutations: vec![vec![1, 0]] };
    let lat = lattice_of(&group);
    let e = vec![0];
    let b = |cell, coset, coeff| crate::gcw::BoundaryTermDoc { cell, coset, coeff };
    let cells = vec![
        CellDoc { dim: 0, isotropy: e.clone(), boundary: vec![] },
        CellDoc { dim: 1, isotropy: e, boundary: vec![b(0, 1, 1), b(0, 0, -1)] },
    ];
    let systems = vec![
        constant_z(&lat),
        constant_z2(&lat),
        ("sign".into(), sign_system(&lat, &|e| if e == 0 { 1 } else { -1 })),
    ];
    Fixture { name: "antipodal_s1", complex: ComplexDoc { group, cells }, systems }
}

/// ℤ/4 rotating S² about the poles. Element ids follow the lexicographic
/// image order of the powers of the 4-cycle, so id k is rotation by k steps.
pub fn rotation_s2() -> Fixture {
    let group = GroupInput::Permutations { degree: 4, permutations: vec![vec![1, 2, 3, 0]] };
    let lat = lattice_of(&group);
    let full = vec![0, 1, 2, 3];
    let e = vec![0];
    let b = |cell, coset, coeff| crate::gcw::BoundaryTermDoc { cell, coset, coeff };
    let cells = vec![
        CellDoc { dim: 0, isotropy: full.clone(), boundary: vec![] }, // 0: N
        CellDoc { dim: 0, isotropy: full, boundary: vec![] },         // 1: S
        CellDoc { dim: 0, isotropy: e.clone(), boundary: vec![] },    // 2: a (equator vertices)
        // 3: mN = N → a0
        CellDoc { dim: 1, isotropy: e.clone(), boundary: vec![b(2, 0, 1), b(0, 0, -1)] },
        // 4: mS = S → a0
        CellDoc { dim: 1, isotropy: e.clone(), boundary: vec![b(2, 0, 1), b(1, 0, -1)] },
        // 5: E = a0 → a1 (equator arc)
        CellDoc { dim: 1, isotropy: e.clone(), boundary: vec![b(2, 1, 1), b(2, 0, -1)] },
        // 6: TN over E: walk N → a0 → a1 → N
        CellDoc { dim: 2, isotropy: e.clone(), boundary: vec![b(3, 0, 1), b(5, 0, 1), b(3, 1, -1)] },
        // 7: TS under E, opposite orientation
        CellDoc { dim: 2, isotropy: e, boundary: vec![b(4, 1, 1), b(5, 0, -1), b(4, 0, -1)] },
    ];
    let systems = vec![
        constant_z(&lat),
        constant_z2(&lat),
        // the character of Z/4 with kernel of order 2
        ("sign".into(), sign_system(&lat, &|e| if e % 2 == 0 { 1 } else { -1 })),
    ];
    Fixture { name: "rotation_s2", complex: ComplexDoc { group, cells }, systems }
}

/// S₃ acting on S² as the suspension of the hexagon in the standard
/// representation. Permutation ids (images of {0,1,2}, lexicographic):
/// 0:e, 1:(12), 2:(01), 3:(012), 4:(021), 5:(02). Vertex orbit A is
/// {u₀,u₁,u₂} (uᵢ fixed by the reflection fixing i), B is the antipodes.
pub fn s3_sphere() -> Fixture {
    let group = GroupInput::Permutations {
        degree: 3,
        permutations: vec![vec![0, 2, 1], vec![1, 2, 0]],
    };
    let lat = lattice_of(&group);
    let full: Vec<usize> = (0..6).collect();
    let c2 = vec![0, 1];
    let e = vec![0];
    let b = |cell, coset, coeff| crate::gcw::BoundaryTermDoc { cell, coset, coeff };
    let cells = vec![
        CellDoc { dim: 0, isotropy: full.clone(), boundary: vec![] }, // 0: N
        CellDoc { dim: 0, isotropy: full, boundary: vec![] },         // 1: S
        CellDoc { dim: 0, isotropy: c2.clone(), boundary: vec![] },   // 2: A = u0
        CellDoc { dim: 0, isotropy: c2.clone(), boundary: vec![] },   // 3: B = -u0
        // 4: mNA = N → u0
        CellDoc { dim: 1, isotropy: c2.clone(), boundary: vec![b(2, 0, 1), b(0, 0, -1)] },
        // 5: mNB = N → -u0
        CellDoc { dim: 1, isotropy: c2.clone(), boundary: vec![b(3, 0, 1), b(0, 0, -1)] },
        // 6: mSA = S → u0
        CellDoc { dim: 1, isotropy: c2.clone(), boundary: vec![b(2, 0, 1), b(1, 0, -1)] },
        // 7: mSB = S → -u0
        CellDoc { dim: 1, isotropy: c2, boundary: vec![b(3, 0, 1), b(1, 0, -1)] },
        // 8: E = arc u0 → -u2; -u2 is (021)·(-u0), coset {4,5} with canonical 4
        CellDoc { dim: 1, isotropy: e.clone(), boundary: vec![b(3, 4, 1), b(2, 0, -1)] },
        // 9: TN: walk N → u0 → -u2 → N
        CellDoc { dim: 2, isotropy: e.clone(), boundary: vec![b(4, 0, 1), b(8, 0, 1), b(5, 4, -1)] },
        // 10: TS: walk S → -u2 → u0 → S
        CellDoc { dim: 2, isotropy: e, boundary: vec![b(7, 4, 1), b(8, 0, -1), b(6, 0, -1)] },
    ];
    let sign = |e: usize| -> i64 {
        // odd permutations among ids 0..5 are the transpositions 1, 2, 5
        if matches!(e, 1 | 2 | 5) {
            -1
        } else {
            1
        }
    };
    let mut systems = vec![
        constant_z(&lat),
        constant_z2(&lat),
        ("sign".into(), sign_system(&lat, &sign)),
    ];
    systems.push(("sign_rich".into(), s3_sign_rich(&lat)));
    Fixture { name: "s3_sphere", complex: ComplexDoc { group, cells }, systems }
}

/// Twisted S₃ system with value ℤ at both {e} and C₃: W{e} = S₃ acts by the
/// sign character, W C₃ = ℤ/2 by -1, and the structure map M(C₃) → M(e) is
/// the identity. The C₂ class and G carry zero.
fn s3_sign_rich(lat: &SubgroupLattice) -> SystemDoc {
    let mut values = std::collections::BTreeMap::new();
    let c3 = (0..lat.count()).find(|&i| lat.subgroups[i].order() == 3).unwrap();
    for &rep in &lat.class_reps {
        let rank = usize::from(rep == lat.trivial_index || rep == c3);
        values.insert(rep.to_string(), ValueDoc { rank, relations: vec![] });
    }
    let rank_of = |h: usize| usize::from(h == lat.trivial_index || lat.class_of[h] == lat.class_of[c3]);
    let mut maps = Vec::new();
    for h in 0..lat.count() {
        for k in 0..lat.count() {
            if h == k || !lat.contains[h][k] {
                continue;
            }
            let rows = rank_of(h);
            let cols = rank_of(k);
            let matrix: Vec<Vec<i64>> = (0..rows).map(|_| vec![1; cols]).collect();
            maps.push(MapDoc::Inclusion { from: h, to: k, matrix });
        }
    }
    let sign = |e: usize| -> i64 {
        if matches!(e, 1 | 2 | 5) {
            -1
        } else {
            1
        }
    };
    for &rep in &lat.class_reps {
        let n = &lat.subgroups[lat.normalizer[rep]];
        for &e in &n.members {
            let matrix = if rep == lat.trivial_index {
                vec![vec![sign(e)]]
            } else if rep == c3 {
                // W C3 = S3/C3 acts by the sign of any representative
                vec![vec![sign(e)]]
            } else {
                Vec::new()
            };
            maps.push(MapDoc::Weyl { from: rep, to: rep, element: e, matrix });
        }
    }
    SystemDoc { values, maps }
}

/// All complex fixtures, constant-ℤ system first in each.
pub fn all() -> Vec<Fixture> {
    vec![point_z2(), reflection_s2(), antipodal_s1(), rotation_s2(), s3_sphere()]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::load_system;

    #[test]
    fn all_fixtures_load_and_validate() {
        for fx in all() {
            let x = fx.complex().unwrap_or_else(|e| panic!("{}: {e}", fx.name));
            for (name, doc) in fx.systems() {
                load_system(doc, &x.lattice)
                    .unwrap_or_else(|e| panic!("{} / {name}: {e}", fx.name));
            }
        }
    }

    #[test]
    fn fixture_groups_have_expected_orders() {
        assert_eq!(point_z2().complex().unwrap().group_order(), 2);
        assert_eq!(rotation_s2().complex().unwrap().group_order(), 4);
        assert_eq!(s3_sphere().complex().unwrap().group_order(), 6);
    }

    #[test]
    fn s3_sphere_is_a_sphere() {
        let x = s3_sphere().complex().unwrap();
        let fe = x.fixed_complex(x.lattice.trivial_index);
        let h = crate::abgrp::ordinary_cohomology_z(&fe.ranks(), &fe.boundary_matrices());
        assert_eq!(h[0].rank, 1, "H^0 = Z");
        assert!(h[1].is_trivial(), "H^1 = 0, got {}", h[1]);
        assert_eq!(h[2].rank, 1, "H^2 = Z, got {}", h[2]);
    }

    #[test]
    fn rotation_s2_is_a_sphere() {
        let x = rotation_s2().complex().unwrap();
        let fe = x.fixed_complex(x.lattice.trivial_index);
        let h = crate::abgrp::ordinary_cohomology_z(&fe.ranks(), &fe.boundary_matrices());
        assert_eq!(h[0].rank, 1);
        assert!(h[1].is_trivial());
        assert_eq!(h[2].rank, 1);
    }
}
