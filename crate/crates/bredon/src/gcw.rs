//! Combinatorial G-CW complexes.
//!
//! An orbit-cell of dimension n with isotropy H contributes the G-set
//! G/H × Dⁿ of geometric cells (α, gH). The cellular boundary is stored only
//! on the canonical cell (α, eH) and propagated by equivariance; a boundary
//! pair (β, aH_β) is admissible when H_α ⊆ aH_βa⁻¹, which is exactly the
//! condition for the canonical cell's boundary to stay inside X^{H_α}.

use crate::abgrp::matrix::IntMatrix;
use crate::error::Error;
use crate::fgroup::{build_group, enumerate_subgroups, GroupInput, SubgroupLattice, DEFAULT_ORDER_CAP};
use crate::orbitcat::{canonical_coset, is_admissible};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryTermDoc {
    pub cell: usize,
    pub coset: usize,
    pub coeff: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellDoc {
    pub dim: usize,
    /// member element ids of the isotropy subgroup
    pub isotropy: Vec<usize>,
    #[serde(default)]
    pub boundary: Vec<BoundaryTermDoc>,
}

/// On-disk form of a G-CW complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub group: GroupInput,
    pub cells: Vec<CellDoc>,
}

#[derive(Clone, Debug)]
pub struct BoundaryTerm {
    pub cell: usize,
    /// canonical coset representative a of aH_cell
    pub coset: usize,
    pub coeff: i64,
}

#[derive(Clone, Debug)]
pub struct OrbitCell {
    pub dim: usize,
    /// subgroup index of the isotropy H_α
    pub isotropy: usize,
    pub boundary: Vec<BoundaryTerm>,
}

/// A geometric cell (orbit-cell, coset). The coset is canonical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub orbit: usize,
    pub coset: usize,
}

#[derive(Clone, Debug)]
pub struct GCWComplex {
    pub lattice: SubgroupLattice,
    pub cells: Vec<OrbitCell>,
    /// orbit-cell indices per dimension
    pub by_dim: Vec<Vec<usize>>,
    pub dim: usize,
}

/// The fixed-point subcomplex X^K with its N_G K-action.
#[derive(Clone, Debug)]
pub struct FixedComplex {
    pub subgroup: usize,
    pub cells: Vec<Vec<Cell>>,
    /// boundary[n][i] lists (index into cells[n-1], coefficient)
    pub boundary: Vec<Vec<Vec<(usize, i64)>>>,
    index: Vec<BTreeMap<Cell, usize>>,
}

impl FixedComplex {
    pub fn cell_index(&self, dim: usize, cell: Cell) -> Option<usize> {
        self.index[dim].get(&cell).copied()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Chain boundary matrices ∂_n : C_n → C_{n-1} for ordinary (co)homology.
    pub fn boundary_matrices(&self) -> Vec<IntMatrix> {
        (1..self.cells.len())
            .map(|n| {
                let mut m = IntMatrix::zeros(self.cells[n - 1].len(), self.cells[n].len());
                for (i, terms) in self.boundary[n].iter().enumerate() {
                    for &(j, coeff) in terms {
                        let v = m.get(j, i) + num_bigint::BigInt::from(coeff);
                        m.set(j, i, v);
                    }
                }
                m
            })
            .collect()
    }
}

/// The modified fixed-point set X^H_H = X^H / ⋃_{K>H} X^K as free ℤ[W H]
/// chain data: the basepoint is implicit, every listed cell has exact
/// isotropy H, and W H permutes the cells freely.
#[derive(Clone, Debug)]
pub struct ModifiedFixedComplex {
    pub subgroup: usize,
    /// W H-orbit representatives per dimension (minimal cell in each orbit)
    pub reps: Vec<Vec<Cell>>,
    /// all exact-isotropy-H cells per dimension
    pub cells: Vec<Vec<Cell>>,
    /// boundary[n][r] lists (rep index in dim n-1, W H element, coefficient)
    pub boundary: Vec<Vec<Vec<(usize, usize, i64)>>>,
}

impl ModifiedFixedComplex {
    pub fn rep_count(&self, dim: usize) -> usize {
        self.reps.get(dim).map_or(0, Vec::len)
    }

    pub fn is_basepoint_only(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    pub fn group_ring_complex(&self) -> crate::abgrp::GroupRingComplex {
        crate::abgrp::GroupRingComplex {
            dims: self.reps.iter().map(Vec::len).collect(),
            boundary: self.boundary.clone(),
        }
    }
}

impl GCWComplex {
    pub fn group_order(&self) -> usize {
        self.lattice.group.order()
    }

    /// Exact isotropy subgroup of a geometric cell: g·H_α·g⁻¹.
    pub fn exact_isotropy(&self, cell: Cell) -> usize {
        self.lattice.conjugate(cell.coset, self.cells[cell.orbit].isotropy)
    }

    pub fn cell(&self, orbit: usize, coset_rep: usize) -> Cell {
        let h = self.cells[orbit].isotropy;
        Cell { orbit, coset: canonical_coset(&self.lattice, h, coset_rep) }
    }

    /// g · (α, cH_α) = (α, gcH_α).
    pub fn translate(&self, g: usize, cell: Cell) -> Cell {
        self.cell(cell.orbit, self.lattice.group.mul(g, cell.coset))
    }

    /// Expanded boundary of a geometric cell.
    pub fn cell_boundary(&self, cell: Cell) -> Vec<(Cell, i64)> {
        self.cells[cell.orbit]
            .boundary
            .iter()
            .map(|t| {
                let g = self.lattice.group.mul(cell.coset, t.coset);
                (self.cell(t.cell, g), t.coeff)
            })
            .collect()
    }

    /// All geometric cells of X^K, with the induced boundary.
    pub fn fixed_complex(&self, k: usize) -> FixedComplex {
        let top = self.dim;
        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
        for (orbit, oc) in self.cells.iter().enumerate() {
            let order = self.lattice.group.order();
            let mut seen = vec![false; order];
            for g in 0..order {
                if seen[g] {
                    continue;
                }
                for &x in &self.lattice.subgroups[oc.isotropy].members {
                    seen[self.lattice.group.mul(g, x)] = true;
                }
                if is_admissible(&self.lattice, k, oc.isotropy, g) {
                    cells[oc.dim].push(Cell { orbit, coset: g });
                }
            }
        }
        for dim_cells in &mut cells {
            dim_cells.sort_unstable();
        }
        let index: Vec<BTreeMap<Cell, usize>> = cells
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, c)| (*c, i)).collect())
            .collect();
        let boundary: Vec<Vec<Vec<(usize, i64)>>> = (0..=top)
            .map(|n| {
                cells[n]
                    .iter()
                    .map(|&c| {
                        if n == 0 {
                            return Vec::new();
                        }
                        self.cell_boundary(c)
                            .into_iter()
                            .map(|(t, coeff)| {
                                let i = index[n - 1].get(&t).copied().expect(
                                    "boundary of a K-fixed cell consists of K-fixed cells",
                                );
                                (i, coeff)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FixedComplex { subgroup: k, cells, boundary, index }
    }

    /// X^H_H with its free W H-structure. If no larger subgroup fixes
    /// anything, this is X^H with a disjoint basepoint adjoined.
    pub fn modified_fixed_complex(&self, h: usize) -> Result<ModifiedFixedComplex, Error> {
        let top = self.dim;
        let weyl = self.lattice.weyl_group(h);
        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
        for (orbit, oc) in self.cells.iter().enumerate() {
            let order = self.lattice.group.order();
            let mut seen = vec![false; order];
            for g in 0..order {
                if seen[g] {
                    continue;
                }
                for &x in &self.lattice.subgroups[oc.isotropy].members {
                    seen[self.lattice.group.mul(g, x)] = true;
                }
                if self.lattice.conjugate(g, oc.isotropy) == h {
                    cells[oc.dim].push(Cell { orbit, coset: g });
                }
            }
        }
        for dim_cells in &mut cells {
            dim_cells.sort_unstable();
        }
        // free W H-orbits: representative is the minimal cell of the orbit
        let nh_members = self.lattice.subgroups[self.lattice.normalizer[h]].members.clone();
        let mut reps: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
        let mut rep_index: Vec<BTreeMap<Cell, usize>> = vec![BTreeMap::new(); top + 1];
        for n in 0..=top {
            let mut assigned: BTreeMap<Cell, ()> = BTreeMap::new();
            for &c in &cells[n] {
                if assigned.contains_key(&c) {
                    continue;
                }
                let idx = reps[n].len();
                reps[n].push(c);
                let mut orbit = BTreeMap::new();
                for &g in &nh_members {
                    let image = self.translate(g, c);
                    orbit.insert(image, ());
                    assigned.insert(image, ());
                    rep_index[n].insert(image, idx);
                }
                if orbit.len() != weyl.order() {
                    return Err(Error::Internal(format!(
                        "W H-orbit of a modified fixed-point cell has size {}, expected {}",
                        orbit.len(),
                        weyl.order()
                    )));
                }
            }
        }
        // boundary of each representative, projected to exact-isotropy-H cells
        let mut boundary: Vec<Vec<Vec<(usize, usize, i64)>>> = vec![Vec::new(); top + 1];
        for n in 0..=top {
            for &rep in &reps[n] {
                let mut terms = Vec::new();
                if n > 0 {
                    for (target, coeff) in self.cell_boundary(rep) {
                        if self.exact_isotropy(target) != h {
                            continue;
                        }
                        let tre = rep_index[n - 1][&target];
                        let w = self
                            .weyl_translation(h, reps[n - 1][tre], target)
                            .ok_or_else(|| Error::Internal("cell outside its W H-orbit".into()))?;
                        terms.push((tre, w, coeff));
                    }
                }
                boundary[n].push(terms);
            }
        }
        Ok(ModifiedFixedComplex { subgroup: h, reps, cells, boundary })
    }

    /// The W H element n̄ with n · from = to, for cells of exact isotropy H.
    pub fn weyl_translation(&self, h: usize, from: Cell, to: Cell) -> Option<usize> {
        if from.orbit != to.orbit {
            return None;
        }
        let weyl = self.lattice.weyl_group(h);
        let g = &self.lattice.group;
        let halpha = &self.lattice.subgroups[self.cells[from.orbit].isotropy];
        for &x in &halpha.members {
            let n = g.mul(g.mul(to.coset, x), g.inv(from.coset));
            if let Some(w) = weyl.project(n) {
                if self.translate(weyl.reps[w], from) == to {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Stabilizer of a geometric cell inside W H, as Weyl element ids.
    pub fn weyl_stabilizer(&self, h: usize, cell: Cell) -> Vec<usize> {
        let weyl = self.lattice.weyl_group(h);
        (0..weyl.order())
            .filter(|&w| self.translate(weyl.reps[w], cell) == cell)
            .collect()
    }

    /// Cells of X^H with exact isotropy of length `stratum`, properly above
    /// H: the cells of the wedge ⋁_{H<L∈Ŝ_k} X^L_L.
    pub fn wedge_cells(&self, h: usize, stratum: usize) -> Vec<Vec<Cell>> {
        let fc = self.fixed_complex(h);
        (0..fc.cells.len())
            .map(|n| {
                fc.cells[n]
                    .iter()
                    .copied()
                    .filter(|&c| {
                        let l = self.exact_isotropy(c);
                        l != h && self.lattice.contains[h][l] && self.lattice.length[l] == stratum
                    })
                    .collect()
            })
            .collect()
    }

    /// ∂∂ = 0 on the K-fixed chain complex for every subgroup K, with the
    /// offending subgroup and cell reported on failure.
    pub fn validate_dd_zero(&self) -> Result<(), Error> {
        for k in 0..self.lattice.count() {
            let fc = self.fixed_complex(k);
            for n in 2..fc.cells.len() {
                for (i, terms) in fc.boundary[n].iter().enumerate() {
                    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                    for &(j, c1) in terms {
                        for &(t, c2) in &fc.boundary[n - 1][j] {
                            *acc.entry(t).or_insert(0) += c1 * c2;
                        }
                    }
                    if acc.values().any(|&v| v != 0) {
                        let cell = fc.cells[n][i];
                        return Err(Error::InvalidComplex(format!(
                            "∂∂ ≠ 0 at subgroup {k} on cell (orbit {}, coset {})",
                            cell.orbit, cell.coset
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parse, canonicalize and fully validate a complex document.
pub fn load_complex(doc: &ComplexDoc) -> Result<GCWComplex, Error> {
    let group = build_group(&doc.group, DEFAULT_ORDER_CAP)?;
    let lattice = enumerate_subgroups(&group, DEFAULT_ORDER_CAP)?;
    load_complex_with_lattice(doc, lattice)
}

pub fn load_complex_with_lattice(
    doc: &ComplexDoc,
    lattice: SubgroupLattice,
) -> Result<GCWComplex, Error> {
    let mut cells = Vec::with_capacity(doc.cells.len());
    for (i, c) in doc.cells.iter().enumerate() {
        let isotropy = lattice.index_of(&c.isotropy).ok_or_else(|| {
            Error::InvalidComplex(format!("cell {i}: isotropy set is not a subgroup"))
        })?;
        cells.push(OrbitCell { dim: c.dim, isotropy, boundary: Vec::new() });
    }
    for (i, c) in doc.cells.iter().enumerate() {
        let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        let mut terms = Vec::new();
        for t in &c.boundary {
            if c.dim == 0 {
                return Err(Error::InvalidComplex(format!("cell {i}: 0-cells have no boundary")));
            }
            if t.cell >= cells.len() {
                return Err(Error::InvalidComplex(format!(
                    "cell {i}: boundary cell {} out of range",
                    t.cell
                )));
            }
            if cells[t.cell].dim + 1 != c.dim {
                return Err(Error::InvalidComplex(format!(
                    "cell {i}: boundary cell {} has dimension {}, expected {}",
                    t.cell,
                    cells[t.cell].dim,
                    c.dim - 1
                )));
            }
            if t.coset >= lattice.group.order() {
                return Err(Error::InvalidComplex(format!("cell {i}: coset element out of range")));
            }
            let canon = canonical_coset(&lattice, cells[t.cell].isotropy, t.coset);
            if canon != t.coset {
                return Err(Error::InvalidComplex(format!(
                    "cell {i}: coset representative {} is not canonical (expected {canon})",
                    t.coset
                )));
            }
            if !is_admissible(&lattice, cells[i].isotropy, cells[t.cell].isotropy, t.coset) {
                return Err(Error::InvalidComplex(format!(
                    "cell {i}: inadmissible boundary pair (cell {}, coset {})",
                    t.cell, t.coset
                )));
            }
            if seen.insert((t.cell, t.coset), ()).is_some() {
                return Err(Error::InvalidComplex(format!(
                    "cell {i}: duplicate boundary pair (cell {}, coset {})",
                    t.cell, t.coset
                )));
            }
            if t.coeff != 0 {
                terms.push(BoundaryTerm { cell: t.cell, coset: t.coset, coeff: t.coeff });
            }
        }
        cells[i].boundary = terms;
    }
    let dim = cells.iter().map(|c| c.dim).max().unwrap_or(0);
    let mut by_dim = vec![Vec::new(); dim + 1];
    for (i, c) in cells.iter().enumerate() {
        by_dim[c.dim].push(i);
    }
    let x = GCWComplex { lattice, cells, by_dim, dim };
    x.validate_dd_zero()?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::ordinary_cohomology_z;
    use crate::fixtures;

    #[test]
    fn point_with_trivial_action() {
        let x = fixtures::point_z2().complex().unwrap();
        assert_eq!(x.dim, 0);
        for k in 0..x.lattice.count() {
            let fc = x.fixed_complex(k);
            assert_eq!(fc.cells[0].len(), 1, "X^K is a point for all K");
        }
    }

    #[test]
    fn reflection_sphere_loads_and_validates() {
        let x = fixtures::reflection_s2().complex().unwrap();
        assert_eq!(x.dim, 2);
        let g = x.lattice.full_index;
        // X^G is the equatorial circle
        let fc = x.fixed_complex(g);
        assert_eq!(fc.ranks(), vec![2, 2, 0]);
        let h = ordinary_cohomology_z(&[2, 2], &fc.boundary_matrices()[..1]);
        assert_eq!(h[0].rank, 1);
        assert_eq!(h[1].rank, 1);
        // X^e is the whole sphere
        let fe = x.fixed_complex(x.lattice.trivial_index);
        assert_eq!(fe.ranks(), vec![2, 2, 2]);
        let h = ordinary_cohomology_z(&fe.ranks(), &fe.boundary_matrices());
        assert_eq!(h[0].rank, 1);
        assert!(h[1].is_trivial());
        assert_eq!(h[2].rank, 1);
    }

    #[test]
    fn reflection_sphere_with_bad_boundary_is_rejected() {
        let mut doc = fixtures::reflection_s2().doc();
        // ∂c = e1 + e2 fails ∂∂ = 0
        doc.complex.cells[4].boundary[1].coeff = 1;
        let err = load_complex(&doc.complex).unwrap_err();
        match err {
            Error::InvalidComplex(msg) => assert!(msg.contains("∂∂"), "{msg}"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn non_canonical_coset_is_rejected() {
        let mut doc = fixtures::antipodal_s1().doc();
        // point the 1-cell boundary at the 0-cell with full isotropy; the
        // stored coset 1 then canonicalizes to 0 and must be rejected
        doc.complex.cells[0].isotropy = vec![0, 1];
        let err = load_complex(&doc.complex).unwrap_err();
        assert!(matches!(err, Error::InvalidComplex(_)));
    }

    #[test]
    fn fixed_complexes_of_free_action_are_empty() {
        let x = fixtures::antipodal_s1().complex().unwrap();
        let fc = x.fixed_complex(x.lattice.full_index);
        assert!(fc.cells.iter().all(Vec::is_empty));
        // e-fixed complex is the full circle with 2+2 cells
        let fe = x.fixed_complex(x.lattice.trivial_index);
        assert_eq!(fe.ranks(), vec![2, 2]);
    }

    #[test]
    fn modified_fixed_points_of_reflection_sphere() {
        let x = fixtures::reflection_s2().complex().unwrap();
        let g = x.lattice.full_index;
        let e = x.lattice.trivial_index;
        // X^G_G = (S^1)+ since nothing lies above G
        let mg = x.modified_fixed_complex(g).unwrap();
        assert_eq!(mg.reps.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 2, 0]);
        // X^e_e: two swapped 2-cells
        let me = x.modified_fixed_complex(e).unwrap();
        assert_eq!(me.reps.iter().map(Vec::len).collect::<Vec<_>>(), vec![0, 0, 1]);
        assert_eq!(me.cells[2].len(), 2);
    }

    #[test]
    fn free_weyl_action_on_modified_fixed_points() {
        for fx in fixtures::all() {
            let x = fx.complex().unwrap();
            for h in 0..x.lattice.count() {
                let m = x.modified_fixed_complex(h).unwrap();
                for dim_cells in &m.cells {
                    for &c in dim_cells {
                        assert_eq!(
                            x.weyl_stabilizer(h, c),
                            vec![0],
                            "W H acts freely off the basepoint"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exact_isotropy_strata_count_cells() {
        for fx in fixtures::all() {
            let x = fx.complex().unwrap();
            let total: usize = x
                .cells
                .iter()
                .map(|c| x.lattice.group.order() / x.lattice.subgroups[c.isotropy].order())
                .sum();
            let by_strata: usize = (0..x.lattice.count())
                .map(|h| {
                    x.modified_fixed_complex(h)
                        .unwrap()
                        .cells
                        .iter()
                        .map(Vec::len)
                        .sum::<usize>()
                })
                .sum();
            assert_eq!(total, by_strata, "exact isotropy partitions the cells of X^e");
        }
    }

    #[test]
    fn fixed_points_are_monotone() {
        for fx in fixtures::all() {
            let x = fx.complex().unwrap();
            for h in 0..x.lattice.count() {
                for k in 0..x.lattice.count() {
                    if !x.lattice.contains[h][k] {
                        continue;
                    }
                    // H ≤ K forces X^K ⊆ X^H
                    let fk = x.fixed_complex(k);
                    let fh = x.fixed_complex(h);
                    for n in 0..fk.cells.len() {
                        for c in &fk.cells[n] {
                            assert!(fh.cell_index(n, *c).is_some());
                        }
                    }
                }
            }
        }
    }

    /// Collapsing the strata of length ≤ k inside X^H leaves exactly the
    /// cells with no intermediate isotropy; on the graded pieces this is the
    /// bottom row of the three-by-three diagram of cofibration sequences.
    #[test]
    fn graded_pieces_of_the_cellular_filtration() {
        for fx in fixtures::all() {
            let x = fx.complex().unwrap();
            for h in 0..x.lattice.count() {
                let fh = x.fixed_complex(h);
                let len_h = x.lattice.length[h];
                if len_h == 0 {
                    continue;
                }
                let k = len_h - 1;
                for n in 0..fh.cells.len() {
                    let mut quotient_cells = Vec::new();
                    for &c in &fh.cells[n] {
                        let j = x.exact_isotropy(c);
                        let has_intermediate = (0..x.lattice.count()).any(|l| {
                            l != h
                                && l != j
                                && x.lattice.contains[h][l]
                                && x.lattice.contains[l][j]
                                && x.lattice.length[l] <= k
                        });
                        if !has_intermediate && j != h {
                            quotient_cells.push(c);
                        }
                    }
                    // stratum-k quotient cells are exactly the wedge cells
                    let wedge: Vec<Cell> = x.wedge_cells(h, k)[n].clone();
                    for w in &wedge {
                        assert!(quotient_cells.contains(w));
                    }
                    for q in &quotient_cells {
                        if x.lattice.length[x.exact_isotropy(*q)] == k {
                            assert!(wedge.contains(q));
                        }
                    }
                }
            }
        }
    }
}
