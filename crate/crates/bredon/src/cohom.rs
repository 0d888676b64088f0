//! The two cohomology engines.
//!
//! The Bredon cellular cochain complex puts one copy of M(G/H_α) in degree n
//! for each orbit-cell α of dimension n, with the differential transported
//! through the coefficient system along the boundary morphisms. It is the
//! direct oracle everything else is checked against.
//!
//! Reduced cohomology with local coefficients of a modified fixed-point set
//! X^H_H is computed as Hom over the group ring ℤ[W H] of its free cellular
//! chains; for non-free W H-sets (the full fixed complex, or the wedge of
//! the X^L_L over subgroups L directly above H) the equivariant cochains are
//! the stabilizer invariants, handled as explicit subquotients. The
//! connecting homomorphism is realized as the cross-stratum block of the
//! Bredon differential, and the change-of-groups map as the composite of
//! restriction, transport along π : W^L_H → W̄_H^L, the structure map
//! μ : M_L → M_H, and averaging over N_G H-conjugates.

use crate::abgrp::matrix::IntMatrix;
use crate::abgrp::{
    hom_over_group_ring, induced_on_cohomology, lattice, verify_les_of_ses, AbHom, Complex,
    FgAbPresentation, GammaModule, SubQuotient,
};
use crate::coeff::{CoefficientSystem, WeylModule};
use crate::error::Error;
use crate::gcw::{Cell, GCWComplex, ModifiedFixedComplex};
use crate::orbitcat::morphism;
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// One coordinate block of the Bredon complex.
#[derive(Clone, Debug)]
pub struct CoordInfo {
    /// orbit-cell index
    pub cell: usize,
    /// filtration tag (isotropy length for the main spectral sequence)
    pub stratum: usize,
    /// offset into the degree's generator ambient
    pub offset: usize,
    /// number of generators of the coefficient value
    pub width: usize,
}

/// The Bredon cochain complex with stratum tags on its coordinates.
#[derive(Clone, Debug)]
pub struct BredonComplex {
    pub complex: Complex,
    pub coords: Vec<Vec<CoordInfo>>,
    pub max_stratum: usize,
}

impl BredonComplex {
    pub fn top_degree(&self) -> usize {
        self.complex.len() - 1
    }

    /// Generators of the sublattice of coordinates in strata ≥ s, plus the
    /// term relations: the filtration lattice F^s in degree n.
    pub fn filtration_lattice(&self, n: usize, s: usize) -> IntMatrix {
        let gens = self.complex.terms[n].gens;
        let mut cols = Vec::new();
        for c in &self.coords[n] {
            if c.stratum >= s {
                for j in 0..c.width {
                    let mut v = vec![BigInt::from(0); gens];
                    v[c.offset + j] = BigInt::from(1);
                    cols.push(v);
                }
            }
        }
        let coord_lattice = IntMatrix::from_cols(gens, cols);
        lattice::sum(&coord_lattice, &self.complex.terms[n].rels)
    }
}

/// Bredon complex with the standard tags len_G(H_α).
pub fn bredon_cochain_complex(
    x: &GCWComplex,
    sys: &CoefficientSystem,
) -> Result<BredonComplex, Error> {
    let tags: Vec<usize> = x.cells.iter().map(|c| x.lattice.length[c.isotropy]).collect();
    bredon_cochain_complex_tagged(x, sys, &tags)
}

/// Bredon complex with caller-chosen stratum tags (the fixed-point-set
/// spectral sequence files cells of X^H by the length of their G-isotropy).
/// Tags must not increase along boundaries.
pub fn bredon_cochain_complex_tagged(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    tags: &[usize],
) -> Result<BredonComplex, Error> {
    assert_eq!(tags.len(), x.cells.len());
    let lat = &x.lattice;
    let mut coords: Vec<Vec<CoordInfo>> = Vec::with_capacity(x.dim + 1);
    let mut terms = Vec::with_capacity(x.dim + 1);
    for n in 0..=x.dim {
        let mut infos = Vec::new();
        let mut offset = 0;
        let mut parts: Vec<&FgAbPresentation> = Vec::new();
        for &cell in &x.by_dim[n] {
            let value = sys.value_at(lat, x.cells[cell].isotropy);
            infos.push(CoordInfo { cell, stratum: tags[cell], offset, width: value.gens });
            offset += value.gens;
            parts.push(value);
        }
        terms.push(FgAbPresentation::direct_sum(&parts));
        coords.push(infos);
    }
    let mut d = Vec::new();
    for n in 0..x.dim {
        let mut m = IntMatrix::zeros(terms[n + 1].gens, terms[n].gens);
        let col_of: BTreeMap<usize, usize> =
            coords[n].iter().enumerate().map(|(i, c)| (c.cell, i)).collect();
        for info in &coords[n + 1] {
            let alpha = &x.cells[info.cell];
            for t in &alpha.boundary {
                let beta_info = &coords[n][col_of[&t.cell]];
                if beta_info.stratum > info.stratum {
                    return Err(Error::Internal("stratum tags increase along a boundary".into()));
                }
                let f = morphism(lat, alpha.isotropy, x.cells[t.cell].isotropy, t.coset)
                    .ok_or_else(|| Error::Internal("inadmissible boundary survived load".into()))?;
                let block = sys.morphism_matrix(lat, &f).scale(&BigInt::from(t.coeff));
                m.add_block(info.offset, beta_info.offset, &block);
            }
        }
        d.push(m);
    }
    // δδ = 0 on the nose: boundary cancellation happens morphism by morphism
    for n in 0..d.len().saturating_sub(1) {
        if !d[n + 1].mul(&d[n]).is_zero() {
            return Err(Error::Internal(format!("Bredon differential squares nonzero at {n}")));
        }
    }
    let max_stratum = coords.iter().flatten().map(|c| c.stratum).max().unwrap_or(0);
    let complex = Complex::new(terms, d);
    complex.validate()?;
    Ok(BredonComplex { complex, coords, max_stratum })
}

/// H^n_G(X; M).
pub fn bredon_cohomology(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    n: usize,
) -> Result<FgAbPresentation, Error> {
    let bc = bredon_cochain_complex(x, sys)?;
    Ok(bc.complex.cohomology(n))
}

/// The reduced local cochain complex Hom_{ℤ[W H]}(C̃_*(X^H_H), M_H).
#[derive(Clone, Debug)]
pub struct ReducedLocalComplex {
    pub subgroup: usize,
    pub mfc: ModifiedFixedComplex,
    pub module: WeylModule,
    pub complex: Complex,
    /// per dimension: cell → (orbit representative index, W H element)
    pub index: Vec<BTreeMap<Cell, (usize, usize)>>,
}

pub fn reduced_local_complex(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    h: usize,
) -> Result<ReducedLocalComplex, Error> {
    let mfc = x.modified_fixed_complex(h)?;
    let module = sys.weyl_module(&x.lattice, h);
    let complex = hom_over_group_ring(&mfc.group_ring_complex(), &module.module);
    let mut index = Vec::with_capacity(mfc.reps.len());
    for n in 0..mfc.reps.len() {
        let mut map = BTreeMap::new();
        for (r, &rep) in mfc.reps[n].iter().enumerate() {
            for w in 0..module.weyl.order() {
                let image = x.translate(module.weyl.reps[w], rep);
                map.entry(image).or_insert((r, w));
            }
        }
        index.push(map);
    }
    Ok(ReducedLocalComplex { subgroup: h, mfc, module, complex, index })
}

/// H̃^n of the local cohomology of the Borel construction on X^H_H, via the
/// free-action reduction to Hom over the group ring.
pub fn reduced_local_cohomology(
    xhh: &ModifiedFixedComplex,
    module: &WeylModule,
    n: usize,
) -> FgAbPresentation {
    let complex = hom_over_group_ring(&xhh.group_ring_complex(), &module.module);
    complex.cohomology(n)
}

/// W H-equivariant cochains on a W H-stable set of cells, as subquotients:
/// the coordinate at an orbit representative is the fixed subgroup of the
/// module under the cell's stabilizer.
#[derive(Clone, Debug)]
pub struct EquivariantCochains {
    pub subgroup: usize,
    pub reps: Vec<Vec<Cell>>,
    pub terms: Vec<SubQuotient>,
    /// differential on the ambient ⊕_reps M; boundary terms outside the kept
    /// set are dropped (quotient semantics)
    pub ambient_d: Vec<IntMatrix>,
    /// the presentation-level cochain complex
    pub pres: Complex,
    /// per dimension: kept cell → (rep index, minimal W H element moving the
    /// rep onto it)
    pub index: Vec<BTreeMap<Cell, (usize, usize)>>,
}

pub fn equivariant_cochains(
    x: &GCWComplex,
    h: usize,
    module: &GammaModule,
    kept: Vec<Vec<Cell>>,
) -> Result<EquivariantCochains, Error> {
    let weyl = x.lattice.weyl_group(h);
    let w = module.value.gens;
    let top = kept.len();
    let mut reps: Vec<Vec<Cell>> = vec![Vec::new(); top];
    let mut index: Vec<BTreeMap<Cell, (usize, usize)>> = vec![BTreeMap::new(); top];
    for n in 0..top {
        for &c in &kept[n] {
            if index[n].contains_key(&c) {
                continue;
            }
            let r = reps[n].len();
            reps[n].push(c);
            for wid in 0..weyl.order() {
                let image = x.translate(weyl.reps[wid], c);
                index[n].entry(image).or_insert((r, wid));
            }
        }
        for &c in &kept[n] {
            if !index[n].contains_key(&c) {
                return Err(Error::Internal("kept cell set is not W H-stable".into()));
            }
        }
    }
    // stabilizer invariants per representative
    let mut terms = Vec::with_capacity(top);
    for n in 0..top {
        let mut num_cols = Vec::new();
        let mut den_cols = Vec::new();
        let ambient = reps[n].len() * w;
        for (r, &rep) in reps[n].iter().enumerate() {
            let stab = x.weyl_stabilizer(h, rep);
            let mut inv = IntMatrix::identity(w);
            for &s in &stab {
                if s == 0 {
                    continue;
                }
                let fixed = lattice::preimage(
                    &module.action[s].sub(&IntMatrix::identity(w)),
                    &module.value.rels,
                );
                inv = lattice::intersect(&inv, &fixed);
            }
            for j in 0..inv.cols() {
                let mut v = vec![BigInt::from(0); ambient];
                for i in 0..w {
                    v[r * w + i] = inv.get(i, j).clone();
                }
                num_cols.push(v);
            }
            for j in 0..module.value.rels.cols() {
                let mut v = vec![BigInt::from(0); ambient];
                for i in 0..w {
                    v[r * w + i] = module.value.rels.get(i, j).clone();
                }
                den_cols.push(v);
            }
        }
        let num = IntMatrix::from_cols(ambient, num_cols);
        let den = IntMatrix::from_cols(ambient, den_cols);
        terms.push(SubQuotient::new(ambient, &num, &den)?);
    }
    // ambient differential with quotient semantics
    let mut ambient_d = Vec::new();
    for n in 0..top.saturating_sub(1) {
        let mut m = IntMatrix::zeros(reps[n + 1].len() * w, reps[n].len() * w);
        for (i, &rep) in reps[n + 1].iter().enumerate() {
            for (y, coeff) in x.cell_boundary(rep) {
                let Some(&(r, wid)) = index[n].get(&y) else { continue };
                let block = module.action[wid].scale(&BigInt::from(coeff));
                m.add_block(i * w, r * w, &block);
            }
        }
        ambient_d.push(m);
    }
    // presentation-level complex
    let mut d_pres = Vec::new();
    for n in 0..top.saturating_sub(1) {
        let hom = terms[n].induced(&ambient_d[n], &terms[n + 1])?;
        d_pres.push(hom.matrix);
    }
    let pres = Complex::new(terms.iter().map(|t| t.pres.clone()).collect(), d_pres);
    pres.validate()?;
    Ok(EquivariantCochains { subgroup: h, reps, terms, ambient_d, pres, index })
}

/// The W H-equivariant reduced cochains of ⋁_{H<L∈Ŝ_k} X^L_L with values in
/// M_H, where k = len_G(H) - 1.
#[derive(Clone, Debug)]
pub struct WedgeComplex {
    pub h: usize,
    pub stratum: usize,
    pub module: WeylModule,
    pub eq: EquivariantCochains,
}

pub fn wedge_cochains(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    h: usize,
) -> Result<WedgeComplex, Error> {
    let len_h = x.lattice.length[h];
    if len_h == 0 {
        return Err(Error::Internal(
            "the wedge of over-strata is defined for subgroups of positive length".into(),
        ));
    }
    let stratum = len_h - 1;
    let kept = x.wedge_cells(h, stratum);
    let module = sys.weyl_module(&x.lattice, h);
    let eq = equivariant_cochains(x, h, &module.module, kept)?;
    Ok(WedgeComplex { h, stratum, module, eq })
}

/// Cochain realization of the connecting map: the cross-stratum component of
/// the Bredon differential, from wedge cochains in degree n to reduced
/// cochains of X^H_H in degree n+1.
#[derive(Clone, Debug)]
pub struct ConnectingData {
    pub wedge: WedgeComplex,
    pub target: ReducedLocalComplex,
    /// ambient[n]: wedge generator ambient (degree n) → target (degree n+1)
    pub ambient: Vec<IntMatrix>,
}

pub fn connecting_data(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    h: usize,
) -> Result<ConnectingData, Error> {
    let wedge = wedge_cochains(x, sys, h)?;
    let target = reduced_local_complex(x, sys, h)?;
    let w = target.module.module.value.gens;
    let top = x.dim + 1;
    let mut ambient = Vec::new();
    for n in 0..top.saturating_sub(1) {
        let rows = target.mfc.reps[n + 1].len() * w;
        let cols = wedge.eq.reps[n].len() * w;
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, &rep) in target.mfc.reps[n + 1].iter().enumerate() {
            for (y, coeff) in x.cell_boundary(rep) {
                let Some(&(r, wid)) = wedge.eq.index[n].get(&y) else { continue };
                let block = target.module.module.action[wid].scale(&BigInt::from(coeff));
                m.add_block(i * w, r * w, &block);
            }
        }
        ambient.push(m);
    }
    Ok(ConnectingData { wedge, target, ambient })
}

/// δ̄* : H̃^n(wedge) → H̃^{n+1}(X^H_H) for H in stratum k+1. The cochain map
/// anti-commutes with the internal differentials, so it is well defined on
/// cohomology.
pub fn connecting_homomorphism(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    h: usize,
    k: usize,
    n: usize,
) -> Result<AbHom, Error> {
    if x.lattice.length[h] != k + 1 {
        return Err(Error::Internal(format!(
            "connecting homomorphism needs H in stratum {}, got length {}",
            k + 1,
            x.lattice.length[h]
        )));
    }
    let data = connecting_data(x, sys, h)?;
    let src_h = data.wedge.eq.pres.cohomology(n);
    if n >= data.ambient.len() || n + 1 >= data.target.complex.len() {
        let dst = FgAbPresentation::trivial();
        let matrix = IntMatrix::zeros(0, src_h.gens);
        return Ok(AbHom { src: src_h, dst, matrix });
    }
    let g = data.ambient[n].mul(&data.wedge.eq.terms[n].basis);
    induced_on_cohomology(&data.wedge.eq.pres, n, &data.target.complex, n + 1, &g)
}

/// Cochain realization of the change-of-groups composite Φ^L_H from reduced
/// cochains of X^L_L (over W L, values M_L) into the wedge cochains at H:
/// restrict along W̄_H^L, transport along π, apply μ : M_L → M_H, and extend
/// by averaging over the N_G H-conjugates of L; branches not N_G H-conjugate
/// to L get zero.
#[derive(Clone, Debug)]
pub struct ChangeOfGroupsData {
    pub h: usize,
    pub l: usize,
    pub source: ReducedLocalComplex,
    pub wedge: WedgeComplex,
    /// ambient[n]: source generator ambient → wedge generator ambient
    pub ambient: Vec<IntMatrix>,
}

pub fn change_of_groups_data(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    h: usize,
    l: usize,
) -> Result<ChangeOfGroupsData, Error> {
    let lat = &x.lattice;
    if h == l || !lat.contains[h][l] {
        return Err(Error::Internal(format!(
            "change of groups needs a proper containment H < L, got subgroups {h}, {l}"
        )));
    }
    if lat.length[h] != lat.length[l] + 1 {
        return Err(Error::Internal("change of groups is defined between adjacent strata".into()));
    }
    let source = reduced_local_complex(x, sys, l)?;
    let wedge = wedge_cochains(x, sys, h)?;
    let wl = source.module.module.value.gens;
    let wh = wedge.module.module.value.gens;
    let mu = sys.morphism_matrix(lat, &morphism(lat, h, l, 0).expect("H ≤ L gives an inclusion"));
    let nh_members = lat.subgroups[lat.normalizer[h]].members.clone();
    let weyl_h = lat.weyl_group(h);
    let top = x.dim + 1;
    let mut ambient = Vec::new();
    for n in 0..top {
        let rows = wedge.eq.reps[n].len() * wh;
        let cols = source.mfc.reps[n].len() * wl;
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, &branch_rep) in wedge.eq.reps[n].iter().enumerate() {
            let l_prime = x.exact_isotropy(branch_rep);
            let Some(&n0) = nh_members.iter().find(|&&u| lat.conjugate(u, l) == l_prime) else {
                continue;
            };
            let z = x.translate(lat.group.inv(n0), branch_rep);
            let &(r, mid) = source.index[n]
                .get(&z)
                .ok_or_else(|| Error::Internal("conjugated branch cell is not in X^L_L".into()))?;
            let n0_weyl = weyl_h
                .project(n0)
                .ok_or_else(|| Error::Internal("conjugator is outside N_G H".into()))?;
            let block = wedge.module.module.action[n0_weyl]
                .mul(&mu)
                .mul(&source.module.module.action[mid]);
            m.add_block(i * wh, r * wl, &block);
        }
        ambient.push(m);
    }
    Ok(ChangeOfGroupsData { h, l, source, wedge, ambient })
}

/// (Φ^L_H)_* : H̃^n(X^L_L; M_L) → H̃^n(⋁_{H<L'∈Ŝ_k} X^{L'}_{L'}; M_H).
pub fn change_of_groups(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    h: usize,
    l: usize,
    n: usize,
) -> Result<AbHom, Error> {
    let data = change_of_groups_data(x, sys, h, l)?;
    let src_full = full_subquotient(&data.source.complex.terms[n]);
    let hom = src_full.induced(&data.ambient[n], &data.wedge.eq.terms[n])?;
    induced_on_cohomology(&data.source.complex, n, &data.wedge.eq.pres, n, &hom.matrix)
}

fn full_subquotient(pres: &FgAbPresentation) -> SubQuotient {
    SubQuotient::new(pres.gens, &IntMatrix::identity(pres.gens), &pres.rels)
        .expect("relations lie in the full lattice")
}

/// Identification of the reduced complexes of conjugate modified fixed-point
/// sets, matching orbit representatives orbit-cell by orbit-cell and
/// transporting values through the coefficient system.
pub fn conjugate_block_identification(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    from: &ReducedLocalComplex,
    to: &ReducedLocalComplex,
) -> Result<Vec<IntMatrix>, Error> {
    let lat = &x.lattice;
    let l_from = from.subgroup;
    let l_to = to.subgroup;
    if lat.class_of[l_from] != lat.class_of[l_to] {
        return Err(Error::Internal("conjugate identification needs conjugate subgroups".into()));
    }
    let w = sys.value_at(lat, l_from).gens;
    let mut out = Vec::new();
    for n in 0..from.mfc.reps.len() {
        let mut m = IntMatrix::zeros(to.mfc.reps[n].len() * w, from.mfc.reps[n].len() * w);
        for (j, &rep_from) in from.mfc.reps[n].iter().enumerate() {
            let i = to.mfc.reps[n]
                .iter()
                .position(|&r| r.orbit == rep_from.orbit)
                .ok_or_else(|| Error::Internal("conjugate blocks disagree on orbit-cells".into()))?;
            // ψ : G/l_to → G/l_from through the two canonical cells
            let coset =
                lat.group.mul(to.mfc.reps[n][i].coset, lat.group.inv(rep_from.coset));
            let f = morphism(lat, l_to, l_from, coset)
                .ok_or_else(|| Error::Internal("identification morphism inadmissible".into()))?;
            m.add_block(i * w, j * w, &sys.morphism_matrix(lat, &f));
        }
        out.push(m);
    }
    Ok(out)
}

/// The long exact sequence in reduced local cohomology of the cellular
/// cofibration X_H ↪ X^H ↠ X^H_H, verified degreewise.
pub fn verify_cofibration_les(
    x: &GCWComplex,
    sys: &CoefficientSystem,
    h: usize,
) -> Result<(), Error> {
    let module = sys.weyl_module(&x.lattice, h).module;
    let fixed = x.fixed_complex(h);
    let all_cells = fixed.cells.clone();
    let sub_cells: Vec<Vec<Cell>> = all_cells
        .iter()
        .map(|v| v.iter().copied().filter(|&c| x.exact_isotropy(c) != h).collect())
        .collect();
    let quot_cells: Vec<Vec<Cell>> = all_cells
        .iter()
        .map(|v| v.iter().copied().filter(|&c| x.exact_isotropy(c) == h).collect())
        .collect();
    let a = equivariant_cochains(x, h, &module, quot_cells)?;
    let b = equivariant_cochains(x, h, &module, all_cells)?;
    let c = equivariant_cochains(x, h, &module, sub_cells)?;
    let w = module.value.gens;
    let top = a.reps.len();
    let mut i_maps = Vec::new();
    let mut p_maps = Vec::new();
    for n in 0..top {
        // extension by zero: A-cochains are the B-cochains vanishing on X_H
        let mut i_amb = IntMatrix::zeros(b.reps[n].len() * w, a.reps[n].len() * w);
        for (j, rep) in a.reps[n].iter().enumerate() {
            let bi = b.reps[n]
                .iter()
                .position(|r| r == rep)
                .ok_or_else(|| Error::Internal("orbit representatives of A and B disagree".into()))?;
            i_amb.add_block(bi * w, j * w, &IntMatrix::identity(w));
        }
        let mut p_amb = IntMatrix::zeros(c.reps[n].len() * w, b.reps[n].len() * w);
        for (j, rep) in c.reps[n].iter().enumerate() {
            let bi = b.reps[n]
                .iter()
                .position(|r| r == rep)
                .ok_or_else(|| Error::Internal("orbit representatives of B and C disagree".into()))?;
            p_amb.add_block(j * w, bi * w, &IntMatrix::identity(w));
        }
        i_maps.push(a.terms[n].induced(&i_amb, &b.terms[n])?.matrix);
        p_maps.push(b.terms[n].induced(&p_amb, &c.terms[n])?.matrix);
    }
    verify_les_of_ses(&a.pres, &b.pres, &c.pres, &i_maps, &p_maps)
}

/// Cellular chain data of the orbit space X/G: one cell per orbit-cell, the
/// boundary with cosets forgotten.
pub fn orbit_quotient_boundaries(x: &GCWComplex) -> (Vec<usize>, Vec<IntMatrix>) {
    let ranks: Vec<usize> = x.by_dim.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for n in 1..=x.dim {
        let col_of: BTreeMap<usize, usize> =
            x.by_dim[n - 1].iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = IntMatrix::zeros(ranks[n - 1], ranks[n]);
        for (j, &cell) in x.by_dim[n].iter().enumerate() {
            for t in &x.cells[cell].boundary {
                let i = col_of[&t.cell];
                let v = m.get(i, j) + BigInt::from(t.coeff);
                m.set(i, j, v);
            }
        }
        boundaries.push(m);
    }
    (ranks, boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::ordinary_cohomology_z;
    use crate::abgrp::NormalForm;
    use crate::coeff::load_system;
    use crate::fixtures;
    use num_traits::Zero;

    fn setup(fx: &fixtures::Fixture, system: &str) -> (GCWComplex, CoefficientSystem) {
        let x = fx.complex().unwrap();
        let sys = load_system(fx.system(system).unwrap(), &x.lattice).unwrap();
        (x, sys)
    }

    #[test]
    fn point_cohomology() {
        let (x, sys) = setup(&fixtures::point_z2(), "constant_z");
        assert_eq!(bredon_cohomology(&x, &sys, 0).unwrap().normal_form(), NormalForm::free(1));
        assert!(bredon_cohomology(&x, &sys, 1).unwrap().normal_form().is_trivial());
    }

    #[test]
    fn reflection_sphere_constant_coefficients() {
        let (x, sys) = setup(&fixtures::reflection_s2(), "constant_z");
        let h: Vec<NormalForm> =
            (0..=2).map(|n| bredon_cohomology(&x, &sys, n).unwrap().normal_form()).collect();
        assert_eq!(h[0], NormalForm::free(1));
        assert!(h[1].is_trivial());
        assert!(h[2].is_trivial());
    }

    #[test]
    fn antipodal_circle_constant_coefficients() {
        let (x, sys) = setup(&fixtures::antipodal_s1(), "constant_z");
        assert_eq!(bredon_cohomology(&x, &sys, 0).unwrap().normal_form(), NormalForm::free(1));
        assert_eq!(bredon_cohomology(&x, &sys, 1).unwrap().normal_form(), NormalForm::free(1));
    }

    #[test]
    fn antipodal_circle_sign_coefficients() {
        let (x, sys) = setup(&fixtures::antipodal_s1(), "sign");
        assert!(bredon_cohomology(&x, &sys, 0).unwrap().normal_form().is_trivial());
        let h1 = bredon_cohomology(&x, &sys, 1).unwrap().normal_form();
        assert_eq!(h1.rank, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn constant_coefficients_compute_the_orbit_space() {
        for fx in fixtures::all() {
            let (x, sys) = setup(&fx, "constant_z");
            let (ranks, boundaries) = orbit_quotient_boundaries(&x);
            let expected = ordinary_cohomology_z(&ranks, &boundaries);
            for n in 0..=x.dim {
                let got = bredon_cohomology(&x, &sys, n).unwrap().normal_form();
                assert_eq!(got, expected[n], "{} degree {n}", fx.name);
            }
        }
    }

    #[test]
    fn free_orbit_cohomology_is_the_value() {
        // X = G/e for S3: H^0 = M(G/e) whatever the system
        let fx = fixtures::s3_sphere();
        let doc = crate::gcw::ComplexDoc {
            group: fx.complex_doc().group.clone(),
            cells: vec![crate::gcw::CellDoc { dim: 0, isotropy: vec![0], boundary: vec![] }],
        };
        let x = crate::gcw::load_complex(&doc).unwrap();
        for (name, sysdoc) in fx.systems() {
            let sys = load_system(sysdoc, &x.lattice).unwrap();
            let h0 = bredon_cohomology(&x, &sys, 0).unwrap();
            assert_eq!(
                h0.normal_form(),
                sys.value_at(&x.lattice, x.lattice.trivial_index).normal_form(),
                "system {name}"
            );
        }
    }

    #[test]
    fn reduced_local_cohomology_of_reflection_sphere() {
        let (x, sys) = setup(&fixtures::reflection_s2(), "constant_z");
        let e = x.lattice.trivial_index;
        let g = x.lattice.full_index;
        // X^e_e = S² ∨ S² with the swap: H̃² = Z only
        let rl = reduced_local_complex(&x, &sys, e).unwrap();
        assert!(rl.complex.cohomology(0).normal_form().is_trivial());
        assert!(rl.complex.cohomology(1).normal_form().is_trivial());
        assert_eq!(rl.complex.cohomology(2).normal_form(), NormalForm::free(1));
        // X^G_G = (S¹)₊: reduced cohomology is the unreduced cohomology of S¹
        let rg = reduced_local_complex(&x, &sys, g).unwrap();
        assert_eq!(rg.complex.cohomology(0).normal_form(), NormalForm::free(1));
        assert_eq!(rg.complex.cohomology(1).normal_form(), NormalForm::free(1));
    }

    #[test]
    fn reduced_local_cohomology_of_basepoint_only() {
        let (x, sys) = setup(&fixtures::antipodal_s1(), "constant_z");
        let g = x.lattice.full_index;
        let rl = reduced_local_complex(&x, &sys, g).unwrap();
        assert!(rl.mfc.is_basepoint_only());
        for n in 0..=1 {
            assert!(rl.complex.cohomology(n).normal_form().is_trivial());
        }
    }

    #[test]
    fn connecting_homomorphism_on_reflection_sphere() {
        let (x, sys) = setup(&fixtures::reflection_s2(), "constant_z");
        let e = x.lattice.trivial_index;
        // δ̄*: H̃¹ of the G-stratum wedge (Z) → H̃² of the e-block (Z) is ±1
        let hom = connecting_homomorphism(&x, &sys, e, 0, 1).unwrap();
        assert_eq!(hom.src.normal_form(), NormalForm::free(1));
        assert_eq!(hom.dst.normal_form(), NormalForm::free(1));
        assert!(hom.is_iso(), "connecting map is an isomorphism");
    }

    #[test]
    fn connecting_homomorphism_vanishes_without_cross_strata() {
        let (x, sys) = setup(&fixtures::antipodal_s1(), "constant_z");
        let e = x.lattice.trivial_index;
        // the G-stratum is empty for a free action, so the wedge vanishes
        let hom = connecting_homomorphism(&x, &sys, e, 0, 0).unwrap();
        assert!(hom.src.normal_form().is_trivial());
    }

    #[test]
    fn change_of_groups_on_reflection_sphere() {
        let (x, sys) = setup(&fixtures::reflection_s2(), "constant_z");
        let e = x.lattice.trivial_index;
        let g = x.lattice.full_index;
        // with constant Z the induced map on H̃¹ is an isomorphism onto the
        // single wedge branch
        let hom = change_of_groups(&x, &sys, e, g, 1).unwrap();
        assert_eq!(hom.src.normal_form(), NormalForm::free(1));
        assert_eq!(hom.dst.normal_form(), NormalForm::free(1));
        assert!(hom.is_iso());
    }

    #[test]
    fn change_of_groups_rejects_equal_subgroups() {
        let (x, sys) = setup(&fixtures::reflection_s2(), "constant_z");
        let g = x.lattice.full_index;
        assert!(change_of_groups(&x, &sys, g, g, 0).is_err());
    }

    #[test]
    fn change_of_groups_zero_on_nonconjugate_branches() {
        // S3 sphere, h = e, L = a C2: the three C2 branches are hit by
        // averaging, the C3 branch rows stay zero
        let (x, sys) = setup(&fixtures::s3_sphere(), "constant_z");
        let e = x.lattice.trivial_index;
        let c2 = (0..x.lattice.count()).find(|&i| x.lattice.subgroups[i].order() == 2).unwrap();
        let data = change_of_groups_data(&x, &sys, e, c2).unwrap();
        let wh = data.wedge.module.module.value.gens;
        for n in 0..data.ambient.len() {
            for (i, &rep) in data.wedge.eq.reps[n].iter().enumerate() {
                let iso = x.exact_isotropy(rep);
                if x.lattice.class_of[iso] != x.lattice.class_of[c2] {
                    for row in i * wh..(i + 1) * wh {
                        for col in 0..data.ambient[n].cols() {
                            assert!(data.ambient[n].get(row, col).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cofibration_les_is_exact_everywhere() {
        for fx in fixtures::all() {
            for (name, sysdoc) in fx.systems() {
                let x = fx.complex().unwrap();
                let sys = load_system(sysdoc, &x.lattice).unwrap();
                for h in 0..x.lattice.count() {
                    verify_cofibration_les(&x, &sys, h)
                        .unwrap_or_else(|e| panic!("{} / {name} / subgroup {h}: {e}", fx.name));
                }
            }
        }
    }

    #[test]
    fn equivariant_route_matches_group_ring_route() {
        for fx in fixtures::all() {
            let (x, sys) = setup(&fx, "constant_z");
            for h in 0..x.lattice.count() {
                let rl = reduced_local_complex(&x, &sys, h).unwrap();
                let module = sys.weyl_module(&x.lattice, h).module;
                let quot: Vec<Vec<Cell>> = x
                    .fixed_complex(h)
                    .cells
                    .iter()
                    .map(|v| v.iter().copied().filter(|&c| x.exact_isotropy(c) == h).collect())
                    .collect();
                let eq = equivariant_cochains(&x, h, &module, quot).unwrap();
                for n in 0..rl.complex.len() {
                    assert_eq!(
                        rl.complex.cohomology(n).normal_form(),
                        eq.pres.cohomology(n).normal_form(),
                        "{} subgroup {h} degree {n}",
                        fx.name
                    );
                }
            }
        }
    }

    #[test]
    fn triangularity_of_the_bredon_differential() {
        for fx in fixtures::all() {
            let (x, sys) = setup(&fx, "constant_z");
            let bc = bredon_cochain_complex(&x, &sys).unwrap();
            for n in 0..bc.complex.len() - 1 {
                for s in 0..=bc.max_stratum {
                    let f = bc.filtration_lattice(n, s);
                    let image = bc.complex.d[n].mul(&f);
                    let target = bc.filtration_lattice(n + 1, s);
                    assert!(
                        lattice::contains_all(&target, &image),
                        "{} degree {n} stratum {s}",
                        fx.name
                    );
                }
            }
        }
    }
}
