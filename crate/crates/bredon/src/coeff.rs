//! Coefficient systems: contravariant functors M : O_G^op → Ab.
//!
//! Values are stored once per conjugacy class of subgroups, at the class
//! representative. A morphism G/H → G/K with coset aK factors as the
//! inclusion H ⊆ aKa⁻¹ followed by a translation isomorphism, so the whole
//! functor is determined by inclusion maps (one instance per G-orbit of
//! comparable pairs) and the Weyl actions at the representatives. Loading
//! completes the tables by conjugation and composition and then checks
//! functoriality on every composable pair — the category is finite.

use crate::abgrp::matrix::IntMatrix;
use crate::abgrp::{lattice, AbHom, FgAbPresentation, GammaModule};
use crate::error::Error;
use crate::fgroup::{enumerate_subgroups, QuotientGroup, SubgroupLattice, DEFAULT_ORDER_CAP};
use crate::orbitcat::{self, OrbitMorphism};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueDoc {
    pub rank: usize,
    /// relation columns, each of length `rank`
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapDoc {
    /// M applied to the inclusion-induced map G/from → G/to (from ⊆ to),
    /// written between the class-representative values.
    Inclusion { from: usize, to: usize, matrix: Vec<Vec<i64>> },
    /// Action of a Weyl-group element on the value at a class
    /// representative; `element` is an element of N_G(rep).
    Weyl { from: usize, to: usize, element: usize, matrix: Vec<Vec<i64>> },
}

/// On-disk form of a coefficient system.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemDoc {
    /// values keyed by class-representative subgroup index
    pub values: BTreeMap<String, ValueDoc>,
    #[serde(default)]
    pub maps: Vec<MapDoc>,
}

/// A validated coefficient system with its full morphism table.
#[derive(Clone, Debug)]
pub struct CoefficientSystem {
    /// value presentation per conjugacy class id
    pub values: Vec<FgAbPresentation>,
    /// weyl_actions[class][w] = matrix of w ∈ W(rep) on the class value
    weyl_actions: Vec<Vec<IntMatrix>>,
    /// inclusion maps in representative coordinates, per comparable pair
    incl: BTreeMap<(usize, usize), IntMatrix>,
}

fn matrix_from_doc(rows: usize, cols: usize, m: &[Vec<i64>], what: &str) -> Result<IntMatrix, Error> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidSystem(format!(
            "{what}: matrix must be {rows}x{cols}, got {}x{}",
            m.len(),
            m.first().map_or(0, Vec::len)
        )));
    }
    Ok(IntMatrix::from_rows_i64(m))
}

fn value_from_doc(doc: &ValueDoc) -> Result<FgAbPresentation, Error> {
    for r in &doc.relations {
        if r.len() != doc.rank {
            return Err(Error::InvalidSystem(format!(
                "relation column has length {}, expected {}",
                r.len(),
                doc.rank
            )));
        }
    }
    let cols: Vec<Vec<num_bigint::BigInt>> = doc
        .relations
        .iter()
        .map(|r| r.iter().map(|&x| num_bigint::BigInt::from(x)).collect())
        .collect();
    Ok(FgAbPresentation { gens: doc.rank, rels: IntMatrix::from_cols(doc.rank, cols) })
}

impl CoefficientSystem {
    /// The value M(G/H), shared across the conjugacy class of H.
    pub fn value_at(&self, lat: &SubgroupLattice, h: usize) -> &FgAbPresentation {
        &self.values[lat.class_of[h]]
    }

    /// Matrix of the Weyl action of w ∈ W(rep) on the class value.
    pub fn weyl_action(&self, lat: &SubgroupLattice, class: usize, w: usize) -> &IntMatrix {
        let _ = lat;
        &self.weyl_actions[class][w]
    }

    /// M applied to the morphism G/H → G/K with coset aK, as a matrix from
    /// the K-class value to the H-class value.
    pub fn morphism_matrix(&self, lat: &SubgroupLattice, f: &OrbitMorphism) -> IntMatrix {
        let g = &lat.group;
        let j = lat.conjugate(f.coset, f.dst);
        let rep = lat.rep_of(f.dst);
        let w_elt = g.mul(lat.conjugator_to_rep[j], g.mul(f.coset, g.inv(lat.conjugator_to_rep[f.dst])));
        let w = lat
            .weyl_group(rep)
            .project(w_elt)
            .expect("translation part normalizes the class representative");
        let class = lat.class_of[f.dst];
        self.incl[&(f.src, j)].mul(&self.weyl_actions[class][w])
    }

    /// Same, as a checked homomorphism of presented groups.
    pub fn morphism_hom(&self, lat: &SubgroupLattice, f: &OrbitMorphism) -> AbHom {
        AbHom {
            src: self.value_at(lat, f.dst).clone(),
            dst: self.value_at(lat, f.src).clone(),
            matrix: self.morphism_matrix(lat, f),
        }
    }

    /// Exhaustive functoriality check over the finite category.
    pub fn validate(&self, lat: &SubgroupLattice) -> Result<(), Error> {
        for h in 0..lat.count() {
            let id = orbitcat::identity(lat, h);
            let m = self.morphism_matrix(lat, &id);
            let idm = IntMatrix::identity(self.value_at(lat, h).gens);
            if !lattice::contains_all(&self.value_at(lat, h).rels, &m.sub(&idm)) {
                return Err(Error::InvalidSystem(format!(
                    "identity of G/{h} does not act as the identity"
                )));
            }
        }
        let homs: Vec<Vec<Vec<OrbitMorphism>>> = (0..lat.count())
            .map(|a| (0..lat.count()).map(|b| orbitcat::hom_set(lat, a, b)).collect())
            .collect();
        for a in 0..lat.count() {
            for b in 0..lat.count() {
                for f in &homs[a][b] {
                    let mf = self.morphism_hom(lat, f);
                    mf.check_well_defined().map_err(|_| {
                        Error::InvalidSystem(format!(
                            "map for morphism G/{a} → G/{b} (coset {}) does not respect relations",
                            f.coset
                        ))
                    })?;
                    for c in 0..lat.count() {
                        for gmor in &homs[b][c] {
                            let fg = orbitcat::compose(lat, f, gmor)
                                .expect("endpoints match by construction");
                            let lhs = self.morphism_matrix(lat, &fg);
                            let rhs =
                                self.morphism_matrix(lat, f).mul(&self.morphism_matrix(lat, gmor));
                            if !lattice::contains_all(
                                &self.value_at(lat, a).rels,
                                &lhs.sub(&rhs),
                            ) {
                                return Err(Error::InvalidSystem(format!(
                                    "functoriality fails at G/{a} → G/{b} → G/{c} \
                                     (cosets {}, {})",
                                    f.coset, gmor.coset
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// M(G/H) as a module over W H, the action read off the automorphisms.
    pub fn weyl_module(&self, lat: &SubgroupLattice, h: usize) -> WeylModule {
        let weyl = lat.weyl_group(h).clone();
        let value = self.value_at(lat, h).clone();
        let action: Vec<IntMatrix> = (0..weyl.order())
            .map(|w| {
                let f = orbitcat::morphism(lat, h, h, weyl.reps[w])
                    .expect("normalizer elements give automorphisms");
                self.morphism_matrix(lat, &f)
            })
            .collect();
        WeylModule { subgroup: h, weyl, module: GammaModule { value, action } }
    }

    /// The induced system ĥM on the orbit category of W H, with
    /// ĥM(W H/L̄) = M(G/L) along the lattice bijection L ↔ L̄ = L/H.
    pub fn induced_system(
        &self,
        lat: &SubgroupLattice,
        h: usize,
    ) -> Result<InducedSystem, Error> {
        let weyl = lat.weyl_group(h).clone();
        let wlat = enumerate_subgroups(&weyl.group, DEFAULT_ORDER_CAP)?;
        // lift of a W̄-subgroup: union of its member cosets inside N_G H
        let lift = |bar: usize| -> usize {
            let mut members = Vec::new();
            for (x, proj) in weyl.proj.iter().enumerate() {
                if let Some(c) = proj {
                    if wlat.subgroups[bar].contains(*c) {
                        members.push(x);
                    }
                }
            }
            lat.index_of(&members).expect("lift of a W̄-subgroup is a subgroup of G")
        };
        let values: Vec<FgAbPresentation> = wlat
            .class_reps
            .iter()
            .map(|&rep| self.value_at(lat, lift(rep)).clone())
            .collect();
        let mut incl = BTreeMap::new();
        for a in 0..wlat.count() {
            for b in 0..wlat.count() {
                if !wlat.contains[a][b] {
                    continue;
                }
                // stored convention: the transported morphism rep_[a] → rep_[b]
                // with coset g_a · g_b⁻¹
                let ra = wlat.rep_of(a);
                let rb = wlat.rep_of(b);
                let wg = &wlat.group;
                let coset_bar =
                    wg.mul(wlat.conjugator_to_rep[a], wg.inv(wlat.conjugator_to_rep[b]));
                let f_bar = orbitcat::morphism(&wlat, ra, rb, coset_bar)
                    .expect("transported inclusion is admissible");
                let f = orbitcat::morphism(lat, lift(ra), lift(rb), weyl.reps[f_bar.coset])
                    .expect("lift of an orbit morphism is admissible");
                incl.insert((a, b), self.morphism_matrix(lat, &f));
            }
        }
        let mut weyl_actions = Vec::new();
        for (class, &rep) in wlat.class_reps.iter().enumerate() {
            let wrep = lat_weyl_rep(&wlat, rep);
            let mut actions = Vec::new();
            for w2 in 0..wrep.order() {
                let f_bar = orbitcat::morphism(&wlat, rep, rep, wrep.reps[w2])
                    .expect("normalizer elements give automorphisms");
                let f = orbitcat::morphism(lat, lift(rep), lift(rep), weyl.reps[f_bar.coset])
                    .expect("lift of an automorphism is admissible");
                actions.push(self.morphism_matrix(lat, &f));
            }
            let _ = class;
            weyl_actions.push(actions);
        }
        let system = CoefficientSystem { values, weyl_actions, incl };
        system.validate(&wlat)?;
        Ok(InducedSystem { subgroup: h, weyl, lattice: wlat, system })
    }
}

fn lat_weyl_rep<'a>(lat: &'a SubgroupLattice, rep: usize) -> &'a QuotientGroup {
    lat.weyl_group(rep)
}

/// M(G/H) with its W H-action.
#[derive(Clone, Debug)]
pub struct WeylModule {
    pub subgroup: usize,
    pub weyl: QuotientGroup,
    pub module: GammaModule,
}

/// The system ĥM on O_{W H} together with the lattice of W H.
#[derive(Clone, Debug)]
pub struct InducedSystem {
    pub subgroup: usize,
    pub weyl: QuotientGroup,
    pub lattice: SubgroupLattice,
    pub system: CoefficientSystem,
}

/// Load a system document against a lattice: read the values, complete the
/// map tables by conjugation and composition, and validate functoriality.
pub fn load_system(doc: &SystemDoc, lat: &SubgroupLattice) -> Result<CoefficientSystem, Error> {
    let class_count = lat.class_reps.len();
    let mut values = Vec::with_capacity(class_count);
    for (class, &rep) in lat.class_reps.iter().enumerate() {
        let vd = doc.values.get(&rep.to_string()).ok_or_else(|| {
            Error::InvalidSystem(format!(
                "missing value for class representative subgroup {rep} (class {class})"
            ))
        })?;
        values.push(value_from_doc(vd)?);
    }
    for key in doc.values.keys() {
        let idx: usize = key
            .parse()
            .map_err(|_| Error::InvalidSystem(format!("bad subgroup key {key:?}")))?;
        if idx >= lat.count() || lat.rep_of(idx) != idx {
            return Err(Error::InvalidSystem(format!(
                "value key {idx} is not a class representative"
            )));
        }
    }

    // Weyl actions: close the given generators under multiplication.
    let mut weyl_actions: Vec<Vec<Option<IntMatrix>>> = lat
        .class_reps
        .iter()
        .map(|&rep| vec![None; lat.weyl_group(rep).order()])
        .collect();
    for (class, &rep) in lat.class_reps.iter().enumerate() {
        weyl_actions[class][0] = Some(IntMatrix::identity(values[class].gens));
        let _ = rep;
    }
    let mut seeds: Vec<Vec<(usize, IntMatrix)>> = vec![Vec::new(); class_count];
    for m in &doc.maps {
        if let MapDoc::Weyl { from, to, element, matrix } = m {
            if from != to {
                return Err(Error::InvalidSystem(format!(
                    "weyl map must have from == to, got {from} and {to}"
                )));
            }
            if *from >= lat.count() || lat.rep_of(*from) != *from {
                return Err(Error::InvalidSystem(format!(
                    "weyl map is not at a class representative: {from}"
                )));
            }
            let class = lat.class_of[*from];
            let w = lat.weyl_group(*from).project(*element).ok_or_else(|| {
                Error::InvalidSystem(format!(
                    "weyl map element {element} does not normalize subgroup {from}"
                ))
            })?;
            let g = values[class].gens;
            let mat = matrix_from_doc(g, g, matrix, &format!("weyl map at {from}"))?;
            seeds[class].push((w, mat));
        }
    }
    for (class, &rep) in lat.class_reps.iter().enumerate() {
        let weyl = lat.weyl_group(rep);
        let rels = &values[class].rels;
        loop {
            let mut progressed = false;
            let known: Vec<(usize, IntMatrix)> = weyl_actions[class]
                .iter()
                .enumerate()
                .filter_map(|(w, m)| m.clone().map(|m| (w, m)))
                .collect();
            for (w, mw) in &known {
                for (s, ms) in &seeds[class] {
                    let prod_w = weyl.group.mul(*w, *s);
                    let prod_m = mw.mul(ms);
                    match &weyl_actions[class][prod_w] {
                        None => {
                            weyl_actions[class][prod_w] = Some(prod_m);
                            progressed = true;
                        }
                        Some(existing) => {
                            if !lattice::contains_all(rels, &existing.sub(&prod_m)) {
                                return Err(Error::InvalidSystem(format!(
                                    "inconsistent Weyl action at representative {rep}"
                                )));
                            }
                        }
                    }
                }
            }
            if !progressed {
                break;
            }
        }
        if weyl_actions[class].iter().any(Option::is_none) {
            return Err(Error::InvalidSystem(format!(
                "weyl generators at representative {rep} do not generate W(rep)"
            )));
        }
    }
    let weyl_actions: Vec<Vec<IntMatrix>> =
        weyl_actions.into_iter().map(|v| v.into_iter().map(Option::unwrap).collect()).collect();

    // validate that each action is an automorphism of the value
    for (class, actions) in weyl_actions.iter().enumerate() {
        let rep = lat.class_reps[class];
        let module = GammaModule { value: values[class].clone(), action: actions.clone() };
        let weyl = lat.weyl_group(rep);
        module
            .validate(|a, b| weyl.group.mul(a, b))
            .map_err(|e| Error::InvalidSystem(format!("weyl action at {rep}: {e}")))?;
    }

    // Inclusion maps: seed, then saturate by conjugation and composition.
    let mut incl: BTreeMap<(usize, usize), IntMatrix> = BTreeMap::new();
    for i in 0..lat.count() {
        incl.insert((i, i), IntMatrix::identity(values[lat.class_of[i]].gens));
    }
    let insert = |table: &mut BTreeMap<(usize, usize), IntMatrix>,
                      pair: (usize, usize),
                      m: IntMatrix|
     -> Result<bool, Error> {
        let rels = &values[lat.class_of[pair.0]].rels;
        match table.get(&pair) {
            None => {
                table.insert(pair, m);
                Ok(true)
            }
            Some(existing) => {
                if !lattice::contains_all(rels, &existing.sub(&m)) {
                    return Err(Error::InvalidSystem(format!(
                        "inconsistent inclusion map for pair ({}, {})",
                        pair.0, pair.1
                    )));
                }
                Ok(false)
            }
        }
    };
    for m in &doc.maps {
        if let MapDoc::Inclusion { from, to, matrix } = m {
            if *from >= lat.count() || *to >= lat.count() || !lat.contains[*from][*to] {
                return Err(Error::InvalidSystem(format!(
                    "inclusion map with from={from}, to={to}: not a nested pair of subgroups"
                )));
            }
            let rows = values[lat.class_of[*from]].gens;
            let cols = values[lat.class_of[*to]].gens;
            let mat = matrix_from_doc(rows, cols, matrix, &format!("inclusion {from} ⊆ {to}"))?;
            insert(&mut incl, (*from, *to), mat)?;
        }
    }
    let weyl_matrix = |class: usize, elt: usize| -> IntMatrix {
        let rep = lat.class_reps[class];
        let w = lat
            .weyl_group(rep)
            .project(elt)
            .expect("conjugation bookkeeping stays in the normalizer");
        weyl_actions[class][w].clone()
    };
    loop {
        let mut progressed = false;
        let known: Vec<((usize, usize), IntMatrix)> =
            incl.iter().map(|(k, v)| (*k, v.clone())).collect();
        // conjugation closure
        for ((h, k), m) in &known {
            for u in 0..lat.group.order() {
                let h2 = lat.conjugate(u, *h);
                let k2 = lat.conjugate(u, *k);
                if incl.contains_key(&(h2, k2)) {
                    continue;
                }
                let g = &lat.group;
                let left = weyl_matrix(
                    lat.class_of[*h],
                    g.mul(lat.conjugator_to_rep[h2], g.mul(u, g.inv(lat.conjugator_to_rep[*h]))),
                );
                let right = weyl_matrix(
                    lat.class_of[*k],
                    g.mul(lat.conjugator_to_rep[*k], g.mul(g.inv(u), g.inv(lat.conjugator_to_rep[k2]))),
                );
                let derived = left.mul(m).mul(&right);
                progressed |= insert(&mut incl, (h2, k2), derived)?;
            }
        }
        // composition closure
        let known: Vec<((usize, usize), IntMatrix)> =
            incl.iter().map(|(k, v)| (*k, v.clone())).collect();
        for ((h, j), m1) in &known {
            for ((j2, k), m2) in &known {
                if j != j2 || incl.contains_key(&(*h, *k)) {
                    continue;
                }
                progressed |= insert(&mut incl, (*h, *k), m1.mul(m2))?;
            }
        }
        if !progressed {
            break;
        }
    }
    for h in 0..lat.count() {
        for k in 0..lat.count() {
            if lat.contains[h][k] && !incl.contains_key(&(h, k)) {
                return Err(Error::InvalidSystem(format!(
                    "missing datum: no inclusion map derivable for subgroups {h} ⊆ {k}"
                )));
            }
        }
    }

    let system = CoefficientSystem { values, weyl_actions, incl };
    system.validate(lat)?;
    Ok(system)
}

/// Document for the constant system at a fixed value: identity inclusions on
/// every nested pair and identity Weyl actions.
pub fn constant_system_doc(lat: &SubgroupLattice, value: ValueDoc) -> SystemDoc {
    let mut values = BTreeMap::new();
    for &rep in &lat.class_reps {
        values.insert(rep.to_string(), value.clone());
    }
    let id: Vec<Vec<i64>> =
        (0..value.rank).map(|i| (0..value.rank).map(|j| i64::from(i == j)).collect()).collect();
    let mut maps = Vec::new();
    for h in 0..lat.count() {
        for k in 0..lat.count() {
            if h != k && lat.contains[h][k] {
                maps.push(MapDoc::Inclusion { from: h, to: k, matrix: id.clone() });
            }
        }
    }
    for &rep in &lat.class_reps {
        let n = &lat.subgroups[lat.normalizer[rep]];
        for &e in &n.members {
            maps.push(MapDoc::Weyl { from: rep, to: rep, element: e, matrix: id.clone() });
        }
    }
    SystemDoc { values, maps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn constant_system_loads_for_every_fixture_group() {
        for fx in fixtures::all() {
            let x = fx.complex().unwrap();
            let doc = constant_system_doc(&x.lattice, ValueDoc { rank: 1, relations: vec![] });
            let sys = load_system(&doc, &x.lattice).unwrap();
            // every structure map of the constant system is the identity
            for a in 0..x.lattice.count() {
                for b in 0..x.lattice.count() {
                    for f in orbitcat::hom_set(&x.lattice, a, b) {
                        let m = sys.morphism_matrix(&x.lattice, &f);
                        assert_eq!(m, IntMatrix::identity(1));
                    }
                }
            }
        }
    }

    #[test]
    fn sign_system_on_z2() {
        let fx = fixtures::antipodal_s1();
        let x = fx.complex().unwrap();
        let doc = fx.system("sign").unwrap();
        let sys = load_system(doc, &x.lattice).unwrap();
        let e = x.lattice.trivial_index;
        // the nontrivial translation of G/e acts by -1
        let f = orbitcat::morphism(&x.lattice, e, e, 1).unwrap();
        assert_eq!(sys.morphism_matrix(&x.lattice, &f), IntMatrix::from_rows_i64(&[vec![-1]]));
        let wm = sys.weyl_module(&x.lattice, e);
        wm.module.validate(|a, b| wm.weyl.group.mul(a, b)).unwrap();
    }

    #[test]
    fn non_invertible_weyl_action_is_rejected() {
        let fx = fixtures::antipodal_s1();
        let x = fx.complex().unwrap();
        let mut doc = fx.system("sign").unwrap().clone();
        for m in &mut doc.maps {
            if let MapDoc::Weyl { matrix, .. } = m {
                *matrix = vec![vec![2]];
            }
        }
        assert!(load_system(&doc, &x.lattice).is_err());
    }

    #[test]
    fn missing_value_is_named() {
        let fx = fixtures::reflection_s2();
        let x = fx.complex().unwrap();
        let mut doc = fx.doc().system;
        doc.values.remove("0");
        let err = load_system(&doc, &x.lattice).unwrap_err();
        match err {
            Error::InvalidSystem(msg) => assert!(msg.contains("missing value"), "{msg}"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn weyl_module_of_constant_system_is_trivial() {
        let fx = fixtures::s3_sphere();
        let x = fx.complex().unwrap();
        let sys = load_system(&fx.doc().system, &x.lattice).unwrap();
        for h in 0..x.lattice.count() {
            let wm = sys.weyl_module(&x.lattice, h);
            for a in &wm.module.action {
                assert_eq!(*a, IntMatrix::identity(1));
            }
        }
    }

    #[test]
    fn induced_system_at_trivial_subgroup_is_the_system_itself() {
        let fx = fixtures::s3_sphere();
        let x = fx.complex().unwrap();
        let sys = load_system(&fx.doc().system, &x.lattice).unwrap();
        let ind = sys.induced_system(&x.lattice, x.lattice.trivial_index).unwrap();
        assert_eq!(ind.lattice.count(), x.lattice.count());
        // the lattice bijection is the identity, so class values agree
        for (c, v) in ind.system.values.iter().enumerate() {
            assert_eq!(v.normal_form(), sys.values[c].normal_form());
        }
    }

    #[test]
    fn induced_system_at_full_subgroup_is_single_valued() {
        let fx = fixtures::reflection_s2();
        let x = fx.complex().unwrap();
        let sys = load_system(&fx.doc().system, &x.lattice).unwrap();
        let ind = sys.induced_system(&x.lattice, x.lattice.full_index).unwrap();
        assert_eq!(ind.lattice.count(), 1);
        assert_eq!(ind.system.values.len(), 1);
    }

    #[test]
    fn induced_weyl_modules_match_transported_actions() {
        // restriction through ĥM agrees with restriction in M on the s3 fixture
        let fx = fixtures::s3_sphere();
        let x = fx.complex().unwrap();
        for (_, sysdoc) in fx.systems() {
            let sys = load_system(sysdoc, &x.lattice).unwrap();
            for h in 0..x.lattice.count() {
                let ind = sys.induced_system(&x.lattice, h).unwrap();
                for lbar in 0..ind.lattice.count() {
                    let wm_bar = ind.system.weyl_module(&ind.lattice, lbar);
                    // lift L̄ to L ≤ N_G H and compare the module values
                    let mut members = Vec::new();
                    for (xx, p) in ind.weyl.proj.iter().enumerate() {
                        if let Some(c) = p {
                            if ind.lattice.subgroups[lbar].contains(*c) {
                                members.push(xx);
                            }
                        }
                    }
                    let l = x.lattice.index_of(&members).unwrap();
                    assert_eq!(
                        wm_bar.module.value.normal_form(),
                        sys.value_at(&x.lattice, l).normal_form()
                    );
                }
            }
        }
    }
}
