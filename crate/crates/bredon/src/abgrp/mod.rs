//! Exact linear algebra over ℤ: finitely generated abelian groups as
//! cokernel presentations, homomorphisms, cochain complexes and their
//! cohomology, and Hom over the integral group ring of a finite group.

pub mod lattice;
pub mod matrix;

use crate::error::Error;
use matrix::{col_basis, kernel, smith, solve, IntMatrix};
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use std::fmt;

/// A finitely generated abelian group presented as coker(rels: ℤ^k → ℤ^gens).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbPresentation {
    pub gens: usize,
    /// gens × k matrix whose columns are the relations.
    pub rels: IntMatrix,
}

/// The invariant-factor normal form: free rank plus the divisor chain
/// d₁ | d₂ | … with every dᵢ > 1. Two presentations give isomorphic groups
/// iff their normal forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub rank: usize,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<BigInt>,
}

fn serialize_torsion<S: serde::Serializer>(t: &Vec<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|d| d.to_string()))
}

impl NormalForm {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn free(rank: usize) -> Self {
        NormalForm { rank, torsion: Vec::new() }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FgAbPresentation {
    pub fn free(gens: usize) -> Self {
        FgAbPresentation { gens, rels: IntMatrix::zeros(gens, 0) }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// ℤ/k as a one-generator presentation.
    pub fn cyclic(k: i64) -> Self {
        FgAbPresentation { gens: 1, rels: IntMatrix::from_rows_i64(&[vec![k]]) }
    }

    pub fn normal_form(&self) -> NormalForm {
        let sm = smith(&self.rels);
        let torsion: Vec<BigInt> =
            sm.divisors().into_iter().filter(|d| d > &BigInt::one()).collect();
        NormalForm { rank: self.gens - sm.rank, torsion }
    }

    pub fn is_trivial_group(&self) -> bool {
        self.normal_form().is_trivial()
    }

    pub fn direct_sum(parts: &[&FgAbPresentation]) -> FgAbPresentation {
        let gens: usize = parts.iter().map(|p| p.gens).sum();
        let rel_cols: usize = parts.iter().map(|p| p.rels.cols()).sum();
        let mut rels = IntMatrix::zeros(gens, rel_cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            rels.add_block(r0, c0, &p.rels);
            r0 += p.gens;
            c0 += p.rels.cols();
        }
        FgAbPresentation { gens, rels }
    }

    /// Relation lattice as a column matrix over the generator ambient.
    pub fn rel_lattice(&self) -> IntMatrix {
        self.rels.clone()
    }
}

/// A homomorphism of presented groups, given by a matrix on generators.
#[derive(Clone, Debug)]
pub struct AbHom {
    pub src: FgAbPresentation,
    pub dst: FgAbPresentation,
    pub matrix: IntMatrix,
}

impl AbHom {
    pub fn new(src: FgAbPresentation, dst: FgAbPresentation, matrix: IntMatrix) -> Result<Self, Error> {
        let h = AbHom { src, dst, matrix };
        h.check_well_defined()?;
        Ok(h)
    }

    /// The matrix must carry source relations into destination relations.
    pub fn check_well_defined(&self) -> Result<(), Error> {
        if self.matrix.rows() != self.dst.gens || self.matrix.cols() != self.src.gens {
            return Err(Error::Internal(format!(
                "hom matrix shape {}x{} does not match gens {} -> {}",
                self.matrix.rows(),
                self.matrix.cols(),
                self.src.gens,
                self.dst.gens
            )));
        }
        let image_of_rels = self.matrix.mul(&self.src.rels);
        if !lattice::contains_all(&self.dst.rels, &image_of_rels) {
            return Err(Error::Internal("hom does not carry relations into relations".into()));
        }
        Ok(())
    }

    pub fn compose(&self, then: &AbHom) -> AbHom {
        AbHom {
            src: self.src.clone(),
            dst: then.dst.clone(),
            matrix: then.matrix.mul(&self.matrix),
        }
    }

    /// Equality as maps of the presented groups (entrywise modulo relations).
    pub fn eq_mod_relations(&self, other: &AbHom) -> bool {
        self.matrix.cols() == other.matrix.cols()
            && lattice::contains_all(&self.dst.rels, &self.matrix.sub(&other.matrix))
    }

    pub fn is_zero_map(&self) -> bool {
        lattice::contains_all(&self.dst.rels, &self.matrix)
    }

    pub fn is_injective(&self) -> bool {
        let ker = lattice::preimage(&self.matrix, &self.dst.rels);
        lattice::contains_all(&self.src.rels, &ker)
    }

    pub fn is_surjective(&self) -> bool {
        let im = lattice::sum(&self.matrix, &self.dst.rels);
        lattice::contains_all(&im, &IntMatrix::identity(self.dst.gens))
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// A subquotient num/den of a fixed ambient ℤ^m, with a chosen basis of the
/// numerator so elements have canonical coordinates.
#[derive(Clone, Debug)]
pub struct SubQuotient {
    pub ambient: usize,
    /// Basis of the numerator lattice (columns independent).
    pub basis: IntMatrix,
    /// Generators of the denominator lattice; contained in the numerator.
    pub den: IntMatrix,
    pub pres: FgAbPresentation,
}

impl SubQuotient {
    /// num and den are generating sets; den ⊆ num is required.
    pub fn new(ambient: usize, num: &IntMatrix, den: &IntMatrix) -> Result<Self, Error> {
        assert_eq!(num.rows(), ambient);
        assert_eq!(den.rows(), ambient);
        let basis = col_basis(num);
        let rels = solve(&basis, den).ok_or_else(|| {
            Error::Internal("subquotient denominator not contained in numerator".into())
        })?;
        let pres = FgAbPresentation { gens: basis.cols(), rels };
        Ok(SubQuotient { ambient, basis, den: den.clone(), pres })
    }

    /// Presentation coordinates of an ambient vector lying in the numerator.
    pub fn coords(&self, v: &IntMatrix) -> Option<IntMatrix> {
        solve(&self.basis, v)
    }

    /// Presentation-level matrix of an ambient map t with t(num) ⊆ target num
    /// and t(den) ⊆ target den.
    pub fn induced(&self, t: &IntMatrix, target: &SubQuotient) -> Result<AbHom, Error> {
        let image = t.mul(&self.basis);
        let coords = target.coords(&image).ok_or_else(|| {
            Error::Internal("induced map does not land in target numerator".into())
        })?;
        if !lattice::contains_all(&target.den, &t.mul(&self.den)) {
            return Err(Error::Internal("induced map does not respect denominators".into()));
        }
        Ok(AbHom { src: self.pres.clone(), dst: target.pres.clone(), matrix: coords })
    }
}

/// A cochain complex of presented groups: term n is ℤ^{gens_n} modulo its
/// relation lattice, and d[n] : term n → term n+1 is a matrix on generators.
#[derive(Clone, Debug)]
pub struct Complex {
    pub terms: Vec<FgAbPresentation>,
    pub d: Vec<IntMatrix>,
}

impl Complex {
    pub fn new(terms: Vec<FgAbPresentation>, d: Vec<IntMatrix>) -> Self {
        assert_eq!(d.len() + 1, terms.len().max(1), "need one differential per adjacent pair");
        Complex { terms, d }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// δδ = 0 and δ carries relations into relations, both modulo relations.
    pub fn validate(&self) -> Result<(), Error> {
        for n in 0..self.d.len() {
            if self.d[n].rows() != self.terms[n + 1].gens || self.d[n].cols() != self.terms[n].gens {
                return Err(Error::Internal(format!("differential {n} has wrong shape")));
            }
            let rel_image = self.d[n].mul(&self.terms[n].rels);
            if !lattice::contains_all(&self.terms[n + 1].rels, &rel_image) {
                return Err(Error::Internal(format!(
                    "differential {n} does not respect relations"
                )));
            }
        }
        for n in 0..self.d.len().saturating_sub(1) {
            let dd = self.d[n + 1].mul(&self.d[n]);
            if !lattice::contains_all(&self.terms[n + 2].rels, &dd) {
                return Err(Error::Internal(format!("dd != 0 at degree {n}")));
            }
        }
        Ok(())
    }

    /// Lattice of n-cocycles (contains the relation lattice).
    pub fn cocycles(&self, n: usize) -> IntMatrix {
        let gens = self.terms[n].gens;
        if n + 1 < self.terms.len() {
            lattice::preimage(&self.d[n], &self.terms[n + 1].rels)
        } else {
            IntMatrix::identity(gens)
        }
    }

    /// Lattice of n-coboundaries plus relations.
    pub fn coboundaries(&self, n: usize) -> IntMatrix {
        let rels = self.terms[n].rels.clone();
        if n == 0 {
            rels
        } else {
            lattice::sum(&self.d[n - 1], &rels)
        }
    }

    pub fn cohomology_subquotient(&self, n: usize) -> SubQuotient {
        let z = self.cocycles(n);
        let b = self.coboundaries(n);
        SubQuotient::new(self.terms[n].gens, &z, &b)
            .expect("coboundaries are cocycles in a validated complex")
    }

    /// H^n as a presentation; trivial beyond the top degree.
    pub fn cohomology(&self, n: usize) -> FgAbPresentation {
        if n >= self.terms.len() {
            return FgAbPresentation::trivial();
        }
        self.cohomology_subquotient(n).pres
    }

    pub fn cohomology_normal_form(&self, n: usize) -> NormalForm {
        self.cohomology(n).normal_form()
    }
}

/// Map on cohomology induced by an ambient-level map g : src^n → dst^m that
/// carries cocycles to cocycles and coboundaries to coboundaries.
pub fn induced_on_cohomology(
    src: &Complex,
    n_src: usize,
    dst: &Complex,
    n_dst: usize,
    g: &IntMatrix,
) -> Result<AbHom, Error> {
    let zs = src.cohomology_subquotient(n_src);
    let zd = dst.cohomology_subquotient(n_dst);
    zs.induced(g, &zd)
}

/// A chain complex of free modules over the integral group ring ℤΓ, recorded
/// through a basis in each degree and boundaries with ℤΓ coefficients.
#[derive(Clone, Debug, Default)]
pub struct GroupRingComplex {
    /// Number of basis elements (free-module rank) per degree.
    pub dims: Vec<usize>,
    /// boundary[n][i] lists terms (target basis index in degree n-1, group
    /// element, integer coefficient); boundary[0] is empty.
    pub boundary: Vec<Vec<Vec<(usize, usize, i64)>>>,
}

/// A Γ-module: a presented abelian group with an action matrix per element.
#[derive(Clone, Debug)]
pub struct GammaModule {
    pub value: FgAbPresentation,
    /// action[g] is the matrix of g acting on the value presentation.
    pub action: Vec<IntMatrix>,
}

impl GammaModule {
    pub fn trivial_action(value: FgAbPresentation, order: usize) -> Self {
        let id = IntMatrix::identity(value.gens);
        GammaModule { value, action: vec![id; order] }
    }

    /// Action matrices must be multiplicative, carry relations, and be
    /// invertible modulo relations.
    pub fn validate(&self, mul: impl Fn(usize, usize) -> usize) -> Result<(), Error> {
        let order = self.action.len();
        for (g, a) in self.action.iter().enumerate() {
            let h = AbHom { src: self.value.clone(), dst: self.value.clone(), matrix: a.clone() };
            h.check_well_defined()
                .map_err(|_| Error::InvalidSystem(format!("action of element {g} is not well defined")))?;
            if !h.is_iso() {
                return Err(Error::InvalidSystem(format!("action of element {g} is not invertible")));
            }
        }
        for g in 0..order {
            for h in 0..order {
                let gh = mul(g, h);
                let lhs = self.action[g].mul(&self.action[h]);
                let diff = lhs.sub(&self.action[gh]);
                if !lattice::contains_all(&self.value.rels, &diff) {
                    return Err(Error::InvalidSystem(format!(
                        "action is not multiplicative at elements ({g},{h})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Hom_{ℤΓ}(C_*, M) for a free ℤΓ-complex: one copy of M per basis element,
/// with the differential transported through the Γ-action on M.
pub fn hom_over_group_ring(chains: &GroupRingComplex, module: &GammaModule) -> Complex {
    let w = module.value.gens;
    let top = chains.dims.len();
    let mut terms = Vec::with_capacity(top);
    for n in 0..top {
        let copies: Vec<&FgAbPresentation> = (0..chains.dims[n]).map(|_| &module.value).collect();
        terms.push(FgAbPresentation::direct_sum(&copies));
    }
    let mut d = Vec::new();
    for n in 0..top.saturating_sub(1) {
        let mut m = IntMatrix::zeros(chains.dims[n + 1] * w, chains.dims[n] * w);
        for (i, terms_of_i) in chains.boundary[n + 1].iter().enumerate() {
            for &(j, g, coeff) in terms_of_i {
                let block = module.action[g].scale(&BigInt::from(coeff));
                m.add_block(i * w, j * w, &block);
            }
        }
        d.push(m);
    }
    if top == 0 {
        return Complex { terms: vec![FgAbPresentation::trivial()], d: Vec::new() };
    }
    Complex { terms, d }
}

/// Verify exactness of the long cohomology sequence of a degreewise short
/// exact sequence 0 → A → B → C → 0 of cochain complexes, connecting
/// homomorphism included. The maps are matrices on generators, one per
/// degree. Returns an error describing the first failing position.
pub fn verify_les_of_ses(
    a: &Complex,
    b: &Complex,
    c: &Complex,
    i_maps: &[IntMatrix],
    p_maps: &[IntMatrix],
) -> Result<(), Error> {
    let top = a.len();
    if b.len() != top || c.len() != top || i_maps.len() != top || p_maps.len() != top {
        return Err(Error::Internal("les: mismatched complex lengths".into()));
    }
    // cochain-level exactness and chain-map conditions
    for n in 0..top {
        let ra = &a.terms[n].rels;
        let rb = &b.terms[n].rels;
        let rc = &c.terms[n].rels;
        if !lattice::contains_all(ra, &lattice::preimage(&i_maps[n], rb)) {
            return Err(Error::Internal(format!("les: i is not injective in degree {n}")));
        }
        let im_p = lattice::sum(&p_maps[n], rc);
        if !lattice::contains_all(&im_p, &IntMatrix::identity(c.terms[n].gens)) {
            return Err(Error::Internal(format!("les: p is not surjective in degree {n}")));
        }
        let im_i = lattice::sum(&i_maps[n], rb);
        let ker_p = lattice::preimage(&p_maps[n], rc);
        if !lattice::eq(&im_i, &lattice::sum(&ker_p, rb)) {
            return Err(Error::Internal(format!("les: im i ≠ ker p in degree {n}")));
        }
        if n + 1 < top {
            let comm_i = i_maps[n + 1].mul(&a.d[n]).sub(&b.d[n].mul(&i_maps[n]));
            if !lattice::contains_all(&b.terms[n + 1].rels, &comm_i) {
                return Err(Error::Internal(format!("les: i is not a chain map at degree {n}")));
            }
            let comm_p = p_maps[n + 1].mul(&b.d[n]).sub(&c.d[n].mul(&p_maps[n]));
            if !lattice::contains_all(&c.terms[n + 1].rels, &comm_p) {
                return Err(Error::Internal(format!("les: p is not a chain map at degree {n}")));
            }
        }
    }

    let ha: Vec<SubQuotient> = (0..top).map(|n| a.cohomology_subquotient(n)).collect();
    let hb: Vec<SubQuotient> = (0..top).map(|n| b.cohomology_subquotient(n)).collect();
    let hc: Vec<SubQuotient> = (0..top).map(|n| c.cohomology_subquotient(n)).collect();
    let i_star: Vec<AbHom> =
        (0..top).map(|n| ha[n].induced(&i_maps[n], &hb[n])).collect::<Result<_, _>>()?;
    let p_star: Vec<AbHom> =
        (0..top).map(|n| hb[n].induced(&p_maps[n], &hc[n])).collect::<Result<_, _>>()?;

    // connecting homomorphisms ∂ : H^n(C) → H^{n+1}(A) by the snake
    let mut del: Vec<Option<AbHom>> = Vec::new();
    for n in 0..top {
        if n + 1 >= top {
            del.push(None);
            continue;
        }
        let mut cols = Vec::new();
        for j in 0..hc[n].pres.gens {
            let v = IntMatrix::from_cols(c.terms[n].gens, vec![hc[n].basis.col(j)]);
            let lift = solve(&p_maps[n].hconcat(&c.terms[n].rels), &v)
                .ok_or_else(|| Error::Internal("les: cocycle fails to lift through p".into()))?;
            let x = lift.submatrix(0, 0, b.terms[n].gens, 1);
            let u = b.d[n].mul(&x);
            let w = solve(&i_maps[n + 1].hconcat(&b.terms[n + 1].rels), &u)
                .ok_or_else(|| Error::Internal("les: differential of lift is not in im i".into()))?
                .submatrix(0, 0, a.terms[n + 1].gens, 1);
            let class = ha[n + 1]
                .coords(&w)
                .ok_or_else(|| Error::Internal("les: connecting image is not a cocycle".into()))?;
            cols.push(class.col(0));
        }
        let matrix = IntMatrix::from_cols(ha[n + 1].pres.gens, cols);
        del.push(Some(AbHom { src: hc[n].pres.clone(), dst: ha[n + 1].pres.clone(), matrix }));
    }

    // exactness of the long sequence at every node
    let im_lattice = |h: &AbHom| lattice::sum(&h.matrix, &h.dst.rels);
    let ker_lattice = |h: &AbHom| lattice::preimage(&h.matrix, &h.dst.rels);
    for n in 0..top {
        // at H^n(A): ker i* = im ∂_{n-1}
        let ker = ker_lattice(&i_star[n]);
        let im = if n == 0 {
            ha[0].pres.rels.clone()
        } else {
            match &del[n - 1] {
                Some(d) => im_lattice(d),
                None => ha[n].pres.rels.clone(),
            }
        };
        if !lattice::eq(&lattice::sum(&ker, &ha[n].pres.rels), &lattice::sum(&im, &ha[n].pres.rels)) {
            return Err(Error::Internal(format!("les: not exact at H^{n}(A)")));
        }
        // at H^n(B): ker p* = im i*
        let ker = ker_lattice(&p_star[n]);
        let im = im_lattice(&i_star[n]);
        if !lattice::eq(&lattice::sum(&ker, &hb[n].pres.rels), &im) {
            return Err(Error::Internal(format!("les: not exact at H^{n}(B)")));
        }
        // at H^n(C): ker ∂ = im p* (with ∂ = 0 at the top)
        let ker = match &del[n] {
            Some(d) => ker_lattice(d),
            None => IntMatrix::identity(hc[n].pres.gens),
        };
        let im = im_lattice(&p_star[n]);
        if !lattice::eq(&lattice::sum(&ker, &hc[n].pres.rels), &im) {
            return Err(Error::Internal(format!("les: not exact at H^{n}(C)")));
        }
    }
    Ok(())
}

/// Ordinary cellular cohomology with ℤ coefficients from chain boundary
/// matrices ∂_n : C_n → C_{n-1}. Kept free of the Bredon machinery so it can
/// serve as an independent oracle.
pub fn ordinary_cohomology_z(ranks: &[usize], boundaries: &[IntMatrix]) -> Vec<NormalForm> {
    assert_eq!(boundaries.len() + 1, ranks.len().max(1));
    let top = ranks.len();
    (0..top)
        .map(|n| {
            let z = if n + 1 < top {
                kernel(&boundaries[n].transpose())
            } else {
                IntMatrix::identity(ranks[n])
            };
            let b = if n == 0 {
                IntMatrix::zeros(ranks[0], 0)
            } else {
                boundaries[n - 1].transpose()
            };
            SubQuotient::new(ranks[n], &z, &b)
                .expect("coboundaries lie in cocycles for a chain complex")
                .pres
                .normal_form()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_of_presentations() {
        // coker [[2,0],[0,3]] = Z/6 after chain normalization
        let p = FgAbPresentation {
            gens: 2,
            rels: IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]),
        };
        let nf = p.normal_form();
        assert_eq!(nf.rank, 0);
        assert_eq!(nf.torsion, vec![BigInt::from(6)]);
        assert_eq!(nf.to_string(), "Z/6");

        assert_eq!(FgAbPresentation::free(2).normal_form(), NormalForm::free(2));
        assert!(FgAbPresentation::cyclic(1).normal_form().is_trivial());
    }

    #[test]
    fn cohomology_of_multiplication_by_two() {
        // 0 -> Z --2--> Z -> 0: H^0 = 0, H^1 = Z/2
        let c = Complex::new(
            vec![FgAbPresentation::free(1), FgAbPresentation::free(1)],
            vec![IntMatrix::from_rows_i64(&[vec![2]])],
        );
        c.validate().unwrap();
        assert!(c.cohomology_normal_form(0).is_trivial());
        let h1 = c.cohomology_normal_form(1);
        assert_eq!(h1.rank, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn cohomology_of_circle() {
        // S^1 with two 0-cells, two 1-cells: both H^0 and H^1 are Z.
        let d0 = IntMatrix::from_rows_i64(&[vec![1, -1], vec![1, -1]]);
        let c = Complex::new(
            vec![FgAbPresentation::free(2), FgAbPresentation::free(2)],
            vec![d0],
        );
        c.validate().unwrap();
        assert_eq!(c.cohomology_normal_form(0), NormalForm::free(1));
        assert_eq!(c.cohomology_normal_form(1), NormalForm::free(1));
    }

    #[test]
    fn point_complex() {
        let c = Complex::new(vec![FgAbPresentation::free(1)], vec![]);
        assert_eq!(c.cohomology_normal_form(0), NormalForm::free(1));
        assert!(c.cohomology_normal_form(1).is_trivial());
    }

    #[test]
    fn hom_over_group_ring_free_swap_cells() {
        // Z/2 swapping two 2-cells: one free orbit in degree 2.
        let chains = GroupRingComplex {
            dims: vec![0, 0, 1],
            boundary: vec![vec![], vec![], vec![vec![]]],
        };
        let module = GammaModule::trivial_action(FgAbPresentation::free(1), 2);
        let c = hom_over_group_ring(&chains, &module);
        assert!(c.cohomology_normal_form(0).is_trivial());
        assert!(c.cohomology_normal_form(1).is_trivial());
        assert_eq!(c.cohomology_normal_form(2), NormalForm::free(1));
    }

    #[test]
    fn ordinary_cohomology_of_sphere() {
        // minimal S^2: one 0-cell, one 2-cell
        let ranks = vec![1, 0, 1];
        let boundaries = vec![IntMatrix::zeros(1, 0), IntMatrix::zeros(0, 1)];
        let h = ordinary_cohomology_z(&ranks, &boundaries);
        assert_eq!(h[0], NormalForm::free(1));
        assert!(h[1].is_trivial());
        assert_eq!(h[2], NormalForm::free(1));
    }
}
