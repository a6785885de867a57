//! The commutative associative algebra on basis u_{α,j} (α in an embedded
//! free abelian group, j ∈ {0} or ℕ) twisted by a symmetric cocycle, its
//! derivation ∂, the Novikov product u∘v = u·∂(v) + ξ·u·v, and brute-force
//! axiom / operator-identity checkers over bounded index boxes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::cocycles::{coeff_box, cocycle_eval, is_symmetric, Cocycle};
use crate::exactmath::{FieldConfig, Scalar};
use crate::groups::{GroupElement, GroupSpec};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("cocycle must be symmetric and bimultiplicative")]
    BadCocycle,
    #[error("group, cocycle, and scalar specs must agree")]
    SpecMismatch,
    #[error("J = {{0}} requires a nontrivial group")]
    DegenerateIndex,
    #[error("operation requires scalar ξ")]
    NonScalarXi,
}

/// The second basis index set J: either {0} or all of ℕ.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JKind {
    Zero,
    Nat,
}

/// A basis label u_{α,j}; for shifted modules α is the coordinate part and
/// the shift is carried by the module spec.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label {
    pub alpha: GroupElement,
    pub j: u32,
}

impl Label {
    pub fn new(alpha: GroupElement, j: u32) -> Label {
        Label { alpha, j }
    }
}

/// A finite linear combination of basis labels; zero coefficients are never
/// stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    field: FieldConfig,
    terms: BTreeMap<Label, Scalar>,
}

impl Element {
    pub fn zero(field: FieldConfig) -> Element {
        Element { field, terms: BTreeMap::new() }
    }

    pub fn basis(label: Label, field: FieldConfig) -> Element {
        Element::term(label, Scalar::one(field))
    }

    pub fn term(label: Label, coeff: Scalar) -> Element {
        let mut terms = BTreeMap::new();
        let field = coeff.field();
        if !coeff.is_zero() {
            terms.insert(label, coeff);
        }
        Element { field, terms }
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Label, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, label: &Label) -> Scalar {
        self.terms.get(label).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn add_term(&mut self, label: Label, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(label) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(l.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(self.field);
        }
        Element {
            field: self.field,
            terms: self.terms.iter().map(|(l, v)| (l.clone(), v.clone() * c)).collect(),
        }
    }
}

/// ξ in the Novikov product: a field scalar b or a general algebra element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Xi {
    Scalar(Scalar),
    Element(Element),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraSpec {
    field: FieldConfig,
    delta: GroupSpec,
    cocycle: Cocycle,
    j_kind: JKind,
    xi: Xi,
}

impl AlgebraSpec {
    pub fn new(
        delta: GroupSpec,
        cocycle: Cocycle,
        j_kind: JKind,
        xi: Xi,
    ) -> Result<AlgebraSpec, AlgebraError> {
        let field = delta.field();
        if cocycle.rank() != delta.rank() || cocycle.field() != field {
            return Err(AlgebraError::SpecMismatch);
        }
        if !matches!(cocycle, Cocycle::Bimultiplicative { .. }) || !is_symmetric(&cocycle, 0) {
            return Err(AlgebraError::BadCocycle);
        }
        match &xi {
            Xi::Scalar(b) if b.field() != field => return Err(AlgebraError::SpecMismatch),
            Xi::Element(u) if u.field() != field => return Err(AlgebraError::SpecMismatch),
            _ => {}
        }
        if j_kind == JKind::Zero && delta.rank() == 0 {
            return Err(AlgebraError::DegenerateIndex);
        }
        Ok(AlgebraSpec { field, delta, cocycle, j_kind, xi })
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn delta(&self) -> &GroupSpec {
        &self.delta
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn j_kind(&self) -> JKind {
        self.j_kind
    }

    pub fn xi(&self) -> &Xi {
        &self.xi
    }

    /// The scalar b when ξ = b.
    pub fn xi_scalar(&self) -> Result<Scalar, AlgebraError> {
        match &self.xi {
            Xi::Scalar(b) => Ok(b.clone()),
            Xi::Element(_) => Err(AlgebraError::NonScalarXi),
        }
    }

    /// The distinguished element e = u_{0,0}.
    pub fn idempotent(&self) -> Element {
        Element::basis(Label::new(GroupElement::zero(self.delta.rank()), 0), self.field)
    }

    /// All basis labels with α-coefficients in [-alpha_box, alpha_box] and
    /// j ≤ j_max (j = 0 only when J = {0}).
    pub fn basis_labels(&self, alpha_box: i64, j_max: u32) -> Vec<Label> {
        let j_top = match self.j_kind {
            JKind::Zero => 0,
            JKind::Nat => j_max,
        };
        let mut out = Vec::new();
        for alpha in coeff_box(self.delta.rank(), alpha_box) {
            for j in 0..=j_top {
                out.push(Label::new(alpha.clone(), j));
            }
        }
        out
    }
}

/// The twisted commutative product: u_{α1,j1}·u_{α2,j2} =
/// f(α1,α2)·u_{α1+α2, j1+j2}, extended bilinearly.
pub fn assoc_product(u: &Element, v: &Element, spec: &AlgebraSpec) -> Element {
    let mut out = Element::zero(spec.field);
    for (l1, c1) in &u.terms {
        for (l2, c2) in &v.terms {
            let f = cocycle_eval(&spec.cocycle, &l1.alpha, &l2.alpha)
                .expect("bimultiplicative cocycles evaluate everywhere");
            out.add_term(
                Label::new(l1.alpha.add(&l2.alpha), l1.j + l2.j),
                c1.clone() * c2 * f,
            );
        }
    }
    out
}

/// ∂(u_{α,j}) = embed(α)·u_{α,j} + j·u_{α,j−1}, extended linearly.
pub fn derivation(v: &Element, spec: &AlgebraSpec) -> Element {
    let mut out = Element::zero(spec.field);
    for (l, c) in &v.terms {
        let a = spec.delta.embed(&l.alpha).expect("label rank matches spec");
        out.add_term(l.clone(), c.clone() * a);
        if l.j > 0 {
            out.add_term(
                Label::new(l.alpha.clone(), l.j - 1),
                c.clone() * Scalar::from_int(i64::from(l.j), spec.field),
            );
        }
    }
    out
}

/// u∘v = u·∂(v) + ξ·u·v.
pub fn novikov_product(u: &Element, v: &Element, spec: &AlgebraSpec) -> Element {
    let main = assoc_product(u, &derivation(v, spec), spec);
    let uv = assoc_product(u, v, spec);
    let twist = match &spec.xi {
        Xi::Scalar(b) => uv.scale(b),
        Xi::Element(x) => assoc_product(x, &uv, spec),
    };
    main.add(&twist)
}

/// [u,v]⁻ = u∘v − v∘u.
pub fn commutator(u: &Element, v: &Element, spec: &AlgebraSpec) -> Element {
    novikov_product(u, v, spec).sub(&novikov_product(v, u, spec))
}

pub type ProductFn = dyn Fn(&Element, &Element, &AlgebraSpec) -> Element + Sync;

/// A failing triple together with which identity broke.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub labels: Vec<Label>,
    pub identity: &'static str,
}

/// Precomputed products over a label box, exploiting bilinearity: basis
/// pairs are multiplied once, and nested products are assembled from table
/// lookups. Sound only for bilinear products, which every candidate here is.
struct PairTable<'a> {
    spec: &'a AlgebraSpec,
    labels: Vec<Label>,
    ext_idx: HashMap<Label, usize>,
    /// ext × box products.
    left: Vec<Vec<Element>>,
    /// box × ext products.
    right: Vec<Vec<Element>>,
}

impl<'a> PairTable<'a> {
    fn new(product: &ProductFn, spec: &'a AlgebraSpec, labels: Vec<Label>) -> PairTable<'a> {
        let n = labels.len();
        let basis: Vec<Element> =
            labels.iter().map(|l| Element::basis(l.clone(), spec.field)).collect();
        // every label reachable from one box-pair product, plus the box itself
        let mut ext_set: BTreeSet<Label> = labels.iter().cloned().collect();
        for u in &basis {
            for v in &basis {
                ext_set.extend(product(u, v, spec).terms.into_keys());
            }
        }
        let ext: Vec<Label> = ext_set.into_iter().collect();
        let ext_idx: HashMap<Label, usize> =
            ext.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let left: Vec<Vec<Element>> = ext
            .par_iter()
            .map(|l| {
                let e = Element::basis(l.clone(), spec.field);
                (0..n).map(|b| product(&e, &basis[b], spec)).collect()
            })
            .collect();
        let right: Vec<Vec<Element>> = basis
            .par_iter()
            .map(|u| ext.iter().map(|l| product(u, &Element::basis(l.clone(), spec.field), spec)).collect())
            .collect();
        PairTable { spec, labels, ext_idx, left, right }
    }

    /// x ∘ (box basis b) for x expanded over ext labels.
    fn app_left(&self, x: &Element, b: usize) -> Element {
        let mut out = Element::zero(self.spec.field);
        for (l, c) in &x.terms {
            for (l2, c2) in &self.left[self.ext_idx[l]][b].terms {
                out.add_term(l2.clone(), c.clone() * c2);
            }
        }
        out
    }

    /// (box basis b) ∘ x for x expanded over ext labels.
    fn app_right(&self, b: usize, x: &Element) -> Element {
        let mut out = Element::zero(self.spec.field);
        for (l, c) in &x.terms {
            for (l2, c2) in &self.right[b][self.ext_idx[l]].terms {
                out.add_term(l2.clone(), c.clone() * c2);
            }
        }
        out
    }

    fn pair(&self, i: usize, j: usize) -> &Element {
        &self.right[i][self.ext_idx[&self.labels[j]]]
    }
}

/// Verifies right-commutativity (u∘v)∘w = (u∘w)∘v and left-symmetry
/// (u∘v)∘w − u∘(v∘w) = (v∘u)∘w − v∘(u∘w) on every basis triple in the box.
/// The product is a parameter so a deliberately broken product can be used
/// to confirm the checker detects violations; it must be bilinear.
pub fn check_novikov_axioms_with(
    product: &ProductFn,
    spec: &AlgebraSpec,
    alpha_box: i64,
    j_max: u32,
) -> Option<Counterexample> {
    let labels = spec.basis_labels(alpha_box, j_max);
    let n = labels.len();
    let t = PairTable::new(product, spec, labels);
    (0..n * n * n).into_par_iter().find_map_first(|idx| {
        let (i, rest) = (idx / (n * n), idx % (n * n));
        let (j, k) = (rest / n, rest % n);
        let uv = t.pair(i, j);
        let uw = t.pair(i, k);
        let lhs = t.app_left(uv, k);
        if lhs != t.app_left(uw, j) {
            return Some(Counterexample {
                labels: vec![t.labels[i].clone(), t.labels[j].clone(), t.labels[k].clone()],
                identity: "right-commutativity",
            });
        }
        let vu = t.pair(j, i);
        let assoc_l = lhs.sub(&t.app_right(i, t.pair(j, k)));
        let assoc_r = t.app_left(vu, k).sub(&t.app_right(j, uw));
        if assoc_l != assoc_r {
            return Some(Counterexample {
                labels: vec![t.labels[i].clone(), t.labels[j].clone(), t.labels[k].clone()],
                identity: "left-symmetry",
            });
        }
        None
    })
}

pub fn check_novikov_axioms(
    spec: &AlgebraSpec,
    alpha_box: i64,
    j_max: u32,
) -> Option<Counterexample> {
    check_novikov_axioms_with(&novikov_product, spec, alpha_box, j_max)
}

/// Verifies, on basis pairs (u,v) and basis test vectors w in the box:
/// R_uR_v = R_vR_u, L_{u∘v} = R_vL_u, L_{[u,v]⁻} = [L_u, L_v],
/// [L_u, R_v] = R_{u∘v} − R_vR_u, and the Jacobi identity of [·,·]⁻.
pub fn check_operator_identities(
    spec: &AlgebraSpec,
    alpha_box: i64,
    j_max: u32,
) -> Option<Counterexample> {
    let labels = spec.basis_labels(alpha_box, j_max);
    let n = labels.len();
    let t = PairTable::new(&novikov_product, spec, labels);
    (0..n * n * n).into_par_iter().find_map_first(|idx| {
        let (i, rest) = (idx / (n * n), idx % (n * n));
        let (j, k) = (rest / n, rest % n);
        let fail = |identity: &'static str| Counterexample {
            labels: vec![t.labels[i].clone(), t.labels[j].clone(), t.labels[k].clone()],
            identity,
        };
        // w plays the test-vector slot: operators act on index k
        if t.app_left(t.pair(k, j), i) != t.app_left(t.pair(k, i), j) {
            return Some(fail("R_u R_v = R_v R_u"));
        }
        if t.app_left(t.pair(i, j), k) != t.app_left(t.pair(i, k), j) {
            return Some(fail("L_{u∘v} = R_v L_u"));
        }
        let br = t.pair(i, j).sub(t.pair(j, i));
        let lhs = t.app_left(&br, k);
        let rhs = t.app_right(i, t.pair(j, k)).sub(&t.app_right(j, t.pair(i, k)));
        if lhs != rhs {
            return Some(fail("L_{[u,v]} = [L_u, L_v]"));
        }
        let lhs = t.app_right(i, t.pair(k, j)).sub(&t.app_left(t.pair(i, k), j));
        let rhs = t.app_right(k, t.pair(i, j)).sub(&t.app_left(t.pair(k, i), j));
        if lhs != rhs {
            return Some(fail("[L_u, R_v] = R_{u∘v} − R_v R_u"));
        }
        let comm = |a: usize, b: usize| t.pair(a, b).sub(t.pair(b, a));
        let outer = |x: &Element, c: usize| t.app_left(x, c).sub(&t.app_right(c, x));
        let jac = outer(&comm(i, j), k)
            .add(&outer(&comm(j, k), i))
            .add(&outer(&comm(k, i), j));
        if !jac.is_zero() {
            return Some(fail("Jacobi identity of [·,·]⁻"));
        }
        None
    })
}
