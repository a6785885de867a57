//! Window-restricted operator analysis: finite truncations of the basis,
//! exact matrices of multiplication operators, local-finiteness probes,
//! the generalized-eigenspace grading of L_e, bounded ideal closures, and
//! simplicity witnesses.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cocycles::coeff_box;
use crate::exactmath::{
    eigenvalues_in_field, generalized_eigenspace, ExactMatrix, Scalar,
};
use crate::novikov::{novikov_product, AlgebraSpec, Element, JKind, Label, ProductFn};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("operator leaves the window (overflow)")]
    Overflow,
    #[error("element is not idempotent in the required sense")]
    NotIdempotent,
    #[error("operation requires scalar ξ")]
    NonScalarXi,
    #[error("closure start must be nonzero")]
    ZeroStart,
}

/// A finite truncation of the basis: the window labels themselves plus a
/// padded superset used as closure margin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Window {
    labels: Vec<Label>,
    padded: Vec<Label>,
    index: BTreeMap<Label, usize>,
    padded_index: BTreeMap<Label, usize>,
    alpha_box: i64,
    j_max: u32,
    pad: i64,
}

impl Window {
    /// Window of all labels with |α-coefficients| ≤ alpha_box, j ≤ j_max;
    /// the padded window enlarges both bounds by `pad`.
    pub fn from_box(spec: &AlgebraSpec, alpha_box: i64, j_max: u32, pad: i64) -> Window {
        assert!(pad >= 0);
        let labels = spec.basis_labels(alpha_box, j_max);
        let padded_j = match spec.j_kind() {
            JKind::Zero => 0,
            JKind::Nat => j_max + pad as u32,
        };
        let mut padded = Vec::new();
        for alpha in coeff_box(spec.delta().rank(), alpha_box + pad) {
            for j in 0..=padded_j {
                padded.push(Label::new(alpha.clone(), j));
            }
        }
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let padded_index = padded.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Window { labels, padded, index, padded_index, alpha_box, j_max, pad }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn padded_labels(&self) -> &[Label] {
        &self.padded
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn alpha_box(&self) -> i64 {
        self.alpha_box
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn pad(&self) -> i64 {
        self.pad
    }

    pub fn position(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn padded_position(&self, l: &Label) -> Option<usize> {
        self.padded_index.get(l).copied()
    }

    /// Coordinates of an element over the window labels; None when some
    /// term lies outside the window.
    pub fn coords(&self, e: &Element) -> Option<Vec<Scalar>> {
        let mut out = vec![Scalar::zero(e.field()); self.labels.len()];
        for (l, c) in e.terms() {
            out[self.position(l)?] = c.clone();
        }
        Some(out)
    }

    /// Coordinates over the padded labels.
    pub fn padded_coords(&self, e: &Element) -> Option<Vec<Scalar>> {
        let mut out = vec![Scalar::zero(e.field()); self.padded.len()];
        for (l, c) in e.terms() {
            out[self.padded_position(l)?] = c.clone();
        }
        Some(out)
    }

    pub fn element_from_coords(&self, coords: &[Scalar], field: crate::exactmath::FieldConfig) -> Element {
        let mut e = Element::zero(field);
        for (i, c) in coords.iter().enumerate() {
            e.add_term(self.labels[i].clone(), c.clone());
        }
        e
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// A multiplication operator restricted to a window. Image terms that land
/// in the padded margin (`spill`) or beyond it (`overflow`) are recorded
/// per source label rather than silently dropped from the matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WindowOperator {
    pub matrix: ExactMatrix,
    pub spill: Vec<(Label, Label)>,
    pub overflow: Vec<(Label, Label)>,
}

impl WindowOperator {
    pub fn has_overflow(&self) -> bool {
        !self.overflow.is_empty()
    }

    /// True when the operator maps the window strictly into itself.
    pub fn stays_in_window(&self) -> bool {
        self.spill.is_empty() && self.overflow.is_empty()
    }
}

/// Matrix of an arbitrary linear action on the window basis.
pub fn op_matrix_with(
    action: &dyn Fn(&Element) -> Element,
    w: &Window,
    field: crate::exactmath::FieldConfig,
) -> WindowOperator {
    let n = w.size();
    let mut matrix = ExactMatrix::zeros(n, n, field);
    let mut spill = Vec::new();
    let mut overflow = Vec::new();
    for (col, l) in w.labels().iter().enumerate() {
        let image = action(&Element::basis(l.clone(), field));
        for (lab, c) in image.terms() {
            if let Some(row) = w.position(lab) {
                matrix.set(row, col, c.clone());
            } else if w.padded_position(lab).is_some() {
                spill.push((l.clone(), lab.clone()));
            } else {
                overflow.push((l.clone(), lab.clone()));
            }
        }
    }
    WindowOperator { matrix, spill, overflow }
}

/// Matrix of L_u (x ↦ u∘x) or R_u (x ↦ x∘u) on the window.
pub fn op_matrix(u: &Element, side: Side, w: &Window, spec: &AlgebraSpec) -> WindowOperator {
    let action = |x: &Element| match side {
        Side::Left => novikov_product(u, x, spec),
        Side::Right => novikov_product(x, u, spec),
    };
    op_matrix_with(&action, w, spec.field())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Finiteness {
    Finite(usize),
    Escaped,
    Inconclusive,
}

/// Sparse incremental span of elements, reduced by leading label.
pub(crate) struct ElementSpan {
    rows: Vec<Element>,
}

impl ElementSpan {
    pub(crate) fn new() -> ElementSpan {
        ElementSpan { rows: Vec::new() }
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn reduce(&self, e: &Element) -> Element {
        let mut r = e.clone();
        for row in &self.rows {
            let lead = row.terms().next().expect("rows are nonzero").0;
            let c = r.coeff(lead);
            if !c.is_zero() {
                let pivot = row.coeff(lead);
                r = r.sub(&row.scale(&(c * pivot.inv().expect("pivot nonzero"))));
            }
        }
        r
    }

    /// Adds e to the span; returns false when e was already a member.
    pub(crate) fn add(&mut self, e: &Element) -> bool {
        let r = self.reduce(e);
        if r.is_zero() {
            return false;
        }
        self.rows.push(r);
        self.rows.sort_by(|a, b| {
            a.terms().next().unwrap().0.cmp(b.terms().next().unwrap().0)
        });
        // re-reduce so each row's leading label is cleared from the others
        let rows = std::mem::take(&mut self.rows);
        for row in rows {
            let r = self.reduce(&row);
            if !r.is_zero() {
                self.rows.push(r);
            }
        }
        self.rows.sort_by(|a, b| {
            a.terms().next().unwrap().0.cmp(b.terms().next().unwrap().0)
        });
        true
    }

    pub(crate) fn contains(&self, e: &Element) -> bool {
        self.reduce(e).is_zero()
    }
}

/// Iterates v, L_u(v), L_u²(v), … up to `cutoff` and reports whether the
/// span stabilizes, the support escapes in the Δ-direction, or neither.
pub fn locally_finite_probe(
    u: &Element,
    v: &Element,
    spec: &AlgebraSpec,
    cutoff: usize,
) -> Finiteness {
    assert!(cutoff >= 1);
    if v.is_zero() {
        return Finiteness::Finite(0);
    }
    let alpha_norm = |e: &Element| {
        e.terms()
            .map(|(l, _)| l.alpha.0.iter().map(|c| c.abs()).sum::<i64>())
            .max()
            .unwrap_or(0)
    };
    let mut span = ElementSpan::new();
    span.add(v);
    let mut current = v.clone();
    let mut monotone = true;
    let mut last_norm = alpha_norm(v);
    for _ in 0..cutoff {
        current = novikov_product(u, &current, spec);
        if !span.add(&current) {
            return Finiteness::Finite(span.dim());
        }
        let norm = alpha_norm(&current);
        monotone &= norm > last_norm;
        last_norm = norm;
    }
    if monotone {
        Finiteness::Escaped
    } else {
        Finiteness::Inconclusive
    }
}

/// The generalized-eigenspace decomposition of L_e on a window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedDecomposition {
    /// (eigenvalue of L_e, basis of the generalized eigenspace in window
    /// coordinates); the support value α is eigenvalue − b.
    pub spaces: Vec<(Scalar, Vec<Vec<Scalar>>)>,
    pub b: Scalar,
    /// True when the eigenvalue search split the characteristic polynomial
    /// completely over the field.
    pub complete: bool,
}

impl GradedDecomposition {
    /// Δ_spec: the support values α with nonzero generalized eigenspace.
    pub fn support(&self) -> Vec<Scalar> {
        self.spaces.iter().map(|(ev, _)| ev.clone() - self.b.clone()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(|(_, basis)| basis.len()).sum()
    }

    pub fn basis_for_eigenvalue(&self, ev: &Scalar) -> Option<&[Vec<Scalar>]> {
        self.spaces.iter().find(|(e, _)| e == ev).map(|(_, b)| b.as_slice())
    }
}

/// Generalized eigenspaces of L_e at its in-field eigenvalues; requires
/// e∘e = b·e and L_e stable on the window.
pub fn grade(
    spec: &AlgebraSpec,
    e: &Element,
    b: &Scalar,
    w: &Window,
) -> Result<GradedDecomposition, SpectralError> {
    if novikov_product(e, e, spec) != e.scale(b) {
        return Err(SpectralError::NotIdempotent);
    }
    let op = op_matrix(e, Side::Left, w, spec);
    if !op.stays_in_window() {
        return Err(SpectralError::Overflow);
    }
    if w.size() == 0 {
        return Ok(GradedDecomposition { spaces: Vec::new(), b: b.clone(), complete: true });
    }
    let eig = eigenvalues_in_field(&op.matrix);
    let mut spaces = Vec::new();
    for ev in &eig.eigenvalues {
        let basis = generalized_eigenspace(&op.matrix, ev);
        if !basis.is_empty() {
            spaces.push((ev.clone(), basis));
        }
    }
    Ok(GradedDecomposition { spaces, b: b.clone(), complete: eig.complete })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradingLawReport {
    pub checked: usize,
    pub skipped_out_of_window: usize,
    pub violations: Vec<(Scalar, Scalar)>,
}

impl GradingLawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the grading laws on products of generalized-eigenspace basis
/// vectors: N′_α ∘ N′_β ⊆ N′_{α+β} (valid when R_e = b·Id on N′_α, which
/// holds for scalar ξ), with the weaker target N′_{β−b} + N′_{β−2b} for
/// the slot α = −b. Products leaving the window are counted and skipped.
pub fn check_grading_laws(
    g: &GradedDecomposition,
    spec: &AlgebraSpec,
    w: &Window,
) -> Result<GradingLawReport, SpectralError> {
    let b = spec.xi_scalar().map_err(|_| SpectralError::NonScalarXi)?;
    let field = spec.field();
    let mut report = GradingLawReport {
        checked: 0,
        skipped_out_of_window: 0,
        violations: Vec::new(),
    };
    for (ev1, basis1) in &g.spaces {
        let alpha = ev1.clone() - b.clone();
        let alpha_is_minus_b = alpha == -b.clone();
        for (ev2, basis2) in &g.spaces {
            // allowed targets expressed as L_e eigenvalues
            let mut targets = vec![ev1.clone() + ev2.clone() - b.clone()];
            if alpha_is_minus_b {
                targets.push(ev1.clone() + ev2.clone() - b.clone() - b.clone());
            }
            let mut allowed = ElementSpan::new();
            for t in &targets {
                if let Some(basis) = g.basis_for_eigenvalue(t) {
                    for vec in basis {
                        allowed.add(&w.element_from_coords(vec, field));
                    }
                }
            }
            for x in basis1 {
                let xe = w.element_from_coords(x, field);
                for y in basis2 {
                    let ye = w.element_from_coords(y, field);
                    let prod = novikov_product(&xe, &ye, spec);
                    if prod.is_zero() {
                        report.checked += 1;
                        continue;
                    }
                    if w.coords(&prod).is_none() {
                        report.skipped_out_of_window += 1;
                        continue;
                    }
                    report.checked += 1;
                    if !allowed.contains(&prod) {
                        report.violations.push((ev1.clone(), ev2.clone()));
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealCheckReport {
    pub checked: usize,
    pub skipped_out_of_window: usize,
    pub violations: usize,
}

/// The window restriction of the generalized eigenspace of R_u at λ,
/// together with a window-local check that it is an ideal.
pub fn zelmanov_subspace(
    u: &Element,
    lambda: &Scalar,
    spec: &AlgebraSpec,
    w: &Window,
) -> Result<(Vec<Vec<Scalar>>, IdealCheckReport), SpectralError> {
    let op = op_matrix(u, Side::Right, w, spec);
    if op.has_overflow() || !op.spill.is_empty() {
        return Err(SpectralError::Overflow);
    }
    let basis = generalized_eigenspace(&op.matrix, lambda);
    let field = spec.field();
    let mut span = ElementSpan::new();
    for v in &basis {
        span.add(&w.element_from_coords(v, field));
    }
    let mut report = IdealCheckReport { checked: 0, skipped_out_of_window: 0, violations: 0 };
    for v in &basis {
        let ve = w.element_from_coords(v, field);
        for l in w.labels() {
            let z = Element::basis(l.clone(), field);
            for prod in [novikov_product(&ve, &z, spec), novikov_product(&z, &ve, spec)] {
                if prod.is_zero() {
                    report.checked += 1;
                } else if w.coords(&prod).is_none() {
                    report.skipped_out_of_window += 1;
                } else {
                    report.checked += 1;
                    if !span.contains(&prod) {
                        report.violations += 1;
                    }
                }
            }
        }
    }
    Ok((basis, report))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosureReport {
    pub dim: usize,
    /// Window basis labels contained in the closure span.
    pub reached: Vec<Label>,
    /// Products dropped because some term escaped the padded window.
    pub dropped_products: usize,
}

impl ClosureReport {
    pub fn covers(&self, w: &Window) -> bool {
        self.reached.len() == w.size()
    }
}

/// Two-sided bounded ideal closure of `start`: repeatedly multiplies span
/// vectors by window basis elements on both sides, keeping only products
/// that stay entirely inside the padded window, until the span stabilizes.
pub fn ideal_closure_with(
    product: &ProductFn,
    start: &Element,
    spec: &AlgebraSpec,
    w: &Window,
) -> Result<ClosureReport, SpectralError> {
    if start.is_zero() {
        return Err(SpectralError::ZeroStart);
    }
    let field = spec.field();
    let mut span = ElementSpan::new();
    let mut frontier = vec![start.clone()];
    span.add(start);
    let mut dropped = 0usize;
    while let Some(x) = frontier.pop() {
        for l in w.labels() {
            let z = Element::basis(l.clone(), field);
            for prod in [product(&x, &z, spec), product(&z, &x, spec)] {
                if prod.is_zero() {
                    continue;
                }
                if w.padded_coords(&prod).is_none() {
                    dropped += 1;
                    continue;
                }
                if span.add(&prod) {
                    frontier.push(prod);
                }
            }
        }
    }
    let reached = w
        .labels()
        .iter()
        .filter(|l| span.contains(&Element::basis((*l).clone(), field)))
        .cloned()
        .collect();
    Ok(ClosureReport { dim: span.dim(), reached, dropped_products: dropped })
}

pub fn ideal_closure(
    start: &Element,
    spec: &AlgebraSpec,
    w: &Window,
) -> Result<ClosureReport, SpectralError> {
    ideal_closure_with(&novikov_product, start, spec, w)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicityReport {
    pub per_sample: Vec<ClosureReport>,
    pub products_nonzero: bool,
}

impl SimplicityReport {
    /// Every sample's closure reached every window label, and the product
    /// is not identically zero on the window.
    pub fn full_coverage(&self, w: &Window) -> bool {
        self.products_nonzero && self.per_sample.iter().all(|r| r.covers(w))
    }
}

/// Desk-scale simplicity witness: ideal closures from each sample must
/// cover the whole window. Evidence at this window and pad, never a proof.
pub fn simplicity_witness_with(
    product: &ProductFn,
    spec: &AlgebraSpec,
    w: &Window,
    samples: &[Element],
) -> Result<SimplicityReport, SpectralError> {
    let per_sample = samples
        .iter()
        .map(|s| ideal_closure_with(product, s, spec, w))
        .collect::<Result<Vec<_>, _>>()?;
    let field = spec.field();
    let mut products_nonzero = false;
    'outer: for l1 in w.labels() {
        for l2 in w.labels() {
            let p = product(
                &Element::basis(l1.clone(), field),
                &Element::basis(l2.clone(), field),
                spec,
            );
            if !p.is_zero() {
                products_nonzero = true;
                break 'outer;
            }
        }
    }
    Ok(SimplicityReport { per_sample, products_nonzero })
}

pub fn simplicity_witness(
    spec: &AlgebraSpec,
    w: &Window,
    samples: &[Element],
) -> Result<SimplicityReport, SpectralError> {
    simplicity_witness_with(&novikov_product, spec, w, samples)
}

/// Kernel of R_v on the window.
pub fn right_annihilator(v: &Element, spec: &AlgebraSpec, w: &Window) -> Vec<Vec<Scalar>> {
    op_matrix(v, Side::Right, w, spec).matrix.kernel()
}

/// Checks (R − λ)²·R = 0 for the window matrix R of the right action of an
/// element e with e∘e = λ·e.
pub fn lemma32_check(
    e: &Element,
    lambda: &Scalar,
    r_matrix: &ExactMatrix,
    spec: &AlgebraSpec,
) -> Result<bool, SpectralError> {
    if novikov_product(e, e, spec) != e.scale(lambda) {
        return Err(SpectralError::NotIdempotent);
    }
    let n = r_matrix.rows();
    let shifted = r_matrix.sub(&ExactMatrix::identity(n, spec.field()).scale(lambda));
    Ok(shifted.mul(&shifted).mul(r_matrix).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::Cocycle;
    use crate::exactmath::FieldConfig;
    use crate::groups::{GroupElement, GroupSpec};
    use crate::novikov::Xi;

    fn q() -> FieldConfig {
        FieldConfig::Rational
    }

    fn int(n: i64) -> Scalar {
        Scalar::from_int(n, q())
    }

    fn spec_z(j_kind: JKind, b: i64) -> AlgebraSpec {
        AlgebraSpec::new(
            GroupSpec::integers(q()),
            Cocycle::trivial(1, q()),
            j_kind,
            Xi::Scalar(int(b)),
        )
        .unwrap()
    }

    fn u(alpha: i64, j: u32) -> Element {
        Element::basis(Label::new(GroupElement(vec![alpha]), j), q())
    }

    #[test]
    fn op_matrix_identity_action() {
        // R_{u_{0,0}} = b·Id with scalar ξ = b
        let s = spec_z(JKind::Nat, 3);
        let w = Window::from_box(&s, 2, 2, 1);
        let op = op_matrix(&s.idempotent(), Side::Right, &w, &s);
        assert!(op.stays_in_window());
        assert_eq!(op.matrix, ExactMatrix::identity(w.size(), q()).scale(&int(3)));
    }

    #[test]
    fn op_matrix_le_diagonal() {
        // L_e on the window has diagonal α + b and lowers j
        let s = spec_z(JKind::Nat, 1);
        let w = Window::from_box(&s, 1, 1, 0);
        let op = op_matrix(&s.idempotent(), Side::Left, &w, &s);
        assert!(op.stays_in_window());
        for (i, l) in w.labels().iter().enumerate() {
            assert_eq!(op.matrix.get(i, i), &int(l.alpha.0[0] + 1));
        }
    }

    #[test]
    fn op_matrix_shift_overflows() {
        let s = spec_z(JKind::Zero, 1);
        let w = Window::from_box(&s, 1, 0, 0);
        let op = op_matrix(&u(1, 0), Side::Left, &w, &s);
        assert!(op.has_overflow());
    }

    #[test]
    fn local_finiteness() {
        let s = spec_z(JKind::Nat, 1);
        // L_e lowers j and fixes α: finite of dimension 3 from u_{α,2}
        assert_eq!(
            locally_finite_probe(&s.idempotent(), &u(5, 2), &s, 10),
            Finiteness::Finite(3)
        );
        assert_eq!(
            locally_finite_probe(&s.idempotent(), &Element::zero(q()), &s, 5),
            Finiteness::Finite(0)
        );
        assert_eq!(
            locally_finite_probe(&u(1, 0), &u(0, 0), &s, 8),
            Finiteness::Escaped
        );
    }

    #[test]
    fn grading_decomposition() {
        let s = spec_z(JKind::Nat, 1);
        let w = Window::from_box(&s, 1, 1, 0);
        let g = grade(&s, &s.idempotent(), &int(1), &w).unwrap();
        assert!(g.complete);
        assert_eq!(g.total_dim(), w.size());
        // eigenvalues α + 1 for α ∈ {−1,0,1}, each of dimension 2
        let mut evs = g.spaces.iter().map(|(e, b)| (e.clone(), b.len())).collect::<Vec<_>>();
        evs.sort();
        assert_eq!(evs, vec![(int(0), 2), (int(1), 2), (int(2), 2)]);
        let report = check_grading_laws(&g, &s, &w).unwrap();
        assert!(report.passed());
        assert!(report.checked > 0);

        // J = {0}: true eigenspaces of dimension 1
        let s0 = spec_z(JKind::Zero, 1);
        let w0 = Window::from_box(&s0, 2, 0, 0);
        let g0 = grade(&s0, &s0.idempotent(), &int(1), &w0).unwrap();
        assert!(g0.spaces.iter().all(|(_, b)| b.len() == 1));
        assert_eq!(g0.total_dim(), 5);
    }

    #[test]
    fn grade_rejects_bad_idempotent() {
        let s = spec_z(JKind::Nat, 1);
        let w = Window::from_box(&s, 1, 1, 0);
        assert_eq!(
            grade(&s, &s.idempotent(), &int(2), &w).unwrap_err(),
            SpectralError::NotIdempotent
        );
    }

    #[test]
    fn zelmanov_examples() {
        let s = spec_z(JKind::Nat, 2);
        let w = Window::from_box(&s, 1, 1, 0);
        // R_e = b·Id: the λ = b subspace is the whole window
        let (basis, report) = zelmanov_subspace(&s.idempotent(), &int(2), &s, &w).unwrap();
        assert_eq!(basis.len(), w.size());
        assert_eq!(report.violations, 0);
        // λ ≠ b: empty
        let (basis, _) = zelmanov_subspace(&s.idempotent(), &int(5), &s, &w).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn ideal_closure_reaches_everything() {
        // b = 0, J = {0}: u_{1,0}∘u_{−1,0} = −u_{0,0}
        let s = spec_z(JKind::Zero, 0);
        let w = Window::from_box(&s, 1, 0, 1);
        let r = ideal_closure(&u(1, 0), &s, &w).unwrap();
        assert!(r.reached.contains(&Label::new(GroupElement(vec![0]), 0)));
        assert!(r.covers(&w));

        let s = spec_z(JKind::Nat, 1);
        let w = Window::from_box(&s, 1, 1, 2);
        let r = ideal_closure(&s.idempotent(), &s, &w).unwrap();
        assert!(r.covers(&w));

        assert_eq!(
            ideal_closure(&Element::zero(q()), &s, &w).unwrap_err(),
            SpectralError::ZeroStart
        );
    }

    #[test]
    fn closure_monotone_in_pad() {
        let s = spec_z(JKind::Nat, 1);
        let small = Window::from_box(&s, 1, 1, 0);
        let big = Window::from_box(&s, 1, 1, 2);
        let r_small = ideal_closure(&u(1, 1), &s, &small).unwrap();
        let r_big = ideal_closure(&u(1, 1), &s, &big).unwrap();
        for l in &r_small.reached {
            assert!(r_big.reached.contains(l));
        }
    }

    #[test]
    fn simplicity_witness_and_self_test() {
        let s = spec_z(JKind::Zero, 0);
        let w = Window::from_box(&s, 1, 0, 2);
        let samples: Vec<Element> =
            w.labels().iter().map(|l| Element::basis(l.clone(), q())).collect();
        let rep = simplicity_witness(&s, &w, &samples).unwrap();
        assert!(rep.full_coverage(&w));

        // direct-sum self-test: kill products mixing even and odd α
        let zeroed = |a: &Element, b: &Element, spec: &AlgebraSpec| {
            let full = novikov_product(a, b, spec);
            let parity = |e: &Element| {
                e.terms().map(|(l, _)| l.alpha.0[0].rem_euclid(2)).next()
            };
            match (parity(a), parity(b)) {
                (Some(pa), Some(pb)) if pa != pb => Element::zero(spec.field()),
                _ => full,
            }
        };
        let rep = simplicity_witness_with(&zeroed, &s, &w, &samples).unwrap();
        assert!(!rep.full_coverage(&w));
    }

    #[test]
    fn annihilator_examples() {
        let s = spec_z(JKind::Nat, 2);
        let w = Window::from_box(&s, 1, 1, 0);
        assert!(right_annihilator(&s.idempotent(), &s, &w).is_empty());

        let s0 = spec_z(JKind::Nat, 0);
        // b = 0: R_e = 0, annihilator is the whole window
        assert_eq!(right_annihilator(&s0.idempotent(), &s0, &w).len(), w.size());
        // b = 0: R_{u_{0,1}} = Id, empty annihilator
        assert!(right_annihilator(&u(0, 1), &s0, &w).is_empty());
    }

    #[test]
    fn lemma32_on_regular_action() {
        for b in [0i64, 1, -2] {
            let s = spec_z(JKind::Nat, b);
            let w = Window::from_box(&s, 1, 1, 0);
            let r = op_matrix(&s.idempotent(), Side::Right, &w, &s);
            assert!(r.stays_in_window());
            assert!(lemma32_check(&s.idempotent(), &int(b), &r.matrix, &s).unwrap());
            if b != 0 {
                assert!(!lemma32_check(&s.idempotent(), &int(b), &r.matrix.add(&ExactMatrix::identity(w.size(), q())), &s).unwrap());
            }
        }
    }
}
