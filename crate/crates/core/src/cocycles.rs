//! Two-cocycles on free abelian groups with values in the multiplicative
//! group of the field: coboundaries, symmetry, normalization, the
//! closed-form trivialization of symmetric cocycles, the automorphism
//! action, and a bounded orbit comparison.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exactmath::{FieldConfig, Scalar};
use crate::groups::{AutMatrix, GroupElement};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error("pair ({0:?}, {1:?}) outside the table box")]
    OutOfBox(GroupElement, GroupElement),
    #[error("eta undefined at {0:?}")]
    EtaUndefined(GroupElement),
    #[error("incompatible cocycle variants")]
    VariantMismatch,
    #[error("cocycle is not symmetric")]
    NotSymmetric,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cocycle values must be nonzero")]
    ZeroValue,
}

/// All elements of ℤ^r with coefficients in [-bound, bound].
pub fn coeff_box(rank: usize, bound: i64) -> Vec<GroupElement> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for v in &out {
            for c in -bound..=bound {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out.into_iter().map(GroupElement).collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Cocycle {
    /// f(Σa_kγ_k, Σb_lγ_l) = Π c_{kl}^{a_k b_l}; finite data for the whole
    /// group, and the cocycle identity holds automatically.
    Bimultiplicative { field: FieldConfig, matrix: Vec<Vec<Scalar>> },
    /// Finite table on the coefficient box [-bound, bound]^r.
    Table {
        rank: usize,
        field: FieldConfig,
        bound: i64,
        entries: BTreeMap<(GroupElement, GroupElement), Scalar>,
    },
}

impl Cocycle {
    pub fn bimultiplicative(matrix: Vec<Vec<Scalar>>, field: FieldConfig) -> Result<Cocycle, CocycleError> {
        let rank = matrix.len();
        for row in &matrix {
            if row.len() != rank {
                return Err(CocycleError::RankMismatch(rank, row.len()));
            }
            if row.iter().any(Scalar::is_zero) {
                return Err(CocycleError::ZeroValue);
            }
        }
        Ok(Cocycle::Bimultiplicative { field, matrix })
    }

    /// All values 1.
    pub fn trivial(rank: usize, field: FieldConfig) -> Cocycle {
        let matrix = vec![vec![Scalar::one(field); rank]; rank];
        Cocycle::Bimultiplicative { field, matrix }
    }

    /// Rank-1 cocycle f(m,n) = c^{mn}.
    pub fn rank1(c: Scalar) -> Result<Cocycle, CocycleError> {
        let field = c.field();
        Cocycle::bimultiplicative(vec![vec![c]], field)
    }

    pub fn rank(&self) -> usize {
        match self {
            Cocycle::Bimultiplicative { matrix, .. } => matrix.len(),
            Cocycle::Table { rank, .. } => *rank,
        }
    }

    pub fn field(&self) -> FieldConfig {
        match self {
            Cocycle::Bimultiplicative { field, .. } | Cocycle::Table { field, .. } => *field,
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Cocycle::Bimultiplicative { matrix, .. } => {
                matrix.iter().flatten().all(|c| *c == Scalar::one(self.field()))
            }
            Cocycle::Table { entries, .. } => {
                entries.values().all(|c| *c == Scalar::one(self.field()))
            }
        }
    }
}

pub fn cocycle_eval(f: &Cocycle, g: &GroupElement, h: &GroupElement) -> Result<Scalar, CocycleError> {
    match f {
        Cocycle::Bimultiplicative { field, matrix } => {
            let r = matrix.len();
            if g.rank() != r || h.rank() != r {
                return Err(CocycleError::RankMismatch(r, g.rank().max(h.rank())));
            }
            let mut acc = Scalar::one(*field);
            for (k, &a) in g.0.iter().enumerate() {
                for (l, &b) in h.0.iter().enumerate() {
                    let e = a.checked_mul(b).expect("exponent overflow");
                    if e != 0 {
                        acc *= matrix[k][l].pow_i64(e).expect("nonzero entry");
                    }
                }
            }
            Ok(acc)
        }
        Cocycle::Table { entries, .. } => entries
            .get(&(g.clone(), h.clone()))
            .cloned()
            .ok_or_else(|| CocycleError::OutOfBox(g.clone(), h.clone())),
    }
}

/// Checks f(g1,g2)·f(g1+g2,g3) = f(g1,g2+g3)·f(g2,g3) on every triple with
/// coefficients in [-bound, bound]; triples whose sums escape a Table box
/// are skipped. Returns the first violating triple, if any.
pub fn cocycle_check(
    f: &Cocycle,
    bound: i64,
) -> Option<(GroupElement, GroupElement, GroupElement)> {
    let elems = coeff_box(f.rank(), bound);
    for g1 in &elems {
        for g2 in &elems {
            let lhs1 = cocycle_eval(f, g1, g2);
            for g3 in &elems {
                let parts = (
                    lhs1.clone(),
                    cocycle_eval(f, &g1.add(g2), g3),
                    cocycle_eval(f, g1, &g2.add(g3)),
                    cocycle_eval(f, g2, g3),
                );
                if let (Ok(a), Ok(b), Ok(c), Ok(d)) = parts {
                    if a * b != c * d {
                        return Some((g1.clone(), g2.clone(), g3.clone()));
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EtaMap {
    /// Constant map g ↦ value.
    Constant { rank: usize, value: Scalar },
    /// η(Σa_kγ_k) = Π_k c_{kk}^{a_k(a_k−1)/2} · Π_{k<l} c_{kl}^{a_k a_l}
    /// for a symmetric matrix c; the trivialization closed form.
    ClosedForm { field: FieldConfig, matrix: Vec<Vec<Scalar>> },
    /// Finite table.
    Table { rank: usize, field: FieldConfig, map: BTreeMap<GroupElement, Scalar> },
}

impl EtaMap {
    pub fn rank(&self) -> usize {
        match self {
            EtaMap::Constant { rank, .. } | EtaMap::Table { rank, .. } => *rank,
            EtaMap::ClosedForm { matrix, .. } => matrix.len(),
        }
    }

    pub fn field(&self) -> FieldConfig {
        match self {
            EtaMap::Constant { value, .. } => value.field(),
            EtaMap::ClosedForm { field, .. } | EtaMap::Table { field, .. } => *field,
        }
    }
}

pub fn eta_eval(eta: &EtaMap, g: &GroupElement) -> Result<Scalar, CocycleError> {
    match eta {
        EtaMap::Constant { rank, value } => {
            if g.rank() != *rank {
                return Err(CocycleError::RankMismatch(*rank, g.rank()));
            }
            Ok(value.clone())
        }
        EtaMap::ClosedForm { field, matrix } => {
            let r = matrix.len();
            if g.rank() != r {
                return Err(CocycleError::RankMismatch(r, g.rank()));
            }
            let mut acc = Scalar::one(*field);
            for k in 0..r {
                let a = g.0[k];
                let e = a * (a - 1) / 2;
                if e != 0 {
                    acc *= matrix[k][k].pow_i64(e).expect("nonzero entry");
                }
                for l in (k + 1)..r {
                    let e = a * g.0[l];
                    if e != 0 {
                        acc *= matrix[k][l].pow_i64(e).expect("nonzero entry");
                    }
                }
            }
            Ok(acc)
        }
        EtaMap::Table { map, .. } => {
            map.get(g).cloned().ok_or_else(|| CocycleError::EtaUndefined(g.clone()))
        }
    }
}

/// d_η(g,h) = η(g+h)·η(g)⁻¹·η(h)⁻¹.
pub fn coboundary_eval(eta: &EtaMap, g: &GroupElement, h: &GroupElement) -> Result<Scalar, CocycleError> {
    let num = eta_eval(eta, &g.add(h))?;
    let dg = eta_eval(eta, g)?;
    let dh = eta_eval(eta, h)?;
    Ok(num * dg.inv().map_err(|_| CocycleError::ZeroValue)?
        * dh.inv().map_err(|_| CocycleError::ZeroValue)?)
}

/// The coboundary d_η tabulated on the coefficient box.
pub fn coboundary(eta: &EtaMap, bound: i64) -> Result<Cocycle, CocycleError> {
    let rank = eta.rank();
    let elems = coeff_box(rank, bound);
    let mut entries = BTreeMap::new();
    for g in &elems {
        for h in &elems {
            entries.insert((g.clone(), h.clone()), coboundary_eval(eta, g, h)?);
        }
    }
    Ok(Cocycle::Table { rank, field: eta.field(), bound, entries })
}

pub fn cocycle_product(f1: &Cocycle, f2: &Cocycle) -> Result<Cocycle, CocycleError> {
    match (f1, f2) {
        (
            Cocycle::Bimultiplicative { field, matrix: m1 },
            Cocycle::Bimultiplicative { matrix: m2, .. },
        ) => {
            if m1.len() != m2.len() {
                return Err(CocycleError::RankMismatch(m1.len(), m2.len()));
            }
            let matrix = m1
                .iter()
                .zip(m2)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.clone() * b).collect())
                .collect();
            Ok(Cocycle::Bimultiplicative { field: *field, matrix })
        }
        (
            Cocycle::Table { rank, field, bound, entries: e1 },
            Cocycle::Table { bound: b2, entries: e2, .. },
        ) if bound == b2 => {
            let mut entries = BTreeMap::new();
            for (k, v) in e1 {
                let w = e2.get(k).ok_or(CocycleError::VariantMismatch)?;
                entries.insert(k.clone(), v.clone() * w);
            }
            Ok(Cocycle::Table { rank: *rank, field: *field, bound: *bound, entries })
        }
        _ => Err(CocycleError::VariantMismatch),
    }
}

pub fn is_symmetric(f: &Cocycle, bound: i64) -> bool {
    match f {
        Cocycle::Bimultiplicative { matrix, .. } => {
            let r = matrix.len();
            (0..r).all(|k| (0..r).all(|l| matrix[k][l] == matrix[l][k]))
        }
        Cocycle::Table { rank, .. } => {
            let elems = coeff_box(*rank, bound);
            elems.iter().all(|g| {
                elems.iter().all(|h| {
                    match (cocycle_eval(f, g, h), cocycle_eval(f, h, g)) {
                        (Ok(a), Ok(b)) => a == b,
                        _ => true,
                    }
                })
            })
        }
    }
}

/// Multiplies f by the coboundary of ζ(0) = f(0,0), ζ(g) = 1 otherwise, so
/// the result takes the value 1 whenever either argument is the identity.
pub fn normalize(f: &Cocycle) -> Result<Cocycle, CocycleError> {
    let (rank, field, bound, entries) = match f {
        Cocycle::Table { rank, field, bound, entries } => (*rank, *field, *bound, entries),
        Cocycle::Bimultiplicative { .. } => return Ok(f.clone()),
    };
    let zero = GroupElement::zero(rank);
    let f00 = entries
        .get(&(zero.clone(), zero.clone()))
        .ok_or_else(|| CocycleError::OutOfBox(zero.clone(), zero.clone()))?;
    let mut zeta = BTreeMap::new();
    zeta.insert(zero, f00.clone());
    let eta = EtaMap::Table { rank, field, map: zeta };
    let mut out = BTreeMap::new();
    for ((g, h), v) in entries {
        let mut w = v.clone();
        // d_ζ(g,h) with ζ = 1 away from the identity
        if let Ok(z) = eta_eval(&eta, &g.add(h)) {
            w *= z;
        }
        if let Ok(z) = eta_eval(&eta, g) {
            w *= z.inv().map_err(|_| CocycleError::ZeroValue)?;
        }
        if let Ok(z) = eta_eval(&eta, h) {
            w *= z.inv().map_err(|_| CocycleError::ZeroValue)?;
        }
        out.insert((g.clone(), h.clone()), w);
    }
    Ok(Cocycle::Table { rank, field, bound, entries: out })
}

/// For symmetric bimultiplicative f returns the closed-form η with f = d_η.
pub fn trivialize_symmetric(f: &Cocycle) -> Result<EtaMap, CocycleError> {
    let Cocycle::Bimultiplicative { field, matrix } = f else {
        return Err(CocycleError::VariantMismatch);
    };
    if !is_symmetric(f, 0) {
        return Err(CocycleError::NotSymmetric);
    }
    Ok(EtaMap::ClosedForm { field: *field, matrix: matrix.clone() })
}

/// (σf)(g,h) = f(σ⁻¹g, σ⁻¹h).
pub fn aut_act(sigma: &AutMatrix, f: &Cocycle) -> Result<Cocycle, CocycleError> {
    if sigma.rank() != f.rank() {
        return Err(CocycleError::RankMismatch(sigma.rank(), f.rank()));
    }
    let inv = sigma.inverse();
    match f {
        Cocycle::Bimultiplicative { field, matrix } => {
            let r = matrix.len();
            let basis: Vec<GroupElement> = (0..r)
                .map(|k| {
                    GroupElement((0..r).map(|i| i64::from(i == k)).collect())
                })
                .collect();
            let mut out = Vec::with_capacity(r);
            for gk in &basis {
                let pre_k = inv.apply(gk).expect("rank checked");
                let mut row = Vec::with_capacity(r);
                for gl in &basis {
                    let pre_l = inv.apply(gl).expect("rank checked");
                    row.push(cocycle_eval(f, &pre_k, &pre_l)?);
                }
                out.push(row);
            }
            Ok(Cocycle::Bimultiplicative { field: *field, matrix: out })
        }
        Cocycle::Table { rank, field, bound, .. } => {
            let mut entries = BTreeMap::new();
            for g in coeff_box(*rank, *bound) {
                for h in coeff_box(*rank, *bound) {
                    let pg = inv.apply(&g).expect("rank checked");
                    let ph = inv.apply(&h).expect("rank checked");
                    entries.insert((g.clone(), h), cocycle_eval(f, &pg, &ph)?);
                }
            }
            Ok(Cocycle::Table { rank: *rank, field: *field, bound: *bound, entries })
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrbitDecision {
    Equivalent(AutMatrix),
    /// Search exhausted the bound; not a disproof.
    NotFoundWithinBound,
}

fn skew_matrix(f: &Cocycle) -> Result<Vec<Vec<Scalar>>, CocycleError> {
    let Cocycle::Bimultiplicative { matrix, .. } = f else {
        return Err(CocycleError::VariantMismatch);
    };
    let r = matrix.len();
    let mut out = Vec::with_capacity(r);
    for k in 0..r {
        let mut row = Vec::with_capacity(r);
        for l in 0..r {
            row.push(
                matrix[k][l].clone()
                    * matrix[l][k].inv().map_err(|_| CocycleError::ZeroValue)?,
            );
        }
        out.push(row);
    }
    Ok(out)
}

fn unimodular_matrices(rank: usize, bound: i64) -> Vec<AutMatrix> {
    let mut flats: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..rank * rank {
        let mut next = Vec::new();
        for v in &flats {
            for c in -bound..=bound {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        flats = next;
    }
    flats
        .into_iter()
        .filter_map(|v| {
            let entries = v.chunks(rank).map(<[i64]>::to_vec).collect();
            AutMatrix::new(entries).ok()
        })
        .collect()
}

/// Compares cohomology classes via the coboundary-invariant skew part
/// S_{kl} = c_{kl}/c_{lk} under every σ ∈ GL_r(ℤ) with entries bounded by
/// `search_bound`. Inconclusive on exhaustion.
pub fn orbit_equivalent(
    f1: &Cocycle,
    f2: &Cocycle,
    search_bound: i64,
) -> Result<OrbitDecision, CocycleError> {
    if f1.rank() != f2.rank() {
        return Err(CocycleError::RankMismatch(f1.rank(), f2.rank()));
    }
    let target = skew_matrix(f2)?;
    for sigma in unimodular_matrices(f1.rank(), search_bound) {
        let moved = aut_act(&sigma, f1)?;
        if skew_matrix(&moved)? == target {
            return Ok(OrbitDecision::Equivalent(sigma));
        }
    }
    Ok(OrbitDecision::NotFoundWithinBound)
}
