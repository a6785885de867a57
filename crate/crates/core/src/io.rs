//! JSON-facing data transfer types and conversions for specs, elements,
//! cocycles, and matrix modules. Serialized forms are canonical: terms are
//! sorted, scalars use the exact string grammar from `exactmath`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycles::Cocycle;
use crate::exactmath::{ExactMatrix, FieldConfig, Scalar};
use crate::groups::{GroupElement, GroupSpec};
use crate::modules::{AbstractModule, ActionMatrix, ModuleSpec};
use crate::novikov::{AlgebraSpec, Element, JKind, Label, Xi};
use crate::spectral::Window;

#[derive(Error, Debug)]
pub enum IoError {
    #[error("bad input: {0}")]
    Bad(String),
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::Bad(msg.into())
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FieldDto {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
}

impl FieldDto {
    pub fn to_field(&self) -> Result<FieldConfig, IoError> {
        match self.kind.as_str() {
            "rational" => Ok(FieldConfig::Rational),
            "quadratic" => {
                let d = self.d.ok_or_else(|| bad("quadratic field needs \"d\""))?;
                FieldConfig::quadratic(d).map_err(|e| bad(e.to_string()))
            }
            other => Err(bad(format!("unknown field kind {other:?}"))),
        }
    }

    pub fn from_field(f: FieldConfig) -> FieldDto {
        match f {
            FieldConfig::Rational => FieldDto { kind: "rational".into(), d: None },
            FieldConfig::Quadratic { d } => FieldDto { kind: "quadratic".into(), d: Some(d) },
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GroupDto {
    pub rank: usize,
    pub generators: Vec<String>,
}

impl GroupDto {
    pub fn to_group(&self, field: FieldConfig) -> Result<GroupSpec, IoError> {
        if self.generators.len() != self.rank {
            return Err(bad("generator count must equal rank"));
        }
        let images = self
            .generators
            .iter()
            .map(|s| Scalar::parse(s, field).map_err(|e| bad(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        GroupSpec::new(images, field).map_err(|e| bad(e.to_string()))
    }

    pub fn from_group(g: &GroupSpec) -> GroupDto {
        GroupDto {
            rank: g.rank(),
            generators: g.generator_images().iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TableEntryDto {
    pub g: Vec<i64>,
    pub h: Vec<i64>,
    pub value: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CocycleDto {
    pub variant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<TableEntryDto>>,
}

impl CocycleDto {
    pub fn to_cocycle(&self, rank: usize, field: FieldConfig) -> Result<Cocycle, IoError> {
        match self.variant.as_str() {
            "bimultiplicative" => {
                let m = self.matrix.as_ref().ok_or_else(|| bad("missing \"matrix\""))?;
                let matrix = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|s| Scalar::parse(s, field).map_err(|e| bad(e.to_string())))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if matrix.len() != rank {
                    return Err(bad("cocycle matrix rank must match group rank"));
                }
                Cocycle::bimultiplicative(matrix, field).map_err(|e| bad(e.to_string()))
            }
            "table" => {
                let bound = self.bound.ok_or_else(|| bad("missing \"box\""))?;
                let raw = self.entries.as_ref().ok_or_else(|| bad("missing \"entries\""))?;
                let mut entries = BTreeMap::new();
                for e in raw {
                    if e.g.len() != rank || e.h.len() != rank {
                        return Err(bad("table entry rank mismatch"));
                    }
                    entries.insert(
                        (GroupElement(e.g.clone()), GroupElement(e.h.clone())),
                        Scalar::parse(&e.value, field).map_err(|er| bad(er.to_string()))?,
                    );
                }
                Ok(Cocycle::Table { rank, field, bound, entries })
            }
            other => Err(bad(format!("unknown cocycle variant {other:?}"))),
        }
    }

    pub fn from_cocycle(f: &Cocycle) -> CocycleDto {
        match f {
            Cocycle::Bimultiplicative { matrix, .. } => CocycleDto {
                variant: "bimultiplicative".into(),
                matrix: Some(
                    matrix
                        .iter()
                        .map(|row| row.iter().map(|s| s.to_string()).collect())
                        .collect(),
                ),
                bound: None,
                entries: None,
            },
            Cocycle::Table { bound, entries, .. } => CocycleDto {
                variant: "table".into(),
                matrix: None,
                bound: Some(*bound),
                entries: Some(
                    entries
                        .iter()
                        .map(|((g, h), v)| TableEntryDto {
                            g: g.0.clone(),
                            h: h.0.clone(),
                            value: v.to_string(),
                        })
                        .collect(),
                ),
            },
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ElementTermDto {
    pub alpha: Vec<i64>,
    pub j: u32,
    pub coeff: String,
}

pub fn element_to_dto(e: &Element) -> Vec<ElementTermDto> {
    e.terms()
        .map(|(l, c)| ElementTermDto { alpha: l.alpha.0.clone(), j: l.j, coeff: c.to_string() })
        .collect()
}

pub fn element_from_dto(terms: &[ElementTermDto], field: FieldConfig) -> Result<Element, IoError> {
    let mut e = Element::zero(field);
    for t in terms {
        e.add_term(
            Label::new(GroupElement(t.alpha.clone()), t.j),
            Scalar::parse(&t.coeff, field).map_err(|er| bad(er.to_string()))?,
        );
    }
    Ok(e)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct XiDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<Vec<ElementTermDto>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AlgebraDto {
    pub field: FieldDto,
    pub group: GroupDto,
    pub cocycle: CocycleDto,
    pub j: String,
    pub xi: XiDto,
}

impl AlgebraDto {
    pub fn to_spec(&self) -> Result<AlgebraSpec, IoError> {
        let field = self.field.to_field()?;
        let group = self.group.to_group(field)?;
        let cocycle = self.cocycle.to_cocycle(group.rank(), field)?;
        let j_kind = match self.j.as_str() {
            "zero" => JKind::Zero,
            "nat" => JKind::Nat,
            other => return Err(bad(format!("unknown j kind {other:?}"))),
        };
        let xi = match (&self.xi.scalar, &self.xi.element) {
            (Some(s), None) => {
                Xi::Scalar(Scalar::parse(s, field).map_err(|e| bad(e.to_string()))?)
            }
            (None, Some(terms)) => Xi::Element(element_from_dto(terms, field)?),
            _ => return Err(bad("xi must be exactly one of \"scalar\" or \"element\"")),
        };
        AlgebraSpec::new(group, cocycle, j_kind, xi).map_err(|e| bad(e.to_string()))
    }

    pub fn from_spec(s: &AlgebraSpec) -> AlgebraDto {
        AlgebraDto {
            field: FieldDto::from_field(s.field()),
            group: GroupDto::from_group(s.delta()),
            cocycle: CocycleDto::from_cocycle(s.cocycle()),
            j: match s.j_kind() {
                JKind::Zero => "zero".into(),
                JKind::Nat => "nat".into(),
            },
            xi: match s.xi() {
                Xi::Scalar(b) => XiDto { scalar: Some(b.to_string()), element: None },
                Xi::Element(e) => XiDto { scalar: None, element: Some(element_to_dto(e)) },
            },
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ModuleDto {
    pub algebra: AlgebraDto,
    pub lambda: String,
}

impl ModuleDto {
    pub fn to_spec(&self) -> Result<ModuleSpec, IoError> {
        let algebra = self.algebra.to_spec()?;
        let lambda =
            Scalar::parse(&self.lambda, algebra.field()).map_err(|e| bad(e.to_string()))?;
        ModuleSpec::new(algebra, lambda).map_err(|e| bad(e.to_string()))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct LabelDto {
    pub alpha: Vec<i64>,
    pub j: u32,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ActionDto {
    pub element: LabelDto,
    pub side: String,
    pub matrix: Vec<Vec<String>>,
    #[serde(default)]
    pub lossy: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct WindowDto {
    pub alpha_box: i64,
    pub j_max: u32,
    pub pad: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AbstractModuleDto {
    pub basis_size: usize,
    pub window: WindowDto,
    pub actions: Vec<ActionDto>,
}

pub fn matrix_to_dto(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

pub fn matrix_from_dto(
    rows: &[Vec<String>],
    field: FieldConfig,
) -> Result<ExactMatrix, IoError> {
    let parsed = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| Scalar::parse(s, field).map_err(|e| bad(e.to_string())))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != parsed[0].len()) {
        return Err(bad("matrix rows must be nonempty and rectangular"));
    }
    Ok(ExactMatrix::from_rows(parsed, field))
}

pub fn abstract_module_to_dto(am: &AbstractModule) -> AbstractModuleDto {
    let w = &am.window;
    let mut actions = Vec::new();
    for (side_name, map) in [("left", &am.left), ("right", &am.right)] {
        for (l, a) in map {
            actions.push(ActionDto {
                element: LabelDto { alpha: l.alpha.0.clone(), j: l.j },
                side: side_name.into(),
                matrix: matrix_to_dto(&a.matrix),
                lossy: a.lossy,
            });
        }
    }
    AbstractModuleDto {
        basis_size: am.basis_size(),
        window: WindowDto { alpha_box: w.alpha_box(), j_max: w.j_max(), pad: w.pad() },
        actions,
    }
}

pub fn abstract_module_from_dto(
    dto: &AbstractModuleDto,
    spec: &AlgebraSpec,
) -> Result<AbstractModule, IoError> {
    let field = spec.field();
    let window = Window::from_box(spec, dto.window.alpha_box, dto.window.j_max, dto.window.pad);
    if window.size() != dto.basis_size {
        return Err(bad(format!(
            "basis_size {} does not match the window ({} labels)",
            dto.basis_size,
            window.size()
        )));
    }
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for a in &dto.actions {
        let label = Label::new(GroupElement(a.element.alpha.clone()), a.element.j);
        let matrix = matrix_from_dto(&a.matrix, field)?;
        if matrix.rows() != dto.basis_size || matrix.cols() != dto.basis_size {
            return Err(bad("action matrix must be basis_size × basis_size"));
        }
        let entry = ActionMatrix { matrix, lossy: a.lossy };
        match a.side.as_str() {
            "left" => left.insert(label, entry),
            "right" => right.insert(label, entry),
            other => return Err(bad(format!("unknown side {other:?}"))),
        };
    }
    Ok(AbstractModule { window, field, left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::abstract_module;
    use crate::novikov::novikov_product;

    #[test]
    fn algebra_round_trip() {
        let json = r#"{
            "field": {"kind": "quadratic", "d": 2},
            "group": {"rank": 2, "generators": ["1", "sqrt(2)"]},
            "cocycle": {"variant": "bimultiplicative",
                        "matrix": [["2","1"],["1","1"]]},
            "j": "zero",
            "xi": {"scalar": "1"}
        }"#;
        let dto: AlgebraDto = serde_json::from_str(json).unwrap();
        let spec = dto.to_spec().unwrap();
        assert_eq!(spec.delta().rank(), 2);
        let back = AlgebraDto::from_spec(&spec);
        assert_eq!(back.to_spec().unwrap(), spec);
    }

    #[test]
    fn element_round_trip() {
        let field = FieldConfig::Rational;
        let spec_json = r#"{
            "field": {"kind": "rational"},
            "group": {"rank": 1, "generators": ["1"]},
            "cocycle": {"variant": "bimultiplicative", "matrix": [["1"]]},
            "j": "nat",
            "xi": {"scalar": "0"}
        }"#;
        let spec: AlgebraSpec =
            serde_json::from_str::<AlgebraDto>(spec_json).unwrap().to_spec().unwrap();
        let e = novikov_product(
            &Element::basis(Label::new(GroupElement(vec![1]), 2), field),
            &Element::basis(Label::new(GroupElement(vec![2]), 1), field),
            &spec,
        );
        let dto = element_to_dto(&e);
        assert_eq!(element_from_dto(&dto, field).unwrap(), e);
        // canonical ordering: serialized twice gives identical bytes
        let a = serde_json::to_string(&dto).unwrap();
        let b = serde_json::to_string(&element_to_dto(&e)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn abstract_module_round_trip() {
        let spec_json = r#"{
            "field": {"kind": "rational"},
            "group": {"rank": 1, "generators": ["1"]},
            "cocycle": {"variant": "bimultiplicative", "matrix": [["1"]]},
            "j": "nat",
            "xi": {"scalar": "1"}
        }"#;
        let spec: AlgebraSpec =
            serde_json::from_str::<AlgebraDto>(spec_json).unwrap().to_spec().unwrap();
        let m = ModuleSpec::new(spec.clone(), Scalar::from_int(2, spec.field())).unwrap();
        let w = Window::from_box(&spec, 1, 1, 0);
        let am = abstract_module(&m, &w, 1, 1);
        let dto = abstract_module_to_dto(&am);
        let back = abstract_module_from_dto(&dto, &spec).unwrap();
        assert_eq!(back, am);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let dto = FieldDto { kind: "septic".into(), d: None };
        assert!(dto.to_field().is_err());
        let dto = FieldDto { kind: "quadratic".into(), d: Some(4) };
        assert!(dto.to_field().is_err());
    }
}
