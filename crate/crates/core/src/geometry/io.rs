use serde::{Deserialize, Serialize};

use super::{GeometryError, HPolytope};

/// Interchange form of a polytope: `A x + b >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl PolytopeJson {
    pub fn into_polytope(self) -> Result<HPolytope, GeometryError> {
        if self.dim == 0 {
            return Err(GeometryError::Invalid("dim must be positive".into()));
        }
        for (i, row) in self.a.iter().enumerate() {
            if row.len() != self.dim {
                return Err(GeometryError::Invalid(format!(
                    "row {i} has length {}, expected {}",
                    row.len(),
                    self.dim
                )));
            }
        }
        if self.a.iter().flatten().chain(&self.b).any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite("polytope rows"));
        }
        HPolytope::from_rows(self.dim, &self.a, &self.b)
    }
}

impl From<&HPolytope> for PolytopeJson {
    fn from(p: &HPolytope) -> Self {
        let (a, b) = p.to_rows();
        Self { dim: p.dim(), a, b }
    }
}

impl HPolytope {
    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let doc: PolytopeJson =
            serde_json::from_str(text).map_err(|e| GeometryError::Invalid(e.to_string()))?;
        doc.into_polytope()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PolytopeJson::from(self)).expect("polytope serializes")
    }
}
