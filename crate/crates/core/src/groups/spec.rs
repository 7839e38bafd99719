//! JSON group-spec files.
//!
//! ```json
//! { "name": "z2xz2", "rank": 2,
//!   "backend": { "type": "finite_table", "order": 4, "identity": 0,
//!                "table": [0,1,2,3, 1,0,3,2, 2,3,0,1, 3,2,1,0] },
//!   "images": [1, 2] }
//! ```

use serde::{Deserialize, Serialize};

use super::{Backend, Element, MarkedGroup};
use crate::error::GroupError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BackendSpec {
    FiniteTable { order: usize, identity: u32, table: Vec<u32> },
    Permutation { degree: usize },
    IntegerMatrix { dimension: usize, #[serde(default)] modulus: Option<i64> },
    FreeAbelian { dimension: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ImageSpec {
    Index(u32),
    Entries(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub rank: usize,
    pub backend: BackendSpec,
    pub images: Vec<ImageSpec>,
    /// Every kernel word has even length.
    #[serde(default)]
    pub even_parity: bool,
    #[serde(default)]
    pub description: Option<String>,
}

fn invalid(msg: impl Into<String>) -> GroupError {
    GroupError::InvalidSpec(msg.into())
}

/// Largest table for which associativity is checked exhaustively.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 256;

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<GroupSpec, GroupError> {
        serde_json::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group specs always serialize")
    }

    pub fn build(&self) -> Result<MarkedGroup, GroupError> {
        if self.images.len() != self.rank {
            return Err(invalid(format!(
                "rank is {} but {} generator images were given",
                self.rank,
                self.images.len()
            )));
        }
        let backend = self.backend()?;
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(i, img)| image(&backend, img).map_err(|e| invalid(format!("image {}: {e}", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        let name = self.name.clone().unwrap_or_else(|| "custom".to_string());
        Ok(MarkedGroup::new(name, backend, images)?.with_even_parity(self.even_parity))
    }

    fn backend(&self) -> Result<Backend, GroupError> {
        match &self.backend {
            BackendSpec::FiniteTable { order, identity, table } => {
                validate_table(*order, *identity, table)?;
                Ok(Backend::FiniteTable { order: *order, identity: *identity, table: table.clone() })
            }
            BackendSpec::Permutation { degree } => {
                if *degree == 0 {
                    return Err(invalid("permutation degree must be positive"));
                }
                Ok(Backend::Permutation { degree: *degree })
            }
            BackendSpec::IntegerMatrix { dimension, modulus } => {
                if *dimension == 0 {
                    return Err(invalid("matrix dimension must be positive"));
                }
                if let Some(m) = modulus {
                    if *m < 2 {
                        return Err(invalid("modulus must be at least 2"));
                    }
                }
                Ok(Backend::IntegerMatrix { dimension: *dimension, modulus: *modulus })
            }
            BackendSpec::FreeAbelian { dimension } => Ok(Backend::FreeAbelian { dimension: *dimension }),
        }
    }
}

fn validate_table(order: usize, identity: u32, table: &[u32]) -> Result<(), GroupError> {
    if order == 0 || table.len() != order * order {
        return Err(invalid(format!("table for order {order} must have {} entries", order * order)));
    }
    if identity as usize >= order || table.iter().any(|&e| e as usize >= order) {
        return Err(invalid("table entry out of range"));
    }
    let at = |a: usize, b: usize| table[a * order + b] as usize;
    let e = identity as usize;
    for x in 0..order {
        if at(e, x) != x || at(x, e) != x {
            return Err(invalid(format!("index {identity} is not a two-sided identity")));
        }
        let mut row_seen = vec![false; order];
        for y in 0..order {
            row_seen[at(x, y)] = true;
        }
        if row_seen.iter().any(|s| !s) {
            return Err(invalid(format!("row {x} of the table is not a permutation")));
        }
    }
    if order <= ASSOCIATIVITY_CHECK_LIMIT {
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(invalid(format!("table is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
    }
    Ok(())
}

fn image(backend: &Backend, spec: &ImageSpec) -> Result<Element, String> {
    match (backend, spec) {
        (Backend::FiniteTable { order, .. }, ImageSpec::Index(i)) => {
            if (*i as usize) < *order {
                Ok(Element::Table(*i))
            } else {
                Err(format!("index {i} out of range for order {order}"))
            }
        }
        (Backend::Permutation { degree }, ImageSpec::Entries(p)) => {
            if p.len() != *degree {
                return Err(format!("expected {degree} entries"));
            }
            let mut seen = vec![false; *degree];
            for &x in p {
                if x < 0 || x as usize >= *degree || seen[x as usize] {
                    return Err("not a permutation of 0..degree".into());
                }
                seen[x as usize] = true;
            }
            Ok(Element::Perm(p.iter().map(|&x| x as u32).collect()))
        }
        (Backend::IntegerMatrix { dimension, modulus }, ImageSpec::Entries(m)) => {
            if m.len() != dimension * dimension {
                return Err(format!("expected {} entries", dimension * dimension));
            }
            let entries: Vec<i64> = match modulus {
                Some(md) => m.iter().map(|x| x.rem_euclid(*md)).collect(),
                None => m.clone(),
            };
            Ok(Element::Matrix(entries.into()))
        }
        (Backend::FreeAbelian { dimension }, ImageSpec::Entries(v)) => {
            if v.len() != *dimension {
                return Err(format!("expected {dimension} entries"));
            }
            Ok(Element::Vector(v.clone().into()))
        }
        (b, _) => Err(format!("image has the wrong shape for a {} backend", b.kind())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        let bad = [
            r#"{"rank": 2, "backend": {"type": "free_abelian", "dimension": 2}, "images": [[1,0]]}"#,
            r#"{"rank": 2, "backend": {"type": "free_abelian", "dimension": 2}, "images": [[1,0],[0]]}"#,
            r#"{"rank": 2, "backend": {"type": "permutation", "degree": 3}, "images": [[0,0,1],[0,1,2]]}"#,
            r#"{"rank": 2, "backend": {"type": "integer_matrix", "dimension": 2}, "images": [[2,0,0,1],[1,0,0,1]]}"#,
            r#"{"rank": 2, "backend": {"type": "finite_table", "order": 2, "identity": 0, "table": [0,1,1,1]}, "images": [0,1]}"#,
            r#"{"rank": 1, "backend": {"type": "free_abelian", "dimension": 1}, "images": [[1]]}"#,
            r#"{"rank": 2, "backend": {"type": "quaternion"}, "images": []}"#,
        ];
        for text in bad {
            let result = GroupSpec::from_json(text).and_then(|s| s.build());
            assert!(result.is_err(), "accepted {text}");
        }
    }

    #[test]
    fn non_associative_table_rejected() {
        // a Latin square with identity 0 that is not a group (order 5 loop)
        let table = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(validate_table(5, 0, &table).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec = GroupSpec::from_json(crate::groups::presets::PRESETS[2].1).unwrap();
        assert_eq!(GroupSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}
