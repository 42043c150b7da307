//! JSON instance files.
//!
//! ```json
//! {"type":"atoms","masses":[0.25,0.25,0.25],"membership":[[1,0,1],[0,1,1]]}
//! {"type":"moments","alpha":[0.5,0.5],"sigma":[[0.5,0.25],[0.25,0.5]]}
//! ```
//!
//! Membership rows are events; entries may be booleans or 0/1.

use std::path::Path;

use serde::{Deserialize, Serialize};
use unionbound_core::{EventSystem, MomentSummary};

use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Instance {
    Atoms {
        masses: Vec<f64>,
        #[serde(deserialize_with = "membership_rows")]
        membership: Vec<Vec<bool>>,
    },
    Moments {
        alpha: Vec<f64>,
        sigma: Vec<Vec<f64>>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Flag {
    Bool(bool),
    Int(u8),
}

fn membership_rows<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Vec<bool>>, D::Error> {
    let rows: Vec<Vec<Flag>> = Deserialize::deserialize(d)?;
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|f| match f {
                    Flag::Bool(b) => Ok(b),
                    Flag::Int(0) => Ok(false),
                    Flag::Int(1) => Ok(true),
                    Flag::Int(other) => Err(serde::de::Error::custom(format!(
                        "membership entry {other} is not 0 or 1"
                    ))),
                })
                .collect()
        })
        .collect()
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(Error::Json)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances always serialize")
    }

    pub fn from_event_system(es: &EventSystem) -> Self {
        Instance::Atoms {
            masses: es.masses().to_vec(),
            membership: es.membership().to_vec(),
        }
    }

    /// The event system for the atoms variant; `None` for moments.
    pub fn event_system(&self) -> Result<Option<EventSystem>, Error> {
        match self {
            Instance::Atoms { masses, membership } => {
                Ok(Some(EventSystem::new(masses.clone(), membership.clone())?))
            }
            Instance::Moments { .. } => Ok(None),
        }
    }

    pub fn summary(&self) -> Result<MomentSummary, Error> {
        match self {
            Instance::Atoms { .. } => Ok(self.event_system()?.expect("atoms variant").summarize()),
            Instance::Moments { alpha, sigma } => {
                Ok(MomentSummary::from_moments(alpha.clone(), sigma.clone())?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_variants() {
        let atoms = Instance::from_json(
            r#"{"type":"atoms","masses":[0.25,0.25,0.25],"membership":[[1,0,1],[false,true,true]]}"#,
        )
        .unwrap();
        let ms = atoms.summary().unwrap();
        assert_eq!(ms.theta2(), 0.25);
        assert_eq!(
            atoms.event_system().unwrap().unwrap().union_probability(),
            0.75
        );

        let moments = Instance::from_json(
            r#"{"type":"moments","alpha":[0.5,0.5],"sigma":[[0.5,0.25],[0.25,0.5]]}"#,
        )
        .unwrap();
        assert_eq!(moments.summary().unwrap(), ms);
        assert!(moments.event_system().unwrap().is_none());
    }

    #[test]
    fn rejects_bad_membership_entries() {
        assert!(
            Instance::from_json(r#"{"type":"atoms","masses":[0.5],"membership":[[2]]}"#).is_err()
        );
        assert!(Instance::from_json(r#"{"type":"simplex","alpha":[]}"#).is_err());
    }

    #[test]
    fn atoms_round_trip() {
        let inst = Instance::Atoms {
            masses: vec![0.125, 0.5],
            membership: vec![vec![true, false], vec![true, true]],
        };
        assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn invalid_system_surfaces_as_core_error() {
        let inst =
            Instance::from_json(r#"{"type":"atoms","masses":[0.7,0.7],"membership":[[1,1]]}"#)
                .unwrap();
        assert!(matches!(inst.summary(), Err(Error::Core(_))));
    }
}
