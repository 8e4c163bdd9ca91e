//! JSON algorithm-spec documents.
//!
//! ```json
//! {"model": "DQCK", "n": 1, "w": 0, "k": 1, "d": 1,
//!  "unitaries": [{"kind": "haar", "seed": 7}, {"kind": "hadamard"}],
//!  "accept": [0, 2], "restriction": "*+"}
//! ```

use serde::{Deserialize, Serialize};

use super::{Accept, AlgorithmSpec, Model, Restriction};
use crate::error::{Error, Result};
use crate::linalg::{hadamard_matrix, random_unitary, ComplexMatrix, IndexSpace, C64};
use bitvec::prelude::*;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UnitaryDoc {
    /// Row-major entries as `[re, im]` pairs.
    Explicit { rows: Vec<Vec<[f64; 2]>> },
    /// `H_N ⊗ I` on the oracle register; needs `N` a power of two.
    Hadamard,
    Identity,
    Haar { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AcceptDoc {
    Indices(Vec<usize>),
    /// ½BQP predicate as `M` rows of 0/1.
    Matrix(Vec<Vec<u8>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Oracle register size when it is not a power of two.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_dim: Option<usize>,
    #[serde(default)]
    pub w: u32,
    #[serde(default)]
    pub k: u32,
    pub d: usize,
    pub unitaries: Vec<UnitaryDoc>,
    pub accept: AcceptDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<String>,
}

impl SpecDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn space(&self) -> Result<IndexSpace> {
        match (self.n, self.oracle_dim) {
            (Some(n), None) => IndexSpace::new(n, self.w, self.k),
            (None, Some(dim)) => IndexSpace::with_oracle_dim(dim, self.w, self.k),
            (Some(n), Some(dim)) if dim == 1usize << n => IndexSpace::new(n, self.w, self.k),
            _ => Err(Error::Specification(
                "give exactly one of n or oracle_dim".into(),
            )),
        }
    }

    /// Builds and validates the algorithm, plus the optional restriction.
    pub fn build(&self) -> Result<(AlgorithmSpec, Option<Restriction>)> {
        let space = self.space()?;
        space.check_dense()?;
        if self.unitaries.len() != self.d + 1 {
            return Err(Error::Specification(format!(
                "d={} needs {} unitaries, got {}",
                self.d,
                self.d + 1,
                self.unitaries.len()
            )));
        }
        let m = space.dim();
        let unitaries = self
            .unitaries
            .iter()
            .map(|u| unitary_from_doc(u, &space))
            .collect::<Result<Vec<_>>>()?;
        let accept = match (&self.accept, self.model) {
            (AcceptDoc::Indices(idx), Model::HalfBqp) => {
                // outcome-only predicate, independent of the start
                let mut bits = bitvec![0; m * m];
                for &j in idx {
                    check_index(j, m)?;
                    for a in 0..m {
                        bits.set(a * m + j, true);
                    }
                }
                Accept::Pairs(bits)
            }
            (AcceptDoc::Indices(idx), _) => {
                let mut bits = bitvec![0; m];
                for &j in idx {
                    check_index(j, m)?;
                    bits.set(j, true);
                }
                Accept::Set(bits)
            }
            (AcceptDoc::Matrix(rows), Model::HalfBqp) => {
                if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                    return Err(Error::Shape(format!("accept matrix must be {m}x{m}")));
                }
                let mut bits = bitvec![0; m * m];
                for (a, row) in rows.iter().enumerate() {
                    for (b, &v) in row.iter().enumerate() {
                        if v > 1 {
                            return Err(Error::Specification("accept matrix entries are 0/1".into()));
                        }
                        bits.set(a * m + b, v == 1);
                    }
                }
                Accept::Pairs(bits)
            }
            (AcceptDoc::Matrix(_), model) => {
                return Err(Error::Specification(format!(
                    "accept matrix is only meaningful for HALF_BQP, not {model}"
                )))
            }
        };
        let spec = AlgorithmSpec::new(self.model, space, unitaries, accept)?;
        let rho = match &self.restriction {
            Some(s) => {
                let r: Restriction = s.parse()?;
                r.check_len(space.oracle_dim())?;
                Some(r)
            }
            None => None,
        };
        Ok((spec, rho))
    }

    /// Document with every gate written out explicitly.
    pub fn from_spec(spec: &AlgorithmSpec, restriction: Option<&Restriction>) -> Self {
        let space = spec.space();
        let m = space.dim();
        let unitaries = spec
            .unitaries()
            .iter()
            .map(|u| UnitaryDoc::Explicit {
                rows: (0..m)
                    .map(|r| u.row(r).iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            })
            .collect();
        let accept = match spec.accept() {
            Accept::Set(bits) => AcceptDoc::Indices(bits.iter_ones().collect()),
            Accept::Pairs(bits) => AcceptDoc::Matrix(
                (0..m)
                    .map(|a| (0..m).map(|b| bits[a * m + b] as u8).collect())
                    .collect(),
            ),
        };
        Self {
            model: spec.model(),
            n: space.n(),
            oracle_dim: if space.n().is_some() {
                None
            } else {
                Some(space.oracle_dim())
            },
            w: space.w(),
            k: space.k(),
            d: spec.d(),
            unitaries,
            accept,
            restriction: restriction.map(|r| r.to_string()),
        }
    }
}

fn check_index(j: usize, m: usize) -> Result<()> {
    if j >= m {
        return Err(Error::Specification(format!("accepting index {j} outside [0, {m})")));
    }
    Ok(())
}

fn unitary_from_doc(doc: &UnitaryDoc, space: &IndexSpace) -> Result<ComplexMatrix> {
    let m = space.dim();
    match doc {
        UnitaryDoc::Identity => Ok(ComplexMatrix::identity(m)),
        UnitaryDoc::Haar { seed } => random_unitary(m, *seed),
        UnitaryDoc::Hadamard => {
            let n = space.n().ok_or_else(|| {
                Error::Specification("hadamard gate needs a power-of-two oracle register".into())
            })?;
            let rest = space.workspace_dim() * space.clean_dim();
            Ok(hadamard_matrix(n)?.kron(&ComplexMatrix::identity(rest)))
        }
        UnitaryDoc::Explicit { rows } => {
            if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                return Err(Error::Shape(format!("explicit unitary must be {m}x{m}")));
            }
            let data = rows
                .iter()
                .flat_map(|r| r.iter().map(|&[re, im]| C64::new(re, im)))
                .collect();
            ComplexMatrix::new(m, m, data)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::acceptance_direct;

    #[test]
    fn parses_and_builds() {
        let text = r#"{"model":"DQCK","n":1,"w":0,"k":1,"d":1,
            "unitaries":[{"kind":"haar","seed":7},{"kind":"hadamard"}],
            "accept":[0,2],"restriction":"*+"}"#;
        let doc = SpecDocument::from_json(text).unwrap();
        let (spec, rho) = doc.build().unwrap();
        assert_eq!(spec.d(), 1);
        assert_eq!(rho.unwrap().to_string(), "*+");
    }

    #[test]
    fn explicit_round_trip() {
        let text = r#"{"model":"HALF_BQP","n":1,"d":1,
            "unitaries":[{"kind":"haar","seed":1},{"kind":"identity"}],
            "accept":[1]}"#;
        let (spec, _) = SpecDocument::from_json(text).unwrap().build().unwrap();
        let again = SpecDocument::from_spec(&spec, None);
        let json = again.to_json().unwrap();
        let (back, _) = SpecDocument::from_json(&json).unwrap().build().unwrap();
        for x in [[1i8, 1], [1, -1], [-1, -1]] {
            let a = acceptance_direct(&spec, &x).unwrap();
            let b = acceptance_direct(&back, &x).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let wrong_count = r#"{"model":"BQP","n":1,"d":2,"unitaries":[{"kind":"identity"}],"accept":[0]}"#;
        assert!(SpecDocument::from_json(wrong_count).unwrap().build().is_err());
        let bad_gate = r#"{"model":"BQP","n":1,"d":1,
            "unitaries":[{"kind":"explicit","rows":[[[2,0],[0,0]],[[0,0],[1,0]]]},{"kind":"identity"}],
            "accept":[0]}"#;
        assert!(matches!(
            SpecDocument::from_json(bad_gate).unwrap().build(),
            Err(Error::Validation(_))
        ));
        assert!(SpecDocument::from_json(r#"{"model":"XYZ"}"#).is_err());
    }
}
