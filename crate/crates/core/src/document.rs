//! The shared input document: a *-field, a Gram matrix, named subspaces as
//! generator lists, and optional state definitions for the quantum-logic
//! checks. Line-oriented, `#` comments, line-precise errors.
//!
//! ```text
//! field prime 3          # rational | gaussian | quaternion | prime <p>
//! dim 2
//! gram
//! 1 0
//! 0 1
//! subspace M
//! 1 1
//! state m1 atomic 1 0
//! state mix mixture 1/2 m1 1/2 m2
//! ```

use num_rational::BigRational;
use thiserror::Error;

use crate::hermitian::{HermitianSpace, SpaceError};
use crate::linalg::{Subspace, Vector};
use crate::scalar::{FieldDescriptor, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DocError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, DocError> {
    Err(DocError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpec {
    Vector {
        name: String,
        vector: Vector,
    },
    Atomic {
        name: String,
        vector: Vector,
    },
    Mixture {
        name: String,
        parts: Vec<(BigRational, String)>,
    },
}

impl StateSpec {
    pub fn name(&self) -> &str {
        match self {
            StateSpec::Vector { name, .. }
            | StateSpec::Atomic { name, .. }
            | StateSpec::Mixture { name, .. } => name,
        }
    }
}

/// A parsed space description document.
#[derive(Debug, Clone)]
pub struct SpaceDocument {
    pub space: HermitianSpace,
    pub subspaces: Vec<(String, Subspace)>,
    pub states: Vec<StateSpec>,
}

impl SpaceDocument {
    pub fn subspace(&self, name: &str) -> Option<&Subspace> {
        self.subspaces
            .iter()
            .find_map(|(n, s)| (n == name).then_some(s))
    }

    pub fn parse(text: &str) -> Result<SpaceDocument, DocError> {
        // meaningful lines with their 1-based numbers
        let lines: Vec<(usize, Vec<String>)> = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("").trim();
                if body.is_empty() {
                    None
                } else {
                    Some((i + 1, body.split_whitespace().map(str::to_string).collect()))
                }
            })
            .collect();
        let mut pos = 0usize;
        let take = |pos: &mut usize| -> Option<&(usize, Vec<String>)> {
            let item = lines.get(*pos);
            if item.is_some() {
                *pos += 1;
            }
            item
        };

        // field
        let Some((fline, ftoks)) = take(&mut pos) else {
            return err(1, "empty document; expected `field ...`");
        };
        if ftoks[0] != "field" {
            return err(
                *fline,
                "expected `field rational|gaussian|quaternion|prime <p>`",
            );
        }
        let desc = match (ftoks.get(1).map(String::as_str), ftoks.get(2)) {
            (Some("rational"), None) => FieldDescriptor::rational(),
            (Some("gaussian"), None) => FieldDescriptor::gaussian(),
            (Some("quaternion"), None) => FieldDescriptor::quaternion(),
            (Some("prime"), Some(p)) => {
                let modulus: u64 = p.parse().map_err(|_| DocError {
                    line: *fline,
                    message: format!("bad modulus `{p}`"),
                })?;
                FieldDescriptor::prime(modulus).map_err(|e| DocError {
                    line: *fline,
                    message: e.to_string(),
                })?
            }
            _ => {
                return err(
                    *fline,
                    "expected `field rational|gaussian|quaternion|prime <p>`",
                )
            }
        };

        // dim
        let Some((dline, dtoks)) = take(&mut pos) else {
            return err(*fline + 1, "expected `dim <n>`");
        };
        if dtoks[0] != "dim" || dtoks.len() != 2 {
            return err(*dline, "expected `dim <n>`");
        }
        let dim: usize = dtoks[1].parse().ok().filter(|&n| n >= 1).ok_or(DocError {
            line: *dline,
            message: "dimension must be a positive integer".into(),
        })?;

        // gram
        let Some((gline, gtoks)) = take(&mut pos) else {
            return err(*dline + 1, "expected `gram`");
        };
        if gtoks[0] != "gram" || gtoks.len() != 1 {
            return err(*gline, "expected `gram`");
        }
        let mut gram: Vec<Vec<Scalar>> = Vec::with_capacity(dim);
        let mut gram_lines: Vec<usize> = Vec::with_capacity(dim);
        for row in 0..dim {
            let Some((rline, rtoks)) = take(&mut pos) else {
                return err(*gline, format!("gram row {} missing", row + 1));
            };
            gram.push(parse_scalar_row(*rline, rtoks, dim, &desc)?);
            gram_lines.push(*rline);
        }
        let space = HermitianSpace::new(desc, gram).map_err(|e| match e {
            SpaceError::NotReflexive(i, j) => DocError {
                line: gram_lines[i.max(j)],
                message: format!(
                    "gram is neither Hermitian nor alternate at entries ({},{})/({},{})",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                ),
            },
            SpaceError::Singular => DocError {
                line: gram_lines[0],
                message: "gram matrix is singular".into(),
            },
            other => DocError {
                line: gram_lines[0],
                message: other.to_string(),
            },
        })?;

        // named subspaces and states
        let mut subspaces: Vec<(String, Subspace)> = Vec::new();
        let mut states: Vec<StateSpec> = Vec::new();
        while let Some((line, toks)) = take(&mut pos) {
            match toks[0].as_str() {
                "subspace" => {
                    if toks.len() != 2 {
                        return err(*line, "expected `subspace <NAME>`");
                    }
                    let name = toks[1].clone();
                    if subspaces.iter().any(|(n, _)| *n == name) {
                        return err(*line, format!("duplicate subspace name `{name}`"));
                    }
                    let mut rows = Vec::new();
                    while let Some((rline, rtoks)) = lines.get(pos) {
                        if matches!(rtoks[0].as_str(), "subspace" | "state") {
                            break;
                        }
                        rows.push(Vector::new(
                            desc,
                            parse_scalar_row(*rline, rtoks, dim, &desc)?,
                        ));
                        pos += 1;
                    }
                    subspaces.push((name, Subspace::span(desc, dim, rows)));
                }
                "state" => {
                    if toks.len() < 3 {
                        return err(*line, "expected `state <NAME> vector|atomic|mixture ...`");
                    }
                    let name = toks[1].clone();
                    if states.iter().any(|s| s.name() == name) {
                        return err(*line, format!("duplicate state name `{name}`"));
                    }
                    let spec = match toks[2].as_str() {
                        "vector" | "atomic" => {
                            let coords = parse_scalar_row(*line, &toks[3..], dim, &desc)?;
                            let vector = Vector::new(desc, coords);
                            if toks[2] == "vector" {
                                StateSpec::Vector { name, vector }
                            } else {
                                StateSpec::Atomic { name, vector }
                            }
                        }
                        "mixture" => {
                            let rest = &toks[3..];
                            if rest.is_empty() || rest.len() % 2 != 0 {
                                return err(*line, "mixture needs weight/name pairs");
                            }
                            let mut parts = Vec::new();
                            for chunk in rest.chunks(2) {
                                let w = Scalar::parse(&chunk[0], &FieldDescriptor::rational())
                                    .map_err(|e| DocError {
                                        line: *line,
                                        message: e.to_string(),
                                    })?
                                    .rational_part()
                                    .unwrap();
                                parts.push((w, chunk[1].clone()));
                            }
                            StateSpec::Mixture { name, parts }
                        }
                        other => return err(*line, format!("unknown state kind `{other}`")),
                    };
                    states.push(spec);
                }
                other => return err(*line, format!("unexpected directive `{other}`")),
            }
        }

        Ok(SpaceDocument {
            space,
            subspaces,
            states,
        })
    }
}

fn parse_scalar_row<S: AsRef<str>>(
    line: usize,
    toks: &[S],
    dim: usize,
    desc: &FieldDescriptor,
) -> Result<Vec<Scalar>, DocError> {
    let toks: Vec<&str> = toks.iter().map(|t| t.as_ref()).collect();
    if toks.len() != dim {
        return err(
            line,
            format!("expected {dim} scalars, found {}", toks.len()),
        );
    }
    toks.iter()
        .map(|t| {
            Scalar::parse(t, desc).map_err(|e| DocError {
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_document() {
        let text = "\
# a GF(3) plane
field prime 3
dim 2
gram
1 0
0 1
subspace M
1 1
subspace N
1 0
0 1
state m1 atomic 1 0
state m2 atomic 0 1
state mix mixture 1/2 m1 1/2 m2
";
        let doc = SpaceDocument::parse(text).unwrap();
        assert_eq!(doc.space.dim(), 2);
        assert_eq!(doc.subspaces.len(), 2);
        assert_eq!(doc.subspace("M").unwrap().dim(), 1);
        assert!(doc.subspace("N").unwrap().is_full());
        assert_eq!(doc.states.len(), 3);
        match &doc.states[2] {
            StateSpec::Mixture { parts, .. } => assert_eq!(parts.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn line_precise_errors() {
        let bad_gram = "\
field rational
dim 2
gram
1 1
0 1
";
        let e = SpaceDocument::parse(bad_gram).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.message.contains("Hermitian"), "{e}");

        let singular = "\
field rational
dim 2
gram
1 1
1 1
";
        let e = SpaceDocument::parse(singular).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("singular"));

        let bad_scalar = "\
field prime 5
dim 2
gram
1 0
0 x
";
        let e = SpaceDocument::parse(bad_scalar).unwrap_err();
        assert_eq!(e.line, 5);

        let bad_modulus = "\
field prime 9
dim 1
gram
1
";
        let e = SpaceDocument::parse(bad_modulus).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("odd prime"));

        let ragged = "\
field rational
dim 3
gram
1 0 0
0 1 0
0 0 1
subspace M
1 0
";
        let e = SpaceDocument::parse(ragged).unwrap_err();
        assert_eq!(e.line, 8);
        assert!(e.message.contains("expected 3 scalars"));
    }

    #[test]
    fn alternate_gram_is_accepted() {
        let sympl = "\
field prime 3
dim 2
gram
0 1
-1 0
";
        let doc = SpaceDocument::parse(sympl).unwrap();
        assert!(doc.space.is_alternate());
    }
}
