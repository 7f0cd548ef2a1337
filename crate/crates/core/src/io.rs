//! JSON input and output of matroids and flag matroids.
//!
//! Elements and vertices are 1-indexed in files and 0-indexed in memory.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::flag::FlagMatroid;
use crate::matroid::{parse_rational, Matroid};
use crate::subset::Subset;

#[derive(Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum MatroidJson {
    Uniform { r: usize, n: usize },
    Bases { n: usize, bases: Vec<Vec<usize>> },
    Matrix { rows: Vec<Vec<String>> },
    Graphic { vertices: usize, edges: Vec<[usize; 2]> },
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum DocumentJson {
    Flag {
        constituents: Vec<MatroidJson>,
        #[serde(default)]
        diagram: Option<String>,
    },
    #[serde(untagged)]
    Matroid(MatroidJson),
}

/// What an input file describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Matroid(Matroid),
    Flag(FlagMatroid),
}

impl Input {
    /// A single matroid is read as a one-step flag.
    pub fn into_flag(self) -> FlagMatroid {
        match self {
            Input::Matroid(m) => FlagMatroid::single(m),
            Input::Flag(f) => f,
        }
    }
}

/// Which exponent convention a flag document asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Diagram {
    /// The flag-geometric push-pull.
    #[default]
    Flag,
    /// The Las Vergnas style exponents on the first and last constituent.
    LasVergnas,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub input: Input,
    pub diagram: Diagram,
}

/// Parses a matroid or flag document.
pub fn parse_document(text: &str) -> Result<Document> {
    let doc: DocumentJson = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    match doc {
        DocumentJson::Matroid(m) => Ok(Document { input: Input::Matroid(build(m)?), diagram: Diagram::Flag }),
        DocumentJson::Flag { constituents, diagram } => {
            let diagram = match diagram.as_deref() {
                None | Some("flag") => Diagram::Flag,
                Some("lv") => Diagram::LasVergnas,
                Some(other) => return Err(Error::Malformed(format!("unknown diagram {other:?}"))),
            };
            let ms = constituents.into_iter().map(build).collect::<Result<Vec<_>>>()?;
            Ok(Document { input: Input::Flag(FlagMatroid::new(ms)?), diagram })
        }
    }
}

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    match parse_document(text)?.input {
        Input::Matroid(m) => Ok(m),
        Input::Flag(_) => Err(Error::Malformed("expected a matroid, found a flag".into())),
    }
}

pub fn parse_flag(text: &str) -> Result<FlagMatroid> {
    Ok(parse_document(text)?.input.into_flag())
}

fn one_based(i: usize, n: usize, what: &str) -> Result<usize> {
    if i == 0 || i > n {
        return Err(Error::Malformed(format!("{what} {i} outside 1..={n}")));
    }
    Ok(i - 1)
}

fn build(m: MatroidJson) -> Result<Matroid> {
    match m {
        MatroidJson::Uniform { r, n } => Matroid::uniform(r, n),
        MatroidJson::Bases { n, bases } => {
            let r = bases.first().map_or(0, Vec::len);
            let mut sets = Vec::with_capacity(bases.len());
            for b in &bases {
                let elems = b.iter().map(|&i| one_based(i, n, "element")).collect::<Result<Vec<_>>>()?;
                let s = Subset::from_elems(elems);
                if s.len() != b.len() {
                    return Err(Error::Malformed(format!("basis {b:?} repeats an element")));
                }
                sets.push(s);
            }
            Matroid::from_bases(n, r, sets)
        }
        MatroidJson::Matrix { rows } => {
            let rows = rows
                .iter()
                .map(|row| row.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Matroid::from_matrix(&rows)
        }
        MatroidJson::Graphic { vertices, edges } => {
            let edges = edges
                .iter()
                .map(|&[a, b]| Ok((one_based(a, vertices, "vertex")?, one_based(b, vertices, "vertex")?)))
                .collect::<Result<Vec<_>>>()?;
            Matroid::graphic(vertices, &edges)
        }
    }
}

/// Basis-list form of a matroid, 1-indexed.
pub fn matroid_to_json(m: &Matroid) -> Value {
    let bases: Vec<Vec<usize>> = m.bases().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
    json!({"type": "bases", "n": m.n(), "bases": bases})
}

pub fn flag_to_json(f: &FlagMatroid) -> Value {
    json!({"type": "flag", "constituents": f.constituents().iter().map(matroid_to_json).collect::<Vec<_>>()})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_matroid_forms() {
        assert_eq!(parse_matroid(r#"{"type":"uniform","r":1,"n":2}"#).unwrap(), Matroid::uniform(1, 2).unwrap());
        let b = parse_matroid(r#"{"type":"bases","n":3,"bases":[[1,2],[1,3],[2,3]]}"#).unwrap();
        assert_eq!(b, Matroid::uniform(2, 3).unwrap());
        let m = parse_matroid(r#"{"type":"matrix","rows":[["1","0","1/2"],["0","1","1/2"]]}"#).unwrap();
        assert_eq!(m, Matroid::uniform(2, 3).unwrap());
        let g = parse_matroid(r#"{"type":"graphic","vertices":3,"edges":[[1,2],[2,3],[1,3]]}"#).unwrap();
        assert_eq!(g, Matroid::uniform(2, 3).unwrap());
    }

    #[test]
    fn flag_and_diagram() {
        let text = r#"{"type":"flag","diagram":"lv","constituents":[{"type":"uniform","r":2,"n":4},{"type":"uniform","r":3,"n":4}]}"#;
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.diagram, Diagram::LasVergnas);
        assert_eq!(doc.input.into_flag().ranks(), vec![2, 3]);
    }

    #[test]
    fn roundtrip() {
        let f = FlagMatroid::new(vec![Matroid::uniform(1, 3).unwrap(), Matroid::uniform(2, 3).unwrap()]).unwrap();
        assert_eq!(parse_flag(&flag_to_json(&f).to_string()).unwrap(), f);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "{",
            r#"{"type":"uniform","r":3,"n":2}"#,
            r#"{"type":"bases","n":2,"bases":[[1],[3]]}"#,
            r#"{"type":"bases","n":4,"bases":[[1,2],[3,4]]}"#,
            r#"{"type":"matrix","rows":[["1","x"]]}"#,
            r#"{"type":"graphic","vertices":2,"edges":[[1,3]]}"#,
            r#"{"type":"flag","constituents":[{"type":"uniform","r":2,"n":3},{"type":"uniform","r":1,"n":3}]}"#,
            r#"{"type":"flag","diagram":"x","constituents":[{"type":"uniform","r":1,"n":3}]}"#,
            r#"{"type":"circle"}"#,
        ] {
            assert!(parse_document(text).is_err(), "{text}");
        }
    }
}
