//! JSON file formats for presentations and truncated modules.
//!
//! Scalars are decimal strings (`"a/b"` over the rationals), injections are
//! written with 1-based images, and unknown keys are rejected.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::presentation::{from_presentation, Presentation, Relation, Term};
use super::{DegreeData, TruncatedModule, Window};
use crate::error::{input_err, Result};
use crate::fim::{Injection, Morphism, MultiIndex};
use crate::linalg::{Field, FieldConfig, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub gen: usize,
    pub injections: Vec<Vec<usize>>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub degree: Vec<usize>,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub field: FieldConfig,
    pub generators: Vec<Vec<usize>>,
    pub relations: Vec<RelationFile>,
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| input_err!("{what}: {e}"))
}

impl PresentationFile {
    pub fn new<F: Field>(pres: &Presentation<F>, n: usize, field: &F) -> Self {
        PresentationFile {
            m: pres.m,
            n,
            field: field.config(),
            generators: pres.generators.iter().map(|w| w.coords().to_vec()).collect(),
            relations: pres
                .relations
                .iter()
                .map(|rel| RelationFile {
                    degree: rel.degree.coords().to_vec(),
                    terms: rel
                        .terms
                        .iter()
                        .map(|t| TermFile {
                            gen: t.gen,
                            injections: t
                                .map
                                .components()
                                .iter()
                                .map(|c| c.images().iter().map(|x| x + 1).collect())
                                .collect(),
                            coeff: field.format(&t.coeff),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text, "presentation file")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    /// Converts to a presentation over `field`, which must match the file.
    pub fn presentation<F: Field>(&self, field: &F) -> Result<Presentation<F>> {
        if field.config() != self.field {
            return Err(input_err!(
                "file is over {} but the session field is {}",
                self.field.label(),
                field.config().label()
            ));
        }
        let m = self.m;
        let index = |v: &[usize], at: &str| -> Result<MultiIndex> {
            if v.len() != m {
                return Err(input_err!("{at}: expected {m} coordinates, found {}", v.len()));
            }
            Ok(MultiIndex::new(v.to_vec()))
        };
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(g, v)| index(v, &format!("generators[{g}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut relations = Vec::with_capacity(self.relations.len());
        for (k, rel) in self.relations.iter().enumerate() {
            let degree = index(&rel.degree, &format!("relations[{k}].degree"))?;
            let mut terms = Vec::with_capacity(rel.terms.len());
            for (t, term) in rel.terms.iter().enumerate() {
                let at = format!("relations[{k}].terms[{t}]");
                if term.injections.len() != m {
                    return Err(input_err!("{at}.injections: expected {m} lists, found {}", term.injections.len()));
                }
                let comps = term
                    .injections
                    .iter()
                    .zip(degree.coords())
                    .map(|(imgs, &b)| {
                        let zero_based = imgs
                            .iter()
                            .map(|&x| x.checked_sub(1).ok_or_else(|| input_err!("{at}.injections: images are 1-based")))
                            .collect::<Result<Vec<_>>>()?;
                        Injection::new(b, zero_based).map_err(|e| input_err!("{at}.injections: {e}"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let coeff = field.parse(&term.coeff).map_err(|e| input_err!("{at}.coeff: {e}"))?;
                terms.push(Term { gen: term.gen, map: Morphism::new(comps), coeff });
            }
            relations.push(Relation { degree, terms });
        }
        let pres = Presentation { m, generators, relations };
        pres.check()?;
        Ok(pres)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeFile {
    pub n: Vec<usize>,
    pub dim: usize,
    /// Per coordinate, the inclusion matrix as rows, `null` at the top.
    pub incl: Vec<Option<Vec<Vec<String>>>>,
    /// Per coordinate, the adjacent transpositions in order.
    pub transp: Vec<Vec<Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub field: FieldConfig,
    pub degrees: Vec<DegreeFile>,
}

fn matrix_rows<F: Field>(field: &F, a: &Matrix<F>) -> Vec<Vec<String>> {
    (0..a.rows()).map(|r| a.row(r).iter().map(|x| field.format(x)).collect()).collect()
}

fn parse_matrix<F: Field>(field: &F, rows: &[Vec<String>], shape: (usize, usize), at: &str) -> Result<Matrix<F>> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(input_err!("{at}: expected a {}x{} matrix", shape.0, shape.1));
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|x| field.parse(x).map_err(|e| input_err!("{at}: {e}"))).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    Matrix::from_rows(field, shape.1, parsed)
}

impl ModuleFile {
    pub fn new<F: Field>(v: &TruncatedModule<F>) -> Self {
        let f = v.field();
        ModuleFile {
            m: v.m(),
            n: v.top(),
            field: f.config(),
            degrees: v
                .window()
                .degrees()
                .iter()
                .zip(v.degree_data())
                .map(|(n, d)| DegreeFile {
                    n: n.coords().to_vec(),
                    dim: d.dim,
                    incl: d.incl.iter().map(|a| a.as_ref().map(|a| matrix_rows(f, a))).collect(),
                    transp: d.transp.iter().map(|ts| ts.iter().map(|a| matrix_rows(f, a)).collect()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text, "module file")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("module serializes")
    }

    pub fn module<F: Field>(&self, field: &F) -> Result<TruncatedModule<F>> {
        if field.config() != self.field {
            return Err(input_err!(
                "file is over {} but the session field is {}",
                self.field.label(),
                field.config().label()
            ));
        }
        if self.m == 0 {
            return Err(input_err!("m must be at least 1"));
        }
        let window = Window::new(self.m, self.n);
        if self.degrees.len() != window.degrees().len() {
            return Err(input_err!(
                "degrees: expected {} entries for m = {}, N = {}, found {}",
                window.degrees().len(),
                self.m,
                self.n,
                self.degrees.len()
            ));
        }
        let mut by_slot: Vec<Option<&DegreeFile>> = vec![None; self.degrees.len()];
        for (k, d) in self.degrees.iter().enumerate() {
            let n = MultiIndex::new(d.n.clone());
            let slot = (d.n.len() == self.m)
                .then(|| window.index_of(&n))
                .flatten()
                .ok_or_else(|| input_err!("degrees[{k}].n: {n} is not a degree of the window"))?;
            if by_slot[slot].replace(d).is_some() {
                return Err(input_err!("degrees[{k}].n: {n} listed twice"));
            }
        }
        let dims: Vec<usize> = by_slot.iter().map(|d| d.unwrap().dim).collect();
        let data = window
            .degrees()
            .iter()
            .zip(&by_slot)
            .map(|(n, d)| {
                let d = d.unwrap();
                let at = format!("degree {n}");
                if d.incl.len() != self.m || d.transp.len() != self.m {
                    return Err(input_err!("{at}: expected {} coordinates of generator data", self.m));
                }
                let incl = d
                    .incl
                    .iter()
                    .enumerate()
                    .map(|(i, a)| match (a, window.index_of(&n.plus_unit(i))) {
                        (Some(rows), Some(u)) => {
                            parse_matrix(field, rows, (dims[u], d.dim), &format!("{at}.incl[{i}]")).map(Some)
                        }
                        (None, None) => Ok(None),
                        (Some(_), None) => Err(input_err!("{at}.incl[{i}]: inclusion leaves the window")),
                        (None, Some(_)) => Err(input_err!("{at}.incl[{i}]: missing inclusion")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let transp = d
                    .transp
                    .iter()
                    .enumerate()
                    .map(|(i, ts)| {
                        ts.iter()
                            .enumerate()
                            .map(|(j, rows)| parse_matrix(field, rows, (d.dim, d.dim), &format!("{at}.transp[{i}][{j}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(DegreeData { dim: d.dim, incl, transp })
            })
            .collect::<Result<Vec<_>>>()?;
        TruncatedModule::from_parts(field, Arc::clone(&window), data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};
    use crate::module::{free_module, random_presentation};

    #[test]
    fn presentation_roundtrip_is_byte_stable() {
        let f = PrimeField::new(101).unwrap();
        let pres = random_presentation(&f, 2, 1, 2, 2, 3, 11).unwrap();
        let file = PresentationFile::new(&pres, 4, &f);
        let text = file.to_json();
        let back = PresentationFile::from_json(&text).unwrap();
        assert_eq!(back.presentation(&f).unwrap(), pres);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rational_coefficients_roundtrip() {
        let q = Rationals;
        let pres = random_presentation(&q, 1, 2, 3, 2, 3, 4).unwrap();
        let text = PresentationFile::new(&pres, 4, &q).to_json();
        assert_eq!(PresentationFile::from_json(&text).unwrap().presentation(&q).unwrap(), pres);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = r#"{"m":1,"N":2,"field":{"kind":"prime-field","p":101},"generators":[],"relations":[],"extra":1}"#;
        let err = PresentationFile::from_json(text).unwrap_err().to_string();
        assert!(err.contains("extra"), "{err}");
    }

    #[test]
    fn bad_images_are_located() {
        let text = r#"{"m":1,"N":2,"field":{"kind":"prime-field","p":101},"generators":[[1]],
            "relations":[{"degree":[2],"terms":[{"gen":0,"injections":[[3]],"coeff":"1"}]}]}"#;
        let f = PrimeField::new(101).unwrap();
        let err = PresentationFile::from_json(text).unwrap().presentation(&f).unwrap_err().to_string();
        assert!(err.contains("relations[0].terms[0]"), "{err}");
    }

    #[test]
    fn module_roundtrip() {
        let f = PrimeField::new(3).unwrap();
        let v = free_module(&f, &MultiIndex::new(vec![1, 1]), Window::new(2, 3)).unwrap();
        let text = ModuleFile::new(&v).to_json();
        let back = ModuleFile::from_json(&text).unwrap().module(&f).unwrap();
        assert_eq!(ModuleFile::new(&back).to_json(), text);
        let wide = free_module(&f, &MultiIndex::new(vec![1, 1]), Window::new(2, 5)).unwrap();
        let loaded = ModuleFile::from_json(&ModuleFile::new(&wide).to_json()).unwrap().module(&f).unwrap();
        assert_eq!(loaded.top(), 5);
    }
}

/// Either file kind, told apart by its keys.
#[derive(Clone, Debug, PartialEq)]
pub enum InputFile {
    Presentation(PresentationFile),
    Module(ModuleFile),
}

impl InputFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = parse_json(text, "input file")?;
        if value.get("generators").is_some() {
            Ok(InputFile::Presentation(parse_json(text, "presentation file")?))
        } else if value.get("degrees").is_some() {
            Ok(InputFile::Module(parse_json(text, "module file")?))
        } else {
            Err(input_err!("input file has neither 'generators' nor 'degrees'"))
        }
    }

    pub fn field(&self) -> FieldConfig {
        match self {
            InputFile::Presentation(p) => p.field,
            InputFile::Module(m) => m.field,
        }
    }

    /// The module on the file's window, and the presentation when there is one.
    pub fn load<F: Field>(&self, field: &F) -> Result<(TruncatedModule<F>, Option<Presentation<F>>)> {
        match self {
            InputFile::Presentation(file) => {
                let pres = file.presentation(field)?;
                let (v, _) = from_presentation(&pres, Window::new(file.m, file.n), field)?;
                Ok((v, Some(pres)))
            }
            InputFile::Module(file) => Ok((file.module(field)?, None)),
        }
    }
}
