//! Serialization of the workbench's file formats.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use qphase::model::{classical_model, enumerate_qstructures, random_qstructure, RandomModelConfig};
use qphase::parse_vector;
use qphase::proof::{ProofTree, RuleTag};
use qphase::set::ElemSet;
use qphase::syntax::{parse_sequent, Countermodel, Provenance};
use qphase::QStructure;

/// A model file: either an explicit table or a generator recipe, plus an
/// optional name and optional display labels.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct ModelFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
    /// Row-major composition table, one row per left factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dot: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub garbage: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recipe: Option<Recipe>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    Classical {
        variables: Vec<String>,
    },
    Ray {
        /// Rational vectors like `"1,0"`, `"1/2,-3"`.
        rays: Vec<String>,
        ambient_dim: usize,
    },
    Random {
        size: usize,
        seed: u64,
        #[serde(default)]
        projective: bool,
        #[serde(default)]
        allow_unit_garbage: bool,
    },
    Enumerated {
        size: usize,
        index: u64,
    },
}

impl ModelFile {
    pub fn from_structure(name: Option<String>, q: &QStructure) -> ModelFile {
        ModelFile {
            name,
            size: Some(q.size()),
            unit: Some(q.unit()),
            dot: Some(q.rows()),
            garbage: Some(q.garbage().iter().collect()),
            labels: Some(q.labels().to_vec()),
            recipe: None,
        }
    }

    /// Builds the structure. Shape problems and malformed recipes are
    /// errors here; axiom violations are not (callers decide what an
    /// invalid table means for them).
    pub fn build(&self) -> Result<QStructure> {
        let mut q = match (&self.recipe, &self.dot) {
            (Some(_), Some(_)) => bail!("model file has both an explicit table and a recipe"),
            (None, None) => bail!("model file needs either an explicit table or a recipe"),
            (Some(recipe), None) => build_recipe(recipe)?,
            (None, Some(dot)) => {
                let unit = self.unit.context("explicit model needs a unit")?;
                let garbage = self.garbage.clone().unwrap_or_default();
                if let Some(size) = self.size {
                    if size != dot.len() {
                        bail!("size field is {size} but the table has {} rows", dot.len());
                    }
                }
                QStructure::new(dot.clone(), unit, garbage, None)
                    .map_err(|e| anyhow!("malformed table: {e}"))?
            }
        };
        if let Some(labels) = &self.labels {
            q.set_labels(labels.clone())
                .map_err(|e| anyhow!("bad labels: {e}"))?;
        }
        Ok(q)
    }
}

fn build_recipe(recipe: &Recipe) -> Result<QStructure> {
    match recipe {
        Recipe::Classical { variables } => {
            classical_model(variables).map_err(|e| anyhow!("classical recipe: {e}"))
        }
        Recipe::Ray { rays, ambient_dim } => {
            let vectors = rays
                .iter()
                .map(|r| parse_vector(r))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| anyhow!("ray recipe: {e}"))?;
            let gaps = qphase::model::ray_orthocomplement_gaps(&vectors, *ambient_dim);
            if !gaps.is_empty() {
                eprintln!(
                    "warning: ray list is not closed under orthocomplement (ray(s) {}); \
                     some expected sets will not be facts",
                    gaps.iter()
                        .map(|i| format!("\"{}\"", rays[*i]))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            qphase::model::ray_model(&vectors, *ambient_dim).map_err(|e| anyhow!("ray recipe: {e}"))
        }
        Recipe::Random {
            size,
            seed,
            projective,
            allow_unit_garbage,
        } => {
            let cfg = RandomModelConfig::new(*size)
                .projective(*projective)
                .allow_unit_garbage(*allow_unit_garbage);
            Ok(random_qstructure(&cfg, *seed)
                .map_err(|e| anyhow!("random recipe: {e}"))?
                .structure)
        }
        Recipe::Enumerated { size, index } => enumerate_qstructures(*size)
            .map_err(|e| anyhow!("enumerated recipe: {e}"))?
            .nth(*index as usize)
            .context("enumerated recipe index is past the end of the enumeration"),
    }
}

/// Assignment files map atom names to element lists; elements may be
/// given by label or by index.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRef {
    Index(usize),
    Name(String),
}

pub type AssignmentFile = BTreeMap<String, Vec<ElemRef>>;

pub fn resolve_elem(q: &QStructure, r: &ElemRef) -> Result<usize> {
    match r {
        ElemRef::Index(i) => {
            if *i < q.size() {
                Ok(*i)
            } else {
                bail!("element index {i} out of range (size {})", q.size())
            }
        }
        ElemRef::Name(name) => q
            .labels()
            .iter()
            .position(|l| l == name)
            .with_context(|| format!("no element labeled '{name}'")),
    }
}

/// Resolves an assignment file against a structure, checking every bound
/// set is a fact.
pub fn resolve_assignment<'q>(
    q: &'q QStructure,
    file: &AssignmentFile,
) -> Result<qphase::syntax::Assignment<'q>> {
    let mut asg = qphase::syntax::Assignment::new(q);
    for (atom, elems) in file {
        let mut set = ElemSet::EMPTY;
        for r in elems {
            set.insert(resolve_elem(q, r)?);
        }
        asg.bind(atom.clone(), set)
            .map_err(|e| anyhow!("binding '{atom}' to {}: {e}", q.format_set(set)))?;
    }
    Ok(asg)
}

/// Proof files are nested rule applications with sequents as text.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofFile {
    pub rule: String,
    pub conclusion: String,
    #[serde(default)]
    pub premises: Vec<ProofFile>,
}

impl ProofFile {
    pub fn from_tree(tree: &ProofTree) -> ProofFile {
        ProofFile {
            rule: tree.rule.name().to_string(),
            conclusion: tree.conclusion.to_string(),
            premises: tree.premises.iter().map(ProofFile::from_tree).collect(),
        }
    }

    pub fn to_tree(&self) -> Result<ProofTree> {
        let rule: RuleTag = self
            .rule
            .parse()
            .map_err(|e| anyhow!("{e}"))?;
        let conclusion = parse_sequent(&self.conclusion)
            .map_err(|e| anyhow!("in conclusion '{}': {e}", self.conclusion))?;
        let premises = self
            .premises
            .iter()
            .map(ProofFile::to_tree)
            .collect::<Result<Vec<_>>>()?;
        Ok(ProofTree {
            conclusion,
            rule,
            premises,
        })
    }
}

/// Self-contained countermodel file: the refuted sequent, the model, the
/// falsifying assignment (element indices), and the replay certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountermodelFile {
    pub sequent: String,
    pub model: ModelFile,
    pub assignment: BTreeMap<String, Vec<usize>>,
    pub provenance: ProvenanceFile,
    pub probe: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProvenanceFile {
    Enumerated {
        size: usize,
        structure_index: u64,
        assignment_index: u64,
    },
    Random {
        size: usize,
        structure_seed: u64,
    },
}

impl CountermodelFile {
    pub fn new(sequent: &qphase::syntax::Sequent, cm: &Countermodel) -> CountermodelFile {
        CountermodelFile {
            sequent: sequent.to_string(),
            model: ModelFile::from_structure(Some("countermodel".to_string()), &cm.structure),
            assignment: cm
                .assignment
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().collect()))
                .collect(),
            provenance: match cm.provenance {
                Provenance::Enumerated {
                    size,
                    structure_index,
                    assignment_index,
                } => ProvenanceFile::Enumerated {
                    size,
                    structure_index,
                    assignment_index,
                },
                Provenance::Random {
                    size,
                    structure_seed,
                } => ProvenanceFile::Random {
                    size,
                    structure_seed,
                },
            },
            probe: cm.probe,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_model_file_round_trips() {
        let q = classical_model(&["p".to_string()]).unwrap();
        let file = ModelFile::from_structure(Some("c1".to_string()), &q);
        let json = serde_json::to_string(&file).unwrap();
        let back: ModelFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), q);
    }

    #[test]
    fn recipe_forms_build() {
        let ray: ModelFile = serde_json::from_str(
            r#"{"recipe":{"kind":"ray","rays":["1,0","0,1"],"ambient_dim":2}}"#,
        )
        .unwrap();
        assert_eq!(ray.build().unwrap().size(), 4);

        let classical: ModelFile =
            serde_json::from_str(r#"{"recipe":{"kind":"classical","variables":["p","q"]}}"#)
                .unwrap();
        assert_eq!(classical.build().unwrap().size(), 6);

        let random: ModelFile =
            serde_json::from_str(r#"{"recipe":{"kind":"random","size":3,"seed":1}}"#).unwrap();
        let a = random.build().unwrap();
        let b = random.build().unwrap();
        assert_eq!(a, b);

        let enumerated: ModelFile =
            serde_json::from_str(r#"{"recipe":{"kind":"enumerated","size":2,"index":3}}"#).unwrap();
        assert!(enumerated.build().unwrap().validate().is_valid());
    }

    #[test]
    fn model_file_shape_errors() {
        let neither: ModelFile = serde_json::from_str(r#"{"name":"x"}"#).unwrap();
        assert!(neither.build().is_err());
        let bad_size: ModelFile =
            serde_json::from_str(r#"{"size":3,"unit":0,"dot":[[0]],"garbage":[]}"#).unwrap();
        assert!(bad_size.build().is_err());
    }

    #[test]
    fn assignments_resolve_labels_and_indices() {
        let q = classical_model(&["p".to_string()]).unwrap();
        let file: AssignmentFile =
            serde_json::from_str(r#"{"a": ["0", 2], "b": [3]}"#).unwrap();
        let asg = resolve_assignment(&q, &file).unwrap();
        // label "0" is the zero element (index 3), index 2 is the {p} row
        assert_eq!(asg.get("a").unwrap(), ElemSet::from_indices([3, 2]));
        assert_eq!(asg.get("b").unwrap(), ElemSet::from_indices([3]));

        let bad: AssignmentFile = serde_json::from_str(r#"{"a": [0]}"#).unwrap();
        assert!(resolve_assignment(&q, &bad).is_err());
    }

    #[test]
    fn proof_files_round_trip() {
        let json = r#"{
            "rule": "Ex1",
            "conclusion": "|- a, ~a",
            "premises": [{"rule": "AxId", "conclusion": "|- ~a, a"}]
        }"#;
        let file: ProofFile = serde_json::from_str(json).unwrap();
        let tree = file.to_tree().unwrap();
        assert_eq!(tree.rule, RuleTag::Ex1);
        assert_eq!(tree.premises.len(), 1);
        let back = ProofFile::from_tree(&tree);
        assert_eq!(back.to_tree().unwrap(), tree);
    }
}
