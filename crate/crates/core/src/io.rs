//! JSON interchange for morphisms and the structures built from them.

use crate::error::{Error, Result};
use crate::frobenius::FrobeniusMonoid;
use crate::hilb::{c, Morphism, Shape};
use crate::morita::DaggerBimodule;
use crate::qgraph::{from_classical_graph, QuantumGraph};
use crate::qiso::{EndoFrobenius, QuantumIso};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    dom: Vec<usize>,
    cod: Vec<usize>,
    entries: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct MonoidJson {
    dim: usize,
    mult: MorphismJson,
    unit: MorphismJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GraphJson {
    Full { monoid: MonoidJson, gamma: MorphismJson },
    Classical { classical_adj: Vec<Vec<i64>> },
}

#[derive(Serialize, Deserialize)]
struct IsoJson {
    source: GraphJson,
    target: GraphJson,
    h_dim: usize,
    #[serde(rename = "P")]
    p: MorphismJson,
}

#[derive(Serialize, Deserialize)]
struct EndoJson {
    base: GraphJson,
    h_dim: usize,
    beta: MorphismJson,
    mult: MorphismJson,
    unit: MorphismJson,
}

#[derive(Serialize, Deserialize)]
struct BimoduleJson {
    left: MonoidJson,
    right: MonoidJson,
    m_dim: usize,
    rho: MorphismJson,
}

fn enc_morphism(f: &Morphism) -> MorphismJson {
    MorphismJson {
        dom: f.dom().factors().to_vec(),
        cod: f.cod().factors().to_vec(),
        entries: f.entries().iter().map(|z| [z.re, z.im]).collect(),
    }
}

fn dec_morphism(j: MorphismJson) -> Result<Morphism> {
    let entries: Vec<_> = j.entries.iter().map(|[re, im]| c(*re, *im)).collect();
    Morphism::from_entries(Shape::new(j.dom)?, Shape::new(j.cod)?, &entries)
}

fn enc_monoid(a: &FrobeniusMonoid) -> MonoidJson {
    MonoidJson { dim: a.dim, mult: enc_morphism(&a.mult), unit: enc_morphism(&a.unit) }
}

fn dec_monoid(j: MonoidJson) -> Result<FrobeniusMonoid> {
    let a = FrobeniusMonoid::new(dec_morphism(j.mult)?, dec_morphism(j.unit)?)?;
    if a.dim != j.dim {
        return Err(Error::Invalid(format!("monoid dim {} but mult acts on {}", j.dim, a.dim)));
    }
    Ok(a)
}

fn enc_graph(x: &QuantumGraph) -> GraphJson {
    GraphJson::Full { monoid: enc_monoid(&x.monoid), gamma: enc_morphism(&x.gamma) }
}

fn dec_graph(j: GraphJson) -> Result<QuantumGraph> {
    match j {
        GraphJson::Full { monoid, gamma } => QuantumGraph::new(dec_monoid(monoid)?, dec_morphism(gamma)?),
        GraphJson::Classical { classical_adj } => from_classical_graph(&classical_adj),
    }
}

/// Values with a JSON form.
pub trait Json: Sized {
    fn to_value(&self) -> Value;
    fn from_value(v: Value) -> Result<Self>;

    fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }

    fn from_json_str(s: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(s)?)
    }

    fn read(path: impl AsRef<Path>) -> Result<Self> {
        let p = path.as_ref();
        let s = std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
        Self::from_json_str(&s)
    }
}

impl Json for Morphism {
    fn to_value(&self) -> Value {
        serde_json::to_value(enc_morphism(self)).unwrap()
    }
    fn from_value(v: Value) -> Result<Self> {
        dec_morphism(serde_json::from_value(v)?)
    }
}

impl Json for FrobeniusMonoid {
    fn to_value(&self) -> Value {
        serde_json::to_value(enc_monoid(self)).unwrap()
    }
    fn from_value(v: Value) -> Result<Self> {
        dec_monoid(serde_json::from_value(v)?)
    }
}

impl Json for QuantumGraph {
    fn to_value(&self) -> Value {
        serde_json::to_value(enc_graph(self)).unwrap()
    }
    fn from_value(v: Value) -> Result<Self> {
        dec_graph(serde_json::from_value(v)?)
    }
}

impl Json for QuantumIso {
    fn to_value(&self) -> Value {
        let j = IsoJson {
            source: enc_graph(&self.source),
            target: enc_graph(&self.target),
            h_dim: self.h_dim,
            p: enc_morphism(&self.p),
        };
        serde_json::to_value(j).unwrap()
    }
    fn from_value(v: Value) -> Result<Self> {
        let j: IsoJson = serde_json::from_value(v)?;
        QuantumIso::new(dec_graph(j.source)?, dec_graph(j.target)?, j.h_dim, dec_morphism(j.p)?)
    }
}

impl Json for EndoFrobenius {
    fn to_value(&self) -> Value {
        let j = EndoJson {
            base: enc_graph(&self.base),
            h_dim: self.h_dim,
            beta: enc_morphism(&self.beta),
            mult: enc_morphism(&self.mult),
            unit: enc_morphism(&self.unit),
        };
        serde_json::to_value(j).unwrap()
    }
    fn from_value(v: Value) -> Result<Self> {
        let j: EndoJson = serde_json::from_value(v)?;
        EndoFrobenius::new(
            dec_graph(j.base)?,
            j.h_dim,
            dec_morphism(j.beta)?,
            dec_morphism(j.mult)?,
            dec_morphism(j.unit)?,
        )
    }
}

impl Json for DaggerBimodule {
    fn to_value(&self) -> Value {
        let j = BimoduleJson {
            left: enc_monoid(&self.left),
            right: enc_monoid(&self.right),
            m_dim: self.m_dim,
            rho: enc_morphism(&self.rho),
        };
        serde_json::to_value(j).unwrap()
    }
    fn from_value(v: Value) -> Result<Self> {
        let j: BimoduleJson = serde_json::from_value(v)?;
        DaggerBimodule::new(dec_monoid(j.left)?, dec_monoid(j.right)?, j.m_dim, dec_morphism(j.rho)?)
    }
}
