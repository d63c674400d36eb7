//! JSON persistence of mapping instances.
//!
//! ```json
//! {"dimension": 3, "mode": "rational", "flags": {"s1": 1, "s2": 0, "s3": 1},
//!  "mapping": "general", "seed": 7,
//!  "fields": {"L": {"valence": [1, 2], "value": ["1/2", ...], "grad": [...]}, ...}}
//! ```
//!
//! Arrays are flat and row-major in the tensor layout, uppers first, and the
//! gradient's trailing slot is the differentiation index. Rationals are written
//! as `"num/den"` strings, floats as JSON numbers. Keys are emitted in a fixed
//! order, so the same instance always serializes to the same bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::connection::ConnectionSpace;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::mappings::{
    check_antisymmetric_lower, check_symmetric_lower, AgmBlock, Flags, MappingInstance,
    MappingKind, SpaceFields,
};
use crate::scalar::{Mode, Scalar};
use crate::tensor::{Tensor, Valence};
use crate::Rational;

/// One stored field. `grad` is absent for the plain tensors `agm_nu`, `agm_mu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldEntry {
    pub valence: [usize; 2],
    pub value: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grad: Option<Vec<serde_json::Value>>,
}

/// The on-disk form of a [`MappingInstance`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    pub mode: Mode,
    pub flags: Flags,
    pub mapping: MappingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literal_p2: Option<bool>,
    pub seed: u64,
    pub fields: BTreeMap<String, FieldEntry>,
}

/// A loaded instance in the arithmetic its file declares.
#[derive(Clone, Debug)]
pub enum AnyInstance {
    Rational(MappingInstance<Rational>),
    Float(MappingInstance<f64>),
}

const GENERAL_FIELDS: [(&str, Valence); 11] = [
    ("L", Valence::new(1, 2)),
    ("L_bar", Valence::new(1, 2)),
    ("f", Valence::new(1, 1)),
    ("f_bar", Valence::new(1, 1)),
    ("phi", Valence::new(1, 2)),
    ("phi_bar", Valence::new(1, 2)),
    ("sigma", Valence::new(0, 1)),
    ("sigma_bar", Valence::new(0, 1)),
    ("u", Valence::new(0, 1)),
    ("u_bar", Valence::new(0, 1)),
    ("xi", Valence::new(1, 2)),
];

const AGM_FIELDS: [(&str, Valence, bool); 4] = [
    ("agm_phi", Valence::new(1, 0), true),
    ("agm_nu", Valence::new(0, 1), false),
    ("agm_mu", Valence::new(0, 0), false),
    ("agm_sigma", Valence::new(0, 2), true),
];

fn entry<S: Scalar>(value: &Tensor<S>, grad: Option<&Tensor<S>>) -> FieldEntry {
    let v = value.valence();
    FieldEntry {
        valence: [v.upper, v.lower],
        value: value.data().iter().map(Scalar::to_json).collect(),
        grad: grad.map(|g| g.data().iter().map(Scalar::to_json).collect()),
    }
}

fn jet_entry<S: Scalar>(jet: &Jet<S>) -> FieldEntry {
    entry(jet.value(), Some(jet.grad()))
}

impl InstanceFile {
    pub fn from_instance<S: Scalar>(inst: &MappingInstance<S>) -> Self {
        let mut fields = BTreeMap::new();
        let mut put = |name: &str, e: FieldEntry| {
            fields.insert(name.to_string(), e);
        };
        for (suffix, space) in [("", &inst.source), ("_bar", &inst.target)] {
            put(&format!("L{suffix}"), jet_entry(space.connection.full()));
            put(&format!("u{suffix}"), jet_entry(&space.u));
            put(&format!("sigma{suffix}"), jet_entry(&space.sigma));
            put(&format!("f{suffix}"), jet_entry(&space.f));
            put(&format!("phi{suffix}"), jet_entry(&space.phi));
        }
        put("xi", jet_entry(&inst.xi));
        if let Some(agm) = &inst.agm {
            put("agm_phi", jet_entry(&agm.phi));
            put("agm_nu", entry(&agm.nu, None));
            put(
                "agm_mu",
                entry(&Tensor::scalar(inst.dim, agm.mu.clone()), None),
            );
            put("agm_sigma", jet_entry(&agm.sigma));
        }
        Self {
            dimension: inst.dim,
            mode: S::MODE,
            flags: inst.flags,
            mapping: inst.kind,
            p: inst.agm.as_ref().map(|a| a.p),
            literal_p2: inst.agm.as_ref().and_then(|a| a.literal_p2.then_some(true)),
            seed: inst.seed,
            fields,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json_str(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Format(format!("invalid instance file: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string())
            .map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&src)
    }

    /// Rebuilds the instance in the declared mode.
    pub fn to_any(&self) -> Result<AnyInstance> {
        Ok(match self.mode {
            Mode::Rational => AnyInstance::Rational(self.to_instance()?),
            Mode::Float => AnyInstance::Float(self.to_instance()?),
        })
    }

    /// Rebuilds the instance, checking shapes, the flag combination of the
    /// mapping kind and the declared symmetries of `phi`, `phi_bar`, `xi` and
    /// `agm_sigma`. Whether the stored `L_bar` agrees with the rule is left to
    /// the consistency checks of a report.
    pub fn to_instance<S: Scalar>(&self) -> Result<MappingInstance<S>> {
        if self.mode != S::MODE {
            return Err(Error::Format(format!(
                "file is in {} mode, requested {}",
                self.mode,
                S::MODE
            )));
        }
        let n = self.dimension;
        if n < 2 {
            return Err(Error::Format(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        match self.mapping {
            MappingKind::Geodesic if self.flags != Flags::geodesic() => {
                return Err(Error::Format(
                    "geodesic instances need s1=1, s2=0, s3=0".into(),
                ))
            }
            MappingKind::Agm3 if self.flags != Flags::agm3() => {
                return Err(Error::Format("agm3 instances need s1=1, s2=0, s3=1".into()))
            }
            _ => {}
        }
        let agm = self.mapping == MappingKind::Agm3;
        if agm != self.p.is_some() {
            return Err(Error::Format(
                "`p` is required for agm3 instances and only for them".into(),
            ));
        }
        let mut allowed: Vec<&str> = GENERAL_FIELDS.iter().map(|(n, _)| *n).collect();
        if agm {
            allowed.extend(AGM_FIELDS.iter().map(|(n, _, _)| *n));
        }
        if let Some(extra) = self.fields.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Format(format!("unexpected field `{extra}`")));
        }

        let jet = |name: &str| -> Result<Jet<S>> {
            let (_, valence) = GENERAL_FIELDS
                .iter()
                .find(|(n, _)| *n == name)
                .copied()
                .or_else(|| {
                    AGM_FIELDS
                        .iter()
                        .find(|(n, _, _)| *n == name)
                        .map(|(n, v, _)| (*n, *v))
                })
                .expect("known field");
            let (value, grad) = self.read(name, valence, true)?;
            Jet::new(value, grad.expect("gradient requested"))
                .map_err(|e| Error::Format(format!("field `{name}`: {e}")))
        };
        let space = |suffix: &str| -> Result<SpaceFields<S>> {
            let connection = ConnectionSpace::new(jet(&format!("L{suffix}"))?)?;
            SpaceFields::new(
                connection,
                jet(&format!("u{suffix}"))?,
                jet(&format!("sigma{suffix}"))?,
                jet(&format!("f{suffix}"))?,
                jet(&format!("phi{suffix}"))?,
            )
            .map_err(|e| Error::Format(e.to_string()))
        };
        let source = space("")?;
        let target = space("_bar")?;
        let xi = jet("xi")?;
        check_antisymmetric_lower(&xi, "xi").map_err(|e| Error::Format(e.to_string()))?;

        let agm = match self.p {
            None => None,
            Some(p) => {
                if p != 1 && p != 2 {
                    return Err(Error::Format(format!("p must be 1 or 2, got {p}")));
                }
                let sigma = jet("agm_sigma")?;
                check_symmetric_lower(&sigma, "agm_sigma")
                    .map_err(|e| Error::Format(e.to_string()))?;
                let (nu, _) = self.read::<S>("agm_nu", Valence::new(0, 1), false)?;
                let (mu, _) = self.read::<S>("agm_mu", Valence::new(0, 0), false)?;
                Some(AgmBlock {
                    p,
                    literal_p2: self.literal_p2.unwrap_or(false),
                    phi: jet("agm_phi")?,
                    nu,
                    mu: mu.as_scalar().expect("(0,0) tensor").clone(),
                    sigma,
                })
            }
        };
        if self.literal_p2.is_some() && self.p != Some(2) {
            return Err(Error::Format(
                "`literal_p2` only applies to agm3 instances with p = 2".into(),
            ));
        }
        Ok(MappingInstance {
            dim: n,
            flags: self.flags,
            kind: self.mapping,
            seed: self.seed,
            source,
            target,
            xi,
            agm,
        })
    }

    fn read<S: Scalar>(
        &self,
        name: &str,
        valence: Valence,
        with_grad: bool,
    ) -> Result<(Tensor<S>, Option<Tensor<S>>)> {
        let e = self
            .fields
            .get(name)
            .ok_or_else(|| Error::Format(format!("missing field `{name}`")))?;
        if e.valence != [valence.upper, valence.lower] {
            return Err(Error::Format(format!(
                "field `{name}` must have valence [{}, {}], got {:?}",
                valence.upper, valence.lower, e.valence
            )));
        }
        let n = self.dimension;
        let parse = |values: &[serde_json::Value], v: Valence, what: &str| -> Result<Tensor<S>> {
            let want = n.pow(v.rank() as u32);
            if values.len() != want {
                return Err(Error::Format(format!(
                    "field `{name}` {what}: expected {want} entries, got {}",
                    values.len()
                )));
            }
            let data = values
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    S::from_json(x).ok_or_else(|| {
                        Error::Format(format!(
                            "field `{name}` {what}[{k}]: `{x}` is not a {} scalar",
                            S::MODE
                        ))
                    })
                })
                .collect::<Result<Vec<S>>>()?;
            Tensor::new(n, v, data)
        };
        let value = parse(&e.value, valence, "value")?;
        let grad = match (&e.grad, with_grad) {
            (Some(g), true) => Some(parse(
                g,
                Valence::new(valence.upper, valence.lower + 1),
                "grad",
            )?),
            (None, false) => None,
            (None, true) => {
                return Err(Error::Format(format!(
                    "field `{name}` needs a `grad` array"
                )))
            }
            (Some(_), false) => {
                return Err(Error::Format(format!(
                    "field `{name}` takes no `grad` array"
                )))
            }
        };
        Ok((value, grad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{generate, generate_agm3, GenOptions};

    fn general() -> MappingInstance<Rational> {
        generate(GenOptions {
            dim: 3,
            seed: 11,
            flags: Flags::all()[7],
            kind: MappingKind::General,
        })
        .unwrap()
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let inst = general();
        let file = InstanceFile::from_instance(&inst);
        let text = file.to_json_string();
        let back = InstanceFile::from_json_str(&text).unwrap();
        assert_eq!(back, file);
        let rebuilt: MappingInstance<Rational> = back.to_instance().unwrap();
        assert_eq!(InstanceFile::from_instance(&rebuilt).to_json_string(), text);
        assert_eq!(
            rebuilt.target.connection.full(),
            inst.target.connection.full()
        );
    }

    #[test]
    fn agm_and_float_round_trip() {
        let inst = generate_agm3::<Rational>(3, 4, 2, true).unwrap();
        let text = InstanceFile::from_instance(&inst).to_json_string();
        let back: MappingInstance<Rational> = InstanceFile::from_json_str(&text)
            .unwrap()
            .to_instance()
            .unwrap();
        let agm = back.agm.unwrap();
        assert_eq!((agm.p, agm.literal_p2), (2, true));
        assert_eq!(agm.mu, inst.agm.as_ref().unwrap().mu);

        let f = generate::<f64>(GenOptions {
            dim: 3,
            seed: 2,
            flags: Flags::all()[5],
            kind: MappingKind::General,
        })
        .unwrap();
        let text = InstanceFile::from_instance(&f).to_json_string();
        let file = InstanceFile::from_json_str(&text).unwrap();
        assert!(matches!(file.to_any().unwrap(), AnyInstance::Float(_)));
        assert_eq!(
            InstanceFile::from_instance(&file.to_instance::<f64>().unwrap()).to_json_string(),
            text
        );
    }

    #[test]
    fn rejects_malformed_files() {
        let good = InstanceFile::from_instance(&general());
        let bad = |f: &dyn Fn(&mut InstanceFile)| {
            let mut file = good.clone();
            f(&mut file);
            assert!(matches!(
                file.to_instance::<Rational>(),
                Err(Error::Format(_))
            ));
        };
        bad(&|f| f.mode = Mode::Float);
        bad(&|f| {
            f.fields.remove("xi");
        });
        bad(&|f| {
            f.fields.get_mut("u").unwrap().value.pop();
        });
        bad(&|f| f.fields.get_mut("u").unwrap().valence = [1, 0]);
        bad(&|f| f.fields.get_mut("u").unwrap().value[0] = serde_json::json!("x"));
        bad(&|f| {
            let phi = f.fields.get_mut("phi").unwrap();
            phi.value[1] = serde_json::json!("12345/7");
        });
        bad(&|f| {
            let xi = f.fields.get_mut("xi").unwrap();
            xi.value[0] = serde_json::json!("1/1");
        });
        bad(&|f| f.mapping = MappingKind::Geodesic);
        bad(&|f| f.p = Some(1));
        bad(&|f| {
            let e = f.fields["u"].clone();
            f.fields.insert("bogus".into(), e);
        });
        assert!(InstanceFile::from_json_str("{\"dimension\": 3}").is_err());
        assert!(InstanceFile::from_json_str("not json").is_err());
    }
}
