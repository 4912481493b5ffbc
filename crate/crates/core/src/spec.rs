//! JSON model descriptions.
//!
//! A description is either a canonical pair
//! `{"b": 0.5, "mu": [{"weight": 1, "family": "frechet", "alpha": 0.5}]}`,
//! optionally with an intensity `"c"` for the triplet form, or a Lévy
//! subordinator `{"levy": {"b_L": 0, "atoms": [[0.69, 2], ["inf", 1]]}}`.
//! Either may carry `"transform"`, a single object or a list applied left to
//! right: `{"kind": "stable", "alpha": 0.5}` or `{"kind": "inclusion_exclusion"}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::distributions::{
    rescale_to_unit_mean, CanonicalModel, FiniteMeanCdf, IdtTriplet, MixingMeasure, UnitMeanCdf,
};
use crate::error::{Error, Result};
use crate::stdf::{InclusionExclusion, LevySpec, StableTailDependence, StableTransform, WeightVector};

/// Top-level model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<ComponentSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levy: Option<LevyJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", deserialize_with = "one_or_many")]
    pub transform: Vec<TransformSpec>,
}

/// One weighted component of `μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub weight: f64,
    #[serde(flatten)]
    pub cdf: CdfSpec,
}

/// A unit-mean cdf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CdfSpec {
    Dirac1,
    Frechet { alpha: f64 },
    TwoPoint { theta: f64 },
    UnitExponential,
    Discrete { atoms: Vec<(f64, f64)> },
    Tilted { base: Box<CdfSpec>, z: f64 },
    Rescaled { base: FiniteSpec },
}

/// A finite-mean cdf to be rescaled to unit mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiniteSpec {
    Point { at: f64 },
    Exponential { mean: f64 },
    Discrete { atoms: Vec<(f64, f64)> },
    Uniform { lo: f64, hi: f64 },
    Gamma { shape: f64, scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevyJson {
    #[serde(rename = "b_L")]
    pub drift: f64,
    #[serde(default)]
    pub atoms: Vec<(Jump, f64)>,
}

/// A jump size; `+∞` is written `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump(pub f64);

impl Serialize for Jump {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Jump {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Jump(x)),
            Raw::Text(t) if t == "inf" => Ok(Jump(f64::INFINITY)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "jump must be a number or \"inf\", got \"{t}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TransformSpec {
    Stable { alpha: f64 },
    InclusionExclusion,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<TransformSpec>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        One(TransformSpec),
        Many(Vec<TransformSpec>),
    }
    Ok(match Raw::deserialize(d)? {
        Raw::One(t) => vec![t],
        Raw::Many(v) => v,
    })
}

/// An evaluator assembled from a description.
pub type DynStdf = Box<dyn StableTailDependence<f64> + Send + Sync>;

impl ModelSpec {
    /// Parses and validates a JSON description.
    pub fn parse(text: &str) -> Result<Self> {
        let spec: ModelSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.check_shape()?;
        Ok(spec)
    }

    /// Compact JSON with fixed field order; parses back to an equal value.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model descriptions serialize")
    }

    fn check_shape(&self) -> Result<()> {
        match (&self.levy, self.b, &self.mu, self.c) {
            (Some(_), None, None, None) => Ok(()),
            (Some(_), ..) => Err(Error::Parse("`levy` excludes `b`, `c` and `mu`".into())),
            (None, None, _, _) => Err(Error::Parse("missing field `b` (or `levy`)".into())),
            (None, Some(_), _, _) => Ok(()),
        }
    }

    /// The canonical pair; Lévy descriptions must satisfy `Ψ(1) = 1`.
    pub fn to_canonical(&self) -> Result<CanonicalModel<f64>> {
        if !self.transform.is_empty() {
            return Err(Error::Domain(
                "transformed models have no canonical-pair sampler".into(),
            ));
        }
        if let Some(levy) = &self.levy {
            return levy.build()?.to_canonical();
        }
        if self.c.is_some() {
            return self.to_triplet()?.to_canonical();
        }
        CanonicalModel::new(self.b.expect("checked by parse"), self.mixing()?)
    }

    /// The triplet `(b, c, μ)`; without `c` the canonical pair gives `c = 1 − b`.
    pub fn to_triplet(&self) -> Result<IdtTriplet<f64>> {
        if !self.transform.is_empty() {
            return Err(Error::Domain("transformed models have no path sampler".into()));
        }
        if let Some(levy) = &self.levy {
            return levy.build()?.to_triplet();
        }
        let b = self.b.expect("checked by parse");
        let mu = self
            .mixing()?
            .ok_or_else(|| Error::Domain("a path needs a non-empty `mu`".into()))?;
        IdtTriplet::new(b, self.c.unwrap_or(1.0 - b), mu)
    }

    fn mixing(&self) -> Result<Option<MixingMeasure<f64>>> {
        match &self.mu {
            None => Ok(None),
            Some(list) if list.is_empty() => Ok(None),
            Some(list) => {
                let comps = list
                    .iter()
                    .map(|c| Ok((c.weight, c.cdf.build()?)))
                    .collect::<Result<Vec<_>>>()?;
                MixingMeasure::new(comps).map(Some)
            }
        }
    }

    /// The stdf evaluator with all transforms applied.
    pub fn evaluator(&self) -> Result<DynStdf> {
        let mut ell: DynStdf = match &self.levy {
            Some(levy) => Box::new(levy.build()?),
            None if self.c.is_some() => Box::new(self.to_triplet_untransformed()?.to_canonical()?),
            None => Box::new(CanonicalModel::new(self.b.expect("checked by parse"), self.mixing()?)?),
        };
        for t in &self.transform {
            ell = match *t {
                TransformSpec::Stable { alpha } => Box::new(StableTransform::new(ell, alpha)?),
                TransformSpec::InclusionExclusion => Box::new(InclusionExclusion::new(ell)),
            };
        }
        Ok(ell)
    }

    fn to_triplet_untransformed(&self) -> Result<IdtTriplet<f64>> {
        Self {
            transform: Vec::new(),
            ..self.clone()
        }
        .to_triplet()
    }

    /// `ℓ(t)` for the described model.
    pub fn stdf(&self, t: &[f64]) -> Result<f64> {
        self.evaluator()?.stdf(&WeightVector::from_slice(t)?)
    }
}

impl LevyJson {
    pub fn build(&self) -> Result<LevySpec<f64>> {
        LevySpec::new(self.drift, self.atoms.iter().map(|&(j, r)| (j.0, r)).collect())
    }
}

impl CdfSpec {
    pub fn build(&self) -> Result<UnitMeanCdf<f64>> {
        match self {
            CdfSpec::Dirac1 => Ok(UnitMeanCdf::dirac1()),
            CdfSpec::Frechet { alpha } => UnitMeanCdf::frechet(*alpha),
            CdfSpec::TwoPoint { theta } => UnitMeanCdf::two_point(*theta),
            CdfSpec::UnitExponential => Ok(UnitMeanCdf::unit_exponential()),
            CdfSpec::Discrete { atoms } => UnitMeanCdf::discrete(atoms.clone()),
            CdfSpec::Tilted { base, z } => base.build()?.tilt(*z),
            CdfSpec::Rescaled { base } => rescale_to_unit_mean(&base.build()?),
        }
    }
}

impl FiniteSpec {
    pub fn build(&self) -> Result<FiniteMeanCdf<f64>> {
        match self {
            FiniteSpec::Point { at } => FiniteMeanCdf::point(*at),
            FiniteSpec::Exponential { mean } => FiniteMeanCdf::exponential(*mean),
            FiniteSpec::Discrete { atoms } => FiniteMeanCdf::discrete(atoms.clone()),
            FiniteSpec::Uniform { lo, hi } => FiniteMeanCdf::uniform(*lo, *hi),
            FiniteSpec::Gamma { shape, scale } => FiniteMeanCdf::gamma(*shape, *scale),
        }
    }
}
