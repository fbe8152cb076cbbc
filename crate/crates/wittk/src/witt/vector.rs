use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value as Json};

use super::TruncationSet;
use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingElement, Value};

/// A Witt vector: one coefficient per index of its truncation set, in index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector {
    trunc: TruncationSet,
    ring: RingDescriptor,
    coeffs: Vec<Value>,
}

/// Ghost components `w_n`, one per index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GhostVector {
    trunc: TruncationSet,
    ring: RingDescriptor,
    components: Vec<Value>,
}

fn check_values(trunc: &TruncationSet, ring: &RingDescriptor, vals: &[Value]) -> Result<()> {
    if vals.len() != trunc.len() {
        return Err(Error::invalid(format!(
            "{} coefficients for truncation set {trunc}",
            vals.len()
        )));
    }
    if let Some(bad) = vals.iter().find(|v| !ring.is_canonical(v)) {
        return Err(Error::invalid(format!("{bad:?} is not an element of {ring}")));
    }
    Ok(())
}

fn unwrap_elements(ring: &RingDescriptor, elems: Vec<RingElement>) -> Result<Vec<Value>> {
    elems
        .into_iter()
        .map(|e| {
            if e.ring() != ring {
                Err(Error::DescriptorMismatch(format!("{} vs {ring}", e.ring())))
            } else {
                Ok(e.into_value())
            }
        })
        .collect()
}

fn indexed_json(trunc: &TruncationSet, ring: &RingDescriptor, vals: &[Value]) -> Json {
    let mut map = Map::new();
    for (n, v) in trunc.iter().zip(vals) {
        map.insert(n.to_string(), ring.value_to_json(v));
    }
    Json::Object(map)
}

fn parse_indexed(
    j: &Json,
    key: &str,
) -> Result<(TruncationSet, RingDescriptor, Vec<Value>)> {
    let trunc: TruncationSet = serde_json::from_value(
        j.get("trunc")
            .cloned()
            .ok_or_else(|| Error::Parse("missing 'trunc'".into()))?,
    )
    .map_err(|e| Error::Parse(e.to_string()))?;
    let ring = RingDescriptor::from_json(
        j.get("ring")
            .ok_or_else(|| Error::Parse("missing 'ring'".into()))?,
    )?;
    let map = j
        .get(key)
        .and_then(Json::as_object)
        .ok_or_else(|| Error::Parse(format!("missing '{key}' object")))?;
    if map.len() != trunc.len() {
        return Err(Error::invalid(format!(
            "'{key}' must have exactly one entry per index"
        )));
    }
    let vals = trunc
        .iter()
        .map(|n| {
            let v = map
                .get(&n.to_string())
                .ok_or_else(|| Error::invalid(format!("no entry for index {n}")))?;
            ring.value_from_json(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((trunc, ring, vals))
}

impl WittVector {
    pub fn new(trunc: TruncationSet, ring: RingDescriptor, coeffs: Vec<RingElement>) -> Result<Self> {
        let vals = unwrap_elements(&ring, coeffs)?;
        Self::from_values(trunc, ring, vals)
    }

    pub fn from_values(trunc: TruncationSet, ring: RingDescriptor, coeffs: Vec<Value>) -> Result<Self> {
        check_values(&trunc, &ring, &coeffs)?;
        Ok(WittVector { trunc, ring, coeffs })
    }

    pub(crate) fn from_parts(trunc: TruncationSet, ring: RingDescriptor, coeffs: Vec<Value>) -> Self {
        debug_assert_eq!(trunc.len(), coeffs.len());
        WittVector { trunc, ring, coeffs }
    }

    /// Coefficients given as integers, mapped into the ring.
    pub fn from_ints(trunc: TruncationSet, ring: RingDescriptor, coeffs: &[i64]) -> Result<Self> {
        let vals = coeffs.iter().map(|&c| ring.from_i64(c)).collect();
        Self::from_values(trunc, ring, vals)
    }

    pub fn zero(trunc: &TruncationSet, ring: &RingDescriptor) -> Self {
        WittVector {
            trunc: trunc.clone(),
            ring: ring.clone(),
            coeffs: vec![ring.zero(); trunc.len()],
        }
    }

    pub fn one(trunc: &TruncationSet, ring: &RingDescriptor) -> Self {
        let mut w = Self::zero(trunc, ring);
        if !w.coeffs.is_empty() {
            w.coeffs[0] = ring.one();
        }
        w
    }

    pub fn trunc(&self) -> &TruncationSet {
        &self.trunc
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn values(&self) -> &[Value] {
        &self.coeffs
    }

    pub fn coeff(&self, n: u64) -> Option<RingElement> {
        let i = self.trunc.position(n)?;
        Some(RingElement::from_parts(self.ring.clone(), self.coeffs[i].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|v| self.ring.is_zero(v))
    }

    /// Position in enumeration order, for finite coefficient rings.
    pub fn finite_index(&self) -> Option<u64> {
        let q = self.ring.cardinality()?;
        let mut idx = 0u64;
        for v in self.coeffs.iter().rev() {
            idx = idx.checked_mul(q)?.checked_add(v.as_small())?;
        }
        Some(idx)
    }

    pub fn to_json(&self) -> Json {
        serde_json::json!({
            "trunc": self.trunc.indices(),
            "ring": self.ring.to_json(),
            "coeffs": indexed_json(&self.trunc, &self.ring, &self.coeffs),
        })
    }

    pub fn from_json(j: &Json) -> Result<Self> {
        let (trunc, ring, vals) = parse_indexed(j, "coeffs")?;
        Ok(WittVector {
            trunc,
            ring,
            coeffs: vals,
        })
    }
}

impl GhostVector {
    pub fn from_values(trunc: TruncationSet, ring: RingDescriptor, components: Vec<Value>) -> Result<Self> {
        check_values(&trunc, &ring, &components)?;
        Ok(GhostVector {
            trunc,
            ring,
            components,
        })
    }

    pub(crate) fn from_parts(trunc: TruncationSet, ring: RingDescriptor, components: Vec<Value>) -> Self {
        GhostVector {
            trunc,
            ring,
            components,
        }
    }

    pub fn from_ints(trunc: TruncationSet, ring: RingDescriptor, comps: &[i64]) -> Result<Self> {
        let vals = comps.iter().map(|&c| ring.from_i64(c)).collect();
        Self::from_values(trunc, ring, vals)
    }

    pub fn trunc(&self) -> &TruncationSet {
        &self.trunc
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn values(&self) -> &[Value] {
        &self.components
    }

    pub fn component(&self, n: u64) -> Option<RingElement> {
        let i = self.trunc.position(n)?;
        Some(RingElement::from_parts(self.ring.clone(), self.components[i].clone()))
    }

    pub fn to_json(&self) -> Json {
        serde_json::json!({
            "trunc": self.trunc.indices(),
            "ring": self.ring.to_json(),
            "components": indexed_json(&self.trunc, &self.ring, &self.components),
        })
    }

    pub fn from_json(j: &Json) -> Result<Self> {
        let (trunc, ring, vals) = parse_indexed(j, "components")?;
        Ok(GhostVector {
            trunc,
            ring,
            components: vals,
        })
    }
}

fn fmt_values(f: &mut fmt::Formatter<'_>, ring: &RingDescriptor, vals: &[Value]) -> fmt::Result {
    let parts: Vec<String> = vals.iter().map(|v| ring.format_value(v)).collect();
    write!(f, "({})", parts.join(", "))
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_values(f, &self.ring, &self.coeffs)
    }
}

impl fmt::Display for GhostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_values(f, &self.ring, &self.components)
    }
}

impl Serialize for WittVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for WittVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        WittVector::from_json(&Json::deserialize(d)?).map_err(de::Error::custom)
    }
}

impl Serialize for GhostVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GhostVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GhostVector::from_json(&Json::deserialize(d)?).map_err(de::Error::custom)
    }
}
