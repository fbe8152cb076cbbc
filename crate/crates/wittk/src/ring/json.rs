use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value as Json};

use super::{GaloisField, IntPoly, Monomial, RingDescriptor, Value};
use crate::error::{Error, Result};

fn field_u64(j: &Json, key: &str) -> Result<u64> {
    j.get(key)
        .and_then(Json::as_u64)
        .ok_or_else(|| Error::Parse(format!("missing integer field '{key}'")))
}

/// Integers that fit in i64 are JSON numbers, larger ones decimal strings.
pub fn bigint_to_json(n: &BigInt) -> Json {
    match n.to_i64() {
        Some(x) => json!(x),
        None => Json::String(n.to_string()),
    }
}

pub fn bigint_from_json(j: &Json) -> Result<BigInt> {
    match j {
        Json::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Json::String(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s}"))),
        other => Err(Error::Parse(format!("not an integer: {other}"))),
    }
}

impl RingDescriptor {
    pub fn to_json(&self) -> Json {
        match self {
            RingDescriptor::Integers => json!({"ring": "Z"}),
            RingDescriptor::IntegersMod(m) => json!({"ring": "Zmod", "m": m}),
            RingDescriptor::PrimeField(p) => json!({"ring": "Fp", "p": p}),
            RingDescriptor::FiniteField(k) => json!({
                "ring": "GF", "p": k.p(), "f": k.degree(), "modulus": k.modulus()
            }),
            RingDescriptor::MultivarPoly { base, vars } => json!({
                "ring": "Poly", "base": base.to_json(), "vars": vars
            }),
        }
    }

    pub fn from_json(j: &Json) -> Result<Self> {
        let tag = j
            .get("ring")
            .and_then(Json::as_str)
            .ok_or_else(|| Error::Parse("ring descriptor needs a 'ring' tag".into()))?;
        match tag {
            "Z" => Ok(RingDescriptor::Integers),
            "Zmod" => RingDescriptor::zmod(field_u64(j, "m")?),
            "Fp" => RingDescriptor::fp(field_u64(j, "p")?),
            "GF" => {
                let p = field_u64(j, "p")?;
                let f = field_u64(j, "f")? as u32;
                match j.get("modulus") {
                    Some(Json::Array(cs)) => {
                        let modulus = cs
                            .iter()
                            .map(|c| c.as_u64().ok_or_else(|| Error::Parse("bad modulus".into())))
                            .collect::<Result<Vec<_>>>()?;
                        if modulus.len() != f as usize + 1 {
                            return Err(Error::invalid("modulus degree does not match f"));
                        }
                        Ok(RingDescriptor::FiniteField(GaloisField::with_modulus(
                            p, modulus,
                        )?))
                    }
                    None => Ok(RingDescriptor::FiniteField(GaloisField::new(p, f)?)),
                    Some(_) => Err(Error::Parse("modulus must be an array".into())),
                }
            }
            "Poly" => {
                let base = RingDescriptor::from_json(
                    j.get("base")
                        .ok_or_else(|| Error::Parse("missing 'base'".into()))?,
                )?;
                let vars = j
                    .get("vars")
                    .and_then(Json::as_array)
                    .ok_or_else(|| Error::Parse("missing 'vars'".into()))?
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| Error::Parse("variable names are strings".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                RingDescriptor::poly(base, vars)
            }
            other => Err(Error::Parse(format!("unknown ring tag '{other}'"))),
        }
    }

    /// JSON form of a payload: integer, residue, coefficient list, or term list.
    pub fn value_to_json(&self, v: &Value) -> Json {
        match (self, v) {
            (RingDescriptor::FiniteField(k), Value::Small(x)) => json!(k.digits(*x)),
            (_, Value::Small(x)) => json!(x),
            (_, Value::Int(x)) => bigint_to_json(x),
            (_, Value::Poly(p)) => Json::Array(
                p.terms()
                    .map(|(m, c)| json!([bigint_to_json(c), m.pairs()]))
                    .collect(),
            ),
        }
    }

    pub fn value_from_json(&self, j: &Json) -> Result<Value> {
        let v = match self {
            RingDescriptor::FiniteField(k) => match j {
                Json::Array(cs) => {
                    let digits = cs
                        .iter()
                        .map(|c| c.as_u64().ok_or_else(|| Error::Parse("bad digit".into())))
                        .collect::<Result<Vec<_>>>()?;
                    Value::Small(k.from_coeffs(&digits))
                }
                _ => self.from_bigint(&bigint_from_json(j)?),
            },
            RingDescriptor::MultivarPoly { .. } => match j {
                Json::Array(terms) => {
                    let mut poly = IntPoly::zero();
                    for t in terms {
                        let pair = t
                            .as_array()
                            .filter(|a| a.len() == 2)
                            .ok_or_else(|| Error::Parse("term must be [coeff, monomial]".into()))?;
                        let c = bigint_from_json(&pair[0])?;
                        let mono: Vec<(u32, u32)> = serde_json::from_value(pair[1].clone())
                            .map_err(|e| Error::Parse(e.to_string()))?;
                        poly = poly.add(&IntPoly::monomial(Monomial::from_pairs(mono), c));
                    }
                    self.add(&Value::Poly(poly), &self.zero())
                }
                _ => self.from_bigint(&bigint_from_json(j)?),
            },
            _ => self.from_bigint(&bigint_from_json(j)?),
        };
        if !self.is_canonical(&v) {
            return Err(Error::invalid(format!("{j} is not an element of {self}")));
        }
        Ok(v)
    }
}

impl Serialize for RingDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = Json::deserialize(d)?;
        RingDescriptor::from_json(&j).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_round_trip() {
        for r in [
            RingDescriptor::Integers,
            RingDescriptor::zmod(8).unwrap(),
            RingDescriptor::fp(5).unwrap(),
            RingDescriptor::gf(2, 2).unwrap(),
            RingDescriptor::poly(RingDescriptor::Integers, vec!["x".into()]).unwrap(),
        ] {
            let j = r.to_json();
            assert_eq!(RingDescriptor::from_json(&j).unwrap(), r);
        }
        assert_eq!(
            RingDescriptor::gf(2, 2).unwrap().to_json(),
            json!({"ring":"GF","p":2,"f":2,"modulus":[1,1,1]})
        );
        assert_eq!(
            RingDescriptor::zmod(8).unwrap().to_json(),
            json!({"ring":"Zmod","m":8})
        );
    }

    #[test]
    fn value_round_trip() {
        let r = RingDescriptor::poly(RingDescriptor::Integers, vec!["x".into(), "y".into()])
            .unwrap();
        let x = r.variable("x").unwrap();
        let y = r.variable("y").unwrap();
        let v = r.sub(&r.mul(&x, &y), &r.from_i64(3));
        assert_eq!(r.value_from_json(&r.value_to_json(&v)).unwrap(), v);
        let big = BigInt::from(10).pow(30);
        let z = RingDescriptor::Integers;
        assert_eq!(
            z.value_from_json(&z.value_to_json(&Value::Int(big.clone()))).unwrap(),
            Value::Int(big)
        );
    }
}
