//! Rational constants, written `p/q` in every text format of the crate.

pub use num_rational::Rational64 as Rational;
use num_traits::ToPrimitive;

pub fn to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn parse(text: &str) -> Option<Rational> {
    text.trim().parse().ok()
}

/// Serde adapter storing a [`Rational`] as its `p/q` string.
pub mod as_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).ok_or_else(|| D::Error::custom(format!("not a rational: {text:?}")))
    }
}

/// Serde adapter for a list of rationals.
pub mod vec_as_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(rs.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| super::parse(t).ok_or_else(|| D::Error::custom(format!("not a rational: {t:?}"))))
            .collect()
    }
}
