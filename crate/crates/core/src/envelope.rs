//! Canonical JSON envelopes for stored artifacts.
//!
//! Canonical form: object keys sorted, no whitespace, integers only,
//! one trailing newline. The hash is SHA-256 over the canonical bytes of
//! `{kind, n, payload, schemaVersion}`, so the header is covered too.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Kind {
    Closure,
    Forcing,
    Embedding,
    Hyp,
    Report,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CertificateEnvelope {
    pub schema_version: u32,
    pub kind: Kind,
    pub n: usize,
    pub payload: Value,
    pub content_hash: String,
}

fn ser_err(e: serde_json::Error) -> Error {
    Error::Serialization(e.to_string())
}

// Sorted explicitly: another crate in the build may switch `serde_json`
// maps to insertion order.
fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        other => other,
    }
}

/// Canonical bytes of any serializable value.
pub fn canonical_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let v = sorted(serde_json::to_value(value).map_err(ser_err)?);
    serde_json::to_vec(&v).map_err(ser_err)
}

fn content_hash(schema_version: u32, kind: Kind, n: usize, payload: &Value) -> Result<String> {
    let body = serde_json::json!({
        "schemaVersion": schema_version,
        "kind": kind,
        "n": n,
        "payload": payload,
    });
    Ok(format!("{:x}", Sha256::digest(canonical_bytes(&body)?)))
}

impl CertificateEnvelope {
    pub fn seal<T: Serialize>(kind: Kind, n: usize, payload: &T) -> Result<Self> {
        let payload = serde_json::to_value(payload).map_err(ser_err)?;
        let content_hash = content_hash(SCHEMA_VERSION, kind, n, &payload)?;
        Ok(CertificateEnvelope {
            schema_version: SCHEMA_VERSION,
            kind,
            n,
            payload,
            content_hash,
        })
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = canonical_bytes(self)?;
        out.push(b'\n');
        Ok(out)
    }

    /// Parses and checks version, hash and byte-exact canonical form.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let raw: Value = serde_json::from_slice(bytes).map_err(ser_err)?;
        if let Some(v) = raw.get("schemaVersion").and_then(Value::as_u64) {
            if v != SCHEMA_VERSION as u64 {
                return Err(Error::SchemaVersion(v.try_into().unwrap_or(u32::MAX)));
            }
        }
        let env: CertificateEnvelope = serde_json::from_value(raw).map_err(ser_err)?;
        let computed = content_hash(env.schema_version, env.kind, env.n, &env.payload)?;
        if computed != env.content_hash {
            return Err(Error::HashMismatch {
                recorded: env.content_hash,
                computed,
            });
        }
        if env.to_bytes()? != bytes {
            return Err(Error::Serialization("bytes are not in canonical form".into()));
        }
        Ok(env)
    }

    pub fn payload<T: DeserializeOwned>(&self) -> Result<T> {
        T::deserialize(&self.payload).map_err(ser_err)
    }

    pub fn expect(&self, kind: Kind) -> Result<&Self> {
        if self.kind != kind {
            return Err(Error::Serialization(format!("expected a {kind:?} envelope, found {:?}", self.kind)));
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::VertexSet;
    use crate::forcing::{propagate, Domain};

    fn sample() -> CertificateEnvelope {
        let z: VertexSet = ["1", "2"].iter().map(|s| s.parse().unwrap()).collect();
        let cert = propagate(2, &z, &[], Domain::SignedOrZero).unwrap();
        CertificateEnvelope::seal(Kind::Forcing, 2, &cert).unwrap()
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let env = sample();
        let bytes = env.to_bytes().unwrap();
        let back = CertificateEnvelope::from_bytes(&bytes).unwrap();
        assert_eq!(back, env);
        assert_eq!(back.to_bytes().unwrap(), bytes);
    }

    #[test]
    fn rejects_tampering_and_versions() {
        let bytes = sample().to_bytes().unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        let v2 = text.replace("\"schemaVersion\":1", "\"schemaVersion\":2");
        assert_eq!(CertificateEnvelope::from_bytes(v2.as_bytes()), Err(Error::SchemaVersion(2)));
        let n3 = text.replace("\"n\":2", "\"n\":3");
        assert!(matches!(CertificateEnvelope::from_bytes(n3.as_bytes()), Err(Error::HashMismatch { .. })));
        let spaced = text.replacen(':', ": ", 1);
        assert!(CertificateEnvelope::from_bytes(spaced.as_bytes()).is_err());
    }
}
