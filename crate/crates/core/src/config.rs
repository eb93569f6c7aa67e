//! Serializable run configurations and their hashes.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// One CLI invocation, minus the thread count: `{"subcommand": .., "args": {..}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig<C> {
    #[serde(flatten)]
    pub command: C,
    pub version: String,
}

impl<C: Serialize> RunConfig<C> {
    pub fn new(command: C) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// First 16 hex digits of the SHA-256 of the compact JSON form.
    pub fn hash(&self) -> Result<String> {
        let compact = serde_json::to_string(self)?;
        let digest = Sha256::digest(compact.as_bytes());
        Ok(digest[..8].iter().map(|b| format!("{b:02x}")).collect())
    }
}

impl<C: for<'de> Deserialize<'de>> RunConfig<C> {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
