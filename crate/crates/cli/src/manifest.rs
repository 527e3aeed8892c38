//! Machine-readable run manifests. A manifest captures everything needed to
//! replay a run: subcommand, parameters and constants in effect, the seed,
//! input digests, and the outputs (verdicts, statistics, query counts).
//! Replays reproduce verdicts and query counts bit-for-bit; only `wall_ms`
//! varies.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub subcommand: String,
    pub seed: u64,
    pub params: Map<String, Value>,
    pub constants: Map<String, Value>,
    pub graph_digest: Option<String>,
    pub results: Map<String, Value>,
    pub query_counts: Vec<u64>,
    pub wall_ms: u128,
}

impl ExperimentManifest {
    pub fn new(subcommand: &str, seed: u64) -> Self {
        ExperimentManifest {
            subcommand: subcommand.to_owned(),
            seed,
            params: Map::new(),
            constants: Map::new(),
            graph_digest: None,
            results: Map::new(),
            query_counts: Vec::new(),
            wall_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_owned(), value.into());
    }

    pub fn constant(&mut self, key: &str, value: impl Into<Value>) {
        self.constants.insert(key.to_owned(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_owned(), value.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// The manifest with volatile fields blanked, for replay comparison.
    pub fn replay_key(&self) -> String {
        let mut copy = self.clone();
        copy.wall_ms = 0;
        copy.to_json()
    }
}

/// Content digest recorded for input files.
pub fn digest_bytes(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("sha256:{:x}", h.finalize())
}
