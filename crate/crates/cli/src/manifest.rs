//! Run manifests and digest-stamped output files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use frobenius_core::{Error, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

/// What was asked for. The digest covers exactly these fields, so two runs
/// with equal digests computed the same thing.
#[derive(Debug, Clone, Serialize)]
pub struct RunRequest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub ceilings: BTreeMap<String, Value>,
}

impl RunRequest {
    pub fn new(command: &str) -> Self {
        RunRequest {
            command: command.into(),
            parameters: BTreeMap::new(),
            ceilings: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn ceiling(mut self, key: &str, value: impl Serialize) -> Self {
        self.ceilings
            .insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("serializable");
        hex::encode(Sha256::digest(canonical))
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    #[serde(flatten)]
    pub request: &'a RunRequest,
    pub digest: String,
    pub wall_time_ms: u128,
    /// sha256 of every output file, by file name.
    pub outputs: BTreeMap<String, String>,
}

/// Output files collected in memory and written only once the whole run
/// succeeded.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn push(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    /// JSON with the manifest digest inserted as `manifest_digest`.
    pub fn push_json(&mut self, name: &str, digest: &str, mut value: Value) -> Result<()> {
        if let Value::Object(map) = &mut value {
            map.insert("manifest_digest".into(), Value::String(digest.into()));
        }
        let mut bytes = serde_json::to_vec_pretty(&value)?;
        bytes.push(b'\n');
        self.push(name, bytes);
        Ok(())
    }

    /// CSV with a leading `# manifest=<digest>` comment line.
    pub fn push_csv<S: AsRef<str>>(
        &mut self,
        name: &str,
        digest: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = Vec<S>>,
    ) -> Result<()> {
        let mut bytes = format!("# manifest={digest}\n").into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut bytes);
            w.write_record(header)?;
            for row in rows {
                w.write_record(row.iter().map(AsRef::as_ref))?;
            }
            w.flush()?;
        }
        self.push(name, bytes);
        Ok(())
    }

    pub fn write(self, dir: &Path, request: &RunRequest, elapsed: Duration) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut outputs = BTreeMap::new();
        for (name, bytes) in &self.files {
            fs::write(dir.join(name), bytes)?;
            outputs.insert(name.clone(), hex::encode(Sha256::digest(bytes)));
        }
        let manifest = RunManifest {
            request,
            digest: request.digest(),
            wall_time_ms: elapsed.as_millis(),
            outputs,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        fs::write(dir.join(MANIFEST_FILE), bytes).map_err(Error::from)
    }
}
