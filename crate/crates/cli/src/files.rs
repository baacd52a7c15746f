//! JSON input files.

use std::path::Path;

use moreau_pi::hysteresis::Signal;
use moreau_pi::network::SpringNetwork;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const NETWORK_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpringEntry {
    pub i: usize,
    pub j: usize,
    pub a: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodePair {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub version: u32,
    pub node_count: usize,
    pub springs: Vec<SpringEntry>,
    pub constraint: NodePair,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Breakpoint {
    pub t: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalFile {
    pub breakpoints: Vec<Breakpoint>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(e.to_string()))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))
}

impl NetworkFile {
    pub fn to_network(&self) -> Result<SpringNetwork, CliError> {
        if self.version != NETWORK_VERSION {
            return Err(CliError::Parse(format!(
                "version: expected {NETWORK_VERSION}, got {}",
                self.version
            )));
        }
        let (ci, cj) = (
            self.constraint.i.min(self.constraint.j),
            self.constraint.i.max(self.constraint.j),
        );
        if (ci, cj) != (1, self.node_count) {
            return Err(CliError::Parse(format!(
                "constraint: must join nodes 1 and {}, got ({}, {})",
                self.node_count, self.constraint.i, self.constraint.j
            )));
        }
        let springs: Vec<_> = self.springs.iter().map(|s| (s.i, s.j, s.a, s.r)).collect();
        SpringNetwork::new(self.node_count, &springs)
            .map_err(|e| CliError::Parse(format!("springs: {e}")))
    }
}

impl SignalFile {
    pub fn to_signal(&self) -> Result<Signal, CliError> {
        let points: Vec<_> = self.breakpoints.iter().map(|b| (b.t, b.g)).collect();
        Signal::new(&points).map_err(|e| CliError::Parse(format!("breakpoints: {e}")))
    }
}

pub fn load_network(path: &Path) -> Result<SpringNetwork, CliError> {
    parse::<NetworkFile>(path)
        .and_then(|f| f.to_network())
        .map_err(|e| e.in_file(path))
}

pub fn load_signal(path: &Path) -> Result<Signal, CliError> {
    parse::<SignalFile>(path)
        .and_then(|f| f.to_signal())
        .map_err(|e| e.in_file(path))
}
