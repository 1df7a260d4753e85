//! Size caps. Exceeding one is always reported, never silently truncated.

use thiserror::Error;

use crate::arith::DEFAULT_MAX_L;
use crate::coxeter::MAX_RANK;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Bound on `L`, the lcm of the finite labels.
    pub field_l: u64,
    pub rank: usize,
    pub minimal_roots: usize,
    pub automaton_states: usize,
    /// Elements visited by ball enumeration.
    pub ball: usize,
    /// Candidate surjections examined by partition search.
    pub candidates: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            field_l: DEFAULT_MAX_L,
            rank: MAX_RANK,
            minimal_roots: 20_000,
            automaton_states: 200_000,
            ball: 5_000,
            candidates: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CapsError {
    #[error("malformed cap override {0:?}, expected name=value")]
    Malformed(String),
    #[error("unknown cap {0:?}")]
    Unknown(String),
    #[error("bad value for cap {0}: {1:?}")]
    BadValue(String, String),
}

pub const CAPS_ENV: &str = "COXFOLD_CAPS";

impl Caps {
    /// Applies overrides of the form `name=value,name=value`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Caps, CapsError> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CapsError::Malformed(item.to_string()))?;
            let (name, value) = (name.trim(), value.trim());
            let parsed: u64 = value
                .parse()
                .map_err(|_| CapsError::BadValue(name.to_string(), value.to_string()))?;
            match name {
                "field_l" => self.field_l = parsed,
                "rank" => self.rank = (parsed as usize).min(MAX_RANK),
                "minimal_roots" => self.minimal_roots = parsed as usize,
                "automaton_states" => self.automaton_states = parsed as usize,
                "ball" => self.ball = parsed as usize,
                "candidates" => self.candidates = parsed,
                _ => return Err(CapsError::Unknown(name.to_string())),
            }
        }
        Ok(self)
    }

    /// Defaults overridden by `COXFOLD_CAPS` when set.
    pub fn from_env() -> Result<Caps, CapsError> {
        match std::env::var(CAPS_ENV) {
            Ok(spec) => Caps::default().with_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }
}
