use crate::error::{Error, Result};

/// Explicit resource caps. Every enumeration in the crate checks one of these
/// and refuses instead of approximating.
#[derive(Debug, Clone, PartialEq)]
pub struct Budget {
    /// Largest vertex count accepted by the permutation-based certificate.
    pub max_certificate_vertices: usize,
    /// Edge cap for the parity-mask walk DP.
    pub max_parity_dp_edges: usize,
    /// Edge cap for explicit enumeration of all signings.
    pub max_signing_edges: usize,
    /// Cap on live DP states (covering walk DP, Eulerian backtracking).
    pub max_states: u64,
    /// Cap on enumerated terms (trace-formula sequences, multiplicity assignments).
    pub max_terms: u64,
    /// Cap on the bit size of the hypergraph prefactor `(k-1)^(|V|+(k-2)|E|-1)`.
    pub max_prefactor_bits: u64,
    /// Ceiling for automatic precision escalation in the moment solve.
    pub max_precision_bits: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_certificate_vertices: 10,
            max_parity_dp_edges: 24,
            max_signing_edges: 20,
            max_states: 20_000_000,
            max_terms: 50_000_000,
            max_prefactor_bits: 1 << 16,
            max_precision_bits: 8192,
        }
    }
}

impl Budget {
    /// Scales the state and term caps, leaving structural bounds alone.
    pub fn scaled(factor: u64) -> Self {
        let mut b = Budget::default();
        b.max_states = b.max_states.saturating_mul(factor.max(1));
        b.max_terms = b.max_terms.saturating_mul(factor.max(1));
        b
    }

    pub(crate) fn check_size(what: &'static str, actual: usize, limit: usize) -> Result<()> {
        if actual > limit {
            return Err(Error::SizeBound {
                what,
                limit: limit as u64,
                actual: actual as u64,
            });
        }
        Ok(())
    }
}
