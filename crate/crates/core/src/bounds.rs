//! Closed-form score bounds for the marking game on the m-th power of a
//! forest with maximum degree delta.
//!
//! All formulas are evaluated in exact integer arithmetic through the
//! geometric sum `sum_{k=0}^{m-1} (delta-1)^k`, which avoids the division
//! by `delta - 2` entirely (and so stays defined at `delta = 2`).

use crate::error::{Error, Result};

/// Parameters of the bound formulas: `delta >= 2`, `m >= 1`. The closed
/// forms named after the two theorems additionally require `delta >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundParams {
    delta: u64,
    m: u64,
}

impl BoundParams {
    pub fn new(delta: u64, m: u64) -> Result<Self> {
        if delta < 2 {
            return Err(Error::Domain(format!(
                "bound formulas require delta >= 2, got {delta}"
            )));
        }
        if m < 1 {
            return Err(Error::Domain("bound formulas require m >= 1".into()));
        }
        Ok(BoundParams { delta, m })
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    fn require_delta3(&self, what: &str) -> Result<()> {
        if self.delta < 3 {
            return Err(Error::Domain(format!(
                "{what} requires delta >= 3; for delta = 2 use the geometric-sum \
                 components (ancestor_bound / child_bound) directly"
            )));
        }
        Ok(())
    }

    /// The older bound: `2 * sum_{k=0}^{m-1} (delta-1)^k + 2`.
    pub fn score_bound_v1(&self) -> Result<u64> {
        self.require_delta3("score_bound_v1")?;
        let gs = geometric_sum(self.delta - 1, self.m)?;
        checked(gs.checked_mul(2).and_then(|x| x.checked_add(2)))
    }

    /// The sharper bound: `sum_{k=0}^{m-1} (delta-1)^k + 2^m + 1`.
    pub fn score_bound_v2(&self) -> Result<u64> {
        self.require_delta3("score_bound_v2")?;
        let gs = geometric_sum(self.delta - 1, self.m)?;
        checked(gs.checked_add(pow2(self.m)?).and_then(|x| x.checked_add(1)))
    }

    /// The invariant ceiling on marked power-neighbours of an unmarked
    /// vertex after Alice's move: `sum_{k=0}^{m-1} (delta-1)^k + 2^m - 1`.
    /// The sharper score bound is this plus 2.
    pub fn invariant_ceiling(&self) -> Result<u64> {
        self.require_delta3("invariant_ceiling")?;
        let gs = geometric_sum(self.delta - 1, self.m)?;
        checked(gs.checked_add(pow2(self.m)? - 1))
    }

    /// Marked ancestors within distance m: `sum_{k=0}^{m-1} (delta-1)^k`.
    pub fn ancestor_bound(&self) -> Result<u64> {
        geometric_sum(self.delta - 1, self.m)
    }
}

/// Marked descendants within distance m: `2^m - 1`.
pub fn child_bound(m: u64) -> Result<u64> {
    if m < 1 {
        return Err(Error::Domain("child_bound requires m >= 1".into()));
    }
    Ok(pow2(m)? - 1)
}

/// `sum_{k=0}^{m-1} base^k` with overflow checking.
pub fn geometric_sum(base: u64, m: u64) -> Result<u64> {
    let mut total: u64 = 0;
    let mut term: u64 = 1;
    for k in 0..m {
        total = checked(total.checked_add(term))?;
        if k + 1 < m {
            term = checked(term.checked_mul(base))?;
        }
    }
    Ok(total)
}

fn pow2(m: u64) -> Result<u64> {
    if m >= 64 {
        return Err(Error::Capacity(format!("2^{m} overflows u64")));
    }
    Ok(1u64 << m)
}

fn checked(value: Option<u64>) -> Result<u64> {
    value.ok_or_else(|| Error::Capacity("bound evaluation overflows u64".into()))
}
