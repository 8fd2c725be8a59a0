//! `lambda_S` for sets of rational places of `F_q(x)`, choosing the method per set.

use crate::ffield::FieldCtx;
use crate::lambda::{Description, LambdaSeq, LambdaSource};
use crate::method_a::{e_profile, lambda_seq_a, EProfile, RationalSet};
use crate::method_b::{lambda_seq_b, linear_unit_vectors, rational_description, MethodBError, OneUnitVec};
use crate::curve::EXPANSION_CAP;

use super::HarnessError;

/// Holds the field and, once Method B is first needed, the unit vectors of `1 - alpha/x`.
#[derive(Debug, Clone)]
pub struct RationalOracle {
    ctx: FieldCtx,
    vectors: Vec<OneUnitVec>,
    truncation: usize,
}

impl RationalOracle {
    pub fn new(ctx: FieldCtx) -> Self {
        RationalOracle { ctx, vectors: Vec::new(), truncation: 0 }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn profile(&self, set: &RationalSet) -> EProfile {
        e_profile(&self.ctx, set)
    }

    /// Method B on the set, raising the truncation on demand and keeping it.
    pub fn description_b(&mut self, set: &RationalSet) -> Result<Description, HarnessError> {
        if self.vectors.is_empty() {
            self.truncation = (2 * self.ctx.q() as usize).max(16);
            self.vectors = linear_unit_vectors(&self.ctx, self.truncation);
        }
        loop {
            match rational_description(&self.vectors, set.exponents()) {
                Err(MethodBError::PrecisionExceeded(_)) if self.truncation < EXPANSION_CAP => {
                    self.truncation *= 2;
                    self.vectors = linear_unit_vectors(&self.ctx, self.truncation);
                }
                other => return Ok(other?),
            }
        }
    }

    /// The description of `S` and the method that proved it.
    pub fn description(&mut self, set: &RationalSet) -> Result<(Description, LambdaSource), HarnessError> {
        let prof = self.profile(set);
        if prof.fully_valid() {
            Ok((prof.description(), LambdaSource::MethodA))
        } else {
            Ok((self.description_b(set)?, LambdaSource::MethodB))
        }
    }

    /// `lambda_S^(0..=n_max)`: Method A when its proven range reaches `n_max`, Method B
    /// otherwise.
    pub fn lambda(&mut self, set: &RationalSet, n_max: usize) -> Result<LambdaSeq, HarnessError> {
        let (_, seq) = lambda_seq_a(&self.ctx, set, n_max);
        if seq.computed_to() >= n_max {
            return Ok(seq);
        }
        let desc = self.description_b(set)?;
        Ok(lambda_seq_b(&desc, self.ctx.p(), self.ctx.e(), n_max))
    }

    /// `lambda_S` computed far enough to contain its conductor exponent for `l`.
    pub fn lambda_reaching(&mut self, set: &RationalSet, l: u32) -> Result<LambdaSeq, HarnessError> {
        let mut n_max = (l + set.size()).div_ceil(self.ctx.e()) as usize + 2;
        loop {
            let lam = self.lambda(set, n_max)?;
            if lam.conductor_exponent(l).is_ok() {
                return Ok(lam);
            }
            n_max *= 2;
        }
    }
}
