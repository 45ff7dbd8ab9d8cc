//! Numerical tolerances.
//!
//! Values are stated for `f64`. [`Tolerances::for_scalar`] rescales them to a
//! narrower scalar type, and the `VN_TOLERANCE_SCALE` environment variable
//! multiplies all of them (read once per process).

use std::sync::OnceLock;

use serde::Serialize;

use crate::scalar::Real;

pub const ENV_SCALE: &str = "VN_TOLERANCE_SCALE";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub psd: f64,
    pub trace: f64,
    pub eigen_residual: f64,
    pub nullspace_rank: f64,
    pub lax_eigen: f64,
    pub projector_overlap: f64,
    pub idempotent: f64,
    pub darboux_hermiticity: f64,
    pub proof_step: f64,
    pub commutation: f64,
    pub casimir_imag: f64,
    pub expectation_imag: f64,
    pub identity: f64,
    pub singular_normalization: f64,
    pub blowup: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            psd: 1e-10,
            trace: 1e-12,
            eigen_residual: 1e-10,
            nullspace_rank: 1e-8,
            lax_eigen: 1e-8,
            projector_overlap: 1e-10,
            idempotent: 1e-10,
            darboux_hermiticity: 1e-10,
            proof_step: 1e-10,
            commutation: 1e-10,
            casimir_imag: 1e-12,
            expectation_imag: 1e-10,
            identity: 1e-12,
            singular_normalization: 1e-12,
            blowup: 1e6,
        }
    }
}

impl Tolerances {
    /// Multiplies every threshold (except the blow-up bound) by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            hermiticity: self.hermiticity * factor,
            psd: self.psd * factor,
            trace: self.trace * factor,
            eigen_residual: self.eigen_residual * factor,
            nullspace_rank: self.nullspace_rank * factor,
            lax_eigen: self.lax_eigen * factor,
            projector_overlap: self.projector_overlap * factor,
            idempotent: self.idempotent * factor,
            darboux_hermiticity: self.darboux_hermiticity * factor,
            proof_step: self.proof_step * factor,
            commutation: self.commutation * factor,
            casimir_imag: self.casimir_imag * factor,
            expectation_imag: self.expectation_imag * factor,
            identity: self.identity * factor,
            singular_normalization: self.singular_normalization,
            blowup: self.blowup,
        }
    }

    /// Process-wide tolerances for `f64`, honouring `VN_TOLERANCE_SCALE`.
    pub fn global() -> &'static Tolerances {
        static GLOBAL: OnceLock<Tolerances> = OnceLock::new();
        GLOBAL.get_or_init(|| Tolerances::default().scaled(env_scale()))
    }

    /// Global tolerances adapted to the precision of `T`.
    pub fn for_scalar<T: Real>() -> Tolerances {
        let ratio = T::precision_ratio();
        let g = *Self::global();
        if ratio <= 1.0 {
            return g;
        }
        let adapt = |x: f64| (x * ratio).min(1e-2);
        Tolerances {
            hermiticity: adapt(g.hermiticity),
            psd: adapt(g.psd),
            trace: adapt(g.trace),
            eigen_residual: adapt(g.eigen_residual),
            nullspace_rank: adapt(g.nullspace_rank),
            lax_eigen: adapt(g.lax_eigen),
            projector_overlap: adapt(g.projector_overlap),
            idempotent: adapt(g.idempotent),
            darboux_hermiticity: adapt(g.darboux_hermiticity),
            proof_step: adapt(g.proof_step),
            commutation: adapt(g.commutation),
            casimir_imag: adapt(g.casimir_imag),
            expectation_imag: adapt(g.expectation_imag),
            identity: adapt(g.identity),
            singular_normalization: g.singular_normalization,
            blowup: g.blowup,
        }
    }
}

/// Reads `VN_TOLERANCE_SCALE`; missing, unparsable, or non-positive values
/// fall back to 1.
pub fn env_scale() -> f64 {
    std::env::var(ENV_SCALE)
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|x| x.is_finite() && *x > 0.0)
        .unwrap_or(1.0)
}

#[inline]
pub(crate) fn tol<T: Real>(pick: impl Fn(&Tolerances) -> f64) -> T {
    T::lit(pick(&Tolerances::for_scalar::<T>()))
}
