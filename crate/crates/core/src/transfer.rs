//! Cell matrices and their algebra.
//!
//! A cell is a tunnel followed by one delta well. Its matrix is the product
//! `delta_matrix * tunnel_matrix`, so the tunnel acts first on the amplitude
//! column. Strings of cells compose in word order: the matrix of `WV` is
//! `matrix(W) * matrix(V)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::TransferMatrix;
use crate::params::{ChainParams, Regime, OVERFLOW_EXPONENT};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The two cell types of a chain: tunnel length `b` (S) or `q b` (L).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    S,
    L,
}

impl CellKind {
    /// Tunnel length in units of `b`.
    pub fn length_ratio(self, q: f64) -> f64 {
        match self {
            CellKind::S => 1.0,
            CellKind::L => q,
        }
    }

    pub fn letter(self) -> char {
        match self {
            CellKind::S => 'S',
            CellKind::L => 'L',
        }
    }
}

/// Matching matrix of a single delta well.
///
/// Bound regime `[[1 + δ/2, δ/2], [-δ/2, 1 - δ/2]]`; the scattering regime
/// replaces `δ` by `iδ`.
pub fn delta_matrix(params: &ChainParams) -> TransferMatrix {
    let half = match params.regime() {
        Regime::Bound => Complex64::new(0.5 * params.delta(), 0.0),
        Regime::Scattering => I * (0.5 * params.delta()),
    };
    TransferMatrix::new(1.0 + half, half, -half, 1.0 - half)
}

/// Free propagation over `length_ratio * b`.
///
/// Bound: `diag(e^{-β r}, e^{β r})`. Scattering: `diag(e^{iβ r}, e^{-iβ r})`,
/// i.e. `diag(λ^{-1}, λ)` with `λ = e^{-iβ}`.
pub fn tunnel_matrix(params: &ChainParams, length_ratio: f64) -> Result<TransferMatrix> {
    if !(length_ratio.is_finite() && length_ratio > 0.0) {
        return Err(Error::InvalidParams(format!(
            "tunnel length ratio must be positive, got {length_ratio}"
        )));
    }
    let phase = params.beta() * length_ratio;
    match params.regime() {
        Regime::Bound => {
            if phase > OVERFLOW_EXPONENT {
                return Err(Error::OverflowRisk { exponent: phase, limit: OVERFLOW_EXPONENT });
            }
            Ok(TransferMatrix::diagonal((-phase).exp().into(), phase.exp().into()))
        }
        Regime::Scattering => {
            let lambda = Complex64::from_polar(1.0, -phase);
            Ok(TransferMatrix::diagonal(lambda.conj(), lambda))
        }
    }
}

pub fn cell_matrix(params: &ChainParams, kind: CellKind) -> Result<TransferMatrix> {
    let tunnel = tunnel_matrix(params, kind.length_ratio(params.q()))?;
    Ok(delta_matrix(params) * tunnel)
}

/// Matrix of the concatenated string: `first * second`.
pub fn compose(first: &TransferMatrix, second: &TransferMatrix) -> TransferMatrix {
    first * second
}

/// Chebyshev polynomials of the second kind `(U_{n-1}(x), U_{n-2}(x))`,
/// by forward recurrence with `U_{-1} = 0`, `U_0 = 1`.
pub fn chebyshev_u_pair(x: Complex64, n: u32) -> (Complex64, Complex64) {
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `M^n = U_{n-1}(x) M - U_{n-2}(x) 1` with `x` the half-trace of `M`.
///
/// Inside a band germ this is `cos(nKb) ± y sin(nKb)/sin(Kb)` on the diagonal,
/// but the polynomial form stays finite at the band edges.
pub fn power_closed(m: &TransferMatrix, n: u32) -> Result<TransferMatrix> {
    if n == 0 {
        return Err(Error::InvalidParams("matrix power needs n >= 1".into()));
    }
    let x = m.half_trace();
    let growth = x.re.abs();
    if growth > 1.0 {
        let exponent = n as f64 * growth.acosh();
        if exponent > OVERFLOW_EXPONENT {
            return Err(Error::OverflowRisk { exponent, limit: OVERFLOW_EXPONENT });
        }
    }
    let (u1, u2) = chebyshev_u_pair(x, n);
    Ok(TransferMatrix::new(u1 * m.a - u2, u1 * m.b, u1 * m.c, u1 * m.d - u2))
}

/// Group commutator `A B A^{-1} B^{-1}`.
pub fn commutator(a: &TransferMatrix, b: &TransferMatrix) -> TransferMatrix {
    a * b * a.adjugate() * b.adjugate()
}

/// Half-trace of the commutator of the S and L cell matrices, from its closed form
/// `1 + δ²/2 · sinh²((q-1)β)` (bound) or `1 + δ²/2 · sin²((q-1)β)` (scattering).
///
/// It is conserved by the Fibonacci substitution and equals `2I + 1` in terms of the
/// usual trace-map invariant `I`.
pub fn commutator_invariant(params: &ChainParams) -> f64 {
    let delta = params.delta();
    let arg = (params.q() - 1.0) * params.beta();
    let s = match params.regime() {
        Regime::Bound => arg.sinh(),
        Regime::Scattering => arg.sin(),
    };
    1.0 + 0.5 * delta * delta * s * s
}
