//! Bloch states, the indefinite scalar product and wavefunctions along strings.
//!
//! Inside a band germ the cell matrix has eigenvalues `θ₁ = x + i√(1−x²)` and
//! `θ₂ = conj(θ₁)`. The eigenvector `(p, v)` is normalised so that the matrix
//! `V = [[p, p̄], [v, v̄]]` has determinant `−i`, with `p` purely imaginary; the
//! Bloch states then carry bracket norm `±1`.
//!
//! # Spatial layout
//!
//! The cell matrix `D·T` maps the amplitudes on one tunnel to those on the next
//! tunnel across a delta sitting at the tunnel's right end. This is the layout
//! used for the single-cell Bloch states and the bound/companion pair.
//!
//! Along a string, [`sample_wavefunction`] lays the cells out left to right in
//! word order, each with its delta at the left boundary followed by its tunnel.
//! The spatial propagation matrix of a word is then `σ·Mᵀ·σ` with
//! `σ = diag(1, −1)`, where `M` is the word's transfer matrix. It shares the
//! diagonal of `M`, so traces, bound conditions and `|S|` are the same in both
//! readings.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::TransferMatrix;
use crate::params::{ChainParams, Regime, OVERFLOW_EXPONENT};
use crate::substitution::Word;
use crate::transfer::{cell_matrix, delta_matrix, tunnel_matrix, CellKind};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochEigensystem {
    pub theta1: Complex64,
    pub theta2: Complex64,
    pub p: Complex64,
    pub v: Complex64,
}

impl BlochEigensystem {
    /// `det V = p v̄ − p̄ v`, equal to `−i` by construction.
    pub fn det_v(&self) -> Complex64 {
        self.p * self.v.conj() - self.p.conj() * self.v
    }

    /// Eigenvector of branch 1 or 2; the second is the conjugate of the first.
    pub fn eigenvector(&self, branch: Branch) -> [Complex64; 2] {
        match branch {
            Branch::First => [self.p, self.v],
            Branch::Second => [self.p.conj(), self.v.conj()],
        }
    }

    pub fn eigenvalue(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::First => self.theta1,
            Branch::Second => self.theta2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    First,
    Second,
}

/// Eigenvalues and normalised eigenvectors of a bound-regime transfer matrix.
pub fn bloch_eigensystem(m: &TransferMatrix, params: &ChainParams) -> Result<BlochEigensystem> {
    if params.regime() != Regime::Bound {
        return Err(Error::WrongRegime("bound"));
    }
    let x = m.half_trace().re;
    if !(x.abs() < 1.0) {
        return Err(Error::OutOfBand { x });
    }
    if m.b.norm() == 0.0 {
        return Err(Error::DegenerateCell("upper off-diagonal entry vanishes"));
    }
    let s = (1.0 - x * x).sqrt();
    let theta1 = Complex64::new(x, s);
    let ratio = (theta1 - m.a) / m.b;
    if !(ratio.im > 0.0) {
        return Err(Error::DegenerateCell("eigenvector ratio has no positive imaginary part"));
    }
    let p = I * (0.5 / ratio.im).sqrt();
    Ok(BlochEigensystem { theta1, theta2: theta1.conj(), p, v: ratio * p })
}

/// Values and derivatives of a wavefunction on a grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WaveSamples {
    /// Positions in units of `b`; a delta site appears twice, once on each side.
    pub positions: Vec<f64>,
    pub values: Vec<Complex64>,
    pub derivatives: Vec<Complex64>,
    /// Sample indices `(just left, just right)` of every delta that was crossed.
    pub delta_sites: Vec<(usize, usize)>,
}

impl WaveSamples {
    fn push(&mut self, x: f64, value: Complex64, derivative: Complex64) {
        self.positions.push(x);
        self.values.push(value);
        self.derivatives.push(derivative);
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn point(&self, i: usize) -> (Complex64, Complex64) {
        (self.values[i], self.derivatives[i])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Value and derivative of `A e^{−κx} + B e^{κx}` (bound) or `A e^{ikx} + B e^{−ikx}`
/// (scattering) at local coordinate `s`, with `beta = κ b` or `k b`.
fn basis_eval(regime: Regime, beta: f64, amps: [Complex64; 2], s: f64) -> (Complex64, Complex64) {
    match regime {
        Regime::Bound => {
            let (down, up) = ((-beta * s).exp(), (beta * s).exp());
            (amps[0] * down + amps[1] * up, beta * (-amps[0] * down + amps[1] * up))
        }
        Regime::Scattering => {
            let fwd = Complex64::from_polar(1.0, beta * s);
            let bwd = fwd.conj();
            (amps[0] * fwd + amps[1] * bwd, I * beta * (amps[0] * fwd - amps[1] * bwd))
        }
    }
}

/// Amplitudes reproducing value `psi` and derivative `dpsi` at the local origin.
fn amplitudes_from(regime: Regime, beta: f64, psi: Complex64, dpsi: Complex64) -> [Complex64; 2] {
    let slope = match regime {
        Regime::Bound => dpsi / beta,
        Regime::Scattering => dpsi / (I * beta),
    };
    match regime {
        Regime::Bound => [0.5 * (psi - slope), 0.5 * (psi + slope)],
        Regime::Scattering => [0.5 * (psi + slope), 0.5 * (psi - slope)],
    }
}

/// Bloch state `Φ₁` or `Φ₂ = conj(Φ₁)` of one cell, sampled at positions `0 ≤ x ≤ ratio`
/// on its tunnel (delta at the right end).
///
/// `Φ₁(x) = (p e^{−κx} + v e^{κx}) / √(2κ)`, so that `Φ(ratio) = θ Φ(0)`.
pub fn bloch_wavefunction(
    params: &ChainParams,
    kind: CellKind,
    branch: Branch,
    x_grid: &[f64],
) -> Result<WaveSamples> {
    let eig = bloch_eigensystem(&cell_matrix(params, kind)?, params)?;
    let beta = params.beta();
    let norm = (2.0 * beta).sqrt();
    let [p, v] = eig.eigenvector(branch);
    let amps = [p / norm, v / norm];
    let mut samples = WaveSamples::default();
    for &x in x_grid {
        let (value, derivative) = basis_eval(Regime::Bound, beta, amps, x);
        samples.push(x, value, derivative);
    }
    Ok(samples)
}

/// Indefinite bracket `−i (f̄ g′ − f̄′ g)` of two solutions given as `(ψ, ψ′)` at one point.
pub fn scalar_product(f: (Complex64, Complex64), g: (Complex64, Complex64)) -> Complex64 {
    -I * (f.0.conj() * g.1 - f.1.conj() * g.0)
}

/// The bracket of two sampled solutions at every common grid point.
pub fn bracket_profile(f: &WaveSamples, g: &WaveSamples) -> Vec<Complex64> {
    f.values
        .iter()
        .zip(&f.derivatives)
        .zip(g.values.iter().zip(&g.derivatives))
        .map(|((&fv, &fd), (&gv, &gd))| scalar_product((fv, fd), (gv, gd)))
        .collect()
}

/// Largest deviation of a profile from its first entry.
pub fn spread(profile: &[Complex64]) -> f64 {
    profile.first().map_or(0.0, |&z0| profile.iter().map(|z| (z - z0).norm()).fold(0.0, f64::max))
}

/// `ψ₁ψ₂′ − ψ₁′ψ₂` at every sample.
pub fn wronskian_profile(psi1: &WaveSamples, psi2: &WaveSamples) -> Vec<Complex64> {
    psi1.values
        .iter()
        .zip(&psi1.derivatives)
        .zip(psi2.values.iter().zip(&psi2.derivatives))
        .map(|((&f, &fd), (&g, &gd))| f * gd - fd * g)
        .collect()
}

fn combine(f: &WaveSamples, g: &WaveSamples, cf: Complex64, cg: Complex64) -> WaveSamples {
    WaveSamples {
        positions: f.positions.clone(),
        values: f.values.iter().zip(&g.values).map(|(a, b)| cf * a + cg * b).collect(),
        derivatives: f.derivatives.iter().zip(&g.derivatives).map(|(a, b)| cf * a + cg * b).collect(),
        delta_sites: Vec::new(),
    }
}

/// The real bound state `ψ₂` of a single well and its unbound companion `ψ₁`,
/// built from the two Bloch states at `δ = 2` (`beta = gamma / 2`).
///
/// `ψ₂ = −½ √(2λ / √(1 − x²)) (Φ₁ + Φ₂)` grows toward the delta at the right end
/// of the tunnel; `ψ₁ = i (v̄ Φ₁ − v Φ₂)` decays, and `ψ₁ψ₂′ − ψ₁′ψ₂ = 1`.
pub fn bound_companion_pair(
    gamma: f64,
    q: f64,
    kind: CellKind,
    x_grid: &[f64],
) -> Result<(WaveSamples, WaveSamples)> {
    let params = ChainParams::bound(0.5 * gamma, gamma, q)?;
    let cell = cell_matrix(&params, kind)?;
    let x = cell.half_trace().re;
    if !(x.abs() < 1.0) {
        return Err(Error::BoundOutsideGerm { x });
    }
    let eig = bloch_eigensystem(&cell, &params)?;
    let phi1 = bloch_wavefunction(&params, kind, Branch::First, x_grid)?;
    let phi2 = bloch_wavefunction(&params, kind, Branch::Second, x_grid)?;
    let lambda = (params.beta() * kind.length_ratio(q)).exp();
    let scale = -0.5 * (2.0 * lambda / (1.0 - x * x).sqrt()).sqrt();
    let psi2 = combine(&phi1, &phi2, scale.into(), scale.into());
    let psi1 = combine(&phi1, &phi2, I * eig.v.conj(), -I * eig.v);
    Ok((psi1, psi2))
}

/// Sample a solution along a string of cells, starting from `(ψ₀, ψ₀′)` just left
/// of the first delta at `x = 0`.
///
/// Every cell contributes the post-delta sample at its left boundary and
/// `grid_per_cell` samples across its tunnel, the last one at the next boundary.
pub fn sample_wavefunction(
    word: &Word,
    params: &ChainParams,
    initial: (Complex64, Complex64),
    grid_per_cell: usize,
) -> Result<WaveSamples> {
    if grid_per_cell == 0 {
        return Err(Error::InvalidParams("grid_per_cell must be at least 1".into()));
    }
    let (regime, beta, q) = (params.regime(), params.beta(), params.q());
    if regime == Regime::Bound {
        let exponent = beta * word.total_length(q);
        if exponent > OVERFLOW_EXPONENT {
            return Err(Error::OverflowRisk { exponent, limit: OVERFLOW_EXPONENT });
        }
    }
    let delta = delta_matrix(params);
    let mut amps = amplitudes_from(regime, beta, initial.0, initial.1);
    let mut samples = WaveSamples::default();
    samples.push(0.0, initial.0, initial.1);
    let mut origin = 0.0;
    for &kind in word.letters() {
        let ratio = kind.length_ratio(q);
        let before = samples.len() - 1;
        amps = delta.apply(amps);
        let (value, derivative) = basis_eval(regime, beta, amps, 0.0);
        samples.push(origin, value, derivative);
        samples.delta_sites.push((before, before + 1));
        for j in 1..=grid_per_cell {
            let s = ratio * j as f64 / grid_per_cell as f64;
            let (value, derivative) = basis_eval(regime, beta, amps, s);
            let x = if j == grid_per_cell { origin + ratio } else { origin + s };
            samples.push(x, value, derivative);
        }
        amps = tunnel_matrix(params, ratio)?.apply(amps);
        origin += ratio;
    }
    Ok(samples)
}

/// The spatial propagation matrix `σ·Mᵀ·σ` of a word whose transfer matrix is `m`.
pub fn spatial_matrix(m: &TransferMatrix) -> TransferMatrix {
    TransferMatrix::new(m.a, -m.c, -m.b, m.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::TAU;
    use crate::substitution::word_matrix;

    fn grid(ratio: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|j| ratio * j as f64 / n as f64).collect()
    }

    #[test]
    fn zero_half_trace_gives_quarter_turn() {
        // x = cosh β − (δ/2) sinh β = 0 for tanh β = 2β/γ
        let gamma = 4.0;
        let beta = crate::roots::bisect(
            |b| Ok(b.cosh() - 0.5 * gamma / b * b.sinh()),
            1.0,
            2.1,
            1e-15,
        )
        .unwrap();
        let p = ChainParams::bound(beta, gamma, 1.0).unwrap();
        let eig = bloch_eigensystem(&cell_matrix(&p, CellKind::S).unwrap(), &p).unwrap();
        assert!((eig.theta1 - I).norm() < 1e-12);
        assert!((eig.theta2 + I).norm() < 1e-12);
    }

    #[test]
    fn eigen_residual_and_normalization() {
        let p = ChainParams::bound(1.2, 4.0, 1.0).unwrap();
        let m = cell_matrix(&p, CellKind::S).unwrap();
        let eig = bloch_eigensystem(&m, &p).unwrap();
        for branch in [Branch::First, Branch::Second] {
            let vec = eig.eigenvector(branch);
            let mv = m.apply(vec);
            let theta = eig.eigenvalue(branch);
            assert!((mv[0] - theta * vec[0]).norm() < 1e-10);
            assert!((mv[1] - theta * vec[1]).norm() < 1e-10);
        }
        assert!((eig.det_v() + I).norm() < 1e-10);
        assert!(eig.p.re.abs() < 1e-15);
        assert!((eig.theta1.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvector_modulus_matches_display() {
        let p = ChainParams::bound(1.0, 3.0, 1.0).unwrap();
        let m = cell_matrix(&p, CellKind::S).unwrap();
        let eig = bloch_eigensystem(&m, &p).unwrap();
        let x = m.half_trace().re;
        let want = 3.0 * 1.0f64.exp() / (4.0 * (1.0 - x * x).sqrt());
        assert!((eig.p.norm_sqr() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn errors_outside_band_and_without_potential() {
        let p = ChainParams::bound(1.0, 0.0, 1.0).unwrap();
        let err = bloch_eigensystem(&cell_matrix(&p, CellKind::S).unwrap(), &p).unwrap_err();
        assert_eq!(err.name(), "OutOfBand");
        let flat = TransferMatrix::real(0.5, 0.0, 0.0, 0.5);
        assert_eq!(bloch_eigensystem(&flat, &p).unwrap_err().name(), "DegenerateCell");
        let s = ChainParams::scattering(1.0, 2.0, 1.0).unwrap();
        assert!(bloch_eigensystem(&flat, &s).is_err());
    }

    #[test]
    fn bloch_condition_and_norms() {
        let p = ChainParams::bound(1.5, 4.0, TAU).unwrap();
        for kind in [CellKind::S, CellKind::L] {
            let ratio = kind.length_ratio(TAU);
            let eig = bloch_eigensystem(&cell_matrix(&p, kind).unwrap(), &p);
            let Ok(eig) = eig else { continue };
            let g = grid(ratio, 50);
            let phi1 = bloch_wavefunction(&p, kind, Branch::First, &g).unwrap();
            let phi2 = bloch_wavefunction(&p, kind, Branch::Second, &g).unwrap();
            let end = phi1.values[50];
            assert!((end - eig.theta1 * phi1.values[0]).norm() < 1e-9);
            for (f, g, want) in [(&phi1, &phi1, 1.0), (&phi2, &phi2, -1.0), (&phi1, &phi2, 0.0)] {
                let profile = bracket_profile(f, g);
                assert!(spread(&profile) < 1e-9);
                assert!((profile[0] - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn self_bracket_of_real_function_vanishes() {
        let f = (Complex64::new(0.3, 0.0), Complex64::new(-1.2, 0.0));
        assert_eq!(scalar_product(f, f), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn companion_pair_wronskian_and_shapes() {
        let g = grid(1.0, 40);
        let (psi1, psi2) = bound_companion_pair(4.0, 1.0, CellKind::S, &g).unwrap();
        for w in wronskian_profile(&psi1, &psi2) {
            assert!((w - 1.0).norm() < 1e-9);
        }
        let kappa: f64 = 2.0;
        for (i, &x) in g.iter().enumerate() {
            assert!(psi2.values[i].im.abs() < 1e-10);
            assert!(psi1.values[i].im.abs() < 1e-10);
            let grow = (kappa * x).exp() / (2.0 * kappa).sqrt();
            assert!((psi2.values[i].re - grow).abs() < 1e-10 * grow);
        }
    }

    #[test]
    fn free_plane_wave_has_constant_modulus() {
        let p = ChainParams::scattering(1.3, 0.0, TAU).unwrap();
        let word = crate::substitution::fibonacci_word(6).unwrap();
        let w = sample_wavefunction(&word, &p, (1.0.into(), I * 1.3), 16).unwrap();
        for v in &w.values {
            assert!((v.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn delta_jumps_and_continuity() {
        let p = ChainParams::bound(0.8, 2.5, TAU).unwrap();
        let word: Word = "SLLSL".parse().unwrap();
        let w = sample_wavefunction(&word, &p, (1.0.into(), 0.3.into()), 8).unwrap();
        assert_eq!(w.delta_sites.len(), 5);
        for &(l, r) in &w.delta_sites {
            assert_eq!(w.positions[l], w.positions[r]);
            assert!((w.values[l] - w.values[r]).norm() <= 1e-12 * w.max_abs());
            let jump = w.derivatives[r] - w.derivatives[l];
            let want = -2.5 * w.values[l];
            assert!((jump - want).norm() <= 1e-10 * want.norm().max(1e-300));
        }
    }

    #[test]
    fn spatial_matrix_propagates_samples() {
        let p = ChainParams::scattering(2.1, 1.7, TAU).unwrap();
        let word: Word = "LSL".parse().unwrap();
        let (psi0, dpsi0) = (Complex64::new(0.4, -0.2), Complex64::new(1.1, 0.5));
        let w = sample_wavefunction(&word, &p, (psi0, dpsi0), 4).unwrap();
        let m = spatial_matrix(&word_matrix(&word, &p).unwrap());
        let start = amplitudes_from(Regime::Scattering, 2.1, psi0, dpsi0);
        let end = m.apply(start);
        let last = w.len() - 1;
        let (value, _) = basis_eval(Regime::Scattering, 2.1, end, 0.0);
        assert!((value - w.values[last]).norm() < 1e-12);
    }
}
