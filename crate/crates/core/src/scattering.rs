//! Positive-energy scattering: S-matrix, pole correspondence, backscattering
//! maxima of periodic strings, commuting energies and Fibonacci atlas data.
//!
//! The amplitude relation is `r = M l` with `l = (l₊, l₋)` the plane-wave
//! amplitudes left of the string and `r = (r₊, r₋)` those right of it. Free
//! propagation phases `e^{−iβh}` are divided out so that a free string has `S = 1`.
//! Since `M` is the product in word order, the last letter is the first one crossed
//! from the left; this frame is the mirror image of the one `sample_wavefunction` walks.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::TransferMatrix;
use crate::params::{Chain, ChainParams, Regime, TAU};
use crate::spectra::{band_germs, bound_states, BoundState, EdgeKind, Scan};
use crate::substitution::{fibonacci, fibonacci_word, word_matrix, Word};
use crate::transfer::{cell_matrix, commutator, power_closed, CellKind};

/// Below this `|d|` the S-matrix is reported as a pole.
pub const POLE_THRESHOLD: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `[[s_pp, s_pm], [s_mp, s_mm]]`: forward from the left, reflection from the
/// right, reflection from the left, forward from the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix {
    pub s_pp: Complex64,
    pub s_pm: Complex64,
    pub s_mp: Complex64,
    pub s_mm: Complex64,
    /// Total string length in units of `b`.
    pub h_ratio: f64,
}

impl SMatrix {
    pub fn as_matrix(&self) -> TransferMatrix {
        TransferMatrix::new(self.s_pp, self.s_pm, self.s_mp, self.s_mm)
    }

    /// Largest entry of `S S† − 1`.
    pub fn unitarity_defect(&self) -> f64 {
        let s = self.as_matrix();
        let dagger = TransferMatrix::new(s.a.conj(), s.c.conj(), s.b.conj(), s.d.conj());
        (s * dagger).max_abs_diff(&TransferMatrix::IDENTITY)
    }

    /// `| |s_pp|² + |s_mp|² − 1 |`.
    pub fn flux_defect(&self) -> f64 {
        (self.s_pp.norm_sqr() + self.s_mp.norm_sqr() - 1.0).abs()
    }
}

/// S-matrix of a scattering-regime transfer matrix for a string of length `h_ratio`.
pub fn s_matrix_of(m: &TransferMatrix, beta: f64, h_ratio: f64) -> Result<SMatrix> {
    let modulus = m.d.norm();
    if !(modulus >= POLE_THRESHOLD) {
        return Err(Error::ResonancePole { modulus });
    }
    let phase = Complex64::from_polar(1.0, -beta * h_ratio);
    Ok(SMatrix {
        s_pp: phase / m.d,
        s_pm: m.b * phase * phase / m.d,
        s_mp: -m.c / m.d,
        s_mm: phase / m.d,
        h_ratio,
    })
}

pub fn s_matrix(word: &Word, params: &ChainParams) -> Result<SMatrix> {
    if params.regime() != Regime::Scattering {
        return Err(Error::WrongRegime("scattering"));
    }
    let m = word_matrix(word, params)?;
    s_matrix_of(&m, params.beta(), word.total_length(params.q()))
}

/// Poles of the continued S-matrix: the bound states `d(κ) = 0`.
pub fn bound_poles(word: &Word, gamma: f64, q: f64, scan: &Scan) -> Result<Vec<BoundState>> {
    bound_states(word, &Chain::bound(gamma, q), scan)
}

/// `|s_pp|` continued to `β = iκ`: `e^{κh} / |d(κ)|`, divergent at a pole.
pub fn continued_forward_amplitude(word: &Word, gamma: f64, q: f64, kappa: f64) -> Result<f64> {
    let params = ChainParams::bound(kappa, gamma, q)?;
    let d = word_matrix(word, &params)?.d;
    Ok((kappa * word.total_length(q)).exp() / d.norm())
}

/// `|s_mp|` of `Sⁿ` at one energy, with the Bloch label of the single cell when it exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackscatterSample {
    pub beta: f64,
    pub abs_s_mp: f64,
    pub kb: Option<f64>,
}

/// A local maximum of `|s_mp|` tagged with its nearest band edge `Kb = μπ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackscatterPeak {
    pub beta: f64,
    pub abs_s_mp: f64,
    /// Full width at half maximum on the scan grid.
    pub width: f64,
    pub edge_beta: f64,
    pub mu: i64,
}

fn single_cell_scattering(beta: f64, gamma: f64) -> Result<TransferMatrix> {
    cell_matrix(&ChainParams::scattering(beta, gamma, 1.0)?, CellKind::S)
}

fn periodic_s_matrix(n: u32, beta: f64, gamma: f64) -> Result<SMatrix> {
    let m = power_closed(&single_cell_scattering(beta, gamma)?, n)?;
    s_matrix_of(&m, beta, n as f64)
}

/// `|s_mp|` of `Sⁿ` over the scan grid.
pub fn backscatter_scan(n: u32, gamma: f64, scan: &Scan) -> Result<Vec<BackscatterSample>> {
    scan.validate()?;
    let grid = crate::roots::uniform_grid(scan.beta_min, scan.beta_max, scan.steps);
    grid.iter()
        .map(|&beta| {
            let s = periodic_s_matrix(n, beta, gamma)?;
            let x = single_cell_scattering(beta, gamma)?.half_trace().re;
            let kb = (x.abs() <= 1.0).then(|| x.acos());
            Ok(BackscatterSample { beta, abs_s_mp: s.s_mp.norm(), kb })
        })
        .collect()
}

/// Local maxima of `|s_mp|` for `Sⁿ`, each tagged with the nearest single-cell band edge.
pub fn backscatter_peaks(n: u32, gamma: f64, scan: &Scan) -> Result<Vec<BackscatterPeak>> {
    let samples = backscatter_scan(n, gamma, scan)?;
    let germs = band_germs(&Word::repeat(CellKind::S, 1), &Chain::scattering(gamma, 1.0), scan)?;
    let edges: Vec<f64> = germs
        .iter()
        .flat_map(|g| [(g.beta_lo, g.edge_lo), (g.beta_hi, g.edge_hi)])
        .filter(|(_, kind)| *kind != EdgeKind::ScanLimit)
        .map(|(beta, _)| beta)
        .collect();
    let values: Vec<f64> = samples.iter().map(|s| s.abs_s_mp).collect();
    let mut peaks = Vec::new();
    for i in 1..values.len() - 1 {
        if !(values[i] > values[i - 1] && values[i] >= values[i + 1]) {
            continue;
        }
        let half = 0.5 * values[i];
        let left = (0..i).rev().find(|&j| values[j] < half).unwrap_or(0);
        let right = (i + 1..values.len()).find(|&j| values[j] < half).unwrap_or(values.len() - 1);
        let beta = samples[i].beta;
        let edge_beta = edges
            .iter()
            .copied()
            .min_by(|a, b| (a - beta).abs().total_cmp(&(b - beta).abs()))
            .unwrap_or(f64::NAN);
        peaks.push(BackscatterPeak {
            beta,
            abs_s_mp: values[i],
            width: samples[right].beta - samples[left].beta,
            edge_beta,
            mu: (edge_beta / PI).round() as i64,
        });
    }
    Ok(peaks)
}

/// High-energy band-edge amplitudes of `Sⁿ`: `S₊₊ = 1/(1 − i nδ/2)` and
/// `S₋₊ = i (nδ/2) / (1 − i nδ/2)`.
pub fn band_edge_limit(n: u32, delta: f64) -> (Complex64, Complex64) {
    let g = 0.5 * n as f64 * delta;
    let denom = Complex64::new(1.0, -g);
    (1.0 / denom, I * g / denom)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutingPoint {
    pub p: u32,
    pub beta_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutingReport {
    pub point: CommutingPoint,
    /// `M₂ = (−1)^p M₁` to within `1e-9`.
    pub proportional: bool,
    /// Both half-traces lie in `[−1, 1]`.
    pub in_overlap: bool,
    pub proportional_deviation: f64,
    pub commutator_deviation: f64,
    pub x_short: f64,
    pub x_long: f64,
}

fn parity(k: u64) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The commuting energies `β = τpπ`, `p = 1..=p_max`, of a golden-mean chain.
pub fn commuting_points(p_max: u32, gamma: f64) -> Result<Vec<CommutingReport>> {
    (1..=p_max)
        .map(|p| {
            let beta_p = TAU * p as f64 * PI;
            let params = ChainParams::scattering(beta_p, gamma, TAU)?;
            let m1 = cell_matrix(&params, CellKind::S)?;
            let m2 = cell_matrix(&params, CellKind::L)?;
            let proportional_deviation = m2.max_abs_diff(&m1.scale(parity(p.into()).into()));
            let commutator_deviation =
                commutator(&m1, &m2).max_abs_diff(&TransferMatrix::IDENTITY);
            let (x_short, x_long) = (m1.half_trace().re, m2.half_trace().re);
            Ok(CommutingReport {
                point: CommutingPoint { p, beta_p },
                proportional: proportional_deviation <= 1e-9,
                in_overlap: x_short.abs() <= 1.0 && x_long.abs() <= 1.0,
                proportional_deviation,
                commutator_deviation,
                x_short,
                x_long,
            })
        })
        .collect()
}

/// Largest entry of `M(W_m) − (−1)^{p f_{m−1}} M₁^{f_m}` at `β = τpπ`.
pub fn fibonacci_periodic_equivalence(m: usize, p: u32, gamma: f64) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidParams("commuting index p starts at 1".into()));
    }
    let params = ChainParams::scattering(TAU * p as f64 * PI, gamma, TAU)?;
    let word = fibonacci_word(m)?;
    let direct = word_matrix(&word, &params)?;
    let m1 = cell_matrix(&params, CellKind::S)?;
    let f_m = fibonacci(m) as u32;
    let sign = parity(p as u64 * fibonacci(m - 1));
    let periodic = power_closed(&m1, f_m)?.scale(sign.into());
    Ok(direct.max_abs_diff(&periodic))
}

/// What an atlas row marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtlasKind {
    Edge(EdgeKind),
    CommutingLine,
}

impl AtlasKind {
    pub fn name(self) -> &'static str {
        match self {
            AtlasKind::Edge(kind) => kind.name(),
            AtlasKind::CommutingLine => "commuting_line",
        }
    }
}

/// One band edge of a single cell (or a commuting-line marker) at one strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtlasRow {
    pub gamma: f64,
    /// `None` for commuting-line markers.
    pub cell: Option<CellKind>,
    pub regime: Regime,
    pub kind: AtlasKind,
    /// Always positive; the regime says which energy sign it belongs to.
    pub beta: f64,
}

/// Band edges of the S and L cells in both regimes for every strength in `gammas`,
/// followed per strength by the commuting energies `pπ / (q − 1)` inside the scan
/// window (`τpπ` for the golden mean).
pub fn fibonacci_atlas(gammas: &[f64], q: f64, scan: &Scan) -> Result<Vec<AtlasRow>> {
    let mut rows = Vec::new();
    for &gamma in gammas {
        for regime in [Regime::Bound, Regime::Scattering] {
            for cell in [CellKind::S, CellKind::L] {
                let chain = Chain::new(gamma, q, regime);
                for germ in band_germs(&Word::repeat(cell, 1), &chain, scan)? {
                    for (beta, kind) in [(germ.beta_lo, germ.edge_lo), (germ.beta_hi, germ.edge_hi)] {
                        if kind != EdgeKind::ScanLimit {
                            rows.push(AtlasRow {
                                gamma,
                                cell: Some(cell),
                                regime,
                                kind: AtlasKind::Edge(kind),
                                beta,
                            });
                        }
                    }
                }
            }
        }
        // Cell matrices are proportional where (q - 1) beta is a multiple of pi.
        let spacing = PI / (q - 1.0).abs();
        let mut p = 1;
        while spacing.is_finite() {
            let beta = spacing * p as f64;
            if beta > scan.beta_max {
                break;
            }
            if beta >= scan.beta_min {
                rows.push(AtlasRow {
                    gamma,
                    cell: None,
                    regime: Regime::Scattering,
                    kind: AtlasKind::CommutingLine,
                    beta,
                });
            }
            p += 1;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::fibonacci_word;

    #[test]
    fn free_string_is_transparent() {
        let p = ChainParams::scattering(1.7, 0.0, TAU).unwrap();
        let s = s_matrix(&fibonacci_word(7).unwrap(), &p).unwrap();
        assert!(s.as_matrix().max_abs_diff(&TransferMatrix::IDENTITY) < 1e-12);
    }

    #[test]
    fn single_cell_conserves_flux() {
        for (beta, gamma) in [(0.3, 1.0), (2.0, -4.0), (5.5, 9.0)] {
            let p = ChainParams::scattering(beta, gamma, 1.0).unwrap();
            let s = s_matrix(&Word::repeat(CellKind::S, 1), &p).unwrap();
            assert!(s.flux_defect() < 1e-12);
            assert!(s.unitarity_defect() < 1e-12);
            assert!((s.s_pp - s.s_mm).norm() < 1e-15);
        }
    }

    #[test]
    fn s_matrix_needs_scattering_regime() {
        let p = ChainParams::bound(1.0, 2.0, 1.0).unwrap();
        assert_eq!(s_matrix(&Word::repeat(CellKind::S, 1), &p).unwrap_err().name(), "WrongRegime");
    }

    #[test]
    fn vanishing_d_is_a_pole() {
        let m = TransferMatrix::real(1.0, 0.0, 0.0, 0.0);
        assert_eq!(s_matrix_of(&m, 1.0, 1.0).unwrap_err().name(), "ResonancePole");
    }

    #[test]
    fn single_well_pole() {
        let poles = bound_poles(&Word::repeat(CellKind::S, 1), 4.0, 1.0, &Scan::default()).unwrap();
        assert_eq!(poles.len(), 1);
        assert!((poles[0].beta_star - 2.0).abs() < 1e-12);
        let near = continued_forward_amplitude(&Word::repeat(CellKind::S, 1), 4.0, 1.0, 2.0 + 1e-3)
            .unwrap();
        let far = continued_forward_amplitude(&Word::repeat(CellKind::S, 1), 4.0, 1.0, 2.5).unwrap();
        assert!(near > 100.0 * far);
    }

    #[test]
    fn band_edge_limit_is_unitary() {
        assert_eq!(band_edge_limit(5, 0.0), (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        for (n, delta) in [(1, 0.3), (10, 0.01), (400, 2.0)] {
            let (pp, mp) = band_edge_limit(n, delta);
            assert!((pp.norm_sqr() + mp.norm_sqr() - 1.0).abs() < 1e-14);
        }
        let (pp, mp) = band_edge_limit(10_000, 1.0);
        assert!(pp.norm() < 1e-3 && mp.norm() > 0.999);
    }

    #[test]
    fn commuting_first_point() {
        let small = commuting_points(2, 0.5).unwrap();
        assert!(small.iter().all(|r| r.proportional && r.commutator_deviation < 1e-9));
        assert!(small[0].in_overlap);
        let large = commuting_points(1, 40.0).unwrap();
        assert!(large[0].proportional && !large[0].in_overlap);
    }

    #[test]
    fn free_equivalence_is_exact() {
        assert!(fibonacci_periodic_equivalence(7, 1, 0.0).unwrap() < 1e-12);
        assert!(fibonacci_periodic_equivalence(3, 1, 1.0).unwrap() < 1e-10);
    }
}
