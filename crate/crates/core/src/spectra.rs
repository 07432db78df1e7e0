//! Band germs, bound states and Bloch labels at negative energy.
//!
//! A band germ of a finite string is a maximal energy interval on which the
//! half-trace `x` of its transfer matrix satisfies `|x| <= 1`; the string then
//! admits Bloch-type boundary conditions. Bound states are the zeros of the lower
//! diagonal entry `d`. Both are located by a uniform scan in `beta` followed by
//! bisection, and every scan is repeated on a four times finer grid: if the finer
//! grid sees a different number of germs or roots, [`Error::GridTooCoarse`] is
//! returned instead of a partial answer.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{Chain, ChainParams, Regime};
use crate::roots::{bisect, evaluate, grid_roots, sign_changes, uniform_grid, ROOT_TOL};
use crate::substitution::{word_matrix, Word};
use crate::transfer::{cell_matrix, power_closed, CellKind};

/// Slack on `|x| <= 1` when deciding whether a segment lies inside a germ.
pub const GERM_SLACK: f64 = 1e-9;

const REFINEMENT: usize = 4;

/// Energy window and resolution of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scan {
    pub beta_min: f64,
    pub beta_max: f64,
    pub steps: usize,
}

impl Default for Scan {
    fn default() -> Self {
        Self { beta_min: 0.05, beta_max: 6.0, steps: 2000 }
    }
}

impl Scan {
    pub fn new(beta_min: f64, beta_max: f64, steps: usize) -> Result<Self> {
        let scan = Self { beta_min, beta_max, steps };
        scan.validate()?;
        Ok(scan)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta_min > 0.0 && self.beta_min < self.beta_max && self.beta_max.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "need 0 < beta_min < beta_max, got [{}, {}]",
                self.beta_min, self.beta_max
            )));
        }
        if self.steps < 100 {
            return Err(Error::InvalidParams(format!(
                "need at least 100 grid steps, got {}",
                self.steps
            )));
        }
        Ok(())
    }

    fn refined(&self) -> Self {
        Self { steps: self.steps * REFINEMENT, ..*self }
    }
}

/// What bounds a germ at one end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// `x = +1` (Bloch label `Kb = 0`).
    XPlusOne,
    /// `x = -1` (Bloch label `Kb = pi`).
    XMinusOne,
    /// The germ continues beyond the scanned window.
    ScanLimit,
}

impl EdgeKind {
    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::XPlusOne => "x=+1",
            EdgeKind::XMinusOne => "x=-1",
            EdgeKind::ScanLimit => "scan_limit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandGerm {
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub edge_lo: EdgeKind,
    pub edge_hi: EdgeKind,
}

impl BandGerm {
    pub fn contains(&self, beta: f64) -> bool {
        self.beta_lo <= beta && beta <= self.beta_hi
    }

    pub fn width(&self) -> f64 {
        self.beta_hi - self.beta_lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub beta_star: f64,
    pub index: usize,
}

/// Half-trace of the word's matrix at energy `beta` (real in both regimes).
pub fn word_half_trace(word: &Word, chain: &Chain, beta: f64) -> Result<f64> {
    Ok(word_matrix(word, &chain.at(beta)?)?.half_trace().re)
}

/// Lower diagonal entry `d` of the word's matrix.
pub fn word_lower_entry(word: &Word, chain: &Chain, beta: f64) -> Result<Complex64> {
    Ok(word_matrix(word, &chain.at(beta)?)?.d)
}

fn require_bound(chain: &Chain) -> Result<()> {
    match chain.regime {
        Regime::Bound => Ok(()),
        Regime::Scattering => Err(Error::WrongRegime("bound")),
    }
}

/// 0 inside a band germ (`|x| <= 1`), 1 outside.
pub fn energy_gauge(word: &Word, chain: &Chain, beta: f64) -> Result<u8> {
    require_bound(chain)?;
    let x = word_half_trace(word, chain, beta)?;
    Ok(if x.abs() <= 1.0 { 0 } else { 1 })
}

fn germs_on_grid(word: &Word, chain: &Chain, scan: &Scan) -> Result<Vec<BandGerm>> {
    let x = |beta: f64| word_half_trace(word, chain, beta);
    let grid = uniform_grid(scan.beta_min, scan.beta_max, scan.steps);
    let xs = evaluate(&grid, x)?;

    let mut events = Vec::new();
    for (target, kind) in [(1.0, EdgeKind::XPlusOne), (-1.0, EdgeKind::XMinusOne)] {
        let shifted: Vec<f64> = xs.iter().map(|v| v - target).collect();
        for i in sign_changes(&shifted) {
            let edge = bisect(|b| Ok(x(b)? - target), grid[i], grid[i + 1], ROOT_TOL)?;
            events.push((edge, kind));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut bounds = Vec::with_capacity(events.len() + 2);
    bounds.push((scan.beta_min, EdgeKind::ScanLimit));
    bounds.extend(events);
    bounds.push((scan.beta_max, EdgeKind::ScanLimit));

    let mut germs = Vec::new();
    let mut open: Option<(f64, EdgeKind)> = None;
    for w in bounds.windows(2) {
        let ((u, ku), (v, _)) = (w[0], w[1]);
        let inside = x(0.5 * (u + v))?.abs() <= 1.0 + GERM_SLACK;
        match (inside, open) {
            (true, None) => open = Some((u, ku)),
            (false, Some((start, kind))) => {
                germs.push(BandGerm { beta_lo: start, beta_hi: u, edge_lo: kind, edge_hi: ku });
                open = None;
            }
            _ => {}
        }
    }
    if let Some((start, kind)) = open {
        germs.push(BandGerm {
            beta_lo: start,
            beta_hi: scan.beta_max,
            edge_lo: kind,
            edge_hi: EdgeKind::ScanLimit,
        });
    }
    Ok(germs)
}

/// Band germs of `word` inside the scan window, sorted by energy variable.
///
/// Works in either regime; in the scattering regime the germs are the
/// positive-energy bands of the periodically continued string.
pub fn band_germs(word: &Word, chain: &Chain, scan: &Scan) -> Result<Vec<BandGerm>> {
    scan.validate()?;
    let germs = germs_on_grid(word, chain, scan)?;
    let finer = germs_on_grid(word, chain, &scan.refined())?;
    if finer.len() != germs.len() {
        return Err(Error::GridTooCoarse {
            what: "band germs",
            coarse_steps: scan.steps,
            coarse_count: germs.len(),
            refined_count: finer.len(),
        });
    }
    Ok(germs)
}

/// Bound-state energies: sign-change roots of `d(beta)`.
pub fn bound_states(word: &Word, chain: &Chain, scan: &Scan) -> Result<Vec<BoundState>> {
    require_bound(chain)?;
    scan.validate()?;
    let d = |beta: f64| Ok(word_lower_entry(word, chain, beta)?.re);
    let roots = grid_roots(d, scan.beta_min, scan.beta_max, scan.steps)?;
    let finer = scan.refined();
    let refined = grid_roots(d, finer.beta_min, finer.beta_max, finer.steps)?;
    if refined.len() != roots.len() {
        return Err(Error::GridTooCoarse {
            what: "bound states",
            coarse_steps: scan.steps,
            coarse_count: roots.len(),
            refined_count: refined.len(),
        });
    }
    Ok(roots
        .into_iter()
        .enumerate()
        .map(|(index, beta_star)| BoundState { beta_star, index })
        .collect())
}

/// Principal Bloch label `Kb = arccos(x)` in `[0, pi]`.
pub fn bloch_label(x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0 + 1e-12) {
        return Err(Error::OutOfBand { x });
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// Rational Bloch vector `Kb = mu pi / n` of participation number `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalLabel {
    pub n: usize,
    pub mu: usize,
    pub kb: f64,
    /// Partial band `[mu pi / n, (mu + 1) pi / n]` above this label; none for `mu = n`.
    pub partial_band: Option<(f64, f64)>,
}

impl RationalLabel {
    /// Character `exp(i mu 2 pi / 2n)` of the cyclic group of order `2n`.
    pub fn representation(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.mu as f64 * PI / self.n as f64)
    }
}

pub fn rational_labels(n: usize) -> Result<Vec<RationalLabel>> {
    if n == 0 {
        return Err(Error::InvalidParams("participation number must be >= 1".into()));
    }
    let step = PI / n as f64;
    Ok((0..=n)
        .map(|mu| RationalLabel {
            n,
            mu,
            kb: if mu == n { PI } else { mu as f64 * step },
            partial_band: (mu < n).then(|| {
                (mu as f64 * step, if mu + 1 == n { PI } else { (mu + 1) as f64 * step })
            }),
        })
        .collect())
}

/// Superband index and reduced label of `Kb` for a supercell of `n` cells.
pub fn supercell_label(kb: f64, n: usize) -> Result<(usize, f64)> {
    if n == 0 {
        return Err(Error::InvalidParams("supercell needs n >= 1".into()));
    }
    if !(0.0..=PI).contains(&kb) {
        return Err(Error::InvalidParams(format!("Bloch label {kb} outside [0, pi]")));
    }
    let width = PI / n as f64;
    let mu = ((kb / width).floor() as usize).min(n - 1);
    Ok((mu, kb - mu as f64 * width))
}

fn single_cell(beta: f64, gamma: f64) -> Result<(f64, f64)> {
    let m = cell_matrix(&ChainParams::bound(beta, gamma, 1.0)?, CellKind::S)?;
    Ok((m.half_trace().re, m.half_difference().re))
}

/// Both sides of `tan(n Kb) = sin(Kb) / y` for the string of `n` equal cells.
///
/// The right side diverges where `y = 0`.
pub fn binding_equation_residual(n: usize, beta: f64, gamma: f64) -> Result<(f64, f64)> {
    let (x, y) = single_cell(beta, gamma)?;
    let kb = bloch_label(x)?;
    Ok(((n as f64 * kb).tan(), kb.sin() / y))
}

/// `y sin(n Kb) - sin(Kb) cos(n Kb)`: the binding equation with denominators cleared.
/// Equal to `-sin(Kb) d_n`, so its zeros inside the germ are the bound states.
fn binding_numerator(n: usize, beta: f64, gamma: f64) -> Result<f64> {
    let (x, y) = single_cell(beta, gamma)?;
    let kb = bloch_label(x)?;
    let nk = n as f64 * kb;
    Ok(y * nk.sin() - kb.sin() * nk.cos())
}

/// The germ of the single cell inside the scan window.
pub fn single_cell_germ(gamma: f64, scan: &Scan) -> Result<BandGerm> {
    let word = Word::repeat(CellKind::S, 1);
    let germs = band_germs(&word, &Chain::bound(gamma, 1.0), scan)?;
    match germs.as_slice() {
        [germ] => Ok(*germ),
        [] => Err(Error::OutOfBand { x: single_cell(scan.beta_min, gamma)?.0 }),
        _ => Err(Error::InvalidParams(format!(
            "expected one single-cell germ in the window, found {}",
            germs.len()
        ))),
    }
}

/// Energies where the two sides of the binding equation for `S^n` intersect.
pub fn binding_intersections(n: usize, gamma: f64, scan: &Scan) -> Result<Vec<f64>> {
    let germ = single_cell_germ(gamma, scan)?;
    let margin = 1e-9 * germ.width();
    let inner = Scan::new(germ.beta_lo + margin, germ.beta_hi - margin, scan.steps)?;
    let f = |beta: f64| binding_numerator(n, beta, gamma);
    let roots = grid_roots(f, inner.beta_min, inner.beta_max, inner.steps)?;
    let finer = inner.refined();
    let refined = grid_roots(f, finer.beta_min, finer.beta_max, finer.steps)?;
    if refined.len() != roots.len() {
        return Err(Error::GridTooCoarse {
            what: "binding intersections",
            coarse_steps: scan.steps,
            coarse_count: roots.len(),
            refined_count: refined.len(),
        });
    }
    Ok(roots)
}

/// One partial band of the rational scheme and the bound states of `S^n` inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialBandCount {
    pub mu: usize,
    pub kb_lo: f64,
    pub kb_hi: f64,
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub bound_count: usize,
}

fn check_monotone(gamma: f64, germ: &BandGerm) -> Result<()> {
    let grid = uniform_grid(germ.beta_lo, germ.beta_hi, 512);
    let xs = evaluate(&grid, |b| Ok(single_cell(b, gamma)?.0))?;
    let rising = xs.windows(2).all(|w| w[1] >= w[0]);
    let falling = xs.windows(2).all(|w| w[1] <= w[0]);
    if rising || falling {
        Ok(())
    } else {
        Err(Error::NonMonotoneDispersion { lo: germ.beta_lo, hi: germ.beta_hi })
    }
}

/// Energy inside the germ where the single-cell dispersion reaches `cos(kb)`,
/// clamped to the germ ends when the label lies beyond the scan window.
fn invert_dispersion(gamma: f64, germ: &BandGerm, kb: f64) -> Result<f64> {
    let target = kb.cos();
    let f = |b: f64| Ok(single_cell(b, gamma)?.0 - target);
    let (f_lo, f_hi) = (f(germ.beta_lo)?, f(germ.beta_hi)?);
    if (f_lo > 0.0) != (f_hi > 0.0) {
        return bisect(f, germ.beta_lo, germ.beta_hi, ROOT_TOL);
    }
    Ok(if f_lo.abs() <= f_hi.abs() { germ.beta_lo } else { germ.beta_hi })
}

/// Split the single-cell band into the `n` partial bands of the rational labels
/// `mu pi / n` and count the bound states of `S^n` in each.
pub fn partial_band_census(n: usize, gamma: f64, scan: &Scan) -> Result<Vec<PartialBandCount>> {
    let germ = single_cell_germ(gamma, scan)?;
    check_monotone(gamma, &germ)?;
    let roots = bound_states(&Word::repeat(CellKind::S, n), &Chain::bound(gamma, 1.0), scan)?;
    rational_labels(n)?
        .iter()
        .filter_map(|label| label.partial_band.map(|band| (label.mu, band)))
        .map(|(mu, (kb_lo, kb_hi))| {
            let b1 = invert_dispersion(gamma, &germ, kb_lo)?;
            let b2 = invert_dispersion(gamma, &germ, kb_hi)?;
            let (beta_lo, beta_hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
            let bound_count = roots
                .iter()
                .filter(|r| beta_lo <= r.beta_star && r.beta_star < beta_hi)
                .count();
            Ok(PartialBandCount { mu, kb_lo, kb_hi, beta_lo, beta_hi, bound_count })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosSample {
    pub beta: f64,
    /// Dimensionless energy `-beta^2`, in units of `hbar^2 / 2 m b^2`.
    pub energy: f64,
    pub kb: f64,
    /// `|dK/dE| / pi`, so that the density integrates to one over the band.
    pub density: f64,
    /// Quadrature weight in `E` of this sample; `sum(density * weight)` approximates
    /// the integral over the band.
    pub weight: f64,
}

/// Density of states of the periodic chain from the single-cell dispersion.
///
/// Samples are placed on Chebyshev nodes of the germ, which cluster toward the
/// band edges where the density diverges. Derivatives use centered differences,
/// one-sided at the two outermost samples.
pub fn dos_estimate(gamma: f64, scan: &Scan) -> Result<Vec<DosSample>> {
    let germ = single_cell_germ(gamma, scan)?;
    let n = scan.steps;
    let (mid, half) = (0.5 * (germ.beta_lo + germ.beta_hi), 0.5 * germ.width());
    let angle = |j: usize| PI * (j as f64 + 0.5) / n as f64;
    let betas: Vec<f64> = (0..n).map(|j| mid - half * angle(j).cos()).collect();
    let kbs = evaluate(&betas, |b| bloch_label(single_cell(b, gamma)?.0))?;
    let energies: Vec<f64> = betas.iter().map(|b| -b * b).collect();
    let slope = |i: usize, j: usize| ((kbs[j] - kbs[i]) / (energies[j] - energies[i])).abs() / PI;
    Ok((0..n)
        .map(|j| {
            let density = match j {
                0 => slope(0, 1),
                _ if j == n - 1 => slope(n - 2, n - 1),
                _ => slope(j - 1, j + 1),
            };
            // midpoint rule in the Chebyshev angle, mapped to E = -beta^2
            let weight = 2.0 * betas[j] * half * angle(j).sin() * PI / n as f64;
            DosSample { beta: betas[j], energy: energies[j], kb: kbs[j], density, weight }
        })
        .collect())
}

/// Sample `x` of `S^n` through the closed-form power (used to cross-check germs of repeats).
pub fn repeated_half_trace(n: u32, beta: f64, gamma: f64) -> Result<f64> {
    let m = cell_matrix(&ChainParams::bound(beta, gamma, 1.0)?, CellKind::S)?;
    Ok(power_closed(&m, n)?.half_trace().re)
}
