//! One function per subcommand, each producing a [`Table`].

use num_complex::Complex64;
use rayon::prelude::*;

use deltachain::roots::uniform_grid;
use deltachain::scattering::{commuting_points, fibonacci_atlas, AtlasKind};
use deltachain::spectra::{binding_equation_residual, dos_estimate, single_cell_germ, word_lower_entry};
use deltachain::states::sample_wavefunction;
use deltachain::substitution::{fibonacci_word, word_counts};
use deltachain::{band_germs, bound_states, s_matrix, Chain, ChainParams, Regime, Scan, Word};

use crate::table::{Cell, Table};
use crate::{parse_word_spec, CliError, Command, Common};

pub fn run(command: &Command, common: &Common) -> Result<Table, CliError> {
    match command {
        Command::Bands => bands(common),
        Command::Bound => bound(common),
        Command::Atlas { gamma_min, gamma_max, gamma_steps } => {
            atlas(common, *gamma_min, *gamma_max, *gamma_steps)
        }
        Command::Scatter => scatter(common),
        Command::Wave { beta, grid_per_cell, psi0_re, psi0_im, dpsi0_re, dpsi0_im } => {
            let psi0 = Complex64::new(*psi0_re, *psi0_im);
            wave(common, *beta, *grid_per_cell, psi0, (*dpsi0_re, *dpsi0_im))
        }
        Command::Dos => dos(common),
        Command::Binding { n } => binding(common, *n),
        Command::FibInfo { m_max } => fib_info(*m_max),
        Command::Commute { p_max } => commute(common, *p_max),
    }
}

fn scan(common: &Common) -> Result<Scan, CliError> {
    Ok(Scan::new(common.beta_min, common.beta_max, common.steps)?)
}

fn word(common: &Common) -> Result<Word, CliError> {
    Ok(parse_word_spec(&common.word)?)
}

fn regime(common: &Common, default: Regime) -> Regime {
    common.regime.map_or(default, Into::into)
}

fn bands(common: &Common) -> Result<Table, CliError> {
    let word = word(common)?;
    let chain = Chain::new(common.gamma, common.q, regime(common, Regime::Bound));
    let germs = band_germs(&word, &chain, &scan(common)?)?;
    let mut table = Table::new(
        "bands",
        &["word", "gamma", "q", "germ_index", "beta_lo", "beta_hi", "edge_kind_lo", "edge_kind_hi"],
    );
    for (i, g) in germs.iter().enumerate() {
        table.push(vec![
            common.word.as_str().into(),
            common.gamma.into(),
            common.q.into(),
            i.into(),
            g.beta_lo.into(),
            g.beta_hi.into(),
            g.edge_lo.name().into(),
            g.edge_hi.name().into(),
        ]);
    }
    Ok(table)
}

fn bound(common: &Common) -> Result<Table, CliError> {
    let word = word(common)?;
    let chain = Chain::new(common.gamma, common.q, regime(common, Regime::Bound));
    let roots = bound_states(&word, &chain, &scan(common)?)?;
    let mut table = Table::new("bound", &["word", "gamma", "q", "index", "beta_star", "d_at_root"]);
    for r in roots {
        let d = word_lower_entry(&word, &chain, r.beta_star)?.re;
        table.push(vec![
            common.word.as_str().into(),
            common.gamma.into(),
            common.q.into(),
            r.index.into(),
            r.beta_star.into(),
            d.into(),
        ]);
    }
    Ok(table)
}

fn atlas(common: &Common, gamma_min: f64, gamma_max: f64, gamma_steps: usize) -> Result<Table, CliError> {
    if !(gamma_min < gamma_max) || gamma_steps == 0 {
        return Err(CliError::Usage("need gamma_min < gamma_max and gamma_steps >= 1".into()));
    }
    let gammas = uniform_grid(gamma_min, gamma_max, gamma_steps);
    let rows = fibonacci_atlas(&gammas, common.q, &scan(common)?)?;
    let mut table = Table::new("atlas", &["gamma", "cell", "edge_kind", "beta"]);
    table.notes.push(
        "beta < 0 marks positive-energy (scattering) edges and commuting lines; \
         bound-regime edges have beta > 0"
            .into(),
    );
    for r in rows {
        let beta = match r.regime {
            Regime::Bound => r.beta,
            Regime::Scattering => -r.beta,
        };
        let cell = r.cell.map(|c| c.letter().to_string());
        let kind = match r.kind {
            AtlasKind::Edge(_) => r.kind.name(),
            AtlasKind::CommutingLine => "commuting_line",
        };
        table.push(vec![r.gamma.into(), cell.into(), kind.into(), beta.into()]);
    }
    Ok(table)
}

fn scatter(common: &Common) -> Result<Table, CliError> {
    let word = word(common)?;
    let scan = scan(common)?;
    let chain = Chain::new(common.gamma, common.q, regime(common, Regime::Scattering));
    let grid = uniform_grid(scan.beta_min, scan.beta_max, scan.steps);
    let rows = grid
        .par_iter()
        .map(|&beta| {
            let s = s_matrix(&word, &chain.at(beta)?)?;
            let mut row: Vec<Cell> = vec![beta.into()];
            for z in [s.s_pp, s.s_pm, s.s_mp, s.s_mm] {
                row.push(z.re.into());
                row.push(z.im.into());
            }
            row.push(s.s_pp.norm().into());
            row.push(s.s_mp.norm().into());
            Ok(row)
        })
        .collect::<Result<Vec<_>, deltachain::Error>>()?;
    let mut table = Table::new(
        "scatter",
        &[
            "beta", "re_s_pp", "im_s_pp", "re_s_pm", "im_s_pm", "re_s_mp", "im_s_mp", "re_s_mm",
            "im_s_mm", "abs_s_pp", "abs_s_mp",
        ],
    );
    table.rows = rows;
    Ok(table)
}

fn wave(
    common: &Common,
    beta: f64,
    grid_per_cell: usize,
    psi0: Complex64,
    dpsi0: (Option<f64>, Option<f64>),
) -> Result<Table, CliError> {
    let word = word(common)?;
    let regime = regime(common, Regime::Scattering);
    let params = ChainParams::new(beta, common.gamma, common.q, regime)?;
    let plane = match regime {
        Regime::Scattering => Complex64::new(0.0, beta) * psi0,
        Regime::Bound => -beta * psi0,
    };
    let dpsi0 = match dpsi0 {
        (None, None) => plane,
        (re, im) => Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0)),
    };
    let samples = sample_wavefunction(&word, &params, (psi0, dpsi0), grid_per_cell)?;
    let mut site = vec!["tunnel"; samples.len()];
    for &(l, r) in &samples.delta_sites {
        site[l] = "pre_delta";
        site[r] = "post_delta";
    }
    let mut table = Table::new("wave", &["x", "re_psi", "im_psi", "re_dpsi", "im_dpsi", "site"]);
    for i in 0..samples.len() {
        let (v, d) = samples.point(i);
        table.push(vec![
            samples.positions[i].into(),
            v.re.into(),
            v.im.into(),
            d.re.into(),
            d.im.into(),
            site[i].into(),
        ]);
    }
    Ok(table)
}

fn dos(common: &Common) -> Result<Table, CliError> {
    let samples = dos_estimate(common.gamma, &scan(common)?)?;
    let mut table = Table::new("dos", &["beta", "energy", "kb", "density", "weight"]);
    for s in samples {
        table.push(vec![s.beta.into(), s.energy.into(), s.kb.into(), s.density.into(), s.weight.into()]);
    }
    Ok(table)
}

fn binding(common: &Common, n: usize) -> Result<Table, CliError> {
    if n == 0 {
        return Err(CliError::Usage("binding needs n >= 1".into()));
    }
    let scan = scan(common)?;
    let germ = single_cell_germ(common.gamma, &scan)?;
    let mut table = Table::new("binding", &["beta", "kb", "lhs", "rhs"]);
    for beta in uniform_grid(scan.beta_min, scan.beta_max, scan.steps) {
        if !germ.contains(beta) {
            continue;
        }
        let Ok((lhs, rhs)) = binding_equation_residual(n, beta, common.gamma) else {
            continue;
        };
        let params = ChainParams::bound(beta, common.gamma, 1.0)?;
        let x = deltachain::cell_matrix(&params, deltachain::CellKind::S)?.half_trace().re;
        table.push(vec![beta.into(), x.clamp(-1.0, 1.0).acos().into(), lhs.into(), rhs.into()]);
    }
    Ok(table)
}

fn fib_info(m_max: usize) -> Result<Table, CliError> {
    let mut table = Table::new("fib-info", &["m", "length", "count_s", "count_l", "word"]);
    for m in 1..=m_max {
        let (total, s, l) = word_counts(m)?;
        let word = fibonacci_word(m)?;
        table.push(vec![m.into(), total.into(), s.into(), l.into(), word.to_string().into()]);
    }
    Ok(table)
}

fn commute(common: &Common, p_max: u32) -> Result<Table, CliError> {
    let mut table = Table::new(
        "commute",
        &[
            "p", "beta_p", "proportional", "in_overlap", "proportional_deviation",
            "commutator_deviation", "x_short", "x_long",
        ],
    );
    for r in commuting_points(p_max, common.gamma)? {
        table.push(vec![
            r.point.p.into(),
            r.point.beta_p.into(),
            r.proportional.into(),
            r.in_overlap.into(),
            r.proportional_deviation.into(),
            r.commutator_deviation.into(),
            r.x_short.into(),
            r.x_long.into(),
        ]);
    }
    Ok(table)
}
