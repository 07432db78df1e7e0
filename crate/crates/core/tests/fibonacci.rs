//! Fibonacci words: the direct product against the trace-map recursion, the
//! substitution invariant and the polynomial structure in `delta`.

use deltachain::matrix::TransferMatrix;
use deltachain::substitution::{fibonacci, half_trace_sequence, trace_map_sequence, word_counts};
use deltachain::transfer::{commutator, delta_matrix, tunnel_matrix};
use deltachain::{fibonacci_word, word_matrix, CellKind, ChainParams, Regime, TAU};
use proptest::prelude::*;

/// Largest `beta` keeping `W_12` inside the overflow guard with some headroom.
fn beta_cap(m: usize) -> f64 {
    250.0 / fibonacci_word(m).unwrap().total_length(TAU)
}

#[test]
fn direct_and_recursive_paths_agree() {
    for regime in [Regime::Bound, Regime::Scattering] {
        let top = match regime {
            Regime::Bound => beta_cap(12),
            Regime::Scattering => 5.0,
        };
        for i in 0..10 {
            for j in 0..10 {
                let beta = 0.1 + (top - 0.1) * i as f64 / 9.0;
                let gamma = 0.5 + 7.5 * j as f64 / 9.0;
                let p = ChainParams::new(beta, gamma, TAU, regime).unwrap();
                let rows = trace_map_sequence(&p, 12).unwrap();
                let xs = half_trace_sequence(&p, 12).unwrap();
                for row in &rows {
                    let direct = word_matrix(&fibonacci_word(row.m).unwrap(), &p).unwrap();
                    let err = direct.max_rel_diff(&row.matrix);
                    assert!(err <= 1e-9, "{regime:?} beta {beta} gamma {gamma} m {} err {err}", row.m);
                    let x = xs[row.m - 1];
                    assert!((x - row.x).norm() <= 1e-9 * row.x.norm().max(1.0));
                }
            }
        }
    }
}

#[test]
fn eight_cell_word_matches_recursion() {
    let p = ChainParams::bound(0.5, 4.0, TAU).unwrap();
    let w6 = fibonacci_word(6).unwrap();
    assert_eq!(w6.len(), 8);
    let rows = trace_map_sequence(&p, 6).unwrap();
    assert!(word_matrix(&w6, &p).unwrap().max_rel_diff(&rows[5].matrix) <= 1e-9);
}

#[test]
fn words_obey_substitution() {
    for m in 2..20 {
        let next = fibonacci_word(m + 1).unwrap();
        let glued = fibonacci_word(m - 1).unwrap().concat(&fibonacci_word(m).unwrap());
        assert_eq!(next.letters(), glued.letters());
        let (total, s, l) = word_counts(m + 1).unwrap();
        assert_eq!(total, fibonacci(m + 1));
        assert_eq!(next.count(CellKind::S) as u64, s);
        assert_eq!(next.count(CellKind::L) as u64, l);
    }
}

#[test]
fn commutator_trace_is_substitution_invariant() {
    // Bound entries grow like exp(beta * length); keep beta small enough that the
    // cancellation in the commutator stays far below the tolerance.
    let cases = [(Regime::Bound, 0.1, 0.2), (Regime::Bound, 0.3, 0.9), (Regime::Scattering, 1.3, 2.0), (Regime::Scattering, 2.7, 5.0)];
    for (regime, beta, gamma) in cases {
        let p = ChainParams::new(beta, gamma, TAU, regime).unwrap();
        let half_trace = |m: usize| {
            let a = word_matrix(&fibonacci_word(m).unwrap(), &p).unwrap();
            let b = word_matrix(&fibonacci_word(m + 1).unwrap(), &p).unwrap();
            commutator(&a, &b).half_trace()
        };
        let first = half_trace(1);
        for m in 2..=8 {
            let value = half_trace(m);
            assert!((value - first).norm() <= 1e-8 * first.norm(), "{regime:?} m {m}: {value} vs {first}");
        }
    }
}

/// Matrix entries as polynomials in `delta` (coefficient vectors), at fixed `beta`.
#[derive(Clone)]
struct PolyMatrix([Vec<f64>; 4]);

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_add(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len().max(q.len())];
    for (i, a) in p.iter().enumerate() {
        out[i] += a;
    }
    for (i, b) in q.iter().enumerate() {
        out[i] += b;
    }
    out
}

impl PolyMatrix {
    fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        PolyMatrix([
            poly_add(&poly_mul(a, e), &poly_mul(b, g)),
            poly_add(&poly_mul(a, f), &poly_mul(b, h)),
            poly_add(&poly_mul(c, e), &poly_mul(d, g)),
            poly_add(&poly_mul(c, f), &poly_mul(d, h)),
        ])
    }

    /// Bound-regime cell: `[[1 + δ/2, δ/2], [−δ/2, 1 − δ/2]] · diag(1/λ, λ)`.
    fn cell(lambda: f64) -> PolyMatrix {
        PolyMatrix([
            vec![1.0 / lambda, 0.5 / lambda],
            vec![0.0, 0.5 * lambda],
            vec![0.0, -0.5 / lambda],
            vec![lambda, -0.5 * lambda],
        ])
    }
}

fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[test]
fn entries_are_polynomials_of_word_length_degree() {
    let beta: f64 = 0.5;
    for m in 1..=8 {
        let word = fibonacci_word(m).unwrap();
        let one = PolyMatrix::cell(beta.exp());
        let long = PolyMatrix::cell((TAU * beta).exp());
        let init = PolyMatrix([vec![1.0], vec![0.0], vec![0.0], vec![1.0]]);
        let poly = word.letters().iter().fold(init, |acc, k| {
            acc.mul(match k {
                CellKind::S => &one,
                CellKind::L => &long,
            })
        });
        let d_poly = &poly.0[3];
        let degree = fibonacci(m) as usize;
        assert_eq!(d_poly.len(), degree + 1);
        assert!(d_poly[degree].abs() > 1e-12 * d_poly.iter().map(|c| c.abs()).fold(0.0, f64::max));
        // Sample at degree + 1 strengths and compare with the numerical word matrix.
        for k in 0..=degree {
            let delta = -3.0 + 9.0 * k as f64 / degree.max(1) as f64;
            let p = ChainParams::bound(beta, delta * beta, TAU).unwrap();
            let numeric = word_matrix(&word, &p).unwrap();
            let want = eval(d_poly, delta);
            // Rounding in both evaluations scales with the sum of absolute terms.
            let scale = eval(&d_poly.iter().map(|c| c.abs()).collect::<Vec<_>>(), delta.abs());
            let err = (numeric.d.re - want).abs();
            assert!(err <= 1e-8 * scale, "m {m} delta {delta}: {} vs {want}", numeric.d.re);
        }
    }
}

#[test]
fn cell_factor_order_is_delta_after_tunnel() {
    let p = ChainParams::bound(0.7, 2.0, TAU).unwrap();
    let w = fibonacci_word(3).unwrap();
    let manual = delta_matrix(&p)
        * tunnel_matrix(&p, 1.0).unwrap()
        * delta_matrix(&p)
        * tunnel_matrix(&p, TAU).unwrap();
    assert!(word_matrix(&w, &p).unwrap().max_rel_diff(&manual) < 1e-14);
    assert_eq!(TransferMatrix::IDENTITY, word_matrix(&deltachain::Word::new(vec![]), &p).unwrap());
}

proptest! {
    #[test]
    fn concatenation_multiplies(beta in 0.05f64..2.0, gamma in -6.0f64..6.0, a in "[SL]{1,12}", b in "[SL]{1,12}") {
        let p = ChainParams::scattering(beta, gamma, TAU).unwrap();
        let wa: deltachain::Word = a.parse().unwrap();
        let wb: deltachain::Word = b.parse().unwrap();
        let joined = word_matrix(&wa.concat(&wb), &p).unwrap();
        let product = word_matrix(&wa, &p).unwrap() * word_matrix(&wb, &p).unwrap();
        prop_assert!(joined.max_abs_diff(&product) <= 1e-10 * joined.max_abs());
    }

    #[test]
    fn display_round_trips(s in "[SL]{0,40}") {
        let w: deltachain::Word = s.parse().unwrap();
        prop_assert_eq!(w.to_string(), s);
    }
}
