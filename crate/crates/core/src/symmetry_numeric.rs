//! Time-nonlocal parity recovered from Floquet-mode sidebands.
//!
//! If `J(t) = Q(t)P` (with `P` the half-period shift) commutes with the
//! Floquet Hamiltonian, its eigenmodes satisfy
//! `Q(t)|φ_ν(t + T/2)⟩ = j_ν |φ_ν(t)⟩`, hence
//!
//! ```text
//! Q(t) = Σ_ν j_ν |φ_ν(t)⟩⟨φ_ν(t + T/2)|,   Q_k = Σ_ν j_ν Π_{ν,k}.
//! ```
//!
//! Requiring `Q_k = 0` for `|k| > n` gives an overdetermined homogeneous
//! system for the `j_ν`, solved here through its SVD null space for the
//! smallest cutoff `n` that admits a one-dimensional solution.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, right_singular, HermitianMatrix};
use crate::model::{max_abs, ComplexMatrix2, FourierOperatorSeries, HamiltonianParams, C64};
use crate::sambe::{default_truncation, minimal_splitting, quasienergy_spectrum, select_representatives, FloquetMode};
use crate::symmetry_analytic::{assemble_q, solve_recurrence};

/// Required ratio between the smallest kept and the largest discarded
/// singular value.
pub const DEFAULT_SV_TOL: f64 = 1e6;

/// Largest Fourier cutoff tried before giving up.
pub const DEFAULT_N_MAX: u32 = 16;

/// Sidebands this close to the truncation edge are left out of the system.
pub const CHECK_MARGIN: usize = 5;

/// Below this splitting (in units of Ω) a representative pair is treated as
/// degenerate and rotated onto parity eigenstates.
pub const DEGENERATE_SPLITTING: f64 = 1e-6;

/// Relative size of rounding noise in the projector coefficients.
const NOISE: f64 = 1e-15;

/// `K - 5`, at least 1.
pub fn default_check_cutoff(kmax: usize) -> usize {
    kmax.saturating_sub(CHECK_MARGIN).max(1)
}

#[derive(Debug, Clone, Serialize)]
pub struct ParitySolution {
    /// Fourier cutoff of the recovered `Q`.
    pub n_detected: u32,
    /// Parity of each representative, in input order.
    pub j: Vec<f64>,
    /// `Q_k` for `|k| ≤ n_detected`, phase fixed by [`fix_sign`].
    #[serde(skip)]
    pub q_series: FourierOperatorSeries,
    /// Largest `‖Σ_ν j_ν Π_{ν,k}‖_max` over `n_detected < |k| ≤ K_check`.
    pub residual: f64,
    /// Smallest kept over largest discarded singular value.
    pub singular_gap: f64,
    /// `max |v_ν| - min |v_ν|` of the unit null vector scaled by `√d`.
    pub magnitude_spread: f64,
}

fn check_window(mode: &FloquetMode, k_out: usize) -> Result<()> {
    if k_out > mode.kmax() {
        return Err(Error::InvalidParams(format!(
            "projector cutoff {k_out} exceeds the mode truncation {}",
            mode.kmax()
        )));
    }
    Ok(())
}

fn outer_sidebands(mode: &FloquetMode, k_out: usize, alternating: bool) -> Result<FourierOperatorSeries> {
    check_window(mode, k_out)?;
    let kk = mode.kmax() as i32;
    let ko = k_out as i32;
    let coefficients = (-ko..=ko)
        .map(|k| {
            let lo = (-kk).max(-kk - k);
            let hi = kk.min(kk - k);
            (lo..=hi).fold(ComplexMatrix2::zeros(), |acc, kp| {
                let term = mode.sideband(kp + k) * mode.sideband(kp).adjoint();
                if alternating && kp.rem_euclid(2) == 1 {
                    acc - term
                } else {
                    acc + term
                }
            })
        })
        .collect();
    Ok(FourierOperatorSeries::new(-ko, coefficients, mode.omega()))
}

/// `Π_k = Σ_{k'} (-1)^{k'} |φ_{k'+k}⟩⟨φ_{k'}|` for `|k| ≤ k_out`, the
/// Fourier coefficients of `|φ(t)⟩⟨φ(t + T/2)|`.
pub fn projector_sidebands(mode: &FloquetMode, k_out: usize) -> Result<FourierOperatorSeries> {
    outer_sidebands(mode, k_out, true)
}

/// Coefficients of `|φ(t)⟩⟨φ(t)|`, the same construction without the
/// alternating sign.
pub fn local_projector_sidebands(mode: &FloquetMode, k_out: usize) -> Result<FourierOperatorSeries> {
    outer_sidebands(mode, k_out, false)
}

/// Multiplies the series by the unit-modulus constant that makes the
/// largest entry of the `k = n_detected` coefficient real and positive.
/// Entries of equal magnitude are resolved in row-major order.
pub fn fix_sign(q: &FourierOperatorSeries, n_detected: u32) -> Result<FourierOperatorSeries> {
    Ok(q.scaled(sign_factor(q, n_detected)?))
}

fn sign_factor(q: &FourierOperatorSeries, n_detected: u32) -> Result<C64> {
    let k = n_detected as i32;
    let top = q.coeff(k);
    let biggest = max_abs(&top);
    if biggest < 1e-12 {
        return Err(Error::VanishingTopCoefficient { k });
    }
    let pick = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .map(|(r, c)| top[(r, c)])
        .find(|z| z.norm() >= biggest * (1.0 - 1e-9))
        .expect("some entry attains the maximum");
    Ok(pick.conj() / pick.norm())
}

/// Builds the homogeneous system `Σ_ν x_ν (Π_{ν,k})_{ab} = 0` over
/// `n_c < |k| ≤ k_check`.
fn system(projectors: &[FourierOperatorSeries], n_c: usize, k_check: usize) -> DMatrix<C64> {
    let ks: Vec<i32> = (n_c as i32 + 1..=k_check as i32).flat_map(|k| [-k, k]).collect();
    DMatrix::from_fn(4 * ks.len(), projectors.len(), |row, nu| {
        let k = ks[row / 4];
        let e = row % 4;
        projectors[nu].coeff(k)[(e / 2, e % 2)]
    })
}

fn combine(projectors: &[FourierOperatorSeries], weights: &[C64], k_lo: i32, k_hi: i32) -> FourierOperatorSeries {
    let omega = projectors[0].omega();
    let coefficients = (k_lo..=k_hi)
        .map(|k| {
            projectors
                .iter()
                .zip(weights)
                .fold(ComplexMatrix2::zeros(), |acc, (p, w)| acc + p.coeff(k) * *w)
        })
        .collect();
    FourierOperatorSeries::new(k_lo, coefficients, omega)
}

fn solve_with(
    representatives: &[FloquetMode],
    k_check: usize,
    sv_tol: f64,
    n_max: u32,
    alternating: bool,
) -> Result<ParitySolution> {
    if representatives.len() < 2 {
        return Err(Error::InvalidParams("need at least two representative modes".into()));
    }
    let d = representatives.len();
    let projectors = representatives
        .iter()
        .map(|m| outer_sidebands(m, k_check, alternating))
        .collect::<Result<Vec<_>>>()?;
    let scale = projectors.iter().map(FourierOperatorSeries::max_abs).fold(0.0, f64::max);
    let floor = sv_tol * NOISE * scale;

    for n_c in 0..=(n_max as usize).min(k_check - 1) {
        let a = system(&projectors, n_c, k_check);
        let sv = right_singular(&a)?;
        let s = &sv.singular_values;
        let kept = s[d - 2];
        if kept <= floor {
            // every equation is (numerically) satisfied by any weights
            if n_c == 0 {
                return Err(Error::DegenerateNullSpace { n_cutoff: 0, dim: d });
            }
            break;
        }
        let discarded = s[d - 1];
        let gap = if discarded > 0.0 { kept / discarded } else { f64::INFINITY };
        if gap <= sv_tol {
            continue;
        }
        let v: DVector<C64> = sv.vectors.column(d - 1).clone_owned();
        let mags: Vec<f64> = v.iter().map(|z| z.norm() * (d as f64).sqrt()).collect();
        let spread = mags.iter().copied().fold(f64::MIN, f64::max) - mags.iter().copied().fold(f64::MAX, f64::min);
        if mags.iter().any(|&m| m < 1e-8) {
            return Err(Error::Tolerance { quantity: "null-vector component", value: 0.0, tol: 1e-8 });
        }
        let unit: Vec<C64> = v.iter().map(|z| z / z.norm()).collect();
        let n = n_c as i32;
        let raw = combine(&projectors, &unit, -n, n);
        let c = sign_factor(&raw, n_c as u32)?;
        let weights: Vec<C64> = unit.iter().map(|z| z * c).collect();
        let imag = weights.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if imag > 1e-8 {
            return Err(Error::Tolerance { quantity: "imaginary part of a parity", value: imag, tol: 1e-8 });
        }
        let q_series = raw.scaled(c);
        let kc = k_check as i32;
        let full = combine(&projectors, &weights, -kc, kc);
        let residual = full.ks().filter(|k| k.abs() > n).map(|k| max_abs(&full.coeff(k))).fold(0.0, f64::max);
        return Ok(ParitySolution {
            n_detected: n_c as u32,
            j: weights.iter().map(|z| z.re).collect(),
            q_series,
            residual,
            singular_gap: gap,
            magnitude_spread: spread,
        });
    }
    Err(Error::NoSymmetry { n_max })
}

/// Recovers `j_ν` and `Q_k` from one Brillouin zone's representatives.
///
/// Tries cutoffs `n_c = 0, 1, …, DEFAULT_N_MAX` and accepts the first whose
/// system has a one-dimensional null space with gap above `sv_tol`. Fails
/// with [`Error::NoSymmetry`] if none does, and with
/// [`Error::DegenerateNullSpace`] if the equations carry no information at
/// all (e.g. an undriven system).
pub fn solve_parities(representatives: &[FloquetMode], k_check: usize, sv_tol: f64) -> Result<ParitySolution> {
    solve_with(representatives, k_check, sv_tol, DEFAULT_N_MAX, true)
}

/// Same machinery with the time-local ansatz `|φ_ν(t)⟩⟨φ_ν(t)|`. The only
/// solution is `j_ν` all equal, i.e. the identity operator.
pub fn solve_time_local(representatives: &[FloquetMode], k_check: usize, sv_tol: f64) -> Result<ParitySolution> {
    solve_with(representatives, k_check, sv_tol, DEFAULT_N_MAX, false)
}

/// `⟨φ(t)|Q(t)|φ(t + T/2)⟩` with both vectors normalised.
pub fn parity_hilbert(mode: &FloquetMode, q: &FourierOperatorSeries, t: f64) -> Result<f64> {
    let half = std::f64::consts::PI / mode.omega();
    let left = mode.at_time(t);
    let right = mode.at_time(t + half);
    let value = left.dotc(&(q.eval(t) * right)) / (left.norm() * right.norm());
    if value.im.abs() > 1e-8 {
        return Err(Error::Tolerance { quantity: "imaginary part of the parity", value: value.im.abs(), tol: 1e-8 });
    }
    Ok(value.re)
}

/// `⟨⟨a|J|b⟩⟩ = Σ_{k,m} (-1)^m ⟨φ_{a,k+m}|Q_k|φ_{b,m}⟩`, the period average
/// of `⟨φ_a(t)|Q(t)|φ_b(t + T/2)⟩`.
pub fn sambe_element(a: &FloquetMode, b: &FloquetMode, q: &FourierOperatorSeries) -> C64 {
    let kk = b.kmax() as i32;
    let mut sum = C64::from(0.0);
    for k in q.ks() {
        let qk = q.coeff(k);
        for m in -kk..=kk {
            let phi_b = b.sideband(m);
            let term = a.sideband(k + m).dotc(&(qk * phi_b));
            if m.rem_euclid(2) == 1 {
                sum -= term;
            } else {
                sum += term;
            }
        }
    }
    sum
}

/// Parity from the Sambe-space expectation value of `J`.
pub fn parity_sambe(mode: &FloquetMode, q: &FourierOperatorSeries) -> f64 {
    sambe_element(mode, mode, q).re
}

/// Shift `dk ∈ {-1, 0, 1}` that brings `b` closest to `a` in quasienergy.
pub fn partner_shift(a: &FloquetMode, b: &FloquetMode) -> i32 {
    let w = a.omega();
    [0, -1, 1]
        .into_iter()
        .min_by(|&x, &y| {
            let dx = (a.quasienergy - b.quasienergy - x as f64 * w).abs();
            let dy = (a.quasienergy - b.quasienergy - y as f64 * w).abs();
            dx.total_cmp(&dy)
        })
        .expect("nonempty")
}

/// Assigns `parity` to both representatives. A (near-)degenerate pair is
/// first rotated onto eigenstates of the 2×2 Sambe matrix of `J`, built
/// with the partner copy nearest in quasienergy; the `+1` state goes to the
/// first slot.
pub fn assign_parities(reps: &mut [FloquetMode; 2], q: &FourierOperatorSeries) -> Result<()> {
    let omega = reps[0].omega();
    let splitting = minimal_splitting(reps[0].quasienergy, reps[1].quasienergy, omega);
    if splitting < DEGENERATE_SPLITTING * omega {
        let dk = partner_shift(&reps[0], &reps[1]);
        let b = reps[1].shifted(dk);
        let basis = [reps[0].clone(), b];
        let mut j = DMatrix::from_fn(2, 2, |r, c| sambe_element(&basis[r], &basis[c], q));
        j = (&j + j.adjoint()) * C64::from(0.5);
        let eig = eigh(&HermitianMatrix::new(j)?)?;
        // ascending eigenvalues; the +1 state takes slot 0
        let u = &eig.eigenvectors;
        let mut first = basis[0].combine(u[(0, 1)], &basis[1], u[(1, 1)]);
        let mut second = basis[0].combine(u[(0, 0)], &basis[1], u[(1, 0)]);
        for m in [&mut first, &mut second] {
            m.quasienergy = reps[0].quasienergy;
            m.brillouin_index = reps[0].brillouin_index;
            m.parity = Some(parity_sambe(m, q));
        }
        let mut second = second.shifted(-dk);
        second.quasienergy = reps[1].quasienergy;
        reps[0] = first;
        reps[1] = second;
    } else {
        for m in reps.iter_mut() {
            m.parity = Some(parity_sambe(m, q));
        }
    }
    for m in reps.iter() {
        let j = m.parity.expect("assigned above");
        if (j.abs() - 1.0).abs() > 1e-6 {
            return Err(Error::Tolerance { quantity: "|j| - 1", value: (j.abs() - 1.0).abs(), tol: 1e-6 });
        }
    }
    Ok(())
}

/// Parities of a representative pair and of its closest-approach partner.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairParities {
    pub splitting: f64,
    /// Shift applied to the second representative to reach its partner.
    pub partner_shift: i32,
    /// `[j_a, j_{b shifted}]`
    pub parities: [f64; 2],
}

/// Representatives at `params` with parities from `q`, and the parities of
/// the two copies that approach each other most closely.
pub fn pair_parities(params: &HamiltonianParams, kmax: usize, q: &FourierOperatorSeries) -> Result<PairParities> {
    let spectrum = quasienergy_spectrum(params, kmax)?;
    let mut reps = select_representatives(&spectrum)?;
    let splitting = minimal_splitting(reps[0].quasienergy, reps[1].quasienergy, params.omega());
    assign_parities(&mut reps, q)?;
    let dk = partner_shift(&reps[0], &reps[1]);
    let partner = reps[1].shifted(dk);
    Ok(PairParities {
        splitting,
        partner_shift: dk,
        parities: [reps[0].parity.unwrap_or(f64::NAN), partner.parity.unwrap_or(f64::NAN)],
    })
}

/// Where the `Q` used for a parity assignment came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ParitySource {
    Numeric { n_detected: u32, residual: f64, singular_gap: f64 },
    Analytic { n: u32 },
    /// No symmetry found; parities are absent.
    Absent,
}

/// One line of the classified spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub alpha: f64,
    pub zone_index: i32,
    pub quasienergy: f64,
    pub parity: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub rows: Vec<SpectrumRow>,
    /// `(α, source)` per scan point.
    pub sources: Vec<(f64, ParitySource)>,
}

/// Symmetry operator for one parameter point: numeric first, the recurrence
/// when the numeric system is inconclusive and `ε = nΩ` with `α > 0`.
pub fn symmetry_operator(
    params: &HamiltonianParams,
    reps: &[FloquetMode; 2],
    k_check: usize,
) -> Result<Option<(FourierOperatorSeries, ParitySource)>> {
    match solve_parities(reps, k_check, DEFAULT_SV_TOL) {
        Ok(sol) => {
            let source = ParitySource::Numeric {
                n_detected: sol.n_detected,
                residual: sol.residual,
                singular_gap: sol.singular_gap,
            };
            Ok(Some((sol.q_series, source)))
        }
        Err(Error::NoSymmetry { .. }) | Err(Error::DegenerateNullSpace { .. }) => match params.n() {
            Some(n) if params.alpha() > 0.0 => {
                let q = assemble_q(&solve_recurrence(params)?, params.omega())?;
                Ok(Some((q, ParitySource::Analytic { n })))
            }
            _ => Ok(None),
        },
        Err(e) => Err(e),
    }
}

/// Representatives and their copies in zones -1, 0, 1 with parities, for
/// every α in `alphas`. Points are independent and run in parallel.
pub fn classify_spectrum(base: &HamiltonianParams, alphas: &[f64], kmax: Option<usize>) -> Result<Classification> {
    let per_alpha: Vec<(Vec<SpectrumRow>, ParitySource)> = alphas
        .par_iter()
        .map(|&alpha| {
            let p = base.with_alpha(alpha)?;
            let k = kmax.unwrap_or_else(|| default_truncation(&p));
            let wrap = |e: Error| e.at(p.epsilon(), alpha);
            let spectrum = quasienergy_spectrum(&p, k).map_err(wrap)?;
            let mut reps = select_representatives(&spectrum).map_err(wrap)?;
            let source = match symmetry_operator(&p, &reps, default_check_cutoff(k)).map_err(wrap)? {
                Some((q, source)) => {
                    assign_parities(&mut reps, &q).map_err(wrap)?;
                    source
                }
                None => ParitySource::Absent,
            };
            let rows = (-1..=1)
                .flat_map(|zone| {
                    reps.iter().map(move |m| SpectrumRow {
                        alpha,
                        zone_index: zone,
                        quasienergy: m.quasienergy + zone as f64 * m.omega(),
                        parity: m.parity.map(|j| if zone % 2 == 0 { j } else { -j }),
                    })
                })
                .collect();
            Ok((rows, source))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(6 * alphas.len());
    let mut sources = Vec::with_capacity(alphas.len());
    for ((r, s), &alpha) in per_alpha.into_iter().zip(alphas) {
        rows.extend(r);
        sources.push((alpha, s));
    }
    Ok(Classification { rows, sources })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{pauli, Spinor};
    use crate::sambe::quasienergy_spectrum_default;

    fn reps_at(e: f64, b: f64, a: f64) -> ([FloquetMode; 2], usize) {
        let p = HamiltonianParams::new(e, b, a, 1.0).unwrap();
        let s = quasienergy_spectrum_default(&p).unwrap();
        (select_representatives(&s).unwrap(), s.kmax)
    }

    fn mode(sidebands: Vec<Spinor>) -> FloquetMode {
        FloquetMode::from_sidebands(0.0, sidebands, 1.0)
    }

    #[test]
    fn projector_single_sideband() {
        let v = Spinor::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let m = mode(vec![Spinor::zeros(), v, Spinor::zeros()]);
        let pi = projector_sidebands(&m, 1).unwrap();
        assert!(max_abs(&(pi.coeff(0) - v * v.adjoint())) < 1e-15);
        assert_eq!(max_abs(&pi.coeff(1)), 0.0);
        assert_eq!(max_abs(&pi.coeff(-1)), 0.0);
        assert!(projector_sidebands(&m, 2).is_err());
    }

    #[test]
    fn projector_two_sidebands() {
        let v0 = Spinor::new(C64::new(0.6, 0.0), C64::new(0.0, 0.0));
        let v1 = Spinor::new(C64::new(0.0, 0.0), C64::new(0.0, 0.8));
        let m = mode(vec![Spinor::zeros(), v0, v1]);
        let pi = projector_sidebands(&m, 1).unwrap();
        // k = 1: only k' = 0 contributes, with sign +1
        assert!(max_abs(&(pi.coeff(1) - v1 * v0.adjoint())) < 1e-15);
        // k = -1: only k' = 1 contributes, with sign -1
        assert!(max_abs(&(pi.coeff(-1) + v0 * v1.adjoint())) < 1e-15);
        assert!(max_abs(&(pi.coeff(0) - (v0 * v0.adjoint() - v1 * v1.adjoint()))) < 1e-15);
    }

    #[test]
    fn projector_time_domain() {
        let (reps, k) = reps_at(1.0, 2.7, 2.0);
        for m in &reps {
            let pi = projector_sidebands(m, k).unwrap();
            let half = std::f64::consts::PI;
            for t in [0.0, 0.37, 1.9] {
                let direct = m.at_time(t) * m.at_time(t + half).adjoint();
                assert!(max_abs(&(pi.eval(t) - direct)) < 1e-10);
            }
        }
    }

    #[test]
    fn fix_sign_examples() {
        let a = 0.7;
        let series = |z: C64| {
            let mut s = FourierOperatorSeries::zeros(-1, 1, 1.0);
            *s.coeff_mut(1) = ComplexMatrix2::new(C64::from(0.0), z, C64::from(0.0), C64::from(0.0));
            *s.coeff_mut(0) = pauli::sigma_x();
            s
        };
        let fixed = fix_sign(&series(C64::new(-a, 0.0)), 1).unwrap();
        assert!((fixed.coeff(1)[(0, 1)] - C64::from(a)).norm() < 1e-15);
        assert!((fixed.coeff(0)[(0, 1)] + C64::from(1.0)).norm() < 1e-15);
        let fixed = fix_sign(&series(C64::new(0.0, a)), 1).unwrap();
        assert!((fixed.coeff(1)[(0, 1)] - C64::from(a)).norm() < 1e-15);
        assert!((fixed.coeff(0)[(0, 1)] - C64::new(0.0, -1.0)).norm() < 1e-15);
        let s = series(C64::from(a));
        assert_eq!(fix_sign(&s, 1).unwrap(), s);
        assert!(matches!(fix_sign(&s, 3), Err(Error::VanishingTopCoefficient { k: 3 })));
    }

    #[test]
    fn detects_n1_and_matches_recurrence() {
        let p = HamiltonianParams::new(1.0, 2.7, 2.0, 1.0).unwrap();
        let (reps, k) = reps_at(1.0, 2.7, 2.0);
        let sol = solve_parities(&reps, default_check_cutoff(k), DEFAULT_SV_TOL).unwrap();
        assert_eq!(sol.n_detected, 1);
        let analytic = assemble_q(&solve_recurrence(&p).unwrap(), 1.0).unwrap();
        assert!(sol.q_series.max_abs_diff(&analytic) < 1e-7);
        assert!(sol.residual < 1e-8, "{}", sol.residual);
        assert!(sol.singular_gap > DEFAULT_SV_TOL);
        for (m, &j) in reps.iter().zip(&sol.j) {
            assert!((j.abs() - 1.0).abs() < 1e-8);
            assert!((parity_hilbert(m, &sol.q_series, 0.0).unwrap() - j).abs() < 1e-8);
            assert!((parity_sambe(m, &sol.q_series) - j).abs() < 1e-8);
        }
    }

    #[test]
    fn non_integer_detuning_has_no_symmetry() {
        let (reps, k) = reps_at(1.5, 2.7, 2.0);
        let err = solve_parities(&reps, default_check_cutoff(k), DEFAULT_SV_TOL).unwrap_err();
        assert!(matches!(err, Error::NoSymmetry { n_max: 16 }), "{err}");
    }

    #[test]
    fn zero_detuning_gives_sigma_x() {
        let (reps, k) = reps_at(0.0, 1.3, 1.0);
        let sol = solve_parities(&reps, default_check_cutoff(k), DEFAULT_SV_TOL).unwrap();
        assert_eq!(sol.n_detected, 0);
        assert!(max_abs(&(sol.q_series.coeff(0) - pauli::sigma_x())) < 1e-8);
    }

    #[test]
    fn undriven_system_is_degenerate() {
        let (reps, k) = reps_at(1.0, 0.4, 0.0);
        let err = solve_parities(&reps, default_check_cutoff(k), DEFAULT_SV_TOL).unwrap_err();
        assert!(matches!(err, Error::DegenerateNullSpace { .. }), "{err}");
    }

    #[test]
    fn time_local_ansatz_is_identity() {
        let (reps, k) = reps_at(2.0, 2.7, 2.0);
        let sol = solve_time_local(&reps, default_check_cutoff(k), DEFAULT_SV_TOL).unwrap();
        assert_eq!(sol.n_detected, 0);
        assert!((sol.j[0] - sol.j[1]).abs() < 1e-8);
        assert!(max_abs(&(sol.q_series.coeff(0) - pauli::identity())) < 1e-8);
    }

    #[test]
    fn shifted_zone_gives_same_operator() {
        let (reps, k) = reps_at(2.0, 2.7, 1.3);
        let kc = default_check_cutoff(k);
        let sol = solve_parities(&reps, kc, DEFAULT_SV_TOL).unwrap();
        let moved = reps.clone().map(|m| if m.quasienergy < 0.0 { m.shifted(1) } else { m });
        let other = solve_parities(&moved, kc - 1, DEFAULT_SV_TOL).unwrap();
        assert!(sol.q_series.max_abs_diff(&other.q_series) < 1e-7);
        for (a, b) in reps.iter().zip(&moved) {
            let flip = if a.brillouin_index == b.brillouin_index { 1.0 } else { -1.0 };
            let ja = parity_sambe(a, &sol.q_series);
            let jb = parity_sambe(b, &sol.q_series);
            assert!((ja - flip * jb).abs() < 1e-8);
        }
    }

    #[test]
    fn neighbouring_zone_flips_parity() {
        let (reps, k) = reps_at(1.0, 2.7, 2.0);
        let sol = solve_parities(&reps, default_check_cutoff(k), DEFAULT_SV_TOL).unwrap();
        for m in &reps {
            let j = parity_hilbert(m, &sol.q_series, 0.0).unwrap();
            let jn = parity_hilbert(&m.shifted(1), &sol.q_series, 0.0).unwrap();
            assert!((j + jn).abs() < 1e-8);
        }
    }

    #[test]
    fn parity_is_time_independent() {
        let (reps, k) = reps_at(3.0, 2.7, 2.0);
        let sol = solve_parities(&reps, default_check_cutoff(k), DEFAULT_SV_TOL).unwrap();
        let period = 2.0 * std::f64::consts::PI;
        for m in &reps {
            let j0 = parity_hilbert(m, &sol.q_series, 0.0).unwrap();
            for t in [period / 7.0, period / 3.0, period / 2.0] {
                assert!((parity_hilbert(m, &sol.q_series, t).unwrap() - j0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn plain_half_shift_gives_alternating_norm() {
        let (reps, _) = reps_at(1.0, 2.7, 2.0);
        let identity = FourierOperatorSeries::constant(pauli::identity(), 1.0);
        for m in &reps {
            let k0 = m.kmax() as i32;
            let expected: f64 = (-k0..=k0)
                .map(|k| if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 } * m.sideband(k).norm_squared())
                .sum();
            assert!((parity_sambe(m, &identity) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn classification_rows() {
        let p = HamiltonianParams::new(1.0, 2.7, 0.0, 1.0).unwrap();
        let c = classify_spectrum(&p, &[0.5, 1.0], None).unwrap();
        assert_eq!(c.rows.len(), 12);
        assert!(c.rows.iter().all(|r| r.parity.is_some()));
        let zone0: Vec<_> = c.rows.iter().filter(|r| r.alpha == 0.5 && r.zone_index == 0).collect();
        let zone1: Vec<_> = c.rows.iter().filter(|r| r.alpha == 0.5 && r.zone_index == 1).collect();
        for (a, b) in zone0.iter().zip(&zone1) {
            assert!((b.quasienergy - a.quasienergy - 1.0).abs() < 1e-12);
            assert_eq!(a.parity.map(|j| -j), b.parity);
        }
        let off = HamiltonianParams::new(1.5, 2.7, 0.0, 1.0).unwrap();
        let c = classify_spectrum(&off, &[1.0], None).unwrap();
        assert!(c.rows.iter().all(|r| r.parity.is_none()));
        assert_eq!(c.sources[0].1, ParitySource::Absent);
    }
}
