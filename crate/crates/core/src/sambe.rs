//! Floquet Hamiltonian in Sambe space.
//!
//! Floquet modes are expanded as `|φ(t)⟩ = Σ_k e^{-ikΩt} |φ_k⟩` with the
//! sideband index truncated to `|k| ≤ K`. In this basis `H(t) - i∂_t` is
//! block tridiagonal: diagonal blocks `H_+ - kΩ` and `(α/2)σz` between
//! neighbouring sidebands. All of its entries are real.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::band::SymmetricBand;
use crate::linalg::{eigh, HermitianMatrix};
use crate::model::{ComplexMatrix2, HamiltonianParams, Spinor, C64};

/// Largest acceptable sideband weight at `|k| = K` for the central modes.
pub const TRUNC_TOL: f64 = 1e-10;

/// `ceil(4(α + β + ε)/Ω) + 10`.
pub fn default_truncation(params: &HamiltonianParams) -> usize {
    (4.0 * (params.alpha() + params.beta() + params.epsilon()) / params.omega()).ceil() as usize + 10
}

/// Folds `q` into the first Brillouin zone `[-Ω/2, Ω/2)`.
pub fn fold_to_zone(q: f64, omega: f64) -> f64 {
    let folded = q - omega * (q / omega + 0.5).floor();
    // rounding can land exactly on the excluded upper edge
    if folded >= 0.5 * omega {
        folded - omega
    } else {
        folded
    }
}

/// Circle distance of two quasienergies on the Brillouin zone, in `[0, Ω/2]`.
pub fn minimal_splitting(q1: f64, q2: f64, omega: f64) -> f64 {
    let d = (q1 - q2).abs().rem_euclid(omega);
    d.min(omega - d)
}

/// `n` equally spaced points from `lo` to `hi` inclusive. `n = 1` gives `[lo]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn row(k: i32, kmax: usize, spin: usize) -> usize {
    2 * (k + kmax as i32) as usize + spin
}

/// Truncated Floquet Hamiltonian of dimension `2(2K + 1)`.
pub fn build_floquet_matrix(params: &HamiltonianParams, kmax: usize) -> Result<HermitianMatrix> {
    let band = floquet_band(params, kmax);
    let n = band.dim();
    HermitianMatrix::from_real(DMatrix::from_fn(n, n, |i, j| band.get(i, j)))
}

/// The same matrix in banded storage (bandwidth 2).
pub fn floquet_band(params: &HamiltonianParams, kmax: usize) -> SymmetricBand {
    assert!(kmax >= 1, "Sambe truncation K must be >= 1");
    let k = kmax as i32;
    let dim = 2 * (2 * kmax + 1);
    let half_eps = 0.5 * params.epsilon();
    let half_alpha = 0.5 * params.alpha();
    let omega = params.omega();
    let mut m = SymmetricBand::zeros(dim, 2);
    for s in -k..=k {
        let up = row(s, kmax, 0);
        let down = row(s, kmax, 1);
        let shift = s as f64 * omega;
        m.set(up, up, half_eps - shift);
        m.set(down, down, -half_eps - shift);
        m.set(up, down, params.beta());
        if s < k {
            m.set(up, row(s + 1, kmax, 0), half_alpha);
            m.set(down, row(s + 1, kmax, 1), -half_alpha);
        }
    }
    m
}

/// One eigenpair of the Floquet Hamiltonian.
#[derive(Debug, Clone)]
pub struct FloquetMode {
    pub quasienergy: f64,
    /// `sidebands[k + K]` is `|φ_k⟩`.
    sidebands: Vec<Spinor>,
    kmax: usize,
    omega: f64,
    pub parity: Option<f64>,
    pub brillouin_index: i32,
}

impl FloquetMode {
    /// Builds a mode from sidebands `k = -K..=K`.
    pub fn from_sidebands(quasienergy: f64, sidebands: Vec<Spinor>, omega: f64) -> Self {
        assert!(sidebands.len() % 2 == 1, "sidebands must cover -K..=K");
        let kmax = sidebands.len() / 2;
        Self { quasienergy, sidebands, kmax, omega, parity: None, brillouin_index: 0 }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `|φ_k⟩`, zero outside the truncation window.
    pub fn sideband(&self, k: i32) -> Spinor {
        let idx = k + self.kmax as i32;
        if idx < 0 || idx as usize >= self.sidebands.len() {
            Spinor::zeros()
        } else {
            self.sidebands[idx as usize]
        }
    }

    pub fn sidebands(&self) -> &[Spinor] {
        &self.sidebands
    }

    /// `Σ_k ⟨φ_k|φ_k⟩`.
    pub fn sambe_norm_sqr(&self) -> f64 {
        self.sidebands.iter().map(|v| v.norm_squared()).sum()
    }

    /// Larger of the sideband weights at `k = ±K`.
    pub fn edge_weight(&self) -> f64 {
        let k = self.kmax as i32;
        self.sideband(k).norm_squared().max(self.sideband(-k).norm_squared())
    }

    /// `|φ(t)⟩ = Σ_k e^{-ikΩt} |φ_k⟩`.
    pub fn at_time(&self, t: f64) -> Spinor {
        let k0 = self.kmax as i32;
        self.sidebands
            .iter()
            .enumerate()
            .fold(Spinor::zeros(), |acc, (i, v)| {
                let k = i as i32 - k0;
                acc + v * C64::from_polar(1.0, -(k as f64) * self.omega * t)
            })
    }

    /// The equivalent mode `e^{i dk Ω t} |φ(t)⟩` with quasienergy `q + dk Ω`.
    /// Sidebands move by `dk` slots; whatever leaves the window is dropped.
    pub fn shifted(&self, dk: i32) -> Self {
        let k0 = self.kmax as i32;
        let sidebands = (-k0..=k0).map(|k| self.sideband(k + dk)).collect();
        Self {
            quasienergy: self.quasienergy + dk as f64 * self.omega,
            sidebands,
            kmax: self.kmax,
            omega: self.omega,
            parity: self.parity.map(|j| if dk.rem_euclid(2) == 1 { -j } else { j }),
            brillouin_index: self.brillouin_index + dk,
        }
    }

    /// Same mode with every sideband multiplied by `phase`.
    pub fn with_phase(&self, phase: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.sidebands {
            *v *= phase;
        }
        out
    }

    /// Linear combination `a·self + b·other` of two modes on the same grid.
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Self {
        assert_eq!(self.kmax, other.kmax);
        let mut out = self.clone();
        for (v, w) in out.sidebands.iter_mut().zip(&other.sidebands) {
            *v = *v * a + w * b;
        }
        out.parity = None;
        out
    }
}

/// All eigenpairs of the truncated Floquet Hamiltonian, sorted by quasienergy.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub params: HamiltonianParams,
    pub kmax: usize,
    pub modes: Vec<FloquetMode>,
    /// Edge weight of the two best-converged modes in the first zone.
    pub central_edge_weight: f64,
}

/// Diagonalises the truncated Floquet Hamiltonian.
///
/// Fails with [`Error::Truncation`] when the two modes representing the first
/// Brillouin zone still carry more than [`TRUNC_TOL`] weight at `|k| = K`.
pub fn quasienergy_spectrum(params: &HamiltonianParams, kmax: usize) -> Result<Spectrum> {
    let h = build_floquet_matrix(params, kmax)?;
    let eig = eigh(&h)?;
    let k0 = kmax as i32;
    let modes: Vec<FloquetMode> = (0..eig.len())
        .map(|c| {
            let col = eig.eigenvectors.column(c);
            let sidebands = (-k0..=k0)
                .map(|k| Spinor::new(col[row(k, kmax, 0)], col[row(k, kmax, 1)]))
                .collect();
            FloquetMode::from_sidebands(eig.eigenvalues[c], sidebands, params.omega())
        })
        .collect();
    let mut spectrum = Spectrum { params: *params, kmax, modes, central_edge_weight: f64::NAN };
    let classes = zone_classes(&spectrum, f64::INFINITY);
    if classes.len() < 2 {
        return Err(Error::AmbiguousRepresentatives { found: classes.len() });
    }
    let worst = classes.iter().map(|(_, w)| *w).fold(0.0, f64::max);
    spectrum.central_edge_weight = worst;
    if worst > TRUNC_TOL {
        return Err(Error::Truncation { k: kmax, edge_weight: worst, tol: TRUNC_TOL });
    }
    Ok(spectrum)
}

/// [`quasienergy_spectrum`] with [`default_truncation`].
pub fn quasienergy_spectrum_default(params: &HamiltonianParams) -> Result<Spectrum> {
    quasienergy_spectrum(params, default_truncation(params))
}

/// Up to two non-equivalent modes folded into `[-Ω/2, Ω/2)`.
///
/// Candidates are taken from a slightly widened zone so that a class sitting
/// on the zone edge is not lost to rounding, best edge weight first. A
/// candidate is reduced against ladder copies of the modes already chosen
/// and kept only if a substantial part survives; inside a degenerate cluster
/// that remainder is itself an eigenvector.
fn zone_classes(spectrum: &Spectrum, max_edge_weight: f64) -> Vec<(FloquetMode, f64)> {
    let omega = spectrum.params.omega();
    let half = 0.5 * omega;
    let margin = 1e-9 * omega;
    let mut idx: Vec<usize> = spectrum
        .modes
        .iter()
        .enumerate()
        .filter(|(_, m)| m.quasienergy >= -half - margin && m.quasienergy < half + margin)
        .filter(|(_, m)| m.edge_weight() <= max_edge_weight)
        .map(|(i, _)| i)
        .collect();
    idx.sort_by(|&a, &b| {
        spectrum.modes[a]
            .edge_weight()
            .total_cmp(&spectrum.modes[b].edge_weight())
            .then(a.cmp(&b))
    });
    let mut chosen: Vec<(FloquetMode, f64)> = Vec::with_capacity(2);
    for i in idx {
        if chosen.len() == 2 {
            break;
        }
        let original = &spectrum.modes[i];
        let q = original.quasienergy;
        let dk = if q >= half {
            -1
        } else if q < -half {
            1
        } else {
            0
        };
        let mut candidate = original.shifted(dk);
        for (c, _) in &chosen {
            let m = ((candidate.quasienergy - c.quasienergy) / omega).round() as i32;
            let copy = c.shifted(m);
            let overlap: C64 = copy
                .sidebands()
                .iter()
                .zip(candidate.sidebands())
                .map(|(a, b)| a.dotc(b))
                .sum();
            candidate = candidate.combine(C64::from(1.0), &copy, -overlap);
        }
        let weight = candidate.sambe_norm_sqr();
        if weight < 0.5 {
            continue;
        }
        candidate = candidate.with_phase(C64::from(1.0 / weight.sqrt()));
        candidate.quasienergy = fold_to_zone(q, omega);
        candidate.brillouin_index = 0;
        candidate.parity = None;
        chosen.push((candidate, original.edge_weight()));
    }
    chosen
}

/// The two non-equivalent modes representing the first Brillouin zone
/// `[-Ω/2, Ω/2)`, ascending in quasienergy, `brillouin_index = 0`.
pub fn select_representatives(spectrum: &Spectrum) -> Result<[FloquetMode; 2]> {
    let classes = zone_classes(spectrum, TRUNC_TOL);
    if classes.len() < 2 {
        return Err(Error::AmbiguousRepresentatives { found: classes.len() });
    }
    let mut it = classes.into_iter().map(|(m, _)| m);
    let mut pair = [it.next().expect("two classes"), it.next().expect("two classes")];
    pair.sort_by(|a, b| a.quasienergy.total_cmp(&b.quasienergy));
    Ok(pair)
}

/// First-zone quasienergies from the banded eigenvalue path (no eigenvectors).
///
/// The eigenvalues are counted in a window of length Ω whose lower end is
/// moved off any eigenvalue (a crossing on the zone edge would otherwise
/// make the count depend on rounding) and then folded.
pub fn zone_quasienergies(params: &HamiltonianParams, kmax: usize) -> Result<[f64; 2]> {
    let omega = params.omega();
    let half = 0.5 * omega;
    let near = |x: f64, y: f64| (x - y).abs() < 1e-10 * omega;
    let nearby = floquet_band(params, kmax).tridiagonalize().eigenvalues_in(-omega, omega);
    let mut found = 0;
    for step in 0..16 {
        let lo = -half - step as f64 * omega / 64.0;
        let hi = lo + omega;
        if nearby.iter().any(|&x| near(x, lo) || near(x, hi)) {
            continue;
        }
        let inside: Vec<f64> = nearby.iter().copied().filter(|&x| x >= lo && x < hi).collect();
        found = inside.len();
        if let &[a, b] = inside.as_slice() {
            let mut q = [fold_to_zone(a, omega), fold_to_zone(b, omega)];
            q.sort_by(f64::total_cmp);
            return Ok(q);
        }
    }
    Err(Error::AmbiguousRepresentatives { found })
}

/// Minimal quasienergy splitting at one parameter point.
pub fn representative_splitting(params: &HamiltonianParams, kmax: usize) -> Result<f64> {
    let [a, b] = zone_quasienergies(params, kmax)?;
    Ok(minimal_splitting(a, b, params.omega()))
}

/// Minimal quasienergy splitting over a rectangular (ε, α) grid.
#[derive(Debug, Clone, Serialize)]
pub struct SplittingGrid {
    pub epsilon_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    /// `splittings[i][j]` at `(epsilon_values[i], alpha_values[j])`.
    pub splittings: Vec<Vec<f64>>,
    pub params_base: HamiltonianParams,
}

/// Evaluates [`representative_splitting`] on every grid node. β and Ω are
/// taken from `base`. With `kmax = None` each node uses
/// [`default_truncation`]. Nodes are evaluated in parallel; each result goes
/// to its own slot so the output does not depend on scheduling.
pub fn splitting_map(
    base: &HamiltonianParams,
    epsilon_values: &[f64],
    alpha_values: &[f64],
    kmax: Option<usize>,
) -> Result<SplittingGrid> {
    if epsilon_values.is_empty() || alpha_values.is_empty() {
        return Err(Error::InvalidParams("splitting map needs nonempty ranges".into()));
    }
    let mut eps_sorted = epsilon_values.to_vec();
    let mut alpha_sorted = alpha_values.to_vec();
    eps_sorted.sort_by(f64::total_cmp);
    alpha_sorted.sort_by(f64::total_cmp);
    let na = alpha_sorted.len();
    let flat: Vec<f64> = (0..eps_sorted.len() * na)
        .into_par_iter()
        .map(|idx| {
            let (eps, alpha) = (eps_sorted[idx / na], alpha_sorted[idx % na]);
            let p = HamiltonianParams::new(eps, base.beta(), alpha, base.omega())
                .map_err(|e| e.at(eps, alpha))?;
            let k = kmax.unwrap_or_else(|| default_truncation(&p));
            representative_splitting(&p, k).map_err(|e| e.at(eps, alpha))
        })
        .collect::<Result<_>>()?;
    let splittings = flat.chunks(na).map(<[f64]>::to_vec).collect();
    Ok(SplittingGrid {
        epsilon_values: eps_sorted,
        alpha_values: alpha_sorted,
        splittings,
        params_base: *base,
    })
}

/// Local minimum of the representative splitting along an α scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplittingMinimum {
    pub alpha: f64,
    pub splitting: f64,
}

/// Scans α on `alpha_grid`, then refines every interior local minimum of
/// the splitting by golden-section search on the bracketing interval.
pub fn find_splitting_minima(
    base: &HamiltonianParams,
    alpha_grid: &[f64],
    kmax: Option<usize>,
) -> Result<Vec<SplittingMinimum>> {
    let eval = |alpha: f64| -> Result<f64> {
        let p = base.with_alpha(alpha)?;
        let k = kmax.unwrap_or_else(|| default_truncation(&p));
        representative_splitting(&p, k).map_err(|e| e.at(p.epsilon(), alpha))
    };
    let values: Vec<f64> = alpha_grid.par_iter().map(|&a| eval(a)).collect::<Result<_>>()?;
    let mut minima = Vec::new();
    for i in 1..alpha_grid.len().saturating_sub(1) {
        if values[i] <= values[i - 1] && values[i] < values[i + 1] {
            let (mut a, mut b) = (alpha_grid[i - 1], alpha_grid[i + 1]);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            let mut x1 = b - g * (b - a);
            let mut x2 = a + g * (b - a);
            let mut f1 = eval(x1)?;
            let mut f2 = eval(x2)?;
            while b - a > 1e-13 * (1.0 + b.abs()) {
                if f1 <= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - g * (b - a);
                    f1 = eval(x1)?;
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + g * (b - a);
                    f2 = eval(x2)?;
                }
            }
            let (alpha, splitting) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
            minima.push(SplittingMinimum { alpha, splitting });
        }
    }
    Ok(minima)
}

/// One-period propagator and its eigenphases.
#[derive(Debug, Clone)]
pub struct Monodromy {
    /// Folded into `[-Ω/2, Ω/2)`, ascending.
    pub quasienergies: [f64; 2],
    pub propagator: ComplexMatrix2,
}

/// `exp(-i m·σ)` for a real 3-vector `m`.
fn su2_exp(m: [f64; 3]) -> ComplexMatrix2 {
    let theta = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    let (c, s) = (theta.cos(), if theta > 0.0 { theta.sin() / theta } else { 1.0 });
    let [x, y, z] = m.map(|v| v * s);
    ComplexMatrix2::new(
        C64::new(c, -z),
        C64::new(-y, -x),
        C64::new(y, -x),
        C64::new(c, z),
    )
}

/// Integrates `i dU/dt = H(t) U` over one period with the fourth-order
/// Magnus scheme on Gauss–Legendre nodes and returns the eigenphases
/// `q = -arg(u)/T` of `U(T)`.
pub fn monodromy_quasienergies(params: &HamiltonianParams, steps: usize) -> Result<Monodromy> {
    assert!(steps >= 1);
    let period = params.period();
    let h = period / steps as f64;
    let offset = 3f64.sqrt() / 6.0;
    // H(t) = m(t)·σ with m = (β, 0, ε/2 + α cos Ωt)
    let field = |t: f64| [params.beta(), 0.0, 0.5 * params.epsilon() + params.alpha() * (params.omega() * t).cos()];
    let mut u = ComplexMatrix2::identity();
    for step in 0..steps {
        let t0 = step as f64 * h;
        let m1 = field(t0 + (0.5 - offset) * h);
        let m2 = field(t0 + (0.5 + offset) * h);
        // -iΩ4 = -i h/2 (H1 + H2) + (√3 h²/12)[-iH2, -iH1];  [a·σ, b·σ] = 2i (a×b)·σ
        let cross = [
            m2[1] * m1[2] - m2[2] * m1[1],
            m2[2] * m1[0] - m2[0] * m1[2],
            m2[0] * m1[1] - m2[1] * m1[0],
        ];
        let c = 3f64.sqrt() * h * h / 12.0 * 2.0;
        // (√3h²/12)(-1)[H2,H1] = -(√3h²/12)·2i(m2×m1)·σ = -i c (m2×m1)·σ
        let m = [
            0.5 * h * (m1[0] + m2[0]) + c * cross[0],
            0.5 * h * (m1[1] + m2[1]) + c * cross[1],
            0.5 * h * (m1[2] + m2[2]) + c * cross[2],
        ];
        u = su2_exp(m) * u;
    }
    let drift = crate::model::max_abs(&(u * u.adjoint() - ComplexMatrix2::identity()));
    if drift > 1e-8 {
        return Err(Error::UnitarityDrift { drift });
    }
    // U ∈ SU(2): eigenvalues e^{∓iθ}
    let a = 0.5 * (u[(0, 0)] + u[(1, 1)].conj());
    let b = 0.5 * (u[(0, 1)] - u[(1, 0)].conj());
    let theta = (a.im * a.im + b.norm_sqr()).sqrt().atan2(a.re);
    let omega = params.omega();
    let mut q = [fold_to_zone(theta / period, omega), fold_to_zone(-theta / period, omega)];
    q.sort_by(f64::total_cmp);
    Ok(Monodromy { quasienergies: q, propagator: u })
}

/// Static two-level energies `±√(ε²/4 + β²)` folded into the first zone.
pub fn static_quasienergies(params: &HamiltonianParams) -> [f64; 2] {
    let e = (0.25 * params.epsilon().powi(2) + params.beta().powi(2)).sqrt();
    let mut q = [fold_to_zone(e, params.omega()), fold_to_zone(-e, params.omega())];
    q.sort_by(f64::total_cmp);
    q
}
