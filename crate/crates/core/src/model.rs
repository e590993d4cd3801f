//! Driven two-level Hamiltonian and Fourier series of 2×2 operators.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex 2×2 matrix. Indexing is `(row, col)`.
pub type ComplexMatrix2 = Matrix2<C64>;

/// Pseudospin state vector.
pub type Spinor = Vector2<C64>;

/// Relative tolerance (in units of Ω) below which ε is snapped to nΩ.
pub const DEFAULT_INTEGER_DETUNING_TOL: f64 = 1e-9;

pub mod pauli {
    use super::{ComplexMatrix2, C64};

    const O: C64 = C64::new(0.0, 0.0);
    const ONE: C64 = C64::new(1.0, 0.0);
    const I: C64 = C64::new(0.0, 1.0);

    pub fn identity() -> ComplexMatrix2 {
        ComplexMatrix2::new(ONE, O, O, ONE)
    }

    pub fn sigma_x() -> ComplexMatrix2 {
        ComplexMatrix2::new(O, ONE, ONE, O)
    }

    pub fn sigma_y() -> ComplexMatrix2 {
        ComplexMatrix2::new(O, -I, I, O)
    }

    pub fn sigma_z() -> ComplexMatrix2 {
        ComplexMatrix2::new(ONE, O, O, -ONE)
    }
}

pub(crate) fn real_matrix(a00: f64, a01: f64, a10: f64, a11: f64) -> ComplexMatrix2 {
    ComplexMatrix2::new(a00.into(), a01.into(), a10.into(), a11.into())
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Splits a flat `key = value` text into pairs, in order of appearance.
/// Pairs are separated by newlines, commas, semicolons or whitespace; `#`
/// starts a comment.
pub fn key_value_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    // normalise "key = value" to "key=value" before tokenising
    let body = body.replace(" =", "=").replace("= ", "=");
    body.split(|c: char| c.is_whitespace() || c == ',' || c == ';')
        .filter(|t| !t.is_empty())
        .map(|token| {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got `{token}`")))?;
            Ok((key.trim().to_string(), value.trim().to_string()))
        })
        .collect()
}

/// Parameters of `H(t) = (ε/2)σz + βσx + ασz cos(Ωt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamiltonianParams {
    epsilon: f64,
    beta: f64,
    alpha: f64,
    omega: f64,
    /// Set when ε = nΩ (after snapping).
    n: Option<u32>,
}

impl HamiltonianParams {
    /// Absolute energies; ε is snapped to the nearest multiple of Ω when
    /// within [`DEFAULT_INTEGER_DETUNING_TOL`]·Ω.
    pub fn new(epsilon: f64, beta: f64, alpha: f64, omega: f64) -> Result<Self> {
        Self::with_tolerance(epsilon, beta, alpha, omega, DEFAULT_INTEGER_DETUNING_TOL)
    }

    /// ε, β, α given in units of Ω.
    pub fn in_units_of_omega(epsilon: f64, beta: f64, alpha: f64, omega: f64) -> Result<Self> {
        Self::new(epsilon * omega, beta * omega, alpha * omega, omega)
    }

    pub fn with_tolerance(
        epsilon: f64,
        beta: f64,
        alpha: f64,
        omega: f64,
        integer_detuning_tol: f64,
    ) -> Result<Self> {
        for (name, v) in [("epsilon", epsilon), ("beta", beta), ("alpha", alpha)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParams(format!("omega must be finite and > 0, got {omega}")));
        }
        let ratio = epsilon / omega;
        let nearest = ratio.round();
        let (epsilon, n) = if (ratio - nearest).abs() <= integer_detuning_tol {
            (nearest * omega, Some(nearest as u32))
        } else {
            (epsilon, None)
        };
        Ok(Self { epsilon, beta, alpha, omega, n })
    }

    /// Parses a flat key-value config (see [`key_value_pairs`]) such as
    ///
    /// ```text
    /// epsilon = 1
    /// beta = 2.7, alpha = 2
    /// omega = 1
    /// units = omega
    /// ```
    ///
    /// `omega` defaults to 1. With `units = omega` the three energies are
    /// multiplied by Ω.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut epsilon = None;
        let mut beta = None;
        let mut alpha = None;
        let mut omega = 1.0;
        let mut omega_units = false;
        for (key, value) in key_value_pairs(text)? {
            if key == "units" {
                omega_units = match value.as_str() {
                    "omega" => true,
                    "absolute" => false,
                    other => {
                        return Err(Error::InvalidParams(format!("unknown units `{other}`")));
                    }
                };
                continue;
            }
            let v: f64 = value
                .parse()
                .map_err(|_| Error::InvalidParams(format!("{key}: cannot parse `{value}`")))?;
            match key.as_str() {
                "epsilon" => epsilon = Some(v),
                "beta" => beta = Some(v),
                "alpha" => alpha = Some(v),
                "omega" => omega = v,
                other => return Err(Error::InvalidParams(format!("unknown key `{other}`"))),
            }
        }
        let missing = |name: &str| Error::InvalidParams(format!("missing key `{name}`"));
        let epsilon = epsilon.ok_or_else(|| missing("epsilon"))?;
        let beta = beta.ok_or_else(|| missing("beta"))?;
        let alpha = alpha.ok_or_else(|| missing("alpha"))?;
        if omega_units {
            Self::in_units_of_omega(epsilon, beta, alpha, omega)
        } else {
            Self::new(epsilon, beta, alpha, omega)
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Integer-detuning index, if ε = nΩ.
    pub fn n(&self) -> Option<u32> {
        self.n
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.epsilon, self.beta, alpha, self.omega)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(epsilon, self.beta, self.alpha, self.omega)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.epsilon, beta, self.alpha, self.omega)
    }

    /// `H(t)`.
    pub fn hamiltonian_at(&self, t: f64) -> ComplexMatrix2 {
        let z = 0.5 * self.epsilon + self.alpha * (self.omega * t).cos();
        real_matrix(z, self.beta, self.beta, -z)
    }

    /// `H_+ = (ε/2)σz + βσx` and `H_-(t) = ασz cos(Ωt)` with its two
    /// Fourier coefficients `(α/2)σz` at `k = ±1`.
    pub fn split_static_driving(&self) -> (ComplexMatrix2, FourierOperatorSeries) {
        let h = 0.5 * self.epsilon;
        let static_part = real_matrix(h, self.beta, self.beta, -h);
        let half = pauli::sigma_z() * C64::from(0.5 * self.alpha);
        let driving = FourierOperatorSeries::new(-1, vec![half, ComplexMatrix2::zeros(), half], self.omega);
        (static_part, driving)
    }
}

/// `O(t) = Σ_k e^{-ikΩt} O_k` for `k_min ≤ k ≤ k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierOperatorSeries {
    k_min: i32,
    coefficients: Vec<ComplexMatrix2>,
    omega: f64,
}

impl FourierOperatorSeries {
    /// `coefficients[i]` is the coefficient of `k = k_min + i`.
    pub fn new(k_min: i32, coefficients: Vec<ComplexMatrix2>, omega: f64) -> Self {
        assert!(!coefficients.is_empty(), "Fourier series needs at least one coefficient");
        Self { k_min, coefficients, omega }
    }

    pub fn zeros(k_min: i32, k_max: i32, omega: f64) -> Self {
        assert!(k_max >= k_min);
        Self::new(k_min, vec![ComplexMatrix2::zeros(); (k_max - k_min + 1) as usize], omega)
    }

    /// Time-independent operator as a single `k = 0` coefficient.
    pub fn constant(m: ComplexMatrix2, omega: f64) -> Self {
        Self::new(0, vec![m], omega)
    }

    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.coefficients.len() as i32 - 1
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn ks(&self) -> std::ops::RangeInclusive<i32> {
        self.k_min..=self.k_max()
    }

    /// `O_k`, zero outside the stored range.
    pub fn coeff(&self, k: i32) -> ComplexMatrix2 {
        if k < self.k_min || k > self.k_max() {
            ComplexMatrix2::zeros()
        } else {
            self.coefficients[(k - self.k_min) as usize]
        }
    }

    pub fn coeff_mut(&mut self, k: i32) -> &mut ComplexMatrix2 {
        assert!(k >= self.k_min && k <= self.k_max(), "k = {k} outside series range");
        &mut self.coefficients[(k - self.k_min) as usize]
    }

    pub fn coefficients(&self) -> &[ComplexMatrix2] {
        &self.coefficients
    }

    /// `Σ_k e^{-ikΩt} O_k`.
    pub fn eval(&self, t: f64) -> ComplexMatrix2 {
        self.ks()
            .zip(&self.coefficients)
            .fold(ComplexMatrix2::zeros(), |acc, (k, c)| {
                acc + c * C64::from_polar(1.0, -(k as f64) * self.omega * t)
            })
    }

    /// Series of `O(t + T/2)`: `O_k → (-1)^k O_k`.
    pub fn half_period_shifted(&self) -> Self {
        let coefficients = self
            .ks()
            .zip(&self.coefficients)
            .map(|(k, c)| if k.rem_euclid(2) == 1 { -c } else { *c })
            .collect();
        Self::new(self.k_min, coefficients, self.omega)
    }

    /// Series of `O†(t)`: coefficient `k` is `O_{-k}†`.
    pub fn adjoint(&self) -> Self {
        let coefficients = (-self.k_max()..=-self.k_min)
            .map(|k| self.coeff(-k).adjoint())
            .collect();
        Self::new(-self.k_max(), coefficients, self.omega)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self::new(self.k_min, self.coefficients.iter().map(|c| c * factor).collect(), self.omega)
    }

    /// Entrywise complex conjugate of every coefficient.
    pub fn conj_coefficients(&self) -> Self {
        Self::new(self.k_min, self.coefficients.iter().map(|c| c.map(|z| z.conj())).collect(), self.omega)
    }

    /// Largest entry modulus over all coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().map(max_abs).fold(0.0, f64::max)
    }

    /// Largest imaginary part over all coefficient entries.
    pub fn max_imag(&self) -> f64 {
        self.coefficients
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    /// `max_k ‖O_k − O'_k‖_max` over the union of both ranges.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let lo = self.k_min.min(other.k_min);
        let hi = self.k_max().max(other.k_max());
        (lo..=hi)
            .map(|k| max_abs(&(self.coeff(k) - other.coeff(k))))
            .fold(0.0, f64::max)
    }

    /// Drops leading/trailing coefficients whose entries are all ≤ `tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let keep: Vec<i32> = self.ks().filter(|&k| max_abs(&self.coeff(k)) > tol).collect();
        match (keep.first(), keep.last()) {
            (Some(&lo), Some(&hi)) => {
                Self::new(lo, (lo..=hi).map(|k| self.coeff(k)).collect(), self.omega)
            }
            _ => Self::zeros(0, 0, self.omega),
        }
    }
}

impl std::ops::Add for &FourierOperatorSeries {
    type Output = FourierOperatorSeries;

    fn add(self, rhs: Self) -> FourierOperatorSeries {
        let lo = self.k_min.min(rhs.k_min);
        let hi = self.k_max().max(rhs.k_max());
        let coefficients = (lo..=hi).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        FourierOperatorSeries::new(lo, coefficients, self.omega)
    }
}
