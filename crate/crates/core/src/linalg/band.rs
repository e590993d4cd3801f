//! Eigenvalues of real symmetric banded matrices.
//!
//! Givens band-to-tridiagonal reduction followed by Sturm-count bisection.
//! Cost is `O(n² b)` for the reduction and `O(n)` per bisection step, which
//! is what makes dense parameter scans over Floquet matrices affordable
//! when only the eigenvalues inside a window are needed.

/// Real symmetric matrix with `a[i][j] = 0` for `|i - j| > bandwidth`.
#[derive(Debug, Clone)]
pub struct SymmetricBand {
    n: usize,
    bandwidth: usize,
    // dense row-major storage; only a window around the band is touched
    a: Vec<f64>,
}

impl SymmetricBand {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self { n, bandwidth, a: vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets `a[i][j] = a[j][i] = v`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i.abs_diff(j) <= self.bandwidth, "entry ({i}, {j}) outside band");
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    fn window(&self, p: usize, q: usize) -> (usize, usize) {
        let reach = self.bandwidth + 2;
        (p.saturating_sub(reach), (q + reach + 1).min(self.n))
    }

    /// Similarity rotation in the (i-1, i) plane that zeroes `a[i][col]`.
    fn annihilate(&mut self, i: usize, col: usize) {
        let n = self.n;
        let p = i - 1;
        let x = self.a[i * n + col];
        if x == 0.0 {
            return;
        }
        let y = self.a[p * n + col];
        let r = x.hypot(y);
        let (c, s) = (y / r, x / r);
        let (lo, hi) = self.window(p, i);
        for k in lo..hi {
            let u = self.a[p * n + k];
            let v = self.a[i * n + k];
            self.a[p * n + k] = c * u + s * v;
            self.a[i * n + k] = -s * u + c * v;
        }
        for k in lo..hi {
            let u = self.a[k * n + p];
            let v = self.a[k * n + i];
            self.a[k * n + p] = c * u + s * v;
            self.a[k * n + i] = -s * u + c * v;
        }
        self.a[i * n + col] = 0.0;
        self.a[col * n + i] = 0.0;
    }

    /// Reduces to a similar symmetric tridiagonal matrix.
    pub fn tridiagonalize(mut self) -> Tridiagonal {
        let n = self.n;
        let b = self.bandwidth;
        if b > 1 {
            for j in 0..n.saturating_sub(2) {
                for r in (j + 2..=(j + b).min(n - 1)).rev() {
                    self.annihilate(r, j);
                    // chase the bulge created at (p + b, p - 1)
                    let mut p = r;
                    while p + b < n {
                        let i = p + b;
                        if self.a[i * n + p - 1] == 0.0 {
                            break;
                        }
                        self.annihilate(i, p - 1);
                        p = i;
                    }
                }
            }
        }
        let diag = (0..n).map(|i| self.a[i * n + i]).collect();
        let off = (1..n).map(|i| self.a[i * n + i - 1]).collect();
        Tridiagonal { diag, off }
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    fn norm_bound(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * self.norm_bound().max(1.0));
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let e2 = if i > 0 { self.off[i - 1] * self.off[i - 1] } else { 0.0 };
            q = self.diag[i] - x - if i > 0 { e2 / q } else { 0.0 };
            if q.abs() < pivmin {
                q = pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalues in the half-open window `[lo, hi)`, ascending.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let c_lo = self.count_below(lo);
        let c_hi = self.count_below(hi);
        let tol = 2.0 * f64::EPSILON * self.norm_bound().max(lo.abs()).max(hi.abs());
        (c_lo..c_hi)
            .map(|idx| {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if b - a <= tol || mid <= a || mid >= b {
                        break;
                    }
                    if self.count_below(mid) > idx {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }
}
