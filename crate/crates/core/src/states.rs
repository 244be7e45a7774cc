//! Two-mode states in the Fock basis, stored as coefficient arrays.
//!
//! Mode H carries the quadrature `x`, mode V carries `y`. A stationary state
//! with N photons stores `C_n` for `|n_H, (N-n)_V>`, i.e. the term
//! `C_n psi_n(x) psi_{N-n}(y)`. A diagonal state stores `C_n` for `|n_H, n_V>`.
//!
//! `theta = omega t - k.r` is the propagation phase. It multiplies Fock
//! components by `exp(i n_total theta)` and never changes any `|C_n|`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexCoefficient = Complex64;

/// Residual allowed on `sum |c|^2 = 1` for caller-supplied coefficients.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Default upper bound on the squeezed-vacuum truncation index.
pub const DEFAULT_N_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum TwoModeState {
    /// `(sum A_n psi_n(x)) (sum B_m psi_m(y))`: always disentangled.
    Product {
        a_coeffs: Vec<ComplexCoefficient>,
        b_coeffs: Vec<ComplexCoefficient>,
        theta: f64,
    },
    /// Fixed total photon number N, `c_coeffs.len() == N + 1`.
    Stationary {
        total_photons: usize,
        c_coeffs: Vec<ComplexCoefficient>,
        theta: f64,
    },
    /// `sum C_n psi_n(x) psi_n(y)`.
    Diagonal {
        c_coeffs: Vec<ComplexCoefficient>,
        theta: f64,
    },
}

/// Whether constructors rescale slightly off-norm input or reject it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    Strict,
    Auto,
}

pub fn norm_sqr(c: &[ComplexCoefficient]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum()
}

fn check_norm(
    what: &'static str,
    mut c: Vec<ComplexCoefficient>,
    mode: Normalization,
) -> Result<Vec<ComplexCoefficient>> {
    if c.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidParameter(format!("{what} has non-finite entries")));
    }
    let total = norm_sqr(&c);
    let residual = (total - 1.0).abs();
    match mode {
        Normalization::Strict if residual > NORM_TOLERANCE => {
            Err(Error::NotNormalized { what, residual })
        }
        Normalization::Auto if total == 0.0 => Err(Error::NotNormalized { what, residual }),
        _ => {
            renormalize(&mut c);
            Ok(c)
        }
    }
}

fn renormalize(c: &mut [ComplexCoefficient]) {
    let scale = norm_sqr(c).sqrt().recip();
    for z in c.iter_mut() {
        *z *= scale;
    }
}

impl TwoModeState {
    pub fn theta(&self) -> f64 {
        match self {
            TwoModeState::Product { theta, .. }
            | TwoModeState::Stationary { theta, .. }
            | TwoModeState::Diagonal { theta, .. } => *theta,
        }
    }

    /// Same state with a different propagation phase.
    pub fn with_theta(mut self, new_theta: f64) -> Self {
        match &mut self {
            TwoModeState::Product { theta, .. }
            | TwoModeState::Stationary { theta, .. }
            | TwoModeState::Diagonal { theta, .. } => *theta = new_theta,
        }
        self
    }

    /// Highest oscillator level appearing in either mode.
    pub fn max_level(&self) -> usize {
        match self {
            TwoModeState::Product {
                a_coeffs, b_coeffs, ..
            } => a_coeffs.len().max(b_coeffs.len()).saturating_sub(1),
            TwoModeState::Stationary { total_photons, .. } => *total_photons,
            TwoModeState::Diagonal { c_coeffs, .. } => c_coeffs.len().saturating_sub(1),
        }
    }

    /// Coefficient arrays; Product returns `A` then `B`.
    pub fn coefficients(&self) -> Vec<&[ComplexCoefficient]> {
        match self {
            TwoModeState::Product {
                a_coeffs, b_coeffs, ..
            } => vec![a_coeffs, b_coeffs],
            TwoModeState::Stationary { c_coeffs, .. } | TwoModeState::Diagonal { c_coeffs, .. } => {
                vec![c_coeffs]
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            TwoModeState::Product { .. } => "product",
            TwoModeState::Stationary { .. } => "stationary",
            TwoModeState::Diagonal { .. } => "diagonal",
        }
    }
}

/// Stationary state from explicit `C_0..C_N`.
pub fn make_stationary(
    c_coeffs: Vec<ComplexCoefficient>,
    theta: f64,
    mode: Normalization,
) -> Result<TwoModeState> {
    if c_coeffs.is_empty() {
        return Err(Error::InvalidParameter("stationary state needs N+1 >= 1 coefficients".into()));
    }
    let c_coeffs = check_norm("stationary coefficients", c_coeffs, mode)?;
    Ok(TwoModeState::Stationary {
        total_photons: c_coeffs.len() - 1,
        c_coeffs,
        theta,
    })
}

/// Diagonal state `sum C_n |n, n>` from explicit coefficients.
pub fn make_diagonal(
    c_coeffs: Vec<ComplexCoefficient>,
    theta: f64,
    mode: Normalization,
) -> Result<TwoModeState> {
    if c_coeffs.is_empty() {
        return Err(Error::InvalidParameter("diagonal state needs at least one coefficient".into()));
    }
    let c_coeffs = check_norm("diagonal coefficients", c_coeffs, mode)?;
    Ok(TwoModeState::Diagonal { c_coeffs, theta })
}

/// `cos(alpha) |0_H, 1_V> + sin(alpha) |1_H, 0_V>`.
pub fn make_single_photon(alpha: f64, theta: f64) -> TwoModeState {
    TwoModeState::Stationary {
        total_photons: 1,
        c_coeffs: vec![Complex64::from(alpha.cos()), Complex64::from(alpha.sin())],
        theta,
    }
}

/// `c1 |2_H, 0_V> + c2 |1_H, 1_V> + c3 |0_H, 2_V>`.
///
/// Stored with n counting H photons, so `c_coeffs = [c3, c2, c1]`.
pub fn make_qutrit(
    c1: ComplexCoefficient,
    c2: ComplexCoefficient,
    c3: ComplexCoefficient,
    theta: f64,
    mode: Normalization,
) -> Result<TwoModeState> {
    let c = check_norm("qutrit coefficients", vec![c3, c2, c1], mode)?;
    Ok(TwoModeState::Stationary {
        total_photons: 2,
        c_coeffs: c,
        theta,
    })
}

/// Product state `(sum A_n |n>_H) (sum B_m |m>_V)`.
pub fn make_product(
    a_coeffs: Vec<ComplexCoefficient>,
    b_coeffs: Vec<ComplexCoefficient>,
    theta: f64,
    mode: Normalization,
) -> Result<TwoModeState> {
    if a_coeffs.is_empty() || b_coeffs.is_empty() {
        return Err(Error::InvalidParameter("product factors need at least one coefficient".into()));
    }
    let a_coeffs = check_norm("product factor A", a_coeffs, mode)?;
    let b_coeffs = check_norm("product factor B", b_coeffs, mode)?;
    Ok(TwoModeState::Product {
        a_coeffs,
        b_coeffs,
        theta,
    })
}

/// Fixed-N component `C_n = A_n B_{N-n}` of a product state, renormalized.
pub fn stationary_from_product(
    a_coeffs: &[ComplexCoefficient],
    b_coeffs: &[ComplexCoefficient],
    total_photons: usize,
    theta: f64,
) -> Result<TwoModeState> {
    if a_coeffs.len() <= total_photons || b_coeffs.len() <= total_photons {
        return Err(Error::InvalidParameter(format!(
            "factors of length {} and {} cannot supply indices 0..={total_photons}",
            a_coeffs.len(),
            b_coeffs.len()
        )));
    }
    let mut c: Vec<_> = (0..=total_photons)
        .map(|n| a_coeffs[n] * b_coeffs[total_photons - n])
        .collect();
    if norm_sqr(&c) == 0.0 {
        return Err(Error::ZeroProjection(total_photons));
    }
    renormalize(&mut c);
    Ok(TwoModeState::Stationary {
        total_photons,
        c_coeffs: c,
        theta,
    })
}

/// Parameters of the truncated two-mode squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub r: f64,
    pub phi: f64,
    pub tail_epsilon: f64,
    pub n_cap: usize,
}

impl SqueezeParams {
    pub fn new(r: f64, phi: f64) -> Self {
        SqueezeParams {
            r,
            phi,
            tail_epsilon: 1e-12,
            n_cap: DEFAULT_N_CAP,
        }
    }
}

/// Smallest truncation index with discarded mass `tanh(r)^(2(n+1)) < eps`.
///
/// Returns `Err(achievable_tail)` when that index exceeds `n_cap`.
pub fn squeezed_truncation(r: f64, tail_epsilon: f64, n_cap: usize) -> std::result::Result<usize, f64> {
    let t2 = r.tanh().powi(2);
    let tail = |n: usize| t2.powf(n as f64 + 1.0);
    if t2 == 0.0 {
        return Ok(0);
    }
    let guess = (tail_epsilon.ln() / t2.ln()).floor().max(0.0);
    if guess > n_cap as f64 + 1.0 {
        return Err(tail(n_cap));
    }
    // Guard against rounding in the logarithms at the boundary.
    let mut n = (guess as usize).saturating_sub(1);
    while tail(n) >= tail_epsilon {
        n += 1;
    }
    while n > 0 && tail(n - 1) < tail_epsilon {
        n -= 1;
    }
    if n > n_cap {
        return Err(tail(n_cap));
    }
    Ok(n)
}

/// Two-mode squeezed vacuum `sum (-e^{2i phi} tanh r)^n / cosh r |n, n>`,
/// truncated where the tail drops below `tail_epsilon`, then renormalized.
pub fn make_squeezed_vacuum(params: SqueezeParams, theta: f64) -> Result<TwoModeState> {
    let SqueezeParams {
        r,
        phi,
        tail_epsilon,
        n_cap,
    } = params;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("squeeze parameter r must be >= 0, got {r}")));
    }
    if !(tail_epsilon > 0.0 && tail_epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail_epsilon must lie in (0, 1), got {tail_epsilon}"
        )));
    }
    if !phi.is_finite() {
        return Err(Error::InvalidParameter("phase phi must be finite".into()));
    }
    let n_max = squeezed_truncation(r, tail_epsilon, n_cap).map_err(|achievable| {
        Error::TailUnreachable {
            requested: tail_epsilon,
            achievable,
            n_cap,
        }
    })?;
    let mut c = squeezed_coefficients(r, phi, n_max);
    renormalize(&mut c);
    Ok(TwoModeState::Diagonal { c_coeffs: c, theta })
}

/// Untruncated-profile coefficients `C_0..C_{n_max}` before renormalization.
pub fn squeezed_coefficients(r: f64, phi: f64, n_max: usize) -> Vec<ComplexCoefficient> {
    let t = r.tanh();
    let sech = r.cosh().recip();
    let step = (2.0 * phi + PI).rem_euclid(2.0 * PI);
    (0..=n_max)
        .map(|n| {
            let angle = (n as f64 * step).rem_euclid(2.0 * PI);
            Complex64::from_polar(t.powi(n as i32) * sech, angle)
        })
        .collect()
}

/// Re-expresses a stationary state in the polarization frame rotated by `beta`.
///
/// The new mode operators are
/// `a'_H = cos(beta) a_H - sin(beta) a_V` and `a'_V = sin(beta) a_H + cos(beta) a_V`,
/// so a single photon `make_single_photon(alpha)` becomes
/// `make_single_photon(alpha - beta)`. The degree-N polynomial in the
/// creation operators is expanded binomially and regrouped.
pub fn rotate_basis(state: &TwoModeState, beta: f64) -> Result<TwoModeState> {
    let TwoModeState::Stationary {
        total_photons: n_tot,
        c_coeffs,
        theta,
    } = state
    else {
        return Err(Error::NotStationary);
    };
    let n_tot = *n_tot;
    let (s, c) = beta.sin_cos();
    let lf = log_factorials(n_tot);
    let mut out = vec![Complex64::new(0.0, 0.0); n_tot + 1];

    // a_H^dag = c A + s B, a_V^dag = -s A + c B (A, B the rotated H', V').
    // |n, N-n> ~ (c A + s B)^n (-s A + c B)^(N-n) / sqrt(n! (N-n)!);
    // pick j powers of A from the first factor and k from the second.
    for (n, &cn) in c_coeffs.iter().enumerate() {
        if cn == Complex64::new(0.0, 0.0) {
            continue;
        }
        let rest = n_tot - n;
        for j in 0..=n {
            for k in 0..=rest {
                let m = j + k;
                let log_mag = 0.5 * (lf[m] + lf[n_tot - m] + lf[n] + lf[rest])
                    - lf[j]
                    - lf[n - j]
                    - lf[k]
                    - lf[rest - k];
                let trig = c.powi((j + rest - k) as i32) * s.powi((n - j + k) as i32);
                let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
                out[m] += cn * (sign * trig * log_mag.exp());
            }
        }
    }
    renormalize(&mut out);
    Ok(TwoModeState::Stationary {
        total_photons: n_tot,
        c_coeffs: out,
        theta: *theta,
    })
}

fn log_factorials(n: usize) -> Vec<f64> {
    let mut lf = vec![0.0; n + 1];
    for k in 1..=n {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    lf
}

/// Mean total photon number.
pub fn total_photon_number(state: &TwoModeState) -> f64 {
    let weighted = |c: &[ComplexCoefficient], per_level: f64| -> f64 {
        c.iter()
            .enumerate()
            .map(|(n, z)| per_level * n as f64 * z.norm_sqr())
            .sum()
    };
    match state {
        TwoModeState::Product {
            a_coeffs, b_coeffs, ..
        } => weighted(a_coeffs, 1.0) + weighted(b_coeffs, 1.0),
        TwoModeState::Stationary { total_photons, .. } => *total_photons as f64,
        TwoModeState::Diagonal { c_coeffs, .. } => weighted(c_coeffs, 2.0),
    }
}
