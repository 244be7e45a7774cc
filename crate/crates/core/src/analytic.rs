//! Schmidt spectra and the entanglement parameter K straight from coefficients.
//!
//! A stationary or diagonal state is already written in Schmidt form: the
//! oscillator functions are orthonormal, so `lambda_n = |C_n|^2`. A product
//! state has a single Schmidt term. `K = 1 / sum lambda_n^2`.

use std::cmp::Ordering;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::states::{ComplexCoefficient, TwoModeState, NORM_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Analytic,
    Numeric,
}

/// Schmidt coefficients `lambda_n`, sorted descending.
///
/// `pairing[k]` is the oscillator index n of the k-th entry: the mode pair is
/// `(psi_n(x), psi_{N-n}(y))` for stationary states and `(psi_n(x), psi_n(y))`
/// for diagonal ones. Numeric spectra record the rank position instead.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    lambdas: Vec<f64>,
    pairing: Vec<usize>,
    source: Source,
}

impl SchmidtSpectrum {
    /// Sorts `(lambda, index)` pairs descending, ties by ascending index.
    pub fn new(mut entries: Vec<(f64, usize)>, source: Source) -> Result<Self> {
        if entries.iter().any(|&(l, _)| !(l >= 0.0 && l.is_finite())) {
            return Err(Error::InvalidParameter(
                "Schmidt coefficients must be finite and non-negative".into(),
            ));
        }
        entries.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1)));
        let (lambdas, pairing) = entries.into_iter().unzip();
        Ok(SchmidtSpectrum {
            lambdas,
            pairing,
            source,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Number of strictly positive entries.
    pub fn nonzero_count(&self) -> usize {
        self.lambdas.iter().filter(|&&l| l > 0.0).count()
    }

    pub fn total(&self) -> f64 {
        self.lambdas.iter().sum()
    }
}

/// K together with the spectrum it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub k: f64,
    /// `K - 1`.
    pub degree: f64,
    pub spectrum: SchmidtSpectrum,
    /// `|sum lambda - 1|` before any renormalization.
    pub norm_residual: f64,
    pub source: Source,
}

impl EntanglementReport {
    /// Checks `1 <= K <= #nonzero lambdas` up to relative rounding slack.
    pub fn within_bounds(&self, slack: f64) -> bool {
        let upper = self.spectrum.nonzero_count() as f64;
        self.k >= 1.0 - slack && self.k <= upper * (1.0 + slack)
    }
}

impl Serialize for EntanglementReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("EntanglementReport", 6)?;
        st.serialize_field("K", &self.k)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("lambdas", self.spectrum.lambdas())?;
        st.serialize_field("pairing", self.spectrum.pairing())?;
        st.serialize_field("norm_residual", &self.norm_residual)?;
        st.serialize_field("source", &self.source)?;
        st.end()
    }
}

/// `lambda_n = |C_n|^2` (stationary, diagonal) or the single `lambda = 1` of a product.
pub fn analytic_spectrum(state: &TwoModeState) -> SchmidtSpectrum {
    let entries = match state {
        TwoModeState::Product { .. } => vec![(1.0, 0)],
        TwoModeState::Stationary { c_coeffs, .. } | TwoModeState::Diagonal { c_coeffs, .. } => c_coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| (c.norm_sqr(), n))
            .collect(),
    };
    SchmidtSpectrum::new(entries, Source::Analytic).expect("squared magnitudes are non-negative")
}

/// `K = 1 / sum lambda_n^2`.
pub fn schmidt_k(spectrum: &SchmidtSpectrum) -> Result<EntanglementReport> {
    let sum_sq: f64 = spectrum.lambdas().iter().map(|l| l * l).sum();
    if spectrum.is_empty() || sum_sq == 0.0 {
        return Err(Error::EmptySpectrum);
    }
    let k = sum_sq.recip();
    Ok(EntanglementReport {
        k,
        degree: k - 1.0,
        norm_residual: (spectrum.total() - 1.0).abs(),
        source: spectrum.source(),
        spectrum: spectrum.clone(),
    })
}

/// Analytic spectrum and K in one step.
pub fn analytic_report(state: &TwoModeState) -> EntanglementReport {
    schmidt_k(&analytic_spectrum(state)).expect("normalized states have a non-empty spectrum")
}

/// `K(alpha) = 1 / (sin^4 alpha + cos^4 alpha)` for the single-photon family.
pub fn k_single_photon(alpha: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    (s.powi(4) + c.powi(4)).recip()
}

/// Polarization-variable Schmidt parameter of the qutrit
/// `c1 |2,0> + c2 |1,1> + c3 |0,2>`: `2 / (2 - |2 c1 c3 - c2^2|^2)`.
pub fn k_qutrit_polarization(
    c1: ComplexCoefficient,
    c2: ComplexCoefficient,
    c3: ComplexCoefficient,
) -> Result<f64> {
    let residual = (c1.norm_sqr() + c2.norm_sqr() + c3.norm_sqr() - 1.0).abs();
    if residual > NORM_TOLERANCE {
        return Err(Error::NotNormalized {
            what: "qutrit coefficients",
            residual,
        });
    }
    let d = (2.0 * c1 * c3 - c2 * c2).norm_sqr();
    Ok(2.0 / (2.0 - d))
}

/// Quadrature K of the same qutrit: `1 / (|c1|^4 + |c2|^4 + |c3|^4)`.
pub fn k_qutrit_quadrature(c1: ComplexCoefficient, c2: ComplexCoefficient, c3: ComplexCoefficient) -> f64 {
    (c1.norm_sqr().powi(2) + c2.norm_sqr().powi(2) + c3.norm_sqr().powi(2)).recip()
}

/// `cosh 2r`, the K of the untruncated two-mode squeezed vacuum.
pub fn k_squeezed_closed_form(r: f64) -> f64 {
    (2.0 * r).cosh()
}

/// `2 sinh^2 r`, its mean photon number.
pub fn photons_squeezed_closed_form(r: f64) -> f64 {
    2.0 * r.sinh().powi(2)
}
