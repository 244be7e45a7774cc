//! JSON state-spec documents.
//!
//! One object with a `"kind"` tag and fields mirroring the constructor
//! parameters. Complex numbers are `[re, im]` pairs:
//!
//! ```json
//! {"kind": "qutrit", "c1": [0.5773502691896258, 0], "c2": [0.5773502691896258, 0], "c3": [0.5773502691896258, 0]}
//! {"kind": "squeezed_vacuum", "r": 1.0, "phi": 0.0, "tail_epsilon": 1e-12}
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{
    make_diagonal, make_product, make_qutrit, make_single_photon, make_squeezed_vacuum,
    make_stationary, Normalization, SqueezeParams, TwoModeState, DEFAULT_N_CAP,
};

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Product {
        a_coeffs: Vec<ComplexPair>,
        b_coeffs: Vec<ComplexPair>,
        #[serde(default)]
        theta: f64,
        #[serde(default)]
        auto_normalize: bool,
    },
    Stationary {
        c_coeffs: Vec<ComplexPair>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        total_photons: Option<usize>,
        #[serde(default)]
        theta: f64,
        #[serde(default)]
        auto_normalize: bool,
    },
    Diagonal {
        c_coeffs: Vec<ComplexPair>,
        #[serde(default)]
        theta: f64,
        #[serde(default)]
        auto_normalize: bool,
    },
    SinglePhoton {
        alpha: f64,
        #[serde(default)]
        theta: f64,
    },
    Qutrit {
        c1: ComplexPair,
        c2: ComplexPair,
        c3: ComplexPair,
        #[serde(default)]
        theta: f64,
        #[serde(default)]
        auto_normalize: bool,
    },
    SqueezedVacuum {
        r: f64,
        #[serde(default)]
        phi: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_epsilon: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_cap: Option<usize>,
        #[serde(default)]
        theta: f64,
    },
}

fn complex(v: &[ComplexPair]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn mode(auto: bool) -> Normalization {
    if auto {
        Normalization::Auto
    } else {
        Normalization::Strict
    }
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    /// Builds the state; `default_tail` applies to a squeezed vacuum without
    /// its own `tail_epsilon`.
    pub fn build(&self, default_tail: f64) -> Result<TwoModeState> {
        match self {
            StateSpec::Product {
                a_coeffs,
                b_coeffs,
                theta,
                auto_normalize,
            } => make_product(complex(a_coeffs), complex(b_coeffs), *theta, mode(*auto_normalize)),
            StateSpec::Stationary {
                c_coeffs,
                total_photons,
                theta,
                auto_normalize,
            } => {
                if let Some(n) = total_photons {
                    if *n + 1 != c_coeffs.len() {
                        return Err(Error::Spec(format!(
                            "total_photons = {n} needs {} coefficients, got {}",
                            n + 1,
                            c_coeffs.len()
                        )));
                    }
                }
                make_stationary(complex(c_coeffs), *theta, mode(*auto_normalize))
            }
            StateSpec::Diagonal {
                c_coeffs,
                theta,
                auto_normalize,
            } => make_diagonal(complex(c_coeffs), *theta, mode(*auto_normalize)),
            StateSpec::SinglePhoton { alpha, theta } => Ok(make_single_photon(*alpha, *theta)),
            StateSpec::Qutrit {
                c1,
                c2,
                c3,
                theta,
                auto_normalize,
            } => {
                let [c1, c2, c3] = [c1, c2, c3].map(|&[re, im]| Complex64::new(re, im));
                make_qutrit(c1, c2, c3, *theta, mode(*auto_normalize))
            }
            StateSpec::SqueezedVacuum {
                r,
                phi,
                tail_epsilon,
                n_cap,
                theta,
            } => make_squeezed_vacuum(
                SqueezeParams {
                    r: *r,
                    phi: *phi,
                    tail_epsilon: tail_epsilon.unwrap_or(default_tail),
                    n_cap: n_cap.unwrap_or(DEFAULT_N_CAP),
                },
                *theta,
            ),
        }
    }

    /// The qutrit coefficients `(c1, c2, c3)` when this is a qutrit spec.
    pub fn qutrit_coefficients(&self) -> Option<[Complex64; 3]> {
        match self {
            StateSpec::Qutrit { c1, c2, c3, .. } => Some([c1, c2, c3].map(|&[re, im]| Complex64::new(re, im))),
            _ => None,
        }
    }
}
