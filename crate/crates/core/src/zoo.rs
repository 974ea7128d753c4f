//! A corpus of analytic test functions with known structure.
//!
//! Every family is realized through its Taylor coefficients, so each signal
//! has a one-sided spectrum by construction. Families with infinite
//! expansions (kernel and near-boundary members) are truncated once the
//! coefficients fall below 1e-17 of their peak, far beneath every gate in
//! the test suites.

use crate::error::{Error, Result};
use crate::grid::BoundaryGrid;
use crate::signal::BoundarySignal;
use crate::signs::{counter_hash, sign_of, uniform01};
use crate::C64;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// Relative coefficient size at which infinite expansions are cut.
const TRUNCATION_TOL: f64 = 1e-17;

/// Specification of one corpus member.
#[derive(Debug, Clone, PartialEq)]
pub enum ZooSpec {
    /// z^degree.
    Monomial { degree: u32 },
    /// sum_{k < terms} z^k.
    DirichletKernel { terms: u32 },
    /// Normalized reproducing kernel at radius r, turn h.
    Szego { radius: f64, turn: f64 },
    /// Unit-modulus random-phase coefficients of the given degree.
    RandomPolynomial { degree: u32, seed: u64 },
    /// sum_{j < levels} ±z^(2^j) with seeded signs.
    Lacunary { levels: u32, seed: u64 },
    /// (1 - damping·z)^(-exponent) with damping < 1.
    NearBoundaryPower { exponent: f64, damping: f64 },
}

impl ZooSpec {
    /// Family name used in manifests and result tables.
    pub fn family(&self) -> &'static str {
        match self {
            ZooSpec::Monomial { .. } => "monomial",
            ZooSpec::DirichletKernel { .. } => "dirichlet_kernel",
            ZooSpec::Szego { .. } => "szego",
            ZooSpec::RandomPolynomial { .. } => "random_polynomial",
            ZooSpec::Lacunary { .. } => "lacunary",
            ZooSpec::NearBoundaryPower { .. } => "near_boundary_power",
        }
    }

    /// Compact parameter string for tables.
    pub fn label(&self) -> String {
        match self {
            ZooSpec::Monomial { degree } => format!("monomial(deg={degree})"),
            ZooSpec::DirichletKernel { terms } => format!("dirichlet_kernel(terms={terms})"),
            ZooSpec::Szego { radius, turn } => format!("szego(r={radius};h={turn})"),
            ZooSpec::RandomPolynomial { degree, seed } => {
                format!("random_polynomial(deg={degree};seed={seed})")
            }
            ZooSpec::Lacunary { levels, seed } => format!("lacunary(levels={levels};seed={seed})"),
            ZooSpec::NearBoundaryPower { exponent, damping } => {
                format!("near_boundary_power(a={exponent};rho={damping})")
            }
        }
    }

    /// Taylor coefficients, truncated to at most `max_len` terms.
    pub fn taylor_coefficients(&self, max_len: usize) -> Result<Vec<C64>> {
        match *self {
            ZooSpec::Monomial { degree } => {
                let len = degree as usize + 1;
                if len > max_len {
                    return Err(Error::Resolution);
                }
                let mut c = vec![C64::new(0.0, 0.0); len];
                c[degree as usize] = C64::new(1.0, 0.0);
                Ok(c)
            }
            ZooSpec::DirichletKernel { terms } => {
                if terms == 0 {
                    return Err(Error::DomainError);
                }
                if terms as usize > max_len {
                    return Err(Error::Resolution);
                }
                Ok(vec![C64::new(1.0, 0.0); terms as usize])
            }
            ZooSpec::Szego { radius, turn } => {
                if !(0.0..1.0).contains(&radius) || !(0.0..1.0).contains(&turn) {
                    return Err(Error::InvalidPole);
                }
                // sqrt(1-r^2) * (conj a)^k
                let scale = (1.0 - radius * radius).sqrt();
                let step = C64::from_polar(radius, -core::f64::consts::TAU * turn);
                let mut c = Vec::new();
                let mut term = C64::new(scale, 0.0);
                loop {
                    c.push(term);
                    term *= step;
                    if term.norm() <= TRUNCATION_TOL * scale {
                        break;
                    }
                    if c.len() >= max_len {
                        return Err(Error::Resolution);
                    }
                }
                Ok(c)
            }
            ZooSpec::RandomPolynomial { degree, seed } => {
                let len = degree as usize + 1;
                if len > max_len {
                    return Err(Error::Resolution);
                }
                Ok((0..len)
                    .map(|k| {
                        let theta =
                            core::f64::consts::TAU * uniform01(counter_hash(seed, 0, k as u64));
                        C64::from_polar(1.0, theta)
                    })
                    .collect())
            }
            ZooSpec::Lacunary { levels, seed } => {
                if levels == 0 {
                    return Err(Error::DomainError);
                }
                let top = 1usize << (levels - 1);
                if top + 1 > max_len {
                    return Err(Error::Resolution);
                }
                let mut c = vec![C64::new(0.0, 0.0); top + 1];
                for j in 0..levels {
                    let w = sign_of(counter_hash(seed, 1, j as u64));
                    c[1usize << j] = C64::new(w, 0.0);
                }
                Ok(c)
            }
            ZooSpec::NearBoundaryPower { exponent, damping } => {
                if !(0.0..1.0).contains(&damping) || exponent <= 0.0 {
                    return Err(Error::DomainError);
                }
                // c_0 = 1, c_{k+1} = c_k * rho * (k + a) / (k + 1)
                let mut c = Vec::new();
                let mut term = C64::new(1.0, 0.0);
                let mut peak: f64 = 1.0;
                let mut k = 0usize;
                loop {
                    c.push(term);
                    let factor = damping * (k as f64 + exponent) / (k as f64 + 1.0);
                    term *= factor;
                    peak = peak.max(term.norm());
                    k += 1;
                    if term.norm() <= TRUNCATION_TOL * peak {
                        break;
                    }
                    if c.len() >= max_len {
                        return Err(Error::Resolution);
                    }
                }
                Ok(c)
            }
        }
    }
}

/// Exact synthesis of a one-sided coefficient sequence on a grid.
pub fn taylor_to_signal(coeffs: &[C64], grid: &BoundaryGrid) -> Result<BoundarySignal> {
    BoundarySignal::from_taylor(*grid, coeffs)
}

/// Sample a corpus member on a grid.
pub fn realize(spec: &ZooSpec, grid: &BoundaryGrid) -> Result<BoundarySignal> {
    let coeffs = spec.taylor_coefficients(grid.size() / 2)?;
    taylor_to_signal(&coeffs, grid)
}

/// The default 20-member corpus used by the experiment suites.
///
/// Parameters are fixed here (and echoed in manifests) so every run is
/// regenerable. Polynomial degrees span 4..64 for the trend checks; the
/// kernel and near-boundary members keep their mass within eight dyadic
/// levels so truncated analyses stay honest.
pub fn default_corpus() -> Vec<ZooSpec> {
    vec![
        ZooSpec::Monomial { degree: 0 },
        ZooSpec::Monomial { degree: 3 },
        ZooSpec::Monomial { degree: 17 },
        ZooSpec::DirichletKernel { terms: 32 },
        ZooSpec::DirichletKernel { terms: 64 },
        ZooSpec::DirichletKernel { terms: 128 },
        ZooSpec::Szego {
            radius: 0.5,
            turn: 0.0,
        },
        ZooSpec::Szego {
            radius: 0.8,
            turn: 0.3,
        },
        ZooSpec::Szego {
            radius: 0.9,
            turn: 0.7,
        },
        ZooSpec::Szego {
            radius: 0.6,
            turn: 0.123,
        },
        ZooSpec::RandomPolynomial { degree: 4, seed: 101 },
        ZooSpec::RandomPolynomial { degree: 8, seed: 102 },
        ZooSpec::RandomPolynomial { degree: 16, seed: 103 },
        ZooSpec::RandomPolynomial { degree: 32, seed: 104 },
        ZooSpec::RandomPolynomial { degree: 64, seed: 105 },
        ZooSpec::Lacunary { levels: 4, seed: 201 },
        ZooSpec::Lacunary { levels: 6, seed: 202 },
        ZooSpec::NearBoundaryPower {
            exponent: 0.5,
            damping: 0.8,
        },
        ZooSpec::NearBoundaryPower {
            exponent: 1.0,
            damping: 0.9,
        },
        ZooSpec::NearBoundaryPower {
            exponent: 2.0,
            damping: 0.85,
        },
    ]
}
