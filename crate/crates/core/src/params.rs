use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, to_fraction_string};

/// Physical parameters of the Rabi Hamiltonian: level splitting ω₀, mode
/// frequency ω and coupling g, all exact rationals.
///
/// `g` is stored as |g|: flipping the boson phase maps g to -g without
/// changing the spectrum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelParams {
    omega0: BigRational,
    omega: BigRational,
    g: BigRational,
}

impl ModelParams {
    pub fn new(omega0: BigRational, omega: BigRational, g: BigRational) -> Result<Self> {
        if !omega.is_positive() {
            return Err(Error::InvalidParams(format!(
                "omega must be positive, got {}",
                to_fraction_string(&omega)
            )));
        }
        if omega0.is_negative() {
            return Err(Error::InvalidParams(format!(
                "omega0 must be non-negative, got {}",
                to_fraction_string(&omega0)
            )));
        }
        Ok(ModelParams {
            omega0,
            omega,
            g: g.abs(),
        })
    }

    /// Convenience constructor for integer parameters.
    pub fn from_ints(omega0: i64, omega: i64, g: i64) -> Result<Self> {
        Self::new(
            BigRational::from_integer(omega0.into()),
            BigRational::from_integer(omega.into()),
            BigRational::from_integer(g.into()),
        )
    }

    /// Parse each parameter from `"p/q"` or a decimal literal.
    pub fn parse(omega0: &str, omega: &str, g: &str) -> Result<Self> {
        Self::new(parse_rational(omega0)?, parse_rational(omega)?, parse_rational(g)?)
    }

    pub fn omega0(&self) -> &BigRational {
        &self.omega0
    }

    pub fn omega(&self) -> &BigRational {
        &self.omega
    }

    pub fn g(&self) -> &BigRational {
        &self.g
    }

    pub fn is_decoupled(&self) -> bool {
        self.g.is_zero()
    }
}

impl fmt::Debug for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModelParams(omega0={}, omega={}, g={})",
            to_fraction_string(&self.omega0),
            to_fraction_string(&self.omega),
            to_fraction_string(&self.g)
        )
    }
}
