use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("`{name}` = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("vector norm {0:e} is too small to define a null space")]
    ZeroVector(f64),

    #[error("leading coefficient {0:e} is degenerate")]
    DegenerateLeading(f64),

    #[error("cubic x^3 + {b}x + {c} has no positive root")]
    NoPositiveRoot { b: f64, c: f64 },

    #[error("root {root} leaves residual {residual:e} above tolerance {tolerance:e}")]
    Residual { root: f64, residual: f64, tolerance: f64 },

    #[error("bracket [{lo}, {hi}] does not straddle the crossing (gap at lo {gap_lo:e}, at hi {gap_hi:e})")]
    Bracket { lo: f64, hi: f64, gap_lo: f64, gap_hi: f64 },

    #[error("no positive secrecy rate is achievable on the search grid")]
    NoPositiveSecrecy,

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] CsvError),
}

/// Wrapper so `Error` stays `Clone + PartialEq` while carrying CSV/IO failures.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct CsvError(pub String);

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(CsvError(e.to_string()))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(CsvError(e.to_string()))
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "theta",
            value: theta,
            domain: "(0, 1)",
        })
    }
}

pub(crate) fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, inf)",
        })
    }
}
