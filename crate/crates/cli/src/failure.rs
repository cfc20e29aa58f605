use std::fmt;

/// Exit-code classes: 2 for bad input, parameters or schemas, 3 for
/// samples that do not decay, 4 for unstable experiments.
#[derive(Debug)]
pub enum Failure {
    Domain(String),
    Decay(String),
    Instability(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 2,
            Failure::Decay(_) => 3,
            Failure::Instability(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Domain(m) | Failure::Decay(m) | Failure::Instability(m) => f.write_str(m),
        }
    }
}

impl From<jacobi::Error> for Failure {
    fn from(e: jacobi::Error) -> Self {
        match e {
            jacobi::Error::InsufficientDecay { .. } => Failure::Decay(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}
