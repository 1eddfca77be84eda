use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] spinmagic::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 for a numerical failure.
    pub fn exit_code(&self) -> i32 {
        use spinmagic::Error as E;
        match self {
            CliError::Core(E::NoConvergence | E::DegenerateGain(_) | E::ImaginaryResidue(_) | E::VanishingMeanSpin) => 3,
            _ => 2,
        }
    }
}
