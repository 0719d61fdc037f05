use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error(transparent)]
    Core(#[from] htwist_core::Error),
    #[error("trace Gram matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("trace is not Markov: expected {expected}, found {found}")]
    NonMarkov { expected: f64, found: f64 },
    #[error("{0}")]
    Relation(String),
    #[error("rank decision ambiguous: singular value {value:.3e} lies within 10x of tolerance {tol:.0e}")]
    Precision { value: f64, tol: f64 },
    #[error("representation needs {entries} complex entries, above the bound {bound}")]
    TooLarge { entries: usize, bound: usize },
    #[error("level {0} is not supported")]
    UnsupportedLevel(usize),
    #[error("input matrix is not a complex Hadamard matrix")]
    NotHadamard,
    #[error("no tower orientation reproduces the depth-two ladder")]
    Orientation,
}

pub type Result<T> = std::result::Result<T, NumericsError>;
