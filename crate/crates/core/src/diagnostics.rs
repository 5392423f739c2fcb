use std::fmt;

/// Non-fatal conditions attached to numerical results.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// `1 - Σ f_n²` of a truncated amplitude vector.
    TruncationLoss { loss: f64, truncation: usize },
    /// Relative change of a truncated series between two cutoffs.
    SeriesResidual { residual: f64, truncation: usize },
    /// Norm fraction of `|∂f⟩` carried by the unresolved tail of the basis.
    DerivativeTail { tail: f64, truncation: usize },
    /// Likelihood maximum found on the upper end of the search interval.
    BoundaryMaximum { estimate: f64, search_hi: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::TruncationLoss { loss, truncation } => {
                write!(f, "truncation loss {loss:.3e} at N_max = {truncation}")
            }
            Diagnostic::SeriesResidual {
                residual,
                truncation,
            } => write!(f, "series residual {residual:.3e} at N_max = {truncation}"),
            Diagnostic::DerivativeTail { tail, truncation } => {
                write!(f, "derivative tail {tail:.3e} at N_max = {truncation}")
            }
            Diagnostic::BoundaryMaximum {
                estimate,
                search_hi,
            } => write!(f, "maximum {estimate} on search boundary {search_hi}"),
        }
    }
}
