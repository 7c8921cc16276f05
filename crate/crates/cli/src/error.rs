use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Model(#[from] mmw_backhaul::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("plot: {0}")]
    Plot(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use mmw_backhaul::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) | CliError::Plot(_) => 1,
            CliError::Infeasible(_) => 3,
            CliError::Model(E::InfeasibleGeometry { .. } | E::InfeasiblePlan(_)) => 3,
            CliError::Model(E::Config(_) | E::GridTooLarge { .. }) => 2,
            CliError::Model(E::Domain { .. } | E::Quadrature { .. }) => 4,
        }
    }
}

pub fn io_error(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}
