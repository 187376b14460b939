mod occupancy;
mod pdf;
mod rate;
mod summary;
mod vicinity;

pub use occupancy::{occupancy_2d, Occupancy, DEFAULT_GRID};
pub use pdf::{
    angle_pdf, chi_square_uniform, circular_distance, stationarity_check, AnglePdf,
    ChiSquareTest, DEFAULT_BURN_IN, DEFAULT_PDF_BINS,
};
pub use rate::{mean_rabi_rate, RateEstimate};
pub use summary::{pool_rates, summarize, AngleStatistics, AnalysisSummary, SummaryOptions};
pub use vicinity::{
    mean_return_times, residence_counts, residence_probabilities, return_episodes,
    summarize_returns, Residence, ReturnEpisodes, ReturnTime, VicinitySpec, DEFAULT_HALF_WIDTH,
};
