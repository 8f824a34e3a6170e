//! GSI systems and the analytic quantities attached to them: d-coefficients,
//! w-functions, `t_α`, the Calderón sum, bandwidth, means and UCP residuals.

pub mod bandwidth;
pub mod coeffs;
pub mod mean;
pub mod spectral;
pub mod system;
pub mod ucp;

pub use bandwidth::{bandwidth, bandwidth_of, geometric_bandwidth, Bandwidth, BandwidthValue};
pub use coeffs::{
    d_coefficient, d_zero_exact, lic_coefficients, lic_layer_totals, relevant_frequencies, w_layer, w_layer_direct,
    w_total, LicCoefficients,
};
pub use mean::{mean_exact, mean_windowed, window_schedule, MeanEstimate};
pub use spectral::{calderon, t_alpha, Deviation, RealRange, SpectralFunction, SpectralSum};
pub use system::{greedy_shift_two, GsiSystem, Layer, Tail, TailKind, TailValue, UcpStatus};
pub use ucp::{prefix_truncations, ucp_residual, ResidualEntry, Target, UcpReport};
