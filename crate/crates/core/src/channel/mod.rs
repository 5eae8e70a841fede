//! The LEO-satellite-to-ground-station link: geometry and path loss,
//! shadowed-Rician small-scale fading, Doppler, and the received signal.

mod budget;
mod fading;

pub use budget::{
    doppler_shift, fspl_db, gaseous_loss_db, slant_distance, total_path_loss, LinkBudget, LinkGeometry, LinkReport,
    EARTH_RADIUS_M,
};
pub use fading::{
    apply_channel, instantaneous_snr, sample_channel_matrix, symbol_energy, time_varying_response, ChannelRealization,
    ShadowedRician,
};
