//! Unit conversions shared across the crate.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Power ratio in dB to linear.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts) + 30.0
}

/// Wavelength in metres for a carrier in GHz.
pub fn wavelength_m(fc_ghz: f64) -> f64 {
    SPEED_OF_LIGHT / (fc_ghz * 1e9)
}

/// Receiver sensitivity from thermal noise: -174 dBm/Hz + 10 log10(B) + NF + SNR.
pub fn threshold_from_noise_dbm(noise_figure_db: f64, bandwidth_hz: f64, required_snr_db: f64) -> f64 {
    -174.0 + 10.0 * bandwidth_hz.log10() + noise_figure_db + required_snr_db
}
