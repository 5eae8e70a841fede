use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::LinkGeometry;
use crate::error::{Error, Result};
use crate::radar::{BeatMethod, SenseConfig};
use crate::SPEED_OF_LIGHT;

/// Transmit waveform family used by an experiment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WaveformChoice {
    /// Triangle LFM (up-sweep then down-sweep).
    #[default]
    Chirp,
    Sinusoid,
}

impl WaveformChoice {
    pub fn name(self) -> &'static str {
        match self {
            WaveformChoice::Chirp => "chirp",
            WaveformChoice::Sinusoid => "sinusoid",
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            WaveformChoice::Chirp => 0,
            WaveformChoice::Sinusoid => 1,
        }
    }
}

/// How received-power weighting enters ML detection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// Plain coherent ML.
    Off,
    /// Weights scale the observation only; the model term is unweighted.
    ObservationOnly,
    /// Weights scale both the observation and the model term.
    #[default]
    Symmetric,
}

/// Grid for the ambiguity report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AmbiguityGrid {
    /// Sweep duration of the short pulse analysed, seconds.
    pub sweep_duration_s: f64,
    pub delay_points: usize,
    pub doppler_points: usize,
    /// Half-width of the delay axis; the pulse duration when absent.
    pub max_delay_s: Option<f64>,
    /// Half-width of the Doppler axis; ΔF for the chirp, 10/duration for the
    /// sinusoid when absent.
    pub max_doppler_hz: Option<f64>,
}

impl Default for AmbiguityGrid {
    fn default() -> Self {
        AmbiguityGrid { sweep_duration_s: 10e-6, delay_points: 101, doppler_points: 101, max_delay_s: None, max_doppler_hz: None }
    }
}

/// Declarative experiment description, read from a JSON document. Missing
/// fields take their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub fs_hz: f64,
    pub n_t: Vec<usize>,
    pub n_r: usize,
    pub snr_grid_db: Vec<f64>,
    pub k_factor_db: f64,
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    pub altitude_m: f64,
    pub elevation_deg: f64,
    pub shadow_sigma_db: f64,
    pub zenith_attenuation_db: f64,
    pub scintillation_db: f64,
    pub clutter_db: f64,
    pub sigma_r: f64,
    pub nakagami_m: f64,
    pub omega: f64,
    pub velocity_mps: f64,
    /// Carried for completeness; no model uses it.
    pub doppler_angle_deg: f64,
    pub range_m: [f64; 2],
    pub radial_velocity_mps: [f64; 2],
    pub sweep_duration_s: f64,
    pub p_fa: f64,
    pub trials: u64,
    pub sense_trials: u64,
    pub seed: u64,
    pub waveform: WaveformChoice,
    pub beat_method: BeatMethod,
    pub zero_pad_factor: usize,
    /// Dechirp gate in seconds; `4·R_max/c` for root-MUSIC and 0 for the
    /// FFT when absent.
    pub dechirp_gate_s: Option<f64>,
    /// Samples per communication symbol pulse.
    pub symbol_samples: usize,
    /// Tone frequency of the sinusoidal waveform.
    pub sinusoid_hz: f64,
    pub weighting: Weighting,
    pub ambiguity: AmbiguityGrid,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            fs_hz: 28.8e6,
            n_t: vec![4, 8, 16, 32],
            n_r: 4,
            snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0],
            k_factor_db: 10.0,
            bandwidth_hz: 10e6,
            carrier_hz: 5e9,
            altitude_m: 780e3,
            elevation_deg: 60.0,
            shadow_sigma_db: 1.0,
            zenith_attenuation_db: 0.22,
            scintillation_db: 0.13,
            clutter_db: 0.0,
            sigma_r: 1.0,
            nakagami_m: 0.8,
            omega: 1.0,
            velocity_mps: 1e5,
            doppler_angle_deg: 30.0,
            range_m: [500e3, 2500e3],
            radial_velocity_mps: [7000.0, 8500.0],
            sweep_duration_s: 0.05,
            p_fa: 1e-3,
            trials: 100_000,
            sense_trials: 200,
            seed: 0,
            waveform: WaveformChoice::Chirp,
            beat_method: BeatMethod::Fft,
            zero_pad_factor: 1,
            dechirp_gate_s: None,
            symbol_samples: 32,
            sinusoid_hz: 1e6,
            weighting: Weighting::Symmetric,
            ambiguity: AmbiguityGrid::default(),
        }
    }
}

fn check(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(msg.to_string()))
    }
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

impl ExperimentConfig {
    /// Reads and validates a JSON config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check(positive(self.fs_hz), "fs_hz must be positive")?;
        check(positive(self.bandwidth_hz) && self.bandwidth_hz < self.fs_hz, "bandwidth_hz must lie in (0, fs_hz)")?;
        check(!self.n_t.is_empty(), "n_t must list at least one antenna count")?;
        for &n in &self.n_t {
            check(n >= 2 && n.is_power_of_two() && n <= 1 << 31, "n_t entries must be powers of two >= 2")?;
        }
        check(self.n_r >= 1, "n_r must be at least 1")?;
        check(!self.snr_grid_db.is_empty() && self.snr_grid_db.len() <= 256, "snr_grid_db needs 1..=256 points")?;
        check(self.snr_grid_db.iter().all(|s| s.is_finite()), "snr_grid_db entries must be finite")?;
        check(self.k_factor_db.is_finite(), "k_factor_db must be finite")?;
        check(positive(self.carrier_hz), "carrier_hz must be positive")?;
        check(positive(self.altitude_m), "altitude_m must be positive")?;
        check(self.elevation_deg > 0.0 && self.elevation_deg <= 90.0, "elevation_deg must lie in (0, 90]")?;
        check(self.shadow_sigma_db.is_finite() && self.shadow_sigma_db >= 0.0, "shadow_sigma_db must be non-negative")?;
        for (v, name) in [
            (self.zenith_attenuation_db, "zenith_attenuation_db"),
            (self.scintillation_db, "scintillation_db"),
            (self.clutter_db, "clutter_db"),
            (self.velocity_mps, "velocity_mps"),
            (self.doppler_angle_deg, "doppler_angle_deg"),
        ] {
            check(v.is_finite(), &format!("{name} must be finite"))?;
        }
        check(self.sigma_r.is_finite() && self.sigma_r >= 0.0, "sigma_r must be non-negative")?;
        check(self.nakagami_m.is_finite() && self.nakagami_m >= 0.5, "nakagami_m must be >= 0.5")?;
        check(positive(self.omega), "omega must be positive")?;
        check(positive(self.range_m[0]) && self.range_m[0] <= self.range_m[1] && self.range_m[1].is_finite(), "range_m must be an ordered positive interval")?;
        let [v0, v1] = self.radial_velocity_mps;
        check(v0.is_finite() && v1.is_finite() && v0 <= v1, "radial_velocity_mps must be an ordered interval")?;
        check(v0 > 0.0 || v1 < 0.0, "radial_velocity_mps must exclude zero")?;
        check(positive(self.sweep_duration_s), "sweep_duration_s must be positive")?;
        check(self.max_delay_s() < self.sweep_duration_s, "sweep_duration_s must exceed the round-trip delay 4*R_max/c")?;
        check(self.p_fa > 0.0 && self.p_fa < 1.0, "p_fa must lie in (0, 1)")?;
        check(self.trials >= 1 && self.trials < 1 << 40, "trials out of range")?;
        check(self.sense_trials >= 1 && self.sense_trials < 1 << 40, "sense_trials out of range")?;
        check(self.zero_pad_factor >= 1, "zero_pad_factor must be at least 1")?;
        if let Some(g) = self.dechirp_gate_s {
            check(g.is_finite() && g >= 0.0 && g < self.sweep_duration_s, "dechirp_gate_s must lie in [0, sweep_duration_s)")?;
        }
        check(self.symbol_samples >= 4 && self.symbol_samples.is_multiple_of(2), "symbol_samples must be even and >= 4")?;
        check(self.sinusoid_hz.is_finite() && self.sinusoid_hz.abs() < 0.5 * self.fs_hz, "sinusoid_hz must be below fs_hz/2")?;
        let a = &self.ambiguity;
        check(positive(a.sweep_duration_s), "ambiguity.sweep_duration_s must be positive")?;
        check((a.sweep_duration_s * self.fs_hz).round() >= 4.0, "ambiguity pulse needs at least 4 samples per sweep")?;
        check(a.delay_points >= 1 && a.doppler_points >= 1, "ambiguity grid needs at least one point per axis")?;
        check(a.max_delay_s.is_none_or(|d| d.is_finite() && d >= 0.0), "ambiguity.max_delay_s must be non-negative")?;
        check(a.max_doppler_hz.is_none_or(|d| d.is_finite() && d >= 0.0), "ambiguity.max_doppler_hz must be non-negative")?;
        Ok(())
    }

    /// Largest round-trip delay `4·R_max/c` in the scene distribution.
    pub fn max_delay_s(&self) -> f64 {
        4.0 * self.range_m[1] / SPEED_OF_LIGHT
    }

    pub fn k_factor_linear(&self) -> f64 {
        10f64.powf(self.k_factor_db / 10.0)
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn geometry(&self) -> Result<LinkGeometry<f64>> {
        LinkGeometry::new(self.altitude_m, self.elevation_deg.to_radians(), self.carrier_hz, self.velocity_mps)
    }

    pub fn sense_config(&self) -> SenseConfig<f64> {
        let gate_s = self.dechirp_gate_s.unwrap_or(match self.beat_method {
            BeatMethod::Fft => 0.0,
            BeatMethod::Music => self.max_delay_s(),
        });
        SenseConfig { p_fa: self.p_fa, method: self.beat_method, zero_pad_factor: self.zero_pad_factor, gate_s }
    }

    /// Compact JSON form used for hashing and the metadata header.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// SHA-256 of [`Self::to_json`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// Writes the commented metadata block that heads every CSV output.
    pub fn write_metadata<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# ssk-isac {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(out, "# config_sha256: {}", self.hash())?;
        writeln!(out, "# seed: {}", self.seed)?;
        writeln!(out, "# n_r: {} (assumed receive antenna count; set n_r in the config to change it)", self.n_r)?;
        writeln!(out, "# config: {}", self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(ExperimentConfig::from_json("{}").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn json_round_trip() {
        let cfg = ExperimentConfig {
            n_t: vec![2],
            waveform: WaveformChoice::Sinusoid,
            beat_method: BeatMethod::Music,
            weighting: Weighting::ObservationOnly,
            ..ExperimentConfig::default()
        };
        assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn invalid_documents_are_config_errors() {
        for doc in [
            r#"{"n_t": [3]}"#,
            r#"{"n_t": []}"#,
            r#"{"sweep_duration_s": 0.02}"#,
            r#"{"p_fa": 1.5}"#,
            r#"{"bandwidth_hz": 40e6}"#,
            r#"{"unknown_field": 1}"#,
            r#"{"waveform": "square"}"#,
            r#"{"radial_velocity_mps": [-10, 10]}"#,
            "not json",
        ] {
            assert!(matches!(ExperimentConfig::from_json(doc), Err(Error::Config(_))), "{doc}");
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn metadata_carries_every_parameter() {
        let mut out = Vec::new();
        ExperimentConfig::default().write_metadata(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.lines().all(|l| l.starts_with('#')));
        for key in ["fs_hz", "k_factor_db", "altitude_m", "elevation_deg", "shadow_sigma_db", "nakagami_m", "doppler_angle_deg", "config_sha256", "seed: 0", "n_r: 4"] {
            assert!(text.contains(key), "{key}");
        }
    }

    #[test]
    fn gate_defaults_follow_method() {
        let mut cfg = ExperimentConfig::default();
        assert_eq!(cfg.sense_config().gate_s, 0.0);
        cfg.beat_method = BeatMethod::Music;
        assert!((cfg.sense_config().gate_s - 4.0 * 2500e3 / SPEED_OF_LIGHT).abs() < 1e-15);
    }
}
