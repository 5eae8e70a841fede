use std::io::Write;

use super::config::{ExperimentConfig, WaveformChoice};
use crate::channel::{total_path_loss, LinkReport};
use crate::error::Result;
use crate::numerics::{stream_id, RngStream};
use crate::waveforms::{ambiguity, gen_sinusoid, gen_triangle_lfm, AmbiguitySurface, SampledWaveform};

const TAG_LINK: u8 = 3;

/// Link budget, slant distance and Doppler for the configured geometry,
/// with one shadow-fading draw from the configured seed.
pub fn run_link_budget(cfg: &ExperimentConfig) -> Result<LinkReport> {
    cfg.validate()?;
    let geom = cfg.geometry()?;
    let mut rng = RngStream::new(cfg.seed, stream_id(TAG_LINK, 0, 0, 0));
    let budget = total_path_loss(&geom, cfg.zenith_attenuation_db, cfg.scintillation_db, cfg.shadow_sigma_db, cfg.clutter_db, &mut rng)?;
    Ok(LinkReport::new(&geom, &budget))
}

/// Short pulse analysed by the ambiguity report: a triangle LFM with the
/// configured sweep time, or a tone of the same total length.
pub fn ambiguity_pulse(cfg: &ExperimentConfig, waveform: WaveformChoice) -> Result<SampledWaveform<f64>> {
    let t = cfg.ambiguity.sweep_duration_s;
    match waveform {
        WaveformChoice::Chirp => gen_triangle_lfm(cfg.bandwidth_hz, t, cfg.fs_hz),
        WaveformChoice::Sinusoid => gen_sinusoid(cfg.sinusoid_hz, 1.0, 2.0 * t, cfg.fs_hz),
    }
}

fn axis(half_width: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    let step = 2.0 * half_width / (points - 1) as f64;
    (0..points).map(|i| if 2 * i + 1 == points { 0.0 } else { -half_width + step * i as f64 }).collect()
}

/// `|χ(τ, f_d)|²` of the configured waveform on the configured grid.
pub fn run_ambiguity(cfg: &ExperimentConfig) -> Result<AmbiguitySurface<f64>> {
    cfg.validate()?;
    let w = ambiguity_pulse(cfg, cfg.waveform)?;
    let g = &cfg.ambiguity;
    let max_delay = g.max_delay_s.unwrap_or(w.duration);
    let max_doppler = g.max_doppler_hz.unwrap_or(match cfg.waveform {
        WaveformChoice::Chirp => cfg.bandwidth_hz,
        WaveformChoice::Sinusoid => 10.0 / w.duration,
    });
    ambiguity(&w, &axis(max_delay, g.delay_points), &axis(max_doppler, g.doppler_points))
}

pub fn write_ambiguity_csv<W: Write>(surface: &AmbiguitySurface<f64>, cfg: &ExperimentConfig, mut out: W) -> Result<()> {
    cfg.write_metadata(&mut out)?;
    writeln!(out, "# waveform: {}", cfg.waveform.name())?;
    writeln!(out, "tau_s,fd_hz,chi2")?;
    for (i, tau) in surface.delays.iter().enumerate() {
        for (j, fd) in surface.dopplers.iter().enumerate() {
            writeln!(out, "{},{},{}", tau, fd, surface.value(i, j))?;
        }
    }
    Ok(())
}
