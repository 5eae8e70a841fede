use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, WaveformChoice};
use crate::error::Result;
use crate::numerics::{stream_id, RngStream};
use crate::radar::{sense, BeatMethod, RadarScene};
use crate::waveforms::{gen_sinusoid, gen_triangle_lfm, SampledWaveform};

const TAG_SENSE: u8 = 2;

/// Outcome of one simulated scene.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneRecord {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub snr_db: f64,
    pub range_est_m: Option<f64>,
    pub velocity_est_mps: f64,
    pub detected: bool,
    pub range_acc: Option<f64>,
    pub vel_acc: f64,
    pub method: BeatMethod,
}

impl SceneRecord {
    pub const CSV_HEADER: &'static str = "range_m,velocity_mps,snr_db,range_est_m,velocity_est_mps,detected,range_acc,vel_acc,method";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.range_m,
            self.velocity_mps,
            self.snr_db,
            opt(self.range_est_m),
            self.velocity_est_mps,
            self.detected,
            opt(self.range_acc),
            self.vel_acc,
            self.method.name()
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyPoint {
    pub snr_db: f64,
    /// Mean range accuracy in percent; absent for the sinusoid.
    pub range_acc: Option<f64>,
    pub range_acc_std_err: Option<f64>,
    pub vel_acc: f64,
    pub vel_acc_std_err: f64,
    pub det_rate: f64,
    pub trials: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyCurve {
    pub waveform: WaveformChoice,
    pub method: BeatMethod,
    pub points: Vec<AccuracyPoint>,
    pub scenes: Vec<SceneRecord>,
}

impl AccuracyCurve {
    pub fn file_name(&self) -> String {
        format!("sense_{}.csv", self.waveform.name())
    }

    pub fn scenes_file_name(&self) -> String {
        format!("sense_{}_scenes.csv", self.waveform.name())
    }

    pub fn write_csv<W: Write>(&self, cfg: &ExperimentConfig, mut out: W) -> Result<()> {
        cfg.write_metadata(&mut out)?;
        writeln!(out, "# waveform: {}, method: {}", self.waveform.name(), self.method.name())?;
        writeln!(out, "snr_db,range_acc,vel_acc,det_rate")?;
        for p in &self.points {
            let r = p.range_acc.map(|x| x.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{}", p.snr_db, r, p.vel_acc, p.det_rate)?;
        }
        Ok(())
    }

    pub fn write_scenes_csv<W: Write>(&self, cfg: &ExperimentConfig, mut out: W) -> Result<()> {
        cfg.write_metadata(&mut out)?;
        writeln!(out, "{}", SceneRecord::CSV_HEADER)?;
        for s in &self.scenes {
            writeln!(out, "{}", s.csv_row())?;
        }
        Ok(())
    }
}

/// Sensing pulse: a triangle LFM with sweep time `T`, or a tone lasting `T`;
/// both carry unit energy.
pub fn radar_waveform(cfg: &ExperimentConfig, waveform: WaveformChoice) -> Result<SampledWaveform<f64>> {
    match waveform {
        WaveformChoice::Chirp => gen_triangle_lfm(cfg.bandwidth_hz, cfg.sweep_duration_s, cfg.fs_hz),
        WaveformChoice::Sinusoid => gen_sinusoid(cfg.sinusoid_hz, cfg.sweep_duration_s.recip().sqrt(), cfg.sweep_duration_s, cfg.fs_hz),
    }
}

fn mean_and_std_err(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `cfg.sense_trials` random scenes per SNR point for one waveform.
pub fn run_sensing_curve(cfg: &ExperimentConfig, waveform: WaveformChoice) -> Result<AccuracyCurve> {
    cfg.validate()?;
    let pulse = radar_waveform(cfg, waveform)?;
    let sense_cfg = cfg.sense_config();
    let wavelength = cfg.wavelength_m();
    let mut points = Vec::with_capacity(cfg.snr_grid_db.len());
    let mut scenes = Vec::new();
    for (p, &snr_db) in cfg.snr_grid_db.iter().enumerate() {
        let records: Vec<SceneRecord> = (0..cfg.sense_trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = RngStream::new(cfg.seed, stream_id(TAG_SENSE, waveform.index(), p, trial));
                let range_m = rng.random_range(cfg.range_m[0]..=cfg.range_m[1]);
                let velocity_mps = rng.random_range(cfg.radial_velocity_mps[0]..=cfg.radial_velocity_mps[1]);
                let scene = RadarScene::new(range_m, velocity_mps, snr_db, wavelength, &pulse)?;
                let est = sense(&scene, &sense_cfg, &mut rng)?;
                Ok(SceneRecord {
                    range_m,
                    velocity_mps,
                    snr_db,
                    range_est_m: est.range_m,
                    velocity_est_mps: est.velocity_mps,
                    detected: est.detected,
                    range_acc: est.range_accuracy_pct,
                    vel_acc: est.velocity_accuracy_pct,
                    method: sense_cfg.method,
                })
            })
            .collect::<Result<_>>()?;
        let vel: Vec<f64> = records.iter().map(|r| r.vel_acc).collect();
        let (vel_acc, vel_acc_std_err) = mean_and_std_err(&vel);
        let range: Option<Vec<f64>> = records.iter().map(|r| r.range_acc).collect();
        let range_stats = range.map(|r| mean_and_std_err(&r));
        let det_rate = records.iter().filter(|r| r.detected).count() as f64 / records.len() as f64;
        points.push(AccuracyPoint {
            snr_db,
            range_acc: range_stats.map(|s| s.0),
            range_acc_std_err: range_stats.map(|s| s.1),
            vel_acc,
            vel_acc_std_err,
            det_rate,
            trials: cfg.sense_trials,
        });
        scenes.extend(records);
    }
    Ok(AccuracyCurve { waveform, method: sense_cfg.method, points, scenes })
}

/// Accuracy curve for the configured waveform.
pub fn run_sensing_sweep(cfg: &ExperimentConfig) -> Result<Vec<AccuracyCurve>> {
    Ok(vec![run_sensing_curve(cfg, cfg.waveform)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(waveform: WaveformChoice) -> ExperimentConfig {
        ExperimentConfig {
            sweep_duration_s: 2e-3,
            range_m: [50e3, 100e3],
            snr_grid_db: vec![0.0, 20.0],
            sense_trials: 6,
            waveform,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn chirp_curve_has_both_accuracies() {
        let cfg = quick(WaveformChoice::Chirp);
        let curves = run_sensing_sweep(&cfg).unwrap();
        assert_eq!(curves.len(), 1);
        let c = &curves[0];
        assert_eq!(c.scenes.len(), 12);
        for p in &c.points {
            let r = p.range_acc.unwrap();
            assert!((0.0..=100.0).contains(&r) && (0.0..=100.0).contains(&p.vel_acc));
            assert!(p.vel_acc > 99.0 && r > 99.0);
            assert_eq!(p.det_rate, 1.0);
        }
    }

    #[test]
    fn sinusoid_curve_has_no_range() {
        let cfg = quick(WaveformChoice::Sinusoid);
        let c = run_sensing_curve(&cfg, WaveformChoice::Sinusoid).unwrap();
        assert!(c.points.iter().all(|p| p.range_acc.is_none() && p.vel_acc > 99.0));
        assert!(c.scenes.iter().all(|s| s.range_est_m.is_none()));
        let mut out = Vec::new();
        c.write_csv(&cfg, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let row = text.lines().find(|l| l.starts_with("20,")).unwrap();
        assert!(row.starts_with("20,,"), "{row}");
    }

    #[test]
    fn scenes_are_reproducible() {
        let cfg = ExperimentConfig { sense_trials: 3, ..quick(WaveformChoice::Chirp) };
        assert_eq!(run_sensing_curve(&cfg, WaveformChoice::Chirp).unwrap(), run_sensing_curve(&cfg, WaveformChoice::Chirp).unwrap());
    }

    #[test]
    fn scene_rows() {
        let cfg = ExperimentConfig { sense_trials: 2, snr_grid_db: vec![10.0], ..quick(WaveformChoice::Chirp) };
        let c = run_sensing_curve(&cfg, WaveformChoice::Chirp).unwrap();
        let mut out = Vec::new();
        c.write_scenes_csv(&cfg, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], SceneRecord::CSV_HEADER);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].split(',').count(), 9);
        assert!(rows[1].ends_with(",fft"));
    }

    #[test]
    fn mean_and_std_err_oracle() {
        let (m, se) = mean_and_std_err(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
