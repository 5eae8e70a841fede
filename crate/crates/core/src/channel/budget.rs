//! Deterministic large-scale link budget and Doppler for the LEO downlink.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

/// Mean Earth radius, m.
pub const EARTH_RADIUS_M: f64 = 6.371e6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkGeometry<T> {
    /// Satellite altitude h₀, m.
    pub altitude_m: T,
    /// Elevation angle θ_E, rad.
    pub elevation_rad: T,
    pub earth_radius_m: T,
    pub carrier_hz: T,
    /// Relative satellite/ground-station velocity, m/s.
    pub velocity_mps: T,
}

impl<T: Real> LinkGeometry<T> {
    pub fn new(altitude_m: T, elevation_rad: T, carrier_hz: T, velocity_mps: T) -> Result<Self> {
        let g = LinkGeometry {
            altitude_m,
            elevation_rad,
            earth_radius_m: T::lit(EARTH_RADIUS_M),
            carrier_hz,
            velocity_mps,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.altitude_m > T::zero()) {
            return Err(Error::domain("altitude must be positive"));
        }
        if !(self.elevation_rad > T::zero() && self.elevation_rad <= T::FRAC_PI_2() + T::epsilon()) {
            return Err(Error::domain("elevation must lie in (0, π/2]"));
        }
        if !(self.earth_radius_m > T::zero() && self.carrier_hz > T::zero()) {
            return Err(Error::domain("earth radius and carrier must be positive"));
        }
        Ok(())
    }

    /// Carrier wavelength c / f_c, m.
    pub fn wavelength(&self) -> T {
        T::lit(crate::SPEED_OF_LIGHT) / self.carrier_hz
    }
}

/// Large-scale losses, all in dB except `pl_sg_linear`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkBudget<T> {
    pub fspl_db: T,
    pub sf_db: T,
    pub cl_db: T,
    pub l_b_db: T,
    pub l_g_db: T,
    pub l_s_db: T,
    pub pl_sg_db: T,
    /// Power gain `10^(-pl_sg_db / 10)`.
    pub pl_sg_linear: T,
}

/// Slant range from ground station to satellite.
pub fn slant_distance<T: Real>(geom: &LinkGeometry<T>) -> T {
    let re = geom.earth_radius_m;
    let h = geom.altitude_m;
    let s = geom.elevation_rad.sin();
    (re * re * s * s + h * h + T::lit(2.0) * h * re).sqrt() - re * s
}

/// Free-space path loss with `d` in meters and `f_c` given in Hz (converted
/// to GHz internally).
pub fn fspl_db<T: Real>(distance_m: T, carrier_hz: T) -> Result<T> {
    if !(distance_m > T::zero() && carrier_hz > T::zero()) {
        return Err(Error::domain("distance and carrier must be positive"));
    }
    let ghz = carrier_hz / T::lit(1e9);
    Ok(T::lit(32.45) + T::lit(20.0) * ghz.log10() + T::lit(20.0) * distance_m.log10())
}

/// Gaseous attenuation `A_zenith / sin(θ_E)`.
pub fn gaseous_loss_db<T: Real>(zenith_db: T, elevation_rad: T) -> Result<T> {
    let s = elevation_rad.sin();
    if !(elevation_rad > T::zero()) || s.abs() <= T::epsilon() {
        return Err(Error::domain("gaseous loss is singular at zero elevation"));
    }
    if elevation_rad > T::FRAC_PI_2() + T::epsilon() {
        return Err(Error::domain("elevation must lie in (0, π/2]"));
    }
    Ok(zenith_db / s)
}

/// Assembles the full path loss with a fresh shadow-fading draw
/// `SF ~ N(0, σ_SF²)`.
pub fn total_path_loss<T: Real, R: Rng + ?Sized>(
    geom: &LinkGeometry<T>,
    zenith_db: T,
    scintillation_db: T,
    shadow_sigma_db: T,
    clutter_db: T,
    rng: &mut R,
) -> Result<LinkBudget<T>> {
    geom.validate()?;
    if shadow_sigma_db < T::zero() {
        return Err(Error::domain("shadow-fading sigma must be non-negative"));
    }
    let d = slant_distance(geom);
    let fspl = fspl_db(d, geom.carrier_hz)?;
    let sf = if shadow_sigma_db > T::zero() {
        shadow_sigma_db * T::standard_normal(rng)
    } else {
        T::zero()
    };
    let l_b = fspl + sf + clutter_db;
    let l_g = gaseous_loss_db(zenith_db, geom.elevation_rad)?;
    let pl = l_b + l_g + scintillation_db;
    Ok(LinkBudget {
        fspl_db: fspl,
        sf_db: sf,
        cl_db: clutter_db,
        l_b_db: l_b,
        l_g_db: l_g,
        l_s_db: scintillation_db,
        pl_sg_db: pl,
        pl_sg_linear: T::lit(10.0).powf(-pl / T::lit(10.0)),
    })
}

/// Downlink Doppler `(v/c)·(R_E/(R_E+h₀))·cos θ_E·f_c`.
pub fn doppler_shift<T: Real>(geom: &LinkGeometry<T>) -> T {
    let c = T::lit(crate::SPEED_OF_LIGHT);
    (geom.velocity_mps / c)
        * (geom.earth_radius_m / (geom.earth_radius_m + geom.altitude_m))
        * geom.elevation_rad.cos()
        * geom.carrier_hz
}

/// JSON link-budget report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub fspl_db: f64,
    pub l_g_db: f64,
    pub l_s_db: f64,
    pub sf_db: f64,
    pub cl_db: f64,
    pub pl_sg_db: f64,
    pub d_m: f64,
    pub f_d_hz: f64,
}

impl LinkReport {
    pub fn new<T: Real>(geom: &LinkGeometry<T>, budget: &LinkBudget<T>) -> Self {
        LinkReport {
            fspl_db: budget.fspl_db.to_f64_lossy(),
            l_g_db: budget.l_g_db.to_f64_lossy(),
            l_s_db: budget.l_s_db.to_f64_lossy(),
            sf_db: budget.sf_db.to_f64_lossy(),
            cl_db: budget.cl_db.to_f64_lossy(),
            pl_sg_db: budget.pl_sg_db.to_f64_lossy(),
            d_m: slant_distance(geom).to_f64_lossy(),
            f_d_hz: doppler_shift(geom).to_f64_lossy(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn table_geometry() -> LinkGeometry<f64> {
        LinkGeometry::new(780e3, 60f64.to_radians(), 5e9, 1e5).unwrap()
    }

    /// Solves (R+h)² = R² + d² + 2Rd·sinθ for d by bisection.
    fn slant_by_law_of_cosines(h: f64, theta: f64) -> f64 {
        let r = EARTH_RADIUS_M;
        let f = |d: f64| r * r + d * d + 2.0 * r * d * theta.sin() - (r + h) * (r + h);
        let (mut lo, mut hi) = (0.0, 1e8);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn slant_distance_examples() {
        assert!((slant_distance(&table_geometry()) - 884.85e3).abs() < 0.5e3);
        let zen = LinkGeometry::new(780e3, std::f64::consts::FRAC_PI_2, 5e9, 0.0).unwrap();
        assert!((slant_distance(&zen) - 780e3).abs() < 1e-6);
        let g = LinkGeometry::new(500e3, 30f64.to_radians(), 5e9, 0.0).unwrap();
        let oracle = slant_by_law_of_cosines(500e3, 30f64.to_radians());
        assert!((slant_distance(&g) - oracle).abs() < 1e-3);
    }

    #[test]
    fn slant_distance_decreases_with_elevation() {
        let mut prev = f64::INFINITY;
        for deg in 1..=90 {
            let g = LinkGeometry::new(780e3, (deg as f64).to_radians(), 5e9, 0.0).unwrap();
            let d = slant_distance(&g);
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn fspl_examples() {
        let l = fspl_db(884.85e3_f64, 5e9).unwrap();
        assert!((l - 165.4).abs() < 0.1, "{l}");
        let l2 = fspl_db(2.0 * 884.85e3, 5e9).unwrap();
        let l3 = fspl_db(884.85e3, 10e9).unwrap();
        let six = 20.0 * 2f64.log10();
        assert!((l2 - l - six).abs() < 1e-6);
        assert!((l3 - l - six).abs() < 1e-6);
        assert!(fspl_db(0.0, 5e9).is_err());
    }

    #[test]
    fn gaseous_examples() {
        assert!((gaseous_loss_db(0.22, std::f64::consts::FRAC_PI_2).unwrap() - 0.22).abs() < 1e-12);
        assert!((gaseous_loss_db(0.22, 60f64.to_radians()).unwrap() - 0.254).abs() < 1e-3);
        assert!((gaseous_loss_db(0.22, 30f64.to_radians()).unwrap() - 0.44).abs() < 1e-3);
        assert!(gaseous_loss_db(0.22, 0.0).is_err());
    }

    #[test]
    fn total_path_loss_without_shadowing() {
        let mut rng = RngStream::new(0, 0);
        let b = total_path_loss(&table_geometry(), 0.22, 0.13, 0.0, 0.0, &mut rng).unwrap();
        assert!((b.pl_sg_db - (165.4 + 0.254 + 0.13)).abs() < 0.2);
        assert_eq!(b.pl_sg_db, b.l_b_db + b.l_g_db + b.l_s_db);
        assert_eq!(b.l_b_db, b.fspl_db + b.sf_db + b.cl_db);
        assert!((b.pl_sg_linear - 10f64.powf(-b.pl_sg_db / 10.0)).abs() < 1e-30);
        let again = total_path_loss(&table_geometry(), 0.22, 0.13, 0.0, 0.0, &mut rng).unwrap();
        assert_eq!(b, again);
    }

    #[test]
    fn shadow_fading_spread() {
        let mut rng = RngStream::new(1, 0);
        let n = 10_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| total_path_loss(&table_geometry(), 0.22, 0.13, 1.0, 0.0, &mut rng).unwrap().pl_sg_db)
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var.sqrt() - 1.0).abs() < 0.05);
    }

    #[test]
    fn doppler_examples() {
        let f = doppler_shift(&table_geometry());
        assert!((f - 742.5e3).abs() < 1e3, "{f}");
        let zen = LinkGeometry::new(780e3, std::f64::consts::FRAC_PI_2, 5e9, 1e5).unwrap();
        assert!(doppler_shift(&zen).abs() < 1e-6);
        let still = LinkGeometry::new(780e3, 1.0, 5e9, 0.0).unwrap();
        assert_eq!(doppler_shift(&still), 0.0);
    }

    #[test]
    fn geometry_validation() {
        assert!(LinkGeometry::new(-1.0, 1.0, 5e9, 0.0).is_err());
        assert!(LinkGeometry::new(1.0, 0.0, 5e9, 0.0).is_err());
        assert!(LinkGeometry::new(1.0, 2.0, 5e9, 0.0).is_err());
    }

    #[test]
    fn report_keys() {
        let mut rng = RngStream::new(0, 0);
        let g = table_geometry();
        let b = total_path_loss(&g, 0.22, 0.13, 0.0, 0.0, &mut rng).unwrap();
        let v = serde_json::to_value(LinkReport::new(&g, &b)).unwrap();
        for key in ["fspl_db", "l_g_db", "l_s_db", "sf_db", "cl_db", "pl_sg_db", "d_m", "f_d_hz"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
