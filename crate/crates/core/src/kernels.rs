//! Covariance functions and their first-order cross-derivatives.
//!
//! `kd(t, t')` is the derivative in the second argument, `dk(t, t')` in the
//! first, `dkd(t, t')` in both.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::scalar::Real;

/// Covariance of a scalar process together with its derivative process.
pub trait Covariance<T: Real> {
    fn k(&self, t: &T, t2: &T) -> Result<T>;
    fn kd(&self, t: &T, t2: &T) -> Result<T>;
    fn dk(&self, t: &T, t2: &T) -> Result<T>;
    fn dkd(&self, t: &T, t2: &T) -> Result<T>;

    /// Covariance between `x` or `x'` at `t` and `x` or `x'` at `t2`.
    fn cross(&self, t: &T, deriv_t: bool, t2: &T, deriv_t2: bool) -> Result<T> {
        match (deriv_t, deriv_t2) {
            (false, false) => self.k(t, t2),
            (false, true) => self.kd(t, t2),
            (true, false) => self.dk(t, t2),
            (true, true) => self.dkd(t, t2),
        }
    }
}

/// `q`-times integrated Wiener process started at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratedWiener<T: Real> {
    pub q: u8,
    pub sigma2: T,
}

impl<T: Real> IntegratedWiener<T> {
    pub fn new(q: u8, sigma2: T) -> Result<Self> {
        if q > 3 {
            return domain(format!("integrated Wiener order q = {q} is outside 0..=3"));
        }
        if sigma2 <= T::zero() {
            return domain("sigma2 must be positive");
        }
        Ok(Self { q, sigma2 })
    }

    fn check(&self, t: &T, t2: &T) -> Result<()> {
        if *t <= T::zero() || *t2 <= T::zero() {
            return domain(format!(
                "integrated Wiener kernel needs positive inputs, got ({}, {})",
                t.to_f64_lossy(),
                t2.to_f64_lossy()
            ));
        }
        Ok(())
    }

    fn check_smooth(&self) -> Result<()> {
        if self.q == 0 {
            return domain("the q = 0 Wiener process has no derivative");
        }
        Ok(())
    }
}

/// Unit-scale `k^q(t, t')`; inputs must be positive.
pub fn wiener_k<T: Real>(q: u8, t: &T, t2: &T) -> T {
    // t <= t' branch covers ties.
    let (m, big) = if t <= t2 { (t.clone(), t2.clone()) } else { (t2.clone(), t.clone()) };
    let d = big.clone() - m.clone();
    match q {
        0 => m,
        1 => m.powi(3) / T::int(3) + d * m.powi(2) / T::int(2),
        2 => {
            m.powi(5) / T::int(20)
                + d / T::int(12) * ((t.clone() + t2.clone()) * m.powi(3) - m.powi(4) / T::int(2))
        }
        3 => {
            m.powi(7) / T::int(252)
                + d * m.powi(4) / T::int(720)
                    * (T::int(5) * big.powi(2) + T::int(2) * t.clone() * t2.clone() + T::int(3) * m.powi(2))
        }
        _ => panic!("wiener_k: q = {q} unsupported"),
    }
}

/// Unit-scale `d k^q(t, t') / d t'` for `q >= 1`.
pub fn wiener_kd<T: Real>(q: u8, t: &T, t2: &T) -> T {
    let (t, s) = (t.clone(), t2.clone());
    let le = t <= s;
    match q {
        1 => {
            if le {
                t.powi(2) / T::int(2)
            } else {
                t * s.clone() - s.powi(2) / T::int(2)
            }
        }
        2 => {
            if le {
                -t.powi(4) / T::int(24) + s * t.powi(3) / T::int(6)
            } else {
                s.powi(2) / T::int(24) * (s.powi(2) - T::int(4) * t.clone() * s.clone() + T::int(6) * t.powi(2))
            }
        }
        3 => {
            if le {
                t.powi(4) / T::int(720)
                    * (T::int(15) * s.powi(2) - T::int(6) * t.clone() * s + t.powi(2))
            } else {
                s.powi(3) / T::int(720)
                    * (T::int(20) * t.powi(3) - T::int(15) * t.powi(2) * s.clone()
                        + T::int(6) * t * s.powi(2)
                        - s.powi(3))
            }
        }
        _ => panic!("wiener_kd: q = {q} unsupported"),
    }
}

impl<T: Real> Covariance<T> for IntegratedWiener<T> {
    fn k(&self, t: &T, t2: &T) -> Result<T> {
        self.check(t, t2)?;
        Ok(self.sigma2.clone() * wiener_k(self.q, t, t2))
    }

    fn kd(&self, t: &T, t2: &T) -> Result<T> {
        self.check(t, t2)?;
        self.check_smooth()?;
        Ok(self.sigma2.clone() * wiener_kd(self.q, t, t2))
    }

    fn dk(&self, t: &T, t2: &T) -> Result<T> {
        self.check(t, t2)?;
        self.check_smooth()?;
        Ok(self.sigma2.clone() * wiener_kd(self.q, t2, t))
    }

    fn dkd(&self, t: &T, t2: &T) -> Result<T> {
        self.check(t, t2)?;
        self.check_smooth()?;
        Ok(self.sigma2.clone() * wiener_k(self.q - 1, t, t2))
    }
}

/// Scalar profile `k(r)` of a stationary kernel in `r = (t - t')^2 / h^2`.
pub trait StationaryProfile {
    fn value(&self, r: f64) -> f64;
    fn d1(&self, r: f64) -> f64;
    fn d2(&self, r: f64) -> f64;
}

/// `(k, kd, dkd)` of a stationary kernel via the chain rule through `r`.
pub fn stationary_derivatives<P: StationaryProfile + ?Sized>(
    profile: &P,
    h: f64,
    t: f64,
    t2: f64,
) -> (f64, f64, f64) {
    let diff = t - t2;
    let h2 = h * h;
    let r = diff * diff / h2;
    let d1 = profile.d1(r);
    let k = profile.value(r);
    let kd = d1 * (-2.0 * diff / h2);
    let dkd = -4.0 * diff * diff / (h2 * h2) * profile.d2(r) - 2.0 / h2 * d1;
    (k, kd, dkd)
}

/// Square-exponential kernel `theta2 * exp(-(t - t')^2 / (2 lambda^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareExponential {
    pub theta2: f64,
    pub lengthscale: f64,
}

impl SquareExponential {
    pub fn new(theta2: f64, lengthscale: f64) -> Result<Self> {
        if !(theta2 > 0.0 && theta2.is_finite()) {
            return domain("theta2 must be positive and finite");
        }
        if !(lengthscale > 0.0 && lengthscale.is_finite()) {
            return domain("lengthscale must be positive and finite");
        }
        Ok(Self { theta2, lengthscale })
    }

    /// Profile in `r` for a step size `h`.
    pub fn profile(&self, h: f64) -> SquareExponentialProfile {
        SquareExponentialProfile { theta2: self.theta2, a: h * h / (2.0 * self.lengthscale * self.lengthscale) }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SquareExponentialProfile {
    theta2: f64,
    a: f64,
}

impl StationaryProfile for SquareExponentialProfile {
    fn value(&self, r: f64) -> f64 {
        self.theta2 * (-self.a * r).exp()
    }
    fn d1(&self, r: f64) -> f64 {
        -self.a * self.value(r)
    }
    fn d2(&self, r: f64) -> f64 {
        self.a * self.a * self.value(r)
    }
}

impl Covariance<f64> for SquareExponential {
    fn k(&self, t: &f64, t2: &f64) -> Result<f64> {
        let d = t - t2;
        Ok(self.theta2 * (-d * d / (2.0 * self.lengthscale * self.lengthscale)).exp())
    }
    fn kd(&self, t: &f64, t2: &f64) -> Result<f64> {
        let l2 = self.lengthscale * self.lengthscale;
        Ok((t - t2) / l2 * self.k(t, t2)?)
    }
    fn dk(&self, t: &f64, t2: &f64) -> Result<f64> {
        self.kd(t2, t)
    }
    fn dkd(&self, t: &f64, t2: &f64) -> Result<f64> {
        let l2 = self.lengthscale * self.lengthscale;
        let u = (t - t2) / l2;
        Ok((1.0 / l2 - u * u) * self.k(t, t2)?)
    }
}

/// Serializable kernel description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelFamily {
    /// `tau` is the offset the caller subtracts to obtain shifted inputs.
    IntegratedWiener { q: u8, tau: f64 },
    SquareExponential { lengthscale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelModel {
    pub family: KernelFamily,
    pub sigma2: f64,
}

impl KernelModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return domain("sigma2 must be positive and finite");
        }
        match self.family {
            KernelFamily::IntegratedWiener { q, tau } => {
                if q > 3 {
                    return domain(format!("q = {q} is outside 0..=3"));
                }
                if !(tau > 0.0 && tau.is_finite()) {
                    return domain("tau must be positive and finite");
                }
            }
            KernelFamily::SquareExponential { lengthscale } => {
                SquareExponential::new(self.sigma2, lengthscale)?;
            }
        }
        Ok(())
    }

    /// Covariance between `x`/`x'` at `t` and `x`/`x'` at `t2`; Wiener inputs are shifted times.
    pub fn cross(&self, t: f64, deriv_t: bool, t2: f64, deriv_t2: bool) -> Result<f64> {
        self.validate()?;
        match self.family {
            KernelFamily::IntegratedWiener { q, .. } => {
                IntegratedWiener::new(q, self.sigma2)?.cross(&t, deriv_t, &t2, deriv_t2)
            }
            KernelFamily::SquareExponential { lengthscale } => {
                SquareExponential::new(self.sigma2, lengthscale)?.cross(&t, deriv_t, &t2, deriv_t2)
            }
        }
    }
}
