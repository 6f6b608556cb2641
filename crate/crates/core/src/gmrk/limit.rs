//! Closed-form posterior under the infinitely early process origin.
//!
//! Offsets `s` are measured from the step start. Covariances are per unit
//! output scale.

use super::{limit3, Method};
use crate::error::{domain, Error, Result};

/// Weights of the limit posterior mean over `[x0, y_1, .., y_count]` at offset `s`.
pub fn mean_weights(method: &Method, count: usize, h: f64, s: f64) -> Result<Vec<f64>> {
    let p = method.order();
    if count > p {
        return domain(format!("{count} gradients observed but the method has {p} stages"));
    }
    Ok(match count {
        0 => vec![1.0],
        1 => vec![1.0, s],
        2 => {
            let c = match *method {
                Method::SecondOrder { alpha } => alpha,
                Method::ThirdOrder { u, .. } => u,
                Method::Euler => unreachable!("count checked against order"),
            };
            let w2 = s * s / (2.0 * h * c);
            vec![1.0, s - w2, w2]
        }
        _ => {
            let Method::ThirdOrder { u, v } = *method else { unreachable!("count checked against order") };
            let h2 = h * h;
            let w1 = s - (h * (u + v) * s * s / 2.0 - s * s * s / 3.0) / (h2 * u * v);
            let w2 = s * s * (2.0 * s - 3.0 * h * v) / (6.0 * h2 * u * (u - v));
            let w3 = -s * s * (2.0 * s - 3.0 * h * u) / (6.0 * h2 * v * (u - v));
            vec![1.0, w1, w2, w3]
        }
    })
}

/// Limit posterior mean after observing `x0` and the gradients `ys`.
pub fn posterior_mean(method: &Method, h: f64, x0: f64, ys: &[f64], s: f64) -> Result<f64> {
    let w = mean_weights(method, ys.len(), h, s)?;
    Ok(w[0] * x0 + ys.iter().zip(&w[1..]).map(|(y, w)| y * w).sum::<f64>())
}

/// The constant `p`-th derivative of the final mean, squared.
pub fn calibrate_sigma2(method: &Method, h: f64, ys: &[f64]) -> Result<f64> {
    let p = method.order();
    if ys.len() != p {
        return domain(format!("expected {p} gradients, got {}", ys.len()));
    }
    let d = match *method {
        Method::Euler => ys[0],
        Method::SecondOrder { alpha } => (ys[1] - ys[0]) / (h * alpha),
        Method::ThirdOrder { u, v } => {
            2.0 / (h * h) * (ys[0] / (u * v) + ys[1] / (u * (u - v)) - ys[2] / (v * (u - v)))
        }
    };
    Ok(d * d)
}

fn wiener1(a: f64, b: f64) -> f64 {
    let (m, big) = if a <= b { (a, b) } else { (b, a) };
    m * m * m / 3.0 + (big - m) * m * m / 2.0
}

/// Unit covariance of the final limit posterior at offsets `s`, `s2`.
///
/// Returns `None` when the closed forms do not apply (nodes not strictly
/// positive); callers fall back to the bordered system.
pub fn posterior_cov(method: &Method, h: f64, s: f64, s2: f64) -> Result<Option<f64>> {
    let (s, s2) = if s2 <= s { (s, s2) } else { (s2, s) };
    let val = match *method {
        Method::Euler => {
            if s2 > 0.0 {
                wiener1(s, s2)
            } else if s <= 0.0 {
                wiener1(-s, -s2)
            } else {
                0.0
            }
        }
        Method::SecondOrder { alpha } => {
            let a = h * alpha;
            if !(a > 0.0) {
                return Ok(None);
            }
            second_order_cov(a, s, s2)
        }
        Method::ThirdOrder { u, v } => {
            let (u, v) = if u <= v { (u, v) } else { (v, u) };
            if !(u > 0.0) {
                return Ok(None);
            }
            let region = |z: f64| -> u8 {
                if z <= 0.0 {
                    0
                } else if z <= u {
                    1
                } else if z <= v {
                    2
                } else {
                    3
                }
            };
            let (x, y) = (s / h, s2 / h);
            let val = limit3::branch(region(x), region(y), x, y, u, v).ok_or(Error::Branch { s, s2 })?;
            val * h.powi(7)
        }
    };
    if !val.is_finite() {
        return Err(Error::Branch { s, s2 });
    }
    Ok(Some(val))
}

/// Six-branch covariance of the second-order family, `s2 <= s`, `a = h alpha > 0`.
fn second_order_cov(a: f64, s: f64, s2: f64) -> f64 {
    let (a2, a3, a4) = (a * a, a * a * a, a * a * a * a);
    let t = s2;
    if t > a {
        (t.powi(3) / 12.0 - a * t * t / 6.0 + a2 * t / 12.0 - a3 / 48.0) * s * s
            + (a2 * t * t / 12.0 - t.powi(4) / 24.0) * s
            + t.powi(5) / 120.0
            - a3 * t * t / 48.0
    } else if s > a && t > 0.0 {
        t * t * (20.0 * a3 * s - 10.0 * a * s * (a * s + t * t) + 2.0 * a * t.powi(3) + 5.0 * (s * s * t * t - a4))
            / (240.0 * a)
    } else if s > a {
        -a * t * t * (a2 - 4.0 * a * s + 2.0 * s * s) / 48.0
    } else if t > 0.0 {
        t * t * (20.0 * a * s * s * (a - s) - 10.0 * a * s * t * t + 2.0 * a * t.powi(3) + 5.0 * s * s * (s * s + t * t))
            / (240.0 * a)
    } else if s > 0.0 {
        s * s * t * t * (s - 2.0 * a).powi(2) / (48.0 * a)
    } else {
        -s * s * (s.powi(3) - 5.0 * s * s * t + 10.0 * s * t * t - 10.0 * a * t * t) / 120.0
    }
}
