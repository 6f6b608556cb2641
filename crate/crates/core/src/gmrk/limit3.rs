// Generated by scripts/derive_third_order_limit.py. Do not edit by hand.
//
// Normalized units: x = s/h, y = s'/h, nodes at u < v, unit output scale.
// Multiply by h^7 to restore time units.

#![allow(clippy::all)]

/// Evaluates branch `(region_s, region_t)` with `region_t <= region_s`.
pub(super) fn branch(region_s: u8, region_t: u8, x: f64, y: f64, u: f64, v: f64) -> Option<f64> {
    let value = match (region_s, region_t) {
        (3, 3) => {
            ((1.0) / (144.0)) * x.powi(3) * y.powi(4)
            + ((-u.powi(2) - 4.0 * u * v - 7.0 * v.powi(2)) / (540.0 * v)) * x.powi(3) * y.powi(3)
            + ((u.powi(3) + 3.0 * u.powi(2) * v + 9.0 * u * v.powi(2) + 5.0 * v.powi(3)) / (720.0 * v)) * x.powi(3) * y.powi(2)
            + ((-u.powi(3) - u.powi(2) * v - u * v.powi(2) - v.powi(3)) / (360.0)) * x.powi(3) * y
            + (((1.0 / 2160.0) * u.powi(4) + (1.0 / 2160.0) * u.powi(3) * v + (1.0 / 2160.0) * u.powi(2) * v.powi(2) + (1.0 / 2160.0) * u * v.powi(3) + (1.0 / 2160.0) * v.powi(4))) * x.powi(3)
            + ((-1.0) / (240.0)) * x.powi(2) * y.powi(5)
            + ((u.powi(3) + 3.0 * u.powi(2) * v + 9.0 * u * v.powi(2) + 5.0 * v.powi(3)) / (720.0 * v)) * x.powi(2) * y.powi(3)
            + ((-u.powi(3) - 2.0 * u.powi(2) * v - 5.0 * u * v.powi(2)) / (240.0)) * x.powi(2) * y.powi(2)
            + ((u.powi(3) * v + u.powi(2) * v.powi(2) + u * v.powi(3)) / (240.0)) * x.powi(2) * y
            + ((-u.powi(4) * v - u.powi(3) * v.powi(2) - u.powi(2) * v.powi(3) - u * v.powi(4)) / (1440.0)) * x.powi(2)
            + ((1.0) / (720.0)) * x * y.powi(6)
            + ((-u.powi(3) - u.powi(2) * v - u * v.powi(2) - v.powi(3)) / (360.0)) * x * y.powi(3)
            + ((u.powi(3) * v + u.powi(2) * v.powi(2) + u * v.powi(3)) / (240.0)) * x * y.powi(2)
            + ((-1.0) / (5040.0)) * y.powi(7)
            + (((1.0 / 2160.0) * u.powi(4) + (1.0 / 2160.0) * u.powi(3) * v + (1.0 / 2160.0) * u.powi(2) * v.powi(2) + (1.0 / 2160.0) * u * v.powi(3) + (1.0 / 2160.0) * v.powi(4))) * y.powi(3)
            + ((-u.powi(4) * v - u.powi(3) * v.powi(2) - u.powi(2) * v.powi(3) - u * v.powi(4)) / (1440.0)) * y.powi(2)
        }
        (3, 2) => {
            ((1.0) / (2160.0 * u * v - 2160.0 * v.powi(2))) * x.powi(3) * y.powi(6)
            + ((-1.0) / (360.0 * u - 360.0 * v)) * x.powi(3) * y.powi(5)
            + ((u) / (144.0 * u - 144.0 * v)) * x.powi(3) * y.powi(4)
            + ((-u.powi(3) - 3.0 * u.powi(2) * v - 3.0 * u * v.powi(2) + 2.0 * v.powi(3)) / (540.0 * u * v - 540.0 * v.powi(2))) * x.powi(3) * y.powi(3)
            + ((u.powi(4) + 2.0 * u.powi(3) * v + 6.0 * u.powi(2) * v.powi(2) - 4.0 * u * v.powi(3)) / (720.0 * u * v - 720.0 * v.powi(2))) * x.powi(3) * y.powi(2)
            + ((-u.powi(4)) / (360.0 * u - 360.0 * v)) * x.powi(3) * y
            + ((u.powi(5)) / (2160.0 * u - 2160.0 * v)) * x.powi(3)
            + ((-u) / (1440.0 * u * v - 1440.0 * v.powi(2))) * x.powi(2) * y.powi(6)
            + ((v) / (240.0 * u - 240.0 * v)) * x.powi(2) * y.powi(5)
            + ((-u * v) / (96.0 * u - 96.0 * v)) * x.powi(2) * y.powi(4)
            + ((u.powi(4) + 2.0 * u.powi(3) * v + 6.0 * u.powi(2) * v.powi(2) + 6.0 * u * v.powi(3) - 5.0 * v.powi(4)) / (720.0 * u * v - 720.0 * v.powi(2))) * x.powi(2) * y.powi(3)
            + ((-2.0 * u.powi(4) - 2.0 * u.powi(3) * v - 6.0 * u.powi(2) * v.powi(2) + 5.0 * u * v.powi(3)) / (480.0 * u - 480.0 * v)) * x.powi(2) * y.powi(2)
            + ((u.powi(4) * v) / (240.0 * u - 240.0 * v)) * x.powi(2) * y
            + ((-u.powi(5) * v) / (1440.0 * u - 1440.0 * v)) * x.powi(2)
            + ((1.0) / (720.0)) * x * y.powi(6)
            + ((-u.powi(3) - u.powi(2) * v - u * v.powi(2) - v.powi(3)) / (360.0)) * x * y.powi(3)
            + ((u.powi(3) * v + u.powi(2) * v.powi(2) + u * v.powi(3)) / (240.0)) * x * y.powi(2)
            + ((-1.0) / (5040.0)) * y.powi(7)
            + (((1.0 / 2160.0) * u.powi(4) + (1.0 / 2160.0) * u.powi(3) * v + (1.0 / 2160.0) * u.powi(2) * v.powi(2) + (1.0 / 2160.0) * u * v.powi(3) + (1.0 / 2160.0) * v.powi(4))) * y.powi(3)
            + ((-u.powi(4) * v - u.powi(3) * v.powi(2) - u.powi(2) * v.powi(3) - u * v.powi(4)) / (1440.0)) * y.powi(2)
        }
        (3, 1) => {
            ((1.0) / (2160.0 * u * v)) * x.powi(3) * y.powi(6)
            + ((-u.powi(2) + u * v - 2.0 * v.powi(2)) / (540.0 * v)) * x.powi(3) * y.powi(3)
            + ((u.powi(3) - 2.0 * u.powi(2) * v + 4.0 * u * v.powi(2)) / (720.0 * v)) * x.powi(3) * y.powi(2)
            + ((-u - v) / (1440.0 * u * v)) * x.powi(2) * y.powi(6)
            + ((u.powi(3) + 3.0 * u.powi(2) * v - u * v.powi(2) + 5.0 * v.powi(3)) / (720.0 * v)) * x.powi(2) * y.powi(3)
            + ((-2.0 * u.powi(3) + u.powi(2) * v - 5.0 * u * v.powi(2)) / (480.0)) * x.powi(2) * y.powi(2)
            + ((1.0) / (720.0)) * x * y.powi(6)
            + ((-u.powi(3) - u.powi(2) * v - u * v.powi(2) - v.powi(3)) / (360.0)) * x * y.powi(3)
            + ((u.powi(3) * v + u.powi(2) * v.powi(2) + u * v.powi(3)) / (240.0)) * x * y.powi(2)
            + ((-1.0) / (5040.0)) * y.powi(7)
            + (((1.0 / 2160.0) * u.powi(4) + (1.0 / 2160.0) * u.powi(3) * v + (1.0 / 2160.0) * u.powi(2) * v.powi(2) + (1.0 / 2160.0) * u * v.powi(3) + (1.0 / 2160.0) * v.powi(4))) * y.powi(3)
            + ((-u.powi(4) * v - u.powi(3) * v.powi(2) - u.powi(2) * v.powi(3) - u * v.powi(4)) / (1440.0)) * y.powi(2)
        }
        (3, 0) => {
            ((-u.powi(2) + u * v - 2.0 * v.powi(2)) / (540.0 * v)) * x.powi(3) * y.powi(3)
            + ((u.powi(3) - 2.0 * u.powi(2) * v + 4.0 * u * v.powi(2)) / (720.0 * v)) * x.powi(3) * y.powi(2)
            + ((u.powi(3) + 3.0 * u.powi(2) * v - u * v.powi(2) + 5.0 * v.powi(3)) / (720.0 * v)) * x.powi(2) * y.powi(3)
            + ((-2.0 * u.powi(3) + u.powi(2) * v - 5.0 * u * v.powi(2)) / (480.0)) * x.powi(2) * y.powi(2)
            + ((-u.powi(3) - u.powi(2) * v - u * v.powi(2) - v.powi(3)) / (360.0)) * x * y.powi(3)
            + ((u.powi(3) * v + u.powi(2) * v.powi(2) + u * v.powi(3)) / (240.0)) * x * y.powi(2)
            + (((1.0 / 2160.0) * u.powi(4) + (1.0 / 2160.0) * u.powi(3) * v + (1.0 / 2160.0) * u.powi(2) * v.powi(2) + (1.0 / 2160.0) * u * v.powi(3) + (1.0 / 2160.0) * v.powi(4))) * y.powi(3)
            + ((-u.powi(4) * v - u.powi(3) * v.powi(2) - u.powi(2) * v.powi(3) - u * v.powi(4)) / (1440.0)) * y.powi(2)
        }
        (2, 2) => {
            ((1.0) / (2160.0 * u * v - 2160.0 * v.powi(2))) * x.powi(6) * y.powi(3)
            + ((-u) / (1440.0 * u * v - 1440.0 * v.powi(2))) * x.powi(6) * y.powi(2)
            + ((-1.0) / (360.0 * u - 360.0 * v)) * x.powi(5) * y.powi(3)
            + ((u) / (240.0 * u - 240.0 * v)) * x.powi(5) * y.powi(2)
            + ((v) / (144.0 * u - 144.0 * v)) * x.powi(4) * y.powi(3)
            + ((-u * v) / (96.0 * u - 96.0 * v)) * x.powi(4) * y.powi(2)
            + ((1.0) / (2160.0 * u * v - 2160.0 * v.powi(2))) * x.powi(3) * y.powi(6)
            + ((-1.0) / (360.0 * u - 360.0 * v)) * x.powi(3) * y.powi(5)
            + ((u) / (144.0 * u - 144.0 * v)) * x.powi(3) * y.powi(4)
            + ((-u.powi(3) - 3.0 * u.powi(2) * v - 3.0 * u * v.powi(2) - 3.0 * v.powi(3)) / (540.0 * u * v - 540.0 * v.powi(2))) * x.powi(3) * y.powi(3)
            + ((u.powi(4) + 2.0 * u.powi(3) * v + 6.0 * u.powi(2) * v.powi(2) + 6.0 * u * v.powi(3)) / (720.0 * u * v - 720.0 * v.powi(2))) * x.powi(3) * y.powi(2)
            + ((-u.powi(4)) / (360.0 * u - 360.0 * v)) * x.powi(3) * y
            + ((u.powi(5)) / (2160.0 * u - 2160.0 * v)) * x.powi(3)
            + ((-u) / (1440.0 * u * v - 1440.0 * v.powi(2))) * x.powi(2) * y.powi(6)
            + ((v) / (240.0 * u - 240.0 * v)) * x.powi(2) * y.powi(5)
            + ((-u * v) / (96.0 * u - 96.0 * v)) * x.powi(2) * y.powi(4)
            + ((u.powi(4) + 2.0 * u.powi(3) * v + 6.0 * u.powi(2) * v.powi(2) + 6.0 * u * v.powi(3)) / (720.0 * u * v - 720.0 * v.powi(2))) * x.powi(2) * y.powi(3)
            + ((-u.powi(4) - u.powi(3) * v - 3.0 * u.powi(2) * v.powi(2)) / (240.0 * u - 240.0 * v)) * x.powi(2) * y.powi(2)
            + ((u.powi(4) * v) / (240.0 * u - 240.0 * v)) * x.powi(2) * y
            + ((-u.powi(5) * v) / (1440.0 * u - 1440.0 * v)) * x.powi(2)
            + ((1.0) / (720.0)) * x * y.powi(6)
            + ((-u.powi(4)) / (360.0 * u - 360.0 * v)) * x * y.powi(3)
            + ((u.powi(4) * v) / (240.0 * u - 240.0 * v)) * x * y.powi(2)
            + ((-1.0) / (5040.0)) * y.powi(7)
            + ((u.powi(5)) / (2160.0 * u - 2160.0 * v)) * y.powi(3)
            + ((-u.powi(5) * v) / (1440.0 * u - 1440.0 * v)) * y.powi(2)
        }
        (2, 1) => {
            ((1.0) / (2160.0 * u * v - 2160.0 * v.powi(2))) * x.powi(6) * y.powi(3)
            + ((-u) / (1440.0 * u * v - 1440.0 * v.powi(2))) * x.powi(6) * y.powi(2)
            + ((-1.0) / (360.0 * u - 360.0 * v)) * x.powi(5) * y.powi(3)
            + ((u) / (240.0 * u - 240.0 * v)) * x.powi(5) * y.powi(2)
            + ((v) / (144.0 * u - 144.0 * v)) * x.powi(4) * y.powi(3)
            + ((-u * v) / (96.0 * u - 96.0 * v)) * x.powi(4) * y.powi(2)
            + ((1.0) / (2160.0 * u * v)) * x.powi(3) * y.powi(6)
            + ((-u.powi(3) + 2.0 * u.powi(2) * v - 3.0 * u * v.powi(2) - 3.0 * v.powi(3)) / (540.0 * u * v - 540.0 * v.powi(2))) * x.powi(3) * y.powi(3)
            + ((u.powi(4) - 3.0 * u.powi(3) * v + 6.0 * u.powi(2) * v.powi(2) + 6.0 * u * v.powi(3)) / (720.0 * u * v - 720.0 * v.powi(2))) * x.powi(3) * y.powi(2)
            + ((-u - v) / (1440.0 * u * v)) * x.powi(2) * y.powi(6)
            + ((u.powi(4) + 2.0 * u.powi(3) * v - 4.0 * u.powi(2) * v.powi(2) + 6.0 * u * v.powi(3)) / (720.0 * u * v - 720.0 * v.powi(2))) * x.powi(2) * y.powi(3)
            + ((-2.0 * u.powi(4) + 3.0 * u.powi(3) * v - 6.0 * u.powi(2) * v.powi(2)) / (480.0 * u - 480.0 * v)) * x.powi(2) * y.powi(2)
            + ((1.0) / (720.0)) * x * y.powi(6)
            + ((-u.powi(4)) / (360.0 * u - 360.0 * v)) * x * y.powi(3)
            + ((u.powi(4) * v) / (240.0 * u - 240.0 * v)) * x * y.powi(2)
            + ((-1.0) / (5040.0)) * y.powi(7)
            + ((u.powi(5)) / (2160.0 * u - 2160.0 * v)) * y.powi(3)
            + ((-u.powi(5) * v) / (1440.0 * u - 1440.0 * v)) * y.powi(2)
        }
        (2, 0) => {
            ((1.0) / (2160.0 * u * v - 2160.0 * v.powi(2))) * x.powi(6) * y.powi(3)
            + ((-u) / (1440.0 * u * v - 1440.0 * v.powi(2))) * x.powi(6) * y.powi(2)
            + ((-1.0) / (360.0 * u - 360.0 * v)) * x.powi(5) * y.powi(3)
            + ((u) / (240.0 * u - 240.0 * v)) * x.powi(5) * y.powi(2)
            + ((v) / (144.0 * u - 144.0 * v)) * x.powi(4) * y.powi(3)
            + ((-u * v) / (96.0 * u - 96.0 * v)) * x.powi(4) * y.powi(2)
            + ((-u.powi(3) + 2.0 * u.powi(2) * v - 3.0 * u * v.powi(2) - 3.0 * v.powi(3)) / (540.0 * u * v - 540.0 * v.powi(2))) * x.powi(3) * y.powi(3)
            + ((u.powi(4) - 3.0 * u.powi(3) * v + 6.0 * u.powi(2) * v.powi(2) + 6.0 * u * v.powi(3)) / (720.0 * u * v - 720.0 * v.powi(2))) * x.powi(3) * y.powi(2)
            + ((u.powi(4) + 2.0 * u.powi(3) * v - 4.0 * u.powi(2) * v.powi(2) + 6.0 * u * v.powi(3)) / (720.0 * u * v - 720.0 * v.powi(2))) * x.powi(2) * y.powi(3)
            + ((-2.0 * u.powi(4) + 3.0 * u.powi(3) * v - 6.0 * u.powi(2) * v.powi(2)) / (480.0 * u - 480.0 * v)) * x.powi(2) * y.powi(2)
            + ((-u.powi(4)) / (360.0 * u - 360.0 * v)) * x * y.powi(3)
            + ((u.powi(4) * v) / (240.0 * u - 240.0 * v)) * x * y.powi(2)
            + ((u.powi(5)) / (2160.0 * u - 2160.0 * v)) * y.powi(3)
            + ((-u.powi(5) * v) / (1440.0 * u - 1440.0 * v)) * y.powi(2)
        }
        (1, 1) => {
            ((1.0) / (2160.0 * u * v)) * x.powi(6) * y.powi(3)
            + ((-u - v) / (1440.0 * u * v)) * x.powi(6) * y.powi(2)
            + ((1.0) / (240.0)) * x.powi(5) * y.powi(2)
            + ((-1.0) / (144.0)) * x.powi(4) * y.powi(3)
            + ((1.0) / (2160.0 * u * v)) * x.powi(3) * y.powi(6)
            + ((-u.powi(2) + 6.0 * u * v + 3.0 * v.powi(2)) / (540.0 * v)) * x.powi(3) * y.powi(3)
            + ((u.powi(3) - 2.0 * u.powi(2) * v - 6.0 * u * v.powi(2)) / (720.0 * v)) * x.powi(3) * y.powi(2)
            + ((-u - v) / (1440.0 * u * v)) * x.powi(2) * y.powi(6)
            + ((u.powi(3) - 2.0 * u.powi(2) * v - 6.0 * u * v.powi(2)) / (720.0 * v)) * x.powi(2) * y.powi(3)
            + ((-u.powi(3) + 3.0 * u.powi(2) * v) / (240.0)) * x.powi(2) * y.powi(2)
            + ((1.0) / (720.0)) * x * y.powi(6)
            + ((-1.0) / (5040.0)) * y.powi(7)
        }
        (1, 0) => {
            ((1.0) / (2160.0 * u * v)) * x.powi(6) * y.powi(3)
            + ((-u - v) / (1440.0 * u * v)) * x.powi(6) * y.powi(2)
            + ((1.0) / (240.0)) * x.powi(5) * y.powi(2)
            + ((-1.0) / (144.0)) * x.powi(4) * y.powi(3)
            + ((-u.powi(2) + 6.0 * u * v + 3.0 * v.powi(2)) / (540.0 * v)) * x.powi(3) * y.powi(3)
            + ((u.powi(3) - 2.0 * u.powi(2) * v - 6.0 * u * v.powi(2)) / (720.0 * v)) * x.powi(3) * y.powi(2)
            + ((u.powi(3) - 2.0 * u.powi(2) * v - 6.0 * u * v.powi(2)) / (720.0 * v)) * x.powi(2) * y.powi(3)
            + ((-u.powi(3) + 3.0 * u.powi(2) * v) / (240.0)) * x.powi(2) * y.powi(2)
        }
        (0, 0) => {
            ((1.0) / (5040.0)) * x.powi(7)
            + ((-1.0) / (720.0)) * x.powi(6) * y
            + ((1.0) / (240.0)) * x.powi(5) * y.powi(2)
            + ((-1.0) / (144.0)) * x.powi(4) * y.powi(3)
            + ((-u.powi(2) + 6.0 * u * v + 3.0 * v.powi(2)) / (540.0 * v)) * x.powi(3) * y.powi(3)
            + ((u.powi(3) - 2.0 * u.powi(2) * v - 6.0 * u * v.powi(2)) / (720.0 * v)) * x.powi(3) * y.powi(2)
            + ((u.powi(3) - 2.0 * u.powi(2) * v - 6.0 * u * v.powi(2)) / (720.0 * v)) * x.powi(2) * y.powi(3)
            + ((-u.powi(3) + 3.0 * u.powi(2) * v) / (240.0)) * x.powi(2) * y.powi(2)
        }
        _ => return None,
    };
    Some(value)
}
