use std::f64::consts::FRAC_PI_2;

use super::CircuitError;

const AGM_MAX_ITER: usize = 40;

/// Complete elliptic integral of the first kind, `K(k)`, in the modulus
/// convention (`K(k) = ∫ dθ / √(1 − k² sin²θ)` over `[0, π/2]`).
///
/// Evaluated with the arithmetic–geometric mean `K(k) = π / (2·AGM(1, √(1−k²)))`,
/// which converges quadratically and reaches full double precision in a
/// handful of steps for any `k` not extremely close to 1.
pub fn elliptic_k(k: f64) -> Result<f64, CircuitError> {
    if !k.is_finite() || !(0.0..1.0).contains(&k) {
        return Err(CircuitError::EllipticDomain(k));
    }
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    // 1 − k² loses digits near k = 1; (1 − k)(1 + k) does not.
    let mut a = 1.0;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
    }
    Ok(FRAC_PI_2 / a)
}
