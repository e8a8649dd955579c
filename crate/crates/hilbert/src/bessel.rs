//! Spherical Bessel functions j_ℓ(x) of the first kind.
//!
//! Upward recurrence is unstable for x < ℓ, so small arguments are handled
//! by downward (Miller) recurrence normalized against j_0.

/// j_ℓ(x) for ℓ = 0..=ell_max.
pub fn spherical_jn(ell_max: u32, x: f64) -> Vec<f64> {
    let n = ell_max as usize;
    let mut j = vec![0.0; n + 1];
    if x == 0.0 {
        j[0] = 1.0;
        return j;
    }
    let ax = x.abs();
    j[0] = ax.sin() / ax;
    if n == 0 {
        return apply_parity(j, x);
    }
    if ax > n as f64 + 1.5 {
        // Upward recurrence is stable here.
        j[1] = ax.sin() / (ax * ax) - ax.cos() / ax;
        for l in 2..=n {
            j[l] = (2.0 * l as f64 - 1.0) / ax * j[l - 1] - j[l - 2];
        }
        return apply_parity(j, x);
    }
    // Miller's algorithm: run the recurrence down from a padded start order.
    let start = n + 16 + (ax as usize);
    let mut jp2 = 0.0_f64;
    let mut jp1 = 1e-300_f64;
    let mut out = vec![0.0; n + 1];
    for l in (0..start).rev() {
        let jl = (2.0 * l as f64 + 3.0) / ax * jp1 - jp2;
        jp2 = jp1;
        jp1 = jl;
        if l <= n {
            out[l] = jl;
        }
        // Rescale to avoid overflow.
        if jp1.abs() > 1e250 {
            jp1 *= 1e-250;
            jp2 *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let scale = j[0] / out[0];
    for (l, v) in out.iter().enumerate() {
        j[l] = v * scale;
    }
    apply_parity(j, x)
}

/// j_ℓ(−x) = (−1)^ℓ j_ℓ(x).
fn apply_parity(mut j: Vec<f64>, x: f64) -> Vec<f64> {
    if x < 0.0 {
        for (l, v) in j.iter_mut().enumerate() {
            if l % 2 == 1 {
                *v = -*v;
            }
        }
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_forms() {
        for &x in &[0.05_f64, 0.5, 2.0, 9.3, 40.0] {
            let j = spherical_jn(2, x);
            assert_relative_eq!(j[0], x.sin() / x, max_relative = 1e-12);
            assert_relative_eq!(j[1], x.sin() / (x * x) - x.cos() / x, max_relative = 1e-10);
            let j2 = (3.0 / (x * x * x) - 1.0 / x) * x.sin() - 3.0 / (x * x) * x.cos();
            assert_relative_eq!(j[2], j2, max_relative = 1e-9);
        }
    }

    #[test]
    fn small_argument_power_law() {
        // j_ℓ(x) ≈ x^ℓ / (2ℓ+1)!! for small x.
        let x = 1e-3;
        let j = spherical_jn(6, x);
        for l in 0..=6usize {
            let expect = x.powi(l as i32)
                / (1..=l).fold(1.0, |acc, k| acc * (2.0 * k as f64 + 1.0));
            assert_relative_eq!(j[l], expect, max_relative = 1e-5);
        }
    }

    #[test]
    fn recurrence_consistency() {
        // j_{ℓ-1}(x) + j_{ℓ+1}(x) = (2ℓ+1)/x · j_ℓ(x)
        for &x in &[0.7_f64, 3.0, 15.0] {
            let j = spherical_jn(10, x);
            for l in 1..10usize {
                let lhs = j[l - 1] + j[l + 1];
                let rhs = (2.0 * l as f64 + 1.0) / x * j[l];
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-12),
                    "x={x}, ℓ={l}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn zero_argument() {
        let j = spherical_jn(4, 0.0);
        assert_eq!(j[0], 1.0);
        for l in 1..=4 {
            assert_eq!(j[l], 0.0);
        }
    }
}
