//! Complex Gamma function (Lanczos, g = 7, nine terms) with the reflection formula on the left.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z). Fails at the poles z = 0, −1, −2, … (within 1e−14).
pub fn gamma(z: C64) -> Result<C64> {
    if z.im.abs() < 1e-14 && z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-14 {
        return Err(Error::Numerical(format!("Gamma pole at z = {z}")));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return C64::new(PI, 0.0) / (s * gamma_unchecked(C64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = C64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_half_integer_values() {
        let mut f = 1.0;
        for n in 1..12 {
            let g = gamma(C64::new(n as f64, 0.0)).unwrap();
            assert!((g.re - f).abs() <= 1e-13 * f, "n = {n}");
            f *= n as f64;
        }
        let h = gamma(C64::new(0.5, 0.0)).unwrap();
        assert!((h.re - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for &y in &[0.1, 0.37, 1.0, 2.5, 4.9] {
            let g = gamma(C64::new(0.0, y)).unwrap();
            let expect = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() - expect).abs() <= 1e-12 * expect, "y = {y}");
        }
    }

    #[test]
    fn recurrence_in_strip() {
        for &(a, b) in &[(0.3, 1.7), (-2.4, 0.9), (3.1, -4.5), (-0.7, -2.2)] {
            let z = C64::new(a, b);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        assert!(gamma(C64::new(0.0, 0.0)).is_err());
        assert!(gamma(C64::new(-3.0, 0.0)).is_err());
    }
}
