//! Gamma function for complex arguments, via the Lanczos approximation
//! with reflection into the left half-plane.

use num_complex::Complex64;

use crate::error::{Error, Result};

// Lanczos coefficients for g = 607/128, N = 15 (Godfrey's set); gives
// close to full double precision for |z| <= 10.
const LANCZOS_G: f64 = 607.0 / 128.0;
#[allow(clippy::excessive_precision)] // published coefficient set, kept verbatim
const LANCZOS_COEF: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
];

/// Is `z` a pole of the gamma function (a nonpositive integer)?
fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Gamma function for complex `z`; relative error below 1e-12 for
/// `|z| <= 10`. Nonpositive integers are poles and yield an error.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma argument {z} not finite")));
    }
    if is_pole(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: gamma(z) gamma(1-z) = pi / sin(pi z).
        let pi = std::f64::consts::PI;
        let s = (z * pi).sin();
        return Complex64::new(pi, 0.0) / (s * gamma_unchecked(Complex64::new(1.0, 0.0) - z));
    }
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + (k as f64 - 1.0));
    }
    let t = z + (LANCZOS_G - 0.5);
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    sqrt_two_pi * t.powc(z - 0.5) * (-t).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: f64, im: f64) -> Complex64 {
        gamma(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn classical_values() {
        assert!((g(1.0, 0.0).re - 1.0).abs() < 1e-14);
        assert!(g(1.0, 0.0).im.abs() < 1e-14);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((g(0.5, 0.0).re - sqrt_pi).abs() < 1e-13);
        assert!((g(-0.5, 0.0).re + 2.0 * sqrt_pi).abs() < 1e-12);
        assert!((g(5.0, 0.0).re - 24.0).abs() < 1e-11);
    }

    #[test]
    fn functional_equation() {
        // gamma(z + 1) = z gamma(z) across the complex plane.
        for &(re, im) in &[
            (0.3, 0.0),
            (2.7, 1.4),
            (-1.3, 0.4),
            (0.0, 2.0),
            (-4.6, -3.3),
            (7.5, 0.1),
        ] {
            let z = Complex64::new(re, im);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-12 * lhs.norm(),
                "functional equation failed at {z}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |gamma(i y)|^2 = pi / (y sinh(pi y)).
        for &y in &[0.3, 1.0, 2.9] {
            let v = g(0.0, y).norm_sqr();
            let expect = std::f64::consts::PI / (y * (std::f64::consts::PI * y).sinh());
            assert!((v - expect).abs() <= 1e-12 * expect, "failed at y = {y}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for &re in &[0.0, -1.0, -2.0, -7.0] {
            assert!(matches!(
                gamma(Complex64::new(re, 0.0)),
                Err(Error::GammaPole { .. })
            ));
        }
        assert!(gamma(Complex64::new(f64::NAN, 0.0)).is_err());
    }
}
