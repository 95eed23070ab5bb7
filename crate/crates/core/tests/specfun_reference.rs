//! Accuracy of the special-function kernel against frozen high-precision
//! reference values (computed with mpmath at 30 significant digits).

// Frozen data: full-precision literals, some of which happen to sit on
// the e^{-i pi/4} ray (multiples of 1/sqrt(2)).
#![allow(clippy::excessive_precision, clippy::approx_constant)]

use num_complex::Complex64;

use abflux::specfun::{bessel_k, gamma};

// (order re, order im, z re, z im, K re, K im)
const BESSEL_K_REFERENCE: [(f64, f64, f64, f64, f64, f64); 71] = [
    (0.0, 0.0, 0.011, 0.0, 4.6259617034370902, 0.0),
    (0.0, 0.0, 0.5, 0.0, 0.92441907122766586, 0.0),
    (0.0, 0.0, 2.0, 0.0, 0.11389387274953344, 0.0),
    (0.0, 0.0, 10.0, 0.0, 1.7780062316167652e-5, 0.0),
    (0.0, 0.0, 29.0, 0.0, 5.8949507287925601e-14, 0.0),
    (0.25, 0.0, 0.011, 0.0, 5.9895460726639778, 0.0),
    (0.25, 0.0, 0.5, 0.0, 0.96031632493188602, 0.0),
    (0.25, 0.0, 2.0, 0.0, 0.11537827684085676, 0.0),
    (0.25, 0.0, 10.0, 0.0, 1.7833184439806392e-5, 0.0),
    (0.25, 0.0, 29.0, 0.0, 5.9012006776247043e-14, 0.0),
    (0.5, 0.0, 0.011, 0.0, 11.819153053572205, 0.0),
    (0.5, 0.0, 0.5, 0.0, 1.0750476034999202, 0.0),
    (0.5, 0.0, 2.0, 0.0, 0.11993777196806145, 0.0),
    (0.5, 0.0, 10.0, 0.0, 1.799347809370518e-5, 0.0),
    (0.5, 0.0, 29.0, 0.0, 5.9199898807881654e-14, 0.0),
    (0.9, 0.0, 0.011, 0.0, 57.707710190713899, 0.0),
    (0.9, 0.0, 0.5, 0.0, 1.4885580510030044, 0.0),
    (0.9, 0.0, 2.0, 0.0, 0.13455046216572558, 0.0),
    (0.9, 0.0, 10.0, 0.0, 1.8480604344102188e-5, 0.0),
    (0.9, 0.0, 29.0, 0.0, 5.9764600072588603e-14, 0.0),
    (1.5, 0.0, 0.011, 0.0, 1086.2876124692272, 0.0),
    (1.5, 0.0, 0.5, 0.0, 3.2251428104997607, 0.0),
    (1.5, 0.0, 2.0, 0.0, 0.17990665795209217, 0.0),
    (1.5, 0.0, 10.0, 0.0, 1.9792825903075698e-5, 0.0),
    (1.5, 0.0, 29.0, 0.0, 6.124127462884309e-14, 0.0),
    (3.0, 0.0, 0.011, 0.0, 6010427.4994965593, 0.0),
    (3.0, 0.0, 0.5, 0.0, 62.057909529930256, 0.0),
    (3.0, 0.0, 2.0, 0.0, 0.64738539094863415, 0.0),
    (3.0, 0.0, 10.0, 0.0, 2.7252700256598692e-5, 0.0),
    (3.0, 0.0, 29.0, 0.0, 6.8658713641756083e-14, 0.0),
    (4.9, 0.0, 0.011, 0.0, 1220323591528.2959, 0.0),
    (4.9, 0.0, 0.5, 0.0, 9065.8532419485546, 0.0),
    (4.9, 0.0, 2.0, 0.0, 8.0753881194124992, 0.0),
    (4.9, 0.0, 10.0, 0.0, 5.4964631930092358e-5, 0.0),
    (4.9, 0.0, 29.0, 0.0, 8.8488873685125034e-14, 0.0),
    (0.3, 0.0, 0.035355339059327376, -0.035355339059327376, 3.7040702744657951, 1.2194244121737695),
    (0.3, 0.0, 0.70710678118654752, -0.70710678118654752, 0.28476996616745535, 0.51462708504788329),
    (0.3, 0.0, 5.6568542494923802, -5.6568542494923802, 0.0014930650435806329, -0.00036558831433395749),
    (0.99, 0.0, 0.035355339059327376, -0.035355339059327376, 13.739070122726045, 13.652182489240761),
    (0.99, 0.0, 0.70710678118654752, -0.70710678118654752, 0.24344840708177644, 0.73483523017444322),
    (0.99, 0.0, 5.6568542494923802, -5.6568542494923802, 0.0015653433586023416, -0.00032383769947857196),
    (2.5, 0.0, 0.035355339059327376, -0.035355339059327376, -2576.5132133123842, 6212.9299536843575),
    (2.5, 0.0, 0.70710678118654752, -0.70710678118654752, -1.9449668317732516, 3.1549627203652122),
    (2.5, 0.0, 5.6568542494923802, -5.6568542494923802, 0.0020171126211792815, 1.6503670717534688e-5),
    (0.3, 0.0, 0.28284271247461901, 0.28284271247461901, 1.0998367738983284, -0.78232124825029013),
    (0.3, 0.0, 2.1213203435596426, 2.1213203435596426, -0.068165549750586185, -0.051062112310978506),
    (1.7, 0.0, 0.28284271247461901, 0.28284271247461901, 1.2709843349758741, -6.85449758060801),
    (1.7, 0.0, 2.1213203435596426, 2.1213203435596426, -0.10909251912272461, -0.043582168819656923),
    (0.0, 0.5, 0.02, 0.0, 1.4597742411934209, 0.0),
    (0.0, 0.5, 1.0, 0.0, 0.3840430169050927, 0.0),
    (0.0, 0.5, 5.0, 0.0, 0.0036074271313261712, 0.0),
    (0.0, 1.0, 0.02, 0.0, -0.47860842378815284, 0.0),
    (0.0, 1.0, 1.0, 0.0, 0.28942803702599213, 0.0),
    (0.0, 1.0, 5.0, 0.0, 0.0033670999885610447, 0.0),
    (0.0, 2.4, 0.02, 0.0, -0.032583689533620421, 0.0),
    (0.0, 2.4, 1.0, 0.0, 0.031250424052813568, 0.0),
    (0.0, 2.4, 5.0, 0.0, 0.0021615666162219381, 0.0),
    (0.0, 1.0, 0.21213203435596426, -0.21213203435596426, 0.68542066888985682, -0.018725486214227911),
    (0.0, 1.0, 1.414213562373095, -1.414213562373095, -0.011880405872470455, 0.17457061288480978),
    (0.0, 2.0, 0.21213203435596426, -0.21213203435596426, -0.13491722907678666, -0.1231961013160933),
    (0.0, 2.0, 1.414213562373095, -1.414213562373095, 0.038130608481994732, 0.10030775582512571),
    (0.25, 0.0, 0.0001, 0.0, 21.351915864398119, 0.0),
    (0.25, 0.0, 0.004, 0.0, 8.0539812678423648, 0.0),
    (0.6, 0.0, 0.0001, 0.0, 283.48581571947977, 0.0),
    (0.6, 0.0, 0.004, 0.0, 30.951699666613313, 0.0),
    (0.3, 0.0, 35.0, 0.0, 1.3327238168640899e-16, 0.0),
    (0.3, 0.0, 80.0, 0.0, 2.5265318559299751e-36, 0.0),
    (2.0, 0.0, 35.0, 0.0, 1.4081733110858672e-16, 0.0),
    (2.0, 0.0, 80.0, 0.0, 2.5886411706935011e-36, 0.0),
    (4.5, 0.0, 35.0, 0.0, 1.7698009191411385e-16, 0.0),
    (4.5, 0.0, 80.0, 0.0, 2.8634820251270172e-36, 0.0),
];

// (z re, z im, gamma re, gamma im)
const GAMMA_REFERENCE: [(f64, f64, f64, f64); 17] = [
    (1.0, 0.0, 1.0, 0.0),
    (0.5, 0.0, 1.772453850905516, 0.0),
    (-0.5, 0.0, -3.5449077018110321, 0.0),
    (0.25, 0.0, 3.6256099082219083, 0.0),
    (-0.25, 0.0, -4.9016668098607106, 0.0),
    (6.5, 0.0, 287.88527781504436, 0.0),
    (9.5, 0.0, 119292.46199460901, 0.0),
    (0.5, 3.0, 0.021445670552430646, 0.0068653648372616779),
    (-1.5, 0.5, 0.93791666278788505, 0.34920566814780487),
    (4.0, -2.0, -3.0115403703266202, -1.7701681944671162),
    (0.0, 1.0, -0.15494982830181069, -0.49801566811835604),
    (0.0, -2.4, 0.016278431192548721, 0.033562716421470703),
    (-3.2, 1.1, -0.022128397519464288, 0.020288966421124624),
    (2.5, 7.5, -0.00052903887306814452, -0.00096699359238395904),
    (-6.3, -2.2, -1.1962182109596955e-6, -6.8787552901058507e-6),
    (0.001, 0.0, 999.42377248459547, 0.0),
    (-0.9999, 0.3, -0.38235724958780093, 2.9465423186959914),
];

#[test]
fn bessel_k_against_reference_grid() {
    let mut worst = (0.0f64, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &(nre, nim, zre, zim, kre, kim) in &BESSEL_K_REFERENCE {
        let nu = Complex64::new(nre, nim);
        let z = Complex64::new(zre, zim);
        let expect = Complex64::new(kre, kim);
        let got = bessel_k(nu, z).unwrap();
        let rel = (got - expect).norm() / expect.norm();
        // Documented contract: 1e-10 relative on 0.01 <= |z| <= 30; the
        // series/asymptotic regions outside are held to 1e-9.
        let bound = if (0.01..=30.0).contains(&z.norm()) { 1e-10 } else { 1e-9 };
        assert!(
            rel <= bound,
            "K_({nu})({z}): got {got}, expected {expect}, rel {rel:.3e}"
        );
        if rel > worst.0 {
            worst = (rel, nu, z);
        }
    }
    println!("bessel_k worst relative error {:.3e} at nu={}, z={}", worst.0, worst.1, worst.2);
}

#[test]
fn gamma_against_reference_grid() {
    for &(zre, zim, gre, gim) in &GAMMA_REFERENCE {
        let z = Complex64::new(zre, zim);
        let expect = Complex64::new(gre, gim);
        let got = gamma(z).unwrap();
        let rel = (got - expect).norm() / expect.norm();
        assert!(
            rel <= 1e-12,
            "gamma({z}): got {got}, expected {expect}, rel {rel:.3e}"
        );
    }
}
