//! Reference values checked by `repro` and the acceptance suite.

/// `(n, Θ_n, θ_n)` for the uniform measure on `cross(1, 1)`.
pub const CROSS_THETA: [(usize, f64, f64); 24] = [
    (4, 0.1756039179, 0.1771699698),
    (8, 0.8706648269e-1, 0.1081557877),
    (12, 0.5894618764e-1, 0.846332410e-1),
    (16, 0.4475241502e-1, 0.716638451e-1),
    (20, 0.3613474685e-1, 0.631649554e-1),
    (24, 0.3032967468e-1, 0.570537158e-1),
    (28, 0.2614682972e-1, 0.523932383e-1),
    (32, 0.2298656524e-1, 0.486911124e-1),
    (36, 0.2051319544e-1, 0.456605530e-1),
    (40, 0.1852386296e-1, 0.431218007e-1),
    (44, 0.1688863030e-1, 0.409557583e-1),
    (48, 0.1552035810e-1, 0.390800153e-1),
    (52, 0.1435839520e-1, 0.374355145e-1),
    (56, 0.1335920853e-1, 0.359786966e-1),
    (60, 0.1249073290e-1, 0.346766415e-1),
    (64, 0.1172882241e-1, 0.335039558e-1),
    (68, 0.1105494437e-1, 0.324406982e-1),
    (72, 0.1045463567e-1, 0.314709643e-1),
    (76, 0.9916442395e-2, 0.305818978e-1),
    (80, 0.9431174829e-2, 0.297629768e-1),
    (84, 0.8991373805e-2, 0.290054994e-1),
    (88, 0.8590921072e-2, 0.283021988e-1),
    (92, 0.8224750644e-2, 0.276469516e-1),
    (96, 0.7888631635e-2, 0.270345579e-1),
];

/// Displayed radical forms of the 9×9 cross section, `d_{i,j}` 1-based.
///
/// The `(2, 5)` entry is listed as `2√3/5`; exact rational Gram–Schmidt on
/// the cross moments gives `2√3/7`.
pub fn cross_section_9(i: usize, j: usize) -> f64 {
    let s = f64::sqrt;
    match (i, j) {
        (1, 4) => s(7.0) / 5.0,
        (1, 8) => -2.0 * s(15.0) / 45.0,
        (2, 1) => s(3.0) / 3.0,
        (2, 5) => 2.0 * s(3.0) / 5.0,
        (2, 9) => -4.0 * s(3.0) * s(17.0) / 231.0,
        (3, 2) => s(5.0) * s(3.0) / 5.0,
        (3, 6) => 2.0 * s(5.0) * s(11.0) / 45.0,
        (4, 3) => s(7.0) * s(5.0) / 7.0,
        (4, 7) => 2.0 * s(7.0) * s(13.0) / 77.0,
        (5, 4) => 4.0 * s(7.0) / 15.0,
        (5, 8) => 19.0 * s(15.0) / 195.0,
        (6, 5) => 15.0 * s(11.0) / 77.0,
        (6, 9) => 12.0 * s(11.0) * s(17.0) / 385.0,
        (7, 6) => 7.0 * s(13.0) * s(11.0) / 117.0,
        (8, 7) => 3.0 * s(15.0) * s(13.0) / 55.0,
        (9, 8) => 88.0 * s(17.0) * s(15.0) / 1989.0,
        _ => 0.0,
    }
}

/// `(ε, n)`: for the arc with `a = 2`, `sup |h_n - φ| < ε` on the unit circle
/// from column `n` on.
pub const ARC_THRESHOLDS: [(f64, usize); 4] = [(0.2, 17), (0.1, 22), (0.01, 38), (0.001, 54)];

/// Constant `C` in `sup |h_n - φ| <= C (√3/2)^n` for the arc with `a = 2`.
pub fn arc_error_constant() -> f64 {
    (5.0 + 2.0 * 3f64.sqrt()) / 4.0
}
