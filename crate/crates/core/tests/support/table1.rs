#![allow(clippy::approx_constant)]

//! Reference split table for two-normal mixtures.

pub struct TableRow {
    pub p1: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub d_min: f64,
    pub s_star: Option<f64>,
    pub l_star: Option<f64>,
    pub r_star: Option<f64>,
    pub s_mc: f64,
    pub excess_mce: f64,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    p1: f64,
    mu1: f64,
    mu2: f64,
    d_min: f64,
    s_star: Option<f64>,
    l_star: Option<f64>,
    r_star: Option<f64>,
    s_mc: f64,
    excess_mce: f64,
) -> TableRow {
    TableRow { p1, mu1, mu2, d_min, s_star, l_star, r_star, s_mc, excess_mce }
}

pub const TABLE: [TableRow; 63] = [
    row(0.5, -4.5, 4.5, 0.0, Some(0.0), Some(-8.99), Some(8.99), 0.0, 0.0),
    row(0.45, -4.5, 4.5, -0.02, Some(-0.45), Some(-8.53), Some(9.43), -0.02, 0.0),
    row(0.4, -4.5, 4.5, -0.05, Some(-0.9), Some(-8.08), Some(9.88), -0.04, 0.0),
    row(0.35, -4.5, 4.5, -0.07, Some(-1.36), Some(-7.62), Some(10.33), -0.07, 0.0),
    row(0.3, -4.5, 4.5, -0.1, Some(-1.82), Some(-7.17), Some(10.79), -0.09, 0.001),
    row(0.25, -4.5, 4.5, -0.13, Some(-2.31), Some(-6.67), Some(11.24), -0.12, 0.004),
    row(0.2, -4.5, 4.5, -0.16, Some(-2.9), Some(-6.09), Some(11.7), -0.15, 0.011),
    row(0.15, -4.5, 4.5, -0.2, Some(-3.82), Some(-5.09), Some(12.16), -0.19, 0.037),
    row(0.1, -4.5, 4.5, -0.26, None, None, None, -0.24, 0.1),
    row(0.5, -4.0, 4.0, 0.0, Some(0.0), Some(-7.99), Some(7.99), 0.0, 0.0),
    row(0.45, -4.0, 4.0, -0.03, Some(-0.4), Some(-7.58), Some(8.38), -0.03, 0.0),
    row(0.4, -4.0, 4.0, -0.05, Some(-0.8), Some(-7.17), Some(8.78), -0.05, 0.0),
    row(0.35, -4.0, 4.0, -0.08, Some(-1.22), Some(-6.77), Some(9.19), -0.08, 0.001),
    row(0.3, -4.0, 4.0, -0.11, Some(-1.64), Some(-6.34), Some(9.59), -0.11, 0.003),
    row(0.25, -4.0, 4.0, -0.15, Some(-2.12), Some(-5.86), Some(9.99), -0.14, 0.008),
    row(0.2, -4.0, 4.0, -0.18, Some(-2.72), Some(-5.25), Some(10.4), -0.17, 0.02),
    row(0.15, -4.0, 4.0, -0.23, None, None, None, -0.22, 0.15),
    row(0.1, -4.0, 4.0, -0.29, None, None, None, -0.28, 0.1),
    row(0.5, -3.5, 3.5, 0.0, Some(0.0), Some(-6.98), Some(6.98), 0.0, 0.0),
    row(0.45, -3.5, 3.5, -0.03, Some(-0.35), Some(-6.63), Some(7.34), -0.03, 0.0),
    row(0.4, -3.5, 3.5, -0.06, Some(-0.71), Some(-6.27), Some(7.69), -0.06, 0.001),
    row(0.35, -3.5, 3.5, -0.1, Some(-1.09), Some(-5.9), Some(8.04), -0.09, 0.003),
    row(0.3, -3.5, 3.5, -0.13, Some(-1.49), Some(-5.49), Some(8.39), -0.12, 0.007),
    row(0.25, -3.5, 3.5, -0.17, Some(-1.97), Some(-5.01), Some(8.75), -0.16, 0.016),
    row(0.2, -3.5, 3.5, -0.22, Some(-2.66), Some(-4.32), Some(9.12), -0.2, 0.04),
    row(0.15, -3.5, 3.5, -0.27, None, None, None, -0.25, 0.15),
    row(0.1, -3.5, 3.5, -0.34, None, None, None, -0.31, 0.1),
    row(0.5, -3.0, 3.0, 0.0, Some(0.0), Some(-5.99), Some(5.99), 0.0, 0.0),
    row(0.45, -3.0, 3.0, -0.04, Some(-0.32), Some(-5.66), Some(6.28), -0.03, 0.001),
    row(0.4, -3.0, 3.0, -0.08, Some(-0.64), Some(-5.34), Some(6.59), -0.07, 0.004),
    row(0.35, -3.0, 3.0, -0.12, Some(-0.99), Some(-4.99), Some(6.89), -0.1, 0.008),
    row(0.3, -3.0, 3.0, -0.16, Some(-1.39), Some(-4.59), Some(7.2), -0.14, 0.016),
    row(0.25, -3.0, 3.0, -0.21, Some(-1.91), Some(-4.07), Some(7.52), -0.18, 0.034),
    row(0.2, -3.0, 3.0, -0.26, None, None, None, -0.23, 0.2),
    row(0.15, -3.0, 3.0, -0.33, None, None, None, -0.29, 0.15),
    row(0.1, -3.0, 3.0, -0.41, None, None, None, -0.37, 0.1),
    row(0.5, -2.5, 2.5, 0.0, Some(0.0), Some(-4.97), Some(4.97), 0.0, 0.0),
    row(0.45, -2.5, 2.5, -0.05, Some(-0.3), Some(-4.68), Some(5.23), -0.04, 0.005),
    row(0.4, -2.5, 2.5, -0.1, Some(-0.61), Some(-4.37), Some(5.49), -0.08, 0.011),
    row(0.35, -2.5, 2.5, -0.15, Some(-0.96), Some(-4.01), Some(5.75), -0.12, 0.021),
    row(0.3, -2.5, 2.5, -0.2, Some(-1.41), Some(-3.56), Some(6.02), -0.17, 0.041),
    row(0.25, -2.5, 2.5, -0.26, None, None, None, -0.22, 0.25),
    row(0.2, -2.5, 2.5, -0.33, None, None, None, -0.28, 0.2),
    row(0.15, -2.5, 2.5, -0.41, None, None, None, -0.35, 0.149),
    row(0.1, -2.5, 2.5, -0.53, None, None, None, -0.44, 0.1),
    row(0.5, -2.0, 2.0, 0.0, Some(0.0), Some(-3.89), Some(3.89), 0.0, 0.0),
    row(0.45, -2.0, 2.0, -0.07, Some(-0.32), Some(-3.62), Some(4.15), -0.05, 0.015),
    row(0.4, -2.0, 2.0, -0.14, Some(-0.67), Some(-3.28), Some(4.38), -0.1, 0.034),
    row(0.35, -2.0, 2.0, -0.21, Some(-1.12), Some(-2.85), Some(4.62), -0.15, 0.065),
    row(0.3, -2.0, 2.0, -0.28, None, None, None, -0.21, 0.298),
    row(0.25, -2.0, 2.0, -0.37, None, None, None, -0.28, 0.248),
    row(0.2, -2.0, 2.0, -0.47, None, None, None, -0.35, 0.198),
    row(0.15, -2.0, 2.0, -0.58, None, None, None, -0.43, 0.148),
    row(0.1, -2.0, 2.0, -0.74, None, None, None, -0.55, 0.097),
    row(0.5, -1.5, 1.5, 0.0, Some(0.0), Some(-2.68), Some(2.68), 0.0, 0.0),
    row(0.45, -1.5, 1.5, -0.12, Some(-0.5), Some(-2.29), Some(2.97), -0.07, 0.057),
    row(0.4, -1.5, 1.5, -0.24, None, None, None, -0.14, 0.396),
    row(0.35, -1.5, 1.5, -0.38, None, None, None, -0.21, 0.344),
    row(0.3, -1.5, 1.5, -0.53, None, None, None, -0.28, 0.293),
    row(0.25, -1.5, 1.5, -0.71, None, None, None, -0.37, 0.241),
    row(0.2, -1.5, 1.5, -1.5, None, None, None, -0.46, 0.19),
    row(0.15, -1.5, 1.5, -1.5, None, None, None, -0.58, 0.139),
    row(0.1, -1.5, 1.5, -1.5, None, None, None, -0.73, 0.09),
];
