//! Bessel function of the first kind, order zero.
//!
//! Two branches meet at `|x| = 8`:
//!
//! * `|x| < 8`: the power series `sum_k (-x^2/4)^k / (k!)^2`. The largest
//!   term near `x = 8` is about 113, so cancellation costs roughly two
//!   digits and the result stays well inside 1e-12 absolute.
//! * `|x| >= 8`: `J0(x) = sqrt(2/(pi x)) (P0(x) cos(x - pi/4) - Q0(x) sin(x - pi/4))`
//!   with the rational minimax approximations of P0 and Q0 below. These
//!   are accurate for every `|x| >= 2`, which gives the two branches a
//!   wide window in which they can be checked against each other.

#![allow(clippy::excessive_precision)]

// The P0/Q0 coefficient tables are taken from FreeBSD's
// /usr/src/lib/msun/src/e_j0.c, which carries this notice:
//
// ====================================================
// Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//
// Developed at SunSoft, a Sun Microsystems, Inc. business.
// Permission to use, copy, modify, and distribute this
// software is freely granted, provided that this notice
// is preserved.
// ====================================================

/// Switch point between the power series and the rational branch.
pub const BRANCH_SWITCH: f64 = 8.0;

const INV_SQRT_PI: f64 = 5.64189583547756279280e-01;

// P0(x) = 1 + R/S and Q0(x) = (-1/8 + R/S)/x, polynomials in 1/x^2,
// tabulated on [8, inf), [4.5454, 8), [2.8571, 4.5454) and [2, 2.8571).
const PR8: [f64; 6] = [
    0.00000000000000000000e+00,
    -7.03124999999900357484e-02,
    -8.08167041275349795626e+00,
    -2.57063105679704847262e+02,
    -2.48521641009428822144e+03,
    -5.25304380490729545272e+03,
];
const PS8: [f64; 5] = [
    1.16534364619668181717e+02,
    3.83374475364121826715e+03,
    4.05978572648472545552e+04,
    1.16752972564375915681e+05,
    4.76277284146730962675e+04,
];
const PR5: [f64; 6] = [
    -1.14125464691894502584e-11,
    -7.03124940873599280078e-02,
    -4.15961064470587782438e+00,
    -6.76747652265167261021e+01,
    -3.31231299649172967747e+02,
    -3.46433388365604912451e+02,
];
const PS5: [f64; 5] = [
    6.07539382692300335975e+01,
    1.05125230595704579173e+03,
    5.97897094333855784498e+03,
    9.62544514357774460223e+03,
    2.40605815922939109441e+03,
];
const PR3: [f64; 6] = [
    -2.54704601771951915620e-09,
    -7.03119616381481654654e-02,
    -2.40903221549529611423e+00,
    -2.19659774734883086467e+01,
    -5.80791704701737572236e+01,
    -3.14479470594888503854e+01,
];
const PS3: [f64; 5] = [
    3.58560338055209726349e+01,
    3.61513983050303863820e+02,
    1.19360783792111533330e+03,
    1.12799679856907414432e+03,
    1.73580930813335754692e+02,
];
const PR2: [f64; 6] = [
    -8.87534333032526411254e-08,
    -7.03030995483624743247e-02,
    -1.45073846780952986357e+00,
    -7.63569613823527770791e+00,
    -1.11931668860356747786e+01,
    -3.23364579351335335033e+00,
];
const PS2: [f64; 5] = [
    2.22202997532088808441e+01,
    1.36206794218215208048e+02,
    2.70470278658083486789e+02,
    1.53875394208320329881e+02,
    1.46576176948256193810e+01,
];
const QR8: [f64; 6] = [
    0.00000000000000000000e+00,
    7.32421874999935051953e-02,
    1.17682064682252693899e+01,
    5.57673380256401856059e+02,
    8.85919720756468632317e+03,
    3.70146267776887834771e+04,
];
const QS8: [f64; 6] = [
    1.63776026895689824414e+02,
    8.09834494656449805916e+03,
    1.42538291419120476348e+05,
    8.03309257119514397345e+05,
    8.40501579819060512818e+05,
    -3.43899293537866615225e+05,
];
const QR5: [f64; 6] = [
    1.84085963594515531381e-11,
    7.32421766612684765896e-02,
    5.83563508962056953777e+00,
    1.35111577286449829671e+02,
    1.02724376596164097464e+03,
    1.98997785864605384631e+03,
];
const QS5: [f64; 6] = [
    8.27766102236537761883e+01,
    2.07781416421392987104e+03,
    1.88472887785718085070e+04,
    5.67511122894947329769e+04,
    3.59767538425114471465e+04,
    -5.35434275601944773371e+03,
];
const QR3: [f64; 6] = [
    4.37741014089738620906e-09,
    7.32411180042911447163e-02,
    3.34423137516170720929e+00,
    4.26218440745412650017e+01,
    1.70808091340565596283e+02,
    1.66733948696651168575e+02,
];
const QS3: [f64; 6] = [
    4.87588729724587182091e+01,
    7.09689221056606015736e+02,
    3.70414822620111362994e+03,
    6.46042516752568917582e+03,
    2.51633368920368957333e+03,
    -1.49247451836156386662e+02,
];
const QR2: [f64; 6] = [
    1.50444444886983272379e-07,
    7.32234265963079278272e-02,
    1.99819174093815998816e+00,
    1.44956029347885735348e+01,
    3.16662317504781540833e+01,
    1.62527075710929267416e+01,
];
const QS2: [f64; 6] = [
    3.03655848355219184498e+01,
    2.69348118608049844624e+02,
    8.44783757595320139444e+02,
    8.82935845112488550512e+02,
    2.12666388511798828631e+02,
    -5.31095493882666946917e+00,
];

pub fn bessel_j0(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax.is_infinite() {
        return 0.0;
    }
    if ax < BRANCH_SWITCH {
        j0_power_series(ax)
    } else {
        j0_large_argument(ax)
    }
}

/// Maclaurin series of `J0`. Exact in the limit, but loses accuracy to
/// cancellation as `|x|` grows past roughly 12.
pub fn j0_power_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        sum += term;
        if kf > q && term.abs() <= 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Rational-approximation branch, valid for `|x| >= 2`; returns NaN below.
pub fn j0_large_argument(x: f64) -> f64 {
    let x = x.abs();
    if x.is_nan() || x < 2.0 {
        return f64::NAN;
    }
    let (s, c) = x.sin_cos();
    let mut cc = s + c;
    let mut ss = s - c;
    if x < f64::MAX / 2.0 {
        // one of sin(x) +- cos(x) may cancel; recover it from cos(2x)
        let z = -(x + x).cos();
        if s * c < 0.0 {
            cc = z / ss;
        } else {
            ss = z / cc;
        }
    }
    INV_SQRT_PI * (p_zero(x) * cc - q_zero(x) * ss) / x.sqrt()
}

fn p_zero(x: f64) -> f64 {
    let (p, q) = if x >= 8.0 {
        (&PR8, &PS8)
    } else if x >= 4.545_454_025_268_555 {
        (&PR5, &PS5)
    } else if x >= 2.857_142_448_425_293 {
        (&PR3, &PS3)
    } else {
        (&PR2, &PS2)
    };
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * q[4]))));
    1.0 + r / s
}

fn q_zero(x: f64) -> f64 {
    let (p, q) = if x >= 8.0 {
        (&QR8, &QS8)
    } else if x >= 4.545_454_025_268_555 {
        (&QR5, &QS5)
    } else if x >= 2.857_142_448_425_293 {
        (&QR3, &QS3)
    } else {
        (&QR2, &QS2)
    };
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * (q[4] + z * q[5])))));
    (-0.125 + r / s) / x
}
