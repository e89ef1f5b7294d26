//! Numeric kernels for the order-0 and order-1 Bessel functions.
//!
//! * `I0`, `I1`: ascending power series up to `x = 40`, Hankel-type
//!   asymptotic expansion above.
//! * `K0`, `K1`: logarithmic series for `x <= 2`, Steed's continued fraction
//!   (Temme's CF2 with the Thompson–Barnett normalisation) above.
//! * `J0`, `J1`: Miller backward recurrence normalised by
//!   `J0 + 2 sum J_2k = 1` for `x < 25`, Hankel asymptotics above.
//! * `Y0`, `Y1`: Neumann series over the same backward-recurrence table for
//!   `x < 25`, Hankel asymptotics above.
//!
//! On `(0, 30)` the modified functions are accurate to about `1e-14`
//! relative. The oscillatory `J`/`Y` functions are accurate to about `1e-14`
//! absolute (relative accuracy is meaningless next to their zeros).

use std::f64::consts::{FRAC_2_PI, PI};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-17;

pub fn bessel_i0(x: f64) -> f64 {
    modified_i(0, x.abs())
}

pub fn bessel_i1(x: f64) -> f64 {
    let v = modified_i(1, x.abs());
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn modified_i(order: u32, x: f64) -> f64 {
    if x <= 40.0 {
        let half = 0.5 * x;
        let q = half * half;
        let mut term = if order == 0 { 1.0 } else { half };
        let mut sum = term;
        let nu = order as f64;
        let mut k = 1.0;
        loop {
            term *= q / (k * (k + nu));
            sum += term;
            if term <= EPS * sum {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        let mu = 4.0 * (order * order) as f64;
        let mut term: f64 = 1.0;
        let mut sum: f64 = 1.0;
        let mut k = 1.0;
        loop {
            let odd = 2.0 * k - 1.0;
            let next = -term * (mu - odd * odd) / (k * 8.0 * x);
            if next.abs() > term.abs() || next.abs() < EPS * sum.abs() {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        x.exp() / (2.0 * PI * x).sqrt() * sum
    }
}

/// Returns `(K0(x), K1(x))`; `x` must be positive.
pub fn bessel_k01(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    if x <= 2.0 {
        let half = 0.5 * x;
        let q = half * half;
        let log_term = half.ln();
        // K0 = -ln(x/2) I0 + sum psi(k+1) q^k / (k!)^2
        let mut psi = -EULER_GAMMA;
        let mut term = 1.0;
        let mut k0 = psi;
        // K1 = 1/x + ln(x/2) I1 - (x/4) sum (psi(k+1)+psi(k+2)) q^k / (k!(k+1)!)
        let mut psi_next = psi + 1.0;
        let mut term1 = 1.0;
        let mut k1_series = psi + psi_next;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            psi += 1.0 / k;
            k0 += psi * term;
            term1 *= q / (k * (k + 1.0));
            psi_next += 1.0 / (k + 1.0);
            k1_series += (psi + psi_next) * term1;
            if term < EPS && term1 < EPS {
                break;
            }
            k += 1.0;
        }
        let k0 = k0 - log_term * modified_i(0, x);
        let k1 = 1.0 / x + log_term * modified_i(1, x) - 0.25 * x * k1_series;
        (k0, k1)
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..10_000 {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        h *= a1;
        let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        let k1 = k0 * (x + 0.5 - h) / x;
        (k0, k1)
    }
}

pub fn bessel_k0(x: f64) -> f64 {
    bessel_k01(x).0
}

pub fn bessel_k1(x: f64) -> f64 {
    bessel_k01(x).1
}

const HANKEL_SWITCH: f64 = 25.0;

/// Backward-recurrence table `J_0 ..= J_N` for `0 < x < 25`.
fn j_table(x: f64) -> Vec<f64> {
    let top = x as usize + 40 + (10.0 * x.cbrt()) as usize;
    let top = top + top % 2;
    let mut vals = vec![0.0; top + 2];
    vals[top] = 1e-30;
    for k in (1..=top).rev() {
        vals[k - 1] = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = vals[0];
    let mut k = 2;
    while k <= top {
        norm += 2.0 * vals[k];
        k += 2;
    }
    vals.truncate(top + 1);
    for v in vals.iter_mut() {
        *v /= norm;
    }
    vals
}

/// Hankel asymptotic `(J_nu, Y_nu)` for `nu` in {0, 1} and large `x`.
fn hankel(order: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = term * (mu - odd * odd) / (k * 8.0 * x);
        if next.abs() > term.abs() || next.abs() < EPS {
            break;
        }
        term = next;
        // terms alternate between Q (odd k) and P (even k) with sign (-1)^floor(k/2)
        let kk = k as u64;
        let sign = if (kk / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if kk % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
        k += 1.0;
    }
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    let amp = (FRAC_2_PI / x).sqrt();
    let (s, c) = chi.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        1.0
    } else if x < HANKEL_SWITCH {
        j_table(x)[0]
    } else {
        hankel(0, x).0
    }
}

pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax == 0.0 {
        0.0
    } else if ax < HANKEL_SWITCH {
        j_table(ax)[1]
    } else {
        hankel(1, ax).0
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Returns `(Y0(x), Y1(x))`; `x` must be positive.
pub fn bessel_y01(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    if x >= HANKEL_SWITCH {
        return (hankel(0, x).1, hankel(1, x).1);
    }
    let j = j_table(x);
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = FRAC_2_PI * (lg * j[0] - 2.0 * s0);
    let y1 = -FRAC_2_PI * (j[0] / x - lg * j[1] - s1);
    (y0, y1)
}

pub fn bessel_y0(x: f64) -> f64 {
    bessel_y01(x).0
}

pub fn bessel_y1(x: f64) -> f64 {
    bessel_y01(x).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    // reference values: mpmath at 30 significant digits
    #[test]
    fn reference_values() {
        let table: &[(fn(f64) -> f64, f64, f64)] = &[
            (bessel_i0, 0.5, 1.063_483_370_741_323_5),
            (bessel_i0, 10.0, 2_815.716_628_466_254_5),
            (bessel_i0, 45.0, 2.083_414_075_177_314_8e18),
            (bessel_i1, 2.0, 1.590_636_854_637_329_1),
            (bessel_k0, 0.5, 0.924_419_071_227_665_86),
            (bessel_k0, 5.0, 0.003_691_098_334_042_594_3),
            (bessel_k1, 1.0, 0.601_907_230_197_234_57),
            (bessel_k1, 20.0, 5.883_057_969_557_038_2e-10),
            (bessel_j0, 1.0, 0.765_197_686_557_966_55),
            (bessel_j0, 12.0, 0.047_689_310_796_833_537),
            (bessel_j0, 28.0, -0.073_157_010_548_999_614),
            (bessel_j1, 3.0, 0.339_058_958_525_936_46),
            (bessel_y0, 0.3, -0.807_273_577_804_519_49),
            (bessel_y0, 7.5, 0.117_313_286_148_208_63),
            (bessel_y1, 2.0, -0.107_032_431_540_937_55),
            (bessel_y1, 27.0, -0.070_251_238_235_783_236),
        ];
        for &(func, x, want) in table {
            let got = func(x);
            assert!(close(got, want, 1e-13), "x={x}: got {got}, want {want}");
        }
    }

    #[test]
    fn special_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_i1(0.0), 0.0);
        assert_eq!(bessel_j1(0.0), 0.0);
    }

    #[test]
    fn modified_wronskian() {
        for &w in &[0.5, 1.0, 2.0, 5.0, 10.0] {
            let (k0, k1) = bessel_k01(w);
            let lhs = bessel_i0(w) * k1 + bessel_i1(w) * k0;
            assert!((lhs - 1.0 / w).abs() < 1e-10 / w, "w={w}");
        }
    }

    #[test]
    fn ordinary_wronskian_across_switch() {
        let mut w = 0.2;
        while w < 30.0 {
            let (y0, y1) = bessel_y01(w);
            let lhs = bessel_j1(w) * y0 - bessel_j0(w) * y1;
            assert!((lhs - 2.0 / (PI * w)).abs() < 1e-13, "w={w}");
            w += 0.37;
        }
    }
}
