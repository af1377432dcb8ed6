//! Hurwitz zeta function and the normalising constants of the fractional
//! Laplacian and the Riesz potential on `R^n`.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

/// `B_{2j} / (2j)!` for `j = 1..=10`.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
];

const DIRECT_TERMS: usize = 16;

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k + a)^{-s}` for `a > 0`, `s ≠ 1`,
/// analytically continued to `s < 1` through Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(a > 0.0, "hurwitz_zeta needs a > 0, got {a}");
    assert!((s - 1.0).abs() > 1e-14, "hurwitz_zeta has a pole at s = 1");
    let mut sum = 0.0;
    for k in 0..DIRECT_TERMS {
        sum += (k as f64 + a).powf(-s);
    }
    let x = DIRECT_TERMS as f64 + a;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // Rising factorial s (s+1) ... (s+2j-2) times x^{-s-2j+1}.
    let mut rising = s;
    let mut power = x.powf(-s - 1.0);
    let x2 = x * x;
    for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let m = 2.0 * j as f64;
            rising *= (s + m - 1.0) * (s + m);
            power /= x2;
        }
        sum += coeff * rising * power;
    }
    sum
}

/// Riemann zeta `ζ(s) = ζ(s, 1)`. For `s < 0` the reflection formula
/// `ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)` avoids the cancellation of
/// the growing partial sums.
pub fn riemann_zeta(s: f64) -> f64 {
    if s < 0.0 {
        2f64.powf(s) * PI.powf(s - 1.0) * (0.5 * PI * s).sin() * gamma(1.0 - s) * hurwitz_zeta(1.0 - s, 1.0)
    } else {
        hurwitz_zeta(s, 1.0)
    }
}

/// Constant `C` with `Λ^t f(x) = C ∫ (f(x) - f(y)) / |x-y|^{n+t} dy`, so that
/// plane waves `e^{iξx}` have eigenvalue `|ξ|^t`.
pub fn frac_laplacian_constant(n: usize, t: f64) -> f64 {
    let n = n as f64;
    2f64.powf(t) * gamma(0.5 * (n + t)) / (PI.powf(0.5 * n) * gamma(-0.5 * t).abs())
}

/// Constant `c` with `Λ^{-t} F(x) = c ∫ |x-y|^{t-n} F(y) dy`.
pub fn riesz_constant(n: usize, t: f64) -> f64 {
    let n = n as f64;
    gamma(0.5 * (n - t)) / (2f64.powf(t) * PI.powf(0.5 * n) * gamma(0.5 * t))
}
