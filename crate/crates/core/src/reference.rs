//! Reference special functions used by the validation suite.
//!
//! Independent of the solver code paths on purpose: the Airy function here is
//! built from its asymptotic expansion seeded at large argument plus exact
//! Taylor recursion marching downward, so it can serve as an oracle for the
//! Riccati integration on the linear barrier.

/// Ai(z) and Ai'(z) for z in [0, 30].
///
/// For z >= 12 the asymptotic expansion is accurate to machine precision.
/// Below that, the expansion seeds (Ai, Ai') at z = 12 and the Airy ODE
/// y'' = z y is marched downward by Taylor steps; the recurrence
/// (k+2)(k+1) a_{k+2} = z0 a_k + a_{k-1} generates exact Taylor coefficients
/// at each center, and marching toward smaller z is the stable direction for
/// the decaying solution.
pub fn airy_ai_with_derivative(z: f64) -> (f64, f64) {
    assert!((0.0..=30.0).contains(&z), "oracle valid on [0, 30] only");
    if z >= 12.0 {
        return airy_asymptotic(z);
    }
    let (mut ai, mut dai) = airy_asymptotic(12.0);
    let mut z0 = 12.0;
    let step = 0.25_f64;
    while z0 - z > 1e-14 {
        let dz = -(step.min(z0 - z));
        let (v, d) = taylor_step(z0, ai, dai, dz);
        ai = v;
        dai = d;
        z0 += dz;
    }
    (ai, dai)
}

fn taylor_step(z0: f64, y0: f64, dy0: f64, dz: f64) -> (f64, f64) {
    const TERMS: usize = 36;
    let mut a = [0.0; TERMS];
    a[0] = y0;
    a[1] = dy0;
    for k in 0..TERMS - 2 {
        let prev = if k == 0 { 0.0 } else { a[k - 1] };
        a[k + 2] = (z0 * a[k] + prev) / (((k + 2) * (k + 1)) as f64);
    }
    let mut value = 0.0;
    let mut deriv = 0.0;
    for k in (0..TERMS).rev() {
        value = value * dz + a[k];
        if k >= 1 {
            deriv = deriv * dz + k as f64 * a[k];
        }
    }
    (value, deriv)
}

/// Large-argument expansion, truncated at the smallest term.
fn airy_asymptotic(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let pref = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let mut u = 1.0;
    let mut sum_ai = 1.0_f64;
    let mut sum_dai = 1.0;
    let mut sign = 1.0;
    for k in 1..=40 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
        let v = u * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
        sign = -sign;
        let term_ai = sign * u / zeta.powi(k);
        let term_dai = sign * v / zeta.powi(k);
        if term_ai.abs() < 1e-18 * sum_ai.abs() {
            break;
        }
        sum_ai += term_ai;
        sum_dai += term_dai;
    }
    let ai = pref / z.powf(0.25) * sum_ai;
    let dai = -pref * z.powf(0.25) * sum_dai;
    (ai, dai)
}
