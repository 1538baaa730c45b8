//! Embedded Dormand-Prince 5(4) integrator with dense output.
//!
//! The solver steps adaptively, lands exactly on the requested end point, and
//! evaluates the standard quartic interpolant at caller-supplied sample
//! positions, so callers get values on their own grid without constraining the
//! step sequence. Integration may run in either direction.

/// Failure modes of an integration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeError {
    /// Step size fell below the floor while still rejecting steps.
    StepUnderflow { t: f64 },
    /// Step budget exhausted.
    MaxSteps { t: f64 },
    /// The caller's guard predicate rejected a state.
    Guard { t: f64 },
}

/// Result of a dense integration run.
#[derive(Debug, Clone)]
pub struct DenseOutput<const N: usize> {
    /// State at each requested sample position, in the order supplied.
    pub states: Vec<[f64; N]>,
    /// State at the end of the integration interval.
    pub final_state: [f64; N],
    /// Accepted step count.
    pub steps: usize,
}

/// Dormand-Prince 5(4) parameters.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 1e-13, max_steps: 20_000_000 }
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// 5th-order weights minus the embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
/// Dense-output weights for the extra interpolation term.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

impl Dopri5 {
    /// Integrate `dy/dt = f(t, y)` from `t0` to `tf` (either direction).
    ///
    /// `samples` must be sorted in the direction of integration and lie in
    /// `[t0, tf]`. `guard` is checked at every accepted step end and at every
    /// dense sample; returning `false` aborts with `OdeError::Guard`.
    pub fn solve<const N: usize>(
        &self,
        f: impl Fn(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        tf: f64,
        y0: [f64; N],
        samples: &[f64],
        mut guard: impl FnMut(f64, &[f64; N]) -> bool,
    ) -> Result<DenseOutput<N>, OdeError> {
        let span = tf - t0;
        if span == 0.0 {
            let states = vec![y0; samples.len()];
            return Ok(DenseOutput { states, final_state: y0, steps: 0 });
        }
        let dir = span.signum();
        let h_floor = 1e-14 * span.abs().max(1.0);

        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        let mut h = dir * (1e-4 * span.abs()).max(h_floor * 16.0);
        let mut states = Vec::with_capacity(samples.len());
        let mut next_sample = 0;
        let mut steps = 0usize;
        let mut evals = 0usize;

        if !guard(t, &y) {
            return Err(OdeError::Guard { t });
        }
        // samples coinciding with the start point
        while next_sample < samples.len() && (samples[next_sample] - t0) * dir <= 0.0 {
            states.push(y0);
            next_sample += 1;
        }

        loop {
            if (t - tf) * dir >= 0.0 {
                break;
            }
            if steps >= self.max_steps || evals >= 60 * self.max_steps {
                return Err(OdeError::MaxSteps { t });
            }
            if (t + h - tf) * dir > 0.0 {
                h = tf - t;
            }

            let mut k = [[0.0; N]; 7];
            k[0] = k1;
            for stage in 0..6 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    let a = A[stage][j];
                    if a != 0.0 {
                        for i in 0..N {
                            ys[i] += h * a * kj[i];
                        }
                    }
                }
                k[stage + 1] = f(t + C[stage] * h, &ys);
            }
            evals += 6;

            // stage 6 already produced the 5th-order solution (FSAL)
            let mut y1 = y;
            for (j, kj) in k.iter().enumerate().take(6) {
                let a = A[5][j];
                if a != 0.0 {
                    for i in 0..N {
                        y1[i] += h * a * kj[i];
                    }
                }
            }

            let mut err_sq = 0.0;
            for i in 0..N {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                let sk = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
                let r = h * e / sk;
                err_sq += r * r;
            }
            let err = (err_sq / N as f64).sqrt();

            if err <= 1.0 {
                // dense interpolation over the accepted step
                if next_sample < samples.len() {
                    let ydiff: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
                    let bspl: [f64; N] = std::array::from_fn(|i| h * k[0][i] - ydiff[i]);
                    let c4: [f64; N] = std::array::from_fn(|i| ydiff[i] - h * k[6][i] - bspl[i]);
                    let c5: [f64; N] = std::array::from_fn(|i| {
                        h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>()
                    });
                    while next_sample < samples.len()
                        && (samples[next_sample] - (t + h)) * dir <= 0.0
                    {
                        let theta = (samples[next_sample] - t) / h;
                        let ys: [f64; N] = std::array::from_fn(|i| {
                            y[i] + theta
                                * (ydiff[i]
                                    + (1.0 - theta)
                                        * (bspl[i] + theta * (c4[i] + (1.0 - theta) * c5[i])))
                        });
                        if !guard(samples[next_sample], &ys) {
                            return Err(OdeError::Guard { t: samples[next_sample] });
                        }
                        states.push(ys);
                        next_sample += 1;
                    }
                }

                t += h;
                y = y1;
                k1 = k[6];
                steps += 1;
                if !guard(t, &y) {
                    return Err(OdeError::Guard { t });
                }
                let scale = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
                h *= scale;
            } else {
                let scale = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                h *= scale;
                if h.abs() < h_floor {
                    return Err(OdeError::StepUnderflow { t });
                }
            }
        }

        // any samples that round past tf map to the final state
        while next_sample < samples.len() {
            states.push(y);
            next_sample += 1;
        }
        Ok(DenseOutput { states, final_state: y, steps })
    }

    /// Integrate without dense output; returns the final state only.
    pub fn solve_to<const N: usize>(
        &self,
        f: impl Fn(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        tf: f64,
        y0: [f64; N],
    ) -> Result<[f64; N], OdeError> {
        self.solve(f, t0, tf, y0, &[], |_, _| true).map(|out| out.final_state)
    }
}
