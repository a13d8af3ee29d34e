//! Embedded Dormand-Prince 5(4) stepper with dense output.
//!
//! Internal plumbing shared by the trajectory integrator and the manifold
//! tracer. Two departures from a stock explicit stepper matter here:
//!
//! * The right-hand side is fallible. Returning `None` marks a trial stage
//!   as outside the admissible domain (past the touchdown guard, or on the
//!   singular side of the manifold graph); the attempt is discarded and
//!   retried with half the step. Trial stages therefore never evaluate the
//!   force law at overflow distance from the pole.
//! * Every accepted step carries the quartic dense-output polynomial, so
//!   event times (touchdown surface, manifold axis crossing) are located by
//!   bisection on the interpolant rather than by shrinking steps.

const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order solution minus the embedded fourth-order one.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense-output weights.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

/// One accepted step together with its interpolating polynomial.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Interpolated solution at `t` in `[t0, t0 + h]`.
    ///
    /// Exact at both endpoints; O(h^5) accurate between them.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let th1 = 1.0 - theta;
        let mut out = [0.0; N];
        #[allow(clippy::needless_range_loop)] // Horner over five parallel arrays
        for i in 0..N {
            out[i] = self.cont[0][i]
                + theta
                    * (self.cont[1][i]
                        + th1
                            * (self.cont[2][i]
                                + theta * (self.cont[3][i] + th1 * self.cont[4][i])));
        }
        out
    }
}

#[derive(Debug)]
pub enum StepError {
    /// The controller drove the step below the resolvable floor.
    Underflow { t: f64 },
}

/// Adaptive driver state: current point, FSAL derivative, and the step-size
/// controller's preferred next step.
pub struct Stepper<F, const N: usize>
where
    F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
{
    rhs: F,
    rtol: f64,
    atol: f64,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    accepted: u64,
    rejected: u64,
    last_rejected: bool,
}

impl<F, const N: usize> Stepper<F, N>
where
    F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
{
    /// `None` if the right-hand side is undefined at the initial point.
    pub fn new(mut rhs: F, rtol: f64, atol: f64, t0: f64, y0: [f64; N], h0: f64) -> Option<Self> {
        let k1 = rhs(t0, &y0)?;
        Some(Self {
            rhs,
            rtol,
            atol,
            t: t0,
            y: y0,
            k1,
            h: h0,
            accepted: 0,
            rejected: 0,
            last_rejected: false,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn rejected(&self) -> u64 {
        self.rejected
    }

    fn h_floor(&self) -> f64 {
        1e-14 * self.t.abs().max(1.0)
    }

    /// Advance by one accepted step of size at most `h_max`.
    pub fn advance(&mut self, h_max: f64) -> Result<DenseStep<N>, StepError> {
        debug_assert!(h_max > 0.0);
        loop {
            let h = self.h.min(h_max).max(self.h_floor());
            match self.attempt(h) {
                Attempt::Accept { y1, k7, err, cont } => {
                    self.accepted += 1;
                    let fac_max = if self.last_rejected { 1.0 } else { FAC_MAX };
                    let fac = (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, fac_max);
                    let step = DenseStep { t0: self.t, h, cont };
                    self.t += h;
                    self.y = y1;
                    self.k1 = k7;
                    self.h = h * fac;
                    self.last_rejected = false;
                    return Ok(step);
                }
                Attempt::Reject { err } => {
                    self.rejected += 1;
                    self.last_rejected = true;
                    let fac = if err.is_finite() {
                        (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 0.9)
                    } else {
                        0.5
                    };
                    self.h = h * fac;
                }
                Attempt::Domain => {
                    // A trial stage left the admissible domain; retry shorter.
                    self.rejected += 1;
                    self.last_rejected = true;
                    self.h = h * 0.5;
                }
            }
            if self.h < self.h_floor() {
                return Err(StepError::Underflow { t: self.t });
            }
        }
    }

    fn attempt(&mut self, h: f64) -> Attempt<N> {
        let t = self.t;
        let y = &self.y;
        let k1 = self.k1;
        let mut yt = [0.0; N];

        for i in 0..N {
            yt[i] = y[i] + h * A21 * k1[i];
        }
        let Some(k2) = (self.rhs)(t + C2 * h, &yt) else {
            return Attempt::Domain;
        };
        for i in 0..N {
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let Some(k3) = (self.rhs)(t + C3 * h, &yt) else {
            return Attempt::Domain;
        };
        for i in 0..N {
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let Some(k4) = (self.rhs)(t + C4 * h, &yt) else {
            return Attempt::Domain;
        };
        for i in 0..N {
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let Some(k5) = (self.rhs)(t + C5 * h, &yt) else {
            return Attempt::Domain;
        };
        for i in 0..N {
            yt[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let Some(k6) = (self.rhs)(t + h, &yt) else {
            return Attempt::Domain;
        };
        let mut y1 = [0.0; N];
        for i in 0..N {
            y1[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        if y1.iter().any(|v| !v.is_finite()) {
            return Attempt::Reject { err: f64::INFINITY };
        }
        let Some(k7) = (self.rhs)(t + h, &y1) else {
            return Attempt::Domain;
        };

        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                    + E7 * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / N as f64).sqrt();
        if !(err <= 1.0) {
            return Attempt::Reject { err };
        }

        let mut cont = [[0.0; N]; 5];
        for i in 0..N {
            let ydiff = y1[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            cont[0][i] = y[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * k7[i] - bspl;
            cont[4][i] = h
                * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                    + D7 * k7[i]);
        }
        Attempt::Accept { y1, k7, err: err.max(1e-10), cont }
    }
}

enum Attempt<const N: usize> {
    Accept {
        y1: [f64; N],
        k7: [f64; N],
        err: f64,
        cont: [[f64; N]; 5],
    },
    Reject {
        err: f64,
    },
    Domain,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let rhs = |_t: f64, y: &[f64; 1]| Some([y[0]]);
        let mut s = Stepper::new(rhs, 1e-10, 1e-12, 0.0, [1.0], 1e-3).unwrap();
        let mut dense_err: f64 = 0.0;
        while s.t() < 1.0 {
            let step = s.advance(1.0 - s.t()).unwrap();
            let tm = step.t0 + 0.37 * step.h;
            dense_err = dense_err.max((step.eval(tm)[0] - tm.exp()).abs());
        }
        assert!((s.y()[0] - 1.0f64.exp()).abs() < 1e-9);
        assert!(dense_err < 1e-9, "dense output error {dense_err:.3e}");
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let rhs = |_t: f64, y: &[f64; 2]| Some([y[1], -y[0]]);
        let mut s = Stepper::new(rhs, 1e-11, 1e-13, 0.0, [1.0, 0.0], 1e-3).unwrap();
        while s.t() < 100.0 {
            s.advance(100.0 - s.t()).unwrap();
        }
        let e = 0.5 * (s.y()[0] * s.y()[0] + s.y()[1] * s.y()[1]);
        assert!((e - 0.5).abs() < 1e-9);
        assert!(s.rejected() < s.accepted());
    }

    #[test]
    fn dense_output_exact_on_quartic() {
        // y' = 4 t^3 integrates to t^4; the interpolant is quartic-exact.
        let rhs = |t: f64, _y: &[f64; 1]| Some([4.0 * t * t * t]);
        let mut s = Stepper::new(rhs, 1e-6, 1e-9, 0.0, [0.0], 0.1).unwrap();
        while s.t() < 2.0 {
            let step = s.advance(2.0 - s.t()).unwrap();
            for k in 1..5 {
                let tm = step.t0 + step.h * k as f64 / 5.0;
                assert!((step.eval(tm)[0] - tm.powi(4)).abs() < 1e-15 * (1.0 + tm.powi(4)));
            }
        }
    }

    #[test]
    fn endpoint_interpolation_is_exact() {
        let rhs = |_t: f64, y: &[f64; 1]| Some([-2.0 * y[0]]);
        let mut s = Stepper::new(rhs, 1e-8, 1e-10, 0.0, [3.0], 1e-2).unwrap();
        let y_before = s.y()[0];
        let step = s.advance(10.0).unwrap();
        assert_eq!(step.eval(step.t0)[0], y_before);
        assert_eq!(step.eval(step.t1())[0], s.y()[0]);
    }

    #[test]
    fn domain_failure_underflows() {
        // RHS undefined beyond y = 1: the step halves until underflow.
        let rhs = |_t: f64, y: &[f64; 1]| if y[0] < 1.0 { Some([1.0]) } else { None };
        let mut s = Stepper::new(rhs, 1e-9, 1e-12, 0.0, [0.999999], 1e-2).unwrap();
        let mut hit_underflow = false;
        for _ in 0..200 {
            match s.advance(10.0) {
                Ok(_) => {}
                Err(StepError::Underflow { .. }) => {
                    hit_underflow = true;
                    break;
                }
            }
        }
        assert!(hit_underflow);
        assert!(s.y()[0] <= 1.0);
    }
}
