//! Integrators for linear Schrödinger-type equations `dψ/dt = −(i/ħ) H(t) ψ`.
//!
//! Two general-purpose methods are provided: classical fixed-step RK4 and the
//! adaptive Dormand–Prince 5(4) pair. A fourth-order Magnus stepper for
//! traceless 2×2 generators lives in [`TwoLevelMagnus`]; it is what the
//! free-fermion pair dynamics use by default because each step is an exact
//! SU(2) rotation and the step may span many oscillation periods' worth of
//! phase without losing unitarity.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// A linear generator `out = −(i/ħ) H(t) ψ`.
pub trait LinearGenerator {
    fn dim(&self) -> usize;
    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Classical fixed-step fourth-order Runge–Kutta.
    Rk4 { step: f64 },
    /// Adaptive Dormand–Prince 5(4) with mixed error control.
    DormandPrince { rtol: f64, atol: f64 },
    /// Fourth-order Magnus with exact 2×2 exponentials; only valid for two-level
    /// problems. The step is chosen so that `‖H‖ h / ħ ≤ phase_per_step`.
    Magnus4 { phase_per_step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    pub method: Method,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self::adaptive(1e-9, 1e-12)
    }
}

impl IntegratorOptions {
    pub fn adaptive(rtol: f64, atol: f64) -> Self {
        IntegratorOptions {
            method: Method::DormandPrince { rtol, atol },
            max_steps: 50_000_000,
        }
    }

    pub fn rk4(step: f64) -> Self {
        IntegratorOptions {
            method: Method::Rk4 { step },
            max_steps: 50_000_000,
        }
    }

    pub fn magnus(phase_per_step: f64) -> Self {
        IntegratorOptions {
            method: Method::Magnus4 { phase_per_step },
            max_steps: 50_000_000,
        }
    }

    /// Default used for the free-fermion pair dynamics.
    pub fn pair_default() -> Self {
        Self::magnus(0.25)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.method {
            Method::Rk4 { step } => step > 0.0 && step.is_finite(),
            Method::DormandPrince { rtol, atol } => {
                rtol > 0.0 && atol > 0.0 && rtol.is_finite() && atol.is_finite()
            }
            Method::Magnus4 { phase_per_step } => {
                phase_per_step > 0.0 && phase_per_step < std::f64::consts::PI
            }
        };
        if !ok || self.max_steps == 0 {
            return Err(Error::invalid(format!("bad integrator options {self:?}")));
        }
        Ok(())
    }
}

/// Step statistics of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Reusable integrator state: scratch buffers plus the last adaptive step,
/// so consecutive calls to [`Integrator::advance`] continue smoothly.
pub struct Integrator {
    opts: IntegratorOptions,
    k: [Vec<C64>; 7],
    tmp: Vec<C64>,
    next: Vec<C64>,
    last_step: Option<f64>,
    fsal_valid: bool,
    pub stats: StepStats,
}

impl Integrator {
    pub fn new(opts: IntegratorOptions, dim: usize) -> Result<Self> {
        opts.validate()?;
        if matches!(opts.method, Method::Magnus4 { .. }) {
            return Err(Error::invalid(
                "the Magnus method only applies to two-level problems",
            ));
        }
        Ok(Integrator {
            opts,
            k: std::array::from_fn(|_| vec![C64::new(0.0, 0.0); dim]),
            tmp: vec![C64::new(0.0, 0.0); dim],
            next: vec![C64::new(0.0, 0.0); dim],
            last_step: None,
            fsal_valid: false,
            stats: StepStats::default(),
        })
    }

    /// Integrates `psi` in place from `t0` to `t1`.
    pub fn advance<G: LinearGenerator + ?Sized>(
        &mut self,
        gen: &G,
        t0: f64,
        t1: f64,
        psi: &mut [C64],
    ) -> Result<()> {
        if t1 <= t0 {
            return Ok(());
        }
        match self.opts.method {
            Method::Rk4 { step } => self.advance_rk4(gen, t0, t1, step, psi),
            Method::DormandPrince { rtol, atol } => {
                self.advance_dopri(gen, t0, t1, rtol, atol, psi)
            }
            Method::Magnus4 { .. } => unreachable!("rejected in Integrator::new"),
        }
    }

    fn advance_rk4<G: LinearGenerator + ?Sized>(
        &mut self,
        gen: &G,
        t0: f64,
        t1: f64,
        step: f64,
        psi: &mut [C64],
    ) -> Result<()> {
        let n_steps = ((t1 - t0) / step).ceil().max(1.0) as usize;
        if n_steps > self.opts.max_steps {
            return Err(Error::Integration {
                mode: None,
                reason: format!("{n_steps} fixed steps exceed max_steps"),
            });
        }
        let h = (t1 - t0) / n_steps as f64;
        let [k1, k2, k3, k4, ..] = &mut self.k;
        let tmp = &mut self.tmp;
        for i in 0..n_steps {
            let t = t0 + i as f64 * h;
            gen.apply(t, psi, k1);
            axpy_into(tmp, psi, 0.5 * h, k1);
            gen.apply(t + 0.5 * h, tmp, k2);
            axpy_into(tmp, psi, 0.5 * h, k2);
            gen.apply(t + 0.5 * h, tmp, k3);
            axpy_into(tmp, psi, h, k3);
            gen.apply(t + h, tmp, k4);
            for j in 0..psi.len() {
                psi[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
            }
            self.stats.accepted += 1;
        }
        Ok(())
    }

    fn advance_dopri<G: LinearGenerator + ?Sized>(
        &mut self,
        gen: &G,
        t0: f64,
        t1: f64,
        rtol: f64,
        atol: f64,
        psi: &mut [C64],
    ) -> Result<()> {
        let dim = psi.len();
        let mut t = t0;
        if !self.fsal_valid {
            gen.apply(t, psi, &mut self.k[0]);
            self.fsal_valid = true;
        }
        let mut h = match self.last_step {
            Some(h) => h,
            None => initial_step(&self.k[0], psi, rtol, atol, t1 - t0),
        };
        let mut steps = 0usize;
        while t < t1 {
            if steps >= self.opts.max_steps {
                return Err(Error::Integration {
                    mode: None,
                    reason: format!("exceeded {} steps at t = {t}", self.opts.max_steps),
                });
            }
            steps += 1;
            let last = t + h >= t1;
            let hh = if last { t1 - t } else { h };
            if hh <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integration {
                    mode: None,
                    reason: format!("step size underflow at t = {t}"),
                });
            }

            let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
            let tmp = &mut self.tmp;
            let next = &mut self.next;
            for j in 0..dim {
                tmp[j] = psi[j] + k1[j] * (hh * A21);
            }
            gen.apply(t + C2 * hh, tmp, k2);
            for j in 0..dim {
                tmp[j] = psi[j] + (k1[j] * A31 + k2[j] * A32) * hh;
            }
            gen.apply(t + C3 * hh, tmp, k3);
            for j in 0..dim {
                tmp[j] = psi[j] + (k1[j] * A41 + k2[j] * A42 + k3[j] * A43) * hh;
            }
            gen.apply(t + C4 * hh, tmp, k4);
            for j in 0..dim {
                tmp[j] =
                    psi[j] + (k1[j] * A51 + k2[j] * A52 + k3[j] * A53 + k4[j] * A54) * hh;
            }
            gen.apply(t + C5 * hh, tmp, k5);
            for j in 0..dim {
                tmp[j] = psi[j]
                    + (k1[j] * A61 + k2[j] * A62 + k3[j] * A63 + k4[j] * A64 + k5[j] * A65)
                        * hh;
            }
            gen.apply(t + hh, tmp, k6);
            for j in 0..dim {
                next[j] = psi[j]
                    + (k1[j] * B1 + k3[j] * B3 + k4[j] * B4 + k5[j] * B5 + k6[j] * B6) * hh;
            }
            gen.apply(t + hh, next, k7);

            let mut err_sq = 0.0;
            for j in 0..dim {
                let e = (k1[j] * E1 + k3[j] * E3 + k4[j] * E4 + k5[j] * E5 + k6[j] * E6
                    + k7[j] * E7)
                    * hh;
                let scale = atol + rtol * psi[j].norm().max(next[j].norm());
                let r = e.norm() / scale;
                err_sq += r * r;
            }
            let err = (err_sq / dim as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::Integration {
                    mode: None,
                    reason: format!("non-finite error estimate at t = {t}"),
                });
            }

            if err <= 1.0 {
                t = if last { t1 } else { t + hh };
                psi.copy_from_slice(next);
                std::mem::swap(k1, k7);
                self.stats.accepted += 1;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // The truncated final step says nothing about the natural step.
                if !last {
                    h = hh * factor;
                }
            } else {
                self.stats.rejected += 1;
                h = hh * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
        }
        self.last_step = Some(h);
        Ok(())
    }
}

fn axpy_into(out: &mut [C64], x: &[C64], a: f64, y: &[C64]) {
    for j in 0..out.len() {
        out[j] = x[j] + y[j] * a;
    }
}

fn initial_step(f0: &[C64], y0: &[C64], rtol: f64, atol: f64, span: f64) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (y, f) in y0.iter().zip(f0) {
        let sc = atol + rtol * y.norm();
        d0 += (y.norm() / sc).powi(2);
        d1 += (f.norm() / sc).powi(2);
    }
    let n = y0.len() as f64;
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(span)
}

/// Integrates `psi` from `t0` to `t1` with a fresh integrator.
pub fn integrate<G: LinearGenerator + ?Sized>(
    gen: &G,
    t0: f64,
    t1: f64,
    psi: &mut [C64],
    opts: IntegratorOptions,
) -> Result<StepStats> {
    let mut integ = Integrator::new(opts, psi.len())?;
    integ.advance(gen, t0, t1, psi)?;
    Ok(integ.stats)
}

/// A traceless 2×2 Hermitian generator `H(t) = b(t)·σ`, with `b` given in
/// angular-frequency units (already divided by ħ).
pub trait TwoLevelField {
    fn field(&self, t: f64) -> [f64; 3];
    /// Upper bound of `|b(t)|` over the integration window.
    fn max_norm(&self) -> f64;
}

/// Fourth-order Magnus stepper with Gauss–Legendre nodes. For `H = b·σ` the
/// second Magnus term is `(√3 h²/6) (b₂ × b₁)·σ` and the step propagator is
/// the exact exponential of the resulting Pauli vector.
pub struct TwoLevelMagnus {
    pub phase_per_step: f64,
    pub max_steps: usize,
}

impl TwoLevelMagnus {
    pub fn from_options(opts: &IntegratorOptions) -> Option<Self> {
        match opts.method {
            Method::Magnus4 { phase_per_step } => Some(TwoLevelMagnus {
                phase_per_step,
                max_steps: opts.max_steps,
            }),
            _ => None,
        }
    }

    pub fn advance<F: TwoLevelField>(
        &self,
        field: &F,
        t0: f64,
        t1: f64,
        psi: &mut [C64; 2],
    ) -> Result<StepStats> {
        if t1 <= t0 {
            return Ok(StepStats::default());
        }
        let norm = field.max_norm();
        let n_steps = if norm == 0.0 {
            1
        } else {
            ((t1 - t0) * norm / self.phase_per_step).ceil().max(1.0) as usize
        };
        if n_steps > self.max_steps {
            return Err(Error::Integration {
                mode: None,
                reason: format!("{n_steps} Magnus steps exceed max_steps"),
            });
        }
        let h = (t1 - t0) / n_steps as f64;
        let off = 3f64.sqrt() / 6.0;
        let comm = 3f64.sqrt() * h * h / 6.0;
        for i in 0..n_steps {
            let t = t0 + i as f64 * h;
            let b1 = field.field(t + (0.5 - off) * h);
            let b2 = field.field(t + (0.5 + off) * h);
            let cross = [
                b2[1] * b1[2] - b2[2] * b1[1],
                b2[2] * b1[0] - b2[0] * b1[2],
                b2[0] * b1[1] - b2[1] * b1[0],
            ];
            let w = [
                0.5 * h * (b1[0] + b2[0]) + comm * cross[0],
                0.5 * h * (b1[1] + b2[1]) + comm * cross[1],
                0.5 * h * (b1[2] + b2[2]) + comm * cross[2],
            ];
            apply_su2(w, psi);
        }
        Ok(StepStats {
            accepted: n_steps,
            rejected: 0,
        })
    }
}

/// `psi ← exp(−i w·σ) psi`.
pub fn apply_su2(w: [f64; 3], psi: &mut [C64; 2]) {
    let angle = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    if angle == 0.0 {
        return;
    }
    let (sin, cos) = angle.sin_cos();
    let (nx, ny, nz) = (w[0] / angle, w[1] / angle, w[2] / angle);
    // −i sin(a) (n·σ) = −i sin(a) [[nz, nx − i ny], [nx + i ny, −nz]]
    let u00 = C64::new(cos, -sin * nz);
    let u11 = C64::new(cos, sin * nz);
    let u01 = C64::new(-sin * ny, -sin * nx);
    let u10 = C64::new(sin * ny, -sin * nx);
    let (a, b) = (psi[0], psi[1]);
    psi[0] = u00 * a + u01 * b;
    psi[1] = u10 * a + u11 * b;
}
