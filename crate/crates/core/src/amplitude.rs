//! Closed forms on the two-dimensional subspace spanned by the marked states
//! `|psi_1>` and the unmarked states `|psi_0>`.
//!
//! Starting from the uniform superposition `sin(theta)|psi_1> + cos(theta)|psi_0>`
//! with `sin^2(theta) = M/N`, `q` applications of `D` leave the state at
//!
//! ```text
//! a_q = sin(theta) (e^{i q phi} U_q(y) + e^{i (q-1) phi} U_{q-1}(y))
//! b_q = cos(theta) e^{i (q-1) phi} (U_q(y) + U_{q-1}(y))
//! ```
//!
//! where `y = cos(delta) = 2 sin^2(theta) sin^2(phi/2) - 1` and `U_q` is the
//! Chebyshev polynomial of the second kind.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// The max-min optimal fixed phase, approximately `1.91684 pi`.
pub const PHI_STAR: f64 = 6.021930660106538;

/// Below this `|sin(delta)|` the sine ratio `sin((q+1) delta) / sin(delta)` is
/// replaced by its limit `(q+1) y^q`.
pub const DEGENERATE_SIN: f64 = 1e-9;

/// Upper bound on the number of iterations scanned by [`peak_schedule`].
pub const PEAK_SCAN_LIMIT: u64 = 1 << 22;

/// The phase shift used for both `R_s` and `R_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConfig {
    phi: f64,
}

impl PhaseConfig {
    /// `phi* = 6.021930660106538`.
    pub const FIXED: PhaseConfig = PhaseConfig { phi: PHI_STAR };
    /// `phi = pi`, Grover's algorithm.
    pub const GROVER: PhaseConfig = PhaseConfig { phi: PI };
    /// `phi = pi/2`, whose success probability matches partial-diffusion search.
    pub const HALF_PI: PhaseConfig = PhaseConfig { phi: FRAC_PI_2 };

    pub fn new(phi: f64) -> Result<Self> {
        if (0.0..=TAU).contains(&phi) {
            Ok(PhaseConfig { phi })
        } else {
            Err(Error::Phase(phi))
        }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `c = 2 sin^2(phi/2) = 1 - cos(phi)`.
    pub fn c(&self) -> f64 {
        let s = (self.phi / 2.0).sin();
        2.0 * s * s
    }
}

impl fmt::Display for PhaseConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phi)
    }
}

/// An iteration count `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Schedule(pub u64);

impl Schedule {
    pub fn iterations(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Amplitudes `(a, b)` on `|psi_1>` and `|psi_0>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceState {
    pub a: Complex64,
    pub b: Complex64,
}

impl SubspaceState {
    /// `P_s = |a|^2`.
    pub fn success(&self) -> f64 {
        self.a.norm_sqr()
    }

    /// `P_ns = |b|^2`.
    pub fn failure(&self) -> f64 {
        self.b.norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.success() + self.failure()
    }
}

/// Angles derived from a match fraction and a phase.
///
/// `1 + y = c sin^2(theta)` and `1 - y = 2(cos^2(theta) + sin^2(theta) cos^2(phi/2))`
/// are formed without cancellation, so `sin(delta)`, `delta` and `pi - delta`
/// keep full relative precision near `y = -1` and `y = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// `M/N = sin^2(theta)`.
    pub fraction: f64,
    pub theta: f64,
    pub sin_theta: f64,
    pub cos_theta: f64,
    /// Principal value in `[0, pi]`.
    pub delta: f64,
    pub sin_delta: f64,
    /// `cos(delta)`.
    pub y: f64,
    /// `2 sin^2(phi/2)`.
    pub c: f64,
    pub phase: PhaseConfig,
    one_plus_y: f64,
    one_minus_y: f64,
    sin_half_phi: f64,
    cos_half_phi: f64,
}

impl Geometry {
    pub fn new(theta: f64, phase: PhaseConfig) -> Result<Self> {
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(Error::Theta(theta));
        }
        let sin_theta = theta.sin();
        let cos_theta = theta.cos();
        Ok(Self::build(sin_theta * sin_theta, cos_theta * cos_theta, theta, sin_theta, cos_theta, phase))
    }

    pub fn from_fraction(fraction: f64, phase: PhaseConfig) -> Result<Self> {
        let theta = theta_of(fraction)?;
        Ok(Self::build(
            fraction,
            1.0 - fraction,
            theta,
            fraction.sqrt(),
            (1.0 - fraction).sqrt(),
            phase,
        ))
    }

    fn build(fraction: f64, cos_sq: f64, theta: f64, sin_theta: f64, cos_theta: f64, phase: PhaseConfig) -> Self {
        let (sin_half_phi, cos_half_phi) = (phase.phi() / 2.0).sin_cos();
        let c = 2.0 * sin_half_phi * sin_half_phi;
        let one_plus_y = c * fraction;
        let one_minus_y = 2.0 * (cos_sq + fraction * cos_half_phi * cos_half_phi);
        let y = one_plus_y - 1.0;
        let sin_delta = (one_plus_y * one_minus_y).max(0.0).sqrt();
        Geometry {
            fraction,
            theta,
            sin_theta,
            cos_theta,
            delta: sin_delta.atan2(y),
            sin_delta,
            y,
            c,
            phase,
            one_plus_y,
            one_minus_y,
            sin_half_phi,
            cos_half_phi,
        }
    }

    pub fn phi(&self) -> f64 {
        self.phase.phi()
    }

    /// `pi - delta`, accurate when `delta` is close to `pi`.
    pub fn delta_complement(&self) -> f64 {
        self.sin_delta.atan2(-self.y)
    }

    pub fn is_degenerate(&self) -> bool {
        self.sin_delta < DEGENERATE_SIN
    }

    /// `U_q(cos delta)` for `q >= -1`.
    pub fn chebyshev(&self, q: i64) -> f64 {
        if self.is_degenerate() {
            chebyshev_limit(q, self.y)
        } else if self.y < 0.0 {
            let sign = if q.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            sign * sin_of_product((q + 1) as f64, self.delta_complement()) / self.sin_delta
        } else {
            sin_of_product((q + 1) as f64, self.delta) / self.sin_delta
        }
    }

    /// `(U_q + U_{q-1}, U_{q-1} - U_q)` from the half-angle forms
    /// `sin((q + 1/2) delta) / sin(delta/2)` and `-cos((q + 1/2) delta) / cos(delta/2)`,
    /// which do not cancel when `|U_q|` is large.
    fn sum_and_difference(&self, q: u64) -> (f64, f64) {
        if self.is_degenerate() {
            let (u, u_prev) = (self.chebyshev(q as i64), self.chebyshev(q as i64 - 1));
            return (u + u_prev, u_prev - u);
        }
        let sin_half = (self.one_minus_y / 2.0).sqrt();
        let cos_half = (self.one_plus_y / 2.0).sqrt();
        let k = q as f64 + 0.5;
        if self.y < 0.0 {
            let sign = if q % 2 == 1 { -1.0 } else { 1.0 };
            let (s, c) = sin_cos_of_product(k, self.delta_complement());
            (sign * c / sin_half, -sign * s / cos_half)
        } else {
            let (s, c) = sin_cos_of_product(k, self.delta);
            (s / sin_half, -c / cos_half)
        }
    }

    /// `e^{i phi} U_q + U_{q-1}` split into real and imaginary parts, and `U_q + U_{q-1}`.
    fn combination(&self, q: u64) -> (f64, f64, f64) {
        let u = self.chebyshev(q as i64);
        let (sum, diff) = self.sum_and_difference(q);
        let re = if self.c <= 1.0 {
            sum - self.c * u
        } else {
            diff + 2.0 * self.cos_half_phi * self.cos_half_phi * u
        };
        let im = 2.0 * self.sin_half_phi * self.cos_half_phi * u;
        (re, im, sum)
    }

    pub fn amplitudes(&self, q: u64) -> SubspaceState {
        let (re, im, sum) = self.combination(q);
        let rot_prev = phase_of_product(q as f64 - 1.0, self.phi());
        SubspaceState {
            a: rot_prev * Complex64::new(re, im) * self.sin_theta,
            b: rot_prev * sum * self.cos_theta,
        }
    }

    /// `P_s^q = sin^2(theta) |e^{i phi} U_q + U_{q-1}|^2`, clamped to `[0, 1]`.
    pub fn success_prob(&self, q: u64) -> f64 {
        let (re, im, _) = self.combination(q);
        (self.fraction * (re * re + im * im)).clamp(0.0, 1.0)
    }

    /// `(sin^2 theta / sin^2 delta)(1 + cos^2 delta + 2 cos(phi) cos(delta))`,
    /// rewritten as `(c sin^4 theta - 2y) / (1 - y)`.
    pub fn success_lower_bound(&self) -> f64 {
        let one_minus_y = self.one_minus_y;
        if one_minus_y <= 0.0 {
            // phi = pi, M = N: the bound vanishes along phi = pi.
            return 0.0;
        }
        (self.c * self.fraction * self.fraction - 2.0 * self.y) / one_minus_y
    }

    /// `q = floor(phi / sin(theta))`.
    pub fn fixed_phase_schedule(&self) -> Schedule {
        Schedule((self.phi() / self.sin_theta).floor() as u64)
    }

    /// `q = floor(pi / (4 theta))`.
    pub fn grover_schedule(&self) -> Schedule {
        Schedule((PI / (4.0 * self.theta)).floor() as u64)
    }

    /// Smallest `q` maximizing `P_s^q` over the first period,
    /// `[0, ceil(pi / (pi - delta)) + 1]`.
    pub fn peak_schedule(&self) -> Schedule {
        let gap = self.delta_complement();
        let upper = if gap > 0.0 {
            ((PI / gap).ceil() + 1.0).min(PEAK_SCAN_LIMIT as f64) as u64
        } else {
            0
        };
        let mut best_q = 0;
        let mut best_p = self.success_prob(0);
        for q in 1..=upper {
            let p = self.success_prob(q);
            if p > best_p + 1e-12 {
                best_p = p;
                best_q = q;
            }
        }
        Schedule(best_q)
    }
}

/// `(sin(k x), cos(k x))` with the rounding error of the product `k x` folded back in.
fn sin_cos_of_product(k: f64, x: f64) -> (f64, f64) {
    let p = k * x;
    let err = k.mul_add(x, -p);
    let (s, c) = p.sin_cos();
    (s + err * c, c - err * s)
}

fn sin_of_product(k: f64, x: f64) -> f64 {
    sin_cos_of_product(k, x).0
}

fn phase_of_product(k: f64, x: f64) -> Complex64 {
    let (s, c) = sin_cos_of_product(k, x);
    Complex64::new(c, s)
}

/// `theta = arcsin(sqrt(fraction))` for `fraction` in `(0, 1]`.
pub fn theta_of(fraction: f64) -> Result<f64> {
    if fraction > 0.0 && fraction <= 1.0 {
        Ok(fraction.sqrt().asin())
    } else {
        Err(Error::Fraction(fraction))
    }
}

/// Principal `arccos(2 sin^2(theta) sin^2(phi/2) - 1)`.
pub fn delta_of(theta: f64, phase: PhaseConfig) -> Result<f64> {
    Geometry::new(theta, phase).map(|g| g.delta)
}

/// `U_q(cos delta) = sin((q+1) delta) / sin(delta)`, with the limit
/// `(q+1) cos(delta)^q` when `|sin(delta)| < 1e-9`.
pub fn chebyshev_u(q: i64, delta: f64) -> f64 {
    let s = delta.sin();
    if s.abs() < DEGENERATE_SIN {
        chebyshev_limit(q, delta.cos())
    } else {
        ((q + 1) as f64 * delta).sin() / s
    }
}

/// `U_q(y)` from `U_q = 2y U_{q-1} - U_{q-2}`, `U_0 = 1`, `U_{-1} = 0`.
pub fn chebyshev_u_recurrence(q: i64, y: f64) -> f64 {
    assert!(q >= -1, "chebyshev index {q} below -1");
    if q == -1 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..q {
        let next = 2.0 * y * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn chebyshev_limit(q: i64, y: f64) -> f64 {
    if q == -1 {
        return 0.0;
    }
    let sign = if y < 0.0 && q % 2 != 0 { -1.0 } else { 1.0 };
    sign * (q + 1) as f64
}

pub fn amplitudes_after(q: u64, theta: f64, phase: PhaseConfig) -> Result<SubspaceState> {
    Geometry::new(theta, phase).map(|g| g.amplitudes(q))
}

pub fn success_prob(q: u64, theta: f64, phase: PhaseConfig) -> Result<f64> {
    Geometry::new(theta, phase).map(|g| g.success_prob(q))
}

pub fn success_lower_bound(theta: f64, phase: PhaseConfig) -> Result<f64> {
    Geometry::new(theta, phase).map(|g| g.success_lower_bound())
}

pub fn fixed_phase_schedule(theta: f64, phase: PhaseConfig) -> Result<Schedule> {
    Geometry::new(theta, phase).map(|g| g.fixed_phase_schedule())
}

pub fn grover_schedule(theta: f64) -> Result<Schedule> {
    Geometry::new(theta, PhaseConfig::GROVER).map(|g| g.grover_schedule())
}

pub fn peak_schedule(theta: f64, phase: PhaseConfig) -> Result<Schedule> {
    Geometry::new(theta, phase).map(|g| g.peak_schedule())
}
