//! Brute-force simulation of the full `N = 2^n` dimensional system.
//!
//! `D = W R_s(phi) W R_t(phi)` is applied rightmost first: phase the marked
//! items, Walsh-Hadamard (standing in for `U^dagger`, since `W` is
//! self-inverse), phase `|0>`, Walsh-Hadamard again. Nothing here uses the
//! closed forms from [`crate::amplitude`], so the two can check each other.

use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result};

pub const MAX_QUBITS: u32 = 24;

/// Which items satisfy the oracle, as written on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkedSpec {
    /// `count:M` marks items `0..M`.
    Count(usize),
    /// `set:i1,i2,...` marks the listed items.
    Set(Vec<usize>),
}

impl FromStr for MarkedSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MarkedSpec(s.to_string());
        if let Some(rest) = s.strip_prefix("count:") {
            rest.trim().parse().map(MarkedSpec::Count).map_err(|_| bad())
        } else if let Some(rest) = s.strip_prefix("set:") {
            rest.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(MarkedSpec::Set)
        } else {
            Err(bad())
        }
    }
}

impl MarkedSpec {
    pub fn instance(&self, n: u32) -> Result<SearchInstance> {
        match self {
            MarkedSpec::Count(m) => SearchInstance::with_count(n, *m),
            MarkedSpec::Set(items) => SearchInstance::new(n, items.iter().copied()),
        }
    }
}

/// An unstructured list of `2^n` items and the set the oracle accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchInstance {
    n: u32,
    marked: Vec<usize>,
}

impl SearchInstance {
    pub fn new(n: u32, marked: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_qubits(n)?;
        let size = 1usize << n;
        let mut marked: Vec<usize> = marked.into_iter().collect();
        marked.sort_unstable();
        marked.dedup();
        if marked.is_empty() {
            return Err(Error::NoMarked);
        }
        if let Some(&index) = marked.iter().find(|&&i| i >= size) {
            return Err(Error::MarkedIndex { index, size });
        }
        Ok(SearchInstance { n, marked })
    }

    /// Marks items `0..m`.
    pub fn with_count(n: u32, m: usize) -> Result<Self> {
        Self::new(n, 0..m)
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    /// `N`.
    pub fn size(&self) -> usize {
        1 << self.n
    }

    /// Sorted marked indices.
    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// `M`.
    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    /// `M/N`.
    pub fn fraction(&self) -> f64 {
        self.marked_count() as f64 / self.size() as f64
    }

    /// The oracle `f(i)`.
    pub fn is_marked(&self, i: usize) -> bool {
        self.marked.binary_search(&i).is_ok()
    }

    /// The `k`-th unmarked index in increasing order, `k < N - M`.
    pub fn unmarked_nth(&self, k: usize) -> usize {
        debug_assert!(k < self.size() - self.marked_count());
        // Index i is the k-th unmarked one when i - #(marked <= i) = k and i is unmarked.
        let mut i = k;
        let mut seen = 0;
        loop {
            let below = self.marked.partition_point(|&x| x <= i);
            if below == seen {
                return i;
            }
            i += below - seen;
            seen = below;
        }
    }
}

fn check_qubits(n: u32) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::Capacity(n))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The uniform superposition `W|0>`.
    pub fn uniform(n: u32) -> Result<Self> {
        check_qubits(n)?;
        let size = 1usize << n;
        let amp = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
        Ok(Statevector { amps: vec![amp; size] })
    }

    pub fn basis(n: u32, k: usize) -> Result<Self> {
        check_qubits(n)?;
        let size = 1usize << n;
        if k >= size {
            return Err(Error::MarkedIndex { index: k, size });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); size];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Statevector { amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two. Normalization
    /// is the caller's responsibility.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(amps.len()));
        }
        Ok(Statevector { amps })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_len(&self, instance: &SearchInstance) -> Result<()> {
        if self.len() == instance.size() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: instance.size(),
                got: self.len(),
            })
        }
    }

    /// `R_t(phi)`: multiply every marked amplitude by `e^{i phi}`.
    pub fn apply_oracle_phase(&mut self, instance: &SearchInstance, phi: f64) -> Result<()> {
        self.check_len(instance)?;
        let rot = Complex64::from_polar(1.0, phi);
        for &i in instance.marked() {
            self.amps[i] *= rot;
        }
        Ok(())
    }

    /// `R_s(phi)` with `|s> = |0>`.
    pub fn apply_zero_phase(&mut self, phi: f64) {
        self.amps[0] *= Complex64::from_polar(1.0, phi);
    }

    /// In-place Walsh-Hadamard transform, `1/sqrt(2)` per stage.
    pub fn apply_walsh(&mut self) {
        let n = self.amps.len();
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mut half = 1;
        while half < n {
            for block in self.amps.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (x, z) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (u, v) = (*x, *z);
                    *x = (u + v) * scale;
                    *z = (u - v) * scale;
                }
            }
            half *= 2;
        }
    }

    /// One application of `D = W R_s(phi) W R_t(phi)`.
    pub fn apply_d(&mut self, instance: &SearchInstance, phi: f64) -> Result<()> {
        self.apply_oracle_phase(instance, phi)?;
        self.apply_walsh();
        self.apply_zero_phase(phi);
        self.apply_walsh();
        Ok(())
    }

    pub fn apply_d_times(&mut self, instance: &SearchInstance, phi: f64, q: u64) -> Result<()> {
        for _ in 0..q {
            self.apply_d(instance, phi)?;
        }
        Ok(())
    }

    /// `sum_{i marked} |amp_i|^2`.
    pub fn marked_probability(&self, instance: &SearchInstance) -> Result<f64> {
        self.check_len(instance)?;
        let p: f64 = instance.marked().iter().map(|&i| self.amps[i].norm_sqr()).sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Draws index `i` with probability `|amp_i|^2`.
    pub fn measure_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let total = self.norm_sqr();
        let target = u * total;
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if target < acc {
                return i;
            }
        }
        last_nonzero
    }

    /// Cumulative distribution for repeated sampling.
    pub fn sampler(&self) -> MeasurementSampler {
        MeasurementSampler::new(self)
    }
}

/// Precomputed cumulative probabilities of a state; each draw is a binary search.
#[derive(Debug, Clone)]
pub struct MeasurementSampler {
    cdf: Vec<f64>,
}

impl MeasurementSampler {
    pub fn new(state: &Statevector) -> Self {
        let mut acc = 0.0;
        let cdf = state
            .amplitudes()
            .iter()
            .map(|a| {
                acc += a.norm_sqr();
                acc
            })
            .collect();
        MeasurementSampler { cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().expect("non-empty state");
        let target = rng.gen::<f64>() * total;
        let i = self.cdf.partition_point(|&c| c <= target);
        // Trailing zero-probability entries share the final cdf value.
        i.min(self.cdf.partition_point(|&c| c < total))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn uniform_examples() {
        let s = Statevector::uniform(1).unwrap();
        assert!(s.amplitudes().iter().all(|a| close(*a, FRAC_1_SQRT_2.into(), 1e-15)));
        let s = Statevector::uniform(2).unwrap();
        assert!(s.amplitudes().iter().all(|a| close(*a, 0.5.into(), 1e-15)));
        let s = Statevector::uniform(10).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(Statevector::uniform(0), Err(Error::Capacity(0)));
        assert_eq!(Statevector::uniform(25), Err(Error::Capacity(25)));
    }

    #[test]
    fn instance_validation() {
        assert_eq!(SearchInstance::new(3, []), Err(Error::NoMarked));
        assert_eq!(
            SearchInstance::new(3, [8]),
            Err(Error::MarkedIndex { index: 8, size: 8 })
        );
        let inst = SearchInstance::new(3, [5, 1, 5]).unwrap();
        assert_eq!(inst.marked(), &[1, 5]);
        assert!(inst.is_marked(5) && !inst.is_marked(4));
        assert!(SearchInstance::with_count(2, 5).is_err());
    }

    #[test]
    fn unmarked_enumeration() {
        let inst = SearchInstance::new(4, [0, 1, 3, 7, 8, 15]).unwrap();
        let expected: Vec<usize> = (0..16).filter(|i| !inst.is_marked(*i)).collect();
        let got: Vec<usize> = (0..expected.len()).map(|k| inst.unmarked_nth(k)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn marked_spec_grammar() {
        assert_eq!("count:7".parse::<MarkedSpec>().unwrap(), MarkedSpec::Count(7));
        assert_eq!(
            "set:3, 1,9".parse::<MarkedSpec>().unwrap(),
            MarkedSpec::Set(vec![3, 1, 9])
        );
        assert!("7".parse::<MarkedSpec>().is_err());
        assert!("set:1,x".parse::<MarkedSpec>().is_err());
        assert!("count:".parse::<MarkedSpec>().is_err());
    }

    #[test]
    fn oracle_phase_examples() {
        let inst = SearchInstance::new(2, [3]).unwrap();
        let mut s = Statevector::uniform(2).unwrap();
        let before = s.clone();
        s.apply_oracle_phase(&inst, 0.0).unwrap();
        assert_eq!(s, before);
        s.apply_oracle_phase(&inst, PI).unwrap();
        assert!(close(s.amplitudes()[3], (-0.5).into(), 1e-15));
        assert!(close(s.amplitudes()[2], 0.5.into(), 1e-15));

        let inst0 = SearchInstance::new(2, [0]).unwrap();
        let mut s = Statevector::uniform(2).unwrap();
        s.apply_oracle_phase(&inst0, FRAC_PI_2).unwrap();
        assert!(close(s.amplitudes()[0], Complex64::new(0.0, 0.5), 1e-15));

        let wrong = SearchInstance::new(3, [0]).unwrap();
        assert_eq!(
            s.apply_oracle_phase(&wrong, 1.0),
            Err(Error::LengthMismatch { expected: 8, got: 4 })
        );
    }

    #[test]
    fn zero_phase_examples() {
        let mut s = Statevector::uniform(2).unwrap();
        s.apply_zero_phase(0.0);
        assert_eq!(s, Statevector::uniform(2).unwrap());
        s.apply_zero_phase(PI);
        assert!(close(s.amplitudes()[0], (-0.5).into(), 1e-15));
        let mut s = Statevector::uniform(2).unwrap();
        s.apply_zero_phase(FRAC_PI_2);
        assert!(close(s.amplitudes()[0], Complex64::new(0.0, 0.5), 1e-15));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn walsh_examples() {
        let mut s = Statevector::basis(1, 0).unwrap();
        s.apply_walsh();
        assert!(s.amplitudes().iter().all(|a| close(*a, FRAC_1_SQRT_2.into(), 1e-15)));

        let mut s = Statevector::uniform(3).unwrap();
        s.apply_walsh();
        assert_eq!(s.len(), 8);
        assert!(close(s.amplitudes()[0], 1.0.into(), 1e-14));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() < 1e-14));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let raw: Vec<Complex64> = (0..64)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let x = Statevector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap();
        let mut y = x.clone();
        y.apply_walsh();
        y.apply_walsh();
        for (a, b) in x.amplitudes().iter().zip(y.amplitudes()) {
            assert!(close(*a, *b, 1e-12));
        }
        assert_eq!(
            Statevector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]),
            Err(Error::NotPowerOfTwo(3))
        );
    }

    #[test]
    fn d_examples() {
        let inst = SearchInstance::new(2, [3]).unwrap();
        let mut s = Statevector::uniform(2).unwrap();
        s.apply_d(&inst, PI).unwrap();
        assert!((s.marked_probability(&inst).unwrap() - 1.0).abs() < 1e-12);

        let inst = SearchInstance::new(4, [2, 9]).unwrap();
        let mut s = Statevector::uniform(4).unwrap();
        s.apply_oracle_phase(&inst, 0.3).unwrap();
        let before = s.clone();
        s.apply_d(&inst, 0.0).unwrap();
        for (a, b) in before.amplitudes().iter().zip(s.amplitudes()) {
            assert!(close(*a, *b, 1e-12));
        }
    }

    #[test]
    fn marked_probability_examples() {
        let inst = SearchInstance::new(5, [1, 4, 30]).unwrap();
        let s = Statevector::uniform(5).unwrap();
        assert!((s.marked_probability(&inst).unwrap() - 3.0 / 32.0).abs() < 1e-15);
        let s = Statevector::basis(5, 2).unwrap();
        assert_eq!(s.marked_probability(&inst).unwrap(), 0.0);
    }

    #[test]
    fn measure_basis_and_determinism() {
        let s = Statevector::basis(4, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(s.measure_sample(&mut rng), 11);
            assert_eq!(s.sampler().sample(&mut rng), 11);
        }
        let s = Statevector::uniform(6).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| s.measure_sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }

    #[test]
    fn sampler_matches_linear_scan() {
        let inst = SearchInstance::new(5, [3, 17]).unwrap();
        let mut s = Statevector::uniform(5).unwrap();
        s.apply_d_times(&inst, 2.0, 2).unwrap();
        let sampler = s.sampler();
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            assert_eq!(s.measure_sample(&mut r1), sampler.sample(&mut r2));
        }
    }
}
