//! Bohr lift to T^m and numeric norms on the torus.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{even_norm, even_p_norm, CRational, DirichletPolynomial};
use crate::error::{Error, Result};
use crate::exactreal::{rat_to_f64, ExactReal, Rational};
use crate::rng::{substream, unit_f64};
use crate::util::par_map;

pub const DEFAULT_DIMENSION_CAP: usize = 8;

/// Korobov multiplier for 2^16 points, chosen by minimizing the weighted
/// P_2 figure of merit in dimension 8.
pub const KOROBOV_MULTIPLIER: u64 = 3595;

/// D rewritten as Σ a_n z^{R_n} on T^m.
#[derive(Clone, Debug)]
pub struct TorusLift {
    pub poly: DirichletPolynomial,
    pub basis: Vec<ExactReal>,
    /// One row per coefficient, in support order.
    pub exponents: Vec<Vec<i64>>,
    approx: Vec<Complex<f64>>,
}

fn c64(z: &CRational) -> Complex<f64> {
    Complex::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

pub fn bohr_lift(d: &DirichletPolynomial) -> Result<TorusLift> {
    let reg = d.frequency().registry();
    let q = reg.qli_basis(&d.support_values())?;
    let exponents = q.exponents_i64()?;
    let approx = d.terms().iter().map(|(_, a)| c64(a)).collect();
    Ok(TorusLift {
        poly: d.clone(),
        basis: q.basis,
        exponents,
        approx,
    })
}

impl TorusLift {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn check_dim(&self, cap: usize) -> Result<()> {
        if self.dim() > cap {
            Err(Error::Dimension {
                got: self.dim(),
                cap,
            })
        } else {
            Ok(())
        }
    }

    /// Value at θ ∈ [0,1)^m.
    pub fn eval(&self, theta: &[f64]) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (row, a) in self.exponents.iter().zip(&self.approx) {
            let t: f64 = row.iter().zip(theta).map(|(&r, &x)| r as f64 * x).sum();
            let ph = TAU * (t - libm::floor(t));
            acc += a * Complex::new(libm::cos(ph), libm::sin(ph));
        }
        acc
    }

    /// Value at the lattice point i·z/n shifted by Δ, with the integer part
    /// of the phase reduced exactly.
    fn eval_lattice(&self, i: u64, z: &[u64], n: u64, shift: &[f64]) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (row, a) in self.exponents.iter().zip(&self.approx) {
            let mut num: i128 = 0;
            let mut frac = 0.0;
            for ((&r, &zj), &dj) in row.iter().zip(z).zip(shift) {
                num += r as i128 * ((i as u128 * zj as u128) % n as u128) as i128;
                frac += r as f64 * dj;
            }
            let t = num.rem_euclid(n as i128) as f64 / n as f64 + frac;
            let ph = TAU * (t - libm::floor(t));
            acc += a * Complex::new(libm::cos(ph), libm::sin(ph));
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QmcConfig {
    pub points: u64,
    pub shifts: usize,
    pub dimension_cap: usize,
}

impl Default for QmcConfig {
    fn default() -> Self {
        QmcConfig {
            points: 1 << 16,
            shifts: 8,
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }
}

fn korobov(points: u64, m: usize) -> Vec<u64> {
    let mut z = vec![1u64 % points.max(1)];
    for j in 1..m {
        z.push((z[j - 1] as u128 * KOROBOV_MULTIPLIER as u128 % points as u128) as u64);
    }
    z
}

#[derive(Clone, Debug, PartialEq)]
pub struct QmcEstimate {
    pub p: f64,
    /// Mean over shifts of the p-th moment.
    pub moment: f64,
    pub moment_se: f64,
    pub norm: f64,
    pub lo: f64,
    pub hi: f64,
    pub points: u64,
    pub shifts: usize,
}

/// Randomly shifted rank-1 lattice estimate of (∫|P|^p)^{1/p}.
pub fn p_norm_qmc(lift: &TorusLift, p: f64, cfg: &QmcConfig, seed: u64) -> Result<QmcEstimate> {
    lift.check_dim(cfg.dimension_cap)?;
    if !(p >= 1.0 && p.is_finite()) || cfg.shifts < 2 || cfg.points == 0 {
        return Err(Error::Invalid(
            "qmc needs finite p >= 1, at least 2 shifts and 1 point".into(),
        ));
    }
    let m = lift.dim();
    let z = korobov(cfg.points, m);
    let shifts: Vec<Vec<f64>> = (0..cfg.shifts)
        .map(|s| {
            let mut rng = substream(seed, "qmc-shift", s as u64);
            (0..m).map(|_| unit_f64(&mut rng)).collect()
        })
        .collect();
    let moments = par_map(&shifts, |d| {
        let mut sum = 0.0;
        let mut comp = 0.0; // Kahan
        for i in 0..cfg.points {
            let v = libm::pow(lift.eval_lattice(i, &z, cfg.points, d).norm(), p) - comp;
            let t = sum + v;
            comp = (t - sum) - v;
            sum = t;
        }
        sum / cfg.points as f64
    });
    let s = moments.len() as f64;
    let mean = moments.iter().sum::<f64>() / s;
    let var = moments.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (s - 1.0);
    let se = libm::sqrt(var / s);
    // floor for rounding error of the f64 accumulation
    let w = (3.0 * se).max(1e-9 * mean.abs() + 1e-300);
    Ok(QmcEstimate {
        p,
        moment: mean,
        moment_se: se,
        norm: libm::pow(mean, 1.0 / p),
        lo: libm::pow((mean - w).max(0.0), 1.0 / p),
        hi: libm::pow(mean + w, 1.0 / p),
        points: cfg.points,
        shifts: cfg.shifts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    /// Exact even moment; the band only reflects the final root.
    ExactEvenMoment,
    Qmc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub method: NormMethod,
    pub moment: Option<Rational>,
    pub qmc: Option<QmcEstimate>,
}

/// ‖D‖_p: exact for even integer p, randomized lattice rule otherwise.
pub fn p_norm_estimate(
    lift: &TorusLift,
    p: &Rational,
    cfg: &QmcConfig,
    seed: u64,
    budget: u64,
) -> Result<NormEstimate> {
    lift.check_dim(cfg.dimension_cap)?;
    let even_k = if p.is_integer() && p.to_integer().is_even() {
        p.to_integer().to_u32().map(|q| q / 2)
    } else {
        None
    };
    if let Some(k) = even_k.filter(|&k| k > 0) {
        let moment = even_norm(&lift.poly, k, budget)?;
        let enc = even_p_norm(&moment, k, 128);
        let lo = libm::nextafter(enc.lo_f64(), f64::NEG_INFINITY);
        let hi = libm::nextafter(enc.hi_f64(), f64::INFINITY);
        return Ok(NormEstimate {
            value: enc.mid_f64(),
            lo,
            hi,
            method: NormMethod::ExactEvenMoment,
            moment: Some(moment),
            qmc: None,
        });
    }
    let q = p_norm_qmc(lift, rat_to_f64(p), cfg, seed)?;
    Ok(NormEstimate {
        value: q.norm,
        lo: q.lo,
        hi: q.hi,
        method: NormMethod::Qmc,
        moment: None,
        qmc: Some(q),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupEstimate {
    /// max |P| found; a lower bound on ‖D‖_∞.
    pub lower_bound: f64,
    pub argmax: Vec<f64>,
}

/// Lattice samples plus the identity point, refined by coordinate ascent.
pub fn sup_norm_estimate(
    lift: &TorusLift,
    samples: u64,
    dimension_cap: usize,
    seed: u64,
) -> Result<SupEstimate> {
    lift.check_dim(dimension_cap)?;
    let m = lift.dim();
    let samples = samples.max(1);
    let z = korobov(samples, m);
    let mut rng = substream(seed, "sup-shift", 0);
    let shift: Vec<f64> = (0..m).map(|_| unit_f64(&mut rng)).collect();
    let mut cands: Vec<(f64, Vec<f64>)> = vec![(lift.eval(&vec![0.0; m]).norm(), vec![0.0; m])];
    let zero = vec![0.0; m];
    for d in [&zero, &shift] {
        for i in 0..samples {
            let v = lift.eval_lattice(i, &z, samples, d).norm();
            let theta: Vec<f64> = z
                .iter()
                .zip(d.iter())
                .map(|(&zj, &dj)| {
                    let t = (i as u128 * zj as u128 % samples as u128) as f64 / samples as f64 + dj;
                    t - libm::floor(t)
                })
                .collect();
            cands.push((v, theta));
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    cands.truncate(8);
    let mut best = cands[0].clone();
    for (mut v, mut theta) in cands {
        let mut h = 0.5 / libm::pow(samples as f64, 1.0 / m.max(1) as f64);
        while h > 1e-12 {
            let mut moved = false;
            for j in 0..m {
                for dir in [1.0, -1.0] {
                    let old = theta[j];
                    theta[j] = old + dir * h;
                    let w = lift.eval(&theta).norm();
                    if w > v {
                        v = w;
                        moved = true;
                    } else {
                        theta[j] = old;
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        if v > best.0 {
            best = (v, theta);
        }
    }
    let argmax = best.1.iter().map(|t| t - libm::floor(*t)).collect();
    Ok(SupEstimate {
        lower_bound: best.0,
        argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::{rat, rat_int};
    use crate::frequency::gen_log_integers;
    use alloc::sync::Arc;

    fn c(re: i64, im: i64) -> CRational {
        Complex::new(rat_int(re), rat_int(im))
    }

    #[test]
    fn lift_of_log_six() {
        let f = Arc::new(gen_log_integers(6).unwrap());
        let d =
            DirichletPolynomial::new(f, vec![(1, c(1, 0)), (2, c(1, 0)), (5, c(1, 0))]).unwrap();
        let l = bohr_lift(&d).unwrap();
        assert_eq!(l.exponents, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn rational_support_single_variable() {
        let reg = crate::exactreal::RegistryBuilder::new().build();
        let vals = vec![reg.rational(rat(1, 3)), reg.rational(rat(1, 2))];
        let f = Arc::new(crate::frequency::Frequency::new(reg, vals, "t").unwrap());
        let d = DirichletPolynomial::ones(f, &[0, 1]).unwrap();
        assert_eq!(bohr_lift(&d).unwrap().exponents, vec![vec![2], vec![3]]);
    }

    #[test]
    fn norms_of_one_plus_two() {
        let f = Arc::new(gen_log_integers(2).unwrap());
        let d = DirichletPolynomial::ones(f, &[0, 1]).unwrap();
        let l = bohr_lift(&d).unwrap();
        let cfg = QmcConfig::default();
        let two = p_norm_estimate(&l, &rat_int(2), &cfg, 1, 1000).unwrap();
        assert!(two.lo <= libm::sqrt(2.0) && libm::sqrt(2.0) <= two.hi);
        let four = p_norm_estimate(&l, &rat_int(4), &cfg, 1, 1000).unwrap();
        assert_eq!(four.moment, Some(rat_int(6)));
        assert!((four.value - 1.5650845800732873).abs() < 1e-12);
        let q = p_norm_qmc(&l, 4.0, &cfg, 9).unwrap();
        assert!(q.lo <= four.value && four.value <= q.hi);
    }

    #[test]
    fn sup_of_one_minus_two() {
        let f = Arc::new(gen_log_integers(2).unwrap());
        let d = DirichletPolynomial::new(f, vec![(0, c(1, 0)), (1, c(-1, 0))]).unwrap();
        let s = sup_norm_estimate(&bohr_lift(&d).unwrap(), 4096, 8, 3).unwrap();
        assert!(s.lower_bound >= 1.99);
        assert!(s.lower_bound <= 2.0 + 1e-12);
    }

    #[test]
    fn sup_of_all_ones_is_attained_at_identity() {
        let f = Arc::new(gen_log_integers(7).unwrap());
        let d = DirichletPolynomial::ones(f, &[1, 2, 4, 6]).unwrap();
        let s = sup_norm_estimate(&bohr_lift(&d).unwrap(), 1024, 8, 3).unwrap();
        assert!((s.lower_bound - 4.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_cap() {
        let f = Arc::new(gen_log_integers(30).unwrap());
        // primes 2..23: nine variables
        let d = DirichletPolynomial::ones(f, &[1, 2, 4, 6, 10, 12, 16, 18, 22]).unwrap();
        let l = bohr_lift(&d).unwrap();
        assert_eq!(
            p_norm_qmc(&l, 3.0, &QmcConfig::default(), 0),
            Err(Error::Dimension { got: 9, cap: 8 })
        );
    }
}
