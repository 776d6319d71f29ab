//! Dirichlet polynomials Σ a_n e^{-λ_n s}: translation, exact even moments
//! and the lift to a trigonometric polynomial on a finite torus.

mod lift;

pub use lift::{
    bohr_lift, p_norm_estimate, p_norm_qmc, sup_norm_estimate, NormEstimate, NormMethod, QmcConfig,
    QmcEstimate, SupEstimate, TorusLift, DEFAULT_DIMENSION_CAP,
};

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::energy::{FxMap, DENSE_COST_FACTOR};
use crate::error::{Error, Result};
use crate::exactreal::{interval, ExactReal, Interval, Rational};
use crate::frequency::Frequency;
use crate::keys::{Embedding, KeySet, SumKey};

pub type CRational = Complex<Rational>;

/// Relative precision (bits) kept by certified complex arithmetic.
pub const INTERVAL_PRECISION: u32 = 192;

/// Rectangular enclosure of a complex number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn exact(z: &CRational) -> Self {
        CInterval {
            re: Interval::point(z.re.clone()),
            im: Interval::point(z.im.clone()),
        }
    }

    pub fn abs_sq(&self) -> Interval {
        self.re.square().add(&self.im.square())
    }
}

/// Coefficient rings the moment computations run over.
pub trait Coeff: Clone + Send + Sync {
    type Real: Clone;
    fn zero() -> Self;
    fn add_assign(&mut self, o: &Self);
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, m: u128) -> Self;
    fn is_zero(&self) -> bool;
    fn norm_sqr(&self) -> Self::Real;
    fn real_zero() -> Self::Real;
    fn real_add(a: &Self::Real, b: &Self::Real) -> Self::Real;
}

impl Coeff for CRational {
    type Real = Rational;
    fn zero() -> Self {
        Complex::new(Rational::zero(), Rational::zero())
    }
    fn add_assign(&mut self, o: &Self) {
        self.re += &o.re;
        self.im += &o.im;
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, m: u128) -> Self {
        let m = Rational::from_integer(m.into());
        Complex::new(&self.re * &m, &self.im * &m)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn real_zero() -> Rational {
        Rational::zero()
    }
    fn real_add(a: &Rational, b: &Rational) -> Rational {
        a + b
    }
}

impl Coeff for CInterval {
    type Real = Interval;
    fn zero() -> Self {
        CInterval {
            re: Interval::zero(),
            im: Interval::zero(),
        }
    }
    fn add_assign(&mut self, o: &Self) {
        self.re = self.re.add(&o.re);
        self.im = self.im.add(&o.im);
    }
    fn mul(&self, o: &Self) -> Self {
        let p = INTERVAL_PRECISION;
        CInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)).round_outward(p),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)).round_outward(p),
        }
    }
    fn scale(&self, m: u128) -> Self {
        let m = Rational::from_integer(m.into());
        CInterval {
            re: self.re.scale(&m),
            im: self.im.scale(&m),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_point() && self.re.lo().is_zero() && self.im.is_point() && self.im.lo().is_zero()
    }
    fn norm_sqr(&self) -> Interval {
        self.abs_sq().round_outward(INTERVAL_PRECISION)
    }
    fn real_zero() -> Interval {
        Interval::zero()
    }
    fn real_add(a: &Interval, b: &Interval) -> Interval {
        a.add(b).round_outward(INTERVAL_PRECISION)
    }
}

impl Coeff for Complex<f64> {
    type Real = f64;
    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, m: u128) -> Self {
        self * m as f64
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn norm_sqr(&self) -> f64 {
        Complex::norm_sqr(self)
    }
    fn real_zero() -> f64 {
        0.0
    }
    fn real_add(a: &f64, b: &f64) -> f64 {
        a + b
    }
}

/// A λ-Dirichlet polynomial with exact complex-rational coefficients.
#[derive(Clone, Debug)]
pub struct DirichletPolynomial {
    freq: Arc<Frequency>,
    terms: Vec<(usize, CRational)>,
}

fn normalize_terms<C: Coeff>(
    freq: &Frequency,
    mut terms: Vec<(usize, C)>,
) -> Result<Vec<(usize, C)>> {
    if let Some((i, _)) = terms.iter().find(|(i, _)| *i >= freq.len()) {
        return Err(Error::Invalid(format!(
            "coefficient index {i} outside a frequency of length {}",
            freq.len()
        )));
    }
    terms.sort_by_key(|(i, _)| *i);
    let mut out: Vec<(usize, C)> = Vec::with_capacity(terms.len());
    for (i, c) in terms {
        match out.last_mut() {
            Some((j, d)) if *j == i => d.add_assign(&c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    Ok(out)
}

impl DirichletPolynomial {
    pub fn new(freq: Arc<Frequency>, terms: Vec<(usize, CRational)>) -> Result<Self> {
        let terms = normalize_terms(&freq, terms)?;
        Ok(DirichletPolynomial { freq, terms })
    }

    /// All coefficients equal to one on the given indices.
    pub fn ones(freq: Arc<Frequency>, indices: &[usize]) -> Result<Self> {
        let one = Complex::new(Rational::one(), Rational::zero());
        Self::new(freq, indices.iter().map(|&i| (i, one.clone())).collect())
    }

    pub fn frequency(&self) -> &Arc<Frequency> {
        &self.freq
    }

    pub fn terms(&self) -> &[(usize, CRational)] {
        &self.terms
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms.iter().map(|(i, _)| *i).collect()
    }

    pub fn support_values(&self) -> Vec<ExactReal> {
        self.terms
            .iter()
            .map(|(i, _)| self.freq.values()[*i].clone())
            .collect()
    }

    pub fn coeffs(&self) -> Vec<CRational> {
        self.terms.iter().map(|(_, c)| c.clone()).collect()
    }

    /// ‖D‖_2² = Σ |a_n|².
    pub fn l2_squared(&self) -> Rational {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    /// Multiply every coefficient by `c`.
    pub fn scaled(&self, c: &CRational) -> Self {
        DirichletPolynomial {
            freq: self.freq.clone(),
            terms: self.terms.iter().map(|(i, a)| (*i, a * c)).collect(),
        }
    }
}

/// D_σ with certified-interval coefficients a_n e^{-λ_n σ}.
#[derive(Clone, Debug)]
pub struct IntervalPolynomial {
    freq: Arc<Frequency>,
    terms: Vec<(usize, CInterval)>,
}

impl IntervalPolynomial {
    pub fn frequency(&self) -> &Arc<Frequency> {
        &self.freq
    }

    pub fn terms(&self) -> &[(usize, CInterval)] {
        &self.terms
    }

    pub fn l2_squared(&self) -> Interval {
        self.terms.iter().fold(Interval::zero(), |acc, (_, c)| {
            CInterval::real_add(&acc, &c.norm_sqr())
        })
    }
}

#[derive(Clone, Debug)]
pub enum Translated {
    /// σ = 0: the polynomial itself.
    Exact(DirichletPolynomial),
    Interval(IntervalPolynomial),
}

impl Translated {
    pub fn l2_squared(&self) -> Interval {
        match self {
            Translated::Exact(d) => Interval::point(d.l2_squared()),
            Translated::Interval(d) => d.l2_squared(),
        }
    }
}

/// Enclosure of e^{-λ σ}.
pub fn damping(lambda: &ExactReal, sigma: &Interval) -> Interval {
    lambda.enclosure().mul(sigma).neg().exp(INTERVAL_PRECISION)
}

/// τ_σ D = Σ a_n e^{-λ_n σ} e^{-λ_n s}; σ may be any enclosed real of either sign.
pub fn translate(d: &DirichletPolynomial, sigma: &Interval) -> Translated {
    if sigma.is_point() && sigma.lo().is_zero() {
        return Translated::Exact(d.clone());
    }
    let terms = d
        .terms
        .iter()
        .map(|(i, a)| {
            let f = damping(&d.freq.values()[*i], sigma);
            (
                *i,
                CInterval {
                    re: f.scale(&a.re),
                    im: f.scale(&a.im),
                },
            )
        })
        .collect();
    Translated::Interval(IntervalPolynomial {
        freq: d.freq.clone(),
        terms,
    })
}

pub fn translate_rational(d: &DirichletPolynomial, sigma: &Rational) -> Translated {
    translate(d, &Interval::point(sigma.clone()))
}

fn leaf_multiplicity(idx: &[usize], fact: &[u128]) -> u128 {
    let mut m = fact[idx.len()];
    let mut run = 1;
    for w in idx.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            m /= fact[run];
            run = 1;
        }
    }
    m / fact[run]
}

struct Multisets<'a, K, C: Coeff> {
    ks: &'a KeySet<K>,
    coeffs: &'a [C],
    k: usize,
    fact: Vec<u128>,
    idx: Vec<usize>,
    acc: FxMap<K, C>,
}

impl<K: SumKey, C: Coeff> Multisets<'_, K, C> {
    fn walk(&mut self, start: usize, prod: &C, sum: &K) {
        if self.idx.len() == self.k {
            let term = prod.scale(leaf_multiplicity(&self.idx, &self.fact));
            self.acc
                .entry(sum.clone())
                .or_insert_with(C::zero)
                .add_assign(&term);
            return;
        }
        for i in start..self.coeffs.len() {
            let p = if self.idx.is_empty() {
                self.coeffs[i].clone()
            } else {
                prod.mul(&self.coeffs[i])
            };
            let s = sum.combine(&self.ks.keys[i]);
            self.idx.push(i);
            self.walk(i, &p, &s);
            self.idx.pop();
        }
    }
}

/// Σ_s |Σ_{multisets with sum s} multinomial · Π a|², enumerating multisets.
fn moment_multisets<K: SumKey, C: Coeff>(ks: &KeySet<K>, coeffs: &[C], k: u32) -> C::Real {
    let mut fact = vec![1u128; k as usize + 1];
    for i in 1..=k as usize {
        fact[i] = fact[i - 1] * i as u128;
    }
    let mut m = Multisets {
        ks,
        coeffs,
        k: k as usize,
        fact,
        idx: Vec::new(),
        acc: FxMap::default(),
    };
    m.walk(0, &C::zero(), &ks.identity);
    m.acc
        .values()
        .fold(C::real_zero(), |s, c| C::real_add(&s, &c.norm_sqr()))
}

/// Same moment via dense convolution over lattice offsets.
fn moment_dense<C: Coeff>(offsets: &[u64], coeffs: &[C], k: u32) -> C::Real {
    let s = offsets.iter().max().copied().unwrap_or(0) as usize + 1;
    let mut base = vec![C::zero(); s];
    for (&t, c) in offsets.iter().zip(coeffs) {
        base[t as usize] = c.clone();
    }
    let mut cur = base.clone();
    for _ in 1..k {
        let mut next = vec![C::zero(); cur.len() + s - 1];
        for (i, a) in cur.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (&t, c) in offsets.iter().zip(coeffs) {
                next[i + t as usize].add_assign(&a.mul(c));
            }
        }
        cur = next;
    }
    cur.iter()
        .fold(C::real_zero(), |acc, c| C::real_add(&acc, &c.norm_sqr()))
}

/// ‖D‖_{2k}^{2k} for coefficients `coeffs` on the distinct values `values`.
pub fn even_moment<C: Coeff>(
    reg: &crate::exactreal::Registry,
    values: &[ExactReal],
    coeffs: &[C],
    k: u32,
    budget: u64,
) -> Result<C::Real> {
    if k == 0 {
        return Err(Error::Invalid("moment order k must be >= 1".into()));
    }
    if values.is_empty() {
        return Ok(C::real_zero());
    }
    let emb = Embedding::new(reg, values, k)?;
    let n = values.len() as u128;
    let multisets = crate::util::binomial(n as u64 + k as u64 - 1, k as u64);
    let dense_cost = emb.lattice_offsets().map(|off| {
        let s = off.iter().max().copied().unwrap_or(0) as u128 + 1;
        (1..k as u128).map(|i| (i * (s - 1) + 1) * n).sum::<u128>() / DENSE_COST_FACTOR as u128
    });
    match dense_cost {
        Some(c) if c < multisets && c <= budget as u128 => Ok(moment_dense(
            emb.lattice_offsets().expect("lattice"),
            coeffs,
            k,
        )),
        _ if multisets <= budget as u128 => {
            Ok(crate::with_keys!(emb.keyed(), ks => moment_multisets(&ks, coeffs, k)))
        }
        _ => Err(Error::size(
            "even norm enumeration",
            multisets,
            budget as u128,
            "; use a lattice-structured support or a smaller k",
        )),
    }
}

/// ‖D‖_{2k}^{2k}, exactly.
pub fn even_norm(d: &DirichletPolynomial, k: u32, budget: u64) -> Result<Rational> {
    even_moment(
        d.freq.registry(),
        &d.support_values(),
        &d.coeffs(),
        k,
        budget,
    )
}

/// ‖D‖_{2k}^{2k} of a translated polynomial, as a certified enclosure.
pub fn even_norm_translated(t: &Translated, k: u32, budget: u64) -> Result<Interval> {
    match t {
        Translated::Exact(d) => even_norm(d, k, budget).map(Interval::point),
        Translated::Interval(d) => {
            let values: Vec<ExactReal> = d
                .terms
                .iter()
                .map(|(i, _)| d.freq.values()[*i].clone())
                .collect();
            let coeffs: Vec<CInterval> = d.terms.iter().map(|(_, c)| c.clone()).collect();
            even_moment(d.freq.registry(), &values, &coeffs, k, budget)
        }
    }
}

/// Certified enclosure of ‖D‖_{2k} from the exact moment.
pub fn even_p_norm(moment: &Rational, k: u32, prec: u32) -> Interval {
    interval::nth_root(moment, 2 * k, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::{rat, rat_int};
    use crate::frequency::gen_log_integers;

    fn c(re: i64, im: i64) -> CRational {
        Complex::new(rat_int(re), rat_int(im))
    }

    #[test]
    fn two_logs_fourth_moment() {
        // D = 2^{-s} + 3^{-s}: products 4, 6, 6, 9
        let f = Arc::new(gen_log_integers(3).unwrap());
        let d = DirichletPolynomial::new(f, vec![(1, c(1, 0)), (2, c(1, 0))]).unwrap();
        assert_eq!(even_norm(&d, 2, 1000).unwrap(), rat_int(6));
        assert_eq!(even_norm(&d, 1, 1000).unwrap(), rat_int(2));
    }

    #[test]
    fn parseval_for_k1() {
        let f = Arc::new(gen_log_integers(10).unwrap());
        let d = DirichletPolynomial::new(
            f,
            vec![
                (0, c(1, 2)),
                (3, c(-3, 1)),
                (9, Complex::new(rat(1, 2), rat_int(0))),
            ],
        )
        .unwrap();
        assert_eq!(even_norm(&d, 1, 1000).unwrap(), d.l2_squared());
    }

    #[test]
    fn translation_at_zero_is_identity() {
        let f = Arc::new(gen_log_integers(5).unwrap());
        let d = DirichletPolynomial::new(f, vec![(1, c(1, 1)), (4, c(2, 0))]).unwrap();
        assert!(matches!(
            translate_rational(&d, &rat_int(0)),
            Translated::Exact(_)
        ));
    }

    #[test]
    fn translated_l2_matches_damped_parseval() {
        let f = Arc::new(gen_log_integers(5).unwrap());
        let d = DirichletPolynomial::new(f, vec![(1, c(1, 1)), (4, c(2, 0))]).unwrap();
        let t = translate_rational(&d, &rat(1, 2));
        // |1+i|^2 2^{-1} + 4 * 5^{-1} = 1 + 4/5
        let l2 = even_norm_translated(&t, 1, 1000).unwrap();
        assert!(l2.contains(&rat(9, 5)));
        assert!(l2.width() < rat(1, 1_000_000_000));
    }

    #[test]
    fn dense_and_multiset_paths_agree() {
        let reg = crate::exactreal::RegistryBuilder::new().build();
        let vals: Vec<_> = [0, 1, 3, 4]
            .iter()
            .map(|&x| reg.rational(rat_int(x)))
            .collect();
        let co = vec![c(1, 0), c(0, 1), c(2, -1), c(1, 1)];
        let emb = Embedding::new(&reg, &vals, 3).unwrap();
        let off = emb.lattice_offsets().unwrap();
        for k in 1..=3 {
            let a = moment_dense(off, &co, k);
            let b = with_keys_test(&emb, &co, k);
            assert_eq!(a, b);
        }
    }

    fn with_keys_test(emb: &Embedding, co: &[CRational], k: u32) -> Rational {
        crate::with_keys!(emb.keyed(), ks => moment_multisets(&ks, co, k))
    }
}
