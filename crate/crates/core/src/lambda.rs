//! Bounds on Λ_{q,p}(A), the best constant in ‖D‖_q ≤ C‖D‖_p over
//! polynomials supported on A, and transfer between exponent pairs.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dirichlet::{even_moment, CRational, DirichletPolynomial};
use crate::energy::{subset_energy_sup, FxMap, SubsetMode, SubsetSup};
use crate::error::{Error, Result};
use crate::exactreal::{interval, rat_int, Interval, Rational};
use crate::frequency::Frequency;
use crate::keys::{Embedding, KeySet, SumKey};
use crate::rng::{substream, unit_f64};
use crate::util::{binomial, par_map};

type C64 = Complex<f64>;

/// An exponent in [1, ∞].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub fn int(p: i64) -> Self {
        Exponent::Finite(rat_int(p))
    }

    /// 1/p, with 1/∞ = 0.
    pub fn recip(&self) -> Rational {
        match self {
            Exponent::Finite(p) => p.recip(),
            Exponent::Infinite => Rational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(p) => crate::exactreal::rat_to_f64(p),
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Exponent::Finite(p) => p.is_positive(),
            Exponent::Infinite => true,
        }
    }

    /// The even integer p, if any.
    pub fn even_integer(&self) -> Option<u32> {
        match self {
            Exponent::Finite(p) if p.is_integer() => {
                p.to_integer().to_u32().filter(|q| q % 2 == 0 && *q > 0)
            }
            _ => None,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(other.recip().cmp(&self.recip()))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

/// Largest power tried when normalizing base^exponent.
const ROOT_SEARCH: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    /// base^exponent with base > 0 (or the point 0), normalized so that the
    /// base is not a perfect power; equal values have equal representations.
    Power { base: Rational, exponent: Rational },
    /// A floating-point value without a certificate.
    Numeric(f64),
}

impl BoundValue {
    pub fn rational(x: Rational) -> Self {
        BoundValue::power(x, Rational::one())
    }

    pub fn one() -> Self {
        BoundValue::rational(Rational::one())
    }

    pub fn power(base: Rational, exponent: Rational) -> Self {
        assert!(!base.is_negative(), "negative base");
        if base.is_zero() {
            return BoundValue::Power {
                base,
                exponent: Rational::one(),
            };
        }
        if base.is_one() || exponent.is_zero() {
            return BoundValue::Power {
                base: Rational::one(),
                exponent: Rational::one(),
            };
        }
        let (mut base, mut exponent) = (base, exponent);
        for m in (2..=ROOT_SEARCH).rev() {
            if let Some(r) = interval::exact_root(&base, m) {
                base = r;
                exponent *= rat_int(m as i64);
                break;
            }
        }
        if exponent.is_integer() {
            if let Some(e) = exponent
                .to_integer()
                .to_i32()
                .filter(|e| e.unsigned_abs() <= ROOT_SEARCH)
            {
                let v = num_traits::pow(base, e.unsigned_abs() as usize);
                let v = if e < 0 { v.recip() } else { v };
                return BoundValue::Power {
                    base: v,
                    exponent: Rational::one(),
                };
            }
        }
        BoundValue::Power { base, exponent }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            BoundValue::Power { base, exponent } if exponent.is_one() => Some(base),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, BoundValue::Power { .. })
    }

    pub fn value(&self) -> f64 {
        match self {
            BoundValue::Power { base, exponent } => {
                if base.is_zero() {
                    return 0.0;
                }
                let e = crate::exactreal::rat_to_f64(exponent);
                let b = crate::exactreal::rat_to_f64(base);
                if b.is_normal() && b.is_finite() {
                    libm::pow(b, e)
                } else {
                    libm::exp(e * ln_f64(base))
                }
            }
            BoundValue::Numeric(v) => *v,
        }
    }

    pub fn enclosure(&self, prec: u32) -> Option<Interval> {
        match self {
            BoundValue::Power { base, exponent } => {
                Interval::point(base.clone()).pow_rational(exponent, prec)
            }
            BoundValue::Numeric(_) => None,
        }
    }

    /// self^alpha.
    pub fn pow(&self, alpha: &Rational) -> Self {
        match self {
            BoundValue::Power { base, exponent } => {
                BoundValue::power(base.clone(), exponent * alpha)
            }
            BoundValue::Numeric(v) => {
                BoundValue::Numeric(libm::pow(*v, crate::exactreal::rat_to_f64(alpha)))
            }
        }
    }

    /// Certified comparison, refining up to `cap` bits; `None` for numeric
    /// values or an unresolved tie.
    pub fn certified_cmp(&self, other: &BoundValue, cap: u32) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        let mut prec = 64;
        while prec <= cap {
            let (a, b) = (self.enclosure(prec)?, other.enclosure(prec)?);
            if let Some(o) = a.cmp_certain(&b) {
                return Some(o);
            }
            prec *= 2;
        }
        None
    }
}

fn ln_f64(x: &Rational) -> f64 {
    ln_big(x.numer()) - ln_big(x.denom())
}

fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return libm::log(n.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    libm::log((n >> shift).to_f64().unwrap_or(f64::INFINITY))
        + shift as f64 * core::f64::consts::LN_2
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Power { base, exponent } if exponent.is_one() => write!(f, "{base}"),
            BoundValue::Power { base, exponent } => write!(f, "({base})^({exponent})"),
            BoundValue::Numeric(v) => write!(f, "~{v}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Caveat {
    /// Depends on a universal constant that is never quantified (taken as 1).
    UniversalConstant,
    /// Built on a subset supremum that was only searched heuristically.
    HeuristicSup,
    /// Floating-point estimate without a certificate.
    NumericOnly,
    /// Obtained by a transfer between exponent pairs rather than directly.
    Transfer,
}

impl Caveat {
    pub fn tag(self) -> &'static str {
        match self {
            Caveat::UniversalConstant => "universal-constant",
            Caveat::HeuristicSup => "heuristic-sup",
            Caveat::NumericOnly => "numeric-only",
            Caveat::Transfer => "transfer",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundMethod {
    Trivial,
    Energy {
        exact: bool,
    },
    Ascent {
        restarts: u32,
    },
    Nikolskii,
    EnergyUpper,
    Interpolated {
        from_p: Exponent,
        from_q: Exponent,
        alpha: Rational,
    },
}

impl BoundMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            BoundMethod::Trivial => "trivial",
            BoundMethod::Energy { exact: true } => "energy-exact",
            BoundMethod::Energy { exact: false } => "energy-greedy",
            BoundMethod::Ascent { .. } => "ascent",
            BoundMethod::Nikolskii => "nikolskii",
            BoundMethod::EnergyUpper => "energy-upper",
            BoundMethod::Interpolated { .. } => "interpolated",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub value: BoundValue,
    pub method: BoundMethod,
    pub caveats: Vec<Caveat>,
}

impl Bound {
    pub fn is_caveat_free(&self) -> bool {
        self.caveats.is_empty() && self.value.is_certified()
    }

    fn trivial() -> Self {
        Bound {
            value: BoundValue::one(),
            method: BoundMethod::Trivial,
            caveats: vec![],
        }
    }
}

#[derive(Clone, Debug)]
pub struct LambdaBoundReport {
    pub set: String,
    pub set_size: usize,
    pub p: Exponent,
    pub q: Exponent,
    pub lower: Bound,
    pub upper: Option<Bound>,
    /// A polynomial attaining the lower bound.
    pub witness: Option<DirichletPolynomial>,
}

impl LambdaBoundReport {
    /// lower ≤ upper, decided with certified arithmetic when both sides are
    /// caveat-free; `None` otherwise.
    pub fn is_consistent(&self) -> Option<bool> {
        let up = self.upper.as_ref().filter(|u| u.is_caveat_free())?;
        if !self.lower.is_caveat_free() {
            return None;
        }
        self.lower
            .value
            .certified_cmp(&up.value, 1024)
            .map(|o| o != Ordering::Greater)
    }
}

/// A short human-readable name for a subset of a frequency.
pub fn describe_set(freq: &Frequency, indices: &[usize]) -> String {
    let contiguous = indices.windows(2).all(|w| w[1] == w[0] + 1);
    match (indices.first(), indices.last()) {
        (Some(a), Some(b)) if contiguous => format!("{}[{}..{}]", freq.provenance(), a, b + 1),
        (None, _) => format!("{}[]", freq.provenance()),
        _ if indices.len() <= 8 => format!("{}{:?}", freq.provenance(), indices),
        _ => format!("{}[{} of {}]", freq.provenance(), indices.len(), freq.len()),
    }
}

/// Λ_{2k,2}(A) ≥ sup_{A'⊆A} E_k(A')^{1/2k} / √#A'.
pub fn lambda_lower_energy(
    freq: &Arc<Frequency>,
    indices: &[usize],
    k: u32,
    mode: SubsetMode,
    budget: u64,
) -> Result<LambdaBoundReport> {
    let sup = subset_energy_sup(freq.registry(), &freq.select(indices), k, mode, budget)?;
    report_from_energy_sup(freq, indices, &sup)
}

/// The energy lower bound for a subset supremum already computed on `indices`.
pub fn report_from_energy_sup(
    freq: &Arc<Frequency>,
    indices: &[usize],
    sup: &SubsetSup,
) -> Result<LambdaBoundReport> {
    let (lower, witness) = if sup.subset.is_empty() {
        (Bound::trivial(), None)
    } else {
        let value = BoundValue::power(sup.ratio_pow(), Rational::new(1.into(), (2 * sup.k).into()));
        let sub: Vec<usize> = sup.subset.iter().map(|&i| indices[i]).collect();
        (
            Bound {
                value,
                method: BoundMethod::Energy { exact: sup.exact },
                caveats: vec![],
            },
            Some(DirichletPolynomial::ones(freq.clone(), &sub)?),
        )
    };
    Ok(LambdaBoundReport {
        set: describe_set(freq, indices),
        set_size: indices.len(),
        p: Exponent::int(2),
        q: Exponent::int(2 * sup.k as i64),
        lower,
        upper: None,
        witness,
    })
}

/// Λ_{q,p}(A) ≤ (#A)^{1/p - 1/q} for 1 ≤ p ≤ 2, p ≤ q ≤ ∞.
pub fn lambda_upper_nikolskii(n: usize, p: &Exponent, q: &Exponent) -> Result<Bound> {
    let pr = p.recip();
    let ok =
        matches!(p, Exponent::Finite(x) if *x >= rat_int(1) && *x <= rat_int(2)) && pr >= q.recip();
    if !ok {
        return Err(Error::Domain(format!(
            "Nikolskii bound needs 1 <= p <= 2 and p <= q, got p={p}, q={q}"
        )));
    }
    let value = if n == 0 {
        BoundValue::one()
    } else {
        BoundValue::power(rat_int(n as i64), pr - q.recip())
    };
    Ok(Bound {
        value,
        method: BoundMethod::Nikolskii,
        caveats: vec![],
    })
}

/// √log(#A+2) · sup-ratio, with the unknown universal constant set to 1.
pub fn lambda_upper_energy(n: usize, sup: &SubsetSup) -> Bound {
    let ratio = if sup.subset.is_empty() {
        1.0
    } else {
        sup.ratio()
    };
    let mut caveats = vec![Caveat::UniversalConstant];
    if !sup.exact {
        caveats.push(Caveat::HeuristicSup);
    }
    Bound {
        value: BoundValue::Numeric(libm::sqrt(libm::log(n as f64 + 2.0)) * ratio),
        method: BoundMethod::EnergyUpper,
        caveats,
    }
}

/// α = (1/p1 - 1/q1) / (1/p2 - 1/q2).
pub fn interpolation_exponent(
    p2: &Exponent,
    q2: &Exponent,
    p1: &Exponent,
    q1: &Exponent,
) -> Result<Rational> {
    let ok = p1.is_positive()
        && p1 <= p2
        && p2 < q2
        && p1 <= q1
        && q1 <= q2
        && !matches!(p2, Exponent::Infinite);
    if !ok {
        return Err(Error::Domain(format!("transfer needs 0 < p1 <= p2 < q2 <= inf and p1 <= q1 <= q2; got ({p2},{q2}) -> ({p1},{q1})")));
    }
    Ok((p1.recip() - q1.recip()) / (p2.recip() - q2.recip()))
}

/// Transfers the upper bound of `source` at (p2, q2) to (p1, q1) via
/// Λ_{q1,p1} ≤ Λ_{q2,p2}^α.
pub fn interpolate_bound(
    source: &LambdaBoundReport,
    p1: &Exponent,
    q1: &Exponent,
) -> Result<LambdaBoundReport> {
    let alpha = interpolation_exponent(&source.p, &source.q, p1, q1)?;
    let up = source
        .upper
        .as_ref()
        .ok_or_else(|| Error::Invalid("source report carries no upper bound".into()))?;
    let upper = Bound {
        value: up.value.pow(&alpha),
        method: BoundMethod::Interpolated {
            from_p: source.p.clone(),
            from_q: source.q.clone(),
            alpha,
        },
        caveats: up.caveats.clone(),
    };
    Ok(LambdaBoundReport {
        set: source.set.clone(),
        set_size: source.set_size,
        p: p1.clone(),
        q: q1.clone(),
        lower: Bound::trivial(),
        upper: Some(upper),
        witness: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AscentConfig {
    pub restarts: u32,
    pub max_iters: u32,
    pub seed: u64,
    pub budget: u64,
    pub mode: SubsetMode,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            restarts: 32,
            max_iters: 300,
            seed: 0,
            budget: crate::energy::DEFAULT_BUDGET,
            mode: SubsetMode::Auto,
        }
    }
}

/// Witnesses are rounded to this many fractional bits before certification.
const WITNESS_BITS: u32 = 40;

/// Coefficients of P^j for j = 0..=k, indexed by sum key.
fn powers<K: SumKey>(ks: &KeySet<K>, a: &[C64], k: u32) -> Vec<FxMap<K, C64>> {
    let mut out: Vec<FxMap<K, C64>> = Vec::with_capacity(k as usize + 1);
    let mut id = FxMap::default();
    id.insert(ks.identity.clone(), C64::new(1.0, 0.0));
    out.push(id);
    for j in 1..=k as usize {
        let mut next: FxMap<K, C64> = FxMap::default();
        for (s, c) in &out[j - 1] {
            for (key, x) in ks.keys.iter().zip(a) {
                if x.re != 0.0 || x.im != 0.0 {
                    *next.entry(s.combine(key)).or_insert(C64::new(0.0, 0.0)) += c * x;
                }
            }
        }
        out.push(next);
    }
    out
}

/// log(‖P‖_{2k}^{2k} / ‖P‖_2^{2k}) and its gradient in the conjugate coefficients.
fn objective<K: SumKey>(ks: &KeySet<K>, a: &[C64], k: u32, grad: bool) -> (f64, Vec<C64>) {
    let pw = powers(ks, a, k);
    let top = &pw[k as usize];
    let m: f64 = top.values().map(|c| c.norm_sqr()).sum();
    let m2: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let val = libm::log(m) - k as f64 * libm::log(m2);
    if !grad {
        return (val, vec![]);
    }
    let below = &pw[k as usize - 1];
    let g = ks
        .keys
        .iter()
        .zip(a)
        .map(|(key, x)| {
            let mut acc = C64::new(0.0, 0.0);
            for (t, c) in below {
                if let Some(ct) = top.get(&t.combine(key)) {
                    acc += ct * c.conj();
                }
            }
            acc * (k as f64 / m) - x * (k as f64 / m2)
        })
        .collect();
    (val, g)
}

fn normalize(a: &mut [C64]) {
    let n = libm::sqrt(a.iter().map(|x| x.norm_sqr()).sum::<f64>());
    if n > 0.0 {
        a.iter_mut().for_each(|x| *x /= n);
    }
}

fn ascend<K: SumKey>(ks: &KeySet<K>, mut a: Vec<C64>, k: u32, iters: u32) -> Vec<C64> {
    normalize(&mut a);
    let (mut val, mut g) = objective(ks, &a, k, true);
    let mut eta = 1.0;
    for _ in 0..iters {
        let mut improved = false;
        for _ in 0..40 {
            let mut b: Vec<C64> = a.iter().zip(&g).map(|(x, d)| x + d * eta).collect();
            normalize(&mut b);
            let (v, _) = objective(ks, &b, k, false);
            if v > val {
                let gain = v - val;
                a = b;
                val = v;
                improved = gain > 1e-14;
                eta *= 2.0;
                break;
            }
            eta *= 0.5;
        }
        if !improved {
            break;
        }
        g = objective(ks, &a, k, true).1;
    }
    a
}

fn dyadic(x: f64) -> Rational {
    let scale = (1u64 << WITNESS_BITS) as f64;
    Rational::new(
        BigInt::from(libm::round(x * scale) as i64),
        BigInt::from(1u64 << WITNESS_BITS),
    )
}

/// Λ_{q,2}(A) ≥ max ‖D‖_q / ‖D‖_2 over multi-restart projected gradient
/// ascent, with restart 0 started from the energy witness. Every candidate
/// is rounded to dyadic coefficients and its ratio certified exactly.
pub fn lambda_lower_ascent(
    freq: &Arc<Frequency>,
    indices: &[usize],
    q: u32,
    cfg: &AscentConfig,
) -> Result<LambdaBoundReport> {
    if q < 2 || !q.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "ascent needs an even exponent q >= 2, got {q}"
        )));
    }
    let k = q / 2;
    let reg = freq.registry();
    let values = freq.select(indices);
    let n = values.len();
    let sup = subset_energy_sup(reg, &values, k, cfg.mode, cfg.budget)?;
    let mut report = report_from_energy_sup(freq, indices, &sup)?;
    report.lower.method = BoundMethod::Ascent {
        restarts: cfg.restarts,
    };
    if n <= 1 || k == 1 {
        return Ok(report);
    }
    let cost: u128 = (1..=k as u64)
        .map(|j| binomial(n as u64 + j - 1, j).min((n as u128).pow(j as u32 - 1)) * n as u128)
        .sum();
    let certify = binomial(n as u64 + k as u64 - 1, k as u64);
    if cost.max(certify) > cfg.budget as u128 {
        return Err(Error::size(
            "ascent objective",
            cost.max(certify),
            cfg.budget as u128,
            "; use lambda_lower_energy for large sets",
        ));
    }
    let emb = Embedding::new(reg, &values, k)?;
    let mut starts: Vec<Vec<C64>> = Vec::with_capacity(cfg.restarts as usize);
    let mut w0 = vec![C64::new(0.0, 0.0); n];
    sup.subset.iter().for_each(|&i| w0[i] = C64::new(1.0, 0.0));
    starts.push(w0);
    for r in 1..cfg.restarts as u64 {
        let mut rng = substream(cfg.seed, "ascent", r);
        starts.push(
            (0..n)
                .map(|_| C64::new(unit_f64(&mut rng) - 0.5, unit_f64(&mut rng) - 0.5))
                .collect(),
        );
    }
    let finals: Vec<Vec<C64>> = crate::with_keys!(emb.keyed(), ks => par_map(&starts, |s| ascend(&ks, s.clone(), k, cfg.max_iters)));

    let mut best = match &report.lower.value {
        BoundValue::Power { .. } => sup.ratio_pow(),
        BoundValue::Numeric(_) => unreachable!("energy bounds are exact"),
    };
    let mut best_coeffs: Option<Vec<CRational>> = None;
    for a in finals {
        let top = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if top == 0.0 {
            continue;
        }
        let coeffs: Vec<CRational> = a
            .iter()
            .map(|x| Complex::new(dyadic(x.re / top), dyadic(x.im / top)))
            .collect();
        let m2: Rational = coeffs.iter().map(|c| &c.re * &c.re + &c.im * &c.im).sum();
        if m2.is_zero() {
            continue;
        }
        let mq = even_moment(reg, &values, &coeffs, k, cfg.budget)?;
        let base = mq / num_traits::pow(m2, k as usize);
        if base > best {
            best = base;
            best_coeffs = Some(coeffs);
        }
    }
    if let Some(coeffs) = best_coeffs {
        let terms = indices
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !(c.re.is_zero() && c.im.is_zero()))
            .map(|(&i, c)| (i, c))
            .collect();
        report.lower.value = BoundValue::power(best, Rational::new(1.into(), (2 * k).into()));
        report.witness = Some(DirichletPolynomial::new(freq.clone(), terms)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::{rat, RegistryBuilder};

    fn rational_freq(xs: &[i64]) -> Arc<Frequency> {
        let reg = RegistryBuilder::new().build();
        let vals = xs.iter().map(|&x| reg.rational(rat_int(x))).collect();
        Arc::new(Frequency::new(reg, vals, "test").unwrap())
    }

    #[test]
    fn power_normalization() {
        assert_eq!(
            BoundValue::power(rat_int(16), rat(1, 4)),
            BoundValue::rational(rat_int(2))
        );
        assert_eq!(
            BoundValue::power(rat_int(16), rat(3, 8)),
            BoundValue::power(rat_int(2), rat(3, 2))
        );
        assert_eq!(
            BoundValue::power(rat(1, 9), rat(1, 2)),
            BoundValue::rational(rat(1, 3))
        );
        assert_eq!(BoundValue::power(rat_int(7), rat(0, 1)), BoundValue::one());
        assert!(
            (BoundValue::power(rat_int(19), rat(1, 4)).value() - libm::pow(19.0, 0.25)).abs()
                < 1e-15
        );
    }

    #[test]
    fn energy_lower_on_three_point_ap() {
        let f = rational_freq(&[0, 1, 2]);
        let r = lambda_lower_energy(&f, &[0, 1, 2], 2, SubsetMode::Exact, 1000).unwrap();
        assert_eq!(r.lower.value, BoundValue::power(rat(19, 9), rat(1, 4)));
        assert!((r.lower.value.value() - 1.2054).abs() < 1e-4);
    }

    #[test]
    fn singleton_bounds() {
        let f = rational_freq(&[5]);
        let r = lambda_lower_energy(&f, &[0], 2, SubsetMode::Exact, 1000).unwrap();
        assert_eq!(r.lower.value, BoundValue::one());
        let a = lambda_lower_ascent(&f, &[0], 4, &AscentConfig::default()).unwrap();
        assert_eq!(a.lower.value, BoundValue::one());
        let sup = subset_energy_sup(f.registry(), f.values(), 2, SubsetMode::Exact, 100).unwrap();
        let u = lambda_upper_energy(1, &sup);
        assert!((u.value.value() - libm::sqrt(libm::log(3.0))).abs() < 1e-15);
        assert_eq!(u.caveats, vec![Caveat::UniversalConstant]);
    }

    #[test]
    fn ascent_on_two_points() {
        let f = rational_freq(&[0, 1]);
        let r = lambda_lower_ascent(&f, &[0, 1], 4, &AscentConfig::default()).unwrap();
        let opt = libm::pow(1.5, 0.25);
        assert!(r.lower.value.value() <= opt + 1e-12);
        assert!(r.lower.value.value() >= opt - 1e-9);
    }

    #[test]
    fn nikolskii_values() {
        let b = lambda_upper_nikolskii(4, &Exponent::int(2), &Exponent::int(4)).unwrap();
        assert!((b.value.value() - libm::sqrt(2.0)).abs() < 1e-15);
        assert_eq!(
            lambda_upper_nikolskii(9, &Exponent::int(2), &Exponent::int(2))
                .unwrap()
                .value,
            BoundValue::one()
        );
        assert_eq!(
            lambda_upper_nikolskii(9, &Exponent::int(2), &Exponent::Infinite)
                .unwrap()
                .value,
            BoundValue::rational(rat_int(3))
        );
        assert!(lambda_upper_nikolskii(9, &Exponent::int(3), &Exponent::int(4)).is_err());
        assert!(
            lambda_upper_nikolskii(9, &Exponent::int(2), &Exponent::Finite(rat(3, 2))).is_err()
        );
    }

    #[test]
    fn transfer_reproduces_direct_bound() {
        let f = rational_freq(&(0..16).collect::<Vec<_>>());
        let idx: Vec<usize> = (0..16).collect();
        let mut src = lambda_lower_energy(&f, &idx, 4, SubsetMode::Greedy, 100_000).unwrap();
        src.upper = Some(lambda_upper_nikolskii(16, &Exponent::int(2), &Exponent::int(8)).unwrap());
        let alpha = interpolation_exponent(
            &Exponent::int(2),
            &Exponent::int(8),
            &Exponent::int(2),
            &Exponent::int(4),
        )
        .unwrap();
        assert_eq!(alpha, rat(2, 3));
        let t = interpolate_bound(&src, &Exponent::int(2), &Exponent::int(4)).unwrap();
        assert_eq!(t.upper.unwrap().value, BoundValue::rational(rat_int(2)));
        let same = interpolate_bound(&src, &Exponent::int(2), &Exponent::int(8)).unwrap();
        assert_eq!(same.upper.unwrap().value, src.upper.unwrap().value);
    }

    #[test]
    fn certified_comparison() {
        let a = BoundValue::power(rat(19, 9), rat(1, 4));
        let b = BoundValue::power(rat_int(3), rat(1, 4));
        assert_eq!(a.certified_cmp(&b, 1024), Some(Ordering::Less));
        assert_eq!(a.certified_cmp(&BoundValue::Numeric(2.0), 1024), None);
    }
}
