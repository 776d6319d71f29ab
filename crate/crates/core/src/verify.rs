//! A self-checking suite of norm inequalities on seeded random polynomials.
//!
//! Every check is evaluated on p-th powers so that even norms stay exact
//! rationals; only the exponentials of translation and the fractional powers
//! of Hausdorff–Young go through certified intervals.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex;
use num_traits::{Signed, Zero};

use crate::dirichlet::{
    damping, even_norm, even_norm_translated, translate, DirichletPolynomial, INTERVAL_PRECISION,
};
use crate::energy::{additive_energy, SubsetMode};
use crate::error::{Error, Result};
use crate::exactreal::{rat, rat_int, rat_to_f64, Interval, Rational};
use crate::frequency::{floyd_sample, Frequency};
use crate::lambda::{
    interpolate_bound, lambda_lower_ascent, lambda_lower_energy, lambda_upper_nikolskii,
    AscentConfig, Exponent,
};
use crate::rng::{below, substream};
use crate::util::par_map;

/// Allowed relative shortfall for interval-valued checks.
pub const INTERVAL_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Nikolskii,
    Littlewood,
    HausdorffYoung,
    Translation,
    Corona,
    EnergyLower,
    Transfer,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Nikolskii,
        Check::Littlewood,
        Check::HausdorffYoung,
        Check::Translation,
        Check::Corona,
        Check::EnergyLower,
        Check::Transfer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Nikolskii => "nikolskii",
            Check::Littlewood => "littlewood",
            Check::HausdorffYoung => "hausdorff-young",
            Check::Translation => "translation",
            Check::Corona => "corona",
            Check::EnergyLower => "energy-lower",
            Check::Transfer => "transfer",
        }
    }

    pub fn parse(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub checks: Vec<Check>,
    pub instances: usize,
    pub max_terms: usize,
    /// Coefficients are drawn from {-c..c} + i{-c..c}.
    pub coeff_range: u64,
    pub seed: u64,
    pub budget: u64,
    pub ascent_restarts: u32,
    /// Deliberately corrupt the left-hand side of every Nikolskii row.
    pub corrupt: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            checks: Check::ALL.to_vec(),
            instances: 50,
            max_terms: 8,
            coeff_range: 3,
            seed: 0,
            budget: crate::energy::DEFAULT_BUDGET,
            ascent_restarts: 4,
            corrupt: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyRow {
    pub check: Check,
    pub instance: String,
    /// (rhs - lhs) / max(1, |rhs|), from the certified side of each enclosure.
    pub margin: f64,
    pub exact: bool,
    pub passed: bool,
    /// False if the row only compares caveat-carrying quantities.
    pub caveat_free: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub frequency: String,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    /// Failing rows that carry no caveat.
    pub fn violations(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| !r.passed && r.caveat_free)
            .count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

fn rel(margin: f64, scale: f64) -> f64 {
    margin / scale.abs().max(1.0)
}

fn exact_row(check: Check, instance: String, lhs: &Rational, rhs: &Rational) -> VerifyRow {
    let margin = rel(rat_to_f64(&(rhs - lhs)), rat_to_f64(rhs));
    VerifyRow {
        check,
        instance,
        margin,
        exact: true,
        passed: lhs <= rhs,
        caveat_free: true,
    }
}

fn interval_row(check: Check, instance: String, lhs: &Interval, rhs: &Interval) -> VerifyRow {
    let margin = rel(rat_to_f64(&(rhs.lo() - lhs.hi())), rhs.hi_f64());
    VerifyRow {
        check,
        instance,
        margin,
        exact: false,
        passed: margin >= -INTERVAL_SLACK,
        caveat_free: true,
    }
}

/// A seeded random polynomial on the frequency with at most `max_terms` terms.
pub fn random_polynomial(
    f: &Arc<Frequency>,
    seed: u64,
    index: u64,
    max_terms: usize,
    coeff_range: u64,
) -> Result<DirichletPolynomial> {
    if f.is_empty() {
        return Err(Error::Invalid("empty frequency".into()));
    }
    let mut rng = substream(seed, "verify-poly", index);
    let cap = max_terms.clamp(1, f.len()) as u64;
    let n = 1 + below(&mut rng, cap);
    let idx = floyd_sample(&mut rng, f.len() as u64, n);
    let span = 2 * coeff_range + 1;
    let mut terms = Vec::with_capacity(idx.len());
    for i in idx {
        let mut c = Complex::new(Rational::zero(), Rational::zero());
        while c.re.is_zero() && c.im.is_zero() {
            let re = below(&mut rng, span) as i64 - coeff_range as i64;
            let im = below(&mut rng, span) as i64 - coeff_range as i64;
            c = Complex::new(rat_int(re), rat_int(im));
        }
        terms.push((i as usize - 1, c));
    }
    DirichletPolynomial::new(f.clone(), terms)
}

fn random_sigma(seed: u64, index: u64) -> Rational {
    // σ ∈ (0, 2] on a 1/64 grid
    let mut rng = substream(seed, "verify-sigma", index);
    rat(1 + below(&mut rng, 128) as i64, 64)
}

fn nikolskii_rows(
    d: &DirichletPolynomial,
    tag: &str,
    cfg: &VerifyConfig,
) -> Result<Vec<VerifyRow>> {
    let n = d.terms().len() as i64;
    let m2 = d.l2_squared();
    let mut out = Vec::new();
    for k in [2u32, 4] {
        // ‖D‖_q^q ≤ N^{q/2-1} ‖D‖_2^q
        let mut lhs = even_norm(d, k, cfg.budget)?;
        let rhs =
            num_traits::pow(rat_int(n), k as usize - 1) * num_traits::pow(m2.clone(), k as usize);
        if cfg.corrupt {
            lhs = &rhs * rat_int(2) + rat_int(1);
        }
        out.push(exact_row(
            Check::Nikolskii,
            format!("{tag} q={}", 2 * k),
            &lhs,
            &rhs,
        ));
    }
    Ok(out)
}

fn littlewood_row(d: &DirichletPolynomial, tag: &str, cfg: &VerifyConfig) -> Result<VerifyRow> {
    // ‖D‖_4^12 ≤ ‖D‖_2^4 ‖D‖_8^8
    let m4 = even_norm(d, 2, cfg.budget)?;
    let m8 = even_norm(d, 4, cfg.budget)?;
    let m2 = d.l2_squared();
    Ok(exact_row(
        Check::Littlewood,
        tag.into(),
        &num_traits::pow(m4, 3),
        &(num_traits::pow(m2, 2) * m8),
    ))
}

fn hausdorff_young_rows(
    d: &DirichletPolynomial,
    tag: &str,
    cfg: &VerifyConfig,
) -> Result<Vec<VerifyRow>> {
    let prec = INTERVAL_PRECISION;
    let mut out = Vec::new();
    for k in [2u32, 4] {
        let q = 2 * k as i64;
        // ‖D‖_q^q ≤ (Σ |a|^{q'})^{q-1},  |a|^{q'} = (|a|²)^{q/(2(q-1))}
        let e = rat(q, 2 * (q - 1));
        let mut s = Interval::zero();
        for (_, a) in d.terms() {
            let t = Interval::point(a.norm_sqr())
                .pow_rational(&e, prec)
                .expect("non-negative base");
            s = s.add(&t).round_outward(prec);
        }
        let rhs = s.powi(q as u32 - 1).round_outward(prec);
        let lhs = Interval::point(even_norm(d, k, cfg.budget)?);
        out.push(interval_row(
            Check::HausdorffYoung,
            format!("{tag} q={q}"),
            &lhs,
            &rhs,
        ));
    }
    Ok(out)
}

fn translation_rows(
    d: &DirichletPolynomial,
    tag: &str,
    sigma: &Rational,
    cfg: &VerifyConfig,
) -> Result<Vec<VerifyRow>> {
    let vals = d.support_values();
    let (first, last) = (
        vals.first().expect("nonempty"),
        vals.last().expect("nonempty"),
    );
    let s = Interval::point(sigma.clone());
    let t = translate(d, &s);
    let mut out = Vec::new();
    for k in [1u32, 2] {
        let p = 2 * k;
        let m = Interval::point(even_norm(d, k, cfg.budget)?);
        let mt = even_norm_translated(&t, k, cfg.budget)?;
        // e^{-pλ_M σ} ‖D‖_p^p ≤ ‖D_σ‖_p^p ≤ e^{-pλ_N σ} ‖D‖_p^p
        let lo = damping(last, &s)
            .powi(p)
            .mul(&m)
            .round_outward(INTERVAL_PRECISION);
        let hi = damping(first, &s)
            .powi(p)
            .mul(&m)
            .round_outward(INTERVAL_PRECISION);
        out.push(interval_row(
            Check::Translation,
            format!("{tag} p={p} sigma={sigma} lower"),
            &lo,
            &mt,
        ));
        out.push(interval_row(
            Check::Translation,
            format!("{tag} p={p} sigma={sigma} upper"),
            &mt,
            &hi,
        ));
    }
    Ok(out)
}

fn corona_rows(d: &DirichletPolynomial, tag: &str, cfg: &VerifyConfig) -> Result<Vec<VerifyRow>> {
    let f = d.frequency();
    let ones = DirichletPolynomial::ones(f.clone(), &d.support())?;
    let vals = d.support_values();
    let mut out = Vec::new();
    for k in [2u32, 3] {
        let e = Rational::from_integer(additive_energy(f.registry(), &vals, k, cfg.budget)?.into());
        let m = even_norm(&ones, k, cfg.budget)?;
        let ok = e == m;
        out.push(VerifyRow {
            check: Check::Corona,
            instance: format!("{tag} k={k}"),
            margin: -rat_to_f64(&(&m - &e).abs()),
            exact: true,
            passed: ok,
            caveat_free: true,
        });
    }
    Ok(out)
}

fn energy_lower_rows(
    d: &DirichletPolynomial,
    tag: &str,
    index: u64,
    cfg: &VerifyConfig,
) -> Result<Vec<VerifyRow>> {
    let f = d.frequency();
    let idx = d.support();
    let n = idx.len();
    let mut out = Vec::new();
    for k in [2u32, 3] {
        let q = Exponent::int(2 * k as i64);
        let en = lambda_lower_energy(f, &idx, k, SubsetMode::Auto, cfg.budget)?;
        let acfg = AscentConfig {
            restarts: cfg.ascent_restarts,
            seed: cfg.seed ^ index,
            budget: cfg.budget,
            ..Default::default()
        };
        let asc = lambda_lower_ascent(f, &idx, 2 * k, &acfg)?;
        let nik = lambda_upper_nikolskii(n, &Exponent::int(2), &q)?;
        for (what, a, b) in [
            ("energy<=ascent", &en.lower.value, &asc.lower.value),
            ("ascent<=nikolskii", &asc.lower.value, &nik.value),
        ] {
            let ord = a.certified_cmp(b, 1024);
            out.push(VerifyRow {
                check: Check::EnergyLower,
                instance: format!("{tag} q={} {what}", 2 * k),
                margin: rel(b.value() - a.value(), b.value()),
                exact: true,
                passed: ord != Some(Ordering::Greater),
                caveat_free: ord.is_some() || a == b,
            });
        }
    }
    Ok(out)
}

fn transfer_rows(
    d: &DirichletPolynomial,
    tag: &str,
    index: u64,
    cfg: &VerifyConfig,
) -> Result<Vec<VerifyRow>> {
    let f = d.frequency();
    let idx = d.support();
    let n = idx.len();
    let two = Exponent::int(2);
    let (q4, q8) = (Exponent::int(4), Exponent::int(8));
    let mut src = lambda_lower_energy(f, &idx, 4, SubsetMode::Auto, cfg.budget)?;
    src.upper = Some(lambda_upper_nikolskii(n, &two, &q8)?);
    let moved = interpolate_bound(&src, &two, &q4)?
        .upper
        .expect("transferred upper");
    let direct = lambda_upper_nikolskii(n, &two, &q4)?;
    let acfg = AscentConfig {
        restarts: cfg.ascent_restarts,
        seed: cfg.seed ^ index,
        budget: cfg.budget,
        ..Default::default()
    };
    let lower = lambda_lower_ascent(f, &idx, 4, &acfg)?.lower.value;
    let same = moved.value == direct.value;
    let ord = lower.certified_cmp(&moved.value, 1024);
    Ok(alloc::vec![
        VerifyRow {
            check: Check::Transfer,
            instance: format!("{tag} (2,8)->(2,4) equals direct"),
            margin: rel(
                direct.value.value() - moved.value.value(),
                direct.value.value()
            ),
            exact: true,
            passed: same,
            caveat_free: true,
        },
        VerifyRow {
            check: Check::Transfer,
            instance: format!("{tag} lower(2,4)<=transferred"),
            margin: rel(moved.value.value() - lower.value(), moved.value.value()),
            exact: true,
            passed: ord != Some(Ordering::Greater),
            caveat_free: ord.is_some(),
        },
    ])
}

fn instance_rows(f: &Arc<Frequency>, index: u64, cfg: &VerifyConfig) -> Result<Vec<VerifyRow>> {
    let d = random_polynomial(f, cfg.seed, index, cfg.max_terms, cfg.coeff_range)?;
    let tag = format!("#{index} N={}", d.terms().len());
    let mut rows = Vec::new();
    for &c in &cfg.checks {
        match c {
            Check::Nikolskii => rows.extend(nikolskii_rows(&d, &tag, cfg)?),
            Check::Littlewood => rows.push(littlewood_row(&d, &tag, cfg)?),
            Check::HausdorffYoung => rows.extend(hausdorff_young_rows(&d, &tag, cfg)?),
            Check::Translation => rows.extend(translation_rows(
                &d,
                &tag,
                &random_sigma(cfg.seed, index),
                cfg,
            )?),
            Check::Corona => rows.extend(corona_rows(&d, &tag, cfg)?),
            Check::EnergyLower => rows.extend(energy_lower_rows(&d, &tag, index, cfg)?),
            Check::Transfer => rows.extend(transfer_rows(&d, &tag, index, cfg)?),
        }
    }
    Ok(rows)
}

/// Runs the configured checks on `cfg.instances` random polynomials.
pub fn run_suite(f: &Arc<Frequency>, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let ids: Vec<u64> = (0..cfg.instances as u64).collect();
    let per = par_map(&ids, |&i| instance_rows(f, i, cfg));
    let mut rows = Vec::new();
    for r in per {
        rows.extend(r?);
    }
    Ok(VerifyReport {
        frequency: String::from(f.provenance()),
        rows,
    })
}

/// The p-th-power form of the Nikolskii check for a single polynomial.
pub fn nikolskii_holds(d: &DirichletPolynomial, q: u32, budget: u64) -> Result<bool> {
    if q < 2 || !q.is_multiple_of(2) {
        return Err(Error::Domain(format!("even q required, got {q}")));
    }
    let k = q / 2;
    let n = d.terms().len() as i64;
    let lhs = even_norm(d, k, budget)?;
    Ok(lhs
        <= num_traits::pow(rat_int(n), k as usize - 1)
            * num_traits::pow(d.l2_squared(), k as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::gen_log_integers;

    #[test]
    fn default_suite_on_log_integers() {
        let f = Arc::new(gen_log_integers(30).unwrap());
        let r = run_suite(
            &f,
            &VerifyConfig {
                instances: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(
            r.passed(),
            "{:?}",
            r.rows.iter().filter(|x| !x.passed).collect::<Vec<_>>()
        );
        assert!(r.rows.iter().any(|x| x.check == Check::Translation));
    }

    #[test]
    fn corruption_is_detected() {
        let f = Arc::new(gen_log_integers(30).unwrap());
        let cfg = VerifyConfig {
            instances: 2,
            checks: alloc::vec![Check::Nikolskii],
            corrupt: true,
            ..Default::default()
        };
        let r = run_suite(&f, &cfg).unwrap();
        assert_eq!(r.violations(), r.rows.len());
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(Check::parse(c.name()), Some(c));
        }
    }
}
