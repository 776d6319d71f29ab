//! Closed intervals with exact rational endpoints.
//!
//! Every operation rounds outward, so an interval computed from enclosures of
//! its inputs always encloses the true result. Endpoints are kept at a bounded
//! number of significant bits by [`Interval::round_outward`].

use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:e}, {:e}]",
            rat_to_f64(&self.lo),
            rat_to_f64(&self.hi)
        )
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Nearest-ish f64 of a rational. Display and heuristics only.
pub fn rat_to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        x / Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        x * Rational::from_integer(BigInt::one() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(0.0) * libm::exp2(shift as f64)
}

/// Exact rational value of a finite f64.
pub fn f64_to_rat(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// floor(log2 |x|) for x != 0.
fn ilog2(x: &Rational) -> i64 {
    let n = x.numer().abs();
    let d = x.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= n/d < 2^(e+1) after adjustment
    let cmp = |e: i64| -> Ordering {
        if e >= 0 {
            n.cmp(&(d << e as usize))
        } else {
            (&n << (-e) as usize).cmp(d)
        }
    };
    while cmp(e) == Ordering::Less {
        e -= 1;
    }
    while cmp(e + 1) != Ordering::Less {
        e += 1;
    }
    e
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

fn round_down(x: &Rational, prec: u32) -> Rational {
    if x.is_zero() {
        return x.clone();
    }
    let g = ilog2(x) - prec as i64;
    let q = pow2(g);
    (x / &q).floor() * q
}

fn round_up(x: &Rational, prec: u32) -> Rational {
    if x.is_zero() {
        return x.clone();
    }
    let g = ilog2(x) - prec as i64;
    let q = pow2(g);
    (x / &q).ceil() * q
}

fn min_max(v: [Rational; 4]) -> (Rational, Rational) {
    let [a, b, c, d] = v;
    let mut lo = a.clone();
    let mut hi = a;
    for x in [b, c, d] {
        if x < lo {
            lo = x.clone();
        }
        if x > hi {
            hi = x;
        }
    }
    (lo, hi)
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn one() -> Self {
        Self::point(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(rat_int(n))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn mid_f64(&self) -> f64 {
        rat_to_f64(&self.mid())
    }

    pub fn lo_f64(&self) -> f64 {
        rat_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        rat_to_f64(&self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign if decided by the enclosure.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified ordering of two enclosures; `None` when they overlap.
    pub fn cmp_certain(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn round_outward(&self, prec: u32) -> Self {
        Interval {
            lo: round_down(&self.lo, prec),
            hi: round_up(&self.hi, prec),
        }
    }

    pub fn hull(&self, other: &Interval) -> Self {
        Interval {
            lo: if self.lo < other.lo {
                self.lo.clone()
            } else {
                other.lo.clone()
            },
            hi: if self.hi > other.hi {
                self.hi.clone()
            } else {
                other.hi.clone()
            },
        }
    }

    pub fn add(&self, o: &Interval) -> Self {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Interval) -> Self {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Interval) -> Self {
        let (lo, hi) = min_max([
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ]);
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_negative() {
            Interval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            Interval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    pub fn add_rat(&self, c: &Rational) -> Self {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn square(&self) -> Self {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Interval {
                lo: Rational::zero(),
                hi: if a > b { a } else { b },
            }
        } else if a < b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Interval::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        if n.is_multiple_of(2) && self.contains_zero() {
            acc.lo = Rational::zero();
        }
        acc
    }

    /// Reciprocal; `None` if the interval contains zero.
    pub fn recip(&self, prec: u32) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(
            Interval {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            }
            .round_outward(prec),
        )
    }

    pub fn div(&self, o: &Interval, prec: u32) -> Option<Self> {
        Some(self.mul(&o.recip(prec)?).round_outward(prec))
    }

    pub fn max0(&self) -> Self {
        Interval {
            lo: if self.lo.is_negative() {
                Rational::zero()
            } else {
                self.lo.clone()
            },
            hi: if self.hi.is_negative() {
                Rational::zero()
            } else {
                self.hi.clone()
            },
        }
    }

    /// Enclosure of exp over the interval.
    pub fn exp(&self, prec: u32) -> Self {
        let lo = exp_rational(&self.lo, prec);
        let hi = if self.is_point() {
            lo.clone()
        } else {
            exp_rational(&self.hi, prec)
        };
        Interval {
            lo: lo.lo,
            hi: hi.hi,
        }
    }

    /// Enclosure of ln over a positive interval.
    pub fn ln(&self, prec: u32) -> Option<Self> {
        if !self.lo.is_positive() {
            return None;
        }
        let lo = ln_rational(&self.lo, prec)?;
        let hi = if self.is_point() {
            lo.clone()
        } else {
            ln_rational(&self.hi, prec)?
        };
        Some(Interval {
            lo: lo.lo,
            hi: hi.hi,
        })
    }

    /// Enclosure of x^(num/den) for a non-negative interval.
    pub fn pow_ratio(&self, num: u32, den: u32, prec: u32) -> Option<Self> {
        if self.lo.is_negative() || den == 0 {
            return None;
        }
        let lo_p = num_traits::pow(self.lo.clone(), num as usize);
        let hi_p = num_traits::pow(self.hi.clone(), num as usize);
        let lo = nth_root(&lo_p, den, prec).lo;
        let hi = if self.is_point() {
            nth_root(&lo_p, den, prec).hi
        } else {
            nth_root(&hi_p, den, prec).hi
        };
        Some(Interval { lo, hi })
    }

    /// x^e for a non-negative interval and rational exponent e (either sign).
    pub fn pow_rational(&self, e: &Rational, prec: u32) -> Option<Self> {
        let num = e.numer().abs().to_u32()?;
        let den = e.denom().to_u32()?;
        let r = self.pow_ratio(num, den, prec)?;
        if e.is_negative() {
            r.recip(prec)
        } else {
            Some(r)
        }
    }

    pub fn sqrt(&self, prec: u32) -> Option<Self> {
        self.pow_ratio(1, 2, prec)
    }
}

/// Enclosure of atanh(t) for rational |t| <= 1/2, summed in fixed point
/// with g = prec + 32 fractional bits. Every partial power and term is
/// floored, so the running sum only underestimates; the accumulated flooring
/// error and the series tail bound the upper end.
fn atanh_series(t: &Rational, prec: u32) -> Interval {
    debug_assert!(t.abs() <= rat(1, 2));
    if t.is_zero() {
        return Interval::zero();
    }
    if t.is_negative() {
        return atanh_series(&-t, prec).neg();
    }
    let g = prec as usize + 32;
    let (a, b) = (t.numer(), t.denom());
    let (a2, b2) = (a * a, b * b);
    let unit = BigInt::one() << g;
    // pw ≤ t^(2i+1)·2^g < pw + pw_err
    let mut pw = (&unit * a) / b;
    let mut pw_err = BigInt::one();
    let mut sum = pw.clone();
    let mut err = BigInt::one();
    let mut i: u64 = 1;
    while pw > pw_err {
        pw = &pw * &a2 / &b2;
        pw_err += 1;
        sum += &pw / BigInt::from(2 * i + 1);
        err += &pw_err + 1;
        i += 1;
    }
    // tail after the last included power: ≤ t^(2i+1) · t^2 / (1 - t^2)
    let tail = ((&pw + &pw_err) * &a2).div_ceil(&(&b2 - &a2)) + 1;
    let hi = &sum + err + tail;
    Interval::new(Rational::new(sum, unit.clone()), Rational::new(hi, unit))
        .round_outward(prec + 24)
}

/// Enclosure of ln 2 at `prec` significant bits.
pub fn ln2(prec: u32) -> Interval {
    atanh_series(&rat(1, 3), prec + 4)
        .scale(&rat_int(2))
        .round_outward(prec)
}

/// Enclosure of ln x for rational x > 0.
pub fn ln_rational(x: &Rational, prec: u32) -> Option<Interval> {
    if !x.is_positive() {
        return None;
    }
    if x.is_one() {
        return Some(Interval::zero());
    }
    let g = prec + 16;
    let mut k = ilog2(x);
    let mut m = x / pow2(k);
    if m > rat(3, 2) {
        m /= rat_int(2);
        k += 1;
    }
    let one = Rational::one();
    let t = (&m - &one) / (&m + &one);
    let a = atanh_series(&t, g).scale(&rat_int(2));
    let r = if k == 0 {
        a
    } else {
        ln2(g).scale(&rat_int(k)).add(&a)
    };
    Some(r.round_outward(prec))
}

/// Enclosure of exp x for rational x.
pub fn exp_rational(x: &Rational, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    if x.is_negative() {
        let e = exp_rational(&-x, prec + 2);
        return e.recip(prec).expect("exp is positive");
    }
    // halve until y <= 1/2
    let mut s: u32 = 0;
    let mut y = x.clone();
    let half = rat(1, 2);
    while y > half {
        y /= rat_int(2);
        s += 1;
    }
    let g = prec + s + 24;
    let eps = pow2(-(g as i64));
    let mut term = Interval::one();
    let mut sum = Interval::one();
    let yi = Interval::point(y.clone());
    let mut i: i64 = 1;
    loop {
        term = term.mul(&yi).scale(&rat(1, i)).round_outward(g);
        sum = sum.add(&term).round_outward(g);
        if term.hi <= &sum.lo * &eps {
            break;
        }
        i += 1;
    }
    // tail <= term * 2y/(i+1) for y <= 1/2
    let tail = &term.hi * &y * rat(2, i + 1);
    let mut r = Interval {
        lo: sum.lo,
        hi: sum.hi + tail,
    }
    .round_outward(g);
    for _ in 0..s {
        r = r.square().round_outward(g);
    }
    r.round_outward(prec)
}

/// Enclosure of x^(1/n) for rational x >= 0.
pub fn nth_root(x: &Rational, n: u32, prec: u32) -> Interval {
    assert!(!x.is_negative(), "root of a negative number");
    assert!(n >= 1);
    if x.is_zero() || n == 1 {
        return Interval::point(x.clone());
    }
    let a = x.numer();
    let b = x.denom();
    // x^(1/n) = (a b^(n-1))^(1/n) / b
    let y0 = a * num_traits::pow(b.clone(), (n - 1) as usize);
    let want = n as i64 * (prec as i64 + 2);
    let s = ((want - y0.bits() as i64 + n as i64 - 1) / n as i64).max(0) as usize + 1;
    let y = y0 << (n as usize * s);
    let r0 = y.nth_root(n);
    let scale = b << s;
    let lo = Rational::new(r0.clone(), scale.clone());
    let exact = num_traits::pow(r0.clone(), n as usize) == y;
    let hi = if exact {
        lo.clone()
    } else {
        Rational::new(r0 + 1, scale)
    };
    Interval { lo, hi }.round_outward(prec)
}

/// Exact integer n-th root if `x` is a perfect power of a rational.
pub fn exact_root(x: &Rational, n: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let rn = x.numer().nth_root(n);
    let rd = x.denom().nth_root(n);
    if num_traits::pow(rn.clone(), n as usize) == *x.numer()
        && num_traits::pow(rd.clone(), n as usize) == *x.denom()
    {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

pub fn sign_of(x: &Rational) -> Sign {
    if x.is_positive() {
        Sign::Plus
    } else if x.is_negative() {
        Sign::Minus
    } else {
        Sign::NoSign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_matches_known_digits() {
        let e = ln2(128);
        let approx = f64_to_rat(core::f64::consts::LN_2);
        assert!((e.mid() - approx).abs() < rat(1, 1_000_000_000_000_000));
        assert!(e.width() < pow2(-120));
        // ln 2 = 0.69314718055994530941723212145817656807550013436025...
        let d: BigInt = "6931471805599453094172321214581765680755".parse().unwrap();
        let d = Rational::new(d, num_traits::pow(BigInt::from(10), 40));
        let ulp = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 40));
        assert!(e.lo() <= &(&d + &ulp) && e.hi() >= &d);
    }

    #[test]
    fn ln_of_large_primes_is_tight() {
        for p in [99_991i64, 65_537, 7919, 3] {
            let l = ln_rational(&rat_int(p), 128).unwrap();
            assert!(l.width() < pow2(-115), "ln {p}");
            assert!(l.exp(140).contains(&rat_int(p)), "exp(ln {p})");
        }
    }

    #[test]
    fn ln_of_products_is_additive_within_enclosures() {
        let l6 = ln_rational(&rat_int(6), 100).unwrap();
        let l2 = ln_rational(&rat_int(2), 100).unwrap();
        let l3 = ln_rational(&rat_int(3), 100).unwrap();
        let s = l2.add(&l3);
        assert!(s.hi() >= l6.lo() && l6.hi() >= s.lo());
    }

    #[test]
    fn exp_of_ln_roundtrips() {
        let x = rat(7, 3);
        let l = ln_rational(&x, 120).unwrap();
        let e = l.exp(120);
        assert!(e.contains(&x));
        assert!(e.width() < pow2(-100));
    }

    #[test]
    fn exp_negative_and_large() {
        let e = exp_rational(&rat_int(-40), 128);
        let v = e.mid_f64();
        assert!((v / libm::exp(-40.0) - 1.0).abs() < 1e-14);
        let big = exp_rational(&rat_int(30), 128);
        assert!((big.mid_f64() / libm::exp(30.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn roots_are_certified() {
        let r = nth_root(&rat_int(2), 2, 128);
        let sq = r.square();
        assert!(sq.contains(&rat_int(2)));
        assert_eq!(nth_root(&rat_int(16), 4, 64), Interval::point(rat_int(2)));
        let c = nth_root(&rat(1, 3), 3, 80);
        assert!(c.powi(3).contains(&rat(1, 3)));
        assert_eq!(exact_root(&rat(16, 81), 4), Some(rat(2, 3)));
        assert_eq!(exact_root(&rat_int(2), 2), None);
    }

    #[test]
    fn outward_rounding_keeps_containment() {
        let x = rat(1, 3);
        let i = Interval::point(x.clone()).round_outward(20);
        assert!(i.contains(&x));
        assert!(!i.is_point());
    }
}
