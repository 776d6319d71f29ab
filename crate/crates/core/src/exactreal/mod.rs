//! Exact reals: rational combinations of atoms that are declared linearly
//! independent over Q, compared through certified interval enclosures.

pub mod interval;
pub mod lattice;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use interval::{rat, rat_int, rat_to_f64, Interval, Rational};
use lattice::EchelonBasis;

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_PRECISION_CAP: u32 = 1024;

pub type AtomId = u32;

/// Where a formal atom's numeric enclosure comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormalEnclosure {
    /// `[a, a + 2^-P]` at working precision P; shrinks as P grows.
    Anchored(Rational),
    /// A fixed user-supplied enclosure; never refines.
    Fixed(Rational, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKind {
    Unit,
    LogPrime(u64),
    Formal {
        label: String,
        enclosure: FormalEnclosure,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub id: AtomId,
    pub kind: AtomKind,
    pub provenance: String,
}

impl Atom {
    pub fn name(&self) -> String {
        match &self.kind {
            AtomKind::Unit => "1".into(),
            AtomKind::LogPrime(p) => format!("log{p}"),
            AtomKind::Formal { label, .. } => label.clone(),
        }
    }
}

fn enclosure_of(kind: &AtomKind, prec: u32) -> Interval {
    match kind {
        AtomKind::Unit => Interval::one(),
        AtomKind::LogPrime(p) => {
            interval::ln_rational(&rat_int(*p as i64), prec).expect("ln of a prime")
        }
        AtomKind::Formal {
            enclosure: FormalEnclosure::Anchored(a),
            ..
        } => {
            let w = Rational::new(BigInt::one(), BigInt::one() << prec as usize);
            Interval::new(a.clone(), a + w)
        }
        AtomKind::Formal {
            enclosure: FormalEnclosure::Fixed(lo, hi),
            ..
        } => Interval::new(lo.clone(), hi.clone()),
    }
}

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

/// Immutable set of atoms. Values created from one registry never mix with
/// values of another.
#[derive(Debug)]
pub struct Registry {
    uid: u64,
    generation: u32,
    precision: u32,
    cap: u32,
    atoms: Vec<Atom>,
    enclosures: Vec<Interval>,
    primes: BTreeMap<u64, AtomId>,
    labels: BTreeMap<String, AtomId>,
}

#[derive(Debug)]
pub struct RegistryBuilder {
    precision: u32,
    cap: u32,
    atoms: Vec<Atom>,
    primes: BTreeMap<u64, AtomId>,
    labels: BTreeMap<String, AtomId>,
}

impl Default for RegistryBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl RegistryBuilder {
    pub fn new() -> Self {
        RegistryBuilder {
            precision: DEFAULT_PRECISION,
            cap: DEFAULT_PRECISION_CAP,
            atoms: alloc::vec![Atom {
                id: 0,
                kind: AtomKind::Unit,
                provenance: "rational unit".into()
            }],
            primes: BTreeMap::new(),
            labels: BTreeMap::new(),
        }
    }

    pub fn precision(mut self, precision: u32, cap: u32) -> Self {
        self.precision = precision.max(16);
        self.cap = cap.max(self.precision);
        self
    }

    pub fn unit(&self) -> AtomId {
        0
    }

    pub fn log_prime(&mut self, p: u64) -> AtomId {
        debug_assert!(p >= 2);
        if let Some(&id) = self.primes.get(&p) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        self.atoms.push(Atom {
            id,
            kind: AtomKind::LogPrime(p),
            provenance: format!("natural log of the prime {p}"),
        });
        self.primes.insert(p, id);
        id
    }

    /// Declare a formal atom. Re-declaring a label with the same enclosure
    /// returns the existing id.
    pub fn formal(
        &mut self,
        label: &str,
        enclosure: FormalEnclosure,
        provenance: &str,
    ) -> Result<AtomId> {
        if let FormalEnclosure::Fixed(lo, hi) = &enclosure {
            if lo >= hi {
                return Err(Error::Invalid(format!(
                    "formal atom {label}: enclosure must have positive width"
                )));
            }
        }
        if let Some(&id) = self.labels.get(label) {
            return match &self.atoms[id as usize].kind {
                AtomKind::Formal { enclosure: e, .. } if *e == enclosure => Ok(id),
                _ => Err(Error::Invalid(format!(
                    "formal atom {label} declared twice with different enclosures"
                ))),
            };
        }
        if label.is_empty() || label == "1" || label.starts_with("log") {
            return Err(Error::Invalid(format!(
                "reserved formal atom label {label:?}"
            )));
        }
        let id = self.atoms.len() as AtomId;
        let kind = AtomKind::Formal {
            label: label.into(),
            enclosure,
        };
        self.atoms.push(Atom {
            id,
            kind,
            provenance: provenance.into(),
        });
        self.labels.insert(label.into(), id);
        Ok(id)
    }

    pub fn build(self) -> Arc<Registry> {
        let enclosures = self
            .atoms
            .iter()
            .map(|a| enclosure_of(&a.kind, self.precision))
            .collect();
        Arc::new(Registry {
            uid: NEXT_UID.fetch_add(1, AtomicOrdering::Relaxed),
            generation: 0,
            precision: self.precision,
            cap: self.cap,
            atoms: self.atoms,
            enclosures,
            primes: self.primes,
            labels: self.labels,
        })
    }
}

/// A rational combination of atoms. Equality is exact coefficient equality.
#[derive(Clone)]
pub struct ExactReal {
    registry: u64,
    coeffs: Vec<(AtomId, Rational)>,
    enclosure: Interval,
}

impl PartialEq for ExactReal {
    fn eq(&self, other: &Self) -> bool {
        self.registry == other.registry && self.coeffs == other.coeffs
    }
}
impl Eq for ExactReal {}

impl Hash for ExactReal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.registry.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ExactReal{:?}~{:?}",
            self.coeffs
                .iter()
                .map(|(a, c)| (a, c.to_string()))
                .collect::<Vec<_>>(),
            self.enclosure
        )
    }
}

impl ExactReal {
    pub fn coeffs(&self) -> &[(AtomId, Rational)] {
        &self.coeffs
    }

    pub fn enclosure(&self) -> &Interval {
        &self.enclosure
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn approx(&self) -> f64 {
        self.enclosure.mid_f64()
    }

    pub fn registry_uid(&self) -> u64 {
        self.registry
    }

    /// The exact rational value, if only the unit atom occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.as_slice() {
            [] => Some(Rational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coeff(&self, atom: AtomId) -> Rational {
        self.coeffs
            .iter()
            .find(|(a, _)| *a == atom)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }
}

fn normalize(mut terms: Vec<(AtomId, Rational)>) -> Vec<(AtomId, Rational)> {
    terms.sort_by_key(|(a, _)| *a);
    let mut out: Vec<(AtomId, Rational)> = Vec::with_capacity(terms.len());
    for (a, c) in terms {
        match out.last_mut() {
            Some((b, d)) if *b == a => *d += c,
            _ => out.push((a, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Exact basis of the rational span of a list of values together with the
/// integer exponent matrix expressing every value in it.
#[derive(Clone, Debug)]
pub struct QliBasis {
    pub basis: Vec<ExactReal>,
    pub exponents: Vec<Vec<BigInt>>,
}

impl QliBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Exponents as machine integers; overflow is an error.
    pub fn exponents_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.exponents
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        x.to_i64()
                            .ok_or_else(|| Error::Overflow("exponent matrix".into()))
                    })
                    .collect()
            })
            .collect()
    }
}

impl Registry {
    pub fn builder() -> RegistryBuilder {
        RegistryBuilder::new()
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn precision_cap(&self) -> u32 {
        self.cap
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, id: AtomId) -> Option<&Atom> {
        self.atoms.get(id as usize)
    }

    pub fn prime_atom(&self, p: u64) -> Option<AtomId> {
        self.primes.get(&p).copied()
    }

    pub fn label_atom(&self, label: &str) -> Option<AtomId> {
        self.labels.get(label).copied()
    }

    /// Same atoms at a higher working precision. Values stay valid.
    pub fn refined(&self, precision: u32) -> Registry {
        let precision = precision.min(self.cap).max(self.precision);
        Registry {
            uid: self.uid,
            generation: self.generation + 1,
            precision,
            cap: self.cap,
            atoms: self.atoms.clone(),
            enclosures: self
                .atoms
                .iter()
                .map(|a| enclosure_of(&a.kind, precision))
                .collect(),
            primes: self.primes.clone(),
            labels: self.labels.clone(),
        }
    }

    /// A registry whose atoms are this one's, with a different precision policy.
    pub fn with_precision(&self, precision: u32, cap: u32) -> Arc<Registry> {
        let b = RegistryBuilder {
            precision: self.precision,
            cap: self.cap,
            atoms: self.atoms.clone(),
            primes: self.primes.clone(),
            labels: self.labels.clone(),
        }
        .precision(precision, cap);
        let mut r = b.build();
        Arc::get_mut(&mut r).expect("fresh registry").uid = self.uid;
        r
    }

    fn enclosure_terms(&self, terms: &[(AtomId, Rational)], prec: u32) -> Interval {
        let mut acc = Interval::zero();
        for (a, c) in terms {
            let e = if prec == self.precision {
                self.enclosures[*a as usize].scale(c)
            } else {
                enclosure_of(&self.atoms[*a as usize].kind, prec).scale(c)
            };
            acc = acc.add(&e);
        }
        acc.round_outward(prec + 16)
    }

    pub fn check(&self, x: &ExactReal) -> Result<()> {
        if x.registry == self.uid {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    /// Build a value from raw (atom, coefficient) terms.
    pub fn value(&self, terms: Vec<(AtomId, Rational)>) -> Result<ExactReal> {
        if let Some((a, _)) = terms.iter().find(|(a, _)| *a as usize >= self.atoms.len()) {
            return Err(Error::Invalid(format!("unknown atom id {a}")));
        }
        let coeffs = normalize(terms);
        let enclosure = self.enclosure_terms(&coeffs, self.precision);
        Ok(ExactReal {
            registry: self.uid,
            coeffs,
            enclosure,
        })
    }

    pub fn zero(&self) -> ExactReal {
        ExactReal {
            registry: self.uid,
            coeffs: Vec::new(),
            enclosure: Interval::zero(),
        }
    }

    pub fn rational(&self, q: Rational) -> ExactReal {
        self.value(alloc::vec![(0, q)]).expect("unit atom")
    }

    pub fn atom_value(&self, id: AtomId) -> Result<ExactReal> {
        self.value(alloc::vec![(id, Rational::one())])
    }

    /// log q for a positive rational whose prime factors all have atoms.
    pub fn log_of(&self, factors: &[(u64, i64)]) -> Result<ExactReal> {
        let mut terms = Vec::with_capacity(factors.len());
        for &(p, e) in factors {
            let id = self
                .prime_atom(p)
                .ok_or_else(|| Error::Invalid(format!("no atom for log {p}")))?;
            terms.push((id, rat_int(e)));
        }
        self.value(terms)
    }

    pub fn linear_combine(&self, terms: &[(Rational, &ExactReal)]) -> Result<ExactReal> {
        let mut raw = Vec::new();
        for (c, x) in terms {
            self.check(x)?;
            if c.is_zero() {
                continue;
            }
            raw.extend(x.coeffs.iter().map(|(a, d)| (*a, c * d)));
        }
        self.value(raw)
    }

    pub fn add(&self, a: &ExactReal, b: &ExactReal) -> Result<ExactReal> {
        self.linear_combine(&[(Rational::one(), a), (Rational::one(), b)])
    }

    pub fn sub(&self, a: &ExactReal, b: &ExactReal) -> Result<ExactReal> {
        self.linear_combine(&[(Rational::one(), a), (-Rational::one(), b)])
    }

    pub fn scale(&self, c: &Rational, a: &ExactReal) -> Result<ExactReal> {
        self.linear_combine(&[(c.clone(), a)])
    }

    /// Enclosure of `x` at an explicit precision.
    pub fn enclosure_at(&self, x: &ExactReal, prec: u32) -> Interval {
        if prec == self.precision {
            x.enclosure.clone()
        } else {
            self.enclosure_terms(&x.coeffs, prec)
        }
    }

    /// Sign of `x`, refining precision up to the cap.
    pub fn sign(&self, x: &ExactReal) -> Result<Ordering> {
        self.check(x)?;
        if x.coeffs.is_empty() {
            return Ok(Ordering::Equal);
        }
        if let Some(q) = x.as_rational() {
            return Ok(q.cmp(&Rational::zero()));
        }
        let mut prec = self.precision;
        loop {
            let e = self.enclosure_at(x, prec);
            match e.sign() {
                Some(Ordering::Equal) | None => {}
                Some(s) => return Ok(s),
            }
            if prec >= self.cap {
                return Err(Error::UndecidableComparison { cap: self.cap });
            }
            prec = (prec * 2).min(self.cap);
        }
    }

    pub fn compare(&self, a: &ExactReal, b: &ExactReal) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        if a.coeffs == b.coeffs {
            return Ok(Ordering::Equal);
        }
        if let Some(o) = a.enclosure.cmp_certain(&b.enclosure) {
            if o != Ordering::Equal {
                return Ok(o);
            }
        }
        self.sign(&self.sub(a, b)?)
    }

    pub fn compare_rational(&self, a: &ExactReal, q: &Rational) -> Result<Ordering> {
        let qv = self.rational(q.clone());
        self.compare(a, &qv)
    }

    /// Exact floor.
    pub fn floor(&self, x: &ExactReal) -> Result<i64> {
        self.check(x)?;
        let to_i64 = |b: BigInt| b.to_i64().ok_or_else(|| Error::Overflow("floor".into()));
        if let Some(q) = x.as_rational() {
            return to_i64(q.floor().to_integer());
        }
        let mut prec = self.precision;
        loop {
            let e = self.enclosure_at(x, prec);
            let fl = e.lo().floor();
            // hi < fl + 1 means the whole enclosure sits in [fl, fl+1)
            if *e.hi() < &fl + Rational::one() {
                return to_i64(fl.to_integer());
            }
            if prec >= self.cap {
                return Err(Error::UndecidableFloor { cap: self.cap });
            }
            prec = (prec * 2).min(self.cap);
        }
    }

    /// Q-basis of the rational span of `values`, scaled so that every value is
    /// an integer combination of basis elements, with integer exponents.
    pub fn qli_basis(&self, values: &[ExactReal]) -> Result<QliBasis> {
        for v in values {
            self.check(v)?;
        }
        let mut atoms: Vec<AtomId> = values
            .iter()
            .flat_map(|v| v.coeffs.iter().map(|(a, _)| *a))
            .collect();
        atoms.sort_unstable();
        atoms.dedup();
        let col = |a: AtomId| atoms.binary_search(&a).expect("collected atom");
        let l = interval::lcm_all(
            values
                .iter()
                .flat_map(|v| v.coeffs.iter().map(|(_, c)| c.denom())),
        );
        let lr = Rational::from_integer(l.clone());
        let vecs: Vec<Vec<BigInt>> = values
            .iter()
            .map(|v| {
                let mut row = alloc::vec![BigInt::zero(); atoms.len()];
                for (a, c) in &v.coeffs {
                    row[col(*a)] = (c * &lr).to_integer();
                }
                row
            })
            .collect();
        let mut eb = EchelonBasis::new(atoms.len());
        for v in &vecs {
            eb.insert(v);
        }
        eb.reduce();
        let basis = eb
            .rows()
            .map(|row| {
                let terms = row
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (atoms[i], Rational::new(x.clone(), l.clone())))
                    .collect();
                self.value(terms)
            })
            .collect::<Result<Vec<_>>>()?;
        let exponents = vecs
            .iter()
            .map(|v| eb.coordinates(v).expect("value lies in its own span"))
            .collect();
        Ok(QliBasis { basis, exponents })
    }

    /// Human-readable exact form, e.g. `log2 + 1/2*mu_1`.
    pub fn format(&self, x: &ExactReal) -> String {
        if x.coeffs.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (a, c)) in x.coeffs.iter().enumerate() {
            let name = self.atoms[*a as usize].name();
            let neg = c.is_negative();
            let m = c.abs();
            if i > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            if *a == 0 {
                s.push_str(&m.to_string());
            } else if m.is_one() {
                s.push_str(&name);
            } else {
                s.push_str(&format!("{m}*{name}"));
            }
        }
        s
    }

    /// Merge two registries. Atoms of equal kind are identified; a label
    /// declared in both with different enclosures is an error. Returns the
    /// merged registry and the id maps of both operands.
    pub fn merge(a: &Registry, b: &Registry) -> Result<(Arc<Registry>, Vec<AtomId>, Vec<AtomId>)> {
        let mut builder =
            RegistryBuilder::new().precision(a.precision.max(b.precision), a.cap.max(b.cap));
        let mut maps = [Vec::new(), Vec::new()];
        for (m, r) in maps.iter_mut().zip([a, b]) {
            for atom in &r.atoms {
                let id = match &atom.kind {
                    AtomKind::Unit => builder.unit(),
                    AtomKind::LogPrime(p) => builder.log_prime(*p),
                    AtomKind::Formal { label, enclosure } => {
                        builder.formal(label, enclosure.clone(), &atom.provenance)?
                    }
                };
                m.push(id);
            }
        }
        let [ma, mb] = maps;
        Ok((builder.build(), ma, mb))
    }

    /// Re-express a value of another registry through an atom id map.
    pub fn import(&self, x: &ExactReal, map: &[AtomId]) -> Result<ExactReal> {
        self.value(
            x.coeffs
                .iter()
                .map(|(a, c)| (map[*a as usize], c.clone()))
                .collect(),
        )
    }

    /// lcm of all coefficient denominators.
    pub fn common_denominator(values: &[ExactReal]) -> BigInt {
        values
            .iter()
            .flat_map(|v| v.coeffs.iter())
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn logs() -> (Arc<Registry>, ExactReal, ExactReal, ExactReal) {
        let mut b = RegistryBuilder::new();
        let p2 = b.log_prime(2);
        let p3 = b.log_prime(3);
        let r = b.build();
        let l2 = r.atom_value(p2).unwrap();
        let l3 = r.atom_value(p3).unwrap();
        let l6 = r.value(vec![(p2, rat_int(1)), (p3, rat_int(1))]).unwrap();
        (r, l2, l3, l6)
    }

    #[test]
    fn combine_and_cancel() {
        let (r, l2, l3, l6) = logs();
        assert_eq!(r.add(&l2, &l3).unwrap(), l6);
        assert!(r.sub(&l6, &l6).unwrap().is_zero());
        let half = r.rational(rat(1, 2));
        let one = r.scale(&rat_int(2), &half).unwrap();
        assert_eq!(one.as_rational(), Some(rat_int(1)));
    }

    #[test]
    fn compare_logs() {
        let (r, l2, l3, l6) = logs();
        assert_eq!(r.compare(&l2, &l3).unwrap(), Ordering::Less);
        assert_eq!(
            r.compare(&l6, &r.add(&l2, &l3).unwrap()).unwrap(),
            Ordering::Equal
        );
        // 3 log 2 < 2 log 3 (8 < 9)
        let a = r.scale(&rat_int(3), &l2).unwrap();
        let b = r.scale(&rat_int(2), &l3).unwrap();
        assert_eq!(r.compare(&a, &b).unwrap(), Ordering::Less);
    }

    #[test]
    fn compare_formal_against_unit() {
        let mut b = RegistryBuilder::new();
        let d = b
            .formal(
                "delta",
                FormalEnclosure::Fixed(rat(99, 100), rat(999, 1000)),
                "test",
            )
            .unwrap();
        let r = b.build();
        let one = r.rational(rat_int(1));
        let delta = r.atom_value(d).unwrap();
        assert_eq!(r.compare(&one, &delta).unwrap(), Ordering::Greater);
    }

    #[test]
    fn fixed_overlap_is_undecidable() {
        let mut b = RegistryBuilder::new();
        let d = b
            .formal("x", FormalEnclosure::Fixed(rat(1, 2), rat(3, 2)), "test")
            .unwrap();
        let r = b.build();
        let x = r.atom_value(d).unwrap();
        assert_eq!(
            r.compare(&x, &r.rational(rat_int(1))),
            Err(Error::UndecidableComparison { cap: 1024 })
        );
        assert_eq!(r.floor(&x), Err(Error::UndecidableFloor { cap: 1024 }));
    }

    #[test]
    fn registries_never_mix() {
        let (r, l2, _, _) = logs();
        let (_, m2, _, _) = logs();
        assert_eq!(r.add(&l2, &m2), Err(Error::RegistryMismatch));
    }

    #[test]
    fn floors() {
        let (r, l2, l3, _) = logs();
        assert_eq!(r.floor(&l2).unwrap(), 0);
        assert_eq!(r.floor(&l3).unwrap(), 1);
        let x = r.scale(&rat_int(3), &l3).unwrap(); // log 27 = 3.29
        assert_eq!(r.floor(&x).unwrap(), 3);
        assert_eq!(r.floor(&r.rational(rat(-1, 2))).unwrap(), -1);
    }

    #[test]
    fn qli_basis_examples() {
        let (r, l2, l3, l6) = logs();
        let q = r.qli_basis(&[l2.clone(), l3.clone(), l6]).unwrap();
        assert_eq!(q.basis, vec![l2, l3]);
        assert_eq!(
            q.exponents_i64().unwrap(),
            vec![vec![1, 0], vec![0, 1], vec![1, 1]]
        );

        let q = r
            .qli_basis(&[r.rational(rat(1, 2)), r.rational(rat(1, 3))])
            .unwrap();
        assert_eq!(q.basis, vec![r.rational(rat(1, 6))]);
        assert_eq!(q.exponents_i64().unwrap(), vec![vec![3], vec![2]]);
    }

    #[test]
    fn qli_basis_formal_identity() {
        let mut b = RegistryBuilder::new();
        let x = b
            .formal("x", FormalEnclosure::Anchored(rat_int(1)), "t")
            .unwrap();
        let y = b
            .formal("y", FormalEnclosure::Anchored(rat_int(2)), "t")
            .unwrap();
        let r = b.build();
        let q = r
            .qli_basis(&[r.atom_value(x).unwrap(), r.atom_value(y).unwrap()])
            .unwrap();
        assert_eq!(q.exponents_i64().unwrap(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn format_values() {
        let (r, l2, l3, _) = logs();
        let v = r
            .linear_combine(&[(rat(1, 2), &l2), (rat_int(-1), &l3)])
            .unwrap();
        assert_eq!(r.format(&v), "1/2*log2 - log3");
        assert_eq!(r.format(&r.rational(rat(-3, 2))), "-3/2");
    }

    #[test]
    fn merge_identifies_shared_atoms() {
        let (a, l2, _, _) = logs();
        let mut b = RegistryBuilder::new();
        b.log_prime(5);
        b.log_prime(2);
        let b = b.build();
        let (m, ma, mb) = Registry::merge(&a, &b).unwrap();
        assert_eq!(ma[1], mb[2]);
        let x = m.import(&l2, &ma).unwrap();
        assert_eq!(m.format(&x), "log2");
    }
}
