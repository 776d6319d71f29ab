//! Injective embeddings of finite value sets into cheap hashable keys, such
//! that k-fold sums of values map to k-fold combinations of keys.
//!
//! Because atoms are Q-linearly independent, a value is determined by its
//! coefficient vector; the embeddings below are compact encodings of those
//! vectors that stay injective on sums of up to `k` values.

use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactreal::{AtomId, AtomKind, ExactReal, Rational, Registry};

/// A commutative monoid of sum keys.
pub trait SumKey: Clone + Eq + Hash + Send + Sync {
    fn combine(&self, other: &Self) -> Self;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AddKey(pub u128);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MulKey(pub u128);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VecKey(pub Vec<i64>);

impl SumKey for AddKey {
    fn combine(&self, o: &Self) -> Self {
        AddKey(self.0 + o.0)
    }
}

impl SumKey for MulKey {
    fn combine(&self, o: &Self) -> Self {
        MulKey(self.0 * o.0)
    }
}

impl SumKey for VecKey {
    fn combine(&self, o: &Self) -> Self {
        VecKey(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

/// Keys of the set elements plus the identity key (the empty sum).
#[derive(Clone, Debug)]
pub struct KeySet<K> {
    pub keys: Vec<K>,
    pub identity: K,
}

pub enum Keyed {
    Add(KeySet<AddKey>),
    Mul(KeySet<MulKey>),
    Vec(KeySet<VecKey>),
}

/// Run a generic expression on whichever key type an embedding uses.
#[macro_export]
#[doc(hidden)]
macro_rules! with_keys {
    ($keyed:expr, $ks:ident => $body:expr) => {
        match $keyed {
            $crate::keys::Keyed::Add($ks) => $body,
            $crate::keys::Keyed::Mul($ks) => $body,
            $crate::keys::Keyed::Vec($ks) => $body,
        }
    };
}

#[derive(Clone, Debug)]
pub enum Embedding {
    /// values = base + offsets[i] * step, offsets ≥ 0 with gcd 1.
    Lattice {
        base: ExactReal,
        step: ExactReal,
        offsets: Vec<u64>,
    },
    /// logs of positive integers: a sum maps to the product.
    Mult { ints: Vec<u128> },
    /// mixed-radix packing of shifted integer coefficient vectors.
    Packed {
        atoms: Vec<AtomId>,
        denom: BigInt,
        mins: Vec<i64>,
        strides: Vec<u128>,
        keys: Vec<u128>,
    },
    /// raw integer coefficient vectors.
    Vector {
        atoms: Vec<AtomId>,
        denom: BigInt,
        keys: Vec<Vec<i64>>,
    },
}

fn lattice_embedding(reg: &Registry, values: &[ExactReal]) -> Result<Option<Embedding>> {
    let v0 = &values[0];
    let mut dir: Option<ExactReal> = None;
    let mut ratios = vec![Rational::zero()];
    for v in &values[1..] {
        let d = reg.sub(v, v0)?;
        let u = match &dir {
            None => {
                dir = Some(d.clone());
                ratios.push(Rational::one());
                continue;
            }
            Some(u) => u,
        };
        if d.coeffs().len() != u.coeffs().len() || d.is_zero() {
            return Ok(None);
        }
        let c = &d.coeffs()[0].1 / &u.coeffs()[0].1;
        let proportional = d
            .coeffs()
            .iter()
            .zip(u.coeffs())
            .all(|((a, x), (b, y))| a == b && *x == &c * y);
        if !proportional {
            return Ok(None);
        }
        ratios.push(c);
    }
    let Some(u) = dir else {
        return Ok(Some(Embedding::Lattice {
            base: v0.clone(),
            step: reg.zero(),
            offsets: vec![0],
        }));
    };
    let l = ratios
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = ratios
        .iter()
        .map(|r| (r * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let t: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
    let tmin = t.iter().min().cloned().unwrap_or_default();
    let offsets = t
        .iter()
        .map(|x| (x - &tmin).to_u64())
        .collect::<Option<Vec<u64>>>();
    let Some(offsets) = offsets else {
        return Ok(None);
    };
    let step = reg.scale(&Rational::new(g, l), &u)?;
    let base =
        reg.linear_combine(&[(Rational::one(), v0), (Rational::from_integer(tmin), &step)])?;
    Ok(Some(Embedding::Lattice {
        base,
        step,
        offsets,
    }))
}

fn mult_embedding(reg: &Registry, values: &[ExactReal], k: u32) -> Option<Embedding> {
    let mut ints = Vec::with_capacity(values.len());
    for v in values {
        let mut n: u128 = 1;
        for (a, c) in v.coeffs() {
            let AtomKind::LogPrime(p) = reg.atom(*a)?.kind else {
                return None;
            };
            if !c.is_integer() || c.is_negative() {
                return None;
            }
            n = n.checked_mul((p as u128).checked_pow(c.to_integer().to_u32()?)?)?;
        }
        ints.push(n);
    }
    ints.iter().max()?.checked_pow(k.max(1))?;
    Some(Embedding::Mult { ints })
}

fn vector_embedding(values: &[ExactReal], k: u32) -> Result<Embedding> {
    let mut atoms: Vec<AtomId> = values
        .iter()
        .flat_map(|v| v.coeffs().iter().map(|(a, _)| *a))
        .collect();
    atoms.sort_unstable();
    atoms.dedup();
    let denom = Registry::common_denominator(values);
    let dr = Rational::from_integer(denom.clone());
    let overflow = || Error::Overflow("sum-key embedding".into());
    let mut keys = Vec::with_capacity(values.len());
    for v in values {
        let mut row = vec![0i64; atoms.len()];
        for (a, c) in v.coeffs() {
            let i = atoms.binary_search(a).expect("collected atom");
            row[i] = (c * &dr).to_integer().to_i64().ok_or_else(overflow)?;
        }
        keys.push(row);
    }
    let kk = k.max(1) as i128;
    let mut mins = vec![0i64; atoms.len()];
    let mut strides = vec![0u128; atoms.len()];
    let mut stride: Option<u128> = Some(1);
    for c in 0..atoms.len() {
        let lo = keys.iter().map(|r| r[c]).min().unwrap_or(0);
        let hi = keys.iter().map(|r| r[c]).max().unwrap_or(0);
        if (hi as i128 * kk).abs() > i64::MAX as i128 || (lo as i128 * kk).abs() > i64::MAX as i128
        {
            return Err(overflow());
        }
        mins[c] = lo;
        let radix = ((hi as i128 - lo as i128) * kk + 1) as u128;
        strides[c] = stride.unwrap_or(0);
        stride = stride.and_then(|s| s.checked_mul(radix));
    }
    if stride.is_some() {
        let packed = keys
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&mins)
                    .zip(&strides)
                    .map(|((x, m), s)| (*x - *m) as u128 * s)
                    .sum()
            })
            .collect();
        Ok(Embedding::Packed {
            atoms,
            denom,
            mins,
            strides,
            keys: packed,
        })
    } else {
        Ok(Embedding::Vector { atoms, denom, keys })
    }
}

impl Embedding {
    /// Pick the cheapest injective embedding for sums of up to `k` values.
    pub fn new(reg: &Registry, values: &[ExactReal], k: u32) -> Result<Self> {
        for v in values {
            reg.check(v)?;
        }
        if values.is_empty() {
            return Ok(Embedding::Vector {
                atoms: vec![],
                denom: BigInt::one(),
                keys: vec![],
            });
        }
        if let Some(e) = lattice_embedding(reg, values)? {
            if let Embedding::Lattice { offsets, .. } = &e {
                let max = offsets.iter().max().copied().unwrap_or(0) as u128;
                if max
                    .checked_mul(k.max(1) as u128)
                    .is_some_and(|m| m < u128::MAX / 2)
                {
                    return Ok(e);
                }
            }
        }
        if let Some(e) = mult_embedding(reg, values, k) {
            return Ok(e);
        }
        vector_embedding(values, k)
    }

    pub fn len(&self) -> usize {
        match self {
            Embedding::Lattice { offsets, .. } => offsets.len(),
            Embedding::Mult { ints } => ints.len(),
            Embedding::Packed { keys, .. } => keys.len(),
            Embedding::Vector { keys, .. } => keys.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lattice_offsets(&self) -> Option<&[u64]> {
        match self {
            Embedding::Lattice { offsets, .. } => Some(offsets),
            _ => None,
        }
    }

    pub fn keyed(&self) -> Keyed {
        match self {
            Embedding::Lattice { offsets, .. } => Keyed::Add(KeySet {
                keys: offsets.iter().map(|&t| AddKey(t as u128)).collect(),
                identity: AddKey(0),
            }),
            Embedding::Mult { ints } => Keyed::Mul(KeySet {
                keys: ints.iter().map(|&n| MulKey(n)).collect(),
                identity: MulKey(1),
            }),
            Embedding::Packed { keys, .. } => Keyed::Add(KeySet {
                keys: keys.iter().map(|&n| AddKey(n)).collect(),
                identity: AddKey(0),
            }),
            Embedding::Vector { atoms, keys, .. } => Keyed::Vec(KeySet {
                keys: keys.iter().map(|r| VecKey(r.clone())).collect(),
                identity: VecKey(vec![0; atoms.len()]),
            }),
        }
    }

    /// The exact value of a sum of `order` set elements with additive key `key`.
    pub fn decode_add(&self, reg: &Registry, order: u32, key: u128) -> Result<ExactReal> {
        match self {
            Embedding::Lattice { base, step, .. } => reg.linear_combine(&[
                (Rational::from_integer(order.into()), base),
                (Rational::from_integer(BigInt::from(key)), step),
            ]),
            Embedding::Packed {
                atoms,
                denom,
                mins,
                strides,
                ..
            } => {
                let mut terms = Vec::with_capacity(atoms.len());
                let mut rest = key;
                for c in (0..atoms.len()).rev() {
                    let digit = rest / strides[c];
                    rest %= strides[c];
                    let coord = BigInt::from(digit) + BigInt::from(mins[c]) * BigInt::from(order);
                    terms.push((atoms[c], Rational::new(coord, denom.clone())));
                }
                reg.value(terms)
            }
            _ => Err(Error::Invalid(
                "additive key on a non-additive embedding".into(),
            )),
        }
    }

    /// The exact value log(product).
    pub fn decode_mul(&self, reg: &Registry, key: u128) -> Result<ExactReal> {
        let mut rest = key;
        let mut terms = Vec::new();
        for a in reg.atoms() {
            if let AtomKind::LogPrime(p) = a.kind {
                let p = p as u128;
                let mut e = 0i64;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                if e > 0 {
                    terms.push((a.id, Rational::from_integer(e.into())));
                }
            }
        }
        if rest != 1 {
            return Err(Error::Invalid(
                "product key has a factor without an atom".into(),
            ));
        }
        reg.value(terms)
    }

    pub fn decode_vec(&self, reg: &Registry, key: &[i64]) -> Result<ExactReal> {
        match self {
            Embedding::Vector { atoms, denom, .. } => reg.value(
                atoms
                    .iter()
                    .zip(key)
                    .map(|(a, x)| (*a, Rational::new(BigInt::from(*x), denom.clone())))
                    .collect(),
            ),
            _ => Err(Error::Invalid(
                "vector key on a non-vector embedding".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::{rat, rat_int, FormalEnclosure, RegistryBuilder};

    #[test]
    fn rational_sets_are_lattices() {
        let reg = RegistryBuilder::new().build();
        let vals: Vec<_> = [rat(1, 2), rat(3, 2), rat(5, 2), rat(7, 2)]
            .into_iter()
            .map(|q| reg.rational(q))
            .collect();
        let e = Embedding::new(&reg, &vals, 2).unwrap();
        assert_eq!(e.lattice_offsets(), Some(&[0, 1, 2, 3][..]));
        // 1/2 + 7/2 = 4 has key 3 at order 2
        assert_eq!(
            e.decode_add(&reg, 2, 3).unwrap().as_rational(),
            Some(rat_int(4))
        );
    }

    #[test]
    fn bayart_block_is_a_lattice() {
        let mut b = RegistryBuilder::new();
        let mu = b
            .formal("m", FormalEnclosure::Anchored(rat_int(3)), "t")
            .unwrap();
        let d = b
            .formal("d", FormalEnclosure::Anchored(rat(1, 8)), "t")
            .unwrap();
        let reg = b.build();
        let vals: Vec<_> = (0..9)
            .map(|k| reg.value(vec![(mu, rat_int(1)), (d, rat_int(k))]).unwrap())
            .collect();
        let e = Embedding::new(&reg, &vals, 2).unwrap();
        assert_eq!(
            e.lattice_offsets().unwrap(),
            &(0..9).collect::<Vec<u64>>()[..]
        );
        assert_eq!(reg.format(&e.decode_add(&reg, 2, 5).unwrap()), "2*m + 5*d");
    }

    #[test]
    fn log_integers_use_products() {
        let f = crate::frequency::gen_log_integers(12).unwrap();
        let e = Embedding::new(f.registry(), f.values(), 3).unwrap();
        assert!(matches!(e, Embedding::Mult { .. }));
        let v = e.decode_mul(f.registry(), 12).unwrap();
        assert_eq!(f.registry().format(&v), "2*log2 + log3");
    }

    #[test]
    fn independent_atoms_pack() {
        let mut b = RegistryBuilder::new();
        let ids: Vec<_> = (0..4)
            .map(|i| {
                b.formal(
                    &alloc::format!("x{i}"),
                    FormalEnclosure::Anchored(rat(i + 1, 1)),
                    "t",
                )
                .unwrap()
            })
            .collect();
        let reg = b.build();
        let vals: Vec<_> = ids.iter().map(|&a| reg.atom_value(a).unwrap()).collect();
        let e = Embedding::new(&reg, &vals, 2).unwrap();
        let Embedding::Packed { keys, .. } = &e else {
            panic!("expected packing")
        };
        let x0x3 = keys[0] + keys[3];
        assert_eq!(reg.format(&e.decode_add(&reg, 2, x0x3).unwrap()), "x0 + x3");
    }
}
