//! Representation counts r_k(s), additive energies E_k and the subset
//! supremum of E_k(A')^{1/2k} / √#A'.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::hash::BuildHasherDefault;

use hashbrown::HashMap;
use num_bigint::BigUint;
use rustc_hash::FxHasher;

use crate::error::{Error, Result};
use crate::exactreal::{ExactReal, Rational, Registry};
use crate::keys::{Embedding, KeySet, Keyed, SumKey};
use crate::ntt;
use crate::util::binomial;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Exhaustive subset search is limited to this many elements.
pub const EXACT_SUBSET_CAP: usize = 20;
/// Dense array updates are this many times cheaper than hashed ones.
pub const DENSE_COST_FACTOR: u64 = 64;

pub(crate) type FxMap<K, V> = HashMap<K, V, BuildHasherDefault<FxHasher>>;

#[derive(Clone, Debug)]
enum Table {
    Dense(Vec<u128>),
    Add(FxMap<crate::keys::AddKey, u128>),
    Mul(FxMap<crate::keys::MulKey, u128>),
    Vec(FxMap<crate::keys::VecKey, u128>),
}

/// r_k(s) = number of ordered k-tuples of the set summing to s.
#[derive(Clone, Debug)]
pub struct RepCounts {
    k: u32,
    n: usize,
    embedding: Embedding,
    table: Table,
}

fn overflow(what: &str) -> Error {
    Error::Overflow(what.into())
}

fn sum_sq<'a>(mut counts: impl Iterator<Item = &'a u128>) -> Result<u128> {
    counts.try_fold(0u128, |acc, &c| {
        c.checked_mul(c)
            .and_then(|sq| acc.checked_add(sq))
            .ok_or_else(|| overflow("energy"))
    })
}

impl RepCounts {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn set_size(&self) -> usize {
        self.n
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.table, Table::Dense(_))
    }

    pub fn support_size(&self) -> usize {
        match &self.table {
            Table::Dense(v) => v.iter().filter(|&&c| c > 0).count(),
            Table::Add(m) => m.len(),
            Table::Mul(m) => m.len(),
            Table::Vec(m) => m.len(),
        }
    }

    pub fn total(&self) -> u128 {
        match &self.table {
            Table::Dense(v) => v.iter().sum(),
            Table::Add(m) => m.values().sum(),
            Table::Mul(m) => m.values().sum(),
            Table::Vec(m) => m.values().sum(),
        }
    }

    pub fn energy(&self) -> Result<u128> {
        match &self.table {
            Table::Dense(v) => sum_sq(v.iter()),
            Table::Add(m) => sum_sq(m.values()),
            Table::Mul(m) => sum_sq(m.values()),
            Table::Vec(m) => sum_sq(m.values()),
        }
    }

    /// All (sum, count) pairs, ordered by value.
    pub fn entries(&self, reg: &Registry) -> Result<Vec<(ExactReal, u128)>> {
        let e = &self.embedding;
        let mut out: Vec<(ExactReal, u128)> = match &self.table {
            Table::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(s, &c)| Ok((e.decode_add(reg, self.k, s as u128)?, c)))
                .collect::<Result<_>>()?,
            Table::Add(m) => m
                .iter()
                .map(|(s, &c)| Ok((e.decode_add(reg, self.k, s.0)?, c)))
                .collect::<Result<_>>()?,
            Table::Mul(m) => m
                .iter()
                .map(|(s, &c)| Ok((e.decode_mul(reg, s.0)?, c)))
                .collect::<Result<_>>()?,
            Table::Vec(m) => m
                .iter()
                .map(|(s, &c)| Ok((e.decode_vec(reg, &s.0)?, c)))
                .collect::<Result<_>>()?,
        };
        sort_values(reg, &mut out)?;
        Ok(out)
    }
}

/// Certified order where decidable. Sums whose enclosures never separate
/// (formal atoms with coinciding anchors) fall back to coefficient order.
fn sort_values<T>(reg: &Registry, v: &mut [(ExactReal, T)]) -> Result<()> {
    v.sort_by(|a, b| a.0.approx().total_cmp(&b.0.approx()));
    let cmp = |a: &ExactReal, b: &ExactReal| match reg.compare(a, b) {
        Err(Error::UndecidableComparison { .. }) => Ok(a.coeffs().cmp(b.coeffs())),
        r => r,
    };
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && cmp(&v[j - 1].0, &v[j].0)? == Ordering::Greater {
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    Ok(())
}

fn hashed_counts<K: SumKey>(ks: &KeySet<K>, k: u32, budget: u64) -> Result<FxMap<K, u128>> {
    let n = ks.keys.len() as u128;
    let mut cur: FxMap<K, u128> = FxMap::default();
    cur.insert(ks.identity.clone(), 1);
    let mut spent: u128 = 0;
    for _ in 0..k {
        let needed = cur.len() as u128 * n;
        spent += needed;
        if spent > budget as u128 {
            return Err(Error::size(
                "representation counts",
                spent,
                budget as u128,
                "; use a lattice-structured set or a smaller k",
            ));
        }
        let mut next: FxMap<K, u128> = FxMap::default();
        next.reserve(cur.len().saturating_mul(ks.keys.len()).min(1 << 24));
        for (s, &c) in &cur {
            for a in &ks.keys {
                let e = next.entry(s.combine(a)).or_insert(0);
                *e = e
                    .checked_add(c)
                    .ok_or_else(|| overflow("representation counts"))?;
            }
        }
        cur = next;
    }
    Ok(cur)
}

fn dense_counts(offsets: &[u64], k: u32, budget: u64) -> Result<Option<Vec<u128>>> {
    let n = offsets.len() as u128;
    let s = offsets.iter().max().copied().unwrap_or(0) as usize + 1;
    let Some(out_len) = (s - 1).checked_mul(k as usize).map(|x| x + 1) else {
        return Ok(None);
    };
    let mut ind = vec![0u64; s];
    for &t in offsets {
        ind[t as usize] += 1;
    }
    // every count is at most n^(k-1)
    let exact = n
        .checked_pow(k.saturating_sub(1))
        .is_some_and(|m| m < ntt::modulus());
    if exact
        && out_len <= ntt::MAX_LEN
        && (out_len as u128) <= budget as u128 * DENSE_COST_FACTOR as u128
    {
        return Ok(ntt::power(&ind, k));
    }
    // iterated dense convolution
    let mut cost: u128 = 0;
    let mut cur = vec![1u128];
    for _ in 0..k {
        cost += cur.len() as u128 * n;
        if cost > budget as u128 * DENSE_COST_FACTOR as u128 {
            return Ok(None);
        }
        let mut next = vec![0u128; cur.len() + s - 1];
        for (i, &c) in cur.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &t in offsets {
                let e = &mut next[i + t as usize];
                *e = e
                    .checked_add(c)
                    .ok_or_else(|| overflow("representation counts"))?;
            }
        }
        cur = next;
    }
    Ok(Some(cur))
}

pub fn representation_counts(
    reg: &Registry,
    values: &[ExactReal],
    k: u32,
    budget: u64,
) -> Result<RepCounts> {
    if k == 0 {
        return Err(Error::Invalid("energy order k must be >= 1".into()));
    }
    let embedding = Embedding::new(reg, values, k)?;
    let table = if let Some(off) = embedding.lattice_offsets() {
        match dense_counts(off, k, budget)? {
            Some(v) => Table::Dense(v),
            None => Table::Add(match embedding.keyed() {
                Keyed::Add(ks) => hashed_counts(&ks, k, budget)?,
                _ => unreachable!("lattice embeddings are additive"),
            }),
        }
    } else {
        match embedding.keyed() {
            Keyed::Add(ks) => Table::Add(hashed_counts(&ks, k, budget)?),
            Keyed::Mul(ks) => Table::Mul(hashed_counts(&ks, k, budget)?),
            Keyed::Vec(ks) => Table::Vec(hashed_counts(&ks, k, budget)?),
        }
    };
    Ok(RepCounts {
        k,
        n: values.len(),
        embedding,
        table,
    })
}

/// E_k(A) = Σ_s r_k(s)².
pub fn additive_energy(reg: &Registry, values: &[ExactReal], k: u32, budget: u64) -> Result<u128> {
    representation_counts(reg, values, k, budget)?.energy()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetMode {
    Exact,
    Greedy,
    /// Exact when the set is small enough, greedy otherwise.
    Auto,
}

/// Best subset found for E_k(A')^{1/2k}/√#A'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSup {
    pub k: u32,
    /// Indices into the input list, increasing.
    pub subset: Vec<usize>,
    pub energy: u128,
    /// True for exhaustive search; otherwise the value is only a lower bound.
    pub exact: bool,
    /// True if the search stopped on the budget.
    pub truncated: bool,
}

impl SubsetSup {
    pub fn size(&self) -> usize {
        self.subset.len()
    }

    /// ratio^{2k} = E_k / n^k, exactly.
    pub fn ratio_pow(&self) -> Rational {
        let n = BigUint::from(self.subset.len()).pow(self.k);
        Rational::new(BigUint::from(self.energy).into(), n.into())
    }

    /// log of the ratio E_k^{1/2k} / √n.
    pub fn log_ratio(&self) -> f64 {
        (libm::log(self.energy as f64) - self.k as f64 * libm::log(self.subset.len() as f64))
            / (2.0 * self.k as f64)
    }

    pub fn ratio(&self) -> f64 {
        libm::exp(self.log_ratio())
    }
}

/// Is E1/n1^k > E2/n2^k ?
fn better(e1: u128, n1: usize, e2: u128, n2: usize, k: u32) -> bool {
    let lhs = (n2 as u128).checked_pow(k).and_then(|p| e1.checked_mul(p));
    let rhs = (n1 as u128).checked_pow(k).and_then(|p| e2.checked_mul(p));
    match (lhs, rhs) {
        (Some(a), Some(b)) => a > b,
        _ => {
            BigUint::from(e1) * BigUint::from(n2).pow(k)
                > BigUint::from(e2) * BigUint::from(n1).pow(k)
        }
    }
}

struct Best {
    energy: u128,
    size: usize,
    members: Vec<bool>,
}

impl Best {
    fn offer(
        &mut self,
        energy: u128,
        size: usize,
        k: u32,
        members: impl FnOnce() -> Vec<bool>,
    ) -> bool {
        if size > 0 && (self.size == 0 || better(energy, size, self.energy, self.size, k)) {
            self.energy = energy;
            self.size = size;
            self.members = members();
            true
        } else {
            false
        }
    }
}

/// r_1..r_k of a varying subset, updated one element at a time.
struct Incremental<K: SumKey> {
    k: u32,
    r: Vec<FxMap<K, u128>>,
    energy: u128,
    multiples: Vec<Vec<K>>,
    binom: Vec<Vec<u128>>,
}

impl<K: SumKey> Incremental<K> {
    fn new(ks: &KeySet<K>, k: u32) -> Self {
        let mut r: Vec<FxMap<K, u128>> = (0..=k).map(|_| FxMap::default()).collect();
        r[0].insert(ks.identity.clone(), 1);
        let multiples = ks
            .keys
            .iter()
            .map(|x| {
                let mut m = vec![ks.identity.clone()];
                for i in 1..=k as usize {
                    let next = m[i - 1].combine(x);
                    m.push(next);
                }
                m
            })
            .collect();
        let binom = (0..=k as u64)
            .map(|m| (0..=m).map(|i| binomial(m, i)).collect())
            .collect();
        Incremental {
            k,
            r,
            energy: 0,
            multiples,
            binom,
        }
    }

    /// Cost of the next add/remove in hashed updates.
    fn cost(&self) -> u128 {
        (0..self.k as usize)
            .map(|m| self.r[m].len() as u128 * (self.k as usize - m) as u128)
            .sum()
    }

    fn add(&mut self, x: usize) -> Result<()> {
        let k = self.k as usize;
        for m in (1..=k).rev() {
            let mut target = core::mem::take(&mut self.r[m]);
            for i in 1..=m {
                let c_mi = self.binom[m][i];
                let shift = &self.multiples[x][i];
                for (s, &c) in &self.r[m - i] {
                    let d = c_mi * c;
                    let e = target.entry(s.combine(shift)).or_insert(0);
                    if m == k {
                        // (e + d)^2 - e^2
                        let delta = d
                            .checked_mul(2 * *e + d)
                            .ok_or_else(|| overflow("subset energy"))?;
                        self.energy = self
                            .energy
                            .checked_add(delta)
                            .ok_or_else(|| overflow("subset energy"))?;
                    }
                    *e += d;
                }
            }
            self.r[m] = target;
        }
        Ok(())
    }

    fn remove(&mut self, x: usize) {
        let k = self.k as usize;
        for m in 1..=k {
            let mut target = core::mem::take(&mut self.r[m]);
            for i in 1..=m {
                let c_mi = self.binom[m][i];
                let shift = &self.multiples[x][i];
                for (s, &c) in &self.r[m - i] {
                    let d = c_mi * c;
                    let key = s.combine(shift);
                    let e = target.get_mut(&key).expect("removal of a present sum");
                    if m == k {
                        self.energy -= d * (2 * *e - d);
                    }
                    *e -= d;
                    if *e == 0 {
                        target.remove(&key);
                    }
                }
            }
            self.r[m] = target;
        }
    }
}

fn exact_search<K: SumKey>(ks: &KeySet<K>, k: u32) -> Result<Best> {
    let n = ks.keys.len();
    let mut inc = Incremental::new(ks, k);
    let mut members = vec![false; n];
    let mut size = 0usize;
    let mut best = Best {
        energy: 0,
        size: 0,
        members: vec![],
    };
    for g in 1u64..(1u64 << n) {
        let bit = g.trailing_zeros() as usize;
        if members[bit] {
            inc.remove(bit);
            size -= 1;
        } else {
            inc.add(bit)?;
            size += 1;
        }
        members[bit] = !members[bit];
        best.offer(inc.energy, size, k, || members.clone());
    }
    Ok(best)
}

fn greedy_search<K: SumKey>(ks: &KeySet<K>, k: u32, budget: u64) -> Result<(Best, bool)> {
    let n = ks.keys.len();
    let mut inc = Incremental::new(ks, k);
    let mut best = Best {
        energy: 0,
        size: 0,
        members: vec![],
    };
    let mut spent: u128 = 0;
    let budget = budget as u128;
    let prefix = |len: usize| (0..n).map(|i| i < len).collect::<Vec<bool>>();
    for i in 0..n {
        spent += inc.cost();
        if spent > budget {
            return Ok((best, true));
        }
        inc.add(i)?;
        best.offer(inc.energy, i + 1, k, || prefix(i + 1));
    }
    for i in 0..n.saturating_sub(1) {
        spent += inc.cost();
        if spent > budget {
            return Ok((best, true));
        }
        inc.remove(i);
        best.offer(inc.energy, n - i - 1, k, || (0..n).map(|t| t > i).collect());
    }
    if n > 64 {
        return Ok((best, false));
    }
    // local toggles from the best set so far
    let mut inc = Incremental::new(ks, k);
    let mut members = best.members.clone();
    let mut size = 0;
    for (i, _) in members.iter().enumerate().filter(|(_, &m)| m) {
        inc.add(i)?;
        size += 1;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for x in 0..n {
            spent += 2 * inc.cost();
            if spent > budget {
                return Ok((best, true));
            }
            if members[x] {
                if size == 1 {
                    continue;
                }
                inc.remove(x);
                members[x] = false;
                if best.offer(inc.energy, size - 1, k, || members.clone()) {
                    size -= 1;
                    improved = true;
                } else {
                    inc.add(x)?;
                    members[x] = true;
                }
            } else {
                inc.add(x)?;
                members[x] = true;
                if best.offer(inc.energy, size + 1, k, || members.clone()) {
                    size += 1;
                    improved = true;
                } else {
                    inc.remove(x);
                    members[x] = false;
                }
            }
        }
    }
    Ok((best, false))
}

/// Prefix then suffix passes for k = 2 on a lattice set, with dense arrays.
fn dense_greedy_k2(offsets: &[u64], budget: u64) -> (Best, bool) {
    let n = offsets.len();
    let s = offsets.iter().max().copied().unwrap_or(0) as usize + 1;
    let mut r2 = vec![0u64; 2 * s - 1];
    let mut energy: u128 = 0;
    let mut best = Best {
        energy: 0,
        size: 0,
        members: vec![],
    };
    let limit = budget as u128 * DENSE_COST_FACTOR as u128;
    let mut spent: u128 = 0;
    let bump = |r2: &mut [u64], energy: &mut u128, idx: usize, d: u64, add: bool| {
        let c = r2[idx] as u128;
        let d = d as u128;
        if add {
            *energy += d * (2 * c + d);
            r2[idx] += d as u64;
        } else {
            *energy -= d * (2 * c - d);
            r2[idx] -= d as u64;
        }
    };
    for i in 0..n {
        spent += i as u128 + 1;
        if spent > limit {
            return (best, true);
        }
        let x = offsets[i] as usize;
        for &y in &offsets[..i] {
            bump(&mut r2, &mut energy, x + y as usize, 2, true);
        }
        bump(&mut r2, &mut energy, 2 * x, 1, true);
        best.offer(energy, i + 1, 2, || (0..n).map(|t| t <= i).collect());
    }
    for i in 0..n.saturating_sub(1) {
        spent += (n - i) as u128;
        if spent > limit {
            return (best, true);
        }
        let x = offsets[i] as usize;
        for &y in &offsets[i + 1..] {
            bump(&mut r2, &mut energy, x + y as usize, 2, false);
        }
        bump(&mut r2, &mut energy, 2 * x, 1, false);
        best.offer(energy, n - i - 1, 2, || (0..n).map(|t| t > i).collect());
    }
    (best, false)
}

/// Supremum over nonempty subsets A' of E_k(A')^{1/2k}/√#A'. Exhaustive in
/// exact mode; greedy mode returns a flagged lower bound.
pub fn subset_energy_sup(
    reg: &Registry,
    values: &[ExactReal],
    k: u32,
    mode: SubsetMode,
    budget: u64,
) -> Result<SubsetSup> {
    if k == 0 {
        return Err(Error::Invalid("energy order k must be >= 1".into()));
    }
    let n = values.len();
    if n == 0 {
        return Err(Error::Invalid("subset supremum of an empty set".into()));
    }
    let exact = match mode {
        SubsetMode::Exact if n > EXACT_SUBSET_CAP => {
            return Err(Error::Mode {
                cap: EXACT_SUBSET_CAP,
                got: n,
            })
        }
        SubsetMode::Exact => true,
        SubsetMode::Greedy => false,
        SubsetMode::Auto => n <= EXACT_SUBSET_CAP,
    };
    let embedding = Embedding::new(reg, values, k)?;
    let (best, truncated) = if exact {
        (
            crate::with_keys!(embedding.keyed(), ks => exact_search(&ks, k)?),
            false,
        )
    } else if let (Some(off), 2, true) = (embedding.lattice_offsets(), k, n > 64) {
        dense_greedy_k2(off, budget)
    } else {
        crate::with_keys!(embedding.keyed(), ks => greedy_search(&ks, k, budget)?)
    };
    let subset = best
        .members
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| i)
        .collect();
    Ok(SubsetSup {
        k,
        subset,
        energy: best.energy,
        exact,
        truncated,
    })
}
