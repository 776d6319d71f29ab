//! Finite frequencies: generators, block decomposition, union and density.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Range;

use hashbrown::HashSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactreal::{
    rat, rat_int, AtomId, ExactReal, FormalEnclosure, Rational, Registry, RegistryBuilder,
};
use crate::util::{factorize, par_map, spf_sieve};

/// A strictly increasing finite list of non-negative exact reals.
#[derive(Clone, Debug)]
pub struct Frequency {
    registry: Arc<Registry>,
    values: Vec<ExactReal>,
    provenance: String,
}

impl Frequency {
    /// Sort (certified), reject duplicates and negative values.
    pub fn new(
        registry: Arc<Registry>,
        mut values: Vec<ExactReal>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        for v in &values {
            registry.check(v)?;
        }
        values.sort_by(|a, b| a.enclosure().mid_f64().total_cmp(&b.enclosure().mid_f64()));
        certified_insertion_sort(&registry, &mut values)?;
        if let Some(first) = values.first() {
            if registry.sign(first)? == Ordering::Less {
                return Err(Error::Invalid(format!(
                    "negative frequency value {}",
                    registry.format(first)
                )));
            }
        }
        Ok(Frequency {
            registry,
            values,
            provenance: provenance.into(),
        })
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.registry
    }

    pub fn values(&self) -> &[ExactReal] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// The same values under a new descriptor.
    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Sub-frequency on a set of indices (kept in order).
    pub fn select(&self, indices: &[usize]) -> Vec<ExactReal> {
        indices.iter().map(|&i| self.values[i].clone()).collect()
    }
}

/// Nearly-sorted input: insertion sort costs O(n) certified comparisons.
fn certified_insertion_sort(reg: &Registry, v: &mut [ExactReal]) -> Result<()> {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 {
            match reg.compare(&v[j - 1], &v[j])? {
                Ordering::Less => break,
                Ordering::Equal => return Err(Error::Collision(reg.format(&v[j]))),
                Ordering::Greater => {
                    v.swap(j - 1, j);
                    j -= 1;
                }
            }
        }
    }
    Ok(())
}

fn log_of_integer(b: &mut RegistryBuilder, n: u64, spf: Option<&[u32]>) -> Vec<(AtomId, Rational)> {
    let mut out = Vec::new();
    match spf {
        Some(spf) => {
            let mut m = n as usize;
            while m > 1 {
                let p = spf[m] as usize;
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                out.push((b.log_prime(p as u64), rat_int(e)));
            }
        }
        None => {
            for (p, e) in factorize(n) {
                out.push((b.log_prime(p), rat_int(e as i64)));
            }
        }
    }
    out
}

/// log 1, ..., log N over log-prime atoms.
pub fn gen_log_integers(n: u64) -> Result<Frequency> {
    gen_log_integers_with(n, RegistryBuilder::new())
}

pub fn gen_log_integers_with(n: u64, mut b: RegistryBuilder) -> Result<Frequency> {
    if n == 0 {
        return Err(Error::Invalid("log_integers needs N >= 1".into()));
    }
    let n_us = usize::try_from(n).map_err(|_| Error::Overflow("log_integers N".into()))?;
    let spf = spf_sieve(n_us);
    let terms: Vec<_> = (1..=n)
        .map(|m| log_of_integer(&mut b, m, Some(&spf)))
        .collect();
    let reg = b.build();
    let values = terms
        .into_iter()
        .map(|t| reg.value(t))
        .collect::<Result<Vec<_>>>()?;
    // log is increasing on integers, so the order is known
    Ok(Frequency {
        registry: reg,
        values,
        provenance: format!("log_integers(N={n})"),
    })
}

fn factor_rational(b: &mut RegistryBuilder, q: &Rational) -> Result<Vec<(AtomId, Rational)>> {
    let num = q
        .numer()
        .to_u64()
        .ok_or_else(|| Error::Overflow("hurwitz argument".into()))?;
    let den = q
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Overflow("hurwitz argument".into()))?;
    let mut t = log_of_integer(b, num, None);
    t.extend(
        log_of_integer(b, den, None)
            .into_iter()
            .map(|(a, e)| (a, -e)),
    );
    Ok(t)
}

/// Distinct values log(Σ α_j m_j), 0 ≤ m_j ≤ M, with argument ≥ 1 and value < X.
pub fn gen_hurwitz(
    alphas: &[Rational],
    m: u64,
    cutoff: &Rational,
    max_points: u64,
) -> Result<Frequency> {
    if alphas.is_empty() || alphas.iter().any(|a| !a.is_positive()) {
        return Err(Error::Invalid(
            "hurwitz needs a nonempty list of positive alphas".into(),
        ));
    }
    if m < 1 || *cutoff < rat_int(1) {
        return Err(Error::Invalid("hurwitz needs M >= 1 and X >= 1".into()));
    }
    let points = (m as u128 + 1)
        .checked_pow(alphas.len() as u32)
        .unwrap_or(u128::MAX);
    if points > max_points as u128 {
        return Err(Error::size(
            "hurwitz enumeration",
            points,
            max_points as u128,
            "",
        ));
    }
    let one = rat_int(1);
    let mut args: BTreeSet<Rational> = BTreeSet::new();
    let mut idx = alloc::vec![0u64; alphas.len()];
    loop {
        let s: Rational = idx
            .iter()
            .zip(alphas)
            .map(|(&k, a)| a * rat_int(k as i64))
            .sum();
        if s >= one {
            args.insert(s);
        }
        let mut d = 0;
        loop {
            if d == idx.len() {
                return finish_hurwitz(args, alphas, m, cutoff);
            }
            idx[d] += 1;
            if idx[d] <= m {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

fn finish_hurwitz(
    args: BTreeSet<Rational>,
    alphas: &[Rational],
    m: u64,
    cutoff: &Rational,
) -> Result<Frequency> {
    let mut b = RegistryBuilder::new();
    let terms = args
        .iter()
        .map(|q| factor_rational(&mut b, q))
        .collect::<Result<Vec<_>>>()?;
    let reg = b.build();
    let mut values = Vec::with_capacity(terms.len());
    for t in terms {
        let v = reg.value(t)?;
        // arguments are increasing, so stop at the first value past the cutoff
        if reg.compare_rational(&v, cutoff)? != Ordering::Less {
            break;
        }
        values.push(v);
    }
    let a: Vec<String> = alphas.iter().map(|a| format!("{a}")).collect();
    let provenance = format!("hurwitz(alphas=[{}], M={m}, X={cutoff})", a.join(","));
    Ok(Frequency {
        registry: reg,
        values,
        provenance,
    })
}

/// Center of the δ_j enclosure: (1 - 2^-8) 2^-j.
pub fn bayart_delta_anchor(j: u32) -> Rational {
    rat(255, 256) * Rational::new(BigInt::one(), BigInt::one() << j as usize)
}

/// Blocks j = 1..=J, block j = {μ_j + k δ_j : 0 ≤ k ≤ 2^j} over formal atoms.
pub fn gen_bayart(j_max: u32, max_values: u64) -> Result<Frequency> {
    if j_max == 0 {
        return Err(Error::Invalid("bayart needs J >= 1".into()));
    }
    if j_max > 40 {
        return Err(Error::size(
            "bayart generator",
            u128::MAX,
            max_values as u128,
            " (J too large)",
        ));
    }
    let total: u128 = (1..=j_max).map(|j| (1u128 << j) + 1).sum();
    if total > max_values as u128 {
        return Err(Error::size(
            "bayart generator",
            total,
            max_values as u128,
            "",
        ));
    }
    let mut b = RegistryBuilder::new();
    let mut ids = Vec::new();
    for j in 1..=j_max {
        let mu = b.formal(
            &format!("mu_{j}"),
            FormalEnclosure::Anchored(rat_int(j as i64)),
            &format!("bayart block {j} base point, declared Q-linearly independent"),
        )?;
        let delta = b.formal(
            &format!("delta_{j}"),
            FormalEnclosure::Anchored(bayart_delta_anchor(j)),
            &format!("bayart block {j} step, declared Q-linearly independent"),
        )?;
        ids.push((j, mu, delta));
    }
    let reg = b.build();
    let mut values = Vec::with_capacity(total as usize);
    for (j, mu, delta) in ids {
        for k in 0..=(1u64 << j) {
            values.push(reg.value(alloc::vec![
                (mu, rat_int(1)),
                (delta, Rational::from_integer(BigInt::from(k)))
            ])?);
        }
    }
    verify_increasing(&reg, &values)?;
    Ok(Frequency {
        registry: reg,
        values,
        provenance: format!("bayart(J={j_max})"),
    })
}

fn verify_increasing(reg: &Registry, values: &[ExactReal]) -> Result<()> {
    for w in values.windows(2) {
        match reg.compare(&w[0], &w[1])? {
            Ordering::Less => {}
            Ordering::Equal => return Err(Error::Collision(reg.format(&w[1]))),
            Ordering::Greater => {
                return Err(Error::Invalid("generator produced unsorted values".into()))
            }
        }
    }
    Ok(())
}

/// ⌊4^{j/p}⌋ for rational p > 0, exactly.
pub fn bourgain_block_size(p: &Rational, j: u32) -> BigInt {
    // 4^{j b / a} = (2^{2 j b})^{1/a}
    let a = p.numer().to_u32().expect("small numerator");
    let b = p.denom().to_usize().expect("small denominator");
    let pow = BigInt::one() << (2 * j as usize * b);
    pow.nth_root(a)
}

/// Blocks j = 1..=J, A_j a seeded uniform subset of {1..2^j-1} of size
/// min(⌊4^{j/p}⌋, 2^j - 1); values j + n 2^-j on the unit atom.
pub fn gen_bourgain(p: &Rational, j_max: u32, seed: u64, max_values: u64) -> Result<Frequency> {
    if *p <= rat_int(2) {
        return Err(Error::Invalid("bourgain needs p > 2".into()));
    }
    if p.numer().to_u32().is_none() || p.denom().to_u32().is_none() {
        return Err(Error::Invalid(
            "bourgain p has too large a numerator or denominator".into(),
        ));
    }
    if j_max == 0 || j_max > 62 {
        return Err(Error::Invalid("bourgain needs 1 <= J <= 62".into()));
    }
    let sizes: Vec<u64> = (1..=j_max)
        .map(|j| {
            let cap = (1u64 << j) - 1;
            bourgain_block_size(p, j)
                .to_u64()
                .map_or(cap, |s| s.min(cap))
        })
        .collect();
    let total: u128 = sizes.iter().map(|&s| s as u128).sum();
    if total > max_values as u128 {
        return Err(Error::size(
            "bourgain generator",
            total,
            max_values as u128,
            "",
        ));
    }
    let reg = RegistryBuilder::new().build();
    let mut values = Vec::with_capacity(total as usize);
    for (j, &size) in (1..=j_max).zip(&sizes) {
        let mut rng = crate::rng::substream(seed, "bourgain", j as u64);
        let universe = (1u64 << j) - 1;
        let set = floyd_sample(&mut rng, universe, size);
        let denom = BigInt::one() << j as usize;
        for n in set {
            let q = rat_int(j as i64) + Rational::new(BigInt::from(n), denom.clone());
            values.push(reg.rational(q));
        }
    }
    Ok(Frequency {
        registry: reg,
        values,
        provenance: format!("bourgain(p={p}, J={j_max}, seed={seed})"),
    })
}

/// Floyd's sampling of `k` distinct elements of {1..n}, returned sorted.
pub fn floyd_sample(rng: &mut impl rand_core::RngCore, n: u64, k: u64) -> BTreeSet<u64> {
    let mut s = BTreeSet::new();
    for j in (n - k + 1)..=n {
        let t = 1 + crate::rng::below(rng, j);
        if !s.insert(t) {
            s.insert(j);
        }
    }
    s
}

/// Pairwise Q-li formal atoms with `sizes[j-1]` atoms in block j
/// (the i-th anchored at j + (3i+1)/(3 size), never a dyadic rational).
pub fn gen_qli_formal(sizes: &[u64], max_values: u64) -> Result<Frequency> {
    let total: u128 = sizes.iter().map(|&s| s as u128).sum();
    if total > max_values as u128 {
        return Err(Error::size(
            "qli_formal generator",
            total,
            max_values as u128,
            "",
        ));
    }
    let mut b = RegistryBuilder::new();
    let mut ids = Vec::new();
    for (j, &s) in (1u64..).zip(sizes) {
        for i in 0..s {
            let anchor = rat_int(j as i64) + rat(3 * i as i64 + 1, 3 * s as i64);
            ids.push(b.formal(
                &format!("nu_{j}_{i}"),
                FormalEnclosure::Anchored(anchor),
                "formal atom, declared Q-linearly independent",
            )?);
        }
    }
    let reg = b.build();
    let values = ids
        .into_iter()
        .map(|id| reg.atom_value(id))
        .collect::<Result<Vec<_>>>()?;
    verify_increasing(&reg, &values)?;
    let s: Vec<String> = sizes.iter().map(|s| format!("{s}")).collect();
    Ok(Frequency {
        registry: reg,
        values,
        provenance: format!("qli_formal(sizes=[{}])", s.join(",")),
    })
}

fn used_atoms(f: &Frequency) -> BTreeSet<AtomId> {
    f.values
        .iter()
        .flat_map(|v| v.coeffs().iter().map(|(a, _)| *a))
        .collect()
}

/// Merge two frequencies over a merged registry.
pub fn union(f: &Frequency, g: &Frequency, disjoint_span: bool) -> Result<Frequency> {
    let (reg, mf, mg) = Registry::merge(f.registry(), g.registry())?;
    if disjoint_span {
        let uf: BTreeSet<AtomId> = used_atoms(f).into_iter().map(|a| mf[a as usize]).collect();
        let ug: BTreeSet<AtomId> = used_atoms(g).into_iter().map(|a| mg[a as usize]).collect();
        if let Some(a) = uf.intersection(&ug).next() {
            let name = reg.atom(*a).map(|x| x.name()).unwrap_or_default();
            return Err(Error::Span(format!("atom {name} occurs in both operands")));
        }
    }
    let a = f
        .values
        .iter()
        .map(|v| reg.import(v, &mf))
        .collect::<Result<Vec<_>>>()?;
    let b = g
        .values
        .iter()
        .map(|v| reg.import(v, &mg))
        .collect::<Result<Vec<_>>>()?;
    let seen: HashSet<&ExactReal> = a.iter().collect();
    if let Some(dup) = b.iter().find(|v| seen.contains(v)) {
        return Err(Error::Collision(reg.format(dup)));
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match reg.compare(&a[i], &b[j])? {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => return Err(Error::Collision(reg.format(&a[i]))),
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    let provenance = format!("union({}, {})", f.provenance, g.provenance);
    Ok(Frequency {
        registry: reg,
        values: out,
        provenance,
    })
}

/// Index ranges of the unit blocks λ ∩ [j, j+1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockDecomposition {
    blocks: BTreeMap<u64, Range<usize>>,
}

impl BlockDecomposition {
    pub fn get(&self, j: u64) -> Option<Range<usize>> {
        self.blocks.get(&j).cloned()
    }

    pub fn len_of(&self, j: u64) -> usize {
        self.blocks.get(&j).map_or(0, |r| r.len())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Range<usize>)> + '_ {
        self.blocks.iter().map(|(j, r)| (*j, r.clone()))
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn max_block(&self) -> Option<u64> {
        self.blocks.keys().next_back().copied()
    }
}

pub fn blocks(f: &Frequency) -> Result<BlockDecomposition> {
    let reg = f.registry();
    let floors = par_map(&f.values, |v| reg.floor(v));
    let mut out: BTreeMap<u64, Range<usize>> = BTreeMap::new();
    for (i, fl) in floors.into_iter().enumerate() {
        let j =
            u64::try_from(fl?).map_err(|_| Error::Invalid("negative frequency value".into()))?;
        match out.get_mut(&j) {
            Some(r) if r.end == i => r.end = i + 1,
            Some(_) => return Err(Error::Invalid("frequency values out of order".into())),
            None => {
                out.insert(j, i..i + 1);
            }
        }
    }
    Ok(BlockDecomposition { blocks: out })
}

/// Tail maximum over the last `window` entries of a (j, value) sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct TailEstimate {
    pub sequence: Vec<(u64, f64)>,
    pub window: usize,
    pub tail_max: f64,
}

pub fn tail_max(sequence: Vec<(u64, f64)>, window: usize) -> Result<TailEstimate> {
    if sequence.is_empty() {
        return Err(Error::EmptyProfile);
    }
    if window == 0 || window > sequence.len() {
        return Err(Error::Window {
            window,
            available: sequence.len(),
        });
    }
    let tail_max = sequence[sequence.len() - window..]
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TailEstimate {
        sequence,
        window,
        tail_max,
    })
}

/// log(#block_j)/j for nonempty blocks j ≥ 1, with a tail-max estimate of
/// L(λ). Also reports the index ratio log(n)/λ_n (1-based n, λ_n ≥ 1) over
/// the same tail blocks. Both are finite-prefix estimates only.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub block_ratio: TailEstimate,
    pub index_ratio_tail_max: f64,
}

impl DensityProfile {
    pub fn l_estimate(&self) -> f64 {
        self.block_ratio.tail_max
    }
}

pub fn density_profile(
    f: &Frequency,
    bd: &BlockDecomposition,
    tail_window: usize,
) -> Result<DensityProfile> {
    let seq: Vec<(u64, f64)> = bd
        .iter()
        .filter(|(j, r)| *j >= 1 && !r.is_empty())
        .map(|(j, r)| (j, libm::log(r.len() as f64) / j as f64))
        .collect();
    let block_ratio = tail_max(seq, tail_window)?;
    let first_j = block_ratio.sequence[block_ratio.sequence.len() - tail_window].0;
    let start = bd.get(first_j).map_or(0, |r| r.start);
    let index_ratio_tail_max = f.values[start..]
        .iter()
        .enumerate()
        .map(|(i, v)| libm::log((start + i + 1) as f64) / v.approx())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DensityProfile {
        block_ratio,
        index_ratio_tail_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rat_to_f64;
    use alloc::vec;

    #[test]
    fn log_integers_small() {
        let f = gen_log_integers(4).unwrap();
        let r = f.registry();
        let names: Vec<_> = f.values().iter().map(|v| r.format(v)).collect();
        assert_eq!(names, vec!["0", "log2", "log3", "2*log2"]);
        assert_eq!(gen_log_integers(1).unwrap().len(), 1);
        assert!(gen_log_integers(0).is_err());
    }

    #[test]
    fn log_integer_blocks() {
        let f = gen_log_integers(12).unwrap();
        let bd = blocks(&f).unwrap();
        // ln 2 < 1 < ln 3 and e^2 ≈ 7.39
        assert_eq!(bd.get(0), Some(0..2));
        assert_eq!(bd.get(1), Some(2..7));
        assert_eq!(bd.get(2), Some(7..12));
    }

    #[test]
    fn hurwitz_examples() {
        let f = gen_hurwitz(&[rat_int(1)], 4, &rat_int(2), 1 << 20).unwrap();
        let r = f.registry();
        let names: Vec<_> = f.values().iter().map(|v| r.format(v)).collect();
        assert_eq!(names, vec!["0", "log2", "log3", "2*log2"]);

        let f = gen_hurwitz(&[rat_int(2)], 3, &rat_int(10), 1 << 20).unwrap();
        let names: Vec<_> = f.values().iter().map(|v| f.registry().format(v)).collect();
        assert_eq!(names, vec!["log2", "2*log2", "log2 + log3"]);

        let f = gen_hurwitz(&[rat(1, 2), rat(1, 3)], 2, &rat_int(10), 1 << 20).unwrap();
        // arguments: 1/3,1/2,2/3,5/6,1,7/6,4/3,3/2,5/3,11/6,2,... only those >= 1 survive
        let approx: Vec<f64> = f.values().iter().map(|v| v.approx()).collect();
        assert!(approx.iter().all(|&x| x >= 0.0));
        assert!(!approx
            .iter()
            .any(|&x| (x - libm::log(5.0 / 6.0)).abs() < 1e-12));
        assert_eq!(approx.len(), 4); // 1, 7/6, 4/3, 5/3
    }

    #[test]
    fn bayart_blocks() {
        let f = gen_bayart(6, 1 << 20).unwrap();
        let bd = blocks(&f).unwrap();
        for j in 1..=6u64 {
            assert_eq!(bd.len_of(j), (1 << j) + 1);
        }
        let r = f.registry();
        let names: Vec<_> = f.values()[..3].iter().map(|v| r.format(v)).collect();
        assert_eq!(names, vec!["mu_1", "mu_1 + delta_1", "mu_1 + 2*delta_1"]);
        assert!(matches!(gen_bayart(20, 1000), Err(Error::Size { .. })));
    }

    #[test]
    fn bayart_density() {
        let f = gen_bayart(10, 1 << 20).unwrap();
        let bd = blocks(&f).unwrap();
        let d = density_profile(&f, &bd, 4).unwrap();
        let last = d.block_ratio.sequence.last().unwrap();
        assert_eq!(last.0, 10);
        assert!((last.1 - 0.69324).abs() < 1e-5);
    }

    #[test]
    fn bourgain_sizes_and_determinism() {
        let p = rat_int(4);
        assert_eq!(bourgain_block_size(&p, 3), BigInt::from(2));
        let f = gen_bourgain(&p, 10, 42, 1 << 20).unwrap();
        let g = gen_bourgain(&p, 10, 42, 1 << 20).unwrap();
        let h = gen_bourgain(&p, 10, 43, 1 << 20).unwrap();
        let fv: Vec<_> = f
            .values()
            .iter()
            .map(|v| v.as_rational().unwrap())
            .collect();
        let gv: Vec<_> = g
            .values()
            .iter()
            .map(|v| v.as_rational().unwrap())
            .collect();
        let hv: Vec<_> = h
            .values()
            .iter()
            .map(|v| v.as_rational().unwrap())
            .collect();
        assert_eq!(fv, gv);
        assert_ne!(fv, hv);
        let bd = blocks(&f).unwrap();
        for j in 1..=10u64 {
            let expect =
                libm::floor(libm::pow(4.0, j as f64 / 4.0)).min(((1u64 << j) - 1) as f64) as usize;
            assert_eq!(bd.len_of(j), expect);
            for v in &fv[bd.get(j).unwrap()] {
                let x = rat_to_f64(v);
                assert!(x > j as f64 && x < (j + 1) as f64);
            }
        }
        assert!(gen_bourgain(&rat_int(2), 3, 0, 100).is_err());
    }

    #[test]
    fn union_rules() {
        let f = gen_bayart(3, 1000).unwrap();
        let g = gen_qli_formal(&[1, 2, 3], 1000).unwrap();
        let u = union(&f, &g, true).unwrap();
        assert_eq!(u.len(), f.len() + g.len());
        assert!(matches!(union(&f, &f, false), Err(Error::Collision(_))));
        assert!(matches!(union(&f, &f, true), Err(Error::Span(_))));
        let a = gen_bourgain(&rat_int(4), 3, 1, 100).unwrap();
        let b = gen_bourgain(&rat_int(4), 3, 2, 100).unwrap();
        assert!(matches!(union(&a, &b, true), Err(Error::Span(_))));
    }

    #[test]
    fn density_window_rules() {
        let f = gen_qli_formal(&[0, 3], 100).unwrap();
        let bd = blocks(&f).unwrap();
        let d = density_profile(&f, &bd, 1).unwrap();
        assert!((d.l_estimate() - libm::log(3.0) / 2.0).abs() < 1e-15);
        assert!(matches!(
            density_profile(&f, &bd, 4),
            Err(Error::Window {
                window: 4,
                available: 1
            })
        ));
        let empty = Frequency::new(RegistryBuilder::new().build(), vec![], "empty").unwrap();
        assert!(blocks(&empty).unwrap().is_empty());
    }
}
