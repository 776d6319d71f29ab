//! Brute-force oracles shared by the integration tests. They work on dense
//! coefficient vectors over the registry atoms and share no code with the
//! library's key embeddings, convolutions or multiset enumeration.
#![allow(dead_code)]

use std::sync::Arc;

use freqlab_core::dirichlet::CRational;
use freqlab_core::exactreal::{rat, rat_int, ExactReal, FormalEnclosure, Rational, Registry};
use freqlab_core::rng::{below, substream};
use num_complex::Complex;
use num_traits::Zero;

pub fn dense(reg: &Registry, x: &ExactReal) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); reg.atoms().len()];
    for (a, c) in x.coeffs() {
        v[*a as usize] = c.clone();
    }
    v
}

/// Every k-tuple of indices in 0..n, in lexicographic order.
pub fn tuples(n: usize, k: u32) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

fn tuple_sum(vecs: &[Vec<Rational>], t: &[usize]) -> Vec<Rational> {
    let mut s = vec![Rational::zero(); vecs.first().map_or(0, |v| v.len())];
    for &i in t {
        for (a, b) in s.iter_mut().zip(&vecs[i]) {
            *a += b;
        }
    }
    s
}

/// #{(x, y) ∈ A^k × A^k : x_1+…+x_k = y_1+…+y_k}, by comparing all pairs.
pub fn brute_energy(vecs: &[Vec<Rational>], k: u32) -> u128 {
    let ts = tuples(vecs.len(), k);
    let sums: Vec<_> = ts.iter().map(|t| tuple_sum(vecs, t)).collect();
    let mut count = 0u128;
    for a in &sums {
        for b in &sums {
            if a == b {
                count += 1;
            }
        }
    }
    count
}

/// ‖Σ a_n e^{-λ_n s}‖_{2k}^{2k} = Σ_{x,y: Σλ_x = Σλ_y} Π a_x · conj(Π a_y).
pub fn brute_moment(vecs: &[Vec<Rational>], coeffs: &[CRational], k: u32) -> Rational {
    let ts = tuples(vecs.len(), k);
    let sums: Vec<_> = ts.iter().map(|t| tuple_sum(vecs, t)).collect();
    let prods: Vec<CRational> = ts
        .iter()
        .map(|t| {
            t.iter()
                .fold(Complex::new(rat_int(1), rat_int(0)), |acc, &i| {
                    acc * &coeffs[i]
                })
        })
        .collect();
    let mut total = Complex::new(rat_int(0), rat_int(0));
    for (i, a) in sums.iter().enumerate() {
        for (j, b) in sums.iter().enumerate() {
            if a == b {
                total += &prods[i] * prods[j].conj();
            }
        }
    }
    assert!(total.im.is_zero());
    total.re
}

/// A seeded random set of 1..=max_n distinct non-negative values mixing the
/// unit (rational coefficients), log 2, log 3, log 5 and two formal atoms.
pub fn random_exact_set(seed: u64, index: u64, max_n: usize) -> (Arc<Registry>, Vec<ExactReal>) {
    let mut b = Registry::builder();
    let unit = b.unit();
    let mut atoms = vec![b.log_prime(2), b.log_prime(3), b.log_prime(5)];
    atoms.push(
        b.formal("a", FormalEnclosure::Anchored(rat(7, 10)), "test")
            .unwrap(),
    );
    atoms.push(
        b.formal("b", FormalEnclosure::Anchored(rat(13, 10)), "test")
            .unwrap(),
    );
    let reg = b.build();
    let mut rng = substream(seed, "oracle-set", index);
    let n = 1 + below(&mut rng, max_n as u64) as usize;
    // few atoms per set, so that sums collide
    let active: Vec<u32> = atoms
        .iter()
        .copied()
        .filter(|_| below(&mut rng, 2) == 0)
        .collect();
    let mut vals: Vec<ExactReal> = Vec::new();
    let mut tries = 0;
    while vals.len() < n && tries < 200 {
        tries += 1;
        let mut terms = vec![(unit, rat(below(&mut rng, 4) as i64, 2))];
        for &a in &active {
            terms.push((a, rat_int(below(&mut rng, 3) as i64)));
        }
        let v = reg.value(terms).unwrap();
        if !vals.contains(&v) {
            vals.push(v);
        }
    }
    (reg, vals)
}

/// Random Gaussian-integer coefficients in {-c..c} + i{-c..c}, never zero.
pub fn random_coeffs(seed: u64, index: u64, n: usize, c: i64) -> Vec<CRational> {
    let mut rng = substream(seed, "oracle-coeffs", index);
    (0..n)
        .map(|_| loop {
            let re = below(&mut rng, (2 * c + 1) as u64) as i64 - c;
            let im = below(&mut rng, (2 * c + 1) as u64) as i64 - c;
            if re != 0 || im != 0 {
                break Complex::new(rat_int(re), rat_int(im));
            }
        })
        .collect()
}
