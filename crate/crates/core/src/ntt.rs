//! Exact integer convolution powers via three NTT primes and CRT.

use alloc::vec;
use alloc::vec::Vec;

const PRIMES: [u64; 3] = [998_244_353, 167_772_161, 469_762_049];
const ROOT: u64 = 3;
/// Largest power-of-two transform length supported by all three primes.
pub const MAX_LEN: usize = 1 << 23;

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn ntt(a: &mut [u64], invert: bool, m: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(ROOT, (m - 1) / len as u64, m);
        if invert {
            w = pow_mod(w, m - 2, m);
        }
        for chunk in a.chunks_mut(len) {
            let mut wn = 1u64;
            let (lo, hi) = chunk.split_at_mut(len / 2);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let x = *u;
                let y = *v * wn % m;
                *u = if x + y >= m { x + y - m } else { x + y };
                *v = if x >= y { x - y } else { x + m - y };
                wn = wn * w % m;
            }
        }
        len <<= 1;
    }
    if invert {
        let inv = pow_mod(n as u64, m - 2, m);
        a.iter_mut().for_each(|x| *x = *x * inv % m);
    }
}

/// Product of the three primes, ≈ 7.9e25.
pub fn modulus() -> u128 {
    PRIMES.iter().map(|&p| p as u128).product()
}

fn crt(r: [u64; 3]) -> u128 {
    let [p0, p1, p2] = PRIMES.map(|p| p as u128);
    // Garner
    let x0 = r[0] as u128;
    let inv01 = pow_mod(PRIMES[0] % PRIMES[1], PRIMES[1] - 2, PRIMES[1]) as u128;
    let x1 = ((r[1] as u128 + p1 - x0 % p1) % p1) * inv01 % p1;
    let p01 = p0 * p1;
    let inv012 = pow_mod((p01 % p2) as u64, PRIMES[2] - 2, PRIMES[2]) as u128;
    let cur = (x0 + x1 * p0) % p2;
    let x2 = ((r[2] as u128 + p2 - cur) % p2) * inv012 % p2;
    x0 + x1 * p0 + x2 * p01
}

/// Coefficients of (Σ_i counts[i] x^i)^k, exact as long as every output
/// coefficient is below [`modulus`]. Returns `None` if the transform is too long.
pub fn power(counts: &[u64], k: u32) -> Option<Vec<u128>> {
    if counts.is_empty() || k == 0 {
        return Some(vec![1]);
    }
    let out_len = (counts.len() - 1) * k as usize + 1;
    let n = out_len.next_power_of_two();
    if n > MAX_LEN {
        return None;
    }
    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(3);
    for &m in &PRIMES {
        let mut a = vec![0u64; n];
        for (x, &c) in a.iter_mut().zip(counts) {
            *x = c % m;
        }
        ntt(&mut a, false, m);
        a.iter_mut().for_each(|x| *x = pow_mod(*x, k as u64, m));
        ntt(&mut a, true, m);
        a.truncate(out_len);
        residues.push(a);
    }
    Some(
        (0..out_len)
            .map(|i| crt([residues[0][i], residues[1][i], residues[2][i]]))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_power(c: &[u64], k: u32) -> Vec<u128> {
        let mut acc = vec![1u128];
        for _ in 0..k {
            let mut next = vec![0u128; acc.len() + c.len() - 1];
            for (i, &a) in acc.iter().enumerate() {
                for (j, &b) in c.iter().enumerate() {
                    next[i + j] += a * b as u128;
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn matches_naive() {
        let c = [1, 0, 1, 1, 0, 0, 1, 1];
        for k in 1..=5 {
            assert_eq!(power(&c, k).unwrap(), naive_power(&c, k));
        }
        assert_eq!(power(&[1, 1, 1], 2).unwrap(), vec![1, 2, 3, 2, 1]);
    }

    #[test]
    fn large_coefficients_survive_crt() {
        let c = vec![1u64; 2000];
        let p = power(&c, 5).unwrap();
        let mid = naive_power(&[1; 2000], 5)[5000];
        assert_eq!(p[5000], mid);
        assert!(mid > 1u128 << 40);
    }
}
