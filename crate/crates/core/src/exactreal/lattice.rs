//! Integer row echelon (Hermite-style) bases of finitely generated subgroups
//! of Z^n, built by unimodular extended-gcd row operations.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A Z-basis of the lattice spanned by inserted integer vectors, kept in
/// row echelon form with positive pivots.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

fn lead(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn axpy(dst: &mut [BigInt], a: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += a * s;
        }
    }
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    pub fn insert(&mut self, v: &[BigInt]) {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        let mut i = 0;
        while i < self.rows.len() {
            let Some(l) = lead(&v) else { return };
            let c = self.rows[i].0;
            if l < c {
                break;
            }
            if l == c {
                let r = &mut self.rows[i].1;
                if (&v[c] % &r[c]).is_zero() {
                    let q = -(&v[c] / &r[c]);
                    axpy(&mut v, &q, r);
                } else {
                    let eg = r[c].extended_gcd(&v[c]);
                    let (g, x, y) = (eg.gcd, eg.x, eg.y);
                    let rc = &r[c] / &g;
                    let vc = &v[c] / &g;
                    let new_r: Vec<BigInt> =
                        r.iter().zip(&v).map(|(a, b)| &x * a + &y * b).collect();
                    let new_v: Vec<BigInt> =
                        r.iter().zip(&v).map(|(a, b)| &rc * b - &vc * a).collect();
                    *r = new_r;
                    v = new_v;
                    if r[c].is_negative() {
                        r.iter_mut().for_each(|x| *x = -&*x);
                    }
                }
            }
            i += 1;
        }
        if let Some(l) = lead(&v) {
            if v[l].is_negative() {
                v.iter_mut().for_each(|x| *x = -&*x);
            }
            let pos = self
                .rows
                .iter()
                .position(|(c, _)| *c > l)
                .unwrap_or(self.rows.len());
            self.rows.insert(pos, (l, v));
        }
    }

    /// Reduce entries above each pivot into `[0, pivot)`; yields a canonical basis.
    pub fn reduce(&mut self) {
        for m in 0..self.rows.len() {
            let (c, pivot_row) = self.rows[m].clone();
            for up in 0..m {
                let e = &self.rows[up].1[c];
                if e.is_zero() {
                    continue;
                }
                let q = e.div_floor(&pivot_row[c]);
                if !q.is_zero() {
                    axpy(&mut self.rows[up].1, &-q, &pivot_row);
                }
            }
        }
    }

    /// Integer coordinates of `v` in this basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut w = v.to_vec();
        let mut out = Vec::with_capacity(self.rows.len());
        for (c, r) in &self.rows {
            let (q, rem) = w[*c].div_rem(&r[*c]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                axpy(&mut w, &-&q, r);
            }
            out.push(q);
        }
        if w.iter().all(Zero::is_zero) {
            Some(out)
        } else {
            None
        }
    }
}

pub fn is_unit_gcd(col: impl Iterator<Item = BigInt>) -> bool {
    col.fold(BigInt::zero(), |g, x| g.gcd(&x)).is_one()
}
