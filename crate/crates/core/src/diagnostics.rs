//! Block-localized profiles: per-block Λ bounds, the hypercontractivity
//! index h_j, and strip-width intervals built from them.
//!
//! Every asymptotic quantity is surfaced as a full per-block sequence plus a
//! tail maximum over the last `tail_window` blocks; nothing here claims a limit.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::energy::{subset_energy_sup, SubsetMode, SubsetSup, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exactreal::{rat, rat_int, rat_to_f64, Rational};
use crate::frequency::{
    blocks, density_profile, tail_max, BlockDecomposition, DensityProfile, Frequency, TailEstimate,
};
use crate::lambda::{
    lambda_lower_ascent, lambda_upper_nikolskii, report_from_energy_sup, AscentConfig, BoundValue,
    Caveat, Exponent,
};
use crate::util::par_map;

pub const DEFAULT_TAIL_WINDOW: usize = 4;
pub const DEFAULT_THRESHOLD: f64 = 0.02;
/// Blocks up to this size also get a gradient-ascent lower bound.
pub const DEFAULT_ASCENT_BLOCK_CAP: usize = 8;
/// Tolerance when deciding that an upper strip bound has reached L/2.
pub const P0_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsConfig {
    pub tail_window: usize,
    pub budget: u64,
    pub mode: SubsetMode,
    pub threshold: f64,
    pub ascent_restarts: u32,
    pub ascent_block_cap: usize,
    pub seed: u64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            tail_window: DEFAULT_TAIL_WINDOW,
            budget: DEFAULT_BUDGET,
            mode: SubsetMode::Auto,
            threshold: DEFAULT_THRESHOLD,
            ascent_restarts: 8,
            ascent_block_cap: DEFAULT_ASCENT_BLOCK_CAP,
            seed: 0,
        }
    }
}

/// Subset-energy suprema per block j ∈ [1, j_max], shared by several profiles.
#[derive(Clone, Debug)]
pub struct BlockSups {
    pub k: u32,
    pub per_block: BTreeMap<u64, SubsetSup>,
}

pub fn block_sups(
    f: &Frequency,
    bd: &BlockDecomposition,
    k: u32,
    j_max: u64,
    cfg: &DiagnosticsConfig,
) -> Result<BlockSups> {
    let todo: Vec<(u64, core::ops::Range<usize>)> = bd
        .iter()
        .filter(|(j, r)| *j >= 1 && *j <= j_max && !r.is_empty())
        .collect();
    let reg = f.registry();
    let res = par_map(&todo, |(_, r)| {
        subset_energy_sup(reg, &f.values()[r.clone()], k, cfg.mode, cfg.budget)
    });
    let mut per_block = BTreeMap::new();
    for ((j, _), s) in todo.iter().zip(res) {
        per_block.insert(*j, s?);
    }
    Ok(BlockSups { k, per_block })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TEntry {
    pub j: u64,
    pub size: usize,
    /// log(lower Λ bound)/j and log(upper Λ bound)/j.
    pub lower: f64,
    pub upper: f64,
    pub lower_bound: BoundValue,
    pub upper_bound: BoundValue,
    pub lower_method: &'static str,
    /// The block's subset supremum was exhaustive.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TProfile {
    pub p: Exponent,
    pub q: Exponent,
    pub entries: Vec<TEntry>,
    pub lower_tail: TailEstimate,
    pub upper_tail: TailEstimate,
    /// Empty for the certified family (p, q) = (2, even).
    pub caveats: Vec<Caveat>,
}

impl TProfile {
    pub fn is_certified(&self) -> bool {
        self.caveats.is_empty()
    }
}

fn log_over_j(v: &BoundValue, j: u64) -> f64 {
    libm::log(v.value()) / j as f64
}

/// Per-block [log lower_j / j, log upper_j / j] for Λ_{q,p}(λ ∩ [j, j+1)).
///
/// Only (2, even q) is certified; other pairs are obtained through
/// monotonicity of Λ_{q,p} in p and q and are stamped numeric-only.
pub fn t_profile(
    f: &Arc<Frequency>,
    bd: &BlockDecomposition,
    p: &Exponent,
    q: &Exponent,
    j_max: u64,
    cfg: &DiagnosticsConfig,
    sups: Option<&BlockSups>,
) -> Result<TProfile> {
    if !(p.is_positive() && p.to_f64() >= 1.0 && p <= q) || matches!(p, Exponent::Infinite) {
        return Err(Error::Domain(format!(
            "t_profile needs 1 <= p <= q, got p={p}, q={q}"
        )));
    }
    let two = Exponent::int(2);
    let certified = *p == two && q.even_integer().is_some();
    // largest even 2k ≤ q with k ≥ 2 for the energy side
    let k = match q {
        Exponent::Infinite => sups.map_or(2, |s| s.k),
        Exponent::Finite(x) => {
            let fl = x.floor().to_integer();
            let e = &fl - (&fl % 2);
            num_traits::ToPrimitive::to_u32(&(e / 2)).unwrap_or(0)
        }
    };
    let own;
    let sups = match sups {
        Some(s) if s.k == k => Some(s),
        _ if k >= 2 => {
            own = block_sups(f, bd, k, j_max, cfg)?;
            Some(&own)
        }
        _ => None,
    };
    let lower_valid = p.to_f64() <= 2.0 && k >= 2;
    let js: Vec<(u64, core::ops::Range<usize>)> = bd
        .iter()
        .filter(|(j, r)| *j >= 1 && *j <= j_max && !r.is_empty())
        .collect();
    let entries = par_map(&js, |(j, r)| -> Result<TEntry> {
        let idx: Vec<usize> = r.clone().collect();
        let n = idx.len();
        let (lower_bound, lower_method, exact) = match sups.and_then(|s| s.per_block.get(j)) {
            Some(sup) if lower_valid => {
                let mut rep = report_from_energy_sup(f, &idx, sup)?;
                if certified && n <= cfg.ascent_block_cap && n > 1 {
                    let acfg = AscentConfig {
                        restarts: cfg.ascent_restarts,
                        seed: cfg.seed ^ j.wrapping_mul(0x9e37_79b9),
                        budget: cfg.budget,
                        mode: cfg.mode,
                        ..Default::default()
                    };
                    let asc = lambda_lower_ascent(f, &idx, 2 * k, &acfg)?;
                    if asc.lower.value.value() > rep.lower.value.value() {
                        rep = asc;
                    }
                }
                (rep.lower.value, rep.lower.method.tag(), sup.exact)
            }
            _ => (BoundValue::one(), "trivial", true),
        };
        // Λ_{q,p} ≤ Λ_{q,2} for p ≥ 2
        let p_up = if p.to_f64() > 2.0 {
            two.clone()
        } else {
            p.clone()
        };
        let upper_bound = lambda_upper_nikolskii(n, &p_up, q)?.value;
        Ok(TEntry {
            j: *j,
            size: n,
            lower: log_over_j(&lower_bound, *j),
            upper: log_over_j(&upper_bound, *j),
            lower_bound,
            upper_bound,
            lower_method,
            exact,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    if entries.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let lower_tail = tail_max(
        entries.iter().map(|e| (e.j, e.lower)).collect(),
        cfg.tail_window,
    )?;
    let upper_tail = tail_max(
        entries.iter().map(|e| (e.j, e.upper)).collect(),
        cfg.tail_window,
    )?;
    let caveats = if certified {
        vec![]
    } else {
        vec![Caveat::Transfer, Caveat::NumericOnly]
    };
    Ok(TProfile {
        p: p.clone(),
        q: q.clone(),
        entries,
        lower_tail,
        upper_tail,
        caveats,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ConsistentWithHypercontractive,
    Inconsistent,
    Inconclusive,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::ConsistentWithHypercontractive => "consistent-with-hypercontractive",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperIndex {
    pub k: u32,
    pub profile: TailEstimate,
    /// All blocks in the tail window were searched exhaustively.
    pub tail_exact: bool,
    pub threshold: f64,
    pub verdict: Verdict,
    /// max of log log n / λ_n over the tail blocks (n ≥ 3); a sample of the
    /// growth condition, not its limit.
    pub growth_guard: f64,
}

/// h_j = sup_{A ⊆ block_j} log(E_k(A)^{1/k} / #A) / (2j).
pub fn hyper_index(
    f: &Frequency,
    bd: &BlockDecomposition,
    k: u32,
    j_max: u64,
    cfg: &DiagnosticsConfig,
    sups: Option<&BlockSups>,
) -> Result<HyperIndex> {
    if k < 2 {
        return Err(Error::Domain(format!("hyper index needs k >= 2, got {k}")));
    }
    let own;
    let sups = match sups {
        Some(s) if s.k == k => s,
        _ => {
            own = block_sups(f, bd, k, j_max, cfg)?;
            &own
        }
    };
    let seq: Vec<(u64, f64)> = sups
        .per_block
        .iter()
        .map(|(&j, s)| (j, s.log_ratio() / j as f64))
        .collect();
    let profile = tail_max(seq, cfg.tail_window)?;
    let tail = &profile.sequence[profile.sequence.len() - cfg.tail_window..];
    let tail_exact = tail.iter().all(|(j, _)| sups.per_block[j].exact);
    let verdict = if profile.tail_max > cfg.threshold {
        Verdict::Inconsistent
    } else if tail_exact {
        Verdict::ConsistentWithHypercontractive
    } else {
        Verdict::Inconclusive
    };
    let start = bd.get(tail[0].0).map_or(0, |r| r.start);
    let end = bd.get(tail[tail.len() - 1].0).map_or(f.len(), |r| r.end);
    let growth_guard = (start.max(2)..end)
        .map(|i| libm::log(libm::log((i + 1) as f64)) / f.values()[i].approx())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(HyperIndex {
        k,
        profile,
        tail_exact,
        threshold: cfg.threshold,
        verdict,
        growth_guard,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SInterval {
    pub p: Rational,
    pub lower: f64,
    pub upper: f64,
    pub lower_source: String,
    pub upper_source: String,
    pub caveats: Vec<Caveat>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StripReport {
    pub frequency: String,
    pub density: DensityProfile,
    pub t_profiles: Vec<TProfile>,
    pub s_intervals: Vec<SInterval>,
    pub p0_bracket: (Rational, Rational),
    pub hyper_index: Vec<HyperIndex>,
}

impl StripReport {
    pub fn l_estimate(&self) -> f64 {
        self.density.l_estimate()
    }
}

/// Intervals for S_p over `p_grid` from the density estimate L and the
/// energy-side estimates of T_{2k,2} (taken from `hyper`).
pub fn strip_bounds(
    l: f64,
    p_grid: &[Rational],
    hyper: &[HyperIndex],
) -> Result<(Vec<SInterval>, (Rational, Rational))> {
    let mut grid: Vec<Rational> = p_grid.to_vec();
    grid.sort();
    grid.dedup();
    if grid.iter().any(|p| *p < rat_int(1)) {
        return Err(Error::Domain("strip bounds need p >= 1".into()));
    }
    let half = l / 2.0;
    let mut out = Vec::with_capacity(grid.len());
    for p in &grid {
        if *p >= rat_int(2) {
            out.push(SInterval {
                p: p.clone(),
                lower: half,
                upper: half,
                lower_source: "S_p = L/2 for p >= 2".into(),
                upper_source: "S_p = L/2 for p >= 2".into(),
                caveats: vec![],
            });
            continue;
        }
        let pf = rat_to_f64(p);
        let mut upper = l / pf;
        let mut upper_source = String::from("S_p <= L/p");
        let mut caveats = vec![];
        // S_p ≤ S_2 + T_{2,p} and (1/2 - 1/2k) T_{2,p} ≤ (1/p - 1/2) T_{2k,2}
        for h in hyper {
            let c = (rat_int(1) / p - rat(1, 2)) / (rat(1, 2) - rat(1, 2 * h.k as i64));
            let cand = half + rat_to_f64(&c) * h.profile.tail_max.max(0.0);
            if cand < upper {
                upper = cand;
                upper_source = format!(
                    "S_p <= L/2 + T_(2,p), T_(2,p) <= {c} * T_({},2) estimate",
                    2 * h.k
                );
                caveats = vec![Caveat::NumericOnly];
                if !h.tail_exact {
                    caveats.push(Caveat::HeuristicSup);
                }
            }
        }
        out.push(SInterval {
            p: p.clone(),
            lower: half,
            upper,
            lower_source: "S_p >= L/2".into(),
            upper_source,
            caveats,
        });
    }
    let hi = out
        .iter()
        .find(|s| s.upper <= half + P0_TOLERANCE)
        .map_or(rat_int(2), |s| s.p.clone());
    let hi = if hi > rat_int(2) { rat_int(2) } else { hi };
    Ok((out, (Rational::one(), hi)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRequest {
    pub p_grid: Vec<Rational>,
    /// (p, q) pairs for t-profiles.
    pub pairs: Vec<(Exponent, Exponent)>,
    pub k_list: Vec<u32>,
    pub j_max: u64,
}

impl Default for ReportRequest {
    fn default() -> Self {
        ReportRequest {
            p_grid: vec![
                rat_int(1),
                rat(5, 4),
                rat(3, 2),
                rat(7, 4),
                rat_int(2),
                rat_int(4),
            ],
            pairs: vec![(Exponent::int(2), Exponent::int(4))],
            k_list: vec![2],
            j_max: 14,
        }
    }
}

/// Everything above in one pass, sharing block suprema between profiles.
pub fn analyze(
    f: &Arc<Frequency>,
    req: &ReportRequest,
    cfg: &DiagnosticsConfig,
) -> Result<StripReport> {
    if req.p_grid.iter().any(|p| !p.is_positive()) {
        return Err(Error::Domain("p grid must be positive".into()));
    }
    let bd = blocks(f)?;
    let density = density_profile(f, &bd, cfg.tail_window)?;
    let mut ks: Vec<u32> = req.k_list.clone();
    for (_, q) in &req.pairs {
        if let Some(e) = q.even_integer() {
            ks.push(e / 2);
        }
    }
    ks.sort();
    ks.dedup();
    let mut sups = BTreeMap::new();
    for &k in ks.iter().filter(|&&k| k >= 2) {
        sups.insert(k, block_sups(f, &bd, k, req.j_max, cfg)?);
    }
    let mut t_profiles = Vec::with_capacity(req.pairs.len());
    for (p, q) in &req.pairs {
        let s = q.even_integer().and_then(|e| sups.get(&(e / 2)));
        t_profiles.push(t_profile(f, &bd, p, q, req.j_max, cfg, s)?);
    }
    let mut hyper = Vec::with_capacity(req.k_list.len());
    for &k in &req.k_list {
        hyper.push(hyper_index(f, &bd, k, req.j_max, cfg, sups.get(&k))?);
    }
    let (s_intervals, p0_bracket) = strip_bounds(density.l_estimate(), &req.p_grid, &hyper)?;
    Ok(StripReport {
        frequency: String::from(f.provenance()),
        density,
        t_profiles,
        s_intervals,
        p0_bracket,
        hyper_index: hyper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::{gen_bayart, gen_qli_formal};
    use core::cmp::Ordering;

    fn cfg(w: usize) -> DiagnosticsConfig {
        DiagnosticsConfig {
            tail_window: w,
            ..Default::default()
        }
    }

    #[test]
    fn singleton_blocks_give_zero() {
        let f = Arc::new(gen_qli_formal(&[1, 1, 1, 1, 1], 100).unwrap());
        let bd = blocks(&f).unwrap();
        let h = hyper_index(&f, &bd, 2, 10, &cfg(4), None).unwrap();
        assert!(h.profile.sequence.iter().all(|(_, v)| *v == 0.0));
        assert_eq!(h.verdict, Verdict::ConsistentWithHypercontractive);
        let t = t_profile(
            &f,
            &bd,
            &Exponent::int(2),
            &Exponent::int(4),
            10,
            &cfg(4),
            None,
        )
        .unwrap();
        assert!(t.entries.iter().all(|e| e.lower == 0.0 && e.upper == 0.0));
    }

    #[test]
    fn bayart_small_profile_is_sandwiched() {
        let f = Arc::new(gen_bayart(8, 1 << 12).unwrap());
        let bd = blocks(&f).unwrap();
        let t = t_profile(
            &f,
            &bd,
            &Exponent::int(2),
            &Exponent::int(4),
            8,
            &cfg(4),
            None,
        )
        .unwrap();
        assert!(t.is_certified());
        for e in &t.entries {
            assert_ne!(
                e.lower_bound.certified_cmp(&e.upper_bound, 1024),
                Some(Ordering::Greater)
            );
        }
        let h = hyper_index(&f, &bd, 2, 8, &cfg(4), None).unwrap();
        for ((_, hj), e) in h.profile.sequence.iter().zip(&t.entries) {
            assert!(*hj <= e.upper + 1e-12);
        }
        assert_eq!(h.verdict, Verdict::Inconsistent);
    }

    #[test]
    fn strip_intervals_are_monotone() {
        let f = Arc::new(gen_bayart(8, 1 << 12).unwrap());
        let r = analyze(
            &f,
            &ReportRequest {
                j_max: 8,
                ..Default::default()
            },
            &cfg(4),
        )
        .unwrap();
        let l = r.l_estimate();
        let s = &r.s_intervals;
        assert_eq!(s[0].lower, l / 2.0);
        assert!(s[0].upper <= l + 1e-12);
        for w in s.windows(2) {
            assert!(w[1].upper <= w[0].upper + 1e-12);
            assert!(rat_to_f64(&w[1].p) * w[1].lower >= rat_to_f64(&w[0].p) * w[0].lower);
        }
        let two = s.iter().find(|x| x.p == rat_int(2)).unwrap();
        assert_eq!((two.lower, two.upper), (l / 2.0, l / 2.0));
        assert_eq!(r.p0_bracket, (rat_int(1), rat_int(2)));
    }

    #[test]
    fn no_extra_information_gives_theorem_interval() {
        let (s, br) = strip_bounds(1.0, &[rat_int(1), rat_int(2)], &[]).unwrap();
        assert_eq!((s[0].lower, s[0].upper), (0.5, 1.0));
        assert_eq!(br, (rat_int(1), rat_int(2)));
    }

    #[test]
    fn non_certified_pairs_are_flagged() {
        let f = Arc::new(gen_bayart(6, 1 << 10).unwrap());
        let bd = blocks(&f).unwrap();
        let t = t_profile(
            &f,
            &bd,
            &Exponent::Finite(rat(3, 2)),
            &Exponent::int(4),
            6,
            &cfg(2),
            None,
        )
        .unwrap();
        assert_eq!(t.caveats, vec![Caveat::Transfer, Caveat::NumericOnly]);
        assert!(t.entries.iter().all(|e| e.lower <= e.upper));
    }
}
