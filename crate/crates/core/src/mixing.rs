//! Samplers and Monte Carlo estimators behind the upper-bound machinery:
//! geometric proxy vectors with typicality, exactly uniform lattice-ball
//! sampling, gcd statistics of difference vectors, and the `L_2` collision
//! estimators whose decay drives the concentration results.

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::lattice::{count_ball_l1, Orientation};
use crate::rng;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand_core::RngCore;
use serde::Serialize;
use std::collections::BTreeMap;

/// A vector of iid geometric magnitudes with a sign pattern: all `+1` when
/// directed, iid uniform signs when undirected.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProxyVector {
    /// Magnitudes, geometric on `{1, 2, ...}` with success probability `1/L`.
    pub w: Vec<u64>,
    /// Signs in `{+1, -1}`.
    pub chi: Vec<i8>,
    /// The rate parameter `L`.
    pub rate: f64,
}

impl ProxyVector {
    /// The signed vector `chi * w`.
    pub fn signed(&self) -> Vec<i64> {
        self.w.iter().zip(&self.chi).map(|(&w, &s)| s as i64 * w as i64).collect()
    }

    pub fn norm_l1(&self) -> u64 {
        self.w.iter().sum()
    }
}

/// The typicality window for proxy vectors.
#[derive(Debug, Clone, Serialize)]
pub struct TypicalitySet {
    pub k: usize,
    pub rate: f64,
    /// `L_0 = L (1 - log k / sqrt k)`.
    pub l0: f64,
    /// Window `[k (L_0 + 1), k L]` on the `L_1` norm.
    pub norm_lo: f64,
    pub norm_hi: f64,
    /// Cap `3 L log k` on the largest coordinate.
    pub max_cap: f64,
}

impl TypicalitySet {
    pub fn new(k: usize, rate: f64) -> Self {
        let kf = k as f64;
        let l0 = rate * (1.0 - kf.ln() / kf.sqrt());
        TypicalitySet {
            k,
            rate,
            l0,
            norm_lo: kf * (l0 + 1.0),
            norm_hi: kf * rate,
            max_cap: 3.0 * rate * kf.ln(),
        }
    }
}

/// The three-way conjunction defining typicality.
pub fn is_typical(v: &ProxyVector, set: &TypicalitySet) -> bool {
    let norm = v.norm_l1() as f64;
    let max = v.w.iter().copied().max().unwrap_or(0) as f64;
    set.norm_lo <= norm && norm <= set.norm_hi && max <= set.max_cap
}

/// Draws a proxy vector; geometric magnitudes come from the inverse CDF
/// `ceil(log U / log(1 - 1/L))` so a seed fixes the stream on every platform.
pub fn sample_proxy(k: usize, rate: f64, orientation: Orientation, seed: u64) -> Result<ProxyVector> {
    let mut rng = rng::stream(seed);
    sample_proxy_with(&mut rng, k, rate, orientation)
}

/// [`sample_proxy`] drawing from a caller-owned stream.
pub fn sample_proxy_with(
    rng: &mut impl RngCore,
    k: usize,
    rate: f64,
    orientation: Orientation,
) -> Result<ProxyVector> {
    if !(rate > 1.0) {
        return Err(Error::InvalidParameter(format!("geometric rate must exceed 1, got {rate}")));
    }
    let log_q = (1.0 - 1.0 / rate).ln();
    let w = (0..k)
        .map(|_| {
            let u = rng::unit_open(rng);
            (u.ln() / log_q).ceil().max(1.0) as u64
        })
        .collect();
    let chi = match orientation {
        Orientation::Directed => vec![1i8; k],
        Orientation::Undirected => (0..k).map(|_| rng::rademacher(rng)).collect(),
    };
    Ok(ProxyVector { w, chi, rate })
}

/// Exactly uniform sampling from the `L_1` ball `B_k(R)` by sequential
/// coordinate sampling against exact counts:
/// `P(w_1 = v) = |B_{k-1}(R - |v|)| / |B_k(R)|`.
pub struct BallSampler {
    k: usize,
    radius: u64,
    orientation: Orientation,
    /// `counts[j][r] = |B_j(r)|` for `j <= k`, `r <= radius`; `|B_0(r)| = 1`.
    counts: Vec<Vec<BigUint>>,
}

impl BallSampler {
    pub fn new(k: usize, radius: u64, orientation: Orientation) -> Self {
        let counts = (0..=k)
            .map(|j| {
                (0..=radius)
                    .map(|r| if j == 0 { BigUint::from(1u8) } else { count_ball_l1(j, r, orientation) })
                    .collect()
            })
            .collect();
        BallSampler { k, radius, orientation, counts }
    }

    /// One uniform lattice point, coordinates settled left to right.
    pub fn sample(&self, rng: &mut impl RngCore) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.k);
        let mut budget = self.radius;
        for rem in (1..=self.k).rev() {
            let total = &self.counts[rem][budget as usize];
            let mut u = rng::uniform_biguint_below(rng, total);
            let lo = match self.orientation {
                Orientation::Undirected => -(budget as i64),
                Orientation::Directed => 0,
            };
            let mut chosen = None;
            for v in lo..=budget as i64 {
                let weight = &self.counts[rem - 1][(budget - v.unsigned_abs()) as usize];
                if &u < weight {
                    chosen = Some(v);
                    break;
                }
                u -= weight;
            }
            let v = chosen.expect("weights sum to the ball count");
            out.push(v);
            budget -= v.unsigned_abs();
        }
        out
    }
}

/// One uniform draw from `B_k(R)`; see [`BallSampler`] for batch use.
pub fn sample_uniform_ball(k: usize, radius: u64, orientation: Orientation, seed: u64) -> Vec<i64> {
    let mut rng = rng::stream(seed);
    BallSampler::new(k, radius, orientation).sample(&mut rng)
}

/// gcd data of a difference vector: `g = gcd(v_1, ..., v_k, n)`, the
/// per-factor `g_j = gcd(v_1, ..., v_k, m_j)`, and the support set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdStat {
    pub frak_g: u64,
    pub frak_g_j: Vec<u64>,
    pub support: Vec<usize>,
}

/// Computes the gcd statistic; the all-zero vector yields `g = n` (so that
/// `g^d 1{V != 0}` vanishes there).
pub fn gcd_stat(v: &[i64], group: &GroupSpec) -> GcdStat {
    let fold = |init: u64| v.iter().fold(init, |acc, &x| acc.gcd(&x.unsigned_abs()));
    GcdStat {
        frak_g: fold(group.order()),
        frak_g_j: group.moduli().iter().map(|&m| fold(m)).collect(),
        support: v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect(),
    }
}

/// Outcome of an exhaustive image-law verification.
#[derive(Debug, Clone, Serialize)]
pub struct ImageLawReport {
    pub pass: bool,
    pub gamma: u64,
    pub subgroup_order: u64,
    pub states: u128,
    /// Element index whose observed frequency breaks uniformity on `gamma G`.
    pub offending: Option<u64>,
}

/// Budget on `n^k` for [`image_law_check`].
pub const IMAGE_LAW_BUDGET: u128 = 10_000_000;

/// Enumerates every `Z in G^k` and verifies that `v . Z` is exactly uniform
/// on the subgroup `gamma G`, `gamma = gcd(v_1, ..., v_k, n)`.
pub fn image_law_check(group: &GroupSpec, v: &[i64]) -> Result<ImageLawReport> {
    let n = group.order();
    let k = v.len();
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one coefficient".into()));
    }
    let states = (0..k).try_fold(1u128, |acc, _| {
        acc.checked_mul(n as u128).filter(|&s| s <= IMAGE_LAW_BUDGET)
    });
    let states = states.ok_or(Error::BudgetExceeded { needed: u128::MAX, cap: IMAGE_LAW_BUDGET })?;

    let moduli = group.moduli();
    let d = moduli.len();
    let mut counts = vec![0u64; n as usize];
    let mut tuple = vec![0u64; k]; // element indices of (Z_1, ..., Z_k)
    let mut coords: Vec<Vec<u64>> = vec![vec![0; d]; k];
    loop {
        let mut idx = 0u64;
        for (j, (&m, &stride)) in moduli.iter().zip(group.strides()).enumerate() {
            let mut acc: i128 = 0;
            for i in 0..k {
                acc += v[i] as i128 * coords[i][j] as i128;
            }
            idx += acc.rem_euclid(m as i128) as u64 * stride;
        }
        counts[idx as usize] += 1;
        // odometer over G^k
        let mut pos = 0;
        loop {
            if pos == k {
                let stat = gcd_stat(v, group);
                let gamma = stat.frak_g;
                let subgroup_order = group.subgroup_gamma_order(gamma)?;
                let expected = (states / subgroup_order as u128) as u64;
                let offending = (0..n).find(|&x| {
                    let e = group.element_of(x).expect("in range");
                    let inside = e
                        .coords()
                        .iter()
                        .zip(moduli)
                        .all(|(&c, &m)| c % gamma.gcd(&m) == 0);
                    counts[x as usize] != if inside { expected } else { 0 }
                });
                return Ok(ImageLawReport {
                    pass: offending.is_none(),
                    gamma,
                    subgroup_order,
                    states,
                    offending,
                });
            }
            tuple[pos] += 1;
            if tuple[pos] < n {
                let e = group.element_of(tuple[pos]).expect("in range");
                coords[pos].copy_from_slice(e.coords());
                break;
            }
            tuple[pos] = 0;
            coords[pos].iter_mut().for_each(|c| *c = 0);
            pos += 1;
        }
    }
}

/// Which law the difference vector `V` is drawn under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MixingRegime {
    /// `V = chi W - chi' W'` with geometric magnitudes, conditioned typical.
    GeometricProxy { rate: f64 },
    /// `V = W - W'` with `W, W'` exactly uniform on `B_k(R)`.
    UniformBall { radius: u64 },
}

/// A Monte Carlo `L_2` collision estimate with its standard error.
#[derive(Debug, Clone, Serialize)]
pub struct CollisionEstimate {
    /// `n * P(S = S' | typical) - 1`, the empirical squared-`L_2` bound.
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    /// Trials whose proxy pair was typical (1 for the uniform-ball regime).
    pub typical_fraction: f64,
    pub collisions: u64,
    /// Histogram of the gcd statistic of `V` over counted trials.
    pub gcd_histogram: BTreeMap<u64, u64>,
}

/// Estimates `n P(S = S') - 1`, resampling the generators every trial.
pub fn collision_estimate(
    group: &GroupSpec,
    k: usize,
    orientation: Orientation,
    regime: MixingRegime,
    trials: u64,
    seed: u64,
) -> Result<CollisionEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let n = group.order();
    let ball = match regime {
        MixingRegime::UniformBall { radius } => Some(BallSampler::new(k, radius, orientation)),
        _ => None,
    };
    let typicality = match regime {
        MixingRegime::GeometricProxy { rate } => Some(TypicalitySet::new(k, rate)),
        _ => None,
    };
    let mut counted = 0u64;
    let mut collisions = 0u64;
    let mut histogram = BTreeMap::new();
    for trial in 0..trials {
        let mut rng = rng::stream(rng::derive_seed(seed, 1, trial));
        let z: Vec<Element> = (0..k)
            .map(|_| group.element_of(rng::uniform_below(&mut rng, n)).expect("in range"))
            .collect();
        let (a, b) = match &regime {
            MixingRegime::GeometricProxy { rate } => {
                let w = sample_proxy_with(&mut rng, k, *rate, orientation)?;
                let w2 = sample_proxy_with(&mut rng, k, *rate, orientation)?;
                let set = typicality.as_ref().expect("proxy regime");
                if !(is_typical(&w, set) && is_typical(&w2, set)) {
                    continue;
                }
                (w.signed(), w2.signed())
            }
            MixingRegime::UniformBall { .. } => {
                let s = ball.as_ref().expect("ball regime");
                (s.sample(&mut rng), s.sample(&mut rng))
            }
        };
        counted += 1;
        let v: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        *histogram.entry(gcd_stat(&v, group).frak_g).or_insert(0) += 1;
        if dot_into_group(group, &a, &z) == dot_into_group(group, &b, &z) {
            collisions += 1;
        }
    }
    if counted == 0 {
        return Err(Error::NoTypicalSamples);
    }
    let p = collisions as f64 / counted as f64;
    Ok(CollisionEstimate {
        estimate: n as f64 * p - 1.0,
        std_error: n as f64 * (p * (1.0 - p) / counted as f64).sqrt(),
        trials: counted,
        typical_fraction: counted as f64 / trials as f64,
        collisions,
        gcd_histogram: histogram,
    })
}

/// `w . Z` as an element index.
fn dot_into_group(group: &GroupSpec, w: &[i64], z: &[Element]) -> u64 {
    let mut idx = 0u64;
    for (j, (&m, &stride)) in group.moduli().iter().zip(group.strides()).enumerate() {
        let mut acc: i128 = 0;
        for (wi, zi) in w.iter().zip(z) {
            acc += *wi as i128 * zi.coords()[j] as i128;
        }
        idx += acc.rem_euclid(m as i128) as u64 * stride;
    }
    idx
}

/// A Monte Carlo estimate of `E[g^d 1{V != 0}]` with a per-support-size
/// breakdown.
#[derive(Debug, Clone, Serialize)]
pub struct GcdPowerEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub exponent: u32,
    /// Support size `|I|` -> (count, mean of `g^d` over that bucket).
    pub by_support: BTreeMap<usize, (u64, f64)>,
}

/// Estimates `E[g^d 1{V != 0}]` under the regime's `V`-law; `exponent`
/// defaults to `d(G)`.
pub fn gcd_power_expectation(
    group: &GroupSpec,
    k: usize,
    orientation: Orientation,
    regime: MixingRegime,
    exponent: Option<u32>,
    trials: u64,
    seed: u64,
) -> Result<GcdPowerEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let d = exponent.unwrap_or(group.d_min() as u32);
    let ball = match regime {
        MixingRegime::UniformBall { radius } => Some(BallSampler::new(k, radius, orientation)),
        _ => None,
    };
    let typicality = match regime {
        MixingRegime::GeometricProxy { rate } => Some(TypicalitySet::new(k, rate)),
        _ => None,
    };
    let mut counted = 0u64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut by_support: BTreeMap<usize, (u64, f64)> = BTreeMap::new();
    for trial in 0..trials {
        let mut rng = rng::stream(rng::derive_seed(seed, 2, trial));
        let (a, b) = match &regime {
            MixingRegime::GeometricProxy { rate } => {
                let w = sample_proxy_with(&mut rng, k, *rate, orientation)?;
                let w2 = sample_proxy_with(&mut rng, k, *rate, orientation)?;
                let set = typicality.as_ref().expect("proxy regime");
                if !(is_typical(&w, set) && is_typical(&w2, set)) {
                    continue;
                }
                (w.signed(), w2.signed())
            }
            MixingRegime::UniformBall { .. } => {
                let s = ball.as_ref().expect("ball regime");
                (s.sample(&mut rng), s.sample(&mut rng))
            }
        };
        counted += 1;
        let v: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let stat = gcd_stat(&v, group);
        let value = if stat.support.is_empty() { 0.0 } else { (stat.frak_g as f64).powi(d as i32) };
        sum += value;
        sum_sq += value * value;
        let bucket = by_support.entry(stat.support.len()).or_insert((0, 0.0));
        bucket.0 += 1;
        bucket.1 += value;
    }
    if counted == 0 {
        return Err(Error::NoTypicalSamples);
    }
    for bucket in by_support.values_mut() {
        bucket.1 /= bucket.0 as f64;
    }
    let mean = sum / counted as f64;
    let var = (sum_sq / counted as f64 - mean * mean).max(0.0);
    Ok(GcdPowerEstimate {
        estimate: mean,
        std_error: (var / counted as f64).sqrt(),
        trials: counted,
        exponent: d,
        by_support,
    })
}
