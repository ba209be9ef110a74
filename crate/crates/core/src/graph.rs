//! Distance geometry of sampled Cayley graphs, measured exactly.
//!
//! Graphs are never materialized: breadth-first search walks the implicit
//! neighbor relation `x -> x + z_i` (and `x - z_i` when undirected) over
//! element indices, using a byte-wide distance table that escalates to a
//! wide table in the rare case the diameter reaches 255.

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, DENSE_ORDER_CAP};
use crate::lattice::{concentration_value, count_ball_l1, min_radius, LqIndex, Orientation};
use crate::rng;
use num_bigint::BigUint;
use rand_core::RngCore;
use serde::Serialize;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

/// Distance value for elements outside the generated subgroup.
pub const UNREACHED: u32 = u32::MAX;

/// A seeded multiset of `k` generators; duplicates and the identity are kept
/// (multiedges never change distances).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSet {
    pub group: GroupSpec,
    pub k: usize,
    pub gens: Vec<Element>,
    pub orientation: Orientation,
    pub seed: Option<u64>,
}

/// Draws `k` generators iid uniform from the group; bit-reproducible from
/// the seed.
pub fn sample_generators(group: &GroupSpec, k: usize, orientation: Orientation, seed: u64) -> GeneratorSet {
    let mut rng = rng::stream(seed);
    let gens = (0..k)
        .map(|_| {
            let idx = rng::uniform_below(&mut rng, group.order());
            group.element_of(idx).expect("index in range")
        })
        .collect();
    GeneratorSet { group: group.clone(), k, gens, orientation, seed: Some(seed) }
}

impl GeneratorSet {
    /// Wraps an explicit multiset of generators (hand-built graphs, tests).
    pub fn from_elements(group: &GroupSpec, gens: Vec<Element>, orientation: Orientation) -> Result<Self> {
        for g in &gens {
            group.validate(g)?;
        }
        Ok(GeneratorSet { group: group.clone(), k: gens.len(), gens, orientation, seed: None })
    }
}

/// Exact distances from the identity plus the ball-size profile.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceProfile {
    /// Graph distance per element index; [`UNREACHED`] outside the generated subgroup.
    pub dist: Vec<u32>,
    /// `ball_sizes[r] = |B(r)|`, nondecreasing, ending at `reached`.
    pub ball_sizes: Vec<u64>,
    pub reached: u64,
    pub n: u64,
    pub k: usize,
    pub orientation: Orientation,
}

/// Moves of the walk in index space: a fast additive path for cyclic groups
/// and a digit-carry path for general ones.
struct MoveTable {
    n: u64,
    cyclic: Option<Vec<u64>>,
    moves: Vec<Vec<u64>>,
    moduli: Vec<u64>,
    strides: Vec<u64>,
}

impl MoveTable {
    fn new(gens: &GeneratorSet) -> Self {
        let group = &gens.group;
        let mut moves: Vec<Vec<u64>> = gens.gens.iter().map(|g| g.coords().to_vec()).collect();
        if gens.orientation == Orientation::Undirected {
            let negs: Vec<Vec<u64>> =
                gens.gens.iter().map(|g| group.neg(g).expect("validated").coords().to_vec()).collect();
            moves.extend(negs);
        }
        // multiedges are irrelevant for distances; deduplicate the move set
        moves.sort_unstable();
        moves.dedup();
        let cyclic = (group.rank() == 1).then(|| moves.iter().map(|m| m[0]).collect());
        MoveTable {
            n: group.order(),
            cyclic,
            moves,
            moduli: group.moduli().to_vec(),
            strides: group.strides().to_vec(),
        }
    }

    #[inline]
    fn for_each_neighbor(&self, x: u64, digits: &mut Vec<u64>, mut f: impl FnMut(u64)) {
        if let Some(offsets) = &self.cyclic {
            for &z in offsets {
                let y = x + z;
                f(if y >= self.n { y - self.n } else { y });
            }
            return;
        }
        digits.clear();
        let mut rem = x;
        for &m in &self.moduli {
            digits.push(rem % m);
            rem /= m;
        }
        for mv in &self.moves {
            let mut y = 0u64;
            for j in 0..digits.len() {
                let mut t = digits[j] + mv[j];
                if t >= self.moduli[j] {
                    t -= self.moduli[j];
                }
                y += t * self.strides[j];
            }
            f(y);
        }
    }
}

/// BFS from the identity; `O(n k)` time, `O(n)` memory.
pub fn distance_profile(gens: &GeneratorSet) -> Result<DistanceProfile> {
    distance_profile_with_cap(gens, DENSE_ORDER_CAP)
}

/// [`distance_profile`] with an explicit dense-table cap.
pub fn distance_profile_with_cap(gens: &GeneratorSet, cap: u64) -> Result<DistanceProfile> {
    let n = gens.group.order();
    if n > cap {
        return Err(Error::OrderTooLarge { n, cap });
    }
    let table = MoveTable::new(gens);
    let (dist, ball_sizes) = match bfs::<u8>(&table) {
        Some(r) => r,
        None => bfs::<u32>(&table).expect("u32 distances cannot overflow under the order cap"),
    };
    let reached = *ball_sizes.last().expect("identity always reached");
    Ok(DistanceProfile { dist, ball_sizes, reached, n, k: gens.k, orientation: gens.orientation })
}

trait DistCell: Copy + Eq {
    const UNSET: Self;
    const LIMIT: u32;
    fn of(d: u32) -> Self;
    fn get(self) -> u32;
}

impl DistCell for u8 {
    const UNSET: Self = u8::MAX;
    const LIMIT: u32 = u8::MAX as u32 - 1;
    fn of(d: u32) -> Self {
        d as u8
    }
    fn get(self) -> u32 {
        self as u32
    }
}

impl DistCell for u32 {
    const UNSET: Self = u32::MAX;
    const LIMIT: u32 = u32::MAX - 1;
    fn of(d: u32) -> Self {
        d
    }
    fn get(self) -> u32 {
        self
    }
}

/// Returns `None` when distances would exceed the cell width.
fn bfs<D: DistCell>(table: &MoveTable) -> Option<(Vec<u32>, Vec<u64>)> {
    let n = table.n as usize;
    let mut dist = vec![D::UNSET; n];
    dist[0] = D::of(0);
    let mut frontier: Vec<u32> = vec![0];
    let mut next: Vec<u32> = Vec::new();
    let mut ball_sizes: Vec<u64> = vec![1];
    let mut digits: Vec<u64> = Vec::with_capacity(table.moduli.len());
    let mut r = 0u32;
    while !frontier.is_empty() {
        if r + 1 > D::LIMIT {
            return None;
        }
        next.clear();
        for &x in &frontier {
            table.for_each_neighbor(x as u64, &mut digits, |y| {
                let y = y as usize;
                if dist[y] == D::UNSET {
                    dist[y] = D::of(r + 1);
                    next.push(y as u32);
                }
            });
        }
        r += 1;
        if next.is_empty() {
            break;
        }
        ball_sizes.push(ball_sizes.last().unwrap() + next.len() as u64);
        std::mem::swap(&mut frontier, &mut next);
    }
    let wide = dist
        .into_iter()
        .map(|d| if d == D::UNSET { UNREACHED } else { d.get() })
        .collect();
    Some((wide, ball_sizes))
}

/// `D(beta)`: minimal `r` with `|B(r)| >= beta * n`.
pub fn typical_distance(profile: &DistanceProfile, beta: f64) -> Result<u32> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0,1), got {beta}")));
    }
    let threshold = beta * profile.n as f64;
    profile
        .ball_sizes
        .iter()
        .position(|&s| s as f64 >= threshold)
        .map(|r| r as u32)
        .ok_or(Error::ThresholdUnreachable { reached: profile.reached, order: profile.n })
}

/// Maximal distance when the graph is connected, `None` otherwise.
/// By vertex-transitivity the eccentricity of the identity is the diameter.
pub fn diameter(profile: &DistanceProfile) -> Option<u32> {
    (profile.reached == profile.n).then(|| profile.ball_sizes.len() as u32 - 1)
}

/// The deterministic floor for `D(beta)`: minimal `R` with `|B_k(R)| >= beta n`.
pub fn lower_bound_radius(k: usize, n: u64, beta: f64, orientation: Orientation) -> u32 {
    let target = BigUint::from((beta * n as f64).ceil() as u64);
    min_radius(k, &target, orientation, LqIndex::Finite(1)).expect("positive target") as u32
}

/// Exact `L_q` distances found by best-first search over lattice vectors.
#[derive(Debug, Clone, Serialize)]
pub struct LqProfile {
    /// `sum_i |w_i|^q` of the geodesic per element; `None` if not settled.
    pub cost_pow: Vec<Option<u64>>,
    pub q: u32,
    pub settled: u64,
    pub expanded: usize,
    pub budget_exhausted: bool,
    pub n: u64,
}

impl LqProfile {
    /// Reported `L_q` distance `(sum |w_i|^q)^(1/q)`.
    pub fn distance(&self, index: usize) -> Option<f64> {
        self.cost_pow[index].map(|c| (c as f64).powf(1.0 / self.q as f64))
    }
}

/// Best-first search over lattice vectors `w` ordered by the exact integer
/// key `sum |w_i|^q`, recording first arrival at each group element `w . Z`.
/// Settled distances are exact; elements beyond the expansion budget stay
/// `None` and the profile is flagged.
pub fn lq_distance_profile(gens: &GeneratorSet, q: u32, budget: usize) -> Result<LqProfile> {
    if q < 2 {
        return Err(Error::InvalidParameter("q must be an integer >= 2 (q = 1 is the graph metric)".into()));
    }
    let n = gens.group.order();
    if n > DENSE_ORDER_CAP {
        return Err(Error::OrderTooLarge { n, cap: DENSE_ORDER_CAP });
    }
    let k = gens.k;
    let moduli = gens.group.moduli();
    let strides = gens.group.strides();
    let gen_digits: Vec<&[u64]> = gens.gens.iter().map(|g| g.coords()).collect();
    let element_index = |w: &[i64]| -> u64 {
        let mut idx = 0u64;
        for j in 0..moduli.len() {
            let m = moduli[j] as i128;
            let mut acc: i128 = 0;
            for i in 0..k {
                acc += w[i] as i128 * gen_digits[i][j] as i128;
            }
            idx += acc.rem_euclid(m) as u64 * strides[j];
        }
        idx
    };
    let step_cost = |mag: u64| -> u64 { (mag + 1).pow(q) - mag.pow(q) };

    let mut cost_pow: Vec<Option<u64>> = vec![None; n as usize];
    let mut settled = 0u64;
    let mut heap: BinaryHeap<Reverse<(u64, Vec<i64>)>> = BinaryHeap::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let origin = vec![0i64; k];
    seen.insert(origin.clone());
    heap.push(Reverse((0, origin)));
    let mut expanded = 0usize;
    let mut budget_exhausted = false;
    while let Some(Reverse((cost, w))) = heap.pop() {
        if expanded >= budget {
            budget_exhausted = true;
            break;
        }
        expanded += 1;
        let idx = element_index(&w) as usize;
        if cost_pow[idx].is_none() {
            cost_pow[idx] = Some(cost);
            settled += 1;
            if settled == n {
                break;
            }
        }
        for i in 0..k {
            let mut push = |dir: i64| {
                let mut child = w.clone();
                child[i] += dir;
                if seen.insert(child.clone()) {
                    let c = cost + step_cost(w[i].unsigned_abs());
                    heap.push(Reverse((c, child)));
                }
            };
            if w[i] > 0 {
                push(1);
            } else if w[i] < 0 {
                push(-1);
            } else {
                push(1);
                if gens.orientation == Orientation::Undirected {
                    push(-1);
                }
            }
        }
    }
    Ok(LqProfile { cost_pow, q, settled, expanded, budget_exhausted, n })
}

/// One row of a concentration experiment: a `(trial, beta)` measurement
/// against the regime prediction and the deterministic ball bound.
#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationRow {
    pub trial: u64,
    pub n: u64,
    pub k: usize,
    pub orientation: Orientation,
    pub beta: f64,
    pub d_beta: Option<u32>,
    pub lower_bound_radius: u32,
    pub diameter: Option<u32>,
    pub connected: bool,
    pub predicted: f64,
    pub ratio: Option<f64>,
    /// `D(beta) >= min{R : |B_k(R)| >= beta n}`; must never be false.
    pub bound_ok: bool,
    /// Unreachable-threshold message, when the trial errored for this beta.
    pub error: Option<String>,
}

/// Runs `trials` independent graphs and measures `D(beta)` per beta plus the
/// diameter, with per-trial seeds split off the given seed.
pub fn concentration_report(
    group: &GroupSpec,
    k: usize,
    orientation: Orientation,
    trials: u64,
    betas: &[f64],
    seed: u64,
) -> Result<Vec<ConcentrationRow>> {
    for &b in betas {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::InvalidParameter(format!("beta must lie in (0,1), got {b}")));
        }
    }
    let n = group.order();
    let predicted = concentration_value(k, n, orientation)?;
    let mut rows = Vec::with_capacity(trials as usize * betas.len().max(1));
    for trial in 0..trials {
        let gens = sample_generators(group, k, orientation, rng::derive_seed(seed, 0, trial));
        let profile = distance_profile(&gens)?;
        let diam = diameter(&profile);
        for &beta in betas {
            let lb = lower_bound_radius(k, n, beta, orientation);
            let row = match typical_distance(&profile, beta) {
                Ok(d) => ConcentrationRow {
                    trial,
                    n,
                    k,
                    orientation,
                    beta,
                    d_beta: Some(d),
                    lower_bound_radius: lb,
                    diameter: diam,
                    connected: diam.is_some(),
                    predicted,
                    ratio: Some(d as f64 / predicted),
                    bound_ok: d >= lb,
                    error: None,
                },
                Err(e) => ConcentrationRow {
                    trial,
                    n,
                    k,
                    orientation,
                    beta,
                    d_beta: None,
                    lower_bound_radius: lb,
                    diameter: diam,
                    connected: diam.is_some(),
                    predicted,
                    ratio: None,
                    bound_ok: true,
                    error: Some(e.to_string()),
                },
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Uniform draw of a generator multiset, then BFS; convenience for callers
/// that only need the profile.
pub fn sampled_profile(group: &GroupSpec, k: usize, orientation: Orientation, seed: u64) -> Result<DistanceProfile> {
    distance_profile(&sample_generators(group, k, orientation, seed))
}
