//! Exact spectrum of the symmetrized random walk via characters.
//!
//! For an Abelian group each element `x` indexes an eigenvector with
//! eigenvalue `(1/k) sum_i cos(2 pi <x, Z_i>)`, where the phase
//! `<x, Z_i> = sum_j x_j Z_i^j / m_j` is reduced modulo 1 in exact integer
//! arithmetic before any cosine is taken; for orders around `10^7` a naive
//! floating accumulation loses the fractional part entirely.
//!
//! Directed generator sets are symmetrized (the walk uses `±Z_i`), so one
//! real spectrum covers both orientations.

use crate::error::{Error, Result};
use crate::graph::GeneratorSet;
use crate::group::{Element, GroupSpec, DENSE_ORDER_CAP};
use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// All `n` walk eigenvalues with the gap statistics derived from them.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    /// `eigenvalues[x]` for every element index `x`; entry 0 is exactly 1.
    pub eigenvalues: Vec<f64>,
    /// `gamma = min_{x != 0} (1 - lambda_x)`.
    pub gap: f64,
    /// `gamma_* = min_{x != 0} (1 - |lambda_x|)`.
    pub abs_gap: f64,
    /// `1/gamma`; infinite when the walk is reducible.
    pub t_rel: f64,
    /// `1/gamma_*`; infinity is the honest value for bipartite-like walks.
    pub t_rel_star: f64,
    /// Element index attaining the gap.
    pub argmin: u64,
}

/// Per-generator phase multipliers `Z_i^j * (D / m_j) mod D` over the
/// common denominator `D = lcm(m_j)`.
struct PhaseTable {
    denom: u64,
    per_gen: Vec<Vec<u64>>,
}

impl PhaseTable {
    fn new(gens: &GeneratorSet) -> Self {
        let moduli = gens.group.moduli();
        let denom = moduli.iter().fold(1u64, |acc, &m| acc.lcm(&m));
        let per_gen = gens
            .gens
            .iter()
            .map(|g| {
                g.coords()
                    .iter()
                    .zip(moduli)
                    .map(|(&z, &m)| ((z as u128 * (denom / m) as u128) % denom as u128) as u64)
                    .collect()
            })
            .collect();
        PhaseTable { denom, per_gen }
    }

    /// `sum_j x_j Z_i^j / m_j mod 1`, as a numerator over `denom`.
    fn phase(&self, gen: usize, coords: &[u64]) -> u64 {
        let d = self.denom as u128;
        let mut acc: u128 = 0;
        for (&x, &c) in coords.iter().zip(&self.per_gen[gen]) {
            acc += x as u128 * c as u128 % d;
        }
        (acc % d) as u64
    }
}

/// Eigenvalue of the symmetrized walk at the character indexed by `x`.
pub fn eigenvalue_at(gens: &GeneratorSet, x: &Element) -> Result<f64> {
    gens.group.validate(x)?;
    let table = PhaseTable::new(gens);
    let k = gens.k as f64;
    let mut sum = 0.0;
    for i in 0..gens.k {
        let num = table.phase(i, x.coords());
        sum += (2.0 * PI * (num as f64 / table.denom as f64)).cos();
    }
    Ok(sum / k)
}

/// All `n` eigenvalues in `O(n k d)` arithmetic, plus gaps and relaxation
/// times. Duplicate generators keep their multiplicity (they weight the
/// average).
pub fn full_spectrum(gens: &GeneratorSet) -> Result<SpectrumSummary> {
    let group = &gens.group;
    let n = group.order();
    if n > DENSE_ORDER_CAP {
        return Err(Error::OrderTooLarge { n, cap: DENSE_ORDER_CAP });
    }
    let table = PhaseTable::new(gens);
    let k = gens.k as f64;
    let denom = table.denom;
    let mut eigenvalues = Vec::with_capacity(n as usize);
    if group.rank() == 1 {
        // cyclic fast path: the phase of x + 1 shifts by the multiplier
        let mults: Vec<u64> = table.per_gen.iter().map(|v| v[0]).collect();
        let mut phases = vec![0u64; mults.len()];
        for _ in 0..n {
            let mut sum = 0.0;
            for &p in &phases {
                sum += (2.0 * PI * (p as f64 / denom as f64)).cos();
            }
            eigenvalues.push(sum / k);
            for (p, &m) in phases.iter_mut().zip(&mults) {
                *p += m;
                if *p >= denom {
                    *p -= denom;
                }
            }
        }
    } else {
        let moduli = group.moduli();
        let mut coords = vec![0u64; moduli.len()];
        for _ in 0..n {
            let mut sum = 0.0;
            for i in 0..gens.k {
                let num = table.phase(i, &coords);
                sum += (2.0 * PI * (num as f64 / denom as f64)).cos();
            }
            eigenvalues.push(sum / k);
            for (c, &m) in coords.iter_mut().zip(moduli) {
                *c += 1;
                if *c < m {
                    break;
                }
                *c = 0;
            }
        }
    }
    eigenvalues[0] = 1.0;

    let mut max_rest = f64::NEG_INFINITY;
    let mut max_abs = f64::NEG_INFINITY;
    let mut argmin = 0u64;
    for (x, &lam) in eigenvalues.iter().enumerate().skip(1) {
        if lam > max_rest {
            max_rest = lam;
            argmin = x as u64;
        }
        max_abs = max_abs.max(lam.abs());
    }
    let gap = 1.0 - max_rest;
    let abs_gap = 1.0 - max_abs;
    Ok(SpectrumSummary {
        eigenvalues,
        gap,
        abs_gap,
        t_rel: recip_or_inf(gap),
        t_rel_star: recip_or_inf(abs_gap),
        argmin,
    })
}

fn recip_or_inf(gap: f64) -> f64 {
    if gap > 0.0 {
        1.0 / gap
    } else {
        f64::INFINITY
    }
}

/// `s_*(x) = max_j m_j / gcd(x_j, m_j)`; equals 1 exactly at the identity.
pub fn s_star(group: &GroupSpec, x: &Element) -> Result<u64> {
    group.validate(x)?;
    Ok(x.coords()
        .iter()
        .zip(group.moduli())
        .map(|(&xj, &m)| m / xj.gcd(&m))
        .max()
        .expect("at least one factor"))
}

/// Number of elements with a given `s_*` value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SStarClass {
    pub s: u64,
    pub members: u64,
}

/// Exhaustive `s_*` histogram; class counts sum to the group order.
pub fn class_sizes(group: &GroupSpec) -> Result<Vec<SStarClass>> {
    let n = group.order();
    if n > DENSE_ORDER_CAP {
        return Err(Error::OrderTooLarge { n, cap: DENSE_ORDER_CAP });
    }
    let mut classes: BTreeMap<u64, u64> = BTreeMap::new();
    let moduli = group.moduli();
    let mut coords = vec![0u64; moduli.len()];
    for _ in 0..n {
        let s = coords
            .iter()
            .zip(moduli)
            .map(|(&xj, &m)| m / xj.gcd(&m))
            .max()
            .expect("at least one factor");
        *classes.entry(s).or_insert(0) += 1;
        for (c, &m) in coords.iter_mut().zip(moduli) {
            *c += 1;
            if *c < m {
                break;
            }
            *c = 0;
        }
    }
    Ok(classes.into_iter().map(|(s, members)| SStarClass { s, members }).collect())
}

/// Deterministic relaxation-time floor for every `k`-generator undirected
/// Cayley graph of order `n`: with `L = floor(((n/2)^{1/k} - 1)/2)`, the walk
/// confined to the box `{w . Z : |w_i| <= L}` certifies
/// `t_rel >= 4 (L+1)^2 / pi^2`.
///
/// Only valid in the window `k <= log_3(n/2)`; outside it a typed error is
/// returned and no bound is asserted.
pub fn dirichlet_lower_certificate(k: usize, n: u64) -> Result<f64> {
    let within = 3u64
        .checked_pow(k as u32)
        .map(|p| p.checked_mul(2).map(|q| q <= n).unwrap_or(false))
        .unwrap_or(false);
    if !within {
        return Err(Error::CertificateWindow { k, n });
    }
    let l = (((n as f64 / 2.0).powf(1.0 / k as f64) - 1.0) / 2.0).floor();
    Ok(4.0 * (l + 1.0) * (l + 1.0) / (PI * PI))
}

/// Divisor-weighted class bound `(sum_{i <= s, i | n} i)^d`, the sharper
/// counterpart of the crude `(s^2/2)^d`; a diagnostic, not a certificate.
pub fn divisor_weighted_class_bound(group: &GroupSpec, s: u64) -> Result<BigUint> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!("class bound needs s >= 2, got {s}")));
    }
    let n = group.order();
    let base: u64 = (1..=s).filter(|i| n % i == 0).sum();
    Ok(BigUint::from(base).pow(group.rank() as u32))
}

/// The crude class bound `(s^2 / 2)^d`, for reporting next to the refined one.
pub fn crude_class_bound(group: &GroupSpec, s: u64) -> f64 {
    (0.5 * (s as f64) * (s as f64)).powi(group.rank() as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_generators;
    use crate::group::make_group;
    use crate::lattice::Orientation;

    fn z(n: u64) -> GroupSpec {
        make_group(&[n]).unwrap()
    }

    fn single_gen(group: &GroupSpec, coords: &[u64]) -> GeneratorSet {
        GeneratorSet::from_elements(group, vec![Element::new(coords.to_vec())], Orientation::Undirected)
            .unwrap()
    }

    #[test]
    fn six_cycle_by_hand() {
        let g = z(6);
        let gens = single_gen(&g, &[1]);
        assert!((eigenvalue_at(&gens, &Element::new(vec![1])).unwrap() - 0.5).abs() < 1e-12);
        assert!((eigenvalue_at(&gens, &Element::new(vec![3])).unwrap() + 1.0).abs() < 1e-12);
        assert!((eigenvalue_at(&gens, &g.identity()).unwrap() - 1.0).abs() < 1e-15);

        let s = full_spectrum(&gens).unwrap();
        let expect = [1.0, 0.5, -0.5, -1.0, -0.5, 0.5];
        for (a, b) in s.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((s.gap - 0.5).abs() < 1e-12);
        assert!((s.t_rel - 2.0).abs() < 1e-12);
        assert!(s.abs_gap.abs() < 1e-12);
        assert!(s.t_rel_star.is_infinite());
    }

    #[test]
    fn two_point_walk() {
        let g = z(2);
        let s = full_spectrum(&single_gen(&g, &[1])).unwrap();
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-15);
        assert!((s.gap - 2.0).abs() < 1e-15);
        assert!(s.abs_gap.abs() < 1e-15);
    }

    #[test]
    fn duplicate_generators_average_out() {
        let g = z(5);
        let once = full_spectrum(&single_gen(&g, &[1])).unwrap();
        let gens = GeneratorSet::from_elements(
            &g,
            vec![Element::new(vec![1]), Element::new(vec![1])],
            Orientation::Undirected,
        )
        .unwrap();
        let twice = full_spectrum(&gens).unwrap();
        for (a, b) in once.eigenvalues.iter().zip(&twice.eigenvalues) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn s_star_examples() {
        let g = z(6);
        assert_eq!(s_star(&g, &Element::new(vec![2])).unwrap(), 3);
        assert_eq!(s_star(&g, &Element::new(vec![0])).unwrap(), 1);
        let g = make_group(&[4, 6]).unwrap();
        assert_eq!(s_star(&g, &Element::new(vec![2, 3])).unwrap(), 2);
    }

    #[test]
    fn class_sizes_account_for_everyone() {
        for moduli in [vec![12u64], vec![4, 6], vec![2, 2, 3, 5]] {
            let g = make_group(&moduli).unwrap();
            let classes = class_sizes(&g).unwrap();
            assert_eq!(classes.iter().map(|c| c.members).sum::<u64>(), g.order());
            // only the identity sits in class 1
            assert_eq!(classes.iter().find(|c| c.s == 1).map(|c| c.members), Some(1));
            // crude bound (s^2/2)^d holds for every s >= 2, exactly:
            // members * 2^d <= s^(2d)
            let d = g.rank() as u32;
            for c in classes.iter().filter(|c| c.s >= 2) {
                let lhs = BigUint::from(c.members) << d;
                let rhs = BigUint::from(c.s).pow(2 * d);
                assert!(lhs <= rhs, "moduli {moduli:?}, s = {}", c.s);
            }
        }
    }

    #[test]
    fn dirichlet_certificate_examples() {
        let b = dirichlet_lower_certificate(3, 1000).unwrap();
        assert!((b - 64.0 / (PI * PI)).abs() < 1e-12, "{b}");
        let b = dirichlet_lower_certificate(1, 10).unwrap();
        assert!((b - 36.0 / (PI * PI)).abs() < 1e-12, "{b}");
        assert!(matches!(
            dirichlet_lower_certificate(20, 100),
            Err(Error::CertificateWindow { k: 20, n: 100 })
        ));
    }

    #[test]
    fn certificate_holds_on_samples() {
        for (n, k) in [(1000u64, 2usize), (1000, 4), (10_000, 3)] {
            let g = z(n);
            for seed in 0..5u64 {
                let gens = sample_generators(&g, k, Orientation::Undirected, seed);
                let s = full_spectrum(&gens).unwrap();
                let bound = dirichlet_lower_certificate(k, n).unwrap();
                assert!(s.t_rel >= bound, "n={n} k={k} seed={seed}: {} < {bound}", s.t_rel);
            }
        }
    }

    #[test]
    fn divisor_bound_examples() {
        let g = z(12);
        assert_eq!(divisor_weighted_class_bound(&g, 4).unwrap(), BigUint::from(10u32));
        let g = make_group(&[2, 6]).unwrap(); // n = 12, d = 2
        assert_eq!(divisor_weighted_class_bound(&g, 5).unwrap(), BigUint::from(100u32));
        let g = z(10007);
        assert_eq!(divisor_weighted_class_bound(&g, 100).unwrap(), BigUint::from(1u32));
        assert!(divisor_weighted_class_bound(&g, 1).is_err());
    }

    #[test]
    fn spectrum_is_negation_invariant() {
        let g = make_group(&[3, 8]).unwrap();
        let gens = sample_generators(&g, 3, Orientation::Directed, 17);
        let s = full_spectrum(&gens).unwrap();
        for idx in 0..g.order() {
            let e = g.element_of(idx).unwrap();
            let m = g.index_of(&g.neg(&e).unwrap()).unwrap();
            assert!((s.eigenvalues[idx as usize] - s.eigenvalues[m as usize]).abs() < 1e-12);
        }
    }

    #[test]
    fn cosine_sandwich_on_a_grid() {
        // (2/3)(pi t)^2 <= 1 - cos(2 pi t) <= 2 (pi t)^2 on [-1/2, 1/2]
        for i in 0..=10_000 {
            let t = -0.5 + i as f64 / 10_000.0;
            let lhs = 1.0 - (2.0 * PI * t).cos();
            let quad = (PI * t) * (PI * t);
            assert!(lhs >= 2.0 / 3.0 * quad - 1e-12, "t = {t}");
            assert!(lhs <= 2.0 * quad + 1e-12, "t = {t}");
        }
    }
}
