//! Finite Abelian groups presented as direct sums of cyclic factors.
//!
//! A group is stored exactly as the user supplied it, `Z_{m_1} + ... + Z_{m_d}`,
//! so that generator coordinates keep their intended meaning; the canonical
//! invariant-factor decomposition is computed alongside and carries the two
//! structural statistics used throughout the crate: `d_min` (minimal number of
//! generators) and `m_star` (largest attainable minimum side-length).

use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Largest accepted group order; keeps mixed-radix indices inside `u64`.
pub const ORDER_LIMIT: u64 = 1 << 48;

/// Largest order for which dense per-element tables are allocated
/// (distance arrays, full spectra, exhaustive class counts).
pub const DENSE_ORDER_CAP: u64 = 1 << 27;

/// A finite Abelian group `Z_{m_1} + ... + Z_{m_d}` with `m_j >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    invariant_factors: Vec<u64>,
}

/// A group element as a coordinate vector, `0 <= x_j < m_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Element {
    coords: Vec<u64>,
}

impl Element {
    pub fn new(coords: Vec<u64>) -> Self {
        Element { coords }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// Builds a group from its cyclic moduli.
///
/// Errors if any modulus is below 2 or the order exceeds [`ORDER_LIMIT`].
pub fn make_group(moduli: &[u64]) -> Result<GroupSpec> {
    if moduli.is_empty() {
        return Err(Error::InvalidParameter("group needs at least one factor".into()));
    }
    let mut order: u64 = 1;
    let mut strides = Vec::with_capacity(moduli.len());
    for &m in moduli {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        strides.push(order);
        order = order.checked_mul(m).filter(|&n| n <= ORDER_LIMIT).ok_or(Error::OrderOverflow)?;
    }
    Ok(GroupSpec {
        moduli: moduli.to_vec(),
        strides,
        order,
        invariant_factors: invariant_factors(moduli),
    })
}

impl GroupSpec {
    /// Parses the compact CLI format: comma-separated moduli with a power
    /// shorthand for repeated factors, e.g. `4,6`, `2^16` or `2^3,5,25`.
    /// `a^b` denotes `b` copies of the factor `Z_a`. No whitespace.
    pub fn parse(spec: &str) -> Result<GroupSpec> {
        let bad = || Error::ParseGroupSpec(spec.to_string());
        let mut moduli = Vec::new();
        for token in spec.split(',') {
            let (base, copies) = match token.split_once('^') {
                Some((b, e)) => (parse_plain_u64(b).ok_or_else(bad)?, parse_plain_u64(e).ok_or_else(bad)?),
                None => (parse_plain_u64(token).ok_or_else(bad)?, 1),
            };
            if copies == 0 || copies > 64 {
                return Err(bad());
            }
            moduli.extend(std::iter::repeat(base).take(copies as usize));
        }
        make_group(&moduli)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Mixed-radix strides: `strides[j] = m_1 * ... * m_{j-1}`.
    pub fn strides(&self) -> &[u64] {
        &self.strides
    }

    /// Group order `n`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of stored cyclic factors (the user decomposition, not d(G)).
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// Invariant factors `t_1 | t_2 | ... | t_d` in ascending divisibility order.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// d(G), the minimal size of a generating set.
    pub fn d_min(&self) -> usize {
        self.invariant_factors.len()
    }

    /// m_*(G), the largest minimum side-length over all decompositions;
    /// equals the smallest invariant factor.
    pub fn m_star(&self) -> u64 {
        self.invariant_factors[0]
    }

    pub fn identity(&self) -> Element {
        Element::new(vec![0; self.moduli.len()])
    }

    /// Checks that the element belongs to this group.
    pub fn validate(&self, e: &Element) -> Result<()> {
        if e.coords.len() != self.moduli.len() {
            return Err(Error::GroupMismatch { expected: self.moduli.len(), got: e.coords.len() });
        }
        for (&x, &m) in e.coords.iter().zip(&self.moduli) {
            if x >= m {
                return Err(Error::CoordinateOutOfRange { value: x, modulus: m });
            }
        }
        Ok(())
    }

    /// Coordinatewise addition mod `m_j`.
    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.validate(a)?;
        self.validate(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| {
                let s = x + y;
                if s >= m {
                    s - m
                } else {
                    s
                }
            })
            .collect();
        Ok(Element::new(coords))
    }

    /// Coordinatewise negation mod `m_j`.
    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.validate(a)?;
        let coords =
            a.coords.iter().zip(&self.moduli).map(|(&x, &m)| if x == 0 { 0 } else { m - x }).collect();
        Ok(Element::new(coords))
    }

    /// Mixed-radix index: `sum_j x_j * m_1 * ... * m_{j-1}`.
    pub fn index_of(&self, a: &Element) -> Result<u64> {
        self.validate(a)?;
        Ok(a.coords.iter().zip(&self.strides).map(|(&x, &s)| x * s).sum())
    }

    /// Inverse of [`GroupSpec::index_of`].
    pub fn element_of(&self, index: u64) -> Result<Element> {
        if index >= self.order {
            return Err(Error::IndexOutOfRange { index, order: self.order });
        }
        let mut rem = index;
        let coords = self
            .moduli
            .iter()
            .map(|&m| {
                let x = rem % m;
                rem /= m;
                x
            })
            .collect();
        Ok(Element::new(coords))
    }

    /// Order of the subgroup `gamma G = {gamma * x | x in G}`,
    /// namely `prod_j m_j / gcd(gamma, m_j)`.
    ///
    /// The index `n / |gamma G|` is always at most `gamma^d` for the number
    /// `d` of factors in any decomposition, in particular for d(G).
    pub fn subgroup_gamma_order(&self, gamma: u64) -> Result<u64> {
        if gamma == 0 {
            return Err(Error::InvalidParameter("gamma must be at least 1".into()));
        }
        Ok(self.moduli.iter().map(|&m| m / gamma.gcd(&m)).product())
    }
}

fn parse_plain_u64(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Prime factorization by trial division; moduli are at most 2^48.
fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while m % 2 == 0 {
        m /= 2;
        e += 1;
    }
    push(2, e);
    let mut p = 3;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        push(p, e);
        p += 2;
    }
    push(m, u32::from(m > 1));
    out
}

/// Invariant factors of `Z_{m_1} + ... + Z_{m_d}` in ascending divisibility
/// order: per prime, exponents are pooled and sorted descending, then the
/// i-th largest exponents of every prime recombine by CRT into one factor.
fn invariant_factors(moduli: &[u64]) -> Vec<u64> {
    use std::collections::BTreeMap;
    let mut exps: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &m in moduli {
        for (p, e) in factorize(m) {
            exps.entry(p).or_default().push(e);
        }
    }
    let d = exps.values().map(Vec::len).max().unwrap_or(0);
    if d == 0 {
        // all moduli were 1; callers reject this earlier
        return vec![1];
    }
    for v in exps.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut factors = vec![1u64; d];
    for (p, v) in &exps {
        for (i, &e) in v.iter().enumerate() {
            factors[i] *= p.pow(e);
        }
    }
    factors.reverse();
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cyclic_factor() {
        let g = make_group(&[6]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.invariant_factors(), &[6]);
        assert_eq!(g.d_min(), 1);
        assert_eq!(g.m_star(), 6);
    }

    #[test]
    fn crt_recombination() {
        let g = make_group(&[2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.invariant_factors(), &[6]);
        assert_eq!(g.d_min(), 1);
        assert_eq!(g.m_star(), 6);
    }

    #[test]
    fn exponent_sorting() {
        let g = make_group(&[4, 6]).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.invariant_factors(), &[2, 12]);
        assert_eq!(g.d_min(), 2);
        assert_eq!(g.m_star(), 2);
    }

    #[test]
    fn arithmetic_examples() {
        let g = make_group(&[4, 6]).unwrap();
        let a = Element::new(vec![3, 5]);
        let b = Element::new(vec![2, 2]);
        assert_eq!(g.add(&a, &b).unwrap(), Element::new(vec![1, 1]));
        assert_eq!(g.neg(&g.identity()).unwrap(), g.identity());

        let z5 = make_group(&[5]).unwrap();
        let three = Element::new(vec![3]);
        assert_eq!(z5.add(&three, &three).unwrap(), Element::new(vec![1]));
    }

    #[test]
    fn mixed_radix_examples() {
        let g = make_group(&[4, 6]).unwrap();
        assert_eq!(g.index_of(&Element::new(vec![0, 0])).unwrap(), 0);
        assert_eq!(g.index_of(&Element::new(vec![3, 0])).unwrap(), 3);
        assert_eq!(g.index_of(&Element::new(vec![1, 2])).unwrap(), 9);
        assert_eq!(g.element_of(9).unwrap(), Element::new(vec![1, 2]));
        for i in 0..24 {
            assert_eq!(g.index_of(&g.element_of(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn subgroup_orders() {
        let g = make_group(&[4, 6]).unwrap();
        assert_eq!(g.subgroup_gamma_order(2).unwrap(), 6);
        assert_eq!(g.subgroup_gamma_order(1).unwrap(), g.order());
        let z5 = make_group(&[5]).unwrap();
        assert_eq!(z5.subgroup_gamma_order(5).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(make_group(&[1, 3]), Err(Error::InvalidModulus(1))));
        assert!(matches!(make_group(&[0]), Err(Error::InvalidModulus(0))));
        assert!(matches!(make_group(&[1 << 25, 1 << 25]), Err(Error::OrderOverflow)));
        let g = make_group(&[4, 6]).unwrap();
        assert!(g.element_of(24).is_err());
        assert!(g.validate(&Element::new(vec![4, 0])).is_err());
        assert!(g.validate(&Element::new(vec![0])).is_err());
        assert!(g.subgroup_gamma_order(0).is_err());
    }

    #[test]
    fn parses_spec_strings() {
        assert_eq!(GroupSpec::parse("4,6").unwrap().moduli(), &[4, 6]);
        assert_eq!(GroupSpec::parse("2^16").unwrap().order(), 65536);
        assert_eq!(GroupSpec::parse("2^3,5,25").unwrap().moduli(), &[2, 2, 2, 5, 25]);
        for bad in ["", "4, 6", "4;6", "2^", "^3", "x", "3.5", "+4", "2^0"] {
            assert!(GroupSpec::parse(bad).is_err(), "accepted {bad:?}");
        }
    }
}
