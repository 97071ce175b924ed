//! Subgroup counts in free groups and the cover-count bounds derived from
//! them.
//!
//! `N(d, r)`, the number of index-`d` subgroups of the free group of rank
//! `r`, satisfies `N(1, r) = 1` and
//! `N(d, r) = d·(d!)^(r−1) − Σ_{i=1}^{d−1} ((d−i)!)^(r−1)·N(i, r)`.

use num_bigint::BigUint;
use num_traits::One;

use crate::dataset::{generate_graphcovers, GenerateConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupCount {
    pub degree: usize,
    pub rank: usize,
    pub value: BigUint,
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `N(i, r)` for `i = 1..=d`, computed bottom-up.
pub fn hall_counts(d: usize, r: usize) -> Result<Vec<BigUint>> {
    if d < 1 || r < 1 {
        return Err(Error::InvalidArgument(format!(
            "subgroup counts need d >= 1 and r >= 1, got d = {d}, r = {r}"
        )));
    }
    let e = (r - 1) as u32;
    let fact_pow: Vec<BigUint> = (0..=d).map(|k| factorial(k).pow(e)).collect();
    let mut counts: Vec<BigUint> = Vec::with_capacity(d);
    for k in 1..=d {
        if k == 1 {
            counts.push(BigUint::one());
            continue;
        }
        let positive = &fact_pow[k] * k;
        let subtracted: BigUint = (1..k).map(|i| &fact_pow[k - i] * &counts[i - 1]).sum();
        counts.push(positive - subtracted);
    }
    Ok(counts)
}

/// Number of index-`d` subgroups of the rank-`r` free group.
pub fn hall_count(d: usize, r: usize) -> Result<SubgroupCount> {
    let value = hall_counts(d, r)?.pop().expect("d >= 1");
    Ok(SubgroupCount {
        degree: d,
        rank: r,
        value,
    })
}

/// `d^(r−2)·((d−1)!)^(r−1)`, a lower bound on the number of connected
/// degree-`d` covers up to isomorphism when `r >= 2`.
pub fn lower_bound(d: usize, r: usize) -> Result<BigUint> {
    if d < 1 || r < 2 {
        return Err(Error::InvalidArgument(format!(
            "the cover-count bound needs d >= 1 and r >= 2, got d = {d}, r = {r}"
        )));
    }
    Ok(BigUint::from(d).pow((r - 2) as u32) * factorial(d - 1).pow((r - 1) as u32))
}

/// Rank `1 − χ(g)` of the fundamental group of a connected graph.
pub fn rank_from_graph(g: &Graph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok((1 - g.euler_characteristic()) as usize)
}

/// Number of permutation tuples in `S_d^r` acting transitively, predicted as
/// `(d−1)!·N(d, r)`.
pub fn predicted_transitive_tuples(d: usize, r: usize) -> Result<BigUint> {
    Ok(factorial(d - 1) * hall_count(d, r)?.value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingReport {
    pub degree: usize,
    pub rank: usize,
    pub classes: usize,
    pub subgroup_count: BigUint,
    pub lower_bound: Option<BigUint>,
    pub connected_voltages: u64,
    pub scanned: u64,
    pub checks: Vec<CountingCheck>,
}

impl CountingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Generates the covers of `base` at degree `d` and checks the class count
/// and connected-voltage count against the subgroup counts.
pub fn check_counting_consistency(
    base: &Graph,
    d: usize,
    config: &GenerateConfig,
) -> Result<CountingReport> {
    let rank = rank_from_graph(base)?;
    let ds = generate_graphcovers(base, d, config)?;
    let classes = ds.representatives.len();
    let mut checks = Vec::new();

    let (subgroup_count, predicted) = if rank == 0 {
        // Trees: the trivial group has a subgroup of index d only for d = 1.
        let n = BigUint::from((d == 1) as u32);
        (n.clone(), n)
    } else {
        (
            hall_count(d, rank)?.value,
            predicted_transitive_tuples(d, rank)?,
        )
    };

    let dc = BigUint::from(d * classes);
    checks.push(CountingCheck {
        name: "d*C >= N",
        passed: dc >= subgroup_count,
        detail: format!("{d}*{classes} = {dc} >= {subgroup_count}"),
    });

    let bound = if rank >= 2 {
        let b = lower_bound(d, rank)?;
        checks.push(CountingCheck {
            name: "C >= lower bound",
            passed: BigUint::from(classes) >= b,
            detail: format!("{classes} >= {b}"),
        });
        Some(b)
    } else {
        None
    };

    let connected = BigUint::from(ds.stats.connected);
    checks.push(CountingCheck {
        name: "connected voltages = (d-1)!*N",
        passed: ds.stats.complete && connected == predicted,
        detail: format!(
            "{connected} of {} tuples, predicted {predicted}",
            ds.stats.scanned
        ),
    });

    Ok(CountingReport {
        degree: d,
        rank,
        classes,
        subgroup_count,
        lower_bound: bound,
        connected_voltages: ds.stats.connected,
        scanned: ds.stats.scanned,
        checks,
    })
}
