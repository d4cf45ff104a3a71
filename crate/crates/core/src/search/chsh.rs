//! Exact feasibility of two-setting, binary-outcome correlations against
//! the local polytope.
//!
//! The polytope is the convex hull of the 16 deterministic strategy
//! correlation vectors (a₁b₁, a₁b₂, a₂b₁, a₂b₂) with a, b ∈ {±1}². A
//! required correlation is classical exactly when it is a convex
//! combination of those vertices; the decision runs in exact rational
//! arithmetic so a reported violation is a certificate, not a rounding
//! artifact. The facets of this polytope are the eight sign variants of
//! E₁₁ + E₁₂ + E₂₁ − E₂₂ ≤ 2, so the witness for an infeasible point is
//! always one of those inequalities.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

use crate::error::{Error, Result};

/// Required agreement probabilities P(a=b | xᵢ, yⱼ) for the four setting
/// pairs, in row-major order (x₁y₁, x₁y₂, x₂y₁, x₂y₂). Exact rationals:
/// the decision below must not hinge on floating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationVector {
    agreements: [Ratio<i64>; 4],
}

impl CorrelationVector {
    pub fn new(agreements: [Ratio<i64>; 4]) -> Result<Self> {
        for p in &agreements {
            if *p < Ratio::new(0, 1) || *p > Ratio::new(1, 1) {
                return Err(Error::Argument(format!(
                    "agreement probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(CorrelationVector { agreements })
    }

    /// The restricted correlated-coin task: settings x ∈ {0, π/6} and
    /// y ∈ {0, 5π/6} require agreements cos²(x−y) = (1, 3/4, 3/4, 1/4).
    pub fn epr_restricted() -> Self {
        CorrelationVector {
            agreements: [
                Ratio::new(1, 1),
                Ratio::new(3, 4),
                Ratio::new(3, 4),
                Ratio::new(1, 4),
            ],
        }
    }

    pub fn agreements(&self) -> &[Ratio<i64>; 4] {
        &self.agreements
    }

    /// Correlators E = 2P(a=b) − 1.
    pub fn correlators(&self) -> [BigRational; 4] {
        self.agreements.map(|p| {
            let p = big(p);
            p.clone() + p - BigRational::from_integer(BigInt::from(1))
        })
    }
}

fn big(r: Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Parses "3/4", "1", or a plain decimal like "0.75" into an exact ratio.
pub fn parse_ratio(text: &str) -> Result<Ratio<i64>> {
    let text = text.trim();
    let bad = |_| Error::Argument(format!("cannot parse {text:?} as a rational"));
    if let Some((numer, denom)) = text.split_once('/') {
        let n: i64 = numer.trim().parse().map_err(bad)?;
        let d: i64 = denom.trim().parse().map_err(bad)?;
        if d == 0 {
            return Err(Error::Argument("zero denominator".into()));
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let sign = if whole.trim_start().starts_with('-') {
            -1
        } else {
            1
        };
        let w: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(bad)?
        };
        let digits = frac.len() as u32;
        if digits > 15 || frac.chars().any(|c| !c.is_ascii_digit()) {
            return Err(Error::Argument(format!(
                "cannot parse {text:?} as a rational"
            )));
        }
        let f: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(bad)?
        };
        let denom = 10i64.pow(digits);
        return Ok(Ratio::new(w * denom + sign * f, denom));
    }
    let n: i64 = text.parse().map_err(bad)?;
    Ok(Ratio::from_integer(n))
}

/// One of the 16 deterministic local strategies: a sign per setting and
/// party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub alice: [i8; 2],
    pub bob: [i8; 2],
}

impl DeterministicStrategy {
    pub fn correlators(&self) -> [i64; 4] {
        [
            (self.alice[0] * self.bob[0]) as i64,
            (self.alice[0] * self.bob[1]) as i64,
            (self.alice[1] * self.bob[0]) as i64,
            (self.alice[1] * self.bob[1]) as i64,
        ]
    }
}

/// All 16 deterministic strategies in a fixed order.
pub fn deterministic_strategies() -> Vec<DeterministicStrategy> {
    let sign = |bit: usize| if bit == 0 { 1i8 } else { -1i8 };
    (0..16)
        .map(|v| DeterministicStrategy {
            alice: [sign((v >> 3) & 1), sign((v >> 2) & 1)],
            bob: [sign((v >> 1) & 1), sign(v & 1)],
        })
        .collect()
}

/// The eight facet sign patterns: every s ∈ {±1}⁴ with an odd number of
/// minus signs, giving Σ sᵢEᵢ ≤ 2 on the local polytope.
pub fn facet_patterns() -> Vec<[i64; 4]> {
    let mut patterns = Vec::new();
    for v in 0..16u32 {
        if v.count_ones() % 2 == 1 {
            let sign = |bit: u32| if (v >> bit) & 1 == 0 { 1i64 } else { -1i64 };
            patterns.push([sign(3), sign(2), sign(1), sign(0)]);
        }
    }
    patterns
}

/// Certificate accompanying a feasibility verdict.
#[derive(Debug, Clone)]
pub enum ChshCertificate {
    /// Convex weights over [`deterministic_strategies`] (by index)
    /// reproducing the correlators exactly.
    ConvexCombination(Vec<(usize, BigRational)>),
    /// A facet the correlators violate: Σ coefficientsᵢ·Eᵢ = value > 2.
    ViolatedInequality {
        coefficients: [i64; 4],
        value: BigRational,
    },
}

/// Outcome of the polytope decision.
#[derive(Debug, Clone)]
pub struct ChshReport {
    pub feasible: bool,
    /// Maximum of Σ sᵢEᵢ over the eight facet patterns.
    pub max_chsh: BigRational,
    /// The pattern attaining it.
    pub max_pattern: [i64; 4],
    pub certificate: ChshCertificate,
}

/// Exact phase-one simplex for `A·λ = b, λ ≥ 0`. Returns a basic feasible
/// solution when one exists. Bland's rule keeps it from cycling.
fn exact_feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a[0].len();
    let zero = BigRational::from_integer(BigInt::from(0));

    // tableau [A | I | b], rows flipped so b ≥ 0
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = b[i] < zero;
        let mut row: Vec<BigRational> = Vec::with_capacity(cols + rows + 1);
        row.extend(
            a[i].iter()
                .map(|v| if flip { -v.clone() } else { v.clone() }),
        );
        for j in 0..rows {
            row.push(BigRational::from_integer(BigInt::from(u8::from(i == j))));
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // reduced costs for minimizing the artificial sum
    let mut objective = vec![zero.clone(); cols + rows + 1];
    for row in t.iter() {
        for (value, entry) in objective.iter_mut().zip(row) {
            *value -= entry.clone();
        }
    }
    for value in objective.iter_mut().take(cols + rows).skip(cols) {
        *value += BigRational::from_integer(BigInt::from(1));
    }

    loop {
        let entering = (0..cols + rows).find(|&j| objective[j] < zero);
        let Some(entering) = entering else { break };
        let mut leaving: Option<usize> = None;
        let mut best_ratio: Option<BigRational> = None;
        for (i, row) in t.iter().enumerate() {
            if row[entering] > zero {
                let ratio = row[cols + rows].clone() / row[entering].clone();
                let better = match &best_ratio {
                    None => true,
                    Some(current) => {
                        ratio < *current
                            || (ratio == *current
                                && basis[i] < basis[leaving.expect("set with best_ratio")])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    leaving = Some(i);
                }
            }
        }
        let Some(leaving) = leaving else {
            return None; // unbounded cannot happen for a phase-one problem
        };

        let pivot = t[leaving][entering].clone();
        for value in t[leaving].iter_mut() {
            *value /= pivot.clone();
        }
        for i in 0..rows {
            if i != leaving && t[i][entering] != zero {
                let factor = t[i][entering].clone();
                let pivot_row = t[leaving].clone();
                for (value, pivot_value) in t[i].iter_mut().zip(&pivot_row) {
                    *value -= factor.clone() * pivot_value.clone();
                }
            }
        }
        if objective[entering] != zero {
            let factor = objective[entering].clone();
            for (value, pivot_value) in objective.iter_mut().zip(&t[leaving]) {
                *value -= factor.clone() * pivot_value.clone();
            }
        }
        basis[leaving] = entering;
    }

    // optimal artificial sum must be zero for feasibility
    let mut artificial_sum = zero.clone();
    for (i, &var) in basis.iter().enumerate() {
        if var >= cols {
            artificial_sum += t[i][cols + rows].clone();
        }
    }
    if artificial_sum != zero {
        return None;
    }
    let mut solution = vec![zero; cols];
    for (i, &var) in basis.iter().enumerate() {
        if var < cols {
            solution[var] = t[i][cols + rows].clone();
        }
    }
    Some(solution)
}

/// Decides whether the required correlations are classically achievable
/// without communication, with an exact certificate either way.
pub fn chsh_feasibility(required: &CorrelationVector) -> Result<ChshReport> {
    let correlators = required.correlators();
    let strategies = deterministic_strategies();

    let mut max_chsh: Option<(BigRational, [i64; 4])> = None;
    for pattern in facet_patterns() {
        let mut value = BigRational::from_integer(BigInt::from(0));
        for (s, e) in pattern.iter().zip(&correlators) {
            value += BigRational::from_integer(BigInt::from(*s)) * e.clone();
        }
        if max_chsh.as_ref().map(|(v, _)| value > *v).unwrap_or(true) {
            max_chsh = Some((value, pattern));
        }
    }
    let (max_chsh, max_pattern) = max_chsh.expect("eight patterns");

    // A·λ = (E, 1): four correlator rows plus normalization
    let mut a: Vec<Vec<BigRational>> = (0..5).map(|_| Vec::with_capacity(16)).collect();
    for strategy in &strategies {
        let v = strategy.correlators();
        for j in 0..4 {
            a[j].push(BigRational::from_integer(BigInt::from(v[j])));
        }
        a[4].push(BigRational::from_integer(BigInt::from(1)));
    }
    let mut b: Vec<BigRational> = correlators.to_vec();
    b.push(BigRational::from_integer(BigInt::from(1)));

    match exact_feasible_point(&a, &b) {
        Some(lambda) => {
            // verify the certificate exactly before handing it out
            let zero = BigRational::from_integer(BigInt::from(0));
            let mut total = zero.clone();
            let mut reproduced = [zero.clone(), zero.clone(), zero.clone(), zero.clone()];
            for (v, weight) in lambda.iter().enumerate() {
                if *weight < zero {
                    return Err(Error::Internal("negative convex weight".into()));
                }
                total += weight.clone();
                for (j, e) in strategies[v].correlators().into_iter().enumerate() {
                    reproduced[j] += weight.clone() * BigRational::from_integer(BigInt::from(e));
                }
            }
            if total != BigRational::from_integer(BigInt::from(1)) || reproduced != correlators {
                return Err(Error::Internal(
                    "convex combination failed verification".into(),
                ));
            }
            let combination: Vec<(usize, BigRational)> = lambda
                .into_iter()
                .enumerate()
                .filter(|(_, w)| *w > zero)
                .collect();
            Ok(ChshReport {
                feasible: true,
                max_chsh,
                max_pattern,
                certificate: ChshCertificate::ConvexCombination(combination),
            })
        }
        None => {
            if max_chsh <= BigRational::from_integer(BigInt::from(2)) {
                // the eight inequalities are the complete facet list, so an
                // infeasible point must violate one
                return Err(Error::Internal(
                    "polytope decision and facet check disagree".into(),
                ));
            }
            Ok(ChshReport {
                feasible: false,
                max_chsh: max_chsh.clone(),
                max_pattern,
                certificate: ChshCertificate::ViolatedInequality {
                    coefficients: max_pattern,
                    value: max_chsh,
                },
            })
        }
    }
}
