//! Invariants of the whole complete-intersection family `S_d` as polynomials
//! in the power sums.
//!
//! Every invariant of `S_d` has the form `E · q(s_1(d), …, s_n(d))` with
//! `E = d_1⋯d_n = ∫ τ^n`. The pipeline runs in `Q[s_1, …, s_n, τ]` with
//! `λ = (2n+1 − s_1)/(n+1)`, `x = −τ`, `t_j = (C_j − s_j) τ^j`,
//! `C_j = (2n+1)/j!`, and `q` is read off as the coefficient of `τ^n`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::charclass::{ch_to_chern, twist_ch, ChVector};
use crate::error::{Error, Result};
use crate::exact::{int, inv_factorial, rat, LinearSolution, Poly, RatMatrix, Rational, Ring};
use crate::symfunc::{p_sigma, partitions, power_sum_ring, power_sums, transition_matrix, Partition};

/// Symbolic family invariant `E · q(s_1, …, s_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPoly {
    pub n: usize,
    pub q: Poly,
}

impl FamilyPoly {
    /// Value at the multi-degree `d`.
    pub fn evaluate(&self, d: &[u64]) -> Result<Rational> {
        if d.len() != self.n {
            return Err(Error::DegreeTupleLength {
                got: d.len(),
                expected: self.n,
            });
        }
        let volume: Rational = d.iter().map(|&di| int(di as i64)).product();
        Ok(volume * self.q.evaluate(&power_sums(d)))
    }
}

impl fmt::Display for FamilyPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E*({})", self.q)
    }
}

struct FamilyContext {
    n: usize,
    ring: Arc<Ring>,
    lambda: Poly,
    x: Poly,
    t: Vec<Poly>,
}

impl FamilyContext {
    fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NonPositiveDimension(0));
        }
        let vars = (1..=n)
            .map(|k| (format!("s{k}"), k as u32))
            .chain(std::iter::once(("tau".to_string(), 1)));
        let ring = Ring::new(vars)?;
        let s = |k: usize| Poly::var(&ring, k - 1);
        let tau = Poly::var(&ring, n);
        let c = int(2 * n as i64 + 1);
        let lambda = (Poly::constant(&ring, c.clone()) - s(1)).scale(&rat(1, n as i64 + 1));
        let t = (1..=n)
            .map(|j| (Poly::constant(&ring, &c * inv_factorial(j)) - s(j)) * tau.pow(j as u32))
            .collect();
        Ok(FamilyContext {
            n,
            x: -tau,
            ring,
            lambda,
            t,
        })
    }

    /// Coefficient of `τ^n`, moved into `Q[s_1, …, s_n]`.
    fn top_coefficient(&self, cls: &Poly) -> Poly {
        let top = cls.terms_with_exponent(self.n, self.n as u32);
        debug_assert_eq!(&top, cls, "family classes are homogeneous of degree n in tau");
        let target = power_sum_ring(self.n);
        let mut images: Vec<Poly> = (0..self.n).map(|i| Poly::var(&target, i)).collect();
        images.push(Poly::one(&target));
        top.substitute(&target, &images)
    }

    fn lambda_x(&self) -> Poly {
        &self.lambda * &self.x
    }

    fn bochner(&self) -> ChVector {
        let v = ChVector::with_rank(&self.ring, self.n as u32 + 1, self.t.clone());
        twist_ch(&v, &self.lambda_x())
    }
}

/// `q_ς` with `I_ς(S_d) = E · q_ς(s(d))`.
pub fn family_partition_invariant(n: usize, sigma: &Partition) -> Result<FamilyPoly> {
    if sigma.n() != n {
        return Err(Error::DimensionMismatch(format!("partition {sigma} is not a partition of n = {n}")));
    }
    let ctx = FamilyContext::new(n)?;
    let bochner = ctx.bochner();
    let mut cls = ctx.lambda_x().pow(sigma.multiplicity(1));
    for k in 2..=n {
        let e = sigma.multiplicity(k);
        if e > 0 {
            cls = cls * bochner.get(k).pow(e);
        }
    }
    let cls = -&ctx.lambda * cls;
    Ok(FamilyPoly {
        n,
        q: ctx.top_coefficient(&cls),
    })
}

/// `q` with `μ(S_d) = E · q(s(d))`.
pub fn family_mu(n: usize) -> Result<FamilyPoly> {
    let ctx = FamilyContext::new(n)?;
    let chern = ch_to_chern(&ChVector::with_rank(&ctx.ring, n as u32, ctx.t.clone()));
    let lx = ctx.lambda_x();
    let cls = (0..=n).fold(Poly::zero(&ctx.ring), |acc, m| acc + lx.pow((n - m) as u32) * &chern[m]);
    let cls = -&ctx.lambda * cls;
    Ok(FamilyPoly {
        n,
        q: ctx.top_coefficient(&cls),
    })
}

#[derive(Clone, Debug)]
pub struct LeadingTermEntry {
    pub partition: Partition,
    /// Degree-`(n+1)` part of `q_ς`.
    pub top_part: Poly,
    /// `(s_1/(n+1)) · p_ς`
    pub expected: Poly,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct LeadingTermReport {
    pub n: usize,
    pub entries: Vec<LeadingTermEntry>,
}

impl LeadingTermReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Compares the top-degree part of every `q_ς` with `(s_1/(n+1)) · p_ς`.
pub fn leading_term_check(n: usize) -> Result<LeadingTermReport> {
    let ring = power_sum_ring(n);
    let scaled_s1 = Poly::var(&ring, 0).scale(&rat(1, n as i64 + 1));
    let entries = partitions(n)?
        .into_iter()
        .map(|sigma| {
            let q = family_partition_invariant(n, &sigma)?.q;
            let top_part = q.homogeneous_part(n as u32 + 1);
            let expected = &scaled_s1 * &p_sigma(n, &sigma)?;
            Ok(LeadingTermEntry {
                pass: top_part == expected,
                partition: sigma,
                top_part,
                expected,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LeadingTermReport { n, entries })
}

/// Exponent vectors of `Q[s_1, …, s_n]` of weighted degree at most `max_degree`.
fn monomials_up_to(n: usize, max_degree: usize) -> Vec<Vec<u32>> {
    fn fill(k: usize, n: usize, remaining: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k > n {
            out.push(current.clone());
            return;
        }
        for e in 0..=remaining / k {
            current[k - 1] = e as u32;
            fill(k + 1, n, remaining - e * k, current, out);
        }
        current[k - 1] = 0;
    }
    let mut out = Vec::new();
    fill(1, n, max_degree, &mut vec![0; n], &mut out);
    out
}

/// Coefficients of the `q_ς` (rows, `partitions(n)` order) against every
/// `s`-monomial of weighted degree `≤ n+1` (columns).
pub fn family_coefficient_matrix(n: usize) -> Result<(Vec<Partition>, Vec<Vec<u32>>, RatMatrix)> {
    let parts = partitions(n)?;
    let monomials = monomials_up_to(n, n + 1);
    let rows = parts
        .iter()
        .map(|sigma| {
            let q = family_partition_invariant(n, sigma)?.q;
            Ok(monomials.iter().map(|m| q.coefficient(m)).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    Ok((parts, monomials, RatMatrix::from_rows(rows)?))
}

#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub n: usize,
    pub partition_count: usize,
    pub transition_determinant: Rational,
    pub family_rank: usize,
}

impl IndependenceReport {
    pub fn holds(&self) -> bool {
        !self.transition_determinant.is_zero() && self.family_rank == self.partition_count
    }
}

/// Determinant of the `p_ς` transition matrix and rank of the `q_ς` coefficient matrix.
pub fn independence(n: usize) -> Result<IndependenceReport> {
    let transition = transition_matrix(n)?;
    let (parts, _, matrix) = family_coefficient_matrix(n)?;
    Ok(IndependenceReport {
        n,
        partition_count: parts.len(),
        transition_determinant: transition.determinant,
        family_rank: matrix.rank(),
    })
}

/// Previously published relation coefficients `μ = Σ C_ς I_ς` for `n ≤ 4`;
/// partitions not listed have coefficient zero.
pub fn reference_relation(n: usize) -> Option<Vec<(Partition, Rational)>> {
    let listed: &[(&str, i64, i64)] = match n {
        1 => &[("1", -1, 1)],
        2 => &[("2,0", 1, 1), ("0,1", -1, 1)],
        3 => &[("3,0,0", -1, 1), ("1,1,0", 1, 1), ("0,0,1", 2, 1)],
        4 => &[
            ("4,0,0,0", 1, 1),
            ("2,1,0,0", -1, 1),
            ("1,0,1,0", -2, 1),
            ("0,2,0,0", 1, 2),
            ("0,0,0,1", -6, 1),
        ],
        _ => return None,
    };
    let parts = partitions(n).ok()?;
    Some(
        parts
            .into_iter()
            .map(|p| {
                let c = listed
                    .iter()
                    .find(|(key, _, _)| p.to_string() == *key)
                    .map_or_else(Rational::zero, |&(_, num, den)| rat(num, den));
                (p, c)
            })
            .collect(),
    )
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub n: usize,
    pub solution: LinearSolution,
    /// `C_ς` in `partitions(n)` order when the solve is unique.
    pub coefficients: Option<Vec<(Partition, Rational)>>,
    /// Published values, when available for this `n`.
    pub reference: Option<Vec<(Partition, Rational)>>,
}

impl ConjectureReport {
    /// `Some(true/false)` when both a unique solution and a reference exist.
    pub fn matches_reference(&self) -> Option<bool> {
        match (&self.coefficients, &self.reference) {
            (Some(c), Some(r)) => Some(c == r),
            _ => None,
        }
    }
}

/// Solves `q_μ = Σ_ς C_ς q_ς` coefficient-by-coefficient over all `s`-monomials
/// of weighted degree `≤ n+1`.
pub fn conjecture_coefficients(n: usize) -> Result<ConjectureReport> {
    let (parts, monomials, by_partition) = family_coefficient_matrix(n)?;
    let mu = family_mu(n)?.q;
    let rhs: Vec<Rational> = monomials.iter().map(|m| mu.coefficient(m)).collect();
    let solution = by_partition.transpose().solve(&rhs)?;
    let coefficients = match &solution {
        LinearSolution::Unique(values) => Some(parts.iter().cloned().zip(values.iter().cloned()).collect()),
        _ => None,
    };
    Ok(ConjectureReport {
        n,
        solution,
        coefficients,
        reference: reference_relation(n),
    })
}
