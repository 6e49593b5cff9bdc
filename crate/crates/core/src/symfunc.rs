//! Partitions of `n` and symmetric polynomials written in the power sums
//! `s_k(d) = (d_1^k + … + d_n^k) / k!`.
//!
//! Everything here lives in the power-sum ring `Q[s_1, …, s_n]` with
//! `weight(s_k) = k`; the underlying degrees `d_i` are never introduced as
//! variables.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{inv_factorial, int, rational_pow, Poly, RatMatrix, Rational, Ring};

/// An n-tuple `(ς_1, …, ς_n)` with `Σ k·ς_k = n`: `ς_k` counts the parts equal to `k`.
///
/// Ordered descending-lexicographically, so `partitions(n)` is sorted
/// ascending under this `Ord`, starting at `(n, 0, …, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let n = parts.len();
        if n == 0 {
            return Err(Error::NonPositiveDimension(0));
        }
        let weight: usize = parts.iter().enumerate().map(|(i, &m)| (i + 1) * m as usize).sum();
        if weight != n {
            return Err(Error::PartitionWeight {
                parts,
                weight,
                expected: n,
            });
        }
        Ok(Partition { parts })
    }

    /// `(n, 0, …, 0)`
    pub fn trivial(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NonPositiveDimension(0));
        }
        let mut parts = vec![0; n];
        parts[0] = n as u32;
        Ok(Partition { parts })
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Multiplicity `ς_k` of the part `k` (1-based).
    pub fn multiplicity(&self, k: usize) -> u32 {
        self.parts[k - 1]
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::MalformedPartition(s.to_string()))?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, descending lexicographically on `(ς_1, …, ς_n)`.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::NonPositiveDimension(0));
    }
    fn fill(k: usize, remaining: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        let n = current.len();
        if k > n {
            if remaining == 0 {
                out.push(Partition { parts: current.clone() });
            }
            return;
        }
        for m in (0..=remaining / k).rev() {
            current[k - 1] = m as u32;
            fill(k + 1, remaining - m * k, current, out);
        }
        current[k - 1] = 0;
    }
    let mut out = Vec::new();
    fill(1, n, &mut vec![0; n], &mut out);
    Ok(out)
}

/// `Q[s_1, …, s_n]` with `weight(s_k) = k`.
pub fn power_sum_ring(n: usize) -> Arc<Ring> {
    Ring::new((1..=n).map(|k| (format!("s{k}"), k as u32))).expect("power-sum names are distinct")
}

/// `s_k(d) = (d_1^k + … + d_n^k) / k!`
pub fn power_sum(d: &[u64], k: usize) -> Rational {
    let sum: Rational = d.iter().map(|&di| rational_pow(&int(di as i64), k as u32)).sum();
    sum * inv_factorial(k)
}

/// Values `(s_1(d), …, s_n(d))` for `n = d.len()`.
pub fn power_sums(d: &[u64]) -> Vec<Rational> {
    (1..=d.len()).map(|k| power_sum(d, k)).collect()
}

/// `ν_k = −Σ_{j=1}^{k} s_1^{k−j} s_j / ((n+1)^{k−j} (k−j)!) + s_1^k / ((n+1)^{k−1} k!)`,
/// homogeneous of degree `k`.
pub fn nu(n: usize, k: usize) -> Result<Poly> {
    if k < 2 || k > n {
        return Err(Error::IndexOutOfRange { k, lo: 2, hi: n });
    }
    let ring = power_sum_ring(n);
    let s1 = Poly::var(&ring, 0);
    let m = int(n as i64 + 1);
    let mut out = Poly::zero(&ring);
    for j in 1..=k {
        let e = (k - j) as u32;
        let coeff = inv_factorial(k - j) / rational_pow(&m, e);
        out = out - (s1.pow(e) * Poly::var(&ring, j - 1)).scale(&coeff);
    }
    let coeff = inv_factorial(k) / rational_pow(&m, (k - 1) as u32);
    Ok(out + s1.pow(k as u32).scale(&coeff))
}

fn check_weight(n: usize, sigma: &Partition) -> Result<()> {
    if sigma.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "partition {sigma} has length {}, expected {n}",
            sigma.n()
        )));
    }
    Ok(())
}

/// `p_ς = (s_1/(n+1))^{ς_1} · Π_{k=2}^{n} ν_k^{ς_k}`, homogeneous of degree `n`.
pub fn p_sigma(n: usize, sigma: &Partition) -> Result<Poly> {
    check_weight(n, sigma)?;
    let ring = power_sum_ring(n);
    let mut out = Poly::var(&ring, 0)
        .scale(&Rational::new(1.into(), (n as i64 + 1).into()))
        .pow(sigma.multiplicity(1));
    for k in 2..=n {
        let e = sigma.multiplicity(k);
        if e > 0 {
            out = out * nu(n, k)?.pow(e);
        }
    }
    Ok(out)
}

/// Matrix expressing each `p_ς` in the monomial basis `s^{ς'} = s_1^{ς'_1}⋯s_n^{ς'_n}`;
/// rows and columns both follow `partitions(n)`.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    pub partitions: Vec<Partition>,
    pub matrix: RatMatrix,
    pub determinant: Rational,
}

impl TransitionMatrix {
    pub fn is_invertible(&self) -> bool {
        !self.determinant.is_zero()
    }
}

pub fn transition_matrix(n: usize) -> Result<TransitionMatrix> {
    let parts = partitions(n)?;
    let rows = parts
        .iter()
        .map(|sigma| {
            let p = p_sigma(n, sigma)?;
            Ok(parts.iter().map(|col| p.coefficient(col.parts())).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    let matrix = RatMatrix::from_rows(rows)?;
    let determinant = matrix.determinant()?;
    Ok(TransitionMatrix {
        partitions: parts,
        matrix,
        determinant,
    })
}
