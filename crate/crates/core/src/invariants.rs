//! Global CR invariants of circle bundles over Kähler–Einstein bases.
//!
//! For a base `(Y, L)` with Einstein constant `(n+1)λ`:
//!
//! ```text
//! I_ς(S) = −λ ∫_Y (λ c_1(L))^{ς_1} Π_{k=2}^{n} [ch_k(B)]^{ς_k}
//! μ(S)   = −λ Σ_{m=0}^{n} ∫_Y (λ c_1(L))^{n−m} c_m(T^{1,0}Y)
//! ```
//!
//! where `[ch_k(B)]` is [`bochner_ch`]. A general invariant polynomial `Φ`
//! can be evaluated directly ([`invariant_of_polynomial`]) or through its
//! decomposition `Φ = ch_1·Φ̃ + Σ C_ς Φ_ς` ([`decompose_invariant`]); the two
//! routes must agree.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::charclass::{
    bochner_ch, ch_to_chern, class_monomials, encode_key, integrate, ChernNumberTable, KEBase, Provenance,
};
use crate::error::{Error, Result};
use crate::exact::{int, inv_factorial, rational_pow, Poly, Rational, Ring};
use crate::symfunc::{partitions, power_sum, Partition};

/// Smooth complete intersection `Y_d ⊂ CP^{2n}` of multi-degree `d` with `L = O(−1)|_{Y_d}`.
///
/// With `τ = c_1(L^{−1})`: `x = −τ`, `t_j = (−s_j(d) + (2n+1)/j!) τ^j`,
/// `∫ τ^n = d_1⋯d_n` and `λ = (2n+1 − s_1(d))/(n+1)`.
pub fn complete_intersection_base(n: usize, d: &[u64]) -> Result<KEBase> {
    if n == 0 {
        return Err(Error::NonPositiveDimension(0));
    }
    if d.len() != n {
        return Err(Error::DegreeTupleLength {
            got: d.len(),
            expected: n,
        });
    }
    if d.contains(&0) {
        return Err(Error::NonPositiveDegree);
    }
    let c = int(2 * n as i64 + 1);
    let lambda = (&c - power_sum(d, 1)) / int(n as i64 + 1);
    let t_coeffs: Vec<Rational> = (1..=n).map(|j| &c * inv_factorial(j) - power_sum(d, j)).collect();
    let volume = Rational::from_integer(d.iter().map(|&di| num_bigint::BigInt::from(di)).product());

    let mut table = ChernNumberTable::new(n, Default::default());
    for exps in class_monomials(n, n) {
        let sign = if exps[0] % 2 == 0 { int(1) } else { int(-1) };
        let value = exps[1..]
            .iter()
            .zip(&t_coeffs)
            .fold(sign * &volume, |acc, (&b, coeff)| acc * rational_pow(coeff, b));
        table.insert(exps, value);
    }
    Ok(KEBase::from_parts(n, lambda, table, Provenance::CompleteIntersection(d.to_vec())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingEntry(String),
    /// Key of the wrong degree (or otherwise unusable) present in the table.
    UnexpectedEntry(String),
    DimensionMismatch { base: usize, table: usize },
    /// `∫ t_1·m ≠ −(n+1)λ ∫ x·m` for the degree-`(n−1)` monomial `m`.
    Einstein {
        monomial: String,
        lhs: Rational,
        rhs: Rational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingEntry(key) => write!(f, "missing entry `{key}`"),
            Violation::UnexpectedEntry(key) => write!(f, "entry `{key}` is not a top-degree monomial"),
            Violation::DimensionMismatch { base, table } => {
                write!(f, "base has n = {base} but table has n = {table}")
            }
            Violation::Einstein { monomial, lhs, rhs } => write!(
                f,
                "Einstein condition fails at m = {monomial}: int(t1*m) = {lhs}, -(n+1)*lambda*int(x*m) = {rhs}"
            ),
        }
    }
}

fn monomial_label(exps: &[u32]) -> String {
    let key = encode_key(exps);
    if key.is_empty() {
        "1".into()
    } else {
        key
    }
}

/// Checks table completeness and `∫ t_1·m = −(n+1)λ ∫ x·m` for every degree-`(n−1)` monomial `m`.
pub fn validate_base(base: &KEBase) -> Vec<Violation> {
    let n = base.n;
    let mut out = Vec::new();
    if base.table.n() != n {
        out.push(Violation::DimensionMismatch {
            base: n,
            table: base.table.n(),
        });
        return out;
    }
    let top = class_monomials(n, n);
    for exps in &top {
        if base.table.get(exps).is_none() {
            out.push(Violation::MissingEntry(encode_key(exps)));
        }
    }
    for (exps, _) in base.table.entries() {
        if exps.len() != n + 1 || !top.contains(exps) {
            out.push(Violation::UnexpectedEntry(encode_key(exps)));
        }
    }
    let einstein = -(int(n as i64 + 1) * &base.lambda);
    for m in class_monomials(n, n - 1) {
        let mut with_t1 = m.clone();
        with_t1[1] += 1;
        let mut with_x = m.clone();
        with_x[0] += 1;
        if let (Some(lhs), Some(x_value)) = (base.table.get(&with_t1), base.table.get(&with_x)) {
            let rhs = &einstein * x_value;
            if *lhs != rhs {
                out.push(Violation::Einstein {
                    monomial: monomial_label(&m),
                    lhs: lhs.clone(),
                    rhs,
                });
            }
        }
    }
    out
}

/// `Err(InvalidBase)` when [`validate_base`] reports anything.
pub fn ensure_valid(base: &KEBase) -> Result<()> {
    let violations = validate_base(base);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidBase(violations))
    }
}

fn check_partition(base: &KEBase, sigma: &Partition) -> Result<()> {
    if sigma.n() != base.n {
        return Err(Error::DimensionMismatch(format!(
            "partition {sigma} is not a partition of n = {}",
            base.n
        )));
    }
    Ok(())
}

/// `I_ς(S) = −λ ∫_Y (λx)^{ς_1} Π_{k≥2} [ch_k(B)]^{ς_k}`
pub fn partition_invariant(base: &KEBase, sigma: &Partition) -> Result<Rational> {
    check_partition(base, sigma)?;
    let mut cls = base.x().scale(&base.lambda).pow(sigma.multiplicity(1));
    for k in 2..=base.n {
        let e = sigma.multiplicity(k);
        if e > 0 {
            cls = cls * bochner_ch(base, k)?.pow(e);
        }
    }
    Ok(-&base.lambda * integrate(base, &cls)?)
}

/// Burns–Epstein invariant `μ(S) = −λ Σ_{m=0}^{n} ∫_Y (λx)^{n−m} c_m(T^{1,0}Y)`.
pub fn burns_epstein(base: &KEBase) -> Result<Rational> {
    let chern = ch_to_chern(&base.tangent_ch());
    let lx = base.x().scale(&base.lambda);
    let cls = (0..=base.n).fold(Poly::zero(base.ring()), |acc, m| {
        acc + lx.pow((base.n - m) as u32) * &chern[m]
    });
    Ok(-&base.lambda * integrate(base, &cls)?)
}

/// `Q[ch_1, …, ch_{n+1}]`, `weight(ch_k) = k`: invariant polynomials of `gl(n+1)`.
pub fn invariant_ring(n: usize) -> Arc<Ring> {
    Ring::new((1..=n + 1).map(|k| (format!("ch{k}"), k as u32))).expect("ch names are distinct")
}

/// A `GL(n+1)`-invariant polynomial of degree at most `n`, in Chern-character coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvPoly {
    n: usize,
    poly: Poly,
}

impl InvPoly {
    pub fn new(n: usize, poly: Poly) -> Result<Self> {
        if n == 0 {
            return Err(Error::NonPositiveDimension(0));
        }
        if **poly.ring() != *invariant_ring(n) {
            return Err(Error::DimensionMismatch(format!(
                "invariant polynomial must be over ch1..ch{}",
                n + 1
            )));
        }
        if let Some(deg) = poly.degree().filter(|&d| d as usize > n) {
            return Err(Error::DegreeTooHigh { got: deg, n });
        }
        Ok(InvPoly { n, poly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }
}

impl fmt::Display for InvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// `Φ_ς = Π_{k=2}^{n} ch_k^{ς_k}`
pub fn phi_sigma(sigma: &Partition) -> Poly {
    let n = sigma.n();
    let ring = invariant_ring(n);
    let mut exps = vec![0u32; n + 1];
    for k in 2..=n {
        exps[k - 1] = sigma.multiplicity(k);
    }
    Poly::from_terms(&ring, [(exps, int(1))])
}

/// `Φ = ch_1·Φ̃ + Σ_ς C_ς Φ_ς`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `C_ς` for every partition of `n`, in `partitions(n)` order.
    pub coefficients: Vec<(Partition, Rational)>,
    /// `Φ̃`
    pub remainder: InvPoly,
}

impl Decomposition {
    pub fn coefficient(&self, sigma: &Partition) -> Rational {
        self.coefficients
            .iter()
            .find(|(p, _)| p == sigma)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_ch1_multiple(&self) -> bool {
        self.coefficients.iter().all(|(_, c)| c.is_zero())
    }

    /// `ch_1·Φ̃ + Σ C_ς Φ_ς`
    pub fn reconstruct(&self) -> Poly {
        let ring = self.remainder.poly().ring();
        let ch1 = Poly::var(ring, 0);
        self.coefficients
            .iter()
            .fold(&ch1 * self.remainder.poly(), |acc, (sigma, c)| acc + phi_sigma(sigma).scale(c))
    }
}

/// Splits off every monomial containing `ch_1` into `Φ̃`; a `ch_1`-free monomial
/// `Π_{k≥2} ch_k^{e_k}` of weighted degree `m` is `Φ_ς` for `ς = (n−m, e_2, …, e_n)`.
pub fn decompose_invariant(phi: &InvPoly) -> Result<Decomposition> {
    let n = phi.n();
    let ring = phi.poly().ring();
    let mut coefficients: Vec<(Partition, Rational)> =
        partitions(n)?.into_iter().map(|p| (p, Rational::zero())).collect();
    let mut remainder_terms = Vec::new();
    for (m, c) in phi.poly().terms() {
        let exps = m.exponents();
        if exps[0] > 0 {
            let mut reduced = exps.to_vec();
            reduced[0] -= 1;
            remainder_terms.push((reduced, c.clone()));
            continue;
        }
        // ch_{n+1} has weight n+1 and cannot occur under the degree bound.
        debug_assert_eq!(exps[n], 0);
        let mut parts = vec![0u32; n];
        parts[0] = n as u32 - m.degree();
        parts[1..n].copy_from_slice(&exps[1..n]);
        let sigma = Partition::new(parts)?;
        let slot = coefficients
            .iter_mut()
            .find(|(p, _)| *p == sigma)
            .expect("every partition of n is enumerated");
        slot.1 += c;
    }
    Ok(Decomposition {
        coefficients,
        remainder: InvPoly::new(n, Poly::from_terms(ring, remainder_terms))?,
    })
}

/// `I_Φ` evaluated directly: each degree-`m` part of `Φ` with `ch_k ↦ [ch_k(B)]`,
/// times `(λx)^{n−m}`, integrated and scaled by `−λ`.
pub fn invariant_of_polynomial(base: &KEBase, phi: &InvPoly) -> Result<Rational> {
    let n = base.n;
    if phi.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "polynomial is for n = {}, base has n = {n}",
            phi.n()
        )));
    }
    let ring = base.ring();
    let mut images = (1..=n).map(|k| bochner_ch(base, k)).collect::<Result<Vec<_>>>()?;
    images.push(Poly::zero(ring));
    let lx = base.x().scale(&base.lambda);
    let mut cls = Poly::zero(ring);
    for m in 0..=n {
        let part = phi.poly().homogeneous_part(m as u32);
        if part.is_zero() {
            continue;
        }
        cls = cls + part.substitute(ring, &images) * lx.pow((n - m) as u32);
    }
    Ok(-&base.lambda * integrate(base, &cls)?)
}

/// `Σ_ς C^Φ_ς I_ς`, the decomposed route to `I_Φ`.
pub fn invariant_via_decomposition(base: &KEBase, phi: &InvPoly) -> Result<Rational> {
    let dec = decompose_invariant(phi)?;
    dec.coefficients
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .try_fold(Rational::zero(), |acc, (sigma, c)| Ok(acc + c * partition_invariant(base, sigma)?))
}
