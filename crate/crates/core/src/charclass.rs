//! Chern characters, Chern classes, line-bundle twists and the characteristic
//! numbers of a Kähler–Einstein base.
//!
//! Classes on an `n`-dimensional base are polynomials in the generators
//! `x = c_1(L)` and `t_j = ch_j(T^{1,0}Y)`, `j = 1..n`, with cohomological
//! weights `1` and `j`. A [`ChernNumberTable`] assigns `∫_Y` to every
//! monomial of top degree `n`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, inv_factorial, parse_rational, Monomial, Poly, Rational, Ring};

/// Chern character components `(ch_0, ch_1, …, ch_{n_max})` of a bundle.
///
/// `ch_0` is the rank. Entries may be constants or polynomials in a shared ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChVector {
    entries: Vec<Poly>,
}

impl ChVector {
    pub fn new(entries: Vec<Poly>) -> Self {
        assert!(!entries.is_empty(), "ChVector needs at least ch_0");
        ChVector { entries }
    }

    /// `ch_0 = rank`, then `higher[j-1] = ch_j`.
    pub fn with_rank(ring: &Arc<Ring>, rank: u32, higher: Vec<Poly>) -> Self {
        let mut entries = Vec::with_capacity(higher.len() + 1);
        entries.push(Poly::constant(ring, int(rank as i64)));
        entries.extend(higher);
        ChVector { entries }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.entries[0].ring()
    }

    pub fn n_max(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, k: usize) -> &Poly {
        &self.entries[k]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn rank(&self) -> Option<Rational> {
        self.entries[0].as_constant()
    }
}

/// Chern classes `c_0..c_{n_max}` from Newton's identities with `p_k = k!·ch_k`:
/// `k·c_k = Σ_{i=1}^{k} (−1)^{i−1} c_{k−i} p_i`.
pub fn ch_to_chern(ch: &ChVector) -> Vec<Poly> {
    let ring = ch.ring();
    let power_sums: Vec<Poly> = (0..=ch.n_max())
        .map(|k| ch.get(k).scale(&Rational::from_integer(crate::exact::factorial(k))))
        .collect();
    let mut c = vec![Poly::one(ring)];
    for k in 1..=ch.n_max() {
        let mut acc = Poly::zero(ring);
        for i in 1..=k {
            let term = &c[k - i] * &power_sums[i];
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        c.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
    }
    c
}

/// Inverse of [`ch_to_chern`]: `p_k = (−1)^{k−1} k c_k + Σ_{i=1}^{k−1} (−1)^{k−1+i} c_{k−i} p_i`.
///
/// The rank is not recoverable from Chern classes and must be supplied.
pub fn chern_to_ch(c: &[Poly], rank: u32) -> Result<ChVector> {
    let Some(c0) = c.first() else {
        return Err(Error::DimensionMismatch("empty Chern class list".into()));
    };
    if c0.as_constant() != Some(Rational::one()) {
        return Err(Error::DimensionMismatch("c_0 must equal 1".into()));
    }
    let ring = c0.ring();
    let mut p: Vec<Poly> = vec![Poly::constant(ring, int(rank as i64))];
    for k in 1..c.len() {
        let sign = |e: usize| if e.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        let mut acc = c[k].scale(&(sign(k - 1) * int(k as i64)));
        for i in 1..k {
            acc = acc + (&c[k - i] * &p[i]).scale(&sign(k - 1 + i));
        }
        p.push(acc);
    }
    let entries = p
        .into_iter()
        .enumerate()
        .map(|(k, pk)| if k == 0 { pk } else { pk.scale(&inv_factorial(k)) })
        .collect();
    Ok(ChVector::new(entries))
}

/// Chern character of `V ⊗ ℒ` where `c_1(ℒ) = t`:
/// `ch'_k = Σ_{j=0}^{k} t^{k−j}/(k−j)! · ch_j`.
pub fn twist_ch(ch: &ChVector, t: &Poly) -> ChVector {
    let ring = ch.ring();
    let mut t_powers = vec![Poly::one(ring)];
    for i in 1..=ch.n_max() {
        let next = &t_powers[i - 1] * t;
        t_powers.push(next);
    }
    let entries = (0..=ch.n_max())
        .map(|k| {
            (0..=k).fold(Poly::zero(ring), |acc, j| {
                acc + (&t_powers[k - j] * ch.get(j)).scale(&inv_factorial(k - j))
            })
        })
        .collect();
    ChVector::new(entries)
}

/// `Q[x, t_1, …, t_n]` with `weight(x) = 1`, `weight(t_j) = j`.
pub fn class_ring(n: usize) -> Arc<Ring> {
    let vars = std::iter::once(("x".to_string(), 1)).chain((1..=n).map(|j| (format!("t{j}"), j as u32)));
    Ring::new(vars).expect("class generator names are distinct")
}

/// All exponent vectors over `(x, t_1, …, t_n)` of weighted degree `degree`,
/// in ascending graded-lex order.
pub fn class_monomials(n: usize, degree: usize) -> Vec<Vec<u32>> {
    fn fill(var: usize, n: usize, remaining: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if var > n {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let weight = var.max(1);
        for e in 0..=remaining / weight {
            current[var] = e as u32;
            fill(var + 1, n, remaining - e * weight, current, out);
        }
        current[var] = 0;
    }
    let mut out = Vec::new();
    fill(0, n, degree, &mut vec![0; n + 1], &mut out);
    out
}

/// `"x^a*t1^b1*…"` with explicit exponents, zero-exponent factors omitted.
pub fn encode_key(exps: &[u32]) -> String {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, e)| if i == 0 { format!("x^{e}") } else { format!("t{i}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Strict inverse of [`encode_key`] for a base of dimension `n`.
pub fn decode_key(key: &str, n: usize) -> Result<Vec<u32>> {
    let malformed = || Error::MalformedKey(key.to_string());
    let mut exps = vec![0u32; n + 1];
    let mut last: Option<usize> = None;
    for factor in key.split('*') {
        let (name, exp) = factor.split_once('^').ok_or_else(malformed)?;
        let index = match name {
            "x" => 0,
            _ => name
                .strip_prefix('t')
                .filter(|digits| !digits.starts_with('0'))
                .and_then(|digits| digits.parse::<usize>().ok())
                .filter(|&j| (1..=n).contains(&j))
                .ok_or_else(malformed)?,
        };
        if last.is_some_and(|l| l >= index) {
            return Err(malformed());
        }
        if exp.starts_with('+') || exp.starts_with('0') {
            return Err(malformed());
        }
        exps[index] = exp.parse::<u32>().map_err(|_| malformed())?;
        last = Some(index);
    }
    Ok(exps)
}

/// `∫_Y` of every top-degree monomial in `x, t_1, …, t_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernNumberTable {
    n: usize,
    entries: BTreeMap<Vec<u32>, Rational>,
}

impl ChernNumberTable {
    pub fn new(n: usize, entries: BTreeMap<Vec<u32>, Rational>) -> Self {
        ChernNumberTable { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, exps: &[u32]) -> Option<&Rational> {
        self.entries.get(exps)
    }

    pub fn insert(&mut self, exps: Vec<u32>, value: Rational) {
        self.entries.insert(exps, value);
    }

    pub fn remove(&mut self, exps: &[u32]) -> Option<Rational> {
        self.entries.remove(exps)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.entries.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Smooth complete intersection of multi-degree `d` in `CP^{2n}`.
    CompleteIntersection(Vec<u64>),
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseWarning {
    /// `λ = 0`: every invariant evaluates to zero.
    ZeroLambda,
    /// `s_1(d) ≤ 2n+1`: the existence argument for the Kähler–Einstein metric
    /// does not apply; the numbers are formal.
    FormalRegime { s1: Rational, bound: usize },
}

impl std::fmt::Display for BaseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BaseWarning::ZeroLambda => f.write_str("lambda = 0: all invariants vanish"),
            BaseWarning::FormalRegime { s1, bound } => write!(
                f,
                "s1(d) = {s1} <= {bound}: Kahler-Einstein existence not guaranteed, values are formal"
            ),
        }
    }
}

/// Characteristic data of a Kähler–Einstein base `(Y, L)` with Einstein constant `(n+1)λ`.
#[derive(Clone, Debug)]
pub struct KEBase {
    pub n: usize,
    pub lambda: Rational,
    pub table: ChernNumberTable,
    pub provenance: Provenance,
    ring: Arc<Ring>,
}

impl KEBase {
    /// Assembles a base without validating it; see [`crate::invariants::validate_base`].
    pub fn from_parts(n: usize, lambda: Rational, table: ChernNumberTable, provenance: Provenance) -> Self {
        KEBase {
            n,
            lambda,
            table,
            provenance,
            ring: class_ring(n),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// `c_1(L)`
    pub fn x(&self) -> Poly {
        Poly::var(&self.ring, 0)
    }

    /// `ch_j(T^{1,0}Y)` for `j ≥ 1`.
    pub fn t(&self, j: usize) -> Poly {
        Poly::var(&self.ring, j)
    }

    /// `ch(T^{1,0}Y)`, rank `n`.
    pub fn tangent_ch(&self) -> ChVector {
        ChVector::with_rank(&self.ring, self.n as u32, (1..=self.n).map(|j| self.t(j)).collect())
    }

    /// `ch(T^{1,0}Y ⊕ C)`, rank `n+1`.
    pub fn stabilized_tangent_ch(&self) -> ChVector {
        ChVector::with_rank(&self.ring, self.n as u32 + 1, (1..=self.n).map(|j| self.t(j)).collect())
    }

    pub fn warnings(&self) -> Vec<BaseWarning> {
        let mut out = Vec::new();
        if let Provenance::CompleteIntersection(d) = &self.provenance {
            let s1 = crate::symfunc::power_sum(d, 1);
            let bound = 2 * self.n + 1;
            if s1 <= int(bound as i64) {
                out.push(BaseWarning::FormalRegime { s1, bound });
            }
        }
        if self.lambda.is_zero() {
            out.push(BaseWarning::ZeroLambda);
        }
        out
    }

    /// `{"n": …, "lambda": "p/q", "numbers": {key: "p/q", …}}` with keys in ascending graded-lex order.
    pub fn to_json(&self) -> Value {
        let mut numbers = Map::new();
        let mut keys: Vec<&Vec<u32>> = self.table.entries.keys().collect();
        keys.sort_by_key(|exps| Monomial::new(&self.ring, exps.to_vec()));
        for exps in keys {
            numbers.insert(encode_key(exps), Value::String(format_rational(&self.table.entries[exps])));
        }
        json!({
            "n": self.n,
            "lambda": format_rational(&self.lambda),
            "numbers": numbers,
        })
    }

    /// Parses the table format; the result is [`Provenance::Custom`] and not yet validated.
    pub fn from_json(text: &str) -> Result<KEBase> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct BaseFile {
            n: usize,
            lambda: String,
            numbers: BTreeMap<String, String>,
        }
        let file: BaseFile = serde_json::from_str(text)?;
        if file.n == 0 {
            return Err(Error::NonPositiveDimension(0));
        }
        let lambda = parse_rational(&file.lambda)?;
        let mut entries = BTreeMap::new();
        for (key, value) in &file.numbers {
            entries.insert(decode_key(key, file.n)?, parse_rational(value)?);
        }
        Ok(KEBase::from_parts(
            file.n,
            lambda,
            ChernNumberTable::new(file.n, entries),
            Provenance::Custom,
        ))
    }
}

/// The class `[ch_k((√−1/2π) B)] = Σ_{j=0}^{k} (λx)^{k−j}/(k−j)! · ch_j(T^{1,0}Y ⊕ C)`
/// of the Bochner curvature, i.e. `ch_k((T^{1,0}Y ⊕ C) ⊗ L^λ)`.
pub fn bochner_ch(base: &KEBase, k: usize) -> Result<Poly> {
    if k > base.n {
        return Err(Error::IndexOutOfRange { k, lo: 0, hi: base.n });
    }
    let twist = base.x().scale(&base.lambda);
    Ok(twist_ch(&base.stabilized_tangent_ch(), &twist).get(k).clone())
}

/// `∫_Y` of a class of cohomological degree `n`, by linear extension of the table.
pub fn integrate(base: &KEBase, cls: &Poly) -> Result<Rational> {
    let mut total = Rational::zero();
    for (m, c) in cls.terms() {
        if m.degree() as usize != base.n {
            return Err(Error::ClassDegree {
                got: m.degree(),
                expected: base.n as u32,
            });
        }
        let value = base
            .table
            .get(m.exponents())
            .ok_or_else(|| Error::MissingEntry(encode_key(m.exponents())))?;
        total += c * value;
    }
    Ok(total)
}
