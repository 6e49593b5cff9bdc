//! Acceptance suite. Every check is exact rational equality; each criterion prints
//! one `[PASS]` or `[FAIL]` line and the process exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::sync::Arc;

use chern_cr::charclass::{
    bochner_ch, ch_to_chern, chern_to_ch, class_monomials, integrate, twist_ch, ChVector, ChernNumberTable, KEBase,
    Provenance,
};
use chern_cr::cli::parse::parse_invariant_poly;
use chern_cr::exact::{int, rat, Poly, Rational, Ring};
use chern_cr::family::{family_mu, family_partition_invariant, independence, leading_term_check};
use chern_cr::invariants::{
    burns_epstein, complete_intersection_base, decompose_invariant, invariant_of_polynomial, invariant_ring,
    invariant_via_decomposition, partition_invariant, validate_base, InvPoly,
};
use chern_cr::symfunc::{partitions, transition_matrix, Partition};
use num_integer::binomial;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("conjecture coefficients n = 1..4", criterion_1),
        ("leading terms of q_sigma, n = 1..5", criterion_2),
        ("independence witness, n = 1..6", criterion_3),
        ("odd sphere family, n = 1..6", criterion_4),
        ("direct and decomposed routes agree", criterion_5),
        ("family polynomials specialize to pointwise values", criterion_6),
        ("characteristic class kernels", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn p(text: &str) -> Partition {
    text.parse().unwrap()
}

fn q(text: &str) -> Rational {
    text.parse().unwrap()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn expected_relation(n: usize) -> Vec<(&'static str, &'static str)> {
    match n {
        1 => vec![("1", "-1")],
        2 => vec![("2,0", "1"), ("0,1", "-1")],
        3 => vec![("3,0,0", "-1"), ("1,1,0", "1"), ("0,0,1", "2")],
        4 => vec![("4,0,0,0", "1"), ("2,1,0,0", "-1"), ("1,0,1,0", "-2"), ("0,2,0,0", "1/2"), ("0,0,0,1", "-6")],
        _ => unreachable!(),
    }
}

fn criterion_1() -> Check {
    for n in 1..=4 {
        let out = Command::new(env!("CARGO_BIN_EXE_chern-cr"))
            .args(["conjecture", "--n", &n.to_string()])
            .output()
            .map_err(err)?;
        ensure!(out.status.success(), "n = {n}: exit status {}", out.status);
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
        ensure!(json["status"] == "unique", "n = {n}: status {}", json["status"]);
        let got = json["coefficients"].as_object().ok_or(format!("n = {n}: no coefficients"))?;
        let expected = expected_relation(n);
        ensure!(got.len() == expected.len(), "n = {n}: {} coefficients", got.len());
        for (key, value) in expected {
            let actual = got.get(key).and_then(|v| v.as_str()).unwrap_or("<missing>");
            ensure!(actual == value, "n = {n}: C_({key}) = {actual}, expected {value}");
        }
    }
    Ok("4 relations reproduced".into())
}

fn criterion_2() -> Check {
    let mut count = 0;
    for n in 1..=5 {
        let report = leading_term_check(n).map_err(err)?;
        for entry in &report.entries {
            ensure!(
                entry.pass && entry.top_part == entry.expected,
                "n = {n}, sigma = ({}): top part {} vs {}",
                entry.partition,
                entry.top_part,
                entry.expected
            );
            count += 1;
        }
        ensure!(report.entries.len() == partitions(n).map_err(err)?.len(), "n = {n}: missing partitions");
    }
    Ok(format!("{count} leading terms"))
}

fn criterion_3() -> Check {
    let counts = [1, 2, 3, 5, 7, 11];
    for n in 1..=6 {
        let t = transition_matrix(n).map_err(err)?;
        ensure!(!t.determinant.is_zero(), "n = {n}: transition determinant vanishes");
        ensure!(t.determinant == t.matrix.determinant().map_err(err)?, "n = {n}: determinant mismatch");
        let report = independence(n).map_err(err)?;
        ensure!(report.partition_count == counts[n - 1], "n = {n}: |Part| = {}", report.partition_count);
        ensure!(
            report.family_rank == report.partition_count,
            "n = {n}: rank {} < {}",
            report.family_rank,
            report.partition_count
        );
    }
    Ok("full rank up to |Part(6)| = 11".into())
}

fn criterion_4() -> Check {
    for n in 1..=6 {
        let base = complete_intersection_base(n, &vec![1; n]).map_err(err)?;
        // mu = -sum_m (-1)^{n-m} C(n+1, m) with lambda = 1, int x^n = (-1)^n
        let alternating: i64 = (0..=n as i64).map(|m| (-1i64).pow((n as i64 - m) as u32) * binomial(n as i64 + 1, m)).sum();
        ensure!(alternating == 1, "binomial oracle gave {alternating}");
        let mu = burns_epstein(&base).map_err(err)?;
        ensure!(mu == int(-alternating), "n = {n}: mu = {mu}");

        // Fubini-Study is Bochner-flat: every Bochner class pairs to zero
        for k in 2..=n {
            let b = bochner_ch(&base, k).map_err(err)?;
            for m in class_monomials(n, n - k) {
                let pairing = integrate(&base, &(&b * &Poly::from_terms(base.ring(), [(m.clone(), int(1))]))).map_err(err)?;
                ensure!(pairing.is_zero(), "n = {n}: ch_{k}(B) pairs to {pairing}");
            }
        }
        let sign = if n % 2 == 1 { 1 } else { -1 };
        for sigma in partitions(n).map_err(err)? {
            let value = partition_invariant(&base, &sigma).map_err(err)?;
            let expected = if sigma == Partition::trivial(n).map_err(err)? { int(sign) } else { int(0) };
            ensure!(value == expected, "n = {n}, sigma = ({sigma}): {value} vs {expected}");
        }
    }

    // mu = sum C_sigma I_sigma, at the spheres and on a spread of other complete intersections
    let mut points = 0;
    for n in 1..=4 {
        let relation: Vec<(Partition, Rational)> =
            expected_relation(n).into_iter().map(|(s, c)| (p(s), q(c))).collect();
        let mut degrees: Vec<Vec<u64>> = vec![vec![1; n], vec![2; n], vec![1; n]];
        degrees[2][0] = 3;
        degrees.push((1..=n as u64).collect());
        degrees.push((0..n as u64).map(|i| 7 - i).collect());
        for d in degrees {
            let base = complete_intersection_base(n, &d).map_err(err)?;
            let mut sum = Rational::zero();
            for (sigma, c) in &relation {
                sum += c * partition_invariant(&base, sigma).map_err(err)?;
            }
            let mu = burns_epstein(&base).map_err(err)?;
            ensure!(sum == mu, "n = {n}, d = {d:?}: relation gives {sum}, mu = {mu}");
            points += 1;
        }
    }
    Ok(format!("spheres n = 1..6, relations at {points} bases"))
}

/// Monomials of `Q[ch_1, …, ch_n]` (exponent vectors over `n + 1` variables) of weight ≤ `max`.
fn inv_monomials(n: usize, max: usize) -> Vec<Vec<u32>> {
    fn go(k: usize, n: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k > n {
            let mut exps = cur.clone();
            exps.push(0);
            out.push(exps);
            return;
        }
        for e in 0..=(left / k) {
            cur.push(e as u32);
            go(k + 1, n, left - e * k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, max, &mut Vec::new(), &mut out);
    out
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn random_inv_poly(rng: &mut ChaCha8Rng, ring: &Arc<Ring>, n: usize, max: usize) -> Poly {
    let mut terms = Vec::new();
    for m in inv_monomials(n, max) {
        if rng.gen_bool(0.6) {
            terms.push((m, random_rational(rng)));
        }
    }
    Poly::from_terms(ring, terms)
}

/// A random expression in Chern classes, routed through the parser.
fn random_chern_text(rng: &mut ChaCha8Rng, n: usize) -> String {
    let mut terms = vec![format!("{}/{}", rng.gen_range(-5..=5), rng.gen_range(1..=3))];
    for _ in 0..rng.gen_range(1..=4) {
        let mut left = rng.gen_range(1..=n);
        let mut factors = Vec::new();
        while left > 0 {
            let k = rng.gen_range(1..=left);
            factors.push(format!("c{k}"));
            left -= k;
        }
        terms.push(format!("{}*{}", rng.gen_range(-6..=6), factors.join("*")));
    }
    terms.join(" + ")
}

fn random_degrees(rng: &mut ChaCha8Rng, n: usize, max: u64) -> Vec<u64> {
    (0..n).map(|_| rng.gen_range(1..=max)).collect()
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b_3c4d);
    let bases = 120;
    let mut checks = 0;
    for trial in 0..bases {
        let n = 1 + trial % 4;
        let d = random_degrees(&mut rng, n, 6);
        let base = complete_intersection_base(n, &d).map_err(err)?;
        let ring = invariant_ring(n);
        let ch1 = Poly::var(&ring, 0);

        let mut candidates = vec![
            random_inv_poly(&mut rng, &ring, n, n),
            parse_invariant_poly(&random_chern_text(&mut rng, n), n).map_err(err)?.poly().clone(),
        ];
        candidates.push(&candidates[0] + &candidates[1]);
        for phi in candidates {
            let phi = InvPoly::new(n, phi).map_err(err)?;
            let direct = invariant_of_polynomial(&base, &phi).map_err(err)?;
            let decomposed = invariant_via_decomposition(&base, &phi).map_err(err)?;
            ensure!(direct == decomposed, "d = {d:?}, phi = {phi}: {direct} vs {decomposed}");

            let decomposition = decompose_invariant(&phi).map_err(err)?;
            let mut sum = Rational::zero();
            for (sigma, c) in &decomposition.coefficients {
                sum += c * partition_invariant(&base, sigma).map_err(err)?;
            }
            ensure!(direct == sum, "d = {d:?}, phi = {phi}: sum over partitions gives {sum}");
            checks += 1;
        }

        let multiple = InvPoly::new(n, &ch1 * &random_inv_poly(&mut rng, &ring, n, n - 1)).map_err(err)?;
        ensure!(decompose_invariant(&multiple).map_err(err)?.is_ch1_multiple(), "{multiple} not seen as ch1 multiple");
        let value = invariant_of_polynomial(&base, &multiple).map_err(err)?;
        ensure!(value.is_zero(), "d = {d:?}: ch1 multiple {multiple} gives {value}");
        checks += 1;
    }
    Ok(format!("{checks} polynomials over {bases} bases"))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut checks = 0;
    for n in 1..=4 {
        let parts = partitions(n).map_err(err)?;
        let family: Vec<_> = parts
            .iter()
            .map(|sigma| family_partition_invariant(n, sigma))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let mu = family_mu(n).map_err(err)?;
        for _ in 0..50 {
            let d = random_degrees(&mut rng, n, 9);
            let base = complete_intersection_base(n, &d).map_err(err)?;
            for (sigma, f) in parts.iter().zip(&family) {
                let lhs = f.evaluate(&d).map_err(err)?;
                let rhs = partition_invariant(&base, sigma).map_err(err)?;
                ensure!(lhs == rhs, "d = {d:?}, sigma = ({sigma}): family {lhs} vs pointwise {rhs}");
                checks += 1;
            }
            let lhs = mu.evaluate(&d).map_err(err)?;
            let rhs = burns_epstein(&base).map_err(err)?;
            ensure!(lhs == rhs, "d = {d:?}: family mu {lhs} vs pointwise {rhs}");
            checks += 1;
        }
    }
    Ok(format!("{checks} evaluations"))
}

/// A valid base that is not a complete intersection: values on t1-free monomials are
/// random, the rest follow from Einstein consistency.
fn random_custom_base(rng: &mut ChaCha8Rng, n: usize) -> KEBase {
    let lambda = loop {
        let l = random_rational(rng);
        if !l.is_zero() {
            break l;
        }
    };
    let mut monomials = class_monomials(n, n);
    monomials.sort_by_key(|m| m[1]);
    let mut entries: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for m in monomials {
        let value = if m[1] == 0 {
            random_rational(rng)
        } else {
            let mut lower = m.clone();
            lower[1] -= 1;
            lower[0] += 1;
            -int(n as i64 + 1) * &lambda * &entries[&lower]
        };
        entries.insert(m, value);
    }
    KEBase::from_parts(n, lambda, ChernNumberTable::new(n, entries), Provenance::Custom)
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7777);

    // round trips in Q[ch_1..ch_8] and Q[c_1..c_8]
    let order = 8;
    let ring = Ring::new((1..=order).map(|k| (format!("a{k}"), k as u32))).map_err(err)?;
    let gens: Vec<Poly> = (0..order).map(|k| Poly::var(&ring, k)).collect();
    for rank in [1, 3, 8] {
        let ch = ChVector::with_rank(&ring, rank, gens.clone());
        let back = chern_to_ch(&ch_to_chern(&ch), rank).map_err(err)?;
        ensure!(back.entries() == ch.entries(), "ch -> c -> ch differs at rank {rank}");

        let mut c = vec![Poly::one(&ring)];
        c.extend(gens.iter().cloned());
        let again = ch_to_chern(&chern_to_ch(&c, rank).map_err(err)?);
        ensure!(again == c, "c -> ch -> c differs at rank {rank}");
    }

    // twist group law, symbolic in both parameters
    let twist_ring = Ring::new([("u", 1), ("v", 1), ("a1", 1), ("a2", 2), ("a3", 3), ("a4", 4)]).map_err(err)?;
    let (u, v) = (Poly::var(&twist_ring, 0), Poly::var(&twist_ring, 1));
    let ch = ChVector::with_rank(&twist_ring, 4, (2..6).map(|i| Poly::var(&twist_ring, i)).collect());
    let stepwise = twist_ch(&twist_ch(&ch, &u), &v);
    let combined = twist_ch(&ch, &(&u + &v));
    ensure!(stepwise.entries() == combined.entries(), "twist(twist(ch, u), v) != twist(ch, u + v)");
    ensure!(twist_ch(&ch, &Poly::zero(&twist_ring)).entries() == ch.entries(), "twist by 0 is not the identity");

    // Einstein condition kills the first Bochner class on every valid base
    let mut bases = Vec::new();
    for n in 1..=5 {
        bases.push(complete_intersection_base(n, &vec![1; n]).map_err(err)?);
        for _ in 0..4 {
            bases.push(complete_intersection_base(n, &random_degrees(&mut rng, n, 7)).map_err(err)?);
            bases.push(random_custom_base(&mut rng, n));
        }
    }
    let mut pairings = 0;
    for base in &bases {
        let violations = validate_base(base);
        ensure!(violations.is_empty(), "base {:?} rejected: {}", base.provenance, violations[0]);
        let b1 = bochner_ch(base, 1).map_err(err)?;
        for m in class_monomials(base.n, base.n - 1) {
            let cls = &b1 * &Poly::from_terms(base.ring(), [(m.clone(), int(1))]);
            let value = integrate(base, &cls).map_err(err)?;
            ensure!(value.is_zero(), "n = {}: ch_1(B) * {m:?} integrates to {value}", base.n);
            pairings += 1;
        }
    }
    Ok(format!("order {order} round trips, twist law, {pairings} pairings on {} bases", bases.len()))
}
