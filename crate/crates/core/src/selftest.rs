//! The acceptance suite, shared by the `acceptance` test target and the
//! `selftest` CLI command.
//!
//! Each criterion returns a [`CriterionOutcome`]; [`Level::Quick`] runs the
//! same checks on smaller samples.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::classify::{
    canonicalize_3qubit, classify, forbidden_pair, reachable, representative, ClassLabel, ClassName, Family,
};
use crate::error::Result;
use crate::hyperdet::{
    build_generic4, det3_explicit, det3_schlafli, det_3x2x2, eval_closed_form, generic4::closed_form_factors, hyperdet,
    weight_exponents,
};
use crate::linalg::Matrix;
use crate::mixed::{density_matrix, ensemble_upper_class, Ensemble, LadderClass};
use crate::oracle::{degenerate_oracle, identity_check, DEFAULT_ORACLE_TOL, DEFAULT_RESTARTS};
use crate::random::{
    random_exact_scalar, random_exact_state_with, random_invertible, random_singular, random_state_with, rng_from_seed,
};
use crate::scalar::{rational, Exact, Float, Radical, Scalar, Tolerance};
use crate::tensor::{apply_local, proportional, LocalOperatorTuple, StateTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(&self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {:<24} {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "schlafli-identity"),
    (2, "generic4-closed-form"),
    (3, "class-catalog"),
    (4, "relative-invariance"),
    (5, "slice-swap-signs"),
    (6, "oracle-agreement"),
    (7, "degradation-dag"),
    (8, "canonicalizer"),
    (9, "mixed-ladder"),
    (10, "genericity"),
];

type Check = (bool, String);

fn kets(format: &[usize], k: &[&str]) -> StateTensor<Exact> {
    StateTensor::from_kets(format, k).expect("valid kets")
}

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Runs one criterion; errors count as failures.
pub fn run_criterion(id: u8, level: Level, seed: u64) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let start = Instant::now();
    let result: Result<Check> = match id {
        1 => schlafli_identity(level, seed),
        2 => generic4_closed_form(level, seed),
        3 => class_catalog(),
        4 => relative_invariance(level, seed),
        5 => slice_swap_signs(level, seed),
        6 => oracle_agreement(level, seed),
        7 => degradation_dag(level, seed),
        8 => canonicalizer(level, seed),
        9 => mixed_ladder(),
        10 => genericity(level, seed),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(level: Level, seed: u64) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, level, seed)).collect()
}

fn schlafli_identity(level: Level, seed: u64) -> Result<Check> {
    let trials = level.pick(100, 1000);
    let ok = identity_check(det3_explicit, |t| det3_schlafli(t, tol()), &[2, 2, 2], trials, seed)?;
    Ok((ok, format!("{trials} exact trials, Cayley vs lift")))
}

fn generic4_closed_form(level: Level, seed: u64) -> Result<Check> {
    let trials = level.pick(10, 100);
    let mut rng = rng_from_seed(seed);
    let det4 = |q: &[Exact; 4]| -> Result<Exact> {
        Ok(hyperdet(&build_generic4(&q[0], &q[1], &q[2], &q[3])?, tol())?.value)
    };
    let pinned = [2, 1, 1, 1].map(Exact::from_i64);
    if det4(&pinned)? != Exact::from_i64(72900) {
        return Ok((false, "pinned point (2,1,1,1) does not give 72900".into()));
    }
    let mut mismatches = 0;
    for _ in 0..trials {
        let q = [(); 4].map(|_| random_exact_scalar(&mut rng));
        if q.iter().all(Zero::is_zero) {
            continue;
        }
        if det4(&q)? != eval_closed_form(&q[0], &q[1], &q[2], &q[3]) {
            mismatches += 1;
        }
    }
    let mut hyperplane_failures = 0;
    let planes = closed_form_zero_points(&mut rng, level.pick(1, 3));
    for q in &planes {
        if det4(q)? != Exact::from_i64(0) || eval_closed_form(&q[0], &q[1], &q[2], &q[3]) != Exact::from_i64(0) {
            hyperplane_failures += 1;
        }
    }
    Ok((
        mismatches == 0 && hyperplane_failures == 0,
        format!(
            "{trials} quadruples, {mismatches} mismatches; {} hyperplane points, {hyperplane_failures} nonzero; K4 = {}",
            planes.len(),
            crate::hyperdet::generic4::K4
        ),
    ))
}

/// `per_factor` random points on each of the twelve hyperplanes where a
/// factor of the closed form vanishes.
fn closed_form_zero_points(rng: &mut impl Rng, per_factor: usize) -> Vec<[Exact; 4]> {
    let zero = Exact::from_i64(0);
    let unit = |k: usize| {
        let mut q = [(); 4].map(|_| zero.clone());
        q[k] = Exact::from_i64(1);
        q
    };
    let mut out = Vec::new();
    for factor in 0..12 {
        let coeff: Vec<Exact> = (0..4)
            .map(|k| {
                let q = unit(k);
                closed_form_factors(&q[0], &q[1], &q[2], &q[3])[factor].clone()
            })
            .collect();
        let k = (0..4).rev().find(|&k| !coeff[k].is_zero()).expect("nonzero linear form");
        for _ in 0..per_factor {
            let mut q = [(); 4].map(|_| random_exact_scalar(rng));
            q[k] = zero.clone();
            let rest = (0..4).fold(zero.clone(), |acc, j| acc + coeff[j].clone() * q[j].clone());
            q[k] = -rest / coeff[k].clone();
            out.push(q);
        }
    }
    out
}

fn class_catalog() -> Result<Check> {
    let mut failures = Vec::new();
    let mut check = |format: &[usize], k: &[&str], family: Family, name: ClassName, ranks: &[usize]| -> Result<()> {
        let l = classify(&kets(format, k), tol())?;
        if l.family != family || l.name != name || l.local_ranks != ranks {
            failures.push(format!("{k:?} gave {} {:?}", l.name, l.local_ranks));
        }
        Ok(())
    };
    use ClassName::*;
    let q3 = Family::Qubit3;
    check(&[2, 2, 2], &["000", "111"], q3, Ghz, &[2, 2, 2])?;
    check(&[2, 2, 2], &["001", "010", "100"], q3, W, &[2, 2, 2])?;
    check(&[2, 2, 2], &["001", "010"], q3, B1, &[1, 2, 2])?;
    check(&[2, 2, 2], &["001", "100"], q3, B2, &[2, 1, 2])?;
    check(&[2, 2, 2], &["010", "100"], q3, B3, &[2, 2, 1])?;
    check(&[2, 2, 2], &["000"], q3, S, &[1, 1, 1])?;
    let f = Family::Format322;
    check(&[3, 2, 2], &["000", "101", "110", "211"], f, Gen322, &[3, 2, 2])?;
    check(&[3, 2, 2], &["000", "101", "211"], f, Deg322, &[3, 2, 2])?;
    check(&[3, 2, 2], &["000", "111"], f, Ghz, &[2, 2, 2])?;
    check(&[3, 2, 2], &["001", "010", "100"], f, W, &[2, 2, 2])?;
    check(&[3, 2, 2], &["001", "100"], f, B2, &[2, 1, 2])?;
    check(&[3, 2, 2], &["010", "100"], f, B3, &[2, 2, 1])?;
    check(&[3, 2, 2], &["001", "010"], f, B1, &[1, 2, 2])?;
    check(&[3, 2, 2], &["000"], f, S, &[1, 1, 1])?;
    for (k, label) in [(&["0000", "1111"][..], "GHZ4"), (&["0001", "0010", "0100", "1000"], "W4")] {
        let l = classify(&kets(&[2, 2, 2, 2], k), tol())?;
        if l.name != Degenerate4 {
            failures.push(format!("{label} gave {}", l.name));
        }
    }
    Ok((failures.is_empty(), if failures.is_empty() { "16 representatives".into() } else { failures.join("; ") }))
}

const INVARIANCE_FORMATS: [&[usize]; 5] = [&[2, 2], &[3, 3], &[2, 2, 2], &[3, 2, 2], &[2, 2, 2, 2]];

fn relative_invariance(level: Level, seed: u64) -> Result<Check> {
    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    let mut degrees = Vec::new();
    for format in INVARIANCE_FORMATS {
        let trials = if format.len() == 4 { level.pick(10, 100) } else { level.pick(100, 100) };
        let exps = weight_exponents(format).expect("supported format");
        let mut bad = 0;
        let mut degree = 0;
        for _ in 0..trials {
            let t = random_exact_state_with(format, &mut rng)?;
            let g = random_invertible::<Exact>(format, &mut rng);
            let before = hyperdet(&t, tol())?;
            degree = before.degree;
            let after = hyperdet(&apply_local(&t, &g)?, tol())?.value;
            let factor = g
                .determinants()
                .iter()
                .zip(&exps)
                .fold(Exact::from_i64(1), |acc, (d, &e)| acc * d.powu(e));
            let lambda = random_exact_scalar(&mut rng);
            let scaled = if lambda.is_zero() { before.value.clone() } else { hyperdet(&t.scaled(&lambda)?, tol())?.value };
            let expected_scaled = if lambda.is_zero() {
                before.value.clone()
            } else {
                lambda.powu(degree as u32) * before.value.clone()
            };
            if after != factor * before.value || scaled != expected_scaled {
                bad += 1;
            }
        }
        degrees.push(format!("{format:?}:{degree}"));
        if bad > 0 {
            failures.push(format!("{format:?}: {bad}/{trials}"));
        }
    }
    let degrees_ok = degrees == ["[2, 2]:2", "[3, 3]:3", "[2, 2, 2]:4", "[3, 2, 2]:6", "[2, 2, 2, 2]:24"];
    Ok((
        failures.is_empty() && degrees_ok,
        format!("degrees {}; failures [{}]", degrees.join(" "), failures.join(", ")),
    ))
}

fn swap_on(format: &[usize], party: usize) -> Result<LocalOperatorTuple<Exact>> {
    let ops = format
        .iter()
        .enumerate()
        .map(|(p, &d)| {
            let mut m = Matrix::identity(d);
            if p == party {
                m = Matrix::zeros(d, d);
                m[(0, 1)] = Exact::from_i64(1);
                m[(1, 0)] = Exact::from_i64(1);
                for i in 2..d {
                    m[(i, i)] = Exact::from_i64(1);
                }
            }
            m
        })
        .collect();
    LocalOperatorTuple::new(ops)
}

fn slice_swap_signs(level: Level, seed: u64) -> Result<Check> {
    let trials = level.pick(20, 100);
    let mut rng = rng_from_seed(seed);
    let mut bad = Vec::new();
    for party in 0..3 {
        let g = swap_on(&[2, 2, 2], party)?;
        let n = (0..trials)
            .filter_map(|_| {
                let t = random_exact_state_with(&[2, 2, 2], &mut rng).ok()?;
                let s = apply_local(&t, &g).ok()?;
                (det3_explicit(&s).ok()? != det3_explicit(&t).ok()?).then_some(())
            })
            .count();
        if n > 0 {
            bad.push(format!("det3 party {}: {n}", party + 1));
        }
    }
    for (party, sign) in [(0, 1), (1, -1), (2, -1)] {
        let g = swap_on(&[3, 2, 2], party)?;
        let n = (0..trials)
            .filter_map(|_| {
                let t = random_exact_state_with(&[3, 2, 2], &mut rng).ok()?;
                let s = apply_local(&t, &g).ok()?;
                (det_3x2x2(&s).ok()? != Exact::from_i64(sign) * det_3x2x2(&t).ok()?).then_some(())
            })
            .count();
        if n > 0 {
            bad.push(format!("det322 party {}: {n}", party + 1));
        }
    }
    Ok((
        bad.is_empty(),
        format!("{trials} trials per case; det3 fixed, det322 negated on parties 2,3 [{}]", bad.join(", ")),
    ))
}

/// Degree-24 values of unit states are small; typical generic members of
/// the family sit near 1e-8.
const MARGIN_QUBIT4: f64 = 1e-14;

fn oracle_agreement(level: Level, seed: u64) -> Result<Check> {
    let mut rng = rng_from_seed(seed);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    let mut skipped = 0;
    let mut verdict = |t: &StateTensor<Float>, zero: bool, what: String, checked: &mut usize| {
        let r = degenerate_oracle(t, DEFAULT_RESTARTS, DEFAULT_ORACLE_TOL, seed);
        *checked += 1;
        if r.found != zero {
            mismatches.push(format!("{what}: found={} residual={:.2e}", r.found, r.residual));
        }
    };
    let margin = 1e-6;
    for i in 0..level.pick(20, 200) {
        let t = random_state_with(&[2, 2, 2], &mut rng)?;
        let d = det3_explicit(&t)?.norm();
        if d <= margin {
            skipped += 1;
            continue;
        }
        verdict(&t, false, format!("random 2x2x2 #{i}"), &mut checked);
    }
    for k in [&["000", "111"][..], &["001", "010", "100"], &["001", "010"], &["001", "100"], &["010", "100"], &["000"]] {
        let t = kets(&[2, 2, 2], k);
        let zero = det3_explicit(&t)?.is_zero();
        verdict(&t.to_float(), zero, format!("{k:?}"), &mut checked);
    }
    for i in 0..level.pick(5, 50) {
        let t = random_state_with(&[3, 2, 2], &mut rng)?;
        let d = det_3x2x2(&t)?.norm();
        if d <= margin {
            skipped += 1;
            continue;
        }
        verdict(&t, false, format!("random 3x2x2 #{i}"), &mut checked);
    }
    // points of the dual variety pushed through random invertible operators
    for (format, k) in [
        (&[2, 2, 2][..], &["001", "010", "100"][..]),
        (&[3, 2, 2], &["000", "101", "211"]),
        (&[3, 2, 2], &["001", "010", "100"]),
    ] {
        for i in 0..level.pick(2, 10) {
            let g = random_invertible::<Exact>(format, &mut rng);
            let t = apply_local(&kets(format, k), &g)?;
            let t = t.scaled(&Exact::from_c64(Float::new(1.0 / t.norm(), 0.0)))?;
            verdict(&t.to_float(), true, format!("{k:?} orbit #{i}"), &mut checked);
        }
    }
    // the generic 4-qubit family against zeros of the closed form
    let family = |q: &[Exact; 4]| build_generic4(&q[0], &q[1], &q[2], &q[3]);
    for (i, q) in closed_form_zero_points(&mut rng, 1).iter().enumerate().take(level.pick(3, 12)) {
        verdict(&family(q)?.to_float(), true, format!("closed-form zero #{i}"), &mut checked);
    }
    for i in 0..level.pick(3, 10) {
        let q = [(); 4].map(|_| random_exact_scalar(&mut rng));
        let t = family(&q)?;
        let value = eval_closed_form(&q[0], &q[1], &q[2], &q[3]).modulus() / t.norm().powi(24);
        if value <= MARGIN_QUBIT4 {
            skipped += 1;
            continue;
        }
        verdict(&t.to_float(), false, format!("generic 4-qubit #{i}"), &mut checked);
    }
    Ok((
        mismatches.is_empty(),
        format!(
            "{checked} states, {skipped} below margin, {} mismatches {}",
            mismatches.len(),
            mismatches.join("; ")
        ),
    ))
}

/// A random state: half the time generic, otherwise a random orbit point of
/// a random catalog class.
fn sample_state(family: Family, rng: &mut impl Rng) -> Result<StateTensor<Exact>> {
    let format = family.format();
    if family == Family::Qubit4 || rng.random_bool(0.5) {
        return random_exact_state_with(&format, rng);
    }
    let names = family.names();
    let name = names[rng.random_range(0..names.len())];
    let rep = representative(&ClassLabel::named(family, name)?)?;
    apply_local(&rep, &random_invertible::<Exact>(&format, rng))
}

fn degradation_dag(level: Level, seed: u64) -> Result<Check> {
    let mut rng = rng_from_seed(seed);
    let mut problems = Vec::new();
    let mut observed = BTreeSet::new();
    let mut total = 0;
    for family in [Family::Qubit3, Family::Format322, Family::Bipartite(3), Family::Qubit4] {
        let trials = if family == Family::Qubit4 { level.pick(20, 100) } else { level.pick(100, 500) };
        for _ in 0..trials {
            let t = sample_state(family, &mut rng)?;
            let g = random_singular::<Exact>(&family.format(), &mut rng);
            let Ok(s) = apply_local(&t, &g) else { continue };
            total += 1;
            let (a, b) = (classify(&t, tol())?, classify(&s, tol())?);
            observed.insert((family.to_string(), a.name, b.name));
            if b.onion_level < a.onion_level || !reachable(&a, &b)? || forbidden_pair(a.name, b.name) {
                problems.push(format!("{family}: {} -> {}", a.name, b.name));
            }
        }
    }
    let edges: Vec<String> = observed
        .iter()
        .filter(|(_, a, b)| a != b)
        .map(|(f, a, b)| format!("{f}:{a}->{b}"))
        .collect();
    Ok((
        problems.is_empty(),
        format!("{total} nonzero images, {} distinct edges, violations [{}]", edges.len(), problems.join(", ")),
    ))
}

fn canonicalizer(level: Level, seed: u64) -> Result<Check> {
    let mut rng = rng_from_seed(seed);
    let trials = level.pick(40, 200);
    let mut failures = 0;
    let mut names = BTreeSet::new();
    for _ in 0..trials {
        let t = sample_state(Family::Qubit3, &mut rng)?;
        let c = canonicalize_3qubit(&t, tol())?;
        names.insert(c.label.name);
        let lifted = t.map(|v| Radical::lift(v.clone()))?;
        let out = apply_local(&lifted, &c.g)?;
        let rep = representative(&c.label)?.map(|v| Radical::lift(v.clone()))?;
        let invertible = c.g.invertible(tol()).iter().all(|&b| b);
        if !invertible || !proportional(out.amplitudes(), rep.amplitudes(), tol()) {
            failures += 1;
        }
    }
    let seen: Vec<String> = names.iter().map(ToString::to_string).collect();
    Ok((failures == 0, format!("{trials} states over classes {}, {failures} failures", seen.join(","))))
}

fn mixed_ladder() -> Result<Check> {
    let half = rational(1, 2);
    let e = |m: Vec<(Exact, StateTensor<Exact>)>| Ensemble::new(m, tol());
    let q = |k: &[&str]| kets(&[2, 2, 2], k);
    let class = |en: &Ensemble<Exact>| ensemble_upper_class(en, tol()).map(|v| v.class);
    let fixtures = [
        (e(vec![(half.clone(), q(&["000", "111"])), (half.clone(), q(&["001", "010", "100"]))])?, LadderClass::GhzClass),
        (e(vec![(half.clone(), q(&["000"])), (half.clone(), q(&["111"]))])?, LadderClass::SeparableClass),
        (
            e(vec![(rational(3, 10), q(&["001", "010"])), (rational(7, 10), q(&["010", "100"]))])?,
            LadderClass::BiseparableClass,
        ),
    ];
    let mut ok = true;
    for (en, want) in &fixtures {
        ok &= class(en)? == *want;
    }
    let ghz_minus = StateTensor::from_terms(&[2, 2, 2], &[("000", Exact::from_i64(1)), ("111", Exact::from_i64(-1))])?;
    let product = &fixtures[1].0;
    let ghz_mix = e(vec![(half.clone(), q(&["000", "111"])), (half, ghz_minus)])?;
    let same_rho = density_matrix(product) == density_matrix(&ghz_mix);
    let diverge = class(product)? == LadderClass::SeparableClass && class(&ghz_mix)? == LadderClass::GhzClass;
    Ok((
        ok && same_rho && diverge,
        format!("fixtures {ok}, equal rho {same_rho}, labels diverge {diverge}"),
    ))
}

fn genericity(level: Level, seed: u64) -> Result<Check> {
    let mut rng = rng_from_seed(seed);
    let trials = level.pick(200, 1000);
    let mut ghz = 0;
    for _ in 0..trials {
        let t = random_state_with(&[2, 2, 2], &mut rng)?;
        if classify(&t, tol())?.name == ClassName::Ghz {
            ghz += 1;
        }
    }
    let needed = trials - trials / 1000;
    Ok((ghz >= needed, format!("{ghz}/{trials} GHZ class (need {needed})")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for outcome in run_all(Level::Quick, 7) {
            assert!(outcome.passed, "{}", outcome.line());
        }
    }
}
