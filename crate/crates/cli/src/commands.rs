//! One function per subcommand. Each returns the JSON report; rendering and
//! exit codes are handled by the caller.

use serde_json::{json, Value};

use onion_core::classify::{canonicalize_3qubit, SplittingField};
use onion_core::hyperdet::{concurrence, tangle3};
use onion_core::mixed::{ensemble_upper_class, Ensemble};
use onion_core::oracle::{degenerate_oracle, DEFAULT_ORACLE_TOL};
use onion_core::random::{random_exact_state, random_state};
use onion_core::selftest::{run_all, Level};
use onion_core::singular::singularity_report;
use onion_core::tensor::local_ranks;
use onion_core::{
    classify, hyperdet, reachable, representative, ClassLabel, ClassName, Family, Matrix, Scalar, StateTensor,
    Tolerance,
};

use crate::document::{state_document, AnyEnsemble, Encode, Mode};
use crate::failure::Failure;

/// Below this `|det4|` a float evaluation of the degree-24 invariant is not
/// trustworthy.
const DET4_FLOAT_WARNING: f64 = 1e-6;

pub fn classify_report<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<Value, Failure> {
    let label = classify(t, tol)?;
    Ok(serde_json::to_value(label).expect("labels serialize"))
}

pub fn hyperdet_report<S: Scalar + Encode>(t: &StateTensor<S>, tol: Tolerance) -> Result<Value, Failure> {
    let r = hyperdet(t, tol)?;
    let mut v = json!({ "defined": r.defined, "value": r.value.encode(), "degree": r.degree });
    if r.degenerate_pencil {
        v["degenerate_pencil"] = json!(true);
    }
    if !S::is_exact() && r.degree == 24 && r.value.modulus() < DET4_FLOAT_WARNING {
        v["warning"] = json!("degree-24 float value is ill-conditioned here; rerun with --mode exact");
    }
    Ok(v)
}

pub fn invariants_report<S: Scalar + Encode>(t: &StateTensor<S>, tol: Tolerance) -> Result<Value, Failure> {
    let mut v = json!({
        "format": t.format(),
        "local_ranks": local_ranks(t, tol),
        "hyperdet": hyperdet_report(t, tol)?,
    });
    let unit = t.to_float();
    let unit = unit.scaled(&onion_core::Float::new(1.0 / unit.norm(), 0.0))?;
    match t.format() {
        [2, 2] => v["concurrence"] = json!(concurrence(&unit)?),
        [2, 2, 2] => v["tangle"] = json!(tangle3(&unit)?),
        _ => {}
    }
    if matches!(t.format(), [2, 2, 2] | [3, 2, 2]) {
        let s = singularity_report(t, tol)?;
        v["singularity"] = json!({ "in_dual": s.in_dual, "node_flags": s.node_flags, "cusp_flag": s.cusp_flag });
    }
    Ok(v)
}

fn matrix_json<E: Scalar + Encode>(m: &Matrix<E>) -> Value {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(Encode::encode).collect::<Vec<_>>())
        .collect()
}

pub fn canonicalize_report<S>(t: &StateTensor<S>, tol: Tolerance) -> Result<Value, Failure>
where
    S: SplittingField,
    S::Ext: Encode,
{
    let c = canonicalize_3qubit(t, tol)?;
    let operators: Vec<Value> = c.g.operators().iter().map(matrix_json).collect();
    Ok(json!({
        "label": serde_json::to_value(&c.label).expect("labels serialize"),
        "operators": operators,
        "representative": state_document(&representative(&c.label)?),
    }))
}

pub fn reachable_report(family: &str, from: &str, to: &str) -> Result<Value, Failure> {
    let family: Family = family.parse().map_err(|e: String| Failure::validation("BadArgument", e))?;
    let name = |s: &str| s.parse::<ClassName>().map_err(|e| Failure::validation("BadArgument", e));
    let (a, b) = (ClassLabel::named(family, name(from)?)?, ClassLabel::named(family, name(to)?)?);
    Ok(json!({
        "family": family.to_string(),
        "from": a.name.to_string(),
        "to": b.name.to_string(),
        "reachable": reachable(&a, &b)?,
    }))
}

pub fn oracle_report<S: Scalar + Encode>(
    t: &StateTensor<S>,
    restarts: usize,
    tol: Option<f64>,
    seed: u64,
) -> Result<Value, Failure> {
    let oracle_tol = tol.unwrap_or(DEFAULT_ORACLE_TOL);
    let r = degenerate_oracle(t, restarts, oracle_tol, seed);
    let witness = r.witness.as_ref().map(|x| {
        x.factors()
            .iter()
            .map(|f| f.iter().map(Encode::encode).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    });
    let formula = match hyperdet(t, Tolerance::default()) {
        Ok(h) if h.defined => json!({ "value": h.value.encode(), "zero": h.value.is_negligible(
            onion_core::hyperdet::invariant_scale(t, h.degree), Tolerance::default()) }),
        _ => Value::Null,
    };
    Ok(json!({
        "found": r.found,
        "residual": r.residual,
        "restarts_used": r.restarts_used,
        "seed": seed,
        "tol": oracle_tol,
        "tolerance_basis": "engineering choice, not a proven bound",
        "witness": witness,
        "formula": formula,
    }))
}

pub fn random_report(format: &[usize], mode: Mode, seed: u64) -> Result<Value, Failure> {
    let mut doc = match mode {
        Mode::Exact => state_document(&random_exact_state(format, seed)?),
        Mode::Float => state_document(&random_state(format, seed)?),
    };
    doc["seed"] = json!(seed);
    Ok(doc)
}

fn ladder<S: Scalar>(members: Vec<(S, StateTensor<S>)>, tol: Tolerance) -> Result<Value, Failure> {
    let verdict = ensemble_upper_class(&Ensemble::new(members, tol)?, tol)?;
    Ok(json!({
        "class": verdict.class.as_str(),
        "bound_kind": verdict.bound_kind,
        "members": verdict.members.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
    }))
}

pub fn mixed_report(e: AnyEnsemble, tol: Tolerance) -> Result<Value, Failure> {
    match e {
        AnyEnsemble::Exact(m) => ladder(m, tol),
        AnyEnsemble::Float(m) => ladder(m, tol),
    }
}

pub fn selftest_report(level: Level, seed: u64) -> Value {
    let outcomes = run_all(level, seed);
    json!({
        "level": level,
        "seed": seed,
        "passed": outcomes.iter().all(|o| o.passed),
        "criteria": outcomes,
    })
}
