use onion_core::classify::{qubit4_exemplars, reachability_edges};
use onion_core::random::{random_exact_state, random_invertible, rng_from_seed};
use onion_core::tensor::proportional;
use onion_core::{
    apply_local, canonicalize_3qubit, classify, hyperdet, reachable, representative, ClassLabel, ClassName, Exact,
    Family, Radical, StateTensor, Tolerance,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn catalog_round_trip() {
    for family in [Family::Qubit3, Family::Format322, Family::Bipartite(3)] {
        for name in family.names() {
            let label = ClassLabel::named(family, name).unwrap();
            let rep = representative(&label).unwrap();
            let back = classify(&rep, tol()).unwrap();
            assert_eq!((back.family, back.name), (family, name));
            assert_eq!(back.onion_level, label.onion_level);
        }
    }
}

#[test]
fn qubit4_has_exemplars_but_no_representative() {
    let label = ClassLabel::named(Family::Qubit4, ClassName::Generic4).unwrap();
    assert!(representative(&label).is_err());
    let names: Vec<ClassName> = qubit4_exemplars().iter().map(|(_, t)| classify(t, tol()).unwrap().name).collect();
    assert!(names.contains(&ClassName::Generic4) && names.contains(&ClassName::Degenerate4));
}

#[test]
fn orbit_points_keep_their_class_and_canonicalize() {
    let mut rng = rng_from_seed(3);
    for name in Family::Qubit3.names() {
        let rep = representative(&ClassLabel::named(Family::Qubit3, name).unwrap()).unwrap();
        let t = apply_local(&rep, &random_invertible::<Exact>(&[2, 2, 2], &mut rng)).unwrap();
        assert_eq!(classify(&t, tol()).unwrap().name, name);
        let c = canonicalize_3qubit(&t, tol()).unwrap();
        let out = apply_local(&t.map(|v| Radical::lift(v.clone())).unwrap(), &c.g).unwrap();
        let want = rep.map(|v| Radical::lift(v.clone())).unwrap();
        assert!(proportional(out.amplitudes(), want.amplitudes(), tol()));
    }
}

#[test]
fn reachability_is_reflexive_and_follows_edges() {
    for family in [Family::Qubit3, Family::Format322] {
        for (a, b) in reachability_edges(family) {
            let (la, lb) = (ClassLabel::named(family, a).unwrap(), ClassLabel::named(family, b).unwrap());
            assert!(reachable(&la, &lb).unwrap());
            assert!(!reachable(&lb, &la).unwrap());
            assert!(reachable(&la, &la).unwrap());
        }
    }
}

#[test]
fn float_and_exact_agree_on_random_states() {
    for seed in 0..20 {
        let t: StateTensor<Exact> = random_exact_state(&[3, 2, 2], seed).unwrap();
        let (e, f) = (hyperdet(&t, tol()).unwrap(), hyperdet(&t.to_float(), tol()).unwrap());
        let (ev, fv) = (num_complex_to_pair(&e.value), (f.value.re, f.value.im));
        assert!((ev.0 - fv.0).abs() + (ev.1 - fv.1).abs() < 1e-9 * (1.0 + ev.0.abs() + ev.1.abs()));
        assert_eq!(classify(&t, tol()).unwrap().name, classify(&t.to_float(), tol()).unwrap().name);
    }
}

fn num_complex_to_pair(v: &Exact) -> (f64, f64) {
    use onion_core::Scalar;
    let z = v.to_c64();
    (z.re, z.im)
}
