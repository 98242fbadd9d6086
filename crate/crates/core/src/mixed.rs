//! Ladder class of a 3-qubit mixed state from one explicit decomposition.
//!
//! The class reported is the largest ladder class among the members. Since a
//! density matrix has many decompositions and the true class is the minimum
//! over all of them, the result is an upper bound.

use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassName};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, Tolerance};
use crate::tensor::StateTensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderClass {
    SeparableClass,
    BiseparableClass,
    WClass,
    GhzClass,
}

impl LadderClass {
    pub fn of_name(name: ClassName) -> Option<LadderClass> {
        match name {
            ClassName::Ghz => Some(LadderClass::GhzClass),
            ClassName::W => Some(LadderClass::WClass),
            ClassName::B1 | ClassName::B2 | ClassName::B3 => Some(LadderClass::BiseparableClass),
            ClassName::S => Some(LadderClass::SeparableClass),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            LadderClass::SeparableClass => "separable-class",
            LadderClass::BiseparableClass => "biseparable-class",
            LadderClass::WClass => "W-class",
            LadderClass::GhzClass => "GHZ-class",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderVerdict {
    pub class: LadderClass,
    /// Always `"upper-bound"`: only the given decomposition is examined.
    pub bound_kind: &'static str,
    /// Ladder class of each member, in order.
    pub members: Vec<LadderClass>,
}

/// Weighted pure states of a common format. Weights are real, positive and
/// sum to one (exactly in exact mode).
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble<S> {
    members: Vec<(S, StateTensor<S>)>,
}

impl<S: Scalar> Ensemble<S> {
    pub fn new(members: Vec<(S, StateTensor<S>)>, tol: Tolerance) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::EmptyEnsemble);
        };
        let format = first.format().to_vec();
        let mut total = S::zero();
        for (p, t) in &members {
            if t.format() != format {
                return Err(Error::SizeMismatch(format!(
                    "ensemble member format {:?} differs from {:?}",
                    t.format(),
                    format
                )));
            }
            let z = p.to_c64();
            let imaginary = if S::is_exact() { !(p.clone() - p.conj()).is_zero() } else { z.im.abs() > tol.eps };
            if imaginary || z.re <= 0.0 {
                return Err(Error::InvalidWeights(format!("weight {} is not a positive real", p.render())));
            }
            total = total + p.clone();
        }
        if !(total.clone() - S::one()).is_negligible(1.0, tol) {
            return Err(Error::InvalidWeights(format!("weights sum to {}", total.render())));
        }
        Ok(Ensemble { members })
    }

    pub fn members(&self) -> &[(S, StateTensor<S>)] {
        &self.members
    }

    pub fn format(&self) -> &[usize] {
        self.members[0].1.format()
    }

    pub fn push(&mut self, weight: S, state: StateTensor<S>, tol: Tolerance) -> Result<()> {
        let mut members = std::mem::take(&mut self.members);
        members.push((weight, state));
        *self = Ensemble::new(members, tol)?;
        Ok(())
    }
}

/// The largest ladder class among the members.
pub fn ensemble_upper_class<S: Scalar>(e: &Ensemble<S>, tol: Tolerance) -> Result<LadderVerdict> {
    if e.format() != [2, 2, 2] {
        return Err(Error::UnsupportedFormat(e.format().to_vec()));
    }
    let members = e
        .members()
        .iter()
        .map(|(_, t)| {
            let name = classify(t, tol)?.name;
            Ok(LadderClass::of_name(name).expect("qubit3 names map onto the ladder"))
        })
        .collect::<Result<Vec<_>>>()?;
    let class = *members.iter().max().expect("ensemble is nonempty");
    Ok(LadderVerdict {
        class,
        bound_kind: "upper-bound",
        members,
    })
}

/// `ρ = Σ p |ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
pub fn density_matrix<S: Scalar>(e: &Ensemble<S>) -> Matrix<S> {
    let dim = e.members()[0].1.amplitudes().len();
    let mut rho = Matrix::<S>::zeros(dim, dim);
    for (p, t) in e.members() {
        let a = t.amplitudes();
        let norm = a.iter().fold(S::zero(), |acc, v| acc + v.norm_sqr());
        let w = p.clone() / norm;
        for i in 0..dim {
            if a[i].is_zero() {
                continue;
            }
            let wi = w.clone() * a[i].clone();
            for j in 0..dim {
                rho[(i, j)] = rho[(i, j)].clone() + wi.clone() * a[j].conj();
            }
        }
    }
    rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_exact_state_with, random_invertible, rng_from_seed};
    use crate::scalar::{rational, Exact, Float};
    use crate::tensor::apply_local;

    fn kets(k: &[&str]) -> StateTensor<Exact> {
        StateTensor::from_kets(&[2, 2, 2], k).unwrap()
    }

    fn ensemble(m: &[(Exact, StateTensor<Exact>)]) -> Ensemble<Exact> {
        Ensemble::new(m.to_vec(), Tolerance::default()).unwrap()
    }

    fn ghz_minus() -> StateTensor<Exact> {
        StateTensor::from_terms(&[2, 2, 2], &[("000", Exact::from_i64(1)), ("111", Exact::from_i64(-1))]).unwrap()
    }

    fn class(e: &Ensemble<Exact>) -> LadderClass {
        ensemble_upper_class(e, Tolerance::default()).unwrap().class
    }

    #[test]
    fn ladder_fixtures() {
        let half = rational(1, 2);
        let e = ensemble(&[(half.clone(), kets(&["000", "111"])), (half.clone(), kets(&["001", "010", "100"]))]);
        assert_eq!(class(&e), LadderClass::GhzClass);
        let e = ensemble(&[(half.clone(), kets(&["000"])), (half, kets(&["111"]))]);
        assert_eq!(class(&e), LadderClass::SeparableClass);
        let e = ensemble(&[(rational(3, 10), kets(&["001", "010"])), (rational(7, 10), kets(&["010", "100"]))]);
        assert_eq!(class(&e), LadderClass::BiseparableClass);
        assert_eq!(ensemble_upper_class(&e, Tolerance::default()).unwrap().bound_kind, "upper-bound");
    }

    #[test]
    fn same_rho_different_ladder_class() {
        let half = rational(1, 2);
        let product = ensemble(&[(half.clone(), kets(&["000"])), (half.clone(), kets(&["111"]))]);
        let ghz = ensemble(&[(half.clone(), kets(&["000", "111"])), (half, ghz_minus())]);
        assert_eq!(density_matrix(&product), density_matrix(&ghz));
        assert_eq!(class(&product), LadderClass::SeparableClass);
        assert_eq!(class(&ghz), LadderClass::GhzClass);
    }

    #[test]
    fn density_matrix_examples() {
        let rho = density_matrix(&ensemble(&[(Exact::from_i64(1), kets(&["000", "111"]))]));
        assert_eq!(rho.trace(), Exact::from_i64(1));
        assert_eq!(rho.rank_exact(), 1);
        let doubled = kets(&["000", "111"]).scaled(&Exact::from_i64(2)).unwrap();
        assert_eq!(density_matrix(&ensemble(&[(Exact::from_i64(1), doubled)])), rho);

        let half = rational(1, 2);
        let rho = density_matrix(&ensemble(&[(half.clone(), kets(&["000"])), (half.clone(), kets(&["111"]))]));
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j && (i == 0 || i == 7) { half.clone() } else { Exact::from_i64(0) };
                assert_eq!(rho[(i, j)], expected);
            }
        }
    }

    #[test]
    fn validation() {
        let tol = Tolerance::default();
        assert_eq!(Ensemble::<Exact>::new(vec![], tol), Err(Error::EmptyEnsemble));
        let bad = Ensemble::new(vec![(rational(1, 2), kets(&["000"]))], tol);
        assert!(matches!(bad, Err(Error::InvalidWeights(_))));
        let neg = Ensemble::new(vec![(Exact::from_i64(2), kets(&["000"])), (Exact::from_i64(-1), kets(&["111"]))], tol);
        assert!(matches!(neg, Err(Error::InvalidWeights(_))));
        let mixed = Ensemble::new(
            vec![
                (rational(1, 2), kets(&["000"])),
                (rational(1, 2), StateTensor::from_kets(&[2, 2], &["00"]).unwrap()),
            ],
            tol,
        );
        assert!(matches!(mixed, Err(Error::SizeMismatch(_))));
        let e = Ensemble::new(vec![(Exact::from_i64(1), StateTensor::from_kets(&[2, 2], &["00"]).unwrap())], tol).unwrap();
        assert!(matches!(ensemble_upper_class(&e, tol), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn monotone_and_invariant() {
        let mut rng = rng_from_seed(21);
        let pool = [kets(&["000"]), kets(&["001", "010"]), kets(&["001", "010", "100"]), kets(&["000", "111"])];
        for n in 1..=4 {
            let members: Vec<_> = (0..n).map(|i| (rational(1, n as i64), pool[(i * 3 + n) % 4].clone())).collect();
            let e = ensemble(&members);
            let before = class(&e);
            // appending a member with rescaled weights
            let mut grown: Vec<_> = members.iter().map(|(_, t)| (rational(1, n as i64 + 1), t.clone())).collect();
            grown.push((rational(1, n as i64 + 1), random_exact_state_with(&[2, 2, 2], &mut rng).unwrap()));
            assert!(class(&ensemble(&grown)) >= before);

            let g = random_invertible::<Exact>(&[2, 2, 2], &mut rng);
            let moved: Vec<_> = members.iter().map(|(p, t)| (p.clone(), apply_local(t, &g).unwrap())).collect();
            assert_eq!(class(&ensemble(&moved)), before);
        }
    }

    #[test]
    fn float_density_matrix_is_a_state() {
        let mut rng = rng_from_seed(8);
        let members: Vec<(Float, StateTensor<Float>)> = [0.2, 0.3, 0.5]
            .iter()
            .map(|&p| (Float::new(p, 0.0), crate::random::random_state_with(&[2, 2, 2], &mut rng).unwrap()))
            .collect();
        let rho = density_matrix(&Ensemble::new(members, Tolerance::default()).unwrap());
        assert!((rho.trace() - Float::new(1.0, 0.0)).norm() < 1e-12);
        assert!(rho.hermitian_eigenvalues().iter().all(|&l| l > -1e-12));
    }
}
