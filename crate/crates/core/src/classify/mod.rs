//! The onion classifier: class labels per format family, the catalog of
//! representatives, reachability under noninvertible local operations, and
//! 3-qubit canonicalization.

mod canonical;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperdet::generic4::det4_outcome;
use crate::hyperdet::{build_generic4, det3_explicit, det_3x2x2, invariant_scale};
use crate::scalar::{Exact, Scalar, Tolerance};
use crate::singular::project_322;
use crate::tensor::{all_cuts, cut_rank, flatten, separability_pattern, StateTensor};

pub use canonical::{canonicalize_3qubit, Canonical, SplittingField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Family {
    /// Square `k×k` bipartite format.
    Bipartite(usize),
    Qubit3,
    Format322,
    Qubit4,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Bipartite(k) => write!(f, "bipartite-{k}"),
            Family::Qubit3 => f.write_str("qubit3"),
            Family::Format322 => f.write_str("format322"),
            Family::Qubit4 => f.write_str("qubit4"),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "qubit3" => Ok(Family::Qubit3),
            "format322" => Ok(Family::Format322),
            "qubit4" => Ok(Family::Qubit4),
            _ => s
                .strip_prefix("bipartite-")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .map(Family::Bipartite)
                .ok_or_else(|| format!("unknown family {s:?}")),
        }
    }
}

impl From<Family> for String {
    fn from(f: Family) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Family {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl Family {
    pub fn of_format(format: &[usize]) -> Result<Family> {
        match format {
            [a, b] if a == b => Ok(Family::Bipartite(*a)),
            [2, 2, 2] => Ok(Family::Qubit3),
            [3, 2, 2] => Ok(Family::Format322),
            [2, 2, 2, 2] => Ok(Family::Qubit4),
            _ => Err(Error::UnsupportedFormat(format.to_vec())),
        }
    }

    pub fn format(&self) -> Vec<usize> {
        match self {
            Family::Bipartite(k) => vec![*k, *k],
            Family::Qubit3 => vec![2, 2, 2],
            Family::Format322 => vec![3, 2, 2],
            Family::Qubit4 => vec![2, 2, 2, 2],
        }
    }

    /// Class names of the family, outermost first.
    pub fn names(&self) -> Vec<ClassName> {
        use ClassName::*;
        match self {
            Family::Bipartite(k) => (1..=*k).rev().map(Rank).collect(),
            Family::Qubit3 => vec![Ghz, W, B1, B2, B3, S],
            Family::Format322 => vec![Gen322, Deg322, Ghz, W, B2, B3, B1, S],
            Family::Qubit4 => vec![Generic4, Degenerate4],
        }
    }

    fn admits(&self, name: ClassName) -> bool {
        self.names().contains(&name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ClassName {
    /// Bipartite Schmidt-rank class `S_r`.
    Rank(usize),
    Ghz,
    W,
    B1,
    B2,
    B3,
    S,
    Gen322,
    Deg322,
    Generic4,
    Degenerate4,
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassName::Rank(r) => return write!(f, "S_{r}"),
            ClassName::Ghz => "GHZ",
            ClassName::W => "W",
            ClassName::B1 => "B1",
            ClassName::B2 => "B2",
            ClassName::B3 => "B3",
            ClassName::S => "S",
            ClassName::Gen322 => "GEN322",
            ClassName::Deg322 => "DEG322",
            ClassName::Generic4 => "GENERIC4",
            ClassName::Degenerate4 => "DEGENERATE4",
        };
        f.write_str(s)
    }
}

impl FromStr for ClassName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "GHZ" => ClassName::Ghz,
            "W" => ClassName::W,
            "B1" => ClassName::B1,
            "B2" => ClassName::B2,
            "B3" => ClassName::B3,
            "S" => ClassName::S,
            "GEN322" => ClassName::Gen322,
            "DEG322" => ClassName::Deg322,
            "GENERIC4" => ClassName::Generic4,
            "DEGENERATE4" => ClassName::Degenerate4,
            _ => s
                .strip_prefix("S_")
                .and_then(|r| r.parse().ok())
                .filter(|&r| r >= 1)
                .map(ClassName::Rank)
                .ok_or_else(|| format!("unknown class name {s:?}"))?,
        })
    }
}

impl From<ClassName> for String {
    fn from(n: ClassName) -> String {
        n.to_string()
    }
}

impl TryFrom<String> for ClassName {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl ClassName {
    fn biseparable(&self) -> bool {
        matches!(self, ClassName::B1 | ClassName::B2 | ClassName::B3)
    }
}

/// Depth in the onion, 0 for the outermost class of the family.
pub fn onion_level(family: Family, name: ClassName) -> Option<usize> {
    use ClassName::*;
    let level = match (family, name) {
        (Family::Bipartite(k), Rank(r)) if r <= k => k - r,
        (Family::Qubit3, Ghz) => 0,
        (Family::Qubit3, W) => 1,
        (Family::Qubit3, B1 | B2 | B3) => 2,
        (Family::Qubit3, S) => 3,
        (Family::Format322, Gen322) => 0,
        (Family::Format322, Deg322) => 1,
        (Family::Format322, Ghz) => 2,
        (Family::Format322, W) => 3,
        (Family::Format322, B2 | B3) => 4,
        (Family::Format322, B1) => 5,
        (Family::Format322, S) => 6,
        (Family::Qubit4, Generic4) => 0,
        (Family::Qubit4, Degenerate4) => 1,
        _ => return None,
    };
    Some(level)
}

/// Local ranks carried by every state of a finite class, when fixed.
pub fn class_local_ranks(family: Family, name: ClassName) -> Option<Vec<usize>> {
    use ClassName::*;
    let ranks = match (family, name) {
        (Family::Bipartite(k), Rank(r)) if r <= k => vec![r, r],
        (Family::Qubit3, Ghz | W) => vec![2, 2, 2],
        (Family::Qubit3, B1) => vec![1, 2, 2],
        (Family::Qubit3, B2) => vec![2, 1, 2],
        (Family::Qubit3, B3) => vec![2, 2, 1],
        (Family::Qubit3, S) => vec![1, 1, 1],
        (Family::Format322, Gen322 | Deg322) => vec![3, 2, 2],
        (Family::Format322, n) => class_local_ranks(Family::Qubit3, n)?,
        _ => return None,
    };
    Some(ranks)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassLabel {
    pub family: Family,
    pub name: ClassName,
    pub local_ranks: Vec<usize>,
    pub onion_level: usize,
    /// Decisive values and flags behind the verdict, rendered as strings.
    pub diagnostics: BTreeMap<String, String>,
    /// A float-mode decisive quantity fell within ten tolerances of zero.
    pub boundary_warning: bool,
}

impl ClassLabel {
    /// Catalog label without diagnostics. Local ranks are left empty for the
    /// 4-qubit classes, which do not fix them.
    pub fn named(family: Family, name: ClassName) -> Result<ClassLabel> {
        let onion_level = onion_level(family, name).ok_or(Error::FamilyMismatch)?;
        Ok(ClassLabel {
            family,
            name,
            local_ranks: class_local_ranks(family, name).unwrap_or_default(),
            onion_level,
            diagnostics: BTreeMap::new(),
            boundary_warning: false,
        })
    }
}

/// Tracks decisive quantities and flags the ones close to the zero threshold.
struct Decisions {
    tol: Tolerance,
    float: bool,
    warning: bool,
    diagnostics: BTreeMap<String, String>,
}

impl Decisions {
    fn new<S: Scalar>(tol: Tolerance) -> Self {
        Decisions {
            tol,
            float: !S::is_exact(),
            warning: false,
            diagnostics: BTreeMap::new(),
        }
    }

    fn near(&mut self, ratio: f64) {
        if self.float && ratio > self.tol.eps && ratio <= 10.0 * self.tol.eps {
            self.warning = true;
        }
    }

    /// Zero test of an invariant, recording its value.
    fn zero<S: Scalar>(&mut self, key: &str, v: &S, scale: f64) -> bool {
        self.diagnostics.insert(key.into(), v.render());
        if scale > 0.0 {
            self.near(v.modulus() / scale);
        }
        v.is_negligible(scale, self.tol)
    }

    fn rank<S: Scalar>(&mut self, t: &StateTensor<S>, cut: &[usize]) -> Result<usize> {
        if self.float {
            let sv = flatten(t, cut)?.singular_values();
            if let Some(&top) = sv.first() {
                for s in &sv {
                    self.near(s / top);
                }
            }
        }
        cut_rank(t, cut, self.tol)
    }

    fn local_ranks<S: Scalar>(&mut self, t: &StateTensor<S>) -> Result<Vec<usize>> {
        (0..t.parties()).map(|p| self.rank(t, &[p])).collect()
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.diagnostics.insert(key.into(), value.to_string());
    }

    fn finish(self, family: Family, name: ClassName, local_ranks: Vec<usize>) -> ClassLabel {
        ClassLabel {
            family,
            name,
            local_ranks,
            onion_level: onion_level(family, name).expect("classifier emits family names"),
            diagnostics: self.diagnostics,
            boundary_warning: self.warning,
        }
    }
}

fn qubit3_name(ranks: &[usize], det_is_zero: impl FnOnce() -> bool) -> ClassName {
    let ones: Vec<usize> = (0..3).filter(|&j| ranks[j] <= 1).collect();
    match ones.as_slice() {
        [] if det_is_zero() => ClassName::W,
        [] => ClassName::Ghz,
        [0] => ClassName::B1,
        [1] => ClassName::B2,
        [2] => ClassName::B3,
        _ => ClassName::S,
    }
}

fn classify_qubit3<S: Scalar>(t: &StateTensor<S>, d: &mut Decisions) -> Result<(ClassName, Vec<usize>)> {
    let ranks = d.local_ranks(t)?;
    let name = qubit3_name(&ranks, || {
        let det = det3_explicit(t).expect("format checked");
        d.zero("det3", &det, invariant_scale(t, 4))
    });
    Ok((name, ranks))
}

/// Onion class of a state.
///
/// Square bipartite formats are classified by Schmidt rank; three qubits by
/// local ranks and the Cayley hyperdeterminant; 3×2×2 by the party-1 rank and
/// the boundary-format determinant, projecting onto a qubit when that rank is
/// at most two; four qubits only into `GENERIC4` / `DEGENERATE4`, with cut
/// ranks and the separability pattern as diagnostics.
pub fn classify<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<ClassLabel> {
    let family = Family::of_format(t.format())?;
    let mut d = Decisions::new::<S>(tol);
    match family {
        Family::Bipartite(_) => {
            let r = d.rank(t, &[0])?;
            d.note("schmidt_rank", r);
            Ok(d.finish(family, ClassName::Rank(r), vec![r, r]))
        }
        Family::Qubit3 => {
            let (name, ranks) = classify_qubit3(t, &mut d)?;
            Ok(d.finish(family, name, ranks))
        }
        Family::Format322 => {
            let ranks = d.local_ranks(t)?;
            let name = if ranks[0] == 3 {
                let det = det_3x2x2(t)?;
                if d.zero("det322", &det, invariant_scale(t, 6)) {
                    ClassName::Deg322
                } else {
                    ClassName::Gen322
                }
            } else {
                let q = project_322(t, tol)?;
                classify_qubit3(&q, &mut d)?.0
            };
            Ok(d.finish(family, name, ranks))
        }
        Family::Qubit4 => {
            let ranks = d.local_ranks(t)?;
            let out = det4_outcome(t, tol)?;
            let zero = d.zero("det4", &out.value, invariant_scale(t, 24));
            let cuts = all_cuts(4);
            let cut_ranks = cuts
                .iter()
                .map(|c| d.rank(t, c))
                .collect::<Result<Vec<_>>>()?;
            for (c, r) in cuts.iter().zip(&cut_ranks) {
                let key: String = c.iter().map(|p| (p + 1).to_string()).collect();
                d.note(&format!("cut_rank_{key}"), r);
            }
            d.note("separability_pattern", format!("{:?}", separability_pattern(t, tol)));
            d.note("degenerate_pencil", out.degenerate_pencil);
            let name = if zero {
                ClassName::Degenerate4
            } else {
                ClassName::Generic4
            };
            Ok(d.finish(family, name, ranks))
        }
    }
}

/// The catalog representative of a finite class.
pub fn representative(label: &ClassLabel) -> Result<StateTensor<Exact>> {
    use ClassName::*;
    if !label.family.admits(label.name) {
        return Err(Error::FamilyMismatch);
    }
    let format = label.family.format();
    let kets: Vec<String> = match (label.family, label.name) {
        (Family::Bipartite(k), Rank(r)) => {
            let mut amps = vec![Exact::from_i64(0); k * k];
            for i in 0..r {
                amps[i * k + i] = Exact::from_i64(1);
            }
            return StateTensor::new(format, amps);
        }
        (Family::Qubit4, _) => {
            return Err(Error::NoCanonicalRepresentative(label.name.to_string()));
        }
        (_, Ghz) => vec!["000".into(), "111".into()],
        (_, W) => vec!["001".into(), "010".into(), "100".into()],
        (_, B1) => vec!["001".into(), "010".into()],
        (_, B2) => vec!["001".into(), "100".into()],
        (_, B3) => vec!["010".into(), "100".into()],
        (_, S) => vec!["000".into()],
        (_, Gen322) => vec!["000".into(), "101".into(), "110".into(), "211".into()],
        (_, Deg322) => vec!["000".into(), "101".into(), "211".into()],
        _ => return Err(Error::FamilyMismatch),
    };
    let refs: Vec<&str> = kets.iter().map(String::as_str).collect();
    StateTensor::from_kets(&format, &refs)
}

/// Named 4-qubit exemplars: GHZ₄, W₄ and the generic-family point (2,1,1,1).
pub fn qubit4_exemplars() -> Vec<(&'static str, StateTensor<Exact>)> {
    let ghz = StateTensor::from_kets(&[2, 2, 2, 2], &["0000", "1111"]).expect("valid kets");
    let w = StateTensor::from_kets(&[2, 2, 2, 2], &["0001", "0010", "0100", "1000"]).expect("valid kets");
    let [a, b, g, d] = [2, 1, 1, 1].map(Exact::from_i64);
    let generic = build_generic4(&a, &b, &g, &d).expect("nonzero");
    vec![("GHZ4", ghz), ("W4", w), ("GENERIC4(2,1,1,1)", generic)]
}

/// Names reachable from `name` by noninvertible local operations in the
/// qubit3 / 3×2×2 hierarchy, `name` included.
fn tripartite_reach(name: ClassName) -> Vec<ClassName> {
    use ClassName::*;
    match name {
        Gen322 | Deg322 => vec![name, Ghz, W, B1, B2, B3, S],
        Ghz | W => vec![name, B1, B2, B3, S],
        B1 | B2 | B3 => vec![name, S],
        _ => vec![name],
    }
}

fn tripartite(f: Family) -> bool {
    matches!(f, Family::Qubit3 | Family::Format322)
}

/// Whether some local operator tuple, possibly noninvertible, takes a state of
/// class `from` into class `to`. Reflexive; qubit3 labels are treated as the
/// embedded 3×2×2 classes of the same name.
pub fn reachable(from: &ClassLabel, to: &ClassLabel) -> Result<bool> {
    for l in [from, to] {
        if !l.family.admits(l.name) {
            return Err(Error::FamilyMismatch);
        }
    }
    match (from.family, to.family) {
        (Family::Bipartite(a), Family::Bipartite(b)) if a == b => match (from.name, to.name) {
            (ClassName::Rank(r), ClassName::Rank(s)) => Ok(s <= r),
            _ => Err(Error::FamilyMismatch),
        },
        (Family::Qubit4, Family::Qubit4) => {
            Ok(from.name == to.name || (from.name, to.name) == (ClassName::Generic4, ClassName::Degenerate4))
        }
        (a, b) if tripartite(a) && tripartite(b) => Ok(tripartite_reach(from.name).contains(&to.name)),
        _ => Err(Error::FamilyMismatch),
    }
}

/// Every edge `(outer, inner)` of the transitively closed reachability
/// relation for a family, self-loops excluded.
pub fn reachability_edges(family: Family) -> Vec<(ClassName, ClassName)> {
    let names = family.names();
    let mut edges = Vec::new();
    for &a in &names {
        for &b in &names {
            let la = ClassLabel::named(family, a).expect("family name");
            let lb = ClassLabel::named(family, b).expect("family name");
            if a != b && reachable(&la, &lb).expect("same family") {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Pairs that no local operation converts in either direction.
pub fn forbidden_pair(a: ClassName, b: ClassName) -> bool {
    use ClassName::*;
    a != b
        && (matches!((a, b), (Ghz, W) | (W, Ghz) | (Gen322, Deg322) | (Deg322, Gen322))
            || (a.biseparable() && b.biseparable()))
}
