//! Finite-scale experiments on the limit points of toric mld sets.
//!
//! Nothing here proves a statement about an infinite set. A value `c` is
//! reported as a cluster when, across increasing index bounds, the distance
//! from `c` to the nearest other enumerated value strictly shrinks and ends
//! within the caller's radius.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{ratio, Rational};
use crate::mld_sets::{
    enumerate_mld_set, enumerate_values, in_v, pairing, CandidatePair, CoefficientSet, ScaledSet,
    Verdict,
};

pub fn default_radius() -> Rational {
    ratio(1, 8)
}

fn unit_fraction(num: u64, den: u64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// `((1/(kn+1), n/(kn+1)), (a, a))`, with value `a(n+1)/(kn+1) -> a/k`.
///
/// # Panics
/// If `k` or `n` is zero, `a` is outside `[0, 1]`, or the term fails the `V` check.
pub fn surface_family_term(k: u64, n: u64, a: &Rational) -> CandidatePair {
    assert!(k >= 1 && n >= 1, "k and n must be positive");
    let q = k * n + 1;
    let p = CandidatePair::new(
        vec![unit_fraction(1, q), unit_fraction(n, q)].into(),
        vec![a.clone(), a.clone()],
    )
    .expect("a must lie in [0, 1]");
    assert!(in_v(&p), "{p} is not in V");
    p
}

/// `((1/k, ..., 1/k), (1, ..., 1))` in dimension `d`, with value `d/k -> 0`.
///
/// # Panics
/// If `d < 2` or `k == 0`.
pub fn zero_family_term(d: usize, k: u64) -> CandidatePair {
    assert!(d >= 2 && k >= 1, "need d >= 2 and k >= 1");
    let p = CandidatePair::new(
        vec![unit_fraction(1, k); d].into(),
        vec![Rational::one(); d],
    )
    .expect("entries lie in (0, 1]");
    assert!(in_v(&p), "{p} is not in V");
    p
}

/// `((1/k, 1/k), (0, a))`, attaining `a/k`, when `0` is in `A`.
pub fn closedness_witness(k: u64, a: &Rational, set: &CoefficientSet) -> Option<CandidatePair> {
    if !set.contains_zero() || k == 0 {
        return None;
    }
    let p = CandidatePair::new(
        vec![unit_fraction(1, k); 2].into(),
        vec![Rational::zero(), a.clone()],
    )
    .ok()?;
    assert!(in_v(&p), "{p} is not in V");
    Some(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Terms `surface_family_term(k, n, a)`.
    Surface { k: u64, a: Rational },
    /// Terms `zero_family_term(d, n)`.
    Zero { d: usize },
    /// Terms `((x, 1, ..., 1), (a, 1/n, ..., 1/n))` of arity `d` over a base pair of `V`.
    Padded { base: CandidatePair, d: usize },
}

/// An explicit sequence in some `V_d` whose values converge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceFamily {
    pub kind: FamilyKind,
    set: CoefficientSet,
}

impl SequenceFamily {
    pub fn surface(k: u64, a: Rational, set: CoefficientSet) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPair("k must be positive".into()));
        }
        if !set.contains(&a) {
            return Err(Error::InvalidCoefficientSet(format!(
                "{a} is not in {{{set}}}"
            )));
        }
        Ok(SequenceFamily {
            kind: FamilyKind::Surface { k, a },
            set,
        })
    }

    pub fn zero(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidPair(format!("dimension {d} < 2")));
        }
        Ok(SequenceFamily {
            kind: FamilyKind::Zero { d },
            set: CoefficientSet::new([Rational::one()])?,
        })
    }

    pub fn padded(base: CandidatePair, d: usize, set: CoefficientSet) -> Result<Self> {
        if let Verdict::Rejected(r) = crate::mld_sets::v_verdict(&base) {
            return Err(Error::NotInV(r.to_string()));
        }
        if !base.a_in(&set) {
            return Err(Error::InvalidCoefficientSet(format!(
                "{base} has coefficients outside {{{set}}}"
            )));
        }
        if d <= base.arity() {
            return Err(Error::InvalidPair(format!(
                "padding needs d > {}, got {d}",
                base.arity()
            )));
        }
        Ok(SequenceFamily {
            kind: FamilyKind::Padded { base, d },
            set,
        })
    }

    /// Coefficient set the `n`-th term is drawn from.
    pub fn declared_set(&self, n: u64) -> CoefficientSet {
        match &self.kind {
            FamilyKind::Padded { .. } => ScaledSet::new(self.set.clone(), n.max(1))
                .expect("n_max >= 1")
                .to_set(),
            _ => self.set.clone(),
        }
    }

    pub fn limit(&self) -> Rational {
        match &self.kind {
            FamilyKind::Surface { k, a } => a / Rational::from_integer((*k).into()),
            FamilyKind::Zero { .. } => Rational::zero(),
            FamilyKind::Padded { base, .. } => pairing(base),
        }
    }

    /// The `n`-th term (`n >= 1`), checked against `V` over [`Self::declared_set`].
    pub fn term(&self, n: u64) -> Result<CandidatePair> {
        if n == 0 {
            return Err(Error::InvalidPair("terms are indexed from 1".into()));
        }
        let p = match &self.kind {
            FamilyKind::Surface { k, a } => surface_family_term(*k, n, a),
            FamilyKind::Zero { d } => zero_family_term(*d, n),
            FamilyKind::Padded { base, d } => {
                let tail = vec![unit_fraction(1, n); d - base.arity()];
                base.padded_with_ones(&tail)?
            }
        };
        let set = self.declared_set(n);
        if !p.a_in(&set) {
            return Err(Error::VerificationFailed(format!(
                "{p} has coefficients outside {{{set}}}"
            )));
        }
        if let Verdict::Rejected(r) = crate::mld_sets::v_verdict(&p) {
            return Err(Error::VerificationFailed(format!("{p} is not in V: {r}")));
        }
        Ok(p)
    }
}

/// Distance from `target` to the nearest value in `sorted` other than itself.
fn nearest_other(sorted: &[Rational], target: &Rational) -> Option<(Rational, Rational)> {
    let pos = sorted.partition_point(|v| v < target);
    let below = pos.checked_sub(1).map(|i| &sorted[i]);
    let above = sorted[pos..].iter().find(|v| *v != target);
    [below, above]
        .into_iter()
        .flatten()
        .map(|v| (v.clone(), (v - target).abs()))
        .min_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageGap {
    pub stage: u64,
    /// Whether the target itself was enumerated at this stage.
    pub attained: bool,
    pub nearest: Option<Rational>,
    pub gap: Option<Rational>,
}

/// How the enumerated values approach one predicted limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetTrace {
    pub target: Rational,
    pub stages: Vec<StageGap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub limit: Rational,
    /// Gap per stage, strictly decreasing.
    pub gaps: Vec<Rational>,
    /// Within the radius of some predicted value.
    pub predicted: bool,
}

#[derive(Clone, Debug)]
pub struct AccumulationReport {
    pub dim: usize,
    pub coefficients: CoefficientSet,
    pub stages: Vec<u64>,
    pub radius: Rational,
    /// `{0}`, `{1/n} · A` and the enumerated values in dimensions `2..d` over it,
    /// all truncated at the last stage.
    pub predicted: BTreeSet<Rational>,
    pub targets: Vec<TargetTrace>,
    pub clusters: Vec<Cluster>,
    /// Number of enumerated values at each stage.
    pub value_counts: Vec<usize>,
}

impl AccumulationReport {
    /// Clusters away from every predicted value.
    pub fn flags(&self) -> Vec<&Cluster> {
        self.clusters.iter().filter(|c| !c.predicted).collect()
    }

    pub fn inclusion_holds(&self) -> bool {
        self.clusters.iter().all(|c| c.predicted)
    }

    /// Whether equality of the limit set is expected: `d = 2`, or `A` closed
    /// under `a -> a/n` (impossible for a finite `A` containing `1`).
    pub fn equality_expected(&self) -> bool {
        self.dim == 2
    }

    /// Predicted values that showed up as clusters.
    pub fn observed_predictions(&self) -> Vec<Rational> {
        self.clusters
            .iter()
            .filter(|c| self.predicted.contains(&c.limit))
            .map(|c| c.limit.clone())
            .collect()
    }

    /// Rows `stage,target,nearest,gap`, one per predicted target and stage.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["stage", "target", "nearest", "gap"])
            .map_err(err)?;
        let opt = |v: &Option<Rational>| v.as_ref().map(ToString::to_string).unwrap_or_default();
        for t in &self.targets {
            for s in &t.stages {
                w.write_record([
                    s.stage.to_string(),
                    t.target.to_string(),
                    opt(&s.nearest),
                    opt(&s.gap),
                ])
                .map_err(err)?;
            }
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let stages: Vec<String> = self.stages.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            s,
            "accumulation experiment (finite-scale, not a proof): d={} A={{{}}} stages={} radius={}",
            self.dim,
            self.coefficients,
            stages.join(","),
            self.radius
        );
        let counts: Vec<String> = self.value_counts.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "values per stage: {}", counts.join(","));
        let _ = writeln!(s, "predicted limit values: {}", self.predicted.len());
        for c in &self.clusters {
            let gaps: Vec<String> = c.gaps.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                s,
                "cluster at {}: gaps {}{}",
                c.limit,
                gaps.join(" > "),
                if c.predicted {
                    ""
                } else {
                    "  OUTSIDE PREDICTED SET"
                }
            );
        }
        let _ = writeln!(
            s,
            "inclusion: {}",
            if self.inclusion_holds() {
                "holds"
            } else {
                "VIOLATED"
            }
        );
        let observed = self.observed_predictions().len();
        let _ = write!(
            s,
            "predicted values seen as clusters: {observed}/{} (equality {})",
            self.predicted.len(),
            if self.equality_expected() {
                "expected in the limit"
            } else {
                "not expected; inclusion only"
            }
        );
        s
    }
}

/// `{0} ∪ {1/n}·A ∪ values in dimensions 2..d over {1/n}·A`, truncated at `n_max`.
pub fn predicted_limits(d: usize, set: &CoefficientSet, n_max: u64) -> Result<BTreeSet<Rational>> {
    let scaled = ScaledSet::new(set.clone(), n_max)?.to_set();
    let mut out: BTreeSet<Rational> = scaled.values().clone();
    out.insert(Rational::zero());
    for d_low in 2..d {
        out.extend(enumerate_values(d_low, &scaled, n_max));
    }
    Ok(out)
}

pub fn accumulation_report(
    d: usize,
    set: &CoefficientSet,
    stages: &[u64],
    radius: &Rational,
) -> Result<AccumulationReport> {
    if stages.is_empty() || stages[0] == 0 || stages.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPair(
            "stages must be positive and strictly increasing".into(),
        ));
    }
    if !radius.is_positive() {
        return Err(Error::InvalidPair("radius must be positive".into()));
    }
    let per_stage: Vec<Vec<Rational>> = stages
        .par_iter()
        .map(|&q| enumerate_mld_set(d, set, q).map(|e| e.values()))
        .collect::<Result<_>>()?;
    let last = *stages.last().expect("nonempty");
    let predicted = predicted_limits(d, set, last)?;

    let targets = predicted
        .iter()
        .map(|t| TargetTrace {
            target: t.clone(),
            stages: stages
                .iter()
                .zip(&per_stage)
                .map(|(&stage, values)| {
                    let near = nearest_other(values, t);
                    StageGap {
                        stage,
                        attained: values.binary_search(t).is_ok(),
                        nearest: near.as_ref().map(|n| n.0.clone()),
                        gap: near.map(|n| n.1),
                    }
                })
                .collect(),
        })
        .collect();

    let candidates: BTreeSet<Rational> = per_stage
        .last()
        .expect("nonempty")
        .iter()
        .chain(&predicted)
        .cloned()
        .collect();
    let clusters = candidates
        .into_iter()
        .filter_map(|c| {
            let gaps: Vec<Rational> = per_stage
                .iter()
                .map(|values| nearest_other(values, &c).map(|n| n.1))
                .collect::<Option<_>>()?;
            let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
            let close = gaps.last().is_some_and(|g| g <= radius);
            (shrinking && close).then(|| Cluster {
                predicted: predicted.iter().any(|p| (p - &c).abs() <= *radius),
                limit: c,
                gaps,
            })
        })
        .collect();

    Ok(AccumulationReport {
        dim: d,
        coefficients: set.clone(),
        stages: stages.to_vec(),
        radius: radius.clone(),
        predicted,
        targets,
        clusters,
        value_counts: per_stage.iter().map(Vec::len).collect(),
    })
}

/// Smallest `|v - target|` over `v` in the vector, or `None` if empty.
pub fn distance_to(values: &[Rational], target: &Rational) -> Option<Rational> {
    values.iter().map(|v| (v - target).abs()).min()
}

/// `|a(n+1)/(kn+1) - a/k|` for `a = 1`, namely `(k-1) / (k(kn+1))`.
pub fn surface_gap(k: u64, n: u64) -> Rational {
    Rational::new((k - 1).into(), (k * (k * n + 1)).into())
}
