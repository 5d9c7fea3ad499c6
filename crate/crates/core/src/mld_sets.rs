//! The combinatorial description of toric minimal log discrepancies.
//!
//! A candidate pair `(x, a)` has `x` in `(0,1]^s ∩ Q^s` and `a` in `A^s`.
//! It lies in the enlarged set `Ṽ_s(A)` when `<x^(m) - x, a> >= 0` for every
//! integer `m`, where `x^(m) = 1 + m x - ceil(m x)` componentwise, and in
//! `V_s(A)` (for `s >= 2`) when additionally each `index(x_i)` divides the
//! index of `x` with the `i`-th entry removed. The values `<x, a>` over
//! `V_s(A)`, `2 <= s <= d`, are exactly the toric mlds in codimension `d`;
//! [`realize`] and [`extract_candidate`] are the two constructions behind
//! that equality and both verify themselves against [`ToricGerm::mld_at_origin`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::germ::ToricGerm;
use crate::lattice::{ceil, index_of, int, Rational, RationalVector, SuperLattice};

/// Candidate budget for [`enumerate_mld_set`].
pub const DEFAULT_CANDIDATE_BUDGET: u128 = 50_000_000;

/// A finite set `A ⊂ [0, 1]` containing `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientSet {
    values: BTreeSet<Rational>,
}

impl CoefficientSet {
    pub fn new(values: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let values: BTreeSet<Rational> = values.into_iter().collect();
        if let Some(v) = values
            .iter()
            .find(|v| v.is_negative() || *v > &Rational::one())
        {
            return Err(Error::InvalidCoefficientSet(format!(
                "{v} is outside [0, 1]"
            )));
        }
        if !values.contains(&Rational::one()) {
            return Err(Error::InvalidCoefficientSet(
                "the set must contain 1".into(),
            ));
        }
        Ok(CoefficientSet { values })
    }

    pub fn values(&self) -> &BTreeSet<Rational> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.values.contains(v)
    }

    pub fn contains_zero(&self) -> bool {
        self.values.contains(&Rational::zero())
    }
}

impl FromStr for CoefficientSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CoefficientSet::new(crate::lattice::parse_rational_list(s)?)
    }
}

impl fmt::Display for CoefficientSet {
    /// Canonical form: ascending, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// The truncation `{a / n : a in A, 1 <= n <= n_max}` of `{1/n; n >= 1} · A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledSet {
    pub base: CoefficientSet,
    pub n_max: u64,
}

impl ScaledSet {
    pub fn new(base: CoefficientSet, n_max: u64) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidCoefficientSet(
                "n_max must be positive".into(),
            ));
        }
        Ok(ScaledSet { base, n_max })
    }

    pub fn to_set(&self) -> CoefficientSet {
        let values = self
            .base
            .values()
            .iter()
            .flat_map(|a| (1..=self.n_max).map(move |n| a / Rational::from_integer(n.into())));
        CoefficientSet::new(values).expect("1/1 * 1 = 1 is always present")
    }
}

/// `(x, a)` with `x` in `(0,1]^s` and `a` in `[0,1]^s`.
///
/// Ordered by arity, then `x`, then `a`, lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct CandidatePair {
    x: RationalVector,
    a: RationalVector,
}

#[derive(Deserialize)]
struct RawPair {
    x: RationalVector,
    a: RationalVector,
}

impl TryFrom<RawPair> for CandidatePair {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        CandidatePair::new(raw.x, raw.a.into_entries())
    }
}

impl CandidatePair {
    pub fn new(x: RationalVector, a: Vec<Rational>) -> Result<Self> {
        if x.dim() == 0 {
            return Err(Error::InvalidPair("arity must be positive".into()));
        }
        if x.dim() != a.len() {
            return Err(Error::InvalidPair(format!(
                "x has {} entries but a has {}",
                x.dim(),
                a.len()
            )));
        }
        if let Some(v) = x.iter().find(|v| !v.is_positive() || *v > &Rational::one()) {
            return Err(Error::InvalidPair(format!("x entry {v} is outside (0, 1]")));
        }
        if let Some(v) = a.iter().find(|v| v.is_negative() || *v > &Rational::one()) {
            return Err(Error::InvalidPair(format!("a entry {v} is outside [0, 1]")));
        }
        Ok(CandidatePair { x, a: a.into() })
    }

    pub fn arity(&self) -> usize {
        self.x.dim()
    }

    pub fn x(&self) -> &RationalVector {
        &self.x
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn index(&self) -> BigInt {
        self.x.index()
    }

    /// Whether every `a_i` is drawn from `set`.
    pub fn a_in(&self, set: &CoefficientSet) -> bool {
        self.a.iter().all(|v| set.contains(v))
    }

    /// Permutes `x` and `a` simultaneously.
    pub fn permuted(&self, perm: &[usize]) -> CandidatePair {
        CandidatePair {
            x: perm.iter().map(|&i| self.x[i].clone()).collect(),
            a: perm.iter().map(|&i| self.a[i].clone()).collect(),
        }
    }

    /// Appends coordinates with `x_i = 1` and the given `a_i`.
    pub fn padded_with_ones(&self, a_tail: &[Rational]) -> Result<CandidatePair> {
        let mut x = self.x.to_vec();
        x.extend(std::iter::repeat_n(Rational::one(), a_tail.len()));
        let mut a = self.a.to_vec();
        a.extend_from_slice(a_tail);
        CandidatePair::new(x.into(), a)
    }
}

impl Ord for CandidatePair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity()
            .cmp(&other.arity())
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.a.cmp(&other.a))
    }
}

impl PartialOrd for CandidatePair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CandidatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x=({}) a=({})", self.x, self.a)
    }
}

/// `<x, a> = sum_i x_i a_i`.
pub fn pairing(p: &CandidatePair) -> Rational {
    p.x.dot(&p.a)
}

/// `x^(m) = 1 + m x - ceil(m x)` componentwise; maps `(0,1]^s` to itself.
pub fn shift(x: &[Rational], m: &BigInt) -> RationalVector {
    let m = Rational::from_integer(m.clone());
    x.iter()
        .map(|v| {
            let mx = &m * v;
            Rational::one() + &mx - Rational::from_integer(ceil(&mx))
        })
        .collect()
}

/// Why a pair fails a membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    ArityBelowTwo(usize),
    /// `index(x_i)` does not divide the index of the other entries (`coordinate` is 0-based).
    IndexDoesNotDivide {
        coordinate: usize,
        index: BigInt,
        rest_index: BigInt,
    },
    /// `<x^(m) - x, a> < 0`.
    NegativeShift {
        m: BigInt,
        difference: Rational,
    },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::ArityBelowTwo(s) => write!(f, "arity {s} < 2"),
            Rejection::IndexDoesNotDivide {
                coordinate,
                index,
                rest_index,
            } => write!(
                f,
                "index(x_{})={index} does not divide {rest_index}",
                coordinate + 1
            ),
            Rejection::NegativeShift { m, difference } => {
                write!(f, "m={m} gives <x^(m)-x,a>={difference} < 0")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member,
    Rejected(Rejection),
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Member => f.write_str("yes"),
            Verdict::Rejected(r) => write!(f, "no: {r}"),
        }
    }
}

/// First `m` in `from..index(x)` with `<x^(m) - x, a> < 0`.
fn first_negative_shift(p: &CandidatePair, from: u32) -> Option<Rejection> {
    let q = p.index();
    let mut m = BigInt::from(from);
    while m < q {
        let difference = (&shift(&p.x, &m) - &p.x).dot(&p.a);
        if difference.is_negative() {
            return Some(Rejection::NegativeShift { m, difference });
        }
        m += 1;
    }
    None
}

/// Membership in `Ṽ_s`. The shift is periodic in `m` with period `index(x)`,
/// so the residues `0..index(x)` decide all of `Z`.
pub fn tilde_verdict(p: &CandidatePair) -> Verdict {
    match first_negative_shift(p, 0) {
        None => Verdict::Member,
        Some(r) => Verdict::Rejected(r),
    }
}

pub fn in_tilde_v(p: &CandidatePair) -> bool {
    tilde_verdict(p).is_member()
}

fn divisibility_failure(x: &[Rational]) -> Option<Rejection> {
    (0..x.len()).find_map(|i| {
        let index = x[i].denom().clone();
        let rest: Vec<Rational> = x
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let rest_index = index_of(&rest);
        (!rest_index.is_multiple_of(&index)).then_some(Rejection::IndexDoesNotDivide {
            coordinate: i,
            index,
            rest_index,
        })
    })
}

/// Membership in `V_s`, with the first failing condition on rejection.
pub fn v_verdict(p: &CandidatePair) -> Verdict {
    if p.arity() < 2 {
        return Verdict::Rejected(Rejection::ArityBelowTwo(p.arity()));
    }
    if let Some(r) = divisibility_failure(&p.x) {
        return Verdict::Rejected(r);
    }
    match first_negative_shift(p, 1) {
        None => Verdict::Member,
        Some(r) => Verdict::Rejected(r),
    }
}

pub fn in_v(p: &CandidatePair) -> bool {
    v_verdict(p).is_member()
}

/// Closed form of `Ṽ_1`: `a = 0`, or `x = 1/n`.
pub fn tilde_v1_classify(x: &Rational, a: &Rational) -> bool {
    debug_assert!(x.is_positive() && x <= &Rational::one());
    a.is_zero() || x.numer().is_one()
}

/// A germ of dimension `d` whose mld at the invariant point is `<x, a>`.
///
/// For `s = d` this is the standard cone in `Z^d + Z x` with `b_i = 1 - a_i`.
/// For `s < d` the cone gets the extra ray
/// `e_{d+1} = (d - s) e_1 + e_2 - sum_{i > s} e_i`, the lattice is
/// `Z^d + Z (x, 0, ..., 0)`, and the added rays carry `a_1` (for
/// `e_{s+1}, ..., e_d`) and `a_2` (for `e_{d+1}`).
pub fn realize(p: &CandidatePair, d: usize) -> Result<ToricGerm> {
    let s = p.arity();
    if s < 2 || s > d {
        return Err(Error::InvalidPair(format!("arity {s} is outside [2, {d}]")));
    }
    if let Verdict::Rejected(r) = v_verdict(p) {
        return Err(Error::NotInV(r.to_string()));
    }
    let mut generator = p.x.to_vec();
    generator.resize(d, Rational::zero());
    let lattice = SuperLattice::new(d, vec![generator.into()])?;
    let mut rays: Vec<RationalVector> = (0..d).map(|i| RationalVector::unit(d, i)).collect();
    let mut a = p.a.to_vec();
    if s < d {
        let mut extra = vec![int(0); d];
        extra[0] = int((d - s) as i64);
        extra[1] += int(1);
        for e in extra.iter_mut().skip(s) {
            *e -= int(1);
        }
        rays.push(extra.into());
        let (a1, a2) = (p.a[0].clone(), p.a[1].clone());
        a.resize(d, a1);
        a.push(a2);
    }
    let b = a.iter().map(|v| Rational::one() - v).collect();
    let germ = ToricGerm::new(lattice, rays, b)
        .map_err(|e| Error::VerificationFailed(format!("realization of {p} is invalid: {e}")))?;
    let mld = germ.mld_at_origin()?;
    let expected = pairing(p);
    if mld.value != expected {
        return Err(Error::VerificationFailed(format!(
            "realization of {p} has mld {} instead of {expected}",
            mld.value
        )));
    }
    Ok(germ)
}

/// A pair read off from the mld witness of a germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub pair: CandidatePair,
    /// Rays spanning the box that contains the witness.
    pub rays: Vec<usize>,
    pub value: Rational,
}

impl Extraction {
    /// Arity-one extractions (one-dimensional germs) are outside `V`.
    pub fn is_single_ray(&self) -> bool {
        self.pair.arity() == 1
    }
}

/// Writes the mld witness as `sum x_i e_i` over its box and pairs it with `a_i = 1 - b_i`.
pub fn extract_candidate(germ: &ToricGerm) -> Result<Extraction> {
    let mld = germ.mld_at_origin()?;
    let discrepancies = germ.ray_discrepancies();
    let a = mld
        .witness
        .rays
        .iter()
        .map(|&i| discrepancies[i].clone())
        .collect();
    let pair = CandidatePair::new(mld.witness.box_coefficients.clone().into(), a)?;
    if pairing(&pair) != mld.value {
        return Err(Error::VerificationFailed(format!(
            "extracted {pair} pairs to {} but the mld is {}",
            pairing(&pair),
            mld.value
        )));
    }
    if pair.arity() >= 2 {
        if let Verdict::Rejected(r) = v_verdict(&pair) {
            return Err(Error::VerificationFailed(format!(
                "extracted {pair} is not in V: {r}"
            )));
        }
    }
    Ok(Extraction {
        pair,
        rays: mld.witness.rays,
        value: mld.value,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub pair: CandidatePair,
    /// `n_i`, the largest integer with `e_i / n_i` in `Z^s + Z x`.
    pub multipliers: Vec<BigInt>,
}

/// Rescales a pair of `Ṽ_s(A)` into `V_s({1/n} · A)` with the same pairing:
/// `x'_i = n_i x_i`, `a'_i = a_i / n_i`.
pub fn transfer_tilde_to_v(p: &CandidatePair) -> Result<Transfer> {
    if let Verdict::Rejected(r) = tilde_verdict(p) {
        return Err(Error::NotInTildeV(r.to_string()));
    }
    if let Some(i) = p.a.iter().position(Zero::is_zero) {
        return Err(Error::ZeroCoefficient(i));
    }
    let s = p.arity();
    let lattice = SuperLattice::new(s, vec![p.x.clone()])?;
    let multipliers = (0..s)
        .map(|i| lattice.divisibility(&RationalVector::unit(s, i)))
        .collect::<Result<Vec<BigInt>>>()?;
    let x =
        p.x.iter()
            .zip(&multipliers)
            .map(|(v, n)| v * Rational::from_integer(n.clone()))
            .collect::<RationalVector>();
    let a =
        p.a.iter()
            .zip(&multipliers)
            .map(|(v, n)| v / Rational::from_integer(n.clone()))
            .collect();
    let pair = CandidatePair::new(x, a)
        .map_err(|e| Error::VerificationFailed(format!("transfer of {p} left the box: {e}")))?;
    if pairing(&pair) != pairing(p) {
        return Err(Error::VerificationFailed(format!(
            "transfer of {p} changed the pairing"
        )));
    }
    if s >= 2 {
        if let Verdict::Rejected(r) = v_verdict(&pair) {
            return Err(Error::VerificationFailed(format!(
                "transfer {pair} of {p} is not in V: {r}"
            )));
        }
    }
    Ok(Transfer { pair, multipliers })
}

#[derive(Clone, Debug)]
pub struct MldEntry {
    pub value: Rational,
    pub witness: CandidatePair,
    pub germ: ToricGerm,
}

/// The values `<x, a>` over `V_s(A)`, `2 <= s <= d`, with `index(x) <= q_max`.
///
/// This is the part of the toric mld set witnessed at index at most `q_max`,
/// not the whole set.
#[derive(Clone, Debug)]
pub struct EnumeratedMldSet {
    pub dim: usize,
    pub coefficients: CoefficientSet,
    pub q_max: u64,
    /// Ascending by value; one entry per value with its least witness.
    pub entries: Vec<MldEntry>,
}

impl EnumeratedMldSet {
    pub fn values(&self) -> Vec<Rational> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.entries.binary_search_by(|e| e.value.cmp(v)).is_ok()
    }
}

/// Every `x` in `(0,1]^s` with `index(x) = q`, as numerators over `q`.
fn vectors_of_index(s: usize, q: u64) -> Vec<RationalVector> {
    let qi = BigInt::from(q);
    let mut out = Vec::new();
    let mut nums = vec![1u64; s];
    loop {
        let g = nums
            .iter()
            .fold(qi.clone(), |acc, &n| acc.gcd(&BigInt::from(n)));
        if g.is_one() {
            out.push(
                nums.iter()
                    .map(|&n| Rational::new(n.into(), qi.clone()))
                    .collect(),
            );
        }
        let mut k = 0;
        loop {
            if k == s {
                return out;
            }
            nums[k] += 1;
            if nums[k] <= q {
                break;
            }
            nums[k] = 1;
            k += 1;
        }
    }
}

fn coefficient_tuples(set: &CoefficientSet, s: usize) -> Vec<Vec<Rational>> {
    let values: Vec<Rational> = set.values().iter().cloned().collect();
    let mut tuples: Vec<Vec<Rational>> = vec![Vec::new()];
    for _ in 0..s {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                values.iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    tuples
}

/// Upper bound on the number of `(x, a)` candidates the enumeration visits.
pub fn candidate_count(d: usize, set: &CoefficientSet, q_max: u64) -> u128 {
    let a = set.len() as u128;
    (2..=d as u32)
        .map(|s| {
            let xs: u128 = (1..=q_max as u128)
                .map(|q| q.saturating_pow(s))
                .fold(0u128, u128::saturating_add);
            xs.saturating_mul(a.saturating_pow(s))
        })
        .fold(0, u128::saturating_add)
}

pub fn enumerate_mld_set(d: usize, set: &CoefficientSet, q_max: u64) -> Result<EnumeratedMldSet> {
    enumerate_mld_set_with_budget(d, set, q_max, DEFAULT_CANDIDATE_BUDGET)
}

/// All-or-nothing: either every candidate up to the bound is examined or a
/// [`Error::ResourceLimit`] is returned before any work starts.
pub fn enumerate_mld_set_with_budget(
    d: usize,
    set: &CoefficientSet,
    q_max: u64,
    budget: u128,
) -> Result<EnumeratedMldSet> {
    if d < 2 {
        return Err(Error::InvalidPair(format!("dimension {d} < 2")));
    }
    if q_max == 0 {
        return Err(Error::InvalidPair("q_max must be positive".into()));
    }
    let required = candidate_count(d, set, q_max);
    if required > budget {
        return Err(Error::ResourceLimit { required, budget });
    }
    let best = witness_map(d, set, q_max);
    let entries = best
        .into_par_iter()
        .map(|(value, witness)| {
            let germ = realize(&witness, d)?;
            Ok(MldEntry {
                value,
                witness,
                germ,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnumeratedMldSet {
        dim: d,
        coefficients: set.clone(),
        q_max,
        entries,
    })
}

/// Value set only, without realizing witnesses as germs.
pub fn enumerate_values(d: usize, set: &CoefficientSet, q_max: u64) -> BTreeSet<Rational> {
    witness_map(d, set, q_max).into_keys().collect()
}

/// Least witness per value, scanning index classes in parallel.
fn witness_map(d: usize, set: &CoefficientSet, q_max: u64) -> BTreeMap<Rational, CandidatePair> {
    let jobs: Vec<(usize, u64)> = (2..=d)
        .flat_map(|s| (1..=q_max).map(move |q| (s, q)))
        .collect();
    let tuples: Vec<Vec<Vec<Rational>>> = (0..=d).map(|s| coefficient_tuples(set, s)).collect();
    jobs.par_iter()
        .map(|&(s, q)| {
            let mut local: BTreeMap<Rational, CandidatePair> = BTreeMap::new();
            for x in vectors_of_index(s, q) {
                if divisibility_failure(&x).is_some() {
                    continue;
                }
                // <x^(m) - x, .> for m = 1..q-1, shared by every a
                let diffs: Vec<RationalVector> =
                    (1..q).map(|m| &shift(&x, &BigInt::from(m)) - &x).collect();
                for a in &tuples[s] {
                    let a: RationalVector = a.clone().into();
                    if diffs.iter().any(|diff| diff.dot(&a).is_negative()) {
                        continue;
                    }
                    let pair = CandidatePair { x: x.clone(), a };
                    let value = pairing(&pair);
                    match local.get(&value) {
                        Some(w) if w <= &pair => {}
                        _ => {
                            local.insert(value, pair);
                        }
                    }
                }
            }
            local
        })
        .reduce(BTreeMap::new, |mut acc, other| {
            for (value, pair) in other {
                match acc.get(&value) {
                    Some(w) if w <= &pair => {}
                    _ => {
                        acc.insert(value, pair);
                    }
                }
            }
            acc
        })
}

/// `index(x)` as a machine integer, when it fits.
pub fn small_index(p: &CandidatePair) -> Option<u64> {
    p.index().to_u64()
}
