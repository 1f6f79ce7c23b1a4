//! Direction-propagation engine for constant-normal sets in Carnot algebras
//! of step at most 4.
//!
//! The state tracks a bracket-closed subspace I of invariant directions and
//! a list M of monotone directions reduced modulo I. Three rules grow I:
//!
//! * closure: brackets of invariant directions are invariant;
//! * the adjoint rule: for Y invariant and X monotone, `Ad_{exp(tY)} X` is
//!   monotone for every t; expanding in t and peeling coefficients from the
//!   top, an odd top degree is forced invariant (both t -> ±infinity limits
//!   are monotone), an even top degree is only monotone and stops the peel —
//!   invariant terms may be subtracted from a monotone polynomial, merely
//!   monotone ones may not (monotone directions form a cone, not a group);
//! * a single tangent promotion: when attention passes to blow-up tangents,
//!   every monotone direction with no horizontal component becomes
//!   invariant.
//!
//! Every insertion is logged with enough data to replay the derivation from
//! the initial state; the verdict is `VerticalHalfSpace` when the layers
//! above the first are exhausted by I, otherwise `Stuck` with the residual
//! layers and the obstruction trail.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::liecore::{bracket, exp_ad, CarnotAlgebra, LieVec, QLieVec};
use crate::scalar::{q, q0, Q};

#[derive(Debug, Error, PartialEq)]
pub enum RectifierError {
    #[error("the normal direction lies in the invariant span")]
    NormalInInvariantSpan,
    #[error("normal and invariant directions do not span the first layer")]
    DoesNotSpanV1,
    #[error("tangent promotion applied twice")]
    PromoteTwice,
    #[error("Y is not an invariant direction of the state")]
    NotInvariant,
    #[error("X is not a monotone direction of the state")]
    NotMonotone,
    #[error("basis index {0} out of range")]
    BadIndex(usize),
}

/// Reduced row-echelon subspace of Q^dim with exact arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<Vec<Q>>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// Residue of `v` modulo the row space.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut v = v.to_vec();
        for r in &self.rows {
            let piv = r.iter().position(|x| !Zero::is_zero(x)).expect("rows are nonzero");
            if !Zero::is_zero(&v[piv]) {
                let f = &v[piv] / &r[piv];
                for (x, y) in v.iter_mut().zip(r) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Insert a vector; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let red = self.reduce(v);
        if red.iter().all(Zero::is_zero) {
            return false;
        }
        self.rows.push(red);
        // restore reduced echelon form
        let mut rows = std::mem::take(&mut self.rows);
        rows.sort_by_key(|r| r.iter().position(|x| !Zero::is_zero(x)).unwrap_or(self.dim));
        self.rows.clear();
        for r in rows {
            let red = self.reduce(&r);
            if red.iter().any(|x| !Zero::is_zero(x)) {
                let piv = red.iter().position(|x| !Zero::is_zero(x)).unwrap();
                let p = red[piv].clone();
                let normed: Vec<Q> = red.iter().map(|x| x / &p).collect();
                // eliminate the new pivot from earlier rows
                for row in self.rows.iter_mut() {
                    if !Zero::is_zero(&row[piv]) {
                        let f = row[piv].clone();
                        for (x, y) in row.iter_mut().zip(&normed) {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
                self.rows.push(normed);
            }
        }
        self.rows
            .sort_by_key(|r| r.iter().position(|x| !Zero::is_zero(x)).unwrap_or(self.dim));
        true
    }
}

/// A monotone direction held in canonical form: reduced modulo I at the time
/// of insertion and scaled so its first nonzero coefficient has magnitude 1
/// (positive scalings preserve monotonicity, sign flips do not).
fn canonical_cone(v: &[Q]) -> Option<Vec<Q>> {
    let piv = v.iter().position(|x| !Zero::is_zero(x))?;
    let scale = Signed::abs(&v[piv]);
    Some(v.iter().map(|x| x / &scale).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stage {
    PreTangent,
    PostTangent,
}

#[derive(Clone, Debug, Serialize)]
pub enum LogEntry {
    /// [a, b] joined the invariant space.
    ClosureBracket { a: Vec<String>, b: Vec<String>, bracket: Vec<String> },
    /// Coefficient of t^degree in Ad_{exp(tY)} X, reduced mod I at the time.
    AdjointExtract {
        y: Vec<String>,
        x: Vec<String>,
        degree: usize,
        /// "invariant" for odd degrees, "monotone" for even ones
        outcome: String,
        coefficient: Vec<String>,
    },
    /// Monotone directions without horizontal part moved to I.
    TangentPromote { moved: Vec<Vec<String>> },
}

pub type DerivationLog = Vec<LogEntry>;

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn parse_vec(v: &[String]) -> Vec<Q> {
    v.iter().map(|s| crate::scalar::parse_rational(s).expect("log vectors are rationals")).collect()
}

/// Invariant/monotone direction state over a fixed algebra.
#[derive(Clone, Debug)]
pub struct DirectionState {
    pub alg: Arc<CarnotAlgebra>,
    pub invariants: RowSpace,
    pub monotones: Vec<Vec<Q>>,
    pub stage: Stage,
}

impl DirectionState {
    pub fn new(
        alg: &Arc<CarnotAlgebra>,
        normal_index: usize,
        invariant_indices: &[usize],
    ) -> Result<Self, RectifierError> {
        let dim = alg.dim;
        if normal_index == 0 || normal_index > dim {
            return Err(RectifierError::BadIndex(normal_index));
        }
        let mut invariants = RowSpace::new(dim);
        for &i in invariant_indices {
            if i == 0 || i > dim {
                return Err(RectifierError::BadIndex(i));
            }
            let mut e = vec![q0(); dim];
            e[i - 1] = q(1, 1);
            invariants.insert(&e);
        }
        let mut normal = vec![q0(); dim];
        normal[normal_index - 1] = q(1, 1);
        if invariants.contains(&normal) {
            return Err(RectifierError::NormalInInvariantSpan);
        }
        // normal + invariants must span the first layer
        let mut v1_span = invariants.clone();
        v1_span.insert(&normal);
        for i in alg.layer_indices(1) {
            let mut e = vec![q0(); dim];
            e[i] = q(1, 1);
            if !v1_span.contains(&e) {
                return Err(RectifierError::DoesNotSpanV1);
            }
        }
        Ok(DirectionState {
            alg: alg.clone(),
            invariants,
            monotones: vec![normal],
            stage: Stage::PreTangent,
        })
    }

    fn lie(&self, v: &[Q]) -> QLieVec {
        LieVec::from_coeffs(&self.alg, v.to_vec()).expect("dimension checked")
    }

    /// Replace I by its bracket closure; re-reduce M. Logs each productive
    /// bracket.
    pub fn close_invariants(&mut self, log: &mut DerivationLog) {
        loop {
            let rows = self.invariants.rows().to_vec();
            let mut changed = false;
            for a in &rows {
                for b in &rows {
                    let br = bracket(&self.lie(a), &self.lie(b)).expect("same algebra");
                    if br.is_zero() || self.invariants.contains(&br.coeffs) {
                        continue;
                    }
                    self.invariants.insert(&br.coeffs);
                    log.push(LogEntry::ClosureBracket {
                        a: strings(a),
                        b: strings(b),
                        bracket: strings(&br.coeffs),
                    });
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.reduce_monotones();
    }

    fn reduce_monotones(&mut self) {
        let mut out: Vec<Vec<Q>> = Vec::new();
        for m in &self.monotones {
            let r = self.invariants.reduce(m);
            if let Some(c) = canonical_cone(&r) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        self.monotones = out;
    }

    /// One adjoint-rule application: expand Ad_{exp(tY)} X, reduce the
    /// coefficients mod I, and peel from the top — odd top degrees join I
    /// and the peel continues; the first even top degree joins M and stops.
    pub fn adjoint_rule(
        &mut self,
        y: &[Q],
        x: &[Q],
        log: &mut DerivationLog,
    ) -> Result<bool, RectifierError> {
        if !self.invariants.contains(y) {
            return Err(RectifierError::NotInvariant);
        }
        let known = self
            .monotones
            .iter()
            .any(|m| canonical_cone(&self.invariants.reduce(x)).as_deref() == Some(m.as_slice()));
        if !known && !self.invariants.contains(x) {
            // accept only directions the state knows to be monotone
            return Err(RectifierError::NotMonotone);
        }
        let series = exp_ad(&self.lie(y), &self.lie(x)).expect("same algebra");
        let mut coeffs: Vec<Vec<Q>> =
            series.coeffs_by_degree.iter().map(|c| c.coeffs.clone()).collect();
        let mut changed = false;
        loop {
            for c in coeffs.iter_mut() {
                *c = self.invariants.reduce(c);
            }
            let top = match (1..coeffs.len()).rev().find(|&k| coeffs[k].iter().any(|v| !Zero::is_zero(v)))
            {
                Some(k) => k,
                None => break,
            };
            let coeff = coeffs[top].clone();
            if top % 2 == 1 {
                self.invariants.insert(&coeff);
                log.push(LogEntry::AdjointExtract {
                    y: strings(y),
                    x: strings(x),
                    degree: top,
                    outcome: "invariant".into(),
                    coefficient: strings(&coeff),
                });
                changed = true;
                // the mod-I reduction removes the extracted term next pass
            } else {
                let canon = canonical_cone(&coeff).expect("top coefficient is nonzero");
                if !self.monotones.contains(&canon) {
                    self.monotones.push(canon);
                    log.push(LogEntry::AdjointExtract {
                        y: strings(y),
                        x: strings(x),
                        degree: top,
                        outcome: "monotone".into(),
                        coefficient: strings(&coeff),
                    });
                    changed = true;
                }
                break;
            }
        }
        if changed {
            self.reduce_monotones();
        }
        Ok(changed)
    }

    /// The single blow-up pass: monotone directions with zero horizontal
    /// component (mod I) become invariant for almost-every tangent.
    pub fn tangent_promote(&mut self, log: &mut DerivationLog) -> Result<bool, RectifierError> {
        if self.stage == Stage::PostTangent {
            return Err(RectifierError::PromoteTwice);
        }
        self.stage = Stage::PostTangent;
        let horizontal = self.alg.layer_indices(1);
        let mut moved = Vec::new();
        let mut kept = Vec::new();
        for m in std::mem::take(&mut self.monotones) {
            let r = self.invariants.reduce(&m);
            if r.iter().all(Zero::is_zero) {
                continue;
            }
            if horizontal.iter().all(|&i| Zero::is_zero(&r[i])) {
                self.invariants.insert(&r);
                moved.push(strings(&r));
            } else {
                kept.push(m);
            }
        }
        self.monotones = kept;
        self.reduce_monotones();
        let any = !moved.is_empty();
        log.push(LogEntry::TangentPromote { moved });
        Ok(any)
    }

    /// Saturate closure + adjoint over all (Y in I-basis, X in M) pairs.
    pub fn saturate(&mut self, log: &mut DerivationLog) {
        loop {
            self.close_invariants(log);
            let mut changed = false;
            let ys = self.invariants.rows().to_vec();
            let xs = self.monotones.clone();
            for y in &ys {
                for x in &xs {
                    if self.adjoint_rule(y, x, log).unwrap_or(false) {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Layers k >= 2 whose basis vectors are not all in I.
    pub fn residual_layers(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for l in 2..=self.alg.step {
            let full = self.alg.layer_indices(l).into_iter().all(|i| {
                let mut e = vec![q0(); self.alg.dim];
                e[i] = q(1, 1);
                self.invariants.contains(&e)
            });
            if !full {
                out.push(l);
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum Verdict {
    /// Every layer above the first consists of invariant directions: for
    /// almost-every point, every tangent is a vertical half-space. Validity
    /// of the promotion and adjoint steps rests on the cited general theory;
    /// the log replays the derivation.
    VerticalHalfSpace { log: DerivationLog },
    /// The derivation stalled. `residual_layers` lists the layers not
    /// exhausted by invariant directions; `obstruction_layers` the layers of
    /// the even-degree coefficients the parity rule could not resolve, in
    /// derivation order (the first entry is the root obstruction).
    Stuck {
        residual_layers: Vec<usize>,
        obstruction_layers: Vec<usize>,
        log: DerivationLog,
    },
}

impl Verdict {
    pub fn log(&self) -> &DerivationLog {
        match self {
            Verdict::VerticalHalfSpace { log } => log,
            Verdict::Stuck { log, .. } => log,
        }
    }

    pub fn is_vertical(&self) -> bool {
        matches!(self, Verdict::VerticalHalfSpace { .. })
    }
}

/// Run the engine: saturate, promote once, saturate again, and read off the
/// verdict.
pub fn run(
    alg: &Arc<CarnotAlgebra>,
    normal_index: usize,
    invariant_indices: &[usize],
) -> Result<Verdict, RectifierError> {
    let mut log = DerivationLog::new();
    let mut state = DirectionState::new(alg, normal_index, invariant_indices)?;
    state.saturate(&mut log);
    state.tangent_promote(&mut log)?;
    state.saturate(&mut log);
    let residual = state.residual_layers();
    if residual.is_empty() {
        Ok(Verdict::VerticalHalfSpace { log })
    } else {
        let layer_of = |v: &[Q]| -> usize {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !Zero::is_zero(*c))
                .map(|(i, _)| alg.layer[i])
                .max()
                .unwrap_or(0)
        };
        let obstruction_layers = log
            .iter()
            .filter_map(|e| match e {
                LogEntry::AdjointExtract { outcome, coefficient, .. } if outcome == "monotone" => {
                    Some(layer_of(&parse_vec(coefficient)))
                }
                _ => None,
            })
            .collect();
        Ok(Verdict::Stuck { residual_layers: residual, obstruction_layers, log })
    }
}

/// Re-execute a derivation log from the initial state; the result must
/// reproduce the final invariant space, monotone list, and verdict.
pub fn replay(
    alg: &Arc<CarnotAlgebra>,
    normal_index: usize,
    invariant_indices: &[usize],
    log: &DerivationLog,
) -> Result<DirectionState, RectifierError> {
    let mut state = DirectionState::new(alg, normal_index, invariant_indices)?;
    for entry in log {
        match entry {
            LogEntry::ClosureBracket { a, b, bracket: br } => {
                // re-derive the bracket and check it matches the recorded one
                let got = bracket(&state.lie(&parse_vec(a)), &state.lie(&parse_vec(b)))
                    .expect("same algebra");
                assert_eq!(got.coeffs, parse_vec(br), "closure entry does not replay");
                state.invariants.insert(&got.coeffs);
            }
            LogEntry::AdjointExtract { y, x, degree, outcome, coefficient } => {
                let series = exp_ad(&state.lie(&parse_vec(y)), &state.lie(&parse_vec(x)))
                    .expect("same algebra");
                let raw = series
                    .coeff(*degree)
                    .map(|c| c.coeffs.clone())
                    .unwrap_or_else(|| vec![q0(); alg.dim]);
                // the recorded coefficient is the reduction at log time; it
                // must still be congruent to the raw series coefficient
                let rec = parse_vec(coefficient);
                let diff: Vec<Q> = raw.iter().zip(&rec).map(|(p, q)| p - q).collect();
                assert!(
                    state.invariants.contains(&diff),
                    "adjoint entry does not replay (degree {degree})"
                );
                if outcome == "invariant" {
                    state.invariants.insert(&rec);
                } else if let Some(c) = canonical_cone(&state.invariants.reduce(&rec)) {
                    if !state.monotones.contains(&c) {
                        state.monotones.push(c);
                    }
                }
            }
            LogEntry::TangentPromote { moved } => {
                state.stage = Stage::PostTangent;
                for v in moved {
                    state.invariants.insert(&parse_vec(v));
                }
            }
        }
    }
    state.reduce_monotones();
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, i: usize) -> Vec<Q> {
        let mut v = vec![q0(); dim];
        v[i - 1] = q(1, 1);
        v
    }

    #[test]
    fn close_invariants_examples() {
        let alg = CarnotAlgebra::f23();
        let mut st = DirectionState::new(&alg, 1, &[2]).unwrap();
        // force X3 into I, closure must pull in [X3, X2] = X5
        let mut log = DerivationLog::new();
        st.invariants.insert(&e(5, 3));
        st.close_invariants(&mut log);
        assert!(st.invariants.contains(&e(5, 5)));
        // idempotent afterwards
        let rank = st.invariants.rank();
        st.close_invariants(&mut log);
        assert_eq!(st.invariants.rank(), rank);
    }

    #[test]
    fn adjoint_rule_f23_example() {
        let alg = CarnotAlgebra::f23();
        let mut st = DirectionState::new(&alg, 1, &[2]).unwrap();
        let mut log = DerivationLog::new();
        // Ad_{exp(tX2)} X1 = X1 + tX3 - (t²/2) X5 in this convention:
        // top degree 2 even -> X5-direction joins M
        let changed = st.adjoint_rule(&e(5, 2), &e(5, 1), &mut log).unwrap();
        assert!(changed);
        assert!(st.monotones.iter().any(|m| !Zero::is_zero(&m[4])));
        assert!(!st.invariants.contains(&e(5, 3)));
        // preconditions
        assert_eq!(
            st.adjoint_rule(&e(5, 1), &e(5, 1), &mut log).unwrap_err(),
            RectifierError::NotInvariant
        );
        assert_eq!(
            st.adjoint_rule(&e(5, 2), &e(5, 4), &mut log).unwrap_err(),
            RectifierError::NotMonotone
        );
        // Y = 0 is in I and produces no change
        assert!(!st.adjoint_rule(&vec![q0(); 5], &e(5, 1), &mut log).unwrap());
    }

    #[test]
    fn adjoint_rule_f24_extracts_odd_top() {
        let alg = CarnotAlgebra::f24();
        let mut st = DirectionState::new(&alg, 1, &[2]).unwrap();
        let mut log = DerivationLog::new();
        // Ad_{exp(tX2)} X1 has top degree 3 (odd): its coefficient joins I
        st.adjoint_rule(&e(8, 2), &e(8, 1), &mut log).unwrap();
        let odd: Vec<_> = log
            .iter()
            .filter(|l| matches!(l, LogEntry::AdjointExtract { outcome, .. } if outcome == "invariant"))
            .collect();
        assert_eq!(odd.len(), 1);
        match odd[0] {
            LogEntry::AdjointExtract { degree, .. } => assert_eq!(*degree, 3),
            _ => unreachable!(),
        }
    }

    #[test]
    fn promote_examples() {
        let alg = CarnotAlgebra::f23();
        let mut st = DirectionState::new(&alg, 2, &[1]).unwrap();
        let mut log = DerivationLog::new();
        st.saturate(&mut log);
        // pre-promotion M holds the normal and the degree-2 extract
        assert_eq!(st.stage, Stage::PreTangent);
        assert!(st.monotones.len() >= 2);
        st.tangent_promote(&mut log).unwrap();
        assert_eq!(st.stage, Stage::PostTangent);
        // the normal keeps its place in M
        assert!(st.monotones.iter().any(|m| !Zero::is_zero(&m[1])));
        assert_eq!(st.tangent_promote(&mut log).unwrap_err(), RectifierError::PromoteTwice);
    }

    #[test]
    fn run_f23_both_normals() {
        let alg = CarnotAlgebra::f23();
        for (normal, inv) in [(2usize, vec![1usize]), (1, vec![2])] {
            let v = run(&alg, normal, &inv).unwrap();
            assert!(v.is_vertical(), "normal X{normal}");
            let st = replay(&alg, normal, &inv, v.log()).unwrap();
            assert!(st.residual_layers().is_empty());
        }
    }

    #[test]
    fn run_f24() {
        let alg = CarnotAlgebra::f24();
        let v = run(&alg, 2, &[1]).unwrap();
        assert!(v.is_vertical());
        let st = replay(&alg, 2, &[1], v.log()).unwrap();
        assert!(st.residual_layers().is_empty());
    }

    #[test]
    fn run_free_step5_sticks_with_layer5_obstruction() {
        let alg = CarnotAlgebra::free_nilpotent(2, 5).unwrap();
        let v = run(&alg, 1, &[2]).unwrap();
        match &v {
            Verdict::Stuck { residual_layers, obstruction_layers, .. } => {
                assert_eq!(obstruction_layers.first(), Some(&5));
                assert!(residual_layers.contains(&5));
                assert_eq!(residual_layers, &vec![2, 3, 4, 5]);
            }
            _ => panic!("expected Stuck"),
        }
        let st = replay(&alg, 1, &[2], v.log()).unwrap();
        assert_eq!(st.residual_layers(), vec![2, 3, 4, 5]);
    }

    #[test]
    fn run_rank3_step2_and_permutation_invariance() {
        let alg = CarnotAlgebra::free_nilpotent(3, 2).unwrap();
        let a = run(&alg, 1, &[2, 3]).unwrap();
        let b = run(&alg, 1, &[3, 2]).unwrap();
        assert!(a.is_vertical());
        assert!(b.is_vertical());
    }

    #[test]
    fn bad_inputs_rejected() {
        let alg = CarnotAlgebra::f23();
        assert_eq!(run(&alg, 1, &[1]).unwrap_err(), RectifierError::NormalInInvariantSpan);
        assert_eq!(run(&alg, 1, &[]).unwrap_err(), RectifierError::DoesNotSpanV1);
        assert_eq!(run(&alg, 9, &[1]).unwrap_err(), RectifierError::BadIndex(9));
    }

    #[test]
    fn invariant_space_only_grows() {
        let alg = CarnotAlgebra::f24();
        let mut st = DirectionState::new(&alg, 2, &[1]).unwrap();
        let mut log = DerivationLog::new();
        let mut last = st.invariants.rank();
        for _ in 0..4 {
            st.saturate(&mut log);
            assert!(st.invariants.rank() >= last);
            last = st.invariants.rank();
        }
    }
}
