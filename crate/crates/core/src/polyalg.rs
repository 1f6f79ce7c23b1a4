//! Sparse multivariate polynomials and rational functions over exact
//! rationals.
//!
//! This is the workhorse behind every symbolic identity in the crate: the
//! degree-6 paraboloid polynomial and its first-kind twin, the three-variable
//! reachability map and its Jacobian, the coordinate-change substitutions,
//! and the cone certificates. Polynomials are kept in canonical form (no zero
//! terms, sorted variable list); rational functions are *not* reduced to
//! lowest terms — equality is decided cross-multiplicatively, which is all
//! the verifications need and avoids multivariate GCD entirely.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{q0, q1, Q, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("missing assignment for variable {0:?}")]
    MissingAssignment(String),
    #[error("evaluation point has length {got}, polynomial has {want} variables")]
    LengthMismatch { got: usize, want: usize },
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Variables are stored sorted; operations on polynomials with different
/// variable lists silently extend both to the union list, and equality is
/// semantic (x2³ equals x2³ no matter which ambient variable list it carries).
#[derive(Clone)]
pub struct MPoly {
    vars: Vec<String>,
    /// exponent vector -> nonzero coefficient, exponents as long as `vars`
    terms: BTreeMap<Vec<u32>, Q>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = MPoly::aligned(self, other);
        a.terms == b.terms
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(Vec::new(), c);
        }
        MPoly { vars: Vec::new(), terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Q::from_int(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], q1());
        MPoly { vars: vec![name.to_string()], terms }
    }

    /// Build `c * prod v_i^e_i`; repeated names accumulate exponents.
    pub fn monomial(c: Q, powers: &[(&str, u32)]) -> Self {
        let mut p = Self::constant(c);
        for (name, e) in powers {
            for _ in 0..*e {
                p = p.mul(&Self::var(name));
            }
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Q {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(q0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !Zero::is_zero(c));
        self
    }

    /// Extend to a superset variable list (names must contain all of ours).
    fn extended(&self, names: &[String]) -> MPoly {
        if self.vars == names {
            return self.clone();
        }
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| names.iter().position(|n| n == v).expect("extended: not a superset"))
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; names.len()];
            for (k, &exp) in e.iter().enumerate() {
                ne[idx[k]] = exp;
            }
            terms.insert(ne, c.clone());
        }
        MPoly { vars: names.to_vec(), terms }
    }

    fn union_vars(a: &MPoly, b: &MPoly) -> Vec<String> {
        let mut names: Vec<String> = a.vars.clone();
        for v in &b.vars {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        names.sort();
        names
    }

    pub fn aligned(a: &MPoly, b: &MPoly) -> (MPoly, MPoly) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let names = Self::union_vars(a, b);
        (a.extended(&names), b.extended(&names))
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let (mut a, b) = Self::aligned(self, other);
        for (e, c) in b.terms {
            let entry = a.terms.entry(e).or_insert_with(q0);
            *entry = &*entry + &c;
        }
        a.normalized()
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MPoly { vars: self.vars.clone(), terms }
    }

    pub fn scale(&self, c: &Q) -> MPoly {
        if Zero::is_zero(c) {
            return MPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        let terms = self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect();
        MPoly { vars: self.vars.clone(), terms }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let (a, b) = Self::aligned(self, other);
        let mut terms: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(q0);
                *entry = &*entry + &(ca * cb);
            }
        }
        MPoly { vars: a.vars, terms }.normalized()
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::constant(q1());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact formal partial derivative.
    pub fn diff(&self, var: &str) -> Result<MPoly, PolyError> {
        let i = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            let nc = c * Q::from_int(e[i] as i64);
            let entry = terms.entry(ne).or_insert_with(q0);
            *entry = &*entry + &nc;
        }
        Ok(MPoly { vars: self.vars.clone(), terms }.normalized())
    }

    /// Exact evaluation; `point` is ordered like [`Self::vars`].
    pub fn eval(&self, point: &[Q]) -> Result<Q, PolyError> {
        if point.len() != self.vars.len() {
            return Err(PolyError::LengthMismatch { got: point.len(), want: self.vars.len() });
        }
        let mut acc = q0();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = &term * &point[i];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Compose with an assignment of every variable to a rational function.
    pub fn subst(&self, assignment: &BTreeMap<String, RatFunc>) -> Result<RatFunc, PolyError> {
        for v in &self.vars {
            if !assignment.contains_key(v) {
                return Err(PolyError::MissingAssignment(v.clone()));
            }
        }
        let mut acc = RatFunc::from_poly(MPoly::zero());
        for (e, c) in &self.terms {
            let mut term = RatFunc::from_poly(MPoly::constant(c.clone()));
            for (i, &exp) in e.iter().enumerate() {
                let rf = &assignment[&self.vars[i]];
                for _ in 0..exp {
                    term = term.mul(rf);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Substitute polynomials for variables (a subst that stays polynomial).
    pub fn subst_poly(&self, assignment: &BTreeMap<String, MPoly>) -> Result<MPoly, PolyError> {
        for v in &self.vars {
            if !assignment.contains_key(v) {
                return Err(PolyError::MissingAssignment(v.clone()));
            }
        }
        let mut acc = MPoly::zero();
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            for (i, &exp) in e.iter().enumerate() {
                let p = &assignment[&self.vars[i]];
                for _ in 0..exp {
                    term = term.mul(p);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Coefficients of the polynomial viewed as univariate in `var`, constant
    /// term first. Each coefficient is a polynomial in the other variables.
    pub fn coeffs_in(&self, var: &str) -> Result<Vec<MPoly>, PolyError> {
        let i = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        let maxdeg = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(); maxdeg + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne[i] as usize;
            ne[i] = 0;
            let mono = MPoly { vars: self.vars.clone(), terms: BTreeMap::from([(ne, c.clone())]) };
            out[d] = out[d].add(&mono);
        }
        Ok(out)
    }

    /// All coefficients are nonnegative. Used by the cone certificates.
    pub fn all_coeffs_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Terms in graded-lexicographic order, largest first.
    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Q)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(ea, _), (eb, _)| {
            let da: u32 = ea.iter().sum();
            let db: u32 = eb.iter().sum();
            db.cmp(&da).then_with(|| eb.cmp(ea))
        });
        ts
    }
}

impl fmt::Display for MPoly {
    /// Canonical text form: graded-lex term order, coefficients as `num/den`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            if !One::is_one(&mag) || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut firstv = true;
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if !firstv {
                    write!(f, "*")?;
                }
                firstv = false;
                write!(f, "{}", self.vars[i])?;
                if exp > 1 {
                    write!(f, "^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl Scalar for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::constant(q1())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        MPoly::constant(Q::from_ratio(n, d))
    }
    fn add(&self, other: &Self) -> Self {
        MPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        MPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        MPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn mul_q(&self, c: &Q) -> Self {
        self.scale(c)
    }
}

/// Quotient of two polynomials. The denominator is never the zero polynomial;
/// no reduction to lowest terms is performed.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(num: MPoly) -> Self {
        RatFunc { num, den: MPoly::constant(q1()) }
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(MPoly::var(name))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, PolyError> {
        if other.num.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(RatFunc { num: self.num.mul(&other.den), den: self.den.mul(&other.num) })
    }

    /// Quotient-rule derivative: (n/d)' = (n'd - nd')/d².
    pub fn diff(&self, var: &str) -> Result<RatFunc, PolyError> {
        let var_known =
            self.num.vars().iter().any(|v| v == var) || self.den.vars().iter().any(|v| v == var);
        if !var_known {
            return Ok(RatFunc::from_poly(MPoly::zero()));
        }
        let (n, d) = (&self.num, &self.den);
        let np = if n.vars().iter().any(|v| v == var) { n.diff(var)? } else { MPoly::zero() };
        let dp = if d.vars().iter().any(|v| v == var) { d.diff(var)? } else { MPoly::zero() };
        Ok(RatFunc { num: np.mul(d).sub(&n.mul(&dp)), den: d.mul(d) })
    }

    pub fn eval(&self, assignment: &BTreeMap<String, Q>) -> Result<Q, PolyError> {
        let ev = |p: &MPoly| -> Result<Q, PolyError> {
            let point: Vec<Q> = p
                .vars()
                .iter()
                .map(|v| {
                    assignment.get(v).cloned().ok_or_else(|| PolyError::MissingAssignment(v.clone()))
                })
                .collect::<Result<_, _>>()?;
            p.eval(&point)
        };
        let d = ev(&self.den)?;
        if Zero::is_zero(&d) {
            return Err(PolyError::DenominatorVanishes);
        }
        Ok(ev(&self.num)? / d)
    }
}

/// Cross-multiplicative equality: n1·d2 == n2·d1.
impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == MPoly::constant(q1()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Exact 3x3 determinant by cofactor expansion along the first row.
pub fn det3(m: &[[MPoly; 3]; 3]) -> MPoly {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[r0][c0].mul(&m[r1][c1]).sub(&m[r0][c1].mul(&m[r1][c0]))
    };
    m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
}
