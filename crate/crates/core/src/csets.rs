//! Constructors and validators for the constant-normal example sets: the
//! two-parameter cone family and its symbolic monotonicity certificates, the
//! PDI sufficient conditions for upper-graphs, the positive-measure Cantor
//! construction with its slope witnesses, the Cantor-translated pathological
//! set, and the blow-up family with non-unique tangents.
//!
//! Membership predicates are generic over the scalar, so the same definition
//! serves the exact monotonicity suites (rationals) and the Monte-Carlo
//! sampler (doubles). Cube roots never appear: every comparison that would
//! need one is done on cubes or squares.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::f23::{exp_horiz, FPt2, Pt2, QPt2};
use crate::polyalg::{MPoly, RatFunc};
use crate::scalar::{q, q0, FieldScalar, Q, Scalar};
use crate::semigroup::{p_value, poly_p};

#[derive(Debug, Error, PartialEq)]
pub enum CsetsError {
    #[error("cone parameters must be nonnegative and not both zero")]
    BadConeParameters,
    #[error("Cantor invariant violated at level {level}: {reason}")]
    CantorInvariant { level: usize, reason: String },
    #[error("blow-up sequence needs n1 > 1")]
    BadZSpec,
    #[error("level {0} exceeds the built depth")]
    DepthExceeded(usize),
    #[error("unknown set name {0:?}")]
    UnknownSet(String),
    #[error("oracle has no claimed normal")]
    NoNormal,
}

/// Closed parameter data of a membership predicate, exact rationals only.
#[derive(Clone, Debug)]
pub enum SetDef {
    /// {x2 >= 0}
    HalfSpaceX2,
    /// complement of {x2 >= 0}; monotone the wrong way, used as a negative
    /// control in the monotonicity suite
    HalfSpaceComplement,
    /// C_{alpha,beta} = {x2 >= 0, (a x3 + b x5)^2 <= 2 x2 x4 (a + b x2)^2}
    ConeAB { alpha: Q, beta: Q },
    /// {P > 0, x2 > 0}, the open semigroup interior
    SInterior,
    /// {x2 >= 0, x4 >= 0, x5^2 <= 2 x2^3 x4}
    TheoremC,
    /// {x2 >= 0, x4 >= 0}
    Quadrant,
    /// union over t in a translation set T of TheoremC + t e5, with T given
    /// by disjoint sorted closed intervals, optionally {0}, optionally all
    /// of R: {x2 >= 0, x4 >= 0, dist(x5, T)^2 <= 2 x2^3 x4}
    TranslatedC { pieces: Vec<(Q, Q)>, include_zero: bool, full_line: bool },
}

/// A named membership predicate with its metadata.
pub struct SetOracle {
    pub name: String,
    pub def: SetDef,
    /// horizontal coefficients (n1, n2) of the claimed normal n1 X1 + n2 X2
    pub claimed_normal: Option<(Q, Q)>,
    pub is_cone: bool,
    pub notes: String,
    pieces_f: Vec<(f64, f64)>,
}

fn square<S: Scalar>(v: &S) -> S {
    v.mul(v)
}

/// dist(p, union of disjoint sorted closed intervals ∪ optional {0});
/// `None` when the set is empty.
fn dist_to_pieces<S: FieldScalar>(
    pieces: &[(S, S)],
    include_zero: bool,
    p: &S,
) -> Option<S> {
    let mut best: Option<S> = if include_zero {
        // |p| without calling an abs method
        Some(if *p >= S::zero() { p.clone() } else { p.neg() })
    } else {
        None
    };
    if !pieces.is_empty() {
        // pieces sorted by lower endpoint; the nearest interval is adjacent
        // to the insertion position
        let idx = pieces.partition_point(|(lo, _)| *lo <= *p);
        for cand in [idx.checked_sub(1), Some(idx)].into_iter().flatten() {
            if let Some((lo, hi)) = pieces.get(cand) {
                let d = if *p < *lo {
                    lo.sub(p)
                } else if *p > *hi {
                    p.sub(hi)
                } else {
                    S::zero()
                };
                best = match best {
                    Some(b) if b <= d => Some(b),
                    _ => Some(d),
                };
            }
        }
    }
    best
}

fn contains_generic<S: FieldScalar>(
    def: &SetDef,
    pieces: &[(S, S)],
    x: &Pt2<S>,
) -> bool {
    let zero = S::zero();
    let [_, x2, x3, x4, x5] = &x.0;
    match def {
        SetDef::HalfSpaceX2 => *x2 >= zero,
        SetDef::HalfSpaceComplement => *x2 < zero,
        SetDef::ConeAB { alpha, beta } => {
            if *x2 < zero {
                return false;
            }
            // the x2 = 0 slice of the closed set would admit x4 < 0 points
            // that the forward flow expels; the precisely monotone
            // representative trims the slice to x4 >= 0
            if *x2 == zero && *x4 < zero {
                return false;
            }
            let al = S::one().mul_q(alpha);
            let be = S::one().mul_q(beta);
            let lhs = square(&al.mul(x3).add(&be.mul(x5)));
            let edge = al.add(&be.mul(x2));
            let rhs = x2.mul(x4).scale_ratio(2, 1).mul(&square(&edge));
            lhs <= rhs
        }
        SetDef::SInterior => *x2 > zero && p_value(x) > zero,
        SetDef::TheoremC => {
            *x2 >= zero
                && *x4 >= zero
                && square(x5) <= x2.mul(x2).mul(x2).mul(x4).scale_ratio(2, 1)
        }
        SetDef::Quadrant => *x2 >= zero && *x4 >= zero,
        SetDef::TranslatedC { include_zero, full_line, .. } => {
            if *x2 < zero || *x4 < zero {
                return false;
            }
            if *full_line {
                return true;
            }
            match dist_to_pieces(pieces, *include_zero, x5) {
                Some(d) => square(&d) <= x2.mul(x2).mul(x2).mul(x4).scale_ratio(2, 1),
                None => false,
            }
        }
    }
}

impl SetOracle {
    fn new(name: &str, def: SetDef, normal: Option<(Q, Q)>, is_cone: bool, notes: &str) -> Self {
        let pieces_f = match &def {
            SetDef::TranslatedC { pieces, .. } => pieces
                .iter()
                .map(|(a, b)| {
                    (a.to_f64().expect("piece in f64 range"), b.to_f64().expect("piece in f64 range"))
                })
                .collect(),
            _ => Vec::new(),
        };
        SetOracle {
            name: name.to_string(),
            def,
            claimed_normal: normal,
            is_cone,
            notes: notes.to_string(),
            pieces_f,
        }
    }

    pub fn contains_q(&self, x: &QPt2) -> bool {
        let pieces: &[(Q, Q)] = match &self.def {
            SetDef::TranslatedC { pieces, .. } => pieces,
            _ => &[],
        };
        contains_generic(&self.def, pieces, x)
    }

    pub fn contains_f(&self, x: &FPt2) -> bool {
        contains_generic(&self.def, &self.pieces_f, x)
    }

    /// {x2 >= 0} with normal X2.
    pub fn half_space() -> Self {
        Self::new("halfspace", SetDef::HalfSpaceX2, Some((q0(), q(1, 1))), true, "closed half-space")
    }

    /// The complement control set: claims normal X2 but is monotone the
    /// wrong way.
    pub fn half_space_complement() -> Self {
        Self::new(
            "halfspace-complement",
            SetDef::HalfSpaceComplement,
            Some((q0(), q(1, 1))),
            false,
            "negative control for the monotonicity suite",
        )
    }

    /// The open semigroup interior {P > 0, x2 > 0}.
    pub fn s_interior() -> Self {
        Self::new(
            "S-interior",
            SetDef::SInterior,
            Some((q0(), q(1, 1))),
            true,
            "open paraboloid interior",
        )
    }

    /// E1: the cone {x2 >= 0, x4 >= 0, x5^2 <= 2 x2^3 x4}.
    pub fn e1() -> Self {
        Self::new("E1", SetDef::TheoremC, Some((q0(), q(1, 1))), true, "cube-type cone")
    }

    /// E2: the quadrant {x2 >= 0, x4 >= 0}.
    pub fn e2() -> Self {
        Self::new("E2", SetDef::Quadrant, Some((q0(), q(1, 1))), true, "quadrant blow-up limit")
    }
}

/// C_{alpha,beta} for alpha, beta >= 0 not both zero, with claimed normal X2.
///
/// Only the family endpoints (alpha = 0 or beta = 0) are dilation-invariant:
/// the mixed defining inequality has terms of different homogeneous degrees
/// ((0,1,1,1/18,0) is a member at (1,2) while its 1/2-dilate is not), so
/// `is_cone` is set accordingly.
pub fn cone_ab(alpha: &Q, beta: &Q) -> Result<SetOracle, CsetsError> {
    if alpha.is_negative() || beta.is_negative() || (Zero::is_zero(alpha) && Zero::is_zero(beta)) {
        return Err(CsetsError::BadConeParameters);
    }
    let endpoint = Zero::is_zero(alpha) || Zero::is_zero(beta);
    Ok(SetOracle::new(
        &format!("coneAB:{alpha}:{beta}"),
        SetDef::ConeAB { alpha: alpha.clone(), beta: beta.clone() },
        Some((q0(), q(1, 1))),
        endpoint,
        "two-parameter interpolation family",
    ))
}

/// Directional derivative along the frame field
/// X2 = d2 - x1 d3 + x1²/2 d4 + x1 x2 d5, as an exact polynomial operation.
pub fn x2_derivative(p: &MPoly) -> MPoly {
    let x1 = MPoly::var("x1");
    let x2 = MPoly::var("x2");
    let d = |v: &str| -> MPoly {
        if p.vars().iter().any(|n| n == v) {
            p.diff(v).expect("variable checked")
        } else {
            MPoly::zero()
        }
    };
    d("x2")
        .sub(&x1.mul(&d("x3")))
        .add(&x1.mul(&x1).scale(&q(1, 2)).mul(&d("x4")))
        .add(&x1.mul(&x2).mul(&d("x5")))
}

/// The defining polynomial 2 x2 x4 (alpha + beta x2)^2 - (alpha x3 + beta x5)^2
/// with the parameters given as polynomials (constants or symbols).
pub fn cone_defining_poly(alpha: &MPoly, beta: &MPoly) -> MPoly {
    let x2 = MPoly::var("x2");
    let x3 = MPoly::var("x3");
    let x4 = MPoly::var("x4");
    let x5 = MPoly::var("x5");
    let edge = alpha.add(&beta.mul(&x2));
    x2.mul(&x4).scale(&q(2, 1)).mul(&edge.pow(2)).sub(&alpha.mul(&x3).add(&beta.mul(&x5)).pow(2))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeCertificate {
    pub alpha: String,
    pub beta: String,
    /// d(x) = X2 applied to the defining polynomial, canonical text
    pub derivative: String,
    /// d matches its closed form
    /// 2x4(a+bx2)² + 4bx2x4(a+bx2) + 2ax1(ax3+bx5) + x1²x2(a+bx2)² - 2bx1x2(ax3+bx5)
    pub derivative_closed_form: bool,
    /// quarter-discriminant of d in x1 equals
    /// (ax3+bx5)²(a-bx2)² - 2(a+bx2)³x2x4(a+3bx2)
    pub discriminant_identity: bool,
    /// D + Pc (a-bx2)² = -2 x2 x4 (a+bx2)² [ (a+bx2)(a+3bx2) - (a-bx2)² ]
    pub decomposition_identity: bool,
    /// (a+bx2)(a+3bx2) - (a-bx2)², expanded
    pub gap_expansion: String,
    /// every coefficient of the gap is nonnegative in (alpha, beta, x2)
    pub gap_nonnegative: bool,
    /// only at (0,1): disc_x1 of the X2-derivative of P equals -6 x2² P
    pub interior_discriminant_identity: Option<bool>,
    pub passed: bool,
}

fn cone_certificate_impl(alpha: &MPoly, beta: &MPoly, label: (&str, &str)) -> ConeCertificate {
    let x1 = MPoly::var("x1");
    let x2 = MPoly::var("x2");
    let x3 = MPoly::var("x3");
    let x4 = MPoly::var("x4");
    let x5 = MPoly::var("x5");

    let pc = cone_defining_poly(alpha, beta);
    let d = x2_derivative(&pc);

    let edge = alpha.add(&beta.mul(&x2));
    let num = alpha.mul(&x3).add(&beta.mul(&x5));
    let closed = x4
        .scale(&q(2, 1))
        .mul(&edge.pow(2))
        .add(&beta.mul(&x2).mul(&x4).scale(&q(4, 1)).mul(&edge))
        .add(&alpha.mul(&x1).scale(&q(2, 1)).mul(&num))
        .add(&x1.mul(&x1).mul(&x2).mul(&edge.pow(2)))
        .sub(&beta.mul(&x1).mul(&x2).scale(&q(2, 1)).mul(&num));
    let derivative_closed_form = d == closed;

    // quarter-discriminant (b/2)² - a·c of d viewed as a quadratic in x1
    let coeffs = {
        let mut cs = d.coeffs_in("x1").expect("d depends on x1");
        cs.resize(3, MPoly::zero());
        cs
    };
    let quarter_disc = coeffs[1].scale(&q(1, 2)).pow(2).sub(&coeffs[2].mul(&coeffs[0]));
    let a_minus = alpha.sub(&beta.mul(&x2));
    let a_plus3 = alpha.add(&beta.mul(&x2).scale(&q(3, 1)));
    let d_formula = num
        .pow(2)
        .mul(&a_minus.pow(2))
        .sub(&edge.pow(3).mul(&x2).mul(&x4).scale(&q(2, 1)).mul(&a_plus3));
    let discriminant_identity = quarter_disc == d_formula;

    // gap = (a+bx2)(a+3bx2) - (a-bx2)², all coefficients nonnegative
    let gap = edge.mul(&a_plus3).sub(&a_minus.pow(2));
    let gap_nonnegative = gap.all_coeffs_nonnegative();

    // D + Pc (a-bx2)² = -2 x2 x4 (a+bx2)² gap
    let lhs = d_formula.add(&pc.mul(&a_minus.pow(2)));
    let rhs = x2.mul(&x4).scale(&q(-2, 1)).mul(&edge.pow(2)).mul(&gap);
    let decomposition_identity = lhs == rhs;

    // at (0,1) additionally pin the interior-set identity
    let is_zero_one = *alpha == MPoly::zero() && *beta == MPoly::from_int(1);
    let interior_discriminant_identity =
        is_zero_one.then(|| interior_monotonicity_certificate().discriminant_identity);

    let passed = derivative_closed_form
        && discriminant_identity
        && decomposition_identity
        && gap_nonnegative
        && interior_discriminant_identity.unwrap_or(true);
    ConeCertificate {
        alpha: label.0.to_string(),
        beta: label.1.to_string(),
        derivative: d.to_string(),
        derivative_closed_form,
        discriminant_identity,
        decomposition_identity,
        gap_expansion: gap.to_string(),
        gap_nonnegative,
        interior_discriminant_identity,
        passed,
    }
}

/// Symbolic certificate for a concrete parameter pair.
pub fn cone_ab_certificate(alpha: &Q, beta: &Q) -> Result<ConeCertificate, CsetsError> {
    if alpha.is_negative() || beta.is_negative() || (Zero::is_zero(alpha) && Zero::is_zero(beta)) {
        return Err(CsetsError::BadConeParameters);
    }
    let al = MPoly::constant(alpha.clone());
    let be = MPoly::constant(beta.clone());
    let la = alpha.to_string();
    let lb = beta.to_string();
    Ok(cone_certificate_impl(&al, &be, (&la, &lb)))
}

/// Certificate with alpha and beta as formal symbols: one run covers the
/// whole nonnegative parameter family.
pub fn cone_ab_certificate_symbolic() -> ConeCertificate {
    cone_certificate_impl(&MPoly::var("alpha"), &MPoly::var("beta"), ("alpha", "beta"))
}

#[derive(Clone, Debug, Serialize)]
pub struct InteriorCertificate {
    /// X2 P as a quadratic in x1, canonical text
    pub derivative: String,
    /// the x1-free coefficient equals 3x2²x4 - 4x2x3² - 6x3x5
    pub constant_coefficient: bool,
    /// disc_x1(X2 P) = -6 x2² P
    pub discriminant_identity: bool,
    pub passed: bool,
}

/// The monotonicity certificate of the interior set {P > 0, x2 > 0} along
/// X2: the derivative is an upward quadratic in x1 whose discriminant is
/// -6 x2² P, hence nonpositive wherever P >= 0.
pub fn interior_monotonicity_certificate() -> InteriorCertificate {
    let p = poly_p();
    let a = x2_derivative(&p);
    let mut cs = a.coeffs_in("x1").expect("A depends on x1");
    cs.resize(3, MPoly::zero());
    let constant_coefficient = cs[0]
        == MPoly::monomial(q(3, 1), &[("x2", 2), ("x4", 1)])
            .add(&MPoly::monomial(q(-4, 1), &[("x2", 1), ("x3", 2)]))
            .add(&MPoly::monomial(q(-6, 1), &[("x3", 1), ("x5", 1)]));
    let disc = cs[1].pow(2).sub(&cs[2].mul(&cs[0]).scale(&q(4, 1)));
    let discriminant_identity = disc == p.scale(&q(-6, 1)).mul(&MPoly::monomial(q(1, 1), &[("x2", 2)]));
    InteriorCertificate {
        derivative: a.to_string(),
        constant_coefficient,
        discriminant_identity,
        passed: constant_coefficient && discriminant_identity,
    }
}

// ---------------------------------------------------------------------------
// PDI sufficient conditions for upper-graphs
// ---------------------------------------------------------------------------

/// A scalar field on (x4, x5) with its partial derivatives.
pub enum Field2 {
    /// exact rational function of x4, x5
    Rational(RatFunc),
    /// sampled field: (value, d/dx4, d/dx5) at a point
    Sampled(Box<dyn Fn(f64, f64) -> (f64, f64, f64)>),
}

/// A scalar field on (x3, x4, x5) with its partial derivatives.
pub enum Field3 {
    Rational(RatFunc),
    /// sampled field: (value, d3, d4, d5)
    Sampled(Box<dyn Fn(f64, f64, f64) -> (f64, f64, f64, f64)>),
}

#[derive(Clone, Debug, Serialize)]
pub struct PdiReport {
    /// residual as an exact rational function, when the field is rational
    pub residual: Option<String>,
    /// worst residual value over the sample grid (must be <= 0 to pass)
    pub worst: f64,
    pub points_checked: usize,
    pub passed: bool,
}

/// Check (d5 F)² + 6 d4 F <= 0 on a grid of the given (x4, x5) ranges; the
/// rational route also returns the exact residual.
pub fn pdi_check_f(field: &Field2, x4_range: (f64, f64), x5_range: (f64, f64), steps: usize) -> PdiReport {
    let mut worst = f64::NEG_INFINITY;
    let mut checked = 0usize;
    let mut residual_str = None;
    let eval = |i: usize, lo: f64, hi: f64| lo + (hi - lo) * (i as f64 + 0.5) / steps as f64;
    match field {
        Field2::Rational(f) => {
            let d4 = f.diff("x4").expect("rational field");
            let d5 = f.diff("x5").expect("rational field");
            let residual = d5.mul(&d5).add(&d4.mul(&RatFunc::from_poly(MPoly::from_int(6))));
            residual_str = Some(residual.to_string());
            for i in 0..steps {
                for j in 0..steps {
                    let x4v = eval(i, x4_range.0, x4_range.1);
                    let x5v = eval(j, x5_range.0, x5_range.1);
                    let assign = std::collections::BTreeMap::from([
                        ("x4".to_string(), crate::scalar::parse_rational(&format!("{x4v}")).unwrap()),
                        ("x5".to_string(), crate::scalar::parse_rational(&format!("{x5v}")).unwrap()),
                    ]);
                    if let Ok(v) = residual.eval(&assign) {
                        worst = worst.max(v.to_f64().unwrap_or(f64::INFINITY));
                        checked += 1;
                    }
                }
            }
        }
        Field2::Sampled(f) => {
            for i in 0..steps {
                for j in 0..steps {
                    let x4v = eval(i, x4_range.0, x4_range.1);
                    let x5v = eval(j, x5_range.0, x5_range.1);
                    let (_, d4, d5) = f(x4v, x5v);
                    worst = worst.max(d5 * d5 + 6.0 * d4);
                    checked += 1;
                }
            }
        }
    }
    PdiReport { residual: residual_str, worst, points_checked: checked, passed: worst <= 1e-12 }
}

/// Check (d3 G - G d5 G)² + 2 d4 G <= 0 on a grid.
pub fn pdi_check_graph(
    field: &Field3,
    x3_range: (f64, f64),
    x4_range: (f64, f64),
    x5_range: (f64, f64),
    steps: usize,
) -> PdiReport {
    let mut worst = f64::NEG_INFINITY;
    let mut checked = 0usize;
    let mut residual_str = None;
    let eval = |i: usize, lo: f64, hi: f64| lo + (hi - lo) * (i as f64 + 0.5) / steps as f64;
    match field {
        Field3::Rational(g) => {
            let d3 = g.diff("x3").expect("rational field");
            let d4 = g.diff("x4").expect("rational field");
            let d5 = g.diff("x5").expect("rational field");
            let lin = d3.sub(&g.mul(&d5));
            let residual = lin.mul(&lin).add(&d4.mul(&RatFunc::from_poly(MPoly::from_int(2))));
            residual_str = Some(residual.to_string());
            for i in 0..steps {
                for j in 0..steps {
                    for k in 0..steps {
                        let assign = std::collections::BTreeMap::from([
                            ("x3".to_string(), crate::scalar::parse_rational(&format!("{}", eval(i, x3_range.0, x3_range.1))).unwrap()),
                            ("x4".to_string(), crate::scalar::parse_rational(&format!("{}", eval(j, x4_range.0, x4_range.1))).unwrap()),
                            ("x5".to_string(), crate::scalar::parse_rational(&format!("{}", eval(k, x5_range.0, x5_range.1))).unwrap()),
                        ]);
                        if let Ok(v) = residual.eval(&assign) {
                            worst = worst.max(v.to_f64().unwrap_or(f64::INFINITY));
                            checked += 1;
                        }
                    }
                }
            }
        }
        Field3::Sampled(g) => {
            for i in 0..steps {
                for j in 0..steps {
                    for k in 0..steps {
                        let (v, d3, d4, d5) = g(
                            eval(i, x3_range.0, x3_range.1),
                            eval(j, x4_range.0, x4_range.1),
                            eval(k, x5_range.0, x5_range.1),
                        );
                        let lin = d3 - v * d5;
                        worst = worst.max(lin * lin + 2.0 * d4);
                        checked += 1;
                    }
                }
            }
        }
    }
    PdiReport { residual: residual_str, worst, points_checked: checked, passed: worst <= 1e-12 }
}

// ---------------------------------------------------------------------------
// Cantor set, slope witnesses, pathological set
// ---------------------------------------------------------------------------

/// Gap-length sequence for the positive-measure Cantor construction.
#[derive(Clone, Debug)]
pub enum CantorSeq {
    /// a_j = 1/(j + offset)²; the default offset 4 keeps the total removed
    /// length well below 1
    InverseSquareTail { offset: u32 },
    Custom(Vec<Q>),
}

#[derive(Clone, Debug)]
pub struct CantorSpec {
    pub seq: CantorSeq,
    pub depth: usize,
}

impl CantorSpec {
    pub fn default_tail(depth: usize) -> Self {
        CantorSpec { seq: CantorSeq::InverseSquareTail { offset: 4 }, depth }
    }

    pub fn a(&self, j: usize) -> Q {
        match &self.seq {
            CantorSeq::InverseSquareTail { offset } => {
                let d = BigInt::from(j as u64 + *offset as u64);
                Q::new(BigInt::from(1), &d * &d)
            }
            CantorSeq::Custom(v) => v.get(j).cloned().unwrap_or_else(q0),
        }
    }

    pub fn partial_sum(&self, upto: usize) -> Q {
        let mut s = q0();
        for j in 0..=upto {
            s = s + self.a(j);
        }
        s
    }

    /// Validate the construction invariants through the given depth:
    /// positive gap lengths, total removed length below 1, and the
    /// divergence trend of 2^n a_n² (strictly increasing on a tail that
    /// starts no later than halfway through the range).
    pub fn validate(&self, depth: usize) -> Result<(), CsetsError> {
        for j in 0..=depth {
            if !self.a(j).is_positive() {
                return Err(CsetsError::CantorInvariant {
                    level: j,
                    reason: "gap length must be positive".into(),
                });
            }
        }
        if self.partial_sum(depth) >= q(1, 1) {
            return Err(CsetsError::CantorInvariant {
                level: depth,
                reason: "partial sums must stay below 1".into(),
            });
        }
        // 2^n a_n^2 must be strictly increasing from some m <= depth/2 on
        let val = |n: usize| -> Q {
            let a = self.a(n);
            Q::from_integer(BigInt::from(2u8).pow(n as u32)) * &a * &a
        };
        let half = (depth + 1) / 2;
        let trend_ok = (0..=half).any(|m| (m..depth).all(|n| val(n) < val(n + 1)));
        if depth > 3 && !trend_ok {
            return Err(CsetsError::CantorInvariant {
                level: depth,
                reason: "2^n a_n^2 has no increasing tail".into(),
            });
        }
        Ok(())
    }
}

/// Exact interval lists of the construction, level by level: level n holds
/// 2^(n+1) closed intervals of common length (1 - sum_{j<=n} a_j)/2^(n+1).
pub fn cantor_build(spec: &CantorSpec) -> Result<Vec<Vec<(Q, Q)>>, CsetsError> {
    spec.validate(spec.depth)?;
    let mut levels: Vec<Vec<(Q, Q)>> = Vec::with_capacity(spec.depth + 1);
    let mut current = vec![(q0(), q(1, 1))];
    for n in 0..=spec.depth {
        let gap = self_gap(spec, n);
        let mut next = Vec::with_capacity(current.len() * 2);
        for (lo, hi) in &current {
            let mid = (lo + hi) / q(2, 1);
            let half = &gap / q(2, 1);
            let left_hi = &mid - &half;
            let right_lo = &mid + &half;
            if left_hi < *lo || right_lo > *hi {
                return Err(CsetsError::CantorInvariant {
                    level: n,
                    reason: "gap exceeds interval length".into(),
                });
            }
            next.push((lo.clone(), left_hi));
            next.push((right_lo, hi.clone()));
        }
        levels.push(next.clone());
        current = next;
    }
    Ok(levels)
}

fn self_gap(spec: &CantorSpec, n: usize) -> Q {
    // |J_{n,k}| = a_n / 2^n
    spec.a(n) / Q::from_integer(BigInt::from(2u8).pow(n as u32))
}

/// Data of the n-th slope witness along the leftmost nest, all cube-exact:
/// q_n is the midpoint of the removed gap, p_n the gap endpoint toward 0,
/// q_n' the height making (q_n, q_n') a boundary point of W_mu, and the
/// slope is q_n'/q_n compared against the bound (2 mu)^(-1/3) 2^(n/3)
/// a_{n+1}^(2/3) by cubing everything.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeWitness {
    pub n: usize,
    pub q_n: String,
    pub p_n: String,
    pub q_n_prime_cubed: String,
    pub slope_cubed: String,
    pub lower_bound_cubed: String,
    pub boundary_residual: String,
    pub slope: f64,
    pub lower_bound: f64,
    pub satisfied: bool,
}

pub fn slope_witness(spec: &CantorSpec, n: usize, mu: &Q) -> Result<SlopeWitness, CsetsError> {
    if n > spec.depth {
        return Err(CsetsError::DepthExceeded(n));
    }
    spec.validate(n + 1)?;
    let two_pow = |k: usize| Q::from_integer(BigInt::from(2u8).pow(k as u32));
    // leftmost interval at level n is [0, |I_n|]
    let i_n = (q(1, 1) - spec.partial_sum(n)) / two_pow(n + 1);
    let j_n1 = spec.a(n + 1) / two_pow(n + 1);
    let q_n = &i_n / q(2, 1);
    let p_n = &q_n - &(&j_n1 / q(2, 1));
    // q_n'^3 = (|J_{n+1}|/2)^2 / mu, exactly rational
    let half_gap = &j_n1 / q(2, 1);
    let q_prime_cubed = &half_gap * &half_gap / mu;
    let slope_cubed = &q_prime_cubed / (&q_n * &q_n * &q_n);
    // bound^3 = 2^n a_{n+1}^2 / (2 mu)
    let a_next = spec.a(n + 1);
    let bound_cubed = two_pow(n) * &a_next * &a_next / (q(2, 1) * mu);
    let residual = &half_gap * &half_gap - mu * &q_prime_cubed;
    let satisfied = slope_cubed >= bound_cubed;
    Ok(SlopeWitness {
        n,
        q_n: q_n.to_string(),
        p_n: p_n.to_string(),
        q_n_prime_cubed: q_prime_cubed.to_string(),
        slope_cubed: slope_cubed.to_string(),
        lower_bound_cubed: bound_cubed.to_string(),
        boundary_residual: residual.to_string(),
        slope: slope_cubed.to_f64().map(f64::cbrt).unwrap_or(f64::NAN),
        lower_bound: bound_cubed.to_f64().map(f64::cbrt).unwrap_or(f64::NAN),
        satisfied,
    })
}

/// The Cantor-translated set: union over t in the level-depth truncation of
/// K of the translates (TheoremC + t e5).
pub fn pathological_e(spec: &CantorSpec) -> Result<SetOracle, CsetsError> {
    let levels = cantor_build(spec)?;
    let pieces = levels.last().cloned().unwrap_or_default();
    Ok(SetOracle::new(
        &format!("pathE:{}", spec.depth),
        SetDef::TranslatedC { pieces, include_zero: false, full_line: false },
        Some((q0(), q(1, 1))),
        false,
        "Cantor-translated cone union (depth-truncated)",
    ))
}

// ---------------------------------------------------------------------------
// blow-up family
// ---------------------------------------------------------------------------

/// Doubly-exponential index sequence n_{j+1} = n_j³ with n_1 > 1, driving
/// the translation set Z = {0} ∪ ∪_{j odd} ±(1/n_j³, 1/n_j].
#[derive(Clone, Debug)]
pub struct ZSpec {
    pub n1: u64,
    /// largest index j for which intervals are materialized
    pub depth: usize,
    ns: Vec<BigInt>,
}

impl ZSpec {
    pub fn new(n1: u64, depth: usize) -> Result<Self, CsetsError> {
        if n1 <= 1 || depth == 0 {
            return Err(CsetsError::BadZSpec);
        }
        let mut ns = vec![BigInt::from(n1)];
        for _ in 1..depth {
            let last = ns.last().unwrap();
            ns.push(last * last * last);
        }
        Ok(ZSpec { n1, depth, ns })
    }

    /// n_j, 1-based.
    pub fn n(&self, j: usize) -> &BigInt {
        &self.ns[j - 1]
    }

    /// The truncated translation set scaled by an exact factor: pieces of
    /// lambda * Z with j odd, j <= depth, sorted; zero is always included.
    pub fn scaled_pieces(&self, lambda: &Q) -> Vec<(Q, Q)> {
        let mut pieces: Vec<(Q, Q)> = Vec::new();
        for j in (1..=self.depth).step_by(2) {
            let nj = Q::from_integer(self.n(j).clone());
            let lo = lambda / (&nj * &nj * &nj);
            let hi = lambda / &nj;
            pieces.push((lo.clone(), hi.clone()));
            pieces.push((-hi, -lo));
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        pieces
    }

    /// Oracle for the blow-up dilation of E = ∪_{t∈Z}(C + t e5) whose
    /// translation set is lambda·Z; lambda is the cube of the zoom factor,
    /// carried exactly so no cube roots enter.
    pub fn oracle_at_zoom_cubed(&self, lambda: &Q) -> SetOracle {
        SetOracle::new(
            &format!("blowup:{lambda}"),
            SetDef::TranslatedC {
                pieces: self.scaled_pieces(lambda),
                include_zero: true,
                full_line: false,
            },
            Some((q0(), q(1, 1))),
            false,
            "dilated Cantor-of-scales translation family",
        )
    }

    /// The degenerate Z = {0} member of the family (equals E1 as a set).
    pub fn oracle_point_only() -> SetOracle {
        SetOracle::new(
            "blowup:point",
            SetDef::TranslatedC { pieces: Vec::new(), include_zero: true, full_line: false },
            Some((q0(), q(1, 1))),
            true,
            "translation set {0}",
        )
    }

    /// The Z = R member of the family (equals E2 as a set).
    pub fn oracle_full_line() -> SetOracle {
        SetOracle::new(
            "blowup:line",
            SetDef::TranslatedC { pieces: Vec::new(), include_zero: true, full_line: true },
            Some((q0(), q(1, 1))),
            true,
            "translation set R",
        )
    }
}

// ---------------------------------------------------------------------------
// monotonicity testing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct MonotoneReport {
    pub set: String,
    pub members_sampled: usize,
    pub checks: usize,
    pub violations: usize,
    /// first few violating (point, direction, time) triples, as exact strings
    pub examples: Vec<String>,
    pub passed: bool,
}

fn random_box_q<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(-8..=8), 4)
}

/// Sample members of the oracle, flow them along directions in the
/// half-space of the claimed normal for positive times, and count exits.
/// All arithmetic is exact, so a genuinely monotone representative reports
/// zero violations.
pub fn monotonicity_test(
    oracle: &SetOracle,
    n_points: usize,
    n_directions: usize,
    n_times: usize,
    seed: u64,
) -> Result<MonotoneReport, CsetsError> {
    let normal = oracle.claimed_normal.clone().ok_or(CsetsError::NoNormal)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = Vec::with_capacity(n_points);
    let mut attempts = 0usize;
    while members.len() < n_points && attempts < n_points * 4000 {
        attempts += 1;
        let p = Pt2([
            random_box_q(&mut rng),
            random_box_q(&mut rng),
            random_box_q(&mut rng),
            random_box_q(&mut rng),
            random_box_q(&mut rng),
        ]);
        if oracle.contains_q(&p) {
            members.push(p);
        }
    }
    let mut checks = 0usize;
    let mut violations = 0usize;
    let mut examples = Vec::new();
    for p in &members {
        for _ in 0..n_directions {
            // direction in the half-space of the normal: flip the sample if
            // its inner product with the normal is negative
            let mut w1 = q(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let mut w2 = q(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let inner = &normal.0 * &w1 + &normal.1 * &w2;
            if inner.is_negative() {
                w1 = -w1;
                w2 = -w2;
            }
            for _ in 0..n_times {
                let t = q(rng.gen_range(1..=12), rng.gen_range(1..=4));
                let moved = p.mul(&exp_horiz(&(&w1 * &t), &(&w2 * &t)));
                checks += 1;
                if !oracle.contains_q(&moved) {
                    violations += 1;
                    if examples.len() < 5 {
                        examples.push(format!(
                            "point {:?} direction ({w1}, {w2}) time {t}",
                            p.0.iter().map(|c| c.to_string()).collect::<Vec<_>>()
                        ));
                    }
                }
            }
        }
    }
    Ok(MonotoneReport {
        set: oracle.name.clone(),
        members_sampled: members.len(),
        checks,
        violations,
        examples,
        passed: violations == 0,
    })
}

/// Resolve a registry name: `halfspace`, `halfspace-complement`, `E1`, `E2`,
/// `S-interior`, `coneAB:α:β`, `pathE:depth`.
pub fn resolve_set(name: &str) -> Result<SetOracle, CsetsError> {
    match name {
        "halfspace" => return Ok(SetOracle::half_space()),
        "halfspace-complement" => return Ok(SetOracle::half_space_complement()),
        "E1" => return Ok(SetOracle::e1()),
        "E2" => return Ok(SetOracle::e2()),
        "S-interior" => return Ok(SetOracle::s_interior()),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("coneAB:") {
        let (a, b) = rest
            .split_once(':')
            .ok_or_else(|| CsetsError::UnknownSet(name.to_string()))?;
        let alpha =
            crate::scalar::parse_rational(a).map_err(|_| CsetsError::UnknownSet(name.to_string()))?;
        let beta =
            crate::scalar::parse_rational(b).map_err(|_| CsetsError::UnknownSet(name.to_string()))?;
        return cone_ab(&alpha, &beta);
    }
    if let Some(d) = name.strip_prefix("pathE:") {
        let depth: usize = d.parse().map_err(|_| CsetsError::UnknownSet(name.to_string()))?;
        return pathological_e(&CantorSpec::default_tail(depth));
    }
    Err(CsetsError::UnknownSet(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn cone_examples() {
        let c01 = cone_ab(&q0(), &q(1, 1)).unwrap();
        assert!(c01.contains_q(&QPt2::from_ints([0, 1, 0, 1, 1]))); // 1 <= 2
        assert!(c01.contains_q(&QPt2::from_ints([0, 0, 0, 0, 0])));
        assert!(!c01.contains_q(&QPt2::from_ints([0, -1, 0, 1, 0])));
        // C_{1,0}: x3² <= 2 x2 x4 (the instance the general formula produces)
        let c10 = cone_ab(&q(1, 1), &q0()).unwrap();
        assert!(c10.contains_q(&QPt2::from_ints([0, 1, 1, 1, 0]))); // 1 <= 2
        assert!(!c10.contains_q(&QPt2::from_ints([0, 1, 2, 1, 0]))); // 4 > 2
        // the trimmed slice: (2,0,0,-1/2,-2) satisfies the closed inequality
        // with equality but flows out of the set, so the precisely monotone
        // representative excludes it
        let bad = Pt2([q(2, 1), q0(), q0(), q(-1, 2), q(-2, 1)]);
        assert!(!c10.contains_q(&bad));
        let moved = bad.mul(&exp_horiz(&q(2, 1), &q(2, 1)));
        let al = q(1, 1);
        let lhs = (&al * &moved.0[2]).pow(2);
        let rhs = q(2, 1) * &moved.0[1] * &moved.0[3] * al.pow(2);
        assert!(lhs > rhs, "the expelled point really leaves the closed set");
        assert!(cone_ab(&q0(), &q0()).is_err());
        assert!(cone_ab(&q(-1, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn cone_certificates() {
        let sym = cone_ab_certificate_symbolic();
        assert!(sym.passed, "{sym:?}");
        // frozen CAS expansion: 6 alpha beta x2 + 2 beta^2 x2^2
        assert_eq!(sym.gap_expansion, "2*beta^2*x2^2 + 6*alpha*beta*x2");
        for (a, b) in [(0, 1), (1, 0), (1, 1), (3, 2)] {
            let cert = cone_ab_certificate(&q(a, 1), &q(b, 1)).unwrap();
            assert!(cert.passed, "({a},{b}): {cert:?}");
        }
        let c01 = cone_ab_certificate(&q0(), &q(1, 1)).unwrap();
        assert_eq!(c01.interior_discriminant_identity, Some(true));
        let interior = interior_monotonicity_certificate();
        assert!(interior.passed);
    }

    #[test]
    fn pdi_examples() {
        // F = x5²/(2 x4) on {x4 > 0}: residual is exactly -2 (x5/x4)²
        let num = MPoly::monomial(q(1, 1), &[("x5", 2)]);
        let den = MPoly::monomial(q(2, 1), &[("x4", 1)]);
        let f = Field2::Rational(RatFunc::new(num, den).unwrap());
        let report = pdi_check_f(&f, (0.1, 3.0), (-2.0, 2.0), 12);
        assert!(report.passed, "{report:?}");
        let expected = RatFunc::new(
            MPoly::monomial(q(-2, 1), &[("x5", 2)]),
            MPoly::monomial(q(1, 1), &[("x4", 2)]),
        )
        .unwrap();
        // the reported residual string is the unreduced quotient; check the
        // exact identity instead
        let got = {
            let f = RatFunc::new(
                MPoly::monomial(q(1, 1), &[("x5", 2)]),
                MPoly::monomial(q(2, 1), &[("x4", 1)]),
            )
            .unwrap();
            let d4 = f.diff("x4").unwrap();
            let d5 = f.diff("x5").unwrap();
            d5.mul(&d5).add(&d4.mul(&RatFunc::from_poly(MPoly::from_int(6))))
        };
        assert_eq!(got, expected);

        // constant graph: residual 0
        let g = Field3::Rational(RatFunc::from_poly(MPoly::constant(q(7, 2))));
        let report = pdi_check_graph(&g, (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), 4);
        assert!(report.passed);
        assert_eq!(report.worst, 0.0);

        // F = f(C x5 - x4) + g(x4) with f' in [0, 6/C²], g' <= 0, sampled
        let c = 2.0f64;
        let f = Field2::Sampled(Box::new(move |x4, x5| {
            let u = c * x5 - x4;
            let sig = 1.0 / (1.0 + (-u).exp());
            let fp = 3.0 / (c * c) * sig; // f' in (0, 3/C²)
            let val = 3.0 / (c * c) * (1.0 + (u.exp()).ln_1p()) + (-x4).exp();
            let gp = -(-x4).exp(); // g' <= 0
            (val, -fp + gp, c * fp)
        }));
        let report = pdi_check_f(&f, (-2.0, 2.0), (-2.0, 2.0), 16);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn cantor_examples() {
        let spec = CantorSpec::default_tail(3);
        let levels = cantor_build(&spec).unwrap();
        // level 0: [0, (1-a0)/2] and [(1+a0)/2, 1] with a0 = 1/16
        assert_eq!(levels[0], vec![(q0(), q(15, 32)), (q(17, 32), q(1, 1))]);
        // removed length through level n is the partial sum
        for (n, level) in levels.iter().enumerate() {
            let total: Q = level.iter().map(|(lo, hi)| hi - lo).fold(q0(), |s, l| s + l);
            assert_eq!(q(1, 1) - total, spec.partial_sum(n));
            // common length matches (1 - sum)/2^{n+1}
            let want = (q(1, 1) - spec.partial_sum(n))
                / Q::from_integer(BigInt::from(2u8).pow(n as u32 + 1));
            for (lo, hi) in level {
                assert_eq!(hi - lo, want);
            }
            assert_eq!(level.len(), 1 << (n + 1));
        }
    }

    #[test]
    fn cantor_invariant_violations() {
        // removed lengths that sum past 1
        let bad = CantorSpec { seq: CantorSeq::Custom(vec![q(1, 2), q(1, 2), q(1, 2)]), depth: 2 };
        assert!(matches!(cantor_build(&bad), Err(CsetsError::CantorInvariant { .. })));
        // geometric gaps: sum fine but 2^n a_n² collapses, no increasing tail
        let decay: Vec<Q> = (0..12).map(|j| q(1, 10) * q(1, 3).pow(j)).collect();
        let bad = CantorSpec { seq: CantorSeq::Custom(decay), depth: 11 };
        assert!(matches!(bad.validate(11), Err(CsetsError::CantorInvariant { .. })));
    }

    #[test]
    fn slope_witness_examples() {
        let spec = CantorSpec::default_tail(21);
        let w0 = slope_witness(&spec, 0, &q(1, 1)).unwrap();
        // direct hand computation: |I_0| = 15/32, q_0 = 15/64, |J_1| = 1/50,
        // p_0 = 15/64 - 1/100 = 359/1600 = |I_1|, q_0'^3 = 1/10000,
        // slope^3 = (1/10000)/(15/64)^3 = 16384/2109375
        assert_eq!(w0.q_n, "15/64");
        assert_eq!(w0.p_n, "359/1600");
        assert_eq!(w0.q_n_prime_cubed, "1/10000");
        assert_eq!(w0.slope_cubed, "16384/2109375");
        assert_eq!(w0.boundary_residual, "0");
        assert!(w0.satisfied);
        // strictly increasing slopes through n = 20, and 10x growth (cubed)
        let mut prev = w0.slope_cubed.clone();
        for n in 1..=20 {
            let w = slope_witness(&spec, n, &q(1, 1)).unwrap();
            let p: Q = crate::scalar::parse_rational(&prev).unwrap();
            let c: Q = crate::scalar::parse_rational(&w.slope_cubed).unwrap();
            assert!(c > p, "slope not increasing at n={n}");
            assert!(w.satisfied);
            prev = w.slope_cubed;
        }
        let w20: Q = crate::scalar::parse_rational(&prev).unwrap();
        let w0c: Q = crate::scalar::parse_rational(&w0.slope_cubed).unwrap();
        assert!(w20 > q(1000, 1) * w0c);
    }

    #[test]
    fn pathological_examples() {
        let spec = CantorSpec::default_tail(4);
        let e = pathological_e(&spec).unwrap();
        // x5 inside K (0 is always in K): member with x2, x4 >= 0
        assert!(e.contains_q(&QPt2::from_ints([0, 1, 0, 1, 0])));
        // x5 in the level-0 removed gap around 1/2, tiny cone cross-section
        let gap_center = Pt2([q0(), q(1, 1), q0(), q0(), q(1, 2)]);
        assert!(!e.contains_q(&gap_center));
        // slice profile: at x2 = 1 the x4-x5 slice is the W_{2 x4} profile.
        // The center of the level-0 gap sits at exact distance 1/32 from
        // every K truncation (the gap endpoints survive all levels), so
        // dist² = 2 x4 holds with equality at x4 = d²/2 and fails below it.
        let d = q(1, 32);
        let x5 = q(1, 2);
        let inside = Pt2([q0(), q(1, 1), q0(), &d * &d / q(2, 1), x5.clone()]);
        assert!(e.contains_q(&inside)); // exact equality case
        let outside = Pt2([q0(), q(1, 1), q0(), &d * &d / q(4, 1), x5]);
        assert!(!e.contains_q(&outside));
        // membership is monotone in depth: deeper truncation only shrinks
        let deeper = pathological_e(&CantorSpec::default_tail(6)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = Pt2([
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                q(rng.gen_range(-4..=8), 8),
            ]);
            if deeper.contains_q(&p) {
                assert!(e.contains_q(&p));
            }
        }
    }

    #[test]
    fn blowup_interval_examples() {
        let spec = ZSpec::new(2, 5).unwrap();
        assert_eq!(spec.n(1), &BigInt::from(2));
        assert_eq!(spec.n(2), &BigInt::from(8));
        assert_eq!(spec.n(3), &BigInt::from(512));
        // effective zoom^3 for the ell-th R-term is n_{2l+1}²: the scaled set
        // contains (1/n_{2l+1}, n_{2l+1}]
        let l = 1usize;
        let n3 = Q::from_integer(spec.n(2 * l + 1).clone());
        let lam = &n3 * &n3;
        let pieces = spec.scaled_pieces(&lam);
        let target_lo = q(1, 1) / &n3;
        let target_hi = n3.clone();
        assert!(
            pieces.iter().any(|(lo, hi)| *lo <= target_lo && *hi >= target_hi),
            "scaled Z misses (1/n3, n3]"
        );
        // effective zoom^3 for the r-term is n_{2l}²: scaled set disjoint
        // from (1/n_{2l}, n_{2l}]
        let n2 = Q::from_integer(spec.n(2 * l).clone());
        let lam = &n2 * &n2;
        let pieces = spec.scaled_pieces(&lam);
        let lo_t = q(1, 1) / &n2;
        for (lo, hi) in &pieces {
            // pieces are half-open (lo, hi]: touching endpoints do not overlap
            let overlap = !(hi <= &lo_t || lo >= &n2);
            assert!(!overlap, "piece ({lo},{hi}) intersects (1/n2, n2]");
        }
    }

    #[test]
    fn blowup_sandwich_and_degenerate() {
        let spec = ZSpec::new(2, 3).unwrap();
        let lam = q(64, 1);
        let mid = spec.oracle_at_zoom_cubed(&lam);
        let e1 = SetOracle::e1();
        let e2 = SetOracle::e2();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..400 {
            let p = Pt2([
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
            ]);
            if e1.contains_q(&p) {
                assert!(mid.contains_q(&p), "E1 not inside the dilated set at {p:?}");
            }
            if mid.contains_q(&p) {
                assert!(e2.contains_q(&p), "dilated set leaks out of E2 at {p:?}");
            }
        }
        // Z = {0}: the oracle coincides with E1
        let point = ZSpec::oracle_point_only();
        for _ in 0..400 {
            let p = Pt2([
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
            ]);
            assert_eq!(point.contains_q(&p), e1.contains_q(&p));
        }
        // Z = R: the oracle coincides with E2
        let line = ZSpec::oracle_full_line();
        for _ in 0..400 {
            let p = Pt2([
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
                random_box_q(&mut rng),
            ]);
            assert_eq!(line.contains_q(&p), e2.contains_q(&p));
        }
    }

    #[test]
    fn monotonicity_examples() {
        let ok = monotonicity_test(&SetOracle::half_space(), 40, 5, 5, 7).unwrap();
        assert!(ok.passed, "{ok:?}");
        let cone = monotonicity_test(&cone_ab(&q(1, 1), &q(1, 1)).unwrap(), 40, 5, 5, 7).unwrap();
        assert!(cone.passed, "{cone:?}");
        let bad = monotonicity_test(&SetOracle::half_space_complement(), 40, 5, 5, 7).unwrap();
        assert!(!bad.passed);
        assert!(bad.violations > 0);
    }

    #[test]
    fn mixed_cone_family_is_not_dilation_invariant() {
        let c = cone_ab(&q(1, 1), &q(2, 1)).unwrap();
        assert!(!c.is_cone);
        let p = Pt2([q0(), q(1, 1), q(1, 1), q(1, 18), q0()]);
        assert!(c.contains_q(&p));
        assert!(!c.contains_q(&p.dilate(&q(1, 2))));
    }

    #[test]
    fn cones_are_dilation_invariant() {
        let oracles = [
            SetOracle::half_space(),
            SetOracle::e1(),
            SetOracle::e2(),
            SetOracle::s_interior(),
            cone_ab(&q(1, 1), &q0()).unwrap(),
            cone_ab(&q0(), &q(3, 2)).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for o in &oracles {
            assert!(o.is_cone);
            for _ in 0..100 {
                let p = Pt2([
                    random_box_q(&mut rng),
                    random_box_q(&mut rng),
                    random_box_q(&mut rng),
                    random_box_q(&mut rng),
                    random_box_q(&mut rng),
                ]);
                let l = q(rng.gen_range(1..=8), rng.gen_range(1..=4));
                assert_eq!(o.contains_q(&p), o.contains_q(&p.dilate(&l)), "{}", o.name);
            }
        }
    }

    #[test]
    fn registry_resolves() {
        for name in ["halfspace", "E1", "E2", "S-interior", "coneAB:1:0", "coneAB:1/2:3", "pathE:4"] {
            assert!(resolve_set(name).is_ok(), "{name}");
        }
        assert!(resolve_set("nope").is_err());
        assert!(resolve_set("coneAB:0:0").is_err());
    }
}
