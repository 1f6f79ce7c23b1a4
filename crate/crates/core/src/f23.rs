//! The free Carnot group of rank 2 and step 3 in both exponential coordinate
//! systems.
//!
//! Points are generic over the scalar: exact rationals for identity checks,
//! doubles for Monte-Carlo sampling, and polynomials when a whole formula is
//! being verified as an identity. The second-kind chart is the default
//! working chart; first-kind coordinates are the `log` chart used for
//! Lie-algebra bookkeeping.

use serde::Serialize;

use crate::liecore::{CarnotAlgebra, LieVec};
use crate::scalar::{parse_rational, Q, Scalar};

/// Point in exponential coordinates of the second kind,
/// `exp(x5 X5) exp(x4 X4) ... exp(x1 X1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pt2<S>(pub [S; 5]);

/// Point in exponential coordinates of the first kind,
/// `exp(a1 X1 + ... + a5 X5)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pt1<S>(pub [S; 5]);

pub type QPt2 = Pt2<Q>;
pub type QPt1 = Pt1<Q>;
pub type FPt2 = Pt2<f64>;

impl<S: Scalar> Pt2<S> {
    pub fn origin() -> Self {
        Pt2([S::zero(), S::zero(), S::zero(), S::zero(), S::zero()])
    }

    pub fn from_ints(v: [i64; 5]) -> Self {
        Pt2(v.map(S::from_int))
    }

    /// The group law. Componentwise:
    /// (x1+y1, x2+y2, x3+y3-x1y2, x4+y4-x1y3+x1²y2/2, x5+y5+x1x2y2+x1y2²/2-x2y3).
    pub fn mul(&self, y: &Pt2<S>) -> Pt2<S> {
        let x = &self.0;
        let y = &y.0;
        let z1 = x[0].add(&y[0]);
        let z2 = x[1].add(&y[1]);
        let z3 = x[2].add(&y[2]).sub(&x[0].mul(&y[1]));
        let z4 = x[3]
            .add(&y[3])
            .sub(&x[0].mul(&y[2]))
            .add(&x[0].mul(&x[0]).mul(&y[1]).scale_ratio(1, 2));
        let z5 = x[4]
            .add(&y[4])
            .add(&x[0].mul(&x[1]).mul(&y[1]))
            .add(&x[0].mul(&y[1]).mul(&y[1]).scale_ratio(1, 2))
            .sub(&x[1].mul(&y[2]));
        Pt2([z1, z2, z3, z4, z5])
    }

    /// Change to exponential coordinates of the first kind.
    pub fn to_first(&self) -> Pt1<S> {
        let x = &self.0;
        let a3 = x[2].add(&x[0].mul(&x[1]).scale_ratio(1, 2));
        let a4 = x[3]
            .add(&x[0].mul(&x[2]).scale_ratio(1, 2))
            .add(&x[0].mul(&x[0]).mul(&x[1]).scale_ratio(1, 12));
        let a5 = x[4]
            .add(&x[1].mul(&x[2]).scale_ratio(1, 2))
            .sub(&x[0].mul(&x[1]).mul(&x[1]).scale_ratio(1, 12));
        Pt1([x[0].clone(), x[1].clone(), a3, a4, a5])
    }

    /// Group inverse, computed as `to_second(-to_first(x))`.
    pub fn inv(&self) -> Pt2<S> {
        self.to_first().neg().to_second()
    }

    /// Intrinsic dilation with weights (1,1,2,3,3).
    pub fn dilate(&self, lambda: &S) -> Pt2<S> {
        let x = &self.0;
        let l2 = lambda.mul(lambda);
        let l3 = l2.mul(lambda);
        Pt2([
            x[0].mul(lambda),
            x[1].mul(lambda),
            x[2].mul(&l2),
            x[3].mul(&l3),
            x[4].mul(&l3),
        ])
    }
}

impl<S: Scalar> Pt1<S> {
    pub fn origin() -> Self {
        Pt1([S::zero(), S::zero(), S::zero(), S::zero(), S::zero()])
    }

    pub fn from_ints(v: [i64; 5]) -> Self {
        Pt1(v.map(S::from_int))
    }

    /// First-kind group law (the BCH product in the step-3 basis).
    pub fn mul(&self, b: &Pt1<S>) -> Pt1<S> {
        let a = &self.0;
        let b = &b.0;
        // d = a2 b1 - a1 b2
        let d = a[1].mul(&b[0]).sub(&a[0].mul(&b[1]));
        let c1 = a[0].add(&b[0]);
        let c2 = a[1].add(&b[1]);
        let c3 = a[2].add(&b[2]).add(&d.scale_ratio(1, 2));
        let c4 = a[3]
            .add(&b[3])
            .add(&a[2].mul(&b[0]).sub(&a[0].mul(&b[2])).scale_ratio(1, 2))
            .add(&a[0].mul(&d.neg()).scale_ratio(1, 12))
            .add(&b[0].mul(&d).scale_ratio(1, 12));
        let c5 = a[4]
            .add(&b[4])
            .add(&a[2].mul(&b[1]).sub(&a[1].mul(&b[2])).scale_ratio(1, 2))
            .sub(&a[1].mul(&d).scale_ratio(1, 12))
            .add(&b[1].mul(&d).scale_ratio(1, 12));
        Pt1([c1, c2, c3, c4, c5])
    }

    /// First-kind inverse is negation.
    pub fn neg(&self) -> Pt1<S> {
        Pt1([
            self.0[0].neg(),
            self.0[1].neg(),
            self.0[2].neg(),
            self.0[3].neg(),
            self.0[4].neg(),
        ])
    }

    /// Change back to exponential coordinates of the second kind.
    pub fn to_second(&self) -> Pt2<S> {
        let a = &self.0;
        let x3 = a[2].sub(&a[0].mul(&a[1]).scale_ratio(1, 2));
        let x4 = a[3]
            .add(&a[0].mul(&a[0]).mul(&a[1]).scale_ratio(1, 6))
            .sub(&a[0].mul(&a[2]).scale_ratio(1, 2));
        let x5 = a[4]
            .add(&a[0].mul(&a[1]).mul(&a[1]).scale_ratio(1, 3))
            .sub(&a[1].mul(&a[2]).scale_ratio(1, 2));
        Pt2([a[0].clone(), a[1].clone(), x3, x4, x5])
    }
}

/// Coordinate vector of the i-th left-invariant frame field at `x` (i is
/// 1-based): X1 = d1, X2 = d2 - x1 d3 + x1²/2 d4 + x1x2 d5,
/// X3 = d3 - x1 d4 - x2 d5, X4 = d4, X5 = d5.
pub fn lvf<S: Scalar>(i: usize, x: &Pt2<S>) -> [S; 5] {
    let o = S::zero;
    let x1 = &x.0[0];
    let x2 = &x.0[1];
    match i {
        1 => [S::one(), o(), o(), o(), o()],
        2 => [
            o(),
            S::one(),
            x1.neg(),
            x1.mul(x1).scale_ratio(1, 2),
            x1.mul(x2),
        ],
        3 => [o(), o(), S::one(), x1.neg(), x2.neg()],
        4 => [o(), o(), o(), S::one(), o()],
        5 => [o(), o(), o(), o(), S::one()],
        _ => panic!("lvf: index must be 1..=5"),
    }
}

/// `exp(t(a X1 + X2)) = (at, t, -at²/2, a²t³/6, at³/3)`.
pub fn flow_horiz<S: Scalar>(a: &S, t: &S) -> Pt2<S> {
    let t2 = t.mul(t);
    let t3 = t2.mul(t);
    Pt2([
        a.mul(t),
        t.clone(),
        a.mul(&t2).scale_ratio(-1, 2),
        a.mul(a).mul(&t3).scale_ratio(1, 6),
        a.mul(&t3).scale_ratio(1, 3),
    ])
}

/// `exp(a X1 + b X2) = (a, b, -ab/2, a²b/6, ab²/3)` in second-kind
/// coordinates (the `t = 1` flow with a general horizontal vector).
pub fn exp_horiz<S: Scalar>(a: &S, b: &S) -> Pt2<S> {
    Pt2([
        a.clone(),
        b.clone(),
        a.mul(b).scale_ratio(-1, 2),
        a.mul(a).mul(b).scale_ratio(1, 6),
        a.mul(b).mul(b).scale_ratio(1, 3),
    ])
}

/// Homogeneous box gauge: max(|x1|, |x2|, |x3|^(1/2), |x4|^(1/3), |x5|^(1/3)).
/// Its unit ball is exactly the box [-1,1]^5, which is what the Monte-Carlo
/// sampler fills.
pub fn gauge(x: &Pt2<f64>) -> f64 {
    let v = &x.0;
    let mut g = v[0].abs().max(v[1].abs());
    g = g.max(v[2].abs().sqrt());
    g = g.max(v[3].abs().cbrt());
    g.max(v[4].abs().cbrt())
}

/// Interpret an f23 Lie-algebra element as the first-kind coordinates of its
/// exponential.
pub fn exp_lie<S: Scalar>(v: &LieVec<S>) -> Pt1<S> {
    assert_eq!(v.alg.dim, 5, "exp_lie expects the rank-2 step-3 algebra");
    Pt1([
        v.coeffs[0].clone(),
        v.coeffs[1].clone(),
        v.coeffs[2].clone(),
        v.coeffs[3].clone(),
        v.coeffs[4].clone(),
    ])
}

/// The inverse identification: first-kind coordinates as a Lie-algebra element.
pub fn log_lie<S: Scalar>(alg: &std::sync::Arc<CarnotAlgebra>, p: &Pt1<S>) -> LieVec<S> {
    assert_eq!(alg.dim, 5, "log_lie expects the rank-2 step-3 algebra");
    LieVec { alg: alg.clone(), coeffs: p.0.to_vec() }
}

impl QPt2 {
    pub fn approx(&self) -> FPt2 {
        use num_traits::ToPrimitive;
        Pt2(self.0.clone().map(|c| c.to_f64().expect("coordinate out of f64 range")))
    }
}

/// Exact point serialization: five rational strings.
#[derive(Serialize)]
pub struct PointJson {
    pub schema: u32,
    pub coords: Vec<String>,
}

pub fn pt2_strings(p: &QPt2) -> Vec<String> {
    p.0.iter().map(|c| c.to_string()).collect()
}

/// Parse `a,b,c,d,e` with each coordinate an exact rational or decimal.
pub fn parse_pt2(s: &str) -> Result<QPt2, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(format!("expected 5 comma-separated coordinates, got {}", parts.len()));
    }
    let mut out = Vec::with_capacity(5);
    for p in parts {
        out.push(parse_rational(p)?);
    }
    Ok(Pt2([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone(), out[4].clone()]))
}

pub fn parse_pt1(s: &str) -> Result<QPt1, String> {
    parse_pt2(s).map(|p| Pt1(p.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    fn qpt(v: [(i64, i64); 5]) -> QPt2 {
        Pt2(v.map(|(n, d)| q(n, d)))
    }

    #[test]
    fn mul2_examples() {
        let e1 = QPt2::from_ints([1, 0, 0, 0, 0]);
        let e2 = QPt2::from_ints([0, 1, 0, 0, 0]);
        assert_eq!(e1.mul(&e2), qpt([(1, 1), (1, 1), (-1, 1), (1, 2), (1, 2)]));
        let x = qpt([(3, 7), (-2, 5), (1, 3), (9, 4), (-5, 6)]);
        assert_eq!(x.mul(&QPt2::origin()), x);
        assert_eq!(QPt2::origin().mul(&x), x);
        assert_eq!(x.mul(&x.inv()), QPt2::origin());
    }

    #[test]
    fn mul1_examples() {
        let e1 = QPt1::from_ints([1, 0, 0, 0, 0]);
        let e2 = QPt1::from_ints([0, 1, 0, 0, 0]);
        let got = e1.mul(&e2);
        assert_eq!(got, Pt1([q(1, 1), q(1, 1), q(-1, 2), q(1, 12), q(-1, 12)]));
        let a = Pt1([q(3, 7), q(-2, 5), q(1, 3), q(9, 4), q(-5, 6)]);
        assert_eq!(a.mul(&a.neg()), QPt1::origin());
        assert_eq!(a.mul(&QPt1::origin()), a);
    }

    #[test]
    fn coords_examples() {
        let e2 = QPt2::from_ints([0, 1, 0, 0, 0]);
        assert_eq!(e2.to_first(), QPt1::from_ints([0, 1, 0, 0, 0]));
        let x = qpt([(1, 2), (-3, 4), (2, 1), (1, 5), (7, 3)]);
        assert_eq!(x.to_first().to_second(), x);
    }

    #[test]
    fn inv_examples() {
        assert_eq!(QPt2::origin().inv(), QPt2::origin());
        let x = qpt([(1, 2), (-3, 4), (2, 1), (1, 5), (7, 3)]);
        assert_eq!(x.inv().inv(), x);
        assert_eq!(x.inv().mul(&x), QPt2::origin());
    }

    #[test]
    fn lvf_examples() {
        let x = qpt([(1, 1), (1, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(lvf(1, &x), [q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)]);
        assert_eq!(
            lvf(2, &QPt2::origin()),
            [q(0, 1), q(1, 1), q(0, 1), q(0, 1), q(0, 1)]
        );
        assert_eq!(lvf(2, &x), [q(0, 1), q(1, 1), q(-1, 1), q(1, 2), q(1, 1)]);
    }

    #[test]
    fn flow_examples() {
        assert_eq!(
            flow_horiz(&q(1, 1), &q(1, 1)),
            qpt([(1, 1), (1, 1), (-1, 2), (1, 6), (1, 3)])
        );
        assert_eq!(flow_horiz(&q(5, 3), &q(0, 1)), QPt2::origin());
    }

    #[test]
    fn exp_horiz_matches_first_kind() {
        let (a, b) = (q(3, 2), q(5, 7));
        let via_first = Pt1([a.clone(), b.clone(), q(0, 1), q(0, 1), q(0, 1)]).to_second();
        assert_eq!(exp_horiz(&a, &b), via_first);
    }

    #[test]
    fn dilate_examples() {
        let x = qpt([(1, 2), (-3, 4), (2, 1), (1, 5), (7, 3)]);
        assert_eq!(x.dilate(&q(1, 1)), x);
        assert_eq!(
            QPt2::from_ints([0, 0, 1, 0, 0]).dilate(&q(2, 1)),
            qpt([(0, 1), (0, 1), (4, 1), (0, 1), (0, 1)])
        );
    }

    #[test]
    fn gauge_examples() {
        assert_eq!(gauge(&Pt2([0.0; 5])), 0.0);
        assert!((gauge(&Pt2([0.0, 0.0, 0.0, 8.0, 0.0])) - 2.0).abs() < 1e-14);
        let x = Pt2([0.3, -0.7, 0.2, -0.9, 0.05]);
        let g3 = gauge(&x.dilate(&3.0));
        assert!((g3 - 3.0 * gauge(&x)).abs() < 1e-12);
    }

    #[test]
    fn parse_points() {
        assert_eq!(
            parse_pt2("0,1,0,1/2,-0.25").unwrap(),
            qpt([(0, 1), (1, 1), (0, 1), (1, 2), (-1, 4)])
        );
        assert!(parse_pt2("1,2,3").is_err());
    }

    // exp_ad cross-check: conjugation in the group equals the e^{ad} series.
    #[test]
    fn adjoint_matches_group_conjugation() {
        use crate::liecore::{exp_ad, CarnotAlgebra, LieVec};
        let alg = CarnotAlgebra::f23();
        let x1 = LieVec::<Q>::basis(&alg, 1);
        let x2 = LieVec::<Q>::basis(&alg, 2);
        let series = exp_ad(&x1, &x2).unwrap();
        for t in [q(1, 1), q(-2, 3), q(5, 2)] {
            let ad = series.eval_at(&t);
            let g = exp_horiz(&t, &q(0, 1)); // exp(t X1)
            let conj = g.mul(&exp_horiz(&q(0, 1), &q(1, 1))).mul(&g.inv());
            assert_eq!(exp_lie(&ad), conj.to_first());
        }
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
    }

    fn small_pt2() -> impl Strategy<Value = QPt2> {
        [small_q(), small_q(), small_q(), small_q(), small_q()]
            .prop_map(|v| Pt2(v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul2_associative(x in small_pt2(), y in small_pt2(), z in small_pt2()) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn commuting_square(x in small_pt2(), y in small_pt2()) {
            prop_assert_eq!(x.mul(&y).to_first(), x.to_first().mul(&y.to_first()));
        }

        #[test]
        fn inverse_is_two_sided(x in small_pt2()) {
            prop_assert_eq!(x.mul(&x.inv()), QPt2::origin());
            prop_assert_eq!(x.inv().mul(&x), QPt2::origin());
        }

        #[test]
        fn flow_is_subgroup(a in small_q(), s in small_q(), t in small_q()) {
            let lhs = flow_horiz(&a, &s).mul(&flow_horiz(&a, &t));
            let rhs = flow_horiz(&a, &s.add(&t));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dilation_is_homomorphism(x in small_pt2(), y in small_pt2(), n in 1i64..=5, d in 1i64..=5) {
            let l = q(n, d);
            prop_assert_eq!(
                x.mul(&y).dilate(&l),
                x.dilate(&l).mul(&y.dilate(&l))
            );
        }
    }

    // flow_horiz is the integral curve of a X1 + X2: finite differences
    // converge to the frame-field combination at tolerance O(h).
    #[test]
    fn flow_integral_curve_fd() {
        let a = 0.75f64;
        let fl = |t: f64| flow_horiz(&a, &t);
        for t in [0.0, 0.4, 1.1] {
            let h = 1e-6;
            let p = fl(t);
            let pn = fl(t + h);
            let want = lvf(2, &p);
            let x1dir = lvf(1, &p);
            for i in 0..5 {
                let fd = (pn.0[i] - p.0[i]) / h;
                let target = a * x1dir[i] + want[i];
                assert!(
                    (fd - target).abs() < 1e-4,
                    "coordinate {i} at t={t}: fd={fd} target={target}"
                );
            }
        }
    }

    // left invariance: the differential of L_x maps the frame at 0 to the
    // frame at x; checked by finite differences of mul along epsilon-paths.
    #[test]
    fn lvf_left_invariance_fd() {
        let x = Pt2([0.3f64, -0.8, 0.5, 1.2, -0.4]);
        let h = 1e-6;
        for i in 1..=5usize {
            // curve through 0 with velocity lvf(i, 0): for the exponential
            // frame this is exp(h X_i) to first order
            let mut step = Pt2([0.0f64; 5]);
            step.0[i - 1] = h;
            // second-kind coordinates of exp(h X_i) agree with h e_i to O(h^2)
            let moved = x.mul(&step);
            let want = lvf(i, &x);
            for k in 0..5 {
                let fd = (moved.0[k] - x.0[k]) / h;
                assert!(
                    (fd - want[k]).abs() < 1e-4,
                    "field {i} coordinate {k}: fd={fd} want={}",
                    want[k]
                );
            }
        }
    }
}
