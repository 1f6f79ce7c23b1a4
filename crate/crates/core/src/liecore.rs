//! Graded free nilpotent Lie algebra arithmetic.
//!
//! A [`CarnotAlgebra`] is given by a basis, a layer assignment, and structure
//! constants; construction validates antisymmetry, grading, and the Jacobi
//! identity exactly. On top of that: brackets of generic-scalar vectors,
//! `e^{ad}` expansions as polynomials in a formal parameter, the
//! Baker-Campbell-Hausdorff product up to step 4, and intrinsic dilations.
//!
//! Free nilpotent algebras of any rank and step are built inside the
//! truncated tensor algebra, so their structure constants come out of exact
//! linear algebra rather than a hand-maintained table.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{q0, q1, Q, Scalar};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("vectors belong to different algebras ({0} vs {1})")]
    AlgebraMismatch(String, String),
    #[error("bracket [{i},{j}] violates antisymmetry")]
    Antisymmetry { i: usize, j: usize },
    #[error("bracket [{i},{j}] leaves the graded layer (expected layer {want})")]
    Grading { i: usize, j: usize, want: usize },
    #[error("Jacobi identity fails on basis triple ({i},{j},{k})")]
    Jacobi { i: usize, j: usize, k: usize },
    #[error("coefficient vector has length {got}, algebra dimension is {want}")]
    Dimension { got: usize, want: usize },
    #[error("BCH is implemented for step <= 4, algebra has step {0}")]
    StepTooLarge(usize),
    #[error("layer list does not match dimension/step")]
    BadLayers,
    #[error("invalid structure table: {0}")]
    BadTable(String),
}

type SparseVec = Vec<(usize, Q)>;

/// A stratified nilpotent Lie algebra presented by structure constants.
pub struct CarnotAlgebra {
    pub name: String,
    pub dim: usize,
    pub step: usize,
    /// 1-based layer of each basis element.
    pub layer: Vec<usize>,
    /// `table[i][j]` is the expansion of `[e_i, e_j]` in the basis.
    table: Vec<Vec<SparseVec>>,
}

impl fmt::Debug for CarnotAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CarnotAlgebra({}, dim {}, step {})", self.name, self.dim, self.step)
    }
}

impl CarnotAlgebra {
    /// Build and validate an algebra. `brackets` lists `[e_i, e_j] = sum c_k e_k`
    /// for i > j (1-based); the antisymmetric counterparts are filled in.
    pub fn new(
        name: &str,
        layer: Vec<usize>,
        brackets: &[(usize, usize, Vec<(usize, Q)>)],
    ) -> Result<Arc<Self>, LieError> {
        let dim = layer.len();
        let step = layer.iter().copied().max().unwrap_or(0);
        if dim == 0 || layer.iter().any(|&l| l == 0 || l > step) {
            return Err(LieError::BadLayers);
        }
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for (i, j, expansion) in brackets {
            let (i, j) = (*i - 1, *j - 1);
            let cleaned: SparseVec = expansion
                .iter()
                .filter(|(_, c)| !Zero::is_zero(c))
                .map(|(k, c)| (*k - 1, c.clone()))
                .collect();
            table[i][j] = cleaned.clone();
            table[j][i] = cleaned.iter().map(|(k, c)| (*k, -c)).collect();
        }
        let alg = CarnotAlgebra { name: name.to_string(), dim, step, layer, table };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    fn validate(&self) -> Result<(), LieError> {
        let dim = self.dim;
        let dense = |sv: &SparseVec| {
            let mut v = vec![q0(); dim];
            for (k, c) in sv {
                v[*k] = &v[*k] + c;
            }
            v
        };
        for i in 0..dim {
            for j in 0..dim {
                let a = dense(&self.table[i][j]);
                let b = dense(&self.table[j][i]);
                if (0..dim).any(|k| a[k] != -&b[k]) {
                    return Err(LieError::Antisymmetry { i: i + 1, j: j + 1 });
                }
                let want = self.layer[i] + self.layer[j];
                for (k, c) in &self.table[i][j] {
                    if !Zero::is_zero(c) && self.layer[*k] != want {
                        return Err(LieError::Grading { i: i + 1, j: j + 1, want });
                    }
                }
                if want > self.step && !self.table[i][j].is_empty() {
                    return Err(LieError::Grading { i: i + 1, j: j + 1, want });
                }
            }
        }
        // Jacobi on all basis triples, exactly
        let bb = |i: usize, j: usize| -> Vec<Q> { dense(&self.table[i][j]) };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let mut acc = vec![q0(); dim];
                    let mut add_term = |outer: usize, inner: &Vec<Q>| {
                        for (m, c) in inner.iter().enumerate() {
                            if Zero::is_zero(c) {
                                continue;
                            }
                            for (t, s) in &self.table[outer][m] {
                                acc[*t] = &acc[*t] + &(c * s);
                            }
                        }
                    };
                    add_term(i, &bb(j, k));
                    add_term(j, &bb(k, i));
                    add_term(k, &bb(i, j));
                    if acc.iter().any(|c| !Zero::is_zero(c)) {
                        return Err(LieError::Jacobi { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        Ok(())
    }

    /// Indices (0-based) of the basis elements in a given layer.
    pub fn layer_indices(&self, l: usize) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.layer[i] == l).collect()
    }

    /// The sparse bracket `[e_i, e_j]` (0-based indices).
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i][j]
    }

    /// The free Carnot algebra of rank 2 and step 3 in the basis with
    /// X3 = [X2,X1], X4 = [X3,X1], X5 = [X3,X2].
    pub fn f23() -> Arc<Self> {
        Self::new(
            "f23",
            vec![1, 1, 2, 3, 3],
            &[
                (2, 1, vec![(3, q1())]),
                (3, 1, vec![(4, q1())]),
                (3, 2, vec![(5, q1())]),
            ],
        )
        .expect("f23 structure constants are valid")
    }

    /// The free Carnot algebra of rank 2 and step 4 (dimension 8, layer sizes
    /// 2,1,2,3), extending the rank-2 step-3 basis with X6 = [X4,X1],
    /// X7 = [X4,X2] and X8 = [X5,X2]; Jacobi forces [X5,X1] = X7.
    pub fn f24() -> Arc<Self> {
        Self::new(
            "f24",
            vec![1, 1, 2, 3, 3, 4, 4, 4],
            &[
                (2, 1, vec![(3, q1())]),
                (3, 1, vec![(4, q1())]),
                (3, 2, vec![(5, q1())]),
                (4, 1, vec![(6, q1())]),
                (4, 2, vec![(7, q1())]),
                (5, 1, vec![(7, q1())]),
                (5, 2, vec![(8, q1())]),
            ],
        )
        .expect("f24 structure constants are valid")
    }

    /// Free nilpotent algebra of the given rank and step, realized inside the
    /// truncated tensor algebra. Basis elements are iterated commutators of
    /// the generators, picked degree by degree by exact independence tests.
    pub fn free_nilpotent(rank: usize, step: usize) -> Result<Arc<Self>, LieError> {
        assert!(rank >= 1 && step >= 1 && step <= 6, "free_nilpotent: unsupported size");
        // words of length 1..=step over `rank` letters, graded order
        let mut words: Vec<Vec<u8>> = Vec::new();
        let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..step {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..rank as u8 {
                    let mut nw = w.clone();
                    nw.push(l);
                    next.push(nw);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let widx: BTreeMap<Vec<u8>, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        type Tensor = BTreeMap<Vec<u8>, Q>;
        let tmul = |a: &Tensor, b: &Tensor| -> Tensor {
            let mut out: Tensor = BTreeMap::new();
            for (wa, ca) in a {
                for (wb, cb) in b {
                    if wa.len() + wb.len() > step {
                        continue;
                    }
                    let mut w = wa.clone();
                    w.extend_from_slice(wb);
                    let e = out.entry(w).or_insert_with(q0);
                    *e = &*e + &(ca * cb);
                }
            }
            out.retain(|_, c| !Zero::is_zero(c));
            out
        };
        let comm = |a: &Tensor, b: &Tensor| -> Tensor {
            let mut out = tmul(a, b);
            for (w, c) in tmul(b, a) {
                let e = out.entry(w).or_insert_with(q0);
                *e = &*e - &c;
            }
            out.retain(|_, c| !Zero::is_zero(c));
            out
        };
        let to_vec = |t: &Tensor| -> Vec<Q> {
            let mut v = vec![q0(); words.len()];
            for (w, c) in t {
                v[widx[w]] = c.clone();
            }
            v
        };

        let mut basis: Vec<Tensor> = Vec::new();
        let mut degs: Vec<usize> = Vec::new();
        for l in 0..rank as u8 {
            basis.push(BTreeMap::from([(vec![l], q1())]));
            degs.push(1);
        }
        for d in 2..=step {
            // candidates: brackets of lower-degree basis elements
            let mut rows: Vec<Vec<Q>> = Vec::new();
            let mut chosen: Vec<Tensor> = Vec::new();
            let lower: Vec<usize> = (0..basis.len()).collect();
            for &i in &lower {
                for &j in &lower {
                    if degs[i] + degs[j] != d {
                        continue;
                    }
                    let t = comm(&basis[i], &basis[j]);
                    if t.is_empty() {
                        continue;
                    }
                    let mut v = to_vec(&t);
                    for r in &rows {
                        let piv = r.iter().position(|x| !Zero::is_zero(x)).unwrap();
                        if !Zero::is_zero(&v[piv]) {
                            let f = &v[piv] / &r[piv];
                            for (x, y) in v.iter_mut().zip(r) {
                                *x = &*x - &(&f * y);
                            }
                        }
                    }
                    if v.iter().any(|x| !Zero::is_zero(x)) {
                        rows.push(v);
                        chosen.push(t);
                    }
                }
            }
            for t in chosen {
                basis.push(t);
                degs.push(d);
            }
        }

        // expand [b_i, b_j] in the basis: solve the exact linear system
        let cols: Vec<Vec<Q>> = basis.iter().map(to_vec).collect();
        let nb = basis.len();
        let solve = |b: Vec<Q>| -> Vec<Q> {
            let mut aug: Vec<Vec<Q>> = (0..words.len())
                .map(|r| {
                    let mut row: Vec<Q> = cols.iter().map(|c| c[r].clone()).collect();
                    row.push(b[r].clone());
                    row
                })
                .collect();
            let mut pivots = Vec::new();
            let mut rr = 0;
            for c in 0..nb {
                if let Some(pr) = (rr..aug.len()).find(|&r| !Zero::is_zero(&aug[r][c])) {
                    aug.swap(rr, pr);
                    let p = aug[rr][c].clone();
                    for x in aug[rr].iter_mut() {
                        *x = &*x / &p;
                    }
                    for r in 0..aug.len() {
                        if r != rr && !Zero::is_zero(&aug[r][c]) {
                            let f = aug[r][c].clone();
                            for k in 0..=nb {
                                let sub = &f * &aug[rr][k];
                                aug[r][k] = &aug[r][k] - &sub;
                            }
                        }
                    }
                    pivots.push((rr, c));
                    rr += 1;
                }
            }
            let mut out = vec![q0(); nb];
            for (r, c) in pivots {
                out[c] = aug[r][nb].clone();
            }
            out
        };

        let mut brackets = Vec::new();
        for i in 0..nb {
            for j in 0..i {
                if degs[i] + degs[j] > step {
                    continue;
                }
                let t = comm(&basis[i], &basis[j]);
                if t.is_empty() {
                    continue;
                }
                let sol = solve(to_vec(&t));
                let expansion: Vec<(usize, Q)> = sol
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !Zero::is_zero(c))
                    .map(|(k, c)| (k + 1, c))
                    .collect();
                brackets.push((i + 1, j + 1, expansion));
            }
        }
        Self::new(&format!("free({rank},{step})"), degs, &brackets)
    }

    /// Parse an algebra from a plain-text structure table:
    ///
    /// ```text
    /// # comments and blank lines are ignored
    /// layers 1 1 2 3 3
    /// bracket 2 1 -> 3:1
    /// bracket 3 1 -> 4:1
    /// bracket 3 2 -> 5:1
    /// ```
    ///
    /// Every `bracket i j -> k:c ...` line gives `[X_i, X_j]` as a sum of
    /// `c * X_k` terms with exact rational `c`; only `i > j` pairs are listed.
    pub fn from_table_str(name: &str, text: &str) -> Result<Arc<Self>, LieError> {
        let mut layers: Option<Vec<usize>> = None;
        let mut brackets: Vec<(usize, usize, Vec<(usize, Q)>)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            match it.next() {
                Some("layers") => {
                    let ls: Result<Vec<usize>, _> = it.map(|t| t.parse::<usize>()).collect();
                    layers =
                        Some(ls.map_err(|e| LieError::BadTable(format!("line {}: {e}", ln + 1)))?);
                }
                Some("bracket") => {
                    let bad = |m: &str| LieError::BadTable(format!("line {}: {m}", ln + 1));
                    let i: usize =
                        it.next().ok_or_else(|| bad("missing i"))?.parse().map_err(|_| bad("bad i"))?;
                    let j: usize =
                        it.next().ok_or_else(|| bad("missing j"))?.parse().map_err(|_| bad("bad j"))?;
                    if it.next() != Some("->") {
                        return Err(bad("expected '->'"));
                    }
                    let mut terms = Vec::new();
                    for tok in it {
                        let (k, c) = tok.split_once(':').ok_or_else(|| bad("expected k:coeff"))?;
                        let k: usize = k.parse().map_err(|_| bad("bad basis index"))?;
                        let c = crate::scalar::parse_rational(c).map_err(|m| bad(&m))?;
                        terms.push((k, c));
                    }
                    brackets.push((i, j, terms));
                }
                Some(other) => {
                    return Err(LieError::BadTable(format!("line {}: unknown directive {other:?}", ln + 1)))
                }
                None => {}
            }
        }
        let layers = layers.ok_or_else(|| LieError::BadTable("missing 'layers' line".into()))?;
        Self::new(name, layers, &brackets)
    }
}

/// Element of a [`CarnotAlgebra`] with coefficients in a generic scalar ring.
#[derive(Clone, Debug)]
pub struct LieVec<S: Scalar> {
    pub alg: Arc<CarnotAlgebra>,
    pub coeffs: Vec<S>,
}

pub type QLieVec = LieVec<Q>;

fn same_algebra<S: Scalar>(a: &LieVec<S>, b: &LieVec<S>) -> Result<(), LieError> {
    if Arc::ptr_eq(&a.alg, &b.alg) || (a.alg.name == b.alg.name && a.alg.dim == b.alg.dim) {
        Ok(())
    } else {
        Err(LieError::AlgebraMismatch(a.alg.name.clone(), b.alg.name.clone()))
    }
}

impl<S: Scalar> PartialEq for LieVec<S> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(self, other).is_ok() && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> LieVec<S> {
    pub fn zero(alg: &Arc<CarnotAlgebra>) -> Self {
        LieVec { alg: alg.clone(), coeffs: vec![S::zero(); alg.dim] }
    }

    /// The basis element `X_i` (1-based, following the paper-style numbering).
    pub fn basis(alg: &Arc<CarnotAlgebra>, i: usize) -> Self {
        assert!(i >= 1 && i <= alg.dim, "basis index out of range");
        let mut v = Self::zero(alg);
        v.coeffs[i - 1] = S::one();
        v
    }

    pub fn from_coeffs(alg: &Arc<CarnotAlgebra>, coeffs: Vec<S>) -> Result<Self, LieError> {
        if coeffs.len() != alg.dim {
            return Err(LieError::Dimension { got: coeffs.len(), want: alg.dim });
        }
        Ok(LieVec { alg: alg.clone(), coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        same_algebra(self, other).expect("algebra mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        LieVec { alg: self.alg.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        same_algebra(self, other).expect("algebra mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect();
        LieVec { alg: self.alg.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        LieVec { alg: self.alg.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        LieVec { alg: self.alg.clone(), coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn scale_ratio(&self, n: i64, d: i64) -> Self {
        LieVec {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|x| x.scale_ratio(n, d)).collect(),
        }
    }
}

/// Bilinear extension of the structure constants.
pub fn bracket<S: Scalar>(u: &LieVec<S>, v: &LieVec<S>) -> Result<LieVec<S>, LieError> {
    same_algebra(u, v)?;
    let alg = &u.alg;
    let mut out: LieVec<S> = LieVec::zero(alg);
    for (i, ci) in u.coeffs.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for (j, cj) in v.coeffs.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let prod = ci.mul(cj);
            for (k, s) in alg.basis_bracket(i, j) {
                out.coeffs[*k] = out.coeffs[*k].add(&prod.mul_q(s));
            }
        }
    }
    Ok(out)
}

/// Polynomial in a formal parameter `t` with Lie-vector coefficients; the
/// coefficient of `t^k` sits at index `k`. Nilpotency keeps it finite.
#[derive(Clone, Debug)]
pub struct TPoly<S: Scalar> {
    pub coeffs_by_degree: Vec<LieVec<S>>,
}

impl<S: Scalar> TPoly<S> {
    pub fn degree(&self) -> usize {
        self.coeffs_by_degree.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> Option<&LieVec<S>> {
        self.coeffs_by_degree.get(k)
    }

    /// Evaluate at a concrete parameter value.
    pub fn eval_at(&self, t: &S) -> LieVec<S> {
        let alg = &self.coeffs_by_degree[0].alg;
        let mut acc = LieVec::zero(alg);
        let mut tp = S::one();
        for c in &self.coeffs_by_degree {
            acc = acc.add(&c.scale(&tp));
            tp = tp.mul(t);
        }
        acc
    }
}

/// `e^{ad_{tY}} X` as a polynomial in `t`: the `t^k` coefficient is
/// `ad_Y^k X / k!`, and the series terminates by nilpotency.
pub fn exp_ad<S: Scalar>(y: &LieVec<S>, x: &LieVec<S>) -> Result<TPoly<S>, LieError> {
    same_algebra(y, x)?;
    let mut coeffs = vec![x.clone()];
    let mut term = x.clone();
    let mut k: i64 = 1;
    loop {
        term = bracket(y, &term)?.scale_ratio(1, k);
        if term.is_zero() {
            break;
        }
        coeffs.push(term.clone());
        k += 1;
        if k as usize > y.alg.step + 1 {
            break;
        }
    }
    Ok(TPoly { coeffs_by_degree: coeffs })
}

/// `log(exp u * exp v)`, exact, for algebras of step at most 4:
/// u + v + 1/2 [u,v] + 1/12 [u,[u,v]] - 1/12 [v,[u,v]] - 1/24 [v,[u,[u,v]]].
pub fn bch<S: Scalar>(u: &LieVec<S>, v: &LieVec<S>) -> Result<LieVec<S>, LieError> {
    same_algebra(u, v)?;
    if u.alg.step > 4 {
        return Err(LieError::StepTooLarge(u.alg.step));
    }
    let uv = bracket(u, v)?;
    let uuv = bracket(u, &uv)?;
    let vuv = bracket(v, &uv)?;
    let vuuv = bracket(v, &uuv)?;
    Ok(u.add(v)
        .add(&uv.scale_ratio(1, 2))
        .add(&uuv.scale_ratio(1, 12))
        .sub(&vuv.scale_ratio(1, 12))
        .sub(&vuuv.scale_ratio(1, 24)))
}

/// Intrinsic dilation on the algebra: layer-k coefficients scale by lambda^k.
pub fn dilate_alg<S: Scalar>(lambda: &S, u: &LieVec<S>) -> LieVec<S> {
    let mut coeffs = Vec::with_capacity(u.alg.dim);
    for (i, c) in u.coeffs.iter().enumerate() {
        let mut f = S::one();
        for _ in 0..u.alg.layer[i] {
            f = f.mul(lambda);
        }
        coeffs.push(c.mul(&f));
    }
    LieVec { alg: u.alg.clone(), coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn xs(alg: &Arc<CarnotAlgebra>) -> Vec<QLieVec> {
        (1..=alg.dim).map(|i| LieVec::basis(alg, i)).collect()
    }

    #[test]
    fn f23_bracket_convention() {
        let alg = CarnotAlgebra::f23();
        let x = xs(&alg);
        assert_eq!(bracket(&x[1], &x[0]).unwrap(), x[2]); // [X2,X1] = X3
        assert_eq!(bracket(&x[2], &x[0]).unwrap(), x[3]); // [X3,X1] = X4
        assert_eq!(bracket(&x[2], &x[1]).unwrap(), x[4]); // [X3,X2] = X5
        assert_eq!(bracket(&x[0], &x[1]).unwrap(), x[2].neg()); // antisymmetry
        assert!(bracket(&x[0], &x[0]).unwrap().is_zero());
    }

    #[test]
    fn f24_jacobi_forced_bracket() {
        let alg = CarnotAlgebra::f24();
        let x = xs(&alg);
        // [X5,X1] = X7 = [X4,X2]
        assert_eq!(bracket(&x[4], &x[0]).unwrap(), x[6]);
        assert_eq!(bracket(&x[3], &x[1]).unwrap(), x[6]);
    }

    #[test]
    fn exp_ad_examples() {
        let alg = CarnotAlgebra::f23();
        let x = xs(&alg);
        // Ad_{exp(t X1)} X2 = X2 - t X3 + t^2/2 X4 (cross-checked against group
        // conjugation in the f23 tests)
        let p = exp_ad(&x[0], &x[1]).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.coeff(0).unwrap(), &x[1]);
        assert_eq!(p.coeff(1).unwrap(), &x[2].neg());
        assert_eq!(p.coeff(2).unwrap(), &x[3].scale_ratio(1, 2));
        // exp_ad(0, X) and exp_ad(X, X) are constant
        let zero = LieVec::zero(&alg);
        assert_eq!(exp_ad(&zero, &x[0]).unwrap().degree(), 0);
        assert_eq!(exp_ad(&x[0], &x[0]).unwrap().degree(), 0);
    }

    #[test]
    fn bch_examples() {
        let alg = CarnotAlgebra::f23();
        let x = xs(&alg);
        let z = bch(&x[0], &x[1]).unwrap();
        // X1 + X2 - 1/2 X3 + 1/12 X4 - 1/12 X5
        assert_eq!(z.coeffs, vec![q(1, 1), q(1, 1), q(-1, 2), q(1, 12), q(-1, 12)]);
        let u = LieVec::from_coeffs(&alg, vec![q(3, 7), q(-2, 5), q(1, 3), q(9, 4), q(-5, 6)]).unwrap();
        assert_eq!(bch(&u, &LieVec::zero(&alg)).unwrap(), u);
        assert!(bch(&u, &u.neg()).unwrap().is_zero());
        let f25 = CarnotAlgebra::free_nilpotent(2, 5).unwrap();
        let a: QLieVec = LieVec::basis(&f25, 1);
        let b: QLieVec = LieVec::basis(&f25, 2);
        assert!(matches!(bch(&a, &b), Err(LieError::StepTooLarge(5))));
    }

    #[test]
    fn dilate_examples() {
        let alg = CarnotAlgebra::f23();
        let x = xs(&alg);
        let u = LieVec::from_coeffs(&alg, vec![q(1, 2), q(0, 1), q(3, 1), q(0, 1), q(-1, 1)]).unwrap();
        assert_eq!(dilate_alg(&q(1, 1), &u), u);
        assert_eq!(dilate_alg(&q(2, 1), &x[2]), x[2].scale(&q(4, 1))); // layer 2
    }

    #[test]
    fn free_nilpotent_dimensions() {
        for (rank, step, want) in [(2, 3, vec![2, 1, 2]), (2, 4, vec![2, 1, 2, 3]), (2, 5, vec![2, 1, 2, 3, 6]), (3, 2, vec![3, 3])] {
            let alg = CarnotAlgebra::free_nilpotent(rank, step).unwrap();
            let dims: Vec<usize> = (1..=step).map(|l| alg.layer_indices(l).len()).collect();
            assert_eq!(dims, want, "free({rank},{step})");
        }
    }

    #[test]
    fn table_parse_roundtrip() {
        let text = "
            # rank-2 step-3 free algebra
            layers 1 1 2 3 3
            bracket 2 1 -> 3:1
            bracket 3 1 -> 4:1
            bracket 3 2 -> 5:1
        ";
        let alg = CarnotAlgebra::from_table_str("custom", text).unwrap();
        assert_eq!(alg.dim, 5);
        assert_eq!(alg.step, 3);
        let bad = "layers 1 1 2\nbracket 2 1 -> 3:1/0";
        assert!(CarnotAlgebra::from_table_str("bad", bad).is_err());
        // dropping the Jacobi-forced [X5,X1] = X7 from the step-4 table is rejected
        let bad_jacobi = "
            layers 1 1 2 3 3 4 4 4
            bracket 2 1 -> 3:1
            bracket 3 1 -> 4:1
            bracket 3 2 -> 5:1
            bracket 4 1 -> 6:1
            bracket 4 2 -> 7:1
            bracket 5 2 -> 8:1
        ";
        assert!(matches!(
            CarnotAlgebra::from_table_str("badj", bad_jacobi),
            Err(LieError::Jacobi { .. })
        ));
    }

    #[test]
    fn grading_violation_rejected() {
        let r = CarnotAlgebra::new("bad", vec![1, 1, 3], &[(2, 1, vec![(3, q1())])]);
        assert!(matches!(r, Err(LieError::Grading { .. })));
    }
}
