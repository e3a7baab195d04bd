//! The master polynomial, its Jacobian ideal, and graded pieces of the quotient.
//!
//! With `m = k r` and `n = m - k - 1` the master polynomial is
//! `F = Σ_i μ_i F_i`, `F_i = y_{n+1+i}^r - Σ_{j<=n} a_{ji} y_j^r`, and `J` is
//! generated by its `k + m` first partials. The diagonal group `N = (Z/r)^m`
//! scales `y_j` by roots of unity, so every generator is semi-invariant and
//! each graded slice of `J` splits by character. A piece of eigenclass `e`
//! consists of monomials whose y-exponents are all `≡ e (mod r)`; the
//! invariant ring `R^N` is eigenclass 0.
//!
//! The eigenclass component of `J_{(p,q)}` is spanned by the products `g·m`
//! with `g` a generator and `m` a monomial whose character complements that of
//! `g`; other multipliers project to zero. Rows are reduced with columns in
//! descending graded-lex order, and the quotient basis is the set of
//! non-pivot monomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::arrangement::{check_field, GenericParams};
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::linalg::{inverse, mat_vec, Echelon, EchelonFp, EchelonQ, RowFp, RowQ};
use crate::poly::{Field, Monomial, Polynomial, Scalar, Var};

/// Nonnegative integer vectors of length `parts` summing to `total`,
/// in lexicographically descending order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Monomials of bidegree `(p, q)` whose y-exponents are congruent to
/// `residues` modulo `r`, sorted descending in graded-lex order.
pub fn monomials_with_residues(k: usize, p: u32, q: u32, residues: &[u32], r: u32) -> Vec<Monomial> {
    let base: u32 = residues.iter().sum();
    if q < base || !(q - base).is_multiple_of(r) {
        return Vec::new();
    }
    let mus = compositions(p, k);
    let ys = compositions((q - base) / r, residues.len());
    let mut out = Vec::with_capacity(mus.len() * ys.len());
    for mu in &mus {
        for t in &ys {
            let y = t.iter().zip(residues).map(|(t, e)| e + r * t).collect();
            out.push(Monomial::new(mu.clone(), y));
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// `F`, its partial derivatives, and a cache of computed pieces.
#[derive(Debug)]
pub struct JacobianPresentation {
    params: GenericParams,
    master: Polynomial,
    mu_generators: Vec<Polynomial>,
    y_generators: Vec<Polynomial>,
    cache: Mutex<HashMap<(u32, u32, Vec<u32>), Arc<GradedPiece>>>,
}

/// One bidegree slice of `R`, restricted to a set of eigenclasses.
#[derive(Debug)]
pub struct GradedPiece {
    bidegree: (u32, u32),
    eigenclasses: Vec<u32>,
    field: Field,
    ambient: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    generating_rows: usize,
    echelon: Echelon,
    /// Column of each quotient basis element.
    basis_cols: Vec<usize>,
    /// Position in the quotient basis of each non-pivot column.
    coord_of: Vec<Option<usize>>,
}

impl GradedPiece {
    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    /// Eigenclasses covered; a single class unless built by
    /// [`JacobianPresentation::invariant_piece`].
    pub fn eigenclasses(&self) -> &[u32] {
        &self.eigenclasses
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_basis(&self) -> &[Monomial] {
        &self.ambient
    }

    pub fn ambient_size(&self) -> usize {
        self.ambient.len()
    }

    /// Number of products `g·m` that span the ideal slice before elimination.
    pub fn generating_rows(&self) -> usize {
        self.generating_rows
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.echelon.pivots()
    }

    pub fn dim(&self) -> usize {
        self.basis_cols.len()
    }

    pub fn quotient_basis(&self) -> Vec<Monomial> {
        self.basis_cols.iter().map(|&c| self.ambient[c].clone()).collect()
    }

    pub fn column_of(&self, mono: &Monomial) -> Option<usize> {
        self.index.get(mono).copied()
    }

    fn coordinates(&self, remainder: Vec<(usize, Scalar)>) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (c, x) in remainder {
            let pos = self.coord_of[c].expect("remainder lies on non-pivot columns");
            out[pos] = x;
        }
        out
    }

    /// Coordinates of the class of `elem` in the quotient basis.
    pub fn reduce_to_basis(&self, elem: &Polynomial) -> Result<Vec<Scalar>> {
        if elem.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: elem.field().to_string(),
            });
        }
        let mut v = Vec::with_capacity(elem.len());
        for (mono, c) in elem.terms() {
            let col = self.index.get(mono).ok_or_else(|| {
                Error::Shape(format!(
                    "monomial {mono} is not in the ({},{}) piece of eigenclass {:?}",
                    self.bidegree.0, self.bidegree.1, self.eigenclasses
                ))
            })?;
            v.push((*col, c.clone()));
        }
        v.sort_by_key(|e| e.0);
        Ok(self.coordinates(self.echelon.reduce(&v)))
    }

    /// Coordinates of a single monomial; `None` if it is outside the piece.
    pub fn reduce_monomial(&self, mono: &Monomial) -> Option<Vec<Scalar>> {
        let col = *self.index.get(mono)?;
        if let Some(pos) = self.coord_of[col] {
            let mut out = vec![self.field.zero(); self.dim()];
            out[pos] = self.field.one();
            return Some(out);
        }
        Some(self.coordinates(self.echelon.reduce(&[(col, self.field.one())])))
    }

    /// Polynomial with the given coordinates in the quotient basis.
    pub fn lift(&self, coords: &[Scalar]) -> Result<Polynomial> {
        if coords.len() != self.dim() {
            return Err(Error::Shape(format!(
                "{} coordinates for a piece of dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        let (k, m) = self.ambient.first().map(|x| x.shape()).unwrap_or((0, 0));
        Polynomial::from_terms(
            k,
            m,
            self.field,
            coords
                .iter()
                .zip(&self.basis_cols)
                .map(|(c, &col)| (c.clone(), self.ambient[col].clone())),
        )
    }
}

/// Ring shape shared by the presentation and its pieces.
struct Shape {
    k: usize,
    m: usize,
    r: u32,
}

impl JacobianPresentation {
    /// Builds `F` and all partial derivatives over `field`.
    ///
    /// Rational parameters are reduced into a prime field when requested.
    pub fn new(params: &GenericParams, field: Field) -> Result<Self> {
        let r = params.r();
        check_field(field, r)?;
        let params = if params.field() == field {
            params.clone()
        } else {
            params.map_field(field)?
        };
        let (n, k, m) = (params.n(), params.k(), params.m());
        let mut master = Polynomial::zero(k, m, field);
        let mut f_parts = Vec::with_capacity(k);
        for i in 0..k {
            let mut terms = vec![(field.one(), Monomial::mu_y(k, m, i, n + 1 + i, r))];
            for j in 0..=n {
                let mut mono = Monomial::mu_y(k, m, i, j, r);
                mono.mu[i] = 1;
                terms.push((-params.get(j, i), mono));
            }
            let with_mu = Polynomial::from_terms(k, m, field, terms)?;
            master = master.add(&with_mu)?;
            f_parts.push(with_mu);
        }
        let mu_generators = (0..k)
            .map(|i| master.partial_derivative(Var::Mu(i)))
            .collect::<Result<Vec<_>>>()?;
        let y_generators = (0..m)
            .map(|j| master.partial_derivative(Var::Y(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(JacobianPresentation {
            params,
            master,
            mu_generators,
            y_generators,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &GenericParams {
        &self.params
    }

    pub fn field(&self) -> Field {
        self.params.field()
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn k(&self) -> usize {
        self.params.k()
    }

    pub fn m(&self) -> usize {
        self.params.m()
    }

    pub fn r(&self) -> u32 {
        self.params.r()
    }

    pub fn master(&self) -> &Polynomial {
        &self.master
    }

    /// `∂F/∂μ_i`, bidegree `(0, r)`.
    pub fn mu_generator(&self, i: usize) -> &Polynomial {
        &self.mu_generators[i]
    }

    /// `∂F/∂y_j`, bidegree `(1, r-1)`.
    pub fn y_generator(&self, j: usize) -> &Polynomial {
        &self.y_generators[j]
    }

    /// All `k + m` generators, μ-derivatives first.
    pub fn generators(&self) -> impl Iterator<Item = &Polynomial> {
        self.mu_generators.iter().chain(self.y_generators.iter())
    }

    fn shape(&self) -> Shape {
        Shape {
            k: self.k(),
            m: self.m(),
            r: self.r(),
        }
    }

    /// Products `g·m` spanning the eigenclass-`e` part of `J_{(p,q)}`.
    fn spanning_products(&self, p: u32, q: u32, e: u32) -> Vec<(usize, Monomial)> {
        let Shape { k, m, r } = self.shape();
        let mut out = Vec::new();
        if q >= r {
            let mults = monomials_with_residues(k, p, q - r, &vec![e; m], r);
            for i in 0..k {
                out.extend(mults.iter().map(|mono| (i, mono.clone())));
            }
        }
        if p >= 1 && q + 1 >= r {
            for j in 0..m {
                let mut res = vec![e; m];
                res[j] = (e + 1) % r;
                let mults = monomials_with_residues(k, p - 1, q + 1 - r, &res, r);
                out.extend(mults.into_iter().map(|mono| (k + j, mono)));
            }
        }
        out
    }

    /// The polynomials `g·m` whose span is the eigenclass-`e` slice of `J_{(p,q)}`.
    pub fn ideal_generators(&self, p: u32, q: u32, e: u32) -> Vec<Polynomial> {
        let gens: Vec<&Polynomial> = self.generators().collect();
        self.spanning_products(p, q, e % self.r())
            .into_iter()
            .map(|(g, mono)| gens[g].mul_monomial(&mono))
            .collect()
    }

    fn build(&self, p: u32, q: u32, classes: &[u32]) -> GradedPiece {
        let Shape { k, m, r } = self.shape();
        let field = self.field();
        let mut ambient = Vec::new();
        for &e in classes {
            ambient.extend(monomials_with_residues(k, p, q, &vec![e; m], r));
        }
        ambient.sort_by(|a, b| b.cmp(a));
        let index: HashMap<Monomial, usize> =
            ambient.iter().enumerate().map(|(c, mono)| (mono.clone(), c)).collect();
        let ncols = ambient.len();

        let gens: Vec<&Polynomial> = self.generators().collect();
        let mut products = Vec::new();
        for &e in classes {
            products.extend(self.spanning_products(p, q, e));
        }
        let generating_rows = products.len();
        let row_cols = |g: usize, mono: &Monomial| -> Vec<usize> {
            gens[g]
                .terms()
                .map(|(t, _)| index[&t.mul(mono)])
                .collect()
        };
        let echelon = match field {
            Field::Prime(pr) => {
                let coeffs: Vec<Vec<u64>> = gens
                    .iter()
                    .map(|g| g.terms().map(|(_, c)| c.residue().unwrap()).collect())
                    .collect();
                let rows: Vec<RowFp> = products
                    .iter()
                    .map(|(g, mono)| row_cols(*g, mono).into_iter().zip(coeffs[*g].iter().copied()).collect())
                    .collect();
                Echelon::Fp(EchelonFp::new(pr, ncols, rows))
            }
            Field::Rational => {
                let coeffs: Vec<Vec<BigInt>> = gens.iter().map(|g| integral_coefficients(g)).collect();
                let rows: Vec<RowQ> = products
                    .iter()
                    .map(|(g, mono)| row_cols(*g, mono).into_iter().zip(coeffs[*g].iter().cloned()).collect())
                    .collect();
                Echelon::Q(EchelonQ::new(ncols, rows))
            }
        };
        let mut coord_of = vec![None; ncols];
        let mut basis_cols = Vec::new();
        for (c, slot) in coord_of.iter_mut().enumerate() {
            if !echelon.is_pivot(c) {
                *slot = Some(basis_cols.len());
                basis_cols.push(c);
            }
        }
        GradedPiece {
            bidegree: (p, q),
            eigenclasses: classes.to_vec(),
            field,
            ambient,
            index,
            generating_rows,
            echelon,
            basis_cols,
            coord_of,
        }
    }

    fn cached(&self, p: u32, q: u32, classes: Vec<u32>) -> Arc<GradedPiece> {
        let key = (p, q, classes);
        if let Some(hit) = self.cache.lock().expect("piece cache").get(&key) {
            return hit.clone();
        }
        let piece = Arc::new(self.build(p, q, &key.2));
        self.cache
            .lock()
            .expect("piece cache")
            .entry(key)
            .or_insert(piece)
            .clone()
    }

    /// The `(p, q)` piece of eigenclass `e` (taken modulo `r`).
    pub fn graded_piece(&self, p: u32, q: u32, eigenclass: u32) -> Arc<GradedPiece> {
        self.cached(p, q, vec![eigenclass % self.r()])
    }

    /// The `(q, q r)` piece of `R^N`.
    pub fn invariant(&self, q: u32) -> Arc<GradedPiece> {
        self.graded_piece(q, q * self.r(), 0)
    }

    /// The full `N_1`-invariant `(p, q)` piece: all eigenclasses at once.
    pub fn invariant_piece(&self, p: u32, q: u32) -> Arc<GradedPiece> {
        self.cached(p, q, (0..self.r()).collect())
    }

    /// The elements `Π_s μ_{i_s} y_{j_s}^r` for `i_1 < .. < i_q` in `1..k`
    /// and `j_1 < .. < j_q` in `1..=n`, in lexicographic order of `(i, j)`.
    pub fn product_basis_elements(&self, q: usize) -> Vec<(Vec<usize>, Vec<usize>, Monomial)> {
        let Shape { k, m, r } = self.shape();
        let rows = subsets(1, k - 1, q);
        let cols = subsets(1, self.n(), q);
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for is in &rows {
            for js in &cols {
                let mut mono = Monomial::one(k, m);
                for (i, j) in is.iter().zip(js) {
                    mono.mu[*i] += 1;
                    mono.y[*j] += r;
                }
                out.push((is.clone(), js.clone(), mono));
            }
        }
        out
    }

    /// Change of basis from the quotient basis of the `(q, q r)` piece to
    /// [`Self::product_basis_elements`].
    pub fn product_basis(&self, q: usize) -> Result<ProductBasis> {
        let piece = self.invariant(q as u32);
        let elements = self.product_basis_elements(q);
        if elements.len() != piece.dim() {
            return Err(Error::NonGeneric(format!(
                "{} product elements for a piece of dimension {}",
                elements.len(),
                piece.dim()
            )));
        }
        let d = piece.dim();
        let field = self.field();
        // columns are the canonical coordinates of each element
        let cols: Vec<Vec<Scalar>> = elements
            .iter()
            .map(|(_, _, mono)| piece.reduce_monomial(mono).expect("element lies in the piece"))
            .collect();
        let b: Vec<Vec<Scalar>> = (0..d).map(|row| (0..d).map(|c| cols[c][row].clone()).collect()).collect();
        let to_product = inverse(field, &b)?.ok_or_else(|| {
            Error::NonGeneric(format!("product basis of the ({q},{}) piece is dependent", q as u32 * self.r()))
        })?;
        Ok(ProductBasis {
            piece,
            elements,
            to_product,
        })
    }

    /// Dimensions of the `(q, q r)` pieces of `R^N` against `C(n,q) C(k-1,q)`.
    pub fn hodge_numbers(&self, q_max: Option<usize>) -> Vec<HodgeEntry> {
        let n = self.n();
        let top = q_max.map_or(n, |t| t.min(n));
        (0..=top)
            .map(|q| {
                let dim = self.invariant(q as u32).dim();
                let predicted = binomial(n as u64, q as u64) * binomial(self.k() as u64 - 1, q as u64);
                HodgeEntry {
                    q,
                    dim,
                    agrees: BigInt::from(dim) == predicted,
                    predicted,
                }
            })
            .collect()
    }
}

/// `lo..=hi` subsets of size `size`, lexicographic.
pub(crate) fn subsets(lo: usize, hi: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, hi: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in start..=hi {
            cur.push(x);
            rec(x + 1, hi, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size == 0 {
        out.push(Vec::new());
    } else if hi >= lo {
        rec(lo, hi, size, &mut Vec::new(), &mut out);
    }
    out
}

fn integral_coefficients(g: &Polynomial) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for (_, c) in g.terms() {
        den = den.lcm(c.as_rational().unwrap().denom());
    }
    g.terms()
        .map(|(_, c)| {
            let q = c.as_rational().unwrap();
            q.numer() * (&den / q.denom())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeEntry {
    pub q: usize,
    pub dim: usize,
    pub predicted: BigInt,
    pub agrees: bool,
}

/// Coordinates relative to the product basis of a `(q, q r)` piece.
#[derive(Debug, Clone)]
pub struct ProductBasis {
    piece: Arc<GradedPiece>,
    elements: Vec<(Vec<usize>, Vec<usize>, Monomial)>,
    to_product: Vec<Vec<Scalar>>,
}

impl ProductBasis {
    pub fn piece(&self) -> &Arc<GradedPiece> {
        &self.piece
    }

    /// `(row indices, column indices, monomial)` per basis element.
    pub fn elements(&self) -> &[(Vec<usize>, Vec<usize>, Monomial)] {
        &self.elements
    }

    /// Maps canonical coordinates to product-basis coordinates.
    pub fn from_canonical(&self, coords: &[Scalar]) -> Vec<Scalar> {
        mat_vec(self.piece.field(), &self.to_product, coords)
    }

    pub fn coordinates(&self, elem: &Polynomial) -> Result<Vec<Scalar>> {
        Ok(self.from_canonical(&self.piece.reduce_to_basis(elem)?))
    }

    pub fn monomial_coordinates(&self, mono: &Monomial) -> Option<Vec<Scalar>> {
        self.piece.reduce_monomial(mono).map(|c| self.from_canonical(&c))
    }

    /// Position of the element with the given index sets.
    pub fn position(&self, rows: &[usize], cols: &[usize]) -> Option<usize> {
        self.elements.iter().position(|(is, js, _)| is == rows && js == cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::sample_generic_params;

    fn fp() -> Field {
        Field::prime(1_000_003).unwrap()
    }

    fn pres(n: usize, k: usize, r: u32, seed: u64) -> JacobianPresentation {
        let params = sample_generic_params(n, k, r, fp(), seed).unwrap();
        JacobianPresentation::new(&params, fp()).unwrap()
    }

    fn poly(k: usize, m: usize, terms: Vec<(Scalar, Monomial)>) -> Polynomial {
        Polynomial::from_terms(k, m, fp(), terms).unwrap()
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(0, 4), vec![vec![0; 4]]);
        assert_eq!(compositions(3, 1), vec![vec![3]]);
        assert_eq!(subsets(1, 4, 2).len(), 6);
        assert_eq!(subsets(1, 0, 1).len(), 0);
    }

    #[test]
    fn explicit_generators_r2() {
        let p = pres(2, 3, 2, 1);
        let (k, m, f) = (3, 6, fp());
        // ∂F/∂μ_0 = y_3^2 - (y_0^2 + y_1^2 + y_2^2)
        let mut terms = vec![(f.one(), Monomial::new(vec![0; 3], vec![0, 0, 0, 2, 0, 0]))];
        for j in 0..3 {
            let mut y = vec![0; 6];
            y[j] = 2;
            terms.push((f.from_i64(-1), Monomial::new(vec![0; 3], y)));
        }
        assert_eq!(p.mu_generator(0), &poly(k, m, terms));
        // -∂F/(2∂y_0) = y_0 (μ_0 + μ_1 + μ_2)
        let half = f.from_i64(2).inv().unwrap();
        let g = p.y_generator(0).scale(&-half).unwrap();
        let expected: Vec<_> = (0..3)
            .map(|i| {
                let mut mu = vec![0; 3];
                mu[i] = 1;
                (f.one(), Monomial::new(mu, vec![1, 0, 0, 0, 0, 0]))
            })
            .collect();
        assert_eq!(g, poly(k, m, expected));
    }

    #[test]
    fn explicit_generator_r3() {
        let p = pres(3, 2, 3, 1);
        let f = fp();
        // ∂F/∂y_4 = 3 μ_0 y_4^2
        let expected = poly(2, 6, vec![(f.from_i64(3), Monomial::new(vec![1, 0], vec![0, 0, 0, 0, 2, 0]))]);
        assert_eq!(p.y_generator(4), &expected);
    }

    #[test]
    fn generators_are_bihomogeneous_and_semi_invariant() {
        for (n, k, r) in [(2, 3, 2), (3, 2, 3)] {
            let p = pres(n, k, r, 2);
            for (idx, g) in p.generators().enumerate() {
                let expected = if idx < k { (0, r) } else { (1, r - 1) };
                assert_eq!(g.bidegree(), Some(expected));
                assert!(g.character(r).is_some());
            }
        }
    }

    #[test]
    fn field_checks() {
        let params = sample_generic_params(3, 2, 3, Field::Rational, 1).unwrap();
        assert!(matches!(
            JacobianPresentation::new(&params, Field::prime(3).unwrap()),
            Err(Error::UnsupportedField(_))
        ));
        let fparams = sample_generic_params(3, 2, 3, fp(), 1).unwrap();
        assert!(JacobianPresentation::new(&fparams, Field::Rational).is_err());
    }

    #[test]
    fn first_piece_dimension_and_basis() {
        for n in 1..=4 {
            let p = pres(n, n + 1, 2, 3);
            let piece = p.invariant(1);
            assert_eq!(piece.dim(), n * n);
            assert!(p.product_basis(1).is_ok());
        }
    }

    #[test]
    fn known_hodge_rows() {
        let p = pres(3, 4, 2, 1);
        let dims: Vec<usize> = p.hodge_numbers(None).iter().map(|h| h.dim).collect();
        assert_eq!(dims, vec![1, 9, 9, 1]);
        let p = pres(2, 3, 2, 1);
        let dims: Vec<usize> = p.hodge_numbers(None).iter().map(|h| h.dim).collect();
        assert_eq!(dims, vec![1, 4, 1]);
        let p = pres(3, 2, 3, 1);
        let h = p.hodge_numbers(None);
        assert_eq!(h.iter().map(|h| h.dim).collect::<Vec<_>>(), vec![1, 3, 0, 0]);
        assert!(h.iter().all(|e| e.agrees));
    }

    #[test]
    fn reductions_in_first_piece() {
        let p = pres(3, 4, 2, 4);
        let (k, m, f) = (4, 8, fp());
        let piece = p.invariant(1);
        let params = p.params().clone();
        // Σ_j a_{j1} μ_1 y_j^2 is zero in R
        let rel = poly(
            k,
            m,
            (0..=3).map(|j| (params.get(j, 1), Monomial::mu_y(k, m, 1, j, 2))).collect(),
        );
        assert!(piece.reduce_to_basis(&rel).unwrap().iter().all(Scalar::is_zero));
        // a basis element has unit product-basis coordinates
        let pb = p.product_basis(1).unwrap();
        let e11 = Monomial::mu_y(k, m, 1, 1, 2);
        let coords = pb.monomial_coordinates(&e11).unwrap();
        let pos = pb.position(&[1], &[1]).unwrap();
        for (i, c) in coords.iter().enumerate() {
            assert_eq!(c, &if i == pos { f.one() } else { f.zero() });
        }
        // μ_0 y_{n+1}^2 is expressible in the product basis and consistent
        let outer = Monomial::mu_y(k, m, 0, 4, 2);
        let coords = pb.monomial_coordinates(&outer).unwrap();
        let mut back = Polynomial::zero(k, m, f);
        for (c, (_, _, mono)) in coords.iter().zip(pb.elements()) {
            back = back.add(&Polynomial::monomial(mono.clone(), c.clone())).unwrap();
        }
        let diff = back.sub(&Polynomial::monomial(outer, f.one())).unwrap();
        assert!(piece.reduce_to_basis(&diff).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn reduce_rejects_wrong_shape() {
        let p = pres(2, 3, 2, 1);
        let piece = p.invariant(1);
        let (k, m, f) = (3, 6, fp());
        let odd = poly(k, m, vec![(f.one(), Monomial::new(vec![1, 0, 0], vec![1, 1, 0, 0, 0, 0]))]);
        assert!(matches!(piece.reduce_to_basis(&odd), Err(Error::Shape(_))));
        let wrong_degree = poly(k, m, vec![(f.one(), Monomial::mu_y(k, m, 0, 0, 4))]);
        assert!(matches!(piece.reduce_to_basis(&wrong_degree), Err(Error::Shape(_))));
    }

    #[test]
    fn ideal_products_reduce_to_zero() {
        let p = pres(2, 3, 2, 5);
        for (a, b) in [(1, 2), (2, 4), (1, 4)] {
            let piece = p.graded_piece(a, b, 0);
            for g in p.ideal_generators(a, b, 0) {
                assert!(piece.reduce_to_basis(&g).unwrap().iter().all(Scalar::is_zero));
            }
        }
    }

    #[test]
    fn basis_inclusion_and_idempotence() {
        let p = pres(3, 4, 2, 6);
        let piece = p.invariant(2);
        let f = fp();
        for (pos, mono) in piece.quotient_basis().iter().enumerate() {
            let c = piece.reduce_monomial(mono).unwrap();
            assert!(c.iter().enumerate().all(|(i, x)| *x == if i == pos { f.one() } else { f.zero() }));
        }
        let ambient = piece.ambient_basis();
        let elem = Polynomial::from_terms(
            4,
            8,
            f,
            ambient.iter().take(40).enumerate().map(|(i, m)| (f.from_i64(i as i64 + 1), m.clone())),
        )
        .unwrap();
        let c1 = piece.reduce_to_basis(&elem).unwrap();
        let c2 = piece.reduce_to_basis(&piece.lift(&c1).unwrap()).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn eigenclass_completeness() {
        let p = pres(3, 2, 3, 1);
        for (a, b) in [(1, 3), (1, 6), (2, 6), (2, 9)] {
            let total: usize = (0..3).map(|e| p.graded_piece(a, b, e).dim()).sum();
            assert_eq!(total, p.invariant_piece(a, b).dim(), "bidegree ({a},{b})");
        }
    }

    #[test]
    fn empty_pieces() {
        let p = pres(2, 3, 2, 1);
        assert_eq!(p.graded_piece(1, 3, 0).dim(), 0);
        assert_eq!(p.graded_piece(0, 0, 0).dim(), 1);
        assert_eq!(p.graded_piece(3, 6, 0).dim(), 0);
    }

    #[test]
    fn cache_returns_shared_pieces() {
        let p = pres(2, 3, 2, 1);
        let a = p.invariant(1);
        let b = p.graded_piece(1, 2, 2);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
