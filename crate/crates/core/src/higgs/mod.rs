//! Multiplication maps between invariant pieces, relation checks, and the
//! quadric system `α ↦ α²` on the first piece.

pub mod closed_forms;

use std::fmt;

use crate::arrangement::{pairs, GenericParams};
use crate::error::{Error, Result};
use crate::jacobian::{subsets, JacobianPresentation, ProductBasis};
use crate::linalg::Echelon;
use crate::poly::{Field, Monomial, Polynomial, Scalar};

use closed_forms::{coefficient_fractions, Corner, Slot};

/// Reduced products of basis elements of the `(1, r)` and `(q, q r)` pieces,
/// in the canonical basis of the `(q+1, (q+1) r)` piece.
#[derive(Clone, Debug)]
pub struct ProductTable {
    pub q: usize,
    pub left: Vec<Monomial>,
    pub right: Vec<Monomial>,
    pub target_dim: usize,
    /// `tensor[u][v]` = coordinates of `left[u] * right[v]`.
    pub tensor: Vec<Vec<Vec<Scalar>>>,
}

impl ProductTable {
    pub fn entry(&self, u: usize, v: usize) -> &[Scalar] {
        &self.tensor[u][v]
    }
}

pub fn multiplication_map(pres: &JacobianPresentation, q: usize) -> Result<ProductTable> {
    let r = pres.r();
    let left = pres.invariant(1).quotient_basis();
    let right = pres.invariant(q as u32).quotient_basis();
    let target = pres.invariant(q as u32 + 1);
    let mut tensor = Vec::with_capacity(left.len());
    for a in &left {
        let row = right
            .iter()
            .map(|b| {
                target.reduce_monomial(&a.mul(b)).ok_or_else(|| {
                    Error::Shape(format!("product outside the ({},{}) piece", q + 1, (q + 1) as u32 * r))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        tensor.push(row);
    }
    Ok(ProductTable {
        q,
        left,
        right,
        target_dim: target.dim(),
        tensor,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiggsRank {
    pub q: usize,
    pub rank: usize,
    pub target_dim: usize,
    pub surjective: bool,
}

/// Rank of `Sym^q R^N_{(1,r)} → R^N_{(q,qr)}`.
pub fn iterated_higgs_rank(pres: &JacobianPresentation, q: usize) -> Result<HiggsRank> {
    if q == 0 {
        return Err(Error::Precondition("iterated products start at q = 1".into()));
    }
    let basis = pres.invariant(1).quotient_basis();
    let target = pres.invariant(q as u32);
    let mut rows = Vec::new();
    for choice in multisets(basis.len(), q) {
        let mut mono = basis[choice[0]].clone();
        for &c in &choice[1..] {
            mono = mono.mul(&basis[c]);
        }
        let coords = target
            .reduce_monomial(&mono)
            .ok_or_else(|| Error::Shape("iterated product outside its piece".into()))?;
        rows.push(
            coords
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect::<Vec<_>>(),
        );
    }
    let rank = Echelon::from_scalar_rows(pres.field(), target.dim(), &rows)?.rank();
    Ok(HiggsRank {
        q,
        rank,
        target_dim: target.dim(),
        surjective: rank == target.dim(),
    })
}

/// Nondecreasing index sequences of length `len` over `0..size`.
pub(crate) fn multisets(size: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, size: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in start..size {
            cur.push(x);
            rec(x, size, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, size, len, &mut Vec::new(), &mut out);
    out
}

/// Pass/fail tally for one family of relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// A named polynomial expected to vanish in `R`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub family: &'static str,
    pub label: String,
    pub poly: Polynomial,
}

fn mu_y_product(k: usize, m: usize, factors: &[(usize, usize)], r: u32) -> Monomial {
    let mut mono = Monomial::one(k, m);
    for &(i, j) in factors {
        mono.mu[i] += 1;
        mono.y[j] += r;
    }
    mono
}

/// `Σ_j a_{ji} μ_i y_j^r` for each `i` and `Σ_i a_{ji} μ_i y_j^r` for each `j`.
pub fn basic_relations(params: &GenericParams) -> Result<Vec<Relation>> {
    let (n, k, m, r, f) = (params.n(), params.k(), params.m(), params.r(), params.field());
    let mut out = Vec::new();
    for i in 0..k {
        let poly = Polynomial::from_terms(
            k,
            m,
            f,
            (0..=n).map(|j| (params.get(j, i), mu_y_product(k, m, &[(i, j)], r))),
        )?;
        out.push(Relation {
            family: "basic_row",
            label: format!("i={i}"),
            poly,
        });
    }
    for j in 0..=n {
        let poly = Polynomial::from_terms(
            k,
            m,
            f,
            (0..k).map(|i| (params.get(j, i), mu_y_product(k, m, &[(i, j)], r))),
        )?;
        out.push(Relation {
            family: "basic_column",
            label: format!("j={j}"),
            poly,
        });
    }
    Ok(out)
}

/// The four derived families in the `(2, 2r)` piece, denominators cleared.
pub fn derived_relations(params: &GenericParams) -> Result<Vec<Relation>> {
    let (n, k, m, r, f) = (params.n(), params.k(), params.m(), params.r(), params.field());
    let a = |j: usize, i: usize| params.get(j, i);
    let mut out = Vec::new();
    let basic = basic_relations(params)?;
    for rel in &basic {
        for p in 0..k {
            for q in 0..=n {
                let poly = rel.poly.mul_monomial(&mu_y_product(k, m, &[(p, q)], r));
                let (family, label) = if rel.family == "basic_row" {
                    ("R1", format!("{},p={p},q={q}", rel.label))
                } else {
                    ("R2", format!("{},p={p},q={q}", rel.label))
                };
                out.push(Relation { family, label, poly });
            }
        }
    }
    for p in 0..k {
        for i in 0..k {
            if p == i {
                continue;
            }
            for q in 1..=n {
                let mut terms = vec![(
                    a(0, i) * a(q, p) - a(0, p) * a(q, i),
                    mu_y_product(k, m, &[(p, q), (i, q)], r),
                )];
                for j in (1..=n).filter(|&j| j != q) {
                    terms.push((
                        -(a(0, p) * a(j, i) - a(0, i) * a(j, p)),
                        mu_y_product(k, m, &[(p, q), (i, j)], r),
                    ));
                }
                out.push(Relation {
                    family: "R3",
                    label: format!("p={p},i={i},q={q}"),
                    poly: Polynomial::from_terms(k, m, f, terms)?,
                });
            }
        }
    }
    for p in 1..k {
        for j in 0..=n {
            for q in 0..=n {
                if j == q {
                    continue;
                }
                let mut terms = vec![(
                    a(j, 0) * a(q, p) - a(q, 0) * a(j, p),
                    mu_y_product(k, m, &[(p, j), (p, q)], r),
                )];
                for i in (1..k).filter(|&i| i != p) {
                    terms.push((
                        -(a(q, 0) * a(j, i) - a(j, 0) * a(q, i)),
                        mu_y_product(k, m, &[(i, j), (p, q)], r),
                    ));
                }
                out.push(Relation {
                    family: "R4",
                    label: format!("p={p},j={j},q={q}"),
                    poly: Polynomial::from_terms(k, m, f, terms)?,
                });
            }
        }
    }
    Ok(out)
}

/// Reduces every relation in `pres` and tallies the results per family.
pub fn check_relations(pres: &JacobianPresentation, relations: &[Relation]) -> Result<Vec<FamilyReport>> {
    let mut reports: Vec<FamilyReport> = Vec::new();
    for rel in relations {
        let poly = if rel.poly.field() == pres.field() {
            rel.poly.clone()
        } else {
            rel.poly.map_field(pres.field())?
        };
        let report = match reports.iter_mut().position(|r| r.name == rel.family) {
            Some(pos) => &mut reports[pos],
            None => {
                reports.push(FamilyReport {
                    name: rel.family.to_string(),
                    checked: 0,
                    failed: 0,
                    first_failure: None,
                });
                reports.last_mut().unwrap()
            }
        };
        report.checked += 1;
        if poly.is_zero() {
            continue;
        }
        let (p, q) = poly
            .bidegree()
            .ok_or_else(|| Error::Shape(format!("relation {} is not bihomogeneous", rel.label)))?;
        let piece = pres.graded_piece(p, q, 0);
        let coords = piece.reduce_to_basis(&poly)?;
        if coords.iter().any(|c| !c.is_zero()) {
            report.failed += 1;
            if report.first_failure.is_none() {
                report.first_failure = Some(rel.label.clone());
            }
        }
    }
    Ok(reports)
}

pub fn verify_basic_relations(pres: &JacobianPresentation) -> Result<Vec<FamilyReport>> {
    check_relations(pres, &basic_relations(pres.params())?)
}

pub fn verify_derived_relations(pres: &JacobianPresentation) -> Result<Vec<FamilyReport>> {
    check_relations(pres, &derived_relations(pres.params())?)
}

/// The quadratic forms `f_{ijpq}(λ) = λᵀ M_{ijpq} λ` giving the coordinates of
/// `α²` for `α = Σ λ_{ij} μ_i y_j^r`.
#[derive(Clone, Debug)]
pub struct QuadricSystem {
    pub n: usize,
    pub k: usize,
    pub field: Field,
    /// `(i, j)` per coordinate `λ_{ij}`, row-major in `i`.
    pub vars: Vec<(usize, usize)>,
    /// `(i, j, p, q)` per quadric, `i < p`, `j < q`.
    pub targets: Vec<(usize, usize, usize, usize)>,
    /// Symmetric matrix per quadric; off-diagonal entries hold half the cross coefficient.
    pub matrices: Vec<Vec<Vec<Scalar>>>,
    basis1: Vec<Monomial>,
}

impl QuadricSystem {
    pub fn var_index(&self, i: usize, j: usize) -> Option<usize> {
        self.vars.iter().position(|&v| v == (i, j))
    }

    pub fn target_index(&self, i: usize, j: usize, p: usize, q: usize) -> Option<usize> {
        self.targets.iter().position(|&t| t == (i, j, p, q))
    }

    /// Coefficient of `λ_u λ_v` in quadric `t` (of `λ_u^2` when `u == v`).
    pub fn coefficient(&self, t: usize, u: usize, v: usize) -> Scalar {
        let m = &self.matrices[t];
        if u == v {
            m[u][u].clone()
        } else {
            &m[u][v] + &m[v][u]
        }
    }

    pub fn evaluate(&self, lambda: &[Scalar]) -> Vec<Scalar> {
        self.matrices
            .iter()
            .map(|m| {
                let mut acc = self.field.zero();
                for (u, row) in m.iter().enumerate() {
                    if lambda[u].is_zero() {
                        continue;
                    }
                    for (v, x) in row.iter().enumerate() {
                        if !x.is_zero() && !lambda[v].is_zero() {
                            acc = acc + &(&lambda[u] * x) * &lambda[v];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// `α = Σ λ_{ij} μ_i y_j^r` as a polynomial.
    pub fn assemble(&self, lambda: &[Scalar]) -> Result<Polynomial> {
        let (k, m) = self.basis1[0].shape();
        Polynomial::from_terms(
            k,
            m,
            self.field,
            lambda.iter().cloned().zip(self.basis1.iter().cloned()),
        )
    }
}

/// Builds the quadric system from the basis-product table in product-basis coordinates.
pub fn quadric_system(pres: &JacobianPresentation) -> Result<QuadricSystem> {
    let pb1 = pres.product_basis(1)?;
    let pb2 = pres.product_basis(2)?;
    quadric_system_with(pres, &pb1, &pb2)
}

fn quadric_system_with(pres: &JacobianPresentation, pb1: &ProductBasis, pb2: &ProductBasis) -> Result<QuadricSystem> {
    let field = pres.field();
    let vars: Vec<(usize, usize)> = pb1.elements().iter().map(|(is, js, _)| (is[0], js[0])).collect();
    let basis1: Vec<Monomial> = pb1.elements().iter().map(|e| e.2.clone()).collect();
    let targets: Vec<(usize, usize, usize, usize)> = pb2
        .elements()
        .iter()
        .map(|(is, js, _)| (is[0], js[0], is[1], js[1]))
        .collect();
    let d = vars.len();
    let mut matrices = vec![vec![vec![field.zero(); d]; d]; targets.len()];
    for u in 0..d {
        for v in u..d {
            let coords = pb2
                .monomial_coordinates(&basis1[u].mul(&basis1[v]))
                .ok_or_else(|| Error::Shape("product outside the second piece".into()))?;
            for (t, c) in coords.into_iter().enumerate() {
                matrices[t][u][v] = c.clone();
                matrices[t][v][u] = c;
            }
        }
    }
    Ok(QuadricSystem {
        n: pres.n(),
        k: pres.k(),
        field,
        vars,
        targets,
        matrices,
        basis1,
    })
}

/// Checks `reduce(α²) == (f_t(λ))_t` for one coordinate vector.
pub fn quadric_round_trip(pres: &JacobianPresentation, qs: &QuadricSystem, lambda: &[Scalar]) -> Result<bool> {
    let alpha = qs.assemble(lambda)?;
    let square = alpha.mul(&alpha)?;
    let pb2 = pres.product_basis(2)?;
    Ok(pb2.coordinates(&square)? == qs.evaluate(lambda))
}

/// A computed coefficient that disagrees with its displayed formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientMismatch {
    pub tuple: (usize, usize, usize, usize),
    pub slot: String,
    pub computed: Scalar,
    /// `None` when the formula's denominator vanishes at the parameter.
    pub displayed: Option<Scalar>,
}

impl fmt::Display for CoefficientMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.displayed.as_ref().map_or("undefined".to_string(), |d| d.to_string());
        write!(
            f,
            "f_{:?} c^{}: computed {} displayed {}",
            self.tuple, self.slot, self.computed, shown
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientReport {
    pub tuples: usize,
    pub coefficients: usize,
    pub matched: usize,
    pub mismatches: Vec<CoefficientMismatch>,
    /// Nonzero coefficients outside the ten slots: `(tuple, (u, v), value)`.
    pub stray: Vec<((usize, usize, usize, usize), (usize, usize), Scalar)>,
    /// Computed coefficients equal to more than one displayed formula (value coincidences).
    pub ambiguous_values: usize,
}

impl CoefficientReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.stray.is_empty() && self.matched == self.coefficients
    }
}

/// Compares every quadric coefficient with the closed-form slot of the same label.
pub fn compare_coefficients(qs: &QuadricSystem, params: &GenericParams) -> Result<CoefficientReport> {
    let mut report = CoefficientReport::default();
    let d = qs.vars.len();
    for (t, &(i, j, p, q)) in qs.targets.iter().enumerate() {
        report.tuples += 1;
        let forms = coefficient_fractions(i, j, p, q, params)?;
        let corner_var = |c: Corner| {
            let (a, b) = c.index(i, j, p, q);
            qs.var_index(a, b).expect("corner variable exists")
        };
        let mut slot_of = std::collections::HashMap::new();
        for slot in Slot::ALL {
            let (c1, c2) = slot.corners();
            let (u, v) = (corner_var(c1), corner_var(c2));
            slot_of.insert((u.min(v), u.max(v)), slot);
        }
        for u in 0..d {
            for v in u..d {
                let value = qs.coefficient(t, u, v);
                match slot_of.get(&(u, v)) {
                    Some(&slot) => {
                        report.coefficients += 1;
                        let frac = &forms.iter().find(|e| e.0 == slot).unwrap().1;
                        if frac.matches(&value) {
                            report.matched += 1;
                        } else {
                            report.mismatches.push(CoefficientMismatch {
                                tuple: (i, j, p, q),
                                slot: slot.label(),
                                computed: value.clone(),
                                displayed: frac.value().ok(),
                            });
                        }
                        if forms.iter().filter(|(_, fr)| fr.matches(&value)).count() > 1 {
                            report.ambiguous_values += 1;
                        }
                    }
                    None => {
                        if !value.is_zero() {
                            report.stray.push(((i, j, p, q), (u, v), value));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Number of quadrics for an `(n, k)` system: `C(n,2) C(k-1,2)`.
pub fn quadric_count(n: usize, k: usize) -> usize {
    subsets(1, n, 2).len() * pairs(1, k - 1).len()
}
