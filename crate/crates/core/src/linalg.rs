//! Exact sparse row echelon forms over `F_p` and `Q`, plus small dense helpers.
//!
//! Columns are plain indices; index 0 is the leading column. A row's pivot is
//! its smallest column. Elimination is structured by leading column: rows
//! are bucketed on their first entry, the shortest row of each bucket becomes
//! the pivot and the rest are pushed down. The pivot set depends only on the
//! row space and the column order, so quotient bases are canonical.
//!
//! Over `Q` rows are kept as primitive integer vectors with a positive leading
//! entry, and elimination is fraction free: `r <- (P_c/g) r - (r_c/g) P`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{bigint_mod, inv_mod, Field, Scalar};

pub type RowFp = Vec<(usize, u64)>;
pub type RowQ = Vec<(usize, BigInt)>;

/// Echelon basis of a row space over `F_p`.
#[derive(Clone, Debug)]
pub struct EchelonFp {
    p: u64,
    ncols: usize,
    /// Rows with leading coefficient 1, indexed by `pivot_of`.
    rows: Vec<RowFp>,
    pivot_of: Vec<Option<usize>>,
}

/// Echelon basis of a row space over `Q`, stored as primitive integer rows,
/// together with its reduced form.
#[derive(Clone, Debug)]
pub struct EchelonQ {
    ncols: usize,
    rows: Vec<RowQ>,
    pivot_of: Vec<Option<usize>>,
    /// Per pivot row with pivot `c`: `(num, den)` with `e_c ≡ Σ (num_d / den) e_d`
    /// modulo the row space, `d` ranging over non-pivot columns.
    reduced: Vec<(RowQ, BigInt)>,
}

/// Prime used to pick a candidate row basis before rational elimination.
const GUIDE_PRIME: u64 = 2_147_483_647;

#[derive(Clone, Debug)]
pub enum Echelon {
    Fp(EchelonFp),
    Q(EchelonQ),
}

fn sub_scaled_fp(r: &[(usize, u64)], f: u64, piv: &[(usize, u64)], p: u64) -> RowFp {
    // r - f * piv
    let mut out = Vec::with_capacity(r.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < piv.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = piv.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(r[i]);
            i += 1;
        } else if cj < ci {
            let v = (p - f * piv[j].1 % p) % p;
            if v != 0 {
                out.push((cj, v));
            }
            j += 1;
        } else {
            let v = (r[i].1 + p - f * piv[j].1 % p) % p;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn combine_q(a: &BigInt, r: &[(usize, BigInt)], b: &BigInt, piv: &[(usize, BigInt)]) -> RowQ {
    // a * r - b * piv
    let mut out = Vec::with_capacity(r.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < piv.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = piv.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, a * &r[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &piv[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &piv[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn make_primitive(row: &mut RowQ) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let flip = row.first().is_some_and(|e| e.1.is_negative());
    if g.is_zero() {
        return;
    }
    if flip {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn normalize_fp(row: &mut RowFp, p: u64) {
    row.retain(|e| e.1 % p != 0);
    row.sort_by_key(|e| e.0);
}

impl EchelonFp {
    pub fn new(p: u64, ncols: usize, rows: Vec<RowFp>) -> Self {
        Self::with_origins(p, ncols, rows).0
    }

    /// Also returns, per pivot row, the index of the input row it descends from.
    /// Those input rows are a basis of the row space.
    pub fn with_origins(p: u64, ncols: usize, rows: Vec<RowFp>) -> (Self, Vec<usize>) {
        let mut buckets: Vec<Vec<(usize, RowFp)>> = vec![Vec::new(); ncols];
        for (origin, mut row) in rows.into_iter().enumerate() {
            for e in row.iter_mut() {
                e.1 %= p;
            }
            normalize_fp(&mut row, p);
            if let Some(&(c, _)) = row.first() {
                buckets[c].push((origin, row));
            }
        }
        let mut out = EchelonFp {
            p,
            ncols,
            rows: Vec::new(),
            pivot_of: vec![None; ncols],
        };
        let mut origins = Vec::new();
        for c in 0..ncols {
            let mut bucket = std::mem::take(&mut buckets[c]);
            if bucket.is_empty() {
                continue;
            }
            let best = (0..bucket.len())
                .min_by_key(|&i| (bucket[i].1.len(), bucket[i].0))
                .expect("bucket is nonempty");
            let (origin, mut piv) = bucket.swap_remove(best);
            let inv = inv_mod(piv[0].1, p);
            for e in piv.iter_mut() {
                e.1 = e.1 * inv % p;
            }
            for (o, row) in bucket {
                let f = row[0].1;
                let red = sub_scaled_fp(&row, f, &piv, p);
                if let Some(&(c2, _)) = red.first() {
                    debug_assert!(c2 > c);
                    buckets[c2].push((o, red));
                }
            }
            out.pivot_of[c] = Some(out.rows.len());
            out.rows.push(piv);
            origins.push(origin);
        }
        (out, origins)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_of[c].is_some()).collect()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_of[c].is_some()
    }

    /// Remainder of `v` modulo the row space; supported on non-pivot columns.
    pub fn reduce(&self, v: &[(usize, u64)]) -> RowFp {
        let p = self.p;
        let mut acc = vec![0u64; self.ncols];
        for &(c, x) in v {
            acc[c] = (acc[c] + x % p) % p;
        }
        for c in 0..self.ncols {
            if acc[c] == 0 {
                continue;
            }
            if let Some(ri) = self.pivot_of[c] {
                let f = acc[c];
                for &(cc, x) in &self.rows[ri] {
                    acc[cc] = (acc[cc] + p - f * x % p) % p;
                }
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|e| e.1 != 0)
            .collect()
    }
}

impl EchelonQ {
    /// Rows independent mod a guide prime are independent over `Q`, so they are
    /// eliminated first; the remaining rows are then tested for membership and
    /// any outside the span join a second elimination.
    pub fn new(ncols: usize, rows: Vec<RowQ>) -> Self {
        let rows: Vec<RowQ> = rows
            .into_iter()
            .map(|mut row| {
                row.retain(|e| !e.1.is_zero());
                row.sort_by_key(|e| e.0);
                make_primitive(&mut row);
                row
            })
            .collect();
        let modular: Vec<RowFp> = rows.iter().map(|r| row_mod(r, GUIDE_PRIME)).collect();
        let (_, origins) = EchelonFp::with_origins(GUIDE_PRIME, ncols, modular);
        let mut chosen = vec![false; rows.len()];
        for &o in &origins {
            chosen[o] = true;
        }
        let basis: Vec<RowQ> = (0..rows.len()).filter(|&i| chosen[i]).map(|i| rows[i].clone()).collect();
        let first = Self::eliminate(ncols, basis.clone());
        let missing: Vec<RowQ> = (0..rows.len())
            .filter(|&i| !chosen[i] && !first.contains(&rows[i]))
            .map(|i| rows[i].clone())
            .collect();
        if missing.is_empty() {
            first
        } else {
            Self::eliminate(ncols, basis.into_iter().chain(missing).collect())
        }
    }

    fn eliminate(ncols: usize, rows: Vec<RowQ>) -> Self {
        let mut buckets: Vec<Vec<RowQ>> = vec![Vec::new(); ncols];
        for row in rows {
            if let Some(c) = row.first().map(|e| e.0) {
                buckets[c].push(row);
            }
        }
        let mut out = EchelonQ {
            ncols,
            rows: Vec::new(),
            pivot_of: vec![None; ncols],
            reduced: Vec::new(),
        };
        for c in 0..ncols {
            let mut bucket = std::mem::take(&mut buckets[c]);
            if bucket.is_empty() {
                continue;
            }
            let best = (0..bucket.len())
                .min_by_key(|&i| (bucket[i].len(), bucket[i][0].1.bits()))
                .expect("bucket is nonempty");
            let piv = bucket.swap_remove(best);
            for row in bucket {
                let g = row[0].1.gcd(&piv[0].1);
                let a = &piv[0].1 / &g;
                let b = &row[0].1 / &g;
                let mut red = combine_q(&a, &row, &b, &piv);
                make_primitive(&mut red);
                if let Some(c2) = red.first().map(|e| e.0) {
                    debug_assert!(c2 > c);
                    buckets[c2].push(red);
                }
            }
            out.pivot_of[c] = Some(out.rows.len());
            out.rows.push(piv);
        }
        out.back_substitute();
        out
    }

    /// Fills `reduced` by clearing pivot columns from the last pivot up.
    fn back_substitute(&mut self) {
        let mut reduced: Vec<Option<(RowQ, BigInt)>> = vec![None; self.rows.len()];
        for c in (0..self.ncols).rev() {
            let Some(ri) = self.pivot_of[c] else { continue };
            let row = &self.rows[ri];
            let lead = &row[0].1;
            let mut den = BigInt::one();
            let mut acc: std::collections::BTreeMap<usize, BigInt> = std::collections::BTreeMap::new();
            for (cc, x) in &row[1..] {
                match self.pivot_of[*cc] {
                    None => *acc.entry(*cc).or_insert_with(BigInt::zero) += x * &den,
                    Some(rj) => {
                        // e_cc is congruent to its reduced form
                        let (num, d) = reduced[rj].as_ref().expect("later pivots are reduced");
                        let l = den.lcm(d);
                        let up = &l / &den;
                        if !up.is_one() {
                            for v in acc.values_mut() {
                                *v *= &up;
                            }
                        }
                        let f = x * (&l / d);
                        for (dd, y) in num {
                            *acc.entry(*dd).or_insert_with(BigInt::zero) += &f * y;
                        }
                        den = l;
                    }
                }
            }
            // lead e_c + acc/den lies in the row space, so e_c ≡ -acc / (den lead)
            let mut num: RowQ = acc.into_iter().filter(|e| !e.1.is_zero()).map(|(c, v)| (c, -v)).collect();
            let mut d = den * lead;
            let mut g = d.clone();
            for (_, v) in &num {
                g = g.gcd(v);
            }
            if d.is_negative() {
                g = -g;
            }
            d = &d / &g;
            for e in num.iter_mut() {
                e.1 = &e.1 / &g;
            }
            reduced[ri] = Some((num, d));
        }
        self.reduced = reduced.into_iter().map(|e| e.expect("every pivot reduced")).collect();
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_of[c].is_some()).collect()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_of[c].is_some()
    }

    /// Whether an integer row lies in the row space.
    pub fn contains(&self, v: &RowQ) -> bool {
        let mut l = BigInt::one();
        for (c, _) in v {
            if let Some(ri) = self.pivot_of[*c] {
                l = l.lcm(&self.reduced[ri].1);
            }
        }
        let mut acc: std::collections::BTreeMap<usize, BigInt> = std::collections::BTreeMap::new();
        for (c, x) in v {
            match self.pivot_of[*c] {
                None => *acc.entry(*c).or_insert_with(BigInt::zero) += x * &l,
                Some(ri) => {
                    let (num, d) = &self.reduced[ri];
                    let f = x * (&l / d);
                    for (dd, y) in num {
                        *acc.entry(*dd).or_insert_with(BigInt::zero) += &f * y;
                    }
                }
            }
        }
        acc.values().all(Zero::is_zero)
    }

    /// Remainder of a rational vector modulo the row space.
    pub fn reduce(&self, v: &[(usize, BigRational)]) -> Vec<(usize, BigRational)> {
        let mut acc: std::collections::BTreeMap<usize, BigRational> = std::collections::BTreeMap::new();
        for (c, x) in v {
            if x.is_zero() {
                continue;
            }
            match self.pivot_of[*c] {
                None => *acc.entry(*c).or_insert_with(BigRational::zero) += x,
                Some(ri) => {
                    let (num, d) = &self.reduced[ri];
                    let f = x / BigRational::from_integer(d.clone());
                    for (dd, y) in num {
                        *acc.entry(*dd).or_insert_with(BigRational::zero) += &f * BigRational::from_integer(y.clone());
                    }
                }
            }
        }
        acc.into_iter().filter(|e| !e.1.is_zero()).collect()
    }
}

impl Echelon {
    /// Echelon form of scalar rows; every entry must lie in `field`.
    pub fn from_scalar_rows(field: Field, ncols: usize, rows: &[Vec<(usize, Scalar)>]) -> Result<Self> {
        for row in rows {
            for (c, x) in row {
                if *c >= ncols {
                    return Err(Error::Shape(format!("column {c} out of range {ncols}")));
                }
                if x.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field.to_string(),
                        right: x.field().to_string(),
                    });
                }
            }
        }
        Ok(match field {
            Field::Prime(p) => Echelon::Fp(EchelonFp::new(
                p,
                ncols,
                rows.iter()
                    .map(|r| r.iter().map(|(c, x)| (*c, x.residue().unwrap())).collect())
                    .collect(),
            )),
            Field::Rational => Echelon::Q(EchelonQ::new(
                ncols,
                rows.iter().map(|r| clear_denominators(r)).collect(),
            )),
        })
    }

    pub fn field(&self) -> Field {
        match self {
            Echelon::Fp(e) => Field::Prime(e.p),
            Echelon::Q(_) => Field::Rational,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Echelon::Fp(e) => e.rank(),
            Echelon::Q(e) => e.rank(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Echelon::Fp(e) => e.ncols(),
            Echelon::Q(e) => e.ncols(),
        }
    }

    pub fn pivots(&self) -> Vec<usize> {
        match self {
            Echelon::Fp(e) => e.pivots(),
            Echelon::Q(e) => e.pivots(),
        }
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        match self {
            Echelon::Fp(e) => e.is_pivot(c),
            Echelon::Q(e) => e.is_pivot(c),
        }
    }

    pub fn reduce(&self, v: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        match self {
            Echelon::Fp(e) => {
                let f = Field::Prime(e.p);
                let row: RowFp = v.iter().map(|(c, x)| (*c, x.residue().expect("residue"))).collect();
                e.reduce(&row)
                    .into_iter()
                    .map(|(c, x)| (c, f.from_i64(x as i64)))
                    .collect()
            }
            Echelon::Q(e) => {
                let row: Vec<(usize, BigRational)> = v
                    .iter()
                    .map(|(c, x)| (*c, x.as_rational().expect("rational").clone()))
                    .collect();
                e.reduce(&row)
                    .into_iter()
                    .map(|(c, x)| (c, Scalar::Rational(x)))
                    .collect()
            }
        }
    }
}

/// Integer multiple of a rational row with the same span.
pub fn clear_denominators(row: &[(usize, Scalar)]) -> RowQ {
    let mut den = BigInt::one();
    for (_, x) in row {
        den = den.lcm(x.as_rational().expect("rational entry").denom());
    }
    row.iter()
        .map(|(c, x)| {
            let q = x.as_rational().unwrap();
            (*c, q.numer() * (&den / q.denom()))
        })
        .collect()
}

/// Reduces an integer row into `F_p`; used when rational data is known to be integral.
pub fn row_mod(row: &RowQ, p: u64) -> RowFp {
    row.iter().map(|(c, x)| (*c, bigint_mod(x, p))).collect()
}

/// Rank of a list of scalar rows.
pub fn rank(field: Field, ncols: usize, rows: &[Vec<(usize, Scalar)>]) -> Result<usize> {
    Ok(Echelon::from_scalar_rows(field, ncols, rows)?.rank())
}

fn check_square(m: &[Vec<Scalar>], field: Field) -> Result<usize> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::Shape(format!("row of length {} in a {n}x{n} matrix", row.len())));
        }
        if let Some(x) = row.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: x.field().to_string(),
            });
        }
    }
    Ok(n)
}

/// Determinant; Bareiss over `Q` after clearing row denominators, Gaussian over `F_p`.
pub fn determinant(field: Field, m: &[Vec<Scalar>]) -> Result<Scalar> {
    let n = check_square(m, field)?;
    if n == 0 {
        return Ok(field.one());
    }
    match field {
        Field::Rational => {
            let mut scale = BigInt::one();
            let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
            for row in m {
                let mut den = BigInt::one();
                for x in row {
                    den = den.lcm(x.as_rational().unwrap().denom());
                }
                scale *= &den;
                a.push(
                    row.iter()
                        .map(|x| {
                            let q = x.as_rational().unwrap();
                            q.numer() * (&den / q.denom())
                        })
                        .collect(),
                );
            }
            let det = bareiss(a);
            Ok(Scalar::Rational(BigRational::new(det, scale)))
        }
        Field::Prime(p) => {
            let mut a: Vec<Vec<u64>> = m
                .iter()
                .map(|r| r.iter().map(|x| x.residue().unwrap()).collect())
                .collect();
            let mut det = 1u64;
            for col in 0..n {
                let Some(pr) = (col..n).find(|&r| a[r][col] != 0) else {
                    return Ok(field.zero());
                };
                if pr != col {
                    a.swap(pr, col);
                    det = (p - det) % p;
                }
                det = det * a[col][col] % p;
                let inv = inv_mod(a[col][col], p);
                for r in col + 1..n {
                    let f = a[r][col] * inv % p;
                    if f == 0 {
                        continue;
                    }
                    for c in col..n {
                        a[r][c] = (a[r][c] + p - f * a[col][c] % p) % p;
                    }
                }
            }
            Ok(field.from_i64(det as i64))
        }
    }
}

/// Fraction-free determinant of an integer matrix.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(sw) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse by Gauss-Jordan, `None` when singular.
pub fn inverse(field: Field, m: &[Vec<Scalar>]) -> Result<Option<Vec<Vec<Scalar>>>> {
    let n = check_square(m, field)?;
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(None);
        };
        a.swap(pr, col);
        inv.swap(pr, col);
        let pinv = a[col][col].inv().unwrap();
        for c in 0..n {
            a[col][c] = &a[col][c] * &pinv;
            inv[col][c] = &inv[col][c] * &pinv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                if !a[col][c].is_zero() {
                    let d = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &d;
                }
                if !inv[col][c].is_zero() {
                    let d = &f * &inv[col][c];
                    inv[r][c] = &inv[r][c] - &d;
                }
            }
        }
    }
    Ok(Some(inv))
}

/// Matrix-vector product `m * v`.
pub fn mat_vec(field: Field, m: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(field.zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp() -> Field {
        Field::prime(101).unwrap()
    }

    fn srow(f: Field, v: &[i64]) -> Vec<(usize, Scalar)> {
        v.iter()
            .enumerate()
            .filter(|e| *e.1 != 0)
            .map(|(c, x)| (c, f.from_i64(*x)))
            .collect()
    }

    fn dense(f: Field, m: &[&[i64]]) -> Vec<Vec<Scalar>> {
        m.iter().map(|r| r.iter().map(|x| f.from_i64(*x)).collect()).collect()
    }

    #[test]
    fn echelon_rank_and_pivots() {
        for f in [fp(), Field::Rational] {
            let rows = vec![
                srow(f, &[0, 2, 4, 0]),
                srow(f, &[0, 1, 2, 1]),
                srow(f, &[0, 3, 6, 1]),
            ];
            let e = Echelon::from_scalar_rows(f, 4, &rows).unwrap();
            assert_eq!(e.rank(), 2);
            assert_eq!(e.pivots(), vec![1, 3]);
            // (0,1,2,0) is in the row space
            assert!(e.reduce(&srow(f, &[0, 1, 2, 0])).is_empty());
            let rem = e.reduce(&srow(f, &[5, 1, 0, 0]));
            assert_eq!(rem, srow(f, &[5, 0, -2, 0]));
        }
    }

    #[test]
    fn rational_reduce_keeps_fractions() {
        let q = Field::Rational;
        let rows = vec![srow(q, &[3, 1])];
        let e = Echelon::from_scalar_rows(q, 2, &rows).unwrap();
        let rem = e.reduce(&srow(q, &[1, 0]));
        assert_eq!(rem, vec![(1, q.parse("-1/3").unwrap())]);
    }

    #[test]
    fn determinants() {
        let m: &[&[i64]] = &[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]];
        for f in [fp(), Field::Rational] {
            assert_eq!(determinant(f, &dense(f, m)).unwrap(), f.from_i64(6));
        }
        let sing: &[&[i64]] = &[&[1, 2], &[2, 4]];
        assert!(determinant(Field::Rational, &dense(Field::Rational, sing))
            .unwrap()
            .is_zero());
        let half = vec![
            vec![Field::Rational.parse("1/2").unwrap(), Field::Rational.from_i64(1)],
            vec![Field::Rational.from_i64(1), Field::Rational.from_i64(4)],
        ];
        assert_eq!(determinant(Field::Rational, &half).unwrap(), Field::Rational.from_i64(1));
        let swap: &[&[i64]] = &[&[0, 1], &[1, 0]];
        assert_eq!(
            determinant(Field::Rational, &dense(Field::Rational, swap)).unwrap(),
            Field::Rational.from_i64(-1)
        );
    }

    #[test]
    fn inverses() {
        let m: &[&[i64]] = &[&[2, 1], &[5, 3]];
        for f in [fp(), Field::Rational] {
            let inv = inverse(f, &dense(f, m)).unwrap().unwrap();
            assert_eq!(inv, dense(f, &[&[3, -1], &[-5, 2]]));
        }
        let sing: &[&[i64]] = &[&[1, 2], &[2, 4]];
        assert!(inverse(fp(), &dense(fp(), sing)).unwrap().is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..4, c), r)
        })
    }

    proptest! {
        #[test]
        fn q_and_fp_agree_on_small_integer_matrices(m in small_matrix()) {
            let ncols = m[0].len();
            let q = Field::Rational;
            let f = Field::prime(1_000_003).unwrap();
            let rq: Vec<_> = m.iter().map(|r| srow(q, r)).collect();
            let rf: Vec<_> = m.iter().map(|r| srow(f, r)).collect();
            let eq = Echelon::from_scalar_rows(q, ncols, &rq).unwrap();
            let ef = Echelon::from_scalar_rows(f, ncols, &rf).unwrap();
            prop_assert_eq!(eq.rank(), ef.rank());
            prop_assert_eq!(eq.pivots(), ef.pivots());
            // every input row reduces to zero
            for r in &rq {
                prop_assert!(eq.reduce(r).is_empty());
            }
            for r in &rf {
                prop_assert!(ef.reduce(r).is_empty());
            }
        }

        #[test]
        fn pivots_independent_of_row_order(m in small_matrix(), seed in 0u64..1000) {
            let ncols = m[0].len();
            let f = fp();
            let mut rows: Vec<_> = m.iter().map(|r| srow(f, r)).collect();
            let a = Echelon::from_scalar_rows(f, ncols, &rows).unwrap();
            let len = rows.len();
            rows.rotate_left((seed as usize) % len);
            rows.reverse();
            let b = Echelon::from_scalar_rows(f, ncols, &rows).unwrap();
            prop_assert_eq!(a.pivots(), b.pivots());
        }

        #[test]
        fn bareiss_matches_gaussian(m in (1usize..5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-5i64..6, n), n))) {
            let q = Field::Rational;
            let f = Field::prime(1_000_003).unwrap();
            let dq = determinant(q, &m.iter().map(|r| r.iter().map(|x| q.from_i64(*x)).collect()).collect::<Vec<_>>()).unwrap();
            let df = determinant(f, &m.iter().map(|r| r.iter().map(|x| f.from_i64(*x)).collect()).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(f.coerce(&dq).unwrap(), df);
        }
    }
}
