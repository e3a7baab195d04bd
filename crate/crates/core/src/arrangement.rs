//! Ordered hyperplane arrangements and their normalized parameter matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::higgs::closed_forms;
use crate::linalg::{determinant, inverse, mat_vec};
use crate::poly::{Field, Scalar};

/// Retry budget of the generic-parameter sampler.
pub const SAMPLE_RETRIES: usize = 64;

/// Coefficient matrix of `m` hyperplanes in `P^n`; column `j` holds the
/// linear form defining `H_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementMatrix {
    n: usize,
    m: usize,
    field: Field,
    entries: Vec<Vec<Scalar>>,
}

impl ArrangementMatrix {
    /// `entries` is row-major with `n + 1` rows and `m >= n + 2` columns.
    ///
    /// Zero columns are accepted here and simply fail the general-position test.
    pub fn new(n: usize, field: Field, entries: Vec<Vec<Scalar>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("ambient dimension must be positive".into()));
        }
        if entries.len() != n + 1 {
            return Err(Error::Shape(format!(
                "{} rows for an arrangement in P^{n}",
                entries.len()
            )));
        }
        let m = entries[0].len();
        if m < n + 2 {
            return Err(Error::Shape(format!(
                "{m} hyperplanes in P^{n}; need at least {}",
                n + 2
            )));
        }
        for row in &entries {
            if row.len() != m {
                return Err(Error::Shape("ragged arrangement matrix".into()));
            }
            if let Some(x) = row.iter().find(|x| x.field() != field) {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: x.field().to_string(),
                });
            }
        }
        Ok(ArrangementMatrix {
            n,
            m,
            field,
            entries,
        })
    }

    /// Builds the matrix from its columns.
    pub fn from_columns(n: usize, field: Field, columns: &[Vec<Scalar>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != n + 1) {
            return Err(Error::Shape(format!("columns must have length {}", n + 1)));
        }
        let entries = (0..=n)
            .map(|i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::new(n, field, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    pub fn entries(&self) -> &[Vec<Scalar>] {
        &self.entries
    }

    fn minor(&self, cols: &[usize]) -> Scalar {
        let sub: Vec<Vec<Scalar>> = self
            .entries
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        determinant(self.field, &sub).expect("square minor")
    }

    /// First `(n+1)`-subset of columns whose minor vanishes, if any.
    pub fn vanishing_minor(&self) -> Option<Vec<usize>> {
        let size = self.n + 1;
        let mut cols: Vec<usize> = (0..size).collect();
        loop {
            if self.minor(&cols).is_zero() {
                return Some(cols);
            }
            // next combination in lexicographic order
            let mut i = size;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if cols[i] < self.m - size + i {
                    break;
                }
                if i == 0 {
                    return None;
                }
            }
            cols[i] += 1;
            for t in i + 1..size {
                cols[t] = cols[t - 1] + 1;
            }
        }
    }
}

/// True iff every maximal minor is nonzero.
pub fn is_general_position(a: &ArrangementMatrix) -> bool {
    a.vanishing_minor().is_none()
}

/// Normalized parameter matrix `a = (a_{ji})`, `1 <= j <= n`, `1 <= i <= k-1`.
///
/// The border values `a_{j0} = a_{0i} = 1` are implicit; [`GenericParams::get`]
/// supplies them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericParams {
    n: usize,
    k: usize,
    r: u32,
    field: Field,
    a: Vec<Vec<Scalar>>,
}

/// `n = k r - k - 1`, with `k >= 2` and `r >= 2`.
pub fn check_shape(n: usize, k: usize, r: u32) -> Result<()> {
    if k < 2 || r < 2 {
        return Err(Error::Precondition(format!(
            "need k >= 2 and r >= 2, got k = {k}, r = {r}"
        )));
    }
    let expected = (k * r as usize).checked_sub(k + 1);
    if expected != Some(n) || n == 0 {
        return Err(Error::Precondition(format!(
            "n = {n} does not equal k r - k - 1 for k = {k}, r = {r}"
        )));
    }
    Ok(())
}

/// Fields in which the cover of degree `r` can be handled.
pub fn check_field(field: Field, r: u32) -> Result<()> {
    if let Field::Prime(p) = field {
        if p == 2 || p % r as u64 == 0 {
            return Err(Error::UnsupportedField(format!(
                "characteristic {p} divides the cover degree {r} or is 2"
            )));
        }
    }
    Ok(())
}

impl GenericParams {
    pub fn new(n: usize, k: usize, r: u32, field: Field, a: Vec<Vec<Scalar>>) -> Result<Self> {
        check_shape(n, k, r)?;
        if a.len() != n || a.iter().any(|row| row.len() != k - 1) {
            return Err(Error::Shape(format!(
                "parameter matrix must be {n} x {}",
                k - 1
            )));
        }
        if let Some(x) = a.iter().flatten().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: x.field().to_string(),
            });
        }
        Ok(GenericParams { n, k, r, field, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of hyperplanes, `k r`.
    pub fn m(&self) -> usize {
        self.k * self.r as usize
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.a
    }

    /// `a_{ji}` for `0 <= j <= n`, `0 <= i <= k-1`, with the border set to one.
    pub fn get(&self, j: usize, i: usize) -> Scalar {
        if j == 0 || i == 0 {
            self.field.one()
        } else {
            self.a[j - 1][i - 1].clone()
        }
    }

    /// Row-major flattening of the stored matrix.
    pub fn flat(&self) -> Vec<Scalar> {
        self.a.iter().flatten().cloned().collect()
    }

    /// Same parameters viewed in another field.
    pub fn map_field(&self, field: Field) -> Result<Self> {
        check_field(field, self.r)?;
        let a = self
            .a
            .iter()
            .map(|row| row.iter().map(|x| field.coerce(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(GenericParams { a, field, ..self.clone() })
    }

    /// Copy with one stored entry replaced.
    pub fn with_entry(&self, j: usize, i: usize, value: Scalar) -> Result<Self> {
        if j == 0 || i == 0 || j > self.n || i >= self.k {
            return Err(Error::Shape(format!("no stored entry a_({j},{i})")));
        }
        let mut out = self.clone();
        out.a[j - 1][i - 1] = self.field.coerce(&value)?;
        Ok(out)
    }
}

/// The arrangement in normal form: the `n+1` coordinate hyperplanes followed by
/// the columns `(1, a_{1i}, .., a_{ni})` for `i = 0..k-1`.
pub fn canonical_matrix(params: &GenericParams) -> ArrangementMatrix {
    let n = params.n;
    let f = params.field;
    let mut columns = Vec::with_capacity(params.m());
    for j in 0..=n {
        columns.push((0..=n).map(|t| if t == j { f.one() } else { f.zero() }).collect());
    }
    for i in 0..params.k {
        columns.push((0..=n).map(|j| params.get(j, i)).collect());
    }
    ArrangementMatrix::from_columns(n, f, &columns).expect("canonical shape")
}

/// Normal form of a double-cover arrangement (`m = 2n + 2`).
pub fn normalize_arrangement(a: &ArrangementMatrix) -> Result<GenericParams> {
    let n = a.n;
    if a.m != 2 * n + 2 {
        return Err(Error::UnsupportedShape(format!(
            "normal form is only available for m = 2n + 2, got m = {} with n = {n}",
            a.m
        )));
    }
    if let Some(cols) = a.vanishing_minor() {
        return Err(Error::Precondition(format!(
            "arrangement is not in general position (columns {cols:?})"
        )));
    }
    let f = a.field;
    let basis: Vec<Vec<Scalar>> = a.entries.iter().map(|row| row[..=n].to_vec()).collect();
    let binv = inverse(f, &basis)?.expect("general position makes the frame invertible");
    // H_{n+2} = B c; c has no zero entries by general position.
    let c = mat_vec(f, &binv, &a.column(n + 1));
    let cinv: Vec<Scalar> = c
        .iter()
        .map(|x| x.inv().expect("frame weights are nonzero"))
        .collect();
    let mut out = vec![Vec::with_capacity(n); n];
    for col in n + 2..a.m {
        // coordinates in the frame B diag(c)
        let coords: Vec<Scalar> = mat_vec(f, &binv, &a.column(col))
            .iter()
            .zip(&cinv)
            .map(|(x, w)| x * w)
            .collect();
        let top = coords[0].inv().expect("general position keeps the top entry nonzero");
        for (j, row) in out.iter_mut().enumerate() {
            row.push(&coords[j + 1] * &top);
        }
    }
    GenericParams::new(n, n + 1, 2, f, out)
}

/// Which part of the genericity screen rejected a parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScreenFailure {
    GeneralPosition(Vec<usize>),
    Denominator(String),
    Coefficient(String),
    Resultant(String),
}

impl std::fmt::Display for ScreenFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScreenFailure::GeneralPosition(cols) => {
                write!(f, "general position: vanishing minor on columns {cols:?}")
            }
            ScreenFailure::Denominator(s) => write!(f, "denominator: {s}"),
            ScreenFailure::Coefficient(s) => write!(f, "coefficient: {s}"),
            ScreenFailure::Resultant(s) => write!(f, "resultant: {s}"),
        }
    }
}

/// Runs every genericity condition; `Ok(())` when the parameter passes.
pub fn screen(params: &GenericParams) -> std::result::Result<(), ScreenFailure> {
    let n = params.n;
    let k = params.k;
    // Entries avoid the border value and repeat neither along rows nor columns:
    // these are all denominators of the coefficient formulas.
    for j in 1..=n {
        for i in 1..k {
            let x = params.get(j, i);
            if x.is_zero() || x.is_one() {
                return Err(ScreenFailure::Denominator(format!("a_({j},{i}) = {x}")));
            }
            for i2 in i + 1..k {
                if x == params.get(j, i2) {
                    return Err(ScreenFailure::Denominator(format!(
                        "a_({j},{i}) = a_({j},{i2})"
                    )));
                }
            }
            for j2 in j + 1..=n {
                if x == params.get(j2, i) {
                    return Err(ScreenFailure::Denominator(format!(
                        "a_({j},{i}) = a_({j2},{i})"
                    )));
                }
            }
        }
    }
    let arr = canonical_matrix(params);
    if let Some(cols) = arr.vanishing_minor() {
        return Err(ScreenFailure::GeneralPosition(cols));
    }
    for (i, p) in pairs(1, k - 1) {
        for (j, q) in pairs(1, n) {
            let forms = closed_forms::coefficient_closed_forms(i, j, p, q, params)
                .map_err(|e| ScreenFailure::Denominator(e.to_string()))?;
            if let Some((slot, _)) = forms.iter().find(|(_, v)| v.is_zero()) {
                return Err(ScreenFailure::Coefficient(format!(
                    "{} of ({i},{j},{p},{q}) vanishes",
                    slot.label()
                )));
            }
        }
    }
    let res = closed_forms::resultants(params).map_err(|e| ScreenFailure::Resultant(e.to_string()))?;
    if let Some(entry) = res.iter().find(|e| e.value.is_zero()) {
        return Err(ScreenFailure::Resultant(format!("{} vanishes", entry.name())));
    }
    Ok(())
}

/// Index pairs `lo <= a < b <= hi`.
pub(crate) fn pairs(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in lo..=hi {
        for b in a + 1..=hi {
            out.push((a, b));
        }
    }
    out
}

/// Seeded draw of a parameter matrix passing [`screen`].
///
/// Over `Q` entries are integers in `[2, 997]`; over `F_p` they are uniform
/// residues other than 0 and 1.
pub fn sample_generic_params(n: usize, k: usize, r: u32, field: Field, seed: u64) -> Result<GenericParams> {
    check_shape(n, k, r)?;
    check_field(field, r)?;
    if let Field::Prime(p) = field {
        if p <= 3 {
            return Err(Error::UnsupportedField(format!("F_{p} has no residues besides 0 and 1 to sample")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for _ in 0..SAMPLE_RETRIES {
        let a: Vec<Vec<Scalar>> = (0..n)
            .map(|_| {
                (0..k - 1)
                    .map(|_| match field {
                        Field::Rational => field.from_i64(rng.gen_range(2..=997)),
                        Field::Prime(p) => field.from_i64(rng.gen_range(2..p) as i64),
                    })
                    .collect()
            })
            .collect();
        let params = GenericParams::new(n, k, r, field, a)?;
        match screen(&params) {
            Ok(()) => return Ok(params),
            Err(why) => last = why.to_string(),
        }
    }
    Err(Error::Genericity {
        attempts: SAMPLE_RETRIES,
        reason: last,
    })
}

#[derive(Serialize, Deserialize)]
struct ParamsDoc {
    n: usize,
    k: usize,
    r: u32,
    field: Field,
    a: Vec<Value>,
}

/// Serializes parameters as a JSON document with fields `n, k, r, field, a`.
pub fn params_to_json(params: &GenericParams) -> Value {
    let a = params
        .flat()
        .iter()
        .map(|x| match x {
            Scalar::Rational(_) => Value::String(x.to_file_string()),
            Scalar::Residue { value, .. } => Value::from(*value),
        })
        .collect();
    serde_json::to_value(ParamsDoc {
        n: params.n,
        k: params.k,
        r: params.r,
        field: params.field,
        a,
    })
    .expect("plain data serializes")
}

pub fn params_from_json(doc: &Value) -> Result<GenericParams> {
    let doc: ParamsDoc =
        serde_json::from_value(doc.clone()).map_err(|e| Error::Format(e.to_string()))?;
    if let Field::Prime(p) = doc.field {
        Field::prime(p)?;
    }
    check_shape(doc.n, doc.k, doc.r)?;
    check_field(doc.field, doc.r)?;
    let width = doc.k - 1;
    if doc.a.len() != doc.n * width {
        return Err(Error::Format(format!(
            "expected {} entries in a, found {}",
            doc.n * width,
            doc.a.len()
        )));
    }
    let mut flat = Vec::with_capacity(doc.a.len());
    for v in &doc.a {
        let s = match v {
            Value::String(s) => s.clone(),
            Value::Number(num) => num.to_string(),
            other => return Err(Error::Format(format!("bad scalar {other}"))),
        };
        flat.push(doc.field.parse(&s)?);
    }
    let a = flat.chunks(width).map(|c| c.to_vec()).collect();
    GenericParams::new(doc.n, doc.k, doc.r, doc.field, a)
}

pub fn read_params_file(path: &std::path::Path) -> Result<GenericParams> {
    let text = std::fs::read_to_string(path)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
    params_from_json(&doc)
}

pub fn write_params_file(path: &std::path::Path, params: &GenericParams) -> Result<()> {
    let text = serde_json::to_string_pretty(&params_to_json(params)).expect("json");
    std::fs::write(path, text + "\n")?;
    Ok(())
}
