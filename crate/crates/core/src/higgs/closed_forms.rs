//! Closed-form quadric coefficients and the 4x4 resultants built from them.
//!
//! For a tuple `i < p`, `j < q` the quadric `f_{ijpq}` involves only the four
//! coordinates `λ_ij, λ_iq, λ_pj, λ_pq`, and its ten coefficients are rational
//! functions of `a_ji, a_qi, a_jp, a_qp`. They are kept as unreduced fractions
//! so comparisons can be made by cross-multiplication.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{pairs, GenericParams};
use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::poly::{Field, Scalar};

/// Corner of the 2x2 index grid `{i, p} x {j, q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    Ij,
    Iq,
    Pj,
    Pq,
}

impl Corner {
    /// `(row, column)` of this corner for the tuple `(i, j, p, q)`.
    pub fn index(self, i: usize, j: usize, p: usize, q: usize) -> (usize, usize) {
        match self {
            Corner::Ij => (i, j),
            Corner::Iq => (i, q),
            Corner::Pj => (p, j),
            Corner::Pq => (p, q),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Corner::Ij => "ij",
            Corner::Iq => "iq",
            Corner::Pj => "pj",
            Corner::Pq => "pq",
        }
    }
}

/// One of the ten monomials `λ_u λ_v` that can occur in `f_{ijpq}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    IjIj,
    IqIq,
    PjPj,
    PqPq,
    IjIq,
    PjPq,
    IjPj,
    IqPq,
    IjPq,
    IqPj,
}

impl Slot {
    pub const ALL: [Slot; 10] = [
        Slot::IjIj,
        Slot::IqIq,
        Slot::PjPj,
        Slot::PqPq,
        Slot::IjIq,
        Slot::PjPq,
        Slot::IjPj,
        Slot::IqPq,
        Slot::IjPq,
        Slot::IqPj,
    ];

    pub fn corners(self) -> (Corner, Corner) {
        use Corner::*;
        match self {
            Slot::IjIj => (Ij, Ij),
            Slot::IqIq => (Iq, Iq),
            Slot::PjPj => (Pj, Pj),
            Slot::PqPq => (Pq, Pq),
            Slot::IjIq => (Ij, Iq),
            Slot::PjPq => (Pj, Pq),
            Slot::IjPj => (Ij, Pj),
            Slot::IqPq => (Iq, Pq),
            Slot::IjPq => (Ij, Pq),
            Slot::IqPj => (Iq, Pj),
        }
    }

    pub fn is_square(self) -> bool {
        let (a, b) = self.corners();
        a == b
    }

    /// Superscript label, e.g. `"ijiq"`.
    pub fn label(self) -> String {
        let (a, b) = self.corners();
        format!("{}{}", a.label(), b.label())
    }

    /// Looks a slot up by label, accepting either corner order (`"pjpq"` or `"pqpj"`).
    pub fn from_label(s: &str) -> Option<Slot> {
        Slot::ALL.into_iter().find(|slot| {
            let (a, b) = slot.corners();
            s == format!("{}{}", a.label(), b.label()) || s == format!("{}{}", b.label(), a.label())
        })
    }
}

/// An unreduced fraction of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: Scalar,
    pub den: Scalar,
}

impl Frac {
    fn of(x: Scalar) -> Frac {
        let one = x.field().one();
        Frac { num: x, den: one }
    }

    fn over(num: Scalar, den: Scalar) -> Frac {
        Frac { num, den }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac::over(&self.num * &o.num, &self.den * &o.den)
    }

    fn div(&self, o: &Frac) -> Frac {
        Frac::over(&self.num * &o.den, &self.den * &o.num)
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac::over(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }

    fn sub(&self, o: &Frac) -> Frac {
        Frac::over(&self.num * &o.den - &o.num * &self.den, &self.den * &o.den)
    }

    /// Exact value, or a non-generic error when the denominator vanishes.
    pub fn value(&self) -> Result<Scalar> {
        self.num
            .checked_div(&self.den)
            .ok_or_else(|| Error::NonGeneric("vanishing denominator".into()))
    }

    /// `num / den == x`, decided as `num == x * den`.
    pub fn matches(&self, x: &Scalar) -> bool {
        !self.den.is_zero() && self.num == x * &self.den
    }
}

fn check_tuple(i: usize, j: usize, p: usize, q: usize, params: &GenericParams) -> Result<()> {
    if !(1 <= i && i < p && p < params.k() && 1 <= j && j < q && q <= params.n()) {
        return Err(Error::Precondition(format!(
            "tuple ({i},{j},{p},{q}) outside 1 <= i < p <= {}, 1 <= j < q <= {}",
            params.k() - 1,
            params.n()
        )));
    }
    Ok(())
}

/// The ten coefficient formulas as unreduced fractions.
pub fn coefficient_fractions(
    i: usize,
    j: usize,
    p: usize,
    q: usize,
    params: &GenericParams,
) -> Result<Vec<(Slot, Frac)>> {
    check_tuple(i, j, p, q, params)?;
    let f = params.field();
    let one = Frac::of(f.one());
    let two = Frac::of(f.from_i64(2));
    let aji = Frac::of(params.get(j, i));
    let aqi = Frac::of(params.get(q, i));
    let ajp = Frac::of(params.get(j, p));
    let aqp = Frac::of(params.get(q, p));

    // (1/x) * ((y-1)/(x-1)) * (y (u - v)/(y - x) - u) + (w/x) * (u - y)/(w - x)
    let square = |x: &Frac, y: &Frac, u: &Frac, v: &Frac, w: &Frac| {
        let first = one
            .div(x)
            .mul(&y.sub(&one).div(&x.sub(&one)))
            .mul(&y.mul(&u.sub(v)).div(&y.sub(x)).sub(u));
        let second = w.div(x).mul(&u.sub(y).div(&w.sub(x)));
        first.add(&second)
    };
    let cross = |u: &Frac, v: &Frac, x: &Frac, y: &Frac| two.mul(&u.sub(v)).div(&x.sub(y));

    Ok(vec![
        (Slot::IjIj, square(&aji, &ajp, &aqp, &aqi, &aqi)),
        (Slot::IqIq, square(&aqi, &aqp, &ajp, &aji, &aji)),
        (Slot::PjPj, square(&ajp, &aji, &aqi, &aqp, &aqp)),
        (Slot::PqPq, square(&aqp, &aqi, &aji, &ajp, &ajp)),
        (Slot::IjIq, cross(&ajp, &aqp, &aqi, &aji)),
        (Slot::PjPq, cross(&aji, &aqi, &aqp, &ajp)),
        (Slot::IjPj, cross(&aqi, &aqp, &ajp, &aji)),
        (Slot::IqPq, cross(&aji, &ajp, &aqp, &aqi)),
        (Slot::IjPq, two.clone()),
        (Slot::IqPj, two),
    ])
}

/// Exact values of the ten coefficients of `f_{ijpq}`.
pub fn coefficient_closed_forms(
    i: usize,
    j: usize,
    p: usize,
    q: usize,
    params: &GenericParams,
) -> Result<Vec<(Slot, Scalar)>> {
    coefficient_fractions(i, j, p, q, params)?
        .into_iter()
        .map(|(slot, fr)| {
            fr.value().map(|v| (slot, v)).map_err(|_| {
                Error::NonGeneric(format!(
                    "denominator of c^{} for ({i},{j},{p},{q}) vanishes",
                    slot.label()
                ))
            })
        })
        .collect()
}

/// Determinant of the Sylvester-type matrix of two binary quadrics
/// `a x^2 + b x y + c y^2`.
pub fn resultant4(first: [&Scalar; 3], second: [&Scalar; 3]) -> Scalar {
    let f = first[0].field();
    let z = f.zero();
    let [a1, b1, c1] = first;
    let [a2, b2, c2] = second;
    let m = vec![
        vec![a1.clone(), z.clone(), a2.clone(), z.clone()],
        vec![b1.clone(), a1.clone(), b2.clone(), a2.clone()],
        vec![c1.clone(), b1.clone(), c2.clone(), b2.clone()],
        vec![z.clone(), c1.clone(), z, c2.clone()],
    ];
    determinant(f, &m).expect("4x4")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResultantKind {
    /// Column resultants `R_{jq}`, `2 <= j < q <= n`.
    Column,
    /// Row resultants `Q_{ip}`, `2 <= i < p <= k-1`.
    Row,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantEntry {
    pub kind: ResultantKind,
    pub a: usize,
    pub b: usize,
    pub value: Scalar,
}

impl ResultantEntry {
    pub fn name(&self) -> String {
        match self.kind {
            ResultantKind::Column => format!("R_({},{})", self.a, self.b),
            ResultantKind::Row => format!("Q_({},{})", self.a, self.b),
        }
    }
}

/// The two tuples and three slots feeding a resultant, in matrix order.
pub fn resultant_inputs(kind: ResultantKind, a: usize, b: usize) -> ([(usize, usize, usize, usize); 2], [Slot; 3]) {
    match kind {
        // f_{1,1,2,q} and f_{1,j,2,q}, coefficients of λ_1q^2, λ_1q λ_2q, λ_2q^2
        ResultantKind::Column => ([(1, 1, 2, b), (1, a, 2, b)], [Slot::IqIq, Slot::IqPq, Slot::PqPq]),
        // f_{1,1,p,2} and f_{i,1,p,2}, coefficients of λ_p1^2, λ_p1 λ_p2, λ_p2^2
        ResultantKind::Row => ([(1, 1, b, 2), (a, 1, b, 2)], [Slot::PjPj, Slot::PjPq, Slot::PqPq]),
    }
}

/// Every `R_{jq}` and `Q_{ip}` evaluated from the closed-form coefficients.
pub fn resultants(params: &GenericParams) -> Result<Vec<ResultantEntry>> {
    let mut out = Vec::new();
    // column resultants read rows 1 and 2
    let columns = if params.k() >= 3 { pairs(2, params.n()) } else { Vec::new() };
    let jobs = columns
        .into_iter()
        .map(|(a, b)| (ResultantKind::Column, a, b))
        .chain(pairs(2, params.k() - 1).into_iter().map(|(a, b)| (ResultantKind::Row, a, b)));
    for (kind, a, b) in jobs {
        let (tuples, slots) = resultant_inputs(kind, a, b);
        let mut coeffs = Vec::with_capacity(2);
        for (i, j, p, q) in tuples {
            let forms = coefficient_closed_forms(i, j, p, q, params)?;
            let pick = |s: Slot| forms.iter().find(|e| e.0 == s).unwrap().1.clone();
            coeffs.push([pick(slots[0]), pick(slots[1]), pick(slots[2])]);
        }
        let value = resultant4(
            [&coeffs[0][0], &coeffs[0][1], &coeffs[0][2]],
            [&coeffs[1][0], &coeffs[1][1], &coeffs[1][2]],
        );
        out.push(ResultantEntry { kind, a, b, value });
    }
    Ok(out)
}

/// Outcome of random evaluation of one resultant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityTestRecord {
    pub name: String,
    pub trials: usize,
    /// Points at which the value was nonzero.
    pub nonzero: usize,
    /// Points rejected because a coefficient denominator vanished.
    pub skipped: usize,
}

impl IdentityTestRecord {
    pub fn certified(&self) -> bool {
        self.nonzero > 0
    }
}

/// Evaluates every resultant at `trials` independent uniform points of `F_p`.
///
/// A resultant that is nonzero at one point is a nonzero rational function.
pub fn schwartz_zippel(
    n: usize,
    k: usize,
    r: u32,
    field: Field,
    trials: usize,
    seed: u64,
) -> Result<Vec<IdentityTestRecord>> {
    let Field::Prime(p) = field else {
        return Err(Error::UnsupportedField("random evaluation needs a prime field".into()));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records: Vec<IdentityTestRecord> = Vec::new();
    for _ in 0..trials {
        let a = (0..n)
            .map(|_| (0..k - 1).map(|_| field.from_i64(rng.gen_range(0..p) as i64)).collect())
            .collect();
        let params = GenericParams::new(n, k, r, field, a)?;
        let values = resultants(&params);
        if records.is_empty() {
            let template = resultants_template(n, k);
            records = template
                .into_iter()
                .map(|name| IdentityTestRecord {
                    name,
                    trials,
                    nonzero: 0,
                    skipped: 0,
                })
                .collect();
        }
        match values {
            Ok(vals) => {
                for (rec, v) in records.iter_mut().zip(vals) {
                    if !v.value.is_zero() {
                        rec.nonzero += 1;
                    }
                }
            }
            Err(_) => records.iter_mut().for_each(|rec| rec.skipped += 1),
        }
    }
    Ok(records)
}

fn resultants_template(n: usize, k: usize) -> Vec<String> {
    let columns = if k >= 3 { pairs(2, n) } else { Vec::new() };
    columns
        .into_iter()
        .map(|(a, b)| format!("R_({a},{b})"))
        .chain(pairs(2, k - 1).into_iter().map(|(a, b)| format!("Q_({a},{b})")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::sample_generic_params;

    fn fp() -> Field {
        Field::prime(1_000_003).unwrap()
    }

    #[test]
    fn constant_slots_are_two() {
        let params = sample_generic_params(3, 4, 2, fp(), 5).unwrap();
        for (i, p) in pairs(1, 3) {
            for (j, q) in pairs(1, 3) {
                let forms = coefficient_closed_forms(i, j, p, q, &params).unwrap();
                let get = |s| forms.iter().find(|e| e.0 == s).unwrap().1.clone();
                assert_eq!(get(Slot::IjPq), fp().from_i64(2));
                assert_eq!(get(Slot::IqPj), fp().from_i64(2));
            }
        }
    }

    #[test]
    fn cross_formula_by_hand() {
        let q = Field::Rational;
        let a = vec![
            vec![q.from_i64(2), q.from_i64(3), q.from_i64(5)],
            vec![q.from_i64(7), q.from_i64(11), q.from_i64(13)],
            vec![q.from_i64(17), q.from_i64(19), q.from_i64(23)],
        ];
        let params = GenericParams::new(3, 4, 2, q, a).unwrap();
        // (i,j,p,q) = (1,2,3,3): a_ji = a_21 = 7, a_qi = a_31 = 17, a_jp = a_23 = 13, a_qp = a_33 = 23
        let forms = coefficient_closed_forms(1, 2, 3, 3, &params).unwrap();
        let ijiq = &forms.iter().find(|e| e.0 == Slot::IjIq).unwrap().1;
        // 2 (13 - 23) / (17 - 7) = -2
        assert_eq!(ijiq, &q.from_i64(-2));
        let ijij = &forms.iter().find(|e| e.0 == Slot::IjIj).unwrap().1;
        // (1/7)(12/6)(13*6/6 - 23) + (17/7)(10/10) = (2/7)(-10) + 17/7 = -3/7
        assert_eq!(ijij, &q.parse("-3/7").unwrap());
    }

    #[test]
    fn tuple_and_denominator_errors() {
        let f = fp();
        let params = sample_generic_params(3, 4, 2, f, 1).unwrap();
        assert!(matches!(
            coefficient_closed_forms(2, 1, 1, 2, &params),
            Err(Error::Precondition(_))
        ));
        let bad = params.with_entry(1, 1, f.one()).unwrap();
        assert!(matches!(
            coefficient_closed_forms(1, 1, 2, 2, &bad),
            Err(Error::NonGeneric(_))
        ));
    }

    #[test]
    fn resultant_counts_and_singular_control() {
        let params = sample_generic_params(4, 5, 2, fp(), 3).unwrap();
        let res = resultants(&params).unwrap();
        // C(3,2) column and C(3,2) row resultants
        assert_eq!(res.len(), 6);
        assert!(res.iter().all(|e| !e.value.is_zero()));
        let f = fp();
        let (a, b, c) = (f.from_i64(3), f.from_i64(5), f.from_i64(7));
        let (a2, b2, c2) = (f.from_i64(6), f.from_i64(10), f.from_i64(14));
        assert!(resultant4([&a, &b, &c], [&a2, &b2, &c2]).is_zero());
        // x^2 - y^2 and x y share no root: resultant of distinct roots is nonzero
        let (one, zero, m1) = (f.one(), f.zero(), f.from_i64(-1));
        assert!(!resultant4([&one, &zero, &m1], [&zero, &one, &zero]).is_zero());
    }

    #[test]
    fn labels_round_trip() {
        for s in Slot::ALL {
            assert_eq!(Slot::from_label(&s.label()), Some(s));
        }
        assert_eq!(Slot::from_label("pqpj"), Some(Slot::PjPq));
        assert_eq!(Slot::from_label("pjqp"), None);
    }

    #[test]
    fn random_evaluation_certifies() {
        let f = Field::prime(1_000_000_007).unwrap();
        let recs = schwartz_zippel(3, 4, 2, f, 10, 9).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(recs.iter().all(|r| r.certified()));
    }

    #[test]
    fn record_names_follow_the_resultants() {
        let f = Field::prime(1_000_000_007).unwrap();
        assert!(schwartz_zippel(3, 2, 3, f, 3, 1).unwrap().is_empty());
        let recs = schwartz_zippel(5, 3, 3, f, 3, 1).unwrap();
        let params = sample_generic_params(5, 3, 3, f, 1).unwrap();
        let names: Vec<String> = resultants(&params).unwrap().iter().map(ResultantEntry::name).collect();
        assert_eq!(recs.iter().map(|r| r.name.clone()).collect::<Vec<_>>(), names);
        assert_eq!(names.len(), 6);
    }
}
