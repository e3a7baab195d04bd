//! Weights of `∧^n C^{2n}` under `sp_{2n}` and the dimension arithmetic
//! that rules it out as certain representations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};

/// Coefficients over `L_1, .., L_n`.
pub type WeightVector = Vec<i64>;

/// Weight to multiplicity.
pub type WeightMultiset = BTreeMap<WeightVector, u64>;

/// Largest `n` accepted by [`wedge_weights`].
pub const MAX_WEDGE_N: usize = 10;

/// Sums of `n` distinct elements of `{±L_1, .., ±L_n}`.
pub fn wedge_weights(n: usize) -> Result<WeightMultiset> {
    if n == 0 || n > MAX_WEDGE_N {
        return Err(Error::Resource(format!(
            "wedge weights are enumerated for 1 <= n <= {MAX_WEDGE_N}, got {n}"
        )));
    }
    let mut out = WeightMultiset::new();
    // bit t < n selects +L_t, bit n + t selects -L_t
    let full = 1u32 << (2 * n);
    for mask in 0..full {
        if mask.count_ones() as usize != n {
            continue;
        }
        let mut w = vec![0i64; n];
        for t in 0..n {
            if mask & (1 << t) != 0 {
                w[t] += 1;
            }
            if mask & (1 << (n + t)) != 0 {
                w[t] -= 1;
            }
        }
        *out.entry(w).or_insert(0) += 1;
    }
    Ok(out)
}

pub fn total_multiplicity(ws: &WeightMultiset) -> u64 {
    ws.values().sum()
}

/// `mult(α) = mult(-α)` for every weight.
pub fn weight_symmetry_check(ws: &WeightMultiset) -> bool {
    ws.iter().all(|(w, m)| {
        let neg: WeightVector = w.iter().map(|x| -x).collect();
        ws.get(&neg) == Some(m)
    })
}

/// In the closed Weyl chamber: `a_1 >= a_2 >= .. >= a_n >= 0`.
pub fn is_dominant(w: &[i64]) -> bool {
    w.windows(2).all(|p| p[0] >= p[1]) && w.last().is_none_or(|x| *x >= 0)
}

fn dominated_by(a: &[i64], b: &[i64]) -> bool {
    a != b && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// The unique dominant weight not coordinatewise-dominated by another
/// dominant weight, with its multiplicity; `None` if that element is not unique.
pub fn highest_weight(ws: &WeightMultiset) -> Option<(WeightVector, u64)> {
    let dominant: Vec<(&WeightVector, &u64)> = ws.iter().filter(|(w, _)| is_dominant(w)).collect();
    let maximal: Vec<_> = dominant
        .iter()
        .filter(|(w, _)| !dominant.iter().any(|(v, _)| dominated_by(w, v)))
        .collect();
    match maximal.as_slice() {
        [(w, m)] => Some(((*w).clone(), **m)),
        _ => None,
    }
}

pub fn is_power_of_two(x: &BigInt) -> bool {
    x > &BigInt::zero() && (x & (x - BigInt::one())).is_zero()
}

/// Integer facts about `dim ∧^n C^{2n} = C(2n, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionRow {
    pub n: u64,
    pub dim: BigInt,
    pub power_of_two: bool,
    /// `m` with `2m + 1 = dim`, if the dimension is odd.
    pub odd_m: Option<BigInt>,
    /// `m` with `2m = dim`, if the dimension is even.
    pub even_m: Option<BigInt>,
}

pub fn obstruction_row(n: u64) -> ObstructionRow {
    let dim = binomial(2 * n, n);
    let two = BigInt::from(2);
    let (half, rem) = dim.div_rem(&two);
    ObstructionRow {
        n,
        power_of_two: is_power_of_two(&dim),
        odd_m: (!rem.is_zero()).then(|| half.clone()),
        even_m: rem.is_zero().then_some(half),
        dim,
    }
}

/// Rows for `2 <= n <= n_max`.
pub fn dimension_obstructions(n_max: u64) -> Result<Vec<ObstructionRow>> {
    if n_max > 30 {
        return Err(Error::Resource(format!("n_max = {n_max} exceeds 30")));
    }
    Ok((2..=n_max).map(obstruction_row).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_wedges() {
        let w1 = wedge_weights(1).unwrap();
        assert_eq!(w1, WeightMultiset::from([(vec![1], 1), (vec![-1], 1)]));
        let w2 = wedge_weights(2).unwrap();
        assert_eq!(total_multiplicity(&w2), 6);
        assert_eq!(w2[&vec![0, 0]], 2);
        let w3 = wedge_weights(3).unwrap();
        assert_eq!(total_multiplicity(&w3), 20);
        assert_eq!(highest_weight(&w3), Some((vec![1, 1, 1], 1)));
        assert!(wedge_weights(0).is_err());
        assert!(wedge_weights(11).is_err());
    }

    #[test]
    fn symmetry_controls() {
        assert!(!weight_symmetry_check(&WeightMultiset::from([(vec![1], 1)])));
        assert!(weight_symmetry_check(&WeightMultiset::from([(vec![0, 0], 3)])));
    }

    #[test]
    fn all_wedges_to_ten() {
        for n in 1..=MAX_WEDGE_N {
            let ws = wedge_weights(n).unwrap();
            assert_eq!(BigInt::from(total_multiplicity(&ws)), binomial(2 * n as u64, n as u64));
            assert!(weight_symmetry_check(&ws));
            assert_eq!(highest_weight(&ws), Some((vec![1; n], 1)));
        }
    }

    #[test]
    fn obstruction_examples() {
        let r3 = obstruction_row(3);
        assert_eq!(r3.dim, BigInt::from(20));
        assert!(!r3.power_of_two);
        assert_eq!(r3.even_m, Some(BigInt::from(10)));
        assert_eq!(r3.odd_m, None);
        assert!(!obstruction_row(2).power_of_two);
        assert!(obstruction_row(1).power_of_two);
        let rows = dimension_obstructions(30).unwrap();
        assert_eq!(rows.len(), 29);
        assert!(rows.iter().all(|r| !r.power_of_two && r.odd_m.is_none()));
        assert!(dimension_obstructions(31).is_err());
    }

    #[test]
    fn dominance() {
        assert!(is_dominant(&[2, 1, 0]));
        assert!(!is_dominant(&[1, 2, 0]));
        assert!(!is_dominant(&[1, 0, -1]));
        // two incomparable maximal weights
        let ws = WeightMultiset::from([(vec![2, 0], 1), (vec![1, 1], 1)]);
        assert_eq!(highest_weight(&ws), None);
    }
}
