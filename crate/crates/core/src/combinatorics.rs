//! Exact binomial sums: the Euler-characteristic chain for twisted log forms
//! on `P^n`, and closed-form Hodge and signature counts.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Pascal triangle shared across calls; grows on demand.
fn table() -> &'static Mutex<Vec<Vec<BigInt>>> {
    static TABLE: OnceLock<Mutex<Vec<Vec<BigInt>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![vec![BigInt::one()]]))
}

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let n = n as usize;
    let mut rows = table().lock().expect("binomial table");
    while rows.len() <= n {
        let prev = rows.last().unwrap();
        let mut next = Vec::with_capacity(prev.len() + 1);
        next.push(BigInt::one());
        for w in prev.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        rows.push(next);
    }
    rows[n][k as usize].clone()
}

/// `C(n, k)` for signed arguments; zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `χ(O_{P^n}(d)) = C(n + d, n)`, valid for `d >= -n`.
pub fn chi_line_bundle(n: i64, d: i64) -> BigInt {
    binom(n + d, n)
}

/// Double sum `Σ_{i<=k} Σ_{j<=i} (-1)^{i+j} C(2n+2, j) C(n+1, k-i) χ(O(k-i+twist))`.
///
/// With `twist = 0` this is the Euler characteristic of the `k`-th wedge of
/// the graded pieces; the twist accounts for tensoring with `O(twist)`.
pub fn chi_wedge_twisted(n: i64, k: i64, twist: i64) -> BigInt {
    let mut total = BigInt::zero();
    for i in 0..=k {
        for j in 0..=i {
            total += sign(i + j) * binom(2 * n + 2, j) * binom(n + 1, k - i) * chi_line_bundle(n, k - i + twist);
        }
    }
    total
}

pub fn chi_wedge_table(n: i64, k: i64) -> BigInt {
    chi_wedge_twisted(n, k, 0)
}

/// Every stage of the chain ending in `(-1)^p C(n,p)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerChain {
    pub n: i64,
    pub p: i64,
    /// `Σ_k (-1)^{p-k} C(2n+1+p-k, p-k) χ_wedge(n, k; p-k)`.
    pub wedge_sum: BigInt,
    pub triple_sum: BigInt,
    pub double_sum: BigInt,
    pub regrouped_sum: BigInt,
    pub single_sum: BigInt,
    pub closed_form: BigInt,
}

impl EulerChain {
    pub fn stages(&self) -> [(&'static str, &BigInt); 6] {
        [
            ("wedge_sum", &self.wedge_sum),
            ("triple_sum", &self.triple_sum),
            ("double_sum", &self.double_sum),
            ("regrouped_sum", &self.regrouped_sum),
            ("single_sum", &self.single_sum),
            ("closed_form", &self.closed_form),
        ]
    }

    /// Names of stages that differ from the closed form.
    pub fn mismatches(&self) -> Vec<&'static str> {
        self.stages()
            .into_iter()
            .filter(|(_, v)| *v != &self.closed_form)
            .map(|(name, _)| name)
            .collect()
    }

    pub fn all_equal(&self) -> bool {
        self.mismatches().is_empty()
    }
}

pub fn euler_identity(n: i64, p: i64) -> EulerChain {
    assert!(0 <= p && p <= n, "need 0 <= p <= n");
    let mut wedge_sum = BigInt::zero();
    for k in 0..=p {
        wedge_sum += sign(p - k) * binom(2 * n + 1 + p - k, p - k) * chi_wedge_twisted(n, k, p - k);
    }
    let mut triple_sum = BigInt::zero();
    let mut double_sum = BigInt::zero();
    for i in 0..=p {
        for j in 0..=p - i {
            let common = binom(2 * n + 1 + i, i) * binom(n + 1, j) * binom(n + i + j, i + j);
            for k in 0..=p - i - j {
                triple_sum += sign(i + k) * &common * binom(2 * n + 2, p - i - j - k);
            }
            double_sum += sign(i) * &common * binom(2 * n + 1, p - i - j);
        }
    }
    let mut regrouped_sum = BigInt::zero();
    let mut single_sum = BigInt::zero();
    for l in 0..=p {
        for i in 0..=l {
            regrouped_sum +=
                sign(i) * binom(2 * n + 1 + i, i) * binom(n + 1, l - i) * binom(n + l, n) * binom(2 * n + 1, p - l);
        }
        let c = binom(n + l, l);
        single_sum += sign(l) * &c * &c * binom(2 * n + 1, p - l);
    }
    let c = binom(n, p);
    EulerChain {
        n,
        p,
        wedge_sum,
        triple_sum,
        double_sum,
        regrouped_sum,
        single_sum,
        closed_form: sign(p) * &c * &c,
    }
}

/// Hodge numbers `C(n,q) C(k-1,q)` and the signature of the invariant form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeClosedForms {
    pub n: u64,
    pub k: u64,
    pub h: Vec<BigInt>,
    /// `Σ_i C(n,2i) C(k-1,2i)`.
    pub p_sig: BigInt,
    /// `Σ_i C(n,2i+1) C(k-1,2i+1)`.
    pub q_sig: BigInt,
    pub total: BigInt,
    /// `p_sig + q_sig == Σ h`.
    pub signature_matches: bool,
    /// For `k - 1 = n`, whether `h_q = C(n,q)^2`.
    pub square_check: Option<bool>,
}

pub fn hodge_closed_forms(n: u64, k: u64) -> HodgeClosedForms {
    assert!(n >= 1 && k >= 1, "need n, k >= 1");
    let h: Vec<BigInt> = (0..=n).map(|q| binomial(n, q) * binomial(k - 1, q)).collect();
    let total: BigInt = h.iter().sum();
    let mut p_sig = BigInt::zero();
    let mut q_sig = BigInt::zero();
    for (q, hq) in h.iter().enumerate() {
        if q % 2 == 0 {
            p_sig += hq;
        } else {
            q_sig += hq;
        }
    }
    let square_check = (k - 1 == n).then(|| {
        h.iter()
            .enumerate()
            .all(|(q, hq)| *hq == binomial(n, q as u64) * binomial(n, q as u64))
    });
    HodgeClosedForms {
        n,
        k,
        signature_matches: &p_sig + &q_sig == total,
        h,
        p_sig,
        q_sig,
        total,
        square_check,
    }
}
