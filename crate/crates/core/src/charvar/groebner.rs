//! Buchberger's algorithm over `F_p` in graded reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{inv_mod, is_prime};

pub type Exponent = Vec<u16>;

/// Pairs processed before completion is abandoned.
pub const DEFAULT_PAIR_BUDGET: usize = 200_000;

fn degree(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

/// Graded reverse lexicographic comparison.
pub fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| {
        for t in (0..a.len()).rev() {
            if a[t] != b[t] {
                return b[t].cmp(&a[t]);
            }
        }
        Ordering::Equal
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Key(Exponent);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex(&self.0, &other.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Polynomial in the `λ` variables over `F_p`, terms in descending grevlex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaPoly {
    nvars: usize,
    prime: u64,
    terms: Vec<(Exponent, u64)>,
}

impl LambdaPoly {
    pub fn zero(nvars: usize, prime: u64) -> Self {
        LambdaPoly {
            nvars,
            prime,
            terms: Vec::new(),
        }
    }

    /// Sums like terms; coefficients are reduced mod `prime`.
    pub fn from_terms(nvars: usize, prime: u64, terms: impl IntoIterator<Item = (Exponent, u64)>) -> Result<Self> {
        let mut acc: BTreeMap<Key, u64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Shape(format!("exponent of length {} in {nvars} variables", e.len())));
            }
            let slot = acc.entry(Key(e)).or_insert(0);
            *slot = (*slot + c % prime) % prime;
        }
        Ok(Self::from_map(nvars, prime, acc))
    }

    fn from_map(nvars: usize, prime: u64, acc: BTreeMap<Key, u64>) -> Self {
        LambdaPoly {
            nvars,
            prime,
            terms: acc.into_iter().rev().filter(|(_, c)| *c != 0).map(|(k, c)| (k.0, c)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn terms(&self) -> &[(Exponent, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Exponent> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn coefficient(&self, e: &[u16]) -> u64 {
        self.terms.iter().find(|t| t.0 == e).map_or(0, |t| t.1)
    }

    /// `Some(d)` when every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = degree(&self.terms.first()?.0);
        self.terms.iter().all(|t| degree(&t.0) == d).then_some(d)
    }

    pub fn evaluate(&self, point: &[u64]) -> u64 {
        let p = self.prime;
        self.terms.iter().fold(0, |acc, (e, c)| {
            let mut v = *c;
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    v = mulmod(v, *x % p, p);
                }
            }
            (acc + v) % p
        })
    }

    pub fn monic(&self) -> Self {
        let Some(&(_, lc)) = self.terms.first() else {
            return self.clone();
        };
        let inv = inv_mod(lc, self.prime);
        LambdaPoly {
            nvars: self.nvars,
            prime: self.prime,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), mulmod(*c, inv, self.prime))).collect(),
        }
    }

    /// Renames variable `t` to `perm[t]`.
    pub fn permute_variables(&self, perm: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; self.nvars];
            for (t, &x) in e.iter().enumerate() {
                out[perm[t]] = x;
            }
            (out, *c)
        });
        Self::from_terms(self.nvars, self.prime, terms).expect("same shape")
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| **x > 0)
                    .map(|(t, x)| if *x == 1 { format!("x{t}") } else { format!("x{t}^{x}") })
                    .collect();
                if vars.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Monomial order used by [`IdealBasis`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
}

/// Generators of an ideal in `F_p[λ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    pub nvars: usize,
    pub prime: u64,
    pub order: MonomialOrder,
    pub polys: Vec<LambdaPoly>,
}

impl IdealBasis {
    pub fn new(nvars: usize, prime: u64, polys: Vec<LambdaPoly>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::UnsupportedField(format!("{prime} is not prime")));
        }
        if let Some(bad) = polys.iter().find(|f| f.nvars != nvars || f.prime != prime) {
            return Err(Error::Shape(format!(
                "generator in {} variables over F_{} added to an ideal in {nvars} variables over F_{prime}",
                bad.nvars, bad.prime
            )));
        }
        Ok(IdealBasis {
            nvars,
            prime,
            order: MonomialOrder::GrevLex,
            polys,
        })
    }
}

/// Reduced Gröbner basis with completion statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub nvars: usize,
    pub prime: u64,
    /// Monic, interreduced, in descending order of leading monomial.
    pub polys: Vec<LambdaPoly>,
    pub pairs_processed: usize,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> Vec<Exponent> {
        self.polys.iter().filter_map(|f| f.leading().cloned()).collect()
    }

    pub fn normal_form(&self, f: &LambdaPoly) -> LambdaPoly {
        let divisors: Vec<Packed> = self.polys.iter().map(Packed::from_poly).collect();
        let refs: Vec<&Packed> = divisors.iter().collect();
        reduce(&Packed::from_poly(f), &refs, f.prime).to_poly(f.nvars, f.prime)
    }

    /// Every S-polynomial of two basis elements reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let packed: Vec<Packed> = self.polys.iter().map(|g| Packed::from_poly(g).monic(self.prime)).collect();
        let refs: Vec<&Packed> = packed.iter().collect();
        packed.iter().enumerate().all(|(a, f)| {
            packed[a + 1..]
                .iter()
                .all(|g| reduce(&spoly_packed(f, g, self.prime), &refs, self.prime).is_zero())
        })
    }
}

/// Most variables a packed monomial holds.
const MAX_PACKED_VARS: usize = 31;
/// Largest total degree a packed monomial holds.
const MAX_PACKED_DEGREE: u32 = 127;
const HIGH: u64 = 0x8080_8080_8080_8080;

/// Exponent vector with one byte per variable. Variable `t` sits in word
/// `3 - t / 8` at byte `t % 8`, so comparing the words lexicographically
/// compares the exponents from the last variable down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Mono {
    deg: u32,
    w: [u64; 4],
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| other.w.cmp(&self.w))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mono {
    fn pack(e: &[u16]) -> Mono {
        let mut w = [0u64; 4];
        for (t, &x) in e.iter().enumerate() {
            w[3 - t / 8] |= (x as u64) << (8 * (t % 8));
        }
        Mono { deg: degree(e), w }
    }

    fn unpack(&self, nvars: usize) -> Exponent {
        (0..nvars)
            .map(|t| ((self.w[3 - t / 8] >> (8 * (t % 8))) & 0xff) as u16)
            .collect()
    }

    fn mul(&self, o: &Mono) -> Mono {
        Mono {
            deg: self.deg + o.deg,
            w: [self.w[0] + o.w[0], self.w[1] + o.w[1], self.w[2] + o.w[2], self.w[3] + o.w[3]],
        }
    }

    /// Bytewise `self <= o`; exponents stay below 128 so no borrow crosses bytes.
    fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && (0..4).all(|t| ((o.w[t] | HIGH) - self.w[t]) & HIGH == HIGH)
    }

    fn div(&self, o: &Mono) -> Mono {
        Mono {
            deg: self.deg - o.deg,
            w: [self.w[0] - o.w[0], self.w[1] - o.w[1], self.w[2] - o.w[2], self.w[3] - o.w[3]],
        }
    }

    fn bytes(&self) -> impl Iterator<Item = u8> + '_ {
        self.w.iter().flat_map(|x| x.to_be_bytes())
    }

    fn lcm(&self, o: &Mono) -> Mono {
        let mut w = [0u64; 4];
        let mut deg = 0;
        for (t, (a, b)) in self.bytes().zip(o.bytes()).enumerate() {
            let m = a.max(b);
            deg += m as u32;
            w[t / 8] |= (m as u64) << (8 * (7 - t % 8));
        }
        Mono { deg, w }
    }

    fn coprime(&self, o: &Mono) -> bool {
        self.bytes().zip(o.bytes()).all(|(a, b)| a == 0 || b == 0)
    }
}

/// Polynomial with packed exponents, terms in descending order.
#[derive(Clone, Debug)]
struct Packed {
    terms: Vec<(Mono, u64)>,
}

impl Packed {
    fn from_poly(f: &LambdaPoly) -> Packed {
        Packed {
            terms: f.terms.iter().map(|(e, c)| (Mono::pack(e), *c)).collect(),
        }
    }

    fn to_poly(&self, nvars: usize, prime: u64) -> LambdaPoly {
        LambdaPoly {
            nvars,
            prime,
            terms: self.terms.iter().map(|(m, c)| (m.unpack(nvars), *c)).collect(),
        }
    }

    fn lead(&self) -> &Mono {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn monic(mut self, p: u64) -> Packed {
        if let Some(&(_, lc)) = self.terms.first() {
            let inv = inv_mod(lc, p);
            for t in &mut self.terms {
                t.1 = mulmod(t.1, inv, p);
            }
        }
        self
    }
}

/// Full normal form of `f` by monic divisors.
fn reduce(f: &Packed, divisors: &[&Packed], p: u64) -> Packed {
    let mut work: BTreeMap<Mono, u64> = f.terms.iter().copied().collect();
    let mut rem: Vec<(Mono, u64)> = Vec::new();
    while let Some((e, c)) = work.pop_last() {
        match divisors.iter().find(|g| g.lead().divides(&e)) {
            Some(g) => {
                let shift = e.div(g.lead());
                for (ge, gc) in &g.terms[1..] {
                    let key = ge.mul(&shift);
                    let sub = p - mulmod(c, *gc, p);
                    match work.entry(key) {
                        std::collections::btree_map::Entry::Occupied(mut slot) => {
                            let next = (*slot.get() + sub) % p;
                            if next == 0 {
                                slot.remove();
                            } else {
                                *slot.get_mut() = next;
                            }
                        }
                        std::collections::btree_map::Entry::Vacant(slot) => {
                            slot.insert(sub % p);
                        }
                    }
                }
            }
            None => rem.push((e, c)),
        }
    }
    Packed { terms: rem }
}

fn spoly_packed(f: &Packed, g: &Packed, p: u64) -> Packed {
    let l = f.lead().lcm(g.lead());
    let (sf, sg) = (l.div(f.lead()), l.div(g.lead()));
    let mut acc: BTreeMap<Mono, u64> = BTreeMap::new();
    for (e, c) in &f.terms {
        *acc.entry(e.mul(&sf)).or_insert(0) += *c;
    }
    for (e, c) in &g.terms {
        let slot = acc.entry(e.mul(&sg)).or_insert(0);
        *slot = (*slot % p + p - c) % p;
    }
    Packed {
        terms: acc.into_iter().rev().map(|(m, c)| (m, c % p)).filter(|t| t.1 != 0).collect(),
    }
}

/// `S(f, g)` for monic `f`, `g`.
pub fn spoly(f: &LambdaPoly, g: &LambdaPoly) -> LambdaPoly {
    spoly_packed(&Packed::from_poly(f), &Packed::from_poly(g), f.prime).to_poly(f.nvars, f.prime)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

/// Gebauer–Möller update after appending `basis[h]`.
fn update(basis: &[Packed], active: &mut [bool], pairs: &mut Vec<Pair>, h: usize) {
    let lh = *basis[h].lead();
    let mut candidates: Vec<Pair> = (0..h)
        .filter(|&g| active[g])
        .map(|g| Pair {
            i: g,
            j: h,
            lcm: basis[g].lead().lcm(&lh),
        })
        .collect();
    candidates.sort_by(|a, b| a.lcm.cmp(&b.lcm).then(a.i.cmp(&b.i)));

    // drop pairs whose lcm is strictly divisible by another new lcm
    let candidates: Vec<Pair> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| d.lcm != c.lcm && d.lcm.divides(&c.lcm)))
        .cloned()
        .collect();
    // one pair per lcm, none if a pair with that lcm has coprime leading terms
    let mut kept: Vec<Pair> = Vec::new();
    let mut start = 0;
    while start < candidates.len() {
        let mut end = start + 1;
        while end < candidates.len() && candidates[end].lcm == candidates[start].lcm {
            end += 1;
        }
        let group = &candidates[start..end];
        if !group.iter().any(|c| basis[c.i].lead().coprime(&lh)) {
            kept.push(group[0].clone());
        }
        start = end;
    }

    // old pairs made redundant by h
    pairs.retain(|pr| {
        !(lh.divides(&pr.lcm)
            && basis[pr.i].lead().lcm(&lh) != pr.lcm
            && basis[pr.j].lead().lcm(&lh) != pr.lcm)
    });
    pairs.extend(kept);

    for g in 0..h {
        if active[g] && lh.divides(basis[g].lead()) {
            active[g] = false;
        }
    }
}

/// Buchberger completion with normal pair selection and a pair budget.
pub fn groebner_basis(ideal: &IdealBasis, budget: usize) -> Result<GroebnerBasis> {
    let p = ideal.prime;
    if ideal.nvars > MAX_PACKED_VARS {
        return Err(Error::Resource(format!(
            "Gröbner bases are computed in at most {MAX_PACKED_VARS} variables, got {}",
            ideal.nvars
        )));
    }
    let mut basis: Vec<Packed> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;

    let push = |h: Packed, basis: &mut Vec<Packed>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>| -> Result<()> {
        if h.lead().deg > MAX_PACKED_DEGREE / 2 {
            return Err(Error::Resource(format!(
                "basis element of degree {} exceeds the supported degree {}",
                h.lead().deg,
                MAX_PACKED_DEGREE / 2
            )));
        }
        basis.push(h.monic(p));
        active.push(true);
        update(basis, active, pairs, basis.len() - 1);
        Ok(())
    };

    let mut inputs: Vec<Packed> = ideal.polys.iter().filter(|f| !f.is_zero()).map(Packed::from_poly).collect();
    if let Some(f) = inputs.iter().find(|f| f.lead().deg > MAX_PACKED_DEGREE / 2) {
        return Err(Error::Resource(format!("generator of degree {} is too large", f.lead().deg)));
    }
    inputs.sort_by(|a, b| a.lead().cmp(b.lead()));
    for f in inputs {
        let divisors: Vec<&Packed> = basis.iter().zip(&active).filter(|(_, a)| **a).map(|(g, _)| g).collect();
        let h = reduce(&f, &divisors, p);
        if !h.is_zero() {
            push(h, &mut basis, &mut active, &mut pairs)?;
        }
    }

    while !pairs.is_empty() {
        if processed >= budget {
            return Err(Error::Resource(format!(
                "pair budget of {budget} exhausted with a partial basis of {} elements",
                active.iter().filter(|a| **a).count()
            )));
        }
        let best = (0..pairs.len())
            .min_by(|&x, &y| {
                pairs[x]
                    .lcm
                    .cmp(&pairs[y].lcm)
                    .then(pairs[x].j.cmp(&pairs[y].j))
                    .then(pairs[x].i.cmp(&pairs[y].i))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        processed += 1;
        let s = spoly_packed(&basis[pair.i], &basis[pair.j], p);
        let divisors: Vec<&Packed> = basis.iter().zip(&active).filter(|(_, a)| **a).map(|(g, _)| g).collect();
        let h = reduce(&s, &divisors, p);
        if !h.is_zero() {
            push(h, &mut basis, &mut active, &mut pairs)?;
        }
    }

    // interreduce the minimal basis
    let minimal: Vec<Packed> = basis.into_iter().zip(active).filter(|(_, a)| *a).map(|(g, _)| g).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (idx, g) in minimal.iter().enumerate() {
        let others: Vec<&Packed> = minimal.iter().enumerate().filter(|(o, _)| *o != idx).map(|(_, h)| h).collect();
        let tail = Packed {
            terms: g.terms[1..].to_vec(),
        };
        let mut terms = vec![g.terms[0]];
        terms.extend(reduce(&tail, &others, p).terms);
        reduced.push(Packed { terms });
    }
    reduced.sort_by(|a, b| b.lead().cmp(a.lead()));
    Ok(GroebnerBasis {
        nvars: ideal.nvars,
        prime: p,
        polys: reduced.iter().map(|g| g.to_poly(ideal.nvars, p)).collect(),
        pairs_processed: processed,
    })
}

/// Largest variable set containing the support of no leading monomial;
/// `None` when a leading monomial is constant. Ties go to the smallest bitmask.
pub fn max_independent_set(nvars: usize, leading: &[Exponent]) -> Option<Vec<usize>> {
    assert!(nvars < 32, "independent-set search supports at most 31 variables");
    let supports: Vec<u32> = leading
        .iter()
        .map(|e| e.iter().enumerate().filter(|(_, x)| **x > 0).fold(0u32, |m, (t, _)| m | (1 << t)))
        .collect();
    if supports.contains(&0) {
        return None;
    }
    let mut best: Option<u32> = None;
    for mask in 0u32..(1u32 << nvars) {
        if supports.iter().any(|s| s & !mask == 0) {
            continue;
        }
        if best.is_none_or(|b| mask.count_ones() > b.count_ones()) {
            best = Some(mask);
        }
    }
    best.map(|b| (0..nvars).filter(|t| b & (1 << t) != 0).collect())
}

/// Dimension data of an ideal's affine zero set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    /// `None` when the zero set is empty (unit ideal).
    pub cone_dim: Option<usize>,
    pub independent_set: Vec<usize>,
    pub basis_size: usize,
    /// Leading monomials of the reduced basis.
    pub staircase: Vec<Exponent>,
    pub pairs_processed: usize,
}

pub fn groebner_dimension(ideal: &IdealBasis) -> Result<DimensionReport> {
    groebner_dimension_with_budget(ideal, DEFAULT_PAIR_BUDGET)
}

pub fn groebner_dimension_with_budget(ideal: &IdealBasis, budget: usize) -> Result<DimensionReport> {
    let gb = groebner_basis(ideal, budget)?;
    let staircase = gb.leading_monomials();
    let set = max_independent_set(ideal.nvars, &staircase);
    Ok(DimensionReport {
        cone_dim: set.as_ref().map(Vec::len),
        independent_set: set.unwrap_or_default(),
        basis_size: gb.polys.len(),
        staircase,
        pairs_processed: gb.pairs_processed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: u64 = 1_000_003;

    #[test]
    fn too_many_variables() {
        let mut e = vec![0u16; 32];
        e[31] = 2;
        let f = LambdaPoly::from_terms(32, P, [(e, 1)]).unwrap();
        let id = IdealBasis::new(32, P, vec![f]).unwrap();
        assert!(matches!(groebner_basis(&id, 10), Err(Error::Resource(_))));
    }

    proptest! {
        #[test]
        fn packed_order_is_grevlex(a in proptest::collection::vec(0u16..6, 12), b in proptest::collection::vec(0u16..6, 12)) {
            let (pa, pb) = (Mono::pack(&a), Mono::pack(&b));
            prop_assert_eq!(pa.cmp(&pb), grevlex(&a, &b));
            prop_assert_eq!(pa.divides(&pb), a.iter().zip(&b).all(|(x, y)| x <= y));
            prop_assert_eq!(pa.lcm(&pb).unpack(12), a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect::<Vec<_>>());
            prop_assert_eq!(pa.mul(&pb).unpack(12), a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>());
        }
    }

    fn mono(e: &[u16]) -> Exponent {
        e.to_vec()
    }

    fn poly(nvars: usize, terms: &[(&[u16], u64)]) -> LambdaPoly {
        LambdaPoly::from_terms(nvars, P, terms.iter().map(|(e, c)| (mono(e), *c))).unwrap()
    }

    fn random_quadric(nvars: usize, rng: &mut ChaCha8Rng) -> LambdaPoly {
        let mut terms = Vec::new();
        for a in 0..nvars {
            for b in a..nvars {
                let mut e = vec![0; nvars];
                e[a] += 1;
                e[b] += 1;
                terms.push((e, rng.gen_range(0..P)));
            }
        }
        LambdaPoly::from_terms(nvars, P, terms).unwrap()
    }

    #[test]
    fn order_examples() {
        // x0 > x1 > x2, and x1^2 > x0 x2 in grevlex
        assert_eq!(grevlex(&[1, 0, 0], &[0, 1, 0]), Ordering::Greater);
        assert_eq!(grevlex(&[0, 2, 0], &[1, 0, 1]), Ordering::Greater);
        assert_eq!(grevlex(&[0, 0, 2], &[1, 0, 0]), Ordering::Greater);
        let f = poly(3, &[(&[0, 0, 1], 1), (&[1, 0, 1], 2), (&[0, 2, 0], 3)]);
        assert_eq!(f.leading(), Some(&vec![0, 2, 0]));
        assert_eq!(f.homogeneous_degree(), None);
    }

    #[test]
    fn coordinate_squares() {
        let i = IdealBasis::new(3, P, vec![poly(3, &[(&[2, 0, 0], 1)]), poly(3, &[(&[0, 2, 0], 1)])]).unwrap();
        let d = groebner_dimension(&i).unwrap();
        assert_eq!(d.cone_dim, Some(1));
        assert_eq!(d.independent_set, vec![2]);
    }

    #[test]
    fn zero_and_unit_ideals() {
        let z = IdealBasis::new(5, P, vec![]).unwrap();
        assert_eq!(groebner_dimension(&z).unwrap().cone_dim, Some(5));
        let u = IdealBasis::new(2, P, vec![poly(2, &[(&[0, 0], 4), (&[1, 0], 1)]), poly(2, &[(&[0, 0], 1)])]).unwrap();
        assert_eq!(groebner_dimension(&u).unwrap().cone_dim, None);
    }

    #[test]
    fn union_of_plane_and_line() {
        // (x y, x z): plane x = 0 and line y = z = 0
        let i = IdealBasis::new(3, P, vec![poly(3, &[(&[1, 1, 0], 1)]), poly(3, &[(&[1, 0, 1], 1)])]).unwrap();
        assert_eq!(groebner_dimension(&i).unwrap().cone_dim, Some(2));
    }

    #[test]
    fn twisted_cubic() {
        // 2x2 minors of [[x0,x1,x2],[x1,x2,x3]]: a curve, cone dimension 2
        let minus = P - 1;
        let i = IdealBasis::new(
            4,
            P,
            vec![
                poly(4, &[(&[1, 0, 1, 0], 1), (&[0, 2, 0, 0], minus)]),
                poly(4, &[(&[1, 0, 0, 1], 1), (&[0, 1, 1, 0], minus)]),
                poly(4, &[(&[0, 1, 0, 1], 1), (&[0, 0, 2, 0], minus)]),
            ],
        )
        .unwrap();
        let gb = groebner_basis(&i, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(gb.polys.len(), 3);
        assert_eq!(max_independent_set(4, &gb.leading_monomials()).unwrap().len(), 2);
    }

    #[test]
    fn generic_complete_intersections() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (nvars, count) in [(4, 1), (5, 2), (6, 3), (6, 4)] {
            let polys = (0..count).map(|_| random_quadric(nvars, &mut rng)).collect();
            let i = IdealBasis::new(nvars, P, polys).unwrap();
            assert_eq!(groebner_dimension(&i).unwrap().cone_dim, Some(nvars - count));
        }
    }

    #[test]
    fn basis_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let polys: Vec<LambdaPoly> = (0..3).map(|_| random_quadric(5, &mut rng)).collect();
        let i = IdealBasis::new(5, P, polys.clone()).unwrap();
        let gb = groebner_basis(&i, DEFAULT_PAIR_BUDGET).unwrap();
        for f in &polys {
            assert!(gb.normal_form(f).is_zero());
        }
        for a in 0..gb.polys.len() {
            assert_eq!(gb.polys[a].terms[0].1, 1);
            for b in a + 1..gb.polys.len() {
                assert!(gb.normal_form(&spoly(&gb.polys[a], &gb.polys[b])).is_zero());
            }
        }
    }

    #[test]
    fn budget_exhaustion() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let polys = (0..4).map(|_| random_quadric(6, &mut rng)).collect();
        let i = IdealBasis::new(6, P, polys).unwrap();
        assert!(matches!(groebner_dimension_with_budget(&i, 1), Err(Error::Resource(_))));
    }

    #[test]
    fn ideal_shape_checks() {
        assert!(IdealBasis::new(2, 1_000_001, vec![]).is_err());
        assert!(IdealBasis::new(3, P, vec![LambdaPoly::zero(2, P)]).is_err());
    }

    #[test]
    fn evaluation() {
        let f = poly(2, &[(&[2, 0], 1), (&[1, 1], 3)]);
        assert_eq!(f.evaluate(&[2, 5]), 34);
    }

    proptest! {
        #[test]
        fn generator_order_irrelevant(seed in 0u64..500, rot in 0usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut polys: Vec<LambdaPoly> = (0..4).map(|_| random_quadric(5, &mut rng)).collect();
            let a = groebner_basis(&IdealBasis::new(5, P, polys.clone()).unwrap(), DEFAULT_PAIR_BUDGET).unwrap();
            polys.rotate_left(rot);
            polys.reverse();
            let b = groebner_basis(&IdealBasis::new(5, P, polys).unwrap(), DEFAULT_PAIR_BUDGET).unwrap();
            prop_assert_eq!(a.polys, b.polys);
        }

        #[test]
        fn dimension_stable_under_renaming(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let polys: Vec<LambdaPoly> = (0..2).map(|_| {
                // binomial quadrics give a non-generic staircase
                let a = rng.gen_range(0..5);
                let b = rng.gen_range(0..5);
                let mut e1 = vec![0u16; 5];
                e1[a] += 2;
                let mut e2 = vec![0u16; 5];
                e2[b] += 1;
                e2[(b + 1) % 5] += 1;
                LambdaPoly::from_terms(5, P, [(e1, 1), (e2, rng.gen_range(1..P))]).unwrap()
            }).collect();
            let perm = [3usize, 0, 4, 1, 2];
            let moved: Vec<LambdaPoly> = polys.iter().map(|f| f.permute_variables(&perm)).collect();
            let d1 = groebner_dimension(&IdealBasis::new(5, P, polys).unwrap()).unwrap().cone_dim;
            let d2 = groebner_dimension(&IdealBasis::new(5, P, moved).unwrap()).unwrap().cone_dim;
            prop_assert_eq!(d1, d2);
        }
    }
}
