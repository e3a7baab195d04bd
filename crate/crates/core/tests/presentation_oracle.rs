//! Dimensions of invariant pieces against an independent presentation.
//!
//! Writing `z_j = y_j^r`, the invariant ring is
//! `k[μ_0.., z_0..z_n] / (μ_i Σ_j a_ji z_j, z_j Σ_i a_ji μ_i)` in bidegree `(q, q)`.
//! That ring does not see `r`, and its pieces are computed here with a
//! dense elimination that shares nothing with the library's sparse code.

use cycov_core::arrangement::sample_generic_params;
use cycov_core::combinatorics::binomial;
use cycov_core::jacobian::JacobianPresentation;
use cycov_core::{Field, GenericParams};
use num_bigint::BigInt;

const P: u64 = 1_000_003;

fn exponents(vars: usize, degree: usize) -> Vec<Vec<usize>> {
    if vars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=degree {
        for mut rest in exponents(vars - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn dense_rank(mut m: Vec<Vec<u64>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, pivot);
        let inv = pow(m[rank][c], P - 2);
        for x in m[rank].iter_mut() {
            *x = *x * inv % P;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for cc in c..cols {
                    let sub = f * m[rank][cc] % P;
                    m[r][cc] = (m[r][cc] + P - sub) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn entry(params: &GenericParams, j: usize, i: usize) -> u64 {
    params.get(j, i).residue().unwrap()
}

/// `dim` of the `(q, q)` piece of the reduced presentation.
fn oracle_dim(params: &GenericParams, q: usize) -> usize {
    let (n, k) = (params.n(), params.k());
    let nz = n + 1;
    let cols: Vec<(Vec<usize>, Vec<usize>)> = exponents(k, q)
        .into_iter()
        .flat_map(|a| exponents(nz, q).into_iter().map(move |b| (a.clone(), b)))
        .collect();
    if q == 0 {
        return cols.len();
    }
    let index = |a: &[usize], b: &[usize]| cols.iter().position(|(x, y)| x == a && y == b).unwrap();
    let mut rows = Vec::new();
    for (ma, mb) in exponents(k, q - 1)
        .into_iter()
        .flat_map(|a| exponents(nz, q - 1).into_iter().map(move |b| (a.clone(), b)))
    {
        // μ_i Σ_j a_ji z_j
        for i in 0..k {
            let mut row = vec![0u64; cols.len()];
            for j in 0..nz {
                let (mut a, mut b) = (ma.clone(), mb.clone());
                a[i] += 1;
                b[j] += 1;
                let c = index(&a, &b);
                row[c] = (row[c] + entry(params, j, i)) % P;
            }
            rows.push(row);
        }
        // z_j Σ_i a_ji μ_i
        for j in 0..nz {
            let mut row = vec![0u64; cols.len()];
            for i in 0..k {
                let (mut a, mut b) = (ma.clone(), mb.clone());
                a[i] += 1;
                b[j] += 1;
                let c = index(&a, &b);
                row[c] = (row[c] + entry(params, j, i)) % P;
            }
            rows.push(row);
        }
    }
    cols.len() - dense_rank(rows)
}

fn check(n: usize, k: usize, r: u32, q_max: usize, seeds: std::ops::Range<u64>) {
    let field = Field::prime(P).unwrap();
    for seed in seeds {
        let params = sample_generic_params(n, k, r, field, seed).unwrap();
        let pres = JacobianPresentation::new(&params, field).unwrap();
        for q in 0..=q_max {
            let oracle = oracle_dim(&params, q);
            let computed = pres.invariant(q as u32).dim();
            assert_eq!(computed, oracle, "(n,k,r,q) = ({n},{k},{r},{q}) seed {seed}");
            let closed = binomial(n as u64, q as u64) * binomial(k as u64 - 1, q as u64);
            assert_eq!(BigInt::from(oracle), closed, "oracle vs closed form at q = {q}");
        }
    }
}

#[test]
fn double_covers_small() {
    check(2, 3, 2, 2, 0..3);
    check(3, 4, 2, 3, 0..3);
}

#[test]
fn double_cover_n4() {
    check(4, 5, 2, 2, 0..2);
}

#[test]
fn higher_covers() {
    check(3, 2, 3, 2, 0..3);
    check(5, 3, 3, 2, 0..2);
    check(5, 2, 4, 2, 0..2);
}

#[test]
fn oracle_detects_special_parameters() {
    // a coincidence a_11 = a_12 changes the reduced ring as well
    let field = Field::prime(P).unwrap();
    let params = sample_generic_params(3, 4, 2, field, 1).unwrap();
    let special = params.with_entry(1, 2, params.get(1, 1)).unwrap();
    let pres = JacobianPresentation::new(&special, field).unwrap();
    for q in 0..=3 {
        assert_eq!(pres.invariant(q as u32).dim(), oracle_dim(&special, q), "q = {q}");
    }
}
