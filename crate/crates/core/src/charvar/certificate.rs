//! Filtration certificate: a chain of coordinate subspaces on which the
//! selected quadrics cut the dimension down one projection at a time.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::higgs::closed_forms::resultant4;
use crate::higgs::QuadricSystem;
use crate::poly::Scalar;

type Tuple = (usize, usize, usize, usize);

/// Which projection lemma justified a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepCase {
    /// `X_1` is the zero set of one nonzero quadric in four variables.
    Base,
    /// One new variable, quadratic with nonzero leading coefficient.
    Quadratic,
    /// Two new variables, nonzero resultant of the two binary quadratic parts.
    Resultant,
}

impl fmt::Display for StepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepCase::Base => "base",
            StepCase::Quadratic => "quadratic",
            StepCase::Resultant => "resultant",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateStep {
    /// 1-based index of the step.
    pub index: usize,
    pub added: Vec<(usize, usize)>,
    /// Quadrics appended to the family at this step.
    pub polynomials: Vec<Tuple>,
    pub case: StepCase,
    /// Leading coefficient, resultant, or the base quadric's nonzero coefficient count.
    pub values: Vec<Scalar>,
    /// Every selected quadric lives in the variables of this step's subspace.
    pub support_ok: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub n: usize,
    pub k: usize,
    /// Cumulative index sets `S_1 ⊂ .. ⊂ S_t`.
    pub index_sets: Vec<Vec<(usize, usize)>>,
    pub steps: Vec<CertificateStep>,
    /// Bound on the dimension of the affine cone, when every step passed.
    pub cone_bound: Option<usize>,
    /// `cone_bound - 1`.
    pub projective_bound: Option<usize>,
}

impl CertificateReport {
    pub fn concluded(&self) -> bool {
        self.cone_bound.is_some()
    }

    pub fn first_failure(&self) -> Option<&CertificateStep> {
        self.steps.iter().find(|s| !s.passed)
    }
}

fn nonzero_square_coefficient(qs: &QuadricSystem, t: usize, var: usize) -> Scalar {
    qs.coefficient(t, var, var)
}

/// Variables with a nonzero coefficient in quadric `t`.
fn support(qs: &QuadricSystem, t: usize) -> BTreeSet<usize> {
    let d = qs.vars.len();
    let mut out = BTreeSet::new();
    for u in 0..d {
        for v in u..d {
            if !qs.coefficient(t, u, v).is_zero() {
                out.insert(u);
                out.insert(v);
            }
        }
    }
    out
}

/// Runs the filtration for `n >= 2`, `k >= 3` and records each step.
pub fn certificate_bound(qs: &QuadricSystem) -> Result<CertificateReport> {
    let (n, k) = (qs.n, qs.k);
    if n < 2 || k < 3 {
        return Err(Error::Precondition(format!(
            "the filtration needs n >= 2 and k >= 3, got n = {n}, k = {k}"
        )));
    }
    let var = |i: usize, j: usize| qs.var_index(i, j).expect("variable in range");
    let target = |t: Tuple| qs.target_index(t.0, t.1, t.2, t.3).expect("quadric in range");

    let mut current: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut family: Vec<usize> = Vec::new();
    let mut index_sets = Vec::new();
    let mut steps = Vec::new();

    let record = |added: Vec<(usize, usize)>,
                      polys: Vec<Tuple>,
                      case: StepCase,
                      current: &mut BTreeSet<(usize, usize)>,
                      family: &mut Vec<usize>,
                      index_sets: &mut Vec<Vec<(usize, usize)>>| {
        current.extend(added.iter().copied());
        let allowed: BTreeSet<usize> = current.iter().map(|&(i, j)| var(i, j)).collect();
        let new_vars: Vec<usize> = added.iter().map(|&(i, j)| var(i, j)).collect();
        for &t in &polys {
            let idx = target(t);
            if !family.contains(&idx) {
                family.push(idx);
            }
        }
        // the new quadrics live in S_p; the old ones avoid the new variables
        let fresh: Vec<usize> = polys.iter().map(|&t| target(t)).collect();
        let support_ok = family.iter().all(|&t| {
            let s = support(qs, t);
            s.is_subset(&allowed) && (fresh.contains(&t) || new_vars.iter().all(|v| !s.contains(v)))
        });
        let values: Vec<Scalar> = match case {
            StepCase::Base => {
                let t = fresh[0];
                let d = qs.vars.len();
                let first = (0..d)
                    .flat_map(|u| (u..d).map(move |v| (u, v)))
                    .map(|(u, v)| qs.coefficient(t, u, v))
                    .find(|c| !c.is_zero())
                    .unwrap_or_else(|| qs.field.zero());
                vec![first]
            }
            StepCase::Quadratic => {
                let t = *fresh.last().unwrap();
                vec![nonzero_square_coefficient(qs, t, new_vars[0])]
            }
            StepCase::Resultant => {
                let (x, y) = (new_vars[0], new_vars[1]);
                let quad = |t: usize| [qs.coefficient(t, x, x), qs.coefficient(t, x, y), qs.coefficient(t, y, y)];
                let a = quad(fresh[0]);
                let b = quad(fresh[1]);
                let res = resultant4([&a[0], &a[1], &a[2]], [&b[0], &b[1], &b[2]]);
                vec![a[0].clone(), a[1].clone(), a[2].clone(), b[0].clone(), b[1].clone(), b[2].clone(), res]
            }
        };
        let passed = support_ok && !values.last().unwrap().is_zero();
        index_sets.push(current.iter().copied().collect());
        CertificateStep {
            index: index_sets.len(),
            added,
            polynomials: polys,
            case,
            values,
            support_ok,
            passed,
        }
    };

    steps.push(record(
        vec![(1, 1), (1, 2), (2, 1), (2, 2)],
        vec![(1, 1, 2, 2)],
        StepCase::Base,
        &mut current,
        &mut family,
        &mut index_sets,
    ));
    for p in 2..n {
        steps.push(record(
            vec![(1, p + 1), (2, p + 1)],
            vec![(1, 1, 2, p + 1), (1, p, 2, p + 1)],
            StepCase::Resultant,
            &mut current,
            &mut family,
            &mut index_sets,
        ));
    }
    for b in 1..k - 2 {
        let row = b + 2;
        steps.push(record(
            vec![(row, 1), (row, 2)],
            vec![(1, 1, row, 2), (b + 1, 1, row, 2)],
            StepCase::Resultant,
            &mut current,
            &mut family,
            &mut index_sets,
        ));
        for s in 2..n {
            steps.push(record(
                vec![(row, s + 1)],
                vec![(b + 1, s, row, s + 1)],
                StepCase::Quadratic,
                &mut current,
                &mut family,
                &mut index_sets,
            ));
        }
    }

    let all = steps.iter().all(|s| s.passed);
    Ok(CertificateReport {
        n,
        k,
        index_sets,
        steps,
        cone_bound: all.then_some(3),
        projective_bound: all.then_some(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{sample_generic_params, GenericParams};
    use crate::higgs::quadric_system;
    use crate::jacobian::JacobianPresentation;
    use crate::poly::Field;

    fn fp() -> Field {
        Field::prime(1_000_003).unwrap()
    }

    fn system(params: &GenericParams) -> QuadricSystem {
        let pres = JacobianPresentation::new(params, params.field()).unwrap();
        quadric_system(&pres).unwrap()
    }

    #[test]
    fn n3_all_steps_pass() {
        let params = sample_generic_params(3, 4, 2, fp(), 1).unwrap();
        let rep = certificate_bound(&system(&params)).unwrap();
        assert_eq!(rep.steps.len(), 4);
        assert_eq!(rep.index_sets.last().unwrap().len(), 9);
        let cases: Vec<StepCase> = rep.steps.iter().map(|s| s.case).collect();
        assert_eq!(
            cases,
            [StepCase::Base, StepCase::Resultant, StepCase::Resultant, StepCase::Quadratic]
        );
        assert!(rep.steps.iter().all(|s| s.passed), "{:?}", rep.first_failure());
        assert_eq!((rep.cone_bound, rep.projective_bound), (Some(3), Some(2)));
    }

    #[test]
    fn n2_base_only() {
        let params = sample_generic_params(2, 3, 2, fp(), 1).unwrap();
        let rep = certificate_bound(&system(&params)).unwrap();
        assert_eq!(rep.steps.len(), 1);
        assert_eq!(rep.steps[0].case, StepCase::Base);
        assert_eq!(rep.cone_bound, Some(3));
    }

    #[test]
    fn step_counts_and_coverage() {
        for (n, k, r) in [(4, 5, 2), (5, 3, 3), (5, 6, 2)] {
            let params = sample_generic_params(n, k, r, fp(), 2).unwrap();
            let rep = certificate_bound(&system(&params)).unwrap();
            assert_eq!(rep.steps.len(), (n - 1) * (k - 2));
            assert_eq!(rep.index_sets.last().unwrap().len(), n * (k - 1));
            assert!(rep.concluded(), "({n},{k},{r}): {:?}", rep.first_failure());
        }
    }

    #[test]
    fn index_sets_grow() {
        let params = sample_generic_params(4, 5, 2, fp(), 3).unwrap();
        let rep = certificate_bound(&system(&params)).unwrap();
        for w in rep.index_sets.windows(2) {
            assert!(w[0].len() < w[1].len());
            assert!(w[0].iter().all(|x| w[1].contains(x)));
        }
    }

    #[test]
    fn equal_entries_have_no_product_basis() {
        let params = sample_generic_params(3, 4, 2, fp(), 4).unwrap();
        let broken = params.with_entry(1, 2, params.get(1, 1)).unwrap();
        let pres = JacobianPresentation::new(&broken, fp()).unwrap();
        assert!(matches!(quadric_system(&pres), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn vanishing_resultant_fails_its_step() {
        use crate::higgs::closed_forms::{resultants, ResultantKind};
        let small = Field::prime(1009).unwrap();
        let params = sample_generic_params(3, 4, 2, small, 1).unwrap();
        // move one entry until R_(2,3) vanishes while the product basis survives
        let mut found = false;
        'search: for (j, i) in [(3, 1), (3, 2), (2, 1), (2, 2), (1, 1), (1, 2)] {
            for x in 2..1009 {
                let moved = params.with_entry(j, i, small.from_i64(x)).unwrap();
                let Ok(res) = resultants(&moved) else { continue };
                let r23 = res.iter().find(|e| e.kind == ResultantKind::Column && (e.a, e.b) == (2, 3)).unwrap();
                if !r23.value.is_zero() {
                    continue;
                }
                let pres = JacobianPresentation::new(&moved, small).unwrap();
                let Ok(qs) = quadric_system(&pres) else { continue };
                let rep = certificate_bound(&qs).unwrap();
                let fail = rep.first_failure().unwrap();
                assert_eq!((fail.index, fail.case), (2, StepCase::Resultant));
                assert!(fail.values.last().unwrap().is_zero());
                assert!(!rep.concluded());
                found = true;
                break 'search;
            }
        }
        assert!(found, "no degenerate entry found");
    }

    #[test]
    fn too_few_rows() {
        let params = sample_generic_params(3, 2, 3, fp(), 1).unwrap();
        assert!(matches!(certificate_bound(&system(&params)), Err(Error::Precondition(_))));
    }
}
