//! The divisor `L = x0 H + E` with `L.C_ij = 0` for every curve.
//!
//! Orthogonality against all curves is the linear system `B X = 0` where
//! `B` stacks the chain blocks (tridiagonal, `-b_ij` on the diagonal) next to
//! a final column holding the ample degrees `a_ij`, and `X` lists the curve
//! coefficients followed by `x0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::plumbing::{CurveId, Cycle, PlumbingConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    rows: Vec<Vec<BigInt>>,
}

impl BlockSystem {
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Curve columns plus the trailing `x0` column.
    pub fn column_count(&self) -> usize {
        self.rows.len() + 1
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows, self.column_count())
    }

    /// `B X` for an integer vector ordered like the columns.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

pub fn build_block_system(config: &PlumbingConfig) -> BlockSystem {
    let n = config.curve_count();
    let mut rows = vec![vec![BigInt::zero(); n + 1]; n];
    let mut offset = 0;
    for chain in config.chains() {
        let m = chain.len();
        for j in 0..m {
            let row = &mut rows[offset + j];
            row[offset + j] = -BigInt::from(chain.b()[j]);
            if j > 0 {
                row[offset + j - 1] = BigInt::from(1);
            }
            if j + 1 < m {
                row[offset + j + 1] = BigInt::from(1);
            }
            row[n] = BigInt::from(chain.a()[j]);
        }
        offset += m;
    }
    BlockSystem { rows }
}

pub fn kernel_basis(system: &BlockSystem) -> Vec<Vec<BigRational>> {
    linalg::nullspace(&system.rows, system.column_count())
}

/// Primitive positive coefficients of `L = x0 H + sum x_ij C_ij`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorSolution {
    pub x0: BigInt,
    pub x: Vec<Vec<BigInt>>,
}

impl DivisorSolution {
    pub fn coefficient(&self, curve: CurveId) -> &BigInt {
        &self.x[curve.chain][curve.index]
    }

    /// Column-ordered vector `(x_11, ..., x_km_k, x0)`.
    pub fn as_vector(&self) -> Vec<BigInt> {
        self.x
            .iter()
            .flatten()
            .cloned()
            .chain(std::iter::once(self.x0.clone()))
            .collect()
    }

    /// The cycle `E = sum x_ij C_ij`.
    pub fn e_cycle(&self, config: &PlumbingConfig) -> Result<Cycle> {
        let mult = self
            .x
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.to_u64().ok_or(Error::Overflow("coefficient of E")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Cycle::from_multiplicities(config, mult)
    }

    /// `x0` as a machine integer.
    pub fn x0_u64(&self) -> Result<u64> {
        self.x0.to_u64().ok_or(Error::Overflow("x0"))
    }

    pub fn gcd(&self) -> BigInt {
        self.as_vector().iter().fold(BigInt::zero(), |g, v| g.gcd(v))
    }
}

pub fn primitive_positive_solution(config: &PlumbingConfig) -> Result<DivisorSolution> {
    let system = build_block_system(config);
    let basis = kernel_basis(&system);
    if basis.len() != 1 {
        return Err(Error::KernelDimension { found: basis.len() });
    }
    let mut v = linalg::primitive_integer_vector(&basis[0]);
    let n = config.curve_count();
    if v[n].is_negative() {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    if !v.iter().all(Signed::is_positive) {
        return Err(Error::NoPositiveOrientation);
    }
    let x0 = v.pop().expect("x0 column");
    let mut it = v.into_iter();
    let x = config
        .chains()
        .iter()
        .map(|c| it.by_ref().take(c.len()).collect())
        .collect();
    Ok(DivisorSolution { x0, x })
}

/// `L.C_ij = a_ij x0 + x_{i,j-1} - b_ij x_ij + x_{i,j+1}` for every curve.
pub fn verify_orthogonality(config: &PlumbingConfig, sol: &DivisorSolution) -> Result<Vec<Vec<BigInt>>> {
    if sol.x.len() != config.chain_count() || sol.x.iter().zip(config.chains()).any(|(r, c)| r.len() != c.len()) {
        return Err(Error::CycleShape("solution does not match the configuration".into()));
    }
    Ok(config
        .chains()
        .iter()
        .zip(&sol.x)
        .map(|(chain, x)| {
            (0..chain.len())
                .map(|j| {
                    let mut v = BigInt::from(chain.a()[j]) * &sol.x0 - BigInt::from(chain.b()[j]) * &x[j];
                    if j > 0 {
                        v += &x[j - 1];
                    }
                    if j + 1 < chain.len() {
                        v += &x[j + 1];
                    }
                    v
                })
                .collect()
        })
        .collect())
}

/// Hand-derived solutions for one- and two-curve chains, unnormalized:
/// `(x0, x1) = (b1, a1)` and
/// `(x0, x1, x2) = (b1 b2 - 1, a1 b2 + a2, a1 + a2 b1)`.
pub fn closed_form_small_m(b: &[u64], a: &[u64]) -> Result<Vec<BigInt>> {
    let big = |v: u64| BigInt::from(v);
    match (b, a) {
        ([b1], [a1]) => Ok(vec![big(*b1), big(*a1)]),
        ([b1, b2], [a1, a2]) => Ok(vec![
            big(*b1) * big(*b2) - 1,
            big(*a1) * big(*b2) + big(*a2),
            big(*a1) + big(*a2) * big(*b1),
        ]),
        _ => Err(Error::ClosedFormLength { m: b.len() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn block_systems() {
        let s = build_block_system(&PlumbingConfig::single(vec![3], vec![2]).unwrap());
        assert_eq!(s.rows(), &[ints(&[-3, 2])]);
        let s = build_block_system(&PlumbingConfig::single(vec![2, 2], vec![1, 1]).unwrap());
        assert_eq!(s.rows(), &[ints(&[-2, 1, 1]), ints(&[1, -2, 1])]);
        let c = PlumbingConfig::from_lists(vec![(vec![2], vec![1]), (vec![3], vec![1])]).unwrap();
        let s = build_block_system(&c);
        assert_eq!(s.rows(), &[ints(&[-2, 0, 1]), ints(&[0, -3, 1])]);
        assert_eq!(s.column_count(), 3);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn kernels() {
        let ray = |b: Vec<u64>, a: Vec<u64>| {
            let k = kernel_basis(&build_block_system(&PlumbingConfig::single(b, a).unwrap()));
            assert_eq!(k.len(), 1);
            linalg::primitive_integer_vector(&k[0])
        };
        assert_eq!(ray(vec![3], vec![2]), ints(&[2, 3]));
        assert_eq!(ray(vec![2, 2], vec![1, 1]), ints(&[1, 1, 1]));
        let c = PlumbingConfig::from_lists(vec![(vec![2], vec![1]), (vec![3], vec![1])]).unwrap();
        let k = kernel_basis(&build_block_system(&c));
        assert_eq!(linalg::primitive_integer_vector(&k[0]), ints(&[3, 2, 6]));
    }

    #[test]
    fn solutions() {
        let s = primitive_positive_solution(&PlumbingConfig::single(vec![3], vec![2]).unwrap()).unwrap();
        assert_eq!((s.x0.clone(), s.x.clone()), (BigInt::from(3), vec![ints(&[2])]));
        let s = primitive_positive_solution(&PlumbingConfig::single(vec![2, 2], vec![1, 1]).unwrap()).unwrap();
        assert_eq!(s.as_vector(), ints(&[1, 1, 1]));
        let s = primitive_positive_solution(&PlumbingConfig::single(vec![2], vec![1]).unwrap()).unwrap();
        assert_eq!(s.as_vector(), ints(&[1, 2]));
    }

    #[test]
    fn orthogonality_table() {
        let c = PlumbingConfig::single(vec![3], vec![2]).unwrap();
        let s = DivisorSolution {
            x0: 3.into(),
            x: vec![ints(&[2])],
        };
        assert_eq!(verify_orthogonality(&c, &s).unwrap(), vec![ints(&[0])]);

        let c = PlumbingConfig::single(vec![2, 2], vec![1, 1]).unwrap();
        let s = DivisorSolution {
            x0: 1.into(),
            x: vec![ints(&[1, 1])],
        };
        assert_eq!(verify_orthogonality(&c, &s).unwrap(), vec![ints(&[0, 0])]);

        let c = PlumbingConfig::single(vec![2], vec![1]).unwrap();
        let s = DivisorSolution {
            x0: 1.into(),
            x: vec![ints(&[1])],
        };
        assert_eq!(verify_orthogonality(&c, &s).unwrap(), vec![ints(&[-1])]);

        let bad = DivisorSolution {
            x0: 1.into(),
            x: vec![ints(&[1, 1])],
        };
        assert!(verify_orthogonality(&c, &bad).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_small_m(&[5], &[3]).unwrap(), ints(&[5, 3]));
        assert_eq!(closed_form_small_m(&[2, 3], &[1, 2]).unwrap(), ints(&[5, 5, 5]));
        assert_eq!(closed_form_small_m(&[2, 2], &[1, 1]).unwrap(), ints(&[3, 3, 3]));
        assert_eq!(
            closed_form_small_m(&[2, 2, 2], &[1, 1, 1]).unwrap_err(),
            Error::ClosedFormLength { m: 3 }
        );
    }
}
