//! Chains of rational curves, their intersection form, and the checks that
//! the configuration contracts to a rational singular point.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// One linear chain `C_1 - C_2 - ... - C_m` with `C_j^2 = -b_j` and
/// `H.C_j = a_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSpec {
    b: Vec<u64>,
    a: Vec<u64>,
}

impl ChainSpec {
    /// Builds a chain; `chain` is the 1-based index used in error messages.
    pub fn new(b: Vec<u64>, a: Vec<u64>) -> Result<Self> {
        Self::with_index(b, a, 1)
    }

    pub(crate) fn with_index(b: Vec<u64>, a: Vec<u64>, chain: usize) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::EmptyChain { chain });
        }
        if b.len() != a.len() {
            return Err(Error::LengthMismatch {
                chain,
                b_len: b.len(),
                a_len: a.len(),
            });
        }
        if let Some((index, &value)) = b.iter().enumerate().find(|(_, &v)| v < 2) {
            return Err(Error::SelfIntersectionTooSmall {
                chain,
                index: index + 1,
                value,
            });
        }
        if let Some((index, &value)) = a.iter().enumerate().find(|(_, &v)| v < 1) {
            return Err(Error::AmpleDegreeTooSmall {
                chain,
                index: index + 1,
                value,
            });
        }
        Ok(ChainSpec { b, a })
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

/// The disjoint chains `D_1, ..., D_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlumbingConfig {
    chains: Vec<ChainSpec>,
}

impl PlumbingConfig {
    pub fn new(chains: Vec<ChainSpec>) -> Result<Self> {
        if chains.is_empty() {
            return Err(Error::EmptyConfig);
        }
        Ok(PlumbingConfig { chains })
    }

    /// Validates raw `(b, a)` lists, numbering chains from 1 in errors.
    pub fn from_lists(lists: Vec<(Vec<u64>, Vec<u64>)>) -> Result<Self> {
        let chains = lists
            .into_iter()
            .enumerate()
            .map(|(i, (b, a))| ChainSpec::with_index(b, a, i + 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(chains)
    }

    /// Single chain shorthand.
    pub fn single(b: Vec<u64>, a: Vec<u64>) -> Result<Self> {
        Self::from_lists(vec![(b, a)])
    }

    pub fn chains(&self) -> &[ChainSpec] {
        &self.chains
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    /// Total number of curves `sum m_i`.
    pub fn curve_count(&self) -> usize {
        self.chains.iter().map(ChainSpec::len).sum()
    }

    /// Curves in canonical order `C_11, ..., C_1m_1, C_21, ...`.
    pub fn curves(&self) -> impl Iterator<Item = CurveId> + '_ {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(chain, c)| (0..c.len()).map(move |index| CurveId { chain, index }))
    }

    /// Position of `curve` in the canonical order.
    pub fn flat_index(&self, curve: CurveId) -> usize {
        self.chains[..curve.chain].iter().map(ChainSpec::len).sum::<usize>() + curve.index
    }

    pub fn contains(&self, curve: CurveId) -> bool {
        curve.chain < self.chains.len() && curve.index < self.chains[curve.chain].len()
    }

    pub fn b(&self, curve: CurveId) -> u64 {
        self.chains[curve.chain].b[curve.index]
    }

    pub fn a(&self, curve: CurveId) -> u64 {
        self.chains[curve.chain].a[curve.index]
    }

    /// `D.C` for a cycle `D` and a curve `C` of the configuration.
    pub fn intersect(&self, cycle: &Cycle, curve: CurveId) -> i128 {
        let mult = &cycle.mult[curve.chain];
        let j = curve.index;
        let mut v = -(self.b(curve) as i128) * mult[j] as i128;
        if j > 0 {
            v += mult[j - 1] as i128;
        }
        if j + 1 < mult.len() {
            v += mult[j + 1] as i128;
        }
        v
    }

    /// Self-intersection `D^2`.
    pub fn self_intersection(&self, cycle: &Cycle) -> i128 {
        self.curves()
            .map(|c| cycle.get(c) as i128 * self.intersect(cycle, c))
            .sum()
    }

    /// `K.D` using `K.C = b - 2` for every curve.
    pub fn canonical_degree(&self, cycle: &Cycle) -> i128 {
        self.curves()
            .map(|c| cycle.get(c) as i128 * (self.b(c) as i128 - 2))
            .sum()
    }
}

/// Zero-based address of a curve: chain `i`, position `j` within the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurveId {
    pub chain: usize,
    pub index: usize,
}

impl CurveId {
    pub fn new(chain: usize, index: usize) -> Self {
        CurveId { chain, index }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{},{}", self.chain + 1, self.index + 1)
    }
}

/// Effective cycle supported on the chains, stored chain by chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    mult: Vec<Vec<u64>>,
}

impl Cycle {
    pub fn zero(config: &PlumbingConfig) -> Self {
        Cycle {
            mult: config.chains.iter().map(|c| vec![0; c.len()]).collect(),
        }
    }

    /// Every curve with multiplicity one.
    pub fn reduced(config: &PlumbingConfig) -> Self {
        Cycle {
            mult: config.chains.iter().map(|c| vec![1; c.len()]).collect(),
        }
    }

    pub fn single(config: &PlumbingConfig, curve: CurveId, multiplicity: u64) -> Result<Self> {
        if !config.contains(curve) {
            return Err(Error::UnknownCurve(curve.to_string()));
        }
        let mut c = Self::zero(config);
        c.mult[curve.chain][curve.index] = multiplicity;
        Ok(c)
    }

    /// Checks that `mult` has one entry per curve of `config`.
    pub fn from_multiplicities(config: &PlumbingConfig, mult: Vec<Vec<u64>>) -> Result<Self> {
        if mult.len() != config.chain_count() {
            return Err(Error::CycleShape(format!(
                "{} chains given, configuration has {}",
                mult.len(),
                config.chain_count()
            )));
        }
        for (i, (row, chain)) in mult.iter().zip(config.chains()).enumerate() {
            if row.len() != chain.len() {
                return Err(Error::CycleShape(format!(
                    "chain {} has {} multiplicities, expected {}",
                    i + 1,
                    row.len(),
                    chain.len()
                )));
            }
        }
        Ok(Cycle { mult })
    }

    pub fn multiplicities(&self) -> &[Vec<u64>] {
        &self.mult
    }

    pub fn get(&self, curve: CurveId) -> u64 {
        self.mult[curve.chain][curve.index]
    }

    pub fn set(&mut self, curve: CurveId, value: u64) {
        self.mult[curve.chain][curve.index] = value;
    }

    pub fn total(&self) -> u128 {
        self.mult.iter().flatten().map(|&m| m as u128).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().flatten().all(|&m| m == 0)
    }

    /// `n * self`, failing on `u64` overflow.
    pub fn scaled(&self, n: u64) -> Result<Self> {
        let mult = self
            .mult
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&m| m.checked_mul(n).ok_or(Error::Overflow("cycle multiplicity")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cycle { mult })
    }

    /// Same shape as `config`.
    pub fn fits(&self, config: &PlumbingConfig) -> bool {
        self.mult.len() == config.chain_count()
            && self.mult.iter().zip(config.chains()).all(|(r, c)| r.len() == c.len())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Cycle) -> bool {
        self.mult
            .iter()
            .flatten()
            .zip(other.mult.iter().flatten())
            .all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, row) in self.mult.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if m == 0 {
                    continue;
                }
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                if m != 1 {
                    write!(f, "{m}")?;
                }
                write!(f, "{}", CurveId::new(i, j))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Symmetric block-tridiagonal intersection form of the curves, rows in
/// canonical curve order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    entries: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    pub fn from_rows(entries: Vec<Vec<i64>>) -> Self {
        IntersectionMatrix { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.entries[r][c]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|r| self.entries[r].len() == n && (0..r).all(|c| self.entries[r][c] == self.entries[c][r]))
    }

    fn to_big(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn leading_minors(&self) -> Vec<BigInt> {
        linalg::leading_principal_minors(&self.to_big())
    }
}

pub fn intersection_matrix(config: &PlumbingConfig) -> IntersectionMatrix {
    let n = config.curve_count();
    let mut entries = vec![vec![0i64; n]; n];
    let mut offset = 0;
    for chain in config.chains() {
        for (j, &b) in chain.b().iter().enumerate() {
            entries[offset + j][offset + j] = -(b as i64);
            if j + 1 < chain.len() {
                entries[offset + j][offset + j + 1] = 1;
                entries[offset + j + 1][offset + j] = 1;
            }
        }
        offset += chain.len();
    }
    IntersectionMatrix { entries }
}

/// Sylvester's criterion: leading principal minors alternate in sign,
/// starting negative.
pub fn is_negative_definite(matrix: &IntersectionMatrix) -> bool {
    matrix
        .leading_minors()
        .iter()
        .enumerate()
        .all(|(k, d)| if k % 2 == 0 { d.is_negative() } else { d.is_positive() })
}

/// `(n, q)` with `n/q = b_1 - 1/(b_2 - 1/(... - 1/b_m))` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjInvariant {
    pub n: BigInt,
    pub q: BigInt,
}

pub fn hirzebruch_jung(b: &[u64]) -> HjInvariant {
    let mut value: Option<BigRational> = None;
    for &bj in b.iter().rev() {
        let bj = BigRational::from_integer(BigInt::from(bj));
        value = Some(match value {
            None => bj,
            Some(v) => bj - v.recip(),
        });
    }
    let v = value.unwrap_or_else(BigRational::zero);
    HjInvariant {
        n: v.numer().clone(),
        q: v.denom().clone(),
    }
}

/// Laufer's fundamental cycle of one chain, returned as a cycle on the whole
/// configuration with support on that chain.
pub fn fundamental_cycle(config: &PlumbingConfig, chain: usize) -> Result<Cycle> {
    let spec = config
        .chains()
        .get(chain)
        .ok_or_else(|| Error::UnknownCurve(format!("chain {}", chain + 1)))?;
    let m = spec.len();
    let cap: u64 = spec.b().iter().sum::<u64>() * m as u64;

    let mut z = Cycle::zero(config);
    for j in 0..m {
        z.set(CurveId::new(chain, j), 1);
    }
    let mut steps = 0u64;
    loop {
        let positive = (0..m)
            .map(|j| CurveId::new(chain, j))
            .find(|&c| config.intersect(&z, c) > 0);
        let Some(c) = positive else {
            return Ok(z);
        };
        steps += 1;
        if steps > cap {
            return Err(Error::LauferCapExceeded { chain: chain + 1, cap });
        }
        z.set(c, z.get(c) + 1);
    }
}

/// Arithmetic genus `p_a(Z) = 1 + (Z^2 + K.Z)/2`.
pub fn cycle_genus(config: &PlumbingConfig, z: &Cycle) -> i128 {
    let twice = 2 + config.self_intersection(z) + config.canonical_degree(z);
    debug_assert!(twice % 2 == 0, "adjunction parity");
    twice / 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainValidation {
    pub hj: HjInvariant,
    pub fundamental_cycle: Vec<u64>,
    pub genus: i128,
    pub rational: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub negative_definite: bool,
    pub leading_minors: Vec<BigInt>,
    pub chains: Vec<ChainValidation>,
}

impl ValidationReport {
    /// Every chain has arithmetic genus zero.
    pub fn rational(&self) -> bool {
        self.chains.iter().all(|c| c.rational)
    }

    /// Contractible to a rational singular point.
    pub fn is_valid(&self) -> bool {
        self.negative_definite && self.rational()
    }
}

pub fn validate_config(config: &PlumbingConfig) -> Result<ValidationReport> {
    let matrix = intersection_matrix(config);
    let leading_minors = matrix.leading_minors();
    let negative_definite = is_negative_definite(&matrix);
    let chains = config
        .chains()
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let z = fundamental_cycle(config, i)?;
            let genus = cycle_genus(config, &z);
            Ok(ChainValidation {
                hj: hirzebruch_jung(spec.b()),
                fundamental_cycle: z.multiplicities()[i].clone(),
                genus,
                rational: genus == 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport {
        negative_definite,
        leading_minors,
        chains,
    })
}

impl HjInvariant {
    pub fn is_reduced(&self) -> bool {
        self.n.gcd(&self.q).is_one()
    }
}
