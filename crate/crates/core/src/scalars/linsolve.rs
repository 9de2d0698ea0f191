//! Exact sparse Gaussian elimination with infeasibility certificates.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::exact::ExactComplex;
use crate::error::{Error, Result};

pub type SparseRow = BTreeMap<usize, ExactComplex>;

/// `A x = b` with sparse rows.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    pub ncols: usize,
    pub rows: Vec<SparseRow>,
    pub rhs: Vec<ExactComplex>,
}

/// Left null vector `y` of `A` with `y^T b != 0`, indexed by row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub y: BTreeMap<usize, (String, String)>,
}

#[derive(Clone, Debug)]
pub enum LinearOutcome {
    Solution { x: Vec<ExactComplex>, rank: usize },
    Infeasible { y: BTreeMap<usize, ExactComplex> },
}

impl LinearOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LinearOutcome::Solution { .. })
    }
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn push(&mut self, row: SparseRow, rhs: ExactComplex) {
        debug_assert!(row.keys().all(|&c| c < self.ncols));
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn from_dense(a: &[Vec<ExactComplex>], b: &[ExactComplex]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Usage(format!("matrix has {} rows but rhs has {}", a.len(), b.len())));
        }
        let ncols = a.first().map_or(0, |r| r.len());
        let mut sys = SparseSystem::new(ncols);
        for (row, rhs) in a.iter().zip(b) {
            if row.len() != ncols {
                return Err(Error::Usage("ragged matrix".into()));
            }
            let sparse = row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect();
            sys.push(sparse, rhs.clone());
        }
        Ok(sys)
    }

    /// `A x - b`, one entry per row.
    pub fn residual(&self, x: &[ExactComplex]) -> Vec<ExactComplex> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let mut acc = -b;
                for (&j, a) in row {
                    acc += &(a * &x[j]);
                }
                acc
            })
            .collect()
    }

    pub fn verify_solution(&self, x: &[ExactComplex]) -> bool {
        x.len() == self.ncols && self.residual(x).iter().all(ExactComplex::is_zero)
    }

    /// `y^T A == 0` and `y^T b != 0`, recomputed from the stored rows.
    pub fn verify_witness(&self, y: &BTreeMap<usize, ExactComplex>) -> bool {
        let mut combo: HashMap<usize, ExactComplex> = HashMap::new();
        let mut rhs = ExactComplex::zero();
        for (&i, yi) in y {
            let Some(row) = self.rows.get(i) else { return false };
            for (&j, a) in row {
                *combo.entry(j).or_default() += &(yi * a);
            }
            rhs += &(yi * &self.rhs[i]);
        }
        combo.values().all(ExactComplex::is_zero) && !rhs.is_zero()
    }

    pub fn solve(&self) -> LinearOutcome {
        solve_sparse(self)
    }
}

struct PivotRow {
    row: SparseRow,
    rhs: ExactComplex,
    comb: BTreeMap<usize, ExactComplex>,
}

fn axpy(dst: &mut BTreeMap<usize, ExactComplex>, s: &ExactComplex, src: &BTreeMap<usize, ExactComplex>) {
    for (&j, v) in src {
        let e = dst.entry(j).or_default();
        *e -= &(s * v);
        if e.is_zero() {
            dst.remove(&j);
        }
    }
}

/// Incremental elimination. Returns the first inconsistency found, with the
/// combination of original rows that produced it.
pub fn solve_sparse(sys: &SparseSystem) -> LinearOutcome {
    let mut pivots: HashMap<usize, PivotRow> = HashMap::new();
    for (i, (row, rhs)) in sys.rows.iter().zip(&sys.rhs).enumerate() {
        let mut r = row.clone();
        let mut b = rhs.clone();
        let mut comb = BTreeMap::from([(i, ExactComplex::one())]);
        loop {
            let Some((&c, lead)) = r.iter().next() else { break };
            let lead = lead.clone();
            match pivots.get(&c) {
                Some(p) => {
                    axpy(&mut r, &lead, &p.row);
                    b -= &(&lead * &p.rhs);
                    axpy(&mut comb, &lead, &p.comb);
                }
                None => {
                    let inv = lead.inv().expect("nonzero pivot");
                    let row: SparseRow = r.iter().map(|(&j, v)| (j, v * &inv)).collect();
                    let comb: BTreeMap<_, _> = comb.iter().map(|(&j, v)| (j, v * &inv)).collect();
                    pivots.insert(c, PivotRow { row, rhs: &b * &inv, comb });
                    r.clear();
                    b = ExactComplex::zero();
                    break;
                }
            }
        }
        if r.is_empty() && !b.is_zero() {
            return LinearOutcome::Infeasible { y: comb };
        }
    }
    let rank = pivots.len();
    let mut cols: Vec<usize> = pivots.keys().copied().collect();
    cols.sort_unstable_by(|a, b| b.cmp(a));
    let mut x = vec![ExactComplex::zero(); sys.ncols];
    for c in cols {
        let p = &pivots[&c];
        let mut v = p.rhs.clone();
        for (&j, a) in p.row.range(c + 1..) {
            v -= &(a * &x[j]);
        }
        x[c] = v;
    }
    LinearOutcome::Solution { x, rank }
}

/// Dense front end: exact solution of `A x = b` or a certificate `y`.
pub fn solve_linear_exact(a: &[Vec<ExactComplex>], b: &[ExactComplex]) -> Result<LinearOutcome> {
    Ok(SparseSystem::from_dense(a, b)?.solve())
}

/// Rank of the coefficient matrix (rhs ignored).
pub fn rank(sys: &SparseSystem) -> usize {
    let zero = SparseSystem { ncols: sys.ncols, rows: sys.rows.clone(), rhs: vec![ExactComplex::zero(); sys.rows.len()] };
    match solve_sparse(&zero) {
        LinearOutcome::Solution { rank, .. } => rank,
        LinearOutcome::Infeasible { .. } => unreachable!("homogeneous system is always feasible"),
    }
}

pub fn witness_to_strings(y: &BTreeMap<usize, ExactComplex>) -> Witness {
    Witness { y: y.iter().map(|(&i, c)| (i, (c.re.to_string(), c.im.to_string()))).collect() }
}

pub fn witness_from_strings(w: &Witness) -> Result<BTreeMap<usize, ExactComplex>> {
    let parse = |s: &str| s.parse::<num_rational::BigRational>().map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")));
    w.y.iter().map(|(&i, (re, im))| Ok((i, ExactComplex::new(parse(re)?, parse(im)?)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::exact::{q, q_frac, ExactComplex as C};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<C>> {
        rows.iter().map(|r| r.iter().map(|&v| C::int(v)).collect()).collect()
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let out = solve_linear_exact(&ints(&[&[1]]), &[C::int(0)]).unwrap();
        match out {
            LinearOutcome::Solution { x, .. } => assert!(x[0].is_zero()),
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn rank_one_inconsistency_has_witness() {
        let a = ints(&[&[1, 1], &[1, 1]]);
        let b = [C::int(1), C::int(2)];
        let sys = SparseSystem::from_dense(&a, &b).unwrap();
        match sys.solve() {
            LinearOutcome::Infeasible { y } => {
                assert!(sys.verify_witness(&y));
                // proportional to (1, -1)
                assert_eq!(&y[&0] + &y[&1], C::zero());
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn random_invertible_systems_solve_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            // unit lower times unit upper triangular is invertible
            let n = 6;
            let mut lo = vec![vec![C::zero(); n]; n];
            let mut up = vec![vec![C::zero(); n]; n];
            for i in 0..n {
                lo[i][i] = C::one();
                up[i][i] = C::new(q(rng.gen_range(1..5)), q(0));
                for j in 0..i {
                    lo[i][j] = C::new(q_frac(rng.gen_range(-4..5), rng.gen_range(1..4)), q(rng.gen_range(-2..3)));
                }
                for j in i + 1..n {
                    up[i][j] = C::int(rng.gen_range(-3..4));
                }
            }
            let a: Vec<Vec<C>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(C::zero(), |acc, k| &acc + &(&lo[i][k] * &up[k][j])))
                        .collect()
                })
                .collect();
            let b: Vec<C> = (0..n).map(|_| C::new(q(rng.gen_range(-9..9)), q(rng.gen_range(-9..9)))).collect();
            let sys = SparseSystem::from_dense(&a, &b).unwrap();
            match sys.solve() {
                LinearOutcome::Solution { x, rank } => {
                    assert_eq!(rank, n);
                    assert!(sys.verify_solution(&x));
                }
                _ => panic!("invertible system reported infeasible"),
            }
        }
    }

    #[test]
    fn shape_mismatch_is_usage_error() {
        assert!(solve_linear_exact(&ints(&[&[1, 2]]), &[]).is_err());
    }

    #[test]
    fn witness_serialization_round_trips() {
        let y = BTreeMap::from([(0, C::frac(1, 3)), (4, C::new(q(-2), q(5)))]);
        assert_eq!(witness_from_strings(&witness_to_strings(&y)).unwrap(), y);
    }
}
