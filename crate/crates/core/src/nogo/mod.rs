//! Bounded-degree evidence that the classical Bargmann cochain is not a
//! coboundary, with exact replayable certificates.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{coproduct_group, coproduct_group_letter, reduce_ortho, GroupTensor};
use crate::multiplier::{bargmann_exponent, build_omega, inverse_factor};
use crate::ncpoly::{GroupGen, NCElement, Truncation, Word};
use crate::report::{CheckReport, Status};
use crate::scalars::{ExactComplex, GradedScalar, LinearOutcome, SparseRow, SparseSystem};

/// A λ⁰ element; at grade 0 every bracket vanishes, so products commute.
pub type ClassicalElement = NCElement;

pub fn classical_truncation(d: u32) -> Truncation {
    Truncation::new(0, d.max(2))
}

/// `(M/2) v^m v^m ⊗ τ + M v^k R^k_i ⊗ a^i` at grade 0.
pub fn build_beta(d: u32) -> GroupTensor {
    bargmann_exponent(classical_truncation(d))
}

/// `2 v^i R^i_k ⊗ v^k`, the coboundary of `v^m v^m`.
pub fn positive_control_target(d: u32) -> GroupTensor {
    let t = classical_truncation(d);
    let mut out = GroupTensor::zero(2, t);
    for i in 1..=3 {
        for k in 1..=3 {
            let w = vec![vec![GroupGen::V(i), GroupGen::R(i, k)], vec![GroupGen::V(k)]];
            out = &out + &GroupTensor::from_words(t, &w, GradedScalar::constant(ExactComplex::int(2)));
        }
    }
    out
}

/// Commutative monomials of total degree at most `d`, the empty word included.
pub fn monomial_basis(d: u32) -> Vec<Word<GroupGen>> {
    let gens = GroupGen::all();
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Word<GroupGen>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..d {
        let mut next = Vec::new();
        for (w, start) in &frontier {
            for (i, &g) in gens.iter().enumerate().skip(*start) {
                let mut w2 = w.clone();
                w2.push(g);
                out.push(w2.clone());
                next.push((w2, i));
            }
        }
        frontier = next;
    }
    out
}

/// Right-hand side of the coboundary equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// The Bargmann cochain, with its `1/(1 + L M v^2/2)` prefactor above grade 0.
    Bargmann,
    /// `2 v^i R^i_k ⊗ v^k`; solvable with `X = v^2`.
    PositiveControl,
    Zero,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Bargmann => "bargmann",
            Source::PositiveControl => "positive-control",
            Source::Zero => "zero",
        }
    }
}

/// `Δ(X) - ω*(X⊗1)ω - ω*(1⊗X)ω = source` over a polynomial ansatz for `X`.
///
/// At grade 0 the conjugation by `ω` is trivial and this is the classical
/// coboundary equation.
#[derive(Clone, Debug)]
pub struct CoboundaryProblem {
    pub grade: u32,
    pub degree: u32,
    pub trunc: Truncation,
    pub source: Source,
    pub basis: Vec<Word<GroupGen>>,
    /// `(L power, M power)` blocks multiplying each basis monomial.
    pub blocks: Vec<(u32, u32)>,
    pub target: GroupTensor,
    omega: Option<(GroupTensor, GroupTensor)>,
}

impl CoboundaryProblem {
    pub fn new(grade: u32, degree: u32, source: Source) -> Result<Self> {
        if degree < 1 {
            return Err(Error::Precondition(format!("ansatz degree must be at least 1, got {degree}")));
        }
        if grade > 1 {
            return Err(Error::Precondition(format!("grade must be 0 or 1, got {grade}")));
        }
        let trunc = Truncation::new(grade, degree.max(2) + 2 * grade);
        let omega = if grade == 0 {
            None
        } else {
            let w = build_omega(trunc)?.body;
            Some((w.star(), w))
        };
        let target = match source {
            Source::Zero => GroupTensor::zero(2, trunc),
            Source::PositiveControl => positive_control_target(degree).with_truncation(trunc),
            Source::Bargmann => {
                let inv = inverse_factor(trunc).tensor(&NCElement::one(1, trunc))?;
                reduce_ortho(&inv.try_mul(&bargmann_exponent(trunc))?)
            }
        };
        let mut blocks = Vec::new();
        for l in 0..=grade {
            for m in 0..=grade + 1 {
                blocks.push((l, m));
            }
        }
        Ok(Self { grade, degree, trunc, source, basis: monomial_basis(degree), blocks, target, omega })
    }

    pub fn classical(degree: u32, source: Source) -> Result<Self> {
        Self::new(0, degree, source)
    }

    pub fn unknowns(&self) -> usize {
        self.basis.len() * self.blocks.len()
    }

    fn conjugate(&self, x: &GroupTensor) -> Result<GroupTensor> {
        match &self.omega {
            None => Ok(x.clone()),
            Some((ws, w)) => ws.try_mul(x)?.try_mul(w),
        }
    }

    /// The linear map applied to one basis monomial, given its coproduct.
    fn image(&self, m: &NCElement, dm: &GroupTensor) -> Result<GroupTensor> {
        let one = NCElement::one(1, self.trunc);
        let l = self.conjugate(&m.tensor(&one)?)?;
        let r = self.conjugate(&one.tensor(m)?)?;
        Ok(reduce_ortho(&dm.try_sub(&l)?.try_sub(&r)?))
    }

    /// Images of every basis monomial, with `Δ` built from shared prefixes.
    fn images(&self) -> Result<Vec<GroupTensor>> {
        let t = self.trunc;
        let mut deltas: HashMap<Word<GroupGen>, GroupTensor> = HashMap::new();
        deltas.insert(Vec::new(), GroupTensor::one(2, t));
        let mut out = Vec::with_capacity(self.basis.len());
        for w in &self.basis {
            if !deltas.contains_key(w) {
                let (last, prefix) = w.split_last().expect("empty word is seeded");
                let d = deltas[prefix].try_mul(&coproduct_group_letter(t, *last))?;
                deltas.insert(w.clone(), d);
            }
            let m = NCElement::from_word(t, w);
            out.push(self.image(&m, &deltas[w])?);
        }
        Ok(out)
    }

    /// Images computed directly through `hopf`, without shared state.
    fn images_direct(&self) -> Result<Vec<GroupTensor>> {
        self.basis
            .iter()
            .map(|w| {
                let m = NCElement::from_word(self.trunc, w);
                self.image(&m, &coproduct_group(&m)?)
            })
            .collect()
    }

    fn column_terms<'a>(
        &self,
        img: &'a GroupTensor,
        block: (u32, u32),
    ) -> impl Iterator<Item = (RowKey, ExactComplex)> + 'a {
        let n = self.grade;
        img.terms().flat_map(move |(k, c)| {
            let shifted = c.shift(block.0, block.1).truncate(n);
            shifted.terms().map(|(&(l, m), v)| ((k.clone(), l, m), v.clone())).collect::<Vec<_>>()
        })
    }

    fn target_terms(&self) -> Vec<(RowKey, ExactComplex)> {
        self.target
            .terms()
            .flat_map(|(k, c)| c.terms().map(|(&(l, m), v)| ((k.clone(), l, m), v.clone())).collect::<Vec<_>>())
            .collect()
    }

    pub fn assemble(&self) -> Result<AssembledSystem> {
        let images = self.images()?;
        let mut rows: HashMap<RowKey, usize> = HashMap::new();
        let mut row_keys: Vec<RowKey> = Vec::new();
        let mut entries: Vec<SparseRow> = Vec::new();
        let mut index = |key: RowKey, rows: &mut HashMap<RowKey, usize>, entries: &mut Vec<SparseRow>| -> usize {
            *rows.entry(key.clone()).or_insert_with(|| {
                row_keys.push(key);
                entries.push(SparseRow::new());
                entries.len() - 1
            })
        };
        let nb = self.blocks.len();
        for (b, img) in images.iter().enumerate() {
            for (bi, &block) in self.blocks.iter().enumerate() {
                let col = b * nb + bi;
                for (key, v) in self.column_terms(img, block) {
                    let r = index(key, &mut rows, &mut entries);
                    let e = entries[r].entry(col).or_default();
                    *e += &v;
                    if e.is_zero() {
                        entries[r].remove(&col);
                    }
                }
            }
        }
        let mut rhs = vec![ExactComplex::zero(); entries.len()];
        for (key, v) in self.target_terms() {
            let r = index(key, &mut rows, &mut entries);
            if r >= rhs.len() {
                rhs.resize(r + 1, ExactComplex::zero());
            }
            rhs[r] += &v;
        }
        let mut system = SparseSystem::new(self.unknowns());
        for (row, b) in entries.into_iter().zip(rhs) {
            system.push(row, b);
        }
        Ok(AssembledSystem { row_keys, system })
    }

    pub fn solve(&self) -> Result<CoboundaryOutcome> {
        let asm = self.assemble()?;
        Ok(match asm.system.solve() {
            LinearOutcome::Infeasible { y } => CoboundaryOutcome::Infeasible(Witness::from_rows(&asm.row_keys, &y)),
            LinearOutcome::Solution { x, rank } => {
                let mut sol = NCElement::zero(1, self.trunc);
                let nb = self.blocks.len();
                for (j, v) in x.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let (l, m) = self.blocks[j % nb];
                    let c = GradedScalar::monomial(v.clone(), l, m);
                    sol = &sol + &NCElement::from_words(self.trunc, &[self.basis[j / nb].clone()], c);
                }
                CoboundaryOutcome::Solution { x: reduce_ortho(&sol), kernel_dim: self.unknowns() - rank }
            }
        })
    }

    /// `y` applied to every column and to the target, after building the
    /// system again from scratch; valid iff all columns vanish and the target
    /// does not.
    pub fn replay(&self, w: &Witness) -> Result<bool> {
        let y = w.parse()?;
        let eval = |terms: &mut dyn Iterator<Item = (RowKey, ExactComplex)>| -> ExactComplex {
            let mut acc = ExactComplex::zero();
            for (k, v) in terms {
                if let Some(c) = y.get(&render_row(&k)) {
                    acc += &(c * &v);
                }
            }
            acc
        };
        for img in self.images_direct()? {
            for &block in &self.blocks {
                if !eval(&mut self.column_terms(&img, block)).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(!eval(&mut self.target_terms().into_iter()).is_zero())
    }

    /// `Δ(X) - ω*(X⊗1)ω - ω*(1⊗X)ω` for a given `X`, through `hopf` directly.
    pub fn apply(&self, x: &NCElement) -> Result<GroupTensor> {
        let x = x.with_truncation(self.trunc);
        self.image(&x, &coproduct_group(&x)?)
    }
}

type RowKey = (Vec<Word<GroupGen>>, u32, u32);

fn render_row(k: &RowKey) -> String {
    format!("L^{} M^{} {}", k.1, k.2, GroupTensor::render_key(&k.0))
}

#[derive(Clone, Debug)]
pub struct AssembledSystem {
    row_keys: Vec<RowKey>,
    pub system: SparseSystem,
}

impl AssembledSystem {
    pub fn rows(&self) -> usize {
        self.row_keys.len()
    }
}

/// Left null vector, keyed by the rendered row (`L` power, `M` power, tensor monomial).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub entries: BTreeMap<String, (String, String)>,
}

impl Witness {
    fn from_rows(keys: &[RowKey], y: &BTreeMap<usize, ExactComplex>) -> Self {
        let entries = y.iter().map(|(&r, c)| (render_row(&keys[r]), (c.re.to_string(), c.im.to_string()))).collect();
        Self { entries }
    }

    fn parse(&self) -> Result<HashMap<String, ExactComplex>> {
        let p = |s: &str| s.parse::<num_rational::BigRational>().map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")));
        self.entries.iter().map(|(k, (re, im))| Ok((k.clone(), ExactComplex::new(p(re)?, p(im)?)))).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug)]
pub enum CoboundaryOutcome {
    Infeasible(Witness),
    /// A particular solution reduced modulo the orthogonality relations, and
    /// the dimension of the solution space of the homogeneous system.
    Solution { x: NCElement, kernel_dim: usize },
}

impl CoboundaryOutcome {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, CoboundaryOutcome::Infeasible(_))
    }
}

pub fn coboundary_solve(d: u32) -> Result<CoboundaryOutcome> {
    CoboundaryProblem::classical(d, Source::Bargmann)?.solve()
}

fn outcome_report(id: &str, p: &CoboundaryProblem, expect_infeasible: bool, report_only: bool) -> Result<CheckReport> {
    let out = p.solve()?;
    let (ok, residual, rep) = match &out {
        CoboundaryOutcome::Infeasible(w) => {
            let replays = p.replay(w)?;
            (expect_infeasible && replays, format!("infeasible, witness {} rows, replays {replays}", w.len()), CheckReport::new(id, Status::Pass, "").artifact("witness", w))
        }
        CoboundaryOutcome::Solution { x, kernel_dim } => {
            let verified = p.apply(x)?.try_sub(&p.target)?.is_zero();
            (
                !expect_infeasible && verified,
                format!("solution with {} terms, kernel dimension {kernel_dim}, verified {verified}", x.len()),
                CheckReport::new(id, Status::Pass, "").artifact("solution", x.to_string()),
            )
        }
    };
    let status = if report_only { Status::ReportOnly } else { Status::from_bool(ok) };
    let mut rep = rep;
    rep.status = status;
    rep.residual = residual;
    Ok(rep
        .param("grade", p.grade)
        .param("D", p.degree)
        .param("source", p.source.name())
        .param("unknowns", p.unknowns())
        .param("scope", format!("evidence at polynomial degree <= {}", p.degree)))
}

/// Classical coboundary check at ansatz degree `d`; passes iff infeasible
/// with a replaying witness.
pub fn coboundary_check(d: u32) -> Result<CheckReport> {
    outcome_report("nogo.coboundary", &CoboundaryProblem::classical(d, Source::Bargmann)?, true, false)
}

pub fn positive_control_check(d: u32) -> Result<CheckReport> {
    outcome_report("nogo.positive-control", &CoboundaryProblem::classical(d, Source::PositiveControl)?, false, false)
}

/// Grade-`n` equations of the quantum relation. Grade 0 is asserted
/// infeasible; grade 1 is exploratory and report-only.
pub fn quantum_obstruction(n: u32, d: u32) -> Result<CheckReport> {
    outcome_report("nogo.quantum-obstruction", &CoboundaryProblem::new(n, d, Source::Bargmann)?, true, n > 0)
}
