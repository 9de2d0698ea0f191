//! The orthogonality ideal `R^T R = I`, `R R^T = I` on rotation entries.
//!
//! Membership is decided by exact linear algebra on bounded-degree multiplier
//! ansätze. Every generator is homogeneous for the row-parity and
//! column-parity gradings (sign flips of rows or columns of `R`), so the
//! linear systems split into 64 independent blocks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use super::exact::{ExactComplex, Q};
use super::linsolve::{LinearOutcome, SparseRow, SparseSystem};

/// Rotation entry `r[slot][i][j]`, indices 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RVar {
    pub slot: u8,
    pub i: u8,
    pub j: u8,
}

impl RVar {
    pub fn new(slot: u8, i: u8, j: u8) -> Self {
        assert!((1..=3).contains(&i) && (1..=3).contains(&j), "rotation index out of range");
        Self { slot, i, j }
    }

    pub fn index(self) -> u8 {
        3 * (self.i - 1) + (self.j - 1)
    }

    pub fn from_index(slot: u8, idx: u8) -> Self {
        Self { slot, i: idx / 3 + 1, j: idx % 3 + 1 }
    }
}

impl fmt::Display for RVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r[{}][{}][{}]", self.slot, self.i, self.j)
    }
}

/// Commutative polynomial in rotation entries, canonical (sorted monomials).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CommPoly {
    terms: BTreeMap<Vec<RVar>, ExactComplex>,
}

impl CommPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ExactComplex) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), &c);
        p
    }

    pub fn var(v: RVar) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![v], &ExactComplex::one());
        p
    }

    pub fn monomial(mut vars: Vec<RVar>, c: ExactComplex) -> Self {
        vars.sort_unstable();
        let mut p = Self::zero();
        p.add_term(vars, &c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<RVar>, &ExactComplex)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn slots(&self) -> Vec<u8> {
        let mut s: Vec<u8> = self.terms.keys().flatten().map(|v| v.slot).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn add_term(&mut self, vars: Vec<RVar>, c: &ExactComplex) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(vars.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&vars);
        }
    }

    pub fn add(&self, o: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn mul(&self, o: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m: Vec<RVar> = m1.iter().chain(m2).copied().collect();
                m.sort_unstable();
                out.add_term(m, &(c1 * c2));
            }
        }
        out
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m.iter().map(ToString::to_string).collect();
                if vars.is_empty() {
                    c.to_string()
                } else {
                    format!("{}*{}", c, vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which orthogonality relation: `(R^T R)_{pq} - δ_pq` or `(R R^T)_{pq} - δ_pq`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OrthoGen {
    ColumnGram(u8, u8),
    RowGram(u8, u8),
}

impl OrthoGen {
    /// The twelve generators (upper triangles of both Gram matrices).
    pub fn all() -> Vec<OrthoGen> {
        let mut out = Vec::new();
        for p in 1..=3u8 {
            for q in p..=3 {
                out.push(OrthoGen::ColumnGram(p, q));
            }
        }
        for p in 1..=3u8 {
            for q in p..=3 {
                out.push(OrthoGen::RowGram(p, q));
            }
        }
        out
    }

    /// Terms as sorted local-index monomials with rational coefficients.
    fn local_terms(self) -> Vec<(Vec<u8>, Q)> {
        let idx = |i: u8, j: u8| 3 * (i - 1) + (j - 1);
        let (p, q, column) = match self {
            OrthoGen::ColumnGram(p, q) => (p, q, true),
            OrthoGen::RowGram(p, q) => (p, q, false),
        };
        let mut out = Vec::new();
        for s in 1..=3u8 {
            let (a, b) = if column { (idx(s, p), idx(s, q)) } else { (idx(p, s), idx(q, s)) };
            let mut m = vec![a, b];
            m.sort_unstable();
            out.push((m, Q::one()));
        }
        if p == q {
            out.push((Vec::new(), -Q::one()));
        }
        out
    }

    pub fn poly(self, slot: u8) -> CommPoly {
        let mut p = CommPoly::zero();
        for (m, c) in self.local_terms() {
            let vars = m.iter().map(|&i| RVar::from_index(slot, i)).collect();
            p.add_term(vars, &ExactComplex::real(c));
        }
        p
    }
}

/// Row parity in the low three bits, column parity in the next three.
fn parity(m: &[u8]) -> u8 {
    let mut bits = 0u8;
    for &x in m {
        bits ^= 1 << (x / 3);
        bits ^= 1 << (3 + x % 3);
    }
    bits
}

/// Degree-compatible monomial order: degree first, then lexicographic.
fn mono_cmp(a: &[u8], b: &[u8]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq)]
struct MKey(Vec<u8>);

impl Ord for MKey {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        mono_cmp(&self.0, &o.0)
    }
}

impl PartialOrd for MKey {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

fn monomials_up_to(deg: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..deg {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(0);
            for x in start..9 {
                let mut n = m.clone();
                n.push(x);
                next.push(n);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn mul_mono(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut m: Vec<u8> = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    m
}

type Reduced = Arc<Vec<(Vec<u8>, Q)>>;

/// Normal forms of single-slot rotation monomials modulo the orthogonality
/// ideal, valid for monomials of degree at most `cap`.
pub struct OrthoReducer {
    cap: usize,
    /// Pivot rows per parity block, each normalized to leading coefficient 1.
    blocks: HashMap<u8, HashMap<Vec<u8>, Vec<(Vec<u8>, Q)>>>,
    memo: HashMap<Vec<u8>, Reduced>,
}

/// Extra degree allowed in the multiplier ansatz beyond the reduced degree.
const EXTRA_DEGREE: usize = 2;

impl OrthoReducer {
    pub fn new(cap: usize) -> Self {
        Self { cap, blocks: HashMap::new(), memo: HashMap::new() }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn build_block(&mut self, class: u8) {
        if self.blocks.contains_key(&class) {
            return;
        }
        let gens: Vec<(u8, Vec<(Vec<u8>, Q)>)> = OrthoGen::all()
            .into_iter()
            .map(|g| {
                let t = g.local_terms();
                (parity(&t[0].0), t)
            })
            .collect();
        let mut pivots: HashMap<Vec<u8>, BTreeMap<MKey, Q>> = HashMap::new();
        for m in monomials_up_to(self.cap + EXTRA_DEGREE - 2) {
            let pm = parity(&m);
            for (pg, terms) in &gens {
                if pm ^ pg != class {
                    continue;
                }
                let mut row: BTreeMap<MKey, Q> = BTreeMap::new();
                for (t, c) in terms {
                    let key = MKey(mul_mono(&m, t));
                    let e = row.entry(key.clone()).or_insert_with(Q::zero);
                    *e += c;
                    if e.is_zero() {
                        row.remove(&key);
                    }
                }
                loop {
                    let Some((lead, lc)) = row.iter().next_back() else { break };
                    let lead = lead.clone();
                    let lc = lc.clone();
                    match pivots.get(&lead.0) {
                        Some(p) => {
                            for (k, v) in p {
                                let e = row.entry(k.clone()).or_insert_with(Q::zero);
                                *e -= &lc * v;
                                if e.is_zero() {
                                    row.remove(k);
                                }
                            }
                        }
                        None => {
                            let inv = Q::one() / &lc;
                            let norm = row.iter().map(|(k, v)| (k.clone(), v * &inv)).collect();
                            pivots.insert(lead.0, norm);
                            break;
                        }
                    }
                }
            }
        }
        let block = pivots
            .into_iter()
            .filter(|(lead, _)| lead.len() <= self.cap)
            .map(|(lead, row)| {
                let rest = row.into_iter().filter(|(k, _)| k.0 != lead).map(|(k, v)| (k.0, v)).collect();
                (lead, rest)
            })
            .collect();
        self.blocks.insert(class, block);
    }

    /// Normal form of one sorted monomial (local indices 0..9).
    pub fn reduce(&mut self, m: &[u8]) -> Reduced {
        assert!(m.len() <= self.cap, "monomial degree {} exceeds reducer cap {}", m.len(), self.cap);
        if let Some(r) = self.memo.get(m) {
            return r.clone();
        }
        let class = parity(m);
        self.build_block(class);
        let out: Reduced = match self.blocks[&class].get(m).cloned() {
            None => Arc::new(vec![(m.to_vec(), Q::one())]),
            Some(rest) => {
                let mut acc: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
                for (t, c) in rest {
                    for (u, d) in self.reduce(&t).iter() {
                        let e = acc.entry(u.clone()).or_insert_with(Q::zero);
                        *e -= &c * d;
                    }
                }
                Arc::new(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            }
        };
        self.memo.insert(m.to_vec(), out.clone());
        out
    }
}

static SHARED: Lazy<Mutex<OrthoReducer>> = Lazy::new(|| Mutex::new(OrthoReducer::new(4)));

/// Normal form through the process-wide reducer, growing its cap on demand.
pub fn reduce_shared(m: &[u8]) -> Reduced {
    let mut r = SHARED.lock().expect("reducer lock");
    if m.len() > r.cap() {
        *r = OrthoReducer::new(m.len());
    }
    r.reduce(m)
}

/// Normal form of a polynomial whose variables may span several slots.
///
/// The reduction is applied slot by slot; the result is zero exactly when
/// the input lies in the sum of the per-slot ideals (within the degree cap).
pub fn normal_form(p: &CommPoly) -> CommPoly {
    let mut cur = p.clone();
    for slot in p.slots() {
        let mut next = CommPoly::zero();
        for (m, c) in &cur.terms {
            let (mine, rest): (Vec<RVar>, Vec<RVar>) = m.iter().partition(|v| v.slot == slot);
            let local: Vec<u8> = mine.iter().map(|v| v.index()).collect();
            for (u, d) in reduce_shared(&local).iter() {
                let mut vars = rest.clone();
                vars.extend(u.iter().map(|&i| RVar::from_index(slot, i)));
                vars.sort_unstable();
                next.add_term(vars, &c.scale(d));
            }
        }
        cur = next;
    }
    cur
}

/// Multipliers expressing a polynomial as a combination of the generators.
#[derive(Clone, Debug)]
pub struct MemberCertificate {
    pub slot: u8,
    pub multipliers: Vec<(OrthoGen, CommPoly)>,
}

impl MemberCertificate {
    /// `Σ h_g g`, to be compared with the original polynomial.
    pub fn replay(&self) -> CommPoly {
        self.multipliers.iter().fold(CommPoly::zero(), |acc, (g, h)| acc.add(&h.mul(&g.poly(self.slot))))
    }
}

#[derive(Clone, Debug)]
pub enum Membership {
    Member(MemberCertificate),
    NotFoundAtBound(usize),
}

/// Bounded-degree membership test in the orthogonality ideal of one slot.
///
/// Multiplier monomials range over all products with total degree at most
/// `degree_bound`; a negative answer only covers that bound.
pub fn ideal_membership(p: &CommPoly, slot: u8, degree_bound: usize) -> Membership {
    assert!(p.terms.keys().flatten().all(|v| v.slot == slot), "polynomial uses variables of another slot");
    let classes: std::collections::HashSet<u8> =
        p.terms.keys().map(|m| parity(&m.iter().map(|v| v.index()).collect::<Vec<_>>())).collect();
    let gens = OrthoGen::all();
    let mut columns: Vec<(OrthoGen, Vec<u8>)> = Vec::new();
    if degree_bound >= 2 {
        for m in monomials_up_to(degree_bound - 2) {
            for &g in &gens {
                let pg = parity(&g.local_terms()[0].0);
                if classes.contains(&(parity(&m) ^ pg)) {
                    columns.push((g, m.clone()));
                }
            }
        }
    }
    let mut rows: BTreeMap<Vec<u8>, SparseRow> = BTreeMap::new();
    for (col, (g, m)) in columns.iter().enumerate() {
        for (t, c) in g.local_terms() {
            let e = rows.entry(mul_mono(m, &t)).or_default().entry(col).or_default();
            *e += &ExactComplex::real(c);
        }
    }
    let target: BTreeMap<Vec<u8>, ExactComplex> =
        p.terms.iter().map(|(m, c)| (m.iter().map(|v| v.index()).collect(), c.clone())).collect();
    for k in target.keys() {
        rows.entry(k.clone()).or_default();
    }
    let mut sys = SparseSystem::new(columns.len());
    for (k, row) in rows {
        let row = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        sys.push(row, target.get(&k).cloned().unwrap_or_default());
    }
    match sys.solve() {
        LinearOutcome::Infeasible { .. } => Membership::NotFoundAtBound(degree_bound),
        LinearOutcome::Solution { x, .. } => {
            let mut per_gen: BTreeMap<OrthoGen, CommPoly> = BTreeMap::new();
            for ((g, m), c) in columns.iter().zip(x) {
                if c.is_zero() {
                    continue;
                }
                let vars = m.iter().map(|&i| RVar::from_index(slot, i)).collect();
                let h = per_gen.entry(*g).or_default();
                *h = h.add(&CommPoly::monomial(vars, c));
            }
            Membership::Member(MemberCertificate { slot, multipliers: per_gen.into_iter().collect() })
        }
    }
}
