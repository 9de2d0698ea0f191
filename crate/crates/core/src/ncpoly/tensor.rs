//! Normal-ordered elements of tensor powers of a presented algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{ExactComplex, GradedScalar, Q};

/// A generator of a presented algebra with commutation relations
/// `x y = y x + bracket(x, y)` for `x > y`.
///
/// A word is canonical iff its letters are non-decreasing.
pub trait Letter: Copy + Ord + Eq + Hash + Debug + Display + 'static {
    /// Grade counted against the `D` bound of a [`Truncation`]. Rewriting
    /// must preserve it exactly.
    fn degree(self) -> u32;

    /// `x y - y x` for `x > y`, as a list of raw (possibly non-canonical) terms.
    fn bracket(x: Self, y: Self) -> Vec<(GradedScalar, Vec<Self>)>;

    /// Access to the per-thread product cache of this alphabet.
    fn with_cache<R>(f: impl FnOnce(&mut SlotCache<Self>) -> R) -> R;
}

pub type Word<L> = Vec<L>;
pub type SlotPoly<L> = Rc<Vec<(Word<L>, GradedScalar)>>;

/// Memoized products of canonical words, keyed by the `L`-order in force.
pub struct SlotCache<L: Letter> {
    letter: HashMap<(u32, Word<L>, L), SlotPoly<L>>,
    word: HashMap<(u32, Word<L>, Word<L>), SlotPoly<L>>,
}

impl<L: Letter> Default for SlotCache<L> {
    fn default() -> Self {
        Self { letter: HashMap::new(), word: HashMap::new() }
    }
}

impl<L: Letter> SlotCache<L> {
    pub fn clear(&mut self) {
        self.letter.clear();
        self.word.clear();
    }

    pub fn len(&self) -> usize {
        self.letter.len() + self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Truncation policy: `L`-powers above `n` are discarded, and so are terms
/// whose total letter grade exceeds `d` (when set).
///
/// Rewriting and coproducts preserve the letter grade, so both cuts are
/// ideals and every kept coefficient is exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Truncation {
    pub n: u32,
    pub d: Option<u32>,
}

impl Truncation {
    pub fn new(n: u32, d: u32) -> Self {
        Self { n, d: Some(d) }
    }

    pub fn lambda_only(n: u32) -> Self {
        Self { n, d: None }
    }

    pub fn admits_degree(&self, deg: u32) -> bool {
        self.d.is_none_or(|d| deg <= d)
    }
}

pub fn is_canonical<L: Letter>(w: &[L]) -> bool {
    w.windows(2).all(|p| p[0] <= p[1])
}

fn accumulate<L: Letter>(acc: &mut BTreeMap<Word<L>, GradedScalar>, w: Word<L>, c: &GradedScalar) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(w.clone()).or_default();
    e.add_assign(c);
    if e.is_zero() {
        acc.remove(&w);
    }
}

fn finish<L: Letter>(acc: BTreeMap<Word<L>, GradedScalar>) -> SlotPoly<L> {
    Rc::new(acc.into_iter().collect())
}

/// Canonical form of `w * g` for canonical `w`.
pub fn mul_letter<L: Letter>(n: u32, w: &[L], g: L) -> SlotPoly<L> {
    match w.last() {
        None => return Rc::new(vec![(vec![g], GradedScalar::one())]),
        Some(&x) if x <= g => {
            let mut v = w.to_vec();
            v.push(g);
            return Rc::new(vec![(v, GradedScalar::one())]);
        }
        _ => {}
    }
    let key = (n, w.to_vec(), g);
    if let Some(hit) = L::with_cache(|c| c.letter.get(&key).cloned()) {
        return hit;
    }
    let (u, x) = (&w[..w.len() - 1], w[w.len() - 1]);
    let mut acc = BTreeMap::new();
    // u x g = (u g) x + u [x, g]
    for (t, c) in mul_letter(n, u, g).iter() {
        for (t2, c2) in mul_letter(n, t, x).iter() {
            accumulate(&mut acc, t2.clone(), &c.mul_trunc(c2, n));
        }
    }
    for (coef, word) in L::bracket(x, g) {
        let coef = coef.truncate(n);
        if coef.is_zero() {
            continue;
        }
        for (t, c) in mul_raw(n, u, &word).iter() {
            accumulate(&mut acc, t.clone(), &coef.mul_trunc(c, n));
        }
    }
    let out = finish(acc);
    L::with_cache(|c| c.letter.insert(key, out.clone()));
    out
}

/// Canonical form of `w * word` for canonical `w` and arbitrary `word`.
pub fn mul_raw<L: Letter>(n: u32, w: &[L], word: &[L]) -> SlotPoly<L> {
    let mut cur: BTreeMap<Word<L>, GradedScalar> = BTreeMap::from([(w.to_vec(), GradedScalar::one())]);
    for &g in word {
        let mut next = BTreeMap::new();
        for (t, c) in &cur {
            for (t2, c2) in mul_letter(n, t, g).iter() {
                accumulate(&mut next, t2.clone(), &c.mul_trunc(c2, n));
            }
        }
        cur = next;
    }
    finish(cur)
}

/// Canonical form of the product of two canonical words.
pub fn mul_words<L: Letter>(n: u32, a: &[L], b: &[L]) -> SlotPoly<L> {
    if b.is_empty() {
        return Rc::new(vec![(a.to_vec(), GradedScalar::one())]);
    }
    if a.is_empty() {
        return Rc::new(vec![(b.to_vec(), GradedScalar::one())]);
    }
    if a.last() <= b.first() {
        let mut v = a.to_vec();
        v.extend_from_slice(b);
        return Rc::new(vec![(v, GradedScalar::one())]);
    }
    let key = (n, a.to_vec(), b.to_vec());
    if let Some(hit) = L::with_cache(|c| c.word.get(&key).cloned()) {
        return hit;
    }
    let out = mul_raw(n, a, b);
    L::with_cache(|c| c.word.insert(key, out.clone()));
    out
}

/// Canonical form of an arbitrary word.
pub fn normal_form_word<L: Letter>(n: u32, word: &[L]) -> SlotPoly<L> {
    mul_raw(n, &[], word)
}

/// Finite sum of `coeff * (w_1 ⊗ ... ⊗ w_slots)` with canonical slot words.
#[derive(Clone)]
pub struct Tensor<L: Letter> {
    slots: usize,
    trunc: Truncation,
    terms: BTreeMap<Vec<Word<L>>, GradedScalar>,
    dropped: u64,
}

impl<L: Letter> PartialEq for Tensor<L> {
    fn eq(&self, o: &Self) -> bool {
        self.slots == o.slots && self.terms == o.terms
    }
}

impl<L: Letter> Tensor<L> {
    pub fn zero(slots: usize, trunc: Truncation) -> Self {
        Self { slots, trunc, terms: BTreeMap::new(), dropped: 0 }
    }

    pub fn one(slots: usize, trunc: Truncation) -> Self {
        Self::scalar(slots, trunc, GradedScalar::one())
    }

    pub fn scalar(slots: usize, trunc: Truncation, c: GradedScalar) -> Self {
        let mut t = Self::zero(slots, trunc);
        t.add_canonical(vec![Vec::new(); slots], &c);
        t
    }

    /// `coeff * w_1 ⊗ ... ⊗ w_n`, each slot word normal-ordered.
    pub fn from_words(trunc: Truncation, words: &[Vec<L>], coeff: GradedScalar) -> Self {
        let slots = words.len();
        let mut partial: Vec<(Vec<Word<L>>, GradedScalar)> = vec![(Vec::new(), coeff.truncate(trunc.n))];
        for w in words {
            let nf = normal_form_word(trunc.n, w);
            let mut next = Vec::new();
            for (k, c) in &partial {
                for (t, d) in nf.iter() {
                    let cd = c.mul_trunc(d, trunc.n);
                    if cd.is_zero() {
                        continue;
                    }
                    let mut k2 = k.clone();
                    k2.push(t.clone());
                    next.push((k2, cd));
                }
            }
            partial = next;
        }
        let mut out = Self::zero(slots, trunc);
        for (k, c) in partial {
            out.add_canonical(k, &c);
        }
        out
    }

    pub fn from_word(trunc: Truncation, word: &[L]) -> Self {
        Self::from_words(trunc, &[word.to_vec()], GradedScalar::one())
    }

    pub fn generator(trunc: Truncation, g: L) -> Self {
        Self::from_word(trunc, &[g])
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// Number of terms discarded by the `D` cut while building this value.
    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word<L>>, &GradedScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &[Word<L>]) -> GradedScalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn key_degree(key: &[Word<L>]) -> u32 {
        key.iter().flatten().map(|l| l.degree()).sum()
    }

    /// Insert an already-canonical term, applying the truncation policy.
    pub fn add_canonical(&mut self, key: Vec<Word<L>>, c: &GradedScalar) {
        debug_assert_eq!(key.len(), self.slots);
        debug_assert!(key.iter().all(|w| is_canonical(w)));
        if !self.trunc.admits_degree(Self::key_degree(&key)) {
            if !c.is_zero() {
                self.dropped += 1;
            }
            return;
        }
        let c = c.truncate(self.trunc.n);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_default();
        e.add_assign(&c);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.trunc != o.trunc {
            return Err(Error::PolicyMismatch(self.trunc, o.trunc));
        }
        if self.slots != o.slots {
            return Err(Error::Usage(format!("slot counts differ: {} vs {}", self.slots, o.slots)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_canonical(k.clone(), c);
        }
        out.dropped += o.dropped;
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GradedScalar::constant(ExactComplex::int(-1)))
    }

    pub fn scale(&self, s: &GradedScalar) -> Self {
        let mut out = Self::zero(self.slots, self.trunc);
        out.dropped = self.dropped;
        for (k, c) in &self.terms {
            out.add_canonical(k.clone(), &c.mul_trunc(s, self.trunc.n));
        }
        out
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        self.scale(&GradedScalar::constant(ExactComplex::real(s.clone())))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let n = self.trunc.n;
        let mut out = Self::zero(self.slots, self.trunc);
        out.dropped = self.dropped + o.dropped;
        for (k1, c1) in &self.terms {
            let d1 = Self::key_degree(k1);
            for (k2, c2) in &o.terms {
                if !self.trunc.admits_degree(d1 + Self::key_degree(k2)) {
                    out.dropped += 1;
                    continue;
                }
                let c = c1.mul_trunc(c2, n);
                if c.is_zero() {
                    continue;
                }
                let mut partial: Vec<(Vec<Word<L>>, GradedScalar)> = vec![(Vec::with_capacity(self.slots), c)];
                for s in 0..self.slots {
                    let prod = mul_words(n, &k1[s], &k2[s]);
                    let mut next = Vec::with_capacity(partial.len() * prod.len());
                    for (k, c) in &partial {
                        for (w, d) in prod.iter() {
                            let cd = if d.is_one() { c.clone() } else { c.mul_trunc(d, n) };
                            if cd.is_zero() {
                                continue;
                            }
                            let mut k = k.clone();
                            k.push(w.clone());
                            next.push((k, cd));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    out.add_canonical(k, &c);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, o: &Self) -> Result<Self> {
        self.try_mul(o)?.try_sub(&o.try_mul(self)?)
    }

    /// Coefficients conjugated, slot words reversed and re-ordered.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.slots, self.trunc);
        out.dropped = self.dropped;
        for (k, c) in &self.terms {
            let rev: Vec<Vec<L>> = k.iter().map(|w| w.iter().rev().copied().collect()).collect();
            let t = Self::from_words(self.trunc, &rev, c.conj());
            for (k2, c2) in t.terms {
                out.add_canonical(k2, &c2);
            }
        }
        out
    }

    /// `Σ_{n≥0} x^n / n!`, which terminates because every term of `x`
    /// raises either the `L`-power or the bounded letter grade.
    pub fn exp_series(&self) -> Result<Self> {
        for (k, c) in &self.terms {
            let raises_lambda = c.min_lambda().is_some_and(|l| l >= 1);
            let raises_degree = self.trunc.d.is_some() && Self::key_degree(k) >= 1;
            if !(raises_lambda || raises_degree) {
                return Err(Error::Precondition(format!(
                    "exp_series needs every term to carry L or a graded letter; offending term {}",
                    Self::render_key(k)
                )));
            }
        }
        let mut sum = Self::one(self.slots, self.trunc);
        let mut power = Self::one(self.slots, self.trunc);
        let mut k = 1i64;
        loop {
            power = power.try_mul(self)?.scale_q(&crate::scalars::q_frac(1, k));
            if power.is_zero() {
                break;
            }
            sum = sum.try_add(&power)?;
            k += 1;
        }
        sum.dropped += power.dropped;
        Ok(sum)
    }

    /// Only the terms of the given `L`-power.
    pub fn lambda_part(&self, lam: u32) -> Self {
        let mut out = Self::zero(self.slots, self.trunc);
        for (k, c) in &self.terms {
            out.add_canonical(k.clone(), &c.lambda_part(lam));
        }
        out
    }

    /// Re-truncate to a coarser policy.
    pub fn with_truncation(&self, trunc: Truncation) -> Self {
        let mut out = Self::zero(self.slots, trunc);
        for (k, c) in &self.terms {
            out.add_canonical(k.clone(), c);
        }
        out
    }

    /// Keep terms whose key satisfies the predicate.
    pub fn filter_keys(&self, mut keep: impl FnMut(&[Word<L>]) -> bool) -> Self {
        let mut out = Self::zero(self.slots, self.trunc);
        for (k, c) in &self.terms {
            if keep(k) {
                out.add_canonical(k.clone(), c);
            }
        }
        out
    }

    /// `self ⊗ other`, slots concatenated.
    pub fn tensor(&self, o: &Self) -> Result<Self> {
        if self.trunc != o.trunc {
            return Err(Error::PolicyMismatch(self.trunc, o.trunc));
        }
        let mut out = Self::zero(self.slots + o.slots, self.trunc);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let mut k = k1.clone();
                k.extend(k2.iter().cloned());
                out.add_canonical(k, &c1.mul_trunc(c2, self.trunc.n));
            }
        }
        Ok(out)
    }

    /// Place the slots of `self` at `positions` inside an element with
    /// `total` slots, filling the rest with the unit.
    pub fn embed(&self, total: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.slots);
        let mut out = Self::zero(total, self.trunc);
        for (k, c) in &self.terms {
            let mut key = vec![Vec::new(); total];
            for (w, &p) in k.iter().zip(positions) {
                key[p] = w.clone();
            }
            out.add_canonical(key, c);
        }
        out
    }

    /// Replace slot `s` by the image of its word under `f`, which returns an
    /// element with `m` slots; the result has `slots + m - 1` slots.
    pub fn map_slot(&self, s: usize, m: usize, mut f: impl FnMut(&[L]) -> Result<Self>) -> Result<Self> {
        let total = self.slots + m - 1;
        let mut out = Self::zero(total, self.trunc);
        out.dropped = self.dropped;
        let mut memo: HashMap<Vec<L>, Self> = HashMap::new();
        for (k, c) in &self.terms {
            if !memo.contains_key(&k[s]) {
                memo.insert(k[s].clone(), f(&k[s])?);
            }
            let img = &memo[&k[s]];
            for (ik, ic) in &img.terms {
                let mut key = Vec::with_capacity(total);
                key.extend(k[..s].iter().cloned());
                key.extend(ik.iter().cloned());
                key.extend(k[s + 1..].iter().cloned());
                out.add_canonical(key, &c.mul_trunc(ic, self.trunc.n));
            }
        }
        Ok(out)
    }

    /// Apply a scalar-valued functional on slot `s` (e.g. a counit).
    pub fn contract_slot(&self, s: usize, mut f: impl FnMut(&[L]) -> GradedScalar) -> Self {
        let mut out = Self::zero(self.slots - 1, self.trunc);
        for (k, c) in &self.terms {
            let v = f(&k[s]);
            if v.is_zero() {
                continue;
            }
            let mut key = k.clone();
            key.remove(s);
            out.add_canonical(key, &c.mul_trunc(&v, self.trunc.n));
        }
        out
    }

    pub fn render_key(key: &[Word<L>]) -> String {
        key.iter()
            .map(|w| if w.is_empty() { "1".to_string() } else { w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ") })
            .collect::<Vec<_>>()
            .join(" ⊗ ")
    }
}

impl<L: Letter> Display for Tensor<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let coeff = if c.len() == 1 { c.to_string() } else { format!("({c})") };
                format!("{coeff}*{}", Self::render_key(k))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<L: Letter> Debug for Tensor<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<L: Letter> std::ops::Add for &Tensor<L> {
    type Output = Tensor<L>;
    fn add(self, o: &Tensor<L>) -> Tensor<L> {
        self.try_add(o).expect("incompatible operands")
    }
}

impl<L: Letter> std::ops::Sub for &Tensor<L> {
    type Output = Tensor<L>;
    fn sub(self, o: &Tensor<L>) -> Tensor<L> {
        self.try_sub(o).expect("incompatible operands")
    }
}

impl<L: Letter> std::ops::Mul for &Tensor<L> {
    type Output = Tensor<L>;
    fn mul(self, o: &Tensor<L>) -> Tensor<L> {
        self.try_mul(o).expect("incompatible operands")
    }
}
