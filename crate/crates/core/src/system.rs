//! The word machinery of a Coxeter system: the geometric representation,
//! ShortLex normal forms, descent sets, longest elements of finite
//! parabolics, parabolic decompositions and element orders.
//!
//! Group elements are handled through their action on the dual of the root
//! space. For a word `w` the vector `x = w(rho)`, where `rho` pairs to 1 with
//! every simple root, satisfies `<x, alpha_t> < 0` exactly when `t` is a left
//! descent of `w`. Left multiplication by a generator touches only the
//! generator and its neighbours, so normal forms cost `O(len * rank)` field
//! operations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::arith::{ArithError, CycloRealField, FieldElement, FieldOps, RootVector};
use crate::caps::Caps;
use crate::classify;
use crate::coxeter::{CoxeterError, CoxeterMatrix, GenSet, Restriction, Word};
use crate::roots::{MinimalRootTable, ReducedWordAutomaton};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WordError {
    #[error(transparent)]
    Field(#[from] ArithError),
    #[error("no longest element: the parabolic subgroup on {0} is infinite")]
    NoLongestElement(String),
    #[error("system too large: more than {0} minimal roots")]
    TooManyMinimalRoots(usize),
    #[error("automaton too large: more than {0} states")]
    TooManyStates(usize),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

/// A group element, stored as its ShortLex-least reduced word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Element(Word);

impl Element {
    pub fn identity() -> Element {
        Element(Word::empty())
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_word(self) -> Word {
        self.0
    }
}

/// A Coxeter system together with its standard geometric representation.
pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
    field: Arc<CycloRealField>,
    /// `2 B(alpha_t, alpha_s)` at `t * rank + s`.
    gram2: Vec<FieldElement>,
    neighbours: Vec<Vec<usize>>,
    caps: Caps,
    table: OnceLock<Result<Arc<MinimalRootTable>, WordError>>,
    parabolics: Mutex<HashMap<GenSet, Arc<Parabolic>>>,
}

/// A standard parabolic subgroup as a Coxeter system in its own right.
#[derive(Debug)]
pub struct Parabolic {
    pub restriction: Restriction,
    pub system: CoxeterSystem,
}

impl std::fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("matrix", &self.matrix)
            .field("L", &self.field.l())
            .finish()
    }
}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix) -> Result<Self, WordError> {
        Self::with_caps(matrix, Caps::default())
    }

    pub fn with_caps(matrix: CoxeterMatrix, caps: Caps) -> Result<Self, WordError> {
        let field = crate::arith::field_for_labels(matrix.labels(), caps.field_l)?;
        let n = matrix.rank();
        let mut gram2 = Vec::with_capacity(n * n);
        for t in 0..n {
            for s in 0..n {
                gram2.push(field.twice_gram_entry(matrix.get(t, s))?);
            }
        }
        let neighbours = (0..n)
            .map(|s| (0..n).filter(|&t| t != s && !gram2[t * n + s].is_zero()).collect())
            .collect();
        Ok(CoxeterSystem {
            matrix,
            field,
            gram2,
            neighbours,
            caps,
            table: OnceLock::new(),
            parabolics: Mutex::new(HashMap::new()),
        })
    }

    /// The parabolic subgroup on `subset`, built once and cached. Lengths,
    /// descents and reducedness of words in `subset` agree with the parent.
    pub fn parabolic(&self, subset: GenSet) -> Result<Arc<Parabolic>, WordError> {
        if let Some(p) = self.parabolics.lock().unwrap().get(&subset) {
            return Ok(p.clone());
        }
        let restriction = self.matrix.restrict(subset)?;
        let system = CoxeterSystem::with_caps(restriction.matrix.clone(), self.caps)?;
        let p = Arc::new(Parabolic { restriction, system });
        self.parabolics.lock().unwrap().insert(subset, p.clone());
        Ok(p)
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn field(&self) -> &Arc<CycloRealField> {
        &self.field
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// `2 B(alpha_t, alpha_s)`.
    pub fn gram2(&self, t: usize, s: usize) -> &FieldElement {
        &self.gram2[t * self.rank() + s]
    }

    pub fn simple_root(&self, s: usize) -> RootVector {
        RootVector::simple(&self.field, self.rank(), s)
    }

    /// `2 B(v, alpha_s)`.
    pub fn pairing2(&self, v: &RootVector, s: usize) -> FieldElement {
        let mut acc = self.field.zero();
        for (t, c) in v.coords.iter().enumerate() {
            if !c.is_zero() {
                let g = self.gram2(t, s);
                if !g.is_zero() {
                    acc = &acc + &(c * g);
                }
            }
        }
        acc
    }

    /// The reflection `s(v) = v - 2 B(v, alpha_s) alpha_s`.
    pub fn act(&self, s: usize, v: &RootVector) -> RootVector {
        let b = self.pairing2(v, s);
        let mut out = v.clone();
        out.coords[s] = &out.coords[s] - &b;
        out
    }

    /// `w(alpha)` for `w` given as a word.
    pub fn act_word(&self, word: &Word, v: &RootVector) -> RootVector {
        word.0.iter().rev().fold(v.clone(), |acc, &s| self.act(s, &acc))
    }

    fn rho(&self) -> Vec<FieldElement> {
        vec![self.field.one(); self.rank()]
    }

    /// Replaces the dual vector `x` by `s(x)`.
    fn reflect_dual(&self, x: &mut [FieldElement], s: usize) {
        let xs = x[s].clone();
        if xs.is_zero() {
            return;
        }
        for &t in &self.neighbours[s] {
            let delta = self.gram2(t, s) * &xs;
            x[t] = &x[t] - &delta;
        }
        x[s] = -xs;
    }

    /// `w(rho)` in coordinates `<w(rho), alpha_t>`.
    fn left_chamber(&self, word: &Word) -> Vec<FieldElement> {
        let mut x = self.rho();
        for &s in word.0.iter().rev() {
            self.reflect_dual(&mut x, s);
        }
        x
    }

    /// `w^-1(rho)`; its negative coordinates are the right descents of `w`.
    fn right_chamber(&self, word: &Word) -> Vec<FieldElement> {
        let mut x = self.rho();
        for &s in &word.0 {
            self.reflect_dual(&mut x, s);
        }
        x
    }

    fn negatives(x: &[FieldElement], within: GenSet) -> GenSet {
        within.iter().filter(|&t| x[t].sign() < 0).collect()
    }

    fn first_with_sign(x: &[FieldElement], within: GenSet, sign: i8) -> Option<usize> {
        within.iter().find(|&t| x[t].sign() == sign)
    }

    /// ShortLex-least reduced word of the element, by repeatedly extracting
    /// the least left descent.
    pub fn normal_form(&self, word: &Word) -> Element {
        let mut x = self.left_chamber(word);
        let all = self.matrix.all();
        let mut out = Vec::new();
        while let Some(t) = Self::first_with_sign(&x, all, -1) {
            out.push(t);
            self.reflect_dual(&mut x, t);
        }
        Element(Word(out))
    }

    pub fn element(&self, letters: &[usize]) -> Element {
        self.normal_form(&Word(letters.to_vec()))
    }

    pub fn length(&self, word: &Word) -> usize {
        self.normal_form(word).len()
    }

    pub fn right_descents(&self, word: &Word) -> GenSet {
        Self::negatives(&self.right_chamber(word), self.matrix.all())
    }

    pub fn left_descents(&self, word: &Word) -> GenSet {
        Self::negatives(&self.left_chamber(word), self.matrix.all())
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        self.normal_form(&a.0.concat(&b.0))
    }

    pub fn inverse(&self, a: &Element) -> Element {
        self.normal_form(&a.0.reversed())
    }

    pub fn power(&self, a: &Element, mut k: u64) -> Element {
        let mut result = Element::identity();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = self.multiply(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.multiply(&base, &base);
            }
        }
        result
    }

    /// Reducedness by direct root tracking: `p s` is reduced for every prefix `p`
    /// iff `p(alpha_s)` stays positive.
    pub fn is_reduced_by_roots(&self, word: &Word) -> bool {
        (0..word.len()).all(|i| {
            let prefix = Word(word.0[..i].to_vec());
            !self.act_word(&prefix, &self.simple_root(word.0[i])).is_negative()
        })
    }

    /// Reducedness via the minimal-root automaton; falls back to root tracking
    /// when the root table exceeds its cap.
    pub fn is_reduced(&self, word: &Word) -> bool {
        match self.minimal_roots() {
            Ok(table) => table.accepts(word),
            Err(_) => self.is_reduced_by_roots(word),
        }
    }

    /// The longest element of the finite parabolic `W_J`, by greedy ascent.
    pub fn longest_element(&self, subset: GenSet) -> Result<Element, WordError> {
        if !classify::is_finite(&self.matrix, subset) {
            return Err(WordError::NoLongestElement(self.matrix.format_set(subset)));
        }
        let mut y = self.rho();
        let mut word = Vec::new();
        while let Some(s) = Self::first_with_sign(&y, subset, 1) {
            word.push(s);
            self.reflect_dual(&mut y, s);
        }
        Ok(self.normal_form(&Word(word)))
    }

    /// The decomposition `x = y.z` with `RD(y) ∩ J = ∅` and `z ∈ W_J`.
    pub fn parabolic_decompose(&self, x: &Element, subset: GenSet) -> (Element, Element) {
        let mut y = self.right_chamber(&x.0);
        let mut stripped = Vec::new();
        while let Some(s) = Self::first_with_sign(&y, subset, -1) {
            stripped.push(s);
            self.reflect_dual(&mut y, s);
        }
        let coset = self.normal_form(&x.0.concat(&Word(stripped.clone())));
        stripped.reverse();
        (coset, self.normal_form(&Word(stripped)))
    }

    /// True iff `u` has order exactly `m`.
    pub fn order_exactly(&self, u: &Element, m: u64) -> bool {
        if m == 0 || !self.power(u, m).is_identity() {
            return false;
        }
        prime_factors(m).into_iter().all(|p| !self.power(u, m / p).is_identity())
    }

    pub fn minimal_roots(&self) -> Result<Arc<MinimalRootTable>, WordError> {
        self.table
            .get_or_init(|| MinimalRootTable::build(self, self.caps.minimal_roots).map(Arc::new))
            .clone()
    }

    /// The fully materialized reduced-word automaton.
    pub fn automaton(&self) -> Result<ReducedWordAutomaton, WordError> {
        ReducedWordAutomaton::build(self.minimal_roots()?, self.caps.automaton_states)
    }

    /// Whether every power of `u` is reduced.
    pub fn all_powers_reduced(&self, u: &Word) -> Result<bool, WordError> {
        self.pump(u, None)
    }

    /// Whether every `(ab)^k` and `(ab)^k a` is reduced.
    pub fn all_alternating_reduced(&self, a: &Word, b: &Word) -> Result<bool, WordError> {
        self.pump(&a.concat(b), Some(a))
    }

    /// Feeds `period` through the automaton until a state at a period boundary
    /// repeats; `tail` is tried from every boundary state.
    fn pump(&self, period: &Word, tail: Option<&Word>) -> Result<bool, WordError> {
        let table = self.minimal_roots()?;
        if period.is_empty() {
            return Ok(true);
        }
        let mut seen = std::collections::HashSet::new();
        let mut state = Vec::new();
        loop {
            if let Some(t) = tail {
                if table.run(&state, t).is_none() {
                    return Ok(false);
                }
            }
            if !seen.insert(state.clone()) {
                return Ok(true);
            }
            if seen.len() > self.caps.automaton_states {
                return Err(WordError::TooManyStates(self.caps.automaton_states));
            }
            match table.run(&state, period) {
                Some(next) => state = next,
                None => return Ok(false),
            }
        }
    }

    /// Breadth-first enumeration of all elements of length `<= radius`, capped.
    /// Returns the elements in ShortLex order of discovery and whether the
    /// enumeration completed.
    pub fn ball(&self, radius: usize, cap: usize) -> (Vec<Element>, bool) {
        let mut all = vec![Element::identity()];
        let mut seen: std::collections::HashSet<Element> = all.iter().cloned().collect();
        let mut frontier = all.clone();
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                let descents = self.right_descents(&w.0);
                for s in self.matrix.all().difference(descents).iter() {
                    let mut letters = w.0 .0.clone();
                    letters.push(s);
                    let e = self.normal_form(&Word(letters));
                    if seen.insert(e.clone()) {
                        if all.len() >= cap {
                            return (all, false);
                        }
                        all.push(e.clone());
                        next.push(e);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        (all, true)
    }
}

pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}
