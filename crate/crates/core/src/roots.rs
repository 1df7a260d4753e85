//! Minimal roots and the reduced-word automaton built on them.
//!
//! After reading a reduced word `w`, the automaton state is the set of
//! minimal roots sent negative by `w`. Appending `s` is rejected exactly
//! when `alpha_s` is in the state; otherwise the new state is `alpha_s`
//! together with the images `s(beta)` that are still minimal.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::arith::{FieldOps, RootVector};
use crate::coxeter::Word;
use crate::system::{CoxeterSystem, WordError};

/// What a generator does to a minimal root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootAction {
    /// The root is the generator's own simple root.
    Negative,
    /// The image is the minimal root with this index (possibly the root itself).
    Minimal(usize),
    /// The image is positive but not minimal.
    Escaped,
}

/// A state: sorted indices of minimal roots.
pub type RootSet = Vec<u32>;

#[derive(Debug, Clone)]
pub struct MinimalRootTable {
    rank: usize,
    roots: Vec<RootVector>,
    action: Vec<RootAction>,
}

impl MinimalRootTable {
    /// Breadth-first closure of the simple roots under the generators, keeping
    /// an image only while it dominates no simple root.
    pub fn build(system: &CoxeterSystem, cap: usize) -> Result<Self, WordError> {
        let n = system.rank();
        let mut roots: Vec<RootVector> = (0..n).map(|s| system.simple_root(s)).collect();
        let mut index: HashMap<RootVector, usize> =
            roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        if n > cap {
            return Err(WordError::TooManyMinimalRoots(cap));
        }
        let mut action = Vec::new();
        let mut i = 0;
        while i < roots.len() {
            for s in 0..n {
                let a = if i == s {
                    RootAction::Negative
                } else {
                    let image = system.act(s, &roots[i]);
                    if image == roots[i] {
                        RootAction::Minimal(i)
                    } else if dominates_simple(system, &image) {
                        RootAction::Escaped
                    } else if let Some(&j) = index.get(&image) {
                        RootAction::Minimal(j)
                    } else {
                        debug_assert!(image.is_positive(), "image of a non-simple positive root went negative");
                        if roots.len() >= cap {
                            return Err(WordError::TooManyMinimalRoots(cap));
                        }
                        index.insert(image.clone(), roots.len());
                        roots.push(image);
                        RootAction::Minimal(roots.len() - 1)
                    }
                };
                action.push(a);
            }
            i += 1;
        }
        Ok(MinimalRootTable { rank: n, roots, action })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[RootVector] {
        &self.roots
    }

    pub fn action(&self, root: usize, s: usize) -> RootAction {
        self.action[root * self.rank + s]
    }

    /// One transition; `None` means the word stops being reduced.
    pub fn step(&self, state: &[u32], s: usize) -> Option<RootSet> {
        if state.binary_search(&(s as u32)).is_ok() {
            return None;
        }
        let mut next: RootSet = Vec::with_capacity(state.len() + 1);
        next.push(s as u32);
        for &b in state {
            if let RootAction::Minimal(j) = self.action(b as usize, s) {
                next.push(j as u32);
            }
        }
        next.sort_unstable();
        next.dedup();
        Some(next)
    }

    pub fn run(&self, state: &[u32], word: &Word) -> Option<RootSet> {
        let mut cur = state.to_vec();
        for &s in word.letters() {
            cur = self.step(&cur, s)?;
        }
        Some(cur)
    }

    pub fn accepts(&self, word: &Word) -> bool {
        self.run(&[], word).is_some()
    }
}

/// `B(gamma, alpha_t) >= 1` for some simple root other than `gamma`.
fn dominates_simple(system: &CoxeterSystem, gamma: &RootVector) -> bool {
    let two = system.field().from_int(2);
    (0..system.rank()).any(|t| {
        let p = system.pairing2(gamma, t);
        (&p - &two).sign() >= 0 && *gamma != system.simple_root(t)
    })
}

/// The reduced-word automaton with every reachable state materialized.
#[derive(Debug, Clone)]
pub struct ReducedWordAutomaton {
    table: Arc<MinimalRootTable>,
    states: Vec<RootSet>,
    transitions: Vec<Option<u32>>,
}

impl ReducedWordAutomaton {
    pub fn build(table: Arc<MinimalRootTable>, cap: usize) -> Result<Self, WordError> {
        let n = table.rank();
        let mut states: Vec<RootSet> = vec![Vec::new()];
        let mut ids: HashMap<RootSet, u32> = HashMap::from([(Vec::new(), 0)]);
        let mut transitions = Vec::new();
        let mut queue = VecDeque::from([0u32]);
        while let Some(id) = queue.pop_front() {
            // states are processed in id order, so transitions line up
            debug_assert_eq!(transitions.len(), id as usize * n);
            for s in 0..n {
                let t = match table.step(&states[id as usize], s) {
                    None => None,
                    Some(next) => Some(match ids.get(&next) {
                        Some(&j) => j,
                        None => {
                            if states.len() >= cap {
                                return Err(WordError::TooManyStates(cap));
                            }
                            let j = states.len() as u32;
                            ids.insert(next.clone(), j);
                            states.push(next);
                            queue.push_back(j);
                            j
                        }
                    }),
                };
                transitions.push(t);
            }
        }
        Ok(ReducedWordAutomaton { table, states, transitions })
    }

    pub fn table(&self) -> &MinimalRootTable {
        &self.table
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, id: u32) -> &RootSet {
        &self.states[id as usize]
    }

    pub fn transition(&self, state: u32, s: usize) -> Option<u32> {
        self.transitions[state as usize * self.table.rank() + s]
    }

    pub fn accepts(&self, word: &Word) -> bool {
        let mut state = 0u32;
        for &s in word.letters() {
            match self.transition(state, s) {
                Some(next) => state = next,
                None => return false,
            }
        }
        true
    }
}
