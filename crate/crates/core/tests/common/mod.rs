//! Test systems and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use coxfold::arith::{CycloRealField, FieldElement, FieldOps, RootVector};
use coxfold::classify::{classify_component, Classification};
use coxfold::coxeter::{alternating_word, CoxeterMatrix, Label, Word};
use coxfold::roots::MinimalRootTable;
use coxfold::system::CoxeterSystem;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[allow(unused_imports)]
pub use coxfold::coxeter::Label::{Finite as F, Infinite as Inf};

fn gens(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("g{i}")).collect()
}

/// Path `g1 - g2 - ... - gn` with the given labels on consecutive edges.
pub fn path(labels: &[Label]) -> CoxeterMatrix {
    let n = labels.len() + 1;
    let edges: Vec<(usize, usize, Label)> = labels.iter().enumerate().map(|(i, &m)| (i, i + 1, m)).collect();
    CoxeterMatrix::from_edges(&gens(n), &edges).unwrap()
}

pub fn type_a(n: usize) -> CoxeterMatrix {
    path(&vec![F(3); n - 1])
}

pub fn type_b(n: usize) -> CoxeterMatrix {
    let mut labels = vec![F(3); n - 1];
    labels[n - 2] = F(4);
    path(&labels)
}

pub fn type_h(n: usize) -> CoxeterMatrix {
    let mut labels = vec![F(3); n - 1];
    labels[0] = F(5);
    path(&labels)
}

pub fn type_f4() -> CoxeterMatrix {
    path(&[F(3), F(4), F(3)])
}

pub fn dihedral(m: Label) -> CoxeterMatrix {
    path(&[m])
}

/// `D_n`: a path of length `n - 1` with an extra leaf on the second vertex.
pub fn type_d(n: usize) -> CoxeterMatrix {
    let mut edges: Vec<(usize, usize, Label)> = (1..n - 1).map(|i| (i, i + 1, F(3))).collect();
    edges.push((0, 2, F(3)));
    CoxeterMatrix::from_edges(&gens(n), &edges).unwrap()
}

/// `E_n`: arms of length 1, 2 and `n - 4` from a branch vertex.
pub fn type_e(n: usize) -> CoxeterMatrix {
    // g1 - g3 - g4 - g5 - ... - gn, with g2 attached to g4
    let mut edges = vec![(0, 2, F(3)), (1, 3, F(3))];
    edges.extend((2..n - 1).map(|i| (i, i + 1, F(3))));
    CoxeterMatrix::from_edges(&gens(n), &edges).unwrap()
}

pub fn triangle(a: Label, b: Label, c: Label) -> CoxeterMatrix {
    CoxeterMatrix::from_edges(&gens(3), &[(0, 1, a), (1, 2, b), (0, 2, c)]).unwrap()
}

pub fn affine_a2() -> CoxeterMatrix {
    triangle(F(3), F(3), F(3))
}

pub fn system(m: CoxeterMatrix) -> CoxeterSystem {
    CoxeterSystem::new(m).unwrap()
}

/// Group order by breadth-first search on the images of the simple roots,
/// which determine the element in the faithful geometric representation.
pub fn order_by_root_images(sys: &CoxeterSystem, cap: usize) -> usize {
    let n = sys.rank();
    let start: Vec<RootVector> = (0..n).map(|i| sys.simple_root(i)).collect();
    let mut seen: HashSet<Vec<RootVector>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(images) = queue.pop_front() {
        for s in 0..n {
            let next: Vec<RootVector> = images.iter().map(|v| sys.act(s, v)).collect();
            if seen.insert(next.clone()) {
                assert!(seen.len() <= cap, "group larger than {cap}");
                queue.push_back(next);
            }
        }
    }
    seen.len()
}

/// Product of the generators in `set`, in index order.
pub fn product(set: impl IntoIterator<Item = usize>) -> Word {
    Word(set.into_iter().collect())
}

pub fn power(w: &Word, k: usize) -> Word {
    Word(w.letters().iter().copied().cycle().take(w.len() * k).collect())
}

/// Root-tracking reducedness checked incrementally: keeps the matrix of the
/// prefix `p` and tests `p(alpha_s)` before each letter. Independent of
/// the automaton and of the chamber normal forms.
pub struct PrefixTracker<'a> {
    sys: &'a CoxeterSystem,
    /// `p(alpha_t)` for every `t`.
    pub images: Vec<RootVector>,
}

impl<'a> PrefixTracker<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Self {
        PrefixTracker { sys, images: (0..sys.rank()).map(|t| sys.simple_root(t)).collect() }
    }

    /// Whether `p s` is longer than `p`.
    pub fn ascends(&self, s: usize) -> bool {
        self.images[s].is_positive()
    }

    /// `p <- p s`, using `p s (alpha_t) = p(alpha_t) - 2B(alpha_t, alpha_s) p(alpha_s)`.
    pub fn push(&self, s: usize) -> PrefixTracker<'a> {
        let ps = self.images[s].clone();
        let images = (0..self.sys.rank())
            .map(|t| {
                if t == s {
                    -&ps
                } else {
                    let c = self.sys.gram2(t, s);
                    if c.is_zero() {
                        self.images[t].clone()
                    } else {
                        &self.images[t] - &ps.scaled(c)
                    }
                }
            })
            .collect();
        PrefixTracker { sys: self.sys, images }
    }
}

/// Fixed-point reals with `BITS` fractional bits for high-precision checks.
pub const BITS: u32 = 384;

fn fx_one() -> BigInt {
    BigInt::one() << BITS
}

fn fx_mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> BITS
}

fn fx_div_int(a: &BigInt, k: i64) -> BigInt {
    a / BigInt::from(k)
}

/// `atan(1/x)` by its Taylor series.
fn fx_atan_inv(x: i64) -> BigInt {
    let x2 = x * x;
    let mut term = fx_div_int(&fx_one(), x);
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !term.is_zero() {
        let t = fx_div_int(&term, 2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term = fx_div_int(&term, x2);
        k += 1;
    }
    sum
}

/// `pi` by Machin's formula.
pub fn fx_pi() -> BigInt {
    fx_atan_inv(5) * 16 - fx_atan_inv(239) * 4
}

/// `cos(y)` by its Taylor series, for `|y| <= 2`.
pub fn fx_cos(y: &BigInt) -> BigInt {
    let y2 = fx_mul(y, y);
    let mut term = fx_one();
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !term.is_zero() {
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = fx_div_int(&fx_mul(&term, &y2), (2 * k + 1) * (2 * k + 2));
        k += 1;
    }
    sum
}

/// `2 cos(pi / l)` in fixed point.
pub fn fx_two_cos_pi_over(l: u64) -> BigInt {
    fx_cos(&fx_div_int(&fx_pi(), l as i64)) * 2
}

/// Sign of `sum c_i theta^i` evaluated in fixed point; `None` when the value
/// is too close to zero to decide at this precision.
pub fn fx_sign(coeffs: &[BigInt], theta: &BigInt) -> Option<i8> {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = fx_mul(&acc, theta) + (c << BITS);
    }
    let margin = BigInt::one() << (BITS / 2);
    if acc.abs() < margin {
        None
    } else if acc.is_positive() {
        Some(1)
    } else {
        Some(-1)
    }
}

/// Numerators of an element over a common denominator; the denominator is positive.
pub fn integer_coeffs(x: &FieldElement) -> Vec<BigInt> {
    let rs = x.coeffs();
    let den = rs.iter().fold(BigInt::one(), |acc, r| num_integer::lcm(acc, r.denom().clone()));
    rs.iter().map(|r| r.numer() * (&den / r.denom())).collect()
}

/// Every word of length `<= depth`, checked by incremental root tracking
/// against the automaton state carried alongside.
pub fn compare_all_words(sys: &CoxeterSystem, depth: usize) -> usize {
    let table = sys.minimal_roots().unwrap();
    let mut violations = 0;
    fn walk(
        sys: &CoxeterSystem,
        table: &MinimalRootTable,
        tracker: &PrefixTracker,
        state: Option<Vec<u32>>,
        reduced: bool,
        word: &mut Vec<usize>,
        depth: usize,
        violations: &mut usize,
    ) {
        if word.len() == depth {
            return;
        }
        for s in 0..sys.rank() {
            let now_reduced = reduced && tracker.ascends(s);
            let next_state = state.as_ref().and_then(|st| table.step(st, s));
            word.push(s);
            if now_reduced != next_state.is_some() || now_reduced != sys.is_reduced(&Word(word.clone())) {
                *violations += 1;
            }
            walk(sys, table, &tracker.push(s), next_state, now_reduced, word, depth, violations);
            word.pop();
        }
    }
    walk(sys, &table, &PrefixTracker::new(sys), Some(Vec::new()), true, &mut Vec::new(), depth, &mut violations);
    violations
}

/// For a finite tree with classes `x`, `y` and Coxeter element `c = x y`:
/// `<y, x>^h` is a reduced word for `w0`; `c^(h/2)` (rounded down) is reduced
/// and the next power is not. Returns the number of failed checks.
pub fn bourbaki_violations(m: &CoxeterMatrix) -> usize {
    let h = match classify_component(m, m.all()) {
        Classification::Finite(t) => t.coxeter_number as usize,
        Classification::Infinite => panic!("finite trees only"),
    };
    let sys = system(m.clone());
    let (x, y) = m.bipartition(m.all()).unwrap();
    let (x, y) = (product(x.iter()), product(y.iter()));
    let alt = alternating_word(&y, &x, h);
    let c = x.concat(&y);
    [
        sys.is_reduced(&alt),
        sys.right_descents(&alt) == m.all(),
        sys.normal_form(&alt) == sys.longest_element(m.all()).unwrap(),
        sys.is_reduced(&power(&c, h / 2)),
        !sys.is_reduced(&power(&c, h / 2 + 1)),
        sys.order_exactly(&sys.normal_form(&c), h as u64),
    ]
    .iter()
    .filter(|ok| !**ok)
    .count()
}

/// Random elements of bounded height, including near-cancelling ones
/// (`p(theta) - round(p(theta))`) and products.
pub fn random_elements(field: &Arc<CycloRealField>, count: usize, seed: u64) -> Vec<FieldElement> {
    let mut rng = StdRng::seed_from_u64(seed);
    let d = field.degree();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coeffs: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(-12i64..=12))).collect();
        let x = field.from_poly(coeffs);
        match out.len() % 3 {
            0 => out.push(x),
            1 => {
                let near = x.to_f64().round() as i64;
                out.push(&x - &field.from_int(near));
            }
            _ => {
                let y = field.from_poly((0..d).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect());
                out.push(&x * &y);
            }
        }
    }
    out
}
