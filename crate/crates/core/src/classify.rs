//! Recognition of finite irreducible Coxeter diagrams.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::coxeter::{CoxeterMatrix, GenSet, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
    D,
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteType {
    pub family: Family,
    pub rank: usize,
    /// The dihedral label for `I2`.
    pub parameter: Option<u32>,
    pub coxeter_number: u64,
    pub positive_roots: u64,
    pub group_order: BigUint,
}

impl FiniteType {
    fn new(family: Family, rank: usize, parameter: Option<u32>) -> Self {
        let n = rank as u64;
        let factorial = |k: u64| (1..=k).fold(BigUint::one(), |acc, i| acc * i);
        let (h, order) = match family {
            Family::A => (n + 1, factorial(n + 1)),
            Family::B => (2 * n, (BigUint::one() << n as usize) * factorial(n)),
            Family::D => (2 * n - 2, (BigUint::one() << (n - 1) as usize) * factorial(n)),
            Family::E6 => (12, BigUint::from(51_840u32)),
            Family::E7 => (18, BigUint::from(2_903_040u32)),
            Family::E8 => (30, BigUint::from(696_729_600u32)),
            Family::F4 => (12, BigUint::from(1_152u32)),
            Family::H3 => (10, BigUint::from(120u32)),
            Family::H4 => (30, BigUint::from(14_400u32)),
            Family::I2 => {
                let m = parameter.expect("I2 needs its label") as u64;
                (m, BigUint::from(2 * m))
            }
        };
        assert!((n * h) % 2 == 0);
        FiniteType {
            family,
            rank,
            parameter,
            coxeter_number: h,
            positive_roots: n * h / 2,
            group_order: order,
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.rank),
            Family::B => write!(f, "B{}", self.rank),
            Family::D => write!(f, "D{}", self.rank),
            Family::I2 => write!(f, "I2({})", self.parameter.unwrap()),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Classification {
    Finite(FiniteType),
    Infinite,
}

impl Classification {
    pub fn is_finite(&self) -> bool {
        matches!(self, Classification::Finite(_))
    }

    pub fn coxeter_number(&self) -> Label {
        match self {
            Classification::Finite(t) => Label::Finite(t.coxeter_number as u32),
            Classification::Infinite => Label::Infinite,
        }
    }
}

/// Classifies a connected component of the Coxeter graph.
pub fn classify_component(matrix: &CoxeterMatrix, component: GenSet) -> Classification {
    use Classification::Infinite;
    let verts: Vec<usize> = component.iter().collect();
    let n = verts.len();
    assert!(n > 0, "empty component");
    debug_assert_eq!(matrix.components_of(component).len(), 1, "component is not connected");
    if n == 1 {
        return Classification::Finite(FiniteType::new(Family::A, 1, None));
    }
    if n == 2 {
        return match matrix.get(verts[0], verts[1]) {
            Label::Finite(3) => Classification::Finite(FiniteType::new(Family::A, 2, None)),
            Label::Finite(4) => Classification::Finite(FiniteType::new(Family::B, 2, None)),
            Label::Finite(m) => Classification::Finite(FiniteType::new(Family::I2, 2, Some(m))),
            Label::Infinite => Infinite,
        };
    }

    // Rank >= 3: must be a tree with labels in {3, 4, 5}.
    let mut edges = Vec::new();
    for (a, &i) in verts.iter().enumerate() {
        for &j in &verts[a + 1..] {
            let m = matrix.get(i, j);
            if m > Label::Finite(2) {
                edges.push((i, j, m));
            }
        }
    }
    if edges.len() != n - 1 {
        return Infinite;
    }
    if edges.iter().any(|e| e.2 > Label::Finite(5)) {
        return Infinite;
    }
    let heavy: Vec<_> = edges.iter().filter(|e| e.2 > Label::Finite(3)).collect();
    let degree = |v: usize| matrix.neighbours(v, component).len();
    let branch: Vec<usize> = verts.iter().copied().filter(|&v| degree(v) >= 3).collect();

    match (branch.len(), heavy.len()) {
        (0, 0) => Classification::Finite(FiniteType::new(Family::A, n, None)),
        (0, 1) => {
            let (i, j, m) = *heavy[0];
            let at_end = degree(i) == 1 || degree(j) == 1;
            match (m, at_end, n) {
                (Label::Finite(4), true, _) => Classification::Finite(FiniteType::new(Family::B, n, None)),
                (Label::Finite(4), false, 4) => Classification::Finite(FiniteType::new(Family::F4, 4, None)),
                (Label::Finite(5), true, 3) => Classification::Finite(FiniteType::new(Family::H3, 3, None)),
                (Label::Finite(5), true, 4) => Classification::Finite(FiniteType::new(Family::H4, 4, None)),
                _ => Infinite,
            }
        }
        (1, 0) => {
            let centre = branch[0];
            if degree(centre) != 3 {
                return Infinite;
            }
            let mut arms: Vec<usize> = matrix
                .neighbours(centre, component)
                .iter()
                .map(|start| arm_length(matrix, component, centre, start))
                .collect();
            arms.sort_unstable();
            match arms[..] {
                [1, 1, k] => Classification::Finite(FiniteType::new(Family::D, k + 3, None)),
                [1, 2, 2] => Classification::Finite(FiniteType::new(Family::E6, 6, None)),
                [1, 2, 3] => Classification::Finite(FiniteType::new(Family::E7, 7, None)),
                [1, 2, 4] => Classification::Finite(FiniteType::new(Family::E8, 8, None)),
                _ => Infinite,
            }
        }
        _ => Infinite,
    }
}

/// Length of the path leaving `centre` through `start`; the tree has a single branch vertex.
fn arm_length(matrix: &CoxeterMatrix, component: GenSet, centre: usize, start: usize) -> usize {
    let mut prev = centre;
    let mut cur = start;
    let mut len = 1;
    loop {
        let next: Vec<usize> = matrix
            .neighbours(cur, component)
            .iter()
            .filter(|&v| v != prev)
            .collect();
        match next[..] {
            [] => return len,
            [v] => {
                prev = cur;
                cur = v;
                len += 1;
            }
            _ => unreachable!("second branch vertex on an arm"),
        }
    }
}

/// Classification of every component of the parabolic on `subset`.
pub fn classify_subset(matrix: &CoxeterMatrix, subset: GenSet) -> Vec<(GenSet, Classification)> {
    matrix
        .components_of(subset)
        .into_iter()
        .map(|c| (c, classify_component(matrix, c)))
        .collect()
}

/// True iff the parabolic subgroup on `subset` is finite. The empty subset is finite.
pub fn is_finite(matrix: &CoxeterMatrix, subset: GenSet) -> bool {
    classify_subset(matrix, subset).iter().all(|(_, c)| c.is_finite())
}

pub fn coxeter_number(matrix: &CoxeterMatrix, component: GenSet) -> Label {
    classify_component(matrix, component).coxeter_number()
}

/// Number of positive roots of a finite parabolic, i.e. the length of its longest element.
pub fn positive_roots(matrix: &CoxeterMatrix, subset: GenSet) -> Option<u64> {
    classify_subset(matrix, subset)
        .into_iter()
        .map(|(_, c)| match c {
            Classification::Finite(t) => Some(t.positive_roots),
            Classification::Infinite => None,
        })
        .sum()
}

/// A short type string such as `A1 x A1`, `I2(6)` or `infinite`.
pub fn describe(matrix: &CoxeterMatrix, subset: GenSet) -> String {
    let parts: Vec<String> = classify_subset(matrix, subset)
        .into_iter()
        .map(|(c, cls)| match cls {
            Classification::Finite(t) => t.to_string(),
            Classification::Infinite if c.len() == 2 => "I2(inf)".to_string(),
            Classification::Infinite => format!("infinite[{}]", matrix.format_set(c)),
        })
        .collect();
    parts.join(" x ")
}
