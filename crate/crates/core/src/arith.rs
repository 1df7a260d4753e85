//! Exact arithmetic in the real cyclotomic field `Q(theta)`, `theta = 2cos(pi/L)`.
//!
//! Elements are stored as integer polynomials in `theta` over a positive
//! common denominator, reduced modulo the minimal polynomial of `theta`, so
//! equality and the zero test are syntactic. Signs are decided by interval
//! evaluation on a dyadic bracket around `theta`, refined by bisection until
//! the image interval excludes zero.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::coxeter::Label;

/// Rationals in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Default bound on `L`.
pub const DEFAULT_MAX_L: u64 = 10_000;

/// Precision (in bits) of the cached bracket around `theta`.
const BRACKET_BITS: u32 = 64;

/// Refinement never needs this many bits for a nonzero element; reaching it
/// means the minimal polynomial is wrong.
const MAX_REFINE_BITS: u32 = 1 << 16;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("field too large: L = {l} exceeds the bound {max}")]
    FieldTooLarge { l: u128, max: u64 },
    #[error("use gram_entry for the label inf")]
    UseGramEntry,
    #[error("label {m} outside field (does not divide L = {l})")]
    LabelOutsideField { m: u32, l: u64 },
}

/// Integer polynomial helpers, coefficients low to high.
pub(crate) mod poly {
    use num_bigint::{BigInt, Sign};
    use num_traits::{One, Zero};

    pub fn trim(p: &mut Vec<BigInt>) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    pub fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            out[i] += x;
        }
        trim(&mut out);
        out
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        trim(&mut out);
        out
    }

    /// Reduces `p` modulo the monic `m` in place and returns the quotient.
    pub fn reduce_monic(p: &mut Vec<BigInt>, m: &[BigInt]) -> Vec<BigInt> {
        let d = m.len() - 1;
        debug_assert!(m[d].is_one());
        trim(p);
        if p.len() <= d {
            return Vec::new();
        }
        let mut quot = vec![BigInt::zero(); p.len() - d];
        for k in (d..p.len()).rev() {
            let c = std::mem::take(&mut p[k]);
            if c.is_zero() {
                continue;
            }
            for (i, mi) in m.iter().enumerate().take(d) {
                if !mi.is_zero() {
                    p[k - d + i] -= &c * mi;
                }
            }
            quot[k - d] = c;
        }
        p.truncate(d);
        trim(p);
        trim(&mut quot);
        quot
    }

    /// Sign of `p(num / den)` for `den > 0`, computed exactly.
    pub fn sign_at(p: &[BigInt], num: &BigInt, den: &BigInt) -> i8 {
        if p.is_empty() {
            return 0;
        }
        let d = p.len() - 1;
        // den^d p(num/den) = sum c_i num^i den^(d-i)
        let mut den_pows = Vec::with_capacity(d + 1);
        let mut acc = BigInt::one();
        for _ in 0..=d {
            den_pows.push(acc.clone());
            acc *= den;
        }
        let mut total = BigInt::zero();
        let mut num_pow = BigInt::one();
        for (i, c) in p.iter().enumerate() {
            if !c.is_zero() {
                total += c * &num_pow * &den_pows[d - i];
            }
            num_pow *= num;
        }
        sign_of(&total)
    }

    pub fn sign_of(x: &BigInt) -> i8 {
        match x.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }
}

/// Cyclotomic polynomial `Phi_n` by `Phi_n = (z^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut table: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    for &d in &divisors {
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = -BigInt::one();
        p[d as usize] = BigInt::one();
        for (&e, phi) in &table {
            if d % e == 0 {
                let q = poly::reduce_monic(&mut p, phi);
                assert!(p.is_empty(), "inexact cyclotomic division");
                p = q;
            }
        }
        table.insert(d, p);
    }
    table.remove(&n).unwrap()
}

/// The polynomials `D_k` with `D_k(z + 1/z) = z^k + z^(-k)`, i.e. `D_k(2cos a) = 2cos(k a)`.
pub fn dickson(k: u64) -> Vec<BigInt> {
    let x = vec![BigInt::zero(), BigInt::one()];
    let mut prev = vec![BigInt::from(2)];
    if k == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..k {
        let mut next = poly::mul(&x, &cur);
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        poly::trim(&mut next);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Rewrites a palindromic polynomial of degree `2d` in `z` as a polynomial of
/// degree `d` in `x = z + 1/z` (after dividing by `z^d`).
pub fn fold_palindromic(p: &[BigInt]) -> Vec<BigInt> {
    let deg = p.len() - 1;
    assert!(deg % 2 == 0, "palindromic fold needs even degree");
    let d = deg / 2;
    for i in 0..=deg {
        assert_eq!(p[i], p[deg - i], "polynomial is not palindromic");
    }
    let mut out = vec![p[d].clone()];
    for j in 1..=d {
        let term: Vec<BigInt> = dickson(j as u64).into_iter().map(|c| c * &p[d + j]).collect();
        out = poly::add(&out, &term);
    }
    out
}

/// Minimal polynomial of `2cos(pi/L)`, monic with integer coefficients.
pub fn minpoly_two_cos_pi_over(l: u64) -> Vec<BigInt> {
    if l == 1 {
        // 2cos(pi) = -2
        return vec![BigInt::from(2), BigInt::one()];
    }
    fold_palindromic(&cyclotomic(2 * l))
}

/// Sturm chain of a squarefree-or-not integer polynomial; the chain counts
/// distinct real roots.
struct SturmChain {
    chain: Vec<Vec<BigInt>>,
}

impl SturmChain {
    fn new(f: &[BigInt]) -> Self {
        let deriv: Vec<BigInt> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        let mut chain = vec![f.to_vec(), deriv];
        loop {
            let n = chain.len();
            let r = rational_rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|p| poly::sign_at(p, x.numer(), x.denom()))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Remainder of `a` by `b` over the rationals, rescaled by a positive constant
/// to a primitive integer polynomial.
fn rational_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<Rational> = a.iter().cloned().map(Rational::from_integer).collect();
    let lead = Rational::from_integer(b.last().unwrap().clone());
    let db = b.len() - 1;
    while r.len() > db {
        let top = r.last().unwrap().clone();
        if !top.is_zero() {
            let q = &top / &lead;
            let shift = r.len() - 1 - db;
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &q * Rational::from_integer(c.clone());
            }
        }
        r.pop();
    }
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    if r.is_empty() {
        return Vec::new();
    }
    let lcm = r
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = r.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in &mut ints {
        *c /= &g;
    }
    ints
}

/// Dyadic bracket `(lo / 2^bits, hi / 2^bits)` around `theta`, with the scaled
/// powers used for interval evaluation.
#[derive(Debug, Clone)]
struct Bracket {
    bits: u32,
    lo: BigInt,
    hi: BigInt,
    lo_pows: Vec<BigInt>,
    hi_pows: Vec<BigInt>,
}

impl Bracket {
    fn new(bits: u32, lo: BigInt, hi: BigInt, degree: usize) -> Self {
        let top = degree.saturating_sub(1);
        let pows = |x: &BigInt| {
            let mut out = Vec::with_capacity(degree);
            let mut acc = BigInt::one();
            for i in 0..degree {
                out.push(&acc << (bits as usize * (top - i)));
                acc *= x;
            }
            out
        };
        let lo_pows = pows(&lo);
        let hi_pows = pows(&hi);
        Bracket { bits, lo, hi, lo_pows, hi_pows }
    }

    /// Sign of `p(theta)` if the interval image excludes zero.
    fn try_sign(&self, p: &[BigInt]) -> Option<i8> {
        let mut lower = BigInt::zero();
        let mut upper = BigInt::zero();
        for (i, c) in p.iter().enumerate() {
            if c.is_positive() {
                lower += c * &self.lo_pows[i];
                upper += c * &self.hi_pows[i];
            } else if c.is_negative() {
                lower += c * &self.hi_pows[i];
                upper += c * &self.lo_pows[i];
            }
        }
        if lower.is_positive() {
            Some(1)
        } else if upper.is_negative() {
            Some(-1)
        } else if lower.is_zero() && upper.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Halves the bracket `steps` times using the sign of `minpoly`.
    fn refine(&self, minpoly: &[BigInt], steps: u32, degree: usize) -> Bracket {
        let mut bits = self.bits;
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        if lo == hi {
            return Bracket::new(bits, lo, hi, degree);
        }
        let mut sign_lo = poly::sign_at(minpoly, &lo, &(BigInt::one() << bits as usize));
        for _ in 0..steps {
            bits += 1;
            lo <<= 1;
            hi <<= 1;
            let mid: BigInt = (&lo + &hi) >> 1;
            let s = poly::sign_at(minpoly, &mid, &(BigInt::one() << bits as usize));
            if s == 0 {
                lo = mid.clone();
                hi = mid;
                break;
            } else if s == sign_lo {
                lo = mid;
                sign_lo = s;
            } else {
                hi = mid;
            }
        }
        Bracket::new(bits, lo, hi, degree)
    }
}

/// The field `Q(theta)`, `theta = 2cos(pi/L)`.
#[derive(Debug)]
pub struct CycloRealField {
    l: u64,
    minpoly: Vec<BigInt>,
    interval: (Rational, Rational),
    bracket: Bracket,
    theta_approx: f64,
}

impl PartialEq for CycloRealField {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l
    }
}
impl Eq for CycloRealField {}

/// Builds the field for a set of labels: `L` is the lcm of the finite labels.
pub fn field_for_labels<I>(labels: I, max_l: u64) -> Result<Arc<CycloRealField>, ArithError>
where
    I: IntoIterator<Item = Label>,
{
    let mut l: u128 = 1;
    for label in labels {
        if let Label::Finite(m) = label {
            if m >= 2 {
                l = l.lcm(&(m as u128));
                if l > max_l as u128 {
                    return Err(ArithError::FieldTooLarge { l, max: max_l });
                }
            }
        }
    }
    Ok(Arc::new(CycloRealField::new(l as u64)))
}

impl CycloRealField {
    pub fn new(l: u64) -> Self {
        assert!(l >= 1);
        let minpoly = minpoly_two_cos_pi_over(l);
        let degree = minpoly.len() - 1;
        let theta_approx = 2.0 * (std::f64::consts::PI / l as f64).cos();
        if degree == 1 {
            // theta = -c0 exactly
            let theta = -minpoly[0].clone();
            let r = Rational::from_integer(theta.clone());
            let bracket = Bracket::new(0, theta.clone(), theta, degree);
            return CycloRealField {
                l,
                minpoly,
                interval: (r.clone(), r),
                bracket,
                theta_approx,
            };
        }
        // Isolate the largest real root with a Sturm sequence. Every root lies in [-2, 2].
        let sturm = SturmChain::new(&minpoly);
        let mut lo = Rational::from_integer(BigInt::from(-3));
        let mut hi = Rational::from_integer(BigInt::from(2));
        assert!(sturm.count(&lo, &hi) >= 1, "minimal polynomial has no real root");
        while sturm.count(&lo, &hi) > 1 {
            let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            if sturm.count(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Shrink until the bracket excludes zero so interval evaluation is monotone.
        while !lo.is_positive() {
            let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            if sturm.count(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let interval = (lo.clone(), hi.clone());
        // lo and hi are dyadic by construction.
        let bits = lo.denom().bits().max(hi.denom().bits()).saturating_sub(1) as u32;
        let scale = BigInt::one() << bits as usize;
        let lo_i = lo.numer() * (&scale / lo.denom());
        let hi_i = hi.numer() * (&scale / hi.denom());
        let coarse = Bracket::new(bits, lo_i, hi_i, degree);
        let bracket = coarse.refine(&minpoly, BRACKET_BITS.saturating_sub(bits), degree);
        CycloRealField {
            l,
            minpoly,
            interval,
            bracket,
            theta_approx,
        }
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Monic minimal polynomial, coefficients low to high.
    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// Rational interval isolating `theta` among the real roots of the minimal polynomial.
    pub fn isolating_interval(&self) -> &(Rational, Rational) {
        &self.interval
    }

    /// Current dyadic bracket as a pair of rationals.
    pub fn bracket(&self) -> (Rational, Rational) {
        let den = BigInt::one() << self.bracket.bits as usize;
        (
            Rational::new(self.bracket.lo.clone(), den.clone()),
            Rational::new(self.bracket.hi.clone(), den),
        )
    }

    pub fn theta_approx(&self) -> f64 {
        self.theta_approx
    }

    fn sign_of_poly(&self, p: &[BigInt]) -> i8 {
        if p.is_empty() {
            return 0;
        }
        if let Some(s) = self.bracket.try_sign(p) {
            return s;
        }
        let degree = self.degree();
        let mut bracket = self.bracket.refine(&self.minpoly, BRACKET_BITS, degree);
        loop {
            if let Some(s) = bracket.try_sign(p) {
                return s;
            }
            assert!(
                bracket.bits < MAX_REFINE_BITS,
                "sign refinement did not terminate; minimal polynomial is inconsistent"
            );
            bracket = bracket.refine(&self.minpoly, bracket.bits, degree);
        }
    }
}

/// `elem(field, ...)` constructors and constants.
pub trait FieldOps {
    fn zero(&self) -> FieldElement;
    fn one(&self) -> FieldElement;
    fn from_int(&self, n: i64) -> FieldElement;
    fn from_rational(&self, r: &Rational) -> FieldElement;
    fn theta(&self) -> FieldElement;
    fn from_poly(&self, p: Vec<BigInt>) -> FieldElement;
    fn cos_pi_over(&self, m: Label) -> Result<FieldElement, ArithError>;
    fn gram_entry(&self, m: Label) -> Result<FieldElement, ArithError>;
    fn twice_gram_entry(&self, m: Label) -> Result<FieldElement, ArithError>;
}

impl FieldOps for Arc<CycloRealField> {
    fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> FieldElement {
        FieldElement::new(self.clone(), vec![BigInt::from(n)], BigInt::one())
    }

    fn from_rational(&self, r: &Rational) -> FieldElement {
        FieldElement::new(self.clone(), vec![r.numer().clone()], r.denom().clone())
    }

    fn theta(&self) -> FieldElement {
        self.from_poly(vec![BigInt::zero(), BigInt::one()])
    }

    fn from_poly(&self, p: Vec<BigInt>) -> FieldElement {
        FieldElement::new(self.clone(), p, BigInt::one())
    }

    /// `cos(pi/m)` as `D_{L/m}(theta) / 2`.
    fn cos_pi_over(&self, m: Label) -> Result<FieldElement, ArithError> {
        let m = match m {
            Label::Infinite => return Err(ArithError::UseGramEntry),
            Label::Finite(m) => m,
        };
        if m == 0 || self.l % m as u64 != 0 {
            return Err(ArithError::LabelOutsideField { m, l: self.l });
        }
        let d = dickson(self.l / m as u64);
        Ok(FieldElement::new(self.clone(), d, BigInt::from(2)))
    }

    /// `B(alpha_s, alpha_t)`: `-cos(pi/m)`, or `-1` for `m = inf`.
    fn gram_entry(&self, m: Label) -> Result<FieldElement, ArithError> {
        match m {
            Label::Infinite => Ok(self.from_int(-1)),
            Label::Finite(1) => Ok(self.one()),
            m => Ok(-&self.cos_pi_over(m)?),
        }
    }

    /// `2 B(alpha_s, alpha_t)`; always an integer polynomial in `theta`.
    fn twice_gram_entry(&self, m: Label) -> Result<FieldElement, ArithError> {
        let g = self.gram_entry(m)?;
        Ok(&g + &g)
    }
}

/// An element of `Q(theta)` as `num(theta) / den`, reduced modulo the minimal polynomial.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<CycloRealField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    fn new(field: Arc<CycloRealField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero());
        poly::reduce_monic(&mut num, &field.minpoly);
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        if num.is_empty() {
            den = BigInt::one();
        } else if !den.is_one() {
            let g = num.iter().fold(den.clone(), |acc, c| acc.gcd(c));
            if !g.is_one() {
                for c in &mut num {
                    *c /= &g;
                }
                den /= &g;
            }
        }
        FieldElement { field, num, den }
    }

    pub fn field(&self) -> &Arc<CycloRealField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Coefficients of the reduced residue in the basis `1, theta, theta^2, ...`.
    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.field.degree())
            .map(|i| {
                let c = self.num.get(i).cloned().unwrap_or_default();
                Rational::new(c, self.den.clone())
            })
            .collect()
    }

    /// Exact sign of the real number this element denotes.
    pub fn sign(&self) -> i8 {
        if self.num.is_empty() {
            return 0;
        }
        if self.field.degree() == 1 {
            return poly::sign_of(&self.num[0]);
        }
        self.field.sign_of_poly(&self.num)
    }

    pub fn to_f64(&self) -> f64 {
        let theta = self.field.theta_approx;
        let mut acc = 0.0;
        for c in self.num.iter().rev() {
            acc = acc * theta + c.to_f64().unwrap_or(f64::NAN);
        }
        acc / self.den.to_f64().unwrap_or(f64::NAN)
    }

    fn same_field(&self, other: &Self) {
        debug_assert_eq!(self.field.l, other.field.l, "mixed fields");
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.l == other.field.l && self.den == other.den && self.num == other.num
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_empty() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*θ"),
                _ => format!("{c}*θ^{i}"),
            });
        }
        if self.den.is_one() {
            write!(f, "{}", terms.join(" + "))
        } else {
            write!(f, "({})/{}", terms.join(" + "), self.den)
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.same_field(rhs);
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let num = poly::add(&self.num, &rhs.num);
            FieldElement::new(self.field.clone(), num, self.den.clone())
        } else {
            let a: Vec<BigInt> = self.num.iter().map(|c| c * &rhs.den).collect();
            let b: Vec<BigInt> = rhs.num.iter().map(|c| c * &self.den).collect();
            FieldElement::new(self.field.clone(), poly::add(&a, &b), &self.den * &rhs.den)
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.same_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        let num = poly::mul(&self.num, &rhs.num);
        FieldElement::new(self.field.clone(), num, &self.den * &rhs.den)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(mut self) -> FieldElement {
        for c in &mut self.num {
            *c = -&*c;
        }
        self
    }
}

/// A vector in the root space, in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootVector {
    pub coords: Vec<FieldElement>,
}

impl RootVector {
    pub fn zero(field: &Arc<CycloRealField>, rank: usize) -> Self {
        RootVector {
            coords: vec![field.zero(); rank],
        }
    }

    pub fn simple(field: &Arc<CycloRealField>, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(field, rank);
        v.coords[i] = field.one();
        v
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// All coordinates have sign >= 0 and at least one is > 0.
    pub fn is_positive(&self) -> bool {
        let mut any = false;
        for c in &self.coords {
            match c.sign() {
                -1 => return false,
                1 => any = true,
                _ => {}
            }
        }
        any
    }

    pub fn is_negative(&self) -> bool {
        (-self).is_positive()
    }

    pub fn scaled(&self, k: &FieldElement) -> RootVector {
        RootVector {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }
}

impl fmt::Debug for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

impl<'a> Add<&'a RootVector> for &'a RootVector {
    type Output = RootVector;
    fn add(self, rhs: &'a RootVector) -> RootVector {
        RootVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a RootVector> for &'a RootVector {
    type Output = RootVector;
    fn sub(self, rhs: &'a RootVector) -> RootVector {
        RootVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn field_for_two_and_three_is_sqrt3() {
        let f = field_for_labels([Label::Finite(2), Label::Finite(3)], DEFAULT_MAX_L).unwrap();
        assert_eq!(f.l(), 6);
        assert_eq!(f.minpoly(), &ints(&[-3, 0, 1])[..]);
        let t = f.theta();
        assert_eq!(&t * &t, f.from_int(3));
        assert_eq!(t.sign(), 1);
    }

    #[test]
    fn small_fields_are_rational() {
        for (l, theta) in [(1u64, -2i64), (2, 0), (3, 1)] {
            let f = CycloRealField::new(l);
            assert_eq!(f.degree(), 1);
            assert_eq!(f.isolating_interval().0, Rational::from_integer(BigInt::from(theta)));
        }
    }

    #[test]
    fn empty_labels_give_rationals() {
        let f = field_for_labels([], DEFAULT_MAX_L).unwrap();
        assert_eq!(f.l(), 1);
        assert_eq!(f.degree(), 1);
        let f = field_for_labels([Label::Infinite], DEFAULT_MAX_L).unwrap();
        assert_eq!(f.l(), 1);
    }

    #[test]
    fn degree_for_ten_and_twenty_four() {
        let f = field_for_labels([Label::Finite(10), Label::Finite(24)], DEFAULT_MAX_L).unwrap();
        assert_eq!(f.l(), 120);
        // phi(240) / 2
        assert_eq!(f.degree(), 32);
        // cross-check against the unfolded cyclotomic polynomial
        assert_eq!(cyclotomic(240).len() - 1, 64);
    }

    #[test]
    fn field_too_large() {
        let err = field_for_labels([Label::Finite(101), Label::Finite(103)], DEFAULT_MAX_L);
        assert!(matches!(err, Err(ArithError::FieldTooLarge { .. })));
    }

    #[test]
    fn cos_values() {
        let f = Arc::new(CycloRealField::new(6));
        assert!(f.cos_pi_over(Label::Finite(2)).unwrap().is_zero());
        assert_eq!(
            f.cos_pi_over(Label::Finite(3)).unwrap(),
            f.from_rational(&Rational::new(1.into(), 2.into()))
        );
        let half_theta = FieldElement::new(f.clone(), ints(&[0, 1]), BigInt::from(2));
        assert_eq!(f.cos_pi_over(Label::Finite(6)).unwrap(), half_theta);
        assert_eq!(f.cos_pi_over(Label::Infinite), Err(ArithError::UseGramEntry));
        assert!(matches!(
            f.cos_pi_over(Label::Finite(4)),
            Err(ArithError::LabelOutsideField { m: 4, l: 6 })
        ));
        assert_eq!(f.gram_entry(Label::Infinite).unwrap(), f.from_int(-1));
    }

    #[test]
    fn golden_ratio_exceeds_one() {
        let f = Arc::new(CycloRealField::new(5));
        let x = &f.theta() - &f.one();
        assert_eq!(x.sign(), 1);
        let f = Arc::new(CycloRealField::new(30));
        let d = &f.cos_pi_over(Label::Finite(6)).unwrap() - &f.cos_pi_over(Label::Finite(5)).unwrap();
        assert_eq!(d.sign(), 1);
        let exact = (std::f64::consts::PI / 6.0).cos() - (std::f64::consts::PI / 5.0).cos();
        assert!((d.to_f64() - exact).abs() < 1e-12);
    }

    #[test]
    fn interval_isolates_largest_root() {
        for l in [4u64, 5, 6, 10, 12, 24, 30, 120] {
            let f = CycloRealField::new(l);
            assert!(f.degree() >= 2);
            let (lo, hi) = f.isolating_interval();
            let sl = poly::sign_at(f.minpoly(), lo.numer(), lo.denom());
            let sh = poly::sign_at(f.minpoly(), hi.numer(), hi.denom());
            assert!(sl * sh < 0, "no sign change for L = {l}");
            let sturm = SturmChain::new(f.minpoly());
            assert_eq!(sturm.count(lo, hi), 1);
            let top = Rational::from_integer(BigInt::from(2));
            assert_eq!(sturm.count(lo, &top), 1, "a larger root exists for L = {l}");
            let theta = 2.0 * (std::f64::consts::PI / l as f64).cos();
            let (blo, bhi) = f.bracket();
            assert!(blo.to_f64().unwrap() <= theta + 1e-15 && theta - 1e-15 <= bhi.to_f64().unwrap());
        }
    }

    #[test]
    fn zero_is_syntactic() {
        let f = Arc::new(CycloRealField::new(12));
        let t = f.theta();
        let t2 = &t * &t;
        let t4 = &t2 * &t2;
        // theta^4 = 4 theta^2 - 1 for L = 12
        let rhs = &(&f.from_int(4) * &t2) - &f.one();
        assert!((&t4 - &rhs).is_zero());
        assert_eq!((&t4 - &rhs).sign(), 0);
    }
}
