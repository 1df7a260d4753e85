mod common;

use common::*;
use coxfold::arith::{field_for_labels, minpoly_two_cos_pi_over, CycloRealField, FieldOps};
use coxfold::coxeter::Label;
use num_bigint::BigInt;
use std::sync::Arc;

#[test]
fn sign_matches_high_precision_evaluation() {
    for l in [6u64, 10, 12, 24, 120] {
        let field = Arc::new(CycloRealField::new(l));
        let theta = fx_two_cos_pi_over(l);
        let mut disagreements = 0;
        let mut undecided = 0;
        for x in random_elements(&field, 1000, l) {
            match fx_sign(&integer_coeffs(&x), &theta) {
                Some(s) => disagreements += usize::from(s != x.sign()),
                None => undecided += usize::from(!x.is_zero()),
            }
        }
        assert_eq!(disagreements, 0, "L = {l}");
        assert_eq!(undecided, 0, "L = {l}");
    }
}

#[test]
fn sign_matches_double_precision_away_from_zero() {
    let field = Arc::new(CycloRealField::new(24));
    let theta = (std::f64::consts::PI / 24.0).cos() * 2.0;
    for x in random_elements(&field, 500, 7) {
        let v: f64 = integer_coeffs(&x).iter().rev().fold(0.0, |acc, c| acc * theta + c.to_string().parse::<f64>().unwrap());
        if v.abs() > 1e-6 {
            assert_eq!(x.sign(), if v > 0.0 { 1 } else { -1 }, "{x}");
        }
    }
}

#[test]
fn minimal_polynomial_vanishes_at_theta() {
    for l in [4u64, 5, 6, 7, 9, 10, 12, 24, 30, 120] {
        let p = minpoly_two_cos_pi_over(l);
        let theta = fx_two_cos_pi_over(l);
        // p(theta) is zero to high precision, and p is monic of degree phi(2l)/2
        assert_eq!(fx_sign(&p, &theta), None, "L = {l}");
        assert_eq!(p.last(), Some(&BigInt::from(1)));
        let phi = (1..=2 * l).filter(|k| num_integer::gcd(*k, 2 * l) == 1).count();
        assert_eq!(p.len() - 1, phi / 2, "L = {l}");
    }
}

#[test]
fn field_for_heavy_labels() {
    let f = field_for_labels([Label::Finite(10), Label::Finite(24)], 10_000).unwrap();
    assert_eq!(f.l(), 120);
    assert_eq!(f.degree(), 32);
    // cos(pi/m) in the big field agrees with the high-precision value
    for m in [2u32, 3, 4, 5, 6, 8, 10, 12, 24] {
        let c = f.cos_pi_over(Label::Finite(m)).unwrap();
        let diff = &c + &c;
        let theta = fx_two_cos_pi_over(120);
        let exact = fx_two_cos_pi_over(m as u64);
        // evaluate 2cos(pi/m) - value in fixed point
        let coeffs = integer_coeffs(&diff);
        let den: BigInt = {
            let rs = diff.coeffs();
            rs.iter().fold(BigInt::from(1), |acc, r| num_integer::lcm(acc, r.denom().clone()))
        };
        let mut acc = BigInt::from(0);
        for co in coeffs.iter().rev() {
            acc = ((acc * &theta) >> BITS) + (co << BITS);
        }
        let err = acc - exact * den;
        assert!(err.magnitude().bits() < (BITS / 2) as u64, "m = {m}");
    }
}
