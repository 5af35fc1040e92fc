#![allow(dead_code)]

use proptest::prelude::*;
use quatcert::field::{Field, FieldElem};
use quatcert::gauss::GaussInt;
use quatcert::place::Place;
use quatcert::poly::FqPoly;

pub fn f5() -> Field {
    Field::function_field(5).unwrap()
}

pub fn place(s: &str, field: &Field) -> Place {
    Place::parse(s, field).unwrap()
}

pub fn gauss_int(h: i64) -> impl Strategy<Value = GaussInt> {
    (-h..=h, -h..=h).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0).prop_map(|(a, b)| GaussInt::new(a, b))
}

pub fn poly(max_degree: usize) -> impl Strategy<Value = FqPoly> {
    let fq = f5().fq().unwrap().clone();
    proptest::collection::vec(0u64..5, 1..=max_degree + 1)
        .prop_map(move |c| FqPoly::new(fq.clone(), c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

/// Nonzero Gaussian rationals `x / n`.
pub fn gaussian_elem(h: i64) -> impl Strategy<Value = FieldElem> {
    (gauss_int(h), 1..=h).prop_map(|(x, n)| FieldElem::from_gauss(x).div(&Field::Gaussian.from_int(n)).unwrap())
}

/// Nonzero elements of `F_5(t)` as `p / q`.
pub fn f5_elem(max_degree: usize) -> impl Strategy<Value = FieldElem> {
    (poly(max_degree), poly(max_degree / 2))
        .prop_map(|(p, q)| FieldElem::from_poly(p).div(&FieldElem::from_poly(q)).unwrap())
}

pub fn any_elem(h: i64, max_degree: usize) -> impl Strategy<Value = FieldElem> {
    prop_oneof![gaussian_elem(h), f5_elem(max_degree)]
}

/// A place of the same field as `x`, drawn from a fixed list.
pub fn place_for(x: &FieldElem, i: usize, with_dyadic: bool) -> Place {
    let field = x.field();
    let names: &[&str] = if field.is_gaussian() {
        if with_dyadic {
            &["1+i", "2+i", "1+2i", "3", "3+2i", "7", "1+i", "5+2i"]
        } else {
            &["2+i", "1+2i", "3", "3+2i", "7", "5+2i"]
        }
    } else {
        &["t", "t+1", "t^2+2", "inf", "t^2+t+1"]
    };
    place(names[i % names.len()], &field)
}
