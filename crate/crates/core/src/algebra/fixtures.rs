//! Small algebras shared by tests, examples and the corpus.

use super::FiniteAlgebra;
use crate::syntax::Signature;

pub fn group_signature() -> Signature {
    Signature::build(&[("mul", 2), ("inv", 1)], &["e"]).expect("group signature")
}

pub fn meet_signature() -> Signature {
    Signature::build(&[("meet", 2)], &[]).expect("meet signature")
}

pub fn unary_signature() -> Signature {
    Signature::build(&[("f", 1)], &[]).expect("unary signature")
}

pub fn constants_signature() -> Signature {
    Signature::build(&[], &["c0", "c1"]).expect("constants signature")
}

pub fn groupoid_signature() -> Signature {
    Signature::build(&[("op", 2)], &[]).expect("groupoid signature")
}

/// The cyclic group of order `n`, written additively on `0..n`.
pub fn cyclic(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(
        group_signature(),
        n,
        |f, args| match f {
            0 => (args[0] + args[1]) % n,
            _ => (n - args[0]) % n,
        },
        vec![0],
    )
    .expect("cyclic group")
}

pub fn z2() -> FiniteAlgebra {
    cyclic(2)
}

pub fn z3() -> FiniteAlgebra {
    cyclic(3)
}

pub fn z4() -> FiniteAlgebra {
    cyclic(4)
}

/// Klein four-group; element `2a + b` is the pair `(a, b)` of `Z2 × Z2`.
pub fn v4() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(
        group_signature(),
        4,
        |f, args| match f {
            0 => args[0] ^ args[1],
            _ => args[0],
        },
        vec![0],
    )
    .expect("Klein group")
}

/// Two-element meet-semilattice, `meet = min`.
pub fn s2() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(meet_signature(), 2, |_, args| args[0].min(args[1]), vec![]).expect("S2")
}

/// Two elements swapped by a unary operation.
pub fn n2() -> FiniteAlgebra {
    unary2([1, 0])
}

/// Two elements named by two constants, no operations.
pub fn c01() -> FiniteAlgebra {
    FiniteAlgebra::new(constants_signature(), 2, vec![], vec![0, 1]).expect("C01")
}

/// The two-element unary algebra with `f(0) = values[0]`, `f(1) = values[1]`.
pub fn unary2(values: [usize; 2]) -> FiniteAlgebra {
    FiniteAlgebra::new(unary_signature(), 2, vec![values.to_vec()], vec![]).expect("unary algebra")
}

/// All four two-element unary algebras.
pub fn all_unary2() -> Vec<(String, FiniteAlgebra)> {
    [[0, 0], [0, 1], [1, 0], [1, 1]]
        .into_iter()
        .map(|v| (format!("U{}{}", v[0], v[1]), unary2(v)))
        .collect()
}

/// Every named fixture.
pub fn all() -> Vec<(&'static str, FiniteAlgebra)> {
    vec![
        ("E_group", FiniteAlgebra::trivial(&group_signature())),
        ("Z2", z2()),
        ("Z3", z3()),
        ("Z4", z4()),
        ("V4", v4()),
        ("E_meet", FiniteAlgebra::trivial(&meet_signature())),
        ("S2", s2()),
        ("N2", n2()),
        ("E_const", FiniteAlgebra::trivial(&constants_signature())),
        ("C01", c01()),
    ]
}

/// Fixture by name.
pub fn by_name(name: &str) -> Option<FiniteAlgebra> {
    all()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, a)| a)
        .or_else(|| all_unary2().into_iter().find(|(n, _)| n == name).map(|(_, a)| a))
}
