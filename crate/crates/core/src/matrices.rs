//! `PSL(2, Z)` arithmetic and evaluation of words under `a -> A`, `b -> B`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::words::{half_word, reciprocal_word, reduce, EpsilonSeq, GroupWord, Syllable};

/// An integer matrix `(p q; r s)` of determinant one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2Z {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    s: BigInt,
}

impl Mat2Z {
    /// Returns `None` unless `ps - qr = 1`.
    pub fn new(p: BigInt, q: BigInt, r: BigInt, s: BigInt) -> Option<Self> {
        let m = Mat2Z { p, q, r, s };
        (m.det() == BigInt::one()).then_some(m)
    }

    fn from_i64(p: i64, q: i64, r: i64, s: i64) -> Self {
        Mat2Z::new(p.into(), q.into(), r.into(), s.into()).expect("determinant one")
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.p, &self.q, &self.r, &self.s]
    }

    pub fn det(&self) -> BigInt {
        &self.p * &self.s - &self.q * &self.r
    }

    pub fn trace(&self) -> BigInt {
        &self.p + &self.s
    }

    /// Adjugate; exact because the determinant is one.
    pub fn inverse(&self) -> Self {
        Mat2Z { p: self.s.clone(), q: -&self.q, r: -&self.r, s: self.p.clone() }
    }

    fn negate(&self) -> Self {
        Mat2Z { p: -&self.p, q: -&self.q, r: -&self.r, s: -&self.s }
    }
}

impl<'a> Mul<&'a Mat2Z> for &'a Mat2Z {
    type Output = Mat2Z;

    fn mul(self, o: &'a Mat2Z) -> Mat2Z {
        Mat2Z {
            p: &self.p * &o.p + &self.q * &o.r,
            q: &self.p * &o.q + &self.q * &o.s,
            r: &self.r * &o.p + &self.s * &o.r,
            s: &self.r * &o.q + &self.s * &o.s,
        }
    }
}

/// The generator matrices `A = (0 -1; 1 0)` and `B = (1 -1; 1 0)`.
pub fn generator(s: Syllable) -> Mat2Z {
    match s {
        Syllable::A => Mat2Z::from_i64(0, -1, 1, 0),
        Syllable::B => Mat2Z::from_i64(1, -1, 1, 0),
        Syllable::BInv => Mat2Z::from_i64(0, 1, -1, 1),
    }
}

/// An element of `PSL(2, Z)`, stored with the first nonzero of `(p, q, r, s)`
/// positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Psl2Element {
    rep: Mat2Z,
}

impl Psl2Element {
    pub fn from_matrix(m: Mat2Z) -> Self {
        let first = m.entries().into_iter().find(|e| !e.is_zero()).expect("det one implies a nonzero entry");
        let rep = if first.is_negative() { m.negate() } else { m };
        Psl2Element { rep }
    }

    pub fn identity() -> Self {
        Psl2Element { rep: Mat2Z::identity() }
    }

    pub fn matrix(&self) -> &Mat2Z {
        &self.rep
    }

    pub fn is_identity(&self) -> bool {
        self.rep == Mat2Z::identity()
    }

    /// Trace up to sign.
    pub fn abs_trace(&self) -> BigInt {
        self.rep.trace().abs()
    }

    pub fn inverse(&self) -> Self {
        Self::from_matrix(self.rep.inverse())
    }
}

impl<'a> Mul<&'a Psl2Element> for &'a Psl2Element {
    type Output = Psl2Element;

    fn mul(self, o: &'a Psl2Element) -> Psl2Element {
        Psl2Element::from_matrix(&self.rep * &o.rep)
    }
}

impl fmt::Display for Psl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.rep;
        write!(f, "±({} {}; {} {})", m.p, m.q, m.r, m.s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Product of the generator matrices, reduced mod `±I`.
pub fn evaluate(w: &GroupWord) -> Psl2Element {
    let w = reduce(w);
    let m = w.syllables().iter().fold(Mat2Z::identity(), |acc, &s| &acc * &generator(s));
    Psl2Element::from_matrix(m)
}

pub fn classify(m: &Psl2Element) -> Kind {
    if m.is_identity() {
        return Kind::Identity;
    }
    let tr = m.abs_trace();
    let two = BigInt::from(2);
    if tr < two {
        Kind::Elliptic
    } else if tr == two {
        Kind::Parabolic
    } else {
        Kind::Hyperbolic
    }
}

/// Checks the factorization `w = P A` of the normal form `w` of `eps`, where
/// `P = X A X^-1` is the involution obtained by conjugating `A` by the half
/// word `X = a b^e1 ... a b^et`.
pub fn reciprocity_check(eps: &EpsilonSeq) -> bool {
    let a = Psl2Element::from_matrix(generator(Syllable::A));
    let x = evaluate(&half_word(eps));
    let p = &(&x * &a) * &x.inverse();
    let involution = (&p * &p).is_identity() && !p.is_identity();
    let w = evaluate(reciprocal_word(eps).word());
    involution && w == &p * &a
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    fn arb_word() -> impl Strategy<Value = GroupWord> {
        prop::collection::vec(prop_oneof![Just(Syllable::A), Just(Syllable::B), Just(Syllable::BInv)], 0..30)
            .prop_map(GroupWord::new)
    }

    #[test]
    fn relations() {
        assert!(evaluate(&w("a a")).is_identity());
        assert!(evaluate(&w("b b b")).is_identity());
        // B^3 is -I before projecting
        let b = generator(Syllable::B);
        let b3 = &(&b * &b) * &b;
        assert_eq!(b3, Mat2Z::identity().negate());
        assert_eq!(&b * &generator(Syllable::BInv), Mat2Z::identity());
    }

    #[test]
    fn reduce_is_skipped_by_evaluation() {
        // evaluating an unreduced word gives the same element as its reduction
        assert_eq!(evaluate(&GroupWord::new(vec![Syllable::A, Syllable::A, Syllable::B])), evaluate(&w("b")));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&evaluate(&w("a b"))), Kind::Parabolic);
        assert_eq!(classify(&evaluate(&w("a B"))), Kind::Parabolic);
        assert_eq!(classify(&evaluate(&w("a"))), Kind::Elliptic);
        assert_eq!(classify(&evaluate(&w("b"))), Kind::Elliptic);
        assert_eq!(classify(&Psl2Element::identity()), Kind::Identity);
        let m = evaluate(&w("a b a B"));
        assert_eq!(m.abs_trace(), BigInt::from(3));
        assert_eq!(classify(&m), Kind::Hyperbolic);
    }

    #[test]
    fn hand_computed_products() {
        // A B = (-1 0; 1 -1), A B^-1 = (1 -1; 0 1)
        let ab = &generator(Syllable::A) * &generator(Syllable::B);
        assert_eq!(ab, Mat2Z::from_i64(-1, 0, 1, -1));
        let abi = &generator(Syllable::A) * &generator(Syllable::BInv);
        assert_eq!(abi, Mat2Z::from_i64(1, -1, 0, 1));
        // (A B)(A B^-1) = (-1 1; 1 -2), trace -3
        let prod = &ab * &abi;
        assert_eq!(prod, Mat2Z::from_i64(-1, 1, 1, -2));
        assert_eq!(evaluate(&w("a b a B")), Psl2Element::from_matrix(prod));
    }

    #[test]
    fn reciprocity_small() {
        assert!(reciprocity_check(&EpsilonSeq::from_i8s(&[1]).unwrap()));
        assert!(reciprocity_check(&EpsilonSeq::from_i8s(&[1, -1]).unwrap()));
    }

    #[test]
    fn reciprocity_sweep() {
        for t in 1..=10 {
            for e in EpsilonSeq::all(t) {
                assert!(reciprocity_check(&e), "{e}");
                assert_eq!(classify(&evaluate(reciprocal_word(&e).word())), Kind::Hyperbolic, "{e}");
            }
        }
    }

    #[test]
    fn large_words_do_not_overflow() {
        let e = EpsilonSeq::from_bits(60, 0x5555_5555_5555_5555).unwrap();
        let m = evaluate(reciprocal_word(&e).word());
        assert!(m.abs_trace().bits() > 64);
        assert!(reciprocity_check(&e));
    }

    proptest! {
        #[test]
        fn evaluate_is_homomorphism(u in arb_word(), v in arb_word()) {
            prop_assert_eq!(evaluate(&u.concat(&v)), &evaluate(&u) * &evaluate(&v));
        }

        #[test]
        fn determinant_and_trace(u in arb_word()) {
            let m = evaluate(&u);
            prop_assert_eq!(m.matrix().det(), BigInt::one());
            prop_assert_eq!(m.abs_trace(), m.inverse().abs_trace());
            prop_assert!((&m * &m.inverse()).is_identity());
            prop_assert_eq!(evaluate(&u.inverse()), m.inverse());
        }
    }
}
