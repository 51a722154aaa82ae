//! Words in the free product `Z2 * Z3 = <a> * <b>` and the reciprocal normal
//! forms `a b^e1 ... a b^et a b^-et ... a b^-e1` that code reciprocal
//! geodesics of word length `4t`.

use std::fmt;
use std::str::FromStr;

use crate::compositions::Composition;
use crate::error::{Error, Result};

/// A sign `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i8(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::InvalidSign(other)),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self.negate()
    }
}

/// A nonempty tuple of signs `(e_1, ..., e_t)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpsilonSeq(Vec<Sign>);

impl EpsilonSeq {
    pub fn new(entries: Vec<Sign>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyEpsilon);
        }
        Ok(EpsilonSeq(entries))
    }

    pub fn from_i8s(entries: &[i8]) -> Result<Self> {
        let signs = entries.iter().map(|&v| Sign::from_i8(v)).collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }

    /// Decodes the low `len` bits of `bits`; bit `i` set means entry `i` is `-1`.
    pub fn from_bits(len: usize, bits: u64) -> Result<Self> {
        if len > 64 {
            return Err(Error::Range(format!("bit-coded sequences hold at most 64 signs, got {len}")));
        }
        let signs = (0..len)
            .map(|i| if bits >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
            .collect();
        Self::new(signs)
    }

    /// Inverse of [`EpsilonSeq::from_bits`].
    pub fn to_bits(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Minus)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    /// All `2^len` sequences of the given length in bit order.
    pub fn all(len: usize) -> impl Iterator<Item = EpsilonSeq> {
        assert!((1..64).contains(&len), "length must lie in 1..64");
        (0..1u64 << len).map(move |bits| EpsilonSeq::from_bits(len, bits).expect("valid length"))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[Sign] {
        &self.0
    }

    pub fn negate(&self) -> EpsilonSeq {
        EpsilonSeq(self.0.iter().map(|s| s.negate()).collect())
    }
}

impl fmt::Display for EpsilonSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *s == Sign::Plus { "+1" } else { "-1" })?;
        }
        f.write_str(")")
    }
}

/// The class `{e, -e}`, stored through its representative with leading `+1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectiveEpsilonSeq {
    canonical: EpsilonSeq,
}

impl ProjectiveEpsilonSeq {
    pub fn canonical(&self) -> &EpsilonSeq {
        &self.canonical
    }
}

/// Generators of `Z2 * Z3`. The derived order `a < b < b^-1` fixes the
/// canonical rotation of a cyclic word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Syllable {
    A,
    B,
    BInv,
}

impl Syllable {
    fn b_exponent(self) -> Option<i8> {
        match self {
            Syllable::A => None,
            Syllable::B => Some(1),
            Syllable::BInv => Some(-1),
        }
    }

    fn from_b_exponent(e: i8) -> Option<Syllable> {
        match e.rem_euclid(3) {
            0 => None,
            1 => Some(Syllable::B),
            _ => Some(Syllable::BInv),
        }
    }

    pub fn inverse(self) -> Syllable {
        match self {
            Syllable::A => Syllable::A,
            Syllable::B => Syllable::BInv,
            Syllable::BInv => Syllable::B,
        }
    }

    pub fn from_sign(s: Sign) -> Syllable {
        match s {
            Sign::Plus => Syllable::B,
            Sign::Minus => Syllable::BInv,
        }
    }
}

/// Product of two syllables from the same factor; `None` is the identity.
/// Returns `Err(())` when the syllables lie in different factors.
fn merge(x: Syllable, y: Syllable) -> Result<Option<Syllable>, ()> {
    match (x.b_exponent(), y.b_exponent()) {
        (None, None) => Ok(None),
        (Some(p), Some(q)) => Ok(Syllable::from_b_exponent(p + q)),
        _ => Err(()),
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Syllable::A => "a",
            Syllable::B => "b",
            Syllable::BInv => "b^-1",
        })
    }
}

/// A word over `{a, b, b^-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupWord {
    syllables: Vec<Syllable>,
    reduced: bool,
}

impl GroupWord {
    pub fn new(syllables: Vec<Syllable>) -> Self {
        let reduced = syllables.windows(2).all(|w| merge(w[0], w[1]).is_err());
        GroupWord { syllables, reduced }
    }

    pub fn identity() -> Self {
        GroupWord { syllables: Vec::new(), reduced: true }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Concatenation; the result is not reduced.
    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut syllables = self.syllables.clone();
        syllables.extend_from_slice(&other.syllables);
        GroupWord::new(syllables)
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::new(self.syllables.iter().rev().map(|s| s.inverse()).collect())
    }

    /// `g self g^-1`, reduced.
    pub fn conjugate_by(&self, g: &GroupWord) -> GroupWord {
        reduce(&g.concat(self).concat(&g.inverse()))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Accepts `a`, `b`, `b^-1`, `b⁻¹` and `B` (for `b^-1`), with optional
    /// whitespace; `1` or the empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "1" {
            return Ok(GroupWord::identity());
        }
        let mut syllables = Vec::new();
        let mut rest = compact.as_str();
        while let Some(c) = rest.chars().next() {
            rest = &rest[c.len_utf8()..];
            match c {
                'a' => syllables.push(Syllable::A),
                'B' => syllables.push(Syllable::BInv),
                'b' => {
                    if let Some(tail) = rest.strip_prefix("^-1").or_else(|| rest.strip_prefix("⁻¹")) {
                        rest = tail;
                        syllables.push(Syllable::BInv);
                    } else {
                        syllables.push(Syllable::B);
                    }
                }
                other => return Err(Error::NotNormalForm(format!("unexpected character {other:?} in word"))),
            }
        }
        Ok(GroupWord::new(syllables))
    }
}

/// A reciprocal normal form together with its sign tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReciprocalNormalForm {
    eps: EpsilonSeq,
    word: GroupWord,
}

impl ReciprocalNormalForm {
    pub fn eps(&self) -> &EpsilonSeq {
        &self.eps
    }

    pub fn word(&self) -> &GroupWord {
        &self.word
    }

    pub fn into_word(self) -> GroupWord {
        self.word
    }
}

/// The prefix `a b^e1 ... a b^et`.
pub fn half_word(eps: &EpsilonSeq) -> GroupWord {
    let syllables = eps
        .entries()
        .iter()
        .flat_map(|&s| [Syllable::A, Syllable::from_sign(s)])
        .collect();
    GroupWord::new(syllables)
}

/// Builds `a b^e1 ... a b^et a b^-et ... a b^-e1`.
pub fn reciprocal_word(eps: &EpsilonSeq) -> ReciprocalNormalForm {
    let entries = eps.entries();
    let mut syllables = Vec::with_capacity(4 * entries.len());
    for &s in entries {
        syllables.push(Syllable::A);
        syllables.push(Syllable::from_sign(s));
    }
    for &s in entries.iter().rev() {
        syllables.push(Syllable::A);
        syllables.push(Syllable::from_sign(-s));
    }
    ReciprocalNormalForm { eps: eps.clone(), word: GroupWord::new(syllables) }
}

/// Reads the sign tuple off a reciprocal normal form.
pub fn epsilon_of(w: &GroupWord) -> Result<EpsilonSeq> {
    let syl = w.syllables();
    if syl.is_empty() || !syl.len().is_multiple_of(4) {
        return Err(Error::NotNormalForm(format!("length {} is not a positive multiple of 4", syl.len())));
    }
    let t = syl.len() / 4;
    let mut exps = Vec::with_capacity(2 * t);
    for (i, pair) in syl.chunks_exact(2).enumerate() {
        if pair[0] != Syllable::A {
            return Err(Error::NotNormalForm(format!("syllable {} should be a", 2 * i)));
        }
        match pair[1] {
            Syllable::B => exps.push(Sign::Plus),
            Syllable::BInv => exps.push(Sign::Minus),
            Syllable::A => return Err(Error::NotNormalForm(format!("syllable {} should be b or b^-1", 2 * i + 1))),
        }
    }
    let (prefix, suffix) = exps.split_at(t);
    for (i, (p, s)) in prefix.iter().zip(suffix.iter().rev()).enumerate() {
        if *s != -*p {
            return Err(Error::NotNormalForm(format!(
                "exponent {} of the second half does not negate exponent {} of the first",
                2 * t - i,
                i + 1
            )));
        }
    }
    EpsilonSeq::new(prefix.to_vec())
}

pub fn projectivize(eps: &EpsilonSeq) -> ProjectiveEpsilonSeq {
    let canonical = if eps.entries()[0] == Sign::Plus { eps.clone() } else { eps.negate() };
    ProjectiveEpsilonSeq { canonical }
}

/// Maximal runs of equal consecutive signs, left to right.
pub fn run_sequence(eps: &EpsilonSeq) -> Composition {
    let entries = eps.entries();
    let mut parts = Vec::new();
    let mut run = 1;
    for w in entries.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            parts.push(run);
            run = 1;
        }
    }
    parts.push(run);
    Composition::new(parts).expect("runs are positive")
}

/// Number of parts strictly greater than `depth`. A geodesic whose run
/// sequence has `n` such parts makes `2n` excursions of depth greater than
/// `depth`.
pub fn excursion_parts(c: &Composition, depth: usize) -> usize {
    c.parts().iter().filter(|&&p| p > depth).count()
}

/// Free reduction in `Z2 * Z3`: `a a = 1`, `b^3 = 1`.
pub fn reduce(w: &GroupWord) -> GroupWord {
    if w.reduced {
        return w.clone();
    }
    let mut stack: Vec<Syllable> = Vec::with_capacity(w.len());
    for &s in w.syllables() {
        match stack.last().map(|&top| merge(top, s)) {
            Some(Ok(None)) => {
                stack.pop();
            }
            Some(Ok(Some(m))) => {
                *stack.last_mut().expect("nonempty") = m;
            }
            _ => stack.push(s),
        }
    }
    GroupWord { syllables: stack, reduced: true }
}

/// Conjugates a reduced word until its first and last syllables lie in
/// different factors.
pub fn cyclic_reduce(w: &GroupWord) -> GroupWord {
    let w = reduce(w);
    let mut syl = std::collections::VecDeque::from(w.syllables);
    while syl.len() >= 2 {
        let first = *syl.front().expect("len >= 2");
        let last = *syl.back().expect("len >= 2");
        match merge(last, first) {
            Ok(None) => {
                syl.pop_front();
                syl.pop_back();
            }
            Ok(Some(m)) => {
                syl.pop_back();
                *syl.front_mut().expect("nonempty") = m;
            }
            Err(()) => break,
        }
    }
    GroupWord { syllables: syl.into(), reduced: true }
}

/// Start index of the lexicographically least rotation.
pub(crate) fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Canonical representative of the conjugacy class of `w`: the least rotation
/// of its cyclic reduction. Two words are conjugate iff their canonical forms
/// agree.
pub fn canonical_cyclic_form(w: &GroupWord) -> GroupWord {
    let cyc = cyclic_reduce(w);
    if cyc.len() < 2 {
        return cyc;
    }
    let start = least_rotation(cyc.syllables());
    let mut syllables = cyc.syllables;
    syllables.rotate_left(start);
    GroupWord { syllables, reduced: true }
}
