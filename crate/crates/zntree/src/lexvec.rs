//! Exact arithmetic for Z^n under the right lexicographic order.
//!
//! The right lexicographic order compares the *rightmost* differing
//! coordinate, so later coordinates dominate: `(5,0) < (0,1)`. The order is
//! total and translation-invariant, which makes Z^n an ordered abelian group.
//! [`LexVec`] is an element of Z^n, [`HalfVec`] an element of the divisible
//! hull (1/2)Z^n used for Gromov products, and [`Height`] the index of the
//! rightmost nonzero coordinate (equivalently, the least convex subgroup an
//! element belongs to).
//!
//! Coordinates are `i128` and every arithmetic step is checked: a sum that
//! does not fit aborts loudly instead of wrapping. Desk-scale ball scans keep
//! values tiny, but weights come from user documents.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Height of an element of Z^n: the 1-based index of the rightmost nonzero
/// coordinate, with `ht(0) = 0` by convention so that the height-k slices
/// `{a : ht(a) <= k}` all contain the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Height(pub usize);

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of Z^n under the right lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexVec {
    coords: Vec<i128>,
}

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b)
        .expect("coordinate overflow in Z^n arithmetic")
}

fn cmp_right_lex(a: &[i128], b: &[i128]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl LexVec {
    pub fn new(coords: Vec<i128>) -> Self {
        assert!(!coords.is_empty(), "LexVec arity must be positive");
        LexVec { coords }
    }

    pub fn zeros(arity: usize) -> Self {
        LexVec::new(vec![0; arity])
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> i128 {
        self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        cmp_right_lex(&self.coords, &vec![0; self.arity()]) == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        cmp_right_lex(&self.coords, &vec![0; self.arity()]) == Ordering::Less
    }

    /// 1-based index of the rightmost nonzero coordinate; 0 for the zero
    /// vector.
    pub fn height(&self) -> Height {
        for (i, &c) in self.coords.iter().enumerate().rev() {
            if c != 0 {
                return Height(i + 1);
            }
        }
        Height(0)
    }

    /// Drops the `k` leftmost coordinates, the order-preserving projection
    /// onto Z^(n-k). `project(x, k)` vanishes exactly when `ht(x) <= k`.
    pub fn project(&self, k: usize) -> Result<LexVec> {
        if k >= self.arity() {
            return Err(Error::ProjectionRange {
                level: k,
                arity: self.arity(),
            });
        }
        Ok(LexVec::new(self.coords[k..].to_vec()))
    }

    /// `x` if `x >= 0`, else `-x`. Note the sign is the lexicographic one:
    /// `lex_abs((-5,3)) = (-5,3)` because `(-5,3) > 0`.
    pub fn lex_abs(&self) -> LexVec {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact half in the divisible hull, with canonical denominator.
    pub fn halve(&self) -> HalfVec {
        HalfVec::half_of(self.clone())
    }

    pub fn scalar_mul(&self, s: i128) -> LexVec {
        LexVec::new(
            self.coords
                .iter()
                .map(|&c| {
                    c.checked_mul(s)
                        .expect("coordinate overflow in Z^n arithmetic")
                })
                .collect(),
        )
    }

    fn check_arity(&self, other: &LexVec) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: other.arity(),
            });
        }
        Ok(())
    }
}

/// Fallible comparison for module boundaries; the `Ord` impl panics on
/// arity mismatch and is meant for values already validated to share arity.
pub fn lex_compare(x: &LexVec, y: &LexVec) -> Result<Ordering> {
    x.check_arity(y)?;
    Ok(cmp_right_lex(x.coords(), y.coords()))
}

impl PartialOrd for LexVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LexVec {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.arity(), other.arity(), "LexVec arity mismatch");
        cmp_right_lex(self.coords(), other.coords())
    }
}

impl std::ops::Add for &LexVec {
    type Output = LexVec;
    fn add(self, rhs: &LexVec) -> LexVec {
        assert_eq!(self.arity(), rhs.arity(), "LexVec arity mismatch");
        LexVec::new(
            self.coords
                .iter()
                .zip(rhs.coords.iter())
                .map(|(&a, &b)| checked_add(a, b))
                .collect(),
        )
    }
}

impl std::ops::Sub for &LexVec {
    type Output = LexVec;
    fn sub(self, rhs: &LexVec) -> LexVec {
        assert_eq!(self.arity(), rhs.arity(), "LexVec arity mismatch");
        LexVec::new(
            self.coords
                .iter()
                .zip(rhs.coords.iter())
                .map(|(&a, &b)| {
                    a.checked_sub(b)
                        .expect("coordinate overflow in Z^n arithmetic")
                })
                .collect(),
        )
    }
}

impl std::ops::Neg for LexVec {
    type Output = LexVec;
    fn neg(self) -> LexVec {
        LexVec::new(
            self.coords
                .iter()
                .map(|&c| {
                    c.checked_neg()
                        .expect("coordinate overflow in Z^n arithmetic")
                })
                .collect(),
        )
    }
}

impl fmt::Display for LexVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for LexVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<LexVec> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected `(a1,...,an)`, got `{s}`")))?;
        let coords = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i128>()
                    .map_err(|e| Error::Parse(format!("bad coordinate `{p}` in `{s}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::Parse(format!("empty vector literal `{s}`")));
        }
        Ok(LexVec::new(coords))
    }
}

/// An element of (1/2)Z^n, the fragment of the divisible hull that Gromov
/// products of integral lengths live in. Canonical form keeps denominator 2
/// only when some numerator coordinate is odd, so structural equality is
/// exact equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfVec {
    num: LexVec,
    den: u8,
}

impl HalfVec {
    /// `num / den` with `den` in {1, 2}, canonicalized.
    pub fn new(num: LexVec, den: u8) -> Self {
        assert!(den == 1 || den == 2, "HalfVec denominator must be 1 or 2");
        if den == 2 && num.coords().iter().all(|c| c % 2 == 0) {
            HalfVec {
                num: LexVec::new(num.coords().iter().map(|c| c / 2).collect()),
                den: 1,
            }
        } else {
            HalfVec { num, den }
        }
    }

    pub fn half_of(v: LexVec) -> Self {
        HalfVec::new(v, 2)
    }

    pub fn zero(arity: usize) -> Self {
        HalfVec {
            num: LexVec::zeros(arity),
            den: 1,
        }
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn numerators(&self) -> &LexVec {
        &self.num
    }

    pub fn denominator(&self) -> u8 {
        self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// The value as an element of Z^n, when integral.
    pub fn to_lexvec(&self) -> Option<LexVec> {
        if self.den == 1 {
            Some(self.num.clone())
        } else {
            None
        }
    }

    /// Twice the value, always integral. `halve` then `double` round-trips.
    pub fn double(&self) -> LexVec {
        self.num.scalar_mul(2 / self.den as i128)
    }

    pub fn height(&self) -> Height {
        self.num.height()
    }

    pub fn project(&self, k: usize) -> Result<HalfVec> {
        Ok(HalfVec::new(self.num.project(k)?, self.den))
    }

    pub fn scalar_mul(&self, s: i128) -> HalfVec {
        HalfVec::new(self.num.scalar_mul(s), self.den)
    }
}

impl From<LexVec> for HalfVec {
    fn from(v: LexVec) -> Self {
        HalfVec { num: v, den: 1 }
    }
}

impl PartialOrd for HalfVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HalfVec {
    /// lam/m <= mu/n iff n*lam <= m*mu; scaling by a positive integer
    /// preserves the right lexicographic order coordinate-wise.
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.arity(), other.arity(), "HalfVec arity mismatch");
        let left = self.num.scalar_mul(other.den as i128);
        let right = other.num.scalar_mul(self.den as i128);
        cmp_right_lex(left.coords(), right.coords())
    }
}

impl std::ops::Add for &HalfVec {
    type Output = HalfVec;
    fn add(self, rhs: &HalfVec) -> HalfVec {
        let l = self.num.scalar_mul(2 / self.den as i128);
        let r = rhs.num.scalar_mul(2 / rhs.den as i128);
        HalfVec::new(&l + &r, 2)
    }
}

impl std::ops::Sub for &HalfVec {
    type Output = HalfVec;
    fn sub(self, rhs: &HalfVec) -> HalfVec {
        let l = self.num.scalar_mul(2 / self.den as i128);
        let r = rhs.num.scalar_mul(2 / rhs.den as i128);
        HalfVec::new(&l - &r, 2)
    }
}

impl fmt::Display for HalfVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2", self.num)
        }
    }
}

impl FromStr for HalfVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<HalfVec> {
        let t = s.trim();
        if let Some(num) = t.strip_suffix("/2") {
            Ok(HalfVec::new(num.parse()?, 2))
        } else {
            Ok(HalfVec::from(t.parse::<LexVec>()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(coords: &[i128]) -> LexVec {
        LexVec::new(coords.to_vec())
    }

    #[test]
    fn right_lex_comparison() {
        assert_eq!(
            lex_compare(&v(&[5, 0]), &v(&[0, 1])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&v(&[3, 2]), &v(&[3, 2])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            lex_compare(&v(&[-1, 1]), &v(&[4, 0])).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn arity_mismatch_rejected() {
        assert!(matches!(
            lex_compare(&v(&[1]), &v(&[1, 0])),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn heights() {
        assert_eq!(v(&[2, 3, 0]).height(), Height(2));
        assert_eq!(v(&[0, 0, 0]).height(), Height(0));
        assert_eq!(v(&[7, 0, 0]).height(), Height(1));
    }

    #[test]
    fn projections() {
        assert_eq!(v(&[3, 4, 5]).project(1).unwrap(), v(&[4, 5]));
        assert_eq!(v(&[3, 0, 0]).project(1).unwrap(), v(&[0, 0]));
        assert_eq!(v(&[3, 4, 5]).project(0).unwrap(), v(&[3, 4, 5]));
        assert!(matches!(
            v(&[1, 2]).project(2),
            Err(Error::ProjectionRange { .. })
        ));
    }

    #[test]
    fn lex_abs_uses_lex_sign() {
        assert_eq!(v(&[-5, 3]).lex_abs(), v(&[-5, 3]));
        assert_eq!(v(&[2, -1]).lex_abs(), v(&[-2, 1]));
        assert_eq!(v(&[0, 0]).lex_abs(), v(&[0, 0]));
    }

    #[test]
    fn halving_is_canonical() {
        assert_eq!(v(&[4, 2]).halve(), HalfVec::from(v(&[2, 1])));
        let h = v(&[3, 0]).halve();
        assert_eq!(h.denominator(), 2);
        assert_eq!(h.to_string(), "(3,0)/2");
        assert_eq!(v(&[0, 0]).halve(), HalfVec::zero(2));
    }

    #[test]
    fn halve_double_round_trip() {
        for coords in [[4i128, 2], [3, 0], [0, 0], [-7, 5]] {
            let x = v(&coords);
            assert_eq!(x.halve().double(), x);
            assert_eq!(&x.halve() + &x.halve(), HalfVec::from(x.clone()));
        }
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["(1,0)", "(-5,3)", "(0)", "(12,-4,7)"] {
            let x: LexVec = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        for s in ["(3,0)/2", "(1,1)"] {
            let h: HalfVec = s.parse().unwrap();
            assert_eq!(h.to_string(), s);
        }
        assert!("(1, 2)".parse::<LexVec>().is_ok());
        assert!("1,2".parse::<LexVec>().is_err());
        assert!("()".parse::<LexVec>().is_err());
    }

    #[test]
    fn half_compare_cross_multiplies() {
        let a = HalfVec::half_of(v(&[3, 0])); // 1.5 in coordinate 1
        let b = HalfVec::from(v(&[1, 0]));
        let c = HalfVec::from(v(&[2, 0]));
        assert!(b < a && a < c);
        assert_eq!(HalfVec::half_of(v(&[2, 4])), HalfVec::from(v(&[1, 2])));
    }

    proptest! {
        #[test]
        fn order_is_translation_invariant(
            x in proptest::collection::vec(-50i128..50, 3),
            y in proptest::collection::vec(-50i128..50, 3),
            z in proptest::collection::vec(-50i128..50, 3),
        ) {
            let (x, y, z) = (LexVec::new(x), LexVec::new(y), LexVec::new(z));
            let before = x.cmp(&y);
            let after = (&x + &z).cmp(&(&y + &z));
            prop_assert_eq!(before, after);
        }

        #[test]
        fn height_dominates_for_positives(
            a in proptest::collection::vec(-9i128..10, 3),
            b in proptest::collection::vec(-9i128..10, 3),
        ) {
            let (a, b) = (LexVec::new(a), LexVec::new(b));
            prop_assume!(a.is_positive() && b.is_positive());
            if a.height() < b.height() {
                prop_assert!(a < b);
            }
        }

        #[test]
        fn projection_is_additive_and_monotone(
            x in proptest::collection::vec(-50i128..50, 3),
            y in proptest::collection::vec(-50i128..50, 3),
            k in 0usize..3,
        ) {
            let (x, y) = (LexVec::new(x), LexVec::new(y));
            let sum = (&x + &y).project(k).unwrap();
            prop_assert_eq!(&x.project(k).unwrap() + &y.project(k).unwrap(), sum);
            if x <= y {
                prop_assert!(x.project(k).unwrap() <= y.project(k).unwrap());
            }
        }

        #[test]
        fn lex_abs_is_subadditive(
            x in proptest::collection::vec(-50i128..50, 2),
            y in proptest::collection::vec(-50i128..50, 2),
        ) {
            let (x, y) = (LexVec::new(x), LexVec::new(y));
            prop_assert!((&x + &y).lex_abs() <= &x.lex_abs() + &y.lex_abs());
        }

        #[test]
        fn convex_slice_closed_under_betweenness(
            a in proptest::collection::vec(-20i128..20, 3),
            b in proptest::collection::vec(-20i128..20, 3),
            k in 1usize..=3,
        ) {
            // {a : ht(a) <= k} is closed under addition, negation, and
            // betweenness.
            let (a, b) = (LexVec::new(a), LexVec::new(b));
            if a.height().0 <= k && b.height().0 <= k {
                prop_assert!((&a + &b).height().0 <= k);
                prop_assert!((-a.clone()).height().0 <= k);
                // anything between 0 and a positive member stays inside
                let member = a.lex_abs();
                if b >= LexVec::zeros(3) && b <= member {
                    prop_assert!(b.height().0 <= k);
                }
            }
        }
    }
}
