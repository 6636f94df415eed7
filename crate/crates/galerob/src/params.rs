//! Parameter triples (a, c, N) of the Gale-Robinson recurrence and the Z^4
//! weight lattice shared by the quiver, degree-set, and mutation modules.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamsError {
    #[error("invalid parameters a={a}, c={c}, N={n}: need 1 <= a < N, 1 <= c < N, gcd(a,c,N) = 1")]
    InvalidParams { a: i64, c: i64, n: i64 },
}

/// The triple (a, c, N) of x_i * x_{i+N} = x_{i+a} * x_{i+N-a} + x_{i+c} * x_{i+N-c}.
/// The complementary offsets b = N - a and d = N - c are derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GRParams {
    pub a: i64,
    pub c: i64,
    #[serde(rename = "N")]
    pub n: i64,
}

impl GRParams {
    pub fn new(a: i64, c: i64, n: i64) -> Result<Self, ParamsError> {
        let p = GRParams { a, c, n };
        p.validate()?;
        Ok(p)
    }

    /// Re-checks the invariants; needed after deserializing untrusted JSON.
    pub fn validate(&self) -> Result<(), ParamsError> {
        let GRParams { a, c, n } = *self;
        if 1 <= a && a < n && 1 <= c && c < n && a.gcd(&c).gcd(&n) == 1 {
            Ok(())
        } else {
            Err(ParamsError::InvalidParams { a, c, n })
        }
    }

    pub fn b(&self) -> i64 {
        self.n - self.a
    }

    pub fn d(&self) -> i64 {
        self.n - self.c
    }

    /// Representative of v modulo N, taken in 1..=N rather than 0..N.
    pub fn rep(&self, v: i64) -> i64 {
        (v - 1).rem_euclid(self.n) + 1
    }

    /// Level l(w) = a*w1 + b*w2 - c*w3 - d*w4.
    pub fn level(&self, w: Weight) -> i64 {
        self.a * w.0[0] + self.b() * w.0[1] - self.c * w.0[2] - self.d() * w.0[3]
    }

    /// Parameters of the opposite quiver: (a,b) swapped with (c,d).
    pub fn opposite(&self) -> GRParams {
        GRParams { a: self.c, c: self.a, n: self.n }
    }

    /// All valid parameter triples with the given N, in (a, c) order.
    pub fn all_with_n(n: i64) -> Vec<GRParams> {
        let mut out = Vec::new();
        for a in 1..n {
            for c in 1..n {
                if let Ok(p) = GRParams::new(a, c, n) {
                    out.push(p);
                }
            }
        }
        out
    }
}

impl fmt::Display for GRParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, c={}, N={})", self.a, self.c, self.n)
    }
}

/// A point of the Z^4 weight lattice. Ordering is lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub [i64; 4]);

impl Weight {
    pub const ZERO: Weight = Weight([0; 4]);

    pub fn new(w1: i64, w2: i64, w3: i64, w4: i64) -> Self {
        Weight([w1, w2, w3, w4])
    }

    /// Componentwise partial order (the poset order on degree sets).
    pub fn le(&self, other: &Weight) -> bool {
        (0..4).all(|i| self.0[i] <= other.0[i])
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Sum of absolute coordinate values; bounds path lengths.
    pub fn abs_sum(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
            self.0[3] - rhs.0[3],
        ])
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse weight from {0:?}: expected \"(w1,w2,w3,w4)\"")]
pub struct WeightParseError(pub String);

impl FromStr for Weight {
    type Err = WeightParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 4 {
            return Err(WeightParseError(s.to_string()));
        }
        let mut w = [0i64; 4];
        for (slot, part) in w.iter_mut().zip(&parts) {
            *slot = part
                .trim()
                .parse()
                .map_err(|_| WeightParseError(s.to_string()))?;
        }
        Ok(Weight(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn accepts_known_good_triples() {
        for (a, c, n) in [(1, 2, 4), (1, 2, 5), (1, 2, 6), (1, 1, 2), (1, 3, 7), (2, 3, 7)] {
            GRParams::new(a, c, n).unwrap();
        }
    }

    #[test]
    fn rejects_gcd_and_range_violations() {
        assert!(GRParams::new(2, 2, 4).is_err());
        assert!(GRParams::new(0, 1, 3).is_err());
        assert!(GRParams::new(4, 1, 4).is_err());
        assert!(GRParams::new(1, 5, 4).is_err());
        assert!(GRParams::new(3, 3, 9).is_err());
    }

    #[test]
    fn derived_offsets_complement() {
        let p = GRParams::new(1, 2, 4).unwrap();
        assert_eq!(p.b(), 3);
        assert_eq!(p.d(), 2);
    }

    #[test]
    fn level_matches_hand_checks() {
        let somos4 = GRParams::new(1, 2, 4).unwrap();
        assert_eq!(somos4.level(Weight::ZERO), 0);
        assert_eq!(somos4.level(Weight::new(2, 0, 0, 0)), 2);
        let p126 = GRParams::new(1, 2, 6).unwrap();
        assert_eq!(p126.level(Weight::new(0, 1, -1, 0)), 7);
    }

    #[test]
    fn opposite_is_an_involution() {
        let p = GRParams::new(1, 2, 4).unwrap();
        assert_eq!(p.opposite(), GRParams::new(2, 1, 4).unwrap());
        assert_eq!(p.opposite().opposite(), p);
        let conifold = GRParams::new(1, 1, 2).unwrap();
        assert_eq!(conifold.opposite(), conifold);
    }

    #[test]
    fn weight_display_parse_round_trip() {
        let w = Weight::new(1, 0, -1, 7);
        let back: Weight = w.to_string().parse().unwrap();
        assert_eq!(back, w);
        assert!(" ( 1, 0, -1 , 7 ) ".parse::<Weight>().unwrap() == w);
        assert!("(1,2,3)".parse::<Weight>().is_err());
        assert!("(1,2,3,x)".parse::<Weight>().is_err());
    }

    #[test]
    fn weight_order_is_lexicographic() {
        assert!(Weight::new(0, 9, 9, 9) < Weight::new(1, 0, 0, 0));
        assert!(Weight::new(1, 0, 0, 0) < Weight::new(1, 0, 0, 1));
    }

    proptest! {
        #[test]
        fn rep_lands_in_range(v in -100i64..100, n in 2i64..13) {
            let p = GRParams { a: 1, c: 1, n };
            let r = p.rep(v);
            prop_assert!((1..=n).contains(&r));
            prop_assert_eq!((r - v).rem_euclid(n), 0);
        }

        #[test]
        fn level_is_additive(
            x in proptest::array::uniform4(-10i64..10),
            y in proptest::array::uniform4(-10i64..10),
        ) {
            let p = GRParams::new(2, 3, 7).unwrap();
            let (x, y) = (Weight(x), Weight(y));
            prop_assert_eq!(p.level(x + y), p.level(x) + p.level(y));
        }
    }
}
