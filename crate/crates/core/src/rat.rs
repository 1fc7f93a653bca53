use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational in canonical form (positive denominator,
/// reduced). The coordinate field for every point, breakpoint and slope.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Rat {
        Rat(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Exact midpoint of two rationals.
    pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
        Rat((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn min(a: &Rat, b: &Rat) -> Rat {
        if a <= b { a.clone() } else { b.clone() }
    }

    pub fn max(a: &Rat, b: &Rat) -> Rat {
        if a >= b { a.clone() } else { b.clone() }
    }
}

macro_rules! rat_binop {
    ($Op:ident, $op:ident, $sym:tt) => {
        impl $Op for Rat {
            type Output = Rat;
            fn $op(self, rhs: Rat) -> Rat {
                Rat(self.0 $sym rhs.0)
            }
        }
        impl $Op for &Rat {
            type Output = Rat;
            fn $op(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $sym &rhs.0)
            }
        }
        impl $Op<&Rat> for Rat {
            type Output = Rat;
            fn $op(self, rhs: &Rat) -> Rat {
                Rat(self.0 $sym &rhs.0)
            }
        }
        impl $Op<Rat> for &Rat {
            type Output = Rat;
            fn $op(self, rhs: Rat) -> Rat {
                Rat(&self.0 $sym rhs.0)
            }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

/// Canonical text form: "p/q", with "/q" omitted when the denominator is 1.
impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat, Error> {
        let bad = || Error::parse(1, 1, format!("invalid rational {:?}", s));
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
            Some((p, q)) => {
                let n = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                if d.is_zero() || d.is_negative() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(n, d)))
            }
        }
    }
}
