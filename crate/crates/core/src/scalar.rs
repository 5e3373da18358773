//! Scalar abstractions: the [`Real`] trait that the whole crate is generic
//! over, and a second-order dual number used to extract exact metric jets.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Floating-point scalar the numerical kernels are written against.
///
/// `f64` is the working type everywhere in practice (see the aliases at the
/// crate root); `f32` satisfies the bound as well.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::NumAssign
    + num_traits::FromPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Shorthand for pulling literals into the working precision.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Operations a metric coefficient function needs from its scalar argument.
///
/// Implemented both by plain floats and by [`Dual2`], so a chart written once
/// can be evaluated for values and for exact first/second derivatives.
pub trait ChartScalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Debug
{
    type Base: Real;

    fn from_base(x: Self::Base) -> Self;
    fn lit(x: f64) -> Self {
        Self::from_base(Self::Base::of(x))
    }
    /// Value component (drops derivative payload if any).
    fn value(self) -> Self::Base;

    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn powf(self, e: Self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn abs(self) -> Self;
}

macro_rules! impl_chart_scalar_float {
    ($t:ty) => {
        impl ChartScalar for $t {
            type Base = $t;

            fn from_base(x: $t) -> Self {
                x
            }
            fn value(self) -> $t {
                self
            }
            fn sin(self) -> Self {
                <$t>::sin(self)
            }
            fn cos(self) -> Self {
                <$t>::cos(self)
            }
            fn tan(self) -> Self {
                <$t>::tan(self)
            }
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            fn ln(self) -> Self {
                <$t>::ln(self)
            }
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            fn powf(self, e: Self) -> Self {
                <$t>::powf(self, e)
            }
            fn powi(self, n: i32) -> Self {
                <$t>::powi(self, n)
            }
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
        }
    };
}

impl_chart_scalar_float!(f32);
impl_chart_scalar_float!(f64);

/// Second-order dual number `a + b e1 + c e2 + d e1 e2` with `e1^2 = e2^2 = 0`.
///
/// Seeding `e1` on coordinate `i` and `e2` on coordinate `j` and evaluating a
/// function yields its value, both first partials and the mixed second partial
/// in one pass, exactly to rounding. Seeding the same coordinate twice yields
/// the diagonal second partial in the `d` slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Dual2<T> {
    pub fn constant(a: T) -> Self {
        Dual2 { a, b: T::zero(), c: T::zero(), d: T::zero() }
    }

    /// Variable seeded with derivative weights `b` (1st direction) and `c` (2nd).
    pub fn seeded(a: T, b: T, c: T) -> Self {
        Dual2 { a, b, c, d: T::zero() }
    }

    /// Lift a scalar function through `f`, given value, first and second
    /// derivative of `f` at the value component.
    fn chain(self, f: T, fp: T, fpp: T) -> Self {
        Dual2 {
            a: f,
            b: fp * self.b,
            c: fp * self.c,
            d: fp * self.d + fpp * self.b * self.c,
        }
    }

    pub fn recip(self) -> Self {
        let ia = T::one() / self.a;
        let ia2 = ia * ia;
        Dual2 {
            a: ia,
            b: -self.b * ia2,
            c: -self.c * ia2,
            d: -self.d * ia2 + (T::one() + T::one()) * self.b * self.c * ia2 * ia,
        }
    }
}

impl<T: Real> Add for Dual2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual2 { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }
}

impl<T: Real> Sub for Dual2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual2 { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }
}

impl<T: Real> Neg for Dual2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl<T: Real> Mul for Dual2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual2 {
            a: self.a * o.a,
            b: self.a * o.b + self.b * o.a,
            c: self.a * o.c + self.c * o.a,
            d: self.a * o.d + self.d * o.a + self.b * o.c + self.c * o.b,
        }
    }
}

impl<T: Real> Div for Dual2<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<T: Real> ChartScalar for Dual2<T> {
    type Base = T;

    fn from_base(x: T) -> Self {
        Dual2::constant(x)
    }
    fn value(self) -> T {
        self.a
    }
    fn sin(self) -> Self {
        let (s, c) = (self.a.sin(), self.a.cos());
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = (self.a.sin(), self.a.cos());
        self.chain(c, -s, -c)
    }
    fn tan(self) -> Self {
        let t = self.a.tan();
        let sec2 = T::one() + t * t;
        self.chain(t, sec2, (T::one() + T::one()) * t * sec2)
    }
    fn exp(self) -> Self {
        let e = self.a.exp();
        self.chain(e, e, e)
    }
    fn ln(self) -> Self {
        let ia = T::one() / self.a;
        self.chain(self.a.ln(), ia, -ia * ia)
    }
    fn sqrt(self) -> Self {
        let r = self.a.sqrt();
        let half = T::of(0.5);
        self.chain(r, half / r, -T::of(0.25) / (r * self.a))
    }
    fn powf(self, e: Self) -> Self {
        // General a^e with possibly non-constant exponent: exp(e ln a).
        (e * self.ln()).exp()
    }
    fn powi(self, n: i32) -> Self {
        match n {
            0 => Dual2::constant(T::one()),
            n if n < 0 => self.powi(-n).recip(),
            _ => {
                let mut acc = self;
                for _ in 1..n {
                    acc = acc * self;
                }
                acc
            }
        }
    }
    fn abs(self) -> Self {
        if self.a < T::zero() {
            -self
        } else {
            self
        }
    }
}
