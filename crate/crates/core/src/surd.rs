//! Exact arithmetic in the field Q(sqrt 2, sqrt 3).
//!
//! Tabulated cubic-form data and the twelfth roots of unity that drive the
//! sixfold symmetry checks all live in Q(sqrt 2, sqrt 3) = Q + Q*sqrt(2) +
//! Q*sqrt(3) + Q*sqrt(6). [`Surd`] represents an element by its four rational
//! coordinates over that basis, with [`num_rational::Ratio`] of `i128`
//! coefficients; every operation, including division, is exact.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::IsoError;

/// Exact rational scalar used for surd coefficients.
pub type Rat = Ratio<i128>;

/// Complex number with exact surd components.
pub type CSurd = Complex<Surd>;

/// Element of Q(sqrt 2, sqrt 3): `a + b*sqrt(2) + c*sqrt(3) + d*sqrt(6)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Surd {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Surd {
    pub const fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Surd { a, b, c, d }
    }

    pub fn rational(a: Rat) -> Self {
        Surd::new(a, Rat::ZERO, Rat::ZERO, Rat::ZERO)
    }

    pub fn integer(n: i128) -> Self {
        Surd::rational(Rat::from_integer(n))
    }

    /// `p/q` as an exact element.
    pub fn frac(p: i128, q: i128) -> Self {
        Surd::rational(Rat::new(p, q))
    }

    pub fn sqrt2() -> Self {
        Surd::new(Rat::ZERO, Rat::ONE, Rat::ZERO, Rat::ZERO)
    }

    pub fn sqrt3() -> Self {
        Surd::new(Rat::ZERO, Rat::ZERO, Rat::ONE, Rat::ZERO)
    }

    pub fn sqrt6() -> Self {
        Surd::new(Rat::ZERO, Rat::ZERO, Rat::ZERO, Rat::ONE)
    }

    /// Exact square root of a non-negative rational, when it exists in the field.
    ///
    /// Succeeds exactly when the squarefree part of `p*q` (for input `p/q`)
    /// is 1, 2, 3 or 6.
    pub fn sqrt_rational(r: Rat) -> Result<Self, IsoError> {
        if r < Rat::ZERO {
            return Err(IsoError::Parse {
                what: format!("sqrt({r})"),
                reason: "negative radicand".into(),
            });
        }
        if r.is_zero() {
            return Ok(Surd::zero());
        }
        // sqrt(p/q) = sqrt(p*q)/q; split p*q into square * squarefree.
        let pq = r.numer() * r.denom();
        let (mut square_root, mut squarefree) = (1i128, pq);
        let mut f = 2i128;
        while f * f <= squarefree {
            while squarefree % (f * f) == 0 {
                squarefree /= f * f;
                square_root *= f;
            }
            f += 1;
        }
        let coeff = Rat::new(square_root, *r.denom());
        match squarefree {
            1 => Ok(Surd::rational(coeff)),
            2 => Ok(Surd::new(Rat::ZERO, coeff, Rat::ZERO, Rat::ZERO)),
            3 => Ok(Surd::new(Rat::ZERO, Rat::ZERO, coeff, Rat::ZERO)),
            6 => Ok(Surd::new(Rat::ZERO, Rat::ZERO, Rat::ZERO, coeff)),
            _ => Err(IsoError::Parse {
                what: format!("sqrt({r})"),
                reason: format!("squarefree part {squarefree} is not in {{1,2,3,6}}"),
            }),
        }
    }

    /// Galois conjugation sending sqrt(2) to -sqrt(2).
    pub fn conj2(self) -> Self {
        Surd::new(self.a, -self.b, self.c, -self.d)
    }

    /// Galois conjugation sending sqrt(3) to -sqrt(3).
    pub fn conj3(self) -> Self {
        Surd::new(self.a, self.b, -self.c, -self.d)
    }

    /// Exact multiplicative inverse. Panics on zero, like rational division.
    pub fn inverse(self) -> Self {
        assert!(!self.is_zero(), "division by zero Surd");
        // The product of all four Galois conjugates is rational; dividing the
        // product of the other three by it yields the inverse.
        let p = self.conj2() * self.conj3() * self.conj2().conj3();
        let n = self * p;
        debug_assert!(n.b.is_zero() && n.c.is_zero() && n.d.is_zero());
        p * Surd::rational(n.a.recip())
    }

    pub fn is_rational(self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn to_f64(self) -> f64 {
        fn r2f(r: Rat) -> f64 {
            *r.numer() as f64 / *r.denom() as f64
        }
        r2f(self.a) + r2f(self.b) * std::f64::consts::SQRT_2 + r2f(self.c) * 3f64.sqrt()
            + r2f(self.d) * 6f64.sqrt()
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        Surd::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        Surd::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        // Basis products: sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2 sqrt3,
        // sqrt3*sqrt6 = 3 sqrt2, sqrt6^2 = 6.
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (o.a, o.b, o.c, o.d);
        let two = Rat::from_integer(2);
        let three = Rat::from_integer(3);
        let six = Rat::from_integer(6);
        Surd::new(
            a1 * a2 + two * b1 * b2 + three * c1 * c2 + six * d1 * d2,
            a1 * b2 + b1 * a2 + three * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + two * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )
    }
}

impl Div for Surd {
    type Output = Surd;
    #[allow(clippy::suspicious_arithmetic_impl)] // division in this field is multiplication by the inverse
    fn div(self, o: Surd) -> Surd {
        self * o.inverse()
    }
}

impl Rem for Surd {
    type Output = Surd;
    fn rem(self, o: Surd) -> Surd {
        assert!(!o.is_zero(), "remainder by zero Surd");
        Surd::zero()
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::rational(Rat::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::rational(Rat::ONE)
    }
}

impl num_traits::Num for Surd {
    type FromStrRadixErr = IsoError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i128::from_str_radix(s, radix)
            .map(Surd::integer)
            .map_err(|e| IsoError::Parse {
                what: format!("integer '{s}'"),
                reason: e.to_string(),
            })
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (coeff, basis) in [
            (self.a, None),
            (self.b, Some("sqrt(2)")),
            (self.c, Some("sqrt(3)")),
            (self.d, Some("sqrt(6)")),
        ] {
            if coeff.is_zero() {
                continue;
            }
            if first {
                if coeff < Rat::ZERO {
                    write!(f, "-")?;
                }
            } else if coeff < Rat::ZERO {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mag = if coeff < Rat::ZERO { -coeff } else { coeff };
            match basis {
                None => write!(f, "{mag}")?,
                Some(b) => {
                    if mag.is_one() {
                        write!(f, "{b}")?;
                    } else {
                        write!(f, "{mag}*{b}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

/// Parses a table value expression such as `sqrt(3/2)`, `-2*sqrt(3/2)`,
/// `3/4`, or `-sqrt(2)` into an exact field element.
pub fn parse_value_expr(s: &str) -> Result<Surd, IsoError> {
    let parse_err = |reason: &str| IsoError::Parse {
        what: format!("value expression '{s}'"),
        reason: reason.into(),
    };
    let parse_rat = |t: &str| -> Result<Rat, IsoError> {
        let t = t.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: i128 = num.parse().map_err(|_| parse_err("bad rational"))?;
        let d: i128 = den.parse().map_err(|_| parse_err("bad rational"))?;
        if d == 0 {
            return Err(parse_err("zero denominator"));
        }
        Ok(Rat::new(n, d))
    };

    let mut t = s.trim();
    let mut sign = Rat::ONE;
    while let Some(rest) = t.strip_prefix(['+', '-']) {
        if t.starts_with('-') {
            sign = -sign;
        }
        t = rest.trim_start();
    }
    let (factor, radical) = match t.split_once('*') {
        Some((f, r)) => (parse_rat(f)?, r.trim()),
        None => (Rat::ONE, t),
    };
    let value = if let Some(inner) = radical
        .strip_prefix("sqrt(")
        .and_then(|r| r.strip_suffix(')'))
    {
        Surd::sqrt_rational(parse_rat(inner)?)?
    } else if radical.is_empty() {
        Surd::one()
    } else {
        Surd::rational(parse_rat(radical)?)
    };
    Ok(Surd::rational(sign * factor) * value)
}

/// Renders a field element back into the canonical table expression when it is
/// a rational multiple of sqrt(3/2), falling back to [`Display`] otherwise.
///
/// [`Display`]: fmt::Display
pub fn to_value_expr(v: Surd) -> String {
    if v.a.is_zero() && v.b.is_zero() && v.c.is_zero() && !v.d.is_zero() {
        // v = d*sqrt(6) = (2d)*sqrt(3/2).
        let k = v.d * Rat::from_integer(2);
        let sign = if k < Rat::ZERO { "-" } else { "" };
        let mag = if k < Rat::ZERO { -k } else { k };
        if mag.is_one() {
            return format!("{sign}sqrt(3/2)");
        }
        return format!("{sign}{mag}*sqrt(3/2)");
    }
    v.to_string()
}

/// Exact cosine of `k*pi/6` for any integer `k`.
pub fn cos_k_pi_6(k: i64) -> Surd {
    let k = k.rem_euclid(12) as usize;
    let half = Surd::frac(1, 2);
    let h3 = Surd::sqrt3() * half;
    match k {
        0 => Surd::one(),
        1 => h3,
        2 => half,
        3 => Surd::zero(),
        4 => -half,
        5 => -h3,
        6 => -Surd::one(),
        7 => -h3,
        8 => -half,
        9 => Surd::zero(),
        10 => half,
        11 => h3,
        _ => unreachable!(),
    }
}

/// Exact sine of `k*pi/6` for any integer `k`.
pub fn sin_k_pi_6(k: i64) -> Surd {
    cos_k_pi_6(k - 3)
}

/// Exact `e^{i k pi / 6}`, the twelfth root of unity of index `k`.
pub fn unit_phase_k_pi_6(k: i64) -> CSurd {
    Complex::new(cos_k_pi_6(k), sin_k_pi_6(k))
}

/// Exact cotangent of `k*pi/6` for integer `k` not divisible by 6.
pub fn cot_k_pi_6(k: i64) -> Surd {
    let c = cos_k_pi_6(k);
    let s = sin_k_pi_6(k);
    assert!(!s.is_zero(), "cot(k*pi/6) undefined for k = 0 mod 6");
    c / s
}

/// Exact cotangent of `k*pi/12` for odd `k`; these are the principal
/// curvatures of the sixfold families in the half-angle convention.
pub fn cot_odd_k_pi_12(k: i64) -> Surd {
    assert!(k.rem_euclid(2) == 1, "cot_odd_k_pi_12 needs odd k");
    let k = k.rem_euclid(24);
    // cot(k*pi/12) for odd k in (0, pi) takes the values below; the second
    // half-period repeats with the same values (period pi).
    match k % 12 {
        1 => Surd::integer(2) + Surd::sqrt3(),
        3 => Surd::one(),
        5 => Surd::integer(2) - Surd::sqrt3(),
        7 => Surd::sqrt3() - Surd::integer(2),
        9 => -Surd::one(),
        11 => -(Surd::integer(2) + Surd::sqrt3()),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-12
    }

    #[test]
    fn basis_products_match_floats() {
        let s2 = Surd::sqrt2();
        let s3 = Surd::sqrt3();
        let s6 = Surd::sqrt6();
        assert_eq!(s2 * s3, s6);
        assert_eq!(s2 * s6, Surd::integer(2) * s3);
        assert_eq!(s3 * s6, Surd::integer(3) * s2);
        assert_eq!(s6 * s6, Surd::integer(6));
        assert!(close(s6.to_f64(), 6f64.sqrt()));
    }

    #[test]
    fn inverse_of_mixed_element() {
        let x = Surd::frac(1, 2) + Surd::sqrt2() - Surd::frac(2, 3) * Surd::sqrt6();
        assert_eq!(x * x.inverse(), Surd::one());
        assert_eq!(x / x, Surd::one());
    }

    #[test]
    fn sqrt_rational_canonical_values() {
        let r32 = Surd::sqrt_rational(Rat::new(3, 2)).unwrap();
        assert_eq!(r32, Surd::frac(1, 2) * Surd::sqrt6());
        assert!(close(r32.to_f64(), (1.5f64).sqrt()));
        assert_eq!(Surd::sqrt_rational(Rat::new(9, 4)).unwrap(), Surd::frac(3, 2));
        assert!(Surd::sqrt_rational(Rat::new(5, 1)).is_err());
    }

    #[test]
    fn parse_table_expressions() {
        assert_eq!(
            parse_value_expr("sqrt(3/2)").unwrap(),
            Surd::frac(1, 2) * Surd::sqrt6()
        );
        assert_eq!(
            parse_value_expr("-2*sqrt(3/2)").unwrap(),
            -Surd::sqrt6()
        );
        assert_eq!(parse_value_expr("2*sqrt(3/2)").unwrap(), Surd::sqrt6());
        assert_eq!(parse_value_expr("-sqrt(3/2)").unwrap(), -Surd::frac(1, 2) * Surd::sqrt6());
        assert_eq!(parse_value_expr("3/4").unwrap(), Surd::frac(3, 4));
        assert!(parse_value_expr("sqrt(7)").is_err());
    }

    #[test]
    fn value_expr_round_trip() {
        for s in ["sqrt(3/2)", "-sqrt(3/2)", "2*sqrt(3/2)", "-2*sqrt(3/2)"] {
            assert_eq!(to_value_expr(parse_value_expr(s).unwrap()), s);
        }
    }

    #[test]
    fn twelfth_roots_match_floats() {
        for k in -13..=13 {
            let z = unit_phase_k_pi_6(k);
            let ang = k as f64 * std::f64::consts::PI / 6.0;
            assert!(close(z.re.to_f64(), ang.cos()), "re at k={k}");
            assert!(close(z.im.to_f64(), ang.sin()), "im at k={k}");
        }
        assert_eq!(cot_k_pi_6(1), Surd::sqrt3());
        assert_eq!(cot_k_pi_6(2), Surd::sqrt3().inverse());
        assert_eq!(cot_k_pi_6(3), Surd::zero());
        assert_eq!(cot_odd_k_pi_12(1), Surd::integer(2) + Surd::sqrt3());
        assert_eq!(cot_odd_k_pi_12(3), Surd::one());
        assert_eq!(cot_odd_k_pi_12(11), -(Surd::integer(2) + Surd::sqrt3()));
        for j in 0..12 {
            let k = 2 * j + 1;
            let ang = k as f64 * std::f64::consts::PI / 12.0;
            assert!(
                close(cot_odd_k_pi_12(k).to_f64(), ang.cos() / ang.sin()),
                "cot at k={k}"
            );
        }
    }

    #[test]
    fn complex_surd_phase_power() {
        let z = unit_phase_k_pi_6(1);
        let mut p = CSurd::new(Surd::one(), Surd::zero());
        for _ in 0..12 {
            p = p * z;
        }
        assert_eq!(p, CSurd::new(Surd::one(), Surd::zero()));
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-12i128..=12, 1i128..=6).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn small_surd() -> impl Strategy<Value = Surd> {
        (small_rat(), small_rat(), small_rat(), small_rat())
            .prop_map(|(a, b, c, d)| Surd::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn field_axioms(x in small_surd(), y in small_surd(), z in small_surd()) {
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!((x + y) + z, x + (y + z));
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!(x + Surd::zero(), x);
            prop_assert_eq!(x * Surd::one(), x);
            if !x.is_zero() {
                prop_assert_eq!(x * x.inverse(), Surd::one());
            }
        }

        #[test]
        fn mul_matches_float(x in small_surd(), y in small_surd()) {
            let exact = (x * y).to_f64();
            let approx = x.to_f64() * y.to_f64();
            prop_assert!((exact - approx).abs() < 1e-9 * (1.0 + approx.abs()));
        }
    }
}
