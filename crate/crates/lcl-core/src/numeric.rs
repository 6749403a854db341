//! High-precision real and complex scalars on top of MPFR floats.
//!
//! Precision is tracked in decimal digits at the API surface (the working
//! precision `P`) and converted to bits internally. Complex numbers are plain
//! pairs of floats; only the handful of analytic operations the rest of the
//! crate needs are provided.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Rational};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;

/// Factor by which `certified_sign` may raise precision before giving up.
pub const MAX_PRECISION_FACTOR: u32 = 4;

/// Bits needed for `digits` decimal digits, with guard bits.
pub fn bits_for(digits: u32) -> u32 {
    // log2(10) = 3.3219...; 32 guard bits absorb rounding in long Horner runs.
    (digits as f64 * 3.3219281).ceil() as u32 + 32
}

pub fn float_from_rational(q: &Rational, bits: u32) -> Float {
    Float::with_val(bits, q)
}

/// 10^(-digits) as a float, for residual thresholds.
pub fn pow10_neg(digits: u32, bits: u32) -> Float {
    Float::with_val(bits, 10).pow(-(digits as i32))
}

/// Deterministic decimal rendering with a fixed number of significant digits.
pub fn fmt_float(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix_round(10, Some(sig), Round::Nearest);
    // rug renders like "1.234e5" or "-4.560e-2"; normalize the exponent marker.
    s.replace("e0", "e0")
}

#[derive(Clone, Debug)]
pub struct Cplx {
    pub re: Float,
    pub im: Float,
}

impl Cplx {
    pub fn new(re: Float, im: Float) -> Self {
        Cplx { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Cplx {
            re: Float::with_val(bits, 0),
            im: Float::with_val(bits, 0),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let bits = re.prec();
        Cplx {
            re,
            im: Float::with_val(bits, 0),
        }
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        Cplx {
            re: Float::with_val(bits, re),
            im: Float::with_val(bits, im),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Cplx {
        Cplx {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn neg(&self) -> Cplx {
        let b = self.prec();
        Cplx {
            re: Float::with_val(b, -&self.re),
            im: Float::with_val(b, -&self.im),
        }
    }

    pub fn add(&self, o: &Cplx) -> Cplx {
        let b = self.prec().max(o.prec());
        Cplx {
            re: Float::with_val(b, &self.re + &o.re),
            im: Float::with_val(b, &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &Cplx) -> Cplx {
        let b = self.prec().max(o.prec());
        Cplx {
            re: Float::with_val(b, &self.re - &o.re),
            im: Float::with_val(b, &self.im - &o.im),
        }
    }

    pub fn mul(&self, o: &Cplx) -> Cplx {
        let b = self.prec().max(o.prec());
        let re = Float::with_val(b, &self.re * &o.re) - Float::with_val(b, &self.im * &o.im);
        let im = Float::with_val(b, &self.re * &o.im) + Float::with_val(b, &self.im * &o.re);
        Cplx {
            re: Float::with_val(b, re),
            im: Float::with_val(b, im),
        }
    }

    pub fn scale(&self, s: &Float) -> Cplx {
        let b = self.prec().max(s.prec());
        Cplx {
            re: Float::with_val(b, &self.re * s),
            im: Float::with_val(b, &self.im * s),
        }
    }

    /// |self|^2
    pub fn norm2(&self) -> Float {
        let b = self.prec();
        Float::with_val(b, &self.re * &self.re) + Float::with_val(b, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        let b = self.prec();
        Float::with_val(b, self.norm2().sqrt())
    }

    pub fn arg(&self) -> Float {
        let b = self.prec();
        Float::with_val(b, self.im.clone().atan2(&self.re))
    }

    pub fn div(&self, o: &Cplx) -> Cplx {
        let b = self.prec().max(o.prec());
        let d = o.norm2();
        let num = self.mul(&o.conj());
        Cplx {
            re: Float::with_val(b, &num.re / &d),
            im: Float::with_val(b, &num.im / &d),
        }
    }

    pub fn inv(&self) -> Cplx {
        let b = self.prec();
        let one = Cplx::from_real(Float::with_val(b, 1));
        one.div(self)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Cplx {
        let b = self.prec();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                let m = Float::with_val(b, (-self.re.clone()).sqrt());
                return Cplx {
                    re: Float::with_val(b, 0),
                    im: m,
                };
            }
            return Cplx {
                re: Float::with_val(b, self.re.clone().sqrt()),
                im: Float::with_val(b, 0),
            };
        }
        let r = self.abs();
        let theta = self.arg();
        let sr = Float::with_val(b, r.sqrt());
        let half = Float::with_val(b, &theta / &Float::with_val(b, 2));
        Cplx {
            re: Float::with_val(b, &sr * &half.clone().cos()),
            im: Float::with_val(b, &sr * &half.sin()),
        }
    }

    /// Principal logarithm: ln|z| + i arg(z), arg in (-pi, pi].
    pub fn ln(&self) -> Cplx {
        let b = self.prec();
        Cplx {
            re: Float::with_val(b, self.abs().ln()),
            im: self.arg(),
        }
    }

    pub fn exp(&self) -> Cplx {
        let b = self.prec();
        let m = Float::with_val(b, self.re.clone().exp());
        Cplx {
            re: Float::with_val(b, &m * &self.im.clone().cos()),
            im: Float::with_val(b, &m * &self.im.clone().sin()),
        }
    }

    pub fn dist(&self, o: &Cplx) -> Float {
        self.sub(o).abs()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Chordal (spherical) distance on the Riemann sphere, range [0, 2].
pub fn chordal(a: &CP1, b: &CP1, bits: u32) -> Float {
    let one = Float::with_val(bits, 1);
    match (a, b) {
        (CP1::Infinity, CP1::Infinity) => Float::with_val(bits, 0),
        (CP1::Finite(z), CP1::Infinity) | (CP1::Infinity, CP1::Finite(z)) => {
            let d = Float::with_val(bits, &one + &z.norm2()).sqrt();
            Float::with_val(bits, 2) / d
        }
        (CP1::Finite(z), CP1::Finite(w)) => {
            let num = Float::with_val(bits, 2) * z.dist(w);
            let d1 = Float::with_val(bits, &one + &z.norm2()).sqrt();
            let d2 = Float::with_val(bits, &one + &w.norm2()).sqrt();
            num / (d1 * d2)
        }
    }
}

/// A point of the boundary sphere/circle: finite complex number or infinity.
#[derive(Clone, Debug)]
pub enum CP1 {
    Finite(Cplx),
    Infinity,
}

impl CP1 {
    pub fn finite(&self) -> Option<&Cplx> {
        match self {
            CP1::Finite(z) => Some(z),
            CP1::Infinity => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_field_ops_roundtrip() {
        let b = bits_for(60);
        let z = Cplx::from_f64(1.5, -2.25, b);
        let w = Cplx::from_f64(-0.5, 3.0, b);
        let back = z.mul(&w).div(&w);
        assert!(back.sub(&z).abs().to_f64() < 1e-55);
    }

    #[test]
    fn principal_sqrt_and_ln() {
        let b = bits_for(60);
        let z = Cplx::from_f64(-4.0, 0.0, b);
        let s = z.sqrt();
        assert!(s.re.to_f64().abs() < 1e-55);
        assert!((s.im.to_f64() - 2.0).abs() < 1e-14);
        let l = Cplx::from_f64(std::f64::consts::E, 0.0, b).ln();
        assert!((l.re.to_f64() - 1.0).abs() < 1e-14);
        assert!(l.im.to_f64().abs() < 1e-55);
    }

    #[test]
    fn chordal_metric_edge_cases() {
        let b = bits_for(60);
        let zero = CP1::Finite(Cplx::zero(b));
        let inf = CP1::Infinity;
        assert!((chordal(&zero, &inf, b).to_f64() - 2.0).abs() < 1e-14);
        assert!(chordal(&inf, &inf, b).to_f64() == 0.0);
    }
}
