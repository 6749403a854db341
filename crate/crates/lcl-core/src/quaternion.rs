//! Quaternion algebras (a,b/K) over a number field: i^2 = a, j^2 = b,
//! k = ij = -ji. Reduced norm/trace, the standard order and its norm-one
//! units, ramification at infinite places, and the exact embedding into
//! 2x2 matrices over the tower K(sqrt a).

use crate::exactnum::{
    tower_create, ExactError, FieldElement, NumberField, Place, PlaceKind, TElem, Tower,
};
use crate::moebius::Mat2;
use std::cmp::Ordering;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error("algebra parameter is zero")]
    ZeroParameter,
    #[error("no standard order: a parameter is not an algebraic integer")]
    NoStandardOrder,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The algebra (a,b/K). Holds the tower K(sqrt a) used by the matrix
/// embedding; when a is a square in K the tower still carries a formal
/// square root so the representation stays uniform.
#[derive(Debug, Clone)]
pub struct QuaternionAlgebra {
    pub field: Arc<NumberField>,
    pub a: FieldElement,
    pub b: FieldElement,
    pub tower: Arc<Tower>,
}

impl QuaternionAlgebra {
    pub fn new(
        field: Arc<NumberField>,
        a: FieldElement,
        b: FieldElement,
    ) -> Result<QuaternionAlgebra, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroParameter);
        }
        let tower = tower_create(&field, a.clone()).map_err(|e| match e {
            ExactError::ZeroParameter => QuatError::ZeroParameter,
            other => QuatError::Exact(other),
        })?;
        Ok(QuaternionAlgebra { field, a, b, tower })
    }

    pub fn one(&self) -> Quaternion {
        Quaternion {
            x: [
                self.field.one(),
                self.field.zero(),
                self.field.zero(),
                self.field.zero(),
            ],
        }
    }

    pub fn basis_i(&self) -> Quaternion {
        Quaternion {
            x: [
                self.field.zero(),
                self.field.one(),
                self.field.zero(),
                self.field.zero(),
            ],
        }
    }

    pub fn basis_j(&self) -> Quaternion {
        Quaternion {
            x: [
                self.field.zero(),
                self.field.zero(),
                self.field.one(),
                self.field.zero(),
            ],
        }
    }

    pub fn basis_k(&self) -> Quaternion {
        Quaternion {
            x: [
                self.field.zero(),
                self.field.zero(),
                self.field.zero(),
                self.field.one(),
            ],
        }
    }

    /// Multiplication in the basis 1, i, j, k with i^2 = a, j^2 = b,
    /// k = ij = -ji (so k^2 = -ab).
    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let a = &self.a;
        let b = &self.b;
        let ab = a.mul(b);
        let [x0, x1, x2, x3] = &x.x;
        let [y0, y1, y2, y3] = &y.x;
        let z0 = x0
            .mul(y0)
            .add(&a.mul(&x1.mul(y1)))
            .add(&b.mul(&x2.mul(y2)))
            .sub(&ab.mul(&x3.mul(y3)));
        let z1 = x0
            .mul(y1)
            .add(&x1.mul(y0))
            .sub(&b.mul(&x2.mul(y3)))
            .add(&b.mul(&x3.mul(y2)));
        let z2 = x0
            .mul(y2)
            .add(&x2.mul(y0))
            .add(&a.mul(&x1.mul(y3)))
            .sub(&a.mul(&x3.mul(y1)));
        let z3 = x0
            .mul(y3)
            .add(&x3.mul(y0))
            .add(&x1.mul(y2))
            .sub(&x2.mul(y1));
        Quaternion {
            x: [z0, z1, z2, z3],
        }
    }

    pub fn conj(&self, x: &Quaternion) -> Quaternion {
        Quaternion {
            x: [
                x.x[0].clone(),
                x.x[1].neg(),
                x.x[2].neg(),
                x.x[3].neg(),
            ],
        }
    }

    /// Reduced norm: x0^2 - a x1^2 - b x2^2 + ab x3^2 (= x conj(x)).
    pub fn nrd(&self, x: &Quaternion) -> FieldElement {
        let [x0, x1, x2, x3] = &x.x;
        let ab = self.a.mul(&self.b);
        x0.mul(x0)
            .sub(&self.a.mul(&x1.mul(x1)))
            .sub(&self.b.mul(&x2.mul(x2)))
            .add(&ab.mul(&x3.mul(x3)))
    }

    /// Reduced trace: x + conj(x) = 2 x0.
    pub fn trd(&self, x: &Quaternion) -> FieldElement {
        x.x[0].add(&x.x[0])
    }

    /// The basis map 1 -> I, i -> diag(s, -s), j -> [[0,1],[b,0]],
    /// k -> [[0,s],[-bs,0]] with s = sqrt a, extended linearly. The image
    /// has trace 2 x0 and determinant Nrd(x) exactly.
    pub fn embed_matrix(&self, x: &Quaternion) -> [[TElem; 2]; 2] {
        let t = &self.tower;
        let lift = |e: &FieldElement| TElem::from_base(t, e.clone());
        let [x0, x1, x2, x3] = &x.x;
        let b = &self.b;
        // entry (0,0): x0 + x1 s; (0,1): x2 + x3 s
        // entry (1,0): b (x2 - x3 s); (1,1): x0 - x1 s
        let s = TElem::sqrt_gen(t);
        let e00 = lift(x0).add(&lift(x1).mul(&s));
        let e01 = lift(x2).add(&lift(x3).mul(&s));
        let e10 = lift(&b.mul(x2)).sub(&lift(&b.mul(x3)).mul(&s));
        let e11 = lift(x0).sub(&lift(x1).mul(&s));
        [[e00, e01], [e10, e11]]
    }

    /// Embeds a norm-one quaternion as an exact determinant-one matrix.
    pub fn embed_unimodular(&self, x: &Quaternion) -> Result<Mat2<TElem>, QuatError> {
        let one = self.field.one();
        if self.nrd(x) != one {
            return Err(QuatError::NoStandardOrder);
        }
        let m = self.embed_matrix(x);
        let [[a, b], [c, d]] = m;
        Ok(Mat2::new(a, b, c, d).expect("det = Nrd = 1"))
    }

    /// Ramification at a real place: the completion is the Hamilton
    /// algebra iff both parameters are negative there. Complex places are
    /// never ramified.
    pub fn ramified_at_place(&self, place: &Place) -> Result<bool, QuatError> {
        if place.kind == PlaceKind::Complex {
            return Ok(false);
        }
        let sa = self.a.certified_sign(place).map_err(QuatError::Exact)?;
        let sb = self.b.certified_sign(place).map_err(QuatError::Exact)?;
        if sa == Ordering::Equal || sb == Ordering::Equal {
            return Err(QuatError::ZeroParameter);
        }
        Ok(sa == Ordering::Less && sb == Ordering::Less)
    }

    /// Indices of the unramified real places followed by the complex
    /// places: the factors of the product of symmetric spaces the
    /// norm-one units act on.
    pub fn unramified_places(&self) -> Result<Vec<usize>, QuatError> {
        let mut out = Vec::new();
        for (i, pl) in self.field.places.iter().enumerate() {
            if !self.ramified_at_place(pl)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Whether the standard order O_K[1,i,j,k] exists: both parameters
    /// must be algebraic integers.
    pub fn has_standard_order(&self) -> bool {
        self.a.is_algebraic_integer() && self.b.is_algebraic_integer()
    }

    /// Membership in the norm-one units of the standard order: all
    /// coordinates integral and Nrd exactly 1.
    pub fn unit_check(&self, x: &Quaternion) -> Result<bool, QuatError> {
        if !self.has_standard_order() {
            return Err(QuatError::NoStandardOrder);
        }
        for c in &x.x {
            if !c.is_algebraic_integer() {
                return Ok(false);
            }
        }
        Ok(self.nrd(x) == self.field.one())
    }
}

/// An element x0 + x1 i + x2 j + x3 k with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quaternion {
    pub x: [FieldElement; 4],
}

impl Quaternion {
    pub fn from_coords(x: [FieldElement; 4]) -> Quaternion {
        Quaternion { x }
    }
}
