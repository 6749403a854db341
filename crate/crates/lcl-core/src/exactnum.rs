//! Algebraic number fields with certified archimedean places.
//!
//! A field is Q[x]/(f) for a monic irreducible f. Elements are exact
//! coefficient vectors in the power basis. Every embedding into C is carried
//! as a `Place` holding a high-precision root of f together with certified
//! enclosure data, so sign and realness questions are decided exactly:
//! a sign answer of zero is only ever produced by exact cancellation, and a
//! nonzero answer is backed by an interval or disk that excludes the
//! competing outcome. Quadratic extensions K(sqrt(a)) are represented as
//! explicit (u, v) pairs over the base field rather than as a fresh field.

use crate::numeric::{bits_for, float_from_rational, fmt_float, Cplx, DEFAULT_DIGITS, MAX_PRECISION_FACTOR};
use crate::poly::{sqrt_interval, Poly};
use rug::ops::Pow;
use rug::{Float, Rational};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("minimal polynomial is reducible over Q")]
    ReducibleMinPoly,
    #[error("minimal polynomial is not monic")]
    NonMonic,
    #[error("irreducibility not verified for degree {0} (pass assert_irreducible to accept)")]
    IrreducibilityUnverified(usize),
    #[error("precision exhausted at {0} digits while certifying a sign")]
    PrecisionExhausted(u32),
    #[error("operation requires a {expected} place, got a {got} place")]
    WrongPlaceKind {
        expected: &'static str,
        got: &'static str,
    },
    #[error("extension parameter is zero")]
    ZeroParameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    Real,
    /// One stored representative per conjugate pair; the partner embedding
    /// is obtained by conjugating every evaluation.
    Complex,
}

impl PlaceKind {
    fn name(self) -> &'static str {
        match self {
            PlaceKind::Real => "real",
            PlaceKind::Complex => "complex",
        }
    }
}

/// An archimedean place of the field: an embedding generator-root at high
/// precision plus certified localization data.
#[derive(Debug, Clone)]
pub struct Place {
    pub index: usize,
    pub kind: PlaceKind,
    /// Root of the minimal polynomial at `bits_for(4P)` precision. Real
    /// places have imaginary part exactly zero.
    pub root: Cplx,
    /// Exact radius of a disk around `root` certified to contain the true
    /// root and no other.
    pub radius: Rational,
    /// Real places: a rational isolating interval for the root.
    pub interval: Option<(Rational, Rational)>,
}

/// Number field Q[x]/(minpoly). Construct via [`field_create`].
#[derive(Debug)]
pub struct NumberField {
    pub min_poly: Poly,
    pub degree: usize,
    /// Places ordered: identity embedding first (the greatest real root when
    /// one exists, else the representative with greatest real part), then
    /// remaining real places by descending root, then complex-pair
    /// representatives by descending real part.
    pub places: Vec<Place>,
    /// Working precision in decimal digits.
    pub digits: u32,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

impl NumberField {
    pub fn real_place_count(&self) -> usize {
        self.places.iter().filter(|p| p.kind == PlaceKind::Real).count()
    }

    pub fn complex_pair_count(&self) -> usize {
        self.places.len() - self.real_place_count()
    }

    pub fn identity_place(&self) -> &Place {
        &self.places[0]
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_rational(self, Rational::from(0))
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_rational(self, Rational::from(1))
    }

    /// The power-basis generator (the class of x).
    pub fn gen(self: &Arc<Self>) -> FieldElement {
        let mut c = vec![Rational::from(0); self.degree];
        if self.degree == 1 {
            // x is congruent to the rational root
            let r = Rational::from(-&self.min_poly.c[0]);
            c[0] = r;
        } else {
            c[1] = Rational::from(1);
        }
        FieldElement {
            field: Arc::clone(self),
            c,
        }
    }

    /// Power-basis coordinates; short vectors are zero-padded.
    pub fn element(self: &Arc<Self>, mut coeffs: Vec<Rational>) -> FieldElement {
        assert!(coeffs.len() <= self.degree, "coefficient vector too long");
        coeffs.resize(self.degree, Rational::new());
        FieldElement {
            field: Arc::clone(self),
            c: coeffs,
        }
    }

    pub fn element_i64(self: &Arc<Self>, coeffs: &[i64]) -> FieldElement {
        self.element(coeffs.iter().map(|&x| Rational::from(x)).collect())
    }
}

/// Builds the rationals as a degree-1 field (minpoly x).
pub fn rational_field() -> Arc<NumberField> {
    field_create(Poly::from_i64(&[0, 1]), DEFAULT_DIGITS, false).expect("Q is constructible")
}

/// Constructs a number field: verifies monicity and irreducibility (degrees
/// above 4 need `assert_irreducible`), isolates all roots, classifies them
/// real/complex with certified separation, and fixes the place ordering.
pub fn field_create(
    min_poly: Poly,
    digits: u32,
    assert_irreducible: bool,
) -> Result<Arc<NumberField>, ExactError> {
    if min_poly.is_zero() || min_poly.deg() < 1 {
        return Err(ExactError::ReducibleMinPoly);
    }
    if !min_poly.is_monic() {
        return Err(ExactError::NonMonic);
    }
    let n = min_poly.deg();
    match min_poly.irreducible_over_q() {
        Some(true) => {}
        Some(false) => return Err(ExactError::ReducibleMinPoly),
        None => {
            if !assert_irreducible {
                return Err(ExactError::IrreducibilityUnverified(n));
            }
        }
    }
    let digits = digits.max(12);
    let store_bits = bits_for(MAX_PRECISION_FACTOR * digits);

    if n == 1 {
        let root = Rational::from(-&min_poly.c[0]);
        let place = Place {
            index: 0,
            kind: PlaceKind::Real,
            root: Cplx::from_real(float_from_rational(&root, store_bits)),
            radius: Rational::from(0),
            interval: Some((root.clone(), root)),
        };
        return Ok(Arc::new(NumberField {
            min_poly,
            degree: 1,
            places: vec![place],
            digits,
        }));
    }

    // Certified disjoint disks, escalating precision if separation fails.
    let mut disks = None;
    for factor in [2u32, 4, 8] {
        if let Some(d) = min_poly.certified_root_disks(factor * digits) {
            disks = Some(d);
            break;
        }
    }
    let disks = disks.ok_or(ExactError::PrecisionExhausted(8 * digits))?;

    // Real roots via Sturm isolation, then match each to its disk.
    let real_ivs = min_poly.isolate_real_roots();
    let mut real_places: Vec<Place> = vec![];
    let mut real_disk_ids = vec![false; disks.len()];
    let tiny = pow10_neg_rat(2 * digits);
    for iv in &real_ivs {
        let fine = min_poly.refine_root(iv.clone(), &tiny);
        let mid = Rational::from(&fine.0 + &fine.1) / Rational::from(2);
        // locate the unique disk containing this real root
        let mut owner = None;
        for (k, (c, r)) in disks.iter().enumerate() {
            let d = c.sub(&Cplx::from_real(float_from_rational(&mid, c.prec()))).abs();
            let rr = Float::with_val(c.prec(), r + &Float::with_val(c.prec(), float_from_rational(&Rational::from(&fine.1 - &fine.0), c.prec())));
            if d <= rr {
                owner = Some(k);
                break;
            }
        }
        let k = owner.ok_or(ExactError::PrecisionExhausted(8 * digits))?;
        real_disk_ids[k] = true;
        // Newton polish at storage precision from the rational midpoint
        let root = newton_real(&min_poly, &mid, store_bits);
        real_places.push(Place {
            index: 0,
            kind: PlaceKind::Real,
            root: Cplx::from_real(root),
            radius: Rational::from(&fine.1 - &fine.0),
            interval: Some(fine),
        });
    }

    // Remaining disks hold complex roots; keep Im > 0 representatives.
    let mut complex_places: Vec<Place> = vec![];
    for (k, (c, r)) in disks.iter().enumerate() {
        if real_disk_ids[k] {
            continue;
        }
        if c.im.is_sign_negative() {
            continue;
        }
        let root = newton_cplx(&min_poly, c, store_bits);
        let rad = Float::with_val(53, r).to_rational().unwrap_or_else(|| Rational::from(1));
        complex_places.push(Place {
            index: 0,
            kind: PlaceKind::Complex,
            root,
            radius: rad,
            interval: None,
        });
    }
    let expected_pairs = (n - real_places.len()) / 2;
    if complex_places.len() != expected_pairs {
        return Err(ExactError::PrecisionExhausted(8 * digits));
    }

    // Ordering: identity first, then reals descending, then complex
    // representatives by descending real part.
    real_places.sort_by(|a, b| {
        b.interval.as_ref().unwrap().0.cmp(&a.interval.as_ref().unwrap().0)
    });
    complex_places.sort_by(|a, b| {
        b.root.re.partial_cmp(&a.root.re).unwrap_or(Ordering::Equal)
    });
    let mut places = vec![];
    places.extend(real_places);
    places.extend(complex_places);
    for (i, p) in places.iter_mut().enumerate() {
        p.index = i;
    }

    Ok(Arc::new(NumberField {
        min_poly,
        degree: n,
        places,
        digits,
    }))
}

fn newton_real(p: &Poly, start: &Rational, bits: u32) -> Float {
    let dp = p.derivative();
    let mut x = float_from_rational(start, bits);
    for _ in 0..64 {
        let f = p.eval_float(&x);
        let d = dp.eval_float(&x);
        if d.is_zero() {
            break;
        }
        let step = Float::with_val(bits, &f / &d);
        let done = step.clone().abs() < Float::with_val(bits, Float::i_exp(1, 8 - bits as i32));
        x -= step;
        if done {
            break;
        }
    }
    x
}

fn newton_cplx(p: &Poly, start: &Cplx, bits: u32) -> Cplx {
    let dp = p.derivative();
    let mut z = Cplx::new(
        Float::with_val(bits, &start.re),
        Float::with_val(bits, &start.im),
    );
    for _ in 0..64 {
        let f = p.eval_cplx(&z);
        let d = dp.eval_cplx(&z);
        if d.is_zero() {
            break;
        }
        let step = f.div(&d);
        let done = step.abs() < Float::with_val(bits, Float::i_exp(1, 8 - bits as i32));
        z = z.sub(&step);
        if done {
            break;
        }
    }
    z
}

/// An element of a number field in the power basis.
#[derive(Clone)]
pub struct FieldElement {
    pub field: Arc<NumberField>,
    pub c: Vec<Rational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}
impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, q) in self.c.iter().enumerate() {
            if q.cmp0() == Ordering::Equal {
                continue;
            }
            let neg = q.cmp0() == Ordering::Less;
            let mag = Rational::from(q.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{}", mag)?;
            } else {
                if mag != Rational::from(1) {
                    write!(f, "{}*", mag)?;
                }
                if i == 1 {
                    write!(f, "a")?;
                } else {
                    write!(f, "a^{}", i)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> FieldElement {
        let mut c = vec![Rational::from(0); field.degree];
        c[0] = q;
        FieldElement {
            field: Arc::clone(field),
            c,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.cmp0() == Ordering::Equal)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|x| x.cmp0() == Ordering::Equal)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn rep_poly(&self) -> Poly {
        Poly::new(self.c.clone())
    }

    fn from_rep(field: &Arc<NumberField>, p: Poly) -> FieldElement {
        let (_, r) = p.divrem(&field.min_poly);
        let mut c = r.c;
        c.resize(field.degree, Rational::from(0));
        FieldElement {
            field: Arc::clone(field),
            c,
        }
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.field.min_poly, o.field.min_poly);
        FieldElement {
            field: Arc::clone(&self.field),
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.field.min_poly, o.field.min_poly);
        FieldElement {
            field: Arc::clone(&self.field),
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| Rational::from(a - b))
                .collect(),
        }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            c: self.c.iter().map(|a| Rational::from(-a)).collect(),
        }
    }

    pub fn mul(&self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.field.min_poly, o.field.min_poly);
        FieldElement::from_rep(&self.field, self.rep_poly().mul(&o.rep_poly()))
    }

    pub fn scale(&self, q: &Rational) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            c: self.c.iter().map(|a| Rational::from(a * q)).collect(),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> FieldElement {
        assert!(!self.is_zero(), "inverse of zero field element");
        let (g, s, _) = self.rep_poly().xgcd(&self.field.min_poly);
        assert_eq!(g.degree(), Some(0), "minimal polynomial not irreducible?");
        let ginv = Rational::from(g.c[0].recip_ref());
        FieldElement::from_rep(&self.field, s.scale(&ginv))
    }

    pub fn div(&self, o: &FieldElement) -> FieldElement {
        self.mul(&o.inv())
    }

    pub fn pow_u(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = FieldElement::from_rational(&self.field, Rational::from(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Numeric evaluation at a place. Precision is capped by the stored
    /// root precision.
    pub fn embed(&self, place: &Place, bits: u32) -> Cplx {
        let b = bits.min(place.root.prec());
        let root = Cplx::new(
            Float::with_val(b, &place.root.re),
            Float::with_val(b, &place.root.im),
        );
        self.rep_poly().eval_cplx(&root)
    }

    pub fn embed_default(&self, place: &Place) -> Cplx {
        self.embed(place, bits_for(2 * self.field.digits))
    }

    /// Certified sign at a real place. Zero is returned only on exact
    /// cancellation; otherwise the isolating interval is refined until the
    /// interval evaluation excludes zero.
    pub fn certified_sign(&self, place: &Place) -> Result<Ordering, ExactError> {
        if place.kind != PlaceKind::Real {
            return Err(ExactError::WrongPlaceKind {
                expected: "real",
                got: place.kind.name(),
            });
        }
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if self.is_rational() {
            return Ok(self.c[0].cmp0());
        }
        let rep = self.rep_poly();
        let (mut lo, mut hi) = place.interval.clone().expect("real place interval");
        let p = self.field.digits;
        for stage in [p, 2 * p, 4 * p] {
            let width = pow10_neg_rat(stage);
            let refined = self.field.min_poly.refine_root((lo, hi), &width);
            lo = refined.0;
            hi = refined.1;
            let (a, b) = rep.eval_interval(&lo, &hi);
            if a.cmp0() == Ordering::Greater {
                return Ok(Ordering::Greater);
            }
            if b.cmp0() == Ordering::Less {
                return Ok(Ordering::Less);
            }
        }
        Err(ExactError::PrecisionExhausted(
            MAX_PRECISION_FACTOR * self.field.digits,
        ))
    }

    /// Sign of the real part of the evaluation at any place.
    pub fn certified_sign_re(&self, place: &Place) -> Result<Ordering, ExactError> {
        if place.kind == PlaceKind::Real {
            return self.certified_sign(place);
        }
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        // Re = 0 iff the value is purely imaginary iff value^2 is real <= 0.
        let sq = self.mul(self);
        let (sq_real, sq_sign) = sq.realness_data(place)?;
        if sq_real {
            match sq_sign.expect("sign accompanies a real verdict") {
                Ordering::Less => return Ok(Ordering::Equal),
                Ordering::Equal => return Ok(Ordering::Equal),
                Ordering::Greater => {
                    // value^2 real positive means the value itself is real
                    let (_, s) = self.realness_data(place)?;
                    return Ok(s.expect("real value sign"));
                }
            }
        }
        // Re != 0: refine the enclosure until it clears the imaginary axis.
        self.enclosure_sign(place, |z| z.re.clone())
    }

    /// Sign of the imaginary part at a complex place; Equal means the
    /// evaluation is exactly real.
    pub fn certified_sign_im(&self, place: &Place) -> Result<Ordering, ExactError> {
        if place.kind == PlaceKind::Real {
            return Ok(Ordering::Equal);
        }
        if self.is_zero() || self.is_rational() {
            return Ok(Ordering::Equal);
        }
        let (real, _) = self.realness_data(place)?;
        if real {
            return Ok(Ordering::Equal);
        }
        self.enclosure_sign(place, |z| z.im.clone())
    }

    /// True iff the evaluation at the place is exactly real.
    pub fn is_real_at(&self, place: &Place) -> Result<bool, ExactError> {
        Ok(self.certified_sign_im(place)? == Ordering::Equal)
    }

    /// Realness verdict at a place, with the certified sign when real:
    /// (is_real, sign if real).
    ///
    /// The value's conjugates are exactly the roots of its minimal
    /// polynomial; the evaluation is certified to coincide with a specific
    /// root by disk matching, and realness plus sign are read off that root.
    fn realness_data(&self, place: &Place) -> Result<(bool, Option<Ordering>), ExactError> {
        if self.is_rational() {
            return Ok((true, Some(self.c[0].cmp0())));
        }
        if place.kind == PlaceKind::Real {
            return Ok((true, Some(self.certified_sign(place)?)));
        }
        let m = self.min_poly();
        if m.count_real_roots() == 0 {
            return Ok((false, None));
        }
        let p = self.field.digits;
        for stage in [2 * p, 4 * p] {
            let disks = match m.certified_root_disks(stage) {
                Some(d) => d,
                None => continue,
            };
            let real_mark = match mark_real_disks(&m, &disks, stage) {
                Some(v) => v,
                None => continue,
            };
            // enclose the evaluation at this place and match one disk
            let (center, rad) = self.value_enclosure(place);
            if let Some(k) = unique_disk_hit(&disks, &center, &rad) {
                return Ok(match real_mark[k] {
                    Some(s) => (true, Some(s)),
                    None => (false, None),
                });
            }
        }
        Err(ExactError::PrecisionExhausted(
            MAX_PRECISION_FACTOR * self.field.digits,
        ))
    }

    /// Numeric enclosure of the evaluation: center plus a rigorous radius
    /// combining the place-root disk radius with an evaluation Lipschitz
    /// bound and float slack.
    fn value_enclosure(&self, place: &Place) -> (Cplx, Float) {
        let bits = place.root.prec();
        let center = self.embed(place, bits);
        // |p(z) - p(z0)| <= r * sum i*|c_i| * (|z0|+r)^(i-1), bounded crudely
        let zmag = Float::with_val(bits, 1 + place.root.abs());
        let n = self.field.degree as u32;
        let pw = zmag.pow(n);
        let csum: Rational = self.c.iter().map(|c| Rational::from(c.abs_ref())).sum();
        let csf = float_from_rational(&csum, bits);
        let nn = Float::with_val(bits, n);
        let rad_f = float_from_rational(&place.radius, bits);
        let lip = Float::with_val(bits, &nn * &pw) * &csf;
        let slack = Float::with_val(bits, Float::i_exp(1, 16 - bits as i32));
        let rad = Float::with_val(bits, &rad_f * &lip) + Float::with_val(bits, &slack * &pw) * &csf;
        (center, rad)
    }

    /// Sign of a coordinate (Re or Im) already certified nonzero: shrink the
    /// enclosure; the fixed construction radius suffices for any value whose
    /// coordinate is not absurdly close to zero, and the ladder errors out
    /// honestly otherwise.
    fn enclosure_sign(
        &self,
        place: &Place,
        coord: impl Fn(&Cplx) -> Float,
    ) -> Result<Ordering, ExactError> {
        let (center, rad) = self.value_enclosure(place);
        let v = coord(&center);
        if v.clone().abs() > rad {
            return Ok(v.cmp0().unwrap_or(Ordering::Equal));
        }
        Err(ExactError::PrecisionExhausted(
            MAX_PRECISION_FACTOR * self.field.digits,
        ))
    }

    /// Monic minimal polynomial over Q, via exact linear algebra on the
    /// power vectors 1, x, x^2, ...
    pub fn min_poly(&self) -> Poly {
        let n = self.field.degree;
        let mut powers: Vec<Vec<Rational>> = vec![];
        let mut acc = FieldElement::from_rational(&self.field, Rational::from(1));
        powers.push(acc.c.clone());
        for k in 1..=n {
            acc = acc.mul(self);
            powers.push(acc.c.clone());
            if let Some(rel) = linear_relation(&powers, n) {
                debug_assert_eq!(rel.len(), k + 1);
                return Poly::new(rel);
            }
        }
        unreachable!("an element of a degree-n field satisfies a degree <= n relation");
    }

    /// True iff the minimal polynomial has integer coefficients.
    pub fn is_algebraic_integer(&self) -> bool {
        self.min_poly()
            .c
            .iter()
            .all(|q| *q.denom() == rug::Integer::from(1))
    }
}

fn pow10_neg_rat(digits: u32) -> Rational {
    Rational::from((rug::Integer::from(1), rug::Integer::from(10).pow(digits)))
}

/// Marks which certified root disks of m contain real roots, recording the
/// certified sign of each such root. None when a real root cannot be matched
/// to a unique disk at this precision.
fn mark_real_disks(
    m: &Poly,
    disks: &[(Cplx, Float)],
    stage: u32,
) -> Option<Vec<Option<Ordering>>> {
    let tiny = pow10_neg_rat(stage);
    let mut real_mark: Vec<Option<Ordering>> = vec![None; disks.len()];
    for iv in m.isolate_real_roots() {
        let fine = m.refine_root(iv, &tiny);
        let mid = Rational::from(&fine.0 + &fine.1) / Rational::from(2);
        let mut owner = None;
        for (k, (c, r)) in disks.iter().enumerate() {
            let d = c
                .sub(&Cplx::from_real(float_from_rational(&mid, c.prec())))
                .abs();
            let slack = float_from_rational(&Rational::from(&fine.1 - &fine.0), c.prec());
            if d <= Float::with_val(c.prec(), r + &slack) {
                owner = Some(k);
                break;
            }
        }
        let k = owner?;
        // sign of this real root, from its isolating interval
        let s = if fine.0.cmp0() == Ordering::Greater {
            Ordering::Greater
        } else if fine.1.cmp0() == Ordering::Less {
            Ordering::Less
        } else if m.sign_at(&Rational::from(0)) == Ordering::Equal {
            Ordering::Equal
        } else {
            let finer = m.refine_root(fine.clone(), &pow10_neg_rat(2 * stage));
            finer.0.cmp0()
        };
        real_mark[k] = Some(s);
    }
    Some(real_mark)
}

/// Index of the single disk an enclosure intersects, if unique.
fn unique_disk_hit(disks: &[(Cplx, Float)], center: &Cplx, rad: &Float) -> Option<usize> {
    let mut hit = None;
    for (k, (c, r)) in disks.iter().enumerate() {
        let d = center.sub(c).abs();
        if d <= Float::with_val(c.prec(), r + rad) {
            if hit.is_some() {
                return None;
            }
            hit = Some(k);
        }
    }
    hit
}

/// If the last vector is a rational combination of the previous ones,
/// returns the monic relation coefficients c_0..c_k (c_k = 1) with
/// sum c_i * v_i = 0; otherwise None.
fn linear_relation(vectors: &[Vec<Rational>], dim: usize) -> Option<Vec<Rational>> {
    let k = vectors.len() - 1;
    // solve sum_{i<k} t_i v_i = v_k by Gaussian elimination
    let mut m: Vec<Vec<Rational>> = vec![vec![Rational::from(0); k + 1]; dim];
    for (i, v) in vectors[..k].iter().enumerate() {
        for (r, val) in v.iter().enumerate() {
            m[r][i] = val.clone();
        }
    }
    for (r, val) in vectors[k].iter().enumerate() {
        m[r][k] = val.clone();
    }
    let mut row = 0;
    let mut pivots = vec![];
    for col in 0..k {
        let mut sel = None;
        for r in row..dim {
            if m[r][col].cmp0() != Ordering::Equal {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        m.swap(row, sel);
        let inv = Rational::from(m[row][col].recip_ref());
        for c in col..=k {
            m[row][c] *= &inv;
        }
        for r in 0..dim {
            if r != row && m[r][col].cmp0() != Ordering::Equal {
                let f = m[r][col].clone();
                for c in col..=k {
                    let t = Rational::from(&m[row][c] * &f);
                    m[r][c] -= t;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == dim {
            break;
        }
    }
    // consistent iff no row has 0 ... 0 | nonzero
    for r in row..dim {
        if m[r][k].cmp0() != Ordering::Equal {
            return None;
        }
    }
    let mut t = vec![Rational::from(0); k];
    for (r, col) in &pivots {
        t[*col] = m[*r][k].clone();
    }
    let mut rel: Vec<Rational> = t.into_iter().map(|x| Rational::from(-x)).collect();
    rel.push(Rational::from(1));
    Some(rel)
}

/// Smallest Q-subalgebra of the field containing 1 and the given elements:
/// returns (degree, basis). Closes the span under multiplication until the
/// dimension stabilizes.
pub fn subfield_generated(xs: &[FieldElement]) -> (usize, Vec<FieldElement>) {
    assert!(!xs.is_empty(), "subfield_generated needs at least one element");
    let field = &xs[0].field;
    let n = field.degree;
    let mut basis: Vec<Vec<Rational>> = vec![];
    let one = FieldElement::from_rational(field, Rational::from(1));
    insert_into_basis(&mut basis, one.c.clone(), n);
    for x in xs {
        insert_into_basis(&mut basis, x.c.clone(), n);
    }
    loop {
        let dim = basis.len();
        let elems: Vec<FieldElement> = basis
            .iter()
            .map(|c| FieldElement {
                field: Arc::clone(field),
                c: c.clone(),
            })
            .collect();
        for x in xs {
            for b in &elems {
                let prod = b.mul(x);
                insert_into_basis(&mut basis, prod.c, n);
            }
        }
        // also close basis x basis to guarantee a subring
        let elems: Vec<FieldElement> = basis
            .iter()
            .map(|c| FieldElement {
                field: Arc::clone(field),
                c: c.clone(),
            })
            .collect();
        for i in 0..elems.len() {
            for j in i..elems.len() {
                let prod = elems[i].mul(&elems[j]);
                insert_into_basis(&mut basis, prod.c, n);
            }
        }
        if basis.len() == dim {
            break;
        }
    }
    let out = basis
        .iter()
        .map(|c| FieldElement {
            field: Arc::clone(field),
            c: c.clone(),
        })
        .collect();
    (basis.len(), out)
}

/// Reduces v against the row-echelon basis; inserts the remainder if
/// nonzero. Returns true when the basis grew.
fn insert_into_basis(basis: &mut Vec<Vec<Rational>>, mut v: Vec<Rational>, n: usize) -> bool {
    for b in basis.iter() {
        let lead = b.iter().position(|x| x.cmp0() != Ordering::Equal).unwrap();
        if v[lead].cmp0() != Ordering::Equal {
            let f = v[lead].clone();
            for i in 0..n {
                let t = Rational::from(&b[i] * &f);
                v[i] -= t;
            }
        }
    }
    if let Some(lead) = v.iter().position(|x| x.cmp0() != Ordering::Equal) {
        let inv = Rational::from(v[lead].recip_ref());
        for x in v.iter_mut() {
            *x *= &inv;
        }
        basis.push(v);
        basis.sort_by_key(|b| b.iter().position(|x| x.cmp0() != Ordering::Equal).unwrap());
        true
    } else {
        false
    }
}

// ---------------------------------------------------------------------------
// Quadratic towers K(sqrt(a))
// ---------------------------------------------------------------------------

/// Which square root of the base evaluation a tower place uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Real base place, positive evaluation of a: +sqrt.
    Plus,
    /// Real base place, positive evaluation of a: -sqrt.
    Minus,
    /// Real base place, negative evaluation: +i*sqrt(|a|) (representative).
    Imag,
    /// Complex base place: principal square root.
    Principal,
    /// Complex base place: negated principal square root.
    Negated,
}

/// A place of the quadratic extension: a base place plus a branch of
/// sqrt(a), with the branch value frozen at construction.
#[derive(Debug, Clone)]
pub struct TowerPlace {
    pub index: usize,
    pub base_place: usize,
    pub branch: Branch,
    pub kind: PlaceKind,
    /// sqrt(a) evaluated on this branch at storage precision.
    pub sqrt_value: Cplx,
}

/// K(sqrt(a)) as explicit pairs over the base field; `a` nonzero and not
/// required to be a non-square (degenerate towers stay formal).
#[derive(Debug)]
pub struct Tower {
    pub base: Arc<NumberField>,
    pub a: FieldElement,
    pub places: Vec<TowerPlace>,
}

pub fn tower_create(base: &Arc<NumberField>, a: FieldElement) -> Result<Arc<Tower>, ExactError> {
    if a.is_zero() {
        return Err(ExactError::ZeroParameter);
    }
    let bits = bits_for(MAX_PRECISION_FACTOR * base.digits);
    let mut places = vec![];
    for bp in &base.places {
        match bp.kind {
            PlaceKind::Real => {
                let s = a.certified_sign(bp)?;
                match s {
                    Ordering::Greater => {
                        let av = a.embed(bp, bits);
                        let r = av.re.clone().sqrt();
                        places.push(TowerPlace {
                            index: 0,
                            base_place: bp.index,
                            branch: Branch::Plus,
                            kind: PlaceKind::Real,
                            sqrt_value: Cplx::from_real(r.clone()),
                        });
                        places.push(TowerPlace {
                            index: 0,
                            base_place: bp.index,
                            branch: Branch::Minus,
                            kind: PlaceKind::Real,
                            sqrt_value: Cplx::from_real(-r),
                        });
                    }
                    Ordering::Less => {
                        let av = a.embed(bp, bits);
                        let r = Float::with_val(bits, -&av.re).sqrt();
                        places.push(TowerPlace {
                            index: 0,
                            base_place: bp.index,
                            branch: Branch::Imag,
                            kind: PlaceKind::Complex,
                            sqrt_value: Cplx::new(Float::with_val(bits, 0), r),
                        });
                    }
                    Ordering::Equal => return Err(ExactError::ZeroParameter),
                }
            }
            PlaceKind::Complex => {
                let av = a.embed(bp, bits);
                let w = av.sqrt();
                places.push(TowerPlace {
                    index: 0,
                    base_place: bp.index,
                    branch: Branch::Principal,
                    kind: PlaceKind::Complex,
                    sqrt_value: w.clone(),
                });
                places.push(TowerPlace {
                    index: 0,
                    base_place: bp.index,
                    branch: Branch::Negated,
                    kind: PlaceKind::Complex,
                    sqrt_value: w.neg(),
                });
            }
        }
    }
    for (i, p) in places.iter_mut().enumerate() {
        p.index = i;
    }
    Ok(Arc::new(Tower {
        base: Arc::clone(base),
        a,
        places,
    }))
}

/// u + v*sqrt(a) over the tower's base field.
#[derive(Clone)]
pub struct TElem {
    pub tower: Arc<Tower>,
    pub u: FieldElement,
    pub v: FieldElement,
}

impl PartialEq for TElem {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v
    }
}
impl Eq for TElem {}

impl std::hash::Hash for TElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.u.hash(state);
        self.v.hash(state);
    }
}

impl fmt::Debug for TElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl TElem {
    pub fn new(tower: &Arc<Tower>, u: FieldElement, v: FieldElement) -> TElem {
        TElem {
            tower: Arc::clone(tower),
            u,
            v,
        }
    }

    pub fn from_base(tower: &Arc<Tower>, u: FieldElement) -> TElem {
        let v = FieldElement::from_rational(&tower.base, Rational::from(0));
        TElem::new(tower, u, v)
    }

    pub fn zero(tower: &Arc<Tower>) -> TElem {
        let z = FieldElement::from_rational(&tower.base, Rational::from(0));
        TElem::new(tower, z.clone(), z)
    }

    pub fn one(tower: &Arc<Tower>) -> TElem {
        let o = FieldElement::from_rational(&tower.base, Rational::from(1));
        let z = FieldElement::from_rational(&tower.base, Rational::from(0));
        TElem::new(tower, o, z)
    }

    pub fn sqrt_gen(tower: &Arc<Tower>) -> TElem {
        let o = FieldElement::from_rational(&tower.base, Rational::from(1));
        let z = FieldElement::from_rational(&tower.base, Rational::from(0));
        TElem::new(tower, z, o)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_base(&self) -> bool {
        self.v.is_zero()
    }

    pub fn add(&self, o: &TElem) -> TElem {
        TElem::new(&self.tower, self.u.add(&o.u), self.v.add(&o.v))
    }

    pub fn sub(&self, o: &TElem) -> TElem {
        TElem::new(&self.tower, self.u.sub(&o.u), self.v.sub(&o.v))
    }

    pub fn neg(&self) -> TElem {
        TElem::new(&self.tower, self.u.neg(), self.v.neg())
    }

    pub fn mul(&self, o: &TElem) -> TElem {
        let a = &self.tower.a;
        let u = self.u.mul(&o.u).add(&a.mul(&self.v.mul(&o.v)));
        let v = self.u.mul(&o.v).add(&self.v.mul(&o.u));
        TElem::new(&self.tower, u, v)
    }

    /// Galois conjugate over the base: u - v*sqrt(a).
    pub fn conj_sqrt(&self) -> TElem {
        TElem::new(&self.tower, self.u.clone(), self.v.neg())
    }

    /// Field norm to the base: u^2 - a v^2.
    pub fn norm_to_base(&self) -> FieldElement {
        self.u
            .mul(&self.u)
            .sub(&self.tower.a.mul(&self.v.mul(&self.v)))
    }

    /// Inverse when the norm is nonzero (always true for non-degenerate
    /// towers and nonzero elements).
    pub fn inv(&self) -> Option<TElem> {
        let n = self.norm_to_base();
        if n.is_zero() {
            return None;
        }
        let ni = n.inv();
        Some(TElem::new(
            &self.tower,
            self.u.mul(&ni),
            self.v.neg().mul(&ni),
        ))
    }

    pub fn scale_rat(&self, q: &Rational) -> TElem {
        TElem::new(&self.tower, self.u.scale(q), self.v.scale(q))
    }

    pub fn embed(&self, tp: &TowerPlace, bits: u32) -> Cplx {
        let bp = &self.tower.base.places[tp.base_place];
        let b = bits.min(tp.sqrt_value.prec());
        let uu = self.u.embed(bp, b);
        let vv = self.v.embed(bp, b);
        let w = Cplx::new(
            Float::with_val(b, &tp.sqrt_value.re),
            Float::with_val(b, &tp.sqrt_value.im),
        );
        uu.add(&vv.mul(&w))
    }

    /// Certified sign at a real tower place: exact zero detection first,
    /// then interval refinement combining the base-root interval with a
    /// rational sqrt enclosure.
    pub fn certified_sign(&self, tp: &TowerPlace) -> Result<Ordering, ExactError> {
        if tp.kind != PlaceKind::Real {
            return Err(ExactError::WrongPlaceKind {
                expected: "real",
                got: "complex",
            });
        }
        let bp = &self.tower.base.places[tp.base_place];
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if self.v.is_zero() {
            return self.u.certified_sign(bp);
        }
        let sigma = match tp.branch {
            Branch::Plus => 1,
            Branch::Minus => -1,
            _ => unreachable!("real tower place has a real branch"),
        };
        if self.u.is_zero() {
            let sv = self.v.certified_sign(bp)?;
            return Ok(if sigma > 0 { sv } else { sv.reverse() });
        }
        // exact-zero test: u = -sigma*sqrt(a)*v  <=>  u^2 = a v^2 and the
        // signs of u and sigma*v are opposite
        let nrm = self.norm_to_base();
        if nrm.is_zero() {
            let su = self.u.certified_sign(bp)?;
            let mut sv = self.v.certified_sign(bp)?;
            if sigma < 0 {
                sv = sv.reverse();
            }
            if su != sv {
                return Ok(Ordering::Equal);
            }
        }
        // the value is provably nonzero; refine intervals until decided
        let digits = self.tower.base.digits;
        let rep_u = Poly::new(self.u.c.clone());
        let rep_v = Poly::new(self.v.c.clone());
        let rep_a = Poly::new(self.tower.a.c.clone());
        let (mut lo, mut hi) = bp.interval.clone().expect("real base place interval");
        for stage in [digits, 2 * digits, 4 * digits] {
            let width = pow10_neg_rat(stage);
            if self.tower.base.degree > 1 {
                let refined = self.tower.base.min_poly.refine_root((lo, hi), &width);
                lo = refined.0;
                hi = refined.1;
            }
            let (ulo, uhi) = rep_u.eval_interval(&lo, &hi);
            let (vlo, vhi) = rep_v.eval_interval(&lo, &hi);
            let (alo, ahi) = rep_a.eval_interval(&lo, &hi);
            if alo.cmp0() != Ordering::Greater {
                continue; // interval for a still touches zero; refine more
            }
            let (slo, shi) = sqrt_interval(&alo, &ahi, stage);
            let (slo, shi) = if sigma > 0 {
                (slo, shi)
            } else {
                (Rational::from(-&shi), Rational::from(-&slo))
            };
            // value interval = u + s*v
            let cands = [
                Rational::from(&slo * &vlo),
                Rational::from(&slo * &vhi),
                Rational::from(&shi * &vlo),
                Rational::from(&shi * &vhi),
            ];
            let pmin = cands.iter().min().unwrap().clone();
            let pmax = cands.iter().max().unwrap().clone();
            let tot_lo = Rational::from(&ulo + &pmin);
            let tot_hi = Rational::from(&uhi + &pmax);
            if tot_lo.cmp0() == Ordering::Greater {
                return Ok(Ordering::Greater);
            }
            if tot_hi.cmp0() == Ordering::Less {
                return Ok(Ordering::Less);
            }
        }
        Err(ExactError::PrecisionExhausted(
            MAX_PRECISION_FACTOR * digits,
        ))
    }

    /// Exact realness of the evaluation at a tower place.
    pub fn is_real_at(&self, tp: &TowerPlace) -> Result<bool, ExactError> {
        Ok(self.realness_data(tp)?.0)
    }

    /// Realness verdict at a tower place with the certified sign when real.
    pub fn realness_data(&self, tp: &TowerPlace) -> Result<(bool, Option<Ordering>), ExactError> {
        let bp = &self.tower.base.places[tp.base_place];
        match (tp.kind, tp.branch) {
            (PlaceKind::Real, _) => Ok((true, Some(self.certified_sign(tp)?))),
            (PlaceKind::Complex, Branch::Imag) => {
                // value = u + i*sqrt(|a|)*v with u, v evaluating real here
                if self.v.is_zero() {
                    Ok((true, Some(self.u.certified_sign(bp)?)))
                } else {
                    Ok((false, None))
                }
            }
            _ => {
                // complex base place: realness via the annihilator over Q
                if self.is_base() {
                    return self.u.realness_data(bp);
                }
                let m = self.min_poly_ann();
                if m.deg() == 1 {
                    return Ok((true, Some(m.c[0].cmp0().reverse())));
                }
                if m.count_real_roots() == 0 {
                    return Ok((false, None));
                }
                self.realness_by_disks(&m, tp)
            }
        }
    }

    /// Sign of the imaginary part of the evaluation; Equal means exactly
    /// real.
    pub fn im_sign_at(&self, tp: &TowerPlace) -> Result<Ordering, ExactError> {
        let bp = &self.tower.base.places[tp.base_place];
        match (tp.kind, tp.branch) {
            (PlaceKind::Real, _) => Ok(Ordering::Equal),
            (PlaceKind::Complex, Branch::Imag) => self.v.certified_sign(bp),
            _ => {
                if self.is_base() {
                    return self.u.certified_sign_im(bp);
                }
                let (real, _) = self.realness_data(tp)?;
                if real {
                    return Ok(Ordering::Equal);
                }
                let (center, rad) = self.enclosure(tp);
                if center.im.clone().abs() > rad {
                    return Ok(center.im.cmp0().unwrap_or(Ordering::Equal));
                }
                Err(ExactError::PrecisionExhausted(
                    MAX_PRECISION_FACTOR * self.tower.base.digits,
                ))
            }
        }
    }

    /// Minimal polynomial over Q via the flattened 2n-dimensional
    /// representation of the tower.
    pub fn min_poly_ann(&self) -> Poly {
        let n = self.tower.base.degree;
        let dim = 2 * n;
        let flat = |t: &TElem| -> Vec<Rational> {
            let mut v = Vec::with_capacity(dim);
            v.extend(t.u.c.iter().cloned());
            v.extend(t.v.c.iter().cloned());
            v
        };
        let mut powers: Vec<Vec<Rational>> = vec![];
        let mut acc = TElem::one(&self.tower);
        powers.push(flat(&acc));
        for _ in 1..=dim {
            acc = acc.mul(self);
            powers.push(flat(&acc));
            if let Some(rel) = linear_relation(&powers, dim) {
                return Poly::new(rel);
            }
        }
        unreachable!("tower element satisfies a relation of degree <= 2n");
    }

    fn realness_by_disks(
        &self,
        m: &Poly,
        tp: &TowerPlace,
    ) -> Result<(bool, Option<Ordering>), ExactError> {
        let digits = self.tower.base.digits;
        for stage in [2 * digits, 4 * digits] {
            let disks = match m.certified_root_disks(stage) {
                Some(d) => d,
                None => continue,
            };
            let real_mark = match mark_real_disks(m, &disks, stage) {
                Some(v) => v,
                None => continue,
            };
            let (center, rad) = self.enclosure(tp);
            if let Some(k) = unique_disk_hit(&disks, &center, &rad) {
                return Ok(match real_mark[k] {
                    Some(s) => (true, Some(s)),
                    None => (false, None),
                });
            }
        }
        Err(ExactError::PrecisionExhausted(
            MAX_PRECISION_FACTOR * digits,
        ))
    }

    /// Enclosure of the evaluation at a tower place: center plus a rigorous
    /// radius from the base-root disk radius, a crude Lipschitz bound, and
    /// float slack.
    fn enclosure(&self, tp: &TowerPlace) -> (Cplx, Float) {
        let bits = tp.sqrt_value.prec();
        let center = self.embed(tp, bits);
        let bp = &self.tower.base.places[tp.base_place];
        let base_rad = float_from_rational(&bp.radius, bits);
        let deriv_scale = {
            let csum_u: Rational = self.u.c.iter().map(|c| Rational::from(c.abs_ref())).sum();
            let csum_v: Rational = self.v.c.iter().map(|c| Rational::from(c.abs_ref())).sum();
            let csum_a: Rational = self
                .tower
                .a
                .c
                .iter()
                .map(|c| Rational::from(c.abs_ref()))
                .sum();
            let sum = csum_u + csum_v + csum_a + Rational::from(4);
            let zmag = Float::with_val(bits, 1 + bp.root.abs());
            let pw = zmag.pow(2 * self.tower.base.degree as u32);
            Float::with_val(bits, &pw * &float_from_rational(&sum, bits))
        };
        let slack = Float::with_val(bits, Float::i_exp(1, 16 - bits as i32));
        let rad = Float::with_val(bits, &base_rad * &deriv_scale)
            + Float::with_val(bits, &slack * &deriv_scale);
        (center, rad)
    }
}

impl fmt::Display for TElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return write!(f, "{}", self.u);
        }
        if self.u.is_zero() {
            return write!(f, "({})*s", self.v);
        }
        write!(f, "({}) + ({})*s", self.u, self.v)
    }
}

/// Common interface over exact scalars — base-field elements and quadratic
/// tower elements — so the matrix layer is written once for both.
pub trait Scalar: Clone + Eq + std::hash::Hash + fmt::Display + fmt::Debug {
    /// The archimedean place type this scalar evaluates at.
    type Pl: Clone + fmt::Debug;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Constants carrying this scalar's field context.
    fn from_i64_like(&self, n: i64) -> Self;
    fn digits(&self) -> u32;
    fn kind_of(pl: &Self::Pl) -> PlaceKind;
    fn place_index(pl: &Self::Pl) -> usize;
    fn embed_at(&self, pl: &Self::Pl, bits: u32) -> Cplx;
    /// Some(sign) when the evaluation is exactly real, None otherwise.
    fn real_sign_at(&self, pl: &Self::Pl) -> Result<Option<Ordering>, ExactError>;
    /// Sign of the imaginary part of the evaluation; Equal means exactly
    /// real.
    fn im_sign_at(&self, pl: &Self::Pl) -> Result<Ordering, ExactError>;
    /// Monic annihilator over Q.
    fn min_poly_q(&self) -> Poly;
    /// Degree over Q of the ambient field the scalar lives in.
    fn ambient_degree(&self) -> usize;
    /// Certified enclosure of the evaluation at a place: the true value
    /// lies within the returned radius of the returned center.
    fn enclosure_at(&self, pl: &Self::Pl) -> (Cplx, Float);
    /// True when PSL sign canonicalization should negate an object whose
    /// first nonzero entry is this scalar.
    fn canon_flip(&self) -> bool;

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }
    fn zero_like(&self) -> Self {
        self.from_i64_like(0)
    }
}

/// Decides exactly whether two archimedean evaluations of the same scalar
/// coincide: both values are roots of the scalar's minimal polynomial, so
/// certified enclosures matched against certified root disks settle the
/// question (identical disk index means identical value).
pub fn values_equal_at<S: Scalar>(x: &S, p1: &S::Pl, p2: &S::Pl) -> Result<bool, ExactError> {
    if S::place_index(p1) == S::place_index(p2) {
        return Ok(true);
    }
    if x.is_zero() {
        return Ok(true);
    }
    let mp = x.min_poly_q();
    if mp.deg() <= 1 {
        // rational value: every place agrees
        return Ok(true);
    }
    let digits = x.digits();
    let (c1, r1) = x.enclosure_at(p1);
    let (c2, r2) = x.enclosure_at(p2);
    for stage in [2 * digits, 4 * digits] {
        let Some(disks) = mp.certified_root_disks(stage) else {
            continue;
        };
        let h1 = unique_disk_hit(&disks, &c1, &r1);
        let h2 = unique_disk_hit(&disks, &c2, &r2);
        if let (Some(i), Some(j)) = (h1, h2) {
            return Ok(i == j);
        }
    }
    Err(ExactError::PrecisionExhausted(
        MAX_PRECISION_FACTOR * digits,
    ))
}

/// Decides exactly whether the evaluation at p2 equals the complex
/// conjugate of the evaluation at p1, by the same root-disk matching as
/// `values_equal_at` (the conjugate of a root of the minimal polynomial is
/// again a root).
pub fn values_conjugate_at<S: Scalar>(
    x: &S,
    p1: &S::Pl,
    p2: &S::Pl,
) -> Result<bool, ExactError> {
    if x.is_zero() {
        return Ok(true);
    }
    let mp = x.min_poly_q();
    if mp.deg() <= 1 {
        return Ok(true);
    }
    let digits = x.digits();
    let (c1, r1) = x.enclosure_at(p1);
    let c1 = c1.conj();
    let (c2, r2) = x.enclosure_at(p2);
    for stage in [2 * digits, 4 * digits] {
        let Some(disks) = mp.certified_root_disks(stage) else {
            continue;
        };
        let h1 = unique_disk_hit(&disks, &c1, &r1);
        let h2 = unique_disk_hit(&disks, &c2, &r2);
        if let (Some(i), Some(j)) = (h1, h2) {
            return Ok(i == j);
        }
    }
    Err(ExactError::PrecisionExhausted(
        MAX_PRECISION_FACTOR * digits,
    ))
}

impl Scalar for FieldElement {
    type Pl = Place;

    fn add(&self, o: &Self) -> Self {
        FieldElement::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElement::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        FieldElement::mul(self, o)
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        FieldElement::from_rational(&self.field, Rational::from(n))
    }
    fn digits(&self) -> u32 {
        self.field.digits
    }
    fn kind_of(pl: &Place) -> PlaceKind {
        pl.kind
    }
    fn place_index(pl: &Place) -> usize {
        pl.index
    }
    fn embed_at(&self, pl: &Place, bits: u32) -> Cplx {
        self.embed(pl, bits)
    }
    fn real_sign_at(&self, pl: &Place) -> Result<Option<Ordering>, ExactError> {
        let (real, sign) = self.realness_data(pl)?;
        Ok(if real { sign } else { None })
    }
    fn im_sign_at(&self, pl: &Place) -> Result<Ordering, ExactError> {
        self.certified_sign_im(pl)
    }
    fn min_poly_q(&self) -> Poly {
        self.min_poly()
    }
    fn ambient_degree(&self) -> usize {
        self.field.degree
    }
    fn enclosure_at(&self, pl: &Place) -> (Cplx, Float) {
        self.value_enclosure(pl)
    }
    fn canon_flip(&self) -> bool {
        self.c
            .iter()
            .find(|q| q.cmp0() != Ordering::Equal)
            .map_or(false, |q| q.cmp0() == Ordering::Less)
    }
}

impl Scalar for TElem {
    type Pl = TowerPlace;

    fn add(&self, o: &Self) -> Self {
        TElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        TElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        TElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        TElem::neg(self)
    }
    fn is_zero(&self) -> bool {
        TElem::is_zero(self)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        let u = FieldElement::from_rational(&self.tower.base, Rational::from(n));
        TElem::from_base(&self.tower, u)
    }
    fn digits(&self) -> u32 {
        self.tower.base.digits
    }
    fn kind_of(pl: &TowerPlace) -> PlaceKind {
        pl.kind
    }
    fn place_index(pl: &TowerPlace) -> usize {
        pl.index
    }
    fn embed_at(&self, pl: &TowerPlace, bits: u32) -> Cplx {
        self.embed(pl, bits)
    }
    fn real_sign_at(&self, pl: &TowerPlace) -> Result<Option<Ordering>, ExactError> {
        let (real, sign) = self.realness_data(pl)?;
        Ok(if real { sign } else { None })
    }
    fn im_sign_at(&self, pl: &TowerPlace) -> Result<Ordering, ExactError> {
        TElem::im_sign_at(self, pl)
    }
    fn min_poly_q(&self) -> Poly {
        self.min_poly_ann()
    }
    fn ambient_degree(&self) -> usize {
        2 * self.tower.base.degree
    }
    fn enclosure_at(&self, pl: &TowerPlace) -> (Cplx, Float) {
        self.enclosure(pl)
    }
    fn canon_flip(&self) -> bool {
        self.u
            .c
            .iter()
            .chain(self.v.c.iter())
            .find(|q| q.cmp0() != Ordering::Equal)
            .map_or(false, |q| q.cmp0() == Ordering::Less)
    }
}

/// Formats a numeric evaluation for reports.
pub fn fmt_value(z: &Cplx, sig: usize) -> String {
    let re = fmt_float(&z.re, sig);
    if z.im.is_zero() {
        return re;
    }
    let im = fmt_float(&z.im.clone().abs(), sig);
    if z.im.is_sign_negative() {
        format!("{} - {}i", re, im)
    } else {
        format!("{} + {}i", re, im)
    }
}
