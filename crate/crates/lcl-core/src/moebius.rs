//! Exact 2x2 determinant-one matrices over a number field or tower, viewed
//! as isometries of H^2/H^3 through an archimedean place: classification,
//! translation length, fixed points, ping-pong (Schottky) certificates, and
//! the Lie-bracket rank test distinguishing the real form from sl(2,C).

use crate::exactnum::{ExactError, Scalar};
use crate::numeric::{bits_for, Cplx, CP1};
use rug::Float;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoebiusError {
    #[error("element is not loxodromic at this place")]
    NotLoxodromic,
    #[error("the two elements share a fixed point")]
    SharedFixedPoint,
    #[error("pair is not Schottky-certified")]
    NotCertified,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A 2x2 matrix with exact determinant 1, representing an element of the
/// projective group: m and -m denote the same element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2<S: Scalar> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> Mat2<S> {
    /// Checked constructor: the determinant must be exactly 1.
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Mat2<S>, String> {
        let m = Mat2 { a, b, c, d };
        let det = m.det();
        if det != det.one_like() {
            return Err(format!("determinant is {}, not 1", det));
        }
        Ok(m)
    }

    pub fn det(&self) -> S {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn identity_like(sample: &S) -> Mat2<S> {
        Mat2 {
            a: sample.one_like(),
            b: sample.zero_like(),
            c: sample.zero_like(),
            d: sample.one_like(),
        }
    }

    pub fn mul(&self, o: &Mat2<S>) -> Mat2<S> {
        Mat2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    /// Inverse via the adjugate (valid since det = 1).
    pub fn inverse(&self) -> Mat2<S> {
        Mat2 {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Mat2<S> {
        Mat2 {
            a: self.a.neg(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.d.neg(),
        }
    }

    pub fn pow(&self, e: i64) -> Mat2<S> {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        let mut acc = Mat2::identity_like(&self.a);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> S {
        self.a.add(&self.d)
    }

    pub fn commutator(&self, o: &Mat2<S>) -> Mat2<S> {
        self.mul(o).mul(&self.inverse()).mul(&o.inverse())
    }

    /// Equality in the projective group: equal or entrywise negated.
    pub fn eq_psl(&self, o: &Mat2<S>) -> bool {
        self == o || *self == o.neg()
    }

    pub fn is_identity_psl(&self) -> bool {
        if !self.b.is_zero() || !self.c.is_zero() {
            return false;
        }
        let one = self.a.one_like();
        (self.a == one && self.d == one) || (self.a == one.neg() && self.d == one.neg())
    }

    /// Canonical sign representative: negates the matrix when its first
    /// nonzero entry (scanning a, b, c, d) flips under canonicalization.
    /// Two matrices are PSL-equal iff their canonical forms are equal, so
    /// this is a valid dedup/hash key.
    pub fn psl_canon(&self) -> Mat2<S> {
        for e in [&self.a, &self.b, &self.c, &self.d] {
            if !e.is_zero() {
                return if e.canon_flip() { self.neg() } else { self.clone() };
            }
        }
        self.clone()
    }

    /// Numeric evaluation at a place.
    pub fn embed(&self, pl: &S::Pl, bits: u32) -> [[Cplx; 2]; 2] {
        [
            [self.a.embed_at(pl, bits), self.b.embed_at(pl, bits)],
            [self.c.embed_at(pl, bits), self.d.embed_at(pl, bits)],
        ]
    }
}

/// Isometry classification at a place. Translation length is positive
/// exactly for the Hyperbolic and LoxodromicNonHyperbolic tags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IsometryType {
    Identity,
    EllipticFiniteOrder(u32),
    /// Certified infinite order unless `order_bound_limited` is set, in
    /// which case the power test ran out of budget while the integrality
    /// screen could not rule finite order out.
    EllipticInfinite { order_bound_limited: bool },
    Parabolic,
    Hyperbolic,
    LoxodromicNonHyperbolic,
}

impl IsometryType {
    pub fn is_loxodromic(&self) -> bool {
        matches!(
            self,
            IsometryType::Hyperbolic | IsometryType::LoxodromicNonHyperbolic
        )
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(
            self,
            IsometryType::EllipticFiniteOrder(_) | IsometryType::EllipticInfinite { .. }
        )
    }
}

pub const DEFAULT_ORDER_BOUND: u32 = 120;

/// Classifies an isometry at a place.
///
/// Identity and parabolicity are exact, place-independent tests. For a
/// trace that evaluates real the hyperbolic/elliptic split is a certified
/// sign of tr^2 - 4; elliptic orders come from an integrality screen (a
/// finite-order trace must be an algebraic integer with all conjugates in
/// [-2, 2]) followed by an exact power test up to `order_bound`.
pub fn classify<S: Scalar>(
    g: &Mat2<S>,
    pl: &S::Pl,
    order_bound: u32,
) -> Result<IsometryType, ExactError> {
    if g.is_identity_psl() {
        return Ok(IsometryType::Identity);
    }
    let tr = g.trace();
    let four = tr.from_i64_like(4);
    let disc = tr.mul(&tr).sub(&four);
    if disc.is_zero() {
        return Ok(IsometryType::Parabolic);
    }
    match tr.real_sign_at(pl)? {
        None => Ok(IsometryType::LoxodromicNonHyperbolic),
        Some(_) => {
            let s = disc
                .real_sign_at(pl)?
                .expect("tr^2 - 4 is real whenever tr is");
            match s {
                Ordering::Greater => Ok(IsometryType::Hyperbolic),
                Ordering::Equal => unreachable!("exact parabolic test already matched"),
                Ordering::Less => {
                    // elliptic; decide finite vs infinite order
                    let mp = tr.min_poly_q();
                    let integral = mp
                        .c
                        .iter()
                        .all(|q| *q.denom() == rug::Integer::from(1));
                    let two = rug::Rational::from(2);
                    let screen =
                        integral && mp.all_roots_real_in(&rug::Rational::from(-2), &two);
                    if !screen {
                        return Ok(IsometryType::EllipticInfinite {
                            order_bound_limited: false,
                        });
                    }
                    let mut acc = g.clone();
                    for n in 2..=order_bound {
                        acc = acc.mul(g);
                        if acc.is_identity_psl() {
                            return Ok(IsometryType::EllipticFiniteOrder(n));
                        }
                    }
                    Ok(IsometryType::EllipticInfinite {
                        order_bound_limited: true,
                    })
                }
            }
        }
    }
}

/// Trace with the projective sign normalized at the given place: writing
/// tr = r e^{i theta} with r >= 0, the representative with theta in [0, pi)
/// is chosen (real traces become nonnegative).
pub fn trace_normalized<S: Scalar>(g: &Mat2<S>, pl: &S::Pl) -> Result<S, ExactError> {
    let tr = g.trace();
    match tr.im_sign_at(pl)? {
        Ordering::Greater => Ok(tr),
        Ordering::Less => Ok(tr.neg()),
        Ordering::Equal => {
            let s = tr
                .real_sign_at(pl)?
                .expect("zero imaginary sign means the trace is exactly real");
            if s == Ordering::Less {
                Ok(tr.neg())
            } else {
                Ok(tr)
            }
        }
    }
}

/// Translation length at a place: 0 for identity/elliptic/parabolic,
/// 2 ln|lambda| with |lambda| >= 1 otherwise (equal to 2 arccosh(|tr|/2)
/// for real traces).
pub fn translation_length<S: Scalar>(
    g: &Mat2<S>,
    pl: &S::Pl,
    order_bound: u32,
) -> Result<(IsometryType, Float), ExactError> {
    let bits = bits_for(2 * g.a.digits());
    let ty = classify(g, pl, order_bound)?;
    let len = match ty {
        IsometryType::Hyperbolic => {
            let tr = g.trace().embed_at(pl, bits);
            let half = Float::with_val(bits, &tr.re.clone().abs() / &Float::with_val(bits, 2));
            Float::with_val(bits, 2) * half.acosh()
        }
        IsometryType::LoxodromicNonHyperbolic => {
            let lam = dominant_eigenvalue(g, pl, bits);
            Float::with_val(bits, 2) * lam.abs().ln()
        }
        _ => Float::with_val(bits, 0),
    };
    Ok((ty, len))
}

/// The eigenvalue with |lambda| >= 1 (numeric).
fn dominant_eigenvalue<S: Scalar>(g: &Mat2<S>, pl: &S::Pl, bits: u32) -> Cplx {
    let tr = g.trace().embed_at(pl, bits);
    let four = Cplx::from_real(Float::with_val(bits, 4));
    let disc = tr.mul(&tr).sub(&four);
    let s = disc.sqrt();
    let two = Float::with_val(bits, 2);
    let l1 = tr.add(&s).scale(&Float::with_val(bits, 1 / &two));
    let l2 = tr.sub(&s).scale(&Float::with_val(bits, 1 / &two));
    if l1.abs() >= l2.abs() {
        l1
    } else {
        l2
    }
}

/// Attractive and repulsive fixed points on the boundary sphere.
///
/// The element must be loxodromic/hyperbolic at the place. Points are exact
/// decisions where possible: c = 0 is an exact test putting a fixed point
/// at infinity.
pub fn fixed_points<S: Scalar>(
    g: &Mat2<S>,
    pl: &S::Pl,
    order_bound: u32,
) -> Result<(CP1, CP1), MoebiusError> {
    let ty = classify(g, pl, order_bound)?;
    if !ty.is_loxodromic() {
        return Err(MoebiusError::NotLoxodromic);
    }
    let bits = bits_for(2 * g.a.digits());
    let m = g.embed(pl, bits);
    if g.c.is_zero() {
        // fixed points: infinity and b/(d-a)
        let finite = {
            let den = m[1][1].sub(&m[0][0]);
            CP1::Finite(m[0][1].div(&den))
        };
        // attractive one belongs to the eigenvalue of larger modulus;
        // eigenvalue at infinity is a (eigenvector (1,0))
        if m[0][0].abs() > m[1][1].abs() {
            Ok((CP1::Infinity, finite))
        } else {
            Ok((finite, CP1::Infinity))
        }
    } else {
        // roots of c z^2 + (d - a) z - b
        let tr = m[0][0].add(&m[1][1]);
        let four = Cplx::from_real(Float::with_val(bits, 4));
        let s = tr.mul(&tr).sub(&four).sqrt();
        let amd = m[0][0].sub(&m[1][1]);
        let twoc = m[1][0].scale(&Float::with_val(bits, 2));
        let z1 = amd.add(&s).div(&twoc);
        let z2 = amd.sub(&s).div(&twoc);
        // attractive fixed point z has |c z + d| > 1
        let q1 = m[1][0].mul(&z1).add(&m[1][1]).abs();
        if q1 > 1 {
            Ok((CP1::Finite(z1), CP1::Finite(z2)))
        } else {
            Ok((CP1::Finite(z2), CP1::Finite(z1)))
        }
    }
}

/// A disk on the Riemann sphere: the round disk |z - center| <= radius, or
/// its complement (including infinity) when `exterior` is set.
#[derive(Debug, Clone)]
pub struct Disk {
    pub center: Cplx,
    pub radius: Float,
    pub exterior: bool,
}

impl Disk {
    pub fn contains(&self, z: &CP1) -> bool {
        match z {
            CP1::Infinity => self.exterior,
            CP1::Finite(z) => {
                let inside = self.center.dist(z) <= self.radius;
                inside != self.exterior
            }
        }
    }

    /// Disjointness of the point sets of two disks (numeric, strict).
    pub fn disjoint(&self, o: &Disk) -> bool {
        let d = self.center.dist(&o.center);
        match (self.exterior, o.exterior) {
            (false, false) => d > self.radius.clone() + &o.radius,
            (false, true) => d + self.radius.clone() < o.radius,
            (true, false) => d + o.radius.clone() < self.radius,
            // two exteriors always share far-away points
            (true, true) => false,
        }
    }

    /// Containment self subset-of o (numeric, strict).
    pub fn subset_of(&self, o: &Disk) -> bool {
        let d = self.center.dist(&o.center);
        match (self.exterior, o.exterior) {
            (false, false) => d + self.radius.clone() < o.radius,
            (false, true) => d > self.radius.clone() + &o.radius,
            (true, false) => false,
            (true, true) => d + o.radius.clone() < self.radius,
        }
    }
}

/// Image of a disk under a numeric Moebius matrix (det 1): circles map to
/// circles; the side is fixed by tracking a test point.
pub fn disk_image(m: &[[Cplx; 2]; 2], disk: &Disk) -> Disk {
    let bits = disk.center.prec();
    let a = &m[0][0];
    let b = &m[0][1];
    let c = &m[1][0];
    let d = &m[1][1];
    let tiny = Float::with_val(bits, Float::i_exp(1, -(bits as i32) / 2));
    let (center, radius) = if c.abs() < tiny {
        // affine map z -> (a z + b)/d
        let f = a.div(d);
        let ctr = f.mul(&disk.center).add(&b.div(d));
        let rad = Float::with_val(bits, &f.abs() * &disk.radius);
        (ctr, rad)
    } else {
        // w = A + B / (z - q) with q the pole, A = a/c, B = -1/c^2
        let q = d.div(c).neg();
        let aa = a.div(c);
        let bb = c.mul(c).inv().neg();
        let u = disk.center.sub(&q);
        let unorm = u.norm2();
        let r2 = Float::with_val(bits, &disk.radius * &disk.radius);
        let den = Float::with_val(bits, &unorm - &r2);
        if den.clone().abs() < tiny {
            // circle through the pole: maps to a line; represent as a huge
            // disk via a slightly shrunk source circle (callers always work
            // with verified margins, so this path only feeds rejections)
            let shrunk = Disk {
                center: disk.center.clone(),
                radius: Float::with_val(bits, &disk.radius * &Float::with_val(bits, 0.999),),
                exterior: disk.exterior,
            };
            return disk_image(m, &shrunk);
        }
        let minv = u.conj().scale(&Float::with_val(bits, 1 / &den));
        let srad = Float::with_val(bits, &disk.radius / &den).abs();
        let ctr = aa.add(&bb.mul(&minv));
        let rad = Float::with_val(bits, &bb.abs() * &srad);
        (ctr, rad)
    };
    // orientation: where does a definite member of the source region go?
    let test_image = if disk.exterior {
        // infinity is in the source region
        if c.abs() < tiny {
            CP1::Infinity
        } else {
            CP1::Finite(a.div(c))
        }
    } else {
        // use a point a quarter-radius off the center to dodge poles
        let probe = Cplx::new(
            Float::with_val(bits, &disk.center.re + &Float::with_val(bits, &disk.radius / &Float::with_val(bits, 4))),
            disk.center.im.clone(),
        );
        CP1::Finite(moebius_apply(m, &probe))
    };
    let exterior = match &test_image {
        CP1::Infinity => true,
        CP1::Finite(w) => center.dist(w) > radius,
    };
    Disk {
        center,
        radius,
        exterior,
    }
}

pub fn moebius_apply(m: &[[Cplx; 2]; 2], z: &Cplx) -> Cplx {
    let num = m[0][0].mul(z).add(&m[0][1]);
    let den = m[1][0].mul(z).add(&m[1][1]);
    num.div(&den)
}

/// A verified ping-pong certificate: a common power n and four disks
/// (g-attractive, g-repulsive, h-attractive, h-repulsive).
#[derive(Debug, Clone)]
pub struct SchottkyCertificate {
    pub n: u32,
    pub disks: [Disk; 4],
}

/// Searches for a ping-pong certificate for (g^n, h^n), n <= power_budget.
///
/// Both elements must be loxodromic at the place; a shared fixed point is
/// detected exactly through tr[g,h] = 2 and rejected. Returns None when the
/// budget is exhausted without a verified certificate.
pub fn schottky_certificate<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    pl: &S::Pl,
    power_budget: u32,
) -> Result<Option<SchottkyCertificate>, MoebiusError> {
    let ty_g = classify(g, pl, DEFAULT_ORDER_BOUND)?;
    let ty_h = classify(h, pl, DEFAULT_ORDER_BOUND)?;
    if !ty_g.is_loxodromic() || !ty_h.is_loxodromic() {
        return Err(MoebiusError::NotLoxodromic);
    }
    // exact shared-fixed-point test: for loxodromic g, h the fixed-point
    // sets intersect iff the commutator has trace exactly 2
    let comm_tr = g.commutator(h).trace();
    if comm_tr.sub(&comm_tr.from_i64_like(2)).is_zero() {
        return Err(MoebiusError::SharedFixedPoint);
    }
    // move fixed points off infinity by an exact conjugation if needed
    if g.c.is_zero() || h.c.is_zero() {
        for w in 1..=8i64 {
            let sample = &g.a;
            let wi = sample.from_i64_like(w);
            let conj = Mat2 {
                a: sample.one_like(),
                b: sample.zero_like(),
                c: wi,
                d: sample.one_like(),
            };
            let gc = conj.mul(g).mul(&conj.inverse());
            let hc = conj.mul(h).mul(&conj.inverse());
            if gc.c.is_zero() || hc.c.is_zero() {
                continue;
            }
            let cert = schottky_search_finite(&gc, &hc, pl, power_budget)?;
            return Ok(cert.map(|mut cert| {
                // map the disks back through the inverse conjugation
                let bits = cert.disks[0].center.prec();
                let minv = conj.inverse().embed(pl, bits);
                for dsk in cert.disks.iter_mut() {
                    *dsk = disk_image(&minv, dsk);
                }
                cert
            }));
        }
        // more than four fixed points cannot block all eight shifts
        unreachable!("an integer shear moving all fixed points off infinity exists");
    }
    schottky_search_finite(g, h, pl, power_budget)
}

/// Core search assuming every fixed point is finite (c entries nonzero).
fn schottky_search_finite<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    pl: &S::Pl,
    power_budget: u32,
) -> Result<Option<SchottkyCertificate>, MoebiusError> {
    let bits = bits_for(2 * g.a.digits());
    let (gp, gm) = fixed_points(g, pl, DEFAULT_ORDER_BOUND)?;
    let (hp, hm) = fixed_points(h, pl, DEFAULT_ORDER_BOUND)?;
    let pts: Vec<&Cplx> = [&gp, &gm, &hp, &hm]
        .iter()
        .map(|p| p.finite().expect("finite fixed points after conjugation"))
        .collect();
    let mut dmin: Option<Float> = None;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let d = pts[i].dist(pts[j]);
            if dmin.as_ref().map_or(true, |m| d < *m) {
                dmin = Some(d);
            }
        }
    }
    let dmin = dmin.unwrap();
    let radii: Vec<Float> = [
        0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.075, 0.05, 0.03, 0.02, 0.01, 0.005,
    ]
    .iter()
    .map(|t| Float::with_val(bits, &dmin * &Float::with_val(bits, *t)))
    .collect();

    for n in 1..=power_budget {
        let gn = g.pow(n as i64).embed(pl, bits);
        let gninv = g.pow(-(n as i64)).embed(pl, bits);
        let hn = h.pow(n as i64).embed(pl, bits);
        let hninv = h.pow(-(n as i64)).embed(pl, bits);
        for r in &radii {
            let mk = |p: &Cplx| Disk {
                center: p.clone(),
                radius: r.clone(),
                exterior: false,
            };
            let disks = [mk(pts[0]), mk(pts[1]), mk(pts[2]), mk(pts[3])];
            let mut ok = true;
            'pairs: for i in 0..4 {
                for j in (i + 1)..4 {
                    if !disks[i].disjoint(&disks[j]) {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if !ok {
                continue;
            }
            if verify_pingpong(&gn, &gninv, &hn, &hninv, &disks) {
                return Ok(Some(SchottkyCertificate { n, disks }));
            }
        }
    }
    Ok(None)
}

/// The ping-pong condition: each of g^n, g^-n, h^n, h^-n maps the
/// complement of its repulsive disk strictly into its attractive disk.
/// Disk order: [g-attractive, g-repulsive, h-attractive, h-repulsive].
fn verify_pingpong(
    gn: &[[Cplx; 2]; 2],
    gninv: &[[Cplx; 2]; 2],
    hn: &[[Cplx; 2]; 2],
    hninv: &[[Cplx; 2]; 2],
    disks: &[Disk; 4],
) -> bool {
    let cases: [(&[[Cplx; 2]; 2], usize, usize); 4] = [
        (gn, 1, 0),    // maps complement of g-repulsive into g-attractive
        (gninv, 0, 1), // inverse swaps the roles
        (hn, 3, 2),
        (hninv, 2, 3),
    ];
    for (m, rep, att) in cases {
        let complement = Disk {
            center: disks[rep].center.clone(),
            radius: disks[rep].radius.clone(),
            exterior: !disks[rep].exterior,
        };
        let img = disk_image(m, &complement);
        if !img.subset_of(&disks[att]) {
            return false;
        }
    }
    true
}

/// Re-verifies a certificate against freshly embedded matrices.
pub fn verify_certificate<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    pl: &S::Pl,
    cert: &SchottkyCertificate,
) -> bool {
    let bits = cert.disks[0].center.prec();
    let n = cert.n as i64;
    let gn = g.pow(n).embed(pl, bits);
    let gninv = g.pow(-n).embed(pl, bits);
    let hn = h.pow(n).embed(pl, bits);
    let hninv = h.pow(-n).embed(pl, bits);
    let mut ok = true;
    for i in 0..4 {
        for j in (i + 1)..4 {
            ok &= cert.disks[i].disjoint(&cert.disks[j]);
        }
    }
    ok && verify_pingpong(&gn, &gninv, &hn, &hninv, &cert.disks)
}

/// Real span dimension of {t1, t2, [t1,t2], [t1,[t1,t2]], ...} inside the
/// 6-dimensional real Lie algebra, where t1 = log g and t2 = log h: 3 for
/// pairs conjugate into the real form, 6 otherwise.
///
/// The pair must admit a Schottky certificate; traces are sign-normalized
/// exactly before taking logarithms so that real hyperbolic elements get
/// real logarithms.
pub fn zariski_span_dim<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    pl: &S::Pl,
) -> Result<usize, MoebiusError> {
    match schottky_certificate(g, h, pl, 8) {
        Ok(Some(_)) => {}
        Ok(None) => return Err(MoebiusError::NotCertified),
        Err(e) => {
            return Err(match e {
                MoebiusError::Exact(x) => MoebiusError::Exact(x),
                _ => MoebiusError::NotCertified,
            })
        }
    }
    let bits = bits_for(2 * g.a.digits());
    let gs = normalize_sign(g, pl)?;
    let hs = normalize_sign(h, pl)?;
    Ok(zariski_rank_numeric(
        &gs.embed(pl, bits),
        &hs.embed(pl, bits),
    ))
}

/// Chooses between m and -m so the trace satisfies the r e^{i theta},
/// theta in [0, pi) convention (exact decision).
fn normalize_sign<S: Scalar>(g: &Mat2<S>, pl: &S::Pl) -> Result<Mat2<S>, ExactError> {
    let tr = g.trace();
    let flip = match tr.im_sign_at(pl)? {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => tr.real_sign_at(pl)?.expect("real trace") == Ordering::Less,
    };
    Ok(if flip { g.neg() } else { g.clone() })
}

/// Numeric core of the bracket-rank test, usable directly for matrices
/// that do not come from exact data. Inputs must be loxodromic with
/// distinct fixed points; traces should already be sign-normalized.
pub fn zariski_rank_numeric(g: &[[Cplx; 2]; 2], h: &[[Cplx; 2]; 2]) -> usize {
    let t1 = matrix_log(g);
    let t2 = matrix_log(h);
    let mut ts = vec![t1.clone(), t2];
    for _ in 0..4 {
        let last = ts.last().unwrap().clone();
        ts.push(bracket(&t1, &last));
    }
    // coordinates of sl2(C) as a real 6-dimensional space
    let mut rows: Vec<Vec<f64>> = vec![];
    for t in &ts {
        // enforce tracelessness numerically: a := (t00 - t11)/2
        let bits = t[0][0].prec();
        let a = t[0][0]
            .sub(&t[1][1])
            .scale(&Float::with_val(bits, 0.5));
        let row = vec![
            a.re.to_f64(),
            a.im.to_f64(),
            t[0][1].re.to_f64(),
            t[0][1].im.to_f64(),
            t[1][0].re.to_f64(),
            t[1][0].im.to_f64(),
        ];
        rows.push(row);
    }
    real_rank(rows, 1e-9)
}

fn bracket(x: &[[Cplx; 2]; 2], y: &[[Cplx; 2]; 2]) -> [[Cplx; 2]; 2] {
    let xy = mat_mul_num(x, y);
    let yx = mat_mul_num(y, x);
    [
        [xy[0][0].sub(&yx[0][0]), xy[0][1].sub(&yx[0][1])],
        [xy[1][0].sub(&yx[1][0]), xy[1][1].sub(&yx[1][1])],
    ]
}

fn mat_mul_num(x: &[[Cplx; 2]; 2], y: &[[Cplx; 2]; 2]) -> [[Cplx; 2]; 2] {
    [
        [
            x[0][0].mul(&y[0][0]).add(&x[0][1].mul(&y[1][0])),
            x[0][0].mul(&y[0][1]).add(&x[0][1].mul(&y[1][1])),
        ],
        [
            x[1][0].mul(&y[0][0]).add(&x[1][1].mul(&y[1][0])),
            x[1][0].mul(&y[0][1]).add(&x[1][1].mul(&y[1][1])),
        ],
    ]
}

/// Principal logarithm of a diagonalizable (loxodromic) matrix via its
/// eigendecomposition.
fn matrix_log(m: &[[Cplx; 2]; 2]) -> [[Cplx; 2]; 2] {
    let bits = m[0][0].prec();
    let tr = m[0][0].add(&m[1][1]);
    let four = Cplx::from_real(Float::with_val(bits, 4));
    let s = tr.mul(&tr).sub(&four).sqrt();
    let half = Float::with_val(bits, 0.5);
    let l1 = tr.add(&s).scale(&half);
    let l2 = tr.sub(&s).scale(&half);
    // eigenvector for lambda: (b, lambda - a) or (lambda - d, c)
    let pick = |lam: &Cplx| -> (Cplx, Cplx) {
        let v1 = (m[0][1].clone(), lam.sub(&m[0][0]));
        let v2 = (lam.sub(&m[1][1]), m[1][0].clone());
        let n1 = v1.0.norm2() + v1.1.norm2();
        let n2 = v2.0.norm2() + v2.1.norm2();
        if n1 >= n2 {
            v1
        } else {
            v2
        }
    };
    let (p11, p21) = pick(&l1);
    let (p12, p22) = pick(&l2);
    let det = p11.mul(&p22).sub(&p12.mul(&p21));
    let di = det.inv();
    // P diag(log l1, log l2) P^{-1}
    let w1 = l1.ln();
    let w2 = l2.ln();
    let q11 = p22.mul(&di);
    let q12 = p12.neg().mul(&di);
    let q21 = p21.neg().mul(&di);
    let q22 = p11.mul(&di);
    [
        [
            p11.mul(&w1).mul(&q11).add(&p12.mul(&w2).mul(&q21)),
            p11.mul(&w1).mul(&q12).add(&p12.mul(&w2).mul(&q22)),
        ],
        [
            p21.mul(&w1).mul(&q11).add(&p22.mul(&w2).mul(&q21)),
            p21.mul(&w1).mul(&q12).add(&p22.mul(&w2).mul(&q22)),
        ],
    ]
}

/// Rank of real row vectors by Gaussian elimination with relative pivots.
fn real_rank(mut rows: Vec<Vec<f64>>, rel_tol: f64) -> usize {
    let scale = rows
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let tol = scale * rel_tol;
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        // find the largest pivot in this column
        let mut best = None;
        let mut best_val = tol;
        for (i, r) in rows.iter().enumerate().skip(rank) {
            if r[col].abs() > best_val {
                best = Some(i);
                best_val = r[col].abs();
            }
        }
        let Some(pi) = best else { continue };
        rows.swap(rank, pi);
        let pv = rows[rank][col];
        for i in 0..rows.len() {
            if i != rank && rows[i][col].abs() > 0.0 {
                let f = rows[i][col] / pv;
                for j in 0..ncols {
                    let s = rows[rank][j];
                    rows[i][j] -= f * s;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{field_create, rational_field, FieldElement, NumberField};
    use crate::numeric::DEFAULT_DIGITS;
    use crate::poly::Poly;
    use rug::Rational;
    use std::sync::Arc;

    fn qmat(entries: [(i64, i64); 4]) -> Mat2<FieldElement> {
        let f = rational_field();
        let el = |(n, d): (i64, i64)| FieldElement::from_rational(&f, Rational::from((n, d)));
        Mat2::new(el(entries[0]), el(entries[1]), el(entries[2]), el(entries[3])).unwrap()
    }

    fn golden() -> Arc<NumberField> {
        field_create(Poly::from_i64(&[-1, -1, 1]), DEFAULT_DIGITS, false).unwrap()
    }

    #[test]
    fn determinant_checked() {
        let f = rational_field();
        let one = f.one();
        let zero = f.zero();
        assert!(Mat2::new(one.clone(), zero.clone(), zero.clone(), one.clone()).is_ok());
        let two = f.element_i64(&[2]);
        assert!(Mat2::new(two.clone(), zero.clone(), zero, two).is_err());
    }

    #[test]
    fn classify_basics() {
        let f = rational_field();
        let pl = &f.places[0];
        let t = qmat([(1, 1), (1, 1), (0, 1), (1, 1)]);
        assert_eq!(classify(&t, pl, 120).unwrap(), IsometryType::Parabolic);
        let s = qmat([(0, 1), (1, 1), (-1, 1), (0, 1)]);
        assert_eq!(
            classify(&s, pl, 120).unwrap(),
            IsometryType::EllipticFiniteOrder(2)
        );
        let st = s.mul(&t); // trace -1: order 3 in the projective group
        assert_eq!(
            classify(&st, pl, 120).unwrap(),
            IsometryType::EllipticFiniteOrder(3)
        );
        let id = qmat([(1, 1), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(classify(&id, pl, 120).unwrap(), IsometryType::Identity);
        let neg_id = id.neg();
        assert_eq!(classify(&neg_id, pl, 120).unwrap(), IsometryType::Identity);
        let hyp = qmat([(2, 1), (1, 1), (1, 1), (1, 1)]);
        assert_eq!(classify(&hyp, pl, 120).unwrap(), IsometryType::Hyperbolic);
        let diag = qmat([(2, 1), (0, 1), (0, 1), (1, 2)]);
        assert_eq!(classify(&diag, pl, 120).unwrap(), IsometryType::Hyperbolic);
    }

    #[test]
    fn hecke5_word_hyperbolic_with_negative_trace() {
        // T^4 S over the golden field has trace -2(1+phi)... the exact value
        // is -(4 phi + 2) evaluating to about -6.472 at the identity place
        let g = golden();
        let phi = g.gen();
        let one = g.one();
        let zero = g.zero();
        let t = Mat2::new(one.clone(), phi.clone(), zero.clone(), one.clone()).unwrap();
        let s = Mat2::new(zero.clone(), one.clone(), one.neg(), zero.clone()).unwrap();
        let w = t.pow(4).mul(&s);
        let pl = &g.places[0];
        assert_eq!(classify(&w, pl, 120).unwrap(), IsometryType::Hyperbolic);
        let tr = w.trace().embed_default(pl);
        assert!((tr.re.to_f64() + 6.4721359549995794).abs() < 1e-12);
        // normalized trace is positive
        let nt = trace_normalized(&w, pl).unwrap();
        assert!((nt.embed_default(pl).re.to_f64() - 6.4721359549995794).abs() < 1e-12);
    }

    #[test]
    fn translation_lengths() {
        let f = rational_field();
        let pl = &f.places[0];
        let diag = qmat([(2, 1), (0, 1), (0, 1), (1, 2)]);
        let (ty, len) = translation_length(&diag, pl, 120).unwrap();
        assert_eq!(ty, IsometryType::Hyperbolic);
        assert!((len.to_f64() - 2.0 * 2f64.ln()).abs() < 1e-30);
        let t = qmat([(1, 1), (1, 1), (0, 1), (1, 1)]);
        let (ty, len) = translation_length(&t, pl, 120).unwrap();
        assert_eq!(ty, IsometryType::Parabolic);
        assert_eq!(len.to_f64(), 0.0);
        // power law: l(g^n) = n l(g)
        for n in 2..=10i64 {
            let (_, ln) = translation_length(&diag.pow(n), pl, 120).unwrap();
            assert!((ln.to_f64() - (n as f64) * 2.0 * 2f64.ln()).abs() < 1e-25);
        }
        // conjugation invariance at trace level
        let w = qmat([(1, 1), (3, 1), (0, 1), (1, 1)]);
        let conj = w.mul(&diag).mul(&w.inverse());
        assert_eq!(conj.trace(), diag.trace());
        let (cty, clen) = translation_length(&conj, pl, 120).unwrap();
        assert_eq!(cty, IsometryType::Hyperbolic);
        assert!((clen.to_f64() - 2.0 * 2f64.ln()).abs() < 1e-25);
    }

    #[test]
    fn fixed_point_examples() {
        let f = rational_field();
        let pl = &f.places[0];
        let diag = qmat([(2, 1), (0, 1), (0, 1), (1, 2)]);
        let (att, rep) = fixed_points(&diag, pl, 120).unwrap();
        assert!(matches!(att, CP1::Infinity));
        match rep {
            CP1::Finite(z) => assert!(z.abs().to_f64() < 1e-30),
            _ => panic!("repulsive fixed point should be 0"),
        }
        let m = qmat([(2, 1), (1, 1), (1, 1), (1, 1)]);
        let (att, _) = fixed_points(&m, pl, 120).unwrap();
        let golden_ratio = 1.6180339887498949;
        assert!((att.finite().unwrap().re.to_f64() - golden_ratio).abs() < 1e-12);
        let m2 = qmat([(1, 1), (1, 1), (1, 1), (2, 1)]);
        let (att, _) = fixed_points(&m2, pl, 120).unwrap();
        assert!((att.finite().unwrap().re.to_f64() - 0.6180339887498949).abs() < 1e-12);
        // elliptic input is rejected
        let s = qmat([(0, 1), (1, 1), (-1, 1), (0, 1)]);
        assert!(matches!(
            fixed_points(&s, pl, 120),
            Err(MoebiusError::NotLoxodromic)
        ));
    }

    #[test]
    fn disk_image_inversion() {
        let bits = 200;
        // z -> 1/z as [[0,1],[-1,0]] has det 1: image of |z| <= 1/2 is |w| >= 2
        let f = rational_field();
        let s = qmat([(0, 1), (1, 1), (-1, 1), (0, 1)]);
        let m = s.embed(&f.places[0], bits);
        let d = Disk {
            center: Cplx::zero(bits),
            radius: Float::with_val(bits, 0.5),
            exterior: false,
        };
        let img = disk_image(&m, &d);
        assert!(img.exterior);
        assert!(img.center.abs().to_f64() < 1e-30);
        assert!((img.radius.to_f64() - 2.0).abs() < 1e-30);
        // identity maps any disk to itself
        let id = Mat2::identity_like(&f.one()).embed(&f.places[0], bits);
        let img2 = disk_image(&id, &d);
        assert!(!img2.exterior);
        assert!(img2.center.dist(&d.center).to_f64() < 1e-30);
        assert!((img2.radius.to_f64() - 0.5).abs() < 1e-30);
    }

    #[test]
    fn schottky_certificate_found_and_shared_points_rejected() {
        let f = rational_field();
        let pl = &f.places[0];
        let g = qmat([(2, 1), (0, 1), (0, 1), (1, 2)]);
        let h = qmat([(1, 1), (1, 1), (1, 1), (2, 1)]);
        let cert = schottky_certificate(&g, &h, pl, 8).unwrap();
        let cert = cert.expect("certificate within budget");
        assert!(cert.n <= 4);
        assert!(verify_certificate(&g, &h, pl, &cert));
        // same element shares fixed points with itself
        assert!(matches!(
            schottky_certificate(&g, &g, pl, 8),
            Err(MoebiusError::SharedFixedPoint)
        ));
        // a conjugate of g by a translation still fixes infinity
        let w = qmat([(1, 1), (3, 1), (0, 1), (1, 1)]);
        let h2 = w.mul(&g).mul(&w.inverse());
        assert!(matches!(
            schottky_certificate(&g, &h2, pl, 8),
            Err(MoebiusError::SharedFixedPoint)
        ));
    }

    #[test]
    fn zariski_rank_three_for_real_pairs() {
        let f = rational_field();
        let pl = &f.places[0];
        let g = qmat([(2, 1), (0, 1), (0, 1), (1, 2)]);
        let h = qmat([(1, 1), (1, 1), (1, 1), (2, 1)]);
        assert_eq!(zariski_span_dim(&g, &h, pl).unwrap(), 3);
        // identity is rejected
        let id = Mat2::identity_like(&f.one());
        assert!(matches!(
            zariski_span_dim(&id, &h, pl),
            Err(MoebiusError::NotCertified) | Err(MoebiusError::Exact(_))
        ));
    }

    #[test]
    fn zariski_rank_six_for_nonreal_trace() {
        // numeric pair: g with eigenvalues e^{1+i}, e^{-1-i}; h a hyperbolic
        // with separated fixed points, conjugated to avoid shared points
        let bits = 400;
        let x = Cplx::from_f64(1.0, 1.0, bits);
        let l = x.exp();
        let li = x.neg().exp();
        let zero = Cplx::zero(bits);
        let g = [[l, zero.clone()], [zero.clone(), li]];
        let h = [
            [Cplx::from_f64(2.0, 0.0, bits), Cplx::from_f64(1.0, 0.0, bits)],
            [Cplx::from_f64(1.0, 0.0, bits), Cplx::from_f64(1.0, 0.0, bits)],
        ];
        assert_eq!(zariski_rank_numeric(&g, &h), 6);
        // sanity: fully real pair gives 3 through the same numeric core
        let gr = [
            [Cplx::from_f64(2.0, 0.0, bits), zero.clone()],
            [zero.clone(), Cplx::from_f64(0.5, 0.0, bits)],
        ];
        assert_eq!(zariski_rank_numeric(&gr, &h), 3);
    }

    #[test]
    fn psl_canonical_form_dedup() {
        let f = rational_field();
        let t = qmat([(1, 1), (1, 1), (0, 1), (1, 1)]);
        let tn = t.neg();
        assert!(t.eq_psl(&tn));
        assert_eq!(t.psl_canon(), tn.psl_canon());
        let s = qmat([(0, 1), (1, 1), (-1, 1), (0, 1)]);
        assert_ne!(t.psl_canon(), s.psl_canon());
        let _ = f;
    }
}
