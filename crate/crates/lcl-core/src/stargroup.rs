//! Star embeddings g -> (phi_1(g), ..., phi_k(g)) into a product of
//! hyperbolic isometry groups, one factor per archimedean place:
//! componentwise classification, translation directions, factor reduction
//! to the loxodromic-carrying factors, and nonelementarity certificates.

use crate::exactnum::{values_equal_at, ExactError, PlaceKind, Scalar};
use crate::moebius::{
    classify, schottky_certificate, IsometryType, Mat2, MoebiusError, DEFAULT_ORDER_BOUND,
};
use crate::numeric::{bits_for, Cplx};
use crate::words::{enumerate, Word, WordsError};
use rug::Float;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StarError {
    #[error("component types violate the product lemma for {word:?}: {tags:?}")]
    ComponentTypeViolation {
        word: Word,
        tags: Vec<IsometryType>,
    },
    #[error("every factor was dropped: no loxodromic evidence anywhere")]
    AllFactorsDropped,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error("schottky search failed: {0}")]
    Moebius(#[from] MoebiusError),
}

/// The ordered list of factor places. Factor 0 is the identity place of
/// the field (or the place list deliberately repeats one place, as in
/// diagonal embeddings).
#[derive(Debug, Clone)]
pub struct StarContext<S: Scalar> {
    pub places: Vec<S::Pl>,
}

impl<S: Scalar> StarContext<S> {
    pub fn new(places: Vec<S::Pl>) -> StarContext<S> {
        assert!(!places.is_empty(), "a star context needs a factor");
        StarContext { places }
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    /// Number of complex factors (rank-one factors acting on H^3).
    pub fn q(&self) -> usize {
        self.places
            .iter()
            .filter(|p| S::kind_of(p) == PlaceKind::Complex)
            .count()
    }

    /// Number of real factors (acting on H^2).
    pub fn r(&self) -> usize {
        self.len() - self.q()
    }

    pub fn subcontext(&self, indices: &[usize]) -> StarContext<S> {
        StarContext::new(indices.iter().map(|&i| self.places[i].clone()).collect())
    }
}

/// How the component isometry types combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductType {
    Identity,
    TotallyLoxodromic,
    TotallyElliptic,
    TotallyParabolic,
    Mixed,
}

/// One group element seen through every factor of the star embedding.
#[derive(Debug, Clone)]
pub struct ProductIsometry<S: Scalar> {
    pub word: Word,
    pub matrix: Mat2<S>,
    pub components: Vec<[[Cplx; 2]; 2]>,
    pub types: Vec<IsometryType>,
    pub lengths: Vec<Float>,
}

impl<S: Scalar> ProductIsometry<S> {
    pub fn product_type(&self) -> ProductType {
        if self.types.iter().all(|t| *t == IsometryType::Identity) {
            return ProductType::Identity;
        }
        if self.types.iter().all(|t| t.is_loxodromic()) {
            return ProductType::TotallyLoxodromic;
        }
        if self.types.iter().all(|t| t.is_elliptic()) {
            return ProductType::TotallyElliptic;
        }
        if self.types.iter().all(|t| *t == IsometryType::Parabolic) {
            return ProductType::TotallyParabolic;
        }
        ProductType::Mixed
    }

    pub fn is_totally_loxodromic(&self) -> bool {
        self.product_type() == ProductType::TotallyLoxodromic
    }

    pub fn has_positive_length(&self) -> bool {
        self.lengths.iter().any(|l| l.cmp0() == Some(std::cmp::Ordering::Greater))
    }

    /// Componentwise Jordan data x_i = l_i / 2 >= 0; its ray equals the
    /// translation direction up to scaling.
    pub fn jordan_projection(&self) -> Vec<Float> {
        self.lengths
            .iter()
            .map(|l| Float::with_val(l.prec(), l / &Float::with_val(l.prec(), 2)))
            .collect()
    }
}

/// A normalized translation direction: entries sum to 1; `interior` means
/// every entry is strictly positive (beyond the degeneracy threshold);
/// `exact_barycenter` certifies via exact trace comparisons that every
/// component length is the same real number, pinning the direction to
/// (1/k, ..., 1/k) exactly.
#[derive(Debug, Clone)]
pub struct Direction {
    pub vec: Vec<Float>,
    pub interior: bool,
    pub exact_barycenter: bool,
}

pub const INTERIOR_THRESHOLD: f64 = 1e-15;

impl Direction {
    pub fn to_f64(&self) -> Vec<f64> {
        self.vec.iter().map(|x| x.to_f64()).collect()
    }

    /// Sup-norm distance between two directions.
    pub fn sup_distance(&self, o: &Direction) -> Float {
        let bits = self.vec[0].prec();
        let mut best = Float::with_val(bits, 0);
        for (a, b) in self.vec.iter().zip(o.vec.iter()) {
            let d = Float::with_val(bits, a - b).abs();
            if d > best {
                best = d;
            }
        }
        best
    }
}

/// Evaluates one element at every factor: Galois embedding, componentwise
/// classification and translation length. The product-lemma consistency
/// checks run on every call: a parabolic (exactly trace^2 = 4) or
/// finite-order component forces all components to match, and a violation
/// signals corrupt input rather than a tolerable state.
pub fn star_embed<S: Scalar>(
    g: &Mat2<S>,
    ctx: &StarContext<S>,
    order_bound: u32,
) -> Result<ProductIsometry<S>, StarError> {
    star_embed_word(g, Word::identity(), ctx, order_bound)
}

fn star_embed_word<S: Scalar>(
    g: &Mat2<S>,
    word: Word,
    ctx: &StarContext<S>,
    order_bound: u32,
) -> Result<ProductIsometry<S>, StarError> {
    let bits = bits_for(2 * g.a.digits());
    let mut components = Vec::with_capacity(ctx.len());
    let mut types = Vec::with_capacity(ctx.len());
    let mut lengths = Vec::with_capacity(ctx.len());
    for pl in &ctx.places {
        let ty = classify(g, pl, order_bound)?;
        let len = component_length(g, pl, &ty, bits);
        components.push(g.embed(pl, bits));
        types.push(ty);
        lengths.push(len);
    }
    // product lemma: parabolic and finite elliptic order are decided by
    // exact place-independent data, so one such component forces all
    let parabolic = types.iter().filter(|t| **t == IsometryType::Parabolic).count();
    if parabolic != 0 && parabolic != types.len() {
        return Err(StarError::ComponentTypeViolation { word, tags: types });
    }
    let orders: Vec<u32> = types
        .iter()
        .filter_map(|t| match t {
            IsometryType::EllipticFiniteOrder(n) => Some(*n),
            _ => None,
        })
        .collect();
    if !orders.is_empty()
        && (orders.len() != types.len() || orders.iter().any(|n| *n != orders[0]))
    {
        return Err(StarError::ComponentTypeViolation { word, tags: types });
    }
    Ok(ProductIsometry {
        word,
        matrix: g.clone(),
        components,
        types,
        lengths,
    })
}

fn component_length<S: Scalar>(g: &Mat2<S>, pl: &S::Pl, ty: &IsometryType, bits: u32) -> Float {
    match ty {
        IsometryType::Hyperbolic => {
            let tr = g.trace().embed_at(pl, bits);
            let half = Float::with_val(bits, &tr.re.clone().abs() / &Float::with_val(bits, 2));
            Float::with_val(bits, 2) * half.acosh()
        }
        IsometryType::LoxodromicNonHyperbolic => {
            let tr = g.trace().embed_at(pl, bits);
            let four = Cplx::from_real(Float::with_val(bits, 4));
            let s = tr.mul(&tr).sub(&four).sqrt();
            let two = Float::with_val(bits, 2);
            let l1 = tr.add(&s).scale(&Float::with_val(bits, 1 / &two));
            let l2 = tr.sub(&s).scale(&Float::with_val(bits, 1 / &two));
            let lam = if l1.abs() >= l2.abs() { l1 } else { l2 };
            Float::with_val(bits, 2) * lam.abs().ln()
        }
        _ => Float::with_val(bits, 0),
    }
}

/// Normalized direction of positive-length components; None for elements
/// with every length zero. The exact-barycenter certificate compares
/// trace^2 across factor pairs (translation length depends on the trace
/// only through its square, so equal squares force equal lengths).
pub fn translation_direction<S: Scalar>(
    pi: &ProductIsometry<S>,
    ctx: &StarContext<S>,
) -> Result<Option<Direction>, ExactError> {
    if !pi.has_positive_length() {
        return Ok(None);
    }
    let bits = pi.lengths[0].prec();
    let mut sum = Float::with_val(bits, 0);
    for l in &pi.lengths {
        sum += l;
    }
    let vec: Vec<Float> = pi
        .lengths
        .iter()
        .map(|l| Float::with_val(bits, l / &sum))
        .collect();
    let interior = vec.iter().all(|x| x.to_f64() > INTERIOR_THRESHOLD);
    let k = vec.len() as f64;
    let near_barycenter = vec.iter().all(|x| (x.to_f64() - 1.0 / k).abs() < 1e-9);
    let exact_barycenter = if near_barycenter {
        let tr = pi.matrix.trace();
        let tr2 = tr.mul(&tr);
        let mut all_equal = true;
        for i in 1..ctx.len() {
            if !values_equal_at(&tr2, &ctx.places[0], &ctx.places[i])? {
                all_equal = false;
                break;
            }
        }
        all_equal
    } else {
        false
    };
    Ok(Some(Direction {
        vec,
        interior,
        exact_barycenter,
    }))
}

/// First enumerated element whose components are all loxodromic; None when
/// the word/element budget is exhausted first.
pub fn find_totally_loxodromic<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    max_len: usize,
    cap: usize,
) -> Result<Option<ProductIsometry<S>>, StarError> {
    let enumeration = enumerate(gens, max_len, cap)?;
    for (word, mat) in enumeration.nontrivial() {
        let pi = star_embed_word(mat, word.clone(), ctx, DEFAULT_ORDER_BOUND)?;
        if pi.is_totally_loxodromic() {
            return Ok(Some(pi));
        }
    }
    Ok(None)
}

/// Result of the factor-reduction scan: the retained factor indices (in
/// original order), the reduced context, and the generator list (unchanged
/// matrices, still over the full field).
#[derive(Debug, Clone)]
pub struct FactorReduction<S: Scalar> {
    pub context: StarContext<S>,
    pub retained: Vec<usize>,
    pub dropped: Vec<usize>,
    pub generators: Vec<Mat2<S>>,
}

/// Drops every factor whose projection shows no loxodromic element within
/// the evidence budget. Factor order is preserved.
pub fn gamma_ne<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    max_len: usize,
    cap: usize,
) -> Result<FactorReduction<S>, StarError> {
    let enumeration = enumerate(gens, max_len, cap)?;
    let mut has_lox = vec![false; ctx.len()];
    'scan: for (word, mat) in enumeration.nontrivial() {
        let pi = star_embed_word(mat, word.clone(), ctx, DEFAULT_ORDER_BOUND)?;
        for (i, ty) in pi.types.iter().enumerate() {
            if ty.is_loxodromic() {
                has_lox[i] = true;
            }
        }
        if has_lox.iter().all(|b| *b) {
            break 'scan;
        }
    }
    let retained: Vec<usize> = (0..ctx.len()).filter(|&i| has_lox[i]).collect();
    if retained.is_empty() {
        return Err(StarError::AllFactorsDropped);
    }
    let dropped: Vec<usize> = (0..ctx.len()).filter(|&i| !has_lox[i]).collect();
    Ok(FactorReduction {
        context: ctx.subcontext(&retained),
        retained,
        dropped,
        generators: gens.to_vec(),
    })
}

/// Evidence for one factor: a verified ping-pong pair and the common power.
#[derive(Debug, Clone)]
pub struct FactorEvidence {
    pub certificate: Option<(Word, Word, u32)>,
}

/// Nonelementarity scan: per-factor Schottky certificates where found, and
/// any mixed elements carrying forbidden component types (parabolic or
/// finite-order elliptic inside a mixed type tuple).
#[derive(Debug, Clone)]
pub struct NonelementaryReport {
    pub factors: Vec<FactorEvidence>,
    pub violations: Vec<(Word, usize)>,
}

/// Searches each factor for a certified free pair among the first few
/// loxodromic elements. Absence of a certificate is reported as "no
/// evidence", never as elementarity.
pub fn nonelementary_evidence<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    max_len: usize,
    cap: usize,
) -> Result<NonelementaryReport, StarError> {
    let enumeration = enumerate(gens, max_len, cap)?;
    let mut embedded: Vec<ProductIsometry<S>> = Vec::new();
    for (word, mat) in enumeration.nontrivial() {
        embedded.push(star_embed_word(mat, word.clone(), ctx, DEFAULT_ORDER_BOUND)?);
    }
    let mut violations = Vec::new();
    for pi in &embedded {
        if pi.product_type() == ProductType::Mixed {
            for (i, ty) in pi.types.iter().enumerate() {
                let forbidden = matches!(
                    ty,
                    IsometryType::Parabolic | IsometryType::EllipticFiniteOrder(_)
                );
                if forbidden {
                    violations.push((pi.word.clone(), i));
                }
            }
        }
    }
    let mut factors = Vec::with_capacity(ctx.len());
    for (i, pl) in ctx.places.iter().enumerate() {
        let candidates: Vec<&ProductIsometry<S>> = embedded
            .iter()
            .filter(|pi| pi.types[i].is_loxodromic())
            .take(6)
            .collect();
        let mut cert = None;
        'pairs: for a in 0..candidates.len() {
            for b in (a + 1)..candidates.len() {
                match schottky_certificate(&candidates[a].matrix, &candidates[b].matrix, pl, 8) {
                    Ok(Some(c)) => {
                        cert = Some((
                            candidates[a].word.clone(),
                            candidates[b].word.clone(),
                            c.n,
                        ));
                        break 'pairs;
                    }
                    Ok(None) => continue,
                    Err(MoebiusError::SharedFixedPoint) => continue,
                    Err(MoebiusError::NotLoxodromic) => continue,
                    Err(MoebiusError::NotCertified) => continue,
                    Err(MoebiusError::Exact(e)) => return Err(StarError::Exact(e)),
                }
            }
        }
        factors.push(FactorEvidence { certificate: cert });
    }
    Ok(NonelementaryReport {
        factors,
        violations,
    })
}

/// Star-embeds every enumerated word; the workhorse behind direction
/// clouds and trace reports.
pub fn embed_enumeration<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    max_len: usize,
    cap: usize,
) -> Result<(Vec<ProductIsometry<S>>, bool), StarError> {
    let enumeration = enumerate(gens, max_len, cap)?;
    let truncated = enumeration.truncated;
    let mut out = Vec::with_capacity(enumeration.elements.len());
    for (word, mat) in enumeration.elements.iter() {
        out.push(star_embed_word(mat, word.clone(), ctx, DEFAULT_ORDER_BOUND)?);
    }
    Ok((out, truncated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{field_create, rational_field, FieldElement, NumberField};
    use crate::numeric::DEFAULT_DIGITS;
    use crate::poly::Poly;
    use rug::Rational;
    use std::sync::Arc;

    fn golden() -> Arc<NumberField> {
        field_create(Poly::from_i64(&[-1, -1, 1]), DEFAULT_DIGITS, false).unwrap()
    }

    fn hecke5_gens(f: &Arc<NumberField>) -> Vec<Mat2<FieldElement>> {
        let phi = f.gen();
        let one = f.one();
        let zero = f.zero();
        let s = Mat2::new(zero.clone(), one.clone(), one.neg(), zero.clone()).unwrap();
        let t = Mat2::new(one.clone(), phi, zero, one).unwrap();
        vec![s, t]
    }

    fn hecke5_ctx(f: &Arc<NumberField>) -> StarContext<FieldElement> {
        StarContext::new(f.places.clone())
    }

    fn qmat(entries: [(i64, i64); 4]) -> Mat2<FieldElement> {
        let f = rational_field();
        let el = |(n, d): (i64, i64)| FieldElement::from_rational(&f, Rational::from((n, d)));
        Mat2::new(el(entries[0]), el(entries[1]), el(entries[2]), el(entries[3])).unwrap()
    }

    fn diag_ctx(n: usize) -> StarContext<FieldElement> {
        let f = rational_field();
        StarContext::new(vec![f.places[0].clone(); n])
    }

    #[test]
    fn parabolic_generator_embeds_parabolically() {
        let f = golden();
        let ctx = hecke5_ctx(&f);
        assert_eq!(ctx.q(), 0);
        assert_eq!(ctx.r(), 2);
        let gens = hecke5_gens(&f);
        let pi = star_embed(&gens[1], &ctx, 120).unwrap();
        assert_eq!(pi.types, vec![IsometryType::Parabolic, IsometryType::Parabolic]);
        assert_eq!(pi.product_type(), ProductType::TotallyParabolic);
        // Galois components carry phi and 1 - phi in the upper corner
        let b0 = pi.components[0][0][1].re.to_f64();
        let b1 = pi.components[1][0][1].re.to_f64();
        assert!((b0 - 1.6180339887498949).abs() < 1e-12);
        assert!((b1 + 0.6180339887498949).abs() < 1e-12);
        assert!(translation_direction(&pi, &ctx).unwrap().is_none());
        // identity maps to the identity tuple
        let id = Mat2::identity_like(&f.one());
        let pid = star_embed(&id, &ctx, 120).unwrap();
        assert_eq!(pid.product_type(), ProductType::Identity);
    }

    #[test]
    fn hecke5_t4s_direction() {
        let f = golden();
        let ctx = hecke5_ctx(&f);
        let gens = hecke5_gens(&f);
        let w = gens[1].pow(4).mul(&gens[0]);
        let pi = star_embed(&w, &ctx, 120).unwrap();
        assert!(pi.is_totally_loxodromic());
        // raw traces at the two places
        let t0 = pi.components[0][0][0].re.to_f64() + pi.components[0][1][1].re.to_f64();
        let t1 = pi.components[1][0][0].re.to_f64() + pi.components[1][1][1].re.to_f64();
        assert!((t0 + 6.47213595499958).abs() < 1e-10);
        assert!((t1 - 2.47213595499958).abs() < 1e-10);
        let d = translation_direction(&pi, &ctx).unwrap().unwrap();
        let v = d.to_f64();
        assert!((v[0] - 0.73212).abs() < 1e-4, "got {:?}", v);
        assert!((v[1] - 0.26788).abs() < 1e-4);
        assert!(d.interior);
        assert!(!d.exact_barycenter);
        // jordan projection is half the lengths
        let jp = pi.jordan_projection();
        assert!((jp[0].to_f64() - pi.lengths[0].to_f64() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn hecke5_t2s_boundary_direction() {
        let f = golden();
        let ctx = hecke5_ctx(&f);
        let gens = hecke5_gens(&f);
        let w = gens[1].pow(2).mul(&gens[0]);
        let pi = star_embed(&w, &ctx, 120).unwrap();
        assert_eq!(pi.types[0], IsometryType::Hyperbolic);
        assert_eq!(
            pi.types[1],
            IsometryType::EllipticInfinite {
                order_bound_limited: false
            }
        );
        assert_eq!(pi.product_type(), ProductType::Mixed);
        let d = translation_direction(&pi, &ctx).unwrap().unwrap();
        let v = d.to_f64();
        assert!((v[0] - 1.0).abs() < 1e-15);
        assert!(v[1].abs() < 1e-15);
        assert!(!d.interior);
    }

    #[test]
    fn diagonal_directions_are_exact_barycenter() {
        let ctx = diag_ctx(2);
        let g = qmat([(2, 1), (1, 1), (1, 1), (1, 1)]);
        let pi = star_embed(&g, &ctx, 120).unwrap();
        assert!(pi.is_totally_loxodromic());
        let d = translation_direction(&pi, &ctx).unwrap().unwrap();
        assert!(d.exact_barycenter);
        assert!(d.interior);
        assert!((d.vec[0].to_f64() - 0.5).abs() < 1e-30);
    }

    #[test]
    fn direction_invariance_under_conjugation_and_powers() {
        let f = golden();
        let ctx = hecke5_ctx(&f);
        let gens = hecke5_gens(&f);
        let w = gens[1].pow(4).mul(&gens[0]);
        let pi = star_embed(&w, &ctx, 120).unwrap();
        let d = translation_direction(&pi, &ctx).unwrap().unwrap();
        // conjugation by T
        let conj = gens[1].mul(&w).mul(&gens[1].inverse());
        let pic = star_embed(&conj, &ctx, 120).unwrap();
        let dc = translation_direction(&pic, &ctx).unwrap().unwrap();
        assert!(d.sup_distance(&dc).to_f64() < 1e-30);
        // powers up to 8
        for n in 2..=8 {
            let pin = star_embed(&w.pow(n), &ctx, 120).unwrap();
            let dn = translation_direction(&pin, &ctx).unwrap().unwrap();
            assert!(d.sup_distance(&dn).to_f64() < 1e-30, "power {}", n);
        }
    }

    #[test]
    fn find_totally_loxodromic_examples() {
        // diagonal modular group: first hyperbolic word works
        let ctx = diag_ctx(2);
        let s = qmat([(0, 1), (1, 1), (-1, 1), (0, 1)]);
        let t = qmat([(1, 1), (1, 1), (0, 1), (1, 1)]);
        let found = find_totally_loxodromic(&[s.clone(), t.clone()], &ctx, 6, 100_000)
            .unwrap()
            .expect("hyperbolic words exist by length 6");
        assert!(found.is_totally_loxodromic());
        // Hecke-5 star: some word with both traces outside [-2,2]
        let f = golden();
        let hctx = hecke5_ctx(&f);
        let hgens = hecke5_gens(&f);
        let found = find_totally_loxodromic(&hgens, &hctx, 6, 100_000)
            .unwrap()
            .expect("totally loxodromic word by length 6");
        assert!(found.is_totally_loxodromic());
        // a single elliptic generator never produces one
        let ctx1 = diag_ctx(1);
        let none = find_totally_loxodromic(&[s], &ctx1, 6, 100_000).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn gamma_ne_keeps_and_drops() {
        // diagonal modular group: nothing dropped
        let ctx = diag_ctx(2);
        let s = qmat([(0, 1), (1, 1), (-1, 1), (0, 1)]);
        let t = qmat([(1, 1), (1, 1), (0, 1), (1, 1)]);
        let red = gamma_ne(&[s.clone(), t], &ctx, 6, 100_000).unwrap();
        assert_eq!(red.retained, vec![0, 1]);
        assert!(red.dropped.is_empty());
        // elliptic-only group: everything dropped
        let ctx1 = diag_ctx(1);
        let err = gamma_ne(&[s], &ctx1, 6, 100_000).unwrap_err();
        assert!(matches!(err, StarError::AllFactorsDropped));
    }

    #[test]
    fn nonelementary_certificates() {
        // diagonal modular group: certificates in both factors, no violations
        let ctx = diag_ctx(2);
        let s = qmat([(0, 1), (1, 1), (-1, 1), (0, 1)]);
        let t = qmat([(1, 1), (1, 1), (0, 1), (1, 1)]);
        let rep = nonelementary_evidence(&[s, t], &ctx, 6, 100_000).unwrap();
        assert!(rep.factors.iter().all(|f| f.certificate.is_some()));
        assert!(rep.violations.is_empty());
        // Hecke-5 star: both factors certified
        let f = golden();
        let hctx = hecke5_ctx(&f);
        let hgens = hecke5_gens(&f);
        let rep = nonelementary_evidence(&hgens, &hctx, 6, 100_000).unwrap();
        assert!(rep.factors.iter().all(|f| f.certificate.is_some()));
        assert!(rep.violations.is_empty());
        // single parabolic generator: no evidence, no violations
        let ctx1 = diag_ctx(1);
        let t1 = qmat([(1, 1), (1, 1), (0, 1), (1, 1)]);
        let rep = nonelementary_evidence(&[t1], &ctx1, 5, 100_000).unwrap();
        assert!(rep.factors[0].certificate.is_none());
        assert!(rep.violations.is_empty());
    }
}
