//! Sampled projective limit sets and limit cones: direction clouds with
//! word provenance, the one-point test, Dal'Bo-style length deviation,
//! convexity probes, Furstenberg boundary samples, and the fractional-linear
//! fit deciding whether sampled boundary data sits on a single circle.

use crate::exactnum::{ExactError, Scalar};
use crate::moebius::{fixed_points, schottky_certificate, Mat2, MoebiusError, DEFAULT_ORDER_BOUND};
use crate::numeric::{bits_for, chordal, fmt_float, Cplx, CP1};
use crate::stargroup::{
    embed_enumeration, star_embed, translation_direction, Direction, StarContext, StarError,
};
use crate::words::Word;
use rug::{Float, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LimitSetError {
    #[error("direction cloud is empty")]
    EmptyCloud,
    #[error("pair is not Schottky-certified in every factor")]
    NotCertified,
    #[error("fewer than 3 distinct anchor points for fitting")]
    DegenerateSamples,
    #[error("SVG export supports at most 3 factors, got {0}")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// One sampled translation direction with its provenance word.
#[derive(Debug, Clone)]
pub struct CloudPoint {
    pub word: Word,
    pub lengths: Vec<Float>,
    pub direction: Direction,
}

/// All sampled directions of a group, interior and boundary together.
#[derive(Debug, Clone)]
pub struct DirectionCloud {
    pub points: Vec<CloudPoint>,
    pub factor_count: usize,
    pub interior_count: usize,
    pub boundary_count: usize,
    pub truncated: bool,
}

impl DirectionCloud {
    pub fn interior_points(&self) -> impl Iterator<Item = &CloudPoint> {
        self.points.iter().filter(|p| p.direction.interior)
    }

    /// Sup-norm diameter of the normalized directions (0 for empty/single).
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for k in 0..self.factor_count {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for p in &self.points {
                let v = p.direction.vec[k].to_f64();
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if hi > lo {
                best = best.max(hi - lo);
            }
        }
        best
    }

    /// Per-coordinate min/max of the sampled directions.
    pub fn hull_intervals(&self) -> Vec<(f64, f64)> {
        (0..self.factor_count)
            .map(|k| {
                let vals = self.points.iter().map(|p| p.direction.vec[k].to_f64());
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for v in vals {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                (lo, hi)
            })
            .collect()
    }

    /// Planar convex hull of (dir_1, dir_2) projections, counterclockwise;
    /// intended for 3-factor clouds where directions live in a triangle.
    pub fn hull_2d(&self) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .map(|p| (p.direction.vec[0].to_f64(), p.direction.vec[1].to_f64()))
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        if pts.len() <= 2 {
            return pts;
        }
        let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
            (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
        };
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for &p in pts.iter().chain(pts.iter().rev().skip(1)) {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
        hull
    }
}

/// Enumerates words and collects the direction of every element with some
/// positive component length (interior and boundary alike).
pub fn sample_directions<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    max_len: usize,
    cap: usize,
) -> Result<DirectionCloud, LimitSetError> {
    let (embedded, truncated) = embed_enumeration(gens, ctx, max_len, cap)?;
    let mut points = Vec::new();
    let mut interior_count = 0;
    let mut boundary_count = 0;
    for pi in &embedded {
        if let Some(direction) = translation_direction(pi, ctx)? {
            if direction.interior {
                interior_count += 1;
            } else {
                boundary_count += 1;
            }
            points.push(CloudPoint {
                word: pi.word.clone(),
                lengths: pi.lengths.clone(),
                direction,
            });
        }
    }
    Ok(DirectionCloud {
        points,
        factor_count: ctx.len(),
        interior_count,
        boundary_count,
        truncated,
    })
}

/// Verdict of the one-point test.
#[derive(Debug, Clone)]
pub enum OnePointVerdict {
    /// All directions within `tol` of each other; `exact` is set when every
    /// point carries the exact-barycenter certificate, making the verdict a
    /// proof rather than a numeric observation.
    OnePoint { point: Vec<f64>, exact: bool },
    MultiPoint {
        witness: (Word, Word),
        distance: f64,
    },
}

/// Tests whether the sampled direction set is a single point. With tol = 0
/// the pass requires the exact-barycenter certificate on every point (the
/// purely numeric route can never prove exact equality); with tol > 0 the
/// sup-norm diameter is compared against tol. The witness pair realizes
/// the worst coordinate spread (diameter is computed coordinatewise, so
/// this costs one pass over the cloud).
pub fn one_point_test(
    cloud: &DirectionCloud,
    tol: f64,
) -> Result<OnePointVerdict, LimitSetError> {
    if cloud.points.is_empty() {
        return Err(LimitSetError::EmptyCloud);
    }
    if cloud.points.iter().all(|p| p.direction.exact_barycenter) {
        let k = cloud.factor_count as f64;
        return Ok(OnePointVerdict::OnePoint {
            point: vec![1.0 / k; cloud.factor_count],
            exact: true,
        });
    }
    // coordinatewise extremes with witnesses
    let mut worst: Option<(f64, usize, usize)> = None;
    for k in 0..cloud.factor_count {
        let mut lo = (f64::INFINITY, 0usize);
        let mut hi = (f64::NEG_INFINITY, 0usize);
        for (i, p) in cloud.points.iter().enumerate() {
            let v = p.direction.vec[k].to_f64();
            if v < lo.0 {
                lo = (v, i);
            }
            if v > hi.0 {
                hi = (v, i);
            }
        }
        let spread = hi.0 - lo.0;
        if worst.map_or(true, |(w, _, _)| spread > w) {
            worst = Some((spread, lo.1, hi.1));
        }
    }
    let (diameter, i, j) = worst.expect("nonempty cloud");
    if diameter <= tol {
        Ok(OnePointVerdict::OnePoint {
            point: cloud.points[0].direction.to_f64(),
            exact: false,
        })
    } else {
        Ok(OnePointVerdict::MultiPoint {
            witness: (cloud.points[i].word.clone(), cloud.points[j].word.clone()),
            distance: diameter,
        })
    }
}

/// Per-factor componentwise translation lengths of an element.
fn component_lengths<S: Scalar>(
    g: &Mat2<S>,
    ctx: &StarContext<S>,
) -> Result<Vec<Float>, StarError> {
    Ok(star_embed(g, ctx, DEFAULT_ORDER_BOUND)?.lengths)
}

/// Additivity deviation table: per factor, max over the grid of
/// |l(g^m h^n) - m l(g) - n l(h)|, 1 <= m, n <= grid.
#[derive(Debug, Clone)]
pub struct DeviationReport {
    pub grid: usize,
    /// Common Schottky power applied to both elements before measuring
    /// (1 when measured raw).
    pub power: u32,
    pub per_factor_max: Vec<f64>,
    pub max: f64,
}

/// Raw deviation table without any certification gate; `dalbo_deviation`
/// is the certified entry point.
pub fn deviation_table<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    ctx: &StarContext<S>,
    grid: usize,
) -> Result<DeviationReport, LimitSetError> {
    let lg = component_lengths(g, ctx)?;
    let lh = component_lengths(h, ctx)?;
    let mut per_factor_max = vec![0.0f64; ctx.len()];
    let mut gm = g.clone();
    for m in 1..=grid {
        let mut gmhn = gm.mul(h);
        for n in 1..=grid {
            let lw = component_lengths(&gmhn, ctx)?;
            for k in 0..ctx.len() {
                let expected = (m as f64) * lg[k].to_f64() + (n as f64) * lh[k].to_f64();
                let dev = (lw[k].to_f64() - expected).abs();
                if dev > per_factor_max[k] {
                    per_factor_max[k] = dev;
                }
            }
            if n < grid {
                gmhn = gmhn.mul(h);
            }
        }
        if m < grid {
            gm = gm.mul(g);
        }
    }
    let max = per_factor_max.iter().cloned().fold(0.0, f64::max);
    Ok(DeviationReport {
        grid,
        power: 1,
        per_factor_max,
        max,
    })
}

/// Certifies the pair factor by factor (powering both elements to the
/// largest certification power found), then measures the deviation table
/// on the certified powers.
pub fn dalbo_deviation<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    ctx: &StarContext<S>,
    grid: usize,
) -> Result<DeviationReport, LimitSetError> {
    let n = certify_pair(g, h, ctx)?;
    let gp = g.pow(n as i64);
    let hp = h.pow(n as i64);
    let mut rep = deviation_table(&gp, &hp, ctx, grid)?;
    rep.power = n;
    Ok(rep)
}

/// Largest per-factor common Schottky power for the pair, or NotCertified.
fn certify_pair<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    ctx: &StarContext<S>,
) -> Result<u32, LimitSetError> {
    let mut n = 1u32;
    for pl in &ctx.places {
        match schottky_certificate(g, h, pl, 8) {
            Ok(Some(cert)) => n = n.max(cert.n),
            Ok(None) => return Err(LimitSetError::NotCertified),
            Err(MoebiusError::Exact(e)) => return Err(LimitSetError::Exact(e)),
            Err(_) => return Err(LimitSetError::NotCertified),
        }
    }
    Ok(n)
}

/// Convexity probe: directions of g^{km} h^{kn} against the predicted
/// mixture normalize(m L(g) + n L(h)).
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub lambda: Rational,
    pub predicted: Vec<f64>,
    /// (k, sup-distance to prediction) for k = 1..k_max.
    pub distances: Vec<(usize, f64)>,
    pub reached: bool,
}

/// Uncertified core of the probe; `convexity_probe` adds the certification
/// gate. lambda = n/m must be a nonnegative rational.
pub fn convexity_sequence<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    ctx: &StarContext<S>,
    lambda: &Rational,
    k_max: usize,
    tol: f64,
) -> Result<ConvexityReport, LimitSetError> {
    assert!(lambda.cmp0() != std::cmp::Ordering::Less, "lambda >= 0");
    let m = lambda.denom().to_u32().expect("small denominator") as usize;
    let n = lambda.numer().to_u32().expect("small numerator") as usize;
    assert!(m >= 1);
    let lg = component_lengths(g, ctx)?;
    let lh = component_lengths(h, ctx)?;
    let mut mixture: Vec<f64> = (0..ctx.len())
        .map(|k| (m as f64) * lg[k].to_f64() + (n as f64) * lh[k].to_f64())
        .collect();
    let s: f64 = mixture.iter().sum();
    assert!(s > 0.0, "mixture needs a positive length");
    for v in &mut mixture {
        *v /= s;
    }
    let gm = g.pow(m as i64);
    let hn = h.pow(n as i64);
    let mut distances = Vec::with_capacity(k_max);
    let mut gacc = Mat2::identity_like(&g.a);
    let mut hacc = gacc.clone();
    for k in 1..=k_max {
        gacc = gacc.mul(&gm);
        hacc = hacc.mul(&hn);
        let w = gacc.mul(&hacc);
        let lw = component_lengths(&w, ctx)?;
        let sw: f64 = lw.iter().map(|x| x.to_f64()).sum();
        let dist = if sw > 0.0 {
            let mut d = 0.0f64;
            for i in 0..ctx.len() {
                d = d.max((lw[i].to_f64() / sw - mixture[i]).abs());
            }
            d
        } else {
            f64::INFINITY
        };
        distances.push((k, dist));
    }
    let reached = distances.last().map_or(false, |(_, d)| *d < tol);
    Ok(ConvexityReport {
        lambda: lambda.clone(),
        predicted: mixture,
        distances,
        reached,
    })
}

/// Certified convexity probe: the pair must be Schottky-certified in every
/// factor; the sequence is then measured on the certified powers (the
/// normalized mixture is invariant under common powering).
pub fn convexity_probe<S: Scalar>(
    g: &Mat2<S>,
    h: &Mat2<S>,
    ctx: &StarContext<S>,
    lambda: &Rational,
    k_max: usize,
    tol: f64,
) -> Result<ConvexityReport, LimitSetError> {
    let n = certify_pair(g, h, ctx)?;
    let gp = g.pow(n as i64);
    let hp = h.pow(n as i64);
    convexity_sequence(&gp, &hp, ctx, lambda, k_max, tol)
}

/// Componentwise attractive fixed points of one totally loxodromic element.
#[derive(Debug, Clone)]
pub struct FurstenbergSample {
    pub word: Word,
    pub points: Vec<CP1>,
}

/// One sample per totally loxodromic enumerated element.
pub fn furstenberg_samples<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    max_len: usize,
    cap: usize,
) -> Result<Vec<FurstenbergSample>, LimitSetError> {
    let (embedded, _) = embed_enumeration(gens, ctx, max_len, cap)?;
    let mut out = Vec::new();
    for pi in &embedded {
        if !pi.is_totally_loxodromic() {
            continue;
        }
        let mut points = Vec::with_capacity(ctx.len());
        for pl in &ctx.places {
            let (att, _) = fixed_points(&pi.matrix, pl, DEFAULT_ORDER_BOUND)?;
            points.push(att);
        }
        out.push(FurstenbergSample {
            word: pi.word.clone(),
            points,
        });
    }
    Ok(out)
}

/// A fitted boundary identification for one non-anchor factor.
#[derive(Debug, Clone)]
pub struct FactorFit {
    /// Factor index the first factor is matched against.
    pub factor: usize,
    /// Whether the better fit pre-applies complex conjugation.
    pub conjugated: bool,
    pub matrix: [[Cplx; 2]; 2],
    /// Max chordal residual over the held-out (non-anchor) samples.
    pub max_residual: f64,
}

#[derive(Debug, Clone)]
pub struct MoebiusFit {
    pub factors: Vec<FactorFit>,
}

impl MoebiusFit {
    pub fn max_residual(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| f.max_residual)
            .fold(0.0, f64::max)
    }
}

fn cp1_to_cplx(p: &CP1) -> Option<Cplx> {
    p.finite().cloned()
}

/// Cross-ratio matrix sending (z1, z2, z3) to (0, 1, infinity); entries of
/// `None` denote infinity among the anchors.
fn cross_ratio_matrix(z: [&CP1; 3], bits: u32) -> [[Cplx; 2]; 2] {
    let one = Cplx::from_real(Float::with_val(bits, 1));
    let zero = Cplx::zero(bits);
    match (cp1_to_cplx(z[0]), cp1_to_cplx(z[1]), cp1_to_cplx(z[2])) {
        (Some(z1), Some(z2), Some(z3)) => {
            let d23 = z2.sub(&z3);
            let d21 = z2.sub(&z1);
            [
                [d23.clone(), z1.mul(&d23).neg()],
                [d21.clone(), z3.mul(&d21).neg()],
            ]
        }
        (None, Some(z2), Some(z3)) => {
            // z -> (z2 - z3)/(z - z3)
            [[zero.clone(), z2.sub(&z3)], [one, z3.neg()]]
        }
        (Some(z1), None, Some(z3)) => {
            // z -> (z - z1)/(z - z3)
            [[one.clone(), z1.neg()], [one, z3.neg()]]
        }
        (Some(z1), Some(z2), None) => {
            // z -> (z - z1)/(z2 - z1)
            [[one, z1.neg()], [zero, z2.sub(&z1)]]
        }
        _ => unreachable!("anchors are pairwise distinct"),
    }
}

fn mat_inv_2(m: &[[Cplx; 2]; 2]) -> [[Cplx; 2]; 2] {
    let det = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
    let di = det.inv();
    [
        [m[1][1].mul(&di), m[0][1].neg().mul(&di)],
        [m[1][0].neg().mul(&di), m[0][0].mul(&di)],
    ]
}

fn mat_mul_2(x: &[[Cplx; 2]; 2], y: &[[Cplx; 2]; 2]) -> [[Cplx; 2]; 2] {
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

fn apply_cp1(m: &[[Cplx; 2]; 2], z: &CP1, bits: u32) -> CP1 {
    let tiny = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 24));
    match z {
        CP1::Infinity => {
            if m[1][0].abs() < tiny {
                CP1::Infinity
            } else {
                CP1::Finite(m[0][0].div(&m[1][0]))
            }
        }
        CP1::Finite(z) => {
            let num = m[0][0].mul(z).add(&m[0][1]);
            let den = m[1][0].mul(z).add(&m[1][1]);
            if den.abs() < tiny * num.abs().max(&Float::with_val(bits, 1)) {
                CP1::Infinity
            } else {
                CP1::Finite(num.div(&den))
            }
        }
    }
}

fn conj_cp1(z: &CP1) -> CP1 {
    match z {
        CP1::Infinity => CP1::Infinity,
        CP1::Finite(w) => CP1::Finite(w.conj()),
    }
}

/// Fits, for every factor beyond the first, a fractional-linear map (with
/// or without a preceding complex conjugation; the better of the two is
/// kept) sending the first-factor boundary samples to that factor's, then
/// reports the max residual over held-out samples. Anchors are chosen
/// greedily for maximal pairwise chordal separation.
pub fn moebius_fit(samples: &[FurstenbergSample]) -> Result<MoebiusFit, LimitSetError> {
    if samples.len() < 4 {
        return Err(LimitSetError::DegenerateSamples);
    }
    let factor_count = samples[0].points.len();
    let bits = match &samples[0].points[0] {
        CP1::Finite(z) => z.prec(),
        CP1::Infinity => bits_for(120),
    };
    // greedy anchor selection on the first coordinate
    let firsts: Vec<&CP1> = samples.iter().map(|s| &s.points[0]).collect();
    let npts = firsts.len();
    let mut best_pair = (0usize, 1usize);
    let mut best_d = Float::with_val(bits, -1);
    for i in 0..npts {
        for j in (i + 1)..npts {
            let d = chordal(firsts[i], firsts[j], bits);
            if d > best_d {
                best_d = d;
                best_pair = (i, j);
            }
        }
    }
    let (a0, a1) = best_pair;
    let mut a2 = None;
    let mut best_min = Float::with_val(bits, -1);
    for k in 0..npts {
        if k == a0 || k == a1 {
            continue;
        }
        let d0 = chordal(firsts[k], firsts[a0], bits);
        let d1 = chordal(firsts[k], firsts[a1], bits);
        let dmin = if d0 < d1 { d0 } else { d1 };
        if dmin > best_min {
            best_min = dmin;
            a2 = Some(k);
        }
    }
    let a2 = a2.ok_or(LimitSetError::DegenerateSamples)?;
    let sep = Float::with_val(bits, Float::i_exp(1, -(bits as i32) / 2));
    if best_d <= sep || best_min <= sep {
        return Err(LimitSetError::DegenerateSamples);
    }
    let anchors = [a0, a1, a2];
    let a_first = cross_ratio_matrix(
        [firsts[a0], firsts[a1], firsts[a2]],
        bits,
    );
    let a_first_conj = cross_ratio_matrix(
        [
            &conj_cp1(firsts[a0]),
            &conj_cp1(firsts[a1]),
            &conj_cp1(firsts[a2]),
        ],
        bits,
    );
    let mut factors = Vec::new();
    for f in 1..factor_count {
        let tgt = [
            &samples[a0].points[f],
            &samples[a1].points[f],
            &samples[a2].points[f],
        ];
        let b = cross_ratio_matrix(tgt, bits);
        let binv = mat_inv_2(&b);
        let plain = mat_mul_2(&binv, &a_first);
        let conj = mat_mul_2(&binv, &a_first_conj);
        let mut best: Option<FactorFit> = None;
        for (conjugated, m) in [(false, plain), (true, conj)] {
            let mut max_res = 0.0f64;
            for (i, s) in samples.iter().enumerate() {
                if anchors.contains(&i) {
                    continue;
                }
                let src = if conjugated {
                    conj_cp1(&s.points[0])
                } else {
                    s.points[0].clone()
                };
                let img = apply_cp1(&m, &src, bits);
                let res = chordal(&img, &s.points[f], bits).to_f64();
                max_res = max_res.max(res);
            }
            if best.as_ref().map_or(true, |b| max_res < b.max_residual) {
                best = Some(FactorFit {
                    factor: f,
                    conjugated,
                    matrix: m,
                    max_residual: max_res,
                });
            }
        }
        factors.push(best.expect("two candidate fits"));
    }
    Ok(MoebiusFit { factors })
}

/// Export formats for clouds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
    Svg,
}

/// Renders a cloud as CSV, JSON, or an 800x800 SVG scatter. `timestamp`
/// is caller-provided so exports can be byte-identical when omitted.
pub fn export_cloud(
    cloud: &DirectionCloud,
    names: &[&str],
    format: ExportFormat,
    label: &str,
    timestamp: Option<&str>,
) -> Result<String, LimitSetError> {
    match format {
        ExportFormat::Csv => Ok(cloud_csv(cloud, names)),
        ExportFormat::Json => Ok(cloud_json(cloud, names, label, timestamp)),
        ExportFormat::Svg => cloud_svg(cloud, names, label, timestamp),
    }
}

fn sig17(x: &Float) -> String {
    fmt_float(x, 17)
}

fn cloud_csv(cloud: &DirectionCloud, names: &[&str]) -> String {
    let k = cloud.factor_count;
    let mut s = String::from("word,len");
    for i in 1..=k {
        s.push_str(&format!(",l_{}", i));
    }
    for i in 1..=k {
        s.push_str(&format!(",dir_{}", i));
    }
    s.push_str(",interior\n");
    for p in &cloud.points {
        s.push_str(&format!(
            "\"{}\",{}",
            p.word.format_with_names(names),
            p.word.len()
        ));
        for l in &p.lengths {
            s.push(',');
            s.push_str(&sig17(l));
        }
        for d in &p.direction.vec {
            s.push(',');
            s.push_str(&sig17(d));
        }
        s.push(',');
        s.push_str(if p.direction.interior { "true" } else { "false" });
        s.push('\n');
    }
    s
}

fn cloud_json(
    cloud: &DirectionCloud,
    names: &[&str],
    label: &str,
    timestamp: Option<&str>,
) -> String {
    let mut root = serde_json::Map::new();
    root.insert("group".into(), serde_json::Value::String(label.into()));
    if let Some(ts) = timestamp {
        root.insert("timestamp".into(), serde_json::Value::String(ts.into()));
    }
    root.insert("factor_count".into(), serde_json::json!(cloud.factor_count));
    root.insert(
        "interior_count".into(),
        serde_json::json!(cloud.interior_count),
    );
    root.insert(
        "boundary_count".into(),
        serde_json::json!(cloud.boundary_count),
    );
    root.insert("truncated".into(), serde_json::json!(cloud.truncated));
    let pts: Vec<serde_json::Value> = cloud
        .points
        .iter()
        .map(|p| {
            serde_json::json!({
                "word": p.word.format_with_names(names),
                "len": p.word.len(),
                "lengths": p.lengths.iter().map(sig17).collect::<Vec<_>>(),
                "direction": p.direction.vec.iter().map(sig17).collect::<Vec<_>>(),
                "interior": p.direction.interior,
                "exact_barycenter": p.direction.exact_barycenter,
            })
        })
        .collect();
    root.insert("points".into(), serde_json::Value::Array(pts));
    serde_json::to_string_pretty(&serde_json::Value::Object(root)).expect("serializable")
}

fn cloud_svg(
    cloud: &DirectionCloud,
    _names: &[&str],
    label: &str,
    timestamp: Option<&str>,
) -> Result<String, LimitSetError> {
    let k = cloud.factor_count;
    if k > 3 {
        return Err(LimitSetError::UnsupportedDimension(k));
    }
    let mut s = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" \
         viewBox=\"0 0 800 800\">\n",
    );
    s.push_str("<rect width=\"800\" height=\"800\" fill=\"white\"/>\n");
    let caption = match timestamp {
        Some(ts) => format!("{} ({})", label, ts),
        None => label.to_string(),
    };
    s.push_str(&format!(
        "<text x=\"400\" y=\"40\" text-anchor=\"middle\" font-size=\"20\" \
         font-family=\"sans-serif\">{}</text>\n",
        caption
    ));
    let mark = |s: &mut String, x: f64, y: f64, interior: bool| {
        let color = if interior { "#1f3d99" } else { "#b03030" };
        s.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"{}\" fill-opacity=\"0.6\"/>\n",
            x, y, color
        ));
    };
    match k {
        1 => {
            s.push_str("<circle cx=\"400\" cy=\"400\" r=\"8\" fill=\"#1f3d99\"/>\n");
        }
        2 => {
            // the segment dir_1 in [0,1], drawn horizontally
            s.push_str(
                "<line x1=\"40\" y1=\"400\" x2=\"760\" y2=\"400\" stroke=\"black\"/>\n",
            );
            s.push_str(
                "<text x=\"40\" y=\"430\" font-size=\"14\" font-family=\"sans-serif\">0</text>\n",
            );
            s.push_str(
                "<text x=\"754\" y=\"430\" font-size=\"14\" font-family=\"sans-serif\">1</text>\n",
            );
            for p in &cloud.points {
                let x = 40.0 + 720.0 * p.direction.vec[0].to_f64();
                mark(&mut s, x, 400.0, p.direction.interior);
            }
        }
        3 => {
            // barycentric triangle with vertices for the three factors
            let v = [(400.0, 80.0), (80.0, 680.0), (720.0, 680.0)];
            s.push_str(&format!(
                "<polygon points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"black\"/>\n",
                v[0].0, v[0].1, v[1].0, v[1].1, v[2].0, v[2].1
            ));
            for p in &cloud.points {
                let d: Vec<f64> = p.direction.to_f64();
                let x = d[0] * v[0].0 + d[1] * v[1].0 + d[2] * v[2].0;
                let y = d[0] * v[0].1 + d[1] * v[1].1 + d[2] * v[2].1;
                mark(&mut s, x, y, p.direction.interior);
            }
        }
        _ => unreachable!(),
    }
    s.push_str("</svg>\n");
    Ok(s)
}
