//! Dense univariate polynomials over arbitrary-precision rationals.
//!
//! Provides the exact machinery the number-field layer is built on: Sturm
//! sequences with exact rational bisection for real roots, a Durand-Kerner
//! iteration for complex roots at working precision, and an irreducibility
//! test over Q for degrees up to 4 (rational-root screening, reduction mod
//! small primes, and an exact search for quadratic factors).

use crate::numeric::{bits_for, Cplx};
use rug::ops::Pow;
use rug::{Integer, Rational};
use std::cmp::Ordering;

/// Coefficients in ascending degree order; no trailing zeros; empty = zero.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Poly {
    pub c: Vec<Rational>,
}

fn rat(n: i64) -> Rational {
    Rational::from(n)
}

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().map_or(false, |x| x.cmp0() == Ordering::Equal) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn one() -> Self {
        Poly { c: vec![rat(1)] }
    }

    pub fn x() -> Self {
        Poly {
            c: vec![rat(0), rat(1)],
        }
    }

    pub fn constant(q: Rational) -> Self {
        Poly::new(vec![q])
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&x| rat(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().map_or(false, |x| *x == rat(1))
    }

    pub fn leading(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(|| rat(0))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut out = vec![rat(0); n];
        for (i, v) in self.c.iter().enumerate() {
            out[i] += v;
        }
        for (i, v) in o.c.iter().enumerate() {
            out[i] += v;
        }
        Poly::new(out)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut out = vec![rat(0); n];
        for (i, v) in self.c.iter().enumerate() {
            out[i] += v;
        }
        for (i, v) in o.c.iter().enumerate() {
            out[i] -= v;
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            c: self.c.iter().map(|x| Rational::from(-x)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![rat(0); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::new(self.c.iter().map(|x| Rational::from(x * s)).collect())
    }

    /// Euclidean division; panics on zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = d.deg();
        let lead = d.leading();
        if r.len() <= dd {
            return (Poly::zero(), Poly::new(r));
        }
        let mut q = vec![rat(0); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = Rational::from(&r[i] / &lead);
            if coef.cmp0() != Ordering::Equal {
                q[i - dd] = coef.clone();
                for (j, dc) in d.c.iter().enumerate() {
                    let t = Rational::from(dc * &coef);
                    r[i - dd + j] -= t;
                }
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, x)| Rational::from(x * &rat(i as i64 + 1)))
                .collect(),
        )
    }

    /// Extended gcd: returns (g, s, t) with s·self + t·o = g, g monic (or zero).
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Rational::from(r0.leading().recip_ref());
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = Rational::from(a.leading().recip_ref());
        a.scale(&inv)
    }

    pub fn eval_rat(&self, x: &Rational) -> Rational {
        let mut acc = rat(0);
        for c in self.c.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, x: &rug::Float) -> rug::Float {
        let b = x.prec();
        let mut acc = rug::Float::with_val(b, 0);
        for c in self.c.iter().rev() {
            acc *= x;
            acc += rug::Float::with_val(b, c);
        }
        acc
    }

    pub fn eval_cplx(&self, z: &Cplx) -> Cplx {
        let b = z.prec();
        let mut acc = Cplx::zero(b);
        for c in self.c.iter().rev() {
            acc = acc.mul(z);
            acc.re += rug::Float::with_val(b, c);
        }
        acc
    }

    /// Interval Horner evaluation over [lo, hi]; exact rational bounds.
    pub fn eval_interval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut alo = rat(0);
        let mut ahi = rat(0);
        for c in self.c.iter().rev() {
            let (nlo, nhi) = interval_mul(&alo, &ahi, lo, hi);
            alo = nlo + c;
            ahi = nhi + c;
        }
        (alo, ahi)
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval_rat(x).cmp0()
    }

    /// Cauchy bound: every root satisfies |z| <= 1 + max|c_i|/|c_n|.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading();
        let mut m = rat(0);
        for c in &self.c[..self.c.len() - 1] {
            let a = Rational::from(c / &lead).abs();
            if a > m {
                m = a;
            }
        }
        m + rat(1)
    }

    fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].divrem(&seq[n - 1]);
            seq.push(r.neg());
        }
        seq.pop();
        seq
    }

    fn sign_variations(seq: &[Poly], x: &Rational) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for p in seq {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_roots_half_open(&self, a: &Rational, b: &Rational) -> usize {
        let seq = self.sturm_sequence();
        Poly::sign_variations(&seq, a) - Poly::sign_variations(&seq, b)
    }

    pub fn count_real_roots(&self) -> usize {
        let m = self.root_bound();
        let lo = Rational::from(-&m) - rat(1);
        let hi = m + rat(1);
        self.count_roots_half_open(&lo, &hi)
    }

    /// True iff every complex root is real and lies in [lo, hi].
    pub fn all_roots_real_in(&self, lo: &Rational, hi: &Rational) -> bool {
        // Squarefree part so multiplicities cannot hide roots from Sturm counts.
        let sf = self.squarefree_part();
        let deg = sf.deg();
        if sf.count_real_roots() != deg {
            return false;
        }
        let m = sf.root_bound() + rat(1);
        let below = sf.count_roots_half_open(&Rational::from(-&m), lo);
        let inside = sf.count_roots_half_open(lo, hi);
        let below_adj = below - usize::from(sf.sign_at(lo) == Ordering::Equal);
        below_adj == 0 && inside + usize::from(sf.sign_at(lo) == Ordering::Equal) == deg
    }

    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) || g.is_zero() {
            let inv = Rational::from(self.leading().recip_ref());
            return self.scale(&inv);
        }
        let (q, _) = self.divrem(&g);
        let inv = Rational::from(q.leading().recip_ref());
        q.scale(&inv)
    }

    /// Isolating intervals (lo, hi) with exactly one real root each, sorted
    /// ascending. The polynomial must be squarefree with no rational roots,
    /// except in degree 1 where the root is returned as a point interval.
    pub fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        if self.deg() == 1 {
            let r = Rational::from(-&self.c[0]) / &self.c[1];
            return vec![(r.clone(), r)];
        }
        let seq = self.sturm_sequence();
        let m = self.root_bound() + rat(1);
        let lo = Rational::from(-&m);
        let mut stack = vec![(lo.clone(), m.clone())];
        let mut out = vec![];
        while let Some((a, b)) = stack.pop() {
            let n = Poly::sign_variations(&seq, &a) - Poly::sign_variations(&seq, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push((a, b));
                continue;
            }
            let mid = Rational::from(&a + &b) / rat(2);
            debug_assert!(
                self.sign_at(&mid) != Ordering::Equal,
                "rational root encountered during isolation"
            );
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Shrinks an isolating interval by bisection until hi - lo <= width.
    pub fn refine_root(&self, iv: (Rational, Rational), width: &Rational) -> (Rational, Rational) {
        let (mut a, mut b) = iv;
        if a == b {
            return (a, b);
        }
        let sa = self.sign_at(&a);
        debug_assert!(sa != Ordering::Equal && self.sign_at(&b) != Ordering::Equal);
        let mut sign_a = sa;
        while Rational::from(&b - &a) > *width {
            let mid = Rational::from(&a + &b) / rat(2);
            let sm = self.sign_at(&mid);
            debug_assert!(sm != Ordering::Equal, "rational root hit during refinement");
            if sm == sign_a {
                a = mid;
            } else {
                b = mid;
                let _ = &mut sign_a;
            }
        }
        (a, b)
    }

    /// All complex roots at the requested precision via Durand-Kerner, with
    /// residual certification |p(z)| < 10^-(digits/2). Deterministic.
    pub fn complex_roots(&self, digits: u32) -> Vec<Cplx> {
        let n = self.deg();
        let bits = bits_for(2 * digits);
        let lead = self.leading();
        let monic: Vec<Cplx> = self
            .c
            .iter()
            .map(|c| {
                Cplx::from_real(crate::numeric::float_from_rational(
                    &Rational::from(c / &lead),
                    bits,
                ))
            })
            .collect();
        let eval = |z: &Cplx| -> Cplx {
            let mut acc = Cplx::zero(bits);
            for c in monic.iter().rev() {
                acc = acc.mul(z).add(c);
            }
            acc
        };
        let radius = {
            let rb = self.root_bound();
            crate::numeric::float_from_rational(&rb, bits)
        };
        let mut zs: Vec<Cplx> = (0..n)
            .map(|k| {
                // spread start points off the real axis to break symmetry
                let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.41;
                let c = Cplx::from_f64(ang.cos(), ang.sin(), bits);
                c.scale(&radius)
            })
            .collect();
        let tol = crate::numeric::pow10_neg(2 * digits - 5, bits);
        for _ in 0..800 {
            let mut maxstep = rug::Float::with_val(bits, 0);
            let snapshot = zs.clone();
            for k in 0..n {
                let mut den = Cplx::from_real(rug::Float::with_val(bits, 1));
                for (j, zj) in snapshot.iter().enumerate() {
                    if j != k {
                        den = den.mul(&snapshot[k].sub(zj));
                    }
                }
                let step = eval(&snapshot[k]).div(&den);
                let st = step.abs();
                if st > maxstep {
                    maxstep = st.clone();
                }
                zs[k] = zs[k].sub(&step);
            }
            if maxstep < tol {
                break;
            }
        }
        let resid_cap = crate::numeric::pow10_neg(digits / 2, bits);
        for z in &zs {
            let r = eval(z).abs();
            assert!(
                r < resid_cap,
                "root residual {} exceeds certification threshold",
                r
            );
        }
        zs
    }

    /// Certified root isolation in C for a squarefree polynomial: disks
    /// (center, radius) that are pairwise disjoint and contain exactly one
    /// root each. For any point z, the nearest root lies within
    /// n·|p(z)/p'(z)|, so once those disks separate they isolate. Returns
    /// None when the requested precision cannot separate them.
    pub fn certified_root_disks(&self, digits: u32) -> Option<Vec<(Cplx, rug::Float)>> {
        let n = self.deg();
        let zs = self.complex_roots(digits);
        let bits = zs[0].prec();
        let dp = self.derivative();
        // crude rigorous evaluation-error budget for Horner at these bits
        let coef_sum: Rational = self.c.iter().map(|c| Rational::from(c.abs_ref())).sum();
        let dcoef_sum: Rational = dp.c.iter().map(|c| Rational::from(c.abs_ref())).sum();
        let mut disks = Vec::with_capacity(n);
        for z in &zs {
            let zmag = rug::Float::with_val(bits, 1 + z.abs());
            let pow = zmag.pow((n as u32).max(1));
            let slack = rug::Float::with_val(bits, rug::Float::i_exp(1, 16 - bits as i32));
            let base = rug::Float::with_val(bits, &slack * &pow);
            let err_p =
                rug::Float::with_val(bits, &base * &crate::numeric::float_from_rational(&coef_sum, bits));
            let err_dp =
                rug::Float::with_val(bits, &base * &crate::numeric::float_from_rational(&dcoef_sum, bits));
            let pv = self.eval_cplx(z).abs() + err_p;
            let dv = dp.eval_cplx(z).abs() - err_dp;
            if dv <= 0 {
                return None;
            }
            let r = rug::Float::with_val(bits, n) * pv / dv * rug::Float::with_val(bits, 1.000001);
            disks.push((z.clone(), rug::Float::with_val(bits, r)));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let d = disks[i].0.dist(&disks[j].0);
                let rr = rug::Float::with_val(bits, &disks[i].1 + &disks[j].1);
                if d <= rr * rug::Float::with_val(bits, 1.000001) {
                    return None;
                }
            }
        }
        Some(disks)
    }

    /// Scales denominators away: returns the monic integer polynomial q with
    /// q(y) = k^n p(y/k), plus k. Irreducibility over Q is preserved.
    fn monic_integer_model(&self) -> (Vec<Integer>, Integer) {
        let mut k = Integer::from(1);
        for c in &self.c {
            k = k.lcm(&c.denom().clone());
        }
        let n = self.deg();
        let kq = Rational::from((k.clone(), Integer::from(1)));
        let mut pow = Rational::from(1);
        let mut out = vec![Integer::from(0); n + 1];
        for i in (0..=n).rev() {
            let v = Rational::from(&self.c[i] * &pow);
            debug_assert_eq!(*v.denom(), Integer::from(1));
            out[i] = v.numer().clone();
            pow *= &kq;
        }
        (out, k)
    }

    /// Irreducibility over Q for monic polynomials of degree <= 4.
    /// Degrees above 4 return None (caller decides via an explicit flag).
    pub fn irreducible_over_q(&self) -> Option<bool> {
        let n = self.deg();
        if n == 0 {
            return Some(false);
        }
        if n == 1 {
            return Some(true);
        }
        if n > 4 {
            return None;
        }
        let (ic, _) = self.monic_integer_model();
        if has_integer_root(&ic) {
            return Some(false);
        }
        if n <= 3 {
            return Some(true);
        }
        // quartic: a linear factor is excluded; either irreducible mod some
        // small prime, or we search monic quadratic factors exactly.
        for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if let Some(true) = irreducible_mod_p(&ic, p) {
                return Some(true);
            }
        }
        Some(!has_monic_quadratic_factor(&ic))
    }
}

fn interval_mul(
    alo: &Rational,
    ahi: &Rational,
    blo: &Rational,
    bhi: &Rational,
) -> (Rational, Rational) {
    let cands = [
        Rational::from(alo * blo),
        Rational::from(alo * bhi),
        Rational::from(ahi * blo),
        Rational::from(ahi * bhi),
    ];
    let mut lo = cands[0].clone();
    let mut hi = cands[0].clone();
    for c in &cands[1..] {
        if *c < lo {
            lo = c.clone();
        }
        if *c > hi {
            hi = c.clone();
        }
    }
    (lo, hi)
}

/// Exact rational enclosure of sqrt(x) for x in [lo, hi], lo > 0.
/// Tightness is ~10^-digits.
pub fn sqrt_interval(lo: &Rational, hi: &Rational, digits: u32) -> (Rational, Rational) {
    let scale = Integer::from(10).pow(digits);
    let s2 = Integer::from(&scale * &scale);
    // floor sqrt of lo * 10^(2d)
    let lnum = Integer::from(lo.numer() * &s2) / lo.denom();
    let lroot = lnum.sqrt();
    let slo = Rational::from((lroot, scale.clone()));
    let hnum = Integer::from(hi.numer() * &s2) / hi.denom();
    let hroot = hnum.sqrt() + Integer::from(1);
    let shi = Rational::from((hroot, scale));
    (slo, shi)
}

fn has_integer_root(ic: &[Integer]) -> bool {
    // monic integral: rational roots are integer divisors of the constant term
    let c0 = &ic[0];
    if c0.cmp0() == Ordering::Equal {
        return true;
    }
    let divisors = small_divisors(&c0.clone().abs());
    let eval = |x: &Integer| -> Integer {
        let mut acc = Integer::from(0);
        for c in ic.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    };
    for d in divisors {
        let neg = Integer::from(-&d);
        if eval(&d).cmp0() == Ordering::Equal || eval(&neg).cmp0() == Ordering::Equal {
            return true;
        }
    }
    false
}

/// All positive divisors, via trial division. Panics only for adversarially
/// huge semiprime constants, which the degree-4 ceiling keeps out of scope.
fn small_divisors(n: &Integer) -> Vec<Integer> {
    let mut rest = n.clone();
    let mut factors: Vec<(Integer, u32)> = vec![];
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= rest && p < 1_000_000 {
        let mut e = 0;
        while rest.is_divisible(&p) {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let mut divs = vec![Integer::from(1)];
    for (p, e) in factors {
        let mut next = vec![];
        for d in &divs {
            let mut pk = Integer::from(1);
            for _ in 0..=e {
                next.push(Integer::from(d * &pk));
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

/// Some(true) if the monic integer quartic is irreducible mod p; None when
/// the reduction is degenerate (non-squarefree mod p).
fn irreducible_mod_p(ic: &[Integer], p: u32) -> Option<bool> {
    let pi = Integer::from(p);
    let red: Vec<u64> = ic
        .iter()
        .map(|c| {
            let m = Integer::from(c % &pi);
            let m = if m.cmp0() == Ordering::Less { m + &pi } else { m };
            m.to_u64().unwrap()
        })
        .collect();
    let n = red.len() - 1;
    let evalp = |cs: &[u64], x: u64| -> u64 {
        let mut acc = 0u64;
        for c in cs.iter().rev() {
            acc = (acc * x + *c) % p as u64;
        }
        acc
    };
    // squarefree check: gcd(f, f') != 1 means inconclusive
    for x in 0..p as u64 {
        if evalp(&red, x) == 0 {
            return Some(false);
        }
    }
    if n <= 3 {
        return Some(true);
    }
    // brute-force monic quadratic factors mod p
    for b in 0..p as u64 {
        for c in 0..p as u64 {
            // divide f by x^2 + bx + c mod p and test zero remainder
            let mut r = red.clone();
            for i in (2..=n).rev() {
                let coef = r[i] % p as u64;
                if coef != 0 {
                    r[i] = 0;
                    let sub1 = (coef * b) % p as u64;
                    let sub2 = (coef * c) % p as u64;
                    r[i - 1] = (r[i - 1] + p as u64 - sub1 % p as u64) % p as u64;
                    r[i - 2] = (r[i - 2] + p as u64 - sub2 % p as u64) % p as u64;
                }
            }
            if r[0] == 0 && r[1] == 0 {
                return Some(false);
            }
        }
    }
    Some(true)
}

/// Exact search for a factorization into two monic integer quadratics.
fn has_monic_quadratic_factor(ic: &[Integer]) -> bool {
    let (p3, p2, p1, p0) = (&ic[3], &ic[2], &ic[1], &ic[0]);
    let divisors = small_divisors(&p0.clone().abs());
    let mut cands: Vec<Integer> = vec![];
    for d in divisors {
        cands.push(d.clone());
        cands.push(Integer::from(-&d));
    }
    // (x^2+ax+b)(x^2+cx+d): a+c=p3, b+d+ac=p2, ad+bc=p1, bd=p0
    for b in &cands {
        if b.cmp0() == Ordering::Equal || !p0.is_divisible(b) {
            continue;
        }
        let d = Integer::from(p0 / b);
        // a + c = p3 and a*c = p2 - b - d: integer roots of t^2 - p3 t + q
        let q = Integer::from(p2 - b) - &d;
        let disc = Integer::from(p3 * p3) - Integer::from(4) * &q;
        if disc.cmp0() == Ordering::Less {
            continue;
        }
        let s = disc.clone().sqrt();
        if Integer::from(&s * &s) != disc {
            continue;
        }
        for sgn in [1i32, -1] {
            let two_a = Integer::from(p3 + Integer::from(sgn) * &s);
            if !two_a.is_divisible_u(2) {
                continue;
            }
            let a = two_a / 2u32;
            let c = Integer::from(p3 - &a);
            if Integer::from(&a * &d) + Integer::from(b * &c) == *p1 {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_i64(cs)
    }

    #[test]
    fn divrem_exact() {
        let f = p(&[-2, 0, 1]).mul(&p(&[3, 1])); // (x^2-2)(x+3)
        let (q, r) = f.divrem(&p(&[3, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[-2, 0, 1]));
    }

    #[test]
    fn sturm_counts_real_roots() {
        assert_eq!(p(&[-2, 0, 1]).count_real_roots(), 2); // x^2-2
        assert_eq!(p(&[1, 0, 1]).count_real_roots(), 0); // x^2+1
        assert_eq!(p(&[1, -2, -1, 1]).count_real_roots(), 3); // deg-3 all real
        assert_eq!(p(&[-2, 0, 0, 0, 1]).count_real_roots(), 2); // x^4-2
    }

    #[test]
    fn isolation_and_refinement() {
        let f = p(&[-1, -1, 1]); // x^2-x-1, roots phi and 1-phi
        let roots = f.isolate_real_roots();
        assert_eq!(roots.len(), 2);
        let w = Rational::from((1, 1_000_000_000_000i64));
        let fine = f.refine_root(roots[1].clone(), &w);
        let mid = Rational::from(&fine.0 + &fine.1) / Rational::from(2);
        let golden = 1.618033988749894848;
        assert!((mid.to_f64() - golden).abs() < 1e-10);
    }

    #[test]
    fn all_roots_real_in_window() {
        // 2cos conjugates of a finite-order elliptic trace sit in [-2,2]
        assert!(p(&[-1, -1, 1]).all_roots_real_in(&Rational::from(-2), &Rational::from(2)));
        // x^2-5 has a root outside [-2,2]
        assert!(!p(&[-5, 0, 1]).all_roots_real_in(&Rational::from(-2), &Rational::from(2)));
        // x^2+1 is not totally real
        assert!(!p(&[1, 0, 1]).all_roots_real_in(&Rational::from(-2), &Rational::from(2)));
    }

    #[test]
    fn complex_roots_residuals() {
        let f = p(&[-2, 0, 0, 0, 1]); // x^4 - 2
        let roots = f.complex_roots(60);
        assert_eq!(roots.len(), 4);
        let mut reals = 0;
        for z in &roots {
            if z.im.to_f64().abs() < 1e-40 {
                reals += 1;
            }
        }
        assert_eq!(reals, 2);
    }

    #[test]
    fn irreducibility_degree_four() {
        assert_eq!(p(&[-2, 0, 0, 0, 1]).irreducible_over_q(), Some(true)); // x^4-2
        assert_eq!(p(&[2, 0, -4, 0, 1]).irreducible_over_q(), Some(true)); // 2cos(pi/8)
        assert_eq!(p(&[5, 0, -5, 0, 1]).irreducible_over_q(), Some(true)); // 2cos(pi/10)
        // Klein-four field: reducible mod every prime, needs the exact search
        assert_eq!(p(&[1, 0, -4, 0, 1]).irreducible_over_q(), Some(true)); // 2cos(pi/12)
        assert_eq!(p(&[4, 0, -5, 0, 1]).irreducible_over_q(), Some(false)); // (x^2-1)(x^2-4)
        assert_eq!(p(&[1, 2, 3, 2, 1]).irreducible_over_q(), Some(false)); // (x^2+x+1)^2
        assert_eq!(p(&[-1, -1, 1]).irreducible_over_q(), Some(true));
        assert_eq!(p(&[-4, 0, 1]).irreducible_over_q(), Some(false)); // x^2-4
        assert_eq!(p(&[1, -2, -1, 1]).irreducible_over_q(), Some(true)); // 2cos(pi/7)
    }

    #[test]
    fn sqrt_interval_brackets() {
        let (lo, hi) = sqrt_interval(&Rational::from(2), &Rational::from(2), 40);
        // exact bracket: lo^2 <= 2 <= hi^2
        assert!(Rational::from(&lo * &lo) <= Rational::from(2));
        assert!(Rational::from(&hi * &hi) >= Rational::from(2));
        assert!((hi - lo).to_f64() < 1e-39);
    }

    #[test]
    fn interval_eval_contains_value() {
        let f = p(&[1, -3, 0, 2]);
        let lo = Rational::from((139, 100));
        let hi = Rational::from((143, 100));
        let (a, b) = f.eval_interval(&lo, &hi);
        let v = f.eval_rat(&Rational::from((141, 100)));
        assert!(a <= v && v <= b);
    }
}
