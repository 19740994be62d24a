//! Mahler measure by certified root enclosure.
//!
//! Pipeline: exact square-free decomposition, Aberth–Ehrlich root
//! approximation in arbitrary-precision complex arithmetic, then an
//! inclusion-disk certificate: for pairwise distinct approximations
//! z₁…z_n of the roots of g, the disks centered at z_j with radius
//! n·|g(z_j)| / (|lead g|·∏_{k≠j}|z_j−z_k|) jointly contain every root of
//! g, and a connected component formed by m disks contains exactly m roots
//! (counted with multiplicity). Only the certificate step carries the
//! soundness burden; it runs in outward-rounded interval arithmetic, so a
//! bad approximation can widen the answer but never falsify it.

use rug::float::{Constant, Round};
use rug::{Float, Integer};

use crate::bigreal::{Enclosure, PrecisionPolicy};
use crate::error::{Error, Result};
use crate::poly::{squarefree_decomposition, IntPolynomial};

const ABERTH_MAX_ITERS: usize = 160;

/// Complex point in round-to-nearest float arithmetic (approximation only).
#[derive(Debug, Clone)]
pub(crate) struct CPoint {
    re: Float,
    im: Float,
}

impl CPoint {
    fn new(re: Float, im: Float) -> Self {
        CPoint { re, im }
    }

    fn with_prec(&self, prec: u32) -> CPoint {
        CPoint {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn sub(&self, other: &CPoint, prec: u32) -> CPoint {
        CPoint::new(
            Float::with_val(prec, &self.re - &other.re),
            Float::with_val(prec, &self.im - &other.im),
        )
    }

    fn mul(&self, other: &CPoint, prec: u32) -> CPoint {
        let re = Float::with_val(prec, &self.re * &other.re)
            - Float::with_val(prec, &self.im * &other.im);
        let im = Float::with_val(prec, &self.re * &other.im)
            + Float::with_val(prec, &self.im * &other.re);
        CPoint::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    fn div(&self, other: &CPoint, prec: u32) -> CPoint {
        let den = Float::with_val(prec, other.re.square_ref())
            + Float::with_val(prec, other.im.square_ref());
        let re = Float::with_val(prec, &self.re * &other.re)
            + Float::with_val(prec, &self.im * &other.im);
        let im = Float::with_val(prec, &self.im * &other.re)
            - Float::with_val(prec, &self.re * &other.im);
        CPoint::new(
            Float::with_val(prec, &re / &den),
            Float::with_val(prec, &im / &den),
        )
    }

    fn abs(&self, prec: u32) -> Float {
        let s = Float::with_val(prec, self.re.square_ref())
            + Float::with_val(prec, self.im.square_ref());
        Float::with_val(prec, s).sqrt()
    }
}

/// Complex rectangle with enclosure components.
#[derive(Debug, Clone)]
struct CRect {
    re: Enclosure,
    im: Enclosure,
}

impl CRect {
    fn from_point(z: &CPoint) -> CRect {
        CRect {
            re: Enclosure::point(z.re.clone()),
            im: Enclosure::point(z.im.clone()),
        }
    }

    fn from_integer(n: &Integer, prec: u32) -> CRect {
        CRect {
            re: Enclosure::from_integer(n, prec),
            im: Enclosure::point(Float::with_val(prec, 0)),
        }
    }

    fn add(&self, other: &CRect, prec: u32) -> CRect {
        CRect {
            re: self.re.add(&other.re, prec),
            im: self.im.add(&other.im, prec),
        }
    }

    fn sub(&self, other: &CRect, prec: u32) -> CRect {
        CRect {
            re: self.re.sub(&other.re, prec),
            im: self.im.sub(&other.im, prec),
        }
    }

    fn mul(&self, other: &CRect, prec: u32) -> CRect {
        CRect {
            re: self.re.mul(&other.re, prec).sub(&self.im.mul(&other.im, prec), prec),
            im: self.re.mul(&other.im, prec).add(&self.im.mul(&other.re, prec), prec),
        }
    }

    /// Sound enclosure of |z| over the rectangle.
    fn modulus(&self, prec: u32) -> Enclosure {
        let sq = |e: &Enclosure| -> Enclosure {
            let lo;
            let hi;
            if *e.lo() >= 0 {
                lo = Float::with_val_round(prec, e.lo() * e.lo(), Round::Down).0;
                hi = Float::with_val_round(prec, e.hi() * e.hi(), Round::Up).0;
            } else if *e.hi() <= 0 {
                lo = Float::with_val_round(prec, e.hi() * e.hi(), Round::Down).0;
                hi = Float::with_val_round(prec, e.lo() * e.lo(), Round::Up).0;
            } else {
                lo = Float::with_val(prec, 0);
                let a = Float::with_val_round(prec, e.lo() * e.lo(), Round::Up).0;
                let b = Float::with_val_round(prec, e.hi() * e.hi(), Round::Up).0;
                hi = a.max(&b);
            }
            Enclosure::from_endpoints(lo, hi)
        };
        let s = sq(&self.re).add(&sq(&self.im), prec);
        let lo = Float::with_val_round(prec, s.lo().sqrt_ref(), Round::Down).0;
        let hi = Float::with_val_round(prec, s.hi().sqrt_ref(), Round::Up).0;
        Enclosure::from_endpoints(lo, hi)
    }
}

fn horner_point(coeffs: &[Float], z: &CPoint, prec: u32) -> CPoint {
    let mut acc = CPoint::new(Float::with_val(prec, 0), Float::with_val(prec, 0));
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, prec);
        acc.re += c;
    }
    acc
}

fn horner_rect(coeffs: &[Integer], z: &CRect, prec: u32) -> CRect {
    let zero = CRect {
        re: Enclosure::point(Float::with_val(prec, 0)),
        im: Enclosure::point(Float::with_val(prec, 0)),
    };
    let mut acc = zero;
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, prec).add(&CRect::from_integer(c, prec), prec);
    }
    acc
}

/// Aberth–Ehrlich simultaneous root iteration (approximation; certification
/// follows separately). Deterministic: fixed initial circle, fixed sweep
/// order, fixed perturbation schedule.
fn aberth_roots(f: &IntPolynomial, prec: u32, warm: Option<&[CPoint]>) -> Vec<CPoint> {
    let n = f.degree().expect("nonzero");
    let coeffs: Vec<Float> = f
        .coeffs()
        .iter()
        .map(|c| Float::with_val(prec, c))
        .collect();
    let dcoeffs: Vec<Float> = f
        .derivative()
        .coeffs()
        .iter()
        .map(|c| Float::with_val(prec, c))
        .collect();

    let mut roots: Vec<CPoint> = match warm {
        Some(w) if w.len() == n => w.iter().map(|z| z.with_prec(prec)).collect(),
        _ => {
            // Start on a circle of radius |a0/an|^(1/n), angles offset so no
            // initial guess sits on a symmetry axis of the root set.
            let a0 = Float::with_val(prec, f.coeff(0).abs());
            let an = Float::with_val(prec, f.leading().unwrap().clone().abs());
            let mut radius = Float::with_val(prec, &a0 / &an).root(n as u32);
            if !radius.is_normal() {
                radius = Float::with_val(prec, 1);
            }
            let pi = Float::with_val(prec, Constant::Pi);
            (0..n)
                .map(|j| {
                    let theta = Float::with_val(prec, 2 * &pi)
                        * Float::with_val(prec, (j as f64 + 0.376) / n as f64);
                    let (s, c) = theta.sin_cos(Float::new(prec));
                    CPoint::new(
                        Float::with_val(prec, &radius * &c),
                        Float::with_val(prec, &radius * &s),
                    )
                })
                .collect()
        }
    };

    // Convergence threshold: relative step below ~2^-(prec-8).
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec.saturating_sub(8) as i32)));
    let mut perturb_counter = 0u32;

    for _ in 0..ABERTH_MAX_ITERS {
        let mut converged = true;
        for j in 0..n {
            let zj = roots[j].clone();
            let pv = horner_point(&coeffs, &zj, prec);
            let dv = horner_point(&dcoeffs, &zj, prec);
            if pv.re.is_zero() && pv.im.is_zero() {
                continue; // exact hit
            }
            let dv_zero = dv.re.is_zero() && dv.im.is_zero();
            if dv_zero || !pv.is_finite() || !dv.is_finite() {
                // Deterministic nudge off the bad point.
                perturb_counter += 1;
                let eps = Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)))
                    * Float::with_val(prec, perturb_counter);
                roots[j].re += &eps;
                roots[j].im += eps;
                converged = false;
                continue;
            }
            let w = pv.div(&dv, prec);
            let mut sum = CPoint::new(Float::with_val(prec, 0), Float::with_val(prec, 0));
            let mut coincident = false;
            for k in 0..n {
                if k == j {
                    continue;
                }
                let diff = zj.sub(&roots[k], prec);
                if diff.re.is_zero() && diff.im.is_zero() {
                    coincident = true;
                    break;
                }
                let one = CPoint::new(Float::with_val(prec, 1), Float::with_val(prec, 0));
                let inv = one.div(&diff, prec);
                sum.re += &inv.re;
                sum.im += &inv.im;
            }
            if coincident {
                perturb_counter += 1;
                let eps = Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)))
                    * Float::with_val(prec, perturb_counter);
                roots[j].re += &eps;
                roots[j].im -= eps;
                converged = false;
                continue;
            }
            let ws = w.mul(&sum, prec);
            let denom = CPoint::new(
                Float::with_val(prec, 1 - &ws.re),
                Float::with_val(prec, -&ws.im),
            );
            let step = if denom.re.is_zero() && denom.im.is_zero() {
                w.clone()
            } else {
                w.div(&denom, prec)
            };
            if !step.is_finite() {
                converged = false;
                continue;
            }
            let zmag = zj.abs(prec) + 1u32;
            let allowed = Float::with_val(prec, &tol * &zmag);
            if step.abs(prec) > allowed {
                converged = false;
            }
            roots[j] = CPoint::new(
                Float::with_val(prec, &zj.re - &step.re),
                Float::with_val(prec, &zj.im - &step.im),
            );
        }
        if converged {
            break;
        }
    }
    roots
}

struct Disk {
    radius: Float,  // certified upper bound
    mod_lo: Float,  // lower bound on |center| − radius, clamped at 0
    mod_hi: Float,  // upper bound on |center| + radius
    center: CPoint, // for the disjointness test
}

/// Certified inclusion disks; `None` when the approximation is too poor to
/// certify at this precision (coincident centers, nonpositive separations).
fn certify_disks(f: &IntPolynomial, roots: &[CPoint], prec: u32) -> Option<Vec<Disk>> {
    let n = roots.len();
    let lead_abs = f.leading().unwrap().clone().abs();
    let lead_lo = Float::with_val_round(prec, &lead_abs, Round::Down).0;
    let mut disks = Vec::with_capacity(n);
    for (j, zj) in roots.iter().enumerate() {
        if !zj.is_finite() {
            return None;
        }
        let rect = CRect::from_point(zj);
        let value_hi = horner_rect(f.coeffs(), &rect, prec).modulus(prec);
        // ∏_{k≠j} |z_j − z_k|, lower bound
        let mut prod_lo = Float::with_val(prec, 1);
        for (k, zk) in roots.iter().enumerate() {
            if k == j {
                continue;
            }
            let diff = CRect::from_point(zj).sub(&CRect::from_point(zk), prec);
            let sep = diff.modulus(prec);
            if !(*sep.lo() > 0) {
                return None;
            }
            prod_lo = Float::with_val_round(prec, &prod_lo * sep.lo(), Round::Down).0;
        }
        if !(prod_lo > 0) || !(lead_lo > 0) {
            return None;
        }
        let num = Float::with_val_round(prec, value_hi.hi() * &Float::with_val(prec, n as u32), Round::Up).0;
        let den = Float::with_val_round(prec, &lead_lo * &prod_lo, Round::Down).0;
        let radius = Float::with_val_round(prec, &num / &den, Round::Up).0;
        if !radius.is_finite() {
            return None;
        }
        let center_mod = CRect::from_point(zj).modulus(prec);
        let mut mod_lo = Float::with_val_round(prec, center_mod.lo() - &radius, Round::Down).0;
        if mod_lo < 0 {
            mod_lo = Float::with_val(prec, 0);
        }
        let mod_hi = Float::with_val_round(prec, center_mod.hi() + &radius, Round::Up).0;
        disks.push(Disk {
            radius,
            mod_lo,
            mod_hi,
            center: zj.clone(),
        });
    }
    Some(disks)
}

/// Union-find grouping: merge any two disks not provably disjoint.
fn components(disks: &[Disk], prec: u32) -> Vec<Vec<usize>> {
    let n = disks.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let diff = CRect::from_point(&disks[i].center)
                .sub(&CRect::from_point(&disks[j].center), prec);
            let dist_lo = diff.modulus(prec).lo().clone();
            let rsum = Float::with_val_round(prec, &disks[i].radius + &disks[j].radius, Round::Up).0;
            let provably_disjoint = dist_lo > rsum;
            if !provably_disjoint {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Measure of a primitive square-free factor with nonzero constant term.
fn measure_squarefree(
    g: &IntPolynomial,
    prec: u32,
    warm: Option<&[CPoint]>,
) -> Option<(Enclosure, Vec<CPoint>)> {
    let n = g.degree().unwrap();
    if n == 1 {
        // M(ax + b) = max(|a|, |b|), exactly.
        let a = g.coeff(1).abs();
        let b = g.coeff(0).abs();
        let m = if a > b { a } else { b };
        let bits = m.significant_bits().max(2);
        return Some((Enclosure::from_integer(&m, bits), Vec::new()));
    }
    let roots = aberth_roots(g, prec, warm);
    let disks = certify_disks(g, &roots, prec)?;
    let comps = components(&disks, prec);
    let one = Float::with_val(prec, 1);
    let mut m = Enclosure::from_integer(&g.leading().unwrap().clone().abs(), prec);
    for comp in comps {
        let mut lo = disks[comp[0]].mod_lo.clone();
        let mut hi = disks[comp[0]].mod_hi.clone();
        for &i in &comp[1..] {
            lo = lo.min(&disks[i].mod_lo);
            hi = hi.max(&disks[i].mod_hi);
        }
        // contribution of max(1, |root|) for each of the |comp| roots here
        let lo1 = if lo < one { one.clone() } else { lo };
        let hi1 = if hi < one { one.clone() } else { hi };
        let contrib = Enclosure::from_endpoints(lo1, hi1);
        for _ in 0..comp.len() {
            m = m.mul(&contrib, prec);
        }
    }
    Some((m, roots))
}

/// Sound enclosure of M(f) = |lead|·∏ max(1, |root|).
pub(crate) fn mahler_measure_impl(
    f: &IntPolynomial,
    policy: &PrecisionPolicy,
) -> Result<Enclosure> {
    if f.is_zero() {
        return Err(Error::Domain(
            "Mahler measure of the zero polynomial is undefined".into(),
        ));
    }
    if f.degree() == Some(0) {
        return Err(Error::Domain(
            "Mahler measure here requires degree ≥ 1".into(),
        ));
    }
    let (content, prim) = f.primitive();
    let content_abs = content.abs();
    let (_zero_roots, core) = prim.strip_zero_roots();
    if core.degree() == Some(0) {
        // f = c·x^k: the measure is |c| exactly.
        let bits = content_abs.significant_bits().max(2);
        return Ok(Enclosure::from_integer(&content_abs, bits));
    }
    let factors = squarefree_decomposition(&core);
    let mut warm: Vec<Option<Vec<CPoint>>> = vec![None; factors.len()];

    for prec in policy.ladder() {
        let mut total = Enclosure::from_integer(&content_abs, prec);
        let mut all_ok = true;
        for (idx, (g, mult)) in factors.iter().enumerate() {
            match measure_squarefree(g, prec, warm[idx].as_deref()) {
                Some((enc, roots)) => {
                    if !roots.is_empty() {
                        warm[idx] = Some(roots);
                    }
                    for _ in 0..*mult {
                        total = total.mul(&enc, prec);
                    }
                }
                None => {
                    all_ok = false;
                    break;
                }
            }
        }
        if all_ok && total.rel_width_le(policy.target_width) {
            return Ok(total);
        }
    }
    Err(Error::PrecisionExhausted {
        max_bits: policy.max_bits,
        target_width: policy.target_width,
    })
}
