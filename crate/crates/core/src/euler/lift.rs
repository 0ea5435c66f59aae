use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;

use super::EulerError;
use crate::arith::{Mat2, Scalar};

/// Tolerance on `|det − 1|` for float matrices.
const DET_TOL: f64 = 1e-9;
/// Image vectors shorter than this are treated as singular.
const MIN_NORM: f64 = 1e-12;
/// Smallest subdivision step before the lift gives up.
const MIN_STEP: f64 = 1e-8;
/// Largest admissible distance of `β·2π` from the computed difference.
pub const ROUNDING_TOL: f64 = 1e-6;

/// A real 2×2 matrix of determinant one.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMat2 {
    m: [[f64; 2]; 2],
    source: Option<String>,
}

impl RealMat2 {
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self, EulerError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !det.is_finite() || (det - 1.0).abs() >= DET_TOL {
            return Err(EulerError::NotUnimodular(det));
        }
        Ok(Self { m, source: None })
    }

    /// Float image of an exact matrix, remembering its exact form.
    pub fn from_exact<S: Scalar>(g: &Mat2<S>) -> Result<Self, EulerError> {
        let mut r = Self::new(g.to_f64())?;
        r.source = Some(g.to_string());
        Ok(r)
    }

    pub fn identity() -> Self {
        Self::new([[1.0, 0.0], [0.0, 1.0]]).expect("det 1")
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { m: [[c, -s], [s, c]], source: None }
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.m, &other.m);
        let mut m = [[0.0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m, source: None }
    }

    /// Random matrix with entries in `[−2, 2]`: `a, b, c` uniform, `d`
    /// solved from `ad − bc = 1`, rejected until `d` is in range too.
    pub fn random(rng: &mut impl Rng) -> Self {
        loop {
            let a: f64 = rng.gen_range(-2.0..=2.0);
            let b: f64 = rng.gen_range(-2.0..=2.0);
            let c: f64 = rng.gen_range(-2.0..=2.0);
            if a.abs() < 1e-3 {
                continue;
            }
            let d = (1.0 + b * c) / a;
            if d.abs() <= 2.0 {
                return Self { m: [[a, b], [c, d]], source: None };
            }
        }
    }
}

/// Angle in `[0, 2π)` of `g·(cos θ, sin θ)`.
pub fn circle_action(g: &RealMat2, theta: f64) -> Result<f64, EulerError> {
    let (s, c) = theta.sin_cos();
    let m = &g.m;
    let x = m[0][0] * c + m[0][1] * s;
    let y = m[1][0] * c + m[1][1] * s;
    if x.hypot(y) < MIN_NORM {
        return Err(EulerError::Singular { theta });
    }
    let a = y.atan2(x).rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π
    Ok(if a >= TAU { 0.0 } else { a })
}

/// The lift `s(g)` of the circle action with `s(g)(0) ∈ [0, 2π)`, evaluated
/// by following the image angle continuously from `0` to `θ`.
///
/// A step is accepted only if the wrapped angle change lies in `[0, π/2)`.
/// The map is an orientation-preserving circle homeomorphism, so the true
/// change over a step shorter than a full turn lies in `[0, 2π)`; a wrapped
/// change in `[0, π/2)` therefore equals the true change. Otherwise the step
/// is halved.
pub fn lift_eval(g: &RealMat2, theta: f64) -> Result<f64, EulerError> {
    if !theta.is_finite() {
        return Err(EulerError::Subdivision { theta });
    }
    let dir = if theta < 0.0 { -1.0 } else { 1.0 };
    let target = theta.abs();
    let mut value = circle_action(g, 0.0)?;
    let mut raw = value;
    let mut t = 0.0;
    let mut h = target.min(FRAC_PI_2);
    while t < target {
        h = h.min(target - t);
        let next = circle_action(g, dir * (t + h))?;
        let mut diff = (next - raw) * dir;
        diff -= TAU * (diff / TAU).round();
        if (-1e-12..FRAC_PI_2).contains(&diff) {
            value += dir * diff.max(0.0);
            raw = next;
            t += h;
            h = (h * 2.0).min(FRAC_PI_2);
        } else {
            h /= 2.0;
            if h < MIN_STEP {
                return Err(EulerError::Subdivision { theta });
            }
        }
    }
    Ok(value)
}

/// `β(g, h)` together with the distance of the unrounded quotient from `β`.
pub fn euler_cocycle_with_residual(g: &RealMat2, h: &RealMat2) -> Result<(i64, f64), EulerError> {
    let lhs = lift_eval(g, lift_eval(h, 0.0)?)?;
    let rhs = lift_eval(&g.mul(h), 0.0)?;
    let q = (lhs - rhs) / TAU;
    let beta = q.round();
    let residual = (q - beta).abs() * TAU;
    if residual >= ROUNDING_TOL {
        return Err(EulerError::UnresolvedRounding { residual });
    }
    Ok((beta as i64, residual))
}

/// `round((s_g(s_h(0)) − s_gh(0)) / 2π)`, in `{0, 1}` for this section.
pub fn euler_cocycle(g: &RealMat2, h: &RealMat2) -> Result<i64, EulerError> {
    euler_cocycle_with_residual(g, h).map(|(b, _)| b)
}

/// `β(g,h) + β(gh,k) = β(h,k) + β(g,hk)`.
pub fn cocycle_identity_check(g: &RealMat2, h: &RealMat2, k: &RealMat2) -> Result<bool, EulerError> {
    Ok(cocycle_terms(g, h, k)?.holds())
}

/// The four cocycle values of a triple with their rounding residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleTerms {
    /// `β(g,h), β(gh,k), β(h,k), β(g,hk)`.
    pub betas: [i64; 4],
    pub residuals: [f64; 4],
}

impl CocycleTerms {
    pub fn holds(&self) -> bool {
        let [a, b, c, d] = self.betas;
        a + b == c + d
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn cocycle_terms(g: &RealMat2, h: &RealMat2, k: &RealMat2) -> Result<CocycleTerms, EulerError> {
    let gh = g.mul(h);
    let hk = h.mul(k);
    let pairs = [(g, h), (&gh, k), (h, k), (g, &hk)];
    let mut betas = [0; 4];
    let mut residuals = [0.0; 4];
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        let (beta, r) = euler_cocycle_with_residual(a, b)?;
        betas[i] = beta;
        residuals[i] = r;
    }
    Ok(CocycleTerms { betas, residuals })
}

/// Rotation by π, the standard witness for `β = 1`.
pub fn rotation_pi() -> RealMat2 {
    RealMat2 { m: [[-1.0, 0.0], [0.0, -1.0]], source: None }
}
