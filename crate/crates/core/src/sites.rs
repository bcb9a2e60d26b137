//! Kronecker point sets on the unit torus.
//!
//! For a vector `v = (alpha, beta)` of irrational constants, the site set
//! of order `n` is `{ (frac(i*alpha), frac(i*beta)) : i = 1..n }`. Because
//! the working representation is fixed-point decimal, `frac(i*alpha)` is
//! an exact modular operation on the constant's mantissa; adding more
//! sites never perturbs existing ones, and the central-symmetry congruence
//! below holds exactly rather than approximately.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{frac, make_constant, ConstantSpec, PrecisionConfig, Real};

/// The generating vector: an ordered pair of distinct symbolic constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorSpec {
    pub alpha: ConstantSpec,
    pub beta: ConstantSpec,
}

impl VectorSpec {
    pub fn new(alpha: ConstantSpec, beta: ConstantSpec) -> Result<Self> {
        if alpha == beta {
            return Err(Error::IdenticalConstants(alpha.to_string()));
        }
        Ok(VectorSpec { alpha, beta })
    }

    /// Parse `"sqrt(2), sqrt(3)"` style expressions.
    pub fn parse(text: &str) -> Result<Self> {
        let (alpha, beta) = crate::numerics::parse_constant_pair(text)?;
        VectorSpec::new(alpha, beta)
    }
}

impl std::fmt::Display for VectorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// A point on the unit torus, both coordinates in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusPoint {
    pub x: Real,
    pub y: Real,
}

/// The first `n` Kronecker points for a vector, at working precision,
/// together with `f64` shadows used for candidate ordering and rendering.
/// Sites are indexed `1..=n` throughout, matching the generating multiple.
#[derive(Clone, Debug)]
pub struct SiteSet {
    vector: VectorSpec,
    cfg: PrecisionConfig,
    alpha: Real,
    beta: Real,
    points: Vec<TorusPoint>,
    approx: Vec<[f64; 2]>,
}

impl SiteSet {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn vector(&self) -> &VectorSpec {
        &self.vector
    }

    pub fn cfg(&self) -> &PrecisionConfig {
        &self.cfg
    }

    /// Working-precision value of `alpha`.
    pub fn alpha_value(&self) -> &Real {
        &self.alpha
    }

    /// Working-precision value of `beta`.
    pub fn beta_value(&self) -> &Real {
        &self.beta
    }

    /// Site by 1-based index.
    pub fn point(&self, site: usize) -> &TorusPoint {
        &self.points[site - 1]
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    /// `f64` shadow of a site, 1-based.
    pub fn approx(&self, site: usize) -> [f64; 2] {
        self.approx[site - 1]
    }

    /// The first `m <= n` sites. Monotone refinement: the retained points
    /// are bit-identical to a fresh `generate_sites` call of order `m`.
    pub fn prefix(&self, m: usize) -> Result<SiteSet> {
        if m == 0 || m > self.n() {
            return Err(Error::InvalidInput(format!(
                "prefix length {m} out of range 1..={}",
                self.n()
            )));
        }
        Ok(SiteSet {
            vector: self.vector,
            cfg: self.cfg,
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            points: self.points[..m].to_vec(),
            approx: self.approx[..m].to_vec(),
        })
    }
}

/// Build the site set `{ i * v mod 1 : i = 1..n }` at working precision.
pub fn generate_sites(vector: &VectorSpec, n: usize, cfg: &PrecisionConfig) -> Result<SiteSet> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let alpha = make_constant(&vector.alpha, cfg);
    let beta = make_constant(&vector.beta, cfg);
    let mut points = Vec::with_capacity(n);
    for i in 1..=n {
        let x = frac(&alpha.mul_int(i as i64))?;
        let y = frac(&beta.mul_int(i as i64))?;
        points.push(TorusPoint { x, y });
    }
    check_distinct(&points)?;
    let approx = points
        .iter()
        .map(|p| [p.x.to_f64(), p.y.to_f64()])
        .collect();
    Ok(SiteSet {
        vector: *vector,
        cfg: *cfg,
        alpha,
        beta,
        points,
        approx,
    })
}

// Irrationality guarantees distinctness; assert it anyway so a broken
// constant evaluation cannot silently corrupt the geometry.
fn check_distinct(points: &[TorusPoint]) -> Result<()> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let pa = &points[a];
        let pb = &points[b];
        pa.x.cmp_value(&pb.x).then_with(|| pa.y.cmp_value(&pb.y))
    });
    for pair in order.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if points[a] == points[b] {
            return Err(Error::SiteCollision { i: a.min(b) + 1, j: a.max(b) + 1 });
        }
    }
    Ok(())
}

/// Pairs `(i, n+1-i)` for `i = 1..=floor(n/2)`, plus the self-paired
/// middle index when `n` is odd. Verifies the exact congruence
/// `p_i + p_(n+1-i) = (n+1) v (mod 1)` coordinate-wise before returning.
pub fn central_pairing(sites: &SiteSet) -> Result<Vec<(usize, usize)>> {
    let n = sites.n();
    let cfg = sites.cfg();
    let target_x = frac(&sites.alpha.mul_int(n as i64 + 1))?;
    let target_y = frac(&sites.beta.mul_int(n as i64 + 1))?;
    let tol = Real::exp10_neg(cfg.target_digits, cfg.working_digits());
    let mut pairs = Vec::with_capacity(n.div_ceil(2));
    for i in 1..=n.div_ceil(2) {
        let j = n + 1 - i;
        let a = sites.point(i);
        let b = sites.point(j);
        let dx = circle_distance(&frac(&(&a.x + &b.x))?, &target_x);
        let dy = circle_distance(&frac(&(&a.y + &b.y))?, &target_y);
        let distance = dx.max(dy);
        if distance > tol {
            return Err(Error::SymmetryViolation {
                i,
                j,
                distance: distance.to_decimal_string(),
            });
        }
        pairs.push((i, j));
    }
    Ok(pairs)
}

// Distance between two points of the unit circle R/Z, both in [0, 1).
fn circle_distance(a: &Real, b: &Real) -> Real {
    let direct = (a - b).abs();
    let wrapped = &Real::one(direct.digits()) - &direct;
    direct.min(wrapped)
}
