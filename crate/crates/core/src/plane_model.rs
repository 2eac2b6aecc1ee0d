//! Hyperboloid model of the hyperbolic plane.
//!
//! Points live on the upper sheet `x0^2 - x1^2 - x2^2 = 1`. Distances and
//! midpoints are closed form here, which makes the model a convenient
//! geometric cross-check for the trigonometric formulas and a source of
//! disk coordinates for drawing.

use crate::error::{Error, Result};
use crate::hyptrig;
use crate::shape::EdgeLengths;

const POINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedTriangle {
    pub a: HPoint,
    pub b: HPoint,
    pub c: HPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskModel {
    Klein,
    Poincare,
}

/// Minkowski product `u0 v0 - u1 v1 - u2 v2`.
pub fn minkowski(u: &HPoint, v: &HPoint) -> f64 {
    u.x0 * v.x0 - u.x1 * v.x1 - u.x2 * v.x2
}

impl HPoint {
    pub const ORIGIN: HPoint = HPoint {
        x0: 1.0,
        x1: 0.0,
        x2: 0.0,
    };

    /// Lift a spatial position onto the hyperboloid.
    pub fn from_spatial(x1: f64, x2: f64) -> Self {
        HPoint {
            x0: (1.0 + x1 * x1 + x2 * x2).sqrt(),
            x1,
            x2,
        }
    }

    /// Project back onto the sheet, keeping the spatial part.
    pub fn renormalized(self) -> Self {
        Self::from_spatial(self.x1, self.x2)
    }

    pub fn validate(&self) -> Result<()> {
        let q = minkowski(self, self);
        if !q.is_finite() || (q - 1.0).abs() > POINT_TOL * self.x0 * self.x0 || self.x0 < 1.0 {
            return Err(Error::InvalidPoint { product: q });
        }
        Ok(())
    }

    fn scaled_sum(&self, s: f64, other: &HPoint, t: f64) -> HPoint {
        HPoint {
            x0: s * self.x0 + t * other.x0,
            x1: s * self.x1 + t * other.x1,
            x2: s * self.x2 + t * other.x2,
        }
    }
}

/// Geodesic distance.
pub fn dist(u: &HPoint, v: &HPoint) -> Result<f64> {
    let p = minkowski(u, v);
    if !p.is_finite() || p < 1.0 - POINT_TOL {
        return Err(Error::InvalidPoint { product: p });
    }
    if p > 2.0 {
        return Ok(p.acosh());
    }
    // 4 sinh^2(d/2) = -<u-v, u-v>, cancellation-free for nearby points
    let d = u.scaled_sum(1.0, v, -1.0);
    let q = d.x1 * d.x1 + d.x2 * d.x2 - d.x0 * d.x0;
    Ok(2.0 * (q.max(0.0).sqrt() / 2.0).asinh())
}

pub fn midpoint(u: &HPoint, v: &HPoint) -> HPoint {
    let s = (2.0 + 2.0 * minkowski(u, v)).sqrt();
    u.scaled_sum(1.0 / s, v, 1.0 / s).renormalized()
}

/// Point at fraction `t` along the geodesic from `u` to `v`.
pub fn lerp_geodesic(u: &HPoint, v: &HPoint, t: f64) -> HPoint {
    // any positive combination normalized onto the sheet lies on the geodesic;
    // weights below give constant-speed parametrization
    let d = dist(u, v).unwrap_or(0.0);
    if d < 1e-300 {
        return *u;
    }
    let (wu, wv) = (((1.0 - t) * d).sinh() / d.sinh(), (t * d).sinh() / d.sinh());
    u.scaled_sum(wu, v, wv).renormalized()
}

/// Interior angle at `v` between the geodesics toward `p` and `q`.
pub fn angle_at(v: &HPoint, p: &HPoint, q: &HPoint) -> Result<f64> {
    let (dp, dq) = (dist(v, p)?, dist(v, q)?);
    if dp == 0.0 || dq == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    // |det(v,p,q)| = sinh(dp) sinh(dq) sin(theta);
    // <v,p><v,q> - <p,q> = sinh(dp) sinh(dq) cos(theta)
    let det = v.x0 * (p.x1 * q.x2 - p.x2 * q.x1) - v.x1 * (p.x0 * q.x2 - p.x2 * q.x0)
        + v.x2 * (p.x0 * q.x1 - p.x1 * q.x0);
    let cos_part = minkowski(v, p) * minkowski(v, q) - minkowski(p, q);
    Ok(det.abs().atan2(cos_part))
}

/// Distance from `p` to the full geodesic line through `q` and `r`.
pub fn dist_to_line(p: &HPoint, q: &HPoint, r: &HPoint) -> Result<f64> {
    if dist(q, r)? == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    // Minkowski normal of the plane through the origin containing q and r
    let cx = q.x1 * r.x2 - q.x2 * r.x1;
    let cy = q.x2 * r.x0 - q.x0 * r.x2;
    let cz = q.x0 * r.x1 - q.x1 * r.x0;
    let n = HPoint {
        x0: cx,
        x1: -cy,
        x2: -cz,
    };
    let norm = (-minkowski(&n, &n)).sqrt();
    Ok((minkowski(p, &n) / norm).abs().asinh())
}

pub fn to_disk(u: &HPoint, model: DiskModel) -> (f64, f64) {
    match model {
        DiskModel::Klein => (u.x1 / u.x0, u.x2 / u.x0),
        DiskModel::Poincare => (u.x1 / (1.0 + u.x0), u.x2 / (1.0 + u.x0)),
    }
}

/// Lorentz boost carrying `c` to the origin.
#[derive(Debug, Clone, Copy)]
pub struct Boost {
    cosh: f64,
    sinh: f64,
    dir: (f64, f64),
}

impl Boost {
    pub fn to_origin(c: &HPoint) -> Self {
        let r = c.x1.hypot(c.x2);
        let dir = if r > 0.0 {
            (c.x1 / r, c.x2 / r)
        } else {
            (1.0, 0.0)
        };
        Boost {
            cosh: c.x0,
            sinh: r,
            dir,
        }
    }

    pub fn apply(&self, u: &HPoint) -> HPoint {
        let along = self.dir.0 * u.x1 + self.dir.1 * u.x2;
        let x0 = self.cosh * u.x0 - self.sinh * along;
        let shift = (self.cosh - 1.0) * along - self.sinh * u.x0;
        HPoint {
            x0,
            x1: u.x1 + shift * self.dir.0,
            x2: u.x2 + shift * self.dir.1,
        }
        .renormalized()
    }
}

impl PlacedTriangle {
    pub fn vertices(&self) -> [HPoint; 3] {
        [self.a, self.b, self.c]
    }

    /// Midpoints of the edges opposite `A`, `B`, `C`.
    pub fn midpoints(&self) -> [HPoint; 3] {
        [
            midpoint(&self.b, &self.c),
            midpoint(&self.a, &self.c),
            midpoint(&self.a, &self.b),
        ]
    }

    /// Edge lengths `[a, b, c]` measured in the model.
    pub fn edges(&self) -> Result<[f64; 3]> {
        Ok([
            dist(&self.b, &self.c)?,
            dist(&self.a, &self.c)?,
            dist(&self.a, &self.b)?,
        ])
    }

    pub fn angles(&self) -> Result<[f64; 3]> {
        Ok([
            angle_at(&self.a, &self.b, &self.c)?,
            angle_at(&self.b, &self.c, &self.a)?,
            angle_at(&self.c, &self.a, &self.b)?,
        ])
    }

    pub fn centroid(&self) -> HPoint {
        let s = self
            .a
            .scaled_sum(1.0, &self.b, 1.0)
            .scaled_sum(1.0, &self.c, 1.0);
        let n = minkowski(&s, &s).sqrt();
        s.scaled_sum(1.0 / n, &HPoint::ORIGIN, 0.0).renormalized()
    }

    pub fn transformed(&self, boost: &Boost) -> Self {
        PlacedTriangle {
            a: boost.apply(&self.a),
            b: boost.apply(&self.b),
            c: boost.apply(&self.c),
        }
    }
}

/// Realize edge lengths with `A` at the origin and `B` on the positive x1 axis.
pub fn place(e: &EdgeLengths) -> Result<PlacedTriangle> {
    let [a, b, c] = e.0;
    let (angle_a, _, _) = hyptrig::angles_from_edges(a, b, c)?;
    Ok(PlacedTriangle {
        a: HPoint::ORIGIN,
        b: HPoint {
            x0: c.cosh(),
            x1: c.sinh(),
            x2: 0.0,
        },
        c: HPoint {
            x0: b.cosh(),
            x1: b.sinh() * angle_a.cos(),
            x2: b.sinh() * angle_a.sin(),
        },
    })
}

/// Like [`place`], then moved so the centroid sits at the origin.
pub fn place_centered(e: &EdgeLengths) -> Result<PlacedTriangle> {
    let t = place(e)?;
    Ok(t.transformed(&Boost::to_origin(&t.centroid())))
}
