//! Scalar hyperbolic trigonometry (curvature -1).
//!
//! Every formula that would naively subtract nearly equal `cosh` values is
//! evaluated through half-argument `sinh`/`cosh` forms instead, so the
//! functions stay accurate for the microscopic triangles reached after a few
//! dozen subdivision steps.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Values may leave their mathematical domain by this much before they are
/// treated as caller errors rather than rounding.
pub const DOMAIN_SLACK: f64 = 1e-9;

/// Angle sums within this distance of pi are classified as Euclidean.
pub const EUCLIDEAN_TOL: f64 = 1e-12;

const EDGE_NAMES: [char; 3] = ['a', 'b', 'c'];
const SLOT_NAMES: [char; 3] = ['A', 'B', 'C'];

/// Midline data of a hyperbolic triangle.
///
/// `m_x` is the length of the midline parallel to edge `x` (the edge of the
/// medial triangle opposite the midpoint of `x`). `l_x` is the common length
/// of the legs of the Saccheri quadrilateral erected on `x` over that midline,
/// so that `sinh(x/2) = sinh(m_x) cosh(l_x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedialData {
    pub mu: f64,
    pub m_a: f64,
    pub m_b: f64,
    pub m_c: f64,
    pub l_a: f64,
    pub l_b: f64,
    pub l_c: f64,
}

impl MedialData {
    pub fn midlines(&self) -> [f64; 3] {
        [self.m_a, self.m_b, self.m_c]
    }

    pub fn lambert_legs(&self) -> [f64; 3] {
        [self.l_a, self.l_b, self.l_c]
    }
}

/// Trace coordinates `x = 2cosh(a)`, `y = 2cosh(b)`, `z = 2cosh(c)`.
///
/// When built from edge lengths the half-edge sines are kept as well, since
/// recovering them from `x - 2` is exactly the cancellation the area formulas
/// need to avoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceCoords {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    half_sinh: [f64; 3],
}

impl TraceCoords {
    pub fn from_edges(a: f64, b: f64, c: f64) -> Self {
        Self {
            x: 2.0 * a.cosh(),
            y: 2.0 * b.cosh(),
            z: 2.0 * c.cosh(),
            half_sinh: [(a / 2.0).sinh(), (b / 2.0).sinh(), (c / 2.0).sinh()],
        }
    }

    pub fn from_values(x: f64, y: f64, z: f64) -> Self {
        let half = |t: f64| ((t - 2.0).max(0.0) / 4.0).sqrt();
        Self {
            x,
            y,
            z,
            half_sinh: [half(x), half(y), half(z)],
        }
    }

    /// `x^2 + y^2 + z^2 - xyz`, evaluated literally.
    pub fn markoff_form(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z - self.x * self.y * self.z
    }
}

pub fn check_edges(a: f64, b: f64, c: f64) -> Result<()> {
    let e = [a, b, c];
    for (i, &v) in e.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NonPositiveEdge {
                edge: EDGE_NAMES[i],
                value: v,
            });
        }
    }
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        if e[i] >= e[j] + e[k] {
            return Err(Error::TriangleInequality {
                edge: EDGE_NAMES[i],
                value: e[i],
            });
        }
    }
    Ok(())
}

pub fn check_angles(a: f64, b: f64, c: f64) -> Result<()> {
    for (i, &v) in [a, b, c].iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NonPositiveAngle {
                slot: SLOT_NAMES[i],
                value: v,
            });
        }
    }
    Ok(())
}

/// Clamp a value that must lie in `[lo, hi]`, tolerating rounding overshoot.
fn clamp_domain(v: f64, lo: f64, hi: f64, formula: &'static str) -> Result<f64> {
    if !v.is_finite() || v < lo - DOMAIN_SLACK || v > hi + DOMAIN_SLACK {
        return Err(Error::Inconsistent { formula, value: v });
    }
    Ok(v.clamp(lo, hi))
}

/// Angle opposite edge `a`. Caller guarantees a valid triple.
fn angle_opposite(a: f64, b: f64, c: f64) -> f64 {
    let (sa, sb, sc) = ((a / 2.0).sinh(), (b / 2.0).sinh(), (c / 2.0).sinh());
    // cos A * 2 sb sc cb cc
    let cos_part = sb * sb + sc * sc - sa * sa + 2.0 * sb * sb * sc * sc;
    // sin A * 2 sb sc cb cc, from the half-perimeter product
    let s = (a + b + c) / 2.0;
    let prod = s.sinh()
        * ((b + c - a) / 2.0).sinh()
        * ((c + a - b) / 2.0).sinh()
        * ((a + b - c) / 2.0).sinh();
    prod.max(0.0).sqrt().atan2(cos_part)
}

/// Angles `(A, B, C)` of the triangle with edges `(a, b, c)`, `a` opposite `A`.
pub fn angles_from_edges(a: f64, b: f64, c: f64) -> Result<(f64, f64, f64)> {
    check_edges(a, b, c)?;
    Ok((
        angle_opposite(a, b, c),
        angle_opposite(b, c, a),
        angle_opposite(c, a, b),
    ))
}

/// Dual law of cosines. Only hyperbolic angle triples have finite edges.
pub fn edges_from_angles(a: f64, b: f64, c: f64) -> Result<(f64, f64, f64)> {
    check_angles(a, b, c)?;
    let sum = a + b + c;
    let defect = PI - a - b - c;
    if defect <= EUCLIDEAN_TOL {
        return Err(Error::NotHyperbolic { sum });
    }
    // cosh x - 1 = 2 cos(sum/2) cos((Y+Z-X)/2) / (sin Y sin Z)
    let half_sin_defect = (defect / 2.0).sin();
    let edge = |x: f64, y: f64, z: f64| {
        let sh2 = half_sin_defect * ((y + z - x) / 2.0).cos() / (y.sin() * z.sin());
        2.0 * sh2.max(0.0).sqrt().asinh()
    };
    Ok((edge(a, b, c), edge(b, c, a), edge(c, a, b)))
}

/// Area as angle defect.
pub fn defect_area(a: f64, b: f64, c: f64) -> Result<f64> {
    let sum = a + b + c;
    if !sum.is_finite() || sum > PI + EUCLIDEAN_TOL {
        return Err(Error::AngleSumExceedsPi { sum });
    }
    Ok((PI - a - b - c).max(0.0))
}

/// Area from two half-edges and the angle opposite the third edge:
/// `sin(S/2) = sinh(b/2) sinh(c/2) sin(A) / cosh(a/2)`.
pub fn cagnoli_area(a: f64, b: f64, c: f64, angle_a: f64) -> Result<f64> {
    let v = (b / 2.0).sinh() * (c / 2.0).sinh() * angle_a.sin() / (a / 2.0).cosh();
    let v = clamp_domain(v, 0.0, 1.0, "cagnoli_area")?;
    Ok(2.0 * v.asin())
}

/// Area of a parent triangle from the two midlines meeting at the midpoint
/// of one edge and the medial angle between them:
/// `sin(S/2) = sinh(m_b) sinh(m_c) sin(alpha)`.
pub fn keogh_area(m_b: f64, m_c: f64, alpha: f64) -> Result<f64> {
    let v = m_b.sinh() * m_c.sinh() * alpha.sin();
    let v = clamp_domain(v, 0.0, 1.0, "keogh_area")?;
    Ok(2.0 * v.asin())
}

/// `sin A / sinh a`, the same for all three edge/angle pairs of a triangle.
pub fn law_of_sines_ratio(a: f64, angle_a: f64) -> f64 {
    angle_a.sin() / a.sinh()
}

/// Product `tanh((a+b+c)/4) tanh((a+b-c)/4) tanh((c+a-b)/4) tanh((b+c-a)/4)`.
fn tanh_product(a: f64, b: f64, c: f64) -> f64 {
    ((a + b + c) / 4.0).tanh()
        * ((a + b - c) / 4.0).tanh()
        * ((c + a - b) / 4.0).tanh()
        * ((b + c - a) / 4.0).tanh()
}

pub fn medial_data(a: f64, b: f64, c: f64) -> Result<MedialData> {
    check_edges(a, b, c)?;
    let t = tanh_product(a, b, c);
    let mu = (1.0 - t) / (1.0 + t);
    // cosh m = mu cosh(x/2), rewritten as
    // sinh^2(m/2) = (sinh^2(x/4) - T cosh^2(x/4)) / (1 + T)
    let midline = |x: f64| {
        let (s, c) = ((x / 4.0).sinh(), (x / 4.0).cosh());
        let sh2 = (s * s - t * c * c) / (1.0 + t);
        assert!(
            sh2 > 0.0,
            "midline of a valid triangle must have positive length"
        );
        2.0 * sh2.sqrt().asinh()
    };
    let leg = |x: f64, m: f64| ((x / 2.0).sinh() / m.sinh()).max(1.0).acosh();
    let (m_a, m_b, m_c) = (midline(a), midline(b), midline(c));
    Ok(MedialData {
        mu,
        m_a,
        m_b,
        m_c,
        l_a: leg(a, m_a),
        l_b: leg(b, m_b),
        l_c: leg(c, m_c),
    })
}

/// `16 H + 64 sa^2 sb^2 sc^2` where `H` is the Heron-like product of the
/// half-edge sines. Equals `4 - (x^2 + y^2 + z^2 - xyz)` for the matching
/// trace coordinates.
fn trace_defect(s: [f64; 3]) -> f64 {
    let [sa, sb, sc] = s;
    let heron = (sa + sb + sc) * (sb + sc - sa) * (sa - sb + sc) * (sa + sb - sc);
    16.0 * heron + 64.0 * (sa * sb * sc).powi(2)
}

/// Parent area from the trace coordinates of its medial triangle:
/// `4 cos^2(S/2) = x^2 + y^2 + z^2 - xyz`.
pub fn trace_parent_area(tc: &TraceCoords) -> Result<f64> {
    let sin2 = trace_defect(tc.half_sinh) / 4.0;
    let sin2 = clamp_domain(sin2, 0.0, 1.0, "trace_parent_area")?;
    Ok(2.0 * sin2.sqrt().asin())
}

/// Area from the trace coordinates of the triangle itself:
/// `cos^2(S/2) = (x+y+z+2)^2 / ((x+2)(y+2)(z+2))`.
pub fn area_from_edges(a: f64, b: f64, c: f64) -> Result<f64> {
    check_edges(a, b, c)?;
    let tc = TraceCoords::from_edges(a, b, c);
    // (x+2) = 4 cosh^2(a/2)
    let denom = 64.0 * ((a / 2.0).cosh() * (b / 2.0).cosh() * (c / 2.0).cosh()).powi(2);
    let sin2 = trace_defect(tc.half_sinh) / denom;
    let sin2 = clamp_domain(sin2, 0.0, 1.0, "area_from_edges")?;
    Ok(2.0 * sin2.sqrt().asin())
}

/// `sin(S/2)` computed with full relative precision for tiny triangles.
pub fn half_area_sine(a: f64, b: f64, c: f64) -> Result<f64> {
    check_edges(a, b, c)?;
    let s = [(a / 2.0).sinh(), (b / 2.0).sinh(), (c / 2.0).sinh()];
    let denom = 64.0 * ((a / 2.0).cosh() * (b / 2.0).cosh() * (c / 2.0).cosh()).powi(2);
    Ok((trace_defect(s) / denom).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Textbook law of cosines; only trustworthy for moderate edges.
    fn naive_angle(a: f64, b: f64, c: f64) -> f64 {
        ((b.cosh() * c.cosh() - a.cosh()) / (b.sinh() * c.sinh())).acos()
    }

    fn euclid_angle(a: f64, b: f64, c: f64) -> f64 {
        ((b * b + c * c - a * a) / (2.0 * b * c)).acos()
    }

    #[test]
    fn equilateral_unit_angle() {
        let (a, b, c) = angles_from_edges(1.0, 1.0, 1.0).unwrap();
        let want = (1f64.cosh() / (1f64.cosh() + 1.0)).acos();
        for x in [a, b, c] {
            assert!((x - want).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_naive_law_of_cosines() {
        for &(a, b, c) in &[
            (1.0, 1.0, 1.0),
            (4.0, 4.0, 7.0),
            (0.3, 1.2, 1.0),
            (2.0, 2.0, 3.0),
        ] {
            let (x, y, z) = angles_from_edges(a, b, c).unwrap();
            assert!((x - naive_angle(a, b, c)).abs() < 1e-12);
            assert!((y - naive_angle(b, c, a)).abs() < 1e-12);
            assert!((z - naive_angle(c, a, b)).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_equilateral_tends_to_sixty_degrees() {
        let (a, b, c) = angles_from_edges(1e-7, 1e-7, 1e-7).unwrap();
        for x in [a, b, c] {
            assert!((x - PI / 3.0).abs() < 1e-13);
        }
        assert!(a + b + c < PI);
    }

    #[test]
    fn tiny_edges_follow_euclidean_law() {
        let (a, b, c) = (1e-6, 1.3e-6, 0.9e-6);
        let (x, y, z) = angles_from_edges(a, b, c).unwrap();
        for (got, want) in [
            (x, euclid_angle(a, b, c)),
            (y, euclid_angle(b, c, a)),
            (z, euclid_angle(c, a, b)),
        ] {
            assert!(((got - want) / want).abs() < 1e-6);
        }
    }

    #[test]
    fn triangle_inequality_names_edge() {
        assert_eq!(
            angles_from_edges(1.0, 1.0, 3.0),
            Err(Error::TriangleInequality {
                edge: 'c',
                value: 3.0
            })
        );
        assert!(matches!(
            angles_from_edges(5.0, 1.0, 2.0),
            Err(Error::TriangleInequality { edge: 'a', .. })
        ));
        assert!(matches!(
            angles_from_edges(0.0, 1.0, 1.0),
            Err(Error::NonPositiveEdge { edge: 'a', .. })
        ));
    }

    #[test]
    fn edges_from_angles_round_trip() {
        let (a, b, c) = angles_from_edges(1.0, 1.0, 1.0).unwrap();
        let (x, y, z) = edges_from_angles(a, b, c).unwrap();
        for e in [x, y, z] {
            assert!((e - 1.0).abs() < 1e-12);
        }
        let (x, y, z) = edges_from_angles(0.5, 0.5, 0.5).unwrap();
        let want = ((0.5f64.cos() + 0.5f64.cos().powi(2)) / 0.5f64.sin().powi(2)).acosh();
        assert!((x - want).abs() < 1e-12 && (y - want).abs() < 1e-12 && (z - want).abs() < 1e-12);
        let (p, q, r) = angles_from_edges(x, y, z).unwrap();
        assert!((p - 0.5).abs() < 1e-12 && (q - 0.5).abs() < 1e-12 && (r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn euclidean_angles_have_no_edges() {
        let t = PI / 3.0;
        assert!(matches!(
            edges_from_angles(t, t, t),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn defect() {
        let t = PI / 6.0;
        assert!((defect_area(t, t, t).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(defect_area(PI / 2.0, PI / 4.0, PI / 4.0).unwrap(), 0.0);
        assert!(defect_area(2.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn areas_agree_on_named_triangles() {
        for &(a, b, c, tol) in &[
            (1.0, 1.0, 1.0, 1e-10),
            (4.0, 4.0, 7.0, 1e-9),
            (2.0, 2.0, 3.0, 1e-9),
        ] {
            let (x, y, z) = angles_from_edges(a, b, c).unwrap();
            let s = defect_area(x, y, z).unwrap();
            assert!((cagnoli_area(a, b, c, x).unwrap() - s).abs() < tol);
            assert!((area_from_edges(a, b, c).unwrap() - s).abs() < tol);
            let md = medial_data(a, b, c).unwrap();
            let tc = TraceCoords::from_edges(md.m_a, md.m_b, md.m_c);
            assert!((trace_parent_area(&tc).unwrap() - s).abs() < tol);
            // literal identity on the same coordinates
            let lit = 4.0 * (s / 2.0).cos().powi(2);
            assert!((tc.markoff_form() - lit).abs() < 1e-8 * tc.x.powi(3));
            let (alpha, _, _) = angles_from_edges(md.m_a, md.m_b, md.m_c).unwrap();
            assert!((keogh_area(md.m_b, md.m_c, alpha).unwrap() - s).abs() < tol);
        }
    }

    #[test]
    fn degenerate_trace_coordinates() {
        let tc = TraceCoords::from_values(2.0, 2.0, 2.0);
        assert_eq!(trace_parent_area(&tc).unwrap(), 0.0);
    }

    #[test]
    fn keogh_euclidean_limit() {
        let (b, c, a_angle) = (2e-4, 3e-4, 1.1);
        let s = keogh_area(b / 2.0, c / 2.0, a_angle).unwrap();
        let want = b * c * a_angle.sin() / 2.0;
        assert!(((s - want) / want).abs() < 1e-7);
    }

    #[test]
    fn inconsistent_inputs_rejected() {
        assert!(matches!(
            keogh_area(3.0, 3.0, 1.0),
            Err(Error::Inconsistent { .. })
        ));
        let tc = TraceCoords::from_edges(5.0, 5.0, 5.0);
        assert!(matches!(
            trace_parent_area(&tc),
            Err(Error::Inconsistent { .. })
        ));
    }

    #[test]
    fn law_of_sines() {
        let (x, y, z) = angles_from_edges(1.0, 1.0, 1.0).unwrap();
        assert_eq!(law_of_sines_ratio(1.0, x), law_of_sines_ratio(1.0, y));
        assert_eq!(law_of_sines_ratio(1.0, y), law_of_sines_ratio(1.0, z));
        let (x, _, z) = angles_from_edges(4.0, 4.0, 7.0).unwrap();
        let (r1, r2) = (law_of_sines_ratio(4.0, x), law_of_sines_ratio(7.0, z));
        assert!(((r1 - r2) / r1).abs() < 1e-12);
        let (x, _, _) = angles_from_edges(1e-6, 1e-6, 1e-6).unwrap();
        assert!((law_of_sines_ratio(1e-6, x) * 1e-6 - (PI / 3.0).sin()).abs() < 1e-9);
    }

    #[test]
    fn equilateral_mu() {
        let a: f64 = 1.3;
        let md = medial_data(a, a, a).unwrap();
        let t = (3.0 * a / 4.0).tanh() * (a / 4.0).tanh().powi(3);
        assert!((md.mu - (1.0 - t) / (1.0 + t)).abs() < 1e-15);
        assert!(((md.m_a.cosh() - (a / 2.0).cosh() * md.mu) / md.m_a.cosh()).abs() < 1e-14);
    }

    #[test]
    fn medial_data_euclidean_limit() {
        let md = medial_data(1e-5, 1.2e-5, 0.8e-5).unwrap();
        assert!((md.mu - 1.0).abs() < 1e-15);
        assert!(((md.m_a - 0.5e-5) / 0.5e-5).abs() < 1e-9);
        assert!(md.l_a < 1e-4);
    }

    #[test]
    fn midlines_shorter_than_half_edges() {
        for &(a, b, c) in &[(1.0, 1.0, 1.0), (4.0, 4.0, 7.0), (0.3, 1.2, 1.0)] {
            let md = medial_data(a, b, c).unwrap();
            assert!(md.mu > 0.0 && md.mu < 1.0);
            for (m, x) in md.midlines().into_iter().zip([a, b, c]) {
                assert!(m > 0.0 && m < x / 2.0);
            }
            for ((m, l), x) in md
                .midlines()
                .into_iter()
                .zip(md.lambert_legs())
                .zip([a, b, c])
            {
                let lhs = (x / 2.0).sinh();
                assert!(((m.sinh() * l.cosh() - lhs) / lhs).abs() < 1e-12);
            }
        }
    }
}
