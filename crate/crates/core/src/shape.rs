//! Points of the moduli space of ordered triangles.
//!
//! A shape is an ordered angle triple `(A, B, C)` with positive entries and
//! sum at most pi. Hyperbolic shapes (sum below pi) also carry their unique
//! edge lengths; Euclidean shapes are only defined up to scale and carry none.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt;
use crate::hyptrig::{self, EUCLIDEAN_TOL};

/// Ordered angles `[A, B, C]` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct AngleShape(#[serde(serialize_with = "fmt::ser_f64x3")] pub [f64; 3]);

/// Ordered hyperbolic edge lengths `[a, b, c]`, `a` opposite angle `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct EdgeLengths(#[serde(serialize_with = "fmt::ser_f64x3")] pub [f64; 3]);

impl AngleShape {
    pub const EQUILATERAL: AngleShape = AngleShape([PI / 3.0, PI / 3.0, PI / 3.0]);

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_euclidean(&self) -> bool {
        (self.sum() - PI).abs() <= EUCLIDEAN_TOL
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Reorder slots: slot `i` of the result is slot `perm[i]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        AngleShape([self.0[perm[0]], self.0[perm[1]], self.0[perm[2]]])
    }
}

impl EdgeLengths {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        hyptrig::check_edges(a, b, c)?;
        Ok(EdgeLengths([a, b, c]))
    }

    pub fn half_sinh(&self) -> [f64; 3] {
        self.0.map(|x| (x / 2.0).sinh())
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        EdgeLengths([self.0[perm[0]], self.0[perm[1]], self.0[perm[2]]])
    }
}

/// A shape with its derived data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeRecord {
    pub angles: AngleShape,
    pub edges: Option<EdgeLengths>,
    #[serde(serialize_with = "fmt::ser_f64")]
    pub area: f64,
}

impl ShapeRecord {
    pub fn from_edges(a: f64, b: f64, c: f64) -> Result<Self> {
        let (x, y, z) = hyptrig::angles_from_edges(a, b, c)?;
        Ok(ShapeRecord {
            angles: AngleShape([x, y, z]),
            edges: Some(EdgeLengths([a, b, c])),
            area: hyptrig::area_from_edges(a, b, c)?,
        })
    }

    pub fn from_edge_lengths(e: EdgeLengths) -> Result<Self> {
        let [a, b, c] = e.0;
        Self::from_edges(a, b, c)
    }

    pub fn from_angles(a: f64, b: f64, c: f64) -> Result<Self> {
        hyptrig::check_angles(a, b, c)?;
        let angles = AngleShape([a, b, c]);
        let sum = angles.sum();
        if sum > PI + EUCLIDEAN_TOL {
            return Err(Error::AngleSumExceedsPi { sum });
        }
        if angles.is_euclidean() {
            return Ok(ShapeRecord {
                angles,
                edges: None,
                area: 0.0,
            });
        }
        let (x, y, z) = hyptrig::edges_from_angles(a, b, c)?;
        Ok(ShapeRecord {
            angles,
            edges: Some(EdgeLengths([x, y, z])),
            area: hyptrig::defect_area(a, b, c)?,
        })
    }

    pub fn from_angle_shape(s: AngleShape) -> Result<Self> {
        let [a, b, c] = s.0;
        Self::from_angles(a, b, c)
    }

    pub fn is_euclidean(&self) -> bool {
        self.edges.is_none()
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        ShapeRecord {
            angles: self.angles.permuted(perm),
            edges: self.edges.map(|e| e.permuted(perm)),
            area: self.area,
        }
    }

    /// Check the record's own invariants.
    pub fn self_check(&self) -> Result<()> {
        let [a, b, c] = self.angles.0;
        hyptrig::check_angles(a, b, c)?;
        let defect = hyptrig::defect_area(a, b, c)?;
        if (defect - self.area).abs() > 1e-10 {
            return Err(Error::Inconsistent {
                formula: "ShapeRecord area",
                value: self.area,
            });
        }
        match self.edges {
            None if !self.angles.is_euclidean() => Err(Error::Inconsistent {
                formula: "ShapeRecord edges",
                value: self.angles.sum(),
            }),
            None => Ok(()),
            Some(e) => {
                let [x, y, z] = e.0;
                let (p, q, r) = hyptrig::angles_from_edges(x, y, z)?;
                for (got, want) in [p, q, r].into_iter().zip(self.angles.0) {
                    if (got - want).abs() > 1e-10 * want.max(1.0) {
                        return Err(Error::Inconsistent {
                            formula: "ShapeRecord angles",
                            value: got,
                        });
                    }
                }
                Ok(())
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("shape record serializes")
    }
}

/// Euclidean distance between angle triples.
pub fn metric_distance(s: &AngleShape, t: &AngleShape) -> f64 {
    s.0.iter()
        .zip(t.0.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Radial projection onto the Euclidean face, `(A,B,C) -> pi (A,B,C)/(A+B+C)`.
/// The last slot is recomputed so the result sums to pi.
pub fn project_euclidean(s: &AngleShape) -> AngleShape {
    let k = PI / s.sum();
    let a = s.0[0] * k;
    let b = s.0[1] * k;
    AngleShape([a, b, PI - a - b])
}
