//! The four subdivision maps, orbits, and the limit map.
//!
//! Cutting a triangle along its three midlines leaves three corner cells and
//! the medial cell. The child vertex orders are the ones that make all four
//! maps the identity on Euclidean shapes:
//!
//! | letter | child vertices      | child edges             |
//! |--------|---------------------|-------------------------|
//! | `A`    | `(A, M_c, M_b)`     | `(m_a, b/2, c/2)`       |
//! | `B`    | `(M_c, B, M_a)`     | `(a/2, m_b, c/2)`       |
//! | `C`    | `(M_b, M_a, C)`     | `(a/2, b/2, m_c)`       |
//! | `M`    | `(M_a, M_b, M_c)`   | `(m_a, m_b, m_c)`       |
//!
//! where `M_x` is the midpoint of edge `x` and `m_x` the midline parallel to it.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::sig17;
use crate::hyptrig;
use crate::plane_model::{self, PlacedTriangle};
use crate::shape::{self, AngleShape, EdgeLengths, ShapeRecord};
use crate::symbolic::SymbolSequence;

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Letter {
    A,
    B,
    C,
    M,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::M];

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'A' => Some(Letter::A),
            'B' => Some(Letter::B),
            'C' => Some(Letter::C),
            'M' => Some(Letter::M),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
            Letter::C => 'C',
            Letter::M => 'M',
        }
    }

    /// Vertex slot for corner letters.
    pub fn slot(self) -> Option<usize> {
        match self {
            Letter::A => Some(0),
            Letter::B => Some(1),
            Letter::C => Some(2),
            Letter::M => None,
        }
    }

    pub fn from_slot(i: usize) -> Letter {
        [Letter::A, Letter::B, Letter::C][i]
    }

    /// The letter naming the same corner after slots are reordered by `perm`
    /// (new slot `i` holds old slot `perm[i]`).
    pub fn permuted(self, perm: [usize; 3]) -> Letter {
        match self.slot() {
            None => Letter::M,
            Some(j) => Letter::from_slot(perm.iter().position(|&p| p == j).expect("permutation")),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
    text.trim()
        .chars()
        .map(|c| Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?}"))))
        .collect()
}

/// Child edge lengths by the closed-form midline formulas.
pub fn child_edges(letter: Letter, e: &EdgeLengths) -> Result<EdgeLengths> {
    let [a, b, c] = e.0;
    let md = hyptrig::medial_data(a, b, c)?;
    Ok(EdgeLengths(match letter {
        Letter::A => [md.m_a, b / 2.0, c / 2.0],
        Letter::B => [a / 2.0, md.m_b, c / 2.0],
        Letter::C => [a / 2.0, b / 2.0, md.m_c],
        Letter::M => [md.m_a, md.m_b, md.m_c],
    }))
}

pub fn apply(letter: Letter, s: &ShapeRecord) -> Result<ShapeRecord> {
    match &s.edges {
        None => Ok(*s),
        Some(e) => ShapeRecord::from_edge_lengths(child_edges(letter, e)?),
    }
}

/// The child cell of a placed triangle, vertices in slot order.
pub fn child_cell(letter: Letter, t: &PlacedTriangle) -> PlacedTriangle {
    let [ma, mb, mc] = t.midpoints();
    let (a, b, c) = match letter {
        Letter::A => (t.a, mc, mb),
        Letter::B => (mc, t.b, ma),
        Letter::C => (mb, ma, t.c),
        Letter::M => (ma, mb, mc),
    };
    PlacedTriangle { a, b, c }
}

/// Child edge lengths measured geometrically in the hyperboloid model.
pub fn apply_oracle(letter: Letter, e: &EdgeLengths) -> Result<EdgeLengths> {
    let placed = plane_model::place(e)?;
    Ok(EdgeLengths(child_cell(letter, &placed).edges()?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitStep {
    pub n: usize,
    /// Letter that produced this step; `None` for the start shape.
    pub letter: Option<Letter>,
    pub angles: AngleShape,
    pub edges: Option<EdgeLengths>,
    pub area: f64,
    /// `sin(S/2)`, kept at full relative precision for tiny triangles.
    pub sin_half_area: f64,
    /// `ln sin A`.
    pub rho: f64,
    pub sinh_half_edges: Option<[f64; 3]>,
}

impl OrbitStep {
    fn new(n: usize, letter: Option<Letter>, s: &ShapeRecord) -> Result<Self> {
        let sin_half_area = match &s.edges {
            Some(e) => hyptrig::half_area_sine(e.0[0], e.0[1], e.0[2])?,
            None => 0.0,
        };
        Ok(OrbitStep {
            n,
            letter,
            angles: s.angles,
            edges: s.edges,
            area: s.area,
            sin_half_area,
            rho: s.angles.0[0].sin().ln(),
            sinh_half_edges: s.edges.map(|e| e.half_sinh()),
        })
    }

    /// `ln sin` of the angle in the given slot.
    pub fn log_sin(&self, slot: usize) -> f64 {
        self.angles.0[slot].sin().ln()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OrbitTrace {
    pub steps: Vec<OrbitStep>,
}

pub const ORBIT_CSV_HEADER: &str = "n,letter,A,B,C,a,b,c,S,ln_sin_A,sinh_a2,sinh_b2,sinh_c2";

impl OrbitTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(ORBIT_CSV_HEADER);
        out.push('\n');
        for st in &self.steps {
            let mut cols = vec![
                st.n.to_string(),
                st.letter.map(|l| l.to_string()).unwrap_or_default(),
            ];
            cols.extend(st.angles.0.iter().map(|&x| sig17(x)));
            match &st.edges {
                Some(e) => cols.extend(e.0.iter().map(|&x| sig17(x))),
                None => cols.extend(["", "", ""].map(String::from)),
            }
            cols.push(sig17(st.area));
            cols.push(sig17(st.rho));
            match &st.sinh_half_edges {
                Some(h) => cols.extend(h.iter().map(|&x| sig17(x))),
                None => cols.extend(["", "", ""].map(String::from)),
            }
            out.push_str(&cols.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn orbit(word: &[Letter], s0: &ShapeRecord) -> Result<OrbitTrace> {
    let mut steps = Vec::with_capacity(word.len() + 1);
    steps.push(OrbitStep::new(0, None, s0)?);
    let mut cur = *s0;
    for (i, &l) in word.iter().enumerate() {
        cur = apply(l, &cur)?;
        steps.push(OrbitStep::new(i + 1, Some(l), &cur)?);
    }
    Ok(OrbitTrace { steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitResult {
    pub angles: AngleShape,
    pub iterations: usize,
    #[serde(serialize_with = "crate::fmt::ser_f64")]
    pub residual: f64,
}

/// Follow `seq` from `s0` until the area and the per-step angle change both
/// drop below `tol`, then project onto the Euclidean face.
pub fn limit_shape(seq: &SymbolSequence, s0: &ShapeRecord, tol: f64) -> Result<LimitResult> {
    limit_shape_capped(seq, s0, tol, DEFAULT_MAX_ITERATIONS)
}

pub fn limit_shape_capped(
    seq: &SymbolSequence,
    s0: &ShapeRecord,
    tol: f64,
    max_iterations: usize,
) -> Result<LimitResult> {
    if s0.is_euclidean() {
        return Ok(LimitResult {
            angles: s0.angles,
            iterations: 0,
            residual: 0.0,
        });
    }
    let mut cur = *s0;
    for (i, l) in seq.letters().take(max_iterations).enumerate() {
        let next = apply(l, &cur)?;
        let step = shape::metric_distance(&next.angles, &cur.angles);
        cur = next;
        if cur.area < tol && step < tol {
            return Ok(LimitResult {
                angles: shape::project_euclidean(&cur.angles),
                iterations: i + 1,
                residual: cur.area.max(step),
            });
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: max_iterations,
    })
}
