//! Seeded numerical harnesses for the convergence bounds.
//!
//! Each suite samples start triangles and words from a deterministic
//! ChaCha stream (one stream per sample index, so results do not depend on
//! scheduling), runs orbits, and checks one family of inequalities. Suites
//! that assert produce `pass = false` with counterexamples; diagnostic suites
//! only record statistics.
//!
//! Several bounds are strict inequalities whose true margin shrinks like the
//! square of the edge lengths, which drops below binary64 resolution after a
//! few dozen halvings. Those checks flag a violation only when the observed
//! value lands on the wrong side of the bound by more than the rounding
//! allowance of the measurement; comparisons settled inside the allowance are
//! counted as `tight` in the statistics.

// `!(x < bound)` is deliberate throughout: a NaN must count as a violation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::fmt::{self, sig17};
use crate::hyptrig;
use crate::shape::{self, AngleShape, EdgeLengths, ShapeRecord};
use crate::subdivision::{self, Letter, OrbitStep, DEFAULT_TOL};
use crate::symbolic::{Rationality, SymbolSequence};

const EPS: f64 = f64::EPSILON;

/// Relative allowance for non-strict bounds on quantities that went through
/// a few dozen rounded operations.
pub const NONSTRICT_SLACK: f64 = 1e-12;

/// Counterexamples kept per report; the full count is in `stats.violations`.
const MAX_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub seed: u64,
    pub samples: usize,
    pub edge_range: (f64, f64),
    pub steps: usize,
    pub sigma: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            seed: 1,
            samples: 200,
            edge_range: (0.01, 5.0),
            steps: 40,
            sigma: 1.0,
        }
    }
}

impl SampleSpec {
    pub fn with_seed(seed: u64) -> Self {
        SampleSpec {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stat {
    Num(f64),
    Count(u64),
    Text(String),
    List(Vec<f64>),
}

impl Serialize for Stat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Stat::Num(x) => fmt::ser_f64(x, s),
            Stat::Count(n) => s.serialize_u64(*n),
            Stat::Text(t) => s.serialize_str(t),
            Stat::List(v) => fmt::ser_f64_vec(v, s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub input: String,
    pub step: usize,
    #[serde(serialize_with = "fmt::ser_f64")]
    pub observed: f64,
    #[serde(serialize_with = "fmt::ser_f64")]
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub pass: bool,
    /// Diagnostic suites never fail.
    pub asserting: bool,
    pub samples: usize,
    pub failures: Vec<Failure>,
    pub stats: BTreeMap<String, Stat>,
}

impl Report {
    fn new(suite: &str, samples: usize, asserting: bool) -> Self {
        Report {
            suite: suite.to_owned(),
            pass: true,
            asserting,
            samples,
            failures: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    fn fail(&mut self, f: Failure) {
        self.pass = false;
        let n = match self.stats.get("violations") {
            Some(Stat::Count(n)) => *n,
            _ => 0,
        };
        self.stats.insert("violations".into(), Stat::Count(n + 1));
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(f);
        }
    }

    fn stat(&mut self, key: &str, v: Stat) {
        self.stats.insert(key.to_owned(), v);
    }

    fn finish(mut self) -> Self {
        self.stats
            .entry("violations".into())
            .or_insert(Stat::Count(0));
        if !self.asserting {
            self.pass = true;
        }
        self
    }

    pub fn violations(&self) -> u64 {
        match self.stats.get("violations") {
            Some(Stat::Count(n)) => *n,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Uniform edges in `range`, rejected until they form a triangle.
pub fn random_edges(rng: &mut ChaCha8Rng, range: (f64, f64)) -> EdgeLengths {
    loop {
        let e = [0; 3].map(|_| rng.gen_range(range.0..range.1));
        if hyptrig::check_edges(e[0], e[1], e[2]).is_ok() {
            return EdgeLengths(e);
        }
    }
}

pub fn random_letter(rng: &mut ChaCha8Rng) -> Letter {
    Letter::ALL[rng.gen_range(0..4)]
}

pub fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Vec<Letter> {
    (0..len).map(|_| random_letter(rng)).collect()
}

fn max_half_sinh(s: &ShapeRecord) -> f64 {
    s.edges
        .map(|e| e.half_sinh().into_iter().fold(0.0, f64::max))
        .unwrap_or(0.0)
}

/// Apply letters from `next` until every `sinh(edge/2)` is below `sigma`.
/// Returns the rebased start and the letters used.
pub fn burn_in(
    s: &ShapeRecord,
    sigma: f64,
    mut next: impl FnMut() -> Letter,
) -> Result<(ShapeRecord, Vec<Letter>)> {
    let mut cur = *s;
    let mut used = Vec::new();
    while max_half_sinh(&cur) >= sigma {
        let l = next();
        cur = subdivision::apply(l, &cur)?;
        used.push(l);
    }
    Ok((cur, used))
}

#[cfg(feature = "parallel")]
fn map_samples<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_samples<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

fn describe(e: &EdgeLengths, word: &[Letter]) -> String {
    let w: String = word.iter().map(|l| l.as_char()).collect();
    format!(
        "edges=[{},{},{}] word={w}",
        sig17(e.0[0]),
        sig17(e.0[1]),
        sig17(e.0[2])
    )
}

fn summary(values: &[f64]) -> (f64, f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    (min, max, mean)
}

struct SampleOutcome {
    failures: Vec<Failure>,
    tight: u64,
    values: Vec<f64>,
}

fn merge(report: &mut Report, outcomes: Vec<SampleOutcome>) -> (u64, Vec<f64>) {
    let mut tight = 0;
    let mut values = Vec::new();
    for o in outcomes {
        tight += o.tight;
        values.extend(o.values);
        for f in o.failures {
            report.fail(f);
        }
    }
    (tight, values)
}

// ---------------------------------------------------------------------------
// Edge halving and its lower bound

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalvingConstants {
    /// Per-step factor on `sinh(edge/2)`.
    pub halving: f64,
    /// Factor in the lower bound `factor * 2^-n * sinh(x_0/2)`.
    pub lower: f64,
}

impl Default for HalvingConstants {
    fn default() -> Self {
        HalvingConstants {
            halving: 0.5,
            lower: (-1.5f64).exp(),
        }
    }
}

/// Exact margin `1 - 2 sinh(x'/2) / sinh(x/2)` of the halving inequality,
/// from half-argument forms that stay accurate for tiny edges.
fn halving_margin(letter: Letter, parent: &EdgeLengths, slot: usize) -> Result<f64> {
    let midline_slot = match letter.slot() {
        Some(k) => k == slot,
        None => true,
    };
    let x = parent.0[slot];
    if !midline_slot {
        // child edge is x/2: margin = 1 - 1/cosh(x/4)
        return Ok(2.0 * (x / 8.0).sinh().powi(2) / (x / 4.0).cosh());
    }
    let md = hyptrig::medial_data(parent.0[0], parent.0[1], parent.0[2])?;
    let (m, l) = (md.midlines()[slot], md.lambert_legs()[slot]);
    // sinh(x/2) = 2 sinh(m/2) cosh(m/2) cosh(l)
    let k = (m / 2.0).cosh() * l.cosh();
    Ok((2.0 * (m / 4.0).sinh().powi(2) * l.cosh() + 2.0 * (l / 2.0).sinh().powi(2)) / k)
}

pub fn run_lemma21(spec: &SampleSpec) -> Report {
    run_lemma21_with(spec, HalvingConstants::default())
}

pub fn run_lemma21_with(spec: &SampleSpec, k: HalvingConstants) -> Report {
    let mut report = Report::new("lemma21", spec.samples, true);
    let outcomes = map_samples(spec.samples, |i| {
        let mut rng = rng_for(spec.seed, i);
        let e0 = random_edges(&mut rng, spec.edge_range);
        let s0 = ShapeRecord::from_edge_lengths(e0).expect("valid sample");
        let (_, mut word) = burn_in(&s0, spec.sigma, || random_letter(&mut rng)).expect("burn-in");
        let burn = word.len();
        word.extend(random_word(&mut rng, spec.steps));
        let tr = subdivision::orbit(&word, &s0).expect("orbit");
        let mut out = SampleOutcome {
            failures: Vec::new(),
            tight: 0,
            values: Vec::new(),
        };
        for w in tr.steps.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            let (pe, letter) = (p.edges.expect("hyperbolic"), q.letter.expect("letter"));
            let (hp, hq) = (p.sinh_half_edges.unwrap(), q.sinh_half_edges.unwrap());
            for slot in 0..3 {
                let (lhs, rhs) = (hq[slot], k.halving * hp[slot]);
                out.values.push(hq[slot] / hp[slot]);
                if lhs < rhs {
                    continue;
                }
                let margin = halving_margin(letter, &pe, slot).expect("margin");
                if lhs <= rhs * (1.0 + 4.0 * EPS) && margin > 0.0 {
                    out.tight += 1;
                    continue;
                }
                out.failures.push(Failure {
                    input: format!("{} slot={}", describe(&e0, &word), slot),
                    step: q.n,
                    observed: lhs,
                    bound: rhs,
                });
            }
        }
        // lower bound, rebased at the end of burn-in
        let base = &tr.steps[burn];
        let h0 = base.sinh_half_edges.unwrap();
        for st in &tr.steps[burn..] {
            let n = st.n - burn;
            let h = st.sinh_half_edges.unwrap();
            for slot in 0..3 {
                let bound = k.lower * 0.5f64.powi(n as i32) * h0[slot];
                if !(h[slot] > bound) {
                    out.failures.push(Failure {
                        input: format!(
                            "{} slot={} lower burn_in={burn}",
                            describe(&e0, &word),
                            slot
                        ),
                        step: n,
                        observed: h[slot],
                        bound,
                    });
                }
            }
        }
        out
    });
    let (mut halving, mut lower) = (0, 0);
    for f in outcomes.iter().flat_map(|o| &o.failures) {
        if f.input.contains(" lower ") {
            lower += 1;
        } else {
            halving += 1;
        }
    }
    let (tight, ratios) = merge(&mut report, outcomes);
    let (min, max, _) = summary(&ratios);
    report.stat("halving_violations", Stat::Count(halving));
    report.stat("lower_violations", Stat::Count(lower));
    report.stat("tight", Stat::Count(tight));
    report.stat("min_ratio", Stat::Num(min));
    report.stat("max_ratio", Stat::Num(max));
    report.stat("halving", Stat::Num(k.halving));
    report.stat("lower_factor", Stat::Num(k.lower));
    report.finish()
}

// ---------------------------------------------------------------------------
// Area decay along medial orbits

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaConstants {
    pub lower: f64,
    pub upper: f64,
}

impl Default for AreaConstants {
    fn default() -> Self {
        AreaConstants {
            lower: (-0.5f64).exp(),
            upper: 1.0,
        }
    }
}

fn medial_orbit(spec: &SampleSpec, i: usize, steps: usize) -> (EdgeLengths, Vec<OrbitStep>) {
    let mut rng = rng_for(spec.seed, i);
    let e0 = random_edges(&mut rng, spec.edge_range);
    let s0 = ShapeRecord::from_edge_lengths(e0).expect("valid sample");
    let (start, _) = burn_in(&s0, spec.sigma, || Letter::M).expect("burn-in");
    let tr = subdivision::orbit(&vec![Letter::M; steps], &start).expect("orbit");
    (e0, tr.steps)
}

pub fn run_area_bounds(spec: &SampleSpec) -> Report {
    run_area_bounds_with(spec, AreaConstants::default())
}

pub fn run_area_bounds_with(spec: &SampleSpec, k: AreaConstants) -> Report {
    let mut report = Report::new("area", spec.samples, true);
    let outcomes = map_samples(spec.samples, |i| {
        let (e0, steps) = medial_orbit(spec, i, spec.steps);
        let s0 = steps[0].sin_half_area;
        let mut out = SampleOutcome {
            failures: Vec::new(),
            tight: 0,
            values: Vec::new(),
        };
        for st in &steps {
            let scale = 0.25f64.powi(st.n as i32);
            let ratio = st.sin_half_area / s0;
            out.values.push(ratio / scale);
            let (lo, hi) = (k.lower * scale, k.upper * scale);
            if ratio < lo * (1.0 - NONSTRICT_SLACK) || ratio > hi * (1.0 + NONSTRICT_SLACK) {
                out.failures.push(Failure {
                    input: format!(
                        "edges=[{},{},{}] letter=M",
                        sig17(e0.0[0]),
                        sig17(e0.0[1]),
                        sig17(e0.0[2])
                    ),
                    step: st.n,
                    observed: ratio,
                    bound: if ratio < lo { lo } else { hi },
                });
            }
        }
        out
    });
    let (_, scaled) = merge(&mut report, outcomes);
    let (min, max, _) = summary(&scaled);
    report.stat("min_scaled_ratio", Stat::Num(min));
    report.stat("max_scaled_ratio", Stat::Num(max));
    report.finish()
}

// ---------------------------------------------------------------------------
// Limit of the rescaled area ratio

pub const RATIO_LIMIT_CAUCHY_TOL: f64 = 1e-10;

pub fn run_ratio_limit(spec: &SampleSpec) -> Report {
    run_ratio_limit_with(spec, ((-0.5f64).exp(), 0.5f64.exp()))
}

pub fn run_ratio_limit_with(spec: &SampleSpec, interval: (f64, f64)) -> Report {
    let mut report = Report::new("ratiolimit", spec.samples, true);
    let outcomes = map_samples(spec.samples, |i| {
        let (e0, steps) = medial_orbit(spec, i, 80);
        let r = |n: usize| 4f64.powi(n as i32) * steps[n].sin_half_area / steps[0].sin_half_area;
        let (r40, r80) = (r(40), r(80));
        let input = format!(
            "edges=[{},{},{}]",
            sig17(e0.0[0]),
            sig17(e0.0[1]),
            sig17(e0.0[2])
        );
        let mut failures = Vec::new();
        if !((r80 - r40).abs() < RATIO_LIMIT_CAUCHY_TOL) {
            failures.push(Failure {
                input: input.clone(),
                step: 80,
                observed: (r80 - r40).abs(),
                bound: RATIO_LIMIT_CAUCHY_TOL,
            });
        }
        if !(r80 > interval.0 && r80 < interval.1) {
            failures.push(Failure {
                input,
                step: 80,
                observed: r80,
                bound: if r80 <= interval.0 {
                    interval.0
                } else {
                    interval.1
                },
            });
        }
        SampleOutcome {
            failures,
            tight: 0,
            values: vec![r80, (r80 - r40).abs()],
        }
    });
    let (_, values) = merge(&mut report, outcomes);
    let limits: Vec<f64> = values.iter().step_by(2).copied().collect();
    let gaps: Vec<f64> = values.iter().skip(1).step_by(2).copied().collect();
    let (min, max, mean) = summary(&limits);
    report.stat("min_r80", Stat::Num(min));
    report.stat("max_r80", Stat::Num(max));
    report.stat("mean_r80", Stat::Num(mean));
    report.stat("max_gap_r80_r40", Stat::Num(summary(&gaps).1));
    report.stat("interval", Stat::List(vec![interval.0, interval.1]));
    report.finish()
}

// ---------------------------------------------------------------------------
// Non-contraction witness

/// Margin required on each strict inequality of the witness.
pub const WITNESS_MARGIN: f64 = 1e-12;

pub fn run_noncontraction() -> Report {
    let mut report = Report::new("noncontraction", 1, true);
    let s = ShapeRecord::from_edges(4.0, 4.0, 7.0).expect("witness triangle");
    let m = subdivision::apply(Letter::M, &s).expect("f_M");
    let fixed = AngleShape::EQUILATERAL;
    let (d0, d1) = (
        shape::metric_distance(&s.angles, &fixed),
        shape::metric_distance(&m.angles, &fixed),
    );
    let input = "edges=[4,4,7] letter=M".to_string();
    let checks = [
        (
            "apex_increase",
            m.angles.0[2] - s.angles.0[2],
            m.angles.0[2],
            s.angles.0[2],
        ),
        (
            "base_a_decrease",
            s.angles.0[0] - m.angles.0[0],
            m.angles.0[0],
            s.angles.0[0],
        ),
        (
            "base_b_decrease",
            s.angles.0[1] - m.angles.0[1],
            m.angles.0[1],
            s.angles.0[1],
        ),
        ("distance_increase", d1 - d0, d1, d0),
    ];
    for (name, margin, observed, bound) in checks {
        report.stat(&format!("{name}_margin"), Stat::Num(margin));
        if !(margin > WITNESS_MARGIN) {
            report.fail(Failure {
                input: format!("{input} check={name}"),
                step: 1,
                observed,
                bound,
            });
        }
    }
    report.stat("angles_before", Stat::List(s.angles.0.to_vec()));
    report.stat("angles_after", Stat::List(m.angles.0.to_vec()));
    report.stat("distance_before", Stat::Num(d0));
    report.stat("distance_after", Stat::Num(d1));
    // observational: the corner map on the same triangle
    let a = subdivision::apply(Letter::A, &s).expect("f_A");
    report.stat("corner_a_angles_after", Stat::List(a.angles.0.to_vec()));
    report.stat(
        "corner_a_distance_after",
        Stat::Num(shape::metric_distance(&a.angles, &fixed)),
    );
    report.finish()
}

// ---------------------------------------------------------------------------
// Diagnostic: angles of a triangle versus the law of cosines on its medial edges

pub fn eq1_discrepancy(e: &EdgeLengths) -> Result<f64> {
    let s = ShapeRecord::from_edge_lengths(*e)?;
    let m = subdivision::child_edges(Letter::M, e)?;
    let (x, y, z) = hyptrig::angles_from_edges(m.0[0], m.0[1], m.0[2])?;
    Ok([x, y, z]
        .iter()
        .zip(s.angles.0)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max))
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn run_eq1_probe(spec: &SampleSpec) -> Report {
    let mut report = Report::new("eq1probe", spec.samples, false);
    let rows = map_samples(spec.samples, |i| {
        let mut rng = rng_for(spec.seed, i);
        let e = random_edges(&mut rng, spec.edge_range);
        let s = ShapeRecord::from_edge_lengths(e).expect("valid sample");
        (eq1_discrepancy(&e).expect("probe"), s.area)
    });
    let deltas: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let (min, max, mean) = summary(&deltas);
    let (lx, ly): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|(d, s)| *d > 0.0 && *s > 0.0)
        .map(|(d, s)| (s.ln(), d.ln()))
        .unzip();
    report.stat("min_delta", Stat::Num(min));
    report.stat("max_delta", Stat::Num(max));
    report.stat("mean_delta", Stat::Num(mean));
    report.stat(
        "log_delta_vs_log_area_slope",
        Stat::Num(fit_slope(&lx, &ly)),
    );
    report.stat(
        "delta_unit_equilateral",
        Stat::Num(eq1_discrepancy(&EdgeLengths([1.0, 1.0, 1.0])).expect("probe")),
    );
    report.finish()
}

// ---------------------------------------------------------------------------
// Cauchy bound on ln sin of each angle

/// Bound `scale * rate^n * sum sinh^2(x_0/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyConstants {
    pub scale: f64,
    pub rate: f64,
}

impl Default for CauchyConstants {
    fn default() -> Self {
        CauchyConstants {
            scale: 1.0,
            rate: 0.5,
        }
    }
}

pub fn run_cauchy_bound(spec: &SampleSpec) -> Report {
    run_cauchy_bound_with(spec, CauchyConstants::default())
}

pub fn run_cauchy_bound_with(spec: &SampleSpec, k: CauchyConstants) -> Report {
    let mut report = Report::new("cauchy", spec.samples, true);
    let outcomes = map_samples(spec.samples, |i| {
        let mut rng = rng_for(spec.seed, i);
        let e0 = random_edges(&mut rng, spec.edge_range);
        let s0 = ShapeRecord::from_edge_lengths(e0).expect("valid sample");
        let (start, _) = burn_in(&s0, spec.sigma, || random_letter(&mut rng)).expect("burn-in");
        let word = random_word(&mut rng, spec.steps);
        let tr = subdivision::orbit(&word, &start).expect("orbit");
        let cycle_len = rng.gen_range(1..=3);
        let seq = SymbolSequence::new(word.clone(), random_word(&mut rng, cycle_len))
            .expect("nonempty cycle");
        let limit_min = limit_angles(&seq, &start).min();
        let total: f64 = tr.steps[0]
            .sinh_half_edges
            .unwrap()
            .iter()
            .map(|h| h * h)
            .sum();
        let start_edges = start.edges.expect("hyperbolic");
        let mut out = SampleOutcome {
            failures: Vec::new(),
            tight: 0,
            values: vec![limit_min],
        };
        if !(limit_min > 0.0) {
            out.failures.push(Failure {
                input: format!("{} limit seq={seq}", describe(&start_edges, &word)),
                step: 0,
                observed: limit_min,
                bound: 0.0,
            });
        }
        for slot in 0..3 {
            let rho: Vec<f64> = tr.steps.iter().map(|st| st.log_sin(slot)).collect();
            for n in 0..rho.len() {
                let bound = k.scale * k.rate.powi(n as i32) * total;
                for m in n..rho.len() {
                    let diff = (rho[m] - rho[n]).abs();
                    let allow = 8.0 * EPS * (rho[m].abs() + rho[n].abs());
                    out.values.push(diff / bound);
                    if diff <= bound {
                        continue;
                    }
                    if diff <= bound + allow {
                        out.tight += 1;
                        continue;
                    }
                    out.failures.push(Failure {
                        input: format!(
                            "{} slot={} k={}",
                            describe(&start_edges, &word),
                            slot,
                            m - n
                        ),
                        step: n,
                        observed: diff,
                        bound,
                    });
                }
            }
        }
        out
    });
    let mut limit_mins = Vec::new();
    let outcomes: Vec<SampleOutcome> = outcomes
        .into_iter()
        .map(|mut o| {
            limit_mins.push(o.values.remove(0));
            o
        })
        .collect();
    let (tight, ratios) = merge(&mut report, outcomes);
    report.stat("min_limit_angle", Stat::Num(summary(&limit_mins).0));
    report.stat("tight", Stat::Count(tight));
    report.stat("max_diff_over_bound", Stat::Num(summary(&ratios).1));
    report.stat("bound_scale", Stat::Num(k.scale));
    report.stat("bound_rate", Stat::Num(k.rate));
    report.finish()
}

// ---------------------------------------------------------------------------
// Per-step ratio of angle sines

/// First-order relative error amplification of the angles computed from
/// edges: the half-perimeter differences `s - x` lose `s / (s - x)` ulps.
fn angle_condition(st: &OrbitStep) -> f64 {
    match st.edges {
        None => 0.0,
        Some(e) => {
            let s = e.0.iter().sum::<f64>() / 2.0;
            e.0.iter().map(|x| s / (s - x)).sum()
        }
    }
}

/// Check `1/cosh(x/2) < sin X' / sin X < cosh(y/2) cosh(z/2)` for one slot,
/// in log form. `inverted` swaps the two bounds (harness self-test).
fn angle_ratio_step(
    p: &OrbitStep,
    q: &OrbitStep,
    slot: usize,
    inverted: bool,
) -> (Option<(f64, f64)>, bool) {
    let h = p.sinh_half_edges.unwrap_or([0.0; 3]);
    let ln_cosh = |k: usize| 0.5 * (h[k] * h[k]).ln_1p();
    let (x, y, z) = (slot, (slot + 1) % 3, (slot + 2) % 3);
    let (mut lo, mut hi) = (-ln_cosh(x), ln_cosh(y) + ln_cosh(z));
    if inverted {
        std::mem::swap(&mut lo, &mut hi);
    }
    let (rp, rq) = (p.log_sin(slot), q.log_sin(slot));
    let obs = rq - rp;
    let allow = 4.0 * EPS * (rp.abs() + rq.abs() + 1.0 + angle_condition(p) + angle_condition(q));
    if obs > lo && obs < hi {
        return (None, false);
    }
    if obs > lo - allow && obs < hi + allow && lo <= hi {
        return (None, true);
    }
    (Some((obs, if obs <= lo { lo } else { hi })), false)
}

pub fn run_angle_ratio(spec: &SampleSpec) -> Report {
    run_angle_ratio_with(spec, false)
}

pub fn run_angle_ratio_with(spec: &SampleSpec, inverted: bool) -> Report {
    let mut report = Report::new("angleratio", spec.samples, true);
    let outcomes = map_samples(spec.samples, |i| {
        let mut rng = rng_for(spec.seed, i);
        let e0 = random_edges(&mut rng, spec.edge_range);
        let s0 = ShapeRecord::from_edge_lengths(e0).expect("valid sample");
        let word = random_word(&mut rng, spec.steps);
        let tr = subdivision::orbit(&word, &s0).expect("orbit");
        let mut out = SampleOutcome {
            failures: Vec::new(),
            tight: 0,
            values: Vec::new(),
        };
        for w in tr.steps.windows(2) {
            for slot in 0..3 {
                match angle_ratio_step(&w[0], &w[1], slot, inverted) {
                    (None, tight) => out.tight += tight as u64,
                    (Some((observed, bound)), _) => out.failures.push(Failure {
                        input: format!("{} slot={slot}", describe(&e0, &word)),
                        step: w[1].n,
                        observed,
                        bound,
                    }),
                }
            }
        }
        out
    });
    let (tight, _) = merge(&mut report, outcomes);
    report.stat("tight", Stat::Count(tight));
    report.stat("inverted", Stat::Count(inverted as u64));
    report.finish()
}

/// Per-slot check exposed for single-step use (e.g. on Euclidean shapes).
pub fn angle_ratio_within_bounds(p: &OrbitStep, q: &OrbitStep) -> bool {
    (0..3).all(|slot| angle_ratio_step(p, q, slot, false).0.is_none())
}

// ---------------------------------------------------------------------------
// Continuity probes for the limit map

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuitySpec {
    pub seed: u64,
    /// Perturbations per radius and words per depth.
    pub samples: usize,
    pub radii: Vec<f64>,
    pub depths: Vec<usize>,
    /// Required bound `sup <= lipschitz * r` at the smallest radius.
    pub lipschitz: f64,
}

impl Default for ContinuitySpec {
    fn default() -> Self {
        ContinuitySpec {
            seed: 5,
            samples: 24,
            radii: (1..=6).map(|k| 10f64.powi(-k)).collect(),
            depths: vec![2, 4, 6, 8, 10, 12],
            lipschitz: 100.0,
        }
    }
}

fn limit_angles(seq: &SymbolSequence, s: &ShapeRecord) -> AngleShape {
    subdivision::limit_shape(seq, s, DEFAULT_TOL)
        .expect("limit converges")
        .angles
}

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [0; 3].map(|_| rng.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

/// A word agreeing with `seq` on its first `depth` letters, then random.
fn random_extension(rng: &mut ChaCha8Rng, seq: &SymbolSequence, depth: usize) -> SymbolSequence {
    let mut prefix: Vec<Letter> = seq.letters().take(depth).collect();
    let extra = rng.gen_range(0..4);
    prefix.extend(random_word(rng, extra));
    let cycle_len = rng.gen_range(1..=3);
    SymbolSequence::new(prefix, random_word(rng, cycle_len)).expect("nonempty cycle")
}

pub fn run_continuity(seq: &SymbolSequence, base: &ShapeRecord, spec: &ContinuitySpec) -> Report {
    let mut report = Report::new("continuity", spec.samples, true);
    let target = limit_angles(seq, base);
    let mut radii = spec.radii.clone();
    radii.sort_by(|a, b| b.partial_cmp(a).expect("finite radii"));
    let sups: Vec<f64> = radii
        .iter()
        .enumerate()
        .map(|(ri, &r)| {
            let mut rng = rng_for(spec.seed, ri);
            let mut sup: f64 = 0.0;
            let mut taken = 0;
            while taken < spec.samples {
                let d = random_direction(&mut rng);
                let p = [0, 1, 2].map(|k| base.angles.0[k] + r * d[k]);
                let Ok(s) = ShapeRecord::from_angles(p[0], p[1], p[2]) else {
                    continue;
                };
                if s.is_euclidean() != base.is_euclidean() {
                    continue;
                }
                sup = sup.max(shape::metric_distance(&limit_angles(seq, &s), &target));
                taken += 1;
            }
            sup
        })
        .collect();
    for (k, w) in sups.windows(2).enumerate() {
        if w[1] > w[0] + 1e-12 {
            report.fail(Failure {
                input: format!("seq={seq} part=1 radius={}", sig17(radii[k + 1])),
                step: k + 1,
                observed: w[1],
                bound: w[0],
            });
        }
    }
    if let (Some(&r), Some(&sup)) = (radii.last(), sups.last()) {
        if !(sup <= spec.lipschitz * r) {
            report.fail(Failure {
                input: format!("seq={seq} part=1 radius={}", sig17(r)),
                step: radii.len() - 1,
                observed: sup,
                bound: spec.lipschitz * r,
            });
        }
    }
    report.stat("radii", Stat::List(radii.clone()));
    report.stat("sup_by_radius", Stat::List(sups));

    // part 2: words sharing a growing prefix with seq
    let rational = seq.classify() == Rationality::Rational;
    let envelope: Vec<f64> = spec
        .depths
        .iter()
        .enumerate()
        .map(|(di, &depth)| {
            let mut rng = rng_for(spec.seed ^ 0x9e37_79b9, di);
            (0..spec.samples)
                .map(|_| {
                    let t = random_extension(&mut rng, seq, depth);
                    shape::metric_distance(&limit_angles(&t, base), &target)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let mut envelope_ok = true;
    for (k, w) in envelope.windows(2).enumerate() {
        if w[1] > w[0] + 1e-12 {
            envelope_ok = false;
            if !rational {
                report.fail(Failure {
                    input: format!("seq={seq} part=2 depth={}", spec.depths[k + 1]),
                    step: spec.depths[k + 1],
                    observed: w[1],
                    bound: w[0],
                });
            }
        }
    }
    report.stat(
        "depths",
        Stat::List(spec.depths.iter().map(|&d| d as f64).collect()),
    );
    report.stat("sup_by_depth", Stat::List(envelope));
    report.stat(
        "part2",
        Stat::Text(match (rational, envelope_ok) {
            (true, true) => "rational: recorded, envelope held".into(),
            (true, false) => "rational: recorded, envelope broke".into(),
            (false, _) => "irrational: asserted".into(),
        }),
    );
    report.finish()
}

// ---------------------------------------------------------------------------
// Surjectivity probe: invert the limit map on a slice of fixed defect

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurjectivitySpec {
    pub grid: usize,
    /// Defect of the hyperbolic slice searched.
    pub defect: f64,
    pub budget: usize,
    pub tol: f64,
}

impl Default for SurjectivitySpec {
    fn default() -> Self {
        SurjectivitySpec {
            grid: 5,
            defect: 0.2,
            budget: 200,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub start: AngleShape,
    pub residual: f64,
    pub evaluations: usize,
}

/// Interior grid of Euclidean shapes: `A = pi u`, `B = pi (1-u) v` with
/// `u, v` on `k/(n+1)`.
pub fn euclidean_grid(n: usize) -> Vec<AngleShape> {
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let (u, v) = (i as f64 / (n + 1) as f64, j as f64 / (n + 1) as f64);
            let a = PI * u;
            let b = PI * (1.0 - u) * v;
            out.push(AngleShape([a, b, PI - a - b]));
        }
    }
    out
}

/// Derivative-free search on the slice `A + B + C = pi - defect`: the
/// residual of the limit map is fed back as a correction of `(A, B)`,
/// rescaled by the slice projection, until it drops below `tol / 100`.
pub fn invert_limit(
    seq: &SymbolSequence,
    target: &AngleShape,
    spec: &SurjectivitySpec,
) -> Inversion {
    let total = PI - spec.defect;
    let k = total / PI;
    let mut x = [target.0[0] * k, target.0[1] * k];
    let eval = |x: [f64; 2]| -> Option<(AngleShape, AngleShape)> {
        let c = total - x[0] - x[1];
        let s = ShapeRecord::from_angles(x[0], x[1], c).ok()?;
        Some((s.angles, limit_angles(seq, &s)))
    };
    let mut best = Inversion {
        start: AngleShape([x[0], x[1], total - x[0] - x[1]]),
        residual: f64::INFINITY,
        evaluations: 0,
    };
    let mut step = k;
    for it in 0..spec.budget {
        let Some((start, image)) = eval(x) else {
            // left the slice: back off toward the best point
            step /= 2.0;
            x = [best.start.0[0], best.start.0[1]];
            continue;
        };
        let r = shape::metric_distance(&image, target);
        if r < best.residual {
            best = Inversion {
                start,
                residual: r,
                evaluations: it + 1,
            };
        } else {
            step /= 2.0;
        }
        if best.residual < spec.tol / 100.0 {
            break;
        }
        x = [
            best.start.0[0] + step * (target.0[0] - image.0[0]).clamp(-1.0, 1.0),
            best.start.0[1] + step * (target.0[1] - image.0[1]).clamp(-1.0, 1.0),
        ];
        if r >= best.residual && step < 1e-12 {
            break;
        }
        best.evaluations = it + 1;
    }
    best
}

pub fn run_surjectivity(seq: &SymbolSequence, spec: &SurjectivitySpec) -> Report {
    let targets = euclidean_grid(spec.grid);
    let mut report = Report::new("surjectivity", targets.len(), true);
    let results = map_samples(targets.len(), |i| invert_limit(seq, &targets[i], spec));
    for (i, (t, inv)) in targets.iter().zip(&results).enumerate() {
        if !(inv.residual < spec.tol) {
            report.fail(Failure {
                input: format!(
                    "seq={seq} target=[{},{},{}]",
                    sig17(t.0[0]),
                    sig17(t.0[1]),
                    sig17(t.0[2])
                ),
                step: i,
                observed: inv.residual,
                bound: spec.tol,
            });
        }
    }
    let residuals: Vec<f64> = results.iter().map(|r| r.residual).collect();
    report.stat("max_residual", Stat::Num(summary(&residuals).1));
    report.stat("residuals", Stat::List(residuals));
    report.stat("defect", Stat::Num(spec.defect));
    report.stat(
        "max_evaluations",
        Stat::Count(
            results
                .iter()
                .map(|r| r.evaluations as u64)
                .max()
                .unwrap_or(0),
        ),
    );
    report.finish()
}

// ---------------------------------------------------------------------------

pub const SUITES: [&str; 9] = [
    "lemma21",
    "area",
    "ratiolimit",
    "cauchy",
    "angleratio",
    "noncontraction",
    "eq1probe",
    "continuity",
    "surjectivity",
];

/// Run a suite by name with the given seed and sample count.
pub fn run_suite(name: &str, seed: u64, samples: usize) -> Option<Report> {
    let spec = SampleSpec {
        seed,
        samples,
        ..Default::default()
    };
    let m = SymbolSequence::parse("|M").expect("literal");
    Some(match name {
        "lemma21" => run_lemma21(&spec),
        "area" => run_area_bounds(&SampleSpec { steps: 30, ..spec }),
        "ratiolimit" => run_ratio_limit(&spec),
        "cauchy" => run_cauchy_bound(&spec),
        "angleratio" => run_angle_ratio(&spec),
        "noncontraction" => run_noncontraction(),
        "eq1probe" => run_eq1_probe(&spec),
        "continuity" => {
            let base = ShapeRecord::from_edges(1.0, 1.0, 1.0).expect("literal");
            run_continuity(
                &m,
                &base,
                &ContinuitySpec {
                    seed,
                    ..Default::default()
                },
            )
        }
        "surjectivity" => run_surjectivity(&m, &SurjectivitySpec::default()),
        _ => return None,
    })
}
