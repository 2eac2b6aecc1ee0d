//! Infinite words over `{A, B, C, M}` and their addresses.
//!
//! An eventually periodic word `prefix cycle cycle ...` picks out a nested
//! sequence of subdivision cells of a reference Euclidean triangle; the cells
//! shrink to a single point, its address. Addresses are computed exactly in
//! barycentric coordinates with rational arithmetic, since each letter acts as
//! a dyadic affine map.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subdivision::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolSequence {
    prefix: Vec<Letter>,
    cycle: Vec<Letter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rationality {
    Rational,
    Irrational,
}

/// Exact barycentric coordinates in the reference triangle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bary(pub [BigRational; 3]);

/// `q -> scale * q + shift` on barycentric coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub scale: BigRational,
    pub shift: [BigRational; 3],
}

/// Diameter of the reference simplex in barycentric coordinates.
pub const REFERENCE_DIAMETER: f64 = std::f64::consts::SQRT_2;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl SymbolSequence {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Parse("cycle must be nonempty".into()));
        }
        let mut s = SymbolSequence { prefix, cycle };
        s.canonicalize();
        Ok(s)
    }

    /// Parse `PREFIX|CYCLE`; `‖` is accepted as the separator too.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim().replace('‖', "|");
        let (p, c) = text
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("expected PREFIX|CYCLE, got {text:?}")))?;
        let letters = |w: &str| -> Result<Vec<Letter>> {
            w.chars()
                .map(|ch| {
                    Letter::from_char(ch)
                        .ok_or_else(|| Error::Parse(format!("bad letter {ch:?} in {text:?}")))
                })
                .collect()
        };
        Self::new(letters(p)?, letters(c)?)
    }

    fn canonicalize(&mut self) {
        let n = self.cycle.len();
        if let Some(p) = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.cycle[i] == self.cycle[i - p]))
        {
            self.cycle.truncate(p);
        }
        while self.prefix.last().is_some() && self.prefix.last() == self.cycle.last() {
            self.prefix.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    pub fn letter_at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The infinite letter stream.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.prefix
            .iter()
            .copied()
            .chain(self.cycle.iter().copied().cycle())
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let map = |w: &[Letter]| w.iter().map(|l| l.permuted(perm)).collect();
        Self::new(map(&self.prefix), map(&self.cycle)).expect("nonempty cycle")
    }

    pub fn classify(&self) -> Rationality {
        let corners: BTreeSet<Letter> = self
            .cycle
            .iter()
            .copied()
            .filter(|&l| l != Letter::M)
            .collect();
        if corners.len() == 1 {
            Rationality::Rational
        } else {
            Rationality::Irrational
        }
    }
}

impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            write!(f, "{l}")?;
        }
        write!(f, "|")?;
        for l in &self.cycle {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Bary {
    pub fn centroid() -> Self {
        Bary([ratio(1, 3), ratio(1, 3), ratio(1, 3)])
    }

    pub fn vertex(slot: usize) -> Self {
        let mut v = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        v[slot] = BigRational::one();
        Bary(v)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.0[i].to_f64().unwrap_or(f64::NAN))
    }

    /// Coordinates as `p/q` strings, integers as plain `p`.
    pub fn to_fraction_strings(&self) -> [String; 3] {
        [0, 1, 2].map(|i| self.0[i].to_string())
    }
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            scale: BigRational::one(),
            shift: [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        }
    }

    pub fn apply(&self, q: &Bary) -> Bary {
        Bary([0, 1, 2].map(|i| &self.scale * &q.0[i] + &self.shift[i]))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            scale: &self.scale * &inner.scale,
            shift: [0, 1, 2].map(|i| &self.scale * &inner.shift[i] + &self.shift[i]),
        }
    }

    /// Unique fixed point of a strict contraction.
    pub fn fixed_point(&self) -> Bary {
        let denom = BigRational::one() - &self.scale;
        assert!(!denom.is_zero(), "identity map has no unique fixed point");
        Bary([0, 1, 2].map(|i| &self.shift[i] / &denom))
    }
}

/// The dyadic affine action of a letter on the reference triangle.
pub fn letter_map(letter: Letter) -> AffineMap {
    let half = ratio(1, 2);
    let zero = BigRational::zero;
    match letter {
        Letter::M => AffineMap {
            scale: -half.clone(),
            shift: [half.clone(), half.clone(), half],
        },
        corner => {
            let mut shift = [zero(), zero(), zero()];
            shift[corner.slot().expect("corner letter")] = half.clone();
            AffineMap { scale: half, shift }
        }
    }
}

fn letter_map_f64(letter: Letter, p: [f64; 3]) -> [f64; 3] {
    match letter.slot() {
        None => p.map(|x| (1.0 - x) / 2.0),
        Some(k) => {
            let mut q = p.map(|x| x / 2.0);
            q[k] += 0.5;
            q
        }
    }
}

fn compose_word(word: &[Letter]) -> AffineMap {
    word.iter()
        .fold(AffineMap::identity(), |acc, &l| acc.compose(&letter_map(l)))
}

pub fn address_exact(s: &SymbolSequence) -> Bary {
    let q = compose_word(&s.cycle).fixed_point();
    compose_word(&s.prefix).apply(&q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxAddress {
    pub point: [f64; 3],
    pub error_bound: f64,
}

/// Image of the centroid under the first `depth` letters.
pub fn address_approx(s: &SymbolSequence, depth: usize) -> ApproxAddress {
    let word: Vec<Letter> = s.letters().take(depth).collect();
    let point = word
        .iter()
        .rev()
        .fold([1.0 / 3.0; 3], |p, &l| letter_map_f64(l, p));
    ApproxAddress {
        point,
        error_bound: REFERENCE_DIAMETER * 0.5f64.powi(depth as i32),
    }
}

/// Whether `point` lies in the cell named by `word` (up to `tol`).
pub fn cell_contains(word: &[Letter], point: [f64; 3], tol: f64) -> bool {
    // pull the point back through the word's maps
    let mut p = point;
    for &l in word {
        p = match l.slot() {
            None => p.map(|x| 1.0 - 2.0 * x),
            Some(k) => {
                let mut q = p.map(|x| 2.0 * x);
                q[k] -= 1.0;
                q
            }
        };
    }
    let scale = 2f64.powi(word.len() as i32);
    p.iter().all(|&x| x >= -tol * scale)
}

pub fn equivalent(s: &SymbolSequence, t: &SymbolSequence) -> bool {
    address_exact(s) == address_exact(t)
}

/// Witness that two words fit the six paired tail patterns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop31Witness {
    /// Length of the shared prefix `tau`.
    pub n: usize,
    /// Images of `A`, `B`, `C` under the permutation `sigma`.
    pub sigma: [char; 3],
    /// The `x`/`y` word `zeta`.
    pub zeta: String,
    pub form_s: u8,
    pub form_t: u8,
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub const DEFAULT_HORIZON: usize = 64;

/// Build form `form` (1..=6) from `tau`, `sigma` and `zeta` (true = `x`).
fn build_form(form: u8, tau: &[Letter], sigma: [Letter; 3], zeta: &[bool]) -> SymbolSequence {
    let [sa, sb, sc] = sigma;
    let alpha_form = form <= 3;
    let mut prefix = tau.to_vec();
    prefix.push(if alpha_form { sa } else { Letter::M });
    for &x in zeta {
        prefix.push(match (alpha_form, x) {
            (true, true) | (false, false) => sb,
            _ => sc,
        });
    }
    let (head, tail) = match (form - 1) % 3 {
        0 => (Letter::M, sa),
        1 => (sb, sc),
        _ => (sc, sb),
    };
    prefix.push(head);
    SymbolSequence::new(prefix, vec![tail]).expect("nonempty cycle")
}

/// Search for a witness placing `s` and `t` among the six paired forms.
pub fn match_prop31(
    s: &SymbolSequence,
    t: &SymbolSequence,
    horizon: usize,
) -> Option<Prop31Witness> {
    // in every form the canonical prefix is tau, one letter, zeta, one letter
    let len = s.prefix.len();
    if s == t || s.cycle.len() != 1 || t.cycle.len() != 1 || len < 2 || t.prefix.len() != len {
        return None;
    }
    for n in 0..=(len - 2).min(horizon) {
        if s.prefix[..n] != t.prefix[..n] {
            break;
        }
        let m = len - n - 2;
        if m > horizon {
            continue;
        }
        let tau = &s.prefix[..n];
        for perm in PERMUTATIONS {
            let sigma = perm.map(Letter::from_slot);
            for form_s in 1..=6u8 {
                let alpha_form = form_s <= 3;
                let x_letter = if alpha_form { sigma[1] } else { sigma[2] };
                let y_letter = if alpha_form { sigma[2] } else { sigma[1] };
                let middle = &s.prefix[n + 1..n + 1 + m];
                if !middle.iter().all(|&l| l == x_letter || l == y_letter) {
                    continue;
                }
                let zeta: Vec<bool> = middle.iter().map(|&l| l == x_letter).collect();
                if build_form(form_s, tau, sigma, &zeta) != *s {
                    continue;
                }
                for form_t in (1..=6u8).filter(|&f| f != form_s) {
                    if build_form(form_t, tau, sigma, &zeta) == *t {
                        return Some(Prop31Witness {
                            n,
                            sigma: sigma.map(Letter::as_char),
                            zeta: zeta.iter().map(|&x| if x { 'x' } else { 'y' }).collect(),
                            form_s,
                            form_t,
                        });
                    }
                }
            }
        }
    }
    None
}

fn all_words(len: usize) -> Vec<Vec<Letter>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                Letter::ALL.into_iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect()
    })
}

/// All distinct canonical sequences with `|prefix| <= max_prefix` and
/// `1 <= |cycle| <= max_cycle`, in sorted order.
pub fn enumerate_sequences(max_prefix: usize, max_cycle: usize) -> Vec<SymbolSequence> {
    let mut out = BTreeSet::new();
    for p in 0..=max_prefix {
        for prefix in all_words(p) {
            for c in 1..=max_cycle {
                for cycle in all_words(c) {
                    out.insert(SymbolSequence::new(prefix.clone(), cycle).expect("nonempty"));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Whether two words address the same interior midline point via the
/// pattern `tau sigma(A) w ...` versus `tau M w' ...`, with `w` an infinite
/// word over `{sigma(B), sigma(C)}` and `w'` its letter swap.
pub fn is_midline_pair(s: &SymbolSequence, t: &SymbolSequence) -> bool {
    // both words are periodic with this period past this index
    let start = s.prefix.len().max(t.prefix.len());
    let period = s.cycle.len() * t.cycle.len();
    let limit = start + period;
    let common = (0..limit)
        .take_while(|&i| s.letter_at(i) == t.letter_at(i))
        .count();
    if common == limit {
        return false;
    }
    let (corner_word, medial_word) = match (s.letter_at(common), t.letter_at(common)) {
        (x, Letter::M) if x != Letter::M => (s, t),
        (Letter::M, x) if x != Letter::M => (t, s),
        _ => return false,
    };
    let corner = corner_word.letter_at(common);
    let [p, q] = match corner {
        Letter::A => [Letter::B, Letter::C],
        Letter::B => [Letter::A, Letter::C],
        _ => [Letter::A, Letter::B],
    };
    (common + 1..common + 1 + limit).all(|i| {
        let (u, v) = (corner_word.letter_at(i), medial_word.letter_at(i));
        (u == p && v == q) || (u == q && v == p)
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MultiplicityCensus {
    pub sequences: usize,
    pub equivalent_pairs: usize,
    pub matched_pairs: usize,
    pub unsound_matches: usize,
    pub unmatched_rational_pairs: usize,
    pub irrational_pairs: usize,
    pub irrational_midline_pairs: usize,
    pub examples_unmatched: Vec<(String, String)>,
}

/// Compare exact address equality with the six-form matcher over every
/// pair of enumerated sequences.
pub fn multiplicity_census(
    max_prefix: usize,
    max_cycle: usize,
    horizon: usize,
) -> MultiplicityCensus {
    let seqs = enumerate_sequences(max_prefix, max_cycle);
    let addrs: Vec<Bary> = seqs.iter().map(address_exact).collect();
    let mut c = MultiplicityCensus {
        sequences: seqs.len(),
        ..Default::default()
    };
    for i in 0..seqs.len() {
        for j in i + 1..seqs.len() {
            let eq = addrs[i] == addrs[j];
            let matched = match_prop31(&seqs[i], &seqs[j], horizon).is_some();
            if matched {
                c.matched_pairs += 1;
                if !eq {
                    c.unsound_matches += 1;
                }
            }
            if !eq {
                continue;
            }
            c.equivalent_pairs += 1;
            let rational = seqs[i].classify() == Rationality::Rational
                && seqs[j].classify() == Rationality::Rational;
            if rational {
                if !matched {
                    c.unmatched_rational_pairs += 1;
                    if c.examples_unmatched.len() < 8 {
                        c.examples_unmatched
                            .push((seqs[i].to_string(), seqs[j].to_string()));
                    }
                }
            } else {
                c.irrational_pairs += 1;
                if is_midline_pair(&seqs[i], &seqs[j]) {
                    c.irrational_midline_pairs += 1;
                }
            }
        }
    }
    c
}
